import random
from fractions import Fraction

import pytest

from diracspace.poly import Context, Poly
from diracspace.calculus import (Form, VField, contract, deRham,
                                 poincare_primitive)
from diracspace.courant import SectionEp
from diracspace.linfty import (GradedElem, ObservablesFamily,
                               TwistedSectionsFamily, check_prequantization,
                               check_prequantum_morphism, check_relation,
                               check_strict_morphism, gauge_map,
                               koszul_sign, lambda_scale_map, unshuffles)
from diracspace.presentations import GraphForm, HamiltonianDatum
from diracspace.sampling import (random_closed_form, random_form,
                                 random_poly, random_symmetry_vfield,
                                 random_vfield)

rng = random.Random(707)

ctx2 = Context(2)
ctx3 = Context(3)
ctx4 = Context(4)
vol3 = Form(ctx3, 3, {(1, 2, 3): Poly.constant(ctx3, 1)})
vol4 = Form(ctx4, 4, {(1, 2, 3, 4): Poly.constant(ctx4, 1)})


def rand_obs_elem(F, max_deg=1):
    P = F.P
    if P.p > 1 and rng.random() < 0.35:
        k = rng.randrange(1, P.p)
        return F.form(-k, random_form(rng, P.ctx, P.p - 1 - k,
                                      max_deg=max_deg))
    if all(c.is_constant() for c in P.omega.comps.values()):
        return F.element(random_form(rng, P.ctx, P.p - 1, max_deg=max_deg))
    X = random_symmetry_vfield(rng, P.omega, 1)
    beta = -contract(X, P.omega)
    alpha = (poincare_primitive(beta) if not beta.is_zero()
             else Form.zero(P.ctx, P.p - 1))
    alpha = alpha + random_closed_form(rng, P.ctx, P.p - 1)
    return GradedElem(0, HamiltonianDatum(P, alpha, X))


def rand_getz_elem(F, max_deg=1):
    if F.r > 1 and rng.random() < 0.35:
        k = rng.randrange(1, F.r)
        return F.form(-k, random_form(rng, F.ctx, F.r - 1 - k,
                                      max_deg=max_deg))
    return F.section(random_vfield(rng, F.ctx, max_deg=max_deg),
                     random_form(rng, F.ctx, F.r - 1, max_deg=max_deg))


def test_unshuffles_and_koszul_signs():
    sh = list(unshuffles(2, 4))
    assert len(sh) == 6
    assert all(s[0] < s[1] and s[2] < s[3] for s in sh)
    # a transposition of two odd entries is free; of two evens costs -1
    assert koszul_sign((1, 0), [1, 1]) == 1
    assert koszul_sign((1, 0), [0, 0]) == -1
    assert koszul_sign((1, 0), [0, 1]) == -1


def test_observables_relations_constant_omega():
    for name, P in [("p=1", GraphForm(2, 1, Form.basis(ctx2, (1, 2)))),
                    ("p=2", GraphForm(3, 2, vol3))]:
        F = ObservablesFamily(P)
        for n in range(1, P.p + 3):
            for _ in range(5):
                elems = [rand_obs_elem(F) for _ in range(n)]
                assert check_relation(F, elems).is_zero(), (name, n)


def test_observables_relations_polynomial_omega():
    w = vol3 + Form(ctx3, 3, {(1, 2, 3): Poly.variable(ctx3, 1)})
    F = ObservablesFamily(GraphForm(3, 2, w))
    for n in range(1, 5):
        for _ in range(4):
            elems = [rand_obs_elem(F) for _ in range(n)]
            assert check_relation(F, elems).is_zero()


def test_getzler_relations():
    for r, ctx, H in [
            (2, ctx3, None),
            (2, ctx3, Form(ctx3, 3, {(1, 2, 3): random_poly(rng, ctx3, 2)})),
            (3, ctx4, None),
            (3, ctx4, Form(ctx4, 4,
                           {(1, 2, 3, 4): random_poly(rng, ctx4, 1)}))]:
        F = TwistedSectionsFamily(r, ctx, H)
        for n in range(1, r + 3):
            for _ in range(4):
                elems = [rand_getz_elem(F) for _ in range(n)]
                assert check_relation(F, elems).is_zero(), (r, n)


def test_nonclosed_twist_breaks_relations():
    Hbad = Form(ctx4, 3, {(1, 2, 3): Poly.variable(ctx4, 4)})
    with pytest.raises(ValueError):
        TwistedSectionsFamily(2, ctx4, Hbad)
    F = TwistedSectionsFamily(2, ctx4, Hbad, allow_nonclosed=True)
    broke = 0
    for n in (2, 3):
        for _ in range(10):
            elems = [rand_getz_elem(F) for _ in range(n)]
            if not check_relation(F, elems).is_zero():
                broke += 1
    assert broke > 0


def test_binary_bracket_is_twisted_courant():
    from diracspace.courant import courant
    H = Form(ctx3, 3, {(1, 2, 3): random_poly(rng, ctx3, 1)})
    F = TwistedSectionsFamily(2, ctx3, H)
    for _ in range(5):
        e1 = rand_getz_elem(F)
        e2 = rand_getz_elem(F)
        if e1.degree != 0 or e2.degree != 0:
            continue
        got = F.l([e1, e2])
        assert got.payload == courant(e1.payload, e2.payload, H)


def _rand_e0():
    return SectionEp(0, random_vfield(rng, ctx3, max_deg=1),
                     Form.from_poly(random_poly(rng, ctx3, max_deg=2)))


def test_prequantum_morphism_closed_sigma():
    for sigma in (Form(ctx3, 2, {(1, 2): Poly.constant(ctx3, 1)}),
                  random_closed_form(rng, ctx3, 2)):
        pairs = [(_rand_e0(), _rand_e0()) for _ in range(8)]
        triples = [tuple(_rand_e0() for _ in range(3)) for _ in range(8)]
        rep = check_prequantum_morphism(sigma, pairs, triples)
        assert rep["status"] == "pass", rep


def test_prequantum_morphism_nonclosed_residual_is_dsigma():
    sigma = Form(ctx3, 2, {(1, 2): Poly.variable(ctx3, 3)})
    triples = [tuple(_rand_e0() for _ in range(3)) for _ in range(6)]
    rep = check_prequantum_morphism(sigma, [], triples)
    residuals = rep["jacobiator_defect"]["residuals"]
    assert residuals
    assert all(r["equals_dsigma(X,Y,Z)"] for r in residuals)


def test_prequantization_identity():
    P = GraphForm(2, 1, Form.basis(ctx2, (1, 2)))
    pairs = [(Form.from_poly(random_poly(rng, ctx2, max_deg=3)),
              Form.from_poly(random_poly(rng, ctx2, max_deg=3)))
             for _ in range(10)]
    assert check_prequantization(P, pairs) == []


def test_lambda_scale_strict_morphism():
    lam = Fraction(2)
    Pa = GraphForm(3, 2, vol3)
    Pb = GraphForm(3, 2, vol3 * lam)
    Fa, Fb = ObservablesFamily(Pa), ObservablesFamily(Pb)
    tuples = [[rand_obs_elem(Fa) for _ in range(n)]
              for n in range(1, 4) for _ in range(5)]
    assert check_strict_morphism(Fa, Fb, lambda_scale_map(lam, Pb),
                                 tuples) == []


def test_gauge_strict_morphism():
    H = Form(ctx3, 3, {(1, 2, 3): random_poly(rng, ctx3, 1)})
    B = random_form(rng, ctx3, 2, max_deg=2)
    F1 = TwistedSectionsFamily(2, ctx3, H)
    F2 = TwistedSectionsFamily(2, ctx3, H + deRham(B))
    tuples = [[rand_getz_elem(F1) for _ in range(n)]
              for n in range(1, 4) for _ in range(5)]
    assert check_strict_morphism(F1, F2, gauge_map(B), tuples) == []


def test_unary_is_de_rham():
    F = TwistedSectionsFamily(3, ctx4, None)
    xi = random_form(rng, ctx4, 1, max_deg=1)
    got = F.l([F.form(-1, xi)])
    assert got.degree == 0
    assert got.payload == SectionEp(2, VField.zero(ctx4), deRham(xi))
