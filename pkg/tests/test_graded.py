import random
from fractions import Fraction

import pytest

from diracspace.poly import Context, Poly
from diracspace.calculus import Form, deRham
from diracspace.courant import SectionEp
from diracspace.graded import (GPoly, decode, derived_check, encode_element,
                               encode_form, encode_section, encode_vfield,
                               gbracket, oracle_compare, oracle_multibracket,
                               s_poly)
from diracspace.linfty import TwistedSectionsFamily
from diracspace.sampling import random_form, random_poly, random_vfield

rng = random.Random(808)

ctx3 = Context(3)
ctx4 = Context(4)


def rand_gpoly(r, ctx, nterms=3):
    """Homogeneous random element: a word times a polynomial."""
    kinds = [("v", i) for i in range(ctx.dim)] + \
        [("p", i) for i in range(ctx.dim)] + \
        [("P", i) for i in range(ctx.dim)]
    out = GPoly.zero(r, ctx)
    word = tuple(sorted(rng.sample(kinds, rng.randint(0, 2))))
    for _ in range(nterms):
        e = tuple(rng.randint(0, 1) for _ in range(ctx.dim))
        c = Fraction(rng.randint(-3, 3))
        out = out + GPoly(r, ctx, {(e, word): c})
    return out


def _degree(g):
    return g.degree()


def test_gbracket_graded_antisymmetry():
    for r in (2, 3):
        for _ in range(12):
            a, b = rand_gpoly(r, ctx3), rand_gpoly(r, ctx3)
            da, db = a.degree(), b.degree()
            if da is None or db is None:
                continue
            sgn = -1 if ((da - r) * (db - r)) % 2 else 1
            assert gbracket(a, b) + sgn * gbracket(b, a) == \
                GPoly.zero(r, ctx3)


def test_gbracket_graded_jacobi():
    for r in (2, 3):
        for _ in range(8):
            a, b, c = (rand_gpoly(r, ctx3, 2) for _ in range(3))
            da, db = a.degree(), b.degree()
            if da is None or db is None:
                continue
            sgn = -1 if ((da - r) * (db - r)) % 2 else 1
            lhs = gbracket(a, gbracket(b, c))
            rhs = gbracket(gbracket(a, b), c) + sgn * gbracket(
                b, gbracket(a, c))
            assert lhs == rhs


def test_generator_squares_to_zero():
    for r, ctx in ((2, ctx3), (3, ctx4)):
        S = s_poly(r, ctx)
        assert gbracket(S, S).is_zero()


def test_bracket_with_generator_is_de_rham():
    for r, ctx in ((2, ctx3), (3, ctx4)):
        S = s_poly(r, ctx)
        for k in range(0, r):
            xi = random_form(rng, ctx, k, max_deg=1)
            assert gbracket(S, encode_form(r, xi)) == \
                encode_form(r, deRham(xi))


def test_decode_inverts_encodings():
    for r, ctx in ((2, ctx3), (3, ctx4)):
        for _ in range(30):
            k = rng.randrange(0, r)
            xi = random_form(rng, ctx, k, max_deg=1)
            assert decode(encode_form(r, xi), p=k) == xi
            X = random_vfield(rng, ctx, 1)
            if not X.is_zero():
                assert decode(encode_vfield(r, X)) == X
            e = SectionEp(r - 1, X, random_form(rng, ctx, r - 1, max_deg=1))
            assert decode(encode_section(r, e), p=r - 1, section=True) == e


def test_decode_rejects_generator_words():
    g = s_poly(2, ctx3)
    with pytest.raises(ValueError):
        decode(g)


def test_derived_check_untwisted_and_twisted():
    rep = derived_check(2, ctx3, random.Random(1), None, samples=3)
    assert rep["status"] == "pass"
    assert rep["pipeline"] == "derived-bracket"
    assert rep["master_equation"] and rep["twist_closed"]
    H = Form(ctx3, 3, {(1, 2, 3): random_poly(rng, ctx3, 1)})
    rep = derived_check(2, ctx3, random.Random(2), H, samples=2)
    assert rep["status"] == "pass" and rep["twist_closed"]


def test_derived_check_detects_nonclosed_twist():
    Hnc = Form(ctx4, 3, {(1, 2, 3): Poly.variable(ctx4, 4)})
    rep = derived_check(2, ctx4, random.Random(3), Hnc, samples=2)
    assert rep["status"] == "pass"
    assert rep["master_equation"]
    assert not rep["twist_closed"]
    assert rep["master_zero_iff_closed"]


def test_multibracket_arity_cap():
    elems = [(GPoly.zero(2, ctx3), 1)] * 6
    with pytest.raises(ValueError):
        oracle_multibracket(2, ctx3, elems)


def _rand_elem(F, kind):
    if kind == 0:
        return F.section(random_vfield(rng, F.ctx, 1),
                         random_form(rng, F.ctx, F.r - 1, max_deg=1))
    return F.form(-kind, random_form(rng, F.ctx, F.r - 1 - kind, max_deg=1))


def test_oracle_matches_direct_brackets():
    for r, ctx, H in [
            (2, ctx3, None),
            (2, ctx3, Form(ctx3, 3, {(1, 2, 3): random_poly(rng, ctx3, 1)})),
            (3, ctx4, None)]:
        F = TwistedSectionsFamily(r, ctx, H)
        for n in (2, 3):
            tuples = []
            for t in range(3):
                kinds = [0] * n
                if t % 2 and r > 1:
                    kinds[rng.randrange(n)] = rng.randrange(1, r)
                tuples.append([_rand_elem(F, k) for k in kinds])
            assert oracle_compare(F, tuples) == []


def test_oracle_matches_direct_arity5():
    F = TwistedSectionsFamily(4, ctx4, None)
    tuples = [[_rand_elem(F, 0) for _ in range(5)]]
    assert oracle_compare(F, tuples) == []


def test_encode_element_zero_needs_context():
    from diracspace.linfty import GradedElem
    with pytest.raises(ValueError):
        encode_element(2, GradedElem.zero())
    g, k = encode_element(2, GradedElem.zero(), ctx3)
    assert g.is_zero() and k == 1
