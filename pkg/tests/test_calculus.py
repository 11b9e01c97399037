import random

from diracspace.poly import Context, Poly
from diracspace.calculus import (Form, MultiVec, VField, contract, deRham,
                                 iota_form, lie_bracket, lie_derivative,
                                 lie_derivative_direct, mv_wedge,
                                 poincare_primitive, schouten, wedge)
from diracspace.sampling import (random_closed_form, random_form,
                                 random_multivec, random_poly, random_vfield)

rng = random.Random(202)


def test_wedge_graded_commutative_and_associative():
    ctx = Context(4)
    for _ in range(20):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        a = random_form(rng, ctx, p)
        b = random_form(rng, ctx, q)
        c = random_form(rng, ctx, 1)
        sgn = -1 if (p * q) % 2 else 1
        assert wedge(a, b) == sgn * wedge(b, a)
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_deRham_squares_to_zero_and_leibniz():
    ctx = Context(4)
    for _ in range(20):
        p = rng.randint(0, 2)
        a = random_form(rng, ctx, p, max_deg=2)
        b = random_form(rng, ctx, 1, max_deg=2)
        assert deRham(deRham(a)).is_zero()
        sgn = -1 if p % 2 else 1
        assert deRham(wedge(a, b)) == \
            wedge(deRham(a), b) + sgn * wedge(a, deRham(b))


def test_contract_antiderivation():
    ctx = Context(4)
    for _ in range(20):
        X = random_vfield(rng, ctx)
        p = rng.randint(1, 2)
        a = random_form(rng, ctx, p)
        b = random_form(rng, ctx, 2)
        sgn = -1 if p % 2 else 1
        assert contract(X, wedge(a, b)) == \
            wedge(contract(X, a), b) + sgn * wedge(a, contract(X, b))
        # i_X i_X = 0
        if p == 2:
            assert contract(X, contract(X, a)).is_zero()


def test_cartan_magic_formula():
    ctx = Context(3)
    for _ in range(20):
        X = random_vfield(rng, ctx, max_deg=2)
        a = random_form(rng, ctx, rng.randint(0, 2), max_deg=2)
        assert lie_derivative(X, a) == \
            contract(X, deRham(a)) + deRham(contract(X, a))
        assert lie_derivative(X, a) == lie_derivative_direct(X, a)


def test_lie_bracket_via_derivative():
    ctx = Context(3)
    for _ in range(15):
        X = random_vfield(rng, ctx, max_deg=2)
        Y = random_vfield(rng, ctx, max_deg=2)
        a = random_form(rng, ctx, 1, max_deg=2)
        lhs = lie_derivative(lie_bracket(X, Y), a)
        rhs = lie_derivative(X, lie_derivative(Y, a)) \
            - lie_derivative(Y, lie_derivative(X, a))
        assert lhs == rhs


def test_schouten_properties():
    ctx = Context(4)
    for _ in range(10):
        p, q, r = (rng.randint(1, 3) for _ in range(3))
        P = random_multivec(rng, ctx, p)
        Q = random_multivec(rng, ctx, q)
        R = random_multivec(rng, ctx, r)
        assert (schouten(P, Q)
                + (-1) ** ((p - 1) * (q - 1)) * schouten(Q, P)).is_zero()
        assert schouten(P, mv_wedge(Q, R)) == \
            mv_wedge(schouten(P, Q), R) \
            + (-1) ** ((p - 1) * q) * mv_wedge(Q, schouten(P, R))
        jac = schouten(P, schouten(Q, R)) - schouten(schouten(P, Q), R) \
            - (-1) ** ((p - 1) * (q - 1)) * schouten(Q, schouten(P, R))
        assert jac.is_zero()


def test_schouten_vfield_is_lie_derivative():
    ctx = Context(3)
    for _ in range(10):
        X = random_vfield(rng, ctx)
        P = random_multivec(rng, ctx, 2)
        a = random_form(rng, ctx, 2)
        lhs = contract(schouten(X.to_multivec(), P), a)
        rhs = lie_derivative(X, contract(P, a)) \
            - contract(P, lie_derivative(X, a))
        assert lhs == rhs


def test_iota_form_pairs_first_slots():
    ctx = Context(3)
    for _ in range(10):
        a = random_form(rng, ctx, 1)
        X1, X2 = random_vfield(rng, ctx), random_vfield(rng, ctx)
        dec = mv_wedge(X1.to_multivec(), X2.to_multivec())
        # a 1-form eats the first slot of a decomposable bivector
        want = contract(X1, a).to_poly() * X2.to_multivec() \
            - contract(X2, a).to_poly() * X1.to_multivec()
        assert iota_form(a, dec) == want
        assert iota_form(a, dec).degree == 1


def test_poincare_primitive_inverts_d():
    ctx = Context(3)
    for _ in range(15):
        k = rng.randint(1, 3)
        a = random_closed_form(rng, ctx, k)
        assert deRham(poincare_primitive(a)) == a


def test_vfield_multivec_roundtrip():
    ctx = Context(3)
    for _ in range(10):
        X = random_vfield(rng, ctx, max_deg=2)
        assert X.to_multivec().to_vfield() == X


def test_form_zero_degree_matches_poly():
    ctx = Context(2)
    f = random_poly(rng, ctx, 2)
    a = Form.from_poly(f)
    assert a.degree == 0
    assert a.to_poly() == f
