import random
from fractions import Fraction

import pytest

from diracspace.poly import Context, Poly
from diracspace.calculus import Form, MultiVec, VField
from diracspace.courant import SectionEp
from diracspace.parser import ParseError, parse_expression, print_expression
from diracspace.sampling import (random_form, random_multivec, random_poly,
                                 random_vfield)

rng = random.Random(909)


def roundtrip(obj, ctx, p=None):
    s = print_expression(obj)
    v1, _ = parse_expression(s, ctx, p)
    assert v1 == obj, f"{s!r} -> {print_expression(v1)!r}"
    s2 = print_expression(v1)
    v2, _ = parse_expression(s2, ctx, p)
    assert print_expression(v2) == s2


def test_poly_roundtrip_1000():
    for _ in range(1000):
        ctx = Context(rng.randint(1, 4))
        roundtrip(random_poly(rng, ctx, rng.randint(0, 3)), ctx)


def test_form_roundtrip_1000():
    count = 0
    while count < 1000:
        ctx = Context(rng.randint(2, 4))
        k = rng.randint(1, ctx.dim)
        f = random_form(rng, ctx, k, max_deg=2)
        if f.is_zero():
            continue
        roundtrip(f, ctx)
        count += 1


def test_vfield_roundtrip_1000():
    count = 0
    while count < 1000:
        ctx = Context(rng.randint(2, 4))
        X = random_vfield(rng, ctx, max_deg=2)
        if X.is_zero():
            continue
        roundtrip(X, ctx)
        count += 1


def test_multivec_roundtrip_1000():
    count = 0
    while count < 1000:
        ctx = Context(rng.randint(2, 4))
        q = rng.randint(2, ctx.dim)
        Y = random_multivec(rng, ctx, q, max_deg=1)
        if Y.is_zero():
            continue
        roundtrip(Y, ctx)
        count += 1


def test_section_roundtrip_1000():
    for _ in range(1000):
        ctx = Context(rng.randint(2, 4))
        p = rng.randint(0, ctx.dim - 1)
        e = SectionEp(p, random_vfield(rng, ctx, max_deg=1),
                      random_form(rng, ctx, p, max_deg=1))
        roundtrip(e, ctx, p)


def test_nilpotent_square_warns_and_normalizes():
    ctx = Context(3)
    v, warnings = parse_expression("dx1^dx1", ctx)
    assert isinstance(v, Poly) or v.is_zero()
    assert warnings and "dx1" in warnings[0]


def test_wedge_antisymmetry_cancellation():
    ctx = Context(3)
    v, _ = parse_expression("dx2^dx1 + dx1^dx2", ctx)
    assert v.is_zero()


def test_power_binds_tighter_than_unary_minus():
    ctx = Context(2)
    v, _ = parse_expression("-x1^2", ctx)
    assert v == Fraction(-1) * Poly.variable(ctx, 1) * Poly.variable(ctx, 1)


def test_braced_indices_and_rationals():
    ctx = Context(12)
    v, _ = parse_expression("3/2*x{10}*dx{11}^dx{12}", ctx)
    assert isinstance(v, Form) and v.degree == 2


def test_section_classification():
    ctx = Context(3)
    v, _ = parse_expression("Dx1 + x2*dx1^dx3", ctx, p=2)
    assert isinstance(v, SectionEp) and v.p == 2
    v, _ = parse_expression("0", ctx, p=2)
    assert isinstance(v, SectionEp) and v.is_zero()


def test_whitespace_insensitive():
    ctx = Context(3)
    a, _ = parse_expression("x1*dx1 + 2*dx2", ctx)
    b, _ = parse_expression("  x1 * dx1+2* dx2 ", ctx)
    assert a == b


def test_errors_carry_position():
    ctx = Context(3)
    cases = ["x1 +", "dx1^Dx2", "dx1 + dx1^dx2", "(x1", "x1 $", "x4",
             "dx9", "x1 x2"]
    for src in cases:
        with pytest.raises(ParseError) as exc:
            parse_expression(src, ctx)
        assert exc.value.line >= 1 and exc.value.col >= 1


def test_error_column_points_at_problem():
    ctx = Context(3)
    with pytest.raises(ParseError) as exc:
        parse_expression("x1 $", ctx)
    assert exc.value.col == 4
