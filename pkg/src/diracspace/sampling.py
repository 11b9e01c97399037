"""Seeded random generators for property checks.

Polynomial coefficients have total degree <= 2 and integer numerators in
[-9, 9]; every suite threads an explicit random.Random so reports are
reproducible.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .calculus import Form, MultiVec, VField, deRham
from .poly import Context, Poly


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3]))


def random_poly(rng: random.Random, ctx: Context, max_deg: int = 2,
                n_terms: int = 2) -> Poly:
    exps = [
        e for e in itertools.product(range(max_deg + 1), repeat=ctx.dim)
        if sum(e) <= max_deg
    ]
    terms: dict = {}
    for _ in range(n_terms):
        e = rng.choice(exps)
        terms[e] = terms.get(e, Fraction(0)) + random_rational(rng)
    return Poly(ctx, terms)


def random_form(rng: random.Random, ctx: Context, degree: int,
                max_deg: int = 2) -> Form:
    if degree < 0 or degree > ctx.dim:
        return Form.zero(ctx, degree)
    comps = {
        idx: random_poly(rng, ctx, max_deg, n_terms=1)
        for idx in itertools.combinations(ctx.axes(), degree)
    }
    return Form(ctx, degree, comps)


def random_constant_form(rng: random.Random, ctx: Context, degree: int) -> Form:
    if degree < 0 or degree > ctx.dim:
        return Form.zero(ctx, degree)
    comps = {
        idx: Poly.constant(ctx, random_rational(rng))
        for idx in itertools.combinations(ctx.axes(), degree)
    }
    return Form(ctx, degree, comps)


def random_closed_form(rng: random.Random, ctx: Context, degree: int) -> Form:
    """Exact part plus a constant form; closed by construction."""
    out = random_constant_form(rng, ctx, degree)
    if 1 <= degree <= ctx.dim:
        out = out + deRham(random_form(rng, ctx, degree - 1))
    return out


def random_vfield(rng: random.Random, ctx: Context, max_deg: int = 2) -> VField:
    return VField(ctx, {i: random_poly(rng, ctx, max_deg, n_terms=1)
                        for i in ctx.axes()})


def random_multivec(rng: random.Random, ctx: Context, degree: int,
                    max_deg: int = 2) -> MultiVec:
    if degree < 0 or degree > ctx.dim:
        return MultiVec.zero(ctx, degree)
    comps = {
        idx: random_poly(rng, ctx, max_deg, n_terms=1)
        for idx in itertools.combinations(ctx.axes(), degree)
    }
    return MultiVec(ctx, degree, comps)


def random_symmetry_vfield(rng: random.Random, omega: Form,
                           max_deg: int = 1) -> VField:
    """A random polynomial vector field with L_X omega = 0.

    Solves the linear constraint on coefficients of total degree
    <= max_deg; with closed omega these X admit Hamiltonian potentials.
    """
    from .linalg import kernel_basis
    from .calculus import lie_derivative

    ctx = omega.ctx
    monos = [e for e in itertools.product(range(max_deg + 1), repeat=ctx.dim)
             if sum(e) <= max_deg]
    gens = [VField(ctx, {i: Poly(ctx, {e: Fraction(1)})})
            for i in ctx.axes() for e in monos]
    images = [lie_derivative(X, omega) for X in gens]
    keys = sorted({(idx, e) for im in images
                   for idx, c in im.comps.items() for e in c.terms})
    rows = [[im.comps.get(idx, Poly.zero(ctx)).terms.get(e, Fraction(0))
             for im in images] for idx, e in keys]
    ker = kernel_basis(rows, len(gens)) if rows else [
        [Fraction(int(i == j)) for j in range(len(gens))]
        for i in range(len(gens))]
    X = VField.zero(ctx)
    for v in ker:
        c = random_rational(rng)
        if c == 0:
            continue
        for g, coef in zip(gens, v):
            if coef:
                X = X + g * (c * coef)
    return X
