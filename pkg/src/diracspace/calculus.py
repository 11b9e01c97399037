"""Cartan calculus on a coordinate patch.

Differential forms, vector fields and multivector fields with polynomial
coefficients, plus wedge, contraction, de Rham differential, Lie derivative
and brackets.  Index tuples are 1-based and strictly increasing.

Sign convention of the repo: contraction by a decomposable multivector
nests innermost-first, iota_{X1^...^Xq} = iota_{Xq} o ... o iota_{X1},
i.e. the first wedge factor is contracted first.  Contraction of a form
into a multivector pairs the form factors against the first slots of the
multivector in the same order.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Context, Poly, _as_rat


def _merge_sign(I: tuple, J: tuple):
    """Merge disjoint increasing tuples; return (sign, merged) or (0, None)."""
    if set(I) & set(J):
        return 0, None
    merged = sorted(I + J)
    seq = list(I + J)
    # sign of the permutation sorting the concatenation
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign, tuple(merged)


class _Graded:
    """Shared storage for forms and multivectors: degree + component map."""

    __slots__ = ("ctx", "degree", "comps")

    def __init__(self, ctx: Context, degree: int, comps: dict | None = None):
        self.ctx = ctx
        self.degree = degree
        clean: dict = {}
        if comps and 0 <= degree <= ctx.dim:
            for idx, c in comps.items():
                idx = tuple(idx)
                if isinstance(c, (int, Fraction)):
                    c = Poly.constant(ctx, c)
                if c.is_zero():
                    continue
                if len(idx) != degree or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad index tuple {idx} for degree {degree}")
                if idx and not (1 <= idx[0] and idx[-1] <= ctx.dim):
                    raise ValueError(f"index tuple {idx} out of range")
                clean[idx] = c
        self.comps = clean

    def is_zero(self) -> bool:
        return not self.comps

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ValueError("context mismatch")

    def __eq__(self, other) -> bool:
        if type(self) is not type(other) or self.ctx != other.ctx:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((type(self), self.ctx, frozenset(self.comps.items())))

    def __add__(self, other):
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("degree mismatch in sum")
        comps = dict(self.comps)
        for idx, c in other.comps.items():
            comps[idx] = comps.get(idx, Poly.zero(self.ctx)) + c
        return type(self)(self.ctx, self.degree, comps)

    def __neg__(self):
        return type(self)(self.ctx, self.degree, {i: -c for i, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.ctx, other)
        if isinstance(other, Poly):
            return type(self)(
                self.ctx, self.degree, {i: c * other for i, c in self.comps.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def _str(self, basis_prefix: str) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for idx in sorted(self.comps):
            c = self.comps[idx]
            basis = "^".join(f"{basis_prefix}{i}" for i in idx)
            if not basis:
                parts.append(str(c))
            elif c == Poly.constant(self.ctx, 1):
                parts.append(basis)
            elif len(c.terms) == 1:
                parts.append(f"{c}*{basis}")
            else:
                parts.append(f"({c})*{basis}")
        return " + ".join(parts)


class Form(_Graded):
    """Differential k-form; components indexed by increasing tuples."""

    @staticmethod
    def zero(ctx: Context, degree: int = 0) -> "Form":
        return Form(ctx, degree)

    @staticmethod
    def from_poly(f: Poly) -> "Form":
        return Form(f.ctx, 0, {(): f})

    @staticmethod
    def basis(ctx: Context, idx: tuple) -> "Form":
        return Form(ctx, len(idx), {tuple(idx): Poly.constant(ctx, 1)})

    def to_poly(self) -> Poly:
        if self.degree != 0 and not self.is_zero():
            raise ValueError("not a 0-form")
        return self.comps.get((), Poly.zero(self.ctx))

    def __str__(self) -> str:
        if self.degree == 0 and not self.is_zero():
            return str(self.to_poly())
        return self._str("dx")

    def __repr__(self) -> str:
        return f"Form({self})"


class MultiVec(_Graded):
    """Multivector field of degree q."""

    @staticmethod
    def zero(ctx: Context, degree: int = 0) -> "MultiVec":
        return MultiVec(ctx, degree)

    @staticmethod
    def basis(ctx: Context, idx: tuple) -> "MultiVec":
        return MultiVec(ctx, len(idx), {tuple(idx): Poly.constant(ctx, 1)})

    def to_vfield(self) -> "VField":
        if self.degree != 1 and not self.is_zero():
            raise ValueError("not a 1-vector")
        return VField(self.ctx, {i[0]: c for i, c in self.comps.items()})

    def __str__(self) -> str:
        return self._str("Dx")

    def __repr__(self) -> str:
        return f"MultiVec({self})"


class VField:
    """Vector field; components are coefficients of d/dx_i."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: Context, comps: dict | None = None):
        self.ctx = ctx
        clean: dict = {}
        if comps:
            for i, c in comps.items():
                if isinstance(c, (int, Fraction)):
                    c = Poly.constant(ctx, c)
                if c.is_zero():
                    continue
                if not 1 <= i <= ctx.dim:
                    raise ValueError(f"axis {i} out of range")
                clean[i] = c
        self.comps = clean

    @staticmethod
    def zero(ctx: Context) -> "VField":
        return VField(ctx)

    @staticmethod
    def basis(ctx: Context, i: int) -> "VField":
        return VField(ctx, {i: Poly.constant(ctx, 1)})

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, i: int) -> Poly:
        return self.comps.get(i, Poly.zero(self.ctx))

    def to_multivec(self) -> MultiVec:
        return MultiVec(self.ctx, 1, {(i,): c for i, c in self.comps.items()})

    def __call__(self, f: Poly) -> Poly:
        """Directional derivative X(f)."""
        out = Poly.zero(self.ctx)
        for i, c in self.comps.items():
            out = out + c * f.partial(i)
        return out

    def __add__(self, other: "VField") -> "VField":
        if self.ctx != other.ctx:
            raise ValueError("context mismatch")
        comps = dict(self.comps)
        for i, c in other.comps.items():
            comps[i] = comps.get(i, Poly.zero(self.ctx)) + c
        return VField(self.ctx, comps)

    def __neg__(self) -> "VField":
        return VField(self.ctx, {i: -c for i, c in self.comps.items()})

    def __sub__(self, other: "VField") -> "VField":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.ctx, other)
        if isinstance(other, Poly):
            return VField(self.ctx, {i: c * other for i, c in self.comps.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VField)
            and self.ctx == other.ctx
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.ctx, frozenset(self.comps.items())))

    def __str__(self) -> str:
        return self.to_multivec()._str("Dx")

    def __repr__(self) -> str:
        return f"VField({self})"


# ---------------------------------------------------------------------
# wedge products


def _wedge_comps(ctx, ca: dict, cb: dict) -> dict:
    out: dict = {}
    for I, f in ca.items():
        for J, g in cb.items():
            sign, idx = _merge_sign(I, J)
            if sign == 0:
                continue
            out[idx] = out.get(idx, Poly.zero(ctx)) + sign * (f * g)
    return out


def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    deg = a.degree + b.degree
    if deg > a.ctx.dim:
        return Form.zero(a.ctx, deg)
    return Form(a.ctx, deg, _wedge_comps(a.ctx, a.comps, b.comps))


def mv_wedge(a: MultiVec, b: MultiVec) -> MultiVec:
    a._check(b)
    deg = a.degree + b.degree
    if deg > a.ctx.dim:
        return MultiVec.zero(a.ctx, deg)
    return MultiVec(a.ctx, deg, _wedge_comps(a.ctx, a.comps, b.comps))


# ---------------------------------------------------------------------
# contraction


def _contract_axis(comps: dict, i: int) -> dict:
    """Contract a single basis covector/vector index i into a component map."""
    out: dict = {}
    for idx, c in comps.items():
        if i not in idx:
            continue
        t = idx.index(i)
        rest = idx[:t] + idx[t + 1:]
        sign = -1 if t % 2 else 1
        prev = out.get(rest)
        out[rest] = sign * c if prev is None else prev + sign * c
    return out


def contract(Y, a: Form) -> Form:
    """Interior product iota_Y a for Y a VField or MultiVec.

    Decomposable multivectors contract first-factor-first; the convention
    test iota_{D1^D2}(dx1^dx2^dx3) = dx3 pins the sign.
    """
    if isinstance(Y, VField):
        Y = Y.to_multivec()
    Y._check(a)
    q = Y.degree
    deg = a.degree - q
    if deg < 0:
        return Form.zero(a.ctx, deg)
    out: dict = {}
    for K, c in Y.comps.items():
        comps = a.comps
        for i in K:
            comps = _contract_axis(comps, i)
        for idx, g in comps.items():
            out[idx] = out.get(idx, Poly.zero(a.ctx)) + c * g
    return Form(a.ctx, deg, out)


def iota_form(alpha: Form, pi: MultiVec) -> MultiVec:
    """Contraction of a form into a multivector, form factors against the
    first slots of pi in order; for a bivector iota_alpha pi = pi(alpha, .)."""
    alpha._check(pi)
    deg = pi.degree - alpha.degree
    if deg < 0:
        return MultiVec.zero(pi.ctx, deg)
    out: dict = {}
    for I, c in alpha.comps.items():
        comps = pi.comps
        for i in I:
            comps = _contract_axis(comps, i)
        for idx, g in comps.items():
            out[idx] = out.get(idx, Poly.zero(pi.ctx)) + c * g
    return MultiVec(pi.ctx, deg, out)


# ---------------------------------------------------------------------
# derivatives and brackets


def deRham(a: Form) -> Form:
    deg = a.degree + 1
    if deg > a.ctx.dim:
        return Form.zero(a.ctx, deg)
    out: dict = {}
    for idx, c in a.comps.items():
        for i in a.ctx.axes():
            dc = c.partial(i)
            if dc.is_zero():
                continue
            sign, merged = _merge_sign((i,), idx)
            if sign == 0:
                continue
            out[merged] = out.get(merged, Poly.zero(a.ctx)) + sign * dc
    return Form(a.ctx, deg, out)


def poincare_primitive(a: Form) -> Form:
    """A primitive of a closed polynomial form of degree >= 1.

    Homotopy operator for the radial contraction: a homogeneous term of
    polynomial degree d and form degree k maps to iota_E / (d + k) with
    E the Euler field; d(kappa a) = a whenever da = 0.
    """
    if a.degree < 1:
        raise ValueError("primitives exist for forms of degree >= 1")
    E = VField(a.ctx, {i: Poly.variable(a.ctx, i) for i in a.ctx.axes()})
    out = Form.zero(a.ctx, a.degree - 1)
    for idx, poly in a.comps.items():
        for e, c in poly.terms.items():
            piece = Form(a.ctx, a.degree, {idx: Poly(a.ctx, {e: c})})
            out = out + Fraction(1, sum(e) + a.degree) * contract(E, piece)
    return out


def lie_derivative(X: VField, a: Form) -> Form:
    """Cartan formula L_X = d iota_X + iota_X d."""
    return deRham(contract(X, a)) + contract(X, deRham(a))


def lie_derivative_direct(X: VField, a: Form) -> Form:
    """Derivation formula for L_X, used as an independent cross-check."""
    out = Form(a.ctx, a.degree, {idx: X(c) for idx, c in a.comps.items()})
    for idx, c in a.comps.items():
        for t, i in enumerate(idx):
            # replace dx_i by dX^i
            dXi = deRham(Form.from_poly(X.component(i)))
            pre = Form.basis(a.ctx, idx[:t])
            post = Form.basis(a.ctx, idx[t + 1:])
            out = out + c * wedge(wedge(pre, dXi), post)
    return out


def lie_bracket(X: VField, Y: VField) -> VField:
    comps: dict = {}
    for j in X.ctx.axes():
        c = X(Y.component(j)) - Y(X.component(j))
        if not c.is_zero():
            comps[j] = c
    return VField(X.ctx, comps)


def schouten(P: MultiVec, Q: MultiVec) -> MultiVec:
    """Schouten bracket of multivector fields of degree >= 1.

    Expanded componentwise through the decomposable formula
    [X1^...^Xp, Y1^...^Yq] =
        sum_{i,j} (-1)^{i+j} [Xi,Yj] ^ X1..^hat Xi..^Xp ^ Y1..^hat Yj..^Yq,
    attaching the polynomial coefficient of each component to its first
    wedge factor.  Reduces to the Lie bracket on vector fields.
    """
    P._check(Q)
    p, q = P.degree, Q.degree
    if p < 1 or q < 1:
        raise ValueError("schouten is implemented for degrees >= 1")
    ctx = P.ctx
    out = MultiVec.zero(ctx, p + q - 1)
    for K, f in P.comps.items():
        xs = [VField(ctx, {K[0]: f})] + [VField.basis(ctx, k) for k in K[1:]]
        for M, g in Q.comps.items():
            ys = [VField(ctx, {M[0]: g})] + [VField.basis(ctx, m) for m in M[1:]]
            for i in range(p):
                for j in range(q):
                    br = lie_bracket(xs[i], ys[j])
                    if br.is_zero():
                        continue
                    rest = br.to_multivec()
                    for t, v in enumerate(xs):
                        if t != i:
                            rest = mv_wedge(rest, v.to_multivec())
                    for t, v in enumerate(ys):
                        if t != j:
                            rest = mv_wedge(rest, v.to_multivec())
                    sgn = -1 if (i + j) % 2 else 1
                    out = out + sgn * rest
    return out
