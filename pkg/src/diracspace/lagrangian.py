"""Pointwise linear algebra of Lagrangian subspaces of T + /\\^p T*.

Everything here is constant-coefficient: subspaces of the fiber
T + /\\^p T* over a single point, encoded as rational coordinate vectors
(the n T-coordinates first, then the C(n,p) form coordinates in
increasing-tuple order).  Provides perps, the (S, Omega) bijection, the
extension of a partial form to an honest alternating form, the normal
presentation of a Lagrangian by (S, omega), the tier subspaces of the
associated multi-Dirac family, and the weak-isotropy/maximality tests
that distinguish this notion from Nambu-Dirac structures.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from .calculus import Form, MultiVec, VField, contract, mv_wedge, wedge
from .courant import SectionPr, multi_pairing
from .linalg import kernel_basis, solve, span_basis, span_contains, span_equal
from .poly import Context, Poly


def _tuples(n: int, k: int):
    return list(itertools.combinations(range(1, n + 1), k))


# -- constant-coefficient helpers -------------------------------------


def const_vfield(ctx: Context, vec) -> VField:
    return VField(ctx, {i: Poly.constant(ctx, Fraction(vec[i - 1]))
                        for i in ctx.axes()})


def const_form(ctx: Context, degree: int, coords) -> Form:
    idxs = _tuples(ctx.dim, degree)
    return Form(ctx, degree, {
        idx: Poly.constant(ctx, Fraction(c)) for idx, c in zip(idxs, coords)
    })


def const_multivec(ctx: Context, degree: int, coords) -> MultiVec:
    idxs = _tuples(ctx.dim, degree)
    return MultiVec(ctx, degree, {
        idx: Poly.constant(ctx, Fraction(c)) for idx, c in zip(idxs, coords)
    })


def form_coords(a: Form) -> list[Fraction]:
    return [a.comps.get(idx, Poly.zero(a.ctx)).constant_value()
            for idx in _tuples(a.ctx.dim, a.degree)]


def mv_coords(Y: MultiVec) -> list[Fraction]:
    return [Y.comps.get(idx, Poly.zero(Y.ctx)).constant_value()
            for idx in _tuples(Y.ctx.dim, Y.degree)]


def form_eval(a: Form, vecs) -> Fraction:
    """Evaluate a constant k-form on k coordinate vectors."""
    out = a
    for v in vecs:
        out = contract(const_vfield(a.ctx, v), out)
    return out.comps.get((), Poly.zero(a.ctx)).constant_value()


def wedge_covectors(ctx: Context, rows, k: int) -> list[Form]:
    """All k-fold wedges of the given constant covectors (1-forms)."""
    ones = [const_form(ctx, 1, row) for row in rows]
    out = []
    for combo in itertools.combinations(ones, k):
        w = Form(ctx, 0, {(): Poly.constant(ctx, 1)})
        for f in combo:
            w = wedge(w, f)
        out.append(w)
    return out


def wedge_vectors(ctx: Context, rows, k: int) -> list[MultiVec]:
    """All k-fold wedges of the given constant vectors."""
    ones = [const_vfield(ctx, row).to_multivec() for row in rows]
    out = []
    for combo in itertools.combinations(ones, k):
        w = MultiVec(ctx, 0, {(): Poly.constant(ctx, 1)})
        for Y in combo:
            w = mv_wedge(w, Y)
        out.append(w)
    return out


# -- subspaces ---------------------------------------------------------


class LinSubspace:
    """A subspace of /\\^r T + /\\^{p+1-r} T* at a point (tier r; r=1 by
    default, giving the ambient T + /\\^p T* of order p).

    Coordinates: the C(n,r) multivector components in increasing-tuple
    order, then the C(n, p+1-r) form components likewise.  The basis is
    kept in reduced echelon form, so equality is literal.
    """

    __slots__ = ("n", "p", "r", "basis")

    def __init__(self, n: int, p: int, basis, r: int = 1):
        if not 1 <= r <= p <= n:
            raise ValueError(f"need 1 <= r <= p <= n, got r={r}, p={p}, n={n}")
        self.n, self.p, self.r = n, p, r
        amb = self.ambient_dim()
        rows = [[Fraction(x) for x in row] for row in basis]
        for row in rows:
            if len(row) != amb:
                raise ValueError(f"vector length {len(row)}, ambient {amb}")
        self.basis = span_basis(rows)

    @property
    def ctx(self) -> Context:
        return Context(self.n)

    def ambient_dim(self) -> int:
        return comb(self.n, self.r) + comb(self.n, self.p + 1 - self.r)

    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinSubspace)
            and (self.n, self.p, self.r) == (other.n, other.p, other.r)
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.n, self.p, self.r,
                     tuple(tuple(row) for row in self.basis)))

    def contains(self, vec) -> bool:
        v = [Fraction(x) for x in vec]
        if not self.basis:
            return all(x == 0 for x in v)
        return span_contains(self.basis, v)

    def members(self):
        """Basis as (MultiVec, Form) pairs."""
        ctx = self.ctx
        nm = comb(self.n, self.r)
        out = []
        for row in self.basis:
            out.append((const_multivec(ctx, self.r, row[:nm]),
                        const_form(ctx, self.p + 1 - self.r, row[nm:])))
        return out

    @staticmethod
    def from_elements(n: int, p: int, elems, r: int = 1) -> "LinSubspace":
        """Span of (MultiVec, Form) pairs in tier-r coordinates."""
        rows = [mv_coords(Y) + form_coords(eta) for Y, eta in elems]
        return LinSubspace(n, p, rows, r)

    def tangent_part(self):
        """Canonical basis of the projection onto the multivector factor."""
        nm = comb(self.n, self.r)
        return span_basis([row[:nm] for row in self.basis])

    def form_intersection(self):
        """Canonical basis of L intersected with the form factor."""
        nm = comb(self.n, self.r)
        if not self.basis:
            return []
        coeffs = kernel_basis([[row[c] for row in self.basis]
                               for c in range(nm)], len(self.basis))
        rows = []
        for cs in coeffs:
            v = [Fraction(0)] * self.ambient_dim()
            for c, row in zip(cs, self.basis):
                v = [a + c * b for a, b in zip(v, row)]
            rows.append(v[nm:])
        return span_basis(rows)

    def __repr__(self):
        return (f"LinSubspace(n={self.n}, p={self.p}, r={self.r}, "
                f"dim={self.dim()})")


def _unit_elements(n: int, p: int, r: int):
    """Unit coordinate elements of /\\^r T + /\\^{p+1-r} T*."""
    ctx = Context(n)
    out = []
    for idx in _tuples(n, r):
        out.append((MultiVec.basis(ctx, idx), Form.zero(ctx, p + 1 - r)))
    for idx in _tuples(n, p + 1 - r):
        out.append((MultiVec.zero(ctx, r), Form.basis(ctx, idx)))
    return out


def perp_tier(L: LinSubspace, r: int) -> LinSubspace:
    """(L)^{perp,r}: all tier-r elements pairing to zero with L."""
    n, p, s = L.n, L.p, L.r
    if r + s > p + 1:
        raise ValueError("tier overflow: r + s > p + 1")
    units = _unit_elements(n, p, r)
    mem = [SectionPr(p, s, Y, eta) for Y, eta in L.members()]
    rows = []
    cols = []
    for Y, eta in units:
        a = SectionPr(p, r, Y, eta)
        cols.append([c for b in mem for c in form_coords(multi_pairing(a, b))])
    if cols and cols[0]:
        rows = [[col[i] for col in cols] for i in range(len(cols[0]))]
        ker = kernel_basis(rows, len(units))
    else:
        ker = kernel_basis([[Fraction(0)] * len(units)], len(units))
    return LinSubspace(n, p, ker, r)


def perp(L: LinSubspace) -> LinSubspace:
    """L^perp inside T + /\\^p T* for the symmetric pairing
    <X+alpha, Y+beta> = iota_X beta + iota_Y alpha."""
    if L.r != 1:
        raise ValueError("perp acts on tier-1 subspaces")
    return perp_tier(L, 1)


def annihilator(n: int, rows) -> list[list[Fraction]]:
    """Covectors vanishing on the span of the given vectors."""
    if not rows:
        return [[Fraction(1 if j == i else 0) for j in range(n)]
                for i in range(n)]
    return kernel_basis([list(r) for r in rows], n)


def classify(L: LinSubspace) -> dict:
    """Isotropy and two independent Lagrangian tests.

    `lagrangian` is perp(L) == L; `easychar` is the three-condition
    characterization (isotropic, form intersection equal to /\\^p S°,
    and dim S <= n-p or S = T); the two always agree.
    """
    if L.r != 1:
        raise ValueError("classify acts on tier-1 subspaces")
    n, p = L.n, L.p
    ctx = L.ctx
    mem = [SectionPr(p, 1, Y, eta) for Y, eta in L.members()]
    iso = all(multi_pairing(a, b).is_zero() for a in mem for b in mem)
    lag = perp(L) == L
    S = L.tangent_part()
    so = annihilator(n, S)
    wp_so = span_basis([form_coords(f) for f in wedge_covectors(ctx, so, p)])
    easy = (
        iso
        and L.form_intersection() == wp_so
        and (len(S) <= n - p or len(S) == n)
    )
    return {"isotropic": iso, "lagrangian": lag, "easychar": easy}


# -- the (S, Omega) correspondence ------------------------------------


class LagrangianPair:
    """(S, Omega): a subspace S of T and a 2-S-slot, (p-1)-T-slot tensor.

    S is kept as a canonical echelon basis; Omega maps basis index pairs
    (i, j) with i < j to constant (p-1)-forms, skew by convention in the
    two S slots.
    """

    __slots__ = ("n", "p", "S", "Omega")

    def __init__(self, n: int, p: int, S, Omega: dict):
        self.n, self.p = n, p
        self.S = span_basis([[Fraction(x) for x in row] for row in S])
        k = len(self.S)
        clean = {}
        for (i, j), f in Omega.items():
            if not 0 <= i < j < k:
                raise ValueError(f"bad basis pair ({i},{j}) for dim S = {k}")
            if not f.is_zero():
                if f.degree != p - 1:
                    raise ValueError("Omega values must be (p-1)-forms")
                clean[(i, j)] = f
        self.Omega = clean

    @property
    def ctx(self) -> Context:
        return Context(self.n)

    def omega_at(self, i: int, j: int) -> Form:
        """Omega(s_i, s_j) for any index order (skew)."""
        ctx = self.ctx
        if i == j:
            return Form.zero(ctx, self.p - 1)
        if i < j:
            return self.Omega.get((i, j), Form.zero(ctx, self.p - 1))
        return -self.Omega.get((j, i), Form.zero(ctx, self.p - 1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LagrangianPair)
            and (self.n, self.p) == (other.n, other.p)
            and self.S == other.S
            and all(self.omega_at(i, j) == other.omega_at(i, j)
                    for i in range(len(self.S))
                    for j in range(i + 1, len(self.S)))
        )

    def __repr__(self):
        return f"LagrangianPair(n={self.n}, p={self.p}, dim S={len(self.S)})"


def to_pair(L: LinSubspace) -> LagrangianPair:
    """Extract (S, Omega): S is the tangent projection, and
    Omega(s_i, s_j) = iota_{s_j} alpha_i for any s_i + alpha_i in L."""
    cls = classify(L)
    if not cls["lagrangian"]:
        raise ValueError("input subspace is not Lagrangian")
    n, p = L.n, L.p
    ctx = L.ctx
    S = L.tangent_part()
    k = len(S)
    # for each S basis vector pick a member of L sitting over it
    alphas = []
    for s in S:
        rows = [[row[c] for row in L.basis] for c in range(n)]
        cs = solve(rows, [Fraction(x) for x in s])
        if cs is None:
            raise ValueError("tangent projection inconsistent")
        v = [Fraction(0)] * L.ambient_dim()
        for c, row in zip(cs, L.basis):
            v = [a + c * b for a, b in zip(v, row)]
        alphas.append(const_form(ctx, p, v[n:]))
    Omega = {}
    for i in range(k):
        for j in range(i + 1, k):
            f = contract(const_vfield(ctx, S[j]), alphas[i])
            if not f.is_zero():
                Omega[(i, j)] = f
    return LagrangianPair(n, p, S, Omega)


def _omega_extension_to_p_forms(pair: LagrangianPair):
    """Solve for beta_i in /\\^p T* with iota_{s_j} beta_i = Omega(s_i, s_j)
    for all i, j (including the diagonal zero); None if not extendable."""
    n, p = pair.n, pair.p
    ctx = pair.ctx
    S = pair.S
    k = len(S)
    if k == 0:
        return []
    np_ = comb(n, p)
    idxs_p = _tuples(n, p)
    rows, rhs = [], []
    for i in range(k):
        for j in range(k):
            target = form_coords(pair.omega_at(i, j))
            # iota_{s_j} acting on unit p-forms, restricted to block i
            cols = [form_coords(contract(const_vfield(ctx, S[j]),
                                         Form.basis(ctx, idx)))
                    for idx in idxs_p]
            for t in range(len(target)):
                row = [Fraction(0)] * (k * np_)
                for c in range(np_):
                    row[i * np_ + c] = cols[c][t]
                rows.append(row)
                rhs.append(target[t])
    sol = solve(rows, rhs)
    if sol is None:
        return None
    return [const_form(ctx, p, sol[i * np_:(i + 1) * np_]) for i in range(k)]


def extend_to_form(n: int, p: int, S, betas, C=None) -> Form:
    """Extend beta in S* (x) /\\^p T* to an alternating (p+1)-form.

    `betas[i]` is the p-form beta(s_i) for the i-th vector of the echelon
    basis of S.  The result omega satisfies iota_s omega = beta(s) for
    all s in S.  Construction: skew-symmetrize the tensor X*_i (x) beta_i
    in a basis adapted to S and a complement C (default: the orthogonal
    complement), then reweight the S-weight-q component by (p+1)/q.
    """
    ctx = Context(n)
    S = span_basis([[Fraction(x) for x in row] for row in S])
    k = len(S)
    if k != len(betas):
        raise ValueError("one beta per S basis vector required")
    for b in betas:
        if not b.is_zero() and b.degree != p:
            raise ValueError("beta values must be p-forms")
    if C is None:
        C = annihilator(n, S)  # orthogonal complement: kernel of S rows
    frame = S + [list(map(Fraction, row)) for row in C]
    if len(frame) != n or span_basis(frame) != span_basis(
            [[Fraction(1 if j == i else 0) for j in range(n)]
             for i in range(n)]):
        raise ValueError("S and C do not frame the ambient space")
    # dual frame: dual[i] . frame[t] = delta_{it}
    dual = [solve(frame, [Fraction(1 if t == i else 0) for t in range(n)])
            for i in range(n)]
    # components of each beta_i in the adapted frame
    beta_frame = {}
    for i in range(k):
        for K in itertools.combinations(range(n), p):
            beta_frame[(i, K)] = form_eval(betas[i], [frame[t] for t in K])
    # skew-symmetrization, reweighted by S-weight
    omega = Form.zero(ctx, p + 1)
    for J in itertools.combinations(range(n), p + 1):
        acc = Fraction(0)
        for m, jm in enumerate(J):
            if jm >= k:
                continue
            rest = J[:m] + J[m + 1:]
            acc += (-1) ** m * beta_frame[(jm, rest)]
        q = sum(1 for j in J if j < k)
        if acc == 0:
            continue
        if q == 0:
            raise ValueError("beta does not vanish off S")
        coeff = acc * Fraction(1, p + 1) * Fraction(p + 1, q)
        w = Form(ctx, 0, {(): Poly.constant(ctx, coeff)})
        for j in J:
            w = wedge(w, const_form(ctx, 1, dual[j]))
        omega = omega + w
    # sanity: the restriction really is beta
    for i in range(k):
        if contract(const_vfield(ctx, S[i]), omega) != betas[i]:
            raise ValueError("extension failed to restrict to beta")
    return omega


def norom_subspace(n: int, p: int, S, omega: Form) -> LinSubspace:
    """L = {X + iota_X omega + alpha : X in S, alpha in /\\^p S°}."""
    ctx = Context(n)
    if not omega.is_zero() and omega.degree != p + 1:
        raise ValueError("omega must be a (p+1)-form")
    S = span_basis([[Fraction(x) for x in row] for row in S])
    k = len(S)
    if not (k <= n - p or k == n):
        raise ValueError(f"dim S = {k} violates dim S <= {n - p} or S = T")
    elems = []
    for s in S:
        X = const_vfield(ctx, s)
        elems.append((X.to_multivec(), contract(X, omega)))
    for xi in wedge_covectors(ctx, annihilator(n, S), p):
        elems.append((MultiVec.zero(ctx, 1), xi))
    return LinSubspace.from_elements(n, p, elems, 1)


def from_pair(pair: LagrangianPair) -> LinSubspace:
    """Inverse of to_pair: extend Omega to a full (p+1)-form and present
    the Lagrangian as {X + iota_X omega + alpha}."""
    n, p = pair.n, pair.p
    k = len(pair.S)
    if not (k <= n - p or k == n):
        raise ValueError(f"dim S = {k} violates dim S <= {n - p} or S = T")
    betas = _omega_extension_to_p_forms(pair)
    if betas is None:
        raise ValueError("Omega is not the restriction of a full form")
    omega = extend_to_form(n, p, pair.S, betas)
    return norom_subspace(n, p, pair.S, omega)


# -- multi-Dirac tiers and the Nambu-type conditions -------------------


def multidirac_tier(L: LinSubspace, r: int) -> LinSubspace:
    """Tier-r subspace D_r of the multi-Dirac family determined by L.

    Computed twice — from the normal presentation,
    D_r = {Y + iota_Y omega + xi : Y in S /\\ (/\\^{r-1} T),
           xi in /\\^{p+1-r} S°},
    and as the brute-force perp (L)^{perp,r} — and the two must agree.
    """
    if L.r != 1:
        raise ValueError("multidirac_tier starts from a tier-1 subspace")
    n, p = L.n, L.p
    if not 1 <= r <= p:
        raise ValueError(f"tier {r} out of range 1..{p}")
    ctx = L.ctx
    pair = to_pair(L)  # also validates Lagrangian
    betas = _omega_extension_to_p_forms(pair)
    omega = extend_to_form(n, p, pair.S, betas)
    S = pair.S
    elems = []
    seen = set()
    for s in S:
        sv = const_vfield(ctx, s).to_multivec()
        for K in _tuples(n, r - 1):
            Y = mv_wedge(sv, MultiVec.basis(ctx, K)) if r > 1 else sv
            if Y.is_zero():
                continue
            key = tuple(mv_coords(Y))
            if key in seen:
                continue
            seen.add(key)
            elems.append((Y, contract(Y, omega)))
    for xi in wedge_covectors(ctx, annihilator(n, S), p + 1 - r):
        elems.append((MultiVec.zero(ctx, r), xi))
    from_normal = LinSubspace.from_elements(n, p, elems, r)
    brute = perp_tier(L, r)
    if from_normal != brute:
        raise AssertionError(
            "tier presentation disagrees with brute-force perp "
            f"(r={r}): convention bug")
    return from_normal


def nambu_dirac_check(L: LinSubspace) -> dict:
    """The two linear conditions singling out Nambu-Dirac subspaces:
    `iso_weak` — the pairing vanishes on (p-1)-tuples from S;
    `hismax` — /\\^p S equals the multivector projection of L^{perp,p}."""
    if L.r != 1:
        raise ValueError("nambu_dirac_check acts on tier-1 subspaces")
    n, p = L.n, L.p
    ctx = L.ctx
    mem = L.members()
    S = L.tangent_part()
    iso_weak = True
    for (Y1, a1), (Y2, a2) in itertools.product(mem, repeat=2):
        pr = contract(Y1.to_vfield(), a2) + contract(Y2.to_vfield(), a1)
        for combo in itertools.combinations(S, p - 1):
            if form_eval(pr, list(combo)) != 0:
                iso_weak = False
    wp_s = span_basis([mv_coords(Y) for Y in wedge_vectors(ctx, S, p)])
    proj = perp_tier(L, p).tangent_part()
    return {"iso_weak": iso_weak, "hismax": span_equal(wp_s, proj)}


def random_lagrangian(rng, n: int, p: int) -> LinSubspace:
    """Seeded random Lagrangian subspace via its normal presentation."""
    ctx = Context(n)
    dims = list(range(0, n - p + 1)) + [n]
    k = rng.choice(dims)
    S = span_basis([[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                    for _ in range(k)])
    while len(S) < k:
        S = span_basis(S + [[Fraction(rng.randint(-3, 3))
                             for _ in range(n)]])
    omega = const_form(ctx, p + 1,
                       [Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2]))
                        for _ in range(comb(n, p + 1))])
    return norom_subspace(n, p, S, omega)
