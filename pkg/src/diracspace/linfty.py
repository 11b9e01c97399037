"""L-infinity multibracket families and their strict/weak morphisms.

A family lives on a complex concentrated in degrees [1-p, 0] and is
checked against the homotopy Jacobi relations

    sum_{i+j=n+1} sum_{sigma in Sh(i, n-i)}
        chi(sigma) (-1)^{i(j-1)} l_j(l_i(v_sigma(1..i)), v_sigma(i+1..n)) = 0

with chi the Koszul sign of the odd representation.  Two concrete
families are provided: the observables of a presented subbundle
(Hamiltonian (p-1)-forms in degree 0, lower forms below) and the
H-twisted brackets on sections of /\^{r-1} T* + TM with lower forms
below.  On top of these sit Lie-2 morphism checks (the degree-0
prequantum morphism into sections of TM + T*M twisted by a 2-form
sigma), scaling and gauge strict isomorphisms, and the prequantization
map f |-> (X_f, -f).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .calculus import (
    Form,
    VField,
    contract,
    deRham,
    lie_bracket,
    lie_derivative,
)
from .courant import SectionEp, courant, pairing
from .poly import Context, Poly, bernoulli
from .presentations import (
    HamiltonianDatum,
    Presentation,
    ham_bracket,
    hamiltonian_solve,
)


# -- graded elements ---------------------------------------------------


class GradedElem:
    """An element of the complex, tagged with its (non-positive) degree.

    Degree-0 payloads are sections / Hamiltonian data; negative degrees
    carry plain forms.  The formal zero has degree None and absorbs in
    sums regardless of degree.
    """

    __slots__ = ("degree", "payload")

    def __init__(self, degree, payload):
        self.degree = degree
        self.payload = payload

    @staticmethod
    def zero() -> "GradedElem":
        return GradedElem(None, None)

    def is_zero(self) -> bool:
        return self.payload is None or self.payload.is_zero()

    def __add__(self, other: "GradedElem") -> "GradedElem":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degree")
        return GradedElem(self.degree, self.payload + other.payload)

    def __mul__(self, c):
        if self.payload is None:
            return self
        return GradedElem(self.degree, self.payload * c)

    __rmul__ = __mul__

    def __neg__(self) -> "GradedElem":
        return self * Fraction(-1)

    def __sub__(self, other: "GradedElem") -> "GradedElem":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElem):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.degree == other.degree and self.payload == other.payload

    def __str__(self) -> str:
        return "0" if self.is_zero() else f"deg {self.degree}: {self.payload}"

    def __repr__(self) -> str:
        return f"GradedElem({self})"


# -- Koszul signs and unshuffles ---------------------------------------


def unshuffles(i: int, n: int):
    """(i, n-i)-unshuffles as 0-based index tuples: each block increasing."""
    idx = range(n)
    for first in itertools.combinations(idx, i):
        rest = tuple(k for k in idx if k not in first)
        yield first + rest


def koszul_sign(sigma, degrees) -> int:
    """chi(sigma): each adjacent swap contributes -(-1)^{|a||b|}."""
    perm = list(sigma)
    sign = 1
    for i in range(len(perm)):
        for j in range(len(perm) - 1):
            if perm[j] > perm[j + 1]:
                d1, d2 = degrees[perm[j]], degrees[perm[j + 1]]
                sign *= -1 if (d1 * d2) % 2 == 0 else 1
                perm[j], perm[j + 1] = perm[j + 1], perm[j]
    return sign


def sym_koszul_sign(sigma, parities) -> int:
    """Plain Koszul sign: each adjacent swap contributes (-1)^{|a||b|}."""
    perm = list(sigma)
    sign = 1
    for i in range(len(perm)):
        for j in range(len(perm) - 1):
            if perm[j] > perm[j + 1]:
                if parities[perm[j]] % 2 and parities[perm[j + 1]] % 2:
                    sign = -sign
                perm[j], perm[j + 1] = perm[j + 1], perm[j]
    return sign


# -- families ----------------------------------------------------------


class MultibracketFamily:
    """Base: graded-symmetric multibrackets l_n of degree 2-n."""

    max_arity: int
    depth: int  # complex lives in degrees [-depth, 0]

    def l(self, args: list[GradedElem]) -> GradedElem:
        raise NotImplementedError

    def _clamp(self, degree: int, payload) -> GradedElem:
        if payload is None or payload.is_zero() or not -self.depth <= degree <= 0:
            return GradedElem.zero()
        return GradedElem(degree, payload)


def check_relation(F: MultibracketFamily, elems: list[GradedElem]) -> GradedElem:
    """Residual of the n-th homotopy Jacobi relation on the given tuple."""
    n = len(elems)
    degrees = [e.degree if e.degree is not None else 0 for e in elems]
    total = GradedElem.zero()
    for i in range(1, n + 1):
        j = n + 1 - i
        if i > F.max_arity and j > F.max_arity:
            continue
        outer_sign = -1 if (i * (j - 1)) % 2 else 1
        for sigma in unshuffles(i, n):
            chi = koszul_sign(sigma, degrees)
            inner = F.l([elems[k] for k in sigma[:i]])
            if inner.is_zero():
                continue
            term = F.l([inner] + [elems[k] for k in sigma[i:]])
            total = total + (chi * outer_sign) * term
    return total


class ObservablesFamily(MultibracketFamily):
    """Observables of a presented subbundle of order p.

    Degree 0: Hamiltonian (p-1)-forms with a chosen vector field;
    degree -k (0 < k < p): (p-1-k)-forms.  l_1 = d below degree 0,
    l_k(a_1,...,a_k) = eps(k) iota_{X_k} ... iota_{X_3} {a_1, a_2}
    on degree-0 tuples, eps(2), eps(3), ... = 1, -1, -1, 1, 1, -1, ...
    """

    def __init__(self, P: Presentation):
        self.P = P
        self.depth = P.p - 1
        self.max_arity = P.p + 1

    @staticmethod
    def eps(k: int) -> int:
        if k % 2 == 0:
            return -1 if (k // 2 + 1) % 2 else 1
        return -1 if ((k - 1) // 2) % 2 else 1

    def element(self, alpha: Form, X: VField | None = None) -> GradedElem:
        if X is None:
            X = hamiltonian_solve(self.P, alpha)
            if X is None:
                raise ValueError("alpha is not Hamiltonian")
        return GradedElem(0, HamiltonianDatum(self.P, alpha, X))

    def form(self, degree: int, xi: Form) -> GradedElem:
        if not -self.depth <= degree < 0:
            raise ValueError(f"degree {degree} out of range")
        if not xi.is_zero() and xi.degree != self.P.p - 1 + degree:
            raise ValueError("form degree does not match complex degree")
        return self._clamp(degree, xi)

    def l(self, args: list[GradedElem]) -> GradedElem:
        k = len(args)
        if any(a.is_zero() for a in args):
            return GradedElem.zero()
        if k == 1:
            a = args[0]
            if a.degree == 0:
                return GradedElem.zero()
            d = deRham(a.payload)
            if a.degree + 1 == 0:
                return self._clamp(
                    0, HamiltonianDatum(self.P, d, VField.zero(self.P.ctx)))
            return self._clamp(a.degree + 1, d)
        if any(a.degree < 0 for a in args):
            return GradedElem.zero()
        data = [a.payload for a in args]
        br = ham_bracket(data[0], data[1])
        if k == 2:
            return self._clamp(
                0, HamiltonianDatum(self.P, br,
                                    lie_bracket(data[0].X, data[1].X)))
        out = br
        for d in data[2:]:
            out = contract(d.X, out)
        return self._clamp(2 - k, self.eps(k) * out)


class TwistedSectionsFamily(MultibracketFamily):
    """H-twisted multibrackets on sections of TM + /\^{r-1} T*M.

    Degree 0: sections; degree -k (0 < k < r): (r-1-k)-forms.  l_1 = d
    below degree 0; l_2 is the H-twisted Courant bracket on two sections
    and half a Lie derivative on a section and a form; the trinary and
    higher odd brackets are built from

      [xi, X1, X2] = -1/6 (1/2 (i_{X1} L_{X2} - i_{X2} L_{X1})
                           + i_{[X1,X2]} (+ i_{X1} i_{X2} d)) xi

    where the i_{X1} i_{X2} d term is always present when xi has top
    degree r-1 and is controlled by ``xi_full`` on lower degrees.  Even
    arities >= 4 vanish (odd Bernoulli numbers are zero).
    """

    def __init__(self, r: int, ctx: Context, H: Form | None = None,
                 allow_nonclosed: bool = False, xi_full: bool = False):
        if r < 1:
            raise ValueError("order r must be >= 1")
        self.r = r
        self.ctx = ctx
        self.depth = r - 1
        self.max_arity = r + 1
        self.xi_full = xi_full
        if H is None:
            H = Form.zero(ctx, r + 1)
        if not H.is_zero() and H.degree != r + 1:
            raise ValueError(f"twist must have degree {r + 1}")
        if not deRham(H).is_zero() and not allow_nonclosed:
            raise ValueError("twist is not closed (pass allow_nonclosed "
                             "to experiment anyway)")
        self.H = H

    def section(self, X: VField, alpha: Form) -> GradedElem:
        return GradedElem(0, SectionEp(self.r - 1, X, alpha))

    def form(self, degree: int, xi: Form) -> GradedElem:
        if not -self.depth <= degree < 0:
            raise ValueError(f"degree {degree} out of range")
        if not xi.is_zero() and xi.degree != self.r - 1 + degree:
            raise ValueError("form degree does not match complex degree")
        return self._clamp(degree, xi)

    def _tri(self, xi: Form, X1: VField, X2: VField, full: bool) -> Form:
        t = Fraction(1, 2) * (contract(X1, lie_derivative(X2, xi))
                              - contract(X2, lie_derivative(X1, xi)))
        t = t + contract(lie_bracket(X1, X2), xi)
        if full:
            t = t + contract(X1, contract(X2, deRham(xi)))
        return Fraction(-1, 6) * t

    def _nary_form(self, xi: Form, Xs: list[VField], full: bool) -> Form:
        # [xi, X_1, ..., X_{n-1}] for odd n >= 5
        n = len(Xs) + 1
        coeff = (Fraction(12, (n - 1) * (n - 2)) * bernoulli(n - 1)
                 * (-1 if ((n - 1) // 2) % 2 else 1))
        acc = Form.zero(self.ctx)
        for i in range(len(Xs)):
            for j in range(i + 1, len(Xs)):
                t = self._tri(xi, Xs[i], Xs[j], full)
                for m in range(len(Xs)):
                    if m not in (i, j):
                        t = contract(Xs[m], t)
                sgn = -1 if (i + j) % 2 else 1  # (-1)^{i+j+1} for 1-based i, j
                acc = acc + sgn * t
        return coeff * acc

    def _iota_all(self, Xs: list[VField], H: Form) -> Form:
        out = H
        for X in Xs:
            out = contract(X, out)
        return out

    def l(self, args: list[GradedElem]) -> GradedElem:
        n = len(args)
        if any(a.is_zero() for a in args):
            return GradedElem.zero()
        degs = [a.degree for a in args]
        out_deg = sum(degs) + 2 - n
        negs = [k for k, d in enumerate(degs) if d < 0]
        if n == 1:
            if degs[0] == 0:
                return GradedElem.zero()
            d = deRham(args[0].payload)
            if degs[0] + 1 == 0:
                return self._clamp(0, SectionEp(self.r - 1,
                                                VField.zero(self.ctx), d))
            return self._clamp(degs[0] + 1, d)
        if len(negs) >= 2 or (n >= 4 and n % 2 == 0):
            return GradedElem.zero()
        if n == 2:
            a, b = args
            if not negs:
                return self._clamp(0, courant(a.payload, b.payload, self.H))
            pos = negs[0]
            e = args[1 - pos].payload
            xi = args[pos].payload
            # canonical order puts the section first: l_2(e, xi) = L_X xi / 2
            sgn = 1 if pos % 2 else -1
            return self._clamp(out_deg,
                               sgn * Fraction(1, 2) * lie_derivative(e.X, xi))
        if n == 3 and not negs:
            e = [a.payload for a in args]
            acc = Form.zero(self.ctx)
            for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                acc = acc + pairing(courant(e[i], e[j], self.H), e[k])
            return self._clamp(out_deg, Fraction(-1, 6) * acc)
        # odd n >= 5 on sections, or odd n >= 3 with one lower form
        if negs:
            pos = negs[0]
            xi = args[pos].payload
            Xs = [args[k].payload.X for k in range(n) if k != pos]
            sgn = -1 if pos % 2 else 1
            if n == 3:
                return self._clamp(out_deg,
                                   sgn * self._tri(xi, Xs[0], Xs[1],
                                                   self.xi_full))
            return self._clamp(out_deg,
                               sgn * self._nary_form(xi, Xs, self.xi_full))
        Xs = [a.payload.X for a in args]
        acc = Form.zero(self.ctx)
        for i in range(n):
            rest = [Xs[k] for k in range(n) if k != i]
            term = self._nary_form(args[i].payload.alpha, rest, True)
            acc = acc + (-1 if i % 2 else 1) * term
        hc = (Fraction(n) * bernoulli(n - 1)
              * (-1 if ((n - 1) // 2) % 2 else 1))
        acc = acc + hc * self._iota_all(Xs, self.H)
        return self._clamp(out_deg, acc)


# -- strict morphisms of families --------------------------------------


def check_strict_morphism(src: MultibracketFamily, dst: MultibracketFamily,
                          phi, tuples) -> list[str]:
    """Witnesses of failures of phi(l_n(v)) = l'_n(phi v) on sample tuples."""
    witnesses = []
    for tup in tuples:
        lhs = src.l(list(tup))
        lhs = lhs if lhs.is_zero() else _apply(phi, lhs)
        rhs = dst.l([_apply(phi, a) for a in tup])
        if lhs != rhs:
            witnesses.append(
                f"arity {len(tup)}: phi l = {lhs} but l' phi = {rhs}")
    return witnesses


def _apply(phi, a: GradedElem) -> GradedElem:
    return a if a.is_zero() else phi(a)


def lambda_scale_map(lam, dst_P: Presentation):
    """phi: multiply every component by lambda, retargeting Hamiltonian
    data at the lambda-scaled subbundle (same vector fields)."""
    lam = Fraction(lam)

    def phi(a: GradedElem) -> GradedElem:
        if a.degree == 0:
            return GradedElem(0, HamiltonianDatum(dst_P, a.payload.alpha * lam,
                                                  a.payload.X))
        return GradedElem(a.degree, a.payload * lam)

    return phi


def gauge_map(B: Form):
    """phi = e^{-B}: X + alpha -> X + alpha - iota_X B on degree 0,
    identity below; intertwines the H- and (H + dB)-twisted families."""

    def phi(a: GradedElem) -> GradedElem:
        if a.degree == 0:
            e = a.payload
            return GradedElem(0, SectionEp(e.p, e.X,
                                           e.alpha - contract(e.X, B)))
        return a

    return phi


# -- the prequantum Lie-2 morphism -------------------------------------


def sigma_bracket(e1: SectionEp, e2: SectionEp, sigma: Form) -> SectionEp:
    """[X+f, Y+g]_sigma = [X,Y] + (X(g) - Y(f) + sigma(X,Y)) on TM + R."""
    tw = contract(e2.X, contract(e1.X, sigma)).to_poly()
    f, g = e1.alpha.to_poly(), e2.alpha.to_poly()
    return SectionEp(0, lie_bracket(e1.X, e2.X),
                     Form.from_poly(e1.X(g) - e2.X(f) + tw))


def prequantum_phi0(e: SectionEp) -> SectionEp:
    """(X, f) |-> (X, df), a section of TM + T*M."""
    return SectionEp(1, e.X, deRham(e.alpha))


def prequantum_phi2(e1: SectionEp, e2: SectionEp, sigma: Form) -> Form:
    """(x, y) |-> 1/2 (X(g) - Y(f)) + sigma(X, Y), a function."""
    f, g = e1.alpha.to_poly(), e2.alpha.to_poly()
    tw = contract(e2.X, contract(e1.X, sigma)).to_poly()
    return Form.from_poly(Fraction(1, 2) * (e1.X(g) - e2.X(f)) + tw)


def check_prequantum_morphism(sigma: Form, pairs, triples) -> dict:
    """Check the four Lie-2 morphism equations for phi = (phi0, 0, phi2)
    from (TM + R, [.,.]_sigma) to the untwisted family on TM + T*M.

    The source is concentrated in degree 0, so the chain-map equation and
    the equation pairing phi1 against unary brackets hold vacuously.  On
    non-closed sigma the Jacobiator equation fails; its residual is
    reported and compared against d sigma contracted with the three
    vector fields.
    """
    ctx = sigma.ctx
    fam = TwistedSectionsFamily(2, ctx)
    report = {"chain_map": {"status": "pass", "witnesses": [],
                            "note": "source concentrated in degree 0"},
              "unary_vs_phi1": {"status": "pass", "witnesses": [],
                                "note": "source concentrated in degree 0"}}
    wit = []
    for x, y in pairs:
        lhs = fam.l([fam.form(-1, prequantum_phi2(x, y, sigma))])
        br = sigma_bracket(x, y, sigma)
        rhs = (GradedElem(0, prequantum_phi0(br))
               - fam.l([GradedElem(0, prequantum_phi0(x)),
                        GradedElem(0, prequantum_phi0(y))]))
        if lhs != rhs:
            wit.append(f"d' phi2({x}, {y}) = {lhs} != {rhs}")
    report["bracket_defect"] = {"status": "pass" if not wit else "fail",
                                "witnesses": wit}
    wit, residuals = [], []
    for x, y, z in triples:
        im = [GradedElem(0, prequantum_phi0(v)) for v in (x, y, z)]
        lhs = -fam.l(im)  # phi0 of the source Jacobiator is zero
        rhs = GradedElem.zero()
        for s, (a, b, c) in ((1, (x, y, z)), (-1, (y, x, z)), (1, (z, x, y))):
            rhs = rhs + s * fam.form(
                -1, prequantum_phi2(a, sigma_bracket(b, c, sigma), sigma))
            rhs = rhs + s * fam.l([
                GradedElem(0, prequantum_phi0(a)),
                fam.form(-1, prequantum_phi2(b, c, sigma))])
        if lhs != rhs:
            res = rhs - lhs
            ds = contract(z.X, contract(y.X, contract(x.X, deRham(sigma))))
            matches = (not res.is_zero()) and res == GradedElem(-1, ds)
            residuals.append({"residual": str(res),
                              "equals_dsigma(X,Y,Z)": matches})
            wit.append(f"Jacobiator defect on ({x}; {y}; {z}): {res}")
    report["jacobiator_defect"] = {
        "status": "pass" if not wit else "fail",
        "witnesses": wit, "residuals": residuals}
    report["status"] = ("pass" if all(
        v["status"] == "pass" for k, v in report.items() if k != "status")
        else "fail")
    return report


def prequantization(P, alpha: Form) -> SectionEp:
    """f |-> (X_f, -f) on a presented subbundle of order 1."""
    if P.p != 1:
        raise ValueError("prequantization needs a two-form graph (order 1)")
    X = hamiltonian_solve(P, alpha)
    if X is None:
        raise ValueError("alpha is not Hamiltonian")
    return SectionEp(0, X, -alpha)


def check_prequantization(P, pairs) -> list[str]:
    """Witness failures of P({f,g}) = [P(f), P(g)]_omega and of the
    composite with phi0 being f |-> X_f - df."""
    omega = P.omega
    witnesses = []
    for f, g in pairs:
        ef, eg = prequantization(P, f), prequantization(P, g)
        br = Form.from_poly(
            ham_bracket(HamiltonianDatum(P, f, ef.X),
                        HamiltonianDatum(P, g, eg.X)).to_poly())
        lhs = prequantization(P, br)
        rhs = sigma_bracket(ef, eg, omega)
        if lhs != rhs:
            witnesses.append(f"P({{f,g}}) = {lhs} != [P f, P g] = {rhs}")
        comp = prequantum_phi0(ef)
        if comp != SectionEp(1, ef.X, -deRham(f)):
            witnesses.append(f"phi0 P({f}) = {comp} != X_f - df")
    return witnesses
