"""Matrix differential operators and the rank-2 commutation suite.

``MixedOperator`` models elements sum_k M_k * D^k of the algebra generated
by r x r polynomial matrices and commuting derivations D_1..D_n, normal
form with all matrix factors on the left.  The defining rewrite is the
Leibniz rule  D_i * M = (dM/dw_i + [Gamma_i, M]) + M * D_i; a nonzero
connection matrix Gamma is supported on a one-variable base, where the
normal form is unconditionally well defined.

The rank-2 suite solves  lam * B' + [A, B] = 0  for polynomial B, builds
the closed-form fundamental solution quadruple available when
(a1-a4)^2 + 4 a2 a3 = 0, and classifies the induced module decomposition
by the eigenvalue pattern of the degree-0 term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (NonConstantError, NotSplitError, PreconditionError,
                     ShapeError, ZeroLambdaError)
from .linalg import (PolyMatrix, char_poly, kernel_saturated, linear_solve_exact,
                     min_poly)
from .poly import MultiPoly


class MixedOperator:
    """Normal-ordered sum of PolyMatrix coefficients times D-monomials."""

    __slots__ = ("r", "base_vars", "coeffs", "gamma")

    def __init__(self, r: int, base_vars, coeffs=None, gamma: PolyMatrix = None):
        base_vars = tuple(base_vars)
        if gamma is not None and len(base_vars) != 1:
            raise ShapeError("connection matrices only supported on a 1-variable base")
        if gamma is not None and gamma.shape() != (r, r):
            raise ShapeError("connection matrix has wrong shape")
        clean = {}
        for k, m in (coeffs or {}).items():
            k = (k,) if isinstance(k, int) else tuple(k)
            if len(k) != len(base_vars):
                raise ShapeError("derivative multi-index length mismatch")
            if m.shape() != (r, r):
                raise ShapeError("coefficient matrix has wrong shape")
            if not m.is_zero():
                clean[k] = clean.get(k, PolyMatrix.zeros(r)) + m
        clean = {k: m for k, m in clean.items() if not m.is_zero()}
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "base_vars", base_vars)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "gamma", gamma)

    def __setattr__(self, *_):
        raise AttributeError("MixedOperator is immutable")

    @staticmethod
    def from_matrix(m: PolyMatrix, base_vars=("z",), gamma=None) -> "MixedOperator":
        zero = (0,) * len(tuple(base_vars))
        return MixedOperator(m.rows, base_vars, {zero: m}, gamma)

    @staticmethod
    def derivation(i: int, r: int, base_vars=("z",), gamma=None) -> "MixedOperator":
        k = tuple(1 if j == i else 0 for j in range(len(tuple(base_vars))))
        return MixedOperator(r, base_vars, {k: PolyMatrix.identity(r)}, gamma)

    def _same_context(self, other: "MixedOperator"):
        if (self.r != other.r or self.base_vars != other.base_vars
                or self.gamma != other.gamma):
            raise ShapeError("mixed operators live in different algebras")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        self._same_context(other)
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out.get(k, PolyMatrix.zeros(self.r)) + m
        return MixedOperator(self.r, self.base_vars, out, self.gamma)

    def __neg__(self):
        return MixedOperator(self.r, self.base_vars,
                             {k: -m for k, m in self.coeffs.items()}, self.gamma)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MixedOperator):
            return mixed_mul(self, other)
        return MixedOperator(self.r, self.base_vars,
                             {k: m.scale(other) for k, m in self.coeffs.items()},
                             self.gamma)

    def __eq__(self, other):
        return (isinstance(other, MixedOperator) and self.r == other.r
                and self.base_vars == other.base_vars and self.gamma == other.gamma
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.r, self.base_vars, frozenset(self.coeffs.items())))

    def commutator(self, other) -> "MixedOperator":
        return mixed_mul(self, other) - mixed_mul(other, self)

    def coefficient(self, k) -> PolyMatrix:
        k = (k,) if isinstance(k, int) else tuple(k)
        return self.coeffs.get(k, PolyMatrix.zeros(self.r))

    def covariant_derivative(self, m: PolyMatrix, i: int) -> PolyMatrix:
        """Induced action of D_i on matrix coefficients."""
        out = m.derivative(self.base_vars[i])
        if self.gamma is not None:
            out = out + self.gamma.commutator(m)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = ("D",) if len(self.base_vars) == 1 else tuple(
            f"D{i+1}" for i in range(len(self.base_vars)))
        keys = sorted(self.coeffs, key=lambda k: (sum(k), k), reverse=True)
        parts = []
        for k in keys:
            mono = "*".join(f"{nm}^{e}" if e > 1 else nm for nm, e in zip(names, k) if e)
            body = str(self.coeffs[k])
            parts.append(f"{body}*{mono}" if mono else body)
        return " + ".join(parts)

    def __repr__(self):
        return f"MixedOperator({str(self)!r})"


def mixed_mul(p: MixedOperator, q: MixedOperator) -> MixedOperator:
    """Normal-ordered product via D^j M = sum_i C(j,i) (D^i M) D^(j-i)."""
    p._same_context(q)
    n = len(p.base_vars)
    out = {}
    for jk, m in p.coeffs.items():
        for kk, nmat in q.coeffs.items():
            # push D^jk through nmat one base variable at a time
            pieces = [(jk, nmat)]
            for t in range(n):
                new_pieces = []
                for rem, mat in pieces:
                    jt = rem[t]
                    der = mat
                    ders = [der]
                    for _ in range(jt):
                        der = p.covariant_derivative(der, t)
                        ders.append(der)
                    for i in range(jt + 1):
                        c = comb(jt, i)
                        rem2 = rem[:t] + (jt - i,) + rem[t + 1:]
                        piece = ders[i] if c == 1 else ders[i].scale(c)
                        new_pieces.append((rem2, piece))
                pieces = new_pieces
            for rem, mat in pieces:
                key = tuple(r + k for r, k in zip(rem, kk))
                acc = m * mat
                out[key] = out.get(key, PolyMatrix.zeros(p.r)) + acc
    return MixedOperator(p.r, p.base_vars, out, p.gamma)


def mixed_pow(p: MixedOperator, k: int) -> MixedOperator:
    zero = (0,) * len(p.base_vars)
    out = MixedOperator(p.r, p.base_vars, {zero: PolyMatrix.identity(p.r)}, p.gamma)
    for _ in range(k):
        out = mixed_mul(out, p)
    return out


# ---------------------------------------------------------------------------
# the commutation constraint and its polynomial solution space
# ---------------------------------------------------------------------------

def commutation_constraint(a: PolyMatrix, b: PolyMatrix, lam, var: str = "z") -> PolyMatrix:
    """lam * dB/dz + A*B - B*A; the D^0 coefficient of [lam*D + A, B]."""
    if not a.is_square() or a.shape() != b.shape():
        raise ShapeError("matrices must be square and of equal size")
    lam_p = lam if isinstance(lam, MultiPoly) else MultiPoly.const(lam)
    return b.derivative(var).scale(lam_p) + a.commutator(b)


def default_degree_bound(a: PolyMatrix) -> int:
    """2 * (max entry degree) + 2, matching the quadratic growth of the
    closed-form solution quadruple."""
    return 2 * max((e.total_degree() for e in a.entries), default=0) + 2


def solve_commutation(a: PolyMatrix, lam, deg_bound: int = None, var: str = "z"):
    """Rational basis of {B : deg entries <= deg_bound, lam B' + [A,B] = 0}.

    Coefficient ansatz ordered entry-major then z-degree ascending; the
    returned basis is the reduced-echelon nullspace in those coordinates,
    so output is deterministic.
    """
    lam = lam if isinstance(lam, Fraction) else Fraction(lam)
    if lam == 0:
        raise ZeroLambdaError("lam must be nonzero")
    if not a.is_square():
        raise ShapeError("A must be square")
    if not set(a.variables()) <= {var}:
        raise ShapeError(f"entries of A must lie in the base ring Q[{var}]")
    if deg_bound is None:
        deg_bound = default_degree_bound(a)
    if deg_bound < 0:
        raise ShapeError("deg_bound must be nonnegative")
    r = a.rows
    z = MultiPoly.var(var)
    unknowns = [(i, j, d) for i in range(r) for j in range(r)
                for d in range(deg_bound + 1)]
    max_deg = deg_bound + max((e.total_degree() for e in a.entries), default=0)
    rows_idx = [(i, j, d) for i in range(r) for j in range(r)
                for d in range(max_deg + 1)]
    columns = []
    for (i, j, d) in unknowns:
        basis_mat = PolyMatrix(r, r, [z ** d if (i, j) == (p, q) else MultiPoly.zero()
                                      for p in range(r) for q in range(r)])
        image = commutation_constraint(a, basis_mat, lam, var)
        col = []
        for (p, q, dd) in rows_idx:
            entry = image[p, q]
            cs = entry.coefficients_in(var)
            col.append(cs[dd].as_fraction() if dd < len(cs) else Fraction(0))
        columns.append(col)
    matrix = [[columns[u][ridx] for u in range(len(unknowns))]
              for ridx in range(len(rows_idx))]
    sol = linear_solve_exact(matrix, [Fraction(0)] * len(rows_idx))
    basis = []
    for vec in sol.nullspace:
        entries = [MultiPoly.zero()] * (r * r)
        for (i, j, d), c in zip(unknowns, vec):
            if c:
                entries[i * r + j] = entries[i * r + j] + c * z ** d
        basis.append(PolyMatrix(r, r, entries))
    return basis


def discriminant(a: PolyMatrix) -> MultiPoly:
    """(a1 - a4)^2 + 4 a2 a3 for a 2x2 matrix [[a1, a2], [a3, a4]]."""
    if a.shape() != (2, 2):
        raise ShapeError("discriminant is defined for 2x2 matrices")
    a1, a2, a3, a4 = a.entries
    return (a1 - a4) ** 2 + 4 * a2 * a3


def fundamental_solutions(a: PolyMatrix, lam, var: str = "z"):
    """The closed-form solution quadruple B1..B4 of lam B' + [A,B] = 0.

    Requires a constant 2x2 A with vanishing discriminant; each output has
    degree-0 term equal to one elementary matrix, so rational combinations
    sum_i bhat_i B_i have degree-0 term [[b1, b2], [b3, b4]].
    """
    lam = lam if isinstance(lam, Fraction) else Fraction(lam)
    if lam == 0:
        raise ZeroLambdaError("lam must be nonzero")
    if a.shape() != (2, 2):
        raise ShapeError("expected a 2x2 matrix")
    if not a.is_constant():
        raise PreconditionError("closed forms require constant entries; "
                                "use solve_commutation for polynomial A")
    if not discriminant(a).is_zero():
        raise PreconditionError("discriminant (a1-a4)^2 + 4 a2 a3 must vanish")
    a1, a2, a3, a4 = (e.as_fraction() for e in a.entries)
    d = a1 - a4
    z = MultiPoly.var(var)
    li = 1 / lam
    li2 = li * li
    z2 = z ** 2
    half = Fraction(1, 2)
    b1 = PolyMatrix.from_rows([
        [1 + li2 * a2 * a3 * z2, li * a2 * z - half * li2 * d * a2 * z2],
        [-li * a3 * z - half * li2 * d * a3 * z2, -li2 * a2 * a3 * z2]])
    b2 = PolyMatrix.from_rows([
        [li * a3 * z - half * li2 * d * a3 * z2, 1 - li * d * z - li2 * a2 * a3 * z2],
        [-li2 * a3 * a3 * z2, -li * a3 * z + half * li2 * d * a3 * z2]])
    b3 = PolyMatrix.from_rows([
        [-li * a2 * z - half * li2 * d * a2 * z2, -li2 * a2 * a2 * z2],
        [1 + li * d * z - li2 * a2 * a3 * z2, li * a2 * z + half * li2 * d * a2 * z2]])
    b4 = PolyMatrix.from_rows([
        [-li2 * a2 * a3 * z2, -li * a2 * z + half * li2 * d * a2 * z2],
        [li * a3 * z + half * li2 * d * a3 * z2, 1 + li2 * a2 * a3 * z2]])
    return [b1, b2, b3, b4]


# ---------------------------------------------------------------------------
# classification of the pushforward module
# ---------------------------------------------------------------------------

CASE_DISTINCT = "DistinctEigen"
CASE_SEMISIMPLE = "RepeatedSemisimple"
CASE_NILPOTENT = "RepeatedNilpotent"


@dataclass(frozen=True)
class Component:
    """Saturated eigen-submodule attached to one eigenvalue."""

    eigenvalue: Fraction
    basis: tuple           # tuple of vectors, each a tuple of MultiPoly
    rank: int


@dataclass(frozen=True)
class HiggsingReport:
    """Eigenvalue pattern of B and the induced submodule decomposition."""

    case_tag: str
    eigenvalues: tuple
    kernel_ideal_gen: MultiPoly
    components: tuple
    filtration_flag: bool

    def to_json(self):
        return {
            "case": self.case_tag,
            "eigenvalues": [str(e) for e in self.eigenvalues],
            "kernel_ideal": str(self.kernel_ideal_gen),
            "components": [
                {"eigenvalue": str(c.eigenvalue),
                 "rank": c.rank,
                 "basis": [[str(p) for p in vec] for vec in c.basis]}
                for c in self.components],
            "filtration": self.filtration_flag,
        }


def _sqrt_fraction(c: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    from math import isqrt
    if c < 0:
        return None
    pn, pd = isqrt(c.numerator), isqrt(c.denominator)
    if pn * pn == c.numerator and pd * pd == c.denominator:
        return Fraction(pn, pd)
    return None


def classify_higgsing(b: PolyMatrix, var: str = "z") -> HiggsingReport:
    """Trichotomy for a 2x2 B over the polynomial base ring.

    The characteristic polynomial must be z-free and split over Q; the
    report carries the minimal polynomial as the kernel ideal generator
    and the saturated kernel of B - nu for each eigenvalue nu.
    """
    if b.shape() != (2, 2):
        raise ShapeError("classification applies to 2x2 matrices")
    cp = char_poly(b)
    if not set(cp.vars) <= {"v"}:
        raise NonConstantError(
            f"characteristic polynomial has base-dependent coefficients: {cp}")
    cs = cp.coefficients_in("v")
    det = cs[0].as_fraction() if len(cs) > 0 else Fraction(0)
    tr = -cs[1].as_fraction() if len(cs) > 1 else Fraction(0)
    disc = tr * tr - 4 * det
    root = _sqrt_fraction(disc)
    if root is None:
        raise NotSplitError(f"v^2 - {tr}v + {det} does not split over Q")
    nu_minus = (tr - root) / 2
    nu_plus = (tr + root) / 2
    mp = min_poly(b)
    ident = PolyMatrix.identity(2)

    def component(nu):
        basis = kernel_saturated(b - ident.scale(nu))
        return Component(nu, tuple(tuple(v) for v in basis), len(basis))

    if nu_minus != nu_plus:
        comps = (component(nu_minus), component(nu_plus))
        return HiggsingReport(CASE_DISTINCT, (nu_minus, nu_plus), mp, comps, False)
    nu = nu_minus
    nilpotent = mp.degree_in("v") == 2
    comps = (component(nu),)
    tag = CASE_NILPOTENT if nilpotent else CASE_SEMISIMPLE
    return HiggsingReport(tag, (nu,), mp, comps, nilpotent)


def pushforward_report(a: PolyMatrix, bhat, lam, var: str = "z") -> HiggsingReport:
    """Classify B = sum_i bhat_i B_i built from the fundamental quadruple."""
    if len(bhat) != 4:
        raise ShapeError("bhat must have four coordinates")
    basis = fundamental_solutions(a, lam, var)
    bhat = [c if isinstance(c, Fraction) else Fraction(c) for c in bhat]
    b = PolyMatrix.zeros(2)
    for c, mat in zip(bhat, basis):
        b = b + mat.scale(c)
    return classify_higgsing(b, var)
