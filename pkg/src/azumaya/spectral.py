"""Higgs pairs, the morphism correspondence, spectral covers, and the
one-parameter quantum family.

A Higgs pair is a tuple of commuting square matrices over an affine base
ring; it corresponds to a morphism presentation by closing the generator
images under products inside the matrix algebra (over the base fraction
field, so the closure stabilizes after at most r^2 steps).  For a single
generator the characteristic polynomial cuts out the spectral cover; the
minimal polynomial cuts out the image ideal, and the two agree exactly
when the cover is squarefree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffop import MixedOperator, mixed_mul, mixed_pow
from .errors import NotAdmissibleError, ShapeError
from .linalg import (PolyMatrix, SpanBasis, char_poly, divides_in_v,
                     linear_solve_exact, min_poly, squarefree_in_v)
from .poly import MultiPoly


@dataclass(frozen=True)
class HiggsPair:
    """Free rank-r module with commuting endomorphism images."""

    r: int
    phis: tuple
    base_vars: tuple = ("z",)

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(self.phis))
        object.__setattr__(self, "base_vars", tuple(self.base_vars))
        for m in self.phis:
            if m.shape() != (self.r, self.r):
                raise ShapeError("generator image has wrong shape")
            if not m.variables() <= set(self.base_vars):
                raise ShapeError(
                    f"generator entries must lie in the base ring "
                    f"Q[{', '.join(self.base_vars)}]")


@dataclass(frozen=True)
class MorphismPresentation:
    """Generator images plus a module basis of the subalgebra they generate."""

    generator_images: tuple
    subalgebra_basis: tuple

    def rank(self) -> int:
        return self.subalgebra_basis[0].rows


@dataclass(frozen=True)
class SpectralCover:
    """Monic-in-v cover polynomial and its squarefree flag."""

    poly: MultiPoly
    reduced: bool


@dataclass(frozen=True)
class LambdaConnectionFamily:
    """Family lam*D + A with A over the base ring extended by lam."""

    a: PolyMatrix
    r: int

    def __post_init__(self):
        if self.a.shape() != (self.r, self.r):
            raise ShapeError("family matrix has wrong shape")


def commutativity_admissible(h: HiggsPair) -> bool:
    """True when all generator images pairwise commute."""
    for i in range(len(h.phis)):
        for j in range(i + 1, len(h.phis)):
            if not h.phis[i].commutator(h.phis[j]).is_zero():
                return False
    return True


def _flatten(m: PolyMatrix):
    return list(m.entries)


def higgs_to_morphism(h: HiggsPair) -> MorphismPresentation:
    """Close {I, Phi_1, ..., Phi_k} under products until the span over the
    base fraction field stabilizes (at most r^2 rounds)."""
    if not commutativity_admissible(h):
        raise NotAdmissibleError("generator images do not commute")
    ident = PolyMatrix.identity(h.r)
    span = SpanBasis()
    basis = []
    for cand in (ident,) + h.phis:
        if span.add(_flatten(cand)):
            basis.append(cand)
    frontier = list(basis)
    rounds = 0
    while frontier and rounds < h.r * h.r:
        rounds += 1
        new_frontier = []
        for b in frontier:
            for g in h.phis:
                prod = b * g
                if span.add(_flatten(prod)):
                    basis.append(prod)
                    new_frontier.append(prod)
        frontier = new_frontier
    return MorphismPresentation(h.phis, tuple(basis))


def morphism_to_higgs(m: MorphismPresentation, base_vars=("z",)) -> HiggsPair:
    """Read the Higgs pair back off the generator images."""
    if not m.generator_images:
        return HiggsPair(m.rank(), (), base_vars)
    r = m.generator_images[0].rows
    h = HiggsPair(r, m.generator_images, base_vars)
    if not commutativity_admissible(h):
        raise NotAdmissibleError("generator images do not commute")
    return h


def spectral_cover(h: HiggsPair) -> SpectralCover:
    """Characteristic polynomial of the single generator, with the
    squarefree flag computed over the base fraction field."""
    if len(h.phis) != 1:
        raise ShapeError("spectral cover needs exactly one generator")
    p = char_poly(h.phis[0])
    return SpectralCover(p, squarefree_in_v(p))


def image_ideal(h: HiggsPair) -> MultiPoly:
    """Minimal polynomial of the generator, denominators cleared; divides
    the cover polynomial, with equality when the cover is squarefree."""
    if len(h.phis) != 1:
        raise ShapeError("image ideal needs exactly one generator")
    return min_poly(h.phis[0])


def subalgebra_closed(m: MorphismPresentation) -> bool:
    """Verify products of basis elements stay in the fraction-field span."""
    span = SpanBasis()
    for b in m.subalgebra_basis:
        span.add(_flatten(b))
    for a in m.subalgebra_basis:
        for b in m.subalgebra_basis:
            if not span.contains(_flatten(a * b)):
                return False
    return True


# ---------------------------------------------------------------------------
# curvature on an affine multi-variable base
# ---------------------------------------------------------------------------

def curvature(gammas, base_vars=None):
    """F_ij = d_i Gamma_j - d_j Gamma_i + [Gamma_i, Gamma_j] for i < j."""
    gammas = list(gammas)
    n = len(gammas)
    base_vars = tuple(base_vars) if base_vars else tuple(f"w{i+1}" for i in range(n))
    if len(base_vars) != n:
        raise ShapeError("one base variable per connection matrix")
    r = gammas[0].rows
    for g in gammas:
        if g.shape() != (r, r):
            raise ShapeError("connection matrices must share one square shape")
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            f = (gammas[j].derivative(base_vars[i])
                 - gammas[i].derivative(base_vars[j])
                 + gammas[i].commutator(gammas[j]))
            out[(i, j)] = f
    return out


def is_flat(gammas, base_vars=None) -> bool:
    return all(f.is_zero() for f in curvature(gammas, base_vars).values())


def curvature_via_operators(gammas, base_vars=None):
    """Same 2-form computed independently: the D^0 coefficient of the
    commutators [D_i + Gamma_i, D_j + Gamma_j] in the operator algebra."""
    gammas = list(gammas)
    n = len(gammas)
    base_vars = tuple(base_vars) if base_vars else tuple(f"w{i+1}" for i in range(n))
    r = gammas[0].rows
    ops = []
    for i, g in enumerate(gammas):
        ops.append(MixedOperator.derivation(i, r, base_vars)
                   + MixedOperator.from_matrix(g, base_vars))
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            comm = ops[i].commutator(ops[j])
            for k, m in comm.coeffs.items():
                if sum(k) > 0 and not m.is_zero():
                    raise AssertionError("first-order commutator has higher terms")
            out[(i, j)] = comm.coefficient((0,) * n)
    return out


# ---------------------------------------------------------------------------
# lambda-connections and the quantum family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeibnizCheck:
    ok: bool
    detail: str = ""
    entry: tuple = None


def lambda_connection_check(fam: LambdaConnectionFamily, phi: PolyMatrix,
                            var: str = "z") -> LeibnizCheck:
    """Verify nabla = lam*D + A restricts to phi at lam = 0 and satisfies
    the lam-scaled Leibniz identity on generic sections."""
    if phi.shape() != (fam.r, fam.r):
        raise ShapeError("shapes disagree")
    at_zero = fam.a.subs({"lam": Fraction(0)})
    for i in range(fam.r):
        for j in range(fam.r):
            if at_zero[i, j] != phi[i, j]:
                return LeibnizCheck(
                    False,
                    f"restriction at lam = 0 differs at entry ({i}, {j}): "
                    f"{at_zero[i, j]} vs {phi[i, j]}",
                    (i, j))
    lam = MultiPoly.var("lam")
    zpoly = MultiPoly.var(var)

    def nabla(section):
        return [lam * s.derivative(var) +
                sum((fam.a[i, j] * section[j] for j in range(fam.r)), MultiPoly.zero())
                for i, s in enumerate(section)]

    for j in range(fam.r):
        e = [MultiPoly.const(1) if i == j else MultiPoly.zero() for i in range(fam.r)]
        fs = [zpoly * s for s in e]
        lhs = nabla(fs)
        step = nabla(e)
        rhs = [lam * e[i] + zpoly * step[i] for i in range(fam.r)]
        for i in range(fam.r):
            if lhs[i] != rhs[i]:
                return LeibnizCheck(
                    False, f"Leibniz identity fails at section {j}, row {i}", (i, j))
    return LeibnizCheck(True, "flatness is automatic on a one-variable base")


@dataclass(frozen=True)
class KernelProbe:
    """Outcome of the bounded-degree injectivity probe."""

    degree: int
    monomials: int
    rank: int
    kernel_dim: int

    @property
    def injective(self) -> bool:
        return self.kernel_dim == 0


class LambdaFamily:
    """Evaluator for the deformation family of a single-generator pair.

    At lam = 0 it reports the spectral cover and the image ideal; at a
    nonzero rational lam it probes injectivity of the map sending base/fiber
    monomials w^a p^b to operators via w -> z*I, p -> lam*D + Phi, up to a
    total-degree bound.
    """

    def __init__(self, h: HiggsPair):
        if len(h.phis) != 1:
            raise ShapeError("family needs exactly one generator")
        if len(h.base_vars) != 1:
            raise ShapeError("family needs a one-variable base")
        self.pair = h
        self.var = h.base_vars[0]

    def classical_fiber(self):
        return {"cover": spectral_cover(self.pair), "image_ideal": image_ideal(self.pair)}

    def probe(self, lam, degree: int = 3) -> KernelProbe:
        lam = lam if isinstance(lam, Fraction) else Fraction(lam)
        if lam == 0:
            raise ShapeError("probe requires lam != 0; use classical_fiber()")
        r = self.pair.r
        var = self.var
        zmat = PolyMatrix.identity(r).scale(MultiPoly.var(var))
        zop = MixedOperator.from_matrix(zmat, (var,))
        pop = (MixedOperator.derivation(0, r, (var,)) * lam
               + MixedOperator.from_matrix(self.pair.phis[0], (var,)))
        monomials = [(a, b) for t in range(degree + 1)
                     for a in range(t + 1) for b in [t - a]]
        monomials.sort(key=lambda ab: (sum(ab), ab))
        images = []
        for a, b in monomials:
            img = mixed_mul(mixed_pow(zop, a), mixed_pow(pop, b))
            images.append(img)
        max_k = max((k[0] for img in images for k in img.coeffs), default=0)
        max_deg = 0
        for img in images:
            for m in img.coeffs.values():
                for e in m.entries:
                    max_deg = max(max_deg, e.total_degree())
        rows = []
        for k in range(max_k + 1):
            for idx in range(r * r):
                for dd in range(max_deg + 1):
                    row = []
                    for img in images:
                        entry = img.coefficient((k,)).entries[idx]
                        cs = entry.coefficients_in(var)
                        row.append(cs[dd].as_fraction() if dd < len(cs) else Fraction(0))
                    rows.append(row)
        sol = linear_solve_exact(rows, [Fraction(0)] * len(rows))
        kdim = len(sol.nullspace)
        return KernelProbe(degree, len(monomials), len(monomials) - kdim, kdim)

    def evaluate(self, lam, degree: int = 3):
        lam = lam if isinstance(lam, Fraction) else Fraction(lam)
        if lam == 0:
            return self.classical_fiber()
        return self.probe(lam, degree)


def lambda_family(h: HiggsPair) -> LambdaFamily:
    return LambdaFamily(h)


def image_divides_cover(h: HiggsPair) -> bool:
    """Exact divisibility of the cover by the image ideal (univariate base)."""
    cover = spectral_cover(h).poly
    ideal = image_ideal(h)
    return divides_in_v(ideal, cover, h.base_vars[0])
