"""Cech-level twisted-sheaf machinery on combinatorial cover nerves.

Covers are abstract finite index sets: every check implemented here
(cocycle, gluing, twist matching, refinement) consumes only incidence-
indexed data.  Cochain values are constants (units of Q in ``qstar`` mode,
Z/n in additive ``mu`` mode) and cochains are normalized: the value on
any tuple with a repeated index is the identity.  1-cochains are
antisymmetric (b_ji = b_ij^{-1}), matching gluing-data conventions, which
makes every coboundary normalized and alternating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import (CoverMismatchError, InvalidInputError,
                     UndecidableGroupError)
from .poly import MultiPoly
from .zmod import solve_mod


# ---------------------------------------------------------------------------
# value groups
# ---------------------------------------------------------------------------

class Qstar:
    """Multiplicative group of nonzero rationals."""

    name = "qstar"

    @staticmethod
    def identity():
        return Fraction(1)

    @staticmethod
    def op(a, b):
        return a * b

    @staticmethod
    def inv(a):
        return 1 / a

    @staticmethod
    def validate(a):
        a = a if isinstance(a, Fraction) else Fraction(a)
        if a == 0:
            raise InvalidInputError("0 is not a unit")
        return a

    @staticmethod
    def to_json(a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Qstar)

    def __hash__(self):
        return hash("qstar")

    def __repr__(self):
        return "Qstar()"


class Mu:
    """Cyclic group of order n, stored additively as Z/n."""

    name = "mu"

    def __init__(self, n: int):
        if n < 1:
            raise InvalidInputError("mu requires n >= 1")
        self.n = n

    def identity(self):
        return 0

    def op(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def validate(self, a):
        return int(a) % self.n

    @staticmethod
    def to_json(a):
        return a

    def __eq__(self, other):
        return isinstance(other, Mu) and self.n == other.n

    def __hash__(self):
        return hash(("mu", self.n))

    def __repr__(self):
        return f"Mu({self.n})"


@dataclass(frozen=True)
class CoverNerve:
    """Finite index set standing in for an open/etale cover."""

    index_count: int
    labels: tuple = ()

    def __post_init__(self):
        if self.index_count < 1:
            raise InvalidInputError("a cover needs at least one index")
        labels = tuple(self.labels) or tuple(f"U{i}" for i in range(self.index_count))
        if len(labels) != self.index_count:
            raise InvalidInputError("one label per index")
        object.__setattr__(self, "labels", labels)

    def indices(self):
        return range(self.index_count)


def _check_same_context(a, b):
    if a.nerve != b.nerve or a.group != b.group:
        raise CoverMismatchError("cochains live on different covers or groups")


class Cochain1:
    """Normalized antisymmetric 1-cochain, determined by values on i < j."""

    def __init__(self, nerve: CoverNerve, group, values=None):
        self.nerve = nerve
        self.group = group
        store = {}
        for (i, j), val in (values or {}).items():
            if not (0 <= i < nerve.index_count and 0 <= j < nerve.index_count):
                raise InvalidInputError(f"index out of range: {(i, j)}")
            val = group.validate(val)
            if i == j:
                if val != group.identity():
                    raise InvalidInputError("diagonal values must be the identity")
                continue
            key, v = ((i, j), val) if i < j else ((j, i), group.inv(val))
            if key in store and store[key] != v:
                raise InvalidInputError(f"conflicting values for pair {key}")
            store[key] = v
        self.values = store

    def value(self, i, j):
        if i == j:
            return self.group.identity()
        if i < j:
            return self.values.get((i, j), self.group.identity())
        return self.group.inv(self.values.get((j, i), self.group.identity()))

    def __eq__(self, other):
        return (isinstance(other, Cochain1) and self.nerve == other.nerve
                and self.group == other.group
                and all(self.value(i, j) == other.value(i, j)
                        for i in self.nerve.indices() for j in self.nerve.indices()))


class UnitCochain2:
    """Normalized 2-cochain with unit values, total on ordered triples."""

    def __init__(self, nerve: CoverNerve, group, values=None):
        self.nerve = nerve
        self.group = group
        store = {}
        for key, val in (values or {}).items():
            i, j, k = key
            if not all(0 <= t < nerve.index_count for t in key):
                raise InvalidInputError(f"index out of range: {key}")
            val = group.validate(val)
            if len({i, j, k}) < 3:
                if val != group.identity():
                    raise InvalidInputError(
                        "values on tuples with repeated indices must be the identity")
                continue
            if val != group.identity():
                store[(i, j, k)] = val
        self.values = store

    def value(self, i, j, k):
        return self.values.get((i, j, k), self.group.identity())

    def is_trivial(self) -> bool:
        return not self.values

    def __eq__(self, other):
        if not isinstance(other, UnitCochain2):
            return False
        if self.nerve != other.nerve or self.group != other.group:
            return False
        return all(self.value(*t) == other.value(*t)
                   for t in product(self.nerve.indices(), repeat=3))

    @staticmethod
    def trivial(nerve: CoverNerve, group) -> "UnitCochain2":
        return UnitCochain2(nerve, group, {})


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an equational check; ``where`` names the first offender."""

    ok: bool
    where: tuple = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_2cocycle(alpha: UnitCochain2) -> CheckResult:
    """a_jkl * a_ikl^-1 * a_ijl * a_ijk^-1 = 1 on every quadruple."""
    g = alpha.group
    for i, j, k, l in product(alpha.nerve.indices(), repeat=4):
        word = g.op(g.op(alpha.value(j, k, l), g.inv(alpha.value(i, k, l))),
                    g.op(alpha.value(i, j, l), g.inv(alpha.value(i, j, k))))
        if word != g.identity():
            return CheckResult(False, (i, j, k, l),
                               f"cocycle identity fails on {(i, j, k, l)}")
    return CheckResult(True)


def coboundary(beta: Cochain1) -> UnitCochain2:
    """(d beta)_ijk = b_jk * b_ik^-1 * b_ij; always a 2-cocycle."""
    g = beta.group
    values = {}
    for t in product(beta.nerve.indices(), repeat=3):
        i, j, k = t
        if len({i, j, k}) < 3:
            continue
        values[t] = g.op(g.op(beta.value(j, k), g.inv(beta.value(i, k))),
                         beta.value(i, j))
    return UnitCochain2(beta.nerve, g, values)


def is_coboundary(alpha: UnitCochain2):
    """Decide d beta = alpha in mu_n mode; returns (True, witness) or
    (False, None).  The witness replays exactly through ``coboundary``."""
    if not isinstance(alpha.group, Mu):
        raise UndecidableGroupError("coboundary testing needs the mu_n mode")
    n = alpha.group.n
    idx = list(alpha.nerve.indices())
    # coboundaries are alternating; reject other cochains outright
    for i, j, k in product(idx, repeat=3):
        if len({i, j, k}) < 3:
            continue
        if alpha.value(i, j, k) != (-alpha.value(i, k, j)) % n:
            return (False, None)
        if alpha.value(i, j, k) != (-alpha.value(j, i, k)) % n:
            return (False, None)
    pairs = [(i, j) for i in idx for j in idx if i < j]
    pos = {p: c for c, p in enumerate(pairs)}
    rows, rhs = [], []
    for i, j, k in ((i, j, k) for i in idx for j in idx for k in idx if i < j < k):
        row = [0] * len(pairs)
        row[pos[(j, k)]] += 1
        row[pos[(i, k)]] -= 1
        row[pos[(i, j)]] += 1
        rows.append([c % n for c in row])
        rhs.append(alpha.value(i, j, k))
    if rows:
        sol = solve_mod(rows, rhs, n)
        if sol is None:
            return (False, None)
    else:
        sol = []
    witness = Cochain1(alpha.nerve, alpha.group,
                       {p: s for p, s in zip(pairs, sol)})
    assert coboundary(witness) == alpha
    return (True, witness)


def refine(alpha: UnitCochain2, sigma) -> UnitCochain2:
    """Pull back along an index map sigma: J -> I."""
    sigma = list(sigma)
    if any(not (0 <= s < alpha.nerve.index_count) for s in sigma):
        raise InvalidInputError("refinement map hits a missing index")
    nerve = CoverNerve(len(sigma))
    values = {}
    for t in product(range(len(sigma)), repeat=3):
        if len(set(t)) < 3:
            continue
        val = alpha.value(sigma[t[0]], sigma[t[1]], sigma[t[2]])
        if val != alpha.group.identity():
            values[t] = val
    return UnitCochain2(nerve, alpha.group, values)


# -- twist arithmetic --------------------------------------------------------

def twist_of_tensor(a: UnitCochain2, b: UnitCochain2) -> UnitCochain2:
    _check_same_context(a, b)
    g = a.group
    values = {}
    for t in set(a.values) | set(b.values):
        values[t] = g.op(a.value(*t), b.value(*t))
    return UnitCochain2(a.nerve, g, values)


def twist_inverse(a: UnitCochain2) -> UnitCochain2:
    return UnitCochain2(a.nerve, a.group,
                        {t: a.group.inv(v) for t, v in a.values.items()})


def twist_of_hom(a: UnitCochain2, b: UnitCochain2) -> UnitCochain2:
    return twist_of_tensor(twist_inverse(a), b)


def twist_matching_check(alpha_pullback: UnitCochain2,
                         alphab_pullback: UnitCochain2) -> CheckResult:
    """On-the-nose equality of cochains on the shared (refined) nerve."""
    if (alpha_pullback.nerve != alphab_pullback.nerve
            or alpha_pullback.group != alphab_pullback.group):
        raise CoverMismatchError("twists live on different covers or groups")
    for t in product(alpha_pullback.nerve.indices(), repeat=3):
        if alpha_pullback.value(*t) != alphab_pullback.value(*t):
            return CheckResult(False, t, f"twists disagree on {t}")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# twisted bundles with rational gluing matrices
# ---------------------------------------------------------------------------

def mat_identity(r):
    return tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))


def mat_mul(a, b):
    r = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(r)) for j in range(r))
                 for i in range(r))


def mat_scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_inv(a):
    """Inverse by Gauss-Jordan; None when singular."""
    r = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(r)]
           for i, row in enumerate(a)]
    for col in range(r):
        piv = next((i for i in range(col, r) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [x / f for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col]:
                g = aug[i][col]
                aug[i] = [x - g * y for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(row[r:]) for row in aug)


def _as_qmatrix(rows, r):
    rows = [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in rows]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise InvalidInputError(f"expected an {r}x{r} matrix")
    return tuple(tuple(row) for row in rows)


class TwistedBundle:
    """Rank-r gluing data against a unit 2-cochain twist.

    The stored data is raw; ``twisted_gluing_check`` verifies the identity
    diagonal, the inversion symmetry, and the twisted cocycle condition.
    """

    def __init__(self, rank: int, nerve: CoverNerve, gluing, twist: UnitCochain2):
        if twist.nerve != nerve:
            raise CoverMismatchError("twist lives on a different cover")
        self.rank = rank
        self.nerve = nerve
        self.twist = twist
        self.gluing = {}
        for (i, j), mat in (gluing or {}).items():
            if not (0 <= i < nerve.index_count and 0 <= j < nerve.index_count):
                raise InvalidInputError(f"gluing index out of range: {(i, j)}")
            self.gluing[(i, j)] = _as_qmatrix(mat, rank)

    def g(self, i, j):
        return self.gluing.get((i, j), mat_identity(self.rank))

    def scalar_twist(self, i, j, k):
        """Twist value as a rational scalar (faithful only for qstar, mu_1, mu_2)."""
        val = self.twist.value(i, j, k)
        if isinstance(self.twist.group, Qstar):
            return val
        n = self.twist.group.n
        if n == 1:
            return Fraction(1)
        if n == 2:
            return Fraction(-1) ** val
        raise InvalidInputError(
            "mu_n twists with n > 2 have no faithful rational embedding; "
            "use qstar values for gluing checks")


def twisted_gluing_check(e: TwistedBundle) -> CheckResult:
    """Conditions: (1) g_ii = I, (2) g_ij g_ji = I, and
    (3) g_ki g_jk g_ij = alpha_ijk I, reported in lexicographic order."""
    ident = mat_identity(e.rank)
    for i in e.nerve.indices():
        if e.g(i, i) != ident:
            return CheckResult(False, (i, i), f"g_{i}{i} is not the identity")
    for i, j in product(e.nerve.indices(), repeat=2):
        if i != j and mat_mul(e.g(i, j), e.g(j, i)) != ident:
            return CheckResult(False, (i, j), f"g_{i}{j} is not inverse to g_{j}{i}")
    for i, j, k in product(e.nerve.indices(), repeat=3):
        lhs = mat_mul(e.g(k, i), mat_mul(e.g(j, k), e.g(i, j)))
        rhs = mat_scale(ident, e.scalar_twist(i, j, k))
        if lhs != rhs:
            return CheckResult(False, (i, j, k),
                               f"twisted cocycle condition fails on {(i, j, k)}")
    return CheckResult(True)


def endomorphism_azumaya(e: TwistedBundle) -> TwistedBundle:
    """Descend End(E): conjugation gluing h_ij(M) = g_ij M g_ij^-1 on r x r
    matrices, packaged as an untwisted rank-r^2 bundle (the twist scalars
    cancel, so the ordinary cocycle condition holds and is re-checkable
    through ``twisted_gluing_check``)."""
    chk = twisted_gluing_check(e)
    if not chk.ok:
        raise InvalidInputError(f"input fails the twisted gluing check: {chk.detail}")
    r = e.rank
    gluing = {}
    for (i, j), g in e.gluing.items():
        ginv = mat_inv(g)
        if ginv is None:
            raise InvalidInputError(f"gluing matrix g_{i}{j} is singular")
        cols = []
        for a in range(r):
            for b in range(r):
                basis = tuple(tuple(Fraction(int(p == a and q == b)) for q in range(r))
                              for p in range(r))
                img = mat_mul(g, mat_mul(basis, ginv))
                cols.append([img[p][q] for p in range(r) for q in range(r)])
        h = tuple(tuple(cols[c][rw] for c in range(r * r)) for rw in range(r * r))
        gluing[(i, j)] = h
    trivial = UnitCochain2.trivial(e.nerve, e.twist.group)
    return TwistedBundle(r * r, e.nerve, gluing, trivial)


# ---------------------------------------------------------------------------
# sheaves on the projective line and twisted Hilbert polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SheafOnP1:
    """Split coherent sheaf: direct sum of line-bundle degrees plus a
    finite-length torsion part (support points do not enter the Euler
    characteristic, so only the total length is recorded)."""

    summands: tuple = ()
    torsion_length: int = 0

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(int(a) for a in self.summands))
        if self.torsion_length < 0:
            raise InvalidInputError("torsion length must be nonnegative")

    @staticmethod
    def torsion_at(support) -> "SheafOnP1":
        """Torsion sheaf from (point, length) pairs; only lengths matter."""
        total = 0
        for _, length in support:
            if length < 0:
                raise InvalidInputError("lengths must be nonnegative")
            total += length
        return SheafOnP1((), total)

    def dim(self) -> int:
        return 1 if self.summands else 0


def hilbert_poly(f: SheafOnP1, g_rank: int, g_summands) -> MultiPoly:
    """Euler characteristic m -> chi((F tensor G-dual)(m)) as a polynomial.

    Each pair of line summands O(a) of F and O(c) of G contributes
    m + a - c + 1; the torsion part contributes its length times rank(G).
    The degree equals dim F.
    """
    g_summands = [int(c) for c in g_summands]
    if g_rank < 1 or len(g_summands) != g_rank:
        raise InvalidInputError("rank must match the number of summands of G")
    m = MultiPoly.var("m")
    out = MultiPoly.const(f.torsion_length * g_rank)
    for a in f.summands:
        for c in g_summands:
            out = out + m + (a - c + 1)
    return out


def morphism_hilbert_poly(summands) -> MultiPoly:
    """chi of a pushforward presented as sum of O(a_i) pieces whose support
    meets the second polarization with degree d_i: sum of a_i + m(1+d_i) + 1."""
    m = MultiPoly.var("m")
    out = MultiPoly.zero()
    for a, d in summands:
        out = out + m * (1 + int(d)) + (int(a) + 1)
    return out


# ---------------------------------------------------------------------------
# JSON codecs (the CLI wire format)
# ---------------------------------------------------------------------------

def group_from_json(payload: dict):
    name = payload.get("group")
    if name == "qstar":
        return Qstar()
    if name == "mu":
        return Mu(int(payload["n"]))
    raise InvalidInputError(f"unknown group {name!r}")


def _exact_value(raw, group):
    if isinstance(raw, float):
        raise InvalidInputError(
            "floating-point values are not exact; send rationals as strings")
    return Fraction(raw) if isinstance(group, Qstar) else int(raw)


def cochain2_from_json(payload: dict) -> UnitCochain2:
    group = group_from_json(payload)
    nerve = CoverNerve(int(payload["indices"]))
    values = {}
    for item in payload.get("values", []):
        i, j, k = item["ijk"]
        values[(i, j, k)] = _exact_value(item["v"], group)
    return UnitCochain2(nerve, group, values)


def cochain1_from_json(payload: dict) -> Cochain1:
    group = group_from_json(payload)
    nerve = CoverNerve(int(payload["indices"]))
    values = {}
    for item in payload.get("values", []):
        i, j = item["ij"]
        values[(i, j)] = _exact_value(item["v"], group)
    return Cochain1(nerve, group, values)


def cochain2_to_json(alpha: UnitCochain2) -> dict:
    out = {"group": alpha.group.name, "indices": alpha.nerve.index_count,
           "values": [{"ijk": list(t), "v": alpha.group.to_json(v)}
                      for t, v in sorted(alpha.values.items())]}
    if isinstance(alpha.group, Mu):
        out["n"] = alpha.group.n
    return out


def cochain1_to_json(beta: Cochain1) -> dict:
    out = {"group": beta.group.name, "indices": beta.nerve.index_count,
           "values": [{"ij": list(t), "v": beta.group.to_json(v)}
                      for t, v in sorted(beta.values.items())]}
    if isinstance(beta.group, Mu):
        out["n"] = beta.group.n
    return out


def bundle_from_json(payload: dict) -> TwistedBundle:
    rank = int(payload["rank"])
    nerve = CoverNerve(int(payload["indices"]))
    twist = cochain2_from_json(payload["twist"]) if "twist" in payload else \
        UnitCochain2.trivial(nerve, Qstar())
    if twist.nerve.index_count != nerve.index_count:
        raise CoverMismatchError("twist nerve size differs from bundle nerve")
    twist = UnitCochain2(nerve, twist.group, twist.values)
    gluing = {}
    for item in payload.get("gluing", []):
        i, j = item["ij"]
        for row in item["g"]:
            for x in row:
                if isinstance(x, float):
                    raise InvalidInputError(
                        "floating-point gluing entries are not exact; "
                        "send rationals as strings")
        gluing[(i, j)] = [[Fraction(x) for x in row] for row in item["g"]]
    return TwistedBundle(rank, nerve, gluing, twist)
