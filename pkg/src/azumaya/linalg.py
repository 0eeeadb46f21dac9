"""Exact linear algebra: rational matrices, polynomial matrices, kernels.

Everything is deterministic: elimination always picks the first usable
pivot, nullspace bases are in the standard reduced-echelon form (free
coordinate set to 1, pivots filled in), and polynomial outputs are
primitive with a fixed sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ShapeError
from .poly import MultiPoly, ONE, RatFunc, dense_divmod, from_dense, to_dense


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


def rref(rows):
    """In-place-free reduced row echelon form over any exact field.

    Entries must support +, -, *, / and zero testing via ``_is_zero``.
    Returns (reduced rows, pivot column list).
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(rows)):
            if not _is_zero(rows[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [x / inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not _is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows, pivots


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set of an exact linear system."""

    consistent: bool
    particular: tuple | None
    nullspace: tuple


def nullspace_from_rref(rows, pivots, ncols):
    """Standard-form kernel basis (free coordinate = 1) from a rational RREF."""
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][fc]
        basis.append(tuple(vec))
    return tuple(basis)


def linear_solve_exact(matrix, rhs=None) -> LinearSolution:
    """Exact affine solution set of M x = rhs over Q.

    Returns a particular solution (free coordinates zero) plus a
    nullspace basis, or ``consistent=False``.
    """
    m = [[_as_frac(x) for x in row] for row in matrix]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    if rhs is None:
        rhs = [Fraction(0)] * nrows
    rhs = [_as_frac(x) for x in rhs]
    if len(rhs) != nrows:
        raise ShapeError("rhs length does not match row count")
    aug = [row + [b] for row, b in zip(m, rhs)]
    if nrows == 0:
        return LinearSolution(True, tuple(Fraction(0) for _ in range(ncols)),
                              tuple(_unit(ncols, i) for i in range(ncols)))
    red, pivots = rref(aug)
    if ncols in pivots:
        return LinearSolution(False, None, ())
    particular = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        particular[pc] = red[r][ncols]
    body = [row[:ncols] for row in red]
    nut = nullspace_from_rref(body, pivots, ncols)
    return LinearSolution(True, tuple(particular), nut)


def _unit(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def _as_frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------

def _as_poly(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.const(x)
    if isinstance(x, str):
        from .poly import parse_poly
        return parse_poly(x)
    raise TypeError(f"not a polynomial entry: {x!r}")


class PolyMatrix:
    """Dense matrix of MultiPoly entries (row-major)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = [_as_poly(e) for e in entries]
        if rows <= 0 or cols <= 0:
            raise ShapeError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, *_):
        raise AttributeError("PolyMatrix is immutable")

    @staticmethod
    def from_rows(rows) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        return PolyMatrix(r, c, [e for row in rows for e in row])

    @staticmethod
    def identity(n: int) -> "PolyMatrix":
        return PolyMatrix(n, n, [ONE if i == j else MultiPoly.zero()
                                 for i in range(n) for j in range(n)])

    @staticmethod
    def zeros(r: int, c: int = None) -> "PolyMatrix":
        c = r if c is None else c
        return PolyMatrix(r, c, [MultiPoly.zero()] * (r * c))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __add__(self, other):
        self._same_shape(other)
        return PolyMatrix(self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return PolyMatrix(self.rows, self.cols,
                          [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return PolyMatrix(self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ShapeError(f"cannot multiply {self.shape()} by {other.shape()}")
            out = []
            for i in range(self.rows):
                for j in range(other.cols):
                    acc = MultiPoly.zero()
                    for k in range(self.cols):
                        acc = acc + self[i, k] * other[k, j]
                    out.append(acc)
            return PolyMatrix(self.rows, other.cols, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "PolyMatrix":
        c = _as_poly(c)
        return PolyMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def shape(self):
        return (self.rows, self.cols)

    def _same_shape(self, other):
        if not isinstance(other, PolyMatrix) or self.shape() != other.shape():
            raise ShapeError("shape mismatch")

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def derivative(self, name: str) -> "PolyMatrix":
        return self.map_entries(lambda e: e.derivative(name))

    def subs(self, assignment: dict) -> "PolyMatrix":
        return self.map_entries(lambda e: e.subs(assignment))

    def trace(self) -> MultiPoly:
        if not self.is_square():
            raise ShapeError("trace of non-square matrix")
        acc = MultiPoly.zero()
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def commutator(self, other) -> "PolyMatrix":
        return self * other - other * self

    def variables(self):
        names = set()
        for e in self.entries:
            names.update(e.vars)
        return names

    def is_constant(self) -> bool:
        return all(e.is_const() for e in self.entries)

    def to_strings(self):
        return [[str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    def __str__(self):
        return "[" + "; ".join(", ".join(row) for row in self.to_strings()) + "]"

    def __repr__(self):
        return f"PolyMatrix({str(self)!r})"


def char_poly(m: PolyMatrix) -> MultiPoly:
    """det(v*I - M), monic of degree r in v (Faddeev-LeVerrier recursion)."""
    if not m.is_square():
        raise ShapeError("characteristic polynomial of non-square matrix")
    r = m.rows
    v = MultiPoly.var("v")
    coeffs = [ONE]
    n = PolyMatrix.identity(r)
    for k in range(1, r + 1):
        mn = m * n
        ck = mn.trace() * Fraction(-1, k)
        coeffs.append(ck)
        n = mn + PolyMatrix.identity(r).scale(ck)
    out = MultiPoly.zero()
    for k, c in enumerate(coeffs):
        out = out + c * v ** (r - k)
    return out


def eval_poly_at_matrix(p: MultiPoly, name: str, m: PolyMatrix) -> PolyMatrix:
    """Evaluate a polynomial at a square matrix (Horner in ``name``)."""
    coeffs = p.coefficients_in(name)
    out = PolyMatrix.zeros(m.rows, m.cols)
    for c in reversed(coeffs):
        out = m * out + PolyMatrix.identity(m.rows).scale(c)
    return out


def _ratfunc_rows(m: PolyMatrix, var: str):
    return [[RatFunc(m[i, j], ONE, var=var) for j in range(m.cols)]
            for i in range(m.rows)]


def _base_var(m: PolyMatrix) -> str:
    names = m.variables()
    if len(names) > 1:
        raise ShapeError(f"expected a univariate base, got {sorted(names)}")
    return names.pop() if names else "z"


def min_poly(m: PolyMatrix) -> MultiPoly:
    """Least-degree monic annihilating polynomial over the fraction field,
    denominators cleared and content removed.

    Found by the first linear dependence among I, M, M^2, ... ; always
    divides ``char_poly(m)``.
    """
    if not m.is_square():
        raise ShapeError("minimal polynomial of non-square matrix")
    var = _base_var(m)
    r = m.rows
    powers = [PolyMatrix.identity(r)]
    for _ in range(r):
        powers.append(m * powers[-1])
    flat = [[RatFunc(p[i, j], ONE, var=var) for i in range(r) for j in range(r)]
            for p in powers]
    for k in range(1, r + 1):
        # solve sum_j c_j M^j = M^k over the fraction field
        cols = list(range(k))
        system = [[flat[j][idx] for j in cols] for idx in range(r * r)]
        rhs = [flat[k][idx] for idx in range(r * r)]
        sol = _field_solve(system, rhs)
        if sol is not None:
            v = MultiPoly.var("v")
            den_lcm = ONE
            for c in sol:
                den_lcm = _poly_lcm(den_lcm, c.den, var)
            out = den_lcm * v ** k
            for j, c in enumerate(sol):
                scale, _ = dense_divmod(to_dense(den_lcm), to_dense(c.den))
                coeff = from_dense(scale, var) * c.num
                out = out - coeff * v ** j
            return _primitive_in(out, "v")
    raise AssertionError("Cayley-Hamilton violated")  # unreachable


def _field_solve(system, rhs):
    """Solve over a field; None when inconsistent (used with RatFunc)."""
    ncols = len(system[0]) if system else 0
    var = system[0][0].var if system and system[0] else "z"
    aug = [row + [b] for row, b in zip(system, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    sol = [RatFunc.const(0, var) for _ in range(ncols)]
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][ncols]
    return sol


def _poly_lcm(a: MultiPoly, b: MultiPoly, var: str) -> MultiPoly:
    from .poly import dense_gcd
    da, db = to_dense(a), to_dense(b)
    g = dense_gcd(da, db)
    q, _ = dense_divmod(db, g)
    prod = from_dense(da, var) * from_dense(q, var)
    dense = to_dense(prod)
    lead = dense[-1]
    return from_dense([c / lead for c in dense], var)


def poly_content(p: MultiPoly) -> Fraction:
    """Positive rational content (gcd of coefficients); 0 for the zero poly."""
    if p.is_zero():
        return Fraction(0)
    num = 0
    den = 1
    for c in p.terms.values():
        num = _gcd_int(num, c.numerator)
        den = _lcm_int(den, c.denominator)
    return Fraction(num, den)


def _gcd_int(a, b):
    import math
    return math.gcd(a, b)


def _lcm_int(a, b):
    import math
    return a * b // math.gcd(a, b)


def _primitive_in(p: MultiPoly, main_var: str) -> MultiPoly:
    """Divide by content: rational content and the gcd of the coefficient
    polynomials in the non-main variables; leading coefficient made positive
    (and monic in the remaining variable when univariate)."""
    if p.is_zero():
        return p
    coeffs = [c for c in p.coefficients_in(main_var) if not c.is_zero()]
    other = set()
    for c in coeffs:
        other.update(c.vars)
    if len(other) <= 1:
        var = other.pop() if other else None
        g = []
        for c in coeffs:
            g = _dense_gcd_list(g, to_dense(c))
        if var is not None and len(g) > 1:
            gp = from_dense(g, var)
            p = _exact_poly_div(p, gp, main_var, var)
    c = poly_content(p)
    lead = _leading_coeff(p, main_var)
    if lead < 0:
        c = -c
    return p * (1 / c)


def _dense_gcd_list(a, b):
    from .poly import dense_gcd
    if not a:
        return list(b)
    if not b:
        return list(a)
    return dense_gcd(a, b)


def _exact_poly_div(p: MultiPoly, g: MultiPoly, main_var: str, var: str) -> MultiPoly:
    out = MultiPoly.zero()
    v = MultiPoly.var(main_var)
    for k, c in enumerate(p.coefficients_in(main_var)):
        if c.is_zero():
            continue
        q, rem = dense_divmod(to_dense(c), to_dense(g))
        if rem:
            raise AssertionError("content division not exact")
        out = out + from_dense(q, var) * v ** k
    return out


def _leading_coeff(p: MultiPoly, main_var: str) -> Fraction:
    top = p.coefficients_in(main_var)[-1]
    # leading rational of the leading coefficient polynomial
    best = max(top.terms.items(), key=lambda kv: MultiPoly._term_sort_key(kv[0]))
    return best[1]


def kernel_saturated(m: PolyMatrix):
    """Saturated kernel basis over the polynomial base ring.

    Computes the kernel over the fraction field, clears denominators and
    removes content so that every generator is primitive.
    """
    var = _base_var(m)
    rows = _ratfunc_rows(m, var)
    red, pivots = rref(rows)
    basis = []
    free = [c for c in range(m.cols) if c not in pivots]
    for fc in free:
        vec = [RatFunc.const(0, var) for _ in range(m.cols)]
        vec[fc] = RatFunc.const(1, var)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(saturate_vector(vec, var))
    return basis


def saturate_vector(vec, var: str):
    """Clear denominators of a fraction-field vector and remove content."""
    den_lcm = ONE
    for x in vec:
        den_lcm = _poly_lcm(den_lcm, x.den, var)
    cleared = []
    for x in vec:
        scale, _ = dense_divmod(to_dense(den_lcm), to_dense(x.den))
        cleared.append(from_dense(scale, var) * x.num)
    g = []
    for p in cleared:
        if not p.is_zero():
            g = _dense_gcd_list(g, to_dense(p))
    if len(g) > 1:
        gp = from_dense(g, var)
        cleared = [_exact_div_uni(p, gp, var) for p in cleared]
    num, den = 0, 1
    for p in cleared:
        c = poly_content(p)
        num = _gcd_int(num, c.numerator)
        den = _lcm_int(den, c.denominator)
    if num:
        cleared = [p * (1 / Fraction(num, den)) for p in cleared]
    return tuple(cleared)


def _exact_div_uni(p: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    if p.is_zero():
        return p
    q, rem = dense_divmod(to_dense(p), to_dense(g))
    if rem:
        raise AssertionError("saturation division not exact")
    return from_dense(q, var)


def vector_is_primitive(vec) -> bool:
    """True when the entries have trivial polynomial gcd and coprime
    integer coefficients (content 1)."""
    g = []
    nums = 0
    dens = 1
    nonzero = False
    for p in vec:
        if p.is_zero():
            continue
        nonzero = True
        g = _dense_gcd_list(g, to_dense(p))
        c = poly_content(p)
        nums = _gcd_int(nums, c.numerator)
        dens = _lcm_int(dens, c.denominator)
    if not nonzero:
        return False
    return len(g) <= 1 and nums == 1 and dens == 1


# ---------------------------------------------------------------------------
# polynomials in v with polynomial coefficients (pseudo-remainder gcd)
# ---------------------------------------------------------------------------

def v_coeffs(p: MultiPoly, name: str = "v"):
    return p.coefficients_in(name)


def _v_assemble(coeffs, name: str = "v"):
    v = MultiPoly.var(name)
    out = MultiPoly.zero()
    for k, c in enumerate(coeffs):
        out = out + c * v ** k
    return out


def _v_degree(coeffs):
    d = -1
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            d = k
    return d


def pseudo_rem(f, g):
    """Pseudo-remainder of coefficient lists in the main variable."""
    f = list(f)
    df, dg = _v_degree(f), _v_degree(g)
    lg = g[dg]
    while df >= dg and df >= 0:
        lf = f[df]
        f = [c * lg for c in f]
        for i in range(dg + 1):
            f[df - dg + i] = f[df - dg + i] - lf * g[i]
        while f and f[-1].is_zero():
            f.pop()
        df = _v_degree(f)
    return f


def squarefree_in_v(p: MultiPoly, name: str = "v") -> bool:
    """Squarefree test in the main variable over the base fraction field:
    gcd(p, dp/dv) must have degree 0 in v (pseudo-remainder Euclid)."""
    f = v_coeffs(p, name)
    g = v_coeffs(p.derivative(name), name)
    while _v_degree(g) > 0:
        f, g = g, pseudo_rem(f, g)
    if _v_degree(g) < 0:
        return _v_degree(f) <= 0
    return True


def divides_in_v(d: MultiPoly, p: MultiPoly, base_var: str, name: str = "v") -> bool:
    """Exact divisibility in (fraction field)[v] for a univariate base."""
    dc = [RatFunc(c, ONE, var=base_var) for c in v_coeffs(d, name)]
    pc = [RatFunc(c, ONE, var=base_var) for c in v_coeffs(p, name)]
    dd, dp = _v_degree_r(dc), _v_degree_r(pc)
    if dd < 0:
        return False
    while dp >= dd:
        lead = pc[dp] / dc[dd]
        for i in range(dd + 1):
            pc[dp - dd + i] = pc[dp - dd + i] - lead * dc[i]
        while pc and pc[-1].is_zero():
            pc.pop()
        dp = _v_degree_r(pc)
    return all(c.is_zero() for c in pc)


def _v_degree_r(coeffs):
    d = -1
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            d = k
    return d


# ---------------------------------------------------------------------------
# span tracking over an arbitrary exact field (used for subalgebra closure)
# ---------------------------------------------------------------------------

class FracNoGcd:
    """Unreduced fraction of MultiPoly; exact field arithmetic that needs
    no multivariate gcd (growth is acceptable at the scales used here)."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None):
        den = ONE if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("FracNoGcd is immutable")

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        return FracNoGcd(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    def __sub__(self, other):
        return FracNoGcd(self.num * other.den - other.num * self.den,
                         self.den * other.den)

    def __neg__(self):
        return FracNoGcd(-self.num, self.den)

    def __mul__(self, other):
        return FracNoGcd(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        return FracNoGcd(self.num * other.den, self.den * other.num)


class SpanBasis:
    """Incremental row space over the base fraction field."""

    def __init__(self):
        self.rows = []       # reduced rows of FracNoGcd
        self.pivots = []

    @staticmethod
    def _vec(polys):
        return [FracNoGcd(p) for p in polys]

    def _reduce(self, vec):
        vec = list(vec)
        for row, pc in zip(self.rows, self.pivots):
            if not vec[pc].is_zero():
                f = vec[pc]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def contains(self, polys) -> bool:
        vec = self._reduce(self._vec(polys))
        return all(x.is_zero() for x in vec)

    def add(self, polys) -> bool:
        """Insert the vector; returns True when it enlarged the span."""
        vec = self._reduce(self._vec(polys))
        for pc, x in enumerate(vec):
            if not x.is_zero():
                inv = x
                vec = [a / inv for a in vec]
                self.rows.append(vec)
                self.pivots.append(pc)
                return True
        return False

    def dimension(self) -> int:
        return len(self.rows)
