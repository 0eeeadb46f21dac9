"""Exact multivariate polynomials over Q and univariate rational functions.

Coefficients are ``fractions.Fraction`` throughout.  The monomial order is
graded-lex descending with the fixed variable priority

    x1 < x2 < ... < w1 < w2 < ... < z < v < lam < m

(earlier variables are more significant in the lex tie-break).  The string
form produced by ``str()`` (terms in canonical order, coefficients printed
``p/q`` with ``/1`` omitted, e.g. ``3/2*z^2*v - 1``) is a bit-exact contract
used by golden-file tests, so it must never drift.
"""

from __future__ import annotations

import re
from fractions import Fraction

_INDEXED_FAMILIES = {"x": 0, "w": 1}
_FIXED_NAMES = {"z": 2, "v": 3, "lam": 4, "m": 5}


def var_sort_key(name: str):
    """Total order on variable names fixing the canonical context order."""
    base = name.rstrip("0123456789")
    if base in _INDEXED_FAMILIES and name != base:
        return (_INDEXED_FAMILIES[base], int(name[len(base):]), "")
    if base in _INDEXED_FAMILIES:
        return (_INDEXED_FAMILIES[base], -1, "")
    if name in _FIXED_NAMES:
        return (_FIXED_NAMES[name], 0, "")
    return (9, 0, name)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


class MultiPoly:
    """Sparse exact polynomial; immutable after construction.

    ``vars`` holds exactly the variables that occur (canonically sorted);
    ``terms`` maps exponent tuples to nonzero Fractions.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables=(), terms=None):
        variables = tuple(variables)
        # normalize: drop zero coefficients and unused variables
        terms = {tuple(e): _as_fraction(c) for e, c in (terms or {}).items()}
        terms = {e: c for e, c in terms.items() if c != 0}
        used = [i for i in range(len(variables))
                if any(e[i] for e in terms)]
        if len(used) != len(variables):
            variables = tuple(variables[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        order = sorted(range(len(variables)), key=lambda i: var_sort_key(variables[i]))
        if order != list(range(len(variables))):
            variables = tuple(variables[i] for i in order)
            terms = {tuple(e[i] for i in order): c for e, c in terms.items()}
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c) -> "MultiPoly":
        c = _as_fraction(c)
        return MultiPoly((), {(): c} if c else {})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): Fraction(1)})

    @staticmethod
    def zero() -> "MultiPoly":
        return MultiPoly((), {})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.vars

    def as_fraction(self) -> Fraction:
        if self.vars:
            raise ValueError(f"not a constant: {self}")
        return self.terms.get((), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    # -- context alignment ----------------------------------------------

    def _aligned(self, other: "MultiPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        merged = tuple(sorted(set(self.vars) | set(other.vars), key=var_sort_key))
        return merged, _remap(self, merged), _remap(other, merged)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(merged, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged, a, b = self._aligned(other)
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(merged, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus / substitution -----------------------------------------

    def derivative(self, name: str) -> "MultiPoly":
        """Formal partial derivative; zero when the variable is absent."""
        if name not in self.vars:
            return MultiPoly.zero()
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return MultiPoly(self.vars, out)

    def subs(self, assignment: dict) -> "MultiPoly":
        """Substitute variables by Fractions or MultiPoly values."""
        out = MultiPoly.zero()
        for e, c in self.terms.items():
            term = MultiPoly.const(c)
            for name, k in zip(self.vars, e):
                if not k:
                    continue
                val = assignment.get(name)
                if val is None:
                    term = term * MultiPoly.var(name) ** k
                else:
                    val = val if isinstance(val, MultiPoly) else MultiPoly.const(val)
                    term = term * val ** k
            out = out + term
        return out

    def coefficients_in(self, name: str) -> list:
        """Dense coefficient list [c0, c1, ...] of powers of ``name``;
        coefficients are MultiPoly in the remaining variables."""
        if name not in self.vars:
            return [self] if not self.is_zero() else []
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        deg = self.degree_in(name)
        buckets = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            e2 = e[:i] + e[i + 1:]
            buckets[e[i]][e2] = c
        return [MultiPoly(rest, b) for b in buckets]

    # -- canonical text ----------------------------------------------------

    @staticmethod
    def _term_sort_key(e):
        return (sum(e), e)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self._term_sort_key(kv[0]), reverse=True)

    def _monomial_str(self, e) -> str:
        parts = []
        for name, k in zip(self.vars, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = self._monomial_str(e)
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if idx == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def _remap(p: MultiPoly, merged) -> dict:
    pos = [merged.index(v) for v in p.vars]
    out = {}
    for e, c in p.terms.items():
        full = [0] * len(merged)
        for i, k in zip(pos, e):
            full[i] = k
        out[tuple(full)] = c
    return out


def _coerce(x):
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.const(x)
    return NotImplemented


ZERO = MultiPoly.zero()
ONE = MultiPoly.const(1)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|([A-Za-z][A-Za-z0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(s: str):
    tokens, pos = [], 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            if s[pos:].strip():
                raise ValueError(f"bad token at {s[pos:]!r}")
            break
        pos = m.end()
        groups = m.groups()
        for kind, val in zip(("num", "name", "pow", "mul", "plus", "minus", "lpar", "rpar"), groups):
            if val is not None:
                tokens.append((kind, val))
                break
    return tokens


class _Parser:
    def __init__(self, tokens, var_hook=None):
        self.tokens = tokens
        self.i = 0
        self.var_hook = var_hook or MultiPoly.var

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            raise ValueError(f"expected {kind}, got {self.peek()}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def parse_expr(self):
        sign = 1
        while self.peek() in ("plus", "minus"):
            if self.take(self.peek()) == "-":
                sign = -sign
        out = self.parse_term() * sign
        while self.peek() in ("plus", "minus"):
            op = self.take(self.peek())
            out = out + self.parse_term() * (1 if op == "+" else -1)
        return out

    def parse_term(self):
        out = self.parse_factor()
        while self.peek() == "mul":
            self.take("mul")
            out = out * self.parse_factor()
        return out

    def parse_factor(self):
        if self.peek() == "minus":
            self.take("minus")
            return -self.parse_factor()
        atom = self.parse_atom()
        while self.peek() == "pow":
            self.take("pow")
            k = int(self.take("num"))
            atom = atom ** k
        return atom

    def parse_atom(self):
        kind = self.peek()
        if kind == "num":
            return MultiPoly.const(Fraction(self.take("num")))
        if kind == "name":
            return self.var_hook(self.take("name"))
        if kind == "lpar":
            self.take("lpar")
            out = self.parse_expr()
            self.take("rpar")
            return out
        raise ValueError(f"unexpected token {kind}")


def parse_poly(s: str, var_hook=None):
    """Parse the canonical text form (sums of rational-coefficient monomials)."""
    parser = _Parser(_tokenize(s), var_hook)
    out = parser.parse_expr()
    if parser.i != len(parser.tokens):
        raise ValueError(f"trailing input in {s!r}")
    return out


# ---------------------------------------------------------------------------
# univariate helpers and rational functions
# ---------------------------------------------------------------------------

def _only_var(p: MultiPoly, q: MultiPoly = None):
    names = set(p.vars) | (set(q.vars) if q is not None else set())
    if len(names) > 1:
        raise ValueError(f"not univariate: {sorted(names)}")
    return names.pop() if names else None


def to_dense(p: MultiPoly):
    """Univariate polynomial as [c0, c1, ...] of Fractions (empty = zero)."""
    if p.is_zero():
        return []
    if p.is_const():
        return [p.as_fraction()]
    _only_var(p)
    out = [Fraction(0)] * (p.total_degree() + 1)
    for e, c in p.terms.items():
        out[e[0]] = c
    return out


def from_dense(coeffs, name: str) -> MultiPoly:
    return MultiPoly((name,), {(i,): c for i, c in enumerate(coeffs) if c})


def dense_divmod(a, b):
    """Exact division with remainder over Q; inputs/outputs dense lists."""
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    b = list(b)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = f
        for i, bc in enumerate(b):
            a[k + i] -= f * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def dense_gcd(a, b):
    """Monic gcd over Q (dense lists)."""
    a, b = list(a), list(b)
    while b:
        _, r = dense_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


class RatFunc:
    """Reduced univariate rational function over Q (denominator monic)."""

    __slots__ = ("var", "num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, var: str = None):
        den = ONE if den is None else den
        name = var or _only_var(num, den)
        n, d = to_dense(num), to_dense(den)
        if not d:
            raise ZeroDivisionError("zero denominator")
        if n:
            g = dense_gcd(n, d)
            if len(g) > 1:
                n, _ = dense_divmod(n, g)
                d, _ = dense_divmod(d, g)
        else:
            d = [Fraction(1)]
        lead = d[-1]
        n = [c / lead for c in n]
        d = [c / lead for c in d]
        if name is None:
            name = "z"
        object.__setattr__(self, "var", name)
        object.__setattr__(self, "num", from_dense(n, name))
        object.__setattr__(self, "den", from_dense(d, name))

    def __setattr__(self, *_):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def from_poly(p: MultiPoly, var: str = None) -> "RatFunc":
        return RatFunc(p, ONE, var=var or _only_var(p))

    @staticmethod
    def const(c, var: str = "z") -> "RatFunc":
        return RatFunc(MultiPoly.const(c), ONE, var=var)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _pair(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, self.var)
        if isinstance(other, MultiPoly):
            return RatFunc(other, ONE, var=self.var)
        return NotImplemented

    def __add__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, var=self.var)

    def __sub__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den, var=self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num, var=self.var)

    def __eq__(self, other):
        o = self._pair(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"
