import random
from fractions import Fraction

import pytest

from azumaya.errors import (DegenerateError, ModeMismatchError,
                            ZeroElementError)
from azumaya.poly import MultiPoly
from azumaya.suites import rand_position_poly, rand_weyl
from azumaya.weyl import (WeylElement, act_on_polynomial, fourier,
                          parse_weyl, position_vars, reduce_to_scalar,
                          specialize_lambda, weyl_mul)

x = WeylElement.x(0, 1)
d = WeylElement.d(0, 1)


def test_commutation_relation():
    assert str(weyl_mul(d, x)) == "x*d + lam"


def test_already_normal_ordered():
    assert str(weyl_mul(x, d)) == "x*d"


def test_second_order_reordering():
    # oracle: act both sides on x^k for k <= 4 at lam = 1
    x1, d1 = WeylElement.x(0, 1, 1), WeylElement.d(0, 1, 1)
    lhs = weyl_mul(weyl_mul(d1, d1), weyl_mul(x1, x1))
    assert str(lhs) == "x^2*d^2 + 4*x*d + 2"
    xv = MultiPoly.var("x")
    for k in range(5):
        expected = act_on_polynomial(d1, act_on_polynomial(
            d1, act_on_polynomial(x1, act_on_polynomial(x1, xv ** k))))
        assert act_on_polynomial(lhs, xv ** k) == expected


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        weyl_mul(x, WeylElement.x(0, 1, 1))
    with pytest.raises(ModeMismatchError):
        weyl_mul(x, WeylElement.x(0, 2))


def test_action_examples():
    d1 = WeylElement.d(0, 1, 1)
    xv = MultiPoly.var("x")
    assert act_on_polynomial(d1, xv ** 3) == 3 * xv ** 2
    x1 = WeylElement.x(0, 1, 1)
    f = xv ** 2 - 5
    assert act_on_polynomial(x1, f) == xv * f
    xd = weyl_mul(x1, d1)
    assert act_on_polynomial(xd, xv ** 2 + 1) == 2 * xv ** 2


def test_action_at_general_lambda():
    # d acts as lam * d/dx
    d2 = WeylElement.d(0, 1, Fraction(3))
    xv = MultiPoly.var("x")
    assert act_on_polynomial(d2, xv ** 2) == 6 * xv


def test_action_requires_fixed_mode():
    with pytest.raises(ModeMismatchError):
        act_on_polynomial(d, MultiPoly.var("x"))


def test_action_is_module_action_random():
    rng = random.Random(31)
    for _ in range(80):
        n = rng.choice([1, 2])
        lam = Fraction(rng.choice([1, 2, -1]))
        d1, d2 = rand_weyl(rng, n, lam), rand_weyl(rng, n, lam)
        f = rand_position_poly(rng, n)
        assert act_on_polynomial(weyl_mul(d1, d2), f) == \
            act_on_polynomial(d1, act_on_polynomial(d2, f))


def test_associativity_random():
    rng = random.Random(37)
    for _ in range(60):
        n = rng.choice([1, 2])
        a, b, c = (rand_weyl(rng, n) for _ in range(3))
        assert weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c))


def test_fourier_generators():
    assert str(fourier(x)) == "d"
    assert str(fourier(d)) == "-x"


def test_fourier_order_four():
    e = weyl_mul(x, d)
    out = e
    for _ in range(4):
        out = fourier(out)
    assert out == e


def test_fourier_multiplicative_random():
    rng = random.Random(41)
    for _ in range(50):
        n = rng.choice([1, 2])
        a, b = rand_weyl(rng, n), rand_weyl(rng, n)
        assert fourier(weyl_mul(a, b)) == weyl_mul(fourier(a), fourier(b))
        out = a
        for _ in range(4):
            out = fourier(out)
        assert out == a


def test_specialize_lambda():
    p = weyl_mul(d, x)
    assert specialize_lambda(weyl_mul(x, d) + MultiPoly.var("lam"), 0) == \
        WeylElement(1, Fraction(0), {((1,), (1,)): Fraction(1)})
    assert specialize_lambda(p, 0) == specialize_lambda(weyl_mul(x, d), 0)
    assert str(specialize_lambda(p, 1)) == "x*d + 1"


def test_lambda_zero_fiber_commutes_random():
    rng = random.Random(43)
    for _ in range(50):
        n = rng.choice([1, 2])
        a = specialize_lambda(rand_weyl(rng, n, with_lam=True), 0)
        b = specialize_lambda(rand_weyl(rng, n, with_lam=True), 0)
        assert weyl_mul(a, b) == weyl_mul(b, a)


def test_no_lambda_torsion_random():
    rng = random.Random(47)
    lam = MultiPoly.var("lam")
    for _ in range(60):
        n = rng.choice([1, 2])
        dd = rand_weyl(rng, n, with_lam=True)
        c = MultiPoly.zero()
        for k in range(3):
            c = c + Fraction(rng.randint(-2, 2)) * lam ** k
        assert dd.scale(c).is_zero() == (c.is_zero() or dd.is_zero())


def test_reduce_identity():
    cert = reduce_to_scalar(WeylElement.one(1))
    assert cert.steps == () and str(cert.final_scalar) == "1"


def test_reduce_single_position():
    cert = reduce_to_scalar(WeylElement.x(0, 1, 1))
    assert cert.steps == (("d", 0, "left"),)
    assert str(cert.final_scalar) == "1"


def test_reduce_x2d():
    e = weyl_mul(weyl_mul(x, x), d)
    cert = reduce_to_scalar(e)
    assert cert.steps == (("d", 0, "left"), ("d", 0, "left"), ("x", 0, "right"))
    assert str(cert.final_scalar) == "2*lam^3"
    replay = cert.replay(e)
    assert replay.terms == {((0,), (0,)): cert.final_scalar}


def test_reduce_errors():
    with pytest.raises(ZeroElementError):
        reduce_to_scalar(WeylElement.zero(1))
    with pytest.raises(DegenerateError):
        reduce_to_scalar(WeylElement.x(0, 1, 0))


def test_reduce_random_certificates():
    rng = random.Random(53)
    done = 0
    while done < 60:
        n = rng.choice([1, 2])
        e = rand_weyl(rng, n, with_lam=True)
        if e.is_zero():
            continue
        done += 1
        before = e.bidegree()
        cert = reduce_to_scalar(e)
        assert not cert.final_scalar.is_zero()
        assert len(cert.steps) <= before[0] * 3 + before[1] * 3 + 10
        replay = cert.replay(e)
        assert replay.terms == {((0,) * n, (0,) * n): cert.final_scalar}


def test_parse_weyl():
    assert str(parse_weyl("D*x", lam=Fraction(1))) == "x*d + 1"
    assert str(parse_weyl("x^2*d + 1")) == "x^2*d + 1"
    assert str(parse_weyl("x1*d2", n=2)) == "x1*d2"
    assert str(parse_weyl("lam*x - 3")) == "lam*x - 3"
    with pytest.raises(ModeMismatchError):
        parse_weyl("lam*x", lam=Fraction(1))
    with pytest.raises(ValueError):
        parse_weyl("y*x")


def test_position_vars():
    assert position_vars(1) == ("x",)
    assert position_vars(2) == ("x1", "x2")


# -- closed-form reordering vs a step-by-step rewriter ---------------------------

def slow_normal_form(word, n):
    """Independent oracle: exhaustively apply the single swap
    d_i x_j -> x_j d_i + delta_ij lam to a generator word."""
    lam = MultiPoly.var("lam")
    zero = MultiPoly.zero()
    pending = {tuple(word): MultiPoly.const(1)}
    done = {}
    while pending:
        step = {}
        for w, c in pending.items():
            idx = next((k for k in range(len(w) - 1)
                        if w[k][0] == "d" and w[k + 1][0] == "x"), None)
            if idx is None:
                a, b = [0] * n, [0] * n
                for kind, i in w:
                    (a if kind == "x" else b)[i] += 1
                key = (tuple(a), tuple(b))
                done[key] = done.get(key, zero) + c
                continue
            swapped = w[:idx] + (w[idx + 1], w[idx]) + w[idx + 2:]
            step[swapped] = step.get(swapped, zero) + c
            if w[idx][1] == w[idx + 1][1]:
                contracted = w[:idx] + w[idx + 2:]
                step[contracted] = step.get(contracted, zero) + c * lam
        pending = step
    return {k: c for k, c in done.items() if not c.is_zero()}


def test_closed_form_matches_slow_rewriter():
    rng = random.Random(59)
    for _ in range(60):
        n = rng.choice([1, 2])
        word = tuple((rng.choice(["x", "d"]), rng.randrange(n))
                     for _ in range(rng.randint(1, 6)))
        fast = WeylElement.one(n)
        for kind, i in word:
            gen = WeylElement.x(i, n) if kind == "x" else WeylElement.d(i, n)
            fast = weyl_mul(fast, gen)
        assert fast.terms == slow_normal_form(word, n)
