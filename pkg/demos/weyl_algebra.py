"""Walk through the Weyl algebra engine: normal ordering, the polynomial
module action, the Fourier automorphism, the simplicity certificate, and
the deformation family with its commutative fiber.

Run:  python3 demos/weyl_algebra.py
"""

from fractions import Fraction

from azumaya import (WeylElement, act_on_polynomial, fourier, parse_weyl,
                     reduce_to_scalar, specialize_lambda, weyl_mul)
from azumaya.poly import MultiPoly

x = WeylElement.x(0, 1)
d = WeylElement.d(0, 1)

print("== normal ordering ==")
print("d * x            =", weyl_mul(d, x))
print("x * d            =", weyl_mul(x, d))
d1 = WeylElement.d(0, 1, 1)
x1 = WeylElement.x(0, 1, 1)
print("d^2 x^2 (lam=1)  =", weyl_mul(weyl_mul(d1, d1), weyl_mul(x1, x1)))

print()
print("== action on polynomials (lam = 1) ==")
f = MultiPoly.var("x") ** 3
print("d . x^3          =", act_on_polynomial(d1, f))
xd = parse_weyl("x*d", lam=Fraction(1))
print("(x d) . (x^2+1)  =", act_on_polynomial(xd, MultiPoly.var("x") ** 2 + 1))

print()
print("== Fourier transform: x -> d, d -> -x ==")
print("F(x)   =", fourier(x))
print("F(d)   =", fourier(d))
e = weyl_mul(x, d)
out = e
for _ in range(4):
    out = fourier(out)
print("F^4(xd) =", out, " (identity on", e, ")")

print()
print("== constructive simplicity: reduce x^2 d to a scalar ==")
elem = parse_weyl("x^2*d")
cert = reduce_to_scalar(elem)
for kind, i, side in cert.steps:
    gen = f"{kind}{i + 1}"
    form = f"[{gen}, .]" if side == "left" else f"[., {gen}]"
    print("  step:", form)
print("final scalar:", cert.final_scalar)
print("replay check:", cert.replay(elem))

print()
print("== the deformation family ==")
p = weyl_mul(d, x)    # x d + lam
print("formal product       :", p)
print("fiber at lam = 0     :", specialize_lambda(p, 0), " (commutes with x d)")
print("fiber at lam = 1     :", specialize_lambda(p, 1))
a0 = specialize_lambda(parse_weyl("x^2*d + lam*d"), 0)
b0 = specialize_lambda(parse_weyl("x*d^2 - 1"), 0)
print("lam = 0 commutator   :", weyl_mul(a0, b0) - weyl_mul(b0, a0), "(zero: the fiber is commutative)")
