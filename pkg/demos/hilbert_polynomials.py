"""Euler characteristics on the projective line: twisted Hilbert
polynomials of split sheaves, the degree = dimension rule, constancy in
flat torsion families, and the product-polarization variant.

Run:  python3 demos/hilbert_polynomials.py
"""

from fractions import Fraction

from azumaya import SheafOnP1, hilbert_poly, morphism_hilbert_poly

print("== line bundle series: chi(O(d)(m)) = m + d + 1 ==")
for d in range(-3, 4):
    p = hilbert_poly(SheafOnP1((d,)), 1, [0])
    print(f"  O({d:+d}) -> {p}")

print()
print("== additivity and torsion ==")
print("O(2) + O(-1)          ->", hilbert_poly(SheafOnP1((2, -1)), 1, [0]))
print("torsion of length 5   ->", hilbert_poly(SheafOnP1((), 5), 1, [0]),
      "(degree 0 = dimension of the support)")
print("O(1)+O against G of rank 2 ->",
      hilbert_poly(SheafOnP1((1, 0)), 2, [1, 0]))

print()
print("== flat-family constancy: only the total length matters ==")
configs = [
    [(Fraction(0), 4)],
    [(Fraction(1), 2), (Fraction(-1), 2)],
    [(Fraction(7), 1), (Fraction(1, 2), 1), (Fraction(-3), 2)],
]
for support in configs:
    sheaf = SheafOnP1.torsion_at(support)
    pts = ", ".join(f"len {l} at {p}" for p, l in support)
    print(f"  [{pts}] -> {hilbert_poly(sheaf, 1, [0])}")

print()
print("== pushforwards against the product polarization ==")
print("one summand, contracted fiber direction  ->",
      morphism_hilbert_poly([(0, 0)]))
print("one summand meeting O_Y(1) with degree 1 ->",
      morphism_hilbert_poly([(0, 1)]))
print("two such summands                         ->",
      morphism_hilbert_poly([(0, 1), (0, 1)]))
