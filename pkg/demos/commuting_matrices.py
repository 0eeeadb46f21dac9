"""The rank-2 commutation suite: solve lam B' + [A, B] = 0 over Q[z],
compare with the closed-form fundamental quadruple, and watch the
pushforward module split, stay irreducible, or acquire a filtration as
the degree-0 eigenvalues collide and separate.

Run:  python3 demos/commuting_matrices.py
"""

from fractions import Fraction

from azumaya import (classify_higgsing, commutation_constraint, discriminant,
                     fundamental_solutions, pushforward_report,
                     solve_commutation)
from azumaya.linalg import PolyMatrix

A = PolyMatrix.from_rows([[0, 1], [0, 0]])
lam = Fraction(1)

print("A =", A, "  discriminant =", discriminant(A))
print()

print("== closed-form fundamental solutions ==")
basis = fundamental_solutions(A, lam)
for k, b in enumerate(basis, 1):
    residual = commutation_constraint(A, b, lam)
    print(f"B{k} = {b}   residual of lam B' + [A,B]: {residual}")

print()
print("== solver cross-check (degree bound 2) ==")
solved = solve_commutation(A, lam, 2)
print("solution space dimension:", len(solved))
for m in solved:
    print("  ", m)

print()
print("== Higgsing / un-Higgsing across bhat choices ==")
for bhat, label in [((1, 0, 0, 2), "distinct eigenvalues"),
                    ((3, 0, 0, 3), "repeated, semisimple"),
                    ((1, 1, 0, 1), "repeated, non-diagonalizable")]:
    rep = pushforward_report(A, [Fraction(c) for c in bhat], lam)
    print(f"bhat = {bhat}  ({label})")
    print(f"  case          : {rep.case_tag}")
    print(f"  kernel ideal  : {rep.kernel_ideal_gen}")
    for comp in rep.components:
        vecs = ["(" + ", ".join(str(p) for p in vec) + ")" for vec in comp.basis]
        print(f"  eigenvalue {comp.eigenvalue}: rank {comp.rank}, basis {vecs}")
    if rep.filtration_flag:
        print("  the rank-1 submodule sits inside a rank-2 module: a filtration,")
        print("  not a splitting")
    print()

print("== classification is about B itself, not just its constant term ==")
B = PolyMatrix.from_rows([[1, "-z"], [0, 2]])
rep = classify_higgsing(B)
print("B =", B)
print("case:", rep.case_tag, " components:",
      [(str(c.eigenvalue), c.rank) for c in rep.components])
