import random
from fractions import Fraction

import pytest

from azumaya.diffop import (CASE_DISTINCT, CASE_NILPOTENT, CASE_SEMISIMPLE,
                            MixedOperator, classify_higgsing,
                            commutation_constraint, discriminant,
                            fundamental_solutions, mixed_mul,
                            pushforward_report, solve_commutation)
from azumaya.errors import (NonConstantError, NotSplitError, PreconditionError,
                            ShapeError, ZeroLambdaError)
from azumaya.linalg import PolyMatrix, SpanBasis, char_poly
from azumaya.poly import MultiPoly
from azumaya.suites import rand_discriminant_zero, rand_poly_matrix

z = MultiPoly.var("z")
v = MultiPoly.var("v")
E12 = PolyMatrix.from_rows([[0, 1], [0, 0]])


# -- mixed operators -----------------------------------------------------------

def test_leibniz_rewrite():
    m = PolyMatrix.from_rows([["z^2", 1], [0, "z"]])
    prod = mixed_mul(MixedOperator.derivation(0, 2), MixedOperator.from_matrix(m))
    assert prod.coefficient(0) == m.derivative("z")
    assert prod.coefficient(1) == m


def test_matrix_times_matrix():
    a = PolyMatrix.from_rows([[1, "z"], [0, 1]])
    b = PolyMatrix.from_rows([["z", 0], [1, "z^2"]])
    prod = mixed_mul(MixedOperator.from_matrix(a), MixedOperator.from_matrix(b))
    assert prod.coeffs == {(0,): a * b}


def test_derivation_times_scalar_matrix():
    zi = PolyMatrix.identity(2).scale(z)
    prod = mixed_mul(MixedOperator.derivation(0, 2), MixedOperator.from_matrix(zi))
    assert prod.coefficient(0) == PolyMatrix.identity(2)
    assert prod.coefficient(1) == zi


def test_connection_enters_rewrite():
    gamma = PolyMatrix.from_rows([[0, 1], [0, 0]])
    m = PolyMatrix.from_rows([[1, 0], [0, 2]])
    dop = MixedOperator.derivation(0, 2, gamma=gamma)
    mop = MixedOperator.from_matrix(m, gamma=gamma)
    prod = mixed_mul(dop, mop)
    assert prod.coefficient(0) == m.derivative("z") + gamma.commutator(m)


def test_mixed_assoc_random_gamma():
    rng = random.Random(61)
    for _ in range(25):
        gamma = rand_poly_matrix(rng, 2, ("z",), deg=1)
        ops = []
        for _ in range(3):
            coeffs = {(k,): rand_poly_matrix(rng, 2, ("z",), deg=2)
                      for k in range(rng.randint(1, 3))}
            ops.append(MixedOperator(2, ("z",), coeffs, gamma=gamma))
        a, b, c = ops
        assert mixed_mul(mixed_mul(a, b), c) == mixed_mul(a, mixed_mul(b, c))


def test_shape_errors():
    with pytest.raises(ShapeError):
        mixed_mul(MixedOperator.from_matrix(PolyMatrix.identity(2)),
                  MixedOperator.from_matrix(PolyMatrix.identity(3)))
    with pytest.raises(ShapeError):
        MixedOperator(2, ("w1", "w2"), {}, gamma=PolyMatrix.identity(2))


# -- commutation constraint ------------------------------------------------------

def test_constraint_trivial():
    assert commutation_constraint(PolyMatrix.zeros(2),
                                  PolyMatrix.from_rows([[1, 2], [3, 4]]), 1).is_zero()


def test_constraint_known_solution():
    b = PolyMatrix.from_rows([[1, "z"], [0, 0]])
    assert commutation_constraint(E12, b, 1).is_zero()


def test_constraint_pure_derivative():
    b = PolyMatrix.from_rows([["z", 0], [0, 0]])
    out = commutation_constraint(PolyMatrix.zeros(2), b, 1)
    assert out == PolyMatrix.from_rows([[1, 0], [0, 0]])


def test_constraint_matches_mixed_commutator():
    rng = random.Random(67)
    for _ in range(20):
        a = rand_poly_matrix(rng, 2, ("z",), deg=2)
        b = rand_poly_matrix(rng, 2, ("z",), deg=2)
        lam = Fraction(rng.choice([1, 2, -1, 3]))
        op = MixedOperator(2, ("z",), {(1,): PolyMatrix.identity(2).scale(lam), (0,): a})
        comm = op.commutator(MixedOperator.from_matrix(b))
        assert comm.coefficient(0) == commutation_constraint(a, b, lam)
        assert comm.coefficient(1).is_zero()


# -- solve_commutation ------------------------------------------------------------

def test_solver_zero_matrix():
    basis = solve_commutation(PolyMatrix.zeros(2), 1, 2)
    assert len(basis) == 4
    assert all(m.is_constant() for m in basis)


def test_solver_nilpotent_instance():
    basis = solve_commutation(E12, 1, 2)
    assert len(basis) == 4
    span = SpanBasis()
    for m in basis:
        span.add(list(m.entries))
    known = PolyMatrix.from_rows([[1, "z"], [0, 0]])
    assert span.contains(list(known.entries))
    for m in basis:
        assert commutation_constraint(E12, m, 1).is_zero()


def test_solver_distinct_constant_diagonal():
    basis = solve_commutation(PolyMatrix.from_rows([[1, 0], [0, 2]]), 1, 4)
    assert len(basis) == 2
    assert all(m.is_constant() for m in basis)


def test_solver_dimension_stable_under_larger_bound():
    # every polynomial solution for A = E12 has entry degree <= 2, so
    # raising the ansatz bound must not add spurious dimensions
    assert len(solve_commutation(E12, 1, 8)) == 4


def test_solver_lambda_zero_rejected():
    with pytest.raises(ZeroLambdaError):
        solve_commutation(E12, 0, 2)


def test_solver_rejects_foreign_variables():
    with pytest.raises(ShapeError):
        solve_commutation(PolyMatrix.from_rows([[0, "v"], [0, 0]]), 1, 2)


def test_solver_polynomial_coefficients():
    # A = [[0, z], [0, 0]] still has vanishing discriminant; solutions exist
    # with antiderivative growth, caught at the default bound 2*1 + 2 = 4
    a = PolyMatrix.from_rows([[0, "z"], [0, 0]])
    assert discriminant(a).is_zero()
    basis = solve_commutation(a, 1)
    assert len(basis) == 4
    for m in basis:
        assert commutation_constraint(a, m, 1).is_zero()


def test_solver_default_bound():
    # default bound 2*deg(A)+2 per the quadratic growth of the closed forms
    basis = solve_commutation(E12, 1)
    assert len(basis) == 4


def test_charpoly_claim_on_solver_span():
    # combinations drawn from the solver output itself, not the closed forms
    rng = random.Random(127)
    for _ in range(6):
        a = rand_discriminant_zero(rng)
        lam = Fraction(rng.choice([1, 2, -1]))
        basis = solve_commutation(a, lam)
        assert len(basis) == 4
        for _ in range(5):
            b = PolyMatrix.zeros(2)
            for m in basis:
                b = b + m.scale(Fraction(rng.randint(-3, 3)))
            cp = char_poly(b)
            assert set(cp.vars) <= {"v"}
            b0 = b.map_entries(
                lambda e: MultiPoly.const(
                    e.subs({"z": Fraction(0)}).as_fraction() if not e.is_zero() else 0))
            assert cp == char_poly(b0)


def test_solvability_dichotomy():
    # constant A with nonzero discriminant and distinct eigenvalues: dim < 4
    rng = random.Random(71)
    found = 0
    while found < 10:
        a1, a2, a3, a4 = (Fraction(rng.randint(-3, 3)) for _ in range(4))
        disc = (a1 - a4) ** 2 + 4 * a2 * a3
        if disc == 0:
            continue
        found += 1
        a = PolyMatrix.from_rows([[a1, a2], [a3, a4]])
        basis = solve_commutation(a, 1, 2)
        assert len(basis) < 4


# -- discriminant and the closed-form quadruple -----------------------------------

def test_discriminant_values():
    assert discriminant(E12).is_zero()
    assert str(discriminant(PolyMatrix.from_rows([[1, 0], [0, 0]]))) == "1"
    assert discriminant(PolyMatrix.from_rows([[1, 1], [-1, -1]])).is_zero()
    with pytest.raises(ShapeError):
        discriminant(PolyMatrix.identity(3))


def test_fundamental_solutions_canonical_instance():
    basis = fundamental_solutions(E12, 1)
    assert [m.to_strings() for m in basis] == [
        [["1", "z"], ["0", "0"]],
        [["0", "1"], ["0", "0"]],
        [["-z", "-z^2"], ["1", "z"]],
        [["0", "-z"], ["0", "1"]],
    ]


def test_fundamental_solutions_solve_and_span():
    rng = random.Random(73)
    for _ in range(12):
        a = rand_discriminant_zero(rng)
        lam = Fraction(rng.choice([1, 2, -1, 3]))
        basis = fundamental_solutions(a, lam)
        for m in basis:
            assert commutation_constraint(a, m, lam).is_zero()
        # linear independence over Q and degree-0 terms are elementary
        span = SpanBasis()
        for idx, m in enumerate(basis):
            assert span.add(list(m.entries))
            const = [e.coefficients_in("z")[0] if not e.is_zero() else MultiPoly.zero()
                     for e in m.entries]
            expected = [MultiPoly.const(int(k == idx)) for k in range(4)]
            assert const == expected
        solver = solve_commutation(a, lam, 2)
        assert len(solver) == 4
        solver_span = SpanBasis()
        for m in solver:
            solver_span.add(list(m.entries))
        assert all(solver_span.contains(list(m.entries)) for m in basis)


def test_fundamental_solutions_preconditions():
    with pytest.raises(PreconditionError):
        fundamental_solutions(PolyMatrix.from_rows([[1, 0], [0, 0]]), 1)
    with pytest.raises(PreconditionError):
        fundamental_solutions(PolyMatrix.from_rows([[0, "z"], [0, 0]]), 1)
    with pytest.raises(ZeroLambdaError):
        fundamental_solutions(E12, 0)


def test_degree0_and_charpoly_claims():
    rng = random.Random(79)
    for _ in range(25):
        a = rand_discriminant_zero(rng)
        lam = Fraction(rng.choice([1, 2, -1]))
        basis = fundamental_solutions(a, lam)
        bhat = [Fraction(rng.randint(-4, 4)) for _ in range(4)]
        b = PolyMatrix.zeros(2)
        for c, m in zip(bhat, basis):
            b = b + m.scale(c)
        b0 = PolyMatrix.from_rows([[bhat[0], bhat[1]], [bhat[2], bhat[3]]])
        cp = char_poly(b)
        assert cp == char_poly(b0)
        assert set(cp.vars) <= {"v"}


# -- classification ---------------------------------------------------------------

def test_classify_identity():
    rep = classify_higgsing(PolyMatrix.identity(2))
    assert rep.case_tag == CASE_SEMISIMPLE
    assert rep.eigenvalues == (Fraction(1),)
    assert rep.kernel_ideal_gen == v - 1
    assert rep.components[0].rank == 2
    assert not rep.filtration_flag


def test_classify_distinct():
    rep = classify_higgsing(PolyMatrix.from_rows([[1, "-z"], [0, 2]]))
    assert rep.case_tag == CASE_DISTINCT
    assert rep.eigenvalues == (Fraction(1), Fraction(2))
    assert [[str(p) for p in vec] for vec in rep.components[0].basis] == [["1", "0"]]
    assert [[str(p) for p in vec] for vec in rep.components[1].basis] == [["-z", "1"]]
    assert [c.rank for c in rep.components] == [1, 1]
    assert rep.kernel_ideal_gen == (v - 1) * (v - 2)


def test_classify_nilpotent():
    rep = classify_higgsing(PolyMatrix.from_rows([[1, 1], [0, 1]]))
    assert rep.case_tag == CASE_NILPOTENT
    assert rep.kernel_ideal_gen == (v - 1) ** 2
    assert rep.filtration_flag
    assert rep.components[0].rank == 1


def test_classify_errors():
    with pytest.raises(NonConstantError):
        classify_higgsing(PolyMatrix.from_rows([["z", 0], [0, 0]]))
    with pytest.raises(NotSplitError):
        classify_higgsing(PolyMatrix.from_rows([[0, 2], [1, 0]]))
    with pytest.raises(ShapeError):
        classify_higgsing(PolyMatrix.identity(3))


# -- pushforward -------------------------------------------------------------------

def test_pushforward_distinct():
    rep = pushforward_report(E12, [1, 0, 0, 2], 1)
    assert rep.case_tag == CASE_DISTINCT
    assert rep.eigenvalues == (Fraction(1), Fraction(2))
    assert [c.rank for c in rep.components] == [1, 1]


def test_pushforward_semisimple():
    rep = pushforward_report(E12, [5, 0, 0, 5], 1)
    assert rep.case_tag == CASE_SEMISIMPLE
    assert rep.components[0].rank == 2
    assert rep.kernel_ideal_gen == v - 5


def test_pushforward_nilpotent():
    rep = pushforward_report(E12, [1, 1, 0, 1], 1)
    assert rep.case_tag == CASE_NILPOTENT
    assert rep.filtration_flag


def test_pushforward_propagates_errors():
    with pytest.raises(PreconditionError):
        pushforward_report(PolyMatrix.from_rows([[1, 0], [0, 0]]), [1, 0, 0, 1], 1)
    with pytest.raises(NotSplitError):
        pushforward_report(E12, [0, 2, 1, 0], 1)
