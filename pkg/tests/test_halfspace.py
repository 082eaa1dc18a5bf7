"""Half-space Stokes polynomial spaces: lift, bases, dimension counts."""

import random
from fractions import Fraction

import pytest

from stokesbl.exactlinalg import exact_rank, rank_mod_p
from stokesbl.halfspace import (
    StokesPair,
    delta_D_inv,
    dim_harmonic,
    dim_homogeneous_stokes,
    dim_stokes_space,
    harmonic_basis,
    harmonic_extension,
    pressure_from_velocity,
    pressure_lift,
    stokes_basis,
    trace_split,
    verify_stokes_pair,
    zero_pressure_basis,
)
from stokesbl.polynomials import ExactPolynomial, VectorPolynomial

from test_polynomials import random_poly


def mono(dim, *exp):
    return ExactPolynomial.monomial(exp, 1, dim)


def test_harmonic_basis_degree_one():
    basis = harmonic_basis(1, 2)
    assert len(basis) == 2
    assert set(basis) == {mono(2, 1, 0), mono(2, 0, 1)}  # {x1, y}


def test_harmonic_basis_counts_and_harmonicity():
    for d in (2, 3, 4):
        for m in range(0, 6):
            basis = harmonic_basis(m, d)
            assert len(basis) == dim_harmonic(m, d)
            for q in basis:
                assert q.laplacian().is_zero()
                assert q.is_homogeneous() and (q.degree == m or q.is_zero())
    assert len(harmonic_basis(2, 3)) == 5


def test_harmonic_basis_degree_two_d2():
    basis = harmonic_basis(2, 2)
    expected = [
        ExactPolynomial(2, {(2, 0): 1, (0, 2): -1}),  # x1^2 - y^2
        ExactPolynomial(2, {(1, 1): 1}),  # x1 y
    ]
    assert basis == expected


def test_trace_split_examples():
    d = 2
    q = mono(d, 1, 1)  # x1 y
    q1, q2 = trace_split(q)
    assert q1.is_zero() and q2 == mono(d, 1, 0)
    q = ExactPolynomial(2, {(2, 0): 1, (0, 2): -1})
    q1, q2 = trace_split(q)
    assert q1 == mono(d, 2, 0) and q2.is_zero()
    q1, q2 = trace_split(mono(d, 0, 1))  # y
    assert q1.is_zero() and q2 == ExactPolynomial.constant(1, 2)
    with pytest.raises(ValueError):
        trace_split(mono(d, 0, 2))  # y^2 is not harmonic


def test_trace_split_reconstructs_random_harmonics():
    rng = random.Random(3)
    for d in (2, 3):
        for m in range(1, 6):
            basis = harmonic_basis(m, d)
            q = ExactPolynomial.zero(d)
            for b in basis:
                q = q + b.scale(Fraction(rng.randrange(-5, 6), rng.randrange(1, 4)))
            q1, q2 = trace_split(q)
            assert harmonic_extension(q1, q2) == q


def test_delta_D_inv_examples():
    one = ExactPolynomial.constant(1, 2)
    assert delta_D_inv(one) == ExactPolynomial(2, {(0, 2): Fraction(1, 2)})
    assert delta_D_inv(mono(2, 2, 0)) == ExactPolynomial(
        2, {(2, 2): Fraction(1, 2), (0, 4): Fraction(-1, 12)}
    )
    assert delta_D_inv(mono(2, 1, 1)) == ExactPolynomial(2, {(1, 3): Fraction(1, 6)})


def test_delta_D_inv_contract_random():
    rng = random.Random(5)
    for _ in range(60):
        d = rng.choice([2, 3])
        f = random_poly(rng, d, 8)
        u = delta_D_inv(f)
        assert u.laplacian() == f
        assert u.trace_at_zero().is_zero()


def test_delta_D_inv_commutation_identities():
    rng = random.Random(6)
    for _ in range(40):
        d = rng.choice([2, 3])
        f = random_poly(rng, d, 7)
        for i in range(d - 1):
            assert delta_D_inv(f).derive(i) == delta_D_inv(f.derive(i))
        # vertical: d_y Delta^-1 f = Delta^-1 d_y f + d_y Delta^-1 (f(x,0))
        y = d - 1
        lhs = delta_D_inv(f).derive(y)
        rhs = delta_D_inv(f.derive(y)) + delta_D_inv(f.trace_at_zero()).derive(y)
        assert lhs == rhs


def test_pressure_lift_listed_pairs():
    # S[2x] = (y^2, 0) and S[2y] = (-2xy, y^2)
    p = mono(2, 1, 0).scale(2)
    assert pressure_lift(p) == VectorPolynomial(
        [mono(2, 0, 2), ExactPolynomial.zero(2)]
    )
    q = mono(2, 0, 1).scale(2)
    assert pressure_lift(q) == VectorPolynomial(
        [ExactPolynomial(2, {(1, 1): -2}), mono(2, 0, 2)]
    )
    # S[x1 y] completes to an exact Stokes pair
    r = mono(2, 1, 1)
    assert verify_stokes_pair(StokesPair(pressure_lift(r), r)).ok


def test_pressure_lift_rejects_bad_input():
    with pytest.raises(ValueError):
        pressure_lift(mono(2, 0, 2))  # not harmonic
    with pytest.raises(ValueError):
        pressure_lift(ExactPolynomial.constant(1, 2))  # degree 0
    inhomogeneous = mono(2, 1, 0) + ExactPolynomial(2, {(3, 0): 1, (1, 2): -3})
    with pytest.raises(ValueError):
        pressure_lift(inhomogeneous)


def test_pressure_lift_makes_stokes_pairs_any_dim():
    for d in (2, 3):
        for m in range(1, 5):
            for p in harmonic_basis(m, d):
                pair = StokesPair(pressure_lift(p), p)
                assert verify_stokes_pair(pair).ok


def test_pressure_lift_injective_on_harmonic_basis():
    rng = random.Random(9)
    for d in (2, 3):
        for m in range(1, 4):
            basis = harmonic_basis(m, d)
            coeffs = [Fraction(rng.randrange(-4, 5)) for _ in basis]
            if all(c == 0 for c in coeffs):
                coeffs[0] = Fraction(1)
            p = ExactPolynomial.zero(d)
            for c, b in zip(coeffs, basis):
                p = p + b.scale(c)
            assert not pressure_lift(p).is_zero()


def test_zero_pressure_basis_counts():
    b = zero_pressure_basis(1, 2)
    assert len(b) == 1
    assert b[0].velocity == VectorPolynomial([mono(2, 0, 1), ExactPolynomial.zero(2)])
    assert zero_pressure_basis(2, 2) == []  # trivial at d=2, m>=2 (asserted, not assumed)
    assert zero_pressure_basis(3, 2) == []
    assert len(zero_pressure_basis(2, 3)) == 3
    for pair in zero_pressure_basis(3, 3):
        assert verify_stokes_pair(pair).ok
        assert pair.velocity[2].is_zero()


def test_stokes_basis_dimensions_small():
    assert len(stokes_basis(2, 2)) == dim_stokes_space(2, 2) == 4
    assert dim_homogeneous_stokes(2, 2) == 2
    assert dim_homogeneous_stokes(1, 3) == 3
    basis = stokes_basis(3, 3)
    assert len(basis) == dim_stokes_space(3, 3)
    assert basis.certify_rank()
    for pair in basis.elements:
        assert verify_stokes_pair(pair).ok


def test_stokes_basis_reproduces_listed_degree2_pairs():
    basis = stokes_basis(2, 2)
    listed = [
        StokesPair(VectorPolynomial.zero(2, 2), ExactPolynomial.constant(1, 2)),
        StokesPair(VectorPolynomial([mono(2, 0, 1), ExactPolynomial.zero(2)]),
                   ExactPolynomial.zero(2)),
        StokesPair(VectorPolynomial([mono(2, 0, 2), ExactPolynomial.zero(2)]),
                   mono(2, 1, 0).scale(2)),
        StokesPair(VectorPolynomial([ExactPolynomial(2, {(1, 1): -2}), mono(2, 0, 2)]),
                   mono(2, 0, 1).scale(2)),
    ]
    for target in listed:
        matched = False
        for el in basis.elements:
            for scale in (1, 2, -1, -2, Fraction(1, 2), Fraction(-1, 2)):
                if (el.velocity.scale(scale) == target.velocity
                        and el.pressure.scale(scale) == target.pressure):
                    matched = True
        assert matched, f"no scalar multiple of a basis element matches {target}"


def test_verify_stokes_pair_examples():
    good = StokesPair(
        VectorPolynomial([mono(2, 0, 1), ExactPolynomial.zero(2)]),
        ExactPolynomial.zero(2),
    )
    assert verify_stokes_pair(good).ok
    good2 = StokesPair(
        VectorPolynomial([mono(2, 0, 2), ExactPolynomial.zero(2)]),
        mono(2, 1, 0).scale(2),
    )
    assert verify_stokes_pair(good2).ok
    bad = StokesPair(
        VectorPolynomial([mono(2, 0, 1), ExactPolynomial.zero(2)]),
        mono(2, 1, 0),
    )
    report = verify_stokes_pair(bad)
    assert not report.ok
    # residual of -Lap u + grad p is exactly grad(x1) = e1
    assert report.momentum == VectorPolynomial(
        [ExactPolynomial.constant(1, 2), ExactPolynomial.zero(2)]
    )


def test_pressure_from_velocity():
    u = VectorPolynomial([mono(2, 0, 2), ExactPolynomial.zero(2)])
    assert pressure_from_velocity(u) == mono(2, 1, 0).scale(2)
    u = VectorPolynomial([mono(2, 0, 1), ExactPolynomial.zero(2)])
    assert pressure_from_velocity(u).is_zero()
    u = VectorPolynomial([ExactPolynomial(2, {(1, 1): -2}), mono(2, 0, 2)])
    assert pressure_from_velocity(u) == mono(2, 0, 1).scale(2)
    with pytest.raises(ValueError):
        pressure_from_velocity(VectorPolynomial([mono(2, 2, 0), ExactPolynomial.zero(2)]))


def test_rank_mod_p_matches_exact_rank():
    rng = random.Random(21)
    for _ in range(20):
        rows = [
            [Fraction(rng.randrange(-6, 7), rng.randrange(1, 5)) for _ in range(6)]
            for _ in range(4)
        ]
        rows.append([a + b for a, b in zip(rows[0], rows[1])])  # planted dependency
        assert exact_rank(rows) == rank_mod_p(rows)
    for d, m in ((2, 3), (3, 2)):
        basis = stokes_basis(m, d)
        rows = basis.coefficient_matrix()
        assert exact_rank(rows) == rank_mod_p(rows) == len(basis)
