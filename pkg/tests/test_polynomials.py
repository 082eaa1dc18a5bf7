"""Exact polynomial arithmetic: hand-checked values plus algebraic properties."""

import random
from fractions import Fraction

import pytest

from stokesbl.polynomials import (
    ExactPolynomial,
    VectorPolynomial,
    grlex_key,
    monomial_exponents,
    multi_binom,
    multi_factorial,
    multi_leq,
    multi_range,
)


def P(dim, **terms):
    """Shorthand: P(2, x1y=3) builds 3*x1*y in dimension 2 via exponent keys."""
    return ExactPolynomial(dim, terms)


def random_poly(rng, dim, max_degree, nterms=6, denom=5):
    terms = {}
    for _ in range(nterms):
        exp = [0] * dim
        for _ in range(rng.randrange(max_degree + 1)):
            exp[rng.randrange(dim)] += 1
        if sum(exp) > max_degree:
            continue
        terms[tuple(exp)] = Fraction(rng.randrange(-9, 10), rng.randrange(1, denom))
    return ExactPolynomial(dim, terms)


def test_derive_power_rule():
    # d/dx1 (x1^2 y) = 2 x1 y
    p = ExactPolynomial(2, {(2, 1): 1})
    assert p.derive(0) == ExactPolynomial(2, {(1, 1): 2})
    # d/dy (x1 y^3) = 3 x1 y^2
    q = ExactPolynomial(2, {(1, 3): 1})
    assert q.derive(1) == ExactPolynomial(2, {(1, 2): 3})
    # d/dx1 (y^2) = 0
    r = ExactPolynomial(2, {(0, 2): 1})
    assert r.derive(0).is_zero()


def test_derive_axis_out_of_range():
    p = ExactPolynomial(2, {(1, 0): 1})
    with pytest.raises(ValueError):
        p.derive(2)
    with pytest.raises(ValueError):
        p.derive(-1)


def test_laplacian_div_horizontal():
    # Lap(x1^2 y^2 / 2 - y^4 / 12) = x1^2, derived by two explicit derive() passes
    p = ExactPolynomial(2, {(2, 2): Fraction(1, 2), (0, 4): Fraction(-1, 12)})
    by_hand = p.derive(0).derive(0) + p.derive(1).derive(1)
    assert p.laplacian() == by_hand == ExactPolynomial(2, {(2, 0): 1})
    # div((y, 0)) = 0 in d = 2
    v = VectorPolynomial([ExactPolynomial(2, {(0, 1): 1}), ExactPolynomial.zero(2)])
    assert v.divergence().is_zero()
    # horizontal Laplacian of x1^2 + y^2 is 2
    q = ExactPolynomial(2, {(2, 0): 1, (0, 2): 1})
    assert q.horizontal_laplacian() == ExactPolynomial.constant(2, 2)


def test_eval_and_trace():
    p = ExactPolynomial(2, {(1, 1): 1, (0, 0): 1})  # x1 y + 1
    assert p.eval((2, 3)) == 7
    assert ExactPolynomial(2, {(1, 2): 1}).trace_at_zero().is_zero()
    q = ExactPolynomial(2, {(2, 0): 1, (0, 1): 1})  # x1^2 + y
    assert q.trace_at_zero() == ExactPolynomial(2, {(2, 0): 1})
    with pytest.raises(ValueError):
        p.eval((1,))


def test_derivatives_commute():
    rng = random.Random(7)
    for _ in range(40):
        dim = rng.choice([2, 3])
        p = random_poly(rng, dim, 8)
        for i in range(dim):
            for j in range(dim):
                assert p.derive(i).derive(j) == p.derive(j).derive(i)


def test_leibniz_rule():
    rng = random.Random(11)
    for _ in range(30):
        dim = rng.choice([2, 3])
        p = random_poly(rng, dim, 5)
        q = random_poly(rng, dim, 5)
        for axis in range(dim):
            assert (p * q).derive(axis) == p.derive(axis) * q + p * q.derive(axis)


def test_canonical_form_roundtrip():
    rng = random.Random(13)
    for _ in range(30):
        p = random_poly(rng, 3, 6)
        assert (p + (-p)).terms == {}
        assert (p - p).is_zero()


def test_degree_sentinel():
    assert ExactPolynomial.zero(2).degree == float("-inf")
    assert ExactPolynomial.constant(4, 2).degree == 0
    assert ExactPolynomial(2, {(2, 3): 1}).degree == 5


def test_antiderive_inverts_derive():
    rng = random.Random(17)
    for _ in range(20):
        p = random_poly(rng, 2, 6)
        for axis in range(2):
            assert p.antiderive(axis).derive(axis) == p


def test_json_roundtrip_and_order():
    p = ExactPolynomial(2, {(0, 2): Fraction(-1, 3), (1, 0): 2, (0, 0): 5})
    data = p.to_json_dict()
    assert data["dim"] == 2
    exps = [tuple(t["exp"]) for t in data["terms"]]
    assert exps == sorted(exps, key=grlex_key)
    assert ExactPolynomial.from_json_dict(data) == p


def test_vector_polynomial_basics():
    v = VectorPolynomial.unit_monomial((1, 1), 0, 2)  # x1 y e1
    w = v + v.scale(-1)
    assert w.is_zero()
    with pytest.raises(ValueError):
        VectorPolynomial([ExactPolynomial.zero(2), ExactPolynomial.zero(3)])
    data = v.to_json_dict()
    assert VectorPolynomial.from_json_dict(data) == v


def test_multi_index_helpers():
    assert multi_factorial((2, 3)) == 12
    assert multi_binom((2, 1), (1, 0)) == 2
    assert multi_leq((1, 0), (2, 1)) and not multi_leq((3, 0), (2, 1))
    betas = list(multi_range((1, 1)))
    assert set(betas) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    with pytest.raises(ValueError):
        multi_binom((1,), (2,))


def test_monomial_exponents_counts():
    from math import comb

    for nvars in (1, 2, 3):
        for deg in range(5):
            assert len(monomial_exponents(nvars, deg)) == comb(deg + nvars - 1, nvars - 1)
