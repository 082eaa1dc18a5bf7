"""Polynomial solutions of the Stokes system in the flat half space.

Everything here is exact.  The building blocks are:

* the odd/even harmonic extension of boundary polynomials, which parametrizes
  harmonic polynomials by their trace and normal-derivative trace;
* the Dirichlet inverse Laplacian ``delta_D_inv`` acting termwise on
  monomials;
* the pressure lift ``pressure_lift`` producing the velocity S[p] so that
  (S[p], p) solves the no-slip Stokes system;
* bases of the homogeneous spaces (degree-graded, with a pressure-lift block
  and a zero-pressure block) and of the full space up to a given degree.

Dimension claims are certified by exact rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .exactlinalg import exact_rank, nullspace, rank_mod_p
from .polynomials import (
    ExactPolynomial,
    VectorPolynomial,
    grlex_key,
    monomial_exponents,
)


# ---------------------------------------------------------------------------
# dimension formulas
# ---------------------------------------------------------------------------

def dim_homogeneous_poly(m: int, nvars: int) -> int:
    """dim of homogeneous polynomials of degree m in nvars variables."""
    if m < 0:
        return 0
    return comb(m + nvars - 1, nvars - 1)


def dim_harmonic(m: int, d: int) -> int:
    """dim of homogeneous harmonic polynomials of degree m in d variables."""
    return dim_homogeneous_poly(m, d) - dim_homogeneous_poly(m - 2, d)


def dim_homogeneous_stokes(m: int, d: int) -> int:
    """dim of the homogeneous degree-m Stokes pair space: d*C(m+d-3, d-2)."""
    if m < 1:
        return 0
    return d * comb(m + d - 3, d - 2)


def dim_stokes_space(m: int, d: int) -> int:
    """dim of the Stokes pair space up to degree m: d*C(m+d-2, d-1)."""
    if m < 1:
        return 0
    return d * comb(m + d - 2, d - 1)


def dim_zero_pressure(m: int, d: int) -> int:
    """dim of the zero-pressure block of degree m."""
    if m < 1:
        return 0
    return (d - 1) * dim_homogeneous_poly(m - 1, d - 1) - dim_homogeneous_poly(m - 2, d - 1)


# ---------------------------------------------------------------------------
# harmonic extension machinery
# ---------------------------------------------------------------------------

def _x_poly(exp_x: tuple[int, ...], dim: int, coeff=1) -> ExactPolynomial:
    """Monomial in the horizontal variables only, embedded in dimension dim."""
    return ExactPolynomial.monomial(exp_x + (0,), coeff, dim)


def harmonic_extension(q1: ExactPolynomial, q2: ExactPolynomial) -> ExactPolynomial:
    """Harmonic polynomial with trace q1 and normal-derivative trace q2.

    q(x,y) = sum_j (-1)^j/(2j)! (Lap'^j q1) y^{2j}
           + sum_j (-1)^j/(2j+1)! (Lap'^j q2) y^{2j+1};
    the series terminates because the horizontal Laplacian is nilpotent.
    """
    if q1.dim != q2.dim:
        raise ValueError("dimension mismatch")
    out = ExactPolynomial.zero(q1.dim)
    for parity, seed in ((0, q1), (1, q2)):
        term = seed
        j = 0
        while not term.is_zero():
            power = 2 * j + parity
            out = out + term.scale(Fraction((-1) ** j, factorial(power))).shift_y(power)
            term = term.horizontal_laplacian()
            j += 1
    return out


def trace_split(q: ExactPolynomial) -> tuple[ExactPolynomial, ExactPolynomial]:
    """Recover (q1, q2) with q = harmonic_extension(q1, q2); q must be harmonic."""
    if not q.laplacian().is_zero():
        raise ValueError("input is not harmonic")
    q1 = q.trace_at_zero()
    q2 = q.derive(q.dim - 1).trace_at_zero()
    if harmonic_extension(q1, q2) != q:
        raise ValueError("harmonic trace expansion failed to reconstruct input")
    return q1, q2


def harmonic_basis(m: int, d: int) -> list[ExactPolynomial]:
    """Basis of homogeneous harmonic polynomials of degree m in d variables.

    One element per horizontal monomial of degree m (even extension) and per
    horizontal monomial of degree m-1 (odd extension), in graded-lex order.
    """
    if m < 0 or d < 2:
        raise ValueError("need m >= 0 and d >= 2")
    zero_x = ExactPolynomial.zero(d)
    basis = []
    for exp in monomial_exponents(d - 1, m):
        basis.append(harmonic_extension(_x_poly(exp, d), zero_x))
    for exp in monomial_exponents(d - 1, m - 1):
        basis.append(harmonic_extension(zero_x, _x_poly(exp, d)))
    assert len(basis) == dim_harmonic(m, d)
    return basis


# ---------------------------------------------------------------------------
# Dirichlet inverse Laplacian and the pressure lift
# ---------------------------------------------------------------------------

def delta_D_inv(f: ExactPolynomial) -> ExactPolynomial:
    """u with Lap u = f and u(x, 0) = 0, termwise on monomials.

    For a single monomial x^a y^l:
        sum_j (-1)^j l! / (l+2j+2)! (Lap'^j x^a) y^{l+2j+2}.
    """
    out = ExactPolynomial.zero(f.dim)
    for exp, coeff in f.terms.items():
        l = exp[-1]
        term = ExactPolynomial.monomial(exp[:-1] + (0,), coeff, f.dim)
        j = 0
        while not term.is_zero():
            power = l + 2 * j + 2
            out = out + term.scale(
                Fraction((-1) ** j * factorial(l), factorial(power))
            ).shift_y(power)
            term = term.horizontal_laplacian()
            j += 1
    return out


def _pressure_lift_any(p: ExactPolynomial) -> VectorPolynomial:
    """S[p] = Delta_D^{-1} grad p + odd extension correction; p harmonic."""
    d = p.dim
    u_comps = [delta_D_inv(p.derive(axis)) for axis in range(d)]
    # c(x) = -int_0^{x_1} d_y p(z, x_2, ..., 0) dz, then the odd extension of c
    g = p.derive(d - 1).trace_at_zero()
    c = -g.antiderive(0)
    v1 = harmonic_extension(ExactPolynomial.zero(d), c)
    u_comps[0] = u_comps[0] + v1
    return VectorPolynomial(u_comps)


def pressure_lift(p: ExactPolynomial) -> VectorPolynomial:
    """Velocity S[p] so that (S[p], p) is a no-slip Stokes pair.

    Requires p homogeneous harmonic of degree >= 1.
    """
    if not p.laplacian().is_zero():
        raise ValueError("pressure must be harmonic")
    if not p.is_homogeneous() or p.is_zero() or p.degree < 1:
        raise ValueError("pressure must be homogeneous of degree >= 1")
    return _pressure_lift_any(p)


# ---------------------------------------------------------------------------
# Stokes pairs and bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StokesPair:
    """A polynomial velocity/pressure pair."""

    velocity: VectorPolynomial
    pressure: ExactPolynomial

    @property
    def dim(self) -> int:
        return self.pressure.dim

    def to_json_dict(self) -> dict:
        return {
            "velocity": self.velocity.to_json_dict(),
            "pressure": self.pressure.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "StokesPair":
        return cls(
            VectorPolynomial.from_json_dict(data["velocity"]),
            ExactPolynomial.from_json_dict(data["pressure"]),
        )


@dataclass
class StokesResidualReport:
    """Exact residuals of the three half-space Stokes identities."""

    momentum: VectorPolynomial
    divergence: ExactPolynomial
    trace: VectorPolynomial

    @property
    def ok(self) -> bool:
        return (
            self.momentum.is_zero()
            and self.divergence.is_zero()
            and self.trace.is_zero()
        )


def verify_stokes_pair(pair: StokesPair) -> StokesResidualReport:
    """Exact check of -Lap u + grad p = 0, div u = 0, u(x,0) = 0."""
    u, p = pair.velocity, pair.pressure
    momentum = VectorPolynomial(
        [-(u[i].laplacian()) + p.derive(i) for i in range(p.dim)]
    )
    return StokesResidualReport(momentum, u.divergence(), u.trace_at_zero())


def zero_pressure_basis(m: int, d: int) -> list[StokesPair]:
    """Basis of the degree-m zero-pressure block.

    Elements are odd harmonic extensions of divergence-free horizontal
    polynomial fields of degree m-1, with vanishing last component.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    exps = monomial_exponents(d - 1, m - 1)
    ncols = (d - 1) * len(exps)
    if ncols == 0:
        return []
    # columns: (component i, monomial exp) -> constraint rows over degree m-2 monomials
    target = monomial_exponents(d - 1, m - 2)
    rows = []
    for texp in target:
        row = []
        for i in range(d - 1):
            for exp in exps:
                if exp[i] >= 1 and tuple(
                    e - (1 if j == i else 0) for j, e in enumerate(exp)
                ) == texp:
                    row.append(Fraction(exp[i]))
                else:
                    row.append(Fraction(0))
        rows.append(row)
    kernel = nullspace(rows, ncols)
    zero_x = ExactPolynomial.zero(d)
    out = []
    for vec in kernel:
        comps = []
        for i in range(d - 1):
            a_i = ExactPolynomial.zero(d)
            for j, exp in enumerate(exps):
                c = vec[i * len(exps) + j]
                if c:
                    a_i = a_i + _x_poly(exp, d, c)
            comps.append(harmonic_extension(zero_x, a_i))
        comps.append(ExactPolynomial.zero(d))
        out.append(StokesPair(VectorPolynomial(comps), ExactPolynomial.zero(d)))
    assert len(out) == dim_zero_pressure(m, d)
    return out


@dataclass
class SpaceBasis:
    """Basis of the Stokes pair space up to order m, with block tags.

    tags[i] is "V1" (pressure-lift block) or "V2" (zero-pressure block);
    grades[i] is the homogeneous degree of element i.
    """

    elements: list[StokesPair]
    order: int
    dim: int
    tags: list[str] = field(default_factory=list)
    grades: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)

    def coefficient_matrix(self) -> list[list[Fraction]]:
        """Rows = elements, columns = all velocity/pressure monomial slots."""
        d = self.dim
        vel_slots = []
        for deg in range(self.order + 1):
            vel_slots.extend(monomial_exponents(d, deg))
        vel_slots.sort(key=grlex_key)
        rows = []
        for el in self.elements:
            row = []
            for comp in range(d):
                terms = el.velocity[comp].terms
                row.extend(terms.get(exp, Fraction(0)) for exp in vel_slots)
            pterms = el.pressure.terms
            row.extend(pterms.get(exp, Fraction(0)) for exp in vel_slots)
            rows.append(row)
        return rows

    def certify_rank(self, exact: bool = False) -> bool:
        """True iff the elements are linearly independent over Q.

        Full rank mod p certifies full rank over Q; `exact=True` forces the
        Fraction elimination (slow for the large bases).
        """
        rows = self.coefficient_matrix()
        if exact:
            return exact_rank(rows) == len(rows)
        return rank_mod_p(rows) == len(rows)


def homogeneous_stokes_basis(m: int, d: int) -> tuple[list[StokesPair], list[str]]:
    """Basis of the homogeneous degree-m block, with V1/V2 tags."""
    if m < 1 or d < 2:
        raise ValueError("need m >= 1 and d >= 2")
    elements: list[StokesPair] = []
    tags: list[str] = []
    for p in harmonic_basis(m - 1, d):
        elements.append(StokesPair(_pressure_lift_any(p), p))
        tags.append("V1")
    for pair in zero_pressure_basis(m, d):
        elements.append(pair)
        tags.append("V2")
    expected = dim_homogeneous_stokes(m, d)
    if len(elements) != expected:
        raise AssertionError(
            f"degree-{m} block has {len(elements)} elements, expected {expected}"
        )
    return elements, tags


def stokes_basis(m: int, d: int) -> SpaceBasis:
    """Degree-graded basis of the Stokes pair space up to order m."""
    if m < 1 or d < 2:
        raise ValueError("need m >= 1 and d >= 2")
    elements: list[StokesPair] = []
    tags: list[str] = []
    grades: list[int] = []
    for j in range(1, m + 1):
        block, btags = homogeneous_stokes_basis(j, d)
        elements.extend(block)
        tags.extend(btags)
        grades.extend([j] * len(block))
    basis = SpaceBasis(elements, m, d, tags, grades)
    expected = dim_stokes_space(m, d)
    if len(basis) != expected:
        raise AssertionError(f"basis size {len(basis)} != {expected}")
    return basis


def pressure_from_velocity(u: VectorPolynomial) -> ExactPolynomial:
    """Recover the pressure of a Stokes velocity, normalized to p(0) = 0.

    Raises ValueError if u is not the velocity of any polynomial Stokes pair.
    """
    d = u.dim
    if len(u) != d:
        raise ValueError("velocity must have d components in d variables")
    g = VectorPolynomial([u[i].laplacian() for i in range(d)])
    for i in range(d):
        for j in range(i + 1, d):
            if g[i].derive(j) != g[j].derive(i):
                raise ValueError("Lap u is not a gradient: not a Stokes velocity")
    # grad p = g; p = sum over homogeneous parts of (1/(k+1)) sum_j x_j g_j^{(k)}
    p = ExactPolynomial.zero(d)
    degrees = sorted({deg for i in range(d) for deg in g[i].homogeneous_degrees()})
    for k in degrees:
        part = ExactPolynomial.zero(d)
        for j in range(d):
            part = part + ExactPolynomial.variable(j, d) * g[j].homogeneous_part(k)
        p = p + part.scale(Fraction(1, k + 1))
    if VectorPolynomial([p.derive(i) for i in range(d)]) != g:
        raise ValueError("gradient reconstruction failed: not a Stokes velocity")
    report = verify_stokes_pair(StokesPair(u, p))
    if not report.ok:
        raise ValueError("no polynomial pressure completes this velocity")
    return p
