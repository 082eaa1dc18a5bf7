"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial in d variables is stored as a sparse map from exponent tuples to
``Fraction`` coefficients.  Variables are ordered (x_1, ..., x_{d-1}, y): the
last axis is always the vertical coordinate.  Zero coefficients are never
stored, so equality of term maps is equality of polynomials.

All values are immutable after construction and every operation returns a new
object, so they are safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

#: degree of the zero polynomial
NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# multi-index helpers (horizontal multi-indices live in Z_{>=0}^{d-1})
# ---------------------------------------------------------------------------

def multi_length(alpha: Sequence[int]) -> int:
    """|alpha| = sum of the entries."""
    return sum(alpha)


def multi_factorial(alpha: Sequence[int]) -> int:
    """alpha! = product of entrywise factorials."""
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def multi_leq(beta: Sequence[int], alpha: Sequence[int]) -> bool:
    """Componentwise partial order beta <= alpha."""
    if len(beta) != len(alpha):
        raise ValueError("multi-index lengths differ")
    return all(b <= a for b, a in zip(beta, alpha))


def multi_binom(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Product of componentwise binomial coefficients; requires beta <= alpha."""
    if not multi_leq(beta, alpha):
        raise ValueError(f"{beta} is not <= {alpha}")
    out = 1
    for a, b in zip(alpha, beta):
        out *= comb(a, b)
    return out


def multi_sub(alpha: Sequence[int], beta: Sequence[int]) -> Exponent:
    """alpha - beta for beta <= alpha."""
    if not multi_leq(beta, alpha):
        raise ValueError(f"{beta} is not <= {alpha}")
    return tuple(a - b for a, b in zip(alpha, beta))


def multi_range(alpha: Sequence[int]) -> Iterator[Exponent]:
    """All beta with 0 <= beta <= alpha, graded-lex order."""
    betas: list[Exponent] = [()]
    for a in alpha:
        betas = [b + (j,) for b in betas for j in range(a + 1)]
    return iter(sorted(betas, key=grlex_key))


def monomial_exponents(nvars: int, degree: int) -> list[Exponent]:
    """All exponent tuples in nvars variables of total degree == degree, graded-lex."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for lead in range(degree + 1):
        out.extend((lead,) + rest for rest in monomial_exponents(nvars - 1, degree - lead))
    return sorted(out, key=grlex_key)


def grlex_key(exp: Sequence[int]) -> tuple:
    """Sort key for graded lexicographic term order."""
    return (sum(exp), tuple(exp))


def validate_multi_index(alpha: Sequence[int]) -> Exponent:
    """Check the entries are non-negative integers and return them as a tuple."""
    tup = tuple(int(a) for a in alpha)
    if any(a < 0 for a in tup):
        raise ValueError(f"multi-index entries must be >= 0, got {alpha}")
    return tup


# ---------------------------------------------------------------------------
# ExactPolynomial
# ---------------------------------------------------------------------------

class ExactPolynomial:
    """Sparse polynomial with exact rational coefficients.

    `dim` is the ambient dimension d; exponent tuples have length d with the
    last slot reserved for y.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[Exponent, Fraction] | None = None):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != dim:
                    raise ValueError(f"exponent {exp} has length != dim={dim}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = Fraction(coeff)
                if c != 0:
                    prev = clean.get(exp)
                    c = c if prev is None else prev + c
                    if c == 0:
                        clean.pop(exp, None)
                    else:
                        clean[exp] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "ExactPolynomial":
        return cls(dim)

    @classmethod
    def constant(cls, value, dim: int) -> "ExactPolynomial":
        return cls(dim, {(0,) * dim: Fraction(value)})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1, dim: int | None = None) -> "ExactPolynomial":
        exp = tuple(int(e) for e in exp)
        return cls(len(exp) if dim is None else dim, {exp: Fraction(coeff)})

    @classmethod
    def variable(cls, axis: int, dim: int) -> "ExactPolynomial":
        """The coordinate polynomial for `axis` (0-based; axis dim-1 is y)."""
        if not 0 <= axis < dim:
            raise ValueError(f"axis {axis} out of range for dim {dim}")
        exp = [0] * dim
        exp[axis] = 1
        return cls(dim, {tuple(exp): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self):
        """Total degree; -inf for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def degree_in(self, axis: int):
        if not self._terms:
            return NEG_INF
        return max(e[axis] for e in self._terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def homogeneous_part(self, degree: int) -> "ExactPolynomial":
        return ExactPolynomial(
            self.dim, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def homogeneous_degrees(self) -> list[int]:
        return sorted({sum(e) for e in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.homogeneous_degrees()) <= 1

    # -- ring operations ----------------------------------------------------

    def _check_dim(self, other: "ExactPolynomial") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        self._check_dim(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return ExactPolynomial(self.dim, out)

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "ExactPolynomial":
        if isinstance(other, ExactPolynomial):
            self._check_dim(other)
            out: dict[Exponent, Fraction] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    s = out.get(e, Fraction(0)) + c1 * c2
                    if s == 0:
                        out.pop(e, None)
                    else:
                        out[e] = s
            return ExactPolynomial(self.dim, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor) -> "ExactPolynomial":
        f = Fraction(factor)
        if f == 0:
            return ExactPolynomial.zero(self.dim)
        return ExactPolynomial(self.dim, {e: f * c for e, c in self._terms.items()})

    def __pow__(self, n: int) -> "ExactPolynomial":
        if n < 0:
            raise ValueError("negative power")
        out = ExactPolynomial.constant(1, self.dim)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactPolynomial)
            and self.dim == other.dim
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.dim, frozenset(self._terms.items())))

    # -- calculus ------------------------------------------------------------

    def derive(self, axis: int) -> "ExactPolynomial":
        """Exact partial derivative along `axis` (0-based; dim-1 is y)."""
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            k = e[axis]
            if k == 0:
                continue
            ne = list(e)
            ne[axis] = k - 1
            out[tuple(ne)] = c * k
        return ExactPolynomial(self.dim, out)

    def antiderive(self, axis: int) -> "ExactPolynomial":
        """Antiderivative along `axis` vanishing where that coordinate is 0."""
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[axis] = e[axis] + 1
            out[tuple(ne)] = c / (e[axis] + 1)
        return ExactPolynomial(self.dim, out)

    def laplacian(self) -> "ExactPolynomial":
        out = ExactPolynomial.zero(self.dim)
        for axis in range(self.dim):
            out = out + self.derive(axis).derive(axis)
        return out

    def horizontal_laplacian(self) -> "ExactPolynomial":
        """Laplacian in the x variables only (all axes but the last)."""
        out = ExactPolynomial.zero(self.dim)
        for axis in range(self.dim - 1):
            out = out + self.derive(axis).derive(axis)
        return out

    def gradient(self) -> "VectorPolynomial":
        return VectorPolynomial([self.derive(axis) for axis in range(self.dim)])

    # -- evaluation / substitution -------------------------------------------

    def eval(self, point: Sequence) -> Fraction:
        """Exact evaluation at a point of length dim."""
        if len(point) != self.dim:
            raise ValueError(f"point length {len(point)} != dim {self.dim}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(pt, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        if len(point) != self.dim:
            raise ValueError(f"point length {len(point)} != dim {self.dim}")
        total = 0.0
        for e, c in self._terms.items():
            term = float(c)
            for v, k in zip(point, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def trace_at_zero(self) -> "ExactPolynomial":
        """Substitute y = 0 (keep only terms with zero y-exponent)."""
        return ExactPolynomial(
            self.dim, {e: c for e, c in self._terms.items() if e[-1] == 0}
        )

    def shift_y(self, power: int) -> "ExactPolynomial":
        """Multiply by y**power."""
        if power < 0:
            raise ValueError("negative power")
        out = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[-1] += power
            out[tuple(ne)] = c
        return ExactPolynomial(self.dim, out)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form: {"dim": d, "terms": [{"exp": [...], "num": "...", "den": "..."}]}."""
        terms = []
        for exp in sorted(self._terms, key=grlex_key):
            c = self._terms[exp]
            terms.append(
                {"exp": list(exp), "num": str(c.numerator), "den": str(c.denominator)}
            )
        return {"dim": self.dim, "terms": terms}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExactPolynomial":
        terms = {
            tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"]))
            for t in data["terms"]
        }
        return cls(int(data["dim"]), terms)

    # -- misc -------------------------------------------------------------------

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        names = [f"x{i + 1}" for i in range(self.dim - 1)] + ["y"]
        parts = []
        for exp in sorted(self._terms, key=grlex_key):
            c = self._terms[exp]
            factors = [
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(names, exp)
                if k > 0
            ]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# VectorPolynomial
# ---------------------------------------------------------------------------

class VectorPolynomial:
    """A d-vector of ExactPolynomial sharing one ambient dimension."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[ExactPolynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty vector")
        dim = comps[0].dim
        if any(c.dim != dim for c in comps):
            raise ValueError("components have mismatched dimensions")
        self.components = comps

    @classmethod
    def zero(cls, ncomp: int, dim: int) -> "VectorPolynomial":
        return cls([ExactPolynomial.zero(dim) for _ in range(ncomp)])

    @classmethod
    def unit_monomial(cls, exp: Sequence[int], comp: int, ncomp: int, coeff=1) -> "VectorPolynomial":
        """coeff * x^exp e_comp (comp 0-based)."""
        dim = len(exp)
        comps = [ExactPolynomial.zero(dim) for _ in range(ncomp)]
        comps[comp] = ExactPolynomial.monomial(exp, coeff)
        return cls(comps)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> ExactPolynomial:
        return self.components[i]

    def __add__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        if len(other) != len(self):
            raise ValueError("component count mismatch")
        return VectorPolynomial([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        return self + other.scale(-1)

    def scale(self, factor) -> "VectorPolynomial":
        return VectorPolynomial([c.scale(factor) for c in self.components])

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorPolynomial) and self.components == other.components

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def divergence(self) -> ExactPolynomial:
        """sum_i d(component_i)/d(axis_i); requires len == dim."""
        if len(self.components) != self.dim:
            raise ValueError("divergence needs a d-vector in d variables")
        out = ExactPolynomial.zero(self.dim)
        for axis, comp in enumerate(self.components):
            out = out + comp.derive(axis)
        return out

    def laplacian(self) -> "VectorPolynomial":
        return VectorPolynomial([c.laplacian() for c in self.components])

    def derive(self, axis: int) -> "VectorPolynomial":
        return VectorPolynomial([c.derive(axis) for c in self.components])

    def eval(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(c.eval(point) for c in self.components)

    def trace_at_zero(self) -> "VectorPolynomial":
        return VectorPolynomial([c.trace_at_zero() for c in self.components])

    def to_json_dict(self) -> dict:
        return {"components": [c.to_json_dict() for c in self.components]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "VectorPolynomial":
        return cls([ExactPolynomial.from_json_dict(c) for c in data["components"]])

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.components) + ")"
