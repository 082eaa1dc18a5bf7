"""Closed-form Stokes solutions for one Fourier mode in a half cylinder.

A right-hand side F(x,y) = P(y-L) e^{-|k|(y-L)} e^{ik.x} together with a trace
at y = L determines the decaying Stokes solution above L in closed form: two
half-line integrals produce polynomial profiles (Qbar, Vbar), a scalar c_k
closes the system, and the resulting profiles satisfy exact residual
identities under the mode-wise operators

    Lap -> d_z^2 - 2|k| d_z,      grad -> [ik, -|k|]^T (.) + e_d d_z.

The machinery is generic over the coefficient scalars: `SqrtExt` (complex
rationals extended by sqrt(k.k), so identities hold exactly in any dimension)
or plain Python complex for the floating pipeline.  The same code path also
yields the Dirichlet-to-Neumann matrices used as transparent top boundary
conditions by the cell solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np


# ---------------------------------------------------------------------------
# exact scalars: (a) + (b) sqrt(n) with Gaussian-rational a, b
# ---------------------------------------------------------------------------

def _gmul(p, q):
    return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])


class SqrtExt:
    """Exact complex scalar (ar + i*ai) + (br + i*bi) * sqrt(n).

    Perfect-square radicands fold into the rational part, so for d = 2 the
    arithmetic collapses to Gaussian rationals automatically.
    """

    __slots__ = ("ar", "ai", "br", "bi", "n")

    def __init__(self, ar=0, ai=0, br=0, bi=0, n=0):
        ar, ai, br, bi = Fraction(ar), Fraction(ai), Fraction(br), Fraction(bi)
        n = int(n)
        if n < 0:
            raise ValueError("radicand must be >= 0")
        if n:
            r = isqrt(n)
            if r * r == n:
                ar, ai = ar + br * r, ai + bi * r
                br = bi = Fraction(0)
                n = 0
        if br == 0 and bi == 0:
            n = 0
        self.ar, self.ai, self.br, self.bi, self.n = ar, ai, br, bi, n

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(value):
        if isinstance(value, SqrtExt):
            return value
        if isinstance(value, (int, Fraction)):
            return SqrtExt(value)
        return None

    @classmethod
    def of(cls, re, im=0) -> "SqrtExt":
        return cls(re, im)

    @classmethod
    def sqrt_of(cls, n: int) -> "SqrtExt":
        return cls(0, 0, 1, 0, n)

    def _common_n(self, other: "SqrtExt") -> int:
        if self.n and other.n and self.n != other.n:
            raise ValueError(f"incompatible radicands {self.n} and {other.n}")
        return self.n or other.n

    # -- ring/field operations ----------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self._common_n(o)
        return SqrtExt(self.ar + o.ar, self.ai + o.ai, self.br + o.br, self.bi + o.bi, n)

    __radd__ = __add__

    def __neg__(self):
        return SqrtExt(-self.ar, -self.ai, -self.br, -self.bi, self.n)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self._common_n(o)
        a1, b1 = (self.ar, self.ai), (self.br, self.bi)
        a2, b2 = (o.ar, o.ai), (o.br, o.bi)
        ra = _gmul(a1, a2)
        rb = _gmul(b1, b2)
        rat = (ra[0] + n * rb[0], ra[1] + n * rb[1])
        mix1 = _gmul(a1, b2)
        mix2 = _gmul(b1, a2)
        return SqrtExt(rat[0], rat[1], mix1[0] + mix2[0], mix1[1] + mix2[1], n)

    __rmul__ = __mul__

    def inverse(self) -> "SqrtExt":
        a = (self.ar, self.ai)
        b = (self.br, self.bi)
        asq = _gmul(a, a)
        bsq = _gmul(b, b)
        w = (asq[0] - self.n * bsq[0], asq[1] - self.n * bsq[1])
        wnorm = w[0] * w[0] + w[1] * w[1]
        if wnorm == 0:
            raise ZeroDivisionError("division by zero SqrtExt")
        winv = (w[0] / wnorm, -w[1] / wnorm)
        pa = _gmul(a, winv)
        pb = _gmul((-b[0], -b[1]), winv)
        return SqrtExt(pa[0], pa[1], pb[0], pb[1], self.n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.n or o.n
        if self.n and o.n and self.n != o.n:
            return False
        return (self.ar, self.ai, self.br, self.bi) == (o.ar, o.ai, o.br, o.bi)

    def __hash__(self):
        return hash((self.ar, self.ai, self.br, self.bi, self.n))

    def conjugate(self) -> "SqrtExt":
        return SqrtExt(self.ar, -self.ai, self.br, -self.bi, self.n)

    def is_zero(self) -> bool:
        return self.ar == 0 and self.ai == 0 and self.br == 0 and self.bi == 0

    def as_complex(self) -> complex:
        root = sqrt(self.n) if self.n else 0.0
        return complex(
            float(self.ar) + float(self.br) * root,
            float(self.ai) + float(self.bi) * root,
        )

    def __repr__(self):
        if self.n:
            return f"({self.ar}+{self.ai}i) + ({self.br}+{self.bi}i)*sqrt({self.n})"
        return f"({self.ar}+{self.ai}i)"


# ---------------------------------------------------------------------------
# generic univariate polynomial helpers (coefficient list, index = power)
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p: list, q: list) -> list:
    out = list(p) + [0 * c for c in q[len(p):]]
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return _trim(out)


def poly_scale(c, p: list) -> list:
    return _trim([c * v for v in p])


def poly_derive(p: list) -> list:
    return _trim([i * p[i] for i in range(1, len(p))])


def poly_integral0(p: list) -> list:
    """Antiderivative vanishing at z = 0."""
    return _trim([0 * c for c in p[:1]] + [p[i] / (i + 1) for i in range(len(p))])


def poly_exp_tail(p: list, inv2k) -> list:
    """int_z^inf p(w) e^{2|k|(z-w)} dw = sum_j p^(j)(z) / (2|k|)^{j+1}."""
    out: list = []
    cur = list(p)
    factor = inv2k
    while cur:
        out = poly_add(out, poly_scale(factor, cur))
        cur = poly_derive(cur)
        factor = factor * inv2k
    return out


def poly_eval0(p: list, zero):
    return p[0] if p else zero


def poly_is_zero(p: list) -> bool:
    return all(c == 0 for c in p)


# ---------------------------------------------------------------------------
# exact mode data and solutions
# ---------------------------------------------------------------------------

def knorm_exact(k: tuple[int, ...]) -> SqrtExt:
    """|k| as an exact scalar (integer when k.k is a perfect square)."""
    n = sum(int(v) ** 2 for v in k)
    if n == 0:
        raise ValueError("k must be nonzero")
    return SqrtExt.sqrt_of(n)


def _symbol_vector(k: tuple[int, ...], knorm) -> list:
    """a = [i k_1, ..., i k_{d-1}, -|k|] as scalars matching knorm's type."""
    if isinstance(knorm, SqrtExt):
        return [SqrtExt(0, int(v)) for v in k] + [-knorm]
    return [1j * float(v) for v in k] + [-knorm]


@dataclass
class ModeData:
    """One mode's source amplitude and trace value.

    F_poly[i] is the coefficient list (in z) of source component i; b_hat is
    the velocity trace at y = L.  The reference height L is metadata only.
    """

    k: tuple[int, ...]
    F_poly: list[list]
    b_hat: list
    L: Fraction = Fraction(3)

    def __post_init__(self):
        self.k = tuple(int(v) for v in self.k)
        if all(v == 0 for v in self.k):
            raise ValueError("zero mode is handled by the recursion, not here")
        d = len(self.k) + 1
        if len(self.F_poly) != d or len(self.b_hat) != d:
            raise ValueError(f"need {d} components for k={self.k}")


@dataclass
class ModeSolution:
    """Profiles (V_k, Q_k) of the decaying solution above L, plus c_k."""

    k: tuple[int, ...]
    V: list[list]
    Q: list
    c: object
    knorm: object
    L: Fraction = Fraction(3)


def halfline_integrals(k: tuple[int, ...], F_poly: list[list], knorm=None):
    """The two closed-form half-line integrals (Qbar, Vbar) driven by F."""
    k = tuple(int(v) for v in k)
    if all(v == 0 for v in k):
        raise ValueError("k must be nonzero")
    if knorm is None:
        knorm = knorm_exact(k)
    d = len(k) + 1
    a = _symbol_vector(k, knorm)
    one = knorm / knorm
    inv2k = one / (knorm + knorm)
    minus_inv2k = -inv2k

    S: list = []
    for j in range(d):
        S = poly_add(S, poly_scale(a[j], F_poly[j]))
    S = poly_add(S, poly_derive(F_poly[d - 1]))
    qbar = poly_scale(minus_inv2k, poly_add(poly_integral0(S), poly_exp_tail(S, inv2k)))

    dqbar = poly_derive(qbar)
    vbar = []
    for j in range(d):
        T = poly_scale(-one, F_poly[j])
        T = poly_add(T, poly_scale(a[j], qbar))
        if j == d - 1:
            T = poly_add(T, dqbar)
        vbar.append(
            poly_scale(minus_inv2k, poly_add(poly_integral0(T), poly_exp_tail(T, inv2k)))
        )
    return qbar, vbar


def solve_mode(data: ModeData) -> ModeSolution:
    """Decaying mode solution with trace b_hat, per the closed formulas."""
    knorm = knorm_exact(data.k)
    d = len(data.k) + 1
    a = _symbol_vector(data.k, knorm)
    zero = knorm - knorm
    qbar, vbar = halfline_integrals(data.k, data.F_poly, knorm)

    c = zero
    for j in range(d):
        c = c + a[j] * data.b_hat[j]
    c = c + poly_eval0(poly_derive(vbar[d - 1]), zero)

    # V_j(z) = b_j + (c/|k|) a_j z + vbar_j(z) - vbar_j(0)
    c_over_k = c / knorm
    V = []
    for j in range(d):
        head = [data.b_hat[j] - poly_eval0(vbar[j], zero), c_over_k * a[j]]
        V.append(poly_add(head, vbar[j]))
    Q = poly_add([-(c + c)], qbar)
    return ModeSolution(data.k, V, Q, c, knorm, data.L)


@dataclass
class ModeResiduals:
    """Exact residual polynomials of the Appendix identities."""

    momentum: list[list]
    divergence: list
    trace: list

    @property
    def ok(self) -> bool:
        return (
            all(poly_is_zero(m) for m in self.momentum)
            and poly_is_zero(self.divergence)
            and all(t == 0 for t in self.trace)
        )


def residual_check(k: tuple[int, ...], F_poly: list[list], sol: ModeSolution,
                   b_hat: list | None = None) -> ModeResiduals:
    """Momentum, divergence and trace residuals of a mode solution.

    Mode-wise operators: Lap -> d_z^2 - 2|k| d_z and grad -> a (.) + e_d d_z
    with a = [ik, -|k|].  All three residuals vanish identically for outputs
    of solve_mode.
    """
    knorm = sol.knorm
    d = len(k) + 1
    a = _symbol_vector(tuple(int(v) for v in k), knorm)
    zero = knorm - knorm
    two_k = knorm + knorm

    dQ = poly_derive(sol.Q)
    momentum = []
    for j in range(d):
        dV = poly_derive(sol.V[j])
        d2V = poly_derive(dV)
        res = poly_scale(-1 * (knorm / knorm), d2V)
        res = poly_add(res, poly_scale(two_k, dV))
        res = poly_add(res, poly_scale(a[j], sol.Q))
        if j == d - 1:
            res = poly_add(res, dQ)
        res = poly_add(res, poly_scale(-(knorm / knorm), F_poly[j]))
        momentum.append(res)

    div: list = []
    for j in range(d):
        div = poly_add(div, poly_scale(a[j], sol.V[j]))
    div = poly_add(div, poly_derive(sol.V[d - 1]))

    trace = []
    if b_hat is not None:
        for j in range(d):
            trace.append(poly_eval0(sol.V[j], zero) - b_hat[j])
    return ModeResiduals(momentum, div, trace)


def dtn_map(k: tuple[int, ...]):
    """Exact DtN matrix M_k with (d_y V)(L) = M_k b for the source-free mode.

    M_k = -|k| I + (1/|k|) a a^T with a = [ik, -|k|]; the associated pressure
    trace is Q_k(0) = -2 c_k = -2 a . b.
    """
    k = tuple(int(v) for v in k)
    if all(v == 0 for v in k):
        raise ValueError("k must be nonzero")
    knorm = knorm_exact(k)
    d = len(k) + 1
    a = _symbol_vector(k, knorm)
    inv_k = (knorm / knorm) / knorm
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            entry = inv_k * a[i] * a[j]
            if i == j:
                entry = entry - knorm
            row.append(entry)
        rows.append(row)
    return rows


def dtn_matrix(k: tuple[int, ...]) -> np.ndarray:
    """Floating DtN matrix (complex) for the cell solver."""
    return np.array([[e.as_complex() for e in row] for row in dtn_map(k)])


# ---------------------------------------------------------------------------
# floating path used by the corrector pipeline
# ---------------------------------------------------------------------------

def solve_mode_numeric(k: tuple[int, ...], F_poly, b_hat, L: float = 3.0):
    """solve_mode over complex floats; returns (V, Q, c) coefficient arrays."""
    k = tuple(int(v) for v in k)
    knorm = float(np.sqrt(sum(v * v for v in k)))
    if knorm == 0:
        raise ValueError("k must be nonzero")
    d = len(k) + 1
    a = _symbol_vector(k, knorm)
    F = [list(map(complex, comp)) for comp in F_poly]
    b = [complex(v) for v in b_hat]
    qbar, vbar = halfline_integrals(k, F, knorm)
    c = sum(a[j] * b[j] for j in range(d)) + poly_eval0(poly_derive(vbar[d - 1]), 0j)
    V = []
    for j in range(d):
        head = [b[j] - poly_eval0(vbar[j], 0j), (c / knorm) * a[j]]
        V.append(poly_add(head, vbar[j]))
    Q = poly_add([-2 * c], qbar)
    return (
        [np.array(v, dtype=complex) if v else np.zeros(1, dtype=complex) for v in V],
        np.array(Q, dtype=complex) if Q else np.zeros(1, dtype=complex),
        complex(c),
    )


# ---------------------------------------------------------------------------
# mode expansions of periodic fields above the reference height
# ---------------------------------------------------------------------------

@dataclass
class ModeExpansion:
    """Finite sum of decaying Fourier modes above y = L (d = 2 layout).

    modes maps the integer wavenumber k != 0 to dict(V=(2, n) complex coeff
    array, Q=(nq,) array, c=complex).  Fields are real: modes come in
    conjugate pairs.
    """

    L: float
    modes: dict = field(default_factory=dict)

    def wavenumbers(self) -> list[int]:
        return sorted(self.modes)

    def _accumulate(self, x, y, select, dx=0, dy=0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        z = y - self.L
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for k, data in self.modes.items():
            kn = abs(k)
            poly = np.asarray(select(data), dtype=complex)
            for _ in range(dy):
                # d/dy of P(z)e^{-|k|z} -> (P' - |k|P)(z) e^{-|k|z}
                dp = np.polynomial.polynomial.polyder(poly) if poly.size > 1 else np.zeros(1, complex)
                poly = np.polynomial.polynomial.polyadd(dp, -kn * poly)
            vals = np.polynomial.polynomial.polyval(z, poly)
            out += (1j * k) ** dx * vals * np.exp(-kn * z) * np.exp(1j * k * x)
        return out

    def velocity(self, x, y, comp: int, dx: int = 0, dy: int = 0) -> np.ndarray:
        """Real velocity component (optionally with d/dx, d/dy applied)."""
        return self._accumulate(x, y, lambda data: data["V"][comp], dx=dx, dy=dy).real

    def pressure(self, x, y, dx: int = 0, dy: int = 0) -> np.ndarray:
        return self._accumulate(x, y, lambda data: data["Q"], dx=dx, dy=dy).real

    def to_json_list(self) -> list:
        out = []
        for k in self.wavenumbers():
            data = self.modes[k]
            out.append(
                {
                    "k": int(k),
                    "L": self.L,
                    "V_coeffs": [[[float(c.real), float(c.imag)] for c in comp] for comp in data["V"]],
                    "Q_coeffs": [[float(c.real), float(c.imag)] for c in data["Q"]],
                    "c": [float(data["c"].real), float(data["c"].imag)],
                }
            )
        return out

    @classmethod
    def from_json_list(cls, items: list, L: float | None = None) -> "ModeExpansion":
        modes = {}
        level = L
        for item in items:
            level = item["L"] if level is None else level
            modes[int(item["k"])] = {
                "V": np.array([[complex(re, im) for re, im in comp] for comp in item["V_coeffs"]]),
                "Q": np.array([complex(re, im) for re, im in item["Q_coeffs"]]),
                "c": complex(item["c"][0], item["c"][1]),
            }
        return cls(3.0 if level is None else float(level), modes)
