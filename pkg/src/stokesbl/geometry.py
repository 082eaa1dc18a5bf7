"""Rough boundary graphs: 2pi-periodic profiles gamma with -1 <= gamma <= 0.

The numerical pipeline is restricted to Lipschitz graph boundaries given by a
truncated Fourier series.  Non-graph rough layers (porous boundaries etc.)
are outside the numerical scope and are rejected up front.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BoundaryGeometry:
    """2pi-periodic boundary graph y = gamma(x) stored as Fourier modes.

    `coeffs[k]` for k >= 0 holds c_k with gamma(x) = c_0 + 2 Re sum_{k>0} c_k e^{ikx};
    c_0 must be real.  The thickness constraint -1 <= gamma <= 0 is enforced at
    construction on a fine sample grid.
    """

    coeffs: tuple = field(default_factory=tuple)  # ((k, re, im), ...) with k >= 0

    def __post_init__(self):
        seen = set()
        for k, re, im in self.coeffs:
            if k < 0 or k in seen:
                raise ValueError("modes must have unique wavenumbers k >= 0")
            seen.add(k)
            if k == 0 and im != 0.0:
                raise ValueError("mean mode must be real")
        lo, hi = self.range()
        if lo < -1.0 - 1e-12 or hi > 1e-12:
            raise ValueError(f"gamma range [{lo:.3g}, {hi:.3g}] violates -1 <= gamma <= 0")

    # -- constructors --------------------------------------------------------

    @classmethod
    def flat(cls, depth: float = 0.0) -> "BoundaryGeometry":
        """gamma == -depth."""
        if depth == 0.0:
            return cls(())
        return cls(((0, -float(depth), 0.0),))

    @classmethod
    def from_fourier(cls, modes: dict) -> "BoundaryGeometry":
        """From {k: complex} with k >= 0."""
        items = tuple(
            (int(k), float(np.real(c)), float(np.imag(c))) for k, c in sorted(modes.items())
        )
        return cls(items)

    @classmethod
    def from_samples(cls, samples, max_mode: int | None = None) -> "BoundaryGeometry":
        """Fit Fourier modes to equispaced samples over one period."""
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        spec = np.fft.rfft(samples) / n
        kmax = n // 2 if max_mode is None else min(max_mode, n // 2)
        modes = {}
        if abs(spec[0]) > 1e-14:
            modes[0] = complex(spec[0].real, 0.0)
        for k in range(1, kmax + 1):
            if abs(spec[k]) > 1e-14:
                modes[k] = complex(spec[k])
        return cls.from_fourier(modes)

    @classmethod
    def from_json_dict(cls, data: dict) -> "BoundaryGeometry":
        if "fourier" in data:
            modes = {int(t["k"]): complex(t["re"], t.get("im", 0.0)) for t in data["fourier"]}
            return cls.from_fourier(modes)
        if "samples" in data:
            return cls.from_samples(data["samples"])
        raise ValueError("geometry JSON needs a 'fourier' or 'samples' key")

    # -- evaluation -----------------------------------------------------------

    def _eval(self, x, order: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, re, im in self.coeffs:
            c = complex(re, im)
            if k == 0:
                if order == 0:
                    out = out + re
                continue
            out = out + 2.0 * ((1j * k) ** order * c * np.exp(1j * k * x)).real
        return out

    def gamma(self, x) -> np.ndarray:
        return self._eval(x, 0)

    def dgamma(self, x) -> np.ndarray:
        return self._eval(x, 1)

    def d2gamma(self, x) -> np.ndarray:
        return self._eval(x, 2)

    def range(self, nsample: int = 4096) -> tuple[float, float]:
        vals = self.gamma(np.linspace(0.0, 2.0 * np.pi, nsample, endpoint=False))
        return float(vals.min()), float(vals.max())

    @property
    def is_flat(self) -> bool:
        return all(re == 0.0 and im == 0.0 for _, re, im in self.coeffs)

    @property
    def max_mode(self) -> int:
        active = [k for k, re, im in self.coeffs if re or im]
        return max(active, default=0)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"fourier": [{"k": k, "re": re, "im": im} for k, re, im in self.coeffs]}

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_json_dict(), sort_keys=True).encode()
        ).hexdigest()[:16]
