"""Spectral line records and Lorentzian line-sum evaluation.

A two-time correlator decomposed into complex damped exponentials

    <c'(0)c(t)> = n_c * sum_p (L_p + i K_p) exp(-i w_p t - g_p t / 2)

transforms into a sum of Lorentzians with dispersive admixtures.  These
helpers are shared by the coherent-drive, exact and approximate engines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpectralLine:
    """One emission line: center, FWHM, Lorentzian and dispersive weights."""

    omega: float
    gamma: float
    L: float
    K: float = 0.0


def lines_from_eigenpairs(lams: np.ndarray, coeffs: np.ndarray) -> list[SpectralLine]:
    """Convert generator eigenvalues and normalized projections into lines.

    ``lams`` are eigenvalues of the regression generator acting as
    exp(lam * t), so ``omega = -Im(lam)`` and ``gamma = -2 Re(lam)``;
    ``coeffs`` are the (L + iK) complex weights.
    """
    out = []
    for lam, c in zip(lams, coeffs):
        out.append(
            SpectralLine(
                omega=float(-lam.imag),
                gamma=float(-2.0 * lam.real),
                L=float(c.real),
                K=float(c.imag),
            )
        )
    return out


def evaluate_lines(lines: list[SpectralLine], omega: np.ndarray) -> np.ndarray:
    """Sum of Lorentzian + dispersive terms, 1/pi normalization.

    S(w) = (1/pi) sum_p [L_p g_p/2 - K_p (w - w_p)] / [(g_p/2)^2 + (w - w_p)^2]
    """
    omega = np.asarray(omega, dtype=float)
    total = np.zeros_like(omega)
    for ln in lines:
        half = ln.gamma / 2.0
        d = omega - ln.omega
        total += (ln.L * half - ln.K * d) / (half**2 + d**2)
    return total / np.pi


def integrate_lines(lines: list[SpectralLine], lo: float, hi: float) -> float:
    """Exact integral of the line sum over [lo, hi] (antiderivatives).

    Lorentzian part: (L/pi) atan(2(w - w_p)/g_p); dispersive part:
    -(K/2 pi) log((g_p/2)^2 + (w - w_p)^2).
    """
    total = 0.0
    for ln in lines:
        half = ln.gamma / 2.0
        if half <= 0.0:
            total += ln.L if lo <= ln.omega <= hi else 0.0
            continue
        a, b = lo - ln.omega, hi - ln.omega
        total += ln.L / np.pi * (np.arctan(b / half) - np.arctan(a / half))
        total -= ln.K / (2.0 * np.pi) * (np.log(half**2 + b**2) - np.log(half**2 + a**2))
    return float(total)


@dataclass
class SpectrumResult:
    """Gridded spectrum plus its line decomposition.

    The elastic (delta) weight is never rasterized into ``values``; it is
    carried separately so integrals of the incoherent part stay exact.
    """

    channel: str
    omega: np.ndarray
    values: np.ndarray
    elastic_weight: float = 0.0
    lines: list[SpectralLine] = field(default_factory=list)
    method: str = ""
    meta: dict = field(default_factory=dict)

    def weight_sum(self) -> float:
        """Total Lorentzian weight including the elastic part."""
        return self.elastic_weight + sum(ln.L for ln in self.lines)
