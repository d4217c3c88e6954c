"""Closed-form comparison: coherence versus extra reset qubits.

With r reset qubits at polarization eps_a the best asymptotic target
polarization is eps_inf(r, eps_a); the resource question is whether
adding maximal coherence to an r-reset scheme beats adding an (r+1)-th
incoherent reset qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, InvalidPolarization, NumericalError


def epsilon_infinity(r: int, eps_a: float) -> float:
    """[(1+e)^r - (1-e)^r] / [(1+e)^r + (1-e)^r]; equals tanh(r*artanh(e))."""
    if int(r) != r or r < 1:
        raise InvalidParameter(f"r={r} must be a positive integer")
    if not -1.0 <= eps_a <= 1.0:
        raise InvalidPolarization(f"eps_a={eps_a} outside [-1, 1]")
    up = (1.0 + eps_a) ** r
    down = (1.0 - eps_a) ** r
    return (up - down) / (up + down)


def resource_ratio(r: int, eps_a: float) -> float:
    """Best coherent r-reset polarization over the incoherent (r+1)-reset one.

    Numerator: eps_v * sqrt(2 - eps_v^2) at eps_v = eps_inf(r, eps_a),
    i.e. the bound reached when the coherence measure equals the
    polarization itself. Ratios above 1 mean coherence beats the extra
    qubit.
    """
    if not 0.0 < eps_a < 1.0:
        raise InvalidPolarization(f"eps_a={eps_a} outside (0, 1)")
    eps_v = epsilon_infinity(r, eps_a)
    return eps_v * math.sqrt(2.0 - eps_v**2) / epsilon_infinity(r + 1, eps_a)


@dataclass(frozen=True)
class SmallEpsFit:
    constant: float
    linear: float
    quadratic: float
    max_residual: float


def ratio_small_eps_expansion(r: int, points: int = 50) -> SmallEpsFit:
    """Quadratic fit of the ratio on eps_a in (0, 0.05].

    The ratio is even in eps_a to leading orders; the fitted linear
    coefficient must vanish (|c1| < 1e-3) or the fit is rejected.
    """
    eps = np.linspace(0.001, 0.05, points)
    vals = np.array([resource_ratio(r, float(e)) for e in eps])
    coeffs = np.polyfit(eps, vals, 2)  # [c2, c1, c0]
    fitted = np.polyval(coeffs, eps)
    fit = SmallEpsFit(
        constant=float(coeffs[2]),
        linear=float(coeffs[1]),
        quadratic=float(coeffs[0]),
        max_residual=float(np.max(np.abs(fitted - vals))),
    )
    if abs(fit.linear) >= 1e-3:
        raise NumericalError(
            f"quadratic model rejected: linear coefficient {fit.linear} not negligible"
        )
    return fit
