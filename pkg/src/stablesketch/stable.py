"""Symmetric alpha-stable variates via the Chambers-Mallows-Stuck transform.

Parameterization: ``S(alpha, 1)`` has characteristic function
``exp(-|t|**alpha)``, so ``S(2, 1)`` is ``N(0, 2)`` and ``S(1, 1)`` is the
standard Cauchy law.
"""

from __future__ import annotations

import numpy as np

from . import keyed_rand
from .keyed_rand import RandKey

#: alpha used when the caller asks for the ``0+`` limit.
ALPHA_ZERO_PLUS = 0.01

_SNAP = 1e-9
# 2**-54 shifts the 53-bit uniform grid to the open interval (0, 1).
_HALF_ULP = 2.0**-54

DOMAIN_CF = 0x43463031  # streams used by empirical_cf


def parse_alpha(value) -> float:
    """Accept a number in (0, 2] or the literal ``"0+"``."""
    if isinstance(value, str):
        text = value.strip()
        if text == "0+":
            return ALPHA_ZERO_PLUS
        value = float(text)
    alpha = float(value)
    check_alpha(alpha)
    return alpha


def check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 2.0) or not np.isfinite(alpha):
        raise ValueError(f"alpha must lie in (0, 2], got {alpha!r}")


def _branch(alpha: float) -> str:
    if abs(alpha - 2.0) <= _SNAP:
        return "gauss"
    if abs(alpha - 1.0) <= _SNAP:
        return "cauchy"
    return "general"


def _angle_and_weight(seed, *labels):
    """Uniform angle U in (-pi/2, pi/2), its cosine, and exponential W > 0."""
    base = keyed_rand.hash_stream(seed, *labels)
    u = keyed_rand.to_unit(keyed_rand.absorb(base, 0)) + _HALF_ULP
    angle = np.pi * (u - 0.5)
    # cos(pi*(u - 1/2)) = sin(pi*u); folding keeps precision near the ends.
    cos_angle = np.sin(np.pi * np.minimum(u, 1.0 - u))
    w = keyed_rand.to_exponential(keyed_rand.absorb(base, 1))
    # W == 0 has probability 2**-53; keep the logs finite.
    w = np.maximum(w, _HALF_ULP)
    return angle, cos_angle, w


def cms_general(alpha, angle, w):
    """Un-specialized CMS formula. Exposed for the alpha=1 reduction check."""
    return (
        np.sin(alpha * angle)
        / np.cos(angle) ** (1.0 / alpha)
        * (np.cos(angle - alpha * angle) / w) ** ((1.0 - alpha) / alpha)
    )


def stable_variates(alpha: float, seed, *labels):
    """S(alpha, 1) variates keyed by ``(seed, *labels)``; broadcasts over labels."""
    check_alpha(alpha)
    angle, cos_angle, w = _angle_and_weight(seed, *labels)
    branch = _branch(alpha)
    if branch == "gauss":
        return 2.0 * np.sqrt(w) * np.sin(angle)
    if branch == "cauchy":
        return np.tan(angle)
    with np.errstate(over="ignore"):
        sign, log_abs = _general_log(alpha, angle, cos_angle, w)
        return sign * np.exp(log_abs)


def stable_log_variates(alpha: float, seed, *labels):
    """Same variates as :func:`stable_variates`, returned as ``(sign, log|x|)``.

    For small alpha the magnitudes overflow float64 routinely (the exponent
    ``1/alpha`` is 100 at alpha=0.01); the projection code works on this form.
    """
    check_alpha(alpha)
    angle, cos_angle, w = _angle_and_weight(seed, *labels)
    sign = np.sign(angle)
    branch = _branch(alpha)
    with np.errstate(divide="ignore"):
        if branch == "gauss":
            return sign, np.log(2.0) + 0.5 * np.log(w) + np.log(np.abs(np.sin(angle)))
        if branch == "cauchy":
            return sign, np.log(np.abs(np.sin(angle))) - np.log(cos_angle)
        return _general_log(alpha, angle, cos_angle, w)


def _general_log(alpha, angle, cos_angle, w):
    # sin(alpha*U) has the sign of U for alpha in (0, 2); the other factors are positive.
    with np.errstate(divide="ignore"):
        log_abs = (
            np.log(np.abs(np.sin(alpha * angle)))
            - np.log(cos_angle) / alpha
            + (1.0 - alpha) / alpha * (np.log(np.cos((1.0 - alpha) * angle)) - np.log(w))
        )
    return np.sign(angle), log_abs


def sample_stable(alpha: float, key: RandKey) -> float:
    """One S(alpha, 1) variate, deterministic in ``key``."""
    return float(stable_variates(alpha, key.seed, *key.stream))


def empirical_cf(alpha: float, t: float, n: int, seed: int) -> float:
    """Monte Carlo estimate of ``E[cos(t X)]`` from ``n`` fresh S(alpha, 1) draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if t == 0:
        return 1.0
    total = 0.0
    chunk = 1 << 20
    for start in range(0, n, chunk):
        m = np.arange(start, min(n, start + chunk), dtype=np.int64)
        x = stable_variates(alpha, seed, DOMAIN_CF, m)
        with np.errstate(invalid="ignore"):
            c = np.cos(t * x)
        # |x| = inf only at alpha near 0; cos is then undefined, count it as 0.
        total += float(np.nansum(c))
    return total / n
