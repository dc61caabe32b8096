"""Distributions of sums and differences of independent Rayleigh amplitudes.

The destination of the relayed uplink sees decision distances of the form
``X + Y`` (relay symbols agree) and ``X - Y`` (they disagree), where ``X`` and
``Y`` are independent Rayleigh-faded amplitudes.  This module provides their
densities, high-accuracy expectations of the Gaussian tail ``Q(sqrt(2) * v)``
against them, and the closed-form large-amplitude approximation of the
difference expectation.

Scale convention: ``RayleighPair`` stores the standard Rayleigh scale ``s``,
i.e. the density of an amplitude is ``(x / s^2) * exp(-x^2 / (2 s^2))`` and
``E[X^2] = 2 s^2``.  A complex-Gaussian tap ``h`` with ``E[|h|^2] = sigma2``
therefore has ``|h| ~ Rayleigh(sqrt(sigma2 / 2))``; forgetting the factor of
two shifts every curve by 3 dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import erf, erfc

__all__ = [
    "QuadratureError",
    "RayleighPair",
    "expect_q_over_diff",
    "expect_q_over_diff_approx",
    "expect_q_over_sum",
    "pdf_diff",
    "pdf_sum",
    "sample_diff",
    "sample_sum",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


class QuadratureError(ArithmeticError):
    """Adaptive integration failed to reach the requested tolerance."""

    def __init__(self, message: str, value: float, error_estimate: float):
        super().__init__(f"{message} (value={value!r}, error_estimate={error_estimate!r})")
        self.value = value
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class RayleighPair:
    """Scale parameters of two independent Rayleigh amplitudes."""

    sigma_x: float
    sigma_y: float

    def __post_init__(self):
        for name, value in (("sigma_x", self.sigma_x), ("sigma_y", self.sigma_y)):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def tau_c(self) -> float:
        """Combined curvature (sigma_x^2 + sigma_y^2) / (sigma_x^2 * sigma_y^2)."""
        sx2 = self.sigma_x**2
        sy2 = self.sigma_y**2
        return (sx2 + sy2) / (sx2 * sy2)

    def swapped(self) -> "RayleighPair":
        return RayleighPair(self.sigma_y, self.sigma_x)


def pdf_sum(z, pair: RayleighPair):
    """Density of Z = X + Y at ``z`` (zero for negative arguments).

    Closed form of the convolution of the two Rayleigh densities; the erf
    bracket carries the cross term.  Accepts scalars or arrays.
    """
    z = np.asarray(z, dtype=float)
    a2 = pair.sigma_x**2
    b2 = pair.sigma_y**2
    s2 = a2 + b2
    root = math.sqrt(2.0 * s2)
    direct = (a2 * z / s2**2) * np.exp(-(z**2) / (2.0 * a2)) + (
        b2 * z / s2**2
    ) * np.exp(-(z**2) / (2.0 * b2))
    bracket = erf(z * pair.sigma_y / (pair.sigma_x * root)) + erf(
        z * pair.sigma_x / (pair.sigma_y * root)
    )
    cross = (
        _SQRT_HALF_PI
        * pair.sigma_x
        * pair.sigma_y
        * (z**2 - s2)
        / s2**2.5
        * np.exp(-(z**2) / (2.0 * s2))
        * bracket
    )
    out = np.where(z > 0.0, direct + cross, 0.0)
    return out if out.ndim else float(out)


def pdf_diff(w, pair: RayleighPair):
    """Density of W = X - Y at ``w`` (supported on the whole real line).

    Obtained by completing the square in the convolution integral; the two
    half-lines share the symmetric erfc term and differ only in which
    amplitude dominates the single-exponential term.  Accepts scalars or
    arrays.
    """
    w = np.asarray(w, dtype=float)
    a = pair.sigma_x
    b = pair.sigma_y
    a2 = a * a
    b2 = b * b
    s2 = a2 + b2
    root = math.sqrt(2.0 * s2)
    shared = (
        _SQRT_HALF_PI * a * b * (s2 - w**2) / s2**2.5 * np.exp(-(w**2) / (2.0 * s2))
    )
    pos = (a2 * w / s2**2) * np.exp(-(w**2) / (2.0 * a2)) + shared * erfc(
        w * b / (a * root)
    )
    neg = (-b2 * w / s2**2) * np.exp(-(w**2) / (2.0 * b2)) + shared * erfc(
        -w * a / (b * root)
    )
    out = np.where(w >= 0.0, pos, neg)
    return out if out.ndim else float(out)


def sample_sum(pair: RayleighPair, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent realisations of X + Y."""
    return rng.rayleigh(pair.sigma_x, n) + rng.rayleigh(pair.sigma_y, n)


def sample_diff(pair: RayleighPair, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent realisations of X - Y."""
    return rng.rayleigh(pair.sigma_x, n) - rng.rayleigh(pair.sigma_y, n)


def _gaussian_tail(v):
    return 0.5 * erfc(v / _SQRT2)


def _checked_quad(integrand, lo, hi, rel_tol, abs_tol, what):
    value, estimate, info, *message = quad(
        integrand, lo, hi, epsabs=abs_tol, epsrel=rel_tol, limit=200, full_output=True
    )
    if message or not np.isfinite(value):
        raise QuadratureError(f"{what} did not converge", value, estimate)
    return value, estimate


def expect_q_over_sum(
    pair: RayleighPair, *, rel_tol: float = 1e-9, abs_tol: float = 1e-12
) -> float:
    """E[Q(sqrt(2) * Z)] for Z = X + Y, by adaptive quadrature.

    Raises :class:`QuadratureError` when the requested tolerance cannot be
    certified; the exception carries the achieved error estimate.
    """
    value, estimate = _checked_quad(
        lambda z: _gaussian_tail(_SQRT2 * z) * pdf_sum(z, pair),
        0.0,
        np.inf,
        rel_tol,
        abs_tol,
        "expectation over the sum distribution",
    )
    if estimate > max(abs_tol, rel_tol * abs(value)) * 100.0:
        raise QuadratureError(
            "expectation over the sum distribution missed tolerance", value, estimate
        )
    return value


def expect_q_over_diff(
    pair: RayleighPair, *, rel_tol: float = 1e-9, abs_tol: float = 1e-12
) -> float:
    """E[Q(sqrt(2) * W)] for W = X - Y, integrated over the full real line.

    The negative half-line carries genuine probability mass (the subtracted
    amplitude may dominate) where the tail probability exceeds one half, so
    it must not be truncated.  The integral is split at the density kink at
    zero.
    """
    integrand = lambda w: _gaussian_tail(_SQRT2 * w) * pdf_diff(w, pair)
    neg, err_neg = _checked_quad(
        integrand, -np.inf, 0.0, rel_tol, abs_tol, "expectation over the difference (w<0)"
    )
    pos, err_pos = _checked_quad(
        integrand, 0.0, np.inf, rel_tol, abs_tol, "expectation over the difference (w>=0)"
    )
    value = neg + pos
    estimate = err_neg + err_pos
    if estimate > max(abs_tol, rel_tol * abs(value)) * 100.0:
        raise QuadratureError(
            "expectation over the difference distribution missed tolerance",
            value,
            estimate,
        )
    return value


def expect_q_over_diff_approx(pair: RayleighPair) -> float:
    """Large-amplitude limit of :func:`expect_q_over_diff`.

    As both scales grow at a fixed ratio the Gaussian tail hardens into an
    indicator of ``W < 0``, whose probability is
    ``sigma_y^2 / (sigma_x^2 + sigma_y^2)``.  Exact when sigma_x = sigma_y.
    """
    sx2 = pair.sigma_x**2
    sy2 = pair.sigma_y**2
    return sy2 / (sx2 + sy2)
