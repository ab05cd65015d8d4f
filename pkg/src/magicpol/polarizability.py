"""Scalar dynamic polarizability of an s-state by direct sum over p-states.

In atomic units, for each channel with energy difference dE = E_p - E_target
and reduced matrix element D::

    alpha_valence(w) = sum  dE * D**2 / (3 * (dE**2 - w**2))

The total adds a frequency-independent core term and a constant tail for
omitted states. Sums are Neumaier-compensated: Rydberg targets cancel
terms of order 10^3 down to a few hundred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .atomdata import Level, PolarizabilityModel, ReducedDipole
from .errors import DomainError, ResonanceProximityError

__all__ = [
    "TermContribution",
    "PolarizabilityResult",
    "free_electron_alpha",
    "valence_alpha",
    "total_alpha",
    "alpha_curve",
    "term_value",
    "synthetic_model",
]


@dataclass(frozen=True)
class TermContribution:
    """One row of a breakdown table (all quantities in a.u.)."""

    channel: tuple
    d_value: float
    delta_e: float
    denominator: float
    contribution: float
    accumulated: float

    @property
    def label(self) -> str:
        return self.channel[0].label


@dataclass(frozen=True)
class PolarizabilityResult:
    omega: float
    valence: float
    core: float
    tail: float
    total: float
    uncertainty: float
    terms: tuple
    excluded: bool = False


def term_value(delta_e, d_value, omega):
    """Single-channel contribution; same operation order as the kernels."""
    return (delta_e * (d_value * d_value)) / (delta_e * delta_e - omega * omega) / 3.0


def free_electron_alpha(omega):
    """High-frequency limit -1/omega**2 of a single free electron (a.u.)."""
    w = np.asarray(omega, dtype=np.float64)
    if np.any(w == 0):
        raise DomainError("free-electron polarizability diverges at omega = 0")
    out = -1.0 / (w * w)
    return float(out) if out.ndim == 0 else out


def _check_domain(model: PolarizabilityModel, omega: float, allow_near_resonance: bool) -> bool:
    """Return True if omega lies in an exclusion window (and that is allowed)."""
    if len(model) == 0:
        return False
    gap = np.abs(np.abs(model.delta_e) - abs(omega))
    k = int(np.argmin(gap))
    lv = model.channels[k][0]
    res = abs(float(model.delta_e[k]))
    if gap[k] == 0.0:
        raise DomainError(f"omega = {omega!r} sits exactly on the {model.target.label}-{lv.label} resonance")
    if gap[k] < model.exclusion_halfwidth:
        if allow_near_resonance:
            return True
        raise ResonanceProximityError(
            f"omega = {omega:.10g} a.u. is within {model.exclusion_halfwidth:g} a.u. of the "
            f"{model.target.label}-{lv.label} resonance at {res:.10g} a.u.",
            channel=(model.target, lv),
            omega_res=res,
        )
    return False


def valence_alpha(model: PolarizabilityModel, omega: float, allow_near_resonance: bool = False):
    """Valence sum and its per-channel breakdown.

    Returns ``(value, terms)``; ``terms`` follow the model's channel order,
    ascending (n, j), and ``terms[-1].accumulated == value``.
    """
    omega = float(omega)
    _check_domain(model, omega, allow_near_resonance)
    if len(model) == 0:
        return 0.0, ()
    de, d = model.delta_e, model.d_values
    contrib = term_value(de, d, omega)
    acc = kernels.running_sum(contrib)
    value = float(kernels.valence_sum(de, model.d_squared, np.array([omega]))[0])
    terms = tuple(
        TermContribution(
            channel=ch,
            d_value=float(d[k]),
            delta_e=float(de[k]),
            denominator=float(de[k] * de[k] - omega * omega),
            contribution=float(contrib[k]),
            accumulated=float(acc[k]),
        )
        for k, ch in enumerate(model.channels)
    )
    return value, terms


def _sigma(model, omega, contrib):
    # d(alpha)/dD_i = 2*term_i/D_i, written without the division by D_i
    de, d = model.delta_e, model.d_values
    grad = 2.0 * de * d / (de * de - omega * omega) / 3.0
    var = float(np.sum((grad * model.d_sigma) ** 2))
    var += (model.core_alpha * model.core_alpha_rel_unc) ** 2
    return math.sqrt(var)


def total_alpha(model: PolarizabilityModel, omega: float, allow_near_resonance: bool = False) -> PolarizabilityResult:
    """Valence + core + tail, with first-order propagated data uncertainty.

    The uncertainty covers the tabulated dipole uncertainties and the core
    term only; it is not a method-accuracy estimate.
    """
    omega = float(omega)
    excluded = _check_domain(model, omega, allow_near_resonance)
    valence, terms = valence_alpha(model, omega, allow_near_resonance=True)
    contrib = np.array([t.contribution for t in terms])
    return PolarizabilityResult(
        omega=omega,
        valence=valence,
        core=model.core_alpha,
        tail=model.tail_alpha,
        total=valence + model.core_alpha + model.tail_alpha,
        uncertainty=_sigma(model, omega, contrib),
        terms=terms,
        excluded=excluded,
    )


def alpha_curve(model: PolarizabilityModel, omegas, allow_near_resonance: bool = False):
    """Vectorized total alpha on a grid.

    Returns ``(total, sigma, excluded)`` arrays. Points inside an exclusion
    window are flagged and set to NaN unless ``allow_near_resonance``; exact
    poles are always NaN.
    """
    w = np.asarray(omegas, dtype=np.float64)
    if len(model) == 0:
        total = np.full(w.shape, model.core_alpha + model.tail_alpha)
        sigma = np.full(w.shape, abs(model.core_alpha * model.core_alpha_rel_unc))
        return total, sigma, np.zeros(w.shape, dtype=bool)
    de = model.delta_e
    gap = np.abs(np.abs(de)[None, :] - np.abs(w.ravel())[:, None]).min(axis=1).reshape(w.shape)
    excluded = gap < model.exclusion_halfwidth
    with np.errstate(divide="ignore", invalid="ignore"):
        total = kernels.valence_sum(de, model.d_squared, w) + model.core_alpha + model.tail_alpha
        grad = 2.0 * de[None, :] * model.d_values[None, :] / (de[None, :] ** 2 - (w.ravel() ** 2)[:, None]) / 3.0
        var = np.sum((grad * model.d_sigma[None, :]) ** 2, axis=1).reshape(w.shape)
    sigma = np.sqrt(var + (model.core_alpha * model.core_alpha_rel_unc) ** 2)
    hide = (gap == 0.0) | (excluded & (not allow_near_resonance))
    total = np.where(hide, np.nan, total)
    sigma = np.where(hide, np.nan, sigma)
    return total, sigma, excluded


def synthetic_model(
    delta_e,
    d_values,
    uncertainties=None,
    labels=None,
    core_alpha: float = 0.0,
    core_alpha_rel_unc: float = 0.0,
    tail_alpha: float = 0.0,
    exclusion_halfwidth: float = 1e-6,
    target_label: str = "1s1/2",
) -> PolarizabilityModel:
    """Model from raw (dE [a.u.], D) arrays, for injected tables and tests.

    Intermediate levels get placeholder quantum numbers; only energies and
    dipoles matter for evaluation.
    """
    from .units import CONSTANTS

    delta_e = [float(x) for x in delta_e]
    d_values = [float(x) for x in d_values]
    if len(delta_e) != len(d_values):
        raise ValueError("delta_e and d_values differ in length")
    if uncertainties is None:
        uncertainties = [0.0] * len(d_values)
    target = Level(target_label, 1, 0, 1, 0.0, "synthetic")
    channels = []
    for k, (de, d, u) in enumerate(zip(delta_e, d_values, uncertainties)):
        label = labels[k] if labels is not None else f"{k + 2}p{1 if k % 2 == 0 else 3}/2"
        lv = Level(label, k + 2, 1, 1 if k % 2 == 0 else 3, de * CONSTANTS.hartree_wavenumber, "synthetic")
        channels.append((lv, ReducedDipole(target, lv, d, float(u), "synthetic")))
    return PolarizabilityModel(
        target=target,
        channels=tuple(channels),
        n_max=10**6,
        core_alpha=core_alpha,
        core_alpha_rel_unc=core_alpha_rel_unc,
        tail_alpha=tail_alpha,
        exclusion_halfwidth=exclusion_halfwidth,
    )
