"""Resonances, zero crossings and magic frequencies.

Roots are found in three stages: the frequency range is cut at every pole
of the models involved, each pole-free piece is scanned on a uniform grid
for sign changes, and every sign change is refined inside its bracket with
the ITP method (Oliveira & Takahashi, ACM TOMS 47, 2020). ITP keeps the
enclosure at every step and needs at most n_bisect + 1 evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atomdata import Level, PolarizabilityModel
from .errors import DegenerateMatchError, DomainError
from .polarizability import alpha_curve
from .units import omega_to_nm

__all__ = [
    "Resonance",
    "MagicPoint",
    "ZERO",
    "FREE_ELECTRON",
    "list_resonances",
    "find_zero_crossings",
    "find_magic_wavelength",
    "pole_free_intervals",
    "itp_root",
    "default_range",
]

ZERO = "zero"
FREE_ELECTRON = "free-electron"

DEFAULT_RESOLUTION = 2e-6
DEFAULT_XTOL = 1e-9
DEFAULT_FTOL = 1e-3


@dataclass(frozen=True)
class Resonance:
    channel: tuple
    omega_res: float
    lambda_nm: float

    @property
    def label(self) -> str:
        return f"{self.channel[0].label}-{self.channel[1].label}"


@dataclass(frozen=True)
class MagicPoint:
    """A root of alpha_ground - alpha_partner.

    ``rydberg`` is the partner :class:`Level`, or the :data:`ZERO` /
    :data:`FREE_ELECTRON` sentinels.
    """

    omega: float
    lambda_nm: float
    ground: Level
    rydberg: object
    residual: float
    bracket: tuple
    alpha_at_match: float

    @property
    def partner_label(self) -> str:
        return self.rydberg.label if isinstance(self.rydberg, Level) else str(self.rydberg)


def list_resonances(model: PolarizabilityModel) -> list[Resonance]:
    out = []
    for (lv, _), de in zip(model.channels, model.delta_e):
        w = abs(float(de))
        if w == 0.0:
            continue
        out.append(Resonance((model.target, lv), w, omega_to_nm(w)))
    out.sort(key=lambda r: (r.omega_res, r.channel[1].label))
    return out


def default_range(model: PolarizabilityModel) -> tuple[float, float]:
    """The gap between the two lowest resonances of ``model``."""
    res = list_resonances(model)
    if len(res) < 2:
        raise DomainError(f"{model.target.label} has fewer than two resonances; give an explicit range")
    return res[0].omega_res, res[1].omega_res


def pole_free_intervals(poles, halfwidth: float, omega_range) -> list[tuple[float, float]]:
    """Split ``omega_range`` at ``poles``, trimming ``halfwidth`` around each."""
    lo, hi = sorted(float(x) for x in omega_range)
    cuts = sorted({float(p) for p in poles if lo - halfwidth < p < hi + halfwidth})
    edges = [(lo, False)] + [(p, True) for p in cuts] + [(hi, False)]
    out = []
    for (a, a_pole), (b, b_pole) in zip(edges, edges[1:]):
        a = max(a + halfwidth if a_pole else a, lo)
        b = min(b - halfwidth if b_pole else b, hi)
        # drop endpoints that fall inside some exclusion window
        for p in cuts:
            if abs(a - p) < halfwidth:
                a = p + halfwidth
            if abs(b - p) < halfwidth:
                b = p - halfwidth
        if b > a:
            out.append((a, b))
    return out


def itp_root(f, a, b, fa=None, fb=None, xtol=DEFAULT_XTOL, ftol=DEFAULT_FTOL, k1=None, k2=2.0, n0=1):
    """Bracketed ITP root search.

    Requires ``f(a)`` and ``f(b)`` of opposite sign. Stops once the bracket
    half-width is <= ``xtol`` or an iterate has |f| <= ``ftol``. Returns
    ``(x, fx, (lo, hi))`` with ``lo < x < hi`` unless x is an endpoint root.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a, fa, (a, a)
    if fb == 0.0:
        return b, fb, (b, b)
    if (fa > 0) == (fb > 0):
        raise DomainError(f"no sign change on [{a!r}, {b!r}]")
    sign = 1.0 if fa < 0 else -1.0
    ya, yb = sign * fa, sign * fb
    k1 = 0.2 / (b - a) if k1 is None else k1
    n_half = max(0, math.ceil(math.log2((b - a) / (2 * xtol))))
    n_max = n_half + n0
    j = 0
    x_best, y_best = None, None
    while b - a > 2 * xtol and j <= n_max + 2:
        x_half = 0.5 * (a + b)
        r = xtol * 2.0 ** (n_max - j) - 0.5 * (b - a)
        delta = k1 * (b - a) ** k2
        x_f = (yb * a - ya * b) / (yb - ya)
        sigma = math.copysign(1.0, x_half - x_f)
        x_t = x_f + sigma * delta if delta <= abs(x_half - x_f) else x_half
        x = x_t if abs(x_t - x_half) <= r else x_half - sigma * r
        if not a < x < b:
            x = x_half
        y = sign * f(x)
        if abs(y) <= ftol or y == 0.0:
            return x, sign * y, (a, b)
        if y > 0:
            b, yb = x, y
        else:
            a, ya = x, y
        x_best, y_best = x, y
        j += 1
    x = 0.5 * (a + b)
    if not a < x < b and x_best is not None:  # bracket collapsed to adjacent floats
        return x_best, sign * y_best, (a, b)
    return x, sign * f(x), (a, b)


def _grid(a, b, resolution):
    n = max(2, int(math.ceil((b - a) / resolution)) + 1)
    g = np.linspace(a, b, n)
    g[0], g[-1] = a, b
    return g


def _roots_of(g_vec, g_scalar, intervals, resolution, xtol, ftol):
    """Sign-change scan + ITP refinement on each pole-free interval."""
    found = []
    for a, b in intervals:
        grid = _grid(a, b, resolution)
        vals = g_vec(grid)
        finite = np.isfinite(vals)
        for i in range(len(grid) - 1):
            if not (finite[i] and finite[i + 1]):
                continue
            va, vb = vals[i], vals[i + 1]
            if va == 0.0:
                lo = grid[i - 1] if i > 0 else grid[i]
                found.append((grid[i], 0.0, (lo, grid[i + 1])))
                continue
            if (va < 0) != (vb < 0) and vb != 0.0:
                found.append(itp_root(g_scalar, grid[i], grid[i + 1], va, vb, xtol=xtol, ftol=ftol))
        if vals[-1] == 0.0 and len(grid) > 1:
            found.append((grid[-1], 0.0, (grid[-2], grid[-1])))
    return found


def _pair(bracket):
    return float(bracket[0]), float(bracket[1])


def find_zero_crossings(
    model: PolarizabilityModel,
    omega_range=None,
    resolution: float = DEFAULT_RESOLUTION,
    xtol: float = DEFAULT_XTOL,
    ftol: float = DEFAULT_FTOL,
) -> list[MagicPoint]:
    """Frequencies where the total polarizability of ``model`` changes sign."""
    omega_range = default_range(model) if omega_range is None else omega_range
    poles = [r.omega_res for r in list_resonances(model)]
    intervals = pole_free_intervals(poles, model.exclusion_halfwidth, omega_range)

    def g_vec(w):
        return alpha_curve(model, w, allow_near_resonance=True)[0]

    def g_scalar(w):
        return float(g_vec(np.array([w]))[0])

    out = []
    for x, gx, bracket in _roots_of(g_vec, g_scalar, intervals, resolution, xtol, ftol):
        x, gx = float(x), float(gx)
        out.append(MagicPoint(x, omega_to_nm(x), model.target, ZERO, gx, _pair(bracket), gx))
    return out


def find_magic_wavelength(
    ground_model: PolarizabilityModel,
    rydberg_model,
    omega_range=None,
    resolution: float = DEFAULT_RESOLUTION,
    xtol: float = DEFAULT_XTOL,
    ftol: float = DEFAULT_FTOL,
) -> list[MagicPoint]:
    """Roots of alpha_ground(w) - alpha_rydberg(w).

    ``rydberg_model`` is a :class:`PolarizabilityModel` or
    :data:`FREE_ELECTRON` (compare against -1/w**2).
    """
    if rydberg_model is ZERO or rydberg_model == ZERO:
        return find_zero_crossings(ground_model, omega_range, resolution, xtol, ftol)
    if isinstance(rydberg_model, PolarizabilityModel) and rydberg_model == ground_model:
        raise DegenerateMatchError(
            f"{ground_model.target.label} matched against itself: the difference vanishes identically"
        )
    omega_range = default_range(ground_model) if omega_range is None else omega_range
    poles = [r.omega_res for r in list_resonances(ground_model)]
    halfwidth = ground_model.exclusion_halfwidth
    if rydberg_model == FREE_ELECTRON:
        poles.append(0.0)

        def partner(w):
            return -1.0 / (w * w)

        partner_tag = FREE_ELECTRON
    else:
        poles += [r.omega_res for r in list_resonances(rydberg_model)]
        halfwidth = max(halfwidth, rydberg_model.exclusion_halfwidth)

        def partner(w):
            return alpha_curve(rydberg_model, w, allow_near_resonance=True)[0]

        partner_tag = rydberg_model.target
    intervals = pole_free_intervals(poles, halfwidth, omega_range)

    def g_vec(w):
        return alpha_curve(ground_model, w, allow_near_resonance=True)[0] - partner(w)

    def g_scalar(w):
        return float(g_vec(np.array([w]))[0])

    out = []
    for x, gx, bracket in _roots_of(g_vec, g_scalar, intervals, resolution, xtol, ftol):
        x, gx = float(x), float(gx)
        a_g = float(alpha_curve(ground_model, np.array([x]), allow_near_resonance=True)[0][0])
        out.append(MagicPoint(x, omega_to_nm(x), ground_model.target, partner_tag, gx, _pair(bracket), a_g))
    return out

