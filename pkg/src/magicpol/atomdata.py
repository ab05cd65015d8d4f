"""Level and dipole tables: loading, validation, model assembly, coincidences.

File formats (UTF-8 CSV, ``#`` starts a comment line)::

    label,n,l,two_j,energy_cm1,source
    state_a,state_b,reduced_me_au,uncertainty_au,source

Energies stay in cm^-1 here and are converted to atomic units only when a
:class:`PolarizabilityModel` exposes its arrays.
"""

from __future__ import annotations

import csv
import math
import re
import warnings
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataError, DataWarning, EmptyModelError, UnsupportedTargetError
from .units import CONSTANTS

__all__ = [
    "Level",
    "ReducedDipole",
    "Dataset",
    "ModelConfig",
    "PolarizabilityModel",
    "Coincidence",
    "load_levels",
    "load_dipoles",
    "load_dataset",
    "load_bundled",
    "write_levels",
    "write_dipoles",
    "read_config",
    "build_model",
    "find_coincidences",
    "dipole_allowed",
]

L_LETTERS = "spdfghik"
LEVEL_HEADER = ["label", "n", "l", "two_j", "energy_cm1", "source"]
DIPOLE_HEADER = ["state_a", "state_b", "reduced_me_au", "uncertainty_au", "source"]

DEFAULT_N_MAX = 23
DEFAULT_CORE_ALPHA = 9.1
DEFAULT_CORE_REL_UNC = 0.05
DEFAULT_EXCLUSION_HALFWIDTH = 1e-6

_LABEL_RE = re.compile(r"^\s*(\d+)([a-z])(?:(\d+)/2)?\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class Level:
    """One fine-structure level. ``energy_cm`` is relative to the ground state."""

    label: str
    n: int
    l: int
    two_j: int
    energy_cm: float
    source: str = ""

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.n, self.l, self.two_j)

    @property
    def configuration(self) -> str:
        """``"15p"`` for ``15p3/2``: the level without its fine-structure tag."""
        return f"{self.n}{L_LETTERS[self.l]}"

    @property
    def energy_au(self) -> float:
        return self.energy_cm / CONSTANTS.hartree_wavenumber

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ReducedDipole:
    """Reduced E1 matrix element between two levels, in units of e*a0.

    The sign is kept exactly as tabulated; it never affects alpha.
    """

    state_a: Level
    state_b: Level
    value: float
    uncertainty: float = 0.0
    source: str = ""

    def other(self, level: Level) -> Level:
        if level == self.state_a:
            return self.state_b
        if level == self.state_b:
            return self.state_a
        raise KeyError(level.label)

    @property
    def pair(self) -> frozenset:
        return frozenset((self.state_a.label, self.state_b.label))


def dipole_allowed(a: Level, b: Level) -> bool:
    """Electric-dipole selection rules |dl| = 1, |dj| <= 1."""
    return abs(a.l - b.l) == 1 and abs(a.two_j - b.two_j) <= 2


def canonical_label(n: int, l: int, two_j: int) -> str:
    return f"{n}{L_LETTERS[l]}{two_j}/2"


def _check_level_numbers(n, l, two_j):
    if n < 1:
        return f"n must be >= 1, got {n}"
    if l < 0:
        return f"l must be >= 0, got {l}"
    if two_j <= 0 or two_j not in (2 * l - 1, 2 * l + 1):
        return f"j = {two_j}/2 is not l +/- 1/2 for l = {l}"
    return None


def _data_rows(path):
    """Yield (line_number, fields) for non-comment, non-blank lines."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror or exc}", path) from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, next(csv.reader([line]))


def _rows_with_header(path, header):
    rows = _data_rows(path)
    first = next(rows, None)
    if first is None:
        raise DataError("file is empty", path)
    lineno, fields = first
    if [f.strip() for f in fields] != header:
        raise DataError(f"expected header {','.join(header)!r}, got {','.join(fields)!r}", path, lineno)
    for lineno, fields in rows:
        if len(fields) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(fields)}", path, lineno)
        yield lineno, [f.strip() for f in fields]


def load_levels(path) -> dict[str, Level]:
    """Read and validate a levels file; returns levels keyed by label in file order."""
    levels: dict[str, Level] = {}
    seen_key: dict[tuple, int] = {}
    seen_label: dict[str, int] = {}
    for lineno, (label, n, l, two_j, energy, source) in _rows_with_header(path, LEVEL_HEADER):
        try:
            n, l, two_j, energy = int(n), int(l), int(two_j), float(energy)
        except ValueError as exc:
            raise DataError(f"bad numeric field: {exc}", path, lineno) from None
        problem = _check_level_numbers(n, l, two_j)
        if problem:
            raise DataError(f"level {label!r}: {problem}", path, lineno)
        if not math.isfinite(energy):
            raise DataError(f"level {label!r}: energy is not finite", path, lineno)
        if (n, l, two_j) in seen_key:
            raise DataError(
                f"duplicate level (n, l, 2j) = {(n, l, two_j)} ({label!r}), "
                f"first defined on line {seen_key[(n, l, two_j)]}",
                path,
                lineno,
            )
        if label in seen_label:
            raise DataError(f"duplicate label {label!r}, first defined on line {seen_label[label]}", path, lineno)
        seen_key[(n, l, two_j)] = lineno
        seen_label[label] = lineno
        levels[label] = Level(label, n, l, two_j, energy, source)
    ground = [lv for lv in levels.values() if lv.energy_cm == 0.0]
    if not ground:
        raise DataError("no ground state (level with energy 0)", path)
    if len(ground) > 1:
        raise DataError(f"ambiguous ground state: {', '.join(g.label for g in ground)} all have energy 0", path)
    return levels


def load_dipoles(path, levels) -> dict[frozenset, ReducedDipole]:
    """Read a dipole file against already-loaded ``levels`` (mapping label -> Level)."""
    if not isinstance(levels, dict):
        levels = {lv.label: lv for lv in levels}
    dipoles: dict[frozenset, ReducedDipole] = {}
    seen: dict[frozenset, int] = {}
    for lineno, (a, b, value, unc, source) in _rows_with_header(path, DIPOLE_HEADER):
        for lab in (a, b):
            if lab not in levels:
                raise DataError(f"unresolved level label {lab!r}", path, lineno)
        la, lb = levels[a], levels[b]
        if not dipole_allowed(la, lb):
            raise DataError(f"{a} - {b} violates E1 selection rules (|dl| = 1, |dj| <= 1)", path, lineno)
        try:
            value, unc = float(value), float(unc)
        except ValueError as exc:
            raise DataError(f"bad numeric field: {exc}", path, lineno) from None
        if not (math.isfinite(value) and math.isfinite(unc)) or unc < 0:
            raise DataError(f"{a} - {b}: value must be finite and uncertainty >= 0", path, lineno)
        key = frozenset((a, b))
        if key in seen:
            raise DataError(f"duplicate pair {a} - {b}, first defined on line {seen[key]}", path, lineno)
        seen[key] = lineno
        dipoles[key] = ReducedDipole(la, lb, value, unc, source)
    return dipoles


def _fmt(x: float) -> str:
    return repr(float(x))


def write_levels(path, levels) -> None:
    """Write levels in the loader's format (exact float round-trip)."""
    values = levels.values() if isinstance(levels, dict) else levels
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LEVEL_HEADER)
        for lv in values:
            w.writerow([lv.label, lv.n, lv.l, lv.two_j, _fmt(lv.energy_cm), lv.source])


def write_dipoles(path, dipoles) -> None:
    values = dipoles.values() if isinstance(dipoles, dict) else dipoles
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIPOLE_HEADER)
        for d in values:
            w.writerow([d.state_a.label, d.state_b.label, _fmt(d.value), _fmt(d.uncertainty), d.source])


@dataclass(frozen=True)
class Dataset:
    """Immutable level + dipole collection with label lookup."""

    levels: dict
    dipoles: dict
    name: str = ""

    @cached_property
    def ground(self) -> Level:
        return min(self.levels.values(), key=lambda lv: lv.energy_cm)

    @cached_property
    def _by_key(self):
        return {lv.key: lv for lv in self.levels.values()}

    def level(self, label: str) -> Level:
        """Resolve a label; ``"5s"`` is accepted when only one j exists."""
        if label in self.levels:
            return self.levels[label]
        m = _LABEL_RE.match(label)
        if m:
            n, letter, tj = int(m.group(1)), m.group(2).lower(), m.group(3)
            l = L_LETTERS.find(letter)
            if tj is not None:
                lv = self._by_key.get((n, l, int(tj)))
                if lv is not None:
                    return lv
            else:
                hits = [lv for lv in self.levels.values() if lv.n == n and lv.l == l]
                if len(hits) == 1:
                    return hits[0]
                if len(hits) > 1:
                    raise KeyError(f"ambiguous level {label!r}: {', '.join(h.label for h in hits)}")
        raise KeyError(f"unknown level {label!r}")

    def dipole(self, a: Level, b: Level) -> ReducedDipole | None:
        return self.dipoles.get(frozenset((a.label, b.label)))

    def dipoles_of(self, level: Level):
        return [d for d in self.dipoles.values() if level in (d.state_a, d.state_b)]


def load_dataset(levels_path, dipoles_path, name="") -> Dataset:
    levels = load_levels(levels_path)
    dipoles = load_dipoles(dipoles_path, levels) if dipoles_path is not None else {}
    return Dataset(levels, dipoles, name or str(levels_path))


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("magicpol") / "data" / name))


def load_bundled() -> Dataset:
    """The shipped Rb dataset (see ``data/`` for per-row provenance)."""
    return load_dataset(bundled_path("rb_levels.csv"), bundled_path("rb_dipoles.csv"), "rb (bundled)")


def read_config(path) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` comments and blank lines ignored."""
    out: dict[str, str] = {}
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read config: {exc.strerror or exc}", path) from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"expected key = value, got {line!r}", path, lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise DataError("empty key", path, lineno)
        out[key] = value
    return out


@dataclass(frozen=True)
class ModelConfig:
    """Model constants. ``tails`` maps a state label to its tail constant."""

    n_max: int = DEFAULT_N_MAX
    core_alpha: float = DEFAULT_CORE_ALPHA
    core_alpha_rel_unc: float = DEFAULT_CORE_REL_UNC
    tails: dict = field(default_factory=dict)
    default_tail: float = 0.0
    exclusion_halfwidth: float = DEFAULT_EXCLUSION_HALFWIDTH

    def tail_for(self, level: Level) -> float:
        return float(self.tails.get(level.label, self.default_tail))

    @classmethod
    def from_mapping(cls, cfg: dict) -> "ModelConfig":
        """Build from ``read_config`` output; unknown keys are ignored."""
        tails = {k.split(".", 1)[1]: float(v) for k, v in cfg.items() if k.startswith("tail_alpha.")}
        kw = {}
        if "n_max" in cfg:
            kw["n_max"] = int(cfg["n_max"])
        for key in ("core_alpha", "core_alpha_rel_unc", "exclusion_halfwidth"):
            if key in cfg:
                kw[key] = float(cfg[key])
        if "tail_alpha" in cfg:
            kw["default_tail"] = float(cfg["tail_alpha"])
        return cls(tails=tails, **kw)


def bundled_config() -> ModelConfig:
    return ModelConfig.from_mapping(read_config(bundled_path("rb.conf")))


@dataclass(frozen=True)
class PolarizabilityModel:
    """Target s-state plus its ordered (intermediate level, dipole) channels."""

    target: Level
    channels: tuple
    n_max: int = DEFAULT_N_MAX
    core_alpha: float = DEFAULT_CORE_ALPHA
    core_alpha_rel_unc: float = DEFAULT_CORE_REL_UNC
    tail_alpha: float = 0.0
    exclusion_halfwidth: float = DEFAULT_EXCLUSION_HALFWIDTH

    def __post_init__(self):
        if not self.exclusion_halfwidth > 0:
            raise ValueError("exclusion_halfwidth must be > 0")

    @cached_property
    def delta_e(self) -> np.ndarray:
        """E_intermediate - E_target per channel, a.u."""
        return np.array(
            [(lv.energy_cm - self.target.energy_cm) / CONSTANTS.hartree_wavenumber for lv, _ in self.channels],
            dtype=np.float64,
        )

    @cached_property
    def d_values(self) -> np.ndarray:
        return np.array([d.value for _, d in self.channels], dtype=np.float64)

    @cached_property
    def d_squared(self) -> np.ndarray:
        return self.d_values * self.d_values

    @cached_property
    def d_sigma(self) -> np.ndarray:
        return np.array([d.uncertainty for _, d in self.channels], dtype=np.float64)

    @property
    def intermediates(self) -> list[Level]:
        return [lv for lv, _ in self.channels]

    def __len__(self):
        return len(self.channels)


def build_model(target: Level, dataset: Dataset, config: ModelConfig | None = None) -> PolarizabilityModel:
    """Collect every np1/2, np3/2 channel of an s-state target with n <= n_max.

    Channels are ordered by (n, j) of the intermediate level. A fine-structure
    partner missing its dipole only triggers a :class:`DataWarning`.
    """
    config = config or ModelConfig()
    if target.l != 0:
        raise UnsupportedTargetError(f"target {target.label} has l = {target.l}; only s-states are supported")
    channels = []
    for d in dataset.dipoles_of(target):
        other = d.other(target)
        if other.l == 1 and other.n <= config.n_max and dipole_allowed(target, other):
            channels.append((other, d))
    if not channels:
        raise EmptyModelError(f"no p-state dipoles with n <= {config.n_max} found for {target.label}")
    channels.sort(key=lambda ch: (ch[0].n, ch[0].two_j, ch[0].energy_cm))
    present = {(lv.n, lv.two_j) for lv, _ in channels}
    for n in sorted({lv.n for lv, _ in channels}):
        missing = [tj for tj in (1, 3) if (n, tj) not in present]
        if missing:
            warnings.warn(
                f"{target.label}: no dipole for {n}p{missing[0]}/2, using the other fine-structure component only",
                DataWarning,
                stacklevel=2,
            )
    return PolarizabilityModel(
        target=target,
        channels=tuple(channels),
        n_max=config.n_max,
        core_alpha=config.core_alpha,
        core_alpha_rel_unc=config.core_alpha_rel_unc,
        tail_alpha=config.tail_for(target),
        exclusion_halfwidth=config.exclusion_halfwidth,
    )


@dataclass(frozen=True)
class Coincidence:
    """Level pair whose transition energy nearly equals a reference one (cm^-1)."""

    pair: tuple
    delta_e: float
    target_delta_e: float
    mismatch: float

    @property
    def configuration(self) -> str:
        lo, hi = self.pair
        return f"{lo.configuration}-{hi.configuration}"


def find_coincidences(levels, target_pair, tolerance: float, selection_filter: bool = False) -> list[Coincidence]:
    """All level pairs with |dE_pair - dE_target| <= tolerance, best first.

    ``levels`` may be a :class:`Dataset`, a label mapping or an iterable of
    levels. With ``selection_filter`` only E1-allowed pairs are kept. The
    target pair itself never appears in the output.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be > 0, got {tolerance}")
    if isinstance(levels, Dataset):
        levels = levels.levels
    pool = list(levels.values()) if isinstance(levels, dict) else list(levels)
    a, b = target_pair
    target = abs(b.energy_cm - a.energy_cm)
    target_key = frozenset((a.label, b.label))
    pool.sort(key=lambda lv: (lv.energy_cm, lv.label))
    energies = [lv.energy_cm for lv in pool]
    found = []
    # window is padded so rounding in the bisect bounds never drops a pair;
    # the exact mismatch test below decides membership
    pad = 1e-9 * (1.0 + target + tolerance)
    for i, lo in enumerate(pool):
        start = max(bisect_left(energies, lo.energy_cm + target - tolerance - pad), i + 1)
        stop = bisect_right(energies, lo.energy_cm + target + tolerance + pad)
        for hi in pool[start:stop]:
            if frozenset((lo.label, hi.label)) == target_key:
                continue
            if selection_filter and not dipole_allowed(lo, hi):
                continue
            de = hi.energy_cm - lo.energy_cm
            mismatch = abs(de - target)
            if mismatch <= tolerance:
                found.append(Coincidence((lo, hi), de, target, mismatch))
    found.sort(key=lambda c: (c.mismatch, c.pair[0].label, c.pair[1].label))
    return found
