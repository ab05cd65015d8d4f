"""Command-line interface.

Usage::

    magicpol scan --state 5s1/2 --omega 0.056:0.060 --count 41
    magicpol magic --ground 5s1/2 --rydberg 15s1/2
    magicpol zero --ground 5s1/2
    magicpol breakdown --state 15s1/2 --omega 0.0576645
    magicpol coincide --pair 5s1/2:5p3/2 --tol 100
    magicpol heat --trap-freq 1e6 --unit hz --gate-time 1e-6
    magicpol convert --kind omega --from au --to nm 0.0576728

Without ``--levels``/``--dipoles`` the bundled Rb dataset is used. Settings
resolve as: command line > ``MAGICPOL_*`` environment > ``--config`` file >
bundled/default values.
"""

from __future__ import annotations

import functools
import math
import sys
import warnings

import click
import numpy as np

from . import __version__
from .atomdata import (
    Dataset,
    ModelConfig,
    build_model,
    bundled_config,
    find_coincidences,
    load_bundled,
    load_dataset,
    read_config,
)
from .errors import DataWarning, MagicPolError
from .heating import RB87_MASS, TrapSpec, heating_per_cycle, restored_energy, wavepacket_moments
from .matcher import FREE_ELECTRON, ZERO, default_range, find_magic_wavelength
from .polarizability import alpha_curve, total_alpha
from .report import Report, render
from .units import convert_alpha, convert_energy, convert_omega, omega_to_nm

import scipy.constants as sc

__all__ = ["cli", "main"]

HEATING_NOTE = (
    "a published estimate of k_B T ~ 0.006 hbar*omega0 for a 1 MHz trap and a 1 us gate "
    "does not follow from k_B T = hbar*omega0*(omega0*tau)^2/4, which gives 9.87 for "
    "omega0 = 2*pi*1e6 rad/s and 0.25 for omega0 = 1e6 rad/s"
)

# config-file keys that belong to subcommands
_SUBCOMMAND_KEYS = {
    "target": [("scan", "state"), ("breakdown", "state")],
    "ground": [("magic", "ground"), ("zero", "ground")],
    "rydberg": [("magic", "rydberg")],
}
_GLOBAL_KEYS = {
    "levels": "levels",
    "dipoles": "dipoles",
    "format": "output_format",
    "output_format": "output_format",
    "n_max": "n_max",
    "core_alpha": "core_alpha",
    "core_alpha_rel_unc": "core_alpha_rel_unc",
    "tail_alpha": "tail_alpha",
    "exclusion_halfwidth": "exclusion_halfwidth",
    "omega_unit": "omega_unit",
}


def _load_config(ctx, param, value):
    if value is None:
        return None
    try:
        cfg = read_config(value)
    except MagicPolError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param)
    dm = dict(ctx.default_map or {})
    tails = {}
    for key, val in cfg.items():
        if key.startswith("tail_alpha."):
            tails[key.split(".", 1)[1]] = val
        elif key in _GLOBAL_KEYS:
            dm[_GLOBAL_KEYS[key]] = val
        elif key in _SUBCOMMAND_KEYS:
            for cmd, opt in _SUBCOMMAND_KEYS[key]:
                dm.setdefault(cmd, {})[opt] = val
        else:
            raise click.BadParameter(f"{value}: unknown config key {key!r}", ctx=ctx, param=param)
    ctx.default_map = dm
    ctx.meta["config_tails"] = tails
    return value


class RunConfig:
    """Resolved global settings, shared by all subcommands."""

    def __init__(self, levels_path, dipoles_path, output_format, omega_unit, overrides, tails):
        self.levels_path = levels_path
        self.dipoles_path = dipoles_path
        self.output_format = output_format
        self.omega_unit = omega_unit
        self.overrides = overrides
        self.tails = tails
        self._dataset = None

    @property
    def bundled(self) -> bool:
        return self.levels_path is None and self.dipoles_path is None

    def dataset(self, need_dipoles=True) -> Dataset:
        if self._dataset is None:
            if self.bundled:
                self._dataset = load_bundled()
            else:
                if self.levels_path is None:
                    raise click.UsageError("--dipoles given without --levels")
                if need_dipoles and self.dipoles_path is None:
                    raise click.UsageError("this command needs --dipoles as well as --levels")
                self._dataset = load_dataset(self.levels_path, self.dipoles_path)
        return self._dataset

    def model_config(self) -> ModelConfig:
        base = bundled_config() if self.bundled else ModelConfig()
        kw = {k: v for k, v in self.overrides.items() if v is not None}
        tails = dict(base.tails)
        tails.update(self.tails)
        default_tail = kw.pop("tail_alpha", base.default_tail)
        return ModelConfig(
            n_max=kw.get("n_max", base.n_max),
            core_alpha=kw.get("core_alpha", base.core_alpha),
            core_alpha_rel_unc=kw.get("core_alpha_rel_unc", base.core_alpha_rel_unc),
            tails=tails,
            default_tail=default_tail,
            exclusion_halfwidth=kw.get("exclusion_halfwidth", base.exclusion_halfwidth),
        )

    def level(self, label):
        try:
            return self.dataset().level(label)
        except KeyError as exc:
            raise click.BadParameter(exc.args[0]) from None

    def model(self, label):
        return build_model(self.level(label), self.dataset(), self.model_config())

    def dataset_meta(self):
        if self.bundled:
            return "bundled Rb"
        return f"{self.levels_path} + {self.dipoles_path}"

    def emit(self, report: Report):
        click.echo(render(report, self.output_format), nl=False)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("always", DataWarning)
                warnings.showwarning = _show_warning
                return fn(*args, **kwargs)
        except MagicPolError as exc:
            raise click.ClickException(str(exc)) from None

    return wrapper


def _show_warning(message, category, filename, lineno, file=None, line=None):
    click.echo(f"warning: {message}", err=True)


def _parse_range(text, unit):
    """``"lo:hi"`` or a single value, converted to an ascending a.u. pair."""
    parts = text.split(":")
    if len(parts) not in (1, 2):
        raise click.BadParameter(f"expected LO:HI, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise click.BadParameter(f"expected numbers in LO:HI, got {text!r}") from None
    if len(vals) == 1:
        vals = vals * 2
    return vals[0], vals[1]


def _to_au(values, unit):
    try:
        return np.asarray(convert_omega(np.asarray(values, dtype=np.float64), unit, "au"), dtype=np.float64)
    except MagicPolError as exc:
        raise click.BadParameter(str(exc)) from None


@click.group(context_settings={"auto_envvar_prefix": "MAGICPOL", "help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    is_eager=True,
    envvar="MAGICPOL_CONFIG",
    callback=_load_config,
    help="key = value file with defaults for any option.",
)
@click.option("--levels", type=click.Path(dir_okay=False), help="Levels CSV (default: bundled Rb).")
@click.option("--dipoles", type=click.Path(dir_okay=False), help="Dipole CSV (default: bundled Rb).")
@click.option("--format", "output_format", type=click.Choice(["table", "csv", "json"]), default="table",
              envvar="MAGICPOL_FORMAT")
@click.option("--n-max", type=int, default=None, help="Highest principal quantum number summed.")
@click.option("--core-alpha", type=float, default=None, help="Core polarizability, a0^3.")
@click.option("--core-alpha-rel-unc", type=float, default=None, help="Relative uncertainty of the core term.")
@click.option("--tail-alpha", type=float, default=None, help="Tail constant for states without a per-state value.")
@click.option("--tail", "tails", multiple=True, metavar="STATE=VALUE", help="Per-state tail constant.")
@click.option("--exclusion-halfwidth", type=float, default=None, help="Resonance exclusion half-width, a.u.")
@click.option(
    "--omega-unit",
    type=click.Choice(["au", "nm", "hz"]),
    default="au",
    help="Unit of frequency arguments (outputs always give both a.u. and nm).",
)
@click.version_option(__version__, prog_name="magicpol")
@click.pass_context
def cli(ctx, config_path, levels, dipoles, output_format, n_max, core_alpha, core_alpha_rel_unc, tail_alpha, tails,
        exclusion_halfwidth, omega_unit):
    """Dynamic polarizabilities and magic lattice frequencies of alkali atoms."""
    tail_map = dict(ctx.meta.get("config_tails", {}))
    for item in tails:
        state, sep, val = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected STATE=VALUE, got {item!r}", param_hint="--tail")
        tail_map[state.strip()] = val
    try:
        tail_map = {k: float(v) for k, v in tail_map.items()}
    except ValueError as exc:
        raise click.BadParameter(f"tail value: {exc}", param_hint="--tail") from None
    overrides = dict(
        n_max=n_max,
        core_alpha=core_alpha,
        core_alpha_rel_unc=core_alpha_rel_unc,
        tail_alpha=tail_alpha,
        exclusion_halfwidth=exclusion_halfwidth,
    )
    ctx.obj = RunConfig(levels, dipoles, output_format, omega_unit, overrides, tail_map)


pass_run = click.make_pass_decorator(RunConfig)


@cli.command()
@click.option("--state", required=True, help="Target s-state label, e.g. 5s1/2.")
@click.option("--omega", "omega_range", required=True, help="LO:HI in --omega-unit (or a single value).")
@click.option("--step", type=float, default=None, help="Grid step in --omega-unit.")
@click.option("--count", type=int, default=None, help="Number of grid points (default 101).")
@click.option("--allow-near-resonance", is_flag=True, help="Report values inside exclusion windows.")
@pass_run
@_handle_errors
def scan(run, state, omega_range, step, count, allow_near_resonance):
    """Tabulate alpha(omega) of STATE over a frequency grid."""
    lo, hi = _parse_range(omega_range, run.omega_unit)
    if step is not None and count is not None:
        raise click.UsageError("give --step or --count, not both")
    if step is not None and not step > 0:
        raise click.BadParameter("--step must be > 0")
    if count is not None and count < 1:
        raise click.BadParameter("--count must be >= 1")
    lo, hi = min(lo, hi), max(lo, hi)
    if lo == hi:
        grid = np.array([lo] * (count or 1))
    elif step is not None:
        grid = lo + step * np.arange(int(math.floor((hi - lo) / step + 1e-9)) + 1)
    else:
        grid = np.linspace(lo, hi, count or 101)
    omegas = np.sort(_to_au(grid, run.omega_unit))
    model = run.model(state)
    total, sigma, excluded = alpha_curve(model, omegas, allow_near_resonance=allow_near_resonance)
    rows = []
    for w, a, s, ex in zip(omegas.tolist(), total.tolist(), sigma.tolist(), excluded.tolist()):
        lam = omega_to_nm(w) if w > 0 else None
        rows.append([w, lam, a, s, bool(ex)])
    run.emit(
        Report(
            "scan",
            ["omega_au", "lambda_nm", "alpha_au", "sigma_au", "excluded"],
            rows,
            meta={
                "state": model.target.label,
                "dataset": run.dataset_meta(),
                "n_max": model.n_max,
                "core_alpha": model.core_alpha,
                "tail_alpha": model.tail_alpha,
            },
            formats={"omega_au": ".7f", "lambda_nm": ".4f", "alpha_au": ".2f", "sigma_au": ".2f"},
        )
    )


def _magic(run, ground, partner, omega_range, resolution, xtol, ftol):
    gmodel = run.model(ground)
    if partner == ZERO:
        other = ZERO
    elif partner == FREE_ELECTRON:
        other = FREE_ELECTRON
    else:
        other = run.model(partner)
    if omega_range is None:
        rng = default_range(gmodel)
    else:
        lo, hi = _parse_range(omega_range, run.omega_unit)
        rng = tuple(sorted(_to_au([lo, hi], run.omega_unit).tolist()))
    points = find_magic_wavelength(gmodel, other, rng, resolution=resolution, xtol=xtol, ftol=ftol)
    rows = [
        [p.omega, p.lambda_nm, p.alpha_at_match, p.residual, p.bracket[0], p.bracket[1], p.ground.label,
         p.partner_label]
        for p in points
    ]
    run.emit(
        Report(
            "magic" if partner != ZERO else "zero",
            ["omega_au", "lambda_nm", "alpha_at_match", "residual", "bracket_lo", "bracket_hi", "ground", "partner"],
            rows,
            meta={
                "ground": gmodel.target.label,
                "partner": partner if isinstance(other, str) else other.target.label,
                "dataset": run.dataset_meta(),
                "range_lo_au": rng[0],
                "range_hi_au": rng[1],
            },
            formats={"omega_au": ".9f", "lambda_nm": ".4f", "alpha_at_match": ".2f", "residual": ".2e",
                     "bracket_lo": ".10f", "bracket_hi": ".10f"},
        )
    )


_solver_options = [
    click.option("--omega", "omega_range", default=None, help="LO:HI (default: between the two lowest resonances)."),
    click.option("--resolution", type=float, default=2e-6, show_default=True, help="Bracketing grid step, a.u."),
    click.option("--xtol", type=float, default=1e-9, show_default=True, help="Root tolerance in omega, a.u."),
    click.option("--ftol", type=float, default=1e-3, show_default=True, help="Root tolerance in alpha, a0^3."),
]


def _with_solver_options(fn):
    for opt in reversed(_solver_options):
        fn = opt(fn)
    return fn


@cli.command()
@click.option("--ground", required=True, help="Ground-state label, e.g. 5s1/2.")
@click.option("--rydberg", default=None, help="Partner state label.")
@click.option("--zero", "zero_flag", is_flag=True, help="Match against alpha = 0 instead.")
@click.option("--free-electron", "free_flag", is_flag=True, help="Match against -1/omega^2.")
@_with_solver_options
@pass_run
@_handle_errors
def magic(run, ground, rydberg, zero_flag, free_flag, omega_range, resolution, xtol, ftol):
    """Frequencies where alpha(GROUND) equals alpha(RYDBERG)."""
    chosen = [x for x in (rydberg is not None, zero_flag, free_flag) if x]
    if len(chosen) != 1:
        raise click.UsageError("give exactly one of --rydberg, --zero, --free-electron")
    partner = ZERO if zero_flag else FREE_ELECTRON if free_flag else rydberg
    _magic(run, ground, partner, omega_range, resolution, xtol, ftol)


@cli.command()
@click.option("--ground", required=True, help="State label, e.g. 5s1/2.")
@_with_solver_options
@pass_run
@_handle_errors
def zero(run, ground, omega_range, resolution, xtol, ftol):
    """Zero crossings of alpha(GROUND); same as ``magic --zero``."""
    _magic(run, ground, ZERO, omega_range, resolution, xtol, ftol)


@cli.command()
@click.option("--state", required=True, help="Target s-state label.")
@click.option("--omega", required=True, type=float, help="Frequency in --omega-unit.")
@click.option("--allow-near-resonance", is_flag=True)
@pass_run
@_handle_errors
def breakdown(run, state, omega, allow_near_resonance):
    """Per-channel contributions to alpha(STATE) at one frequency."""
    w = float(_to_au([omega], run.omega_unit)[0])
    model = run.model(state)
    res = total_alpha(model, w, allow_near_resonance=allow_near_resonance)
    rows = [
        [t.label, t.d_value, t.delta_e, t.denominator, t.contribution, t.accumulated] for t in res.terms
    ]
    run.emit(
        Report(
            "breakdown",
            ["np", "D", "dE", "dE2_minus_w2", "contr", "acc"],
            rows,
            meta={
                "state": model.target.label,
                "omega_au": w,
                "lambda_nm": omega_to_nm(w) if w > 0 else None,
                "valence": res.valence,
                "core": res.core,
                "tail": res.tail,
                "total": res.total,
                "sigma": res.uncertainty,
                "excluded": res.excluded,
            },
            formats={"D": ".4g", "dE": ".5f", "dE2_minus_w2": ".5f", "contr": ".1f", "acc": ".1f",
                     "omega_au": ".7f", "lambda_nm": ".4f", "valence": ".2f", "total": ".2f", "sigma": ".2f"},
        )
    )


@cli.command()
@click.option("--pair", required=True, help="Reference transition as LOWER:UPPER, e.g. 5s1/2:5p3/2.")
@click.option("--tol", type=float, default=100.0, show_default=True, help="Tolerance, cm^-1.")
@click.option("--allowed-only", is_flag=True, help="Keep only E1-allowed pairs.")
@pass_run
@_handle_errors
def coincide(run, pair, tol, allowed_only):
    """Level pairs whose transition energy is close to that of PAIR."""
    parts = pair.split(":")
    if len(parts) != 2 or not all(p.strip() for p in parts):
        raise click.BadParameter(f"expected LOWER:UPPER, got {pair!r}", param_hint="--pair")
    if not tol > 0:
        raise click.BadParameter("--tol must be > 0", param_hint="--tol")
    ds = run.dataset(need_dipoles=False)
    try:
        a, b = (ds.level(p.strip()) for p in parts)
    except KeyError as exc:
        raise click.BadParameter(exc.args[0], param_hint="--pair") from None
    hits = find_coincidences(ds, (a, b), tol, selection_filter=allowed_only)
    rows = [
        [c.pair[0].label, c.pair[1].label, c.configuration, c.delta_e, c.target_delta_e, c.mismatch] for c in hits
    ]
    run.emit(
        Report(
            "coincide",
            ["lower", "upper", "configuration", "delta_e_cm1", "target_delta_e_cm1", "mismatch_cm1"],
            rows,
            meta={"pair": f"{a.label}:{b.label}", "target_delta_e_cm1": abs(b.energy_cm - a.energy_cm),
                  "tolerance_cm1": tol, "allowed_only": allowed_only},
            formats={"delta_e_cm1": ".3f", "target_delta_e_cm1": ".3f", "mismatch_cm1": ".3f"},
        )
    )


@cli.command()
@click.option("--trap-freq", required=True, type=float, help="Trap frequency (see --unit).")
@click.option("--unit", type=click.Choice(["rad/s", "hz"]), default="rad/s", show_default=True)
@click.option("--gate-time", required=True, type=float, help="Release time tau, s.")
@click.option("--mass-amu", type=float, default=None, help="Atomic mass in u (default 87Rb).")
@pass_run
@_handle_errors
def heat(run, trap_freq, unit, gate_time, mass_amu):
    """Heating from one trap release/restore cycle."""
    mass = RB87_MASS if mass_amu is None else mass_amu * sc.physical_constants["atomic mass constant"][0]
    trap = TrapSpec.from_frequency(trap_freq, unit, mass)
    msr, kin = wavepacket_moments(trap, gate_time)
    h = heating_per_cycle(trap, gate_time)
    row = [trap.omega0, trap.omega0 * gate_time, trap.d0, trap.e0, msr, kin, restored_energy(trap, gate_time),
           h.hbar_omega0, h.kelvin]
    run.emit(
        Report(
            "heat",
            ["omega0_rad_s", "omega0_tau", "d0_m", "e0_J", "msr_m2", "kinetic_J", "restored_J", "kT_hbar_omega0",
             "T_K"],
            [row],
            meta={"trap_freq": trap_freq, "unit": unit, "gate_time_s": gate_time, "mass_kg": mass},
            notes=[HEATING_NOTE],
            formats={"kT_hbar_omega0": ".4f"},
        )
    )


_CONVERTERS = {"omega": convert_omega, "alpha": convert_alpha, "energy": convert_energy}


@cli.command()
@click.option("--kind", type=click.Choice(sorted(_CONVERTERS)), required=True)
@click.option("--from", "src", required=True, help="Source unit.")
@click.option("--to", "dst", required=True, help="Target unit.")
@click.argument("value", type=float)
@pass_run
@_handle_errors
def convert(run, kind, src, dst, value):
    """Convert VALUE between units."""
    try:
        result = float(_CONVERTERS[kind](value, src, dst))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    run.emit(Report("convert", ["value", "from", "to", "result"], [[value, src, dst, result]], meta={"kind": kind}))


def main(argv=None):
    return cli.main(args=argv, prog_name="magicpol")


if __name__ == "__main__":
    sys.exit(main())
