"""Command-line front end: ``hspart {fig1,quench,alpha-scan,oracle,energy-current}``.

Settings are resolved as command-line flag > ``--config`` file > built-in
default. Config files hold ``key = value`` lines (keys as the long flag names,
with or without the leading dashes); ``#`` starts a comment.

Exit codes: 0 success, 2 invalid configuration, 3 numerical or verification
failure.
"""

import argparse
import logging
import sys

import numpy as np

from . import entropy_partition as ep
from . import models
from . import single_particle as sp
from . import verification
from .errors import PartitionError
from .io import write_table

log = logging.getLogger("hspart")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


def _float_list(text):
    return [float(x) for x in str(text).replace(" ", "").split(",") if x]


def _int_list(text):
    return [int(x) for x in str(text).replace(" ", "").split(",") if x]


# name -> (type, help)
OPTIONS = {
    "sites": (int, "number of lattice sites"),
    "hopping": (float, "hopping amplitude t (energy unit)"),
    "mu": (float, "chemical potential"),
    "temp": (float, "temperature (single value)"),
    "temp_min": (float, "lowest temperature of the grid"),
    "temp_max": (float, "highest temperature of the grid"),
    "temp_points": (int, "number of temperatures (log grid)"),
    "boundary": (str, "open or periodic"),
    "subset": (_int_list, "comma list of site indices defining the projector"),
    "site": (int, "site index for single-site outputs"),
    "alpha": (_float_list, "comma list of alpha values"),
    "eps_grid": (_float_list, "comma list of clamp epsilons, strictly decreasing"),
    "t_max": (float, "final time of the quench"),
    "t_points": (int, "number of time slices in [0, t-max]"),
    "dt": (float, "finite-difference step"),
    "f_left": (float, "occupation left of the domain wall"),
    "f_right": (float, "occupation right of the domain wall"),
    "seed": (int, "seed for randomised checks"),
    "tolerance": (float, "override threshold for every identity check"),
    "residual": (bool, "add a continuity-residual column"),
    "output": (str, "output file ('-' for stdout)"),
    "format": (str, "csv or json"),
}

COMMON = {"output": "-", "format": "csv", "hopping": 1.0, "mu": 0.0, "dt": 1e-3, "seed": 0}

DEFAULTS = {
    "fig1": {
        "sites": 512, "boundary": "periodic", "temp_min": 0.01, "temp_max": 100.0,
        "temp_points": 60, "site": 0,
    },
    "quench": {
        "sites": 64, "boundary": "open", "f_left": 0.9, "f_right": 0.1, "t_max": 10.0,
        "t_points": 11, "residual": False,
    },
    "alpha-scan": {
        "sites": 8, "boundary": "open", "temp": 0.0, "alpha": [0.0, 0.25, 0.5, 0.75, 1.0],
        "eps_grid": [10.0 ** -e for e in range(4, 13)],
    },
    "oracle": {},
    "energy-current": {"sites": 16, "boundary": "open"},
}


def _parse_bool(text):
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config(path):
    """Parse ``key = value`` lines into a dict of typed option values."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        conv = _parse_bool if OPTIONS[key][0] is bool else OPTIONS[key][0]
        try:
            values[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def build_parser():
    parser = argparse.ArgumentParser(prog="hspart", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    for name, (conv, help_text) in OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        if conv is bool:
            common.add_argument(flag, action="store_true", default=argparse.SUPPRESS, help=help_text)
        else:
            common.add_argument(flag, type=conv, default=argparse.SUPPRESS, help=help_text)
    common.add_argument("--config", default=None, help="key = value config file")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("fig1", "entropy density vs reduced entropy of a thermal chain"),
        ("quench", "entropy density and current after a domain-wall quench"),
        ("alpha-scan", "divergence of alpha-partitioned entropy as occupations turn pure"),
        ("oracle", "cross-check the Gaussian formalism against dense Fock space"),
        ("energy-current", "matrix elements of the single-site energy current"),
    ):
        sub.add_parser(name, parents=[common], help=helptext, allow_abbrev=False)
    return parser


def resolve_config(args):
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[args.command])
    if args.config:
        cfg.update(read_config(args.config))
    cfg.update({k: v for k, v in vars(args).items() if k in OPTIONS})
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("--format must be csv or json")
    if cfg.get("sites") is not None and cfg["sites"] < 2:
        raise ConfigError("--sites must be at least 2")
    if cfg["dt"] <= 0:
        raise ConfigError("--dt must be positive")
    return cfg


def _chain(cfg, temperature=None):
    try:
        return models.ChainSpec(
            N=cfg["sites"],
            hopping=cfg["hopping"],
            boundary=cfg["boundary"],
            mu=cfg["mu"],
            temperature=cfg.get("temp", 0.0) if temperature is None else temperature,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _subset(cfg, default):
    subset = cfg.get("subset", default)
    if not subset or any(not 0 <= i < cfg["sites"] for i in subset):
        raise ConfigError(f"--subset {subset} invalid for {cfg['sites']} sites")
    return subset


# -- subcommands ------------------------------------------------------------

def cmd_fig1(cfg):
    if "temp" in cfg:
        temps = [cfg["temp"]]
    else:
        try:
            temps = models.log_grid(cfg["temp_min"], cfg["temp_max"], cfg["temp_points"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if any(T <= 0 for T in temps):
        raise ConfigError("fig1 temperatures must be positive")
    spec = _chain(cfg, temperature=temps[0])
    if not 0 <= cfg["site"] < spec.N:
        raise ConfigError("--site out of range")
    rows = [r[:4] for r in models.fig1_curve(spec, temps, cfg["site"])]
    return models.FIG1_COLUMNS, rows, {"sites": spec.N, "boundary": spec.boundary, "mu": spec.mu}


QUENCH_COLUMNS = ("t", "site", "occupancy", "entropy_density", "entropy_current")


def cmd_quench(cfg):
    N = cfg["sites"]
    for key in ("f_left", "f_right"):
        if not 0.0 < cfg[key] < 1.0:
            raise ConfigError(f"--{key.replace('_', '-')} must lie in (0, 1)")
    if cfg["t_max"] < 0 or cfg["t_points"] < 1:
        raise ConfigError("need t-max >= 0 and t-points >= 1")
    ens = models.domain_wall_ensemble(N, cfg["f_left"], cfg["f_right"])
    prop = sp.Propagator(models.chain_hamiltonian(_chain(cfg)))
    times = np.linspace(0.0, cfg["t_max"], cfg["t_points"])
    columns = QUENCH_COLUMNS + (("continuity_residual",) if cfg["residual"] else ())
    rows = []
    totals = []
    for t in times:
        prof = ep.entropy_density_profile(ens, prop, t)
        totals.append(prof.total)
        if cfg["residual"]:
            deriv = sp.central_derivative(lambda s: ep.entropy_density_profile(ens, prop, s).density, t, cfg["dt"])
            resid = np.abs(deriv - prof.current)
        for n in range(N):
            row = (float(t), n, float(prof.occupancy[n]), float(prof.density[n]), float(prof.current[n]))
            if cfg["residual"]:
                row += (float(resid[n]),)
            rows.append(row)
    drift = float(np.max(np.abs(np.array(totals) - totals[0])))
    if drift > 1e-9:
        raise VerificationFailure(f"total entropy drifted by {drift:.3e}")
    if cfg["residual"] and rows and max(r[-1] for r in rows) > 1e-8:
        raise VerificationFailure("entropy continuity residual above 1e-8")
    return columns, rows, {"entropy_drift": drift}


ALPHA_COLUMNS = ("alpha", "eps", "entropy", "predicted_slope", "fitted_slope")


def cmd_alpha_scan(cfg):
    eps = np.asarray(cfg["eps_grid"], dtype=float)
    if eps.size < 4 or np.any(np.diff(eps) >= 0) or np.any(eps <= 0) or np.any(eps >= 0.5):
        raise ConfigError("--eps-grid needs >= 4 strictly decreasing values in (0, 1/2)")
    spec = _chain(cfg)
    ens = models.gibbs_ensemble(spec)
    P = sp.Projector.from_indices(_subset(cfg, list(range(spec.N // 2))), spec.N)
    rows, failures = [], []
    for alpha in cfg["alpha"]:
        slope, w = ep.alpha_divergence_slope(ens, P, alpha, eps)
        if alpha == 0.5 or w == 0.0:
            ok = abs(slope) <= 1e-6
        else:
            ok = abs(slope - w) <= 0.01 * abs(w)
        if not ok:
            failures.append(alpha)
        for e in eps:
            value = ep.alpha_entropy(ens, P, alpha, ep.EpsilonPolicy.clamp(e)).value
            rows.append((float(alpha), float(e), value, w, slope))
    if failures:
        raise VerificationFailure(f"fitted slope disagrees with prediction for alpha={failures}")
    return ALPHA_COLUMNS, rows, {"sites": spec.N, "subset": ",".join(map(str, P.indices))}


def cmd_oracle(cfg):
    results = verification.run_suite(cfg["seed"], cfg.get("tolerance"))
    rows = [r.row() for r in results]
    failed = [r.name for r in results if not r.passed]
    return verification.REPORT_COLUMNS, rows, {"seed": cfg["seed"], "failed": len(failed)}, failed


ENERGY_COLUMNS = ("n", "m", "re", "im", "distance", "deviation")


def cmd_energy_current(cfg):
    spec = _chain(cfg)
    site = cfg.get("site", cfg["subset"][0] if cfg.get("subset") else spec.N // 2)
    if not 0 <= site < spec.N:
        raise ConfigError("--site out of range")
    H = models.chain_hamiltonian(spec)
    P = sp.Projector.from_indices([site], spec.N)
    J = sp.observable_current(H, H, P, 0.0)
    ref = 0.5j * sp.commutator(H @ H, P.matrix)
    dev = np.abs(J - ref)
    scale = max(1.0, spec.hopping**2, abs(spec.mu) * spec.hopping)
    rows = []
    for n, m in zip(*np.nonzero(np.abs(J) > 1e-12 * scale)):
        dist = abs(int(n) - int(m))
        if spec.boundary == "periodic":
            dist = min(dist, spec.N - dist)
        rows.append((int(n), int(m), float(J[n, m].real), float(J[n, m].imag), dist, float(dev[n, m])))
    max_dev = float(dev.max())
    if max_dev > 1e-12 * scale:
        raise VerificationFailure(f"energy current differs from (i/2)[H^2, P] by {max_dev:.3e}")
    return ENERGY_COLUMNS, rows, {"site": site, "max_deviation": max_dev}


COMMANDS = {
    "fig1": cmd_fig1,
    "quench": cmd_quench,
    "alpha-scan": cmd_alpha_scan,
    "oracle": cmd_oracle,
    "energy-current": cmd_energy_current,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = resolve_config(args)
        out = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except VerificationFailure as exc:
        log.error("verification failed: %s", exc)
        return EXIT_NUMERICAL
    except PartitionError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    failed = out[3] if len(out) == 4 else []
    columns, rows, meta = out[:3]
    write_table(cfg["output"], columns, rows, cfg["format"], meta)
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
