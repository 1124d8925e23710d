"""Command-line front end: ``orlicz-dynamics {classify,shadow,distortion,report}``.

Exit codes: 0 ok, 2 invalid config, 3 unbounded distortion, 4 not
hyperbolic, 5 I/O failure.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone
import io
import json
import math
import os
import sys
import tempfile

import yaml

from . import classify as cl
from . import shadow as sh
from .errors import (InvalidConfig, InvalidYoungFunction, NotHyperbolic,
                     UnboundedDistortion)
from .space import build_system
from .young import from_spec

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_CONFIG, EXIT_DISTORTION, EXIT_NOT_HYPERBOLIC, EXIT_IO = 0, 2, 3, 4, 5

ANALYSIS_DEFAULTS = {"n_max": 32, "window": None, "tol": 1e-6, "subset_cap": 1 << 20}
SHADOW_DEFAULTS = {"delta": 1e-3, "length": 50, "seeds": [0], "radius": 1}
OUTPUT_DEFAULTS = {"json": "report.json", "csv": "csv"}
TOP_KEYS = ("young", "system", "analysis", "shadow", "output")


@dataclass
class RunConfig:
    young: dict
    system: dict
    analysis: dict = field(default_factory=dict)
    shadow: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def echo(self):
        return {"young": self.young, "system": self.system, "analysis": self.analysis,
                "shadow": self.shadow, "output": self.output}


def _int_field(section, key, value, minimum, errors):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        errors.append(f"{section}.{key}: expected an integer >= {minimum}, got {value!r}")


def _real_field(section, key, value, errors, allow_zero=False):
    ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if not ok or value < 0 or (value == 0 and not allow_zero):
        kind = "nonnegative" if allow_zero else "positive"
        errors.append(f"{section}.{key}: expected a {kind} number, got {value!r}")


def parse_config(raw):
    """Validate a config mapping; returns ``(RunConfig, phi, sys)``.

    All problems are collected and raised together as InvalidConfig.
    """
    if not isinstance(raw, dict):
        raise InvalidConfig("config: expected a mapping at the top level")
    errors = [f"{k}: unknown section" for k in raw if k not in TOP_KEYS]
    for key in ("young", "system"):
        if not isinstance(raw.get(key), dict):
            errors.append(f"{key}: required mapping is missing")
    phi = sys_ = None
    if isinstance(raw.get("young"), dict):
        try:
            phi = from_spec(raw["young"])
        except (InvalidYoungFunction, KeyError, TypeError, ValueError) as exc:
            errors.append(f"young: {exc}")
    if isinstance(raw.get("system"), dict):
        try:
            sys_ = build_system(raw["system"])
        except InvalidConfig as exc:
            errors.extend(exc.errors)

    sections = {}
    for name, defaults in (("analysis", ANALYSIS_DEFAULTS), ("shadow", SHADOW_DEFAULTS),
                           ("output", OUTPUT_DEFAULTS)):
        given = raw.get(name) or {}
        if not isinstance(given, dict):
            errors.append(f"{name}: expected a mapping")
            given = {}
        errors.extend(f"{name}.{k}: unknown key" for k in given if k not in defaults)
        sections[name] = {**defaults, **given}

    a, s = sections["analysis"], sections["shadow"]
    _int_field("analysis", "n_max", a["n_max"], 8, errors)
    if a["window"] is not None:
        _int_field("analysis", "window", a["window"], 1, errors)
    _real_field("analysis", "tol", a["tol"], errors)
    _int_field("analysis", "subset_cap", a["subset_cap"], 1, errors)
    _real_field("shadow", "delta", s["delta"], errors, allow_zero=True)
    _int_field("shadow", "length", s["length"], 1, errors)
    _int_field("shadow", "radius", s["radius"], 0, errors)
    seeds = s["seeds"]
    if not isinstance(seeds, list) or not seeds or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in seeds):
        errors.append(f"shadow.seeds: expected a non-empty list of integers, got {seeds!r}")
    if sys_ is not None and not errors:
        need = s["length"] + s["radius"] + 1
        if sys_.window < need:
            errors.append(f"system.window: {sys_.window} is smaller than shadow.length + "
                          f"shadow.radius + 1 = {need}")
        if not phi.is_power and a["n_max"] >= (a["window"] or sys_.window):
            errors.append("analysis.n_max: must be below the sampling window")
    if errors:
        raise InvalidConfig(errors)
    cfg = RunConfig(raw["young"], raw["system"], a, s, sections["output"])
    return cfg, phi, sys_


def load_config(path):
    """Read a YAML (or JSON) config file. OSError propagates for exit code 5."""
    with open(path) as fh:
        text = fh.read()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidConfig(f"config: not valid YAML ({exc})")
    return parse_config(raw)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _clean(obj):
    """Make a structure JSON-safe: tuples to lists, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def report_json(report):
    return json.dumps(_clean(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def strip_volatile(report):
    """Copy of a report without the fields excluded from determinism checks."""
    return {k: v for k, v in report.items() if k != "generated_at"}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

class Run:
    """Shared state for one invocation: parsed config plus computed pieces."""

    def __init__(self, cfg, phi, sys_, out_dir, jobs=1):
        self.cfg, self.phi, self.sys = cfg, phi, sys_
        self.out_dir = out_dir
        self.jobs = jobs
        a = cfg.analysis
        self.n_max, self.window, self.tol = a["n_max"], a["window"], a["tol"]
        self.csv_files = {}
        self.report = {
            "schema_version": SCHEMA_VERSION,
            "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config": cfg.echo(),
            "certificate": None,
            "distortion": None,
            "rn_class": None,
            "spectral": None,
            "shadow_runs": [],
        }

    def distortion(self):
        d = cl.distortion(self.phi, self.sys, self.window, self.cfg.analysis["subset_cap"])
        self.report["distortion"] = d.to_dict()
        self.report["rn_class"] = cl.rn_conditions(self.sys, self.n_max, self.tol)
        return d

    def classify(self):
        d = self.distortion()
        tables = cl.rate_tables(self.phi, self.sys, self.n_max, self.window)
        cert = cl.certify(tables, tol=self.tol, H=d.H)
        self.cert = cert
        self.report["certificate"] = cert.to_dict()
        self.report["spectral"] = cl.spectral_bounds(self.phi, self.sys, cert, self.n_max,
                                                     self.window)
        K = self.window or self.sys.window
        levels = range(-K, K + 1)
        nus = cl.nu_table(self.phi, self.sys, levels)
        self.report["nu"] = {"levels": list(levels), "values": [float(v) for v in nus]}
        self.csv_files["nu.csv"] = _csv_text(["k", "nu"], [[k, repr(float(v))]
                                                           for k, v in zip(levels, nus)])
        for mode, table in tables.items():
            self.csv_files[f"a_n_{mode}.csv"] = _csv_text(
                ["n", "a_n"], [[n, repr(v)] for n, v in enumerate(table.values, 1)])
        return cert

    def shadow(self):
        s = self.cfg.shadow
        if not self.cert.hyperbolic:
            drift = sh.drifting_counterexample(self.phi, self.sys, s["length"], s["delta"])
            self.report["drift"] = drift.to_dict()
            return None
        jobs = [(self.phi, self.sys, self.cert, s["length"], s["delta"], seed, s["radius"])
                for seed in s["seeds"]]
        if self.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(_run_seed, jobs))
        else:
            results = [_run_seed(j) for j in jobs]
        runs = []
        for seed, res in zip(s["seeds"], results):
            runs.append({"seed": seed, **res.summary()})
            rows = [[n, repr(c), repr(res.residuals[n]) if n < len(res.residuals) else ""]
                    for n, c in enumerate(res.correction_norms)]
            self.csv_files[f"shadow_seed{seed}.csv"] = _csv_text(
                ["n", "correction_norm", "residual"], rows)
        self.report["shadow_runs"] = runs
        self.report["shadow_summary"] = {
            "max_epsilon": max(r["epsilon_achieved"] for r in runs),
            "max_residual": max(r["orbit_residual"] for r in runs),
            "epsilon_bound": runs[0]["epsilon_bound"],
            "bound_note": "derived geometric-series bound from the certificate",
        }
        return runs

    def masses_csv(self):
        rows = [[k, i, repr(float(v))] for k in self.sys.levels()
                for i, v in enumerate(self.sys.masses(k))]
        self.csv_files["masses.csv"] = _csv_text(["k", "i", "mass"], rows)

    def write(self):
        out = self.cfg.output
        json_path = os.path.join(self.out_dir, out["json"])
        csv_dir = os.path.join(self.out_dir, out["csv"])
        for name, text in sorted(self.csv_files.items()):
            atomic_write(os.path.join(csv_dir, name), text)
        atomic_write(json_path, report_json(self.report))
        return json_path


def _run_seed(args):
    phi, sys_, cert, N, delta, seed, radius = args
    po = sh.make_pseudo_orbit(phi, sys_, N, delta, seed, radius=radius)
    return sh.shadow(phi, sys_, cert, po)


def _cert_line(cert):
    if cert.kind == "NONE":
        return f"class=NONE inconclusive={str(cert.inconclusive).lower()}"
    return f"class={cert.kind} t={cert.t:.6g} K={cert.K:.6g}"


def cmd_classify(run):
    cert = run.classify()
    path = run.write()
    return f"classify: {_cert_line(cert)} rn={run.report['rn_class']} -> {path}"


def cmd_distortion(run):
    d = run.distortion()
    path = run.write()
    return f"distortion: K_subset={d.K_subset:.6g} K_rn={d.K_rn:.6g} H={d.H:.6g} -> {path}"


def cmd_shadow(run):
    cert = run.classify()
    runs = run.shadow()
    path = run.write()
    if runs is None:
        dr = run.report["drift"]
        raise NotHyperbolic(
            f"shadow: class=NONE; drifting pseudo-orbit stays {dr['best_distance']:.6g} "
            f"away from every tested true orbit (threshold {dr['threshold']:.6g}) -> {path}")
    agg = run.report["shadow_summary"]
    return (f"shadow: {_cert_line(cert)} seeds={len(runs)} max_eps={agg['max_epsilon']:.6g} "
            f"bound={agg['epsilon_bound']:.6g} max_residual={agg['max_residual']:.3g} -> {path}")


def cmd_report(run):
    cert = run.classify()
    run.shadow()
    run.masses_csv()
    path = run.write()
    return f"report: {_cert_line(cert)} rn={run.report['rn_class']} -> {path}"


COMMANDS = {"classify": cmd_classify, "shadow": cmd_shadow,
            "distortion": cmd_distortion, "report": cmd_report}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orlicz-dynamics",
        description="Hyperbolicity and shadowing diagnostics for composition "
                    "operators on Orlicz spaces over atomic dissipative systems.",
        epilog="exit codes: 2 invalid config, 3 unbounded distortion, "
               "4 not hyperbolic, 5 I/O error")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, metavar="PATH", help="YAML run config")
    parser.add_argument("--out", default=".", metavar="DIR",
                        help="directory for the JSON report and CSV exports")
    parser.add_argument("--seed-override", type=int, metavar="N",
                        help="replace shadow.seeds with the single seed N")
    parser.add_argument("--quiet", action="store_true", help="no summary line on stdout")
    parser.add_argument("--jobs", type=int, default=1, metavar="J",
                        help="worker processes for independent shadow seeds")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    def say(msg, stream=sys.stdout):
        if not args.quiet or stream is sys.stderr:
            print(msg, file=stream)

    try:
        cfg, phi, sys_ = load_config(args.config)
        if args.seed_override is not None:
            cfg.shadow["seeds"] = [args.seed_override]
        run = Run(cfg, phi, sys_, args.out, jobs=max(1, args.jobs))
        say(COMMANDS[args.command](run))
        return EXIT_OK
    except InvalidConfig as exc:
        for line in exc.errors:
            say(f"invalid config: {line}", sys.stderr)
        return EXIT_CONFIG
    except UnboundedDistortion as exc:
        say(f"unbounded distortion: {exc}", sys.stderr)
        return EXIT_DISTORTION
    except NotHyperbolic as exc:
        say(str(exc), sys.stderr)
        return EXIT_NOT_HYPERBOLIC
    except OSError as exc:
        say(f"I/O error: {exc}", sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
