"""Command-line front end.

Subcommands: kernel (tabulate K, p, Phi over a radius grid), khat (build
transform tables and per-period traces), solve (variable-order Poisson
solve for a named radial source), validate (run the oracle suite).

Configuration comes from an optional TOML file (--config) with sections
[profile], [kgrid], [rgrid], [policy], [source], [output]; every flag
overrides its file counterpart.  CSV output carries 17 significant digits
so replotting is lossless, and identical configurations produce
byte-identical files.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical non-convergence.  Set VOFL_LOG=DEBUG|INFO|... for logging.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib  # python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigError, ConvergenceError, ProfileError, VoflError
from .exponent import (
    ExponentProfile,
    constant_profile,
    make_example1,
    make_example2,
    moebius_profile,
    require_admissible,
    validate as validate_profile,
)
from .kernel import green_values, kernel_value, p_value
from .oracles import reports_to_json, run_suite
from .sinexform import (
    RegularizationPolicy,
    delta_khat_estimate,
    khat,
    khat_at_lambda,
    khat_grid,
    tail_integral_measured,
    truncation_error_estimate,
)
from .spectral import (
    RadialField,
    apply_vofl,
    default_k_grid,
    restrict_table,
    spectral_support,
    field_from_csv,
    field_to_csv,
    field_to_json,
    gaussian_field,
    plummer_field,
    relative_l2,
    solve_poisson,
    table_to_csv,
    table_to_json,
)

log = logging.getLogger("vofl.cli")

_FMT = "%.17g"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3


@dataclass
class GridSpec:
    lo: float
    hi: float
    count: int
    spacing: str = "log"

    def build(self) -> np.ndarray:
        if self.count < 1 or self.lo <= 0 or self.hi <= self.lo:
            raise ConfigError(
                f"grid needs 0 < min < max and count >= 1, got "
                f"[{self.lo}, {self.hi}] x {self.count}"
            )
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        if self.spacing == "linear":
            return np.linspace(self.lo, self.hi, self.count)
        raise ConfigError(f"unknown grid spacing {self.spacing!r}")


@dataclass
class RunConfig:
    profile: ExponentProfile
    k_grid: GridSpec
    r_grid: GridSpec
    policy: RegularizationPolicy
    out_dir: str = "."
    out_format: str = "csv"
    basename: str | None = None
    source: str | None = None
    trace_k: float | None = None
    trace_lambda: float | None = None
    trace_periods: int = 100


def parse_profile_spec(spec: str, n_default: int = 3) -> ExponentProfile:
    """example1 | example2 | constant:s=0.6[,n=3] | moebius:num0=6,num1=9,den=10[,n=3]"""
    spec = spec.strip()
    if spec == "example1":
        return make_example1()
    if spec == "example2":
        return make_example2()
    if ":" not in spec:
        raise ConfigError(f"malformed profile spec {spec!r}")
    form, _, args = spec.partition(":")
    kv = _parse_kv(args, f"profile spec {spec!r}")
    n = int(kv.pop("n", n_default))
    try:
        if form == "constant":
            return constant_profile(float(kv.pop("s")), n=n)
        if form == "moebius":
            return moebius_profile(
                float(kv.pop("num0")), float(kv.pop("num1")), float(kv.pop("den")), n=n
            )
    except KeyError as exc:
        raise ConfigError(f"profile spec {spec!r} is missing key {exc}") from exc
    raise ConfigError(f"unknown profile form {form!r}")


def _parse_kv(args: str, what: str) -> dict:
    out = {}
    if not args:
        return out
    for part in args.split(","):
        if "=" not in part:
            raise ConfigError(f"{what}: expected key=value, got {part!r}")
        key, _, val = part.partition("=")
        out[key.strip()] = val.strip()
    return out


def profile_from_table(tbl: dict) -> ExponentProfile:
    form = tbl.get("form")
    n = int(tbl.get("n", 3))
    if form == "constant":
        return constant_profile(float(tbl["s"]), n=n)
    if form == "moebius":
        return moebius_profile(
            float(tbl["num0"]), float(tbl["num1"]), float(tbl["den"]), n=n
        )
    if form in ("example1", "example2"):
        return make_example1() if form == "example1" else make_example2()
    raise ConfigError(f"config [profile]: unknown form {form!r}")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc


def build_run_config(args, *, need_source: bool = False) -> RunConfig:
    file_cfg = load_config(getattr(args, "config", None))

    if getattr(args, "profile", None):
        profile = parse_profile_spec(args.profile)
    elif "profile" in file_cfg:
        profile = profile_from_table(file_cfg["profile"])
    else:
        raise ConfigError("no profile given (use --profile or a [profile] section)")

    kg = dict(file_cfg.get("kgrid", {}))
    rg = dict(file_cfg.get("rgrid", {}))
    pol = dict(file_cfg.get("policy", {}))
    out = dict(file_cfg.get("output", {}))

    def pick(flag, table, key, default):
        val = getattr(args, flag, None)
        if val is not None:
            return val
        return table.get(key, default)

    k_grid = GridSpec(
        float(pick("kmin", kg, "min", 0.1)),
        float(pick("kmax", kg, "max", 10.0)),
        int(pick("knum", kg, "count", 50)),
        str(pick("kspacing", kg, "spacing", "log")),
    )
    r_grid = GridSpec(
        float(pick("rmin", rg, "min", 0.01)),
        float(pick("rmax", rg, "max", 100.0)),
        int(pick("rnum", rg, "count", 200)),
        str(pick("rspacing", rg, "spacing", "log")),
    )

    lam = getattr(args, "lambdas", None)
    if lam is not None:
        lam_seq = tuple(float(x) for x in lam.split(","))
    else:
        lam_seq = tuple(pol.get("lambdas", (0.2, 0.1, 0.05, 0.025)))
    extrap = "none" if getattr(args, "no_extrapolation", False) else str(
        pol.get("extrapolation", "richardson")
    )
    try:
        policy = RegularizationPolicy(
            lambda_sequence=lam_seq,
            extrapolation=extrap,
            period_budget=int(pol.get("period_budget", 100_000)),
            tail_tolerance=float(pol.get("tail_tolerance", 1e-8)),
        )
    except VoflError as exc:
        raise ConfigError(f"bad policy: {exc}") from exc

    source = getattr(args, "source", None) or file_cfg.get("source", {}).get("spec")
    if need_source and not source:
        raise ConfigError("solve needs a source (--source or [source] spec)")

    trace_k = None
    trace = getattr(args, "trace", None)
    if trace is not None:
        kv = _parse_kv(trace, "--trace")
        if "k" not in kv:
            raise ConfigError("--trace must look like k=<value>")
        trace_k = float(kv["k"])

    return RunConfig(
        profile=profile,
        k_grid=k_grid,
        r_grid=r_grid,
        policy=policy,
        out_dir=str(pick("out", out, "dir", ".")),
        out_format=str(pick("format", out, "format", "csv")),
        basename=getattr(args, "basename", None),
        source=source,
        trace_k=trace_k,
        trace_lambda=getattr(args, "trace_lambda", None),
        trace_periods=int(getattr(args, "trace_periods", None) or 100),
    )


def _write_csv(path: str, header: list, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_FMT % x for x in row])
    log.info("wrote %s", path)


def _outpath(cfg: RunConfig, name: str, ext: str | None = None) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, f"{name}.{ext or cfg.out_format}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kernel(args) -> int:
    cfg = build_run_config(args)
    require_admissible(cfg.profile)
    r = cfg.r_grid.build()
    s = cfg.profile.eval(r)
    kv = kernel_value(cfg.profile, r)
    rows = zip(r, s, kv, r * kv, -kv)
    name = cfg.basename or "kernel_profile"
    if cfg.out_format == "json":
        payload = {
            "kind": "kernel_profile",
            "columns": ["r", "s", "K", "p", "phi"],
            "rows": [list(row) for row in rows],
        }
        with open(_outpath(cfg, name, "json"), "w") as fh:
            json.dump(payload, fh, indent=1)
    else:
        _write_csv(_outpath(cfg, name, "csv"), ["r", "s", "K", "p", "phi"], rows)
    return EXIT_OK


def _khat_sweep(cfg: RunConfig):
    ks = cfg.k_grid.build()
    table = khat_grid(cfg.profile, ks, cfg.policy)
    if len(table) == 0:
        raise ConvergenceError("every k value failed; see log for details")
    return table


def cmd_khat(args) -> int:
    cfg = build_run_config(args)
    require_admissible(cfg.profile)
    a = cfg.profile.decay_exponent
    abel = a >= 0.0

    table = _khat_sweep(cfg)
    name = cfg.basename or ("fig4_khat_bounds" if abel else "fig1_khat")
    if cfg.out_format == "json":
        table_to_json(table, _outpath(cfg, name, "json"))
    else:
        table_to_csv(table, _outpath(cfg, name, "csv"))

    if abel:
        # one curve per damping value (no extrapolation), long format
        rows = []
        for lam in cfg.policy.lambda_sequence:
            for k in table.k_grid:
                res = khat_at_lambda(cfg.profile, float(k), lam, cfg.policy)
                rows.append((lam, k, res.value, res.truncation_bound))
        _write_csv(
            _outpath(cfg, "fig2_khat_lambda", "csv"),
            ["lambda", "k", "khat", "truncation_bound"],
            rows,
        )

    if cfg.trace_k is not None:
        _write_trace_files(cfg)

    if table.failures:
        for k, msg in table.failures:
            print(f"khat failed at k = {k:g}: {msg}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def _write_trace_files(cfg: RunConfig):
    k = cfg.trace_k
    n_periods = cfg.trace_periods
    a = cfg.profile.decay_exponent
    lams = cfg.policy.lambda_sequence if a >= 0.0 else (0.0,)

    rows = []
    for lam in lams:
        res = khat_at_lambda(cfg.profile, k, lam, cfg.policy, trace_periods=n_periods)
        for i, d in res.per_period_trace:
            rows.append((lam, i, (i + 0.5) * 2.0 * np.pi / k, d))
    _write_csv(
        _outpath(cfg, "fig2_dk_periods", "csv"),
        ["lambda", "i", "r_i", "delta_khat"],
        rows,
    )

    lam_cmp = cfg.trace_lambda
    if lam_cmp is None:
        lam_cmp = lams[min(1, len(lams) - 1)]
    res = khat_at_lambda(cfg.profile, k, lam_cmp, cfg.policy, trace_periods=n_periods)
    rows = [
        (i, (i + 0.5) * 2.0 * np.pi / k, d, delta_khat_estimate(cfg.profile, i, k, lam_cmp))
        for i, d in res.per_period_trace
    ]
    _write_csv(
        _outpath(cfg, "fig3_dk_compare", "csv"),
        ["i", "r_i", "delta_numeric", "delta_estimate"],
        rows,
    )

    rows = []
    for I in (10, 20, 40, 80, 160):
        measured = abs(tail_integral_measured(cfg.profile, I, k, lam_cmp, cfg.policy))
        estimate = truncation_error_estimate(cfg.profile, I, k, lam_cmp)
        rows.append((I, 2.0 * np.pi * I / k, measured, estimate))
    _write_csv(
        _outpath(cfg, "fig3_truncation", "csv"),
        ["I", "r_I", "tail_measured", "tail_estimate"],
        rows,
    )


def parse_source_spec(spec: str, r: np.ndarray) -> RadialField:
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind == "gaussian":
        kv = _parse_kv(rest, "gaussian source")
        return gaussian_field(r, sigma=float(kv.get("sigma", 1.0)),
                              mass=float(kv["mass"]) if "mass" in kv else None)
    if kind == "plummer":
        kv = _parse_kv(rest, "plummer source")
        return plummer_field(r, a=float(kv.get("a", 1.0)), mass=float(kv.get("mass", 1.0)))
    if kind == "table":
        parts = rest.split(",")
        path = parts[0]
        tail = None
        for p in parts[1:]:
            key, _, val = p.partition("=")
            if key.strip() == "tail":
                tail = float(val)
        if not os.path.exists(path):
            raise ConfigError(f"source table not found: {path}")
        tabulated = field_from_csv(path, tail_exponent=tail)
        interp = tabulated.interpolator()
        return RadialField(r, interp(r), tail_exponent=tail)
    raise ConfigError(f"unknown source kind {kind!r}")


def cmd_solve(args) -> int:
    cfg = build_run_config(args, need_source=True)
    require_admissible(cfg.profile)
    r = cfg.r_grid.build()
    source = parse_source_spec(cfg.source, r)
    if getattr(args, "kmin", None) is not None:
        ks = cfg.k_grid.build()
    else:
        ks = default_k_grid(r, getattr(args, "knum", None))
    table = khat_grid(cfg.profile, ks, cfg.policy)
    if table.failures:
        for k, msg in table.failures:
            print(f"khat failed at k = {k:g}: {msg}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    solution = solve_poisson(cfg.profile, source, table, policy=cfg.policy)
    # round-trip residual, verified on the k range where the source's own
    # spectrum lives: past it a sampled field holds only interp artifacts,
    # which the operator division would amplify into a fake residual
    k_alive = spectral_support(source, table.k_grid, policy=cfg.policy)
    verify_table = restrict_table(table, 2.0 * k_alive)
    residual_field = apply_vofl(cfg.profile, solution, verify_table, policy=cfg.policy)
    mask = np.abs(source.values) > 1e-8 * np.max(np.abs(source.values))
    residual = relative_l2(-residual_field.values[mask], source.values[mask])

    name = cfg.basename or "solution"
    if cfg.out_format == "json":
        field_to_json(solution, _outpath(cfg, name, "json"),
                      provenance={"source": cfg.source, "residual_l2": residual})
    else:
        field_to_csv(solution, _outpath(cfg, name, "csv"), value_name="f")
    diag = {
        "source": cfg.source,
        "residual_relative_l2": residual,
        "k_grid": [float(ks[0]), float(ks[-1]), len(ks)],
        "table_failures": list(table.failures),
    }
    with open(_outpath(cfg, name + "_diagnostics", "json"), "w") as fh:
        json.dump(diag, fh, indent=1)
    print(f"residual relative L2: {residual:.3e}")
    return EXIT_OK


def cmd_validate(args) -> int:
    reports = run_suite(quick=args.quick, include_example2=args.example2)
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"[{status}] {rep.name}: measured={rep.measured:.8g} "
              f"expected={rep.expected:.8g} tol={rep.tolerance:g}")
        if rep.detail:
            print(f"       {rep.detail}")
    payload = reports_to_json(reports)
    out_dir = getattr(args, "out", None)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "validation_report.json")
        with open(path, "w") as fh:
            fh.write(payload)
        print(f"report written to {path}")
    ok = all(rep.passed for rep in reports)
    print(f"{sum(r.passed for r in reports)}/{len(reports)} checks passed")
    return EXIT_OK if ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--config", help="TOML configuration file")
    sub.add_argument("--profile", help="example1 | example2 | constant:s=.. | moebius:num0=..,num1=..,den=..")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--format", choices=("csv", "json"), help="output format")
    sub.add_argument("--basename", help="output file basename override")
    sub.add_argument("--kmin", type=float)
    sub.add_argument("--kmax", type=float)
    sub.add_argument("--knum", type=int)
    sub.add_argument("--rmin", type=float)
    sub.add_argument("--rmax", type=float)
    sub.add_argument("--rnum", type=int)
    sub.add_argument("--lambda", dest="lambdas",
                     help="comma-separated decreasing damping sequence")
    sub.add_argument("--no-extrapolation", action="store_true",
                     help="report the smallest-lambda value instead of extrapolating")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vofl",
        description="variable-order fractional Laplacian toolbox",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    k = sp.add_parser("kernel", help="tabulate s, K, p and the Green's function")
    _add_common(k)
    k.set_defaults(func=cmd_kernel)

    h = sp.add_parser("khat", help="kernel transform table and period traces")
    _add_common(h)
    h.add_argument("--trace", help="k=<value>: write per-period trace files")
    h.add_argument("--trace-lambda", type=float, dest="trace_lambda",
                   help="damping used for the estimate-vs-numeric trace")
    h.add_argument("--trace-periods", type=int, dest="trace_periods",
                   help="periods in the trace files (default 100)")
    h.set_defaults(func=cmd_khat)

    s = sp.add_parser("solve", help="solve the variable-order Poisson problem")
    _add_common(s)
    s.add_argument("--source",
                   help="gaussian:sigma=..,mass=.. | plummer:a=..,mass=.. | table:file.csv[,tail=..]")
    s.set_defaults(func=cmd_solve)

    v = sp.add_parser("validate", help="run the oracle check suite")
    v.add_argument("--quick", action="store_true", help="subset that finishes in seconds")
    v.add_argument("--example2", action="store_true",
                   help="include the damped-regime checks (slower)")
    v.add_argument("--out", help="directory for the JSON report")
    v.set_defaults(func=cmd_validate)

    return ap


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("VOFL_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ProfileError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
