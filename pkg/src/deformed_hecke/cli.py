"""Command line entry point: verification suites, eigenchecks, rate tables and simulation.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors or violated preconditions.  Output is JSON lines (or CSV) and
depends only on the flags and the seed.
"""

import argparse
import csv
import json
import random
import sys
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

from . import suites
from .hamiltonian import apply_H, bethe_phi_function
from .lattice import Params, StandingAssumptionError
from .sampling import random_distinct_scalars, random_params
from .scalar import format_scalar, scalar
from .stochastic import (
    RNG_NAME, StochasticParams, apply_generator, format_rate_table, psi_eigenvalue, psi_z,
    rate_table, simulate_many, total_variation_vs_oracle, uniformization_distribution,
    write_occupation_csv,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

DEFAULT_KS = {"algebra": (2, 3, 4), "theorem": (2, 3, 4), "bethe": (2, 3), "identities": (), "stochastic": (2, 3, 4)}
DEFAULT_TRIALS = {"algebra": 50, "theorem": 40, "bethe": 20, "identities": 100, "stochastic": 100}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    k: int = None
    params: Params = None
    s: object = None
    q: object = None
    trials: int = None
    seed: int = 0
    t: float = None
    out: str = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)


# parsing helpers -------------------------------------------------------------

def parse_scalar(text: str, name: str = "value"):
    try:
        return scalar(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"{name}: expected an exact rational like 3 or -2/5, got {text!r} ({exc})") from None


def parse_scalar_list(text: str, name: str) -> list:
    return [parse_scalar(v, name) for v in text.split(",") if v.strip()]


def parse_int_tuple(text: str, name: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated integers, got {text!r}") from None


def parse_params_text(text: str) -> tuple:
    parts = text.strip().split(":")
    if len(parts) != 4:
        raise UsageError(f"--params: expected alpha:beta:gamma:delta, got {text!r}")
    return tuple(parse_scalar(p, "--params") for p in parts)


def read_params_file(path: str) -> tuple:
    """A JSON object ``{alpha, beta, gamma, delta}``, a JSON list, or ``a:b:c:d`` text."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"--params-file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return parse_params_text(text)
    if isinstance(data, dict):
        try:
            data = [data[key] for key in ("alpha", "beta", "gamma", "delta")]
        except KeyError as exc:
            raise UsageError(f"--params-file: missing key {exc}") from None
    if not isinstance(data, list) or len(data) != 4:
        raise UsageError("--params-file: expected four values alpha, beta, gamma, delta")
    values = []
    for v in data:
        if isinstance(v, float):
            raise UsageError(f"--params-file: decimal value {v!r} rejected; write it as num/den")
        values.append(parse_scalar(str(v), "--params-file"))
    return tuple(values)


def build_params(args, k: int):
    values = None
    if getattr(args, "params", None):
        values = parse_params_text(args.params)
    elif getattr(args, "params_file", None):
        values = read_params_file(args.params_file)
    if values is None:
        return None
    try:
        return Params(*values, k)
    except StandingAssumptionError as exc:
        raise UsageError(f"parameters violate the standing assumption: {exc}") from None


# output ----------------------------------------------------------------------

class Writer:
    """Single ordered writer for JSON lines or CSV."""

    def __init__(self, stream, fmt):
        self.stream, self.fmt, self.rows = stream, fmt, []

    def emit(self, record):
        if self.fmt == "json":
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")
        else:
            self.rows.append(record)

    def close(self):
        if self.fmt == "csv" and self.rows:
            columns = sorted({key for rec in self.rows for key in rec})
            writer = csv.writer(self.stream, lineterminator="\n")
            writer.writerow(columns)
            for rec in self.rows:
                writer.writerow([_csv_cell(rec.get(c, "")) for c in columns])
        self.stream.flush()


def _csv_cell(value):
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise UsageError(f"--out: {exc}") from None


# commands --------------------------------------------------------------------

def cmd_verify(args) -> int:
    names = suites.SUITE_NAMES if args.suite == "all" else (args.suite,)
    k_max = args.k or max(max(DEFAULT_KS[n], default=2) for n in names)
    params = build_params(args, k_max)
    stream, close = open_output(args.out)
    writer = Writer(stream, args.format)
    failed = total = 0
    try:
        for name in names:
            ks = (args.k,) if args.k else DEFAULT_KS[name]
            trials = args.trials if args.trials is not None else DEFAULT_TRIALS[name]
            records = suites.run_suite(name, ks, trials, args.seed, params, args.m_max)
            suite_failed = sum(not r["pass"] for r in records)
            for rec in records:
                writer.emit(rec)
            writer.emit({"schema": suites.SCHEMA, "suite": name, "check": "summary", "checks": len(records),
                         "failed": suite_failed, "seed": args.seed, "pass": suite_failed == 0})
            failed += suite_failed
            total += len(records)
    finally:
        writer.close()
        if close:
            stream.close()
    if failed:
        print(f"{failed} of {total} checks failed", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _stochastic_params(args) -> StochasticParams:
    sp = StochasticParams(parse_scalar(args.s, "--s"), parse_scalar(args.q, "--q"))
    if 1 - sp.q + sp.s == 0:
        raise UsageError("1 - q + s = 0 is not allowed")
    return sp


def cmd_rates(args) -> int:
    sp = _stochastic_params(args)
    if args.c_max < 1:
        raise UsageError("--c-max must be at least 1")
    try:
        table = rate_table(args.c_max, sp)
    except ZeroDivisionError as exc:
        raise UsageError(f"rates undefined for these (s, q): {exc}") from None
    stream, close = open_output(args.out)
    writer = Writer(stream, args.format)
    for row in format_rate_table(table):
        writer.emit({"schema": suites.SCHEMA, **row})
    writer.close()
    if close:
        stream.close()
    negative = [key for key, v in table.items() if v < 0]
    if negative:
        print(f"negative rates at (c, r) = {negative}: not a stochastic system", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _initial(args):
    if args.initial:
        initial = parse_int_tuple(args.initial, "--initial")
    else:
        initial = (0,) * (args.k or 1)
    if not initial or list(initial) != sorted(initial, reverse=True):
        raise UsageError(f"--initial must be weakly decreasing, got {initial}")
    if args.k and len(initial) != args.k:
        raise UsageError(f"--initial has {len(initial)} particles but --k is {args.k}")
    return initial


def cmd_simulate(args) -> int:
    sp = _stochastic_params(args)
    initial = _initial(args)
    k = len(initial)
    if args.t < 0 or args.n < 1:
        raise UsageError("--t must be nonnegative and --n positive")
    try:
        if not sp.is_stochastic(k):
            raise UsageError("these (s, q) give a negative jump rate")
    except ZeroDivisionError as exc:
        raise UsageError(f"rates undefined for these (s, q): {exc}") from None
    trajectories = simulate_many(initial, args.t, sp, args.n, args.seed)

    if args.out:
        stream, close = open_output(args.out)
        if args.format == "csv":
            samples = [args.t * i / args.samples for i in range(args.samples + 1)]
            write_occupation_csv(stream, trajectories, samples)
        else:
            for n, traj in enumerate(trajectories):
                for rec in traj.json_records():
                    stream.write(json.dumps({"trajectory": n, **rec}, sort_keys=True) + "\n")
        if close:
            stream.close()

    finals = [traj.final for traj in trajectories]
    jumps = Counter(traj.jump_count() for traj in trajectories)
    marginals = [Counter(x[i] for x in finals) for i in range(k)]
    summary = {
        "schema": suites.SCHEMA, "kind": "simulation_summary", "initial": list(initial), "t": args.t,
        "n": args.n, "seed": args.seed, "s": format_scalar(sp.s), "q": format_scalar(sp.q), "rng": RNG_NAME,
        "mean_jumps": sum(n * c for n, c in jumps.items()) / args.n,
        "jump_count_histogram": {str(n): jumps[n] for n in sorted(jumps)},
        "final_position_marginals": [{str(site): m[site] for site in sorted(m)} for m in marginals],
    }
    if args.compare:
        dist = uniformization_distribution(initial, args.t, sp, args.max_displacement, max_truncated_mass=1.0)
        summary["uniformization"] = {
            "max_displacement": args.max_displacement, "truncated_mass": dist.truncated_mass,
            "rate_bound": dist.rate_bound, "steps": dist.steps,
            "total_variation": total_variation_vs_oracle(finals, dist),
        }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _eigen_points(k, lo=-3, hi=3):
    return [x for x in product(range(hi, lo - 1, -1), repeat=k) if list(x) == sorted(x, reverse=True)]


def cmd_eigen(args) -> int:
    rng = random.Random(f"eigen:{args.which}:{args.seed}")
    k = args.k
    record = {"schema": suites.SCHEMA, "check": f"{args.which}_eigen", "k": k, "seed": args.seed}
    points = _eigen_points(k)
    if args.which == "phi":
        params = build_params(args, k) or random_params(rng, k)
        p = parse_scalar_list(args.p, "--p") if args.p else random_distinct_scalars(rng, k)
        if len(p) != k:
            raise UsageError(f"--p needs {k} values")
        try:
            phi = bethe_phi_function(p, params)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        eigenvalue = sum(p)
        residuals = [apply_H(phi, params)(x) - eigenvalue * phi(x) for x in points]
        record.update(params=[format_scalar(v) for v in params.as_tuple()], p=[format_scalar(v) for v in p])
    else:
        if args.s is not None and args.q is not None:
            sp = _stochastic_params(args)
        else:
            sp, _ = suites.sample_psi_setup(rng, k)
        if args.z:
            z = parse_scalar_list(args.z, "--z")
        else:
            exclude = [scalar(1)] + ([1 / sp.nu] if sp.nu else [])
            z = random_distinct_scalars(rng, k, nonzero=False, exclude=exclude)
        if len(z) != k:
            raise UsageError(f"--z needs {k} values")
        try:
            eigenvalue = psi_eigenvalue(z, sp)
            residuals = [apply_generator(lambda y: psi_z(z, y, sp), x, sp) - eigenvalue * psi_z(z, x, sp)
                         for x in points]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(str(exc)) from None
        record.update(s=format_scalar(sp.s), q=format_scalar(sp.q), z=[format_scalar(v) for v in z])
    nonzero = [{"x": list(x), "residual": format_scalar(r)} for x, r in zip(points, residuals) if r != 0]
    record.update(eigenvalue=format_scalar(eigenvalue), points=len(points), nonzero_residuals=nonzero,
                  max_abs_residual=format_scalar(max((abs(r) for r in residuals), default=0)),
                  **{"pass": not nonzero})
    stream, close = open_output(args.out)
    writer = Writer(stream, args.format)
    writer.emit(record)
    writer.close()
    if close:
        stream.close()
    return EXIT_OK if not nonzero else EXIT_FAILED


# argument parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deformed-hecke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output path (default stdout)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    def hecke_params(p):
        group = p.add_mutually_exclusive_group()
        group.add_argument("--params", help="alpha:beta:gamma:delta as exact rationals, e.g. 1/2:1:-3:2")
        group.add_argument("--params-file", help="JSON {alpha,beta,gamma,delta}, JSON list, or a:b:c:d text")

    v = sub.add_parser("verify", help="run an exact verification suite")
    v.add_argument("suite", choices=suites.SUITE_NAMES + ("all",))
    v.add_argument("--k", type=int, help="number of particles (default: suite-specific range)")
    v.add_argument("--trials", type=int, help="trials per k / per identity")
    v.add_argument("--m-max", type=int, default=6, help="largest m for the identity suite")
    hecke_params(v)
    common(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("rates", help="print the jump-rate table")
    r.add_argument("--c-max", type=int, default=4)
    r.add_argument("--s", required=True)
    r.add_argument("--q", required=True)
    common(r)
    r.set_defaults(func=cmd_rates)

    s = sub.add_parser("simulate", help="Gillespie simulation of the particle system")
    s.add_argument("--initial", help="comma-separated weakly decreasing positions, e.g. 0,0")
    s.add_argument("--k", type=int, help="particles at the origin when --initial is absent")
    s.add_argument("--s", required=True)
    s.add_argument("--q", required=True)
    s.add_argument("--t", type=float, required=True, help="time horizon")
    s.add_argument("--n", type=int, default=1, help="number of trajectories")
    s.add_argument("--samples", type=int, default=10, help="sample intervals for the CSV export")
    s.add_argument("--compare", action="store_true", help="compare final states with uniformization")
    s.add_argument("--max-displacement", type=int, default=8)
    common(s)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("eigen", help="exact Bethe eigenrelation residuals on [-3,3]^k")
    e.add_argument("which", choices=("phi", "psi"))
    e.add_argument("--k", type=int, default=2)
    e.add_argument("--p", help="spectral parameters for phi, comma-separated")
    e.add_argument("--z", help="spectral parameters for psi, comma-separated")
    e.add_argument("--s")
    e.add_argument("--q")
    hecke_params(e)
    common(e)
    e.set_defaults(func=cmd_eigen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("--k must be positive")
    if getattr(args, "trials", None) is not None and args.trials < 1:
        parser.error("--trials must be positive")
    try:
        return args.func(args)
    except (UsageError, StandingAssumptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
