"""Command-line front end.

Subcommands: transform, sinogram, recover, tower, ballmass, basis,
measure, selftest.  Options may come from a config file (--config) in a
line-based ``key = value`` format with ``[section]`` headers; per-flag
equivalents override it, and unknown sections or keys abort before any
computation.  All floating-point output is printed at 17 significant
digits so reruns are byte-comparable.

Exit codes: 0 success, 1 validation error, 2 numeric acceptance failure
in selftest.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .balls import DualBall
from .functionals import ExponentialFunctional
from .hermite import HermiteBasis
from .measures import GaussianSampler, ball_mass_estimate
from .support import BumpFunction, Sinogram, classical_sinogram, sinogram_gen, \
    support_recover
from .tower import AffineSubspace, CoordVec, EigenSchedule
from .transform import (MAX_QUAD_DIMS, QuadratureSpec, f_n_eval, radon_closed,
                        radon_mc, radon_rn_quadrature)

__all__ = ["main", "RunConfig"]


class CliError(Exception):
    """Validation problem; rendered as a one-line diagnostic, exit 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# spec-string parsing
# ---------------------------------------------------------------------------

def _parse_coordvec(text: str, flag: str) -> CoordVec:
    try:
        return CoordVec.from_text(text)
    except ValueError as exc:
        raise CliError(f"invalid coordvec for {flag}: {exc}") from None


def _parse_phi(text: str) -> ExponentialFunctional:
    try:
        return ExponentialFunctional.from_text(text)
    except ValueError as exc:
        raise CliError(f"invalid functional for --phi: {exc}") from None


def _parse_grid(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"invalid grid for {flag}: expected a:b:steps, got {text!r}")
    try:
        a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"invalid grid for {flag}: {exc}") from None
    if steps < 1:
        raise CliError(f"invalid grid for {flag}: steps must be >= 1")
    return np.linspace(a, b, steps)


def _parse_kv(text: str, flag: str) -> dict[str, str]:
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise CliError(f"invalid {flag} field {part!r}: expected key=value")
        out[key.strip()] = value.strip()
    return out


@dataclass(frozen=True)
class SubspaceSpec:
    subspace: AffineSubspace
    alpha: float | None  # set for hyperplane specs
    v: CoordVec | None


def _parse_subspace(text: str) -> SubspaceSpec:
    kind, sep, rest = text.partition(":")
    if not sep:
        raise CliError(f"invalid subspace spec {text!r}: expected kind:fields")
    fields = _parse_kv(rest, "--subspace")
    try:
        if kind == "hyperplane":
            _require_keys(fields, {"alpha", "v"}, "hyperplane subspace")
            alpha = float(fields["alpha"])
            v = CoordVec.from_text(fields["v"])
            return SubspaceSpec(AffineSubspace.hyperplane(alpha, v), alpha, v)
        if kind == "affine":
            _require_keys(fields, {"a", "block", "proj", "tail"}, "affine subspace")
            anchor = CoordVec.from_text(fields["a"])
            block = int(fields["block"])
            proj = np.loadtxt(fields["proj"], ndmin=2)
            if fields["tail"] not in ("in", "out"):
                raise ValueError(f"tail must be 'in' or 'out', got {fields['tail']!r}")
            sub = AffineSubspace(anchor, block, proj, fields["tail"] == "in")
            return SubspaceSpec(sub, None, None)
    except CliError:
        raise
    except (ValueError, OSError) as exc:
        raise CliError(f"invalid subspace spec: {exc}") from None
    raise CliError(f"unknown subspace kind {kind!r} (expected hyperplane or affine)")


def _require_keys(fields: dict, wanted: set[str], what: str):
    unknown = set(fields) - wanted
    if unknown:
        raise CliError(f"unknown key {sorted(unknown)[0]!r} in {what} spec")
    missing = wanted - set(fields)
    if missing:
        raise CliError(f"missing key {sorted(missing)[0]!r} in {what} spec")


def _parse_schedule(text: str) -> EigenSchedule:
    if text == "n+1":
        return EigenSchedule()
    kind, sep, rest = text.partition(":")
    if kind == "linear" and sep:
        try:
            slope_s, offset_s = rest.split(",")
            return EigenSchedule.linear(float(slope_s), float(offset_s))
        except ValueError as exc:
            raise CliError(f"invalid --schedule: {exc}") from None
    raise CliError(f"unknown eigenvalue schedule {text!r} (expected n+1 or linear:a,b)")


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Parsed config file: a [common] section plus per-command sections."""

    common: dict[str, str]
    sections: dict[str, dict[str, str]]

    COMMON_KEYS = ("schedule", "seed", "samples", "dim", "threads", "format",
                   "tol")

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        common: dict[str, str] = {}
        sections: dict[str, dict[str, str]] = {}
        current = common
        current_name = "common"
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CliError(f"cannot read config {path!r}: {exc}") from None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current_name = line[1:-1].strip()
                if current_name == "common":
                    current = common
                else:
                    current = sections.setdefault(current_name, {})
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise CliError(
                    f"config line {lineno} is not 'key = value': {line!r}")
            key = key.strip()
            if key in current:
                raise CliError(f"duplicate config key {key!r} in [{current_name}]")
            current[key] = value.strip()
        for key in common:
            if key not in cls.COMMON_KEYS:
                raise CliError(f"unknown config key {key!r} in [common]")
        return cls(common, sections)


def _convert_for_action(parser: argparse.ArgumentParser, key: str, raw: str,
                        section: str):
    for action in parser._actions:
        if action.dest != key:
            continue
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            if raw.lower() in ("true", "yes", "1"):
                return True
            if raw.lower() in ("false", "no", "0"):
                return False
            raise CliError(f"config key {key!r} in [{section}] must be boolean")
        value = action.type(raw) if action.type else raw
        if action.choices is not None and value not in action.choices:
            raise CliError(
                f"config key {key!r} in [{section}] must be one of "
                f"{sorted(action.choices)}")
        return value
    raise CliError(f"unknown config key {key!r} in [{section}]")


def _apply_config(config: RunConfig, targets: dict[str, argparse.ArgumentParser]):
    for command, section in config.sections.items():
        if command not in targets:
            raise CliError(f"unknown config section [{command}]")
        parser = targets[command]
        for key, raw in section.items():
            if key == "config":
                raise CliError("config files cannot set 'config'")
            parser.set_defaults(**{key: _convert_for_action(parser, key, raw, command)})
    for key, raw in config.common.items():
        for command, parser in targets.items():
            if any(a.dest == key for a in parser._actions):
                parser.set_defaults(**{key: _convert_for_action(parser, key, raw, "common")})


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _write_table(args, header: list[str], rows: list[list[str]]):
    if getattr(args, "format", "csv") == "gnuplot":
        lines = ["# " + " ".join(header)] + [" ".join(r) for r in rows]
    else:
        lines = [",".join(header)] + [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    _write_text(args, text)


def _write_text(args, text: str):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _validate_positive(args, names):
    for name in names:
        value = getattr(args, name, None)
        if value is not None and value <= 0:
            raise CliError(f"{name} must be positive, got {value}")


def _require(args, dest: str, flag: str):
    value = getattr(args, dest, None)
    if value is None:
        raise CliError(f"missing required option {flag} (flag or config)")
    return value


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_transform(args) -> int:
    _validate_positive(args, ("seed", "samples", "dim", "threads", "nodes"))
    phi = _parse_phi(_require(args, "phi", "--phi"))
    spec = _parse_subspace(_require(args, "subspace", "--subspace"))
    if args.method == "closed":
        res = radon_closed(phi, spec.subspace)
    elif args.method == "mc":
        dim = args.dim or max(phi.max_index, spec.subspace.block_dim)
        try:
            res = radon_mc(phi, spec.subspace, dim, args.samples, args.seed,
                           threads=args.threads)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    else:  # quad
        if spec.alpha is None:
            raise CliError("method 'quad' needs a hyperplane subspace spec")
        n = max(phi.max_index, spec.v.max_index)
        if n - 1 > MAX_QUAD_DIMS:
            raise CliError(
                f"quad method limited to supports within {MAX_QUAD_DIMS + 1} "
                f"coordinates, got {n}")
        res = radon_rn_quadrature(
            lambda pts: phi.evaluate_dense(pts, n),
            spec.alpha, spec.v.to_dense(n), QuadratureSpec(args.nodes))
    _write_table(args, ["method", "re", "im", "stderr", "samples_or_nodes"],
                 [[res.method, _fmt(res.value.real), _fmt(res.value.imag),
                   _fmt(res.stderr), str(res.samples_or_nodes)]])
    return 0


def _sinogram_table(args, sino: Sinogram) -> int:
    header = list(Sinogram.CSV_HEADER)
    rows = [[r.v.to_text(), _fmt(r.alpha), _fmt(r.value.real), _fmt(r.value.imag),
             _fmt(r.stderr), r.method] for r in sino.rows]
    _write_table(args, header, rows)
    return 0


def _cmd_sinogram(args) -> int:
    _validate_positive(args, ("seed", "samples", "threads", "nodes", "angles"))
    offsets = _parse_grid(args.offsets, "--offsets")
    if args.bump:
        fields = _parse_kv(args.bump, "--bump")
        _require_keys(fields, {"radius", "cx", "cy"}, "bump")
        try:
            bump = BumpFunction(float(fields["radius"]),
                                (float(fields["cx"]), float(fields["cy"])))
        except ValueError as exc:
            raise CliError(f"invalid --bump: {exc}") from None
        angles = [k * math.pi / args.angles for k in range(args.angles)]
        sino = classical_sinogram(bump, angles, offsets, QuadratureSpec(args.nodes))
        return _sinogram_table(args, sino)
    if not args.phi:
        raise CliError("sinogram needs either --phi or --bump")
    phi = _parse_phi(args.phi)
    directions = [_parse_coordvec(part, "--directions")
                  for part in args.directions.split(",")]
    try:
        sino = sinogram_gen(phi, directions, offsets, args.method,
                            truncation_dim=args.dim, count=args.samples,
                            seed=args.seed, spec=QuadratureSpec(args.nodes),
                            threads=args.threads)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return _sinogram_table(args, sino)


def _cmd_recover(args) -> int:
    _require(args, "infile", "--in")
    try:
        with open(args.infile, newline="") as fh:
            sino = Sinogram.from_csv(fh)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read sinogram {args.infile!r}: {exc}") from None
    if args.tol is not None and args.tol <= 0:
        raise CliError(f"tolerance must be positive, got {args.tol}")
    constraints = support_recover(sino, args.tol)
    rows = [[c.v.to_text(), _fmt(c.alpha_lo), _fmt(c.alpha_hi),
             "true" if c.degenerate else "false"] for c in constraints]
    _write_table(args, ["v", "alpha_lo", "alpha_hi", "degenerate"], rows)
    return 0


def _cmd_tower(args) -> int:
    _validate_positive(args, ("n_max",))
    phi = _parse_phi(_require(args, "phi", "--phi"))
    x = _parse_coordvec(_require(args, "x", "--x"), "--x")
    exact = phi.evaluate(x)
    rows = []
    for n in range(1, args.n_max + 1):
        val = f_n_eval(phi, x, n)
        rows.append([str(n), _fmt(val.real), _fmt(val.imag), _fmt(abs(val - exact))])
    _write_table(args, ["n", "re", "im", "abs_err"], rows)
    return 0


def _cmd_ballmass(args) -> int:
    _validate_positive(args, ("p", "radius", "dim", "samples", "seed", "threads"))
    center = _parse_coordvec(args.center, "--center")
    schedule = _parse_schedule(args.schedule)
    try:
        ball = DualBall(args.p, center, args.radius)
        est, stderr = ball_mass_estimate(ball, args.dim, args.samples, args.seed,
                                         schedule=schedule, threads=args.threads)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _write_table(args, ["estimate", "stderr", "samples", "dim"],
                 [[_fmt(est), _fmt(stderr), str(args.samples), str(args.dim)]])
    return 0


def _cmd_basis_dump(args) -> int:
    _require(args, "n", "--n")
    _validate_positive(args, ("n",))
    grid = _parse_grid(_require(args, "grid", "--grid"), "--grid")
    try:
        basis = HermiteBasis(max_index=args.n)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    columns = [grid] + [basis.eval(n, grid) for n in range(1, args.n + 1)]
    header = ["t"] + [f"phi_{n}" for n in range(1, args.n + 1)]
    rows = [[_fmt(col[i]) for col in columns] for i in range(len(grid))]
    _write_table(args, header, rows)
    return 0


def _cmd_measure_sample(args) -> int:
    _require(args, "samples", "--n")
    _require(args, "dim", "--dim")
    _validate_positive(args, ("samples", "dim", "seed", "threads"))
    spec = _parse_subspace(_require(args, "subspace", "--subspace"))
    try:
        sampler = GaussianSampler(spec.subspace, args.dim, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    matrix = sampler.sample_block(args.samples, threads=args.threads)
    header = [f"x{j}" for j in range(1, args.dim + 1)]
    rows = [[_fmt(v) for v in row] for row in matrix]
    _write_table(args, header, rows)
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_criteria
    failures = run_criteria(only=args.only, out=sys.stdout)
    return 2 if failures else 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def _add_common(parser, *, out=True):
    parser.add_argument("--config", help="config file with [section] key = value lines")
    if out:
        parser.add_argument("--out", help="output path (default stdout)")
        parser.add_argument("--format", choices=["csv", "gnuplot"], default="csv")


def build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog="gaussradon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    targets: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("transform", help="one transform value by a chosen route")
    p.add_argument("--phi")
    p.add_argument("--subspace")
    p.add_argument("--method", choices=["closed", "mc", "quad"], default="closed")
    p.add_argument("--n", dest="samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--dim", type=int)
    p.add_argument("--nodes", type=int, default=40)
    p.add_argument("--threads", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_transform)
    targets["transform"] = p

    p = sub.add_parser("sinogram", help="tabulate the transform over directions x offsets")
    p.add_argument("--phi")
    p.add_argument("--directions", default="1:1.0", help="comma-separated coordvecs")
    p.add_argument("--offsets", default="-2:2:41", help="grid a:b:steps")
    p.add_argument("--method", choices=["closed", "mc", "quad"], default="closed")
    p.add_argument("--bump", help="planar bump spec radius=..,cx=..,cy=..")
    p.add_argument("--angles", type=int, default=36)
    p.add_argument("--n", dest="samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--dim", type=int)
    p.add_argument("--nodes", type=int, default=301)
    p.add_argument("--threads", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_sinogram)
    targets["sinogram"] = p

    p = sub.add_parser("recover", help="per-direction support slabs from a sinogram CSV")
    p.add_argument("--in", dest="infile")
    p.add_argument("--tol", type=float)
    _add_common(p)
    p.set_defaults(func=_cmd_recover)
    targets["recover"] = p

    p = sub.add_parser("tower", help="truncation-tower values f_n against the pointwise limit")
    p.add_argument("--phi")
    p.add_argument("--x")
    p.add_argument("--n-max", dest="n_max", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=_cmd_tower)
    targets["tower"] = p

    p = sub.add_parser("ballmass", help="Monte Carlo mass of a dual-norm ball")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--center", default="")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--n", dest="samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--schedule", default="n+1")
    _add_common(p)
    p.set_defaults(func=_cmd_ballmass)
    targets["ballmass"] = p

    p = sub.add_parser("basis", help="concrete eigenbasis utilities")
    bsub = p.add_subparsers(dest="subcommand", required=True)
    pd = bsub.add_parser("dump", help="CSV of t, phi_1..phi_N over a grid")
    pd.add_argument("--n", type=int)
    pd.add_argument("--grid", help="grid a:b:steps")
    _add_common(pd)
    pd.set_defaults(func=_cmd_basis_dump)
    targets["basis"] = pd

    p = sub.add_parser("measure", help="sampling from affine-subspace measures")
    msub = p.add_subparsers(dest="subcommand", required=True)
    pm = msub.add_parser("sample", help="draw a sample matrix, one coordinate per column")
    pm.add_argument("--subspace")
    pm.add_argument("--n", dest="samples", type=int)
    pm.add_argument("--dim", type=int)
    pm.add_argument("--seed", type=int, default=1)
    pm.add_argument("--threads", type=int, default=1)
    _add_common(pm)
    pm.set_defaults(func=_cmd_measure_sample)
    targets["measure"] = pm

    p = sub.add_parser("selftest", help="run the numeric acceptance checks")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    _add_common(p, out=False)
    p.set_defaults(func=_cmd_selftest)
    targets["selftest"] = p

    return parser, targets


def run(argv: list[str]) -> int:
    parser, targets = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        _apply_config(RunConfig.load(args.config), targets)
        args = parser.parse_args(argv)
    return args.func(args)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else list(argv))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
