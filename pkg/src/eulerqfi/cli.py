"""Command-line front end: ``eulerqfi <command> ...``.

Exit codes: 0 success (singular QFIMs included), 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import io
from .anticoherence import DEFAULT_TOL, anticoherence_order
from .baselines import comparison_rows, noon_state
from .designer import psi4_family, solve_support
from .errors import NumericalError, SingularQfimError, ValidationError
from .majorana import constellation_to_state, state_to_constellation
from .polyhedra import (
    SOLIDS,
    compose,
    dual,
    orbit,
    platonic,
    rotation_group,
    tetrahedral_family,
    truncated_tetrahedron,
)
from .qfim import crb, qfim, singularity_scan
from .spin import KINDS, make_state, RotationSpec

log = logging.getLogger("eulerqfi")

PARAM_KINDS = {"zyz": "euler-zyz", "xyz": "euler-xyz", "axis-angle": "axis-angle"}
CATALOG = SOLIDS + tuple(f"dual-{s}" for s in SOLIDS) + (
    "truncated-tetrahedron",
    "truncated-dual-tetrahedron",
)


def _floats(text: str, count: int | None = None, what: str = "values") -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse {what} {text!r}: {exc}") from exc
    if count is not None and len(vals) != count:
        raise ValidationError(f"expected {count} comma-separated {what}, got {len(vals)}")
    return vals


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse {what} {text!r}: {exc}") from exc


def _angles(args, vals):
    return [np.deg2rad(v) for v in vals] if args.degrees else list(vals)


def _kind(name: str) -> str:
    if name in PARAM_KINDS:
        return PARAM_KINDS[name]
    if name in KINDS:
        return name
    raise ValidationError(f"unknown parametrization {name!r}; expected one of {tuple(PARAM_KINDS)}")


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_state(path: str):
    return io.state_from_dict(io.load_json(path))


# -- commands ----------------------------------------------------------------------


def _solid(name: str):
    if name in SOLIDS:
        return platonic(name)
    if name.startswith("dual-") and name[5:] in SOLIDS:
        return dual(name[5:])
    if name == "truncated-tetrahedron":
        return truncated_tetrahedron("tetrahedron")
    if name == "truncated-dual-tetrahedron":
        return truncated_tetrahedron("dual")
    raise ValidationError(f"unknown solid {name!r}; expected one of {CATALOG}")


def cmd_state(args) -> int:
    if args.coeffs is not None:
        try:
            amps = [complex(t.replace(" ", "")) for t in args.coeffs.split(",")]
        except ValueError as exc:
            raise ValidationError(f"cannot parse coefficients: {exc}") from exc
        state = make_state(len(amps) - 1, amps, normalize=args.normalize)
    elif args.constellation:
        state = constellation_to_state(io.constellation_from_dict(io.load_json(args.constellation)))
    elif args.solid:
        c = _solid(args.solid)
        state = constellation_to_state(compose([(c, args.mult)]))
    elif args.psi4 is not None:
        if args.csq is None:
            raise ValidationError("--psi4 needs --csq")
        phases = _angles(args, _floats(args.phases, 3, "phases")) if args.phases else (0.0, 0.0, 0.0)
        state = psi4_family(args.psi4, args.csq, phases)
    elif args.noon is not None:
        state = noon_state(args.noon)
    elif args.tetrahedral:
        m, n, i, j = (_ints(args.tetrahedral, "tetrahedral multiplicities") + [0, 0])[:4]
        state = constellation_to_state(tetrahedral_family(m, n, i, j))
    else:  # --orbit
        if not args.seed_vector:
            raise ValidationError("--orbit needs --seed-vector x,y,z")
        seed = np.array(_floats(args.seed_vector, 3, "seed components"))
        if np.linalg.norm(seed) == 0:
            raise ValidationError("seed vector must be nonzero")
        c = orbit(rotation_group(args.orbit), seed / np.linalg.norm(seed))
        state = constellation_to_state(compose([(c, args.mult)]))
    report = anticoherence_order(state, t_max=2)
    _emit(args, io.dumps(io.state_to_dict(state)))
    print(
        f"N={state.n} norm={io.fmt(np.linalg.norm(state.amplitudes))} order={report.order}",
        file=sys.stderr,
    )
    return 0


def cmd_qfim(args) -> int:
    state = _load_state(args.state)
    spec = RotationSpec(_kind(args.param), tuple(_angles(args, _floats(args.angles, 3, "angles"))))
    report = qfim(state, spec, descriptor=args.state, cross_check=args.cross_check)
    try:
        report = crb(report)
    except SingularQfimError as exc:
        print(f"singular QFIM: det={exc.determinant:.3g} below {exc.threshold:.3g}", file=sys.stderr)
    _emit(args, io.dumps(io.qfim_report_to_dict(report)))
    return 0


def _grid_axis(args, text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) == 1:
        vals = _floats(parts[0], None, "grid values")
    elif len(parts) == 3:
        try:
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ValidationError(f"bad grid axis {text!r}: {exc}") from exc
        if num < 1:
            raise ValidationError(f"grid axis {text!r} needs at least one point")
        vals = list(np.linspace(start, stop, num))
    else:
        raise ValidationError(f"grid axis {text!r} must be start:stop:num or a comma list")
    return np.asarray(_angles(args, vals), dtype=float)


def cmd_sweep(args) -> int:
    state = _load_state(args.state)
    if len(args.grid) != 3:
        raise ValidationError("--grid must be given exactly three times (one per angle)")
    axes = [_grid_axis(args, g) for g in args.grid]
    if args.jobs < 1:
        raise ValidationError("--jobs must be >= 1")
    table = singularity_scan(state, _kind(args.param), axes, workers=args.jobs)
    _emit(args, io.scan_to_csv(table))
    return 0


def cmd_check(args) -> int:
    state = _load_state(args.state)
    if args.tol <= 0:
        raise ValidationError("--tol must be positive")
    report = anticoherence_order(state, t_max=args.tmax, tol=args.tol, seed=args.seed)
    _emit(args, io.dumps(io.moment_report_to_dict(report)))
    return 0


def cmd_majorana(args) -> int:
    data = io.load_json(args.input)
    if args.direction == "to-points":
        out = io.constellation_to_dict(state_to_constellation(io.state_from_dict(data)))
    else:
        out = io.state_to_dict(constellation_to_state(io.constellation_from_dict(data)))
    _emit(args, io.dumps(out))
    return 0


def cmd_compare(args) -> int:
    t1, t2, big = _angles(args, [args.theta1, args.theta2, args.big_theta])
    _emit(args, io.comparison_to_csv(comparison_rows(args.n, t1, t2, big)))
    return 0


def cmd_solve(args) -> int:
    sol = solve_support(args.n, _ints(args.support, "support"))
    _emit(args, io.dumps(io.support_solution_to_dict(sol)))
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write here instead of stdout")
    common.add_argument("--degrees", action="store_true", help="read angles in degrees")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="eulerqfi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("state", parents=[common], help="build a state and write its JSON")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", help="comma list of complex amplitudes c_0..c_N")
    src.add_argument("--constellation", metavar="FILE", help="constellation JSON")
    src.add_argument("--solid", metavar="NAME", help=f"one of {', '.join(CATALOG)}")
    src.add_argument("--psi4", type=int, metavar="N", help="four-component family member")
    src.add_argument("--noon", type=int, metavar="N")
    src.add_argument("--tetrahedral", metavar="m,n[,i,j]", help="tetrahedron/dual/truncated composition")
    src.add_argument("--orbit", choices=("T", "O", "I"), help="group orbit of --seed-vector")
    s.add_argument("--normalize", action="store_true", help="rescale --coeffs to unit norm")
    s.add_argument("--mult", type=int, default=1, help="multiplicity for --solid/--orbit")
    s.add_argument("--csq", type=float, help="|c_N|^2 for --psi4")
    s.add_argument("--phases", help="three phases for --psi4")
    s.add_argument("--seed-vector", help="x,y,z for --orbit")
    s.set_defaults(func=cmd_state)

    q = sub.add_parser("qfim", parents=[common], help="QFIM and Cramer-Rao bound")
    q.add_argument("state", help="state JSON")
    q.add_argument("--param", default="zyz", help="zyz, xyz or axis-angle")
    q.add_argument("--angles", required=True, help="three comma-separated angles")
    q.add_argument("--cross-check", action="store_true", help="also compute the SLD form")
    q.set_defaults(func=cmd_qfim)

    w = sub.add_parser("sweep", parents=[common], help="det and Tr[I^-1] over an angle grid (CSV)")
    w.add_argument("state")
    w.add_argument("--param", default="zyz")
    w.add_argument("--grid", action="append", default=[], help="start:stop:num or a comma list; repeat 3x")
    w.add_argument("--jobs", type=int, default=1, help="worker threads")
    w.set_defaults(func=cmd_sweep)

    c = sub.add_parser("check", parents=[common], help="anticoherence order")
    c.add_argument("state")
    c.add_argument("--tmax", type=int, default=2)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--seed", type=int, default=0, help="probe-direction seed")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("majorana", parents=[common], help="state <-> constellation")
    m.add_argument("input")
    m.add_argument("--direction", choices=("to-points", "to-state"), default="to-points")
    m.set_defaults(func=cmd_majorana)

    k = sub.add_parser("compare", parents=[common], help="multiparameter vs three-NOON bounds (CSV)")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--theta1", type=float, default=0.0)
    k.add_argument("--theta2", type=float, default=0.0)
    k.add_argument("--big-theta", type=float, default=np.pi / 2)
    k.set_defaults(func=cmd_compare)

    v = sub.add_parser("solve", parents=[common], help="populations on a given support")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--support", required=True, help="comma list of indices")
    v.set_defaults(func=cmd_solve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
