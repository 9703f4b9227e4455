"""Command-line front end.

Usage::

    balkit logchar charge.json --side sub --grid 1:1e4:4 --format csv
    balkit dominates z.json w.json
    balkit conditions charge.json
    balkit balayage charge.json --genus 1 --mode two_sided
    balkit alpha charge.json --side right
    balkit pr52 nu.json mu.json --uniform-gamma
    balkit prl mu.json --n-max 12
    balkit entire zeros.csv --witness w.csv
    balkit example ex31 --theta 0.7 -o ex.json

Exit codes: 0 success, 2 input error, 3 precondition violation,
4 convergence failure.  Errors print one ``balkit: error[<code>]: ...`` line
on stderr.
"""

from __future__ import annotations

import os

_threads = os.environ.get("BALKIT_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    # must happen before NumPy loads its BLAS
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse  # noqa: E402
import csv  # noqa: E402
import io  # noqa: E402
import json  # noqa: E402
import math  # noqa: E402
import sys  # noqa: E402
from dataclasses import asdict, dataclass  # noqa: E402
from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from . import balayage, conditions, construct, entire, fixtures, logchar  # noqa: E402
from .errors import ConvergenceError, DomainError, PreconditionError  # noqa: E402
from .measures import DiscreteCharge  # noqa: E402
from .reports import fmt, parse_grid  # noqa: E402

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CONVERGENCE = 0, 2, 3, 4


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    grid: str = "1:1e4:4"
    tol: float = 1e-9
    slope_tol: float = 0.05
    trunc: float | None = None
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not (self.tol > 0 and self.slope_tol > 0):
            raise InputError("tolerances must be positive")
        if self.trunc is not None and not self.trunc > 0:
            raise InputError("--trunc must be positive")

    def radii(self) -> np.ndarray:
        return parse_grid(self.grid)


# ------------------------------------------------------------------ helpers


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def load_charge(path: str) -> DiscreteCharge:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "atoms" not in data and isinstance(data.get("result"), dict):
        data = data["result"]
    try:
        return DiscreteCharge.from_dict(data)
    except PreconditionError:
        raise
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_zeros(path: str, trunc: float | None) -> entire.ZeroSequence:
    text = _read_text(path)
    try:
        zs = entire.ZeroSequence.from_json(text) if path.endswith(".json") \
            else entire.ZeroSequence.from_csv(text)
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if trunc is not None:
        keep = np.abs(zs.points) <= trunc
        zs = entire.ZeroSequence(zs.points[keep], zs.multiplicities[keep], trunc,
                                 zs.origin_multiplicity)
    return zs


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(cfg: RunConfig, result: dict, csv_text: str | None, out: str | None) -> None:
    if cfg.format == "csv":
        if csv_text is None:
            raise InputError(f"command {cfg.command!r} has no CSV form")
        text = csv_text
    elif cfg.command == "example":
        # charges stay directly loadable; the echo goes under "meta"
        body = dict(result, meta={"balkit_version": __version__, "config": asdict(cfg)})
        text = json.dumps(_clean(body), sort_keys=True, indent=2) + "\n"
    else:
        envelope = {"balkit_version": __version__, "config": asdict(cfg), "result": result}
        text = json.dumps(_clean(envelope), sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------- commands


def cmd_logchar(args, cfg):
    nu = load_charge(args.charge)
    if args.side == "sub" and not (nu.is_positive() or len(nu) == 0):
        raise InputError("--side sub needs a positive measure")
    table = logchar.log_char_table(nu, cfg.radii(), charge_id=args.charge)
    result = table.to_dict()
    result["side"] = args.side
    return result, table.to_csv()


def cmd_dominates(args, cfg):
    nu, mu = load_charge(args.nu), load_charge(args.mu)
    if args.ratio is not None:
        rep = logchar.sequence_criterion(nu, mu, args.ratio, args.n_max,
                                         slope_tol=cfg.slope_tol)
    else:
        rep = logchar.dominates(nu, mu, cfg.radii(), cfg.slope_tol)
    return rep.to_dict(), rep.to_csv()


def cmd_conditions(args, cfg):
    nu = load_charge(args.charge)
    radii = cfg.radii()
    reps = [conditions.blaschke_classical(nu, "right", radii, cfg.slope_tol),
            conditions.blaschke_classical(nu, "left", radii, cfg.slope_tol),
            conditions.blaschke_genus1(nu, "right", radii, cfg.slope_tol),
            conditions.blaschke_genus1(nu, "left", radii, cfg.slope_tol),
            conditions.blaschke_two_sided(nu, radii, cfg.slope_tol),
            conditions.lindelof_genus1(nu, radii, cfg.slope_tol),
            conditions.lindelof_im(nu, radii, cfg.slope_tol)]
    if nu.is_positive() or len(nu) == 0:
        reps.append(conditions.lindelof_via_logchar(nu, radii, cfg.slope_tol))
    relation = conditions.lindelof_relation(nu, radii, cfg.slope_tol)
    result = {"reports": {r.tag: r.to_dict() for r in reps}, "relation": relation.to_dict()}
    rows = [(r.tag, x, p, s) for r in reps for x, p, s in zip(r.radii, r.partials, r.running_sup)]
    return result, _rows_csv(["tag", "r", "partial", "running_sup"], rows)


def cmd_balayage(args, cfg):
    nu = load_charge(args.charge)
    if args.genus == 0:
        res = balayage.balayage_genus0(nu, cfg.radii())
    else:
        res = balayage.balayage_genus1(nu, args.mode, args.boundary)
    a, b, n = _parse_ordinates(args.ordinates)
    ys = np.linspace(a, b, n)
    result = res.to_dict(ys)
    if args.growth:
        result["growth"] = balayage.balayage_growth_report(res, cfg.radii(),
                                                           slope_tol=cfg.slope_tol).to_dict()
    dist = np.atleast_1d(res.output.distribution(ys))
    h = ys[1] - ys[0] if n > 1 else 1.0
    dens = np.gradient(dist, h) if n > 1 else np.zeros(1)
    return result, _rows_csv(["y", "distribution", "density_fd"], zip(ys, dist, dens))


def _parse_ordinates(spec: str):
    try:
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(float(n))
    except ValueError as exc:
        raise InputError(f"bad --ordinates {spec!r}") from exc
    if not (a < b and n >= 2):
        raise InputError("--ordinates needs a < b and at least 2 points")
    return a, b, n


def cmd_alpha(args, cfg):
    eta = load_charge(args.charge)
    res = construct.compensator_alpha(eta, args.side, cfg.radii())
    rows = [(0.0, res.a_values[0])] + list(zip(res.jump_radii, res.a_values[1:]))
    return res.to_dict(), _rows_csv(["t", "a"], rows)


def cmd_pr52(args, cfg):
    nu, mu = load_charge(args.nu), load_charge(args.mu)
    res = construct.pr52_pipeline(nu, mu, cfg.radii(), uniform_gamma=args.uniform_gamma,
                                  d_threshold=args.d, tol=cfg.tol, seed=cfg.seed,
                                  slope_tol=cfg.slope_tol)
    card = res.scorecard()
    width = max(len(r[0]) for r in card)
    for name, value, bound, ok in card:
        print(f"{name:<{width}}  {value: .3e}  bound {bound: .3e}  {'ok' if ok else 'FAIL'}",
              file=sys.stderr)
    return res.to_dict(), _rows_csv(["check", "value", "bound", "ok"],
                                    [(n, float(v), float(b), bool(o)) for n, v, b, o in card])


def cmd_prl(args, cfg):
    mu = load_charge(args.charge)
    res = construct.lindelof_equalizer(mu, args.n_max, cfg.radii(), cfg.slope_tol)
    rows = [(n + 1, 2.0 ** (n + 1), br, bl, v)
            for n, (br, bl, v) in enumerate(zip(res.b_right, res.b_left, res.annulus_values))]
    return res.to_dict(), _rows_csv(["n", "radius", "b_right", "b_left", "common_value"], rows)


def cmd_entire(args, cfg):
    Z = load_zeros(args.zeros, cfg.trunc)
    if args.witness:
        W = load_zeros(args.witness, cfg.trunc)
        a, b, n = _parse_ordinates(args.ordinates)
        rep = entire.domination_witness(Z, W, np.linspace(a, b, n), args.genus)
        return rep.to_dict(), _rows_csv(["y", "delta"], zip(rep.y, rep.delta))
    rep = entire.growth_report(lambda w: entire.log_abs_product(Z, w, args.genus), cfg.radii(),
                               args.samples)
    return rep.to_dict(), rep.to_csv()


def cmd_example(args, cfg):
    name = args.name
    n = args.n
    if name == "ex31":
        ex = fixtures.ex31(args.theta, n or 161)
        result = ex.nu.to_dict()
        result.update({"name": name, "theta": ex.theta, "components": {
            "mu": ex.mu.to_dict(), "mu_theta": ex.mu_theta.to_dict()}})
        return result, None
    makers = {
        "alt-sign": lambda: fixtures.alternating(n or 1000),
        "odd": lambda: fixtures.odd_charge(n or 161),
        "integers": lambda: fixtures.integers(n or 1000),
        "m-log-density": lambda: fixtures.m_log_density(n or 161),
    }
    if name not in makers:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(fixtures.NAMED)}")
    result = makers[name]().to_dict()
    result["name"] = name
    return result, None


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", default="1:1e4:4", help="rmin:rmax:per_decade")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--slope-tol", type=float, default=0.05)
    common.add_argument("--trunc", type=float, default=None, help="truncation radius for zeros")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None, metavar="PATH")

    p = argparse.ArgumentParser(prog="balkit", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"balkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("logchar", parents=[common], help="logarithmic interval table")
    s.add_argument("charge")
    s.add_argument("--side", choices=("right", "left", "sub"), default="right")
    s.set_defaults(func=cmd_logchar)

    s = sub.add_parser("dominates", parents=[common], help="log-domination excess report")
    s.add_argument("nu")
    s.add_argument("mu")
    s.add_argument("--ratio", type=float, default=None, help="use a geometric sequence")
    s.add_argument("--n-max", type=int, default=14)
    s.set_defaults(func=cmd_dominates)

    s = sub.add_parser("conditions", parents=[common], help="Blaschke and Lindelof reports")
    s.add_argument("charge")
    s.set_defaults(func=cmd_conditions)

    s = sub.add_parser("balayage", parents=[common], help="balayage onto the imaginary axis")
    s.add_argument("charge")
    s.add_argument("--genus", type=int, choices=(0, 1), default=1)
    s.add_argument("--mode", choices=("right", "left", "two_sided"), default="two_sided")
    s.add_argument("--boundary", choices=("outer", "inner"), default="outer")
    s.add_argument("--ordinates", default="-10:10:201", help="a:b:n sample ordinates")
    s.add_argument("--growth", action="store_true", help="attach the growth report")
    s.set_defaults(func=cmd_balayage)

    s = sub.add_parser("alpha", parents=[common], help="compensator on the real axis")
    s.add_argument("charge")
    s.add_argument("--side", choices=("right", "left"), default="right")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("pr52", parents=[common], help="alpha/beta/gamma decomposition")
    s.add_argument("nu")
    s.add_argument("mu")
    s.add_argument("--uniform-gamma", action="store_true")
    s.add_argument("--d", type=float, default=0.1, help="angle separation threshold")
    s.set_defaults(func=cmd_pr52)

    s = sub.add_parser("prl", parents=[common], help="Lindelof equalizer on dyadic annuli")
    s.add_argument("charge")
    s.add_argument("--n-max", type=int, default=None)
    s.set_defaults(func=cmd_prl)

    s = sub.add_parser("entire", parents=[common], help="canonical product growth or witness")
    s.add_argument("zeros")
    s.add_argument("--genus", type=int, choices=(0, 1), default=1)
    s.add_argument("--witness", default=None, metavar="W", help="compare against zeros W")
    s.add_argument("--ordinates", default="-100:100:1001")
    s.add_argument("--samples", type=int, default=4096)
    s.set_defaults(func=cmd_entire)

    s = sub.add_parser("example", parents=[common], help="write a named fixture charge")
    s.add_argument("name")
    s.add_argument("n", nargs="?", type=int, default=None)
    s.add_argument("--theta", type=float, default=0.7)
    s.set_defaults(func=cmd_example)
    return p


def _fail(code: int, message: str) -> int:
    print(f"balkit: error[{code}]: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    if _threads is not None and not (_threads.isdigit() and int(_threads) > 0):
        return _fail(EXIT_INPUT, "BALKIT_THREADS must be a positive integer")
    try:
        cfg = RunConfig(args.command, args.grid, args.tol, args.slope_tol, args.trunc,
                        args.format, args.seed)
        result, csv_text = args.func(args, cfg)
        _emit(cfg, result, csv_text, args.output)
    except PreconditionError as exc:
        return _fail(EXIT_PRECONDITION, str(exc))
    except ConvergenceError as exc:
        return _fail(EXIT_CONVERGENCE, f"{exc} (partial={exc.partial!r}, error={exc.error!r})")
    except (InputError, DomainError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except OSError as exc:
        return _fail(EXIT_INPUT, f"I/O failure: {exc}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
