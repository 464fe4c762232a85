"""
Command line interface for staba2.

Exit codes: 0 on success, 1 when a command fails or a check does not pass,
2 on usage errors.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core import braid, correspondence, exchange, periods, plotting, stability, verification
from ..core.artifacts import ArtifactWriter
from ..core.config import Config, load_settings
from ..core.errors import Staba2Error
from ..core.version import get_version
from ..utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """argparse type for ``a+bi``; the Python ``j`` suffix is accepted as well."""
    cleaned = text.strip().replace(" ", "")
    if cleaned.endswith(("i", "I")):
        cleaned = cleaned[:-1] + "j"
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex value: {text!r}") from None


def parse_arc(text: str) -> Tuple[complex, float, int]:
    """argparse type for ``CENTER,RADIUS,COUNT``, e.g. ``0.5,0.4,20``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"arc must be CENTER,RADIUS,COUNT, got {text!r}")
    center = parse_complex(parts[0])
    try:
        radius, count = float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid arc {text!r}") from None
    if radius <= 0 or count < 1:
        raise argparse.ArgumentTypeError(f"arc needs a positive radius and count, got {text!r}")
    return center, radius, count


def _point(value: Any) -> complex:
    if isinstance(value, str):
        return parse_complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    raise ValueError(f"not a point: {value!r}")


def load_polyline(spec: str) -> List[complex]:
    """A polyline given inline as JSON or as the path of a JSON file.

    Points are ``[re, im]`` pairs, numbers or strings like ``"0.5+0.5i"``.
    """
    try:
        is_file = Path(spec).is_file()
    except OSError:
        is_file = False
    text = Path(spec).read_text() if is_file else spec
    try:
        points = [_point(p) for p in json.loads(text)]
    except (json.JSONDecodeError, TypeError, ValueError, argparse.ArgumentTypeError) as exc:
        raise _UsageError(f"--loop needs a loop name or a JSON polyline: {exc}") from exc
    if len(points) < 2:
        raise _UsageError("a polyline needs at least two points")
    return points


class Context:
    """What every command handler needs: parsed arguments, config and an artifact writer."""

    def __init__(self, args: argparse.Namespace, config: Config):
        self.args = args
        self.config = config
        self.writer = ArtifactWriter(args.out or config.output_dir)

    def emit(self, data: Dict[str, Any], text: str) -> None:
        if self.args.json:
            print(json.dumps(data, indent=2, sort_keys=True))
        else:
            print(text)


# braid

def cmd_braid_reduce(ctx: Context) -> int:
    word = braid.parse_word(ctx.args.word)
    element = braid.reduce(word)
    data = {
        "word": braid.format_word(word),
        **element.to_dict(),
        "ell_mod5": braid.ell_mod5(element),
        "spherical": braid.is_sph(element),
    }
    ctx.emit(data, f"{element.triple()}  l mod 5 = {data['ell_mod5']}")
    return EXIT_OK


def cmd_braid_parse(ctx: Context) -> int:
    word = braid.parse_word(ctx.args.word)
    text = braid.format_word(word)
    ctx.emit({"word": text, "letters": len(word)}, text)
    return EXIT_OK


# graph

def cmd_graph_ball(ctx: Context) -> int:
    args = ctx.args
    ball = exchange.generate_ball(args.radius, args.quotient, guard=ctx.config.ball_radius_guard)
    stem = f"ball_{ball.quotient.value}_r{ball.radius}"
    data = ball.to_dict()
    if args.relations:
        data["relations"] = exchange.verify_relation_ball(ball, args.relations).to_dict()
    ctx.writer.write_json(f"{stem}.json", data)
    ctx.writer.write_dot(f"{stem}.dot", ball.to_dot())
    if args.json:
        ctx.emit(data, "")
    else:
        print(ball.to_dot(), end="")
    if args.relations and not data["relations"]["passed"]:
        return EXIT_FAILURE
    return EXIT_OK


# stab

def cmd_stab_chamber(ctx: Context) -> int:
    zbar = stability.ProjectiveCharge.of(ctx.args.zs, ctx.args.zt)
    report = stability.chamber_descent(zbar, tie_tol=ctx.config.tie_tol, cap=ctx.config.descent_cap)
    verdict = stability.fundamental_domain_test(zbar, ctx.config.tie_tol)
    data = {"charge": zbar.to_dict(), **report.to_dict(), "domain": verdict.kind}
    text = (
        f"heart {report.heart.describe()}  width {report.width:.9f}  "
        f"stable {sorted(report.stable_set.objects)}  walls {list(report.wall_flags)}  A0: {verdict.kind}"
    )
    ctx.emit(data, text)
    return EXIT_OK


def cmd_stab_sweep(ctx: Context) -> int:
    args = ctx.args
    rng = np.random.default_rng(args.seed)
    ratios = [
        complex(x, y)
        for x, y in zip(rng.uniform(-args.extent, args.extent, args.count), rng.uniform(-args.extent, args.extent, args.count))
    ]
    charges = [stability.ProjectiveCharge.from_ratio(w) for w in ratios if w != 0]
    rows = stability.sweep(charges, ctx.config.tie_tol, ctx.config.descent_cap, ctx.config.workers)
    path = ctx.writer.write_csv("stab_sweep.csv", rows)
    failed = sum(1 for row in rows if row["error"])
    ctx.emit({"rows": len(rows), "failed": failed, "path": str(path)}, f"{len(rows)} charges -> {path}")
    return EXIT_OK


# periods

def cmd_periods_eval(ctx: Context) -> int:
    vector = periods.continued_vector(ctx.args.u, ctx.args.form, ctx.config)
    data = vector.to_dict()
    ctx.emit(data, f"u={ctx.args.u}: ({vector.p_alpha:.12g}, {vector.p_beta:.12g}) ratio {vector.ratio:.12g}")
    return EXIT_OK


def cmd_periods_monodromy(ctx: Context) -> int:
    name = ctx.args.loop
    loops, decks = periods.standard_loops(), periods.deck_paths()
    if name in loops:
        result = periods.monodromy(loops[name], ctx.config)
    elif name in decks:
        result = periods.deck_transition(decks[name], ctx.config)
    else:
        path = load_polyline(name)
        name = "polyline"
        start, end = path[0], path[-1]
        if abs(end - start) <= 1e-12:
            result = periods.monodromy(path, ctx.config)
        elif abs(end - (1 - start)) <= 1e-12:
            name = "deck polyline"
            result = periods.deck_transition(path, ctx.config)
        else:
            raise _UsageError("a polyline must be closed or end at 1 - u of its start")
    data = {"loop": name, **result.to_dict(), "kodaira": periods.kodaira_candidates(result.matrix)}
    ctx.emit(data, f"{name}: {result.matrix.to_list()} trace {result.trace} residual {result.residual:.2e}")
    return EXIT_OK


def cmd_periods_pf_check(ctx: Context) -> int:
    center, radius, count = ctx.args.arc
    arc = periods.pf_arc(count, center, radius)
    residuals = {form: [periods.pf_residual(u, form, ctx.config) for u in arc] for form in periods.FORMS}
    worst = {form: max(values) for form, values in residuals.items()}
    passed = all(value < ctx.args.tolerance for value in worst.values())
    ctx.emit({"max_residual": worst, "passed": passed}, f"max residuals {worst}: {'ok' if passed else 'FAILED'}")
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_periods_sweep(ctx: Context) -> int:
    us = correspondence.sample_points(ctx.args.count, ctx.args.seed)
    rows = periods.sweep(us, ctx.config)
    path = ctx.writer.write_csv("period_sweep.csv", rows)
    ctx.emit({"rows": len(rows), "path": str(path)}, f"{len(rows)} points -> {path}")
    return EXIT_OK


# verify

def cmd_verify_all(ctx: Context) -> int:
    args = ctx.args
    ids = args.only or None
    if ids is None and args.skip_slow:
        ids = [entry['id'] for entry in verification.AVAILABLE_CHECKS if not entry.get('slow')]
    try:
        for check_id in ids or []:
            verification.get_check(check_id)
    except KeyError as exc:
        raise _UsageError(exc.args[0]) from exc

    def progress(done: int, total: int, check_id: str) -> None:
        logger.info("[%d/%d] %s done", done, total, check_id)

    checks = verification.CheckContext(ctx.config, args.seed)
    report = verification.run_checks(ctx.config, ids, progress, timestamp=args.timestamp, seed=args.seed,
                                     context=checks)
    if args.report:
        ctx.writer.write_json(args.report, report.to_dict())
    data = report.to_dict()
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.details}" for r in report.results]
    lines.append(str(report))
    if args.figures:
        written = _write_figures(ctx, "all", checks.calibration, args.extent, args.resolution)
        data["figures"] = [str(p) for p in written]
        lines.extend(str(p) for p in written)
    ctx.emit(data, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_verify_calibrate(ctx: Context) -> int:
    cal = correspondence.calibrate(ctx.config)
    data = cal.to_dict()
    ctx.writer.write_json("calibration.json", data)
    ctx.emit(data, f"framing {cal.basis_matrix}, x-point ratio {cal.x_ratio:.9f}")
    return EXIT_OK


# plot

def _write_figures(
    ctx: Context,
    which: str,
    calibration: Callable[[], correspondence.Calibration],
    extent: float,
    resolution: int,
) -> List[Path]:
    """Write the domain and/or lozenge figures; ``calibration`` is only called for the lozenge."""
    written = []
    if which in ("domain", "all"):
        figure = plotting.fundamental_domain_figure(extent, resolution, ctx.config.tie_tol)
        written.append(ctx.writer.write_svg("fundamental_domain.svg", figure))
    if which in ("lozenge", "all"):
        cal = calibration()
        rows = correspondence.lozenge_image(cal=cal, config=ctx.config)
        marks = {name: zbar.ratio for name, zbar in correspondence.orbifold_images(cal, ctx.config).items()}
        ctx.writer.write_csv("lozenge_image.csv", rows)
        written.append(ctx.writer.write_svg("lozenge_image.svg", plotting.lozenge_figure(rows, marks)))
    return written


def cmd_plot(ctx: Context) -> int:
    args = ctx.args
    written = _write_figures(ctx, args.figure, lambda: correspondence.calibrate(ctx.config), args.extent, args.resolution)
    ctx.emit({"written": [str(p) for p in written]}, "\n".join(str(p) for p in written))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="staba2",
        description="Stability conditions on the A2 quiver category and the periods of y^2 = z^3 - 3z + (4u - 2).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    parser.add_argument("--config", help="TOML configuration file")
    parser.add_argument("--json", action="store_true", help="print machine readable JSON")
    parser.add_argument("--out", help="artifact directory (default: output.directory)")
    parser.add_argument("--log-level", help="override logging.level")
    parser.add_argument("--log-file", help="log file, or 'auto' for logs/staba2.log")
    parser.add_argument("--log-json", action="store_true", help="JSON log records")
    commands = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help_text: str):
        sub = commands.add_parser(name, help=help_text)
        return sub.add_subparsers(dest="action", required=True)

    def action(sub, name: str, handler: Callable[[Context], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    braid_cmds = group("braid", "words in Phi_S, Phi_T and the shift")
    action(braid_cmds, "reduce", cmd_braid_reduce, "canonical form of a word").add_argument("word")
    action(braid_cmds, "parse", cmd_braid_parse, "parse and reformat a word").add_argument("word")

    graph_cmds = group("graph", "exchange graph balls")
    p = action(graph_cmds, "ball", cmd_graph_ball, "ball around the standard heart as DOT and JSON")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--quotient", choices=[q.value for q in exchange.Quotient], default="none")
    p.add_argument("--relations", type=int, default=0, metavar="LENGTH",
                   help="also check closed walks up to LENGTH against Sigma^3 = Delta^2")

    stab_cmds = group("stab", "projective central charges")
    p = action(stab_cmds, "chamber", cmd_stab_chamber, "chamber descent for [zs : zt]")
    p.add_argument("--zs", type=parse_complex, required=True, help="Z(S), e.g. --zs=-0.25+1i")
    p.add_argument("--zt", type=parse_complex, default=1 + 0j, help="Z(T), default 1")
    p = action(stab_cmds, "sweep", cmd_stab_sweep, "classify random charges into stab_sweep.csv")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--extent", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)

    period_cmds = group("periods", "periods, continuation and monodromy")
    p = action(period_cmds, "eval", cmd_periods_eval, "period vector continued from u0")
    p.add_argument("--u", type=parse_complex, required=True, help="e.g. --u=0.3+0.4i")
    p.add_argument("--form", choices=periods.FORMS, default=periods.LAMBDA)
    p = action(period_cmds, "monodromy", cmd_periods_monodromy, "monodromy of a standard loop or deck path")
    p.add_argument(
        "--loop", default="around_0", metavar="LOOP",
        help=f"a JSON polyline, inline or as a file, or one of: {', '.join(correspondence.LOOP_NAMES + correspondence.DECK_NAMES)}",
    )
    p = action(period_cmds, "pf-check", cmd_periods_pf_check, "hypergeometric residuals on an arc")
    p.add_argument("--arc", type=parse_arc, default=parse_arc("0.5,0.4,20"), metavar="CENTER,RADIUS,COUNT")
    p.add_argument("--tolerance", type=float, default=1e-5)
    p = action(period_cmds, "sweep", cmd_periods_sweep, "lambda periods at sample points into period_sweep.csv")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    verify_cmds = group("verify", "verification checks")
    p = action(verify_cmds, "all", cmd_verify_all, "run the registered checks")
    p.add_argument("--report", help="write the JSON report under this name in the artifact directory")
    p.add_argument("--only", nargs="+", metavar="ID", help=f"checks to run: {', '.join(verification.CHECK_IDS)}")
    p.add_argument("--skip-slow", action="store_true", help="leave out the correspondence sweep")
    p.add_argument("--timestamp", help="fixed report timestamp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                   help="also write fundamental_domain.svg and lozenge_image.svg")
    p.add_argument("--extent", type=float, default=2.5)
    p.add_argument("--resolution", type=int, default=161)
    action(verify_cmds, "calibrate", cmd_verify_calibrate, "calibrate the period lattice framing")

    plot_cmds = commands.add_parser("plot", help="SVG figures")
    plot_cmds.set_defaults(handler=cmd_plot)
    plot_cmds.add_argument("figure", choices=["domain", "lozenge", "all"], nargs="?", default="all")
    plot_cmds.add_argument("--extent", type=float, default=2.5)
    plot_cmds.add_argument("--resolution", type=int, default=161)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the command and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        settings = load_settings(args.config)
        config = Config.from_settings(settings)
    except Staba2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    setup_logging(
        args.log_level or settings.get("logging.level", "INFO"),
        args.log_file or settings.get("logging.file"),
        json_format=args.log_json or bool(settings.get("logging.json", False)),
    )

    try:
        return args.handler(Context(args, config))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Staba2Error as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    """Console script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
