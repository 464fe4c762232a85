"""Registry of verification checks and a concurrent runner.

Each check returns a ``CheckResult``; exceptions raised inside a check become a
failed result carrying the message, so one broken check never hides the others.
"""
import cmath
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Optional, Sequence

import networkx as nx
import numpy as np

from . import braid, correspondence, exchange, periods, stability
from .config import Config
from .lattice import M_S, M_T, MINUS_IDENTITY
from .models import CheckResult, VerificationReport
from .version import get_version

# Configure logging
logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, str], None]


class CheckContext:
    """Configuration plus the expensive shared results, computed once on first use."""

    def __init__(self, config: Config, seed: int = 0):
        self.config = config
        self.seed = seed
        self._lock = threading.RLock()
        self._measured: Optional[Dict[str, periods.MonodromyResult]] = None
        self._calibration: Optional[correspondence.Calibration] = None

    def measured(self) -> Dict[str, periods.MonodromyResult]:
        with self._lock:
            if self._measured is None:
                self._measured = correspondence.measure_actions(self.config)
            return self._measured

    def calibration(self) -> correspondence.Calibration:
        with self._lock:
            if self._calibration is None:
                self._calibration = correspondence.calibrate(self.config, measured=self.measured())
            return self._calibration


def check_algebra(ctx: CheckContext) -> CheckResult:
    """Braid relation, centre, Sigma/Delta identity, l mod 5 and Sph membership, exactly."""
    def reduce_text(text: str) -> braid.AutElement:
        return braid.reduce(braid.parse_word(text))

    facts = {
        "braid_relation": M_S @ M_T @ M_S == M_T @ M_S @ M_T,
        "center_is_minus_identity": (M_S @ M_T).power(3) == MINUS_IDENTITY,
        "sigma3_is_delta2": reduce_text("Sigma^3") == reduce_text("Delta^2"),
        "delta2_is_shift": reduce_text("Delta^2") == reduce_text("[1]"),
        "ell": [braid.ell_mod5(reduce_text(w)) for w in ("S", "[1]", "Sigma", "Delta")] == [0, 1, 2, 3],
        "shift5_spherical": braid.is_sph(reduce_text("[5]")),
        "shift1_not_spherical": not braid.is_sph(reduce_text("[1]")),
        "center_chain": braid.center_chain_matches(),
    }
    failed = [name for name, ok in facts.items() if not ok]
    return CheckResult("algebra", not failed, "all identities hold" if not failed else f"failed: {failed}", facts)


def check_exchange_graph(ctx: CheckContext) -> CheckResult:
    """Regularity and torsor property of a radius 4 ball, the 5-cycle quotient and the relator."""
    ball = exchange.generate_ball(4, guard=ctx.config.ball_radius_guard)
    interior = ball.interior()
    regular = all(ball.out_degree(key) == 4 for key in interior)

    rng = np.random.default_rng(ctx.seed)
    keys = ball.vertices
    torsor = simples_follow = free = True
    for _ in range(100):
        k1, k2 = rng.choice(len(keys), size=2)
        h1, h2 = ball.heart(keys[k1]), ball.heart(keys[k2])
        a = exchange.transition(h1, h2)
        torsor = torsor and h1.translate(a) == h2 and exchange.transition(h1, h1).is_identity()
        moved = [s.klass for s in h1.translate(a).simple_pair]
        simples_follow = simples_follow and moved == [a.k_matrix.apply(s.klass) for s in h1.simple_pair]
        # a nontrivial transition moves every vertex of the ball
        if not a.is_identity():
            free = free and all(ball.key_of(braid.compose(a, g)) != key for key, g in ball.representatives.items())

    sph = exchange.generate_ball(3, "sph", guard=ctx.config.ball_radius_guard)
    five_cycle = nx.is_isomorphic(sph.underlying_graph(), nx.cycle_graph(5))

    relations = exchange.verify_relation_ball(exchange.generate_ball(5, guard=ctx.config.ball_radius_guard), max_length=8)
    metrics = {
        "vertices": len(keys),
        "interior": len(interior),
        "regular": regular,
        "torsor": bool(torsor),
        "simples_follow_k_action": bool(simples_follow),
        "free": bool(free),
        "sph_five_cycle": five_cycle,
        "relations": relations.to_dict(),
    }
    passed = regular and bool(torsor and simples_follow and free) and five_cycle and relations.passed
    return CheckResult("exchange_graph", passed, f"{len(keys)} vertices, relator check {relations.closed_walks} closed walks", metrics)


def check_tilt_matrices(ctx: CheckContext) -> CheckResult:
    delta, sigma = braid.DELTA.k_matrix.to_list(), braid.SIGMA.k_matrix.to_list()
    passed = delta == [[0, -1], [1, 0]] and sigma == [[0, 1], [-1, 1]]
    return CheckResult("tilt_matrices", passed, f"K(Delta)={delta}, K(Sigma)={sigma}", {"delta": delta, "sigma": sigma})


def check_periods(ctx: CheckContext) -> CheckResult:
    """Ratios at u = 1/2, quadrature self-convergence and d(lambda)/du = c omega."""
    config = ctx.config
    ratios = {f: periods.basis_periods(0.5, f, config.quadrature_nodes).ratio for f in periods.FORMS}
    ratio_error = max(min(abs(r - 1j), abs(r + 1j)) for r in ratios.values())

    convergence = 0.0
    for u in (0.3 + 0.4j, 0.5 + 0.5j, -0.2 + 0.8j):
        for form in periods.FORMS:
            coarse = periods.basis_periods(u, form, config.quadrature_nodes).as_array()
            fine = periods.basis_periods(u, form, 2 * config.quadrature_nodes).as_array()
            convergence = max(convergence, float(np.max(np.abs(coarse - fine) / np.abs(fine))))

    values = np.concatenate([periods.lambda_derivative_ratio(u, config) for u in periods.pf_arc(10)])
    constant = complex(np.mean(values))
    spread = float(np.max(np.abs(values - constant)) / abs(constant))

    metrics = {
        "ratio_error": ratio_error,
        "self_convergence": convergence,
        "derivative_constant": [constant.real, constant.imag],
        "derivative_spread": spread,
    }
    passed = ratio_error < 1e-8 and convergence < 1e-10 and spread < 1e-5
    return CheckResult("periods", passed, f"d(lambda)/du = {constant:.8f} omega", metrics)


def check_picard_fuchs(ctx: CheckContext) -> CheckResult:
    residuals = {
        form: max(periods.pf_residual(u, form, ctx.config) for u in periods.pf_arc(20))
        for form in periods.FORMS
    }
    passed = all(r < 1e-5 for r in residuals.values())
    return CheckResult("picard_fuchs", passed, f"max residuals {residuals}", residuals)


def check_monodromy(ctx: CheckContext) -> CheckResult:
    """Transvections at 0 and 1, order six at infinity, Kodaira fibres and calibration."""
    measured = ctx.measured()
    m0, m1, big = (measured[name].matrix for name in correspondence.LOOP_NAMES)
    transvections = all(m.trace() == 2 and not m.is_identity() for m in (m0, m1))
    order_six = big.power(6).is_identity() and big.power(3) == MINUS_IDENTITY
    fibres = periods.select_fibres([m0, m1, big])
    decks = measured["x"].matrix.trace() == 0 and abs(measured["*"].matrix.trace()) == 1
    residual = max(result.residual for result in measured.values())

    cal = ctx.calibration()
    conjugated_x = cal.conjugated("x").entries
    conjugated_star = cal.conjugated("*").entries
    calibrated = (
        conjugated_x in correspondence.projective_class(braid.DELTA.k_matrix)
        and conjugated_star in correspondence.projective_class(braid.SIGMA.k_matrix)
        and cal.loop_elements.get("x") == braid.DELTA
        and cal.loop_elements.get("*") == braid.SIGMA
    )
    metrics = {
        "matrices": {name: result.to_dict() for name, result in measured.items()},
        "fibres": [list(f) for f in fibres],
        "calibration": cal.to_dict(),
    }
    passed = (
        transvections and order_six and decks and calibrated
        and ("I1", "I1", "II*") in fibres and residual < ctx.config.int_tol
    )
    return CheckResult("monodromy", passed, f"fibres {fibres}, framing {cal.basis_matrix}", metrics)


def check_chambers(ctx: CheckContext) -> CheckResult:
    """Width at the x-image, the Sigma wall example and termination of random descents."""
    config = ctx.config
    images = correspondence.orbifold_images(ctx.calibration(), config)
    a0 = exchange.standard_heart()
    x_width = stability.width(images["x"], a0)
    x_report = stability.chamber_descent(images["x"], tie_tol=config.tie_tol)

    wall = stability.ProjectiveCharge.of(-0.25 + 1j, 0.5)
    r_t = exchange.simple_tilt(a0, exchange.Role.T, exchange.Side.RIGHT)
    tie_gap = abs(stability.width(wall, a0) - stability.width(wall, r_t))

    rng = np.random.default_rng(ctx.seed)
    steps = []
    for _ in range(200):
        theta = rng.uniform(-0.999, 0.999) * math.pi
        radius = math.exp(rng.uniform(-3, 3))
        zbar = stability.ProjectiveCharge.from_ratio(radius * cmath.exp(1j * theta))
        steps.append(stability.chamber_descent(zbar, tie_tol=config.tie_tol, cap=config.descent_cap).steps)

    star = images["*"].ratio
    metrics = {
        "x_ratio": [images["x"].ratio.real, images["x"].ratio.imag],
        "x_width": x_width,
        "x_walls": list(x_report.wall_flags),
        "star_ratio": [star.real, star.imag],
        "star_cube_root_error": abs(star * star + star + 1),
        "wall_width_gap": tie_gap,
        "max_descent_steps": max(steps),
    }
    passed = abs(x_width - 0.5) < 1e-6 and tie_gap < 1e-9 and max(steps) <= config.descent_cap
    return CheckResult("chambers", passed, f"x-width {x_width:.9f}, max descent {max(steps)} steps", metrics)


def check_correspondence(ctx: CheckContext) -> CheckResult:
    cal = ctx.calibration()
    report = correspondence.verify_correspondence(correspondence.sample_points(100, ctx.seed), cal, ctx.config)
    angles = correspondence.triangle_geometry(ctx.config)
    metrics = {"sweep": report.to_dict(), "angles": [a.to_dict() for a in angles]}
    passed = report.passed and all(a.passed for a in angles)
    summary = ", ".join(f"{a.name}={a.angle:.4f}" for a in angles)
    return CheckResult("correspondence", passed, f"pass rate {report.pass_rate:.2f}; angles {summary}", metrics)


def check_lift(ctx: CheckContext) -> CheckResult:
    report = correspondence.lift_check(ctx.config)
    scalars = ", ".join(f"{loop.name}: {loop.scalar.real:+.6f}" for loop in report.loops)
    return CheckResult("lift", report.passed, scalars, report.to_dict())


# List of available checks
AVAILABLE_CHECKS = [
    {
        'id': 'algebra',
        'name': 'Exact algebra',
        'description': 'Braid relation, centre, Sigma^3 = Delta^2 = [1], l mod 5 and Sph membership',
        'theorem': 'Aut0(D) is a central extension of PSL(2, Z) with Sph(D) = Br3',
        'check': check_algebra,
    },
    {
        'id': 'exchange_graph',
        'name': 'Exchange graph',
        'description': 'Radius 4 ball is 4-regular, simply transitive action, Sph quotient is a 5-cycle',
        'theorem': 'Aut0(D) acts simply transitively on the exchange graph',
        'check': check_exchange_graph,
    },
    {
        'id': 'tilt_matrices',
        'name': 'Tilt matrices',
        'description': 'K-matrices of Delta and Sigma',
        'theorem': 'Monodromy of the period map equals the tilt action',
        'check': check_tilt_matrices,
    },
    {
        'id': 'periods',
        'name': 'Periods',
        'description': 'Ratios at u = 1/2, quadrature convergence, d(lambda)/du proportional to omega',
        'theorem': 'lambda is a primitive of omega in u',
        'check': check_periods,
    },
    {
        'id': 'picard_fuchs',
        'name': 'Picard-Fuchs',
        'description': 'Hypergeometric residuals of omega and lambda periods on an arc',
        'theorem': 'Periods solve Gauss equations with exponents (0, 1/3, 1/2) and (1, 1/3, 1/2)',
        'check': check_picard_fuchs,
    },
    {
        'id': 'monodromy',
        'name': 'Monodromy',
        'description': 'Transvections at u = 0, 1, order six at infinity, Kodaira fibres, calibration',
        'theorem': 'The period map is equivariant for PSL(2, Z)',
        'check': check_monodromy,
    },
    {
        'id': 'chambers',
        'name': 'Chamber structure',
        'description': 'Width at the x-image, wall example, descent termination',
        'theorem': 'Stab(D)/C is the union of translates of one fundamental domain',
        'check': check_chambers,
    },
    {
        'id': 'correspondence',
        'name': 'Correspondence sweep',
        'description': 'Chamber translation along loops and triangle angles',
        'theorem': 'The period map lifts to a biholomorphism onto Stab(D)/C',
        'check': check_correspondence,
        'slow': True,
    },
    {
        'id': 'lift',
        'name': 'Lift check',
        'description': 'Central loops scale unprojected periods by the shift sign',
        'theorem': 'The lifted period map is equivariant for Br3',
        'check': check_lift,
    },
]

CHECK_IDS = [entry['id'] for entry in AVAILABLE_CHECKS]


def get_check(check_id: str) -> dict:
    for entry in AVAILABLE_CHECKS:
        if entry['id'] == check_id:
            return entry
    raise KeyError(f"unknown check {check_id!r}; available: {', '.join(CHECK_IDS)}")


def _run_one(entry: dict, ctx: CheckContext) -> CheckResult:
    try:
        result = entry['check'](ctx)
    except Exception as exc:
        logger.exception("Check %s raised", entry['id'])
        return CheckResult(entry['id'], False, f"{type(exc).__name__}: {exc}")
    level = logging.INFO if result.passed else logging.WARNING
    logger.log(level, "Check %s %s: %s", entry['id'], "passed" if result.passed else "FAILED", result.details)
    return result


def run_checks(
    config: Optional[Config] = None,
    ids: Optional[Sequence[str]] = None,
    progress_callback: Optional[ProgressCallback] = None,
    timestamp: Optional[str] = None,
    seed: int = 0,
    context: Optional[CheckContext] = None,
) -> VerificationReport:
    """Run registered checks concurrently and collect their results in registry order.

    Args:
        config: Numerical settings
        ids: Check ids to run; None runs all of them
        progress_callback: Called as (done, total, check id) after each check
        timestamp: Fixed report timestamp, for reproducible reports
        seed: Seed for randomised samples
        context: Shared context to reuse, e.g. for its calibration afterwards

    Returns:
        VerificationReport with one result per selected check

    Raises:
        KeyError: On an unknown check id
    """
    config = config or Config()
    entries = [get_check(i) for i in ids] if ids else list(AVAILABLE_CHECKS)
    ctx = context or CheckContext(config, seed)
    results: Dict[str, CheckResult] = {}
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        futures = {executor.submit(_run_one, entry, ctx): entry['id'] for entry in entries}
        for done, future in enumerate(as_completed(futures), start=1):
            check_id = futures[future]
            results[check_id] = future.result()
            if progress_callback:
                progress_callback(done, len(entries), check_id)

    report = VerificationReport(results=[results[entry['id']] for entry in entries], version=get_version())
    if timestamp is not None:
        report.timestamp = timestamp
    logger.info("Verification finished: %s", report)
    return report
