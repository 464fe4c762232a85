"""Comparison of the period map of lambda with the tilt action on hearts.

The measured monodromy acts on period vectors; its transpose acts on the cycle
lattice. A calibration is an integer change of basis P from cycles to K(D) that
carries the two deck transitions onto the tilt matrices of Delta and Sigma. With
it every period vector gives a projective central charge

    (Z(S), Z(T)) = (p_alpha, p_beta) P^-1

and a loop with lattice action A moves charges by N = P A P^-1, which is the
translation by the autoequivalence g with K-matrix N^-1.
"""
import cmath
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .braid import DELTA, SIGMA, AutElement, psl2_image
from .config import Config
from .errors import (
    CalibrationError,
    LiftError,
    Staba2Error,
)
from .exchange import Heart, generate_ball
from .lattice import M_S, M_T, MINUS_IDENTITY, LatticeAut, Matrix2, mat_mul, projective_normal_form
from .periods import (
    LAMBDA,
    U0,
    MonodromyResult,
    PeriodVector,
    basis_periods,
    continue_periods,
    deck_paths,
    deck_transition,
    monodromy,
    standard_loops,
)
from .stability import ProjectiveCharge, chamber_descent, translate_charge, wall_gap

# Configure logging
logger = logging.getLogger(__name__)

SEARCH_RANGE = 3
ELEMENT_SEARCH_RADIUS = 8
X_POINT = 0.5 + 0j
X_RATIO = -1j
CHARGE_TOL = 1e-6
INJECTIVITY_TOL = 1e-9
PASS_FRACTION = 0.95
LIFT_TOL = 1e-6

LOOP_NAMES = ("around_0", "around_1", "around_both")
DECK_NAMES = ("x", "*")


def _det(m: Matrix2) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def _inverse_unimodular(m: Matrix2) -> Matrix2:
    # det is +-1, so the inverse is det times the adjugate
    (a, b), (c, d) = m
    k = _det(m)
    return ((k * d, -k * b), (-k * c, k * a))


def _transpose(m: LatticeAut) -> LatticeAut:
    (a, b), (c, d) = m.entries
    return LatticeAut(((a, c), (b, d)))


def conjugate(p: Matrix2, a: LatticeAut) -> LatticeAut:
    """P A P^-1 for a unimodular P."""
    return LatticeAut(mat_mul(mat_mul(p, a.entries), _inverse_unimodular(p)))


def projective_class(k: LatticeAut) -> Set[Matrix2]:
    """k and its inverse, each up to sign."""
    return {m.entries for base in (k, k.inverse()) for m in (base, -base)}


def unimodular_matrices(bound: int = SEARCH_RANGE) -> List[Matrix2]:
    """All integer matrices with entries in [-bound, bound] and determinant +-1, in search order."""
    values = range(-bound, bound + 1)
    found = []
    for a, b, c, d in itertools.product(values, repeat=4):
        m = ((a, b), (c, d))
        if abs(_det(m)) == 1:
            found.append(m)
    return found


def _row_charge(p_alpha: complex, p_beta: complex, p_inverse: Matrix2) -> Tuple[complex, complex]:
    (a, b), (c, d) = p_inverse
    return p_alpha * a + p_beta * c, p_alpha * b + p_beta * d


@dataclass
class Calibration:
    """Change of basis from the tracked cycles (alpha, beta) to ([S], [T]).

    Attributes:
        basis_matrix: Unimodular P sending cycle coordinates to K-classes
        branch_shift: 1 when P reverses orientation, else 0
        measured: Action on cycles (transposed monodromy) of each loop and deck path
        loop_elements: Autoequivalence translating charges along each loop
        x_ratio: Calibrated Z(S)/Z(T) at u = 1/2
    """
    basis_matrix: Matrix2
    branch_shift: int
    measured: Dict[str, LatticeAut] = field(default_factory=dict)
    loop_elements: Dict[str, AutElement] = field(default_factory=dict)
    x_ratio: complex = X_RATIO

    @property
    def inverse_basis(self) -> Matrix2:
        return _inverse_unimodular(self.basis_matrix)

    def conjugated(self, name: str) -> LatticeAut:
        return conjugate(self.basis_matrix, self.measured[name])

    def charge(self, vector: PeriodVector) -> ProjectiveCharge:
        z_s, z_t = _row_charge(vector.p_alpha, vector.p_beta, self.inverse_basis)
        return ProjectiveCharge.of(z_s, z_t)

    def to_dict(self) -> dict:
        return {
            "basis_matrix": [list(row) for row in self.basis_matrix],
            "branch_shift": self.branch_shift,
            "measured": {name: m.to_list() for name, m in self.measured.items()},
            "conjugated": {name: self.conjugated(name).to_list() for name in self.measured},
            "loop_elements": {name: g.to_dict() for name, g in self.loop_elements.items()},
            "x_ratio": [self.x_ratio.real, self.x_ratio.imag],
        }


def measure_actions(config: Optional[Config] = None, u0: complex = U0) -> Dict[str, MonodromyResult]:
    """Monodromy of the three standard loops and the two deck transitions, based at u0."""
    config = config or Config()
    results: Dict[str, MonodromyResult] = {}
    for name, loop in standard_loops(u0).items():
        results[name] = monodromy(loop, config)
    for name, path in deck_paths(u0).items():
        results[name] = deck_transition(path, config)
    return results


def _find_elements(actions: Dict[str, LatticeAut], p: Matrix2, radius: int) -> Dict[str, AutElement]:
    ball = generate_ball(radius, "shift", guard=max(radius, ELEMENT_SEARCH_RADIUS))
    by_image = {psl2_image(g).entries: g for g in ball.representatives.values()}
    elements = {}
    for name, action in actions.items():
        k_matrix = projective_normal_form(conjugate(p, action).inverse())
        if k_matrix.entries not in by_image:
            raise CalibrationError(
                f"calibration failed: no element within {radius} tilts acts as {k_matrix.to_list()} ({name})"
            )
        elements[name] = by_image[k_matrix.entries]
    return elements


def calibrate(
    config: Optional[Config] = None,
    u0: complex = U0,
    measured: Optional[Dict[str, MonodromyResult]] = None,
) -> Calibration:
    """Search small unimodular matrices for the framing of the period lattice.

    A candidate P must conjugate the deck action through u = 1/2 onto +-K(Delta)^(+-1)
    and the deck action around u = infinity onto +-K(Sigma)^(+-1). Of the matching
    candidates the first one, in ``unimodular_matrices`` order, that puts the image
    of u = 1/2 at Z(S)/Z(T) = -i is returned.

    Args:
        config: Numerical settings
        u0: Base point of loops and paths
        measured: Precomputed ``measure_actions`` result

    Returns:
        Calibration: The framing with the loop elements attached

    Raises:
        CalibrationError: If no candidate matches
    """
    config = config or Config()
    results = measured or measure_actions(config, u0)
    actions = {name: _transpose(result.matrix) for name, result in results.items()}

    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    at_x = continue_periods(start, [u0, X_POINT], config)

    delta_class = projective_class(DELTA.k_matrix)
    sigma_class = projective_class(SIGMA.k_matrix)
    matched = 0
    chosen: Optional[Tuple[Matrix2, complex]] = None
    for p in unimodular_matrices():
        if conjugate(p, actions["x"]).entries not in delta_class:
            continue
        if conjugate(p, actions["*"]).entries not in sigma_class:
            continue
        matched += 1
        z_s, z_t = _row_charge(at_x.p_alpha, at_x.p_beta, _inverse_unimodular(p))
        ratio = z_s / z_t
        if abs(ratio - X_RATIO) < CHARGE_TOL:
            chosen = (p, ratio)
            break
        logger.debug("Framing %s matches, x-point at %s", p, ratio)
    if chosen is None:
        raise CalibrationError(f"calibration failed: {matched} conjugating matrices, none with the x-point at -i")

    p, ratio = chosen
    elements = _find_elements(actions, p, ELEMENT_SEARCH_RADIUS)
    calibration = Calibration(
        basis_matrix=p,
        branch_shift=0 if _det(p) == 1 else 1,
        measured=actions,
        loop_elements=elements,
        x_ratio=ratio,
    )
    logger.info("Calibration found: P=%s, x-point ratio %s", p, ratio)
    return calibration


# Chamber translation along loops

@dataclass
class SampleCheck:
    """Chamber translation results at one sample point."""
    u: complex
    heart: str = ""
    charge: Optional[ProjectiveCharge] = None
    excluded: bool = False
    failures: List[str] = field(default_factory=list)
    branches: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.excluded and not self.failures

    def to_dict(self) -> dict:
        ratio = self.charge.ratio if self.charge is not None else None
        return {
            "u": [self.u.real, self.u.imag],
            "ratio": [ratio.real, ratio.imag] if ratio is not None else None,
            "heart": self.heart,
            "excluded": self.excluded,
            "passed": self.passed,
            "failures": self.failures,
            "branches": self.branches,
        }


@dataclass
class CorrespondenceReport:
    samples: List[SampleCheck]
    min_pair_distance: float

    @property
    def checked(self) -> List[SampleCheck]:
        return [s for s in self.samples if not s.excluded]

    @property
    def pass_rate(self) -> float:
        checked = self.checked
        if not checked:
            return 0.0
        return sum(1 for s in checked if s.passed) / len(checked)

    @property
    def injective(self) -> bool:
        return self.min_pair_distance > INJECTIVITY_TOL

    @property
    def passed(self) -> bool:
        return self.pass_rate >= PASS_FRACTION and self.injective

    def to_dict(self) -> dict:
        return {
            "samples": len(self.samples),
            "excluded": len(self.samples) - len(self.checked),
            "pass_rate": self.pass_rate,
            "min_pair_distance": self.min_pair_distance,
            "injective": self.injective,
            "passed": self.passed,
            "failures": [s.to_dict() for s in self.samples if not s.excluded and not s.passed],
        }


def sample_points(count: int = 100, seed: int = 0) -> List[complex]:
    """Regular sample points in the box -0.4 <= Re u <= 1.4, 0.15 <= Im u <= 1.2."""
    rng = np.random.default_rng(seed)
    re = rng.uniform(-0.4, 1.4, count)
    im = rng.uniform(0.15, 1.2, count)
    return [complex(x, y) for x, y in zip(re, im)]


def _branch_starts(config: Config, u0: complex) -> Dict[str, Tuple[PeriodVector, bool]]:
    """Period vectors after each loop, flagged True when they sit over 1 - u0."""
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    loops = standard_loops(u0)
    branches = {name: (continue_periods(start, loops[name], config), False) for name in ("around_0", "around_1")}
    branches["x"] = (continue_periods(start, deck_paths(u0)["x"], config), True)
    return branches


def _check_sample(
    u: complex,
    cal: Calibration,
    config: Config,
    start: PeriodVector,
    branches: Dict[str, Tuple[PeriodVector, bool]],
) -> SampleCheck:
    check = SampleCheck(u=u)
    try:
        vector = continue_periods(start, [start.at.u, u], config)
        zbar = cal.charge(vector)
        report = chamber_descent(zbar, tie_tol=config.tie_tol, cap=config.descent_cap)
    except Staba2Error as exc:
        check.failures.append(f"base: {exc}")
        return check
    check.charge = zbar
    check.heart = report.heart.describe()
    if report.wall_flags or wall_gap(zbar, report.heart, config.tie_tol) < config.near_wall_tol:
        check.excluded = True
        logger.info("Sample u=%s excluded: within %g of a wall", u, config.near_wall_tol)
        return check

    for name, (branch, swapped) in branches.items():
        g = cal.loop_elements[name]
        target = 1 - u if swapped else u
        try:
            moved = continue_periods(branch, [branch.at.u, target], config)
            moved_charge = cal.charge(moved)
            expected = translate_charge(zbar, g)
            moved_report = chamber_descent(
                moved_charge, start=Heart(g), tie_tol=config.tie_tol, cap=config.descent_cap
            )
        except Staba2Error as exc:
            check.failures.append(f"{name}: {exc}")
            check.branches[name] = False
            continue
        distance = moved_charge.distance(expected)
        same_chamber = moved_report.heart == report.heart.translate(g)
        check.branches[name] = distance < CHARGE_TOL and same_chamber
        if distance >= CHARGE_TOL:
            check.failures.append(f"{name}: translated charge off by {distance:.3g}")
        if not same_chamber:
            check.failures.append(f"{name}: landed on {moved_report.heart.describe()}")
    if check.failures:
        logger.warning("Sample u=%s failed: %s", u, "; ".join(check.failures))
    return check


def _min_pair_distance(charges: Sequence[ProjectiveCharge]) -> float:
    return min((a.distance(b) for a, b in itertools.combinations(charges, 2)), default=math.inf)


def verify_correspondence(
    samples: Sequence[complex],
    cal: Calibration,
    config: Optional[Config] = None,
    u0: complex = U0,
) -> CorrespondenceReport:
    """Check that loops and the deck swap translate chambers by the calibrated elements.

    For each sample the charge is continued along the straight segment from u0, and
    again after the loops around 0 and 1 and after the deck path through u = 1/2. The
    moved charge must equal the translate of the original one and its chamber must be
    the translated chamber. Samples near a wall are excluded and logged; failures are
    collected per sample.
    """
    config = config or Config()
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    branches = _branch_starts(config, u0)
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        checks = list(executor.map(lambda u: _check_sample(complex(u), cal, config, start, branches), samples))
    charges = [c.charge for c in checks if c.charge is not None]
    report = CorrespondenceReport(checks, _min_pair_distance(charges))
    logger.info(
        "Correspondence over %d samples: %d excluded, pass rate %.3f",
        len(checks), len(checks) - len(report.checked), report.pass_rate,
    )
    return report


def orbifold_images(
    cal: Calibration, config: Optional[Config] = None, u0: complex = U0, far: float = 1e4
) -> Dict[str, ProjectiveCharge]:
    """Calibrated charges at u = 1/2 and far up the line Re u = 1/2."""
    config = config or Config()
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    return {
        "x": cal.charge(continue_periods(start, [u0, X_POINT], config)),
        "*": cal.charge(continue_periods(start, [u0, 0.5 + 1j * far], config)),
    }


# Triangle geometry

# (name, vertex in j, approach scale, expected angle, tolerance)
TRIANGLE_VERTICES = (
    ("x", 1.0, 1e-6, math.pi / 2, 0.05),
    ("*", math.inf, 1e-9, math.pi / 3, 0.05),
    ("o", 0.0, 1e-4, math.pi, 0.1),
)
TRIANGLE_CLEARANCE = 1e-6


def branch_point(j: complex) -> complex:
    """The u with 4u(1 - u) = j in the region Re u <= 1/2, Im u >= 0.

    Real j are sent to the boundary of the region: j < 0 to negative u, 0 < j < 1 to
    0 < u < 1/2 and j > 1 to the line Re u = 1/2.
    """
    w = 1 - complex(j)
    s = cmath.sqrt(complex(w.real, -abs(w.imag)))
    return (1 - s) / 2


def _approach_point(vertex: float, x: float) -> complex:
    return complex(1 / x) if math.isinf(vertex) else complex(vertex + x)


@dataclass
class VertexAngle:
    """Measured interior angle at one vertex of the single branch triangle."""
    name: str
    expected: float
    tolerance: float
    angle: float
    spread: float

    @property
    def flagged(self) -> bool:
        """The two approach scales disagree by more than half the tolerance."""
        return self.spread > self.tolerance / 2

    @property
    def passed(self) -> bool:
        return abs(self.angle - self.expected) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "vertex": self.name,
            "angle": self.angle,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "spread": self.spread,
            "flagged": self.flagged,
            "passed": self.passed,
        }


def _vertex_angle(
    name: str, vertex: float, scale: float, expected: float, tolerance: float,
    start: PeriodVector, config: Config,
) -> VertexAngle:
    offsets = (scale / 4, scale, 4 * scale)
    vectors = {}
    for sign in (1, -1):
        for x in offsets:
            u = branch_point(_approach_point(vertex, sign * x))
            vectors[sign * x] = continue_periods(start, [start.at.u, u], config)

    nearest = vectors[offsets[0]]
    invert = abs(nearest.p_alpha) > abs(nearest.p_beta)

    def image(x: float) -> complex:
        v = vectors[x]
        return v.p_beta / v.p_alpha if invert else v.p_alpha / v.p_beta

    def secant_angle(near: float, far: float) -> float:
        right = image(far) - image(near)
        left = image(-far) - image(-near)
        return abs(cmath.phase(left / right))

    fine = secant_angle(offsets[0], offsets[1])
    coarse = secant_angle(offsets[1], offsets[2])
    logger.debug("Vertex %s: angle %.6f (coarse %.6f)", name, fine, coarse)
    return VertexAngle(name, expected, tolerance, fine, abs(fine - coarse))


def triangle_geometry(config: Optional[Config] = None, u0: complex = U0) -> List[VertexAngle]:
    """Angles of the lambda period ratio image of the upper half j-plane.

    Each vertex is approached from both sides along the real j-axis; the angle is
    the one between the secants through two approach points on either side. A
    second, coarser pair of points gives the spread.
    """
    config = replace(config or Config(), clearance=TRIANGLE_CLEARANCE)
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    angles = [_vertex_angle(*vertex, start, config) for vertex in TRIANGLE_VERTICES]
    logger.info("Triangle angles: %s", ", ".join(f"{a.name}={a.angle:.4f}" for a in angles))
    return angles


# Lift of the period map

@dataclass
class LoopScalar:
    """Scalar by which a closed loop multiplies the unprojected lambda period vector."""
    name: str
    expected: int
    scalar: complex
    residual: float

    @property
    def passed(self) -> bool:
        return abs(self.scalar - self.expected) < LIFT_TOL and self.residual < LIFT_TOL

    def to_dict(self) -> dict:
        return {
            "loop": self.name,
            "expected": self.expected,
            "scalar": [self.scalar.real, self.scalar.imag],
            "residual": self.residual,
            "passed": self.passed,
        }


@dataclass
class LiftReport:
    loops: List[LoopScalar]
    lattice_center_sign: bool

    @property
    def passed(self) -> bool:
        return self.lattice_center_sign and all(loop.passed for loop in self.loops)

    def to_dict(self) -> dict:
        return {
            "loops": [loop.to_dict() for loop in self.loops],
            "lattice_center_sign": self.lattice_center_sign,
            "passed": self.passed,
        }


def lift_loops(u0: complex = U0) -> List[Tuple[str, List[complex], int]]:
    """Closed loops at u0 with the scalar their braid image predicts."""
    big = standard_loops(u0)["around_both"]
    square = [u0, u0 + 0.1, u0 + 0.1 + 0.1j, u0 + 0.1j, u0]
    return [
        ("trivial", square, 1),
        ("around_both^3", big + big[1:] * 2, -1),
        ("around_both^6", big + big[1:] * 5, 1),
        ("around_both then back", big + big[::-1][1:], 1),
    ]


def lift_check(config: Optional[Config] = None, u0: complex = U0, strict: bool = False) -> LiftReport:
    """Scalars by which central loops act on lambda periods before projectivising.

    Args:
        config: Numerical settings
        u0: Base point
        strict: Raise instead of reporting when a loop does not act by a sign

    Raises:
        LiftError: In strict mode, if a loop scales the periods by something other than +-1
    """
    config = config or Config()
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)
    v0 = start.as_array()
    loops = []
    for name, loop, expected in lift_loops(u0):
        v1 = continue_periods(start, loop, config).as_array()
        scalar = complex(np.vdot(v0, v1) / np.vdot(v0, v0))
        residual = float(np.linalg.norm(v1 - scalar * v0) / np.linalg.norm(v0))
        result = LoopScalar(name, expected, scalar, residual)
        if strict and not result.passed:
            raise LiftError(f"loop {name} scales the periods by {scalar:.6g} (residual {residual:.3g})")
        loops.append(result)
    center = (M_S @ M_T).power(3) == MINUS_IDENTITY
    report = LiftReport(loops, center)
    logger.info("Lift check: %s", "passed" if report.passed else "failed")
    return report


# Figure data

def default_grid(re_count: int = 13, im_values: Sequence[float] = (0.1, 0.3, 0.6, 1.0, 1.6, 2.5)) -> List[complex]:
    """Upper half j-plane grid for the period-map image."""
    return [complex(x, y) for y in im_values for x in np.linspace(-2.0, 3.0, re_count)]


def lozenge_image(
    grid: Optional[Sequence[complex]] = None,
    cal: Optional[Calibration] = None,
    config: Optional[Config] = None,
    u0: complex = U0,
) -> List[Dict[str, object]]:
    """Calibrated period ratios over a j-plane grid, one branch.

    Without a calibration the raw ratio p_alpha/p_beta is used.
    """
    config = config or Config()
    grid = list(default_grid() if grid is None else grid)
    start = basis_periods(u0, LAMBDA, config.quadrature_nodes)

    def row(j: complex) -> Dict[str, object]:
        j = complex(j)
        u = branch_point(j)
        out: Dict[str, object] = {"j_re": j.real, "j_im": j.imag, "u_re": u.real, "u_im": u.imag}
        try:
            vector = continue_periods(start, [u0, u], config)
        except Staba2Error as exc:
            logger.warning("Grid point j=%s failed: %s", j, exc)
            out.update({"w_re": "", "w_im": "", "error": str(exc)})
            return out
        w = cal.charge(vector).ratio if cal is not None else vector.ratio
        out.update({"w_re": w.real, "w_im": w.imag, "error": ""})
        return out

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        rows = list(executor.map(row, grid))
    logger.info("Period-map image over %d grid points", len(rows))
    return rows
