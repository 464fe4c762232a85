"""Periods of lambda = y dz and omega = dz/y on y^2 = z^3 - 3z + (4u - 2).

A period over the cycle surrounding two branch points is twice the integral along
the straight segment between them. With z = m + rho sin(theta) the square root
factor (z - ra)(z - rb) becomes (i rho cos(theta))^2, so both integrands are
smooth in theta and Gauss-Legendre converges spectrally.

Continuation tracks the period lattice: at each step the predicted period vector
is written in the basis of the two shortest triangle edges and the coordinates
are rounded to integers.
"""
import cmath
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import Config
from .errors import (
    ContinuationError,
    MonodromyAccuracyError,
    NearSingularError,
    SingularFiberError,
)
from .lattice import LatticeAut
from .stability import ProjectiveCharge

# Configure logging
logger = logging.getLogger(__name__)

OMEGA = "omega"
LAMBDA = "lambda"
FORMS = (OMEGA, LAMBDA)

U0 = 0.5 + 0.5j
SINGULAR_TOL = 1e-12
NEAR_SINGULAR_TOL = 1e-6
MAX_REFINEMENTS = 20
# lattice coordinates further than this from an integer make a step ambiguous
ROUNDING_MARGIN = 0.25

Polyline = Sequence[complex]


@dataclass(frozen=True)
class EllipticPoint:
    """A point u of the base with j = 4u(1 - u) and J = 1728/j."""
    u: complex

    def __post_init__(self):
        if abs(self.j) < SINGULAR_TOL:
            raise SingularFiberError()

    @property
    def j(self) -> complex:
        u = complex(self.u)
        return 4 * u * (1 - u)

    @property
    def J(self) -> complex:
        return 1728 / self.j


@dataclass(frozen=True)
class CycleBasis:
    """Root order and the root pairs encircled by alpha and beta."""
    root_order: Tuple[complex, complex, complex]
    alpha: Tuple[int, int] = (0, 1)
    beta: Tuple[int, int] = (1, 2)


@dataclass(frozen=True)
class BranchRecord:
    """One accepted continuation step."""
    u: complex
    edges: Tuple[Tuple[int, int], Tuple[int, int]]
    coefficients: Tuple[Tuple[int, int], Tuple[int, int]]
    rounding_residual: float

    def to_dict(self) -> dict:
        return {
            "u": [self.u.real, self.u.imag],
            "edges": [list(e) for e in self.edges],
            "coefficients": [list(r) for r in self.coefficients],
            "rounding_residual": self.rounding_residual,
        }


@dataclass
class PeriodVector:
    """Periods (over alpha, over beta) of one form at one point, with its branch history."""
    p_alpha: complex
    p_beta: complex
    form: str
    at: EllipticPoint
    basis: CycleBasis
    branch_log: List[BranchRecord] = field(default_factory=list)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_alpha, self.p_beta], dtype=complex)

    @property
    def ratio(self) -> complex:
        return self.p_alpha / self.p_beta

    def to_dict(self) -> dict:
        return {
            "u": [self.at.u.real, self.at.u.imag],
            "j": [self.at.j.real, self.at.j.imag],
            "form": self.form,
            "p_alpha": [self.p_alpha.real, self.p_alpha.imag],
            "p_beta": [self.p_beta.real, self.p_beta.imag],
            "ratio": [self.ratio.real, self.ratio.imag],
            "steps": len(self.branch_log),
        }


@dataclass(frozen=True)
class HypergeometricSpec:
    """Exponent differences at j = 0, infinity, 1 of a Gauss equation.

    The signed differences fix the parameters: gamma = 1 - e0,
    alpha = (gamma + e_inf - e1) / 2 and beta = alpha - e_inf.
    """
    exponents: Tuple[Fraction, Fraction, Fraction]

    @classmethod
    def omega(cls) -> "HypergeometricSpec":
        return cls((Fraction(0), Fraction(1, 3), Fraction(1, 2)))

    @classmethod
    def lambda_(cls) -> "HypergeometricSpec":
        return cls((Fraction(1), Fraction(1, 3), Fraction(1, 2)))

    @classmethod
    def for_form(cls, form: str) -> "HypergeometricSpec":
        return cls.omega() if form == OMEGA else cls.lambda_()

    @property
    def parameters(self) -> Tuple[Fraction, Fraction, Fraction]:
        e0, e_inf, e1 = self.exponents
        gamma = 1 - e0
        alpha = (gamma + e_inf - e1) / 2
        beta = alpha - e_inf
        return alpha, beta, gamma


def _check_form(form: str) -> None:
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def cubic_roots(u: complex) -> Tuple[complex, complex, complex]:
    """Roots of z^3 - 3z + (4u - 2), sorted by real then imaginary part.

    Raises:
        SingularFiberError: If u is (numerically) 0 or 1
    """
    EllipticPoint(complex(u))
    roots = np.roots([1.0, 0.0, -3.0, 4 * complex(u) - 2])
    ordered = sorted((complex(r) for r in roots), key=lambda r: (round(r.real, 12), r.imag))
    return ordered[0], ordered[1], ordered[2]


@lru_cache(maxsize=16)
def _gauss_legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return x * (np.pi / 2), w * (np.pi / 2)


def segment_period(ra: complex, rb: complex, rc: complex, form: str, nodes: int = 256) -> complex:
    """Twice the integral of the form along the segment from ra to rb.

    The square root is continuous along the segment as long as rc is not on it.
    """
    rho = (rb - ra) / 2
    c = (ra + rb) / 2 - rc
    theta, weights = _gauss_legendre(nodes)
    sin, cos = np.sin(theta), np.cos(theta)
    w = cmath.sqrt(c) * np.sqrt(1 + rho * sin / c)
    if form == OMEGA:
        integrand = 1 / (1j * w)
    else:
        integrand = 1j * rho ** 2 * cos ** 2 * w
    return complex(2 * np.sum(weights * integrand))


def _min_separation(roots: Sequence[complex]) -> float:
    return min(abs(a - b) for a, b in itertools.combinations(roots, 2))


def _edge_periods(
    roots: Sequence[complex], edges: Sequence[Tuple[int, int]], form: str, nodes: int
) -> np.ndarray:
    if _min_separation(roots) < NEAR_SINGULAR_TOL:
        raise NearSingularError()
    values = []
    for i, k in edges:
        other = 3 - i - k
        values.append(segment_period(roots[i], roots[k], roots[other], form, nodes))
    return np.array(values, dtype=complex)


def period(u: complex, cycle: str, form: str, nodes: int = 256) -> complex:
    """Period of ``form`` over ``alpha`` (r1, r2) or ``beta`` (r2, r3) at u, roots in sorted order."""
    _check_form(form)
    basis = CycleBasis(cubic_roots(u))
    edge = {"alpha": basis.alpha, "beta": basis.beta}[cycle]
    return complex(_edge_periods(basis.root_order, [edge], form, nodes)[0])


def basis_periods(u: complex, form: str, nodes: int = 256) -> PeriodVector:
    """Period vector over the sorted-root basis at u."""
    _check_form(form)
    point = EllipticPoint(complex(u))
    basis = CycleBasis(cubic_roots(u))
    values = _edge_periods(basis.root_order, [basis.alpha, basis.beta], form, nodes)
    return PeriodVector(complex(values[0]), complex(values[1]), form, point, basis)


def _shortest_edges(roots: Sequence[complex]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    edges = sorted(itertools.combinations(range(3), 2), key=lambda e: abs(roots[e[0]] - roots[e[1]]))
    return edges[0], edges[1]


def lattice_coordinates(vector: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coordinates of each entry of ``vector`` in the R-basis ``basis`` of C.

    Returns:
        Array of shape (len(vector), 2)
    """
    a = np.array([[basis[0].real, basis[1].real], [basis[0].imag, basis[1].imag]])
    rhs = np.array([np.real(vector), np.imag(vector)])
    return np.linalg.solve(a, rhs).T


class _AmbiguousStep(Exception):
    pass


def _match_roots(previous: Sequence[complex], current: Sequence[complex]) -> Tuple[complex, ...]:
    best = min(
        itertools.permutations(range(3)),
        key=lambda p: sum(abs(current[p[i]] - previous[i]) for i in range(3)),
    )
    matched = tuple(current[best[i]] for i in range(3))
    shift = max(abs(matched[i] - previous[i]) for i in range(3))
    if shift > 0.5 * _min_separation(current):
        raise _AmbiguousStep(f"root assignment ambiguous (moved {shift:.3g})")
    return matched


class _LatticeTracker:
    """Continuation state: tracked roots and the integer matrix expressing the
    tracked cycles in the shortest-edge segment basis."""

    def __init__(self, start: PeriodVector, config: Config):
        self.config = config
        self.u = complex(start.at.u)
        self.roots = _match_roots(start.basis.root_order, cubic_roots(self.u))
        self.edges = _shortest_edges(self.roots)
        seg = {f: _edge_periods(self.roots, self.edges, f, config.quadrature_nodes) for f in FORMS}
        coords = lattice_coordinates(start.as_array(), seg[start.form])
        self.coefficients = np.rint(coords)
        if np.max(np.abs(coords - self.coefficients)) > 1e-6:
            raise ContinuationError("start vector is not a lattice vector of the segment basis")
        self.vectors = {f: self.coefficients @ seg[f] for f in FORMS}
        self.previous: Optional[Tuple[complex, Dict[str, np.ndarray]]] = None
        self.log: List[BranchRecord] = []

    def _predict(self, target: complex) -> Dict[str, np.ndarray]:
        if self.previous is None:
            return dict(self.vectors)
        prev_u, prev_vectors = self.previous
        scale = (target - self.u) / (self.u - prev_u)
        return {f: self.vectors[f] + (self.vectors[f] - prev_vectors[f]) * scale for f in FORMS}

    def _step(self, target: complex) -> None:
        if min(abs(target), abs(target - 1)) < self.config.clearance:
            raise ContinuationError(f"path comes within clearance of a singular fibre at u={target}")
        roots = _match_roots(self.roots, cubic_roots(target))
        edges = _shortest_edges(roots)
        nodes = self.config.quadrature_nodes
        seg = {f: _edge_periods(roots, edges, f, nodes) for f in FORMS}
        predicted = self._predict(target)

        coords = lattice_coordinates(predicted[OMEGA], seg[OMEGA])
        coefficients = np.rint(coords)
        residual = float(np.max(np.abs(coords - coefficients)))
        if residual > ROUNDING_MARGIN:
            raise _AmbiguousStep(f"omega coordinates {residual:.3f} from integers")
        if round(abs(np.linalg.det(coefficients))) != 1:
            raise _AmbiguousStep("rounded coefficients are not unimodular")
        lam = lattice_coordinates(predicted[LAMBDA], seg[LAMBDA])
        if np.max(np.abs(lam - coefficients)) > ROUNDING_MARGIN:
            raise _AmbiguousStep("lambda periods disagree with the omega lattice")

        self.previous = (self.u, self.vectors)
        self.u, self.roots, self.edges = target, roots, edges
        self.coefficients = coefficients
        self.vectors = {f: coefficients @ seg[f] for f in FORMS}
        ints = tuple(tuple(int(x) for x in row) for row in coefficients)
        self.log.append(BranchRecord(target, edges, ints, residual))

    def advance(self, target: complex, depth: int = 0) -> None:
        try:
            self._step(target)
        except _AmbiguousStep as exc:
            if depth >= MAX_REFINEMENTS:
                raise ContinuationError(f"step to u={target} still ambiguous after {depth} refinements: {exc}")
            logger.debug("Refining step %s -> %s (%s)", self.u, target, exc)
            middle = (self.u + target) / 2
            self.advance(middle, depth + 1)
            self.advance(target, depth + 1)

    def follow(self, path: Polyline) -> None:
        points = [complex(p) for p in path]
        if points and abs(points[0] - self.u) > 1e-12:
            points.insert(0, self.u)
        for a, b in zip(points, points[1:]):
            pos = a
            while abs(b - pos) > 1e-15:
                # geometric steps: proportional to the distance from the singular fibres
                distance = min(abs(pos), abs(pos - 1))
                h = self.config.cont_step * max(distance, self.config.clearance)
                pos = b if abs(b - pos) <= h else pos + h * (b - pos) / abs(b - pos)
                self.advance(pos)

    def vector(self, form: str, start: PeriodVector) -> PeriodVector:
        values = self.vectors[form]
        return PeriodVector(
            complex(values[0]), complex(values[1]), form, EllipticPoint(self.u),
            CycleBasis(tuple(self.roots)), start.branch_log + self.log,
        )


def continue_periods(start: PeriodVector, path: Polyline, config: Optional[Config] = None) -> PeriodVector:
    """Analytic continuation of a period vector along a polyline starting at its point.

    Raises:
        ContinuationError: If the path leaves the clearance or a step cannot be resolved
    """
    tracker = _LatticeTracker(start, config or Config())
    tracker.follow(path)
    return tracker.vector(start.form, start)


@dataclass
class MonodromyResult:
    """An integer matrix measured by continuation.

    Attributes:
        matrix: M with (continued periods) = M (start periods)
        residual: Distance of the measured real matrix from M, including the
            lambda consistency check
        max_step_rounding: Worst fractional lattice coordinate met along the path
        steps: Number of accepted continuation steps
    """
    matrix: LatticeAut
    residual: float
    max_step_rounding: float
    steps: int

    @property
    def trace(self) -> int:
        return self.matrix.trace()

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.to_list(),
            "trace": self.trace,
            "residual": self.residual,
            "max_step_rounding": self.max_step_rounding,
            "steps": self.steps,
        }


def _integer_transition(
    target: Dict[str, np.ndarray], source: Dict[str, np.ndarray], int_tol: float
) -> Tuple[LatticeAut, float]:
    """Integer N with target = N source, checked on both forms."""
    measured = lattice_coordinates(target[OMEGA], source[OMEGA])
    rounded = np.rint(measured)
    residual = float(np.max(np.abs(measured - rounded)))
    lam_error = np.abs(target[LAMBDA] - rounded @ source[LAMBDA])
    residual = max(residual, float(np.max(lam_error / np.max(np.abs(source[LAMBDA])))))
    if residual > int_tol:
        raise MonodromyAccuracyError(f"continuation accuracy insufficient (residual {residual:.3g})")
    (a, b), (c, d) = (tuple(int(x) for x in row) for row in rounded)
    if a * d - b * c != 1:
        raise MonodromyAccuracyError(f"measured matrix {rounded.tolist()} is not in SL(2, Z)")
    return LatticeAut(((a, b), (c, d))), residual


def _run(path: Polyline, config: Config) -> Tuple[Dict[str, np.ndarray], _LatticeTracker]:
    start = basis_periods(path[0], OMEGA, config.quadrature_nodes)
    base = {f: basis_periods(path[0], f, config.quadrature_nodes).as_array() for f in FORMS}
    tracker = _LatticeTracker(start, config)
    tracker.follow(path)
    return base, tracker


def monodromy(loop: Polyline, config: Optional[Config] = None) -> MonodromyResult:
    """Monodromy of the period lattice along a closed loop.

    Raises:
        ValueError: If the loop is not closed
        MonodromyAccuracyError: If the measured transition is not integral
    """
    config = config or Config()
    if abs(complex(loop[-1]) - complex(loop[0])) > 1e-12:
        raise ValueError("monodromy needs a closed loop")
    base, tracker = _run(loop, config)
    matrix, residual = _integer_transition(tracker.vectors, base, config.int_tol)
    rounding = max((r.rounding_residual for r in tracker.log), default=0.0)
    logger.info("Monodromy along %d steps: %s", len(tracker.log), matrix.to_list())
    return MonodromyResult(matrix, residual, rounding, len(tracker.log))


def deck_transition(path: Polyline, config: Optional[Config] = None) -> MonodromyResult:
    """Continue from u to 1 - u, then pull back along (z, y) -> (-z, i y).

    The isomorphism maps the fibre over u to the fibre over 1 - u and pulls
    omega back to i omega and lambda back to -i lambda, so the returned matrix
    N satisfies (-i Q_omega, i Q_lambda) = N (periods at u).
    """
    config = config or Config()
    u_start, u_end = complex(path[0]), complex(path[-1])
    if abs(u_end - (1 - u_start)) > 1e-12:
        raise ValueError("deck transition path must end at 1 - u")
    base, tracker = _run(path, config)
    pulled = {OMEGA: -1j * tracker.vectors[OMEGA], LAMBDA: 1j * tracker.vectors[LAMBDA]}
    matrix, residual = _integer_transition(pulled, base, config.int_tol)
    rounding = max((r.rounding_residual for r in tracker.log), default=0.0)
    logger.info("Deck transition along %d steps: %s", len(tracker.log), matrix.to_list())
    return MonodromyResult(matrix, residual, rounding, len(tracker.log))


def _arc(center: complex, start: complex, sweep: float, samples: int) -> List[complex]:
    radius = start - center
    return [center + radius * cmath.exp(1j * sweep * k / samples) for k in range(samples + 1)]


def standard_loops(u0: complex = U0, samples: int = 96, big_radius: float = 2.0) -> Dict[str, List[complex]]:
    """Counterclockwise loops based at u0 around 0, around 1 and around both."""
    top = 0.5 + 1j * big_radius
    big = [u0] + _arc(0.5, top, 2 * math.pi, samples) + [u0]
    return {
        "around_0": _arc(0, u0, 2 * math.pi, samples),
        "around_1": _arc(1, u0, 2 * math.pi, samples),
        "around_both": big,
    }


def deck_paths(u0: complex = U0, samples: int = 96, big_radius: float = 2.0) -> Dict[str, List[complex]]:
    """Paths from u0 to 1 - u0: straight through u = 1/2, and around through real u > 1."""
    top = 0.5 + 1j * big_radius
    bottom = 0.5 - 1j * big_radius
    return {
        "x": [u0, 0.5, 1 - u0],
        "*": [u0] + _arc(0.5, top, -math.pi, samples) + [bottom, 1 - u0],
    }


# Kodaira fibres and their Euler numbers
EULER_NUMBERS = {
    "I0": 0, "I0*": 6, "II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10,
}


def _euler(kind: str) -> int:
    if kind in EULER_NUMBERS:
        return EULER_NUMBERS[kind]
    n = int(kind[1:].rstrip("*"))
    return n + 6 if kind.endswith("*") else n


def kodaira_candidates(m: LatticeAut) -> List[str]:
    """Kodaira fibre types whose local monodromy is conjugate to m or its inverse."""
    (a, b), (c, d) = m.entries
    trace = m.trace()
    if trace == 2:
        n = math.gcd(math.gcd(a - 1, b), math.gcd(c, d - 1))
        return ["I0"] if n == 0 else [f"I{n}"]
    if trace == -2:
        n = math.gcd(math.gcd(a + 1, b), math.gcd(c, d + 1))
        return ["I0*"] if n == 0 else [f"I{n}*"]
    return {1: ["II", "II*"], 0: ["III", "III*"], -1: ["IV", "IV*"]}.get(trace, [])


def select_fibres(matrices: Sequence[LatticeAut], total: int = 12) -> List[Tuple[str, ...]]:
    """Choices of one candidate per matrix whose Euler numbers sum to ``total``."""
    options = [kodaira_candidates(m) for m in matrices]
    return [combo for combo in itertools.product(*options) if sum(_euler(k) for k in combo) == total]


# Hypergeometric check

def hypergeometric_residual(
    f: Callable[[complex], np.ndarray], u: complex, spec: HypergeometricSpec, h: float = 1e-3
) -> float:
    """Relative residual of the Gauss operator in j applied to f(u).

    Derivatives in u come from 5-point central differences and are converted with
    j_u = 4 - 8u and j_uu = -8. The step is ``h`` scaled by min(1, |j|, |j - 1|)
    so the stencil stays clear of the singular points j = 0 and j = 1.
    """
    alpha, beta, gamma = (float(x) for x in spec.parameters)
    u = complex(u)
    j = 4 * u * (1 - u)
    h = h * min(1.0, abs(j), abs(j - 1))
    values = [np.atleast_1d(np.asarray(f(u + k * h), dtype=complex)) for k in (-2, -1, 0, 1, 2)]
    fm2, fm1, f0, fp1, fp2 = values
    f_u = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    f_uu = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    j_u, j_uu = 4 - 8 * u, -8.0
    f_j = f_u / j_u
    f_jj = (f_uu - f_j * j_uu) / j_u ** 2
    terms = [j * (1 - j) * f_jj, (gamma - (alpha + beta + 1) * j) * f_j, -alpha * beta * f0]
    total = terms[0] + terms[1] + terms[2]
    scale = np.abs(terms[0]) + np.abs(terms[1]) + np.abs(terms[2])
    return float(np.max(np.abs(total) / scale))


def pf_residual(u: complex, form: str, config: Optional[Config] = None, h: float = 1e-3) -> float:
    """Hypergeometric residual of both basis periods of ``form`` at u.

    Raises:
        ValueError: If j or j - 1 is within 0.05 of zero
    """
    _check_form(form)
    config = config or Config()
    point = EllipticPoint(complex(u))
    if abs(point.j) <= 0.05 or abs(point.j - 1) <= 0.05:
        raise ValueError(f"u={u} too close to j = 0 or j = 1 for the residual check")
    start = basis_periods(u, form, config.quadrature_nodes)

    def local(v: complex) -> np.ndarray:
        if v == start.at.u:
            return start.as_array()
        return continue_periods(start, [start.at.u, v], config).as_array()

    return hypergeometric_residual(local, u, HypergeometricSpec.for_form(form), h)


def pf_arc(samples: int = 20, center: complex = 0.5, radius: float = 0.4) -> List[complex]:
    """Sample points u = center + radius e^(i psi), kept off the real axis."""
    return [center + radius * cmath.exp(2j * math.pi * (k + 0.5) / samples) for k in range(samples)]


def lambda_derivative_ratio(u: complex, config: Optional[Config] = None, h: float = 1e-3) -> np.ndarray:
    """d/du of the lambda periods divided by the omega periods, per cycle.

    Both forms use the sorted-root basis at u; the derivative is a 4th order
    central difference of the continued lambda periods.
    """
    config = config or Config()
    u = complex(u)
    start = basis_periods(u, LAMBDA, config.quadrature_nodes)
    omega = basis_periods(u, OMEGA, config.quadrature_nodes).as_array()
    near = {k: continue_periods(start, [u, u + k * h], config).as_array() for k in (-2, -1, 1, 2)}
    derivative = (-near[2] + 8 * near[1] - 8 * near[-1] + near[-2]) / (12 * h)
    return derivative / omega


def _mirror(vector: PeriodVector) -> PeriodVector:
    """Period vector at conj(u) obtained by conjugating the one at u."""
    return PeriodVector(
        vector.p_alpha.conjugate(), vector.p_beta.conjugate(), vector.form,
        EllipticPoint(complex(vector.at.u).conjugate()),
        CycleBasis(tuple(r.conjugate() for r in vector.basis.root_order)),
        list(vector.branch_log),
    )


def continued_vectors(u: complex, config: Optional[Config] = None, u0: complex = U0) -> Dict[str, PeriodVector]:
    """Principal-branch period vectors of both forms at u.

    The real u-axis is where j is real, so it carries the branch cuts. Points on
    the basepoint's side are reached along the straight line from u0; points on
    the other side are the conjugates of the values at conj(u).
    """
    config = config or Config()
    u, u0 = complex(u), complex(u0)
    if u.imag * u0.imag < 0:
        mirrored = continued_vectors(u.conjugate(), config, u0)
        return {form: _mirror(vector) for form, vector in mirrored.items()}
    starts = {form: basis_periods(u0, form, config.quadrature_nodes) for form in FORMS}
    if u == u0:
        return starts
    tracker = _LatticeTracker(starts[OMEGA], config)
    tracker.follow([u0, u])
    return {form: tracker.vector(form, starts[form]) for form in FORMS}


def continued_vector(u: complex, form: str = LAMBDA, config: Optional[Config] = None, u0: complex = U0) -> PeriodVector:
    _check_form(form)
    return continued_vectors(u, config, u0)[form]


def period_map(u: complex, form: str = LAMBDA, config: Optional[Config] = None, u0: complex = U0) -> ProjectiveCharge:
    """[period over alpha : period over beta] on the principal branch."""
    vector = continued_vector(u, form, config, u0)
    return ProjectiveCharge.of(vector.p_alpha, vector.p_beta)


def reduce_modular(tau: complex) -> complex:
    """Representative of tau in the standard fundamental domain of SL(2, Z)."""
    conj = tau.imag < 0
    if conj:
        tau = tau.conjugate()
    for _ in range(1000):
        tau = complex(tau.real - round(tau.real), tau.imag)
        if abs(tau) >= 1 - 1e-12:
            break
        tau = -1 / tau
    return tau.conjugate() if conj else tau


def lattice_tau(omega: PeriodVector) -> complex:
    """Reduced modulus of the period lattice spanned by the omega periods."""
    r = omega.ratio
    return reduce_modular(r if r.imag > 0 else 1 / r)


def sweep(us: Sequence[complex], config: Optional[Config] = None) -> List[Dict[str, object]]:
    """Rows (u, j, pAlpha, pBeta, ratio, tau) of principal-branch lambda periods.

    tau is the reduced modulus of the omega lattice at u.
    """
    config = config or Config()

    def row(u: complex) -> Dict[str, object]:
        u = complex(u)
        out: Dict[str, object] = {"u_re": u.real, "u_im": u.imag}
        try:
            vectors = continued_vectors(u, config)
        except (ContinuationError, SingularFiberError, NearSingularError) as exc:
            logger.warning("Period sweep point %s failed: %s", u, exc)
            out["error"] = str(exc)
            return out
        vector = vectors[LAMBDA]
        j = vector.at.j
        tau = lattice_tau(vectors[OMEGA])
        out.update({
            "j_re": j.real, "j_im": j.imag,
            "p_alpha_re": vector.p_alpha.real, "p_alpha_im": vector.p_alpha.imag,
            "p_beta_re": vector.p_beta.real, "p_beta_im": vector.p_beta.imag,
            "ratio_re": vector.ratio.real, "ratio_im": vector.ratio.imag,
            "tau_re": tau.real, "tau_im": tau.imag,
            "error": "",
        })
        return out

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        rows = list(executor.map(row, us))
    logger.info("Period sweep over %d points", len(rows))
    return rows
