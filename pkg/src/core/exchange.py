"""Hearts of the exchange graph, simple tilts and balls of the exchange graph."""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .braid import (
    DELTA,
    IDENTITY_ELEMENT,
    SIGMA,
    AutElement,
    compose,
    ell_mod5,
    inverse,
    psl2_image,
    torus_is_trivial,
)
from .errors import RadiusGuardError
from .lattice import E_CLASS, S_CLASS, T_CLASS, X_CLASS, KClass

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_RADIUS_GUARD = 12


class Role(str, Enum):
    S = "S"
    T = "T"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Quotient(str, Enum):
    NONE = "none"
    SHIFT = "shift"
    SPH = "sph"


# Edge labels and the autoequivalence each one multiplies by on the right
TILT_GENERATORS: Dict[str, AutElement] = {
    "Delta": DELTA,
    "Sigma": SIGMA,
    "Delta^-1": inverse(DELTA),
    "Sigma^-1": inverse(SIGMA),
}

TILT_TABLE: Dict[Tuple[Role, Side], str] = {
    (Role.S, Side.RIGHT): "Delta",
    (Role.T, Side.RIGHT): "Sigma",
    (Role.T, Side.LEFT): "Delta^-1",
    (Role.S, Side.LEFT): "Sigma^-1",
}

INVERSE_LABEL = {
    "Delta": "Delta^-1",
    "Delta^-1": "Delta",
    "Sigma": "Sigma^-1",
    "Sigma^-1": "Sigma",
}

# letters of the presentation <Sigma, Delta | Sigma^3 = Delta^2>
TORUS_LETTERS = {
    "Sigma": ("sigma", 1),
    "Sigma^-1": ("sigma", -1),
    "Delta": ("delta", 1),
    "Delta^-1": ("delta", -1),
}

_CLASS_NAMES = {S_CLASS: "S", T_CLASS: "T", E_CLASS: "E", X_CLASS: "X"}


def class_label(klass: KClass) -> str:
    """Name of a class as an object up to shift parity, e.g. ``S[1]`` for -[S]."""
    if klass in _CLASS_NAMES:
        return _CLASS_NAMES[klass]
    if -klass in _CLASS_NAMES:
        return f"{_CLASS_NAMES[-klass]}[1]"
    return f"({klass.s},{klass.t})"


@dataclass(frozen=True)
class SimpleObject:
    """A simple of a heart: K-class, shift parity and the role it plays."""
    klass: KClass
    shift_tag: int
    role: Role

    @classmethod
    def of(cls, klass: KClass, role: Role) -> "SimpleObject":
        return cls(klass, 0 if klass.is_positive() else 1, role)

    def to_dict(self) -> dict:
        return {"class": self.klass.to_list(), "shift_tag": self.shift_tag, "role": self.role.value}


@dataclass(frozen=True)
class Heart:
    """The heart g.A0 of the exchange graph.

    Roles are transported by g: the T-role simple is g(T) and the S-role simple is g(S).
    """
    g: AutElement

    @property
    def simple_pair(self) -> Tuple[SimpleObject, SimpleObject]:
        """(T-role, S-role) simples."""
        image_s, image_t = self.g.k_matrix.columns()
        return SimpleObject.of(image_t, Role.T), SimpleObject.of(image_s, Role.S)

    def simple(self, role: Role) -> SimpleObject:
        t_simple, s_simple = self.simple_pair
        return t_simple if role is Role.T else s_simple

    @property
    def ext_class(self) -> KClass:
        """Class of the unique non-split extension of the two simples."""
        t_simple, s_simple = self.simple_pair
        return t_simple.klass + s_simple.klass

    def translate(self, a: AutElement) -> "Heart":
        """Left action a.(g.A0) = (a g).A0."""
        return Heart(compose(a, self.g))

    def describe(self) -> str:
        """Label in the (A, B)_C notation; shifts are reported by parity only."""
        t_simple, s_simple = self.simple_pair
        return f"({class_label(t_simple.klass)}, {class_label(s_simple.klass)})_{class_label(self.ext_class)}"

    def to_dict(self) -> dict:
        return {
            "g": self.g.to_dict(),
            "simples": [s.to_dict() for s in self.simple_pair],
            "ext_class": self.ext_class.to_list(),
            "label": self.describe(),
        }


def standard_heart() -> Heart:
    """The heart A0 of modules concentrated in degree zero, (T, S)_E."""
    return Heart(IDENTITY_ELEMENT)


def simple_tilt(h: Heart, role: Role, side: Side) -> Heart:
    """Tilt h at the simple playing ``role``.

    R_S, R_T, L_T, L_S multiply g on the right by Delta, Sigma, Delta^-1, Sigma^-1.
    """
    label = TILT_TABLE[(Role(role), Side(side))]
    return Heart(compose(h.g, TILT_GENERATORS[label]))


def transition(h1: Heart, h2: Heart) -> AutElement:
    """The unique element a with a.h1 = h2."""
    return compose(h2.g, inverse(h1.g))


def rotation_tilts(
    h: Heart, phases: Tuple[float, float], tol: float = 1e-9
) -> List[Tuple[str, Heart]]:
    """Tilts reachable by rotating a stability condition on h.

    Args:
        h: Current heart
        phases: (T-role phase, S-role phase)
        tol: Phase tie tolerance; on a tie all four tilts are returned

    Returns:
        List of (edge label, tilted heart)
    """
    phi_t, phi_s = phases
    if abs(phi_s - phi_t) <= tol:
        moves = [(Role.S, Side.RIGHT), (Role.T, Side.RIGHT), (Role.T, Side.LEFT), (Role.S, Side.LEFT)]
    elif phi_s > phi_t:
        # right tilt at the lower simple, left tilt at the higher one
        moves = [(Role.T, Side.RIGHT), (Role.S, Side.LEFT)]
    else:
        moves = [(Role.S, Side.RIGHT), (Role.T, Side.LEFT)]
    return [(TILT_TABLE[move], simple_tilt(h, *move)) for move in moves]


def all_tilts(h: Heart) -> List[Tuple[str, Heart]]:
    return [(label, Heart(compose(h.g, gen))) for label, gen in TILT_GENERATORS.items()]


def _vertex_key_function(quotient: Quotient) -> Callable[[AutElement], str]:
    if quotient is Quotient.NONE:
        return lambda g: g.key()
    if quotient is Quotient.SHIFT:
        def shift_key(g: AutElement) -> str:
            (a, b), (c, d) = psl2_image(g).entries
            return f"[{a},{b};{c},{d}]"
        return shift_key
    return lambda g: str(ell_mod5(g))


@dataclass
class ExchangeGraphBall:
    """A ball around A0 in the exchange graph or one of its quotients.

    Attributes:
        radius: Ball radius in tilts
        quotient: Which quotient the vertices live in
        depth: Vertex key -> distance from the standard heart
        representatives: Vertex key -> a group element representing it
        edges: Directed labelled edges (source, target, label); every tilt is stored
            with its reverse
    """
    radius: int
    quotient: Quotient
    depth: Dict[str, int] = field(default_factory=dict)
    representatives: Dict[str, AutElement] = field(default_factory=dict)
    edges: Set[Tuple[str, str, str]] = field(default_factory=set)

    @property
    def vertices(self) -> List[str]:
        return list(self.depth)

    @property
    def root(self) -> str:
        return _vertex_key_function(self.quotient)(IDENTITY_ELEMENT)

    def heart(self, key: str) -> Heart:
        return Heart(self.representatives[key])

    def key_of(self, g: AutElement) -> str:
        return _vertex_key_function(self.quotient)(g)

    def interior(self) -> List[str]:
        return [key for key, d in self.depth.items() if d < self.radius]

    def out_degree(self, key: str) -> int:
        return sum(1 for source, _, _ in self.edges if source == key)

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph(radius=self.radius, quotient=self.quotient.value)
        for key, d in self.depth.items():
            graph.add_node(key, depth=d)
        for source, target, label in sorted(self.edges):
            graph.add_edge(source, target, key=label, label=label)
        return graph

    def underlying_graph(self) -> nx.Graph:
        """Simple undirected graph obtained by forgetting labels, directions and loops."""
        graph = nx.Graph()
        graph.add_nodes_from(self.depth)
        graph.add_edges_from((s, t) for s, t, _ in self.edges if s != t)
        return graph

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "quotient": self.quotient.value,
            "vertices": [
                {
                    "key": key,
                    "depth": self.depth[key],
                    "triple": self.representatives[key].to_dict(),
                    "ell_mod5": ell_mod5(self.representatives[key]),
                }
                for key in sorted(self.depth, key=lambda k: (self.depth[k], k))
            ],
            "edges": [
                {"source": s, "target": t, "label": label} for s, t, label in sorted(self.edges)
            ],
        }

    def to_dot(self) -> str:
        """DOT text; each tilt and its reverse are merged into one undirected edge."""
        lines = [f'graph "exchange_{self.quotient.value}_r{self.radius}" {{']
        for key in sorted(self.depth, key=lambda k: (self.depth[k], k)):
            lines.append(f'  "{key}" [depth={self.depth[key]}];')
        for source, target, label in sorted(self.edges):
            if label.endswith("^-1"):
                continue
            lines.append(f'  "{source}" -- "{target}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def generate_ball(
    radius: int, quotient: str = "none", guard: int = DEFAULT_RADIUS_GUARD
) -> ExchangeGraphBall:
    """Breadth-first ball of the given radius around A0.

    Vertices are group elements (``none``), their classes modulo shifts (``shift``) or
    modulo the spherical twist group (``sph``). Both quotients are by normal subgroups,
    so right multiplication by a generator is well defined on classes.

    Raises:
        RadiusGuardError: If radius is negative or exceeds the guard
    """
    if radius < 0 or radius > guard:
        raise RadiusGuardError(f"radius {radius} outside [0, {guard}]")
    quotient = Quotient(quotient)
    key_of = _vertex_key_function(quotient)
    ball = ExchangeGraphBall(radius=radius, quotient=quotient)

    root_key = key_of(IDENTITY_ELEMENT)
    ball.depth[root_key] = 0
    ball.representatives[root_key] = IDENTITY_ELEMENT
    queue = deque([root_key])
    while queue:
        key = queue.popleft()
        if ball.depth[key] == radius:
            continue
        g = ball.representatives[key]
        for gen in TILT_GENERATORS.values():
            h = compose(g, gen)
            h_key = key_of(h)
            if h_key not in ball.depth:
                ball.depth[h_key] = ball.depth[key] + 1
                ball.representatives[h_key] = h
                queue.append(h_key)

    # induced labelled edges
    for key, g in ball.representatives.items():
        for label, gen in TILT_GENERATORS.items():
            target = key_of(compose(g, gen))
            if target in ball.depth:
                ball.edges.add((key, target, label))

    logger.info(
        "Generated %s ball of radius %d: %d vertices, %d edges",
        quotient.value, radius, len(ball.depth), len(ball.edges),
    )
    return ball


@dataclass
class RelationReport:
    """Outcome of checking closed walks of a ball against Sigma^3 = Delta^2."""
    max_length: int
    walks_checked: int = 0
    closed_walks: int = 0
    unexplained_closures: List[str] = field(default_factory=list)
    missed_closures: List[str] = field(default_factory=list)
    sigma3_equals_delta2: bool = False
    named_words: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.sigma3_equals_delta2 and not self.unexplained_closures and not self.missed_closures

    def to_dict(self) -> dict:
        return {
            "max_length": self.max_length,
            "walks_checked": self.walks_checked,
            "closed_walks": self.closed_walks,
            "unexplained_closures": self.unexplained_closures[:20],
            "missed_closures": self.missed_closures[:20],
            "sigma3_equals_delta2": self.sigma3_equals_delta2,
            "named_words": self.named_words,
            "passed": self.passed,
        }


def walk_endpoint(ball: ExchangeGraphBall, labels: Sequence[str]) -> Optional[str]:
    """Follow labelled edges from the root; None if the walk leaves the ball."""
    g = IDENTITY_ELEMENT
    for label in labels:
        g = compose(g, TILT_GENERATORS[label])
        if ball.key_of(g) not in ball.depth:
            return None
    return ball.key_of(g)


def _expand(word: Sequence[Tuple[str, int]]) -> List[str]:
    labels: List[str] = []
    for name, k in word:
        label = name if k > 0 else INVERSE_LABEL[name]
        labels.extend([label] * abs(k))
    return labels


def verify_relation_ball(ball: ExchangeGraphBall, max_length: int = 10) -> RelationReport:
    """Check that closed walks of the ball are exactly the consequences of Sigma^3 Delta^-2.

    Every walk from the root of length at most ``max_length`` that stays inside the ball
    is classified twice: by landing vertex (closed or not) and by the normal form of the
    presentation. The two verdicts must agree.
    """
    if ball.quotient is not Quotient.NONE:
        raise ValueError("relation check needs a ball generated with quotient='none'")
    report = RelationReport(max_length=max_length)
    root = ball.root
    labels = list(TILT_GENERATORS)
    path: List[str] = []

    def visit(g: AutElement) -> None:
        if path:
            report.walks_checked += 1
            closed = ball.key_of(g) == root
            consequence = torus_is_trivial(TORUS_LETTERS[label] for label in path)
            if closed:
                report.closed_walks += 1
            if closed and not consequence:
                report.unexplained_closures.append(" ".join(path))
            elif consequence and not closed:
                report.missed_closures.append(" ".join(path))
        if len(path) == max_length:
            return
        for label in labels:
            h = compose(g, TILT_GENERATORS[label])
            if ball.key_of(h) not in ball.depth:
                continue
            path.append(label)
            visit(h)
            path.pop()

    visit(IDENTITY_ELEMENT)

    sigma3 = walk_endpoint(ball, _expand([("Sigma", 3)]))
    delta2 = walk_endpoint(ball, _expand([("Delta", 2)]))
    report.sigma3_equals_delta2 = sigma3 is not None and sigma3 == delta2
    for name, word in (
        ("Sigma^6 Delta^-4", [("Sigma", 6), ("Delta", -4)]),
        ("Sigma Delta", [("Sigma", 1), ("Delta", 1)]),
    ):
        g = IDENTITY_ELEMENT
        for label in _expand(word):
            g = compose(g, TILT_GENERATORS[label])
        report.named_words[name] = g.is_identity()

    logger.info(
        "Relation check to length %d: %d walks, %d closed, %d failures",
        max_length, report.walks_checked, report.closed_walks,
        len(report.unexplained_closures) + len(report.missed_closures),
    )
    return report
