"""Central charges, phases, widths and the chamber structure of projective charges."""
import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .braid import AutElement
from .errors import (
    DescentError,
    InadmissibleChargeError,
    MasslessClassError,
    PhaseRangeError,
    VanishingMassError,
)
from .exchange import Heart, all_tilts, rotation_tilts, standard_heart
from .lattice import KClass

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_TIE_TOL = 1e-9
DEFAULT_DESCENT_CAP = 64

# stable object names: s1 is the T-role simple, s2 the S-role simple
S1, S2, EXT = "s1", "s2", "ext"


@dataclass(frozen=True)
class CentralCharge:
    """A group homomorphism Z: K(D) -> C given by (Z(S), Z(T))."""
    z_s: complex
    z_t: complex

    def __post_init__(self):
        if self.z_s == 0 and self.z_t == 0:
            raise ValueError("central charge must not vanish identically")

    def __call__(self, c: KClass) -> complex:
        return c.s * complex(self.z_s) + c.t * complex(self.z_t)

    def projective(self) -> "ProjectiveCharge":
        return ProjectiveCharge.of(self.z_s, self.z_t)


@dataclass(frozen=True)
class ProjectiveCharge:
    """A point [Z(S) : Z(T)] of the projective line.

    The pair is stored normalised so that Z(T) = 1, or as (1, 0) at infinity.
    """
    z_s: complex
    z_t: complex

    @classmethod
    def of(cls, z_s: complex, z_t: complex) -> "ProjectiveCharge":
        z_s, z_t = complex(z_s), complex(z_t)
        if z_s == 0 and z_t == 0:
            raise ValueError("projective charge needs a nonzero pair")
        if z_t == 0:
            return cls(1 + 0j, 0j)
        return cls(z_s / z_t, 1 + 0j)

    @classmethod
    def from_ratio(cls, w: complex) -> "ProjectiveCharge":
        return cls.of(w, 1)

    @property
    def ratio(self) -> complex:
        """Z(S)/Z(T); infinite at the point (1 : 0)."""
        return self.z_s / self.z_t if self.z_t != 0 else complex(math.inf, 0)

    def charge(self) -> CentralCharge:
        return CentralCharge(self.z_s, self.z_t)

    def distance(self, other: "ProjectiveCharge") -> float:
        """Chordal distance on the Riemann sphere."""
        a, b = self.z_s, self.z_t
        c, d = other.z_s, other.z_t
        num = abs(a * d - b * c)
        den = math.sqrt((abs(a) ** 2 + abs(b) ** 2) * (abs(c) ** 2 + abs(d) ** 2))
        return num / den

    def to_dict(self) -> dict:
        return {"z_s": [self.z_s.real, self.z_s.imag], "z_t": [self.z_t.real, self.z_t.imag]}


@dataclass(frozen=True)
class StableSet:
    """Stable objects of a heart at a charge; on a wall only the simples are semistable."""
    objects: FrozenSet[str]
    semistable_wall: bool = False

    def __contains__(self, name: str) -> bool:
        return name in self.objects

    def __len__(self) -> int:
        return len(self.objects)


@dataclass
class ChamberReport:
    """Result of a chamber descent.

    Attributes:
        heart: Heart minimising the width
        width: Width on that heart, in half turns
        stable_set: Stable objects on the heart
        wall_flags: Labels of neighbouring tilts that tie with the minimum
        phases: (T-role phase, S-role phase)
        steps: Number of tilts performed
    """
    heart: Heart
    width: float
    stable_set: StableSet
    wall_flags: Tuple[str, ...] = ()
    phases: Tuple[float, float] = (0.0, 0.0)
    steps: int = 0

    def to_dict(self) -> dict:
        return {
            "heart": self.heart.to_dict(),
            "width": self.width,
            "stable_set": sorted(self.stable_set.objects),
            "semistable_wall": self.stable_set.semistable_wall,
            "wall_flags": list(self.wall_flags),
            "phases": list(self.phases),
            "steps": self.steps,
        }


def phase(Z: CentralCharge, c: KClass) -> float:
    """Phase phi in (0, 1] with Z(c) = r exp(i pi phi).

    Raises:
        MasslessClassError: If Z(c) = 0
        PhaseRangeError: If Z(c) lies in the open lower half plane or on the positive reals
    """
    z = Z(c)
    if z == 0:
        raise MasslessClassError()
    if z.imag == 0:
        if z.real < 0:
            return 1.0
        raise PhaseRangeError(f"charge {z} has no phase in (0, 1]")
    phi = cmath.phase(z) / math.pi
    if phi <= 0:
        raise PhaseRangeError(f"charge {z} has no phase in (0, 1]")
    return phi


def _simple_charges(zbar: ProjectiveCharge, h: Heart) -> Tuple[complex, complex]:
    Z = zbar.charge()
    t_simple, s_simple = h.simple_pair
    z_t, z_s = Z(t_simple.klass), Z(s_simple.klass)
    if z_t == 0 or z_s == 0:
        raise VanishingMassError()
    return z_t, z_s


def relative_phase(zbar: ProjectiveCharge, h: Heart) -> Optional[float]:
    """arg(Z(S-role)/Z(T-role))/pi in (-1, 1), or None when the simple rays are anti-parallel."""
    z_t, z_s = _simple_charges(zbar, h)
    delta = cmath.phase(z_s / z_t) / math.pi
    if abs(delta) >= 1.0:
        return None
    return delta


def heart_phases(zbar: ProjectiveCharge, h: Heart) -> Optional[Tuple[float, float]]:
    """Phases (phi_T, phi_S) of the simples of h, or None if h is inadmissible.

    The rotation representative puts the bisector of the two simple rays at phase 1/2.

    Raises:
        VanishingMassError: If a simple of h has zero charge
    """
    delta = relative_phase(zbar, h)
    if delta is None:
        return None
    return 0.5 - delta / 2, 0.5 + delta / 2


def _require_phases(zbar: ProjectiveCharge, h: Heart) -> Tuple[float, float]:
    phases = heart_phases(zbar, h)
    if phases is None:
        raise InadmissibleChargeError(f"{zbar} is inadmissible on {h.describe()}")
    return phases


def stable_set(zbar: ProjectiveCharge, h: Heart, tol: float = DEFAULT_TIE_TOL) -> StableSet:
    """Stable objects among the two simples and their extension."""
    phi_t, phi_s = _require_phases(zbar, h)
    if abs(phi_s - phi_t) <= tol:
        return StableSet(frozenset({S1, S2}), semistable_wall=True)
    if phi_s > phi_t:
        return StableSet(frozenset({S1, S2, EXT}))
    return StableSet(frozenset({S1, S2}))


def ext_phase(zbar: ProjectiveCharge, h: Heart) -> float:
    """Phase of the extension object in the same rotation frame as heart_phases."""
    phi_t, _ = _require_phases(zbar, h)
    z_t, _ = _simple_charges(zbar, h)
    z_e = zbar.charge()(h.ext_class)
    if z_e == 0:
        raise MasslessClassError()
    return phi_t + cmath.phase(z_e / z_t) / math.pi


def width(zbar: ProjectiveCharge, h: Heart) -> float:
    """Difference of the maximal and minimal phase on h, in half turns."""
    phi_t, phi_s = _require_phases(zbar, h)
    return abs(phi_s - phi_t)


def _try_width(zbar: ProjectiveCharge, h: Heart) -> Optional[float]:
    try:
        delta = relative_phase(zbar, h)
    except VanishingMassError:
        return None
    return None if delta is None else abs(delta)


def _neighbours(zbar: ProjectiveCharge, h: Heart, tol: float) -> List[Tuple[str, Heart, float]]:
    phases = _require_phases(zbar, h)
    result = []
    for label, tilted in rotation_tilts(h, phases, tol):
        w = _try_width(zbar, tilted)
        if w is not None:
            result.append((label, tilted, w))
    return result


def chamber_descent(
    zbar: ProjectiveCharge,
    start: Optional[Heart] = None,
    tie_tol: float = DEFAULT_TIE_TOL,
    cap: int = DEFAULT_DESCENT_CAP,
) -> ChamberReport:
    """Greedy width descent over rotation-accessible tilts.

    Args:
        zbar: Projective charge to locate
        start: Heart to start from (defaults to A0)
        tie_tol: Width tie tolerance in half turns
        cap: Maximum number of tilts

    Returns:
        ChamberReport for the heart where no neighbour is strictly narrower

    Raises:
        InadmissibleChargeError: If neither the start nor any neighbour admits zbar
        DescentError: If the cap is exceeded
    """
    heart = start or standard_heart()
    current = _try_width(zbar, heart)
    if current is None:
        candidates = [(w, label, h) for label, h in all_tilts(heart)
                      if (w := _try_width(zbar, h)) is not None]
        if not candidates:
            raise InadmissibleChargeError(f"{zbar} is inadmissible near the start heart")
        current, label, heart = min(candidates, key=lambda item: item[0])
        logger.debug("Start heart inadmissible, moved along %s", label)

    steps = 0
    while True:
        neighbours = _neighbours(zbar, heart, tie_tol)
        better = [item for item in neighbours if item[2] < current - tie_tol]
        if not better:
            break
        label, heart, current = min(better, key=lambda item: item[2])
        steps += 1
        logger.debug("Descent step %d along %s, width %.12f", steps, label, current)
        if steps > cap:
            raise DescentError()

    walls = tuple(label for label, _, w in neighbours if abs(w - current) <= tie_tol)
    return ChamberReport(
        heart=heart,
        width=current,
        stable_set=stable_set(zbar, heart, tie_tol),
        wall_flags=walls,
        phases=_require_phases(zbar, heart),
        steps=steps,
    )


@dataclass(frozen=True)
class DomainVerdict:
    """Position of a projective charge relative to the fundamental domain of A0."""
    kind: str
    walls: Tuple[str, ...] = ()


def fundamental_domain_test(zbar: ProjectiveCharge, tie_tol: float = DEFAULT_TIE_TOL) -> DomainVerdict:
    """Classify zbar as ``interior``, ``wall`` or ``exterior`` for the standard heart."""
    heart = standard_heart()
    current = _try_width(zbar, heart)
    if current is None:
        return DomainVerdict("exterior")
    neighbours = _neighbours(zbar, heart, tie_tol)
    if any(w < current - tie_tol for _, _, w in neighbours):
        return DomainVerdict("exterior")
    walls = tuple(label for label, _, w in neighbours if abs(w - current) <= tie_tol)
    if walls:
        return DomainVerdict("wall", walls)
    return DomainVerdict("interior")


def translate_charge(zbar: ProjectiveCharge, g: AutElement) -> ProjectiveCharge:
    """The charge Z o g^-1, so that g.h sees the same simple rays as h did."""
    (a, b), (c, d) = g.k_matrix.inverse().entries
    z_s, z_t = zbar.z_s, zbar.z_t
    return ProjectiveCharge.of(z_s * a + z_t * c, z_s * b + z_t * d)


def orbifold_charges() -> Dict[str, ProjectiveCharge]:
    """The Z/2 point (right angle) and the Z/3 point (S at 120 degrees from T)."""
    return {
        "x": ProjectiveCharge.of(1, 1j),
        "*": ProjectiveCharge.of(cmath.exp(2j * math.pi / 3), 1),
    }


def _sweep_row(zbar: ProjectiveCharge, tie_tol: float, cap: int) -> Dict[str, object]:
    w = zbar.ratio
    row: Dict[str, object] = {"ratio_re": w.real, "ratio_im": w.imag}
    try:
        report = chamber_descent(zbar, tie_tol=tie_tol, cap=cap)
    except (InadmissibleChargeError, VanishingMassError, DescentError) as exc:
        logger.warning("Sweep point %s failed: %s", w, exc)
        row.update({"heart": "", "width": "", "stable_count": "", "wall_flags": "", "error": str(exc)})
        return row
    row.update({
        "heart": report.heart.g.key(),
        "width": report.width,
        "stable_count": len(report.stable_set),
        "wall_flags": ";".join(report.wall_flags),
        "error": "",
    })
    return row


def sweep(
    charges: Iterable[ProjectiveCharge],
    tie_tol: float = DEFAULT_TIE_TOL,
    cap: int = DEFAULT_DESCENT_CAP,
    workers: int = 4,
) -> List[Dict[str, object]]:
    """Chamber classification of many charges; rows keep the input order."""
    charges = list(charges)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        rows = list(executor.map(lambda z: _sweep_row(z, tie_tol, cap), charges))
    logger.info("Swept %d projective charges", len(rows))
    return rows


def wall_gap(zbar: ProjectiveCharge, h: Heart, tie_tol: float = DEFAULT_TIE_TOL) -> float:
    """Smallest width excess of an admissible rotation neighbour over h.

    Near zero the charge sits close to a wall of the chamber of h; infinite when
    no neighbour admits zbar.
    """
    current = width(zbar, h)
    excess = [w - current for _, _, w in _neighbours(zbar, h, tie_tol)]
    return min(excess, default=math.inf)
