"""Exact integer model of the rank two lattice K(D).

Classes are written in the basis {[S], [T]}. Automorphisms act on column
vectors, so ``M.apply(x)`` is ``M @ x`` and composition is the matrix product.
"""
from dataclasses import dataclass
from typing import Iterator, Tuple

Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class KClass:
    """A class s*[S] + t*[T] in K(D)."""
    s: int
    t: int

    def __add__(self, other: "KClass") -> "KClass":
        return KClass(self.s + other.s, self.t + other.t)

    def __sub__(self, other: "KClass") -> "KClass":
        return KClass(self.s - other.s, self.t - other.t)

    def __neg__(self) -> "KClass":
        return KClass(-self.s, -self.t)

    def __rmul__(self, k: int) -> "KClass":
        return KClass(k * self.s, k * self.t)

    def __iter__(self) -> Iterator[int]:
        return iter((self.s, self.t))

    def is_zero(self) -> bool:
        return self.s == 0 and self.t == 0

    def is_positive(self) -> bool:
        """First nonzero coordinate is positive."""
        return self.s > 0 or (self.s == 0 and self.t > 0)

    def to_list(self) -> list:
        return [self.s, self.t]


S_CLASS = KClass(1, 0)
T_CLASS = KClass(0, 1)
E_CLASS = S_CLASS + T_CLASS
X_CLASS = T_CLASS - S_CLASS


@dataclass(frozen=True)
class LatticeAut:
    """A determinant one automorphism of K(D)."""
    entries: Matrix2

    def __post_init__(self):
        (a, b), (c, d) = self.entries
        if a * d - b * c != 1:
            raise ValueError(f"determinant must be 1, got {a * d - b * c} for {self.entries}")

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int) -> "LatticeAut":
        return cls(((a, b), (c, d)))

    @classmethod
    def identity(cls) -> "LatticeAut":
        return IDENTITY

    def __matmul__(self, other: "LatticeAut") -> "LatticeAut":
        return LatticeAut(mat_mul(self.entries, other.entries))

    def __neg__(self) -> "LatticeAut":
        (a, b), (c, d) = self.entries
        return LatticeAut(((-a, -b), (-c, -d)))

    def inverse(self) -> "LatticeAut":
        (a, b), (c, d) = self.entries
        return LatticeAut(((d, -b), (-c, a)))

    def power(self, n: int) -> "LatticeAut":
        base = self if n >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(n)):
            result = result @ base
        return result

    def apply(self, x: KClass) -> KClass:
        (a, b), (c, d) = self.entries
        return KClass(a * x.s + b * x.t, c * x.s + d * x.t)

    def trace(self) -> int:
        return self.entries[0][0] + self.entries[1][1]

    def columns(self) -> Tuple[KClass, KClass]:
        """Images of [S] and [T]."""
        (a, b), (c, d) = self.entries
        return KClass(a, c), KClass(b, d)

    def is_identity(self) -> bool:
        return self.entries == IDENTITY.entries

    def to_list(self) -> list:
        return [list(row) for row in self.entries]


def mat_mul(x: Matrix2, y: Matrix2) -> Matrix2:
    """Product of two integer 2x2 matrices given as nested tuples."""
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


IDENTITY = LatticeAut(((1, 0), (0, 1)))
MINUS_IDENTITY = LatticeAut(((-1, 0), (0, -1)))


def euler_pairing(a: KClass, b: KClass) -> int:
    """Antisymmetric Euler form with chi([S], [T]) = -1."""
    return -a.s * b.t + a.t * b.s


def twist_matrix(x: KClass) -> LatticeAut:
    """Matrix of y -> y - chi(x, y) x."""
    # columns are the images of [S] and [T]
    img_s = S_CLASS - euler_pairing(x, S_CLASS) * x
    img_t = T_CLASS - euler_pairing(x, T_CLASS) * x
    return LatticeAut(((img_s.s, img_t.s), (img_s.t, img_t.t)))


def shift_matrix(n: int) -> LatticeAut:
    """[n] acts on K(D) as (-1)^n."""
    return IDENTITY if n % 2 == 0 else MINUS_IDENTITY


M_S = twist_matrix(S_CLASS)
M_T = twist_matrix(T_CLASS)


def projective_normal_form(m: LatticeAut) -> LatticeAut:
    """Representative of m modulo +-identity whose first nonzero entry is positive."""
    (p, q), (r, s) = m.entries
    lead = next(x for x in (p, q, r, s) if x != 0)
    return m if lead > 0 else -m
