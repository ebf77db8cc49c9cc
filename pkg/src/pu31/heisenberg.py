"""Boundary geometry in the Siegel model: Heisenberg points, chains, lifts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymptoticToFixedChain,
    CoincidentPoints,
    InfinityOperand,
    NonPositivePolar,
    NotNullVector,
)
from .hermitian import NULL_TOL, SIEGEL, Sign, as_vector, herm_inner, vector_sign

SQRT2 = math.sqrt(2.0)
ASYMPTOTIC_TOL = 1e-9


@dataclass(frozen=True)
class HeisenbergPoint:
    z1: complex = 0j
    z2: complex = 0j
    t: float = 0.0
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite:
            object.__setattr__(self, "z1", complex(self.z1))
            object.__setattr__(self, "z2", complex(self.z2))
            object.__setattr__(self, "t", float(self.t))
            if not all(map(math.isfinite, (self.z1.real, self.z1.imag, self.z2.real, self.z2.imag, self.t))):
                raise ValueError("finite Heisenberg point with non-finite coordinates")

    @property
    def horizontal(self) -> np.ndarray:
        """Vertical projection to C^2."""
        if self.infinite:
            raise InfinityOperand("infinity has no vertical projection")
        return np.array([self.z1, self.z2])

    def close_to(self, other: "HeisenbergPoint", tol: float = 1e-9) -> bool:
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return (
            abs(self.z1 - other.z1) <= tol
            and abs(self.z2 - other.z2) <= tol
            and abs(self.t - other.t) <= tol
        )

    def __repr__(self):
        if self.infinite:
            return "HeisenbergPoint(inf)"
        return f"HeisenbergPoint({self.z1!r}, {self.z2!r}, {self.t!r})"


INFINITY = HeisenbergPoint(infinite=True)
ORIGIN = HeisenbergPoint()


def heis_product(p: HeisenbergPoint, q: HeisenbergPoint) -> HeisenbergPoint:
    """[z, t] * [w, s] = [z + w, t + s + 2 Im(w* z)]."""
    if p.infinite or q.infinite:
        raise InfinityOperand("the group law is defined on finite points only")
    twist = (np.conj(q.z1) * p.z1 + np.conj(q.z2) * p.z2).imag
    return HeisenbergPoint(p.z1 + q.z1, p.z2 + q.z2, p.t + q.t + 2.0 * twist)


def heis_inverse(p: HeisenbergPoint) -> HeisenbergPoint:
    if p.infinite:
        raise InfinityOperand("infinity has no inverse")
    return HeisenbergPoint(-p.z1, -p.z2, -p.t)


def standard_lift(p: HeisenbergPoint, u: float = 0.0) -> np.ndarray:
    """Lift of a boundary point, or of the horospherical point (z, t, u) when u > 0."""
    if p.infinite:
        return np.array([1, 0, 0, 0], dtype=complex)
    r2 = abs(p.z1) ** 2 + abs(p.z2) ** 2
    return np.array([-r2 - u + 1j * p.t, SQRT2 * p.z1, SQRT2 * p.z2, 1], dtype=complex)


def boundary_from_lift(v, tol: float = NULL_TOL) -> HeisenbergPoint:
    v = as_vector(v)
    if vector_sign(v, SIEGEL, tol).value is not Sign.NULL:
        raise NotNullVector(f"vector is not null: <v,v> = {herm_inner(v, v).real:.3e}")
    if abs(v[3]) <= tol * np.linalg.norm(v):
        return INFINITY
    w = v / v[3]
    return HeisenbergPoint(w[1] / SQRT2, w[2] / SQRT2, w[0].imag)


class ChainKind(enum.Enum):
    VERTICAL = "vertical"
    FINITE = "finite"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class C2Chain:
    """Boundary of a complex hyperplane, stored by its polar vector."""

    polar: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "polar", as_vector(self.polar))

    @property
    def kind(self) -> ChainKind:
        n = self.polar
        if abs(n[3]) <= 1e-12 * np.linalg.norm(n):
            return ChainKind.VERTICAL
        if vector_sign(n, SIEGEL).value is Sign.NULL:
            return ChainKind.DEGENERATE
        return ChainKind.FINITE

    def _normalized(self) -> np.ndarray:
        if self.kind is ChainKind.VERTICAL:
            raise InfinityOperand("vertical chains have no center")
        return self.polar / self.polar[3]

    @property
    def center(self) -> HeisenbergPoint:
        w = self._normalized()
        return HeisenbergPoint(w[1] / SQRT2, w[2] / SQRT2, w[0].imag)

    @property
    def radius(self) -> float:
        w = self._normalized()
        c = self.center
        r2 = w[0].real + abs(c.z1) ** 2 + abs(c.z2) ** 2
        return math.sqrt(max(r2, 0.0))


def chain_from_center_radius(center: HeisenbergPoint, R: float) -> C2Chain:
    if center.infinite:
        raise InfinityOperand("a finite chain needs a finite center")
    if R < 0:
        raise ValueError("radius must be nonnegative")
    r2 = abs(center.z1) ** 2 + abs(center.z2) ** 2
    polar = np.array(
        [R * R - r2 + 1j * center.t, SQRT2 * center.z1, SQRT2 * center.z2, 1], dtype=complex
    )
    return C2Chain(polar)


def chain_contains(chain: C2Chain, p: HeisenbergPoint, tol: float = 1e-9) -> bool:
    kind = chain.kind
    if kind is ChainKind.VERTICAL:
        # a complex affine line in C^2 times the whole t axis, plus infinity
        if p.infinite:
            return True
        n = chain.polar / np.linalg.norm(chain.polar)
        return abs(herm_inner(standard_lift(p), n)) <= tol
    if p.infinite:
        return False
    c = chain.center
    if kind is ChainKind.DEGENERATE:
        return p.close_to(c, tol)
    a, b, cc, d, f = c.z1.real, c.z1.imag, c.z2.real, c.z2.imag, c.t
    x1, y1, x2, y2 = p.z1.real, p.z1.imag, p.z2.real, p.z2.imag
    R = chain.radius
    cylinder = (x1 - a) ** 2 + (y1 - b) ** 2 + (x2 - cc) ** 2 + (y2 - d) ** 2 - R * R
    plane = p.t + 2 * a * y1 - 2 * b * x1 + 2 * cc * y2 - 2 * d * x2 - f
    return abs(cylinder) <= tol and abs(plane) <= tol


def sample_chain(chain: C2Chain, n: int, seed: int = 0) -> list:
    """Pseudo-random points on a finite chain."""
    if chain.kind is not ChainKind.FINITE:
        raise ValueError("sampling is defined for finite chains")
    rng = np.random.default_rng(seed)
    c = chain.center
    R = chain.radius
    g = rng.normal(size=(n, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    pts = []
    a, b, cc, d, f = c.z1.real, c.z1.imag, c.z2.real, c.z2.imag, c.t
    for row in g:
        x1, y1, x2, y2 = a + R * row[0], b + R * row[1], cc + R * row[2], d + R * row[3]
        t = f - 2 * a * y1 + 2 * b * x1 - 2 * cc * y2 + 2 * d * x2
        pts.append(HeisenbergPoint(complex(x1, y1), complex(x2, y2), t))
    return pts


class ChainPosition(enum.Enum):
    INTERSECTING = "intersecting"
    ASYMPTOTIC = "asymptotic"
    ULTRAPARALLEL = "ultraparallel"


@dataclass(frozen=True)
class ChainPairPosition:
    value: ChainPosition
    gram_excess: float


def chain_pair_position(n1: C2Chain, n2: C2Chain, tol: float = ASYMPTOTIC_TOL) -> ChainPairPosition:
    """Relative position of two complex hyperplanes from the Gram matrix of their polars.

    Positive excess |<n1,n2>|^2 - <n1,n1><n2,n2> means the span of the polars
    is an indefinite plane, so the hyperplanes are ultraparallel.
    """
    u, v = n1.polar, n2.polar
    q1, q2 = herm_inner(u, u).real, herm_inner(v, v).real
    if vector_sign(u).value is not Sign.POSITIVE or vector_sign(v).value is not Sign.POSITIVE:
        raise NonPositivePolar("both polar vectors must be positive")
    excess = abs(herm_inner(u, v)) ** 2 - q1 * q2
    band = tol * q1 * q2
    if excess > band:
        value = ChainPosition.ULTRAPARALLEL
    elif excess < -band:
        value = ChainPosition.INTERSECTING
    else:
        value = ChainPosition.ASYMPTOTIC
    return ChainPairPosition(value, excess)


def heisenberg_translation(z1: complex, z2: complex, v: float) -> np.ndarray:
    """Matrix of left translation by the Heisenberg point (z1, z2, v)."""
    z1, z2 = complex(z1), complex(z2)
    r2 = abs(z1) ** 2 + abs(z2) ** 2
    return np.array(
        [
            [1, -SQRT2 * np.conj(z1), -SQRT2 * np.conj(z2), -r2 + 1j * v],
            [0, 1, 0, SQRT2 * z1],
            [0, 0, 1, SQRT2 * z2],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


class R3Kind(enum.Enum):
    STANDARD_IMAGINARY = "standard-imaginary"
    AXIS_PLANE = "axis-plane"


@dataclass(frozen=True)
class R3Chain:
    """Boundary of a real form.

    STANDARD_IMAGINARY is the fixed set of the inversion swapping the first and
    last homogeneous coordinates.  AXIS_PLANE is the infinite chain through
    `base` spanned by the real directions e^{i phi1} and e^{i phi2}.
    """

    kind: R3Kind
    base: HeisenbergPoint = ORIGIN
    phi1: float = 0.0
    phi2: float = 0.0


STANDARD_IMAGINARY = R3Chain(R3Kind.STANDARD_IMAGINARY)


def r3_chain_contains(chain: R3Chain, p: HeisenbergPoint, tol: float = 1e-9) -> bool:
    if p.infinite:
        return chain.kind is R3Kind.AXIS_PLANE
    x1, y1, x2, y2, t = p.z1.real, p.z1.imag, p.z2.real, p.z2.imag, p.t
    if chain.kind is R3Kind.STANDARD_IMAGINARY:
        # the two remaining equations of the fixed set follow from these three
        r = x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2
        residuals = (
            r * r + t * t - 1,
            x1 + r * x1 - t * y1,
            x2 + r * x2 - t * y2,
        )
        return max(map(abs, residuals)) <= tol
    b = chain.base
    w1 = (p.z1 - b.z1) * np.exp(-1j * chain.phi1)
    w2 = (p.z2 - b.z2) * np.exp(-1j * chain.phi2)
    if abs(w1.imag) > tol or abs(w2.imag) > tol:
        return False
    r1, r2 = w1.real, w2.real
    c1, s1 = math.cos(chain.phi1), math.sin(chain.phi1)
    c2, s2 = math.cos(chain.phi2), math.sin(chain.phi2)
    v = b.t + 2 * (
        r1 * b.z1.imag * c1 - r1 * b.z1.real * s1 + r2 * b.z2.imag * c2 - r2 * b.z2.real * s2
    )
    return abs(t - v) <= tol


def cartan_invariant(p1: HeisenbergPoint, p2: HeisenbergPoint, p3: HeisenbergPoint) -> float:
    """arg(-<q1,q2><q2,q3><q3,q1>) for lifts q_i; lies in [-pi/2, pi/2]."""
    q = [standard_lift(p) for p in (p1, p2, p3)]
    q = [v / np.linalg.norm(v) for v in q]
    h12, h23, h31 = herm_inner(q[0], q[1]), herm_inner(q[1], q[2]), herm_inner(q[2], q[0])
    if min(abs(h12), abs(h23), abs(h31)) <= 1e-12:
        raise CoincidentPoints("the three points must be distinct")
    return float(np.angle(-h12 * h23 * h31))


def iota0_chain_image(center: HeisenbergPoint, R: float):
    """Image of the chain with center (bi, c, 0) and radius R under the standard inversion.

    Returns (center', R').
    """
    if center.infinite:
        raise InfinityOperand("center must be finite")
    if abs(center.z1.real) > 1e-12 or abs(center.z2.imag) > 1e-12 or abs(center.t) > 1e-12:
        raise ValueError("center must have the form (bi, c, 0)")
    b, c = center.z1.imag, center.z2.real
    k = R * R - (b * b + c * c)
    if abs(k) <= 1e-12 * max(1.0, R * R):
        raise AsymptoticToFixedChain("chain is asymptotic to the fixed chain of the inversion")
    return HeisenbergPoint(-1j * b / k, c / k, 0.0), R / abs(k)
