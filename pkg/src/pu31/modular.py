"""Two-parameter families of representations of PSL(2, Z) into PU(3,1).

Both families send the order-two generator to A2 and the order-three
generator to A1, with A0 = A2^{-1} A1 parabolic (up to the normalizing scalar).
They are built from three Lagrangian inversions: A0 = i1 i2, A1 = i0 i2 and
A2 = i1 i0.  Family STD012 has A1 elliptic of angle type (0, 2pi/3, 4pi/3),
family STD122 has A1 of type (2pi/3, 4pi/3, 4pi/3).
"""

from __future__ import annotations

import cmath
import enum
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import NotOnEdge, OutOfRangeParameter
from .heisenberg import HeisenbergPoint
from .hermitian import SIEGEL, normalize_det, unitarity_defect
from .isometry import holy_grail

HALF_PI = math.pi / 2
RENORMALIZE_EVERY = 16
EDGE_TOL = 1e-12

I4 = np.eye(4, dtype=complex)
M0 = np.array([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]], dtype=complex)
M1 = np.diag([1, -1, 1, 1]).astype(complex)
X122 = np.diag([1, 1, cmath.exp(1j * math.pi / 3), 1])
V_REAL = np.diag([1, 1j, 1j, 1])
for _m in (I4, M0, M1, X122, V_REAL):
    _m.setflags(write=False)


class Family(enum.Enum):
    STD012 = "012"
    STD122 = "122"


def cos_alpha(alpha: float) -> float:
    # sin(pi/2 - a) is exactly 0 at a = pi/2, unlike cos(pi/2)
    return max(0.0, math.sin(HALF_PI - alpha))


@dataclass(frozen=True)
class ModuliPoint:
    family: Family
    alpha: float
    beta: float

    def __post_init__(self):
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family(self.family))
        for name in ("alpha", "beta"):
            v = float(getattr(self, name))
            if not (0.0 <= v <= HALF_PI) or math.isnan(v):
                raise OutOfRangeParameter(f"{name} = {v!r} is outside [0, pi/2]")
            object.__setattr__(self, name, v)


def rotation_u(beta: float) -> np.ndarray:
    c, s = math.cos(beta), math.sin(beta)
    return np.array(
        [[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=complex
    )


def m2_base(alpha: float) -> np.ndarray:
    """Presentation matrix of the third inversion at beta = 0."""
    r = 1j * cmath.exp(-0.5j * alpha) * math.sqrt(2.0 * cos_alpha(alpha))
    e = cmath.exp(-1j * alpha)
    return np.array(
        [
            [1, r, 0, -e],
            [0, e, 0, r],
            [0, 0, -cmath.exp(-1j * alpha / 3), 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


def p3_point(alpha: float, beta: float) -> HeisenbergPoint:
    """Image of the origin under A1; with infinity and the origin it spans an
    ideal triangle of Cartan invariant alpha."""
    k = 1j * cmath.exp(-0.5j * alpha) * math.sqrt(cos_alpha(alpha))
    return HeisenbergPoint(k * math.cos(beta), k * math.sin(beta), math.sin(alpha))


@dataclass(frozen=True)
class GeneratorSet:
    point: ModuliPoint
    M0: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    U: np.ndarray
    A0: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    # scalar multiplying the raw products of presentation matrices in A0, A1
    scale: complex = 1.0
    # A2 A1 and A2 A1^{-1}, the two letters of the word alphabet
    P: np.ndarray | None = None
    Q: np.ndarray | None = None

    @property
    def A1_inv(self) -> np.ndarray:
        return np.linalg.inv(self.A1)


def build_generators(point: ModuliPoint) -> GeneratorSet:
    a, b = point.alpha, point.beta
    U = rotation_u(b)
    Ut = U.real.T.astype(complex)  # U is a real rotation
    base = m2_base(a)
    if point.family is Family.STD122:
        base = cmath.exp(-1j * math.pi / 6) * X122 @ base @ np.conj(np.diag(1 / np.diag(X122)))
    M2 = U @ base @ Ut
    scale = cmath.exp(-1j * a / 3)
    A0 = scale * (M1 @ np.conj(M2))
    A1 = scale * (M0 @ np.conj(M2))
    A2 = M1 @ np.conj(M0)
    A1_inv = np.linalg.inv(A1)
    return GeneratorSet(point, M0, M1, M2, U, A0, A1, A2, scale, A2 @ A1, A2 @ A1_inv)


@dataclass(frozen=True)
class RelationReport:
    residuals: dict
    tol: float
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    @property
    def worst(self) -> float:
        return max(self.residuals.values())


def verify_relations(gen: GeneratorSet, tol: float = 1e-10) -> RelationReport:
    A0, A1, A2 = gen.A0, gen.A1, gen.A2
    res = {"A2^2 = I": float(np.abs(A2 @ A2 - I4).max())}
    notes = ()
    if gen.point.family is Family.STD122:
        cube, label = -1j * I4, "A1^3 = -iI"
        notes = (
            "the order-two relation is checked on A2; the printed (A1')^2 = I "
            "cannot hold together with (A1')^3 = -iI",
        )
    else:
        cube, label = -I4, "A1^3 = -I"
    res[label] = float(np.abs(A1 @ A1 @ A1 - cube).max())
    res["A2 A0 A1^-1 = I"] = float(np.abs(A2 @ A0 @ np.linalg.inv(A1) - I4).max())
    res["unitarity"] = max(
        unitarity_defect(m, SIEGEL) for m in (A0, A1, A2, gen.M0, gen.M1, gen.M2)
    )
    res["det = 1"] = max(float(abs(np.linalg.det(m) - 1)) for m in (A0, A1, A2))
    return RelationReport(res, tol, notes)


@dataclass(frozen=True)
class Word:
    """Run-length word prod (A2 A1)^m_i (A2 A1^{-1})^n_i."""

    runs: tuple

    def __post_init__(self):
        runs = tuple((int(m), int(n)) for m, n in self.runs)
        if not runs or any(m < 1 or n < 1 for m, n in runs):
            raise ValueError("a word needs at least one run of positive exponents")
        object.__setattr__(self, "runs", runs)

    @classmethod
    def of(cls, *exponents: int) -> "Word":
        if len(exponents) % 2:
            raise ValueError("exponents come in (m, n) pairs")
        return cls(tuple(zip(exponents[::2], exponents[1::2])))

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if not re.fullmatch(r"\s*\d+\s*,\s*\d+\s*(;\s*\d+\s*,\s*\d+\s*)*;?\s*", text):
            raise ValueError(f"malformed word {text!r}; expected 'm1,n1;m2,n2;...'")
        runs = [tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]
        return cls(tuple(runs))

    def rotate(self, k: int) -> "Word":
        k %= len(self.runs)
        return Word(self.runs[k:] + self.runs[:k])

    def canonical(self) -> "Word":
        return min((self.rotate(k) for k in range(len(self.runs))), key=lambda w: w.runs)

    @property
    def length(self) -> int:
        return sum(m + n for m, n in self.runs)

    def __str__(self):
        return ";".join(f"{m},{n}" for m, n in self.runs)


def evaluate_word(gen: GeneratorSet, w: Word) -> np.ndarray:
    P = gen.P if gen.P is not None else gen.A2 @ gen.A1
    Q = gen.Q if gen.Q is not None else gen.A2 @ gen.A1_inv
    out = I4.copy()
    count = 0
    for m, n in w.runs:
        for letter, times in ((P, m), (Q, n)):
            for _ in range(times):
                out = out @ letter
                count += 1
                if count % RENORMALIZE_EVERY == 0:
                    out = normalize_det(out)
    return normalize_det(out)


def w11_closed_forms(alpha: float, beta: float) -> tuple:
    """(trace, sigma, holy grail value) of A2 A1 A2 A1^{-1} in family STD012."""
    c2b = math.cos(2 * beta)
    s2 = math.sin(2 * beta) ** 2
    ca = cos_alpha(alpha)
    trace = 5 - 4 * c2b * ca - 2 * s2 * math.cos(2 * alpha / 3) - 2 * s2
    sigma = 8 - 8 * c2b * ca + s2 * (2 * math.cos(4 * alpha / 3) - 4 * math.cos(2 * alpha / 3) - 6)
    return trace, sigma, holy_grail(trace, sigma)


class Edge(enum.Enum):
    BETA0 = "beta0"
    BETA_HALF = "beta-half"
    ALPHA0 = "alpha0"
    ALPHA_HALF = "alpha-half"


@dataclass(frozen=True)
class Specialization:
    edge: Edge
    blocks: dict
    # size of what the reduction throws away: decoupled entries for block
    # reductions, imaginary parts for the real-form conjugation
    residual: float


def _block(M: np.ndarray, keep: list) -> tuple:
    mask = np.zeros((4, 4), dtype=bool)
    mask[np.ix_(keep, keep)] = True
    drop = [i for i in range(4) if i not in keep]
    mask[np.ix_(drop, drop)] = True
    return M[np.ix_(keep, keep)].copy(), float(np.abs(M[~mask]).max(initial=0.0))


def specialize(gen: GeneratorSet, edge: Edge) -> Specialization:
    a, b = gen.point.alpha, gen.point.beta
    target = {Edge.BETA0: (b, 0.0), Edge.BETA_HALF: (b, HALF_PI),
              Edge.ALPHA0: (a, 0.0), Edge.ALPHA_HALF: (a, HALF_PI)}[edge]
    if abs(target[0] - target[1]) > EDGE_TOL:
        raise NotOnEdge(f"point {gen.point} is not on the {edge.value} edge")
    mats = {"A0": gen.A0, "A1": gen.A1, "A2": gen.A2}
    if edge is Edge.ALPHA0:
        Vi = np.diag(1 / np.diag(V_REAL))
        blocks = {k: V_REAL @ m @ Vi for k, m in mats.items()}
        return Specialization(edge, blocks, max(float(np.abs(m.imag).max()) for m in blocks.values()))
    keep = {Edge.BETA0: [0, 1, 3], Edge.BETA_HALF: [0, 2, 3], Edge.ALPHA_HALF: [0, 3]}[edge]
    blocks, residual = {}, 0.0
    for k, m in mats.items():
        if edge is Edge.ALPHA_HALF and k != "A2":
            m = m / gen.scale
        blk, r = _block(m, keep)
        blocks[k] = blk
        residual = max(residual, r)
    return Specialization(edge, blocks, residual)
