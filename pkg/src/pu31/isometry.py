"""Isometries of complex hyperbolic 3-space and their dynamical type."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    FormMismatch,
    NoNegativeEigenvector,
    NotUnimodularDeterminant,
)
from .heisenberg import HeisenbergPoint, boundary_from_lift, standard_lift
from .hermitian import (
    SIEGEL,
    HermitianForm,
    Sign,
    as_matrix,
    eigen4,
    unitarity_defect,
    vector_sign,
)

TWO_PI = 2.0 * math.pi
HOLY_BAND = 1e-8
UNIT_MODULUS_TOL = 1e-9
# successive clustering tolerances tried when the holy grail value says an
# eigenvalue is repeated; a defective eigenvalue of multiplicity k is only
# resolved to about eps**(1/k)
REFINE_CLUSTER_TOLS = (1e-7, 1e-5, 1e-4)


class Chirality(enum.Enum):
    HOLOMORPHIC = "holomorphic"
    ANTIHOLOMORPHIC = "antiholomorphic"


@dataclass(frozen=True)
class Isometry:
    matrix: np.ndarray
    chirality: Chirality = Chirality.HOLOMORPHIC
    form: HermitianForm = SIEGEL

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))

    @property
    def anti(self) -> bool:
        return self.chirality is Chirality.ANTIHOLOMORPHIC


def compose(f: Isometry, g: Isometry) -> Isometry:
    """The isometry f after g."""
    if f.form is not g.form:
        raise FormMismatch("isometries act on different models")
    n = np.conj(g.matrix) if f.anti else g.matrix
    anti = f.anti != g.anti
    chirality = Chirality.ANTIHOLOMORPHIC if anti else Chirality.HOLOMORPHIC
    return Isometry(f.matrix @ n, chirality, f.form)


def apply(f: Isometry, p: HeisenbergPoint) -> HeisenbergPoint:
    v = standard_lift(p)
    if f.anti:
        v = np.conj(v)
    return boundary_from_lift(f.matrix @ v)


def holy_grail(tau: complex, sigma: float) -> float:
    """Discriminant of X^4 - tau X^3 + sigma X^2 - conj(tau) X + 1."""
    t2 = abs(tau) ** 2
    re2 = 2.0 * (tau * tau).real
    first = sigma * sigma / 3.0 - t2 + 4.0
    second = 2.0 * sigma**3 / 27.0 - t2 * sigma / 3.0 - 8.0 * sigma / 3.0 + re2
    return 4.0 * first**3 - 27.0 * second**2


@dataclass(frozen=True)
class TraceData:
    tau: complex
    sigma: float
    holy: float
    sigma_imag: float = 0.0


def trace_data(M, det_tol: float = 1e-8) -> TraceData:
    M = as_matrix(M)
    det = np.linalg.det(M)
    if abs(det - 1) > det_tol:
        raise NotUnimodularDeterminant(f"det = {det:.6g}, expected 1")
    tau = complex(np.trace(M))
    s = (tau * tau - np.trace(M @ M)) / 2
    return TraceData(tau, float(s.real), holy_grail(tau, float(s.real)), float(s.imag))


class Kind(enum.Enum):
    REGULAR_ELLIPTIC = "regular-elliptic"
    SPECIAL_ELLIPTIC = "special-elliptic"
    REGULAR_LOXODROMIC = "regular-loxodromic"
    LOXODROMIC = "loxodromic"
    PARABOLIC = "parabolic"
    BOUNDARY = "indeterminate"


class ParabolicSubtype(enum.Enum):
    UNIPOTENT = "unipotent"
    ELLIPTO_PARABOLIC = "ellipto-parabolic"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    holy: float
    tau: complex
    angles: tuple | None = None
    subtype: ParabolicSubtype | None = None
    axis_dim: int | None = None
    detail: str = ""

    @property
    def label(self) -> str:
        if self.kind is Kind.PARABOLIC:
            if self.subtype is ParabolicSubtype.UNIPOTENT:
                return "unipotent"
            return f"ellipto-parabolic-{self.axis_dim}"
        return self.kind.value

    @property
    def is_elliptic(self) -> bool:
        return self.kind in (Kind.REGULAR_ELLIPTIC, Kind.SPECIAL_ELLIPTIC)

    @property
    def is_loxodromic(self) -> bool:
        return self.kind in (Kind.REGULAR_LOXODROMIC, Kind.LOXODROMIC)


def holy_band(tau: complex) -> float:
    return HOLY_BAND * max(1.0, abs(tau) ** 6)


def classify(M, tol: float = 1e-8, form: HermitianForm = SIEGEL) -> Classification:
    """Dynamical type of a determinant-one matrix preserving `form`.

    The sign of the holy grail function decides regular elements; inside the
    zero band the eigenstructure decides.
    """
    M = as_matrix(M)
    scale = max(1.0, float(np.abs(M).max()) ** 2)
    defect = unitarity_defect(M, form)
    if defect > tol * scale:
        raise ValueError(f"matrix does not preserve the form (defect {defect:.3e})")
    td = trace_data(M)
    band = holy_band(td.tau)
    if td.holy > band:
        try:
            angles = elliptic_angle_type(M, form)
        except NoNegativeEigenvector as exc:
            return Classification(Kind.BOUNDARY, td.holy, td.tau, detail=str(exc))
        return Classification(Kind.REGULAR_ELLIPTIC, td.holy, td.tau, angles=angles)
    if td.holy < -band:
        return Classification(Kind.REGULAR_LOXODROMIC, td.holy, td.tau)
    return _refine(M, td, form)


def _refine(M: np.ndarray, td: TraceData, form: HermitianForm) -> Classification:
    if float(np.abs(np.linalg.eigvals(M)).max()) > 1.0 + UNIT_MODULUS_TOL:
        return Classification(Kind.LOXODROMIC, td.holy, td.tau)
    ed = None
    failure = None
    for ctol in REFINE_CLUSTER_TOLS:
        try:
            trial = eigen4(M, cluster_tol=ctol)
        except ConvergenceFailure as exc:
            failure = exc
            continue
        ed = trial
        if any(p.multiplicity > 1 for p in ed.pairs):
            break
    if ed is None:
        raise failure
    if ed.diagonalizable:
        if all(p.multiplicity == 1 for p in ed.pairs):
            return Classification(
                Kind.BOUNDARY, td.holy, td.tau,
                detail="holy grail value inside the zero band but eigenvalues are distinct",
            )
        try:
            angles = elliptic_angle_type(M, form)
        except NoNegativeEigenvector:
            angles = None
        return Classification(Kind.SPECIAL_ELLIPTIC, td.holy, td.tau, angles=angles)
    if len(ed.pairs) == 1:
        return Classification(Kind.PARABOLIC, td.holy, td.tau, subtype=ParabolicSubtype.UNIPOTENT)
    defective = max(
        (p for p in ed.pairs if p.geometric < p.multiplicity), key=lambda p: p.multiplicity
    )
    axis_dim = 1 if defective.multiplicity == 2 else 2
    return Classification(
        Kind.PARABOLIC, td.holy, td.tau,
        subtype=ParabolicSubtype.ELLIPTO_PARABOLIC, axis_dim=axis_dim,
    )


def _eigenspace_signature(basis: np.ndarray, form: HermitianForm) -> tuple:
    gram = np.conj(basis.T) @ form.matrix @ basis
    w = np.linalg.eigvalsh((gram + np.conj(gram.T)) / 2)
    neg = int(np.sum(w < -1e-7))
    pos = int(np.sum(w > 1e-7))
    return neg, pos


def elliptic_angle_type(M, form: HermitianForm = SIEGEL) -> tuple:
    """Rotation angles at the fixed point, sorted in [0, 2pi).

    Each angle is arg(lambda / mu) where mu is the eigenvalue on the negative
    eigenline and lambda runs over the positive eigendirections.
    """
    ed = eigen4(M)
    if not ed.diagonalizable:
        raise NoNegativeEigenvector("matrix is not diagonalizable")
    mu = None
    positive = []
    for p in ed.pairs:
        neg, pos = _eigenspace_signature(p.basis, form)
        if neg:
            if mu is not None or neg > 1:
                raise NoNegativeEigenvector("more than one negative direction")
            mu = p.value
        positive.extend([p.value] * pos)
    if mu is None or len(positive) != 3:
        raise NoNegativeEigenvector("no negative eigenvector")
    angles = []
    for lam in positive:
        a = float(np.angle(lam / mu)) % TWO_PI
        if a > TWO_PI - 1e-12:
            a = 0.0
        angles.append(a)
    return tuple(sorted(angles))


def boundary_fixed_points(M, null_tol: float = 1e-6) -> list:
    """Null eigenvectors of M, projected to the boundary and deduplicated."""
    ed = eigen4(M)
    points = []
    for p in ed.pairs:
        for k in range(p.basis.shape[1]):
            v = p.basis[:, k]
            if vector_sign(v, SIEGEL, null_tol).value is not Sign.NULL:
                continue
            q = boundary_from_lift(v, null_tol)
            if not any(q.close_to(r, 1e-6) for r in points):
                points.append(q)
    return points
