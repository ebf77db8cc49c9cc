"""Sampled discreteness certificate for family STD012.

Near (alpha, beta) = (pi/2, 0) the faces of a fundamental domain are unions of
C^2-chains.  The chains are described by three families of unit polar vectors
p(lam): an upper family for lam >= 2 whose chains fibre a ball around
infinity, its image lam -> 1/lam under the first inversion, and a middle family
obtained as complex slices of the bisector joining the two seam chains at
lam = 2 and lam = 1/2.  The certificate samples the Gram inner products that
must exceed 1 for the chains to be pairwise disjoint.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AxisUnavailable,
    NeighborhoodConditionViolated,
    NotHyperParallel,
    NotParabolic,
)
from .hermitian import SIEGEL, herm_gram, herm_inner
from .modular import (
    Family,
    ModuliPoint,
    build_generators,
    cos_alpha,
)

SQRT2 = math.sqrt(2.0)
BETA0 = math.acos(-1.0 / math.sqrt(3.0)) / 2.0
LOCUS_BAND = 1e-9
DEFAULT_SAMPLES = 257
DEFAULT_MARGIN = 1e-6
CLOSED_FORM_TOL = 1e-9
SEAM_TOL = 1e-9


def two_eigenvalue_residual(alpha: float, beta: float) -> float:
    """Vanishes exactly where A0 has only two distinct eigenvalues."""
    return (
        math.cos(2 * beta) * (math.cos(2 * alpha / 3) + 1)
        + cos_alpha(alpha)
        + math.cos(alpha / 3)
    )


class AxisCase(enum.Enum):
    INVARIANT_LINE = "invariant-line"
    INVARIANT_PLANE = "invariant-plane"
    NOT_PARABOLIC = "not-parabolic"


@dataclass(frozen=True)
class AxisData:
    case: AxisCase
    locus_residual: float
    y: float | None = None
    x: float | None = None
    x_imag: float = 0.0
    polar: np.ndarray | None = field(default=None, repr=False)


def _require_std012(point: ModuliPoint):
    if point.family is not Family.STD012:
        raise ValueError("the certificate machinery is defined for family 012 only")


def a0_axis(point: ModuliPoint, band: float = LOCUS_BAND) -> AxisData:
    """Invariant complex line (or plane, on the locus) of the parabolic A0.

    Off the locus the invariant line is the vertical chain over (i y, x) in
    Heisenberg coordinates.
    """
    _require_std012(point)
    a, b = point.alpha, point.beta
    if a <= 0.0:
        raise NotParabolic("A0 is parabolic only for alpha in (0, pi/2]")
    d = two_eigenvalue_residual(a, b)
    if abs(d) <= band:
        gen = build_generators(point)
        w, v = np.linalg.eig(gen.A0)
        k = int(np.argmin(np.abs(w - cmath.exp(1j * a))))
        return AxisData(AxisCase.INVARIANT_PLANE, d, polar=v[:, k])
    sq = math.sqrt(cos_alpha(a))
    y = sq * math.cos(b) * (math.cos(a / 2) + math.cos(a / 6)) / d
    num = (
        1j * y * math.sin(2 * b) * cmath.exp(1j * a / 3) * math.cos(a / 3)
        - 1j * sq * math.sin(b) * cmath.exp(1j * a / 6)
    )
    den = (1 - math.sin(b) ** 2 * cmath.exp(1j * a)) * cmath.exp(-1j * a / 3) + math.cos(b) ** 2
    x = num / den
    if abs(x.imag) > 1e-10:
        raise AxisUnavailable(f"axis coordinate has imaginary part {x.imag:.3e}")
    return AxisData(AxisCase.INVARIANT_LINE, d, y, x.real, x.imag)


def axis_invariance_residual(point: ModuliPoint, axis: AxisData, ts=(-2.0, -0.5, 0.0, 1.0, 3.0)) -> float:
    """How far A0 moves points of the invariant vertical chain off it."""
    if axis.case is not AxisCase.INVARIANT_LINE:
        raise AxisUnavailable("axis is not an invariant line")
    A0 = build_generators(point).A0
    y, x = axis.y, axis.x
    worst = 0.0
    for t in ts:
        v = np.array([-(y * y + x * x) + 1j * t, 1j * SQRT2 * y, SQRT2 * x, 1])
        w = A0 @ v
        w = w / w[3]
        worst = max(
            worst,
            abs(w[1] / SQRT2 - 1j * y),
            abs(w[2] / SQRT2 - x),
            abs(herm_inner(w, w)),
        )
    return float(worst)


def tstar(point: ModuliPoint, axis: AxisData | None = None) -> float:
    """Height of the hyperplane carrying the image of the upper family under
    the third inversion; the upper family itself lies in t = 0."""
    axis = a0_axis(point) if axis is None else axis
    if axis.case is not AxisCase.INVARIANT_LINE:
        raise AxisUnavailable("t* needs an invariant line")
    a, b = point.alpha, point.beta
    sq = math.sqrt(cos_alpha(a))
    return 2 * sq * (-math.sin(a / 2) * math.cos(b) * axis.y + math.cos(a / 2) * math.sin(b) * axis.x) + math.sin(a)


def bisector_slice_polar(u1, u2, s):
    """Unit polar of the complex slice with parameter s of the bisector whose
    extreme slices have polars u1 (s = 1) and u2 (s = a + sqrt(a^2 - 1)).

    `s` may be an array; the result then has one row per entry.
    """
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    a = herm_inner(u1, u2)
    if abs(a.imag) > 1e-10 * max(1.0, abs(a)) or a.real <= 1.0:
        raise NotHyperParallel(f"<u1, u2> = {a:.6g} is not a real number above 1")
    a = a.real
    r = math.sqrt(a * a - 1)
    s = np.asarray(s, dtype=float)
    lo = u2 - (a - r) * u1
    hi = u2 - (a + r) * u1
    return (np.multiply.outer(s, lo) - np.multiply.outer(1 / s, hi)) / (2 * r)


@dataclass(frozen=True)
class PolarFamily:
    axis: AxisData
    a: float
    p_half: np.ndarray = field(repr=False)
    p_two: np.ndarray = field(repr=False)

    @property
    def r(self) -> float:
        return math.sqrt(self.a * self.a - 1)

    def phi(self, lam):
        k = (self.a - 1 + self.r) / 3
        return 2 * k * np.asarray(lam, dtype=float) - k + 1

    # each regime returns (vectors, norms): rows of unnormalized polars and
    # their Hermitian norms, so degenerate endpoints stay representable

    def upper_raw(self, s) -> tuple:
        """lam = 1/s >= 2; s = 0 is the point at infinity."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        y, x = self.axis.y, self.axis.x
        v = np.stack([np.ones_like(s), 1j * SQRT2 * y * s, SQRT2 * x * s, s], axis=1).astype(complex)
        return v, 2 * s * (1 + s * (y * y + x * x))

    def lower_raw(self, lam) -> tuple:
        """lam <= 1/2; lam = 0 is the origin."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        y, x = self.axis.y, self.axis.x
        v = np.stack(
            [lam, -1j * SQRT2 * y * lam, SQRT2 * x * lam, np.ones_like(lam)], axis=1
        ).astype(complex)
        return v, 2 * lam * (1 + lam * (y * y + x * x))

    def middle_raw(self, lam) -> tuple:
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        v = bisector_slice_polar(self.p_half, self.p_two, self.phi(lam))
        return v, np.ones(len(lam))

    def p(self, lam: float) -> np.ndarray:
        """Unit polar for a single finite lam > 0."""
        if lam >= 2:
            v, n = self.upper_raw(1 / lam)
        elif lam <= 0.5:
            v, n = self.lower_raw(lam)
        else:
            v, n = self.middle_raw(lam)
        return v[0] / math.sqrt(n[0])

    def seam_error(self) -> float:
        lo = self.middle_raw([0.5, 2.0])[0]
        return float(max(np.abs(lo[0] - self.p_half).max(), np.abs(lo[1] - self.p_two).max()))


def polar_family(point: ModuliPoint, axis: AxisData | None = None) -> PolarFamily:
    axis = a0_axis(point) if axis is None else axis
    if axis.case is not AxisCase.INVARIANT_LINE:
        raise AxisUnavailable("polar families need an invariant line")
    if axis.y ** 2 + axis.x ** 2 >= 1:
        raise NeighborhoodConditionViolated(
            f"y^2 + x^2 = {axis.y ** 2 + axis.x ** 2:.6g} >= 1"
        )
    y, x = axis.y, axis.x
    p_two = np.array([2, 1j * SQRT2 * y, SQRT2 * x, 1]) / math.sqrt(2 * (2 + y * y + x * x))
    p_half = np.array([0.5, -0.5j * SQRT2 * y, 0.5 * SQRT2 * x, 1]) / math.sqrt(
        1 + 0.5 * (y * y + x * x)
    )
    a = herm_inner(p_two, p_half).real
    return PolarFamily(axis, a, p_half, p_two)


# closed forms of |<p_lam, q_mu>|^2 at alpha = pi/2, where the axis sits at
# the origin and a = 5/4

def _cf_upper_upper(l, m):
    return (l * l * m * m + 2 * l * m + m * m + 1) / (4 * l * m)


def _cf_middle_upper(l, m):
    return (81 + (4 * l**4 + 16 * l**3 + 24 * l**2 + 16 * l + 85) * m * m + 36 * (1 + l) ** 2 * m) / (
        72 * m * (1 + l) ** 2
    )


def _cf_middle_middle(l, m):
    num = (
        16 * l**4 * m**4 + 64 * l**4 * m**3 + 64 * l**3 * m**4 + 96 * l**4 * m**2
        + 256 * l**3 * m**3 + 96 * l**2 * m**4 + 64 * l**4 * m + 384 * l**3 * m**2
        + 384 * l**2 * m**3 + 64 * l * m**4 + 16 * l**4 + 256 * l**3 * m
        + 1224 * l**2 * m**2 + 256 * l * m**3 + 340 * m**4 + 64 * l**3
        + 1680 * l**2 * m + 1680 * l * m**2 + 1360 * m**3 + 744 * l**2
        + 2848 * l * m + 2688 * m**2 + 1360 * l + 2656 * m + 7549
    )
    return num / (1296 * (1 + l) ** 2 * (m + 1) ** 2)


def _cf_upper_middle(l, m):
    num = (
        4 * (l * l + 1) * m**4 + 16 * (l * l + 1) * m**3 + 6 * (4 * l * l + 6 * l + 4) * m * m
        + (16 * l * l + 72 * l + 16) * m + 4 * l * l + 36 * l + 85
    )
    return num / (72 * l * (m + 1) ** 2)


# item name -> (p regime, q regime, closed form); q_mu = A1^{-1} p_mu
ITEMS = {
    "item1": ("lower", "upper", _cf_upper_upper),
    "item2": ("middle", "upper", _cf_middle_upper),
    "item3": ("upper", "upper", _cf_upper_upper),
    "item4": ("middle", "middle", _cf_middle_middle),
    "item5": ("upper", "middle", _cf_upper_middle),
}


def closed_form(item: str, lam: float, mu: float) -> float:
    return ITEMS[item][2](lam, mu)


class Verdict(enum.Enum):
    PASS = "PASS"
    INDETERMINATE = "INDETERMINATE"
    FAIL = "FAIL"

    @property
    def exit_code(self) -> int:
        return {"PASS": 0, "INDETERMINATE": 1, "FAIL": 2}[self.value]


@dataclass(frozen=True)
class Check:
    min_margin: float
    arg_min: tuple
    # smallest raw value of the sampled quantity (|<p,q>| or t*)
    min_value: float = float("nan")


@dataclass(frozen=True)
class CertificateReport:
    point: ModuliPoint
    checks: dict
    verdict: Verdict
    samples: int
    margin: float
    reason: str = ""
    preconditions: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


def chebyshev_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [lo, hi], endpoints included, ascending."""
    k = np.arange(n)
    g = lo + (hi - lo) * (1 - np.cos(np.pi * k / (n - 1))) / 2
    g[0], g[-1] = lo, hi
    return g


def _pair_values(V, NV, W, NW, outer: bool = True) -> np.ndarray:
    """|<p, q>| for unit polars, with degenerate (null) ends handled apart.

    A degenerate chain is a single boundary point.  It is disjoint from the
    other chain exactly when the inner product is nonzero; that case is +inf,
    incidence is 0.
    """
    if outer:
        G = np.abs(herm_gram(V, W))
        N = np.multiply.outer(NV, NW)
        scale = np.multiply.outer(np.linalg.norm(V, axis=1), np.linalg.norm(W, axis=1))
    else:
        G = np.abs(np.einsum("ij,jk,ik->i", V, SIEGEL.matrix.T, np.conj(W)))
        N = NV * NW
        scale = np.linalg.norm(V, axis=1) * np.linalg.norm(W, axis=1)
    out = np.empty_like(G, dtype=float)
    good = N > 1e-300
    out[good] = G[good] / np.sqrt(N[good])
    bad = ~good
    out[bad] = np.where(G[bad] > 1e-12 * scale[bad], np.inf, 0.0)
    return out


def _argmin(margins: np.ndarray, lam: np.ndarray, mu: np.ndarray) -> Check:
    m = float(np.min(margins))
    idx = np.argwhere(margins == m)
    pairs = sorted((float(lam[i]), float(mu[j])) for i, j in idx)
    return Check(m, pairs[0])


def certify(
    point: ModuliPoint,
    samples: int = DEFAULT_SAMPLES,
    margin: float = DEFAULT_MARGIN,
    band: float = LOCUS_BAND,
) -> CertificateReport:
    if samples < 9:
        raise ValueError("at least 9 samples per axis are required")
    pre = {}

    def indeterminate(reason: str, checks=None, diag=None) -> CertificateReport:
        return CertificateReport(point, checks or {}, Verdict.INDETERMINATE, samples, margin, reason, pre, diag or {})

    if point.family is not Family.STD012:
        return indeterminate("family-unsupported")
    if point.alpha <= 0:
        return indeterminate("not-parabolic")
    d = two_eigenvalue_residual(point.alpha, point.beta)
    pre["locus"] = abs(d) - band
    if abs(d) <= band:
        return indeterminate("on-locus")
    try:
        axis = a0_axis(point, band)
    except AxisUnavailable:
        return indeterminate("axis-unavailable")
    pre["neighborhood"] = 1 - (axis.y ** 2 + axis.x ** 2)
    if pre["neighborhood"] <= 0:
        return indeterminate("neighborhood")
    fam = polar_family(point, axis)
    pre["hyperparallel"] = fam.a - 1
    if fam.a <= 1:
        return indeterminate("not-hyperparallel")

    gen = build_generators(point)
    A1i = np.linalg.inv(gen.A1)

    s_up = chebyshev_grid(0.0, 0.5, samples)
    lam_up = np.divide(1.0, s_up, out=np.full_like(s_up, np.inf), where=s_up > 0)
    lam_lo = chebyshev_grid(0.0, 0.5, samples)
    lam_mid = chebyshev_grid(0.5, 2.0, samples)
    regimes = {
        "upper": (*fam.upper_raw(s_up), lam_up),
        "lower": (*fam.lower_raw(lam_lo), lam_lo),
        "middle": (*fam.middle_raw(lam_mid), lam_mid),
    }
    checks = {}
    diag = {"seam_error": fam.seam_error(), "a": fam.a, "y": axis.y, "x": axis.x}

    # chains lam and 1/lam of the upper and lower families are hyper-parallel
    Vu, Nu, _ = regimes["upper"]
    Vl, Nl = fam.lower_raw(s_up)
    vals = _pair_values(Vu, Nu, Vl, Nl, outer=False)
    k = min(np.flatnonzero(vals == vals.min()), key=lambda i: lam_up[i])
    checks["upper-vs-inverse"] = Check(
        float(vals[k] - 1), (float(lam_up[k]), float(s_up[k])), float(vals[k])
    )

    # the three families together form an embedded sphere; values tend to 1
    # quadratically at the two seams, so the margin is measured against the
    # squared distance to the seam in compact coordinates
    Vm, Nm, _ = regimes["middle"]
    seam_values = []
    for name, (V, N, lam), lam_c, seam in (
        ("sphere-upper", regimes["upper"], s_up, (0.5, 2.0)),
        ("sphere-lower", regimes["lower"], lam_lo, (0.5, 0.5)),
    ):
        vals = _pair_values(V, N, Vm, Nm)
        rho2 = np.add.outer((lam_c - seam[0]) ** 2, (lam_mid - seam[1]) ** 2)
        at_seam = rho2 == 0
        seam_values.extend(vals[at_seam].tolist())
        scaled = (vals - 1) / np.minimum(1.0, np.where(at_seam, 1.0, rho2))
        scaled[at_seam] = np.inf
        c = _argmin(scaled, lam, lam_mid)
        checks[name] = Check(c.min_margin, c.arg_min, float(np.min(np.where(at_seam, np.inf, vals))))
    diag["seam_value_error"] = float(max(abs(v - 1) for v in seam_values))

    # pairwise disjointness of the first sphere and its image under A1^{-1}
    for item, (pr, qr, _) in ITEMS.items():
        V, N, lam = regimes[pr]
        W, NW, mu = regimes[qr]
        vals = _pair_values(V, N, W @ A1i.T, NW)
        c = _argmin(vals - 1, lam, mu)
        checks[item] = Check(c.min_margin, c.arg_min, float(np.min(vals)))

    ts = tstar(point, axis)
    checks["item6-tstar"] = Check(ts - 0.5, (math.nan, math.nan), ts)

    if abs(point.alpha - math.pi / 2) <= 1e-12:
        diag["closed_form_error"] = _closed_form_error(fam, A1i, ts)

    reason = ""
    problems = []
    if diag["seam_error"] > SEAM_TOL or diag["seam_value_error"] > SEAM_TOL:
        problems.append("seam-mismatch")
    if diag.get("closed_form_error", 0.0) > CLOSED_FORM_TOL:
        problems.append("closed-form-mismatch")
    worst = min(c.min_margin for c in checks.values())
    if worst < 0:
        verdict = Verdict.FAIL
        reason = "violated:" + ",".join(k for k, c in checks.items() if c.min_margin < 0)
    elif problems:
        verdict, reason = Verdict.INDETERMINATE, ",".join(problems)
    elif worst >= margin:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.INDETERMINATE
        reason = "inside-margin:" + ",".join(k for k, c in checks.items() if c.min_margin < margin)
    return CertificateReport(point, checks, verdict, samples, margin, reason, pre, diag)


def _closed_form_error(fam: PolarFamily, A1i: np.ndarray, ts: float) -> float:
    lam_by_regime = {
        "upper": [2.0, 3.0, 7.5, 40.0],
        "lower": [0.5, 0.3, 0.1, 0.02],
        "middle": [0.5, 0.8, 1.3, 2.0],
    }
    err = abs(ts - 1.0)
    for item, (pr, qr, cf) in ITEMS.items():
        for lam in lam_by_regime[pr]:
            for mu in lam_by_regime[qr]:
                v = abs(herm_inner(fam.p(lam), A1i @ fam.p(mu))) ** 2
                err = max(err, abs(v - cf(lam, mu)))
    return float(err)
