"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest
from scipy import ndimage

from oracles import eigen_discriminant, to_unit_det
from pu31.certifier import (
    BETA0,
    ITEMS,
    Verdict,
    a0_axis,
    axis_invariance_residual,
    certify,
    closed_form,
    polar_family,
    two_eigenvalue_residual,
)
from pu31.cli import main
from pu31.hermitian import herm_inner
from pu31.isometry import Kind, classify, elliptic_angle_type, trace_data
from pu31.modular import HALF_PI, ModuliPoint, Word, build_generators, cos_alpha, evaluate_word, verify_relations, w11_closed_forms

SEED = 20240611
TWO_PI_3 = 2 * math.pi / 3
SPOT_WORDS = ["2,1", "4,1", "6,1", "13,1", "1,2;3,2", "1,2;3,3", "1,2;3,4", "1,2;3,1;2,1", "1,2;3,1;2,2"]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def sample_points(n, seed=SEED):
    return np.random.default_rng(seed).uniform(0, HALF_PI, (n, 2))


def gens(a, b, family="012"):
    return build_generators(ModuliPoint(family, float(a), float(b)))


def test_criterion_01_relations(report):
    worst = 0.0
    for a, b in sample_points(200):
        for fam in ("012", "122"):
            worst = max(worst, verify_relations(gens(a, b, fam)).worst)
    report(1, worst <= 1e-10, f"worst relation residual {worst:.2e} over 200 points x 2 families")


def test_criterion_02_angle_types(report):
    worst = 0.0
    for a, b in sample_points(200):
        t = elliptic_angle_type(gens(a, b).A1)
        worst = max(worst, *(abs(x - y) for x, y in zip(t, (0, TWO_PI_3, 2 * TWO_PI_3))))
        t = elliptic_angle_type(gens(a, b, "122").A1)
        worst = max(worst, *(abs(x - y) for x, y in zip(t, (TWO_PI_3, 2 * TWO_PI_3, 2 * TWO_PI_3))))
    report(2, worst <= 1e-8, f"worst angle deviation {worst:.2e}")


def test_criterion_03_discriminant_oracle(report):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(500):
        g = gens(*rng.uniform(0, HALF_PI, 2), str(rng.choice(["012", "122"])))
        letters = [g.A0, g.A1, g.A2, g.A1_inv]
        M = np.eye(4, dtype=complex)
        for i in rng.integers(0, 4, rng.integers(2, 9)):
            M = M @ letters[i]
        M = to_unit_det(M)
        d = eigen_discriminant(M).real
        worst = max(worst, abs(trace_data(M).holy - d) / max(1.0, abs(d)))
    ident = abs(trace_data(np.eye(4)).holy)
    report(3, worst <= 1e-6 and ident <= 1e-12, f"worst relative error {worst:.2e}, identity {ident:.1e}")


def test_criterion_04_parabolicity_map(report):
    bad = []
    alphas = np.linspace(0.01, HALF_PI, 65)
    betas = np.linspace(0, HALF_PI, 65)
    for fam in ("012", "122"):
        for a, b in zip(alphas, betas[::-1]):
            if classify(gens(a, b, fam).A0).kind is not Kind.PARABOLIC:
                bad.append((fam, a, b))
    for b in np.linspace(0, HALF_PI, 66)[:-1]:
        if not classify(gens(0.0, b).A0).is_elliptic:
            bad.append(("012", 0.0, b))
    report(4, not bad, f"{len(bad)} mismatches over 65 parabolic points per family and 65 elliptic points")


def test_criterion_05_commutator_closed_forms(report):
    g = np.linspace(0, HALF_PI, 33)
    trace_err = 0.0
    for a in g:
        for b in g:
            tr = w11_closed_forms(a, b)[0]
            trace_err = max(trace_err, abs(trace_data(evaluate_word(gens(a, b), Word.of(1, 1))).tau - tr))
    edge = 0.0
    for s in g:
        for a, b in ((s, 0.0), (s, HALF_PI), (0.0, s)):
            td = trace_data(evaluate_word(gens(a, b), Word.of(1, 1)))
            edge = max(edge, abs(td.holy) / max(1.0, abs(td.tau) ** 6))
    rng = np.random.default_rng(SEED)
    interior = rng.uniform(0.02, HALF_PI - 0.02, (100, 2))
    negative = sum(trace_data(evaluate_word(gens(a, b), Word.of(1, 1))).holy < 0 for a, b in interior)
    ok = trace_err <= 1e-9 and edge <= 1e-6 and negative == 100
    report(5, ok, f"trace error {trace_err:.2e}, edge |H|/scale {edge:.2e}, {negative}/100 interior H<0")


def test_criterion_06_spot_words(report):
    g = gens(0.2, 0.2)
    words = [Word.parse(w) for w in SPOT_WORDS]
    positive, slowest = 0, 0.0
    for w in words:
        best = math.inf
        for _ in range(20):
            t0 = time.perf_counter()
            h = trace_data(evaluate_word(g, w)).holy
            best = min(best, time.perf_counter() - t0)
        positive += h > 0
        slowest = max(slowest, best)
    report(6, positive == 9 and slowest < 1e-3, f"{positive}/9 words with H>0, slowest {slowest * 1e3:.3f} ms")


def test_criterion_07_axis(report):
    beta_zero = 0.0
    for a in np.linspace(1e-3, HALF_PI, 200):
        y = a0_axis(ModuliPoint("012", float(a), 0.0)).y
        beta_zero = max(beta_zero, abs(y - math.sqrt(cos_alpha(a)) / (2 * math.cos(a / 2))))
    rng = np.random.default_rng(SEED)
    inv, imag, used = 0.0, 0.0, 0
    while used < 50:
        a, b = rng.uniform(0.01, HALF_PI, 1)[0], rng.uniform(0, HALF_PI, 1)[0]
        if abs(two_eigenvalue_residual(a, b)) < 1e-3:
            continue
        p = ModuliPoint("012", float(a), float(b))
        axis = a0_axis(p)
        inv = max(inv, axis_invariance_residual(p, axis))
        imag = max(imag, abs(axis.x_imag))
        used += 1
    ok = beta_zero <= 1e-12 and inv <= 1e-9 and imag <= 1e-10
    report(7, ok, f"beta=0 error {beta_zero:.1e}, invariance {inv:.1e}, Im x {imag:.1e}")


def test_criterion_08_corner_cross_check(report):
    corner = ModuliPoint("012", HALF_PI, 0.0)
    fam = polar_family(corner)
    a_err = abs(fam.a - 1.25)
    pair_err = max(
        abs(herm_inner(fam.p(lam), fam.p(1 / lam)).real - (lam * lam + 1) / (2 * lam)) for lam in (2.0, 3.0, 5.0, 100.0)
    )
    A1i = np.linalg.inv(build_generators(corner).A1)
    regimes = {"upper": [2.0, 3.0, 7.5, 40.0], "lower": [0.01, 0.2, 0.4, 0.5], "middle": [0.5, 0.8, 1.3, 2.0]}
    cf_err = 0.0
    for item, (pr, qr, _) in ITEMS.items():
        for lam in regimes[pr]:
            for mu in regimes[qr]:
                v = abs(herm_inner(fam.p(lam), A1i @ fam.p(mu))) ** 2
                cf_err = max(cf_err, abs(v - closed_form(item, lam, mu)))
    ok = a_err <= 1e-12 and pair_err <= 1e-10 and cf_err <= 1e-9
    report(8, ok, f"|a-5/4| {a_err:.1e}, reciprocal pairs {pair_err:.1e}, closed forms {cf_err:.1e}")


def test_criterion_09_certificate_verdicts(report):
    offsets_a = np.linspace(-0.035, 0.0, 5)
    offsets_b = np.linspace(-0.035, 0.035, 5)
    failures, skipped, slowest = [], 0, 0.0
    for ca, cb in ((HALF_PI, 0.05), (HALF_PI, HALF_PI - 0.05)):
        for da in offsets_a:
            for db in offsets_b:
                a, b = ca + da, min(cb + db, HALF_PI)
                if abs(a - HALF_PI) < 1e-9 and abs(b - BETA0) < 0.01:
                    skipped += 1
                    continue
                t0 = time.perf_counter()
                rep = certify(ModuliPoint("012", float(a), float(b)))
                slowest = max(slowest, time.perf_counter() - t0)
                if rep.verdict is not Verdict.PASS:
                    failures.append((a, b, rep.verdict.value, rep.reason))
    far = certify(ModuliPoint("012", 0.2, 0.2))
    ok = not failures and far.verdict is not Verdict.PASS and slowest <= 10
    report(
        9,
        ok,
        f"{50 - skipped - len(failures)}/{50 - skipped} PASS near the corners, (0.2,0.2) {far.verdict.value}"
        f" ({far.reason}), slowest run {slowest:.2f} s; failures {failures[:3]}",
    )


def test_criterion_10_locus_scan(report, tmp_path):
    out = tmp_path / "scan.csv"
    t0 = time.perf_counter()
    code = main(["scan", "--family", "012", "--word", "2,1", "--grid", "128", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    lines = out.read_text().splitlines()[1:]
    cls = np.array([line.rsplit(",", 1)[1] for line in lines]).reshape(128, 128)
    # signs inside the discriminant band are left out of both regions
    elliptic = cls == "regular-elliptic"
    loxodromic = cls == "regular-loxodromic"
    labels, n_regions = ndimage.label(elliptic)
    sizes = ndimage.sum(elliptic, labels, range(1, n_regions + 1)) if n_regions else np.array([])
    main_region = labels == (int(np.argmax(sizes)) + 1) if n_regions else elliptic
    boundary = np.count_nonzero(ndimage.binary_dilation(main_region) & loxodromic)
    ok = code == 0 and len(lines) == 128 * 128 and n_regions >= 1 and boundary > 0 and elapsed < 30
    report(
        10,
        ok,
        f"largest elliptic region {int(main_region.sum())} cells with {boundary} loxodromic neighbours,"
        f" {n_regions} elliptic region(s) in total, {elapsed:.1f} s",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
