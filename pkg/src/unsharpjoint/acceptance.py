"""Acceptance suite: the nine exit criteria of this package, runnable as
`uj acceptance` or through tests/test_acceptance.py.

Each criterion function is self-contained, deterministic (fixed seeds)
and returns an AcceptanceResult carrying the pass/fail verdict and the
measured quantities.  Tolerances are pinned here, not configurable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bell import (
    box_chsh,
    chsh,
    local_deterministic_boxes,
    optimal_settings,
    pr_box,
    singlet,
    smeared_chsh,
)
from .decompose import compress, neumark_dilate, two_projector_blocks
from .joint import (
    LAMBDA_OPT,
    BlochVector,
    check_joint,
    criterion_value,
    feasibility_oracle,
    lambda_opt_search,
    povm_joint_observable,
    pvm_joint_observable,
    qubit_joint_observable,
)
from .operators import DensityMatrix, DichotomicObservable, Effect, Projector
from .unsharp import mean_value, smear, smeared_mean


@dataclass(frozen=True)
class AcceptanceResult:
    number: int
    name: str
    passed: bool
    detail: str
    runtime: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.number} ({self.name}): {self.detail} [{self.runtime:.1f}s]"


def _random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_projector(rng, dim: int, rank: int) -> Projector:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(m)
    cols = q[:, :rank]
    return Projector(cols @ cols.conj().T, rank=rank)


def _random_effect(rng, dim: int) -> Effect:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(m)
    eigs = rng.uniform(0.0, 1.0, size=dim)
    return Effect((q * eigs) @ q.conj().T)


def _random_state(rng, dim: int) -> DensityMatrix:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return DensityMatrix.pure(v)


def criterion_1_lambda_opt() -> AcceptanceResult:
    """Worst-case search lands on 1/sqrt(2) within 1e-3, in under 60 s."""
    t0 = time.perf_counter()
    res = lambda_opt_search("worst-case", tol=1e-4, seed=2026, mesh=1000)
    dt = time.perf_counter() - t0
    err = abs(res.value - LAMBDA_OPT)
    passed = err <= 1e-3 and dt < 60.0
    return AcceptanceResult(
        1,
        "lambda-opt reproduction",
        passed,
        f"value {res.value:.6f}, |err| {err:.2e} (tol 1e-3), oracle {res.oracle_verdict}",
        dt,
    )


def criterion_2_tsirelson() -> AcceptanceResult:
    """Singlet saturates 2*sqrt(2); random sweep never exceeds it."""
    t0 = time.perf_counter()
    bound = 2.0 * math.sqrt(2.0)
    state = singlet()
    a1, a2, b1, b2 = optimal_settings()
    saturation = chsh(state, a1, a2, b1, b2).value
    sat_err = abs(saturation - bound)

    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(10_000):
        rho = _random_state(rng, 4)
        obs = [BlochVector(_random_unit(rng)).observable() for _ in range(4)]
        value = chsh(rho, obs[0], obs[1], obs[2], obs[3]).value
        worst = max(worst, value)
    dt = time.perf_counter() - t0
    passed = sat_err <= 1e-6 and worst <= bound + 1e-6 and dt < 120.0
    return AcceptanceResult(
        2,
        "Tsirelson bound",
        passed,
        f"saturation err {sat_err:.2e} (tol 1e-6), sweep max {worst:.9f} <= {bound:.9f}+1e-6",
        dt,
    )


def criterion_3_saturation_at_lambda_opt() -> AcceptanceResult:
    """Smearing one wing by 1/sqrt(2) pins the singlet CHSH at exactly 2."""
    t0 = time.perf_counter()
    state = singlet()
    a1, a2, b1, b2 = optimal_settings()
    at_opt = smeared_chsh(state, a1, a2, b1, b2, LAMBDA_OPT).value
    err = abs(at_opt - 2.0)

    worst = 0.0
    for lam in np.linspace(0.01, LAMBDA_OPT, 250):
        worst = max(worst, smeared_chsh(state, a1, a2, b1, b2, lam).value)
    dt = time.perf_counter() - t0
    passed = err <= 1e-9 and worst <= 2.0 + 1e-9
    return AcceptanceResult(
        3,
        "smeared-CHSH saturation",
        passed,
        f"value at lambda-opt {at_opt:.9f} (err {err:.2e}, tol 1e-9), grid max {worst:.9f}",
        dt,
    )


def criterion_4_witness_validity() -> AcceptanceResult:
    """1000 random qubit pairs at lam=0.70: witness residuals within 1e-9."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(404)
    lam = 0.70
    worst_res = 0.0
    worst_eig = math.inf
    feasible = 0
    for _ in range(1000):
        m = BlochVector(_random_unit(rng))
        n = BlochVector(_random_unit(rng))
        rep = qubit_joint_observable(m, n, lam)
        if not rep:
            continue
        feasible += 1
        res = check_joint(
            rep.witness, smear(m.observable(), lam), smear(n.observable(), lam)
        )
        worst_res = max(worst_res, res.marginal_max)
        worst_eig = min(worst_eig, res.min_eigenvalue)
    dt = time.perf_counter() - t0
    passed = feasible == 1000 and worst_res <= 1e-9 and worst_eig >= -1e-9
    return AcceptanceResult(
        4,
        "joint-POVM validity",
        passed,
        f"{feasible}/1000 feasible, max residual {worst_res:.2e} (tol 1e-9), "
        f"min eig {worst_eig:.2e} (>= -1e-9)",
        dt,
    )


def criterion_5_oracle_agreement() -> AcceptanceResult:
    """Closed form vs alternating projections on 1000 samples, 99% agreement."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(505)
    checked = agreed = banded = 0
    for _ in range(1000):
        m = BlochVector(_random_unit(rng))
        n = BlochVector(_random_unit(rng))
        lam = float(rng.uniform(0.3, 0.95))
        cval = criterion_value(m, n, lam)
        if abs(cval - 2.0) < 0.02:
            banded += 1
            continue
        closed = "yes" if cval <= 2.0 else "no"
        verdict = feasibility_oracle(
            smear(m.observable(), lam), smear(n.observable(), lam)
        ).feasible
        checked += 1
        if verdict == closed:
            agreed += 1
    dt = time.perf_counter() - t0
    rate = agreed / checked if checked else 0.0
    passed = rate >= 0.99
    return AcceptanceResult(
        5,
        "oracle agreement",
        passed,
        f"{agreed}/{checked} outside band agree ({rate:.1%}, need >=99%), {banded} in band",
        dt,
    )


def criterion_6_block_roundtrip() -> AcceptanceResult:
    """50 random projector pairs: dim<=2 blocks, residuals within 1e-9."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(606)
    worst_off = worst_rec = 0.0
    max_dim = 0
    for _ in range(50):
        d = int(rng.integers(3, 17))
        p = _random_projector(rng, d, int(rng.integers(1, d)))
        q = _random_projector(rng, d, int(rng.integers(1, d)))
        dec = two_projector_blocks(p, q)
        max_dim = max(max_dim, max(b.dim for b in dec.blocks))
        for m in (p.matrix, q.matrix):
            worst_off = max(worst_off, dec.off_block_mass(m))
            worst_rec = max(worst_rec, dec.reconstruction_residual(m))
    dt = time.perf_counter() - t0
    passed = max_dim <= 2 and worst_off <= 1e-9 and worst_rec <= 1e-9
    return AcceptanceResult(
        6,
        "two-projector block round-trip",
        passed,
        f"max block dim {max_dim}, off-block {worst_off:.2e}, "
        f"reconstruction {worst_rec:.2e} (tol 1e-9)",
        dt,
    )


def criterion_7_dilation_pipeline() -> AcceptanceResult:
    """Dilate/compress identity at 1e-12; full POVM pipeline at 1e-9."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)
    worst_rt = 0.0
    for d in (2, 4, 8):
        for _ in range(100):
            e = _random_effect(rng, d)
            dil = neumark_dilate(DichotomicObservable.from_yes_effect(e))
            back = compress(dil.projector.as_effect(), 0)
            worst_rt = max(worst_rt, float(np.max(np.abs(back.matrix - e.matrix))))

    worst_res = 0.0
    worst_eig = math.inf
    for i in range(200):
        d = 2 if i < 100 else 3
        o1 = DichotomicObservable.from_yes_effect(_random_effect(rng, d))
        o2 = DichotomicObservable.from_yes_effect(_random_effect(rng, d))
        rep = povm_joint_observable(o1, o2, LAMBDA_OPT)
        res = check_joint(rep.witness, smear(o1, LAMBDA_OPT), smear(o2, LAMBDA_OPT))
        worst_res = max(worst_res, res.marginal_max)
        worst_eig = min(worst_eig, res.min_eigenvalue)
    dt = time.perf_counter() - t0
    passed = worst_rt <= 1e-12 and worst_res <= 1e-9 and worst_eig >= -1e-9
    return AcceptanceResult(
        7,
        "dilation pipeline",
        passed,
        f"round-trip {worst_rt:.2e} (tol 1e-12), pipeline residual {worst_res:.2e} "
        f"(tol 1e-9), min eig {worst_eig:.2e}",
        dt,
    )


def criterion_8_box_layer() -> AcceptanceResult:
    """PR box at exactly 4, deterministic boxes at exactly 2, classical lam=1."""
    t0 = time.perf_counter()
    pr_value = box_chsh(pr_box()).value
    det_reports = [box_chsh(b) for b in local_deterministic_boxes()]
    det_ok = all(r.value <= 2.0 for r in det_reports)
    det_max = max(r.value for r in det_reports)

    # Commuting projective pair: jointly measurable with no smearing at all.
    p = Projector.from_matrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    q = Projector.from_matrix(np.diag([1.0, 1.0, 0.0]).astype(complex))
    classical = pvm_joint_observable(p, q, 1.0)
    dt = time.perf_counter() - t0
    passed = pr_value == 4.0 and det_ok and bool(classical)
    return AcceptanceResult(
        8,
        "box layer",
        passed,
        f"PR CHSH {pr_value} (== 4), deterministic max {det_max} (<= 2 exactly), "
        f"commuting pair at lambda=1: {classical.feasible}",
        dt,
    )


def criterion_9_mean_scaling() -> AcceptanceResult:
    """10^4 random triples: smeared mean equals lam times sharp mean."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(909)
    worst = 0.0
    for i in range(10_000):
        d = 2 if i % 5 else int(rng.integers(2, 5))
        obs = DichotomicObservable.from_yes_effect(_random_effect(rng, d))
        state = _random_state(rng, d)
        lam = 1.0 - float(rng.uniform(0.0, 1.0))  # uniform over (0, 1]
        report = smeared_mean(obs, lam, state)
        worst = max(worst, abs(report.value - lam * mean_value(obs, state)))
    dt = time.perf_counter() - t0
    passed = worst <= 1e-12
    return AcceptanceResult(
        9,
        "smeared-mean scaling",
        passed,
        f"max |smeared - lam*sharp| {worst:.2e} over 10^4 triples (tol 1e-12)",
        dt,
    )


CRITERIA: tuple[tuple[int, str, Callable[[], AcceptanceResult]], ...] = (
    (1, "lambda-opt reproduction", criterion_1_lambda_opt),
    (2, "Tsirelson bound", criterion_2_tsirelson),
    (3, "smeared-CHSH saturation", criterion_3_saturation_at_lambda_opt),
    (4, "joint-POVM validity", criterion_4_witness_validity),
    (5, "oracle agreement", criterion_5_oracle_agreement),
    (6, "two-projector block round-trip", criterion_6_block_roundtrip),
    (7, "dilation pipeline", criterion_7_dilation_pipeline),
    (8, "box layer", criterion_8_box_layer),
    (9, "smeared-mean scaling", criterion_9_mean_scaling),
)


def run_all(echo=print) -> list[AcceptanceResult]:
    """Run every criterion in order, printing one line per result."""
    results = []
    for _, _, fn in CRITERIA:
        result = fn()
        results.append(result)
        if echo is not None:
            echo(result.line)
    return results
