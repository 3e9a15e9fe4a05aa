"""Correlators, CHSH reports, no-signaling boxes, marginal joints."""

import math
from fractions import Fraction

import numpy as np
import pytest

from unsharpjoint import (
    BlochVector,
    DensityMatrix,
    DichotomicObservable,
    DimensionMismatch,
    InvalidBox,
    InvalidDistribution,
    NoSignalingBox,
    box_chsh,
    chsh,
    correlation,
    deterministic_box,
    joint_distribution_exists,
    local_deterministic_boxes,
    optimal_settings,
    pr_box,
    singlet,
    smeared_chsh,
    white_noise_box,
)
from unsharpjoint.bell import _observable_of
from unsharpjoint.operators import PAULI_X, PAULI_Z

TWO_SQRT2 = 2.8284271247461903
INV_SQRT2 = 0.7071067811865475


def _random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


class TestCorrelation:
    def test_singlet_anticorrelated(self):
        z = _observable_of(PAULI_Z)
        assert correlation(singlet(), z, z) == pytest.approx(-1.0, abs=1e-12)

    def test_product_state_uncorrelated_in_x(self):
        rho = DensityMatrix.pure([1, 0, 0, 0])
        x = _observable_of(PAULI_X)
        assert abs(correlation(rho, x, x)) < 1e-12

    def test_singlet_tilted(self):
        # Bloch-formula oracle: the singlet correlator is -a.b, so z
        # against (z+x)/sqrt(2) gives exactly -1/sqrt(2).
        z = _observable_of(PAULI_Z)
        tilted = _observable_of((PAULI_Z + PAULI_X) / math.sqrt(2))
        assert correlation(singlet(), z, tilted) == pytest.approx(
            -INV_SQRT2, abs=1e-12
        )

    def test_dimension_mismatch(self):
        z = _observable_of(PAULI_Z)
        with pytest.raises(DimensionMismatch):
            correlation(DensityMatrix.maximally_mixed(2), z, z)


class TestChsh:
    def test_product_states_respect_local_bound(self):
        rng = np.random.default_rng(151)
        for _ in range(50):
            rho = DensityMatrix(
                np.kron(
                    DensityMatrix.pure(rng.normal(size=2) + 1j * rng.normal(size=2)).matrix,
                    DensityMatrix.pure(rng.normal(size=2) + 1j * rng.normal(size=2)).matrix,
                )
            )
            obs = [BlochVector(_random_unit(rng)).observable() for _ in range(4)]
            assert chsh(rho, *obs).value <= 2.0 + 1e-9

    def test_singlet_optimal_settings_saturate_tsirelson(self):
        rep = chsh(singlet(), *optimal_settings())
        assert rep.value == pytest.approx(TWO_SQRT2, abs=1e-9)
        assert rep.bound_lambda == pytest.approx(TWO_SQRT2, abs=1e-15)
        assert rep.within_bound

    def test_random_sweep_below_tsirelson(self):
        rng = np.random.default_rng(157)
        worst = 0.0
        for _ in range(500):
            rho = DensityMatrix.pure(rng.normal(size=4) + 1j * rng.normal(size=4))
            obs = [BlochVector(_random_unit(rng)).observable() for _ in range(4)]
            worst = max(worst, chsh(rho, *obs).value)
        assert worst <= TWO_SQRT2 + 1e-6

    def test_report_recomputation_guard(self):
        from unsharpjoint import ValidationError
        from unsharpjoint.bell import ChshReport

        with pytest.raises(ValidationError):
            ChshReport(value=3.0, terms=(1.0, 1.0, 1.0, 1.0), bound_lambda=2.0,
                       within_bound=False)


class TestSmearedChsh:
    def test_lambda_one_matches_sharp(self):
        sharp = chsh(singlet(), *optimal_settings())
        smeared = smeared_chsh(singlet(), *optimal_settings(), 1.0)
        assert smeared.value == pytest.approx(sharp.value, abs=1e-12)

    def test_saturation_at_lambda_opt(self):
        rep = smeared_chsh(singlet(), *optimal_settings(), 1.0 / math.sqrt(2.0))
        assert rep.value == pytest.approx(2.0, abs=1e-9)
        assert rep.bound_lambda == 2.0
        assert rep.within_bound

    def test_half_lambda(self):
        rep = smeared_chsh(singlet(), *optimal_settings(), 0.5)
        assert rep.value == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_scaling_identity(self):
        rng = np.random.default_rng(163)
        for _ in range(50):
            rho = DensityMatrix.pure(rng.normal(size=4) + 1j * rng.normal(size=4))
            obs = [BlochVector(_random_unit(rng)).observable() for _ in range(4)]
            lam = 1.0 - float(rng.uniform(0.0, 1.0))
            sharp = chsh(rho, *obs).value
            smeared = smeared_chsh(rho, *obs, lam).value
            assert abs(smeared - lam * sharp) <= 1e-12


class TestBoxes:
    def test_pr_box_hits_four_exactly(self):
        rep = box_chsh(pr_box())
        assert rep.value == 4.0
        assert not rep.within_bound

    def test_deterministic_boxes_exactly_two(self):
        boxes = local_deterministic_boxes()
        assert len(boxes) == 16
        reports = [box_chsh(b) for b in boxes]
        assert all(r.value == 2.0 for r in reports)
        # The signed combination reaches +2 on exactly half of them.
        assert sum(1 for r in reports if r.signed == 2.0) == 8

    def test_white_noise_vanishes(self):
        assert box_chsh(white_noise_box()).value == 0.0

    def test_no_signaling_residuals(self):
        for box in (pr_box(), white_noise_box(), *local_deterministic_boxes()):
            for a in range(2):
                for x in (1, 2):
                    m1 = box._alice_marginal(a, x, 1)
                    m2 = box._alice_marginal(a, x, 2)
                    assert abs(float(m1 - m2)) <= 1e-12

    def test_random_mixtures_stay_below_four(self):
        rng = np.random.default_rng(167)
        vertices = [b.table for b in (*local_deterministic_boxes(), pr_box())]
        for _ in range(50):
            w = rng.dirichlet(np.ones(len(vertices)))
            mixed = {
                key: [
                    [
                        float(sum(wi * float(v[key][a][b]) for wi, v in zip(w, vertices)))
                        for b in range(2)
                    ]
                    for a in range(2)
                ]
                for key in ("11", "12", "21", "22")
            }
            assert box_chsh(NoSignalingBox(mixed)).value <= 4.0 + 1e-12

    def test_rational_entries_preserved(self):
        box = pr_box()
        assert isinstance(box.table["11"][0][0], Fraction)

    def test_negative_entry_rejected(self):
        table = pr_box().to_json()["p"]
        table["11"][0][0] = -0.1
        table["11"][0][1] = 0.6
        with pytest.raises(InvalidBox):
            NoSignalingBox(table)

    def test_unnormalized_rejected(self):
        table = white_noise_box().to_json()["p"]
        table["22"][1][1] = 0.3
        with pytest.raises(InvalidBox):
            NoSignalingBox(table)

    def test_signaling_rejected(self):
        # Alice's outcome copies Bob's setting: grossly signaling.
        table = {
            "11": [[1, 0], [0, 0]],
            "12": [[0, 0], [1, 0]],
            "21": [[1, 0], [0, 0]],
            "22": [[0, 0], [1, 0]],
        }
        with pytest.raises(InvalidBox):
            NoSignalingBox(table)

    def test_outcome_sign_lookup(self):
        box = deterministic_box((1, -1), (1, 1))
        assert box.prob(+1, +1, 1, 1) == 1
        assert box.prob(-1, +1, 2, 1) == 1
        assert box.prob(+1, +1, 2, 2) == 0


class TestJointDistribution:
    def test_uniform_marginals(self):
        rep = joint_distribution_exists((0.5, 0.5), (0.5, 0.5))
        assert rep.exists
        assert rep.witness == ((0.25, 0.25), (0.25, 0.25))

    def test_deterministic_marginals(self):
        rep = joint_distribution_exists((1.0, 0.0), (0.0, 1.0))
        assert rep.exists
        assert rep.witness[0][1] == 1.0
        assert rep.residual <= 1e-15

    def test_skewed_marginals(self):
        rep = joint_distribution_exists((0.3, 0.7), (0.6, 0.4))
        assert rep.exists
        np.testing.assert_allclose(
            np.array(rep.witness), [[0.18, 0.12], [0.42, 0.28]], atol=1e-15
        )
        assert rep.residual <= 1e-15

    def test_negative_rejected(self):
        with pytest.raises(InvalidDistribution):
            joint_distribution_exists((-0.1, 1.1), (0.5, 0.5))

    def test_unnormalized_rejected(self):
        with pytest.raises(InvalidDistribution):
            joint_distribution_exists((0.4, 0.4), (0.5, 0.5))
