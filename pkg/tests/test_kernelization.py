"""
Tests for the Log-Euclidean primitives, kernel functions, anchors and the
stacked kernel matrices.
"""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.stats import ortho_group

from app.business.kernel_service import (
    build_kernel_matrix,
    exp_map,
    kernel_eval,
    kernelize,
    led_distance,
    log_map,
    select_anchors,
)
from app.errors import DimensionMismatchError, InvalidArgumentError, ManifoldDomainError
from app.models.kernel import VIEW_ORDER, AnchorSet, KernelKind, Modality, View
from app.schemas.config import (
    AnchorConfig,
    KernelCombination,
    KernelFunctionSpec,
    KernelSettings,
    ViewWeights,
)

RBF = KernelFunctionSpec(kind=KernelKind.RBF, sigma=1.0)
POLY = KernelFunctionSpec(kind=KernelKind.POLYNOMIAL, a=1.0, s=5)


def anchors_from(samples):
    """Every sample becomes an anchor, in order."""
    return AnchorSet(
        np.stack([s.histogram for s in samples]),
        np.stack([s.mean for s in samples]),
        np.stack([log_map(s.covariance) for s in samples]),
    )


def view_value(sample, r):
    return (sample.histogram, sample.mean, sample.covariance)[r]


class TestLogMap:
    def test_identity_maps_to_zero(self):
        assert np.allclose(log_map(np.eye(4)), 0.0, atol=1e-15)

    def test_diagonal(self):
        np.testing.assert_allclose(log_map(np.diag([np.e, np.e ** 2])), np.diag([1.0, 2.0]), atol=1e-12)

    def test_round_trip_with_exp_map(self, random_spd, rng):
        for _ in range(100):
            A = random_spd(int(rng.integers(1, 9)))
            S = log_map(A)
            assert np.allclose(S, S.T, rtol=0, atol=1e-10)
            np.testing.assert_allclose(exp_map(S), A, rtol=0, atol=1e-8)

    def test_non_spd_input(self):
        with pytest.raises(ManifoldDomainError) as info:
            log_map(np.diag([1.0, -0.5]))
        assert info.value.exit_code == 3
        with pytest.raises(ManifoldDomainError):
            log_map(np.zeros((2, 2)))


class TestLedDistance:
    def test_examples(self, random_spd):
        A = random_spd(3)
        assert led_distance(A, A) == 0.0
        assert led_distance(np.eye(2), np.diag([np.e, np.e])) == pytest.approx(np.sqrt(2), abs=1e-12)

    def test_metric_axioms(self, random_spd, rng):
        for _ in range(50):
            d = int(rng.integers(1, 6))
            A, B, C = random_spd(d), random_spd(d), random_spd(d)
            ab, ba = led_distance(A, B), led_distance(B, A)
            assert ab >= 0
            assert ab == ba
            assert led_distance(A, C) <= ab + led_distance(B, C) + 1e-9

    def test_orthogonal_congruence_invariance(self, random_spd, rng):
        for _ in range(30):
            d = int(rng.integers(2, 7))
            A, B = random_spd(d), random_spd(d)
            Q = ortho_group.rvs(d, random_state=rng)
            moved = led_distance(Q @ A @ Q.T, Q @ B @ Q.T)
            assert moved == pytest.approx(led_distance(A, B), abs=1e-8)


class TestKernelEval:
    def test_rbf_self_similarity(self, rng):
        x = rng.normal(size=5)
        for sigma in (0.1, 1.0, 7.0):
            assert kernel_eval(KernelFunctionSpec(sigma=sigma), x, x, view=1) == 1.0

    def test_rbf_at_distance_sqrt_two(self):
        value = kernel_eval(RBF, np.array([1.0, 0.0]), np.array([0.0, 1.0]), view=0)
        assert value == pytest.approx(np.exp(-1.0), abs=1e-12)
        assert value == pytest.approx(0.367879, abs=1e-6)

    def test_polynomial_orthogonal_inputs(self):
        assert kernel_eval(POLY, np.array([1.0, 0.0]), np.array([0.0, 3.0]), view=1) == 1.0

    def test_covariance_view_uses_log_euclidean_geometry(self, random_spd):
        A, B = random_spd(3), random_spd(3)
        expected_rbf = np.exp(-led_distance(A, B) ** 2 / 2.0)
        assert kernel_eval(RBF, A, B, view=2) == pytest.approx(expected_rbf, rel=1e-12)
        expected_poly = (np.sum(log_map(A) * log_map(B)) + 1.0) ** 5
        assert kernel_eval(POLY, A, B, view=2) == pytest.approx(expected_poly, rel=1e-12)
        pre = kernel_eval(RBF, log_map(A), log_map(B), view=2, pre_mapped=True)
        assert pre == pytest.approx(expected_rbf, rel=1e-12)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidArgumentError):
            kernel_eval(RBF, np.array([np.nan]), np.array([0.0]), view=0)
        with pytest.raises(InvalidArgumentError):
            kernel_eval(RBF, np.zeros(2), np.zeros(2), view=3)
        with pytest.raises(DimensionMismatchError):
            kernel_eval(RBF, np.zeros(2), np.zeros(3), view=1)


class TestKernelCombination:
    def test_modes(self):
        combo = KernelCombination.from_mode("mode6")
        assert [spec.kind for spec in combo.image] == [KernelKind.RBF, KernelKind.POLYNOMIAL, KernelKind.POLYNOMIAL]
        assert combo.image == combo.text

    def test_mode_parameter_overrides(self):
        combo = KernelCombination.model_validate({"mode": "mode2", "polynomial": {"a": 0.5, "s": 2}})
        assert all(spec.a == 0.5 and spec.s == 2 for spec in combo.text)

    def test_default_is_all_rbf(self):
        assert all(spec.kind is KernelKind.RBF and spec.sigma == 1.0 for spec in KernelCombination().image)

    def test_shared_rule(self):
        with pytest.raises(ValidationError):
            KernelCombination(image=(RBF, RBF, RBF), text=(POLY, RBF, RBF))
        loose = KernelCombination(image=(RBF, RBF, RBF), text=(POLY, RBF, RBF), shared=False)
        assert loose.for_modality(Modality.TEXT)[0] == POLY

    def test_unknown_mode_and_bad_parameters(self):
        with pytest.raises(ValidationError):
            KernelCombination.from_mode("mode9")
        with pytest.raises(ValidationError):
            KernelFunctionSpec(sigma=0.0)
        with pytest.raises(ValidationError):
            KernelFunctionSpec(kind=KernelKind.POLYNOMIAL, s=0)


class TestSelectAnchors:
    def test_all_samples_when_sizes_equal_n(self, multiviews):
        samples = multiviews(n=9)
        anchors = select_anchors(samples, (9, 9, 9), seed=4)
        assert anchors.sizes == (9, 9, 9)
        assert sorted(map(tuple, anchors.mean)) == sorted(tuple(s.mean) for s in samples)

    def test_same_seed_same_anchors(self, multiviews):
        samples = multiviews(n=10)
        first = select_anchors(samples, (4, 3, 2), seed=8)
        second = select_anchors(samples, (4, 3, 2), seed=8)
        for view in VIEW_ORDER:
            assert np.array_equal(first.view(view), second.view(view))

    def test_single_anchor_is_a_member(self, multiviews):
        samples = multiviews(n=6)
        anchors = select_anchors(samples, (1, 1, 1), seed=2)
        assert any(np.array_equal(anchors.histogram[0], s.histogram) for s in samples)
        assert any(np.allclose(anchors.covariance_log[0], log_map(s.covariance)) for s in samples)

    def test_too_many_anchors(self, multiviews):
        with pytest.raises(InvalidArgumentError):
            select_anchors(multiviews(n=3), (4, 1, 1), seed=0)

    def test_disabled_view(self, multiviews):
        samples = multiviews(n=6)
        sizes = AnchorConfig(per_view=(3, 3, 3)).resolve(len(samples), (View.HISTOGRAM, View.COVARIANCE))
        assert sizes == (3, 0, 3)
        anchors = select_anchors(samples, sizes, seed=0)
        assert anchors.sizes == (3, 0, 3)
        assert build_kernel_matrix(samples, anchors, KernelCombination()).shape == (6, 6)

    def test_default_sizes_cap_at_five_hundred(self):
        assert AnchorConfig().resolve(40, VIEW_ORDER) == (40, 40, 40)
        assert AnchorConfig().resolve(900, VIEW_ORDER) == (500, 500, 500)

    def test_kmeans_strategy(self, multiviews):
        samples = multiviews(n=12)
        anchors = select_anchors(samples, (3, 4, 2), seed=1, strategy="kmeans")
        assert anchors.sizes == (3, 4, 2)
        assert np.allclose(anchors.covariance_log, np.swapaxes(anchors.covariance_log, 1, 2))

    def test_no_views_rejected(self):
        with pytest.raises(ValidationError):
            KernelSettings(views=())


class TestKernelize:
    def test_sample_that_is_an_anchor(self, multiviews):
        samples = multiviews(n=5)
        anchors = anchors_from(samples)
        feature = kernelize(samples[2], anchors, KernelCombination())
        for block in feature.blocks:
            assert block[2] == pytest.approx(1.0, abs=1e-12)

    def test_rbf_range(self, multiviews):
        samples = multiviews(n=8)
        feature = kernelize(samples[0], select_anchors(samples, (5, 5, 5), seed=3), KernelCombination())
        assert feature.sizes == (5, 5, 5)
        assert np.all((feature.stacked > 0) & (feature.stacked <= 1.0))

    def test_two_anchors_by_hand(self):
        from app.models.descriptor import MultiViewDescriptor

        def sample(h, m, c):
            return MultiViewDescriptor(np.array(h), np.array(m), np.diag(c))

        first = sample([1.0, 0.0], [0.0, 0.0], [1.0, 1.0])
        second = sample([0.0, 1.0], [1.0, 1.0], [np.e, 1.0])
        query = sample([0.5, 0.5], [1.0, 0.0], [1.0, np.e])
        feature = kernelize(query, anchors_from([first, second]), KernelCombination())
        np.testing.assert_allclose(feature.blocks[0], [np.exp(-0.25), np.exp(-0.25)], atol=1e-12)
        np.testing.assert_allclose(feature.blocks[1], [np.exp(-0.5), np.exp(-0.5)], atol=1e-12)
        np.testing.assert_allclose(feature.blocks[2], [np.exp(-0.5), np.exp(-1.0)], atol=1e-12)

    def test_dimension_mismatch(self, multiviews):
        anchors = anchors_from(multiviews(n=3, dim=3))
        with pytest.raises(DimensionMismatchError):
            kernelize(multiviews(n=1, dim=2)[0], anchors, KernelCombination())


class TestBuildKernelMatrix:
    def test_gram_blocks(self, multiviews):
        samples = multiviews(n=20)
        K = build_kernel_matrix(samples, anchors_from(samples), KernelCombination())
        for r in range(3):
            block = K[20 * r:20 * (r + 1)]
            np.testing.assert_allclose(np.diag(block), 1.0, atol=1e-12)
            np.testing.assert_allclose(block, block.T, atol=1e-12)

    def test_rbf_gram_is_psd(self, multiviews, rng):
        for _ in range(5):
            n = int(rng.integers(5, 31))
            samples = multiviews(n=n)
            K = build_kernel_matrix(samples, anchors_from(samples), KernelCombination())
            for r in range(3):
                block = K[n * r:n * (r + 1)]
                assert np.linalg.eigvalsh((block + block.T) / 2).min() >= -1e-8

    def test_single_column(self, multiviews):
        samples = multiviews(n=6)
        anchors = select_anchors(samples, (3, 2, 4), seed=0)
        K = build_kernel_matrix(samples[:1], anchors, KernelCombination())
        np.testing.assert_array_equal(K[:, 0], kernelize(samples[0], anchors, KernelCombination()).stacked)

    @pytest.mark.parametrize("mode", ["mode1", "mode2", "mode5", "mode8"])
    def test_matches_scalar_oracle(self, multiviews, mode):
        samples = multiviews(n=7)
        anchor_samples = samples[:4]
        anchors = anchors_from(anchor_samples)
        combo = KernelCombination.from_mode(mode)
        weights = (0.5, 2.0, 1.5)
        K = build_kernel_matrix(samples, anchors, combo, Modality.IMAGE, weights)
        for i, sample in enumerate(samples):
            for r in range(3):
                for j, anchor in enumerate(anchor_samples):
                    expected = weights[r] * kernel_eval(combo.image[r], view_value(anchor, r), view_value(sample, r), r)
                    assert K[4 * r + j, i] == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_view_weights_scale_blocks(self, multiviews):
        samples = multiviews(n=5)
        anchors = anchors_from(samples)
        plain = build_kernel_matrix(samples, anchors, KernelCombination())
        weights = ViewWeights(text=(2.0, 1.0, 0.0))
        scaled = build_kernel_matrix(samples, anchors, KernelCombination(), Modality.TEXT, weights.text)
        np.testing.assert_allclose(scaled[:5], 2.0 * plain[:5])
        np.testing.assert_allclose(scaled[5:10], plain[5:10])
        assert np.all(scaled[10:] == 0.0)
