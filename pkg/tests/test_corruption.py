import numpy as np
import pytest

from topoforge import corruption as C
from topoforge import phantom as PH
from topoforge import topology as T
from topoforge.errors import InputError


def ring_gt(dims=(32, 32, 32)):
    vol, _ = PH.generate(PH.PhantomSpec(PH.PhantomKind.RING, dims))
    return vol


def tube_gt():
    vol, _ = PH.generate(PH.PhantomSpec(PH.PhantomKind.TUBE, (32, 32, 32)))
    return vol


class TestCorrupt:
    def test_all_ones_gt_returns_mask(self):
        gt = np.ones((6, 6, 6), np.uint8)
        mask = np.random.default_rng(0).random((6, 6, 6))
        np.testing.assert_array_equal(C.corrupt(gt, mask), mask)

    def test_all_zeros_gt(self):
        gt = np.zeros((6, 6, 6), np.uint8)
        assert not C.corrupt(gt, np.full((6, 6, 6), 0.9)).any()

    def test_support_containment(self):
        gt = ring_gt()
        corrupted = C.corrupt(gt, np.random.default_rng(1).random(gt.shape))
        assert np.all(corrupted[gt == 0] == 0.0)
        assert corrupted.min() >= 0.0 and corrupted.max() <= 1.0

    def test_valley_splits_tube(self):
        # mask = 1 - gaussian bump centered on the tube midpoint: the low
        # valley crosses the tube cross-section and severs it
        gt = tube_gt()
        assert T.betti(gt).as_tuple() == (1, 0, 0)
        nz, ny, nx = gt.shape
        z, y, x = np.ogrid[0:nz, 0:ny, 0:nx]
        bump = np.exp(
            -(((x - nx / 2) ** 2) / 8.0 + ((y - ny / 2) ** 2) / 200.0 + ((z - nz / 2) ** 2) / 200.0)
        )
        mask = 1.0 - bump
        pred = C.binarize(C.corrupt(gt, mask), 0.5)
        assert T.betti(pred).as_tuple() == (2, 0, 0)

    def test_high_mask_preserves_topology(self):
        gt = ring_gt()
        mask = np.full(gt.shape, 0.93)
        pred = C.binarize(C.corrupt(gt, mask), 0.5)
        np.testing.assert_array_equal(pred, gt)

    def test_validation(self):
        with pytest.raises(InputError):
            C.corrupt(np.ones((4, 4, 4), np.uint8), np.zeros((5, 5, 5)))
        with pytest.raises(InputError):
            C.corrupt(np.full((4, 4, 4), 2, np.uint8), np.zeros((4, 4, 4)))
        with pytest.raises(InputError):
            C.corrupt(np.ones((4, 4, 4), np.uint8), np.full((4, 4, 4), 1.5))


class TestBinarize:
    def test_tie_is_foreground(self):
        assert C.binarize(np.full((3, 3), 0.5), 0.5).all()

    def test_just_above_threshold_is_background(self):
        assert not C.binarize(np.full((3, 3), 0.5), 0.50001).any()

    def test_threshold_domain(self):
        with pytest.raises(InputError):
            C.binarize(np.zeros((2, 2)), 1.0)


class TestOversegNoise:
    def test_noiseless_is_bitwise_identity(self):
        m = np.random.default_rng(3).random((8, 8, 8))
        spec = C.CorruptionSpec(overseg_noise_std=0.0, overseg_blob_rate=0.0, seed=5)
        assert np.array_equal(C.apply_overseg_noise(m, spec), m)

    def test_multiplicative_noise_statistics(self):
        box = np.zeros((24, 24, 24), np.uint8)
        box[4:20, 4:20, 4:20] = 1
        m = 0.8 * box.astype(np.float64)
        spec = C.CorruptionSpec(overseg_noise_std=0.1, seed=7)
        noisy = C.apply_overseg_noise(m, spec)
        assert noisy.min() >= 0.0 and noisy.max() <= 1.0
        ratio_std = float((noisy[box == 1] / 0.8 - 1.0).std())
        assert abs(ratio_std - 0.1) < 0.01

    def test_multiplicative_noise_preserves_support(self):
        gt = ring_gt()
        m = C.corrupt(gt, np.random.default_rng(11).random(gt.shape))
        spec = C.CorruptionSpec(overseg_noise_std=0.2, seed=13)
        noisy = C.apply_overseg_noise(m, spec, gt=gt)
        assert np.all(noisy[gt == 0] == 0.0)

    def test_blob_injection_rate(self):
        # P(K >= 1) = 1 - exp(-3) ~ 0.95; spurious components land on
        # empty ground truth with certainty once a blob exists
        gt = np.zeros((24, 24, 24), np.uint8)
        hits = 0
        for seed in range(200):
            spec = C.CorruptionSpec(
                overseg_noise_std=0.0, overseg_blob_rate=3.0, seed=seed
            )
            noisy = C.apply_overseg_noise(np.zeros(gt.shape), spec, gt=gt)
            count, _ = T.connected_components(C.binarize(noisy, 0.5), 26)
            hits += count >= 1
        assert 0.90 <= hits / 200 <= 1.0

    def test_blobs_only_in_background(self):
        gt = ring_gt()
        m = C.corrupt(gt, np.full(gt.shape, 0.9))
        spec = C.CorruptionSpec(overseg_noise_std=0.0, overseg_blob_rate=5.0, seed=3)
        noisy = C.apply_overseg_noise(m, spec, gt=gt)
        grown = (noisy > 0) & (m == 0)
        assert grown.any()  # blobs did appear
        assert np.all(gt[grown] == 0)

    def test_determinism(self):
        m = np.random.default_rng(1).random((16, 16, 16)) * 0.5
        spec = C.CorruptionSpec(overseg_noise_std=0.1, overseg_blob_rate=2.0, seed=21)
        gt = np.zeros(m.shape, np.uint8)
        a = C.apply_overseg_noise(m, spec, gt=gt)
        b = C.apply_overseg_noise(m, spec, gt=gt)
        assert np.array_equal(a, b)

    def test_clamped_to_unit_interval(self):
        m = np.full((10, 10, 10), 0.95)
        spec = C.CorruptionSpec(overseg_noise_std=0.5, seed=2)
        noisy = C.apply_overseg_noise(m, spec)
        assert noisy.min() >= 0.0 and noisy.max() <= 1.0


class TestCorruptionSpecValidation:
    def test_threshold(self):
        with pytest.raises(InputError):
            C.CorruptionSpec(binarize_threshold=0.0)

    def test_sigma(self):
        with pytest.raises(InputError):
            C.CorruptionSpec(overseg_noise_std=-0.1)

    def test_radius_range(self):
        with pytest.raises(InputError):
            C.CorruptionSpec(blob_radius_range=(5.0, 2.0))

    def test_round_trip_dict(self):
        from topoforge import basis as B
        from topoforge import perturbation as PB
        from topoforge import polynomial as P

        spec = C.CorruptionSpec(
            mask_spec=PB.MaskSpec(B.BasisSpec(P.chebyshev(), 4, 3), (8, 8, 8), seed=2),
            overseg_noise_std=0.07,
            overseg_blob_rate=1.5,
            blob_radius_range=(2.0, 4.0),
            binarize_threshold=0.4,
            seed=9,
        )
        assert C.CorruptionSpec.from_dict(spec.to_dict()) == spec
