import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topoforge import topology as T
from topoforge.errors import InputError

from oracles import bfs_components, cell_sets


def solid(shape):
    return np.ones(shape, dtype=np.uint8)


def hollow_shell():
    vol = solid((3, 3, 3))
    vol[1, 1, 1] = 0
    return vol


def flat_ring():
    # 3x3x1 ring of 8 voxels embedded in 8^3
    vol = np.zeros((8, 8, 8), np.uint8)
    vol[3, 2:5, 2:5] = 1
    vol[3, 3, 3] = 0
    return vol


def tube():
    vol = np.zeros((8, 8, 12), np.uint8)
    vol[3:5, 3:5, 1:11] = 1
    return vol


class TestConnectedComponents:
    def test_empty(self):
        assert T.connected_components(np.zeros((4, 4, 4), np.uint8))[0] == 0

    def test_diagonal_convention(self):
        vol = np.zeros((4, 4, 4), np.uint8)
        vol[0, 0, 0] = vol[1, 1, 1] = 1
        assert T.connected_components(vol, 26)[0] == 1
        assert T.connected_components(vol, 6)[0] == 2

    def test_2d_conventions(self):
        img = np.zeros((3, 3), np.uint8)
        img[0, 0] = img[1, 1] = 1
        assert T.connected_components(img, 8)[0] == 1
        assert T.connected_components(img, 4)[0] == 2

    def test_labels_match_bfs_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            vol = (rng.random((5, 5, 5)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
            for conn in (26, 6):
                count, labels = T.connected_components(vol, conn)
                oracle_count, oracle_labels = bfs_components(vol, conn)
                assert count == oracle_count
                np.testing.assert_array_equal(labels, oracle_labels)

    def test_rejects_bad_connectivity(self):
        with pytest.raises(InputError):
            T.connected_components(np.zeros((3, 3, 3), np.uint8), 8)
        with pytest.raises(InputError):
            T.connected_components(np.zeros((3, 3), np.uint8), 26)

    def test_rejects_non_binary(self):
        with pytest.raises(InputError):
            T.connected_components(np.full((2, 2, 2), 3, np.uint8))
        with pytest.raises(InputError):
            T.connected_components(np.full((2, 2, 2), 0.5))


class TestEulerCharacteristic:
    def test_single_voxel_cells(self):
        vol = np.zeros((3, 3, 3), np.uint8)
        vol[1, 1, 1] = 1
        assert T.cell_counts(vol) == (8, 12, 6, 1)
        assert T.euler_characteristic(vol) == 1

    def test_solid_block_contractible(self):
        assert T.euler_characteristic(solid((3, 3, 3))) == 1

    def test_hollow_shell_is_spherelike(self):
        vol = hollow_shell()
        assert T.euler_characteristic(vol) == 2
        v, e, f, c = T.cell_counts(vol)
        assert (v, e, f, c) == cell_sets(vol)

    def test_2d_values(self):
        assert T.euler_characteristic(np.ones((1, 1), np.uint8)) == 1
        annulus = np.ones((3, 3), np.uint8)
        annulus[1, 1] = 0
        assert T.euler_characteristic(annulus) == 0


class TestBetti:
    def test_solid_box(self):
        assert T.betti(solid((4, 4, 4))).as_tuple() == (1, 0, 0)

    def test_flat_ring(self):
        numbers = T.betti(flat_ring())
        assert numbers.as_tuple() == (1, 1, 0)
        assert T.euler_characteristic(flat_ring()) == 0

    def test_hollow_shell(self):
        numbers = T.betti(hollow_shell())
        assert numbers.as_tuple() == (1, 0, 1)
        assert numbers.b0 + numbers.b2 - T.euler_characteristic(hollow_shell()) == numbers.b1

    def test_2d_annulus(self):
        annulus = np.ones((3, 3), np.uint8)
        annulus[1, 1] = 0
        numbers = T.betti(annulus)
        assert (numbers.b0, numbers.b1) == (1, 1)
        assert numbers.b2 == 0
        assert numbers.fg_connectivity == "C8" and numbers.bg_connectivity == "C4"

    def test_conventions_reported(self):
        numbers = T.betti(solid((2, 2, 2)))
        assert numbers.fg_connectivity == "C26" and numbers.bg_connectivity == "C6"

    def test_euler_betti_identity_random(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            vol = (rng.random((6, 6, 6)) < rng.uniform(0.3, 0.7)).astype(np.uint8)
            numbers = T.betti(vol)
            assert numbers.b1 >= 0
            assert numbers.b0 + numbers.b2 - numbers.b1 == T.euler_characteristic(vol)

    def test_translation_invariance(self):
        vol = flat_ring()
        shifted = np.roll(np.pad(vol, 2), (1, 2, 3), axis=(0, 1, 2))
        assert T.betti(vol) == T.betti(shifted)

    def test_drilling_and_sealing_the_shell(self):
        vol = np.zeros((9, 9, 9), np.uint8)
        vol[1:8, 1:8, 1:8] = 1
        vol[3:6, 3:6, 3:6] = 0  # cavity
        sealed = T.betti(vol)
        assert sealed.as_tuple() == (1, 0, 1)
        drilled = vol.copy()
        drilled[4, 4, 6:9] = 0  # carve a channel from the cavity to the outside
        opened = T.betti(drilled)
        assert opened.b2 == sealed.b2 - 1
        # a punctured shell retracts to a disk: no tunnel is created
        assert opened.as_tuple() == (1, 0, 0)


class TestDice:
    def test_identical(self):
        assert T.dice(solid((3, 3, 3)), solid((3, 3, 3))) == 1.0

    def test_disjoint(self):
        a = np.zeros((4, 4, 4), np.uint8)
        b = np.zeros((4, 4, 4), np.uint8)
        a[0, 0, 0] = 1
        b[3, 3, 3] = 1
        assert T.dice(a, b) == 0.0

    def test_closed_form(self):
        a = np.zeros((10, 10, 10), np.uint8)
        b = np.zeros((10, 10, 10), np.uint8)
        a.ravel()[:100] = 1
        b.ravel()[20:120] = 1  # overlap 80, |P| = |G| = 100
        assert T.dice(a, b) == pytest.approx(0.8, abs=1e-12)

    def test_both_empty(self):
        assert T.dice(np.zeros((2, 2), np.uint8), np.zeros((2, 2), np.uint8)) == 1.0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**30))
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a = (rng.random((4, 4, 4)) < 0.5).astype(np.uint8)
        b = (rng.random((4, 4, 4)) < 0.5).astype(np.uint8)
        assert T.dice(a, b) == T.dice(b, a)

    def test_shape_mismatch(self):
        with pytest.raises(InputError):
            T.dice(np.zeros((2, 2, 2), np.uint8), np.zeros((3, 3, 3), np.uint8))


class TestBettiError:
    def test_identical_prediction(self):
        report = T.betti_error(flat_ring(), flat_ring())
        assert (report.e0, report.e1, report.e2, report.e) == (0, 0, 0, 0)
        assert report.dice == 1.0

    def test_broken_ring(self):
        arc = flat_ring()
        arc[3, 2, 3] = 0  # open the loop
        report = T.betti_error(arc, flat_ring())
        assert T.betti(arc).as_tuple() == (1, 0, 0)
        assert (report.e0, report.e1, report.e) == (0, 1, 1)

    def test_fragmented_tube(self):
        whole = tube()
        fragments = whole.copy()
        fragments[:, :, 5] = 0
        report = T.betti_error(fragments, whole)
        assert T.betti(fragments).as_tuple() == (2, 0, 0)
        assert (report.e0, report.e1, report.e) == (1, 0, 1)

    def test_e2_not_folded_into_e(self):
        report = T.betti_error(hollow_shell(), solid((3, 3, 3)))
        assert report.e2 == 1
        assert report.e == 0
