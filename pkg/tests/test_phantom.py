import numpy as np
import pytest

from topoforge import phantom as PH
from topoforge import topology as T
from topoforge.errors import GeometryError, InputError

SIZES = {
    PH.PhantomKind.BOX: [(20, 20, 20), (32, 32, 32), (48, 48, 48)],
    PH.PhantomKind.TUBE: [(20, 20, 20), (32, 32, 32), (48, 48, 48)],
    PH.PhantomKind.RING: [(20, 20, 20), (32, 32, 32), (48, 48, 48)],
    PH.PhantomKind.SHELL: [(20, 20, 20), (32, 32, 32), (48, 48, 48)],
    PH.PhantomKind.Y_JUNCTION: [(20, 20, 20), (32, 32, 32), (48, 48, 48)],
    PH.PhantomKind.LOOP_GRID: [(40, 40, 40), (48, 48, 48), (64, 64, 64)],
}


@pytest.mark.parametrize("kind", list(PH.PhantomKind), ids=lambda k: k.value)
def test_betti_matches_declaration_at_three_sizes(kind):
    for dims in SIZES[kind]:
        vol, declared = PH.generate(PH.PhantomSpec(kind, dims))
        assert vol.dtype == np.uint8
        assert vol.shape == dims[::-1]
        assert T.betti(vol).as_tuple() == declared.as_tuple(), (kind, dims)


@pytest.mark.parametrize("kind", list(PH.PhantomKind), ids=lambda k: k.value)
def test_jittered_variants_keep_topology(kind):
    for seed in range(8):
        vol, declared = PH.generate(PH.PhantomSpec(kind, (48, 48, 48), seed=seed))
        assert T.betti(vol).as_tuple() == declared.as_tuple(), (kind, seed)


def test_jitter_is_deterministic_and_varies():
    spec = PH.PhantomSpec(PH.PhantomKind.RING, (32, 32, 32), seed=5)
    a, _ = PH.generate(spec)
    b, _ = PH.generate(spec)
    np.testing.assert_array_equal(a, b)
    c, _ = PH.generate(PH.PhantomSpec(PH.PhantomKind.RING, (32, 32, 32), seed=6))
    assert not np.array_equal(a, c)


def test_loop_grid_counts():
    for loops in (1, 2, 4, 6):
        dims = (24 + 10 * loops,) * 3
        vol, declared = PH.generate(PH.PhantomSpec(PH.PhantomKind.LOOP_GRID, dims, loops=loops))
        assert declared.as_tuple() == (1, loops, 0)
        assert T.betti(vol).as_tuple() == (1, loops, 0)


class TestCatalog:
    def test_six_entries(self):
        infos = PH.list_phantoms()
        assert len(infos) == 6
        assert {info.kind for info in infos} == set(PH.PhantomKind)

    def test_entries_name_their_params(self):
        for info in PH.list_phantoms():
            assert "dims" in info.params
            assert info.params  # non-empty schema

    def test_defaults_round_trip(self):
        for info in PH.list_phantoms():
            spec = PH.PhantomSpec(info.kind, **dict(info.defaults))
            vol, declared = PH.generate(spec)
            assert T.betti(vol).as_tuple() == declared.as_tuple(), info.kind


class TestGeometryValidation:
    def test_oversized_ring(self):
        with pytest.raises(GeometryError):
            PH.generate(PH.PhantomSpec(PH.PhantomKind.RING, (32, 32, 32), radius=20.0))

    def test_shell_cavity_must_exist(self):
        with pytest.raises(GeometryError):
            PH.generate(PH.PhantomSpec(PH.PhantomKind.SHELL, (32, 32, 32), radius=3.0))

    def test_thin_ring_rejected(self):
        with pytest.raises(GeometryError):
            PH.generate(PH.PhantomSpec(PH.PhantomKind.RING, (32, 32, 32), thickness=1.0))

    def test_too_many_loops(self):
        with pytest.raises(GeometryError):
            PH.generate(PH.PhantomSpec(PH.PhantomKind.LOOP_GRID, (32, 32, 32), loops=10))

    def test_bad_dims(self):
        with pytest.raises(InputError):
            PH.PhantomSpec(PH.PhantomKind.BOX, (32, 32))

    def test_round_trip_dict(self):
        spec = PH.PhantomSpec(PH.PhantomKind.SHELL, (40, 40, 40), radius=9.0, seed=3)
        assert PH.PhantomSpec.from_dict(spec.to_dict()) == spec
