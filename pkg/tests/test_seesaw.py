import numpy as np
import pytest

from upbforge.seesaw import THRESHOLD, complement_projector, seesaw
from upbforge.states import UpbCandidate, ket, product
from upbforge.verifier import EXTENDIBLE, verify_exact


def test_projector_is_idempotent(tiles):
    Q = complement_projector(tiles)
    assert np.allclose(Q @ Q, Q)
    assert np.isclose(np.trace(Q).real, 4)


def test_tiles_stays_below_threshold(tiles):
    r = seesaw(tiles, seed=1, restarts=20)
    assert not r.extendible
    # frozen: best overlap for seed 1
    assert r.value == pytest.approx(0.97158, abs=1e-4)


def test_subset_reaches_one(tiles):
    u = UpbCandidate(tiles.dims, tiles.states[:4])
    r = seesaw(u, seed=1, restarts=10)
    assert r.extendible and r.value >= THRESHOLD
    assert r.residual < 1e-6
    assert verify_exact(u).verdict == EXTENDIBLE


def test_product_pair_is_extendible():
    u = UpbCandidate((2, 2), [product(ket(2, "0"), ket(2, "0")), product(ket(2, "1"), ket(2, "1"))])
    r = seesaw(u, seed=3, restarts=5)
    assert r.extendible
    doc = r.to_json()
    assert len(doc["witness"]) == 2


def test_deterministic_per_seed(tiles):
    a = seesaw(tiles, seed=7, restarts=5)
    b = seesaw(tiles, seed=7, restarts=5)
    assert a.value == b.value


def test_workers_do_not_change_result(tiles):
    a = seesaw(tiles, seed=2, restarts=4)
    b = seesaw(tiles, seed=2, restarts=4, workers=2)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_restarts_must_be_positive(tiles):
    with pytest.raises(ValueError):
        seesaw(tiles, restarts=0)
