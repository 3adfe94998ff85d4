import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upbforge.bes import (
    DensityOperator,
    bipartitions,
    check_ppt,
    jacobi_eigvalsh,
    partial_transpose,
    rank_of,
    report,
    support_residual,
    upb_state,
)
from upbforge.catalog import CompleteBasis
from upbforge.combinators import direct_sum_b, four_square, lift
from upbforge.states import UpbCandidate, UpbError


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A + A.conj().T


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=10**6))
def test_jacobi_matches_numpy(n, seed):
    H = random_hermitian(n, seed)
    assert np.allclose(jacobi_eigvalsh(H), np.linalg.eigvalsh(H), atol=1e-9)


def test_jacobi_real_symmetric():
    H = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(jacobi_eigvalsh(H), [1.0, 3.0])


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2, 2)])
def test_partial_transpose_involution(dims):
    D = int(np.prod(dims))
    H = random_hermitian(D, 11)
    for cut in bipartitions(len(dims)):
        once = partial_transpose(H, cut, dims)
        assert np.allclose(partial_transpose(once, cut, dims), H)
        assert np.isclose(np.trace(once), np.trace(H))


def test_partial_transpose_of_identity():
    I = np.eye(6) / 6
    assert np.allclose(partial_transpose(I, [0], (2, 3)), I)


def test_bell_projector_has_negative_half():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = DensityOperator((2, 2), np.outer(psi, psi.conj()))
    ev = jacobi_eigvalsh(partial_transpose(rho, [0]))
    assert ev[0] == pytest.approx(-0.5, abs=1e-12)
    assert not check_ppt(rho).ppt


@pytest.mark.parametrize("parties", [[], [0, 1], [2]])
def test_bad_subset(parties):
    with pytest.raises(UpbError) as exc:
        partial_transpose(np.eye(4), parties, (2, 2))
    assert exc.value.code == "bad_subset"


def test_bipartitions_exclude_last_party():
    assert bipartitions(2) == [(0,)]
    assert bipartitions(3) == [(0,), (1,), (0, 1)]


def test_density_operator_validation():
    with pytest.raises(ValueError):
        DensityOperator((2, 2), np.eye(4))
    with pytest.raises(ValueError):
        DensityOperator((2, 2), np.array([[0.5, 1j, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))


def _cases(t):
    return [
        (t, 4),
        (direct_sum_b(t, t), 8),
        (lift([t, t]), 8),
        (four_square(t, t, t, t), 16),
        (lift([t, CompleteBasis((3, 3))]), 4),
    ]


def test_upb_states_are_ppt_with_expected_rank(tiles):
    for u, r in _cases(tiles):
        rho = upb_state(u)
        assert rho.verified
        assert rank_of(rho) == r
        assert support_residual(u, rho) <= 1e-10
        rep = check_ppt(rho)
        assert rep.ppt and rep.min_eig >= -1e-9
        assert len(rep.cuts) == 2 ** (len(u.dims) - 1) - 1


def test_upb_state_refuses_extendible_sets(tiles):
    u = UpbCandidate(tiles.dims, tiles.states[:4])
    with pytest.raises(UpbError) as exc:
        upb_state(u)
    assert exc.value.code == "not_upb"
    rho = upb_state(u, waive=True)
    assert rho.waived and not rho.verified
    assert report(u, rho)["waived"] is True


def test_report_keys(tiles):
    doc = report(tiles, upb_state(tiles))
    assert doc["rank"] == 4 and doc["k"] == 5 and doc["isPPT"]
    assert {"dims", "k", "rank", "ppt", "supportResidual"} <= doc.keys()
    assert doc["ppt"][0]["parties"] == [0]
