"""Bound entangled states from UPB complements.

For a UPB ``S`` of ``k`` states in dimension ``D`` the normalised projector
``rho = (I - P_S) / (D - k)`` is PPT, and its range contains no product state,
so it is entangled. Eigenvalues come from a cyclic complex Jacobi solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .seesaw import normalized_states
from .states import UpbCandidate, UpbError, missing_number
from .verifier import UPB, VerificationCertificate, verify_exact

__all__ = [
    "DensityOperator",
    "PptReport",
    "jacobi_eigvalsh",
    "upb_state",
    "partial_transpose",
    "bipartitions",
    "check_ppt",
    "rank_of",
    "support_residual",
    "report",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PPT_FLOOR = -1e-9
RANK_TOL = 1e-9
JACOBI_TOL = 1e-11


def jacobi_eigvalsh(H: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of ``a_pq`` with a diagonal unitary,
    then applies the real symmetric Jacobi rotation. Sweeps stop once the
    off-diagonal Frobenius norm drops below ``tol``. Returns ascending values.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    A = (A + A.conj().T) / 2
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                # column q times conj(phase), row q times phase: a_pq becomes real
                A[:, q] *= phase.conjugate()
                A[q, :] *= phase
                app, aqq = A[p, p].real, A[q, q].real
                tau = (aqq - app) / (2 * mag)
                if abs(tau) > 1e150:
                    t = 1 / (2 * tau)
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0
    return np.sort(np.diag(A).real)


@dataclass
class DensityOperator:
    dims: tuple
    matrix: np.ndarray
    source: str = ""
    k: int = 0
    verified: bool = False
    waived: bool = False

    def __post_init__(self):
        M = self.matrix
        if np.max(np.abs(M - M.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(M).real - 1) > TRACE_TOL:
            raise ValueError("density operator trace differs from 1")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def upb_state(
    u: UpbCandidate,
    certificate: Optional[VerificationCertificate] = None,
    waive: bool = False,
) -> DensityOperator:
    """Normalised projector onto the complement of ``u``.

    ``u`` must be a verified UPB: pass its certificate, let this function run
    :func:`verify_exact`, or set ``waive`` to skip the check (recorded).
    """
    if certificate is None and not waive:
        certificate = verify_exact(u)
    verified = certificate is not None and certificate.verdict == UPB
    if certificate is not None and not verified and not waive:
        raise UpbError("not_upb", f"{u.label or 'input'} is not a verified UPB")
    D = u.dims.total
    k = missing_number(u)
    psi = normalized_states(u)
    P = psi.T @ psi.conj()
    rho = (np.eye(D) - P) / k
    rho = (rho + rho.conj().T) / 2
    return DensityOperator(
        dims=u.dims.dims, matrix=rho, source=u.label, k=len(u.states),
        verified=verified, waived=waive and not verified,
    )


def partial_transpose(rho, parties: Sequence[int], dims: Optional[Sequence[int]] = None) -> np.ndarray:
    """Transpose the indices of ``parties``; ``rho`` may be a DensityOperator."""
    if isinstance(rho, DensityOperator):
        dims = rho.dims if dims is None else dims
        rho = rho.matrix
    dims = list(dims)
    N = len(dims)
    parties = sorted(set(parties))
    if not parties or len(parties) >= N + 1 or any(not 0 <= p < N for p in parties):
        raise UpbError("bad_subset", f"bad party subset {parties} for {N} parties")
    if len(parties) == N:
        raise UpbError("bad_subset", "partial transpose over every party is a full transpose")
    T = np.asarray(rho).reshape(dims + dims)
    axes = list(range(2 * N))
    for p in parties:
        axes[p], axes[N + p] = axes[N + p], axes[p]
    D = int(np.prod(dims))
    return T.transpose(axes).reshape(D, D)


def bipartitions(n_parties: int) -> list[tuple]:
    """One side of every cut; the side never contains the last party."""
    out = []
    for r in range(1, n_parties):
        for combo in itertools.combinations(range(n_parties - 1), r):
            out.append(combo)
    return out


@dataclass
class PptReport:
    cuts: list = field(default_factory=list)  # (parties, min eigenvalue)

    @property
    def ppt(self) -> bool:
        return all(e >= PPT_FLOOR for _, e in self.cuts)

    @property
    def min_eig(self) -> float:
        return min(e for _, e in self.cuts)

    def to_json(self) -> list:
        return [{"parties": list(p), "minEig": e} for p, e in self.cuts]


def check_ppt(rho: DensityOperator) -> PptReport:
    rep = PptReport()
    for cut in bipartitions(len(rho.dims)):
        ev = jacobi_eigvalsh(partial_transpose(rho, cut))
        rep.cuts.append((cut, float(ev[0])))
    return rep


def rank_of(rho, tol: float = RANK_TOL) -> int:
    M = rho.matrix if isinstance(rho, DensityOperator) else rho
    return int(np.sum(jacobi_eigvalsh(M) > tol))


def support_residual(u: UpbCandidate, rho: DensityOperator) -> float:
    """Largest ``<psi_i|rho|psi_i>`` over the normalised UPB states."""
    psi = normalized_states(u)
    vals = np.einsum("ia,ab,ib->i", psi.conj(), rho.matrix, psi).real
    return float(np.max(np.abs(vals)))


def report(u: UpbCandidate, rho: DensityOperator) -> dict:
    ppt = check_ppt(rho)
    out = {
        "schema": "upb/1",
        "dims": list(rho.dims),
        "label": rho.source,
        "k": rho.k,
        "missing": rho.dim - rho.k,
        "rank": rank_of(rho),
        "ppt": ppt.to_json(),
        "isPPT": ppt.ppt,
        "supportResidual": support_residual(u, rho),
        "verified": rho.verified,
    }
    if rho.verified:
        out["entanglement"] = (
            "range is the complement of a verified UPB and holds no product state"
        )
    if rho.waived:
        out["waived"] = True
    return out
