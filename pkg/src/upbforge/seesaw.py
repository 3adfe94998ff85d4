"""Numerical search for a product state in the complement of a state set.

Maximises ``<phi|Q|phi>`` over product vectors, ``Q = I - sum_i |psi_i><psi_i|``
with normalised inputs. With all parties but one fixed, the best remaining
factor is the top eigenvector of ``Q`` contracted against the fixed factors.
A value of 1 means ``phi`` lies in the complement.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .states import UpbCandidate

__all__ = ["SeesawResult", "seesaw", "complement_projector", "THRESHOLD"]

THRESHOLD = 1 - 1e-7
MAX_SWEEPS = 500
TOL = 1e-12


@dataclass
class SeesawResult:
    value: float
    factors: list
    seed: int
    restarts: int
    residual: float

    @property
    def extendible(self) -> bool:
        return self.value >= THRESHOLD

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "threshold": THRESHOLD,
            "seed": self.seed,
            "restarts": self.restarts,
            "extendible": self.extendible,
            "residual": self.residual,
        }
        if self.extendible:
            out["witness"] = [
                [[float(z.real), float(z.imag)] for z in f] for f in self.factors
            ]
        return out


def normalized_states(u: UpbCandidate) -> np.ndarray:
    rows = []
    for s in u.states:
        v = np.array([1.0 + 0j])
        for f in s.factors:
            v = np.kron(v, np.array(f.to_complex()))
        rows.append(v / np.linalg.norm(v))
    return np.array(rows)


def complement_projector(u: UpbCandidate) -> np.ndarray:
    psi = normalized_states(u)
    D = u.dims.total
    return np.eye(D) - psi.T @ psi.conj()


def _contract(Qt: np.ndarray, factors: list, p: int) -> np.ndarray:
    """``<phi_rest| Q |phi_rest>`` as a ``d_p x d_p`` matrix."""
    N = len(factors)
    out_idx = [chr(ord("a") + k) for k in range(N)]
    in_idx = [chr(ord("n") + k) for k in range(N)]
    terms = ["".join(out_idx + in_idx)]
    operands = [Qt]
    for k in range(N):
        if k == p:
            continue
        terms += [out_idx[k], in_idx[k]]
        operands += [factors[k].conj(), factors[k]]
    spec = ",".join(terms) + "->" + out_idx[p] + in_idx[p]
    return np.einsum(spec, *operands)


def _one_restart(args):
    Qt, dims, rng_seed = args
    rng = np.random.default_rng(rng_seed)
    factors = []
    for d in dims:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        factors.append(v / np.linalg.norm(v))
    value = -np.inf
    for _ in range(MAX_SWEEPS):
        for p in range(len(dims)):
            M = _contract(Qt, factors, p)
            M = (M + M.conj().T) / 2
            w, V = np.linalg.eigh(M)
            factors[p] = V[:, -1]
            new = float(w[-1])
        if abs(new - value) < TOL:
            value = new
            break
        value = new
    return value, factors


def seesaw(u: UpbCandidate, seed: int = 1, restarts: int = 50, workers: int = 1) -> SeesawResult:
    """Best product-state overlap with the complement of ``u``.

    Restart ``r`` draws its start from ``SeedSequence(seed).spawn(restarts)[r]``,
    so the result depends only on ``(seed, restarts)``, not on ``workers``.
    Values at or above :data:`THRESHOLD` are evidence of extendibility; lower
    values are inconclusive.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    dims = list(u.dims.dims)
    Q = complement_projector(u)
    Qt = Q.reshape(dims + dims)
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(Qt, dims, s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_restart, jobs))
    else:
        results = [_one_restart(j) for j in jobs]
    best = max(range(restarts), key=lambda r: results[r][0])
    value, factors = results[best]
    phi = np.array([1.0 + 0j])
    for f in factors:
        phi = np.kron(phi, f)
    psi = normalized_states(u)
    residual = float(np.max(np.abs(psi.conj() @ phi) ** 2))
    return SeesawResult(
        value=min(value, 1.0), factors=factors, seed=seed, restarts=restarts, residual=residual
    )
