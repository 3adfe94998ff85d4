"""Exact unextendibility decisions.

A product state ``|phi_1>...|phi_N>`` is orthogonal to every input state iff
each input state ``i`` can be assigned a party ``p`` with
``<psi_i^(p)|phi_p> = 0``. Such ``phi_p`` exists iff the factors assigned to
``p`` span less than ``d_p`` dimensions. :func:`verify_exact` searches the
assignments depth first, keeping one incremental row space per party.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .linalg import ExactMatrix, IncrementalSpan, null_space_basis, rank, to_gaussian_integers
from .states import ProductState, UpbCandidate, global_inner

__all__ = [
    "UPB",
    "EXTENDIBLE",
    "INCONCLUSIVE",
    "VerificationCertificate",
    "check_orthonormality",
    "verify_exact",
    "verify_bruteforce",
    "witness_from_assignment",
]

UPB = "UPB"
EXTENDIBLE = "Extendible"
INCONCLUSIVE = "Inconclusive"


@dataclass
class VerificationCertificate:
    verdict: str
    witness: Optional[ProductState] = None
    assignment: Optional[list] = None
    nodes: int = 0
    millis: float = 0.0
    mode: str = "exact"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == UPB and self.witness is not None:
            raise ValueError("a UPB certificate cannot carry a witness")

    def to_json(self, timing: bool = True) -> dict:
        out = {"schema": "upb/1", "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.assignment is not None:
            out["assignment"] = list(self.assignment)
        out["nodes"] = self.nodes
        if timing:
            out["millis"] = round(self.millis, 3)
        out["mode"] = self.mode
        out.update(self.extra)
        return out


def check_orthonormality(u) -> bool:
    """Exact pairwise orthogonality (states are unnormalised)."""
    states = list(u.states if isinstance(u, UpbCandidate) else u)
    return all(
        not global_inner(states[i], states[j])
        for i in range(len(states))
        for j in range(i + 1, len(states))
    )


def _factor_table(u: UpbCandidate) -> list:
    # factors[i][p] as Gaussian-integer rows
    return [[to_gaussian_integers(f.entries) for f in s.factors] for s in u.states]


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, factors, dims, deadline=None):
        self.factors = factors
        self.dims = dims
        self.deadline = deadline
        self.nodes = 0
        self.spans = [IncrementalSpan(d) for d in dims]
        self.assign: list[int] = []

    def run(self, start: int = 0) -> Optional[list]:
        if self._dfs(start):
            return list(self.assign)
        return None

    def _dfs(self, i: int) -> bool:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                raise _Timeout
        if i == len(self.factors):
            return True
        row = self.factors[i]
        parties = range(len(self.dims))
        # a factor already in some party's span costs nothing there, and any
        # completion through another party also completes through that one
        for p in parties:
            if self.spans[p].contains(row[p]):
                return self._try(i, p)
        for p in parties:
            if self._try(i, p):
                return True
        return False

    def _try(self, i: int, p: int) -> bool:
        span = self.spans[p]
        span.push(self.factors[i][p])
        if span.rank < self.dims[p]:
            self.assign.append(p)
            if self._dfs(i + 1):
                return True
            self.assign.pop()
        span.pop()
        return False


def witness_from_assignment(u: UpbCandidate, assignment) -> Optional[ProductState]:
    """Product state killed by the assignment, or None if some party is full."""
    factors = []
    for p, d in enumerate(u.dims.dims):
        rows = [u.states[i].factors[p] for i, q in enumerate(assignment) if q == p]
        basis = null_space_basis(ExactMatrix.from_rows(rows, cols=d))
        if not basis:
            return None
        factors.append(basis[0])
    return ProductState(factors)


def _subtree(args):
    factors, dims, prefix, deadline = args
    search = _Search(factors, dims, deadline=deadline)
    for i, p in enumerate(prefix):
        search.spans[p].push(factors[i][p])
        search.assign.append(p)
        if search.spans[p].rank >= dims[p]:
            return None, search.nodes, False
    try:
        found = search.run(len(prefix))
    except _Timeout:
        return None, search.nodes, True
    return found, search.nodes, False


def verify_exact(
    u: UpbCandidate,
    prune: bool = True,
    timeout_ms: Optional[float] = None,
    threads: int = 1,
) -> VerificationCertificate:
    """Decide whether a product state is orthogonal to every state of ``u``.

    Parameters
    ----------
    u : UpbCandidate
        Orthogonal product states.
    prune : bool
        Cut branches whose party rank reaches the party dimension, and take
        the forced branch when a factor is already spanned. Disabling it
        explores every assignment and checks ranks only at the leaves.
    timeout_ms : float, optional
        Wall-clock budget; on expiry the verdict is ``Inconclusive``.
    threads : int
        Worker processes for the top-level branches. The verdict does not
        depend on it; the reported witness may.

    Returns
    -------
    VerificationCertificate
        ``UPB`` with no witness, or ``Extendible`` with an exactly
        orthogonal product witness and the assignment that produced it.
    """
    t0 = time.monotonic()
    deadline = None if timeout_ms is None else t0 + timeout_ms / 1000.0
    factors = _factor_table(u)
    dims = list(u.dims.dims)
    if not prune:
        return _unpruned(u, factors, dims, t0, deadline)
    if threads > 1 and len(factors) > 4:
        return _parallel(u, factors, dims, t0, deadline, threads)
    search = _Search(factors, dims, deadline=deadline)
    try:
        found = search.run()
    except _Timeout:
        return VerificationCertificate(
            INCONCLUSIVE, nodes=search.nodes, millis=_ms(t0), mode="exact-timeout"
        )
    return _finish(u, found, search.nodes, t0, "exact")


def _finish(u, found, nodes, t0, mode) -> VerificationCertificate:
    if found is None:
        return VerificationCertificate(UPB, nodes=nodes, millis=_ms(t0), mode=mode)
    witness = witness_from_assignment(u, found)
    return VerificationCertificate(
        EXTENDIBLE, witness=witness, assignment=found, nodes=nodes, millis=_ms(t0), mode=mode
    )


def _unpruned(u, factors, dims, t0, deadline) -> VerificationCertificate:
    nodes = 0
    # every leaf is checked, ranks only at the end
    for assign in itertools.product(range(len(dims)), repeat=len(factors)):
        nodes += 1
        if deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline:
            return VerificationCertificate(INCONCLUSIVE, nodes=nodes, millis=_ms(t0),
                                           mode="exact-unpruned-timeout")
        spans = [IncrementalSpan(d) for d in dims]
        for i, p in enumerate(assign):
            spans[p].push(factors[i][p])
        if all(s.rank < d for s, d in zip(spans, dims)):
            return _finish(u, list(assign), nodes, t0, "exact-unpruned")
    return _finish(u, None, nodes, t0, "exact-unpruned")


def _parallel(u, factors, dims, t0, deadline, threads) -> VerificationCertificate:
    depth = 1
    while len(dims) ** depth < 4 * threads and depth < min(6, len(factors)):
        depth += 1
    prefixes = list(itertools.product(range(len(dims)), repeat=depth))
    jobs = [(factors, dims, prefix, deadline) for prefix in prefixes]
    nodes = 0
    timed_out = False
    found = None
    with ProcessPoolExecutor(max_workers=threads) as pool:
        # map keeps prefix order, so the witness is the canonical-first one
        for result, n, to in pool.map(_subtree, jobs):
            nodes += n
            timed_out = timed_out or to
            if result is not None and found is None:
                found = result
    if found is None and timed_out:
        return VerificationCertificate(
            INCONCLUSIVE, nodes=nodes, millis=_ms(t0), mode=f"exact-parallel-{threads}-timeout"
        )
    return _finish(u, found, nodes, t0, f"exact-parallel-{threads}")


def verify_bruteforce(u: UpbCandidate) -> VerificationCertificate:
    """Oracle: enumerate all ``N^k`` assignments, ranks by Bareiss elimination.

    Shares no search code with :func:`verify_exact`. Exponential; meant for
    instances with about ten states or fewer.
    """
    t0 = time.monotonic()
    dims = u.dims.dims
    nodes = 0
    for assign in itertools.product(range(len(dims)), repeat=len(u.states)):
        nodes += 1
        ok = True
        for p, d in enumerate(dims):
            rows = [u.states[i].factors[p] for i, q in enumerate(assign) if q == p]
            if rows and rank(ExactMatrix.from_rows(rows, cols=d)) >= d:
                ok = False
                break
        if ok:
            return _finish(u, list(assign), nodes, t0, "bruteforce")
    return _finish(u, None, nodes, t0, "bruteforce")


def _ms(t0: float) -> float:
    return (time.monotonic() - t0) * 1000.0
