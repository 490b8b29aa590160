"""Additivity (monogamy-type) coherence scores across multiqubit systems.

The additivity relation compares the coherence of an n-qubit state against
the sum over the pairwise reductions that keep a fixed pivot qubit A:

    delta = C(whole)^k - sum_k C(rho_{A,B_k})^k >= 0.

Normalized variants divide each coherence by the maximum attainable in the
subsystem's own dimension before the power is applied: 2^m - 1 for the l1
measure on m qubits, log(2^m) for the relative entropy (a base-free ratio).
Raw relative-entropy scores default to bits, matching the closed forms for
Dicke and X states.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import num_qubits, partial_trace
from .measures import (
    GEOMETRIC,
    L1,
    L2,
    RELATIVE_ENTROPY,
    CoherenceKind,
    c_g,
    c_l1,
    c_l2,
    c_r,
    dephased,
    entropy_vn,
)
from .states import gghz_x_state

SATISFACTION_ATOL = 1e-10


class TooFewParties(ValueError):
    """Additivity scores need at least three qubits."""


class OutOfRegime(ValueError):
    """Closed form requested outside its validity regime."""


@dataclass(frozen=True)
class AdditivityReport:
    """Additivity score of one state for one coherence descriptor.

    ``pair_values`` holds the (possibly normalized) coherence of each
    two-qubit reduction (pivot, B_k) in partner order; ``whole_value`` the
    matching value for the full state. ``delta`` applies ``kind.power`` to
    every value before differencing.
    """

    n_parties: int
    pivot: int
    kind: CoherenceKind
    whole_value: float
    pair_values: tuple
    delta: float
    satisfied: bool


def _coherence(rho: np.ndarray, kind: CoherenceKind, base: str) -> float:
    if kind.family == L1:
        val = c_l1(rho)
        if kind.normalized:
            val /= rho.shape[0] - 1
    elif kind.family == RELATIVE_ENTROPY:
        if kind.normalized:
            val = c_r(rho, "nats") / math.log(rho.shape[0])
        else:
            val = c_r(rho, base)
    elif kind.family == L2:
        if kind.normalized:
            raise ValueError("no normalization convention for the l2 family "
                             "outside the trade-off relations")
        val = c_l2(rho)
    elif kind.family == GEOMETRIC:
        if kind.normalized:
            raise ValueError("no normalization convention for the geometric "
                             "family in additivity scores")
        val = c_g(rho)
    else:  # pragma: no cover - CoherenceKind already validates
        raise ValueError(f"unknown family {kind.family!r}")
    return float(val)


def additivity_score(rho: np.ndarray, pivot: int, kind: CoherenceKind,
                     base: str = "bits") -> AdditivityReport:
    """Additivity score of an n-qubit state with respect to ``pivot``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    if n < 3:
        raise TooFewParties(f"need at least 3 qubits, got {n}")
    if not 0 <= pivot < n:
        raise ValueError(f"pivot {pivot} outside [0, {n})")
    whole = _coherence(rho, kind, base)
    pairs = tuple(
        _coherence(partial_trace(rho, (pivot, k)), kind, base)
        for k in range(n) if k != pivot)
    delta = whole ** kind.power - sum(v ** kind.power for v in pairs)
    return AdditivityReport(
        n_parties=n,
        pivot=pivot,
        kind=kind,
        whole_value=whole,
        pair_values=pairs,
        delta=float(delta),
        satisfied=bool(delta >= -SATISFACTION_ATOL),
    )


@dataclass(frozen=True)
class TheoremOneQuantities:
    """Entropy combinations controlling relative-entropy additivity (nats).

    delta1 = sum_k S(rho_{AB_k}) - S(rho) - S(rho_A) and delta2 is the same
    expression on the dephased state; both are non-negative by strong
    subadditivity. delta3 = sum_k S(Tr_{B_k} rho) - (n-1) S(rho) and delta4
    its dephased twin. The decomposition identity
    C_r(whole) - sum_k C_r(pairs) = delta1 - delta2 - C_r(rho_A) holds
    exactly.
    """

    delta1: float
    delta2: float
    delta3: float
    delta4: float
    c_r_pivot: float
    c_r_whole: float


def theorem1_quantities(rho: np.ndarray, pivot: int) -> TheoremOneQuantities:
    """Compute the four entropy gaps for an n-qubit state (n >= 3)."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    if n < 3:
        raise TooFewParties(f"need at least 3 qubits, got {n}")
    if not 0 <= pivot < n:
        raise ValueError(f"pivot {pivot} outside [0, {n})")
    partners = [k for k in range(n) if k != pivot]
    rho_deph = dephased(rho)

    def entropies(state):
        s_whole = entropy_vn(state, "nats")
        s_pivot = entropy_vn(partial_trace(state, (pivot,)), "nats")
        s_pairs = sum(entropy_vn(partial_trace(state, (pivot, k)), "nats")
                      for k in partners)
        s_drop = sum(
            entropy_vn(partial_trace(state, [q for q in range(n) if q != k]),
                       "nats")
            for k in partners)
        return s_whole, s_pivot, s_pairs, s_drop

    s_whole, s_pivot, s_pairs, s_drop = entropies(rho)
    i_whole, i_pivot, i_pairs, i_drop = entropies(rho_deph)
    m = len(partners)
    return TheoremOneQuantities(
        delta1=s_pairs - s_whole - s_pivot,
        delta2=i_pairs - i_whole - i_pivot,
        delta3=s_drop - (m - 1) * s_whole,
        delta4=i_drop - (m - 1) * i_whole,
        c_r_pivot=i_pivot - s_pivot,
        c_r_whole=i_whole - s_whole,
    )


def dicke_delta_closed_form(n: int, r: int, kind: CoherenceKind) -> float:
    """Closed-form additivity score of the n-qubit Dicke state with r
    excitations (pivot arbitrary by permutation symmetry).

    Normalized l1:       (binom(n,r) - 1)/(2^n - 1) - 2r(n-r)/(3n)
    Normalized rel.ent.: log2(binom(n,r))/n - r(n-r)/n
    Raw l1:              binom(n,r) - 1 - 2r(n-r)/n
    Raw rel.ent. (bits): log2(binom(n,r)) - 2r(n-r)/n

    Valid for n >= 3 and 1 <= r <= n-1; the r = n edge is a single basis
    vector with zero coherence and trivially gives delta = 0.
    """
    if kind.power != 1:
        raise ValueError("closed forms exist for power 1 only")
    if n < 3 or not 1 <= r <= n - 1:
        raise OutOfRegime(f"closed forms hold for n >= 3, 1 <= r <= n-1; "
                          f"got n={n}, r={r}")
    binom = math.comb(n, r)
    if kind.family == L1:
        if kind.normalized:
            return (binom - 1) / (2 ** n - 1) - 2 * r * (n - r) / (3 * n)
        return binom - 1 - 2 * r * (n - r) / n
    if kind.family == RELATIVE_ENTROPY:
        if kind.normalized:
            return math.log2(binom) / n - r * (n - r) / n
        return math.log2(binom) - 2 * r * (n - r) / n
    raise ValueError(f"no closed form for family {kind.family!r}")


def xstate_c_l1_closed_form(alpha: complex, beta: complex, p: float) -> float:
    """l1 coherence of the gGHZ/white-noise X state: 2 p |alpha beta*|."""
    return float(2.0 * p * abs(alpha * np.conj(beta)))


def xstate_c_r_closed_form(n: int, alpha: complex, beta: complex,
                           p: float) -> float:
    """Relative entropy of coherence (bits) of the gGHZ/white-noise X state.

    Derived from the spectra: the state has one eigenvalue p + (1-p)/d and
    d-1 eigenvalues (1-p)/d, while its diagonal is {p|alpha|^2 + (1-p)/d,
    p|beta|^2 + (1-p)/d, (1-p)/d x (d-2)}, giving

        C_r = h(p|alpha|^2 + q) + h(p|beta|^2 + q) - h(q) - h(p + q)

    with q = (1-p)/d and h(x) = -x log2(x). (The corresponding published
    expression carries a sign typo on its last two terms; this form matches
    S(diag(rho)) - S(rho) identically.)
    """
    d = 2 ** n

    def h(x: float) -> float:
        return -x * math.log2(x) if x > 0 else 0.0

    q = (1.0 - p) / d
    return (h(p * abs(alpha) ** 2 + q) + h(p * abs(beta) ** 2 + q)
            - h(q) - h(p + q))


def xstate_additivity_check(n: int, alpha: complex, beta: complex, p: float,
                            kind: CoherenceKind,
                            base: str = "bits") -> AdditivityReport:
    """Additivity report for the n-qubit gGHZ/white-noise X state, pivot 0.

    Every two-party reduction of this family is diagonal, so any coherence
    measure vanishes on the pairs and delta equals the whole-state value.
    """
    if n < 3:
        raise TooFewParties(f"need at least 3 qubits, got {n}")
    return additivity_score(gghz_x_state(n, alpha, beta, p), 0, kind, base)
