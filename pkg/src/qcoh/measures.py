"""Coherence and mixedness functionals and their trade-off evaluators.

All coherence quantities are taken with respect to the computational
(reference) basis. Entropic quantities default to nats; normalized ratios
such as C_r / ln(d) are base-free.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import _snap_spectrum
from .linalg import DimensionMismatch  # noqa: F401  (re-exported for callers)

INCOHERENT_ATOL = 1e-12

L1 = "l1"
L2 = "l2"
RELATIVE_ENTROPY = "relative_entropy"
GEOMETRIC = "geometric"
COHERENCE_FAMILIES = (L1, L2, RELATIVE_ENTROPY, GEOMETRIC)

LINEAR_ENTROPY = "linear"
VON_NEUMANN = "von_neumann"
MIXEDNESS_FAMILIES = (LINEAR_ENTROPY, VON_NEUMANN, GEOMETRIC)

_LN2 = math.log(2.0)


class DimensionOne(ValueError):
    """Normalized linear mixedness is undefined for d = 1."""


class OptimizerNotConverged(RuntimeError):
    """The incoherent-fidelity maximization hit its iteration cap."""


class UnknownCombination(ValueError):
    """Requested trade-off pair is outside the studied set."""


@dataclass(frozen=True)
class CoherenceKind:
    """Descriptor of a coherence functional.

    ``family`` selects the measure; ``normalized`` divides by the
    dimension-dependent maximum before ``power`` is applied. The l2 family
    is provided for trade-off studies only: its square satisfies convexity
    and vanishing on incoherent states but is not known to be monotone
    under selective incoherent operations, so it is not a certified
    coherence measure.
    """

    family: str
    normalized: bool = False
    power: int = 1

    def __post_init__(self):
        if self.family not in COHERENCE_FAMILIES:
            raise ValueError(f"unknown coherence family {self.family!r}")
        if self.power < 1:
            raise ValueError(f"power must be >= 1, got {self.power}")

    @property
    def label(self) -> str:
        base = {L1: "C_l1", L2: "C_l2", RELATIVE_ENTROPY: "C_r",
                GEOMETRIC: "C_g"}[self.family]
        return base if self.power == 1 else f"{base}^{self.power}"


@dataclass(frozen=True)
class MixednessKind:
    """Descriptor of a mixedness functional; ``base`` only affects raw
    von Neumann entropies, never normalized ratios."""

    family: str
    base: str = "nats"

    def __post_init__(self):
        if self.family not in MIXEDNESS_FAMILIES:
            raise ValueError(f"unknown mixedness family {self.family!r}")
        if self.base not in ("nats", "bits"):
            raise ValueError(f"unknown base {self.base!r}")


def _log_scale(base: str) -> float:
    if base == "nats":
        return 1.0
    if base == "bits":
        return _LN2
    raise ValueError(f"unknown entropy base {base!r}; use 'nats' or 'bits'")


def _entropy_of_probs(p: np.ndarray, base: str) -> float:
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum() / _log_scale(base))


def purity(rho: np.ndarray) -> float:
    """Tr rho^2."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def dephased(rho: np.ndarray) -> np.ndarray:
    """Diagonal part of rho in the reference basis."""
    rho = np.asarray(rho, dtype=complex)
    return np.diag(np.diag(rho))


def c_l1(rho: np.ndarray) -> float:
    """l1 norm of coherence: sum of |rho_ij| over i != j."""
    rho = np.asarray(rho, dtype=complex)
    mags = np.abs(rho)
    return float(mags.sum() - np.trace(mags))


def c_l2(rho: np.ndarray) -> float:
    """Root-sum-square of the off-diagonal entries."""
    rho = np.asarray(rho, dtype=complex)
    sq = np.abs(rho) ** 2
    return float(math.sqrt(max(sq.sum() - np.trace(sq), 0.0)))


def entropy_vn(rho: np.ndarray, base: str = "nats") -> float:
    """von Neumann entropy -Tr(rho log rho), eigenvalues clipped at zero."""
    rho = np.asarray(rho, dtype=complex)
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return _entropy_of_probs(lam, base)


def c_r(rho: np.ndarray, base: str = "nats") -> float:
    """Relative entropy of coherence S(diag(rho)) - S(rho)."""
    rho = np.asarray(rho, dtype=complex)
    return _entropy_of_probs(np.diag(rho).real, base) - entropy_vn(rho, base)


def m_l(rho: np.ndarray) -> float:
    """Normalized linear-entropy mixedness d/(d-1) (1 - Tr rho^2)."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if d < 2:
        raise DimensionOne("linear mixedness is undefined for a 1-dim state")
    return float(d / (d - 1) * (1.0 - purity(rho)))


def m_g(rho: np.ndarray) -> float:
    """Geometric mixedness F(rho, I/d) = (Tr sqrt(rho))^2 / d."""
    rho = np.asarray(rho, dtype=complex)
    lam = _snap_spectrum(np.linalg.eigvalsh((rho + rho.conj().T) / 2))
    return float(np.sqrt(lam).sum() ** 2 / rho.shape[0])


def c_g_pure(psi: np.ndarray) -> float:
    """Geometric coherence of a pure state: 1 - max_i |<i|psi>|^2."""
    psi = np.asarray(psi, dtype=complex)
    return float(1.0 - (np.abs(psi) ** 2).max())


def _fidelity_to_diag(rho: np.ndarray, q: np.ndarray) -> float:
    # F(rho, diag(q)) = (sum of singular values of sqrt(rho) diag(sqrt(q)))^2,
    # evaluated via eigvalsh of D rho D with D = diag(sqrt(q)).
    sq = np.sqrt(np.clip(q, 0.0, None))
    m = sq[:, None] * rho * sq[None, :]
    lam = _snap_spectrum(np.linalg.eigvalsh(m))
    return float(np.sqrt(lam).sum() ** 2)


def max_fidelity_incoherent(rho: np.ndarray, improvement_tol: float = 1e-12,
                            residual_tol: float = 1e-10,
                            max_iter: int = 100000,
                            support_atol: float = 1e-12) -> float:
    """Maximum fidelity between rho and any diagonal (incoherent) state.

    Alternating ascent on F(rho, diag(q)) over the probability simplex:
    with A = sqrt(rho) restricted to its support, sqrt(F) equals the trace
    norm of A diag(sqrt(q)); each step takes the polar isometry U of that
    product and re-weights q proportionally to the clipped diagonal of
    U^dagger A, which never decreases F. Iteration starts from
    q = diag(rho) and stops once an ascent step improves F by less than
    ``improvement_tol`` or moves q by less than ``residual_tol`` in l1
    (an approximate fixed point; the objective is concave in q, so fixed
    points are global maxima). The result is floored by the exactly known
    candidates F(rho, diag(rho)), F(rho, I/d) and the vertex values
    rho_ii, so it is always a certified lower bound on the maximum.

    Raises OptimizerNotConverged when the iteration cap is reached before
    either stopping rule triggers.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if d == 1:
        return 1.0
    diag = np.clip(np.diag(rho).real, 0.0, None)
    lam, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    lam = _snap_spectrum(lam)
    # floor candidates: vertices e_i give F = rho_ii; I/d gives (Tr sqrt(rho))^2/d
    floor = max(float(diag.max()), float(np.sqrt(lam).sum() ** 2 / d))
    keep = lam > support_atol
    if not keep.any():
        return floor
    # a_t = sqrt(rho) expressed on its rank-r support: sqrt(rho) = Psi a_t
    a_t = np.sqrt(lam[keep])[:, None] * vecs[:, keep].conj().T
    q = diag / diag.sum() if diag.sum() > 0 else np.full(d, 1.0 / d)
    u_left, sing, v_right = np.linalg.svd(a_t * np.sqrt(q)[None, :],
                                          full_matrices=False)
    f = float(sing.sum() ** 2)
    for _ in range(max_iter):
        iso = u_left @ v_right
        c = np.clip(np.real(np.einsum("ij,ij->j", iso.conj(), a_t)), 0.0, None)
        weight = c @ c
        if weight <= 0.0:
            return max(f, floor)
        q_next = c * c / weight
        u_left, sing, v_right = np.linalg.svd(a_t * np.sqrt(q_next)[None, :],
                                              full_matrices=False)
        f_next = float(sing.sum() ** 2)
        if f_next < f + improvement_tol or \
                np.abs(q_next - q).sum() < residual_tol:
            return max(f, f_next, floor)
        q, f = q_next, f_next
    raise OptimizerNotConverged(
        f"no convergence within {max_iter} ascent steps (last F = {f:.12f})")


def c_g(rho: np.ndarray, improvement_tol: float = 1e-12,
        max_iter: int = 100000) -> float:
    """Geometric coherence 1 - max_{sigma incoherent} F(rho, sigma).

    Pure inputs (unit purity within 1e-10) use the closed form
    1 - max_i rho_ii; diagonal inputs are incoherent and return 0. Mixed
    inputs run the simplex maximization of max_fidelity_incoherent.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] == 1:
        return 0.0
    if c_l1(rho) <= INCOHERENT_ATOL:
        return 0.0
    if purity(rho) >= 1.0 - 1e-10:
        return float(1.0 - np.diag(rho).real.max())
    f = max_fidelity_incoherent(rho, improvement_tol=improvement_tol,
                                max_iter=max_iter)
    return float(max(1.0 - f, 0.0))


# trade-off combinations studied numerically; each entry maps to a pair of
# normalized-component evaluators
def _coh_l1_sq(rho, d):
    return (c_l1(rho) / (d - 1)) ** 2


def _coh_l2_sq(rho, d):
    return c_l2(rho) ** 2 / (1.0 - 1.0 / d)


def _coh_r_ratio(rho, d):
    return c_r(rho, "nats") / math.log(d)


def _coh_g(rho, d):
    return c_g(rho)


def _mix_linear(rho, d):
    return m_l(rho)


def _mix_s_ratio(rho, d):
    return entropy_vn(rho, "nats") / math.log(d)


def _mix_geometric(rho, d):
    return m_g(rho)


TRADEOFF_PAIRS = {
    (L1, LINEAR_ENTROPY): (_coh_l1_sq, _mix_linear),
    (L2, LINEAR_ENTROPY): (_coh_l2_sq, _mix_linear),
    (RELATIVE_ENTROPY, VON_NEUMANN): (_coh_r_ratio, _mix_s_ratio),
    (GEOMETRIC, GEOMETRIC): (_coh_g, _mix_geometric),
    (L1, VON_NEUMANN): (_coh_l1_sq, _mix_s_ratio),
    (L1, GEOMETRIC): (_coh_l1_sq, _mix_geometric),
    (RELATIVE_ENTROPY, LINEAR_ENTROPY): (_coh_r_ratio, _mix_linear),
    (RELATIVE_ENTROPY, GEOMETRIC): (_coh_r_ratio, _mix_geometric),
}


def tradeoff(rho: np.ndarray, coherence: str, mixedness: str) -> float:
    """Left-hand side of a coherence/mixedness reciprocity relation.

    Components enter in normalized form: (C_l1/(d-1))^2, C_l2^2/(1-1/d),
    C_r/ln(d), S/ln(d), and raw C_g, M_l, M_g. Values at most 1 satisfy the
    trade-off; the pair must be one of TRADEOFF_PAIRS.
    """
    rho = np.asarray(rho, dtype=complex)
    key = (coherence, mixedness)
    if key not in TRADEOFF_PAIRS:
        raise UnknownCombination(
            f"pair {key} is not among the studied combinations "
            f"{sorted(TRADEOFF_PAIRS)}")
    d = rho.shape[0]
    coh_fn, mix_fn = TRADEOFF_PAIRS[key]
    return float(coh_fn(rho, d) + mix_fn(rho, d))
