"""Dense complex linear algebra for density-matrix numerics.

Conventions used throughout the package:

* qubit 0 is the leftmost (most significant) tensor factor, so the
  computational basis of an n-qubit register is ordered as binary strings
  ``|00..0>, |00..1>, ...``;
* generator bases are ordered symmetric block, antisymmetric block,
  diagonal block, with off-diagonal pair indices (i, j), i < j, in
  lexicographic order.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

HERMITICITY_ATOL = 1e-10
PSD_CLIP_ATOL = 1e-10
# eigenvalues within this relative distance of zero are snapped to zero before
# sqrt-like spectral functions; otherwise O(eps) noise on zero modes turns
# into O(sqrt(eps)) errors in Tr sqrt(.)
EIG_NOISE_RTOL = 1e-12


def _snap_spectrum(lam: np.ndarray) -> np.ndarray:
    lam = np.clip(lam, 0.0, None)
    if lam.size:
        lam[lam < lam.max() * EIG_NOISE_RTOL] = 0.0
    return lam


class NonSquare(ValueError):
    """Matrix is not square."""


class NonHermitian(ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotPSD(ValueError):
    """Matrix has an eigenvalue below the negativity tolerance."""


class BadSubsystem(ValueError):
    """Subsystem index list is empty, duplicated or out of range."""


class DimensionMismatch(ValueError):
    """Operands act on spaces of different dimension."""


class Spectrum(NamedTuple):
    """Eigendecomposition with eigenvalues sorted in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a: np.ndarray, atol: float = HERMITICITY_ATOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Returns real eigenvalues sorted descending and the matching unitary of
    column eigenvectors. Raises NonSquare / NonHermitian when the input does
    not qualify within ``atol`` (largest entry of ``|a - a^dagger|``).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    herm_err = np.abs(a - a.conj().T).max() if a.size else 0.0
    if herm_err > atol:
        raise NonHermitian(f"|a - a^dagger| = {herm_err:.3e} exceeds {atol:.1e}")
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def xlogx(x: np.ndarray) -> np.ndarray:
    """Elementwise x*ln(x) with the 0*ln(0) = 0 convention."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def matrix_fn_psd(a: np.ndarray, f: Callable[[np.ndarray], np.ndarray],
                  clip_atol: float = PSD_CLIP_ATOL) -> np.ndarray:
    """Apply a scalar function to a PSD Hermitian matrix via its spectrum.

    Eigenvalues below ``-clip_atol`` raise NotPSD; small negatives from
    floating error are clipped to zero before ``f`` is applied.
    """
    spec = hermitian_eig(a)
    if spec.eigenvalues.min() < -clip_atol:
        raise NotPSD(
            f"minimum eigenvalue {spec.eigenvalues.min():.3e} below -{clip_atol:.1e}")
    lam = f(_snap_spectrum(spec.eigenvalues.copy()))
    v = spec.eigenvectors
    return (v * lam) @ v.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def num_qubits(dim: int) -> int:
    """Number of qubits for a dimension that must be a power of two."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2 ** n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduce an n-qubit density matrix to the qubits listed in ``keep``.

    ``keep`` is an ordered subset of qubit indices; the result's tensor
    factors follow that order. Qubit 0 is the most significant factor.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    keep = list(keep)
    if not keep or len(set(keep)) != len(keep) or \
            any(k < 0 or k >= n for k in keep):
        raise BadSubsystem(f"invalid subsystem selection {keep} for {n} qubits")
    t = rho.reshape([2] * (2 * n))
    labels = list(range(2 * n))
    for k in range(n):
        if k not in keep:
            labels[n + k] = labels[k]
    out_labels = [labels[k] for k in keep] + [labels[n + k] for k in keep]
    m = 2 ** len(keep)
    return np.einsum(t, labels, out_labels).reshape(m, m)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    sqrt_sigma = matrix_fn_psd(sigma, np.sqrt)
    m = sqrt_sigma @ rho @ sqrt_sigma
    lam = _snap_spectrum(np.linalg.eigvalsh((m + m.conj().T) / 2))
    return float(np.sqrt(lam).sum() ** 2)


@dataclass(frozen=True)
class GeneratorBasis:
    """Orthogonal Hermitian traceless generators of SU(d).

    ``matrices`` has shape (d^2 - 1, d, d) and satisfies
    Tr(G_i G_j) = 2 delta_ij. The first (d^2-d)/2 entries are the symmetric
    off-diagonal generators, then the antisymmetric ones in the same pair
    order, then the d-1 diagonal generators.
    """

    dim: int
    matrices: np.ndarray

    @property
    def offdiag_pairs(self) -> int:
        return (self.dim * self.dim - self.dim) // 2


def gellmann_basis(d: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis for dimension d >= 2."""
    if d < 2:
        raise ValueError(f"generator basis needs d >= 2, got {d}")
    sym, asym = [], []
    for i in range(d):
        for j in range(i + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[i, j] = s[j, i] = 1.0
            sym.append(s)
            a = np.zeros((d, d), dtype=complex)
            a[i, j] = -1j
            a[j, i] = 1j
            asym.append(a)
    diag = []
    for l in range(1, d):
        v = np.zeros(d)
        v[:l] = 1.0
        v[l] = -l
        diag.append(np.diag(v.astype(complex)) * np.sqrt(2.0 / (l * (l + 1))))
    return GeneratorBasis(dim=d, matrices=np.array(sym + asym + diag))


def bloch_coords(rho: np.ndarray, basis: GeneratorBasis | None = None) -> np.ndarray:
    """Coordinates x_i = Tr(rho G_i) in the generalized Gell-Mann basis."""
    rho = np.asarray(rho, dtype=complex)
    if basis is None:
        basis = gellmann_basis(rho.shape[0])
    return np.real(np.einsum("kij,ji->k", basis.matrices, rho))


def bloch_reconstruct(x: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Inverse of bloch_coords: rho = I/d + (1/2) sum_i x_i G_i."""
    x = np.asarray(x, dtype=float)
    d = basis.dim
    if x.shape != (d * d - 1,):
        raise DimensionMismatch(
            f"expected {d * d - 1} coordinates for d={d}, got {x.shape}")
    return np.eye(d, dtype=complex) / d + 0.5 * np.tensordot(x, basis.matrices, axes=1)


def l1_coherence_from_bloch(x: np.ndarray, d: int) -> float:
    """l1 coherence from generator coordinates: sum of the off-diagonal
    pair moduli sqrt(x_i^2 + x_{i+m}^2), m = (d^2-d)/2."""
    m = (d * d - d) // 2
    x = np.asarray(x, dtype=float)
    return float(np.sqrt(x[:m] ** 2 + x[m:2 * m] ** 2).sum())


def linear_mixedness_from_bloch(x: np.ndarray, d: int) -> float:
    """Normalized linear-entropy mixedness from generator coordinates:
    1 - d/(2(d-1)) * sum_i x_i^2."""
    x = np.asarray(x, dtype=float)
    return float(1.0 - d / (2.0 * (d - 1)) * (x @ x))
