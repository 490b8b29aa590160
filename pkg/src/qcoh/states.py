"""Construction, validation, sampling and file I/O of quantum states.

Pure states are complex amplitude vectors; density matrices are square
complex ndarrays. Random sampling is driven by named, seedable PCG64
streams so that every draw is reproducible from integer keys alone.
"""

import math
from dataclasses import dataclass

import numpy as np

DENSITY_ATOL = 1e-10
PURE_NORM_ATOL = 1e-12
AMPLITUDE_ATOL = 1e-12
RANK_ATOL = 1e-9


class BadExcitation(ValueError):
    """Excitation number outside [0, n]."""


class BadAmplitudes(ValueError):
    """State amplitudes do not satisfy |alpha|^2 + |beta|^2 = 1."""


class BadMixingWeight(ValueError):
    """Mixing probability outside [0, 1]."""


class StateFileError(ValueError):
    """State file does not conform to the text format."""


class ValidationError(ValueError):
    """A matrix failed density-matrix validation."""


def projector(psi: np.ndarray) -> np.ndarray:
    """Density matrix |psi><psi| of a pure state vector."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def maximally_coherent(d: int) -> np.ndarray:
    """Uniform-amplitude pure state (1/sqrt(d), ..., 1/sqrt(d))."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return np.full(d, 1.0 / math.sqrt(d), dtype=complex)


def dicke(n: int, r: int) -> np.ndarray:
    """Symmetric n-qubit state with r excitations.

    Equal amplitudes binom(n, r)^(-1/2) on every computational basis string
    containing exactly r ones, zero elsewhere.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if r < 0 or r > n:
        raise BadExcitation(f"excitation number r={r} outside [0, {n}]")
    amp = 1.0 / math.sqrt(math.comb(n, r))
    psi = np.zeros(2 ** n, dtype=complex)
    for idx in range(2 ** n):
        if bin(idx).count("1") == r:
            psi[idx] = amp
    return psi


def gghz_state(n: int, alpha: complex, beta: complex) -> np.ndarray:
    """Generalized GHZ vector alpha|0...0> + beta|1...1>."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > AMPLITUDE_ATOL:
        raise BadAmplitudes(
            f"|alpha|^2 + |beta|^2 = {abs(alpha)**2 + abs(beta)**2:.12f} != 1")
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = alpha
    psi[-1] = beta
    return psi


def gghz_x_state(n: int, alpha: complex, beta: complex, p: float) -> np.ndarray:
    """X-structured mixture p|gGHZ><gGHZ| + (1-p) I/d on n qubits."""
    if not 0.0 <= p <= 1.0:
        raise BadMixingWeight(f"mixing weight p={p} outside [0, 1]")
    d = 2 ** n
    return p * projector(gghz_state(n, alpha, beta)) + (1.0 - p) * np.eye(d) / d


# Two-qubit rank-2 state, stored exactly as printed (4 decimals); it violates
# the relative-entropy/linear-mixedness trade-off. Derived checks on it use
# relaxed tolerances because of the rounding.
_VIOLATION_ENTRIES = [
    [0.2501, 0.0490 - 0.0090j, -0.1392 - 0.1148j, -0.2141 - 0.0515j],
    [0.0490 + 0.0090j, 0.2064, 0.1588 - 0.0438j, 0.0137 + 0.0650j],
    [-0.1392 + 0.1148j, 0.1588 + 0.0438j, 0.3001, 0.1858 + 0.0115j],
    [-0.2141 + 0.0515j, 0.0137 - 0.0650j, 0.1858 - 0.0115j, 0.2434],
]

VIOLATION_STATE_ATOL = 5e-4


def paper_violation_state() -> np.ndarray:
    """The published two-qubit counterexample to the C_r/M_l trade-off."""
    return np.array(_VIOLATION_ENTRIES, dtype=complex)


@dataclass(frozen=True)
class RandomStateSpec:
    """Seeded description of one Haar-induced random-state draw."""

    n_qubits: int
    rank: int
    seed: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if not 1 <= self.rank <= 2 ** self.n_qubits:
            raise ValueError(
                f"rank {self.rank} outside [1, {2 ** self.n_qubits}]")


def stream(*key: int) -> np.random.Generator:
    """PCG64 generator keyed by a tuple of integers.

    Monte Carlo sample i of a run with master seed s draws from
    stream(s, i), so concurrent workers never share generator state and
    aggregation order cannot affect results.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians via Box-Muller on uniform pairs.

    z = sqrt(-ln(1-u)) * exp(2*pi*i*v) with u, v uniform on [0, 1); this
    construction is pinned down so sampled states replay portably.
    """
    u = rng.random(shape)
    v = rng.random(shape)
    return np.sqrt(-np.log1p(-u)) * np.exp(2j * np.pi * v)


def random_density_matrix(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-induced random state of fixed rank.

    Draws a dim x rank complex Gaussian G and returns GG^dagger normalized
    to unit trace, i.e. the reduced state of a Haar pure state on a
    dim x rank composite (ancilla dimension equal to the rank).
    """
    if not 1 <= rank <= dim:
        raise ValueError(f"rank {rank} outside [1, {dim}]")
    g = complex_gaussian(rng, (dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state vector."""
    g = complex_gaussian(rng, dim)
    return g / np.linalg.norm(g)


def random_rank_r(spec: RandomStateSpec) -> np.ndarray:
    """Deterministic Haar-induced draw described by ``spec``."""
    return random_density_matrix(2 ** spec.n_qubits, spec.rank, stream(spec.seed))


@dataclass(frozen=True)
class ValidationReport:
    """Diagnostics from density-matrix validation."""

    dim: int
    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float
    purity: float
    atol: float
    passed: bool

    @property
    def worst(self) -> str:
        issues = [
            ("hermiticity error", self.hermiticity_error),
            ("trace error", self.trace_error),
            ("negative eigenvalue", max(0.0, -self.min_eigenvalue)),
            ("purity excess", max(0.0, self.purity - 1.0)),
        ]
        name, val = max(issues, key=lambda kv: kv[1])
        return f"{name} = {val:.3e}"


def validate(rho: np.ndarray, atol: float = DENSITY_ATOL) -> ValidationReport:
    """Check Hermiticity, unit trace, positivity and the purity bound.

    Never raises; returns a report with the worst violation. Pass a larger
    ``atol`` for states whose entries are rounded (e.g. transcribed ones).
    """
    rho = np.asarray(rho, dtype=complex)
    herm_err = float(np.abs(rho - rho.conj().T).max())
    trace_err = float(abs(np.trace(rho) - 1.0))
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    purity = float(np.real(np.trace(rho @ rho)))
    passed = (herm_err <= atol and trace_err <= atol
              and lam.min() >= -atol and purity <= 1.0 + atol)
    return ValidationReport(
        dim=rho.shape[0],
        hermiticity_error=herm_err,
        trace_error=trace_err,
        min_eigenvalue=float(lam.min()),
        purity=purity,
        atol=atol,
        passed=passed,
    )


def save_state_file(path, rho: np.ndarray) -> None:
    """Write a density matrix in the plain-text exchange format.

    First line: dimension d. Then d^2 lines "re im" in row-major order.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    lines = [str(d)]
    for i in range(d):
        for j in range(d):
            lines.append(f"{float(rho[i, j].real)!r} {float(rho[i, j].imag)!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_state_file(path) -> np.ndarray:
    """Read a density matrix written by save_state_file."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise StateFileError(f"{path}: empty state file")
    try:
        d = int(tokens[0])
    except ValueError as exc:
        raise StateFileError(f"{path}: first token must be the dimension") from exc
    if d < 1:
        raise StateFileError(f"{path}: dimension {d} must be positive")
    values = tokens[1:]
    if len(values) != 2 * d * d:
        raise StateFileError(
            f"{path}: expected {2 * d * d} numbers after the dimension, "
            f"got {len(values)}")
    try:
        nums = [float(v) for v in values]
    except ValueError as exc:
        raise StateFileError(f"{path}: non-numeric entry") from exc
    flat = np.array(nums[0::2]) + 1j * np.array(nums[1::2])
    return flat.reshape(d, d)
