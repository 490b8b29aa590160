import math

import numpy as np
import pytest

from qcoh.measures import c_l1, c_r, purity
from qcoh.states import (
    BadAmplitudes,
    BadExcitation,
    BadMixingWeight,
    RandomStateSpec,
    StateFileError,
    VIOLATION_STATE_ATOL,
    complex_gaussian,
    dicke,
    gghz_x_state,
    load_state_file,
    maximally_coherent,
    paper_violation_state,
    projector,
    random_density_matrix,
    random_rank_r,
    save_state_file,
    stream,
    validate,
)

ISQ2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------- named pure states

def test_maximally_coherent_amplitudes():
    assert np.allclose(maximally_coherent(2), [ISQ2, ISQ2])
    assert np.allclose(maximally_coherent(1), [1.0])
    psi = maximally_coherent(5)
    assert abs(np.vdot(psi, psi) - 1.0) < 1e-12


def test_maximally_coherent_measure_anchors():
    assert abs(c_l1(projector(maximally_coherent(2))) - 1.0) < 1e-12
    rho4 = projector(maximally_coherent(4))
    assert abs(c_l1(rho4) - 3.0) < 1e-12
    assert abs(c_r(rho4, "nats") - math.log(4)) < 1e-10
    assert c_l1(projector(maximally_coherent(1))) == 0.0


def test_dicke_small_cases():
    assert np.allclose(dicke(2, 1), [0.0, ISQ2, ISQ2, 0.0])
    psi = dicke(3, 1)
    # strings 001, 010, 100 are indices 1, 2, 4 (qubit 0 most significant)
    assert np.allclose(psi[[1, 2, 4]], 1.0 / math.sqrt(3.0))
    assert np.abs(np.delete(psi, [1, 2, 4])).max() == 0.0
    zero = dicke(3, 0)
    assert zero[0] == 1.0 and np.abs(zero[1:]).max() == 0.0


def test_dicke_amplitude_structure():
    for n in (3, 4, 5):
        for r in range(n + 1):
            psi = dicke(n, r)
            nz = np.flatnonzero(np.abs(psi) > 0)
            assert len(nz) == math.comb(n, r)
            assert np.allclose(psi[nz], psi[nz][0])


def test_dicke_permutation_symmetry():
    n = 4
    psi = dicke(n, 2)
    idx = np.arange(2 ** n)
    for a, b in ((0, 1), (1, 3), (0, 3)):
        bit_a = (idx >> (n - 1 - a)) & 1
        bit_b = (idx >> (n - 1 - b)) & 1
        swapped = idx - (bit_a << (n - 1 - a)) - (bit_b << (n - 1 - b)) \
            + (bit_b << (n - 1 - a)) + (bit_a << (n - 1 - b))
        assert np.abs(psi[swapped] - psi).max() == 0.0


def test_dicke_rejects_bad_excitation():
    with pytest.raises(BadExcitation):
        dicke(3, 4)
    with pytest.raises(BadExcitation):
        dicke(3, -1)


# -------------------------------------------------------------------- X states

def test_gghz_x_state_limits():
    rho = gghz_x_state(3, ISQ2, ISQ2, 0.0)
    assert np.abs(rho - np.eye(8) / 8).max() < 1e-14
    assert c_l1(rho) == 0.0
    pure = gghz_x_state(2, ISQ2, ISQ2, 1.0)
    assert abs(purity(pure) - 1.0) < 1e-12


def test_gghz_x_state_coherence_closed_form():
    rng = np.random.default_rng(0)
    for _ in range(25):
        theta = rng.random() * math.pi / 2
        phase = np.exp(2j * math.pi * rng.random())
        alpha, beta = math.cos(theta), math.sin(theta) * phase
        p = rng.random()
        rho = gghz_x_state(3, alpha, beta, p)
        assert abs(c_l1(rho) - 2 * p * abs(alpha * np.conj(beta))) < 1e-10


def test_gghz_x_state_rejections():
    with pytest.raises(BadAmplitudes):
        gghz_x_state(2, 1.0, 0.5, 0.5)
    with pytest.raises(BadMixingWeight):
        gghz_x_state(2, ISQ2, ISQ2, 1.5)


def test_gghz_x_state_two_party_reductions_diagonal():
    from qcoh.linalg import partial_trace

    for n in (3, 4):
        rho = gghz_x_state(n, 0.6, 0.8, 0.7)
        for k in range(1, n):
            red = partial_trace(rho, (0, k))
            off = np.abs(red - np.diag(np.diag(red))).max()
            assert off <= 1e-12


# ------------------------------------------------------------- violation state

def test_violation_state_constants():
    rho = paper_violation_state()
    assert np.abs(rho - rho.conj().T).max() == 0.0
    assert abs(np.trace(rho).real - 1.0) < 1e-12
    assert abs(purity(rho) - 0.5539) < 5e-4
    report = validate(rho, atol=VIOLATION_STATE_ATOL)
    assert report.passed
    # printed entries are rounded, so strict validation must flag it
    assert not validate(rho).passed


# ------------------------------------------------------------- random sampling

def test_complex_gaussian_moments():
    z = complex_gaussian(stream(1), 200000)
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 2e-2
    assert abs(z.mean()) < 1e-2


def test_random_rank_one_is_pure():
    for i in range(10):
        rho = random_rank_r(RandomStateSpec(n_qubits=2, rank=1, seed=i))
        assert abs(purity(rho) - 1.0) < 1e-10


def test_random_full_rank_is_mixed():
    rho = random_rank_r(RandomStateSpec(n_qubits=2, rank=4, seed=3))
    assert purity(rho) < 1.0 - 1e-3


def test_random_state_determinism():
    spec = RandomStateSpec(n_qubits=2, rank=2, seed=42)
    a, b = random_rank_r(spec), random_rank_r(spec)
    assert np.array_equal(a, b)
    c = random_rank_r(RandomStateSpec(n_qubits=2, rank=2, seed=43))
    assert not np.allclose(a, c)


def test_random_rank_threshold():
    # sampled rank-r states: the (r+1)-th eigenvalue stays at numerical zero
    for i in range(1000):
        rank = 1 + i % 3
        rho = random_density_matrix(4, rank, stream(100, i))
        lam = np.sort(np.linalg.eigvalsh(rho))[::-1]
        assert lam.min() > -1e-10
        if rank < 4:
            assert lam[rank] <= 1e-9
        report = validate(rho)
        assert report.passed, report.worst


# ------------------------------------------------------------------ validation

def test_validate_accepts_maximally_mixed():
    assert validate(np.eye(2) / 2).passed


def test_validate_flags_bad_trace():
    report = validate(np.diag([0.6, 0.5]))
    assert not report.passed
    assert abs(report.trace_error - 0.1) < 1e-12


def test_validate_flags_negative_eigenvalue():
    # [[1,1],[1,0]] has unit trace but spectrum (1 +- sqrt(5))/2
    report = validate(np.array([[1.0, 1.0], [1.0, 0.0]]))
    assert not report.passed
    assert report.min_eigenvalue < -0.6


# --------------------------------------------------------------- state file IO

def test_state_file_round_trip(tmp_path):
    rho = random_density_matrix(4, 2, stream(7))
    path = tmp_path / "state.txt"
    save_state_file(path, rho)
    assert np.array_equal(load_state_file(path), rho)
    first = path.read_text().splitlines()[0]
    assert first == "4"


def test_state_file_parse_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("")
    with pytest.raises(StateFileError):
        load_state_file(path)
    path.write_text("2\n1 0\n0 0\n0 0\n")
    with pytest.raises(StateFileError):
        load_state_file(path)
    path.write_text("2\n1 0\n0 0\n0 0\nx y\n")
    with pytest.raises(StateFileError):
        load_state_file(path)
