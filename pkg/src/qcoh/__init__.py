"""Quantum coherence and mixedness numerics.

Library layers: ``linalg`` (eigendecompositions, partial trace, fidelity,
generator bases), ``states`` (named states, Haar-induced sampling, file
I/O), ``measures`` (coherence and mixedness functionals, trade-offs),
``distribution`` (additivity scores and closed forms) and ``experiments``
(the seeded Monte Carlo harness behind the ``qcoh`` CLI).
"""

__version__ = "0.1.0"

from .linalg import (
    GeneratorBasis,
    Spectrum,
    bloch_coords,
    bloch_reconstruct,
    fidelity,
    gellmann_basis,
    hermitian_eig,
    kron,
    l1_coherence_from_bloch,
    linear_mixedness_from_bloch,
    matrix_fn_psd,
    partial_trace,
)
from .states import (
    RandomStateSpec,
    ValidationReport,
    complex_gaussian,
    dicke,
    gghz_state,
    gghz_x_state,
    load_state_file,
    maximally_coherent,
    paper_violation_state,
    projector,
    random_density_matrix,
    random_pure_state,
    random_rank_r,
    save_state_file,
    stream,
    validate,
)
from .measures import (
    CoherenceKind,
    MixednessKind,
    c_g,
    c_g_pure,
    c_l1,
    c_l2,
    c_r,
    entropy_vn,
    m_g,
    m_l,
    max_fidelity_incoherent,
    purity,
    tradeoff,
)
from .distribution import (
    AdditivityReport,
    TheoremOneQuantities,
    additivity_score,
    dicke_delta_closed_form,
    theorem1_quantities,
    xstate_additivity_check,
    xstate_c_l1_closed_form,
    xstate_c_r_closed_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
