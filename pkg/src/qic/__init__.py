"""Quantum information capsules in entangled multi-qubit pure states."""

from .capsule import (
    THETA_GRID,
    GHZFixture,
    InequivWitness,
    NotPossible,
    PartnerPair,
    QICConstruction,
    QICCriteria,
    alternate_qic,
    build_partner_family,
    check_qic,
    construct_qic,
    disentangler,
    find_qic,
    ghz_fixture,
    max_entangled_partner,
    partner_ops_from_schmidt,
    purity_curve_params,
    tilde_ops,
)
from .correlation import (
    VirtualQubit,
    check_equivalence,
    check_partner,
    corr_state_pair,
    corr_state_single,
    verify_virtual_qubit,
)
from .dynamics import HamiltonianSpec, evolve_qic, evolve_state, fisher_conservation, ising_chain, weight_profile
from .info import WriteOp, apply_write, extract, fisher_info, swap_operator
from .qubits import (
    PauliString,
    StateVector,
    bell_state,
    embed,
    ghz_state,
    haar_random_state,
    reduced_density,
    schmidt_first_qubit,
)

__version__ = "0.1.0"
