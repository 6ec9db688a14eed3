"""VQE simulator for active-space reaction energetics.

Pipeline: molecular integrals (FCIDUMP) -> active-space reduction ->
second-quantized Hamiltonian -> Jordan-Wigner/parity qubit mapping with
optional two-qubit reduction -> VQE (exact, shot-sampled or noisy, with
readout-error mitigation) or exact diagonalization -> reaction profiles.
"""

import os as _os

# BLAS/OpenMP thread caps must be set before numpy loads.
_threads = _os.environ.get("VQESIM_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os, _threads

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionError,
    EmptySectorError,
    FcidumpError,
    HermiticityError,
    ResourceLimitError,
    SymmetryViolationError,
    ValidationError,
    VqesimError,
)
from .pauli import (  # noqa: E402
    DENSE_QUBIT_CAP,
    PAULI_MATRICES,
    QubitHamiltonian,
    pauli_mul,
)
from .fermion import (  # noqa: E402
    JORDAN_WIGNER,
    PARITY,
    ActiveSpace,
    FermionOperator,
    FermionSystem,
    MolecularIntegrals,
    SymmetryOperators,
    build_hamiltonian,
    emit_fcidump,
    jordan_wigner,
    parity_transform,
    parse_fcidump,
    reduce_active_space,
    symmetry_operators,
    taper_two_qubits,
    to_qubit_hamiltonian,
)
from .ansatz import (  # noqa: E402
    ANSATZ_KINDS,
    AnsatzTemplate,
    Circuit,
    Gate,
    ParamRef,
    build_ansatz,
    hartree_fock_bits,
    resource_counts,
)
from .backends import (  # noqa: E402
    Counts,
    NoiseModel,
    counts_expectation,
    measure_term,
    run_density_matrix,
    run_statevector,
    term_probabilities,
)
from .mitigation import (  # noqa: E402
    CalibrationMatrix,
    CalibrationProvider,
    QuasiDistribution,
    analytic_executor,
    backend_executor,
    build_calibration,
    mitigate,
)
from .vqe import (  # noqa: E402
    BackendConfig,
    CgConfig,
    EnergySample,
    FinalReport,
    SpsaConfig,
    VqeTrace,
    cg_minimize,
    evaluate_energy,
    gradient,
    make_objective,
    report_final,
    spsa_minimize,
)
from .exact import (  # noqa: E402
    SpectrumResult,
    ground_state,
    restricted_ground,
    sector_ground,
)
