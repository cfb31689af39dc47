"""Exact verification toolkit for interferometric ontology no-go arguments.

Simulates a half Mach-Zehnder prepare-transform-measure fragment with
exact radical arithmetic, represents finite ontological models with
assumption audits, and compiles the no-go arguments into rational linear
feasibility programs whose outcomes carry machine-checked certificates.
"""
from .amplitudes import Amplitude, RadicalReal
from .interferometer import (CircuitConfig, InvalidTransmissionError,
                             device_fragment, run_m0_m2, run_m1, run_m1_m2,
                             run_psi0_full)
from .lp import (ConstraintSystem, FeasibilityResult, LinearRow,
                 enumerate_feasible, solve)
from .nogo import (HypothesisRangeError, InternalInconsistencyError,
                   TheoremReport, check_hroi2, check_hroi_original,
                   compile_hroi2, nomic_counterexample, pbr_check,
                   pbr_fixture, vertex_decompose)
from .ontology import (AssumptionSet, ComplianceReport, EpistemicState,
                       OntologicalModel, ResponseTable, check_assumptions,
                       dump_model, lift_model, load_model,
                       predicted_statistics, reproduces, support_overlap,
                       validate_model)
from .qstate import (ProjectiveMeasurement, StateVector, UnitaryOp, apply,
                     born_probabilities, inner_product, tensor)

__version__ = "1.0.0"

__all__ = [
    "Amplitude", "RadicalReal",
    "StateVector", "UnitaryOp", "ProjectiveMeasurement", "apply",
    "born_probabilities", "inner_product", "tensor",
    "CircuitConfig", "InvalidTransmissionError", "device_fragment",
    "run_m0_m2", "run_m1", "run_m1_m2", "run_psi0_full",
    "ConstraintSystem", "LinearRow", "FeasibilityResult", "solve",
    "enumerate_feasible",
    "OntologicalModel", "EpistemicState", "ResponseTable", "AssumptionSet",
    "ComplianceReport", "validate_model", "predicted_statistics",
    "reproduces", "support_overlap", "lift_model", "check_assumptions",
    "dump_model", "load_model",
    "TheoremReport", "compile_hroi2", "check_hroi2", "check_hroi_original",
    "pbr_check", "pbr_fixture", "nomic_counterexample", "vertex_decompose",
    "HypothesisRangeError", "InternalInconsistencyError",
]
