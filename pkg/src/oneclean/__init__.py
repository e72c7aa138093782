"""One-clean-qubit circuit simulation, reduction, and classical deciders."""

from .circuit import (BqpCircuit, Circuit, CircuitError, CircuitParseError,
                      Dqc1Instance, Gate, GateKind,
                      build_zero_controlled_toffoli, format_circuit,
                      format_instance, invert, parse_circuit, parse_instance)
from .decider import (DeciderReport, EndToEndResult, MedianEstimator,
                      PromiseViolationError, SecondTrialsResult,
                      amplify_majority, amplify_median, bounds_first,
                      bounds_second, decide_first, decide_second,
                      end_to_end_decide, first_accept_prob,
                      majority_error_bound, median_failure_bound,
                      run_first_trials, run_second_trials, second_accept_prob)
from .density import circuit_unitary, dqc1_density, gate_unitary
from .estimators import (FprasEstimator, OneSidedEstimate, additive_mc,
                         exact_bias, exact_rounded, mock_fpras,
                         one_sided_round)
from .reduction import (ReductionArtifact, predicted_p0, reduce_bqp_to_dqc1,
                        verify_identity)
from .simulate import (CapExceededError, OutputDistribution, bqp_accept_prob,
                       dqc1_exact, dqc1_sample, run_statevector)
from .workloads import gap_promise, no_promise, random_circuit, yes_promise

__version__ = "0.1.0"

__all__ = [
    "BqpCircuit", "CapExceededError", "Circuit", "CircuitError",
    "CircuitParseError", "DeciderReport", "Dqc1Instance", "EndToEndResult",
    "FprasEstimator", "Gate", "GateKind", "MedianEstimator",
    "OneSidedEstimate", "OutputDistribution", "PromiseViolationError",
    "ReductionArtifact", "SecondTrialsResult", "additive_mc",
    "amplify_majority", "amplify_median", "bounds_first", "bounds_second",
    "bqp_accept_prob", "build_zero_controlled_toffoli", "circuit_unitary",
    "decide_first", "decide_second", "dqc1_density", "dqc1_exact",
    "dqc1_sample", "end_to_end_decide", "exact_bias", "exact_rounded",
    "first_accept_prob", "format_circuit", "format_instance", "gap_promise",
    "gate_unitary", "invert", "majority_error_bound", "median_failure_bound",
    "mock_fpras", "no_promise", "one_sided_round", "parse_circuit",
    "parse_instance", "predicted_p0", "random_circuit", "reduce_bqp_to_dqc1",
    "run_first_trials", "run_second_trials", "run_statevector",
    "second_accept_prob", "verify_identity", "yes_promise",
]
