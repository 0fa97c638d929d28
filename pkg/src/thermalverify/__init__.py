"""Single-setting fidelity estimation for thermal graph and hypergraph states.

The toolkit has three layers that deliberately overlap: exact closed forms
(thermal, identities), a Monte-Carlo protocol simulator (sampler), and dense
brute-force oracles (oracle) that re-derive every closed form from scratch at
small qubit counts. The supremacy module builds the restricted hypergraph
family whose single measurement setting certifies diagonal-circuit sampling.
"""

__version__ = "0.1.0"

from .graphs import GraphSpec, HypergraphSpec, load_hypergraph, path_graph, ring_graph
from .identities import (IdentityReport, check_alternating, check_even, check_odd,
                         signed_pattern_count)
from .pauli import (PauliString, StabilizerProduct, alternating_setting,
                    generalized_product, graph_stabilizer, hypergraph_stabilizer,
                    leading_half_setting, parse_setting, stabilizer_product,
                    try_to_pauli)
from .thermal import (BoundReport, ThermalParams, beta_from_temperature,
                      deviation_leading_order, error_bounds, fidelity,
                      flip_probability, half_weight_expectation, invert_temperature,
                      sample_size, setting_expectation, union_bound)
from .oracle import (DenseMixedState, DenseState, apply_operator, boltzmann_density,
                     build_pure_state, dense_expectation, dense_matrix,
                     hadamard_transform, stabilizer_check, thermal_density)
from .sampler import (ProtocolConfig, VerificationReport, check_error_bound,
                      measure_outcome, run_protocol, sample_error_pattern)
from .supremacy import (CertificationDecision, FamilyInstance, build_family, certify,
                        exact_outcome_distribution, family_triples, iqp_sample,
                        optimal_setting)

__all__ = [
    "__version__",
    "GraphSpec", "HypergraphSpec", "load_hypergraph", "path_graph", "ring_graph",
    "IdentityReport", "check_alternating", "check_even", "check_odd",
    "signed_pattern_count",
    "PauliString", "StabilizerProduct", "alternating_setting", "generalized_product",
    "graph_stabilizer", "hypergraph_stabilizer", "leading_half_setting",
    "parse_setting", "stabilizer_product", "try_to_pauli",
    "BoundReport", "ThermalParams", "beta_from_temperature",
    "deviation_leading_order", "error_bounds", "fidelity", "flip_probability",
    "half_weight_expectation", "invert_temperature", "sample_size",
    "setting_expectation", "union_bound",
    "DenseMixedState", "DenseState", "apply_operator", "boltzmann_density",
    "build_pure_state", "dense_expectation", "dense_matrix", "hadamard_transform",
    "stabilizer_check", "thermal_density",
    "ProtocolConfig", "VerificationReport", "check_error_bound", "measure_outcome",
    "run_protocol", "sample_error_pattern",
    "CertificationDecision", "FamilyInstance", "build_family", "certify",
    "exact_outcome_distribution", "family_triples", "iqp_sample", "optimal_setting",
]
