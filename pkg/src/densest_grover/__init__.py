"""Grover search for the densest k-subgraph, simulated at gate level."""

from .graph import (Graph, QuboModel, brute_force_densest, edge_count, erdos_renyi,
                    erdos_renyi_unique_densest, initial_threshold, qubo_build, qubo_energy,
                    read_edge_list, write_edge_list)
from .sim import (GateOp, QuantumCircuit, RegisterLayout, StateVector, circuit_unitary,
                  run_circuit, sample_register)
from .circuits import (CounterSpec, diffusion_circuit, dicke_preparation, edge_counter_circuit,
                       grover_circuit, oracle_circuit, resource_report)
from .search import (QuantumExecutor, SearchConfig, SearchTrace, adaptive_search,
                     average_success_floor, quantum_executor, required_failures,
                     sample_iteration_count)
from .baselines import (BlackBoxGrover, SaParams, black_box_grover, brute_force_expected_cost,
                        sa_required_runs, simulated_annealing_run)
from .bench import (convergence_experiment, hierarchical_bootstrap, power_law_fit,
                    sa_scaling_experiment, scaling_experiment)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "QuboModel",
    "brute_force_densest",
    "edge_count",
    "erdos_renyi",
    "erdos_renyi_unique_densest",
    "initial_threshold",
    "qubo_build",
    "qubo_energy",
    "read_edge_list",
    "write_edge_list",
    "GateOp",
    "QuantumCircuit",
    "RegisterLayout",
    "StateVector",
    "circuit_unitary",
    "run_circuit",
    "sample_register",
    "CounterSpec",
    "diffusion_circuit",
    "dicke_preparation",
    "edge_counter_circuit",
    "grover_circuit",
    "oracle_circuit",
    "resource_report",
    "QuantumExecutor",
    "SearchConfig",
    "SearchTrace",
    "adaptive_search",
    "average_success_floor",
    "quantum_executor",
    "required_failures",
    "sample_iteration_count",
    "BlackBoxGrover",
    "SaParams",
    "black_box_grover",
    "brute_force_expected_cost",
    "sa_required_runs",
    "simulated_annealing_run",
    "convergence_experiment",
    "hierarchical_bootstrap",
    "power_law_fit",
    "sa_scaling_experiment",
    "scaling_experiment",
]
