"""Two-qubit phase gate in optically driven coupled quantum dots."""

import json

from . import _core
from ._core import (
    GateOptions,
    GateResult,
    IntegrationError,
    ParameterError,
    PhysicalParams,
    Spin,
    StructuralError,
    basis_labels,
    initial_state,
    mev_to_radps,
    qubit_basis_state,
    run_gate,
    stepwise_state_table,
    uniform_superposition,
)

__all__ = [
    "GateOptions",
    "GateResult",
    "IntegrationError",
    "ParameterError",
    "PhysicalParams",
    "Spin",
    "StructuralError",
    "basis_labels",
    "config",
    "gate",
    "initial_state",
    "mev_to_radps",
    "oracle",
    "pulse_solve",
    "qubit_basis_state",
    "run_gate",
    "stepwise_state_table",
    "sweep_eta",
    "sweep_fig5",
    "uniform_superposition",
]


def _text(cfg):
    if cfg is None:
        return ""
    return cfg if isinstance(cfg, str) else json.dumps(cfg)


def config(cfg=None):
    """Resolved config (defaults filled in) for a dict in the CLI config schema."""
    return json.loads(_core.config_json(_text(cfg)))


def gate(cfg=None):
    return json.loads(_core.run_config(_text(cfg)))


def sweep_fig5(cfg=None):
    """List of (B_T, inv_s_THz, fidelity, error) rows."""
    return _core.sweep_fig5(_text(cfg))


def sweep_eta(cfg=None):
    return _core.sweep_eta(_text(cfg))


def oracle(dt=1e-3):
    return json.loads(_core.oracle_comparison(dt))


def pulse_solve(width_ps=0.2, delta_meV=4.0):
    return json.loads(_core.pulse_solution(width_ps, mev_to_radps(delta_meV)))
