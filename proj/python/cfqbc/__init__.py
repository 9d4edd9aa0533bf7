"""Counterfactual quantum bit commitment: exact probabilities, parameter planning and simulation."""

from ._core import (
    DomainError,
    LogBase,
    NoFiniteParameter,
    ProtocolError,
    __version__,
    binding_experiment,
    binding_min_m,
    concealing_advantage,
    concealing_experiment,
    concealing_min_n,
    optimize_malicious_alice,
    optimize_malicious_bob,
    p_a,
    p_a_enum,
    p_alter,
    p_b,
    p_b_enum,
    plan,
    simulate,
    tables,
    verify_oracle,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
