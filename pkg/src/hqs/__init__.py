"""Stochastic transaction simulator for single-photon optics.

Offer waves propagate forward through an optical network, every absorber
returns a confirmation along the same paths, and exactly one absorber per
emission event wins the transaction with probability equal to its echo
strength.  The package splits into

* wavecore          polarized amplitudes, optical element actions, echoes
* network           directed networks, offer propagation, event sampling
* experiments       canonical single-photon and two-photon configurations
* mead              coupled-dipole avalanche dynamics of one completed transfer
* cli               command line runner with deterministic serialization
"""

from .mead import (
    AtomPairState,
    AvalancheConfig,
    FieldGrid,
    TwoLevelAtom,
    beat_frequency,
    compete,
    default_config,
    dipole_amplitude,
    dipole_signal,
    field_snapshot,
    integrate_pair,
    logistic_exact,
    time_to_level,
)
from .network import (
    Element,
    EchoTable,
    EventRecord,
    OpticalNetwork,
    ValidationReport,
    calibrated,
    echo_table,
    network_echo_table,
    propagate_offers,
    run_events,
    sample_counts,
    select_transaction,
    validate,
)
from .rng import RandomStream, counter_word, uniform01, uniform_block
from .wavecore import (
    HORIZONTAL,
    VERTICAL,
    PathRecord,
    PolarizedAmplitude,
    beamsplitter_scatter,
    born_echo,
    path_phase,
    polarizer_project,
    polarizer_reject,
    waveplate_apply,
)

__version__ = "0.1.0"

__all__ = [
    "AtomPairState",
    "AvalancheConfig",
    "EchoTable",
    "Element",
    "EventRecord",
    "FieldGrid",
    "HORIZONTAL",
    "OpticalNetwork",
    "PathRecord",
    "PolarizedAmplitude",
    "RandomStream",
    "TwoLevelAtom",
    "ValidationReport",
    "VERTICAL",
    "beamsplitter_scatter",
    "beat_frequency",
    "born_echo",
    "calibrated",
    "compete",
    "counter_word",
    "default_config",
    "dipole_amplitude",
    "dipole_signal",
    "echo_table",
    "field_snapshot",
    "integrate_pair",
    "logistic_exact",
    "network_echo_table",
    "path_phase",
    "polarizer_project",
    "polarizer_reject",
    "propagate_offers",
    "run_events",
    "sample_counts",
    "select_transaction",
    "time_to_level",
    "uniform01",
    "uniform_block",
    "validate",
    "waveplate_apply",
]
