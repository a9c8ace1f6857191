"""Map application-level dependability requirements of cyclic control traffic
to network-level loss parameters, and back.
"""

from survmap.core import (
    UNBOUNDED,
    AppRequirements,
    CyclicTrafficSpec,
    NetworkParams,
    ReliabilityReport,
    Unbounded,
    app_availability,
    app_reliability,
    full_report,
    independent_app_availability,
    network_availability,
    network_params_from_per,
    survival_cycles,
    transition_rate,
)
from survmap.errors import InfeasibleError, InvalidInputError, NumericalError, ReliabilityError

__version__ = "0.1.0"

__all__ = [
    "UNBOUNDED",
    "AppRequirements",
    "CyclicTrafficSpec",
    "InfeasibleError",
    "InvalidInputError",
    "NetworkParams",
    "NumericalError",
    "ReliabilityError",
    "ReliabilityReport",
    "Unbounded",
    "app_availability",
    "app_reliability",
    "full_report",
    "independent_app_availability",
    "network_availability",
    "network_params_from_per",
    "survival_cycles",
    "transition_rate",
]
