"""Mesoscopic grid-network simulator with pedestrian-aware max-pressure control.

The heavy lifting lives in the compiled extension; this package re-exports
its surface:

    Scenario            compile a scenario from config JSON, then .run(...),
                        .sweep(...), .steady_flows(...), .check_feasibility(...)
    classify_series     stable/unstable verdict for a loading-period series
    lyapunov_drift      quadratic queue-functional drift between two steps
    perturb_measurement noisy crossing-queue measurement model
"""

from ._pqmp import (
    Scenario,
    classify_series,
    lyapunov_drift,
    perturb_measurement,
)

__all__ = [
    "Scenario",
    "classify_series",
    "lyapunov_drift",
    "perturb_measurement",
]
