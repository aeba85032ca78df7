"""Rate regions for the K-user cyclic Gaussian interference channel."""

__version__ = "0.1.0"

from .achievable import (
    HkParams,
    PowerSplit,
    achievable_constraints,
    achievable_region,
    all_private_split,
    etw_split,
    hk_parameters,
    pre_elimination_system,
)
from .channel import (
    ChannelInstance,
    ChannelRatios,
    Regime,
    classify_regime,
    derive_ratios,
)
from .constraints import ConstraintSet, Kind, LinearConstraint
from .gap import GapReport, SweepConfig, SweepReport, gap_report, sweep
from .outer import (
    NotStrongRegime,
    OuterParams,
    mac_intersection,
    outer_constraints,
    outer_parameters,
    outer_region,
    strong_capacity,
)
