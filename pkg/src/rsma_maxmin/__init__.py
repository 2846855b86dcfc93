"""Max-min fair rate-splitting for overloaded MIMO downlink.

Closed-form power/rate allocation and precoder selection for 1-layer
rate splitting with ZF or MRT private precoding, validated against an
exhaustive grid search, Monte Carlo ergodic rates, and SDMA baselines.
"""

from .allocation import (AllocationCandidate, closed_form_candidates,
                         select_allocation)
from .channel import (ChannelRealization, CsitModel, SystemConfig,
                      effective_csit_quality, load_config, sample_large_scale,
                      sample_realization, substream)
from .harness import SweepSpec, emit_csv, run_sweep
from .precoders import PrecoderSet, common_precoder, mrt_precoders, zf_precoders
from .rates import (RateReport, ergodic_rates_mc, instantaneous_sinrs,
                    maxmin_objective_mrt, maxmin_objective_zf)
from .search import GridSpec, default_grid, exhaustive_search

__version__ = "0.1.0"

__all__ = [
    "AllocationCandidate",
    "ChannelRealization",
    "CsitModel",
    "GridSpec",
    "PrecoderSet",
    "RateReport",
    "SweepSpec",
    "SystemConfig",
    "closed_form_candidates",
    "common_precoder",
    "default_grid",
    "effective_csit_quality",
    "emit_csv",
    "ergodic_rates_mc",
    "exhaustive_search",
    "instantaneous_sinrs",
    "load_config",
    "maxmin_objective_mrt",
    "maxmin_objective_zf",
    "mrt_precoders",
    "run_sweep",
    "sample_large_scale",
    "sample_realization",
    "select_allocation",
    "substream",
    "zf_precoders",
]
