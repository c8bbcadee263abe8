"""Verification bounds and their defaults.

Every search, survey and scan in formdiv is bounded. The defaults live here and
nowhere else; the CLI overrides them with flags only (no environment
variables, no configuration file) so that an invocation is reproducible from
its command line alone.
"""

from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field, PositiveInt


DEFAULT_BOUNDS: Dict[str, int] = {
    'samples': 3,
    'prime_bound': 100_000,
    'survey_bound': 10_000,
    'harvest_bound': 40,
    'scan_bound': 300,
    'corollary_bound': 60,
    'search_bound': 10_000,
    'representative_bound': 10_000_000,
    'factor_ceiling': 1_000_000,
    'reduction_max_n': 105,
}


class Bounds(BaseModel):
    """Bounds used by a verification or scan run."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    samples: PositiveInt = DEFAULT_BOUNDS['samples']
    prime_bound: PositiveInt = DEFAULT_BOUNDS['prime_bound']
    survey_bound: PositiveInt = DEFAULT_BOUNDS['survey_bound']
    harvest_bound: int = Field(DEFAULT_BOUNDS['harvest_bound'], ge=2)
    scan_bound: int = Field(DEFAULT_BOUNDS['scan_bound'], ge=2)
    corollary_bound: int = Field(DEFAULT_BOUNDS['corollary_bound'], ge=2)
    search_bound: PositiveInt = DEFAULT_BOUNDS['search_bound']
    representative_bound: PositiveInt = DEFAULT_BOUNDS['representative_bound']
    factor_ceiling: PositiveInt = DEFAULT_BOUNDS['factor_ceiling']
    reduction_max_n: PositiveInt = DEFAULT_BOUNDS['reduction_max_n']


def get_bounds(**overrides: Any) -> Bounds:
    """Build bounds from defaults, ignoring overrides that are None."""
    values = {key: value for key, value in overrides.items() if value is not None}
    return Bounds(**values)


def bounds_from_args(args: Any) -> Bounds:
    """Bounds from parsed CLI flags; flags left unset keep their defaults."""
    return get_bounds(
        samples=getattr(args, 'samples', None),
        prime_bound=getattr(args, 'prime_bound', None),
        survey_bound=getattr(args, 'survey_bound', None),
        harvest_bound=getattr(args, 'harvest_bound', None),
        scan_bound=getattr(args, 'bound', None),
        corollary_bound=getattr(args, 'corollary_bound', None),
        search_bound=getattr(args, 'search_bound', None),
        representative_bound=getattr(args, 'representative_bound', None),
        factor_ceiling=getattr(args, 'factor_ceiling', None),
    )
