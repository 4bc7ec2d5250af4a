"""Deep feature augmentation: DV pools and pseudo-DFV sampling."""

from .pool import DVPool, PoolStats, export_pool_csv, extract_dv_pool, load_pool_csv, pool_stats
from .switch import (
    AugConfig,
    SwitchDraw,
    draw_switch,
    make_pseudo_dfv,
    sample_augmented_batch,
)

__all__ = [
    "AugConfig",
    "DVPool",
    "PoolStats",
    "SwitchDraw",
    "draw_switch",
    "export_pool_csv",
    "extract_dv_pool",
    "load_pool_csv",
    "make_pseudo_dfv",
    "pool_stats",
    "sample_augmented_batch",
]
