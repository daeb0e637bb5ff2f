"""Divergence witnesses and their unit-mass partitions."""

from .bundle import WeightSpec, WitnessBundle
from .level_sets import bisect_boundary, build_tau_L10, divergent_part, scan_grid
from .partition import PartitionSequence, build_partition
from .weighted import HolderReport, build_tau_weighted, holder_check, weight_vanishes_at_zero

__all__ = [
    "WeightSpec",
    "WitnessBundle",
    "build_tau_L10",
    "divergent_part",
    "scan_grid",
    "bisect_boundary",
    "build_tau_weighted",
    "weight_vanishes_at_zero",
    "HolderReport",
    "holder_check",
    "PartitionSequence",
    "build_partition",
]
