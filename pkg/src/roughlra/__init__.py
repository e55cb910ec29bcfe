"""Forward attribute reduction for classic and neighborhood rough sets,
with local-redundancy (active-region) acceleration."""
from .data import DecisionSystem, Schema, load_csv, make_system, synth, write_csv
from .granulation import NeighborhoodConfig, Partition, PositiveRegion
from .reduction import reduce, sr_test
from .state import ReductionReport

__all__ = [
    "DecisionSystem", "Schema", "load_csv", "make_system", "synth", "write_csv",
    "NeighborhoodConfig", "Partition", "PositiveRegion", "reduce", "sr_test", "ReductionReport",
]
__version__ = "0.1.0"
