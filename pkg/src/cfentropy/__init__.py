"""Topological entropy of the (a, b)-continued-fraction boundary maps.

Exact rational and Q(sqrt 5) arithmetic where it matters: Markov partitions
and transition matrices, lap counting, Parry's conjugacy for the Artin and
Hurwitz maps, and the recoding between their itineraries.
"""

from .cfmap import OutOfParameterSpace, Params, make_fab, validate_params
from .explorer import EntropyRecord, SweepSpec, entropy_record, preset, run_sweep
from .lapcount import entropy_estimate, lap_counts
from .markov import CycleWitness, cycle_witness, markov_entropy
from .projective import CutPoint, MoebiusMap, ProjPoint

__all__ = [
    "CutPoint",
    "CycleWitness",
    "EntropyRecord",
    "MoebiusMap",
    "OutOfParameterSpace",
    "Params",
    "ProjPoint",
    "SweepSpec",
    "cycle_witness",
    "entropy_estimate",
    "entropy_record",
    "lap_counts",
    "make_fab",
    "markov_entropy",
    "preset",
    "run_sweep",
    "validate_params",
]
