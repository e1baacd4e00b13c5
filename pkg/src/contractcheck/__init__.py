"""Certify and falsify contraction conditions on metric spaces.

Covers Banach, F-, (phi,F)-, and (E,F)-contractions, the finite-space
Meir-Keeler audit, the jump-driven F-contraction counterexample family
with its Meir-Keeler falsification witnesses, Picard iteration, and a
Volterra integral-equation demo.
"""

__version__ = "0.1.0"

from .auxfn import AuxFn, parse_fn
from .family import (
    CounterexampleFamily,
    MKWitness,
    build_family,
    enumerate_points,
    mk_falsification_witness,
    verify_family_F_contraction,
)
from .metric import FiniteMetricSpace, PicardTrace, SelfMap
from .verdict import Verdict, Witness

__all__ = [
    "AuxFn",
    "CounterexampleFamily",
    "FiniteMetricSpace",
    "MKWitness",
    "PicardTrace",
    "SelfMap",
    "Verdict",
    "Witness",
    "build_family",
    "enumerate_points",
    "mk_falsification_witness",
    "parse_fn",
    "verify_family_F_contraction",
    "__version__",
]
