"""domkit: finite-scale domain theory workbench.

Finite posets stand in for dcpos; embedding-projection pairs, bilimits of
directed diagrams (total, and partial via the lift monad), presheaf-internal
reruns over a finite base, and a recursive domain equation solver, all with
exhaustive verification oracles.
"""

from domkit.kernel import BACKEND
from domkit.poset import FinPoset, MonotoneMap, check_poset
from domkit.ep import EpPair, make_ep
from domkit.lift import LiftPoset, StrictEpPair, StrictMap, lift_poset

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EpPair",
    "FinPoset",
    "LiftPoset",
    "MonotoneMap",
    "StrictEpPair",
    "StrictMap",
    "check_poset",
    "lift_poset",
    "make_ep",
    "__version__",
]
