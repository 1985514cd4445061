"""m-PDVRP solver: MCTS task assignment over a greedy routing heuristic,
with warm-restart replanning of perturbed problems."""

from ._mpdvrp import *  # noqa: F401,F403
from ._mpdvrp import __doc__  # noqa: F401

__version__ = "0.1.0"
