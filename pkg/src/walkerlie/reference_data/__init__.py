"""Transcribed reference data.

The commutator table, adjoint matrices, flows and Einstein systems are only
ever compared against, never used to compute.  ``reductions.json`` also holds
the invariant catalog that the reduction code verifies before using.
"""

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    with resources.files(__name__).joinpath(f"{name}.json").open() as fh:
        return json.load(fh)
