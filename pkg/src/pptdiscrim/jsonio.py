"""JSON encodings of states and instances.

Pure state: ``{"factors": [...], "vector": <matrix with cols = 1>}``.
Density operator: ``{"factors": [...], "matrix": <matrix>}``.
Instance: ``{"states": [<state>, ...]}``.
Matrices use the shared ``{"rows", "cols", "re", "im"}`` layout.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidState
from .space import BipartiteSpace
from .states import DensityOperator, DiscriminationInstance, PureState


def state_to_json(state: PureState | DensityOperator) -> dict:
    if isinstance(state, PureState):
        return {"factors": state.space.to_json(), "vector": linalg.matrix_to_json(state.vector.reshape(-1, 1))}
    return {"factors": state.space.to_json(), "matrix": linalg.matrix_to_json(state.matrix)}


def state_from_json(data: Mapping) -> PureState | DensityOperator:
    if not isinstance(data, Mapping) or "factors" not in data:
        raise InvalidState("a state needs a 'factors' list")
    space = BipartiteSpace.from_json(data["factors"])
    if "vector" in data:
        vec = linalg.matrix_from_json(data["vector"])
        if vec.shape[1] != 1:
            raise DimensionMismatch(f"a state vector must have one column, got {vec.shape[1]}")
        return PureState(vec[:, 0], space)
    if "matrix" in data:
        return DensityOperator(linalg.matrix_from_json(data["matrix"]), space)
    raise InvalidState("a state needs a 'vector' or a 'matrix'")


def instance_to_json(instance: DiscriminationInstance) -> dict:
    return {"states": [state_to_json(s) for s in instance.states]}


def instance_from_json(data: Mapping) -> DiscriminationInstance:
    if not isinstance(data, Mapping) or "states" not in data:
        raise InvalidState("an instance needs a 'states' list")
    return DiscriminationInstance(tuple(state_from_json(s) for s in data["states"]))


def load(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump(obj, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot encode {type(o).__name__}")


__all__ = [
    "state_to_json",
    "state_from_json",
    "instance_to_json",
    "instance_from_json",
    "load",
    "dump",
]
