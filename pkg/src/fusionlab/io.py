"""One JSON schema shared by every command.

ring file:        {"labels", "dual", "N": [[i, j, k, mult], ...]}
premodular file:  ring file + "dims" and "twists" (CycloNum objects, one shared conductor)
super file:       premodular file + optional "fermion" (label) and "pi0" (labels)
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .exactnum import CycloNum, common_conductor
from .fusering import FusionRing
from .premodular import PremodularData


class InputError(ValueError):
    """Unreadable or structurally malformed input (CLI exit code 2)."""


@dataclass
class Loaded:
    ring: FusionRing
    dims: Optional[list[CycloNum]] = None
    twists: Optional[list[CycloNum]] = None
    fermion: Optional[str] = None
    pi0: Optional[list[str]] = None
    raw: Optional[dict] = None

    @property
    def is_premodular(self) -> bool:
        return self.dims is not None and self.twists is not None

    def premodular(self, check: bool = True) -> PremodularData:
        if not self.is_premodular:
            raise InputError("file has no dims/twists")
        return PremodularData(self.ring, tuple(self.dims), tuple(self.twists), check=check)


def read_text(path: Union[str, Path]) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def parse(text: str) -> Loaded:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    try:
        ring = FusionRing.from_json(obj)
        dims = [CycloNum.from_json(x) for x in obj["dims"]] if "dims" in obj else None
        twists = [CycloNum.from_json(x) for x in obj["twists"]] if "twists" in obj else None
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed file: missing or bad field {exc}") from exc
    except ValueError as exc:
        raise InputError(f"malformed file: {exc}") from exc
    if any(not 0 <= d < ring.rank for d in ring.dual):
        raise InputError("dual index out of range")
    for name, vals in (("dims", dims), ("twists", twists)):
        if vals is not None and len(vals) != ring.rank:
            raise InputError(f"{name} has {len(vals)} entries for rank {ring.rank}")
    pi0 = obj.get("pi0")
    if pi0 is not None and any(p not in ring.labels for p in pi0):
        raise InputError("pi0 names an unknown label")
    fermion = obj.get("fermion")
    if fermion is not None and fermion not in ring.labels:
        raise InputError(f"unknown fermion label {fermion!r}")
    return Loaded(ring, dims, twists, fermion, pi0, obj)


def load(path: Union[str, Path]) -> Loaded:
    return parse(read_text(path))


def ring_with_dims_json(ring: FusionRing, dims) -> dict:
    out = ring.to_json()
    M = common_conductor(dims)
    out["dims"] = [d.embed(M).to_json() for d in dims]
    return out


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write(obj: dict, path: Union[str, Path, None]) -> None:
    text = dumps(obj)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
