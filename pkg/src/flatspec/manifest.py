"""JSON manifests: named group definitions plus optional jobs.

    {
      "version": 1,
      "groups": {
        "klein-bottle": {
          "n": 2,
          "basis": [["1", "0"], ["0", "1"]],
          "generators": [
            {"coords": "lattice", "matrix": [[1, 0], [0, -1]], "translation": ["1/2", "0"]}
          ]
        }
      },
      "jobs": [{"command": "spectrum", "group": "klein-bottle", "tau": "0;+1", "nu_max": "5"}]
    }

``basis`` lists the lattice basis vectors. A generator (B, b) acts as
x -> B(x + b); ``coords`` says whether B and b are written in lattice or
ambient coordinates. Rationals are strings "p/q" (integers are accepted).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .bieberbach import BieberbachGroup, from_generators, presets

VERSION = 1


class ManifestError(ValueError):
    pass


@dataclass
class Manifest:
    groups: dict  # name -> BieberbachGroup
    jobs: list = field(default_factory=list)
    sha256: str = ""
    version: int = VERSION

    def group(self, name: str) -> BieberbachGroup:
        try:
            return self.groups[name]
        except KeyError:
            raise ManifestError(f"unknown group {name!r}; known: {', '.join(self.groups)}") from None


def _canonical_bytes(data: dict) -> bytes:
    return json.dumps(data, sort_keys=True, separators=(",", ":")).encode()


def group_from_json(name: str, entry: dict) -> BieberbachGroup:
    try:
        n = int(entry["n"])
        basis = entry["basis"]
        if len(basis) != n:
            raise ManifestError(f"group {name!r}: expected {n} basis vectors")
        gens = []
        coords = None
        for g in entry.get("generators", []):
            c = g.get("coords", "lattice")
            if coords not in (None, c):
                raise ManifestError(f"group {name!r}: mixed coordinate flags")
            coords = c
            gens.append((g["matrix"], g["translation"]))
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"group {name!r}: malformed entry ({exc})") from None
    return from_generators(basis, gens, coords=coords or "lattice", name=name)


def parse(data: dict, sha256: str = "") -> Manifest:
    version = data.get("version", VERSION)
    if version != VERSION:
        raise ManifestError(f"unsupported manifest version {version!r}")
    groups = {name: group_from_json(name, entry) for name, entry in data.get("groups", {}).items()}
    jobs = list(data.get("jobs", []))
    for job in jobs:
        for key in ("group", "first", "second"):
            if key in job and job[key] not in groups:
                raise ManifestError(f"job refers to unknown group {job[key]!r}")
    return Manifest(groups, jobs, sha256 or hashlib.sha256(_canonical_bytes(data)).hexdigest(), version)


def load(path) -> Manifest:
    raw = Path(path).read_bytes()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON ({exc})") from None
    return parse(data, hashlib.sha256(raw).hexdigest())


def to_json(groups: dict, jobs: list | None = None) -> dict:
    out = {"version": VERSION, "groups": {name: g.to_json() for name, g in groups.items()}}
    if jobs:
        out["jobs"] = jobs
    return out


def builtin() -> Manifest:
    """The preset corpus as a manifest; its hash covers the canonical JSON."""
    data = to_json(presets())
    return Manifest(dict(presets()), [], hashlib.sha256(_canonical_bytes(data)).hexdigest())
