"""Layered circuits over the discrete matchgate gate set.

A circuit is an ordered list of layers; within a layer no qubit is touched
by two gates, so the gates of one layer commute and may execute in parallel.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

from .errors import DimensionError, RangeError
from .somat import GateKind, GeneratorId, TransferMatrix, eval_product


class Circuit:
    __slots__ = ("n", "layers", "provenance")

    def __init__(
        self,
        n: int,
        layers: Sequence[Sequence[GeneratorId]],
        provenance: str = "",
    ) -> None:
        self.n = n
        packed = []
        for idx, layer in enumerate(layers):
            seen: set[int] = set()
            ordered = sorted(layer, key=lambda g: (g.plane(), g.kind.value))
            for gid in ordered:
                gid.validate(n)
                for q in gid.qubits():
                    if q in seen:
                        raise RangeError(f"layer {idx} touches qubit {q} twice")
                    seen.add(q)
            packed.append(tuple(ordered))
        self.layers = tuple(packed)
        self.provenance = provenance

    # -- construction -----------------------------------------------------

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[GeneratorId], provenance: str = "") -> "Circuit":
        """Pack a flat time-ordered gate list into ASAP layers.

        A gate only ever moves past gates with disjoint qubit support, which
        commute, so the packed circuit realizes the same product.
        """
        layers: list[list[GeneratorId]] = []
        frontier = [0] * (n + 1)  # 1-based qubits
        for gid in gates:
            gid.validate(n)
            level = max(frontier[q] for q in gid.qubits())
            if level == len(layers):
                layers.append([])
            layers[level].append(gid)
            for q in gid.qubits():
                frontier[q] = level + 1
        return cls(n, layers, provenance)

    @classmethod
    def empty(cls, n: int, provenance: str = "") -> "Circuit":
        return cls(n, [], provenance)

    # -- metrics ---------------------------------------------------------

    def gates(self) -> list[GeneratorId]:
        """Flat gate list in time order."""
        return [gid for layer in self.layers for gid in layer]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def t_count(self) -> int:
        return sum(1 for g in self.gates() if g.is_t_kind())

    @property
    def clifford_count(self) -> int:
        return sum(1 for g in self.gates() if not g.is_t_kind())

    @property
    def t_depth(self) -> int:
        return sum(1 for layer in self.layers if any(g.is_t_kind() for g in layer))

    def product(self) -> TransferMatrix:
        return eval_product(self.n, self.gates())

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "layers": [
                [{"kind": g.kind.value, "q": g.site} for g in layer] for layer in self.layers
            ],
            "t_count": self.t_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, data: dict, provenance: str = "") -> "Circuit":
        try:
            n = int(data["n"])
            raw_layers = data["layers"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionError(f"malformed circuit JSON: {exc}") from exc
        layers = []
        for raw in raw_layers:
            layer = []
            for g in raw:
                try:
                    kind = GateKind(g["kind"])
                    site = int(g["q"])
                except (KeyError, ValueError) as exc:
                    raise DimensionError(f"malformed gate entry: {g}") from exc
                layer.append(GeneratorId(kind, site))
            layers.append(layer)
        circ = cls(n, layers, provenance)
        declared = data.get("t_count")
        if declared is not None and declared != circ.t_count:
            raise DimensionError("circuit JSON t_count does not match layers")
        return circ

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n == other.n and self.layers == other.layers

    def __repr__(self) -> str:
        return (
            f"Circuit(n={self.n}, depth={self.depth}, "
            f"t_count={self.t_count}, t_depth={self.t_depth})"
        )
