"""Model decoding with mandatory re-verification against the target."""

from __future__ import annotations

from typing import Sequence

from ..circuits import Circuit
from ..errors import VerificationError
from ..somat import eval_product
from .cnf import VarMap


def decode(model: Sequence[int], varmap: VarMap) -> Circuit:
    """Read the circuit off the true selectors and verify it exactly.

    Raises :class:`VerificationError` when the decoded product does not
    reproduce the target (tampered or inconsistent model).
    """
    if varmap.trivial == "sat-empty":
        return Circuit.empty(varmap.n, provenance="sat-decode")
    if varmap.trivial == "unsat":
        raise VerificationError("trivially unsatisfiable instance has no model")
    true_vars = {lit for lit in model if lit > 0}
    layers = []
    for i in range(1, varmap.depth + 1):
        layer = [
            varmap.generators[j]
            for j in range(len(varmap.generators))
            if varmap.selectors[(i, j)] in true_vars
        ]
        if not layer:
            raise VerificationError(f"layer {i} decodes empty")
        layers.append(layer)
    circuit = Circuit(varmap.n, layers, provenance="sat-decode")
    _verify(circuit, varmap)
    return circuit


def _verify(circuit: Circuit, varmap: VarMap) -> None:
    product = eval_product(varmap.n, circuit.gates())
    if varmap.mode == "unitary":
        if product != varmap.target:
            raise VerificationError("decoded circuit does not reproduce the target")
        return
    # state preparation: the product must map the vacuum covariance onto gamma
    gamma = product.matmul(varmap.gamma0).matmul(product.transpose())
    if gamma != varmap.target:
        raise VerificationError("decoded circuit does not prepare the covariance")
