"""mgsynth: exact, approximate, and SAT-based synthesis of matchgate circuits.

Targets are 2n x 2n special orthogonal matrices describing a matchgate's
action on the Majorana sector; circuits are words over the discrete gate set
{T, Tdg, S, Sdg, Rxx(+-pi/2)} acting on a line of qubits.
"""

from .circuits import Circuit
from .exact import SynthesisReport, gate_count_bounds, synthesize, t_depth_lower_bound
from .ring import Residue, RingScalar
from .somat import GateKind, GeneratorId, TransferMatrix, eval_product, generator

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "GateKind",
    "GeneratorId",
    "Residue",
    "RingScalar",
    "SynthesisReport",
    "TransferMatrix",
    "eval_product",
    "gate_count_bounds",
    "generator",
    "synthesize",
    "t_depth_lower_bound",
    "__version__",
]
