"""Abstract gate programs and their compilation to optical cascades."""

from __future__ import annotations

import json
from dataclasses import dataclass
import numpy as np

from .components import Circuit, concat, transfer_matrix
from .gates import ARM_1, ARM_2, build_bbphase, build_cnot, build_cz, build_fhg, build_fqpg
from .oracle import MAX_QUBITS, dense_oracle, phase_aligned_error

GATE_ARITY = {"H": 1, "Z": 1, "CZ": 2, "CNOT": 2, "BBPHASE": 2}

SIGNED_HADAMARD_NOTE = (
    "H realized as the signed Hadamard [[1,-1],[-1,-1]]/sqrt2, "
    "not the textbook [[1,1],[1,-1]]/sqrt2"
)


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class GateProgram:
    n: int
    ops: tuple[tuple, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ProgramError(f"qubit count must be a positive integer, got {self.n!r}")
        ops = []
        for op in self.ops:
            op = tuple(op)
            if not op or not isinstance(op[0], str):
                raise ProgramError(f"malformed gate {op!r}")
            name = op[0].upper()
            args = op[1:]
            if name not in GATE_ARITY:
                raise ProgramError(f"unknown gate {op[0]!r}")
            if len(args) != GATE_ARITY[name]:
                raise ProgramError(f"{name} takes {GATE_ARITY[name]} arguments, got {len(args)}")
            if not all(isinstance(a, int) and not isinstance(a, bool) for a in args):
                raise ProgramError(f"gate arguments must be integers in {op!r}")
            qubits = args[:1] if name == "BBPHASE" else args
            for q in qubits:
                if not 1 <= q <= self.n:
                    raise ProgramError(f"qubit {q} out of range 1..{self.n} in {op!r}")
            if name in ("CZ", "CNOT") and args[0] == args[1]:
                raise ProgramError(f"{name} needs distinct qubits in {op!r}")
            if name == "BBPHASE" and args[1] not in (0, 1):
                raise ProgramError(f"BBPHASE bit must be 0 or 1 in {op!r}")
            ops.append((name, *args))
        object.__setattr__(self, "ops", tuple(ops))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "ops": [list(op) for op in self.ops]})

    @classmethod
    def from_json(cls, text: str) -> "GateProgram":
        try:
            data = json.loads(text)
            return cls(int(data["n"]), tuple(tuple(op) for op in data.get("ops", [])))
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, ProgramError):
                raise
            raise ProgramError(f"malformed program JSON: {err}") from None


def gate_circuit(op: tuple, n: int, eta: float = 1.0, epsilon: float = 0.0) -> Circuit:
    name, *args = op
    if name == "H":
        return build_fhg(n, args[0], eta, epsilon)
    if name == "Z":
        return build_fqpg(n, args[0], epsilon)
    if name == "CZ":
        return build_cz(n, args[0], args[1], epsilon)
    if name == "CNOT":
        return build_cnot(n, args[0], args[1], eta, epsilon)
    if name == "BBPHASE":
        return build_bbphase(n, args[0], args[1], epsilon)
    raise ProgramError(f"unknown gate {name!r}")


def compile_program(program: GateProgram, eta: float = 1.0, epsilon: float = 0.0) -> Circuit:
    """Concatenate the gate modules in program order; register in and out on path 1."""
    if program.n > MAX_QUBITS:
        raise ProgramError(f"compilation limited to {MAX_QUBITS} qubits")
    parts = [gate_circuit(op, program.n, eta, epsilon) for op in program.ops]
    description = SIGNED_HADAMARD_NOTE if any(op[0] == "H" for op in program.ops) else ""
    if not parts:
        return Circuit((), (ARM_1, ARM_2), "program", description, program.n)
    return concat(parts, "program", description, program.n)


def verify_circuit(circuit: Circuit, program: GateProgram) -> float:
    """Max deviation between the circuit's register matrix and the oracle, up to one phase."""
    actual = transfer_matrix(circuit, program.n)
    return phase_aligned_error(actual, dense_oracle(program))


def random_program(rng: np.random.Generator, max_qubits: int = 3, max_gates: int = 6) -> GateProgram:
    n = int(rng.integers(1, max_qubits + 1))
    names = ["H", "Z", "BBPHASE"] + (["CZ", "CNOT"] if n > 1 else [])
    ops = []
    for _ in range(int(rng.integers(0, max_gates + 1))):
        name = names[int(rng.integers(len(names)))]
        if name in ("CZ", "CNOT"):
            c, t = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            ops.append((name, int(c), int(t)))
        elif name == "BBPHASE":
            ops.append((name, int(rng.integers(1, n + 1)), int(rng.integers(0, 2))))
        else:
            ops.append((name, int(rng.integers(1, n + 1))))
    return GateProgram(n, tuple(ops))
