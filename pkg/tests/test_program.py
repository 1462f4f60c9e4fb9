import math

import numpy as np
import pytest

from pfq.components import PS, Circuit, run_circuit, transfer_matrix
from pfq.netlist import parse_netlist, serialize_netlist
from pfq.oracle import U_FHG, phase_aligned_error
from pfq.program import (SIGNED_HADAMARD_NOTE, GateProgram, ProgramError, compile_program, random_program,
                         verify_circuit)
from pfq.state import basis_state, mode

r = 1 / math.sqrt(2)


def test_single_hadamard_program():
    c = compile_program(GateProgram(1, [("H", 1)]))
    vec = run_circuit(c, basis_state(mode(0))).register_vector(1)
    assert phase_aligned_error(vec[:, None], np.array([[r], [-r]])) < 1e-12
    assert c.description == SIGNED_HADAMARD_NOTE


def test_double_hadamard_is_identity():
    c = compile_program(GateProgram(1, [("H", 1), ("H", 1)]))
    assert phase_aligned_error(transfer_matrix(c, 1), np.eye(2)) < 1e-12


def test_three_hadamards_fill_register():
    c = compile_program(GateProgram(3, [("H", 1), ("H", 2), ("H", 3)]))
    vec = run_circuit(c, basis_state(mode(0))).register_vector(3)
    assert np.allclose(np.abs(vec), 2 ** -1.5, atol=1e-12)
    expected = np.kron(np.kron(U_FHG, U_FHG), U_FHG)[:, 0]
    assert phase_aligned_error(vec[:, None], expected[:, None]) < 1e-12


def test_empty_program_compiles_to_identity():
    c = compile_program(GateProgram(2))
    assert c.stages == () and c.description == ""
    assert verify_circuit(c, GateProgram(2)) == 0.0


@pytest.mark.parametrize("n,ops", [
    (0, []), (2, [("H", 3)]), (2, [("CNOT", 1, 1)]), (2, [("X", 1)]), (2, [("H", 1, 2)]),
    (2, [("BBPHASE", 1, 2)]), (2, [("H", 1.0)]), (2, [()]),
])
def test_invalid_programs(n, ops):
    with pytest.raises(ProgramError):
        GateProgram(n, ops)


def test_gate_names_are_case_insensitive():
    assert GateProgram(2, [("cnot", 1, 2)]).ops == (("CNOT", 1, 2),)


def test_json_round_trip():
    p = GateProgram(2, [("H", 1), ("CNOT", 1, 2), ("BBPHASE", 2, 1)])
    assert GateProgram.from_json(p.to_json()) == p
    assert GateProgram.from_json('{"n": 2, "ops": [["H",1],["CNOT",1,2]]}').ops == (("H", 1), ("CNOT", 1, 2))


@pytest.mark.parametrize("text", ["{}", "[1]", "not json", '{"n": 1, "ops": [["H", 2]]}'])
def test_bad_json(text):
    with pytest.raises(ProgramError):
        GateProgram.from_json(text)


def test_random_programs_match_oracle():
    rng = np.random.default_rng(99)
    for _ in range(25):
        p = random_program(rng)
        c = compile_program(p)
        assert verify_circuit(c, p) < 1e-10
        assert verify_circuit(parse_netlist(serialize_netlist(c)), p) < 1e-10


def test_perturbed_circuit_fails_verification():
    p = GateProgram(1, [("H", 1)])
    c = compile_program(p)
    stages = list(c.stages)
    i = next(i for i, s in enumerate(stages) if isinstance(s, PS))
    stages[i] = PS(stages[i].path, stages[i].theta + 1e-3)
    deviation = verify_circuit(Circuit(stages, c.paths, n=1), p)
    assert 1e-4 < deviation < 1e-2


def test_compile_limit():
    with pytest.raises(ProgramError):
        compile_program(GateProgram(11, [("H", 1)]))
