"""One-photon frequency-basis optical quantum computing simulator."""

from .comb import BandMap, make_bandmap, reflectance_spectrum
from .components import (BB, CF, FS, HWP, NPBS, PBS, PS, Circuit, CircuitError,
                         ConfigurationError, Mirror, apply, concat, run_circuit, transfer_matrix)
from .detect import (Calibration, DetectionRecord, calibrate, classify_fringe, demodulate,
                     fringe_pattern, poisson_sample, time_trace)
from .gates import (build_bbphase, build_cnot, build_cz, build_dj_circuit, build_experimental_fhg,
                    build_experimental_fqpg, build_fhg, build_fqpg)
from .netlist import NetlistError, parse_netlist, serialize_netlist
from .oracle import U_FHG, dense_oracle
from .program import GateProgram, compile_program
from .state import (Frequency, Mode, PhotonState, PhysicalConstants, basis_state, decode_bits,
                    encode_bits, global_phase_equal, inner, mode, norm, superpose)

__version__ = "0.1.0"

__all__ = [
    "BB",
    "BandMap",
    "CF",
    "Calibration",
    "Circuit",
    "CircuitError",
    "ConfigurationError",
    "DetectionRecord",
    "FS",
    "Frequency",
    "GateProgram",
    "HWP",
    "Mirror",
    "Mode",
    "NPBS",
    "NetlistError",
    "PBS",
    "PS",
    "PhotonState",
    "PhysicalConstants",
    "U_FHG",
    "apply",
    "basis_state",
    "build_bbphase",
    "build_cnot",
    "build_cz",
    "build_dj_circuit",
    "build_experimental_fhg",
    "build_experimental_fqpg",
    "build_fhg",
    "build_fqpg",
    "calibrate",
    "classify_fringe",
    "compile_program",
    "concat",
    "decode_bits",
    "demodulate",
    "dense_oracle",
    "encode_bits",
    "fringe_pattern",
    "global_phase_equal",
    "inner",
    "make_bandmap",
    "mode",
    "norm",
    "parse_netlist",
    "poisson_sample",
    "reflectance_spectrum",
    "run_circuit",
    "serialize_netlist",
    "superpose",
    "time_trace",
    "transfer_matrix",
]
