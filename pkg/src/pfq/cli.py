"""``pfq`` command line: run netlists, sweep the bench circuits, verify programs.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import comb, detect
from .components import CircuitError, run_circuit
from .gates import DETECTOR_PATH, build_dj_circuit, build_experimental_fhg, build_experimental_fqpg
from .netlist import CONSTANT_KEYS, NetlistError, parse_netlist, serialize_netlist
from .program import GateProgram, ProgramError, compile_program, verify_circuit
from .state import Frequency, Mode, PhotonState, PhysicalConstants

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_TOL = 1e-10
SWEEP_TOL = 1e-9


class UsageError(Exception):
    pass


def _parse_consts(items) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in CONSTANT_KEYS:
            raise UsageError(f"--const expects key=value with key in {', '.join(CONSTANT_KEYS)}, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"--const {key}: not a number: {value!r}") from None
    return out


def _constants(args, netlist_overrides=()) -> PhysicalConstants:
    values = dict(netlist_overrides)
    values.update(_parse_consts(args.const))
    try:
        return PhysicalConstants.ideal(**values)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _emit(args, text: str, summary: str | None = None):
    """Data to --out (or stdout); the summary then goes to the other stream."""
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        if summary:
            sys.stdout.write(summary + "\n")
    else:
        sys.stdout.write(text)
        if summary:
            sys.stderr.write(summary + "\n")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _input_state(spec: str) -> PhotonState:
    if spec.endswith(".json"):
        return PhotonState.from_json(_read(spec).decode("utf-8"))
    parts = spec.split(",")
    if len(parts) != 4:
        raise UsageError(f"--input expects k,m,path,pol or a .json state file, got {spec!r}")
    k, m, path, pol = parts
    try:
        label = int(path) if path.lstrip("+-").isdigit() else path
        return PhotonState({Mode(Frequency(int(k), int(m)), label, pol.upper()): 1.0})
    except ValueError as err:
        raise UsageError(f"bad --input {spec!r}: {err}") from None


def _summary(record: detect.DetectionRecord) -> dict:
    return {key: value for key, value in record.to_dict().items() if key != "samples"}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def cmd_run(args) -> int:
    circuit = parse_netlist(_read(args.netlist))
    constants = _constants(args, circuit.constants)
    state = _input_state(args.input)
    final = run_circuit(circuit, state)
    detector = args.detector
    if detector is None:
        detector = DETECTOR_PATH
    elif detector.lstrip("+-").isdigit():
        detector = int(detector)
    record = detect.time_trace(final, detector, constants)
    counts = detect.poisson_sample(record, args.counts, args.seed) if args.counts else None
    summary = _summary(record)
    if args.format == "json":
        payload = record.to_dict()
        payload["state"] = final.to_dict()
        if counts is not None:
            payload["counts"] = counts
        _emit(args, _dumps(payload), json.dumps(summary, sort_keys=True))
        return EXIT_OK
    if counts is None:
        text = record.to_csv()
    else:
        rows = ["t,intensity,counts"] + [
            f"{t!r},{i!r},{c}" for t, i, c in zip(record.x.tolist(), record.intensity.tolist(), counts)]
        text = "\n".join(rows) + "\n"
    summary["state"] = final.to_dict()
    _emit(args, text, json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _grid(args) -> np.ndarray:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    return args.start + (args.stop - args.start) * np.arange(args.steps) / args.steps


def _bench_record(circuit, constants) -> detect.DetectionRecord:
    state = PhotonState({Mode(Frequency(0), DETECTOR_PATH): 1.0})
    return detect.time_trace(run_circuit(circuit, state), DETECTOR_PATH, constants)


def sweep_theta(thetas, constants: PhysicalConstants) -> tuple[list[tuple[float, float]], dict]:
    """Signed beat amplitude of the Hadamard bench per theta, plus a cosine fit."""
    eta = constants.eta_fs
    reference = _bench_record(build_experimental_fhg(0.0, eta), constants)
    cal = detect.calibrate(reference, constants.delta_num, form="sin")
    rows = []
    for theta in thetas:
        _, amp, _ = cal.demodulate(_bench_record(build_experimental_fhg(float(theta), eta), constants))
        rows.append((float(theta), amp))
    th = np.array([r[0] for r in rows])
    amps = np.array([r[1] for r in rows])
    design = np.column_stack([np.cos(th), np.sin(th), np.ones_like(th)])
    (a, b, c), *_ = np.linalg.lstsq(design, amps, rcond=None)
    fitted = design @ np.array([a, b, c])
    fit = {
        "amplitude": float(math.hypot(a, b)),
        "phase": float(math.atan2(b, a)),
        "offset": float(c),
        "max_fit_residual": float(np.max(np.abs(amps - fitted))),
        "max_residual_quarter_cos": float(np.max(np.abs(amps - 0.25 * np.cos(th)))),
        "time_origin": cal.time_origin,
    }
    return rows, fit


def sweep_phi(phis, constants: PhysicalConstants) -> tuple[list[tuple[float, float, float]], dict]:
    """Beat amplitude and calibrated beat phase of the phase-gate bench per phi."""
    eta = constants.eta_fs
    reference = _bench_record(build_experimental_fqpg(0.0, eta), constants)
    cal = detect.calibrate(reference, constants.delta_num, form="cos")
    rows = []
    for phi in phis:
        record = _bench_record(build_experimental_fqpg(float(phi), eta), constants)
        _, amp, _ = detect.demodulate(record, constants.delta_num)
        _, _, phase = cal.demodulate(record)
        rows.append((float(phi), amp, phase))
    amps = np.array([r[1] for r in rows])
    phase_err = [abs(detect.wrap_phase(r[2] - r[0])) for r in rows]
    summary = {
        "amplitude_spread": float(amps.max() - amps.min()),
        "mean_amplitude": float(amps.mean()),
        "max_phase_error": float(max(phase_err)),
        "time_origin": cal.time_origin,
    }
    return rows, summary


def cmd_sweep_theta(args) -> int:
    constants = _constants(args)
    rows, fit = sweep_theta(_grid(args), constants)
    if args.format == "json":
        text = _dumps({"rows": [list(r) for r in rows], "fit": fit})
    else:
        text = "\n".join(["theta,amplitude"] + [f"{t!r},{a!r}" for t, a in rows]) + "\n"
    _emit(args, text, json.dumps(fit, sort_keys=True))
    return EXIT_OK if fit["max_fit_residual"] < SWEEP_TOL else EXIT_FAIL


def cmd_sweep_phi(args) -> int:
    constants = _constants(args)
    rows, summary = sweep_phi(_grid(args), constants)
    if args.format == "json":
        text = _dumps({"rows": [list(r) for r in rows], "summary": summary})
    else:
        text = "\n".join(["phi,amplitude,phase"] + [f"{p!r},{a!r},{ph!r}" for p, a, ph in rows]) + "\n"
    _emit(args, text, json.dumps(summary, sort_keys=True))
    ok = summary["amplitude_spread"] < SWEEP_TOL and summary["max_phase_error"] < SWEEP_TOL
    return EXIT_OK if ok else EXIT_FAIL


def dj_outcome(bb1: int, bb2: int, eta: float = 1.0) -> tuple[str, detect.DetectionRecord]:
    state = PhotonState({Mode(Frequency(0), 1): 1.0})
    final = run_circuit(build_dj_circuit(bb1, bb2, eta), state)
    record = detect.fringe_pattern(final, 1, 2)
    label = detect.classify_fringe(record)
    verdict = {detect.FRINGE: "CONSTANT", detect.ANTIFRINGE: "BALANCED"}.get(label, label)
    return verdict, record


def cmd_dj(args) -> int:
    constants = _constants(args)
    verdict, record = dj_outcome(args.bb1, args.bb2, constants.eta_fs)
    text = record.to_json() + "\n" if args.format == "json" else record.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    sys.stdout.write(verdict + "\n")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        bandmap = comb.make_bandmap(args.n, args.qubit, args.role)
        rows = comb.reflectance_spectrum(bandmap, args.edge_width, args.epsilon, args.samples)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.format == "json":
        text = _dumps({"omega_over_dw": rows[:, 0].tolist(), "R": rows[:, 1].tolist(),
                       "bands": bandmap.table()})
    else:
        text = comb.spectrum_csv(rows)
    _emit(args, text)
    return EXIT_OK


def _program(path: str) -> GateProgram:
    try:
        return GateProgram.from_json(_read(path).decode("utf-8"))
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not UTF-8") from None


def cmd_verify(args) -> int:
    program = _program(args.program)
    constants = _constants(args)
    if args.netlist:
        circuit = parse_netlist(_read(args.netlist))
    else:
        circuit = compile_program(program, constants.eta_fs, constants.epsilon_cf)
    deviation = verify_circuit(circuit, program)
    verdict = "PASS" if deviation < VERIFY_TOL else "FAIL"
    sys.stdout.write(f"max_deviation={deviation!r} {verdict}\n")
    return EXIT_OK if verdict == "PASS" else EXIT_FAIL


def cmd_compile(args) -> int:
    constants = _constants(args)
    eta = constants.eta_fs
    if args.figure == "experimental-fhg":
        circuit = build_experimental_fhg(args.theta, eta)
    elif args.figure == "experimental-fqpg":
        circuit = build_experimental_fqpg(args.phi, eta)
    elif args.figure == "dj":
        circuit = build_dj_circuit(args.bits[0], args.bits[1], eta)
    elif args.program:
        circuit = compile_program(_program(args.program), eta, constants.epsilon_cf)
    else:
        raise UsageError("compile needs a program JSON file or --figure")
    _emit(args, serialize_netlist(circuit))
    return EXIT_OK


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected 0 or 1, got {text!r}")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--const", action="append", metavar="KEY=VALUE",
                        help=f"override a physical constant ({', '.join(CONSTANT_KEYS)})")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--start", type=float, default=0.0)
    sweep.add_argument("--stop", type=float, default=2 * math.pi)
    sweep.add_argument("--steps", type=int, default=32)

    parser = argparse.ArgumentParser(prog="pfq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a netlist and record the detector trace")
    p.add_argument("netlist")
    p.add_argument("--input", default="0,0,1,H", help="k,m,path,pol or a .json state file")
    p.add_argument("--detector", help="detector path label (default 1)")
    p.add_argument("--counts", type=float, help="also draw Poisson counts at this mean per unit intensity")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-theta", parents=[common, sweep], help="beat amplitude vs theta (Hadamard bench)")
    p.set_defaults(func=cmd_sweep_theta)

    p = sub.add_parser("sweep-phi", parents=[common, sweep], help="beat amplitude and phase vs phi (phase-gate bench)")
    p.set_defaults(func=cmd_sweep_phi)

    p = sub.add_parser("dj", parents=[common], help="Deutsch-Jozsa fringe read-out")
    p.add_argument("bb1", type=_bit)
    p.add_argument("bb2", type=_bit)
    p.set_defaults(func=cmd_dj)

    p = sub.add_parser("spectrum", parents=[common], help="comb-filter reflectance spectrum")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--qubit", type=int, default=1)
    p.add_argument("--role", choices=("cf1", "cf2", "CF1", "CF2"), default="cf1")
    p.add_argument("--edge-width", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=801)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="check a compiled program against the dense oracle")
    p.add_argument("program")
    p.add_argument("--netlist", help="verify this netlist instead of compiling the program")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compile", parents=[common], help="emit a netlist for a program or a bench circuit")
    p.add_argument("program", nargs="?")
    p.add_argument("--figure", choices=("experimental-fhg", "experimental-fqpg", "dj"))
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--bits", type=_bit, nargs=2, default=(0, 0))
    p.set_defaults(func=cmd_compile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NetlistError as err:
        sys.stderr.write(f"{getattr(args, 'netlist', None) or 'netlist'}:{err}\n")
    except (UsageError, ProgramError, CircuitError, detect.SamplingError, detect.DetectionError,
            detect.ClassificationError, ValueError) as err:
        sys.stderr.write(f"pfq: error: {err}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
