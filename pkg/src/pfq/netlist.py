"""Line-oriented netlist format (``.pfq``) for optical circuits.

One statement per line, ``#`` starts a comment::

    circuit fhg_q1
    describe "frequency Hadamard"
    qubits 1
    const eta_fs=0.85
    paths 1 2
    cf 1 2 1 1 cf1 0
    fs 1 1 0 1
    npbs 1 2
    ps 2 3.1415926535897931
    mirror 1 2

Component statements::

    npbs <pA> <pB>              pbs <pA> <pB>
    fs <path> <dk> <dm> <eta> [leak]
    ps <path> <radians>         hwp <path>
    cf <pA> <pB> <n> <qubits> <role> <epsilon>    (qubits: "2" or "1,3")
    bb <path> <bit>             mirror <pA> [<pB>]
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

from .comb import BandMap, make_bandmap
from .components import BB, CF, FS, HWP, NPBS, PBS, PS, Circuit, CircuitError, Mirror
from .state import PathLabel

MAX_COMB_QUBITS = 30
MAX_TOKEN = 64

CONSTANT_KEYS = ("delta_omega_num", "delta_num", "eta_fs", "epsilon_cf")

# error codes, one per failure class
UNKNOWN_KEYWORD = "unknown-keyword"
UNDECLARED_PATH = "undeclared-path"
ARITY = "arity"
PARAM_TYPE = "param-type"
DUPLICATE_PATH = "duplicate-path"
IDENTICAL_PORTS = "identical-ports"
VALUE_RANGE = "value-range"
ENCODING = "encoding"
DUPLICATE_HEADER = "duplicate-header"

_INT = re.compile(r"[+-]?[0-9]+\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.:\-]*\Z")
_TOKEN = re.compile(r"\S+")


class NetlistError(ValueError):
    def __init__(self, code: str, line: int, column: int, message: str):
        self.code = code
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: error[{code}]: {message}")


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _int(tok: _Token, what: str) -> int:
    if len(tok.text) > MAX_TOKEN or not _INT.match(tok.text):
        raise NetlistError(PARAM_TYPE, tok.line, tok.column, f"{what} must be an integer, got {tok.text!r}")
    return int(tok.text)


def _real(tok: _Token, what: str) -> float:
    try:
        if len(tok.text) > MAX_TOKEN:
            raise ValueError
        value = float(tok.text)
    except ValueError:
        raise NetlistError(PARAM_TYPE, tok.line, tok.column, f"{what} must be a real number, got {tok.text!r}") from None
    if not math.isfinite(value):
        raise NetlistError(PARAM_TYPE, tok.line, tok.column, f"{what} must be finite, got {tok.text!r}")
    return value


def _path_token(tok: _Token) -> PathLabel:
    if len(tok.text) <= MAX_TOKEN and _INT.match(tok.text):
        return int(tok.text)
    if len(tok.text) <= MAX_TOKEN and _NAME.match(tok.text):
        return tok.text
    raise NetlistError(PARAM_TYPE, tok.line, tok.column, f"bad path label {tok.text!r}")


# keyword -> (min args, max args)
_ARITY = {
    "npbs": (2, 2), "pbs": (2, 2), "fs": (4, 5), "ps": (2, 2), "hwp": (1, 1),
    "cf": (6, 6), "bb": (2, 2), "mirror": (1, 2),
    "paths": (1, None), "circuit": (1, 1), "qubits": (1, 1), "const": (1, 1),
}


class _Parser:
    def __init__(self):
        self.paths: list[PathLabel] = []
        self.stages: list = []
        self.name: str | None = None
        self.description: str | None = None
        self.n: int | None = None
        self.constants: dict[str, float] = {}
        self.seen_header: set[str] = set()

    def path(self, tok: _Token) -> PathLabel:
        label = _path_token(tok)
        if label not in self.paths:
            raise NetlistError(UNDECLARED_PATH, tok.line, tok.column, f"path {label!r} is not declared")
        return label

    def ports(self, a: _Token, b: _Token) -> tuple[PathLabel, PathLabel]:
        pa, pb = self.path(a), self.path(b)
        if pa == pb:
            raise NetlistError(IDENTICAL_PORTS, b.line, b.column, f"both ports are path {pa!r}")
        return pa, pb

    def header_once(self, kw: _Token):
        if kw.text in self.seen_header:
            raise NetlistError(DUPLICATE_HEADER, kw.line, kw.column, f"second '{kw.text}' statement")
        self.seen_header.add(kw.text)

    def statement(self, kw: _Token, args: list[_Token], rest: str):
        word = kw.text
        if word == "describe":
            self.header_once(kw)
            try:
                text = json.loads(rest)
            except (ValueError, RecursionError):
                raise NetlistError(PARAM_TYPE, kw.line, kw.column, "description must be a JSON string") from None
            if not isinstance(text, str):
                raise NetlistError(PARAM_TYPE, kw.line, kw.column, "description must be a JSON string")
            self.description = text
            return
        if word not in _ARITY:
            raise NetlistError(UNKNOWN_KEYWORD, kw.line, kw.column, f"unknown statement {word!r}")
        lo, hi = _ARITY[word]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if lo == hi else f"{lo}..{hi if hi is not None else ''}"
            raise NetlistError(ARITY, kw.line, kw.column, f"'{word}' takes {want} arguments, got {len(args)}")
        getattr(self, "st_" + word)(kw, args)

    def st_circuit(self, kw, args):
        self.header_once(kw)
        self.name = args[0].text

    def st_qubits(self, kw, args):
        self.header_once(kw)
        n = _int(args[0], "qubit count")
        if not 1 <= n <= MAX_COMB_QUBITS:
            raise NetlistError(VALUE_RANGE, args[0].line, args[0].column, f"qubit count {n} out of range")
        self.n = n

    def st_const(self, kw, args):
        tok = args[0]
        key, sep, value = tok.text.partition("=")
        if not sep or key not in CONSTANT_KEYS:
            raise NetlistError(PARAM_TYPE, tok.line, tok.column,
                               f"expected key=value with key in {', '.join(CONSTANT_KEYS)}")
        if key in self.constants:
            raise NetlistError(DUPLICATE_HEADER, tok.line, tok.column, f"constant {key} set twice")
        self.constants[key] = _real(_Token(value, tok.line, tok.column + len(key) + 1), key)

    def st_paths(self, kw, args):
        for tok in args:
            label = _path_token(tok)
            if label in self.paths:
                raise NetlistError(DUPLICATE_PATH, tok.line, tok.column, f"path {label!r} declared twice")
            self.paths.append(label)

    def st_npbs(self, kw, args):
        self.stages.append(NPBS(*self.ports(*args)))

    def st_pbs(self, kw, args):
        self.stages.append(PBS(*self.ports(*args)))

    def st_fs(self, kw, args):
        path = self.path(args[0])
        dk, dm = _int(args[1], "dk"), _int(args[2], "dm")
        eta = _real(args[3], "eta")
        if not 0 < eta <= 1:
            raise NetlistError(VALUE_RANGE, args[3].line, args[3].column, f"eta {eta} outside (0, 1]")
        leak = False
        if len(args) == 5:
            if args[4].text != "leak":
                raise NetlistError(PARAM_TYPE, args[4].line, args[4].column, "optional fifth argument must be 'leak'")
            leak = True
        self.stages.append(FS(path, dk, dm, eta, leak))

    def st_ps(self, kw, args):
        self.stages.append(PS(self.path(args[0]), _real(args[1], "phase")))

    def st_hwp(self, kw, args):
        self.stages.append(HWP(self.path(args[0])))

    def st_bb(self, kw, args):
        path = self.path(args[0])
        bit = _int(args[1], "bit")
        if bit not in (0, 1):
            raise NetlistError(VALUE_RANGE, args[1].line, args[1].column, f"bit must be 0 or 1, got {bit}")
        self.stages.append(BB(path, bit))

    def st_mirror(self, kw, args):
        if len(args) == 1:
            self.stages.append(Mirror(self.path(args[0])))
        else:
            self.stages.append(Mirror(*self.ports(*args)))

    def st_cf(self, kw, args):
        pa, pb = self.ports(args[0], args[1])
        n = _int(args[2], "qubit count")
        if not 1 <= n <= MAX_COMB_QUBITS:
            raise NetlistError(VALUE_RANGE, args[2].line, args[2].column, f"qubit count {n} out of range")
        parts = args[3].text.split(",")
        qubits = []
        for part in parts:
            q = _int(_Token(part, args[3].line, args[3].column), "qubit")
            if not 1 <= q <= n or q in qubits:
                raise NetlistError(VALUE_RANGE, args[3].line, args[3].column, f"bad qubit selection {args[3].text!r}")
            qubits.append(q)
        role = args[4].text.upper()
        if role not in ("CF1", "CF2"):
            raise NetlistError(PARAM_TYPE, args[4].line, args[4].column, f"role must be cf1 or cf2, got {args[4].text!r}")
        eps = _real(args[5], "epsilon")
        if not 0 <= eps < 1:
            raise NetlistError(VALUE_RANGE, args[5].line, args[5].column, f"epsilon {eps} outside [0, 1)")
        self.stages.append(CF(pa, pb, make_bandmap(n, qubits, role), eps))

    def circuit(self) -> Circuit:
        return Circuit(tuple(self.stages), tuple(self.paths), self.name or "",
                       self.description or "", self.n, tuple(sorted(self.constants.items())))


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as err:
        before = data[: err.start]
        line = before.count(b"\n") + 1
        column = err.start - (before.rfind(b"\n") + 1) + 1
        raise NetlistError(ENCODING, line, column, "input is not valid UTF-8") from None


def parse_netlist(text: bytes | str) -> Circuit:
    """Parse netlist text into a Circuit; failures raise NetlistError with a location."""
    text = _decode(text)
    parser = _Parser()
    lines = text.split("\n")
    for lineno, raw in enumerate(lines, start=1):
        raw = raw.rstrip("\r")
        first = _TOKEN.search(raw)
        if first is None or first.group().startswith("#"):
            continue
        kw = _Token(first.group(), lineno, first.start() + 1)
        if kw.text == "describe":
            parser.statement(kw, [], raw[first.end():].strip())
            continue
        body = raw.split("#", 1)[0]
        tokens = [_Token(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(body)]
        parser.statement(tokens[0], tokens[1:], "")
    try:
        return parser.circuit()
    except CircuitError as err:
        raise NetlistError(VALUE_RANGE, len(lines), 1, str(err)) from None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _component_line(c) -> str:
    if isinstance(c, NPBS):
        return f"npbs {c.path_a} {c.path_b}"
    if isinstance(c, PBS):
        return f"pbs {c.path_a} {c.path_b}"
    if isinstance(c, FS):
        return f"fs {c.path} {c.dk} {c.dm} {_fmt(c.eta)}" + (" leak" if c.leak else "")
    if isinstance(c, PS):
        return f"ps {c.path} {_fmt(c.theta)}"
    if isinstance(c, HWP):
        return f"hwp {c.path}"
    if isinstance(c, BB):
        return f"bb {c.path} {c.bit}"
    if isinstance(c, Mirror):
        return f"mirror {c.path_a}" + ("" if c.path_b is None else f" {c.path_b}")
    if isinstance(c, CF):
        bm: BandMap = c.bandmap
        qubits = ",".join(str(q) for q in bm.qubits)
        return f"cf {c.path_a} {c.path_b} {bm.n} {qubits} {bm.role.lower()} {_fmt(c.epsilon)}"
    raise TypeError(f"cannot serialize {c!r}")


def serialize_netlist(circuit: Circuit) -> str:
    """Canonical text: headers, path declaration, one component per line."""
    lines = []
    if circuit.name:
        lines.append(f"circuit {circuit.name}")
    if circuit.description:
        lines.append(f"describe {json.dumps(circuit.description)}")
    if circuit.n is not None:
        lines.append(f"qubits {circuit.n}")
    for key, value in circuit.constants:
        lines.append(f"const {key}={_fmt(value)}")
    if circuit.paths:
        lines.append("paths " + " ".join(str(p) for p in circuit.paths))
    lines += [_component_line(c) for c in circuit.stages]
    return "\n".join(lines) + "\n"
