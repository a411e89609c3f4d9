"""Reader and writer for a small OpenQASM 2.0 subset.

Accepted statements::

    OPENQASM 2.0;               (required, first)
    include "...";              (ignored)
    qreg q[N];                  (exactly one)
    creg c[N];                  (ignored)
    h|x|y|z|s|sdg|t|tdg q[i];
    rx|ry|rz|p(expr) q[i];      expr: decimal literals, pi, *, /, unary -
    cx|cz q[i],q[j];
    ccx q[i],q[j],q[k];
    swap q[i],q[j];             (lowered to three cx)
    measure q[i] -> c[j];       (recorded, not a gate)
    barrier ...;                (ignored)
    // comments

Anything else fails loudly; nothing is skipped silently.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Circuit
from .errors import QweakError

__all__ = [
    "QasmError",
    "QasmIndexError",
    "QasmSyntaxError",
    "QasmUnknownGateError",
    "QasmUnsupportedError",
    "dumps",
    "load",
    "loads",
]


class QasmError(QweakError, ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class QasmSyntaxError(QasmError):
    pass


class QasmUnknownGateError(QasmError):
    pass


class QasmIndexError(QasmError):
    pass


class QasmUnsupportedError(QasmError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<sym>[;,\[\]()*/+\-{}=<>])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_SINGLE = {"h", "x", "y", "z", "s", "sdg", "t", "tdg"}
_ROTATION = {"rx", "ry", "rz", "p"}
_TWO = {"cx": "x", "cz": "z"}
_UNSUPPORTED = {"if", "gate", "opaque", "reset", "OPENQASM3", "qubit", "bit", "def"}


class _Parser:
    def __init__(self, text: str, name: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.name = name
        self.qreg: tuple[str, int] | None = None
        self.cregs: dict[str, int] = {}
        self.circuit: Circuit | None = None

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise QasmSyntaxError(f"expected {want}, got {got}", tok.line, tok.col)
        return self.advance()

    def parse(self) -> Circuit:
        head = self.expect("ident", "OPENQASM")
        version = self.expect("number")
        if version.text != "2.0":
            raise QasmUnsupportedError(f"unsupported OpenQASM version {version.text}", version.line, version.col)
        self.expect("sym", ";")
        del head
        while self.tok.kind != "eof":
            self.statement()
        if self.circuit is None:
            tok = self.tok
            raise QasmSyntaxError("no qreg declared", tok.line, tok.col)
        return self.circuit

    def statement(self) -> None:
        tok = self.expect("ident")
        word = tok.text
        if word == "include":
            self.expect("string")
            self.expect("sym", ";")
        elif word == "qreg":
            self.declare_qreg(tok)
        elif word == "creg":
            name = self.expect("ident").text
            self.expect("sym", "[")
            size = int(self.expect("number").text)
            self.expect("sym", "]")
            self.expect("sym", ";")
            self.cregs[name] = size
        elif word == "barrier":
            while not (self.tok.kind == "sym" and self.tok.text == ";"):
                if self.tok.kind == "eof":
                    self.expect("sym", ";")
                self.advance()
            self.advance()
        elif word == "measure":
            self.measure(tok)
        elif word in _UNSUPPORTED:
            raise QasmUnsupportedError(f"unsupported feature: {word!r}", tok.line, tok.col)
        else:
            self.gate(tok)

    def declare_qreg(self, tok: Token) -> None:
        if self.qreg is not None:
            raise QasmUnsupportedError("only one qreg is supported", tok.line, tok.col)
        name = self.expect("ident").text
        self.expect("sym", "[")
        size_tok = self.expect("number")
        self.expect("sym", "]")
        self.expect("sym", ";")
        size = int(size_tok.text) if size_tok.text.isdigit() else 0
        if size < 1:
            raise QasmSyntaxError("qreg size must be a positive integer", size_tok.line, size_tok.col)
        self.qreg = (name, size)
        self.circuit = Circuit(size, name=self.name)

    def qubit(self) -> int:
        name_tok = self.expect("ident")
        if self.qreg is None:
            raise QasmSyntaxError("qubit used before qreg declaration", name_tok.line, name_tok.col)
        if name_tok.text != self.qreg[0]:
            raise QasmSyntaxError(f"unknown register {name_tok.text!r}", name_tok.line, name_tok.col)
        self.expect("sym", "[")
        idx_tok = self.expect("number")
        self.expect("sym", "]")
        if not idx_tok.text.isdigit():
            raise QasmSyntaxError("qubit index must be an integer", idx_tok.line, idx_tok.col)
        idx = int(idx_tok.text)
        if idx >= self.qreg[1]:
            raise QasmIndexError(
                f"qubit index {idx} out of range for {self.qreg[0]}[{self.qreg[1]}]",
                idx_tok.line,
                idx_tok.col,
            )
        return idx

    def measure(self, tok: Token) -> None:
        q = self.qubit()
        self.expect("arrow")
        creg = self.expect("ident")
        if creg.text not in self.cregs:
            raise QasmSyntaxError(f"unknown classical register {creg.text!r}", creg.line, creg.col)
        self.expect("sym", "[")
        c = self.expect("number")
        self.expect("sym", "]")
        self.expect("sym", ";")
        if not c.text.isdigit() or int(c.text) >= self.cregs[creg.text]:
            raise QasmIndexError(f"classical bit {c.text} out of range", c.line, c.col)
        assert self.circuit is not None
        self.circuit.measured.append((q, int(c.text)))

    def gate(self, tok: Token) -> None:
        name = tok.text
        if self.circuit is None:
            raise QasmSyntaxError("gate before qreg declaration", tok.line, tok.col)
        if name not in _SINGLE | _ROTATION | set(_TWO) | {"ccx", "swap"}:
            raise QasmUnknownGateError(f"unknown gate {name!r}", tok.line, tok.col)
        params: list[float] = []
        if name in _ROTATION:
            self.expect("sym", "(")
            params.append(self.expr())
            self.expect("sym", ")")
        elif self.tok.kind == "sym" and self.tok.text == "(":
            raise QasmSyntaxError(f"gate {name!r} takes no parameters", self.tok.line, self.tok.col)
        arity = 3 if name == "ccx" else 2 if name in _TWO or name == "swap" else 1
        qubits = [self.qubit()]
        for _ in range(arity - 1):
            self.expect("sym", ",")
            qubits.append(self.qubit())
        self.expect("sym", ";")
        if len(set(qubits)) != len(qubits):
            raise QasmSyntaxError(f"repeated qubit in {name!r}", tok.line, tok.col)
        c = self.circuit
        if name in _SINGLE or name in _ROTATION:
            c.add(name, qubits[0], params=params)
        elif name in _TWO:
            c.add(_TWO[name], qubits[1], [qubits[0]])
        elif name == "ccx":
            c.add("x", qubits[2], qubits[:2])
        else:
            c.swap(*qubits)

    def expr(self) -> float:
        value = self.factor()
        while self.tok.kind == "sym" and self.tok.text in "*/":
            op = self.advance().text
            rhs = self.factor()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise QasmSyntaxError("division by zero", self.tok.line, self.tok.col)
                value /= rhs
        return value

    def factor(self) -> float:
        tok = self.tok
        if tok.kind == "sym" and tok.text == "-":
            self.advance()
            return -self.factor()
        if tok.kind == "number":
            self.advance()
            return float(tok.text)
        if tok.kind == "ident" and tok.text == "pi":
            self.advance()
            return math.pi
        raise QasmSyntaxError(f"expected a number or 'pi', got {tok.text!r}", tok.line, tok.col)


def loads(text: str, name: str = "circuit") -> Circuit:
    """Parse QASM source into a :class:`Circuit`."""
    return _Parser(text, name).parse()


def load(path, name: str | None = None) -> Circuit:
    from pathlib import Path

    p = Path(path)
    return loads(p.read_text(), name or p.stem)


def dumps(circuit: Circuit) -> str:
    """Serialize ``circuit`` using only statements :func:`loads` accepts.

    Raises :class:`QasmUnsupportedError` for ops the subset cannot express
    (e.g. controlled rotations).
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.measured:
        lines.append(f"creg c[{circuit.num_qubits}];")
    for op in circuit.ops:
        ctrl = sorted(op.controls)
        name = op.name
        if not name:
            raise QasmUnsupportedError("op has no gate name")
        if not ctrl and (name in _SINGLE):
            lines.append(f"{name} q[{op.target}];")
        elif not ctrl and name in _ROTATION:
            lines.append(f"{name}({op.params[0]!r}) q[{op.target}];")
        elif len(ctrl) == 1 and name in ("x", "z"):
            lines.append(f"c{name} q[{ctrl[0]}],q[{op.target}];")
        elif len(ctrl) == 2 and name == "x":
            lines.append(f"ccx q[{ctrl[0]}],q[{ctrl[1]}],q[{op.target}];")
        else:
            raise QasmUnsupportedError(
                f"cannot express {name} with {len(ctrl)} control(s) in the QASM subset"
            )
    for q, c in circuit.measured:
        lines.append(f"measure q[{q}] -> c[{c}];")
    return "\n".join(lines) + "\n"
