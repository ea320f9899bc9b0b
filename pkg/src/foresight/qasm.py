"""OpenQASM 2.0 subset reader and writer.

Supported: ``qreg``/``creg`` (several registers are flattened in declaration
order), the standard one-qubit gates, ``cx``, ``swap``, ``measure``,
``barrier`` and ``gate`` definitions whose bodies only use supported gates.
Classical conditionals, ``reset``, ``opaque`` and measurement followed by
further gates on the same qubit are rejected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .circuit import BARRIER, CNOT, MEASURE, ONE_QUBIT, SWAP, Circuit, Gate


class QasmError(ValueError):
    """Base class for frontend errors."""


class QasmSyntaxError(QasmError):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class UnsupportedGateError(QasmError):
    def __init__(self, name: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unsupported gate {name!r}{where}")
        self.gate = name


class RegisterIndexError(QasmError):
    pass


# name -> (number of params, number of qubits, kind)
BUILTIN_GATES: dict[str, tuple[int, int, str]] = {
    "id": (0, 1, ONE_QUBIT),
    "x": (0, 1, ONE_QUBIT),
    "y": (0, 1, ONE_QUBIT),
    "z": (0, 1, ONE_QUBIT),
    "h": (0, 1, ONE_QUBIT),
    "s": (0, 1, ONE_QUBIT),
    "sdg": (0, 1, ONE_QUBIT),
    "t": (0, 1, ONE_QUBIT),
    "tdg": (0, 1, ONE_QUBIT),
    "sx": (0, 1, ONE_QUBIT),
    "sxdg": (0, 1, ONE_QUBIT),
    "rx": (1, 1, ONE_QUBIT),
    "ry": (1, 1, ONE_QUBIT),
    "rz": (1, 1, ONE_QUBIT),
    "p": (1, 1, ONE_QUBIT),
    "u1": (1, 1, ONE_QUBIT),
    "u2": (2, 1, ONE_QUBIT),
    "u3": (3, 1, ONE_QUBIT),
    "u": (3, 1, ONE_QUBIT),
    "cx": (0, 2, CNOT),
    "swap": (0, 2, SWAP),
}
_ALIASES = {"U": "u3", "CX": "cx"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<sym>->|==|[;,()\[\]{}+\-*/^])
    """,
    re.VERBOSE,
)

_FUNCS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise QasmSyntaxError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# Expression trees are nested tuples evaluated against a parameter environment.
Expr = tuple


def _eval(expr: Expr, env: dict[str, float]) -> float:
    op = expr[0]
    if op == "num":
        return expr[1]
    if op == "var":
        return env[expr[1]]
    if op == "neg":
        return -_eval(expr[1], env)
    if op == "call":
        return _FUNCS[expr[1]](_eval(expr[2], env))
    a, b = _eval(expr[1], env), _eval(expr[2], env)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    return a**b


@dataclass
class _GateDef:
    params: list[str]
    qargs: list[str]
    body: list[tuple[str, list[Expr], list[str], int]]


class _Parser:
    def __init__(self, source: str) -> None:
        self.toks = _tokenize(source)
        self.i = 0
        self.qregs: dict[str, tuple[int, int]] = {}
        self.cregs: dict[str, tuple[int, int]] = {}
        self.nq = 0
        self.nc = 0
        self.defs: dict[str, _GateDef] = {}
        self.gates: list[Gate] = []
        self.measured: set[int] = set()

    # token helpers
    def peek(self, k: int = 0) -> _Tok:
        return self.toks[self.i + k]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: _Tok | None = None) -> QasmSyntaxError:
        tok = tok or self.peek()
        return QasmSyntaxError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}", tok)
        return tok

    def expect_kind(self, kind: str, what: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind in ("sym", "id"):
            self.i += 1
            return True
        return False

    # grammar
    def program(self) -> None:
        tok = self.next()
        if tok.text != "OPENQASM":
            raise self.error('program must start with "OPENQASM 2.0;"', tok)
        ver = self.next()
        if ver.text not in ("2.0", "2"):
            raise self.error(f"unsupported OpenQASM version {ver.text!r}", ver)
        self.expect(";")
        while self.peek().kind != "eof":
            self.statement()

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind != "id":
            raise self.error(f"unexpected {tok.text!r}")
        word = tok.text
        if word == "include":
            self.next()
            path = self.expect_kind("str", "file name")
            if path.text.strip('"') != "qelib1.inc":
                raise self.error(f"cannot include {path.text}", path)
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.register(word)
        elif word == "gate":
            self.gate_def()
        elif word == "if":
            raise QasmError(f"line {tok.line}: classical conditionals are not supported")
        elif word in ("opaque", "reset"):
            raise UnsupportedGateError(word, tok.line)
        elif word == "measure":
            self.measure()
        elif word == "barrier":
            self.next()
            groups = self.arg_list()
            qubits: list[int] = []
            for group in groups:
                qubits.extend(q for q in group if q not in qubits)
            self.expect(";")
            self.gates.append(Gate(BARRIER, "barrier", tuple(qubits)))
        else:
            self.gate_call()

    def register(self, word: str) -> None:
        self.next()
        name = self.expect_kind("id", "register name")
        self.expect("[")
        size_tok = self.expect_kind("int", "register size")
        self.expect("]")
        self.expect(";")
        size = int(size_tok.text)
        if name.text in self.qregs or name.text in self.cregs:
            raise self.error(f"register {name.text!r} redeclared", name)
        if word == "qreg":
            self.qregs[name.text] = (self.nq, size)
            self.nq += size
        else:
            self.cregs[name.text] = (self.nc, size)
            self.nc += size

    def gate_def(self) -> None:
        start = self.next()
        name_tok = self.expect_kind("id", "gate name")
        name = name_tok.text
        params: list[str] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expect_kind("id", "parameter name").text)
                while self.accept(","):
                    params.append(self.expect_kind("id", "parameter name").text)
                self.expect(")")
        qargs = [self.expect_kind("id", "qubit argument").text]
        while self.accept(","):
            qargs.append(self.expect_kind("id", "qubit argument").text)
        self.expect("{")
        body: list[tuple[str, list[Expr], list[str], int]] = []
        while not self.accept("}"):
            tok = self.next()
            if tok.kind == "eof":
                raise self.error("unterminated gate body", start)
            if tok.kind != "id":
                raise self.error(f"unexpected {tok.text!r} in gate body", tok)
            gname = _ALIASES.get(tok.text, tok.text)
            exprs: list[Expr] = []
            if self.accept("("):
                if not self.accept(")"):
                    exprs.append(self.expr(set(params)))
                    while self.accept(","):
                        exprs.append(self.expr(set(params)))
                    self.expect(")")
            args = [self.expect_kind("id", "qubit argument").text]
            while self.accept(","):
                args.append(self.expect_kind("id", "qubit argument").text)
            self.expect(";")
            for a in args:
                if a not in qargs:
                    raise self.error(f"unknown qubit argument {a!r} in gate {name}", tok)
            if gname == "barrier":
                continue
            if gname not in BUILTIN_GATES and gname not in self.defs:
                raise UnsupportedGateError(gname, tok.line)
            body.append((gname, exprs, args, tok.line))
        if name in BUILTIN_GATES:
            # qelib1-style redefinition of a builtin keeps the builtin meaning
            return
        self.defs[name] = _GateDef(params, qargs, body)

    def measure(self) -> None:
        kw = self.next()
        src = self.argument(self.qregs, "qubit")
        self.expect("->")
        dst = self.argument(self.cregs, "clbit")
        self.expect(";")
        if len(src) != len(dst):
            raise self.error("measure register sizes differ", kw)
        for q, c in zip(src, dst):
            self.gates.append(Gate(MEASURE, "measure", (q,), (), (c,)))
            self.measured.add(q)

    def gate_call(self) -> None:
        tok = self.next()
        name = _ALIASES.get(tok.text, tok.text)
        exprs: list[Expr] = []
        if self.accept("("):
            if not self.accept(")"):
                exprs.append(self.expr(set()))
                while self.accept(","):
                    exprs.append(self.expr(set()))
                self.expect(")")
        groups = self.arg_list()
        self.expect(";")
        if name in BUILTIN_GATES:
            nparams, nqubits, _ = BUILTIN_GATES[name]
        elif name in self.defs:
            nparams, nqubits = len(self.defs[name].params), len(self.defs[name].qargs)
        else:
            raise UnsupportedGateError(name, tok.line)
        if len(exprs) != nparams:
            raise self.error(f"{name} takes {nparams} parameters, got {len(exprs)}", tok)
        if len(groups) != nqubits:
            raise self.error(f"{name} takes {nqubits} qubit arguments, got {len(groups)}", tok)
        values = [_eval(e, {}) for e in exprs]
        for qubits in _broadcast(groups, tok, self):
            if len(set(qubits)) != len(qubits):
                raise self.error(f"{name} applied to repeated qubit", tok)
            self.emit(name, values, qubits, tok.line)

    def emit(self, name: str, values: list[float], qubits: list[int], line: int) -> None:
        if name in BUILTIN_GATES:
            _, _, kind = BUILTIN_GATES[name]
            for q in qubits:
                if q in self.measured:
                    raise QasmError(f"line {line}: gate after measurement on the same qubit is not supported")
            self.gates.append(Gate(kind, name, tuple(qubits), tuple(values)))
            return
        d = self.defs[name]
        env = dict(zip(d.params, values))
        binding = dict(zip(d.qargs, qubits))
        for gname, exprs, args, bline in d.body:
            self.emit(gname, [_eval(e, env) for e in exprs], [binding[a] for a in args], bline)

    def arg_list(self) -> list[list[int]]:
        groups = [self.argument(self.qregs, "qubit")]
        while self.accept(","):
            groups.append(self.argument(self.qregs, "qubit"))
        return groups

    def argument(self, regs: dict[str, tuple[int, int]], what: str) -> list[int]:
        name = self.expect_kind("id", f"{what} register")
        if name.text not in regs:
            raise self.error(f"unknown {what} register {name.text!r}", name)
        offset, size = regs[name.text]
        if self.accept("["):
            idx_tok = self.expect_kind("int", "index")
            self.expect("]")
            idx = int(idx_tok.text)
            if idx >= size:
                raise RegisterIndexError(
                    f"line {idx_tok.line}, column {idx_tok.col}: index {idx} out of range for {name.text}[{size}]"
                )
            return [offset + idx]
        return list(range(offset, offset + size))

    # expressions: precedence climbing over + - * / ^ and unary minus
    def expr(self, names: set[str]) -> Expr:
        left = self.term(names)
        while self.peek().text in ("+", "-") and self.peek().kind == "sym":
            op = self.next().text
            left = (op, left, self.term(names))
        return left

    def term(self, names: set[str]) -> Expr:
        left = self.factor(names)
        while self.peek().text in ("*", "/") and self.peek().kind == "sym":
            op = self.next().text
            left = (op, left, self.factor(names))
        return left

    def factor(self, names: set[str]) -> Expr:
        base = self.unary(names)
        if self.peek().text == "^":
            self.next()
            return ("^", base, self.factor(names))
        return base

    def unary(self, names: set[str]) -> Expr:
        tok = self.next()
        if tok.text == "-":
            return ("neg", self.unary(names))
        if tok.text == "+":
            return self.unary(names)
        if tok.kind in ("int", "real"):
            return ("num", float(tok.text))
        if tok.text == "(":
            e = self.expr(names)
            self.expect(")")
            return e
        if tok.kind == "id":
            if tok.text == "pi":
                return ("num", math.pi)
            if tok.text in _FUNCS:
                self.expect("(")
                e = self.expr(names)
                self.expect(")")
                return ("call", tok.text, e)
            if tok.text in names:
                return ("var", tok.text)
            raise self.error(f"unknown identifier {tok.text!r}", tok)
        raise self.error(f"unexpected {tok.text or 'end of input'!r} in expression", tok)


def _broadcast(groups: list[list[int]], tok: _Tok, parser: _Parser) -> list[list[int]]:
    sizes = {len(g) for g in groups if len(g) > 1}
    if len(sizes) > 1:
        raise parser.error("register arguments have different sizes", tok)
    n = sizes.pop() if sizes else 1
    return [[g[i] if len(g) > 1 else g[0] for g in groups] for i in range(n)]


def parse_qasm(source: str, name: str = "circuit") -> Circuit:
    """Parse OpenQASM 2.0 text into a :class:`Circuit` with gates in source order."""
    p = _Parser(source)
    p.program()
    return Circuit(p.nq, p.nc, p.gates, name)


def load_qasm(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_qasm(path.read_text(encoding="utf-8"), name=path.stem)


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_qasm(circuit: Circuit) -> str:
    """Render a circuit with a single ``q`` register and a single ``c`` register."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if circuit.num_qubits:
        lines.append(f"qreg q[{circuit.num_qubits}];")
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for g in circuit.gates:
        qs = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind == MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.clbits[0]}];")
        elif g.kind == BARRIER:
            lines.append(f"barrier {qs};")
        elif g.params:
            lines.append(f"{g.name}({','.join(_fmt(p) for p in g.params)}) {qs};")
        else:
            lines.append(f"{g.name} {qs};")
    return "\n".join(lines) + "\n"


def save_qasm(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(emit_qasm(circuit), encoding="utf-8")
