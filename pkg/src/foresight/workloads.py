"""Benchmark circuit generators."""

from __future__ import annotations

import math
import random

from .circuit import Circuit, cx, measure, one, swap

FAMILIES = ("bv", "ghz", "qaoa-sk", "qft", "ising", "toffoli", "random", "vqe")


def _check(n: int, low: int = 2) -> None:
    if n < low:
        raise ValueError(f"need at least {low} qubits, got {n}")


def _measure_all(c: Circuit) -> None:
    c.num_clbits = c.num_qubits
    for q in range(c.num_qubits):
        c.append(measure(q, q))


def bernstein_vazirani(n: int, measure_key: bool = False) -> Circuit:
    """All-ones key on ``n - 1`` qubits, ancilla last."""
    _check(n)
    c = Circuit(n, name=f"bv_n{n}")
    anc = n - 1
    for q in range(anc):
        c.append(one("h", q))
    c.append(one("x", anc))
    c.append(one("h", anc))
    for q in range(anc):
        c.append(cx(q, anc))
    for q in range(n):
        c.append(one("h", q))
    if measure_key:
        c.num_clbits = anc
        for q in range(anc):
            c.append(measure(q, q))
    return c


def ghz(n: int) -> Circuit:
    _check(n)
    c = Circuit(n, name=f"ghz_n{n}")
    c.append(one("h", 0))
    for q in range(n - 1):
        c.append(cx(q, q + 1))
    return c


def _zz(c: Circuit, a: int, b: int, theta: float) -> None:
    c.append(cx(a, b))
    c.append(one("rz", b, theta))
    c.append(cx(a, b))


def qaoa_sk(n: int, seed: int = 0, rounds: int = 1) -> Circuit:
    """Sherrington-Kirkpatrick QAOA: every pair coupled with a random ±1 weight."""
    _check(n)
    rng = random.Random(seed)
    gamma, beta = rng.uniform(0, math.pi), rng.uniform(0, math.pi)
    c = Circuit(n, name=f"qaoa_sk_n{n}" + (f"_p{rounds}" if rounds > 1 else ""))
    for q in range(n):
        c.append(one("h", q))
    weights = {(i, j): rng.choice((-1.0, 1.0)) for i in range(n) for j in range(i + 1, n)}
    for _ in range(rounds):
        for (i, j), w in weights.items():
            _zz(c, i, j, 2 * gamma * w)
        for q in range(n):
            c.append(one("rx", q, 2 * beta))
    return c


def _cphase(c: Circuit, ctrl: int, tgt: int, theta: float) -> None:
    c.append(one("p", ctrl, theta / 2))
    c.append(cx(ctrl, tgt))
    c.append(one("p", tgt, -theta / 2))
    c.append(cx(ctrl, tgt))
    c.append(one("p", tgt, theta / 2))


def qft(n: int, reverse: bool = True) -> Circuit:
    """Textbook QFT; controlled phases become two CNOTs each, the final reversal uses swap gates."""
    _check(n)
    c = Circuit(n, name=f"qft_n{n}")
    for i in range(n):
        c.append(one("h", i))
        for j in range(i + 1, n):
            _cphase(c, j, i, math.pi / 2 ** (j - i))
    if reverse:
        for i in range(n // 2):
            c.append(swap(i, n - 1 - i))
    return c


def ising(n: int, steps: int = 4, seed: int = 0) -> Circuit:
    """Trotterised transverse-field Ising chain."""
    _check(n)
    rng = random.Random(seed)
    c = Circuit(n, name=f"ising_n{n}")
    for q in range(n):
        c.append(one("h", q))
    for _ in range(steps):
        for start in (0, 1):
            for q in range(start, n - 1, 2):
                _zz(c, q, q + 1, rng.uniform(0.1, 1.0))
        for q in range(n):
            c.append(one("rx", q, rng.uniform(0.1, 1.0)))
    return c


def _toffoli(c: Circuit, a: int, b: int, t: int) -> None:
    c.append(one("h", t))
    c.append(cx(b, t))
    c.append(one("tdg", t))
    c.append(cx(a, t))
    c.append(one("t", t))
    c.append(cx(b, t))
    c.append(one("tdg", t))
    c.append(cx(a, t))
    c.append(one("t", b))
    c.append(one("t", t))
    c.append(one("h", t))
    c.append(cx(a, b))
    c.append(one("t", a))
    c.append(one("tdg", b))
    c.append(cx(a, b))


def toffoli_cascade(n: int, gates: int, seed: int = 0) -> Circuit:
    """Reversible-logic style netlist: random Toffoli and CNOT gates, Toffolis decomposed."""
    _check(n, 3)
    rng = random.Random(seed)
    c = Circuit(n, name=f"rev_n{n}_g{gates}_s{seed}")
    for q in range(n):
        if rng.random() < 0.5:
            c.append(one("x", q))
    for _ in range(gates):
        if rng.random() < 0.6:
            a, b, t = rng.sample(range(n), 3)
            _toffoli(c, a, b, t)
        else:
            a, b = rng.sample(range(n), 2)
            c.append(cx(a, b))
    return c


def random_cx(n: int, cnots: int, seed: int = 0, locality: int | None = None) -> Circuit:
    """Random CNOTs with interleaved rotations; ``locality`` bounds |a - b|."""
    _check(n)
    rng = random.Random(seed)
    c = Circuit(n, name=f"random_n{n}_c{cnots}_s{seed}")
    for _ in range(cnots):
        a = rng.randrange(n)
        if locality:
            choices = [b for b in range(max(0, a - locality), min(n, a + locality + 1)) if b != a]
            b = rng.choice(choices)
        else:
            b = rng.choice([x for x in range(n) if x != a])
        c.append(one("ry", a, rng.uniform(0, math.pi)))
        c.append(cx(a, b))
    return c


def vqe_full(n: int, reps: int = 2, seed: int = 0) -> Circuit:
    """Hardware-agnostic ansatz: RY layer then CNOTs on every ordered pair i < j."""
    _check(n)
    rng = random.Random(seed)
    c = Circuit(n, name=f"vqe_n{n}_r{reps}")
    for _ in range(reps):
        for q in range(n):
            c.append(one("ry", q, rng.uniform(0, math.pi)))
        for i in range(n):
            for j in range(i + 1, n):
                c.append(cx(i, j))
    for q in range(n):
        c.append(one("ry", q, rng.uniform(0, math.pi)))
    return c


def generate(family: str, n: int, seed: int = 0) -> Circuit:
    """Entry point used by the ``gen`` command."""
    if family == "bv":
        return bernstein_vazirani(n)
    if family == "ghz":
        return ghz(n)
    if family == "qaoa-sk":
        return qaoa_sk(n, seed)
    if family == "qft":
        return qft(n)
    if family == "ising":
        return ising(n, seed=seed)
    if family == "toffoli":
        return toffoli_cascade(n, 4 * n, seed)
    if family == "random":
        return random_cx(n, 10 * n, seed)
    if family == "vqe":
        return vqe_full(n, seed=seed)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
