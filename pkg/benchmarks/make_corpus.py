"""Regenerate the benchmark corpus: ``python3 benchmarks/make_corpus.py``."""

from pathlib import Path

from foresight import workloads as w
from foresight.qasm import save_qasm

OUT = Path(__file__).with_name("corpus")


def corpus():
    yield from (w.qft(n) for n in (6, 8, 10, 12, 16, 20))
    yield from (w.qaoa_sk(n, seed=n) for n in (6, 8, 10, 12, 16, 20))
    yield from (w.bernstein_vazirani(n, measure_key=True) for n in (8, 12, 20))
    yield from (w.ghz(n) for n in (8, 12))
    yield from (w.ising(n, steps=s, seed=n) for n, s in ((10, 4), (12, 6), (20, 4)))
    for n, g, s in ((8, 30, 0), (10, 40, 1), (12, 50, 2), (12, 50, 3), (14, 60, 4), (16, 70, 5), (18, 80, 6), (20, 90, 7), (20, 100, 8)):
        yield w.toffoli_cascade(n, g, s)
    yield w.vqe_full(8, reps=2, seed=1)
    yield w.vqe_full(10, reps=2, seed=2)
    yield w.vqe_full(16, reps=1, seed=3)
    for n, c, s, loc in ((10, 150, 1, None), (12, 200, 2, 3), (16, 250, 3, None), (18, 300, 4, 4), (20, 300, 5, None)):
        circ = w.random_cx(n, c, s, locality=loc)
        if loc:
            circ.name += f"_l{loc}"
        yield circ


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for old in OUT.glob("*.qasm"):
        old.unlink()
    for circ in corpus():
        save_qasm(circ, OUT / f"{circ.name}.qasm")


if __name__ == "__main__":
    main()
