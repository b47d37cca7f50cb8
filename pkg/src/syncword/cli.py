"""Command-line entry point: ``syncword build|eval|diagram|verify``.

Exit codes: 0 success, 1 verification failure, 2 malformed input or domain
error, 3 iteration/state cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import automata as fa
from . import oracles, sequences, synchro
from .automata import Dfao
from .errors import CapExceeded, DomainError, IterationCapExceeded, MalformedInput
from .numeration import encode_base_k, format_digits
from .predicates import pred_novel

log = logging.getLogger("syncword")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
ANALYSES = ("complexity", "appearance", "powers", "primitive", "blockcount")
DEFAULT_N = 256
DIAGRAM_MAX = 128


@dataclass
class JobSpec:
    seq: str
    analysis: str | None = None
    n: int = DEFAULT_N
    iter_cap: int = synchro.DEFAULT_ITER_CAP
    state_cap: int = fa.DEFAULT_STATE_CAP
    base: int = 2

    def __post_init__(self):
        for name in ("n", "iter_cap", "state_cap", "base"):
            if getattr(self, name) < (2 if name == "base" else 1):
                raise MalformedInput(f"--{name.replace('_', '-')} must be positive")


def load_sequence(seq: str, base: int) -> Dfao:
    path = Path(seq)
    if seq not in sequences.BUILTINS and not path.exists():
        raise MalformedInput(f"unknown sequence {seq!r}: not a built-in ({', '.join(sequences.BUILTINS)}) or a file")
    M = sequences.load_dfao(seq)
    if M.base != base:
        raise MalformedInput(f"{seq} is base {M.base}, but --base is {base}")
    return M


def build_artifact(x: Dfao, analysis: str, iter_cap: int):
    """Returns (automaton, vars, provenance); ``automaton`` is a Dfa graph or,
    for blockcount, a Dfao."""
    if analysis == "complexity":
        F = synchro.build_rho_sync(x, iter_cap)
    elif analysis == "powers":
        F = synchro.build_power_count_sync(x, iter_cap)
    elif analysis == "primitive":
        F = synchro.build_primitive_count_sync(x, iter_cap=iter_cap)
    elif analysis == "appearance":
        F = synchro.build_appearance_sync(x)
    elif analysis == "blockcount":
        B = synchro.build_block_count_dfao(x, iter_cap=iter_cap)
        meta = {"analysis": analysis, "bound": B.bound, "states": B.dfao.n_states}
        return B.dfao, None, meta
    else:
        raise MalformedInput(f"unknown analysis {analysis!r}; expected one of {ANALYSES}")
    meta = {"analysis": analysis, "states": F.graph.n_states}
    if "iterations" in F.info:
        meta["iterations"] = F.info["iterations"]
    return F.graph, ["n", "m"], meta


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- commands ----------------------------------------------------------------


def cmd_build(job: JobSpec, out: str | None, dot: str | None) -> int:
    x = load_sequence(job.seq, job.base)
    t0 = time.perf_counter()
    A, vars, meta = build_artifact(x, job.analysis, job.iter_cap)
    meta = {"sequence": x.name or job.seq, **meta, "seconds": f"{time.perf_counter() - t0:.2f}"}
    _write(out, fa.dumps(A, vars, meta))
    if dot:
        _write(dot, fa.to_dot(A, f"{meta['sequence']}_{job.analysis}", vars))
    log.info("built %s/%s: %s states", meta["sequence"], job.analysis, meta["states"])
    return EXIT_OK


def load_artifact(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None
    A, vars, meta = fa.loads(text)
    if isinstance(A, Dfao):
        return A, meta
    if A.tracks != 2:
        raise MalformedInput(f"{path}: expected a 2-track function graph, got {A.tracks} tracks")
    return synchro.SyncFunction(A, name=meta.get("analysis")), meta


def evaluate(A, n: int) -> int:
    if n < 0:
        raise DomainError("n must be nonnegative")
    return A(n) if isinstance(A, Dfao) else synchro.eval_sync(A, n)


def _base_k(v: int, k: int) -> str:
    return format_digits(encode_base_k(v, k)) or "0"


def cmd_eval(path: str, n: int | None, span: str | None) -> int:
    A, _ = load_artifact(path)
    k = A.base
    if span is None:
        if n is None:
            raise MalformedInput("eval needs --n or --range")
        v = evaluate(A, n)
        print(f"{v}\t{_base_k(v, k)}")
        return EXIT_OK
    try:
        lo, hi = (int(s) for s in span.split(":"))
    except ValueError:
        raise MalformedInput(f"--range expects LO:HI, got {span!r}") from None
    print(f"n\tvalue\tbase{k}")
    for m in range(lo, hi + 1):
        v = evaluate(A, m)
        print(f"{m}\t{v}\t{_base_k(v, k)}")
    return EXIT_OK


def diagram_rows(x, n_max: int) -> list[str]:
    novel = [oracles.novel_set_naive(x, n) for n in range(1, n_max + 1)]
    width = max(max(s.positions) for s in novel) + 1
    rows = []
    for s in novel:
        marks = set(s.positions)
        cells = "".join("#" if i in marks else "." for i in range(width))
        runs = "|".join(f"{a}" if a == b else f"{a}-{b}" for a, b in oracles.blocks_of(s.positions))
        rows.append(f"{s.n:>4} {cells}  {s.block_count} blocks: {runs}")
    return rows


def cmd_diagram(job: JobSpec, n_max: int) -> int:
    if not 1 <= n_max <= DIAGRAM_MAX:
        raise MalformedInput(f"--nmax must be in 1..{DIAGRAM_MAX}")
    x = load_sequence(job.seq, job.base)
    print("\n".join(diagram_rows(x, n_max)))
    return EXIT_OK


# -- verification --------------------------------------------------------------


class Report:
    def __init__(self):
        self.lines = []
        self.failed = 0

    def check(self, name: str, witness):
        """``witness`` is None on success, else a description of a counterexample."""
        if witness is None:
            self.lines.append(f"PASS  {name}")
        else:
            self.failed += 1
            self.lines.append(f"FAIL  {name}: {witness}")
        print(self.lines[-1], flush=True)


def _first_mismatch(f, g, ns):
    for n in ns:
        a, b = f(n), g(n)
        if a != b:
            return f"n={n}: {a} != {b}"
    return None


def _round_trip(A, vars):
    B, _, _ = fa.loads(fa.dumps(A, vars))
    if isinstance(A, Dfao):
        same = fa.minimize_dfao(B) == fa.minimize_dfao(A)
    else:
        same = fa.equivalent(A, B)
    return None if same else "reloaded automaton differs"


def verify(x: Dfao, N: int, iter_cap: int = synchro.DEFAULT_ITER_CAP) -> Report:
    rep = Report()
    name = x.name
    if name in sequences.GENERATORS:
        bad = sequences.generator_mismatch(x, name, max(4 * N, 1024))
        rep.check(f"DFAO agrees with the {name} generator", None if bad is None else f"n={bad}")
    rep.check("DFAO is leading-zero invariant", None if fa.dfao_is_leading_zero_invariant(x) else "no")

    table = oracles.oracle_table(x, N)
    ns = range(N + 1)

    rho = synchro.build_rho_sync(x, iter_cap)
    rep.check(f"complexity fixed point ({rho.info['iterations']} iterations)", None)
    rep.check("complexity graph is a function", None if synchro.check_function_graph(rho, N) else f"some n <= {N}")
    rep.check("complexity matches oracle", _first_mismatch(rho, lambda n: int(table.factors[n]), ns))
    chain = rho.info["chain"]
    grow = [j for j in range(1, len(chain)) if not fa.is_empty(fa.boolean_combine(chain[j - 1].dfa, chain[j].dfa, "andnot"))]
    rep.check("chain is monotone", None if not grow else f"M_{grow[0] - 1} not inside M_{grow[0]}")

    powers = synchro.build_power_count_sync(x, iter_cap)
    prim = synchro.build_primitive_count_sync(x, rho, powers, iter_cap)
    rep.check("power count matches oracle", _first_mismatch(powers, lambda n: int(table.powers[n]), ns))
    rep.check("primitive count matches oracle", _first_mismatch(prim, lambda n: int(table.primitive[n]), ns))
    rep.check("complexity = powers + primitive", _first_mismatch(rho, lambda n: powers(n) + prim(n), ns))

    app = synchro.build_appearance_sync(x)
    rep.check("appearance matches oracle", _first_mismatch(app, lambda n: int(table.appearance[n]), ns))

    blocks = synchro.build_block_count_dfao(x, iter_cap=iter_cap)
    rep.check(f"block count matches oracle (bound {blocks.bound})", _first_mismatch(blocks.dfao, lambda n: int(table.blocks[n]), ns))
    bad = oracles.block_bound_violations(table, rho)
    rep.check("blocks <= rho(n) - rho(n-1) + 1", None if not bad else f"n={bad[0]}")
    bad = oracles.monotonicity_violations(table, N)
    rep.check("novel occurrences are monotone in n", None if not bad else f"(n, i)={bad[0][:2]} {bad[0][2]}")

    for label, A, vars in (
        ("complexity", rho.graph, ["n", "m"]),
        ("powers", powers.graph, ["n", "m"]),
        ("appearance", app.graph, ["n", "m"]),
        ("blockcount", blocks.dfao, None),
    ):
        rep.check(f"{label} survives a save/load round trip", _round_trip(A, vars))

    if name == "powers_of_two_char":
        rs = [r for r in range(2, 10) if 2**r <= max(N, 4)]
        bad = [r for r in rs if oracles.count_naive(x, 2**r + 1, "unbordered") != r + 2]
        rep.check(f"r+2 unbordered factors of length 2^r+1, r=2..{rs[-1]}", None if not bad else f"r={bad[0]}")

    # novelty built two ways must agree
    same = pred_novel(x, "exists").equivalent(pred_novel(x, "forall"))
    rep.check("novelty: not-exists and forall routes agree", None if same else "languages differ")
    return rep


def cmd_verify(job: JobSpec) -> int:
    x = load_sequence(job.seq, job.base)
    rep = verify(x, job.n, job.iter_cap)
    total = len(rep.lines)
    print(f"{total - rep.failed}/{total} checks passed")
    return EXIT_OK if rep.failed == 0 else EXIT_VERIFY


# -- argument parsing ---------------------------------------------------------


def _common(p: argparse.ArgumentParser, seq=True):
    if seq:
        p.add_argument("--seq", required=True, help="built-in name or DFAO file")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--iter-cap", type=int, default=synchro.DEFAULT_ITER_CAP)
    p.add_argument("--state-cap", type=int, default=fa.DEFAULT_STATE_CAP)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syncword", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and save a synchronized automaton")
    _common(p)
    p.add_argument("--analysis", required=True, choices=ANALYSES)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--dot", help="also write a DOT graph here")

    p = sub.add_parser("eval", help="evaluate a saved automaton")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--range", dest="span", metavar="LO:HI", help="print a TSV table for LO <= n <= HI")

    p = sub.add_parser("diagram", help="novel-occurrence diagram")
    _common(p)
    p.add_argument("--nmax", type=int, default=9)

    p = sub.add_parser("verify", help="cross-check every construction against the oracles")
    _common(p)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == "eval":
        return cmd_eval(args.file, args.n, args.span)
    job = JobSpec(args.seq, getattr(args, "analysis", None), getattr(args, "n", DEFAULT_N),
                  args.iter_cap, args.state_cap, args.base)
    with fa.state_cap(job.state_cap):
        if args.command == "build":
            return cmd_build(job, args.out, args.dot)
        if args.command == "diagram":
            return cmd_diagram(job, args.nmax)
        return cmd_verify(job)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except CapExceeded as exc:
        flag = "--iter-cap" if isinstance(exc, IterationCapExceeded) else "--state-cap"
        print(f"syncword: {flag} exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (MalformedInput, DomainError) as exc:
        print(f"syncword: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
