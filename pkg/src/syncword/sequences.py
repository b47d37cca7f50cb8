"""Built-in automatic sequences and explicit finite-word generators.

Each built-in ships as a DFAO text file under ``data/`` and has an
independent closed-form generator used to cross-check it.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from . import automata as fa
from .automata import Dfao
from .errors import MalformedInput


def thue_morse_gen(n: int) -> int:
    return bin(n).count("1") % 2


def period_doubling_gen(n: int) -> int:
    return thue_morse_gen(n) ^ thue_morse_gen(n + 1)


def paperfolding_gen(n: int) -> int:
    """Regular paperfolding, 0-indexed: 1 iff the odd part of n+1 is 1 mod 4."""
    m = n + 1
    while m % 2 == 0:
        m //= 2
    return 1 if m % 4 == 1 else 0


def powers_of_two_char_gen(n: int) -> int:
    return 1 if n > 0 and n & (n - 1) == 0 else 0


GENERATORS = {
    "thue_morse": thue_morse_gen,
    "period_doubling": period_doubling_gen,
    "paperfolding": paperfolding_gen,
    "powers_of_two_char": powers_of_two_char_gen,
}

BUILTINS = tuple(GENERATORS)


def _data_path(name: str):
    return resources.files("syncword") / "data" / f"{name}.txt"


def load_dfao(source: str | Path) -> Dfao:
    """Load a built-in by name or a DFAO file by path.  The result is checked
    for leading-zero invariance, which every construction relies on."""
    if str(source) in GENERATORS:
        text = _data_path(str(source)).read_text()
        default_name = str(source)
    else:
        text = Path(source).read_text()
        default_name = None
    M, _, meta = fa.loads(text)
    if not isinstance(M, Dfao):
        raise MalformedInput(f"{source} does not define a DFAO (no output lines)")
    if M.name is None:
        M.name = default_name or meta.get("name")
    if not fa.dfao_is_leading_zero_invariant(M):
        raise MalformedInput(f"{source}: output changes under leading zeros")
    return M


def generator_mismatch(M: Dfao, name: str, length: int) -> int | None:
    """First n < length where M disagrees with the named generator, or None."""
    gen = GENERATORS[name]
    pre = M.prefix(length)
    for n in range(length):
        if int(pre[n]) != gen(n):
            return n
    return None


# -- explicit words ---------------------------------------------------------


def binary_concatenation(length: int) -> np.ndarray:
    """Prefix of 1 10 11 100 101 ... (binary expansions of 1, 2, 3, ...)."""
    out = []
    total = 0
    n = 1
    while total < length:
        s = bin(n)[2:]
        out.append(s)
        total += len(s)
        n += 1
    return np.frombuffer("".join(out)[:length].encode(), dtype=np.uint8) - ord("0")


def gap_morphism_word(i: int) -> str:
    """h^i(122122121212) with h: 1 -> 21, 2 -> 22."""
    w = "122122121212"
    for _ in range(i):
        w = "".join("21" if c == "1" else "22" for c in w)
    return w
