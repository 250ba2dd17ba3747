"""Words in the free group F2 = <a, b>.

Words are plain strings over the alphabet ``a, A, b, B`` where ``A`` and
``B`` stand for the inverses of ``a`` and ``b``. The empty string is the
identity. All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

ALPHABET = "aAbB"
_VALID = frozenset(ALPHABET)


class Basis(NamedTuple):
    first: str
    second: str


@dataclass(frozen=True)
class AxisWindow:
    center: str
    conjugator: str
    points: tuple

    @property
    def radius(self) -> int:
        return len(self.points) // 2


def _check(letters: str) -> None:
    bad = set(letters) - _VALID
    if bad:
        raise ValueError(f"invalid letter(s) {sorted(bad)!r}; expected letters from {ALPHABET!r}")


def reduce(letters: Iterable[str] | str) -> str:
    """Freely reduce a sequence of letters using a stack."""
    if not isinstance(letters, str):
        letters = "".join(letters)
    _check(letters)
    stack: list[str] = []
    for x in letters:
        if stack and stack[-1] == x.swapcase():
            stack.pop()
        else:
            stack.append(x)
    return "".join(stack)


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def mul(*words: str) -> str:
    return reduce("".join(words))


def power(w: str, k: int) -> str:
    if k < 0:
        return reduce(inverse(w) * (-k))
    return reduce(w * k)


def is_reduced(w: str) -> bool:
    return all(x != y.swapcase() for x, y in zip(w, w[1:]))


def cyclic_reduce(w: str) -> tuple[str, str]:
    """Return (core, conjugator) with w = conjugator . core . conjugator^-1."""
    w = reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1].swapcase():
        i += 1
        j -= 1
    return w[i:j], w[:i]


def cyclic_length(w: str) -> int:
    return len(cyclic_reduce(w)[0])


def abelianize(w: str) -> tuple[int, int]:
    """Exponent sums (p, q) of a and b."""
    _check(w)
    return w.count("a") - w.count("A"), w.count("b") - w.count("B")


def determinant(basis: Basis) -> int:
    p, q = abelianize(basis.first)
    r, s = abelianize(basis.second)
    return p * s - q * r


def nielsen(move: str, basis: Basis) -> Basis:
    """Apply one of the Nielsen moves S, I, L, R to a pair of words."""
    u, v = basis
    if move == "S":
        return Basis(v, u)
    if move == "I":
        return Basis(inverse(u), v)
    if move == "L":
        return Basis(u, mul(u, v))
    if move == "R":
        return Basis(mul(u, v), v)
    raise ValueError(f"unknown Nielsen move {move!r}")


def axis_window(w: str, radius: int) -> AxisWindow:
    """Consecutive vertices of the axis of w in the Cayley graph.

    Points are conjugator . (prefixes of core^k) for k = -radius .. radius,
    so index ``radius`` (the middle) is the conjugator itself.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    core, conj = cyclic_reduce(w)
    if not core:
        raise ValueError("the trivial word has no axis")
    n = len(core)
    fwd = [conj]
    for k in range(radius):
        fwd.append(fwd[-1] + core[k % n])
    inv = inverse(core)
    back = [conj]
    for k in range(radius):
        back.append(back[-1] + inv[k % n])
    points = [reduce(p) for p in back[:0:-1]] + [reduce(p) for p in fwd]
    return AxisWindow(core, conj, tuple(points))


def is_palindrome(w: str) -> bool:
    return w == w[::-1]


def substitute(w: str, images: dict[str, str]) -> str:
    """Replace a and b by the given words (inverses handled) and reduce."""
    full = dict(images)
    for x in ("a", "b"):
        full.setdefault(x, x)
        full[x.upper()] = inverse(full[x])
    return reduce("".join(full[x] for x in w))
