"""Farey tessellation, Christoffel words and L/R galleries.

Vertices are signed fractions p/q with q >= 0. The two infinities 1/0 and
-1/0 are the same point of the projective line but carry the sign of the
start basis (a, b) or (a^-1, b) they come from.

An oriented edge (r1, r2) carries a basis (x, y) with x the Christoffel word
of r1 and y the one of r2. Starting from (eps/0, 0/1) with basis (a^eps, b),
the move L goes to (r1, r1+r2) with basis (x, xy) and R goes to
(r1+r2, r2) with basis (xy, y).
"""

from __future__ import annotations

import fractions
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterator

from .freegroup import Basis, abelianize, is_palindrome, reduce


@dataclass(frozen=True, order=True)
class Fraction:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q < 0 or (q == 0 and abs(p) != 1) or gcd(p, q) != 1:
            raise ValueError(f"not a normalized fraction: {p}/{q}")

    @classmethod
    def of(cls, p: int, q: int) -> "Fraction":
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a fraction")
        if q < 0:
            p, q = -p, -q
        g = gcd(p, q)
        return cls(p // g, q // g)

    @classmethod
    def parse(cls, text: str) -> "Fraction":
        s = text.strip()
        if s in ("inf", "oo", "+inf"):
            return INF
        if s == "-inf":
            return NEG_INF
        if "/" in s:
            p, q = s.split("/")
            return cls.of(int(p), int(q))
        return cls.of(int(s), 1)

    @property
    def sign(self) -> int:
        return (self.p > 0) - (self.p < 0)

    def is_infinite(self) -> bool:
        return self.q == 0

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def key(self) -> tuple:
        """Sort key by value on the extended line: -1/0 < ... < 1/0."""
        if self.q == 0:
            return (self.p, 0)
        return (0, fractions.Fraction(self.p, self.q))


INF = Fraction(1, 0)
NEG_INF = Fraction(-1, 0)
ZERO = Fraction(0, 1)


def _cmp(r: Fraction, s: Fraction) -> int:
    """Sign of r - s on the extended line (signed infinities)."""
    x = r.p * s.q - s.p * r.q
    if r.q == 0 and s.q == 0:
        x = r.p - s.p
    return (x > 0) - (x < 0)


def is_edge(r1: Fraction, r2: Fraction) -> bool:
    return abs(r1.p * r2.q - r2.p * r1.q) == 1


def farey_add(r1: Fraction, r2: Fraction) -> Fraction:
    if not is_edge(r1, r2):
        raise ValueError(f"{r1} and {r2} do not span a Farey edge")
    return Fraction.of(r1.p + r2.p, r1.q + r2.q)


def fraction_of_word(w: str) -> Fraction:
    """Projective class of the abelianization, with the sign tag of a^+-1."""
    p, q = abelianize(w)
    if q < 0 or (q == 0 and p == 0):
        p, q = -p, -q
    if q == 0:
        return INF if p > 0 else NEG_INF
    return Fraction.of(p, q)


@dataclass(frozen=True)
class FareyEdge:
    endpoints: tuple
    basis: Basis
    gallery: str
    start_sign: int

    @property
    def level(self) -> int:
        return len(self.gallery)

    @property
    def address(self) -> str:
        return ("+" if self.start_sign > 0 else "-") + self.gallery

    def child(self, move: str) -> "FareyEdge":
        r1, r2 = self.endpoints
        x, y = self.basis
        m = farey_add(r1, r2)
        if move == "L":
            return FareyEdge((r1, m), Basis(x, x + y), self.gallery + "L", self.start_sign)
        if move == "R":
            return FareyEdge((m, r2), Basis(x + y, y), self.gallery + "R", self.start_sign)
        raise ValueError(f"unknown move {move!r}")

    def children(self) -> tuple:
        return self.child("L"), self.child("R")

    def new_word(self) -> str:
        """The Farey sum word xy, which first appears in the children."""
        return self.basis.first + self.basis.second


def root_edge(sign: int = 1) -> FareyEdge:
    if sign > 0:
        return FareyEdge((INF, ZERO), Basis("a", "b"), "", 1)
    return FareyEdge((NEG_INF, ZERO), Basis("A", "b"), "", -1)


def edge_from_gallery(gallery: str, sign: int = 1) -> FareyEdge:
    e = root_edge(sign)
    for m in gallery:
        e = e.child(m)
    return e


def _between(r: Fraction, lo: Fraction, hi: Fraction) -> bool:
    """r in the closed interval spanned by lo and hi."""
    a, b = _cmp(r, lo), _cmp(r, hi)
    return a * b <= 0


def _dichotomy(r: Fraction):
    """Walk the tree towards r; yield edges until the mediant equals r."""
    sign = 1 if r.p > 0 else -1
    e = root_edge(sign)
    while True:
        m = farey_add(*e.endpoints)
        yield e, m
        if m == r:
            return
        r1, _ = e.endpoints
        e = e.child("L" if _between(r, r1, m) else "R")


def christoffel(r: Fraction) -> str:
    """Christoffel word of the primitive class with slope r."""
    if r == INF:
        return "a"
    if r == NEG_INF:
        return "A"
    if r == ZERO:
        return "b"
    for e, m in _dichotomy(r):
        pass
    return e.new_word()


def level(x) -> int:
    """Gallery length for an edge; for a fraction, level of the first edge containing it."""
    if isinstance(x, FareyEdge):
        return x.level
    if x.q == 0 or x == ZERO:
        return 0
    for e, m in _dichotomy(x):
        pass
    return e.level + 1


def farey_basis(endpoints) -> FareyEdge:
    """The edge with the given (unordered) endpoints, found by simultaneous dichotomy."""
    r, s = endpoints
    if not is_edge(r, s):
        raise ValueError(f"{r} and {s} do not span a Farey edge")
    signs = {t.sign for t in (r, s) if t.q != 0 and t.p != 0}
    if len(signs) > 1:
        raise ValueError(f"{r} and {s} do not span a Farey edge")
    sign = signs.pop() if signs else (r.sign or s.sign or 1)
    if {r, s} & {INF, NEG_INF}:
        if sign < 0 and INF in (r, s):
            r, s = [NEG_INF if t == INF else t for t in (r, s)]
        if sign > 0 and NEG_INF in (r, s):
            if ZERO in (r, s):
                sign = -1
            else:
                r, s = [INF if t == NEG_INF else t for t in (r, s)]
    target = {r, s}
    e = root_edge(sign)
    while set(e.endpoints) != target:
        r1, _ = e.endpoints
        m = farey_add(*e.endpoints)
        if all(_between(t, r1, m) for t in target):
            e = e.child("L")
        else:
            e = e.child("R")
        if e.level > abs(r.p) + abs(s.p) + r.q + s.q + 2:
            raise ValueError(f"{r} and {s} do not span a Farey edge")
    return e


def edges_at_level(n: int) -> list:
    """All 2^(n+1) edges of level n, ordered by start sign (+ first) then gallery."""
    out = []
    for sign in (1, -1):
        layer = [root_edge(sign)]
        for _ in range(n):
            layer = [c for e in layer for c in e.children()]
        out.extend(layer)
    return out


def enumerate_edges(max_level: int) -> Iterator[FareyEdge]:
    """Edges of levels 0..max_level, level by level in the deterministic order."""
    layers = {1: [root_edge(1)], -1: [root_edge(-1)]}
    for n in range(max_level + 1):
        for sign in (1, -1):
            yield from layers[sign]
        if n < max_level:
            for sign in (1, -1):
                layers[sign] = [c for e in layers[sign] for c in e.children()]


def galleries(n: int) -> Iterator[str]:
    for t in product("LR", repeat=n):
        yield "".join(t)


def vertices(max_level: int) -> list:
    """(level, fraction, word) for every Christoffel vertex of level <= max_level.

    The level-0 vertices are a and b; every edge of level k contributes its
    Farey sum word at level k + 1. Sorted by (level, fraction value).
    """
    rows = [(0, INF, "a"), (0, ZERO, "b")]
    for e in enumerate_edges(max_level - 1) if max_level > 0 else ():
        m = farey_add(*e.endpoints)
        rows.append((e.level + 1, m, e.new_word()))
    rows.sort(key=lambda t: (t[0], t[1].key()))
    return rows


# Palindromic variant ------------------------------------------------------

# label -> images of the symbolic letters a, b; c stands for (ab)^-1
PALINDROMIC_BASES = {"L": ("a", "b"), "A": ("c", "a"), "B": ("b", "c")}


def palindromic_step(move: str, basis: Basis) -> Basis:
    """Parity-twisted L/R: the product is uv or vu depending on |uv|."""
    u, v = basis
    even = len(reduce(u + v)) % 2 == 0
    if move == "L":
        return Basis(u, reduce(v + u) if even else reduce(u + v))
    if move == "R":
        return Basis(reduce(v + u) if even else reduce(u + v), v)
    raise ValueError(f"unknown move {move!r}")


@dataclass(frozen=True)
class PalindromicWord:
    word: str          # over the symbolic basis letters a, A, b, B
    level: int
    label: str

    def letters(self) -> str:
        """The word spelled with the basis letters of its label (c, C allowed)."""
        x, y = PALINDROMIC_BASES[self.label]
        table = {"a": x, "A": x.upper(), "b": y, "B": y.upper()}
        return "".join(table[t] for t in self.word)

    def e_word(self) -> str:
        table = {"a": "a", "A": "A", "b": "b", "B": "B", "c": "BA", "C": "ab"}
        return reduce("".join(table[t] for t in self.letters()))


def palindromic_words(label: str, max_level: int, palindromes_only: bool = True) -> Iterator[PalindromicWord]:
    """Representatives from the parity-twisted tree in the basis of ``label``.

    Words are produced symbolically over (a, b) and reinterpreted in the
    designated basis: (a, b) for L, (c, a) for A and (b, c) for B, with
    c = (ab)^-1. Parity is the length in that basis. Each word is emitted
    once, at the level where it first appears.
    """
    if label not in PALINDROMIC_BASES:
        raise ValueError(f"unknown basis label {label!r}")
    seen = set()

    def emit(w, lv):
        if w in seen:
            return None
        seen.add(w)
        if palindromes_only and not is_palindrome(w):
            return None
        return PalindromicWord(w, lv, label)

    layer = [Basis("a", "b"), Basis("A", "b")]
    for w in ("a", "A", "b"):
        out = emit(w, 0)
        if out:
            yield out
    for n in range(1, max_level + 1):
        nxt = []
        for b in layer:
            left = palindromic_step("L", b)
            right = palindromic_step("R", b)
            for w in (left.second, right.first):
                out = emit(w, n)
                if out:
                    yield out
            nxt.extend((left, right))
        layer = nxt
