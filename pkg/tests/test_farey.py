from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from primstab.farey import (
    INF, ZERO, Fraction, christoffel, edge_from_gallery, edges_at_level, enumerate_edges,
    farey_add, farey_basis, is_edge, level, palindromic_step, palindromic_words, vertices,
)
from primstab.freegroup import Basis, abelianize, cyclic_reduce, determinant, is_palindrome


def mechanical(p: int, q: int) -> str:
    """Lower mechanical word with p letters a and q letters b, built from floors."""
    n = p + q
    return "".join("b" if ((k + 1) * q) // n - (k * q) // n else "a" for k in range(n))


def is_rotation(u: str, v: str) -> bool:
    return len(u) == len(v) and u in v + v


F = Fraction.of


@pytest.mark.parametrize("r1, r2, m", [(F(1, 1), F(1, 2), F(2, 3)), (INF, ZERO, F(1, 1)),
                                        (F(-1, 1), F(-1, 2), F(-2, 3))])
def test_farey_add(r1, r2, m):
    assert farey_add(r1, r2) == m


def test_farey_add_rejects_non_edge():
    with pytest.raises(ValueError):
        farey_add(F(1, 3), F(2, 3))


@pytest.mark.parametrize("r, w", [(F(3, 4), "abababb"), (INF, "a"), (ZERO, "b")])
def test_christoffel_examples(r, w):
    assert christoffel(r) == w


def test_farey_basis_examples():
    e = farey_basis((F(-3, 4), F(-5, 7)))
    assert tuple(e.basis) == ("Ab" * 3 + "b", "Ab" + ("Ab" * 2 + "b") * 2)
    assert tuple(farey_basis((F(1, 1), F(1, 2))).basis) == ("ab", "abb")
    e0 = farey_basis((INF, ZERO))
    assert tuple(e0.basis) == ("a", "b") and e0.gallery == ""


@pytest.mark.parametrize("x, n", [(edge_from_gallery(""), 0), (INF, 0), (F(3, 4), 4)])
def test_level_examples(x, n):
    assert level(x) == n


def test_level_of_first_appearance():
    # brute force: the first level at which 3/4's word belongs to an edge basis
    target = christoffel(F(3, 4))
    first = next(e.level for e in enumerate_edges(6) if target in e.basis)
    assert first == level(F(3, 4))


def test_level_one_edges():
    got = {tuple(e.basis) for e in edges_at_level(1)}
    assert got == {("a", "ab"), ("ab", "b"), ("A", "Ab"), ("Ab", "b")}
    assert {tuple(e.basis) for e in edges_at_level(0)} == {("a", "b"), ("A", "b")}


@pytest.mark.parametrize("n", range(8))
def test_level_counts(n):
    assert len(edges_at_level(n)) == 2 ** (n + 1)
    assert sum(1 for e in enumerate_edges(n) if e.level == n) == 2 ** (n + 1)


def test_vertices_match_christoffel():
    for lv, r, w in vertices(5):
        assert christoffel(r) == w
        assert level(r) == lv


fractions = st.tuples(st.integers(-20, 20), st.integers(0, 20)).filter(
    lambda t: (t[1] > 0 and gcd(*t) == 1) or (t[1] == 0 and abs(t[0]) == 1))


@given(fractions)
def test_christoffel_is_mechanical_rotation(pq):
    p, q = pq
    r = Fraction(p, q)
    w = christoffel(r)
    assert abelianize(w) == (p, q)
    assert cyclic_reduce(w) == (w, "")
    letters = set(w)
    assert letters <= ({"a", "b"} if p >= 0 else {"A", "b"})
    assert is_rotation(w.replace("A", "a"), mechanical(abs(p), q))


@given(st.text(alphabet="LR", max_size=12), st.sampled_from([1, -1]))
def test_edge_bases_are_unimodular_and_found_again(gallery, sign):
    e = edge_from_gallery(gallery, sign)
    assert abs(determinant(e.basis)) == 1
    assert is_edge(*e.endpoints)
    for w, r in zip(e.basis, e.endpoints):
        assert christoffel(r) == w
    assert farey_basis(e.endpoints) == e


def test_palindromic_step_examples():
    ab = Basis("a", "b")
    assert palindromic_step("L", ab) == ("a", "ba")
    assert palindromic_step("R", ab) == ("ba", "b")
    assert palindromic_step("L", Basis("a", "ba")) == ("a", "aba")


@pytest.mark.parametrize("label", ["L", "A", "B"])
def test_palindromic_odd_words_are_palindromes(label):
    words = list(palindromic_words(label, 6, palindromes_only=False))
    assert {w.word for w in words if w.level == 0} == {"a", "A", "b"}
    odd = [w for w in words if len(w.word) % 2 == 1]
    assert odd
    for w in odd:
        assert is_palindrome(w.word)
        assert is_palindrome(w.letters())


def test_palindromic_words_include_aba():
    assert "aba" in {w.word for w in palindromic_words("L", 2)}
