"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import filecmp
import time
from math import gcd

import numpy as np
import pytest

from conftest import record
from primstab.bip import bip_probe
from primstab.certify import (
    Certificate, certify_primitive_stability, check_irreducible, scan_q, validate_certificate,
)
from primstab.cli import main
from primstab.constructions import (
    boost, boost_along, half_turn, random_coxeter_triple, random_isometry, random_loxodromic,
)
from primstab.farey import Fraction, christoffel, edges_at_level, enumerate_edges, farey_basis, palindromic_words
from primstab.freegroup import abelianize, cyclic_reduce, is_palindrome
from primstab.hexagon import EndpointOracle, check_half_length, verify_coxeter
from primstab.minkowski import (
    Kind, asymptotic_offset, axis, classify, ideal, inner, lorentz_inverse, null_pair, origin, r_threshold,
    translation_length,
)
from primstab.rep import RepF2, fixture_path, load_fixture


def test_criterion_01_christoffel():
    t0 = time.perf_counter()
    bad = []
    for q in range(0, 21):
        for p in range(-20, 21):
            if (q == 0 and abs(p) != 1) or (q > 0 and gcd(p, q) != 1):
                continue
            w = christoffel(Fraction(p, q))
            positive = set(w) <= ({"a", "b"} if p >= 0 else {"A", "b"})
            if abelianize(w) != (p, q) or cyclic_reduce(w) != (w, "") or not positive:
                bad.append((p, q, w))
    ex1 = christoffel(Fraction(3, 4)) == "ab" * 3 + "b"
    basis = tuple(farey_basis((Fraction.of(-3, 4), Fraction.of(-5, 7))).basis)
    ex2 = basis == ("Ab" * 3 + "b", "Ab" + ("Ab" * 2 + "b") * 2)
    elapsed = time.perf_counter() - t0
    ok = not bad and ex1 and ex2 and elapsed < 10
    record(1, ok, f"{len(bad)} bad fractions, examples {ex1}/{ex2}, {elapsed:.2f} s")
    assert ok, bad[:5]


def test_criterion_02_level_counts():
    t0 = time.perf_counter()
    counts = {}
    for e in enumerate_edges(10):
        counts[e.level] = counts.get(e.level, 0) + 1
    direct = all(len(edges_at_level(n)) == 2 ** (n + 1) for n in range(11))
    elapsed = time.perf_counter() - t0
    ok = all(counts[n] == 2 ** (n + 1) for n in range(11)) and direct and elapsed < 5
    record(2, ok, f"counts {[counts[n] for n in range(11)]}, {elapsed:.2f} s")
    assert ok


def _sample_points(rng, d, n, radius=3.0):
    u = rng.standard_normal((n, d))
    u /= np.linalg.norm(u, axis=1)[:, None]
    r = radius * rng.random(n)
    return np.column_stack([np.sinh(r)[:, None] * u, np.cosh(r)])


def test_criterion_03_translation_length():
    rng = np.random.default_rng(3)
    worst_inv, worst_bound = 0.0, np.inf
    for d in (2, 3, 4, 5):
        x = _sample_points(rng, d, 10_000)
        J = np.ones(d + 1)
        J[-1] = -1.0
        for _ in range(100):
            g = random_loxodromic(rng, d, scale=1.5)
            ell = translation_length(g)
            h = random_isometry(rng, d, 1.0)
            worst_inv = max(worst_inv, abs(translation_length(h @ g @ lorentz_inverse(h)) - ell))
            gx = x @ g.T
            ch = -np.sum(x * gx * J, axis=1)
            disp = np.arccosh(np.maximum(ch, 1.0))
            worst_bound = min(worst_bound, float(np.min(disp - ell)))
    ok = worst_inv < 1e-8 and worst_bound >= -1e-6
    record(3, ok, f"max conjugation change {worst_inv:.2e}, min d(x,gx) - trans {worst_bound:.2e}")
    assert ok


def test_criterion_04_half_length_coxeter():
    rng = np.random.default_rng(4)
    worst, inconclusive, bad_triples, n_edges = 0.0, 0, 0, 0
    for d in (3, 4):
        for _ in range(20):
            rep = RepF2.from_coxeter(*random_coxeter_triple(rng, d))
            bad_triples += not verify_coxeter(rep).verified
            oracle = EndpointOracle(rep)
            for e in enumerate_edges(6):
                hl = check_half_length(rep, e, 0.0, oracle)
                n_edges += 1
                if not hl.deviations:
                    inconclusive += 1
                    continue
                worst = max(worst, *hl.deviations.values())
    ok = worst <= 1e-6 and inconclusive == 0 and bad_triples == 0
    record(4, ok, f"{n_edges} edges, max |trans/2 - geom| {worst:.2e}, {inconclusive} inconclusive")
    assert ok


def test_criterion_05_certification():
    t0 = time.perf_counter()
    rep = load_fixture("schottky")
    primsys = scan_q(rep, 4.0, 9).primsys_upper
    cert = certify_primitive_stability(rep, 8, 4.0, seed=0)
    certified = isinstance(cert, Certificate)
    val = validate_certificate(cert, rep, n_words=1000, max_word_length=40, seed=0) if certified else None
    elapsed = time.perf_counter() - t0
    ok = (primsys >= 4 and certified and cert.threshold_level <= 8 and val.n_words == 1000
          and not val.violations and elapsed < 60)
    detail = (f"N = {cert.threshold_level}, m = {cert.m:.4f}, c = {cert.c:.4f}, "
              f"{len(val.violations)} violations in {val.n_checks} checks, {elapsed:.1f} s"
              if certified else f"not certified: {cert.reason}")
    record(5, ok, detail)
    assert ok


def test_criterion_06_irreducibility():
    rep = load_fixture("reducible")
    scan = scan_q(rep, 4.0, 6)
    ab = translation_length(rep.image("ab"))
    in_scan = any(r.word == "ab" and abs(r.trans - 2.0) < 1e-8 for r in scan.rows)
    chain = [t for _, t in scan.decreasing_chain]
    strict = len(chain) >= 3 and all(a > b for a, b in zip(chain, chain[1:]))
    status = check_irreducible(rep).status
    ok = abs(ab - 2.0) < 1e-8 and in_scan and strict and status == "reducible"
    record(6, ok, f"trans(AB) = {ab:.12f}, chain {[round(t, 6) for t in chain]}, {status}")
    assert ok


def test_criterion_07_asymptotic_offsets():
    rng = np.random.default_rng(7)
    worst, n = 0.0, 0
    while n < 50:
        g = random_loxodromic(rng, 3)
        h = random_loxodromic(rng, 3)
        ax = axis(g)
        if -null_pair(ideal(h @ ax.target), ax.source) < 1e-6:
            continue
        off = asymptotic_offset(g, h, n_max=30)
        worst = max(worst, abs(off.offsets[29] - off.offsets[24]))
        n += 1
    deg = asymptotic_offset(boost(3, 1.0), half_turn(3), n_max=40)
    ok = worst < 1e-3 and deg.degenerate and deg.trans_last < 1e-2
    record(7, ok, f"max |t_30 - t_25| {worst:.2e}; degenerate pair trans(g^40 h) = {deg.trans_last:.2e}")
    assert ok


def test_criterion_08_r_threshold():
    grid = [0.01, 0.1, 1.0, 10.0, 50.0]
    R = [r_threshold(mu) for mu in grid]
    res = max(abs(4 * np.exp(-r) + 2 * np.exp(-2 * r) - np.tanh(mu)) for r, mu in zip(R, grid))
    ok = res <= 1e-10 and all(a > b for a, b in zip(R, R[1:]))
    record(8, ok, f"max residual {res:.1e}, R = {[round(r, 5) for r in R]}")
    assert ok


def test_criterion_09_bip():
    rep = load_fixture("schottky")
    report = bip_probe(rep, 8)
    lines = []
    ok = not report.findings
    for label in ("L", "A", "B"):
        sup, inc = report.supremum[label], report.increment[label]
        good = np.isfinite(sup) and inc < 0.1 * sup
        ok &= bool(good)
        lines.append(f"{label}: sup {sup:.4f} inc {inc:.1e}")
    odd = [w for label in ("L", "A", "B") for w in palindromic_words(label, 8, palindromes_only=False)
           if len(w.word) % 2]
    ok &= all(is_palindrome(w.word) for w in odd)
    record(9, bool(ok), "; ".join(lines) + f"; {len(odd)} odd representatives checked")
    assert ok


COMMANDS = [
    ["words", "--max-level", "3"],
    ["classify", "SCHOTTKY"],
    ["scan-q", "--lambda", "4", "--max-level", "6", "SCHOTTKY"],
    ["check-hlp", "--max-level", "4", "SCHOTTKY"],
    ["certify-ps", "--max-level", "8", "--lambda", "4", "--seed", "0", "--validate", "200", "SCHOTTKY"],
    ["certify-ps", "--max-level", "4", "--seed", "0", "REDUCIBLE"],
    ["bip-probe", "--max-level", "6", "SCHOTTKY"],
]


def test_criterion_10_reproducible(tmp_path):
    paths = {"SCHOTTKY": str(fixture_path("schottky.json")), "REDUCIBLE": str(fixture_path("reducible.json"))}
    differ = []
    for i, cmd in enumerate(COMMANDS):
        args = [paths.get(a, a) for a in cmd]
        dirs = []
        for jobs in ("1", "8"):
            out = tmp_path / f"{i}-{jobs}"
            main([*args, "--jobs", jobs, "--out", str(out)])
            dirs.append(out)
        names = sorted(p.name for p in dirs[0].iterdir())
        same = names == sorted(p.name for p in dirs[1].iterdir())
        _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
        if not same or mismatch or errors:
            differ.append((cmd[0], mismatch, errors))
    ok = not differ
    record(10, ok, f"{len(COMMANDS)} commands with jobs 1 and 8, differing: {differ}")
    assert ok
