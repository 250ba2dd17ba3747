"""Bounded intersection probe.

Three base points come from the hexagon of (a, b):

    o_L = sigma_L on Ax A,  o_A = sigma_A on Ax AB,  o_B = sigma_B on Ax B

and each is paired with the palindromic representatives in one basis,
L -> (a, b), A -> (c, a), B -> (b, c) with c = (ab)^-1. The probe tabulates
d(o_X, Ax rho(w)) and reports per-level suprema. It never decides
boundedness; it only reports the numbers and how much they still move.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .farey import palindromic_words
from .freegroup import is_palindrome
from .hexagon import build_hexagon_words
from .minkowski import DegenerateError, DomainError, Kind, axis, classify, dist_point_geodesic
from .rep import RepF2

LABELS = ("L", "A", "B")


def base_points(rep: RepF2) -> dict:
    """{"L": o_L, "A": o_A, "B": o_B} from the level-0 hexagon of (a, b)."""
    try:
        hexagon = build_hexagon_words(rep, "a", "b")
    except DegenerateError as e:
        raise DomainError(f"base points undefined: {e}") from None
    if hexagon.is_degenerate:
        bad = [s for s, v in hexagon.degenerate.items() if v]
        raise DomainError(f"base points undefined: degenerate side(s) {bad} in the hexagon of (a, b)")
    return {
        "L": hexagon.foot("L", "U"),
        "A": hexagon.foot("U", "UV"),
        "B": hexagon.foot("V", "V"),
    }


@dataclass
class BipRow:
    label: str
    level: int
    word: str        # over the basis letters of the label
    e_word: str      # over a, A, b, B
    dist: float      # nan when the image is not loxodromic
    kind: str


@dataclass
class BipReport:
    max_level: int
    rows: dict                  # label -> list of BipRow
    level_sup: dict             # label -> per-level max distance (nan for empty levels)
    running_sup: dict           # label -> running max up to each level
    supremum: dict              # label -> overall max
    increment: dict             # label -> running-max growth over the last three levels
    max_step: dict              # label -> largest single-level growth over the last three levels
    findings: list = field(default_factory=list)


def _label_rows(rep: RepF2, label: str, o: np.ndarray, max_level: int) -> list:
    rows = []
    for pw in palindromic_words(label, max_level, palindromes_only=True):
        w = pw.e_word()
        g = rep.image(w)
        kind = classify(g)
        if kind is Kind.LOXODROMIC:
            dist = dist_point_geodesic(o, axis(g))
        else:
            dist = float("nan")
        rows.append(BipRow(label, pw.level, pw.word, w, dist, kind.value))
    rows.sort(key=lambda r: (r.level, r.word))
    return rows


def bip_probe(rep: RepF2, max_level: int, jobs: int = 1) -> BipReport:
    points = base_points(rep)
    work = [(label, points[label]) for label in LABELS]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(lambda t: _label_rows(rep, t[0], t[1], max_level), work))
    else:
        results = [_label_rows(rep, label, o, max_level) for label, o in work]
    rows = dict(zip(LABELS, results))

    level_sup, running, sup, inc, step, findings = {}, {}, {}, {}, {}, []
    for label in LABELS:
        per = [float("nan")] * (max_level + 1)
        for r in rows[label]:
            if not is_palindrome(r.word):
                findings.append(f"{label}: tabulated word {r.word} is not a palindrome")
            if np.isnan(r.dist):
                findings.append(f"{label}: {r.e_word} is {r.kind}, not loxodromic")
                continue
            if np.isnan(per[r.level]) or r.dist > per[r.level]:
                per[r.level] = r.dist
        run, cur = [], float("nan")
        for v in per:
            if not np.isnan(v):
                cur = v if np.isnan(cur) else max(cur, v)
            run.append(cur)
        level_sup[label] = per
        running[label] = run
        sup[label] = run[-1]
        k = max(0, max_level - 3)
        inc[label] = run[-1] - run[k]
        diffs = [run[i] - run[i - 1] for i in range(k + 1, max_level + 1)]
        step[label] = max(diffs) if diffs else 0.0
    return BipReport(max_level, rows, level_sup, running, sup, inc, step, findings)
