"""Representations of F2 = <a, b> by Lorentzian matrices, and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .minkowski import TOL_FORM, DomainError, check_isometry, lorentz_inverse


class InputError(ValueError):
    pass


@dataclass
class RepF2:
    A: np.ndarray
    B: np.ndarray
    coxeter: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self) -> int:
        return self.A.shape[0] - 1

    def letters(self) -> dict:
        if "letters" not in self._cache:
            A, B = self.A, self.B
            C = lorentz_inverse(A @ B)
            self._cache["letters"] = {
                "a": A, "A": lorentz_inverse(A), "b": B, "B": lorentz_inverse(B),
                "c": C, "C": A @ B,
            }
        return self._cache["letters"]

    def image(self, word: str) -> np.ndarray:
        """Matrix of a word over a, A, b, B (and c = (ab)^-1, C = ab)."""
        L = self.letters()
        m = np.eye(self.d + 1)
        for x in word:
            m = m @ L[x]
        return m

    def conjugated(self, h: np.ndarray) -> "RepF2":
        hi = lorentz_inverse(h)
        cox = None if self.coxeter is None else tuple(h @ I @ hi for I in self.coxeter)
        return RepF2(h @ self.A @ hi, h @ self.B @ hi, cox)

    def swapped(self) -> "RepF2":
        return RepF2(self.B, self.A)

    @classmethod
    def from_coxeter(cls, x, y, z) -> "RepF2":
        x, y, z = (np.asarray(m, dtype=float) for m in (x, y, z))
        return cls(x @ y, y @ z, (x, y, z))

    def to_dict(self) -> dict:
        out = {"d": self.d, "generators": {"A": self.A.tolist(), "B": self.B.tolist()}}
        if self.coxeter is not None:
            out["coxeter"] = {k: m.tolist() for k, m in zip("xyz", self.coxeter)}
        return out


def _matrix(obj, name: str, n: int | None, tol: float) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{name}: expected a nonempty list of rows")
    rows = len(obj)
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise InputError(f"{name}: row {i} is not a list")
        if len(row) != rows:
            raise InputError(f"{name}: row {i} has {len(row)} entries, expected {rows}")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InputError(f"{name}: entry ({i},{j}) = {v!r} is not a number")
    m = np.array(obj, dtype=float)
    if n is not None and m.shape[0] != n:
        raise InputError(f"{name}: shape {m.shape} does not match d + 1 = {n}")
    try:
        return check_isometry(m, tol, name)
    except DomainError as e:
        raise InputError(str(e)) from None


def rep_from_dict(data, tol_form: float = TOL_FORM) -> RepF2:
    """Parse and validate {"d", "generators": {"A", "B"}, "coxeter": {"x","y","z"}}."""
    if not isinstance(data, dict):
        raise InputError("top level: expected a JSON object")
    d = data.get("d")
    if d is not None and (isinstance(d, bool) or not isinstance(d, int) or d < 2):
        raise InputError(f"d: expected an integer >= 2, got {d!r}")
    n = None if d is None else d + 1
    gens = data.get("generators")
    cox = data.get("coxeter")
    if gens is None and cox is None:
        raise InputError("need 'generators' or 'coxeter'")
    triple = None
    if cox is not None:
        if not isinstance(cox, dict) or set(cox) != {"x", "y", "z"}:
            raise InputError("coxeter: expected an object with keys x, y, z")
        triple = tuple(_matrix(cox[k], f"coxeter.{k}", n, tol_form) for k in "xyz")
        n = triple[0].shape[0]
        for k, I in zip("xyz", triple):
            if I.shape[0] != n:
                raise InputError(f"coxeter.{k}: shape {I.shape} differs from coxeter.x")
    if gens is not None:
        if not isinstance(gens, dict) or set(gens) != {"A", "B"}:
            raise InputError("generators: expected an object with keys A, B")
        A = _matrix(gens["A"], "generators.A", n, tol_form)
        B = _matrix(gens["B"], "generators.B", A.shape[0], tol_form)
    else:
        A, B = triple[0] @ triple[1], triple[1] @ triple[2]
    if triple is not None:
        for name, got, want in (("A", A, triple[0] @ triple[1]), ("B", B, triple[1] @ triple[2])):
            err = np.abs(got - want) / max(1.0, float(np.max(np.abs(want))))
            if err.max() > 1e-8:
                i, j = np.unravel_index(int(np.argmax(err)), err.shape)
                raise InputError(f"generators.{name}: entry ({i},{j}) differs from the Coxeter product "
                                 f"by {err[i, j]:.3e}")
    return RepF2(A, B, triple)


def load_rep(path, tol_form: float = TOL_FORM) -> RepF2:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return rep_from_dict(data, tol_form)


def fixture_path(name: str) -> Path:
    return Path(__file__).parent / "fixtures" / name


def load_fixture(name: str) -> RepF2:
    return load_rep(fixture_path(name if name.endswith(".json") else name + ".json"))
