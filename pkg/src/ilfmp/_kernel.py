"""Vectorised truth-set evaluation shared by both semantics.

A frame is reduced to an accessibility matrix ``R[x, y]`` and a witness tensor
``W[x, y, z]`` meaning "z may answer y on behalf of x" in the ``|>`` clause:

* Veltman frames: ``W[x, y, z] = y S_x z``
* simplified frames: ``W[x, y, z] = x R z and y S z``
* simplified frames, alternative clause: ``W[x, y, z] = y S z``

Truth values are boolean arrays of shape ``(V, n)``, one row per valuation, so
scheme validity over every valuation is a handful of array operations.
"""

from __future__ import annotations

import numpy as np

from .errors import BoundError
from .formula import And, Bot, Box, Formula, Imp, Or, Rhd, Top, Var, postorder

MAX_VALUATION_BITS = 20


def valuation_table(names: tuple[str, ...], n: int) -> dict[str, np.ndarray]:
    """Every assignment of the variables ``names`` over ``n`` worlds.

    Row ``v`` makes variable ``i`` true at world ``w`` iff bit ``i*n + w`` of
    ``v`` is set.
    """
    bits = n * len(names)
    if bits > MAX_VALUATION_BITS:
        raise BoundError(
            f"{len(names)} variables over {n} worlds needs 2^{bits} valuations "
            f"(limit 2^{MAX_VALUATION_BITS})"
        )
    rows = np.arange(1 << bits, dtype=np.int64)[:, None]
    out = {}
    for i, name in enumerate(names):
        shifts = np.arange(i * n, (i + 1) * n, dtype=np.int64)[None, :]
        out[name] = ((rows >> shifts) & 1).astype(bool)
    return out


class Kernel:
    def __init__(self, R: np.ndarray, W: np.ndarray, atoms: dict[str, np.ndarray]):
        self.n = R.shape[0]
        self.R = R.astype(bool)
        self.Rf = self.R.astype(np.float32)
        self.Wf = W.reshape(self.n * self.n, self.n).astype(np.float32)
        self.atoms = atoms
        rows = {a.shape[0] for a in atoms.values()}
        self.V = rows.pop() if rows else 1
        self.cache: dict[Formula, np.ndarray] = {}

    def truth(self, f: Formula) -> np.ndarray:
        for g in postorder(f):
            if g not in self.cache:
                self.cache[g] = self._node(g)
        return self.cache[f]

    def _node(self, g: Formula) -> np.ndarray:
        c = self.cache
        if isinstance(g, Var):
            if g.name in self.atoms:
                return self.atoms[g.name]
            return np.zeros((self.V, self.n), dtype=bool)
        if isinstance(g, Top):
            return np.ones((self.V, self.n), dtype=bool)
        if isinstance(g, Bot):
            return np.zeros((self.V, self.n), dtype=bool)
        if isinstance(g, Imp):
            return ~c[g.left] | c[g.right]
        if isinstance(g, Or):
            return c[g.left] | c[g.right]
        if isinstance(g, And):
            return c[g.left] & c[g.right]
        if isinstance(g, Box):
            missing = (~c[g.body]).astype(np.float32) @ self.Rf.T
            return missing == 0
        if isinstance(g, Rhd):
            a, b = c[g.left], c[g.right]
            n = self.n
            answered = (b.astype(np.float32) @ self.Wf.T).reshape(self.V, n, n) > 0
            bad = self.R[None, :, :] & a[:, None, :] & ~answered
            return ~bad.any(axis=2)
        raise TypeError(f"not a formula: {g!r}")


def refutation(kernel: Kernel, f: Formula) -> tuple[int, int] | None:
    """First (valuation row, world index) where ``f`` is false, scanning rows first."""
    t = kernel.truth(f)
    bad = np.argwhere(~t)
    if len(bad) == 0:
        return None
    v, w = bad[0]
    return int(v), int(w)
