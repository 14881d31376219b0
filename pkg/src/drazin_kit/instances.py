"""Problem instances: pseudo-block quadruples and 2x2 block matrices."""

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import ShapeError


@dataclass(frozen=True)
class PseudoBlockInstance:
    """Quadruple ``(P, Q, R, S)`` of equal-size square matrices.

    ``family`` names the hypothesis set the instance is meant to satisfy
    (``"PseudoBlock"``, ``"NilSquares"``, ``"SpSr"``, ``"RsQs"``, ...); it is
    a label only, :func:`drazin_kit.hypotheses.check` does the verifying.
    """

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    family: str = "SpSr"

    def __post_init__(self):
        mats = [la.as_cmatrix(x, name) for x, name in zip(self.blocks, "PQRS")]
        n = la.require_square(mats[0], "P")
        for name, x in zip("QRS", mats[1:]):
            if x.shape != (n, n):
                raise ShapeError(f"{name} has shape {x.shape}, expected {(n, n)}")
        for attr, x in zip("pqrs", mats):
            object.__setattr__(self, attr, x)

    @property
    def blocks(self):
        return (self.p, self.q, self.r, self.s)

    @property
    def n(self):
        return self.p.shape[0]

    @property
    def total(self):
        """``N = P + Q + R + S``."""
        return self.p + self.q + self.r + self.s

    def transposed(self):
        """``(Q^T, P^T, R^T, S^T)``: maps the RS = QS = 0 family onto SP = SR = 0."""
        return PseudoBlockInstance(self.q.T, self.p.T, self.r.T, self.s.T, self.family)


@dataclass(frozen=True)
class BlockInstance:
    """Blocks of ``M = [[A, B], [C, D]]`` with A (m x m) and D (n x n)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    family: str = ""

    def __post_init__(self):
        a, b, c, d = (la.as_cmatrix(x, name) for x, name in zip(self.blocks, "ABCD"))
        m = la.require_square(a, "A")
        n = la.require_square(d, "D")
        if b.shape != (m, n) or c.shape != (n, m):
            raise ShapeError(
                f"non-conformal blocks: A {a.shape}, B {b.shape}, C {c.shape}, D {d.shape}"
            )
        for attr, x in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, attr, x)

    @property
    def blocks(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def m(self):
        return self.a.shape[0]

    @property
    def n(self):
        return self.d.shape[0]

    @property
    def matrix(self):
        return la.assemble_block2x2(self.a, self.b, self.c, self.d)
