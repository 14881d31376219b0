"""Closed-form Drazin inverses of sums of matrices.

Covers the two-term formula for ``PQ = 0``, the block-triangular formula,
corner compressions by idempotents, the four-term sum ``P + Q + R + S``
under the ``SP = SR = 0`` family (general, nilpotent-R/S, and the mirrored
``RS = QS = 0`` family), and the lift through the block matrix
``[[P, R], [S, Q]]``.

Every formula takes ``bound_factor``: each summation limit is multiplied by
it.  The formulas use the smallest admissible limits; larger limits only
add terms that vanish, which the test-suite checks by doubling them.
"""

from dataclasses import dataclass

import numpy as np

from . import hypotheses as hyp
from . import linalg as la
from .drazin import axiom_residuals, drazin, index
from .errors import HypothesisViolation, IllConditionedError, PreconditionError, ShapeError
from .instances import PseudoBlockInstance
from .linalg import DEFAULT_TOL


@dataclass(frozen=True)
class SummationBounds:
    l: int
    m: int
    n: int
    g: int


@dataclass(frozen=True)
class SumOfFourTrace:
    t: np.ndarray
    x: np.ndarray
    pd: np.ndarray
    td: np.ndarray
    bounds: SummationBounds


@dataclass(frozen=True)
class PierceContext:
    """Pair of idempotents ``(e, f)`` used for corner compressions."""

    e: np.ndarray
    f: np.ndarray = None
    eq_rtol: float = DEFAULT_TOL.eq_rtol

    def __post_init__(self):
        e = la.as_cmatrix(self.e, "e")
        f = e if self.f is None else la.as_cmatrix(self.f, "f")
        if e.shape != f.shape:
            raise ShapeError("idempotents e and f differ in shape")
        for name, x in (("e", e), ("f", f)):
            if la.rel_diff(x @ x, x) > self.eq_rtol:
                raise PreconditionError(f"{name} is not idempotent")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)


class _Dz:
    """Drazin data of one matrix: inverse, index, projector, cached powers."""

    def __init__(self, x, tol, scale=0.0):
        res = drazin(x, tol, scale)
        self.x = x
        self.d = res.d
        self.k = res.index
        self.pi = res.projector
        self._pow = [la.eye(x.shape[0])]
        self._dpow = [la.eye(x.shape[0])]

    def pow(self, j):
        while len(self._pow) <= j:
            self._pow.append(self._pow[-1] @ self.x)
        return self._pow[j]

    def dpow(self, j):
        while len(self._dpow) <= j:
            self._dpow.append(self._dpow[-1] @ self.d)
        return self._dpow[j]


def _msum(terms, m, n=None):
    out = la.zeros(m, n)
    for t in terms:
        out = out + t
    return out


def hartwig_sum(p, q, tol=DEFAULT_TOL, *, bound_factor=1, check=True):
    """``(P + Q)^d`` for ``PQ = 0``.

    (P+Q)^d = Q^pi sum_{i<t} Q^i (P^d)^(i+1) + sum_{i<s} (Q^d)^(i+1) P^i P^pi
    with s = ind(P), t = ind(Q).
    """
    p = la.as_cmatrix(p, "P")
    q = la.as_cmatrix(q, "Q")
    n = la.require_square(p, "P")
    if q.shape != p.shape:
        raise ShapeError(f"P {p.shape} and Q {q.shape} differ in shape")
    if check:
        zero = la.zeros(n)
        hyp.require(PseudoBlockInstance(p, q, zero, zero, "HartwigPQ"), "HartwigPQ", tol)
    P, Q = _Dz(p, tol), _Dz(q, tol)
    s, t = P.k * bound_factor, Q.k * bound_factor
    first = Q.pi @ _msum((Q.pow(i) @ P.dpow(i + 1) for i in range(t)), n)
    second = _msum((Q.dpow(i + 1) @ P.pow(i) @ P.pi for i in range(s)), n)
    return first + second


def triangular_correction(a, c, d, tol=DEFAULT_TOL, *, bound_factor=1, _dz=None):
    """Off-diagonal block ``X`` of the Drazin inverse of ``[[A, C], [0, D]]``."""
    A, D = _dz if _dz is not None else (_Dz(a, tol), _Dz(d, tol))
    m, n = c.shape
    r, s = A.k * bound_factor, D.k * bound_factor
    x = _msum((A.dpow(i + 2) @ c @ D.pow(i) @ D.pi for i in range(s)), m, n)
    x = x + A.pi @ _msum((A.pow(i) @ c @ D.dpow(i + 2) for i in range(r)), m, n)
    return x - A.d @ c @ D.d


def triangular_block_drazin(a, c, d, orientation="upper", tol=DEFAULT_TOL, *, bound_factor=1):
    """Drazin inverse of a block-triangular matrix.

    ``orientation="upper"`` inverts ``M = [[A, C], [0, D]]`` and returns
    ``[[A^d, X], [0, D^d]]``; ``"lower"`` inverts ``N = [[D, 0], [C, A]]``
    and returns ``[[D^d, 0], [X, A^d]]``.  In both cases ``C`` is m x n
    for A m x m and D n x n, and X is the same matrix.
    """
    a = la.as_cmatrix(a, "A")
    c = la.as_cmatrix(c, "C")
    d = la.as_cmatrix(d, "D")
    m = la.require_square(a, "A")
    n = la.require_square(d, "D")
    if c.shape != (m, n):
        raise ShapeError(f"C must be {(m, n)}, got {c.shape}")
    A, D = _Dz(a, tol), _Dz(d, tol)
    x = triangular_correction(a, c, d, tol, bound_factor=bound_factor, _dz=(A, D))
    if orientation == "upper":
        return la.assemble_block2x2(A.d, x, la.zeros(n, m), D.d)
    if orientation == "lower":
        return la.assemble_block2x2(D.d, la.zeros(n, m), x, A.d)
    raise ValueError(f"orientation must be 'upper' or 'lower', got {orientation!r}")


def pierce_blocks(a, e, tol=DEFAULT_TOL):
    """Corner compressions ``(eae, ea(1-e), (1-e)ae, (1-e)a(1-e))``."""
    a = la.as_cmatrix(a)
    e = la.as_cmatrix(e, "e")
    n = la.require_square(a)
    if e.shape != a.shape:
        raise ShapeError("idempotent and matrix differ in shape")
    if la.rel_diff(e @ e, e) > tol.eq_rtol:
        raise PreconditionError("e is not idempotent")
    f = la.eye(n) - e
    return e @ a @ e, e @ a @ f, f @ a @ e, f @ a @ f


def corner_drazin(a, ctx, tol=DEFAULT_TOL):
    """``(eAf)^d = e A^d f`` when ``(eAf)^i = e A^i f`` for all i >= 1.

    The power condition is checked for ``i = 1 .. 2n``.
    """
    a = la.as_cmatrix(a)
    n = la.require_square(a)
    e, f = ctx.e, ctx.f
    if e.shape != a.shape:
        raise ShapeError("idempotents and matrix differ in shape")
    eaf = e @ a @ f
    lhs = la.eye(n)
    rhs = la.eye(n)
    for i in range(1, 2 * n + 1):
        lhs = lhs @ eaf
        rhs = rhs @ a
        dev = la.rel_diff(lhs, e @ rhs @ f)
        if dev > tol.eq_rtol:
            raise HypothesisViolation(
                f"(eAf)^{i} != e A^{i} f (residual {dev:.2e})", {"power": i, "residual": dev}
            )
    x = e @ drazin(a, tol).d @ f
    res = axiom_residuals(eaf, x, index(eaf, tol))
    if res.max() > tol.eq_rtol:
        raise IllConditionedError("e A^d f fails the Drazin axioms for eAf", res)
    return x


# -- four-term sums ---------------------------------------------------------

def _as_pseudo(inst):
    if not isinstance(inst, PseudoBlockInstance):
        inst = PseudoBlockInstance(*inst)
    return inst


class _FourParts:
    """Drazin data shared by the four-term formulas."""

    def __init__(self, inst, tol, bound_factor):
        self.n0 = inst.n
        self.P, self.Q, self.R, self.S = (_Dz(x, tol) for x in inst.blocks)
        p, q, r, s = inst.blocks
        self.t = (s + q) + self.P.pi @ (r + p)
        ind_sq = index(s + q, tol)
        ind_pr = index(self.P.pi @ (r + p), tol)
        self.l = max(self.S.k, self.Q.k) * bound_factor
        self.m = max(self.R.k, self.P.k) * bound_factor
        self.n = max(ind_sq, ind_pr) * bound_factor
        self.bound_factor = bound_factor


def _t_core(fp):
    """Expansion of ``((S + Q) + P^pi (R + P))^d``; the outer j indexes both factors."""
    P, Q, R, S = fp.P, fp.Q, fp.R, fp.S
    l, m, n, n0 = fp.l, fp.m, fp.n, fp.n0
    z = la.zeros(n0)
    total = la.zeros(n0)
    for j in range(n):
        left = _msum((P.pow(k) @ R.pow(j - k) for k in range(1, j + 1)), n0)
        left = left + R.pi @ R.pow(j)
        left = left - _msum((P.pow(i + 1) @ R.dpow(i + 1) for i in range(m)), n0) @ R.pow(j)
        right = Q.pi @ _msum((Q.pow(h) @ S.dpow(h + j + 1) for h in range(l)), n0)
        right = right - _msum((Q.dpow(k) @ S.dpow(j + 1 - k) for k in range(1, j + 1)), n0)
        right = right + _msum((Q.dpow(h + j + 1) @ S.pow(h) for h in range(l)), n0) @ S.pi
        tail = _msum((Q.pow(k) @ S.pow(j - k) for k in range(j + 1)), n0) @ S.pi
        tail = tail - Q.pi @ _msum((Q.pow(h + 1 + j) @ S.dpow(h + 1) for h in range(l)), n0)
        tail = tail - Q.pow(j + 1) @ _msum((Q.dpow(h + 1) @ S.pow(h) for h in range(l)), n0) @ S.pi
        head = _msum((P.pow(i) @ R.dpow(i + j + 1) for i in range(m)), n0) if m else z
        total = total + left @ right + head @ tail
    return P.pi @ total


def t_core_drazin(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True):
    """Drazin inverse of ``T = (S + Q) + P^pi (R + P)`` under the SpSr hypotheses."""
    inst = _as_pseudo(inst)
    if check:
        hyp.require(inst, "SpSr", tol)
    return _t_core(_FourParts(inst, tol, bound_factor))


def _x_term(fp, td, g):
    P, n0 = fp.P, fp.n0
    r = fp.R.x
    tpi = la.eye(n0) - fp.t @ td
    tk = la.eye(n0)
    x = la.zeros(n0)
    for k in range(g):
        x = x + P.dpow(k + 2) @ r @ tk @ tpi
        tk = tk @ fp.t
    return x, tpi


def sum_of_four(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True):
    """``(P + Q + R + S)^d = P^d + X + T^d`` under the SpSr hypotheses.

    Hypotheses: PQ = QP = 0, PS = SQ = QR = RP = 0, SP = SR = 0.

    Returns
    -------
    nd : ndarray
    trace : SumOfFourTrace
        ``trace.pd + trace.x + trace.td`` equals ``nd`` exactly.
    """
    inst = _as_pseudo(inst)
    if check:
        hyp.require(inst, "SpSr", tol)
    fp = _FourParts(inst, tol, bound_factor)
    td = _t_core(fp)
    g = index(fp.t, tol) * bound_factor
    x, _ = _x_term(fp, td, g)
    x = x - fp.P.d @ fp.R.x @ td
    nd = fp.P.d + x + td
    return nd, SumOfFourTrace(fp.t, x, fp.P.d, td, SummationBounds(fp.l, fp.m, fp.n, g))


def sum_of_four_nilpotent(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True, trace=False):
    """SpSr sum with nilpotent R and S, where T^d collapses to

    T^d = P^pi sum_j sum_{k<=j} P^k R^(j-k) sum_h (Q^d)^(h+j+1) S^h.
    """
    inst = _as_pseudo(inst)
    if check:
        hyp.require(inst, "SpSr", tol)
    fp = _FourParts(inst, tol, bound_factor)
    for name, part in (("R", fp.R), ("S", fp.S)):
        if la.fro(part.d) > tol.eq_rtol:
            raise PreconditionError(f"{name} is not nilpotent (||{name}^d|| = {la.fro(part.d):.2e})")
    P, Q, R, S = fp.P, fp.Q, fp.R, fp.S
    l, n, n0 = fp.l, fp.n, fp.n0
    td = la.zeros(n0)
    rtd = la.zeros(n0)
    for j in range(n):
        qs = _msum((Q.dpow(h + j + 1) @ S.pow(h) for h in range(l)), n0)
        td = td + _msum((P.pow(k) @ R.pow(j - k) for k in range(j + 1)), n0) @ qs
        rtd = rtd + R.pow(j + 1) @ qs
    td = P.pi @ td
    g = index(fp.t, tol) * bound_factor
    x, _ = _x_term(fp, td, g)
    x = x - P.d @ rtd
    nd = P.d + x + td
    if trace:
        return nd, SumOfFourTrace(fp.t, x, P.d, td, SummationBounds(fp.l, fp.m, fp.n, g))
    return nd


def sum_of_four_dual(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True):
    """Sum under PQ = QP = 0, PS = SQ = QR = RP = 0, RS = QS = 0.

    ``(Q^T, P^T, R^T, S^T)`` satisfies the SP = SR = 0 family exactly when
    the input satisfies this one, and ``(N^T)^d = (N^d)^T``.
    """
    inst = _as_pseudo(inst)
    if check:
        hyp.require(inst, "RsQs", tol)
    nd, _ = sum_of_four(inst.transposed(), tol, bound_factor=bound_factor, check=False)
    return nd.T.copy()


def pseudo_block_lift(inst, tol=DEFAULT_TOL, *, check=True):
    """``N^d`` from the blocks of ``T^d``, ``T = [[P, R], [S, Q]]``.

    Requires a pseudo-block instance with R^2 = S^2 = 0.  Returns
    ``(nd, (A1, A2, A3, A4))`` where ``T^d = [[A1, A3], [A4, A2]]`` and
    ``nd = A1 + A2 + A3 + A4``.
    """
    inst = _as_pseudo(inst)
    if check:
        hyp.require(inst, "NilSquares", tol)
    p, q, r, s = inst.blocks
    td = drazin(la.assemble_block2x2(p, r, s, q), tol).d
    a1, a3, a4, a2 = la.partition_block2x2(td, inst.n)
    return a1 + a2 + a3 + a4, (a1, a2, a3, a4)
