"""Drazin inverses of 2x2 block matrices ``M = [[A, B], [C, D]]``.

Each formula splits ``M`` into four pieces that satisfy the SpSr-type
hypotheses and specialises the four-term sum.  ``Z = D - C A^d B`` is the
generalized Schur complement and ``W = A A^d + A^d B C A^d``.

All formulas share the keyword arguments

* ``check``: verify the hypotheses first (raises HypothesisViolation);
* ``bound_factor``: multiply every summation limit (tails must vanish);
* ``trace``: also return a :class:`BlockFormulaTrace`.

The formulas with an ``X``-type sum (:func:`drazin_bz_zcad`,
:func:`drazin_bc_bd`) weight it by the spectral projector of
``G = [[A, B], [Y C, Y D]]``.  ``projector_reading="complement"`` (the
default) evaluates it as ``I - G G^d`` with ``G^d`` the formula's own
closed form, which is what the four-term derivation produces.
``"literal"`` evaluates ``(I - G G^d)^pi`` as the projector of the matrix
``I - G G^d``; it is kept only to show that that reading is wrong.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hypotheses as hyp
from . import linalg as la
from .additive import _Dz
from .drazin import drazin, index
from .errors import PreconditionError
from .instances import BlockInstance
from .linalg import DEFAULT_TOL

READINGS = ("complement", "literal")

# cheapest first
DISPATCH_ORDER = (
    "Cor46ii", "Miao", "Cor43ii", "Cor46i", "Cor43i", "Cor47", "Cor45", "Cor42", "Cor44",
)


@dataclass(frozen=True)
class BlockFormulaTrace:
    """Intermediate matrices of one block formula.

    ``parts`` maps names such as ``"P"``, ``"Pd"``, ``"T"``, ``"Td"``,
    ``"X"``, ``"G"``, ``"Qd"`` to matrices; ``bounds`` maps summation
    limits (``"n"``, ``"g"``) to the values used.
    """

    formula: str
    z: np.ndarray
    w: np.ndarray
    parts: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)


class _Blocks:
    """Blocks of M with A^d, A^pi, Z and W computed once."""

    def __init__(self, inst, tol):
        if not isinstance(inst, BlockInstance):
            inst = BlockInstance(*inst)
        self.inst = inst
        self.tol = tol
        self.a, self.b, self.c, self.d = inst.blocks
        self.m, self.n = inst.m, inst.n
        self.A = _Dz(self.a, tol)
        self.ad, self.api = self.A.d, self.A.pi
        self.z = self.d - self.c @ self.ad @ self.b
        self.w = self.a @ self.ad + self.ad @ self.b @ self.c @ self.ad
        # Z is a difference of O(z_scale) terms; judge its rank against that
        self.z_scale = la.fro(self.d) + la.fro(self.c) * la.fro(self.ad) * la.fro(self.b)
        self._zdz = None

    @property
    def Z(self):
        if self._zdz is None:
            self._zdz = _Dz(self.z, self.tol, self.z_scale)
        return self._zdz

    @property
    def symbols(self):
        return {
            "A": self.a, "B": self.b, "C": self.c, "D": self.d,
            "Ad": self.ad, "Api": self.api, "Z": self.z,
        }

    def require(self, name):
        hyp.require(self.inst, name, self.tol, self.symbols)

    def block(self, tl=None, tr=None, bl=None, br=None):
        m, n = self.m, self.n
        return la.assemble_block2x2(
            la.zeros(m) if tl is None else tl,
            la.zeros(m, n) if tr is None else tr,
            la.zeros(n, m) if bl is None else bl,
            la.zeros(n) if br is None else br,
        )

    def miao_form(self):
        """``[I; C A^d] ((A W)^d)^2 A [I, A^d B]``."""
        awd = drazin(self.a @ self.w, self.tol).d
        left = np.vstack([la.eye(self.m), self.c @ self.ad])
        right = np.hstack([la.eye(self.m), self.ad @ self.b])
        return left @ awd @ awd @ self.a @ right

    def trace(self, formula, parts, bounds):
        return BlockFormulaTrace(formula, self.z, self.w, parts, bounds)


def _finish(md, tr, trace):
    return (md, tr) if trace else md


def _bounded(k, bound_factor):
    if bound_factor < 1:
        raise ValueError("bound_factor must be >= 1")
    return int(k) * int(bound_factor)


def _projector_of(g, gd, reading, tol):
    """Weight ``(I - G G^d)`` of the X-type sum, per ``reading``."""
    if reading not in READINGS:
        raise ValueError(f"projector_reading must be one of {READINGS}, got {reading!r}")
    y = la.eye(g.shape[0]) - g @ gd
    if reading == "complement":
        return y
    return drazin(y, tol).projector


def schur_complement(inst, tol=DEFAULT_TOL):
    """Generalized Schur complement ``Z = D - C A^d B``.

    >>> schur_complement(BlockInstance([[1]], [[1]], [[1]], [[3]])).real
    array([[2.]])
    """
    return _Blocks(inst, tol).z


def miao_drazin(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True, trace=False):
    """``M^d`` when ``C A^pi = 0``, ``A^pi B = 0`` and ``Z = 0``.

    M^d = [I; C A^d] ((A W)^d)^2 A [I, A^d B].

    There is no summation; ``bound_factor`` is accepted for a uniform
    signature and ignored.
    """
    bk = _Blocks(inst, tol)
    if check:
        bk.require("Miao")
    md = bk.miao_form()
    return _finish(md, bk.trace("miao", {"Qd": md}, {}), trace)


# -- BZ = 0, ZC = 0, A^pi B C = 0 ---------------------------------------------

def _bz_zc_general(bk, bound_factor):
    a, b, c, ad, api, z = bk.a, bk.b, bk.c, bk.ad, bk.api, bk.z
    m, n = bk.m, bk.n
    a2ad = a @ a @ ad
    aadb = a @ ad @ b
    cadb = c @ ad @ b
    p = bk.block(a2ad, aadb, c @ a @ ad, cadb)
    pd = bk.miao_form()
    ppi = la.eye(m + n) - p @ pd
    rb = bk.block(bl=c @ api)
    t = bk.block(a @ api, api @ b, None, z) + ppi @ bk.block(a2ad, aadb, c, cadb)
    nb = _bounded(index(p, bk.tol), bound_factor)
    Z = bk.Z
    td = la.zeros(m + n)
    pj = la.eye(m + n)
    for j in range(nb):
        td = td + pj @ bk.block(br=Z.dpow(j + 1))
        pj = pj @ p
    td = ppi @ td
    g = _bounded(index(t, bk.tol), bound_factor)
    tpi = la.eye(m + n) - t @ td
    x = la.zeros(m + n)
    pdk = pd @ pd
    tk = la.eye(m + n)
    for _ in range(g):
        x = x + pdk @ rb @ tk @ tpi
        pdk = pdk @ pd
        tk = tk @ t
    parts = {"P": p, "Pd": pd, "T": t, "Td": td, "X": x}
    return pd + x + td, parts, {"n": nb, "g": g}


def _bz_zc_z0(bk, variant, bound_factor):
    c, api = bk.c, bk.api
    pd = bk.miao_form()
    k_a = bk.A.k
    x = la.zeros(bk.m + bk.n)
    pdk = pd @ pd
    if variant == "Z0_ApiBC0":
        # the printed limit g = ind(A) - 1 drops terms that do not vanish; see
        # drazin_bz_zc_apibc
        g = _bounded(k_a + 1, bound_factor)
        rb = bk.block(bl=c @ api)
        s = bk.block(bk.a @ api, api @ bk.b)
        sk = la.eye(bk.m + bk.n)
        for _ in range(g):
            x = x + pdk @ rb @ sk
            pdk = pdk @ pd
            sk = sk @ s
    else:
        g = _bounded(k_a, bound_factor)
        for k in range(g):
            x = x + pdk @ bk.block(bl=c @ api @ bk.A.pow(k))
            pdk = pdk @ pd
    return pd + x, {"Pd": pd, "X": x}, {"g": g}


def drazin_bz_zc_apibc(inst, tol=DEFAULT_TOL, variant="general", *, bound_factor=1,
                       check=True, trace=False):
    """``M^d`` when ``BZ = 0``, ``ZC = 0`` and ``A^pi B C = 0``.

    Parameters
    ----------
    variant : {"general", "Z0_ApiBC0", "Z0_ApiB0"}
        ``"general"`` uses
        ``M^d = P^d + sum_{k<g} (P^d)^(k+2) [[0,0],[C A^pi,0]] T^k T^pi + T^d``
        with ``g = ind(T)`` and ``T^d = P^pi sum_{j<ind(P)} P^j diag(0, (Z^d)^(j+1))``.
        ``"Z0_ApiBC0"`` (Z = 0) drops ``T^d`` and replaces ``T^k T^pi`` by
        ``[[A A^pi, A^pi B], [0, 0]]^k``; it sums ``k < ind(A) + 1``, since
        with ``A^pi B != 0`` the terms ``k = ind(A) - 1`` and ``ind(A)`` are
        generally nonzero.  ``"Z0_ApiB0"`` (Z = 0, A^pi B = 0) sums
        ``(P^d)^(k+2) [[0,0],[C A^pi A^k,0]]`` over ``k < ind(A)``.
    """
    names = {"general": "Cor42", "Z0_ApiBC0": "Cor43i", "Z0_ApiB0": "Cor43ii"}
    if variant not in names:
        raise ValueError(f"variant must be one of {tuple(names)}, got {variant!r}")
    bk = _Blocks(inst, tol)
    if check:
        bk.require(names[variant])
    if variant == "general":
        md, parts, bounds = _bz_zc_general(bk, bound_factor)
    else:
        md, parts, bounds = _bz_zc_z0(bk, variant, bound_factor)
    return _finish(md, bk.trace(names[variant], parts, bounds), trace)


# -- BZ = 0, Z C A^d = 0, A^pi B C = 0, B C A^pi = 0 -------------------------

def _x_sum(bk, left, g_mat, weight, g):
    """``sum_{k<g} left(k) G^k weight``."""
    x = la.zeros(bk.m + bk.n)
    gk = la.eye(bk.m + bk.n)
    for k in range(g):
        x = x + left(k) @ gk @ weight
        gk = gk @ g_mat
    return x


def _upper_sum(bk, nb, right):
    """``sum_{j=1}^{nb-1} [[0, A^(j-1) A^pi B], [0, 0]] right(j)``."""
    out = la.zeros(bk.m + bk.n)
    for j in range(1, nb):
        out = out + bk.block(tr=bk.A.pow(j - 1) @ bk.api @ bk.b) @ right(j)
    return out


def drazin_bz_zcad(inst, tol=DEFAULT_TOL, variant="general", *, bound_factor=1,
                   projector_reading="complement", check=True, trace=False):
    """``M^d`` when ``BZ = 0``, ``Z C A^d = 0``, ``A^pi B C = 0``, ``B C A^pi = 0``.

    With ``Q^d`` the Miao form and ``G = [[A, B], [Z^pi C, Z^pi D]]``::

        M^d = diag(0, Z^d) + Q^d
              + sum_{k<ind(G)} [[0,0],[(Z^d)^(k+2) C,0]] G^k (I - G Q^d)

    Parameters
    ----------
    variant : {"general", "Z0_CApi0", "Z0_ApiB0_BCApi0"}
        ``"Z0_CApi0"`` (Z = 0, C A^pi = 0) returns
        ``Q^d + sum_{j=1}^{ind(A)} [[0, A^(j-1) A^pi B],[0,0]] (Q^d)^(j+1)``;
        ``"Z0_ApiB0_BCApi0"`` (Z = 0, A^pi B = 0, B C A^pi = 0) returns ``Q^d``.
    projector_reading : {"complement", "literal"}
        See the module docstring; only used by ``"general"``.
    """
    names = {"general": "Cor44", "Z0_CApi0": "Cor46i", "Z0_ApiB0_BCApi0": "Cor46ii"}
    if variant not in names:
        raise ValueError(f"variant must be one of {tuple(names)}, got {variant!r}")
    bk = _Blocks(inst, tol)
    if check:
        bk.require(names[variant])
    qd = bk.miao_form()
    parts = {"Qd": qd}
    bounds = {}
    if variant == "Z0_ApiB0_BCApi0":
        md = qd
    elif variant == "Z0_CApi0":
        nb = _bounded(bk.A.k + 1, bound_factor)
        md = qd + _upper_sum(bk, nb, lambda j: np.linalg.matrix_power(qd, j + 1))
        bounds["n"] = nb
    else:
        Z = bk.Z
        g_mat = bk.block(bk.a, bk.b, Z.pi @ bk.c, Z.pi @ bk.d)
        g = _bounded(index(g_mat, tol), bound_factor)
        weight = _projector_of(g_mat, qd, projector_reading, tol)
        x = _x_sum(bk, lambda k: bk.block(bl=Z.dpow(k + 2) @ bk.c), g_mat, weight, g)
        md = bk.block(br=Z.d) + qd + x
        parts.update(G=g_mat, X=x)
        bounds["g"] = g
    return _finish(md, bk.trace(names[variant], parts, bounds), trace)


def drazin_capi(inst, tol=DEFAULT_TOL, *, bound_factor=1, check=True, trace=False):
    """``M^d`` when ``BZ = 0``, ``ZC = 0``, ``C A^pi A = 0`` and ``C A^pi B = 0``.

    With ``Rc = [[0,0],[C A^pi,0]]``, ``E_j = [[0, A^(j-1) A^pi B],[0,0]]``::

        M^d = diag(0, Z^d) + Q^d + (Q^d)^2 Rc
              + sum_{j=1}^{ind(A)} E_j ((Q^d)^(j+1) + (Q^d)^(j+2) Rc)
    """
    bk = _Blocks(inst, tol)
    if check:
        bk.require("Cor45")
    qd = bk.miao_form()
    rc = bk.block(bl=bk.c @ bk.api)
    qpow = [la.eye(bk.m + bk.n)]
    nb = _bounded(bk.A.k + 1, bound_factor)
    for _ in range(nb + 1):
        qpow.append(qpow[-1] @ qd)
    tail = _upper_sum(bk, nb, lambda j: qpow[j + 1] + qpow[j + 2] @ rc)
    md = bk.block(br=bk.Z.d) + qd + qpow[2] @ rc + tail
    return _finish(md, bk.trace("Cor45", {"Qd": qd, "Rc": rc}, {"n": nb}), trace)


def drazin_bc_bd(inst, tol=DEFAULT_TOL, *, bound_factor=1, projector_reading="complement",
                 check=True, trace=False):
    """``M^d`` when ``BC = 0`` and ``BD = 0``.

    With ``G = [[A, B], [D^pi C, D^pi D]]``::

        G^d = [[A^d, (A^d)^2 B], [0, 0]]
              + sum_{j=1}^{n-1} [[0, 0], [D^pi D^(j-1) C (A^d)^(j+1), D^pi D^(j-1) C (A^d)^(j+2) B]]
        M^d = [[0, 0], [-D^d C A^d, D^d - D^d C (A^d)^2 B]] + G^d
              + sum_{k<ind(G)} [[0,0],[(D^d)^(k+2) C,0]] G^k (I - G G^d)

    The j-terms carry ``D^pi D^(j-1)``, which vanishes only past ``ind(D)``,
    so ``n = max(ind(A), ind(D)) + 2``.
    """
    bk = _Blocks(inst, tol)
    if check:
        bk.require("Cor47")
    a, b, c, d = bk.a, bk.b, bk.c, bk.d
    A, D = bk.A, _Dz(d, tol)
    nb = _bounded(max(A.k, D.k) + 2, bound_factor)
    gd = bk.block(A.d, A.dpow(2) @ b)
    for j in range(1, nb):
        lead = D.pi @ D.pow(j - 1) @ c
        gd = gd + bk.block(bl=lead @ A.dpow(j + 1), br=lead @ A.dpow(j + 2) @ b)
    g_mat = bk.block(a, b, D.pi @ c, D.pi @ d)
    g = _bounded(index(g_mat, tol), bound_factor)
    weight = _projector_of(g_mat, gd, projector_reading, tol)
    x = _x_sum(bk, lambda k: bk.block(bl=D.dpow(k + 2) @ c), g_mat, weight, g)
    head = bk.block(bl=-D.d @ c @ A.d, br=D.d - D.d @ c @ A.dpow(2) @ b)
    md = head + gd + x
    parts = {"G": g_mat, "Td": gd, "X": x}
    return _finish(md, bk.trace("Cor47", parts, {"n": nb, "g": g}), trace)


# -- dispatch ------------------------------------------------------------------

FORMULAS = {
    "Miao": lambda inst, tol, **kw: miao_drazin(inst, tol, **kw),
    "Cor42": lambda inst, tol, **kw: drazin_bz_zc_apibc(inst, tol, "general", **kw),
    "Cor43i": lambda inst, tol, **kw: drazin_bz_zc_apibc(inst, tol, "Z0_ApiBC0", **kw),
    "Cor43ii": lambda inst, tol, **kw: drazin_bz_zc_apibc(inst, tol, "Z0_ApiB0", **kw),
    "Cor44": lambda inst, tol, **kw: drazin_bz_zcad(inst, tol, "general", **kw),
    "Cor45": lambda inst, tol, **kw: drazin_capi(inst, tol, **kw),
    "Cor46i": lambda inst, tol, **kw: drazin_bz_zcad(inst, tol, "Z0_CApi0", **kw),
    "Cor46ii": lambda inst, tol, **kw: drazin_bz_zcad(inst, tol, "Z0_ApiB0_BCApi0", **kw),
    "Cor47": lambda inst, tol, **kw: drazin_bc_bd(inst, tol, **kw),
}


def drazin_block(inst, tol=DEFAULT_TOL, *, fallback=True):
    """First applicable closed form in :data:`DISPATCH_ORDER`.

    Returns ``(md, name)``; ``name`` is the condition set used, or
    ``"engine"`` when none applies and ``fallback`` is true.

    Raises
    ------
    PreconditionError
        If no condition set holds and ``fallback`` is false.
    """
    bk = _Blocks(inst, tol)
    sym = bk.symbols
    for name in DISPATCH_ORDER:
        if hyp.check(bk.inst, name, tol, sym).passed:
            return FORMULAS[name](bk.inst, tol, check=False), name
    if not fallback:
        raise PreconditionError("no block formula's hypotheses hold for this instance")
    return drazin(bk.inst.matrix, tol).d, "engine"
