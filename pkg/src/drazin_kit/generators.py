"""Seeded generators for matrices that satisfy each formula's hypotheses.

Every hypothesis family is a set of products that must vanish, which has
measure zero among dense random matrices.  The generators therefore build
instances structurally: block patterns in a random basis, range/null-space
draws, and rank-deficient factors.  Rejection sampling is only used to
avoid badly conditioned draws, never to hit a hypothesis.  In particular a
draw whose assembled matrix the baseline Drazin engine cannot resolve to
``eq_rtol`` (a small core eigenvalue raised to the power ``2 ind + 1``) is
redrawn from the same stream, so every instance has a usable reference.

All randomness comes from ``numpy.random.default_rng(seed)``, so identical
``(seed, config, family)`` always produce bit-identical output.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .drazin import drazin
from .errors import NumericalError, ShapeError
from .instances import BlockInstance, PseudoBlockInstance

PSEUDO_FAMILIES = ("NilSquares", "SpSr", "SpSrNil", "RsQs")
BLOCK_FAMILIES = (
    "Miao", "Cor42", "Cor43i", "Cor43ii", "Cor44", "Cor45", "Cor46i", "Cor46ii", "Cor47",
)
# PQ = 0 pairs and block-triangular matrices, packed as instances
EXTRA_FAMILIES = ("HartwigPQ", "TriangularUpper", "TriangularLower")
FAMILIES = PSEUDO_FAMILIES + BLOCK_FAMILIES + EXTRA_FAMILIES

# resample when a random basis or core block is worse than this
_MAX_ATTEMPTS = 50
_CORE_COND_CAP = 1e3
_NORM_RANGE = (1e-3, 1e3)


@dataclass(frozen=True)
class GenConfig:
    """Generator settings.

    ``dims`` may pin any of the size parameters a family uses (``n1``,
    ``n2`` for pseudo-block instances, ``m``, ``n`` for block instances);
    unpinned sizes are drawn from ``1..max_size``.
    """

    seed: int = 0
    dims: dict = field(default_factory=dict)
    max_size: int = 5
    magnitude: float = 1.0
    similarity_cond_cap: float = 100.0
    alt: bool = False

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_size < 1 or any(int(v) < 1 for v in self.dims.values()):
            raise ValueError("all dimensions must be >= 1")
        if not 1.0 <= self.similarity_cond_cap <= 1e3:
            raise ValueError("similarity_cond_cap must lie in [1, 1e3]")
        if self.magnitude <= 0:
            raise ValueError("magnitude must be positive")

    def rng(self, family=""):
        # the family name is folded into the stream so families do not share draws
        salt = [ord(ch) for ch in family]
        return np.random.default_rng([int(self.seed), *salt])

    def size(self, rng, key, low=1):
        if key in self.dims:
            return int(self.dims[key])
        return int(rng.integers(low, self.max_size + 1))


# -- primitive random matrices ----------------------------------------------

def crandn(rng, m, n):
    """Complex Gaussian ``m x n`` matrix with unit-variance entries."""
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_basis(rng, n, cond_cap=100.0):
    """Invertible ``n x n`` matrix ``U diag(s)`` with cond <= sqrt(cond_cap)."""
    half = 0.25 * np.log(cond_cap)
    s = np.exp(rng.uniform(-half, half, size=n))
    return random_unitary(rng, n) * s


def random_core(rng, n):
    """Well-conditioned invertible block with singular values in [0.8, 1.25]."""
    s = rng.uniform(0.8, 1.25, size=n)
    return (random_unitary(rng, n) * s) @ random_unitary(rng, n)


def shift_nilpotent(rng, sizes):
    """Direct sum of upper-shift blocks with random nonzero superdiagonals."""
    n = sum(sizes)
    out = la.zeros(n)
    start = 0
    for size in sizes:
        for i in range(size - 1):
            mag = rng.uniform(0.5, 1.0)
            out[start + i, start + i + 1] = mag * np.exp(2j * np.pi * rng.uniform())
        start += size
    return out


def random_partition(rng, n, max_part=None):
    """Random composition of ``n`` into positive parts."""
    parts = []
    left = n
    while left > 0:
        top = left if max_part is None else min(left, max_part)
        p = int(rng.integers(1, top + 1))
        parts.append(p)
        left -= p
    return parts


def core_nilpotent(rng, n, core=None, nil_sizes=None, cond_cap=100.0):
    """Random ``V diag(K, N) V^-1`` with K invertible and N nilpotent.

    Returns ``(a, d, index)`` where ``d`` is the exact Drazin inverse
    ``V diag(K^-1, 0) V^-1`` and ``index`` the size of the largest
    nilpotent block.
    """
    if core is None:
        core = int(rng.integers(0, n + 1))
    if nil_sizes is None:
        nil_sizes = random_partition(rng, n - core)
    if core + sum(nil_sizes) != n:
        raise ShapeError("core size and nilpotent blocks do not add up to n")
    v = random_basis(rng, n, cond_cap)
    k = random_core(rng, core)
    inner = la.zeros(n)
    inner[:core, :core] = k
    inner[core:, core:] = shift_nilpotent(rng, nil_sizes)
    dinner = la.zeros(n)
    dinner[:core, :core] = np.linalg.inv(k)
    vinv = np.linalg.inv(v)
    idx = max(nil_sizes, default=0)
    return v @ inner @ vinv, v @ dinner @ vinv, idx


def core_nilpotent_parts(rng, n, cond_cap=100.0):
    """Like :func:`core_nilpotent` but also returns ``(V, K, N, core)``."""
    core = int(rng.integers(0, n + 1))
    nil_sizes = random_partition(rng, n - core)
    v = random_basis(rng, n, cond_cap)
    k = random_core(rng, core)
    nil = shift_nilpotent(rng, nil_sizes)
    inner = la.zeros(n)
    inner[:core, :core] = k
    inner[core:, core:] = nil
    return v @ inner @ np.linalg.inv(v), v, k, nil, core


def low_rank(rng, m, n, r, scale=1.0):
    if r <= 0:
        return la.zeros(m, n)
    return scale * crandn(rng, m, r) @ crandn(rng, r, n) / np.sqrt(r * max(m, n))


def null_basis(a, tol=la.DEFAULT_TOL):
    """Orthonormal basis of the right null space of ``a``."""
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    r = la.rank(a, tol) if a.size else 0
    return vh[r:].conj().T


# -- test-matrix generators ---------------------------------------------------

def gen_matrix(seed, n=None, max_size=12, cond_cap=100.0):
    """Random square matrix with known Drazin inverse and index.

    Returns ``(a, d, index)``; the structure (core size and nilpotent
    Jordan sizes) is itself random.
    """
    rng = np.random.default_rng([int(seed), 0xD7A2])
    if n is None:
        n = int(rng.integers(1, max_size + 1))
    return core_nilpotent(rng, n, cond_cap=cond_cap)


def gen_pq_zero(seed, n=None, max_size=6, cond_cap=100.0):
    """Pair ``(P, Q)`` with ``PQ = 0`` by complementary-range splitting.

    In a random basis ``U``: ``P`` has a zero second block column and ``Q``
    a zero first block row, so range(Q) lies in null(P).
    """
    rng = np.random.default_rng([int(seed), 0x9A11])
    if n is None:
        n = int(rng.integers(2, max_size + 1))
    n1 = int(rng.integers(1, n))
    n2 = n - n1
    u = random_basis(rng, n, cond_cap)
    uinv = np.linalg.inv(u)
    p = la.zeros(n)
    q = la.zeros(n)
    p[:n1, :n1] = core_nilpotent(rng, n1)[0]
    p[n1:, :n1] = 0.5 * crandn(rng, n2, n1)
    q[n1:, n1:] = core_nilpotent(rng, n2)[0]
    q[n1:, :n1] = 0.5 * crandn(rng, n2, n1)
    return u @ p @ uinv, u @ q @ uinv


def gen_triangular(seed, max_size=6):
    """Blocks ``(A, C, D)`` for a block-triangular matrix."""
    rng = np.random.default_rng([int(seed), 0x7A1A])
    m = int(rng.integers(1, max_size + 1))
    n = int(rng.integers(1, max_size + 1))
    a = core_nilpotent(rng, m)[0]
    d = core_nilpotent(rng, n)[0]
    c = 0.5 * crandn(rng, m, n)
    return a, c, d


# -- pseudo-block families ----------------------------------------------------

def _conjugate(u, *mats):
    uinv = np.linalg.inv(u)
    return tuple(u @ x @ uinv for x in mats)


def _engine_resolves(m):
    # an all-zero draw cannot be scaled into the norm window either
    if not m.any():
        return False
    try:
        return drazin(m).ok
    except NumericalError:
        return False


def _scale_pseudo(cfg, p, q, r, s):
    scale = cfg.magnitude
    norm = la.fro(p + q + r + s) * scale
    lo, hi = _NORM_RANGE
    if 0 < norm < lo:
        scale *= lo / norm
    elif norm > hi:
        scale *= hi / norm
    return tuple(scale * x for x in (p, q, r, s))


def _nil_squares(cfg, rng):
    n1 = cfg.size(rng, "n1")
    n2 = cfg.size(rng, "n2")
    n = n1 + n2
    p = la.zeros(n)
    q = la.zeros(n)
    r = la.zeros(n)
    s = la.zeros(n)
    p[:n1, :n1] = core_nilpotent(rng, n1)[0]
    q[n1:, n1:] = core_nilpotent(rng, n2)[0]
    r[:n1, n1:] = 0.5 * crandn(rng, n1, n2)
    s[n1:, :n1] = 0.5 * crandn(rng, n2, n1)
    return p, q, r, s


def _spsr_nilpotent(cfg, rng):
    """Square-zero R and S; S21 annihilates a subspace holding range(P1), range(R12)."""
    n1 = max(cfg.size(rng, "n1"), 2) if "n1" not in cfg.dims else cfg.size(rng, "n1")
    n2 = cfg.size(rng, "n2")
    n = n1 + n2
    v = int(rng.integers(1, n1)) if n1 > 1 else 1
    w = random_unitary(rng, n1)
    vb, vperp = w[:, :v], w[:, v:]
    p = la.zeros(n)
    q = la.zeros(n)
    r = la.zeros(n)
    s = la.zeros(n)
    # P1 = W [[K, X], [0, 0]] W^* maps into V; K core-nilpotent keeps P1^d tame
    top = np.hstack([core_nilpotent(rng, v)[0], 0.5 * crandn(rng, v, n1 - v)])
    p[:n1, :n1] = vb @ top @ w.conj().T
    q[n1:, n1:] = core_nilpotent(rng, n2)[0]
    r[:n1, n1:] = vb @ (0.5 * crandn(rng, v, n2))
    s[n1:, :n1] = 0.5 * crandn(rng, n2, vperp.shape[1]) @ vperp.conj().T
    return p, q, r, s


def _spsr_general(cfg, rng):
    """Four diagonal blocks; R and S carry invertible-or-not diagonal blocks.

    Block pattern (rows, cols) on blocks 1..4:
    P: (1,1); R: (1,2) (1,3) (1,4) (2,2) (2,3) (2,4); S: (2,3) (3,3) (4,3);
    Q: (4,3) (4,4).  Every product required to vanish has no composable
    block pair, so the hypotheses hold structurally while R and S need not
    be nilpotent.
    """
    # the nilpotent parts of the blocks chain together in N, so keep blocks
    # small and their indices <= 2 or N's index grows past what floating
    # point can resolve
    top = min(cfg.max_size, 3)
    sizes = [int(cfg.dims.get(f"b{i}", rng.integers(1, top + 1))) for i in range(1, 5)]
    n = sum(sizes)
    cut = np.cumsum([0] + sizes)
    blk = [slice(cut[i], cut[i + 1]) for i in range(4)]
    p = la.zeros(n)
    q = la.zeros(n)
    r = la.zeros(n)
    s = la.zeros(n)

    def put(m, i, j, diag=False):
        rows, cols = sizes[i], sizes[j]
        if diag:
            core = int(rng.integers(0, rows + 1))
            nil = random_partition(rng, rows - core, max_part=2)
            m[blk[i], blk[j]] = core_nilpotent(rng, rows, core, nil)[0]
        else:
            m[blk[i], blk[j]] = 0.3 * crandn(rng, rows, cols)

    put(p, 0, 0, diag=True)
    for (i, j) in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)):
        put(r, i, j)
    put(r, 1, 1, diag=True)
    put(s, 1, 2)
    put(s, 2, 2, diag=True)
    put(s, 3, 2)
    put(q, 3, 2)
    put(q, 3, 3, diag=True)
    return p, q, r, s


def gen_pseudo_block(cfg, family):
    """Generate a :class:`PseudoBlockInstance` of the requested family.

    Families: ``NilSquares`` (pseudo-block with R^2 = S^2 = 0), ``SpSr``
    (general R, S with SP = SR = 0), ``SpSrNil`` (SpSr with square-zero
    R, S), ``RsQs`` (transpose mirror of SpSr).
    """
    if family not in PSEUDO_FAMILIES:
        raise ValueError(f"unknown pseudo-block family {family!r}; expected one of {PSEUDO_FAMILIES}")
    rng = cfg.rng(family)
    build = {
        "NilSquares": _nil_squares,
        "SpSr": _spsr_general,
        "SpSrNil": _spsr_nilpotent,
        "RsQs": _spsr_general,
    }[family]
    for _ in range(_MAX_ATTEMPTS):
        p, q, r, s = build(cfg, rng)
        u = random_basis(rng, p.shape[0], cfg.similarity_cond_cap)
        p, q, r, s = _conjugate(u, p, q, r, s)
        if _engine_resolves(p + q + r + s):
            break
    else:
        raise NumericalError(f"no well-conditioned {family} draw in {_MAX_ATTEMPTS} attempts")
    if family == "RsQs":
        # (P', Q', R', S') satisfies SpSr  <=>  (Q'^T, P'^T, R'^T, S'^T) satisfies RsQs
        p, q, r, s = q.T.copy(), p.T.copy(), r.T.copy(), s.T.copy()
    p, q, r, s = _scale_pseudo(cfg, p, q, r, s)
    return PseudoBlockInstance(p, q, r, s, family=family)


# -- block 2x2 families -------------------------------------------------------

def _split_a(rng, m, cond_cap):
    """A = V diag(K, N) V^-1 with its pieces (core size c)."""
    a, v, k, nil, c = core_nilpotent_parts(rng, m, cond_cap)
    return a, np.linalg.inv(v), v, k, nil, c


def _miao(cfg, rng):
    m = cfg.size(rng, "m")
    n = cfg.size(rng, "n")
    for _ in range(_MAX_ATTEMPTS):
        a, vinv, v, k, nil, c = _split_a(rng, m, cfg.similarity_cond_cap)
        if c == 0:
            continue
        b1 = 0.5 * crandn(rng, c, n)
        c1 = 0.5 * crandn(rng, n, c)
        kinv = np.linalg.inv(k)
        # Cline: M1 = F G with F = [I; C1 K^-1], G = [K, B1]; need GF invertible
        gf = k + b1 @ c1 @ kinv
        if np.linalg.cond(gf) > _CORE_COND_CAP:
            continue
        b = v @ np.vstack([b1, la.zeros(m - c, n)])
        cc = np.hstack([c1, la.zeros(n, m - c)]) @ vinv
        d = c1 @ kinv @ b1
        f = np.vstack([la.eye(c), c1 @ kinv])
        g = np.hstack([k, b1])
        gf_inv = np.linalg.inv(gf)
        core_d = f @ gf_inv @ gf_inv @ g
        # scatter the (c + n) core rows/cols back next to the nilpotent part
        idx = np.r_[0:c, m:m + n]
        inner = la.zeros(m + n)
        inner[np.ix_(idx, idx)] = core_d
        t = la.zeros(m + n)
        t[:m, :m] = v
        t[m:, m:] = la.eye(n)
        tinv = la.zeros(m + n)
        tinv[:m, :m] = vinv
        tinv[m:, m:] = la.eye(n)
        return (a, b, cc, d), t @ inner @ tinv
    raise NumericalError("could not draw a well-conditioned Miao instance")


def _cor42(cfg, rng, zero_z=False, alt=False):
    """BZ = ZC = 0 and A^pi B C = 0 (via A^pi B = 0, or B2 C = 0 when ``alt``)."""
    m = cfg.size(rng, "m")
    n = cfg.size(rng, "n")
    a, vinv, v, k, nil, c = _split_a(rng, m, cfg.similarity_cond_cap)
    rb = int(rng.integers(0, n)) if n > 1 else 0
    if alt and m - c > 0:
        # B = V [B1; B2] with B2 != 0, and range(C) inside null(B2)
        b_inner = low_rank(rng, m, n, rb)
        b2 = b_inner[c:]
        nb2 = null_basis(b2)
        cols = crandn(rng, nb2.shape[1], m) if nb2.shape[1] else la.zeros(0, m)
        cc = 0.5 * nb2 @ cols / np.sqrt(max(m, 1))
    else:
        b_inner = np.vstack([low_rank(rng, c, n, min(rb, c)), la.zeros(m - c, n)])
        rc = int(rng.integers(0, n)) if n > 1 else 0
        cc = low_rank(rng, n, m, rc)
    b = v @ b_inner
    z = _z_between(rng, b, cc, zero_z)
    d = z + cc @ _exact_ad(v, k, c) @ b
    return a, b, cc, d


def _exact_ad(v, k, c):
    n = v.shape[0]
    inner = la.zeros(n)
    if c:
        inner[:c, :c] = np.linalg.inv(k)
    return v @ inner @ np.linalg.inv(v)


def _z_between(rng, left_kill, right_kill, zero):
    """Z with columns in null(left_kill) and rows annihilating range(right_kill).

    ``left_kill`` is ``B`` (so ``BZ = 0``) and ``right_kill`` is ``C`` or
    ``C A^d`` (so ``Z right_kill = 0``); Z is drawn core-nilpotent inside
    the intersection so its index varies.
    """
    n = left_kill.shape[1]
    if zero:
        return la.zeros(n)
    nb = null_basis(left_kill)
    nc = null_basis(right_kill.conj().T)
    if nb.shape[1] == 0 or nc.shape[1] == 0:
        return la.zeros(n)
    p = min(nb.shape[1], nc.shape[1])
    inner = 0.8 * core_nilpotent(rng, p)[0]
    return nb[:, :p] @ inner @ nc[:, :p].conj().T


def _cor44(cfg, rng):
    """BZ = ZCA^d = A^pi BC = BCA^pi = 0 with CA^pi != 0 allowed.

    In the A-adapted basis, C = [C1, C2] and B = [B1; B2].  C^n is split
    into orthonormal pieces E1 + E2 + E3: range(C1) is in E1, range(C2) in
    E2, B1 kills E2, B2 kills E1 + E2, and Z maps into E2 while killing E1.
    """
    m = cfg.size(rng, "m")
    n = max(cfg.size(rng, "n"), 1)
    a, vinv, v, k, nil, c = _split_a(rng, m, cfg.similarity_cond_cap)
    e = random_unitary(rng, n)
    e1 = int(rng.integers(0, n + 1))
    e2 = int(rng.integers(0, n - e1 + 1))
    E1, E2, E3 = e[:, :e1], e[:, e1:e1 + e2], e[:, e1 + e2:]
    c1 = E1 @ (0.5 * crandn(rng, e1, c))
    c2 = E2 @ (0.5 * crandn(rng, e2, m - c))
    e13 = np.hstack([E1, E3])
    b1 = 0.5 * crandn(rng, c, e13.shape[1]) @ e13.conj().T
    b2 = 0.5 * crandn(rng, m - c, E3.shape[1]) @ E3.conj().T
    b = v @ np.vstack([b1, b2])
    cc = np.hstack([c1, c2]) @ vinv
    if e2:
        # Z^j = E2 zin^j (E2^* + G E3^*), so ind(Z) = ind(zin)
        zin = 0.8 * core_nilpotent(rng, e2)[0]
        g = 0.5 * crandn(rng, e2, E3.shape[1])
        z = E2 @ zin @ (E2.conj().T + g @ E3.conj().T)
    else:
        z = la.zeros(n)
    d = z + cc @ _exact_ad(v, k, c) @ b
    return a, b, cc, d


def _cor45(cfg, rng):
    """BZ = ZC = 0, CA^pi A = CA^pi B = 0 with CA^pi possibly nonzero.

    With A = V diag(K, N) V^-1: C2 rows lie in null(N^*) so C2 N = 0, and
    B2 maps into range(N), which C2 kills.
    """
    m = cfg.size(rng, "m")
    n = cfg.size(rng, "n")
    a, vinv, v, k, nil, c = _split_a(rng, m, cfg.similarity_cond_cap)
    nn = m - c
    lnull = null_basis(nil.conj().T) if nn else la.zeros(0, 0)
    rng_n = null_basis(lnull.conj().T) if nn else la.zeros(0, 0)
    rb = int(rng.integers(0, n)) if n > 1 else 0
    rc = int(rng.integers(0, n)) if n > 1 else 0
    h = crandn(rng, rb, n) / np.sqrt(n)
    b1 = 0.5 * crandn(rng, c, rb) @ h
    b2 = (rng_n @ crandn(rng, rng_n.shape[1], rb) @ h) if nn else la.zeros(0, n)
    gc = 0.5 * crandn(rng, n, rc)
    c1 = gc @ crandn(rng, rc, c) / np.sqrt(max(c, 1))
    c2 = (gc @ crandn(rng, rc, lnull.shape[1]) @ lnull.conj().T) if nn else la.zeros(n, 0)
    b = v @ np.vstack([b1, b2])
    cc = np.hstack([c1, c2]) @ vinv
    z = _z_between(rng, b, cc, False)
    d = z + cc @ _exact_ad(v, k, c) @ b
    return a, b, cc, d


def _cor46(cfg, rng, part):
    m = cfg.size(rng, "m")
    n = cfg.size(rng, "n")
    a, vinv, v, k, nil, c = _split_a(rng, m, cfg.similarity_cond_cap)
    if part == "i":
        # Z = 0 and CA^pi = 0; B unrestricted
        b = 0.5 * crandn(rng, m, n)
        cc = np.hstack([0.5 * crandn(rng, n, c), la.zeros(n, m - c)]) @ vinv
    else:
        # Z = 0, A^pi B = 0 and B C A^pi = 0: range(C2) inside null(B1)
        rb = int(rng.integers(0, n)) if n > 1 else 0
        b1 = low_rank(rng, c, n, min(rb, c))
        nb1 = null_basis(b1) if c else la.eye(n)
        c2 = nb1 @ crandn(rng, nb1.shape[1], m - c) * 0.5 if nb1.shape[1] else la.zeros(n, m - c)
        b = v @ np.vstack([b1, la.zeros(m - c, n)])
        cc = np.hstack([0.5 * crandn(rng, n, c), c2]) @ vinv
    d = cc @ _exact_ad(v, k, c) @ b
    return a, b, cc, d


def _cor47(cfg, rng):
    """BC = BD = 0: in a random basis V of C^n, C and D map into the first
    rk coordinates and B only reads the remaining ones.

    D = V [[D1, X], [0, 0]] V^-1 with D1 core-nilpotent, C = V [[C1], [0]],
    B = B0 (rows rk: of V^-1).  ``alt`` takes rk = n, so B = 0.
    """
    m = cfg.size(rng, "m")
    n = cfg.size(rng, "n")
    a = core_nilpotent(rng, m)[0]
    rk = n if cfg.alt else (int(rng.integers(1, n)) if n > 1 else 0)
    v = random_basis(rng, n, cfg.similarity_cond_cap)
    vinv = np.linalg.inv(v)
    inner = la.zeros(n)
    if rk:
        inner[:rk, :rk] = core_nilpotent(rng, rk)[0]
        inner[:rk, rk:] = 0.5 * crandn(rng, rk, n - rk)
    d = v @ inner @ vinv
    c_in = la.zeros(n, m)
    c_in[:rk] = 0.6 * crandn(rng, rk, m)
    cc = v @ c_in
    b = 0.5 * crandn(rng, m, n - rk) @ vinv[rk:]
    return a, b, cc, d


def _scale_block(cfg, a, b, c, d):
    scale = cfg.magnitude
    norm = la.fro(la.assemble_block2x2(a, b, c, d)) * scale
    lo, hi = _NORM_RANGE
    if 0 < norm < lo:
        scale *= lo / norm
    elif norm > hi:
        scale *= hi / norm
    return scale


def _draw_block(cfg, rng, family):
    if family == "Miao":
        return _miao(cfg, rng)
    if family == "Cor42":
        blocks = _cor42(cfg, rng, alt=cfg.alt)
    elif family == "Cor43i":
        # A^pi B != 0 sub-family, so (i) is not just (ii) again
        blocks = _cor42(cfg, rng, zero_z=True, alt=True)
    elif family == "Cor43ii":
        blocks = _cor42(cfg, rng, zero_z=True)
    elif family == "Cor44":
        blocks = _cor44(cfg, rng)
    elif family == "Cor45":
        blocks = _cor45(cfg, rng)
    elif family == "Cor46i":
        blocks = _cor46(cfg, rng, "i")
    elif family == "Cor46ii":
        blocks = _cor46(cfg, rng, "ii")
    else:
        blocks = _cor47(cfg, rng)
    return blocks, None


def gen_block2x2(cfg, family):
    """Generate ``(BlockInstance, ground_truth_or_None)`` for a family.

    Ground truth ``M^d`` is returned for ``Miao`` only; it is assembled in
    closed form from the construction (Cline's formula on the core part);
    the Drazin engine only screens draws and never supplies the truth.
    """
    if family not in BLOCK_FAMILIES:
        raise ValueError(f"unknown block family {family!r}; expected one of {BLOCK_FAMILIES}")
    rng = cfg.rng(family)
    for _ in range(_MAX_ATTEMPTS):
        blocks, truth = _draw_block(cfg, rng, family)
        if _engine_resolves(la.assemble_block2x2(*blocks)):
            break
    else:
        raise NumericalError(f"no well-conditioned {family} draw in {_MAX_ATTEMPTS} attempts")
    scale = _scale_block(cfg, *blocks)
    a, b, c, d = (scale * x for x in blocks)
    if truth is not None:
        truth = truth / scale
    return BlockInstance(a, b, c, d, family=family), truth


def gen_instance(cfg, family):
    """Any family by name; returns ``(instance, ground_truth_or_None)``.

    ``HartwigPQ`` packs a ``PQ = 0`` pair as ``(P, Q, 0, 0)``.
    ``TriangularUpper`` is ``[[A, C], [0, D]]`` and ``TriangularLower``
    is ``[[D, 0], [C, A]]``, both as block instances.
    """
    if family in PSEUDO_FAMILIES:
        return gen_pseudo_block(cfg, family), None
    if family in BLOCK_FAMILIES:
        return gen_block2x2(cfg, family)
    if family == "HartwigPQ":
        p, q = gen_pq_zero(cfg.seed, cfg.dims.get("n"), max(cfg.max_size, 2),
                           cfg.similarity_cond_cap)
        z = la.zeros(p.shape[0])
        return PseudoBlockInstance(p, q, z, z, family=family), None
    if family in ("TriangularUpper", "TriangularLower"):
        a, c, d = gen_triangular(cfg.seed, cfg.max_size)
        m, n = c.shape
        if family == "TriangularUpper":
            return BlockInstance(a, c, la.zeros(n, m), d, family=family), None
        return BlockInstance(d, la.zeros(n, m), c, a, family=family), None
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
