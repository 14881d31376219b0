"""Dense complex-matrix helpers: validation, rank, pseudoinverse, blocks.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_cmatrix` is the single entry point that promotes and validates
user input.  Every function here is pure.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ShapeError

CDTYPE = np.complex128


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rank_rtol
        Relative singular-value cutoff; a singular value counts towards the
        rank when ``s > rank_rtol * max(m, n) * s_max``.
    eq_rtol
        Relative residual threshold used by matrix-equality and hypothesis
        checks, ``||X - Y||_F <= eq_rtol * (1 + ||Y||_F)``.
    """

    rank_rtol: float = 1e-11
    eq_rtol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rtol", "eq_rtol"):
            value = getattr(self, name)
            if not (0.0 < value <= 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2], got {value!r}")


DEFAULT_TOL = Tolerance()


def as_cmatrix(a, name="matrix"):
    """Return ``a`` as a finite, nonempty 2-D complex128 array."""
    m = np.array(a, dtype=CDTYPE, copy=True)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeError(f"{name} must be nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError(f"{name} has NaN or infinite entries")
    return m


def require_square(a, name="matrix"):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    return a.shape[0]


def eye(n):
    return np.eye(n, dtype=CDTYPE)


def zeros(m, n=None):
    return np.zeros((m, m if n is None else n), dtype=CDTYPE)


def matmul(a, b):
    """Complex matrix product with an explicit shape check."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def mdot(*factors):
    """Left-to-right product of several matrices."""
    out = factors[0]
    for f in factors[1:]:
        out = matmul(out, f)
    return out


def mpow(a, k):
    """``a**k`` by repeated squaring; ``a**0`` is the identity."""
    if k < 0:
        raise ValueError("negative matrix power")
    return np.linalg.matrix_power(a, k)


def powers(a, count):
    """List ``[a**0, a**1, ..., a**(count-1)]``."""
    out = [eye(a.shape[0])]
    for _ in range(1, count):
        out.append(out[-1] @ a)
    return out


def fro(a):
    return float(np.linalg.norm(a))


def rel_diff(x, y):
    """Relative Frobenius distance ``||x - y|| / (1 + ||y||)``."""
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch {x.shape} vs {y.shape}")
    return fro(x - y) / (1.0 + fro(y))


def is_close(x, y, tol=DEFAULT_TOL):
    return rel_diff(x, y) <= tol.eq_rtol


def _svd(a, compute_uv=True):
    try:
        return np.linalg.svd(a, full_matrices=False, compute_uv=compute_uv)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"SVD did not converge for {a.shape} matrix: {exc}") from exc


def _cutoff(s, shape, tol):
    if s.size == 0:
        return 0.0
    return tol.rank_rtol * max(shape) * s[0]


def rank(a, tol=DEFAULT_TOL):
    """Numerical rank by singular-value thresholding (zero matrix -> 0)."""
    s = _svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > _cutoff(s, a.shape, tol)))


def pinv(a, tol=DEFAULT_TOL, rank=None):
    """Moore-Penrose pseudoinverse using the same cutoff as :func:`rank`.

    If ``rank`` is given, exactly that many leading singular values are
    inverted instead of applying the cutoff.
    """
    u, s, vh = _svd(a)
    if s.size == 0 or s[0] == 0.0:
        return zeros(a.shape[1], a.shape[0])
    if rank is None:
        keep = s > _cutoff(s, a.shape, tol)
    else:
        keep = np.arange(s.size) < rank
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (vh.conj().T * inv_s) @ u.conj().T


def assemble_block2x2(a11, a12, a21, a22):
    """Stack four blocks into ``[[a11, a12], [a21, a22]]``."""
    if a11.shape[0] != a12.shape[0] or a21.shape[0] != a22.shape[0]:
        raise ShapeError("block rows have mismatched heights")
    if a11.shape[1] != a21.shape[1] or a12.shape[1] != a22.shape[1]:
        raise ShapeError("block columns have mismatched widths")
    return np.block([[a11, a12], [a21, a22]]).astype(CDTYPE, copy=False)


def partition_block2x2(m, split_row, split_col=None):
    """Inverse of :func:`assemble_block2x2`; returns copies of the four blocks."""
    if split_col is None:
        split_col = split_row
    rows, cols = m.shape
    if not (0 < split_row < rows and 0 < split_col < cols):
        raise ShapeError(f"split ({split_row}, {split_col}) outside {m.shape}")
    return (
        m[:split_row, :split_col].copy(),
        m[:split_row, split_col:].copy(),
        m[split_row:, :split_col].copy(),
        m[split_row:, split_col:].copy(),
    )
