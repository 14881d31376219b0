"""Index, Drazin inverse, group inverse and axiom residuals.

Two unrelated algorithms are provided so that each can check the other:

* :func:`drazin` evaluates ``A^k (A^(2k+1))^+ A^k`` with ``k = ind(A)``;
* :func:`drazin_oracle` splits the space into range(A^k) and null(A^k),
  inverts the core block and discards the nilpotent one.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import IllConditionedError, NumericalError, PreconditionError, ShapeError
from .linalg import DEFAULT_TOL


@dataclass(frozen=True)
class AxiomResiduals:
    """Relative residuals of the three Drazin axioms.

    commute = ||AX - XA|| / (1 + ||A|| ||X||),
    inner   = ||XAX - X|| / (1 + ||X||),
    power   = ||A^(k+1) X - A^k|| / (1 + ||A||^k).

    The power residual is scaled by ``||A||^k`` rather than ``||A^k||``: for
    nilpotent parts ``A^k`` is rounding noise of size ``eps ||A||^k`` and
    would otherwise be measured against ``1``.
    """

    commute: float
    inner: float
    power: float

    def max(self):
        return max(self.commute, self.inner, self.power)

    def as_dict(self):
        return {"commute": self.commute, "inner": self.inner, "power": self.power}


@dataclass(frozen=True)
class DrazinResult:
    d: np.ndarray
    index: int
    projector: np.ndarray
    residuals: AxiomResiduals
    eq_rtol: float = DEFAULT_TOL.eq_rtol

    @property
    def ok(self):
        """True when every axiom residual is within ``eq_rtol``."""
        return self.residuals.max() <= self.eq_rtol


def _range_chain(a, tol, scale=0.0):
    """Walk range(A^k) = A range(A^(k-1)) until the dimension stops dropping.

    Each step multiplies an orthonormal basis by ``A`` once, so the rank
    cutoff stays relative to ``sigma_max(A)`` instead of to the (possibly
    pure rounding noise) largest singular value of ``A^k``.  A positive
    ``scale`` raises the reference magnitude to ``max(sigma_max(A), scale)``,
    for matrices that are computed differences of larger terms.

    Returns ``(k, basis)`` with ``k = ind(A)`` and ``basis`` an orthonormal
    basis of range(A^k).
    """
    n = a.shape[0]
    smax = np.linalg.norm(a, 2)
    cutoff = tol.rank_rtol * n * max(smax, scale)
    basis = la.eye(n)
    for k in range(n + 1):
        if basis.shape[1] == 0 or smax <= cutoff:
            nxt = basis[:, :0]
        else:
            u, s, _ = np.linalg.svd(a @ basis, full_matrices=False)
            nxt = u[:, : int(np.count_nonzero(s > cutoff))]
        if nxt.shape[1] == basis.shape[1]:
            return k, basis
        basis = nxt
    raise NumericalError(f"rank sequence of powers did not stabilise within {n} steps")


def index(a, tol=DEFAULT_TOL, scale=0.0):
    """Smallest k >= 0 with rank(A^k) == rank(A^(k+1)).

    >>> index(np.zeros((2, 2)))
    1
    """
    a = np.asarray(a, dtype=la.CDTYPE)
    la.require_square(a)
    return _range_chain(a, tol, scale)[0]


def axiom_residuals(a, x, k):
    """Residuals of ``x`` as a Drazin inverse of ``a`` with power ``k``."""
    a = np.asarray(a, dtype=la.CDTYPE)
    x = np.asarray(x, dtype=la.CDTYPE)
    la.require_square(a)
    if x.shape != a.shape:
        raise ShapeError(f"candidate shape {x.shape} differs from {a.shape}")
    ax = a @ x
    ak = la.mpow(a, k)
    commute = la.fro(ax - x @ a) / (1.0 + la.fro(a) * la.fro(x))
    inner = la.fro(x @ ax - x) / (1.0 + la.fro(x))
    power = la.fro(ak @ ax - ak) / (1.0 + la.fro(a) ** k)
    return AxiomResiduals(commute, inner, power)


def drazin(a, tol=DEFAULT_TOL, scale=0.0):
    """Drazin inverse via ``A^k pinv(A^(2k+1)) A^k``.

    Parameters
    ----------
    a : (n, n) array_like
    tol : Tolerance
    scale : float, optional
        Reference magnitude for the rank cutoff when ``a`` was computed as
        a difference of larger terms (``D - C A^d B``, say); singular values
        below ``rank_rtol * n * max(||a||_2, scale)`` count as zero.

    Returns
    -------
    DrazinResult
        ``result.ok`` is False when the residuals exceed ``eq_rtol`` but
        stay within ten times that.

    Raises
    ------
    IllConditionedError
        If any axiom residual exceeds ``10 * eq_rtol``.
    """
    a = la.as_cmatrix(a)
    n = la.require_square(a)
    k, col = _range_chain(a, tol, scale)
    ak = la.mpow(a, k)
    # rank(A^(2k+1)) == rank(A^k); truncating there keeps nilpotent noise out
    d = ak @ la.pinv(la.mpow(a, 2 * k + 1), tol, rank=col.shape[1]) @ ak
    if not np.all(np.isfinite(d)):
        raise NumericalError("non-finite entries in Drazin inverse")
    res = axiom_residuals(a, d, k)
    if res.max() > 10 * tol.eq_rtol:
        raise IllConditionedError(
            f"Drazin axioms violated (max residual {res.max():.3e}, index {k})", res
        )
    return DrazinResult(d, k, la.eye(n) - a @ d, res, tol.eq_rtol)


def drazin_oracle(a, tol=DEFAULT_TOL):
    """Drazin inverse through a core-nilpotent change of basis.

    With ``k = ind(A)`` the columns of ``V = [range(A^k), null(A^k)]`` give
    ``V^-1 A V = diag(K, N)`` with ``K`` invertible and ``N`` nilpotent, so
    ``A^d = V diag(K^-1, 0) V^-1``.
    """
    a = la.as_cmatrix(a)
    n = la.require_square(a)
    k, col = _range_chain(a, tol)
    if k == 0:
        return np.linalg.inv(a)
    r = col.shape[1]
    if r == 0:
        return la.zeros(n)
    # null(A^k) is the orthogonal complement of range((A^*)^k)
    _, row = _range_chain(a.conj().T, tol)
    if row.shape[1] != r:
        raise NumericalError(f"rank of A^k ({r}) and (A^*)^k ({row.shape[1]}) disagree")
    u, _, _ = np.linalg.svd(row, full_matrices=True)
    basis = np.hstack([col, u[:, r:]])
    try:
        blocks = np.linalg.solve(basis, a @ basis)
        core_inv = np.linalg.inv(blocks[:r, :r])
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"core-nilpotent splitting failed: {exc}") from exc
    inner = la.zeros(n)
    inner[:r, :r] = core_inv
    return basis @ np.linalg.solve(basis.T, inner.T).T


def group_inverse(a, tol=DEFAULT_TOL):
    """Group inverse ``A^#``; only defined when ind(A) <= 1."""
    k = index(np.asarray(a, dtype=la.CDTYPE), tol)
    if k > 1:
        raise PreconditionError(f"group inverse needs index <= 1, matrix has index {k}")
    return drazin(a, tol).d


def dinv(a, tol=DEFAULT_TOL):
    """Shorthand for ``drazin(a, tol).d``."""
    return drazin(a, tol).d


def projector(a, tol=DEFAULT_TOL):
    """Spectral projector ``A^pi = I - A A^d``."""
    return drazin(a, tol).projector
