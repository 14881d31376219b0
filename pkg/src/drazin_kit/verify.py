"""Named formulas and batch formula-vs-oracle verification.

:data:`FORMULAS` maps the public formula names to the library calls, the
instance kind they take and the hypothesis set they require.
:func:`verify_family` draws seeded instances of a family, evaluates the
family's formula and compares it with :func:`drazin_oracle` of the matrix
the formula inverts.
"""

from dataclasses import dataclass, field

import numpy as np

from . import additive as add
from . import block2x2 as blk
from . import hypotheses as hyp
from . import linalg as la
from .drazin import drazin_oracle
from .errors import DrazinKitError
from .generators import FAMILIES, GenConfig, gen_instance
from .linalg import DEFAULT_TOL


@dataclass(frozen=True)
class Formula:
    name: str
    kind: str  # "pseudo_block" | "block2x2"
    condition_set: str
    run: object  # (inst, tol, bound_factor) -> (matrix, trace or None)
    target: object = None  # inst -> matrix being inverted; default N or M

    def matrix(self, inst, tol=DEFAULT_TOL):
        if self.target is not None:
            return self.target(inst, tol)
        return inst.total if self.kind == "pseudo_block" else inst.matrix


def _t_matrix(inst, tol):
    p, q, r, s = inst.blocks
    ppi = la.eye(inst.n) - p @ add.drazin(p, tol).d
    return (s + q) + ppi @ (r + p)


def _lift(inst, tol, bf):
    nd, parts = add.pseudo_block_lift(inst, tol)
    return nd, dict(zip(("A1", "A2", "A3", "A4"), parts))


def _block(name, **fixed):
    def run(inst, tol, bf):
        return blk.FORMULAS[name](inst, tol, bound_factor=bf, trace=True, **fixed)
    return run


FORMULAS = {
    f.name: f
    for f in (
        Formula("hartwig", "pseudo_block", "HartwigPQ",
                lambda i, tol, bf: (add.hartwig_sum(i.p, i.q, tol, bound_factor=bf), None),
                lambda i, tol: i.p + i.q),
        Formula("lemma35", "pseudo_block", "SpSr",
                lambda i, tol, bf: (add.t_core_drazin(i, tol, bound_factor=bf), None),
                _t_matrix),
        Formula("thm37", "pseudo_block", "SpSr",
                lambda i, tol, bf: add.sum_of_four(i, tol, bound_factor=bf)),
        Formula("cor38", "pseudo_block", "SpSrNil",
                lambda i, tol, bf: add.sum_of_four_nilpotent(i, tol, bound_factor=bf, trace=True)),
        Formula("remark-dual", "pseudo_block", "RsQs",
                lambda i, tol, bf: (add.sum_of_four_dual(i, tol, bound_factor=bf), None)),
        Formula("thm24-lift", "pseudo_block", "NilSquares", _lift),
        Formula("triangular-upper", "block2x2", "TriangularUpper",
                lambda i, tol, bf: (add.triangular_block_drazin(
                    i.a, i.b, i.d, "upper", tol, bound_factor=bf), None)),
        Formula("triangular-lower", "block2x2", "TriangularLower",
                lambda i, tol, bf: (add.triangular_block_drazin(
                    i.d, i.c, i.a, "lower", tol, bound_factor=bf), None)),
        Formula("miao", "block2x2", "Miao", _block("Miao")),
        Formula("cor42", "block2x2", "Cor42", _block("Cor42")),
        Formula("cor43i", "block2x2", "Cor43i", _block("Cor43i")),
        Formula("cor43ii", "block2x2", "Cor43ii", _block("Cor43ii")),
        Formula("cor44", "block2x2", "Cor44", _block("Cor44")),
        Formula("cor45", "block2x2", "Cor45", _block("Cor45")),
        Formula("cor46i", "block2x2", "Cor46i", _block("Cor46i")),
        Formula("cor46ii", "block2x2", "Cor46ii", _block("Cor46ii")),
        Formula("cor47", "block2x2", "Cor47", _block("Cor47")),
    )
}
FORMULA_NAMES = tuple(FORMULAS)

FAMILY_FORMULA = {
    "NilSquares": "thm24-lift",
    "SpSr": "thm37",
    "SpSrNil": "cor38",
    "RsQs": "remark-dual",
    "HartwigPQ": "hartwig",
    "TriangularUpper": "triangular-upper",
    "TriangularLower": "triangular-lower",
    "Miao": "miao",
    "Cor42": "cor42",
    "Cor43i": "cor43i",
    "Cor43ii": "cor43ii",
    "Cor44": "cor44",
    "Cor45": "cor45",
    "Cor46i": "cor46i",
    "Cor46ii": "cor46ii",
    "Cor47": "cor47",
}


def evaluate(name, inst, tol=DEFAULT_TOL, *, bound_factor=1):
    """Run formula ``name`` on ``inst`` (hypotheses are checked first).

    Returns ``(matrix, trace)``; ``trace`` is None for formulas without one.
    """
    try:
        formula = FORMULAS[name]
    except KeyError:
        raise ValueError(
            f"unknown formula {name!r}; valid names: {', '.join(FORMULA_NAMES)}"
        ) from None
    kind = "pseudo_block" if hasattr(inst, "total") else "block2x2"
    if kind != formula.kind:
        raise ValueError(f"formula {name!r} takes a {formula.kind} instance, got {kind}")
    hyp.require(inst, formula.condition_set, tol)
    return formula.run(inst, tol, bound_factor)


@dataclass(frozen=True)
class VerifySummary:
    family: str
    formula: str
    count: int
    passed: int
    max_dev: float
    mean_dev: float
    eq_rtol: float
    failures: list = field(default_factory=list)  # (seed, deviation or message)

    @property
    def ok(self):
        return self.passed == self.count

    def as_dict(self):
        return {
            "family": self.family,
            "formula": self.formula,
            "count": self.count,
            "passed": self.passed,
            "max_dev": self.max_dev,
            "mean_dev": self.mean_dev,
            "eq_rtol": self.eq_rtol,
            "failures": [{"seed": s, "detail": d} for s, d in self.failures],
        }

    def __str__(self):
        lines = [
            f"family   {self.family}",
            f"formula  {self.formula}",
            f"passed   {self.passed}/{self.count} (eq_rtol={self.eq_rtol:g})",
            f"max dev  {self.max_dev:.3e}",
            f"mean dev {self.mean_dev:.3e}",
        ]
        for seed, detail in self.failures:
            shown = f"{detail:.3e}" if isinstance(detail, float) else detail
            lines.append(f"FAIL seed={seed}: {shown}")
        return "\n".join(lines)


def deviation(name, inst, tol=DEFAULT_TOL, *, bound_factor=1):
    """Relative deviation of formula ``name`` from the oracle on ``inst``."""
    got, _ = evaluate(name, inst, tol, bound_factor=bound_factor)
    return la.rel_diff(got, drazin_oracle(FORMULAS[name].matrix(inst, tol), tol))


def verify_family(family, count, seed=0, tol=DEFAULT_TOL, *, formula=None, max_size=None,
                  dims=None):
    """Check ``count`` instances with seeds ``seed, seed + 1, ...``.

    An instance fails when the formula raises or deviates from the oracle
    by more than ``tol.eq_rtol``.
    """
    if family not in FAMILY_FORMULA:
        raise ValueError(f"unknown family {family!r}; valid names: {', '.join(FAMILIES)}")
    if count < 0:
        raise ValueError("count must be non-negative")
    name = formula or FAMILY_FORMULA[family]
    extra = {} if max_size is None else {"max_size": int(max_size)}
    devs = []
    failures = []
    for s in range(seed, seed + count):
        inst, _ = gen_instance(GenConfig(seed=s, dims=dict(dims or {}), **extra), family)
        try:
            dev = deviation(name, inst, tol)
        except DrazinKitError as exc:
            failures.append((s, f"{type(exc).__name__}: {exc}"))
            continue
        devs.append(dev)
        if not dev <= tol.eq_rtol:
            failures.append((s, dev))
    devs = np.array(devs, dtype=float)
    return VerifySummary(
        family=family,
        formula=name,
        count=count,
        passed=count - len(failures),
        max_dev=float(devs.max()) if devs.size else 0.0,
        mean_dev=float(devs.mean()) if devs.size else 0.0,
        eq_rtol=tol.eq_rtol,
        failures=failures,
    )
