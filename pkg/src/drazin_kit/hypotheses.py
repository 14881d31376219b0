"""Hypothesis sets of every formula, with numerical checking.

A condition set is a list of requirements over named symbols.  Pseudo-block
instances expose ``P, Q, R, S``; block instances expose ``A, B, C, D`` plus
the derived ``Ad`` (A^d), ``Api`` (A^pi) and ``Z`` (D - C A^d B).

Residuals
---------
* product ``X1 X2 ... Xk = 0``: ``||X1...Xk|| / (1 + ||X1|| ... ||Xk||)``
* ``Z = 0``: ``||Z|| / (1 + ||D|| + ||C|| ||A^d|| ||B||)``
* ``X^d = 0``: ``||drazin(X).d||``
"""

from dataclasses import dataclass

from . import linalg as la
from .drazin import drazin
from .errors import HypothesisViolation, PreconditionError
from .instances import BlockInstance, PseudoBlockInstance
from .linalg import DEFAULT_TOL


@dataclass(frozen=True)
class Requirement:
    label: str
    factors: tuple
    kind: str = "zero"  # "zero" | "nilpotent" | "schur"


@dataclass(frozen=True)
class ConditionSet:
    name: str
    target: str  # "pseudo_block" | "block2x2"
    requirements: tuple

    @property
    def labels(self):
        return [req.label for req in self.requirements]


def _zero(*labels):
    return tuple(Requirement(lab, tuple(lab.split())) for lab in labels)


def _nil(*syms):
    return tuple(Requirement(f"{s}^d", (s,), "nilpotent") for s in syms)


_Z0 = (Requirement("Z", ("Z",), "schur"),)
_PB = _zero("P Q", "Q P", "P S", "S Q", "Q R", "R P")

CONDITION_SETS = {
    cs.name: cs
    for cs in (
        ConditionSet("PseudoBlock", "pseudo_block", _PB + _nil("R", "S")),
        ConditionSet("NilSquares", "pseudo_block", _PB + _nil("R", "S") + _zero("R R", "S S")),
        ConditionSet("SpSr", "pseudo_block", _PB + _zero("S P", "S R")),
        ConditionSet("SpSrNil", "pseudo_block", _PB + _zero("S P", "S R") + _nil("R", "S")),
        ConditionSet("RsQs", "pseudo_block", _PB + _zero("R S", "Q S")),
        ConditionSet("HartwigPQ", "pseudo_block", _zero("P Q")),
        ConditionSet("Miao", "block2x2", _zero("C Api", "Api B") + _Z0),
        ConditionSet("Cor42", "block2x2", _zero("B Z", "Z C", "Api B C")),
        ConditionSet("Cor43i", "block2x2", _Z0 + _zero("Api B C")),
        ConditionSet("Cor43ii", "block2x2", _Z0 + _zero("Api B")),
        ConditionSet("Cor44", "block2x2", _zero("B Z", "Z C Ad", "Api B C", "B C Api")),
        ConditionSet("Cor45", "block2x2", _zero("B Z", "Z C", "C Api A", "C Api B")),
        ConditionSet("Cor46i", "block2x2", _Z0 + _zero("C Api")),
        ConditionSet("Cor46ii", "block2x2", _Z0 + _zero("Api B", "B C Api")),
        ConditionSet("Cor47", "block2x2", _zero("B C", "B D")),
        ConditionSet("TriangularUpper", "block2x2", _zero("C")),
        ConditionSet("TriangularLower", "block2x2", _zero("B")),
    )
}
SET_NAMES = tuple(CONDITION_SETS)


@dataclass(frozen=True)
class HypothesisReport:
    set: str
    residuals: dict
    passed: bool
    eq_rtol: float

    @property
    def failing(self):
        return [k for k, v in self.residuals.items() if v > self.eq_rtol]

    def as_dict(self):
        return {
            "set": self.set,
            "residuals": dict(self.residuals),
            "verdict": "pass" if self.passed else "fail",
            "eq_rtol": self.eq_rtol,
        }

    def __str__(self):
        lines = [f"{self.set}: {'pass' if self.passed else 'FAIL'} (eq_rtol={self.eq_rtol:g})"]
        for label, value in self.residuals.items():
            mark = "ok " if value <= self.eq_rtol else "BAD"
            lines.append(f"  {mark} {label:<10} {value:.3e}")
        return "\n".join(lines)


def condition_set(name):
    try:
        return CONDITION_SETS[name]
    except KeyError:
        raise PreconditionError(
            f"unknown condition set {name!r}; valid names: {', '.join(SET_NAMES)}"
        ) from None


def block_symbols(inst, tol=DEFAULT_TOL):
    ad = drazin(inst.a, tol).d
    return {
        "A": inst.a,
        "B": inst.b,
        "C": inst.c,
        "D": inst.d,
        "Ad": ad,
        "Api": la.eye(inst.m) - inst.a @ ad,
        "Z": inst.d - inst.c @ ad @ inst.b,
    }


def _symbols(instance, target, tol):
    if target == "pseudo_block":
        if not isinstance(instance, PseudoBlockInstance):
            raise PreconditionError("condition set targets pseudo-block instances")
        return dict(zip("PQRS", instance.blocks))
    if not isinstance(instance, BlockInstance):
        raise PreconditionError("condition set targets 2x2 block instances")
    return block_symbols(instance, tol)


def _residual(req, sym, tol):
    mats = [sym[f] for f in req.factors]
    if req.kind == "nilpotent":
        return la.fro(drazin(mats[0], tol).d)
    if req.kind == "schur":
        scale = 1.0 + la.fro(sym["D"]) + la.fro(sym["C"]) * la.fro(sym["Ad"]) * la.fro(sym["B"])
        return la.fro(sym["Z"]) / scale
    prod = la.mdot(*mats)
    scale = 1.0
    for x in mats:
        scale *= la.fro(x)
    return la.fro(prod) / (1.0 + scale)


def check(instance, cset, tol=DEFAULT_TOL, symbols=None):
    """Evaluate every requirement of ``cset`` (a name or ConditionSet)."""
    if isinstance(cset, str):
        cset = condition_set(cset)
    sym = symbols if symbols is not None else _symbols(instance, cset.target, tol)
    residuals = {req.label: _residual(req, sym, tol) for req in cset.requirements}
    passed = all(v <= tol.eq_rtol for v in residuals.values())
    return HypothesisReport(cset.name, residuals, passed, tol.eq_rtol)


def require(instance, cset, tol=DEFAULT_TOL, symbols=None):
    """Like :func:`check` but raise :class:`HypothesisViolation` on failure."""
    report = check(instance, cset, tol, symbols)
    if not report.passed:
        worst = ", ".join(f"{k}={report.residuals[k]:.2e}" for k in report.failing)
        raise HypothesisViolation(f"{report.set} hypotheses fail: {worst}", report)
    return report


def check_all(instance, tol=DEFAULT_TOL):
    """Reports for every condition set applicable to the instance type."""
    target = "pseudo_block" if isinstance(instance, PseudoBlockInstance) else "block2x2"
    sym = _symbols(instance, target, tol)
    return {
        name: check(instance, cs, tol, sym)
        for name, cs in CONDITION_SETS.items()
        if cs.target == target
    }
