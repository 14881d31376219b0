"""Drazin inverses of dense complex matrices and closed-form formulas for
Drazin inverses of sums and of 2x2 block matrices, each checked against an
independent oracle.
"""

from .additive import (
    PierceContext,
    SumOfFourTrace,
    SummationBounds,
    corner_drazin,
    hartwig_sum,
    pierce_blocks,
    pseudo_block_lift,
    sum_of_four,
    sum_of_four_dual,
    sum_of_four_nilpotent,
    t_core_drazin,
    triangular_block_drazin,
)
from .block2x2 import (
    BlockFormulaTrace,
    drazin_bc_bd,
    drazin_block,
    drazin_bz_zc_apibc,
    drazin_bz_zcad,
    drazin_capi,
    miao_drazin,
    schur_complement,
)
from .drazin import (
    AxiomResiduals,
    DrazinResult,
    axiom_residuals,
    drazin,
    drazin_oracle,
    group_inverse,
    index,
)
from .errors import (
    DrazinKitError,
    HypothesisViolation,
    IllConditionedError,
    NumericalError,
    PreconditionError,
    ShapeError,
)
from .generators import GenConfig, gen_block2x2, gen_instance, gen_pseudo_block
from .hypotheses import HypothesisReport, check, check_all, condition_set
from .instances import BlockInstance, PseudoBlockInstance
from .linalg import DEFAULT_TOL, Tolerance, pinv, rank

__version__ = "0.1.0"
