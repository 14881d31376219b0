import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drazin_kit import hypotheses as hyp
from drazin_kit import linalg as la
from drazin_kit.drazin import drazin
from drazin_kit.generators import (
    BLOCK_FAMILIES,
    FAMILIES,
    PSEUDO_FAMILIES,
    GenConfig,
    gen_block2x2,
    gen_instance,
    gen_pq_zero,
    gen_pseudo_block,
    gen_triangular,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
# families whose condition set has the same name
OWN_SET = {f: f for f in FAMILIES}


def _matrix(inst):
    return inst.total if hasattr(inst, "total") else inst.matrix


@pytest.mark.parametrize("family", FAMILIES)
def test_deterministic(family):
    a, _ = gen_instance(GenConfig(seed=11), family)
    b, _ = gen_instance(GenConfig(seed=11), family)
    for x, y in zip(a.blocks, b.blocks):
        np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("family", PSEUDO_FAMILIES + BLOCK_FAMILIES)
def test_families_differ_by_seed(family):
    a, _ = gen_instance(GenConfig(seed=1), family)
    b, _ = gen_instance(GenConfig(seed=2), family)
    assert any(x.shape != y.shape or not np.array_equal(x, y) for x, y in zip(a.blocks, b.blocks))


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(FAMILIES))
def test_instances_satisfy_their_hypotheses(seed, family):
    inst, _ = gen_instance(GenConfig(seed=seed), family)
    report = hyp.check(inst, OWN_SET[family])
    assert report.passed
    assert max(report.residuals.values()) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(PSEUDO_FAMILIES + BLOCK_FAMILIES))
def test_norm_window_and_engine(seed, family):
    inst, _ = gen_instance(GenConfig(seed=seed), family)
    m = _matrix(inst)
    # draws outside the window are rescaled onto its edge, up to rounding
    assert 1e-3 * (1 - 1e-12) <= la.fro(m) <= 1e3 * (1 + 1e-12)
    assert drazin(m).ok


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_miao_truth_matches_engine(seed):
    inst, truth = gen_block2x2(GenConfig(seed=seed), "Miao")
    assert truth is not None
    assert la.rel_diff(drazin(inst.matrix).d, truth) <= la.DEFAULT_TOL.eq_rtol


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_miao_one_by_one_is_scaled_matrix(seed):
    # m = n = 1 with a core A: M has rank one, M^2 = tr(M) M, so M^d = M / tr(M)^2
    inst, truth = gen_block2x2(GenConfig(seed=seed, dims={"m": 1, "n": 1}), "Miao")
    m = inst.matrix
    np.testing.assert_allclose(truth, m / np.trace(m) ** 2, rtol=1e-10)


def test_nil_squares_one_by_one_blocks():
    inst = gen_pseudo_block(GenConfig(seed=5, dims={"n1": 1, "n2": 1}), "NilSquares")
    assert inst.n == 2
    for x in (inst.r, inst.s):
        assert la.fro(x @ x) <= 1e-12 * (1 + la.fro(x) ** 2)
    assert la.rank(inst.p) <= 1 and la.rank(inst.q) <= 1


def test_cor47_alt_gives_lower_triangular():
    inst, _ = gen_block2x2(GenConfig(seed=3, alt=True), "Cor47")
    assert la.fro(inst.b) == 0.0


def test_cor42_alt_keeps_api_b_nonzero():
    seen = 0
    for seed in range(20):
        inst, _ = gen_block2x2(GenConfig(seed=seed, alt=True), "Cor42")
        sym = hyp.block_symbols(inst)
        seen += la.fro(sym["Api"] @ inst.b) > 1e-6
    assert seen > 0


def test_pinned_dims():
    inst, _ = gen_block2x2(GenConfig(seed=0, dims={"m": 4, "n": 2}), "Cor45")
    assert (inst.m, inst.n) == (4, 2)


def test_pq_zero_and_triangular():
    p, q = gen_pq_zero(4)
    assert la.fro(p @ q) <= 1e-12 * (1 + la.fro(p) * la.fro(q))
    a, c, d = gen_triangular(4)
    assert c.shape == (a.shape[0], d.shape[0])


@pytest.mark.parametrize(
    "kwargs",
    [{"seed": -1}, {"max_size": 0}, {"dims": {"m": 0}}, {"similarity_cond_cap": 1e4},
     {"magnitude": 0.0}],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GenConfig(**kwargs)


def test_unknown_family():
    with pytest.raises(ValueError):
        gen_pseudo_block(GenConfig(), "Miao")
    with pytest.raises(ValueError):
        gen_block2x2(GenConfig(), "SpSr")
    with pytest.raises(ValueError):
        gen_instance(GenConfig(), "Nope")
