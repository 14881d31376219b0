import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drazin_kit import block2x2 as blk
from drazin_kit import linalg as la
from drazin_kit.additive import triangular_block_drazin
from drazin_kit.drazin import axiom_residuals, drazin, drazin_oracle, index
from drazin_kit.errors import HypothesisViolation, PreconditionError
from drazin_kit.generators import BLOCK_FAMILIES, GenConfig, gen_block2x2
from drazin_kit.instances import BlockInstance

seeds = st.integers(min_value=0, max_value=2**32 - 1)
EQ = la.DEFAULT_TOL.eq_rtol
ONES = BlockInstance([[1.0]], [[1.0]], [[1.0]], [[1.0]])
QUARTER = np.full((2, 2), 0.25)


def diag_instance():
    a = np.array([[2.0, 1.0], [0.0, 0.0]])
    d = np.array([[0.0, 1.0], [0.0, 0.0]])
    return BlockInstance(a, np.zeros((2, 2)), np.zeros((2, 2)), d)


def test_schur_examples():
    d = np.array([[4.0]])
    assert blk.schur_complement(BlockInstance([[2.0]], [[0.0]], [[5.0]], d)) == pytest.approx(d)
    assert blk.schur_complement(ONES) == pytest.approx(np.zeros((1, 1)))
    assert blk.schur_complement(BlockInstance([[1.0]], [[1.0]], [[1.0]], [[3.0]])) == pytest.approx(
        np.array([[2.0]]))


def test_miao_examples():
    np.testing.assert_allclose(blk.miao_drazin(ONES), QUARTER, atol=1e-14)
    a = np.array([[2.0, 1.0], [1.0, 1.0]])
    inst = BlockInstance(a, np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
    expected = la.assemble_block2x2(np.linalg.inv(a), la.zeros(2, 1), la.zeros(1, 2), la.zeros(1))
    np.testing.assert_allclose(blk.miao_drazin(inst), expected, atol=1e-14)


def test_miao_lists_failing_conditions():
    with pytest.raises(HypothesisViolation) as info:
        blk.miao_drazin(BlockInstance([[1.0]], [[1.0]], [[1.0]], [[3.0]]))
    assert info.value.report.failing == ["Z"]


BLOCK_DIAGONAL_CALLS = {
    "Cor42": lambda i: blk.drazin_bz_zc_apibc(i),
    "Cor44": lambda i: blk.drazin_bz_zcad(i),
    "Cor45": lambda i: blk.drazin_capi(i),
    "Cor47": lambda i: blk.drazin_bc_bd(i),
}


@pytest.mark.parametrize("name", sorted(BLOCK_DIAGONAL_CALLS))
def test_block_diagonal_reduces(name):
    inst = diag_instance()
    expected = la.assemble_block2x2(drazin(inst.a).d, la.zeros(2), la.zeros(2), drazin(inst.d).d)
    np.testing.assert_allclose(BLOCK_DIAGONAL_CALLS[name](inst), expected, atol=1e-14)


def test_zero_blocks():
    z = np.zeros((2, 2))
    inst = BlockInstance(z, z, z, z)
    for call in BLOCK_DIAGONAL_CALLS.values():
        assert not call(inst).any()


def test_cor46ii_on_ones():
    np.testing.assert_allclose(blk.drazin_bz_zcad(ONES, variant="Z0_ApiB0_BCApi0"), QUARTER,
                               atol=1e-14)


def test_cor47_hand_fixture_needs_first_term():
    inst = BlockInstance([[2.0]], [[0.0]], [[1.0]], [[0.0]])
    md, trace = blk.drazin_bc_bd(inst, trace=True)
    np.testing.assert_allclose(md, [[0.5, 0], [0.25, 0]], atol=1e-12)
    # A is invertible, so a bound of ind(A) + 1 = 1 leaves the j-sum empty;
    # the j = 1 term D^pi C (A^d)^2 = 0.25 carries the whole lower-left entry
    assert index(inst.a) == 0
    assert trace.parts["Td"][1, 0] == pytest.approx(0.25)
    assert trace.bounds["n"] == 3


def test_cor45_subcase_without_corrections():
    # C A^pi = 0 and A^pi B = 0: only diag(0, Z^d) + Q^d survives
    inst, _ = gen_block2x2(GenConfig(seed=3), "Miao")
    bk = blk._Blocks(inst, la.DEFAULT_TOL)
    expected = bk.block(br=drazin(bk.z, scale=bk.z_scale).d) + bk.miao_form()
    assert la.rel_diff(blk.drazin_capi(inst), expected) <= 1e-12


def test_bad_arguments():
    with pytest.raises(ValueError):
        blk.drazin_bz_zc_apibc(ONES, variant="nope")
    with pytest.raises(ValueError):
        blk.drazin_bz_zcad(ONES, variant="nope")
    with pytest.raises(ValueError):
        blk.drazin_bc_bd(ONES, projector_reading="other", check=False)
    with pytest.raises(ValueError):
        blk.drazin_capi(ONES, bound_factor=0)


CALLS = {
    "Miao": lambda i, **kw: blk.miao_drazin(i, **kw),
    "Cor42": lambda i, **kw: blk.drazin_bz_zc_apibc(i, **kw),
    "Cor43i": lambda i, **kw: blk.drazin_bz_zc_apibc(i, variant="Z0_ApiBC0", **kw),
    "Cor43ii": lambda i, **kw: blk.drazin_bz_zc_apibc(i, variant="Z0_ApiB0", **kw),
    "Cor44": lambda i, **kw: blk.drazin_bz_zcad(i, **kw),
    "Cor45": lambda i, **kw: blk.drazin_capi(i, **kw),
    "Cor46i": lambda i, **kw: blk.drazin_bz_zcad(i, variant="Z0_CApi0", **kw),
    "Cor46ii": lambda i, **kw: blk.drazin_bz_zcad(i, variant="Z0_ApiB0_BCApi0", **kw),
    "Cor47": lambda i, **kw: blk.drazin_bc_bd(i, **kw),
}


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(BLOCK_FAMILIES), st.booleans())
def test_family_matches_oracle_and_axioms(seed, family, alt):
    inst, _ = gen_block2x2(GenConfig(seed=seed, alt=alt), family)
    m = inst.matrix
    out = CALLS[family](inst)
    assert la.rel_diff(out, drazin_oracle(m)) <= EQ
    assert axiom_residuals(m, out, index(m)).max() <= EQ


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(BLOCK_FAMILIES))
def test_doubled_bounds_change_nothing(seed, family):
    inst, _ = gen_block2x2(GenConfig(seed=seed), family)
    call = CALLS[family]
    assert la.rel_diff(call(inst, bound_factor=2), call(inst)) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(["Cor43i", "Cor43ii"]))
def test_cor43_variants_agree_with_general(seed, family):
    inst, _ = gen_block2x2(GenConfig(seed=seed), family)
    assert la.rel_diff(CALLS[family](inst), CALLS["Cor42"](inst)) <= EQ


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([("Cor46i", "Cor45"), ("Cor46ii", "Cor44")]))
def test_cor46_variants_agree_with_parent(seed, pair):
    # Z = 0 with C A^pi = 0 meets the C A^pi conditions; A^pi B = 0 meets the rest
    family, parent = pair
    inst, _ = gen_block2x2(GenConfig(seed=seed), family)
    assert la.rel_diff(CALLS[family](inst), CALLS[parent](inst)) <= EQ


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bc_bd_with_zero_b_is_lower_triangular(seed):
    inst, _ = gen_block2x2(GenConfig(seed=seed, alt=True), "Cor47")
    lower = triangular_block_drazin(inst.d, inst.c, inst.a, "lower")
    assert la.rel_diff(blk.drazin_bc_bd(inst), lower) <= EQ


@pytest.mark.parametrize("family", ["Cor44", "Cor47"])
def test_literal_projector_reading_is_wrong(family):
    call = CALLS[family]
    devs = []
    for seed in range(40):
        inst, _ = gen_block2x2(GenConfig(seed=seed), family)
        oracle = drazin_oracle(inst.matrix)
        assert la.rel_diff(call(inst), oracle) <= EQ
        devs.append(la.rel_diff(call(inst, projector_reading="literal"), oracle))
    assert max(devs) > 1e-3


def test_trace_shapes():
    inst, _ = gen_block2x2(GenConfig(seed=2, dims={"m": 3, "n": 2}), "Cor44")
    md, trace = blk.drazin_bz_zcad(inst, trace=True)
    assert trace.formula == "Cor44"
    assert trace.z.shape == (2, 2) and trace.w.shape == (3, 3)
    assert trace.parts["G"].shape == md.shape
    assert trace.bounds["g"] >= 0


@pytest.mark.parametrize("family", BLOCK_FAMILIES)
def test_dispatch_uses_a_closed_form(family):
    inst, _ = gen_block2x2(GenConfig(seed=9), family)
    md, name = blk.drazin_block(inst)
    assert name in blk.DISPATCH_ORDER
    assert la.rel_diff(md, drazin_oracle(inst.matrix)) <= EQ


def test_dispatch_fallback():
    rng = np.random.default_rng(0)
    a, b, c, d = (rng.standard_normal((2, 2)) for _ in range(4))
    inst = BlockInstance(a @ np.diag([1.0, 0.0]), b, c, d)
    md, name = blk.drazin_block(inst)
    assert name == "engine"
    np.testing.assert_allclose(md, drazin(inst.matrix).d)
    with pytest.raises(PreconditionError):
        blk.drazin_block(inst, fallback=False)
