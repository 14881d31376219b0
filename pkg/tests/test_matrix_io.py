import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drazin_kit import matrix_io as mio
from drazin_kit.generators import FAMILIES, GenConfig, gen_instance
from drazin_kit.instances import PseudoBlockInstance

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_real_entries_stay_real():
    doc = mio.matrix_to_dict(np.array([[1.0, 2.5]]))
    assert doc == {"rows": 1, "cols": 2, "data": [[1.0, 2.5]]}


def test_complex_entries_are_pairs():
    doc = mio.matrix_to_dict(np.array([[1 + 2j]]))
    assert doc["data"] == [[[1.0, 2.0]]]
    np.testing.assert_array_equal(mio.matrix_from_dict(doc), [[1 + 2j]])


def test_mixed_entries_read():
    a = mio.matrix_from_dict({"rows": 2, "cols": 2, "data": [[1, [0, -1]], [0.5, 3]]})
    np.testing.assert_array_equal(a, [[1, -1j], [0.5, 3]])
    assert a.dtype == np.complex128


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"rows": 1, "cols": 1},
        {"rows": 0, "cols": 1, "data": []},
        {"rows": 2, "cols": 1, "data": [[1]]},
        {"rows": 1, "cols": 2, "data": [[1]]},
        {"rows": 1, "cols": 1, "data": [["x"]]},
        {"rows": 1, "cols": 1, "data": [[[1, 2, 3]]]},
        {"rows": 1, "cols": 1, "data": [[True]]},
    ],
)
def test_malformed_matrix(doc):
    with pytest.raises(mio.FileFormatError):
        mio.matrix_from_dict(doc)


def test_malformed_instance():
    with pytest.raises(mio.FileFormatError):
        mio.instance_from_dict({"kind": "other"})
    with pytest.raises(mio.FileFormatError, match="Q"):
        mio.instance_from_dict({"kind": "pseudo_block", "P": mio.matrix_to_dict(np.eye(1))})


def test_file_round_trip(tmp_path):
    z = np.zeros((2, 2))
    inst = PseudoBlockInstance(np.eye(2), z, z, 1j * np.eye(2), family="SpSr")
    path = tmp_path / "inst.json"
    mio.write_instance(path, inst)
    back = mio.read_instance(path)
    assert back.family == "SpSr"
    for x, y in zip(inst.blocks, back.blocks):
        np.testing.assert_array_equal(x, y)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(mio.FileFormatError):
        mio.read_matrix(bad)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(FAMILIES))
def test_instance_round_trip_exact(seed, family):
    inst, _ = gen_instance(GenConfig(seed=seed), family)
    text = mio.dumps(mio.instance_to_dict(inst))
    back = mio.instance_from_dict(json.loads(text))
    assert type(back) is type(inst)
    for x, y in zip(inst.blocks, back.blocks):
        np.testing.assert_array_equal(x, y)
    assert mio.dumps(mio.instance_to_dict(back)) == text
