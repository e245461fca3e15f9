import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from jordansusy.io import GridSeries, fmt, read_config, to_jsonable, write_json

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.one_of(finite, st.sampled_from([math.pi, 1e-320, -0.0, 5e-324, 1.7976931348623157e308])))
def test_fmt_round_trips(v):
    assert float(fmt(v)) == v
    assert math.copysign(1.0, float(fmt(v))) == math.copysign(1.0, v)


@given(xs=hnp.arrays(float, st.integers(2, 20), elements=finite, unique=True),
       vals=hnp.arrays(float, 20, elements=st.floats(width=64)))
def test_csv_round_trip_bit_exact(tmp_path_factory, xs, vals):
    x = np.sort(xs)
    v = vals[: x.size]
    path = tmp_path_factory.mktemp("csv") / "s.csv"
    GridSeries(x, [v, -v]).to_csv(path)
    back = GridSeries.from_csv(path)
    assert back.x.tobytes() == x.tobytes()
    for a, b in zip(back.values, [v, -v]):
        np.testing.assert_array_equal(a, b)  # NaN-aware
        keep = ~np.isnan(b)  # decimal text carries no NaN payload or sign
        assert a[keep].tobytes() == b[keep].tobytes()


def test_csv_layout(tmp_path):
    path = GridSeries([0.0, 0.5, 1.0], [[1.0, 2.0, 3.0], [0.1, 0.2, 0.3]]).to_csv(tmp_path / "a.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "x,value,value2"
    assert lines[1] == "0,1,0.10000000000000001"
    assert len(lines) == 4


def test_json_round_trip(tmp_path):
    s = GridSeries(np.linspace(0, 1, 7), [np.sin(np.arange(7.0)), np.full(7, np.nan)], ["a", "b"])
    path = write_json(tmp_path / "s.json", s.to_json())
    back = GridSeries.from_json(json.loads(path.read_text()))
    assert back.labels == ["a", "b"]
    assert back.x.tobytes() == s.x.tobytes()
    assert back.values[0].tobytes() == s.values[0].tobytes()
    assert np.isnan(back.values[1]).all()


def test_series_validation():
    with pytest.raises(ValueError):
        GridSeries([0.0, 1.0], [])
    with pytest.raises(ValueError):
        GridSeries([0.0, 1.0], [[1.0, 2.0, 3.0]])
    with pytest.raises(ValueError):
        GridSeries([1.0, 0.0], [[1.0, 2.0]])


def test_to_jsonable():
    out = to_jsonable({"a": np.float64(1.5), "b": np.array([1, 2]), "c": math.inf,
                       "d": (np.int64(3), np.bool_(True)), 4: -math.inf})
    assert out == {"a": 1.5, "b": [1, 2], "c": "inf", "d": [3, True], "4": "-inf"}
    json.dumps(out, allow_nan=False)


def test_read_config(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nmodel = box\n\nLambda = 39.5  # trailing\nx-0=0.5\neps = 1, 2\n")
    assert read_config(p) == {"model": "box", "lambda": "39.5", "x_0": "0.5", "eps": "1, 2"}


@pytest.mark.parametrize("text", ["model box\n", " = 3\n"])
def test_read_config_rejects(tmp_path, text):
    p = tmp_path / "bad.cfg"
    p.write_text(text)
    with pytest.raises(ValueError):
        read_config(p)
