import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_ic.achievable import achievable_region
from cyclic_ic.channel import ChannelRatios
from cyclic_ic.constraints import ConstraintSet, Kind, expr_str, parse_expr
from cyclic_ic.io import SpecError, digest, load_spec, load_specs, ratios_from_dict
from cyclic_ic.outer import outer_region, strong_capacity


def random_ratios(seed, K):
    rng = np.random.default_rng(seed)
    return ChannelRatios(K, tuple(10 ** rng.uniform(-2, 5, K)), tuple(10 ** rng.uniform(-2, 5, K)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.sampled_from(["ach", "out"]))
def test_csv_and_json_round_trip_bit_exact(seed, K, which):
    r = random_ratios(seed, K)
    cs = achievable_region(r) if which == "ach" else outer_region(r)
    back = ConstraintSet.from_csv(cs.to_csv())
    assert back.constraints == cs.constraints
    again = ConstraintSet.from_json(cs.to_json())
    assert again.constraints == cs.constraints
    assert dict(again.params) == dict(cs.params)
    # the symbolic rhs survives JSON, so the exact system is identical too
    assert again.to_system() == cs.to_system()


def test_csv_shape():
    cs = strong_capacity(ChannelRatios(2, (10, 10), (100, 100)))
    lines = cs.to_csv().splitlines()
    assert lines[0] == "kind,coeffs,rhs_bits,branch,candidates"
    assert len(lines) == 1 + len(cs)
    assert lines[1].startswith("individual:1,1 0,")


@pytest.mark.parametrize("text", ["individual:3", "adjacent:2:4", "total", "total_plus:1"])
def test_kind_text_round_trip(text):
    assert str(Kind.parse(text)) == text


@pytest.mark.parametrize("text", ["individual", "adjacent:1", "sum", "total:2"])
def test_kind_parse_errors(text):
    with pytest.raises(ValueError):
        Kind.parse(text)


def test_expr_round_trip():
    for t in ("g_1+e_2+a_3", "lambda_4", "0"):
        assert expr_str(parse_expr(t)) == t
    with pytest.raises(ValueError):
        parse_expr("g1+e_2")


def test_coeffs_match_kind():
    assert Kind.total_plus(1).coeffs(3) == (1, 2, 1)
    assert Kind.adjacent(2, 3).coeffs(4) == (1, 0, 1, 1)


# -- channel spec files ---------------------------------------------------------


def test_ratio_spec_with_broadcast(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"K": 3, "snr": 100, "inr": [1, 2, 3]}))
    r = load_spec(p)
    assert r.snr == (100.0,) * 3 and r.inr == (1.0, 2.0, 3.0)


def test_gain_spec():
    r = ratios_from_dict({"K": 2, "gains": {"direct": [1, 2], "cross": [0.1, 0]},
                          "powers": [10, 10], "noise": 2})
    assert r.snr == (5.0, 10.0)
    assert r.inr == pytest.approx((0.5, 0.0))


def test_db_conversion():
    r = ratios_from_dict({"K": 2, "snr": [20, 10], "inr": [10, 0]}, db=True)
    assert r.snr == pytest.approx((100.0, 10.0))
    assert r.inr == pytest.approx((10.0, 1.0))


@pytest.mark.parametrize("spec", [
    {"K": 1, "snr": 1, "inr": 1},
    {"K": 2, "snr": [1, 2, 3], "inr": 1},
    {"K": 2, "snr": 1},
    {"K": 2, "snr": 1, "inr": -1},
    {"K": 2, "snr": 1, "inr": 1, "colour": "blue"},
    {"K": "two", "snr": 1, "inr": 1},
])
def test_bad_specs(spec):
    with pytest.raises((SpecError, ValueError)):
        ratios_from_dict(spec)


def test_json_syntax_error_has_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"K": 2,\n "snr": [1, 2,\n}')
    with pytest.raises(SpecError, match=r"bad\.json:3"):
        load_spec(p)


def test_list_of_specs(tmp_path):
    p = tmp_path / "many.json"
    p.write_text(json.dumps([{"K": 2, "snr": 1, "inr": 0}, {"K": 3, "snr": 2, "inr": 1,
                                                            "name": "third"}]))
    assert [r.K for r in load_specs(p)] == [2, 3]


def test_digest_is_order_independent():
    assert digest({"a": 1, "b": [1, 2]}) == digest({"b": [1, 2], "a": 1})
