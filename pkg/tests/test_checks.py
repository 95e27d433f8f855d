import json
import math

import numpy as np
import pytest

from opradius import (
    RadiusOptions,
    lookup,
    registry,
    run_check,
    run_suite,
    search_sharpness,
    suite_exit_code,
    w_N,
    w_Ne,
)
from opradius.sampling import sample_pair

SUITE_NORMS = ["op", "hs", "trace", "schatten:3"]


def test_registry_contents():
    reg = registry()
    ids = [c.id for c in reg]
    assert len(ids) == len(set(ids))
    for expected in (
        "eq11.lower", "eq12.upper", "eq13.lower", "eq15.upper",
        "prop.a", "prop.b1", "prop.b2", "prop.c", "prop.d", "prop.e",
        "thm24.lower", "thm24.upper", "thm26.lower", "thm26.upper",
        "cor28.lower", "thm210.th45", "eq214.th90",
        "thm213", "thm213.alt", "cor214", "cor215", "cor216", "cor217",
        "remark24.lower", "remark27.upper",
        "thm31", "cor32p", "thm34", "id.w2",
    ):
        assert expected in ids, expected
    assert lookup("id.w2") is not None
    assert lookup("eq14.missing") is None


def test_registry_gating_declarations():
    t213 = lookup("thm213")
    assert t213.requires_flags == frozenset({"algebra", "self_adjoint"})
    assert lookup("eq11.lower").norm_ids == frozenset({"op"})
    assert lookup("thm31").norm_ids == frozenset({"hs"})
    assert lookup("cor214").input_tag == "hermitian_pair"
    assert lookup("prop.e").requires_flags == frozenset({"unitarily_invariant"})


def test_run_check_examples(jordan):
    Js = jordan.conj().T
    zero = np.zeros((2, 2), dtype=complex)

    v = run_check("thm24.upper", jordan, Js, "op")
    assert v.status == "sharp"
    assert v.lhs == pytest.approx(1 / math.sqrt(2), abs=1e-7)
    assert v.rhs == pytest.approx(1 / math.sqrt(2), abs=1e-7)

    v = run_check("thm31", jordan, Js, "hs")
    assert v.status == "sharp"
    assert v.lhs == pytest.approx(1.0, abs=1e-9)
    assert v.rhs == pytest.approx(1.0, abs=1e-6)

    v = run_check("eq12.lower", jordan, zero, "op")
    assert v.status == "sharp"
    assert v.lhs == pytest.approx(0.25, abs=1e-9)
    assert v.rhs == pytest.approx(0.25, abs=1e-9)


def test_unknown_check_id(jordan):
    with pytest.raises(ValueError):
        run_check("eq14.missing", jordan, jordan, "op")


def test_suite_jordan_pair(jordan):
    Js = jordan.conj().T
    verdicts = run_suite(jordan, Js, ["op", "hs"])
    assert len(verdicts) == len(registry()) * 2
    assert suite_exit_code(verdicts) == 0
    assert not any(v.status == "violation" for v in verdicts)
    assert sum(1 for v in verdicts if v.status == "sharp") >= 2
    for v in verdicts:
        line = json.loads(v.to_json_line())
        assert set(line) == {"check", "norm", "lhs", "rhs", "slack", "status"}


def test_suite_norm_gating(jordan):
    Js = jordan.conj().T
    verdicts = run_suite(jordan, Js, ["hs"])
    by_id = {v.check_id: v for v in verdicts}
    assert by_id["eq11.lower"].status == "skipped"  # op-only check
    assert by_id["thm31"].status != "skipped"
    assert by_id["id.w2"].status == "sharp"


def test_suite_hermitian_pair_gating(small_opts):
    H, K = sample_pair("hermitian", 2, 50)
    verdicts = {v.check_id: v for v in run_suite(H, K, ["op"], small_opts)}
    assert verdicts["cor214"].status != "skipped"
    B, C = sample_pair("ginibre", 2, 50)
    verdicts = {v.check_id: v for v in run_suite(B, C, ["op"], small_opts)}
    assert verdicts["cor214"].status == "skipped"


def test_suite_wnum_gating(jordan):
    Js = jordan.conj().T
    verdicts = run_suite(jordan, Js, ["wnum"])
    gated = [v for v in verdicts if v.check_id.startswith(("thm213", "cor21"))]
    assert gated and all(v.status == "skipped" for v in gated)
    ungated = [v for v in verdicts if v.check_id.startswith(("prop.", "thm24"))]
    assert all(v.status != "skipped" for v in ungated)
    assert all(v.status != "violation" for v in verdicts)


def test_suite_random_pairs_small_grid():
    opts = RadiusOptions(theta_grid=128, t_grid=33, phi_grid=64)
    for i, family in enumerate(("ginibre", "hermitian", "nilpotent-sq-zero", "normal")):
        for n in (2, 3):
            B, C = sample_pair(family, n, 1300 + 10 * i + n)
            verdicts = run_suite(B, C, SUITE_NORMS, opts)
            bad = [v for v in verdicts if v.status == "violation"]
            assert not bad, [(v.check_id, v.norm_id, v.slack) for v in bad]


def test_converse_gap(jordan):
    # equal component radii do not force the phase bound to be tight
    wj = w_N(jordan, "op").value
    pair = w_Ne(jordan, jordan, "op").value
    half_sum = 0.5 * w_N(2 * jordan, "op").value
    assert pair - half_sum >= 0.1 * wj


def test_identity_checks_have_two_sided_slack(jordan, small_opts):
    v = run_check("prop.a", jordan, 2 * jordan, "op", small_opts)
    assert v.status == "sharp"
    assert abs(v.slack) <= 1e-6 * max(1.0, v.rhs)


def test_search_identity_is_always_sharp(small_opts):
    result = search_sharpness("id.w2", "hs", "ginibre", 10, 1, opts=small_opts)
    assert result.min_relative_slack <= 1e-8
    assert result.evaluated == 10


def test_search_eq13_lower_strict(small_opts):
    result = search_sharpness("eq13.lower", "op", "ginibre", 20, 1, opts=small_opts, polish_steps=8)
    assert result.min_relative_slack > 0.0


def test_search_nilpotent_pairs_hits_equality(small_opts):
    result = search_sharpness(
        "thm24.upper", "op", "nilpotent-pairs", 20, 3, opts=small_opts, polish_steps=4
    )
    assert result.min_relative_slack <= 1e-6


def test_search_validation(small_opts):
    with pytest.raises(ValueError):
        search_sharpness("eq14.missing", "op", "ginibre", 5, 1, opts=small_opts)
    with pytest.raises(ValueError):
        search_sharpness("id.w2", "hs", "not-a-family", 5, 1, opts=small_opts)
    with pytest.raises(ValueError):
        search_sharpness("id.w2", "hs", "ginibre", 0, 1, opts=small_opts)


def test_escalation_counter_default_zero(jordan):
    verdicts = run_suite(jordan, jordan.conj().T, ["op"])
    assert all(v.escalations_used == 0 for v in verdicts)
