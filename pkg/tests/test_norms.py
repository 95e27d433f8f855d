import math

import numpy as np
import pytest

from opradius import (
    HS,
    OP,
    TRACE,
    WNUM,
    check_flags,
    norm_evaluate,
    parse_norm,
    schatten,
)
from opradius.sampling import SamplerSpec, sample


def test_evaluate_examples(jordan):
    assert norm_evaluate(OP, jordan) == pytest.approx(1.0)
    assert norm_evaluate(HS, np.eye(3)) == pytest.approx(math.sqrt(3))
    assert norm_evaluate(TRACE, jordan) == pytest.approx(1.0)
    assert norm_evaluate(schatten(2), jordan) == pytest.approx(1.0)
    assert norm_evaluate(WNUM, jordan) == pytest.approx(0.5, abs=1e-9)


def test_parse_grammar():
    assert parse_norm("op") is OP
    assert parse_norm("hs") is HS
    assert parse_norm("trace") is TRACE
    assert parse_norm("wnum") is WNUM
    nd = parse_norm("schatten:2.5")
    assert nd.p == 2.5 and nd.id == "schatten:2.5"
    assert parse_norm(nd) is nd
    with pytest.raises(ValueError):
        parse_norm("schatten:0.5")
    with pytest.raises(ValueError):
        parse_norm("schatten:65")
    with pytest.raises(ValueError):
        parse_norm("schatten:x")
    with pytest.raises(ValueError):
        parse_norm("nuclear")


def test_declared_flags():
    for nd in (OP, HS, TRACE, schatten(3)):
        assert nd.self_adjoint and nd.algebra and nd.unitarily_invariant
    assert WNUM.self_adjoint and WNUM.unitarily_invariant and not WNUM.algebra


def test_norm_axioms_random():
    rng = np.random.default_rng(31)
    norms = [OP, HS, TRACE, schatten(3)]
    for i in range(120):
        n = 2 + (i % 3)
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        c = complex(rng.normal(), rng.normal())
        for nd in norms:
            na, nb = norm_evaluate(nd, A), norm_evaluate(nd, B)
            scale = max(1.0, na + nb)
            assert na >= 0.0
            assert abs(norm_evaluate(nd, c * A) - abs(c) * na) <= 1e-10 * max(1.0, abs(c) * na)
            assert norm_evaluate(nd, A + B) <= na + nb + 1e-9 * scale


def test_definiteness():
    z = np.zeros((3, 3), dtype=complex)
    tiny = np.full((3, 3), 1e-13, dtype=complex)
    for nd in (OP, HS, TRACE, schatten(3)):
        assert norm_evaluate(nd, z) == 0.0
        assert norm_evaluate(nd, tiny) < 1e-11


def test_schatten_ordering():
    rng = np.random.default_rng(37)
    for i in range(60):
        n = 2 + (i % 3)
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        op_v = norm_evaluate(OP, A)
        tr_v = norm_evaluate(TRACE, A)
        for p in (1.5, 3.0, 7.0):
            sp = norm_evaluate(schatten(p), A)
            scale = max(1.0, tr_v)
            assert op_v <= sp + 1e-9 * scale
            assert sp <= tr_v + 1e-9 * scale


def test_check_flags_pass():
    for nd, samples in ((OP, 100), (HS, 100), (TRACE, 40), (schatten(3), 40)):
        audit = check_flags(nd, samples, 7)
        assert audit.passed, audit.failures
        assert set(audit.checked) == {"self_adjoint", "algebra", "unitarily_invariant"}


def test_check_flags_wnum():
    audit = check_flags(WNUM, 100, 7)
    assert audit.passed, audit.failures
    # the algebra flag is declared false, so it is never asserted
    assert "algebra" not in audit.checked
    assert set(audit.checked) == {"self_adjoint", "unitarily_invariant"}


def test_check_flags_validation():
    with pytest.raises(ValueError):
        check_flags(OP, 0, 1)


def test_wnum_on_hermitian_matches_op():
    # numerical radius equals operator norm on hermitian inputs
    H = sample(SamplerSpec("hermitian", 3, 11))
    assert norm_evaluate(WNUM, H) == pytest.approx(norm_evaluate(OP, H), rel=1e-9)
