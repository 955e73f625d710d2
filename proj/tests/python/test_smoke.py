from fractions import Fraction

import pytest

import fck


def test_partition_counts():
    assert fck.count_partitions(6, "nc") == 132
    assert fck.count_partitions(6, "interval") == 32
    assert len(fck.partitions(3, "all")) == 5
    assert fck.join("{1,2|3|4}", "{1|2,3|4}") == "{1,2,3|4}"


def test_free_poisson_laws():
    assert fck.moments("poisson:alpha=1,lambda=1", order=4) == [1, 2, 5, 14]
    assert fck.cumulants([1, 2, 5, 14]) == [1, 1, 1, 1]
    s = fck.transform("poisson:alpha=1,lambda=2", "S", order=3)
    assert s == [Fraction(1, 2), Fraction(-1, 4), Fraction(1, 8), Fraction(-1, 16)]
    f = fck.transform("poisson:alpha=1,lambda=2", "S", order=3, backend="float")
    assert f == pytest.approx([0.5, -0.25, 0.125, -0.0625])


def test_free_product_and_subordination():
    left, right = "binomial:sigma=1,theta=2", "poisson:alpha=1,lambda=3"
    assert fck.joint_moment(left, right, "U V") == fck.moments(left, 1)[0] * fck.moments(right, 1)[0]
    w1, w2 = fck.omega(left, right, order=6)
    r1, r2 = fck.omega(left, right, route="reversion", order=6)
    assert (w1, w2) == (r1, r2)
    assert w2[:3] == [0, 3, 1]


def test_condexp_pairing_shape():
    p = fck.condexp_pairing("binomial:sigma=1,theta=2", "poisson:alpha=1,lambda=3", "id", "x^2", order=4, m_max=2)
    assert len(p) == 3 and all(len(s) == 5 for s in p)
    assert p[0][0] == 0


def test_lukacs_reports():
    assert fck.params_from_constants(1, 2, 1) == {"sigma": 1, "theta": 2, "alpha_v": 1, "lambda_v": 3}
    assert fck.regression_check(1, b=2, c=1)["status"] == "pass"
    bad = fck.regression_check(1, b=1, c=1)
    assert bad["status"] == "fail" and "bc > 1" in bad["checks"][0]["note"]
    assert fck.forward_check(n_max=3)["status"] == "pass"
    assert fck.dual_check(max_order=4)["status"] == "pass"
    assert fck.direct_check()["status"] == "pass"
    with pytest.raises(fck.ResolutionError):
        fck.direct_check(approx_degree=4)


def test_verify_suite():
    rep = fck.verify("all", order=8)
    assert rep["status"] == "pass" and rep["rows"] >= 40


def test_errors():
    with pytest.raises(fck.ParseError):
        fck.moments("nosuchlaw:x=1")
    with pytest.raises(fck.DomainError):
        fck.params_from_constants(1, 1, 1)
