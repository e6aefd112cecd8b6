import math

import pytest

import axioquad


def gauss_oracle(b, terms=40):
    # Maclaurin series of exp(-x^2), integrated term by term
    return sum((-1) ** k * b ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1)) for k in range(terms))


def test_integrate_darboux():
    r = axioquad.integrate("exp(-x^2)", 0, 1, eps=1e-6)
    assert r["method"] == "darboux"
    assert abs(r["value"] - gauss_oracle(1.0)) <= 1e-6
    assert r["bracket"]["lower"] <= r["value"] <= r["bracket"]["upper"]


def test_integrate_ftc():
    r = axioquad.integrate("cos(x)", 0, math.pi / 2, F="sin(x)")
    assert r["method"] == "ftc"
    assert r["value"] == pytest.approx(1.0, abs=1e-15)


def test_geometry():
    assert abs(axioquad.arclength("2*x", 0, 3)["value"] - 3 * math.sqrt(5)) <= 1e-9
    v = axioquad.volume("1", 1, 2, eps=1e-5)
    assert abs(v["value"] - 3 * math.pi) <= 1e-8
    assert len(v["extracted_rho_samples"]) == 9
    assert abs(axioquad.area("x", 0, 1)["value"] - 0.5) <= 1e-6


def test_limits():
    assert axioquad.estimate_limit(lambda h: math.sin(h) / h)["value"] == pytest.approx(1.0, abs=1e-9)
    assert abs(axioquad.fit_order(lambda h: h * h)["slope"] - 2) <= 0.05
    assert axioquad.is_little_o(math.sin, 0)["verdict"]
    assert not axioquad.is_little_o(math.sin, 1)["verdict"]


def test_axioms():
    ok = axioquad.verify_additivity(lambda x, y: y - x, 0, 2)
    assert ok["pass"] and ok["seed"] == 42 and len(ok["trials"]) == 202
    assert not axioquad.verify_additivity(lambda x, y: (y - x) ** 2, 0, 2)["pass"]
    r = axioquad.verify_asymptotic(lambda x, y: math.sin(y) - math.sin(x), "cos(x)", 0, 3, [0.5, 1.5, 2.5])
    assert r["pass"]


def test_errors():
    with pytest.raises(axioquad.Error) as e:
        axioquad.integrate("x+", 0, 1)
    assert e.value.kind == "syntax"
    with pytest.raises(axioquad.Error) as e:
        axioquad.area("x - 0.5", 0, 1)
    assert e.value.kind == "precondition"
    with pytest.raises(ValueError):
        axioquad.arclength("sqrt(x)", 0, 1)
