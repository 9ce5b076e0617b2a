import cmath
import json
import math
from fractions import Fraction

import pytest

import causticlab as cl


def test_table_entries():
    assert cl.caustic_order("A2") == Fraction(1, 6)
    assert cl.threshold("D4+") == Fraction(1, 3)
    assert cl.caustic_order("E8") == Fraction(7, 15)
    assert "E6" in cl.catalog_types()
    assert cl.catalog_csv().startswith("family,index,sign,k,k0,r,s,kappa,delta0\n")


def test_phase_scaling():
    # A2: x theta + theta^3 with weights r = s = 1/3.
    lam = 2.5
    x, t = 0.3, -0.7
    lhs = cl.phase("A2", [lam ** (2 / 3) * x], [lam ** (1 / 3) * t])
    assert lhs == pytest.approx(lam * cl.phase("A2", [x], [t]), rel=1e-12)


def test_fresnel():
    h = 1e-3
    r = cl.integral("A1", [], h, includes_prefactor=False, rel_tol=1e-10)
    expected = math.sqrt(math.pi * h) * cmath.exp(1j * math.pi / 4)
    assert r.converged
    assert abs(r.value - expected) / abs(expected) < 1e-6


def test_closed_forms():
    assert cl.weighted_cauchy(0.0, 0.1) == pytest.approx(15.70796, abs=1e-5)
    assert cl.sharp_exponent(1 / 3) == pytest.approx(1 / 3)


def test_lattice_counts():
    assert cl.ball_count([0.0, 0.0], 2.6) == 21
    assert cl.sphere_cap_count(2, 25, [0.6, 0.8], mu=1.0, cap_constant=0.5) == 2
    assert cl.sum_of_squares_count(2, 25) == 12


def test_run_catalog_and_echo():
    status, files, summary = cl.run({"experiment": "catalog_dump"})
    assert status == 0
    assert files["catalog.csv"] == cl.catalog_csv()
    echoed = summary["config"]
    assert "workers" not in echoed
    assert cl.normalize_config(echoed) == {**echoed, "workers": 1}


def test_supnorm_run_is_deterministic():
    cfg = {
        "experiment": "supnorm",
        "singularity": "A2",
        "x_strategy": "omega_shells",
        "max_shell_points": 3,
        "h_grid": {"first": 1 / 16, "last": 1 / 512, "points": 6},
        "seed": 7,
    }
    a = cl.run(cfg)
    b = cl.run(dict(cfg, workers=2))
    assert a[1]["scan_0.csv"] == b[1]["scan_0.csv"]
    assert a[2]["fits"][0]["reference_exact"] == "1/6"


def test_invalid_config():
    with pytest.raises(cl.ConfigError, match="/deltas/0"):
        cl.run({"experiment": "supnorm", "deltas": [1.5]})
    with pytest.raises(cl.ConfigError, match="unknown field"):
        cl.run({"experiment": "supnorm", "bogus": 1})


def test_verify_subset():
    rows = cl.verify_all(only=[1, 2, 12])
    assert [r["id"] for r in rows] == [1, 2, 12]
    assert all(r["status"] == "PASS" for r in rows), json.dumps(rows)
