import math

import numpy as np
import pytest

import oligo

MONOPOLY = {
    "version": 1,
    "demand": {"family": "linear", "n": 1, "b": 1, "lambda": 1, "mu": 0},
    "cost": {"kind": "constant", "mc": 0},
    "conduct": {"kind": "price"},
    "scheme": {"kind": "unit_adval"},
    "taxes": {"t": 0.1, "v": 0.2},
}


def test_solve_linear_monopoly():
    out = oligo.solve(MONOPOLY)
    assert out["equilibrium"]["p_star"] == pytest.approx(0.5625, abs=1e-12)
    t = next(d for d in out["dimensions"] if d["name"] == "t")
    assert t["rho"] == pytest.approx(1 / 0.8 / 2, abs=1e-12)


def test_unknown_key_raises_value_error():
    bad = dict(MONOPOLY, extra=1)
    with pytest.raises(ValueError):
        oligo.solve(bad)


def test_sweep_columns():
    cfg = dict(MONOPOLY, sweep={"axes": [{"param": "taxes.t", "from": 0, "to": 0.2, "steps": 3}]})
    cols = oligo.sweep(cfg, threads=2)
    assert cols["taxes.t"] == pytest.approx([0, 0.1, 0.2])
    assert len(cols["p_star"]) == 3


def test_scalar_forms():
    assert oligo.mc_unit(0.3, 2, 0.2, 0.2, 1) == pytest.approx(0.8)
    assert oligo.incidence(1, 0, 0.5) == pytest.approx(0.5)
    assert oligo.rho_v_from_rho_t(0.6, 1, 2) == pytest.approx(0.3)
    with pytest.raises(ArithmeticError):
        oligo.mc_unit(0.3, 2, 0.75, 0.5, 1)


def test_closed_form():
    p, q = oligo.linear_closed_form(2, 0.5)
    assert p == pytest.approx(2 / 3)
    p, q = oligo.linear_closed_form(2, 0.5, mode="quantity")
    assert p == pytest.approx(0.8)


def test_hetero_matrix():
    out = oligo.hetero_linear_passthrough(
        np.array([1.0, 1.2]), np.array([1.0, 1.1]), 0.2, [0.1, 0.2], t=0.05, v=0.1
    )
    assert out["rho_tilde"].shape == (2, 2)
    mc = out["MC"][:, 0]
    assert mc.min() - 1e-12 <= out["total_MC"][0] <= mc.max() + 1e-12


def test_figure2_shape():
    f = oligo.figure(2, points=5)
    assert set(f["panel"]) == {"n", "mu"}
    assert all(math.isfinite(x) for x in f["rho_t_P"])


def test_validate_default_passes():
    rep = oligo.validate(per_combination=1)
    failing = [c["name"] for c in rep["checks"] if not c["pass"] and not c.get("informational")]
    assert failing == []


def test_run_cli_usage_error():
    assert oligo.run_cli(["figure", "--id", "9"]) == 2
