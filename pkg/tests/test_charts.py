import math
from fractions import Fraction

import numpy as np
import pytest

from homflow import charts
from homflow.catalog import sec4_space, sec5_space
from homflow.homspace import classify
from homflow.realization import canonical_bracket, sec4_casimir

ALPHA = math.sqrt(2.0)


def test_sec4_chart_symbolic_identities():
    out = charts.sec4_chart_symbolic_checks()
    assert out["casimir_exact"]
    assert out["intertwining_failures"] == []


def test_sec4_chart_casimir_at_rational_point():
    polys = charts.sec4_orbit_chart().polys
    pt = [Fraction(3, 2), Fraction(-2, 5), Fraction(1, 7), Fraction(4), Fraction(-9, 11)]
    P = [p(pt) for p in polys]
    assert sec4_casimir(P) == pt[4]


@pytest.mark.parametrize("chart,space", [(charts.sec4_orbit_chart(), sec4_space()),
                                         (charts.sec5_orbit_chart(), sec5_space())],
                         ids=["sec4", "sec5"])
def test_chart_dimension_bookkeeping(chart, space):
    r = classify(space)
    assert chart.dim_q == (r.dim_g - r.ind_g) // 2 - r.s_M
    assert chart.n_j == r.ind_g


def test_sec4_chart_domain():
    with pytest.raises(charts.ChartDomainError):
        charts.sec4_orbit_chart()([0.0, 1.0], [0.0, 0.0], [1.0])


def test_sec5_chart_values_and_domain():
    c = charts.sec5_orbit_chart()
    P = c(0.3, 0.7, [1.5, 0.5, 0.2])
    th = 0.2 + ALPHA * 0.3
    assert np.allclose(P, [0.7, 1.5 * math.sin(0.3), 1.5 * math.cos(0.3),
                           ALPHA * 0.5 * math.sin(th), 0.5 * math.cos(th)])
    assert c.bracket_matrix(0.3, 0.7, [1.5, 0.5, 0.2])[0, 1] == pytest.approx(P[2])
    with pytest.raises(charts.ChartDomainError):
        c(0.3, 0.7, [0.0, 0.5, 0.2])


def test_sec5_lifted_k3_over_several_turns():
    c = charts.sec5_orbit_chart()
    for q in (-9.0, 0.5, 12.0):
        assert charts.sec5_lifted_k3(c, q, 0.1, [1.0, 2.0, 0.4]) == pytest.approx(0.4, abs=1e-12)


def test_kappa_jacobians():
    assert charts.kappa_jacobian_det(charts.sec4_orbit_chart(), [0.7]) == pytest.approx(1.0)
    assert charts.kappa_jacobian_det(charts.sec5_orbit_chart(), [1, 1, 0]) == pytest.approx(ALPHA)


def test_sheet_chart():
    s = charts.sec4_sheet_chart()
    a = s.a(2.0, -1.5, 10.0)
    assert s.casimir(a) == pytest.approx(10.0)
    assert s.relation_error(2.0, -1.5, 10.0) < 1e-12
    # {a1, a2} = a1 on the sheet
    assert s.bracket_matrix(2.0, -1.5, 10.0)[0, 1] == pytest.approx(2.0)
    with pytest.raises(charts.ChartDomainError):
        s.a(0.0, 1.0, 1.0)


def test_relation_matrix_at_sample_values():
    # the bracket {a1, a2} at a = (2, 3, 5) is a1 = 2
    from homflow.realization import sec4_relations
    R = sec4_relations((2.0, 3.0, 5.0))
    assert R[0, 1] == 2.0 and R[1, 2] == 5.0 and R[0, 2] == 0.0


def rows_by(tf_rows):
    return {(r.T, r.other): r for r in tf_rows}


def test_sec4_transition_table():
    rows = rows_by(charts.transition_table(charts.sec4_transition(), 100, 0))
    assert all(r.passed for (t, _), r in rows.items() if t == "T_rescaled")
    assert not rows[("T", "j")].passed
    assert not rows[("T", "pi1")].passed
    for other in ("q1", "q2", "pi2", "u", "v"):
        assert rows[("T", other)].passed


def test_printed_sec4_transition_pointwise():
    # {j, T} = 1 / p1 for the printed T; p1 * T restores 1
    tf = charts.sec4_transition()
    z = np.array([0.3, -0.2, 0.5, 0.1, 2.0, 0.4, -0.6, 0.7])
    j = tf.conjugates["j"]
    assert canonical_bracket(j, tf.T["T"][0], z) == pytest.approx(0.5)
    assert canonical_bracket(j, tf.T["T_rescaled"][0], z) == pytest.approx(1.0)


def test_sec4_transition_domain():
    T = charts.sec4_transition().T["T"][0]
    with pytest.raises(charts.ChartDomainError):
        T(np.array([0, 0, 1.0, 0, 0.0, 1.0, 0, 0]))


def test_sec5_transition_table():
    rows = rows_by(charts.transition_table(charts.sec5_transition(), 100, 0))
    for name in ("T1", "T2", "T3_linear"):
        assert all(r.passed for (t, _), r in rows.items() if t == name)
    assert not all(r.passed for (t, _), r in rows.items() if t == "T3")


def test_sec5_t1_brackets_by_hand():
    tf = charts.sec5_transition()
    z = np.array([0.4, -0.3, 0.8, 0.2, 0.5, 0.6, -0.9, 0.3])
    T1 = tf.T["T1"][0]
    assert canonical_bracket(tf.conjugates["j1"], T1, z) == pytest.approx(1.0, abs=1e-9)
    assert canonical_bracket(tf.vanishing["q"], T1, z) == pytest.approx(0.0, abs=1e-9)
    assert canonical_bracket(tf.conjugates["j2"], T1, z) == 0.0


def test_sec5_implicit_variables_invert_chart():
    V = charts.sec5_implicit_variables()
    z = np.array([0.4, -0.3, 0.8, 0.2, 0.5, 0.6, -0.9, 0.3])
    from homflow.realization import sec5_fields
    P = sec5_fields().values(z)
    q, pi = V["q"](z), V["pi"](z)
    j = [V["j1"](z), V["j2"](z), V["j3"](z)]
    assert np.allclose(charts.sec5_orbit_chart()(q, pi, j), P, atol=1e-12)


def test_sec4_reduced_hamiltonian():
    assert charts.sec4_reduced_hamiltonian(2.0, 0.0, 0.0, (1, 0, 0, 0)) == 2.0
    with pytest.raises(charts.ChartDomainError):
        charts.sec4_reduced_hamiltonian(0.0, 1.0, 1.0, (1, 1, 1, 1))
    c = (1.0, 0.5, 0.2, 2.0)
    x = np.array([1.3, 0.4, -0.7])
    g = charts.sec4_reduced_gradient(*x, c)
    h = 1e-6
    num = [(charts.sec4_reduced_hamiltonian(*(x + h * e), c)
            - charts.sec4_reduced_hamiltonian(*(x - h * e), c)) / (2 * h) for e in np.eye(3)]
    assert np.allclose(g, num, atol=1e-8)


def test_sec5_reduced_hamiltonian_special_metrics():
    G = np.zeros((5, 5))
    G[0, 0] = 1.0
    assert charts.sec5_reduced_hamiltonian(0.4, 1.5, (1, 2, 0.3), G) == pytest.approx(1.125)
    assert charts.sec5_A(0.4, (1, 2, 0.3), G) == 0.0
    assert charts.sec5_B(0.4, (1, 2, 0.3), G) == 0.0
    G = np.zeros((5, 5))
    G[0, 2] = G[2, 0] = 1.0
    for form in ("printed", "corrected"):
        assert charts.sec5_reduced_hamiltonian(0.4, 1.5, (1.2, 2, 0.3), G, a_form=form) \
            == pytest.approx(1.5 * 1.2 * math.cos(0.4))


def test_coefficient_discrepancies_are_isolated():
    found = charts.sec5_coefficient_discrepancies()
    assert [(k, ij) for k, ij, _ in found] == [("A", (1, 4)), ("B", (2, 4))]


def test_reduced_flow_sec4_short():
    rep = charts.reduced_flow_check("sec4", T=2.0)
    assert max(rep.conserved_drift.values()) < 1e-6
    assert rep.H_drift_full < 1e-8 and rep.H_drift_reduced < 1e-8
    assert max(rep.reduced_vs_full.values()) < 1e-8
    assert rep.tau_deviation["tau"] < 1e-8


def test_tau_rate_has_half_factor():
    c = charts.SEC4_DEFAULT_C
    rep = charts.reduced_flow_check("sec4", T=2.0)
    s = rep.series
    dtau = np.gradient(s["tau_full"], s["t"])[1:-1]
    u = s["u_full"][1:-1]
    assert np.max(np.abs(dtau - c[3] / (2 * u))) < 1e-5
    assert np.max(np.abs(dtau - c[3] / u)) > 0.1


def test_reduced_flow_sec5_short():
    rep = charts.reduced_flow_check("sec5", T=2.0)
    assert max(rep.conserved_drift.values()) < 1e-6
    assert max(rep.reduced_vs_full.values()) < 1e-8
    for k in ("T1", "T2", "T3_linear"):
        assert rep.tau_deviation[k] < 1e-8
    assert rep.tau_deviation["T3"] > 1e-3


def test_unknown_example():
    with pytest.raises(ValueError):
        charts.reduced_flow_check("sec6")


def test_series_csv():
    text = charts.series_csv({"t": [0.0, 0.5], "x": [1.0, 2.0]})
    assert text == "t,x\n0.0,1.0\n0.5,2.0\n"
