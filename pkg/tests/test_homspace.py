import random
from fractions import Fraction

import numpy as np
import pytest

from homflow.catalog import (heisenberg, heisenberg_space, sec4_algebra, sec4_space, sec5_algebra,
                             sec5_space, unit_vector)
from homflow.homspace import (MetricForm, SubalgebraSpec, classify, covector_profile,
                              generic_hperp_covector, hperp_basis, is_generic, metric_admissibility)
from homflow.lie_core import algebra_index
from homflow.linalg import matrix_rank


def test_sec4_report():
    r = classify(sec4_space())
    assert r.invariant_tuple() == (1, 0, 0, 3, 1, 1)
    assert r.thm1_integrable and not r.thm2_integrable
    assert not r.commutative
    assert r.dim_orbit == 4


def test_sec5_report():
    r = classify(sec5_space())
    assert r.invariant_tuple() == (3, 0, 0, 3, 3, 0)
    assert r.thm2_integrable and r.commutative
    assert r.dim_orbit == 2


def test_heisenberg_center_as_isotropy():
    # covectors in h^perp kill the center, so every one of them is fully degenerate
    r = classify(heisenberg_space())
    assert r.invariant_tuple() == (1, 1, 1, 2, 2, 0)


@pytest.mark.parametrize("alg", [sec4_algebra(), sec5_algebra(), heisenberg()],
                         ids=["sec4", "sec5", "heisenberg"])
def test_trivial_isotropy_reduces_to_group(alg):
    r = classify(SubalgebraSpec(alg, []))
    ind = algebra_index(alg)
    assert (r.s_M, r.i_M, r.dim_F, r.ind_F) == (0, 0, alg.n, ind)
    assert r.defect == (alg.n - ind) // 2


@pytest.mark.parametrize("space", [sec4_space(), sec5_space(), heisenberg_space()],
                         ids=["sec4", "sec5", "heisenberg"])
def test_report_consistency(space):
    r = classify(space)
    assert min(r.s_M, r.i_M, r.defect) >= 0
    assert r.dim_F - r.ind_F == 2 * r.defect
    assert r.defect_from_quotients == r.defect
    assert r.dim_orbit == r.dim_g - r.ind_g - 2 * r.s_M


def test_max_rank_covector_can_be_nongeneric():
    h = sec4_space()
    lam = [1, 0, 0, 0, 0]
    assert covector_profile(h, lam) == (1, 1)
    assert not is_generic(h, lam)
    assert covector_profile(h, generic_hperp_covector(h)) == (1, 0)


def test_hperp_annihilates_h():
    for h in (sec4_space(), sec5_space(), heisenberg_space()):
        for lam in hperp_basis(h):
            for v in h.basis:
                assert abs(sum(float(a) * float(b) for a, b in zip(lam, v))) < 1e-12
        assert len(hperp_basis(h)) == h.codim


def test_subalgebra_validation():
    with pytest.raises(ValueError, match="dependent"):
        SubalgebraSpec(sec4_algebra(), [unit_vector(5, 1), [2, 0, 0, 0, 0]])
    with pytest.raises(ValueError, match="leaves"):
        SubalgebraSpec(sec4_algebra(), [unit_vector(5, 2), unit_vector(5, 3)])
    with pytest.raises(ValueError, match="length"):
        SubalgebraSpec(sec4_algebra(), [[1, 0]])


def test_classify_is_basis_independent():
    alg = sec4_algebra()
    rng = random.Random(7)
    base = classify(sec4_space()).invariant_tuple()
    for _ in range(3):
        while True:
            M = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)]
                 for _ in range(5)]
            for i in range(5):
                M[i][4] = Fraction(int(i == 4))  # the new e5 is the old e5
            if matrix_rank(M, exact=True) == 5:
                break
        new = alg.change_basis(M)
        h = SubalgebraSpec(new, [unit_vector(5, 5)])
        assert classify(h, seed=3).invariant_tuple() == base


def test_metric_admissibility():
    for h in (sec4_space(), sec5_space()):
        rep = metric_admissibility(h, np.eye(5))
        assert rep.rank_ok
        assert not rep.adH_invariant
    # a central isotropy acts trivially, so any metric is invariant
    rep = metric_admissibility(heisenberg_space(), np.eye(3))
    assert rep.rank_ok and rep.adH_invariant


def test_metric_must_be_symmetric():
    with pytest.raises(ValueError):
        MetricForm([[1, 2], [0, 1]])


def test_as_dict_labels():
    d = classify(sec4_space()).as_dict()
    assert d["thm1"] == "integrable"
    assert d["thm2"] == "nonintegrable"
