"""Smoke tests for the python bindings (built module dir comes from the
WFFD_MODULE_DIR environment variable when run under ctest)."""

import math
import os
import sys

_mod_dir = os.environ.get("WFFD_MODULE_DIR")
if _mod_dir and _mod_dir not in sys.path:
    sys.path.insert(0, _mod_dir)

import _wffd as wffd  # noqa: E402


def test_antipodal_moments():
    d = wffd.make_antipodal()
    assert d.is_discrete
    assert d.mean == 0.0
    assert d.second_moment == 1.0
    assert d.prob_at(1.0) == 0.5


def test_antipodal_bounds():
    outer, regime = wffd.outer_antipodal(3.0, 0.5)
    inner, _ = wffd.inner_antipodal(3.0, 0.5)
    assert regime == 1
    assert abs(outer - 1.5) < 1e-12
    assert abs(inner - 0.5) < 1e-12


def test_fat_tail_variance():
    d = wffd.make_fat_tail(3.0, 4)
    assert abs(d.variance - 1.0) <= 1e-9
    mo = wffd.moments(d)
    assert abs(mo.variance - 1.0) <= 1e-9
    assert abs(wffd.outer_fat(10.0, 3.0) - 2.5) < 1e-12
    assert wffd.choose_M_fat(10.0, 3.0) == 4


def test_mode_bounds_and_gap_terms():
    geo = wffd.make_geometric(0.5)
    g = wffd.gap_terms_mode(geo, 0.0, 1.0)
    assert g["g_m_outer"] <= 3.15
    assert g["g_m_prime"] <= 3.65
    rate, alpha = wffd.inner_mode(3.0, 0.5, wffd.make_antipodal(), 1.0)
    assert abs(rate - 0.88276737318148853) < 1e-10
    assert alpha == 1.0


def test_quantization():
    tree = wffd.quantize_tree(2, 2)
    assert len(tree.paths) == 2
    for path in tree.paths:
        assert abs(path[0] / path[1] - 2.0) < 1e-9
    assert abs(wffd.quantization_penalty(7.0, 1.0 / 7.0) -
               0.5 * math.log2(3.0)) < 1e-12


def test_spec_parsing():
    d = wffd.parse_distribution_spec('{"family":"strong_set","c":2,"M":2}')
    pts = d.points()
    assert [round(v, 9) for v, _ in pts] == [2.0, 4.0]


def test_gauss_and_oracle_quick():
    rate, xs, us, ux = wffd.optimize_rho(10.0, 1e-3)
    assert rate >= 0.5 * math.log2(11.0) - 0.02
    assert abs(1 + 2 * xs * us - xs * xs - us * us - ux * ux) <= 1e-10
    cap = wffd.gp_capacity(1.0, 1.0, wffd.make_antipodal(), nx=3, ns=2, ny=32,
                           u=2, steps=4)
    assert -1e-9 <= cap <= 1.4
