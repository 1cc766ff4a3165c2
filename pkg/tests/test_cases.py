"""Benchmark case catalogue: stable names, admissible initial data and
consistent metadata."""

import numpy as np
import pytest

from eulerbench.cases import get_case, list_case_names, vortex_sheet_corners
from eulerbench.oracles.pressureless import (OPPOSITE_SIGN, SAME_SIGN,
                                              pressureless_reference)
from eulerbench.runner import build_field
from eulerbench.state import is_admissible

EXPECTED_NAMES = [
    "titarev-toro",
    "large-density-ratio",
    "large-density-ratio-mild",
    "hurricane-critical",
    "hurricane-high",
    "hurricane-low",
    "vortex-sheets-same:p0=1",
    "vortex-sheets-same:p0=0.5",
    "vortex-sheets-same:p0=0.25",
    "vortex-sheets-same:p0=0.15",
    "vortex-sheets-same:p0=0.1",
    "vortex-sheets-opposite:p0=1",
    "vortex-sheets-opposite:p0=0.75",
    "vortex-sheets-opposite:p0=0.5",
    "vortex-sheets-opposite:p0=0.3",
    "vortex-sheets-opposite:p0=0.2",
    "rarefaction-strong",
    "rarefaction-weak",
    "four-shocks",
    "rayleigh-taylor",
    "isentropic-vortex",
]


def test_case_names_are_stable():
    assert list_case_names() == EXPECTED_NAMES


def test_unknown_case_raises():
    with pytest.raises(KeyError):
        get_case("no-such-case")


@pytest.mark.parametrize("name", EXPECTED_NAMES)
def test_initial_data_is_admissible(name):
    case = get_case(name)
    # use a small mesh so all 21 cases initialize quickly
    small = case.with_mesh(24) if not case.is_1d else case.with_mesh(32)
    f = build_field(small)
    assert bool(is_admissible(f.interior, small.gas).all())


def test_gas_models():
    assert get_case("titarev-toro").gamma == pytest.approx(1.4)
    assert get_case("hurricane-critical").gamma == pytest.approx(2.0)
    assert get_case("rayleigh-taylor").gamma == pytest.approx(5.0 / 3.0)


def test_oracle_cases_expose_reference_fields():
    for name in ("large-density-ratio", "hurricane-critical", "isentropic-vortex"):
        case = get_case(name)
        assert case.oracle is not None
        x = np.linspace(*case.xlim, 5)
        q = np.asarray(case.oracle(x[:, None], np.array([[0.5 * sum(case.ylim)]]),
                                   0.5 * case.t_end))
        assert q.shape[0] == 4
        assert np.all(q[0] >= 0.0)


def test_dimensionality_flags():
    assert get_case("titarev-toro").is_1d
    assert get_case("large-density-ratio").is_1d
    assert not get_case("four-shocks").is_1d


def test_with_mesh_rescales():
    case = get_case("four-shocks").with_mesh(50)
    assert (case.nx, case.ny) == (50, 50)
    rt = get_case("rayleigh-taylor").with_mesh(50)
    # the mesh stays square: a quarter-width domain keeps a 1:4 cell ratio
    assert rt.ny == 4 * rt.nx


def test_vortex_sheet_corners_satisfy_orderings():
    same = vortex_sheet_corners("same")
    oppo = vortex_sheet_corners("opposite")
    assert same.u[2] > same.u[0] and same.v[0] > same.v[1]
    assert oppo.u[0] > oppo.u[2] and oppo.v[0] > oppo.v[1]
    # the corner tuples are valid inputs for the limiting-geometry oracle
    pressureless_reference(SAME_SIGN, same, 0.0, 0.0, 1.0)
    pressureless_reference(OPPOSITE_SIGN, oppo, 0.0, 0.0, 1.0)


def test_vortex_case_uses_inviscid_collision_model():
    case = get_case("isentropic-vortex")
    assert case.tau_model.eps_base == 0.0
    assert case.tau_model.c_jump == 0.0


def test_rayleigh_taylor_has_gravity_source():
    case = get_case("rayleigh-taylor")
    assert case.source is not None
    w = np.ones((4, 2, 2))
    s = case.source.rate(w, case.gas)
    # acceleration points along -y in the frame where heavy sits on top of
    # light... the sign convention: a rising light column needs s[MY] != 0
    assert np.any(s[2] != 0.0)
