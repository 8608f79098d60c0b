"""Profile construction and tabulated ingestion."""

import numpy as np
import pytest

import slgreen as sg
from slgreen.errors import NonPositiveMass, ValidationError


def test_tabulated_mass_whitespace_and_comments(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("# mass table\n-2.0 1.0\n-1.0 1.2\n0.0 1.5\n1.0 1.2\n2.0 1.0\n")
    m = sg.tabulated_mass(str(path))
    assert m.kind == "tabulated"
    assert m(0.0) == pytest.approx(1.5)
    assert m(-5.0) == pytest.approx(1.0)   # constant extension
    assert m.window == 2.0


def test_tabulated_comma_delimited_inline():
    pot = sg.tabulated_potential("-1.0, 0.0\n0.0, 0.3\n1.0, 0.0\n")
    assert pot(0.0) == pytest.approx(0.3)
    assert pot(3.0) == pytest.approx(0.0)


def test_tabulated_interpolation_is_continuous():
    m = sg.tabulated_mass("-1.0 1.0\n0.0 2.0\n1.0 1.0\n")
    xs = np.linspace(-1.0, 1.0, 401)
    vals = m(xs)
    assert np.max(np.abs(np.diff(vals))) < 0.02     # no jumps at the nodes
    assert np.all(vals >= 1.0 - 1e-12)              # no undershoot


def test_tabulated_requires_increasing_x():
    with pytest.raises(ValidationError, match="strictly increasing"):
        sg.tabulated_mass("0.0 1.0\n0.0 2.0\n1.0 1.0\n")


def test_tabulated_requires_two_columns():
    with pytest.raises(ValidationError, match="two columns"):
        sg.tabulated_mass("0.0 1.0 9.0\n1.0 2.0 9.0\n")


def test_tabulated_mass_must_be_positive():
    with pytest.raises(NonPositiveMass):
        sg.tabulated_mass("-1.0 1.0\n0.0 -0.5\n1.0 1.0\n")


def test_square_well_breakpoints():
    pot = sg.square_well(depth=1.0, half_width=0.8, window=2.0)
    assert pot.breakpoints == (-0.8, 0.8)
    assert pot(0.0) == -1.0 and pot(1.5) == 0.0


def test_linear_potential_flanks():
    pot = sg.linear_potential(slope=0.25, window=6.0)
    assert pot.v_minus == -1.5 and pot.v_plus == 1.5
    assert pot(-10.0) == -1.5 and pot(2.0) == pytest.approx(0.5)
