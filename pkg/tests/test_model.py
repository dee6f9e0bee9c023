"""Domain types: validation rules and dissociation thresholds."""

import pytest

from coulomb2e.model import (SystemSpec, ExpTerm3, ExpTerm4, TwoBodyThreshold,
                             NATURAL, UNNATURAL, threshold_for, hminus_spec,
                             ps2_spec, natural_to_ev, HARTREE_EV)


def test_three_body_spec_shape():
    s = hminus_spec(z=1.0)
    assert not s.is_four_body
    assert s.inv_masses == (0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        SystemSpec(inv_masses=(0.0, 1.0), z_central=1.0)
    with pytest.raises(ValueError):
        SystemSpec(inv_masses=(0.0, -1.0, 1.0), z_central=1.0)
    with pytest.raises(ValueError):
        SystemSpec(inv_masses=(0.0, 1.0, 1.0), z_central=1.0, epsilon=2)
    with pytest.raises(ValueError):
        SystemSpec(inv_masses=(0.0, 1.0, 1.0), z_central=1.0, sector="bogus")


def test_four_body_spec_shape():
    s = ps2_spec()
    assert s.is_four_body
    with pytest.raises(ValueError):  # not neutral
        SystemSpec(inv_masses=(1.0,) * 4, z_central=None,
                   charges=(1.0, 1.0, 1.0, -1.0))
    with pytest.raises(ValueError):  # wrong count
        SystemSpec(inv_masses=(1.0,) * 3, z_central=None,
                   charges=(1.0, 1.0, -1.0, -1.0))


def test_exp_term_validation():
    ExpTerm3(1.0, 0.5, -0.3)          # negative single entry is fine
    with pytest.raises(ValueError):
        ExpTerm3(1.0, -1.5, 0.3)      # pair sum a+b <= 0
    assert ExpTerm3(1.0, 0.5, 0.0).as_tuple() == (1.0, 0.5, 0.0)
    ExpTerm4(0.9, 0.2, 0.3, 0.8)
    with pytest.raises(ValueError):
        ExpTerm4(0.5, -0.6, 0.05, 0.5)


def test_threshold_infinite_center():
    thr = threshold_for(hminus_spec(z=1.0))
    assert thr.mu == 1.0
    assert thr.e_ground == -0.5
    assert thr.e_2p == -0.125
    thr2 = threshold_for(hminus_spec(z=2.0))
    assert thr2.e_ground == -2.0


def test_threshold_finite_center_reduced_mass():
    thr = threshold_for(hminus_spec(z=1.0, mass_ratio=1.0))
    assert thr.mu == pytest.approx(0.5)
    assert thr.e_ground == pytest.approx(-0.25)


def test_threshold_asymmetric_keeps_heavier_particle():
    # the center binds the heavier negative particle (larger reduced mass)
    s = SystemSpec(inv_masses=(0.0, 0.5, 2.0), z_central=1.0)
    thr = threshold_for(s)
    assert thr.mu == pytest.approx(2.0)
    assert thr.e_ground == pytest.approx(-1.0)


def test_threshold_four_body_channel_choice():
    thr = threshold_for(ps2_spec())
    assert thr.e_ground == pytest.approx(-0.5)
    # heavy(+)/light(-) pairing: both split choices must be compared
    s = SystemSpec(inv_masses=(0.1, 1.9, 0.1, 1.9), z_central=None,
                   charges=(1.0, 1.0, -1.0, -1.0))
    thr = threshold_for(s)
    # best split pairs heavy with heavy: mu = 1/(0.1+0.1) = 5
    assert thr.e_ground == pytest.approx(-0.5 * 5.0 - 0.5 / (1.9 + 1.9))


def test_e_relevant_sector_switch():
    thr = TwoBodyThreshold(mu=1.0, e_ground=-0.5, e_2p=-0.125, label="t")
    assert thr.e_relevant(NATURAL) == -0.5
    assert thr.e_relevant(UNNATURAL) == -0.125


def test_unit_conversion():
    assert natural_to_ev(1.0) == HARTREE_EV
