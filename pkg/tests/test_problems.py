import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linear_sum_assignment

from cfdo.exceptions import DimensionError, EncodingError, ParseError, SizeError
from cfdo.problems import (
    VESSEL_DOMAIN,
    AssignmentInstance,
    FeasibleRecorder,
    PenaltyConfig,
    PressureVesselSolution,
    assignment_cost,
    assignment_objective,
    brute_force_assignment,
    decode_assignment,
    is_feasible,
    load_assignment,
    pressure_vessel_objective,
    table14_instance,
    vessel_constraints,
    vessel_cost,
    vessel_penalized,
)

FIXTURE = Path(__file__).resolve().parents[1] / "fixtures" / "table14.txt"

# cost of the reported design (1.54, 6.10, 30.58, 73.29), frozen by direct evaluation
REPORTED_DESIGN_COST = 14280.242981791596


def test_vessel_cost_examples():
    assert vessel_cost([1, 1, 10, 10]) == pytest.approx(470.111)
    assert vessel_cost([0, 0, 10, 10]) == 0.0
    assert vessel_cost(PressureVesselSolution(1.54, 6.10, 30.58, 73.29)) == pytest.approx(REPORTED_DESIGN_COST)


def test_vessel_constraint_examples():
    g = vessel_constraints([1.54, 6.10, 30.58, 73.29])
    assert g[0] == pytest.approx(-1.54 + 0.590194)
    assert vessel_constraints([1, 1, 10, 241])[3] == 1.0
    g3 = vessel_constraints([1, 1, 100, 200])[2]
    assert g3 == pytest.approx(-math.pi * 1e4 * 200 - (4 / 3) * math.pi * 1e6 + 1296000)
    assert g3 == pytest.approx(-9.1e6, rel=0.01)


def test_printed_g2_variant_never_binds():
    x = [1.0, 0.0, 50.0, 100.0]
    assert vessel_constraints(x)[1] > 0
    assert vessel_constraints(x, printed_g2=True)[1] < 0


def test_penalty_zero_when_feasible():
    x = [1.0, 1.0, 50.0, 100.0]
    assert is_feasible(x)
    assert vessel_penalized(x) == vessel_cost(x)


def test_penalty_quadratic():
    x = np.array([0.5, 1.0, 50.0, 100.0])
    g1 = -0.5 + 0.0193 * 50
    assert vessel_penalized(x, 10.0) == pytest.approx(vessel_cost(x) + 10.0 * g1**2)
    assert vessel_penalized(x, PenaltyConfig(10.0)) == vessel_penalized(x, 10.0)


def test_penalty_config_validation():
    with pytest.raises(ValueError):
        PenaltyConfig(0.0)


def test_vessel_wrong_length():
    with pytest.raises(DimensionError):
        vessel_cost([1, 2, 3])


def test_solution_roundtrip():
    s = PressureVesselSolution.from_array(np.array([1.0, 2.0, 3.0, 4.0]))
    assert np.array_equal(s.as_array(), [1, 2, 3, 4])


def test_feasible_recorder_tracks_cheapest_feasible():
    rec = FeasibleRecorder()
    good = np.array([1.0, 1.0, 50.0, 100.0])
    cheap_bad = np.array([0.1, 0.1, 50.0, 100.0])
    rec(cheap_bad)
    assert rec.best_position is None
    assert rec(good) == vessel_penalized(good)
    assert rec.best_cost == vessel_cost(good)
    rec(np.array([2.0, 2.0, 50.0, 100.0]))
    assert np.array_equal(rec.best_position, good)


def test_vessel_objective_domain():
    spec = pressure_vessel_objective()
    assert spec.dimension == 4
    assert np.array_equal(VESSEL_DOMAIN.lower, [0, 0, 10, 10])
    assert np.array_equal(VESSEL_DOMAIN.upper, [99, 99, 200, 200])
    x = np.array([1.0, 1.0, 50.0, 100.0])
    assert spec(x) == vessel_penalized(x)


@settings(max_examples=100, deadline=None)
@given(x=arrays(float, 4, elements=st.floats(0, 200)))
def test_penalized_never_below_cost(x):
    assert vessel_penalized(x) >= vessel_cost(x)
    if is_feasible(x, tol=0.0):
        assert vessel_penalized(x) == vessel_cost(x)


# -- assignment ------------------------------------------------------------------


def test_decode_example():
    assert decode_assignment([0.9, 0.1, 0.5]) == (3, 1, 2)


def test_decode_ties_are_stable():
    assert decode_assignment([0.5, 0.5, 0.1]) == (2, 3, 1)


@settings(max_examples=100, deadline=None)
@given(x=arrays(float, st.integers(1, 12), elements=st.floats(0, 1)))
def test_decode_is_bijection(x):
    perm = decode_assignment(x)
    assert sorted(perm) == list(range(1, len(x) + 1))


def test_table14_matches_fixture():
    assert np.array_equal(table14_instance().costs, load_assignment(FIXTURE).costs)
    assert table14_instance().n == 5


def test_brute_force_table14():
    perm, cost = brute_force_assignment(table14_instance())
    assert (perm, cost) == ((3, 2, 5, 4, 1), 111.0)
    assert assignment_cost(perm, table14_instance()) == 111.0


def test_brute_force_agrees_with_hungarian_oracle():
    rng = np.random.default_rng(5)
    for n in range(1, 8):
        inst = AssignmentInstance(rng.integers(10, 100, (n, n)).astype(float))
        _, cost = brute_force_assignment(inst)
        rows, cols = linear_sum_assignment(inst.costs)
        assert cost == inst.costs[rows, cols].sum()


def test_brute_force_lexicographic_tie_break():
    inst = AssignmentInstance(np.ones((3, 3)))
    assert brute_force_assignment(inst) == ((1, 2, 3), 3.0)


def test_brute_force_size_limit():
    with pytest.raises(SizeError):
        brute_force_assignment(AssignmentInstance(np.ones((11, 11))))


def test_assignment_cost_rejects_non_permutation():
    with pytest.raises(EncodingError):
        assignment_cost((1, 1, 2, 3, 4), table14_instance())
    with pytest.raises(EncodingError):
        assignment_cost((1, 2, 3), table14_instance())


def test_assignment_objective_decodes():
    spec = assignment_objective(table14_instance())
    x = np.array([0.5, 0.3, 0.9, 0.7, 0.1])  # ranks 3, 2, 5, 4, 1
    assert spec(x) == 111.0
    assert spec.dimension == 5


@pytest.mark.parametrize("text,line", [
    ("", None),
    ("2 2\n1 2\n3 4\n", 1),
    ("x\n", 1),
    ("0\n", 1),
    ("2\n1 2\n", None),
    ("2\n1 2\n3\n", 3),
    ("2\n1 a\n3 4\n", 2),
])
def test_load_assignment_errors(tmp_path, text, line):
    path = tmp_path / "a.txt"
    path.write_text(text)
    with pytest.raises(ParseError) as info:
        load_assignment(path)
    assert info.value.line == line


def test_instance_validation():
    with pytest.raises(DimensionError):
        AssignmentInstance(np.ones((2, 3)))
    with pytest.raises(ValueError):
        AssignmentInstance(-np.ones((2, 2)))
