from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfbasis.exceptions import InvalidInputError
from nfbasis.kernels import DimensionTable, common_kernel, pi_groups, render_group, snap_rational
from nfbasis.linalg import rank

from conftest import OSCILLATOR_B


def oscillator_table():
    return DimensionTable(["M", "L", "T"], ["t", "x0", "xdot0", "k", "m"], OSCILLATOR_B)


class TestCommonKernel:
    def test_repeated_constraint(self):
        K = common_kernel([[[1.0, 0.0]], [[1.0, 0.0]]])
        assert K.shape == (2, 1)
        assert abs(K[0, 0]) < 1e-15

    def test_full_rank_stack(self):
        assert common_kernel([[[1.0, 0.0]], [[0.0, 1.0]]]).shape == (2, 0)

    def test_inconsistent_widths(self):
        with pytest.raises(InvalidInputError):
            common_kernel([np.ones((1, 2)), np.ones((1, 3))])

    def test_no_blocks(self):
        with pytest.raises(InvalidInputError):
            common_kernel([])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.integers(2, 8), st.integers(0, 2**32 - 1))
    def test_annihilates_every_block(self, nblocks, d, seed):
        rng = np.random.default_rng(seed)
        blocks = [rng.standard_normal((int(rng.integers(1, 3)), d)) for _ in range(nblocks)]
        K = common_kernel(blocks)
        for b in blocks:
            for v in K.T:
                assert np.linalg.norm(b @ v) <= 1e-9 * np.linalg.norm(b)


class TestSnapRational:
    def test_half(self):
        assert snap_rational(0.5) == Fraction(1, 2)

    def test_third(self):
        assert snap_rational(0.333333333) == Fraction(1, 3)

    def test_not_representable(self):
        x = -0.43927
        assert snap_rational(x, 64) is None
        # exhaustive oracle: no p/q with q <= 64 lies within the tolerance
        assert not any(abs(x - round(x * q) / q) <= 1e-6 for q in range(1, 65))

    def test_integers(self):
        assert snap_rational(-3.0000000001) == -3

    def test_non_finite(self):
        assert snap_rational(float("nan")) is None

    def test_bad_denominator(self):
        with pytest.raises(InvalidInputError):
            snap_rational(0.5, 0)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(-200, 200), st.integers(1, 64))
    def test_recovers_every_small_fraction(self, p, q):
        assert snap_rational(p / q + 3e-7) == Fraction(p, q)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-10, 10, allow_nan=False), st.integers(1, 64))
    def test_agrees_with_exhaustive_search(self, x, max_den):
        got = snap_rational(x, max_den)
        candidates = {Fraction(round(x * q), q) for q in range(1, max_den + 1)}
        close = [c for c in candidates if abs(x - float(c)) <= 1e-6]
        if got is None:
            assert not close
        else:
            assert got in close and got.denominator <= max_den


class TestPiGroups:
    def test_oscillator(self):
        groups = pi_groups(oscillator_table())
        assert groups.snapped() == [
            [1, -1, 1, 0, 0],
            [1, 0, 0, Fraction(1, 2), Fraction(-1, 2)],
        ]
        assert groups.group_labels == ["t*xdot0/x0", "sqrt(k/m)*t"]
        np.testing.assert_allclose(OSCILLATOR_B @ groups.exponent_columns, 0, atol=1e-9)

    def test_topdown_agrees(self):
        a = pi_groups(oscillator_table())
        b = pi_groups(oscillator_table(), algorithm="topdown")
        np.testing.assert_array_equal(a.exponent_columns, b.exponent_columns)

    def test_single_quantity(self):
        groups = pi_groups(DimensionTable(["L"], ["x"], [[1.0]]))
        assert len(groups) == 0 and groups.group_labels == []

    def test_identical_dimensions(self):
        groups = pi_groups(DimensionTable(["M", "L"], ["q1", "q2"], [[1.0, 1.0], [2.0, 2.0]]))
        assert groups.snapped() == [[1, -1]]
        assert groups.group_labels == ["q1/q2"]

    def test_pendulum(self):
        # period T, length l, gravity g, mass m
        table = DimensionTable(["M", "L", "T"], ["T", "l", "g", "m"],
                               [[0, 0, 0, 1], [0, 1, 1, 0], [1, 0, -2, 0]])
        groups = pi_groups(table)
        assert len(groups) == 1
        col = groups.exponent_columns[:, 0]
        np.testing.assert_allclose(col / col[0], [1, -0.5, 0.5, 0], atol=1e-12)
        assert rank(groups.exponent_columns) == 1

    def test_table_validation(self):
        with pytest.raises(InvalidInputError):
            DimensionTable(["M"], ["a", "a"], [[1, 2]])
        with pytest.raises(InvalidInputError):
            DimensionTable(["M", "L"], ["a"], [[1, 2]])


class TestRender:
    def test_plain_powers(self):
        assert render_group([2, -1, 0], ["a", "b", "c"]) == "a^2/b"

    def test_several_denominators(self):
        assert render_group([1, -1, -2], ["a", "b", "c"]) == "a/(b*c^2)"

    def test_roots(self):
        assert render_group([0.5, -0.5, 1], ["k", "m", "t"]) == "sqrt(k/m)*t"

    def test_unsnappable(self):
        assert "0.43927" in render_group([1, -0.43927], ["a", "b"])

    def test_empty(self):
        assert render_group([0, 0], ["a", "b"]) == "1"
