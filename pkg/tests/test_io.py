import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfbasis import io
from nfbasis.exceptions import InvalidInputError, MatrixParseError
from nfbasis.normalform import normal_form

from conftest import OSCILLATOR_CSV

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


class TestParseScalar:
    @pytest.mark.parametrize("tok,value", [
        ("3", 3.0), ("-2.5e-3", -2.5e-3), ("1/2", 0.5), ("-3/4", -0.75), (".5", 0.5),
        ("1+2i", 1 + 2j), ("3-4.5i", 3 - 4.5j), ("i", 1j), ("-i", -1j), ("-2j", -2j),
        ("1e-3+1e2i", 1e-3 + 100j), ("2+i", 2 + 1j),
    ])
    def test_values(self, tok, value):
        got = io.parse_scalar(tok)
        assert got == value
        assert isinstance(got, complex) == isinstance(value, complex)

    @pytest.mark.parametrize("tok", ["", "abc", "1/0", "1..2", "1+2", "--1"])
    def test_malformed(self, tok):
        with pytest.raises(MatrixParseError):
            io.parse_scalar(tok)

    @settings(max_examples=300)
    @given(finite)
    def test_real_round_trip(self, x):
        assert io.parse_scalar(io.format_scalar(x)) == x

    @settings(max_examples=300)
    @given(finite, finite)
    def test_complex_round_trip(self, a, b):
        z = complex(a, b)
        assert complex(io.parse_scalar(io.format_scalar(z))) == z


class TestParseMatrix:
    def test_whitespace(self):
        M = io.parse_matrix("1 0\n0 1\n2 0")
        assert M.shape == (3, 2) and M.dtype == float

    def test_complex_csv(self):
        M = io.parse_matrix("1+2i, 0\n0, 1")
        assert M.dtype == complex
        assert M[0, 0] == 1 + 2j

    def test_comments_and_blank_lines(self):
        M = io.parse_matrix("# header\n\n1, 2\n# mid\n3, 4\n")
        np.testing.assert_array_equal(M, [[1, 2], [3, 4]])

    def test_ragged(self):
        with pytest.raises(MatrixParseError, match="line 2"):
            io.parse_matrix("1 2\n3")

    def test_bad_token(self):
        with pytest.raises(MatrixParseError) as info:
            io.parse_matrix("1 2\n3 x4")
        assert info.value.line == 2 and info.value.token == "x4"

    def test_empty(self):
        with pytest.raises(MatrixParseError):
            io.parse_matrix("# nothing\n")


class TestDimensionTable:
    def test_oscillator(self):
        t = io.parse_dimension_table(OSCILLATOR_CSV)
        assert t.dimension_names == ["M", "L", "T"]
        assert t.quantity_names == ["t", "x0", "xdot0", "k", "m"]
        assert t.exponents[2].tolist() == [1, 0, -1, -2, 0]

    def test_rational_exponents(self):
        t = io.parse_dimension_table(",a,b\nL,1/2,-1\n")
        assert t.exponents.tolist() == [[0.5, -1.0]]

    @pytest.mark.parametrize("text", [
        "", ",a,b\n", "q,a\nL,1\n", ",a,b\nL,1\n", ",a,b\nL,1,q\n", ",a,b\nL,1,2i\n", ",a,a\nL,1,2\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(InvalidInputError):
            io.parse_dimension_table(text)


class TestRendering:
    def test_integers_plain(self):
        assert io.format_scalar(2.0) == "2"
        assert io.format_scalar(-0.0) == "0"

    def test_full_precision(self):
        assert io.format_scalar(0.1 + 0.2) == "0.30000000000000004"

    def test_snapped(self):
        assert io.format_snapped(0.49999999999999994) == "1/2"
        assert io.format_snapped(-0.43927) == "-0.43927"
        assert io.format_snapped(0.5 - 1j) == "1/2-1i"

    def test_matrix_alignment(self):
        text = io.format_matrix(np.array([[1.0, -10.0], [0.5, 2.0]]), snap=64)
        assert text.splitlines() == ["  1  -10", "1/2    2"]


class TestJson:
    @pytest.mark.parametrize("complex_", [False, True])
    def test_bit_exact_round_trip(self, rng, complex_):
        A = rng.standard_normal((6, 3))
        if complex_:
            A = A + 1j * rng.standard_normal((6, 3))
        res = normal_form(A)
        report = json.loads(io.dumps(io.normal_form_report(res, 0.1)))
        back = io.matrix_from_json(report["columns"])
        assert back.tobytes() == res.columns.tobytes()

    def test_report_keys(self, rng):
        res = normal_form(rng.standard_normal((5, 2)))
        report = io.normal_form_report(res, 1.5)
        assert set(report) == {"columns", "zero_patterns", "theta", "algorithm", "stats"}
        assert report["stats"]["wall_time"] == 1.5
        assert set(report["theta"][0]) == {"zero_count", "pattern_value", "exact_theta"}
        assert {"selections_enumerated", "candidates_examined", "levels_visited"} <= set(report["stats"])
