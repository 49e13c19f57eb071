"""Tests for income CSV and curve TSV files."""

import numpy as np
import pytest

from incomeflow.empirical import (
    IncomeSample,
    IncomeSource,
    build_ccdf,
    read_curve_tsv,
    read_income_csv,
    write_curve_tsv,
    write_income_csv,
)
from incomeflow.errors import DataFormatError, EmptySampleError
from incomeflow.model import sample


class TestIncomeCsv:
    """Tests for read_income_csv and write_income_csv."""

    def test_reads_valid_file(self, tmp_path):
        """Test a small hand-written file."""
        path = tmp_path / "incomes.csv"
        path.write_text(
            "income,source,year\n10,Survey,2008\n"
            "20.5, Survey ,2008\n3e9,RichList,2008\n"
        )
        s = read_income_csv(path)
        np.testing.assert_array_equal(s.incomes, [10.0, 20.5, 3e9])
        assert s.source_counts() == {"Survey": 2, "RichList": 1}
        assert s.records[2].source is IncomeSource.RICH_LIST
        assert s.records[0].year == 2008

    def test_round_trip_is_lossless(self, mds_2008, tmp_path):
        """Test that written incomes read back bit for bit."""
        survey = sample(mds_2008, 2_000, seed=4, year=2008)
        rich = IncomeSample.from_incomes(
            [1.25e9, 3.5e9], source=IncomeSource.RICH_LIST, year=2008
        )
        original = IncomeSample.concat(survey, rich)
        path = write_income_csv(original, tmp_path / "out.csv")
        again = read_income_csv(path)
        np.testing.assert_array_equal(again.incomes, original.incomes)
        np.testing.assert_array_equal(again.sources, original.sources)
        np.testing.assert_array_equal(again.years, original.years)

    def test_malformed_rows_are_reported_with_line_numbers(self, tmp_path):
        """Test that every bad row is named and nothing is skipped."""
        path = tmp_path / "bad.csv"
        path.write_text(
            "income,source,year\n"
            "10,Survey,2008\n"
            "-5,Survey,2008\n"
            "12,Forbes,2008\n"
            "abc,Survey,2008\n"
            "14,Survey,2008.5\n"
            "15,Survey,2008\n"
        )
        with pytest.raises(DataFormatError) as exc_info:
            read_income_csv(path)
        assert exc_info.value.lines == [3, 4, 5, 6]
        assert "bad.csv" in str(exc_info.value)

    def test_empty_file_names_the_file(self, tmp_path):
        """Test the diagnostic for a zero-byte file."""
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(DataFormatError, match="empty.csv"):
            read_income_csv(path)

    def test_header_only(self, tmp_path):
        """Test that a header without records is an empty sample."""
        path = tmp_path / "header.csv"
        path.write_text("income,source,year\n")
        with pytest.raises(EmptySampleError, match="header.csv"):
            read_income_csv(path)

    def test_missing_column(self, tmp_path):
        """Test that the header is checked."""
        path = tmp_path / "nosource.csv"
        path.write_text("income,year\n10,2008\n")
        with pytest.raises(DataFormatError, match="source"):
            read_income_csv(path)

    def test_missing_file(self, tmp_path):
        """Test that a missing path raises DataFormatError."""
        with pytest.raises(DataFormatError):
            read_income_csv(tmp_path / "nowhere.csv")


class TestCurveTsv:
    """Tests for read_curve_tsv and write_curve_tsv."""

    def test_three_row_curve(self, tmp_path):
        """Test the exceedance column for incomes [10, 20, 30]."""
        curve = build_ccdf(IncomeSample.from_incomes([10.0, 20.0, 30.0]))
        path = write_curve_tsv(curve, tmp_path / "curve.tsv")
        lines = path.read_text().splitlines()
        assert lines[0] == "income\texceedance"
        assert [float(line.split("\t")[1]) for line in lines[1:]] == [0.25, 0.5, 0.75]

    def test_large_round_trip(self, mds_2008, tmp_path):
        """Test that a 1e5-point curve back-parses losslessly."""
        curve = build_ccdf(sample(mds_2008, 100_000, seed=9))
        again = read_curve_tsv(write_curve_tsv(curve, tmp_path / "big.tsv"))
        assert again.n == curve.n
        np.testing.assert_array_equal(again.incomes, curve.incomes)
        np.testing.assert_array_equal(again.exceedances, curve.exceedances)

    def test_out_of_order_points_rejected(self, tmp_path):
        """Test that ascending incomes are not a rank-ordered curve."""
        path = tmp_path / "ascending.tsv"
        path.write_text("income\texceedance\n1\t0.25\n2\t0.5\n")
        with pytest.raises(DataFormatError):
            read_curve_tsv(path)

    def test_bad_exceedance_line(self, tmp_path):
        """Test that an exceedance outside (0, 1) is reported by line."""
        path = tmp_path / "badq.tsv"
        path.write_text("income\texceedance\n3\t0.25\n2\t1.5\n")
        with pytest.raises(DataFormatError) as exc_info:
            read_curve_tsv(path)
        assert exc_info.value.lines == [3]
