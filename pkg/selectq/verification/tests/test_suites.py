"""
TEST_SUITES

Tests for CheckReport and run_suite.
"""

import pytest

from selectq.verification.reports import CheckReport
from selectq.verification.suites import SUITES, run_suite, suite_names


class TestCheckReport:
    """Tests for CheckReport."""

    def test_pass_flag(self):
        """Tests that passing means a deviation within the tolerance."""
        assert CheckReport("ei", 0, 1, 1e-11, 1e-10).passed
        assert not CheckReport("ei", 0, 1, 1e-9, 1e-10).passed
        assert not CheckReport("ei", 0, 1, float("nan"), 1e-10).passed

    def test_control(self):
        """Tests that a failing negative control is ok."""
        report = CheckReport("ei-control", 0, 1, 0.5, 1e-10, expected=False)
        assert report.ok and report.to_dict()["ok"]


class TestRunSuite:
    """Tests for run_suite."""

    def test_names(self):
        """Tests suite name resolution."""
        assert suite_names("all") == list(SUITES)
        with pytest.raises(KeyError):
            suite_names("proofs")

    def test_equivalence(self):
        """Tests that the equivalence suite passes."""
        reports = run_suite("equiv", seed=0)
        assert len(reports) == 23
        assert all(report.ok for report in reports)

    @pytest.mark.slow
    def test_all(self):
        """Tests every suite at acceptance size."""
        assert all(report.ok for report in run_suite("all", seed=0, workers=2))
