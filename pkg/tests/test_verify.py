"""Named CLI verification checks (plumbing; the claims themselves are
exercised at full scale by the acceptance suite)."""

import pytest

from quadnet import run_check
from quadnet.verify import VerifyResult, estimator_fixtures_ok


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        run_check("nope")


def test_prop1_small_scale_passes():
    result = run_check("prop1", resolution=(300, 300), threads=1)
    assert isinstance(result, VerifyResult)
    assert result.passed
    assert "PASS: prop1" in result.report()


def test_real_contrast_small_scale_passes():
    result = run_check("real-contrast", resolution=(50, 50, 50), threads=1)
    assert result.passed
    assert len(result.lines) == 2


def test_classical_reports_format():
    result = run_check("classical", resolution=(120, 120), threads=1)
    assert len(result.lines) == 3
    assert all(line.startswith("  [") for line in result.lines)
    assert result.report().endswith(": classical\n")


def test_estimator_fixtures():
    lines = []
    assert estimator_fixtures_ok(lines)
    assert len(lines) == 3
