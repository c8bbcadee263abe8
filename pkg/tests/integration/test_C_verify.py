"""Integration tests for formdiv verify command."""

import sys
import json
import subprocess
import pytest


FAST = ['--prime-bound', '5000', '--survey-bound', '3000', '--bound', '40', '--corollary-bound', '20']


def run_formdiv(args, cwd=None):
    """Run formdiv using sys.executable -m formdiv."""
    cmd = [sys.executable, '-m', 'formdiv'] + args
    result = subprocess.run(
        cmd,
        cwd=cwd,
        capture_output=True,
        text=True
    )
    return result


class TestCVerify:
    """Test suite for formdiv verify command."""

    def test_verify_clean_record(self):
        """Th 4 verifies as printed."""
        result = run_formdiv(['verify', '--theorem', '4'] + FAST)
        assert result.returncode == 0, f"verify failed: {result.stderr}"
        assert 'Th 4' in result.stdout
        assert 'verified: 1' in result.stdout

    def test_verify_with_errata(self):
        """Th 22 verifies once 8m+31 is read as 68m+31."""
        result = run_formdiv(['verify', '--theorem', '22'] + FAST)
        assert result.returncode == 0
        assert 'verified-with-errata' in result.stdout
        assert '8m+31 → 68m+31' in result.stdout

    def test_verify_as_printed_fails(self):
        """Without the catalog correction Th 22 fails and exits 1."""
        result = run_formdiv(['verify', '--theorem', '22', '--as-printed'] + FAST)
        assert result.returncode == 1
        assert 'failed: 1' in result.stdout
        assert 'Th 22 failed' in result.stderr

    def test_verify_several_records(self):
        """Records come back in catalog order whatever the selector order."""
        result = run_formdiv(['verify', '--theorem', 'Note 9', '--theorem', '10', '--format', 'json'] + FAST)
        assert result.returncode == 0
        payload = json.loads(result.stdout)['payload']
        ids = [r['theorem_id'] for r in payload['reports']]
        assert sorted(ids) == ['Note 9', 'Th 10']
        statuses = {r['theorem_id']: r['status'] for r in payload['reports']}
        assert statuses == {'Th 10': 'verified-with-errata', 'Note 9': 'verified-with-errata'}

    def test_verify_json_echoes_bounds(self):
        """The envelope records the bounds that were used."""
        result = run_formdiv(['verify', '--theorem', 'Scholion 3', '--format', 'json'] + FAST)
        assert result.returncode == 0
        report = json.loads(result.stdout)
        assert report['parameters']['bounds']['scan_bound'] == 40
        assert report['payload']['reports'][0]['bounds'] == {'scan_bound': 40}

    def test_verify_parallel(self):
        """--jobs does not change the result."""
        result = run_formdiv(['verify', '--theorem', '22', '--theorem', '4', '--jobs', '2'] + FAST)
        assert result.returncode == 0
        assert 'verified: 1' in result.stdout
        assert 'verified-with-errata: 1' in result.stdout

    def test_verify_unknown_record(self):
        """An id missing from the catalog is a usage error."""
        result = run_formdiv(['verify', '--theorem', '99'])
        assert result.returncode == 2
        assert 'UNKNOWN_RECORD' in result.stderr

    def test_verify_requires_target(self):
        """One of --theorem and --all is required."""
        result = run_formdiv(['verify'])
        assert result.returncode == 2

    def test_verify_rejects_bad_bound(self):
        """Bounds are validated before any work starts."""
        result = run_formdiv(['verify', '--theorem', '4', '--harvest-bound', '1'])
        assert result.returncode == 2
        assert 'invalid bound' in result.stderr

    def test_verify_exhausted_factor_ceiling(self):
        """A factor ceiling too low for the harvest names the flag to raise."""
        result = run_formdiv(['verify', '--theorem', 'Scholion 1', '--factor-ceiling', '3'])
        assert result.returncode == 2
        assert 'Scholion 1' in result.stderr
        assert 'raise --factor-ceiling' in result.stderr

    def test_verify_json_echoes_oracle_bounds(self):
        """--factor-ceiling and --representative-bound reach the run."""
        result = run_formdiv(['verify', '--theorem', '4', '--format', 'json',
                              '--factor-ceiling', '5000', '--representative-bound', '200000'] + FAST)
        assert result.returncode == 0
        bounds = json.loads(result.stdout)['parameters']['bounds']
        assert bounds['factor_ceiling'] == 5000
        assert bounds['representative_bound'] == 200000
