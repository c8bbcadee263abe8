"""Integration tests for formdiv errata command."""

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


class TestFErrata:
    """Test suite for formdiv errata command."""

    def test_errata_for_selected_records(self):
        """Each corrected item is listed with its record."""
        result = run_formdiv(['errata', '--theorem', '22', '--theorem', 'Note 9'] + FAST)
        assert result.returncode == 0, f"errata failed: {result.stderr}"
        assert '8m+31' in result.stdout
        assert '68m+31' in result.stdout
        assert '11n+1' in result.stdout
        assert '2 erratum item(s)' in result.stdout

    def test_errata_json(self):
        """JSON errata are ordered by record id."""
        result = run_formdiv(['errata', '--theorem', 'Scholion 3', '--theorem', '51', '--theorem', '18',
                              '--format', 'json'] + FAST)
        assert result.returncode == 0
        errata = json.loads(result.stdout)['payload']['errata']
        assert [e['theorem_id'] for e in errata] == ['Th 18', 'Th 51', 'Scholion 3']
        assert errata[0]['printed'] == '44m+42'
        assert errata[0]['computed'] == '44m+43'
        assert errata[1]['field'] == 'primes'
        assert errata[2]['computed'] == '28mn±13(m-n)'

    def test_errata_empty(self):
        """A record printed correctly has no errata."""
        result = run_formdiv(['errata', '--theorem', '4'] + FAST)
        assert result.returncode == 0
        assert '0 erratum item(s)' in result.stdout
