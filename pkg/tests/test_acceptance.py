"""The ten acceptance checks, one test per criterion, in index order.

Each test runs its criterion against the shared session assets, prints the
one-line verdict immediately, and registers it with the terminal-summary
hook so the full scoreboard is repeated at the end of the run.  The asserts
are strict: a criterion that misses its stated tolerance fails its test.

Checks 4 and 5 compare finite-time Lyapunov exponents under the per-unit-time
normalization ln(sqrt(sigma_max))/(N_t*dt).  Against the targets (rms < 0.04
at N_t=50; >= 90% of exponents within 10% at N_t=500) the trained emulators
here land roughly 5x outside, so those two tests are expected to be red; the
details dict carries the measured numbers.
"""

import json

import pytest

from chaosnn.acceptance import run_criteria
from conftest import record_criterion


def _run(index, assets):
    result = run_criteria([index], assets=assets)[0]
    line = result.line()
    print(line)
    record_criterion(line)
    return result


def _explain(result):
    return result.line() + "\n" + json.dumps(result.details, indent=2,
                                             default=str)


def test_01_reference_net_singular_values(assets):
    """Bundled 4-neuron net reproduces the reference singular values."""
    result = _run(1, assets)
    assert result.passed, _explain(result)


def test_02_reference_net_rotation_and_reflection(assets):
    """Bundled 2-neuron net decomposes into the reference rotation/reflection."""
    result = _run(2, assets)
    assert result.passed, _explain(result)


def test_03_attractor_reconstruction_4n40(assets):
    """A 4-neuron net trained on 40 pairs re-traces the butterfly attractor."""
    result = _run(3, assets)
    assert result.passed, _explain(result)


def test_04_short_horizon_ftle_match(assets):
    """Paired FTLE rms at N_t=50 under the per-unit-time normalization."""
    result = _run(4, assets)
    assert result.passed, _explain(result)


def test_05_long_horizon_ftle_collapse(assets):
    """At N_t=500 both exponent clouds should collapse onto the global value."""
    result = _run(5, assets)
    assert result.passed, _explain(result)


def test_06_extrapolation_from_unseen_region(assets):
    """Nets trained only on X > -5 stay on-attractor from an X < -5 start."""
    result = _run(6, assets)
    assert result.passed, _explain(result)


def test_07_two_neuron_henon(assets):
    """A 2-neuron net reproduces the horseshoe attractor to tight tolerance."""
    result = _run(7, assets)
    assert result.passed, _explain(result)


def test_08_bounds_table_and_cubic_error(assets):
    """Neuron-count bounds match hand values; cubic expansion error is small."""
    result = _run(8, assets)
    assert result.passed, _explain(result)


def test_09_exact_linearization_properties(assets):
    """Neuron-space maps compose, scale, and differentiate exactly."""
    result = _run(9, assets)
    assert result.passed, _explain(result)


def test_10_negative_control_relu_linear(assets):
    """relu/linear nets must fail reconstruction everywhere on the grid."""
    result = _run(10, assets)
    assert result.passed, _explain(result)
