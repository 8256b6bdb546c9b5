"""
Full 101 x 101 sweep at the default parameters

Compares the one-mode and two-mode maps against the published minima
(0.61 pT and 0.15 pT at tau = 1 s). Takes a few minutes; deselect with
``-m "not slow"``.
"""

import numpy as np
import pytest

from nvreadout.commands.compare import REFERENCE_ONE_MODE_T, REFERENCE_TWO_MODE_T
from nvreadout.core.sensitivity import map_minimum, ratio_map, resonant_slice, sensitivity_map
from nvreadout.models.schemas import Channel

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def maps(default_config):
    pipeline = default_config.pipeline
    return {
        channel: sensitivity_map(
            pipeline.with_channel(channel),
            default_config.delta_cav_axis,
            default_config.delta_ex_axis,
            workers=2,
        )
        for channel in (Channel.ONE_MODE_T, Channel.TWO_MODE_S21)
    }


def test_both_designs_are_best_on_full_resonance(maps):
    for result in maps.values():
        minimum = map_minimum(result)
        assert (minimum.i, minimum.j) == (50, 50)


def test_minima_match_published_scale(maps):
    one = map_minimum(maps[Channel.ONE_MODE_T]).value
    two = map_minimum(maps[Channel.TWO_MODE_S21]).value
    assert REFERENCE_ONE_MODE_T / 3.0 < one < 3.0 * REFERENCE_ONE_MODE_T
    assert REFERENCE_TWO_MODE_T / 3.0 < two < 3.0 * REFERENCE_TWO_MODE_T
    assert two < one


def test_two_mode_advantage_grows_off_cavity_resonance(maps):
    ratio = ratio_map(maps[Channel.ONE_MODE_T], maps[Channel.TWO_MODE_S21])
    curve = resonant_slice(ratio)
    finite = curve.values[np.isfinite(curve.values)]
    assert curve.values[50] == pytest.approx(2.0, rel=0.25)
    assert finite.max() >= 4.0
