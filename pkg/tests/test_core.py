import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irsbeam.core import (
    TWO_PI,
    BeamConfig,
    Channel,
    DimensionMismatchError,
    Instance,
    PhaseAlphabet,
    alignment_bound,
    baseline_snr,
    combined_reflection,
    continuous_relaxation,
    snr,
    snr_boost,
    wrap_phase,
)
from irsbeam.sim import random_instance

from conftest import rect_boost

finite = st.floats(-50.0, 50.0, allow_nan=False)


def test_wrap_phase_is_half_open():
    assert wrap_phase(-1e-17) == 0.0
    assert wrap_phase(TWO_PI) == 0.0
    assert wrap_phase(-math.pi / 3) == pytest.approx(5 * math.pi / 3)
    out = wrap_phase(np.array([-1e-17, 7.0, -7.0]))
    assert np.all((out >= 0) & (out < TWO_PI))


def test_channel_rejects_bad_magnitude():
    with pytest.raises(ValueError):
        Channel(-0.1, 0.0)
    with pytest.raises(ValueError):
        Channel(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Channel(1.0, float("inf"))


@given(finite, finite)
def test_channel_round_trips_rectangular_form(re, im):
    ch = Channel.from_rect(re, im)
    assert ch.beta >= 0 and 0 <= ch.alpha < TWO_PI
    r2, i2 = ch.rect
    assert r2 == pytest.approx(re, abs=1e-12 * (1 + abs(re) + abs(im)))
    assert i2 == pytest.approx(im, abs=1e-12 * (1 + abs(re) + abs(im)))


def test_instance_requires_nonzero_background():
    with pytest.raises(ValueError):
        Instance(Channel(0.0, 0.0), (Channel(1.0, 0.0),))


def test_instance_json_round_trip(rng):
    inst = random_instance(rng, 7)
    again = Instance.from_json(inst.to_json())
    assert again == inst
    data = inst.to_dict()
    assert set(data) == {"h0", "reflected"}
    assert set(data["h0"]) == {"beta", "alpha"}


def test_instance_json_malformed():
    with pytest.raises(ValueError):
        Instance.from_dict({"h0": {"beta": 1.0}, "reflected": []})


def test_alphabet():
    for K in (2, 3, 4, 7, 64):
        a = PhaseAlphabet(K)
        assert a.omega * K == pytest.approx(TWO_PI, rel=1e-15)
        assert list(a.indices) == list(range(1, K + 1))
    with pytest.raises(ValueError):
        PhaseAlphabet(1)


def test_beam_indices_are_integers_in_range():
    a = PhaseAlphabet(4)
    beam = BeamConfig(np.array([1, 4, 2]), a)
    assert beam.k == (1, 4, 2) and all(type(k) is int for k in beam.k)
    assert np.all(np.abs(beam.phases - np.array(beam.k) * TWO_PI / 4) <= np.finfo(float).eps * TWO_PI)
    with pytest.raises(ValueError):
        BeamConfig((0, 1), a)
    with pytest.raises(ValueError):
        BeamConfig((5,), a)
    assert BeamConfig((1, 2), a) == BeamConfig([1, 2], a)


def test_boost_empty_surface_is_one():
    assert snr_boost(Instance(Channel(0.7, 1.0)), BeamConfig((), PhaseAlphabet(2))) == 1.0


def test_boost_aligned_single_channel():
    inst = Instance(Channel(1.0, 0.0), (Channel(0.5, 0.0),))
    assert snr_boost(inst, BeamConfig((2,))) == pytest.approx(2.25, rel=1e-15)


def test_boost_matches_rectangular_evaluator():
    inst = Instance(Channel(1.0, 0.0), (Channel(0.5, math.pi / 3), Channel(0.3, 5 * math.pi / 4)))
    beam = BeamConfig((3, 1), PhaseAlphabet(4))
    a = snr_boost(inst, beam)
    b = rect_boost(inst, beam.phases)
    assert a == pytest.approx(b, rel=1e-12)
    # frozen: 1 + 0.5 e^{j(pi/3 + 3pi/2)} + 0.3 e^{j(5pi/4 + pi/2)}
    z = 1 + 0.5 * np.exp(1j * (math.pi / 3 + 1.5 * math.pi)) + 0.3 * np.exp(1j * (1.25 * math.pi + 0.5 * math.pi))
    assert a == pytest.approx(abs(z) ** 2, rel=1e-12)


def test_boost_dimension_mismatch():
    inst = Instance(Channel(1.0, 0.0), (Channel(0.5, 0.0),))
    with pytest.raises(DimensionMismatchError):
        snr_boost(inst, BeamConfig((1, 2)))


def test_snr_baseline_and_dbm_conversion():
    inst = Instance(Channel(1.0, 0.0))
    beam = BeamConfig(())
    assert snr(inst, beam, 0.0, 0.0) == pytest.approx(1.0)
    inst = Instance(Channel(1e-6, 0.3))
    assert snr(inst, beam, 30.0, -90.0) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        snr(inst, beam, float("inf"), -90.0)


def test_snr_factorizes(rng):
    inst = random_instance(rng, 6)
    beam = BeamConfig(rng.integers(1, 5, 6), PhaseAlphabet(4))
    assert snr(inst, beam, 30.0, -90.0) == pytest.approx(snr_boost(inst, beam) * baseline_snr(inst, 30.0, -90.0), rel=1e-14)


def test_continuous_relaxation_examples():
    inst = Instance(Channel(1.0, 0.4), (Channel(0.2, 0.4), Channel(0.9, 0.4)))
    assert np.allclose(continuous_relaxation(inst), 0.0)
    inst = Instance(Channel(1.0, 0.0), (Channel(0.5, math.pi / 3),))
    assert continuous_relaxation(inst)[0] == pytest.approx(5 * math.pi / 3)


def test_continuous_relaxation_reaches_alignment_bound(rng):
    for _ in range(20):
        inst = random_instance(rng, int(rng.integers(1, 30)))
        theta = continuous_relaxation(inst)
        assert rect_boost(inst, theta) == pytest.approx(alignment_bound(inst), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(2, 8))
def test_boost_never_exceeds_alignment_bound(seed, n, K):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n)
    beam = BeamConfig(rng.integers(1, K + 1, n), PhaseAlphabet(K))
    assert snr_boost(inst, beam) <= alignment_bound(inst) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.integers(2, 8), st.integers(0, 7))
def test_global_index_shift_only_rotates_reflection(seed, n, K, c):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, n)
    a = PhaseAlphabet(K)
    k = rng.integers(1, K + 1, n)
    shifted = (k - 1 + c) % K + 1
    r1 = combined_reflection(inst, BeamConfig(k, a))
    r2 = combined_reflection(inst, BeamConfig(shifted, a))
    assert abs(r2) == pytest.approx(abs(r1), rel=1e-10, abs=1e-14)
