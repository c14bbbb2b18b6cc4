import math

import pytest

import weakmeas as wm


def dark_port():
    return wm.make_postselection_pair(0.0)[1]


class TestOverlap:
    def test_identity(self):
        state = wm.make_preselection_phase(0.7)
        assert wm.overlap(state, state) == pytest.approx(1.0, abs=1e-15)

    def test_phase_pair_dark_overlap(self):
        theta = 2e-4
        pre = wm.make_preselection_phase(theta)
        ov = wm.overlap(pre, dark_port())
        expected = 0.5 * (complex(math.cos(theta), math.sin(theta)) - 1.0)
        assert ov == pytest.approx(expected, abs=1e-18)
        assert ov.imag == pytest.approx(theta / 2, rel=1e-6)

    def test_real_pair_dark_overlap(self):
        pre = wm.make_preselection_real(0.1)
        assert wm.overlap(pre, dark_port()) == pytest.approx(0.05, abs=1e-15)


class TestWeakValue:
    def test_eigenstate_gives_eigenvalue(self):
        up = wm.QubitState(0.0, 1.0)
        down = wm.QubitState(1.0, 0.0)
        assert wm.weak_value(up, up).value == pytest.approx(1.0, abs=1e-15)
        assert wm.weak_value(down, down).value == pytest.approx(-1.0, abs=1e-15)

    def test_phase_pair_is_cot_half_angle(self):
        # exact ratio for this pair: i * cot(theta/2), purely imaginary
        theta = 2e-4
        value = wm.weak_value(wm.make_preselection_phase(theta), dark_port()).value
        assert value.imag == pytest.approx(1.0 / math.tan(theta / 2), rel=1e-12)
        assert abs(value.real) < 1e-6 * abs(value.imag)

    def test_real_pair_value(self):
        delta = 0.1
        t = 0.5 * (delta + math.sqrt(4 - delta**2))
        r = t - delta
        value = wm.weak_value(wm.make_preselection_real(delta), dark_port()).value
        assert value.real == pytest.approx(-(t + r) / delta, rel=1e-13)
        assert abs(value.imag) < 1e-15
        assert value.real == pytest.approx(-19.974984355438179, rel=1e-12)

    @pytest.mark.parametrize("theta", [1e-3, 1e-4, 1e-5])
    def test_small_angle_law(self, theta):
        # Im(A_w) * theta -> 2 with relative error <= theta
        value = wm.weak_value(wm.make_preselection_phase(theta), dark_port()).value
        assert abs(value.imag * theta - 2.0) / 2.0 <= theta

    def test_global_phase_invariance(self):
        pre = wm.make_preselection_phase(3e-4)
        post = dark_port()
        base = wm.weak_value(pre, post).value
        phase = complex(math.cos(0.9), math.sin(0.9))
        pre_rot = wm.QubitState(pre.c0 * phase, pre.c1 * phase)
        post_rot = wm.QubitState(post.c0 * phase, post.c1 * phase)
        assert wm.weak_value(pre_rot, post).value == pytest.approx(base, rel=1e-12)
        assert wm.weak_value(pre, post_rot).value == pytest.approx(base, rel=1e-12)

    def test_orthogonal_postselection_raises(self):
        pre = wm.make_preselection_phase(0.0)
        with pytest.raises(wm.NearOrthogonalError):
            wm.weak_value(pre, dark_port())

    def test_threshold_configurable(self):
        pre = wm.make_preselection_phase(1e-9)
        post = dark_port()
        assert wm.weak_value(pre, post).value.imag == pytest.approx(2e9, rel=1e-5)
        with pytest.raises(wm.NearOrthogonalError):
            wm.weak_value(pre, post, min_overlap=1e-6)

    def test_overlap_field_matches(self):
        pre = wm.make_preselection_real(0.1)
        result = wm.weak_value(pre, dark_port())
        assert result.overlap == pytest.approx(wm.overlap(pre, dark_port()), abs=1e-18)
