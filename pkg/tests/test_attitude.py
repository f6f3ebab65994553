import math

import numpy as np
import pytest

from oracles import integrate_tilt
from rovloc.attitude import (
    GRAVITY,
    AttitudeEkf,
    EkfConfig,
    MeasurementRejected,
    NumericalDivergence,
    PlanarFix,
    fuse_asv_pose,
)
from rovloc.geometry import rot_x, rot_y, rot_z


def gravity_reading(roll, pitch):
    sr, cr = math.sin(roll), math.cos(roll)
    sp, cp = math.sin(pitch), math.cos(pitch)
    return GRAVITY * np.array([-sp, sr * cp, cr * cp])


def test_predict_matches_fine_integration():
    # Frozen reference: the same kinematics integrated at dt/1000.
    ekf = AttitudeEkf(EkfConfig(), roll=0.2, pitch=0.1)
    ekf.predict(np.array([0.05, -0.02, 0.03]), 0.01)
    assert math.isclose(ekf.roll, 0.20052547419266933, abs_tol=1e-6)
    assert math.isclose(ekf.pitch, 0.09974431915168157, abs_tol=1e-6)


def test_predict_zero_rate_keeps_state():
    ekf = AttitudeEkf(EkfConfig(), roll=0.1, pitch=-0.05)
    ekf.predict(np.zeros(3), 0.5)
    assert ekf.roll == 0.1 and ekf.pitch == -0.05


def test_predict_grows_covariance():
    ekf = AttitudeEkf(EkfConfig())
    before = np.trace(ekf.cov)
    ekf.predict(np.array([0.1, 0.05, -0.02]), 0.05)
    assert np.trace(ekf.cov) > before


def test_long_interval_substepping_matches_chained_predicts():
    cfg = EkfConfig(max_dt=0.1)
    w = np.array([0.3, -0.1, 0.2])
    a = AttitudeEkf(cfg, roll=0.05, pitch=0.02)
    a.predict(w, 0.5)
    b = AttitudeEkf(cfg, roll=0.05, pitch=0.02)
    for _ in range(5):
        b.predict(w, 0.1)
    assert a.roll == b.roll and a.pitch == b.pitch
    np.testing.assert_array_equal(a.cov, b.cov)


def test_negative_dt_rejected():
    ekf = AttitudeEkf(EkfConfig())
    with pytest.raises(ValueError):
        ekf.predict(np.zeros(3), -0.01)


def test_update_with_consistent_gravity_is_noop():
    ekf = AttitudeEkf(EkfConfig(), roll=0.3, pitch=-0.2)
    ekf.update(gravity_reading(0.3, -0.2))
    assert math.isclose(ekf.roll, 0.3, abs_tol=1e-12)
    assert math.isclose(ekf.pitch, -0.2, abs_tol=1e-12)


def test_update_pulls_toward_gravity():
    ekf = AttitudeEkf(EkfConfig())
    truth = (math.radians(10.0), math.radians(-5.0))
    for step in range(100):
        ekf.predict(np.zeros(3), 0.01)
        ekf.update(gravity_reading(*truth))
        if step == 49:
            assert abs(ekf.roll - truth[0]) < math.radians(0.1)
            assert abs(ekf.pitch - truth[1]) < math.radians(0.1)
    assert abs(ekf.roll - truth[0]) < math.radians(0.01)
    assert abs(ekf.pitch - truth[1]) < math.radians(0.01)


def test_flipped_accel_convention_is_equivalent():
    # A sensor reporting the gravity vector instead of the reaction to
    # it works identically once the config says so.
    plus = AttitudeEkf(EkfConfig(), roll=0.02, pitch=-0.01)
    minus = AttitudeEkf(EkfConfig(accel_sign=-1), roll=0.02, pitch=-0.01)
    truth = (math.radians(6.0), math.radians(3.0))
    for _ in range(50):
        reading = gravity_reading(*truth)
        plus.update(reading)
        minus.update(-reading)
    np.testing.assert_allclose(plus.state, minus.state, atol=1e-15)
    np.testing.assert_allclose(plus.cov, minus.cov, atol=1e-15)


def test_update_never_inflates_covariance_diagonal():
    ekf = AttitudeEkf(EkfConfig(), roll=0.2, pitch=0.1)
    rng = np.random.default_rng(5)
    for _ in range(300):
        ekf.predict(rng.normal(scale=0.2, size=3), 0.01)
        before = np.diag(ekf.cov).copy()
        try:
            ekf.update(gravity_reading(ekf.roll + rng.normal(scale=0.05),
                                       ekf.pitch + rng.normal(scale=0.05)))
        except MeasurementRejected:
            continue
        after = np.diag(ekf.cov)
        assert np.all(after <= before + 1e-15)


def test_covariance_stays_symmetric_positive_definite():
    ekf = AttitudeEkf(EkfConfig())
    rng = np.random.default_rng(17)
    for step in range(10000):
        # Bounded random wiggle so pitch never walks near the pole.
        ekf.state *= 0.999
        ekf.predict(rng.normal(scale=0.3, size=3), 0.005)
        if step % 3 == 0:
            try:
                ekf.update(gravity_reading(ekf.roll + rng.normal(scale=0.02),
                                           ekf.pitch + rng.normal(scale=0.02)))
            except MeasurementRejected:
                pass
        assert np.allclose(ekf.cov, ekf.cov.T, atol=1e-14)
        assert np.all(np.linalg.eigvalsh(ekf.cov) > 0.0)


def test_accel_gate_rejects_and_preserves_state():
    ekf = AttitudeEkf(EkfConfig(accel_gate=0.3), roll=0.1, pitch=0.05)
    state = ekf.state.copy()
    with pytest.raises(MeasurementRejected):
        ekf.update(np.array([0.0, 0.0, 2.0 * GRAVITY]))
    with pytest.raises(MeasurementRejected):
        ekf.update(np.array([0.0, 0.0, 0.1 * GRAVITY]))
    np.testing.assert_array_equal(ekf.state, state)


def test_pitch_singularity_raises():
    ekf = AttitudeEkf(EkfConfig())
    with pytest.raises(NumericalDivergence):
        # Pure pitch rate, integrated straight toward +90 deg.
        for _ in range(200):
            ekf.predict(np.array([0.0, 1.0, 0.0]), 0.01)


def test_config_requires_positive_noise():
    with pytest.raises(ValueError):
        EkfConfig(gyro_noise_density=0.0)
    with pytest.raises(ValueError):
        EkfConfig(accel_noise=-1.0)
    with pytest.raises(ValueError):
        EkfConfig(max_dt=0.0)


def test_tracks_rocking_against_fine_integration():
    amp_r, amp_p = math.radians(8.0), math.radians(6.0)
    period, rate, dur = 6.0, 100.0, 20.0
    w = 2.0 * math.pi / period

    def tilt(t):
        return amp_r * math.sin(w * t), amp_p * math.sin(w * t + math.pi / 2)

    def body_rates(t):
        roll, pitch = tilt(t)
        rd = amp_r * w * math.cos(w * t)
        pd = amp_p * w * math.cos(w * t + math.pi / 2)
        return np.array([rd, pd * math.cos(roll), -pd * math.sin(roll)])

    times = np.arange(int(dur * rate) + 1) / rate
    gyros = np.array([body_rates(t) for t in times])
    r0, p0 = tilt(0.0)
    ref = integrate_tilt(times, gyros, r0, p0, substeps=50)

    ekf = AttitudeEkf(EkfConfig(), roll=r0, pitch=p0)
    est = [(ekf.roll, ekf.pitch)]
    for i in range(1, len(times)):
        ekf.predict(gyros[i - 1], times[i] - times[i - 1])
        ekf.update(gravity_reading(*tilt(times[i])))
        est.append((ekf.roll, ekf.pitch))
    rms = np.sqrt(np.mean((np.array(est) - ref) ** 2, axis=0))
    assert np.all(rms < math.radians(0.5))


def test_fuse_asv_pose_combines_sources():
    ekf = AttitudeEkf(EkfConfig(), roll=0.1, pitch=-0.05)
    pose = fuse_asv_pose(PlanarFix(x=3.0, y=-1.0, yaw=0.7), -0.2, ekf)
    np.testing.assert_allclose(pose.trans, [3.0, -1.0, -0.2])
    np.testing.assert_allclose(
        pose.rot, rot_z(0.7) @ rot_y(-0.05) @ rot_x(0.1), atol=1e-15
    )
