mod common;

use common::*;
use proptest::prelude::*;
use qcmm::kinematics::{finite_difference_rates, FiniteDifferenceOnly};
use qcmm::ppt::{d7_branch_eigenvalues, d7_pt_branch_eigenvalues};
use qcmm::{
    bew_d7, classify_phc, compose_d7, coordinate_derivatives, coords_from_d7,
    invariance_residual, pt_coords, quad_distances, quadrispeed_sq, region_of, sample_kinematics,
    speed, velocity, BewMode, BewModel, BewSpec, Branch, D7Params, DiffOptions, Error,
    ParametricD7Model, Region,
};

#[test]
fn quadridistances_factor_through_branch_eigenvalues() {
    let mut rng = rng(21);
    for _ in 0..1000 {
        let d = random_valid_d7(&mut rng, 1.0);
        let q = quad_distances(&coords_from_d7(&d));
        let e = d7_branch_eigenvalues(&d);
        let et = d7_pt_branch_eigenvalues(&d);
        assert!((q.s1_sq - 4.0 * e.branch1[0] * e.branch1[1]).abs() < 1e-12);
        assert!((q.s2_sq - 4.0 * e.branch2[0] * e.branch2[1]).abs() < 1e-12);
        assert!((q.s1t_sq - 4.0 * et.branch1[0] * et.branch1[1]).abs() < 1e-12);
        assert!((q.s2t_sq - 4.0 * et.branch2[0] * et.branch2[1]).abs() < 1e-12);
        assert!(q.s1_sq >= -1e-12 && q.s2_sq >= -1e-12);
        for v in q.as_array() {
            assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        }
        assert!(invariance_residual(&q) <= 1e-12);
    }
}

#[test]
fn geometric_and_spectral_tests_agree() {
    let mut rng = rng(22);
    for _ in 0..1000 {
        let d = random_valid_d7(&mut rng, 1.0);
        let geometric = region_of(&quad_distances(&coords_from_d7(&d)), 1e-9).label;
        let spectral = classify_phc(&compose_d7(&d).unwrap(), 1e-9).unwrap().label;
        assert_eq!(
            geometric == Region::EntangledLike,
            spectral == Region::EntangledLike,
            "disagreement at {d:?}"
        );
    }
}

#[test]
fn werner_pt_coordinates() {
    for x in [0.0, 0.4, 1.0] {
        let c = pt_coords(&coords_from_d7(&bew_d7(x).unwrap()));
        assert_eq!(c.branch1(), [(1.0 + x) / 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.branch2(), [(1.0 - x) / 2.0, 0.0, -x, 0.0]);
    }
}

proptest! {
    #[test]
    fn sum_invariance_is_algebraic(a in prop::array::uniform7(-1.0f64..=1.0)) {
        let q = quad_distances(&coords_from_d7(&D7Params::from_array(a)));
        prop_assert!(invariance_residual(&q) <= 1e-12);
    }

    #[test]
    fn time_coordinates_sum_to_one(mzz in -1.0f64..=1.0) {
        let c = coords_from_d7(&D7Params { mzz, ..Default::default() });
        prop_assert_eq!(c.t_minus + c.t_plus, 1.0);
        prop_assert!((0.0..=1.0).contains(&c.t_minus) && (0.0..=1.0).contains(&c.t_plus));
    }

    #[test]
    fn pt_coords_twice_is_identity(a in prop::array::uniform7(-1.0f64..=1.0)) {
        let c = coords_from_d7(&D7Params::from_array(a));
        prop_assert_eq!(pt_coords(&pt_coords(&c)), c);
    }
}

fn x_model() -> BewModel {
    BewModel::new(BewSpec::parameter_x())
}

fn decay_model(gamma: f64) -> BewModel {
    BewModel::new(BewSpec::new(BewMode::Decay, gamma).unwrap())
}

#[test]
fn werner_coordinate_rates() {
    let fd = FiniteDifferenceOnly(x_model());
    for x in [0.0, 0.2, 0.5, 0.9, 1.0] {
        let r = coordinate_derivatives(&fd, x, &DiffOptions::default()).unwrap();
        assert!((r.t_minus - 0.5).abs() < 1e-8);
        assert!((r.v_plus + 1.0).abs() < 1e-8);
        for v in [r.u_minus, r.u_plus, r.w_minus, r.w_plus, r.v_minus] {
            assert!(v.abs() < 1e-8);
        }
        let exact = coordinate_derivatives(&x_model(), x, &DiffOptions::default()).unwrap();
        assert!(r.max_abs_diff(&exact) < 1e-8);
    }

    let r = coordinate_derivatives(
        &FiniteDifferenceOnly(decay_model(1.0)),
        0.5,
        &DiffOptions::default(),
    )
    .unwrap();
    assert!((r.t_plus - (-0.5f64).exp() / 2.0).abs() < 1e-8);
}

#[test]
fn werner_velocities_and_quadrispeeds() {
    let opts = DiffOptions::default();
    let fd = FiniteDifferenceOnly(x_model());
    let v1t = velocity(&fd, 0.5, Branch::One, true, &opts).unwrap();
    let v2t = velocity(&fd, 0.5, Branch::Two, true, &opts).unwrap();
    let v1 = velocity(&fd, 0.5, Branch::One, false, &opts).unwrap();
    assert!(v1t.iter().all(|c| c.abs() < 1e-9));
    // dv₊/dx = −1 over dt₊/dx = −1/2
    assert!(v2t[0].abs() < 1e-9 && (v2t[1] - 2.0).abs() < 1e-8 && v2t[2].abs() < 1e-9);
    assert!(v1[0].abs() < 1e-9 && (v1[1] + 2.0).abs() < 1e-8 && v1[2].abs() < 1e-9);

    assert!(speed(&fd, 0.5, Branch::One, true, &opts).unwrap().abs() < 1e-9);
    assert!((speed(&fd, 0.5, Branch::Two, true, &opts).unwrap() - 2.0).abs() < 1e-8);
    assert!((quadrispeed_sq(&fd, 0.5, Branch::One, true, &opts).unwrap() - 1.0).abs() < 1e-8);
    assert!((quadrispeed_sq(&fd, 0.5, Branch::Two, true, &opts).unwrap() + 3.0).abs() < 1e-7);
}

#[test]
fn decay_quadrispeeds_do_not_depend_on_time() {
    let opts = DiffOptions::default();
    let m = FiniteDifferenceOnly(decay_model(1.0));
    for t in [0.1, 0.7, 1.5, 3.0, 6.0] {
        assert!((quadrispeed_sq(&m, t, Branch::One, true, &opts).unwrap() - 1.0).abs() < 1e-6);
        assert!((quadrispeed_sq(&m, t, Branch::Two, true, &opts).unwrap() + 3.0).abs() < 1e-6);
    }
}

#[test]
fn sample_at_half_mixing() {
    let s = sample_kinematics(&x_model(), 0.5, &DiffOptions::default()).unwrap();
    let speeds = s.speeds().map(Option::unwrap);
    let expected = [2.0, 0.0, 0.0, 2.0];
    for (a, b) in speeds.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
    for m in s.motions().into_iter().flatten() {
        assert_eq!(m.qspeed_sq, 1.0 - m.speed * m.speed);
    }

    let s = sample_kinematics(&FiniteDifferenceOnly(x_model()), 0.0, &DiffOptions::default())
        .unwrap();
    assert!(s.motions().iter().all(|m| m.unwrap().speed.is_finite()));
}

#[test]
fn speeds_survive_reparametrization() {
    let opts = DiffOptions::default();
    let by_x = FiniteDifferenceOnly(x_model());
    for gamma in [0.5, 1.0, 2.0] {
        let by_t = FiniteDifferenceOnly(decay_model(gamma));
        for t in [0.3, 1.0, 2.0] {
            let x = (-gamma * t).exp();
            let a = sample_kinematics(&by_t, t, &opts).unwrap();
            let b = sample_kinematics(&by_x, x, &opts).unwrap();
            for (ma, mb) in a.motions().iter().zip(b.motions()) {
                let (ma, mb) = (ma.unwrap(), mb.unwrap());
                assert!((ma.speed - mb.speed).abs() < 1e-6);
                for k in 0..3 {
                    assert!((ma.velocity[k] - mb.velocity[k]).abs() < 1e-6);
                }
            }
        }
    }
}

/// A nonlinear curve with a closed-form derivative.
struct Wobble;

impl ParametricD7Model for Wobble {
    fn domain(&self) -> (f64, f64) {
        (0.0, 2.0)
    }
    fn d7(&self, t: f64) -> qcmm::Result<D7Params> {
        Ok(D7Params::from_array([
            0.2 * t.sin(),
            0.1 * (2.0 * t).cos(),
            0.3 * t * t - 0.2,
            -0.25 * (0.7 * t).sin(),
            0.1 * t.exp() / 8.0,
            0.05 * t,
            0.4 * (1.3 * t).sin() - 0.1,
        ]))
    }
    fn d7_derivative(&self, t: f64) -> Option<D7Params> {
        Some(D7Params::from_array([
            0.2 * t.cos(),
            -0.2 * (2.0 * t).sin(),
            0.6 * t,
            -0.175 * (0.7 * t).cos(),
            0.1 * t.exp() / 8.0,
            0.05,
            0.52 * (1.3 * t).cos(),
        ]))
    }
}

#[test]
fn finite_differences_converge_quadratically() {
    let theta = 0.8;
    let exact = coordinate_derivatives(&Wobble, theta, &DiffOptions::default()).unwrap();
    let exact_v = qcmm::kinematics::velocity_from_rates(&exact, theta, Branch::Two, true, 1e-12)
        .unwrap();
    let err = |h: f64| {
        let r = finite_difference_rates(&Wobble, theta, h).unwrap();
        let v = qcmm::kinematics::velocity_from_rates(&r, theta, Branch::Two, true, 1e-12).unwrap();
        (0..3).map(|k| (v[k] - exact_v[k]).abs()).fold(0.0, f64::max)
    };
    let mut h = 0.08;
    for _ in 0..4 {
        let ratio = err(h) / err(h / 2.0);
        assert!(ratio >= 3.5, "h={h}: ratio {ratio}");
        h /= 2.0;
    }
}

#[test]
fn stationary_clock_is_typed() {
    let m = qcmm::models::ConstantModel { params: D7Params::default(), domain: (0.0, 1.0) };
    let opts = DiffOptions::default();
    for branch in [Branch::One, Branch::Two] {
        for transposed in [false, true] {
            assert!(matches!(
                speed(&m, 0.5, branch, transposed, &opts),
                Err(Error::DegenerateClock { .. })
            ));
        }
    }
}

#[test]
fn stationary_clock_with_moving_space() {
    // Only Mxx moves: t± are constant, so every velocity is undefined.
    struct MovingX;
    impl ParametricD7Model for MovingX {
        fn domain(&self) -> (f64, f64) {
            (0.0, 0.5)
        }
        fn d7(&self, t: f64) -> qcmm::Result<D7Params> {
            Ok(D7Params { mxx: t, ..Default::default() })
        }
    }
    let s = sample_kinematics(&MovingX, 0.25, &DiffOptions::default()).unwrap();
    assert!(s.motions().iter().all(Option::is_none));

    // Only Mzz moves: clocks run, space is still, so every speed is zero.
    struct MovingZ;
    impl ParametricD7Model for MovingZ {
        fn domain(&self) -> (f64, f64) {
            (0.0, 0.5)
        }
        fn d7(&self, t: f64) -> qcmm::Result<D7Params> {
            Ok(D7Params { mzz: t, ..Default::default() })
        }
    }
    let s = sample_kinematics(&MovingZ, 0.25, &DiffOptions::default()).unwrap();
    for m in s.motions() {
        let m = m.unwrap();
        assert!(m.speed < 1e-12);
        assert_eq!(m.qspeed_sq, 1.0 - m.speed * m.speed);
    }
}
