use proptest::prelude::*;
use rpc3bp_dynamics::{hamiltonian_rotating, Params, RotatingState};
use rpc3bp_manifolds::*;
use rpc3bp_numerics::Precision;
use rpc3bp_separatrix::homoclinic_state;

fn opts() -> CurveOptions {
    CurveOptions::default()
}

#[test]
fn unperturbed_curves_are_the_separatrix() {
    let p = Params::new(0.0, 2.4).unwrap();
    let vs = [0.5, 1.0, 1.5];
    for branch in [Branch::Stable, Branch::Unstable] {
        let c = compute_invariant_curve_with(branch, 0.0, &vs, &p, &opts()).unwrap();
        for s in &c.samples {
            assert!((s.y - homoclinic_state(s.v).y_h).abs() < 1e-10, "{branch} v={} dy={}", s.v, s.y - homoclinic_state(s.v).y_h);
        }
    }
}

#[test]
fn radius_doubling_is_invisible() {
    let p = Params::new(0.3, 2.4).unwrap();
    let vs = [0.6, 1.0, 1.4];
    let far = CurveOptions { r0: 100.0, ..opts() };
    for branch in [Branch::Stable, Branch::Unstable] {
        let a = compute_invariant_curve_with(branch, 0.0, &vs, &p, &opts()).unwrap();
        let b = compute_invariant_curve_with(branch, 0.0, &vs, &p, &far).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.y - y.y).abs() < 1e-9, "{branch} v={} change {}", x.v, (x.y - y.y).abs());
        }
    }
}

#[test]
fn tolerance_refinement_is_invisible() {
    let p = Params::new(0.3, 2.4).unwrap();
    let vs = [0.7, 1.2];
    let fine = CurveOptions { tol: 1e-14, ..opts() };
    let a = compute_invariant_curve_with(Branch::Unstable, 0.0, &vs, &p, &opts()).unwrap();
    let b = compute_invariant_curve_with(Branch::Unstable, 0.0, &vs, &p, &fine).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.y - y.y).abs() < 1e-10, "v={} change {}", x.v, (x.y - y.y).abs());
    }
}

#[test]
fn reflection_matches_direct_stable_curve() {
    let p = Params::new(0.3, 2.4).unwrap();
    let vs = [0.5, 0.9, 1.3];
    let direct = compute_invariant_curve_with(Branch::Stable, 0.0, &vs, &p, &opts()).unwrap();
    let mirror = stable_by_reflection(0.0, &vs, &p, &opts()).unwrap();
    for (a, b) in direct.samples.iter().zip(&mirror.samples) {
        assert!((a.y - b.y).abs() < 1e-12, "v={} {} vs {}", a.v, a.y, b.y);
    }
}

#[test]
fn samples_stay_on_the_energy_shell() {
    let p = Params::new(0.3, 2.4).unwrap();
    let c = compute_invariant_curve(Branch::Unstable, 0.0, (0.4, 1.6), &p, 1e-13, 9).unwrap();
    for s in &c.samples {
        assert!(s.energy_residual < 1e-9, "v={} residual {}", s.v, s.energy_residual);
        let h = hamiltonian_rotating(&RotatingState::new(s.r, 0.0, s.y, s.g), &p).unwrap();
        assert!((h - p.energy_level()).abs() < 1e-9);
    }
    let csv = c.to_csv();
    assert!(csv.starts_with("v,r,Y,branch,phi0,mu,g0,tol\n"));
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn unstable_curve_differs_from_stable_at_positive_mass() {
    let p = Params::new(0.3, 2.4).unwrap();
    let vs = [0.65, 0.9];
    let s = compute_invariant_curve_with(Branch::Stable, 0.0, &vs, &p, &opts()).unwrap();
    let u = compute_invariant_curve_with(Branch::Unstable, 0.0, &vs, &p, &opts()).unwrap();
    let gap = s.samples.iter().zip(&u.samples).map(|(a, b)| (a.y - b.y).abs()).fold(0.0, f64::max);
    assert!(gap > 1e-5, "gap {gap}");
}

#[test]
fn return_map_preserves_area() {
    let p = Params::new(0.3, 2.4).unwrap();
    let h = 1e-6;
    for &(r, y) in &[(1.0, 0.2), (1.6, -0.3), (2.2, 0.4), (0.9, -0.1)] {
        let f = |r: f64, y: f64| poincare_map((r, y), 0.0, &p, 1e-20, Precision::Extended).unwrap();
        let (rp, yp) = (f(r + h, y), f(r - h, y));
        let (rq, yq) = (f(r, y + h), f(r, y - h));
        let a = (rp.0 - yp.0) / (2.0 * h);
        let c = (rp.1 - yp.1) / (2.0 * h);
        let b = (rq.0 - yq.0) / (2.0 * h);
        let d = (rq.1 - yq.1) / (2.0 * h);
        let det = a * d - b * c;
        assert!((det - 1.0).abs() < 1e-8, "({r}, {y}): det = {det}");
    }
}

#[test]
fn bad_inputs_are_rejected() {
    let p = Params::new(0.3, 2.4).unwrap();
    assert!(sample_manifold(Branch::Unstable, 0.0, 0.0, &p, &opts()).is_err());
    assert!(sample_manifold(Branch::Unstable, 0.0, 1.0, &p, &CurveOptions { r0: 10.0, ..opts() }).is_err());
    assert!(compute_invariant_curve(Branch::Stable, 0.0, (1.0, 0.5), &p, 1e-13, 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn lift_lands_on_shell(r in 0.7f64..5.0, y in -0.8f64..0.8, phi0 in -3.0f64..3.0) {
        let p = Params::new(0.3, 2.4).unwrap();
        let g = lift_to_shell(r, y, phi0, &p).unwrap();
        let h = hamiltonian_rotating(&RotatingState::new(r, phi0, y, g), &p).unwrap();
        prop_assert!((h - p.energy_level()).abs() < 1e-12);
    }
}
