use rpc3bp_dynamics::Params;
use rpc3bp_manifolds::CurveOptions;
use rpc3bp_orbits::*;
use rpc3bp_separatrix::homoclinic_state;
use rpc3bp_splitting::{splitting_report, RootKind, SplittingConfig};

#[test]
fn separatrix_seed_leaves_for_good() {
    let p = Params::new(0.0, 2.2).unwrap();
    let h = homoclinic_state(0.8);
    let log = oscillation_demo(&p, (h.r_h, h.y_h), 200, 5.0, 2.0, 0.0, &DemoOptions::default()).unwrap();
    assert_eq!(log.summary.termination, Termination::Parabolic);
    assert_eq!(log.summary.oscillations, 0);
    assert_eq!(log.excursions.len(), 1);
    assert!(log.excursions[0].return_r.is_none());
    assert!(log.summary.max_energy_residual < 1e-8);
}

#[test]
fn oscillations_near_a_transversal_point() {
    let p = Params::new(0.3, 2.2).unwrap();
    let rep = splitting_report(&p, 0.0, &SplittingConfig::default()).unwrap();
    let root = rep.roots.iter().find(|r| r.kind == RootKind::Transversal).expect("transversal point");
    let amp = rep.max_distance;
    let o = DemoOptions::default();
    let curve = CurveOptions::default();
    let seeds: Vec<(f64, f64)> =
        [0.5, 0.1, 0.02].iter().map(|f| homoclinic_seed(&p, 0.0, root.v, -f * amp, &curve).unwrap()).collect();
    let logs: Vec<ExcursionLog> =
        oscillation_demo_batch(&p, &seeds, 200, 5.0, 2.0, 0.0, &o).into_iter().map(|l| l.unwrap()).collect();

    let main = &logs[0];
    assert!(main.summary.oscillations >= 3, "{:?}", main.summary);
    assert!(main.summary.max_energy_residual < 1e-8);
    assert!(main.iterates.iter().all(|it| it.r > 0.0 && it.energy_residual < 1e-8));

    // seeds closer to the invariant curve reach farther on their first excursion
    let first: Vec<f64> = logs.iter().map(|l| l.excursions[0].max_r).collect();
    assert!(first[0] < first[1] && first[1] < first[2], "{first:?}");

    let again = oscillation_demo(&p, seeds[0], 200, 5.0, 2.0, 0.0, &o).unwrap();
    assert_eq!(&again, main);
    assert_eq!(main.to_csv().lines().count(), main.iterations + 1);
    let v: serde_json::Value = serde_json::from_str(&main.summary_json()).unwrap();
    assert_eq!(v["summary"]["oscillations"].as_u64().unwrap() as usize, main.summary.oscillations);
}

#[test]
fn outward_offset_escapes() {
    let p = Params::new(0.3, 2.2).unwrap();
    let rep = splitting_report(&p, 0.0, &SplittingConfig::default()).unwrap();
    let root = &rep.roots[0];
    let seed = homoclinic_seed(&p, 0.0, root.v, 0.5 * rep.max_distance, &CurveOptions::default()).unwrap();
    let log = oscillation_demo(&p, seed, 200, 5.0, 2.0, 0.0, &DemoOptions::default()).unwrap();
    assert_eq!(log.summary.termination, Termination::Escaped);
    assert_eq!(log.summary.oscillations, 0);
}
