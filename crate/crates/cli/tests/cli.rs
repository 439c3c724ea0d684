use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("toolkit-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn toolkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toolkit")).args(args).output().expect("binary runs")
}

fn run(stage: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![stage, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    toolkit(&args)
}

fn write_config(dir: &Path, json: &str) -> String {
    let p = dir.join("cfg.json");
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data rows of a provenance-stamped CSV, header first.
fn table(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let prov = lines.next().unwrap();
    assert!(prov.starts_with("# toolkit ") && prov.contains("config_sha256=") && prov.contains("precision="), "{prov}");
    lines.map(str::to_string).collect()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn homoclinic_table_has_turning_point_and_is_reproducible() {
    let d = scratch("homoclinic");
    let (a, b) = (d.join("a"), d.join("b"));
    assert_eq!(code(&run("homoclinic", &a, &[])), 0);
    assert_eq!(code(&run("homoclinic", &b, &[])), 0);
    let rows = table(&a.join("homoclinic.csv"));
    assert_eq!(rows[0], "v,tau,r_h,y_h,alpha_h");
    assert_eq!(rows.len(), 122);
    assert!(rows.contains(&"0,0,0.5,0,0".to_string()));
    for f in ["homoclinic.csv", "separatrix_projection.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_eq!(table(&a.join("separatrix_projection.csv"))[0], "r,y");
}

#[test]
fn grid_size_sets_row_count() {
    let d = scratch("grid");
    let cfg = write_config(&d, r#"{"homoclinic_grid": {"n": 7, "v_min": -1.5, "v_max": 1.5}}"#);
    assert_eq!(code(&run("homoclinic", &d.join("o"), &["--config", &cfg])), 0);
    assert_eq!(table(&d.join("o/homoclinic.csv")).len(), 8);
}

#[test]
fn melnikov_methods_agree_at_moderate_g0() {
    let d = scratch("melnikov");
    let o = run("melnikov", &d, &["--mu", "0.3", "--g0", "1.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = table(&d.join("melnikov_comparison.csv"));
    let header: Vec<&str> = rows[0].split(',').collect();
    let col = header.iter().position(|h| h.starts_with("agreement_")).unwrap();
    assert_eq!(rows.len(), 6);
    for r in &rows[1..] {
        let agreement: f64 = r.split(',').nth(col).unwrap().parse().unwrap();
        assert!(agreement < 1e-6, "{r}");
    }
    for m in ["contour", "quadrature"] {
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join(format!("melnikov_{m}.json"))).unwrap()).unwrap();
        assert_eq!(v["result"]["method"], m);
        assert_eq!(v["provenance"]["precision"], "double");
    }
}

#[test]
fn melnikov_zero_mass_is_all_zero() {
    let d = scratch("melnikov0");
    assert_eq!(code(&run("melnikov", &d, &["--mu", "0"])), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("melnikov_contour.json")).unwrap()).unwrap();
    let cs = v["result"]["coefficients"].as_array().unwrap();
    assert!(!cs.is_empty());
    assert!(cs.iter().all(|c| c["value"].as_f64() == Some(0.0)));
}

#[test]
fn asymptotic_method_refuses_higher_harmonics() {
    let d = scratch("asym");
    let cfg = write_config(&d, r#"{"methods": ["asymptotic"], "lmax": 3}"#);
    let o = run("melnikov", &d.join("o"), &["--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("l = 1, 2"));
    let cfg = write_config(&d, r#"{"methods": ["asymptotic", "contour"], "lmax": 2}"#);
    assert_eq!(code(&run("melnikov", &d.join("p"), &["--config", &cfg])), 0);
}

#[test]
fn validation_failures_exit_two() {
    let d = scratch("invalid");
    assert_eq!(code(&run("splitting", &d, &["--mu", "0.7"])), 2);
    assert_eq!(code(&run("splitting", &d, &["--tol", "1e-3"])), 2);
    assert_eq!(code(&run("splitting", &d, &["--precision", "quad"])), 2);
    let cfg = write_config(&d, r#"{"mu_grid": [0.1, 0.2], "g0_grid": [], "r0": 10}"#);
    assert_eq!(code(&run("sweep", &d, &["--config", &cfg])), 2);
    let big: Vec<String> = (0..101).map(|i| format!("{}", 0.001 * i as f64)).collect();
    let cfg = write_config(&d, &format!(r#"{{"mu_grid": [{}], "g0_grid": [{}]}}"#, big.join(","), vec!["2.0"; 100].join(",")));
    let o = run("sweep", &d, &["--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("combinations"));
    assert_eq!(code(&toolkit(&["homoclinic", "--config", "/nonexistent/cfg.json"])), 1);
}

#[test]
fn flags_override_the_config_file() {
    let d = scratch("override");
    let cfg = write_config(&d, r#"{"mu": 0.1, "g0": 3.0, "homoclinic_grid": {"n": 3}}"#);
    assert_eq!(code(&run("homoclinic", &d.join("o"), &["--config", &cfg, "--mu", "0.2", "--precision", "extended", "--tol", "1e-20"])), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("o/config.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["mu"], 0.2);
    assert_eq!(v["result"]["g0"], 3.0);
    assert_eq!(v["result"]["precision"], "extended");
    assert_eq!(v["provenance"]["precision"], "extended");
}

#[test]
fn zero_mass_splitting_has_no_roots() {
    let d = scratch("split0");
    let o = run("splitting", &d, &["--mu", "0", "--g0", "2.4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(table(&d.join("splitting_roots.csv")), vec!["v,phase,k,first_order_v,d_prime,d_prime_uncertainty,kind"]);
    assert_eq!(table(&d.join("splitting_lobes.csv")).len(), 1);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("splitting.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["trusted"], true);
}

#[test]
fn sweep_merges_in_key_order() {
    let d = scratch("sweep");
    let cfg = write_config(&d, r#"{"sweep_stage": "melnikov", "methods": ["contour"], "lmax": 2, "mu_grid": [0.3, 0.0, 0.1], "g0_grid": [3.0, 2.0]}"#);
    let (a, b) = (d.join("a"), d.join("b"));
    assert_eq!(code(&run("sweep", &a, &["--config", &cfg])), 0);
    assert_eq!(code(&run("sweep", &b, &["--config", &cfg])), 0);
    assert_eq!(fs::read(a.join("sweep.csv")).unwrap(), fs::read(b.join("sweep.csv")).unwrap());
    assert_eq!(fs::read(a.join("sweep.json")).unwrap(), fs::read(b.join("sweep.json")).unwrap());
    let rows = table(&a.join("sweep.csv"));
    let keys: Vec<(String, String)> =
        rows[1..].iter().map(|r| { let f: Vec<&str> = r.split(',').collect(); (f[0].to_string(), f[1].to_string()) }).collect();
    let want: Vec<(String, String)> = [("0", "2"), ("0", "3"), ("0.1", "2"), ("0.1", "3"), ("0.3", "2"), ("0.3", "3")]
        .iter()
        .map(|(m, g)| (m.to_string(), g.to_string()))
        .collect();
    assert_eq!(keys, want);
}

#[test]
fn splitting_sweep_reports_each_point() {
    let d = scratch("sweep-split");
    let cfg = write_config(&d, r#"{"mu_grid": [0.3, 0.0], "g0_grid": [2.8]}"#);
    let o = run("sweep", &d, &["--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = table(&d.join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("0,2.8,true,true"));
    assert!(rows[2].starts_with("0.3,2.8,true,true"));
}

#[test]
fn manifolds_emit_both_curves() {
    let d = scratch("manifolds");
    let cfg = write_config(&d, r#"{"manifold_samples": 9}"#);
    let o = run("manifolds", &d.join("o"), &["--config", &cfg, "--g0", "2.8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["manifold_unstable.csv", "manifold_stable.csv", "manifold_distance.csv"] {
        assert_eq!(table(&d.join("o").join(f)).len(), 10, "{f}");
    }
}

#[test]
fn oscillate_near_the_tangle() {
    let d = scratch("oscillate");
    let o = run("oscillate", &d, &["--mu", "0.3", "--g0", "2.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("oscillate.json")).unwrap()).unwrap();
    assert!(v["result"]["summary"]["oscillations"].as_u64().unwrap() >= 3);
    assert_eq!(table(&d.join("oscillate.csv"))[0], "index,t,r,Y,G,energy_residual");
}

#[test]
fn tangency_sweep_rows() {
    let d = scratch("tangency");
    let o = run("tangency", &d, &[]);
    assert!(matches!(code(&o), 0 | 4), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = table(&d.join("tangency.csv"));
    assert_eq!(rows[0], "g0,mu_star,mu_predicted,ratio");
    assert_eq!(rows.len(), 7, "{rows:?}");
    for r in &rows[1..] {
        let f: Vec<f64> = r.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[1] > 0.0 && f[1] < 0.5 && f[2] > 0.0 && f[2] < 0.5, "{r}");
    }
}
