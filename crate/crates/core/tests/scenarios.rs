use std::fs;
use std::sync::Arc;

use ggfv::mesh::{DiffusionProfile, Mesh};
use ggfv::model::ModelParameters;
use ggfv::scenarios::{format_float, preset, run_scenario, snapshot_file_name, speed_table, Overrides, ScenarioConfig};
use ggfv::scheme::{run, InterfaceAverage, SchemeOptions, SimulationState};
use ggfv::Error;

fn short(name: &str, t: f64) -> ScenarioConfig {
    let mut cfg = preset(name).unwrap();
    cfg.apply_overrides(&Overrides {
        final_time: Some(t),
        ..Overrides::default()
    })
    .unwrap();
    cfg
}

#[test]
fn repeated_runs_are_bit_identical() {
    let cfg = preset("periodic-w50-d1.5").unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_scenario(&cfg, a.path()).unwrap();
    run_scenario(&cfg, b.path()).unwrap();
    for f in [
        snapshot_file_name(0.0),
        snapshot_file_name(20.0),
        "wavespeed.csv".into(),
    ] {
        let x = fs::read(a.path().join(&f)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, fs::read(b.path().join(&f)).unwrap(), "{f}");
    }
}

#[test]
fn output_files_follow_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("table1-d12.5").unwrap();
    let s = run_scenario(&cfg, dir.path()).unwrap();
    assert_eq!(s.steps, 2000);
    assert_eq!(s.cells, 200);

    let snap = fs::read_to_string(dir.path().join("snapshot_t20.csv")).unwrap();
    let mut lines = snap.lines();
    assert_eq!(lines.next(), Some("x,u,v,w"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    for field in rows[17].split(',') {
        // d.dddddddddddddddde±k: 17 significant digits.
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{field}");
        field.parse::<f64>().unwrap();
    }
    assert!(rows[0].starts_with(&format_float(0.0025)));

    let ws = fs::read_to_string(dir.path().join("wavespeed.csv")).unwrap();
    let mut lines = ws.lines();
    assert_eq!(lines.next(), Some("step,time,theta"));
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 2000);
    assert!(body[0].starts_with("1,1.0000000000000000e-2,"));
    assert!(body[1999].starts_with("2000,2.0000000000000000e1,"));

    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(summary, s.render());
    for key in [
        "name=table1-d12.5",
        "steps=2000",
        "classification=homogeneous",
        "gap_present=true",
        "warnings=0",
    ] {
        assert!(summary.lines().any(|l| l == key), "{key}");
    }
    assert!(summary.lines().all(|l| l.contains('=')));
}

#[test]
fn observers_can_be_switched_off() {
    let mut cfg = short("table1-d0.5", 1.0);
    cfg.observers.wavespeed = false;
    cfg.observers.gap = false;
    cfg.observers.classification = false;
    let dir = tempfile::tempdir().unwrap();
    let s = run_scenario(&cfg, dir.path()).unwrap();
    assert!(s.tail_speed.is_none() && s.gap.is_none() && s.classification.is_none());
    assert!(!dir.path().join("wavespeed.csv").exists());
    assert!(dir.path().join("summary.txt").exists());
}

#[test]
fn overrides_replace_grid_time_and_toxicity() {
    let mut cfg = preset("table1-d0.5").unwrap();
    cfg.apply_overrides(&Overrides {
        dt: Some(0.02),
        dx: Some(0.01),
        final_time: Some(4.0),
        d: Some(3.0),
    })
    .unwrap();
    assert_eq!((cfg.dt, cfg.dx, cfg.final_time, cfg.params.d), (0.02, 0.01, 4.0, 3.0));
    assert_eq!(cfg.snapshots, vec![0.0]);
    let dir = tempfile::tempdir().unwrap();
    let s = run_scenario(&cfg, dir.path()).unwrap();
    assert_eq!((s.steps, s.cells), (200, 100));

    let mut bad = preset("table1-d0.5").unwrap();
    let err = bad.apply_overrides(&Overrides {
        dx: Some(0.3),
        ..Overrides::default()
    });
    assert!(matches!(err, Err(Error::Config(_))), "{err:?}");
}

#[test]
fn config_files_round_trip_and_reject_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("jump-increasing-d1.5").unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, cfg.render()).unwrap();
    assert_eq!(ScenarioConfig::from_file(&path).unwrap(), cfg);

    let with_typo = format!("{}colour=red\n", cfg.render());
    assert!(matches!(ScenarioConfig::parse(&with_typo), Err(Error::Config(_))));

    let minimal = "# smallest useful file\nd = 2.5\n\nT = 1\n";
    let m = ScenarioConfig::parse(minimal).unwrap();
    assert_eq!((m.params.d, m.final_time), (2.5, 1.0));
    assert_eq!(m.params.c, 70.0);

    assert!(matches!(ScenarioConfig::parse("r=1\n"), Err(Error::Config(_))));
    assert!(ScenarioConfig::parse("d=1\nd=2\n").is_err());
    assert!(ScenarioConfig::parse("d=1\nprofile=constant\nomega=3\n").is_err());
    assert!(ScenarioConfig::parse("d=-1\n").is_err());
    assert!(matches!(
        ScenarioConfig::from_file(&dir.path().join("missing.cfg")),
        Err(Error::Io { .. })
    ));
}

#[test]
fn blow_up_is_reported_as_instability() {
    let mut cfg = preset("table1-d0.5").unwrap();
    cfg.dt = 5.0;
    cfg.final_time = 50.0;
    cfg.snapshots.clear();
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&cfg, dir.path()).unwrap_err();
    assert!(err.is_numerical(), "{err}");
    assert!(matches!(err, Error::Instability { .. }));
}

#[test]
fn speed_table_runs_each_scenario_in_its_own_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfgs = vec![short("table1-d0.5", 2.0), short("table1-d12.5", 2.0)];
    let entries = speed_table(&cfgs, dir.path()).unwrap();
    assert_eq!(entries.len(), 2);
    for c in &cfgs {
        assert!(dir.path().join(&c.name).join("summary.txt").exists());
    }
    let csv = fs::read_to_string(dir.path().join("speed_table.csv")).unwrap();
    assert!(csv.starts_with("name,d,r,tail_speed,tail_peak_to_peak,fkpp_speed\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn single_precision_tracks_double_precision() {
    fn go<T: ggfv::Scalar>() -> (Vec<f64>, f64) {
        let lit = T::lit;
        let mesh = Arc::new(Mesh::<T>::uniform(lit(0.0), lit(1.0), lit(0.01)).unwrap());
        let v: Vec<T> = mesh
            .centers()
            .iter()
            .map(|&x| if x < lit(0.25) { T::one() } else { T::zero() })
            .collect();
        let u: Vec<T> = v.iter().map(|&v| T::one() - v).collect();
        let n = mesh.len();
        let s0 = SimulationState::new(T::zero(), mesh, u.into(), v.into(), vec![T::zero(); n].into()).unwrap();
        let params = ModelParameters::new(lit(12.5), T::one(), lit(4e-5), lit(70.0)).unwrap();
        let opts = SchemeOptions::new(lit(0.01), InterfaceAverage::Arithmetic).unwrap();
        let profile = DiffusionProfile::sinusoidal(lit(0.1), T::one(), lit(50.0)).unwrap();
        let last = run(s0, &profile, &params, &opts, lit(2.0), &mut []).unwrap();
        (last.w.iter().map(|x| x.as_f64()).collect(), last.time.as_f64())
    }
    let (w64, t64) = go::<f64>();
    let (w32, t32) = go::<f32>();
    assert!((t64 - 2.0).abs() < 1e-12 && (t32 - 2.0).abs() < 1e-5);
    let err = w64.iter().zip(&w32).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-4, "{err}");
}
