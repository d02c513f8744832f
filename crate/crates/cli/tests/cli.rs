//! CLI surface tests: exit codes, artifact shapes, seed precedence.

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn tmp(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sgflab_cli_{tag}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn validation_errors_exit_2() {
    let err = sgflab_cli::execute(&args(&["run", "--study", "bogus"])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let err = sgflab_cli::execute(&args(&["run", "--study", "estimate", "--paths", "xyz"]))
        .unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let err = sgflab_cli::execute(&args(&["describe", "nothing"])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let err = sgflab_cli::execute(&args(&["run", "--frobnicate", "1"])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("--study"));
}

#[test]
fn numeric_failures_exit_3() {
    // h * L = (64 / 16) * 50 makes the explicit scheme blow up
    let out = tmp("diverge");
    let err = sgflab_cli::execute(&args(&[
        "run", "--study", "estimate", "--eigenvalues", "50", "--T", "64", "--level", "4",
        "--paths", "4", "--sigma0", "0", "--seed", "1", "--out", out.to_str().unwrap(),
    ]))
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("path"));
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn simulate_exports_trajectories_with_the_documented_header() {
    let out = tmp("sim");
    sgflab_cli::execute(&args(&[
        "run", "--study", "simulate", "--eigenvalues", "1,2", "--x0", "1,-1", "--T", "2",
        "--level", "6", "--paths", "2", "--seed", "5", "--out", out.to_str().unwrap(),
    ]))
    .unwrap();
    let csv = std::fs::read_to_string(out.join("path_0000.csv")).unwrap();
    assert!(csv.starts_with("t,x_0,x_1,favg,gap\n"));
    assert!(out.join("path_0001.csv").exists());
    assert!(out.join("manifest.json").exists());
    // LF line endings only
    assert!(!csv.contains('\r'));
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn coco_study_reports_zero_violations() {
    let out = tmp("coco");
    let console = sgflab_cli::execute(&args(&[
        "run", "--study", "coco", "--problem", "composite", "--mu", "1.0", "--sigma0", "0.2",
        "--x0", "2", "--T", "10", "--level", "8", "--paths", "400", "--seed", "7", "--out",
        out.to_str().unwrap(),
    ]))
    .unwrap();
    assert!(console.contains("rho = 0.75"));
    assert!(console.contains("0 violation(s)"), "{console}");
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn order_and_sweep_drivers_emit_their_tables() {
    let out = tmp("order");
    let console = sgflab_cli::execute(&args(&[
        "run", "--study", "order", "--vol-kind", "multiplicative", "--sigma0", "0.4", "--T",
        "1", "--levels", "4,5,6,9", "--paths", "60", "--seed", "3", "--out",
        out.to_str().unwrap(),
    ]))
    .unwrap();
    assert!(console.contains("state order"));
    let table = std::fs::read_to_string(out.join("order.csv")).unwrap();
    assert!(table.starts_with("level,h,state_err_sq,gap_err\n"));
    assert_eq!(table.lines().count(), 4); // header + three measured levels
    let _ = std::fs::remove_dir_all(&out);

    let out = tmp("sweep");
    let console = sgflab_cli::execute(&args(&[
        "run", "--study", "theta-sweep", "--problem", "composite", "--sigma0", "0.1", "--T",
        "20", "--level", "9", "--thetas", "0.5,0.1", "--paths", "40", "--seed", "3",
        "--epsilon", "0.05", "--out", out.to_str().unwrap(),
    ]))
    .unwrap();
    assert!(console.contains("recommended theta"));
    assert!(out.join("sweep.csv").exists());
    assert!(out.join("sweep_theta_0.csv").exists());
    assert!(out.join("sweep_theta_1.csv").exists());
    let _ = std::fs::remove_dir_all(&out);
}

#[test]
fn config_file_and_flag_overlay() {
    let out = tmp("overlay");
    let dir = tmp("overlay_cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "study = estimate\nT = 2\nlevel = 6\npaths = 8\nstride = 8\nseed = 11\nvol.sigma0 = 0.3\n",
    )
    .unwrap();
    // flag overrides the file's seed
    sgflab_cli::execute(&args(&[
        "run", "--config", cfg_path.to_str().unwrap(), "--seed", "99", "--out",
        out.to_str().unwrap(),
    ]))
    .unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 99);
    assert_eq!(manifest["config"]["T"], "2");
    let _ = std::fs::remove_dir_all(&out);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn env_seed_sits_between_config_and_flag() {
    // no other test in this binary parses a run without passing --seed, so
    // mutating the process environment here is safe
    let dir = tmp("envseed");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("seeded.cfg");
    std::fs::write(&cfg_path, "study = estimate\nseed = 7\n").unwrap();
    let cfg_flag = ["run", "--config", cfg_path.to_str().unwrap()];

    let seed_of = |argv: &[&str]| -> u64 {
        match sgflab_cli::parse_args(&args(argv)).unwrap() {
            sgflab_cli::Command::Run(config) => config.seed().unwrap(),
            _ => unreachable!(),
        }
    };

    std::env::set_var("SGFLAB_SEED", "4242");
    // env overrides the config file
    assert_eq!(seed_of(&cfg_flag), 4242);
    // the flag wins over the env
    let mut with_flag = cfg_flag.to_vec();
    with_flag.extend(["--seed", "99"]);
    assert_eq!(seed_of(&with_flag), 99);
    std::env::remove_var("SGFLAB_SEED");
    // without the env the file wins, and without either the default applies
    assert_eq!(seed_of(&cfg_flag), 7);
    assert_eq!(seed_of(&["run"]), sgflab_cli::config::DEFAULT_SEED);
    let _ = std::fs::remove_dir_all(&dir);
}
