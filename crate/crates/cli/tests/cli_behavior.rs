//! End-to-end behavior of the `relgas` binary: exit codes, determinism,
//! flag/file override precedence, and output formats, exercised through
//! real child processes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_relgas"));
    cmd.env_remove("RELGAS_THREADS");
    cmd
}

fn write_cfg(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_cfg(sub: &str, cfg: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const IDEAL_ADS: &str = r#"
[constants]
natural_units = true

[gas]
mass_kg = 1.0
temperature_k = 0.2
chemical_potential_j = -1.0

[spacetime]
kind = "anti-de-sitter"
lambda_per_m2 = -3.0

[region]
kind = "ball"
radius_m = 1.0
"#;

const SAMPLER_MINKOWSKI: &str = r#"
[constants]
natural_units = true

[gas]
mass_kg = 1.0
temperature_k = 1.0
chemical_potential_j = -0.5

[spacetime]
kind = "minkowski"

[region]
kind = "ball"
radius_m = 1.5

[sampler]
seed = 7
sweeps = 300
burn_in = 40
moves_per_sweep = 25
keep_every = 75
"#;

#[test]
fn help_and_version_succeed_but_usage_errors_exit_1() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout_str(&help).contains("relgas"));

    let version = run(&["--version"]);
    assert_eq!(version.status.code(), Some(0));

    let sub_help = run(&["pressure", "--help"]);
    assert_eq!(sub_help.status.code(), Some(0));

    assert_eq!(run(&[]).status.code(), Some(1), "missing subcommand");
    assert_eq!(run(&["not-a-command"]).status.code(), Some(1));
    assert_eq!(
        run(&["pressure", "--no-such-flag"]).status.code(),
        Some(1)
    );
}

#[test]
fn invalid_configuration_exits_2() {
    let dir = TempDir::new().unwrap();

    // No config at all: the command cannot find its [gas] section.
    assert_eq!(run(&["pressure"]).status.code(), Some(2));

    // Nonexistent file.
    let missing = dir.path().join("nope.toml");
    let out = run(&["pressure", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown key inside a known table.
    let cfg = write_cfg(
        &dir,
        "typo.toml",
        "[gas]\nmassive_kg = 1.0\ntemperature_k = 1.0\n",
    );
    let out = run_cfg("pressure", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    // Malformed TOML.
    let cfg = write_cfg(&dir, "broken.toml", "[gas\nmass_kg = 1.0\n");
    assert_eq!(run_cfg("pressure", &cfg, &[]).status.code(), Some(2));

    // --set without '='.
    let cfg = write_cfg(&dir, "ok.toml", IDEAL_ADS);
    let out = run_cfg("pressure", &cfg, &["--set", "gas.temperature_k"]);
    assert_eq!(out.status.code(), Some(2));

    // Region kind and spacetime kind mismatches are validation errors.
    let out = run_cfg("kerr-potential", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2), "kerr table on non-Kerr chart");
    let out = run_cfg("ads-limit", &cfg, &["--set", "spacetime.kind=minkowski"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_overflow_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "hot.toml", IDEAL_ADS);
    // An enormous activity pushes the expected occupation past f64 range.
    let out = run_cfg(
        "pressure",
        &cfg,
        &["--set", "gas.chemical_potential_j=1e6"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow"));
}

#[test]
fn model_limit_violations_exit_4() {
    let dir = TempDir::new().unwrap();

    // De Sitter has no Newtonian limit.
    let cfg = write_cfg(
        &dir,
        "ds.toml",
        r#"
[constants]
natural_units = true

[gas]
mass_kg = 1.0
temperature_k = 1.0

[spacetime]
kind = "de-sitter"
lambda_per_m2 = 3.0

[region]
kind = "ball"
radius_m = 0.5

[newton_sweep]
c_values_m_per_s = [10.0, 20.0]
"#,
    );
    let out = run_cfg("newton-sweep", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported limit"));

    // An ideal gas has no interaction range, so the shell construction
    // needs an explicit width.
    let cfg = write_cfg(
        &dir,
        "ideal-uniq.toml",
        r#"
[constants]
natural_units = true

[gas]
mass_kg = 1.0
temperature_k = 0.2

[vacuum]
lambda_per_m2 = -3.0
"#,
    );
    let out = run_cfg("uniqueness-check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn thread_count_env_is_validated_and_otherwise_ignored() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "cfg.toml", IDEAL_ADS);

    let ok = bin()
        .args(["pressure", "--config", cfg.to_str().unwrap()])
        .env("RELGAS_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    for bad in ["abc", "0", "-2", "1.5"] {
        let out = bin()
            .args(["pressure", "--config", cfg.to_str().unwrap()])
            .env("RELGAS_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "RELGAS_THREADS={bad}");
    }

    // The thread count must not change any numbers.
    let base = run_cfg("pressure", &cfg, &[]);
    assert_eq!(ok.stdout, base.stdout);
}

#[test]
fn dust_closure_identity_is_exact() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        &dir,
        "dust.toml",
        r#"
[constants]
natural_units = true

[gas]
mass_kg = 1.0
temperature_k = 1.0

[vacuum]
lambda_per_m2 = 3.0
"#,
    );
    let out = run_cfg("dust-closure", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let k_b_t = v["k_b_t_j"].as_f64().unwrap();
    let half_rest = v["half_rest_energy_j"].as_f64().unwrap();
    assert_eq!(k_b_t, half_rest, "closure must hold to the last bit");
    assert_eq!(v["temperature_k"].as_f64().unwrap(), 0.5);

    // In SI units for an electron-mass particle the closure temperature
    // is mc²/2k_B, still exact.
    let cfg = write_cfg(
        &dir,
        "dust-si.toml",
        r#"
[gas]
mass_kg = 9.1093837015e-31
temperature_k = 300.0

[vacuum]
lambda_per_m2 = 1.1e-52
"#,
    );
    let out = run_cfg("dust-closure", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(
        v["k_b_t_j"].as_f64().unwrap(),
        v["half_rest_energy_j"].as_f64().unwrap()
    );
}

#[test]
fn same_configuration_and_seed_reproduce_byte_identical_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "mc.toml", SAMPLER_MINKOWSKI);

    let a = run_cfg("sample", &cfg, &[]);
    let b = run_cfg("sample", &cfg, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce exactly");

    // The --seed flag overrides the file; matching the file seed matches
    // the baseline bytes, a different seed changes them.
    let same = run_cfg("sample", &cfg, &["--seed", "7"]);
    assert_eq!(same.stdout, a.stdout);
    let other = run_cfg("sample", &cfg, &["--seed", "8"]);
    assert_eq!(other.status.code(), Some(0));
    assert_ne!(other.stdout, a.stdout);

    // Deterministic through a file sink too.
    let f1 = dir.path().join("run1.json");
    let f2 = dir.path().join("run2.json");
    let o1 = run_cfg("sample", &cfg, &["--output", f1.to_str().unwrap()]);
    let o2 = run_cfg("sample", &cfg, &["--output", f2.to_str().unwrap()]);
    assert_eq!(o1.status.code(), Some(0));
    assert!(o1.stdout.is_empty(), "--output must silence stdout");
    assert!(o2.stdout.is_empty());
    let b1 = std::fs::read(&f1).unwrap();
    let b2 = std::fs::read(&f2).unwrap();
    assert_eq!(b1, b2);
    assert_eq!(b1, a.stdout, "file and stdout sinks carry the same bytes");

    // CSV rendering is deterministic as well.
    let c1 = run_cfg("sample", &cfg, &["--format", "csv"]);
    let c2 = run_cfg("sample", &cfg, &["--format", "csv"]);
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn csv_headers_carry_units() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "cfg.toml", IDEAL_ADS);

    let out = run_cfg("pressure", &cfg, &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "lambda_per_m2,pressure_pa,rho_vac_j_per_m3,expected_particles,\
         weighted_q1_log_ln_m3,proper_volume_m3,chart_volume_m3"
    );
    assert_eq!(text.lines().count(), 2, "single data row");

    let out = run_cfg(
        "tolman",
        &cfg,
        &[
            "--format",
            "csv",
            "--set",
            "profile.r_max_m=0.8",
            "--set",
            "profile.points=5",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "radius_m,lapse_alpha,tolman_temperature_k"
    );
    assert_eq!(text.lines().count(), 6, "header plus five grid rows");

    let out = run_cfg(
        "ads-limit",
        &cfg,
        &[
            "--format",
            "csv",
            "--set",
            "ads_limit.r1_m=0.5",
            "--set",
            "ads_limit.k_max=3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().next().unwrap(), "k_index,radius_m,pressure_pa");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn set_overrides_change_the_computation() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "cfg.toml", IDEAL_ADS);

    let base = run_cfg("pressure", &cfg, &[]);
    let warmer = run_cfg("pressure", &cfg, &["--set", "gas.temperature_k=0.4"]);
    assert_eq!(warmer.status.code(), Some(0));
    assert_ne!(base.stdout, warmer.stdout);

    let v_base: serde_json::Value = serde_json::from_str(&stdout_str(&base)).unwrap();
    let v_warm: serde_json::Value = serde_json::from_str(&stdout_str(&warmer)).unwrap();
    assert!(
        v_warm["expected_particles"].as_f64().unwrap()
            > v_base["expected_particles"].as_f64().unwrap(),
        "raising the temperature must raise the occupation"
    );

    // Overrides may also materialize whole missing tables.
    let out = run_cfg(
        "density-profile",
        &cfg,
        &["--set", "profile.r_max_m=0.5", "--set", "profile.points=4"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn retained_samples_stream_as_json_lines() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "mc.toml", SAMPLER_MINKOWSKI);
    let jsonl = dir.path().join("snapshots.jsonl");

    let out = run_cfg(
        "sample",
        &cfg,
        &[
            "--set",
            &format!("output.samples_path={:?}", jsonl.to_str().unwrap()),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let samples = report["samples"].as_array().unwrap();
    assert!(!samples.is_empty(), "keep_every > 0 must retain snapshots");

    let lines: Vec<String> = std::fs::read_to_string(&jsonl)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect();
    assert_eq!(lines.len(), samples.len());
    for (line, sample) in lines.iter().zip(samples) {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["sweep_index"], sample["sweep_index"]);
        assert_eq!(record["particles"], sample["particles"]);
        let n = record["particles"].as_u64().unwrap() as usize;
        assert_eq!(record["points_m"].as_array().unwrap().len(), n);
        for p in record["points_m"].as_array().unwrap() {
            assert_eq!(p.as_array().unwrap().len(), 3);
        }
    }
}
