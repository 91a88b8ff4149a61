//! End-to-end tests of the installed binary: spectra and figures to
//! CSV, ensemble simulation with manifests, the verification command,
//! and the exit-code contract. Every invocation goes through the real
//! executable so argument parsing, stdout, stderr, exit codes, and file
//! outputs are all exercised exactly as a user sees them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rheospec::cli::read_spectrum_csv;
use rheospec::trajfile::sha256_hex;

const BIN: &str = env!("CARGO_BIN_EXE_rheospec");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary must start")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir must be creatable")
}

/// A unit-scale particle: 3 pi R = 1 so the spectrum prefactor is kT,
/// and mass = 2 so the distributed inertance m/(6 pi R) is exactly 1.
fn unit_config(medium_lines: &str, sim_lines: &str) -> String {
    format!(
        "medium = {}\nkT = 1\nn_dim = 1\nradius = {}\nmass = 2\n{}",
        medium_lines,
        1.0 / (3.0 * std::f64::consts::PI),
        sim_lines
    )
}

#[test]
fn spectrum_normalized_viscous_hits_exact_values() {
    let dir = tempdir();
    let out = dir.path().join("v.csv");
    let res = run(&[
        "spectrum",
        "--medium",
        "viscous",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));

    let (header, rows) = read_spectrum_csv(&out).expect("CSV must parse");
    assert_eq!(
        header, "omega_dimensionless,psd_normalized",
        "normalized output must use dimensionless column names"
    );
    assert_eq!(rows.len(), 200, "default grid has 200 points");
    let at_knee = rows
        .iter()
        .find(|(w, _)| *w == 1.0)
        .expect("the default log grid contains x = 1 exactly");
    assert_eq!(
        at_knee.1, 0.5,
        "the Lorentzian at its corner frequency is exactly one half"
    );

    let manifest = fs::read_to_string(dir.path().join("v.manifest.txt"))
        .expect("manifest must be written next to the CSV");
    assert!(
        manifest.starts_with("tool = rheospec "),
        "manifest must open with the tool version: {manifest}"
    );
    assert!(
        manifest.contains("medium = viscous") && manifest.contains("normalized = true"),
        "manifest must echo the configuration: {manifest}"
    );
    let csv_bytes = fs::read(&out).expect("CSV must be readable");
    assert!(
        manifest.contains(&format!("output sha256 {} v.csv", sha256_hex(&csv_bytes))),
        "manifest digest must match the file on disk"
    );
    assert!(
        !manifest.to_lowercase().contains("time:") && !manifest.contains("202"),
        "manifest must carry no timestamps: {manifest}"
    );
}

#[test]
fn spectrum_comma_grid_rows_are_exact() {
    let dir = tempdir();
    let out = dir.path().join("m.csv");
    let res = run(&[
        "spectrum",
        "--medium",
        "maxwell",
        "--omegaRtau",
        "2",
        "--grid",
        "1,2,4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let (_, rows) = read_spectrum_csv(&out).expect("CSV must parse");
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    assert_eq!(xs, vec![1.0, 2.0, 4.0], "comma grids are taken verbatim");
    // At the resonance x = omega_R tau = 2 the shape is a^4/(x^2 a^4)
    // = 1/x^2 = 1/4, exact in binary arithmetic.
    assert_eq!(rows[1].1, 0.25, "Maxwell shape at resonance is exactly 1/4");
}

#[test]
fn spectrum_dimensional_config_matches_library_closed_form() {
    use rheospec::rheology::PhysicalContext;
    use rheospec::spectra::{Medium, MediumSpec};

    let dir = tempdir();
    let cfg_path = dir.path().join("colloid.cfg");
    fs::write(
        &cfg_path,
        "medium = viscous\nkT = 4.11e-21\nn_dim = 1\nradius = 1e-6\nmass = 8.2e-15\neta = 1e-3\n",
    )
    .expect("config must be writable");
    let out = dir.path().join("s.csv");
    let res = run(&[
        "spectrum",
        cfg_path.to_str().unwrap(),
        "--grid",
        "1e2:1e8:50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));

    let (header, rows) = read_spectrum_csv(&out).expect("CSV must parse");
    assert_eq!(
        header, "omega_rad_s,psd_si",
        "dimensional output must use SI column names"
    );
    let ctx = PhysicalContext::new(4.11e-21, 1, 1e-6, 8.2e-15).unwrap();
    let spec = MediumSpec::new(Medium::Viscous { eta: 1e-3 }, ctx).unwrap();
    for (w, s) in rows {
        let want = spec.psd_closed(w).unwrap();
        assert_eq!(s, want, "CSV values must be the closed form bit for bit");
    }
}

#[test]
fn spectrum_hydrodynamic_flags_record_the_density_group() {
    let dir = tempdir();
    let out = dir.path().join("h.csv");
    let res = run(&[
        "spectrum",
        "--medium",
        "hydrodynamic",
        "--rho-p",
        "1570",
        "--rho-f",
        "1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let manifest = fs::read_to_string(dir.path().join("h.manifest.txt"))
        .expect("manifest must be written");
    let gamma_line = manifest
        .lines()
        .find(|l| l.starts_with("gamma = "))
        .expect("manifest must echo the derived density group");
    let gamma: f64 = gamma_line["gamma = ".len()..]
        .parse()
        .expect("gamma must be numeric");
    assert!(
        (gamma - 0.46).abs() < 5e-3,
        "the benchmark density pair gives gamma near 0.46, got {gamma}"
    );
}

#[test]
fn spectrum_csv_round_trips_bit_for_bit() {
    let dir = tempdir();
    let out = dir.path().join("j.csv");
    let res = run(&[
        "spectrum",
        "--medium",
        "jeffreys",
        "--omegaRtau",
        "1.7",
        "--xi",
        "0.3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let text = fs::read_to_string(&out).expect("CSV must be readable");
    let (header, rows) = read_spectrum_csv(&out).expect("CSV must parse");
    let mut rebuilt = String::from(header);
    rebuilt.push('\n');
    for (w, s) in rows {
        rebuilt.push_str(&format!("{w},{s}\n"));
    }
    assert_eq!(
        rebuilt, text,
        "parsing and re-printing every row must reproduce the file exactly"
    );
}

/// Ratio between adjacent points of the 400-point figure grid.
const FIGURE_GRID_STEP: f64 = 1.0232929922807541_f64;

#[test]
fn figures_trap_family_peaks_at_each_resonance() {
    let dir = tempdir();
    let res = run(&["figures", "4", "--outdir", dir.path().to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));

    let manifest =
        fs::read_to_string(dir.path().join("manifest.txt")).expect("manifest must exist");
    assert!(
        manifest.contains("figure = 4") && manifest.contains("grid = 1e-2:1e2:400"),
        "manifest must identify the figure and its grid: {manifest}"
    );

    for a in [0.25_f64, 0.5, 1.0, 2.0, 4.0] {
        let name = format!("fig4_trap_a{a}.csv");
        assert!(
            manifest.contains(&format!("curve {name} trap omegaRtau = {a}")),
            "manifest must record the swept parameter for {name}"
        );
        let (_, rows) = read_spectrum_csv(&dir.path().join(&name)).expect("curve must parse");
        assert_eq!(rows.len(), 400, "figure curves share the 400-point grid");
        let (x_peak, s_peak) = rows
            .iter()
            .copied()
            .max_by(|p, q| p.1.total_cmp(&q.1))
            .expect("curve is nonempty");
        assert!(
            s_peak <= 1.0 + 1e-12,
            "the trap shape never exceeds its unit resonance height"
        );
        assert!(
            (x_peak / a).ln().abs() <= FIGURE_GRID_STEP.ln() + 1e-12,
            "curve {name} must peak within one grid step of x = {a}, peaked at {x_peak}"
        );
    }

    for line in manifest.lines().filter(|l| l.starts_with("output sha256 ")) {
        let mut parts = line.split_whitespace().skip(2);
        let sha = parts.next().expect("digest field");
        let file = parts.next().expect("name field");
        let bytes = fs::read(dir.path().join(file)).expect("listed output must exist");
        assert_eq!(sha, sha256_hex(&bytes), "digest must match {file} on disk");
    }
}

#[test]
fn figures_subdiffusive_alpha_one_coincides_with_viscous() {
    let dir = tempdir();
    let res = run(&["figures", "9", "--outdir", dir.path().to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let (_, sub) = read_spectrum_csv(&dir.path().join("fig9_subdiffusive_alpha1.csv"))
        .expect("alpha = 1 curve must exist");
    let (_, visc) = read_spectrum_csv(&dir.path().join("fig9_viscous_reference.csv"))
        .expect("reference curve must exist");
    for ((x1, s1), (x2, s2)) in sub.iter().zip(visc.iter()) {
        assert_eq!(x1, x2, "curves share one grid");
        assert!(
            (s1 - s2).abs() <= 1e-10 * s2,
            "alpha = 1 must reduce to the Lorentzian at x = {x1}: {s1} vs {s2}"
        );
    }
}

#[test]
fn figures_reject_undocumented_ids() {
    let res = run(&["figures", "2", "--outdir", "/tmp/should-not-exist"]);
    assert_eq!(res.status.code(), Some(2), "unknown figure is a config error");
    assert!(
        stderr_of(&res).contains("1, 4, 7, 9, 11"),
        "the error must name the documented figures"
    );
}

fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .expect("output directory must exist")
        .map(|e| {
            let e = e.expect("directory entry must be readable");
            let name = e.file_name().into_string().expect("utf-8 file name");
            let bytes = fs::read(e.path()).expect("output file must be readable");
            (name, bytes)
        })
        .collect();
    files.sort();
    files
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let dir = tempdir();
    let cfg_path = dir.path().join("unit.cfg");
    fs::write(
        &cfg_path,
        unit_config(
            "viscous\neta = 1",
            "dt = 0.05\nn_steps = 256\nn_traj = 4\nseed = 11\n",
        ),
    )
    .expect("config must be writable");

    let d1 = dir.path().join("run1");
    let d2 = dir.path().join("run2");
    let r1 = run(&[
        "--threads",
        "1",
        "simulate",
        cfg_path.to_str().unwrap(),
        "--outdir",
        d1.to_str().unwrap(),
    ]);
    assert!(r1.status.success(), "stderr: {}", stderr_of(&r1));
    let r2 = run(&[
        "--threads",
        "3",
        "simulate",
        cfg_path.to_str().unwrap(),
        "--outdir",
        d2.to_str().unwrap(),
    ]);
    assert!(r2.status.success(), "stderr: {}", stderr_of(&r2));

    let f1 = read_dir_files(&d1);
    let f2 = read_dir_files(&d2);
    assert_eq!(
        f1.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        vec![
            "manifest.txt",
            "traj_0000.bin",
            "traj_0001.bin",
            "traj_0002.bin",
            "traj_0003.bin"
        ],
        "simulate must write one file per trajectory plus the manifest"
    );
    assert_eq!(
        f1, f2,
        "every output byte must be identical at any worker count"
    );

    let manifest = String::from_utf8(f1[0].1.clone()).expect("manifest is text");
    assert!(
        manifest.contains("stability dt/tau = 0.05 (pass)"),
        "manifest must record the step product and its band: {manifest}"
    );
    assert!(
        manifest.contains("seed = 11"),
        "manifest must echo the effective seed: {manifest}"
    );
}

#[test]
fn simulate_seed_flag_overrides_the_config() {
    let dir = tempdir();
    let cfg_path = dir.path().join("unit.cfg");
    fs::write(
        &cfg_path,
        unit_config(
            "viscous\neta = 1",
            "dt = 0.05\nn_steps = 64\nn_traj = 2\nseed = 11\n",
        ),
    )
    .expect("config must be writable");
    let d = dir.path().join("run");
    let res = run(&[
        "simulate",
        cfg_path.to_str().unwrap(),
        "--seed",
        "99",
        "--outdir",
        d.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let manifest = fs::read_to_string(d.join("manifest.txt")).expect("manifest must exist");
    assert!(
        manifest.contains("seed = 99") && !manifest.contains("seed = 11"),
        "the echoed seed must be the one the run actually used: {manifest}"
    );
}

#[test]
fn simulate_divergence_exits_three() {
    let dir = tempdir();
    let cfg_path = dir.path().join("blowup.cfg");
    // A nearly-elastic springpot with a huge coefficient puts the
    // resonance far above 1/dt; the explicit update then amplifies
    // every step and the run must report divergence, not hang or lie.
    fs::write(
        &cfg_path,
        unit_config(
            "subdiffusive\nmu_alpha = 1e6\nalpha = 0.05",
            "dt = 0.01\nn_steps = 512\nn_traj = 1\nseed = 3\nburn_in = 0\noverride_stability = true\n",
        ),
    )
    .expect("config must be writable");
    let d = dir.path().join("run");
    let res = run(&[
        "simulate",
        cfg_path.to_str().unwrap(),
        "--outdir",
        d.to_str().unwrap(),
    ]);
    assert_eq!(
        res.status.code(),
        Some(3),
        "divergence has its own exit code; stderr: {}",
        stderr_of(&res)
    );
    assert!(
        stderr_of(&res).contains("diverged"),
        "the error must say what went wrong: {}",
        stderr_of(&res)
    );
}

#[test]
fn simulate_coarse_step_is_a_config_error_unless_overridden() {
    let dir = tempdir();
    let cfg_path = dir.path().join("coarse.cfg");
    fs::write(
        &cfg_path,
        unit_config(
            "viscous\neta = 1",
            "dt = 0.5\nn_steps = 64\nn_traj = 1\nseed = 5\n",
        ),
    )
    .expect("config must be writable");
    let d = dir.path().join("run");
    let res = run(&[
        "simulate",
        cfg_path.to_str().unwrap(),
        "--outdir",
        d.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2), "a coarse step is refused");
    assert!(
        stderr_of(&res).contains("dt"),
        "the error must name the offending product: {}",
        stderr_of(&res)
    );

    let cfg2 = dir.path().join("coarse_override.cfg");
    fs::write(
        &cfg2,
        unit_config(
            "viscous\neta = 1",
            "dt = 0.5\nn_steps = 64\nn_traj = 1\nseed = 5\noverride_stability = true\n",
        ),
    )
    .expect("config must be writable");
    let res = run(&[
        "simulate",
        cfg2.to_str().unwrap(),
        "--outdir",
        d.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "the documented override must let the run proceed; stderr: {}",
        stderr_of(&res)
    );
    let manifest = fs::read_to_string(d.join("manifest.txt")).expect("manifest must exist");
    assert!(
        manifest.contains("stability dt/tau = 0.5 (warn)"),
        "the manifest must still flag the coarse step: {manifest}"
    );
}

#[test]
fn config_errors_exit_two_and_name_the_problem() {
    let dir = tempdir();
    let cfg_path = dir.path().join("bad.cfg");
    fs::write(
        &cfg_path,
        "medium = viscous\nkT = 1\nn_dim = 1\nradius = 1\nmass = 1\neta = 1\nbogus = 1\n",
    )
    .expect("config must be writable");
    let out = dir.path().join("s.csv");
    let res = run(&[
        "spectrum",
        cfg_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2), "bad config exits 2");
    assert!(
        stderr_of(&res).contains("bogus"),
        "the error must name the offending key: {}",
        stderr_of(&res)
    );

    let res = run(&["spectrum", "/nonexistent/path.cfg", "--out", "x.csv"]);
    assert_eq!(
        res.status.code(),
        Some(1),
        "an unreadable config is an I/O failure, not a config error"
    );
}

#[test]
fn verify_limits_passes_and_reports_each_check() {
    let started = std::time::Instant::now();
    let res = run(&["verify", "--suite", "limits"]);
    let elapsed = started.elapsed();
    assert!(res.status.success(), "stderr: {}", stderr_of(&res));
    let text = stdout_of(&res);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("check ")).collect();
    assert_eq!(checks.len(), 11, "limits suite has eleven checks: {text}");
    for line in &checks {
        assert!(
            line.contains("metric=") && line.contains("tol=") && line.ends_with("PASS"),
            "each line must carry name, metric, tolerance, verdict: {line}"
        );
    }
    assert!(
        text.contains("verified 11/11 checks"),
        "the summary must count the checks: {text}"
    );
    assert!(
        elapsed.as_secs() < 10,
        "the limits suite must stay fast, took {elapsed:?}"
    );
}

#[test]
fn verify_rejects_unknown_suites() {
    let res = run(&["verify", "--suite", "bogus"]);
    assert_eq!(res.status.code(), Some(2), "unknown suite is a config error");
    assert!(
        stderr_of(&res).contains("limits, fdt, simulation, or all"),
        "the error must list the valid suites: {}",
        stderr_of(&res)
    );
}

#[test]
fn example_configs_are_complete_and_stable() {
    use rheospec::config::{parse_config, ParsedConfig};
    use rheospec::simkit::{stability_report, SimConfig, StabilityVerdict};

    let config_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut names: Vec<String> = fs::read_dir(&config_dir)
        .expect("configs directory must exist")
        .filter_map(|e| {
            let name = e.expect("entry must be readable").file_name();
            let name = name.into_string().expect("utf-8 name");
            name.ends_with(".cfg").then_some(name)
        })
        .collect();
    names.sort();
    assert_eq!(
        names,
        vec![
            "hydrodynamic.cfg",
            "jeffreys.cfg",
            "maxwell.cfg",
            "subdiffusive.cfg",
            "trap.cfg",
            "viscous.cfg"
        ],
        "one example configuration per medium"
    );

    let dir = tempdir();
    for name in names {
        let path = config_dir.join(&name);
        let text = fs::read_to_string(&path).expect("example must be readable");
        let parsed = parse_config(&text).expect("example must parse");
        let ParsedConfig::Dimensional {
            spec,
            sim: Some(sim),
        } = parsed
        else {
            panic!("example {name} must carry a full simulation block");
        };
        let cfg = SimConfig::new(spec, sim.dt, sim.n_steps, sim.n_traj, sim.seed)
            .expect("example simulation keys must be valid");
        let report = stability_report(&cfg).expect("stability must be computable");
        assert_eq!(
            report.verdict,
            StabilityVerdict::Pass,
            "example {name} must sit in the passing stability band: {:?}",
            report.products
        );

        let out = dir.path().join(format!("{name}.csv"));
        let res = run(&[
            "spectrum",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            res.status.success(),
            "spectrum must accept example {name}: {}",
            stderr_of(&res)
        );
        let (header, rows) = read_spectrum_csv(&out).expect("CSV must parse");
        assert_eq!(header, "omega_rad_s,psd_si", "examples are dimensional");
        assert!(
            rows.iter().all(|(w, s)| w.is_finite() && s.is_finite() && *s > 0.0),
            "example {name} must yield a finite positive spectrum"
        );
    }
}

#[test]
fn help_and_version_exit_cleanly() {
    let res = run(&["--version"]);
    assert!(res.status.success(), "--version is not an error");
    assert!(
        stdout_of(&res).contains(env!("CARGO_PKG_VERSION")),
        "--version must print the crate version"
    );
    let res = run(&["--help"]);
    assert!(res.status.success(), "--help is not an error");
    for sub in ["spectrum", "figures", "simulate", "verify"] {
        assert!(
            stdout_of(&res).contains(sub),
            "--help must list the `{sub}` subcommand"
        );
    }
}
