//! Integration tests for the CLI commands and CSV schemas.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use sphere_lattice::estimate::estimate_area;
use sphere_lattice::geo::{cap_radius_from_fraction, Cap, GeoPoint};
use sphere_lattice::lattice::{generate_fibonacci, generate_latlon, Chirality, LatticeFamily};
use sphere_lattice_cli::commands::{
    cmd_benchmark, cmd_estimate, cmd_fit, cmd_gen_lattice, cmd_spiral, LatticeSpec,
};
use sphere_lattice::bench::BenchFamily;
use sphere_lattice_cli::tables::{read_lattice_csv, read_sweep_csv};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-lattice"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = tempfile::tempdir().unwrap().keep();
    dir.join(name)
}

fn spec(family: LatticeFamily, param: u64) -> LatticeSpec {
    LatticeSpec { family, param, chirality: Chirality::Eastward }
}

#[test]
fn gen_lattice_n0_produces_exact_bytes() {
    let out = tmp("fib0.csv");
    cmd_gen_lattice(&spec(LatticeFamily::Fibonacci, 0), &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    assert_eq!(
        content,
        "index,lat_deg,lon_deg,weight\n0,0.000000000000,0.000000000000,1.000000000000\n"
    );
}

#[test]
fn gen_lattice_latlon_k2_has_six_rows_with_zero_weight_poles() {
    let out = tmp("latlon2.csv");
    cmd_gen_lattice(&spec(LatticeFamily::LatLon, 2), &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "index,lat_deg,lon_deg,weight");
    assert!(lines[1].starts_with("0,90.000000000000,"));
    assert!(lines[1].ends_with(",0.000000000000"));
    assert!(lines[6].starts_with("5,-90.000000000000,"));
    assert!(lines[6].ends_with(",0.000000000000"));
}

#[test]
fn gen_lattice_fib_n10_has_21_rows_with_equator_middle() {
    let out = tmp("fib10.csv");
    cmd_gen_lattice(&spec(LatticeFamily::Fibonacci, 10), &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines.len(), 22);
    // Row of index i = 0 sits in the middle and is exactly the origin.
    assert_eq!(lines[11], "0,0.000000000000,0.000000000000,1.000000000000");
}

#[test]
fn lattice_csv_round_trips_estimates_bit_for_bit() {
    let caps = [
        Cap::new(GeoPoint::new(23.0, -31.0).unwrap(), 0.7).unwrap(),
        Cap::new(GeoPoint::new(-64.2, 120.9).unwrap(), 1.3).unwrap(),
        Cap::new(GeoPoint::new(5.0, 5.0).unwrap(), cap_radius_from_fraction(0.37).unwrap()).unwrap(),
    ];
    for (family, param) in [(LatticeFamily::Fibonacci, 50u64), (LatticeFamily::LatLon, 7)] {
        let out = tmp("roundtrip.csv");
        cmd_gen_lattice(&spec(family, param), &out).unwrap();
        let reloaded = read_lattice_csv(&out, family, param).unwrap();
        let original = spec(family, param).build().unwrap();
        assert_eq!(original.points(), reloaded.points());
        for cap in &caps {
            let a = estimate_area(&original, cap).unwrap();
            let b = estimate_area(&reloaded, cap).unwrap();
            assert_eq!(a.fraction.to_bits(), b.fraction.to_bits());
            assert_eq!(a.points_inside, b.points_inside);
            assert_eq!(a.weight_inside.to_bits(), b.weight_inside.to_bits());
        }
    }
}

#[test]
fn spiral_covers_poles_and_passes_through_lattice_points() {
    let n = 10u64;
    for chirality in [Chirality::Eastward, Chirality::Westward] {
        let out = tmp("spiral.csv");
        cmd_spiral(n, chirality, 10, &out).unwrap();
        let content = fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = content.lines().collect();
        assert_eq!(lines[0], "t,lat_deg,lon_deg");

        let rows: Vec<(f64, f64, f64)> = lines[1..]
            .iter()
            .map(|line| {
                let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
                (f[0], f[1], f[2])
            })
            .collect();
        assert_eq!(rows.len(), 10 * 21 + 1);

        // Endpoints reach the poles and t increases strictly.
        assert_eq!(rows.first().unwrap().1, -90.0);
        assert_eq!(rows.last().unwrap().1, 90.0);
        assert!(rows.windows(2).all(|w| w[0].0 < w[1].0));

        // Rows at integer t reproduce the lattice coordinates bit-exactly.
        let lattice = generate_fibonacci(n, chirality).unwrap();
        for wp in lattice.points() {
            let t = wp.index as f64;
            let row = rows.iter().find(|r| r.0 == t).expect("integer t sampled");
            assert_eq!(row.1.to_bits(), wp.point.lat_deg().to_bits());
            assert_eq!(row.2.to_bits(), wp.point.lon_deg().to_bits());
        }
    }
}

#[test]
fn estimate_handles_empty_and_full_caps() {
    let caps_path = tmp("caps_empty.csv");
    fs::write(&caps_path, "").unwrap();
    let out = tmp("est.csv");
    cmd_estimate(&spec(LatticeFamily::Fibonacci, 10), &caps_path, &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines[0], "n_caps,P,effective_P,fraction,points_inside");
    assert_eq!(lines[1], "0,21,21.000000000000,0.000000000000,0");

    // One full-sphere cap covers everything.
    fs::write(&caps_path, format!("0.0,0.0,{}\n", std::f64::consts::PI)).unwrap();
    cmd_estimate(&spec(LatticeFamily::Fibonacci, 10), &caps_path, &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    assert_eq!(content.lines().nth(1).unwrap(), "1,21,21.000000000000,1.000000000000,21");
}

#[test]
fn estimate_hemisphere_at_pole_matches_eleven_of_twentyone() {
    let caps_path = tmp("caps_hemi.csv");
    fs::write(
        &caps_path,
        format!("lat_deg,lon_deg,radius_rad\n90.0,0.0,{}\n", std::f64::consts::FRAC_PI_2),
    )
    .unwrap();
    let out = tmp("est.csv");
    cmd_estimate(&spec(LatticeFamily::Fibonacci, 10), &caps_path, &out).unwrap();
    let content = fs::read_to_string(&out).unwrap();
    let row = content.lines().nth(1).unwrap();
    let fraction: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(fraction, 11.0 / 21.0);
    assert!(row.ends_with(",11"));
}

#[test]
fn malformed_caps_file_reports_row_and_exits_3() {
    let caps_path = tmp("caps_bad.csv");
    fs::write(&caps_path, "10.0,20.0,0.3\n95.0,0.0,0.1\n").unwrap();
    let out = tmp("est.csv");
    let result = bin()
        .args(["estimate", "--family", "fibonacci", "--param", "10"])
        .arg("--caps")
        .arg(&caps_path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("row 2"), "stderr: {stderr}");
}

#[test]
fn missing_caps_file_exits_3() {
    let out = tmp("est.csv");
    let result = bin()
        .args(["estimate", "--family", "fibonacci", "--param", "10"])
        .args(["--caps", "/nonexistent/caps.csv"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(3));
}

#[test]
fn unknown_family_exits_2() {
    let out = tmp("x.csv");
    let result = bin()
        .args(["gen-lattice", "--family", "icosahedron", "--param", "3"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn invalid_latlon_param_exits_2() {
    let out = tmp("x.csv");
    let result = bin()
        .args(["gen-lattice", "--family", "latlon", "--param", "0"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));
}

fn run_benchmark(out: &Path, seed: u64) {
    cmd_benchmark(
        &[BenchFamily::Fibonacci, BenchFamily::LatLon, BenchFamily::Random],
        &[101, 230],
        &[0.125, 0.25, 0.375, 0.5],
        60,
        seed,
        out,
    )
    .unwrap();
}

#[test]
fn benchmark_is_reproducible_and_reports_achieved_sizes() {
    let out1 = tmp("sweep1.csv");
    let out2 = tmp("sweep2.csv");
    run_benchmark(&out1, 9);
    run_benchmark(&out2, 9);
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());

    let rows = read_sweep_csv(&out1).unwrap();
    assert_eq!(rows.len(), 3 * 2 * 4);
    // Nearest achievable sizes: fibonacci 101/231, latlon 114/226, random as given.
    let sizes: Vec<(String, u64)> =
        rows.iter().map(|r| (r.family.to_string(), r.points)).collect();
    assert!(sizes.contains(&("fibonacci".into(), 101)));
    assert!(sizes.contains(&("fibonacci".into(), 231)));
    assert!(sizes.contains(&("latlon".into(), 114)));
    assert!(sizes.contains(&("latlon".into(), 222)));
    assert!(sizes.contains(&("random".into(), 101)));
    assert!(sizes.contains(&("random".into(), 230)));
}

#[test]
fn benchmark_latlon_hemisphere_rows_are_zero() {
    let out = tmp("sweep.csv");
    run_benchmark(&out, 4);
    let content = fs::read_to_string(&out).unwrap();
    for line in content.lines().filter(|l| l.starts_with("latlon")) {
        if line.contains(",0.500000000000,") {
            let rmse = line.split(',').nth(5).unwrap();
            assert_eq!(rmse, "0.000000000000", "line: {line}");
        }
    }
}

#[test]
fn different_seeds_differ() {
    let out1 = tmp("s1.csv");
    let out2 = tmp("s2.csv");
    run_benchmark(&out1, 1);
    run_benchmark(&out2, 2);
    assert_ne!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn fit_recovers_synthetic_power_law_from_csv() {
    let sweep_path = tmp("synthetic.csv");
    let mut content = String::from("family,P,effective_P,cap_fraction,n,rmse,max_error\n");
    for &p in &[100u64, 1000, 10000] {
        let rmse_fib = 0.362 * (p as f64).powf(-0.75);
        content.push_str(&format!("fibonacci,{p},{p},0.25,100,{rmse_fib},{rmse_fib}\n"));
        let eff = 0.7 * p as f64;
        let rmse_ll = 0.505 * (p as f64).powf(-0.75);
        content.push_str(&format!("latlon,{p},{eff},0.25,100,{rmse_ll},{rmse_ll}\n"));
    }
    fs::write(&sweep_path, content).unwrap();

    let out = tmp("fit.csv");
    cmd_fit(&sweep_path, &out).unwrap();
    let fit = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = fit.lines().collect();
    assert_eq!(lines[0], "family,x_variable,k,a,residual");

    let row = |family: &str, x: &str| -> Vec<f64> {
        lines
            .iter()
            .find(|l| l.starts_with(&format!("{family},{x},")))
            .unwrap()
            .split(',')
            .skip(2)
            .map(|v| v.parse().unwrap())
            .collect()
    };
    let fib = row("fibonacci", "P");
    assert!((fib[0] - 0.362).abs() < 1e-12);
    assert!((fib[1] + 0.75).abs() < 1e-12);
    assert!(fib[2] < 1e-12);

    let ll = row("latlon", "P");
    assert!((ll[0] - 0.505).abs() < 1e-12);

    let ratio = row("ratio_latlon_fibonacci", "P");
    assert!((ratio[0] - 0.505 / 0.362).abs() < 1e-12);

    // Fitting against effective_P = 0.7 P shifts only the coefficient:
    // k P^a = k (P_eff / 0.7)^a = (k 0.7^{-a}) P_eff^a.
    let ll_eff = row("latlon", "effective_P");
    assert!((ll_eff[1] + 0.75).abs() < 1e-12);
    assert!((ll_eff[0] - 0.505 * 0.7f64.powf(0.75)).abs() < 1e-9);
}

#[test]
fn fit_rejects_single_configuration_families() {
    let sweep_path = tmp("short.csv");
    fs::write(
        &sweep_path,
        "family,P,effective_P,cap_fraction,n,rmse,max_error\n\
         fibonacci,101,101,0.25,100,0.01,0.02\n",
    )
    .unwrap();
    let out = tmp("fit.csv");
    let err = cmd_fit(&sweep_path, &out).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn benchmark_then_fit_through_binary() {
    let sweep = tmp("sweep.csv");
    let fit = tmp("fit.csv");
    let status = bin()
        .args(["benchmark", "--family", "fibonacci,latlon", "--points", "101,317"])
        .args(["--fractions", "4", "--trials", "50", "--seed", "11"])
        .arg("--out")
        .arg(&sweep)
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin().arg("fit").arg("--sweep").arg(&sweep).arg("--out").arg(&fit).status().unwrap();
    assert!(status.success());
    let content = fs::read_to_string(&fit).unwrap();
    assert!(content.contains("ratio_latlon_fibonacci,P,"));
}

#[test]
fn lattice_files_use_lf_and_utf8() {
    let out = tmp("lf.csv");
    cmd_gen_lattice(&spec(LatticeFamily::LatLon, 3), &out).unwrap();
    let bytes = fs::read(&out).unwrap();
    assert!(!bytes.contains(&b'\r'));
    assert!(std::str::from_utf8(&bytes).is_ok());
    let _ = generate_latlon(3).unwrap();
}
