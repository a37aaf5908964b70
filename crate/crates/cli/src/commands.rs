//! Subcommand implementations.

use std::io::Write;
use std::path::Path;

use sphere_lattice::bench::{
    derive_seed, fit_power_law, random_baseline_cell, rmse_max, run_sweep, BenchFamily,
    ErrorStats, RngStream, TrialPlan,
};
use sphere_lattice::estimate::{effective_point_count, estimate_cap_union_area};
use sphere_lattice::lattice::{
    generate_fibonacci, generate_latlon, latlon_point_count, spiral_point, Chirality, Lattice,
    LatticeFamily,
};

use crate::format::fmt_float;
use crate::tables::{
    create_output, finish_output, read_caps_csv, read_sweep_csv, write_lattice_csv,
    write_sweep_csv, ESTIMATE_HEADER, FIT_HEADER, SPIRAL_HEADER,
};
use crate::{CliError, CliResult};

/// Which lattice a subcommand operates on.
#[derive(Debug, Clone, Copy)]
pub struct LatticeSpec {
    pub family: LatticeFamily,
    pub param: u64,
    pub chirality: Chirality,
}

impl LatticeSpec {
    pub fn build(&self) -> CliResult<Lattice> {
        match self.family {
            LatticeFamily::LatLon => generate_latlon(self.param),
            LatticeFamily::Fibonacci => generate_fibonacci(self.param, self.chirality),
        }
        .map_err(CliError::usage)
    }
}

/// Write a lattice as `index,lat_deg,lon_deg,weight` rows in lattice order.
pub fn cmd_gen_lattice(spec: &LatticeSpec, out: &Path) -> CliResult<()> {
    write_lattice_csv(&spec.build()?, out)
}

/// Trace the continuous generative spiral as a `t,lat_deg,lon_deg` polyline.
///
/// `samples_per_turn` is the number of samples per unit index step (one
/// golden-angle turn per step); even values make the polyline pass through
/// the lattice points exactly.
pub fn cmd_spiral(n: u64, chirality: Chirality, samples_per_turn: u32, out: &Path) -> CliResult<()> {
    if samples_per_turn < 2 {
        return Err(CliError::usage("--samples-per-turn must be >= 2"));
    }
    let spt = samples_per_turn as u64;
    let steps = spt
        .checked_mul(2 * n + 1)
        .ok_or_else(|| CliError::usage("spiral is too large to sample"))?;
    let start = -(n as f64) - 0.5;

    let mut writer = create_output(out)?;
    let write = |writer: &mut dyn Write| -> std::io::Result<()> {
        writeln!(writer, "{SPIRAL_HEADER}")?;
        for m in 0..=steps {
            // Exact at both endpoints and at every integer index.
            let t = start + m as f64 / spt as f64;
            let p = spiral_point(t, n, chirality).expect("t stays in range by construction");
            writeln!(
                writer,
                "{},{},{}",
                fmt_float(t),
                fmt_float(p.lat_deg()),
                fmt_float(p.lon_deg())
            )?;
        }
        Ok(())
    };
    write(&mut writer).map_err(|e| CliError::data(format!("cannot write {}: {e}", out.display())))?;
    finish_output(writer, out)
}

/// Estimate the area of a union of caps read from `caps_path`.
pub fn cmd_estimate(spec: &LatticeSpec, caps_path: &Path, out: &Path) -> CliResult<()> {
    let lattice = spec.build()?;
    let caps = read_caps_csv(caps_path)?;
    let estimate = estimate_cap_union_area(&lattice, &caps).map_err(CliError::usage)?;

    let mut writer = create_output(out)?;
    let write = |writer: &mut dyn Write| -> std::io::Result<()> {
        writeln!(writer, "{ESTIMATE_HEADER}")?;
        writeln!(
            writer,
            "{},{},{},{},{}",
            caps.len(),
            lattice.len(),
            fmt_float(estimate.weight_total),
            fmt_float(estimate.fraction),
            estimate.points_inside
        )?;
        Ok(())
    };
    write(&mut writer).map_err(|e| CliError::data(format!("cannot write {}: {e}", out.display())))?;
    finish_output(writer, out)
}

/// Nearest achievable latitude-longitude parameter for a target point count;
/// ties break toward the larger lattice.
pub fn nearest_latlon_k(target: u64) -> u64 {
    let guess = (((target.max(2) - 2) as f64 / 2.0).sqrt() as u64).max(1);
    let mut best_k = 1;
    let mut best_diff = u64::MAX;
    for k in guess.saturating_sub(2)..=guess + 2 {
        if k < 1 {
            continue;
        }
        let Ok(p) = latlon_point_count(k) else { continue };
        let diff = p.abs_diff(target);
        // `<=` lets the larger lattice win exact ties.
        if diff <= best_diff {
            best_diff = diff;
            best_k = k;
        }
    }
    best_k
}

/// Nearest odd point count for the Fibonacci lattice, as the parameter N;
/// even targets are equidistant from two odd counts and round up.
pub fn nearest_fibonacci_n(target: u64) -> u64 {
    if target % 2 == 1 {
        (target - 1) / 2
    } else {
        target / 2
    }
}

/// Evenly spaced cap-fraction grid `0.5 * i / count` for `i = 1..=count`.
pub fn fraction_grid(count: u32) -> Vec<f64> {
    (1..=count).map(|i| 0.5 * i as f64 / count as f64).collect()
}

/// Parse the `--fractions` argument: either a grid size (`40`) or an
/// explicit ascending comma list (`0.1,0.25,0.5`), each value in (0, 0.5].
pub fn parse_fractions(arg: &str) -> CliResult<Vec<f64>> {
    let arg = arg.trim();
    if !arg.contains(',') && !arg.contains('.') {
        let count: u32 = arg
            .parse()
            .map_err(|_| CliError::usage(format!("--fractions: `{arg}` is not a grid size")))?;
        if count == 0 {
            return Err(CliError::usage("--fractions: grid size must be >= 1"));
        }
        return Ok(fraction_grid(count));
    }
    let fractions: Vec<f64> = arg
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("--fractions: `{tok}` is not a number")))
        })
        .collect::<CliResult<_>>()?;
    Ok(fractions)
}

fn family_tag(family: BenchFamily) -> u64 {
    match family {
        BenchFamily::LatLon => 0,
        BenchFamily::Fibonacci => 1,
        BenchFamily::Random => 2,
    }
}

/// Run the Monte Carlo sweep: every family at every target size, measuring
/// every cap fraction with `trials` random caps.
///
/// Targets are mapped to the nearest size each family can realize (the CSV
/// reports the achieved P). Each configuration derives its own seed from
/// `(seed, family, parameter)` and each cap fraction its own substream, so
/// the output is byte-identical for a fixed seed on any thread count.
pub fn cmd_benchmark(
    families: &[BenchFamily],
    target_points: &[u64],
    fractions: &[f64],
    trials: u64,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    if families.is_empty() {
        return Err(CliError::usage("--family: at least one family is required"));
    }
    if target_points.is_empty() {
        return Err(CliError::usage("--points: at least one target size is required"));
    }

    let mut rows: Vec<ErrorStats> = Vec::new();
    for &family in families {
        for &target in target_points {
            match family {
                BenchFamily::LatLon | BenchFamily::Fibonacci => {
                    let (lattice_family, param) = match family {
                        BenchFamily::LatLon => (LatticeFamily::LatLon, nearest_latlon_k(target)),
                        _ => (LatticeFamily::Fibonacci, nearest_fibonacci_n(target)),
                    };
                    let config_seed = derive_seed(seed, family_tag(family), param);
                    let plan = TrialPlan::new(
                        lattice_family,
                        param,
                        fractions.to_vec(),
                        trials,
                        config_seed,
                    )
                    .map_err(CliError::usage)?;
                    rows.extend(run_sweep(&plan).map_err(CliError::usage)?);
                }
                BenchFamily::Random => {
                    if target < 1 {
                        return Err(CliError::usage("--points: random baseline needs P >= 1"));
                    }
                    let config_seed = derive_seed(seed, family_tag(family), target);
                    for (cell, &fraction) in fractions.iter().enumerate() {
                        let stream = RngStream::new(config_seed, cell as u64);
                        let stats = random_baseline_cell(target, fraction, trials, &stream)
                            .map_err(CliError::usage)?;
                        rows.push(stats);
                    }
                }
            }
        }
    }
    write_sweep_csv(&rows, out)
}

struct FamilyFits {
    family: BenchFamily,
    against_points: sphere_lattice::bench::PowerLawFit,
    against_effective: sphere_lattice::bench::PowerLawFit,
}

/// Fit `rmse_max ~ k P^a` per family from a sweep CSV, against both the raw
/// and the effective point count, and report the latlon/fibonacci
/// coefficient ratio.
pub fn cmd_fit(sweep_path: &Path, out: &Path) -> CliResult<()> {
    let rows = read_sweep_csv(sweep_path)?;
    if rows.is_empty() {
        return Err(CliError::data(format!("{}: sweep is empty", sweep_path.display())));
    }

    // Group cells into configurations keyed by (family, P), keeping
    // first-seen family order and sorting configurations by P.
    let mut families: Vec<BenchFamily> = Vec::new();
    for row in &rows {
        if !families.contains(&row.family) {
            families.push(row.family);
        }
    }

    let mut fits: Vec<FamilyFits> = Vec::new();
    for &family in &families {
        let mut configs: Vec<(u64, f64, Vec<ErrorStats>)> = Vec::new();
        for row in rows.iter().filter(|r| r.family == family) {
            match configs.iter_mut().find(|(p, _, _)| *p == row.points) {
                Some((_, _, cells)) => cells.push(*row),
                None => configs.push((row.points, row.effective_points, vec![*row])),
            }
        }
        configs.sort_by_key(|(p, _, _)| *p);
        if configs.len() < 2 {
            return Err(CliError::data(format!(
                "{}: family {family} has {} configuration(s); need at least 2 to fit",
                sweep_path.display(),
                configs.len()
            )));
        }

        let mut against_points = Vec::new();
        let mut against_effective = Vec::new();
        for (p, effective, cells) in &configs {
            let (_, peak) = rmse_max(cells).map_err(|e| CliError::data(e.to_string()))?;
            against_points.push((*p as f64, peak));
            against_effective.push((*effective, peak));
        }
        let map_fit =
            |e: sphere_lattice::Error| CliError::data(format!("family {family}: {e}"));
        fits.push(FamilyFits {
            family,
            against_points: fit_power_law(&against_points).map_err(map_fit)?,
            against_effective: fit_power_law(&against_effective).map_err(map_fit)?,
        });
    }

    let mut writer = create_output(out)?;
    let write = |writer: &mut dyn Write| -> std::io::Result<()> {
        writeln!(writer, "{FIT_HEADER}")?;
        for f in &fits {
            writeln!(
                writer,
                "{},P,{},{},{}",
                f.family,
                fmt_float(f.against_points.coefficient),
                fmt_float(f.against_points.exponent),
                fmt_float(f.against_points.residual)
            )?;
            writeln!(
                writer,
                "{},effective_P,{},{},{}",
                f.family,
                fmt_float(f.against_effective.coefficient),
                fmt_float(f.against_effective.exponent),
                fmt_float(f.against_effective.residual)
            )?;
        }
        let latlon = fits.iter().find(|f| f.family == BenchFamily::LatLon);
        let fibonacci = fits.iter().find(|f| f.family == BenchFamily::Fibonacci);
        if let (Some(ll), Some(fib)) = (latlon, fibonacci) {
            // Coefficient ratio rows; the a and residual columns do not
            // apply and are written as 0.
            writeln!(
                writer,
                "ratio_latlon_fibonacci,P,{},0.000000000000,0.000000000000",
                fmt_float(ll.against_points.coefficient / fib.against_points.coefficient)
            )?;
            writeln!(
                writer,
                "ratio_latlon_fibonacci,effective_P,{},0.000000000000,0.000000000000",
                fmt_float(ll.against_effective.coefficient / fib.against_effective.coefficient)
            )?;
        }
        Ok(())
    };
    write(&mut writer).map_err(|e| CliError::data(format!("cannot write {}: {e}", out.display())))?;
    finish_output(writer, out)
}

/// Convenience used by tests and downstream tooling: effective point count
/// of the lattice a spec describes.
pub fn effective_points_of(spec: &LatticeSpec) -> CliResult<f64> {
    Ok(effective_point_count(&spec.build()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_latlon_prefers_closest_then_larger() {
        // 2k(k-1)+2 around 1000: k=22 gives 926, k=23 gives 1014.
        assert_eq!(nearest_latlon_k(1000), 23);
        assert_eq!(nearest_latlon_k(926), 22);
        assert_eq!(nearest_latlon_k(101), 8); // 86 vs 114: 114 is closer
        assert_eq!(nearest_latlon_k(317), 13); // 314 vs 366
        assert_eq!(nearest_latlon_k(2), 1);
        assert_eq!(nearest_latlon_k(1), 1);
        // Exact tie 86 vs 114 at target 100: |100-86| = 14, |114-100| = 14.
        assert_eq!(nearest_latlon_k(100), 8);
    }

    #[test]
    fn nearest_fibonacci_rounds_even_targets_up() {
        assert_eq!(nearest_fibonacci_n(1000), 500); // 999 vs 1001: tie, take 1001
        assert_eq!(nearest_fibonacci_n(1001), 500);
        assert_eq!(nearest_fibonacci_n(101), 50);
        assert_eq!(nearest_fibonacci_n(0), 0);
        assert_eq!(nearest_fibonacci_n(1), 0);
    }

    #[test]
    fn fraction_grid_ends_at_half() {
        let grid = fraction_grid(40);
        assert_eq!(grid.len(), 40);
        assert_eq!(grid[0], 0.0125);
        assert_eq!(*grid.last().unwrap(), 0.5);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fractions_argument_accepts_grid_or_list() {
        assert_eq!(parse_fractions("4").unwrap(), vec![0.125, 0.25, 0.375, 0.5]);
        assert_eq!(parse_fractions("0.1,0.5").unwrap(), vec![0.1, 0.5]);
        assert_eq!(parse_fractions("0.5").unwrap(), vec![0.5]);
        assert!(parse_fractions("zero").is_err());
        assert!(parse_fractions("0").is_err());
    }
}
