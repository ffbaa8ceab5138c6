//! The self-verification suite run by `ea-bounds verify`.

use rand::Rng;
use serde::Serialize;

use crate::bounds::{lower_bound, substream, upper_constant, BoundValue, CouplingDistribution, DiscreteDistribution, Method};
use crate::classical::{cell_ground_state, frustration_from_mask, gauge_mask, gauge_transform, sign_pattern_census, Couplings, SignPatternSolver};
use crate::error::{Error, Result};
use crate::exact_gs::{exhaustive_ground_state, row_dp_ground_state, verify_cell_inequality, LatticeInstance};
use crate::lattice::{make_cell, make_lattice, BondGraph, Boundary, CellGeometry};
use crate::quantum::{xz_gauge_check, Anisotropy};
use crate::rational::{integer, ratio};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Lattice samples for the cell-inequality check.
    pub samples: usize,
    /// Random draws per boundary for the row-solver oracle check.
    pub oracle_draws: usize,
    /// Random square patterns for the quantum gauge check.
    pub quantum_patterns: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 100,
            oracle_draws: 50,
            quantum_patterns: 20,
        }
    }
}

fn record(name: &'static str, outcome: Result<(bool, String)>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Every `+-1` pattern of the cube has an even number of frustrated faces.
pub fn cube_parity() -> Result<(bool, String)> {
    let census = sign_pattern_census(&CellGeometry::cube());
    let total: u64 = census.by_frustrated_count.values().sum();
    let even = census.by_frustrated_count.keys().all(|k| k % 2 == 0);
    let counts: Vec<String> = census.by_frustrated_count.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    Ok((
        census.parity_violations == 0 && even && total == 4096,
        format!("{} patterns, frustrated faces {{{}}}, {} violations", total, counts.join(", "), census.parity_violations),
    ))
}

/// Gauge transforms at every site leave the exact cell ground energy and the
/// frustration signature unchanged, for every `+-1` pattern.
pub fn classical_gauge(cell: &CellGeometry) -> Result<(bool, String)> {
    let solver = SignPatternSolver::new(cell);
    let one = integer(1);
    let bonds = cell.bond_count();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for mask in 0..1u64 << bonds {
        let couplings = Couplings::from_sign_mask(mask, bonds, &one);
        let energy = cell_ground_state(cell, &couplings)?.energy;
        let signature = frustration_from_mask(cell, mask);
        for site in 0..cell.site_count() {
            let gauged = gauge_transform(cell, &couplings, site)?;
            let gauged_mask = mask ^ gauge_mask(cell, site);
            let same = cell_ground_state(cell, &gauged)?.energy == energy
                && integer(solver.ground_energy(gauged_mask)) == energy
                && frustration_from_mask(cell, gauged_mask) == signature;
            failures += u64::from(!same);
            checked += 1;
        }
    }
    Ok((failures == 0, format!("{checked} pattern-site pairs, {failures} mismatches")))
}

/// Spectra of the XZ square are invariant under the site gauge.
pub fn quantum_gauge(config: &SuiteConfig) -> Result<(bool, String)> {
    let square = CellGeometry::square();
    let mut worst = 0.0f64;
    for i in 0..config.quantum_patterns {
        let mut rng = substream(config.seed, i as u64);
        let mask = rng.random_range(0..16u64);
        let site = rng.random_range(0..4usize);
        let alpha_x = rng.random_range(0.0..2.0);
        let couplings = Couplings::from_sign_mask(mask, 4, &integer(1));
        let check = xz_gauge_check(&square, &couplings, Anisotropy::xz(alpha_x), site)?;
        worst = worst.max(check.spectrum_deviation);
    }
    Ok((
        worst <= 1e-9,
        format!("{} random patterns, largest eigenvalue shift {worst:.3e}", config.quantum_patterns),
    ))
}

pub fn cell_inequality(config: &SuiteConfig) -> Result<(bool, String)> {
    let bern = DiscreteDistribution::bernoulli(integer(1))?;
    match verify_cell_inequality(2, 4, &bern, config.seed, config.samples) {
        Ok(report) => Ok((
            report.holding == config.samples,
            format!(
                "{}/{} hold on periodic 4x4, gap per site min {} mean {} max {}",
                report.holding,
                report.samples,
                report.min_gap_per_site,
                report.mean_gap_per_site,
                report.max_gap_per_site
            ),
        )),
        Err(e @ Error::CellInequalityViolated { .. }) => Ok((false, e.to_string())),
        Err(e) => Err(e),
    }
}

/// Row solver against Gray-code enumeration on 4x4 lattices.
pub fn solver_oracle(config: &SuiteConfig) -> Result<(bool, String)> {
    let bern = DiscreteDistribution::bernoulli(integer(1))?;
    let mut mismatches = 0;
    for boundary in [Boundary::Free, Boundary::Periodic] {
        let lattice = make_lattice(2, &[4, 4], boundary)?;
        for i in 0..config.oracle_draws as u64 {
            let instance = LatticeInstance::sample(lattice.clone(), &bern, config.seed, i);
            if row_dp_ground_state(&instance)?.energy != exhaustive_ground_state(&instance)?.energy {
                mismatches += 1;
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{} draws per boundary, {mismatches} mismatches", config.oracle_draws),
    ))
}

/// Exact bounds, misfits and the literature sandwich.
pub fn exact_bounds() -> Result<(bool, String)> {
    let bern = CouplingDistribution::bernoulli(integer(1))?;
    let mut details = Vec::new();
    let mut ok = true;
    let mut previous = None;
    for (d, expected, misfit) in [(2, ratio(-3, 2), ratio(1, 4)), (3, ratio(-141, 64), ratio(17, 64))] {
        let report = lower_bound(&make_cell(d)?, &bern, Method::Exact)?;
        let BoundValue::Exact { lower_bound, misfit_bound, .. } = &report.value else {
            return Ok((false, "exact method returned an estimate".into()));
        };
        let upper = upper_constant(d)?.as_f64();
        let lb = report.lower_bound_f64();
        ok &= *lower_bound == expected && misfit_bound.as_ref() == Some(&misfit) && lb <= upper;
        if let Some(p) = previous {
            ok &= lb <= p;
        }
        previous = Some(lb);
        details.push(format!("d={d}: {lower_bound} <= {upper}"));
    }
    Ok((ok, details.join("; ")))
}

/// Runs every check in a fixed order.
pub fn run_suite(config: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        record("exact bounds and sandwich", exact_bounds()),
        record("cube parity census", cube_parity()),
        record("gauge invariance (square)", classical_gauge(&CellGeometry::square())),
        record("gauge invariance (cube)", classical_gauge(&CellGeometry::cube())),
        record("quantum XZ gauge invariance", quantum_gauge(config)),
        record("cell inequality per sample", cell_inequality(config)),
        record("row solver vs enumeration", solver_oracle(config)),
    ]
}

pub fn render_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{} {:<width$}  {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let config = SuiteConfig {
            seed: 5,
            samples: 10,
            oracle_draws: 5,
            quantum_patterns: 4,
        };
        let results = run_suite(&config);
        assert!(results.iter().all(|r| r.passed), "{}", render_table(&results));
    }
}
