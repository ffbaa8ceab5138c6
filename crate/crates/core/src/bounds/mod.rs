//! Disorder averages of cell ground energies and the resulting lower bound
//! on the ground-state energy per site.
//!
//! With periodic boundaries the lattice Hamiltonian is the sum over all
//! sites `n` of `c_d` times the cell Hamiltonian anchored at `n`. The lattice
//! ground energy is at least the sum of cell ground energies, and for
//! i.i.d. couplings each cell contributes the same average, so
//!
//! ```text
//! Av(E_N) / N >= c_d * Av(E_cell)
//! ```
//!
//! For discrete laws `Av(E_cell)` is an exact finite sum computed here with
//! integer arithmetic. Continuous laws only get a Monte Carlo estimate,
//! which is labelled as such.

pub mod comparison;
pub mod distribution;
mod report;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use comparison::{comparison_table, upper_constant, ComparisonConstant, ConstantRole};
pub use distribution::{parse_table, ContinuousLaw, CouplingDistribution, CouplingSampler, DiscreteDistribution};
pub use report::{BoundMethod, BoundReport, BoundValue};

use crate::classical::{cell_ground_energy_f64, cell_ground_state, sign_pattern_census, Couplings, SignPatternSolver};
use crate::error::{Error, Result};
use crate::lattice::{BondGraph, CellGeometry};
use crate::rational::{fraction_string, integer, scale_to_integers, to_decimal, to_f64, Rational, DEFAULT_PRECISION};

/// Largest number of coupling configurations an exact average may visit.
pub const ENUMERATION_GUARD: u64 = 100_000_000;

const CHUNK: u64 = 1 << 12;

/// Deterministic random stream for task `index` under a run seed.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Number of coupling configurations, checked against [`ENUMERATION_GUARD`].
pub fn configuration_count(atoms: usize, bonds: usize) -> Result<u64> {
    let total = (atoms as u128).checked_pow(bonds as u32);
    match total {
        Some(t) if t <= ENUMERATION_GUARD as u128 => Ok(t as u64),
        _ => Err(Error::EnumerationTooLarge {
            configurations: format!("{atoms}^{bonds}"),
            limit: ENUMERATION_GUARD,
        }),
    }
}

/// Sum of the ground energies (in units of `J`) over all `2^bonds` sign
/// patterns. For the square this is `-48`, for the cube `-36096`.
pub fn bernoulli_energy_sum<G: BondGraph>(graph: &G) -> Result<i64> {
    let patterns = configuration_count(2, graph.bond_count())?;
    let solver = SignPatternSolver::new(graph);
    let chunks = patterns.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(patterns);
            (c * CHUNK..end).map(|m| solver.ground_energy(m)).sum::<i64>()
        })
        .collect::<Vec<i64>>()
        .into_iter()
        .sum())
}

/// Exact average of the cell ground energy over the product law.
pub fn exact_cell_average<G: BondGraph>(graph: &G, dist: &DiscreteDistribution) -> Result<Rational> {
    let bonds = graph.bond_count();
    if let Some(scale) = dist.symmetric_sign_scale() {
        let sum = bernoulli_energy_sum(graph)?;
        return Ok(scale * Rational::new(BigInt::from(sum), BigInt::one() << bonds));
    }
    let atoms = dist.atoms();
    let total = configuration_count(atoms.len(), bonds)?;
    let values: Vec<Rational> = atoms.iter().map(|a| a.value.clone()).collect();
    let (weights, q) = dist.integer_weights();
    let norm = num_traits::pow(q, bonds);

    let Some(scaled) = scale_to_integers(&values, bonds) else {
        return rational_cell_average(graph, dist, total);
    };
    let solver = SignPatternSolver::new(graph);
    let small_weights: Option<Vec<u64>> = weights.iter().map(|w| w.to_u64()).collect();
    let radix = atoms.len() as u64;

    let energy_of = |mut index: u64, couplings: &mut Vec<i64>, w: &mut Vec<usize>| {
        couplings.clear();
        w.clear();
        for _ in 0..bonds {
            let k = (index % radix) as usize;
            index /= radix;
            couplings.push(scaled.numerators[k]);
            w.push(k);
        }
        integer_ground_energy(&solver, couplings)
    };

    let chunks = total.div_ceil(CHUNK);
    let fast: Option<Vec<i128>> = small_weights.as_ref().and_then(|sw| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut couplings = Vec::with_capacity(bonds);
                let mut picks = Vec::with_capacity(bonds);
                let mut acc: i128 = 0;
                for index in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let e = energy_of(index, &mut couplings, &mut picks);
                    let mut weight: i128 = 1;
                    for &k in &picks {
                        weight = weight.checked_mul(sw[k] as i128)?;
                    }
                    acc = acc.checked_add(weight.checked_mul(e as i128)?)?;
                }
                Some(acc)
            })
            .collect::<Option<Vec<i128>>>()
    });
    let weighted: BigInt = match fast.and_then(|parts| parts.into_iter().try_fold(0i128, |a, p| a.checked_add(p))) {
        Some(sum) => BigInt::from(sum),
        None => (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut couplings = Vec::with_capacity(bonds);
                let mut picks = Vec::with_capacity(bonds);
                let mut acc = BigInt::zero();
                for index in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let e = energy_of(index, &mut couplings, &mut picks);
                    let weight = picks.iter().fold(BigInt::one(), |w, &k| w * &weights[k]);
                    acc += weight * e;
                }
                acc
            })
            .collect::<Vec<BigInt>>()
            .into_iter()
            .sum(),
    };
    Ok(Rational::new(weighted, norm * BigInt::from(scaled.denominator)))
}

/// Minimum over spin configurations for integer couplings, via the
/// antiparallel masks of the solver.
fn integer_ground_energy(solver: &SignPatternSolver, couplings: &[i64]) -> i64 {
    let total: i64 = couplings.iter().sum();
    solver
        .antiparallel_masks()
        .iter()
        .map(|&d| {
            let mut flipped = 0i64;
            let mut bits = d;
            while bits != 0 {
                flipped += couplings[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            total - 2 * flipped
        })
        .min()
        .unwrap_or(0)
}

fn rational_cell_average<G: BondGraph>(graph: &G, dist: &DiscreteDistribution, total: u64) -> Result<Rational> {
    let atoms = dist.atoms();
    let radix = atoms.len() as u64;
    let mut acc = Rational::zero();
    for mut index in 0..total {
        let mut values = Vec::with_capacity(graph.bond_count());
        let mut weight = Rational::one();
        for _ in 0..graph.bond_count() {
            let a = &atoms[(index % radix) as usize];
            index /= radix;
            values.push(a.value.clone());
            weight *= &a.probability;
        }
        acc += weight * cell_ground_state(graph, &Couplings::new(values))?.energy;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Mean and standard error of a sample, summed in index order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo estimate of the cell average. Sample `i` draws all of its
/// couplings from substream `i` of `seed`, so results do not depend on the
/// thread count.
pub fn mc_cell_average<G: BondGraph + Sync>(
    graph: &G,
    dist: &CouplingDistribution,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {samples}")));
    }
    let sampler = dist.sampler()?;
    let bonds = graph.bond_count();
    let energies = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            let couplings: Vec<f64> = (0..bonds).map(|_| sampler.draw(&mut rng)).collect();
            cell_ground_energy_f64(graph, &couplings)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_and_stderr(&energies);
    Ok(McEstimate { mean, stderr, samples })
}

/// How the cell average is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// `(|E_id| - |E_0|) / |E_id|` with `E_0` replaced by the lower bound, which
/// lower-bounds the misfit parameter.
pub fn misfit_lower_bound(lower_bound: &Rational, ideal_per_site: &Rational) -> Result<Rational> {
    if ideal_per_site.is_zero() {
        return Err(Error::InvalidParameter("reference energy per site is zero".into()));
    }
    let ideal = ideal_per_site.abs();
    Ok((&ideal - lower_bound.abs()) / ideal)
}

/// Unfrustrated reference energy per site: every one of the `d` bonds per
/// site satisfied, `-d * Av|J|`.
pub fn ideal_energy_per_site(dimension: usize, dist: &DiscreteDistribution) -> Rational {
    -(integer(dimension as i64) * dist.abs_mean())
}

/// The cell lower bound with its supporting data.
pub fn lower_bound(geometry: &CellGeometry, dist: &CouplingDistribution, method: Method) -> Result<BoundReport> {
    let dimension = geometry.dimension();
    let c = geometry.multiplicity_factor().clone();
    let comparison = comparison_table(dimension)?.to_vec();
    let mut notes = Vec::new();
    if !dist.is_centered() {
        notes.push("assumption violated: couplings are not centered; the bound is outside the zero-mean setting".to_string());
    }
    let value = match method {
        Method::Exact => {
            let discrete = dist.as_discrete().ok_or(Error::NotDiscrete)?;
            let cell_average = exact_cell_average(geometry, discrete)?;
            let lower = &c * &cell_average;
            let scale = discrete.symmetric_sign_scale();
            let integer_sum = match &scale {
                Some(_) => Some(bernoulli_energy_sum(geometry)?),
                None => None,
            };
            let configurations = (discrete.atoms().len() as u64).pow(geometry.bond_count() as u32);
            // c_d * J * sum over 2^bonds patterns, kept unreduced
            let patterns = BigInt::one() << geometry.bond_count();
            let unreduced = match (&scale, integer_sum) {
                (Some(j), Some(sum)) => {
                    let scaled_sum = Rational::from_integer(sum.into()) * &c * j;
                    scaled_sum
                        .is_integer()
                        .then(|| (j.clone(), sum, format!("{}/{patterns}", scaled_sum.numer())))
                }
                _ => None,
            };
            let enumeration_form = unreduced.as_ref().map(|(j, sum, fraction)| {
                let prefix = if j.is_one() {
                    String::new()
                } else {
                    format!("({}) * ", fraction_string(j))
                };
                format!("{prefix}({}) * ({sum}/{patterns}) = {fraction}", fraction_string(&c))
            });
            if let (3, Some((j, _, fraction))) = (dimension, &unreduced) {
                if j.is_one() {
                    notes.push(format!(
                        "the literature rendering -2.204... of this bound does not match the exact value {fraction} = {}; it appears to be rounded inconsistently",
                        to_decimal(&lower, DEFAULT_PRECISION)
                    ));
                }
            }
            let ideal = ideal_energy_per_site(dimension, discrete);
            let misfit_bound = (!ideal.is_zero()).then(|| misfit_lower_bound(&lower, &ideal)).transpose()?;
            BoundValue::Exact {
                cell_average,
                lower_bound: lower,
                integer_sum,
                configurations,
                enumeration_form,
                misfit_bound,
                ideal_per_site: ideal,
            }
        }
        Method::MonteCarlo { samples, seed } => {
            let est = mc_cell_average(geometry, dist, samples, seed)?;
            let cf = to_f64(&c);
            let abs_mean = match dist {
                CouplingDistribution::Discrete(d) => to_f64(&d.abs_mean()),
                CouplingDistribution::Continuous(law) => law.abs_mean(),
            };
            let ideal = -(dimension as f64) * abs_mean;
            let lower = cf * est.mean;
            notes.push("estimate, not a rigorous bound: the cell average is a Monte Carlo mean with statistical error".to_string());
            BoundValue::Estimate {
                cell_average: est.mean,
                cell_stderr: est.stderr,
                lower_bound: lower,
                stderr: cf * est.stderr,
                samples,
                seed,
                misfit_estimate: (ideal != 0.0).then(|| (ideal.abs() - lower.abs()) / ideal.abs()),
            }
        }
    };
    let census = match (&value, dist.as_discrete().and_then(|d| d.symmetric_sign_scale())) {
        (BoundValue::Exact { .. }, Some(_)) => Some(sign_pattern_census(geometry)),
        _ => None,
    };
    let mut report = BoundReport {
        dimension,
        distribution: dist.describe(),
        multiplicity_factor: c,
        method: match method {
            Method::Exact => BoundMethod::ExactEnumeration,
            Method::MonteCarlo { .. } => BoundMethod::MonteCarlo,
        },
        value,
        decimal: String::new(),
        precision: DEFAULT_PRECISION,
        comparison,
        census,
        notes,
        assumption_violated: !dist.is_centered(),
    };
    report.set_precision(DEFAULT_PRECISION);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn bern(j: Rational) -> DiscreteDistribution {
        DiscreteDistribution::bernoulli(j).unwrap()
    }

    #[test]
    fn cell_averages() {
        let sq = CellGeometry::square();
        assert_eq!(exact_cell_average(&sq, &bern(integer(1))).unwrap(), integer(-3));
        let cube = CellGeometry::cube();
        assert_eq!(exact_cell_average(&cube, &bern(integer(1))).unwrap(), ratio(-36096, 4096));
        assert_eq!(bernoulli_energy_sum(&cube).unwrap(), -36096);
        let point = DiscreteDistribution::point_mass(integer(1)).unwrap();
        assert_eq!(exact_cell_average(&sq, &point).unwrap(), integer(-4));
    }

    #[test]
    fn generic_path_matches_bernoulli_fast_path() {
        // Same law, but written with three atoms so the sign-scale shortcut is skipped.
        let d = DiscreteDistribution::new(vec![
            (integer(1), ratio(1, 4)),
            (integer(1), ratio(1, 4)),
            (integer(-1), ratio(1, 2)),
        ])
        .unwrap();
        assert_eq!(d.symmetric_sign_scale(), None);
        let sq = CellGeometry::square();
        assert_eq!(exact_cell_average(&sq, &d).unwrap(), integer(-3));
        let cube = CellGeometry::cube();
        let two = DiscreteDistribution::new(vec![(integer(-1), ratio(1, 2)), (integer(1), ratio(1, 2))])
            .unwrap()
            .with_label("pm1");
        assert_eq!(exact_cell_average(&cube, &two).unwrap(), ratio(-36096, 4096));
    }

    #[test]
    fn rational_path_matches_integer_path() {
        let sq = CellGeometry::square();
        let d = DiscreteDistribution::new(vec![
            (ratio(2, 3), ratio(1, 3)),
            (ratio(-1, 3), ratio(2, 3)),
        ])
        .unwrap();
        let fast = exact_cell_average(&sq, &d).unwrap();
        let slow = rational_cell_average(&sq, &d, 16).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn enumeration_guard() {
        let cube = CellGeometry::cube();
        let atoms: Vec<(Rational, Rational)> = (-5..=5).map(|v| (integer(v), ratio(1, 11))).collect();
        let d = DiscreteDistribution::new(atoms).unwrap();
        assert!(matches!(exact_cell_average(&cube, &d), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn misfit_examples() {
        assert_eq!(misfit_lower_bound(&ratio(-3, 2), &integer(-2)).unwrap(), ratio(1, 4));
        assert_eq!(misfit_lower_bound(&ratio(-9024, 4096), &integer(-3)).unwrap(), ratio(17, 64));
        assert_eq!(misfit_lower_bound(&integer(-2), &integer(-2)).unwrap(), integer(0));
        assert!(misfit_lower_bound(&integer(-2), &integer(0)).is_err());
    }

    #[test]
    fn bound_reports() {
        let d = CouplingDistribution::bernoulli(integer(1)).unwrap();
        let r2 = lower_bound(&CellGeometry::square(), &d, Method::Exact).unwrap();
        assert_eq!(r2.exact_lower_bound(), Some(&ratio(-3, 2)));
        assert_eq!(r2.decimal, "-1.5");
        let r3 = lower_bound(&CellGeometry::cube(), &d, Method::Exact).unwrap();
        assert_eq!(r3.exact_lower_bound(), Some(&ratio(-9024, 4096)));
        assert_eq!(r3.decimal, "-2.203125");
        match &r3.value {
            BoundValue::Exact { enumeration_form, integer_sum, misfit_bound, .. } => {
                assert_eq!(enumeration_form.as_deref(), Some("(1/4) * (-36096/4096) = -9024/4096"));
                assert_eq!(*integer_sum, Some(-36096));
                assert_eq!(misfit_bound.as_ref(), Some(&ratio(17, 64)));
            }
            _ => panic!("exact report expected"),
        }
        assert!(r3.notes.iter().any(|n| n.contains("-2.204")));
        let p = CouplingDistribution::Discrete(DiscreteDistribution::point_mass(integer(1)).unwrap());
        let rp = lower_bound(&CellGeometry::square(), &p, Method::Exact).unwrap();
        assert_eq!(rp.exact_lower_bound(), Some(&integer(-2)));
        assert!(rp.assumption_violated);
    }

    #[test]
    fn exact_method_needs_discrete_law() {
        let g = CouplingDistribution::gaussian(1.0).unwrap();
        assert!(matches!(
            lower_bound(&CellGeometry::square(), &g, Method::Exact),
            Err(Error::NotDiscrete)
        ));
    }

    #[test]
    fn mc_point_mass_cube() {
        let p = CouplingDistribution::Discrete(DiscreteDistribution::point_mass(integer(1)).unwrap());
        let est = mc_cell_average(&CellGeometry::cube(), &p, 50, 1).unwrap();
        assert_eq!((est.mean, est.stderr), (-12.0, 0.0));
        assert!(mc_cell_average(&CellGeometry::cube(), &p, 1, 1).is_err());
    }

    #[test]
    fn mc_is_reproducible() {
        let g = CouplingDistribution::gaussian(1.0).unwrap();
        let a = mc_cell_average(&CellGeometry::square(), &g, 500, 9).unwrap();
        let b = mc_cell_average(&CellGeometry::square(), &g, 500, 9).unwrap();
        assert_eq!(a, b);
        let c = mc_cell_average(&CellGeometry::square(), &g, 500, 10).unwrap();
        assert_ne!(a.mean, c.mean);
    }
}
