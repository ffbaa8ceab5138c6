//! Exact classical ground states of finite lattices.
//!
//! Square lattices use a row transfer dynamic program over `2^W` row states;
//! small lattices of any dimension can be enumerated exhaustively with a
//! Gray code. Couplings are rescaled to a common integer grid, so every
//! energy here is exact.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{mean_and_stderr, substream, DiscreteDistribution};
use crate::classical::{cell_ground_state, Couplings};
use crate::error::{Error, Result};
use crate::lattice::{make_cover, make_lattice, BondGraph, Boundary, FiniteLattice};
use crate::rational::{integer, scale_to_integers, serialize_fraction, to_decimal, to_f64, IntegerScaled, Rational, DEFAULT_PRECISION};

/// Widest row for the transfer program with free boundaries.
pub const MAX_FREE_WIDTH: usize = 12;
/// Widest row for the transfer program with periodic boundaries.
pub const MAX_PERIODIC_WIDTH: usize = 8;
/// Largest lattice enumerated spin by spin.
pub const MAX_EXHAUSTIVE_SITES: usize = 27;

/// A lattice with one coupling per bond.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeInstance {
    lattice: FiniteLattice,
    couplings: Couplings,
    /// `(seed, sample index)` of the draw, if it was sampled.
    provenance: Option<(u64, u64)>,
}

impl LatticeInstance {
    pub fn new(lattice: FiniteLattice, couplings: Couplings) -> Result<Self> {
        if couplings.len() != lattice.bond_count() {
            return Err(Error::LengthMismatch {
                what: "couplings",
                expected: lattice.bond_count(),
                got: couplings.len(),
            });
        }
        Ok(LatticeInstance {
            lattice,
            couplings,
            provenance: None,
        })
    }

    /// Draws every bond independently from substream `index` of `seed`.
    pub fn sample(lattice: FiniteLattice, dist: &DiscreteDistribution, seed: u64, index: u64) -> Self {
        let mut rng = substream(seed, index);
        let values = (0..lattice.bond_count()).map(|_| dist.sample(&mut rng).clone()).collect();
        LatticeInstance {
            lattice,
            couplings: Couplings::new(values),
            provenance: Some((seed, index)),
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    pub fn provenance(&self) -> Option<(u64, u64)> {
        self.provenance
    }

    fn scaled(&self) -> Result<IntegerScaled> {
        scale_to_integers(self.couplings.values(), self.lattice.bond_count()).ok_or_else(|| {
            Error::InvalidParameter("couplings do not fit exact 64-bit integer arithmetic".into())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGroundState {
    pub energy: Rational,
    /// Spins `+1` / `-1` by site.
    pub argmin: Vec<i8>,
}

/// `sum_b J_b sigma_i sigma_j` over the lattice.
pub fn lattice_energy(instance: &LatticeInstance, spins: &[i8]) -> Result<Rational> {
    let n = instance.lattice.site_count();
    if spins.len() != n {
        return Err(Error::LengthMismatch {
            what: "spins",
            expected: n,
            got: spins.len(),
        });
    }
    let mut energy = Rational::zero();
    for (&(i, j), value) in instance.lattice.bonds().iter().zip(instance.couplings.values()) {
        if spins[i] == spins[j] {
            energy += value;
        } else {
            energy -= value;
        }
    }
    Ok(energy)
}

/// Checks that [`exact_ground_state`] can handle a lattice of this shape.
pub fn check_guard(dimension: usize, sides: &[usize], boundary: Boundary) -> Result<()> {
    match dimension {
        2 => {
            let (limit, name) = match boundary {
                Boundary::Free => (MAX_FREE_WIDTH, "free"),
                Boundary::Periodic => (MAX_PERIODIC_WIDTH, "periodic"),
            };
            let width = sides.first().copied().unwrap_or(0);
            if width > limit {
                return Err(Error::GuardExceeded(format!(
                    "row width {width} exceeds the {name}-boundary limit {limit} of the exact row solver; \
                     choose a smaller L"
                )));
            }
            Ok(())
        }
        3 => {
            let sites: usize = sides.iter().product();
            if sites > MAX_EXHAUSTIVE_SITES {
                return Err(Error::GuardExceeded(format!(
                    "{sites} sites exceed the exhaustive-enumeration limit {MAX_EXHAUSTIVE_SITES}; choose a smaller L"
                )));
            }
            Ok(())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Exact ground state: row dynamic programming for `d = 2`, exhaustive
/// enumeration for `d = 3`.
pub fn exact_ground_state(instance: &LatticeInstance) -> Result<LatticeGroundState> {
    let lattice = &instance.lattice;
    check_guard(lattice.dimension(), lattice.sides(), lattice.boundary())?;
    match lattice.dimension() {
        2 => row_dp_ground_state(instance),
        _ => exhaustive_ground_state(instance),
    }
}

/// Ground state by the row transfer program (`d = 2` only).
///
/// Row `y` holds sites `x + W*y`; bit `x` of a row state is set when that
/// spin is down. Horizontal bonds, including the wrap bond, enter the row
/// cost; vertical bonds depend only on the XOR of adjacent row states. With
/// periodic rows the first row state is fixed by an outer loop and the last
/// row closes onto it.
pub fn row_dp_ground_state(instance: &LatticeInstance) -> Result<LatticeGroundState> {
    let lattice = &instance.lattice;
    if lattice.dimension() != 2 {
        return Err(Error::UnsupportedDimension(lattice.dimension()));
    }
    check_guard(2, lattice.sides(), lattice.boundary())?;
    let scaled = instance.scaled()?;
    let (w, h) = (lattice.sides()[0], lattice.sides()[1]);
    let states = 1usize << w;
    let periodic = lattice.boundary() == Boundary::Periodic;

    // Row costs and vertical costs indexed by row state / XOR of row states.
    let mut row_cost = vec![vec![0i64; states]; h];
    let mut vertical_cost = vec![vec![0i64; states]; h];
    for ((&(a, b), &axis), &j) in lattice.bonds().iter().zip(lattice.bond_axes()).zip(&scaled.numerators) {
        let (ca, cb) = (lattice.coords(a), lattice.coords(b));
        if axis == 0 {
            let (xa, xb, y) = (ca[0], cb[0], ca[1]);
            for (s, cost) in row_cost[y].iter_mut().enumerate() {
                *cost += if ((s >> xa) ^ (s >> xb)) & 1 == 0 { j } else { -j };
            }
        } else {
            let (x, y) = (ca[0], ca[1]);
            for (d, cost) in vertical_cost[y].iter_mut().enumerate() {
                *cost += if (d >> x) & 1 == 0 { j } else { -j };
            }
        }
    }

    let run = |first: Option<usize>| -> (i64, Vec<usize>) {
        let mut best: Vec<i64> = match first {
            Some(r0) => (0..states).map(|s| if s == r0 { row_cost[0][s] } else { i64::MAX }).collect(),
            None => row_cost[0].clone(),
        };
        let mut parents = vec![vec![0u32; states]; h];
        for y in 1..h {
            let mut next = vec![i64::MAX; states];
            for (t, slot) in next.iter_mut().enumerate() {
                let mut m = i64::MAX;
                let mut arg = 0;
                for (s, &b) in best.iter().enumerate() {
                    if b == i64::MAX {
                        continue;
                    }
                    let v = b + vertical_cost[y - 1][s ^ t];
                    if v < m {
                        m = v;
                        arg = s;
                    }
                }
                *slot = m + row_cost[y][t];
                parents[y][t] = arg as u32;
            }
            best = next;
        }
        let closing = |s: usize| match first {
            Some(r0) => vertical_cost[h - 1][s ^ r0],
            None => 0,
        };
        let (mut last, mut energy) = (0, i64::MAX);
        for (s, &b) in best.iter().enumerate() {
            if b != i64::MAX && b + closing(s) < energy {
                energy = b + closing(s);
                last = s;
            }
        }
        let mut rows = vec![0usize; h];
        rows[h - 1] = last;
        for y in (1..h).rev() {
            rows[y - 1] = parents[y][rows[y]] as usize;
        }
        (energy, rows)
    };

    let (energy, rows) = if periodic {
        // Global flip symmetry: the first spin of row 0 can be pinned up.
        (0..states)
            .filter(|r0| r0 & 1 == 0)
            .map(|r0| run(Some(r0)))
            .min_by_key(|(e, _)| *e)
            .expect("at least one row state")
    } else {
        run(None)
    };
    let mut argmin = vec![1i8; lattice.site_count()];
    for (y, &r) in rows.iter().enumerate() {
        for x in 0..w {
            if (r >> x) & 1 == 1 {
                argmin[x + w * y] = -1;
            }
        }
    }
    Ok(LatticeGroundState {
        energy: scaled.to_rational(energy),
        argmin,
    })
}

/// Ground state by Gray-code enumeration of all spins but site 0, which is
/// pinned up. Independent of the row program and used as its oracle.
pub fn exhaustive_ground_state(instance: &LatticeInstance) -> Result<LatticeGroundState> {
    let lattice = &instance.lattice;
    let n = lattice.site_count();
    if n > MAX_EXHAUSTIVE_SITES {
        return Err(Error::GuardExceeded(format!(
            "{n} sites exceed the exhaustive-enumeration limit {MAX_EXHAUSTIVE_SITES}"
        )));
    }
    let scaled = instance.scaled()?;
    let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (&(a, b), &j) in lattice.bonds().iter().zip(&scaled.numerators) {
        adjacency[a].push((b, j));
        adjacency[b].push((a, j));
    }
    let mut spins = vec![1i64; n];
    let mut energy: i64 = scaled.numerators.iter().sum();
    let (mut best, mut best_mask) = (energy, 0u32);
    let mut mask = 0u32;
    for k in 1u64..(1u64 << (n - 1)) {
        let site = k.trailing_zeros() as usize + 1;
        let field: i64 = adjacency[site].iter().map(|&(o, j)| j * spins[o]).sum();
        energy -= 2 * spins[site] * field;
        spins[site] = -spins[site];
        mask ^= 1 << site;
        if energy < best {
            best = energy;
            best_mask = mask;
        }
    }
    let argmin = (0..n).map(|i| if (best_mask >> i) & 1 == 1 { -1 } else { 1 }).collect();
    Ok(LatticeGroundState {
        energy: scaled.to_rational(best),
        argmin,
    })
}

/// One solved sample of [`sample_upper_bound`], streamed as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub sample: u64,
    pub seed: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub energy: Rational,
    #[serde(serialize_with = "serialize_fraction")]
    pub energy_per_site: Rational,
    pub per_site_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBoundEstimate {
    pub dimension: usize,
    #[serde(rename = "L")]
    pub side: usize,
    pub boundary: Boundary,
    pub distribution: String,
    pub samples: usize,
    pub seed: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub mean_per_site: Rational,
    pub mean_decimal: String,
    /// Sample standard deviation over `sqrt(samples)`; 0 for one sample.
    pub stderr: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundRun {
    pub records: Vec<SampleRecord>,
    pub summary: UpperBoundEstimate,
}

/// Exact ground energies per site of `samples` independent `L^d` lattices.
/// Sample `i` uses substream `i` of `seed`, so the run is reproducible for
/// any thread count.
pub fn sample_upper_bound(
    dimension: usize,
    side: usize,
    boundary: Boundary,
    dist: &DiscreteDistribution,
    samples: usize,
    seed: u64,
) -> Result<UpperBoundRun> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let sides = vec![side; dimension];
    check_guard(dimension, &sides, boundary)?;
    let lattice = make_lattice(dimension, &sides, boundary)?;
    let n = integer(lattice.site_count() as i64);
    let records = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let instance = LatticeInstance::sample(lattice.clone(), dist, seed, i);
            let energy = exact_ground_state(&instance)?.energy;
            let per_site = &energy / &n;
            Ok(SampleRecord {
                sample: i,
                seed,
                per_site_decimal: to_decimal(&per_site, DEFAULT_PRECISION),
                energy,
                energy_per_site: per_site,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = records.iter().fold(Rational::zero(), |acc, r| acc + &r.energy_per_site);
    let mean = sum / integer(samples as i64);
    let values: Vec<f64> = records.iter().map(|r| to_f64(&r.energy_per_site)).collect();
    let (_, stderr) = mean_and_stderr(&values);
    let mut notes = vec![
        "the infimum over finite volumes equals the infinite-volume energy per site, so the \
         population mean of each finite sample is an upper bound; the sample mean carries statistical error"
            .to_string(),
    ];
    if samples == 1 {
        notes.push("single sample: stderr is reported as 0".into());
    }
    if !dist.is_centered() {
        notes.push("coupling law is not centered".into());
    }
    Ok(UpperBoundRun {
        records,
        summary: UpperBoundEstimate {
            dimension,
            side,
            boundary,
            distribution: dist.describe(),
            samples,
            seed,
            mean_decimal: to_decimal(&mean, DEFAULT_PRECISION),
            mean_per_site: mean,
            stderr,
            notes,
        },
    })
}

/// Both sides of the per-realisation cell inequality on one periodic
/// lattice: `(E_lattice, sum_n c_d E_cell(n))`, exactly.
pub fn cell_inequality_sides(instance: &LatticeInstance) -> Result<(Rational, Rational)> {
    let cover = make_cover(&instance.lattice)?;
    let lattice_energy = exact_ground_state(instance)?.energy;
    let mut cells = Rational::zero();
    for cell in cover.cells() {
        cells += cell_ground_state(cover.cell(), &instance.couplings.select(&cell.bonds))?.energy;
    }
    Ok((lattice_energy, cells * cover.cell().multiplicity_factor()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellInequalityReport {
    pub dimension: usize,
    #[serde(rename = "L")]
    pub side: usize,
    pub distribution: String,
    pub seed: u64,
    pub samples: usize,
    pub holding: usize,
    /// Gaps `E_lattice - sum_n c_d E_cell(n)` per site, by sample.
    #[serde(skip)]
    pub gaps_per_site: Vec<Rational>,
    #[serde(serialize_with = "serialize_fraction")]
    pub min_gap_per_site: Rational,
    #[serde(serialize_with = "serialize_fraction")]
    pub mean_gap_per_site: Rational,
    #[serde(serialize_with = "serialize_fraction")]
    pub max_gap_per_site: Rational,
}

/// Checks `E_lattice >= sum_n c_d E_cell(n)` exactly on `samples` periodic
/// `L^d` lattices. Any violation is returned as an error.
pub fn verify_cell_inequality(
    dimension: usize,
    side: usize,
    dist: &DiscreteDistribution,
    seed: u64,
    samples: usize,
) -> Result<CellInequalityReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let sides = vec![side; dimension];
    check_guard(dimension, &sides, Boundary::Periodic)?;
    let lattice = make_lattice(dimension, &sides, Boundary::Periodic)?;
    let n = integer(lattice.site_count() as i64);
    let gaps = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let instance = LatticeInstance::sample(lattice.clone(), dist, seed, i);
            let (lattice_energy, cells) = cell_inequality_sides(&instance)?;
            if lattice_energy < cells {
                return Err(Error::CellInequalityViolated {
                    sample: i,
                    lattice: lattice_energy.to_string(),
                    cells: cells.to_string(),
                });
            }
            Ok((lattice_energy - cells) / &n)
        })
        .collect::<Result<Vec<Rational>>>()?;
    let min = gaps.iter().min().cloned().unwrap_or_else(Rational::zero);
    let max = gaps.iter().max().cloned().unwrap_or_else(Rational::zero);
    let mean = gaps.iter().fold(Rational::zero(), |a, g| a + g) / integer(samples as i64);
    Ok(CellInequalityReport {
        dimension,
        side,
        distribution: dist.describe(),
        seed,
        samples,
        holding: gaps.len(),
        gaps_per_site: gaps,
        min_gap_per_site: min,
        mean_gap_per_site: mean,
        max_gap_per_site: max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::gauge_transform;
    use crate::rational::ratio;

    fn uniform(l: &FiniteLattice, j: i64) -> LatticeInstance {
        LatticeInstance::new(l.clone(), Couplings::uniform(l.bond_count(), integer(j))).unwrap()
    }

    #[test]
    fn trivial_lattices() {
        let free = make_lattice(2, &[3, 3], Boundary::Free).unwrap();
        assert_eq!(exact_ground_state(&uniform(&free, 1)).unwrap().energy, integer(-12));
        let per = make_lattice(2, &[4, 4], Boundary::Periodic).unwrap();
        let gs = exact_ground_state(&uniform(&per, -1)).unwrap();
        assert_eq!(gs.energy, integer(-32));
        assert!(gs.argmin.iter().all(|&s| s == 1));
        // odd periodic rows frustrate the antiferromagnet
        let odd = make_lattice(2, &[3, 3], Boundary::Periodic).unwrap();
        let e = exact_ground_state(&uniform(&odd, 1)).unwrap().energy;
        assert_eq!(e, exhaustive_ground_state(&uniform(&odd, 1)).unwrap().energy);
        assert!(e > integer(-18));
    }

    #[test]
    fn argmin_attains_energy() {
        let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
        for boundary in [Boundary::Free, Boundary::Periodic] {
            let l = make_lattice(2, &[5, 4], boundary).unwrap();
            for i in 0..10 {
                let inst = LatticeInstance::sample(l.clone(), &bern, 3, i);
                let gs = exact_ground_state(&inst).unwrap();
                assert_eq!(lattice_energy(&inst, &gs.argmin).unwrap(), gs.energy);
                let flipped: Vec<i8> = gs.argmin.iter().map(|s| -s).collect();
                assert_eq!(lattice_energy(&inst, &flipped).unwrap(), gs.energy);
            }
        }
    }

    #[test]
    fn rational_couplings() {
        let l = make_lattice(2, &[3, 3], Boundary::Periodic).unwrap();
        let dist = DiscreteDistribution::new(vec![(ratio(-1, 3), ratio(1, 2)), (ratio(1, 3), ratio(1, 2))]).unwrap();
        let inst = LatticeInstance::sample(l, &dist, 9, 0);
        let a = row_dp_ground_state(&inst).unwrap();
        let b = exhaustive_ground_state(&inst).unwrap();
        assert_eq!(a.energy, b.energy);
        assert_eq!(lattice_energy(&inst, &a.argmin).unwrap(), a.energy);
    }

    #[test]
    fn gauge_invariance() {
        let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
        let l = make_lattice(2, &[4, 4], Boundary::Periodic).unwrap();
        for draw in 0..10 {
            let inst = LatticeInstance::sample(l.clone(), &bern, 17, draw);
            let e = exact_ground_state(&inst).unwrap().energy;
            for k in 0..10 {
                let site = ((draw * 7 + k * 5) % 16) as usize;
                let g = gauge_transform(&l, inst.couplings(), site).unwrap();
                let other = LatticeInstance::new(l.clone(), g).unwrap();
                assert_eq!(exact_ground_state(&other).unwrap().energy, e);
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(check_guard(2, &[100, 100], Boundary::Free), Err(Error::GuardExceeded(_))));
        assert!(check_guard(2, &[12, 12], Boundary::Free).is_ok());
        assert!(check_guard(2, &[9, 9], Boundary::Periodic).is_err());
        assert!(check_guard(3, &[3, 3, 3], Boundary::Periodic).is_ok());
        assert!(check_guard(3, &[4, 4, 4], Boundary::Periodic).is_err());
        let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
        assert!(sample_upper_bound(2, 100, Boundary::Free, &bern, 1, 0).unwrap_err().is_guard());
    }

    #[test]
    fn point_mass_upper_bound() {
        let point = DiscreteDistribution::point_mass(integer(1)).unwrap();
        let run = sample_upper_bound(2, 4, Boundary::Periodic, &point, 1, 0).unwrap();
        assert_eq!(run.summary.mean_per_site, integer(-2));
        assert_eq!(run.summary.stderr, 0.0);
        assert_eq!(run.records.len(), 1);
    }

    #[test]
    fn ferromagnet_gap_is_zero() {
        let l = make_lattice(2, &[4, 4], Boundary::Periodic).unwrap();
        let (lat, cells) = cell_inequality_sides(&uniform(&l, 1)).unwrap();
        assert_eq!(lat, integer(-32));
        assert_eq!(cells, integer(-32));
    }

    #[test]
    fn cell_inequality_holds() {
        let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
        let report = verify_cell_inequality(2, 4, &bern, 1, 20).unwrap();
        assert_eq!(report.holding, 20);
        assert!(report.min_gap_per_site >= Rational::zero());
        let report = verify_cell_inequality(3, 3, &bern, 1, 2).unwrap();
        assert_eq!(report.holding, 2);
    }
}
