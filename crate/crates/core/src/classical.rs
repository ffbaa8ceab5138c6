//! Exact ground states of classical Ising cells, frustration products and
//! local gauge transformations.
//!
//! The energy functional is `F(sigma, J) = sum_b J_b sigma_i sigma_j`, minimised
//! over `sigma in {+1,-1}^sites`. Positive couplings therefore prefer
//! antiparallel spins.
//!
//! Bitmask conventions: bit `k` of a coupling mask is set when bond `k`
//! carries `-J`; bit `i` of a spin mask is set when site `i` has spin `-1`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::BondGraph;
use crate::rational::{integer, scale_to_integers, Rational};

/// One exact coupling per bond.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Couplings {
    values: Vec<Rational>,
}

impl Couplings {
    pub fn new(values: Vec<Rational>) -> Self {
        Couplings { values }
    }

    pub fn uniform(len: usize, value: Rational) -> Self {
        Couplings {
            values: vec![value; len],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Couplings {
            values: values.iter().map(|&v| integer(v)).collect(),
        }
    }

    /// `+scale` on every bond whose bit is clear, `-scale` where it is set.
    pub fn from_sign_mask(mask: u64, len: usize, scale: &Rational) -> Self {
        let values = (0..len)
            .map(|k| {
                if (mask >> k) & 1 == 1 {
                    -scale.clone()
                } else {
                    scale.clone()
                }
            })
            .collect();
        Couplings { values }
    }

    /// Inverse of [`Couplings::from_sign_mask`]: `Some((mask, J))` when every
    /// value is `+J` or `-J` for one `J > 0` and there are at most 64 bonds.
    pub fn sign_mask(&self) -> Option<(u64, Rational)> {
        if self.values.len() > 64 {
            return None;
        }
        let scale = self.values.first()?.abs();
        if scale.is_zero() {
            return None;
        }
        let mut mask = 0u64;
        for (k, v) in self.values.iter().enumerate() {
            if v.abs() != scale {
                return None;
            }
            if v.is_negative() {
                mask |= 1 << k;
            }
        }
        Some((mask, scale))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Couplings of a sub-structure, read off by bond index.
    pub fn select(&self, bonds: &[usize]) -> Couplings {
        Couplings {
            values: bonds.iter().map(|&b| self.values[b].clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(crate::rational::to_f64).collect()
    }

    fn check<G: BondGraph>(&self, graph: &G) -> Result<()> {
        if self.len() != graph.bond_count() {
            return Err(Error::LengthMismatch {
                what: "couplings",
                expected: graph.bond_count(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// Ising spins as a bitmask over the site ordering (bit set = spin down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SpinConfiguration {
    mask: u64,
    len: usize,
}

impl SpinConfiguration {
    pub fn new(mask: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        SpinConfiguration {
            mask: mask & keep,
            len,
        }
    }

    pub fn all_up(len: usize) -> Self {
        SpinConfiguration::new(0, len)
    }

    pub fn from_spins(spins: &[i8]) -> Self {
        let mask = spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        SpinConfiguration::new(mask, spins.len())
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn spin(&self, site: usize) -> i8 {
        1 - 2 * ((self.mask >> site) & 1) as i8
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.len).map(|i| self.spin(i)).collect()
    }

    /// The globally flipped configuration.
    pub fn flipped(&self) -> Self {
        SpinConfiguration::new(!self.mask, self.len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrustrationSignature {
    /// Sign of the coupling product around each face.
    pub face_products: Vec<i8>,
    pub frustrated_count: usize,
}

impl FrustrationSignature {
    pub fn product(&self) -> i8 {
        self.face_products.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGroundState {
    pub energy: Rational,
    pub argmin: SpinConfiguration,
}

fn check_spins<G: BondGraph>(graph: &G, spins: &SpinConfiguration) -> Result<()> {
    if spins.len() != graph.site_count() {
        return Err(Error::LengthMismatch {
            what: "spins",
            expected: graph.site_count(),
            got: spins.len(),
        });
    }
    Ok(())
}

/// `sum_b J_b sigma_i sigma_j`, without any multiplicity factor.
pub fn cell_energy<G: BondGraph>(
    graph: &G,
    couplings: &Couplings,
    spins: &SpinConfiguration,
) -> Result<Rational> {
    couplings.check(graph)?;
    check_spins(graph, spins)?;
    let mut energy = Rational::zero();
    for (&(i, j), value) in graph.bonds().iter().zip(couplings.values()) {
        if spins.spin(i) == spins.spin(j) {
            energy += value;
        } else {
            energy -= value;
        }
    }
    Ok(energy)
}

/// Largest site count handled by spin enumeration in this module.
const MAX_CELL_SITES: usize = 24;

/// Exact minimum of the energy over all spin configurations.
///
/// Site 0 is pinned up and the flipped partner of each scanned configuration
/// is considered implicitly. The returned argmin is the smallest spin mask
/// among all minimisers. Sign-definite couplings take a popcount path,
/// other rational couplings are rescaled to integers when possible.
pub fn cell_ground_state<G: BondGraph>(graph: &G, couplings: &Couplings) -> Result<CellGroundState> {
    couplings.check(graph)?;
    let n = graph.site_count();
    if n > MAX_CELL_SITES {
        return Err(Error::GuardExceeded(format!(
            "cell enumeration over {n} sites (limit {MAX_CELL_SITES})"
        )));
    }
    if n == 0 {
        return Ok(CellGroundState {
            energy: Rational::zero(),
            argmin: SpinConfiguration::all_up(0),
        });
    }
    if let Some((mask, scale)) = couplings.sign_mask() {
        let solver = SignPatternSolver::new(graph);
        let (units, argmin) = solver.ground_state(mask);
        return Ok(CellGroundState {
            energy: scale * integer(units),
            argmin,
        });
    }
    if let Some(scaled) = scale_to_integers(couplings.values(), graph.bond_count()) {
        let (best, argmin) = enumerate_min(graph, |spins| {
            graph
                .bonds()
                .iter()
                .zip(&scaled.numerators)
                .map(|(&(i, j), &v)| if same(spins, i, j) { v } else { -v })
                .sum::<i64>()
        });
        return Ok(CellGroundState {
            energy: scaled.to_rational(best),
            argmin,
        });
    }
    let (best, argmin) = enumerate_min(graph, |spins| {
        graph
            .bonds()
            .iter()
            .zip(couplings.values())
            .fold(Rational::zero(), |acc, (&(i, j), v)| {
                if same(spins, i, j) {
                    acc + v
                } else {
                    acc - v
                }
            })
    });
    Ok(CellGroundState {
        energy: best,
        argmin,
    })
}

/// Ground energy for floating-point couplings, used by the sampled averages.
pub fn cell_ground_energy_f64<G: BondGraph>(graph: &G, couplings: &[f64]) -> Result<f64> {
    if couplings.len() != graph.bond_count() {
        return Err(Error::LengthMismatch {
            what: "couplings",
            expected: graph.bond_count(),
            got: couplings.len(),
        });
    }
    let n = graph.site_count();
    if n > MAX_CELL_SITES {
        return Err(Error::GuardExceeded(format!(
            "cell enumeration over {n} sites (limit {MAX_CELL_SITES})"
        )));
    }
    let mut best = f64::INFINITY;
    for half in 0..(1u64 << n.saturating_sub(1)) {
        let spins = half << 1;
        let e: f64 = graph
            .bonds()
            .iter()
            .zip(couplings)
            .map(|(&(i, j), &v)| if same(spins, i, j) { v } else { -v })
            .sum();
        best = best.min(e);
    }
    Ok(best)
}

#[inline]
fn same(spins: u64, i: usize, j: usize) -> bool {
    ((spins >> i) ^ (spins >> j)) & 1 == 0
}

fn enumerate_min<G: BondGraph, T: PartialOrd>(graph: &G, energy: impl Fn(u64) -> T) -> (T, SpinConfiguration) {
    let n = graph.site_count();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<(T, u64)> = None;
    for half in 0..(1u64 << (n - 1)) {
        let spins = half << 1;
        let e = energy(spins);
        let representative = spins.min(!spins & full);
        match &best {
            Some((b, m)) if e > *b || (e == *b && representative >= *m) => {}
            _ => best = Some((e, representative)),
        }
    }
    let (e, m) = best.expect("at least one configuration");
    (e, SpinConfiguration::new(m, n))
}

/// Precomputed popcount solver for `+-1` couplings on a fixed small graph.
///
/// For spin mask `s` let `d(s)` be the bond mask of antiparallel pairs. With
/// coupling mask `m` the energy in units of `J` is
/// `bonds - 2 * popcount(m ^ d(s))`.
#[derive(Debug, Clone)]
pub struct SignPatternSolver {
    bonds: usize,
    sites: usize,
    // d(s) for every s with site 0 up, indexed by s >> 1.
    antiparallel: Vec<u64>,
}

impl SignPatternSolver {
    pub fn new<G: BondGraph>(graph: &G) -> Self {
        let sites = graph.site_count();
        assert!((1..=MAX_CELL_SITES).contains(&sites) && graph.bond_count() <= 64);
        let antiparallel = (0..(1u64 << (sites - 1)))
            .map(|half| {
                let s = half << 1;
                graph
                    .bonds()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(i, j))| !same(s, i, j))
                    .fold(0u64, |d, (k, _)| d | (1 << k))
            })
            .collect();
        SignPatternSolver {
            bonds: graph.bond_count(),
            sites,
            antiparallel,
        }
    }

    pub fn bond_count(&self) -> usize {
        self.bonds
    }

    /// Antiparallel-bond masks `d(s)` for every spin mask with site 0 up,
    /// indexed by `s >> 1`.
    pub fn antiparallel_masks(&self) -> &[u64] {
        &self.antiparallel
    }

    /// Ground energy in units of `J` for the coupling mask.
    #[inline]
    pub fn ground_energy(&self, coupling_mask: u64) -> i64 {
        let broken = self
            .antiparallel
            .iter()
            .map(|&d| (coupling_mask ^ d).count_ones())
            .max()
            .unwrap_or(0);
        self.bonds as i64 - 2 * broken as i64
    }

    pub fn ground_state(&self, coupling_mask: u64) -> (i64, SpinConfiguration) {
        let full = (1u64 << self.sites) - 1;
        let mut best = (i64::MAX, u64::MAX);
        for (half, &d) in self.antiparallel.iter().enumerate() {
            let e = self.bonds as i64 - 2 * (coupling_mask ^ d).count_ones() as i64;
            let s = (half as u64) << 1;
            let rep = s.min(!s & full);
            if e < best.0 || (e == best.0 && rep < best.1) {
                best = (e, rep);
            }
        }
        (best.0, SpinConfiguration::new(best.1, self.sites))
    }
}

/// Coupling-product sign around every face of the graph.
pub fn frustration_signature<G: BondGraph>(graph: &G, couplings: &Couplings) -> Result<FrustrationSignature> {
    couplings.check(graph)?;
    if let Some(k) = couplings.values().iter().position(|v| v.is_zero()) {
        return Err(Error::ZeroCoupling(k));
    }
    let face_products: Vec<i8> = graph
        .faces()
        .iter()
        .map(|face| {
            let negatives = face
                .iter()
                .filter(|&&b| couplings.values()[b].is_negative())
                .count();
            if negatives % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let frustrated_count = face_products.iter().filter(|&&p| p < 0).count();
    Ok(FrustrationSignature {
        face_products,
        frustrated_count,
    })
}

/// Frustration signature straight from a coupling mask.
pub fn frustration_from_mask<G: BondGraph>(graph: &G, mask: u64) -> FrustrationSignature {
    let face_products: Vec<i8> = graph
        .faces()
        .iter()
        .map(|face| {
            let negatives: u32 = face.iter().map(|&b| ((mask >> b) & 1) as u32).sum();
            if negatives.is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .collect();
    let frustrated_count = face_products.iter().filter(|&&p| p < 0).count();
    FrustrationSignature {
        face_products,
        frustrated_count,
    }
}

/// Flips the sign of every coupling on a bond incident to `site`; paired
/// with flipping that spin it leaves every energy unchanged.
pub fn gauge_transform<G: BondGraph>(graph: &G, couplings: &Couplings, site: usize) -> Result<Couplings> {
    couplings.check(graph)?;
    if site >= graph.site_count() {
        return Err(Error::InvalidSite {
            site,
            sites: graph.site_count(),
        });
    }
    let values = graph
        .bonds()
        .iter()
        .zip(couplings.values())
        .map(|(&(i, j), v)| if i == site || j == site { -v.clone() } else { v.clone() })
        .collect();
    Ok(Couplings::new(values))
}

/// The bond mask flipped by a gauge transformation at `site`.
pub fn gauge_mask<G: BondGraph>(graph: &G, site: usize) -> u64 {
    graph
        .bonds()
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| i == site || j == site)
        .fold(0u64, |m, (k, _)| m | (1 << k))
}

/// Tally over every `+-1` sign pattern of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignCensus {
    pub patterns: u64,
    /// Ground energy (units of `J`) -> number of patterns.
    pub by_ground_energy: BTreeMap<i64, u64>,
    /// Frustrated face count -> number of patterns.
    pub by_frustrated_count: BTreeMap<usize, u64>,
    /// Patterns whose face-product product is `-1`.
    pub parity_violations: u64,
    /// Sum of ground energies over all patterns (units of `J`).
    pub energy_sum: i64,
}

pub fn sign_pattern_census<G: BondGraph>(graph: &G) -> SignCensus {
    let solver = SignPatternSolver::new(graph);
    let patterns = 1u64 << graph.bond_count();
    let mut census = SignCensus {
        patterns,
        by_ground_energy: BTreeMap::new(),
        by_frustrated_count: BTreeMap::new(),
        parity_violations: 0,
        energy_sum: 0,
    };
    for mask in 0..patterns {
        let e = solver.ground_energy(mask);
        let sig = frustration_from_mask(graph, mask);
        *census.by_ground_energy.entry(e).or_default() += 1;
        *census.by_frustrated_count.entry(sig.frustrated_count).or_default() += 1;
        if graph.faces().len() == 6 && sig.product() != 1 {
            census.parity_violations += 1;
        }
        census.energy_sum += e;
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::CellGeometry;
    use crate::rational::ratio;
    use num_bigint::BigInt;

    fn checkerboard(cell: &CellGeometry) -> SpinConfiguration {
        let spins: Vec<i8> = cell
            .offsets()
            .iter()
            .map(|c| if (c[0] + c[1] + c[2]) % 2 == 0 { 1 } else { -1 })
            .collect();
        SpinConfiguration::from_spins(&spins)
    }

    #[test]
    fn energies_of_simple_configurations() {
        let sq = CellGeometry::square();
        let ones = Couplings::from_integers(&[1, 1, 1, 1]);
        assert_eq!(cell_energy(&sq, &ones, &SpinConfiguration::all_up(4)).unwrap(), integer(4));
        // alternating around the cycle 0-1-3-2
        let alt = SpinConfiguration::from_spins(&[1, -1, -1, 1]);
        assert_eq!(cell_energy(&sq, &ones, &alt).unwrap(), integer(-4));
        let cube = CellGeometry::cube();
        let ones = Couplings::from_integers(&[1; 12]);
        assert_eq!(cell_energy(&cube, &ones, &checkerboard(&cube)).unwrap(), integer(-12));
    }

    #[test]
    fn length_mismatch() {
        let sq = CellGeometry::square();
        let bad = Couplings::from_integers(&[1, 1, 1]);
        assert!(matches!(
            cell_energy(&sq, &bad, &SpinConfiguration::all_up(4)),
            Err(Error::LengthMismatch { .. })
        ));
        let ok = Couplings::from_integers(&[1, 1, 1, 1]);
        assert!(cell_energy(&sq, &ok, &SpinConfiguration::all_up(3)).is_err());
        assert!(cell_ground_state(&sq, &bad).is_err());
    }

    #[test]
    fn plaquette_ground_energies() {
        let sq = CellGeometry::square();
        let frustrated = Couplings::from_integers(&[1, 1, 1, -1]);
        assert_eq!(cell_ground_state(&sq, &frustrated).unwrap().energy, integer(-2));
        let plain = Couplings::from_integers(&[1, 1, 1, 1]);
        assert_eq!(cell_ground_state(&sq, &plain).unwrap().energy, integer(-4));
        let cube = CellGeometry::cube();
        assert_eq!(
            cell_ground_state(&cube, &Couplings::from_integers(&[1; 12])).unwrap().energy,
            integer(-12)
        );
    }

    #[test]
    fn cube_with_one_negative_bond() {
        // Brute-force oracle over all 256 configurations.
        let cube = CellGeometry::cube();
        let mut values = [1i64; 12];
        values[0] = -1;
        let j = Couplings::from_integers(&values);
        let brute = (0..256u64)
            .map(|s| cell_energy(&cube, &j, &SpinConfiguration::new(s, 8)).unwrap())
            .min()
            .unwrap();
        assert_eq!(brute, integer(-10));
        assert_eq!(cell_ground_state(&cube, &j).unwrap().energy, brute);
        assert_eq!(frustration_signature(&cube, &j).unwrap().frustrated_count, 2);
    }

    #[test]
    fn argmin_is_smallest_minimising_mask() {
        let sq = CellGeometry::square();
        let j = Couplings::from_integers(&[1, 1, 1, 1]);
        let gs = cell_ground_state(&sq, &j).unwrap();
        // minimisers are 0b0110 and 0b1001
        assert_eq!(gs.argmin.mask(), 0b0110);
        let j = Couplings::from_integers(&[-1, -1, -1, -1]);
        assert_eq!(cell_ground_state(&sq, &j).unwrap().argmin.mask(), 0);
        // rational path agrees on the tie-break
        let j = Couplings::new(vec![ratio(1, 3); 4]);
        assert_eq!(cell_ground_state(&sq, &j).unwrap().argmin.mask(), 0b0110);
    }

    #[test]
    fn scaled_and_rational_couplings() {
        let sq = CellGeometry::square();
        let j = Couplings::new(vec![ratio(1, 2), ratio(-1, 3), integer(2), ratio(5, 7)]);
        let brute = (0..16u64)
            .map(|s| cell_energy(&sq, &j, &SpinConfiguration::new(s, 4)).unwrap())
            .min()
            .unwrap();
        assert_eq!(cell_ground_state(&sq, &j).unwrap().energy, brute);
        let big = num_traits::pow(BigInt::from(10), 30);
        let j = Couplings::new(vec![
            Rational::new(BigInt::from(1), big.clone()),
            Rational::from_integer(big.clone()),
            integer(-1),
            integer(3),
        ]);
        let brute = (0..16u64)
            .map(|s| cell_energy(&sq, &j, &SpinConfiguration::new(s, 4)).unwrap())
            .min()
            .unwrap();
        assert_eq!(cell_ground_state(&sq, &j).unwrap().energy, brute);
    }

    #[test]
    fn frustration_examples() {
        let sq = CellGeometry::square();
        let sig = frustration_signature(&sq, &Couplings::from_integers(&[1, 1, 1, 1])).unwrap();
        assert_eq!((sig.face_products.clone(), sig.frustrated_count), (vec![1], 0));
        let sig = frustration_signature(&sq, &Couplings::from_integers(&[1, -1, 1, 1])).unwrap();
        assert_eq!((sig.face_products.clone(), sig.frustrated_count), (vec![-1], 1));
        let zero = Couplings::from_integers(&[1, 0, 1, 1]);
        assert!(matches!(frustration_signature(&sq, &zero), Err(Error::ZeroCoupling(1))));
    }

    #[test]
    fn square_census_is_eight_and_eight() {
        let census = sign_pattern_census(&CellGeometry::square());
        assert_eq!(census.patterns, 16);
        assert_eq!(census.by_ground_energy, BTreeMap::from([(-4, 8), (-2, 8)]));
        assert_eq!(census.by_frustrated_count, BTreeMap::from([(0, 8), (1, 8)]));
        assert_eq!(census.energy_sum, -48);
    }

    #[test]
    fn cube_census() {
        let census = sign_pattern_census(&CellGeometry::cube());
        assert_eq!(census.patterns, 4096);
        assert_eq!(census.parity_violations, 0);
        // Frozen from an independent Python enumeration.
        assert_eq!(
            census.by_frustrated_count,
            BTreeMap::from([(0, 128), (2, 1920), (4, 1920), (6, 128)])
        );
        assert_eq!(
            census.by_ground_energy,
            BTreeMap::from([(-12, 128), (-10, 1536), (-8, 2304), (-6, 128)])
        );
        assert_eq!(census.energy_sum, -36096);
    }

    #[test]
    fn gauge_examples() {
        let sq = CellGeometry::square();
        let ones = Couplings::from_integers(&[1, 1, 1, 1]);
        let g = gauge_transform(&sq, &ones, 0).unwrap();
        assert_eq!(g, Couplings::from_integers(&[-1, -1, 1, 1]));
        assert_eq!(cell_ground_state(&sq, &g).unwrap().energy, integer(-4));
        let fr = Couplings::from_integers(&[1, 1, 1, -1]);
        for site in 0..4 {
            let g = gauge_transform(&sq, &fr, site).unwrap();
            assert_eq!(
                frustration_signature(&sq, &g).unwrap(),
                frustration_signature(&sq, &fr).unwrap()
            );
        }
        assert!(matches!(gauge_transform(&sq, &ones, 4), Err(Error::InvalidSite { .. })));
    }

    #[test]
    fn gauge_invariance_exhaustive() {
        for cell in [CellGeometry::square(), CellGeometry::cube()] {
            let solver = SignPatternSolver::new(&cell);
            let gauges: Vec<u64> = (0..cell.site_count()).map(|s| gauge_mask(&cell, s)).collect();
            for mask in 0..(1u64 << cell.bond_count()) {
                let e = solver.ground_energy(mask);
                for g in &gauges {
                    assert_eq!(solver.ground_energy(mask ^ g), e);
                }
            }
        }
    }

    #[test]
    fn gauge_mask_matches_transform() {
        let cube = CellGeometry::cube();
        let one = integer(1);
        for site in 0..8 {
            let j = Couplings::from_sign_mask(0b1010_0110_1001, 12, &one);
            let g = gauge_transform(&cube, &j, site).unwrap();
            assert_eq!(g.sign_mask().unwrap().0, 0b1010_0110_1001 ^ gauge_mask(&cube, site));
        }
    }

    #[test]
    fn sign_mask_round_trip() {
        let two = integer(2);
        let j = Couplings::from_sign_mask(0b1001, 4, &two);
        assert_eq!(j.values()[0], integer(-2));
        assert_eq!(j.sign_mask(), Some((0b1001, two)));
        assert_eq!(Couplings::from_integers(&[1, 2]).sign_mask(), None);
    }

    #[test]
    fn float_ground_energy() {
        let cube = CellGeometry::cube();
        let one = integer(1);
        for mask in [0u64, 1, 0xabc, 0xfff] {
            let j = Couplings::from_sign_mask(mask, 12, &one);
            let exact = cell_ground_state(&cube, &j).unwrap().energy;
            assert_eq!(cell_ground_energy_f64(&cube, &j.to_f64()).unwrap(), crate::rational::to_f64(&exact));
        }
    }
}
