//! Cell geometries, finite hypercubic lattices and the cover of a periodic
//! lattice by unit cells.
//!
//! Sites are indexed row-major with `x` fastest: `site = x + Lx*(y + Ly*z)`.
//! Bonds are listed lexicographically by `(lower site, axis)` with
//! `x < y < z`, which fixes the bit positions of every bitmask encoding of
//! couplings used elsewhere in the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

/// Anything with sites, nearest-neighbour bonds and elementary plaquettes.
pub trait BondGraph {
    fn site_count(&self) -> usize;
    fn bonds(&self) -> &[(usize, usize)];
    /// Plaquettes as the indices of their four bonds.
    fn faces(&self) -> &[[usize; 4]];

    fn bond_count(&self) -> usize {
        self.bonds().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKind {
    /// Two sites and one bond. Only used as a small fixture.
    Dimer,
    Square,
    Cube,
}

/// Unit cell with a fixed site, bond and face ordering.
///
/// Square (sites `x + 2y`):
///
/// ```text
///   2 ---[3]--- 3
///   |           |
///  [1]         [2]
///   |           |
///   0 ---[0]--- 1
/// ```
///
/// Cube sites are `x + 2y + 4z`; bonds `0..12` are
/// `(0,1) (0,2) (0,4) (1,3) (1,5) (2,3) (2,6) (3,7) (4,5) (4,6) (5,7) (6,7)`.
/// Faces are ordered by normal axis then by side: `x=0, x=1, y=0, y=1, z=0, z=1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGeometry {
    kind: CellKind,
    dimension: usize,
    offsets: Vec<[usize; 3]>,
    bonds: Vec<(usize, usize)>,
    bond_axes: Vec<usize>,
    faces: Vec<[usize; 4]>,
    multiplicity: Rational,
}

/// Canonical unit cell for `dimension` 2 (square) or 3 (cube).
pub fn make_cell(dimension: usize) -> Result<CellGeometry> {
    match dimension {
        2 => Ok(CellGeometry::hypercube(CellKind::Square, 2, ratio(1, 2))),
        3 => Ok(CellGeometry::hypercube(CellKind::Cube, 3, ratio(1, 4))),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

impl CellGeometry {
    pub fn square() -> Self {
        make_cell(2).expect("square")
    }

    pub fn cube() -> Self {
        make_cell(3).expect("cube")
    }

    /// A single bond between two sites, with multiplicity 1.
    pub fn dimer() -> Self {
        CellGeometry {
            kind: CellKind::Dimer,
            dimension: 1,
            offsets: vec![[0, 0, 0], [1, 0, 0]],
            bonds: vec![(0, 1)],
            bond_axes: vec![0],
            faces: Vec::new(),
            multiplicity: ratio(1, 1),
        }
    }

    fn hypercube(kind: CellKind, dimension: usize, multiplicity: Rational) -> Self {
        let n_sites = 1usize << dimension;
        let offsets: Vec<[usize; 3]> = (0..n_sites)
            .map(|s| {
                let mut c = [0; 3];
                for (axis, slot) in c.iter_mut().enumerate().take(dimension) {
                    *slot = (s >> axis) & 1;
                }
                c
            })
            .collect();
        let mut bonds = Vec::new();
        let mut bond_axes = Vec::new();
        for s in 0..n_sites {
            for axis in 0..dimension {
                if s & (1 << axis) == 0 {
                    bonds.push((s, s | (1 << axis)));
                    bond_axes.push(axis);
                }
            }
        }
        let mut faces = Vec::new();
        if dimension == 2 {
            faces.push([0, 1, 2, 3]);
        } else {
            for normal in 0..dimension {
                for side in 0..2 {
                    let on_face = |site: usize| (site >> normal) & 1 == side;
                    let members: Vec<usize> = bonds
                        .iter()
                        .enumerate()
                        .filter(|(_, &(a, b))| on_face(a) && on_face(b))
                        .map(|(k, _)| k)
                        .collect();
                    faces.push(members.try_into().expect("four bonds per face"));
                }
            }
        }
        CellGeometry {
            kind,
            dimension,
            offsets,
            bonds,
            bond_axes,
            faces,
            multiplicity,
        }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Coordinates of each cell site relative to the anchor.
    pub fn offsets(&self) -> &[[usize; 3]] {
        &self.offsets
    }

    pub fn bond_axes(&self) -> &[usize] {
        &self.bond_axes
    }

    /// The factor `c_d` applied to each cell Hamiltonian.
    pub fn multiplicity_factor(&self) -> &Rational {
        &self.multiplicity
    }
}

impl BondGraph for CellGeometry {
    fn site_count(&self) -> usize {
        self.offsets.len()
    }

    fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    fn faces(&self) -> &[[usize; 4]] {
        &self.faces
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Free,
}

impl Boundary {
    pub fn minimum_side(self) -> usize {
        match self {
            Boundary::Periodic => 3,
            Boundary::Free => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Free => "free",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "free" | "open" => Ok(Boundary::Free),
            other => Err(Error::Parse(format!("unknown boundary {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    dimension: usize,
    sides: Vec<usize>,
    boundary: Boundary,
    bonds: Vec<(usize, usize)>,
    bond_axes: Vec<usize>,
    // (site * dimension + axis) -> bond index
    bond_lookup: Vec<Option<usize>>,
    plaquettes: Vec<[usize; 4]>,
}

pub fn make_lattice(dimension: usize, sides: &[usize], boundary: Boundary) -> Result<FiniteLattice> {
    FiniteLattice::new(dimension, sides, boundary)
}

impl FiniteLattice {
    pub fn new(dimension: usize, sides: &[usize], boundary: Boundary) -> Result<Self> {
        if !(2..=3).contains(&dimension) {
            return Err(Error::UnsupportedDimension(dimension));
        }
        if sides.len() != dimension {
            return Err(Error::SideCount {
                expected: dimension,
                got: sides.len(),
            });
        }
        let minimum = boundary.minimum_side();
        if let Some((axis, &length)) = sides.iter().enumerate().find(|(_, &l)| l < minimum) {
            return Err(Error::SideTooShort {
                axis,
                length,
                minimum,
                boundary: boundary.name(),
            });
        }
        let mut lattice = FiniteLattice {
            dimension,
            sides: sides.to_vec(),
            boundary,
            bonds: Vec::new(),
            bond_axes: Vec::new(),
            bond_lookup: Vec::new(),
            plaquettes: Vec::new(),
        };
        let n = lattice.site_count();
        lattice.bond_lookup = vec![None; n * dimension];
        for site in 0..n {
            for axis in 0..dimension {
                if let Some(other) = lattice.neighbor(site, axis) {
                    lattice.bond_lookup[site * dimension + axis] = Some(lattice.bonds.len());
                    lattice.bonds.push((site, other));
                    lattice.bond_axes.push(axis);
                }
            }
        }
        for site in 0..n {
            for a in 0..dimension {
                for b in a + 1..dimension {
                    let corner = (|| {
                        let along_a = lattice.neighbor(site, a)?;
                        let along_b = lattice.neighbor(site, b)?;
                        Some([
                            lattice.bond_index(site, a)?,
                            lattice.bond_index(site, b)?,
                            lattice.bond_index(along_a, b)?,
                            lattice.bond_index(along_b, a)?,
                        ])
                    })();
                    if let Some(mut face) = corner {
                        face.sort_unstable();
                        lattice.plaquettes.push(face);
                    }
                }
            }
        }
        Ok(lattice)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn bond_axes(&self) -> &[usize] {
        &self.bond_axes
    }

    pub fn coords(&self, site: usize) -> [usize; 3] {
        let mut c = [0; 3];
        let mut rest = site;
        for (axis, &len) in self.sides.iter().enumerate() {
            c[axis] = rest % len;
            rest /= len;
        }
        c
    }

    /// Site at `coords`, each component reduced modulo its side length.
    pub fn site_at(&self, coords: [usize; 3]) -> usize {
        let mut site = 0;
        for axis in (0..self.dimension).rev() {
            site = site * self.sides[axis] + coords[axis] % self.sides[axis];
        }
        site
    }

    /// The `+axis` neighbour of `site`, if the bond exists under the boundary.
    pub fn neighbor(&self, site: usize, axis: usize) -> Option<usize> {
        let mut c = self.coords(site);
        c[axis] += 1;
        if c[axis] == self.sides[axis] {
            match self.boundary {
                Boundary::Periodic => c[axis] = 0,
                Boundary::Free => return None,
            }
        }
        Some(self.site_at(c))
    }

    /// Index of the bond from `site` in the `+axis` direction.
    pub fn bond_index(&self, site: usize, axis: usize) -> Option<usize> {
        self.bond_lookup
            .get(site * self.dimension + axis)
            .copied()
            .flatten()
    }
}

impl BondGraph for FiniteLattice {
    fn site_count(&self) -> usize {
        self.sides.iter().product()
    }

    fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    fn faces(&self) -> &[[usize; 4]] {
        &self.plaquettes
    }
}

/// One translated copy of the unit cell inside a periodic lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInstance {
    pub anchor: usize,
    /// Lattice site of each cell site, in cell order.
    pub sites: Vec<usize>,
    /// Lattice bond of each cell bond, in cell order.
    pub bonds: Vec<usize>,
}

/// The decomposition of a periodic lattice into `N` overlapping unit cells,
/// one anchored at every site.
#[derive(Debug, Clone)]
pub struct CellCover {
    lattice: FiniteLattice,
    cell: CellGeometry,
    cells: Vec<CellInstance>,
}

pub fn make_cover(lattice: &FiniteLattice) -> Result<CellCover> {
    CellCover::new(lattice)
}

impl CellCover {
    pub fn new(lattice: &FiniteLattice) -> Result<Self> {
        if lattice.boundary() != Boundary::Periodic {
            return Err(Error::NonPeriodicCover);
        }
        let cell = make_cell(lattice.dimension())?;
        let cells = (0..lattice.site_count())
            .map(|anchor| {
                let base = lattice.coords(anchor);
                let sites: Vec<usize> = cell
                    .offsets()
                    .iter()
                    .map(|off| lattice.site_at([base[0] + off[0], base[1] + off[1], base[2] + off[2]]))
                    .collect();
                let bonds = cell
                    .bonds()
                    .iter()
                    .zip(cell.bond_axes())
                    .map(|(&(a, _), &axis)| {
                        lattice
                            .bond_index(sites[a], axis)
                            .expect("periodic lattices have every bond")
                    })
                    .collect();
                CellInstance {
                    anchor,
                    sites,
                    bonds,
                }
            })
            .collect();
        Ok(CellCover {
            lattice: lattice.clone(),
            cell,
            cells,
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn cell(&self) -> &CellGeometry {
        &self.cell
    }

    pub fn cells(&self) -> &[CellInstance] {
        &self.cells
    }

    /// Sum of `c_d` over all cell incidences of each lattice bond.
    pub fn bond_weights(&self) -> Vec<Rational> {
        let mut weights = vec![Rational::from_integer(0.into()); self.lattice.bond_count()];
        for cell in &self.cells {
            for &b in &cell.bonds {
                weights[b] += self.cell.multiplicity_factor();
            }
        }
        weights
    }

    /// Number of cells containing each lattice bond.
    pub fn bond_incidence(&self) -> Vec<usize> {
        let mut counts = vec![0; self.lattice.bond_count()];
        for cell in &self.cells {
            for &b in &cell.bonds {
                counts[b] += 1;
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn square_cell() {
        let sq = make_cell(2).unwrap();
        assert_eq!(sq.site_count(), 4);
        assert_eq!(sq.bonds(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(sq.faces().len(), 1);
        assert_eq!(*sq.multiplicity_factor(), ratio(1, 2));
    }

    #[test]
    fn cube_cell() {
        let cube = make_cell(3).unwrap();
        assert_eq!(cube.site_count(), 8);
        assert_eq!(cube.bond_count(), 12);
        assert_eq!(cube.faces().len(), 6);
        assert_eq!(*cube.multiplicity_factor(), ratio(1, 4));
        assert_eq!(
            cube.bonds(),
            &[
                (0, 1),
                (0, 2),
                (0, 4),
                (1, 3),
                (1, 5),
                (2, 3),
                (2, 6),
                (3, 7),
                (4, 5),
                (4, 6),
                (5, 7),
                (6, 7)
            ]
        );
    }

    #[test]
    fn every_bond_in_d_minus_one_faces() {
        for d in [2, 3] {
            let cell = make_cell(d).unwrap();
            let mut counts = vec![0; cell.bond_count()];
            for face in cell.faces() {
                for &b in face {
                    counts[b] += 1;
                }
            }
            assert!(counts.iter().all(|&c| c == d - 1), "d={d}: {counts:?}");
        }
    }

    #[test]
    fn unsupported_dimension() {
        assert!(matches!(make_cell(4), Err(Error::UnsupportedDimension(4))));
        assert!(matches!(
            make_lattice(1, &[4], Boundary::Free),
            Err(Error::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn lattice_bond_counts() {
        let l = make_lattice(2, &[4, 4], Boundary::Periodic).unwrap();
        assert_eq!((l.site_count(), l.bond_count()), (16, 32));
        let l = make_lattice(2, &[3, 3], Boundary::Free).unwrap();
        assert_eq!((l.site_count(), l.bond_count()), (9, 12));
        let l = make_lattice(3, &[3, 3, 3], Boundary::Periodic).unwrap();
        assert_eq!((l.site_count(), l.bond_count()), (27, 81));
        for len in 3..=8 {
            let p = make_lattice(2, &[len, len], Boundary::Periodic).unwrap();
            assert_eq!(p.bond_count(), 2 * len * len);
            let f = make_lattice(2, &[len, len], Boundary::Free).unwrap();
            assert_eq!(f.bond_count(), 2 * len * (len - 1));
            let c = make_lattice(3, &[len, len, len], Boundary::Periodic).unwrap();
            assert_eq!(c.bond_count(), 3 * len * len * len);
        }
    }

    #[test]
    fn side_minimums() {
        assert!(matches!(
            make_lattice(2, &[2, 4], Boundary::Periodic),
            Err(Error::SideTooShort { axis: 0, .. })
        ));
        assert!(make_lattice(2, &[2, 2], Boundary::Free).is_ok());
        assert!(make_lattice(2, &[1, 3], Boundary::Free).is_err());
        assert!(matches!(
            make_lattice(2, &[3], Boundary::Free),
            Err(Error::SideCount { .. })
        ));
    }

    #[test]
    fn bonds_are_nearest_neighbours_in_canonical_order() {
        for (d, sides, b) in [
            (2, vec![5, 4], Boundary::Periodic),
            (2, vec![4, 3], Boundary::Free),
            (3, vec![3, 4, 3], Boundary::Periodic),
            (3, vec![2, 3, 2], Boundary::Free),
        ] {
            let l = make_lattice(d, &sides, b).unwrap();
            let mut keys = Vec::new();
            for (k, (&(i, j), &axis)) in l.bonds().iter().zip(l.bond_axes()).enumerate() {
                let (ci, cj) = (l.coords(i), l.coords(j));
                let mut distance = 0;
                for a in 0..d {
                    let diff = ci[a].abs_diff(cj[a]);
                    let wrapped = diff.min(sides[a] - diff);
                    distance += match b {
                        Boundary::Periodic => wrapped,
                        Boundary::Free => diff,
                    };
                }
                assert_eq!(distance, 1);
                assert_eq!(l.bond_index(i, axis), Some(k));
                keys.push((i, axis));
            }
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(keys, sorted);
        }
    }

    #[test]
    fn plaquette_counts() {
        let l = make_lattice(2, &[4, 4], Boundary::Periodic).unwrap();
        assert_eq!(l.faces().len(), 16);
        let l = make_lattice(2, &[4, 4], Boundary::Free).unwrap();
        assert_eq!(l.faces().len(), 9);
        let l = make_lattice(3, &[3, 3, 3], Boundary::Periodic).unwrap();
        assert_eq!(l.faces().len(), 81);
    }

    #[test]
    fn cover_multiplicities() {
        for (d, len, per_bond) in [(2, 4, 2), (3, 3, 4), (2, 7, 2), (3, 4, 4)] {
            let l = make_lattice(d, &vec![len; d], Boundary::Periodic).unwrap();
            let cover = make_cover(&l).unwrap();
            assert_eq!(cover.cells().len(), l.site_count());
            assert!(cover.bond_incidence().iter().all(|&c| c == per_bond));
            assert!(cover.bond_weights().iter().all(|w| w.is_one()));
        }
    }

    #[test]
    fn cover_requires_periodic() {
        let l = make_lattice(2, &[4, 4], Boundary::Free).unwrap();
        assert!(matches!(make_cover(&l), Err(Error::NonPeriodicCover)));
    }

    #[test]
    fn cover_is_translation_covariant() {
        let l = make_lattice(2, &[5, 4], Boundary::Periodic).unwrap();
        let cover = make_cover(&l).unwrap();
        let shift = |site: usize| {
            let c = l.coords(site);
            l.site_at([c[0] + 1, c[1], c[2]])
        };
        for cell in cover.cells() {
            let shifted = &cover.cells()[shift(cell.anchor)];
            let moved: Vec<usize> = cell.sites.iter().map(|&s| shift(s)).collect();
            assert_eq!(moved, shifted.sites);
            for (&b, &b2) in cell.bonds.iter().zip(&shifted.bonds) {
                let (i, _) = l.bonds()[b];
                assert_eq!(l.bond_index(shift(i), l.bond_axes()[b]), Some(b2));
            }
        }
    }

    #[test]
    fn cell_anchor_is_lowest_corner() {
        let l = make_lattice(3, &[3, 3, 3], Boundary::Periodic).unwrap();
        let cover = make_cover(&l).unwrap();
        let cell = &cover.cells()[l.site_at([1, 2, 0])];
        assert_eq!(cell.sites[0], cell.anchor);
        assert_eq!(l.coords(cell.sites[7]), [2, 0, 1]);
    }
}
