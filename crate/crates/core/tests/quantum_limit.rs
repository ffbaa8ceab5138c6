use std::time::Instant;

use ea_bounds::bounds::{exact_cell_average, DiscreteDistribution};
use ea_bounds::lattice::CellGeometry;
use ea_bounds::quantum::{quantum_cell_average, Anisotropy};
use ea_bounds::rational::{integer, to_f64};

fn classical_limit(cell: &CellGeometry) -> (f64, f64) {
    let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
    let quantum = quantum_cell_average(cell, &bern, Anisotropy::CLASSICAL).unwrap();
    let classical = to_f64(&exact_cell_average(cell, &bern).unwrap());
    (quantum, classical)
}

#[test]
fn square_classical_limit() {
    let (q, c) = classical_limit(&CellGeometry::square());
    assert_eq!(c, -3.0);
    assert!((q - c).abs() <= 1e-9);
}

#[test]
fn cube_classical_limit() {
    let start = Instant::now();
    let (q, c) = classical_limit(&CellGeometry::cube());
    eprintln!("cube classical limit: {q} vs {c} in {:?}", start.elapsed());
    assert_eq!(c, -8.8125);
    assert!((q - c).abs() <= 1e-9);
}

#[test]
fn cube_xz_average_matches_reference() {
    // 4096 dense numpy diagonalisations of the Kronecker-product Hamiltonian
    let reference = -3.0193063068960435;
    let bern = DiscreteDistribution::bernoulli(integer(1)).unwrap();
    let avg = quantum_cell_average(&CellGeometry::cube(), &bern, Anisotropy::xz(1.0)).unwrap();
    assert!((0.25 * avg - reference).abs() < 1e-10, "{}", 0.25 * avg);
}
