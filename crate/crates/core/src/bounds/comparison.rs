//! Literature values for the `+-1` model, shown next to computed bounds.
//! They are never used in any computation.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantRole {
    /// Rigorous upper bound on the infinite-volume energy per site.
    Upper,
    /// Lower bound, rigorous for a related model.
    Lower,
    /// Lower bound resting on unproven assumptions.
    HeuristicLower,
    /// Numerical estimate without error control.
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonConstant {
    pub label: &'static str,
    /// Decimal as quoted in the source.
    pub value: &'static str,
    pub role: ConstantRole,
    pub source: &'static str,
}

impl ComparisonConstant {
    pub fn as_f64(&self) -> f64 {
        self.value.parse().expect("table values are decimals")
    }
}

const TABLE_2D: &[ComparisonConstant] = &[
    ComparisonConstant {
        label: "exact finite-lattice ground states (upper)",
        value: "-1.39",
        role: ConstantRole::Upper,
        source: "De Simone, Diehl, Juenger, Mutzel, Reinelt, Rinaldi: exact ground states of 2D +-J spin glasses (branch and cut)",
    },
    ComparisonConstant {
        label: "random energy model (lower)",
        value: "-1.560",
        role: ConstantRole::Lower,
        source: "Derrida, random-energy model",
    },
    ComparisonConstant {
        label: "Monte Carlo estimate",
        value: "-1.4",
        role: ConstantRole::Estimate,
        source: "Binder, review of Monte Carlo simulations",
    },
];

const TABLE_3D: &[ComparisonConstant] = &[
    ComparisonConstant {
        label: "exact 5x5x5 ground states (upper)",
        value: "-1.759",
        role: ConstantRole::Upper,
        source: "Homer and Peinado, exact 3D ground states",
    },
    ComparisonConstant {
        label: "random energy model (lower)",
        value: "-1.956",
        role: ConstantRole::Lower,
        source: "Derrida, random-energy model",
    },
    ComparisonConstant {
        label: "frustration-string heuristic (lower)",
        value: "-2.25",
        role: ConstantRole::HeuristicLower,
        source: "Kirkpatrick, minimal covering surfaces with gamma >= 1/4",
    },
    ComparisonConstant {
        label: "Monte Carlo estimate",
        value: "-1.9",
        role: ConstantRole::Estimate,
        source: "Binder, review of Monte Carlo simulations",
    },
];

pub fn comparison_table(dimension: usize) -> Result<&'static [ComparisonConstant]> {
    match dimension {
        2 => Ok(TABLE_2D),
        3 => Ok(TABLE_3D),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// The rigorous upper bound for the dimension.
pub fn upper_constant(dimension: usize) -> Result<&'static ComparisonConstant> {
    comparison_table(dimension)?
        .iter()
        .find(|c| c.role == ConstantRole::Upper)
        .ok_or(Error::UnsupportedDimension(dimension))
}
