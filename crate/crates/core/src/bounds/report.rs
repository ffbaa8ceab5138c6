use std::fmt::Write as _;

use serde::Serialize;

use super::comparison::{ComparisonConstant, ConstantRole};
use crate::classical::SignCensus;
use crate::rational::{fraction_string, serialize_fraction, serialize_opt_fraction, to_decimal, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    ExactEnumeration,
    MonteCarlo,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::ExactEnumeration => "exact-enumeration",
            BoundMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum BoundValue {
    Exact {
        /// Average cell ground energy, before the multiplicity factor.
        #[serde(serialize_with = "serialize_fraction")]
        cell_average: Rational,
        #[serde(serialize_with = "serialize_fraction")]
        lower_bound: Rational,
        /// Sum of cell minima over all sign patterns, in units of `J`
        /// (symmetric `+-J` laws only).
        integer_sum: Option<i64>,
        configurations: u64,
        /// `c_d * sum / patterns` written out without reduction.
        enumeration_form: Option<String>,
        #[serde(serialize_with = "serialize_opt_fraction")]
        misfit_bound: Option<Rational>,
        #[serde(serialize_with = "serialize_fraction")]
        ideal_per_site: Rational,
    },
    Estimate {
        cell_average: f64,
        cell_stderr: f64,
        lower_bound: f64,
        stderr: f64,
        samples: usize,
        seed: u64,
        misfit_estimate: Option<f64>,
    },
}

/// Everything known about one computed bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub dimension: usize,
    pub distribution: String,
    #[serde(serialize_with = "serialize_fraction")]
    pub multiplicity_factor: Rational,
    pub method: BoundMethod,
    pub value: BoundValue,
    /// Lower bound rounded half-to-even at `precision` digits.
    pub decimal: String,
    pub precision: usize,
    pub comparison: Vec<ComparisonConstant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<SignCensus>,
    pub notes: Vec<String>,
    pub assumption_violated: bool,
}

impl BoundReport {
    pub fn exact_lower_bound(&self) -> Option<&Rational> {
        match &self.value {
            BoundValue::Exact { lower_bound, .. } => Some(lower_bound),
            BoundValue::Estimate { .. } => None,
        }
    }

    pub fn lower_bound_f64(&self) -> f64 {
        match &self.value {
            BoundValue::Exact { lower_bound, .. } => to_f64(lower_bound),
            BoundValue::Estimate { lower_bound, .. } => *lower_bound,
        }
    }

    pub fn set_precision(&mut self, digits: usize) {
        self.precision = digits;
        self.decimal = match &self.value {
            BoundValue::Exact { lower_bound, .. } => to_decimal(lower_bound, digits),
            BoundValue::Estimate { lower_bound, .. } => format!("{lower_bound:.digits$}"),
        };
    }

    /// `(label, upper value, lower_bound <= upper)` for each rigorous upper
    /// constant of the dimension.
    pub fn sandwich(&self) -> Vec<(&'static str, f64, bool)> {
        let lb = self.lower_bound_f64();
        self.comparison
            .iter()
            .filter(|c| c.role == ConstantRole::Upper)
            .map(|c| (c.label, c.as_f64(), lb <= c.as_f64()))
            .collect()
    }

    /// Plain-text rendering, with the comparison table beside the bound.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let d = self.dimension;
        let _ = writeln!(out, "dimension        {d}");
        let _ = writeln!(out, "distribution     {}", self.distribution);
        let _ = writeln!(out, "method           {}", self.method.name());
        let _ = writeln!(out, "factor c_{d}       {}", fraction_string(&self.multiplicity_factor));
        match &self.value {
            BoundValue::Exact {
                cell_average,
                lower_bound,
                integer_sum,
                configurations,
                enumeration_form,
                misfit_bound,
                ideal_per_site,
            } => {
                let _ = writeln!(
                    out,
                    "cell average     {} ({})",
                    fraction_string(cell_average),
                    to_decimal(cell_average, self.precision)
                );
                if let Some(sum) = integer_sum {
                    let _ = writeln!(out, "sum of minima    {sum} over {configurations} coupling patterns");
                }
                let _ = writeln!(out, "lower bound      e({d}) >= {} ({})", fraction_string(lower_bound), self.decimal);
                if let Some(form) = enumeration_form {
                    let _ = writeln!(out, "enumeration form {form} ({})", self.decimal);
                }
                if let Some(m) = misfit_bound {
                    let _ = writeln!(
                        out,
                        "misfit           m >= {} ({})  [reference {} per site]",
                        fraction_string(m),
                        to_decimal(m, self.precision),
                        fraction_string(ideal_per_site)
                    );
                }
            }
            BoundValue::Estimate {
                cell_average,
                cell_stderr,
                lower_bound,
                stderr,
                samples,
                seed,
                misfit_estimate,
            } => {
                let _ = writeln!(out, "ESTIMATE, NOT A RIGOROUS BOUND");
                let _ = writeln!(out, "cell average     {cell_average} +- {cell_stderr} ({samples} samples, seed {seed})");
                let _ = writeln!(out, "lower bound      e({d}) >= {lower_bound} +- {stderr} (estimate)");
                if let Some(m) = misfit_estimate {
                    let _ = writeln!(out, "misfit           m >= {m} (estimate)");
                }
            }
        }
        if let Some(census) = &self.census {
            let energies: Vec<String> = census
                .by_ground_energy
                .iter()
                .map(|(e, n)| format!("{e}: {n}"))
                .collect();
            let frustrated: Vec<String> = census
                .by_frustrated_count
                .iter()
                .map(|(f, n)| format!("{f}: {n}"))
                .collect();
            let _ = writeln!(out, "census           {} sign patterns", census.patterns);
            let _ = writeln!(out, "  ground energy  {{{}}}", energies.join(", "));
            let _ = writeln!(out, "  frustrated     {{{}}}", frustrated.join(", "));
            if d == 2 {
                let f = census.by_frustrated_count.get(&1).copied().unwrap_or(0);
                let u = census.by_frustrated_count.get(&0).copied().unwrap_or(0);
                let _ = writeln!(out, "  plaquettes     {f} frustrated, {u} unfrustrated");
            }
        }
        let _ = writeln!(out, "comparison (+-1 couplings, literature):");
        for c in &self.comparison {
            let role = match c.role {
                ConstantRole::Upper => "upper",
                ConstantRole::Lower => "lower",
                ConstantRole::HeuristicLower => "heuristic-lower",
                ConstantRole::Estimate => "estimate",
            };
            let _ = writeln!(out, "  {:<16} {:>8}  {}  [{}]", role, c.value, c.label, c.source);
        }
        for (label, upper, holds) in self.sandwich() {
            let _ = writeln!(
                out,
                "sandwich         {} <= e({d}) <= {upper}  ({}: {})",
                self.decimal,
                label,
                if holds { "consistent" } else { "INCONSISTENT" }
            );
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}
