//! Single-bond coupling laws: discrete laws with exact rational atoms, and
//! continuous laws that can only be sampled.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fraction_string, integer, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub value: Rational,
    pub probability: Rational,
}

/// A finitely supported law with exact probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
    centered: bool,
    label: Option<String>,
    // integer weights and their denominator, when both fit a u64
    sampling: Option<(Vec<u64>, u64)>,
}

impl DiscreteDistribution {
    /// A centered law; non-centered atom tables are rejected.
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        let dist = Self::build(atoms)?;
        if !dist.centered {
            return Err(Error::NotCentered(format!("mean {}", fraction_string(&dist.mean()))));
        }
        Ok(dist)
    }

    /// Accepts a non-centered table. Bounds computed from it are outside
    /// the zero-mean assumption and are marked as such in reports.
    pub fn new_noncentered(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        Self::build(atoms)
    }

    fn build(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut total = Rational::zero();
        for (value, p) in &atoms {
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "probability {} of atom {} is not positive",
                    fraction_string(p),
                    fraction_string(value)
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}, not 1",
                fraction_string(&total)
            )));
        }
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(value, probability)| Atom { value, probability })
            .collect();
        let mean = atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.value * &a.probability);
        let mut dist = DiscreteDistribution {
            atoms,
            centered: mean.is_zero(),
            label: None,
            sampling: None,
        };
        let (weights, q) = dist.integer_weights();
        dist.sampling = q
            .to_u64()
            .zip(weights.iter().map(|w| w.to_u64()).collect::<Option<Vec<_>>>())
            .map(|(q, w)| (w, q));
        Ok(dist)
    }

    /// The symmetric law `(delta_J + delta_-J) / 2`.
    pub fn bernoulli(j: Rational) -> Result<Self> {
        if !j.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "bernoulli scale must be positive, got {}",
                fraction_string(&j)
            )));
        }
        let half = Rational::new(1.into(), 2.into());
        let mut d = Self::new(vec![(j.clone(), half.clone()), (-j.clone(), half)])?;
        d.label = Some(format!("bernoulli(J={})", fraction_string(&j)));
        Ok(d)
    }

    /// A deterministic coupling. Only `0` is centered.
    pub fn point_mass(value: Rational) -> Result<Self> {
        let label = format!("point({})", fraction_string(&value));
        let mut d = Self::new_noncentered(vec![(value, integer(1))])?;
        d.label = Some(label);
        Ok(d)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn mean(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.value * &a.probability)
    }

    pub fn abs_mean(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + a.value.abs() * &a.probability)
    }

    /// `Some(J)` when the law is exactly `(delta_J + delta_-J) / 2`.
    pub fn symmetric_sign_scale(&self) -> Option<Rational> {
        let half = Rational::new(1.into(), 2.into());
        match self.atoms.as_slice() {
            [a, b] if a.probability == half
                && b.probability == half
                && a.value == -b.value.clone()
                && !a.value.is_zero() =>
            {
                Some(a.value.abs())
            }
            _ => None,
        }
    }

    /// Integer weights `w_k` and common denominator `Q` with `p_k = w_k / Q`.
    pub fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        let q = self
            .atoms
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.probability.denom()));
        let w = self
            .atoms
            .iter()
            .map(|a| a.probability.numer() * (&q / a.probability.denom()))
            .collect();
        (w, q)
    }

    /// Draws an atom index exactly: a uniform integer below the common
    /// probability denominator is compared with cumulative integer weights.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.sampling {
            Some((weights, q)) => {
                let mut u = rng.random_range(0..*q);
                for (k, w) in weights.iter().enumerate() {
                    if u < *w {
                        return k;
                    }
                    u -= w;
                }
                weights.len() - 1
            }
            None => {
                // Denominators beyond 64 bits: fall back to a float draw.
                let mut u: f64 = rng.random();
                for (k, a) in self.atoms.iter().enumerate() {
                    let p = crate::rational::to_f64(&a.probability);
                    if u < p {
                        return k;
                    }
                    u -= p;
                }
                self.atoms.len() - 1
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Rational {
        &self.atoms[self.sample_index(rng)].value
    }

    pub fn describe(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        let atoms: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("{}:{}", fraction_string(&a.value), fraction_string(&a.probability)))
            .collect();
        format!("discrete[{}]", atoms.join(","))
    }
}

impl fmt::Display for DiscreteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Reads a table of `value probability` lines, both exact fractions.
/// Blank lines and `#` comments are ignored.
///
/// ```text
/// # symmetric +-1
/// -1 1/2
///  1 1/2
/// ```
pub fn parse_table(text: &str) -> Result<Vec<(Rational, Rational)>> {
    let mut atoms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [value, probability] = fields.as_slice() else {
            return Err(Error::Parse(format!(
                "line {}: expected `value probability`, got {raw:?}",
                lineno + 1
            )));
        };
        let value = parse_rational(value).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let probability =
            parse_rational(probability).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        atoms.push((value, probability));
    }
    if atoms.is_empty() {
        return Err(Error::Parse("distribution table has no entries".into()));
    }
    let total = atoms.iter().fold(Rational::zero(), |acc, (_, p)| acc + p);
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!(
            "table probabilities sum to {}, not 1",
            fraction_string(&total)
        )));
    }
    Ok(atoms)
}

/// Continuous laws, available only through sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ContinuousLaw {
    /// Centered normal with the given standard deviation.
    Gaussian { std_dev: f64 },
    /// Uniform on `[-half_width, half_width]`.
    Uniform { half_width: f64 },
}

impl ContinuousLaw {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            ContinuousLaw::Gaussian { std_dev } => ("std_dev", std_dev),
            ContinuousLaw::Uniform { half_width } => ("half_width", half_width),
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
        }
        Ok(())
    }

    pub fn abs_mean(&self) -> f64 {
        match *self {
            ContinuousLaw::Gaussian { std_dev } => std_dev * (2.0 / std::f64::consts::PI).sqrt(),
            ContinuousLaw::Uniform { half_width } => half_width / 2.0,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ContinuousLaw::Gaussian { std_dev } => format!("gaussian(sigma={std_dev})"),
            ContinuousLaw::Uniform { half_width } => format!("uniform(-{half_width},{half_width})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingDistribution {
    Discrete(DiscreteDistribution),
    Continuous(ContinuousLaw),
}

impl CouplingDistribution {
    pub fn bernoulli(j: Rational) -> Result<Self> {
        DiscreteDistribution::bernoulli(j).map(CouplingDistribution::Discrete)
    }

    pub fn gaussian(std_dev: f64) -> Result<Self> {
        let law = ContinuousLaw::Gaussian { std_dev };
        law.validate()?;
        Ok(CouplingDistribution::Continuous(law))
    }

    pub fn as_discrete(&self) -> Option<&DiscreteDistribution> {
        match self {
            CouplingDistribution::Discrete(d) => Some(d),
            CouplingDistribution::Continuous(_) => None,
        }
    }

    pub fn is_centered(&self) -> bool {
        match self {
            CouplingDistribution::Discrete(d) => d.is_centered(),
            CouplingDistribution::Continuous(_) => true,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CouplingDistribution::Discrete(d) => d.describe(),
            CouplingDistribution::Continuous(c) => c.describe(),
        }
    }

    pub fn sampler(&self) -> Result<CouplingSampler<'_>> {
        Ok(match self {
            CouplingDistribution::Discrete(d) => CouplingSampler::Discrete(d),
            CouplingDistribution::Continuous(ContinuousLaw::Gaussian { std_dev }) => CouplingSampler::Gaussian(
                Normal::new(0.0, *std_dev).map_err(|e| Error::InvalidParameter(e.to_string()))?,
            ),
            CouplingDistribution::Continuous(ContinuousLaw::Uniform { half_width }) => {
                CouplingSampler::Uniform(*half_width)
            }
        })
    }
}

/// Draws single couplings as `f64`.
#[derive(Debug, Clone)]
pub enum CouplingSampler<'a> {
    Discrete(&'a DiscreteDistribution),
    Gaussian(Normal<f64>),
    Uniform(f64),
}

impl CouplingSampler<'_> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            CouplingSampler::Discrete(d) => crate::rational::to_f64(d.sample(rng)),
            CouplingSampler::Gaussian(n) => n.sample(rng),
            CouplingSampler::Uniform(w) => rng.random_range(-*w..=*w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bernoulli_atoms() {
        let d = DiscreteDistribution::bernoulli(integer(1)).unwrap();
        let atoms: Vec<_> = d.atoms().iter().map(|a| (a.value.clone(), a.probability.clone())).collect();
        assert_eq!(atoms, vec![(integer(1), ratio(1, 2)), (integer(-1), ratio(1, 2))]);
        assert!(d.mean().is_zero());
        let d = DiscreteDistribution::bernoulli(integer(2)).unwrap();
        assert_eq!(d.atoms()[1].value, integer(-2));
        assert_eq!(d.symmetric_sign_scale(), Some(integer(2)));
        assert!(DiscreteDistribution::bernoulli(integer(0)).is_err());
        assert!(DiscreteDistribution::bernoulli(integer(-1)).is_err());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            DiscreteDistribution::new(vec![(integer(1), ratio(1, 2)), (integer(-1), ratio(1, 3))]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![(integer(1), integer(1))]),
            Err(Error::NotCentered(_))
        ));
        assert!(DiscreteDistribution::new(vec![(integer(1), ratio(3, 2)), (integer(-1), ratio(-1, 2))]).is_err());
        let p = DiscreteDistribution::point_mass(integer(1)).unwrap();
        assert!(!p.is_centered());
        assert_eq!(p.symmetric_sign_scale(), None);
        let skew = DiscreteDistribution::new(vec![(integer(2), ratio(1, 3)), (integer(-1), ratio(2, 3))]).unwrap();
        assert!(skew.is_centered());
        assert_eq!(skew.abs_mean(), ratio(4, 3));
    }

    #[test]
    fn table_parsing() {
        let atoms = parse_table("# pm J\n-1 1/2\n 1 1/2  # up\n\n").unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0], (integer(-1), ratio(1, 2)));
        assert!(matches!(parse_table("1 1/2\n-1 1/4\n"), Err(Error::InvalidDistribution(_))));
        assert!(parse_table("1 1/2 3\n").is_err());
        assert!(parse_table("\n# nothing\n").is_err());
        assert!(parse_table("x 1\n").is_err());
        assert_eq!(parse_table("1 1").unwrap(), vec![(integer(1), integer(1))]);
    }

    #[test]
    fn exact_sampling_frequencies() {
        let d = DiscreteDistribution::new(vec![
            (integer(-2), ratio(1, 4)),
            (integer(0), ratio(1, 4)),
            (integer(1), ratio(1, 2)),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0usize; 3];
        for _ in 0..40_000 {
            counts[d.sample_index(&mut rng)] += 1;
        }
        assert!((counts[2] as f64 / 40_000.0 - 0.5).abs() < 0.01, "{counts:?}");
        assert!((counts[0] as f64 / 40_000.0 - 0.25).abs() < 0.01, "{counts:?}");
    }

    #[test]
    fn continuous_validation() {
        assert!(CouplingDistribution::gaussian(0.0).is_err());
        assert!(CouplingDistribution::gaussian(f64::NAN).is_err());
        assert!(CouplingDistribution::gaussian(1.0).unwrap().is_centered());
    }
}
