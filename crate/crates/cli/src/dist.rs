//! `--dist` parsing: `bernoulli`, `bernoulli:J`, `point:V`, `gaussian:SIGMA`,
//! `uniform:A` and `file:PATH`.

use std::fs;

use ea_bounds::bounds::{parse_table, ContinuousLaw, CouplingDistribution, DiscreteDistribution};
use ea_bounds::rational::{fraction_string, integer, parse_rational};
use ea_bounds::{Error, Result};

/// Parses a distribution spec. Laws with a nonzero mean are rejected unless
/// `allow_noncentered` is set.
pub fn parse_dist(spec: &str, allow_noncentered: bool) -> Result<CouplingDistribution> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let dist = match (kind, arg) {
        ("bernoulli", None) => CouplingDistribution::bernoulli(integer(1))?,
        ("bernoulli", Some(j)) => CouplingDistribution::bernoulli(parse_rational(j)?)?,
        ("point", Some(v)) => CouplingDistribution::Discrete(DiscreteDistribution::point_mass(parse_rational(v)?)?),
        ("gaussian", s) => {
            let sigma = parse_float(s.unwrap_or("1"))?;
            CouplingDistribution::gaussian(sigma)?
        }
        ("uniform", a) => {
            let law = ContinuousLaw::Uniform {
                half_width: parse_float(a.unwrap_or("1"))?,
            };
            law.validate()?;
            CouplingDistribution::Continuous(law)
        }
        ("file", Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
            let atoms = parse_table(&text)?;
            let dist = DiscreteDistribution::new_noncentered(atoms)?.with_label(format!("file:{path}"));
            CouplingDistribution::Discrete(dist)
        }
        _ => {
            return Err(Error::Parse(format!(
                "unknown distribution {spec:?}; expected bernoulli[:J], point:V, gaussian[:SIGMA], uniform[:A] or file:PATH"
            )))
        }
    };
    if !dist.is_centered() && !allow_noncentered {
        let mean = dist.as_discrete().map(|d| fraction_string(&d.mean())).unwrap_or_default();
        return Err(Error::NotCentered(format!("mean {mean} for {}; use --allow-noncentered to compute anyway", dist.describe())));
    }
    Ok(dist)
}

fn parse_float(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("not a number: {text:?}")))
}

/// Parses a comma-separated list of floats.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_float).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert!(parse_dist("bernoulli", false).unwrap().is_centered());
        let half = parse_dist("bernoulli:1/2", false).unwrap();
        assert_eq!(half.as_discrete().unwrap().abs_mean(), ea_bounds::rational::ratio(1, 2));
        assert!(matches!(parse_dist("point:1", false), Err(Error::NotCentered(_))));
        assert!(!parse_dist("point:1", true).unwrap().is_centered());
        assert!(parse_dist("gaussian:2", false).unwrap().as_discrete().is_none());
        assert!(parse_dist("gaussian:-1", false).is_err());
        assert!(parse_dist("cauchy", false).is_err());
        assert!(parse_dist("file:/nonexistent/table", true).is_err());
        assert_eq!(parse_list("0,0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_list("0,x").is_err());
    }
}
