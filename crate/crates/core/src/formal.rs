//! Truncated generating functions: finite formal sums of configurations with
//! exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::Add;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::configs::{enumerate_outgoing, CurveConfig};
use crate::error::{ConfigError, SolveError};
use crate::lattice::Rational;

/// A finite map from canonical configurations to nonzero rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<CurveConfig, Rational>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(config: CurveConfig, value: Rational) -> Self {
        let mut s = Self::new();
        s.add_term(config, value);
        s
    }

    /// Accumulate `value · config`, dropping the entry if it cancels.
    pub fn add_term(&mut self, config: CurveConfig, value: Rational) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(config) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += value;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Accumulate `scale · other`.
    pub fn add_scaled(&mut self, other: &FormalSum, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v * scale);
        }
    }

    pub fn coefficient_of(&self, config: &CurveConfig) -> Rational {
        self.terms.get(config).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurveConfig, &Rational)> {
        self.terms.iter()
    }

    pub fn configs(&self) -> impl Iterator<Item = &CurveConfig> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The terms whose configuration satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&CurveConfig) -> bool) -> FormalSum {
        FormalSum {
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect(),
        }
    }

    /// The connected part: `F` recovered from `e^F`.
    pub fn connected_part(&self) -> FormalSum {
        self.filter(CurveConfig::is_connected)
    }
}

impl Add for FormalSum {
    type Output = FormalSum;
    fn add(mut self, rhs: FormalSum) -> FormalSum {
        for (c, v) in rhs.terms {
            self.add_term(c, v);
        }
        self
    }
}

impl<'a> Add<&'a FormalSum> for &'a FormalSum {
    type Output = FormalSum;
    fn add(self, rhs: &'a FormalSum) -> FormalSum {
        self.clone() + rhs.clone()
    }
}

impl FromIterator<(CurveConfig, Rational)> for FormalSum {
    fn from_iter<I: IntoIterator<Item = (CurveConfig, Rational)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (c, v) in iter {
            s.add_term(c, v);
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    config: CurveConfig,
    value: Rational,
}

/// JSON array of `{config, value}` records in canonical key order.
impl Serialize for FormalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermRef<'a> {
            config: &'a CurveConfig,
            value: &'a Rational,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (config, value) in &self.terms {
            seq.serialize_element(&TermRef { config, value })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FormalSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(deserializer)?;
        Ok(terms.into_iter().map(|t| (t.config, t.value)).collect())
    }
}

/// Something that can produce the invariant `n_Γ` of a connected
/// outgoing-only configuration.
pub trait InvariantOracle {
    fn connected_invariant(&mut self, component: &CurveConfig) -> Result<Rational, SolveError>;
}

/// Coefficient of `config` in `e^F`: the product of the component
/// invariants divided by `|Aut config|`. The empty curve has coefficient 1.
pub fn exp_coefficient<O: InvariantOracle + ?Sized>(
    oracle: &mut O,
    config: &CurveConfig,
) -> Result<Rational, SolveError> {
    if !config.is_outgoing_only() {
        return Err(ConfigError::UnexpectedIncoming.into());
    }
    let mut product = Rational::one();
    for comp in config.split_components() {
        product = product * oracle.connected_invariant(&comp)?;
        if product.is_zero() {
            return Ok(product);
        }
    }
    Ok(product / Rational::from_integer(config.automorphism_order()))
}

/// `e^F` truncated to degree `≤ max_degree` and Euler characteristic
/// `≥ min_chi`.
pub fn assemble_exp<O: InvariantOracle + ?Sized>(
    oracle: &mut O,
    max_degree: i64,
    min_chi: i64,
) -> Result<FormalSum, SolveError> {
    if max_degree < 0 {
        return Err(SolveError::Bounds(max_degree));
    }
    let mut sum = FormalSum::new();
    for config in enumerate_outgoing(max_degree, min_chi, false) {
        let value = exp_coefficient(oracle, &config)?;
        sum.add_term(config, value);
    }
    Ok(sum)
}
