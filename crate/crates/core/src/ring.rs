use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::Field;

pub type Weight = Ratio<u64>;

/// Variables, their degrees and the coefficient field.
///
/// Degrees may be fractional; `int_weights` holds them scaled by the least
/// common denominator so that monomial degrees stay integral.
#[derive(Clone)]
pub struct Ring<F: Field> {
    field: F,
    names: Vec<String>,
    weights: Vec<Weight>,
    int_weights: Vec<u32>,
    scale: u64,
    index: HashMap<String, usize>,
}

pub type RingRef<F> = Arc<Ring<F>>;

impl<F: Field> PartialEq for Ring<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.names == other.names && self.weights == other.weights
    }
}

impl<F: Field> Eq for Ring<F> {}

impl<F: Field> fmt::Debug for Ring<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.header())
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(field: F, names: &[S]) -> Result<RingRef<F>> {
        let weights = vec![Weight::from_integer(1); names.len()];
        Self::with_weights(field, names, weights)
    }

    pub fn with_int_weights<S: AsRef<str>>(
        field: F,
        names: &[S],
        weights: &[u32],
    ) -> Result<RingRef<F>> {
        let weights = weights
            .iter()
            .map(|&w| Weight::from_integer(w as u64))
            .collect();
        Self::with_weights(field, names, weights)
    }

    pub fn with_weights<S: AsRef<str>>(
        field: F,
        names: &[S],
        weights: Vec<Weight>,
    ) -> Result<RingRef<F>> {
        if weights.len() != names.len() {
            return Err(Error::Invalid(
                "weight list length differs from variable list".into(),
            ));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(Error::Parse(format!("bad variable name {n:?}")));
            }
            if index.insert(n.to_string(), i).is_some() {
                return Err(Error::DuplicateVariable(n.to_string()));
            }
            if *weights[i].numer() == 0 {
                return Err(Error::BadWeight(n.to_string()));
            }
        }
        let scale = weights.iter().fold(1u64, |acc, w| acc.lcm(w.denom()));
        let int_weights = weights
            .iter()
            .zip(names)
            .map(|(w, n)| {
                let v = (w * scale).to_integer();
                u32::try_from(v).map_err(|_| Error::BadWeight(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Ring {
            field,
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            weights,
            int_weights,
            scale,
            index,
        }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Weights multiplied by [`Ring::weight_scale`].
    pub fn int_weights(&self) -> &[u32] {
        &self.int_weights
    }

    pub fn weight_scale(&self) -> u64 {
        self.scale
    }

    pub fn has_unit_weights(&self) -> bool {
        self.int_weights.iter().all(|&w| w == 1) && self.scale == 1
    }

    /// Ring with the same field and weights but the given variables appended.
    pub fn extend<S: AsRef<str>>(&self, names: &[S], weights: &[Weight]) -> Result<RingRef<F>> {
        let mut all: Vec<String> = self.names.clone();
        all.extend(names.iter().map(|s| s.as_ref().to_string()));
        let mut w = self.weights.clone();
        w.extend_from_slice(weights);
        Ring::with_weights(self.field.clone(), &all, w)
    }

    /// Ring with the given variables placed in front of the existing ones.
    pub fn prepend<S: AsRef<str>>(&self, names: &[S], weights: &[Weight]) -> Result<RingRef<F>> {
        let mut all: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        all.extend(self.names.iter().cloned());
        let mut w = weights.to_vec();
        w.extend_from_slice(&self.weights);
        Ring::with_weights(self.field.clone(), &all, w)
    }

    /// Ring on a subset of the variables, in the given order.
    pub fn subring(&self, keep: &[usize]) -> Result<RingRef<F>> {
        let names: Vec<&str> = keep.iter().map(|&i| self.names[i].as_str()).collect();
        let w = keep.iter().map(|&i| self.weights[i]).collect();
        Ring::with_weights(self.field.clone(), &names, w)
    }

    /// A fresh variable name not yet used in this ring.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.index(stem).is_none() {
            return stem.to_string();
        }
        (0..)
            .map(|i| format!("{stem}_{i}"))
            .find(|n| self.index(n).is_none())
            .expect("unbounded search")
    }

    pub fn header(&self) -> String {
        let mut s = format!("ring {}[{}]", self.field.descriptor(), self.names.join(","));
        if !self.weights.iter().all(|w| *w == Weight::from_integer(1)) {
            let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
            s.push_str(&format!(" weights [{}]", ws.join(",")));
        }
        s
    }
}

pub fn same_ring<F: Field>(a: &RingRef<F>, b: &RingRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn fractional_weights_scale() {
        let f = PrimeField::new(3).unwrap();
        let w = vec![
            Weight::new(1, 3),
            Weight::new(1, 3),
            Weight::from_integer(1),
        ];
        let r = Ring::with_weights(f, &["X0", "Y0", "X1"], w).unwrap();
        assert_eq!(r.int_weights(), &[1, 1, 3]);
        assert_eq!(r.weight_scale(), 3);
        assert_eq!(r.header(), "ring F3[X0,Y0,X1] weights [1/3,1/3,1]");
    }

    #[test]
    fn rejects_duplicates_and_zero_weights() {
        let f = PrimeField::new(2).unwrap();
        assert!(Ring::new(f, &["X", "X"]).is_err());
        assert!(Ring::with_int_weights(f, &["X"], &[0]).is_err());
        assert!(Ring::new(f, &["1X"]).is_err());
    }
}
