use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{Ring, Weight};

pub type Exp = u16;
pub type ExpVec = SmallVec<[Exp; 12]>;

/// Exponent vector together with its weighted degree (scaled to an integer
/// by the ring's weight scale).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: ExpVec,
    deg: u32,
}

fn weighted(exps: &[Exp], w: &[u32]) -> u32 {
    exps.iter().zip(w).map(|(&e, &w)| e as u32 * w).sum()
}

impl Monomial {
    pub fn new<F: Field>(ring: &Ring<F>, exps: &[Exp]) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "exponent vector length");
        Monomial {
            deg: weighted(exps, ring.int_weights()),
            exps: exps.into(),
        }
    }

    pub(crate) fn from_parts(exps: ExpVec, deg: u32) -> Self {
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            deg: 0,
        }
    }

    pub fn var<F: Field>(ring: &Ring<F>, i: usize) -> Self {
        let mut exps: ExpVec = SmallVec::from_elem(0, ring.nvars());
        exps[i] = 1;
        Monomial {
            exps,
            deg: ring.int_weights()[i],
        }
    }

    pub fn exps(&self) -> &[Exp] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> Exp {
        self.exps[i]
    }

    /// Weighted degree scaled by the ring's weight scale.
    pub fn scaled_degree(&self) -> u32 {
        self.deg
    }

    pub fn degree<F: Field>(&self, ring: &Ring<F>) -> Weight {
        Weight::new(self.deg as u64, ring.weight_scale())
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut exps = self.exps.clone();
        for (a, &b) in exps.iter_mut().zip(&other.exps) {
            *a = a.checked_add(b).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial {
            exps,
            deg: self.deg + other.deg,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.try_mul(other).expect("exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a - b)
            .collect();
        Some(Monomial {
            exps,
            deg: self.deg - other.deg,
        })
    }

    pub fn lcm<F: Field>(&self, other: &Monomial, ring: &Ring<F>) -> Monomial {
        let exps: ExpVec = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.max(b))
            .collect();
        Monomial {
            deg: weighted(&exps, ring.int_weights()),
            exps,
        }
    }

    pub fn gcd<F: Field>(&self, other: &Monomial, ring: &Ring<F>) -> Monomial {
        let exps: ExpVec = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.min(b))
            .collect();
        Monomial {
            deg: weighted(&exps, ring.int_weights()),
            exps,
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Weighted reverse lexicographic comparison with the ring's weights,
    /// the canonical storage order of polynomials.
    pub fn cmp_canonical(&self, other: &Monomial) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn degree_and_division() {
        let r = Ring::with_int_weights(PrimeField::new(2).unwrap(), &["X", "Y"], &[1, 2]).unwrap();
        let a = Monomial::new(&r, &[2, 1]);
        let b = Monomial::new(&r, &[1, 1]);
        assert_eq!(a.scaled_degree(), 4);
        assert_eq!(a.div(&b).unwrap(), Monomial::new(&r, &[1, 0]));
        assert!(b.div(&a).is_none());
        assert_eq!(
            a.lcm(&Monomial::new(&r, &[0, 3]), &r),
            Monomial::new(&r, &[2, 3])
        );
    }
}
