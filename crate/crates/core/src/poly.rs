use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Exp, ExpVec, Monomial};
use crate::order::MonomialOrder;
use crate::ring::{same_ring, RingRef};

/// Sparse polynomial. Terms are stored with nonzero coefficients, sorted
/// descending by the ring-weighted reverse lexicographic order.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: RingRef<F>,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> std::hash::Hash for Polynomial<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &RingRef<F>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &RingRef<F>, c: F::Elem) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &RingRef<F>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef<F>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn term(ring: &RingRef<F>, m: Monomial, c: F::Elem) -> Self {
        let terms = if ring.field().is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn monomial(ring: &RingRef<F>, exps: &[Exp]) -> Self {
        Self::term(ring, Monomial::new(ring, exps), ring.field().one())
    }

    pub fn var(ring: &RingRef<F>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring, i), ring.field().one())
    }

    pub fn var_named(ring: &RingRef<F>, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.require(name)?))
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(ring: &RingRef<F>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let k = ring.field();
        let mut map: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => *v = k.add(v, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(ring, map)
    }

    fn from_map(ring: &RingRef<F>, map: HashMap<Monomial, F::Elem>) -> Self {
        let k = ring.field();
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp_canonical(&a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms already sorted canonically with nonzero coefficients.
    pub(crate) fn from_sorted(ring: &RingRef<F>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| w[0].0.cmp_canonical(&w[1].0) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field().is_one(&self.terms[0].1)
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp_canonical(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field().zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for v in m.support() {
                seen[v] = true;
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    /// Maximal scaled weighted degree; `None` for zero.
    pub fn scaled_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.scaled_degree())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self
                .terms
                .iter()
                .all(|(m, _)| m.scaled_degree() == m0.scaled_degree()),
        }
    }

    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial<F>> {
        let mut out: BTreeMap<u32, Vec<(Monomial, F::Elem)>> = BTreeMap::new();
        for t in &self.terms {
            out.entry(t.0.scaled_degree()).or_default().push(t.clone());
        }
        out.into_iter()
            .map(|(d, ts)| (d, Self::from_sorted(&self.ring, ts)))
            .collect()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &F::Elem)> {
        let co = order.compile(&self.ring);
        self.terms
            .iter()
            .max_by(|a, b| co.compare(a.0.exps(), b.0.exps()))
            .map(|(m, c)| (m, c))
    }

    /// Scaled so that the canonically largest term has coefficient one.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field().inv(c)),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let k = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp_canonical(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate {
                        k.neg(&b[j].1)
                    } else {
                        b[j].1.clone()
                    };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        k.sub(&a[i].1, &b[j].1)
                    } else {
                        k.add(&a[i].1, &b[j].1)
                    };
                    if !k.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(
            b[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { k.neg(c) } else { c.clone() })),
        );
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.try_mul_term(m, c);
        }
        let k = self.field();
        let mut map: HashMap<Monomial, F::Elem> = HashMap::with_capacity(small.len() * big.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ma.try_mul(mb)?;
                let c = k.mul(ca, cb);
                match map.get_mut(&m) {
                    Some(v) => *v = k.add(v, &c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ring, map))
    }

    pub fn try_mul_term(&self, m: &Monomial, c: &F::Elem) -> Result<Self> {
        let k = self.field();
        if k.is_zero(c) {
            return Ok(Self::zero(&self.ring));
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, d)| Ok((t.try_mul(m)?, k.mul(d, c))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let k = self.field();
        if k.is_zero(c) {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, d)| (m.clone(), k.mul(d, c)))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let k = self.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, d)| (m.clone(), k.neg(d)))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Raises every exponent and coefficient to the characteristic; this is
    /// the `p`-th power in characteristic `p`.
    fn frobenius(&self) -> Result<Self> {
        let k = self.field();
        let p = k.characteristic() as u64;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps = m
                    .exps()
                    .iter()
                    .map(|&e| u16::try_from(e as u64 * p).map_err(|_| Error::ExponentOverflow))
                    .collect::<Result<ExpVec>>()?;
                Ok((
                    Monomial::from_parts(exps, m.scaled_degree() * p as u32),
                    k.pow(c, p),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn try_pow(&self, mut e: u32) -> Result<Self> {
        let p = self.field().characteristic();
        let mut base = self.clone();
        if p > 0 {
            while e > 0 && e.is_multiple_of(p) {
                base = base.frobenius()?;
                e /= p;
            }
        }
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.try_pow(e).expect("exponent overflow")
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let k = self.field();
        let w = self.ring.int_weights()[var];
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .filter_map(|(m, c)| {
                let c = k.mul(c, &k.from_i64(m.exp(var) as i64));
                if k.is_zero(&c) {
                    return None;
                }
                let mut exps: ExpVec = m.exps().into();
                exps[var] -= 1;
                Some((Monomial::from_parts(exps, m.scaled_degree() - w), c))
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| t.div(m).map(|q| (q, c.clone())).ok_or(Error::NotDivisible))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Exact quotient `self / g`; fails when `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::Invalid("division by zero polynomial".into()));
        }
        let k = self.field();
        let (lm, lc) = g.terms[0].clone();
        let lc_inv = k.inv(&lc);
        let mut rest = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rest.terms.first().cloned() {
            let qm = m.div(&lm).ok_or(Error::NotDivisible)?;
            let qc = k.mul(&c, &lc_inv);
            rest = rest.merge(&g.try_mul_term(&qm, &qc)?, true);
            q.push((qm, qc));
        }
        Ok(Self::from_terms(&self.ring, q))
    }

    /// Substitutes `images[i]` for variable `i`; the images share one target ring.
    pub fn substitute(&self, target: &RingRef<F>, images: &[Polynomial<F>]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Invalid(
                "substitution needs one image per variable".into(),
            ));
        }
        if images.iter().any(|g| !same_ring(g.ring(), target)) {
            return Err(Error::RingMismatch);
        }
        let k = self.field();
        let mut powers: Vec<Vec<Polynomial<F>>> = vec![Vec::new(); images.len()];
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(target, c.clone());
            for v in m.support() {
                let e = m.exp(v) as usize;
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(Polynomial::one(target));
                }
                while cache.len() <= e {
                    let next = cache.last().unwrap().try_mul(&images[v])?;
                    cache.push(next);
                }
                prod = prod.try_mul(&cache[e])?;
            }
            for (pm, pc) in prod.terms {
                match acc.get_mut(&pm) {
                    Some(x) => *x = k.add(x, &pc),
                    None => {
                        acc.insert(pm, pc);
                    }
                }
            }
        }
        Ok(Self::from_map(target, acc))
    }

    /// Renames variables: variable `i` goes to `map[i]` in `target`. Fails
    /// if a variable without image occurs.
    pub fn map_vars(&self, target: &RingRef<F>, map: &[Option<usize>]) -> Result<Self> {
        if target.field() != self.field() {
            return Err(Error::RingMismatch);
        }
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps: ExpVec = smallvec::SmallVec::from_elem(0, n);
            for v in m.support() {
                let t = map[v].ok_or_else(|| {
                    Error::Invalid(format!("variable {} has no image", self.ring.name(v)))
                })?;
                exps[t] += m.exp(v);
            }
            terms.push((Monomial::new(target, &exps), c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Moves the polynomial into `target` by matching variable names.
    pub fn embed(&self, target: &RingRef<F>) -> Result<Self> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ring.names().iter().map(|n| target.index(n)).collect();
        self.map_vars(target, &map)
    }

    /// Substitutes field constants for some variables, keeping the others.
    pub fn specialize(&self, values: &[(usize, F::Elem)]) -> Self {
        let k = self.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut exps: ExpVec = m.exps().into();
            for (v, val) in values {
                let e = exps[*v];
                if e > 0 {
                    c = k.mul(&c, &k.pow(val, e as u64));
                    exps[*v] = 0;
                }
            }
            terms.push((Monomial::new(&self.ring, &exps), c));
        }
        Self::from_terms(&self.ring, terms)
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}

impl<F: Field> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(&self)
    }
}

/// Sum of a list of polynomials in one ring.
pub fn sum<F: Field>(
    ring: &RingRef<F>,
    items: impl IntoIterator<Item = Polynomial<F>>,
) -> Polynomial<F> {
    items
        .into_iter()
        .fold(Polynomial::zero(ring), |a, b| &a + &b)
}

/// Product of a list of polynomials in one ring.
pub fn product<F: Field>(
    ring: &RingRef<F>,
    items: impl IntoIterator<Item = Polynomial<F>>,
) -> Polynomial<F> {
    items
        .into_iter()
        .fold(Polynomial::one(ring), |a, b| &a * &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;

    fn f2() -> RingRef<PrimeField> {
        Ring::new(PrimeField::new(2).unwrap(), &["t", "X", "Y"]).unwrap()
    }

    #[test]
    fn char_two_sign_collapse() {
        let r = f2();
        let x = Polynomial::var(&r, 1);
        let y = Polynomial::var(&r, 2);
        assert_eq!(&(&x + &y) * &(&x - &y), &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn derivative_of_pth_power_vanishes() {
        let r = Ring::new(PrimeField::new(3).unwrap(), &["X"]).unwrap();
        let x = Polynomial::var(&r, 0);
        assert!(x.pow(3).derivative(0).is_zero());
        assert_eq!(x.pow(4).derivative(0), x.pow(3));
    }

    #[test]
    fn substitution_shear() {
        let r = f2();
        let (t, x, y) = (
            Polynomial::var(&r, 0),
            Polynomial::var(&r, 1),
            Polynomial::var(&r, 2),
        );
        let img = vec![t.clone(), &(&t * &x) + &y, y.clone()];
        let got = x.pow(2).substitute(&r, &img).unwrap();
        assert_eq!(got, &(&t * &t) * &(&x * &x) + &y * &y);
    }

    #[test]
    fn exact_division() {
        let r = f2();
        let (x, y) = (Polynomial::var(&r, 1), Polynomial::var(&r, 2));
        let g = &x + &y;
        let h = &g * &(&x * &x + y.clone());
        assert_eq!(h.div_exact(&g).unwrap(), &x * &x + y.clone());
        assert!(x.div_exact(&y).is_err());
        let m = Monomial::new(&r, &[0, 1, 0]);
        assert!(y.divide_by_monomial(&m).is_err());
    }

    #[test]
    fn frobenius_power_matches_repeated_product() {
        let r = Ring::new(PrimeField::new(3).unwrap(), &["X", "Y"]).unwrap();
        let f = Polynomial::var(&r, 0) + Polynomial::from_i64(&r, 2) * Polynomial::var(&r, 1);
        let slow = (0..6).fold(Polynomial::one(&r), |a, _| &a * &f);
        assert_eq!(f.pow(6), slow);
    }
}
