use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::cache;
use super::dimension::monomial_dimension;
use super::fglm::fglm;
use super::hilbert::{hilbert_numerator, times_one_minus, Series};
use super::{check_ring, groebner_basis, normal_form};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, RingRef, Weight};
use crate::text::{FieldFromDescriptor, PolyFile};

/// An ideal given by generators, with reduced Groebner bases cached per order.
pub struct Ideal<F: Field> {
    ring: RingRef<F>,
    generators: Vec<Polynomial<F>>,
    bases: Mutex<HashMap<MonomialOrder, Arc<Vec<Polynomial<F>>>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            bases: Mutex::new(self.bases.lock().unwrap().clone()),
        }
    }
}

impl<F: Field> std::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal{:?}", self.generators)
    }
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &RingRef<F>, generators: Vec<Polynomial<F>>) -> Result<Self> {
        check_ring(ring, &generators)?;
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring: ring.clone(),
            generators,
            bases: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(ring: &RingRef<F>) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            bases: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    /// Records a basis known to be the reduced Groebner basis for `order`.
    pub fn seed_basis(&self, order: MonomialOrder, basis: Vec<Polynomial<F>>) {
        self.bases.lock().unwrap().insert(order, Arc::new(basis));
    }

    fn cache_key(&self, order: &MonomialOrder) -> String {
        let mut s = format!("{}\n{order}\n", self.ring.header());
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        cache::digest(&s)
    }

    pub fn groebner(&self, order: &MonomialOrder) -> Result<Arc<Vec<Polynomial<F>>>> {
        if let Some(b) = self.bases.lock().unwrap().get(order) {
            return Ok(b.clone());
        }
        let disk = cache::dir().is_some() && !self.generators.is_empty();
        let key = if disk {
            self.cache_key(order)
        } else {
            String::new()
        };
        let mut basis = None;
        if disk {
            if let Some(body) = cache::load(&key)? {
                let text = format!("{}\n{body}", self.ring.header());
                basis = Some(parse_cached(&self.ring, &text)?);
            }
        }
        let basis = match basis {
            Some(b) => b,
            None => {
                let b = match order {
                    MonomialOrder::Lex | MonomialOrder::Block { .. }
                        if self.generators.len() >= self.ring.nvars() =>
                    {
                        let g = self.basis()?;
                        let leads: Vec<Vec<u16>> = g
                            .iter()
                            .map(|f| {
                                f.leading_term(&MonomialOrder::Grevlex)
                                    .unwrap()
                                    .0
                                    .exps()
                                    .to_vec()
                            })
                            .collect();
                        if monomial_dimension(self.ring.nvars(), &leads) == 0 {
                            fglm(&self.ring, &g, &MonomialOrder::Grevlex, order)?
                        } else {
                            groebner_basis(&self.ring, &self.generators, order)?
                        }
                    }
                    _ => groebner_basis(&self.ring, &self.generators, order)?,
                };
                if disk {
                    let mut body = String::new();
                    for g in &b {
                        body.push_str(&g.to_string());
                        body.push('\n');
                    }
                    cache::store(&key, &body)?;
                }
                b
            }
        };
        let b = Arc::new(basis);
        self.bases.lock().unwrap().insert(order.clone(), b.clone());
        Ok(b)
    }

    /// Reduced Groebner basis under grevlex.
    pub fn basis(&self) -> Result<Arc<Vec<Polynomial<F>>>> {
        self.groebner(&MonomialOrder::Grevlex)
    }

    pub fn reduce(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        normal_form(f, &self.basis()?, &MonomialOrder::Grevlex)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal<F>) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.iter().any(|g| g.is_constant()))
    }

    pub fn with_generators(&self, extra: &[Polynomial<F>]) -> Result<Ideal<F>> {
        let mut g = self.generators.clone();
        g.extend_from_slice(extra);
        Ideal::new(&self.ring, g)
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        self.with_generators(&other.generators)
    }

    /// Krull dimension of `P/I`; `-1` for the unit ideal.
    pub fn dimension(&self) -> Result<i64> {
        let leads: Vec<Vec<u16>> = self
            .basis()?
            .iter()
            .map(|g| {
                g.leading_term(&MonomialOrder::Grevlex)
                    .unwrap()
                    .0
                    .exps()
                    .to_vec()
            })
            .collect();
        Ok(monomial_dimension(self.ring.nvars(), &leads))
    }

    /// `n - dim P/I`; the unit ideal gets `n + 1`.
    pub fn height(&self) -> Result<i64> {
        Ok(self.ring.nvars() as i64 - self.dimension()?)
    }

    /// Height of `self` in the domain `P / presentation`.
    pub fn height_in_quotient(&self, presentation: &Ideal<F>) -> Result<i64> {
        Ok(presentation.dimension()? - presentation.sum(self)?.dimension()?)
    }

    /// Numerator of the Hilbert series of `P/I` (homogeneous ideals only).
    pub fn hilbert_numerator(&self) -> Result<Series> {
        if !self.is_homogeneous() {
            return Err(Error::Invalid(
                "Hilbert series of a non-homogeneous ideal".into(),
            ));
        }
        let leads: Vec<Vec<u16>> = self
            .basis()?
            .iter()
            .map(|g| {
                g.leading_term(&MonomialOrder::Grevlex)
                    .unwrap()
                    .0
                    .exps()
                    .to_vec()
            })
            .collect();
        Ok(hilbert_numerator(&leads, self.ring.int_weights()))
    }
}

fn parse_cached<F: Field>(ring: &RingRef<F>, text: &str) -> Result<Vec<Polynomial<F>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    lines.next();
    lines.map(|l| crate::text::parse_poly(ring, l)).collect()
}

impl<F: FieldFromDescriptor> Ideal<F> {
    pub fn from_file(file: &PolyFile<F>) -> Result<Self> {
        Ideal::new(&file.ring, file.polys.clone())
    }
}

/// `I ∩ K[kept variables]`, as an ideal of the ring on the kept variables.
pub fn eliminate<F: Field>(ideal: &Ideal<F>, drop: &[usize]) -> Result<Ideal<F>> {
    if !ideal.is_homogeneous() {
        return eliminate_homogenized(ideal, drop);
    }
    let ring = ideal.ring();
    let gb = ideal.groebner(&MonomialOrder::graded_elimination(ring, drop.to_vec()))?;
    let keep: Vec<usize> = (0..ring.nvars()).filter(|v| !drop.contains(v)).collect();
    let sub = ring.subring(&keep)?;
    let mut map = vec![None; ring.nvars()];
    for (j, &v) in keep.iter().enumerate() {
        map[v] = Some(j);
    }
    let gens = gb
        .iter()
        .filter(|g| drop.iter().all(|&v| !g.involves(v)))
        .map(|g| g.map_vars(&sub, &map))
        .collect::<Result<Vec<_>>>()?;
    let out = Ideal::new(&sub, gens.clone())?;
    out.seed_basis(MonomialOrder::Grevlex, gens);
    Ok(out)
}

/// Eliminates from the ideal of homogenized generators, then sets the new
/// variable to one. The result is a generating set, not a basis.
fn eliminate_homogenized<F: Field>(ideal: &Ideal<F>, drop: &[usize]) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let big = ring.extend(
        &[ring.fresh_name("h")],
        &[Weight::new(1, ring.weight_scale())],
    )?;
    let w = big.int_weights().to_vec();
    let mut gens = Vec::new();
    for g in ideal.generators() {
        let top = g
            .terms()
            .iter()
            .map(|(m, _)| m.scaled_degree())
            .max()
            .unwrap_or(0);
        let terms = g
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.push(((top - m.scaled_degree()) / w[n]) as Exp);
                (Monomial::new(&big, &e), c.clone())
            })
            .collect();
        gens.push(Polynomial::from_terms(&big, terms));
    }
    let e = eliminate(&Ideal::new(&big, gens)?, drop)?;
    let sub = e.ring().clone();
    let h = sub.nvars() - 1;
    let keep = sub.subring(&(0..h).collect::<Vec<_>>())?;
    let one = sub.field().one();
    let gens = e
        .generators()
        .iter()
        .map(|g| g.specialize(&[(h, one.clone())]).embed(&keep))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(&keep, gens)
}

/// `I ∩ J` by eliminating `t` from `t*I + (1-t)*J`.
pub fn intersect<F: Field>(a: &Ideal<F>, b: &Ideal<F>) -> Result<Ideal<F>> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let ring = a.ring();
    let t_name = ring.fresh_name("t");
    let big = ring.prepend(&[t_name], &[Weight::from_integer(1)])?;
    let t = Polynomial::var(&big, 0);
    let one_minus_t = &Polynomial::one(&big) - &t;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&t * &g.embed(&big)?);
    }
    for g in b.generators() {
        gens.push(&one_minus_t * &g.embed(&big)?);
    }
    let e = eliminate(&Ideal::new(&big, gens)?, &[0])?;
    let gens = e
        .generators()
        .iter()
        .map(|g| g.embed(ring))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ring, gens)
}

/// `I : f`, computed from `I ∩ (f)` by exact division.
pub fn quotient<F: Field>(ideal: &Ideal<F>, f: &Polynomial<F>) -> Result<Ideal<F>> {
    if f.is_zero() {
        return Err(Error::Invalid("quotient by the zero polynomial".into()));
    }
    if !same_ring(ideal.ring(), f.ring()) {
        return Err(Error::RingMismatch);
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    let inter = intersect(ideal, &Ideal::new(ideal.ring(), vec![f.clone()])?)?;
    let mut gens = Vec::with_capacity(inter.generators().len());
    for g in inter.generators() {
        let q = g.div_exact(f)?;
        if !ideal.contains(&(&q * f))? {
            return Err(Error::Verification(
                "quotient generator times f not in the ideal".into(),
            ));
        }
        gens.push(q);
    }
    Ideal::new(ideal.ring(), gens)
}

/// Whether `f` is a zero divisor modulo `I`, i.e. `I : f != I`.
pub fn is_zero_divisor<F: Field>(f: &Polynomial<F>, ideal: &Ideal<F>) -> Result<bool> {
    if ideal.is_unit()? {
        return Ok(false);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let q = quotient(ideal, f)?;
    Ok(!ideal.contains_ideal(&q)?)
}

/// Zero-divisor test for homogeneous `f` and `I` by comparing Hilbert series:
/// `f` is regular on `P/I` exactly when `HS(P/(I+f)) = (1 - t^deg f) HS(P/I)`.
pub fn is_zero_divisor_graded<F: Field>(f: &Polynomial<F>, ideal: &Ideal<F>) -> Result<bool> {
    if !f.is_homogeneous() || !ideal.is_homogeneous() {
        return Err(Error::Invalid(
            "graded zero-divisor test needs homogeneous input".into(),
        ));
    }
    if ideal.is_unit()? {
        return Ok(false);
    }
    let Some(d) = f.scaled_degree() else {
        return Ok(true);
    };
    let n_i = ideal.hilbert_numerator()?;
    let n_if = ideal
        .with_generators(std::slice::from_ref(f))?
        .hilbert_numerator()?;
    Ok(n_if != times_one_minus(&n_i, d as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;
    use crate::text::parse_poly;

    fn setup(names: &[&str]) -> RingRef<PrimeField> {
        Ring::new(PrimeField::new(7).unwrap(), names).unwrap()
    }

    fn ideal(r: &RingRef<PrimeField>, gens: &[&str]) -> Ideal<PrimeField> {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let r = setup(&["X", "Y"]);
        let p = |s| parse_poly(&r, s).unwrap();
        assert!(quotient(&ideal(&r, &["X*Y"]), &p("X"))
            .unwrap()
            .equals(&ideal(&r, &["Y"]))
            .unwrap());
        let i = ideal(&r, &["X^2 + Y", "X*Y"]);
        assert!(quotient(&i, &p("1")).unwrap().equals(&i).unwrap());
        assert!(quotient(&ideal(&r, &["X"]), &p("Y"))
            .unwrap()
            .equals(&ideal(&r, &["X"]))
            .unwrap());
        assert!(quotient(&i, &Polynomial::zero(&r)).is_err());
    }

    #[test]
    fn zero_divisors() {
        let r = setup(&["X", "Y"]);
        let p = |s| parse_poly(&r, s).unwrap();
        let xy = ideal(&r, &["X*Y"]);
        assert!(is_zero_divisor(&p("X"), &xy).unwrap());
        assert!(!is_zero_divisor(&p("X"), &Ideal::zero(&r)).unwrap());
        assert!(!is_zero_divisor(&p("X + Y"), &xy).unwrap());
        assert!(is_zero_divisor_graded(&p("X"), &xy).unwrap());
        assert!(!is_zero_divisor_graded(&p("X + Y"), &xy).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let r = setup(&["X", "T"]);
        let e = eliminate(&ideal(&r, &["T - X^2", "X"]), &[0]).unwrap();
        let t = Ring::new(PrimeField::new(7).unwrap(), &["T"]).unwrap();
        assert!(e.equals(&ideal(&t, &["T"])).unwrap());
        let r2 = setup(&["X", "Y"]);
        let e2 = eliminate(&ideal(&r2, &["X"]), &[1]).unwrap();
        let x = Ring::new(PrimeField::new(7).unwrap(), &["X"]).unwrap();
        assert!(e2.equals(&ideal(&x, &["X"])).unwrap());
    }

    #[test]
    fn dimensions() {
        let r = setup(&["X1", "Y1", "X2", "Y2", "X3", "Y3"]);
        assert_eq!(Ideal::zero(&r).dimension().unwrap(), 6);
        let i = ideal(&r, &["X1*Y2 - X2*Y1", "X2*Y3 - X3*Y2"]);
        assert_eq!(i.dimension().unwrap(), 4);
        assert_eq!(ideal(&r, &["1"]).dimension().unwrap(), -1);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = setup(&["X", "Y"]);
        let i = intersect(&ideal(&r, &["X"]), &ideal(&r, &["Y"])).unwrap();
        assert!(i.equals(&ideal(&r, &["X*Y"])).unwrap());
    }
}
