//! Finitely generated subalgebras `K[f_1, ..., f_k]` of a polynomial ring,
//! handled through tag variables `T_i` and the graph ideal `(T_i - f_i)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{self, eliminate, module_groebner, FreeModuleElement, Ideal, ModuleOrder};
use crate::linalg::{kernel_vector, SparseRow};
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, RingRef, Weight};

pub struct Subalgebra<F: Field> {
    ambient: RingRef<F>,
    generators: Vec<Polynomial<F>>,
    tags: RingRef<F>,
    big: RingRef<F>,
    graph: Ideal<F>,
    order: MonomialOrder,
    graded: bool,
    truncated: Mutex<Option<(u32, Arc<Vec<Polynomial<F>>>)>>,
}

fn tag_names<F: Field>(ambient: &RingRef<F>, k: usize) -> Vec<String> {
    let mut stem = String::from("T");
    while (1..=k).any(|i| ambient.index(&format!("{stem}{i}")).is_some()) {
        stem.push('_');
    }
    (1..=k).map(|i| format!("{stem}{i}")).collect()
}

fn degree_of<F: Field>(f: &Polynomial<F>) -> Weight {
    let s = f.ring().weight_scale();
    Weight::new(f.scaled_degree().unwrap_or(0) as u64, s)
}

impl<F: Field> Subalgebra<F> {
    pub fn new(ambient: &RingRef<F>, generators: Vec<Polynomial<F>>) -> Result<Self> {
        let names = tag_names(ambient, generators.len());
        Self::with_tag_names(ambient, generators, &names)
    }

    pub fn with_tag_names<S: AsRef<str>>(
        ambient: &RingRef<F>,
        generators: Vec<Polynomial<F>>,
        names: &[S],
    ) -> Result<Self> {
        if names.len() != generators.len() {
            return Err(Error::Invalid("one tag name per generator".into()));
        }
        if generators.iter().any(|g| !same_ring(g.ring(), ambient)) {
            return Err(Error::RingMismatch);
        }
        if generators
            .iter()
            .any(|g| g.scaled_degree().unwrap_or(0) == 0)
        {
            return Err(Error::Invalid(
                "subalgebra generators must be nonconstant".into(),
            ));
        }
        let weights: Vec<Weight> = generators.iter().map(degree_of).collect();
        let tags =
            crate::ring::Ring::with_weights(ambient.field().clone(), names, weights.clone())?;
        let big = ambient.extend(names, &weights)?;
        let n = ambient.nvars();
        let mut graph_gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            graph_gens.push(&Polynomial::var(&big, n + i) - &g.embed(&big)?);
        }
        let graded = generators.iter().all(|g| g.is_homogeneous());
        let elim: Vec<usize> = (0..n).collect();
        let order = if graded {
            MonomialOrder::graded_elimination(&big, elim)
        } else {
            MonomialOrder::elimination(elim)
        };
        let graph = Ideal::new(&big, graph_gens)?;
        Ok(Subalgebra {
            ambient: ambient.clone(),
            generators,
            tags,
            big,
            graph,
            order,
            graded,
            truncated: Mutex::new(None),
        })
    }

    pub fn ambient(&self) -> &RingRef<F> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn tag_ring(&self) -> &RingRef<F> {
        &self.tags
    }

    /// Polynomial ring on ambient variables followed by the tags.
    pub fn graph_ring(&self) -> &RingRef<F> {
        &self.big
    }

    pub fn graph_ideal(&self) -> &Ideal<F> {
        &self.graph
    }

    pub fn elimination_order(&self) -> &MonomialOrder {
        &self.order
    }

    /// `w(f_1, ..., f_k)` for a polynomial `w` in the tags.
    pub fn evaluate(&self, w: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(w.ring(), &self.tags) {
            return Err(Error::RingMismatch);
        }
        w.substitute(&self.ambient, &self.generators)
    }

    fn tag_map(&self) -> Vec<Option<usize>> {
        let n = self.ambient.nvars();
        (0..self.big.nvars()).map(|v| v.checked_sub(n)).collect()
    }

    fn basis_for(&self, degree: Option<u32>) -> Result<Arc<Vec<Polynomial<F>>>> {
        match degree {
            Some(d) if self.graded => {
                let mut slot = self.truncated.lock().unwrap();
                if let Some((b, basis)) = slot.as_ref() {
                    if *b >= d {
                        return Ok(basis.clone());
                    }
                }
                let basis = Arc::new(groebner::truncated_groebner_basis(
                    &self.big,
                    self.graph.generators(),
                    &self.order,
                    d,
                )?);
                *slot = Some((d, basis.clone()));
                Ok(basis)
            }
            _ => self.graph.groebner(&self.order),
        }
    }

    /// Membership of `h` in the subalgebra, with a witness `w` in the tags
    /// such that `w(f) = h`.
    pub fn member(&self, h: &Polynomial<F>) -> Result<Option<Polynomial<F>>> {
        if !same_ring(h.ring(), &self.ambient) {
            return Err(Error::RingMismatch);
        }
        let hb = h.embed(&self.big)?;
        let degree = if h.is_homogeneous() {
            hb.scaled_degree()
        } else {
            None
        };
        let basis = self.basis_for(degree)?;
        let nf = groebner::normal_form(&hb, &basis, &self.order)?;
        let n = self.ambient.nvars();
        if (0..n).any(|v| nf.involves(v)) {
            return Ok(None);
        }
        let w = nf.map_vars(&self.tags, &self.tag_map())?;
        if &self.evaluate(&w)? != h {
            return Err(Error::Verification(
                "membership witness does not evaluate to the input".into(),
            ));
        }
        Ok(Some(w))
    }

    /// The part of the normal form of `h` that involves ambient variables;
    /// linear in `h` and zero exactly on the subalgebra.
    pub fn residue(&self, h: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(h.ring(), &self.ambient) {
            return Err(Error::RingMismatch);
        }
        let hb = h.embed(&self.big)?;
        let degree = if h.is_homogeneous() {
            hb.scaled_degree()
        } else {
            None
        };
        let basis = self.basis_for(degree)?;
        let nf = groebner::normal_form(&hb, &basis, &self.order)?;
        let n = self.ambient.nvars();
        let terms = nf
            .into_terms()
            .into_iter()
            .filter(|(m, _)| (0..n).any(|v| m.exp(v) > 0))
            .collect();
        Ok(Polynomial::from_terms(&self.big, terms))
    }

    pub fn contains(&self, h: &Polynomial<F>) -> Result<bool> {
        Ok(self.member(h)?.is_some())
    }

    /// Kernel of `T_i -> f_i`.
    pub fn relation_ideal(&self) -> Result<Ideal<F>> {
        let n = self.ambient.nvars();
        let e = eliminate(&self.graph, &(0..n).collect::<Vec<_>>())?;
        let gens = e
            .generators()
            .iter()
            .map(|g| g.embed(&self.tags))
            .collect::<Result<Vec<_>>>()?;
        for g in &gens {
            if !self.evaluate(g)?.is_zero() {
                return Err(Error::Verification(
                    "relation does not vanish on the generators".into(),
                ));
            }
        }
        let out = Ideal::new(&self.tags, gens.clone())?;
        if self.graph.is_homogeneous() {
            out.seed_basis(MonomialOrder::Grevlex, gens);
        }
        Ok(out)
    }

    /// Generators of `M ∩ A^r` as vectors over the tags, where `M` is the
    /// submodule of the free module generated by `gens`. `shifts` makes the
    /// generators homogeneous when given.
    pub fn module_intersect(
        &self,
        gens: &[FreeModuleElement<F>],
        shifts: Option<&[u32]>,
    ) -> Result<Vec<Vec<Polynomial<F>>>> {
        let Some(r) = gens.first().map(|g| g.rank()) else {
            return Ok(Vec::new());
        };
        let n = self.ambient.nvars();
        let mut elems = Vec::new();
        for g in gens {
            let comps = g
                .components()
                .iter()
                .map(|c| c.embed(&self.big))
                .collect::<Result<Vec<_>>>()?;
            elems.push(FreeModuleElement::new(&self.big, comps)?);
        }
        for t in self.graph.generators() {
            for l in 0..r {
                let mut comps = vec![Polynomial::zero(&self.big); r];
                comps[l] = t.clone();
                elems.push(FreeModuleElement::new(&self.big, comps)?);
            }
        }
        let graded = self.graded
            && shifts.is_some_and(|s| {
                elems
                    .iter()
                    .all(|e| e.is_zero() || e.homogeneous_degree(s).is_some())
            });
        let order = match shifts {
            Some(s) if graded => ModuleOrder::top(MonomialOrder::graded_elimination(
                &self.big,
                (0..n).collect(),
            ))
            .with_shifts(s.to_vec()),
            _ => ModuleOrder::top(MonomialOrder::elimination((0..n).collect())),
        };
        let gb = module_groebner(&self.big, &elems, &order)?;
        let map = self.tag_map();
        let mut out = Vec::new();
        for g in gb {
            if g.components()
                .iter()
                .all(|c| (0..n).all(|v| !c.involves(v)))
            {
                out.push(
                    g.components()
                        .iter()
                        .map(|c| c.map_vars(&self.tags, &map))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// Only reported in characteristic zero.
    Dependent,
    Inconclusive,
}

/// Rank of a polynomial matrix over the fraction field by fraction-free
/// elimination.
pub fn polynomial_matrix_rank<F: Field>(rows: Vec<Vec<Polynomial<F>>>) -> Result<usize> {
    let mut m = rows;
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let Some(ring) = m.first().and_then(|r| r.first()).map(|p| p.ring().clone()) else {
        return Ok(0);
    };
    let mut prev = Polynomial::one(&ring);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pr) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        for i in rank + 1..nrows {
            for j in c + 1..ncols {
                let num = &(&m[rank][c] * &m[i][j]) - &(&m[i][c] * &m[rank][j]);
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][c] = Polynomial::zero(&ring);
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    Ok(rank)
}

/// Jacobian criterion for algebraic independence.
pub fn jacobian_independent<F: Field>(fs: &[Polynomial<F>]) -> Result<Independence> {
    let Some(ring) = fs.first().map(|f| f.ring().clone()) else {
        return Ok(Independence::Independent);
    };
    if fs.iter().any(|f| !same_ring(f.ring(), &ring)) {
        return Err(Error::RingMismatch);
    }
    let rows: Vec<Vec<Polynomial<F>>> = fs
        .iter()
        .map(|f| (0..ring.nvars()).map(|v| f.derivative(v)).collect())
        .collect();
    let rank = polynomial_matrix_rank(rows)?;
    Ok(if rank == fs.len() {
        Independence::Independent
    } else if ring.field().characteristic() == 0 {
        Independence::Dependent
    } else {
        Independence::Inconclusive
    })
}

fn exponent_vectors(weights: &[u32], d: u32) -> Vec<Vec<Exp>> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<Exp>, out: &mut Vec<Vec<Exp>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        for e in 0..=left / w {
            cur.push(e as Exp);
            go(weights, i + 1, left - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Searches degrees `1..=bound` (in scaled ambient units) for the first
/// linear dependency among tag monomials evaluated at homogeneous `f`.
pub fn find_minimal_relation<F: Field>(
    sub: &Subalgebra<F>,
    bound: u32,
) -> Result<Option<Polynomial<F>>> {
    if sub.generators().iter().any(|f| !f.is_homogeneous()) {
        return Err(Error::Invalid(
            "minimal relation search needs homogeneous generators".into(),
        ));
    }
    let weights: Vec<u32> = sub
        .generators()
        .iter()
        .map(|f| f.scaled_degree().unwrap())
        .collect();
    let k = sub.ambient().field();
    let tags = sub.tag_ring();
    for d in 1..=bound {
        let monos = exponent_vectors(&weights, d);
        if monos.len() < 2 {
            continue;
        }
        let mut row_index: HashMap<Monomial, usize> = HashMap::new();
        let mut columns: Vec<Vec<(usize, F::Elem)>> = Vec::with_capacity(monos.len());
        for e in &monos {
            let img = sub.evaluate(&Polynomial::monomial(tags, e))?;
            let mut col = Vec::with_capacity(img.len());
            for (m, c) in img.terms() {
                let next = row_index.len();
                let r = *row_index.entry(m.clone()).or_insert(next);
                col.push((r, c.clone()));
            }
            columns.push(col);
        }
        let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); row_index.len()];
        for (j, col) in columns.into_iter().enumerate() {
            for (r, c) in col {
                rows[r].push((j, c));
            }
        }
        if let Some(x) = kernel_vector(k, &rows, monos.len()) {
            let terms = monos
                .iter()
                .zip(x)
                .filter(|(_, c)| !k.is_zero(c))
                .map(|(e, c)| (Monomial::new(tags, e), c))
                .collect();
            let rel = Polynomial::from_terms(tags, terms).monic();
            if !sub.evaluate(&rel)?.is_zero() {
                return Err(Error::Verification("relation does not vanish".into()));
            }
            return Ok(Some(rel));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::ring::Ring;
    use crate::text::parse_poly;

    fn setup(p: u32, names: &[&str], gens: &[&str]) -> Subalgebra<PrimeField> {
        let r = Ring::new(PrimeField::new(p).unwrap(), names).unwrap();
        let g = gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        Subalgebra::new(&r, g).unwrap()
    }

    #[test]
    fn cusp_relation() {
        let s = setup(7, &["X"], &["X^2", "X^3"]);
        let rel = s.relation_ideal().unwrap();
        let want = parse_poly(s.tag_ring(), "T2^2 - T1^3").unwrap();
        assert!(rel
            .equals(&Ideal::new(s.tag_ring(), vec![want.clone()]).unwrap())
            .unwrap());
        let min = find_minimal_relation(&s, 6).unwrap().unwrap();
        assert_eq!(min, want.monic());
        assert!(setup(7, &["X", "Y"], &["X", "Y"])
            .relation_ideal()
            .unwrap()
            .generators()
            .is_empty());
        assert!(
            find_minimal_relation(&setup(7, &["X", "Y"], &["X", "Y"]), 5)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn membership_with_witness() {
        let s = setup(5, &["X", "Y"], &["X^2", "Y^2", "X*Y"]);
        let h = parse_poly(s.ambient(), "X^2*Y^2").unwrap();
        let w = s.member(&h).unwrap().unwrap();
        assert_eq!(s.evaluate(&w).unwrap(), h);
        let t = s.member(&s.generators()[2].clone()).unwrap().unwrap();
        assert_eq!(t, parse_poly(s.tag_ring(), "T3").unwrap());
        let s2 = setup(2, &["X"], &["X^2"]);
        assert!(s2
            .member(&parse_poly(s2.ambient(), "X").unwrap())
            .unwrap()
            .is_none());
    }

    #[test]
    fn intersect_module_with_even_part() {
        let s = setup(3, &["X"], &["X^2"]);
        let x = parse_poly(s.ambient(), "X").unwrap();
        let m = FreeModuleElement::new(s.ambient(), vec![x]).unwrap();
        let out = s.module_intersect(&[m], Some(&[0])).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0][0], parse_poly(s.tag_ring(), "T1").unwrap());
        let one = FreeModuleElement::unit(s.ambient(), 2, 0);
        let two = FreeModuleElement::unit(s.ambient(), 2, 1);
        let out = s.module_intersect(&[one, two], Some(&[0, 0])).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn jacobian_cases() {
        let r = Ring::new(PrimeField::new(3).unwrap(), &["X", "Y"]).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        assert_eq!(
            jacobian_independent(&[p("X"), p("Y")]).unwrap(),
            Independence::Independent
        );
        assert_eq!(
            jacobian_independent(&[p("X^3")]).unwrap(),
            Independence::Inconclusive
        );
        let q = Ring::new(Rationals, &["X"]).unwrap();
        let x = parse_poly(&q, "X").unwrap();
        assert_eq!(
            jacobian_independent(&[x.clone(), &x * &x]).unwrap(),
            Independence::Dependent
        );
    }

    #[test]
    fn plucker_relation_in_degree_four() {
        let names = ["X1", "Y1", "X2", "Y2", "X3", "Y3", "X4", "Y4"];
        let mut gens = Vec::new();
        for i in 1..=4 {
            for j in i + 1..=4 {
                gens.push(format!("X{i}*Y{j} - X{j}*Y{i}"));
            }
        }
        let g: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
        let s = setup(2, &names, &g);
        let rel = find_minimal_relation(&s, 4).unwrap().unwrap();
        assert_eq!(rel.total_degree(), Some(2));
        assert_eq!(rel.len(), 3);
        let ideal = s.relation_ideal().unwrap();
        assert!(ideal
            .equals(&Ideal::new(s.tag_ring(), vec![rel]).unwrap())
            .unwrap());
    }
}
