//! Change of order for zero-dimensional ideals by linear algebra on normal forms.

use std::collections::HashMap;

use crate::budget;
use crate::error::Result;
use crate::field::Field;
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::RingRef;

use super::normal_form;

struct Row<E> {
    pivot: usize,
    vec: Vec<E>,
    /// Coefficients over the new staircase with `vec = Σ comb_j nf(s_j)`.
    comb: Vec<E>,
}

/// Reduced basis for `target` from the reduced basis `gb` for `from`.
/// `gb` must describe a zero-dimensional ideal.
pub(crate) fn fglm<F: Field>(
    ring: &RingRef<F>,
    gb: &[Polynomial<F>],
    from: &MonomialOrder,
    target: &MonomialOrder,
) -> Result<Vec<Polynomial<F>>> {
    let k = ring.field().clone();
    let n = ring.nvars();
    let co = target.compile(ring);
    let mut columns: HashMap<Monomial, usize> = HashMap::new();
    let mut rows: Vec<Row<F::Elem>> = Vec::new();
    let mut staircase: Vec<Vec<Exp>> = Vec::new();
    let mut leads: Vec<Vec<Exp>> = Vec::new();
    let mut out = Vec::new();
    let mut seen: Vec<Vec<Exp>> = Vec::new();
    let mut todo: Vec<Vec<Exp>> = vec![vec![0; n]];
    while !todo.is_empty() {
        budget::check()?;
        let (at, _) = todo
            .iter()
            .enumerate()
            .min_by(|a, b| co.compare(a.1, b.1))
            .unwrap();
        let m = todo.swap_remove(at);
        if seen.contains(&m) || leads.iter().any(|l| l.iter().zip(&m).all(|(a, b)| a <= b)) {
            continue;
        }
        seen.push(m.clone());
        let nf = normal_form(&Polynomial::monomial(ring, &m), gb, from)?;
        let mut vec = vec![k.zero(); columns.len()];
        for (mono, c) in nf.terms() {
            let next = columns.len();
            let j = *columns.entry(mono.clone()).or_insert(next);
            if j >= vec.len() {
                vec.resize(j + 1, k.zero());
            }
            vec[j] = c.clone();
        }
        let mut comb = vec![k.zero(); staircase.len()];
        for r in &rows {
            let Some(x) = vec.get(r.pivot).filter(|x| !k.is_zero(x)).cloned() else {
                continue;
            };
            let f = k.div(&x, &r.vec[r.pivot]);
            for (j, y) in r.vec.iter().enumerate() {
                if j >= vec.len() {
                    vec.resize(j + 1, k.zero());
                }
                vec[j] = k.sub(&vec[j], &k.mul(&f, y));
            }
            for (j, y) in r.comb.iter().enumerate() {
                comb[j] = k.add(&comb[j], &k.mul(&f, y));
            }
        }
        match vec.iter().position(|x| !k.is_zero(x)) {
            None => {
                let mut terms = vec![(Monomial::new(ring, &m), k.one())];
                for (j, c) in comb.iter().enumerate() {
                    if !k.is_zero(c) {
                        terms.push((Monomial::new(ring, &staircase[j]), k.neg(c)));
                    }
                }
                out.push(Polynomial::from_terms(ring, terms));
                leads.push(m);
            }
            Some(pivot) => {
                let mut c: Vec<F::Elem> = comb.iter().map(|x| k.neg(x)).collect();
                c.push(k.one());
                staircase.push(m.clone());
                for r in rows.iter_mut() {
                    r.comb.push(k.zero());
                }
                rows.push(Row {
                    pivot,
                    vec,
                    comb: c,
                });
                for i in 0..n {
                    let mut next = m.clone();
                    next[i] += 1;
                    todo.push(next);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        co.compare(
            a.leading_term(target).unwrap().0.exps(),
            b.leading_term(target).unwrap().0.exps(),
        )
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::groebner::groebner_basis;
    use crate::ring::Ring;
    use crate::text::parse_poly;

    #[test]
    fn matches_direct_lex() {
        let r = Ring::new(PrimeField::new(7).unwrap(), &["x", "y", "z"]).unwrap();
        for gens in [
            vec!["x^2 + y*z - 1", "y^2 - x*z", "z^3 + x + 2"],
            vec!["x*y - z^2", "y^3 + 3*x", "x^2*z + y + z - 2", "z^4 - 1"],
            vec!["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"],
        ] {
            let g: Vec<_> = gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
            let gb = groebner_basis(&r, &g, &MonomialOrder::Grevlex).unwrap();
            for target in [MonomialOrder::Lex, MonomialOrder::elimination(vec![2])] {
                let want = groebner_basis(&r, &g, &target).unwrap();
                assert_eq!(
                    fglm(&r, &gb, &MonomialOrder::Grevlex, &target).unwrap(),
                    want
                );
            }
        }
    }
}
