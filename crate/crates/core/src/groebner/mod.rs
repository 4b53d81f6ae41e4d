//! Groebner bases of ideals and submodules of free modules.

pub mod cache;
pub mod dimension;
mod engine;
mod fglm;
pub mod hilbert;
mod ideal;
mod module;

pub use dimension::monomial_dimension;
pub use ideal::{eliminate, intersect, is_zero_divisor, is_zero_divisor_graded, quotient, Ideal};
pub use module::{
    module_groebner, module_normal_form, syzygies, FreeModuleElement, ModuleExtension, ModuleOrder,
};

pub(crate) use engine::GbOptions;
use engine::{EPoly, Engine, GbStats, Layout};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, RingRef};

pub(crate) fn layout<F: Field>(
    ring: &RingRef<F>,
    order: &MonomialOrder,
    module: Option<&ModuleOrder>,
) -> Layout {
    let co = order.compile(ring);
    match module {
        None => Layout::new(ring.int_weights(), &co, None, &[], &[]),
        Some(mo) => Layout::new(
            ring.int_weights(),
            &co,
            Some(mo.extension == ModuleExtension::PositionOverTerm),
            &mo.shifts,
            &mo.levels,
        ),
    }
}

pub(crate) fn to_epoly<F: Field>(
    eng: &Engine<F>,
    comps: &[&Polynomial<F>],
) -> Result<EPoly<F::Elem>> {
    let lay = &eng.layout;
    let n: usize = comps.iter().map(|p| p.len()).sum();
    let mut out = EPoly::with_capacity(n, lay.stride);
    let mut tmp = vec![0; lay.stride];
    for (pos, p) in comps.iter().enumerate() {
        for (m, c) in p.terms() {
            lay.fill(m.exps(), pos, &mut tmp)?;
            out.push(c.clone(), &tmp);
        }
    }
    eng.sort(&mut out);
    Ok(out)
}

pub(crate) fn from_epoly<F: Field>(
    eng: &Engine<F>,
    ring: &RingRef<F>,
    e: &EPoly<F::Elem>,
    rank: usize,
) -> Vec<Polynomial<F>> {
    let lay = &eng.layout;
    let mut comps: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); rank];
    for i in 0..e.len() {
        let t = e.term(i, lay.stride);
        comps[lay.pos(t)].push((Monomial::new(ring, lay.exps(t)), e.coef[i].clone()));
    }
    comps
        .into_iter()
        .map(|ts| Polynomial::from_terms(ring, ts))
        .collect()
}

fn check_ring<F: Field>(ring: &RingRef<F>, ps: &[Polynomial<F>]) -> Result<()> {
    if ps.iter().all(|p| same_ring(p.ring(), ring)) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

pub(crate) fn gb_with<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
    opts: &GbOptions,
) -> Result<(Vec<Polynomial<F>>, GbStats)> {
    check_ring(ring, gens)?;
    let lay = layout(ring, order, None);
    let eng = Engine::new(ring.field(), lay, false);
    let input = gens
        .iter()
        .map(|g| to_epoly(&eng, &[g]))
        .collect::<Result<Vec<_>>>()?;
    let mut stats = GbStats::default();
    let out = eng.groebner(input, opts, &mut stats)?;
    let polys = out
        .iter()
        .map(|e| from_epoly(&eng, ring, e, 1).pop().unwrap())
        .collect();
    Ok((polys, stats))
}

/// Reduced Groebner basis, monic, sorted ascending by leading monomial.
pub fn groebner_basis<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
) -> Result<Vec<Polynomial<F>>> {
    Ok(gb_with(ring, gens, order, &GbOptions::default())?.0)
}

/// Groebner basis computed only up to the given scaled degree. For
/// homogeneous input it agrees with the full basis in degrees `<= bound`.
pub fn truncated_groebner_basis<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    order: &MonomialOrder,
    bound: u32,
) -> Result<Vec<Polynomial<F>>> {
    Ok(gb_with(
        ring,
        gens,
        order,
        &GbOptions {
            max_sugar: Some(bound),
        },
    )?
    .0)
}

/// Remainder of `f` under full division by `by`.
pub fn normal_form<F: Field>(
    f: &Polynomial<F>,
    by: &[Polynomial<F>],
    order: &MonomialOrder,
) -> Result<Polynomial<F>> {
    let ring = f.ring();
    check_ring(ring, by)?;
    let eng = Engine::new(ring.field(), layout(ring, order, None), false);
    let g = by
        .iter()
        .map(|g| to_epoly(&eng, &[g]))
        .collect::<Result<Vec<_>>>()?;
    let r = eng.normal_form(to_epoly(&eng, &[f])?, &g)?;
    Ok(from_epoly(&eng, ring, &r, 1).pop().unwrap())
}

/// S-polynomial of `f` and `g`, scaled so that both leading terms cancel.
pub fn spoly<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    order: &MonomialOrder,
) -> Polynomial<F> {
    let k = f.field();
    let ring = f.ring();
    let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(order), g.leading_term(order)) else {
        return Polynomial::zero(ring);
    };
    let l = mf.lcm(mg, ring);
    let a = f
        .try_mul_term(&l.div(mf).unwrap(), &k.inv(cf))
        .expect("overflow");
    let b = g
        .try_mul_term(&l.div(mg).unwrap(), &k.inv(cg))
        .expect("overflow");
    &a - &b
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis<F: Field>(gens: &[Polynomial<F>], order: &MonomialOrder) -> Result<bool> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !normal_form(&spoly(&gens[i], &gens[j], order), gens, order)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;
    use crate::text::parse_poly;

    fn ring(p: u32, names: &[&str]) -> RingRef<PrimeField> {
        Ring::new(PrimeField::new(p).unwrap(), names).unwrap()
    }

    fn polys(r: &RingRef<PrimeField>, s: &[&str]) -> Vec<Polynomial<PrimeField>> {
        s.iter().map(|x| parse_poly(r, x).unwrap()).collect()
    }

    #[test]
    fn hand_example_grevlex() {
        let r = ring(7, &["X", "Y"]);
        let g = polys(&r, &["X^2", "X*Y + Y^2"]);
        let gb = groebner_basis(&r, &g, &MonomialOrder::Grevlex).unwrap();
        let mut want = polys(&r, &["X^2", "X*Y + Y^2", "Y^3"]);
        want.sort_by(|a, b| a.terms()[0].0.cmp_canonical(&b.terms()[0].0));
        let mut got = gb.clone();
        got.sort_by(|a, b| a.terms()[0].0.cmp_canonical(&b.terms()[0].0));
        assert_eq!(got, want);
        let nf = normal_form(&polys(&r, &["X*Y^2"])[0], &g, &MonomialOrder::Grevlex).unwrap();
        assert_eq!(nf, polys(&r, &["-Y^3"])[0]);
    }

    #[test]
    fn zero_ideal_has_empty_basis() {
        let r = ring(2, &["X"]);
        assert!(
            groebner_basis(&r, &[Polynomial::zero(&r)], &MonomialOrder::Grevlex)
                .unwrap()
                .is_empty()
        );
        let f = polys(&r, &["X + 1"])[0].clone();
        assert_eq!(normal_form(&f, &[], &MonomialOrder::Lex).unwrap(), f);
    }

    #[test]
    fn adjacent_brackets_form_a_basis() {
        let r = ring(3, &["X1", "Y1", "X2", "Y2", "X3", "Y3"]);
        let g = polys(&r, &["X1*Y2 - X2*Y1", "X2*Y3 - X3*Y2"]);
        assert!(is_groebner_basis(&g, &MonomialOrder::GradedLex).unwrap());
        let gb = groebner_basis(&r, &g, &MonomialOrder::GradedLex).unwrap();
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn lex_basis_of_twisted_cubic() {
        let r = ring(101, &["t", "x", "y", "z"]);
        let g = polys(&r, &["x - t", "y - t^2", "z - t^3"]);
        let gb = groebner_basis(&r, &g, &MonomialOrder::Lex).unwrap();
        assert!(is_groebner_basis(&gb, &MonomialOrder::Lex).unwrap());
        let free: Vec<_> = gb.iter().filter(|p| !p.involves(0)).collect();
        for p in &free {
            let img = vec![
                Polynomial::var(&r, 0),
                Polynomial::var(&r, 0),
                Polynomial::var(&r, 0).pow(2),
                Polynomial::var(&r, 0).pow(3),
            ];
            assert!(p.substitute(&r, &img).unwrap().is_zero());
        }
        assert!(!free.is_empty());
    }
}
