//! Text-in, text-out entry points shared by the command line and the bindings.

use crate::actions::{GroupAction, GroupKind};
use crate::depth_lab::{scan_reg, PresentedRing, ScanResult};
use crate::field::{CoefficientField, Field, PrimeField, Rationals};
use crate::groebner::Ideal;
use crate::invariants_sl2::{hsop_builder, PluckerPresentation, Roberts};
use crate::subalgebra::Subalgebra;
use crate::text::{format_poly, parse_header, parse_poly, FieldFromDescriptor, PolyFile};
use crate::{Error, MonomialOrder, Result};

/// Coefficient field named by the first header line of a polynomial file.
pub fn field_of(text: &str) -> Result<CoefficientField> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::Parse("missing ring header".into()))?;
    Ok(parse_header(header)?.field)
}

macro_rules! by_field {
    ($text:expr, $f:ident ( $($arg:expr),* )) => {
        match field_of($text)? {
            CoefficientField::Prime(_) => $f::<PrimeField>($($arg),*),
            CoefficientField::Rationals => $f::<Rationals>($($arg),*),
        }
    };
}

fn gb_in<F: FieldFromDescriptor>(text: &str, order: &MonomialOrder) -> Result<String> {
    let file = PolyFile::<F>::parse(text)?;
    let basis = Ideal::from_file(&file)?.groebner(order)?;
    Ok(PolyFile::new(file.ring.clone(), basis.to_vec()).render())
}

/// Reduced Groebner basis, rendered as a polynomial file.
pub fn groebner_basis(text: &str, order: &str) -> Result<String> {
    let order = MonomialOrder::parse(order)?;
    by_field!(text, gb_in(text, &order))
}

fn relideal_in<F: FieldFromDescriptor>(text: &str) -> Result<String> {
    let file = PolyFile::<F>::parse(text)?;
    let sub = Subalgebra::new(&file.ring, file.polys)?;
    let rel = sub.relation_ideal()?;
    Ok(PolyFile::new(sub.tag_ring().clone(), rel.generators().to_vec()).render())
}

/// Relations among the listed generators, in tags `T1, T2, ...`.
pub fn relation_ideal(text: &str) -> Result<String> {
    by_field!(text, relideal_in(text))
}

fn member_in<F: FieldFromDescriptor>(
    gens: &str,
    cands: &str,
) -> Result<(String, Vec<Option<String>>)> {
    let file = PolyFile::<F>::parse(gens)?;
    let sub = Subalgebra::new(&file.ring, file.polys)?;
    let cands = PolyFile::<F>::parse(cands)?;
    let mut out = Vec::new();
    for c in &cands.polys {
        let c = c.embed(&file.ring)?;
        out.push(sub.member(&c)?.map(|w| format_poly(&w)));
    }
    Ok((sub.tag_ring().header(), out))
}

/// Membership witnesses in the tag ring; `None` for non-members.
pub fn membership(gens: &str, candidates: &str) -> Result<(String, Vec<Option<String>>)> {
    by_field!(gens, member_in(gens, candidates))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    /// 0-based positions of the accepted elements.
    pub accepted: Vec<usize>,
    pub sequence: Vec<String>,
    pub interrupted: bool,
}

fn scan_in<F: FieldFromDescriptor>(ring: &str, seq: &str) -> Result<ScanReport> {
    let rel = PolyFile::<F>::parse(ring)?;
    let seq = PolyFile::<F>::parse(seq)?;
    let pr = PresentedRing::quotient(Ideal::from_file(&rel)?);
    let polys = seq
        .polys
        .iter()
        .map(|g| g.embed(&rel.ring))
        .collect::<Result<Vec<_>>>()?;
    let ScanResult {
        accepted,
        sequence,
        interrupted,
    } = scan_reg(&pr, &polys)?;
    Ok(ScanReport {
        accepted,
        sequence: sequence.iter().map(format_poly).collect(),
        interrupted,
    })
}

/// Greedy regular-sequence scan modulo the relations of a ring file.
pub fn scan_regular(ring: &str, sequence: &str) -> Result<ScanReport> {
    by_field!(ring, scan_in(ring, sequence))
}

fn hsop_in<F: Field>(field: F, n: usize, e: u32, tags: bool) -> Result<String> {
    if tags {
        let pp = PluckerPresentation::new(field, n)?;
        let nrel = pp.relations.generators().len();
        let mut polys = pp.relations.generators().to_vec();
        polys.extend(pp.hsop(&|_, _| e));
        let mut s = format!("# {nrel} Pluecker relations, then f3..f{}\n", 2 * n - 1);
        s.push_str(&PolyFile::new(pp.sub.tag_ring().clone(), polys).render());
        Ok(s)
    } else {
        let h = hsop_builder(field, n, &|_, _| e)?;
        Ok(PolyFile::new(h[0].ring().clone(), h).render())
    }
}

/// The bracket-sum hsop on n copies; `char == 0` is the rationals.
pub fn hsop(n: usize, exponent: u32, characteristic: u32, tags: bool) -> Result<String> {
    if characteristic == 0 {
        hsop_in(Rationals, n, exponent, tags)
    } else {
        hsop_in(PrimeField::new(characteristic)?, n, exponent, tags)
    }
}

fn roberts(p: u32, k: usize) -> Result<Roberts<PrimeField>> {
    Roberts::new(&GroupAction::builtin(GroupKind::Ga, p, k)?)
}

/// Roberts image of an SL2 invariant; returns the result and the ring header it lives in.
pub fn roberts_forward(p: u32, k: usize, poly: &str) -> Result<(String, String)> {
    let r = roberts(p, k)?;
    let f = r.forward(&parse_poly(r.sl2_ring(), poly)?)?;
    Ok((r.ga().target().header(), format_poly(&f)))
}

/// Preimage of a Ga invariant under the Roberts map.
pub fn roberts_inverse(p: u32, k: usize, poly: &str) -> Result<(String, String)> {
    let r = roberts(p, k)?;
    let g = r.inverse(&parse_poly(r.ga().target(), poly)?)?;
    Ok((r.sl2_ring().header(), format_poly(&g)))
}
