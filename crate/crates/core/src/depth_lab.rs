//! Presented invariant rings `P/I`, phsop and height tests, the greedy
//! regular-sequence scan, and the two-sided Cohen-Macaulay defect pipeline
//! for `(<X^p, Y^p> + k<X, Y>)^G` with its text certificate.

use std::fmt::Write as _;

use crate::actions::{
    check_annihilator, check_cocycle, is_annihilation_witness, solve_coboundary, verify_nontrivial,
    Annihilation, CoboundaryResult, Cocycle, GroupAction, GroupKind, NontrivialityCertificate,
};
use crate::budget;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::frobenius::{frobenius_invariants, FrobeniusProblem};
use crate::groebner::{cache, is_zero_divisor, is_zero_divisor_graded, quotient, Ideal};
use crate::invariants_sl2::{annihilator_phsop, depth_test_sequence, Roberts};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{Ring, RingRef};
use crate::subalgebra::Subalgebra;
use crate::text::{
    format_monomial, format_poly, parse_header, parse_monomial, parse_poly, ring_from_header,
};

/// `P/I` with `I` the relations among `images` in the source ring.
pub struct PresentedRing<F: Field> {
    pub ring: RingRef<F>,
    pub relations: Ideal<F>,
    pub source: RingRef<F>,
    pub images: Vec<Polynomial<F>>,
    sub: Option<Subalgebra<F>>,
}

fn weighted_degree<F: Field>(f: &Polynomial<F>, w: &[i64]) -> Option<i64> {
    let mut deg = None;
    for (m, _) in f.terms() {
        let d: i64 = m.exps().iter().zip(w).map(|(&e, &x)| e as i64 * x).sum();
        match deg {
            None => deg = Some(d),
            Some(x) if x != d => return None,
            _ => {}
        }
    }
    deg
}

impl<F: Field> PresentedRing<F> {
    /// A polynomial ring presented by its own variables.
    pub fn polynomial(ring: &RingRef<F>) -> Self {
        PresentedRing {
            ring: ring.clone(),
            relations: Ideal::zero(ring),
            source: ring.clone(),
            images: (0..ring.nvars())
                .map(|i| Polynomial::var(ring, i))
                .collect(),
            sub: None,
        }
    }

    /// Presents `K[gens]`. With `source_weights`, the tags are graded by the
    /// weighted degree of their images instead of the ring degree.
    pub fn of_generators(
        source: &RingRef<F>,
        gens: Vec<Polynomial<F>>,
        source_weights: Option<&[i64]>,
    ) -> Result<Self> {
        let sub = Subalgebra::new(source, gens.clone())?;
        let rel = sub.relation_ideal()?;
        let (ring, relations) = match source_weights.and_then(|w| tag_weights(&gens, w)) {
            Some(w) => {
                let ring =
                    Ring::with_int_weights(source.field().clone(), sub.tag_ring().names(), &w)?;
                let gens = rel
                    .generators()
                    .iter()
                    .map(|g| g.embed(&ring))
                    .collect::<Result<Vec<_>>>()?;
                let ideal = Ideal::new(&ring, gens)?;
                if ideal.is_homogeneous() {
                    (ring, ideal)
                } else {
                    (sub.tag_ring().clone(), rel)
                }
            }
            None => (sub.tag_ring().clone(), rel),
        };
        Ok(PresentedRing {
            ring,
            relations,
            source: source.clone(),
            images: gens,
            sub: Some(sub),
        })
    }

    /// `P/I` without generator images.
    pub fn quotient(relations: Ideal<F>) -> Self {
        let ring = relations.ring().clone();
        PresentedRing {
            source: ring.clone(),
            ring,
            relations,
            images: Vec::new(),
            sub: None,
        }
    }

    /// Rebuilds a presentation from recorded data, checking that every
    /// relation vanishes on the images.
    pub fn from_parts(
        ring: &RingRef<F>,
        relations: Vec<Polynomial<F>>,
        source: &RingRef<F>,
        images: Vec<Polynomial<F>>,
    ) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::Invalid("one image per tag variable".into()));
        }
        for r in &relations {
            if !r.substitute(source, &images)?.is_zero() {
                return Err(Error::Verification(format!(
                    "relation {} does not vanish",
                    format_poly(r)
                )));
            }
        }
        Ok(PresentedRing {
            ring: ring.clone(),
            relations: Ideal::new(ring, relations)?,
            source: source.clone(),
            images,
            sub: None,
        })
    }

    pub fn dim(&self) -> Result<i64> {
        self.relations.dimension()
    }

    /// Image of a tag polynomial in the source ring.
    pub fn evaluate(&self, w: &Polynomial<F>) -> Result<Polynomial<F>> {
        w.embed(&self.ring)?.substitute(&self.source, &self.images)
    }

    /// A tag polynomial mapping to `h`, if `h` lies in the presented algebra.
    pub fn express(&self, h: &Polynomial<F>) -> Result<Option<Polynomial<F>>> {
        let sub = match &self.sub {
            Some(s) => s,
            None => {
                return Err(Error::Invalid(
                    "presentation has no subalgebra attached".into(),
                ))
            }
        };
        let mut acc = Polynomial::zero(&self.ring);
        for (_, part) in h.homogeneous_components() {
            if part.is_constant() {
                acc = &acc + &Polynomial::constant(&self.ring, part.constant_term());
                continue;
            }
            match sub.member(&part)? {
                Some(w) => acc = &acc + &w.embed(&self.ring)?,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }
}

fn tag_weights<F: Field>(gens: &[Polynomial<F>], w: &[i64]) -> Option<Vec<u32>> {
    gens.iter()
        .map(|g| weighted_degree(g, w).filter(|&d| d > 0).map(|d| d as u32))
        .collect()
}

/// Whether the homogeneous `elems` of positive degree form a phsop, i.e.
/// cut the dimension of `P/I` by their number.
pub fn is_phsop<F: Field>(ring: &PresentedRing<F>, elems: &[Polynomial<F>]) -> Result<bool> {
    let mut embedded = Vec::with_capacity(elems.len());
    for a in elems {
        let a = a.embed(&ring.ring)?;
        if !a.is_homogeneous() || a.scaled_degree().unwrap_or(0) == 0 {
            return Ok(false);
        }
        embedded.push(a);
    }
    let d = ring.dim()?;
    let cut = ring.relations.with_generators(&embedded)?.dimension()?;
    Ok(d - cut == elems.len() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult<F: Field> {
    /// Positions in the input sequence of the accepted elements.
    pub accepted: Vec<usize>,
    pub sequence: Vec<Polynomial<F>>,
    /// Set when the scan stopped early.
    pub interrupted: bool,
}

impl<F: Field> ScanResult<F> {
    pub fn depth_lower_bound(&self) -> usize {
        self.sequence.len()
    }
}

fn in_irrelevant_ideal<F: Field>(g: &Polynomial<F>) -> bool {
    g.ring().field().is_zero(&g.constant_term()) && !g.is_zero()
}

fn regular_step<F: Field>(g: &Polynomial<F>, j: &Ideal<F>) -> Result<bool> {
    if g.is_homogeneous() && j.is_homogeneous() {
        Ok(!is_zero_divisor_graded(g, j)?)
    } else {
        Ok(!is_zero_divisor(g, j)?)
    }
}

/// Greedy scan: keeps each element that is a nonzero divisor modulo the
/// relations plus the elements kept so far. Elements with a constant term
/// are skipped. A budget interruption ends the scan with what was kept.
pub fn scan_reg<F: Field>(
    ring: &PresentedRing<F>,
    test_sequence: &[Polynomial<F>],
) -> Result<ScanResult<F>> {
    let mut j = ring.relations.clone();
    let mut out = ScanResult {
        accepted: Vec::new(),
        sequence: Vec::new(),
        interrupted: false,
    };
    for (i, g) in test_sequence.iter().enumerate() {
        let g = g.embed(&ring.ring)?;
        if !in_irrelevant_ideal(&g) {
            continue;
        }
        match regular_step(&g, &j) {
            Ok(true) => {
                j = j.with_generators(std::slice::from_ref(&g))?;
                if j.is_unit()? {
                    break;
                }
                out.accepted.push(i);
                out.sequence.push(g);
            }
            Ok(false) => {}
            Err(Error::Interrupted) => {
                out.interrupted = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Replays a recorded regular sequence.
pub fn is_regular_sequence<F: Field>(
    ring: &PresentedRing<F>,
    seq: &[Polynomial<F>],
) -> Result<bool> {
    let mut j = ring.relations.clone();
    for g in seq {
        let g = g.embed(&ring.ring)?;
        if !in_irrelevant_ideal(&g) || !regular_step(&g, &j)? {
            return Ok(false);
        }
        j = j.with_generators(std::slice::from_ref(&g))?;
        if j.is_unit()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Machine-checked hypotheses of the lower bound `cmdef >= k - 2`.
#[derive(Clone, Debug)]
pub struct HauptsatzPremises {
    pub nontrivial: NontrivialityCertificate<PrimeField>,
    pub annihilators: Vec<(Polynomial<PrimeField>, Polynomial<PrimeField>)>,
    /// Height of the annihilators' Roberts preimages in the polynomial ring.
    pub phsop_height: i64,
    pub coprime: bool,
}

impl HauptsatzPremises {
    pub fn holds(&self) -> bool {
        self.phsop_height == self.annihilators.len() as i64 && self.coprime
    }

    pub fn cmdef_lower(&self) -> usize {
        self.annihilators.len().saturating_sub(2)
    }
}

pub fn certify_premises(p: u32, k: usize) -> Result<HauptsatzPremises> {
    let cocycle = Cocycle::builtin(p, k)?;
    if !check_cocycle(&cocycle)? {
        return Err(Error::Verification(
            "builtin cocycle fails the cocycle identity".into(),
        ));
    }
    let nontrivial = match solve_coboundary(&cocycle)? {
        CoboundaryResult::Nontrivial(c) => c,
        CoboundaryResult::Coboundary(_) => {
            return Err(Error::Verification(
                "builtin cocycle is a coboundary".into(),
            ))
        }
    };
    let anns = annihilator_phsop(p, k)?;
    let mut annihilators = Vec::new();
    for a in anns {
        match check_annihilator(&a, &cocycle)? {
            Annihilation::Annihilates(b) => annihilators.push((a, b)),
            Annihilation::DoesNot(_) => {
                return Err(Error::Verification(format!(
                    "{} does not annihilate the cocycle",
                    format_poly(&a)
                )))
            }
        }
    }
    let phsop_height = roberts_phsop_height(cocycle.action.clone(), &annihilators)?;
    let coprime = coprime_pair(&annihilators[0].0, &annihilators[1].0)?;
    Ok(HauptsatzPremises {
        nontrivial,
        annihilators,
        phsop_height,
        coprime,
    })
}

fn roberts_phsop_height(
    ga: GroupAction<PrimeField>,
    anns: &[(Polynomial<PrimeField>, Polynomial<PrimeField>)],
) -> Result<i64> {
    let roberts = Roberts::new(&ga)?;
    let lifted = anns
        .iter()
        .map(|(a, _)| roberts.inverse(a))
        .collect::<Result<Vec<_>>>()?;
    let poly = PresentedRing::polynomial(roberts.sl2_ring());
    if lifted.iter().any(|a| !a.is_homogeneous()) {
        return Ok(-1);
    }
    Ok(poly.dim()? - poly.relations.with_generators(&lifted)?.dimension()?)
}

/// `(a) : b = (a)`.
pub fn coprime_pair(a: &Polynomial<PrimeField>, b: &Polynomial<PrimeField>) -> Result<bool> {
    let ia = Ideal::new(a.ring(), vec![a.clone()])?;
    quotient(&ia, b)?.equals(&ia)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub homogenize: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { homogenize: true }
    }
}

#[derive(Clone, Debug)]
pub struct DepthCertificate {
    pub group: GroupKind,
    pub p: u32,
    pub k: usize,
    pub complete: bool,
    pub source: RingRef<PrimeField>,
    pub tags: Option<RingRef<PrimeField>>,
    pub images: Vec<Polynomial<PrimeField>>,
    pub relations: Vec<Polynomial<PrimeField>>,
    pub dim: i64,
    pub dim_computed: bool,
    /// Labels `f<m>` and tag polynomials.
    pub regular_sequence: Vec<(String, Polynomial<PrimeField>)>,
    pub premises: Option<HauptsatzPremises>,
    pub notes: Vec<String>,
}

impl DepthCertificate {
    pub fn lower_bound_depth(&self) -> i64 {
        self.regular_sequence.len() as i64
    }

    pub fn upper_bound_depth(&self) -> i64 {
        match &self.premises {
            Some(pr) if pr.holds() => self.dim - pr.cmdef_lower() as i64,
            _ => self.dim,
        }
    }

    pub fn cmdef_interval(&self) -> (i64, i64) {
        (
            self.dim - self.upper_bound_depth(),
            self.dim - self.lower_bound_depth(),
        )
    }

    pub fn exact_cmdef(&self) -> Option<i64> {
        let (lo, hi) = self.cmdef_interval();
        (lo == hi).then_some(lo)
    }

    /// The `Ga` instance doing the computation.
    pub fn ga_k(&self) -> usize {
        match self.group {
            GroupKind::Ga => self.k,
            GroupKind::SL2 => self.k - 1,
        }
    }
}

/// Bounds on `cmdef` of `(<X^p, Y^p> + k<X, Y>)^G`. `SL2` is handled through
/// Roberts' isomorphism with `Ga` and one copy less.
pub fn cmdef_pipeline(
    p: u32,
    k: usize,
    group: GroupKind,
    opts: PipelineOptions,
) -> Result<DepthCertificate> {
    let ga_k = match group {
        GroupKind::Ga => k,
        GroupKind::SL2 => k
            .checked_sub(1)
            .ok_or_else(|| Error::Invalid("SL2 needs k >= 3".into()))?,
    };
    if ga_k < 2 {
        return Err(Error::Invalid(format!(
            "{group} needs k >= {}",
            if group == GroupKind::Ga { 2 } else { 3 }
        )));
    }
    let action = GroupAction::builtin(GroupKind::Ga, p, ga_k)?;
    let mut cert = DepthCertificate {
        group,
        p,
        k,
        complete: false,
        source: action.target().clone(),
        tags: None,
        images: Vec::new(),
        relations: Vec::new(),
        dim: 2 * ga_k as i64 + 1,
        dim_computed: false,
        regular_sequence: Vec::new(),
        premises: None,
        notes: Vec::new(),
    };
    if group == GroupKind::SL2 {
        cert.notes.push(format!(
            "computed for Ga with k = {ga_k} via Roberts' isomorphism"
        ));
    }
    match run_stages(&mut cert, p, ga_k, opts) {
        Ok(()) => cert.complete = true,
        Err(Error::Interrupted) => cert.notes.push("time budget exhausted".into()),
        Err(e) => return Err(e),
    }
    if !cert.dim_computed {
        cert.notes
            .push("dimension taken from the formula 2k+1".into());
    }
    if cert.lower_bound_depth() > cert.upper_bound_depth() {
        return Err(Error::Verification(
            "depth lower bound exceeds the upper bound".into(),
        ));
    }
    Ok(cert)
}

fn run_stages(cert: &mut DepthCertificate, p: u32, k: usize, opts: PipelineOptions) -> Result<()> {
    cert.premises = Some(certify_premises(p, k)?);
    budget::check()?;
    let frob = frobenius_invariants(&FrobeniusProblem::builtin(GroupKind::Ga, p, k)?)?;
    let roberts = Roberts::new(&GroupAction::builtin(GroupKind::Ga, p, k)?)?;
    let weights = roberts.degree_weights();
    let ring = PresentedRing::of_generators(&cert.source, frob.invariants.clone(), Some(&weights))?;
    cert.tags = Some(ring.ring.clone());
    cert.images = ring.images.clone();
    cert.relations = ring.relations.generators().to_vec();
    cert.dim = ring.dim()?;
    cert.dim_computed = true;
    let seq = depth_test_sequence(p, k, opts.homogenize)?;
    let mut tagged = Vec::new();
    for f in &seq {
        match ring.express(f)? {
            Some(w) => tagged.push(w),
            None => {
                return Err(Error::Verification(format!(
                    "test element {} is not in the invariant ring",
                    format_poly(f)
                )))
            }
        }
    }
    let scan = scan_reg(&ring, &tagged)?;
    cert.regular_sequence = scan
        .accepted
        .iter()
        .zip(scan.sequence)
        .map(|(&i, g)| (format!("f{}", i + 3), g))
        .collect();
    if scan.interrupted {
        return Err(Error::Interrupted);
    }
    Ok(())
}

fn premise_blocks(
    pr: &HauptsatzPremises,
    product: &RingRef<PrimeField>,
) -> [(&'static str, String); 4] {
    let mut cocycle = format!(
        "cocycle rank {} unknowns {}\n",
        pr.nontrivial.rank, pr.nontrivial.unknowns
    );
    for (m, c) in &pr.nontrivial.functional {
        let _ = writeln!(cocycle, "functional {c} {}", format_monomial(product, m));
    }
    let mut anns = String::new();
    for (a, b) in &pr.annihilators {
        let _ = writeln!(anns, "annihilator {} ; {}", format_poly(a), format_poly(b));
    }
    [
        ("cocycle", cocycle),
        ("annihilators", anns),
        ("phsop", format!("phsop height {}\n", pr.phsop_height)),
        ("coprime", format!("coprime {}\n", pr.coprime)),
    ]
}

impl DepthCertificate {
    /// The text report; the last line hashes everything before it.
    pub fn render(&self) -> Result<String> {
        let mut s = String::new();
        let _ = writeln!(s, "invdepth certificate");
        let _ = writeln!(s, "group {}", self.group);
        let _ = writeln!(s, "p {}", self.p);
        let _ = writeln!(s, "k {}", self.k);
        let _ = writeln!(
            s,
            "status {}",
            if self.complete { "complete" } else { "partial" }
        );
        let _ = writeln!(s, "source {}", self.source.header());
        if let Some(t) = &self.tags {
            let _ = writeln!(s, "tags {}", t.header());
            for (i, img) in self.images.iter().enumerate() {
                let _ = writeln!(s, "image {} {}", t.name(i), format_poly(img));
            }
            for r in &self.relations {
                let _ = writeln!(s, "relation {}", format_poly(r));
            }
        }
        let _ = writeln!(
            s,
            "dim {} {}",
            self.dim,
            if self.dim_computed {
                "computed"
            } else {
                "formula"
            }
        );
        for (label, g) in &self.regular_sequence {
            let _ = writeln!(s, "regular {label} {}", format_poly(g));
        }
        let _ = writeln!(s, "depth >= {}", self.lower_bound_depth());
        if let Some(pr) = &self.premises {
            let action = GroupAction::builtin(GroupKind::Ga, self.p, self.ga_k())?;
            let blocks = premise_blocks(pr, action.product_ring_ref());
            for (_, b) in &blocks {
                s.push_str(b);
            }
            for (name, b) in &blocks {
                let _ = writeln!(s, "premise {name} {}", cache::digest(b));
            }
        }
        let _ = writeln!(s, "depth <= {}", self.upper_bound_depth());
        let (lo, hi) = self.cmdef_interval();
        let _ = writeln!(s, "cmdef interval [{lo}, {hi}]");
        match self.exact_cmdef() {
            Some(c) => {
                let _ = writeln!(s, "cmdef = {c}");
            }
            None => {
                let _ = writeln!(s, "cmdef in [{lo}, {hi}]");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note {n}");
        }
        let digest = cache::digest(&s);
        let _ = writeln!(s, "sha256 {digest}");
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub complete: bool,
    pub cmdef: (i64, i64),
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

/// Re-checks every claim of a rendered certificate by recomputation.
pub fn verify(text: &str) -> Result<VerifyReport> {
    let body_end = text
        .rfind("sha256 ")
        .ok_or_else(|| bad("missing checksum line"))?;
    let (body, trailer) = text.split_at(body_end);
    if trailer.trim() != format!("sha256 {}", cache::digest(body)) {
        return Err(bad("checksum mismatch"));
    }
    let mut lines = body.lines();
    if lines.next() != Some("invdepth certificate") {
        return Err(bad("not a certificate"));
    }
    let mut field = |key: &str| -> Result<String> {
        let l = lines.next().ok_or_else(|| bad(format!("missing {key}")))?;
        l.strip_prefix(key)
            .map(|r| r.trim().to_string())
            .ok_or_else(|| bad(format!("expected {key}, found {l:?}")))
    };
    let group = GroupKind::parse(&field("group")?)?;
    let p: u32 = field("p")?.parse().map_err(|_| bad("bad p"))?;
    let k: usize = field("k")?.parse().map_err(|_| bad("bad k"))?;
    let complete = match field("status")?.as_str() {
        "complete" => true,
        "partial" => false,
        s => return Err(bad(format!("bad status {s}"))),
    };
    let source: RingRef<PrimeField> = ring_from_header(&parse_header(&field("source")?)?)?;
    let ga_k = if group == GroupKind::SL2 { k - 1 } else { k };
    let action = GroupAction::builtin(GroupKind::Ga, p, ga_k)?;
    if !crate::ring::same_ring(&source, action.target()) {
        return Err(bad("source ring does not match the group data"));
    }
    let rest: Vec<&str> = body.lines().skip(6).collect();
    let mut it = rest.iter().peekable();
    let mut tags: Option<RingRef<PrimeField>> = None;
    let mut images = Vec::new();
    let mut relations = Vec::new();
    if let Some(l) = it.peek().and_then(|l| l.strip_prefix("tags ")) {
        let t = ring_from_header(&parse_header(l)?)?;
        it.next();
        while let Some(l) = it.peek().and_then(|l| l.strip_prefix("image ")) {
            let (label, poly) = l.split_once(' ').ok_or_else(|| bad("bad image line"))?;
            if images.len() >= t.nvars() || label != t.name(images.len()) {
                return Err(bad(format!("image label {label} out of place")));
            }
            images.push(parse_poly(&source, poly)?);
            it.next();
        }
        while let Some(l) = it.peek().and_then(|l| l.strip_prefix("relation ")) {
            relations.push(parse_poly(&t, l)?);
            it.next();
        }
        tags = Some(t);
    }
    let dim_line = it
        .next()
        .and_then(|l| l.strip_prefix("dim "))
        .ok_or_else(|| bad("missing dim"))?;
    let (dim_s, dim_src) = dim_line
        .split_once(' ')
        .ok_or_else(|| bad("bad dim line"))?;
    let dim: i64 = dim_s.parse().map_err(|_| bad("bad dim"))?;
    let mut seq = Vec::new();
    let mut labels = Vec::new();
    while let Some(l) = it.peek().and_then(|l| l.strip_prefix("regular ")) {
        let t = tags
            .as_ref()
            .ok_or_else(|| bad("regular sequence without tags"))?;
        let (label, poly) = l.split_once(' ').ok_or_else(|| bad("bad regular line"))?;
        let m: usize = label
            .strip_prefix('f')
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| bad("bad regular label"))?;
        labels.push(m);
        seq.push(parse_poly(t, poly)?);
        it.next();
    }
    let lower: i64 = it
        .next()
        .and_then(|l| l.strip_prefix("depth >= "))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("missing depth lower bound"))?;
    if lower != seq.len() as i64 {
        return Err(bad("depth lower bound differs from the sequence length"));
    }

    if let Some(t) = &tags {
        let ring = PresentedRing::from_parts(t, relations.clone(), &source, images.clone())?;
        for img in &images {
            if !action.is_invariant(img)? {
                return Err(bad(format!("image {} is not invariant", format_poly(img))));
            }
        }
        let fresh = Subalgebra::new(&source, images.clone())?.relation_ideal()?;
        let fresh_gens = fresh
            .generators()
            .iter()
            .map(|g| g.embed(t))
            .collect::<Result<Vec<_>>>()?;
        if !ring.relations.equals(&Ideal::new(t, fresh_gens)?)? {
            return Err(bad("recorded relations differ from the relation ideal"));
        }
        if dim_src != "computed" || ring.dim()? != dim {
            return Err(bad("dimension does not replay"));
        }
        if !labels.is_empty() {
            let variants = [
                depth_test_sequence(p, ga_k, true)?,
                depth_test_sequence(p, ga_k, false)?,
            ];
            let matches = |tests: &[Polynomial<PrimeField>]| -> Result<bool> {
                for (&m, g) in labels.iter().zip(&seq) {
                    let Some(f) = m.checked_sub(3).and_then(|i| tests.get(i)) else {
                        return Ok(false);
                    };
                    if ring.evaluate(g)? != *f {
                        return Ok(false);
                    }
                }
                Ok(labels.windows(2).all(|w| w[0] < w[1]))
            };
            if !(matches(&variants[0])? || matches(&variants[1])?) {
                return Err(bad(
                    "regular sequence is not a subsequence of the test sequence",
                ));
            }
        }
        if !is_regular_sequence(&ring, &seq)? {
            return Err(bad("regular sequence does not replay"));
        }
    } else if dim != 2 * ga_k as i64 + 1 || !seq.is_empty() {
        return Err(bad(
            "dimension without presentation must come from the formula",
        ));
    }

    let mut upper = dim;
    if it.peek().is_some_and(|l| l.starts_with("cocycle ")) {
        let product = action.product_ring_ref().clone();
        let head = it.next().unwrap();
        let nums: Vec<usize> = head
            .split_whitespace()
            .filter_map(|w| w.parse().ok())
            .collect();
        let [rank, unknowns] = nums[..] else {
            return Err(bad("bad cocycle line"));
        };
        let mut cocycle_block = format!("{head}\n");
        let mut functional = Vec::new();
        while let Some(l) = it.peek().and_then(|l| l.strip_prefix("functional ")) {
            let (c, m) = l
                .split_once(' ')
                .ok_or_else(|| bad("bad functional line"))?;
            let c: u32 = c.parse().map_err(|_| bad("bad coefficient"))?;
            let e = parse_monomial(&product, m)?;
            functional.push((Monomial::new(&product, &e), c));
            cocycle_block.push_str(it.next().unwrap());
            cocycle_block.push('\n');
        }
        let nontrivial = NontrivialityCertificate {
            functional,
            rank,
            unknowns,
        };
        let cocycle = Cocycle::builtin(p, ga_k)?;
        if !verify_nontrivial(&cocycle, &nontrivial)? {
            return Err(bad("nontriviality certificate does not check"));
        }
        let mut ann_block = String::new();
        let mut annihilators = Vec::new();
        while let Some(l) = it.peek().and_then(|l| l.strip_prefix("annihilator ")) {
            let (a, b) = l
                .split_once(" ; ")
                .ok_or_else(|| bad("bad annihilator line"))?;
            let (a, b) = (parse_poly(&source, a)?, parse_poly(&source, b)?);
            if !action.is_invariant(&a)? || !is_annihilation_witness(&a, &cocycle, &b)? {
                return Err(bad(format!(
                    "annihilation witness for {} does not check",
                    format_poly(&a)
                )));
            }
            annihilators.push((a, b));
            ann_block.push_str(it.next().unwrap());
            ann_block.push('\n');
        }
        if annihilators.len() < 2 {
            return Err(bad("need at least two annihilators"));
        }
        let ph_line = it.next().ok_or_else(|| bad("missing phsop line"))?;
        let height: i64 = ph_line
            .strip_prefix("phsop height ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad phsop line"))?;
        if roberts_phsop_height(action.clone(), &annihilators)? != height {
            return Err(bad("phsop height does not replay"));
        }
        let cp_line = it.next().ok_or_else(|| bad("missing coprime line"))?;
        let coprime = match cp_line.strip_prefix("coprime ") {
            Some("true") => true,
            Some("false") => false,
            _ => return Err(bad("bad coprime line")),
        };
        if coprime_pair(&annihilators[0].0, &annihilators[1].0)? != coprime {
            return Err(bad("coprimality does not replay"));
        }
        let blocks = [
            ("cocycle", cocycle_block),
            ("annihilators", ann_block),
            ("phsop", format!("{ph_line}\n")),
            ("coprime", format!("{cp_line}\n")),
        ];
        for (name, b) in &blocks {
            let l = it.next().ok_or_else(|| bad("missing premise hash"))?;
            if *l != format!("premise {name} {}", cache::digest(b)) {
                return Err(bad(format!("premise hash for {name} does not match")));
            }
        }
        let pr = HauptsatzPremises {
            nontrivial,
            annihilators,
            phsop_height: height,
            coprime,
        };
        if pr.holds() {
            upper = dim - pr.cmdef_lower() as i64;
        }
    }
    let upper_line = it
        .next()
        .and_then(|l| l.strip_prefix("depth <= "))
        .and_then(|s| s.parse::<i64>().ok());
    if upper_line != Some(upper) {
        return Err(bad("depth upper bound does not replay"));
    }
    if lower > upper {
        return Err(bad("depth lower bound exceeds the upper bound"));
    }
    let cmdef = (dim - upper, dim - lower);
    if it.next().copied() != Some(format!("cmdef interval [{}, {}]", cmdef.0, cmdef.1).as_str()) {
        return Err(bad("cmdef interval does not replay"));
    }
    let claim = if cmdef.0 == cmdef.1 {
        format!("cmdef = {}", cmdef.0)
    } else {
        format!("cmdef in [{}, {}]", cmdef.0, cmdef.1)
    };
    if it.next().copied() != Some(claim.as_str()) {
        return Err(bad("cmdef claim does not replay"));
    }
    if let Some(l) = it.find(|l| !l.starts_with("note ")) {
        return Err(bad(format!("unexpected line {l:?}")));
    }
    Ok(VerifyReport { complete, cmdef })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn k7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn scan_on_cross() {
        let r = Ring::new(k7(), &["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let ring = PresentedRing::quotient(Ideal::new(&r, vec![p("x*y")]).unwrap());
        let s = scan_reg(&ring, &[p("x"), p("y"), p("x + y")]).unwrap();
        assert_eq!(s.accepted, vec![2]);
        assert_eq!(s.depth_lower_bound(), 1);
        assert!(is_regular_sequence(&ring, &s.sequence).unwrap());
        let free = PresentedRing::polynomial(&r);
        assert_eq!(
            scan_reg(&free, &[p("x"), p("y")]).unwrap().accepted,
            vec![0, 1]
        );
        assert_eq!(
            scan_reg(&free, &[p("x + 1"), p("y")]).unwrap().accepted,
            vec![1]
        );
    }

    #[test]
    fn phsop_checks() {
        let r = Ring::new(k7(), &["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let free = PresentedRing::polynomial(&r);
        assert!(is_phsop(&free, &[p("x"), p("y")]).unwrap());
        assert!(!is_phsop(&free, &[p("x"), p("x^2")]).unwrap());
        assert!(!is_phsop(&free, &[p("x + 1")]).unwrap());
    }

    #[test]
    fn premises_small() {
        let pr = certify_premises(2, 3).unwrap();
        assert!(pr.holds());
        assert_eq!(pr.cmdef_lower(), 1);
    }
}
