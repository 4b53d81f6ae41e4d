//! Generators of `B ∩ K[X^p, Y]` for a subalgebra `B = K[f, g]` with
//! `g ∈ K[Y]`, via the kernel of the `A`-linear map `D = (∂/∂X_i)` on
//! `B = Σ A·t` with `A = K[f^p, g]` and `t` running over the products of the
//! `f` with exponents below `p`. Substituting `X^p -> X` afterwards gives the
//! invariants of the Frobenius twist.

use std::collections::{BTreeMap, HashMap};

use crate::actions::{GroupAction, GroupKind};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::groebner::{cache, module_groebner, syzygies, FreeModuleElement, ModuleOrder};
use crate::invariants_sl2::bracket;
use crate::linalg;
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, RingRef};
use crate::subalgebra::Subalgebra;
use crate::text::{format_poly, PolyFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KernelRoute {
    /// One module basis over `K[X, tags]` with the images and the tag
    /// relations side by side.
    #[default]
    Fused,
    /// Syzygies of the images, then intersection with `A^r`.
    Stepwise,
}

#[derive(Clone, Debug)]
pub struct FrobeniusProblem {
    pub p: u32,
    pub ambient: RingRef<PrimeField>,
    pub x_block: Vec<usize>,
    pub fs: Vec<Polynomial<PrimeField>>,
    pub gs: Vec<Polynomial<PrimeField>>,
    /// Same number of variables as `ambient`; variable `i` of the target
    /// stands for `x_i^p` on the X block and for `x_i` elsewhere.
    pub target: RingRef<PrimeField>,
    /// Checked on every output when present.
    pub action: Option<GroupAction<PrimeField>>,
    pub route: KernelRoute,
    /// Number of products `t` above which a warning is recorded.
    pub warn_above: usize,
}

impl FrobeniusProblem {
    pub fn new(
        ambient: &RingRef<PrimeField>,
        x_block: Vec<usize>,
        fs: Vec<Polynomial<PrimeField>>,
        gs: Vec<Polynomial<PrimeField>>,
        target: &RingRef<PrimeField>,
    ) -> Result<Self> {
        let p = ambient.field().p();
        if target.nvars() != ambient.nvars() || target.field() != ambient.field() {
            return Err(Error::Invalid(
                "target ring must match the ambient ring variable for variable".into(),
            ));
        }
        if x_block.iter().any(|&x| x >= ambient.nvars()) {
            return Err(Error::Invalid("X block index out of range".into()));
        }
        for f in fs.iter().chain(&gs) {
            if !same_ring(f.ring(), ambient) {
                return Err(Error::RingMismatch);
            }
        }
        if gs.iter().any(|g| x_block.iter().any(|&x| g.involves(x))) {
            return Err(Error::Invalid(
                "the g generators must not involve the X block".into(),
            ));
        }
        Ok(FrobeniusProblem {
            p,
            ambient: ambient.clone(),
            x_block,
            fs,
            gs,
            target: target.clone(),
            action: None,
            route: KernelRoute::Fused,
            warn_above: 64,
        })
    }

    /// `S(<X0,Y0> + k<X,Y>)^G` with `G = Ga` or `SL2`, twisted on copy 0.
    pub fn builtin(kind: GroupKind, p: u32, k: usize) -> Result<Self> {
        let action = GroupAction::builtin(kind, p, k)?;
        let target = action.target().clone();
        let ambient = crate::ring::Ring::new(*target.field(), target.names())?;
        let c = |i: usize| crate::actions::Copy {
            x: 2 * i,
            y: 2 * i + 1,
            twist: 1,
        };
        let mut fs = Vec::new();
        let mut gs = Vec::new();
        if kind == GroupKind::Ga {
            fs.push(Polynomial::var(&ambient, 0));
            gs.extend((1..=k).map(|i| Polynomial::var(&ambient, 2 * i)));
        }
        fs.extend((1..=k).map(|j| bracket(&ambient, c(0), c(j))));
        for i in 1..=k {
            for j in i + 1..=k {
                gs.push(bracket(&ambient, c(i), c(j)));
            }
        }
        let mut prob = FrobeniusProblem::new(&ambient, vec![0, 1], fs, gs, &target)?;
        prob.action = Some(action);
        Ok(prob)
    }

    pub fn with_route(mut self, route: KernelRoute) -> Self {
        self.route = route;
        self
    }

    fn cache_key(&self, tag: &str) -> String {
        let mut s = format!(
            "frobenius {tag} {:?} {}\n{:?}\n",
            self.route,
            self.ambient.header(),
            self.x_block
        );
        for f in self.fs.iter().chain(&self.gs) {
            s.push_str(&format_poly(f));
            s.push('\n');
        }
        cache::digest(&s)
    }

    /// The products `t` of the `f` with exponent vectors below `p`, in
    /// lexicographic exponent order.
    pub fn tensor_basis(&self) -> Vec<Polynomial<PrimeField>> {
        let mut out = vec![Polynomial::one(&self.ambient)];
        for f in self.fs.iter().rev() {
            let powers: Vec<_> = (0..self.p).map(|e| f.pow(e)).collect();
            out = powers
                .iter()
                .flat_map(|pw| out.iter().map(move |t| pw * t))
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FrobeniusOutput {
    /// Generators of `B ∩ K[X^p, Y]` in the ambient ring.
    pub intersection: Vec<Polynomial<PrimeField>>,
    /// The same after `X^p -> X`, in the target ring.
    pub invariants: Vec<Polynomial<PrimeField>>,
    pub tensor_rank: usize,
    pub warnings: Vec<String>,
}

/// Shifts making every `(D(t_μ), e_μ)` homogeneous, if possible.
fn kernel_shifts<F: Field>(
    ts: &[Polynomial<F>],
    images: &[FreeModuleElement<F>],
) -> Option<Vec<u32>> {
    let m = images.first()?.rank();
    let mut first: Vec<Option<u32>> = vec![None; m];
    let mut tail = Vec::with_capacity(ts.len());
    for (t, img) in ts.iter().zip(images) {
        let dt = if t.is_homogeneous() {
            t.scaled_degree()
        } else {
            None
        }?;
        tail.push(dt);
        for (j, c) in img.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return None;
            }
            let s = dt.checked_sub(c.scaled_degree()?)?;
            match first[j] {
                None => first[j] = Some(s),
                Some(x) if x != s => return None,
                _ => {}
            }
        }
    }
    let mut out: Vec<u32> = first.into_iter().map(|s| s.unwrap_or(0)).collect();
    out.extend(tail);
    Some(out)
}

fn combine_kernel<F: Field>(
    a: &Subalgebra<F>,
    ts: &[Polynomial<F>],
    bs: Vec<Vec<Polynomial<F>>>,
) -> Result<Vec<Polynomial<F>>> {
    let mut out = Vec::new();
    for b in bs {
        let mut c = Polynomial::zero(a.ambient());
        for (bm, t) in b.iter().zip(ts) {
            if !bm.is_zero() {
                c = &c + &(&a.evaluate(bm)? * t);
            }
        }
        if !c.is_zero() {
            out.push(c);
        }
    }
    Ok(out)
}

/// `A`-module generators of `ker D` on `Σ A·t_μ`, where `images[μ] = D(t_μ)`.
/// The caller guarantees that `D` is `A`-linear.
pub fn compute_kernel<F: Field>(
    a: &Subalgebra<F>,
    ts: &[Polynomial<F>],
    images: &[FreeModuleElement<F>],
    route: KernelRoute,
) -> Result<Vec<Polynomial<F>>> {
    if ts.len() != images.len() {
        return Err(Error::Invalid("one image per module generator".into()));
    }
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    let m = images[0].rank();
    if images.iter().all(|i| i.is_zero()) {
        return Ok(ts.iter().filter(|t| !t.is_zero()).cloned().collect());
    }
    let shifts = kernel_shifts(ts, images);
    let bs = match route {
        KernelRoute::Stepwise => {
            let syz = syzygies(a.ambient(), images)?;
            let tail = shifts.as_ref().map(|s| s[m..].to_vec());
            a.module_intersect(&syz, tail.as_deref())?
        }
        KernelRoute::Fused => fused_kernel(a, images, shifts)?,
    };
    combine_kernel(a, ts, bs)
}

fn fused_kernel<F: Field>(
    a: &Subalgebra<F>,
    images: &[FreeModuleElement<F>],
    shifts: Option<Vec<u32>>,
) -> Result<Vec<Vec<Polynomial<F>>>> {
    let big = a.graph_ring().clone();
    let n = a.ambient().nvars();
    let m = images[0].rank();
    let r = images.len();
    let mut elems = Vec::new();
    for (mu, img) in images.iter().enumerate() {
        let mut comps = Vec::with_capacity(m + r);
        for c in img.components() {
            comps.push(c.embed(&big)?);
        }
        for l in 0..r {
            comps.push(if l == mu {
                Polynomial::one(&big)
            } else {
                Polynomial::zero(&big)
            });
        }
        elems.push(FreeModuleElement::new(&big, comps)?);
    }
    for rel in a.graph_ideal().generators() {
        for j in 0..m {
            let mut comps = vec![Polynomial::zero(&big); m + r];
            comps[j] = rel.clone();
            elems.push(FreeModuleElement::new(&big, comps)?);
        }
    }
    let levels: Vec<u32> = (0..m + r).map(|j| u32::from(j < m)).collect();
    let elim: Vec<usize> = (0..n).collect();
    let order = match shifts {
        Some(s) if a.generators().iter().all(|g| g.is_homogeneous()) => {
            ModuleOrder::top(MonomialOrder::graded_elimination(&big, elim)).with_shifts(s)
        }
        _ => ModuleOrder::top(MonomialOrder::elimination(elim)),
    }
    .with_levels(levels);
    let gb = module_groebner(&big, &elems, &order)?;
    let map: Vec<Option<usize>> = (0..big.nvars()).map(|v| v.checked_sub(n)).collect();
    let mut out = Vec::new();
    for g in gb {
        let comps = g.components();
        if comps[..m].iter().any(|c| !c.is_zero()) {
            continue;
        }
        if comps[m..].iter().any(|c| (0..n).any(|v| c.involves(v))) {
            continue;
        }
        out.push(
            comps[m..]
                .iter()
                .map(|c| c.map_vars(a.tag_ring(), &map))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(out)
}

/// Drops every element lying in the algebra generated by the ones kept
/// before it, processing by increasing degree.
pub fn interreduce<F: Field>(
    ring: &RingRef<F>,
    gens: Vec<Polynomial<F>>,
) -> Result<Vec<Polynomial<F>>> {
    let mut gens: Vec<Polynomial<F>> = gens
        .into_iter()
        .filter(|g| !g.is_constant())
        .map(|g| g.monic())
        .collect();
    let k = ring.field().clone();
    if gens.iter().any(|g| !g.is_homogeneous()) {
        let mut kept: Vec<Polynomial<F>> = Vec::new();
        for g in gens {
            if kept.is_empty() || !Subalgebra::new(ring, kept.clone())?.contains(&g)? {
                kept.push(g);
            }
        }
        return Ok(kept);
    }
    gens.sort_by_key(|g| g.scaled_degree());
    let mut by_degree: BTreeMap<u32, Vec<Polynomial<F>>> = BTreeMap::new();
    for g in gens {
        let d = g.scaled_degree().unwrap_or(0);
        let bucket = by_degree.entry(d).or_default();
        if !bucket.contains(&g) {
            bucket.push(g);
        }
    }
    let mut kept: Vec<Polynomial<F>> = Vec::new();
    for (_, batch) in by_degree {
        let residues: Vec<Polynomial<F>> = if kept.is_empty() {
            batch.clone()
        } else {
            let sub = Subalgebra::new(ring, kept.clone())?;
            batch
                .iter()
                .map(|g| sub.residue(g))
                .collect::<Result<_>>()?
        };
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        let mut rows: Vec<linalg::SparseRow<F::Elem>> = Vec::new();
        for (g, res) in batch.into_iter().zip(residues) {
            if res.is_zero() {
                continue;
            }
            let mut row: linalg::SparseRow<F::Elem> = res
                .terms()
                .iter()
                .map(|(mo, c)| {
                    let next = index.len();
                    (*index.entry(mo.clone()).or_insert(next), c.clone())
                })
                .collect();
            row.sort_by_key(|x| x.0);
            rows.push(row);
            if linalg::rank(&k, &rows) == rows.len() {
                kept.push(g);
            } else {
                rows.pop();
            }
        }
    }
    Ok(kept)
}

/// `x^(p e) -> z^e` on the X block, identity elsewhere.
pub fn to_target(
    prob: &FrobeniusProblem,
    f: &Polynomial<PrimeField>,
) -> Result<Polynomial<PrimeField>> {
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let mut e: Vec<Exp> = m.exps().to_vec();
        for &x in &prob.x_block {
            if !(e[x] as u32).is_multiple_of(prob.p) {
                return Err(Error::Verification(format!(
                    "exponent of {} in {} is not a multiple of {}",
                    prob.ambient.name(x),
                    format_poly(f),
                    prob.p
                )));
            }
            e[x] /= prob.p as Exp;
        }
        terms.push((Monomial::new(&prob.target, &e), *c));
    }
    Ok(Polynomial::from_terms(&prob.target, terms))
}

/// `z^e -> x^(p e)`.
pub fn from_target(
    prob: &FrobeniusProblem,
    f: &Polynomial<PrimeField>,
) -> Result<Polynomial<PrimeField>> {
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let mut e: Vec<Exp> = m.exps().to_vec();
        for &x in &prob.x_block {
            e[x] = e[x]
                .checked_mul(prob.p as Exp)
                .ok_or(Error::ExponentOverflow)?;
        }
        terms.push((Monomial::new(&prob.ambient, &e), *c));
    }
    Ok(Polynomial::from_terms(&prob.ambient, terms))
}

/// Algebra generators of `B ∩ K[X^p, Y]`, interreduced.
pub fn intersect_xp_y(
    prob: &FrobeniusProblem,
) -> Result<(Vec<Polynomial<PrimeField>>, usize, Vec<String>)> {
    let ts = prob.tensor_basis();
    let mut warnings = Vec::new();
    if ts.len() > prob.warn_above {
        warnings.push(format!(
            "{} module generators over A; expect a long run",
            ts.len()
        ));
    }
    let key = prob.cache_key("intersection");
    if let Some(body) = cache::load(&key)? {
        let file = PolyFile::<PrimeField>::parse(&body)?;
        let out = file
            .polys
            .iter()
            .map(|f| f.embed(&prob.ambient))
            .collect::<Result<Vec<_>>>()?;
        check_frobenius_closed(prob, &out)?;
        return Ok((out, ts.len(), warnings));
    }
    let mut a_gens: Vec<Polynomial<PrimeField>> = prob.fs.iter().map(|f| f.pow(prob.p)).collect();
    a_gens.extend(prob.gs.iter().cloned());
    let a = Subalgebra::new(&prob.ambient, a_gens.clone())?;
    let images: Vec<FreeModuleElement<PrimeField>> = ts
        .iter()
        .map(|t| {
            FreeModuleElement::new(
                &prob.ambient,
                prob.x_block.iter().map(|&x| t.derivative(x)).collect(),
            )
        })
        .collect::<Result<_>>()?;
    let kernel = compute_kernel(&a, &ts, &images, prob.route)?;
    check_frobenius_closed(prob, &kernel)?;
    let mut all = a_gens;
    all.extend(kernel);
    let out = interreduce(&prob.ambient, all)?;
    cache::store(
        &key,
        &PolyFile::new(prob.ambient.clone(), out.clone()).render(),
    )?;
    Ok((out, ts.len(), warnings))
}

fn check_frobenius_closed(prob: &FrobeniusProblem, gens: &[Polynomial<PrimeField>]) -> Result<()> {
    for c in gens {
        if prob.x_block.iter().any(|&x| !c.derivative(x).is_zero()) {
            return Err(Error::Verification(format!(
                "kernel element {} has a nonzero X derivative",
                format_poly(c)
            )));
        }
    }
    Ok(())
}

pub fn frobenius_invariants(prob: &FrobeniusProblem) -> Result<FrobeniusOutput> {
    let (intersection, tensor_rank, warnings) = intersect_xp_y(prob)?;
    let invariants = intersection
        .iter()
        .map(|f| to_target(prob, f))
        .collect::<Result<Vec<_>>>()?;
    if let Some(action) = &prob.action {
        for f in &invariants {
            if !same_ring(f.ring(), action.target()) {
                return Err(Error::RingMismatch);
            }
            if !action.is_invariant(f)? {
                return Err(Error::Verification(format!(
                    "output {} is not invariant",
                    format_poly(f)
                )));
            }
        }
    }
    Ok(FrobeniusOutput {
        intersection,
        invariants,
        tensor_rank,
        warnings,
    })
}

/// Every element of `of` lies in `K[gens]`; returns the first that does not.
pub fn first_outside(
    ring: &RingRef<PrimeField>,
    gens: &[Polynomial<PrimeField>],
    of: &[Polynomial<PrimeField>],
) -> Result<Option<Polynomial<PrimeField>>> {
    let gens: Vec<_> = gens.iter().filter(|g| !g.is_constant()).cloned().collect();
    let sub = Subalgebra::new(ring, gens)?;
    for f in of {
        if !f.is_constant() && !sub.contains(f)? {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}

/// `K[a] = K[b]` by two-way membership.
pub fn same_algebra(
    ring: &RingRef<PrimeField>,
    a: &[Polynomial<PrimeField>],
    b: &[Polynomial<PrimeField>],
) -> Result<bool> {
    Ok(first_outside(ring, a, b)?.is_none() && first_outside(ring, b, a)?.is_none())
}
