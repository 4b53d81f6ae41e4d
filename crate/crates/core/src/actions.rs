//! Linear actions of `Ga` and `SL2` on polynomial rings by substitution,
//! invariance tests, 1-cocycles and coboundary search.
//!
//! On each copy `<X_i, Y_i>` a group element with matrix `(a b; c d)` acts by
//! `X_i -> a X_i + c Y_i`, `Y_i -> b X_i + d Y_i`; a twisted copy uses the
//! `q`-th powers of the entries. `Ga` is embedded as `t -> (1 t; 0 1)`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::groebner::normal_form;
use crate::linalg::{self, Solution, SparseRow};
use crate::monomial::{Exp, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring, RingRef, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Ga,
    SL2,
}

impl GroupKind {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            GroupKind::Ga => &["t"],
            GroupKind::SL2 => &["a", "b", "c", "d"],
        }
    }

    fn matrix<F: Field>(self, ring: &RingRef<F>, params: &[usize]) -> [Polynomial<F>; 4] {
        let v = |i: usize| Polynomial::var(ring, params[i]);
        match self {
            GroupKind::Ga => [
                Polynomial::one(ring),
                v(0),
                Polynomial::zero(ring),
                Polynomial::one(ring),
            ],
            GroupKind::SL2 => [v(0), v(1), v(2), v(3)],
        }
    }

    fn variety<F: Field>(self, ring: &RingRef<F>, params: &[usize]) -> Option<Polynomial<F>> {
        match self {
            GroupKind::Ga => None,
            GroupKind::SL2 => {
                let v = |i: usize| Polynomial::var(ring, params[i]);
                Some(&(&(&v(0) * &v(3)) - &(&v(1) * &v(2))) - &Polynomial::one(ring))
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(GroupKind::Ga),
            "sl2" => Ok(GroupKind::SL2),
            _ => Err(Error::Invalid(format!("unknown group {s}"))),
        }
    }
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GroupKind::Ga => "ga",
            GroupKind::SL2 => "sl2",
        })
    }
}

/// A copy of the natural representation inside the target ring; `twist` is
/// the power applied to the matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Copy {
    pub x: usize,
    pub y: usize,
    pub twist: u32,
}

#[derive(Clone, Debug)]
pub struct GroupAction<F: Field> {
    kind: GroupKind,
    target: RingRef<F>,
    copies: Vec<Copy>,
    product: RingRef<F>,
    images: Vec<Polynomial<F>>,
    variety: Vec<Polynomial<F>>,
}

fn param_ring_names<F: Field>(target: &RingRef<F>, kind: GroupKind, sets: usize) -> Vec<String> {
    let mut out = Vec::new();
    for s in 0..sets {
        for n in kind.param_names() {
            let stem = if s == 0 {
                n.to_string()
            } else {
                format!("{n}{}", s + 1)
            };
            let mut name = stem.clone();
            while target.index(&name).is_some() || out.contains(&name) {
                name.push('_');
            }
            out.push(name);
        }
    }
    out
}

impl<F: Field> GroupAction<F> {
    pub fn new(target: &RingRef<F>, kind: GroupKind, copies: Vec<Copy>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &copies {
            if c.x >= target.nvars()
                || c.y >= target.nvars()
                || !seen.insert(c.x)
                || !seen.insert(c.y)
            {
                return Err(Error::Invalid(
                    "copies must use distinct target variables".into(),
                ));
            }
            if c.twist == 0 {
                return Err(Error::Invalid("twist exponent must be positive".into()));
            }
        }
        let (product, params) = Self::product_ring(target, kind, 1)?;
        let images = Self::images_in(
            target,
            kind,
            &copies,
            &product,
            &params[0],
            params.len() * params[0].len(),
        )?;
        let variety = kind.variety(&product, &params[0]).into_iter().collect();
        let action = GroupAction {
            kind,
            target: target.clone(),
            copies,
            product,
            images,
            variety,
        };
        action.check_axioms()?;
        Ok(action)
    }

    fn product_ring(
        target: &RingRef<F>,
        kind: GroupKind,
        sets: usize,
    ) -> Result<(RingRef<F>, Vec<Vec<usize>>)> {
        let names = param_ring_names(target, kind, sets);
        let np = kind.param_names().len();
        let params = Ring::with_weights(
            target.field().clone(),
            &names,
            vec![Weight::from_integer(1); names.len()],
        )?;
        let product = params.extend(target.names(), target.weights())?;
        let idx = (0..sets)
            .map(|s| (s * np..(s + 1) * np).collect())
            .collect();
        Ok((product, idx))
    }

    fn images_in(
        target: &RingRef<F>,
        kind: GroupKind,
        copies: &[Copy],
        ring: &RingRef<F>,
        params: &[usize],
        offset: usize,
    ) -> Result<Vec<Polynomial<F>>> {
        let m = kind.matrix(ring, params);
        Self::images_for_matrix(target, copies, ring, &m, offset)
    }

    fn images_for_matrix(
        target: &RingRef<F>,
        copies: &[Copy],
        ring: &RingRef<F>,
        m: &[Polynomial<F>; 4],
        offset: usize,
    ) -> Result<Vec<Polynomial<F>>> {
        let mut images: Vec<Polynomial<F>> = (0..target.nvars())
            .map(|i| Polynomial::var(ring, offset + i))
            .collect();
        for c in copies {
            let [a, b, cc, d] = [&m[0], &m[1], &m[2], &m[3]].map(|e| e.try_pow(c.twist));
            let (x, y) = (
                Polynomial::var(ring, offset + c.x),
                Polynomial::var(ring, offset + c.y),
            );
            images[c.x] = &(&a? * &x) + &(&cc? * &y);
            images[c.y] = &(&b? * &x) + &(&d? * &y);
        }
        Ok(images)
    }

    fn check_axioms(&self) -> Result<()> {
        let np = self.kind.param_names().len();
        let ident: Vec<(usize, F::Elem)> = match self.kind {
            GroupKind::Ga => vec![(0, self.field().zero())],
            GroupKind::SL2 => {
                let k = self.field();
                vec![(0, k.one()), (1, k.zero()), (2, k.zero()), (3, k.one())]
            }
        };
        for (i, img) in self.images.iter().enumerate() {
            if img.specialize(&ident) != Polynomial::var(&self.product, np + i) {
                return Err(Error::Verification(
                    "identity element does not act trivially".into(),
                ));
            }
        }
        let (two, params) = Self::product_ring(&self.target, self.kind, 2)?;
        let off = 2 * np;
        let m1 = self.kind.matrix(&two, &params[0]);
        let m2 = self.kind.matrix(&two, &params[1]);
        let first = Self::images_for_matrix(&self.target, &self.copies, &two, &m2, off)?;
        let second = Self::images_for_matrix(&self.target, &self.copies, &two, &m1, off)?;
        let mut subst: Vec<Polynomial<F>> = (0..off).map(|i| Polynomial::var(&two, i)).collect();
        subst.extend(second);
        let prod = [
            &(&m1[0] * &m2[0]) + &(&m1[1] * &m2[2]),
            &(&m1[0] * &m2[1]) + &(&m1[1] * &m2[3]),
            &(&m1[2] * &m2[0]) + &(&m1[3] * &m2[2]),
            &(&m1[2] * &m2[1]) + &(&m1[3] * &m2[3]),
        ];
        let composed = Self::images_for_matrix(&self.target, &self.copies, &two, &prod, off)?;
        for (f, g) in first.iter().zip(&composed) {
            if &f.substitute(&two, &subst)? != g {
                return Err(Error::Verification(
                    "action is not compatible with the group law".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn target(&self) -> &RingRef<F> {
        &self.target
    }

    pub fn copies(&self) -> &[Copy] {
        &self.copies
    }

    /// Parameters followed by the target variables.
    pub fn product_ring_ref(&self) -> &RingRef<F> {
        &self.product
    }

    pub fn field(&self) -> &F {
        self.target.field()
    }

    pub fn nparams(&self) -> usize {
        self.kind.param_names().len()
    }

    fn reduce(&self, f: Polynomial<F>) -> Result<Polynomial<F>> {
        if self.variety.is_empty() {
            Ok(f)
        } else {
            normal_form(&f, &self.variety, &MonomialOrder::Grevlex)
        }
    }

    /// `f` moved into the product ring.
    pub fn lift(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(f.ring(), &self.target) {
            return Err(Error::RingMismatch);
        }
        let np = self.nparams();
        let map: Vec<Option<usize>> = (0..self.target.nvars()).map(|i| Some(np + i)).collect();
        f.map_vars(&self.product, &map)
    }

    /// `σ·f` with symbolic `σ`, reduced modulo the group variety.
    pub fn act(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(f.ring(), &self.target) {
            return Err(Error::RingMismatch);
        }
        self.reduce(f.substitute(&self.product, &self.images)?)
    }

    /// `σ·f` for `f` in the product ring, leaving the parameters alone.
    pub fn act_on_product(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        let mut subst: Vec<Polynomial<F>> = (0..self.nparams())
            .map(|i| Polynomial::var(&self.product, i))
            .collect();
        subst.extend(self.images.iter().cloned());
        self.reduce(f.substitute(&self.product, &subst)?)
    }

    pub fn is_invariant(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok((&self.act(f)? - &self.lift(f)?).is_zero())
    }

    /// Degree of `f` in each copy, followed by the degree in each untouched
    /// variable.
    fn multidegree(&self, exps: &[Exp]) -> Vec<u32> {
        let mut in_copy = vec![false; exps.len()];
        let mut out = Vec::new();
        for c in &self.copies {
            in_copy[c.x] = true;
            in_copy[c.y] = true;
            out.push(exps[c.x] as u32 + exps[c.y] as u32);
        }
        out.extend(
            exps.iter()
                .zip(&in_copy)
                .filter(|(_, &c)| !c)
                .map(|(&e, _)| e as u32),
        );
        out
    }

    /// All target monomials sharing the copy multidegree of `exps`.
    fn monomials_like(&self, exps: &[Exp]) -> Vec<Vec<Exp>> {
        let mut out = vec![exps.to_vec()];
        for c in &self.copies {
            let d = exps[c.x] + exps[c.y];
            let mut next = Vec::new();
            for m in &out {
                for i in 0..=d {
                    let mut e = m.clone();
                    e[c.x] = i;
                    e[c.y] = d - i;
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

impl GroupAction<PrimeField> {
    /// The action on `K[X0, Y0, X1, Y1, ..., Xk, Yk]` over `F_p` with the copy
    /// `<X0, Y0>` twisted by the Frobenius.
    pub fn builtin(kind: GroupKind, p: u32, k: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let ring = Ring::new(field, &vector_names(0, k))?;
        let mut copies = vec![Copy {
            x: 0,
            y: 1,
            twist: p,
        }];
        copies.extend((1..=k).map(|i| Copy {
            x: 2 * i,
            y: 2 * i + 1,
            twist: 1,
        }));
        GroupAction::new(&ring, kind, copies)
    }
}

/// `X{from}, Y{from}, ..., X{to}, Y{to}`.
pub fn vector_names(from: usize, to: usize) -> Vec<String> {
    (from..=to)
        .flat_map(|i| [format!("X{i}"), format!("Y{i}")])
        .collect()
}

/// Untwisted copies on consecutive variable pairs of `target`.
pub fn natural_copies(pairs: usize) -> Vec<Copy> {
    (0..pairs)
        .map(|i| Copy {
            x: 2 * i,
            y: 2 * i + 1,
            twist: 1,
        })
        .collect()
}

/// A 1-cocycle `σ -> g_σ` with values in one homogeneous component of the
/// target ring; `value` lives in the product ring of the action.
#[derive(Clone, Debug)]
pub struct Cocycle<F: Field> {
    pub action: GroupAction<F>,
    pub value: Polynomial<F>,
}

impl<F: Field> Cocycle<F> {
    pub fn new(action: GroupAction<F>, value: Polynomial<F>) -> Result<Self> {
        if !same_ring(value.ring(), action.product_ring_ref()) {
            return Err(Error::RingMismatch);
        }
        Ok(Cocycle { action, value })
    }

    /// Target degree of the values, if they are homogeneous.
    pub fn target_degree(&self) -> Option<u32> {
        let np = self.action.nparams();
        let mut deg = None;
        for (m, _) in self.value.terms() {
            let d: u32 = m.exps()[np..].iter().map(|&e| e as u32).sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// The cocycle `σ -> a·g_σ` for a polynomial `a` of the target ring.
    pub fn times(&self, a: &Polynomial<F>) -> Result<Self> {
        Ok(Cocycle {
            action: self.action.clone(),
            value: &self.action.lift(a)? * &self.value,
        })
    }

    /// The coboundary `σ -> (σ - 1) v`.
    pub fn coboundary(action: GroupAction<F>, v: &Polynomial<F>) -> Result<Self> {
        let value = &action.act(v)? - &action.lift(v)?;
        Ok(Cocycle { action, value })
    }
}

impl Cocycle<PrimeField> {
    /// `t -> X0 · ((t - 1)·Y1^(p-1)) / X1` on the builtin `Ga` action.
    pub fn builtin(p: u32, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid(
                "the cocycle needs at least one untwisted copy".into(),
            ));
        }
        let action = GroupAction::builtin(GroupKind::Ga, p, k)?;
        let r = action.product_ring_ref().clone();
        let (x0, x1, y1) = (
            Polynomial::var(&r, 1),
            Polynomial::var(&r, 3),
            Polynomial::var(&r, 4),
        );
        let moved = action.act(&Polynomial::var(action.target(), 3).pow(p - 1))?;
        let diff = &moved - &y1.pow(p - 1);
        let value = &x0 * &diff.div_exact(&x1)?;
        let c = Cocycle::new(action, value)?;
        if !check_cocycle(&c)? {
            return Err(Error::Verification(
                "builtin cocycle fails the cocycle identity".into(),
            ));
        }
        Ok(c)
    }
}

/// `g_{στ} = σ·g_τ + g_σ` as a polynomial identity in two parameter sets.
pub fn check_cocycle<F: Field>(c: &Cocycle<F>) -> Result<bool> {
    let a = &c.action;
    let kind = a.kind();
    let np = a.nparams();
    let target = a.target();
    let (two, params) = GroupAction::product_ring(target, kind, 2)?;
    let off = 2 * np;
    let m1 = kind.matrix(&two, &params[0]);
    let m2 = kind.matrix(&two, &params[1]);
    let prod = [
        &(&m1[0] * &m2[0]) + &(&m1[1] * &m2[2]),
        &(&m1[0] * &m2[1]) + &(&m1[1] * &m2[3]),
        &(&m1[2] * &m2[0]) + &(&m1[3] * &m2[2]),
        &(&m1[2] * &m2[1]) + &(&m1[3] * &m2[3]),
    ];
    let tvars = |from: usize| -> Vec<Polynomial<F>> {
        (0..target.nvars())
            .map(|i| Polynomial::var(&two, from + i))
            .collect()
    };
    let with_params = |ps: Vec<Polynomial<F>>, tv: Vec<Polynomial<F>>| -> Result<Polynomial<F>> {
        let mut s = ps;
        s.extend(tv);
        c.value.substitute(&two, &s)
    };
    let param_polys = |m: &[Polynomial<F>; 4], set: &[usize]| -> Vec<Polynomial<F>> {
        match kind {
            GroupKind::Ga => vec![m[1].clone()],
            GroupKind::SL2 => {
                let _ = set;
                m.to_vec()
            }
        }
    };
    let g_st = with_params(param_polys(&prod, &params[0]), tvars(off))?;
    let g_s = with_params(param_polys(&m1, &params[0]), tvars(off))?;
    let sigma_images = GroupAction::images_for_matrix(target, a.copies(), &two, &m1, off)?;
    let g_t = with_params(param_polys(&m2, &params[1]), sigma_images)?;
    let diff = &(&g_st - &g_t) - &g_s;
    let variety: Vec<Polynomial<F>> = params
        .iter()
        .filter_map(|ps| kind.variety(&two, ps))
        .collect();
    let r = if variety.is_empty() {
        diff
    } else {
        let gb = crate::groebner::groebner_basis(&two, &variety, &MonomialOrder::Grevlex)?;
        normal_form(&diff, &gb, &MonomialOrder::Grevlex)?
    };
    Ok(r.is_zero())
}

/// Witness that no `v` with `(σ - 1) v = g_σ` exists: a combination of the
/// coefficient equations that kills every unknown but not the right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NontrivialityCertificate<F: Field> {
    /// Pairs (product-ring monomial, coefficient).
    pub functional: Vec<(Monomial, F::Elem)>,
    pub rank: usize,
    pub unknowns: usize,
}

#[derive(Clone, Debug)]
pub enum CoboundaryResult<F: Field> {
    Coboundary(Polynomial<F>),
    Nontrivial(NontrivialityCertificate<F>),
}

struct CoboundarySystem<F: Field> {
    unknowns: Vec<Vec<Exp>>,
    rows: Vec<SparseRow<F::Elem>>,
    rhs: Vec<F::Elem>,
    row_monos: Vec<Monomial>,
}

fn coboundary_system<F: Field>(c: &Cocycle<F>) -> Result<CoboundarySystem<F>> {
    let a = &c.action;
    let k = a.field();
    let np = a.nparams();
    let value = a.reduce(c.value.clone())?;
    let mut classes: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut unknowns: Vec<Vec<Exp>> = Vec::new();
    for (m, _) in value.terms() {
        let e = &m.exps()[np..];
        if classes.insert(a.multidegree(e)) {
            unknowns.extend(a.monomials_like(e));
        }
    }
    let mut row_index: HashMap<Monomial, usize> = HashMap::new();
    let mut row_monos = Vec::new();
    let mut cols: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    let mut index = |m: &Monomial, row_monos: &mut Vec<Monomial>| -> usize {
        let next = row_index.len();
        *row_index.entry(m.clone()).or_insert_with(|| {
            row_monos.push(m.clone());
            next
        })
    };
    for e in &unknowns {
        let v = Polynomial::monomial(a.target(), e);
        let img = &a.act(&v)? - &a.lift(&v)?;
        let col = img
            .terms()
            .iter()
            .map(|(m, cf)| (index(m, &mut row_monos), cf.clone()))
            .collect();
        cols.push(col);
    }
    let mut rhs_terms = Vec::new();
    for (m, cf) in value.terms() {
        rhs_terms.push((index(m, &mut row_monos), cf.clone()));
    }
    let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); row_monos.len()];
    for (j, col) in cols.into_iter().enumerate() {
        for (r, cf) in col {
            rows[r].push((j, cf));
        }
    }
    let mut rhs = vec![k.zero(); row_monos.len()];
    for (r, cf) in rhs_terms {
        rhs[r] = cf;
    }
    Ok(CoboundarySystem {
        unknowns,
        rows,
        rhs,
        row_monos,
    })
}

/// Searches `v` with `(σ - 1) v = g_σ` among polynomials of the same copy
/// multidegrees as the values of `g`.
pub fn solve_coboundary<F: Field>(c: &Cocycle<F>) -> Result<CoboundaryResult<F>> {
    let a = &c.action;
    let k = a.field();
    let sys = coboundary_system(c)?;
    match linalg::solve(k, &sys.rows, &sys.rhs, sys.unknowns.len()) {
        Solution::Consistent(x) => {
            let terms = sys
                .unknowns
                .iter()
                .zip(x)
                .filter(|(_, cf)| !k.is_zero(cf))
                .map(|(e, cf)| (Monomial::new(a.target(), e), cf))
                .collect();
            let v = Polynomial::from_terms(a.target(), terms);
            let back = Cocycle::coboundary(a.clone(), &v)?;
            if a.reduce(&back.value - &c.value)?.is_zero() {
                Ok(CoboundaryResult::Coboundary(v))
            } else {
                Err(Error::Verification(
                    "coboundary solution does not reproduce the cocycle".into(),
                ))
            }
        }
        Solution::Inconsistent { functional, rank } => {
            let functional = functional
                .into_iter()
                .map(|(r, cf)| (sys.row_monos[r].clone(), cf))
                .collect();
            let cert = NontrivialityCertificate {
                functional,
                rank,
                unknowns: sys.unknowns.len(),
            };
            if !verify_nontrivial(c, &cert)? {
                return Err(Error::Verification(
                    "nontriviality certificate does not check".into(),
                ));
            }
            Ok(CoboundaryResult::Nontrivial(cert))
        }
    }
}

/// Rebuilds the coefficient equations and checks the recorded functional.
pub fn verify_nontrivial<F: Field>(
    c: &Cocycle<F>,
    cert: &NontrivialityCertificate<F>,
) -> Result<bool> {
    let sys = coboundary_system(c)?;
    let k = c.action.field();
    let index: HashMap<&Monomial, usize> = sys
        .row_monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut y = Vec::with_capacity(cert.functional.len());
    for (m, cf) in &cert.functional {
        match index.get(m) {
            Some(&i) => y.push((i, cf.clone())),
            None => {
                if !k.is_zero(cf) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(linalg::check_functional(k, &sys.rows, &sys.rhs, &y))
}

#[derive(Clone, Debug)]
pub enum Annihilation<F: Field> {
    /// `a·g_σ = (σ - 1) b`.
    Annihilates(Polynomial<F>),
    DoesNot(NontrivialityCertificate<F>),
}

pub fn check_annihilator<F: Field>(a: &Polynomial<F>, c: &Cocycle<F>) -> Result<Annihilation<F>> {
    if !c.action.is_invariant(a)? {
        return Err(Error::Invalid(
            "annihilator candidate is not invariant".into(),
        ));
    }
    match solve_coboundary(&c.times(a)?)? {
        CoboundaryResult::Coboundary(b) => Ok(Annihilation::Annihilates(b)),
        CoboundaryResult::Nontrivial(cert) => Ok(Annihilation::DoesNot(cert)),
    }
}

/// Checks `a·g_σ = (σ - 1) b` exactly.
pub fn is_annihilation_witness<F: Field>(
    a: &Polynomial<F>,
    c: &Cocycle<F>,
    b: &Polynomial<F>,
) -> Result<bool> {
    let lhs = c.times(a)?.value;
    let rhs = Cocycle::coboundary(c.action.clone(), b)?.value;
    Ok(c.action.reduce(&lhs - &rhs)?.is_zero())
}
