//! Vector invariants of `SL2` and `Ga`: bracket generators, Roberts'
//! isomorphism in both directions, the hsop of bracket sums, the depth test
//! sequence for the Frobenius-twisted case and the annihilator phsop.

use crate::actions::{vector_names, Copy, GroupAction, GroupKind};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::groebner::Ideal;
use crate::monomial::Monomial;
use crate::poly::{sum, Polynomial};
use crate::ring::{Ring, RingRef, Weight};
use crate::subalgebra::Subalgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorInvariantConfig {
    pub group: GroupKind,
    pub n_copies: usize,
    /// Frobenius twist `p` on an extra copy `<X0, Y0>`.
    pub twist: Option<u32>,
}

impl VectorInvariantConfig {
    pub fn untwisted(group: GroupKind, n_copies: usize) -> Self {
        VectorInvariantConfig {
            group,
            n_copies,
            twist: None,
        }
    }

    pub fn ring<F: Field>(&self, field: F) -> Result<RingRef<F>> {
        if self.n_copies == 0 && self.twist.is_none() {
            return Err(Error::Invalid("need at least one copy".into()));
        }
        let from = if self.twist.is_some() { 0 } else { 1 };
        Ring::new(field, &vector_names(from, self.n_copies))
    }

    pub fn action<F: Field>(&self, field: F) -> Result<GroupAction<F>> {
        let ring = self.ring(field)?;
        let mut copies = Vec::new();
        if let Some(p) = self.twist {
            copies.push(Copy {
                x: 0,
                y: 1,
                twist: p,
            });
        }
        let off = if self.twist.is_some() { 2 } else { 0 };
        copies.extend((0..self.n_copies).map(|i| Copy {
            x: off + 2 * i,
            y: off + 2 * i + 1,
            twist: 1,
        }));
        GroupAction::new(&ring, self.group, copies)
    }
}

/// `X_i Y_j - X_j Y_i` for copies `i`, `j` given by their variable pairs.
pub fn bracket<F: Field>(ring: &RingRef<F>, a: Copy, b: Copy) -> Polynomial<F> {
    let v = |i| Polynomial::var(ring, i);
    &(&v(a.x) * &v(b.y)) - &(&v(b.x) * &v(a.y))
}

/// The brackets `X_i Y_j - X_j Y_i` (`i < j`), and for `Ga` also the `X_i`.
pub fn plucker_generators<F: Field>(
    cfg: &VectorInvariantConfig,
    field: F,
) -> Result<Vec<Polynomial<F>>> {
    if cfg.twist.is_some() {
        return Err(Error::Invalid(
            "bracket generators are only known for untwisted copies".into(),
        ));
    }
    let action = cfg.action(field)?;
    let ring = action.target().clone();
    let copies = action.copies();
    let mut out = Vec::new();
    if cfg.group == GroupKind::Ga {
        out.extend(copies.iter().map(|c| Polynomial::var(&ring, c.x)));
    }
    for i in 0..copies.len() {
        for j in i + 1..copies.len() {
            out.push(bracket(&ring, copies[i], copies[j]));
        }
    }
    for f in &out {
        if !action.is_invariant(f)? {
            return Err(Error::Verification(format!(
                "generator {f} is not invariant"
            )));
        }
    }
    Ok(out)
}

/// Roberts' isomorphism `S(V)^Ga -> S(<X,Y> + V)^SL2` and back, for the copies
/// of a `Ga` action.
#[derive(Clone, Debug)]
pub struct Roberts<F: Field> {
    ga: GroupAction<F>,
    sl2: GroupAction<F>,
    x: usize,
    y: usize,
}

impl<F: Field> Roberts<F> {
    pub fn new(ga: &GroupAction<F>) -> Result<Self> {
        if ga.kind() != GroupKind::Ga {
            return Err(Error::Invalid(
                "Roberts' isomorphism starts from a Ga action".into(),
            ));
        }
        let v = ga.target();
        let xn = v.fresh_name("X");
        let yn = if xn == "X" {
            v.fresh_name("Y")
        } else {
            format!("Y{}", &xn[1..])
        };
        let one = Weight::from_integer(1);
        let big = v.extend(&[xn, yn], &[one, one])?;
        let n = v.nvars();
        let mut copies = ga.copies().to_vec();
        copies.push(Copy {
            x: n,
            y: n + 1,
            twist: 1,
        });
        let sl2 = GroupAction::new(&big, GroupKind::SL2, copies)?;
        Ok(Roberts {
            ga: ga.clone(),
            sl2,
            x: n,
            y: n + 1,
        })
    }

    pub fn ga(&self) -> &GroupAction<F> {
        &self.ga
    }

    pub fn sl2(&self) -> &GroupAction<F> {
        &self.sl2
    }

    pub fn sl2_ring(&self) -> &RingRef<F> {
        self.sl2.target()
    }

    /// `f(X, Y, ...) -> f(0, 1, ...)` without invariance checks.
    pub fn specialize(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        let k = f.field();
        let g = f.specialize(&[(self.x, k.zero()), (self.y, k.one())]);
        let map: Vec<Option<usize>> = (0..self.sl2_ring().nvars())
            .map(|i| if i < self.x { Some(i) } else { None })
            .collect();
        g.map_vars(self.ga.target(), &map)
    }

    pub fn forward(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !self.sl2.is_invariant(f)? {
            return Err(Error::Invalid("input is not SL2-invariant".into()));
        }
        let g = self.specialize(f)?;
        if !self.ga.is_invariant(&g)? {
            return Err(Error::Verification("image is not Ga-invariant".into()));
        }
        Ok(g)
    }

    /// Applies `(Y 0; -X 1/Y)` copywise and clears the powers of `Y`.
    pub fn inverse(&self, g: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !self.ga.is_invariant(g)? {
            return Err(Error::Invalid("input is not Ga-invariant".into()));
        }
        let big = self.sl2_ring();
        let xx = Polynomial::var(big, self.x);
        let yy = Polynomial::var(big, self.y);
        let mut images: Vec<Polynomial<F>> = (0..self.x).map(|i| Polynomial::var(big, i)).collect();
        let mut den = vec![0u32; self.x];
        for c in self.ga.copies() {
            let q = c.twist;
            let minus_x = xx.neg().try_pow(q)?;
            images[c.x] = &(&yy.try_pow(q)? * &Polynomial::var(big, c.x))
                + &(&minus_x * &Polynomial::var(big, c.y));
            den[c.y] = q;
        }
        let term_den =
            |m: &Monomial| -> u32 { m.support().map(|v| den[v] * m.exp(v) as u32).sum() };
        let d = g
            .terms()
            .iter()
            .map(|(m, _)| term_den(m))
            .max()
            .unwrap_or(0);
        let mut acc = Polynomial::zero(big);
        for (m, c) in g.terms() {
            let t = Polynomial::term(g.ring(), m.clone(), c.clone()).substitute(big, &images)?;
            acc = &acc + &(&t * &yy.try_pow(d - term_den(m))?);
        }
        let mut yd = vec![0; big.nvars()];
        yd[self.y] = d as crate::monomial::Exp;
        let out = acc
            .divide_by_monomial(&Monomial::new(big, &yd))
            .map_err(|_| Error::Invalid("a power of Y is left in the denominator".into()))?;
        if !self.sl2.is_invariant(&out)? {
            return Err(Error::Verification(
                "inverse image is not SL2-invariant".into(),
            ));
        }
        if &self.specialize(&out)? != g {
            return Err(Error::Verification("Roberts round trip failed".into()));
        }
        Ok(out)
    }

    /// Degree of `roberts_inverse(g)` read off a monomial of `S(V)`.
    pub fn degree_weights(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.x];
        for c in self.ga.copies() {
            w[c.x] = c.twist as i64 + 1;
            w[c.y] = 1 - c.twist as i64;
        }
        w
    }
}

/// Brackets `g_ij` of `n` copies presented by tags `G{i}_{j}`, with the
/// Plücker relations written down directly.
pub struct PluckerPresentation<F: Field> {
    pub n: usize,
    pub sub: Subalgebra<F>,
    pub pairs: Vec<(usize, usize)>,
    pub relations: Ideal<F>,
}

impl<F: Field> PluckerPresentation<F> {
    pub fn new(field: F, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("need at least two copies".into()));
        }
        let cfg = VectorInvariantConfig::untwisted(GroupKind::SL2, n);
        let ring = cfg.ring(field.clone())?;
        let copies = cfg.action(field)?.copies().to_vec();
        let mut pairs = Vec::new();
        let mut gens = Vec::new();
        let mut names = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                pairs.push((i, j));
                gens.push(bracket(&ring, copies[i - 1], copies[j - 1]));
                names.push(format!("G{i}_{j}"));
            }
        }
        let sub = Subalgebra::with_tag_names(&ring, gens, &names)?;
        let tags = sub.tag_ring().clone();
        let mut rels = Vec::new();
        let t = |a: usize, b: usize| {
            Polynomial::var(&tags, pairs.iter().position(|&p| p == (a, b)).unwrap())
        };
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        rels.push(
                            &(&(&t(i, j) * &t(k, l)) - &(&t(i, k) * &t(j, l)))
                                + &(&t(i, l) * &t(j, k)),
                        );
                    }
                }
            }
        }
        for r in &rels {
            if !sub.evaluate(r)?.is_zero() {
                return Err(Error::Verification(
                    "Plücker relation does not vanish".into(),
                ));
            }
        }
        let relations = Ideal::new(&tags, rels)?;
        Ok(PluckerPresentation {
            n,
            sub,
            pairs,
            relations,
        })
    }

    pub fn tag(&self, i: usize, j: usize) -> Polynomial<F> {
        let r = self.sub.tag_ring();
        match self.pairs.iter().position(|&p| p == (i.min(j), i.max(j))) {
            Some(pos) if i < j => Polynomial::var(r, pos),
            Some(pos) => Polynomial::var(r, pos).neg(),
            None => Polynomial::zero(r),
        }
    }

    /// `f_m = sum over i < j, i + j = m of G_ij^e(i,j)` for `m = 3..2n-1`.
    pub fn hsop(&self, exponent: &dyn Fn(usize, usize) -> u32) -> Vec<Polynomial<F>> {
        hsop_terms(self.n, |i, j| self.tag(i, j).pow(exponent(i, j)))
    }
}

fn hsop_terms<F: Field>(
    n: usize,
    term: impl Fn(usize, usize) -> Polynomial<F>,
) -> Vec<Polynomial<F>> {
    (3..2 * n)
        .map(|m| {
            let parts: Vec<_> = (1..=n)
                .filter_map(|i| {
                    let j = m.checked_sub(i)?;
                    (i < j && j <= n).then(|| term(i, j))
                })
                .collect();
            let ring = parts[0].ring().clone();
            sum(&ring, parts)
        })
        .collect()
}

/// The hsop `f_3, ..., f_{2n-1}` of bracket sums in `K[X1, Y1, ..., Xn, Yn]`.
pub fn hsop_builder<F: Field>(
    field: F,
    n: usize,
    exponent: &dyn Fn(usize, usize) -> u32,
) -> Result<Vec<Polynomial<F>>> {
    if n < 2 {
        return Err(Error::Invalid("need at least two copies".into()));
    }
    let cfg = VectorInvariantConfig::untwisted(GroupKind::SL2, n);
    let ring = cfg.ring(field)?;
    let c = |i: usize| Copy {
        x: 2 * (i - 1),
        y: 2 * (i - 1) + 1,
        twist: 1,
    };
    Ok(hsop_terms(n, |i, j| {
        bracket(&ring, c(i), c(j)).pow(exponent(i, j))
    }))
}

/// One summand of the depth test sequence for the twisted `Ga` case, with
/// copies `1..=k` untwisted, `k+1` the Roberts copy and `k+2` the twisted one.
fn twisted_term(
    ring: &RingRef<PrimeField>,
    p: u32,
    k: usize,
    i: usize,
    j: usize,
) -> Polynomial<PrimeField> {
    let v = |i: usize| Polynomial::var(ring, i);
    let (xt, yt) = (v(0), v(1));
    if j <= k {
        &(&v(2 * i) * &v(2 * j + 1)) - &(&v(2 * j) * &v(2 * i + 1))
    } else if j == k + 1 {
        v(2 * i)
    } else if i <= k {
        &(&v(2 * i).pow(p) * &yt) - &(&xt * &v(2 * i + 1).pow(p))
    } else {
        if p % 2 == 1 {
            xt.neg()
        } else {
            xt
        }
    }
}

/// The test sequence `f_3, ..., f_{2k+3}` in `K[X0~, Y0~, X1, ..., Yk]` for
/// `(<X^p, Y^p> + k <X, Y>)^Ga`. With `homogenize` the middle block is raised
/// to one degree per element.
pub fn depth_test_sequence(
    p: u32,
    k: usize,
    homogenize: bool,
) -> Result<Vec<Polynomial<PrimeField>>> {
    if k < 2 {
        return Err(Error::Invalid("the test sequence needs k >= 2".into()));
    }
    let action = GroupAction::builtin(GroupKind::Ga, p, k)?;
    let ring = action.target().clone();
    let n = k + 2;
    let middle = (n + 1)..=(2 * n - 3);
    let mut out = Vec::new();
    for m in 3..2 * n {
        let mut parts = Vec::new();
        for i in 1..=n {
            let Some(j) = m.checked_sub(i) else { continue };
            if i >= j || j > n {
                continue;
            }
            let mut t = twisted_term(&ring, p, k, i, j);
            if homogenize && middle.contains(&m) {
                t = t.pow(if j == n { 2 } else { p + 1 });
            }
            parts.push(t);
        }
        let f = sum(&ring, parts);
        if !action.is_invariant(&f)? {
            return Err(Error::Verification(format!(
                "test element f{m} is not invariant"
            )));
        }
        out.push(f);
    }
    Ok(out)
}

/// Indices `m` of the test sequence elements expected to form a regular
/// sequence: `f_3, f_4, f_{k+3}, ..., f_{2k+3}`.
pub fn expected_regular_indices(k: usize) -> Vec<usize> {
    let mut v = vec![3, 4];
    v.extend((k + 3).max(5)..=2 * k + 3);
    v
}

/// `X1, X2^(p-1), X1 Y3 - X3 Y1, (Xi Y(i+1) - X(i+1) Yi)^(p-1)` for `i = 3..k-1`
/// in the builtin twisted `Ga` ring.
pub fn annihilator_phsop(p: u32, k: usize) -> Result<Vec<Polynomial<PrimeField>>> {
    if k < 2 {
        return Err(Error::Invalid("annihilator phsop needs k >= 2".into()));
    }
    let action = GroupAction::builtin(GroupKind::Ga, p, k)?;
    let ring = action.target().clone();
    let c = |i: usize| Copy {
        x: 2 * i,
        y: 2 * i + 1,
        twist: 1,
    };
    let mut out = vec![
        Polynomial::var(&ring, 2),
        Polynomial::var(&ring, 4).pow(p - 1),
    ];
    if k >= 3 {
        out.push(bracket(&ring, c(1), c(3)));
    }
    for i in 3..k {
        out.push(bracket(&ring, c(i), c(i + 1)).pow(p - 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::text::parse_poly;

    #[test]
    fn bracket_generators() {
        let g = plucker_generators(
            &VectorInvariantConfig::untwisted(GroupKind::SL2, 2),
            Rationals,
        )
        .unwrap();
        assert_eq!(g, vec![parse_poly(g[0].ring(), "X1*Y2 - X2*Y1").unwrap()]);
        let g = plucker_generators(
            &VectorInvariantConfig::untwisted(GroupKind::Ga, 1),
            Rationals,
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].to_string(), "X1");
        assert!(plucker_generators(
            &VectorInvariantConfig::untwisted(GroupKind::SL2, 1),
            Rationals
        )
        .unwrap()
        .is_empty());
    }

    #[test]
    fn roberts_examples() {
        let ga = VectorInvariantConfig::untwisted(GroupKind::Ga, 2)
            .action(Rationals)
            .unwrap();
        let r = Roberts::new(&ga).unwrap();
        let big = r.sl2_ring();
        let x1 = parse_poly(ga.target(), "X1").unwrap();
        let inv = r.inverse(&x1).unwrap();
        assert_eq!(inv, parse_poly(big, "Y*X1 - X*Y1").unwrap());
        assert_eq!(r.forward(&inv).unwrap(), x1);
        let g12 = parse_poly(ga.target(), "X1*Y2 - X2*Y1").unwrap();
        assert_eq!(
            r.inverse(&g12).unwrap(),
            parse_poly(big, "X1*Y2 - X2*Y1").unwrap()
        );
        assert!(r.inverse(&parse_poly(ga.target(), "Y1").unwrap()).is_err());
        let one = Polynomial::one(ga.target());
        assert_eq!(r.inverse(&one).unwrap(), Polynomial::one(big));
    }

    #[test]
    fn roberts_twisted() {
        let ga = GroupAction::builtin(GroupKind::Ga, 3, 2).unwrap();
        let r = Roberts::new(&ga).unwrap();
        let f = parse_poly(ga.target(), "X0*Y1^3 - X1^3*Y0").unwrap();
        let g = r.inverse(&f).unwrap();
        assert_eq!(r.forward(&g).unwrap(), f);
        assert_eq!(r.degree_weights()[..4], [4, -2, 2, 0]);
    }

    #[test]
    fn hsop_shapes() {
        let h = hsop_builder(Rationals, 2, &|_, _| 1).unwrap();
        assert_eq!(h.len(), 1);
        let h = hsop_builder(Rationals, 3, &|_, _| 1).unwrap();
        assert_eq!(h.len(), 3);
        let ring = h[0].ring();
        assert_eq!(h[2], parse_poly(ring, "X2*Y3 - X3*Y2").unwrap());
        let pp = PluckerPresentation::new(Rationals, 4).unwrap();
        let f = pp.hsop(&|_, _| 1);
        assert_eq!(f.len(), 5);
        assert_eq!(f[2].len(), 2);
        assert_eq!(pp.relations.generators().len(), 1);
    }

    #[test]
    fn annihilators_listed() {
        assert_eq!(annihilator_phsop(3, 2).unwrap().len(), 2);
        let a = annihilator_phsop(2, 4).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a[2], parse_poly(a[0].ring(), "X1*Y3 + X3*Y1").unwrap());
    }

    #[test]
    fn test_sequence_lengths() {
        for (p, k) in [(2, 2), (2, 3), (3, 3)] {
            for h in [false, true] {
                let s = depth_test_sequence(p, k, h).unwrap();
                assert_eq!(s.len(), 2 * k + 1);
            }
        }
        assert_eq!(expected_regular_indices(3), vec![3, 4, 6, 7, 8, 9]);
        assert_eq!(expected_regular_indices(2), vec![3, 4, 5, 6, 7]);
    }
}
