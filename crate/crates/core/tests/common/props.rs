//! Randomized checks shared by the `properties` test target and the acceptance run.

use std::cmp::Ordering;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use invdepth::actions::{
    check_annihilator, is_annihilation_witness, natural_copies, solve_coboundary,
    verify_nontrivial, Annihilation, CoboundaryResult, Cocycle, GroupAction, GroupKind,
};
use invdepth::depth_lab::{cmdef_pipeline, scan_reg, verify, PipelineOptions, PresentedRing};
use invdepth::frobenius::{intersect_xp_y, FrobeniusProblem};
use invdepth::groebner::{
    cache, eliminate, groebner_basis, intersect, is_groebner_basis, module_groebner,
    module_normal_form, monomial_dimension, normal_form, quotient, spoly, syzygies,
    FreeModuleElement, Ideal, ModuleOrder,
};
use invdepth::invariants_sl2::{
    annihilator_phsop, bracket, hsop_builder, plucker_generators, PluckerPresentation, Roberts,
    VectorInvariantConfig,
};
use invdepth::subalgebra::{find_minimal_relation, Subalgebra};
use invdepth::text::{parse_header, parse_poly, ring_from_header};
use invdepth::{ops, Field, MonomialOrder, Polynomial, PrimeField, Rationals, Ring, RingRef};

pub const CASES: u32 = 256;

type Check = fn(&mut TestRunner) -> Result<(), String>;

pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("ring_axioms", ring_axioms),
        ("order_axioms", order_axioms),
        ("substitution_and_derivative", substitution_and_derivative),
        ("spolys_reduce_to_zero", spolys_reduce_to_zero),
        (
            "normal_form_ignores_reducer_order",
            normal_form_ignores_reducer_order,
        ),
        ("eliminate_intersect_quotient", eliminate_intersect_quotient),
        ("dimension_order_independent", dimension_order_independent),
        ("syzygies_annihilate", syzygies_annihilate),
        ("relations_vanish", relations_vanish),
        ("membership_witnesses", membership_witnesses),
        ("module_intersection_in_span", module_intersection_in_span),
        ("minimal_relation_degree", minimal_relation_degree),
        ("actions_compose", actions_compose),
        ("invariants_closed", invariants_closed),
        ("coboundary_round_trip", coboundary_round_trip),
        ("annihilator_closed_forms", annihilator_closed_forms),
        ("roberts_round_trip", roberts_round_trip),
        ("emitted_elements_invariant", emitted_elements_invariant),
        ("powers_keep_hsop", powers_keep_hsop),
        ("kernel_is_frobenius_closed", kernel_is_frobenius_closed),
        ("scan_monotone", scan_monotone),
        (
            "certificates_replay_and_reject_tampering",
            certificates_replay_and_reject_tampering,
        ),
        ("deterministic_output", deterministic_output),
    ]
}

pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

pub fn run(name: &str) -> Result<(), String> {
    cache::set_enabled(false);
    let (_, check) = all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| format!("no property {name}"))?;
    check(&mut runner())
}

trait OrFail<T> {
    fn or_fail(self) -> Result<T, TestCaseError>;
}

impl<T, E: std::fmt::Display> OrFail<T> for Result<T, E> {
    fn or_fail(self) -> Result<T, TestCaseError> {
        self.map_err(|e| TestCaseError::fail(e.to_string()))
    }
}

fn f7() -> PrimeField {
    PrimeField::new(7).unwrap()
}

fn xyz<F: Field>(field: F) -> RingRef<F> {
    Ring::new(field, &["x", "y", "z"]).unwrap()
}

type Terms = Vec<(Vec<u16>, i64)>;

fn terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), -3i64..=3),
        0..=max_terms,
    )
}

fn nonzero_terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), 1i64..=3),
        1..=max_terms,
    )
}

fn poly<F: Field>(ring: &RingRef<F>, t: &Terms) -> Polynomial<F> {
    let mut out = Polynomial::zero(ring);
    for (e, c) in t {
        out = &out + &(&Polynomial::from_i64(ring, *c) * &Polynomial::monomial(ring, e));
    }
    out
}

/// Random polynomial in the given generators: a sum of products.
fn combination<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    picks: &[(Vec<usize>, i64)],
) -> Polynomial<F> {
    let mut out = Polynomial::zero(ring);
    for (idx, c) in picks {
        let mut m = Polynomial::from_i64(ring, *c);
        for &i in idx {
            m = &m * &gens[i % gens.len()];
        }
        out = &out + &m;
    }
    out
}

fn picks(max_len: usize, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0usize..64, 0..=max_len), 1i64..=4),
        1..=max_terms,
    )
}

fn ring_axioms(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let qring = xyz(Rationals);
    let s = (terms(3, 3, 4), terms(3, 3, 4), terms(3, 3, 4));
    r.run(&s, |(a, b, c)| {
        for check in [
            check_axioms(&ring, &a, &b, &c),
            check_axioms(&qring, &a, &b, &c),
        ] {
            check?;
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn check_axioms<F: Field>(
    ring: &RingRef<F>,
    a: &Terms,
    b: &Terms,
    c: &Terms,
) -> Result<(), TestCaseError> {
    let (a, b, c) = (poly(ring, a), poly(ring, b), poly(ring, c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert!((&(&a - &b) + &b) == a);
    Ok(())
}

fn order_axioms(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let e = || prop::collection::vec(0u16..5, 3);
    let s = (e(), e(), e(), e());
    r.run(&s, |(a, b, c, n)| {
        let one = [0u16; 3];
        let shift = |v: &[u16]| v.iter().zip(&n).map(|(x, y)| x + y).collect::<Vec<u16>>();
        for o in [
            MonomialOrder::Lex,
            MonomialOrder::GradedLex,
            MonomialOrder::Grevlex,
        ] {
            let cmp = |x: &[u16], y: &[u16]| o.compare(&ring, x, y);
            prop_assert_eq!(cmp(&a, &b), cmp(&b, &a).reverse());
            if cmp(&a, &b) == Ordering::Less && cmp(&b, &c) == Ordering::Less {
                prop_assert_eq!(cmp(&a, &c), Ordering::Less);
            }
            prop_assert_eq!(cmp(&a, &b), cmp(&shift(&a), &shift(&b)));
            prop_assert_ne!(cmp(&one, &a), Ordering::Greater);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn substitution_and_derivative(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let vars: Vec<_> = (0..3).map(|i| Polynomial::var(&ring, i)).collect();
    let s = (terms(3, 4, 5), terms(3, 4, 5), 0usize..3, -3i64..=3);
    r.run(&s, |(f, g, v, c)| {
        let (f, g) = (poly(&ring, &f), poly(&ring, &g));
        prop_assert_eq!(f.substitute(&ring, &vars).or_fail()?, f.clone());
        let k = Polynomial::from_i64(&ring, c);
        let lin = &(&k * &f) + &g;
        prop_assert_eq!(
            lin.derivative(v),
            &(&k * &f.derivative(v)) + &g.derivative(v)
        );
        prop_assert_eq!(
            (&f * &g).derivative(v),
            &(&f.derivative(v) * &g) + &(&f * &g.derivative(v))
        );
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn ideal_gens() -> impl Strategy<Value = Vec<Terms>> {
    prop::collection::vec(nonzero_terms(3, 2, 3), 1..=3)
}

fn spolys_reduce_to_zero(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let orders = [
        MonomialOrder::Grevlex,
        MonomialOrder::Lex,
        MonomialOrder::GradedLex,
    ];
    r.run(&(ideal_gens(), 0usize..3), |(gens, o)| {
        let gens: Vec<_> = gens.iter().map(|t| poly(&ring, t)).collect();
        let order = &orders[o];
        let g = groebner_basis(&ring, &gens, order).or_fail()?;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                prop_assert!(normal_form(&spoly(&g[i], &g[j], order), &g, order)
                    .or_fail()?
                    .is_zero());
            }
        }
        for f in &gens {
            prop_assert!(normal_form(f, &g, order).or_fail()?.is_zero());
        }
        prop_assert!(is_groebner_basis(&g, order).or_fail()?);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn normal_form_ignores_reducer_order(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let s = (ideal_gens(), terms(3, 4, 6), any::<u64>());
    r.run(&s, |(gens, f, seed)| {
        let gens: Vec<_> = gens.iter().map(|t| poly(&ring, t)).collect();
        let f = poly(&ring, &f);
        let order = MonomialOrder::Grevlex;
        let g = groebner_basis(&ring, &gens, &order).or_fail()?;
        // The basis is reduced, so adding redundant multiples gives real reducer choices.
        let mut by = g.clone();
        for (i, h) in g.iter().enumerate() {
            by.push(&Polynomial::var(&ring, (seed as usize + i) % 3) * h);
        }
        let base = normal_form(&f, &by, &order).or_fail()?;
        let mut perm = by.clone();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(normal_form(&f, &perm, &order).or_fail()?, base);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn eliminate_intersect_quotient(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let s = (
        ideal_gens(),
        ideal_gens(),
        nonzero_terms(3, 2, 3),
        nonzero_terms(2, 2, 3),
        nonzero_terms(3, 2, 3),
    );
    r.run(&s, |(a, b, f, g, h)| {
        let a = Ideal::new(&ring, a.iter().map(|t| poly(&ring, t)).collect()).or_fail()?;
        let b = Ideal::new(&ring, b.iter().map(|t| poly(&ring, t)).collect()).or_fail()?;
        let ab = intersect(&a, &b).or_fail()?;
        for q in ab.generators() {
            prop_assert!(a.contains(q).or_fail()? && b.contains(q).or_fail()?);
        }
        for x in a.generators() {
            for y in b.generators() {
                prop_assert!(ab.contains(&(x * y)).or_fail()?);
            }
        }
        let f = poly(&ring, &f);
        let qt = quotient(&a, &f).or_fail()?;
        for q in qt.generators() {
            prop_assert!(a.contains(&(q * &f)).or_fail()?);
        }
        prop_assert!(qt.contains_ideal(&a).or_fail()?);
        // (x - g(y, z), h) eliminates to an ideal containing h(g, y, z).
        let g: Terms = g
            .into_iter()
            .map(|(e, c)| (vec![0, e[0], e[1]], c))
            .collect();
        let g = poly(&ring, &g);
        let h = poly(&ring, &h);
        let i = Ideal::new(&ring, vec![&Polynomial::var(&ring, 0) - &g, h.clone()]).or_fail()?;
        let e = eliminate(&i, &[0]).or_fail()?;
        let e_here = Ideal::new(
            &ring,
            e.generators()
                .iter()
                .map(|q| q.embed(&ring))
                .collect::<Result<_, _>>()
                .or_fail()?,
        )
        .or_fail()?;
        for q in e_here.generators() {
            prop_assert!(!q.involves(0));
            prop_assert!(i.contains(q).or_fail()?);
        }
        let images = [
            g.clone(),
            Polynomial::var(&ring, 1),
            Polynomial::var(&ring, 2),
        ];
        let hg = h.substitute(&ring, &images).or_fail()?;
        prop_assert!(e_here.contains(&hg).or_fail()?);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn dimension_order_independent(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    r.run(&ideal_gens(), |gens| {
        let i = Ideal::new(&ring, gens.iter().map(|t| poly(&ring, t)).collect()).or_fail()?;
        let lex = MonomialOrder::Lex;
        let leads: Vec<Vec<u16>> = i
            .groebner(&lex)
            .or_fail()?
            .iter()
            .map(|g| g.leading_term(&lex).unwrap().0.exps().to_vec())
            .collect();
        prop_assert_eq!(monomial_dimension(3, &leads), i.dimension().or_fail()?);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn syzygies_annihilate(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let elem = prop::collection::vec(terms(3, 2, 2), 2);
    r.run(&prop::collection::vec(elem, 1..=3), |elems| {
        let elems: Vec<_> = elems
            .iter()
            .map(|c| FreeModuleElement::new(&ring, c.iter().map(|t| poly(&ring, t)).collect()))
            .collect::<Result<_, _>>()
            .or_fail()?;
        for s in syzygies(&ring, &elems).or_fail()? {
            let total = FreeModuleElement::combine(&ring, 2, s.components(), &elems);
            prop_assert!(total.is_zero());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn small_algebra() -> impl Strategy<Value = Vec<Terms>> {
    prop::collection::vec(nonzero_terms(2, 2, 2), 1..=3)
}

fn relations_vanish(r: &mut TestRunner) -> Result<(), String> {
    let ring = Ring::new(f7(), &["x", "y"]).unwrap();
    r.run(&small_algebra(), |gens| {
        let gens: Vec<_> = gens.iter().map(|t| poly(&ring, t)).collect();
        prop_assume!(gens.iter().all(|g| !g.is_constant()));
        let sub = Subalgebra::new(&ring, gens).or_fail()?;
        for rel in sub.relation_ideal().or_fail()?.generators() {
            prop_assert!(sub.evaluate(rel).or_fail()?.is_zero());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn membership_witnesses(r: &mut TestRunner) -> Result<(), String> {
    let ring = Ring::new(f7(), &["x", "y"]).unwrap();
    let s = (small_algebra(), picks(3, 3), terms(2, 3, 3));
    r.run(&s, |(gens, w, h)| {
        let gens: Vec<_> = gens.iter().map(|t| poly(&ring, t)).collect();
        prop_assume!(gens.iter().all(|g| !g.is_constant()));
        let sub = Subalgebra::new(&ring, gens.clone()).or_fail()?;
        let inside = combination(&ring, &gens, &w);
        let found = sub.member(&inside).or_fail()?;
        prop_assert!(found.is_some());
        prop_assert_eq!(sub.evaluate(&found.unwrap()).or_fail()?, inside.clone());
        let h = poly(&ring, &h);
        prop_assert_eq!(
            sub.contains(&h).or_fail()?,
            sub.contains(&(&h + &inside)).or_fail()?
        );
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn module_intersection_in_span(r: &mut TestRunner) -> Result<(), String> {
    let ring = Ring::new(f7(), &["x", "y"]).unwrap();
    let alg = vec![
        parse_poly(&ring, "x^2").unwrap(),
        parse_poly(&ring, "y").unwrap(),
    ];
    let sub = Subalgebra::new(&ring, alg).unwrap();
    let elem = prop::collection::vec(terms(2, 2, 2), 2);
    r.run(&prop::collection::vec(elem, 1..=2), |gens| {
        let gens: Vec<_> = gens
            .iter()
            .map(|c| FreeModuleElement::new(&ring, c.iter().map(|t| poly(&ring, t)).collect()))
            .collect::<Result<_, _>>()
            .or_fail()?;
        let order = ModuleOrder::top(MonomialOrder::Grevlex);
        let gb = module_groebner(&ring, &gens, &order).or_fail()?;
        for b in sub.module_intersect(&gens, None).or_fail()? {
            let comps = b
                .iter()
                .map(|c| sub.evaluate(c))
                .collect::<Result<Vec<_>, _>>()
                .or_fail()?;
            for c in &comps {
                prop_assert!(sub.contains(c).or_fail()?);
            }
            let v = FreeModuleElement::new(&ring, comps).or_fail()?;
            prop_assert!(module_normal_form(&v, &gb, &order).or_fail()?.is_zero());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn minimal_relation_degree(r: &mut TestRunner) -> Result<(), String> {
    let ring = Ring::new(f7(), &["x", "y"]).unwrap();
    let form =
        |d: u16| prop::collection::vec(1i64..=3, (d + 1) as usize).prop_map(move |cs| (d, cs));
    let gens = prop::collection::vec((1u16..=2).prop_flat_map(form), 3);
    r.run(&gens, |gens| {
        let gens: Vec<_> = gens
            .iter()
            .map(|(d, cs)| {
                let t: Terms = cs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (vec![i as u16, d - i as u16], c))
                    .collect();
                poly(&ring, &t)
            })
            .collect();
        let sub = Subalgebra::new(&ring, gens).or_fail()?;
        let rel = sub.relation_ideal().or_fail()?;
        let min = rel
            .generators()
            .iter()
            .filter_map(|g| g.scaled_degree())
            .min();
        let found = find_minimal_relation(&sub, 12).or_fail()?;
        prop_assert_eq!(found.as_ref().and_then(|f| f.scaled_degree()), min);
        if let Some(f) = found {
            prop_assert!(sub.evaluate(&f).or_fail()?.is_zero());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn actions_compose(r: &mut TestRunner) -> Result<(), String> {
    let s = (
        prop::bool::ANY,
        1usize..=3,
        prop::sample::select(vec![2u32, 3, 5]),
        prop::bool::ANY,
    );
    r.run(&s, |(ga, n, p, twisted)| {
        let group = if ga { GroupKind::Ga } else { GroupKind::SL2 };
        let cfg = VectorInvariantConfig {
            group,
            n_copies: n,
            twist: twisted.then_some(p),
        };
        cfg.action(PrimeField::new(p).unwrap()).or_fail()?;
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn invariants_closed(r: &mut TestRunner) -> Result<(), String> {
    let s = (prop::bool::ANY, 2usize..=3, picks(2, 2), picks(2, 2));
    r.run(&s, |(ga, n, a, b)| {
        let group = if ga { GroupKind::Ga } else { GroupKind::SL2 };
        let cfg = VectorInvariantConfig::untwisted(group, n);
        let action = cfg.action(f7()).or_fail()?;
        let gens = plucker_generators(&cfg, f7()).or_fail()?;
        let ring = action.target();
        let (f, h) = (combination(ring, &gens, &a), combination(ring, &gens, &b));
        prop_assert!(action.is_invariant(&f).or_fail()? && action.is_invariant(&h).or_fail()?);
        prop_assert!(action.is_invariant(&(&f * &h)).or_fail()?);
        prop_assert!(action.is_invariant(&(&f + &h)).or_fail()?);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn coboundary_round_trip(r: &mut TestRunner) -> Result<(), String> {
    let s = (
        prop::sample::select(vec![2u32, 3]),
        1usize..=2,
        terms(6, 2, 3),
        1u32..5,
    );
    r.run(&s, |(p, k, v, c)| {
        let action = GroupAction::builtin(GroupKind::Ga, p, k).or_fail()?;
        let ring = action.target().clone();
        let nv = ring.nvars();
        let v: Terms = v.into_iter().map(|(e, c)| (e[..nv].to_vec(), c)).collect();
        let v = poly(&ring, &v);
        let c0 = Cocycle::coboundary(action.clone(), &v).or_fail()?;
        let one = Polynomial::one(&ring);
        match solve_coboundary(&c0).or_fail()? {
            CoboundaryResult::Coboundary(w) => {
                prop_assert!(is_annihilation_witness(&one, &c0, &w).or_fail()?)
            }
            CoboundaryResult::Nontrivial(_) => {
                prop_assert!(false, "coboundary of {} reported nontrivial", v)
            }
        }
        let scalar = Polynomial::from_i64(&ring, (c % p).max(1) as i64);
        let g = Cocycle::builtin(p, k).or_fail()?.times(&scalar).or_fail()?;
        match solve_coboundary(&g).or_fail()? {
            CoboundaryResult::Nontrivial(cert) => {
                prop_assert!(verify_nontrivial(&g, &cert).or_fail()?)
            }
            CoboundaryResult::Coboundary(_) => {
                prop_assert!(false, "builtin cocycle reported trivial")
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn annihilator_closed_forms(r: &mut TestRunner) -> Result<(), String> {
    let s = (
        prop::sample::select(vec![2u32, 3, 5]),
        2usize..=4,
        0usize..3,
        0usize..16,
        0usize..16,
    );
    r.run(&s, |(p, k, kind, i, j)| {
        let c = Cocycle::builtin(p, k).or_fail()?;
        let ring = c.action.target().clone();
        let v = |i: usize| Polynomial::var(&ring, i);
        let i = 1 + i % k;
        let j = 1 + j % k;
        let a = match kind {
            0 if i == 1 => v(2),
            0 => v(2 * i).pow(p - 1),
            1 => {
                let i = i.max(2);
                let a = &(&v(2) * &v(2 * i + 1)) - &(&v(2 * i) * &v(3));
                let b = &(&(&v(3).pow(p - 1) * &v(2 * i + 1)) * &v(0))
                    - &(&(&v(2).pow(p - 1) * &v(2 * i)) * &v(1));
                prop_assert!(is_annihilation_witness(&a, &c, &b).or_fail()?);
                a
            }
            _ => {
                prop_assume!(i != j);
                (&(&v(2 * i) * &v(2 * j + 1)) - &(&v(2 * j) * &v(2 * i + 1))).pow(p - 1)
            }
        };
        match check_annihilator(&a, &c).or_fail()? {
            Annihilation::Annihilates(b) => {
                prop_assert!(is_annihilation_witness(&a, &c, &b).or_fail()?)
            }
            Annihilation::DoesNot(_) => prop_assert!(false, "{} does not annihilate", a),
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn roberts_round_trip(r: &mut TestRunner) -> Result<(), String> {
    let s = (1usize..=3, picks(3, 3), picks(3, 3));
    r.run(&s, |(n, a, b)| {
        let cfg = VectorInvariantConfig::untwisted(GroupKind::Ga, n);
        let ga = cfg.action(Rationals).or_fail()?;
        let rb = Roberts::new(&ga).or_fail()?;
        let gens = plucker_generators(&cfg, Rationals).or_fail()?;
        let f = combination(ga.target(), &gens, &a);
        prop_assert_eq!(rb.forward(&rb.inverse(&f).or_fail()?).or_fail()?, f);
        let sring = rb.sl2_ring();
        let copies = rb.sl2().copies();
        let mut brackets = Vec::new();
        for i in 0..copies.len() {
            for j in i + 1..copies.len() {
                brackets.push(bracket(sring, copies[i], copies[j]));
            }
        }
        let g = combination(sring, &brackets, &b);
        prop_assert_eq!(rb.inverse(&rb.forward(&g).or_fail()?).or_fail()?, g);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn emitted_elements_invariant(r: &mut TestRunner) -> Result<(), String> {
    let s = (
        2usize..=4,
        1u32..=3,
        prop::sample::select(vec![2u32, 3, 5]),
        2usize..=4,
    );
    r.run(&s, |(n, e, p, k)| {
        let h = hsop_builder(f7(), n, &|i, j| if (i + j) % 2 == 0 { e } else { 1 }).or_fail()?;
        prop_assert_eq!(h.len(), 2 * n - 3);
        let sl2 = GroupAction::new(h[0].ring(), GroupKind::SL2, natural_copies(n)).or_fail()?;
        for f in &h {
            prop_assert!(sl2.is_invariant(f).or_fail()?);
        }
        let ga = GroupAction::builtin(GroupKind::Ga, p, k).or_fail()?;
        let anns = annihilator_phsop(p, k).or_fail()?;
        prop_assert_eq!(anns.len(), k);
        for a in &anns {
            prop_assert!(ga.is_invariant(a).or_fail()?);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn powers_keep_hsop(r: &mut TestRunner) -> Result<(), String> {
    let pp = PluckerPresentation::new(Rationals, 3).unwrap();
    let base = pp.hsop(&|_, _| 1);
    r.run(&prop::collection::vec(1u32..=3, base.len()), |exps| {
        let powered: Vec<_> = base.iter().zip(&exps).map(|(f, &e)| f.pow(e)).collect();
        prop_assert_eq!(
            pp.relations
                .with_generators(&powered)
                .or_fail()?
                .dimension()
                .or_fail()?,
            0
        );
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn kernel_is_frobenius_closed(r: &mut TestRunner) -> Result<(), String> {
    let s = (
        prop::sample::select(vec![2u32, 3]),
        1u16..=2,
        1i64..=4,
        prop::collection::vec(1i64..=4, 2..=3),
    );
    r.run(&s, |(p, a, c, g)| {
        let k = PrimeField::new(p).unwrap();
        let ring = xyz(k);
        // f = x*y^a + c*z^(a+1) involves x; g is a binary form in y, z.
        let f = poly(&ring, &vec![(vec![1, a, 0], 1), (vec![0, 0, a + 1], c)]);
        let d = (g.len() - 1) as u16;
        let gt: Terms = g
            .iter()
            .enumerate()
            .map(|(i, &c)| (vec![0, i as u16, d - i as u16], c))
            .collect();
        let g = poly(&ring, &gt);
        prop_assume!(!g.is_zero() && !f.is_zero());
        let prob = FrobeniusProblem::new(&ring, vec![0], vec![f.clone()], vec![g.clone()], &ring)
            .or_fail()?;
        let (out, _, _) = intersect_xp_y(&prob).or_fail()?;
        let b = Subalgebra::new(&ring, vec![f, g]).or_fail()?;
        for h in &out {
            prop_assert!(h.derivative(0).is_zero(), "{} has a nonzero x-partial", h);
            prop_assert!(b.contains(h).or_fail()?);
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn scan_monotone(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let rel = prop::collection::vec(prop::collection::vec(0u16..=2, 3), 1..=2);
    let form = prop::collection::vec(prop::collection::vec(0i64..=3, 3), 2..=4);
    r.run(&(rel, form, any::<u8>()), |(rel, seq, mask)| {
        let rel: Vec<_> = rel
            .iter()
            .filter(|e| e.iter().sum::<u16>() > 0)
            .map(|e| Polynomial::monomial(&ring, e))
            .collect();
        prop_assume!(!rel.is_empty());
        let pr = PresentedRing::quotient(Ideal::new(&ring, rel).or_fail()?);
        let seq: Vec<_> = seq
            .iter()
            .map(|cs| {
                poly(
                    &ring,
                    &cs.iter().enumerate().map(|(i, &c)| (unit(i), c)).collect(),
                )
            })
            .collect();
        let first = scan_reg(&pr, &seq).or_fail()?;
        let chosen: Vec<_> = first
            .sequence
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 8) & 1 == 1)
            .map(|(_, g)| g.clone())
            .collect();
        let mut longer = chosen;
        longer.extend(seq.iter().cloned());
        let second = scan_reg(&pr, &longer).or_fail()?;
        prop_assert!(second.accepted.len() >= first.accepted.len());
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn unit(i: usize) -> Vec<u16> {
    let mut e = vec![0; 3];
    e[i] = 1;
    e
}

const WITNESS_KEYS: [&str; 4] = ["image ", "relation ", "regular ", "annihilator "];

/// Recomputes every hash so that only the semantic checks can reject.
fn rehash(body_lines: &[String]) -> String {
    let mut blocks: [(&str, String); 4] = [
        ("cocycle", String::new()),
        ("annihilators", String::new()),
        ("phsop", String::new()),
        ("coprime", String::new()),
    ];
    for l in body_lines {
        let slot = if l.starts_with("cocycle ") || l.starts_with("functional ") {
            0
        } else if l.starts_with("annihilator ") {
            1
        } else if l.starts_with("phsop ") {
            2
        } else if l.starts_with("coprime ") {
            3
        } else {
            continue;
        };
        blocks[slot].1.push_str(l);
        blocks[slot].1.push('\n');
    }
    let mut s = String::new();
    for l in body_lines {
        if let Some(rest) = l.strip_prefix("premise ") {
            let name = rest.split(' ').next().unwrap();
            let b = &blocks.iter().find(|(n, _)| *n == name).unwrap().1;
            s.push_str(&format!("premise {name} {}\n", cache::digest(b)));
        } else {
            s.push_str(l);
            s.push('\n');
        }
    }
    let d = cache::digest(&s);
    s.push_str(&format!("sha256 {d}\n"));
    s
}

/// True when the tampered line still denotes the same polynomials.
fn same_meaning(cert: &[String], old: &str, new: &str) -> bool {
    let header = |key: &str| {
        cert.iter()
            .find_map(|l| l.strip_prefix(key))
            .map(|h| h.to_string())
    };
    let ring = |key: &str| -> Option<RingRef<PrimeField>> {
        ring_from_header(&parse_header(&header(key)?).ok()?).ok()
    };
    let (Some(source), tags) = (ring("source "), ring("tags ")) else {
        return false;
    };
    let parse_with = |ring: &RingRef<PrimeField>, s: &str| parse_poly(ring, s).ok();
    let split = |l: &str| -> Option<(String, Vec<String>)> {
        let key = WITNESS_KEYS.iter().find(|k| l.starts_with(*k))?;
        let rest = &l[key.len()..];
        let parts: Vec<String> = match *key {
            "annihilator " => rest.split(" ; ").map(str::to_string).collect(),
            "image " | "regular " | "functional " => vec![
                rest.split_once(' ')?.0.to_string(),
                rest.split_once(' ')?.1.to_string(),
            ],
            _ => vec![rest.to_string()],
        };
        Some((key.to_string(), parts))
    };
    let (Some((k1, a)), Some((k2, b))) = (split(old), split(new)) else {
        return false;
    };
    if k1 != k2 || a.len() != b.len() {
        return false;
    }
    let ring_for = |key: &str| match key {
        "relation " | "regular " => tags.clone(),
        _ => Some(source.clone()),
    };
    let Some(rg) = ring_for(&k1) else {
        return false;
    };
    a.iter().zip(&b).enumerate().all(|(i, (x, y))| {
        let labelled = matches!(k1.as_str(), "image " | "regular " | "functional ") && i == 0;
        if labelled || k1 == "functional " {
            x == y
        } else {
            match (parse_with(&rg, x), parse_with(&rg, y)) {
                (Some(p), Some(q)) => p == q,
                _ => false,
            }
        }
    })
}

fn certificates_replay_and_reject_tampering(r: &mut TestRunner) -> Result<(), String> {
    let mut certs = Vec::new();
    for (p, k) in [(2, 2), (3, 2), (5, 2)] {
        let c = cmdef_pipeline(p, k, GroupKind::Ga, PipelineOptions::default())
            .map_err(|e| e.to_string())?;
        if c.lower_bound_depth() > c.upper_bound_depth() {
            return Err(format!("({p},{k}) lower bound above upper bound"));
        }
        let text = c.render().map_err(|e| e.to_string())?;
        verify(&text).map_err(|e| e.to_string())?;
        certs.push(text);
    }
    let alphabet: Vec<u8> = b"0123456789XYT+-*^ ".to_vec();
    let s = (
        0usize..certs.len(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        prop::sample::select(alphabet),
    );
    r.run(&s, |(ci, li, bi, byte)| {
        let lines: Vec<String> = certs[ci].lines().map(str::to_string).collect();
        let body = &lines[..lines.len() - 1];
        let witness: Vec<usize> = (0..body.len())
            .filter(|&i| WITNESS_KEYS.iter().any(|k| body[i].starts_with(k)))
            .collect();
        let at = witness[li.index(witness.len())];
        let key_len = WITNESS_KEYS
            .iter()
            .find(|k| body[at].starts_with(*k))
            .unwrap()
            .len();
        let mut bytes = body[at].clone().into_bytes();
        let pos = key_len + bi.index(bytes.len() - key_len);
        prop_assume!(bytes[pos] != byte);
        bytes[pos] = byte;
        let new_line = String::from_utf8(bytes).unwrap();
        prop_assume!(!same_meaning(body, &body[at], &new_line));
        let mut tampered = body.to_vec();
        tampered[at] = new_line;
        let text = rehash(&tampered);
        prop_assert!(
            verify(&text).is_err(),
            "tampered line {:?} accepted",
            tampered[at]
        );
        prop_assert!(verify(&rehash(body)).is_ok());
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn deterministic_output(r: &mut TestRunner) -> Result<(), String> {
    let ring = xyz(f7());
    let orders = ["grevlex", "lex", "glex"];
    r.run(&(ideal_gens(), 0usize..3), |(gens, o)| {
        prop_assume!(gens
            .iter()
            .all(|g| g.iter().any(|(e, _)| e.iter().any(|&x| x > 0))));
        let mut text = format!("{}\n", ring.header());
        for g in &gens {
            text.push_str(&format!("{}\n", poly(&ring, g)));
        }
        let a = ops::groebner_basis(&text, orders[o]).or_fail()?;
        let b = ops::groebner_basis(&text, orders[o]).or_fail()?;
        prop_assert_eq!(&a, &b);
        Ok(())
    })
    .map_err(|e| e.to_string())
}
