//! Buchberger's algorithm on packed terms.
//!
//! A term is a row of `u16` lanes: weighted sums (lane 0 is always the ring
//! grading plus the component shift), then the exponent vector, then the
//! component index. Orders compile to a list of lane comparisons, and every
//! lane is additive under multiplication by a monomial.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::budget;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::order::{CompiledOrder, Stage};

pub(crate) type Lane = u16;

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub n: usize,
    pub nw: usize,
    pub stride: usize,
    pub pos_lane: usize,
    lane_weights: Vec<Vec<u32>>,
    lane_shifts: Vec<bool>,
    shifts: Vec<u32>,
    level_lane: Option<usize>,
    levels: Vec<u32>,
    cmp: Vec<(usize, bool)>,
}

impl Layout {
    /// `pot`: `None` for ideals, `Some(true)` position over term,
    /// `Some(false)` term over position. Smaller component index is larger.
    /// Nonempty `levels` rank components before anything else.
    pub fn new(
        ring_weights: &[u32],
        order: &CompiledOrder,
        pot: Option<bool>,
        shifts: &[u32],
        levels: &[u32],
    ) -> Self {
        let n = ring_weights.len();
        let mut lane_weights = vec![ring_weights.to_vec()];
        let mut lane_shifts = vec![true];
        let mut term_cmp = Vec::new();
        for st in order.stages() {
            match st {
                Stage::Weight(ws) => {
                    let mut full = vec![0u32; n];
                    for &(v, w) in ws {
                        full[v] = w;
                    }
                    let lane = match lane_weights.iter().position(|l| *l == full) {
                        Some(l) => l,
                        None => {
                            lane_weights.push(full);
                            lane_shifts.push(false);
                            lane_weights.len() - 1
                        }
                    };
                    term_cmp.push((lane, true));
                }
                Stage::Lex(vs) => term_cmp.extend(vs.iter().map(|&v| (usize::MAX - v, true))),
                Stage::RevLex(vs) => {
                    term_cmp.extend(vs.iter().rev().map(|&v| (usize::MAX - v, false)))
                }
            }
        }
        let level_lane = if levels.is_empty() {
            None
        } else {
            lane_weights.push(vec![0; n]);
            lane_shifts.push(false);
            Some(lane_weights.len() - 1)
        };
        let nw = lane_weights.len();
        let pos_lane = nw + n;
        let fix = |(l, b): (usize, bool)| {
            if l > pos_lane {
                (nw + (usize::MAX - l), b)
            } else {
                (l, b)
            }
        };
        let term_cmp: Vec<(usize, bool)> = term_cmp.into_iter().map(fix).collect();
        let mut cmp = Vec::new();
        if let Some(l) = level_lane {
            cmp.push((l, true));
        }
        match pot {
            Some(true) => {
                cmp.push((pos_lane, false));
                cmp.extend(term_cmp);
            }
            Some(false) => {
                cmp.extend(term_cmp);
                cmp.push((pos_lane, false));
            }
            None => cmp.extend(term_cmp),
        }
        Layout {
            n,
            nw,
            stride: nw + n + 1,
            pos_lane,
            lane_weights,
            lane_shifts,
            shifts: shifts.to_vec(),
            level_lane,
            levels: levels.to_vec(),
            cmp,
        }
    }

    fn shift(&self, pos: usize) -> u32 {
        self.shifts.get(pos).copied().unwrap_or(0)
    }

    pub fn fill(&self, exps: &[u16], pos: usize, out: &mut [Lane]) -> Result<()> {
        for (l, w) in self.lane_weights.iter().enumerate() {
            let mut s: u32 = exps.iter().zip(w).map(|(&e, &w)| e as u32 * w).sum();
            if self.lane_shifts[l] {
                s += self.shift(pos);
            }
            out[l] = Lane::try_from(s).map_err(|_| Error::ExponentOverflow)?;
        }
        if let Some(l) = self.level_lane {
            out[l] = self.levels.get(pos).copied().unwrap_or(0) as Lane;
        }
        out[self.nw..self.nw + self.n].copy_from_slice(exps);
        out[self.pos_lane] = pos as Lane;
        Ok(())
    }

    #[inline]
    pub fn exps<'a>(&self, t: &'a [Lane]) -> &'a [Lane] {
        &t[self.nw..self.nw + self.n]
    }

    #[inline]
    pub fn pos(&self, t: &[Lane]) -> usize {
        t[self.pos_lane] as usize
    }

    #[inline]
    pub fn deg(&self, t: &[Lane]) -> u32 {
        t[0] as u32
    }

    #[inline]
    pub fn cmp(&self, a: &[Lane], b: &[Lane]) -> Ordering {
        for &(l, larger) in &self.cmp {
            let (x, y) = (a[l], b[l]);
            if x != y {
                return if (x > y) == larger {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }

    /// `a` divides `b` (same component).
    #[inline]
    pub fn divides(&self, a: &[Lane], b: &[Lane]) -> bool {
        a[self.pos_lane] == b[self.pos_lane]
            && a[self.nw..self.pos_lane]
                .iter()
                .zip(&b[self.nw..self.pos_lane])
                .all(|(x, y)| x <= y)
    }

    /// Monomial `m` (component ignored) times term `t`.
    #[inline]
    pub fn mul_into(&self, m: &[Lane], t: &[Lane], out: &mut [Lane]) {
        for l in 0..self.pos_lane {
            let s = m[l] as u32 + t[l] as u32;
            out[l] = if s > Lane::MAX as u32 {
                panic!("exponent overflow in Groebner engine")
            } else {
                s as Lane
            };
        }
        out[self.pos_lane] = t[self.pos_lane];
    }

    /// The monomial `b / a`; requires `a | b`.
    pub fn quotient(&self, b: &[Lane], a: &[Lane], out: &mut [Lane]) {
        for l in 0..self.pos_lane {
            out[l] = b[l] - a[l];
        }
        out[self.pos_lane] = 0;
    }

    pub fn lcm(&self, a: &[Lane], b: &[Lane]) -> Vec<Lane> {
        let exps: Vec<Lane> = self
            .exps(a)
            .iter()
            .zip(self.exps(b))
            .map(|(&x, &y)| x.max(y))
            .collect();
        let mut out = vec![0; self.stride];
        self.fill(&exps, self.pos(a), &mut out)
            .expect("lcm degree overflow");
        out
    }

    pub fn coprime(&self, a: &[Lane], b: &[Lane]) -> bool {
        self.exps(a)
            .iter()
            .zip(self.exps(b))
            .all(|(&x, &y)| x == 0 || y == 0)
    }

    pub fn mask(&self, t: &[Lane]) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.exps(t).iter().enumerate() {
            if e > 0 {
                m |= 1 << (i % 64);
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub(crate) struct EPoly<E> {
    pub coef: Vec<E>,
    pub lanes: Vec<Lane>,
}

impl<E: Clone> EPoly<E> {
    pub fn new() -> Self {
        EPoly {
            coef: Vec::new(),
            lanes: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, stride: usize) -> Self {
        EPoly {
            coef: Vec::with_capacity(n),
            lanes: Vec::with_capacity(n * stride),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coef.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coef.is_empty()
    }

    #[inline]
    pub fn term(&self, i: usize, stride: usize) -> &[Lane] {
        &self.lanes[i * stride..(i + 1) * stride]
    }

    #[inline]
    pub fn push(&mut self, c: E, t: &[Lane]) {
        self.coef.push(c);
        self.lanes.extend_from_slice(t);
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct GbOptions {
    /// Pairs and inputs of larger sugar are not processed.
    pub max_sugar: Option<u32>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct GbStats {
    pub pairs: usize,
    pub zero_reductions: usize,
    pub truncated: bool,
}

pub(crate) struct Engine<'a, F: Field> {
    pub field: &'a F,
    pub layout: Layout,
    pub module: bool,
}

struct Basis<E> {
    polys: Vec<EPoly<E>>,
    sugar: Vec<u32>,
    mask: Vec<u64>,
    active: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Job {
    Input(u32),
    Pair(u32),
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<Lane>,
    alive: bool,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(field: &'a F, layout: Layout, module: bool) -> Self {
        Engine {
            field,
            layout,
            module,
        }
    }

    fn stride(&self) -> usize {
        self.layout.stride
    }

    pub fn sort(&self, p: &mut EPoly<F::Elem>) {
        let s = self.stride();
        let mut idx: Vec<usize> = (0..p.len()).collect();
        idx.sort_by(|&a, &b| self.layout.cmp(p.term(b, s), p.term(a, s)));
        let mut out = EPoly::with_capacity(p.len(), s);
        let k = self.field;
        let mut last: Option<usize> = None;
        for i in idx {
            if let Some(l) = last {
                if self.layout.cmp(out.term(l, s), p.term(i, s)) == Ordering::Equal {
                    out.coef[l] = k.add(&out.coef[l], &p.coef[i]);
                    continue;
                }
            }
            out.push(p.coef[i].clone(), p.term(i, s));
            last = Some(out.len() - 1);
        }
        let mut clean = EPoly::with_capacity(out.len(), s);
        for i in 0..out.len() {
            if !k.is_zero(&out.coef[i]) {
                clean.push(out.coef[i].clone(), out.term(i, s));
            }
        }
        *p = clean;
    }

    fn make_monic(&self, p: &mut EPoly<F::Elem>) {
        if let Some(c) = p.coef.first() {
            if !self.field.is_one(c) {
                let inv = self.field.inv(c);
                for x in p.coef.iter_mut() {
                    *x = self.field.mul(x, &inv);
                }
            }
        }
    }

    /// `a[ai..] - c * m * g[gi..]`.
    fn sub_mul(
        &self,
        a: &EPoly<F::Elem>,
        ai: usize,
        c: &F::Elem,
        m: &[Lane],
        g: &EPoly<F::Elem>,
        gi: usize,
    ) -> EPoly<F::Elem> {
        let s = self.stride();
        let k = self.field;
        let lay = &self.layout;
        let mut out = EPoly::with_capacity(a.len() - ai + g.len() - gi, s);
        let mut tmp = vec![0; s];
        let (mut i, mut j) = (ai, gi);
        let mut have = false;
        while i < a.len() && j < g.len() {
            if !have {
                lay.mul_into(m, g.term(j, s), &mut tmp);
                have = true;
            }
            match lay.cmp(a.term(i, s), &tmp) {
                Ordering::Greater => {
                    out.push(a.coef[i].clone(), a.term(i, s));
                    i += 1;
                }
                Ordering::Less => {
                    out.push(k.neg(&k.mul(c, &g.coef[j])), &tmp);
                    j += 1;
                    have = false;
                }
                Ordering::Equal => {
                    let v = k.sub(&a.coef[i], &k.mul(c, &g.coef[j]));
                    if !k.is_zero(&v) {
                        out.push(v, &tmp);
                    }
                    i += 1;
                    j += 1;
                    have = false;
                }
            }
        }
        while i < a.len() {
            out.push(a.coef[i].clone(), a.term(i, s));
            i += 1;
        }
        while j < g.len() {
            lay.mul_into(m, g.term(j, s), &mut tmp);
            out.push(k.neg(&k.mul(c, &g.coef[j])), &tmp);
            j += 1;
        }
        out
    }

    fn mul_term(&self, g: &EPoly<F::Elem>, gi: usize, m: &[Lane]) -> EPoly<F::Elem> {
        let s = self.stride();
        let mut out = EPoly::with_capacity(g.len() - gi, s);
        let mut tmp = vec![0; s];
        for j in gi..g.len() {
            self.layout.mul_into(m, g.term(j, s), &mut tmp);
            out.push(g.coef[j].clone(), &tmp);
        }
        out
    }

    fn find_reducer(
        &self,
        t: &[Lane],
        basis: &Basis<F::Elem>,
        reducers: &[usize],
    ) -> Option<usize> {
        let s = self.stride();
        let tm = self.layout.mask(t);
        let mut best: Option<usize> = None;
        for &r in reducers {
            if basis.mask[r] & !tm != 0 {
                continue;
            }
            let g = &basis.polys[r];
            if self.layout.divides(g.term(0, s), t)
                && best.is_none_or(|b| g.len() < basis.polys[b].len())
            {
                best = Some(r);
            }
        }
        best
    }

    /// Reduces `h` by the reducers; with `full` also the tail. Returns the
    /// result and its sugar.
    fn reduce(
        &self,
        mut h: EPoly<F::Elem>,
        mut sugar: u32,
        basis: &Basis<F::Elem>,
        reducers: &[usize],
        full: bool,
    ) -> Result<(EPoly<F::Elem>, u32)> {
        let s = self.stride();
        let k = self.field;
        let mut done = EPoly::new();
        let mut start = 0;
        let mut mono = vec![0; s];
        let mut steps = 0usize;
        while start < h.len() {
            let t = h.term(start, s).to_vec();
            match self.find_reducer(&t, basis, reducers) {
                Some(r) => {
                    steps += 1;
                    if steps.is_multiple_of(256) {
                        budget::check()?;
                    }
                    let g = &basis.polys[r];
                    self.layout.quotient(&t, g.term(0, s), &mut mono);
                    let c = k.div(&h.coef[start], &g.coef[0]);
                    sugar = sugar.max(self.layout.deg(&mono) + basis.sugar[r]);
                    h = self.sub_mul(&h, start + 1, &c, &mono, g, 1);
                    start = 0;
                }
                None if full => {
                    done.push(h.coef[start].clone(), &t);
                    start += 1;
                }
                None => break,
            }
        }
        if full {
            Ok((done, sugar))
        } else {
            let mut rest = EPoly::with_capacity(h.len() - start, s);
            for i in start..h.len() {
                rest.push(h.coef[i].clone(), h.term(i, s));
            }
            Ok((rest, sugar))
        }
    }

    /// Full reduction of `h` by an arbitrary list of polynomials.
    pub fn normal_form(&self, h: EPoly<F::Elem>, by: &[EPoly<F::Elem>]) -> Result<EPoly<F::Elem>> {
        let s = self.stride();
        let basis = Basis {
            mask: by.iter().map(|g| self.layout.mask(g.term(0, s))).collect(),
            sugar: vec![0; by.len()],
            active: vec![true; by.len()],
            polys: by.to_vec(),
        };
        let reducers: Vec<usize> = (0..by.len()).filter(|&i| !by[i].is_empty()).collect();
        Ok(self.reduce(h, 0, &basis, &reducers, true)?.0)
    }

    fn poly_sugar(&self, p: &EPoly<F::Elem>) -> u32 {
        let s = self.stride();
        (0..p.len())
            .map(|i| self.layout.deg(p.term(i, s)))
            .max()
            .unwrap_or(0)
    }

    /// Reduced Groebner basis, sorted ascending by leading term.
    pub fn groebner(
        &self,
        input: Vec<EPoly<F::Elem>>,
        opts: &GbOptions,
        stats: &mut GbStats,
    ) -> Result<Vec<EPoly<F::Elem>>> {
        let s = self.stride();
        let lay = &self.layout;
        let input: Vec<EPoly<F::Elem>> = input.into_iter().filter(|p| !p.is_empty()).collect();
        let in_sugar: Vec<u32> = input.iter().map(|p| self.poly_sugar(p)).collect();

        let mut basis = Basis {
            polys: Vec::new(),
            sugar: Vec::new(),
            mask: Vec::new(),
            active: Vec::new(),
        };
        let mut reducers: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(u32, u32, Job, u32)>> = BinaryHeap::new();
        for (k, p) in input.iter().enumerate() {
            heap.push(Reverse((
                in_sugar[k],
                lay.deg(p.term(0, s)),
                Job::Input(k as u32),
                0,
            )));
        }

        while let Some(Reverse((sugar_key, _, job, _))) = heap.pop() {
            if opts.max_sugar.is_some_and(|b| sugar_key > b) {
                stats.truncated = true;
                break;
            }
            budget::check()?;
            let (h, sugar) = match job {
                Job::Input(k) => (input[k as usize].clone(), in_sugar[k as usize]),
                Job::Pair(pi) => {
                    let pair = &pairs[pi as usize];
                    if !pair.alive {
                        continue;
                    }
                    stats.pairs += 1;
                    let (i, j) = (pair.i, pair.j);
                    let (gi, gj) = (&basis.polys[i], &basis.polys[j]);
                    let mut mi = vec![0; s];
                    let mut mj = vec![0; s];
                    lay.quotient(&pair.lcm, gi.term(0, s), &mut mi);
                    lay.quotient(&pair.lcm, gj.term(0, s), &mut mj);
                    let sugar = (basis.sugar[i] + lay.deg(&mi)).max(basis.sugar[j] + lay.deg(&mj));
                    let a = self.mul_term(gi, 1, &mi);
                    let sp = self.sub_mul(&a, 0, &self.field.one(), &mj, gj, 1);
                    (sp, sugar)
                }
            };
            let (mut h, sugar) = self.reduce(h, sugar, &basis, &reducers, true)?;
            if h.is_empty() {
                stats.zero_reductions += 1;
                continue;
            }
            self.make_monic(&mut h);
            let t = basis.polys.len();
            let lead = h.term(0, s).to_vec();
            basis.mask.push(lay.mask(&lead));
            basis.polys.push(h);
            basis.sugar.push(sugar);
            basis.active.push(true);
            self.update(t, &mut basis, &mut pairs, &mut heap);
            reducers = (0..basis.polys.len())
                .filter(|&i| basis.active[i])
                .collect();
        }

        let keep: Vec<usize> = (0..basis.polys.len())
            .filter(|&i| basis.active[i])
            .collect();
        let mut out = Vec::with_capacity(keep.len());
        for &i in &keep {
            let g = &basis.polys[i];
            let others: Vec<usize> = keep.iter().copied().filter(|&j| j != i).collect();
            let mut tail = EPoly::with_capacity(g.len() - 1, s);
            for j in 1..g.len() {
                tail.push(g.coef[j].clone(), g.term(j, s));
            }
            let (tail, _) = self.reduce(tail, 0, &basis, &others, true)?;
            let mut r = EPoly::with_capacity(tail.len() + 1, s);
            r.push(g.coef[0].clone(), g.term(0, s));
            for j in 0..tail.len() {
                r.push(tail.coef[j].clone(), tail.term(j, s));
            }
            out.push(r);
        }
        out.sort_by(|a, b| lay.cmp(a.term(0, s), b.term(0, s)));
        Ok(out)
    }

    fn update(
        &self,
        t: usize,
        basis: &mut Basis<F::Elem>,
        pairs: &mut Vec<Pair>,
        heap: &mut BinaryHeap<Reverse<(u32, u32, Job, u32)>>,
    ) {
        let s = self.stride();
        let lay = &self.layout;
        let ht = basis.polys[t].term(0, s).to_vec();
        let coprime_ok = !self.module;

        let mut cand: Vec<(usize, Vec<Lane>, bool)> = Vec::new();
        for i in 0..t {
            if !basis.active[i] {
                continue;
            }
            let hi = basis.polys[i].term(0, s);
            if lay.pos(hi) != lay.pos(&ht) {
                continue;
            }
            let cop = coprime_ok && lay.coprime(hi, &ht);
            cand.push((i, lay.lcm(hi, &ht), cop));
        }

        // Chain criterion among new pairs; equal lcms keep one representative.
        let mut kept: Vec<(usize, Vec<Lane>, bool)> = Vec::new();
        let mut rest = cand;
        while let Some((i, l, cop)) = (!rest.is_empty()).then(|| rest.remove(0)) {
            let dominated = rest
                .iter()
                .chain(kept.iter())
                .any(|(_, l2, _)| lay.divides(l2, &l));
            if cop || !dominated {
                kept.push((i, l, cop));
            }
        }
        let new_pairs: Vec<(usize, Vec<Lane>)> = kept
            .into_iter()
            .filter(|(_, _, cop)| !cop)
            .map(|(i, l, _)| (i, l))
            .collect();

        // Old pairs made redundant by the new leading term.
        for p in pairs.iter_mut().filter(|p| p.alive) {
            if !lay.divides(&ht, &p.lcm) {
                continue;
            }
            let li = lay.lcm(basis.polys[p.i].term(0, s), &ht);
            let lj = lay.lcm(basis.polys[p.j].term(0, s), &ht);
            if lay.cmp(&li, &p.lcm) != Ordering::Equal && lay.cmp(&lj, &p.lcm) != Ordering::Equal {
                p.alive = false;
            }
        }

        for i in 0..t {
            if basis.active[i] && lay.divides(&ht, basis.polys[i].term(0, s)) {
                basis.active[i] = false;
            }
        }

        for (i, l) in new_pairs {
            let gi = &basis.polys[i];
            let di = lay.deg(&l) - lay.deg(gi.term(0, s));
            let dt = lay.deg(&l) - lay.deg(&ht);
            let sugar = (basis.sugar[i] + di).max(basis.sugar[t] + dt);
            let idx = pairs.len() as u32;
            heap.push(Reverse((sugar, lay.deg(&l), Job::Pair(idx), i as u32)));
            pairs.push(Pair {
                i,
                j: t,
                lcm: l,
                alive: true,
            });
        }
    }
}
