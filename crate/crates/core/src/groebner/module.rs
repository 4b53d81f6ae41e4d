use super::engine::{Engine, GbOptions, GbStats};
use super::{from_epoly, layout, to_epoly};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, RingRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleExtension {
    PositionOverTerm,
    TermOverPosition,
}

/// Order on terms `m * e_i`. Component 0 is the largest position. `shifts`
/// (possibly empty) adds a degree offset per component to the grading;
/// `levels` (possibly empty) is compared before everything else, higher
/// level first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub base: MonomialOrder,
    pub extension: ModuleExtension,
    pub shifts: Vec<u32>,
    pub levels: Vec<u32>,
}

impl ModuleOrder {
    pub fn pot(base: MonomialOrder) -> Self {
        ModuleOrder {
            base,
            extension: ModuleExtension::PositionOverTerm,
            shifts: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn top(base: MonomialOrder) -> Self {
        ModuleOrder {
            base,
            extension: ModuleExtension::TermOverPosition,
            shifts: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn with_shifts(mut self, shifts: Vec<u32>) -> Self {
        self.shifts = shifts;
        self
    }

    pub fn with_levels(mut self, levels: Vec<u32>) -> Self {
        self.levels = levels;
        self
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeModuleElement<F: Field> {
    ring: RingRef<F>,
    components: Vec<Polynomial<F>>,
}

impl<F: Field> FreeModuleElement<F> {
    pub fn new(ring: &RingRef<F>, components: Vec<Polynomial<F>>) -> Result<Self> {
        if components.iter().any(|c| !same_ring(c.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(FreeModuleElement {
            ring: ring.clone(),
            components,
        })
    }

    pub fn zero(ring: &RingRef<F>, rank: usize) -> Self {
        FreeModuleElement {
            ring: ring.clone(),
            components: vec![Polynomial::zero(ring); rank],
        }
    }

    pub fn unit(ring: &RingRef<F>, rank: usize, i: usize) -> Self {
        let mut e = Self::zero(ring, rank);
        e.components[i] = Polynomial::one(ring);
        e
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial<F>> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a + b)
            .collect();
        FreeModuleElement {
            ring: self.ring.clone(),
            components,
        }
    }

    pub fn scale(&self, f: &Polynomial<F>) -> Self {
        let components = self.components.iter().map(|c| c * f).collect();
        FreeModuleElement {
            ring: self.ring.clone(),
            components,
        }
    }

    /// The combination `sum_i a_i * self_i` for polynomial coefficients `a`.
    pub fn combine(
        ring: &RingRef<F>,
        rank: usize,
        coeffs: &[Polynomial<F>],
        elems: &[Self],
    ) -> Self {
        let mut acc = Self::zero(ring, rank);
        for (a, e) in coeffs.iter().zip(elems) {
            if !a.is_zero() {
                acc = acc.add(&e.scale(a));
            }
        }
        acc
    }

    /// Common degree of all terms under the given component shifts, if any.
    pub fn homogeneous_degree(&self, shifts: &[u32]) -> Option<u32> {
        let mut deg = None;
        for (i, c) in self.components.iter().enumerate() {
            let sh = shifts.get(i).copied().unwrap_or(0);
            for (m, _) in c.terms() {
                let d = m.scaled_degree() + sh;
                match deg {
                    None => deg = Some(d),
                    Some(x) if x != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }
}

pub(crate) fn module_gb_with<F: Field>(
    ring: &RingRef<F>,
    elems: &[FreeModuleElement<F>],
    order: &ModuleOrder,
    opts: &GbOptions,
) -> Result<Vec<FreeModuleElement<F>>> {
    let rank = elems.first().map(|e| e.rank()).unwrap_or(0);
    if elems.iter().any(|e| e.rank() != rank) {
        return Err(Error::Invalid("module elements of different rank".into()));
    }
    if elems.iter().any(|e| !same_ring(e.ring(), ring)) {
        return Err(Error::RingMismatch);
    }
    if rank > u16::MAX as usize {
        return Err(Error::Invalid("module rank too large".into()));
    }
    let lay = layout(ring, &order.base, Some(order));
    let eng = Engine::new(ring.field(), lay, true);
    let input = elems
        .iter()
        .map(|e| to_epoly(&eng, &e.components.iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let mut stats = GbStats::default();
    let out = eng.groebner(input, opts, &mut stats)?;
    Ok(out
        .iter()
        .map(|e| FreeModuleElement {
            ring: ring.clone(),
            components: from_epoly(&eng, ring, e, rank),
        })
        .collect())
}

/// Reduced Groebner basis of the submodule generated by `elems`.
pub fn module_groebner<F: Field>(
    ring: &RingRef<F>,
    elems: &[FreeModuleElement<F>],
    order: &ModuleOrder,
) -> Result<Vec<FreeModuleElement<F>>> {
    module_gb_with(ring, elems, order, &GbOptions::default())
}

/// Remainder of `v` under full division by `by` in the given module order.
pub fn module_normal_form<F: Field>(
    v: &FreeModuleElement<F>,
    by: &[FreeModuleElement<F>],
    order: &ModuleOrder,
) -> Result<FreeModuleElement<F>> {
    let ring = v.ring();
    let rank = v.rank();
    if by.iter().any(|e| e.rank() != rank) {
        return Err(Error::Invalid("module elements of different rank".into()));
    }
    if by.iter().any(|e| !same_ring(e.ring(), ring)) {
        return Err(Error::RingMismatch);
    }
    let eng = Engine::new(ring.field(), layout(ring, &order.base, Some(order)), true);
    let g = by
        .iter()
        .map(|e| to_epoly(&eng, &e.components.iter().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let h = to_epoly(&eng, &v.components.iter().collect::<Vec<_>>())?;
    let r = eng.normal_form(h, &g)?;
    Ok(FreeModuleElement {
        ring: ring.clone(),
        components: from_epoly(&eng, ring, &r, rank),
    })
}

/// Generators of the syzygy module of `elems`.
pub fn syzygies<F: Field>(
    ring: &RingRef<F>,
    elems: &[FreeModuleElement<F>],
) -> Result<Vec<FreeModuleElement<F>>> {
    let s = elems.len();
    if s == 0 {
        return Ok(Vec::new());
    }
    let m = elems[0].rank();
    if elems.iter().any(|e| e.rank() != m) {
        return Err(Error::Invalid("module elements of different rank".into()));
    }
    let degs: Vec<Option<u32>> = elems.iter().map(|e| e.homogeneous_degree(&[])).collect();
    let graded = degs
        .iter()
        .zip(elems)
        .all(|(d, e)| d.is_some() || e.is_zero());
    let mut shifts = vec![0u32; m];
    if graded {
        shifts.extend(degs.iter().map(|d| d.unwrap_or(0)));
    }
    let aug: Vec<FreeModuleElement<F>> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut c = e.components.clone();
            c.extend(FreeModuleElement::unit(ring, s, i).components);
            FreeModuleElement {
                ring: ring.clone(),
                components: c,
            }
        })
        .collect();
    let order = ModuleOrder::pot(MonomialOrder::Grevlex).with_shifts(if graded {
        shifts
    } else {
        Vec::new()
    });
    let gb = module_groebner(ring, &aug, &order)?;
    let mut out = Vec::new();
    for g in gb {
        if g.components[..m].iter().all(|c| c.is_zero()) {
            let syz = FreeModuleElement {
                ring: ring.clone(),
                components: g.components[m..].to_vec(),
            };
            let check = FreeModuleElement::combine(ring, m, &syz.components, elems);
            if !check.is_zero() {
                return Err(Error::Verification(
                    "syzygy does not annihilate the input".into(),
                ));
            }
            out.push(syz);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;
    use crate::text::parse_poly;

    #[test]
    fn koszul_syzygy() {
        let r = Ring::new(PrimeField::new(5).unwrap(), &["X", "Y"]).unwrap();
        let x = parse_poly(&r, "X").unwrap();
        let y = parse_poly(&r, "Y").unwrap();
        let e = |p: &Polynomial<PrimeField>| FreeModuleElement::new(&r, vec![p.clone()]).unwrap();
        let syz = syzygies(&r, &[e(&x), e(&y)]).unwrap();
        assert_eq!(syz.len(), 1);
        let c = syz[0].components();
        assert_eq!(&c[0] * &x + &c[1] * &y, Polynomial::zero(&r));
        assert!(c[0] == y || c[0] == y.neg());

        let one = Polynomial::one(&r);
        assert!(syzygies(&r, &[e(&one)]).unwrap().is_empty());
        let dup = syzygies(&r, &[e(&x), e(&x)]).unwrap();
        assert_eq!(dup.len(), 1);
        assert!(dup[0].components()[0].is_constant());
    }

    #[test]
    fn module_basis_over_two_components() {
        let r = Ring::new(PrimeField::new(3).unwrap(), &["X", "Y"]).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let a = FreeModuleElement::new(&r, vec![p("X"), p("Y")]).unwrap();
        let b = FreeModuleElement::new(&r, vec![p("Y"), p("0")]).unwrap();
        let gb = module_groebner(&r, &[a, b], &ModuleOrder::top(MonomialOrder::Grevlex)).unwrap();
        assert!(gb.len() >= 2);
    }
}
