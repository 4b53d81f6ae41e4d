//! Exact sparse Gaussian elimination over a field.

use std::collections::BTreeMap;

use crate::field::Field;

pub type SparseRow<E> = Vec<(usize, E)>;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<E> {
    /// A particular solution, free variables set to zero.
    Consistent(Vec<E>),
    /// `y` with `y A = 0` and `y b != 0`, as a sparse combination of rows,
    /// plus the rank of `A`.
    Inconsistent {
        functional: SparseRow<E>,
        rank: usize,
    },
}

fn axpy<F: Field>(
    k: &F,
    a: &SparseRow<F::Elem>,
    c: &F::Elem,
    b: &SparseRow<F::Elem>,
) -> SparseRow<F::Elem> {
    // a - c*b
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = b.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(a[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, k.neg(&k.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = k.sub(&a[i].1, &k.mul(c, &b[j].1));
            if !k.is_zero(&v) {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

struct PivotRow<E> {
    row: SparseRow<E>,
    rhs: E,
    combo: SparseRow<E>,
}

struct Echelon<'a, F: Field> {
    k: &'a F,
    pivots: BTreeMap<usize, PivotRow<F::Elem>>,
    track: bool,
}

impl<'a, F: Field> Echelon<'a, F> {
    fn new(k: &'a F, track: bool) -> Self {
        Echelon {
            k,
            pivots: BTreeMap::new(),
            track,
        }
    }

    /// Reduces the row; returns the leftover when it became zero on the
    /// coefficient side.
    fn insert(
        &mut self,
        mut row: SparseRow<F::Elem>,
        mut rhs: F::Elem,
        idx: usize,
    ) -> Option<PivotRow<F::Elem>> {
        let k = self.k;
        row.retain(|(_, v)| !k.is_zero(v));
        row.sort_by_key(|x| x.0);
        let mut combo = if self.track {
            vec![(idx, k.one())]
        } else {
            Vec::new()
        };
        while let Some((lead, c)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => {
                    row = axpy(k, &row, &c, &p.row);
                    rhs = k.sub(&rhs, &k.mul(&c, &p.rhs));
                    if self.track {
                        combo = axpy(k, &combo, &c, &p.combo);
                    }
                }
                None => {
                    let inv = k.inv(&c);
                    for x in row.iter_mut() {
                        x.1 = k.mul(&x.1, &inv);
                    }
                    rhs = k.mul(&rhs, &inv);
                    for x in combo.iter_mut() {
                        x.1 = k.mul(&x.1, &inv);
                    }
                    self.pivots.insert(lead, PivotRow { row, rhs, combo });
                    return None;
                }
            }
        }
        Some(PivotRow { row, rhs, combo })
    }

    fn back_substitute(&self, ncols: usize) -> Vec<F::Elem> {
        let k = self.k;
        let mut x = vec![k.zero(); ncols];
        for (&lead, p) in self.pivots.iter().rev() {
            let mut v = p.rhs.clone();
            for (c, a) in &p.row[1..] {
                v = k.sub(&v, &k.mul(a, &x[*c]));
            }
            x[lead] = v;
        }
        x
    }
}

/// Solves `A x = b` exactly; `rows[i]` is row `i` of `A` in sparse form.
pub fn solve<F: Field>(
    k: &F,
    rows: &[SparseRow<F::Elem>],
    rhs: &[F::Elem],
    ncols: usize,
) -> Solution<F::Elem> {
    let mut ech = Echelon::new(k, true);
    let mut bad = None;
    for (i, (r, b)) in rows.iter().zip(rhs).enumerate() {
        if let Some(left) = ech.insert(r.clone(), b.clone(), i) {
            if !k.is_zero(&left.rhs) && bad.is_none() {
                bad = Some(left.combo);
            }
        }
    }
    match bad {
        Some(functional) => Solution::Inconsistent {
            functional,
            rank: ech.pivots.len(),
        },
        None => Solution::Consistent(ech.back_substitute(ncols)),
    }
}

pub fn rank<F: Field>(k: &F, rows: &[SparseRow<F::Elem>]) -> usize {
    let mut ech = Echelon::new(k, false);
    for (i, r) in rows.iter().enumerate() {
        ech.insert(r.clone(), k.zero(), i);
    }
    ech.pivots.len()
}

/// A nonzero solution of `A x = 0` whose only nonzero free variable is the
/// smallest free column, if one exists.
pub fn kernel_vector<F: Field>(
    k: &F,
    rows: &[SparseRow<F::Elem>],
    ncols: usize,
) -> Option<Vec<F::Elem>> {
    let mut ech = Echelon::new(k, false);
    for (i, r) in rows.iter().enumerate() {
        ech.insert(r.clone(), k.zero(), i);
    }
    let free = (0..ncols).find(|c| !ech.pivots.contains_key(c))?;
    let mut x = vec![k.zero(); ncols];
    x[free] = k.one();
    for (&lead, p) in ech.pivots.iter().rev() {
        let mut v = k.zero();
        for (c, a) in &p.row[1..] {
            v = k.sub(&v, &k.mul(a, &x[*c]));
        }
        x[lead] = v;
    }
    Some(x)
}

/// Checks `y A = 0` and `y b != 0`.
pub fn check_functional<F: Field>(
    k: &F,
    rows: &[SparseRow<F::Elem>],
    rhs: &[F::Elem],
    y: &SparseRow<F::Elem>,
) -> bool {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    let mut yb = k.zero();
    for (i, c) in y {
        if *i >= rows.len() {
            return false;
        }
        for (col, a) in &rows[*i] {
            let e = acc.entry(*col).or_insert_with(|| k.zero());
            *e = k.add(e, &k.mul(c, a));
        }
        yb = k.add(&yb, &k.mul(c, &rhs[*i]));
    }
    acc.values().all(|v| k.is_zero(v)) && !k.is_zero(&yb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn consistent_and_inconsistent() {
        let k = PrimeField::new(7).unwrap();
        let rows = vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 6)]];
        match solve(&k, &rows, &[3, 1], 2) {
            Solution::Consistent(x) => {
                assert_eq!(k.add(&x[0], &x[1]), 3);
                assert_eq!(k.sub(&x[0], &x[1]), 1);
            }
            other => panic!("{other:?}"),
        }
        let rows = vec![vec![(0, 1), (1, 1)], vec![(0, 2), (1, 2)]];
        match solve(&k, &rows, &[1, 1], 2) {
            Solution::Inconsistent { functional, rank } => {
                assert_eq!(rank, 1);
                assert!(check_functional(&k, &rows, &[1, 1], &functional));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kernel() {
        let k = PrimeField::new(5).unwrap();
        let rows = vec![vec![(0, 1), (2, 1)], vec![(1, 1), (2, 2)]];
        let x = kernel_vector(&k, &rows, 3).unwrap();
        assert_eq!(x, vec![4, 3, 1]);
        assert!(kernel_vector(&k, &[vec![(0, 1)]], 1).is_none());
        assert_eq!(rank(&k, &rows), 2);
    }
}
