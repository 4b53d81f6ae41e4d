//! Krull dimension of `K[x]/I` from the leading monomials of a Groebner basis
//! of `I`: the largest variable set containing no leading monomial's support,
//! found as `n` minus a minimum hitting set of the supports.

/// `n - min |H|` over sets `H` meeting every support; `-1` when some
/// monomial is constant.
pub fn monomial_dimension(n: usize, leads: &[Vec<u16>]) -> i64 {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for l in leads {
        let s: Vec<usize> = (0..n).filter(|&i| l[i] > 0).collect();
        if s.is_empty() {
            return -1;
        }
        sets.push(s);
    }
    sets.sort_by_key(|s| s.len());
    sets.dedup();
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if !minimal.iter().any(|m| m.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let mut state = Search {
        sets: minimal,
        chosen: vec![false; n],
        forbidden: vec![false; n],
        best: n + 1,
    };
    state.run(0);
    n as i64 - state.best as i64
}

struct Search {
    sets: Vec<Vec<usize>>,
    chosen: Vec<bool>,
    forbidden: Vec<bool>,
    best: usize,
}

impl Search {
    fn hit(&self, s: &[usize]) -> bool {
        s.iter().any(|&v| self.chosen[v])
    }

    /// Count of pairwise disjoint unhit sets: a lower bound on what remains.
    fn packing_bound(&self) -> usize {
        let mut used = vec![false; self.chosen.len()];
        let mut k = 0;
        for s in &self.sets {
            if self.hit(s) || s.iter().any(|&v| used[v]) {
                continue;
            }
            for &v in s {
                used[v] = true;
            }
            k += 1;
        }
        k
    }

    fn run(&mut self, count: usize) {
        if count + self.packing_bound() >= self.best {
            return;
        }
        let mut pick: Option<Vec<usize>> = None;
        for s in &self.sets {
            if self.hit(s) {
                continue;
            }
            let free: Vec<usize> = s.iter().copied().filter(|&v| !self.forbidden[v]).collect();
            if free.is_empty() {
                return;
            }
            if pick.as_ref().is_none_or(|p| free.len() < p.len()) {
                pick = Some(free);
            }
        }
        let Some(branch) = pick else {
            self.best = count;
            return;
        };
        let mut undo = Vec::new();
        for v in branch {
            self.chosen[v] = true;
            self.run(count + 1);
            self.chosen[v] = false;
            self.forbidden[v] = true;
            undo.push(v);
        }
        for v in undo {
            self.forbidden[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(monomial_dimension(3, &[]), 3);
        assert_eq!(monomial_dimension(2, &[vec![0, 0]]), -1);
        assert_eq!(monomial_dimension(2, &[vec![1, 1]]), 1);
        assert_eq!(monomial_dimension(3, &[vec![1, 0, 0], vec![0, 2, 0]]), 1);
        assert_eq!(
            monomial_dimension(4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]),
            2
        );
    }
}
