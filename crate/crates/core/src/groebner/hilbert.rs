//! Numerator of the weighted Hilbert series of `K[x]/M` for a monomial ideal
//! `M`, so that `HS(t) = N(t) / prod_i (1 - t^{w_i})`.

/// Polynomial in `t` with integer coefficients, index = exponent.
pub type Series = Vec<i128>;

fn trim(mut s: Series) -> Series {
    while s.len() > 1 && *s.last().unwrap() == 0 {
        s.pop();
    }
    s
}

pub fn series_sub(a: &Series, b: &Series) -> Series {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

pub fn series_shift(a: &Series, d: usize) -> Series {
    let mut out = vec![0; d];
    out.extend_from_slice(a);
    trim(out)
}

/// `(1 - t^d) * a`.
pub fn times_one_minus(a: &Series, d: usize) -> Series {
    series_sub(a, &series_shift(a, d))
}

fn degree(m: &[u16], w: &[u32]) -> usize {
    m.iter()
        .zip(w)
        .map(|(&e, &w)| e as usize * w as usize)
        .sum()
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u16>>) -> Vec<Vec<u16>> {
    gens.sort_by_key(|g| g.iter().map(|&e| e as u32).sum::<u32>());
    gens.dedup();
    let mut out: Vec<Vec<u16>> = Vec::new();
    for g in gens {
        if !out.iter().any(|m| divides(m, &g)) {
            out.push(g);
        }
    }
    out
}

/// Hilbert numerator of `K[x]/(gens)` for variable weights `w`.
pub fn hilbert_numerator(gens: &[Vec<u16>], w: &[u32]) -> Series {
    numerator(minimalize(gens.to_vec()), w)
}

fn numerator(gens: Vec<Vec<u16>>, w: &[u32]) -> Series {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return vec![0];
    }
    let n = w.len();
    let pairwise_coprime = {
        let mut seen = vec![false; n];
        let mut ok = true;
        'outer: for g in &gens {
            for (i, &e) in g.iter().enumerate() {
                if e > 0 {
                    if seen[i] {
                        ok = false;
                        break 'outer;
                    }
                    seen[i] = true;
                }
            }
        }
        ok
    };
    if pairwise_coprime {
        return gens
            .iter()
            .fold(vec![1], |acc, g| times_one_minus(&acc, degree(g, w)));
    }
    let mut counts = vec![0usize; n];
    for g in &gens {
        for (i, &e) in g.iter().enumerate() {
            if e > 0 {
                counts[i] += 1;
            }
        }
    }
    let v = (0..n)
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .unwrap();
    let e = gens.iter().map(|g| g[v]).filter(|&e| e > 0).min().unwrap();
    let mut pivot = vec![0u16; n];
    pivot[v] = e;
    if gens.iter().any(|g| divides(g, &pivot)) {
        let (a, b) = gens
            .iter()
            .enumerate()
            .flat_map(|(i, a)| gens[i + 1..].iter().map(move |b| (a, b)))
            .find(|(a, b)| a.iter().zip(b.iter()).any(|(&x, &y)| x > 0 && y > 0))
            .unwrap();
        pivot = a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect();
    }
    let mut with_pivot = gens.clone();
    with_pivot.push(pivot.clone());
    let colon: Vec<Vec<u16>> = gens
        .iter()
        .map(|g| {
            g.iter()
                .zip(&pivot)
                .map(|(&x, &y)| x.saturating_sub(y))
                .collect()
        })
        .collect();
    let a = numerator(minimalize(with_pivot), w);
    let b = numerator(minimalize(colon), w);
    let d = degree(&pivot, w);
    let mut out = a;
    let shifted = series_shift(&b, d);
    out.resize(out.len().max(shifted.len()), 0);
    for (i, x) in shifted.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_and_complete_intersection() {
        assert_eq!(hilbert_numerator(&[vec![1, 1]], &[1, 1]), vec![1, 0, -1]);
        assert_eq!(
            hilbert_numerator(&[vec![2, 0], vec![0, 1]], &[1, 1]),
            vec![1, -1, -1, 1]
        );
    }

    #[test]
    fn pivoting_matches_inclusion_exclusion() {
        // (xy, xz): N = 1 - 2t^2 + t^3
        assert_eq!(
            hilbert_numerator(&[vec![1, 1, 0], vec![1, 0, 1]], &[1, 1, 1]),
            vec![1, 0, -2, 1]
        );
    }
}
