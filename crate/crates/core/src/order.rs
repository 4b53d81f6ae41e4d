use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Exp;
use crate::ring::Ring;

/// Term orders. Variables compare in ring order: the first variable is the
/// largest. Graded variants use the ring's weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GradedLex,
    Grevlex,
    /// Compare by the given weight vector (indexed by ring variable) first.
    WeightedGraded {
        weights: Vec<u32>,
        tiebreak: Box<MonomialOrder>,
    },
    /// Compare the `front` variables under `front_order` first, the rest under
    /// `rest_order` afterwards.
    Block {
        front: Vec<usize>,
        front_order: Box<MonomialOrder>,
        rest_order: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Block order with grevlex on both blocks, eliminating `front`.
    pub fn elimination(front: Vec<usize>) -> Self {
        MonomialOrder::Block {
            front,
            front_order: Box::new(MonomialOrder::Grevlex),
            rest_order: Box::new(MonomialOrder::Grevlex),
        }
    }

    /// Degree first, then elimination of `front`. Only eliminates on
    /// homogeneous input.
    pub fn graded_elimination<F: Field>(ring: &Ring<F>, front: Vec<usize>) -> Self {
        MonomialOrder::WeightedGraded {
            weights: ring.int_weights().to_vec(),
            tiebreak: Box::new(Self::elimination(front)),
        }
    }

    pub fn compile<F: Field>(&self, ring: &Ring<F>) -> CompiledOrder {
        let vars: Vec<usize> = (0..ring.nvars()).collect();
        let mut stages = Vec::new();
        self.push_stages(ring.int_weights(), &vars, &mut stages);
        CompiledOrder { stages }
    }

    fn push_stages(&self, w: &[u32], vars: &[usize], out: &mut Vec<Stage>) {
        match self {
            MonomialOrder::Lex => out.push(Stage::Lex(vars.to_vec())),
            MonomialOrder::GradedLex => {
                out.push(Stage::Weight(vars.iter().map(|&v| (v, w[v])).collect()));
                out.push(Stage::Lex(vars.to_vec()));
            }
            MonomialOrder::Grevlex => {
                out.push(Stage::Weight(vars.iter().map(|&v| (v, w[v])).collect()));
                out.push(Stage::RevLex(vars.to_vec()));
            }
            MonomialOrder::WeightedGraded { weights, tiebreak } => {
                let ws: Vec<(usize, u32)> = vars
                    .iter()
                    .filter_map(|&v| weights.get(v).filter(|&&x| x > 0).map(|&x| (v, x)))
                    .collect();
                if !ws.is_empty() {
                    out.push(Stage::Weight(ws));
                }
                tiebreak.push_stages(w, vars, out);
            }
            MonomialOrder::Block {
                front,
                front_order,
                rest_order,
            } => {
                let fv: Vec<usize> = vars.iter().copied().filter(|v| front.contains(v)).collect();
                let rv: Vec<usize> = vars
                    .iter()
                    .copied()
                    .filter(|v| !front.contains(v))
                    .collect();
                if !fv.is_empty() {
                    front_order.push_stages(w, &fv, out);
                }
                if !rv.is_empty() {
                    rest_order.push_stages(w, &rv, out);
                }
            }
        }
    }

    pub fn compare<F: Field>(&self, ring: &Ring<F>, a: &[Exp], b: &[Exp]) -> Ordering {
        self.compile(ring).compare(a, b)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "glex" | "graded_lex" => Ok(MonomialOrder::GradedLex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            _ => Err(Error::Parse(format!("unknown order {s}"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::GradedLex => write!(f, "glex"),
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::WeightedGraded { weights, tiebreak } => {
                write!(f, "weighted{weights:?}({tiebreak})")
            }
            MonomialOrder::Block {
                front,
                front_order,
                rest_order,
            } => {
                write!(f, "block{front:?}({front_order},{rest_order})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Larger weighted sum wins.
    Weight(Vec<(usize, u32)>),
    /// First differing variable decides, larger exponent wins.
    Lex(Vec<usize>),
    /// Last differing variable decides, smaller exponent wins.
    RevLex(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledOrder {
    stages: Vec<Stage>,
}

impl CompiledOrder {
    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn compare(&self, a: &[Exp], b: &[Exp]) -> Ordering {
        for st in &self.stages {
            let o = match st {
                Stage::Weight(ws) => {
                    let sa: u64 = ws.iter().map(|&(v, w)| a[v] as u64 * w as u64).sum();
                    let sb: u64 = ws.iter().map(|&(v, w)| b[v] as u64 * w as u64).sum();
                    sa.cmp(&sb)
                }
                Stage::Lex(vs) => vs
                    .iter()
                    .map(|&v| a[v].cmp(&b[v]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal),
                Stage::RevLex(vs) => vs
                    .iter()
                    .rev()
                    .map(|&v| b[v].cmp(&a[v]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal),
            };
            if o.is_ne() {
                return o;
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ring(names: &[&str]) -> std::sync::Arc<Ring<PrimeField>> {
        Ring::new(PrimeField::new(2).unwrap(), names).unwrap()
    }

    #[test]
    fn graded_lex_on_adjacent_brackets() {
        let r = ring(&["X1", "Y1", "X2", "Y2"]);
        let x1y2 = [1, 0, 0, 1];
        let x2y1 = [0, 1, 1, 0];
        assert_eq!(
            MonomialOrder::GradedLex.compare(&r, &x1y2, &x2y1),
            Ordering::Greater
        );
    }

    #[test]
    fn grevlex_basic() {
        let r = ring(&["X", "Y"]);
        assert_eq!(
            MonomialOrder::Grevlex.compare(&r, &[2, 1], &[1, 2]),
            Ordering::Greater
        );
        for o in [
            MonomialOrder::Lex,
            MonomialOrder::GradedLex,
            MonomialOrder::Grevlex,
        ] {
            assert_eq!(o.compare(&r, &[0, 0], &[1, 0]), Ordering::Less);
        }
    }

    #[test]
    fn block_compares_front_first() {
        let r = ring(&["X", "Y", "T"]);
        let o = MonomialOrder::elimination(vec![0, 1]);
        assert_eq!(o.compare(&r, &[1, 0, 0], &[0, 0, 5]), Ordering::Greater);
        assert_eq!(o.compare(&r, &[0, 1, 3], &[0, 1, 2]), Ordering::Greater);
    }
}
