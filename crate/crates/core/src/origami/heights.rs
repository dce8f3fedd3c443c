//! Side lengths and areas of the cells, propagated from the moduli.

use std::collections::VecDeque;

use super::{cell_of, ExtendedOrigami, Letter, SignedIndex, Word};
use crate::error::{Error, Result};
use crate::exact::Scalar;

/// Cell `l` is spanned by `s1[l] * u1` and `s2[l] * u2`, with `M_l = s2/s1`
/// and the normalization `s1[0] = 1`. Lengths are measured in units of the
/// frame vectors, so `area[l] = s1 * s2` up to the frame's cross product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeightSolution {
    pub s1: Vec<Scalar>,
    pub s2: Vec<Scalar>,
    pub area: Vec<Scalar>,
}

impl HeightSolution {
    pub fn total_area(&self) -> Scalar {
        self.area.iter().fold(Scalar::zero(), |acc, a| acc + a)
    }

    /// Height of the `x`-cylinder through cell `c` (0-based).
    pub fn x_height(&self, c: usize) -> &Scalar {
        &self.s2[c]
    }

    /// Height of the `y`-cylinder through cell `c` (0-based).
    pub fn y_height(&self, c: usize) -> &Scalar {
        &self.s1[c]
    }
}

impl ExtendedOrigami {
    /// Propagates side lengths from cell 1 across all gluings.
    ///
    /// Crossing an `x`-edge keeps the `u2`-side and crossing a `y`-edge keeps
    /// the `u1`-side; the moduli determine the other side. A disagreement on
    /// revisiting a cell is returned as a closed walk with `K != 1`.
    pub fn solve_heights(&self) -> Result<HeightSolution> {
        let n = self.n();
        let mut s1: Vec<Option<Scalar>> = vec![None; n];
        let mut s2: Vec<Option<Scalar>> = vec![None; n];
        let mut path: Vec<Option<Word>> = vec![None; 2 * n];
        let base = SignedIndex::pos(1).idx();
        s1[0] = Some(Scalar::one());
        s2[0] = Some(self.moduli()[0].clone());
        path[base] = Some(Word::empty());
        let mut queue = VecDeque::from([base]);
        while let Some(i) = queue.pop_front() {
            let c = cell_of(i);
            let (a1, a2) = (s1[c].clone().expect("visited"), s2[c].clone().expect("visited"));
            for l in Letter::ALL {
                let j = self.apply_letter(l, i);
                let d = cell_of(j);
                let m = self.modulus_of(j);
                let (b1, b2) = match l {
                    Letter::X | Letter::XInv => (&a2 / m, a2.clone()),
                    Letter::Y | Letter::YInv => (a1.clone(), m * &a1),
                };
                let mut w = path[i].clone().expect("visited");
                w.push(l);
                match (&s1[d], &s2[d]) {
                    (Some(o1), Some(o2)) => {
                        if *o1 != b1 || *o2 != b2 {
                            let back = path[j]
                                .clone()
                                .or_else(|| path[super::neg(j)].clone().map(|p| p.gamma_minus_i()))
                                .expect("visited cell has a path");
                            let walk = w.concat(&back.inverse());
                            let product = self.k_cocycle(SignedIndex::pos(1), &walk);
                            return Err(Error::Inconsistent { word: walk.to_string(), product: product.to_string() });
                        }
                        if path[j].is_none() {
                            path[j] = Some(w);
                            queue.push_back(j);
                        }
                    }
                    _ => {
                        s1[d] = Some(b1);
                        s2[d] = Some(b2);
                        path[j] = Some(w);
                        queue.push_back(j);
                    }
                }
            }
        }
        if let Some(c) = s1.iter().position(Option::is_none) {
            return Err(Error::Invalid(format!("cell {} is not reachable from cell 1", c + 1)));
        }
        let s1: Vec<Scalar> = s1.into_iter().map(Option::unwrap).collect();
        let s2: Vec<Scalar> = s2.into_iter().map(Option::unwrap).collect();
        let area = s1.iter().zip(&s2).map(|(a, b)| a * b).collect();
        Ok(HeightSolution { s1, s2, area })
    }
}
