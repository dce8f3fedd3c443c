//! Signed cells and permutations of `Lambda x {+1,-1}` commuting with negation.

use std::fmt;

use crate::error::{Error, Result};

/// A signed cell `lambda` or `lambda^-`; cells are numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedIndex {
    pub cell: usize,
    pub positive: bool,
}

impl SignedIndex {
    pub fn new(cell: usize, positive: bool) -> Self {
        assert!(cell >= 1, "cells are numbered from 1");
        SignedIndex { cell, positive }
    }

    pub fn pos(cell: usize) -> Self {
        SignedIndex::new(cell, true)
    }

    pub fn negative(cell: usize) -> Self {
        SignedIndex::new(cell, false)
    }

    /// Parses the integer notation `k` / `-k`.
    pub fn from_int(v: i64) -> Option<Self> {
        (v != 0).then(|| SignedIndex::new(v.unsigned_abs() as usize, v > 0))
    }

    pub fn to_int(self) -> i64 {
        let c = self.cell as i64;
        if self.positive {
            c
        } else {
            -c
        }
    }

    pub fn neg(self) -> Self {
        SignedIndex { cell: self.cell, positive: !self.positive }
    }

    /// Dense index `2(cell-1) + [negative]`; negation flips the low bit.
    pub fn idx(self) -> usize {
        2 * (self.cell - 1) + usize::from(!self.positive)
    }

    pub fn from_idx(i: usize) -> Self {
        SignedIndex { cell: i / 2 + 1, positive: i % 2 == 0 }
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.cell)
        } else {
            write!(f, "{}-", self.cell)
        }
    }
}

/// Negation on dense indices.
#[inline]
pub fn neg(i: usize) -> usize {
    i ^ 1
}

/// Cell (0-based) of a dense index.
#[inline]
pub fn cell_of(i: usize) -> usize {
    i / 2
}

/// A bijection of the `2N` signed cells, stored on dense indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedPerm {
    img: Vec<usize>,
    inv: Vec<usize>,
}

impl SignedPerm {
    /// Builds a permutation from its image table; fails unless bijective.
    pub fn from_images(img: Vec<usize>) -> Result<Self> {
        let n = img.len();
        if n % 2 != 0 {
            return Err(Error::Input("signed permutation needs an even number of points".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for (i, &j) in img.iter().enumerate() {
            if j >= n || inv[j] != usize::MAX {
                return Err(Error::Input(format!(
                    "not a bijection: {} has a repeated or out-of-range preimage",
                    SignedIndex::from_idx(j.min(n.saturating_sub(1)))
                )));
            }
            inv[j] = i;
        }
        Ok(SignedPerm { img, inv })
    }

    pub fn identity(n_cells: usize) -> Self {
        let img: Vec<usize> = (0..2 * n_cells).collect();
        SignedPerm { inv: img.clone(), img }
    }

    /// Builds a permutation from cycles in integer notation.
    ///
    /// Each cycle `(a1 ... ak)` also implies its companion `(-ak ... -a1)`, so
    /// listing one of each pair is enough; elements not mentioned are fixed.
    pub fn from_cycles(n_cells: usize, cycles: &[Vec<i64>]) -> Result<Self> {
        let size = 2 * n_cells;
        let mut img: Vec<Option<usize>> = vec![None; size];
        let mut set = |from: usize, to: usize| -> Result<()> {
            match img[from] {
                Some(t) if t != to => Err(Error::Input(format!(
                    "cycle notation is inconsistent at {}: images {} and {}",
                    SignedIndex::from_idx(from),
                    SignedIndex::from_idx(t),
                    SignedIndex::from_idx(to)
                ))),
                _ => {
                    img[from] = Some(to);
                    Ok(())
                }
            }
        };
        for cycle in cycles {
            let mut elems = Vec::with_capacity(cycle.len());
            for &v in cycle {
                let s = SignedIndex::from_int(v)
                    .filter(|s| s.cell <= n_cells)
                    .ok_or_else(|| Error::Input(format!("cycle entry {v} is not a signed cell in 1..={n_cells}")))?;
                elems.push(s.idx());
            }
            let k = elems.len();
            for i in 0..k {
                let (a, b) = (elems[i], elems[(i + 1) % k]);
                set(a, b)?;
                set(neg(b), neg(a))?;
            }
        }
        let img: Vec<usize> = img.iter().enumerate().map(|(i, t)| t.unwrap_or(i)).collect();
        SignedPerm::from_images(img)
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    pub fn n_cells(&self) -> usize {
        self.img.len() / 2
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i]
    }

    #[inline]
    pub fn apply_inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn apply_signed(&self, s: SignedIndex) -> SignedIndex {
        SignedIndex::from_idx(self.img[s.idx()])
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn inverse(&self) -> SignedPerm {
        SignedPerm { img: self.inv.clone(), inv: self.img.clone() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &SignedPerm) -> SignedPerm {
        let img = self.img.iter().map(|&j| other.img[j]).collect();
        SignedPerm::from_images(img).expect("composition of bijections")
    }

    /// `sigma^-1 . self . sigma`, i.e. the permutation relabelled by `sigma`.
    pub fn conjugate(&self, sigma: &SignedPerm) -> SignedPerm {
        let mut img = vec![0; self.len()];
        for i in 0..self.len() {
            img[sigma.apply(i)] = sigma.apply(self.apply(i));
        }
        SignedPerm::from_images(img).expect("conjugate of a bijection")
    }

    /// True iff `neg . self . neg = self^-1`.
    pub fn is_neg_equivariant(&self) -> bool {
        self.first_equivariance_violation().is_none()
    }

    pub fn first_equivariance_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.img[neg(self.img[neg(i)])] != i)
    }

    /// True iff `neg . self = self . neg`.
    pub fn commutes_with_neg(&self) -> bool {
        (0..self.len()).all(|i| self.img[neg(i)] == neg(self.img[i]))
    }

    pub fn preserves_signs(&self) -> bool {
        (0..self.len()).all(|i| self.img[i] % 2 == i % 2)
    }

    /// All cycles on dense indices, each starting at its least index, in
    /// order of that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.img[i];
            }
            out.push(c);
        }
        out
    }

    /// One cycle from each companion pair `C`, `(-C)^-1`: the one through the
    /// positive copy of its least cell. Integer notation, canonical order.
    pub fn half_cycles(&self) -> Vec<Vec<i64>> {
        self.cycles()
            .into_iter()
            .filter(|c| c[0] % 2 == 0)
            .map(|c| c.into_iter().map(|i| SignedIndex::from_idx(i).to_int()).collect())
            .collect()
    }
}

/// Formats cycles in integer notation as `(1 2 3)(4-)`.
pub fn format_cycles(cycles: &[Vec<i64>]) -> String {
    cycles
        .iter()
        .map(|c| {
            let body: Vec<String> = c
                .iter()
                .map(|&v| if v > 0 { v.to_string() } else { format!("{}-", -v) })
                .collect();
            format!("({})", body.join(" "))
        })
        .collect()
}

/// Formats dense-index cycles.
pub fn format_idx_cycles(cycles: &[Vec<usize>]) -> String {
    let ints: Vec<Vec<i64>> = cycles
        .iter()
        .map(|c| c.iter().map(|&i| SignedIndex::from_idx(i).to_int()).collect())
        .collect();
    format_cycles(&ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_indices() {
        for i in 0..10 {
            assert_eq!(SignedIndex::from_idx(i).idx(), i);
            assert_eq!(SignedIndex::from_idx(neg(i)), SignedIndex::from_idx(i).neg());
        }
        assert_eq!(SignedIndex::from_int(-3).unwrap().idx(), 5);
    }

    #[test]
    fn half_cycle_input_materializes_companions() {
        let y = SignedPerm::from_cycles(6, &[vec![1, 5, -6, -4], vec![2, -3]]).unwrap();
        let s = |v: i64| SignedIndex::from_int(v).unwrap();
        assert_eq!(y.apply_signed(s(1)), s(5));
        assert_eq!(y.apply_signed(s(-4)), s(1));
        assert_eq!(y.apply_signed(s(4)), s(6));
        assert_eq!(y.apply_signed(s(-5)), s(-1));
        assert_eq!(y.apply_signed(s(-3)), s(2));
        assert_eq!(y.apply_signed(s(3)), s(-2));
        assert!(y.is_neg_equivariant());
        assert_eq!(y.half_cycles(), vec![vec![1, 5, -6, -4], vec![2, -3]]);
    }

    #[test]
    fn full_cycle_input_is_accepted() {
        let a = SignedPerm::from_cycles(2, &[vec![1, -2]]).unwrap();
        let b = SignedPerm::from_cycles(2, &[vec![1, -2], vec![2, -1]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inconsistent_cycles_rejected() {
        assert!(SignedPerm::from_cycles(2, &[vec![1, 2, -1, -2]]).is_err());
        assert!(SignedPerm::from_cycles(2, &[vec![1, 3]]).is_err());
        assert!(SignedPerm::from_cycles(2, &[vec![1, 2], vec![1, -2]]).is_err());
    }

    #[test]
    fn formatting() {
        let x = SignedPerm::from_cycles(6, &[vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(format_cycles(&x.half_cycles()), "(1 2 3 4)(5)(6)");
    }
}
