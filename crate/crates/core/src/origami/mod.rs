//! Extended origamis: projective moduli plus signed permutations `x`, `y`.

mod heights;
mod schreier;
mod signed;
mod word;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Scalar;

pub use heights::HeightSolution;
pub use schreier::{stabilizer, Action, SchreierData};
pub use signed::{cell_of, format_cycles, format_idx_cycles, neg, SignedIndex, SignedPerm};
pub use word::{Letter, Word};

/// An extended origami on cells `1..=N`.
///
/// `x` maps a signed cell to its neighbour along the first direction and
/// `y` to its neighbour along the second; the sign records whether the
/// neighbour's chart is rotated by pi relative to the current one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtendedOrigami {
    moduli: Vec<Scalar>,
    x: SignedPerm,
    y: SignedPerm,
}

/// The axioms checked by [`ExtendedOrigami::validate`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    Equivariance,
    NonBranching,
    Connectivity,
    Positivity,
    Consistency,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Equivariance => "equivariance",
            Axiom::NonBranching => "non-branching",
            Axiom::Connectivity => "connectivity",
            Axiom::Positivity => "positivity",
            Axiom::Consistency => "consistency",
        };
        f.write_str(s)
    }
}

/// Outcome of every axiom, with a witness for each failure.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub results: Vec<(Axiom, std::result::Result<(), String>)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.results.iter().all(|(_, r)| r.is_ok())
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&str> {
        self.results
            .iter()
            .find(|(a, _)| *a == axiom)
            .and_then(|(_, r)| r.as_ref().err().map(String::as_str))
    }

    pub fn failures(&self) -> Vec<(Axiom, String)> {
        self.results
            .iter()
            .filter_map(|(a, r)| r.as_ref().err().map(|e| (*a, e.clone())))
            .collect()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failures().first() {
            None => Ok(()),
            Some((a, w)) => Err(Error::Invalid(format!("{a} fails: {w}"))),
        }
    }
}

impl ExtendedOrigami {
    /// Assembles an origami after checking sizes only; see [`Self::validate`].
    pub fn new(moduli: Vec<Scalar>, x: SignedPerm, y: SignedPerm) -> Result<Self> {
        let n = moduli.len();
        if n == 0 {
            return Err(Error::Input("an origami needs at least one cell".into()));
        }
        if x.n_cells() != n || y.n_cells() != n {
            return Err(Error::Input(format!(
                "size mismatch: {} moduli, x on {} cells, y on {} cells",
                n,
                x.n_cells(),
                y.n_cells()
            )));
        }
        Ok(ExtendedOrigami { moduli, x, y })
    }

    /// Builds from cycle notation with all moduli equal to 1.
    pub fn from_cycles(n: usize, x: &[Vec<i64>], y: &[Vec<i64>]) -> Result<Self> {
        ExtendedOrigami::new(
            vec![Scalar::one(); n],
            SignedPerm::from_cycles(n, x)?,
            SignedPerm::from_cycles(n, y)?,
        )
    }

    pub fn with_moduli(mut self, moduli: Vec<Scalar>) -> Result<Self> {
        if moduli.len() != self.n() {
            return Err(Error::Input("moduli length differs from cell count".into()));
        }
        self.moduli = moduli;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[Scalar] {
        &self.moduli
    }

    /// Modulus of the cell of a dense signed index.
    pub fn modulus_of(&self, i: usize) -> &Scalar {
        &self.moduli[cell_of(i)]
    }

    pub fn x(&self) -> &SignedPerm {
        &self.x
    }

    pub fn y(&self) -> &SignedPerm {
        &self.y
    }

    pub fn apply_letter(&self, l: Letter, i: usize) -> usize {
        match l {
            Letter::X => self.x.apply(i),
            Letter::XInv => self.x.apply_inv(i),
            Letter::Y => self.y.apply(i),
            Letter::YInv => self.y.apply_inv(i),
        }
    }

    /// Applies the letters of `w` left to right.
    pub fn monodromy(&self, w: &Word, i: usize) -> usize {
        w.letters().iter().fold(i, |j, &l| self.apply_letter(l, j))
    }

    pub fn monodromy_eval(&self, w: &Word, s: SignedIndex) -> SignedIndex {
        SignedIndex::from_idx(self.monodromy(w, s.idx()))
    }

    /// `K_O(i, l)` for a single letter.
    pub fn k_letter(&self, i: usize, l: Letter) -> Scalar {
        let j = self.apply_letter(l, i);
        let (mi, mj) = (self.modulus_of(i), self.modulus_of(j));
        match l {
            Letter::X | Letter::XInv => mi / mj,
            Letter::Y | Letter::YInv => mj / mi,
        }
    }

    /// `K_O(s, w)` by the chain rule along the path of `w`.
    pub fn k_cocycle(&self, s: SignedIndex, w: &Word) -> Scalar {
        let mut k = Scalar::one();
        let mut i = s.idx();
        for &l in w.letters() {
            k = k * self.k_letter(i, l);
            i = self.apply_letter(l, i);
        }
        k
    }

    pub fn validate(&self) -> ValidationReport {
        let mut results = Vec::new();
        let equiv = [("x", &self.x), ("y", &self.y)]
            .iter()
            .find_map(|(name, p)| {
                p.first_equivariance_violation()
                    .map(|i| format!("{name}: neg.{name}.neg differs from {name}^-1 at {}", SignedIndex::from_idx(i)))
            });
        results.push((Axiom::Equivariance, equiv.map_or(Ok(()), Err)));

        let branch = (0..2 * self.n()).find(|&i| self.y.apply(i) == neg(i));
        results.push((
            Axiom::NonBranching,
            branch.map_or(Ok(()), |i| Err(format!("y({0}) = -{0}", SignedIndex::from_idx(i)))),
        ));

        let reach = self.reachable_cells();
        let missing = (0..self.n()).find(|&c| !reach[c]);
        results.push((
            Axiom::Connectivity,
            missing.map_or(Ok(()), |c| Err(format!("cell {} is not reachable from cell 1", c + 1))),
        ));

        let nonpos = self.moduli.iter().position(|m| !m.is_positive());
        results.push((
            Axiom::Positivity,
            nonpos.map_or(Ok(()), |c| Err(format!("M_{} = {} is not positive", c + 1, self.moduli[c]))),
        ));

        let cons = if nonpos.is_none() && missing.is_none() {
            match self.solve_heights() {
                Ok(_) => Ok(()),
                Err(e) => Err(e.to_string()),
            }
        } else {
            Err("not checked".to_string())
        };
        results.push((Axiom::Consistency, cons));
        ValidationReport { results }
    }

    fn reachable_cells(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for l in Letter::ALL {
                let j = self.apply_letter(l, i);
                if !seen[cell_of(j)] {
                    seen[cell_of(j)] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }

    /// True iff `y` preserves signs (for sign-normal origamis: the quadratic
    /// differential is a global square).
    pub fn is_abelian(&self) -> bool {
        self.y.preserves_signs()
    }

    pub fn is_sign_normal(&self) -> bool {
        self.x.preserves_signs()
    }

    /// Relabels by a negation-commuting bijection `sigma` of signed cells:
    /// the result has `x' = sigma x sigma^-1` and `M'_{sigma(l)} = M_l`.
    pub fn relabel(&self, sigma: &SignedPerm) -> ExtendedOrigami {
        assert!(sigma.commutes_with_neg(), "relabelling must commute with negation");
        let mut moduli = vec![Scalar::zero(); self.n()];
        for c in 0..self.n() {
            moduli[cell_of(sigma.apply(2 * c))] = self.moduli[c].clone();
        }
        ExtendedOrigami { moduli, x: self.x.conjugate(sigma), y: self.y.conjugate(sigma) }
    }

    /// Flips signs cylinder by cylinder so that `x` preserves signs.
    ///
    /// Cells are visited in increasing order; the `x`-orbit through the
    /// positive copy of the first unvisited cell is declared positive.
    pub fn normalize_signs(&self) -> Result<ExtendedOrigami> {
        Ok(self.relabel(&self.sign_normalizer()?))
    }

    /// The sign flip used by [`ExtendedOrigami::normalize_signs`].
    pub fn sign_normalizer(&self) -> Result<SignedPerm> {
        let size = 2 * self.n();
        let mut flip = vec![false; self.n()];
        let mut done = vec![false; size];
        for c in 0..self.n() {
            let start = 2 * c;
            if done[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut i = start;
            loop {
                orbit.push(i);
                i = self.x.apply(i);
                if i == start {
                    break;
                }
            }
            if orbit.contains(&neg(start)) {
                return Err(Error::SignNormalization(SignedIndex::from_idx(start).to_string()));
            }
            for &j in &orbit {
                done[j] = true;
                done[neg(j)] = true;
                flip[cell_of(j)] = j % 2 == 1;
            }
        }
        let img = (0..size).map(|i| if flip[cell_of(i)] { neg(i) } else { i }).collect();
        Ok(SignedPerm::from_images(img).expect("sign flip is a bijection"))
    }

    /// Cycle notation for `x` and `y` (one cycle of each companion pair).
    pub fn x_cycles(&self) -> Vec<Vec<i64>> {
        self.x.half_cycles()
    }

    pub fn y_cycles(&self) -> Vec<Vec<i64>> {
        self.y.half_cycles()
    }
}

impl fmt::Display for ExtendedOrigami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.moduli.iter().map(|s| s.to_string()).collect();
        write!(
            f,
            "N={} M=[{}] x={} y={}",
            self.n(),
            m.join(", "),
            format_cycles(&self.x_cycles()),
            format_cycles(&self.y_cycles())
        )
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn o1() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4], vec![5], vec![6]], &[vec![1, 5, -6, -4], vec![2, -3]])
            .unwrap()
    }

    pub fn o2() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(2, &[vec![1, 2]], &[vec![1, -2]]).unwrap()
    }

    pub fn o3() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(1, &[], &[]).unwrap()
    }

    pub fn o4() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(4, &[vec![1, 2, 3]], &[vec![1, 4]]).unwrap()
    }

    fn s(v: i64) -> SignedIndex {
        SignedIndex::from_int(v).unwrap()
    }

    #[test]
    fn example_origamis_validate() {
        for o in [o1(), o2(), o3(), o4()] {
            let r = o.validate();
            assert!(r.is_valid(), "{o}: {:?}", r.failures());
        }
    }

    #[test]
    fn branching_is_reported_with_witness() {
        let o = ExtendedOrigami::from_cycles(1, &[], &[vec![1, -1]]).unwrap();
        let r = o.validate();
        assert_eq!(r.failure(Axiom::NonBranching), Some("y(1) = -1"));
    }

    #[test]
    fn disconnected_is_reported() {
        let o = ExtendedOrigami::from_cycles(2, &[], &[]).unwrap();
        assert!(o.validate().failure(Axiom::Connectivity).is_some());
    }

    #[test]
    fn monodromy_examples() {
        assert_eq!(o1().monodromy_eval(&Word::empty(), s(3)), s(3));
        assert_eq!(o1().monodromy_eval(&Word::parse("x").unwrap(), s(1)), s(2));
        assert_eq!(o2().monodromy_eval(&Word::parse("y").unwrap(), s(1)), s(-2));
    }

    #[test]
    fn cocycle_examples() {
        let o = o1();
        assert_eq!(o.k_cocycle(s(1), &Word::empty()), Scalar::one());
        assert_eq!(o.k_cocycle(s(2), &Word::parse("xyXYxx").unwrap()), Scalar::one());
        let op = ExtendedOrigami::from_cycles(2, &[vec![1, 2]], &[])
            .unwrap()
            .with_moduli(vec![Scalar::one(), Scalar::from_int(2)])
            .unwrap();
        assert_eq!(op.k_cocycle(s(1), &Word::parse("x").unwrap()), Scalar::from_frac(1, 2));
    }

    #[test]
    fn abelian_flags() {
        assert!(o3().is_abelian());
        assert!(!o2().is_abelian());
        assert!(o4().is_abelian());
        assert!(!o1().is_abelian());
    }

    #[test]
    fn normalize_signs_examples() {
        let o = o1();
        assert_eq!(o.normalize_signs().unwrap(), o);
        let flipped6 = ExtendedOrigami::from_cycles(
            6,
            &[vec![1, 2, 3, 4], vec![5], vec![6]],
            &[vec![1, 5, 6, -4], vec![2, -3]],
        )
        .unwrap();
        assert!(flipped6.validate().is_valid());
        assert_eq!(flipped6.normalize_signs().unwrap(), flipped6);
        let sigma = SignedPerm::from_cycles(6, &[vec![6, -6]]).unwrap();
        assert_eq!(o.relabel(&sigma), flipped6);

        let all = SignedPerm::from_images((0..12).map(neg).collect()).unwrap();
        let o_neg = o.relabel(&all);
        assert_eq!(o_neg.x(), &o.x().inverse());
        assert_eq!(o_neg.normalize_signs().unwrap(), o_neg);
    }

    #[test]
    fn normalize_makes_x_sign_preserving() {
        let o = ExtendedOrigami::from_cycles(2, &[vec![1, -2]], &[vec![1], vec![2]]).unwrap();
        assert!(!o.is_sign_normal());
        let n = o.normalize_signs().unwrap();
        assert!(n.is_sign_normal());
        assert_eq!(n.normalize_signs().unwrap(), n);
        let bad = ExtendedOrigami::from_cycles(1, &[vec![1, -1]], &[]).unwrap();
        assert!(bad.normalize_signs().is_err());
    }
}
