//! Orbits, coset tables and Schreier generators for the free-group action.

use std::collections::VecDeque;

use super::{cell_of, ExtendedOrigami, Letter, Word};
use crate::error::{Error, Result};

/// Which set the free group acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Action {
    /// Signed cells (dense indices).
    Signed,
    /// Cells, via the sign-forgetting action; needs `x`, `y` sign-preserving.
    Cells,
}

/// Orbit of a base point with a transversal and stabilizer generators.
#[derive(Clone, Debug)]
pub struct SchreierData {
    pub action: Action,
    pub base: usize,
    /// Orbit points in breadth-first order.
    pub orbit: Vec<usize>,
    /// `transversal[k]` carries `base` to `orbit[k]`.
    pub transversal: Vec<Word>,
    /// Nontrivial Schreier generators `t_u g t_{ug}^-1`, `g` in `{x, y}`.
    pub generators: Vec<Word>,
}

impl SchreierData {
    pub fn index(&self) -> usize {
        self.orbit.len()
    }

    /// Number of distinct cells met by the orbit.
    pub fn cells_covered(&self) -> usize {
        let mut cells: Vec<usize> = match self.action {
            Action::Signed => self.orbit.iter().map(|&i| cell_of(i)).collect(),
            Action::Cells => self.orbit.clone(),
        };
        cells.sort_unstable();
        cells.dedup();
        cells.len()
    }
}

fn step(o: &ExtendedOrigami, action: Action, l: Letter, p: usize) -> usize {
    match action {
        Action::Signed => o.apply_letter(l, p),
        Action::Cells => cell_of(o.apply_letter(l, 2 * p)),
    }
}

/// Breadth-first coset enumeration from `base` (a dense signed index for
/// [`Action::Signed`], a 0-based cell for [`Action::Cells`]).
pub fn stabilizer(o: &ExtendedOrigami, base: usize, action: Action) -> Result<SchreierData> {
    let size = match action {
        Action::Signed => 2 * o.n(),
        Action::Cells => {
            if !(o.x().preserves_signs() && o.y().preserves_signs()) {
                return Err(Error::Input("the cell action needs sign-preserving x and y".into()));
            }
            o.n()
        }
    };
    if base >= size {
        return Err(Error::Input(format!("base point {base} out of range")));
    }
    let mut pos: Vec<Option<usize>> = vec![None; size];
    let mut orbit = vec![base];
    let mut transversal = vec![Word::empty()];
    pos[base] = Some(0);
    let mut queue = VecDeque::from([base]);
    while let Some(p) = queue.pop_front() {
        let tp = transversal[pos[p].expect("queued")].clone();
        for l in Letter::ALL {
            let q = step(o, action, l, p);
            if pos[q].is_none() {
                pos[q] = Some(orbit.len());
                orbit.push(q);
                let mut w = tp.clone();
                w.push(l);
                transversal.push(w);
                queue.push_back(q);
            }
        }
    }
    let mut generators = Vec::new();
    for (k, &p) in orbit.iter().enumerate() {
        for l in [Letter::X, Letter::Y] {
            let q = step(o, action, l, p);
            let mut w = transversal[k].clone();
            w.push(l);
            let g = w.concat(&transversal[pos[q].expect("orbit closed")].inverse());
            if !g.is_empty() {
                generators.push(g);
            }
        }
    }
    Ok(SchreierData { action, base, orbit, transversal, generators })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{o1, o2, o3};
    use super::super::SignedIndex;
    use super::*;

    #[test]
    fn trivial_torus() {
        let d = stabilizer(&o3(), 0, Action::Cells).unwrap();
        assert_eq!(d.index(), 1);
        assert_eq!(d.generators, vec![Word::parse("x").unwrap(), Word::parse("y").unwrap()]);
    }

    #[test]
    fn pillowcase_signed_orbit() {
        let o = o2();
        let d = stabilizer(&o, 0, Action::Signed).unwrap();
        let mut orbit: Vec<i64> = d.orbit.iter().map(|&i| SignedIndex::from_idx(i).to_int()).collect();
        orbit.sort();
        assert_eq!(orbit, vec![-2, -1, 1, 2]);
        assert_eq!(d.generators.len(), 5);
        for g in &d.generators {
            assert_eq!(o.monodromy(g, 0), 0, "{g}");
        }
        for (k, t) in d.transversal.iter().enumerate() {
            assert_eq!(o.monodromy(t, 0), d.orbit[k]);
        }
    }

    #[test]
    fn six_cell_orbit_covers_all_cells() {
        let d = stabilizer(&o1(), 0, Action::Signed).unwrap();
        assert_eq!(d.cells_covered(), 6);
        assert_eq!(d.index(), 12);
        assert_eq!(d.generators.len(), 13);
        assert!(stabilizer(&o1(), 0, Action::Cells).is_err());
    }
}
