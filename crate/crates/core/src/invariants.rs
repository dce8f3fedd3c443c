//! Invariants of an extended origami: commutator vertices, cone orders,
//! genus, cylinder spectra and the double cover.

use std::cmp::Reverse;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::origami::{cell_of, format_idx_cycles, neg, ExtendedOrigami, SignedPerm};

/// The commutator `x y x^-1 y^-1`, applied left to right.
pub fn commutator(o: &ExtendedOrigami) -> SignedPerm {
    o.x().then(o.y()).then(&o.x().inverse()).then(&o.y().inverse())
}

/// Cycles of the commutator on signed cells; each cycle starts at its
/// least dense index and cycles are ordered by that index.
pub fn commutator_cycles(o: &ExtendedOrigami) -> Vec<Vec<usize>> {
    commutator(o).cycles()
}

/// The deck-involution partner `x^-1(y^-1(-i))` of a signed cell, whose
/// commutator cycle is the other lift of the same vertex.
pub fn partner(o: &ExtendedOrigami, i: usize) -> usize {
    o.x().apply_inv(o.y().apply_inv(neg(i)))
}

/// A vertex of the surface: one commutator cycle (a branch point of the
/// double cover) or a pair of cycles exchanged by the deck involution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexClass {
    pub cycles: Vec<Vec<usize>>,
    pub self_paired: bool,
    /// Cone angle in units of pi.
    pub angle_pi: u32,
    /// Order of the quadratic differential at the point.
    pub order: i32,
}

impl VertexClass {
    pub fn contains(&self, i: usize) -> bool {
        self.cycles.iter().any(|c| c.contains(&i))
    }

    pub fn cycle_len(&self) -> usize {
        self.cycles[0].len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cycles": format_idx_cycles(&self.cycles),
            "branch": self.self_paired,
            "angle_pi": self.angle_pi,
            "order": self.order,
        })
    }
}

/// Groups commutator cycles into vertex classes, ordered by least element.
pub fn vertex_classes(o: &ExtendedOrigami) -> Result<Vec<VertexClass>> {
    let cycles = commutator_cycles(o);
    let mut owner = vec![usize::MAX; 2 * o.n()];
    for (k, c) in cycles.iter().enumerate() {
        for &i in c {
            owner[i] = k;
        }
    }
    let mut used = vec![false; cycles.len()];
    let mut out = Vec::new();
    for (k, c) in cycles.iter().enumerate() {
        if used[k] {
            continue;
        }
        let p = owner[partner(o, c[0])];
        if cycles[p].len() != c.len() || c.iter().any(|&i| owner[partner(o, i)] != p) {
            return Err(Error::Invalid(format!(
                "deck pairing of commutator cycle {} is not consistent",
                format_idx_cycles(std::slice::from_ref(c))
            )));
        }
        used[k] = true;
        used[p] = true;
        let len = c.len() as u32;
        let class = if p == k {
            VertexClass { cycles: vec![c.clone()], self_paired: true, angle_pi: len, order: len as i32 - 2 }
        } else {
            VertexClass {
                cycles: vec![c.clone(), cycles[p].clone()],
                self_paired: false,
                angle_pi: 2 * len,
                order: 2 * len as i32 - 2,
            }
        };
        out.push(class);
    }
    Ok(out)
}

/// Index into `classes` of the class containing signed cell `i`.
pub fn class_of(classes: &[VertexClass], i: usize) -> usize {
    classes.iter().position(|c| c.contains(i)).expect("every signed cell lies on a commutator cycle")
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceType {
    pub genus: u32,
    pub punctures: usize,
    /// Orders at all vertex classes, ascending.
    pub orders: Vec<i32>,
}

/// Genus from `sum of orders = 4g - 4`, cross-checked against the Euler
/// characteristic `V - E + F` with `E = 2N`, `F = N`; every vertex is punctured.
pub fn surface_type(o: &ExtendedOrigami) -> Result<SurfaceType> {
    let classes = vertex_classes(o)?;
    let mut orders: Vec<i32> = classes.iter().map(|c| c.order).collect();
    orders.sort_unstable();
    let sum: i32 = orders.iter().sum();
    let chi = classes.len() as i32 - o.n() as i32;
    if (sum + 4) % 4 != 0 || sum + 4 < 0 || (sum + 4) / 2 != 2 - chi {
        return Err(Error::Invalid(format!("orders sum to {sum} but the Euler characteristic is {chi}")));
    }
    Ok(SurfaceType { genus: ((sum + 4) / 4) as u32, punctures: classes.len(), orders })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Y,
}

/// Cylinders of one direction, moduli scaled so the largest is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylinderSpectrum {
    pub axis: Axis,
    /// Cells of each cylinder (0-based), in the cylinder order.
    pub cylinders: Vec<Vec<usize>>,
    /// Projective moduli, descending.
    pub moduli: Vec<Scalar>,
}

impl CylinderSpectrum {
    pub fn count(&self) -> usize {
        self.moduli.len()
    }
}

/// Scales a list so its maximum is 1 and sorts it descending.
pub fn projective_sorted(values: &[Scalar]) -> Vec<Scalar> {
    let mut v: Vec<Scalar> = values.to_vec();
    v.sort_by_key(|s| Reverse(s.clone()));
    match v.first().cloned() {
        Some(top) if !top.is_zero() => v.iter().map(|s| s / &top).collect(),
        _ => v,
    }
}

/// Moduli (height / circumference) of the cylinders along one axis.
pub fn cylinder_spectrum(o: &ExtendedOrigami, axis: Axis) -> Result<CylinderSpectrum> {
    let o = if o.is_sign_normal() { o.clone() } else { o.normalize_signs()? };
    let h = o.solve_heights()?;
    let perm = match axis {
        Axis::X => o.x(),
        Axis::Y => o.y(),
    };
    let mut cylinders = Vec::new();
    let mut raw = Vec::new();
    for c in perm.cycles() {
        if c[0] % 2 == 1 {
            continue;
        }
        let cells: Vec<usize> = c.iter().map(|&i| cell_of(i)).collect();
        let (height, circ) = match axis {
            Axis::X => (h.s2[cells[0]].clone(), cells.iter().fold(Scalar::zero(), |a, &k| a + &h.s1[k])),
            Axis::Y => (h.s1[cells[0]].clone(), cells.iter().fold(Scalar::zero(), |a, &k| a + &h.s2[k])),
        };
        raw.push(height / circ);
        cylinders.push(cells);
    }
    Ok(CylinderSpectrum { axis, cylinders, moduli: projective_sorted(&raw) })
}

/// An ordinary origami: right and top neighbours of each square (0-based).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Origami {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl Origami {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut inv_x = vec![0; n];
        let mut inv_y = vec![0; n];
        for i in 0..n {
            inv_x[self.x[i]] = i;
            inv_y[self.y[i]] = i;
        }
        while let Some(i) = stack.pop() {
            for j in [self.x[i], self.y[i], inv_x[i], inv_y[i]] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Cycle lengths of the commutator `x y x^-1 y^-1` (left to right).
    pub fn commutator_cycle_lengths(&self) -> Vec<usize> {
        let n = self.n();
        let mut inv_x = vec![0; n];
        let mut inv_y = vec![0; n];
        for i in 0..n {
            inv_x[self.x[i]] = i;
            inv_y[self.y[i]] = i;
        }
        let c: Vec<usize> = (0..n).map(|i| inv_y[inv_x[self.y[self.x[i]]]]).collect();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = c[i];
                len += 1;
            }
            if len > 0 {
                lens.push(len);
            }
        }
        lens
    }

    /// Genus of the closed translation surface.
    pub fn genus(&self) -> usize {
        let excess: usize = self.commutator_cycle_lengths().iter().map(|l| l - 1).sum();
        excess / 2 + 1
    }
}

/// The orientation double cover as an ordinary origami on signed cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoubleCover {
    /// Square `i` is the dense signed index `i`; `x`, `y` act unchanged.
    pub cover: Origami,
    pub connected: bool,
    /// For a disconnected cover, the sheet through the positive cells.
    pub sheet: Option<Origami>,
}

pub fn double_cover(o: &ExtendedOrigami) -> DoubleCover {
    let cover = Origami { x: o.x().images().to_vec(), y: o.y().images().to_vec() };
    let connected = cover.is_connected();
    let sheet = (o.is_abelian() && o.is_sign_normal()).then(|| Origami {
        x: (0..o.n()).map(|c| cell_of(o.x().apply(2 * c))).collect(),
        y: (0..o.n()).map(|c| cell_of(o.y().apply(2 * c))).collect(),
    });
    DoubleCover { cover, connected, sheet }
}

/// JSON summary of the invariants.
pub fn invariants_report(o: &ExtendedOrigami) -> Result<Value> {
    let t = surface_type(o)?;
    let classes = vertex_classes(o)?;
    let sx = cylinder_spectrum(o, Axis::X)?;
    let sy = cylinder_spectrum(o, Axis::Y)?;
    let strs = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "cells": o.n(),
        "genus": t.genus,
        "punctures": t.punctures,
        "orders": t.orders,
        "abelian": o.is_abelian(),
        "spectra": { "x": strs(&sx.moduli), "y": strs(&sy.moduli) },
        "vertex_classes": classes.iter().map(VertexClass::to_json).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::SignedIndex;

    fn o1() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, 5, -6, -4], vec![2, -3]]).unwrap()
    }

    fn o2() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(2, &[vec![1, 2]], &[vec![1, -2]]).unwrap()
    }

    fn o3() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(1, &[], &[]).unwrap()
    }

    fn o4() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(4, &[vec![1, 2, 3]], &[vec![1, 4]]).unwrap()
    }

    fn ints(cycles: &[Vec<usize>]) -> Vec<Vec<i64>> {
        cycles.iter().map(|c| c.iter().map(|&i| SignedIndex::from_idx(i).to_int()).collect()).collect()
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(ints(&commutator_cycles(&o2())), vec![vec![1], vec![-1], vec![2], vec![-2]]);
        assert_eq!(ints(&commutator_cycles(&o3())), vec![vec![1], vec![-1]]);
        let c1 = ints(&commutator_cycles(&o1()));
        assert!(c1.contains(&vec![1, -6, -5, 3, 4]));
        let mut fixed: Vec<i64> = c1.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        fixed.sort();
        assert_eq!(fixed, vec![-4, -3, -2, -1, 2, 5, 6]);
    }

    #[test]
    fn vertex_class_examples() {
        let v2 = vertex_classes(&o2()).unwrap();
        assert_eq!(v2.len(), 4);
        assert!(v2.iter().all(|c| c.self_paired && c.order == -1));

        let v1 = vertex_classes(&o1()).unwrap();
        let mut summary: Vec<(bool, usize, i32)> =
            v1.iter().map(|c| (c.self_paired, c.cycle_len(), c.order)).collect();
        summary.sort();
        assert_eq!(summary, vec![(false, 1, 0), (false, 1, 0), (true, 1, -1), (true, 1, -1), (true, 1, -1), (true, 5, 3)]);

        let v3 = vertex_classes(&o3()).unwrap();
        assert_eq!(v3.len(), 1);
        assert!(!v3[0].self_paired);
        assert_eq!(v3[0].order, 0);
    }

    #[test]
    fn surface_types() {
        let t1 = surface_type(&o1()).unwrap();
        assert_eq!((t1.genus, t1.punctures), (1, 6));
        assert_eq!(t1.orders, vec![-1, -1, -1, 0, 0, 3]);
        let t4 = surface_type(&o4()).unwrap();
        assert_eq!((t4.genus, t4.punctures), (2, 2));
        let t2 = surface_type(&o2()).unwrap();
        assert_eq!((t2.genus, t2.punctures), (0, 4));
    }

    #[test]
    fn cylinder_spectra() {
        let s = cylinder_spectrum(&o1(), Axis::X).unwrap();
        assert_eq!(s.moduli, vec![Scalar::one(), Scalar::one(), Scalar::from_frac(1, 4)]);
        let t = cylinder_spectrum(&o3(), Axis::Y).unwrap();
        assert_eq!(t.moduli, vec![Scalar::one()]);
    }

    #[test]
    fn double_covers() {
        let d3 = double_cover(&o3());
        assert!(!d3.connected);
        assert_eq!(d3.sheet.as_ref().unwrap().n(), 1);
        let d2 = double_cover(&o2());
        assert!(d2.connected);
        assert_eq!(d2.cover.genus(), 1);
        let d1 = double_cover(&o1());
        assert!(d1.connected);
        assert_eq!(d1.cover.n(), 12);
    }

    #[test]
    fn partner_is_involution_on_cycles() {
        for o in [o1(), o2(), o3(), o4()] {
            let cycles = commutator_cycles(&o);
            let owner = |i: usize| cycles.iter().position(|c| c.contains(&i)).unwrap();
            for i in 0..2 * o.n() {
                assert_eq!(owner(partner(&o, partner(&o, i))), owner(i));
            }
        }
    }
}
