//! Exact planar realization of a P-decomposition on its orientation double
//! cover: `2N` parallelograms glued by translations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{Scalar, Vec2};
use crate::invariants::vertex_classes;
use crate::origami::{cell_of, neg, ExtendedOrigami, Letter};
use crate::pdec::{PDecomposition, PunctureMode};

/// Corner types of a cell, in counter-clockwise order.
pub const BL: usize = 0;
pub const BR: usize = 1;
pub const TR: usize = 2;
pub const TL: usize = 3;

/// Local coordinates `(a, b)` of each corner type.
pub fn corner_coords(k: usize) -> (i64, i64) {
    [(0, 0), (1, 0), (1, 1), (0, 1)][k]
}

/// Corner id `4 * cell + type`.
#[inline]
pub fn corner_id(cell: usize, k: usize) -> usize {
    4 * cell + k
}

/// A point of the double cover: a vertex, or a cell with local coordinates
/// in `[0,1)^2` (left and bottom edges belong to the cell).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point {
    Vertex(usize),
    Regular { cell: usize, a: Scalar, b: Scalar },
}

#[derive(Clone, Debug)]
pub struct VertexInfo {
    /// Corner ids in counter-clockwise order.
    pub corners: Vec<usize>,
    /// The image under the deck involution.
    pub deck: usize,
    /// Order of the quadratic differential at the image point.
    pub order: i32,
    pub singular: bool,
    /// Label of the marked point, if marked.
    pub mark: Option<String>,
}

/// The parallelogram complex of a P-decomposition on the double cover.
#[derive(Clone, Debug)]
pub struct PlanarComplex {
    /// Origami in the positively oriented frame.
    pub origami: ExtendedOrigami,
    pub u1: Vec2,
    pub u2: Vec2,
    /// Side lengths per cell (0-based) in units of `u1`, `u2`.
    pub s1: Vec<Scalar>,
    pub s2: Vec<Scalar>,
    pub vertices: Vec<VertexInfo>,
    pub punctures: PunctureMode,
    vertex_of_corner: Vec<usize>,
    /// Position of each corner within its vertex's list.
    corner_pos: Vec<usize>,
}

/// Sign-based corner type containing a local direction `(alpha, beta)`,
/// for the half-open cones `[e1,e2)`, `[e2,-e1)`, `[-e1,-e2)`, `[-e2,e1)`.
pub fn cone_type(alpha: &Scalar, beta: &Scalar) -> usize {
    let (sa, sb) = (alpha.signum(), beta.signum());
    if sa > 0 && sb >= 0 {
        BL
    } else if sa <= 0 && sb > 0 {
        BR
    } else if sa < 0 && sb <= 0 {
        TR
    } else {
        TL
    }
}

impl PlanarComplex {
    /// Glues the parallelograms of `p` with cell 1 of modulus `k`.
    pub fn realize(p: &PDecomposition) -> Result<PlanarComplex> {
        p.validate()?;
        let p = p.oriented();
        let h = p.origami.solve_heights()?;
        let [u1, u2] = p.frame.clone();
        let field = p.field();
        let t_sq = &p.k_sq * &u1.norm_sq() / u2.norm_sq();
        let t = t_sq.sqrt_exact(field).ok_or_else(|| {
            Error::Geometry(format!("side ratio sqrt({t_sq}) of cell 1 is not in the field"))
        })?;
        let f = &t / &h.s2[0];
        let s2 = h.s2.iter().map(|s| s * &f).collect();
        PlanarComplex::from_sides(p.origami.clone(), u1, u2, h.s1, s2, &p)
    }

    fn from_sides(
        origami: ExtendedOrigami,
        u1: Vec2,
        u2: Vec2,
        s1: Vec<Scalar>,
        s2: Vec<Scalar>,
        p: &PDecomposition,
    ) -> Result<PlanarComplex> {
        let size = 2 * origami.n();
        let mut vertex_of_corner = vec![usize::MAX; 4 * size];
        let mut corner_pos = vec![0; 4 * size];
        let mut corner_lists: Vec<Vec<usize>> = Vec::new();
        let mut cx = PlanarComplex {
            origami,
            u1,
            u2,
            s1,
            s2,
            vertices: Vec::new(),
            punctures: p.punctures,
            vertex_of_corner: Vec::new(),
            corner_pos: Vec::new(),
        };
        for start in 0..4 * size {
            if vertex_of_corner[start] != usize::MAX {
                continue;
            }
            let v = corner_lists.len();
            let mut list = Vec::new();
            let mut k = start;
            loop {
                vertex_of_corner[k] = v;
                corner_pos[k] = list.len();
                list.push(k);
                k = cx.ccw_next_corner(k);
                if k == start {
                    break;
                }
            }
            corner_lists.push(list);
        }
        cx.vertex_of_corner = vertex_of_corner;
        cx.corner_pos = corner_pos;

        let mut marked: HashMap<usize, String> = HashMap::new();
        if !p.marks.is_empty() {
            let classes = vertex_classes(&cx.origami)?;
            for (label, &rep) in p.marks.iter() {
                let class = classes.iter().find(|c| c.contains(rep)).expect("rep lies in a class");
                for &i in class.cycles.iter().flatten() {
                    marked.insert(cx.vertex_of_corner[corner_id(i, TR)], label.clone());
                }
            }
        }
        for (v, corners) in corner_lists.into_iter().enumerate() {
            let c0 = corners[0];
            let (cell, k) = (c0 / 4, c0 % 4);
            let deck = cx.vertex_of_corner[corner_id(neg(cell), (k + 2) % 4)];
            let turns = (corners.len() / 4) as i32;
            let order = if deck == v { turns - 2 } else { 2 * turns - 2 };
            let mark = marked.get(&v).cloned();
            let singular = mark.is_some()
                || match p.punctures {
                    PunctureMode::AllVertices => true,
                    PunctureMode::ConePoints => order != 0,
                };
            cx.vertices.push(VertexInfo { corners, deck, order, singular, mark });
        }
        if !cx.vertices.iter().any(|v| v.singular) {
            return Err(Error::Geometry("no singular or marked points to cut along".into()));
        }
        Ok(cx)
    }

    pub fn n_cells(&self) -> usize {
        2 * self.origami.n()
    }

    /// Edge vectors of a cell of the double cover.
    pub fn e1(&self, cell: usize) -> Vec2 {
        self.u1.scale(&self.s1[cell_of(cell)])
    }

    pub fn e2(&self, cell: usize) -> Vec2 {
        self.u2.scale(&self.s2[cell_of(cell)])
    }

    pub fn neighbor(&self, l: Letter, cell: usize) -> usize {
        self.origami.apply_letter(l, cell)
    }

    /// Counter-clockwise successor of a corner around its vertex.
    pub fn ccw_next_corner(&self, corner: usize) -> usize {
        let (c, k) = (corner / 4, corner % 4);
        match k {
            BL => corner_id(self.neighbor(Letter::XInv, c), BR),
            BR => corner_id(self.neighbor(Letter::YInv, c), TR),
            TR => corner_id(self.neighbor(Letter::X, c), TL),
            _ => corner_id(self.neighbor(Letter::Y, c), BL),
        }
    }

    /// Clockwise neighbour of a corner around its vertex.
    pub fn ccw_prev_corner(&self, corner: usize) -> usize {
        let corners = &self.vertices[self.vertex_of(corner)].corners;
        let pos = self.corner_pos[corner];
        corners[(pos + corners.len() - 1) % corners.len()]
    }

    /// Corner of the first ray in direction `to` met when turning
    /// counter-clockwise from the ray in the cone of `from`; `to` must lie
    /// strictly less than a half turn ahead.
    pub fn ray_ccw_after(&self, from: usize, to: &Vec2) -> usize {
        let k = self.cone_of(to);
        let mut c = from;
        while c % 4 != k {
            c = self.ccw_next_corner(c);
        }
        c
    }

    /// Clockwise analogue of [`PlanarComplex::ray_ccw_after`].
    pub fn ray_cw_after(&self, from: usize, to: &Vec2) -> usize {
        let k = self.cone_of(to);
        let mut c = from;
        while c % 4 != k {
            c = self.ccw_prev_corner(c);
        }
        c
    }

    pub fn vertex_of(&self, corner: usize) -> usize {
        self.vertex_of_corner[corner]
    }

    /// Position of a corner in its vertex's counter-clockwise list.
    pub fn corner_position(&self, corner: usize) -> usize {
        self.corner_pos[corner]
    }

    /// Total area of the quotient surface.
    pub fn area(&self) -> Scalar {
        let frame = self.u1.cross(&self.u2);
        self.s1.iter().zip(&self.s2).fold(Scalar::zero(), |acc, (a, b)| acc + a * b * &frame)
    }

    /// True when every edge vector has rational coordinates.
    pub fn is_rational(&self) -> bool {
        let rat = |v: &Vec2| v.x.is_rational() && v.y.is_rational();
        (0..self.origami.n()).all(|c| rat(&self.e1(2 * c)) && rat(&self.e2(2 * c)))
    }

    /// Reduces local coordinates on the right or top edge to the neighbour.
    pub fn canonical_point(&self, cell: usize, a: Scalar, b: Scalar) -> Point {
        let one = Scalar::one();
        let a_end = a.is_zero() || a == one;
        let b_end = b.is_zero() || b == one;
        if a_end && b_end {
            let k = match (a.is_zero(), b.is_zero()) {
                (true, true) => BL,
                (false, true) => BR,
                (false, false) => TR,
                (true, false) => TL,
            };
            return Point::Vertex(self.vertex_of(corner_id(cell, k)));
        }
        let (mut cell, mut a, mut b) = (cell, a, b);
        if a == one {
            cell = self.neighbor(Letter::X, cell);
            a = Scalar::zero();
        }
        if b == one {
            cell = self.neighbor(Letter::Y, cell);
            b = Scalar::zero();
        }
        Point::Regular { cell, a, b }
    }

    /// Image of a point under the deck involution.
    pub fn deck_point(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.vertices[*v].deck),
            Point::Regular { cell, a, b } => {
                let one = Scalar::one();
                self.canonical_point(neg(*cell), &one - a, &one - b)
            }
        }
    }

    /// Local components `(A, B)` of `v = A u1 + B u2`; in a cell the local
    /// direction is `(A / s1, B / s2)`.
    pub fn frame_components(&self, v: &Vec2) -> (Scalar, Scalar) {
        let det = self.u1.cross(&self.u2);
        (v.cross(&self.u2) / &det, self.u1.cross(v) / &det)
    }

    pub fn local_direction(&self, comps: &(Scalar, Scalar), cell: usize) -> (Scalar, Scalar) {
        (&comps.0 / &self.s1[cell_of(cell)], &comps.1 / &self.s2[cell_of(cell)])
    }

    /// Corner type whose cone contains `v` (the same in every cell).
    pub fn cone_of(&self, v: &Vec2) -> usize {
        let (a, b) = self.frame_components(v);
        cone_type(&a, &b)
    }

    /// Vertex summary for reports.
    pub fn vertex_orders(&self) -> Vec<i32> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for (v, info) in self.vertices.iter().enumerate() {
            if !seen[v] {
                seen[v] = true;
                seen[info.deck] = true;
                out.push(info.order);
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o1() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, 5, -6, -4], vec![2, -3]]).unwrap()
    }

    #[test]
    fn unit_torus() {
        let o = ExtendedOrigami::from_cycles(1, &[], &[]).unwrap();
        let c = PlanarComplex::realize(&PDecomposition::standard(o)).unwrap();
        assert_eq!(c.area(), Scalar::one());
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(c.vertex_orders(), vec![0]);
        assert!(c.is_rational());
    }

    #[test]
    fn six_cell_vertices_match_classes() {
        let c = PlanarComplex::realize(&PDecomposition::standard(o1())).unwrap();
        assert_eq!(c.area(), Scalar::from_int(6));
        assert_eq!(c.vertex_orders(), vec![-1, -1, -1, 0, 0, 3]);
    }

    #[test]
    fn points_are_canonical() {
        let c = PlanarComplex::realize(&PDecomposition::standard(o1())).unwrap();
        let half = Scalar::from_frac(1, 2);
        let p = c.canonical_point(0, Scalar::one(), half.clone());
        assert_eq!(p, Point::Regular { cell: 2, a: Scalar::zero(), b: half.clone() });
        let q = c.canonical_point(0, half.clone(), half.clone());
        assert_eq!(c.deck_point(&c.deck_point(&q)), q);
    }

    #[test]
    fn scale_must_stay_in_field() {
        let o = ExtendedOrigami::from_cycles(1, &[], &[]).unwrap();
        let mut p = PDecomposition::standard(o);
        p.k_sq = Scalar::from_int(2);
        assert!(PlanarComplex::realize(&p).is_err());
    }
}
