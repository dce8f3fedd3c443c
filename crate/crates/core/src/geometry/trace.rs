//! Straight-line flow and separatrix tracing on the double cover.

use super::complex::{corner_coords, corner_id, PlanarComplex, Point, BL, BR, TL, TR};
use crate::exact::{Direction, Scalar, Vec2};
use crate::origami::Letter;

/// A straight piece of a trajectory inside one cell.
#[derive(Clone, Debug)]
pub struct Segment {
    pub cell: usize,
    pub a0: Scalar,
    pub b0: Scalar,
    pub a1: Scalar,
    pub b1: Scalar,
    /// Flow parameter at the start (in units of the direction vector).
    pub t0: Scalar,
    pub dt: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEnd {
    /// Reached a singular vertex; the ray back along the trace leaves from
    /// this corner.
    Vertex { vertex: usize, arrival_corner: usize },
    BudgetExceeded,
}

/// A separatrix in direction `v` from a singular vertex.
#[derive(Clone, Debug)]
pub struct SeparatrixTrace {
    pub start_corner: usize,
    pub segments: Vec<Segment>,
    /// Regular vertices passed on the way, with their flow parameter.
    pub pass_through: Vec<(usize, Scalar)>,
    pub end: TraceEnd,
    /// Total flow parameter; meaningful when the trace ended at a vertex.
    pub length: Scalar,
}

impl SeparatrixTrace {
    pub fn is_saddle_connection(&self) -> bool {
        matches!(self.end, TraceEnd::Vertex { .. })
    }

    pub fn end_vertex(&self) -> Option<usize> {
        match self.end {
            TraceEnd::Vertex { vertex, .. } => Some(vertex),
            TraceEnd::BudgetExceeded => None,
        }
    }
}

/// Outcome of tracing all separatrices in one direction.
#[derive(Clone, Debug)]
pub enum JsVerdict {
    /// Every separatrix is a saddle connection.
    Periodic(Vec<SeparatrixTrace>),
    /// Certified not periodic: rational complex, irrational slope.
    NotPeriodic,
    /// Some separatrix outran the budget.
    Unknown { budget: usize },
}

impl PlanarComplex {
    /// Corner of a regular or singular vertex whose cone contains `v`,
    /// searching counter-clockwise from `from` (inclusive).
    pub fn corner_towards(&self, from: usize, v: &Vec2) -> usize {
        let k = self.cone_of(v);
        let mut c = from;
        loop {
            if c % 4 == k {
                return c;
            }
            c = self.ccw_next_corner(c);
            assert!(c != from, "every vertex has a corner of each type");
        }
    }

    /// Flows from `corner` in direction `v` until a singular vertex or the
    /// budget; regular vertices are crossed straight.
    pub fn trace_from(&self, corner: usize, v: &Vec2, budget: usize) -> SeparatrixTrace {
        let comps = self.frame_components(v);
        let neg_v = v.neg();
        let mut segments = Vec::new();
        let mut pass_through = Vec::new();
        let mut t = Scalar::zero();
        let one = Scalar::one();
        let (mut cell, mut a, mut b) = start_state(corner);
        let start_corner = corner;
        while segments.len() < budget {
            let (alpha, beta) = self.local_direction(&comps, cell);
            let ta = exit_time(&a, &alpha);
            let tb = exit_time(&b, &beta);
            let dt = match (&ta, &tb) {
                (Some(x), Some(y)) => x.clone().min(y.clone()),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!("nonzero direction"),
            };
            let a1 = &a + &dt * &alpha;
            let b1 = &b + &dt * &beta;
            segments.push(Segment {
                cell,
                a0: a.clone(),
                b0: b.clone(),
                a1: a1.clone(),
                b1: b1.clone(),
                t0: t.clone(),
                dt: dt.clone(),
            });
            t = &t + &dt;
            let hit_a = ta.as_ref() == Some(&dt);
            let hit_b = tb.as_ref() == Some(&dt);
            let a_end = a1.is_zero() || a1 == one;
            let b_end = b1.is_zero() || b1 == one;
            if a_end && b_end {
                let k = match (a1 == one, b1 == one) {
                    (false, false) => BL,
                    (true, false) => BR,
                    (true, true) => TR,
                    (false, true) => TL,
                };
                let arrived = corner_id(cell, k);
                let vertex = self.vertex_of(arrived);
                if self.vertices[vertex].singular {
                    let (ab, bb) = self.local_direction(&self.frame_components(&neg_v), cell);
                    let arrival_corner = if super::complex::cone_type(&ab, &bb) == k {
                        arrived
                    } else {
                        self.ccw_next_corner(arrived)
                    };
                    return SeparatrixTrace {
                        start_corner,
                        segments,
                        pass_through,
                        end: TraceEnd::Vertex { vertex, arrival_corner },
                        length: t,
                    };
                }
                pass_through.push((vertex, t.clone()));
                let out = self.corner_towards(arrived, v);
                (cell, a, b) = start_state(out);
                continue;
            }
            if hit_a && a1 == one {
                cell = self.neighbor(Letter::X, cell);
                a = Scalar::zero();
                b = b1;
            } else if hit_a && a1.is_zero() {
                cell = self.neighbor(Letter::XInv, cell);
                a = one.clone();
                b = b1;
            } else if hit_b && b1 == one {
                cell = self.neighbor(Letter::Y, cell);
                a = a1;
                b = Scalar::zero();
            } else {
                debug_assert!(hit_b && b1.is_zero());
                cell = self.neighbor(Letter::YInv, cell);
                a = a1;
                b = one.clone();
            }
        }
        SeparatrixTrace { start_corner, segments, pass_through, end: TraceEnd::BudgetExceeded, length: t }
    }

    /// Starting corners of all separatrices in direction `v`: one per
    /// corner of matching type at each singular vertex, in corner order.
    pub fn separatrix_starts(&self, v: &Vec2) -> Vec<usize> {
        let k = self.cone_of(v);
        let mut starts: Vec<usize> = self
            .vertices
            .iter()
            .filter(|info| info.singular)
            .flat_map(|info| info.corners.iter().copied().filter(|c| c % 4 == k))
            .collect();
        starts.sort_unstable();
        starts
    }

    /// Traces every separatrix in direction `v` with a per-trace budget.
    pub fn trace_direction(&self, v: &Vec2, budget: usize) -> JsVerdict {
        assert!(budget >= 1, "budget must be positive");
        let mut traces = Vec::new();
        for start in self.separatrix_starts(v) {
            let tr = self.trace_from(start, v, budget);
            if !tr.is_saddle_connection() {
                if self.is_rational() && !slope_is_rational(v) {
                    return JsVerdict::NotPeriodic;
                }
                return JsVerdict::Unknown { budget };
            }
            traces.push(tr);
        }
        JsVerdict::Periodic(traces)
    }

    /// Moves from a point along `disp` (flow parameter 1), leaving a vertex
    /// through `corner` when the start is a vertex.
    pub fn flow_point(&self, start: &Point, corner: Option<usize>, disp: &Vec2) -> Point {
        let comps = self.frame_components(disp);
        let one = Scalar::one();
        let (mut cell, mut a, mut b) = match start {
            Point::Vertex(_) => start_state(corner.expect("vertex start needs a corner")),
            Point::Regular { cell, a, b } => (*cell, a.clone(), b.clone()),
        };
        let mut left = Scalar::one();
        loop {
            let (alpha, beta) = self.local_direction(&comps, cell);
            if matches!(start, Point::Regular { .. }) || !left.is_one() {
                // Entering across the left/bottom edge from a regular point
                // may require stepping back into the previous cell.
                if a.is_zero() && alpha.is_negative() {
                    cell = self.neighbor(Letter::XInv, cell);
                    a = one.clone();
                    continue;
                }
                if b.is_zero() && beta.is_negative() {
                    cell = self.neighbor(Letter::YInv, cell);
                    b = one.clone();
                    continue;
                }
            }
            let ta = exit_time(&a, &alpha);
            let tb = exit_time(&b, &beta);
            let dt = match (&ta, &tb) {
                (Some(x), Some(y)) => x.clone().min(y.clone()),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!("nonzero displacement"),
            };
            if dt >= left {
                let a1 = &a + &left * &alpha;
                let b1 = &b + &left * &beta;
                return self.canonical_point(cell, a1, b1);
            }
            left = &left - &dt;
            let a1 = &a + &dt * &alpha;
            let b1 = &b + &dt * &beta;
            let a_end = a1.is_zero() || a1 == one;
            let b_end = b1.is_zero() || b1 == one;
            if a_end && b_end {
                let k = match (a1 == one, b1 == one) {
                    (false, false) => BL,
                    (true, false) => BR,
                    (true, true) => TR,
                    (false, true) => TL,
                };
                let out = self.corner_towards(corner_id(cell, k), disp);
                (cell, a, b) = start_state(out);
                continue;
            }
            if ta.as_ref() == Some(&dt) && a1 == one {
                cell = self.neighbor(Letter::X, cell);
                (a, b) = (Scalar::zero(), b1);
            } else if ta.as_ref() == Some(&dt) && a1.is_zero() {
                cell = self.neighbor(Letter::XInv, cell);
                (a, b) = (one.clone(), b1);
            } else if b1 == one {
                cell = self.neighbor(Letter::Y, cell);
                (a, b) = (a1, Scalar::zero());
            } else {
                cell = self.neighbor(Letter::YInv, cell);
                (a, b) = (a1, one.clone());
            }
        }
    }
}

fn start_state(corner: usize) -> (usize, Scalar, Scalar) {
    let (a, b) = corner_coords(corner % 4);
    (corner / 4, Scalar::from_int(a), Scalar::from_int(b))
}

/// Time to reach the edge `0` or `1` of a unit interval moving at `speed`.
fn exit_time(pos: &Scalar, speed: &Scalar) -> Option<Scalar> {
    match speed.signum() {
        1 => Some((Scalar::one() - pos) / speed),
        -1 => Some(pos / &(-speed)),
        _ => None,
    }
}

fn slope_is_rational(v: &Vec2) -> bool {
    let d = Direction::new(v.clone()).expect("nonzero");
    d.vector().x.is_rational() && d.vector().y.is_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::ExtendedOrigami;
    use crate::pdec::PDecomposition;

    fn torus() -> PlanarComplex {
        let o = ExtendedOrigami::from_cycles(1, &[], &[]).unwrap();
        PlanarComplex::realize(&PDecomposition::standard(o)).unwrap()
    }

    fn six_cell() -> PlanarComplex {
        let o = ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, 5, -6, -4], vec![2, -3]]).unwrap();
        PlanarComplex::realize(&PDecomposition::standard(o)).unwrap()
    }

    #[test]
    fn torus_horizontal_is_periodic() {
        match torus().trace_direction(&Vec2::ints(1, 0), 10) {
            JsVerdict::Periodic(tr) => {
                assert_eq!(tr.len(), 2);
                assert!(tr.iter().all(|t| t.length == Scalar::one()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn torus_irrational_slope_is_not_periodic() {
        let v = Vec2::new(Scalar::one(), Scalar::sqrt_of(2));
        assert!(matches!(torus().trace_direction(&v, 50), JsVerdict::NotPeriodic));
    }

    #[test]
    fn six_cell_diagonal_is_periodic() {
        match six_cell().trace_direction(&Vec2::ints(1, 1), 1000) {
            JsVerdict::Periodic(tr) => assert!(!tr.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flow_returns_to_start_on_torus() {
        let c = torus();
        let p = c.canonical_point(0, Scalar::from_frac(1, 3), Scalar::from_frac(1, 5));
        let q = c.flow_point(&p, None, &Vec2::ints(2, 3));
        assert_eq!(p, q);
        let r = c.flow_point(&p, None, &Vec2::new(Scalar::from_frac(-1, 3), Scalar::zero()));
        assert!(matches!(r, Point::Regular { ref a, .. } if a.is_zero()));
        let _ = (BL, BR, TR, TL);
    }
}
