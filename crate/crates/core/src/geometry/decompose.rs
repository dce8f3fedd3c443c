//! Re-decomposition of a realized surface along a new pair of periodic
//! directions.

use std::collections::HashMap;

use super::complex::{PlanarComplex, Point};
use super::trace::{JsVerdict, SeparatrixTrace, TraceEnd};
use crate::error::{Error, Result};
use crate::exact::{Scalar, Vec2};
use crate::iso::MarkSet;
use crate::origami::{ExtendedOrigami, SignedPerm};
use crate::pdec::PDecomposition;

/// A successful re-decomposition.
#[derive(Clone, Debug)]
pub struct Redecomposition {
    pub decomposition: PDecomposition,
    /// Crossings of saddle connections at points that are not singular.
    pub regular_crossings: usize,
    /// Number of saddle connections in each direction (on the double cover).
    pub separatrices: (usize, usize),
}

#[derive(Clone, Debug)]
pub enum RedecomposeOutcome {
    Done(Box<Redecomposition>),
    /// The direction carries a dense trajectory.
    NotPeriodic(Vec2),
    /// The direction could not be resolved within the budget.
    Unknown(Vec2),
}

#[derive(Clone, Debug)]
struct Crossing {
    sigma: usize,
    t_sigma: Scalar,
    tau: usize,
    t_tau: Scalar,
}

#[derive(Clone, Debug)]
struct NewCell {
    sigma: usize,
    index: usize,
    s1: Scalar,
    s2: Scalar,
    tau: usize,
    /// Parameter of the bottom-left corner on `tau`.
    r: Scalar,
}

fn cross2(p: (&Scalar, &Scalar), q: (&Scalar, &Scalar)) -> Scalar {
    p.0 * q.1 - p.1 * q.0
}

fn periodic(cx: &PlanarComplex, v: &Vec2, budget: usize) -> std::result::Result<Vec<SeparatrixTrace>, RedecomposeOutcome> {
    match cx.trace_direction(v, budget) {
        JsVerdict::Periodic(t) => Ok(t),
        JsVerdict::NotPeriodic => Err(RedecomposeOutcome::NotPeriodic(v.clone())),
        JsVerdict::Unknown { .. } => Err(RedecomposeOutcome::Unknown(v.clone())),
    }
}

/// Cuts the surface along all saddle connections in directions `f1` and
/// `f2` and reads off the resulting P-decomposition in the frame `(f1, f2)`.
pub fn redecompose(cx: &PlanarComplex, f1: &Vec2, f2: &Vec2, budget: usize) -> Result<RedecomposeOutcome> {
    let orient = f1.cross(f2);
    if orient.is_zero() {
        return Err(Error::DegenerateDirections(f1.to_string(), f2.to_string()));
    }
    if orient.is_negative() {
        let flipped = match redecompose(cx, f1, &f2.neg(), budget)? {
            RedecomposeOutcome::Done(r) => *r,
            other => return Ok(other),
        };
        return Ok(RedecomposeOutcome::Done(Box::new(unorient(flipped, f2))));
    }
    let sigmas = match periodic(cx, f1, budget) {
        Ok(t) => t,
        Err(o) => return Ok(o),
    };
    let taus = match periodic(cx, f2, budget) {
        Ok(t) => t,
        Err(o) => return Ok(o),
    };
    let sigma_at: HashMap<usize, usize> = sigmas.iter().enumerate().map(|(i, t)| (t.start_corner, i)).collect();
    let tau_at: HashMap<usize, usize> = taus.iter().enumerate().map(|(i, t)| (t.start_corner, i)).collect();

    let crossings = find_crossings(cx, &sigmas, &taus);
    let regular_crossings = crossings.len();

    // Cut parameters along each trace, with the crossing at each interior cut.
    let cuts = |len: usize, lengths: &dyn Fn(usize) -> Scalar, key: &dyn Fn(&Crossing) -> (usize, Scalar)| {
        let mut out: Vec<Vec<(Scalar, Option<usize>)>> =
            (0..len).map(|i| vec![(Scalar::zero(), None), (lengths(i), None)]).collect();
        for (id, c) in crossings.iter().enumerate() {
            let (owner, t) = key(c);
            out[owner].push((t, Some(id)));
        }
        for list in &mut out {
            list.sort_by(|a, b| a.0.cmp(&b.0));
        }
        out
    };
    let sigma_cuts = cuts(sigmas.len(), &|i| sigmas[i].length.clone(), &|c| (c.sigma, c.t_sigma.clone()));
    let tau_cuts = cuts(taus.len(), &|i| taus[i].length.clone(), &|c| (c.tau, c.t_tau.clone()));
    let mut index_on_sigma = vec![0; crossings.len()];
    let mut index_on_tau = vec![0; crossings.len()];
    for list in &sigma_cuts {
        for (j, (_, id)) in list.iter().enumerate() {
            if let Some(id) = id {
                index_on_sigma[*id] = j;
            }
        }
    }
    for list in &tau_cuts {
        for (j, (_, id)) in list.iter().enumerate() {
            if let Some(id) = id {
                index_on_tau[*id] = j;
            }
        }
    }

    let mut offset = Vec::with_capacity(sigmas.len());
    let mut cells: Vec<NewCell> = Vec::new();
    for (s, trace) in sigmas.iter().enumerate() {
        offset.push(cells.len());
        let list = &sigma_cuts[s];
        for i in 0..list.len() - 1 {
            let s1 = &list[i + 1].0 - &list[i].0;
            let (tau, j) = match list[i].1 {
                None => (tau_at[&cx.ray_ccw_after(trace.start_corner, f2)], 0),
                Some(id) => (crossings[id].tau, index_on_tau[id]),
            };
            let r = tau_cuts[tau][j].0.clone();
            let s2 = &tau_cuts[tau][j + 1].0 - &r;
            cells.push(NewCell { sigma: s, index: i, s1, s2, tau, r });
        }
    }
    let id_of = |sigma: usize, index: usize| offset[sigma] + index;
    let size = cells.len();

    let mut x_img = vec![0; size];
    let mut y_img = vec![0; size];
    for (q, cell) in cells.iter().enumerate() {
        let list = &sigma_cuts[cell.sigma];
        x_img[q] = if cell.index + 2 < list.len() {
            q + 1
        } else {
            let arrival = arrival_corner(&sigmas[cell.sigma]);
            let up = cx.ray_cw_after(arrival, f2);
            id_of(sigma_at[&cx.ray_cw_after(up, f1)], 0)
        };
        let tl = &tau_cuts[cell.tau];
        let j = tl.iter().position(|(t, _)| *t == cell.r).expect("corner is a cut") + 1;
        y_img[q] = match tl[j].1 {
            Some(id) => id_of(crossings[id].sigma, index_on_sigma[id]),
            None => {
                let arrival = arrival_corner(&taus[cell.tau]);
                id_of(sigma_at[&cx.ray_ccw_after(arrival, f1)], 0)
            }
        };
    }
    for q in 0..size {
        if cells[x_img[q]].s2 != cells[q].s2 || cells[y_img[q]].s1 != cells[q].s1 {
            return Err(Error::Geometry(format!("cell {q} does not close up into a parallelogram")));
        }
    }

    // Deck pairing through cell centres.
    let centres: Vec<Point> = cells.iter().map(|c| centre(cx, &sigmas[c.sigma], &sigma_cuts[c.sigma][c.index].0, c, f1, f2)).collect();
    let by_centre: HashMap<&Point, usize> = centres.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut label = vec![usize::MAX; size];
    let mut pairs = 0;
    for q in 0..size {
        if label[q] != usize::MAX {
            continue;
        }
        let partner = *by_centre
            .get(&cx.deck_point(&centres[q]))
            .ok_or_else(|| Error::Geometry(format!("cell {q} has no deck partner")))?;
        if partner == q {
            return Err(Error::Geometry(format!("cell {q} is fixed by the deck involution")));
        }
        label[q] = 2 * pairs;
        label[partner] = 2 * pairs + 1;
        pairs += 1;
    }
    let mut xs = vec![0; size];
    let mut ys = vec![0; size];
    for q in 0..size {
        xs[label[q]] = label[x_img[q]];
        ys[label[q]] = label[y_img[q]];
    }
    let mut rep = vec![0; pairs];
    for q in 0..size {
        if label[q] % 2 == 0 {
            rep[label[q] / 2] = q;
        }
    }
    let moduli: Vec<Scalar> = rep.iter().map(|&q| &cells[q].s2 / &cells[q].s1).collect();
    let x = SignedPerm::from_images(xs)?;
    let y = SignedPerm::from_images(ys)?;
    let raw = ExtendedOrigami::new(moduli, x, y)?;
    let report = raw.validate();
    if !report.is_valid() {
        return Err(Error::Geometry(format!("re-decomposition is not a valid origami: {:?}", report.failures())));
    }

    let mut marks = MarkSet::new();
    for (v, info) in cx.vertices.iter().enumerate() {
        let Some(name) = &info.mark else { continue };
        if marks.get(name).is_some() {
            continue;
        }
        let s = sigmas
            .iter()
            .position(|t| cx.vertex_of(t.start_corner) == v)
            .ok_or_else(|| Error::Geometry(format!("marked point {name} emits no separatrix")))?;
        let q = label[id_of(s, 0)];
        marks.insert(name.clone(), raw.x().apply_inv(raw.y().apply_inv(q)));
    }

    let (origami, marks) = match raw.sign_normalizer() {
        Ok(flip) => (raw.relabel(&flip), marks.map(&flip)),
        Err(_) => (raw, marks),
    };
    let m1 = &origami.moduli()[0];
    let k_sq = m1 * m1 * f2.norm_sq() / f1.norm_sq();
    let decomposition = PDecomposition {
        frame: [f1.clone(), f2.clone()],
        k_sq,
        origami,
        marks,
        punctures: cx.punctures,
    };
    Ok(RedecomposeOutcome::Done(Box::new(Redecomposition {
        decomposition,
        regular_crossings,
        separatrices: (sigmas.len(), taus.len()),
    })))
}

fn arrival_corner(t: &SeparatrixTrace) -> usize {
    match t.end {
        TraceEnd::Vertex { arrival_corner, .. } => arrival_corner,
        TraceEnd::BudgetExceeded => unreachable!("only saddle connections are used"),
    }
}

/// Crossings of `f1`- and `f2`-saddle connections away from singular
/// points, each listed once.
fn find_crossings(cx: &PlanarComplex, sigmas: &[SeparatrixTrace], taus: &[SeparatrixTrace]) -> Vec<Crossing> {
    let mut by_cell: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (ti, t) in taus.iter().enumerate() {
        for (k, seg) in t.segments.iter().enumerate() {
            by_cell.entry(seg.cell).or_default().push((ti, k));
        }
    }
    let mut found: HashMap<Point, Crossing> = HashMap::new();
    let one = Scalar::one();
    for (si, s) in sigmas.iter().enumerate() {
        for p in &s.segments {
            let Some(list) = by_cell.get(&p.cell) else { continue };
            let d = (&p.a1 - &p.a0, &p.b1 - &p.b0);
            for &(ti, k) in list {
                let q = &taus[ti].segments[k];
                let e = (&q.a1 - &q.a0, &q.b1 - &q.b0);
                let w = (&q.a0 - &p.a0, &q.b0 - &p.b0);
                let den = cross2((&d.0, &d.1), (&e.0, &e.1));
                let lambda = cross2((&w.0, &w.1), (&e.0, &e.1)) / &den;
                let mu = cross2((&w.0, &w.1), (&d.0, &d.1)) / &den;
                let inside = |v: &Scalar| !v.is_negative() && *v <= one;
                if !inside(&lambda) || !inside(&mu) {
                    continue;
                }
                let a = &p.a0 + &lambda * &d.0;
                let b = &p.b0 + &lambda * &d.1;
                let point = cx.canonical_point(p.cell, a, b);
                if matches!(point, Point::Vertex(_)) {
                    continue;
                }
                found.entry(point).or_insert_with(|| Crossing {
                    sigma: si,
                    t_sigma: &p.t0 + &lambda * &p.dt,
                    tau: ti,
                    t_tau: &q.t0 + &mu * &q.dt,
                });
            }
        }
    }
    let mut through: HashMap<usize, (usize, Scalar)> = HashMap::new();
    for (ti, t) in taus.iter().enumerate() {
        for (v, r) in &t.pass_through {
            through.insert(*v, (ti, r.clone()));
        }
    }
    let mut out: Vec<Crossing> = found.into_values().collect();
    for (si, s) in sigmas.iter().enumerate() {
        for (v, t) in &s.pass_through {
            if let Some((ti, r)) = through.get(v) {
                out.push(Crossing { sigma: si, t_sigma: t.clone(), tau: *ti, t_tau: r.clone() });
            }
        }
    }
    out.sort_by(|a, b| (a.sigma, &a.t_sigma).cmp(&(b.sigma, &b.t_sigma)));
    out
}

/// Centre of a new cell, reached by flowing along its bottom edge and then
/// up by half its height.
fn centre(cx: &PlanarComplex, sigma: &SeparatrixTrace, t: &Scalar, cell: &NewCell, f1: &Vec2, f2: &Vec2) -> Point {
    let v = cx.vertex_of(sigma.start_corner);
    let half = Scalar::from_frac(1, 2);
    let along = f1.scale(&(t + &(&cell.s1 * &half)));
    let mid = cx.flow_point(&Point::Vertex(v), Some(sigma.start_corner), &along);
    let corner = match &mid {
        Point::Vertex(w) => {
            let k = cx.cone_of(f2);
            cx.vertices[*w].corners.iter().copied().find(|c| c % 4 == k)
        }
        Point::Regular { .. } => None,
    };
    cx.flow_point(&mid, corner, &f2.scale(&(&cell.s2 * &half)))
}

/// Converts a decomposition in the frame `(f1, -f2)` back to `(f1, f2)`.
fn unorient(mut r: Redecomposition, f2: &Vec2) -> Redecomposition {
    let p = &r.decomposition;
    let o = &p.origami;
    let y = o.y().clone();
    let origami = ExtendedOrigami::new(o.moduli().to_vec(), o.x().clone(), y.inverse()).expect("same sizes");
    r.decomposition = PDecomposition {
        frame: [p.frame[0].clone(), f2.clone()],
        k_sq: p.k_sq.clone(),
        origami,
        marks: p.marks.map(&y),
        punctures: p.punctures,
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::find_isomorphism;
    use crate::origami::tests::o1;

    fn done(r: RedecomposeOutcome) -> Redecomposition {
        match r {
            RedecomposeOutcome::Done(r) => *r,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn same_frame_gives_isomorphic_origami() {
        let p = PDecomposition::standard(o1());
        let cx = PlanarComplex::realize(&p).unwrap();
        let r = done(redecompose(&cx, &Vec2::ints(1, 0), &Vec2::ints(0, 1), 1000).unwrap());
        let o = &r.decomposition.origami;
        assert_eq!(o.n(), 6);
        assert_eq!(r.regular_crossings, 0);
        assert!(find_isomorphism(&o1(), o, None).unwrap().is_some());
        assert_eq!(r.decomposition.k_sq, Scalar::one());
    }

    #[test]
    fn reversed_frame_round_trips() {
        let p = PDecomposition::standard(o1());
        let cx = PlanarComplex::realize(&p).unwrap();
        let r = done(redecompose(&cx, &Vec2::ints(1, 0), &Vec2::ints(0, -1), 1000).unwrap());
        let back = PlanarComplex::realize(&r.decomposition).unwrap();
        let again = done(redecompose(&back, &Vec2::ints(1, 0), &Vec2::ints(0, 1), 1000).unwrap());
        assert!(find_isomorphism(&o1(), &again.decomposition.origami, None).unwrap().is_some());
    }

    #[test]
    fn torus_diagonal_frame() {
        let o = ExtendedOrigami::from_cycles(1, &[], &[]).unwrap();
        let cx = PlanarComplex::realize(&PDecomposition::standard(o)).unwrap();
        let r = done(redecompose(&cx, &Vec2::ints(1, 1), &Vec2::ints(0, 1), 100).unwrap());
        assert_eq!(r.decomposition.origami.n(), 1);
        assert_eq!(r.decomposition.k_sq, Scalar::from_frac(1, 2));
    }
}
