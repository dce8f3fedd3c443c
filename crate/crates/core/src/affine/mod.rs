//! The matrix action on P-decompositions, Veech-group membership, rational
//! refinement and orbit enumeration.

mod group;
mod refine;

use std::collections::BTreeMap;

use serde_json::{json, Value};

pub use group::{enumerate_group, psl2z_word, word_matrix, CosetGraph, Gen, GroupLimits, Node};
pub use refine::refine_rational;

use crate::error::{Error, Result};
use crate::exact::{apply_ta, Mat2, Scalar, Vec2};
use crate::geometry::{redecompose, PlanarComplex, RedecomposeOutcome, Redecomposition};
use crate::invariants::{class_of, cylinder_spectrum, vertex_classes, Axis};
use crate::iso::{all_isomorphisms, find_isomorphism, verify_isomorphism, Isomorphism, MarkSet};
use crate::origami::{cell_of, format_idx_cycles};
use crate::pdec::{PDecomposition, PunctureMode};

/// `A . P`: maps the frame by `A` and the modulus of cell 1 by `rho`.
pub fn act(a: &Mat2, p: &PDecomposition) -> Result<PDecomposition> {
    if !a.is_invertible() {
        return Err(Error::SingularMatrix(a.to_string()));
    }
    let [u1, u2] = &p.frame;
    let (v1, v2) = (apply_ta(a, u1), apply_ta(a, u2));
    let rho_sq = v2.norm_sq() / u2.norm_sq() * (u1.norm_sq() / v1.norm_sq());
    Ok(PDecomposition { frame: [v1, v2], k_sq: &p.k_sq * &rho_sq, ..p.clone() })
}

/// Default per-separatrix segment budget for a realized complex.
pub fn default_budget(cx: &PlanarComplex) -> usize {
    let n = cx.origami.n();
    let sides: f64 = cx.s1.iter().chain(&cx.s2).map(|s| s.to_f64().ceil().max(1.0)).sum();
    let raw = 10.0 * n as f64 * sides;
    (raw.min(1e9) as usize).max(10_000)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reason {
    PrefilterFail,
    NotJS,
    NoIsomorphism,
    ScaleMismatch,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::PrefilterFail => "PrefilterFail",
            Reason::NotJS => "NotJS",
            Reason::NoIsomorphism => "NoIsomorphism",
            Reason::ScaleMismatch => "ScaleMismatch",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Member,
    NotMember(Reason),
    Unknown { budget: usize },
}

/// Evidence for a `Member` verdict.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub isomorphism: Isomorphism,
    pub rho_sq: Scalar,
    pub k_sq: Scalar,
    /// `k'^2` of the re-decomposition, measured on its cell 1.
    pub k_sq_new: Scalar,
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    /// The decomposition in the directions `A u1, A u2`, when it exists.
    pub redecomposed: Option<PDecomposition>,
    /// Failing prefilter direction, if any.
    pub witness: Option<String>,
}

impl Membership {
    fn stop(verdict: Verdict, redecomposed: Option<PDecomposition>, witness: Option<String>) -> Self {
        Membership { verdict, certificate: None, redecomposed, witness }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    pub fn to_json(&self) -> Value {
        let (verdict, reason) = match self.verdict {
            Verdict::Member => ("Member", Value::Null),
            Verdict::NotMember(r) => ("NotMember", json!(r.as_str())),
            Verdict::Unknown { .. } => ("Unknown", Value::Null),
        };
        let mut out = json!({ "verdict": verdict, "reason": reason });
        if let Verdict::Unknown { budget } = self.verdict {
            out["budget"] = json!(budget);
        }
        if let Some(w) = &self.witness {
            out["witness"] = json!(w);
        }
        if let Some(c) = &self.certificate {
            out["certificate"] = json!({
                "isomorphism": c.isomorphism.to_json(),
                "rho_sq": c.rho_sq.to_string(),
                "k_sq": c.k_sq.to_string(),
                "k_sq_new": c.k_sq_new.to_string(),
            });
        }
        if let Some(p) = &self.redecomposed {
            out["redecomposed"] = json!({
                "x": crate::origami::format_cycles(&p.origami.x_cycles()),
                "y": crate::origami::format_cycles(&p.origami.y_cycles()),
                "moduli": p.origami.moduli().iter().map(Scalar::to_string).collect::<Vec<_>>(),
                "k_sq": p.k_sq.to_string(),
            });
        }
        out
    }
}

/// Outcome of the cylinder prefilter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prefilter {
    Pass,
    Fail(String),
    NotJS(String),
    Unknown(String),
}

fn unmarked(p: &PDecomposition) -> PDecomposition {
    PDecomposition { marks: MarkSet::new(), ..p.clone() }
}

fn outcome(r: Result<RedecomposeOutcome>) -> Result<std::result::Result<Redecomposition, Prefilter>> {
    Ok(match r? {
        RedecomposeOutcome::Done(r) => Ok(*r),
        RedecomposeOutcome::NotPeriodic(v) => Err(Prefilter::NotJS(v.to_string())),
        RedecomposeOutcome::Unknown(v) => Err(Prefilter::Unknown(v.to_string())),
    })
}

/// Projective cylinder moduli in direction `f`, read from a decomposition
/// in `f` and a known periodic transverse direction.
fn spectrum_along(cx: &PlanarComplex, f: &Vec2, budget: usize) -> Result<std::result::Result<Vec<Scalar>, Prefilter>> {
    let aux = if f.cross(&cx.u2).is_zero() { cx.u1.clone() } else { cx.u2.clone() };
    let aux = if f.cross(&aux).is_negative() { aux.neg() } else { aux };
    Ok(match outcome(redecompose(cx, f, &aux, budget))? {
        Ok(r) => Ok(cylinder_spectrum(&r.decomposition.origami, Axis::X)?.moduli),
        Err(e) => Err(e),
    })
}

/// Compares cylinder counts and projective moduli in `A u_i` with those in
/// `u_i`; a failure rules out membership.
pub fn prefilter(p: &PDecomposition, a: &Mat2, budget: Option<usize>) -> Result<Prefilter> {
    let cx = PlanarComplex::realize(p)?;
    prefilter_on(&cx, p, a, budget.unwrap_or_else(|| default_budget(&cx)))
}

fn prefilter_on(cx: &PlanarComplex, p: &PDecomposition, a: &Mat2, budget: usize) -> Result<Prefilter> {
    let base = [cylinder_spectrum(&p.origami, Axis::X)?.moduli, cylinder_spectrum(&p.origami, Axis::Y)?.moduli];
    for (i, u) in p.frame.iter().enumerate() {
        let f = apply_ta(a, u);
        match spectrum_along(cx, &f, budget)? {
            Ok(s) if s == base[i] => {}
            Ok(s) => {
                let show = |v: &[Scalar]| v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", ");
                return Ok(Prefilter::Fail(format!("direction {f}: moduli [{}] vs [{}]", show(&s), show(&base[i]))));
            }
            Err(e) => return Ok(e),
        }
    }
    Ok(Prefilter::Pass)
}

/// Settings for [`membership`].
#[derive(Clone, Copy, Debug)]
pub struct MembershipOptions {
    /// Compare marked points as well.
    pub marked: bool,
    /// Segment budget per separatrix; `None` uses [`default_budget`].
    pub budget: Option<usize>,
    /// Run the cylinder prefilter before the full test.
    pub prefilter: bool,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { marked: false, budget: None, prefilter: true }
    }
}

impl MembershipOptions {
    pub fn marked(marked: bool) -> Self {
        MembershipOptions { marked, ..Self::default() }
    }
}

/// Decides whether `A` lies in the Veech group (of the marked surface when
/// requested) by re-decomposing in `A u1, A u2`.
pub fn membership(p: &PDecomposition, a: &Mat2, opts: &MembershipOptions) -> Result<Membership> {
    if !a.is_invertible() {
        return Err(Error::SingularMatrix(a.to_string()));
    }
    let marked = opts.marked;
    let p = if marked { p.clone() } else { unmarked(p) };
    let cx = PlanarComplex::realize(&p)?;
    let budget = opts.budget.unwrap_or_else(|| default_budget(&cx));
    let pre = if opts.prefilter { prefilter_on(&cx, &p, a, budget)? } else { Prefilter::Pass };
    match pre {
        Prefilter::Pass => {}
        Prefilter::Fail(w) => return Ok(Membership::stop(Verdict::NotMember(Reason::PrefilterFail), None, Some(w))),
        Prefilter::NotJS(w) => return Ok(Membership::stop(Verdict::NotMember(Reason::NotJS), None, Some(w))),
        Prefilter::Unknown(w) => return Ok(Membership::stop(Verdict::Unknown { budget }, None, Some(w))),
    }
    let target = act(a, &p)?;
    let [f1, f2] = &target.frame;
    let r = match outcome(redecompose(&cx, f1, f2, budget))? {
        Ok(r) => r,
        Err(Prefilter::NotJS(w)) => return Ok(Membership::stop(Verdict::NotMember(Reason::NotJS), None, Some(w))),
        Err(other) => return Ok(Membership::stop(Verdict::Unknown { budget }, None, Some(format!("{other:?}")))),
    };
    let q = r.decomposition.clone();
    if p.punctures == PunctureMode::AllVertices && r.regular_crossings > 0 {
        return Ok(Membership::stop(Verdict::NotMember(Reason::NoIsomorphism), Some(q), None));
    }
    let marks = marked.then_some((&p.marks, &q.marks));
    let Some(iso) = find_isomorphism(&p.origami, &q.origami, marks)? else {
        return Ok(Membership::stop(Verdict::NotMember(Reason::NoIsomorphism), Some(q), None));
    };
    // Absolute modulus of the image of cell 1 must be rho * k.
    let rho_sq = &target.k_sq / &p.k_sq;
    if image_k_sq(&q, &iso) != target.k_sq {
        return Ok(Membership::stop(Verdict::NotMember(Reason::ScaleMismatch), Some(q), None));
    }
    debug_assert!(verify_isomorphism(&p.origami, &q.origami, &iso, marks)?);
    let certificate = Certificate { isomorphism: iso, rho_sq, k_sq: p.k_sq.clone(), k_sq_new: q.k_sq.clone() };
    Ok(Membership { verdict: Verdict::Member, certificate: Some(certificate), redecomposed: Some(q), witness: None })
}

/// Squared modulus, in `q`, of the image of cell 1 under `iso`.
fn image_k_sq(q: &PDecomposition, iso: &Isomorphism) -> Scalar {
    let m = q.origami.moduli();
    let ratio = &m[cell_of(iso.sigma.apply(0))] / &m[0];
    &q.k_sq * &ratio.square()
}

/// Re-checks a `Member` certificate from scratch.
pub fn verify_membership(p: &PDecomposition, a: &Mat2, marked: bool, m: &Membership) -> Result<bool> {
    let (Some(c), Some(q)) = (&m.certificate, &m.redecomposed) else { return Ok(false) };
    let target = act(a, p)?;
    let marks = marked.then_some((&p.marks, &q.marks));
    let iso_ok = verify_isomorphism(&p.origami, &q.origami, &c.isomorphism, marks)?;
    let scale_ok = image_k_sq(q, &c.isomorphism) == target.k_sq;
    Ok(iso_ok && scale_ok && c.rho_sq == &target.k_sq / &p.k_sq)
}

/// Where the marked points of `p` sit after re-decomposition, read back in
/// the cell labels of `p` through each unmarked isomorphism: one table per
/// isomorphism, label -> commutator cycle.
pub fn vertex_tables(p: &PDecomposition, redecomposed: &PDecomposition) -> Result<Vec<BTreeMap<String, String>>> {
    let classes = vertex_classes(&p.origami)?;
    let mut out = Vec::new();
    for iso in all_isomorphisms(&p.origami, &redecomposed.origami) {
        let mut table = BTreeMap::new();
        for (label, &rep) in redecomposed.marks.iter() {
            let i = iso.sigma.apply_inv(rep);
            let class = &classes[class_of(&classes, i)];
            let cycle = class.cycles.iter().find(|c| c.contains(&i)).expect("element of its class");
            table.insert(label.clone(), format_idx_cycles(std::slice::from_ref(cycle)));
        }
        out.push(table);
    }
    Ok(out)
}

/// Re-decomposes `p` (marks included) in the directions `A u1, A u2`.
pub fn redecompose_by(p: &PDecomposition, a: &Mat2, budget: Option<usize>) -> Result<RedecomposeOutcome> {
    let cx = PlanarComplex::realize(p)?;
    let budget = budget.unwrap_or_else(|| default_budget(&cx));
    let target = act(a, p)?;
    redecompose(&cx, &target.frame[0], &target.frame[1], budget)
}
