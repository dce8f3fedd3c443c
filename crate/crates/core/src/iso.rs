//! Isomorphisms of (marked) extended origamis and canonical forms.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::invariants::{class_of, vertex_classes, VertexClass};
use crate::origami::{cell_of, format_idx_cycles, neg, ExtendedOrigami, Letter, SignedIndex, SignedPerm};

/// Labelled marked vertices; each label names the vertex class through a
/// representative signed cell (dense index).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MarkSet {
    marks: BTreeMap<String, usize>,
}

impl MarkSet {
    pub fn new() -> Self {
        MarkSet::default()
    }

    /// Builds marks from commutator cycles in integer notation, checking that
    /// every entry of a cycle lies in one vertex class and labels are distinct
    /// classes.
    pub fn from_cycles(o: &ExtendedOrigami, marks: &[(String, Vec<i64>)]) -> Result<MarkSet> {
        let classes = vertex_classes(o)?;
        let mut out = MarkSet::new();
        let mut used = Vec::new();
        for (label, cycle) in marks {
            let idx: Vec<usize> = cycle
                .iter()
                .map(|&v| {
                    SignedIndex::from_int(v)
                        .filter(|s| s.cell <= o.n())
                        .map(SignedIndex::idx)
                        .ok_or_else(|| Error::Input(format!("mark {label}: {v} is not a signed cell")))
                })
                .collect::<Result<_>>()?;
            let first = *idx.first().ok_or_else(|| Error::Input(format!("mark {label} is empty")))?;
            let k = class_of(&classes, first);
            if idx.iter().any(|&i| class_of(&classes, i) != k) {
                return Err(Error::Input(format!("mark {label} spans several vertices")));
            }
            if used.contains(&k) {
                return Err(Error::Input(format!("mark {label} repeats an already marked vertex")));
            }
            if out.marks.insert(label.clone(), first).is_some() {
                return Err(Error::Input(format!("mark label {label} is used twice")));
            }
            used.push(k);
        }
        Ok(out)
    }

    pub fn insert(&mut self, label: impl Into<String>, rep: usize) {
        self.marks.insert(label.into(), rep);
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.marks.iter()
    }

    pub fn labels(&self) -> Vec<&String> {
        self.marks.keys().collect()
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.marks.get(label).copied()
    }

    /// Images of the representatives under a relabelling.
    pub fn map(&self, sigma: &SignedPerm) -> MarkSet {
        MarkSet { marks: self.marks.iter().map(|(l, &r)| (l.clone(), sigma.apply(r))).collect() }
    }

    /// Label -> commutator cycle through the representative, for display.
    pub fn describe(&self, o: &ExtendedOrigami) -> Result<Vec<(String, String)>> {
        let classes = vertex_classes(o)?;
        Ok(self
            .marks
            .iter()
            .map(|(l, &r)| {
                let class = &classes[class_of(&classes, r)];
                let cycle = class.cycles.iter().find(|c| c.contains(&r)).expect("rep in class");
                (l.clone(), format_idx_cycles(std::slice::from_ref(cycle)))
            })
            .collect())
    }

    /// Label -> vertex class index.
    pub fn class_indices(&self, classes: &[VertexClass]) -> BTreeMap<String, usize> {
        self.marks.iter().map(|(l, &r)| (l.clone(), class_of(classes, r))).collect()
    }
}

/// A bijection of signed cells commuting with negation that carries `x1`,
/// `y1` to `x2`, `y2` and scales the moduli by `rescale`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Isomorphism {
    pub sigma: SignedPerm,
    /// `M2[sigma(l)] = rescale * M1[l]`.
    pub rescale: Scalar,
}

impl Isomorphism {
    pub fn to_json(&self) -> Value {
        let sigma: Vec<i64> = (0..self.sigma.len())
            .map(|i| SignedIndex::from_idx(self.sigma.apply(i)).to_int())
            .collect();
        json!({ "sigma": sigma, "rescale": self.rescale.to_string() })
    }
}

/// Extends `sigma(0) = target` along the gluings; `None` on a contradiction.
fn propagate(o1: &ExtendedOrigami, o2: &ExtendedOrigami, target: usize) -> Option<Vec<usize>> {
    let size = 2 * o1.n();
    let mut sigma = vec![usize::MAX; size];
    let mut used = vec![false; size];
    let mut assign = |sigma: &mut Vec<usize>, i: usize, j: usize| -> Option<bool> {
        if sigma[i] == usize::MAX {
            if used[j] || used[neg(j)] {
                return None;
            }
            sigma[i] = j;
            sigma[neg(i)] = neg(j);
            used[j] = true;
            used[neg(j)] = true;
            Some(true)
        } else if sigma[i] == j {
            Some(false)
        } else {
            None
        }
    };
    assign(&mut sigma, 0, target)?;
    let mut queue = VecDeque::from([0usize, 1]);
    while let Some(i) = queue.pop_front() {
        for l in Letter::ALL {
            let a = o1.apply_letter(l, i);
            let b = o2.apply_letter(l, sigma[i]);
            if assign(&mut sigma, a, b)? {
                queue.push_back(a);
                queue.push_back(neg(a));
            }
        }
    }
    sigma.iter().all(|&s| s != usize::MAX).then_some(sigma)
}

fn marks_match(
    o2: &ExtendedOrigami,
    sigma: &SignedPerm,
    m1: &MarkSet,
    m2: &MarkSet,
) -> Result<bool> {
    if m1.labels() != m2.labels() {
        return Ok(false);
    }
    let c2 = vertex_classes(o2)?;
    for (label, &r1) in m1.iter() {
        let r2 = m2.get(label).expect("same labels");
        let image = &c2[class_of(&c2, sigma.apply(r1))];
        if !image.contains(r2) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn candidates<'a>(o1: &'a ExtendedOrigami, o2: &'a ExtendedOrigami) -> impl Iterator<Item = Isomorphism> + 'a {
    let size = if o1.n() == o2.n() { 2 * o1.n() } else { 0 };
    (0..size).filter_map(move |target| {
        let img = propagate(o1, o2, target)?;
        let sigma = SignedPerm::from_images(img).expect("propagation yields a bijection");
        let rescale = o2.modulus_of(sigma.apply(0)) / o1.modulus_of(0);
        (0..o1.n())
            .all(|c| *o2.modulus_of(sigma.apply(2 * c)) == &rescale * &o1.moduli()[c])
            .then_some(Isomorphism { sigma, rescale })
    })
}

/// Searches for an isomorphism, trying images of the base cell in
/// increasing order; the first success is the lexicographically least.
pub fn find_isomorphism(
    o1: &ExtendedOrigami,
    o2: &ExtendedOrigami,
    marks: Option<(&MarkSet, &MarkSet)>,
) -> Result<Option<Isomorphism>> {
    for iso in candidates(o1, o2) {
        if let Some((m1, m2)) = marks {
            if !marks_match(o2, &iso.sigma, m1, m2)? {
                continue;
            }
        }
        return Ok(Some(iso));
    }
    Ok(None)
}

/// Every unmarked isomorphism, in increasing order of the image of `(1,+)`.
pub fn all_isomorphisms(o1: &ExtendedOrigami, o2: &ExtendedOrigami) -> Vec<Isomorphism> {
    candidates(o1, o2).collect()
}

/// Independent check of a certificate: negation-equivariance, generator
/// compatibility, projective moduli and marks.
pub fn verify_isomorphism(
    o1: &ExtendedOrigami,
    o2: &ExtendedOrigami,
    iso: &Isomorphism,
    marks: Option<(&MarkSet, &MarkSet)>,
) -> Result<bool> {
    let s = &iso.sigma;
    if s.len() != 2 * o1.n() || o1.n() != o2.n() || !s.commutes_with_neg() {
        return Ok(false);
    }
    let gens_ok = (0..s.len())
        .all(|i| s.apply(o1.x().apply(i)) == o2.x().apply(s.apply(i)) && s.apply(o1.y().apply(i)) == o2.y().apply(s.apply(i)));
    let moduli_ok = (0..o1.n()).all(|c| o2.moduli()[cell_of(s.apply(2 * c))] == &iso.rescale * &o1.moduli()[c]);
    let marks_ok = match marks {
        Some((m1, m2)) => marks_match(o2, s, m1, m2)?,
        None => true,
    };
    Ok(gens_ok && moduli_ok && marks_ok)
}

/// Isomorphism-class key: the breadth-first relabelling of least encoding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalForm {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    /// Moduli divided by the modulus of the new cell 1.
    pub moduli: Vec<Scalar>,
    /// Label -> least new signed index in the marked class.
    pub marks: Vec<(String, u32)>,
}

impl CanonicalForm {
    /// Stable text encoding.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let _ = write!(s, "x={};y={};M=", join(&self.x), join(&self.y));
        let m: Vec<String> = self.moduli.iter().map(Scalar::to_string).collect();
        s.push_str(&m.join(","));
        if !self.marks.is_empty() {
            let mk: Vec<String> = self.marks.iter().map(|(l, i)| format!("{l}:{i}")).collect();
            let _ = write!(s, ";marks={}", mk.join(","));
        }
        s
    }
}

/// The relabelling that puts `start` at `(1,+)` and numbers newly met cells
/// in breadth-first order along `x, y, x^-1, y^-1`.
pub fn bfs_relabelling(o: &ExtendedOrigami, start: usize) -> SignedPerm {
    let size = 2 * o.n();
    let mut img = vec![usize::MAX; size];
    let mut next = 0usize;
    let mut label = |img: &mut Vec<usize>, i: usize| {
        img[i] = 2 * next;
        img[neg(i)] = 2 * next + 1;
        next += 1;
    };
    label(&mut img, start);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for l in Letter::ALL {
            let j = o.apply_letter(l, i);
            if img[j] == usize::MAX {
                label(&mut img, j);
                queue.push_back(j);
            }
        }
    }
    SignedPerm::from_images(img).expect("connected origami is fully relabelled")
}

fn encode_relabelled(o: &ExtendedOrigami, sigma: &SignedPerm, marks: Option<&MarkSet>) -> Result<CanonicalForm> {
    let r = o.relabel(sigma);
    let x = r.x().images().iter().map(|&v| v as u32).collect();
    let y = r.y().images().iter().map(|&v| v as u32).collect();
    let m0 = r.moduli()[0].clone();
    let moduli = r.moduli().iter().map(|m| m / &m0).collect();
    let mut mk = Vec::new();
    if let Some(marks) = marks {
        let classes = vertex_classes(o)?;
        for (label, &rep) in marks.iter() {
            let class = &classes[class_of(&classes, rep)];
            let least = class.cycles.iter().flatten().map(|&i| sigma.apply(i)).min().expect("nonempty class");
            mk.push((label.clone(), least as u32));
        }
    }
    Ok(CanonicalForm { x, y, moduli, marks: mk })
}

/// Least encoding over all choices of the signed cell sent to `(1,+)`,
/// together with the relabelling that realizes it.
pub fn canonical_form_with_map(o: &ExtendedOrigami, marks: Option<&MarkSet>) -> Result<(CanonicalForm, SignedPerm)> {
    let mut best: Option<(CanonicalForm, SignedPerm)> = None;
    for start in 0..2 * o.n() {
        let sigma = bfs_relabelling(o, start);
        let form = encode_relabelled(o, &sigma, marks)?;
        if best.as_ref().is_none_or(|(b, _)| form < *b) {
            best = Some((form, sigma));
        }
    }
    Ok(best.expect("at least one cell"))
}

pub fn canonical_form(o: &ExtendedOrigami, marks: Option<&MarkSet>) -> Result<CanonicalForm> {
    canonical_form_with_map(o, marks).map(|(f, _)| f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o1() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, 5, -6, -4], vec![2, -3]]).unwrap()
    }

    fn o_t() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, -2, 3, 5, 6, -4]]).unwrap()
    }

    fn o2() -> ExtendedOrigami {
        ExtendedOrigami::from_cycles(2, &[vec![1, 2]], &[vec![1, -2]]).unwrap()
    }

    fn marks(o: &ExtendedOrigami, table: [i64; 4]) -> MarkSet {
        let labels = ["a", "b", "c", "d"];
        let m: Vec<(String, Vec<i64>)> = labels.iter().zip(table).map(|(l, v)| (l.to_string(), vec![v])).collect();
        MarkSet::from_cycles(o, &m).unwrap()
    }

    #[test]
    fn negation_is_an_isomorphism() {
        let o = o1();
        let all = SignedPerm::from_images((0..12).map(neg).collect()).unwrap();
        let flipped = o.relabel(&all);
        let iso = find_isomorphism(&o, &flipped, None).unwrap().unwrap();
        assert!(verify_isomorphism(&o, &flipped, &iso, None).unwrap());
        assert_eq!(iso.rescale, Scalar::one());
    }

    #[test]
    fn six_cell_and_sheared_differ() {
        assert!(o_t().validate().is_valid());
        assert!(find_isomorphism(&o1(), &o_t(), None).unwrap().is_none());
        assert_ne!(canonical_form(&o1(), None).unwrap(), canonical_form(&o_t(), None).unwrap());
    }

    #[test]
    fn sign_flip_of_one_cylinder_is_isomorphic() {
        let flipped6 =
            ExtendedOrigami::from_cycles(6, &[vec![1, 2, 3, 4]], &[vec![1, 5, 6, -4], vec![2, -3]]).unwrap();
        assert!(find_isomorphism(&o1(), &flipped6, None).unwrap().is_some());
        assert_eq!(canonical_form(&o1(), None).unwrap(), canonical_form(&flipped6, None).unwrap());
    }

    #[test]
    fn pillowcase_marks_distinguish() {
        let o = o2();
        let m = marks(&o, [-1, -2, 1, 2]);
        let mt = marks(&o, [-1, -2, 2, 1]);
        assert!(find_isomorphism(&o, &o, None).unwrap().is_some());
        assert!(find_isomorphism(&o, &o, Some((&m, &mt))).unwrap().is_none());
        assert!(find_isomorphism(&o, &o, Some((&m, &m))).unwrap().is_some());
        assert_ne!(canonical_form(&o, Some(&m)).unwrap(), canonical_form(&o, Some(&mt)).unwrap());
    }

    #[test]
    fn identity_certificate() {
        let o = o1();
        let iso = find_isomorphism(&o, &o, None).unwrap().unwrap();
        assert_eq!(iso.sigma, SignedPerm::identity(6));
    }

    #[test]
    fn rescaled_moduli_are_isomorphic() {
        let base = ExtendedOrigami::from_cycles(2, &[], &[vec![1, 2]]).unwrap();
        let a = base.clone().with_moduli(vec![Scalar::one(), Scalar::from_int(2)]).unwrap();
        let b = base.with_moduli(vec![Scalar::from_int(3), Scalar::from_int(6)]).unwrap();
        let iso = find_isomorphism(&a, &b, None).unwrap().unwrap();
        assert_eq!(iso.rescale, Scalar::from_int(3));
        assert_eq!(canonical_form(&a, None).unwrap(), canonical_form(&b, None).unwrap());
    }
}
