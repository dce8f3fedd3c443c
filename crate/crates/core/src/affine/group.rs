//! Orbit of a decomposition under `PSL(2,Z)` and the resulting coset graph.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::default_budget;
use crate::error::{Error, Result};
use crate::exact::{apply_ta, Mat2, Scalar, Vec2};
use crate::geometry::{redecompose, PlanarComplex, RedecomposeOutcome};
use crate::iso::{canonical_form_with_map, CanonicalForm, MarkSet};
use crate::origami::cell_of;
use crate::pdec::PDecomposition;

/// A letter of a word in `PSL(2,Z)`: `T`, its inverse `t`, or `S`.
pub type Gen = char;

fn gen_matrix(g: Gen) -> Mat2 {
    match g {
        'T' => Mat2::t(),
        't' => Mat2::t().inverse(),
        'S' => Mat2::s(),
        _ => panic!("unknown generator {g}"),
    }
}

/// Product of a word, read left to right as a matrix product.
pub fn word_matrix(w: &[Gen]) -> Mat2 {
    w.iter().fold(Mat2::identity(), |m, &g| m.mul(&gen_matrix(g)))
}

fn inverse_word(w: &[Gen]) -> Vec<Gen> {
    w.iter()
        .rev()
        .map(|&g| match g {
            'T' => 't',
            't' => 'T',
            s => s,
        })
        .collect()
}

fn reduce(w: Vec<Gen>) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::with_capacity(w.len());
    for g in w {
        match (out.last(), g) {
            (Some('T'), 't') | (Some('t'), 'T') | (Some('S'), 'S') => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    out
}

/// Writes an integral matrix of determinant 1 as `+-T^q1 S T^q2 S ... T^qk`.
pub fn psl2z_word(a: &Mat2) -> Option<Vec<Gen>> {
    let [mut a0, mut b0, mut c0, mut d0] = crate::exact::integer_entries(a)?;
    if a0 * d0 - b0 * c0 != 1 {
        return None;
    }
    let mut word = Vec::new();
    let push_power = |word: &mut Vec<Gen>, q: i64| {
        let g = if q > 0 { 'T' } else { 't' };
        word.extend(std::iter::repeat_n(g, q.unsigned_abs() as usize));
    };
    while c0 != 0 {
        let q = (a0 as f64 / c0 as f64).round() as i64;
        push_power(&mut word, q);
        word.push('S');
        let (a1, b1) = (a0 - q * c0, b0 - q * d0);
        (a0, b0, c0, d0) = (c0, d0, -a1, -b1);
    }
    push_power(&mut word, a0 * b0);
    Some(reduce(word))
}

/// Bounds for the orbit search.
#[derive(Clone, Copy, Debug)]
pub struct GroupLimits {
    pub max_nodes: usize,
    /// Segment budget per separatrix; `None` uses the default.
    pub budget: Option<usize>,
}

impl Default for GroupLimits {
    fn default() -> Self {
        GroupLimits { max_nodes: 2000, budget: None }
    }
}

/// A vertex of the coset graph: a decomposition in the standard frame.
#[derive(Clone, Debug)]
pub struct Node {
    pub decomposition: PDecomposition,
    pub form: CanonicalForm,
    /// Squared modulus of the canonical cell 1.
    pub k_sq: Scalar,
    /// A word `w` with `w . X = X_node`.
    pub word: Vec<Gen>,
    /// `(parent, generator)` of the spanning-tree edge, if any.
    pub parent: Option<(usize, Gen)>,
}

type Key = (CanonicalForm, Scalar);

/// The Schreier graph of `PSL(2,Z)` acting on the orbit of a decomposition.
#[derive(Clone, Debug)]
pub struct CosetGraph {
    pub nodes: Vec<Node>,
    /// Targets of the `T` and `S` edges per node; `usize::MAX` if unexplored.
    pub edges: Vec<[usize; 2]>,
    pub marked: bool,
    /// True when the node limit stopped the search.
    pub partial: bool,
    /// Unexplained search failures (non-periodic or over budget).
    pub unknown: Option<String>,
}

fn key_of(p: &PDecomposition, marked: bool) -> Result<Key> {
    let marks = marked.then_some(&p.marks);
    let (form, sigma) = canonical_form_with_map(&p.origami, marks)?;
    let o = &p.origami;
    let first = cell_of(sigma.apply_inv(0));
    let ratio = o.moduli()[first].clone() / o.moduli()[0].clone();
    Ok((form, &p.k_sq * &ratio.square()))
}

enum Step {
    Done(PDecomposition),
    Stuck(String),
}

/// `G . X_Q` expressed in the standard frame.
fn step(p: &PDecomposition, g: Gen, budget: Option<usize>) -> Result<Step> {
    let inv = gen_matrix(g).inverse();
    let f1 = apply_ta(&inv, &Vec2::ints(1, 0));
    let f2 = apply_ta(&inv, &Vec2::ints(0, 1));
    let cx = PlanarComplex::realize(p)?;
    let budget = budget.unwrap_or_else(|| default_budget(&cx));
    let r = match redecompose(&cx, &f1, &f2, budget)? {
        RedecomposeOutcome::Done(r) => *r,
        RedecomposeOutcome::NotPeriodic(v) => return Ok(Step::Stuck(format!("direction {v} is not periodic"))),
        RedecomposeOutcome::Unknown(v) => return Ok(Step::Stuck(format!("direction {v} exceeded the budget"))),
    };
    let q = r.decomposition;
    let k_sq = &q.k_sq * &f1.norm_sq() / f2.norm_sq();
    Ok(Step::Done(PDecomposition { frame: [Vec2::ints(1, 0), Vec2::ints(0, 1)], k_sq, ..q }))
}

/// Breadth-first orbit of `p` (in the standard frame) under `T` and `S`.
pub fn enumerate_group(p: &PDecomposition, marked: bool, limits: GroupLimits) -> Result<CosetGraph> {
    if p.frame != [Vec2::ints(1, 0), Vec2::ints(0, 1)] {
        return Err(Error::Input("orbit enumeration needs the horizontal/vertical frame".into()));
    }
    let base = if marked { p.clone() } else { PDecomposition { marks: MarkSet::new(), ..p.clone() } };
    let key = key_of(&base, marked)?;
    let mut index: HashMap<Key, usize> = HashMap::from([(key.clone(), 0)]);
    let mut nodes = vec![Node { decomposition: base, form: key.0, k_sq: key.1, word: Vec::new(), parent: None }];
    let mut edges: Vec<[usize; 2]> = vec![[usize::MAX; 2]];
    let mut partial = false;
    let mut unknown = None;
    let mut u = 0;
    'outer: while u < nodes.len() {
        for (slot, g) in ['T', 'S'].into_iter().enumerate() {
            let next = match step(&nodes[u].decomposition, g, limits.budget)? {
                Step::Done(q) => q,
                Step::Stuck(why) => {
                    unknown = Some(why);
                    break 'outer;
                }
            };
            let k = key_of(&next, marked)?;
            let v = match index.get(&k) {
                Some(&v) => v,
                None => {
                    if nodes.len() >= limits.max_nodes {
                        partial = true;
                        break 'outer;
                    }
                    let mut word = vec![g];
                    word.extend(nodes[u].word.iter().copied());
                    nodes.push(Node {
                        decomposition: next,
                        form: k.0.clone(),
                        k_sq: k.1.clone(),
                        word: reduce(word),
                        parent: Some((u, g)),
                    });
                    edges.push([usize::MAX; 2]);
                    index.insert(k, nodes.len() - 1);
                    nodes.len() - 1
                }
            };
            edges[u][slot] = v;
        }
        u += 1;
    }
    Ok(CosetGraph { nodes, edges, marked, partial, unknown })
}

impl CosetGraph {
    pub fn is_complete(&self) -> bool {
        !self.partial && self.unknown.is_none()
    }

    /// Index of the Veech group in `PSL(2,Z)`.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then_some(self.nodes.len())
    }

    fn target(&self, u: usize, g: Gen) -> Option<usize> {
        match g {
            'T' => Some(self.edges[u][0]),
            'S' => Some(self.edges[u][1]),
            't' => (0..self.nodes.len()).find(|&v| self.edges[v][0] == u),
            _ => None,
        }
    }

    /// Node reached from the base by the surface `w . X`.
    pub fn walk(&self, w: &[Gen]) -> Option<usize> {
        if !self.is_complete() {
            return None;
        }
        w.iter().rev().try_fold(0, |u, &g| self.target(u, g))
    }

    /// Membership of an integral matrix by walking its word; `None` when the
    /// matrix is not in `SL(2,Z)` or the graph is incomplete.
    pub fn contains(&self, a: &Mat2) -> Option<bool> {
        let w = psl2z_word(a)?;
        self.walk(&w).map(|v| v == 0)
    }

    /// Schreier generators `w_v^-1 G w_u` for the non-tree edges `u -G-> v`.
    pub fn generators(&self) -> Vec<Vec<Gen>> {
        let mut out = Vec::new();
        for (u, e) in self.edges.iter().enumerate() {
            for (slot, g) in ['T', 'S'].into_iter().enumerate() {
                let v = e[slot];
                if v == usize::MAX || self.nodes[v].parent == Some((u, g)) {
                    continue;
                }
                let mut w = inverse_word(&self.nodes[v].word);
                w.push(g);
                w.extend(self.nodes[u].word.iter().copied());
                let w = reduce(w);
                if !word_matrix(&w).eq_projective(&Mat2::identity()) && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let word = |w: &[Gen]| if w.is_empty() { "1".to_string() } else { w.iter().collect() };
        let mat = |m: &Mat2| {
            crate::exact::integer_entries(m).map_or_else(|| json!(m.to_string()), |e| json!([[e[0], e[1]], [e[2], e[3]]]))
        };
        json!({
            "index": self.index(),
            "complete": self.is_complete(),
            "partial": self.partial,
            "unknown": self.unknown,
            "marked": self.marked,
            "cosets": self.nodes.iter().map(|n| word(&n.word)).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({ "T": e[0], "S": e[1] })).collect::<Vec<_>>(),
            "generators": self.generators().iter().map(|w| json!({
                "word": word(w),
                "matrix": mat(&word_matrix(w)),
            })).collect::<Vec<_>>(),
        })
    }

    /// Graphviz rendering; with `tree` the spanning tree is drawn solid and
    /// the remaining edges dashed.
    pub fn to_dot(&self, tree: bool) -> String {
        let mut s = String::from("digraph veech {\n  node [shape=circle];\n");
        let _ = writeln!(s, "  n0 [shape=doublecircle];");
        for (u, e) in self.edges.iter().enumerate() {
            for (slot, g) in ['T', 'S'].into_iter().enumerate() {
                let v = e[slot];
                if v == usize::MAX {
                    continue;
                }
                let style = if tree && self.nodes[v].parent != Some((u, g)) { ", style=dashed" } else { "" };
                let _ = writeln!(s, "  n{u} -> n{v} [label=\"{g}\"{style}];");
            }
        }
        s.push_str("}\n");
        s
    }
}
