//! Property suites over extended origamis with at most six cells, shared by
//! the `properties` and `acceptance` targets.
#![allow(dead_code)]


use proptest::prelude::*;
use proptest::sample::SizeRange;
use proptest::test_runner::{Config, TestError, TestRunner};

use veechkit::affine::{enumerate_group, membership, prefilter, GroupLimits, MembershipOptions, Prefilter, Verdict};
use veechkit::exact::{Mat2, Scalar};
use veechkit::geometry::{redecompose, PlanarComplex, RedecomposeOutcome};
use veechkit::invariants::{commutator_cycles, partner, surface_type, vertex_classes};
use veechkit::iso::{canonical_form, find_isomorphism};
use veechkit::origami::{cell_of, stabilizer, Action, ExtendedOrigami, Letter, SignedIndex, SignedPerm, Word};
use veechkit::pdec::PDecomposition;

pub const CASES: u32 = 256;

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Half-cycles on `1..=n`: a signed shuffle cut at random places.
fn half_cycles(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (Just((1..=n as i64).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), 2 * n)).prop_map(
        move |(cells, bits)| {
            let mut out: Vec<Vec<i64>> = vec![Vec::new()];
            for (k, c) in cells.into_iter().enumerate() {
                if k > 0 && bits[n + k] {
                    out.push(Vec::new());
                }
                out.last_mut().unwrap().push(if bits[k] { -c } else { c });
            }
            out
        },
    )
}

/// Valid square-tiled extended origamis.
fn square_tiled() -> impl Strategy<Value = ExtendedOrigami> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), half_cycles(n), half_cycles(n)))
        .prop_filter_map("invalid", |(n, x, y)| {
            let o = ExtendedOrigami::from_cycles(n, &x, &y).ok()?;
            o.validate().is_valid().then_some(o)
        })
}

/// Moduli `s2/s1` from one height per `x`-cylinder and one width per
/// `y`-cylinder; always consistent.
fn consistent_moduli(o: &ExtendedOrigami, seeds: &[u8]) -> Vec<Scalar> {
    let n = o.n();
    let orbit_values = |l: Letter, offset: usize| {
        let mut value: Vec<Option<Scalar>> = vec![None; n];
        for c in 0..n {
            if value[c].is_some() {
                continue;
            }
            let v = Scalar::from_frac(1 + (seeds[(c + offset) % seeds.len()] % 4) as i64, 1 + (c % 2) as i64);
            let mut i = 2 * c;
            while value[cell_of(i)].is_none() {
                value[cell_of(i)] = Some(v.clone());
                i = o.apply_letter(l, i);
            }
        }
        value.into_iter().map(Option::unwrap).collect::<Vec<_>>()
    };
    let s2 = orbit_values(Letter::X, 0);
    let s1 = orbit_values(Letter::Y, 7);
    s2.iter().zip(&s1).map(|(a, b)| a / b).collect()
}

fn with_moduli() -> impl Strategy<Value = ExtendedOrigami> {
    (square_tiled(), prop::collection::vec(any::<u8>(), 12)).prop_map(|(o, seeds)| {
        let m = consistent_moduli(&o, &seeds);
        o.with_moduli(m).unwrap()
    })
}

/// Arbitrary positive moduli from a small pool, consistent or not.
fn any_moduli() -> impl Strategy<Value = ExtendedOrigami> {
    (square_tiled(), prop::collection::vec(0usize..4, 6)).prop_map(|(o, picks)| {
        let pool = [Scalar::one(), Scalar::from_int(2), Scalar::from_frac(1, 2), Scalar::from_int(3)];
        let m = (0..o.n()).map(|c| pool[picks[c]].clone()).collect();
        o.with_moduli(m).unwrap()
    })
}

fn word(len: impl Into<SizeRange>) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(Letter::ALL.to_vec()), len).prop_map(Word::from_letters)
}

/// A relabelling commuting with negation: a cell permutation and sign flips.
fn relabelling(n: usize) -> impl Strategy<Value = SignedPerm> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(
        move |(pi, flip)| {
            let img = (0..2 * n).map(|i| 2 * pi[i / 2] + ((i % 2) ^ flip[i / 2] as usize)).collect();
            SignedPerm::from_images(img).unwrap()
        },
    )
}

fn sl2z_small() -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if a * d - b * c == 1 {
                        out.push(Mat2::ints(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

pub fn k_chain_rule_and_inverse() -> Result<(), String> {
    let strat = (with_moduli(), word(0..6), word(0..6), 1usize..=6, any::<bool>());
    report(runner().run(&strat, |(o, u, v, c, neg)| {
        let s = SignedIndex { cell: 1 + (c - 1) % o.n(), positive: !neg };
        let mid = o.monodromy_eval(&u, s);
        prop_assert_eq!(o.k_cocycle(s, &u.concat(&v)), o.k_cocycle(s, &u) * o.k_cocycle(mid, &v));
        prop_assert_eq!(o.k_cocycle(s, &u) * o.k_cocycle(mid, &u.inverse()), Scalar::one());
        Ok(())
    }))
}

pub fn heights_agree_with_schreier_check() -> Result<(), String> {
    report(runner().run(&prop_oneof![with_moduli(), any_moduli()], |o| {
        let data = stabilizer(&o, 0, Action::Signed).unwrap();
        let base = SignedIndex::from_idx(0);
        let schreier_ok = data.generators.iter().all(|w| o.k_cocycle(base, w).is_one());
        prop_assert_eq!(o.solve_heights().is_ok(), schreier_ok);
        Ok(())
    }))
}

pub fn partner_is_an_involution_on_vertices() -> Result<(), String> {
    report(runner().run(&square_tiled(), |o| {
        let cycles = commutator_cycles(&o);
        let cycle = |i: usize| cycles.iter().position(|c| c.contains(&i)).unwrap();
        for c in &cycles {
            let image = cycle(partner(&o, c[0]));
            prop_assert!(c.iter().all(|&i| cycle(partner(&o, i)) == image));
            prop_assert_eq!(cycle(partner(&o, partner(&o, c[0]))), cycle(c[0]));
        }
        Ok(())
    }))
}

pub fn gauss_bonnet_and_euler() -> Result<(), String> {
    report(runner().run(&square_tiled(), |o| {
        let t = surface_type(&o).unwrap();
        let v = vertex_classes(&o).unwrap().len() as i64;
        // N faces, 2N edges and V vertices on the quotient surface.
        let chi = v - o.n() as i64;
        prop_assert_eq!(chi, 2 - 2 * t.genus as i64);
        prop_assert_eq!(t.orders.iter().map(|&k| k as i64).sum::<i64>(), 4 * t.genus as i64 - 4);
        Ok(())
    }))
}

pub fn redecompose_in_own_frame_is_identity() -> Result<(), String> {
    report(runner().run(&with_moduli(), |o| {
        let p = PDecomposition::standard(o);
        let cx = PlanarComplex::realize(&p).unwrap();
        let RedecomposeOutcome::Done(r) = redecompose(&cx, &cx.u1, &cx.u2, 100_000).unwrap() else {
            return Err(TestCaseError::fail("own frame did not close"));
        };
        let q = &r.decomposition;
        prop_assert_eq!(r.regular_crossings, 0);
        let iso = find_isomorphism(&p.origami, &q.origami, None).unwrap();
        prop_assert!(iso.is_some());
        let iso = iso.unwrap();
        let m = q.origami.moduli();
        let ratio = &m[cell_of(iso.sigma.apply(0))] / &m[0];
        prop_assert_eq!(&q.k_sq * &ratio.square(), p.k_sq);
        Ok(())
    }))
}

pub fn canonical_form_matches_isomorphism() -> Result<(), String> {
    let strat = (
        square_tiled().prop_flat_map(|o| {
            let n = o.n();
            (Just(o), relabelling(n))
        }),
        square_tiled(),
    );
    report(runner().run(&strat, |((o, sigma), other)| {
        let r = o.relabel(&sigma);
        prop_assert_eq!(canonical_form(&o, None).unwrap(), canonical_form(&r, None).unwrap());
        prop_assert!(find_isomorphism(&o, &r, None).unwrap().is_some());
        let same = canonical_form(&o, None).unwrap() == canonical_form(&other, None).unwrap();
        prop_assert_eq!(same, find_isomorphism(&o, &other, None).unwrap().is_some());
        Ok(())
    }))
}

pub fn identity_is_a_member() -> Result<(), String> {
    report(runner().run(&with_moduli(), |o| {
        let p = PDecomposition::standard(o);
        let m = membership(&p, &Mat2::identity(), &MembershipOptions::default()).unwrap();
        prop_assert_eq!(m.verdict, Verdict::Member);
        Ok(())
    }))
}

pub fn prefilter_never_rejects_members() -> Result<(), String> {
    let mats = sl2z_small();
    report(runner().run(&(square_tiled(), any::<prop::sample::Index>()), |(o, pick)| {
        let a = pick.get(&mats);
        let p = PDecomposition::standard(o);
        let opts = MembershipOptions { prefilter: false, ..MembershipOptions::default() };
        if membership(&p, a, &opts).unwrap().is_member() {
            prop_assert_eq!(prefilter(&p, a, None).unwrap(), Prefilter::Pass);
        }
        Ok(())
    }))
}

/// The coset-graph walk and the geometric test agree on every matrix of
/// `SL(2,Z)` with entries in `[-3, 3]`.
pub fn word_walk_agrees_with_membership() -> Result<(), String> {
    let mats = sl2z_small();
    report(runner().run(&square_tiled(), |o| {
        let p = PDecomposition::standard(o);
        let g = enumerate_group(&p, false, GroupLimits::default()).unwrap();
        prop_assert!(g.is_complete());
        for a in &mats {
            let direct = membership(&p, a, &MembershipOptions::default()).unwrap().is_member();
            prop_assert_eq!(g.contains(a), Some(direct), "{}", a);
        }
        Ok(())
    }))
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: [Suite; 9] = [
    ("K chain rule and inverse law", k_chain_rule_and_inverse),
    ("height solving vs Schreier K-check", heights_agree_with_schreier_check),
    ("partner involution", partner_is_an_involution_on_vertices),
    ("Gauss-Bonnet and Euler characteristic", gauss_bonnet_and_euler),
    ("redecompose after realize is the identity", redecompose_in_own_frame_is_identity),
    ("canonical form vs isomorphism", canonical_form_matches_isomorphism),
    ("identity is a member", identity_is_a_member),
    ("prefilter soundness", prefilter_never_rejects_members),
    ("word walk vs direct membership", word_walk_agrees_with_membership),
];
