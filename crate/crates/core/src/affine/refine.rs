//! Subdivision of a decomposition with commensurable sides into congruent
//! cells.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::geometry::PlanarComplex;
use crate::iso::MarkSet;
use crate::origami::{ExtendedOrigami, SignedPerm};
use crate::pdec::PDecomposition;

/// Ratios `s[i] / s[0]` as rationals, or the first incommensurable pair.
fn ratios(s: &[Scalar]) -> Result<Vec<BigRational>> {
    s.iter()
        .map(|v| {
            let r = v / &s[0];
            if r.is_rational() {
                Ok(r.rational_part().clone())
            } else {
                Err(Error::Incommensurable(s[0].to_string(), v.to_string()))
            }
        })
        .collect()
}

/// Subdivision counts `r[i] / gcd(r)` and the common unit `gcd(r)`.
fn subdivide(r: &[BigRational]) -> Result<(Vec<usize>, BigRational)> {
    let den = r.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = r.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let counts = ints
        .iter()
        .map(|v| (v / &g).to_usize().ok_or_else(|| Error::Input("subdivision too fine".into())))
        .collect::<Result<_>>()?;
    Ok((counts, BigRational::new(g, den)))
}

/// Cuts every parallelogram into congruent cells of the largest common
/// size. Marks are carried to the corresponding vertices; the frame is
/// made positively oriented.
pub fn refine_rational(p: &PDecomposition) -> Result<PDecomposition> {
    let cx = PlanarComplex::realize(p)?;
    let o = &cx.origami;
    let (n1, d1) = subdivide(&ratios(&cx.s1)?)?;
    let (n2, d2) = subdivide(&ratios(&cx.s2)?)?;
    let mut offset = Vec::with_capacity(o.n());
    let mut total = 0;
    for c in 0..o.n() {
        offset.push(total);
        total += n1[c] * n2[c];
    }
    let cells = |c: usize| (n1[c], n2[c]);
    // Dense index of subcell (i, j) of the dense cell `d`; the negative sheet
    // is the positive one turned by a half turn.
    let dense = |d: usize, i: usize, j: usize| -> usize {
        let c = d / 2;
        let (m1, m2) = cells(c);
        if d % 2 == 0 {
            2 * (offset[c] + i + m1 * j)
        } else {
            2 * (offset[c] + (m1 - 1 - i) + m1 * (m2 - 1 - j)) + 1
        }
    };
    let mut x = vec![0; 2 * total];
    let mut y = vec![0; 2 * total];
    for d in 0..2 * o.n() {
        let (m1, m2) = cells(d / 2);
        for j in 0..m2 {
            for i in 0..m1 {
                let here = dense(d, i, j);
                x[here] = if i + 1 < m1 { dense(d, i + 1, j) } else { dense(o.x().apply(d), 0, j) };
                y[here] = if j + 1 < m2 { dense(d, i, j + 1) } else { dense(o.y().apply(d), i, 0) };
            }
        }
    }
    let refined = ExtendedOrigami::new(
        vec![Scalar::one(); total],
        SignedPerm::from_images(x)?,
        SignedPerm::from_images(y)?,
    )?;
    let oriented = p.oriented();
    let mut marks = MarkSet::new();
    for (label, &r) in oriented.marks.iter() {
        let (m1, m2) = cells(r / 2);
        marks.insert(label.clone(), dense(r, m1 - 1, m2 - 1));
    }
    let ratio = Scalar::from_rational(d2 / d1);
    Ok(PDecomposition {
        frame: [cx.u1.clone(), cx.u2.clone()],
        k_sq: &oriented.k_sq * &ratio.square(),
        origami: refined,
        marks,
        punctures: p.punctures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::surface_type;
    use crate::iso::find_isomorphism;
    use crate::origami::tests::{o1, o2};

    #[test]
    fn unit_moduli_are_unchanged() {
        let p = PDecomposition::standard(o1());
        let r = refine_rational(&p).unwrap();
        assert!(find_isomorphism(&o1(), &r.origami, None).unwrap().is_some());
        assert_eq!(r.k_sq, Scalar::one());
    }

    #[test]
    fn stacked_cells_split_into_squares() {
        let o = ExtendedOrigami::from_cycles(2, &[], &[vec![1, 2]])
            .unwrap()
            .with_moduli(vec![Scalar::one(), Scalar::from_int(2)])
            .unwrap();
        let p = PDecomposition::standard(o.clone());
        let r = refine_rational(&p).unwrap();
        assert_eq!(r.origami.n(), 3);
        assert!(r.origami.validate().is_valid());
        assert_eq!(surface_type(&r.origami).unwrap().genus, surface_type(&o).unwrap().genus);
    }

    #[test]
    fn marks_follow_their_vertex() {
        let o = o2();
        let marks = MarkSet::from_cycles(&o, &[("a".into(), vec![-1]), ("c".into(), vec![1])]).unwrap();
        let p = PDecomposition::standard(o).with_marks(marks.clone());
        let r = refine_rational(&p).unwrap();
        assert_eq!(r.marks.describe(&r.origami).unwrap(), marks.describe(&p.origami).unwrap());
    }
}
