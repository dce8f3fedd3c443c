//! P-decompositions: an oriented frame of two directions, the squared
//! modulus of cell 1, an extended origami and optional marked vertices.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Direction, Scalar, Vec2};
use crate::iso::MarkSet;
use crate::origami::{ExtendedOrigami, SignedPerm};

/// Which vertices of the parallelograms count as singular points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum PunctureMode {
    /// Every vertex class is a puncture.
    #[default]
    AllVertices,
    /// Only points of nonzero order (plus marked points).
    ConePoints,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PDecomposition {
    /// `x` moves along `+frame[0]`, `y` along `+frame[1]`.
    pub frame: [Vec2; 2],
    /// Squared modulus of cell 1: `(|side along u2| / |side along u1|)^2`.
    pub k_sq: Scalar,
    pub origami: ExtendedOrigami,
    pub marks: MarkSet,
    pub punctures: PunctureMode,
}

impl PDecomposition {
    /// Horizontal/vertical frame, `k = 1`, no marks.
    pub fn standard(origami: ExtendedOrigami) -> Self {
        PDecomposition {
            frame: [Vec2::ints(1, 0), Vec2::ints(0, 1)],
            k_sq: Scalar::one(),
            origami,
            marks: MarkSet::new(),
            punctures: PunctureMode::AllVertices,
        }
    }

    pub fn with_marks(mut self, marks: MarkSet) -> Self {
        self.marks = marks;
        self
    }

    pub fn with_punctures(mut self, mode: PunctureMode) -> Self {
        self.punctures = mode;
        self
    }

    pub fn theta(&self) -> (Direction, Direction) {
        (
            Direction::new(self.frame[0].clone()).expect("nonzero frame"),
            Direction::new(self.frame[1].clone()).expect("nonzero frame"),
        )
    }

    /// Largest field discriminant among all data.
    pub fn field(&self) -> u32 {
        let mut d = self.k_sq.field();
        for v in &self.frame {
            d = d.max(v.x.field()).max(v.y.field());
        }
        self.origami.moduli().iter().fold(d, |d, m| d.max(m.field()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.frame[0].cross(&self.frame[1]).is_zero() {
            return Err(Error::DegenerateDirections(self.frame[0].to_string(), self.frame[1].to_string()));
        }
        if !self.k_sq.is_positive() {
            return Err(Error::Input(format!("k^2 = {} must be positive", self.k_sq)));
        }
        self.origami.validate().into_result()
    }

    /// An equivalent decomposition whose frame is positively oriented.
    ///
    /// Reversing `u2` replaces `y` by `y^-1`; the vertex at the top-right
    /// corner of `l` then sits at the top-right corner of `y(l)`.
    pub fn oriented(&self) -> PDecomposition {
        if self.frame[0].cross(&self.frame[1]).is_positive() {
            return self.clone();
        }
        let o = &self.origami;
        let flipped = ExtendedOrigami::new(o.moduli().to_vec(), o.x().clone(), o.y().inverse())
            .expect("same sizes");
        let y: &SignedPerm = o.y();
        PDecomposition {
            frame: [self.frame[0].clone(), self.frame[1].neg()],
            k_sq: self.k_sq.clone(),
            origami: flipped,
            marks: self.marks.map(y),
            punctures: self.punctures,
        }
    }
}

impl fmt::Display for PDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame=({}, {}) k^2={} {}", self.frame[0], self.frame[1], self.k_sq, self.origami)
    }
}
