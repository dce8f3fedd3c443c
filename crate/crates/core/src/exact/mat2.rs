//! Planar vectors, projective directions and 2x2 matrices over a quadratic field.

use std::fmt;

use num_integer::Integer;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::Scalar;

/// A planar vector with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2 { x: Scalar::from_int(x), y: Scalar::from_int(y) }
    }

    pub fn zero() -> Self {
        Vec2::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn scale(&self, s: &Scalar) -> Vec2 {
        Vec2 { x: &self.x * s, y: &self.y * s }
    }

    pub fn neg(&self) -> Vec2 {
        Vec2 { x: -&self.x, y: -&self.y }
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Vec2) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A nonzero vector up to nonzero scalar multiples, stored canonically.
///
/// Rational directions are stored as coprime integers with the first nonzero
/// coordinate positive; irrational ones are scaled so that coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Direction(Vec2);

impl Direction {
    pub fn new(v: Vec2) -> Option<Self> {
        if v.is_zero() {
            return None;
        }
        let lead = if v.x.is_zero() { v.y.clone() } else { v.x.clone() };
        if v.x.is_rational() && v.y.is_rational() {
            let (p, q) = (v.x.rational_part(), v.y.rational_part());
            let den = p.denom().lcm(q.denom());
            let pi = (p * BigRational::from_integer(den.clone())).to_integer();
            let qi = (q * BigRational::from_integer(den)).to_integer();
            let mut g = pi.gcd(&qi);
            if lead.is_negative() {
                g = -g;
            }
            let to_s = |n: BigInt| Scalar::from_rational(BigRational::from_integer(n / &g));
            return Some(Direction(Vec2::new(to_s(pi), to_s(qi))));
        }
        let inv = lead.recip();
        Some(Direction(v.scale(&inv)))
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Direction::new(Vec2::ints(x, y)).expect("nonzero direction")
    }

    pub fn horizontal() -> Self {
        Direction::ints(1, 0)
    }

    pub fn vertical() -> Self {
        Direction::ints(0, 1)
    }

    /// The canonical representative vector.
    pub fn vector(&self) -> &Vec2 {
        &self.0
    }

    pub fn is_parallel(&self, o: &Direction) -> bool {
        self.0.cross(&o.0).is_zero()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::ints(1, 0, 0, 1)
    }

    /// `[[1,1],[0,1]]`.
    pub fn t() -> Self {
        Mat2::ints(1, 1, 0, 1)
    }

    /// `[[0,-1],[1,0]]`.
    pub fn s() -> Self {
        Mat2::ints(0, -1, 1, 0)
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        Mat2 {
            a: &self.d / &det,
            b: -(&self.b / &det),
            c: -(&self.c / &det),
            d: &self.a / &det,
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        (0..n).fold(Mat2::identity(), |acc, _| acc.mul(self))
    }

    /// Equality in PSL: `A` and `-A` coincide.
    pub fn eq_projective(&self, o: &Mat2) -> bool {
        self == o || *self == o.neg()
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|s| s.is_rational() && s.rational_part().is_integer())
    }

    /// Largest field discriminant among the entries.
    pub fn field(&self) -> u32 {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|s| s.field()).max().unwrap_or(1)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// The linear map with derivative `A`: `(xi, eta) -> (a xi + b eta, c xi + d eta)`.
///
/// `T = [[1,1],[0,1]]` is the horizontal shear and `T_A(T_B(v)) = T_{AB}(v)`.
pub fn apply_ta(m: &Mat2, p: &Vec2) -> Vec2 {
    Vec2 { x: &m.a * &p.x + &m.b * &p.y, y: &m.c * &p.x + &m.d * &p.y }
}

pub fn direction_image(m: &Mat2, theta: &Direction) -> Direction {
    Direction::new(apply_ta(m, theta.vector())).expect("invertible matrix maps nonzero to nonzero")
}

/// `rho^2 = (|T_A u2|^2 / |u2|^2) * (|u1|^2 / |T_A u1|^2)`.
///
/// Returns `None` when the directions are parallel or `A` is singular.
pub fn rho_sq(m: &Mat2, theta1: &Direction, theta2: &Direction) -> Option<Scalar> {
    if theta1.is_parallel(theta2) || !m.is_invertible() {
        return None;
    }
    let (u1, u2) = (theta1.vector(), theta2.vector());
    let (a1, a2) = (apply_ta(m, u1), apply_ta(m, u2));
    Some(a2.norm_sq() / u2.norm_sq() * (u1.norm_sq() / a1.norm_sq()))
}

/// `sin^2` of the angle between two directions.
pub fn sin_sq(theta1: &Direction, theta2: &Direction) -> Scalar {
    let (u1, u2) = (theta1.vector(), theta2.vector());
    u1.cross(u2).square() / (u1.norm_sq() * u2.norm_sq())
}

/// Integer entries of an integral matrix, if they fit in `i64`.
pub fn integer_entries(m: &Mat2) -> Option<[i64; 4]> {
    use num_traits::ToPrimitive;
    let conv = |s: &Scalar| -> Option<i64> {
        if s.is_rational() && s.rational_part().is_integer() {
            s.rational_part().to_integer().to_i64()
        } else {
            None
        }
    };
    Some([conv(&m.a)?, conv(&m.b)?, conv(&m.c)?, conv(&m.d)?])
}
