//! Exact elements of Q(sqrt d) for a single square-free `d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b*sqrt(d)` with rational `a`, `b`.
///
/// Rational values are normalized to `d = 1, b = 0`, so structural
/// equality is numeric equality. Mixing two different irrational fields
/// is a programming error and panics; inputs are checked at parse time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn merge_fields(d1: u32, d2: u32) -> u32 {
    match (d1, d2) {
        (1, d) | (d, 1) => d,
        (d, e) if d == e => d,
        (d, e) => panic!("mixed quadratic fields Q(sqrt {d}) and Q(sqrt {e})"),
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let m = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&m * &m) == q.denom() {
        Some(BigRational::new(n, m))
    } else {
        None
    }
}

/// True when `d` is a square-free integer greater than one.
pub fn is_squarefree(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u32;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        if b.is_zero() || d == 1 {
            let a = if d == 1 { a + b } else { a };
            Scalar { a, b: BigRational::zero(), d: 1 }
        } else {
            Scalar { a, b, d }
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u32) -> Self {
        assert!(is_squarefree(d), "d = {d} must be square-free and > 1");
        Scalar { a: BigRational::zero(), b: BigRational::one(), d }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Field discriminant; 1 for rational values.
    pub fn field(&self) -> u32 {
        self.d
    }

    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        if self.b.is_zero() {
            return Scalar::from_rational(self.a.recip());
        }
        let n = self.norm();
        Scalar::new(&self.a / &n, -(&self.b / &n), self.d)
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Exact square root inside the field, choosing the non-negative root.
    /// `field` lets a rational radicand return a multiple of `sqrt(field)`.
    pub fn sqrt_exact(&self, field: u32) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let root = if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                Some(Scalar::from_rational(r))
            } else if field > 1 {
                let dq = BigRational::from_integer(BigInt::from(field));
                rational_sqrt(&(&self.a / &dq))
                    .map(|y| Scalar::new(BigRational::zero(), y, field))
            } else {
                None
            }
        } else {
            let r = rational_sqrt(&self.norm())?;
            let two = BigRational::from_integer(BigInt::from(2));
            [&self.a + &r, &self.a - &r].iter().find_map(|t| {
                let x = rational_sqrt(&(t / &two))?;
                if x.is_zero() {
                    return None;
                }
                let y = &self.b / (&two * &x);
                Some(Scalar::new(x, y, self.d))
            })
        }?;
        let root = root.abs();
        (root.square() == *self).then_some(root)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b.is_zero() && other.b.is_zero() {
            return self.a.cmp(&other.a);
        }
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let d = merge_fields(self.d, rhs.d);
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let d = merge_fields(self.d, rhs.d);
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, true) => return Scalar::from_rational(&self.a * &rhs.a),
            (true, false) => return Scalar::new(&self.a * &rhs.a, &self.a * &rhs.b, rhs.d),
            (false, true) => return Scalar::new(&self.a * &rhs.a, &self.b * &rhs.a, self.d),
            (false, false) => {}
        }
        let d = merge_fields(self.d, rhs.d);
        let dq = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dq;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::new(a, b, d)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if rhs.b.is_zero() {
            assert!(!rhs.a.is_zero(), "division by zero");
            return Scalar::new(&self.a / &rhs.a, &self.b / &rhs.a, self.d);
        }
        self * &rhs.recip()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Writes the text syntax `p/q+r/s*w`, where `w` stands for `sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&fmt_rat(&self.a));
        }
        let b = &self.b;
        if b.is_positive() && !out.is_empty() {
            out.push('+');
        }
        if b.is_one() {
            out.push('w');
        } else if (-b).is_one() {
            out.push_str("-w");
        } else {
            out.push_str(&fmt_rat(b));
            out.push_str("*w");
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{self}")
        } else {
            write!(f, "{self} [w^2={}]", self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Scalar {
        Scalar::sqrt_of(2)
    }

    #[test]
    fn field_arithmetic() {
        let w = r2();
        assert_eq!(&w * &w, Scalar::from_int(2));
        let x = Scalar::one() + &w;
        let inv = x.recip();
        assert_eq!(&x * &inv, Scalar::one());
        assert_eq!(inv, &w - Scalar::one());
        assert!((&w - Scalar::from_frac(7, 5)).is_positive());
        assert!((&w - Scalar::from_frac(3, 2)).is_negative());
    }

    #[test]
    fn ordering_matches_real_embedding() {
        let w = r2();
        let vals = [
            Scalar::from_frac(-3, 2),
            -&w,
            Scalar::zero(),
            &w - Scalar::one(),
            Scalar::one(),
            w.clone(),
            Scalar::from_int(2) * &w,
        ];
        for i in 0..vals.len() {
            for j in 0..vals.len() {
                assert_eq!(vals[i].cmp(&vals[j]), i.cmp(&j), "{:?} vs {:?}", vals[i], vals[j]);
                let fi = vals[i].to_f64();
                let fj = vals[j].to_f64();
                assert_eq!(fi.partial_cmp(&fj).unwrap(), i.cmp(&j));
            }
        }
    }

    #[test]
    fn exact_square_roots() {
        let w = r2();
        let x = Scalar::from_int(3) + Scalar::from_int(2) * &w;
        assert_eq!(x.sqrt_exact(2), Some(Scalar::one() + &w));
        assert_eq!(Scalar::from_int(2).sqrt_exact(2), Some(w.clone()));
        assert_eq!(Scalar::from_frac(9, 4).sqrt_exact(1), Some(Scalar::from_frac(3, 2)));
        assert_eq!(Scalar::from_int(2).sqrt_exact(1), None);
        assert_eq!(Scalar::from_int(-4).sqrt_exact(1), None);
        let half = Scalar::from_frac(1, 2);
        assert_eq!(half.sqrt_exact(2), Some(&w / Scalar::from_int(2)));
    }

    #[test]
    fn rational_normalization() {
        let w = r2();
        let z = &w - &w;
        assert_eq!(z, Scalar::zero());
        assert_eq!(z.field(), 1);
        assert_eq!(format!("{}", Scalar::from_frac(1, 2) + Scalar::from_frac(3, 4) * &w), "1/2+3/4*w");
        assert_eq!(format!("{}", Scalar::one() - &w), "1-w");
    }
}
