//! Text syntax for scalars (`p/q+r/s*w`, `w = sqrt d`) and matrices (`a,b;c,d`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{is_squarefree, Mat2, Scalar};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    d: u32,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(format!("\"{}\"", self.src), self.pos, msg)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let m = self.integer()?;
            if m == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            Ok(BigRational::new(n, m))
        } else {
            Ok(BigRational::from_integer(n))
        }
    }

    fn root(&mut self) -> Result<Scalar> {
        self.pos += 1;
        if self.d == 1 {
            return Err(self.err("'w' used but the field is Q (set field.d)"));
        }
        Ok(Scalar::sqrt_of(self.d))
    }

    /// term := rational ['*' 'w'] | 'w' ['*' rational]
    fn term(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'w') => {
                let w = self.root()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let q = self.rational()?;
                    return Ok(w * Scalar::from_rational(q));
                }
                Ok(w)
            }
            Some(c) if c.is_ascii_digit() => {
                let q = Scalar::from_rational(self.rational()?);
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() != Some(b'w') {
                        return Err(self.err("expected 'w' after '*'"));
                    }
                    let w = self.root()?;
                    return Ok(q * w);
                }
                Ok(q)
            }
            _ => Err(self.err("expected a number or 'w'")),
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                None if !first => return Ok(acc),
                _ if first => false,
                _ => return Ok(acc),
            };
            let t = self.term()?;
            acc = if neg { acc - t } else { acc + t };
            first = false;
        }
    }
}

/// Parses a scalar in `Q(sqrt d)`; `d = 1` means plain rationals.
pub fn parse_scalar(text: &str, d: u32) -> Result<Scalar> {
    if d != 1 && !is_squarefree(d) {
        return Err(Error::Input(format!("field.d = {d} is not square-free")));
    }
    let mut c = Cursor { src: text, bytes: text.as_bytes(), pos: 0, d };
    let s = c.expr()?;
    if c.peek().is_some() {
        return Err(c.err("unexpected trailing characters"));
    }
    Ok(s)
}

/// Parses `a,b;c,d` into `[[a,b],[c,d]]` and rejects singular matrices.
pub fn parse_matrix(text: &str, d: u32) -> Result<Mat2> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(Error::parse(format!("\"{text}\""), 0, "expected two rows separated by ';'"));
    }
    let mut entries = Vec::with_capacity(4);
    let mut offset = 0;
    for row in &rows {
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 2 {
            return Err(Error::parse(format!("\"{text}\""), offset, "expected two entries separated by ','"));
        }
        for col in cols {
            let s = parse_scalar(col, d).map_err(|e| match e {
                Error::Parse { pos, msg, .. } => Error::parse(format!("\"{text}\""), offset + pos, msg),
                other => other,
            })?;
            entries.push(s);
            offset += col.len() + 1;
        }
    }
    let [a, b, c, dd]: [Scalar; 4] = entries.try_into().expect("four entries");
    let m = Mat2::new(a, b, c, dd);
    if !m.is_invertible() {
        return Err(Error::SingularMatrix(text.to_string()));
    }
    Ok(m)
}
