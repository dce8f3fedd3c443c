//! Reduced words in the free group on `x`, `y`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    X,
    XInv,
    Y,
    YInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::Y, Letter::XInv, Letter::YInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::Y => Letter::YInv,
            Letter::YInv => Letter::Y,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::XInv => 'X',
            Letter::Y => 'y',
            Letter::YInv => 'Y',
        }
    }
}

/// A freely reduced word; `X` and `Y` denote `x^-1` and `y^-1` in text form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends a letter, cancelling against the last one if possible.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// The automorphism `x -> x^-1, y -> y^-1`.
    pub fn gamma_minus_i(&self) -> Word {
        Word(self.0.iter().map(|l| l.inverse()).collect())
    }

    /// The commutator `x y x^-1 y^-1`.
    pub fn commutator() -> Word {
        Word(vec![Letter::X, Letter::Y, Letter::XInv, Letter::YInv])
    }

    pub fn parse(text: &str) -> Result<Word> {
        let mut w = Word::empty();
        for (pos, ch) in text.chars().enumerate() {
            let l = match ch {
                'x' => Letter::X,
                'X' => Letter::XInv,
                'y' => Letter::Y,
                'Y' => Letter::YInv,
                c if c.is_whitespace() => continue,
                _ => return Err(Error::parse(format!("word \"{text}\""), pos, "expected one of x, X, y, Y")),
            };
            w.push(l);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let w = Word::parse("xyYx").unwrap();
        assert_eq!(w.to_string(), "xx");
        let c = Word::commutator();
        assert_eq!(c.concat(&c.inverse()), Word::empty());
        assert_eq!(c.gamma_minus_i().to_string(), "XYxy");
        assert!(Word::parse("xz").is_err());
    }
}
