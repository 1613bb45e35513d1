//! Mapping class group of the once-punctured torus acting on fiber points.
//!
//! Generators are the Dehn twists `τ_α: (a, b) ↦ (a, ba)` and
//! `τ_β: (a, b) ↦ (ab, b)`. Both preserve the commutator exactly.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fiber::RepPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Alpha,
    AlphaInv,
    Beta,
    BetaInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Alpha, Letter::AlphaInv, Letter::Beta, Letter::BetaInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::Alpha => Letter::AlphaInv,
            Letter::AlphaInv => Letter::Alpha,
            Letter::Beta => Letter::BetaInv,
            Letter::BetaInv => Letter::Beta,
        }
    }

    /// Action on a fiber point, without renormalization.
    pub fn act(self, p: &RepPoint) -> RepPoint {
        let (a, b) = (*p.a(), *p.b());
        match self {
            Letter::Alpha => p.moved(a, b * a, 1),
            Letter::AlphaInv => p.moved(a, b * a.inverse(), 1),
            Letter::Beta => p.moved(a * b, b, 1),
            Letter::BetaInv => p.moved(a * b.inverse(), b, 1),
        }
    }

    /// Image in SL(2, ℤ), acting on row vectors of angle pairs `(θ_a, θ_b)`.
    pub fn homology(self) -> HomologyMatrix {
        let m = match self {
            Letter::Alpha => [[1, 1], [0, 1]],
            Letter::AlphaInv => [[1, -1], [0, 1]],
            Letter::Beta => [[1, 0], [1, 1]],
            Letter::BetaInv => [[1, 0], [-1, 1]],
        };
        HomologyMatrix(m)
    }

    fn symbol(self) -> char {
        match self {
            Letter::Alpha => 'a',
            Letter::AlphaInv => 'A',
            Letter::Beta => 'b',
            Letter::BetaInv => 'B',
        }
    }
}

/// Finite word in the Dehn twists, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistWord {
    pub letters: Vec<Letter>,
}

impl TwistWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        TwistWord { letters }
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// Parses `a`, `A`, `b`, `B` for `τ_α`, `τ_α⁻¹`, `τ_β`, `τ_β⁻¹`; whitespace is ignored.
impl FromStr for TwistWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            letters.push(match ch {
                'a' => Letter::Alpha,
                'A' => Letter::AlphaInv,
                'b' => Letter::Beta,
                'B' => Letter::BetaInv,
                other => {
                    return Err(Error::InvalidInput(format!("unknown twist letter {other:?}")))
                }
            });
        }
        Ok(TwistWord { letters })
    }
}

/// Integer 2×2 matrix of determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyMatrix(pub [[i64; 2]; 2]);

impl HomologyMatrix {
    pub fn identity() -> Self {
        Self([[1, 0], [0, 1]])
    }

    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        if det != 1 {
            return Err(Error::InvalidInput(format!("determinant {det} is not 1")));
        }
        Ok(Self(m))
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn checked_mul(&self, other: &HomologyMatrix) -> Option<HomologyMatrix> {
        let (x, y) = (&self.0, &other.0);
        let entry = |i: usize, j: usize| -> Option<i64> {
            x[i][0].checked_mul(y[0][j])?.checked_add(x[i][1].checked_mul(y[1][j])?)
        };
        Some(HomologyMatrix([
            [entry(0, 0)?, entry(0, 1)?],
            [entry(1, 0)?, entry(1, 1)?],
        ]))
    }
}

impl fmt::Display for HomologyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// `τ_α: (a, b) ↦ (a, ba)`.
pub fn dehn_alpha(p: &RepPoint) -> RepPoint {
    Letter::Alpha.act(p)
}

/// `τ_β: (a, b) ↦ (ab, b)`.
pub fn dehn_beta(p: &RepPoint) -> RepPoint {
    Letter::Beta.act(p)
}

/// Applies the letters of `w` left to right, renormalizing on the usual cadence.
pub fn apply_word(w: &TwistWord, p: &RepPoint) -> Result<RepPoint> {
    let mut q = *p;
    for l in &w.letters {
        q = l.act(&q).maintain()?;
    }
    Ok(q)
}

/// Product of the letter images in word order; fails only on `i64` overflow.
pub fn homology_action(w: &TwistWord) -> Result<HomologyMatrix> {
    let mut m = HomologyMatrix::identity();
    for l in &w.letters {
        m = m.checked_mul(&l.homology()).ok_or_else(|| {
            Error::InvalidInput(format!("homology image of a word of length {} overflows i64", w.len()))
        })?;
    }
    Ok(m)
}

pub fn is_hyperbolic(m: &HomologyMatrix) -> bool {
    m.trace().abs() > 2
}

/// Uniform letters, never following a letter by its inverse.
pub fn random_word<R: Rng + ?Sized>(length: usize, rng: &mut R) -> TwistWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    for _ in 0..length {
        let next = match letters.last() {
            None => Letter::ALL[rng.random_range(0..4)],
            Some(prev) => {
                let forbidden = prev.inverse();
                let allowed: Vec<Letter> =
                    Letter::ALL.into_iter().filter(|l| *l != forbidden).collect();
                allowed[rng.random_range(0..3)]
            }
        };
        letters.push(next);
    }
    TwistWord { letters }
}
