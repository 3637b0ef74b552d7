//! Exact rationals, points and small dense linear algebra.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `k (k + 1) / 2`, the number of pairs with repetition from `k` elements.
pub fn pairs_with_repetition(k: usize) -> i64 {
    (k * (k + 1) / 2) as i64
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Renders `p/q`, or `p` for integers.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with an optional sign; no decimals.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = |message: &str| Error::Parse {
        line: 1,
        column: 1,
        message: format!("{message}: `{s}`"),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid rational"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid rational"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// A point of `R^ground`, coordinates in ground order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn zero(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        Self(coords.into_iter().map(int).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.0[i] = Rational::one();
        p
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn dot(&self, other: &RationalPoint) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> RationalPoint {
        RationalPoint(self.0.iter().map(|x| -x).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format).collect()
    }
}

impl Add for &RationalPoint {
    type Output = RationalPoint;
    fn add(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalPoint {
    type Output = RationalPoint;
    fn sub(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Rank of a dense rational matrix, by Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the affine hull of a point set (`-1` as `None` when empty).
pub fn affine_dimension(points: &[&RationalPoint]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest.iter().map(|p| (*p - *first).0).collect();
    Some(rank(&diffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(format(&parse("6/4").unwrap()), "3/2");
        assert_eq!(format(&parse("-10").unwrap()), "-10");
        assert_eq!(format(&parse(" 8/ 4").unwrap()), "2");
        assert!(parse("1.5").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn rank_and_dimension() {
        let rows = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(&rows), 2);
        let a = RationalPoint::from_ints([1, 2, 3]);
        let b = RationalPoint::from_ints([2, 1, 3]);
        let c = RationalPoint::from_ints([3, 0, 3]);
        assert_eq!(affine_dimension(&[&a, &b, &c]), Some(1));
        assert_eq!(affine_dimension(&[&a]), Some(0));
        assert_eq!(affine_dimension(&[]), None);
    }
}
