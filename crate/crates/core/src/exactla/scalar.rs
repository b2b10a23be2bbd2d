use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational; `num_rational` keeps it reduced with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Sign as a scalar: `+1` for even exponents, `-1` for odd.
pub fn sign_scalar(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_integer(acc)
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-1.5"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(p, q));
    }
    if let Some((whole, dec)) = t.split_once('.') {
        if dec.is_empty() || !dec.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let w: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let f: BigInt = dec.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), dec.len());
        let mag = Scalar::new(w * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(p))
}

pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse vector indexed by basis position. Zero entries are never stored,
/// so structural equality is mathematical equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Vector::zero();
        v.0.insert(i, Scalar::one());
        v
    }

    pub fn from_dense(entries: &[Scalar]) -> Self {
        let mut v = Vector::zero();
        for (i, c) in entries.iter().enumerate() {
            v.add_entry(i, c.clone());
        }
        v
    }

    /// Dense coordinates on the given index list.
    pub fn restrict(&self, indices: &[usize]) -> Vec<Scalar> {
        indices.iter().map(|i| self.get(*i)).collect()
    }

    /// Inverse of `restrict`: places local coordinates at global positions.
    pub fn embed(local: &[Scalar], indices: &[usize]) -> Self {
        let mut v = Vector::zero();
        for (c, i) in local.iter().zip(indices) {
            v.add_entry(*i, c.clone());
        }
        v
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_entry(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.0 {
            self.add_entry(*i, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn negated(&self) -> Vector {
        Vector(self.0.iter().map(|(i, x)| (*i, -x)).collect())
    }

    pub fn plus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_scaled(other, &Scalar::one());
        v
    }

    pub fn minus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.add_scaled(other, &-Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Relabels indices through `f`, summing collisions.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Vector {
        let mut v = Vector::zero();
        for (i, c) in &self.0 {
            v.add_entry(f(*i), c.clone());
        }
        v
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, c)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", i, format_scalar(c))?;
        }
        write!(f, "}}")
    }
}
