use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::word::{multiply, normalize, Word};
use crate::exactla::{format_scalar, sign_scalar, Scalar, Vector};

/// Element of S(V): a finite combination of canonical words. Zero
/// coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SymElement(BTreeMap<Word, Scalar>);

impl SymElement {
    pub fn zero() -> Self {
        SymElement(BTreeMap::new())
    }

    pub fn unit() -> Self {
        SymElement::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        let mut s = SymElement::zero();
        s.add_term(w, Scalar::one());
        s
    }

    /// A vector of V as an element of S¹(V).
    pub fn from_vector(v: &Vector) -> Self {
        let mut s = SymElement::zero();
        for (i, c) in v.iter() {
            s.add_term(Word::letter(i), c.clone());
        }
        s
    }

    /// The length-one part as a vector.
    pub fn linear_part(&self) -> Vector {
        let mut v = Vector::zero();
        for (w, c) in &self.0 {
            if w.len() == 1 {
                v.add_entry(w.letters()[0], c.clone());
            }
        }
        v
    }

    /// Normalizes the ordered product of `letters` and adds it with coefficient `c`.
    pub fn add_product(&mut self, letters: &[usize], c: &Scalar, degrees: &[i32]) {
        if let Some((neg, w)) = normalize(letters, degrees) {
            self.add_term(w, if neg { -c } else { c.clone() });
        }
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &SymElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.0 {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SymElement {
        let mut s = SymElement::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn minus(&self, other: &SymElement) -> SymElement {
        let mut s = self.clone();
        s.add_scaled(other, &-Scalar::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.0.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.0.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The component in S^p(V).
    pub fn of_length(&self, p: usize) -> SymElement {
        SymElement(self.0.iter().filter(|(w, _)| w.len() == p).map(|(w, c)| (w.clone(), c.clone())).collect())
    }

    /// Components of length in `range`.
    pub fn lengths(&self, range: std::ops::RangeInclusive<usize>) -> SymElement {
        SymElement(
            self.0
                .iter()
                .filter(|(w, _)| range.contains(&w.len()))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        )
    }

    /// Product in the graded commutative algebra S(V).
    pub fn mul(&self, other: &SymElement, degrees: &[i32]) -> SymElement {
        let mut out = SymElement::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                if let Some((neg, w)) = multiply(a, b, degrees) {
                    let c = x * y;
                    out.add_term(w, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Right multiplication by a vector (an element of S¹(V)).
    pub fn mul_vector(&self, v: &Vector, degrees: &[i32]) -> SymElement {
        let mut out = SymElement::zero();
        for (a, x) in &self.0 {
            for (i, y) in v.iter() {
                let mut letters = a.letters().to_vec();
                letters.push(i);
                out.add_product(&letters, &(x * y), degrees);
            }
        }
        out
    }

    /// Renames letters through `f` (which must map into a space with the
    /// given degrees), renormalizing.
    pub fn map_letters(&self, f: impl Fn(usize) -> usize, degrees: &[i32]) -> SymElement {
        let mut out = SymElement::zero();
        for (w, c) in &self.0 {
            let letters: Vec<usize> = w.letters().iter().map(|&i| f(i)).collect();
            out.add_product(&letters, c, degrees);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(w, c)| format!("({})·{}", format_scalar(c), w.display(names)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(w, c)| (w, format_scalar(c)))).finish()
    }
}

/// Multilinear expansion of a product of vectors v₁∨…∨v_k.
pub fn product_of_vectors(vs: &[Vector], degrees: &[i32]) -> SymElement {
    let mut acc = SymElement::unit();
    for v in vs {
        acc = acc.mul_vector(v, degrees);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

pub fn signed(neg: bool, c: &Scalar) -> Scalar {
    c * sign_scalar(neg)
}
