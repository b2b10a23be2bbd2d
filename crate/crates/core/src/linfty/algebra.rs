use std::collections::BTreeMap;

use crate::coalgebra::{is_codifferential, normalize, words_up_to_degree, Cogenerator, StructureMaps, Word};
use crate::error::{Error, Result};
use crate::exactla::{sign_scalar, ChainComplex, GradedLinearMap, GradedSpace, Vector};

/// Sign relating symmetric structure maps on sL to skew brackets on L for
/// inputs of the given (unsuspended) degrees, in order: the product of
/// (−1)^{m(m−1)/2} and the Koszul sign of applying (s⁻¹)^{⊗m}.
/// Returns `true` when the sign is −1.
pub fn suspension_sign(degrees: &[i32]) -> bool {
    let m = degrees.len() as i64;
    let mut e = m * (m - 1) / 2;
    for (i, &d) in degrees.iter().enumerate() {
        e += (m - 1 - i as i64) * (d as i64 + 1);
    }
    e.rem_euclid(2) == 1
}

/// One value of a multilinear map on basis elements: `inputs` in the given
/// order, `output` in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub inputs: Vec<usize>,
    pub output: Vector,
}

/// Converts skew values on ordered basis tuples into symmetric data on
/// canonical words of sV. Entries for the same word must agree.
pub(crate) fn skew_to_symmetric(
    entries: &[BracketEntry],
    degrees: &[i32],
    susp: &[i32],
    shift: i32,
) -> Result<StructureMaps> {
    let mut out = StructureMaps::new(shift);
    let mut seen: BTreeMap<Word, Vector> = BTreeMap::new();
    for e in entries {
        if e.inputs.is_empty() {
            return Err(Error::InvalidInput("bracket with no inputs".into()));
        }
        if let Some(&i) = e.inputs.iter().find(|&&i| i >= degrees.len()) {
            return Err(Error::InvalidInput(format!("input index {i} out of range")));
        }
        let in_degs: Vec<i32> = e.inputs.iter().map(|&i| degrees[i]).collect();
        let conv = suspension_sign(&in_degs);
        let Some((neg, w)) = normalize(&e.inputs, susp) else {
            if e.output.is_zero() {
                continue;
            }
            return Err(Error::InvalidInput(format!(
                "value on {:?} must vanish by graded skew-symmetry",
                e.inputs
            )));
        };
        let v = e.output.scaled(&sign_scalar(conv != neg));
        if let Some(prev) = seen.get(&w) {
            if *prev != v {
                return Err(Error::InvalidInput(format!(
                    "inconsistent values given for inputs {:?} up to permutation",
                    e.inputs
                )));
            }
            continue;
        }
        seen.insert(w.clone(), v.clone());
        out.set(w, v);
    }
    Ok(out)
}

/// Inverse of `skew_to_symmetric`: one entry per stored canonical word,
/// with inputs in ascending index order.
pub(crate) fn symmetric_to_skew(data: &StructureMaps, degrees: &[i32]) -> Vec<BracketEntry> {
    data.iter()
        .map(|(w, v)| {
            let in_degs: Vec<i32> = w.letters().iter().map(|&i| degrees[i]).collect();
            BracketEntry { inputs: w.letters().to_vec(), output: v.scaled(&sign_scalar(suspension_sign(&in_degs))) }
        })
        .collect()
}

/// Evaluates skew data on an ordered tuple of basis elements.
pub(crate) fn skew_eval(data: &StructureMaps, inputs: &[usize], degrees: &[i32], susp: &[i32]) -> Vector {
    let in_degs: Vec<i32> = inputs.iter().map(|&i| degrees[i]).collect();
    data.eval_tuple(inputs, susp).scaled(&sign_scalar(suspension_sign(&in_degs)))
}

/// Multilinear extension of `skew_eval` to vectors.
pub(crate) fn skew_eval_vectors(data: &StructureMaps, xs: &[Vector], degrees: &[i32], susp: &[i32]) -> Vector {
    let mut out = Vector::zero();
    let mut idx = vec![0usize; xs.len()];
    fn rec(
        k: usize,
        xs: &[Vector],
        idx: &mut Vec<usize>,
        coeff: crate::exactla::Scalar,
        data: &StructureMaps,
        degrees: &[i32],
        susp: &[i32],
        out: &mut Vector,
    ) {
        if k == xs.len() {
            out.add_scaled(&skew_eval(data, idx, degrees, susp), &coeff);
            return;
        }
        for (i, c) in xs[k].iter() {
            idx[k] = i;
            rec(k + 1, xs, idx, &coeff * c, data, degrees, susp, out);
        }
    }
    rec(0, xs, &mut idx, num_traits::One::one(), data, degrees, susp, &mut out);
    out
}

/// A Lie n-algebra: a graded space concentrated in degrees 0..n−1 with a
/// codifferential on S̄(sL), stored through its arity-one projections δ¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieNAlgebra {
    space: GradedSpace,
    n: usize,
    codiff: StructureMaps,
    susp: Vec<i32>,
}

impl LieNAlgebra {
    /// Validates and wraps a codifferential. `n` defaults to top degree + 1.
    pub fn new(space: GradedSpace, n: Option<usize>, codiff: StructureMaps) -> Result<Self> {
        if let Some(d) = space.degrees().iter().find(|&&d| d < 0) {
            return Err(Error::InvalidInput(format!("negative degree {d} in a Lie n-algebra")));
        }
        let top = space.max_degree().unwrap_or(0);
        let n = match n {
            Some(n) if (n as i32) < top + 1 => {
                return Err(Error::InvalidInput(format!("degree {top} does not fit a Lie {n}-algebra")));
            }
            Some(n) if n == 0 => return Err(Error::InvalidInput("n must be positive".into())),
            Some(n) => n,
            None => (top + 1) as usize,
        };
        if codiff.shift() != -1 {
            return Err(Error::InvalidInput("codifferential data must have degree -1".into()));
        }
        let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
        codiff.check_homogeneous(&susp, &susp)?;
        let l = LieNAlgebra { space, n, codiff, susp };
        let words = l.verification_words();
        if let Err(w) = is_codifferential(&l.codiff, &l.susp, &words) {
            return Err(Error::JacobiViolation {
                arity: w.arity,
                witness: format!("{} ↦ {}", w.word.display(&l.suspended_names()), l.display_vector(&w.defect)),
            });
        }
        Ok(l)
    }

    /// From skew brackets ℓ_k given on ordered basis tuples.
    pub fn from_brackets(space: GradedSpace, n: Option<usize>, brackets: &[BracketEntry]) -> Result<Self> {
        let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
        let codiff = skew_to_symmetric(brackets, space.degrees(), &susp, -1)?;
        LieNAlgebra::new(space, n, codiff)
    }

    /// The abelian Lie n-algebra of a chain complex (ℓ₁ = d, no higher brackets).
    pub fn abelian(complex: &ChainComplex) -> Result<Self> {
        let space = complex.space().clone();
        let entries: Vec<BracketEntry> = (0..space.dim())
            .map(|j| BracketEntry { inputs: vec![j], output: complex.d().column(j).clone() })
            .collect();
        LieNAlgebra::from_brackets(space, None, &entries)
    }

    pub fn zero() -> Self {
        LieNAlgebra::new(GradedSpace::zero(), Some(1), StructureMaps::new(-1)).expect("zero algebra is valid")
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degrees(&self) -> &[i32] {
        self.space.degrees()
    }

    /// Degrees of the suspension sL.
    pub fn suspended_degrees(&self) -> &[i32] {
        &self.susp
    }

    pub fn suspended_names(&self) -> Vec<String> {
        self.space.names().iter().map(|n| format!("s{n}")).collect()
    }

    pub fn codifferential(&self) -> &StructureMaps {
        &self.codiff
    }

    /// Top degree of sL (0 for the zero algebra).
    pub fn top_suspended_degree(&self) -> i32 {
        self.susp.iter().copied().max().unwrap_or(0)
    }

    /// Largest arity that can carry a nonzero bracket.
    pub fn arity_bound(&self) -> usize {
        (self.top_suspended_degree() + 1).max(1) as usize
    }

    /// Words on which δ² = 0 must be checked: beyond this degree both sides
    /// vanish for degree reasons.
    pub fn verification_words(&self) -> Vec<Word> {
        words_up_to_degree(&self.susp, self.top_suspended_degree() + 2)
    }

    /// ℓ_k on an ordered tuple of basis elements.
    pub fn bracket(&self, inputs: &[usize]) -> Vector {
        skew_eval(&self.codiff, inputs, self.degrees(), &self.susp)
    }

    /// ℓ_k extended multilinearly.
    pub fn bracket_vectors(&self, xs: &[Vector]) -> Vector {
        skew_eval_vectors(&self.codiff, xs, self.degrees(), &self.susp)
    }

    pub fn to_brackets(&self) -> Vec<BracketEntry> {
        symmetric_to_skew(&self.codiff, self.degrees())
    }

    /// ℓ₁ as a graded linear map of degree −1.
    pub fn differential(&self) -> GradedLinearMap {
        let cols = (0..self.dim()).map(|j| self.codiff.linear_column(j)).collect();
        GradedLinearMap::new(self.space.clone(), self.space.clone(), -1, cols).expect("ℓ₁ is homogeneous")
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::new(self.differential()).expect("ℓ₁ squares to zero")
    }

    pub fn is_abelian(&self) -> bool {
        self.codiff.is_strict()
    }

    pub fn display_vector(&self, v: &Vector) -> String {
        display_vector(v, self.space.names())
    }
}

pub fn display_vector(v: &Vector, names: &[String]) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(i, c)| format!("({})·{}", crate::exactla::format_scalar(c), names[i]))
        .collect::<Vec<_>>()
        .join(" + ")
}

impl Cogenerator for LieNAlgebra {
    fn eval(&self, w: &Word) -> Vector {
        self.codiff.eval(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::Word;

    #[test]
    fn solvable_bracket_gives_positive_structure_map() {
        let space = GradedSpace::new(vec![("e1".into(), 0), ("e2".into(), 0)]).unwrap();
        let l = LieNAlgebra::from_brackets(space, None, &[BracketEntry { inputs: vec![0, 1], output: Vector::unit(0) }])
            .unwrap();
        assert_eq!(l.codifferential().eval(&Word::from_sorted(vec![0, 1])), Vector::unit(0));
        assert_eq!(l.bracket(&[1, 0]), Vector::unit(0).negated());
    }

    #[test]
    fn suspension_sign_small_cases() {
        assert!(!suspension_sign(&[5]));
        assert!(!suspension_sign(&[0, 0]));
        assert!(suspension_sign(&[1, 0]));
        assert!(!suspension_sign(&[0, 0, 0]));
        assert!(suspension_sign(&[1, 1, 1]));
    }

    #[test]
    fn inconsistent_skew_values_rejected() {
        let space = GradedSpace::new(vec![("a".into(), 0), ("b".into(), 0)]).unwrap();
        let r = LieNAlgebra::from_brackets(
            space,
            None,
            &[
                BracketEntry { inputs: vec![0, 1], output: Vector::unit(0) },
                BracketEntry { inputs: vec![1, 0], output: Vector::unit(0) },
            ],
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
