use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;

use super::sym::{product_of_vectors, SymElement};
use super::word::{koszul_sign, normalize, set_partitions, words_of_length, Word};
use crate::error::{Error, Result};
use crate::exactla::{format_scalar, sign_scalar, Scalar, Vector};

/// Anything that assigns a vector to each canonical word of S̄(V): the
/// arity-one projections F¹ or δ¹ of a coalgebra map or coderivation.
pub trait Cogenerator {
    fn eval(&self, w: &Word) -> Vector;

    /// Linear extension to an element of S̄(V). The unit word maps to zero.
    fn eval_sym(&self, x: &SymElement) -> Vector {
        let mut out = Vector::zero();
        for (w, c) in x.iter() {
            if !w.is_empty() {
                out.add_scaled(&self.eval(w), c);
            }
        }
        out
    }
}

impl<F: Fn(&Word) -> Vector> Cogenerator for F {
    fn eval(&self, w: &Word) -> Vector {
        self(w)
    }
}

/// Structure maps S̄(V) → W stored on canonical words; the arity of an
/// entry is the length of its word. Used for both coalgebra morphism data
/// (shift 0) and coderivation data (shift −1).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct StructureMaps {
    shift: i32,
    entries: BTreeMap<Word, Vector>,
}

impl Cogenerator for StructureMaps {
    fn eval(&self, w: &Word) -> Vector {
        self.entries.get(w).cloned().unwrap_or_default()
    }
}

impl StructureMaps {
    pub fn new(shift: i32) -> Self {
        StructureMaps { shift, entries: BTreeMap::new() }
    }

    /// Unary map given by a column per source basis vector.
    pub fn linear(columns: &[Vector], shift: i32) -> Self {
        let mut m = StructureMaps::new(shift);
        for (i, c) in columns.iter().enumerate() {
            m.set(Word::letter(i), c.clone());
        }
        m
    }

    pub fn identity(dim: usize) -> Self {
        let cols: Vec<Vector> = (0..dim).map(Vector::unit).collect();
        StructureMaps::linear(&cols, 0)
    }

    /// Tabulates a cogenerator on the given words.
    pub fn tabulate<C: Cogenerator + ?Sized>(c: &C, words: &[Word], shift: i32) -> Self {
        let mut m = StructureMaps::new(shift);
        for w in words {
            m.set(w.clone(), c.eval(w));
        }
        m
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn set(&mut self, w: Word, v: Vector) {
        assert!(!w.is_empty(), "structure maps live on S̄(V)");
        if v.is_zero() {
            self.entries.remove(&w);
        } else {
            self.entries.insert(w, v);
        }
    }

    pub fn add(&mut self, w: Word, v: &Vector, c: &Scalar) {
        let mut cur = self.eval(&w);
        cur.add_scaled(v, c);
        self.set(w, cur);
    }

    pub fn get(&self, w: &Word) -> Option<&Vector> {
        self.entries.get(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Vector)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value on the ordered product of `letters`, with the Koszul sign of
    /// reordering them.
    pub fn eval_tuple(&self, letters: &[usize], degrees: &[i32]) -> Vector {
        match normalize(letters, degrees) {
            None => Vector::zero(),
            Some((neg, w)) => self.eval(&w).scaled(&sign_scalar(neg)),
        }
    }

    /// The arity-`m` component.
    pub fn component(&self, m: usize) -> StructureMaps {
        StructureMaps {
            shift: self.shift,
            entries: self.entries.iter().filter(|(w, _)| w.len() == m).map(|(w, v)| (w.clone(), v.clone())).collect(),
        }
    }

    /// Entries of arity at most `m`.
    pub fn truncated(&self, m: usize) -> StructureMaps {
        StructureMaps {
            shift: self.shift,
            entries: self.entries.iter().filter(|(w, _)| w.len() <= m).map(|(w, v)| (w.clone(), v.clone())).collect(),
        }
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(Word::len).max().unwrap_or(0)
    }

    /// True when all components of arity ≥ 2 vanish.
    pub fn is_strict(&self) -> bool {
        self.entries.keys().all(|w| w.len() == 1)
    }

    /// Column of the arity-one component for source basis vector `i`.
    pub fn linear_column(&self, i: usize) -> Vector {
        self.eval(&Word::letter(i))
    }

    pub fn negated(&self) -> StructureMaps {
        StructureMaps {
            shift: self.shift,
            entries: self.entries.iter().map(|(w, v)| (w.clone(), v.negated())).collect(),
        }
    }

    pub fn plus(&self, other: &StructureMaps) -> StructureMaps {
        let mut out = self.clone();
        for (w, v) in &other.entries {
            out.add(w.clone(), v, &Scalar::one());
        }
        out
    }

    pub fn minus(&self, other: &StructureMaps) -> StructureMaps {
        self.plus(&other.negated())
    }

    /// Checks that every entry is homogeneous of degree `deg(w) + shift`.
    pub fn check_homogeneous(&self, source_degrees: &[i32], target_degrees: &[i32]) -> Result<()> {
        for (w, v) in &self.entries {
            let want = w.degree(source_degrees) + self.shift;
            for i in v.support() {
                if i >= target_degrees.len() || target_degrees[i] != want {
                    return Err(Error::Inhomogeneous(format!(
                        "entry on word {:?} has a component outside degree {}",
                        w, want
                    )));
                }
            }
            if w.letters().iter().any(|&i| i >= source_degrees.len()) {
                return Err(Error::InvalidInput(format!("word {w:?} uses letters outside the source")));
            }
        }
        Ok(())
    }

    /// Renumbers target coordinates through `f`.
    pub fn map_targets(&self, f: impl Fn(&Vector) -> Vector) -> StructureMaps {
        let mut out = StructureMaps::new(self.shift);
        for (w, v) in &self.entries {
            out.set(w.clone(), f(v));
        }
        out
    }

    pub fn display(&self, source_names: &[String], target_names: &[String]) -> String {
        let mut lines = Vec::new();
        for (w, v) in &self.entries {
            let rhs: Vec<String> = v.iter().map(|(i, c)| format!("({})·{}", format_scalar(c), target_names[i])).collect();
            lines.push(format!("{} ↦ {}", w.display(source_names), rhs.join(" + ")));
        }
        lines.join("\n")
    }
}

impl std::fmt::Debug for StructureMaps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StructureMaps").field("shift", &self.shift).field("entries", &self.entries).finish()
    }
}

fn partitions_cached(m: usize) -> &'static [Vec<Vec<usize>>] {
    static CACHE: OnceLock<Vec<Vec<Vec<Vec<usize>>>>> = OnceLock::new();
    const MAX: usize = 9;
    let cache = CACHE.get_or_init(|| (0..=MAX).map(set_partitions).collect());
    assert!(m <= MAX, "word length {m} exceeds supported arity");
    &cache[m]
}

/// F(w) for the coalgebra morphism with arity-one data `f` (degree 0),
/// summed over all block counts p, or only `p = blocks` if given. The
/// shuffle formula carries a 1/p! and runs over ordered block sequences;
/// all p! orderings of a set partition give the same term, so we sum over
/// unordered set partitions instead.
pub fn morphism_image<C: Cogenerator + ?Sized>(
    f: &C,
    w: &Word,
    blocks: Option<usize>,
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> SymElement {
    let letters = w.letters();
    let pos_degrees: Vec<i32> = letters.iter().map(|&i| source_degrees[i]).collect();
    let mut out = SymElement::zero();
    for partition in partitions_cached(letters.len()) {
        if blocks.is_some_and(|p| p != partition.len()) {
            continue;
        }
        let mut values = Vec::with_capacity(partition.len());
        let mut vanished = false;
        for b in partition {
            let v = f.eval(&Word::from_sorted(b.iter().map(|&a| letters[a]).collect()));
            if v.is_zero() {
                vanished = true;
                break;
            }
            values.push(v);
        }
        if vanished {
            continue;
        }
        let perm: Vec<usize> = partition.iter().flatten().copied().collect();
        let neg = koszul_sign(&perm, &pos_degrees);
        out.add_scaled(&product_of_vectors(&values, target_degrees), &sign_scalar(neg));
    }
    out
}

/// Linear extension of `morphism_image` to an element of S̄(V).
pub fn morphism_apply<C: Cogenerator + ?Sized>(
    f: &C,
    x: &SymElement,
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> SymElement {
    let mut out = SymElement::zero();
    for (w, c) in x.iter() {
        if w.is_empty() {
            out.add_term(Word::empty(), c.clone());
        } else {
            out.add_scaled(&morphism_image(f, w, None, source_degrees, target_degrees), c);
        }
    }
    out
}

/// δ(w) for the coderivation with arity-one data `d`, or only the component
/// δ^p_m(w) landing in S^p when `p` is given.
pub fn coderivation_image<C: Cogenerator + ?Sized>(d: &C, w: &Word, p: Option<usize>, degrees: &[i32]) -> SymElement {
    let letters = w.letters();
    let m = letters.len();
    let pos_degrees: Vec<i32> = letters.iter().map(|&i| degrees[i]).collect();
    let mut out = SymElement::zero();
    for mask in 1u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if p.is_some_and(|p| m + 1 != size + p) {
            continue;
        }
        let chosen: Vec<usize> = (0..m).filter(|a| mask & (1 << a) != 0).collect();
        let rest: Vec<usize> = (0..m).filter(|a| mask & (1 << a) == 0).collect();
        let v = d.eval(&Word::from_sorted(chosen.iter().map(|&a| letters[a]).collect()));
        if v.is_zero() {
            continue;
        }
        let mut perm = chosen.clone();
        perm.extend_from_slice(&rest);
        let sign = sign_scalar(koszul_sign(&perm, &pos_degrees));
        let rest_letters: Vec<usize> = rest.iter().map(|&a| letters[a]).collect();
        for (i, c) in v.iter() {
            let mut prod = Vec::with_capacity(rest_letters.len() + 1);
            prod.push(i);
            prod.extend_from_slice(&rest_letters);
            out.add_product(&prod, &(c * &sign), degrees);
        }
    }
    out
}

pub fn coderivation_apply<C: Cogenerator + ?Sized>(d: &C, x: &SymElement, degrees: &[i32]) -> SymElement {
    let mut out = SymElement::zero();
    for (w, c) in x.iter() {
        if !w.is_empty() {
            out.add_scaled(&coderivation_image(d, w, None, degrees), c);
        }
    }
    out
}

/// F^p_m: the component S^m(V) → S^p(W) of the morphism, tabulated on
/// every canonical word of length `m`.
pub fn morphism_restriction_projection<C: Cogenerator + ?Sized>(
    f: &C,
    p: usize,
    m: usize,
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> BTreeMap<Word, SymElement> {
    words_of_length(source_degrees, m)
        .into_iter()
        .map(|w| {
            let v = morphism_image(f, &w, Some(p), source_degrees, target_degrees);
            (w, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// δ^p_m: the component S^m(V) → S^p(V) of the coderivation, tabulated on
/// every canonical word of length `m`.
pub fn coderivation_restriction_projection<C: Cogenerator + ?Sized>(
    d: &C,
    p: usize,
    m: usize,
    degrees: &[i32],
) -> BTreeMap<Word, SymElement> {
    words_of_length(degrees, m)
        .into_iter()
        .map(|w| {
            let v = coderivation_image(d, &w, Some(p), degrees);
            (w, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

/// Extension of a unary map `h` of degree `h_degree` as a derivation:
/// Σ_j ±v₁∨…∨h(v_j)∨…∨v_m with the Koszul sign of moving h past v₁…v_{j−1}.
pub fn derivation_extension(
    h: &dyn Fn(usize) -> Vector,
    h_degree: i32,
    w: &Word,
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> SymElement {
    let letters = w.letters();
    let mut out = SymElement::zero();
    let mut passed = 0i32;
    for (j, &x) in letters.iter().enumerate() {
        let hv = h(x);
        if !hv.is_zero() {
            let sign = sign_scalar((h_degree * passed).rem_euclid(2) == 1);
            for (i, c) in hv.iter() {
                let mut prod: Vec<usize> = letters.to_vec();
                prod[j] = i;
                out.add_product(&prod, &(c * &sign), target_degrees);
            }
        }
        passed += source_degrees[x];
    }
    out
}

/// Structure maps of the composite G∘F on the given source words:
/// (GF)¹_m = Σ_p G¹_p F^p_m.
pub fn compose<G: Cogenerator + ?Sized, F: Cogenerator + ?Sized>(
    g: &G,
    f: &F,
    words: &[Word],
    source_degrees: &[i32],
    middle_degrees: &[i32],
) -> StructureMaps {
    let mut out = StructureMaps::new(0);
    for w in words {
        let fw = morphism_image(f, w, None, source_degrees, middle_degrees);
        out.set(w.clone(), g.eval_sym(&fw));
    }
    out
}

/// First failure of an identity on a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub arity: usize,
    pub word: Word,
    pub defect: Vector,
}

/// δ² = 0, i.e. Σ_k δ¹_k δ^k_m = 0, checked on every listed word.
pub fn is_codifferential<C: Cogenerator + ?Sized>(d: &C, degrees: &[i32], words: &[Word]) -> std::result::Result<(), Witness> {
    for w in words {
        let defect = d.eval_sym(&coderivation_image(d, w, None, degrees));
        if !defect.is_zero() {
            return Err(Witness { arity: w.len(), word: w.clone(), defect });
        }
    }
    Ok(())
}

/// δ'F = Fδ, i.e. Σ_k δ'¹_k F^k_m = Σ_k F¹_k δ^k_m, checked on every listed word.
pub fn is_dg_morphism<F: Cogenerator + ?Sized, D: Cogenerator + ?Sized, E: Cogenerator + ?Sized>(
    f: &F,
    d_source: &D,
    d_target: &E,
    source_degrees: &[i32],
    target_degrees: &[i32],
    words: &[Word],
) -> std::result::Result<(), Witness> {
    for w in words {
        let lhs = d_target.eval_sym(&morphism_image(f, w, None, source_degrees, target_degrees));
        let rhs = f.eval_sym(&coderivation_image(d_source, w, None, source_degrees));
        let defect = lhs.minus(&rhs);
        if !defect.is_zero() {
            return Err(Witness { arity: w.len(), word: w.clone(), defect });
        }
    }
    Ok(())
}

/// Inverse of a coalgebra automorphism-like map whose arity-one part is
/// invertible, by the triangular recursion
/// Ψ¹_m = −(F¹_1)⁻¹ Σ_{k≥2} F¹_k Ψ^k_m. `words` must be closed under
/// taking sub-words and sorted by length.
pub fn invert_morphism(
    f: &StructureMaps,
    linear_inverse: &dyn Fn(&Vector) -> Vector,
    words: &[Word],
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> StructureMaps {
    // Ψ goes from the target of F back to its source.
    let mut psi = StructureMaps::new(0);
    for w in words {
        if w.len() == 1 {
            psi.set(w.clone(), linear_inverse(&Vector::unit(w.letters()[0])));
            continue;
        }
        let image = morphism_image(&psi, w, None, target_degrees, source_degrees);
        let rest = f.eval_sym(&image.lengths(2..=w.len()));
        psi.set(w.clone(), linear_inverse(&rest).negated());
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    // sg: se1, se2 in degree 1 with δ(se1∨se2) = se1.
    fn solvable() -> (StructureMaps, Vec<i32>) {
        let mut d = StructureMaps::new(-1);
        d.set(Word::from_sorted(vec![0, 1]), Vector::unit(0));
        (d, vec![1, 1])
    }

    #[test]
    fn solvable_is_codifferential() {
        let (d, degs) = solvable();
        let words = crate::coalgebra::words_up_to_degree(&degs, 3);
        assert!(is_codifferential(&d, &degs, &words).is_ok());
    }

    #[test]
    fn jacobi_failure_detected_at_arity_three() {
        // [a,b] = c, [a,c] = a in degree 0 violates Jacobi.
        let degs = vec![1, 1, 1];
        let mut d = StructureMaps::new(-1);
        d.set(Word::from_sorted(vec![0, 1]), Vector::unit(2));
        d.set(Word::from_sorted(vec![0, 2]), Vector::unit(0));
        let words = crate::coalgebra::words_up_to_degree(&degs, 3);
        let w = is_codifferential(&d, &degs, &words).unwrap_err();
        assert_eq!(w.arity, 3);
    }

    #[test]
    fn strict_projections_vanish_off_diagonal() {
        let f = StructureMaps::linear(&[Vector::unit(0).scaled(&int(2)), Vector::unit(0)], 0);
        let degs = vec![2, 2];
        for m in 1..=3 {
            for p in 1..m {
                assert!(morphism_restriction_projection(&f, p, m, &degs, &[2]).is_empty());
            }
        }
        // F^2_2(x0∨x1) = f(x0)∨f(x1) = 2·y∨y
        let top = morphism_restriction_projection(&f, 2, 2, &degs, &[2]);
        let w = Word::from_sorted(vec![0, 1]);
        assert_eq!(top[&w].coefficient(&Word::from_sorted(vec![0, 0])), int(2));
    }

    #[test]
    fn length_one_projection_is_structure_map() {
        let mut f = StructureMaps::identity(2);
        f.set(Word::from_sorted(vec![0, 1]), Vector::unit(2));
        let src = [1, 1];
        let tgt = [1, 1, 2];
        let pm = morphism_restriction_projection(&f, 1, 2, &src, &tgt);
        assert_eq!(pm[&Word::from_sorted(vec![0, 1])], SymElement::from_vector(&Vector::unit(2)));
    }

    #[test]
    fn coderivation_vanishes_above_diagonal() {
        let (d, degs) = solvable();
        assert!(coderivation_restriction_projection(&d, 3, 2, &degs).is_empty());
        let dm = coderivation_restriction_projection(&d, 1, 2, &degs);
        assert_eq!(dm[&Word::from_sorted(vec![0, 1])], SymElement::from_vector(&Vector::unit(0)));
    }

    #[test]
    fn diagonal_component_is_derivation() {
        // δ¹_1 = d with d(x1) = x0 on degrees (1, 2); δ^2_2(x1∨x1) = 2·x0∨x1.
        let d = StructureMaps::linear(&[Vector::zero(), Vector::unit(0)], -1);
        let degs = [1, 2];
        let w = Word::from_sorted(vec![1, 1]);
        let img = coderivation_image(&d, &w, Some(2), &degs);
        let ext = derivation_extension(&|i| d.linear_column(i), -1, &w, &degs, &degs);
        assert_eq!(img, ext);
        assert_eq!(img.coefficient(&Word::from_sorted(vec![0, 1])), int(2));
    }

    #[test]
    fn identity_composition() {
        let mut f = StructureMaps::identity(2);
        f.set(Word::from_sorted(vec![0, 1]), Vector::unit(2));
        let src = [1, 1];
        let tgt = [1, 1, 2];
        let words = crate::coalgebra::words_up_to_degree(&src, 4);
        let id_t = StructureMaps::identity(3);
        let id_s = StructureMaps::identity(2);
        assert_eq!(compose(&id_t, &f, &words, &src, &tgt), f);
        assert_eq!(compose(&f, &id_s, &words, &src, &src), f);
    }

    #[test]
    fn negated_target_bracket_breaks_morphism() {
        let (d, degs) = solvable();
        let words = crate::coalgebra::words_up_to_degree(&degs, 3);
        let id = StructureMaps::identity(2);
        assert!(is_dg_morphism(&id, &d, &d, &degs, &degs, &words).is_ok());
        assert!(is_dg_morphism(&id, &d, &d.negated(), &degs, &degs, &words).is_err());
    }

    #[test]
    fn inverse_of_twisted_identity() {
        let mut f = StructureMaps::identity(3);
        f.set(Word::from_sorted(vec![0, 1]), Vector::unit(2));
        let degs = [1, 1, 2];
        let words = crate::coalgebra::words_up_to_degree(&degs, 4);
        let psi = invert_morphism(&f, &|v| v.clone(), &words, &degs, &degs);
        assert_eq!(compose(&f, &psi, &words, &degs, &degs), StructureMaps::identity(3));
        assert_eq!(compose(&psi, &f, &words, &degs, &degs), StructureMaps::identity(3));
    }
}
