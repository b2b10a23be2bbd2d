use std::collections::BTreeMap;
use std::sync::Arc;

use super::path::PathComplex;
use crate::coalgebra::{
    coderivation_image, derivation_extension, invert_morphism, morphism_image, words_up_to_degree, Cogenerator,
    StructureMaps, SymElement, Word,
};
use crate::error::{Error, Result};
use crate::exactla::{int, section_of_surjection, sign_scalar, GradedLinearMap, Scalar, Vector};
use crate::linfty::{classify, compose, product, twist, LInftyMorphism, LieNAlgebra};

/// L̃ = L ⊕ P(L′) with the brackets of L on pure-L inputs and d_P on P.
fn middle_algebra(l: &LieNAlgebra, path: &PathComplex) -> Result<LieNAlgebra> {
    let nl = l.dim();
    let space = l.space().direct_sum(path.space());
    let mut codiff = l.codifferential().clone();
    for (j, col) in path.complex.d().columns().iter().enumerate() {
        codiff.set(Word::letter(nl + j), col.reindex(|i| i + nl));
    }
    let top = space.max_degree().unwrap_or(0).max(0) as usize;
    LieNAlgebra::new(space, Some(l.n().max(top + 1)), codiff)
}

/// The homotopy id_{S(sL)} ⊗ H on S̄(sL̃), where H is the symmetrized
/// extension of h to S(sP): on S^k(sP) it is (1/k) times the derivation
/// extension of h, so that δ̂H + Hδ̂ = id on S̄(sP).
pub struct TensorHomotopy<'a> {
    pub l_dim: usize,
    pub path: &'a PathComplex,
    pub degrees: &'a [i32],
}

impl TensorHomotopy<'_> {
    /// H on a word using only P letters (given in L̃ indexing).
    pub fn on_path_word(&self, p: &Word) -> SymElement {
        if p.is_empty() {
            return SymElement::zero();
        }
        let nl = self.l_dim;
        let h = |i: usize| self.path.h.column(i - nl).reindex(|k| k + nl);
        let ext = derivation_extension(&h, 1, p, self.degrees, self.degrees);
        ext.scaled(&(Scalar::from_integer(1.into()) / int(p.len() as i64)))
    }

    /// (id ⊗ H)(u ∨ p) = (−1)^{|u|} u ∨ H(p), and zero on pure-L words.
    pub fn apply(&self, w: &Word) -> SymElement {
        let (u, p): (Vec<usize>, Vec<usize>) = w.letters().iter().partition(|&&i| i < self.l_dim);
        if p.is_empty() {
            return SymElement::zero();
        }
        let u = Word::from_sorted(u);
        let hp = self.on_path_word(&Word::from_sorted(p));
        let sign = sign_scalar(u.degree(self.degrees).rem_euclid(2) == 1);
        SymElement::word(u).mul(&hp, self.degrees).scaled(&sign)
    }
}

/// The obstruction c_m = Σ_{k<m} Φ¹_k δ̃^k_m − Σ_{k≥2} δ′¹_k Φ^k_m on every
/// word of length `m` in `words`, for partial data of arity < m. Checks that
/// the partial data satisfies the dg condition below arity m and that c_m
/// is a cycle: δ′¹₁ c_m + c_m δ̃^m_m = 0.
pub fn obstruction_cycle(
    partial: &StructureMaps,
    m: usize,
    source: &LieNAlgebra,
    target: &LieNAlgebra,
) -> Result<BTreeMap<Word, Vector>> {
    let partial = partial.truncated(m - 1);
    let sd = source.suspended_degrees();
    let td = target.suspended_degrees();
    let top = target.top_suspended_degree();
    let words = words_up_to_degree(sd, top + 2);
    let c = |w: &Word| -> Vector {
        let lhs = partial.eval_sym(&coderivation_image(source.codifferential(), w, None, sd));
        let rhs = target.codifferential().eval_sym(&morphism_image(&partial, w, None, sd, td));
        lhs.minus(&rhs)
    };
    for w in words.iter().filter(|w| w.len() < m && w.degree(sd) <= top + 1) {
        let defect = c(w);
        if !defect.is_zero() {
            return Err(Error::PartialDataInvalid {
                arity: w.len(),
                detail: format!("dg condition fails on {}", w.display(&source.suspended_names())),
            });
        }
    }
    let mut out = BTreeMap::new();
    for w in words.iter().filter(|w| w.len() == m && w.degree(sd) <= top + 1) {
        let v = c(w);
        if !v.is_zero() {
            out.insert(w.clone(), v);
        }
    }
    let cm = |w: &Word| out.get(w).cloned().unwrap_or_default();
    for w in words.iter().filter(|w| w.len() == m) {
        let mut boundary = linear_apply(target, &cm(w));
        let dw = coderivation_image(source.codifferential(), w, Some(m), sd);
        for (u, a) in dw.iter() {
            boundary.add_scaled(&cm(u), a);
        }
        if !boundary.is_zero() {
            return Err(Error::Verification(format!(
                "obstruction is not a cycle on {}",
                w.display(&source.suspended_names())
            )));
        }
    }
    Ok(out)
}

fn linear_apply(l: &LieNAlgebra, v: &Vector) -> Vector {
    let mut out = Vector::zero();
    for (i, c) in v.iter() {
        out.add_scaled(&l.codifferential().linear_column(i), c);
    }
    out
}

/// Output of the strict factorization L → L̃ → L′.
#[derive(Clone, Debug)]
pub struct StrictFactorization {
    pub middle: Arc<LieNAlgebra>,
    pub j: LInftyMorphism,
    pub phi: LInftyMorphism,
    pub path: PathComplex,
}

/// Factors a strict morphism as a weak equivalence followed by a fibration
/// through L ⊕ P(L′), building Φ arity by arity with Φ¹_m = −c_m∘(id ⊗ H).
pub fn factor_strict_morphism(f: &LInftyMorphism) -> Result<StrictFactorization> {
    if !f.is_strict() {
        return Err(Error::NotStrict);
    }
    let l = f.source();
    let lp = f.target();
    let path = PathComplex::new(&lp.chain_complex())?;
    let middle = Arc::new(middle_algebra(l, &path)?);
    let nl = l.dim();
    let sd = middle.suspended_degrees().to_vec();
    let top = lp.top_suspended_degree();

    // Φ¹₁ = p_f = f + π
    let mut phi = StructureMaps::new(0);
    for j in 0..nl {
        phi.set(Word::letter(j), f.data().linear_column(j));
    }
    for j in 0..path.space().dim() {
        phi.set(Word::letter(nl + j), path.pi.column(j).clone());
    }
    let k_op = TensorHomotopy { l_dim: nl, path: &path, degrees: &sd };
    let words = words_up_to_degree(&sd, top);
    let max_len = words.iter().map(Word::len).max().unwrap_or(0);
    for m in 2..=max_len {
        let c = obstruction_cycle(&phi, m, &middle, lp)?;
        for w in words.iter().filter(|w| w.len() == m) {
            let kw = k_op.apply(w);
            let mut v = Vector::zero();
            for (u, a) in kw.iter() {
                if let Some(cu) = c.get(u) {
                    v.add_scaled(cu, a);
                }
            }
            phi.set(w.clone(), v.negated());
        }
    }
    let j_cols: Vec<Vector> = (0..nl).map(Vector::unit).collect();
    let j = LInftyMorphism::new(l.clone(), middle.clone(), StructureMaps::linear(&j_cols, 0))?;
    let phi = LInftyMorphism::new(middle.clone(), lp.clone(), phi)?;
    if compose(&phi, &j)?.data() != f.data() {
        return Err(Error::Verification("φ ∘ j ≠ f".into()));
    }
    for (w, _) in phi.data().iter() {
        if w.len() >= 2 && w.letters().iter().all(|&i| i < nl) {
            return Err(Error::Verification("Φ¹_k ∘ J^k_k ≠ 0".into()));
        }
    }
    Ok(StrictFactorization { middle, j, phi, path })
}

/// A path object L → L^I → L × L from the factorization of the diagonal.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub object: Arc<LieNAlgebra>,
    pub product: Arc<LieNAlgebra>,
    pub s: LInftyMorphism,
    pub d: LInftyMorphism,
    pub d0: LInftyMorphism,
    pub d1: LInftyMorphism,
    pub diagonal: LInftyMorphism,
}

pub fn path_object(l: &Arc<LieNAlgebra>) -> Result<PathObject> {
    let (prod, pr0, pr1) = product(l, l)?;
    let n = l.dim();
    let cols: Vec<Vector> = (0..n).map(|j| Vector::unit(j).plus(&Vector::unit(j + n))).collect();
    let diag = GradedLinearMap::new(l.space().clone(), prod.space().clone(), 0, cols)?;
    let diagonal = LInftyMorphism::strict(l.clone(), prod.clone(), &diag)?;
    let fac = factor_strict_morphism(&diagonal)?;
    let d0 = compose(&pr0, &fac.phi)?;
    let d1 = compose(&pr1, &fac.phi)?;
    let ds = compose(&fac.phi, &fac.j)?;
    if ds.data() != diagonal.data() {
        return Err(Error::Verification("(d0, d1) ∘ s ≠ diagonal".into()));
    }
    Ok(PathObject { object: fac.middle.clone(), product: prod, s: fac.j, d: fac.phi, d0, d1, diagonal })
}

/// A fibration f written as (f∘φ)∘φ⁻¹ with φ an isomorphism and f∘φ strict.
#[derive(Clone, Debug)]
pub struct Strictification {
    /// L with the transported structure δ̃ = Φ⁻¹δΦ.
    pub twisted: Arc<LieNAlgebra>,
    /// φ: twisted → L, with Φ¹₁ = id.
    pub phi: LInftyMorphism,
    /// φ⁻¹: L → twisted.
    pub phi_inverse: LInftyMorphism,
    /// f∘φ, strict with linear part f₁.
    pub strict: LInftyMorphism,
}

pub fn strictify_fibration(f: &LInftyMorphism) -> Result<Strictification> {
    if !classify(f).fibration {
        return Err(Error::NotFibration);
    }
    let l = f.source();
    let sd = l.suspended_degrees();
    let f1 = f.linear();
    // σ: a section on target degrees ≥ 1, zero on degree 0.
    let positive: Vec<i32> = f.target().space().support().into_iter().filter(|&d| d >= 1).collect();
    let sigma = section_of_surjection(&f1, &positive)?;
    let words = words_up_to_degree(sd, l.top_suspended_degree());
    let mut phi = StructureMaps::identity(l.dim());
    let max_len = words.iter().map(Word::len).max().unwrap_or(0);
    for m in 2..=max_len {
        let partial = phi.clone();
        for w in words.iter().filter(|w| w.len() == m) {
            let image = morphism_image(&partial, w, None, sd, sd).lengths(2..=m);
            let fv = f.data().eval_sym(&image);
            phi.set(w.clone(), sigma.apply(&fv).negated());
        }
    }
    let (twisted, phi_m) = twist(l, &phi)?;
    let all = words_up_to_degree(sd, l.top_suspended_degree());
    let psi = invert_morphism(phi_m.data(), &|v| v.clone(), &all, sd, sd);
    let phi_inverse = LInftyMorphism::new(l.clone(), twisted.clone(), psi)?;
    let strict = compose(f, &phi_m)?;
    if !strict.is_strict() || strict.linear() != f1 {
        return Err(Error::Verification("f∘φ is not strict with linear part f₁".into()));
    }
    let round = compose(&phi_m, &phi_inverse)?;
    if *round.data() != StructureMaps::identity(l.dim()) {
        return Err(Error::Verification("φ ∘ φ⁻¹ ≠ id".into()));
    }
    Ok(Strictification { twisted, phi: phi_m, phi_inverse, strict })
}
