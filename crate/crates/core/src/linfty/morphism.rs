use std::sync::Arc;

use super::algebra::{skew_eval, skew_eval_vectors, skew_to_symmetric, symmetric_to_skew, BracketEntry, LieNAlgebra};
use crate::coalgebra::{compose as compose_maps, is_dg_morphism, words_up_to_degree, Cogenerator, StructureMaps, Word};
use crate::error::{Error, Result};
use crate::exactla::{
    induced_map_on_homology, is_quasi_isomorphism, positive_target_degrees, ChainComplex, GradedLinearMap,
    GradedSpace, Vector,
};

/// A weak L∞-morphism, stored through the structure maps F¹_k of its
/// coalgebra morphism S̄(sL) → S̄(sL′).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInftyMorphism {
    source: Arc<LieNAlgebra>,
    target: Arc<LieNAlgebra>,
    data: StructureMaps,
}

impl LInftyMorphism {
    pub fn new(source: Arc<LieNAlgebra>, target: Arc<LieNAlgebra>, data: StructureMaps) -> Result<Self> {
        if data.shift() != 0 {
            return Err(Error::InvalidInput("morphism data must have degree 0".into()));
        }
        data.check_homogeneous(source.suspended_degrees(), target.suspended_degrees())?;
        let f = LInftyMorphism { source, target, data };
        let words = f.verification_words();
        if let Err(w) = is_dg_morphism(
            &f.data,
            f.source.codifferential(),
            f.target.codifferential(),
            f.source.suspended_degrees(),
            f.target.suspended_degrees(),
            &words,
        ) {
            return Err(Error::MorphismViolation {
                arity: w.arity,
                witness: format!(
                    "{} ↦ {}",
                    w.word.display(&f.source.suspended_names()),
                    f.target.display_vector(&w.defect)
                ),
            });
        }
        Ok(f)
    }

    /// From skew components f_k given on ordered basis tuples.
    pub fn from_components(source: Arc<LieNAlgebra>, target: Arc<LieNAlgebra>, components: &[BracketEntry]) -> Result<Self> {
        let data = skew_to_symmetric(components, source.degrees(), source.suspended_degrees(), 0)?;
        LInftyMorphism::new(source, target, data)
    }

    /// Strict morphism with linear part `f`.
    pub fn strict(source: Arc<LieNAlgebra>, target: Arc<LieNAlgebra>, f: &GradedLinearMap) -> Result<Self> {
        if f.source() != source.space() || f.target() != target.space() || f.shift() != 0 {
            return Err(Error::TypeMismatch("linear map does not match the algebras".into()));
        }
        LInftyMorphism::new(source, target, StructureMaps::linear(f.columns(), 0))
    }

    pub fn identity(l: Arc<LieNAlgebra>) -> Self {
        let data = StructureMaps::identity(l.dim());
        LInftyMorphism { source: l.clone(), target: l, data }
    }

    pub fn source(&self) -> &Arc<LieNAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LieNAlgebra> {
        &self.target
    }

    pub fn data(&self) -> &StructureMaps {
        &self.data
    }

    /// Source words on which F¹ can be nonzero.
    pub fn data_words(&self) -> Vec<Word> {
        words_up_to_degree(self.source.suspended_degrees(), self.target.top_suspended_degree())
    }

    /// Source words on which the dg condition must be checked.
    pub fn verification_words(&self) -> Vec<Word> {
        words_up_to_degree(self.source.suspended_degrees(), self.target.top_suspended_degree() + 1)
    }

    pub fn is_strict(&self) -> bool {
        self.data.is_strict()
    }

    /// f_k on an ordered tuple of basis elements.
    pub fn component(&self, inputs: &[usize]) -> Vector {
        skew_eval(&self.data, inputs, self.source.degrees(), self.source.suspended_degrees())
    }

    pub fn component_vectors(&self, xs: &[Vector]) -> Vector {
        skew_eval_vectors(&self.data, xs, self.source.degrees(), self.source.suspended_degrees())
    }

    pub fn components(&self) -> Vec<BracketEntry> {
        symmetric_to_skew(&self.data, self.source.degrees())
    }

    /// The linear part f₁.
    pub fn linear(&self) -> GradedLinearMap {
        let cols = (0..self.source.dim()).map(|j| self.data.linear_column(j)).collect();
        GradedLinearMap::new(self.source.space().clone(), self.target.space().clone(), 0, cols)
            .expect("f₁ is homogeneous")
    }

    /// The tangent chain map (L, ℓ₁) → (L′, ℓ′₁).
    pub fn tangent(&self) -> (GradedLinearMap, ChainComplex, ChainComplex) {
        (self.linear(), self.source.chain_complex(), self.target.chain_complex())
    }

    /// Composite `self ∘ f`.
    pub fn after(&self, f: &LInftyMorphism) -> Result<LInftyMorphism> {
        compose(self, f)
    }
}

impl Cogenerator for LInftyMorphism {
    fn eval(&self, w: &Word) -> Vector {
        self.data.eval(w)
    }
}

/// g ∘ f, re-verified.
pub fn compose(g: &LInftyMorphism, f: &LInftyMorphism) -> Result<LInftyMorphism> {
    if f.target != g.source {
        return Err(Error::TypeMismatch("target of f is not the source of g".into()));
    }
    let words = words_up_to_degree(f.source.suspended_degrees(), g.target.top_suspended_degree());
    let data = compose_maps(
        &g.data,
        &f.data,
        &words,
        f.source.suspended_degrees(),
        f.target.suspended_degrees(),
    );
    LInftyMorphism::new(f.source.clone(), g.target.clone(), data)
}

/// Classification flags computed from the exact homology and
/// ranks of f₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MorphismClass {
    pub weak_equivalence: bool,
    pub fibration: bool,
    pub acyclic_fibration: bool,
    pub strict: bool,
    pub isomorphism: bool,
    pub epimorphism: bool,
}

pub fn classify(f: &LInftyMorphism) -> MorphismClass {
    let (f1, src, tgt) = f.tangent();
    let weak_equivalence = is_quasi_isomorphism(&f1, &src, &tgt).expect("f₁ is a chain map");
    let fibration = positive_target_degrees(&f1).into_iter().all(|d| f1.is_surjective_in_degree(d));
    let epimorphism = tgt.space().support().into_iter().all(|d| f1.is_surjective_in_degree(d));
    MorphismClass {
        weak_equivalence,
        fibration,
        acyclic_fibration: weak_equivalence && fibration,
        strict: f.is_strict(),
        isomorphism: f1.is_bijective(),
        epimorphism,
    }
}

/// Product L × L′ with its two strict projections. The basis of the product
/// lists L first, then L′.
pub fn product(a: &Arc<LieNAlgebra>, b: &Arc<LieNAlgebra>) -> Result<(Arc<LieNAlgebra>, LInftyMorphism, LInftyMorphism)> {
    let space = a.space().direct_sum(b.space());
    let na = a.dim();
    let mut codiff = StructureMaps::new(-1);
    for (w, v) in a.codifferential().iter() {
        codiff.set(w.clone(), v.clone());
    }
    for (w, v) in b.codifferential().iter() {
        let shifted = Word::from_sorted(w.letters().iter().map(|i| i + na).collect());
        codiff.set(shifted, v.reindex(|i| i + na));
    }
    let n = a.n().max(b.n());
    let p = Arc::new(LieNAlgebra::new(space, Some(n), codiff)?);
    let pr_a: Vec<Vector> = (0..p.dim()).map(|j| if j < na { Vector::unit(j) } else { Vector::zero() }).collect();
    let pr_b: Vec<Vector> = (0..p.dim()).map(|j| if j < na { Vector::zero() } else { Vector::unit(j - na) }).collect();
    let pa = LInftyMorphism::new(p.clone(), a.clone(), StructureMaps::linear(&pr_a, 0))?;
    let pb = LInftyMorphism::new(p.clone(), b.clone(), StructureMaps::linear(&pr_b, 0))?;
    Ok((p, pa, pb))
}

/// The unique morphism into a product with given components, whose
/// structure maps are the pair (F¹, G¹).
pub fn pair_into_product(
    product: &Arc<LieNAlgebra>,
    f: &LInftyMorphism,
    g: &LInftyMorphism,
) -> Result<LInftyMorphism> {
    if f.source != g.source {
        return Err(Error::TypeMismatch("cone legs have different sources".into()));
    }
    let na = f.target.dim();
    let mut data = StructureMaps::new(0);
    for w in words_up_to_degree(f.source.suspended_degrees(), product.top_suspended_degree()) {
        data.set(w.clone(), f.data.eval(&w).plus(&g.data.eval(&w).reindex(|i| i + na)));
    }
    LInftyMorphism::new(f.source.clone(), product.clone(), data)
}

/// The Lie algebra H₀(L) with the bracket induced by ℓ₂ on representatives.
/// Well-definedness is checked on boundaries: ℓ₂(ℓ₁y, x) ∈ im ℓ₁ for all
/// basis y ∈ L₁, x ∈ L₀.
pub fn h0_lie_algebra(l: &LieNAlgebra) -> Result<(LieNAlgebra, crate::exactla::Homology)> {
    let c = l.chain_complex();
    let h = crate::exactla::homology(&c);
    let ones = l.space().indices_in_degree(1);
    let zeros = l.space().indices_in_degree(0);
    for &y in &ones {
        let dy = l.differential().column(y).clone();
        for &x in &zeros {
            let b = l.bracket_vectors(&[dy.clone(), Vector::unit(x)]);
            match h.class_of(0, &b) {
                Some(cl) if cl.is_zero() => {}
                _ => {
                    return Err(Error::Verification(format!(
                        "bracket of the boundary ℓ₁({}) with {} is not a boundary",
                        l.space().name(y),
                        l.space().name(x)
                    )))
                }
            }
        }
    }
    let reps = h.representatives(0).to_vec();
    let names: Vec<(String, i32)> = (0..reps.len()).map(|k| (format!("h{k}"), 0)).collect();
    let space = GradedSpace::new(names)?;
    let off = h.space().indices_in_degree(0).first().copied().unwrap_or(0);
    let mut entries = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let b = l.bracket_vectors(&[reps[i].clone(), reps[j].clone()]);
            let cl = h.class_of(0, &b).expect("brackets of degree-0 elements are cycles");
            entries.push(BracketEntry { inputs: vec![i, j], output: cl.reindex(|k| k - off) });
        }
    }
    Ok((LieNAlgebra::from_brackets(space, Some(1), &entries)?, h))
}

/// H₀(f₁) in the representative bases of `h0_lie_algebra`, checked to be a
/// Lie algebra morphism.
pub fn h0_map(f: &LInftyMorphism) -> Result<(LInftyMorphism, LieNAlgebra, LieNAlgebra)> {
    let (hs, hsrc) = h0_lie_algebra(f.source())?;
    let (ht, htgt) = h0_lie_algebra(f.target())?;
    let (hf, _, _) = induced_map_on_homology(&f.linear(), &f.source.chain_complex(), &f.target.chain_complex())?;
    let s_off = hsrc.space().indices_in_degree(0);
    let t_off = htgt.space().indices_in_degree(0);
    let cols: Vec<Vector> = s_off
        .iter()
        .map(|&k| {
            let v = hf.column(k);
            let mut out = Vector::zero();
            for (i, c) in v.iter() {
                let pos = t_off.iter().position(|&t| t == i).expect("degree-0 class");
                out.add_entry(pos, c.clone());
            }
            out
        })
        .collect();
    let hs = Arc::new(hs);
    let ht = Arc::new(ht);
    let m = LInftyMorphism::new(hs.clone(), ht.clone(), StructureMaps::linear(&cols, 0))
        .map_err(|e| Error::Verification(format!("H₀(f) is not a Lie algebra morphism: {e}")))?;
    Ok((m, (*hs).clone(), (*ht).clone()))
}

/// Transports the structure of `l` along a coalgebra automorphism Φ of
/// S̄(sL) with Φ¹₁ = id: the result carries δ^Φ = Φ⁻¹δΦ, and Φ itself is an
/// L∞-isomorphism from it to `l`. `phi` holds the components of arity ≥ 2.
pub fn twist(l: &Arc<LieNAlgebra>, phi: &StructureMaps) -> Result<(Arc<LieNAlgebra>, LInftyMorphism)> {
    use crate::coalgebra::{coderivation_apply, invert_morphism, morphism_image};
    let degs = l.suspended_degrees();
    let mut full = StructureMaps::identity(l.dim());
    for (w, v) in phi.iter() {
        if w.len() >= 2 {
            full.set(w.clone(), v.clone());
        }
    }
    full.check_homogeneous(degs, degs)?;
    let top = l.top_suspended_degree();
    let words = words_up_to_degree(degs, top + 1);
    let full = StructureMaps::tabulate(&full, &words_up_to_degree(degs, top), 0);
    let psi = invert_morphism(&full, &|v| v.clone(), &words, degs, degs);
    let mut d = StructureMaps::new(-1);
    for w in &words {
        let image = morphism_image(&full, w, None, degs, degs);
        let dv = coderivation_apply(l.codifferential(), &image, degs);
        d.set(w.clone(), psi.eval_sym(&dv));
    }
    let twisted = Arc::new(LieNAlgebra::new(l.space().clone(), Some(l.n()), d)?);
    let iso = LInftyMorphism::new(twisted.clone(), l.clone(), full)?;
    Ok((twisted, iso))
}
