use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::square::{verify_tangent_exactness, PullbackSquare};
use crate::coalgebra::{
    coderivation_apply, compose as compose_maps, koszul_sign, morphism_apply, product_of_vectors,
    words_up_to_degree, Cogenerator, StructureMaps, SymElement, Word,
};
use crate::error::{Error, Result};
use crate::exactla::{section_of_surjection, sign_scalar, GradedLinearMap, GradedSpace, Matrix, Scalar, Vector};
use crate::linfty::{classify, compose, product, LInftyMorphism, LieNAlgebra};

/// Pullback of a strict fibration f: L → L″ along g: L′ → L″, built inside
/// S̄(sL′ ⊕ sL) through the endomorphisms H and J.
#[derive(Clone, Debug)]
pub struct StrictPullback {
    pub square: PullbackSquare,
    /// L′ × L with the product structure δ_⊕; L′ indices come first.
    pub ambient: Arc<LieNAlgebra>,
    /// L̃ ⊂ L′ ⊕ L as a degree-0 inclusion.
    pub embedding: GradedLinearMap,
    /// σ: L″ → L, zero in degree 0 and a right inverse of f₁ above.
    pub sigma: GradedLinearMap,
    pub h: StructureMaps,
    pub j: StructureMaps,
    /// J¹δ_⊕H on words of S̄(sL̃), before solving into L̃ coordinates.
    pub delta_ambient: StructureMaps,
}

/// Per-arity results of the H/J and membership checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// (m, (HJ)¹_m = id¹_m, (JH)¹_m = id¹_m)
    pub inverse: Vec<(usize, bool, bool)>,
    /// (m, every δ̃¹_m value lies in sL̃)
    pub membership: Vec<(usize, bool)>,
    pub codifferential: bool,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.inverse.iter().all(|&(_, a, b)| a && b) && self.membership.iter().all(|&(_, a)| a) && self.codifferential
    }
}

impl StrictPullback {
    /// Expands a word of S̄(sL̃) into S̄(sL′ ⊕ sL).
    pub fn embed_word(&self, w: &Word) -> SymElement {
        embed_word(&self.embedding, w, self.ambient.suspended_degrees())
    }

    /// Re-runs the inverse, membership and δ̃² = 0 checks.
    pub fn identities(&self) -> IdentityReport {
        let amb = self.ambient.suspended_degrees();
        let words = words_up_to_degree(amb, self.ambient.top_suspended_degree());
        let hj = compose_maps(&self.h, &self.j, &words, amb, amb);
        let jh = compose_maps(&self.j, &self.h, &words, amb, amb);
        let id = StructureMaps::identity(self.ambient.dim());
        let max_len = words.iter().map(Word::len).max().unwrap_or(0);
        let inverse = (1..=max_len)
            .map(|m| {
                let ok = |c: &StructureMaps| words.iter().filter(|w| w.len() == m).all(|w| c.eval(w) == id.eval(w));
                (m, ok(&hj), ok(&jh))
            })
            .collect();
        let object = &self.square.object;
        let max_len = self.delta_ambient.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        let membership = (1..=max_len)
            .map(|m| {
                let ok = self
                    .delta_ambient
                    .iter()
                    .filter(|(w, _)| w.len() == m)
                    .all(|(_, v)| coordinates_in(&self.embedding, v).is_some());
                (m, ok)
            })
            .collect();
        let codifferential = crate::coalgebra::is_codifferential(
            object.codifferential(),
            object.suspended_degrees(),
            &object.verification_words(),
        )
        .is_ok();
        IdentityReport { inverse, membership, codifferential }
    }
}

fn embed_word(embedding: &GradedLinearMap, w: &Word, ambient_degrees: &[i32]) -> SymElement {
    let cols: Vec<Vector> = w.letters().iter().map(|&i| embedding.column(i).clone()).collect();
    product_of_vectors(&cols, ambient_degrees)
}

/// Coordinates of an ambient vector in the basis given by the columns of an
/// injective degree-0 map, or `None` if it is not in the image.
pub fn coordinates_in(embedding: &GradedLinearMap, v: &Vector) -> Option<Vector> {
    let mut by_degree: BTreeMap<i32, ()> = BTreeMap::new();
    for i in v.support() {
        by_degree.insert(embedding.target().degree(i), ());
    }
    let mut out = Vector::zero();
    for d in by_degree.keys() {
        let tgt = embedding.target().indices_in_degree(*d);
        let src = embedding.source().indices_in_degree(*d);
        let x = embedding.block(*d).solve(&v.restrict(&tgt))?;
        out = out.plus(&Vector::embed(&x, &src));
    }
    Some(out)
}

/// Basis of L̃ inside L′ ⊕ L: in degree 0 the fiber product of g₁ and f₁,
/// above it L′_i followed by ker f₁.
fn pullback_basis(f1: &GradedLinearMap, g1: &GradedLinearMap, ambient: &GradedSpace) -> Result<(GradedSpace, Vec<Vector>)> {
    let lp = g1.source();
    let l = f1.source();
    let nlp = lp.dim();
    let mut degrees: Vec<i32> = lp.support();
    degrees.extend(l.support());
    degrees.sort_unstable();
    degrees.dedup();
    let mut basis = Vec::new();
    let mut columns = Vec::new();
    for d in degrees {
        let a = lp.indices_in_degree(d);
        let b = l.indices_in_degree(d);
        if d == 0 {
            let c = f1.target().indices_in_degree(0);
            let mut rows = vec![vec![Scalar::zero(); a.len() + b.len()]; c.len()];
            for (r, &t) in c.iter().enumerate() {
                for (k, &x) in a.iter().enumerate() {
                    rows[r][k] = g1.column(x).get(t);
                }
                for (k, &y) in b.iter().enumerate() {
                    rows[r][a.len() + k] = -f1.column(y).get(t);
                }
            }
            let m = Matrix::from_rows(rows, a.len() + b.len());
            for (k, v) in m.kernel().into_iter().enumerate() {
                let mut col = Vector::zero();
                for (p, x) in v.into_iter().enumerate() {
                    let idx = if p < a.len() { a[p] } else { nlp + b[p - a.len()] };
                    col.add_entry(idx, x);
                }
                basis.push((format!("fp{k}"), 0));
                columns.push(col);
            }
        } else {
            for &x in &a {
                basis.push((format!("{}'", lp.name(x)), d));
                columns.push(Vector::unit(x));
            }
            for (k, v) in f1.block(d).kernel().into_iter().enumerate() {
                basis.push((format!("ker{d}_{k}"), d));
                columns.push(Vector::embed(&v, &b).reindex(|i| i + nlp));
            }
        }
    }
    let space = GradedSpace::new(basis.clone()).or_else(|_| {
        let degs: Vec<i32> = basis.iter().map(|(_, d)| *d).collect();
        Ok::<_, Error>(GradedSpace::anonymous("t", &degs))
    })?;
    debug_assert!(columns.iter().all(|c| c.support().all(|i| i < ambient.dim())));
    Ok((space, columns))
}

/// H (sign = +1) or J (sign = −1): (v′, v) ↦ (v′, ±σg₁v′ + v) in arity one,
/// and (0, ±σG¹_k(v′₁,…,v′_k)) in arity k ≥ 2.
fn endomorphism(
    g: &LInftyMorphism,
    sigma: &GradedLinearMap,
    ambient: &LieNAlgebra,
    negative: bool,
) -> StructureMaps {
    let nlp = g.source().dim();
    let sign = sign_scalar(negative);
    let lift = |v: &Vector| sigma.apply(v).reindex(|i| i + nlp).scaled(&sign);
    let mut out = StructureMaps::identity(ambient.dim());
    for a in 0..nlp {
        out.set(Word::letter(a), Vector::unit(a).plus(&lift(&g.data().linear_column(a))));
    }
    let words = words_up_to_degree(g.source().suspended_degrees(), ambient.top_suspended_degree());
    for w in words.iter().filter(|w| w.len() >= 2) {
        out.set(w.clone(), lift(&g.data().eval(w)));
    }
    out
}

/// Pullback of a strict fibration `f` along an arbitrary `g` with the same
/// target. Every identity the construction relies on is checked.
pub fn pullback_strict_fibration(f: &LInftyMorphism, g: &LInftyMorphism) -> Result<StrictPullback> {
    if !f.is_strict() {
        return Err(Error::NotStrict);
    }
    if !classify(f).fibration {
        return Err(Error::NotFibration);
    }
    if f.target() != g.target() {
        return Err(Error::TypeMismatch("f and g have different targets".into()));
    }
    let l = f.source();
    let lp = g.source();
    let nlp = lp.dim();
    let f1 = f.linear();
    let g1 = g.linear();
    let (ambient, _, _) = product(lp, l)?;
    let positive: Vec<i32> = f.target().space().support().into_iter().filter(|&d| d >= 1).collect();
    let sigma = section_of_surjection(&f1, &positive)?;

    let (space, columns) = pullback_basis(&f1, &g1, ambient.space())?;
    let embedding = GradedLinearMap::new(space.clone(), ambient.space().clone(), 0, columns)?;
    let h = endomorphism(g, &sigma, &ambient, false);
    let j = endomorphism(g, &sigma, &ambient, true);
    let amb = ambient.suspended_degrees().to_vec();

    let n = l.n().max(lp.n());
    let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
    let top = susp.iter().copied().max().unwrap_or(0);
    let mut delta_ambient = StructureMaps::new(-1);
    let mut codiff = StructureMaps::new(-1);
    for w in words_up_to_degree(&susp, top + 1) {
        let ew = embed_word(&embedding, &w, &amb);
        let hw = morphism_apply(&h, &ew, &amb, &amb);
        let dhw = coderivation_apply(ambient.codifferential(), &hw, &amb);
        let v = j.eval_sym(&dhw);
        let local = coordinates_in(&embedding, &v).ok_or_else(|| {
            Error::Verification(format!("J¹δH leaves sL̃ on a word of length {}", w.len()))
        })?;
        delta_ambient.set(w.clone(), v);
        codiff.set(w, local);
    }
    let object = Arc::new(LieNAlgebra::new(space, Some(n), codiff)?);

    // p = pr∘H restricted to S̄(sL̃), p′ = pr′∘H = pr′.
    let mut p_data = StructureMaps::new(0);
    for w in words_up_to_degree(&susp, l.top_suspended_degree()) {
        let v = h.eval_sym(&embed_word(&embedding, &w, &amb));
        p_data.set(w, project(&v, nlp, true));
    }
    let pp_cols: Vec<Vector> = (0..object.dim()).map(|k| project(embedding.column(k), nlp, false)).collect();
    let p = LInftyMorphism::new(object.clone(), l.clone(), p_data)?;
    let p_prime = LInftyMorphism::new(object.clone(), lp.clone(), StructureMaps::linear(&pp_cols, 0))?;
    if compose(f, &p)? != compose(g, &p_prime)? {
        return Err(Error::Verification("F∘p ≠ G∘p′".into()));
    }
    let sp = StrictPullback {
        square: PullbackSquare { object, p, p_prime, f: f.clone(), g: g.clone() },
        ambient,
        embedding,
        sigma,
        h,
        j,
        delta_ambient,
    };
    let report = sp.identities();
    if !report.all_hold() {
        return Err(Error::Verification(format!("pullback identities fail: {report:?}")));
    }
    if !verify_tangent_exactness(&sp.square) {
        return Err(Error::Verification("tangent square is not a pullback of complexes".into()));
    }
    Ok(sp)
}

/// The L part (indices ≥ `split`, shifted down) or the L′ part of a vector
/// of L′ ⊕ L.
fn project(v: &Vector, split: usize, l_part: bool) -> Vector {
    let mut out = Vector::zero();
    for (i, c) in v.iter() {
        if l_part && i >= split {
            out.add_entry(i - split, c.clone());
        } else if !l_part && i < split {
            out.add_entry(i, c.clone());
        }
    }
    out
}

type Tensor = BTreeMap<(Word, Word), Scalar>;

fn add_tensor(t: &mut Tensor, a: Word, b: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry((a.clone(), b.clone())).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&(a, b));
    }
}

/// Reduced coproduct by unshuffles of letter positions.
fn reduced_coproduct(x: &SymElement, degrees: &[i32]) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in x.iter() {
        let letters = w.letters();
        let m = letters.len();
        if m < 2 {
            continue;
        }
        let pos: Vec<i32> = letters.iter().map(|&i| degrees[i]).collect();
        for mask in 1u64..(1u64 << m) - 1 {
            let s: Vec<usize> = (0..m).filter(|a| mask & (1 << a) != 0).collect();
            let r: Vec<usize> = (0..m).filter(|a| mask & (1 << a) == 0).collect();
            let mut perm = s.clone();
            perm.extend(&r);
            let sign = sign_scalar(koszul_sign(&perm, &pos));
            let ws = Word::from_sorted(s.iter().map(|&a| letters[a]).collect());
            let wr = Word::from_sorted(r.iter().map(|&a| letters[a]).collect());
            add_tensor(&mut out, ws, wr, c * sign);
        }
    }
    out
}

/// (id ⊗ K)(t) for a coalgebra map K applied to the right factor.
fn apply_right<C: Cogenerator + ?Sized>(t: &Tensor, k: &C, src: &[i32], tgt: &[i32]) -> Tensor {
    let mut out = Tensor::new();
    for ((a, b), c) in t {
        let img = morphism_apply(k, &SymElement::word(b.clone()), src, tgt);
        for (w, d) in img.iter() {
            add_tensor(&mut out, a.clone(), w.clone(), c * d);
        }
    }
    out
}

/// Oracle for the description of the coalgebra pullback as the elements y
/// of ker(F∘pr − G∘pr′) with (id ⊗ F∘pr)Δ̄y = (id ⊗ G∘pr′)Δ̄y: checks that
/// H maps every word of S̄(sL̃) of degree ≤ `cutoff` into that subspace.
/// Returns the first failing word.
pub fn coalgebra_pullback_membership(sp: &StrictPullback, cutoff: i32) -> std::result::Result<(), Word> {
    let (f, g) = (&sp.square.f, &sp.square.g);
    let nlp = g.source().dim();
    let amb = sp.ambient.suspended_degrees();
    let tgt = f.target().suspended_degrees();
    let f_pr = |w: &Word| -> Vector {
        if w.letters().iter().all(|&i| i >= nlp) {
            f.data().eval(&Word::from_sorted(w.letters().iter().map(|i| i - nlp).collect()))
        } else {
            Vector::zero()
        }
    };
    let g_pr = |w: &Word| -> Vector {
        if w.letters().iter().all(|&i| i < nlp) {
            g.data().eval(w)
        } else {
            Vector::zero()
        }
    };
    let susp = sp.square.object.suspended_degrees();
    for w in words_up_to_degree(susp, cutoff) {
        let y = morphism_apply(&sp.h, &sp.embed_word(&w), amb, amb);
        if morphism_apply(&f_pr, &y, amb, tgt) != morphism_apply(&g_pr, &y, amb, tgt) {
            return Err(w);
        }
        let dy = reduced_coproduct(&y, amb);
        if apply_right(&dy, &f_pr, amb, tgt) != apply_right(&dy, &g_pr, amb, tgt) {
            return Err(w);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfty::catalog;

    #[test]
    fn pullback_along_identity_recovers_source() {
        let f = catalog::string_to_so3();
        let g = LInftyMorphism::identity(f.target().clone());
        let sp = pullback_strict_fibration(&f, &g).unwrap();
        assert_eq!(sp.square.object.dim(), f.source().dim());
        assert!(classify(&sp.square.p).isomorphism);
        assert!(sp.identities().all_hold());
    }

    #[test]
    fn pullback_to_zero_is_product() {
        let l = Arc::new(catalog::so3());
        let lp = Arc::new(catalog::solvable());
        let z = Arc::new(LieNAlgebra::zero());
        let f = LInftyMorphism::new(l.clone(), z.clone(), StructureMaps::new(0)).unwrap();
        let g = LInftyMorphism::new(lp.clone(), z, StructureMaps::new(0)).unwrap();
        let sp = pullback_strict_fibration(&f, &g).unwrap();
        let (prod, _, _) = product(&lp, &l).unwrap();
        assert_eq!(sp.square.object.dim(), 5);
        assert_eq!(sp.square.object.codifferential(), prod.codifferential());
    }

    #[test]
    fn string_extension_pulled_back_along_inclusion() {
        // so(3) ← string; pull back along the inclusion of the x-axis line.
        let f = catalog::string_to_so3();
        let line = Arc::new(catalog::line());
        let g = LInftyMorphism::strict(
            line.clone(),
            f.target().clone(),
            &GradedLinearMap::new(line.space().clone(), f.target().space().clone(), 0, vec![Vector::unit(0)]).unwrap(),
        )
        .unwrap();
        let sp = pullback_strict_fibration(&f, &g).unwrap();
        assert_eq!(sp.square.object.dim(), 2);
        assert!(coalgebra_pullback_membership(&sp, 4).is_ok());
    }
}
