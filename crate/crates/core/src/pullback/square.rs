use std::sync::Arc;

use super::strict::{pullback_strict_fibration, StrictPullback};
use crate::coalgebra::{morphism_image, words_up_to_degree, Cogenerator, StructureMaps, Word};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Scalar, Vector};
use crate::factorization::{strictify_fibration, Strictification};
use crate::linfty::{classify, compose, LInftyMorphism, LieNAlgebra};

/// A commuting square  object → L (p),  object → L′ (p′),  f: L → L″,
/// g: L′ → L″  with f∘p = g∘p′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackSquare {
    pub object: Arc<LieNAlgebra>,
    pub p: LInftyMorphism,
    pub p_prime: LInftyMorphism,
    pub f: LInftyMorphism,
    pub g: LInftyMorphism,
}

/// Pullback of a fibration along an arbitrary morphism.
#[derive(Clone, Debug)]
pub struct FibrationPullback {
    pub square: PullbackSquare,
    /// The strict pullback the square is transported from.
    pub strict: StrictPullback,
    /// `None` when f was already strict.
    pub strictification: Option<Strictification>,
}

/// Strictifies f, pulls the strict fibration back along g and composes the
/// projection to L with the isomorphism φ.
pub fn pullback_fibration(f: &LInftyMorphism, g: &LInftyMorphism) -> Result<FibrationPullback> {
    if !classify(f).fibration {
        return Err(Error::NotFibration);
    }
    if f.target() != g.target() {
        return Err(Error::TypeMismatch("f and g have different targets".into()));
    }
    if f.is_strict() {
        let strict = pullback_strict_fibration(f, g)?;
        return Ok(FibrationPullback { square: strict.square.clone(), strict, strictification: None });
    }
    let st = strictify_fibration(f)?;
    let strict = pullback_strict_fibration(&st.strict, g)?;
    let q = compose(&st.phi, &strict.square.p)?;
    let square = PullbackSquare {
        object: strict.square.object.clone(),
        p: q,
        p_prime: strict.square.p_prime.clone(),
        f: f.clone(),
        g: g.clone(),
    };
    if compose(f, &square.p)? != compose(g, &square.p_prime)? {
        return Err(Error::Verification("f∘q ≠ g∘q′".into()));
    }
    Ok(FibrationPullback { square, strict, strictification: Some(st) })
}

/// Structure maps of a cone filler, and the verified morphism when every
/// arity that can carry data was solved.
#[derive(Clone, Debug)]
pub struct Filler {
    pub data: StructureMaps,
    pub morphism: Option<LInftyMorphism>,
}

/// Solves p∘u = a and p′∘u = b for u: K → object, arity by arity. In arity
/// m the unknown U¹_m(w) enters only through p¹₁ and p′¹₁, so each word
/// gives a linear system with the fixed matrix (p₁, p′₁). A rank deficit
/// in a degree that K reaches means fillers are not unique.
pub fn verify_universal_property(
    square: &PullbackSquare,
    a: &LInftyMorphism,
    b: &LInftyMorphism,
    max_arity: Option<usize>,
) -> Result<Filler> {
    if a.source() != b.source() {
        return Err(Error::TypeMismatch("cone legs have different sources".into()));
    }
    if a.target() != square.p.target() || b.target() != square.p_prime.target() {
        return Err(Error::TypeMismatch("cone legs do not land in the square".into()));
    }
    if compose(&square.f, a)? != compose(&square.g, b)? {
        return Err(Error::InvalidInput("test cone does not commute".into()));
    }
    let k = a.source();
    let obj = &square.object;
    let kd = k.suspended_degrees();
    let od = obj.suspended_degrees();
    let nl = square.p.target().dim();
    let p1: Vec<Vector> = (0..obj.dim())
        .map(|j| {
            let p = square.p.data().linear_column(j);
            p.plus(&square.p_prime.data().linear_column(j).reindex(|i| i + nl))
        })
        .collect();
    let all_words = words_up_to_degree(kd, obj.top_suspended_degree());
    let words: Vec<Word> = all_words.iter().filter(|w| max_arity.is_none_or(|m| w.len() <= m)).cloned().collect();
    let target_degree = |i: usize| -> i32 {
        if i < nl {
            square.p.target().degrees()[i]
        } else {
            square.p_prime.target().degrees()[i - nl]
        }
    };

    let mut data = StructureMaps::new(0);
    let max_len = words.iter().map(Word::len).max().unwrap_or(0);
    for m in 1..=max_len {
        let partial = data.clone();
        for w in words.iter().filter(|w| w.len() == m) {
            let d = w.degree(kd) - 1;
            let src = obj.space().indices_in_degree(d);
            let rows: Vec<usize> = (0..nl + square.p_prime.target().dim()).filter(|&i| target_degree(i) == d).collect();
            let cols: Vec<Vec<Scalar>> = src.iter().map(|&j| p1[j].restrict(&rows)).collect();
            let mat = Matrix::from_columns(&cols, rows.len());
            if mat.rank() < src.len() {
                return Err(Error::NonUniqueFiller(format!(
                    "(p₁, p′₁) has a kernel in degree {d}, reached by {}",
                    w.display(&k.suspended_names())
                )));
            }
            let img = morphism_image(&partial, w, None, kd, od);
            let rest_p = square.p.data().eval_sym(&img);
            let rest_pp = square.p_prime.data().eval_sym(&img);
            let rhs = a.data().eval(w).minus(&rest_p).plus(&b.data().eval(w).minus(&rest_pp).reindex(|i| i + nl));
            let x = mat.solve(&rhs.restrict(&rows)).ok_or_else(|| {
                Error::NoFiller(format!("no solution on {}", w.display(&k.suspended_names())))
            })?;
            data.set(w.clone(), Vector::embed(&x, &src));
        }
    }
    let complete = words.len() == all_words.len();
    let morphism = if complete {
        let u = LInftyMorphism::new(k.clone(), obj.clone(), data.clone())?;
        if compose(&square.p, &u)? != *a || compose(&square.p_prime, &u)? != *b {
            return Err(Error::Verification("filler does not reproduce the cone".into()));
        }
        Some(u)
    } else {
        None
    };
    Ok(Filler { data, morphism })
}

/// Checks that the tangent square is a pullback of chain complexes: f₁p₁ =
/// g₁p′₁, and in every degree (p₁, p′₁) is injective with image of
/// dimension dim ker(f₁ − g₁) on L ⊕ L′.
pub fn verify_tangent_exactness(square: &PullbackSquare) -> bool {
    let (f1, g1) = (square.f.linear(), square.g.linear());
    let (p1, pp1) = (square.p.linear(), square.p_prime.linear());
    let (Ok(a), Ok(b)) = (f1.compose(&p1), g1.compose(&pp1)) else {
        return false;
    };
    if a != b {
        return false;
    }
    let (l, lp) = (square.p.target().space(), square.p_prime.target().space());
    let obj = square.object.space();
    let mut degrees: Vec<i32> = l.support();
    degrees.extend(lp.support());
    degrees.extend(obj.support());
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let src = obj.indices_in_degree(d);
        let (li, lpi) = (l.indices_in_degree(d), lp.indices_in_degree(d));
        let cols: Vec<Vec<Scalar>> = src
            .iter()
            .map(|&j| {
                let mut c = p1.column(j).restrict(&li);
                c.extend(pp1.column(j).restrict(&lpi));
                c
            })
            .collect();
        let rank = Matrix::from_columns(&cols, li.len() + lpi.len()).rank();
        let diff: Vec<Vec<Scalar>> = li
            .iter()
            .map(|&j| f1.column(j).clone())
            .chain(lpi.iter().map(|&j| g1.column(j).negated()))
            .map(|c| c.restrict(&f1.target().indices_in_degree(d)))
            .collect();
        let rows = f1.target().dim_in_degree(d);
        let fiber = li.len() + lpi.len() - Matrix::from_columns(&diff, rows).rank();
        if rank != src.len() || src.len() != fiber {
            return false;
        }
    }
    true
}
