use super::strict::{path_object, PathObject};
use crate::error::{Error, Result};
use crate::linfty::{classify, compose, LInftyMorphism};
use crate::pullback::{pullback_fibration, verify_universal_property, FibrationPullback};

/// f = p_f ∘ j through L ×_{L′} L′^I.
#[derive(Clone, Debug)]
pub struct BrownFactorization {
    pub path: PathObject,
    /// Pullback of d₀: L′^I → L′ along f; its `p_prime` leg is the acyclic
    /// fibration L ×_{L′} L′^I → L that j is a section of.
    pub pullback: FibrationPullback,
    pub j: LInftyMorphism,
    pub p_f: LInftyMorphism,
}

/// Factors an arbitrary morphism f: L → L′ as a weak equivalence j (a
/// section of an acyclic fibration) followed by a fibration p_f = d₁∘q.
/// j is the filler of the cone (s∘f, id_L).
pub fn brown_factorize(f: &LInftyMorphism) -> Result<BrownFactorization> {
    let path = path_object(f.target())?;
    let pullback = pullback_fibration(&path.d0, f)?;
    let square = &pullback.square;
    let sf = compose(&path.s, f)?;
    let id = LInftyMorphism::identity(f.source().clone());
    let filler = verify_universal_property(square, &sf, &id, None)?;
    let j = filler.morphism.ok_or_else(|| Error::Verification("cone filler is incomplete".into()))?;
    let p_f = compose(&path.d1, &square.p)?;
    if compose(&p_f, &j)? != *f {
        return Err(Error::Verification("p_f ∘ j ≠ f".into()));
    }
    if !classify(&p_f).fibration {
        return Err(Error::Verification("p_f is not a fibration".into()));
    }
    if !classify(&square.p_prime).acyclic_fibration || compose(&square.p_prime, &j)? != id {
        return Err(Error::Verification("j is not a section of an acyclic fibration".into()));
    }
    if !classify(&j).weak_equivalence {
        return Err(Error::Verification("j is not a weak equivalence".into()));
    }
    Ok(BrownFactorization { path, pullback, j, p_f })
}
