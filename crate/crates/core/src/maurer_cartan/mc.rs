use std::collections::BTreeMap;

use super::cdga::BoundedCdga;
use super::tensor::{morphism_value, power_series, tensor, tensor_vectors, TensorAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{frac, int, GradedLinearMap, Scalar, Vector};
use crate::linfty::LInftyMorphism;
use crate::pullback::{coordinates_in, pullback_fibration, FibrationPullback};

/// f_*(a) = Σ_k ±(1/k!) f^B_k(a, …, a) with the same signs as the
/// curvature, without checking that `a` is MC.
pub fn pushforward_unchecked(f: &LInftyMorphism, source: &TensorAlgebra, a: &Vector) -> Vector {
    let b = source.cdga();
    let max = (source.tame_bound() - 1).min(f.data().max_arity());
    power_series(a, max, |t| morphism_value(f, b, t))
}

/// Pushes an MC point of L⊗B forward along f: L → L′ and checks that the
/// image is MC in L′⊗B.
pub fn pushforward(f: &LInftyMorphism, source: &TensorAlgebra, target: &TensorAlgebra, a: &Vector) -> Result<Vector> {
    if source.lie() != f.source() || target.lie() != f.target() || source.cdga() != target.cdga() {
        return Err(Error::TypeMismatch("tensor algebras do not match the morphism".into()));
    }
    if !source.is_mc(a)? {
        return Err(Error::NotMC(source.display_vector(a)));
    }
    let out = pushforward_unchecked(f, source, a);
    if !target.is_mc(&out)? {
        return Err(Error::Verification(format!("f_* of an MC point is not MC: {}", target.display_vector(&out))));
    }
    Ok(out)
}

/// Tensor algebras attached to the pullback of a fibration f: L → L″ along
/// g: L′ → L″, and the bijection between MC(L_P⊗B) and matched pairs.
#[derive(Clone, Debug)]
pub struct McPullback {
    pub pullback: FibrationPullback,
    pub source: TensorAlgebra,
    pub source_prime: TensorAlgebra,
    pub base: TensorAlgebra,
    pub object: TensorAlgebra,
    /// The strictified source when f is not strict.
    strict_source: Option<TensorAlgebra>,
}

impl McPullback {
    pub fn new(f: &LInftyMorphism, g: &LInftyMorphism, b: &BoundedCdga) -> Result<Self> {
        let pullback = pullback_fibration(f, g)?;
        let strict_source = match &pullback.strictification {
            Some(st) => Some(tensor(&st.twisted, b)?),
            None => None,
        };
        Ok(McPullback {
            source: tensor(f.source(), b)?,
            source_prime: tensor(g.source(), b)?,
            base: tensor(f.target(), b)?,
            object: tensor(&pullback.square.object, b)?,
            pullback,
            strict_source,
        })
    }

    /// φ(a′, a) = (a′, a − (σ⊗id) g_*(a′)) written in L_P ⊂ L′ ⊕ L, after
    /// moving a to the strictified source when f is not strict.
    pub fn phi(&self, a_prime: &Vector, a: &Vector) -> Result<Vector> {
        let sq = &self.pullback.square;
        if !self.source_prime.is_mc(a_prime)? {
            return Err(Error::NotMC(self.source_prime.display_vector(a_prime)));
        }
        if !self.source.is_mc(a)? {
            return Err(Error::NotMC(self.source.display_vector(a)));
        }
        let ga = pushforward(&sq.g, &self.source_prime, &self.base, a_prime)?;
        let fa = pushforward(&sq.f, &self.source, &self.base, a)?;
        if ga != fa {
            return Err(Error::NotMatched(format!(
                "g_*(a′) = {} but f_*(a) = {}",
                self.base.display_vector(&ga),
                self.base.display_vector(&fa)
            )));
        }
        let a_strict = match (&self.pullback.strictification, &self.strict_source) {
            (Some(st), Some(ts)) => pushforward(&st.phi_inverse, &self.source, ts, a)?,
            _ => a.clone(),
        };
        let nb = self.object.cdga().dim();
        let strict = &self.pullback.strict;
        let nlp = sq.g.source().dim();
        let correction = apply_tensored(&strict.sigma, &ga, nb);
        let lower = a_strict.minus(&correction);
        let ambient = a_prime.plus(&lower.reindex(|k| k + nlp * nb));
        let psi = coordinates_in_tensored(&strict.embedding, &ambient, nb)
            .ok_or_else(|| Error::Verification("φ(a′, a) leaves L_P ⊗ B".into()))?;
        if !self.object.is_mc(&psi)? {
            return Err(Error::Verification(format!("φ(a′, a) is not MC: {}", self.object.display_vector(&psi))));
        }
        let (back_prime, back) = self.h(&psi)?;
        if back_prime != *a_prime || back != *a {
            return Err(Error::Verification("q′_*φ ≠ a′ or q_*φ ≠ a".into()));
        }
        Ok(psi)
    }

    /// h(ψ) = (q′_*ψ, q_*ψ), the inverse of φ.
    pub fn h(&self, psi: &Vector) -> Result<(Vector, Vector)> {
        let sq = &self.pullback.square;
        let a_prime = pushforward(&sq.p_prime, &self.object, &self.source_prime, psi)?;
        let a = pushforward(&sq.p, &self.object, &self.source, psi)?;
        Ok((a_prime, a))
    }

    /// Checks h∘φ = id at (a′, a) and φ∘h = id at φ(a′, a).
    pub fn round_trip(&self, a_prime: &Vector, a: &Vector) -> Result<Vector> {
        let psi = self.phi(a_prime, a)?;
        let (bp, b) = self.h(&psi)?;
        if self.phi(&bp, &b)? != psi {
            return Err(Error::Verification("φ∘h ≠ id".into()));
        }
        Ok(psi)
    }
}

/// One-shot form of `McPullback::phi`.
pub fn mc_pullback_bijection(
    f: &LInftyMorphism,
    g: &LInftyMorphism,
    b: &BoundedCdga,
    a_prime: &Vector,
    a: &Vector,
) -> Result<Vector> {
    McPullback::new(f, g, b)?.phi(a_prime, a)
}

/// (φ ⊗ id)(v) for a linear map φ on the left factor.
fn apply_tensored(phi: &GradedLinearMap, v: &Vector, nb: usize) -> Vector {
    let mut out = Vector::zero();
    for (k, c) in v.iter() {
        let (i, j) = (k / nb, k % nb);
        out.add_scaled(&tensor_vectors(phi.column(i), &Vector::unit(j), nb), c);
    }
    out
}

fn coordinates_in_tensored(embedding: &GradedLinearMap, v: &Vector, nb: usize) -> Option<Vector> {
    let mut by_b: BTreeMap<usize, Vector> = BTreeMap::new();
    for (k, c) in v.iter() {
        by_b.entry(k % nb).or_default().add_entry(k / nb, c.clone());
    }
    let mut out = Vector::zero();
    for (j, w) in by_b {
        let x = coordinates_in(embedding, &w)?;
        out = out.plus(&tensor_vectors(&x, &Vector::unit(j), nb));
    }
    Some(out)
}

/// The sample values used per coordinate.
pub fn grid_values() -> Vec<Scalar> {
    vec![int(-2), int(-1), frac(-1, 2), int(0), frac(1, 2), int(1), int(2)]
}

/// Deterministic grid over `dim` coordinates: every point when there are at
/// most `cap`, otherwise `cap` points at evenly spaced positions in the
/// lexicographic enumeration.
pub fn grid(dim: usize, cap: usize) -> Vec<Vec<Scalar>> {
    let values = grid_values();
    let base = values.len() as u128;
    let total = base.checked_pow(dim as u32).unwrap_or(u128::MAX);
    let positions: Vec<u128> = if total <= cap as u128 {
        (0..total).collect()
    } else {
        (0..cap as u128).map(|k| k * (total / cap as u128)).collect()
    };
    positions
        .into_iter()
        .map(|mut p| {
            let mut point = vec![values[0].clone(); dim];
            for slot in point.iter_mut().rev() {
                *slot = values[(p % base) as usize].clone();
                p /= base;
            }
            point
        })
        .collect()
}

/// MC points of `t` among the grid over its degree −1 coordinates.
pub fn sample_mc_points(t: &TensorAlgebra, cap: usize) -> Vec<Vector> {
    grid(t.mc_coordinates().len(), cap)
        .into_iter()
        .map(|c| t.point(&c))
        .filter(|a| t.is_mc(a).unwrap_or(false))
        .collect()
}

/// The curvature polynomials of `t` rendered with the given coordinate
/// names, one line per output basis element.
pub fn display_curvature(t: &TensorAlgebra, names: &[String]) -> Vec<String> {
    t.curvature_polynomial()
        .into_iter()
        .map(|(k, p)| format!("{}: {}", t.space().name(k), p.display(names)))
        .collect()
}
