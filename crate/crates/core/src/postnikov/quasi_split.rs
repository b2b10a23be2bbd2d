use crate::error::{Error, Result};
use crate::exactla::{echelon_basis, induced_map_on_homology, Matrix, Scalar, Vector};
use crate::linfty::{classify, h0_map, LInftyMorphism, LieNAlgebra};

/// Outcome of the quasi-split test. `Undetermined` means condition (1)
/// holds but neither a witness nor the sufficient criteria decide (2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiSplit {
    Yes(String),
    No(String),
    Undetermined(String),
}

impl QuasiSplit {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            QuasiSplit::Yes(_) => Some(true),
            QuasiSplit::No(_) => Some(false),
            QuasiSplit::Undetermined(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuasiSplit::Yes(_) => "true",
            QuasiSplit::No(_) => "false",
            QuasiSplit::Undetermined(_) => "undetermined",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            QuasiSplit::Yes(r) | QuasiSplit::No(r) | QuasiSplit::Undetermined(r) => r,
        }
    }
}

/// A candidate complement S to ker H₀(f₁) in H₀(L), spanned by vectors in
/// the basis of `h0_lie_algebra(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingWitness {
    pub span: Vec<Vector>,
}

/// Decides whether a fibration is quasi-split: H(f₁) surjective in all
/// degrees, and H₀(L) ≅ K ⊕ H₀(L′) as Lie algebras with K = ker H₀(f₁).
///
/// Condition (2) is settled by a witness S (checked to be a subalgebra
/// complementary to K with [K, S] = 0), by H₀(L′) = 0, or, for abelian K, by
/// comparing derived algebras: an isomorphism forces dim [H₀L, H₀L] =
/// dim [H₀L′, H₀L′], and for central K that equality is also sufficient.
pub fn is_quasi_split(f: &LInftyMorphism, witness: Option<&SplittingWitness>) -> Result<QuasiSplit> {
    if !classify(f).fibration {
        return Err(Error::NotFibration);
    }
    let (hf, _, ht) = induced_map_on_homology(&f.linear(), &f.source().chain_complex(), &f.target().chain_complex())?;
    for d in ht.space().support() {
        if !hf.is_surjective_in_degree(d) {
            return Ok(QuasiSplit::No(format!("H_{d}(f₁) is not surjective")));
        }
    }
    let (h0f, h0, h0t) = h0_map(f)?;
    let lin = h0f.linear();
    let n = h0.dim();
    let kernel: Vec<Vector> = lin.block(0).kernel().iter().map(|v| Vector::from_dense(v)).collect();
    if let Some(w) = witness {
        return check_witness(&h0, &kernel, w);
    }
    if h0t.dim() == 0 {
        return Ok(QuasiSplit::Yes("H₀(L′) = 0".into()));
    }
    let k_abelian = pairs(&kernel, &kernel).all(|(a, b)| h0.bracket_vectors(&[a.clone(), b.clone()]).is_zero());
    if !k_abelian {
        return Ok(QuasiSplit::Undetermined("ker H₀(f₁) is not abelian and no witness was given".into()));
    }
    let derived = derived_dim(&h0);
    let derived_t = derived_dim(&h0t);
    if derived != derived_t {
        return Ok(QuasiSplit::No(format!(
            "dim [H₀L, H₀L] = {derived} but dim [H₀L′, H₀L′] = {derived_t} with abelian kernel"
        )));
    }
    let units: Vec<Vector> = (0..n).map(Vector::unit).collect();
    let central = pairs(&kernel, &units).all(|(a, b)| h0.bracket_vectors(&[a.clone(), b.clone()]).is_zero());
    if central {
        return Ok(QuasiSplit::Yes("ker H₀(f₁) is central and meets the derived algebra trivially".into()));
    }
    Ok(QuasiSplit::Undetermined("ker H₀(f₁) is abelian but not central and no witness was given".into()))
}

fn check_witness(h0: &LieNAlgebra, kernel: &[Vector], w: &SplittingWitness) -> Result<QuasiSplit> {
    let n = h0.dim();
    let dense = |v: &Vector| -> Vec<Scalar> { v.restrict(&(0..n).collect::<Vec<_>>()) };
    let s: Vec<Vec<Scalar>> = w.span.iter().map(dense).collect();
    let s_rank = echelon_basis(&s, n).len();
    let mut all = s.clone();
    all.extend(kernel.iter().map(dense));
    if s_rank + kernel.len() != n || Matrix::from_columns(&all, n).rank() != n {
        return Err(Error::InvalidInput("witness is not a complement of ker H₀(f₁)".into()));
    }
    let s_mat = Matrix::from_columns(&s, n);
    for (a, b) in pairs(&w.span, &w.span) {
        if s_mat.solve(&dense(&h0.bracket_vectors(&[a.clone(), b.clone()]))).is_none() {
            return Err(Error::InvalidInput("witness is not a subalgebra".into()));
        }
    }
    for (a, b) in pairs(kernel, &w.span) {
        if !h0.bracket_vectors(&[a.clone(), b.clone()]).is_zero() {
            return Err(Error::InvalidInput("witness does not commute with ker H₀(f₁)".into()));
        }
    }
    Ok(QuasiSplit::Yes("witness splits H₀(L) as a product".into()))
}

fn pairs<'a>(a: &'a [Vector], b: &'a [Vector]) -> impl Iterator<Item = (&'a Vector, &'a Vector)> {
    a.iter().flat_map(move |x| b.iter().map(move |y| (x, y)))
}

fn derived_dim(g: &LieNAlgebra) -> usize {
    let n = g.dim();
    let brackets: Vec<Vec<Scalar>> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| g.bracket(&[i, j]).restrict(&(0..n).collect::<Vec<_>>()))
        .collect();
    echelon_basis(&brackets, n).len()
}
