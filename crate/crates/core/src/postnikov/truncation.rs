use std::sync::Arc;

use crate::coalgebra::{morphism_image, words_up_to_degree, Cogenerator, StructureMaps};
use crate::error::{Error, Result};
use crate::exactla::{echelon_basis, GradedLinearMap, GradedSpace, Matrix, Scalar, Vector};
use crate::linfty::{compose, LInftyMorphism, LieNAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationKind {
    /// τ≤m: coker d_{m+1} in degree m.
    AtMost,
    /// τ<m: im d_m in degree m.
    Below,
}

/// A truncation of L with its strict projection p: L → τL and a linear
/// (not necessarily chain) section `lift` of p.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub kind: TruncationKind,
    pub m: usize,
    pub source: Arc<LieNAlgebra>,
    pub algebra: Arc<LieNAlgebra>,
    pub projection: LInftyMorphism,
    pub lift: GradedLinearMap,
}

/// Builds τ≤m L or τ<m L. Below degree m the basis of L is kept. In degree
/// m the cokernel uses the first basis vectors of L_m independent of
/// im d_{m+1}, and the image uses d applied to the first independent basis
/// vectors of L_m, named `d<name>`.
pub fn truncate(l: &Arc<LieNAlgebra>, m: usize, kind: TruncationKind) -> Result<Truncation> {
    let sp = l.space();
    let d = l.differential();
    let mi = m as i32;
    let mut basis: Vec<(String, i32)> = Vec::new();
    let mut lift_cols: Vec<Vector> = Vec::new();
    for i in (0..sp.dim()).filter(|&i| sp.degree(i) < mi) {
        basis.push((sp.name(i).to_string(), sp.degree(i)));
        lift_cols.push(Vector::unit(i));
    }
    let top_idx = sp.indices_in_degree(mi);
    // vectors spanning the degree-m piece, in L coordinates, and how to
    // express an L-vector in their span
    let chosen: Vec<usize> = match kind {
        TruncationKind::AtMost => {
            let boundaries: Vec<Vec<Scalar>> =
                sp.indices_in_degree(mi + 1).iter().map(|&j| d.column(j).restrict(&top_idx)).collect();
            greedy_complement(&boundaries, top_idx.len())
        }
        TruncationKind::Below => {
            let below = sp.indices_in_degree(mi - 1);
            let images: Vec<Vec<Scalar>> = top_idx.iter().map(|&j| d.column(j).restrict(&below)).collect();
            greedy_independent(&images, below.len())
        }
    };
    for &k in &chosen {
        let j = top_idx[k];
        let name = match kind {
            TruncationKind::AtMost => sp.name(j).to_string(),
            TruncationKind::Below => format!("d{}", sp.name(j)),
        };
        basis.push((name, mi));
        lift_cols.push(Vector::unit(j));
    }
    let space = GradedSpace::new(basis)?;
    let n_low = lift_cols.len() - chosen.len();
    let mut p_cols = vec![Vector::zero(); sp.dim()];
    let mut low = 0;
    for (j, col) in p_cols.iter_mut().enumerate() {
        let deg = sp.degree(j);
        if deg < mi {
            *col = Vector::unit(low);
            low += 1;
        }
    }
    match kind {
        TruncationKind::AtMost => {
            // columns: chosen units, then the boundaries
            let mut cols: Vec<Vec<Scalar>> = chosen.iter().map(|&k| unit_vec(k, top_idx.len())).collect();
            cols.extend(sp.indices_in_degree(mi + 1).iter().map(|&j| d.column(j).restrict(&top_idx)));
            let mat = Matrix::from_columns(&cols, top_idx.len());
            for (k, &j) in top_idx.iter().enumerate() {
                let x = mat.solve(&unit_vec(k, top_idx.len())).expect("complement spans the cokernel");
                p_cols[j] = Vector::embed(&x[..chosen.len()], &(n_low..n_low + chosen.len()).collect::<Vec<_>>());
            }
        }
        TruncationKind::Below => {
            let below = sp.indices_in_degree(mi - 1);
            let cols: Vec<Vec<Scalar>> = chosen.iter().map(|&k| d.column(top_idx[k]).restrict(&below)).collect();
            let mat = Matrix::from_columns(&cols, below.len());
            for &j in &top_idx {
                let x = mat.solve(&d.column(j).restrict(&below)).expect("image basis spans im d");
                p_cols[j] = Vector::embed(&x, &(n_low..n_low + chosen.len()).collect::<Vec<_>>());
            }
        }
    }
    let p = GradedLinearMap::new(sp.clone(), space.clone(), 0, p_cols)?;
    let lift = GradedLinearMap::new(space.clone(), sp.clone(), 0, lift_cols)?;
    check_binary_well_defined(l, &p, mi)?;

    let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
    let lift_data = StructureMaps::linear(lift.columns(), 0);
    let mut codiff = StructureMaps::new(-1);
    let top = susp.iter().copied().max().unwrap_or(0);
    for w in words_up_to_degree(&susp, top + 1) {
        let image = morphism_image(&lift_data, &w, None, &susp, l.suspended_degrees());
        let v = p.apply(&l.codifferential().eval_sym(&image));
        if !v.is_zero() {
            codiff.set(w, v);
        }
    }
    let algebra = Arc::new(LieNAlgebra::new(space, Some(m + 1), codiff)?);
    let projection = LInftyMorphism::strict(l.clone(), algebra.clone(), &p)
        .map_err(|e| Error::Verification(format!("truncated brackets are not well defined: {e}")))?;
    Ok(Truncation { kind, m, source: l.clone(), algebra, projection, lift })
}

/// The case the well-definedness argument singles out: p ℓ₂(z, x) = 0 for z
/// in the kernel of p in degree m and x of degree 0.
fn check_binary_well_defined(l: &LieNAlgebra, p: &GradedLinearMap, m: i32) -> Result<()> {
    let idx = l.space().indices_in_degree(m);
    let kernel = p.block(m).kernel();
    for z in kernel {
        let z = Vector::embed(&z, &idx);
        for x in l.space().indices_in_degree(0) {
            let v = p.apply(&l.bracket_vectors(&[z.clone(), Vector::unit(x)]));
            if !v.is_zero() {
                return Err(Error::Verification(format!(
                    "ℓ₂ of a degree-{m} element killed by the truncation with {} survives",
                    l.space().name(x)
                )));
            }
        }
    }
    Ok(())
}

fn unit_vec(k: usize, n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::from_integer(0.into()); n];
    v[k] = Scalar::from_integer(1.into());
    v
}

/// Indices of the first unit vectors extending `span` to the whole space.
fn greedy_complement(span: &[Vec<Scalar>], n: usize) -> Vec<usize> {
    let mut acc: Vec<Vec<Scalar>> = echelon_basis(span, n);
    let mut out = Vec::new();
    for k in 0..n {
        let mut trial = acc.clone();
        trial.push(unit_vec(k, n));
        if Matrix::from_columns(&trial, n).rank() > acc.len() {
            acc = trial;
            out.push(k);
        }
    }
    out
}

/// Indices of the first vectors independent of the earlier ones.
fn greedy_independent(vs: &[Vec<Scalar>], n: usize) -> Vec<usize> {
    let mut acc: Vec<Vec<Scalar>> = Vec::new();
    let mut out = Vec::new();
    for (k, v) in vs.iter().enumerate() {
        let mut trial = acc.clone();
        trial.push(v.clone());
        if Matrix::from_columns(&trial, n).rank() > acc.len() {
            acc = trial;
            out.push(k);
        }
    }
    out
}

/// The strict map between truncations induced by the identity of L, when
/// `to`'s projection factors through `from`'s.
pub fn connecting(from: &Truncation, to: &Truncation) -> Result<LInftyMorphism> {
    if from.source != to.source {
        return Err(Error::TypeMismatch("truncations of different algebras".into()));
    }
    let q = to.projection.linear().compose(&from.lift)?;
    if q.compose(&from.projection.linear())? != to.projection.linear() {
        return Err(Error::InvalidInput("target truncation does not factor through the source".into()));
    }
    LInftyMorphism::strict(from.algebra.clone(), to.algebra.clone(), &q)
}

/// τφ between truncations of the same kind and level: components
/// p′ φ_k(lift x₁, …, lift x_k). Checked against τφ ∘ p = p′ ∘ φ.
pub fn truncate_morphism(phi: &LInftyMorphism, from: &Truncation, to: &Truncation) -> Result<LInftyMorphism> {
    if phi.source() != &from.source || phi.target() != &to.source {
        return Err(Error::TypeMismatch("morphism does not match the truncations".into()));
    }
    let src = &from.algebra;
    let lift_data = StructureMaps::linear(from.lift.columns(), 0);
    let p = to.projection.linear();
    let mut data = StructureMaps::new(0);
    for w in words_up_to_degree(src.suspended_degrees(), to.algebra.top_suspended_degree()) {
        let image = morphism_image(&lift_data, &w, None, src.suspended_degrees(), phi.source().suspended_degrees());
        let v = p.apply(&phi.data().eval_sym(&image));
        if !v.is_zero() {
            data.set(w, v);
        }
    }
    let t = LInftyMorphism::new(src.clone(), to.algebra.clone(), data)?;
    if compose(&t, &from.projection)? != compose(&to.projection, phi)? {
        return Err(Error::Verification("τφ ∘ p ≠ p′ ∘ φ".into()));
    }
    Ok(t)
}

/// τ≤M L → τ<M L → τ≤M−1 L → … → τ<1 L → τ≤0 L with the strict connecting
/// maps, where M is the top degree used.
#[derive(Clone, Debug)]
pub struct PostnikovTower {
    pub source: Arc<LieNAlgebra>,
    pub stages: Vec<Truncation>,
    pub maps: Vec<LInftyMorphism>,
}

pub fn tower(l: &Arc<LieNAlgebra>) -> Result<PostnikovTower> {
    let top = l.space().max_degree().unwrap_or(0).max(0) as usize;
    tower_from(l, top)
}

/// The tower starting at τ≤top.
pub fn tower_from(l: &Arc<LieNAlgebra>, top: usize) -> Result<PostnikovTower> {
    let mut stages = vec![truncate(l, top, TruncationKind::AtMost)?];
    for m in (1..=top).rev() {
        stages.push(truncate(l, m, TruncationKind::Below)?);
        stages.push(truncate(l, m - 1, TruncationKind::AtMost)?);
    }
    let maps = stages.windows(2).map(|w| connecting(&w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    for (k, q) in maps.iter().enumerate() {
        if compose(q, &stages[k].projection)? != stages[k + 1].projection {
            return Err(Error::Verification(format!("tower map {k} does not commute with the projections")));
        }
    }
    Ok(PostnikovTower { source: l.clone(), stages, maps })
}

/// The ladder τφ between two towers of the same length.
#[derive(Clone, Debug)]
pub struct TowerLadder {
    pub source: PostnikovTower,
    pub target: PostnikovTower,
    pub rungs: Vec<LInftyMorphism>,
}

pub fn tower_morphism(phi: &LInftyMorphism) -> Result<TowerLadder> {
    let top = [phi.source(), phi.target()].iter().map(|l| l.space().max_degree().unwrap_or(0).max(0)).max().unwrap_or(0) as usize;
    let source = tower_from(phi.source(), top)?;
    let target = tower_from(phi.target(), top)?;
    let rungs = source
        .stages
        .iter()
        .zip(&target.stages)
        .map(|(a, b)| truncate_morphism(phi, a, b))
        .collect::<Result<Vec<_>>>()?;
    for k in 0..source.maps.len() {
        if compose(&target.maps[k], &rungs[k])? != compose(&rungs[k + 1], &source.maps[k])? {
            return Err(Error::Verification(format!("tower square {k} does not commute")));
        }
    }
    Ok(TowerLadder { source, target, rungs })
}
