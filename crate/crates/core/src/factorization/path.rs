use crate::exactla::{is_chain_map, is_quasi_isomorphism, positive_target_degrees, ChainComplex, GradedLinearMap, GradedSpace, Vector};
use crate::error::{Error, Result};

/// The acyclic complex P(W) with its contracting homotopy and projection to
/// W. For every basis vector w of W in degree ≥ 1 there are two basis
/// vectors: X(w) in degree |w| and Y(w) in degree |w| − 1, with d X(w) = Y(w),
/// h Y(w) = X(w), π X(w) = w and π Y(w) = d_W w.
#[derive(Clone, Debug)]
pub struct PathComplex {
    pub complex: ChainComplex,
    pub h: GradedLinearMap,
    pub pi: GradedLinearMap,
    /// For each P-basis index, the W-basis index it comes from and whether
    /// it is the X copy.
    pub origin: Vec<(usize, bool)>,
}

impl PathComplex {
    pub fn new(w: &ChainComplex) -> Result<Self> {
        let ws = w.space();
        let mut basis = Vec::new();
        let mut origin = Vec::new();
        for i in 0..ws.dim() {
            let d = ws.degree(i);
            if d >= 1 {
                basis.push((format!("X({})", ws.name(i)), d));
                origin.push((i, true));
                basis.push((format!("Y({})", ws.name(i)), d - 1));
                origin.push((i, false));
            }
        }
        let space = GradedSpace::new(basis)?;
        let n = space.dim();
        let mut d_cols = vec![Vector::zero(); n];
        let mut h_cols = vec![Vector::zero(); n];
        let mut pi_cols = vec![Vector::zero(); n];
        for k in (0..n).step_by(2) {
            let wi = origin[k].0;
            d_cols[k] = Vector::unit(k + 1);
            h_cols[k + 1] = Vector::unit(k);
            pi_cols[k] = Vector::unit(wi);
            pi_cols[k + 1] = w.d().column(wi).clone();
        }
        let complex = ChainComplex::new(GradedLinearMap::new(space.clone(), space.clone(), -1, d_cols)?)?;
        let h = GradedLinearMap::new(space.clone(), space.clone(), 1, h_cols)?;
        let pi = GradedLinearMap::new(space, ws.clone(), 0, pi_cols)?;
        let p = PathComplex { complex, h, pi, origin };
        p.verify(w)?;
        Ok(p)
    }

    fn verify(&self, w: &ChainComplex) -> Result<()> {
        let d = self.complex.d();
        let sum = d.compose(&self.h)?.add(&self.h.compose(d)?)?;
        if sum != GradedLinearMap::identity(self.complex.space()) {
            return Err(Error::Verification("dh + hd ≠ id on P(W)".into()));
        }
        if !is_chain_map(&self.pi, &self.complex, w) {
            return Err(Error::Verification("π is not a chain map".into()));
        }
        if !positive_target_degrees(&self.pi).into_iter().all(|k| self.pi.is_surjective_in_degree(k)) {
            return Err(Error::Verification("π is not surjective in positive degrees".into()));
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }
}

/// f = p_f ∘ j through V ⊕ P(W).
#[derive(Clone, Debug)]
pub struct ChainFactorization {
    pub middle: ChainComplex,
    pub path: PathComplex,
    pub j: GradedLinearMap,
    pub p: GradedLinearMap,
}

pub fn factor_chain_map(f: &GradedLinearMap, v: &ChainComplex, w: &ChainComplex) -> Result<ChainFactorization> {
    if !is_chain_map(f, v, w) {
        return Err(Error::NotChainMap("f∘d ≠ d∘f".into()));
    }
    let path = PathComplex::new(w)?;
    let nv = v.space().dim();
    let space = v.space().direct_sum(path.space());
    let mut d_cols: Vec<Vector> = v.d().columns().to_vec();
    d_cols.extend(path.complex.d().columns().iter().map(|c| c.reindex(|i| i + nv)));
    let middle = ChainComplex::new(GradedLinearMap::new(space.clone(), space.clone(), -1, d_cols)?)?;
    let j_cols = (0..nv).map(Vector::unit).collect();
    let j = GradedLinearMap::new(v.space().clone(), space.clone(), 0, j_cols)?;
    let mut p_cols: Vec<Vector> = f.columns().to_vec();
    p_cols.extend(path.pi.columns().iter().cloned());
    let p = GradedLinearMap::new(space, w.space().clone(), 0, p_cols)?;
    if p.compose(&j)? != *f {
        return Err(Error::Verification("p_f ∘ j ≠ f".into()));
    }
    if !is_chain_map(&j, v, &middle) || !is_chain_map(&p, &middle, w) {
        return Err(Error::Verification("factors are not chain maps".into()));
    }
    if !is_quasi_isomorphism(&j, v, &middle)? {
        return Err(Error::Verification("j is not a quasi-isomorphism".into()));
    }
    if !positive_target_degrees(&p).into_iter().all(|k| p.is_surjective_in_degree(k)) {
        return Err(Error::Verification("p_f is not surjective in positive degrees".into()));
    }
    Ok(ChainFactorization { middle, path, j, p })
}
