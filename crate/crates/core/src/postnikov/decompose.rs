use std::sync::Arc;

use num_traits::{One, Zero};

use super::truncation::{truncate, truncate_morphism, Truncation, TruncationKind};
use crate::coalgebra::{morphism_image, words_up_to_degree, Cogenerator, StructureMaps};
use crate::error::{Error, Result};
use crate::exactla::{
    contracting_homotopy_for_acyclic, echelon_basis, ChainComplex, GradedLinearMap, GradedSpace, Matrix, Scalar,
    Vector,
};
use crate::linfty::{classify, compose, pair_into_product, product, LInftyMorphism, LieNAlgebra};

/// A graded subcomplex of an algebra, as an abelian Lie n-algebra on a
/// chosen basis together with the inclusion.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub algebra: Arc<LieNAlgebra>,
    pub inclusion: GradedLinearMap,
}

impl Subcomplex {
    /// Basis vectors grouped by degree, in ambient coordinates.
    fn new(ambient: &LieNAlgebra, basis: Vec<(String, Vector)>) -> Result<Self> {
        let sp = ambient.space();
        let degs: Vec<i32> = basis
            .iter()
            .map(|(_, v)| v.support().next().map(|i| sp.degree(i)).unwrap_or(0))
            .collect();
        let space = GradedSpace::new(basis.iter().map(|(n, _)| n.clone()).zip(degs).collect())?;
        let inclusion = GradedLinearMap::new(space.clone(), sp.clone(), 0, basis.into_iter().map(|(_, v)| v).collect())?;
        let d = ambient.differential();
        let mut cols = Vec::with_capacity(space.dim());
        for j in 0..space.dim() {
            let dv = d.apply(inclusion.column(j));
            cols.push(coordinates(&inclusion, &dv).ok_or_else(|| {
                Error::Verification(format!("subspace is not closed under ℓ₁ at {}", space.name(j)))
            })?);
        }
        let complex = ChainComplex::new(GradedLinearMap::new(space.clone(), space, -1, cols)?)?;
        Ok(Subcomplex { algebra: Arc::new(LieNAlgebra::abelian(&complex)?), inclusion })
    }

    /// The kernel of a chain map as a subcomplex, with basis names `prefix0`,
    /// `prefix1`, … unless a basis vector is a unit of the ambient space.
    fn kernel(ambient: &LieNAlgebra, f: &GradedLinearMap) -> Result<Self> {
        let sp = ambient.space();
        let mut basis = Vec::new();
        for d in sp.support() {
            let idx = sp.indices_in_degree(d);
            for v in echelon_basis(&f.block(d).kernel(), idx.len()) {
                basis.push(Vector::embed(&v, &idx));
            }
        }
        Subcomplex::new(ambient, named(sp, basis, "k"))
    }

    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        coordinates(&self.inclusion, v)
    }
}

fn named(sp: &GradedSpace, basis: Vec<Vector>, prefix: &str) -> Vec<(String, Vector)> {
    basis
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let unit = v.len() == 1 && v.iter().all(|(_, c)| c.is_one());
            let name = match v.support().next() {
                Some(i) if unit => format!("[{}]", sp.name(i)),
                _ => format!("{prefix}{k}"),
            };
            (name, v)
        })
        .collect()
}

/// Coordinates of `v` in the columns of an injective map.
fn coordinates(inclusion: &GradedLinearMap, v: &Vector) -> Option<Vector> {
    let n = inclusion.target().dim();
    let all: Vec<usize> = (0..n).collect();
    let cols: Vec<Vec<Scalar>> = inclusion.columns().iter().map(|c| c.restrict(&all)).collect();
    if v.is_zero() {
        return Some(Vector::zero());
    }
    Matrix::from_columns(&cols, n).solve(&v.restrict(&all)).map(|x| Vector::from_dense(&x))
}

/// r: L → K = ker q₁ with r₁ = id − σq₁ and r_k = r₁ h ℓ_k for k ≥ 2, and
/// the isomorphism (q, r) onto the product.
#[derive(Clone, Debug)]
pub struct AcyclicSplitting {
    pub kernel: Subcomplex,
    pub section: GradedLinearMap,
    pub homotopy: GradedLinearMap,
    pub r: LInftyMorphism,
    pub product: Arc<LieNAlgebra>,
    pub iso: LInftyMorphism,
}

fn build_splitting(q: &LInftyMorphism, section: GradedLinearMap, homotopy: GradedLinearMap) -> Result<AcyclicSplitting> {
    let l = q.source();
    let lin = q.linear();
    let id = GradedLinearMap::identity(l.space());
    let dh = l.differential().compose(&homotopy)?;
    let hd = homotopy.compose(&l.differential())?;
    let g1 = id.sub(&section.compose(&lin)?)?;
    if g1 != dh.add(&hd)? {
        return Err(Error::Verification("id − σq₁ ≠ ℓ₁h + hℓ₁".into()));
    }
    let kernel = Subcomplex::kernel(l, &lin)?;
    let coords = |v: &Vector| {
        kernel.coordinates(v).ok_or_else(|| Error::Verification("r does not land in the kernel".into()))
    };
    let mut data = StructureMaps::new(0);
    for w in words_up_to_degree(l.suspended_degrees(), kernel.algebra.top_suspended_degree()) {
        let v = if w.len() == 1 {
            g1.column(w.letters()[0]).clone()
        } else {
            g1.apply(&homotopy.apply(&l.codifferential().eval(&w)))
        };
        let c = coords(&v)?;
        if !c.is_zero() {
            data.set(w, c);
        }
    }
    let r = LInftyMorphism::new(l.clone(), kernel.algebra.clone(), data)?;
    let (prod, _, _) = product(q.target(), &kernel.algebra)?;
    let iso = pair_into_product(&prod, q, &r)?;
    if !iso.linear().is_bijective() {
        return Err(Error::Verification("(q, r) is not bijective".into()));
    }
    Ok(AcyclicSplitting { kernel, section, homotopy, r, product: prod, iso })
}

/// L ≅ L′ ⊕ ker f₁ for an acyclic fibration f.
pub fn split_acyclic_fibration(f: &LInftyMorphism) -> Result<AcyclicSplitting> {
    if !classify(f).acyclic_fibration {
        return Err(Error::NotAcyclicFibration("f₁ is not a surjective quasi-isomorphism".into()));
    }
    let lin = f.linear();
    let (sigma, h) =
        contracting_homotopy_for_acyclic(&lin, &f.source().chain_complex(), &f.target().chain_complex(), None)?;
    build_splitting(f, sigma, h)
}

fn check_strict_epi(f: &LInftyMorphism) -> Result<()> {
    if !f.is_strict() {
        return Err(Error::NotStrict);
    }
    if !classify(f).epimorphism {
        return Err(Error::NotEpi);
    }
    Ok(())
}

/// The square τ<m+1 L ≅ τ≤m L ⊕ V over τ<m+1 f, with V = ker q<m+1.
#[derive(Clone, Debug)]
pub struct TowerStep1 {
    pub m: usize,
    pub upper: Truncation,
    pub lower: Truncation,
    pub upper_target: Truncation,
    pub lower_target: Truncation,
    pub q: LInftyMorphism,
    pub q_target: LInftyMorphism,
    pub split: AcyclicSplitting,
    pub split_target: AcyclicSplitting,
    /// τ<m+1 f
    pub left: LInftyMorphism,
    /// τ≤m f
    pub lower_map: LInftyMorphism,
    /// τ<m+1 f restricted to V → V′
    pub kernel_map: LInftyMorphism,
    /// τ≤m f ⊕ τ<m+1 f|V
    pub right: LInftyMorphism,
}

pub fn decompose_tower_step1(f: &LInftyMorphism, m: usize) -> Result<TowerStep1> {
    check_strict_epi(f)?;
    let mi = m as i32;
    let upper = truncate(f.source(), m + 1, TruncationKind::Below)?;
    let lower = truncate(f.source(), m, TruncationKind::AtMost)?;
    let upper_target = truncate(f.target(), m + 1, TruncationKind::Below)?;
    let lower_target = truncate(f.target(), m, TruncationKind::AtMost)?;
    let q = super::truncation::connecting(&upper, &lower)?;
    let q_target = super::truncation::connecting(&upper_target, &lower_target)?;
    let left = truncate_morphism(f, &upper, &upper_target)?;
    let lower_map = truncate_morphism(f, &lower, &lower_target)?;

    // s′ from the deterministic lift, then s solving πs = id, τf₁s = s′τf₁
    let sigma_t = upper_target.projection.linear().compose(&lower_target.lift)?;
    let a_m = lower.algebra.space().indices_in_degree(mi);
    let t_m = upper.algebra.space().indices_in_degree(mi);
    let tt_m = upper_target.algebra.space().indices_in_degree(mi);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let qb = q.linear().block(mi);
    let fb = left.linear().block(mi);
    for i in 0..qb.rows() {
        rows.push(qb.row(i));
    }
    for i in 0..fb.rows() {
        rows.push(fb.row(i));
    }
    let system = Matrix::from_rows(rows, t_m.len());
    let base = upper.projection.linear().compose(&lower.lift)?;
    let mut sigma_cols = base.columns().to_vec();
    for (k, &a) in a_m.iter().enumerate() {
        let mut rhs = vec![Scalar::zero(); a_m.len()];
        rhs[k] = Scalar::one();
        let target = sigma_t.apply(&lower_map.linear().column(a).clone());
        rhs.extend(target.restrict(&tt_m));
        let x = system
            .solve(&rhs)
            .ok_or_else(|| Error::Verification("no section compatible with τf₁ in degree m".into()))?;
        sigma_cols[a] = Vector::embed(&x, &t_m);
    }
    let sigma = GradedLinearMap::new(lower.algebra.space().clone(), upper.algebra.space().clone(), 0, sigma_cols)?;
    if left.linear().compose(&sigma)? != sigma_t.compose(&lower_map.linear())? {
        return Err(Error::Verification("τf₁σ ≠ σ′τf₁".into()));
    }
    let h = step1_homotopy(&upper, &q, &sigma, mi)?;
    let h_t = step1_homotopy(&upper_target, &q_target, &sigma_t, mi)?;
    if left.linear().compose(&h)? != h_t.compose(&left.linear())? {
        return Err(Error::Verification("τf₁h ≠ h′τf₁".into()));
    }
    let split = build_splitting(&q, sigma, h)?;
    let split_target = build_splitting(&q_target, sigma_t, h_t)?;

    let kcols = split
        .kernel
        .inclusion
        .columns()
        .iter()
        .map(|v| {
            split_target
                .kernel
                .coordinates(&left.linear().apply(v))
                .ok_or_else(|| Error::Verification("τf does not preserve the kernels".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let kmap = GradedLinearMap::new(
        split.kernel.algebra.space().clone(),
        split_target.kernel.algebra.space().clone(),
        0,
        kcols,
    )?;
    let kernel_map = LInftyMorphism::strict(split.kernel.algebra.clone(), split_target.kernel.algebra.clone(), &kmap)?;
    if compose(&split_target.r, &left)? != compose(&kernel_map, &split.r)? {
        return Err(Error::Verification("r′ ∘ τf ≠ τf|V ∘ r".into()));
    }
    let right = direct_sum_map(&split.product, &split_target.product, &lower_map.linear(), &kmap)?;
    if compose(&split_target.iso, &left)? != compose(&right, &split.iso)? {
        return Err(Error::Verification("the decomposition square does not commute".into()));
    }
    Ok(TowerStep1 {
        m,
        upper,
        lower,
        upper_target,
        lower_target,
        q,
        q_target,
        split,
        split_target,
        left,
        lower_map,
        kernel_map,
        right,
    })
}

/// h(x) = the degree-(m+1) preimage of x − sπ(x) for |x| = m, zero
/// elsewhere.
fn step1_homotopy(upper: &Truncation, q: &LInftyMorphism, sigma: &GradedLinearMap, m: i32) -> Result<GradedLinearMap> {
    let sp = upper.algebra.space();
    let d = upper.algebra.differential();
    let t_m = sp.indices_in_degree(m);
    let t_up = sp.indices_in_degree(m + 1);
    let dmat = d.block(m + 1);
    let mut cols = vec![Vector::zero(); sp.dim()];
    let sq = sigma.compose(&q.linear())?;
    for &x in &t_m {
        let v = Vector::unit(x).minus(sq.column(x));
        let y = dmat
            .solve(&v.restrict(&t_m))
            .ok_or_else(|| Error::Verification("x − sπx is not a boundary".into()))?;
        cols[x] = Vector::embed(&y, &t_up);
    }
    GradedLinearMap::new(sp.clone(), sp.clone(), 1, cols)
}

/// a ⊕ b between two products, both strict.
fn direct_sum_map(
    source: &Arc<LieNAlgebra>,
    target: &Arc<LieNAlgebra>,
    a: &GradedLinearMap,
    b: &GradedLinearMap,
) -> Result<LInftyMorphism> {
    let na = a.source().dim();
    let nt = a.target().dim();
    let mut cols = a.columns().to_vec();
    cols.extend(b.columns().iter().map(|c| c.reindex(|i| i + nt)));
    debug_assert_eq!(cols.len(), na + b.source().dim());
    let map = GradedLinearMap::new(source.space().clone(), target.space().clone(), 0, cols)?;
    LInftyMorphism::strict(source.clone(), target.clone(), &map)
}

/// One side of the second decomposition: q̂ = (q, id − tq) onto τ<m L ⊕ H_m
/// and the transferred structure.
#[derive(Clone, Debug)]
pub struct TwistedProduct {
    pub upper: Truncation,
    pub lower: Truncation,
    pub q: LInftyMorphism,
    pub homology: Subcomplex,
    /// t: τ<m L → τ≤m L
    pub section: GradedLinearMap,
    pub algebra: Arc<LieNAlgebra>,
    pub q_hat: LInftyMorphism,
}

impl TwistedProduct {
    /// ℓ̂₂((x, 0), (0, y)) for x of degree 0 and y in H_m, as (x, y, value).
    pub fn mixed_brackets(&self) -> Vec<(String, String, Vector)> {
        let nb = self.lower.algebra.dim();
        let sp = self.algebra.space();
        let mut out = Vec::new();
        for x in self.lower.algebra.space().indices_in_degree(0) {
            for y in 0..self.homology.algebra.dim() {
                let v = self.algebra.bracket(&[x, nb + y]);
                out.push((sp.name(x).to_string(), sp.name(nb + y).to_string(), v));
            }
        }
        out
    }

    pub fn has_nonzero_mixed_bracket(&self) -> bool {
        self.mixed_brackets().iter().any(|(_, _, v)| !v.is_zero())
    }
}

/// The square τ≤m L ≅ τ<m L ⊕ H_m over τ≤m f with strict vertical map
/// τ<m f ⊕ H(f).
#[derive(Clone, Debug)]
pub struct TowerStep2 {
    pub m: usize,
    pub source: TwistedProduct,
    pub target: TwistedProduct,
    /// τ≤m f
    pub left: LInftyMorphism,
    /// τ<m f
    pub lower_map: LInftyMorphism,
    /// H_m(f) in the chosen bases
    pub homology_map: GradedLinearMap,
    /// τ<m f ⊕ H(f)
    pub right: LInftyMorphism,
}

pub fn decompose_tower_step2(f: &LInftyMorphism, m: usize) -> Result<TowerStep2> {
    check_strict_epi(f)?;
    if m == 0 {
        return Err(Error::InvalidInput("the second decomposition needs m ≥ 1".into()));
    }
    let mi = m as i32;
    let upper = truncate(f.source(), m, TruncationKind::AtMost)?;
    let lower = truncate(f.source(), m, TruncationKind::Below)?;
    let upper_t = truncate(f.target(), m, TruncationKind::AtMost)?;
    let lower_t = truncate(f.target(), m, TruncationKind::Below)?;
    let q = super::truncation::connecting(&upper, &lower)?;
    let q_t = super::truncation::connecting(&upper_t, &lower_t)?;
    let left = truncate_morphism(f, &upper, &upper_t)?;
    let lower_map = truncate_morphism(f, &lower, &lower_t)?;
    let hom = Subcomplex::kernel(&upper.algebra, &q.linear())?;
    let hom_t = Subcomplex::kernel(&upper_t.algebra, &q_t.linear())?;

    let hcols = hom
        .inclusion
        .columns()
        .iter()
        .map(|v| hom_t.coordinates(&left.linear().apply(v)).expect("τf maps ker q into ker q′"))
        .collect::<Vec<_>>();
    let hf = GradedLinearMap::new(hom.algebra.space().clone(), hom_t.algebra.space().clone(), 0, hcols)?;
    if !hf.is_surjective_in_degree(mi) {
        return Err(Error::HomologyNotSurjective { degree: mi });
    }

    // local coordinates in degree m
    let a_m = upper.algebra.space().indices_in_degree(mi);
    let at_m = upper_t.algebra.space().indices_in_degree(mi);
    let b_m = lower.algebra.space().indices_in_degree(mi);
    let bt_m = lower_t.algebra.space().indices_in_degree(mi);
    let ht_idx = hom_t.algebra.space().indices_in_degree(mi);
    let mu = right_inverse(&hf.block(mi))?;
    let nu = right_inverse(&lower_map.linear().block(mi))?;
    let psi = right_inverse(&q.linear().block(mi))?;
    let fa = left.linear().block(mi);
    let fb = lower_map.linear().block(mi);
    let incl = hom.inclusion.block(mi);
    let incl_t = hom_t.inclusion.block(mi);
    let s_t = fa.mul(&psi).mul(&nu);
    // τ≤m f₁ψ − s′τ<m f₁ lands in H′; pull back along μ and push into A_m
    let defect = sub(&fa.mul(&psi), &s_t.mul(&fb));
    let mut defect_h = Matrix::zeros(ht_idx.len(), b_m.len());
    for j in 0..b_m.len() {
        let c = incl_t
            .solve(&defect.column(j))
            .ok_or_else(|| Error::Verification("τf₁ψ − s′τf₁ does not land in H′".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            defect_h.set(i, j, x);
        }
    }
    let s = sub(&psi, &incl.mul(&mu).mul(&defect_h));
    if fa.mul(&s) != s_t.mul(&fb) {
        return Err(Error::Verification("τ≤m f₁ s ≠ s′ τ<m f₁".into()));
    }
    let source = twisted_product(upper, lower, q, hom, &s, &a_m, &b_m)?;
    let target = twisted_product(upper_t, lower_t, q_t, hom_t, &s_t, &at_m, &bt_m)?;
    let right = direct_sum_map(&source.algebra, &target.algebra, &lower_map.linear(), &hf)?;
    if compose(&target.q_hat, &left)? != compose(&right, &source.q_hat)? {
        return Err(Error::Verification("the twisted-product square does not commute".into()));
    }
    Ok(TowerStep2 { m, source, target, left, lower_map, homology_map: hf, right })
}

fn twisted_product(
    upper: Truncation,
    lower: Truncation,
    q: LInftyMorphism,
    homology: Subcomplex,
    s: &Matrix,
    a_m: &[usize],
    b_m: &[usize],
) -> Result<TwistedProduct> {
    let a = upper.algebra.clone();
    let b = lower.algebra.clone();
    let base = upper.projection.linear().compose(&lower.lift)?;
    let mut t_cols = base.columns().to_vec();
    for (k, &j) in b_m.iter().enumerate() {
        t_cols[j] = Vector::embed(&s.column(k), a_m);
    }
    let t = GradedLinearMap::new(b.space().clone(), a.space().clone(), 0, t_cols)?;
    if q.linear().compose(&t)? != GradedLinearMap::identity(b.space()) {
        return Err(Error::Verification("t is not a section of q".into()));
    }
    if a.differential().compose(&t)? != t.compose(&b.differential())? {
        return Err(Error::Verification("t is not a chain map".into()));
    }
    let r_hat = GradedLinearMap::identity(a.space()).sub(&t.compose(&q.linear())?)?;
    let nb = b.dim();
    let mut cols = Vec::with_capacity(a.dim());
    for j in 0..a.dim() {
        let mut v = q.linear().column(j).clone();
        let h = homology
            .coordinates(r_hat.column(j))
            .ok_or_else(|| Error::Verification("id − tq does not land in H_m".into()))?;
        v = v.plus(&h.reindex(|i| i + nb));
        cols.push(v);
    }
    let space = b.space().direct_sum(homology.algebra.space());
    let q_hat_lin = GradedLinearMap::new(a.space().clone(), space.clone(), 0, cols)?;
    let inv = q_hat_lin.inverse().ok_or_else(|| Error::Verification("q̂ is not invertible".into()))?;

    let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
    let inv_data = StructureMaps::linear(inv.columns(), 0);
    let top = susp.iter().copied().max().unwrap_or(0);
    let mut codiff = StructureMaps::new(-1);
    for w in words_up_to_degree(&susp, top + 1) {
        let image = morphism_image(&inv_data, &w, None, &susp, a.suspended_degrees());
        let v = q_hat_lin.apply(&a.codifferential().eval_sym(&image));
        if !v.is_zero() {
            codiff.set(w, v);
        }
    }
    let algebra = Arc::new(LieNAlgebra::new(space, Some(a.n()), codiff)?);
    let q_hat = LInftyMorphism::strict(a, algebra.clone(), &q_hat_lin)?;
    Ok(TwistedProduct { upper, lower, q, homology, section: t, algebra, q_hat })
}

fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j) - b.get(i, j));
        }
    }
    out
}

/// A right inverse of a surjective matrix, free variables set to zero.
fn right_inverse(a: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(a.cols(), a.rows());
    for k in 0..a.rows() {
        let mut e = vec![Scalar::zero(); a.rows()];
        e[k] = Scalar::one();
        let x = a.solve(&e).ok_or_else(|| Error::Verification("map is not surjective in degree m".into()))?;
        for (i, v) in x.into_iter().enumerate() {
            out.set(i, k, v);
        }
    }
    Ok(out)
}
