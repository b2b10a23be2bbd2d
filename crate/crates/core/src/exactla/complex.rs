use std::collections::BTreeMap;

use num_traits::Zero;

use super::graded::{section_of_surjection, GradedLinearMap, GradedSpace};
use super::matrix::{echelon_basis, reduce_against, Matrix};
use super::scalar::{Scalar, Vector};
use crate::error::{Error, Result};

/// Graded space with a square-zero differential of degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    d: GradedLinearMap,
}

impl ChainComplex {
    pub fn new(d: GradedLinearMap) -> Result<Self> {
        if d.shift() != -1 || d.source() != d.target() {
            return Err(Error::InvalidInput("differential must be an endomorphism of degree -1".into()));
        }
        let dd = d.compose(&d)?;
        if let Some(j) = (0..dd.source().dim()).find(|&j| !dd.column(j).is_zero()) {
            return Err(Error::NotSquareZero(format!("d∘d({}) ≠ 0", d.source().name(j))));
        }
        Ok(ChainComplex { d })
    }

    pub fn with_zero_differential(space: &GradedSpace) -> Self {
        ChainComplex { d: GradedLinearMap::zero(space, space, -1) }
    }

    pub fn space(&self) -> &GradedSpace {
        self.d.source()
    }

    pub fn d(&self) -> &GradedLinearMap {
        &self.d
    }
}

/// Homology in one degree: chosen cycle representatives and an echelon
/// basis of the boundaries, both as vectors in the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyInDegree {
    pub degree: i32,
    pub representatives: Vec<Vector>,
    pub boundaries: Vec<Vector>,
    pub cycle_dim: usize,
    indices: Vec<usize>,
    solver: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    space: GradedSpace,
    per_degree: BTreeMap<i32, HomologyInDegree>,
    offsets: BTreeMap<i32, usize>,
}

impl Homology {
    /// Homology as a graded space; basis vector `k` of degree `d` is the
    /// class of the k-th representative in that degree.
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.per_degree.iter().map(|(d, h)| (*d, h.representatives.len())).collect()
    }

    pub fn dim(&self, d: i32) -> usize {
        self.per_degree.get(&d).map_or(0, |h| h.representatives.len())
    }

    pub fn total_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn in_degree(&self, d: i32) -> Option<&HomologyInDegree> {
        self.per_degree.get(&d)
    }

    pub fn representatives(&self, d: i32) -> &[Vector] {
        self.per_degree.get(&d).map_or(&[], |h| &h.representatives)
    }

    /// Representative of homology basis vector `k`.
    pub fn representative(&self, k: usize) -> &Vector {
        let d = self.space.degree(k);
        &self.per_degree[&d].representatives[k - self.offsets[&d]]
    }

    /// Class of a cycle of degree `d`, as a vector in `self.space()`.
    /// Returns `None` if the input is not a cycle of that degree.
    pub fn class_of(&self, d: i32, cycle: &Vector) -> Option<Vector> {
        let Some(h) = self.per_degree.get(&d) else {
            return if cycle.is_zero() { Some(Vector::zero()) } else { None };
        };
        if cycle.support().any(|i| !h.indices.contains(&i)) {
            return None;
        }
        let local = cycle.restrict(&h.indices);
        let coords = h.solver.solve(&local)?;
        let nb = h.boundaries.len();
        let off = self.offsets[&d];
        let mut out = Vector::zero();
        for (k, c) in coords[nb..].iter().enumerate() {
            out.add_entry(off + k, c.clone());
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.space.dim() == 0
    }
}

/// Homology with deterministic representatives: the echelon basis of the
/// cycles, reduced against the echelon basis of the boundaries, keeping
/// those that enlarge the span.
pub fn homology(c: &ChainComplex) -> Homology {
    let space = c.space();
    let mut per_degree = BTreeMap::new();
    let mut basis = Vec::new();
    let mut offsets = BTreeMap::new();
    for d in space.support() {
        let idx = space.indices_in_degree(d);
        let n = idx.len();
        let cycles = c.d().block(d).kernel();
        let incoming = c.d().block(d + 1);
        let bcols: Vec<Vec<Scalar>> = (0..incoming.cols()).map(|j| incoming.column(j)).collect();
        let bound = echelon_basis(&bcols, n);
        let mut span = bound.clone();
        let mut reps: Vec<Vec<Scalar>> = Vec::new();
        for z in echelon_basis(&cycles, n) {
            let red = reduce_against(&z, &bound);
            if reduce_against(&red, &span).iter().any(|x| !x.is_zero()) {
                reps.push(red.clone());
                span.push(red);
                span = echelon_basis(&span, n);
            }
        }
        let mut solver_cols = bound.clone();
        solver_cols.extend(reps.iter().cloned());
        let solver = Matrix::from_columns(&solver_cols, n);
        offsets.insert(d, basis.len());
        for k in 0..reps.len() {
            basis.push((format!("H{d}[{k}]"), d));
        }
        per_degree.insert(
            d,
            HomologyInDegree {
                degree: d,
                representatives: reps.iter().map(|r| Vector::embed(r, &idx)).collect(),
                boundaries: bound.iter().map(|b| Vector::embed(b, &idx)).collect(),
                cycle_dim: cycles.len(),
                indices: idx,
                solver,
            },
        );
    }
    let space = GradedSpace::new(basis).expect("homology basis names are unique");
    Homology { space, per_degree, offsets }
}

pub fn is_chain_map(f: &GradedLinearMap, source: &ChainComplex, target: &ChainComplex) -> bool {
    chain_map_defect(f, source, target).is_none()
}

fn chain_map_defect(f: &GradedLinearMap, source: &ChainComplex, target: &ChainComplex) -> Option<String> {
    if f.source() != source.space() || f.target() != target.space() || f.shift() != 0 {
        return Some("map does not go between the given complexes".into());
    }
    for j in 0..f.source().dim() {
        let lhs = f.apply(source.d().column(j));
        let rhs = target.d().apply(f.column(j));
        if lhs != rhs {
            return Some(format!("f∘d ≠ d∘f on {}", f.source().name(j)));
        }
    }
    None
}

pub fn induced_map_on_homology(
    f: &GradedLinearMap,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<(GradedLinearMap, Homology, Homology)> {
    if let Some(msg) = chain_map_defect(f, source, target) {
        return Err(Error::NotChainMap(msg));
    }
    let hs = homology(source);
    let ht = homology(target);
    let columns = (0..hs.space().dim())
        .map(|k| {
            let d = hs.space().degree(k);
            ht.class_of(d, &f.apply(hs.representative(k)))
                .expect("chain maps send cycles to cycles")
        })
        .collect();
    let hf = GradedLinearMap::new(hs.space().clone(), ht.space().clone(), 0, columns)?;
    Ok((hf, hs, ht))
}

pub fn is_quasi_isomorphism(f: &GradedLinearMap, source: &ChainComplex, target: &ChainComplex) -> Result<bool> {
    let (hf, _, _) = induced_map_on_homology(f, source, target)?;
    Ok(hf.is_bijective())
}

/// For an acyclic fibration `f`, a chain-map section `σ` and a homotopy `h`
/// of degree +1 with `id − σf = dh + hd`. A caller-supplied section is used
/// as is (after verification); otherwise one is built degree by degree.
pub fn contracting_homotopy_for_acyclic(
    f: &GradedLinearMap,
    source: &ChainComplex,
    target: &ChainComplex,
    section: Option<&GradedLinearMap>,
) -> Result<(GradedLinearMap, GradedLinearMap)> {
    if !is_quasi_isomorphism(f, source, target)? {
        return Err(Error::NotAcyclicFibration("not a quasi-isomorphism".into()));
    }
    let all: Vec<i32> = target.space().support();
    for &d in &all {
        if !f.is_surjective_in_degree(d) {
            return Err(Error::NotAcyclicFibration(format!("not surjective in degree {d}")));
        }
    }
    let c = source.space();
    let kernel: BTreeMap<i32, Vec<Vector>> = c
        .support()
        .into_iter()
        .map(|d| {
            let idx = c.indices_in_degree(d);
            let k = echelon_basis(&f.block(d).kernel(), idx.len());
            (d, k.iter().map(|v| Vector::embed(v, &idx)).collect())
        })
        .collect();
    // Solves d(k) = z for k in the kernel of f in degree `d`.
    let lift_in_kernel = |d: i32, z: &Vector| -> Option<Vector> {
        if z.is_zero() {
            return Some(Vector::zero());
        }
        let ks = kernel.get(&d)?;
        let below = c.indices_in_degree(d - 1);
        let cols: Vec<Vec<Scalar>> = ks.iter().map(|k| source.d().apply(k).restrict(&below)).collect();
        let coeffs = Matrix::from_columns(&cols, below.len()).solve(&z.restrict(&below))?;
        let mut out = Vector::zero();
        for (k, a) in ks.iter().zip(&coeffs) {
            out.add_scaled(k, a);
        }
        Some(out)
    };

    let sigma = match section {
        Some(s) => s.clone(),
        None => {
            let mut columns = vec![Vector::zero(); target.space().dim()];
            let naive = section_of_surjection(f, &all)?;
            for &d in &all {
                for e in target.space().indices_in_degree(d) {
                    let x = naive.column(e).clone();
                    let mut de = Vector::zero();
                    for (i, a) in target.d().column(e).iter() {
                        de.add_scaled(&columns[i], a);
                    }
                    let z = source.d().apply(&x).minus(&de);
                    let k = lift_in_kernel(d, &z)
                        .ok_or_else(|| Error::NotAcyclicFibration("kernel of f is not acyclic".into()))?;
                    columns[e] = x.minus(&k);
                }
            }
            GradedLinearMap::new(target.space().clone(), c.clone(), 0, columns)?
        }
    };
    let id_t = GradedLinearMap::identity(target.space());
    if f.compose(&sigma)? != id_t {
        return Err(Error::Verification("f∘σ ≠ id".into()));
    }
    if !is_chain_map(&sigma, target, source) {
        return Err(Error::Verification("σ is not a chain map".into()));
    }

    // Contracting homotopy of ker f: split K_i = Z_i ⊕ C_i and invert d on C.
    let mut complements: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
    let mut cycles: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
    for (&d, ks) in &kernel {
        let idx = c.indices_in_degree(d);
        let below = c.indices_in_degree(d - 1);
        let cols: Vec<Vec<Scalar>> = ks.iter().map(|k| source.d().apply(k).restrict(&below)).collect();
        let dk = Matrix::from_columns(&cols, below.len());
        let z: Vec<Vector> = echelon_basis(&dk.kernel(), ks.len())
            .iter()
            .map(|coeffs| {
                let mut v = Vector::zero();
                for (k, a) in ks.iter().zip(coeffs) {
                    v.add_scaled(k, a);
                }
                v
            })
            .collect();
        let mut span: Vec<Vec<Scalar>> = z.iter().map(|v| v.restrict(&idx)).collect();
        span = echelon_basis(&span, idx.len());
        let mut comp = Vec::new();
        for k in ks {
            let local = k.restrict(&idx);
            if reduce_against(&local, &span).iter().any(|x| !x.is_zero()) {
                comp.push(k.clone());
                span.push(local);
                span = echelon_basis(&span, idx.len());
            }
        }
        cycles.insert(d, z);
        complements.insert(d, comp);
    }
    let id_s = GradedLinearMap::identity(c);
    let pi = id_s.sub(&sigma.compose(f)?)?;
    let mut h_cols = vec![Vector::zero(); c.dim()];
    for j in 0..c.dim() {
        let d = c.degree(j);
        let y = pi.column(j);
        if y.is_zero() {
            continue;
        }
        let idx = c.indices_in_degree(d);
        let z = cycles.get(&d).cloned().unwrap_or_default();
        let comp = complements.get(&d).cloned().unwrap_or_default();
        let mut basis: Vec<Vec<Scalar>> = z.iter().map(|v| v.restrict(&idx)).collect();
        basis.extend(comp.iter().map(|v| v.restrict(&idx)));
        let coords = Matrix::from_columns(&basis, idx.len())
            .solve(&y.restrict(&idx))
            .ok_or_else(|| Error::Verification("id − σf does not land in ker f".into()))?;
        let mut zpart = Vector::zero();
        for (v, a) in z.iter().zip(&coords) {
            zpart.add_scaled(v, a);
        }
        if zpart.is_zero() {
            continue;
        }
        let up = complements.get(&(d + 1)).cloned().unwrap_or_default();
        let cols: Vec<Vec<Scalar>> = up.iter().map(|u| source.d().apply(u).restrict(&idx)).collect();
        let a = Matrix::from_columns(&cols, idx.len())
            .solve(&zpart.restrict(&idx))
            .ok_or_else(|| Error::NotAcyclicFibration(format!("ker f has homology in degree {d}")))?;
        let mut hv = Vector::zero();
        for (u, x) in up.iter().zip(&a) {
            hv.add_scaled(u, x);
        }
        h_cols[j] = hv;
    }
    let h = GradedLinearMap::new(c.clone(), c.clone(), 1, h_cols)?;
    let dh = source.d().compose(&h)?;
    let hd = h.compose(source.d())?;
    if dh.add(&hd)? != pi {
        return Err(Error::Verification("id − σf ≠ dh + hd".into()));
    }
    Ok((sigma, h))
}

/// Convenience: the rank of a block with an explicit second elimination
/// order (columns reversed), used to cross-check homology dimensions.
pub fn rank_reversed(m: &Matrix) -> usize {
    let cols: Vec<Vec<Scalar>> = (0..m.cols()).rev().map(|j| m.column(j)).collect();
    Matrix::from_columns(&cols, m.rows()).transpose().rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::scalar::int;

    fn two_term(d_entry: i64) -> ChainComplex {
        // a (degree 1) ↦ d_entry · b (degree 0)
        let s = GradedSpace::new(vec![("a".into(), 1), ("b".into(), 0)]).unwrap();
        let d = GradedLinearMap::new(
            s.clone(),
            s,
            -1,
            vec![Vector::unit(1).scaled(&int(d_entry)), Vector::zero()],
        )
        .unwrap();
        ChainComplex::new(d).unwrap()
    }

    #[test]
    fn zero_differential_homology_is_space() {
        let s = GradedSpace::anonymous("x", &[0]);
        let h = homology(&ChainComplex::with_zero_differential(&s));
        assert_eq!(h.total_dim(), 1);
        assert_eq!(h.representatives(0), &[Vector::unit(0)]);
    }

    #[test]
    fn acyclic_two_term() {
        assert!(homology(&two_term(1)).is_zero());
        assert_eq!(homology(&two_term(0)).total_dim(), 2);
    }

    #[test]
    fn non_square_zero_rejected() {
        let s = GradedSpace::anonymous("x", &[2, 1, 0]);
        let d = GradedLinearMap::new(s.clone(), s, -1, vec![Vector::unit(1), Vector::unit(2), Vector::zero()]).unwrap();
        assert!(matches!(ChainComplex::new(d), Err(Error::NotSquareZero(_))));
    }

    #[test]
    fn quotient_to_cokernel_is_zero_on_homology() {
        // d = id on a two-term complex; its degree-0 cokernel is zero, so the
        // quotient map is the zero map onto the zero complex.
        let c = two_term(1);
        let z = ChainComplex::with_zero_differential(&GradedSpace::zero());
        let f = GradedLinearMap::zero(c.space(), z.space(), 0);
        let (hf, hs, ht) = induced_map_on_homology(&f, &c, &z).unwrap();
        assert!(hf.is_zero());
        assert!(hs.is_zero() && ht.is_zero());
    }

    #[test]
    fn not_chain_map_detected() {
        let c = two_term(1);
        let s2 = GradedSpace::new(vec![("b'".into(), 0)]).unwrap();
        let c2 = ChainComplex::with_zero_differential(&s2);
        let f = GradedLinearMap::new(c.space().clone(), s2, 0, vec![Vector::zero(), Vector::unit(0)]).unwrap();
        assert!(matches!(induced_map_on_homology(&f, &c, &c2), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn homotopy_for_identity() {
        let c = two_term(1);
        let id = GradedLinearMap::identity(c.space());
        let (s, h) = contracting_homotopy_for_acyclic(&id, &c, &c, None).unwrap();
        assert_eq!(s, id);
        assert!(h.is_zero());
    }

    #[test]
    fn homotopy_for_projection_of_acyclic_piece() {
        // C = (a ↦ b) ⊕ (x in degree 0), f: C → span{x}.
        let s = GradedSpace::new(vec![("a".into(), 1), ("b".into(), 0), ("x".into(), 0)]).unwrap();
        let d = GradedLinearMap::new(s.clone(), s.clone(), -1, vec![Vector::unit(1), Vector::zero(), Vector::zero()]).unwrap();
        let c = ChainComplex::new(d).unwrap();
        let t = GradedSpace::new(vec![("x".into(), 0)]).unwrap();
        let ct = ChainComplex::with_zero_differential(&t);
        let f = GradedLinearMap::new(s, t, 0, vec![Vector::zero(), Vector::zero(), Vector::unit(0)]).unwrap();
        let (sigma, h) = contracting_homotopy_for_acyclic(&f, &c, &ct, None).unwrap();
        assert_eq!(sigma.column(0), &Vector::unit(2));
        assert_eq!(h.column(1), &Vector::unit(0));
    }
}
