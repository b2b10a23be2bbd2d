use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::{Scalar, Vector};
use crate::error::{Error, Result};

/// Finite ℤ-graded vector space presented by a named, degree-tagged basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i32>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, i32)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, _) in &basis {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidInput(format!("duplicate basis name {name:?}")));
            }
        }
        let (names, degrees) = basis.into_iter().unzip();
        Ok(GradedSpace { names, degrees })
    }

    pub fn zero() -> Self {
        GradedSpace { names: Vec::new(), degrees: Vec::new() }
    }

    /// Builds a space from degrees alone, naming basis vectors `prefix0`, `prefix1`, ...
    pub fn anonymous(prefix: &str, degrees: &[i32]) -> Self {
        GradedSpace {
            names: (0..degrees.len()).map(|i| format!("{prefix}{i}")).collect(),
            degrees: degrees.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices_in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.degrees.iter().filter(|&&x| x == d).count()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().max()
    }

    /// Degrees carrying at least one basis vector, ascending.
    pub fn support(&self) -> Vec<i32> {
        let s: BTreeSet<i32> = self.degrees.iter().copied().collect();
        s.into_iter().collect()
    }

    pub fn dims_per_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// The same basis with every degree shifted by `k`.
    pub fn shifted(&self, k: i32) -> Self {
        GradedSpace {
            names: self.names.clone(),
            degrees: self.degrees.iter().map(|d| d + k).collect(),
        }
    }

    /// Direct sum with basis `self` followed by `other`; names get prefixes
    /// only when needed to stay unique.
    pub fn direct_sum(&self, other: &GradedSpace) -> Self {
        let clash = self.names.iter().any(|n| other.names.contains(n));
        let (a, b) = if clash { ("1.", "2.") } else { ("", "") };
        let mut names: Vec<String> = self.names.iter().map(|n| format!("{a}{n}")).collect();
        names.extend(other.names.iter().map(|n| format!("{b}{n}")));
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        GradedSpace { names, degrees }
    }

    pub fn is_homogeneous(&self, v: &Vector, d: i32) -> bool {
        v.support().all(|i| self.degrees[i] == d)
    }
}

/// Homogeneous linear map given by the image of each source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    columns: Vec<Vector>,
}

impl GradedLinearMap {
    pub fn new(source: GradedSpace, target: GradedSpace, shift: i32, columns: Vec<Vector>) -> Result<Self> {
        if columns.len() != source.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} columns, got {}",
                source.dim(),
                columns.len()
            )));
        }
        for (j, c) in columns.iter().enumerate() {
            for i in c.support() {
                if i >= target.dim() {
                    return Err(Error::InvalidInput(format!("column {j} has entry outside target")));
                }
                if target.degree(i) != source.degree(j) + shift {
                    return Err(Error::Inhomogeneous(format!(
                        "column {} ({}) hits {} in degree {}, expected degree {}",
                        j,
                        source.name(j),
                        target.name(i),
                        target.degree(i),
                        source.degree(j) + shift
                    )));
                }
            }
        }
        Ok(GradedLinearMap { source, target, shift, columns })
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i32) -> Self {
        GradedLinearMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            columns: vec![Vector::zero(); source.dim()],
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        GradedLinearMap {
            source: space.clone(),
            target: space.clone(),
            shift: 0,
            columns: (0..space.dim()).map(Vector::unit).collect(),
        }
    }

    /// Assembles a map from per-degree blocks (rows: target basis in degree
    /// `d + shift`, columns: source basis in degree `d`).
    pub fn from_blocks(
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i32,
        blocks: &BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        let mut columns = vec![Vector::zero(); source.dim()];
        for (d, m) in blocks {
            let src = source.indices_in_degree(*d);
            let tgt = target.indices_in_degree(d + shift);
            if m.cols() != src.len() || m.rows() != tgt.len() {
                return Err(Error::InvalidInput(format!("block in degree {d} has wrong shape")));
            }
            for (c, &j) in src.iter().enumerate() {
                columns[j] = Vector::embed(&m.column(c), &tgt);
            }
        }
        GradedLinearMap::new(source.clone(), target.clone(), shift, columns)
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedLinearMap) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::TypeMismatch("composition of graded maps: spaces differ".into()));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(GradedLinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            shift: self.shift + other.shift,
            columns,
        })
    }

    pub fn add(&self, other: &GradedLinearMap) -> Result<Self> {
        self.combine(other, &Scalar::from_integer(1.into()))
    }

    pub fn sub(&self, other: &GradedLinearMap) -> Result<Self> {
        self.combine(other, &Scalar::from_integer((-1).into()))
    }

    fn combine(&self, other: &GradedLinearMap, c: &Scalar) -> Result<Self> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::TypeMismatch("sum of graded maps with different types".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.add_scaled(b, c);
                v
            })
            .collect();
        Ok(GradedLinearMap { columns, ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vector::is_zero)
    }

    /// Matrix of the component in source degree `d`.
    pub fn block(&self, d: i32) -> Matrix {
        let src = self.source.indices_in_degree(d);
        let tgt = self.target.indices_in_degree(d + self.shift);
        let cols: Vec<Vec<Scalar>> = src.iter().map(|&j| self.columns[j].restrict(&tgt)).collect();
        Matrix::from_columns(&cols, tgt.len())
    }

    /// Degrees where either side is nonzero.
    pub fn relevant_degrees(&self) -> Vec<i32> {
        let mut s: BTreeSet<i32> = self.source.support().into_iter().collect();
        s.extend(self.target.support().into_iter().map(|d| d - self.shift));
        s.into_iter().collect()
    }

    pub fn rank_in_degree(&self, d: i32) -> usize {
        self.block(d).rank()
    }

    pub fn is_injective_in_degree(&self, d: i32) -> bool {
        self.rank_in_degree(d) == self.source.dim_in_degree(d)
    }

    pub fn is_surjective_in_degree(&self, d: i32) -> bool {
        self.rank_in_degree(d) == self.target.dim_in_degree(d + self.shift)
    }

    pub fn is_bijective(&self) -> bool {
        self.relevant_degrees()
            .iter()
            .all(|&d| self.is_injective_in_degree(d) && self.is_surjective_in_degree(d))
    }

    /// Inverse of a bijective degree-0 map.
    pub fn inverse(&self) -> Option<Self> {
        if self.shift != 0 {
            return None;
        }
        let mut blocks = BTreeMap::new();
        for d in self.relevant_degrees() {
            let inv = self.block(d).inverse()?;
            blocks.insert(d, inv);
        }
        GradedLinearMap::from_blocks(&self.target, &self.source, 0, &blocks).ok()
    }

    /// Same matrix, new source and target labels (degrees must be compatible).
    pub fn relabel(&self, source: &GradedSpace, target: &GradedSpace, shift: i32) -> Result<Self> {
        GradedLinearMap::new(source.clone(), target.clone(), shift, self.columns.clone())
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(i)
    }

    pub fn nonzero_entries(&self) -> usize {
        self.columns.iter().map(Vector::len).sum()
    }

    pub fn has_nonzero(&self) -> bool {
        self.columns.iter().any(|c| c.iter().any(|(_, x)| !x.is_zero()))
    }
}

pub fn is_surjective_in_degrees(f: &GradedLinearMap, degrees: &[i32]) -> bool {
    degrees.iter().all(|&d| f.is_surjective_in_degree(d))
}

/// Degrees `> 0` in which the target of `f` is nonzero (the degrees relevant
/// for the fibration condition).
pub fn positive_target_degrees(f: &GradedLinearMap) -> Vec<i32> {
    f.target().support().into_iter().filter(|&d| d > 0).map(|d| d - f.shift()).collect()
}

/// Right inverse of `f` on the listed degrees, zero elsewhere. Each target
/// basis vector goes to the preimage with all free variables zero.
pub fn section_of_surjection(f: &GradedLinearMap, degrees: &[i32]) -> Result<GradedLinearMap> {
    let mut columns = vec![Vector::zero(); f.target().dim()];
    for &d in degrees {
        let src = f.source().indices_in_degree(d);
        let tgt = f.target().indices_in_degree(d + f.shift());
        let m = f.block(d);
        for (r, &t) in tgt.iter().enumerate() {
            let mut e = vec![Scalar::zero(); tgt.len()];
            e[r] = Scalar::from_integer(1.into());
            let x = m.solve(&e).ok_or(Error::NotSurjective { degree: d })?;
            columns[t] = Vector::embed(&x, &src);
        }
    }
    GradedLinearMap::new(f.target().clone(), f.source().clone(), -f.shift(), columns)
}
