use std::collections::BTreeMap;

use super::maps::{coderivation_image, morphism_image, Cogenerator};
use super::word::{words_up_to_degree, Word};
use crate::error::{Error, Result};
use crate::exactla::{homology, ChainComplex, GradedLinearMap, GradedSpace, Homology, Matrix, Scalar, Vector};

/// The truncation of (S̄(V), δ) to words of degree ≤ `max_degree`, as a chain
/// complex whose basis is the list of words. `degrees` are the (positive)
/// degrees of V.
pub struct WordComplex {
    pub words: Vec<Word>,
    pub complex: ChainComplex,
    index: BTreeMap<Word, usize>,
}

impl WordComplex {
    pub fn build<C: Cogenerator + ?Sized>(d: &C, degrees: &[i32], names: &[String], max_degree: i32) -> Result<Self> {
        let words = words_up_to_degree(degrees, max_degree);
        let index: BTreeMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let basis = words.iter().map(|w| (w.display(names), w.degree(degrees))).collect();
        let space = GradedSpace::new(basis)?;
        let mut columns = Vec::with_capacity(words.len());
        for w in &words {
            let image = coderivation_image(d, w, None, degrees);
            let mut col = Vector::zero();
            for (u, c) in image.iter() {
                let i = index
                    .get(u)
                    .ok_or_else(|| Error::InvalidInput(format!("δ({w:?}) leaves the word complex")))?;
                col.add_entry(*i, c.clone());
            }
            columns.push(col);
        }
        let d = GradedLinearMap::new(space.clone(), space, -1, columns)?;
        Ok(WordComplex { words, complex: ChainComplex::new(d)?, index })
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Homology of (S̄(V), δ), reported for degrees ≤ `cutoff`. Words of degree
/// `cutoff + 1` are included so that boundaries into the top reported degree
/// are complete.
pub struct CoalgebraHomology {
    pub cutoff: i32,
    pub complex: WordComplex,
    pub homology: Homology,
}

impl CoalgebraHomology {
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        (1..=self.cutoff).map(|d| (d, self.homology.dim(d))).filter(|(_, n)| *n > 0).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().values().sum()
    }

    /// Representatives in degrees ≤ cutoff as combinations of words.
    pub fn representatives(&self) -> Vec<Vec<(Word, Scalar)>> {
        let mut out = Vec::new();
        for d in 1..=self.cutoff {
            for r in self.homology.representatives(d) {
                out.push(r.iter().map(|(i, c)| (self.complex.words[i].clone(), c.clone())).collect());
            }
        }
        out
    }
}

pub fn reduced_coalgebra_homology<C: Cogenerator + ?Sized>(
    d: &C,
    degrees: &[i32],
    names: &[String],
    cutoff: i32,
) -> Result<CoalgebraHomology> {
    let complex = WordComplex::build(d, degrees, names, cutoff + 1)?;
    let homology = homology(&complex.complex);
    Ok(CoalgebraHomology { cutoff, complex, homology })
}

/// H(F) in degrees ≤ cutoff for the coalgebra morphism with arity-one data `f`.
pub fn induced_coalgebra_map<F: Cogenerator + ?Sized>(
    f: &F,
    source: &CoalgebraHomology,
    target: &CoalgebraHomology,
    source_degrees: &[i32],
    target_degrees: &[i32],
) -> Result<CoalgebraMapOnHomology> {
    let cutoff = source.cutoff.min(target.cutoff);
    let sw = &source.complex;
    let tw = &target.complex;
    let mut columns = vec![Vector::zero(); sw.words.len()];
    for (k, w) in sw.words.iter().enumerate() {
        if w.degree(source_degrees) > cutoff {
            continue;
        }
        let image = morphism_image(f, w, None, source_degrees, target_degrees);
        for (u, c) in image.iter() {
            let i = tw
                .index_of(u)
                .ok_or_else(|| Error::InvalidInput("image word missing from target complex".into()))?;
            columns[k].add_entry(i, c.clone());
        }
    }
    let mut per_degree = BTreeMap::new();
    for d in 1..=cutoff {
        let mut classes = Vec::new();
        for r in source.homology.representatives(d) {
            let mut img = Vector::zero();
            for (i, c) in r.iter() {
                img.add_scaled(&columns[i], c);
            }
            let class = target
                .homology
                .class_of(d, &img)
                .ok_or_else(|| Error::NotChainMap(format!("image of a degree-{d} cycle is not a cycle")))?;
            classes.push(class);
        }
        per_degree.insert(d, classes);
    }
    Ok(CoalgebraMapOnHomology { cutoff, per_degree, source_dims: source.dims(), target_dims: target.dims() })
}

/// H(F) degree by degree: column k of degree d is the class of the image of
/// the k-th source representative.
pub struct CoalgebraMapOnHomology {
    pub cutoff: i32,
    pub per_degree: BTreeMap<i32, Vec<Vector>>,
    pub source_dims: BTreeMap<i32, usize>,
    pub target_dims: BTreeMap<i32, usize>,
}

impl CoalgebraMapOnHomology {
    pub fn is_isomorphism(&self) -> bool {
        (1..=self.cutoff).all(|d| {
            let n = self.source_dims.get(&d).copied().unwrap_or(0);
            let m = self.target_dims.get(&d).copied().unwrap_or(0);
            if n != m {
                return false;
            }
            let cols: Vec<Vec<Scalar>> =
                self.per_degree[&d].iter().map(|v| (0..m).map(|i| v.get(i + offset(&self.target_dims, d))).collect()).collect();
            Matrix::from_columns(&cols, m).rank() == m
        })
    }
}

fn offset(dims: &BTreeMap<i32, usize>, d: i32) -> usize {
    dims.range(..d).map(|(_, n)| n).sum()
}
