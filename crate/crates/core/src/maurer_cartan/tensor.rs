use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::cdga::BoundedCdga;
use super::poly::Polynomial;
use crate::coalgebra::{is_codifferential, product_of_vectors, words_of_length, Cogenerator, StructureMaps, SymElement, Word};
use crate::error::{Error, Result};
use crate::exactla::{factorial, sign_scalar, GradedSpace, Scalar, Vector};
use crate::linfty::{display_vector, suspension_sign, LInftyMorphism, LieNAlgebra};

/// L ⊗ B for a Lie n-algebra L and a bounded cdga B, graded by
/// |x ⊗ b| = |x| − |b|. Basis element x_i ⊗ b_j has index i·dim B + j.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    l: Arc<LieNAlgebra>,
    b: BoundedCdga,
    space: GradedSpace,
    susp: Vec<i32>,
    tame_bound: usize,
    codiff: StructureMaps,
}

/// Builds L ⊗ B and checks the L∞ relations on every word of s(L⊗B) where
/// a defect can be nonzero, and that brackets of degree −1 elements vanish
/// from the tameness bound on.
pub fn tensor(l: &Arc<LieNAlgebra>, b: &BoundedCdga) -> Result<TensorAlgebra> {
    let nb = b.dim();
    let mut basis = Vec::with_capacity(l.dim() * nb);
    for i in 0..l.dim() {
        for j in 0..nb {
            basis.push((format!("{}⊗{}", l.space().name(i), b.names()[j]), l.degrees()[i] - b.degrees()[j]));
        }
    }
    let space = GradedSpace::new(basis)?;
    let susp: Vec<i32> = space.degrees().iter().map(|d| d + 1).collect();
    let mut t = TensorAlgebra {
        l: l.clone(),
        b: b.clone(),
        space,
        susp,
        tame_bound: b.top_degree() as usize + 1,
        codiff: StructureMaps::new(-1),
    };
    let top = l.top_suspended_degree();
    let mut codiff = StructureMaps::new(-1);
    for m in 1..=l.arity_bound() {
        for w in words_of_length(&t.susp, m) {
            if t.l_degree(&w) > top + 1 || t.b_degree(&w) > b.top_degree() {
                continue;
            }
            let degs: Vec<i32> = w.letters().iter().map(|&k| t.space.degree(k)).collect();
            let v = t.bracket(w.letters());
            if !v.is_zero() {
                codiff.set(w, v.scaled(&sign_scalar(suspension_sign(&degs))));
            }
        }
    }
    t.codiff = codiff;
    t.verify()?;
    Ok(t)
}

impl TensorAlgebra {
    pub fn lie(&self) -> &Arc<LieNAlgebra> {
        &self.l
    }

    pub fn cdga(&self) -> &BoundedCdga {
        &self.b
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Smallest k such that ℓ_k vanishes on degree −1 inputs for every
    /// arity from k on.
    pub fn tame_bound(&self) -> usize {
        self.tame_bound
    }

    /// The structure maps δ¹ on S̄(s(L⊗B)), stored on the words where they
    /// can be nonzero.
    pub fn codifferential(&self) -> &StructureMaps {
        &self.codiff
    }

    pub fn suspended_degrees(&self) -> &[i32] {
        &self.susp
    }

    pub fn index(&self, l_index: usize, b_index: usize) -> usize {
        l_index * self.b.dim() + b_index
    }

    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / self.b.dim(), k % self.b.dim())
    }

    /// Indices of the basis of (L⊗B)_{−1}: the coordinates of an MC point.
    pub fn mc_coordinates(&self) -> Vec<usize> {
        self.space.indices_in_degree(-1)
    }

    /// Builds x ⊗ b from a vector of L and a vector of B.
    pub fn pure(&self, x: &Vector, b: &Vector) -> Vector {
        tensor_vectors(x, b, self.b.dim())
    }

    /// Writes a point of (L⊗B)_{−1} from coordinates in `mc_coordinates` order.
    pub fn point(&self, coords: &[Scalar]) -> Vector {
        let idx = self.mc_coordinates();
        assert_eq!(coords.len(), idx.len(), "wrong number of coordinates");
        Vector::embed(coords, &idx)
    }

    pub fn display_vector(&self, v: &Vector) -> String {
        display_vector(v, self.space.names())
    }

    fn l_degree(&self, w: &Word) -> i32 {
        w.letters().iter().map(|&k| self.l.degrees()[self.split(k).0] + 1).sum()
    }

    fn b_degree(&self, w: &Word) -> i32 {
        w.letters().iter().map(|&k| self.b.degrees()[self.split(k).1]).sum()
    }

    /// ℓ^B on basis elements in the given order: ℓ₁(x)⊗b + (−1)^{|x|} x⊗d b
    /// in arity one, and (−1)^ε ℓ_k(x₁, …, x_k) ⊗ b₁⋯b_k above, where
    /// ε = Σ_{i<j} |b_i||x_j|.
    pub fn bracket(&self, inputs: &[usize]) -> Vector {
        let (xs, bs): (Vec<usize>, Vec<usize>) = inputs.iter().map(|&k| self.split(k)).unzip();
        let mut out = tensor_value(&xs, &bs, self.l.degrees(), &self.b, |x| self.l.bracket(x));
        if let [x] = xs[..] {
            let db = self.b.d(bs[0]);
            if !db.is_zero() {
                let neg = self.l.degrees()[x] % 2 != 0;
                out = out.plus(&self.pure(&Vector::unit(x), db).scaled(&sign_scalar(neg)));
            }
        }
        out
    }

    pub fn bracket_vectors(&self, xs: &[Vector]) -> Vector {
        multilinear(xs, |t| self.bracket(t))
    }

    fn check_point(&self, a: &Vector) -> Result<()> {
        if a.support().any(|k| k >= self.dim() || self.space.degree(k) != -1) {
            return Err(Error::InvalidInput("point is not in degree −1".into()));
        }
        Ok(())
    }

    /// curv(a) = Σ_k ±(1/k!) ℓ_k(a, …, a) with the sign (−1)^{k−1+k(k−1)/2},
    /// so + for k = 1, 2 and − for k = 3, 4.
    pub fn curvature(&self, a: &Vector) -> Result<Vector> {
        self.check_point(a)?;
        Ok(power_series(a, self.max_arity(), |t| self.bracket(t)))
    }

    pub fn is_mc(&self, a: &Vector) -> Result<bool> {
        Ok(self.curvature(a)?.is_zero())
    }

    /// s⁻¹ pr δ(exp(sa) − 1) computed in S̄(s(L⊗B)). Under the sign choice
    /// for `curvature`, curv(a) = −(this at −a).
    pub fn coalgebra_curvature(&self, a: &Vector) -> Result<Vector> {
        self.check_point(a)?;
        let mut exp = SymElement::zero();
        for k in 1..=self.max_arity() {
            let power = product_of_vectors(&vec![a.clone(); k], &self.susp);
            exp.add_scaled(&power, &(Scalar::one() / factorial(k)));
        }
        Ok(self.codiff.eval_sym(&exp))
    }

    /// The curvature as polynomials in the coordinates of `mc_coordinates`,
    /// keyed by basis index of (L⊗B)_{−2}.
    pub fn curvature_polynomial(&self) -> BTreeMap<usize, Polynomial> {
        let vars = self.mc_coordinates();
        let r = vars.len();
        let mut out: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for k in 1..=self.max_arity() {
            let sign = sign_scalar(series_sign(k));
            for (tuple, mult) in multisets(r, k) {
                let inputs: Vec<usize> = tuple.iter().map(|&i| vars[i]).collect();
                let v = self.bracket(&inputs);
                if v.is_zero() {
                    continue;
                }
                let coeff = &sign / mult.iter().map(|&m| factorial(m as usize)).product::<Scalar>();
                for (o, c) in v.iter() {
                    out.entry(o).or_insert_with(|| Polynomial::zero(r)).add_term(mult.clone(), c * &coeff);
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Arities that can contribute on degree −1 inputs.
    pub(crate) fn max_arity(&self) -> usize {
        (self.tame_bound - 1).min(self.l.arity_bound())
    }

    fn verify(&self) -> Result<()> {
        let top = self.l.top_suspended_degree();
        let mut words = Vec::new();
        for m in 1..=(top + 2).max(1) as usize {
            words.extend(
                words_of_length(&self.susp, m)
                    .into_iter()
                    .filter(|w| self.l_degree(w) <= top + 2 && self.b_degree(w) <= self.b.top_degree()),
            );
        }
        if let Err(w) = is_codifferential(&self.codiff, &self.susp, &words) {
            return Err(Error::AxiomViolation(format!(
                "L∞ relation fails on {} in the tensor product",
                w.word.display(self.space.names())
            )));
        }
        let r = self.mc_coordinates().len();
        let vars = self.mc_coordinates();
        for k in self.tame_bound..=self.l.arity_bound() {
            for (tuple, _) in multisets(r, k) {
                let inputs: Vec<usize> = tuple.iter().map(|&i| vars[i]).collect();
                if !self.bracket(&inputs).is_zero() {
                    return Err(Error::AxiomViolation(format!("ℓ_{k} does not vanish on degree −1 inputs")));
                }
            }
        }
        Ok(())
    }
}

/// Pushes an L∞-morphism component through − ⊗ B: (−1)^ε f(x₁, …, x_k) ⊗ b₁⋯b_k.
pub(crate) fn tensor_value(
    xs: &[usize],
    bs: &[usize],
    l_degrees: &[i32],
    b: &BoundedCdga,
    value: impl Fn(&[usize]) -> Vector,
) -> Vector {
    let prod = b.product(bs);
    if prod.is_zero() {
        return Vector::zero();
    }
    let v = value(xs);
    if v.is_zero() {
        return v;
    }
    let mut eps = 0i64;
    for i in 0..bs.len() {
        for j in i + 1..xs.len() {
            eps += b.degrees()[bs[i]] as i64 * l_degrees[xs[j]] as i64;
        }
    }
    tensor_vectors(&v, &prod, b.dim()).scaled(&sign_scalar(eps % 2 != 0))
}

pub(crate) fn tensor_vectors(x: &Vector, b: &Vector, nb: usize) -> Vector {
    let mut out = Vector::zero();
    for (i, c) in x.iter() {
        for (j, d) in b.iter() {
            out.add_entry(i * nb + j, c * d);
        }
    }
    out
}

/// f^B_k on basis elements of L⊗B for an L∞-morphism f: L → L′.
pub(crate) fn morphism_value(f: &LInftyMorphism, b: &BoundedCdga, inputs: &[usize]) -> Vector {
    let nb = b.dim();
    let (xs, bs): (Vec<usize>, Vec<usize>) = inputs.iter().map(|&k| (k / nb, k % nb)).unzip();
    tensor_value(&xs, &bs, f.source().degrees(), b, |x| f.component(x))
}

/// Whether the k-th term of the curvature and pushforward series is negated.
pub(crate) fn series_sign(k: usize) -> bool {
    (k - 1 + k * (k - 1) / 2) % 2 == 1
}

/// Σ_{k ≤ max} ±(1/k!) F_k(a, …, a) for a symmetric multilinear F on odd
/// inputs, summed over multisets of the support of `a`.
pub(crate) fn power_series(a: &Vector, max: usize, value: impl Fn(&[usize]) -> Vector) -> Vector {
    let support: Vec<(usize, Scalar)> = a.iter().map(|(i, c)| (i, c.clone())).collect();
    let mut out = Vector::zero();
    for k in 1..=max {
        let sign = sign_scalar(series_sign(k));
        for (tuple, mult) in multisets(support.len(), k) {
            let inputs: Vec<usize> = tuple.iter().map(|&i| support[i].0).collect();
            let v = value(&inputs);
            if v.is_zero() {
                continue;
            }
            let mut coeff = sign.clone();
            for (i, &m) in mult.iter().enumerate() {
                for _ in 0..m {
                    coeff *= &support[i].1;
                }
                coeff /= factorial(m as usize);
            }
            out.add_scaled(&v, &coeff);
        }
    }
    out
}

/// Non-decreasing k-tuples over 0..r with their multiplicity vectors.
pub(crate) fn multisets(r: usize, k: usize) -> Vec<(Vec<usize>, Vec<u32>)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<u32>)>) {
        if cur.len() == k {
            let mut mult = vec![0u32; r];
            for &i in cur.iter() {
                mult[i] += 1;
            }
            out.push((cur.clone(), mult));
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

fn multilinear(xs: &[Vector], value: impl Fn(&[usize]) -> Vector) -> Vector {
    fn rec(k: usize, xs: &[Vector], idx: &mut Vec<usize>, coeff: Scalar, value: &dyn Fn(&[usize]) -> Vector, out: &mut Vector) {
        if k == xs.len() {
            out.add_scaled(&value(idx), &coeff);
            return;
        }
        for (i, c) in xs[k].iter() {
            idx.push(i);
            rec(k + 1, xs, idx, &coeff * c, value, out);
            idx.pop();
        }
    }
    let mut out = Vector::zero();
    rec(0, xs, &mut Vec::with_capacity(xs.len()), Scalar::one(), &value, &mut out);
    out
}
