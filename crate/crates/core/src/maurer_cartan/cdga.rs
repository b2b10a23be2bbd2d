use crate::error::{Error, Result};
use crate::exactla::{sign_scalar, Vector};

/// Finite-dimensional commutative dg algebra concentrated in cohomological
/// degrees 0..=N, with d of degree +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCdga {
    names: Vec<String>,
    degrees: Vec<i32>,
    unit: usize,
    table: Vec<Vec<Vector>>,
    d: Vec<Vector>,
}

impl BoundedCdga {
    /// `products` lists x_i·x_j for pairs of non-unit basis elements; the
    /// mirrored entry is filled by graded commutativity when absent and
    /// checked when present. Products with the unit are implied.
    pub fn new(
        basis: Vec<(String, i32)>,
        unit: usize,
        products: &[(usize, usize, Vector)],
        differential: &[(usize, Vector)],
    ) -> Result<Self> {
        let n = basis.len();
        if unit >= n {
            return Err(Error::InvalidInput("unit index out of range".into()));
        }
        let (names, degrees): (Vec<String>, Vec<i32>) = basis.into_iter().unzip();
        if let Some(&d) = degrees.iter().find(|&&d| d < 0) {
            return Err(Error::InvalidInput(format!("negative cohomological degree {d}")));
        }
        let mut table: Vec<Vec<Option<Vector>>> = vec![vec![None; n]; n];
        for i in 0..n {
            table[unit][i] = Some(Vector::unit(i));
            table[i][unit] = Some(Vector::unit(i));
        }
        for (i, j, v) in products {
            if *i >= n || *j >= n || v.support().any(|k| k >= n) {
                return Err(Error::InvalidInput(format!("product ({i}, {j}) out of range")));
            }
            if *i == unit || *j == unit {
                if *v != Vector::unit(if *i == unit { *j } else { *i }) {
                    return Err(Error::AxiomViolation(format!("unit law fails on {}", names[*i.max(j)])));
                }
                continue;
            }
            if table[*i][*j].as_ref().is_some_and(|w| w != v) {
                return Err(Error::InvalidInput(format!("product ({i}, {j}) given twice")));
            }
            table[*i][*j] = Some(v.clone());
        }
        let mut full = vec![vec![Vector::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let swapped = table[j][i].as_ref().map(|v| v.scaled(&sign_scalar(degrees[i] * degrees[j] % 2 != 0)));
                full[i][j] = table[i][j].clone().or(swapped).unwrap_or_default();
            }
        }
        let mut d = vec![Vector::zero(); n];
        for (i, v) in differential {
            if *i >= n || v.support().any(|k| k >= n) {
                return Err(Error::InvalidInput(format!("differential entry {i} out of range")));
            }
            d[*i] = v.clone();
        }
        let b = BoundedCdga { names, degrees, unit, table: full, d };
        b.verify()?;
        Ok(b)
    }

    /// The ground field in degree 0.
    pub fn ground() -> Self {
        BoundedCdga::new(vec![("1".into(), 0)], 0, &[], &[]).expect("ground field")
    }

    /// 𝕜[θ]/(θ^order) with θ of even degree `degree` and d = 0.
    pub fn truncated_polynomial(name: &str, degree: i32, order: usize) -> Result<Self> {
        if degree < 0 || degree % 2 != 0 || order == 0 {
            return Err(Error::InvalidInput("generator must have even non-negative degree".into()));
        }
        let basis: Vec<(String, i32)> = (0..order)
            .map(|k| {
                let label = match k {
                    0 => "1".to_string(),
                    1 => name.to_string(),
                    _ => format!("{name}^{k}"),
                };
                (label, degree * k as i32)
            })
            .collect();
        let mut products = Vec::new();
        for i in 1..order {
            for j in i..order {
                if i + j < order {
                    products.push((i, j, Vector::unit(i + j)));
                }
            }
        }
        BoundedCdga::new(basis, 0, &products, &[])
    }

    /// span{1, a, da} with a in degree `degree` and all products of a and da zero.
    pub fn contractible(degree: i32) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidInput("generator degree must be positive".into()));
        }
        BoundedCdga::new(
            vec![("1".into(), 0), ("a".into(), degree), ("da".into(), degree + 1)],
            0,
            &[],
            &[(1, Vector::unit(2))],
        )
    }

    /// Exterior algebra on `generators` elements of degree 1 with d = 0,
    /// with basis the subsets in order of size. Its MC elements in L ⊗ B
    /// are flat connections on the torus when `generators` = 2.
    pub fn exterior(generators: usize) -> Result<Self> {
        if generators > 6 {
            return Err(Error::InvalidInput("at most 6 generators".into()));
        }
        let mut subsets: Vec<u32> = (0..1u32 << generators).collect();
        subsets.sort_by_key(|&m| (m.count_ones(), (0..generators).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>()));
        let name = |m: u32| -> String {
            if m == 0 {
                return "1".into();
            }
            (0..generators).filter(|i| m & (1 << i) != 0).map(|i| format!("e{}", i + 1)).collect()
        };
        let index = |m: u32| subsets.iter().position(|&s| s == m).expect("subset");
        let basis = subsets.iter().map(|&m| (name(m), m.count_ones() as i32)).collect();
        let mut products = Vec::new();
        for &a in &subsets[1..] {
            for &b in &subsets[1..] {
                if a & b != 0 {
                    continue;
                }
                // sign of moving each generator of b past the larger ones of a
                let swaps: u32 = (0..generators).filter(|i| b & (1 << i) != 0).map(|i| (a >> (i + 1)).count_ones()).sum();
                products.push((index(a), index(b), Vector::unit(index(a | b)).scaled(&sign_scalar(swaps % 2 == 1))));
            }
        }
        BoundedCdga::new(basis, 0, &products, &[])
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top_degree(&self) -> i32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn mul(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn d(&self, i: usize) -> &Vector {
        &self.d[i]
    }

    pub fn mul_vectors(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.table[i][j], &(a * b));
            }
        }
        out
    }

    pub fn d_vector(&self, x: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            out.add_scaled(&self.d[i], a);
        }
        out
    }

    /// Product of basis elements in order, as a vector.
    pub fn product(&self, factors: &[usize]) -> Vector {
        let mut acc = Vector::unit(self.unit);
        for &f in factors {
            acc = self.mul_vectors(&acc, &Vector::unit(f));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    fn homogeneous(&self, v: &Vector, d: i32) -> bool {
        v.support().all(|k| self.degrees[k] == d)
    }

    fn verify(&self) -> Result<()> {
        let n = self.dim();
        let name = |i: usize| self.names[i].as_str();
        if self.degrees[self.unit] != 0 || !self.d[self.unit].is_zero() {
            return Err(Error::AxiomViolation("unit must be a degree-0 cycle".into()));
        }
        for i in 0..n {
            if !self.homogeneous(&self.d[i], self.degrees[i] + 1) {
                return Err(Error::AxiomViolation(format!("d({}) has the wrong degree", name(i))));
            }
            if !self.d_vector(&self.d[i]).is_zero() {
                return Err(Error::AxiomViolation(format!("d² ≠ 0 on {}", name(i))));
            }
            for j in 0..n {
                let p = &self.table[i][j];
                if !self.homogeneous(p, self.degrees[i] + self.degrees[j]) {
                    return Err(Error::AxiomViolation(format!("{}·{} has the wrong degree", name(i), name(j))));
                }
                let swapped = self.table[j][i].scaled(&sign_scalar(self.degrees[i] * self.degrees[j] % 2 != 0));
                if *p != swapped {
                    return Err(Error::AxiomViolation(format!("{}·{} is not graded commutative", name(i), name(j))));
                }
                let lhs = self.d_vector(p);
                let rhs = self
                    .mul_vectors(&self.d[i], &Vector::unit(j))
                    .plus(&self.mul_vectors(&Vector::unit(i), &self.d[j]).scaled(&sign_scalar(self.degrees[i] % 2 != 0)));
                if lhs != rhs {
                    return Err(Error::AxiomViolation(format!("Leibniz rule fails on {}, {}", name(i), name(j))));
                }
                for k in 0..n {
                    let left = self.mul_vectors(p, &Vector::unit(k));
                    let right = self.mul_vectors(&Vector::unit(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::AxiomViolation(format!(
                            "associativity fails on {}, {}, {}",
                            name(i),
                            name(j),
                            name(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_polynomial_products() {
        let b = BoundedCdga::truncated_polynomial("θ", 2, 3).unwrap();
        assert_eq!(b.degrees(), &[0, 2, 4]);
        assert_eq!(b.product(&[1, 1]), Vector::unit(2));
        assert!(b.product(&[1, 2]).is_zero());
    }

    #[test]
    fn exterior_algebra_signs() {
        let b = BoundedCdga::exterior(2).unwrap();
        assert_eq!(b.names(), &["1", "e1", "e2", "e1e2"]);
        assert_eq!(b.product(&[1, 2]), Vector::unit(3));
        assert_eq!(b.product(&[2, 1]), Vector::unit(3).negated());
        assert!(b.product(&[1, 1]).is_zero());
        assert_eq!(BoundedCdga::exterior(3).unwrap().dim(), 8);
    }

    #[test]
    fn contractible_has_differential() {
        let b = BoundedCdga::contractible(1).unwrap();
        assert_eq!(b.d(1), &Vector::unit(2));
        assert_eq!(b.top_degree(), 2);
    }

    #[test]
    fn rejects_broken_axioms() {
        // odd generator squaring to something nonzero
        let bad = BoundedCdga::new(
            vec![("1".into(), 0), ("e".into(), 1), ("f".into(), 2)],
            0,
            &[(1, 1, Vector::unit(2))],
            &[],
        );
        assert!(matches!(bad, Err(Error::AxiomViolation(_))));
        // idempotent x with d(x) = y breaks Leibniz
        let bad = BoundedCdga::new(
            vec![("1".into(), 0), ("x".into(), 0), ("y".into(), 1)],
            0,
            &[(1, 1, Vector::unit(1))],
            &[(1, Vector::unit(2))],
        );
        assert!(matches!(bad, Err(Error::AxiomViolation(_))));
        assert!(BoundedCdga::new(vec![("1".into(), 0), ("x".into(), 1)], 0, &[], &[(0, Vector::unit(1))]).is_err());
    }
}
