//! Small named Lie n-algebras and morphisms used by tests, the acceptance
//! suite and the CLI corpus.

use std::sync::Arc;

use super::algebra::{BracketEntry, LieNAlgebra};
use super::morphism::LInftyMorphism;
use crate::exactla::{int, GradedLinearMap, GradedSpace, Vector};

fn space(basis: &[(&str, i32)]) -> GradedSpace {
    GradedSpace::new(basis.iter().map(|(n, d)| (n.to_string(), *d)).collect()).expect("catalog names are unique")
}

fn entry(inputs: &[usize], output: Vector) -> BracketEntry {
    BracketEntry { inputs: inputs.to_vec(), output }
}

fn vec_of(pairs: &[(usize, i64)]) -> Vector {
    let mut v = Vector::zero();
    for &(i, c) in pairs {
        v.add_entry(i, int(c));
    }
    v
}

/// The two-dimensional solvable Lie algebra: [e1, e2] = e1.
pub fn solvable() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("e1", 0), ("e2", 0)]), Some(1), &[entry(&[0, 1], Vector::unit(0))])
        .expect("solvable algebra")
}

/// The one-dimensional abelian Lie algebra spanned by ẽ.
pub fn line() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("et", 0)]), Some(1), &[]).expect("abelian line")
}

/// e1 ↦ 0, e2 ↦ ẽ.
pub fn solvable_to_line() -> LInftyMorphism {
    let g = Arc::new(solvable());
    let h = Arc::new(line());
    let f = GradedLinearMap::new(g.space().clone(), h.space().clone(), 0, vec![Vector::zero(), Vector::unit(0)])
        .expect("homogeneous");
    LInftyMorphism::strict(g, h, &f).expect("Lie algebra morphism")
}

/// so(3) with the cross product on x, y, z.
pub fn so3() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("x", 0), ("y", 0), ("z", 0)]), Some(1), &so3_brackets()).expect("so(3)")
}

fn so3_brackets() -> Vec<BracketEntry> {
    vec![
        entry(&[0, 1], Vector::unit(2)),
        entry(&[1, 2], Vector::unit(0)),
        entry(&[0, 2], Vector::unit(1).negated()),
    ]
}

/// The string Lie 2-algebra of so(3): L₀ = so(3), L₁ = ℚc, ℓ₁ = 0, ℓ₂ the
/// cross product on L₀ (and zero on c), ℓ₃(a, b, e) = ⟨[a, b], e⟩·c with the
/// standard dot product.
pub fn string_so3() -> LieNAlgebra {
    let mut b = so3_brackets();
    // ⟨[x,y],z⟩ = ⟨z,z⟩ = 1
    b.push(entry(&[0, 1, 2], Vector::unit(3)));
    LieNAlgebra::from_brackets(space(&[("x", 0), ("y", 0), ("z", 0), ("c", 1)]), Some(2), &b).expect("string Lie 2-algebra")
}

/// The central line ℚc in degree 1 (abelian).
pub fn central_line() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("c", 1)]), Some(2), &[]).expect("abelian")
}

/// The strict projection string_so3 → so(3), a quasi-split fibration with
/// central kernel ℚc.
pub fn string_to_so3() -> LInftyMorphism {
    let s = Arc::new(string_so3());
    let g = Arc::new(so3());
    let cols = vec![Vector::unit(0), Vector::unit(1), Vector::unit(2), Vector::zero()];
    let f = GradedLinearMap::new(s.space().clone(), g.space().clone(), 0, cols).expect("homogeneous");
    LInftyMorphism::strict(s, g, &f).expect("strict projection")
}

/// The inclusion of the centre ℚc → string_so3.
pub fn central_inclusion() -> LInftyMorphism {
    let c = Arc::new(central_line());
    let s = Arc::new(string_so3());
    let f = GradedLinearMap::new(c.space().clone(), s.space().clone(), 0, vec![Vector::unit(3)]).expect("homogeneous");
    LInftyMorphism::strict(c, s, &f).expect("strict inclusion")
}

/// e1, e2 in degree 1 and ẽ in degree 2 with ℓ₂(e1,e1) = ẽ, ℓ₂(e2,e2) = −ẽ.
pub fn theta_example() -> LieNAlgebra {
    LieNAlgebra::from_brackets(
        space(&[("e1", 1), ("e2", 1), ("et", 2)]),
        Some(3),
        &[entry(&[0, 0], Vector::unit(2)), entry(&[1, 1], vec_of(&[(2, -1)]))],
    )
    .expect("θ example")
}

/// Two-term complex a → b with d(a) = b, as an abelian Lie 2-algebra.
pub fn acyclic_pair() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("a", 1), ("b", 0)]), Some(2), &[entry(&[0], Vector::unit(1))]).expect("pair")
}

/// The same complex shifted up: a in degree 2, b in degree 1.
pub fn acyclic_pair_high() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("a", 2), ("b", 1)]), Some(3), &[entry(&[0], Vector::unit(1))]).expect("pair")
}

/// so(3) ⋉ ℚ³ in degrees 0 and 1: L₀ = so(3), L₁ = span{u,v,w} with the
/// adjoint action ℓ₂(X, u) = X×u, and ℓ₁ = 0.
pub fn so3_adjoint_crossed() -> LieNAlgebra {
    let mut b = so3_brackets();
    // action of x, y, z on u, v, w (indices 3, 4, 5) by the cross product
    let cross = |i: usize, j: usize| -> Vector {
        match (i, j) {
            (0, 1) => Vector::unit(5),
            (1, 0) => Vector::unit(5).negated(),
            (1, 2) => Vector::unit(3),
            (2, 1) => Vector::unit(3).negated(),
            (2, 0) => Vector::unit(4),
            (0, 2) => Vector::unit(4).negated(),
            _ => Vector::zero(),
        }
    };
    for i in 0..3 {
        for j in 0..3 {
            let v = cross(i, j);
            if !v.is_zero() {
                b.push(entry(&[i, j + 3], v));
            }
        }
    }
    LieNAlgebra::from_brackets(
        space(&[("x", 0), ("y", 0), ("z", 0), ("u", 1), ("v", 1), ("w", 1)]),
        Some(2),
        &b,
    )
    .expect("so(3) acting on ℚ³")
}

/// A Lie 3-algebra: the Heisenberg algebra on p, q (degree 0) with centre
/// k (degree 0), plus a degree-1 element m with ℓ₁(m) = k and a degree-2
/// element t with ℓ₁ = 0, and ℓ₃(p, q, m) = t.
pub fn heisenberg_tower() -> LieNAlgebra {
    LieNAlgebra::from_brackets(
        space(&[("p", 0), ("q", 0), ("k", 0), ("m", 1), ("t", 2)]),
        Some(3),
        &[entry(&[0, 1], Vector::unit(2)), entry(&[3], Vector::unit(2)), entry(&[0, 1, 3], Vector::unit(4))],
    )
    .expect("Heisenberg tower")
}

/// Abelian ℚ³ in degree 1 (u, v, w).
pub fn abelian_three() -> LieNAlgebra {
    LieNAlgebra::from_brackets(space(&[("u", 1), ("v", 1), ("w", 1)]), Some(2), &[]).expect("abelian")
}

/// The weak morphism so(3) → ℚ³[1] with f₁ = 0 and f₂(a, b) = a×b, a
/// 2-cocycle with trivial coefficients.
pub fn so3_cocycle() -> LInftyMorphism {
    let src = Arc::new(so3());
    let tgt = Arc::new(abelian_three());
    LInftyMorphism::from_components(
        src,
        tgt,
        &[entry(&[0, 1], Vector::unit(2)), entry(&[1, 2], Vector::unit(0)), entry(&[2, 0], Vector::unit(1))],
    )
    .expect("cocycle")
}
