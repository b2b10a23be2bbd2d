//! Instances and independent oracles shared by the acceptance and property
//! suites.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use linfty::coalgebra::{StructureMaps, Word};
use linfty::exactla::{int, GradedLinearMap, GradedSpace, Scalar, Vector};
use linfty::linfty::{catalog, classify, compose, product, twist, BracketEntry, LInftyMorphism, LieNAlgebra};
use linfty::postnikov::{truncate, TruncationKind};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Named<T> = (String, T);

pub fn space(basis: &[(&str, i32)]) -> GradedSpace {
    GradedSpace::new(basis.iter().map(|(n, d)| (n.to_string(), *d)).collect()).unwrap()
}

pub fn entry(inputs: &[usize], output: Vector) -> BracketEntry {
    BracketEntry { inputs: inputs.to_vec(), output }
}

pub fn strict(src: &Arc<LieNAlgebra>, tgt: &Arc<LieNAlgebra>, cols: Vec<Vector>) -> LInftyMorphism {
    let map = GradedLinearMap::new(src.space().clone(), tgt.space().clone(), 0, cols).unwrap();
    LInftyMorphism::strict(src.clone(), tgt.clone(), &map).unwrap()
}

pub fn zero_algebra() -> Arc<LieNAlgebra> {
    Arc::new(LieNAlgebra::zero())
}

pub fn to_zero(l: &Arc<LieNAlgebra>) -> LInftyMorphism {
    strict(l, &zero_algebra(), vec![Vector::zero(); l.dim()])
}

pub fn from_zero(l: &Arc<LieNAlgebra>) -> LInftyMorphism {
    strict(&zero_algebra(), l, Vec::new())
}

/// The L∞-isomorphism twisted → l with Φ¹₁ = id and the given higher
/// components.
pub fn twisted_iso(l: &Arc<LieNAlgebra>, higher: &[(&[usize], Vector)]) -> LInftyMorphism {
    let mut phi = StructureMaps::new(0);
    for (w, v) in higher {
        phi.set(Word::from_sorted(w.to_vec()), v.clone());
    }
    twist(l, &phi).unwrap().1
}

/// A twist of l that moves the first pair of degree-0 basis elements to the
/// first degree-1 basis element, when both exist.
pub fn generic_twist(l: &Arc<LieNAlgebra>) -> Option<LInftyMorphism> {
    let d0 = l.space().indices_in_degree(0);
    let d1 = l.space().indices_in_degree(1);
    if d0.len() < 2 || d1.is_empty() {
        return None;
    }
    Some(twisted_iso(l, &[(&[d0[0], d0[1]], Vector::unit(d1[0]))]))
}

pub fn so3() -> Arc<LieNAlgebra> {
    Arc::new(catalog::so3())
}

pub fn string() -> Arc<LieNAlgebra> {
    Arc::new(catalog::string_so3())
}

pub fn adjoint() -> Arc<LieNAlgebra> {
    Arc::new(catalog::so3_adjoint_crossed())
}

pub fn line() -> Arc<LieNAlgebra> {
    Arc::new(catalog::line())
}

pub fn heisenberg() -> Arc<LieNAlgebra> {
    Arc::new(catalog::heisenberg_tower())
}

pub fn line_into_so3() -> LInftyMorphism {
    strict(&line(), &so3(), vec![Vector::unit(0)])
}

pub fn so3_into_adjoint() -> LInftyMorphism {
    strict(&so3(), &adjoint(), (0..3).map(Vector::unit).collect())
}

pub fn adjoint_to_so3() -> LInftyMorphism {
    let cols = (0..3).map(Vector::unit).chain((0..3).map(|_| Vector::zero())).collect();
    strict(&adjoint(), &so3(), cols)
}

/// The automorphism of so(3) ⋉ ℚ³[1] with F₁ = id and F₂(a, b) = a × b in
/// the module: the coboundary of the identification so(3) ≅ ℚ³.
pub fn adjoint_gauge() -> LInftyMorphism {
    let l = adjoint();
    let mut es: Vec<BracketEntry> = (0..6).map(|i| entry(&[i], Vector::unit(i))).collect();
    es.push(entry(&[0, 1], Vector::unit(5)));
    es.push(entry(&[1, 2], Vector::unit(3)));
    es.push(entry(&[2, 0], Vector::unit(4)));
    LInftyMorphism::from_components(l.clone(), l, &es).unwrap()
}

pub fn string_twist() -> LInftyMorphism {
    twisted_iso(&string(), &[(&[0, 1], Vector::unit(3))])
}

pub fn heisenberg_twist() -> LInftyMorphism {
    // (p, q) ↦ m and (p, q, k) ↦ t
    twisted_iso(&heisenberg(), &[(&[0, 1], Vector::unit(3)), (&[0, 1, 2], Vector::unit(4))])
}

/// pr: L × line → L composed with a twist moving (first degree-0 element of
/// L, et) to the first degree-1 element of L.
pub fn twisted_projection(l: &Arc<LieNAlgebra>) -> LInftyMorphism {
    let (prod, pr1, _) = product(l, &line()).unwrap();
    let x = l.space().indices_in_degree(0)[0];
    let c = l.space().indices_in_degree(1)[0];
    let iso = twisted_iso(&prod, &[(&[x, l.dim()], Vector::unit(c))]);
    compose(&pr1, &iso).unwrap()
}

pub fn diagonal(l: &Arc<LieNAlgebra>) -> LInftyMorphism {
    let (prod, _, _) = product(l, l).unwrap();
    let n = l.dim();
    strict(l, &prod, (0..n).map(|j| Vector::unit(j).plus(&Vector::unit(j + n))).collect())
}

pub fn algebras() -> Vec<Named<Arc<LieNAlgebra>>> {
    vec![
        ("solvable".into(), Arc::new(catalog::solvable())),
        ("so3".into(), so3()),
        ("string".into(), string()),
        ("theta".into(), Arc::new(catalog::theta_example())),
        ("acyclic pair".into(), Arc::new(catalog::acyclic_pair())),
        ("acyclic pair high".into(), Arc::new(catalog::acyclic_pair_high())),
        ("adjoint".into(), adjoint()),
        ("heisenberg".into(), heisenberg()),
    ]
}

/// Strict morphisms, including maps that are not fibrations or not weak
/// equivalences.
pub fn strict_morphisms() -> Vec<Named<LInftyMorphism>> {
    let acyclic = Arc::new(catalog::acyclic_pair());
    let h = heisenberg();
    let t1 = truncate(&h, 1, TruncationKind::AtMost).unwrap();
    let s0 = truncate(&string(), 0, TruncationKind::AtMost).unwrap();
    vec![
        ("solvable → line".into(), catalog::solvable_to_line()),
        ("string → so3".into(), catalog::string_to_so3()),
        ("centre → string".into(), catalog::central_inclusion()),
        ("line → so3".into(), line_into_so3()),
        ("so3 → adjoint".into(), so3_into_adjoint()),
        ("adjoint → so3".into(), adjoint_to_so3()),
        ("acyclic pair → 0".into(), to_zero(&acyclic)),
        ("so3 → 0".into(), to_zero(&so3())),
        ("0 → so3".into(), from_zero(&so3())),
        ("diagonal so3".into(), diagonal(&so3())),
        ("heisenberg → τ≤1".into(), t1.projection),
        ("string → τ≤0".into(), s0.projection),
        ("id string".into(), LInftyMorphism::identity(string())),
    ]
}

pub fn nonstrict_morphisms() -> Vec<Named<LInftyMorphism>> {
    vec![
        ("so3 cocycle".into(), catalog::so3_cocycle()),
        ("adjoint gauge".into(), adjoint_gauge()),
        ("gauge ∘ (so3 → adjoint)".into(), compose(&adjoint_gauge(), &so3_into_adjoint()).unwrap()),
        ("string twist".into(), string_twist()),
    ]
}

/// Non-strict fibrations: twisting isomorphisms and projections through them.
pub fn nonstrict_fibrations() -> Vec<Named<LInftyMorphism>> {
    let adj = adjoint();
    let (prod, pr1, _) = product(&adj, &line()).unwrap();
    let _ = prod;
    vec![
        ("string twist".into(), string_twist()),
        ("adjoint gauge".into(), adjoint_gauge()),
        ("heisenberg twist".into(), heisenberg_twist()),
        ("twisted string × line → string".into(), twisted_projection(&string())),
        ("gauge ∘ (adjoint × line → adjoint)".into(), compose(&adjoint_gauge(), &pr1).unwrap()),
        ("adjoint twist".into(), generic_twist(&adj).unwrap()),
    ]
}

/// The family for the axiom battery: identities, the strict and non-strict
/// morphisms above, and some composites.
pub fn family(rng: &mut StdRng) -> Vec<Named<LInftyMorphism>> {
    let mut out: Vec<Named<LInftyMorphism>> = algebras()
        .into_iter()
        .map(|(n, l)| (format!("id {n}"), LInftyMorphism::identity(l)))
        .collect();
    out.extend(strict_morphisms());
    out.extend(nonstrict_morphisms());
    out.extend(nonstrict_fibrations());
    out.push(("string → 0".into(), to_zero(&string())));
    out.push(("0 → string".into(), from_zero(&string())));
    for k in 0..2 {
        out.push((format!("random string epi {k}"), random_string_epi(rng).1));
        out.push((format!("random adjoint epi {k}"), random_adjoint_epi(rng).1));
        let r = rotation(rng);
        out.push((format!("random rotation {k}"), rotation_automorphism(&so3(), &r)));
    }
    out
}

/// A morphism with a different structure on the same data is still
/// distinguishable by name; composable pairs are found by comparing algebras.
pub fn composable_pairs(family: &[Named<LInftyMorphism>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, (_, f)) in family.iter().enumerate() {
        for (j, (_, g)) in family.iter().enumerate() {
            if f.target() == g.source() {
                out.push((i, j));
            }
        }
    }
    out
}

/// (name, f, g) with f a fibration and g sharing its target.
pub fn pullback_instances() -> Vec<(String, LInftyMorphism, LInftyMorphism)> {
    let theta = Arc::new(catalog::theta_example());
    let acyclic = Arc::new(catalog::acyclic_pair());
    let solvable = Arc::new(catalog::solvable());
    let h = heisenberg();
    let t1 = truncate(&h, 1, TruncationKind::AtMost).unwrap();
    let t1_id = LInftyMorphism::identity(t1.algebra.clone());
    vec![
        ("string → so3 along id".into(), catalog::string_to_so3(), LInftyMorphism::identity(so3())),
        ("string → so3 along line → so3".into(), catalog::string_to_so3(), line_into_so3()),
        ("theta → 0 along so3 → 0".into(), to_zero(&theta), to_zero(&so3())),
        ("heisenberg → τ≤1 along id".into(), t1.projection.clone(), t1_id),
        ("acyclic pair → 0 along solvable → 0".into(), to_zero(&acyclic), to_zero(&solvable)),
        ("adjoint gauge along so3 → adjoint".into(), adjoint_gauge(), so3_into_adjoint()),
        ("twisted string × line → string along centre".into(), twisted_projection(&string()), catalog::central_inclusion()),
    ]
}

// ---- random instances ----

pub fn small(rng: &mut StdRng) -> Scalar {
    int(rng.gen_range(-2..=2))
}

/// A rational rotation from the Cayley parametrization with integer k:
/// ((1 − |k|²) I + 2 k kᵀ + 2 [k]×) / (1 + |k|²).
pub fn rotation(rng: &mut StdRng) -> [[Scalar; 3]; 3] {
    let k: [Scalar; 3] = [small(rng), small(rng), small(rng)];
    let n2 = &k[0] * &k[0] + &k[1] * &k[1] + &k[2] * &k[2];
    let denom = int(1) + &n2;
    let cross = [
        [int(0), -k[2].clone(), k[1].clone()],
        [k[2].clone(), int(0), -k[0].clone()],
        [-k[1].clone(), k[0].clone(), int(0)],
    ];
    let mut r: [[Scalar; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let diag = if i == j { int(1) - &n2 } else { int(0) };
            r[i][j] = (diag + int(2) * &k[i] * &k[j] + int(2) * &cross[i][j]) / &denom;
        }
    }
    r
}

fn rotated(r: &[[Scalar; 3]; 3], j: usize, offset: usize) -> Vector {
    Vector::embed(&[r[0][j].clone(), r[1][j].clone(), r[2][j].clone()], &[offset, offset + 1, offset + 2])
}

pub fn rotation_automorphism(l: &Arc<LieNAlgebra>, r: &[[Scalar; 3]; 3]) -> LInftyMorphism {
    strict(l, l, (0..3).map(|j| rotated(r, j, 0)).collect())
}

/// A random abelian complex in degrees 0..2: pairs b → d(b), cycles, and a
/// random shear of each differential onto the designated targets. The
/// returned flags mark degree-1 elements that are not boundaries of degree-2
/// elements.
pub fn random_complex(rng: &mut StdRng) -> (Arc<LieNAlgebra>, Vec<bool>) {
    let p1 = rng.gen_range(0..=2);
    let p2 = rng.gen_range(0..=2);
    let (k0, k1, k2) = (rng.gen_range(0..=1), rng.gen_range(0..=1), rng.gen_range(0..=1));
    // degree-1 roles: 0 top of a 1 → 0 pair, 1 cycle, 2 target of a 2 → 1 pair
    let mut roles1: Vec<u8> = [vec![0u8; p1], vec![1; k1], vec![2; p2]].concat();
    roles1.shuffle(rng);
    let mut roles0: Vec<u8> = [vec![0u8; p1], vec![1; k0]].concat();
    roles0.shuffle(rng);
    let mut roles2: Vec<u8> = [vec![0u8; p2], vec![1; k2]].concat();
    roles2.shuffle(rng);
    let mut basis = Vec::new();
    for (deg, roles) in [(0, &roles0), (1, &roles1), (2, &roles2)] {
        for k in 0..roles.len() {
            basis.push((format!("b{deg}_{k}"), deg));
        }
    }
    let n0 = roles0.len();
    let n1 = roles1.len();
    let targets0: Vec<usize> = (0..n0).filter(|&i| roles0[i] == 0).collect();
    let targets1: Vec<usize> = (0..n1).filter(|&i| roles1[i] == 2).map(|i| n0 + i).collect();
    let mut es = Vec::new();
    let mut differential = |src: usize, targets: &[usize], rng: &mut StdRng| {
        let mut v = Vector::zero();
        for &t in targets {
            v.add_entry(t, small(rng));
        }
        if !v.is_zero() {
            es.push(entry(&[src], v));
        }
    };
    for i in 0..n1 {
        if roles1[i] == 0 {
            differential(n0 + i, &targets0, rng);
        }
    }
    for i in 0..roles2.len() {
        if roles2[i] == 0 {
            differential(n0 + n1 + i, &targets1, rng);
        }
    }
    let sp = GradedSpace::new(basis).unwrap();
    let l = LieNAlgebra::from_brackets(sp, Some(3), &es).unwrap();
    let free = (0..n0 + n1 + roles2.len()).map(|i| i >= n0 && i < n0 + n1 && roles1[i - n0] != 2).collect();
    (Arc::new(l), free)
}

/// A random strict epimorphism string × B → string: a rotation on so(3),
/// c ↦ c, and degree-1 elements of B that are not boundaries sent to random
/// multiples of c.
pub fn random_string_epi(rng: &mut StdRng) -> (String, LInftyMorphism) {
    let s = string();
    let (b, free) = random_complex(rng);
    let (prod, _, _) = product(&s, &b).unwrap();
    let r = rotation(rng);
    let mut cols: Vec<Vector> = (0..3).map(|j| rotated(&r, j, 0)).collect();
    cols.push(Vector::unit(3));
    for &fr in &free {
        cols.push(if fr { Vector::unit(3).scaled(&small(rng)) } else { Vector::zero() });
    }
    (format!("string × B{}", b.dim()), strict(&prod, &s, cols))
}

/// A random strict epimorphism so(3) ⋉ ℚ³[1] × B → so(3) ⋉ ℚ³[1] acting by
/// one rotation on both degrees.
pub fn random_adjoint_epi(rng: &mut StdRng) -> (String, LInftyMorphism) {
    let a = adjoint();
    let (b, _) = random_complex(rng);
    let (prod, _, _) = product(&a, &b).unwrap();
    let r = rotation(rng);
    let mut cols: Vec<Vector> = (0..3).map(|j| rotated(&r, j, 0)).collect();
    cols.extend((0..3).map(|j| rotated(&r, j, 3)));
    cols.extend((0..b.dim()).map(|_| Vector::zero()));
    (format!("adjoint × B{}", b.dim()), strict(&prod, &a, cols))
}

// ---- independent oracles ----

/// Rank by elimination on columns processed from the last one, pivoting on
/// the largest row index.
pub fn oracle_rank(columns: &[Vec<Scalar>]) -> usize {
    let mut pivots: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for col in columns.iter().rev() {
        let mut v = col.clone();
        for (p, b) in &pivots {
            if !v[*p].is_zero() {
                let c = v[*p].clone() / &b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &c * y;
                }
            }
        }
        if let Some(p) = (0..v.len()).rev().find(|&i| !v[i].is_zero()) {
            pivots.push((p, v));
        }
    }
    pivots.len()
}

fn block(f: &GradedLinearMap, d: i32) -> Vec<Vec<Scalar>> {
    let rows = f.target().indices_in_degree(d + f.shift());
    f.source().indices_in_degree(d).iter().map(|&j| f.column(j).restrict(&rows)).collect()
}

/// dim H_d = dim L_d − rank d_d − rank d_{d+1}.
pub fn homology_oracle(l: &LieNAlgebra) -> BTreeMap<i32, usize> {
    let d = l.differential();
    let mut out = BTreeMap::new();
    for deg in l.space().support() {
        let h = l.space().dim_in_degree(deg) - oracle_rank(&block(&d, deg)) - oracle_rank(&block(&d, deg + 1));
        if h > 0 {
            out.insert(deg, h);
        }
    }
    out
}

/// f₁ is a quasi-isomorphism iff its mapping cone is acyclic. The cone has
/// C_d = L_{d−1} ⊕ L′_d and ∂(x, y) = (−dx, f x + d′y).
pub fn cone_is_acyclic(f: &LInftyMorphism) -> bool {
    let (f1, s, t) = f.tangent();
    let (ds, dt) = (s.d(), t.d());
    let mut degrees: Vec<i32> = s.space().support().iter().map(|d| d + 1).chain(t.space().support()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let rank_at = |d: i32| -> usize {
        // ∂: C_d → C_{d−1}
        let src_l = s.space().indices_in_degree(d - 1);
        let src_t = t.space().indices_in_degree(d);
        let tgt_l = s.space().indices_in_degree(d - 2);
        let tgt_t = t.space().indices_in_degree(d - 1);
        let mut cols = Vec::new();
        for &j in &src_l {
            let mut c: Vec<Scalar> = ds.column(j).negated().restrict(&tgt_l);
            c.extend(f1.column(j).restrict(&tgt_t));
            cols.push(c);
        }
        for &j in &src_t {
            let mut c = vec![Scalar::zero(); tgt_l.len()];
            c.extend(dt.column(j).restrict(&tgt_t));
            cols.push(c);
        }
        oracle_rank(&cols)
    };
    degrees.iter().all(|&d| {
        let dim = s.space().dim_in_degree(d - 1) + t.space().dim_in_degree(d);
        rank_at(d) + rank_at(d + 1) == dim
    })
}

/// Surjectivity of f₁ in every positive target degree by rank.
pub fn surjective_in_positive_degrees(f: &LInftyMorphism) -> bool {
    let f1 = f.linear();
    f1.target().support().into_iter().filter(|&d| d > 0).all(|d| oracle_rank(&block(&f1, d)) == f1.target().dim_in_degree(d))
}

pub fn surjective_in_all_degrees(f: &LInftyMorphism) -> bool {
    let f1 = f.linear();
    f1.target().support().into_iter().all(|d| oracle_rank(&block(&f1, d)) == f1.target().dim_in_degree(d))
}

/// dim ker (f₁, −g₁) on L ⊕ L′ in degree d.
pub fn fiber_product_dim(f: &LInftyMorphism, g: &LInftyMorphism, d: i32) -> usize {
    let (f1, g1) = (f.linear(), g.linear());
    let rows = f1.target().indices_in_degree(d);
    let cols: Vec<Vec<Scalar>> = f1
        .source()
        .indices_in_degree(d)
        .iter()
        .map(|&j| f1.column(j).restrict(&rows))
        .chain(g1.source().indices_in_degree(d).iter().map(|&j| g1.column(j).negated().restrict(&rows)))
        .collect();
    cols.len() - oracle_rank(&cols)
}

pub fn is_fibration(f: &LInftyMorphism) -> bool {
    classify(f).fibration
}
