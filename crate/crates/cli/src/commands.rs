use std::path::{Path, PathBuf};
use std::sync::Arc;

use linfty::coalgebra::{induced_coalgebra_map, reduced_coalgebra_homology, CoalgebraHomology};
use linfty::exactla::{parse_scalar, Scalar, Vector};
use linfty::factorization::{brown_factorize, factor_strict_morphism};
use linfty::linfty::{classify as class_of, compose, h0_lie_algebra, LInftyMorphism, LieNAlgebra};
use linfty::maurer_cartan::{pushforward, sample_mc_points, tensor, BoundedCdga, McPullback, TensorAlgebra};
use linfty::postnikov::{
    decompose_tower_step1, decompose_tower_step2, is_quasi_split, tower, tower_morphism, truncate, SplittingWitness,
    Truncation, TruncationKind,
};
use linfty::pullback::{pullback_fibration, verify_tangent_exactness, verify_universal_property};
use linfty::Error;
use serde_json::{json, Value};

use crate::doc::{self, BuildOptions, Document, Loaded};
use crate::error::CliError;
use crate::report::Report;
use crate::{Global, McCommand, PostnikovCommand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FactorMode {
    Strict,
    Brown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// τ≤m
    Le,
    /// τ<m
    Lt,
}

type Outcome = Result<Report, CliError>;

fn opts(g: &Global) -> BuildOptions {
    BuildOptions { arity_bound: g.arity_bound }
}

/// Library errors that mean the input cannot be used at all.
fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::InvalidInput(_) | Error::TypeMismatch(_) | Error::Inhomogeneous(_))
}

/// Input errors abort with exit code 2, everything else fails the report.
fn absorb(report: &mut Report, path: &Path, e: Error) -> Result<(), CliError> {
    if is_input_error(&e) {
        return Err(CliError::input(path, e.to_string()));
    }
    report.line(format!("error: {e}"));
    report.fail(e.to_string());
    Ok(())
}

fn basis_line(l: &LieNAlgebra) -> String {
    let parts: Vec<String> = (0..l.dim()).map(|i| format!("{}:{}", l.space().name(i), l.space().degree(i))).collect();
    format!("dim {} [{}]", l.dim(), parts.join(", "))
}

fn homology_dims(l: &LieNAlgebra) -> Vec<(i32, usize)> {
    let h = linfty::exactla::homology(&l.chain_complex());
    l.space().support().into_iter().map(|d| (d, h.dim(d))).filter(|(_, n)| *n > 0).collect()
}

fn coalgebra_homology(l: &LieNAlgebra, cutoff: i32) -> linfty::Result<CoalgebraHomology> {
    reduced_coalgebra_homology(l, l.suspended_degrees(), &l.suspended_names(), cutoff)
}

fn dims_json(d: &[(i32, usize)]) -> Value {
    Value::Object(d.iter().map(|(k, n)| (k.to_string(), json!(n))).collect())
}

fn dims_text(d: &[(i32, usize)]) -> String {
    if d.is_empty() {
        return "0".into();
    }
    d.iter().map(|(k, n)| format!("H{k}={n}")).collect::<Vec<_>>().join(" ")
}

fn morphism_json(f: &LInftyMorphism) -> Value {
    Document::Morphism(doc::morphism_doc(f)).to_json()
}

fn algebra_json(l: &LieNAlgebra) -> Value {
    Document::Algebra(doc::algebra_doc(l)).to_json()
}

// ---- check ----

pub fn check(g: &Global, path: &Path) -> Outcome {
    let loaded = doc::load(path)?;
    let mut report = Report::new("check", &[&loaded]);
    let at = |m: String| CliError::input(path, m);
    match &loaded.doc {
        Document::Algebra(d) => {
            let r = doc::resolve_algebra(d, opts(g)).map_err(at)?;
            if let Some(l) = build_algebra(&mut report, path, "algebra", r.build())? {
                describe_algebra(g, &mut report, &l)?;
            }
        }
        Document::Morphism(d) => {
            let (s, t) = doc::morphism_parts(d, path)?;
            let rs = doc::resolve_algebra(&s, opts(g)).map_err(|m| at(format!("source: {m}")))?;
            let rt = doc::resolve_algebra(&t, opts(g)).map_err(|m| at(format!("target: {m}")))?;
            let src = build_algebra(&mut report, path, "source", rs.build())?;
            let tgt = build_algebra(&mut report, path, "target", rt.build())?;
            if let (Some(src), Some(tgt)) = (src, tgt) {
                let (src, tgt) = (Arc::new(src), Arc::new(tgt));
                let es = doc::morphism_entries(d, &src, &tgt, opts(g)).map_err(at)?;
                match LInftyMorphism::from_components(src, tgt, &es) {
                    Ok(f) => {
                        report.check("dg-morphism condition", true);
                        report.line(format!("strict: {}", f.is_strict()));
                        report.set("strict", f.is_strict());
                    }
                    Err(e) => absorb(&mut report, path, e)?,
                }
            }
        }
        Document::Cdga(d) => {
            let r = doc::resolve_cdga(d).map_err(at)?;
            check_cdga(&mut report, path, r.build())?;
        }
        Document::McPair(d) => {
            let l = doc::algebra_ref(&d.algebra, path, opts(g))?;
            let r = doc::resolve_cdga(&d.cdga).map_err(at)?;
            if let Some(b) = check_cdga(&mut report, path, r.build())? {
                let t = tensor(&l, &b).map_err(|e| at(e.to_string()))?;
                report.line(format!("L ⊗ B: dim {}, tame bound {}", t.dim(), t.tame_bound()));
                report.line(format!("MC coordinates: {}", coordinate_legend(&t).join(", ")));
                report.set("tensor_dim", t.dim());
                report.set("tame_bound", t.tame_bound());
                report.set("mc_coordinates", coordinate_legend(&t));
            }
        }
        Document::Witness(_) => {
            return Err(at("witness documents are used by `postnikov quasisplit --witness`".into()));
        }
    }
    Ok(report)
}

fn build_algebra(
    report: &mut Report,
    path: &Path,
    what: &str,
    built: linfty::Result<LieNAlgebra>,
) -> Result<Option<LieNAlgebra>, CliError> {
    match built {
        Ok(l) => {
            report.check(&format!("{what}: L∞ axioms"), true);
            Ok(Some(l))
        }
        Err(e) if is_input_error(&e) => Err(CliError::input(path, format!("{what}: {e}"))),
        Err(e) => {
            report.line(format!("{what}: {e}"));
            report.fail(format!("{what}: {e}"));
            Ok(None)
        }
    }
}

fn check_cdga(report: &mut Report, path: &Path, built: linfty::Result<BoundedCdga>) -> Result<Option<BoundedCdga>, CliError> {
    match built {
        Ok(b) => {
            report.check("cdga axioms", true);
            report.line(format!("cdga: dim {}, top degree {}", b.dim(), b.top_degree()));
            Ok(Some(b))
        }
        Err(e) => {
            absorb(report, path, e)?;
            Ok(None)
        }
    }
}

fn describe_algebra(g: &Global, report: &mut Report, l: &LieNAlgebra) -> Result<(), CliError> {
    report.line(format!("basis: {}", basis_line(l)));
    report.line(format!("n: {}", l.n()));
    let h = homology_dims(l);
    report.line(format!("homology: {}", dims_text(&h)));
    report.set("n", l.n());
    report.set("dim", l.dim());
    report.set("homology", dims_json(&h));
    if let Some(cutoff) = g.degree_cutoff {
        let ch = coalgebra_homology(l, cutoff).map_err(|e| CliError::bare(e.to_string()))?;
        let d: Vec<(i32, usize)> = ch.dims().into_iter().collect();
        report.line(format!("coalgebra homology (degree ≤ {cutoff}): {}", dims_text(&d)));
        report.set("coalgebra_homology", dims_json(&d));
    }
    Ok(())
}

// ---- classify ----

pub fn classify(g: &Global, path: &Path) -> Outcome {
    let loaded = doc::load(path)?;
    let f = doc::morphism(&loaded, opts(g))?;
    let mut report = Report::new("classify", &[&loaded]);
    let c = class_of(&f);
    let flags = [
        ("weak_equivalence", c.weak_equivalence),
        ("fibration", c.fibration),
        ("acyclic_fibration", c.acyclic_fibration),
        ("strict", c.strict),
        ("isomorphism", c.isomorphism),
        ("epimorphism", c.epimorphism),
    ];
    for (name, v) in flags {
        report.line(format!("{name}: {v}"));
        report.set(name, v);
    }
    if let Some(cutoff) = g.degree_cutoff {
        let err = |e: Error| CliError::bare(e.to_string());
        let hs = coalgebra_homology(f.source(), cutoff).map_err(err)?;
        let ht = coalgebra_homology(f.target(), cutoff).map_err(err)?;
        let hf = induced_coalgebra_map(&f, &hs, &ht, f.source().suspended_degrees(), f.target().suspended_degrees()).map_err(err)?;
        let iso = hf.is_isomorphism();
        report.line(format!("coalgebra homology isomorphism (degree ≤ {cutoff}): {iso}"));
        report.set("coalgebra_homology_isomorphism", iso);
        if iso != c.weak_equivalence {
            report.fail(format!("H(F) isomorphism is {iso} but weak_equivalence is {}", c.weak_equivalence));
        }
    }
    Ok(report)
}

// ---- factor ----

pub fn factor(g: &Global, path: &Path, mode: FactorMode) -> Outcome {
    let loaded = doc::load(path)?;
    let f = doc::morphism(&loaded, opts(g))?;
    let mut report = Report::new("factor", &[&loaded]);
    let built = match mode {
        FactorMode::Strict => factor_strict_morphism(&f).map(|s| (s.middle.clone(), s.j, s.phi)),
        FactorMode::Brown => brown_factorize(&f).map(|b| (b.pullback.square.object.clone(), b.j, b.p_f)),
    };
    let (middle, j, p) = match built {
        Ok(x) => x,
        Err(e) => {
            absorb(&mut report, path, e)?;
            return Ok(report);
        }
    };
    report.line(format!("mode: {}", if mode == FactorMode::Strict { "strict" } else { "brown" }));
    report.line(format!("middle: {}", basis_line(&middle)));
    let cj = class_of(&j);
    let cp = class_of(&p);
    report.check("j is a weak equivalence", cj.weak_equivalence);
    report.check("p is a fibration", cp.fibration);
    let commutes = compose(&p, &j).map(|pj| pj == f).unwrap_or(false);
    report.check("p ∘ j = f", commutes);
    report.set("middle", algebra_json(&middle));
    report.set("j", morphism_json(&j));
    report.set("p", morphism_json(&p));
    Ok(report)
}

// ---- pullback ----

pub fn pullback(g: &Global, fp: &Path, gp: &Path) -> Outcome {
    let lf = doc::load(fp)?;
    let lg = doc::load(gp)?;
    let f = doc::morphism(&lf, opts(g))?;
    let gm = doc::morphism(&lg, opts(g))?;
    let mut report = Report::new("pullback", &[&lf, &lg]);
    if f.target() != gm.target() {
        return Err(CliError::bare("f and g have different targets"));
    }
    let pb = match pullback_fibration(&f, &gm) {
        Ok(pb) => pb,
        Err(e) => {
            absorb(&mut report, fp, e)?;
            return Ok(report);
        }
    };
    let sq = &pb.square;
    report.line(format!("object: {}", basis_line(&sq.object)));
    report.line(format!("f strict: {}", pb.strictification.is_none()));
    let commutes = matches!((compose(&f, &sq.p), compose(&gm, &sq.p_prime)), (Ok(a), Ok(b)) if a == b);
    report.check("f ∘ q = g ∘ q′", commutes);
    report.check("q′ is a fibration", class_of(&sq.p_prime).fibration);
    report.check("inverse, membership and codifferential checks", pb.strict.identities().all_hold());
    report.check("tangent exactness", verify_tangent_exactness(sq));
    let filler = verify_universal_property(sq, &sq.p, &sq.p_prime, None);
    let unique_identity = matches!(&filler, Ok(u) if u.morphism.as_ref() == Some(&LInftyMorphism::identity(sq.object.clone())));
    report.check("universal property on (q, q′)", unique_identity);
    report.set("object", algebra_json(&sq.object));
    report.set("q", morphism_json(&sq.p));
    report.set("q_prime", morphism_json(&sq.p_prime));
    Ok(report)
}

// ---- mc ----

/// Coordinate names: x, y, z, u, v, w, then x7, x8, …
fn variable_names(k: usize) -> Vec<String> {
    const BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    (0..k).map(|i| if i < BASE.len() { BASE[i].to_string() } else { format!("x{}", i + 1) }).collect()
}

fn coordinate_legend(t: &TensorAlgebra) -> Vec<String> {
    let idx = t.mc_coordinates();
    variable_names(idx.len()).into_iter().zip(&idx).map(|(v, &k)| format!("{v} = {}", t.space().name(k))).collect()
}

fn parse_point(t: &TensorAlgebra, s: &str, flag: &str) -> Result<Vector, CliError> {
    let k = t.mc_coordinates().len();
    let coords: Vec<Scalar> = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|c| parse_scalar(c.trim()).map_err(|e| CliError::bare(format!("{flag}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    if coords.len() != k {
        return Err(CliError::bare(format!("{flag}: expected {k} coordinates, got {}", coords.len())));
    }
    Ok(t.point(&coords))
}

/// Loads either one mc-pair document or an algebra and a cdga document.
fn mc_inputs(g: &Global, docs: &[PathBuf]) -> Result<(Vec<Loaded>, Arc<LieNAlgebra>, BoundedCdga), CliError> {
    let loaded: Vec<Loaded> = docs.iter().map(|p| doc::load(p)).collect::<Result<_, _>>()?;
    match loaded.as_slice() {
        [one] => {
            let Document::McPair(d) = &one.doc else {
                return Err(CliError::input(&one.path, "expected an mc-pair document, or an algebra and a cdga"));
            };
            let l = doc::algebra_ref(&d.algebra, &one.path, opts(g))?;
            let b = doc::cdga(&d.cdga).map_err(|m| CliError::input(&one.path, m))?;
            Ok((loaded, l, b))
        }
        [a, c] => {
            let Document::Algebra(ad) = &a.doc else {
                return Err(CliError::input(&a.path, "expected an algebra document"));
            };
            let l = doc::algebra(ad, opts(g)).map_err(|m| CliError::input(&a.path, m))?;
            let b = cdga_of(c)?;
            Ok((loaded, l, b))
        }
        _ => Err(CliError::bare("expected one or two documents")),
    }
}

fn cdga_of(l: &Loaded) -> Result<BoundedCdga, CliError> {
    let Document::Cdga(d) = &l.doc else {
        return Err(CliError::input(&l.path, "expected a cdga document"));
    };
    doc::cdga(d).map_err(|m| CliError::input(&l.path, m))
}

fn refs(v: &[Loaded]) -> Vec<&Loaded> {
    v.iter().collect()
}

fn vector_json(t: &TensorAlgebra, v: &Vector) -> Value {
    json!(doc::vector_doc(v, t.space().names()))
}

pub fn mc(g: &Global, cmd: &McCommand) -> Outcome {
    match cmd {
        McCommand::Curvature { docs, point } => {
            let (loaded, l, b) = mc_inputs(g, docs)?;
            let t = tensor(&l, &b).map_err(|e| CliError::bare(e.to_string()))?;
            let mut report = Report::new("mc curvature", &refs(&loaded));
            let legend = coordinate_legend(&t);
            report.line(format!("coordinates: {}", legend.join(", ")));
            report.set("coordinates", &legend);
            match point {
                None => {
                    let vars = variable_names(t.mc_coordinates().len());
                    let polys: Vec<(String, String)> = t
                        .curvature_polynomial()
                        .into_iter()
                        .map(|(k, p)| (t.space().name(k).to_string(), p.display(&vars)))
                        .collect();
                    for (k, p) in &polys {
                        report.line(format!("curvature[{k}] = {p}"));
                    }
                    report.set("curvature", polys.into_iter().collect::<std::collections::BTreeMap<_, _>>());
                }
                Some(s) => {
                    let a = parse_point(&t, s, "--point")?;
                    let curv = t.curvature(&a).map_err(|e| CliError::bare(e.to_string()))?;
                    report.line(format!("point: {}", t.display_vector(&a)));
                    report.line(format!("curvature: {}", t.display_vector(&curv)));
                    report.set("point", vector_json(&t, &a));
                    report.set("curvature", vector_json(&t, &curv));
                    report.set("zero", curv.is_zero());
                }
            }
            Ok(report)
        }
        McCommand::Check { docs, point } => {
            let (loaded, l, b) = mc_inputs(g, docs)?;
            let t = tensor(&l, &b).map_err(|e| CliError::bare(e.to_string()))?;
            let mut report = Report::new("mc check", &refs(&loaded));
            let a = parse_point(&t, point, "--point")?;
            let curv = t.curvature(&a).map_err(|e| CliError::bare(e.to_string()))?;
            report.line(format!("point: {}", t.display_vector(&a)));
            report.set("point", vector_json(&t, &a));
            report.set("curvature", vector_json(&t, &curv));
            if !curv.is_zero() {
                report.line(format!("curvature: {}", t.display_vector(&curv)));
                report.fail(format!("curvature {}", t.display_vector(&curv)));
            }
            report.check("Maurer–Cartan equation", curv.is_zero());
            Ok(report)
        }
        McCommand::Pushforward { morphism, cdga, point } => {
            let lm = doc::load(morphism)?;
            let lb = doc::load(cdga)?;
            let f = doc::morphism(&lm, opts(g))?;
            let b = cdga_of(&lb)?;
            let s = tensor(f.source(), &b).map_err(|e| CliError::bare(e.to_string()))?;
            let t = tensor(f.target(), &b).map_err(|e| CliError::bare(e.to_string()))?;
            let mut report = Report::new("mc pushforward", &[&lm, &lb]);
            let a = parse_point(&s, point, "--point")?;
            report.line(format!("coordinates: {}", coordinate_legend(&s).join(", ")));
            report.line(format!("point: {}", s.display_vector(&a)));
            report.set("point", vector_json(&s, &a));
            match pushforward(&f, &s, &t, &a) {
                Ok(fa) => {
                    report.line(format!("image: {}", t.display_vector(&fa)));
                    report.set("image", vector_json(&t, &fa));
                    report.check("image is Maurer–Cartan", true);
                }
                Err(e) => absorb(&mut report, morphism, e)?,
            }
            Ok(report)
        }
        McCommand::Pullback { f, g: gp, cdga, a_prime, a, samples } => mc_pullback(g, f, gp, cdga, a_prime, a, *samples),
    }
}

fn mc_pullback(
    g: &Global,
    fp: &Path,
    gp: &Path,
    bp: &Path,
    a_prime: &Option<String>,
    a: &Option<String>,
    samples: usize,
) -> Outcome {
    let lf = doc::load(fp)?;
    let lg = doc::load(gp)?;
    let lb = doc::load(bp)?;
    let f = doc::morphism(&lf, opts(g))?;
    let gm = doc::morphism(&lg, opts(g))?;
    let b = cdga_of(&lb)?;
    if f.target() != gm.target() {
        return Err(CliError::bare("f and g have different targets"));
    }
    let mut report = Report::new("mc pullback", &[&lf, &lg, &lb]);
    let mp = match McPullback::new(&f, &gm, &b) {
        Ok(mp) => mp,
        Err(e) => {
            absorb(&mut report, fp, e)?;
            return Ok(report);
        }
    };
    if let (Some(sp), Some(s)) = (a_prime, a) {
        let ap = parse_point(&mp.source_prime, sp, "--a-prime")?;
        let av = parse_point(&mp.source, s, "--a")?;
        match mp.round_trip(&ap, &av) {
            Ok(psi) => {
                report.line(format!("φ(a′, a) = {}", mp.object.display_vector(&psi)));
                report.set("phi", vector_json(&mp.object, &psi));
                report.check("h ∘ φ = id and φ ∘ h = id", true);
            }
            Err(e) => absorb(&mut report, fp, e)?,
        }
        return Ok(report);
    }
    let left = sample_mc_points(&mp.source_prime, samples);
    let right = sample_mc_points(&mp.source, samples);
    let mut pairs = Vec::new();
    for ap in &left {
        let ga = pushforward(&mp.pullback.square.g, &mp.source_prime, &mp.base, ap);
        for av in &right {
            let fa = pushforward(&mp.pullback.square.f, &mp.source, &mp.base, av);
            if matches!((&ga, &fa), (Ok(x), Ok(y)) if x == y) {
                pairs.push((ap.clone(), av.clone()));
            }
        }
    }
    if !pairs.is_empty() {
        let r = (g.seed % pairs.len() as u64) as usize;
        pairs.rotate_left(r);
    }
    let mut ok = 0usize;
    let mut listed = Vec::new();
    for (ap, av) in &pairs {
        match mp.round_trip(ap, av) {
            Ok(psi) => {
                ok += 1;
                listed.push(json!({
                    "a_prime": vector_json(&mp.source_prime, ap),
                    "a": vector_json(&mp.source, av),
                    "phi": vector_json(&mp.object, &psi),
                }));
            }
            Err(e) => {
                report.fail(format!(
                    "at ({}, {}): {e}",
                    mp.source_prime.display_vector(ap),
                    mp.source.display_vector(av)
                ));
            }
        }
    }
    report.line(format!("MC points sampled: {} in L′ ⊗ B, {} in L ⊗ B", left.len(), right.len()));
    report.line(format!("matched pairs: {}, bijection verified on {ok}", pairs.len()));
    report.set("matched_pairs", pairs.len());
    report.set("verified", ok);
    report.set("pairs", listed);
    Ok(report)
}

// ---- postnikov ----

fn kind_of(k: Kind) -> TruncationKind {
    match k {
        Kind::Le => TruncationKind::AtMost,
        Kind::Lt => TruncationKind::Below,
    }
}

fn stage_label(t: &Truncation) -> String {
    match t.kind {
        TruncationKind::AtMost => format!("τ≤{}", t.m),
        TruncationKind::Below => format!("τ<{}", t.m),
    }
}

fn load_algebra(g: &Global, path: &Path) -> Result<(Loaded, Arc<LieNAlgebra>), CliError> {
    let loaded = doc::load(path)?;
    let Document::Algebra(d) = &loaded.doc else {
        return Err(CliError::input(path, "expected an algebra document"));
    };
    let l = doc::algebra(d, opts(g)).map_err(|m| CliError::input(path, m))?;
    Ok((loaded, l))
}

pub fn postnikov(g: &Global, cmd: &PostnikovCommand) -> Outcome {
    match cmd {
        PostnikovCommand::Truncate { path, m, kind } => {
            let (loaded, l) = load_algebra(g, path)?;
            let mut report = Report::new("postnikov truncate", &[&loaded]);
            match truncate(&l, *m, kind_of(*kind)) {
                Ok(t) => {
                    report.line(format!("{}: {}", stage_label(&t), basis_line(&t.algebra)));
                    let h = homology_dims(&t.algebra);
                    report.line(format!("homology: {}", dims_text(&h)));
                    report.check("projection is a fibration", class_of(&t.projection).fibration);
                    report.set("truncation", stage_label(&t));
                    report.set("homology", dims_json(&h));
                    report.set("algebra", algebra_json(&t.algebra));
                    report.set("projection", morphism_json(&t.projection));
                }
                Err(e) => absorb(&mut report, path, e)?,
            }
            Ok(report)
        }
        PostnikovCommand::Tower { path } => {
            let loaded = doc::load(path)?;
            match &loaded.doc {
                Document::Algebra(_) => {
                    let (loaded, l) = load_algebra(g, path)?;
                    let mut report = Report::new("postnikov tower", &[&loaded]);
                    match tower(&l) {
                        Ok(t) => {
                            let stages: Vec<Value> = t
                                .stages
                                .iter()
                                .map(|s| {
                                    report.line(format!("{}: {}", stage_label(s), basis_line(&s.algebra)));
                                    json!({"stage": stage_label(s), "dim": s.algebra.dim(), "homology": dims_json(&homology_dims(&s.algebra))})
                                })
                                .collect();
                            let fib = t.maps.iter().all(|q| class_of(q).fibration);
                            report.check("tower maps are fibrations", fib);
                            report.set("stages", stages);
                        }
                        Err(e) => absorb(&mut report, path, e)?,
                    }
                    Ok(report)
                }
                Document::Morphism(_) => {
                    let f = doc::morphism(&loaded, opts(g))?;
                    let mut report = Report::new("postnikov tower", &[&loaded]);
                    match tower_morphism(&f) {
                        Ok(ladder) => {
                            let rungs: Vec<Value> = ladder
                                .source
                                .stages
                                .iter()
                                .zip(&ladder.rungs)
                                .map(|(s, r)| {
                                    let c = class_of(r);
                                    report.line(format!(
                                        "{}: fibration {}, weak equivalence {}",
                                        stage_label(s),
                                        c.fibration,
                                        c.weak_equivalence
                                    ));
                                    json!({"stage": stage_label(s), "fibration": c.fibration, "weak_equivalence": c.weak_equivalence})
                                })
                                .collect();
                            report.check("ladder squares commute", true);
                            report.set("rungs", rungs);
                        }
                        Err(e) => absorb(&mut report, path, e)?,
                    }
                    Ok(report)
                }
                _ => Err(CliError::input(path, "expected an algebra or morphism document")),
            }
        }
        PostnikovCommand::Quasisplit { path, witness } => quasisplit(g, path, witness.as_deref()),
        PostnikovCommand::Decompose1 { path, m } => {
            let loaded = doc::load(path)?;
            let f = doc::morphism(&loaded, opts(g))?;
            let mut report = Report::new("postnikov decompose1", &[&loaded]);
            match decompose_tower_step1(&f, *m) {
                Ok(s) => {
                    report.line(format!("τ<{}: {}", m + 1, basis_line(&s.upper.algebra)));
                    report.line(format!("τ≤{m}: {}", basis_line(&s.lower.algebra)));
                    report.line(format!("V: {}", basis_line(&s.split.kernel.algebra)));
                    report.line(format!("V′: {}", basis_line(&s.split_target.kernel.algebra)));
                    report.check("τ<m+1 L ≅ τ≤m L ⊕ V", s.split.iso.linear().is_bijective());
                    report.check("τ<m+1 L′ ≅ τ≤m L′ ⊕ V′", s.split_target.iso.linear().is_bijective());
                    report.check("V is acyclic", homology_dims(&s.split.kernel.algebra).is_empty());
                    let sq = matches!(
                        (compose(&s.right, &s.split.iso), compose(&s.split_target.iso, &s.left)),
                        (Ok(a), Ok(b)) if a == b
                    );
                    report.check("square commutes", sq);
                    report.set("kernel", algebra_json(&s.split.kernel.algebra));
                    report.set("right", morphism_json(&s.right));
                }
                Err(e) => absorb(&mut report, path, e)?,
            }
            Ok(report)
        }
        PostnikovCommand::Decompose2 { path, m } => {
            let loaded = doc::load(path)?;
            let f = doc::morphism(&loaded, opts(g))?;
            let mut report = Report::new("postnikov decompose2", &[&loaded]);
            match decompose_tower_step2(&f, *m) {
                Ok(s) => {
                    report.line(format!("τ<{m}: {}", basis_line(&s.source.lower.algebra)));
                    report.line(format!("H_{m}: {}", basis_line(&s.source.homology.algebra)));
                    report.line(format!("twisted product: {}", basis_line(&s.source.algebra)));
                    report.check("right map is strict", s.right.is_strict());
                    let sq = matches!(
                        (compose(&s.right, &s.source.q_hat), compose(&s.target.q_hat, &s.left)),
                        (Ok(a), Ok(b)) if a == b
                    );
                    report.check("square commutes", sq);
                    let mixed: Vec<Value> = s
                        .source
                        .mixed_brackets()
                        .into_iter()
                        .map(|(x, y, v)| {
                            let shown = linfty::linfty::display_vector(&v, s.source.algebra.space().names());
                            report.line(format!("ℓ̂₂({x}, {y}) = {shown}"));
                            json!({"x": x, "y": y, "value": doc::vector_doc(&v, s.source.algebra.space().names())})
                        })
                        .collect();
                    report.set("mixed_brackets", mixed);
                    report.set("nonzero_mixed_bracket", s.source.has_nonzero_mixed_bracket());
                    report.set("twisted_product", algebra_json(&s.source.algebra));
                }
                Err(e) => absorb(&mut report, path, e)?,
            }
            Ok(report)
        }
    }
}

fn quasisplit(g: &Global, path: &Path, witness: Option<&Path>) -> Outcome {
    let loaded = doc::load(path)?;
    let f = doc::morphism(&loaded, opts(g))?;
    let lw = witness.map(doc::load).transpose()?;
    let w = match &lw {
        None => None,
        Some(l) => {
            let Document::Witness(d) = &l.doc else {
                return Err(CliError::input(&l.path, "expected a witness document"));
            };
            let (h0, _) = h0_lie_algebra(f.source()).map_err(|e| CliError::bare(e.to_string()))?;
            let span = doc::witness_vectors(d, h0.space()).map_err(|m| CliError::input(&l.path, m))?;
            Some(SplittingWitness { span })
        }
    };
    let mut inputs = vec![&loaded];
    inputs.extend(lw.as_ref());
    let mut report = Report::new("postnikov quasisplit", &inputs);
    match is_quasi_split(&f, w.as_ref()) {
        Ok(q) => {
            report.line(format!("quasi-split: {}", q.label()));
            report.line(format!("reason: {}", q.reason()));
            report.set("quasi_split", q.label());
            report.set("reason", q.reason());
            if q.as_bool() != Some(true) {
                report.fail(format!("{}: {}", q.label(), q.reason()));
            }
        }
        // a witness that does not split is a failed verification, not bad input
        Err(Error::InvalidInput(m)) if w.is_some() => {
            report.set("quasi_split", "witness rejected");
            report.fail(m);
        }
        Err(e) => absorb(&mut report, path, e)?,
    }
    Ok(report)
}

// ---- normalize ----

pub fn normalize(path: &Path) -> Result<String, CliError> {
    let loaded = doc::load(path)?;
    let d = doc::normalize(&loaded)?;
    let mut s = serde_json::to_string_pretty(&d.to_json()).map_err(|e| CliError::bare(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
