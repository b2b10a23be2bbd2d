//! JSON documents read and written by the CLI. Rationals are "p/q" strings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use linfty::exactla::{format_scalar, parse_scalar, GradedSpace, Vector};
use linfty::linfty::{BracketEntry, LInftyMorphism, LieNAlgebra};
use linfty::maurer_cartan::BoundedCdga;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const ALGEBRA_SCHEMA: &str = "linfty/algebra@1";
pub const MORPHISM_SCHEMA: &str = "linfty/morphism@1";
pub const CDGA_SCHEMA: &str = "linfty/cdga@1";
pub const MC_PAIR_SCHEMA: &str = "linfty/mc-pair@1";
pub const WITNESS_SCHEMA: &str = "linfty/witness@1";
pub const REPORT_SCHEMA: &str = "linfty/report@1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i32,
}

/// Output vectors map basis names to rationals.
pub type VectorDoc = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub inputs: Vec<String>,
    pub output: VectorDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub brackets: Vec<EntryDoc>,
}

/// An algebra given inline or as a path relative to the referring document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub schema: String,
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    #[serde(default)]
    pub components: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
    pub output: VectorDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDoc {
    pub input: String,
    pub output: VectorDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgaDoc {
    pub schema: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    #[serde(default)]
    pub products: Vec<ProductDoc>,
    #[serde(default)]
    pub differential: Vec<DifferentialDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McPairDoc {
    pub schema: String,
    pub algebra: AlgebraRef,
    pub cdga: CdgaDoc,
}

/// Spanning vectors of a complement in H₀(L), in the basis `h0, h1, …`
/// printed by `postnikov quasisplit`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub schema: String,
    pub span: Vec<VectorDoc>,
}

/// Any document the CLI accepts, dispatched on its "schema" field.
#[derive(Clone, Debug)]
pub enum Document {
    Algebra(AlgebraDoc),
    Morphism(MorphismDoc),
    Cdga(CdgaDoc),
    McPair(McPairDoc),
    Witness(WitnessDoc),
}

impl Document {
    pub fn schema(&self) -> &str {
        match self {
            Document::Algebra(d) => &d.schema,
            Document::Morphism(d) => &d.schema,
            Document::Cdga(d) => &d.schema,
            Document::McPair(d) => &d.schema,
            Document::Witness(d) => &d.schema,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v = match self {
            Document::Algebra(d) => serde_json::to_value(d),
            Document::Morphism(d) => serde_json::to_value(d),
            Document::Cdga(d) => serde_json::to_value(d),
            Document::McPair(d) => serde_json::to_value(d),
            Document::Witness(d) => serde_json::to_value(d),
        };
        v.expect("documents serialize")
    }
}

/// A parsed file plus where it came from, for resolving relative paths and
/// for located errors.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub doc: Document,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::input(path, format!("cannot read file: {e}")))?;
    let doc = parse(&bytes).map_err(|msg| CliError::input(path, msg))?;
    Ok(Loaded { path: path.to_path_buf(), bytes, doc })
}

pub fn parse(bytes: &[u8]) -> Result<Document, String> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))?;
    let schema = value
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or_else(|| "field `schema`: missing or not a string".to_string())?
        .to_string();
    fn typed<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, String> {
        serde_json::from_value(v).map_err(|e| e.to_string())
    }
    match schema.as_str() {
        ALGEBRA_SCHEMA => typed(value).map(Document::Algebra),
        MORPHISM_SCHEMA => typed(value).map(Document::Morphism),
        CDGA_SCHEMA => typed(value).map(Document::Cdga),
        MC_PAIR_SCHEMA => typed(value).map(Document::McPair),
        WITNESS_SCHEMA => typed(value).map(Document::Witness),
        other => Err(format!("field `schema`: unknown schema {other:?}")),
    }
}

/// Options that affect how documents are turned into library objects.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Reject entries of higher arity.
    pub arity_bound: Option<usize>,
}

/// An algebra document whose basis and entries resolved; building the
/// structure itself (which checks the axioms) is a separate step.
pub struct ResolvedAlgebra {
    pub space: GradedSpace,
    pub n: Option<usize>,
    pub entries: Vec<BracketEntry>,
}

impl ResolvedAlgebra {
    pub fn build(&self) -> linfty::Result<LieNAlgebra> {
        LieNAlgebra::from_brackets(self.space.clone(), self.n, &self.entries)
    }
}

fn space_of(basis: &[BasisEntry], field: &str) -> Result<GradedSpace, String> {
    GradedSpace::new(basis.iter().map(|b| (b.name.clone(), b.degree)).collect()).map_err(|e| format!("field `{field}`: {e}"))
}

fn index(space: &GradedSpace, name: &str, field: &str) -> Result<usize, String> {
    space.index_of(name).ok_or_else(|| format!("{field}: unknown basis name {name:?}"))
}

fn vector(space: &GradedSpace, v: &VectorDoc, field: &str) -> Result<Vector, String> {
    let mut out = Vector::zero();
    for (name, c) in v {
        let i = index(space, name, field)?;
        let x = parse_scalar(c).map_err(|e| format!("{field}.{name}: {e}"))?;
        out.add_entry(i, x);
    }
    Ok(out)
}

fn entries(
    source: &GradedSpace,
    target: &GradedSpace,
    docs: &[EntryDoc],
    field: &str,
    opts: BuildOptions,
) -> Result<Vec<BracketEntry>, String> {
    let mut out = Vec::with_capacity(docs.len());
    for (k, e) in docs.iter().enumerate() {
        let here = format!("{field}[{k}]");
        if e.inputs.is_empty() {
            return Err(format!("{here}.inputs: empty"));
        }
        if let Some(a) = e.arity {
            if a != e.inputs.len() {
                return Err(format!("{here}.arity: {a} but {} inputs", e.inputs.len()));
            }
        }
        if let Some(bound) = opts.arity_bound {
            if e.inputs.len() > bound {
                return Err(format!("{here}: arity {} exceeds --arity-bound {bound}", e.inputs.len()));
            }
        }
        let inputs = e
            .inputs
            .iter()
            .enumerate()
            .map(|(j, n)| index(source, n, &format!("{here}.inputs[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(BracketEntry { inputs, output: vector(target, &e.output, &format!("{here}.output"))? });
    }
    Ok(out)
}

pub fn resolve_algebra(doc: &AlgebraDoc, opts: BuildOptions) -> Result<ResolvedAlgebra, String> {
    if doc.schema != ALGEBRA_SCHEMA {
        return Err(format!("field `schema`: expected {ALGEBRA_SCHEMA}"));
    }
    let space = space_of(&doc.basis, "basis")?;
    let entries = entries(&space, &space, &doc.brackets, "brackets", opts)?;
    Ok(ResolvedAlgebra { space, n: doc.n, entries })
}

/// Builds the algebra; axiom failures are reported as input errors here.
pub fn algebra(doc: &AlgebraDoc, opts: BuildOptions) -> Result<Arc<LieNAlgebra>, String> {
    let r = resolve_algebra(doc, opts)?;
    r.build().map(Arc::new).map_err(|e| e.to_string())
}

fn follow(r: &AlgebraRef, base: &Path, field: &str) -> Result<AlgebraDoc, CliError> {
    match r {
        AlgebraRef::Inline(d) => Ok(d.clone()),
        AlgebraRef::Path(p) => {
            let path = base.parent().unwrap_or(Path::new(".")).join(p);
            match load(&path)?.doc {
                Document::Algebra(d) => Ok(d),
                other => Err(CliError::input(base, format!("{field}: {p} has schema {}", other.schema()))),
            }
        }
    }
}

/// Source and target documents with paths inlined.
pub fn morphism_parts(doc: &MorphismDoc, base: &Path) -> Result<(AlgebraDoc, AlgebraDoc), CliError> {
    Ok((follow(&doc.source, base, "source")?, follow(&doc.target, base, "target")?))
}

pub fn algebra_ref(r: &AlgebraRef, base: &Path, opts: BuildOptions) -> Result<Arc<LieNAlgebra>, CliError> {
    let d = follow(r, base, "algebra")?;
    algebra(&d, opts).map_err(|m| CliError::input(base, m))
}

/// Resolves the components of a morphism document against built algebras.
pub fn morphism_entries(
    doc: &MorphismDoc,
    source: &LieNAlgebra,
    target: &LieNAlgebra,
    opts: BuildOptions,
) -> Result<Vec<BracketEntry>, String> {
    if doc.schema != MORPHISM_SCHEMA {
        return Err(format!("field `schema`: expected {MORPHISM_SCHEMA}"));
    }
    entries(source.space(), target.space(), &doc.components, "components", opts)
}

pub fn morphism(loaded: &Loaded, opts: BuildOptions) -> Result<LInftyMorphism, CliError> {
    let Document::Morphism(doc) = &loaded.doc else {
        return Err(CliError::input(&loaded.path, format!("expected a {MORPHISM_SCHEMA} document")));
    };
    let (s, t) = morphism_parts(doc, &loaded.path)?;
    let src = algebra(&s, opts).map_err(|m| CliError::input(&loaded.path, format!("source: {m}")))?;
    let tgt = algebra(&t, opts).map_err(|m| CliError::input(&loaded.path, format!("target: {m}")))?;
    let es = morphism_entries(doc, &src, &tgt, opts).map_err(|m| CliError::input(&loaded.path, m))?;
    LInftyMorphism::from_components(src, tgt, &es).map_err(|e| CliError::input(&loaded.path, e.to_string()))
}

/// A cdga document with names resolved; `build` checks the axioms.
pub struct ResolvedCdga {
    basis: Vec<(String, i32)>,
    unit: usize,
    products: Vec<(usize, usize, Vector)>,
    differential: Vec<(usize, Vector)>,
}

impl ResolvedCdga {
    pub fn build(&self) -> linfty::Result<BoundedCdga> {
        BoundedCdga::new(self.basis.clone(), self.unit, &self.products, &self.differential)
    }
}

pub fn resolve_cdga(doc: &CdgaDoc) -> Result<ResolvedCdga, String> {
    if doc.schema != CDGA_SCHEMA {
        return Err(format!("field `schema`: expected {CDGA_SCHEMA}"));
    }
    let space = space_of(&doc.basis, "basis")?;
    let unit = index(&space, &doc.unit, "unit")?;
    let mut products = Vec::new();
    for (k, p) in doc.products.iter().enumerate() {
        let here = format!("products[{k}]");
        let i = index(&space, &p.left, &format!("{here}.left"))?;
        let j = index(&space, &p.right, &format!("{here}.right"))?;
        products.push((i, j, vector(&space, &p.output, &format!("{here}.output"))?));
    }
    let mut differential = Vec::new();
    for (k, d) in doc.differential.iter().enumerate() {
        let here = format!("differential[{k}]");
        let i = index(&space, &d.input, &format!("{here}.input"))?;
        differential.push((i, vector(&space, &d.output, &format!("{here}.output"))?));
    }
    let basis = doc.basis.iter().map(|b| (b.name.clone(), b.degree)).collect();
    Ok(ResolvedCdga { basis, unit, products, differential })
}

pub fn cdga(doc: &CdgaDoc) -> Result<BoundedCdga, String> {
    resolve_cdga(doc)?.build().map_err(|e| e.to_string())
}

pub fn witness_vectors(doc: &WitnessDoc, h0: &GradedSpace) -> Result<Vec<Vector>, String> {
    doc.span.iter().enumerate().map(|(k, v)| vector(h0, v, &format!("span[{k}]"))).collect()
}

// ---- serialization of library objects ----

pub fn vector_doc(v: &Vector, names: &[String]) -> VectorDoc {
    v.iter().map(|(i, c)| (names[i].clone(), format_scalar(c))).collect()
}

fn entry_docs(entries: &[BracketEntry], source: &[String], target: &[String]) -> Vec<EntryDoc> {
    entries
        .iter()
        .filter(|e| !e.output.is_zero())
        .map(|e| EntryDoc {
            arity: Some(e.inputs.len()),
            inputs: e.inputs.iter().map(|&i| source[i].clone()).collect(),
            output: vector_doc(&e.output, target),
        })
        .collect()
}

fn basis_doc(space: &GradedSpace) -> Vec<BasisEntry> {
    (0..space.dim()).map(|i| BasisEntry { name: space.name(i).to_string(), degree: space.degree(i) }).collect()
}

pub fn algebra_doc(l: &LieNAlgebra) -> AlgebraDoc {
    let names = l.space().names();
    AlgebraDoc {
        schema: ALGEBRA_SCHEMA.into(),
        n: Some(l.n()),
        basis: basis_doc(l.space()),
        brackets: entry_docs(&l.to_brackets(), names, names),
    }
}

pub fn morphism_doc(f: &LInftyMorphism) -> MorphismDoc {
    MorphismDoc {
        schema: MORPHISM_SCHEMA.into(),
        source: AlgebraRef::Inline(algebra_doc(f.source())),
        target: AlgebraRef::Inline(algebra_doc(f.target())),
        components: entry_docs(&f.components(), f.source().space().names(), f.target().space().names()),
    }
}

pub fn cdga_doc(b: &BoundedCdga) -> CdgaDoc {
    let names = b.names();
    let mut products = Vec::new();
    for i in 0..b.dim() {
        for j in i..b.dim() {
            if i == b.unit() || j == b.unit() || b.mul(i, j).is_zero() {
                continue;
            }
            products.push(ProductDoc {
                left: names[i].clone(),
                right: names[j].clone(),
                output: vector_doc(b.mul(i, j), names),
            });
        }
    }
    let differential = (0..b.dim())
        .filter(|&i| !b.d(i).is_zero())
        .map(|i| DifferentialDoc { input: names[i].clone(), output: vector_doc(b.d(i), names) })
        .collect();
    CdgaDoc {
        schema: CDGA_SCHEMA.into(),
        basis: names.iter().zip(b.degrees()).map(|(n, &d)| BasisEntry { name: n.clone(), degree: d }).collect(),
        unit: names[b.unit()].clone(),
        products,
        differential,
    }
}

/// The normal form of a document: paths inlined, entries canonical.
pub fn normalize(loaded: &Loaded) -> Result<Document, CliError> {
    let opts = BuildOptions::default();
    let at = |m: String| CliError::input(&loaded.path, m);
    Ok(match &loaded.doc {
        Document::Algebra(d) => Document::Algebra(algebra_doc(&*algebra(d, opts).map_err(at)?)),
        Document::Morphism(_) => Document::Morphism(morphism_doc(&morphism(loaded, opts)?)),
        Document::Cdga(d) => Document::Cdga(cdga_doc(&cdga(d).map_err(at)?)),
        Document::McPair(d) => {
            let l = algebra_ref(&d.algebra, &loaded.path, opts)?;
            let b = cdga(&d.cdga).map_err(at)?;
            Document::McPair(McPairDoc {
                schema: MC_PAIR_SCHEMA.into(),
                algebra: AlgebraRef::Inline(algebra_doc(&l)),
                cdga: cdga_doc(&b),
            })
        }
        Document::Witness(d) => Document::Witness(d.clone()),
    })
}
