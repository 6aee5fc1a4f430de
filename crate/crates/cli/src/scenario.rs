//! Scenario files: JSON declarations resolved into validated core objects.

use std::path::Path;
use std::sync::Arc;

use deloc_core::charts::LinearChart;
use deloc_core::complexes::EquivariantComplex;
use deloc_core::exactnum::{Cyclotomic, Matrix, RootOfUnity};
use deloc_core::groupoids::{FiniteGroupoid, Functor, GeneralizedMorphism};
use deloc_core::groups::{FiniteGroup, GroupEmbedding};
use deloc_core::reps::Representation;
use deloc_core::rrg::{GeneralScenario, IsoSpatialScenario, RrgError, Weight, ZeroSectionScenario};
use deloc_core::series::{EigenConvention, DEFAULT_TRUNC};
use serde::Deserialize;
use serde_path_to_error::Segment;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::parse::parse_cyclotomic;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{pointer}: {message}")]
    Invalid { pointer: String, message: String },
}

fn invalid(pointer: impl Into<String>, message: impl ToString) -> LoadError {
    LoadError::Invalid {
        pointer: pointer.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDecl {
    #[serde(default)]
    trunc: Option<usize>,
    #[serde(default)]
    groups: Vec<GroupDecl>,
    #[serde(default)]
    embeddings: Vec<EmbeddingDecl>,
    #[serde(default)]
    representations: Vec<RepDecl>,
    #[serde(default)]
    complexes: Vec<ComplexDecl>,
    #[serde(default)]
    charts: Vec<ChartDecl>,
    #[serde(default)]
    models: Vec<ModelDecl>,
    #[serde(default)]
    groupoids: Vec<GroupoidDecl>,
    #[serde(default)]
    morphisms: Vec<MorphismDecl>,
    #[serde(default)]
    rrg: RrgDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDecl {
    name: String,
    #[serde(default)]
    permutations: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    cayley: Option<Vec<Vec<usize>>>,
}

/// An element given by its index or, in a permutation group, by its images.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ElementRef {
    Index(usize),
    Perm(Vec<usize>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

type MatrixDecl = Vec<Vec<Entry>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingDecl {
    name: String,
    source: String,
    target: String,
    images: Vec<ElementRef>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RepKind {
    Trivial,
    Zero,
    Natural,
    Regular,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlongDecl {
    representation: String,
    embedding: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepDecl {
    name: String,
    #[serde(default)]
    group: Option<String>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    kind: Option<RepKind>,
    #[serde(default)]
    generators: Option<Vec<MatrixDecl>>,
    #[serde(default)]
    elements: Option<Vec<MatrixDecl>>,
    #[serde(default)]
    direct_sum: Option<Vec<String>>,
    #[serde(default)]
    tensor: Option<Vec<String>>,
    #[serde(default)]
    dual: Option<String>,
    #[serde(default)]
    restrict: Option<AlongDecl>,
    #[serde(default)]
    induce: Option<AlongDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDecl {
    name: String,
    #[serde(default)]
    lowest: i32,
    pieces: Vec<String>,
    #[serde(default)]
    differentials: Option<Vec<MatrixDecl>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartDecl {
    name: String,
    representation: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDecl {
    name: String,
    #[serde(default)]
    eigenvalues: Option<Vec<Entry>>,
    #[serde(default)]
    representation: Option<String>,
    #[serde(default)]
    element: Option<ElementRef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDecl {
    name: String,
    group: String,
    points: usize,
    #[serde(default)]
    action: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDecl {
    name: String,
    source: String,
    target: String,
    embedding: String,
    points: Vec<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RrgDecl {
    #[serde(default)]
    iso_spatial: Vec<IsoDecl>,
    #[serde(default)]
    zero_section: Vec<ZeroDecl>,
    #[serde(default)]
    general: Vec<GeneralDecl>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WeightDecl {
    #[default]
    Centralizer,
    Unit,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ConventionDecl {
    #[default]
    Dual,
    Direct,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDecl {
    #[serde(default)]
    weight: WeightDecl,
    #[serde(default)]
    convention: ConventionDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoDecl {
    name: String,
    embedding: String,
    #[serde(default)]
    chart: Option<String>,
    class: String,
    #[serde(default)]
    control: ControlDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroDecl {
    name: String,
    ambient: String,
    #[serde(default)]
    sub: Option<String>,
    #[serde(default)]
    inclusion: Option<MatrixDecl>,
    #[serde(default)]
    subspace: Option<MatrixDecl>,
    class: String,
    #[serde(default)]
    control: ControlDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralDecl {
    name: String,
    embedding: String,
    ambient: String,
    #[serde(default)]
    sub: Option<String>,
    #[serde(default)]
    inclusion: Option<MatrixDecl>,
    #[serde(default)]
    subspace: Option<MatrixDecl>,
    class: String,
    #[serde(default)]
    control: ControlDecl,
}

/// Deliberate corruptions for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Control {
    pub weight: Weight,
    pub convention: EigenConvention,
}

impl From<&ControlDecl> for Control {
    fn from(c: &ControlDecl) -> Self {
        Control {
            weight: match c.weight {
                WeightDecl::Centralizer => Weight::Centralizer,
                WeightDecl::Unit => Weight::Unit,
            },
            convention: match c.convention {
                ConventionDecl::Dual => EigenConvention::Dual,
                ConventionDecl::Direct => EigenConvention::Direct,
            },
        }
    }
}

/// An rrg block; `built` holds the validation failure of its complex when
/// that is the only problem, so commands can report it.
#[derive(Debug, Clone)]
pub struct Block<T> {
    pub name: String,
    pub built: Result<T, String>,
    pub control: Control,
}

#[derive(Debug, Clone)]
pub struct GroupoidEntry {
    pub group: Arc<FiniteGroup>,
    pub points: usize,
    /// `action[g][x]` for every group element.
    pub action: Vec<Vec<usize>>,
    pub groupoid: Arc<FiniteGroupoid>,
}

#[derive(Debug, Clone)]
pub struct MorphismEntry {
    pub source: String,
    pub target: String,
    pub morphism: GeneralizedMorphism,
}

pub type Named<T> = Vec<(String, T)>;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub sha256: String,
    pub trunc: usize,
    pub groups: Named<Arc<FiniteGroup>>,
    pub embeddings: Named<GroupEmbedding>,
    pub representations: Named<Representation>,
    pub complexes: Named<EquivariantComplex>,
    pub charts: Named<LinearChart>,
    pub models: Named<Vec<RootOfUnity>>,
    pub groupoids: Named<GroupoidEntry>,
    pub morphisms: Named<MorphismEntry>,
    pub iso_spatial: Vec<Block<IsoSpatialScenario>>,
    pub zero_section: Vec<Block<ZeroSectionScenario>>,
    pub general: Vec<Block<GeneralScenario>>,
}

pub fn load_scenario(path: &Path, trunc: Option<usize>) -> Result<Scenario, LoadError> {
    let bytes = std::fs::read(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_bytes(&bytes, trunc)
}

/// Parses and validates; `trunc` overrides the file's truncation degree.
pub fn load_bytes(bytes: &[u8], trunc: Option<usize>) -> Result<Scenario, LoadError> {
    let sha256 = hex::encode(Sha256::digest(bytes));
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let decl: FileDecl = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        invalid(pointer, e.into_inner())
    })?;
    let mut b = Builder::new(sha256, trunc.or(decl.trunc).unwrap_or(DEFAULT_TRUNC));
    b.groups(&decl.groups)?;
    b.embeddings(&decl.embeddings)?;
    b.representations(&decl.representations)?;
    b.complexes(&decl.complexes)?;
    b.charts(&decl.charts)?;
    b.models(&decl.models)?;
    b.groupoids(&decl.groupoids)?;
    b.morphisms(&decl.morphisms)?;
    b.rrg(&decl.rrg)?;
    Ok(b.sc)
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1")))
            }
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn lookup<'a, T>(
    list: &'a Named<T>,
    name: &str,
    kind: &str,
    pointer: &str,
) -> Result<&'a T, LoadError> {
    list.iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| invalid(pointer, format!("unknown {kind} '{name}'")))
}

fn check_unique<T>(
    list: &Named<T>,
    name: &str,
    kind: &str,
    pointer: &str,
) -> Result<(), LoadError> {
    if list.iter().any(|(n, _)| n == name) {
        return Err(invalid(pointer, format!("duplicate {kind} name '{name}'")));
    }
    Ok(())
}

fn entry_value(e: &Entry, pointer: &str) -> Result<Cyclotomic, LoadError> {
    match e {
        Entry::Int(n) => Ok(Cyclotomic::from_int(*n)),
        Entry::Text(t) => parse_cyclotomic(t).map_err(|err| invalid(pointer, err)),
    }
}

fn matrix(m: &MatrixDecl, rows: usize, cols: usize, pointer: &str) -> Result<Matrix, LoadError> {
    if m.len() != rows {
        return Err(invalid(
            pointer,
            format!("expected {rows} rows, found {}", m.len()),
        ));
    }
    let mut out = Matrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(
                format!("{pointer}/{i}"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            out[(i, j)] = entry_value(e, &format!("{pointer}/{i}/{j}"))?;
        }
    }
    Ok(out)
}

fn element(group: &FiniteGroup, r: &ElementRef, pointer: &str) -> Result<usize, LoadError> {
    match r {
        ElementRef::Index(i) if *i < group.order() => Ok(*i),
        ElementRef::Index(i) => Err(invalid(
            pointer,
            format!(
                "element {i} out of range for a group of order {}",
                group.order()
            ),
        )),
        ElementRef::Perm(p) => group
            .elements()
            .find(|&g| group.permutation(g) == Some(p.as_slice()))
            .ok_or_else(|| {
                invalid(
                    pointer,
                    format!("permutation {p:?} is not an element of the group"),
                )
            }),
    }
}

/// Recognizes `±ζ_N^k` inside `Q(ζ_N)`.
fn root_of_unity(c: &Cyclotomic) -> Option<RootOfUnity> {
    let n = 2 * c.order();
    (0..n as i64)
        .map(|k| RootOfUnity::new(n, k))
        .find(|z| z.to_cyclotomic() == *c)
}

struct Builder {
    sc: Scenario,
}

impl Builder {
    fn new(sha256: String, trunc: usize) -> Self {
        Builder {
            sc: Scenario {
                sha256,
                trunc,
                groups: Vec::new(),
                embeddings: Vec::new(),
                representations: Vec::new(),
                complexes: Vec::new(),
                charts: Vec::new(),
                models: Vec::new(),
                groupoids: Vec::new(),
                morphisms: Vec::new(),
                iso_spatial: Vec::new(),
                zero_section: Vec::new(),
                general: Vec::new(),
            },
        }
    }

    fn group(&self, name: &str, pointer: &str) -> Result<Arc<FiniteGroup>, LoadError> {
        lookup(&self.sc.groups, name, "group", pointer).cloned()
    }

    fn rep(&self, name: &str, pointer: &str) -> Result<Representation, LoadError> {
        lookup(&self.sc.representations, name, "representation", pointer).cloned()
    }

    fn embedding(&self, name: &str, pointer: &str) -> Result<GroupEmbedding, LoadError> {
        lookup(&self.sc.embeddings, name, "embedding", pointer).cloned()
    }

    fn complex(&self, name: &str, pointer: &str) -> Result<EquivariantComplex, LoadError> {
        lookup(&self.sc.complexes, name, "complex", pointer).cloned()
    }

    fn groups(&mut self, decls: &[GroupDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/groups/{i}");
            check_unique(&self.sc.groups, &d.name, "group", &format!("{p}/name"))?;
            let g = match (&d.permutations, &d.cayley) {
                (Some(perms), None) => {
                    let degree = perms.first().map_or(1, Vec::len);
                    FiniteGroup::from_generators(degree, perms)
                        .map_err(|e| invalid(format!("{p}/permutations"), e))?
                }
                (None, Some(table)) => FiniteGroup::from_cayley(table)
                    .map_err(|e| invalid(format!("{p}/cayley"), e))?,
                _ => return Err(invalid(p, "give exactly one of 'permutations' or 'cayley'")),
            };
            self.sc.groups.push((d.name.clone(), Arc::new(g)));
        }
        Ok(())
    }

    fn embeddings(&mut self, decls: &[EmbeddingDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/embeddings/{i}");
            check_unique(
                &self.sc.embeddings,
                &d.name,
                "embedding",
                &format!("{p}/name"),
            )?;
            let source = self.group(&d.source, &format!("{p}/source"))?;
            let target = self.group(&d.target, &format!("{p}/target"))?;
            let images = d
                .images
                .iter()
                .enumerate()
                .map(|(k, r)| element(&target, r, &format!("{p}/images/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            let emb = GroupEmbedding::from_generator_images(source, target, &images)
                .map_err(|e| invalid(format!("{p}/images"), e))?;
            self.sc.embeddings.push((d.name.clone(), emb));
        }
        Ok(())
    }

    fn representations(&mut self, decls: &[RepDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/representations/{i}");
            check_unique(
                &self.sc.representations,
                &d.name,
                "representation",
                &format!("{p}/name"),
            )?;
            let rep = self.representation(d, &p)?;
            self.sc.representations.push((d.name.clone(), rep));
        }
        Ok(())
    }

    fn representation(&self, d: &RepDecl, p: &str) -> Result<Representation, LoadError> {
        let given = [
            d.kind.is_some(),
            d.generators.is_some(),
            d.elements.is_some(),
            d.direct_sum.is_some(),
            d.tensor.is_some(),
            d.dual.is_some(),
            d.restrict.is_some(),
            d.induce.is_some(),
        ];
        if given.iter().filter(|&&x| x).count() != 1 {
            return Err(invalid(
                p,
                "give exactly one of 'kind', 'generators', 'elements', 'direct_sum', 'tensor', 'dual', 'restrict', 'induce'",
            ));
        }
        let group = || -> Result<Arc<FiniteGroup>, LoadError> {
            let name = d
                .group
                .as_ref()
                .ok_or_else(|| invalid(p, "missing 'group'"))?;
            self.group(name, &format!("{p}/group"))
        };
        let err = |field: &str, e: deloc_core::reps::RepError| invalid(format!("{p}/{field}"), e);
        if let Some(kind) = d.kind {
            let g = group()?;
            return match kind {
                RepKind::Trivial => Ok(Representation::trivial(&g)),
                RepKind::Zero => Ok(Representation::zero(&g)),
                RepKind::Regular => Ok(Representation::regular(&g)),
                RepKind::Natural => Representation::natural(&g).ok_or_else(|| {
                    invalid(format!("{p}/kind"), "group is not a permutation group")
                }),
            };
        }
        if let Some(gens) = &d.generators {
            let g = group()?;
            let dim = d.dim.or_else(|| gens.first().map(Vec::len)).unwrap_or(0);
            let mats = gens
                .iter()
                .enumerate()
                .map(|(k, m)| matrix(m, dim, dim, &format!("{p}/generators/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            return Representation::from_generator_images(g, dim, &mats)
                .map_err(|e| err("generators", e));
        }
        if let Some(elems) = &d.elements {
            let g = group()?;
            let dim = d.dim.or_else(|| elems.first().map(Vec::len)).unwrap_or(0);
            if elems.len() != g.order() {
                return Err(invalid(
                    format!("{p}/elements"),
                    format!("expected {} matrices, found {}", g.order(), elems.len()),
                ));
            }
            let mats = elems
                .iter()
                .enumerate()
                .map(|(k, m)| matrix(m, dim, dim, &format!("{p}/elements/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            return Representation::new(g, dim, mats).map_err(|e| err("elements", e));
        }
        if let Some(parts) = d.direct_sum.as_ref().or(d.tensor.as_ref()) {
            let field = if d.direct_sum.is_some() {
                "direct_sum"
            } else {
                "tensor"
            };
            let reps = parts
                .iter()
                .enumerate()
                .map(|(k, n)| self.rep(n, &format!("{p}/{field}/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            let (first, rest) = reps
                .split_first()
                .ok_or_else(|| invalid(format!("{p}/{field}"), "empty list"))?;
            return rest.iter().try_fold(first.clone(), |acc, r| {
                if field == "direct_sum" {
                    acc.direct_sum(r)
                } else {
                    acc.tensor(r)
                }
                .map_err(|e| err(field, e))
            });
        }
        if let Some(name) = &d.dual {
            return Ok(self.rep(name, &format!("{p}/dual"))?.dual());
        }
        let (field, along) = match (&d.restrict, &d.induce) {
            (Some(a), _) => ("restrict", a),
            (_, Some(a)) => ("induce", a),
            _ => unreachable!("one constructor is present"),
        };
        let rep = self.rep(
            &along.representation,
            &format!("{p}/{field}/representation"),
        )?;
        let emb = self.embedding(&along.embedding, &format!("{p}/{field}/embedding"))?;
        if field == "restrict" {
            rep.restrict(&emb)
        } else {
            rep.induce(&emb)
        }
        .map_err(|e| err(field, e))
    }

    fn complexes(&mut self, decls: &[ComplexDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/complexes/{i}");
            check_unique(&self.sc.complexes, &d.name, "complex", &format!("{p}/name"))?;
            let pieces = d
                .pieces
                .iter()
                .enumerate()
                .map(|(k, n)| self.rep(n, &format!("{p}/pieces/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            if pieces.is_empty() {
                return Err(invalid(
                    format!("{p}/pieces"),
                    "a complex needs at least one piece",
                ));
            }
            let diffs = match &d.differentials {
                None => (1..pieces.len())
                    .map(|k| Matrix::zeros(pieces[k].dim(), pieces[k - 1].dim()))
                    .collect(),
                Some(ms) => {
                    if ms.len() + 1 != pieces.len() {
                        return Err(invalid(
                            format!("{p}/differentials"),
                            format!(
                                "{} pieces need {} differentials, found {}",
                                pieces.len(),
                                pieces.len() - 1,
                                ms.len()
                            ),
                        ));
                    }
                    ms.iter()
                        .enumerate()
                        .map(|(k, m)| {
                            matrix(
                                m,
                                pieces[k + 1].dim(),
                                pieces[k].dim(),
                                &format!("{p}/differentials/{k}"),
                            )
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
            };
            let c = EquivariantComplex::from_parts(d.lowest, pieces, diffs)
                .map_err(|e| invalid(&p, e))?;
            self.sc.complexes.push((d.name.clone(), c));
        }
        Ok(())
    }

    fn charts(&mut self, decls: &[ChartDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/charts/{i}");
            check_unique(&self.sc.charts, &d.name, "chart", &format!("{p}/name"))?;
            let rep = self.rep(&d.representation, &format!("{p}/representation"))?;
            self.sc.charts.push((d.name.clone(), LinearChart::new(rep)));
        }
        Ok(())
    }

    fn models(&mut self, decls: &[ModelDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/models/{i}");
            check_unique(&self.sc.models, &d.name, "model", &format!("{p}/name"))?;
            let lines = match (&d.eigenvalues, &d.representation, &d.element) {
                (Some(values), None, None) => values
                    .iter()
                    .enumerate()
                    .map(|(k, e)| {
                        let q = format!("{p}/eigenvalues/{k}");
                        let c = entry_value(e, &q)?;
                        root_of_unity(&c)
                            .ok_or_else(|| invalid(q, format!("{c} is not a root of unity")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                (None, Some(name), Some(r)) => {
                    let rep = self.rep(name, &format!("{p}/representation"))?;
                    let g = element(rep.group(), r, &format!("{p}/element"))?;
                    LinearChart::new(rep).eigen_decomposition(g).lines()
                }
                _ => {
                    return Err(invalid(
                        p,
                        "give either 'eigenvalues' or both 'representation' and 'element'",
                    ))
                }
            };
            self.sc.models.push((d.name.clone(), lines));
        }
        Ok(())
    }

    fn groupoids(&mut self, decls: &[GroupoidDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/groupoids/{i}");
            check_unique(
                &self.sc.groupoids,
                &d.name,
                "groupoid",
                &format!("{p}/name"),
            )?;
            let group = self.group(&d.group, &format!("{p}/group"))?;
            let action = match &d.action {
                Some(gens) => extend_action(&group, d.points, gens)
                    .map_err(|m| invalid(format!("{p}/action"), m))?,
                None => natural_action(&group, d.points).map_err(|m| invalid(&p, m))?,
            };
            let groupoid = FiniteGroupoid::translation(&group, d.points, |g, x| action[g][x])
                .map_err(|e| invalid(format!("{p}/action"), e))?;
            self.sc.groupoids.push((
                d.name.clone(),
                GroupoidEntry {
                    group,
                    points: d.points,
                    action,
                    groupoid: Arc::new(groupoid),
                },
            ));
        }
        Ok(())
    }

    fn morphisms(&mut self, decls: &[MorphismDecl]) -> Result<(), LoadError> {
        for (i, d) in decls.iter().enumerate() {
            let p = format!("/morphisms/{i}");
            check_unique(
                &self.sc.morphisms,
                &d.name,
                "morphism",
                &format!("{p}/name"),
            )?;
            let source = lookup(
                &self.sc.groupoids,
                &d.source,
                "groupoid",
                &format!("{p}/source"),
            )?;
            let target = lookup(
                &self.sc.groupoids,
                &d.target,
                "groupoid",
                &format!("{p}/target"),
            )?;
            let emb = self.embedding(&d.embedding, &format!("{p}/embedding"))?;
            if **emb.source() != *source.group || **emb.target() != *target.group {
                return Err(invalid(
                    format!("{p}/embedding"),
                    "embedding does not match the groupoids' groups",
                ));
            }
            if d.points.len() != source.points || d.points.iter().any(|&y| y >= target.points) {
                return Err(invalid(
                    format!("{p}/points"),
                    "point map has the wrong length or range",
                ));
            }
            let functor = Functor::equivariant(&source.groupoid, &target.groupoid, &emb, &d.points)
                .map_err(|e| invalid(format!("{p}/points"), e))?;
            let morphism = GeneralizedMorphism::comma(&functor).map_err(|e| invalid(&p, e))?;
            self.sc.morphisms.push((
                d.name.clone(),
                MorphismEntry {
                    source: d.source.clone(),
                    target: d.target.clone(),
                    morphism,
                },
            ));
        }
        Ok(())
    }

    /// `V ⊂ W` from either `sub` + `inclusion` or a spanning `subspace`.
    fn inclusion(
        &self,
        ambient: &Representation,
        sub: &Option<String>,
        inclusion: &Option<MatrixDecl>,
        subspace: &Option<MatrixDecl>,
        p: &str,
    ) -> Result<Inclusion, LoadError> {
        if let Some(basis) = subspace {
            if sub.is_some() || inclusion.is_some() {
                return Err(invalid(p, "'subspace' excludes 'sub' and 'inclusion'"));
            }
            let cols = basis.first().map_or(0, Vec::len);
            return Ok(Inclusion::Subspace(matrix(
                basis,
                ambient.dim(),
                cols,
                &format!("{p}/subspace"),
            )?));
        }
        let sub = match sub {
            Some(name) => self.rep(name, &format!("{p}/sub"))?,
            None => Representation::zero(ambient.group()),
        };
        let map = match inclusion {
            Some(m) => matrix(m, ambient.dim(), sub.dim(), &format!("{p}/inclusion"))?,
            None if sub.dim() == 0 => Matrix::zeros(ambient.dim(), 0),
            None => return Err(invalid(p, "missing 'inclusion'")),
        };
        Ok(Inclusion::Map(sub, map))
    }

    fn rrg(&mut self, decl: &RrgDecl) -> Result<(), LoadError> {
        for (i, d) in decl.iso_spatial.iter().enumerate() {
            let p = format!("/rrg/iso_spatial/{i}");
            let emb = self.embedding(&d.embedding, &format!("{p}/embedding"))?;
            let chart = match &d.chart {
                Some(name) => self.rep(name, &format!("{p}/chart"))?,
                None => Representation::zero(emb.target()),
            };
            let class = self.complex(&d.class, &format!("{p}/class"))?;
            let built = deferred(IsoSpatialScenario::new(emb, chart, class), &p)?;
            self.sc.iso_spatial.push(Block {
                name: d.name.clone(),
                built,
                control: (&d.control).into(),
            });
        }
        for (i, d) in decl.zero_section.iter().enumerate() {
            let p = format!("/rrg/zero_section/{i}");
            let ambient = self.rep(&d.ambient, &format!("{p}/ambient"))?;
            let class = self.complex(&d.class, &format!("{p}/class"))?;
            let trunc = self.sc.trunc;
            let at = inclusion_pointer(&p, d.subspace.is_some());
            let built = match self.inclusion(&ambient, &d.sub, &d.inclusion, &d.subspace, &p)? {
                Inclusion::Map(sub, map) => {
                    ZeroSectionScenario::new(sub, ambient, map, class, trunc)
                }
                Inclusion::Subspace(basis) => {
                    ZeroSectionScenario::from_subspace(ambient, basis, class, trunc)
                }
            };
            let built = deferred(built, &at)?;
            self.sc.zero_section.push(Block {
                name: d.name.clone(),
                built,
                control: (&d.control).into(),
            });
        }
        for (i, d) in decl.general.iter().enumerate() {
            let p = format!("/rrg/general/{i}");
            let emb = self.embedding(&d.embedding, &format!("{p}/embedding"))?;
            let ambient = self.rep(&d.ambient, &format!("{p}/ambient"))?;
            let class = self.complex(&d.class, &format!("{p}/class"))?;
            let trunc = self.sc.trunc;
            let at = inclusion_pointer(&p, d.subspace.is_some());
            let built = match self.inclusion(&ambient, &d.sub, &d.inclusion, &d.subspace, &p)? {
                Inclusion::Map(sub, map) => {
                    GeneralScenario::new(emb, sub, ambient, map, class, trunc)
                }
                Inclusion::Subspace(basis) => {
                    GeneralScenario::from_subspace(emb, ambient, basis, class, trunc)
                }
            };
            let built = deferred(built, &at)?;
            self.sc.general.push(Block {
                name: d.name.clone(),
                built,
                control: (&d.control).into(),
            });
        }
        Ok(())
    }
}

fn inclusion_pointer(block: &str, subspace: bool) -> String {
    format!(
        "{block}/{}",
        if subspace { "subspace" } else { "inclusion" }
    )
}

enum Inclusion {
    Map(Representation, Matrix),
    Subspace(Matrix),
}

/// Invalid complexes become failing reports; every other problem is a load error.
fn deferred<T>(built: Result<T, RrgError>, pointer: &str) -> Result<Result<T, String>, LoadError> {
    match built {
        Ok(v) => Ok(Ok(v)),
        Err(RrgError::InvalidComplex(report)) => Ok(Err(report.to_string())),
        Err(e) => Err(invalid(pointer, e)),
    }
}

/// Extends per-generator permutations of `0..points` to the whole group.
fn extend_action(
    group: &FiniteGroup,
    points: usize,
    gens: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, String> {
    let g = group.generators();
    if gens.len() != g.len() {
        return Err(format!(
            "{} generator actions for {} generators",
            gens.len(),
            g.len()
        ));
    }
    for (k, p) in gens.iter().enumerate() {
        let mut seen = vec![false; points];
        if p.len() != points
            || p.iter()
                .any(|&x| x >= points || std::mem::replace(&mut seen[x], true))
        {
            return Err(format!(
                "action of generator {k} is not a permutation of {points} points"
            ));
        }
    }
    let mut table: Vec<Option<Vec<usize>>> = vec![None; group.order()];
    table[group.identity()] = Some((0..points).collect());
    let mut queue = std::collections::VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, p) in g.iter().zip(gens) {
            let y = group.mul(s, x);
            let img: Vec<usize> = table[x]
                .as_ref()
                .expect("visited")
                .iter()
                .map(|&i| p[i])
                .collect();
            match &table[y] {
                None => {
                    table[y] = Some(img);
                    queue.push_back(y);
                }
                Some(existing) if *existing != img => {
                    return Err(format!(
                        "generator actions do not define an action (conflict at element {y})"
                    ));
                }
                Some(_) => {}
            }
        }
    }
    Ok(table
        .into_iter()
        .map(|t| t.expect("generators span"))
        .collect())
}

fn natural_action(group: &FiniteGroup, points: usize) -> Result<Vec<Vec<usize>>, String> {
    if points == 1 {
        return Ok(vec![vec![0]; group.order()]);
    }
    group
        .elements()
        .map(|g| match group.permutation(g) {
            Some(p) if p.len() == points => Ok(p.to_vec()),
            _ => Err(
                "'action' is required unless the group permutes exactly 'points' points"
                    .to_string(),
            ),
        })
        .collect()
}
