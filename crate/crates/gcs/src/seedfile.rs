//! The `SeedFile` JSON document: quiver, strings and the cluster variables
//! as one shared expression DAG.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use gcs_core::engine::{ExchangeString, GeneralizedSeed, MultiplicityQuiver, TauMonomial, VertexKind};
use gcs_core::exact::{Coord, Node, NodeKind, RegularFunction, Q};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Double,
    Band,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Double => "double",
            Family::Band => "band",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub label: String,
    pub kind: String,
    pub multiplicity: u32,
    /// Name of the cluster variable.
    pub name: String,
    /// Node id of the cluster variable in `nodes`.
    pub function: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringRecord {
    pub owner: usize,
    /// One exponent map per coefficient `p_0..p_d`, keyed by vertex id.
    pub coeffs: Vec<BTreeMap<usize, u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeRecord {
    Entry { coord: String },
    Const { value: String },
    Sum { args: Vec<usize> },
    Product { args: Vec<usize> },
    Pow { base: usize, exp: u32 },
    Det { size: usize, entries: Vec<usize> },
    Quotient { num: usize, den: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub format: u32,
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub vertices: Vec<VertexRecord>,
    /// `(src, dst, multiplicity)`.
    pub edges: Vec<(usize, usize, u32)>,
    pub strings: Vec<StringRecord>,
    /// Children always precede their parents.
    pub nodes: Vec<NodeRecord>,
    /// Index conventions the seed was built under.
    #[serde(default)]
    pub conventions: BTreeMap<String, String>,
}

fn kind_from_str(s: &str) -> Result<VertexKind, CliError> {
    match s {
        "mutable" => Ok(VertexKind::Mutable),
        "frozen" => Ok(VertexKind::Frozen),
        "isolated" => Ok(VertexKind::Isolated),
        other => Err(CliError::Format(format!("unknown vertex kind {other:?}"))),
    }
}

pub fn parse_coord(s: &str, n: usize) -> Result<Coord, CliError> {
    let bad = || CliError::Format(format!("bad coordinate {s:?}"));
    let (tag, rest) = (s.get(..1).ok_or_else(bad)?, s.get(1..).ok_or_else(bad)?);
    let (r, c) = rest.split_once(',').ok_or_else(bad)?;
    let (row, col): (usize, usize) = (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?);
    if !(1..=n).contains(&row) || !(1..=n).contains(&col) {
        return Err(bad());
    }
    match tag {
        "x" => Ok(Coord::x(row, col)),
        "y" => Ok(Coord::y(row, col)),
        _ => Err(bad()),
    }
}

/// Flattens DAGs into a node table, sharing nodes by identity.
#[derive(Default)]
struct Flattener {
    ids: HashMap<*const Node, usize>,
    nodes: Vec<NodeRecord>,
}

impl Flattener {
    fn add(&mut self, root: &Arc<Node>) -> usize {
        let mut stack: Vec<(&Arc<Node>, bool)> = vec![(root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if self.ids.contains_key(&Arc::as_ptr(node)) {
                continue;
            }
            let kids = children(node);
            if !expanded && kids.iter().any(|c| !self.ids.contains_key(&Arc::as_ptr(c))) {
                stack.push((node, true));
                stack.extend(kids.into_iter().rev().map(|c| (c, false)));
                continue;
            }
            let id = |c: &Arc<Node>| self.ids[&Arc::as_ptr(c)];
            let rec = match node.kind() {
                NodeKind::Entry(c) => NodeRecord::Entry { coord: c.to_string() },
                NodeKind::Const(v) => NodeRecord::Const { value: v.to_string() },
                NodeKind::Sum(v) => NodeRecord::Sum { args: v.iter().map(id).collect() },
                NodeKind::Product(v) => NodeRecord::Product { args: v.iter().map(id).collect() },
                NodeKind::Pow(a, e) => NodeRecord::Pow { base: id(a), exp: *e },
                NodeKind::Det { size, entries } => NodeRecord::Det { size: *size, entries: entries.iter().map(id).collect() },
                NodeKind::Quotient(a, b) => NodeRecord::Quotient { num: id(a), den: id(b) },
            };
            self.ids.insert(Arc::as_ptr(node), self.nodes.len());
            self.nodes.push(rec);
        }
        self.ids[&Arc::as_ptr(root)]
    }
}

fn children(node: &Arc<Node>) -> Vec<&Arc<Node>> {
    match node.kind() {
        NodeKind::Entry(_) | NodeKind::Const(_) => Vec::new(),
        NodeKind::Sum(v) | NodeKind::Product(v) => v.iter().collect(),
        NodeKind::Det { entries, .. } => entries.iter().collect(),
        NodeKind::Pow(a, _) => vec![a],
        NodeKind::Quotient(a, b) => vec![a, b],
    }
}

fn rebuild(records: &[NodeRecord], n: usize) -> Result<Vec<Arc<Node>>, CliError> {
    let mut built: Vec<Arc<Node>> = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let get = |j: usize| {
            built.get(j).cloned().ok_or_else(|| CliError::Format(format!("node {i} refers to node {j}, which is not defined before it")))
        };
        let many = |v: &[usize]| v.iter().map(|&j| get(j)).collect::<Result<Vec<_>, _>>();
        let kind = match rec {
            NodeRecord::Entry { coord } => NodeKind::Entry(parse_coord(coord, n)?),
            NodeRecord::Const { value } => {
                NodeKind::Const(value.parse::<Q>().map_err(|_| CliError::Format(format!("bad rational {value:?}")))?)
            }
            NodeRecord::Sum { args } => NodeKind::Sum(many(args)?),
            NodeRecord::Product { args } => NodeKind::Product(many(args)?),
            NodeRecord::Pow { base, exp } => NodeKind::Pow(get(*base)?, *exp),
            NodeRecord::Det { size, entries } => {
                if entries.len() != size * size {
                    return Err(CliError::Format(format!("node {i}: det of size {size} has {} entries", entries.len())));
                }
                NodeKind::Det { size: *size, entries: many(entries)? }
            }
            NodeRecord::Quotient { num, den } => NodeKind::Quotient(get(*num)?, get(*den)?),
        };
        built.push(RegularFunction::from_kind(n, kind).root().clone());
    }
    Ok(built)
}

impl SeedFile {
    pub fn from_seed(seed: &GeneralizedSeed, family: Family, k: Option<usize>, conventions: BTreeMap<String, String>) -> Self {
        let mut flat = Flattener::default();
        let vertices = seed
            .quiver
            .vertices()
            .iter()
            .map(|v| VertexRecord {
                id: v.id,
                label: v.label.clone(),
                kind: v.kind.as_str().into(),
                multiplicity: v.multiplicity,
                name: seed.names[v.id].clone(),
                function: flat.add(seed.cluster[v.id].root()),
            })
            .collect();
        let strings = seed
            .strings
            .values()
            .filter(|s| !s.is_trivial())
            .map(|s| StringRecord { owner: s.owner, coeffs: s.coeffs.iter().map(|m| m.0.clone()).collect() })
            .collect();
        SeedFile {
            format: FORMAT,
            family,
            n: seed.n,
            k,
            vertices,
            edges: seed.quiver.edges().collect(),
            strings,
            nodes: flat.nodes,
            conventions,
        }
    }

    pub fn to_seed(&self) -> Result<GeneralizedSeed, CliError> {
        if self.format != FORMAT {
            return Err(CliError::Format(format!("unsupported format {}, expected {FORMAT}", self.format)));
        }
        let mut q = MultiplicityQuiver::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(CliError::Format(format!("vertex ids must be 0..{}, found {} at {i}", self.vertices.len(), v.id)));
            }
            q.add_vertex(v.label.clone(), kind_from_str(&v.kind)?, v.multiplicity);
        }
        for &(a, b, m) in &self.edges {
            if a >= q.len() || b >= q.len() || a == b {
                return Err(CliError::Format(format!("bad edge ({a}, {b})")));
            }
            q.add_edge(a, b, m);
        }
        if q.has_two_cycle() || !q.isolated_vertices_are_isolated() {
            return Err(CliError::Format("quiver has a 2-cycle or an edge at an isolated vertex".into()));
        }
        let nodes = rebuild(&self.nodes, self.n)?;
        let cluster = self
            .vertices
            .iter()
            .map(|v| {
                nodes
                    .get(v.function)
                    .map(|r| RegularFunction::from_root(self.n, r.clone()))
                    .ok_or_else(|| CliError::Format(format!("vertex {} refers to missing node {}", v.id, v.function)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let names = self.vertices.iter().map(|v| v.name.clone()).collect();
        let strings = self.strings.iter().map(|s| ExchangeString { owner: s.owner, coeffs: s.coeffs.iter().cloned().map(TauMonomial).collect() });
        Ok(GeneralizedSeed::new(self.n, q, cluster, names, strings)?)
    }

    /// Counts that every seed of the family must have.
    pub fn check_structure(&self) -> Result<(), CliError> {
        let count = |kind: &str| self.vertices.iter().filter(|v| v.kind == kind).count();
        let n = self.n;
        let (total, isolated) = match (self.family, self.k) {
            (Family::Double, _) => (2 * n * n, n - 1),
            (Family::Band, Some(k)) => ((k + 1) * n, k - 1),
            (Family::Band, None) => return Err(CliError::Format("band seed without k".into())),
        };
        if self.vertices.len() != total || count("isolated") != isolated {
            return Err(CliError::Format(format!(
                "{} seed with n = {n} should have {total} vertices ({isolated} isolated), found {} ({})",
                self.family.as_str(),
                self.vertices.len(),
                count("isolated")
            )));
        }
        if !self.vertices.iter().any(|v| v.multiplicity > 1) {
            return Err(CliError::Format("no special vertex".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("seed file serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::Io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
    }
}
