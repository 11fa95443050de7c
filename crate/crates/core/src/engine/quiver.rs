use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Mutable,
    Frozen,
    /// Frozen and never incident to an edge.
    Isolated,
}

impl VertexKind {
    pub fn is_mutable(self) -> bool {
        self == VertexKind::Mutable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Mutable => "mutable",
            VertexKind::Frozen => "frozen",
            VertexKind::Isolated => "isolated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub label: String,
    pub kind: VertexKind,
    pub multiplicity: u32,
}

/// Quiver with per-vertex multiplicities. Vertex ids are dense indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityQuiver {
    vertices: Vec<Vertex>,
    edges: BTreeMap<(usize, usize), u32>,
}

impl MultiplicityQuiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, kind: VertexKind, multiplicity: u32) -> usize {
        assert!(multiplicity >= 1);
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, label: label.into(), kind, multiplicity });
        id
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn kind(&self, id: usize) -> VertexKind {
        self.vertices[id].kind
    }

    pub fn multiplicity(&self, id: usize) -> u32 {
        self.vertices[id].multiplicity
    }

    pub fn set_multiplicity(&mut self, id: usize, d: u32) {
        assert!(d >= 1);
        self.vertices[id].multiplicity = d;
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    /// Number of edges `a -> b`.
    pub fn edge(&self, a: usize, b: usize) -> u32 {
        self.edges.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Signed exchange entry `b_ab = #(a -> b) - #(b -> a)`.
    pub fn b(&self, a: usize, b: usize) -> i64 {
        self.edge(a, b) as i64 - self.edge(b, a) as i64
    }

    /// Add `m` edges `a -> b`, cancelling against existing `b -> a` edges.
    pub fn add_edge(&mut self, a: usize, b: usize, m: u32) {
        assert!(a < self.len() && b < self.len() && a != b, "bad edge {a} -> {b}");
        let signed = self.b(a, b) + m as i64;
        self.set_signed(a, b, signed);
    }

    /// Remove up to `m` edges `a -> b`.
    pub fn remove_edge(&mut self, a: usize, b: usize, m: u32) {
        let left = self.edge(a, b).saturating_sub(m);
        if left == 0 {
            self.edges.remove(&(a, b));
        } else {
            self.edges.insert((a, b), left);
        }
    }

    fn set_signed(&mut self, a: usize, b: usize, v: i64) {
        self.edges.remove(&(a, b));
        self.edges.remove(&(b, a));
        if v > 0 {
            self.edges.insert((a, b), v as u32);
        } else if v < 0 {
            self.edges.insert((b, a), (-v) as u32);
        }
    }

    /// `(target, multiplicity)` for edges leaving `k`.
    pub fn out_edges(&self, k: usize) -> Vec<(usize, u32)> {
        self.edges.iter().filter(|((a, _), _)| *a == k).map(|(&(_, b), &m)| (b, m)).collect()
    }

    /// `(source, multiplicity)` for edges entering `k`.
    pub fn in_edges(&self, k: usize) -> Vec<(usize, u32)> {
        self.edges.iter().filter(|((_, b), _)| *b == k).map(|(&(a, _), &m)| (a, m)).collect()
    }

    pub fn has_two_cycle(&self) -> bool {
        self.edges.keys().any(|&(a, b)| self.edges.contains_key(&(b, a)))
    }

    pub fn isolated_vertices_are_isolated(&self) -> bool {
        self.edges
            .keys()
            .all(|&(a, b)| self.kind(a) != VertexKind::Isolated && self.kind(b) != VertexKind::Isolated)
    }

    pub fn require_mutable(&self, k: usize) -> Result<(), Error> {
        if k >= self.len() {
            return Err(Error::Range(alloc::format!("vertex {k} does not exist")));
        }
        if !self.kind(k).is_mutable() {
            return Err(Error::VertexKind { vertex: k, expected: "mutable" });
        }
        Ok(())
    }

    /// Mutation at `k`. A path `i -> k -> j` with `b_ik`, `b_kj` edges
    /// contributes `b_ik * b_kj * w` edges `i -> j`, where `w = d_k` if both
    /// ends are mutable, `d_j` if only `i` is frozen and `d_i` if only `j` is
    /// frozen. Paths between two frozen vertices are ignored. Edges at `k`
    /// are then reversed and opposite edges cancelled. Fails with
    /// [`Error::Range`] if a multiplicity outgrows `u32`.
    pub fn mutate(&self, k: usize) -> Result<Self, Error> {
        self.require_mutable(k)?;
        let dk = self.multiplicity(k) as i64;
        let mut signed: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (&(a, b), &m) in &self.edges {
            let (key, v) = if a < b { ((a, b), m as i64) } else { ((b, a), -(m as i64)) };
            *signed.entry(key).or_insert(0) += v;
        }
        let ins = self.in_edges(k);
        let outs = self.out_edges(k);
        for &(i, bi) in &ins {
            for &(j, bj) in &outs {
                if i == j {
                    continue;
                }
                let w = match (self.kind(i).is_mutable(), self.kind(j).is_mutable()) {
                    (true, true) => dk,
                    (false, true) => self.multiplicity(j) as i64,
                    (true, false) => self.multiplicity(i) as i64,
                    (false, false) => continue,
                };
                let c = (bi as i64).checked_mul(bj as i64).and_then(|c| c.checked_mul(w)).ok_or_else(overflow)?;
                let (key, v) = if i < j { ((i, j), c) } else { ((j, i), -c) };
                let e = signed.entry(key).or_insert(0);
                *e = e.checked_add(v).ok_or_else(overflow)?;
            }
        }
        let mut edges = BTreeMap::new();
        for ((a, b), mut v) in signed {
            if a == k || b == k {
                v = -v;
            }
            let m = u32::try_from(v.unsigned_abs()).map_err(|_| overflow())?;
            if v > 0 {
                edges.insert((a, b), m);
            } else if v < 0 {
                edges.insert((b, a), m);
            }
        }
        Ok(MultiplicityQuiver { vertices: self.vertices.clone(), edges })
    }
}

fn overflow() -> Error {
    Error::Range("edge multiplicity exceeds u32".into())
}
