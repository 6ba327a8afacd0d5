//! Multigraphs with edge lengths, the contracted tree, and the subdivided graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    /// Length of the edge, at least 1.
    pub n: i64,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }

    /// +1 when v is the tail, -1 when v is the head.
    pub fn sigma(&self, v: usize) -> i64 {
        if v == self.tail {
            1
        } else {
            -1
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.tail == v || self.head == v
    }
}

/// A multigraph with ids sorted lexicographically; indices into `vertices` and `edges` are the
/// internal handles used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Multigraph {
    /// Builds the graph from ids. Loops and disconnection are accepted here and reported by
    /// [`Multigraph::validate`]; unknown or duplicate ids and lengths below 1 are rejected.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String, i64)>) -> Result<Self> {
        let mut vs = vertices;
        vs.sort();
        let before = vs.len();
        vs.dedup();
        if vs.len() != before {
            return Err(Error::Malformed("duplicate vertex id".into()));
        }
        let index: BTreeMap<&str, usize> = vs.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut es = Vec::new();
        for (id, t, h, n) in edges {
            let tail = *index.get(t.as_str()).ok_or_else(|| Error::UnknownId(t.clone()))?;
            let head = *index.get(h.as_str()).ok_or_else(|| Error::UnknownId(h.clone()))?;
            if n < 1 {
                return Err(Error::Malformed(format!("edge {} has length {} < 1", id, n)));
            }
            es.push(Edge { id, tail, head, n });
        }
        es.sort_by(|a, b| a.id.cmp(&b.id));
        if es.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Malformed("duplicate edge id".into()));
        }
        Ok(Multigraph { vertices: vs, edges: es })
    }

    /// Convenience constructor from string slices.
    pub fn from_spec(vertices: &[&str], edges: &[(&str, &str, &str, i64)]) -> Result<Self> {
        Multigraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|(e, t, h, n)| (e.to_string(), t.to_string(), h.to_string(), *n)).collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(id))
            .map_err(|_| Error::UnknownId(format!("vertex {}", id)))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .map_err(|_| Error::UnknownId(format!("edge {}", id)))
    }

    /// Edges at v, in edge order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    /// First Betti number |E| - |V| + 1 (for a connected graph).
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                if e.touches(v) {
                    let u = e.other(v);
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All violations of: no loops, connected, edges between the same two vertices share a tail.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.tail == e.head {
                out.push(format!("loop: edge {} at {}", e.id, self.vertices[e.tail]));
            }
        }
        if !self.is_connected() {
            out.push("disconnected".to_string());
        }
        let mut tails: BTreeMap<(usize, usize), (usize, &str)> = BTreeMap::new();
        for e in self.edges.iter().filter(|e| e.tail != e.head) {
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            match tails.get(&key) {
                None => {
                    tails.insert(key, (e.tail, &e.id));
                }
                Some((t, first)) if *t != e.tail => out.push(format!(
                    "edges {} and {} between {} and {} have different tails",
                    first, e.id, self.vertices[key.0], self.vertices[key.1]
                )),
                _ => {}
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(v))
        }
    }

    /// Points every edge from its lexicographically smaller endpoint. Returns the new graph and,
    /// per edge, whether it was flipped.
    pub fn reorient(&self) -> (Multigraph, Vec<bool>) {
        let mut g = self.clone();
        let mut flipped = vec![false; g.edges.len()];
        for (i, e) in g.edges.iter_mut().enumerate() {
            if e.tail > e.head {
                std::mem::swap(&mut e.tail, &mut e.head);
                flipped[i] = true;
            }
        }
        (g, flipped)
    }

    /// The same graph with every length multiplied by k.
    pub fn scaled(&self, k: i64) -> Multigraph {
        let mut g = self.clone();
        for e in g.edges.iter_mut() {
            e.n *= k;
        }
        g
    }
}

/// One edge of the contracted tree: the vertex pair a < b and the edges of G over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub fibre: Vec<usize>,
    /// Shared tail of the fibre.
    pub tail: usize,
}

impl TreeEdge {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

/// The graph obtained by merging parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedTree {
    pub edges: Vec<TreeEdge>,
    /// For each edge of G, the index of the tree edge it lies over.
    pub edge_to_tree: Vec<usize>,
    pub is_multitree: bool,
    pub is_chain: bool,
}

impl ContractedTree {
    pub fn new(g: &Multigraph) -> Self {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            groups.entry((e.tail.min(e.head), e.tail.max(e.head))).or_default().push(i);
        }
        let mut edges = Vec::new();
        let mut edge_to_tree = vec![0; g.n_edges()];
        for ((a, b), fibre) in groups {
            for &i in &fibre {
                edge_to_tree[i] = edges.len();
            }
            let tail = g.edge(fibre[0]).tail;
            edges.push(TreeEdge { a, b, fibre, tail });
        }
        let nv = g.n_vertices();
        let is_multitree = nv == 0 || edges.len() + 1 == nv;
        let is_chain = is_multitree && (0..nv).all(|v| edges.iter().filter(|t| t.touches(v)).count() <= 2);
        ContractedTree { edges, edge_to_tree, is_multitree, is_chain }
    }

    /// Tree edges at v.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    /// The tree edge joining u and v, if any.
    pub fn between(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|t| t.a == u.min(v) && t.b == u.max(v))
    }

    /// Vertices in the component of the tree minus edge `te` that contains v.
    pub fn side(&self, te: usize, v: usize) -> Result<BTreeSet<usize>> {
        if !self.is_multitree {
            return Err(Error::NotMultitree);
        }
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for (i, t) in self.edges.iter().enumerate() {
                if i != te && t.touches(x) {
                    let y = t.other(x);
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Vertices of a chain in order, starting from the end with the smaller index.
    pub fn chain_order(&self, nv: usize) -> Result<Vec<usize>> {
        if !self.is_chain {
            return Err(Error::NotChain);
        }
        if nv == 1 {
            return Ok(vec![0]);
        }
        let start = (0..nv).find(|&v| self.incident(v).len() == 1).ok_or(Error::NotChain)?;
        let mut order = vec![start];
        let mut prev_edge = usize::MAX;
        while order.len() < nv {
            let x = *order.last().unwrap();
            let te = self.incident(x).into_iter().find(|&t| t != prev_edge).ok_or(Error::NotChain)?;
            order.push(self.edges[te].other(x));
            prev_edge = te;
        }
        Ok(order)
    }

    /// The contracted graph as a multigraph in its own right (each tree edge keeps the id of the
    /// first edge over it and has length 1).
    pub fn as_multigraph(&self, g: &Multigraph) -> Multigraph {
        let edges = self
            .edges
            .iter()
            .map(|t| {
                let e = g.edge(t.fibre[0]);
                (e.id.clone(), g.vertices()[e.tail].clone(), g.vertices()[e.head].clone(), 1)
            })
            .collect();
        Multigraph::new(g.vertices().to_vec(), edges).expect("ids come from a valid graph")
    }
}

/// A vertex of the subdivided graph: an original vertex or the k-th interior point of an edge,
/// counted from the tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubVertex {
    Vertex(usize),
    Interior(usize, i64),
}

/// The graph with n(e) - 1 vertices inserted on each edge e. Its vertices are the original
/// vertices (same indices) followed by the interior vertices of each edge in edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedGraph {
    pub points: Vec<SubVertex>,
    /// Per edge of G, its vertices from tail to head, endpoints included (length n(e) + 1).
    pub chains: Vec<Vec<usize>>,
    /// Neighbours with multiplicity.
    pub adj: Vec<Vec<usize>>,
    pub n_edges: usize,
}

impl SubdividedGraph {
    pub fn new(g: &Multigraph) -> Self {
        let mut points: Vec<SubVertex> = (0..g.n_vertices()).map(SubVertex::Vertex).collect();
        let mut chains = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let mut chain = vec![e.tail];
            for k in 1..e.n {
                chain.push(points.len());
                points.push(SubVertex::Interior(i, k));
            }
            chain.push(e.head);
            chains.push(chain);
        }
        let mut adj = vec![Vec::new(); points.len()];
        let mut n_edges = 0;
        for chain in &chains {
            for w in chain.windows(2) {
                adj[w[0]].push(w[1]);
                adj[w[1]].push(w[0]);
                n_edges += 1;
            }
        }
        SubdividedGraph { points, chains, adj, n_edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn genus(&self) -> i64 {
        self.n_edges as i64 - self.points.len() as i64 + 1
    }

    /// Index of the point at integer distance t from the tail of edge e (0 <= t <= n).
    pub fn at(&self, e: usize, t: i64) -> usize {
        self.chains[e][t as usize]
    }

    /// The neighbour of the endpoint v along edge e.
    pub fn next_from(&self, e: usize, v: usize) -> usize {
        let c = &self.chains[e];
        if c[0] == v {
            c[1]
        } else {
            c[c.len() - 2]
        }
    }

    /// Display name: vertex ids as given, interior points as "edge#k".
    pub fn name(&self, g: &Multigraph, x: usize) -> String {
        match self.points[x] {
            SubVertex::Vertex(v) => g.vertices()[v].clone(),
            SubVertex::Interior(e, k) => format!("{}#{}", g.edge(e).id, k),
        }
    }

    pub fn index_of_name(&self, g: &Multigraph, name: &str) -> Result<usize> {
        if let Some((e, k)) = name.rsplit_once('#') {
            let ei = g.edge_index(e)?;
            let k: i64 = k.parse().map_err(|_| Error::UnknownId(name.to_string()))?;
            if k < 1 || k >= g.edge(ei).n {
                return Err(Error::UnknownId(name.to_string()));
            }
            return Ok(self.at(ei, k));
        }
        g.vertex_index(name)
    }
}

/// A validated graph with its contracted tree and subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    pub g: Multigraph,
    pub tree: ContractedTree,
    pub sub: SubdividedGraph,
}

impl MetricGraph {
    pub fn new(g: Multigraph) -> Result<Self> {
        g.validate()?;
        let tree = ContractedTree::new(&g);
        let sub = SubdividedGraph::new(&g);
        Ok(MetricGraph { g, tree, sub })
    }

    pub fn genus(&self) -> i64 {
        self.g.genus()
    }

    pub fn edge(&self, i: usize) -> &Edge {
        self.g.edge(i)
    }

    pub fn nv(&self) -> usize {
        self.g.n_vertices()
    }

    pub fn ne(&self) -> usize {
        self.g.n_edges()
    }

    pub fn require_multitree(&self) -> Result<()> {
        if self.tree.is_multitree {
            Ok(())
        } else {
            Err(Error::NotMultitree)
        }
    }

    pub fn scaled(&self, k: i64) -> MetricGraph {
        MetricGraph::new(self.g.scaled(k)).expect("scaling keeps validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn banana() -> Multigraph {
        Multigraph::from_spec(&["v", "v'"], &[("e1", "v", "v'", 4), ("e2", "v", "v'", 2), ("e3", "v", "v'", 3)])
            .unwrap()
    }

    #[test]
    fn three_edge_banana() {
        let g = banana();
        assert!(g.validate().is_ok());
        let m = MetricGraph::new(g).unwrap();
        assert_eq!(m.tree.edges.len(), 1);
        assert!(m.tree.is_multitree && m.tree.is_chain);
        assert_eq!(m.sub.n_vertices(), 2 + 6);
        assert_eq!(m.sub.n_edges, 9);
        assert_eq!(m.genus(), 2);
        assert_eq!(m.sub.genus(), 2);
        assert_eq!(m.sub.name(&m.g, m.sub.at(0, 2)), "e1#2");
    }

    #[test]
    fn violations_are_listed() {
        let g = Multigraph::from_spec(&["a", "b", "c"], &[("l", "a", "a", 1), ("x", "a", "b", 1), ("y", "b", "a", 1)])
            .unwrap();
        let v = g.violations();
        assert_eq!(v.len(), 3, "{:?}", v);
        assert!(v[0].starts_with("loop"));
        let (h, flipped) = g.reorient();
        assert_eq!(flipped, vec![false, false, true]);
        assert_eq!(h.violations().len(), 2);
        let single = Multigraph::from_spec(&["a"], &[]).unwrap();
        assert!(single.validate().is_ok());
    }

    #[test]
    fn doubled_triangle_is_not_a_multitree() {
        let g = Multigraph::from_spec(
            &["a", "b", "c"],
            &[("1", "a", "b", 1), ("2", "a", "b", 1), ("3", "b", "c", 1), ("4", "b", "c", 1), ("5", "a", "c", 1), ("6", "a", "c", 1)],
        )
        .unwrap();
        let t = ContractedTree::new(&g);
        assert_eq!(t.edges.len(), 3);
        assert!(!t.is_multitree && !t.is_chain);
        let again = ContractedTree::new(&t.as_multigraph(&g));
        assert_eq!(again.edges.len(), 3);
    }

    #[test]
    fn chain_order_of_a_path() {
        let g = Multigraph::from_spec(&["a", "b", "c"], &[("1", "b", "c", 1), ("2", "b", "a", 1)]).unwrap();
        let t = ContractedTree::new(&g);
        assert_eq!(t.chain_order(3).unwrap(), vec![0, 1, 2]);
        assert_eq!(t.side(1, 2).unwrap(), BTreeSet::from([2]));
        assert_eq!(t.side(0, 2).unwrap(), BTreeSet::from([1, 2]));
    }
}
