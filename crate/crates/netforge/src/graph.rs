//! Undirected simple graph with the structural queries the rest of the
//! crate builds on: BFS distances, connectivity, essential (cut) nodes
//! between a pair, and degree bookkeeping.
//!
//! Nodes are dense ids `0..n`, assigned in entry order and never removed.
//! Distances to other components are reported as `None`, never as a
//! sentinel integer.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} is not in the network")]
    UnknownNode(usize),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(usize, usize),
    #[error("essential set is undefined for a node paired with itself ({0})")]
    IdenticalPair(usize),
    #[error("malformed graph data: {0}")]
    Parse(String),
}

/// Undirected simple graph over dense integer node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Nodes that lie on every path between a fixed pair; removing any one of
/// them disconnects the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialSet {
    pub pair: (usize, usize),
    pub members: Vec<usize>,
}

impl EssentialSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

impl Network {
    /// Graph with `n` isolated nodes.
    pub fn with_nodes(n: usize) -> Self {
        Network {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn singleton() -> Self {
        Network::with_nodes(1)
    }

    /// Adds the next node in entry order and returns its id.
    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    fn check_node(&self, v: usize) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let iu = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(iu, v);
        let iv = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(iv, u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let iu = self.adj[u]
            .binary_search(&v)
            .map_err(|_| GraphError::MissingEdge(u, v))?;
        self.adj[u].remove(iu);
        let iv = self
            .adj[v]
            .binary_search(&u)
            .expect("adjacency lists out of sync");
        self.adj[v].remove(iv);
        self.edge_count -= 1;
        Ok(())
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_node(v)?;
        Ok(self.adj[v].len())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.adj.len() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS distances from `source`; `None` marks nodes in other components.
    pub fn shortest_distances(&self, source: usize) -> Result<Vec<Option<u32>>, GraphError> {
        self.check_node(source)?;
        let mut dist = vec![None; self.adj.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    fn reachable(&self, from: usize, to: usize) -> bool {
        self.shortest_distances(from).expect("checked node")[to].is_some()
    }

    /// BFS reachability test used by the essential-node computation,
    /// treating `skip` as removed from the graph.
    fn reaches_without(&self, from: usize, to: usize, skip: usize) -> bool {
        if from == skip || to == skip {
            return false;
        }
        let mut seen = vec![false; self.adj.len()];
        seen[from] = true;
        seen[skip] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                return true;
            }
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Exactly the nodes whose removal disconnects `y` from `z`. Empty when
    /// the pair is adjacent or disconnected. Candidates are restricted to
    /// articulation points before the removal check; the check itself is
    /// removal + reachability.
    pub fn essential_nodes(&self, y: usize, z: usize) -> Result<EssentialSet, GraphError> {
        self.check_node(y)?;
        self.check_node(z)?;
        if y == z {
            return Err(GraphError::IdenticalPair(y));
        }
        let empty = EssentialSet {
            pair: (y.min(z), y.max(z)),
            members: Vec::new(),
        };
        if self.has_edge(y, z) || !self.reachable(y, z) {
            return Ok(empty);
        }
        let mut members = Vec::new();
        for v in self.articulation_points() {
            if v != y && v != z && !self.reaches_without(y, z, v) {
                members.push(v);
            }
        }
        members.sort_unstable();
        Ok(EssentialSet {
            pair: (y.min(z), y.max(z)),
            members,
        })
    }

    /// Tarjan's articulation points (cut vertices), ascending.
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.adj.len();
        let mut disc = vec![0usize; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 1usize;
        // Iterative DFS frames: (node, parent, neighbor cursor).
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != 0 {
                continue;
            }
            let mut root_children = 0usize;
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(&(u, parent, cursor)) = stack.last() {
                if cursor < self.adj[u].len() {
                    stack.last_mut().expect("non-empty").2 += 1;
                    let w = self.adj[u][cursor];
                    if disc[w] == 0 {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if p != root && low[u] >= disc[p] {
                            is_cut[p] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let dist = self.shortest_distances(0).expect("node 0 exists");
        dist.iter().all(|d| d.is_some())
    }

    /// Largest finite pairwise distance; `None` when disconnected.
    pub fn diameter(&self) -> Option<u32> {
        if self.adj.is_empty() {
            return Some(0);
        }
        let mut max = 0;
        for v in 0..self.adj.len() {
            let dist = self.shortest_distances(v).expect("valid node");
            for d in dist {
                match d {
                    Some(x) => max = max.max(x),
                    None => return None,
                }
            }
        }
        Some(max)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Network {
    /// JSON object `{"n": int, "edges": [[u,v],...]}` with edges sorted
    /// `(u < v)`, so writing is canonical and round-trips bit-exactly.
    pub fn to_json(&self) -> String {
        let repr = GraphJson {
            n: self.node_count(),
            edges: self.edges(),
        };
        serde_json::to_string(&repr).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let repr: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        let mut g = Network::with_nodes(repr.n);
        for (u, v) in repr.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Edge-list text: first line `n`, then one `u v` line per edge,
    /// in the canonical `(u < v)` lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.node_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| GraphError::Parse("empty edge list".into()))?
            .trim()
            .parse()
            .map_err(|_| GraphError::Parse("first line must be the node count".into()))?;
        let mut g = Network::with_nodes(n);
        for line in lines {
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line:?}")))?
                .parse()
                .map_err(|_| GraphError::Parse(format!("bad edge line: {line:?}")))?;
            let v: usize = parts
                .next()
                .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line:?}")))?
                .parse()
                .map_err(|_| GraphError::Parse(format!("bad edge line: {line:?}")))?;
            if parts.next().is_some() {
                return Err(GraphError::Parse(format!("bad edge line: {line:?}")));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Network(n={}, m={})", self.node_count(), self.edge_count())
    }
}
