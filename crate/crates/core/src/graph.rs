//! Finite simple graphs on rational vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::qline::Rat;

/// Unordered pair stored with the smaller vertex first.
pub type Edge = (Rat, Rat);

pub fn edge(a: Rat, b: Rat) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatGraph {
    adj: BTreeMap<Rat, BTreeSet<Rat>>,
}

impl RatGraph {
    pub fn new() -> Self {
        RatGraph::default()
    }

    pub fn from_parts(vertices: impl IntoIterator<Item = Rat>, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = RatGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Rat) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Adds both endpoints if missing. Loops are ignored.
    pub fn add_edge(&mut self, a: Rat, b: Rat) {
        if a == b {
            return;
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
    }

    pub fn has_vertex(&self, v: Rat) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: Rat, b: Rat) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Rat> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Rat> {
        self.adj.keys().copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Rat) -> impl Iterator<Item = Rat> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: Rat) -> Option<&BTreeSet<Rat>> {
        self.adj.get(&v)
    }

    /// Edges with the smaller endpoint first, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range((std::ops::Bound::Excluded(a), std::ops::Bound::Unbounded)).map(move |&b| (a, b)))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    /// The induced subgraph on `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Rat>) -> RatGraph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, ns)| (v, ns.intersection(keep).copied().collect()))
            .collect();
        RatGraph { adj }
    }

    /// Edges of the graph with both ends in `within`.
    pub fn edges_within(&self, within: &BTreeSet<Rat>) -> BTreeSet<Edge> {
        self.edges().filter(|(a, b)| within.contains(a) && within.contains(b)).collect()
    }

    /// Whether the vertices of `set` are pairwise adjacent.
    pub fn is_clique(&self, set: &[Rat]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// Some `k`-clique inside `among`, smallest in lexicographic order.
    pub fn find_clique_among(&self, among: &BTreeSet<Rat>, k: usize) -> Option<Vec<Rat>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let cands: Vec<Rat> = among.iter().copied().filter(|v| self.has_vertex(*v)).collect();
        let mut stack = Vec::with_capacity(k);
        self.extend_clique(&cands, k, &mut stack).then_some(stack)
    }

    /// Some `k`-clique anywhere in the graph.
    pub fn find_clique(&self, k: usize) -> Option<Vec<Rat>> {
        self.find_clique_among(&self.vertex_set(), k)
    }

    fn extend_clique(&self, cands: &[Rat], k: usize, stack: &mut Vec<Rat>) -> bool {
        if stack.len() == k {
            return true;
        }
        for (i, &v) in cands.iter().enumerate() {
            if cands.len() - i < k - stack.len() {
                break;
            }
            let next: Vec<Rat> = cands[i + 1..].iter().copied().filter(|&u| self.has_edge(v, u)).collect();
            stack.push(v);
            if self.extend_clique(&next, k, stack) {
                return true;
            }
            stack.pop();
        }
        false
    }

    /// Some `k`-clique containing `v`.
    pub fn find_clique_through(&self, v: Rat, k: usize) -> Option<Vec<Rat>> {
        if k == 0 {
            return Some(Vec::new());
        }
        let ns: BTreeSet<Rat> = self.neighbors(v).collect();
        let mut rest = self.find_clique_among(&ns, k - 1)?;
        rest.push(v);
        rest.sort();
        Some(rest)
    }

    /// Graphviz rendering with vertices labelled `p/q`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for (i, v) in self.adj.keys().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", dot_label(*v));
        }
        let index: BTreeMap<Rat, usize> = self.adj.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  v{} -- v{};", index[&a], index[&b]);
        }
        out.push_str("}\n");
        out
    }
}

fn dot_label(v: Rat) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::frac(n, d)
    }

    #[test]
    fn triangle_found() {
        let g = RatGraph::from_parts([], [(r(0, 1), r(1, 2)), (r(1, 2), r(3, 4)), (r(0, 1), r(3, 4))]);
        assert_eq!(g.find_clique(3), Some(vec![r(0, 1), r(1, 2), r(3, 4)]));
        assert_eq!(g.find_clique(4), None);
        assert!(g.find_clique_through(r(3, 4), 3).is_some());
    }

    #[test]
    fn restriction_keeps_induced_edges() {
        let g = RatGraph::from_parts([r(5, 1)], [(r(0, 1), r(1, 2)), (r(1, 2), r(2, 1))]);
        let keep: BTreeSet<Rat> = [r(0, 1), r(1, 2), r(5, 1)].into_iter().collect();
        let h = g.restrict(&keep);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn dot_labels_are_fractions() {
        let g = RatGraph::from_parts([], [(r(0, 1), r(1, 2))]);
        let dot = g.to_dot("g");
        assert!(dot.contains("label=\"0/1\""));
        assert!(dot.contains("label=\"1/2\""));
        assert!(dot.contains("v0 -- v1;"));
    }
}
