//! Planar rooted trees stored as preorder node sequences.

use std::fmt;

use itertools::Itertools;
use serde_json::Value;

use crate::{Error, Result};

/// A preorder node: a leaf, or a vertex with a label and its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node<L> {
    Leaf,
    Vertex(L, usize),
}

/// A planar tree in Polish notation. The encoding is unique per planar
/// isomorphism class, and the derived order is the canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarTree<L = usize> {
    nodes: Vec<Node<L>>,
}

impl<L: Clone + Eq> PlanarTree<L> {
    pub fn leaf() -> Self {
        PlanarTree {
            nodes: vec![Node::Leaf],
        }
    }

    pub fn corolla(label: L, arity: usize) -> Self {
        let mut nodes = vec![Node::Vertex(label, arity)];
        nodes.extend(std::iter::repeat_n(Node::Leaf, arity));
        PlanarTree { nodes }
    }

    /// Validates a preorder sequence.
    pub fn from_nodes(nodes: Vec<Node<L>>) -> Result<Self> {
        let mut need = 1usize;
        for (i, n) in nodes.iter().enumerate() {
            if need == 0 {
                return Err(Error::arg(format!("trailing nodes after position {i}")));
            }
            need = need - 1
                + match n {
                    Node::Leaf => 0,
                    Node::Vertex(_, a) => *a,
                };
        }
        if need != 0 || nodes.is_empty() {
            return Err(Error::arg("incomplete preorder sequence"));
        }
        Ok(PlanarTree { nodes })
    }

    /// Root vertex with the given children, in planar order.
    pub fn graft_children(label: L, children: &[PlanarTree<L>]) -> Self {
        let mut nodes = vec![Node::Vertex(label, children.len())];
        for c in children {
            nodes.extend(c.nodes.iter().cloned());
        }
        PlanarTree { nodes }
    }

    pub fn nodes(&self) -> &[Node<L>] {
        &self.nodes
    }

    pub fn arity(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf)).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len() - self.arity()
    }

    pub fn is_leaf(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Node positions of the vertices, in preorder.
    pub fn vertex_positions(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| matches!(self.nodes[i], Node::Vertex(..)))
            .collect()
    }

    pub fn label(&self, pos: usize) -> Option<&L> {
        match &self.nodes[pos] {
            Node::Vertex(l, _) => Some(l),
            Node::Leaf => None,
        }
    }

    pub fn node_arity(&self, pos: usize) -> usize {
        match &self.nodes[pos] {
            Node::Vertex(_, a) => *a,
            Node::Leaf => 0,
        }
    }

    /// One past the last node of the subtree rooted at `pos`.
    pub fn subtree_end(&self, pos: usize) -> usize {
        let mut need = 1usize;
        let mut i = pos;
        while need > 0 {
            need = need - 1 + self.node_arity(i);
            i += 1;
        }
        i
    }

    pub fn children(&self, pos: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.node_arity(pos));
        let mut c = pos + 1;
        for _ in 0..self.node_arity(pos) {
            out.push(c);
            c = self.subtree_end(c);
        }
        out
    }

    pub fn subtree(&self, pos: usize) -> PlanarTree<L> {
        PlanarTree {
            nodes: self.nodes[pos..self.subtree_end(pos)].to_vec(),
        }
    }

    /// Number of leaves strictly before node `pos`.
    pub fn leaves_before(&self, pos: usize) -> usize {
        self.nodes[..pos].iter().filter(|n| matches!(n, Node::Leaf)).count()
    }

    /// Number of vertices strictly between nodes `a < b`.
    pub fn vertices_between(&self, a: usize, b: usize) -> usize {
        self.nodes[a + 1..b]
            .iter()
            .filter(|n| matches!(n, Node::Vertex(..)))
            .count()
    }

    /// Number of vertices strictly after node `pos`.
    pub fn vertices_after(&self, pos: usize) -> usize {
        self.nodes[pos + 1..]
            .iter()
            .filter(|n| matches!(n, Node::Vertex(..)))
            .count()
    }

    /// Internal edges as (parent position, child slot, child position).
    pub fn internal_edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for p in self.vertex_positions() {
            for (slot, c) in self.children(p).into_iter().enumerate() {
                if matches!(self.nodes[c], Node::Vertex(..)) {
                    out.push((p, slot, c));
                }
            }
        }
        out
    }

    /// Replaces leaf number `leaf` (0-based, left to right) by `other`.
    pub fn graft(&self, leaf: usize, other: &PlanarTree<L>) -> PlanarTree<L> {
        let mut seen = 0;
        let mut nodes = Vec::with_capacity(self.nodes.len() + other.nodes.len());
        for n in &self.nodes {
            if matches!(n, Node::Leaf) {
                if seen == leaf {
                    nodes.extend(other.nodes.iter().cloned());
                    seen += 1;
                    continue;
                }
                seen += 1;
            }
            nodes.push(n.clone());
        }
        PlanarTree { nodes }
    }

    /// Replaces the vertex at `pos` by `replacement`, whose leaves receive the
    /// vertex's children in order.
    pub fn substitute(&self, pos: usize, replacement: &PlanarTree<L>) -> PlanarTree<L> {
        debug_assert_eq!(replacement.arity(), self.node_arity(pos));
        let kids: Vec<PlanarTree<L>> = self.children(pos).into_iter().map(|c| self.subtree(c)).collect();
        let mut nodes = self.nodes[..pos].to_vec();
        let mut k = 0;
        for n in &replacement.nodes {
            if matches!(n, Node::Leaf) {
                nodes.extend(kids[k].nodes.iter().cloned());
                k += 1;
            } else {
                nodes.push(n.clone());
            }
        }
        nodes.extend(self.nodes[self.subtree_end(pos)..].iter().cloned());
        PlanarTree { nodes }
    }

    /// Replaces the vertex at `pos` by a leaf, dropping its subtree.
    pub fn prune(&self, pos: usize) -> PlanarTree<L> {
        let mut nodes = self.nodes[..pos].to_vec();
        nodes.push(Node::Leaf);
        nodes.extend(self.nodes[self.subtree_end(pos)..].iter().cloned());
        PlanarTree { nodes }
    }

    /// Contracts the edge from the vertex at `parent` to its child in `slot`.
    ///
    /// Returns the two-vertex tree formed by the pair and the tree in which
    /// the pair became one vertex, labeled by `merged`, at the parent's
    /// position.
    pub fn contract<M: Clone + Eq>(
        &self,
        parent: usize,
        slot: usize,
        relabel: impl Fn(&L) -> M,
        merged: M,
    ) -> (PlanarTree<L>, PlanarTree<M>) {
        let kids = self.children(parent);
        let child = kids[slot];
        let p_label = self.label(parent).unwrap().clone();
        let c_label = self.label(child).unwrap().clone();
        let (p, q) = (kids.len(), self.node_arity(child));
        let pair = PlanarTree::corolla(p_label, p).graft(slot, &PlanarTree::corolla(c_label, q));
        let conv = |n: &Node<L>| match n {
            Node::Leaf => Node::Leaf,
            Node::Vertex(l, a) => Node::Vertex(relabel(l), *a),
        };
        let mut nodes: Vec<Node<M>> = self.nodes[..parent].iter().map(conv).collect();
        nodes.push(Node::Vertex(merged, p + q - 1));
        for (s, &c) in kids.iter().enumerate() {
            let range = if s == slot {
                c + 1..self.subtree_end(c)
            } else {
                c..self.subtree_end(c)
            };
            nodes.extend(self.nodes[range].iter().map(conv));
        }
        nodes.extend(self.nodes[self.subtree_end(parent)..].iter().map(conv));
        (pair, PlanarTree { nodes })
    }

    pub fn map_labels<M: Clone + Eq>(&self, f: impl Fn(&L) -> M) -> PlanarTree<M> {
        PlanarTree {
            nodes: self
                .nodes
                .iter()
                .map(|n| match n {
                    Node::Leaf => Node::Leaf,
                    Node::Vertex(l, a) => Node::Vertex(f(l), *a),
                })
                .collect(),
        }
    }
}

impl PlanarTree<usize> {
    /// Nested-list JSON: a leaf is `"|"`, a vertex is `[name, child, ...]`.
    pub fn to_json(&self, names: &[String]) -> Value {
        fn rec(t: &PlanarTree<usize>, pos: usize, names: &[String]) -> Value {
            match &t.nodes[pos] {
                Node::Leaf => Value::String("|".into()),
                Node::Vertex(g, _) => {
                    let mut v = vec![Value::String(names[*g].clone())];
                    v.extend(t.children(pos).into_iter().map(|c| rec(t, c, names)));
                    Value::Array(v)
                }
            }
        }
        rec(self, 0, names)
    }

    /// Inverse of [`Self::to_json`]; `arity_of` maps a name to (index, arity).
    pub fn from_json(v: &Value, arity_of: &dyn Fn(&str) -> Option<(usize, usize)>) -> Result<Self> {
        fn rec(v: &Value, arity_of: &dyn Fn(&str) -> Option<(usize, usize)>, out: &mut Vec<Node<usize>>) -> Result<()> {
            match v {
                Value::String(s) if s == "|" => {
                    out.push(Node::Leaf);
                    Ok(())
                }
                Value::Array(items) if !items.is_empty() => {
                    let name = items[0]
                        .as_str()
                        .ok_or_else(|| Error::Parse(format!("vertex name expected, got {}", items[0])))?;
                    let (g, a) = arity_of(name).ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
                    if items.len() - 1 != a {
                        return Err(Error::Parse(format!(
                            "generator {name:?} has arity {a}, given {} children",
                            items.len() - 1
                        )));
                    }
                    out.push(Node::Vertex(g, a));
                    for c in &items[1..] {
                        rec(c, arity_of, out)?;
                    }
                    Ok(())
                }
                other => Err(Error::Parse(format!("not a tree: {other}"))),
            }
        }
        let mut nodes = Vec::new();
        rec(v, arity_of, &mut nodes)?;
        PlanarTree::from_nodes(nodes)
    }

    pub fn display(&self, names: &[String]) -> String {
        fn rec(t: &PlanarTree<usize>, pos: usize, names: &[String]) -> String {
            match &t.nodes[pos] {
                Node::Leaf => "|".into(),
                Node::Vertex(g, _) => format!(
                    "{}({})",
                    names[*g],
                    t.children(pos).into_iter().map(|c| rec(t, c, names)).join(",")
                ),
            }
        }
        rec(self, 0, names)
    }
}

impl<L: fmt::Debug> fmt::Display for PlanarTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            match n {
                Node::Leaf => write!(f, "|")?,
                Node::Vertex(l, a) => write!(f, "<{l:?}/{a}>")?,
            }
        }
        Ok(())
    }
}

/// All planar trees with `n` leaves and `d` vertices labeled from `labels`,
/// where `labels(a)` lists the labels of arity `a`, in canonical order.
pub fn enumerate<L: Clone + Ord>(n: usize, d: usize, labels: &dyn Fn(usize) -> Vec<L>) -> Vec<PlanarTree<L>> {
    let mut memo = std::collections::HashMap::new();
    let mut out = enumerate_memo(n, d, labels, &mut memo);
    out.sort();
    out
}

fn enumerate_memo<L: Clone + Ord>(
    n: usize,
    d: usize,
    labels: &dyn Fn(usize) -> Vec<L>,
    memo: &mut std::collections::HashMap<(usize, usize), Vec<PlanarTree<L>>>,
) -> Vec<PlanarTree<L>> {
    if let Some(v) = memo.get(&(n, d)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if d == 0 {
        if n == 1 {
            out.push(PlanarTree::leaf());
        }
    } else if n >= 1 {
        for k in 2..=n {
            let ls = labels(k);
            if ls.is_empty() {
                continue;
            }
            // Children split n leaves and d-1 vertices, each child nonempty.
            let forests = forests(k, n, d - 1, labels, memo);
            for l in &ls {
                for f in &forests {
                    out.push(PlanarTree::graft_children(l.clone(), f));
                }
            }
        }
    }
    memo.insert((n, d), out.clone());
    out
}

fn forests<L: Clone + Ord>(
    k: usize,
    n: usize,
    d: usize,
    labels: &dyn Fn(usize) -> Vec<L>,
    memo: &mut std::collections::HashMap<(usize, usize), Vec<PlanarTree<L>>>,
) -> Vec<Vec<PlanarTree<L>>> {
    if k == 0 {
        return if n == 0 && d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for a in 1..=n.saturating_sub(k - 1) {
        for b in 0..=d {
            let firsts = enumerate_memo(a, b, labels, memo);
            if firsts.is_empty() {
                continue;
            }
            let rests = forests(k - 1, n - a, d - b, labels, memo);
            for f in &firsts {
                for r in &rests {
                    let mut v = vec![f.clone()];
                    v.extend(r.iter().cloned());
                    out.push(v);
                }
            }
        }
    }
    out
}
