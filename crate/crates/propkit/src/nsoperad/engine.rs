//! Quotients of the free operad, the signed edge contraction and the Koszul
//! dual cooperad.

use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use super::presentation::{Generator, Presentation};
use super::tree::PlanarTree;
use crate::linalg::{Matrix, Subspace};
use crate::rational::{sign, Q};
use crate::Result;

/// Trees of one arity and weight with a position index.
#[derive(Debug)]
pub struct TreeBasis {
    trees: Vec<PlanarTree>,
    index: HashMap<PlanarTree, usize>,
}

impl TreeBasis {
    fn new(trees: Vec<PlanarTree>) -> Self {
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TreeBasis { trees, index }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[PlanarTree] {
        &self.trees
    }

    pub fn position(&self, t: &PlanarTree) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// `P_(w)(n)` as free trees modulo the ideal, with normal forms at the
/// free columns of the ideal.
#[derive(Debug)]
pub struct Quotient {
    free: Rc<TreeBasis>,
    ideal: Subspace,
    normal: Vec<usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn free(&self) -> &TreeBasis {
        &self.free
    }

    /// The tree representing basis element `j`.
    pub fn normal_tree(&self, j: usize) -> &PlanarTree {
        &self.free.trees[self.normal[j]]
    }

    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        self.ideal.quotient_coords(v)
    }

    pub fn project_tree(&self, t: &PlanarTree) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.free.len()];
        v[self.free.position(t).expect("tree in basis")] = Q::one();
        self.project(&v)
    }
}

/// A basis of `P¡_(d)(n)` as rows over the free trees, with the columns at
/// which the basis is the identity.
#[derive(Debug)]
pub struct DualBasis {
    pub basis: Matrix,
    pub marks: Vec<usize>,
}

impl DualBasis {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

/// Computation context for one presentation; all bases are cached.
pub struct NsOperad {
    pres: Presentation,
    free: HashMap<(usize, usize), Rc<TreeBasis>>,
    quotients: HashMap<(usize, usize), Rc<Quotient>>,
    duals: HashMap<(usize, usize), Rc<DualBasis>>,
}

/// Sign of the pairing between weight-two trees and their duals:
/// `(-1)^((i-1)(q-1))` for a child of arity `q` in slot `i`.
pub fn pairing_sign(t: &PlanarTree) -> Q {
    let (p, slot, c) = t.internal_edges()[0];
    let _ = p;
    sign(slot * (t.node_arity(c) - 1))
}

impl NsOperad {
    pub fn new(pres: Presentation) -> Self {
        NsOperad {
            pres,
            free: HashMap::new(),
            quotients: HashMap::new(),
            duals: HashMap::new(),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// Koszul sign of moving the child at `c` next to its parent at `p`
    /// past the vertices in between; `suspended` shifts every degree by one.
    pub(super) fn edge_sign(&self, t: &PlanarTree, p: usize, c: usize, suspended: bool) -> Q {
        let odd = |pos: usize| self.pres.is_odd(*t.label(pos).unwrap()) != suspended;
        if !odd(c) {
            return Q::one();
        }
        let between = (p + 1..c).filter(|&i| t.label(i).is_some() && odd(i)).count();
        sign(between)
    }

    /// Parity of the total degree of the vertices at `positions`.
    pub(super) fn odd_count(&self, t: &PlanarTree, positions: impl Iterator<Item = usize>) -> bool {
        positions
            .filter(|&i| t.label(i).is_some_and(|g| self.pres.is_odd(*g)))
            .count()
            % 2
            == 1
    }

    pub(super) fn tree_odd(&self, t: &PlanarTree) -> bool {
        self.odd_count(t, 0..t.nodes().len())
    }

    /// `a ∘_leaf b` in the free operad with its Koszul sign relative to the
    /// preorder basis.
    pub(super) fn graft_signed(&self, a: &PlanarTree, leaf: usize, b: &PlanarTree) -> (PlanarTree, Q) {
        let t = a.graft(leaf, b);
        let leaf_pos = (0..a.nodes().len())
            .filter(|&i| a.label(i).is_none())
            .nth(leaf)
            .expect("leaf exists");
        let s = if self.tree_odd(b) && self.odd_count(a, leaf_pos..a.nodes().len()) {
            -Q::one()
        } else {
            Q::one()
        };
        (t, s)
    }

    pub fn free_basis(&mut self, n: usize, d: usize) -> Rc<TreeBasis> {
        if let Some(b) = self.free.get(&(n, d)) {
            return b.clone();
        }
        let b = Rc::new(TreeBasis::new(self.pres.trees(n, d)));
        self.free.insert((n, d), b.clone());
        b
    }

    pub fn free_dims(&mut self, n: usize, d: usize) -> usize {
        self.free_basis(n, d).len()
    }

    /// Weight `d` part of the ideal generated by the relations, spanned by
    /// substituting relations at every edge of every tree.
    pub fn quotient(&mut self, n: usize, w: usize) -> Rc<Quotient> {
        if let Some(q) = self.quotients.get(&(n, w)) {
            return q.clone();
        }
        let free = self.free_basis(n, w);
        let ideal = if w < 2 {
            Subspace::zero(free.len())
        } else if w == 2 {
            self.pres.relation_space(n)
        } else {
            let mut contexts = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for t in free.trees() {
                for (p, slot, _) in t.internal_edges() {
                    let (_, ctx) = t.contract(p, slot, |l| Some(*l), None);
                    if seen.insert(ctx.clone()) {
                        contexts.push((ctx, p));
                    }
                }
            }
            let mut rows = Vec::new();
            for (ctx, hole) in &contexts {
                let r = ctx.node_arity(*hole);
                let rel = self.pres.relation_space(r);
                if rel.dim() == 0 {
                    continue;
                }
                let inner = self.free_basis(r, 2);
                let generic = ctx.map_labels(|l| l.unwrap_or(usize::MAX));
                for i in 0..rel.dim() {
                    let mut v = vec![Q::zero(); free.len()];
                    for (k, c) in rel.basis().row(i).iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let pair = &inner.trees()[k];
                        let t = generic.substitute(*hole, pair).map_labels(|l| *l);
                        let child = t.children(*hole)[pair.internal_edges()[0].1];
                        let s = self.edge_sign(&t, *hole, child, false);
                        v[free.position(&t).expect("filled context is a basis tree")] += s * c;
                    }
                    rows.push(v);
                }
            }
            if rows.is_empty() {
                Subspace::zero(free.len())
            } else {
                Subspace::span(&Matrix::from_rows(free.len(), rows).expect("equal rows"))
            }
        };
        let normal = ideal.free_columns();
        let q = Rc::new(Quotient { free, ideal, normal });
        self.quotients.insert((n, w), q.clone());
        q
    }

    pub fn quotient_dims(&mut self, n: usize, w: usize) -> usize {
        self.quotient(n, w).dim()
    }

    /// Matrix of the signed contraction of each internal edge into
    /// `F_(2)/R`, with rows indexed by (context, quotient basis element).
    ///
    /// The edge from parent `p` to child `c` carries the Koszul sign of
    /// moving the suspended child past the vertices strictly between `p` and
    /// `c` in preorder; for degree-zero generators that is
    /// `(-1)^(vertices between)`.
    pub fn edge_contraction_matrix(&mut self, n: usize, d: usize) -> Matrix {
        let free = self.free_basis(n, d);
        let mut rows: HashMap<(PlanarTree<Option<usize>>, usize), usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, Q)> = Vec::new();
        for (col, t) in free.trees().iter().enumerate() {
            for (p, slot, c) in t.internal_edges() {
                let (pair, ctx) = t.contract(p, slot, |l| Some(*l), None);
                let quot = self.quotient(pair.arity(), 2);
                let s = self.edge_sign(t, p, c, true);
                for (j, x) in quot.project_tree(&pair).into_iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let next = rows.len();
                    let r = *rows.entry((ctx.clone(), j)).or_insert(next);
                    entries.push((r, col, &s * x));
                }
            }
        }
        let mut m = Matrix::zeros(rows.len(), free.len());
        for (r, c, x) in entries {
            m.add_to(r, c, &x);
        }
        m
    }

    /// `P¡_(d)(n)`: trees whose signed contraction vanishes modulo `R`.
    pub fn koszul_dual_basis(&mut self, n: usize, d: usize) -> Rc<DualBasis> {
        if let Some(b) = self.duals.get(&(n, d)) {
            return b.clone();
        }
        let size = self.free_dims(n, d);
        let b = if d < 2 {
            DualBasis {
                basis: Matrix::identity(size),
                marks: (0..size).collect(),
            }
        } else {
            let (basis, marks) = self.edge_contraction_matrix(n, d).nullspace_marked();
            DualBasis { basis, marks }
        };
        let b = Rc::new(b);
        self.duals.insert((n, d), b.clone());
        b
    }

    pub fn koszul_dual_dims(&mut self, n: usize, d: usize) -> usize {
        self.koszul_dual_basis(n, d).dim()
    }

    /// The presentation `(V*, R⊥)`, with `R⊥` taken under the signed pairing
    /// of [`pairing_sign`]. Generator names gain or lose a trailing `*`.
    pub fn quadratic_dual_presentation(&mut self) -> Result<Presentation> {
        let gens: Vec<Generator> = self
            .pres
            .generators()
            .iter()
            .map(|g| Generator {
                name: match g.name.strip_suffix('*') {
                    Some(s) => s.to_string(),
                    None => format!("{}*", g.name),
                },
                arity: g.arity,
                degree: g.arity as i64 - 2 - g.degree,
            })
            .collect();
        let mut spaces = Vec::new();
        for n in self.pres.quadratic_arities() {
            let basis = self.free_basis(n, 2);
            let weights: Vec<Q> = basis.trees().iter().map(pairing_sign).collect();
            spaces.push((n, self.pres.relation_space(n).complement(&weights)));
        }
        let name = match self.pres.name().strip_suffix('!') {
            Some(s) => s.to_string(),
            None => format!("{}!", self.pres.name()),
        };
        self.pres.with_relation_spaces(&name, gens, &spaces)
    }
}
