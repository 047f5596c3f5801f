//! The bar construction on the augmentation ideal of `P`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::engine::NsOperad;
use super::tree::{enumerate, PlanarTree};
use crate::linalg::Matrix;
use crate::rational::Q;
use crate::{Error, Result};

/// A vertex label of a bar tree: (weight, index in the normal-form basis of
/// `P_(weight)(arity)`).
pub type BarLabel = (usize, usize);

impl NsOperad {
    /// Basis of `B_s(P)(n)` in total weight `d`: planar trees with `s`
    /// vertices decorated by positive-weight normal forms.
    pub fn bar_basis(&mut self, n: usize, d: usize, s: usize) -> Vec<PlanarTree<BarLabel>> {
        let mut labels: HashMap<usize, Vec<BarLabel>> = HashMap::new();
        for a in 2..=n {
            let mut ls = Vec::new();
            for w in 1..=d {
                for i in 0..self.quotient_dims(a, w) {
                    ls.push((w, i));
                }
            }
            labels.insert(a, ls);
        }
        enumerate(n, s, &|a| labels.get(&a).cloned().unwrap_or_default())
            .into_iter()
            .filter(|t| {
                t.vertex_positions()
                    .iter()
                    .map(|&p| t.label(p).unwrap().0)
                    .sum::<usize>()
                    == d
            })
            .collect()
    }

    fn label_odd(&mut self, arity: usize, l: &BarLabel) -> bool {
        let q = self.quotient(arity, l.0);
        self.tree_odd(q.normal_tree(l.1))
    }

    /// `d : B_s -> B_(s-1)` contracting one internal edge and composing the
    /// two labels in `P`. Labels carry their degree plus one; the sign is that
    /// of passing the vertices before the parent and moving the child next
    /// to it. Columns index `bar_basis(n, d, s)`, rows
    /// `bar_basis(n, d, s - 1)`.
    pub fn bar_codifferential(&mut self, n: usize, d: usize, s: usize) -> Result<Matrix> {
        if s == 0 {
            return Err(Error::arg("the bar codifferential starts in degree 1"));
        }
        let source = self.bar_basis(n, d, s);
        let target = self.bar_basis(n, d, s - 1);
        let index: HashMap<&PlanarTree<BarLabel>, usize> = target.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = Matrix::zeros(target.len(), source.len());
        for (col, t) in source.iter().enumerate() {
            for (p, slot, c) in t.internal_edges() {
                let (pa, ca) = (t.node_arity(p), t.node_arity(c));
                let (lp, lc) = (*t.label(p).unwrap(), *t.label(c).unwrap());
                let mut passed = 0;
                for i in 0..p {
                    if let Some(l) = t.label(i) {
                        if !self.label_odd(t.node_arity(i), l) {
                            passed += 1;
                        }
                    }
                }
                let mut moved = 0;
                for i in p + 1..c {
                    if let Some(l) = t.label(i) {
                        if !self.label_odd(t.node_arity(i), l) {
                            moved += 1;
                        }
                    }
                }
                let child_suspended_odd = !self.label_odd(ca, &lc);
                let odd = (passed % 2 == 1) != (child_suspended_odd && moved % 2 == 1);
                let ks = if odd { -Q::one() } else { Q::one() };
                let a = self.quotient(pa, lp.0).normal_tree(lp.1).clone();
                let b = self.quotient(ca, lc.0).normal_tree(lc.1).clone();
                let (composed, gs) = self.graft_signed(&a, slot, &b);
                let w = lp.0 + lc.0;
                let target_q = self.quotient(pa + ca - 1, w);
                for (j, x) in target_q.project_tree(&composed).into_iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (_, merged) = t.contract(p, slot, |l| *l, (w, j));
                    let row = *index.get(&merged).ok_or_else(|| {
                        Error::Invariant(format!("contracted tree {merged} missing from the bar basis"))
                    })?;
                    m.add_to(row, col, &(&ks * &gs * x));
                }
            }
        }
        Ok(m)
    }

    /// Checks `d^2 = 0` on `B_s -> B_(s-2)`.
    pub fn check_bar_square(&mut self, n: usize, d: usize, s: usize) -> Result<()> {
        if s < 2 {
            return Ok(());
        }
        let outer = self.bar_codifferential(n, d, s - 1)?;
        let inner = self.bar_codifferential(n, d, s)?;
        let sq = outer.mul(&inner)?;
        if sq.is_zero() {
            return Ok(());
        }
        let source = self.bar_basis(n, d, s);
        let target = self.bar_basis(n, d, s - 2);
        let (i, j) = (0..sq.rows())
            .flat_map(|i| (0..sq.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !sq.get(i, j).is_zero())
            .expect("nonzero matrix has a nonzero entry");
        Err(Error::Invariant(format!(
            "bar d^2 != 0 at arity {n}, weight {d}: {} -> {}",
            source[j], target[i]
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::super::Presentation;
    use super::*;

    #[test]
    fn square_zero() {
        for name in ["as", "dend", "dias", "mag", "nil"] {
            let mut e = NsOperad::new(Presentation::builtin(name).unwrap());
            for n in 2..=5 {
                for d in 1..n {
                    for s in 2..=4.min(d) {
                        e.check_bar_square(n, d, s).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_kernel_is_dual() {
        for name in ["as", "dend", "dias", "nil"] {
            let mut e = NsOperad::new(Presentation::builtin(name).unwrap());
            for n in 3..=5 {
                let d = n - 1;
                let m = e.bar_codifferential(n, d, d).unwrap();
                assert_eq!(m.cols() - m.rank(), e.koszul_dual_dims(n, d), "{name} {n}");
            }
        }
    }

    #[test]
    fn free_three_ary_square_zero() {
        let mut e = NsOperad::new(Presentation::builtin("free3").unwrap());
        for n in 3..=6 {
            for d in 2..n {
                for s in 2..=d.min(4) {
                    e.check_bar_square(n, d, s).unwrap();
                }
            }
        }
    }
}
