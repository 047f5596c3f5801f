//! The Koszul complex `P¡ ∘ P` and the acyclicity test.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::engine::NsOperad;
use super::tree::PlanarTree;
use crate::linalg::{coordinates_at, ChainComplex, Matrix};
use crate::rational::Q;
use crate::{Error, Result};

/// A factor of the `P` side: (weight, arity, normal-form index).
pub type Factor = (usize, usize, usize);

/// A basis element of `C_k`: a basis vector of `P¡_(k)(r)` followed by `r`
/// elements of `P`, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KoszulCell {
    pub r: usize,
    pub dual: usize,
    pub factors: Vec<Factor>,
}

impl fmt::Display for KoszulCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dual[{}]#{} ⊗ (", self.r, self.dual)?;
        for (i, (w, a, j)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "P({a},{w})#{j}")?;
        }
        write!(f, ")")
    }
}

/// The weight `d`, arity `n` part of the Koszul complex, graded by the
/// weight `k` of the `P¡` factor.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub n: usize,
    pub d: usize,
    pub cells: Vec<Vec<KoszulCell>>,
    pub complex: ChainComplex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulEntry {
    pub arity: usize,
    pub weight: usize,
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub presentation: String,
    pub upto: usize,
    pub entries: Vec<KoszulEntry>,
    pub acyclic: bool,
}

impl KoszulReport {
    /// The first (arity, weight) with nonzero homology.
    pub fn witness(&self) -> Option<&KoszulEntry> {
        self.entries.iter().find(|e| e.betti.iter().any(|&b| b != 0))
    }
}

impl NsOperad {
    fn factor_tuples(&mut self, r: usize, n: usize, w: usize) -> Vec<Vec<Factor>> {
        if r == 0 {
            return if n == 0 && w == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for a in 1..=n + 1 - r {
            for wi in 0..=w.min(a - 1) {
                let dim = self.quotient_dims(a, wi);
                if dim == 0 {
                    continue;
                }
                let rests = self.factor_tuples(r - 1, n - a, w - wi);
                for j in 0..dim {
                    for rest in &rests {
                        let mut v = Vec::with_capacity(r);
                        v.push((wi, a, j));
                        v.extend(rest.iter().copied());
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    fn koszul_cells(&mut self, n: usize, d: usize, k: usize) -> Vec<KoszulCell> {
        let mut out = Vec::new();
        for r in 1..=n {
            let dual = self.koszul_dual_dims(r, k);
            if dual == 0 {
                continue;
            }
            let tuples = self.factor_tuples(r, n, d - k);
            for b in 0..dual {
                for t in &tuples {
                    out.push(KoszulCell {
                        r,
                        dual: b,
                        factors: t.clone(),
                    });
                }
            }
        }
        out
    }

    fn factor_odd(&mut self, f: &Factor) -> bool {
        let q = self.quotient(f.1, f.0);
        self.tree_odd(q.normal_tree(f.2))
    }

    /// `d_k : C_k -> C_(k-1)`: remove a bottom vertex of the `P¡` tree and
    /// compose it with the `P` factors on its leaves.
    fn koszul_differential(
        &mut self,
        d: usize,
        k: usize,
        source: &[KoszulCell],
        target: &[KoszulCell],
    ) -> Result<Matrix> {
        let index: HashMap<&KoszulCell, usize> = target.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = Matrix::zeros(target.len(), source.len());
        for (col, cell) in source.iter().enumerate() {
            let dual = self.koszul_dual_basis(cell.r, k);
            let trees = self.free_basis(cell.r, k);
            let mut image: BTreeMap<(usize, Vec<Factor>), Vec<Q>> = BTreeMap::new();
            for (ti, c) in dual.basis.row(cell.dual).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = &trees.trees()[ti];
                for v in t.vertex_positions() {
                    if t.children(v).iter().any(|&ch| t.label(ch).is_some()) {
                        continue;
                    }
                    let g = *t.label(v).unwrap();
                    let q = t.node_arity(v);
                    let l = t.leaves_before(v);
                    // Move v to the end of the dual block, past the factors
                    // before its leaves, then apply the degree -1 composition.
                    let v_susp = !self.presentation().is_odd(g) as usize;
                    let before: usize = cell.factors[..l].iter().map(|f| self.factor_odd(f) as usize).sum();
                    let others = self.suspended_odd_count(t) - v_susp;
                    let parity = v_susp * (self.suspended_odd_after(t, v) + before) + others + before;
                    let s = if parity % 2 == 1 { -c.clone() } else { c.clone() };
                    let mut composed = PlanarTree::corolla(g, q);
                    let mut weight = 1;
                    let mut arity = 0;
                    for i in (0..q).rev() {
                        let (w, a, j) = cell.factors[l + i];
                        let nf = self.quotient(a, w).normal_tree(j).clone();
                        composed = composed.graft(i, &nf);
                        weight += w;
                        arity += a;
                    }
                    let pruned = t.prune(v);
                    let r2 = pruned.arity();
                    let pos = self
                        .free_basis(r2, k - 1)
                        .position(&pruned)
                        .expect("pruned tree is a basis tree");
                    let size = self.free_dims(r2, k - 1);
                    for (j, x) in self
                        .quotient(arity, weight)
                        .project_tree(&composed)
                        .into_iter()
                        .enumerate()
                    {
                        if x.is_zero() {
                            continue;
                        }
                        let mut factors = cell.factors[..l].to_vec();
                        factors.push((weight, arity, j));
                        factors.extend_from_slice(&cell.factors[l + q..]);
                        let entry = image.entry((r2, factors)).or_insert_with(|| vec![Q::zero(); size]);
                        entry[pos] += &s * x;
                    }
                }
            }
            for ((r2, factors), v) in image {
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                let dual = self.koszul_dual_basis(r2, k - 1);
                let coords = coordinates_at(&dual.basis, &dual.marks, &v).ok_or_else(|| {
                    Error::Invariant(format!(
                        "image of {cell} leaves the Koszul dual in weight {} (arity {r2}, total weight {d})",
                        k - 1
                    ))
                })?;
                for (b, x) in coords.into_iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let key = KoszulCell {
                        r: r2,
                        dual: b,
                        factors: factors.clone(),
                    };
                    let row = *index
                        .get(&key)
                        .ok_or_else(|| Error::Invariant(format!("cell {key} missing from C_{}", k - 1)))?;
                    m.add_to(row, col, &x);
                }
            }
        }
        Ok(m)
    }

    /// Number of odd suspended vertices after `v` in preorder.
    fn suspended_odd_after(&self, t: &PlanarTree, v: usize) -> usize {
        (v + 1..t.nodes().len())
            .filter(|&i| t.label(i).is_some_and(|g| !self.presentation().is_odd(*g)))
            .count()
    }

    fn suspended_odd_count(&self, t: &PlanarTree) -> usize {
        t.vertex_positions()
            .into_iter()
            .filter(|&i| !self.presentation().is_odd(*t.label(i).unwrap()))
            .count()
    }

    /// The Koszul complex in arity `n` and total weight `d`, with `d^2 = 0`
    /// verified.
    pub fn koszul_complex(&mut self, n: usize, d: usize) -> Result<KoszulComplex> {
        let cells: Vec<Vec<KoszulCell>> = (0..=d).map(|k| self.koszul_cells(n, d, k)).collect();
        let mut diffs = Vec::with_capacity(d);
        for k in 1..=d {
            diffs.push(self.koszul_differential(d, k, &cells[k], &cells[k - 1])?);
        }
        let complex = ChainComplex::new(cells.iter().map(Vec::len).collect(), diffs)?;
        if let Some(k) = complex.square_failure() {
            let sq = complex.differential(k - 1).mul(complex.differential(k))?;
            for i in 0..sq.rows() {
                for j in 0..sq.cols() {
                    if !sq.get(i, j).is_zero() {
                        return Err(Error::Invariant(format!(
                            "Koszul d^2 != 0 at arity {n}, weight {d}: {} -> {}",
                            cells[k][j],
                            cells[k - 2][i]
                        )));
                    }
                }
            }
        }
        Ok(KoszulComplex { n, d, cells, complex })
    }

    /// Homology of the Koszul complex for `2 <= n <= upto` and every weight
    /// `1 <= d <= n - 1`.
    pub fn is_koszul_upto(&mut self, upto: usize) -> Result<KoszulReport> {
        let mut entries = Vec::new();
        for n in 2..=upto {
            for d in 1..n {
                let kc = self.koszul_complex(n, d)?;
                entries.push(KoszulEntry {
                    arity: n,
                    weight: d,
                    dims: kc.complex.dims().to_vec(),
                    betti: kc.complex.homology_ranks(),
                });
            }
        }
        let acyclic = entries.iter().all(|e| e.betti.iter().all(|&b| b == 0));
        Ok(KoszulReport {
            presentation: self.presentation().name().to_string(),
            upto,
            entries,
            acyclic,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Generator, Presentation};
    use super::*;
    use crate::rational::q;

    fn engine(name: &str) -> NsOperad {
        NsOperad::new(Presentation::builtin(name).unwrap())
    }

    #[test]
    fn acyclic_builtins() {
        for (name, upto) in [
            ("as", 6),
            ("dend", 5),
            ("dias", 5),
            ("mag", 5),
            ("nil", 5),
            ("free3", 5),
        ] {
            let report = engine(name).is_koszul_upto(upto).unwrap();
            assert!(report.acyclic, "{name}: {:?}", report.witness());
        }
    }

    #[test]
    fn euler_characteristic_vanishes() {
        let mut e = engine("dend");
        let kc = e.koszul_complex(4, 3).unwrap();
        assert_eq!(kc.complex.euler_characteristic(), 0);
        assert_eq!(kc.cells.len(), 4);
    }

    fn ternary(dual: bool) -> Presentation {
        // (xyz)uv = x(yzu)v = xy(zuv), or its dual with an odd generator
        let degree = if dual { 1 } else { 0 };
        let gens = vec![Generator {
            name: "t".into(),
            arity: 3,
            degree,
        }];
        let c = PlanarTree::corolla(0usize, 3);
        let rel = |i: usize, j: usize, coeff: i64| vec![(c.graft(i, &c), q(1)), (c.graft(j, &c), q(coeff))];
        Presentation::new("t", gens, vec![rel(0, 1, -1), rel(1, 2, -1)]).unwrap()
    }

    #[test]
    fn graded_ternary_square_zero() {
        for dual in [false, true] {
            let mut e = NsOperad::new(ternary(dual));
            for n in [5, 7] {
                for d in 1..=(n - 1) / 2 {
                    e.koszul_complex(n, d).map_err(|x| format!("dual={dual}: {x}")).unwrap();
                }
            }
            for (n, d, s) in [(7, 3, 2), (7, 3, 3), (9, 4, 3), (9, 4, 4)] {
                e.check_bar_square(n, d, s).unwrap();
            }
        }
    }

    #[test]
    fn graded_dual_matches() {
        let mut e = NsOperad::new(ternary(false));
        let dual = e.quadratic_dual_presentation().unwrap();
        assert_eq!(dual.generators()[0].degree, 1);
        let mut de = NsOperad::new(dual);
        for n in [5, 7, 9] {
            let d = (n - 1) / 2;
            assert_eq!(e.koszul_dual_dims(n, d), de.quotient_dims(n, d));
            assert_eq!(de.koszul_dual_dims(n, d), e.quotient_dims(n, d));
        }
    }
}
