//! Weight-graded dimension tables of reduced S-bimodules.
//!
//! A [`DimTable`] stores `dim M_(ρ)(m, n)` for `m` outputs, `n` inputs and
//! weight `ρ` inside a finite [`Window`]. Values are exact rationals: the
//! connected product is computed by the groupoid-cardinality formula, which
//! agrees with the true dimension whenever no composite has a nontrivial
//! automorphism, and can be fractional otherwise.
//!
//! A table may carry a *leg slope* `s`: every nonzero entry of weight `ρ >= 1`
//! has `m + n <= s·ρ + 2`, and weight 0 holds at most the unit `(1,1,0)`.
//! Lookups outside the window return zero only when the slope forces it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, q, Q};
use crate::{Error, Result};

mod catalog;
mod oracle;
mod product;

pub use catalog::{ActionKind, Catalog, CatalogEntry, ClosedRule, Rule, CATALOG_ENV};
pub use oracle::{box_dims_oracle, boxc_dims_oracle, OracleCount, OracleSide};
pub use product::{
    box_dims, boxc_dims, euler_koszul, euler_koszul_table, factor_windows, internal_edge_bound, sym_exp_dims,
};

/// Inclusive bounds `m <= m_max`, `n <= n_max`, `ρ <= rho_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub m: usize,
    pub n: usize,
    pub rho: usize,
}

impl Window {
    pub fn new(m: usize, n: usize, rho: usize) -> Self {
        Window { m, n, rho }
    }

    pub fn contains(&self, m: usize, n: usize, rho: usize) -> bool {
        m <= self.m && n <= self.n && rho <= self.rho
    }

    pub fn covers(&self, other: &Window) -> bool {
        self.contains(other.m, other.n, other.rho)
    }

    pub fn transpose(&self) -> Window {
        Window {
            m: self.n,
            n: self.m,
            rho: self.rho,
        }
    }

    /// Parses `"m,n,rho"`.
    pub fn parse(s: &str) -> Result<Window> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("window {s:?} is not m,n,rho")))?;
        match parts[..] {
            [m, n, rho] => Ok(Window { m, n, rho }),
            _ => Err(Error::Parse(format!("window {s:?} is not m,n,rho"))),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.m, self.n, self.rho)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    entries: BTreeMap<(usize, usize, usize), Q>,
    window: Window,
    slope: Option<usize>,
}

impl DimTable {
    pub fn new(window: Window, slope: Option<usize>) -> Self {
        DimTable {
            entries: BTreeMap::new(),
            window,
            slope,
        }
    }

    /// Builds a table from a rule evaluated on every point of the window.
    pub fn from_fn(window: Window, slope: Option<usize>, mut f: impl FnMut(usize, usize, usize) -> Q) -> Self {
        let mut t = DimTable::new(window, slope);
        for m in 1..=window.m {
            for n in 1..=window.n {
                for rho in 0..=window.rho {
                    let v = f(m, n, rho);
                    if !v.is_zero() {
                        t.entries.insert((m, n, rho), v);
                    }
                }
            }
        }
        t
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn slope(&self) -> Option<usize> {
        self.slope
    }

    pub fn set(&mut self, m: usize, n: usize, rho: usize, v: Q) -> Result<()> {
        if m == 0 || n == 0 {
            return Err(Error::arg(format!("({m},{n},{rho}): tables are reduced")));
        }
        if !self.window.contains(m, n, rho) {
            return Err(Error::arg(format!("({m},{n},{rho}) is outside window {}", self.window)));
        }
        if v.is_zero() {
            self.entries.remove(&(m, n, rho));
        } else {
            self.entries.insert((m, n, rho), v);
        }
        Ok(())
    }

    /// Whether the leg slope proves the entry vanishes.
    pub fn forced_zero(&self, m: usize, n: usize, rho: usize) -> bool {
        if m == 0 || n == 0 {
            return true;
        }
        match self.slope {
            Some(_) if rho == 0 => (m, n) != (1, 1),
            Some(s) => m + n > s * rho + 2,
            None => false,
        }
    }

    pub fn get(&self, m: usize, n: usize, rho: usize) -> Result<Q> {
        if self.window.contains(m, n, rho) || self.forced_zero(m, n, rho) {
            Ok(self.entries.get(&(m, n, rho)).cloned().unwrap_or_else(Q::zero))
        } else {
            Err(Error::WindowOverflow { m, n, rho })
        }
    }

    /// Nonzero entries in `(m, n, ρ)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), &Q)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    /// The same data seen through a smaller window.
    pub fn restrict_window(&self, window: Window) -> Result<DimTable> {
        if !self.window.covers(&window) {
            return Err(Error::cap(format!(
                "window {window} is not inside table window {}",
                self.window
            )));
        }
        let mut t = DimTable::new(window, self.slope);
        for ((m, n, rho), v) in self.entries() {
            if window.contains(m, n, rho) {
                t.entries.insert((m, n, rho), v.clone());
            }
        }
        Ok(t)
    }

    /// Weight-`k` part only.
    pub fn weight_part(&self, k: usize) -> DimTable {
        let mut t = DimTable::new(self.window, self.slope);
        for ((m, n, rho), v) in self.entries() {
            if rho == k {
                t.entries.insert((m, n, rho), v.clone());
            }
        }
        t
    }

    /// Multiplies the weight-`ρ` part by `(-1)^ρ`.
    pub fn weight_signed(&self) -> DimTable {
        let mut t = self.clone();
        for ((_, _, rho), v) in t.entries.iter_mut() {
            if *rho % 2 == 1 {
                *v = -v.clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> DimTable {
        let mut t = DimTable::new(self.window, self.slope);
        if !c.is_zero() {
            for (k, v) in self.entries() {
                t.entries.insert(k, v * c);
            }
        }
        t
    }

    /// Entrywise sum on the common window.
    pub fn add(&self, other: &DimTable) -> Result<DimTable> {
        let w = Window::new(
            self.window.m.min(other.window.m),
            self.window.n.min(other.window.n),
            self.window.rho.min(other.window.rho),
        );
        let slope = match (self.slope, other.slope) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let mut t = DimTable::new(w, slope);
        for m in 1..=w.m {
            for n in 1..=w.n {
                for rho in 0..=w.rho {
                    let v = self.get(m, n, rho)? + other.get(m, n, rho)?;
                    t.set(m, n, rho, v)?;
                }
            }
        }
        Ok(t)
    }

    /// Smallest slope consistent with the stored entries, if any is.
    pub fn inferred_slope(&self) -> Option<usize> {
        let mut s = 0;
        for ((m, n, rho), _) in self.entries() {
            if rho == 0 {
                if (m, n) != (1, 1) {
                    return None;
                }
                continue;
            }
            let need = (m + n).saturating_sub(2);
            s = s.max(need.div_ceil(rho));
        }
        Some(s)
    }

    /// True when the slope claim holds for every stored entry.
    pub fn slope_is_consistent(&self) -> bool {
        self.entries().all(|((m, n, rho), _)| !self.forced_zero(m, n, rho))
    }

    /// `(1,1,0) = 1` and no other weight-0 entry.
    pub fn is_connected_weight_graded(&self) -> bool {
        self.entries.get(&(1, 1, 0)).is_some_and(One::is_one)
            && self.entries().all(|((m, n, rho), _)| rho > 0 || (m, n) == (1, 1))
    }

    pub fn all_integral(&self) -> bool {
        self.entries.values().all(|v| v.is_integer())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    /// CSV rows `m,n,rho,dim` over the whole window, zeros included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,rho,dim\n");
        for m in 1..=self.window.m {
            for n in 1..=self.window.n {
                for rho in 0..=self.window.rho {
                    let v = self.entries.get(&(m, n, rho)).cloned().unwrap_or_else(Q::zero);
                    out.push_str(&format!("{m},{n},{rho},{}\n", fmt_q(&v)));
                }
            }
        }
        out
    }

    /// CSV rows for the nonzero entries only.
    pub fn to_csv_nonzero(&self) -> String {
        let mut out = String::from("m,n,rho,dim\n");
        for ((m, n, rho), v) in self.entries() {
            out.push_str(&format!("{m},{n},{rho},{}\n", fmt_q(v)));
        }
        out
    }
}

/// The unit `I`: a single entry `(1,1,0) = 1`.
pub fn unit_table(window: Window) -> DimTable {
    DimTable::from_fn(
        window,
        Some(0),
        |m, n, rho| {
            if (m, n, rho) == (1, 1, 0) {
                q(1)
            } else {
                Q::zero()
            }
        },
    )
}

/// `M^op(m, n) = M(n, m)`.
pub fn opposite(table: &DimTable) -> DimTable {
    let mut t = DimTable::new(table.window.transpose(), table.slope);
    for ((m, n, rho), v) in table.entries() {
        t.entries.insert((n, m, rho), v.clone());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_queries() {
        let u = unit_table(Window::new(3, 3, 2));
        assert_eq!(u.get(1, 1, 0).unwrap(), q(1));
        assert_eq!(u.get(2, 1, 0).unwrap(), q(0));
        assert_eq!(u.get(1, 1, 1).unwrap(), q(0));
        assert_eq!(u.get(9, 9, 0).unwrap(), q(0));
        assert!(matches!(u.get(1, 1, 9), Err(Error::WindowOverflow { .. })));
        assert!(u.is_connected_weight_graded());
    }

    #[test]
    fn opposite_examples() {
        let lie = Catalog::builtin().table("lie", Window::new(1, 4, 3)).unwrap();
        let op = opposite(&lie);
        assert_eq!(op.get(3, 1, 2).unwrap(), q(2));
        assert_eq!(opposite(&op), lie);
        let u = unit_table(Window::new(2, 2, 1));
        assert_eq!(opposite(&u), u);
    }

    #[test]
    fn slope_bookkeeping() {
        let com = Catalog::builtin().table("com", Window::new(1, 5, 4)).unwrap();
        assert_eq!(com.inferred_slope(), Some(1));
        assert!(com.slope_is_consistent());
        assert_eq!(com.get(1, 9, 2).unwrap(), q(0));
        assert!(com.get(1, 9, 8).is_err());
        assert_eq!(Window::parse("5,5,4").unwrap(), Window::new(5, 5, 4));
        assert!(Window::parse("5,5").is_err());
    }

    #[test]
    fn csv_dump() {
        let u = unit_table(Window::new(1, 1, 0));
        assert_eq!(u.to_csv(), "m,n,rho,dim\n1,1,0,1\n");
    }
}
