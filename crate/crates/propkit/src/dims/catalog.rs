//! Builtin dimension tables and their JSON overrides.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{boxc_dims, factor_windows, opposite, DimTable, Window};
use crate::rational::{binomial, factorial, parse_q, q, Q};
use crate::{Error, Result};

/// Environment variable naming a JSON catalog that overrides the builtin one.
pub const CATALOG_ENV: &str = "PROPKIT_CATALOG";

/// How the symmetric groups act on a basis, as far as the structural oracle
/// needs to know.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    /// Every permutation fixes every basis vector.
    Trivial,
    /// A disjoint union of copies of the regular representation of `S_m × S_n`.
    Regular,
    /// Not a permutation representation (signs, or unknown).
    Other,
}

/// A dimension given in closed form as a function of `(m, n, ρ)`.
pub type ClosedRule = fn(usize, usize, usize) -> Q;

#[derive(Debug, Clone)]
pub enum Rule {
    Closed(ClosedRule),
    /// `top ⊠_c bottom`.
    Product(String, String),
    Opposite(String),
    Fixed(DimTable),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub rule: Rule,
    pub slope: Option<usize>,
    pub action: ActionKind,
    pub ns_flag: bool,
    pub dual_name: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

fn arity_one(m: usize, n: usize, rho: usize, dim: impl Fn(usize) -> BigInt) -> Q {
    if m == 1 && n >= 1 && rho + 1 == n {
        Q::from_integer(dim(n))
    } else {
        Q::zero()
    }
}

fn catalan(n: usize) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}

fn unit_rule(m: usize, n: usize, rho: usize) -> Q {
    if (m, n, rho) == (1, 1, 0) {
        q(1)
    } else {
        Q::zero()
    }
}

fn com(m: usize, n: usize, rho: usize) -> Q {
    arity_one(m, n, rho, |_| BigInt::from(1))
}

fn lie(m: usize, n: usize, rho: usize) -> Q {
    arity_one(m, n, rho, |n| factorial(n - 1))
}

fn assoc(m: usize, n: usize, rho: usize) -> Q {
    arity_one(m, n, rho, factorial)
}

fn dias(m: usize, n: usize, rho: usize) -> Q {
    arity_one(m, n, rho, |n| BigInt::from(n) * factorial(n))
}

fn dend(m: usize, n: usize, rho: usize) -> Q {
    arity_one(m, n, rho, |n| catalan(n) * factorial(n))
}

/// Planar trees with `n` leaves and `d` internal vertices, each of arity >= 2.
pub(crate) fn planar_tree_count(n: usize, d: usize) -> BigInt {
    // t[n][d] by root arity: a root with k >= 2 children whose subtrees share n leaves, d-1 vertices.
    let mut t = vec![vec![BigInt::zero(); d + 1]; n + 1];
    if n >= 1 {
        t[1][0] = BigInt::from(1);
    }
    // f[k][a][b]: ordered forests of k trees with a leaves, b vertices.
    for nn in 2..=n {
        for dd in 1..=d {
            let mut total = BigInt::zero();
            let mut forest = vec![vec![BigInt::zero(); dd]; nn + 1];
            forest[0][0] = BigInt::from(1);
            for k in 1..=nn {
                let mut next = vec![vec![BigInt::zero(); dd]; nn + 1];
                for a in 0..=nn {
                    for b in 0..dd {
                        if forest[a][b].is_zero() {
                            continue;
                        }
                        for a2 in 1..=nn - a {
                            for b2 in 0..dd - b {
                                if a2 < nn && !t[a2][b2].is_zero() {
                                    next[a + a2][b + b2] += &forest[a][b] * &t[a2][b2];
                                }
                            }
                        }
                    }
                }
                forest = next;
                if k >= 2 {
                    total += &forest[nn][dd - 1];
                }
            }
            t[nn][dd] = total;
        }
    }
    t[n][d].clone()
}

fn free_all(m: usize, n: usize, rho: usize) -> Q {
    if m != 1 || n == 0 {
        return Q::zero();
    }
    Q::from_integer(factorial(n) * planar_tree_count(n, rho))
}

fn free_dual(m: usize, n: usize, rho: usize) -> Q {
    match (m, n, rho) {
        (1, 1, 0) => q(1),
        (1, n, 1) if n >= 2 => Q::from_integer(factorial(n)),
        _ => Q::zero(),
    }
}

fn bilie_dual(m: usize, n: usize, rho: usize) -> Q {
    if m + n == rho + 2 {
        q(1)
    } else {
        Q::zero()
    }
}

fn epsbi_dual(m: usize, n: usize, rho: usize) -> Q {
    if m + n == rho + 2 {
        Q::from_integer(factorial(m) * factorial(n))
    } else {
        Q::zero()
    }
}

macro_rules! vector_rules {
    ($($sym:ident, $ext:ident, $v:expr);*) => {
        $(
            fn $sym(m: usize, n: usize, rho: usize) -> Q {
                if (m, n) == (1, 1) {
                    Q::from_integer(binomial($v + rho - 1, rho))
                } else {
                    Q::zero()
                }
            }
            fn $ext(m: usize, n: usize, rho: usize) -> Q {
                if (m, n) == (1, 1) {
                    Q::from_integer(binomial($v, rho))
                } else {
                    Q::zero()
                }
            }
        )*
    };
}

vector_rules!(sym1, ext1, 1; sym2, ext2, 2; sym3, ext3, 3; sym4, ext4, 4);

impl Catalog {
    pub fn builtin() -> Self {
        use ActionKind::*;
        let mut c = Catalog {
            entries: BTreeMap::new(),
        };
        let mut add = |name: &str, rule: Rule, slope, action, ns_flag, dual: Option<&str>| {
            c.entries.insert(
                name.to_string(),
                CatalogEntry {
                    name: name.to_string(),
                    rule,
                    slope,
                    action,
                    ns_flag,
                    dual_name: dual.map(str::to_string),
                },
            );
        };
        add("unit", Rule::Closed(unit_rule), Some(0), Trivial, true, Some("unit"));
        add("com", Rule::Closed(com), Some(1), Trivial, false, Some("lie"));
        add("lie", Rule::Closed(lie), Some(1), Other, false, Some("com"));
        add("as", Rule::Closed(assoc), Some(1), Regular, true, Some("as"));
        add("leib", Rule::Closed(assoc), Some(1), Regular, false, Some("zinb"));
        add("zinb", Rule::Closed(assoc), Some(1), Regular, false, Some("leib"));
        add("dias", Rule::Closed(dias), Some(1), Regular, true, Some("dend"));
        add("dend", Rule::Closed(dend), Some(1), Regular, true, Some("dias"));
        add("free", Rule::Closed(free_all), None, Regular, true, Some("free-dual"));
        add("free-dual", Rule::Closed(free_dual), None, Regular, true, Some("free"));
        add(
            "bilie",
            Rule::Product("lie".into(), "lie-op".into()),
            Some(1),
            Other,
            false,
            Some("bilie-dual"),
        );
        add(
            "bilie-dual",
            Rule::Closed(bilie_dual),
            Some(1),
            Other,
            false,
            Some("bilie"),
        );
        add(
            "epsbi",
            Rule::Product("as".into(), "as-op".into()),
            Some(1),
            Regular,
            false,
            Some("epsbi-dual"),
        );
        add(
            "epsbi-dual",
            Rule::Closed(epsbi_dual),
            Some(1),
            Regular,
            false,
            Some("epsbi"),
        );
        let vec_rules: [(&str, ClosedRule, &str); 8] = [
            ("sym1", sym1, "ext1"),
            ("sym2", sym2, "ext2"),
            ("sym3", sym3, "ext3"),
            ("sym4", sym4, "ext4"),
            ("ext1", ext1, "sym1"),
            ("ext2", ext2, "sym2"),
            ("ext3", ext3, "sym3"),
            ("ext4", ext4, "sym4"),
        ];
        for (name, rule, dual) in vec_rules {
            add(name, Rule::Closed(rule), Some(0), Trivial, true, Some(dual));
        }
        c
    }

    /// The builtin catalog, overridden by the file named in `PROPKIT_CATALOG` if set.
    pub fn from_env() -> Result<Self> {
        let mut c = Catalog::builtin();
        if let Ok(path) = std::env::var(CATALOG_ENV) {
            if !path.is_empty() {
                c.load_file(Path::new(&path))?;
            }
        }
        Ok(c)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Looks up `name`; a `-op` suffix gives the opposite of an existing entry.
    pub fn entry(&self, name: &str) -> Result<CatalogEntry> {
        if let Some(e) = self.entries.get(name) {
            return Ok(e.clone());
        }
        if let Some(base) = name.strip_suffix("-op") {
            let e = self.entry(base)?;
            return Ok(CatalogEntry {
                name: name.to_string(),
                rule: Rule::Opposite(base.to_string()),
                slope: e.slope,
                action: e.action,
                ns_flag: false,
                dual_name: e.dual_name.map(|d| format!("{d}-op")),
            });
        }
        Err(Error::Unknown(format!("catalog entry {name:?}")))
    }

    /// Dimension table of `name` on `window`.
    pub fn table(&self, name: &str, window: Window) -> Result<DimTable> {
        let e = self.entry(name)?;
        match &e.rule {
            Rule::Closed(f) => Ok(DimTable::from_fn(window, e.slope, f)),
            Rule::Opposite(base) => Ok(opposite(&self.table(base, window.transpose())?)),
            Rule::Fixed(t) => {
                if t.window().covers(&window) {
                    t.restrict_window(window)
                } else {
                    let mut out = DimTable::new(window, t.slope());
                    for m in 1..=window.m {
                        for n in 1..=window.n {
                            for rho in 0..=window.rho {
                                out.set(m, n, rho, t.get(m, n, rho)?)?;
                            }
                        }
                    }
                    Ok(out)
                }
            }
            Rule::Product(top, bottom) => {
                let s = e.slope.unwrap_or(1);
                let (tw, bw) = factor_windows(window, s);
                boxc_dims(&self.table(top, tw)?, &self.table(bottom, bw)?, window)
            }
        }
    }

    pub fn insert(&mut self, entry: CatalogEntry) {
        self.entries.insert(entry.name.clone(), entry);
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.load_json(&text)
    }

    /// Adds or replaces entries from a JSON array (or a single object) of
    /// `{name, entries: [[m,n,rho,dim],...], ns_flag, dual_name, window?, leg_slope?, action?}`.
    pub fn load_json(&mut self, text: &str) -> Result<()> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let items = match value {
            serde_json::Value::Array(v) => v,
            v @ serde_json::Value::Object(_) => vec![v],
            _ => return Err(Error::Parse("catalog must be an object or an array".into())),
        };
        for item in items {
            let raw: RawEntry = serde_json::from_value(item).map_err(|e| Error::Parse(e.to_string()))?;
            self.insert(raw.into_entry()?);
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    entries: Vec<(usize, usize, usize, serde_json::Value)>,
    #[serde(default)]
    ns_flag: bool,
    #[serde(default)]
    dual_name: Option<String>,
    #[serde(default)]
    window: Option<(usize, usize, usize)>,
    #[serde(default)]
    leg_slope: Option<usize>,
    #[serde(default)]
    action: Option<ActionKind>,
}

impl RawEntry {
    fn into_entry(self) -> Result<CatalogEntry> {
        let mut rows = Vec::with_capacity(self.entries.len());
        for (m, n, rho, v) in self.entries {
            let dim = match v {
                serde_json::Value::Number(x) => parse_q(&x.to_string())?,
                serde_json::Value::String(s) => parse_q(&s)?,
                other => return Err(Error::Parse(format!("dimension {other} is not a number"))),
            };
            if m == 0 || n == 0 {
                return Err(Error::Parse(format!(
                    "{}: entry ({m},{n},{rho}) is not reduced",
                    self.name
                )));
            }
            rows.push((m, n, rho, dim));
        }
        let window = match self.window {
            Some((m, n, rho)) => Window::new(m, n, rho),
            None => Window::new(
                rows.iter().map(|r| r.0).max().unwrap_or(1),
                rows.iter().map(|r| r.1).max().unwrap_or(1),
                rows.iter().map(|r| r.2).max().unwrap_or(0),
            ),
        };
        let mut table = DimTable::new(window, None);
        for (m, n, rho, dim) in rows {
            table.set(m, n, rho, dim)?;
        }
        let slope = match self.leg_slope {
            Some(s) => Some(s),
            None => table.inferred_slope(),
        };
        let table = DimTable { slope, ..table };
        if !table.slope_is_consistent() {
            return Err(Error::Parse(format!(
                "{}: entries violate the declared leg slope {slope:?}",
                self.name
            )));
        }
        Ok(CatalogEntry {
            name: self.name,
            slope,
            rule: Rule::Fixed(table),
            action: self.action.unwrap_or(ActionKind::Other),
            ns_flag: self.ns_flag,
            dual_name: self.dual_name,
        })
    }
}
