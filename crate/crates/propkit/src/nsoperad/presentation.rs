//! Quadratic presentations of non-symmetric operads.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::tree::{enumerate, PlanarTree};
use crate::linalg::{Matrix, Subspace};
use crate::rational::{fmt_q, parse_q, Q};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    /// Homological degree; the dual of an arity `k` generator of degree `e`
    /// has degree `k - 2 - e`.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub degree: i64,
}

fn is_zero(x: &i64) -> bool {
    *x == 0
}

impl Generator {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Generator {
            name: name.into(),
            arity,
            degree: 0,
        }
    }
}

/// A linear combination of weight-two trees of one arity.
pub type Relation = Vec<(PlanarTree, Q)>;

/// Generators and quadratic relations. Vertex labels of trees index
/// `generators`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    #[serde(default)]
    name: Option<String>,
    generators: Vec<Generator>,
    relations: Vec<Vec<RawTerm>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    tree: Value,
    coeff: Value,
}

impl Presentation {
    pub fn new(name: impl Into<String>, generators: Vec<Generator>, relations: Vec<Relation>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if g.arity < 2 {
                return Err(Error::arg(format!("generator {:?} has arity {} < 2", g.name, g.arity)));
            }
            if g.name.is_empty() || g.name == "|" || !seen.insert(g.name.clone()) {
                return Err(Error::arg(format!("bad or repeated generator name {:?}", g.name)));
            }
        }
        let mut clean = Vec::new();
        for r in relations {
            let mut acc: BTreeMap<PlanarTree, Q> = BTreeMap::new();
            let mut arity = None;
            for (t, c) in r {
                if t.vertex_count() != 2 {
                    return Err(Error::arg(format!("relation term {t} is not quadratic")));
                }
                for p in t.vertex_positions() {
                    let g = *t.label(p).unwrap();
                    if g >= generators.len() || generators[g].arity != t.node_arity(p) {
                        return Err(Error::arg(format!("relation term {t} uses an unknown generator")));
                    }
                }
                if *arity.get_or_insert(t.arity()) != t.arity() {
                    return Err(Error::arg("relation mixes arities"));
                }
                *acc.entry(t).or_insert_with(Q::zero) += c;
            }
            let terms: Relation = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !terms.is_empty() {
                clean.push(terms);
            }
        }
        Ok(Presentation {
            name: name.into(),
            generators,
            relations: clean,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Whether generator `g` has odd degree.
    pub fn is_odd(&self, g: usize) -> bool {
        self.generators[g].degree.rem_euclid(2) == 1
    }

    pub fn max_generator_arity(&self) -> usize {
        self.generators.iter().map(|g| g.arity).max().unwrap_or(0)
    }

    /// Generator indices of arity `a`, the vertex labels used in enumeration.
    pub fn labels(&self, a: usize) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.generators[g].arity == a)
            .collect()
    }

    /// Trees with `n` leaves and `d` vertices in canonical order.
    pub fn trees(&self, n: usize, d: usize) -> Vec<PlanarTree> {
        enumerate(n, d, &|a| self.labels(a))
    }

    /// Arities in which some weight-two tree exists.
    pub fn quadratic_arities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .generators
            .iter()
            .flat_map(|g| self.generators.iter().map(move |h| g.arity + h.arity - 1))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The relation space inside the weight-two trees of arity `n`.
    pub fn relation_space(&self, n: usize) -> Subspace {
        let basis = self.trees(n, 2);
        let rows: Vec<Vec<Q>> = self
            .relations
            .iter()
            .filter(|r| r[0].0.arity() == n)
            .map(|r| {
                let mut v = vec![Q::zero(); basis.len()];
                for (t, c) in r {
                    let i = basis.binary_search(t).expect("relation tree is enumerated");
                    v[i] += c;
                }
                v
            })
            .collect();
        if rows.is_empty() {
            return Subspace::zero(basis.len());
        }
        Subspace::span(&Matrix::from_rows(basis.len(), rows).expect("rows have equal length"))
    }

    /// Replaces the relations of arity `n` by the rows of `space`.
    pub(crate) fn with_relation_spaces(
        &self,
        name: &str,
        generators: Vec<Generator>,
        spaces: &[(usize, Subspace)],
    ) -> Result<Self> {
        let mut relations = Vec::new();
        for (n, s) in spaces {
            let basis = self.trees(*n, 2);
            for i in 0..s.dim() {
                relations.push(
                    s.basis()
                        .row(i)
                        .iter()
                        .zip(&basis)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, t)| (t.clone(), c.clone()))
                        .collect(),
                );
            }
        }
        Presentation::new(name, generators, relations)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawPresentation = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let arities: Vec<(String, usize)> = raw.generators.iter().map(|g| (g.name.clone(), g.arity)).collect();
        let lookup = |name: &str| arities.iter().position(|(n, _)| n == name).map(|i| (i, arities[i].1));
        let mut relations = Vec::new();
        for r in &raw.relations {
            let mut terms = Vec::new();
            for t in r {
                let tree = PlanarTree::from_json(&t.tree, &lookup)?;
                let c = match &t.coeff {
                    Value::String(s) => parse_q(s)?,
                    Value::Number(n) if n.is_i64() => crate::rational::q(n.as_i64().unwrap()),
                    other => return Err(Error::Parse(format!("bad coefficient {other}"))),
                };
                terms.push((tree, c));
            }
            relations.push(terms);
        }
        Presentation::new(raw.name.unwrap_or_else(|| "custom".into()), raw.generators, relations)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s =
            std::fs::read_to_string(path).map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    pub fn to_json(&self) -> Value {
        let names = self.names();
        let raw = RawPresentation {
            name: Some(self.name.clone()),
            generators: self.generators.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(t, c)| RawTerm {
                            tree: t.to_json(&names),
                            coeff: Value::String(fmt_q(c)),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    /// Built-in presentations by name: `as`, `dend`, `dias`, `mag`, `nil`,
    /// and `free<k>` with one generator in each arity `2..=k`.
    pub fn builtin(name: &str) -> Result<Self> {
        let bin = |names: &[&str]| -> Vec<Generator> { names.iter().map(|n| Generator::new(*n, 2)).collect() };
        let c = PlanarTree::corolla;
        // mu o_1 nu = mu(nu(x,y),z), mu o_2 nu = mu(x,nu(y,z))
        let o1 = |mu: usize, nu: usize| c(mu, 2).graft(0, &c(nu, 2));
        let o2 = |mu: usize, nu: usize| c(mu, 2).graft(1, &c(nu, 2));
        let one = Q::one();
        let rel = |terms: &[(PlanarTree, i64)]| -> Relation {
            terms.iter().map(|(t, k)| (t.clone(), crate::rational::q(*k))).collect()
        };
        match name {
            "as" => Presentation::new(
                "as",
                bin(&["mu"]),
                vec![vec![(o1(0, 0), one.clone()), (o2(0, 0), -one)]],
            ),
            "dend" => {
                let (l, r) = (0, 1);
                Presentation::new(
                    "dend",
                    bin(&["prec", "succ"]),
                    vec![
                        rel(&[(o1(l, l), 1), (o2(l, l), -1), (o2(l, r), -1)]),
                        rel(&[(o1(l, r), 1), (o2(r, l), -1)]),
                        rel(&[(o1(r, l), 1), (o1(r, r), 1), (o2(r, r), -1)]),
                    ],
                )
            }
            "dias" => {
                let (l, r) = (0, 1);
                Presentation::new(
                    "dias",
                    bin(&["left", "right"]),
                    vec![
                        rel(&[(o1(l, l), 1), (o2(l, l), -1)]),
                        rel(&[(o2(l, l), 1), (o2(l, r), -1)]),
                        rel(&[(o1(l, r), 1), (o2(r, l), -1)]),
                        rel(&[(o1(r, l), 1), (o2(r, r), -1)]),
                        rel(&[(o1(r, r), 1), (o2(r, r), -1)]),
                    ],
                )
            }
            "mag" => Presentation::new("mag", bin(&["mu"]), Vec::new()),
            "nil" => Presentation::new("nil", bin(&["mu"]), vec![rel(&[(o1(0, 0), 1)]), rel(&[(o2(0, 0), 1)])]),
            _ => {
                let k: usize = name
                    .strip_prefix("free")
                    .and_then(|s| s.parse().ok())
                    .filter(|&k| k >= 2)
                    .ok_or_else(|| Error::Unknown(format!("presentation {name:?}")))?;
                let gens = (2..=k).map(|a| Generator::new(format!("m{a}"), a)).collect();
                Presentation::new(name, gens, Vec::new())
            }
        }
    }

    pub const BUILTIN: &'static [&'static str] = &["as", "dend", "dias", "mag", "nil"];
}
