//! Brute-force count of two-level composites.
//!
//! A labeled composite consists of an ordered list of top vertices, an
//! ordered list of bottom vertices, a bijection from the `m` output labels to
//! the top output slots, one from the `n` input labels to the bottom input
//! slots, and a wiring of top input slots to bottom output slots. Two
//! composites are equivalent when they differ by relabeling vertices and by
//! permuting the slots of a vertex while acting on its decoration.
//!
//! For a regular decoration the slot permutation is absorbed by the
//! decoration, so its slots stay distinguishable; for a trivial decoration
//! its slots are interchangeable. The oracle enumerates composites with all
//! slots distinguished, forgets slot identities at trivial vertices, and
//! canonicalizes under vertex relabeling.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};

use super::{ActionKind, DimTable};
use crate::rational::{factorial, Q};
use crate::{Error, Result};

const MAX_LEGS: usize = 4;
const MAX_RAW: u64 = 20_000_000;

#[derive(Debug, Clone, Copy)]
pub struct OracleSide<'a> {
    pub table: &'a DimTable,
    pub action: ActionKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCount {
    /// Number of equivalence classes: the dimension of the coinvariants.
    pub classes: u64,
    /// `Σ 1/|Aut|` over the classes.
    pub mass: Q,
    pub max_stabilizer: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct VType {
    outs: usize,
    ins: usize,
    rho: usize,
    class: usize,
    rigid: bool,
}

type End = (usize, Option<usize>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Encoding {
    tops: Vec<VType>,
    bots: Vec<VType>,
    outs: Vec<End>,
    ins: Vec<End>,
    edges: Vec<(End, End)>,
}

impl Encoding {
    fn relabel(&self, pt: &[usize], pb: &[usize]) -> Encoding {
        let mut tops = self.tops.clone();
        for (b, &t) in pt.iter().enumerate() {
            tops[t] = self.tops[b];
        }
        let mut bots = self.bots.clone();
        for (a, &t) in pb.iter().enumerate() {
            bots[t] = self.bots[a];
        }
        let mt = |(v, s): End| (pt[v], s);
        let mb = |(v, s): End| (pb[v], s);
        let mut edges: Vec<(End, End)> = self.edges.iter().map(|&(x, y)| (mt(x), mb(y))).collect();
        edges.sort_unstable();
        Encoding {
            tops,
            bots,
            outs: self.outs.iter().map(|&e| mt(e)).collect(),
            ins: self.ins.iter().map(|&e| mb(e)).collect(),
            edges,
        }
    }
}

fn classes_of(dim: &Q, action: ActionKind, outs: usize, ins: usize) -> Result<usize> {
    if dim.is_zero() {
        return Ok(0);
    }
    if !dim.is_integer() || dim < &Q::zero() {
        return Err(Error::cap(format!("dimension {dim} is not a basis size")));
    }
    let d = dim.to_integer();
    let count = match action {
        ActionKind::Trivial => d,
        _ if outs == 1 && ins == 1 => d,
        ActionKind::Regular => {
            let group = factorial(outs) * factorial(ins);
            if (&d % &group) != 0.into() {
                return Err(Error::cap(format!(
                    "dimension {d} at ({outs},{ins}) is not a multiple of the regular representation"
                )));
            }
            d / group
        }
        ActionKind::Other => {
            return Err(Error::cap(format!(
                "the oracle needs a permutation basis; ({outs},{ins}) has an unspecified action"
            )))
        }
    };
    count.to_usize().ok_or_else(|| Error::cap("basis too large"))
}

/// Ordered vertex lists with the given leg totals, grouped by total weight.
fn vertex_lists(
    side: OracleSide<'_>,
    total_outs: usize,
    total_ins: usize,
    rho_max: usize,
) -> Result<Vec<(usize, Vec<VType>)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        side: OracleSide<'_>,
        outs_left: usize,
        ins_left: usize,
        rho_left: usize,
        cur: &mut Vec<VType>,
        out: &mut Vec<(usize, Vec<VType>)>,
    ) -> Result<()> {
        if outs_left == 0 && ins_left == 0 {
            if !cur.is_empty() {
                let rho = cur.iter().map(|v| v.rho).sum();
                out.push((rho, cur.clone()));
            }
            return Ok(());
        }
        for o in 1..=outs_left {
            for i in 1..=ins_left {
                for rho in 0..=rho_left {
                    let dim = side.table.get(o, i, rho)?;
                    let rigid = side.action == ActionKind::Regular;
                    let classes = classes_of(&dim, side.action, o, i)?;
                    for class in 0..classes {
                        cur.push(VType {
                            outs: o,
                            ins: i,
                            rho,
                            class,
                            rigid,
                        });
                        rec(side, outs_left - o, ins_left - i, rho_left - rho, cur, out)?;
                        cur.pop();
                    }
                }
            }
        }
        Ok(())
    }
    rec(side, total_outs, total_ins, rho_max, &mut cur, &mut out)?;
    Ok(out)
}

fn slots(vs: &[VType], count: impl Fn(&VType) -> usize) -> Vec<(usize, usize)> {
    vs.iter()
        .enumerate()
        .flat_map(|(v, t)| (0..count(t)).map(move |s| (v, s)))
        .collect()
}

fn end_of(vs: &[VType], (v, s): (usize, usize)) -> End {
    (v, vs[v].rigid.then_some(s))
}

fn connected(b: usize, a: usize, edges: &[(End, End)]) -> bool {
    let mut parent: Vec<usize> = (0..a + b).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &((t, _), (u, _)) in edges {
        let (x, y) = (find(&mut parent, t), find(&mut parent, b + u));
        parent[x] = y;
    }
    let r = find(&mut parent, 0);
    (0..a + b).all(|x| find(&mut parent, x) == r)
}

fn run(
    q: OracleSide<'_>,
    p: OracleSide<'_>,
    m: usize,
    n: usize,
    rho: usize,
    require_connected: bool,
) -> Result<OracleCount> {
    if m > MAX_LEGS || n > MAX_LEGS {
        return Err(Error::cap(format!("oracle handles m, n <= {MAX_LEGS}")));
    }
    if m == 0 || n == 0 {
        return Ok(OracleCount {
            classes: 0,
            mass: Q::zero(),
            max_stabilizer: 1,
        });
    }
    let s = match (q.table.slope(), p.table.slope()) {
        (Some(a), Some(b)) => a.max(b),
        _ => return Err(Error::cap("the oracle needs tables with a leg slope")),
    };
    let nmax = (s * rho + m + n) / 2;
    let mut canon: BTreeSet<Encoding> = BTreeSet::new();
    let mut raw_mass = Q::zero();
    let mut raw_total: u64 = 0;
    for big_n in 1..=nmax {
        let tops = vertex_lists(q, m, big_n, rho)?;
        let bots = vertex_lists(p, big_n, n, rho)?;
        for (rt, tv) in &tops {
            for (rb, bv) in &bots {
                if rt + rb != rho {
                    continue;
                }
                let (b, a) = (tv.len(), bv.len());
                let out_slots = slots(tv, |t| t.outs);
                let top_in = slots(tv, |t| t.ins);
                let bot_out = slots(bv, |t| t.outs);
                let in_slots = slots(bv, |t| t.ins);
                let work = (1..=m as u64).product::<u64>()
                    * (1..=n as u64).product::<u64>()
                    * (1..=big_n as u64).product::<u64>();
                raw_total += work;
                if raw_total > MAX_RAW {
                    return Err(Error::cap("oracle instance too large"));
                }
                let wirings: Vec<Vec<(End, End)>> = (0..big_n)
                    .permutations(big_n)
                    .filter_map(|w| {
                        let mut e: Vec<(End, End)> = w
                            .iter()
                            .enumerate()
                            .map(|(i, &j)| (end_of(tv, top_in[i]), end_of(bv, bot_out[j])))
                            .collect();
                        e.sort_unstable();
                        (!require_connected || connected(b, a, &e)).then_some(e)
                    })
                    .collect();
                if wirings.is_empty() {
                    continue;
                }
                let group: u64 = (1..=b as u64).product::<u64>()
                    * (1..=a as u64).product::<u64>()
                    * tv.iter()
                        .chain(bv)
                        .filter(|t| !t.rigid)
                        .map(|t| (1..=t.outs as u64).product::<u64>() * (1..=t.ins as u64).product::<u64>())
                        .product::<u64>();
                let raw = (1..=m as u64).product::<u64>() * (1..=n as u64).product::<u64>() * wirings.len() as u64;
                raw_mass += Q::new(raw.into(), group.into());

                let mut seen: BTreeSet<Encoding> = BTreeSet::new();
                for po in (0..m).permutations(m) {
                    let outs: Vec<End> = po.iter().map(|&i| end_of(tv, out_slots[i])).collect();
                    for pi in (0..n).permutations(n) {
                        let ins: Vec<End> = pi.iter().map(|&i| end_of(bv, in_slots[i])).collect();
                        for e in &wirings {
                            seen.insert(Encoding {
                                tops: tv.clone(),
                                bots: bv.clone(),
                                outs: outs.clone(),
                                ins: ins.clone(),
                                edges: e.clone(),
                            });
                        }
                    }
                }
                for enc in seen {
                    let c = (0..b)
                        .permutations(b)
                        .cartesian_product((0..a).permutations(a).collect::<Vec<_>>())
                        .map(|(pt, pb)| enc.relabel(&pt, &pb))
                        .min()
                        .unwrap();
                    canon.insert(c);
                }
            }
        }
    }
    let mut mass = Q::zero();
    let mut max_stab = 1;
    for enc in &canon {
        let (b, a) = (enc.tops.len(), enc.bots.len());
        let fixing = (0..b)
            .permutations(b)
            .cartesian_product((0..a).permutations(a).collect::<Vec<_>>())
            .filter(|(pt, pb)| &enc.relabel(pt, pb) == enc)
            .count() as u64;
        let mut multi: BTreeMap<&(End, End), u64> = BTreeMap::new();
        for e in &enc.edges {
            if e.0 .1.is_none() && e.1 .1.is_none() {
                *multi.entry(e).or_default() += 1;
            }
        }
        let stab = fixing * multi.values().map(|&c| (1..=c).product::<u64>()).product::<u64>();
        max_stab = max_stab.max(stab);
        mass += Q::new(1.into(), stab.into());
    }
    if mass != raw_mass {
        return Err(Error::Invariant(format!(
            "orbit mass {mass} differs from the labeled count {raw_mass} at ({m},{n},{rho})"
        )));
    }
    Ok(OracleCount {
        classes: canon.len() as u64,
        mass,
        max_stabilizer: max_stab,
    })
}

/// Counts classes of connected two-level composites at `(m, n, ρ)`.
pub fn boxc_dims_oracle(q: OracleSide<'_>, p: OracleSide<'_>, m: usize, n: usize, rho: usize) -> Result<OracleCount> {
    run(q, p, m, n, rho, true)
}

/// Same as [`boxc_dims_oracle`] without the connectivity requirement.
pub fn box_dims_oracle(q: OracleSide<'_>, p: OracleSide<'_>, m: usize, n: usize, rho: usize) -> Result<OracleCount> {
    run(q, p, m, n, rho, false)
}
