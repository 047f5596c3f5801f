//! Poincaré series of dimension tables, the connected pairing Ψ, and the
//! functional equations satisfied by Koszul pairs.

mod series;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

pub use series::{TruncSeries, Truncation};

use crate::combinatorics::{automorphisms, connected_count_parts, MAX_CONNECTED_N};
use crate::dims::{internal_edge_bound, Catalog, DimTable, Window};
use crate::nsoperad::{NsOperad, Presentation};
use crate::rational::{factorial_q, fmt_q, q, Q};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub exponents: BTreeMap<String, usize>,
    pub value: String,
}

/// Outcome of one identity check; `residuals` lists every nonzero
/// coefficient of the difference, sorted by exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub identity: String,
    pub orders: BTreeMap<String, usize>,
    pub status: Status,
    pub residuals: Vec<Residual>,
}

impl Report {
    pub fn from_residual(identity: impl Into<String>, residual: &TruncSeries) -> Report {
        let vars = residual.vars();
        let t = residual.truncation();
        let mut orders: BTreeMap<String, usize> = vars.iter().cloned().zip(t.orders.iter().copied()).collect();
        if let Some(total) = t.total {
            orders.insert("total".into(), total);
        }
        let residuals: Vec<Residual> = residual
            .terms()
            .map(|(e, c)| Residual {
                exponents: vars.iter().cloned().zip(e.iter().copied()).collect(),
                value: fmt_q(c),
            })
            .collect();
        Report {
            identity: identity.into(),
            orders,
            status: if residuals.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            residuals,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Combines reports; passes iff all pass.
    pub fn merge(identity: impl Into<String>, parts: &[Report]) -> Report {
        let mut orders = BTreeMap::new();
        let mut residuals = Vec::new();
        for p in parts {
            for (k, v) in &p.orders {
                let e = orders.entry(k.clone()).or_insert(*v);
                *e = (*e).max(*v);
            }
            residuals.extend(p.residuals.iter().cloned());
        }
        Report {
            identity: identity.into(),
            orders,
            status: if parts.iter().all(Report::passed) {
                Status::Pass
            } else {
                Status::Fail
            },
            residuals,
        }
    }
}

/// `Σ dim P_(d)(m,n)/(m! n!) y^m x^n z^d` over `window`.
pub fn series_of(table: &DimTable, window: Window) -> Result<TruncSeries> {
    let mut s = TruncSeries::zero(&["y", "x", "z"], &[window.m, window.n, window.rho], None);
    for m in 1..=window.m {
        for n in 1..=window.n {
            for d in 0..=window.rho {
                let v = table.get(m, n, d)?;
                if !v.is_zero() {
                    s.add_term(&[m, n, d], v / (factorial_q(m) * factorial_q(n)));
                }
            }
        }
    }
    Ok(s)
}

/// Multisets of parts from `available` (each part `k` paired with its
/// coefficient series), at most `max_len` long, with the product of the
/// coefficient series divided by the multiset automorphisms.
fn weighted_multisets(
    available: &[(usize, TruncSeries)],
    max_len: usize,
    max_sum: usize,
    one: &TruncSeries,
) -> Vec<(Vec<usize>, TruncSeries)> {
    fn rec(
        available: &[(usize, TruncSeries)],
        start: usize,
        left: usize,
        sum_left: usize,
        parts: &mut Vec<usize>,
        acc: &TruncSeries,
        out: &mut Vec<(Vec<usize>, TruncSeries)>,
    ) {
        if !parts.is_empty() {
            let aut = Q::from_integer(automorphisms(parts).into());
            out.push((parts.clone(), acc.scale(&aut.recip())));
        }
        if left == 0 {
            return;
        }
        for i in start..available.len() {
            let (k, s) = &available[i];
            if *k > sum_left {
                continue;
            }
            let next = acc.mul(s).expect("same variables");
            if next.is_zero() {
                continue;
            }
            parts.push(*k);
            rec(available, i, left - 1, sum_left - k, parts, &next, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    rec(available, 0, max_len, max_sum, &mut Vec::new(), one, &mut out);
    out
}

/// The connected pairing of `g` in `(y, X, z)` (top level) with `f` in
/// `(Y, x, z)` (bottom level), truncated to `window` in `(y, x, z)`:
///
/// `Σ_{K, J} #S^c(K, J) / (|Aut K| |Aut J|) · Π_k g_k(y, z) · Π_j f_j(x, z)`
///
/// over multisets `K`, `J` of equal sum, where `g_k` is the `X^k`
/// coefficient of `g` and `f_j` the `Y^j` coefficient of `f`.
pub fn psi(g: &TruncSeries, f: &TruncSeries, window: Window) -> Result<TruncSeries> {
    if g.vars() != ["y", "X", "z"] || f.vars() != ["Y", "x", "z"] {
        return Err(Error::arg("psi expects g(y, X, z) and f(Y, x, z)"));
    }
    if g.valuation_in("X") == Some(0) || f.valuation_in("Y") == Some(0) {
        return Err(Error::arg("psi needs g without X^0 terms and f without Y^0 terms"));
    }
    let vars = ["y", "x", "z"];
    let orders = [window.m, window.n, window.rho];
    let target = TruncSeries::zero(&vars, &orders, None);
    let mut tops = Vec::new();
    for k in 1..=g.degree_in("X") {
        let gk = g.extract("X", k).rename(&["y", "x", "z"]).embed(&vars, &orders, None)?;
        if gk.is_zero() {
            continue;
        }
        if gk.valuation_in("y") == Some(0) {
            return Err(Error::arg("psi needs every top vertex to have an output"));
        }
        tops.push((k, gk));
    }
    let mut bottoms = Vec::new();
    for j in 1..=f.degree_in("Y") {
        let fj = f.extract("Y", j).rename(&["y", "x", "z"]).embed(&vars, &orders, None)?;
        if fj.is_zero() {
            continue;
        }
        if fj.valuation_in("x") == Some(0) {
            return Err(Error::arg("psi needs every bottom vertex to have an input"));
        }
        bottoms.push((j, fj));
    }
    let max_k = tops.iter().map(|t| t.0).max().unwrap_or(0);
    let max_j = bottoms.iter().map(|t| t.0).max().unwrap_or(0);
    let max_sum = (window.m * max_k).min(window.n * max_j);
    let one = target.one_like();
    let top_sets = weighted_multisets(&tops, window.m, max_sum, &one);
    let mut by_sum: BTreeMap<usize, Vec<(Vec<usize>, TruncSeries)>> = BTreeMap::new();
    for (parts, s) in weighted_multisets(&bottoms, window.n, max_sum, &one) {
        by_sum.entry(parts.iter().sum()).or_default().push((parts, s));
    }
    let mut out = target;
    for (k_parts, gs) in &top_sets {
        let n_edges: usize = k_parts.iter().sum();
        let Some(bots) = by_sum.get(&n_edges) else { continue };
        for (j_parts, fs) in bots {
            let term = gs.mul(fs)?;
            if term.is_zero() {
                continue;
            }
            if n_edges > MAX_CONNECTED_N {
                return Err(Error::cap(format!(
                    "pairing needs {n_edges} internal edges; at most {MAX_CONNECTED_N} are enumerated"
                )));
            }
            let c = connected_count_parts(k_parts, j_parts)?;
            out = out.add(&term.scale(&q(c as i64)))?;
        }
    }
    Ok(out)
}

/// Window both tables must cover for the identity check on `window`.
pub fn identity_window(window: Window, slope: usize) -> Window {
    let e = internal_edge_bound(window, slope).max(1);
    Window::new(window.m.max(e), window.n.max(e), window.rho)
}

/// [`check_properad_identity`] for a catalog pair.
pub fn check_catalog_pair(catalog: &Catalog, p: &str, dual: &str, window: Window) -> Result<Report> {
    let slope = catalog.entry(p)?.slope.max(catalog.entry(dual)?.slope).unwrap_or(1);
    let big = identity_window(window, slope);
    check_properad_identity(&catalog.table(p, big)?, &catalog.table(dual, big)?, window)
}

/// `Ψ(f_{P¡}(y, X, -z), f_P(Y, x, z)) - xy` on `window`. The tables must
/// cover [`identity_window`].
pub fn check_properad_identity(p: &DimTable, pdual: &DimTable, window: Window) -> Result<Report> {
    let e = internal_edge_bound(window, p.slope().max(pdual.slope()).unwrap_or(1)).max(1);
    let g = series_of(pdual, Window::new(window.m, e, window.rho))?
        .scale_var("z", &-Q::one())
        .rename(&["y", "X", "z"]);
    let f = series_of(p, Window::new(e, window.n, window.rho))?.rename(&["Y", "x", "z"]);
    let value = psi(&g, &f, window)?;
    let xy = value.monomial_like(&[1, 1, 0], Q::one());
    Ok(Report::from_residual(
        "psi(f_dual(y,X,-z), f(Y,x,z)) = xy",
        &value.sub(&xy)?,
    ))
}

/// `Σ dim P_(d)(n)/n! y^d x^n` for a table concentrated in one output.
pub fn operad_series(table: &DimTable, n_order: usize, d_order: usize, total: Option<usize>) -> Result<TruncSeries> {
    if let Some(((m, n, d), _)) = table.entries().find(|((m, _, _), v)| *m != 1 && !v.is_zero()) {
        return Err(Error::arg(format!(
            "table is not an operad: nonzero entry at ({m},{n},{d})"
        )));
    }
    let mut s = TruncSeries::zero(&["x", "y"], &[n_order, d_order], total);
    for n in 1..=n_order {
        for d in 0..=d_order {
            let v = table.get(1, n, d)?;
            s.add_term(&[n, d], v / factorial_q(n));
        }
    }
    Ok(s)
}

/// `f_{P¡}(f_P(x, y), -y) - x`.
pub fn check_operad_identity(fp: &TruncSeries, fdual: &TruncSeries) -> Result<Report> {
    let flipped = fdual.scale_var("y", &-Q::one());
    let value = flipped.substitute("x", fp)?;
    let x = value.var_like("x");
    Ok(Report::from_residual("f_dual(f(x,y), -y) = x", &value.sub(&x)?))
}

/// `(y + 1) f^2 - (1 + x) f + x`.
pub fn quadratic_residual(f: &TruncSeries) -> Result<TruncSeries> {
    let one = f.one_like();
    let x = f.var_like("x");
    let y = f.var_like("y");
    let a = y.add(&one)?.mul(&f.mul(f)?)?;
    let b = one.add(&x)?.mul(f)?;
    a.sub(&b)?.add(&x)
}

/// Free-operad series `Σ #trees(n, d) x^n y^d` from planar-tree
/// enumeration, total degree at most `total`.
pub fn free_operad_series(total: usize) -> Result<TruncSeries> {
    let pres = Presentation::builtin(&format!("free{}", total.max(2)))?;
    let mut e = NsOperad::new(pres);
    let mut s = TruncSeries::zero(&["x", "y"], &[total, total], Some(total));
    for n in 1..=total {
        for d in 0..n.min(total + 1 - n) {
            s.add_term(&[n, d], q(e.free_dims(n, d) as i64));
        }
    }
    Ok(s)
}

/// `x + y x^2 / (1 - x)`.
pub fn free_dual_series(total: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(&["x", "y"], &[total, total], Some(total));
    s.add_term(&[1, 0], Q::one());
    for n in 2..=total {
        s.add_term(&[n, 1], Q::one());
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StasheffReport {
    pub upto: usize,
    /// `P_n(y)` coefficients, lowest degree first.
    pub polynomials: Vec<Vec<String>>,
    pub census: Report,
    pub quadratic: Report,
}

impl StasheffReport {
    pub fn passed(&self) -> bool {
        self.census.passed() && self.quadratic.passed()
    }
}

/// `(1 - (2+y)x - sqrt(1 - 2(2+y)x + y^2 x^2)) / (2(1+y)x^2)` as
/// `Σ P_n(y) x^n`, `n <= upto`.
pub fn stasheff_series(upto: usize) -> Result<TruncSeries> {
    let s = TruncSeries::zero(&["x", "y"], &[upto + 2, upto], None);
    let (one, x, y) = (s.one_like(), s.var_like("x"), s.var_like("y"));
    let two_y = y.add(&one.scale(&q(2)))?;
    let radicand = one
        .sub(&two_y.mul(&x)?.scale(&q(2)))?
        .add(&y.mul(&y)?.mul(&x)?.mul(&x)?)?;
    let numerator = one.sub(&two_y.mul(&x)?)?.sub(&radicand.sqrt()?)?;
    let denominator = y.add(&one)?.scale(&q(2));
    numerator.div_monomial("x", 2)?.mul(&denominator.inv()?)
}

/// Compares the closed form with planar-tree cell counts for `n <= upto`
/// and checks the quadratic relation of the free-operad series to total
/// order `total`.
pub fn stasheff_check(upto: usize, total: usize) -> Result<StasheffReport> {
    let fk = stasheff_series(upto)?;
    let mut e = NsOperad::new(Presentation::builtin(&format!("free{}", upto + 2))?);
    let mut census = fk.zero_like();
    for n in 0..=upto {
        for k in 0..=n {
            census.add_term(&[n, k], q(e.free_dims(n + 2, n + 1 - k) as i64));
        }
    }
    let polynomials = (0..=upto)
        .map(|n| (0..=n).map(|k| fmt_q(&fk.coeff(&[n, k]))).collect())
        .collect();
    let census_report = Report::from_residual("stasheff closed form = planar tree cells", &fk.sub(&census)?);
    let quadratic = Report::from_residual(
        "(y+1) f^2 - (1+x) f + x = 0",
        &quadratic_residual(&free_operad_series(total)?)?,
    );
    Ok(StasheffReport {
        upto,
        polynomials,
        census: census_report,
        quadratic,
    })
}

/// Closed one-variable series `Σ (-1)^n dim P(n)/n! x^n` for the binary
/// operads with known forms.
pub fn closed_form(name: &str, order: usize) -> Result<TruncSeries> {
    let base = TruncSeries::zero(&["x"], &[order + 1], None);
    let (one, x) = (base.one_like(), base.var_like("x"));
    let s = match name {
        "com" => x.neg().exp()?.sub(&one)?,
        "lie" => one.add(&x)?.ln()?.neg(),
        "as" | "leib" | "zinb" => x.neg().mul(&one.add(&x)?.inv()?)?,
        "dias" => x.neg().mul(&one.add(&x)?.pow(2).inv()?)?,
        "dend" => {
            let root = one.add(&x.scale(&q(4)))?.sqrt()?;
            let numerator = root.sub(&one)?.sub(&x.scale(&q(2)))?;
            numerator.div_monomial("x", 1)?.scale(&Q::new(1.into(), 2.into()))
        }
        _ => return Err(Error::Unknown(format!("no closed form for {name:?}"))),
    };
    Ok(s.truncate(&Truncation {
        orders: vec![order],
        total: None,
    }))
}

/// `Σ (-1)^n dim P(n)/n! x^n` from a catalog table, summing all weights.
pub fn binary_series(table: &DimTable, order: usize) -> Result<TruncSeries> {
    let mut s = TruncSeries::zero(&["x"], &[order], None);
    for n in 1..=order {
        let mut dim = Q::zero();
        for d in 0..=table.window().rho {
            dim += table.get(1, n, d)?;
        }
        let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
        s.add_term(&[n], sign * dim / factorial_q(n));
    }
    Ok(s)
}

/// `f_{P¡}(f_P(x)) - x` for a catalog pair, from closed forms and from
/// catalog dimensions.
pub fn binary_check(catalog: &Catalog, p: &str, dual: &str, order: usize) -> Result<Report> {
    let window = Window::new(1, order, order.saturating_sub(1));
    let from_tables = (
        binary_series(&catalog.table(p, window)?, order)?,
        binary_series(&catalog.table(dual, window)?, order)?,
    );
    let mut parts = Vec::new();
    let identity = format!("f_{dual}(f_{p}(x)) = x");
    let mut compare = |label: &str, fp: &TruncSeries, fd: &TruncSeries| -> Result<()> {
        let value = fd.substitute("x", fp)?;
        let x = value.var_like("x");
        parts.push(Report::from_residual(format!("{identity} [{label}]"), &value.sub(&x)?));
        Ok(())
    };
    compare("catalog", &from_tables.0, &from_tables.1)?;
    if let (Ok(cp), Ok(cd)) = (closed_form(p, order), closed_form(dual, order)) {
        compare("closed form", &cp, &cd)?;
        let agree = cp.sub(&from_tables.0)?.add(&cd.sub(&from_tables.1)?)?;
        parts.push(Report::from_residual(
            format!("closed forms = catalog series for {p}, {dual}"),
            &agree,
        ));
    }
    Ok(Report::merge(identity, &parts))
}

/// `f_A(x) f_{A¡}(-x) - 1` for algebras stored as `(1, 1, ρ)` tables.
pub fn algebra_check(catalog: &Catalog, a: &str, dual: &str, order: usize) -> Result<Report> {
    let window = Window::new(1, 1, order);
    let series = |name: &str| -> Result<TruncSeries> {
        let t = catalog.table(name, window)?;
        let mut s = TruncSeries::zero(&["x"], &[order], None);
        for d in 0..=order {
            s.add_term(&[d], t.get(1, 1, d)?);
        }
        Ok(s)
    };
    let fa = series(a)?;
    let fd = series(dual)?.scale_var("x", &-Q::one());
    let value = fa.mul(&fd)?;
    Ok(Report::from_residual(
        format!("f_{a}(x) f_{dual}(-x) = 1"),
        &value.sub(&value.one_like())?,
    ))
}
