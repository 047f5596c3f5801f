//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p propkit --test acceptance`. The process exits
//! with status 1 if any criterion fails.

use std::time::Instant;

use itertools::Itertools;
use num_traits::Zero;

use propkit::combinatorics::{compositions, connected_count_parts};
use propkit::dims::{
    boxc_dims, boxc_dims_oracle, euler_koszul_table, factor_windows, unit_table, ActionKind, Catalog, DimTable,
    OracleSide, Window,
};
use propkit::nsoperad::{NsOperad, Presentation};
use propkit::poincare::{
    algebra_check, binary_check, check_catalog_pair, check_operad_identity, free_dual_series, free_operad_series,
    identity_window, quadratic_residual, stasheff_check,
};
use propkit::rational::{factorial, q, Q};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fail(msg: impl Into<String>) -> Outcome {
    Err(msg.into())
}

fn lib<T>(r: propkit::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Connected blocks of the incidence graph: output position `i` lies in a
/// block of `k`, its image `sigma(i)` in a block of `j`.
fn brute_connected(k: &[usize], j: &[usize]) -> u64 {
    let n: usize = k.iter().sum();
    let block_of = |parts: &[usize]| -> Vec<usize> {
        parts
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    };
    let (kb, jb) = (block_of(k), block_of(j));
    let (b, a) = (k.len(), j.len());
    let mut count = 0;
    for sigma in (0..n).permutations(n) {
        let mut parent: Vec<usize> = (0..a + b).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for i in 0..n {
            let (u, v) = (find(&mut parent, kb[i]), find(&mut parent, b + jb[sigma[i]]));
            parent[u] = v;
        }
        let root = find(&mut parent, 0);
        if (0..a + b).all(|x| find(&mut parent, x) == root) {
            count += 1;
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 1..=5 {
        let comps = compositions(n);
        for k in &comps {
            for j in &comps {
                let got = lib(connected_count_parts(k, j))?;
                let want = brute_connected(k, j);
                if got != want {
                    return fail(format!("k={k:?} j={j:?}: {got} != {want}"));
                }
                checked += 1;
            }
            let nfact = factorial(n).to_string();
            if lib(connected_count_parts(&[n], k))?.to_string() != nfact {
                return fail(format!("(N),{k:?} is not {nfact}"));
            }
            if k.len() > 1 && lib(connected_count_parts(k, &vec![1; n]))? != 0 {
                return fail(format!("{k:?},(1..1) is nonzero"));
            }
        }
    }
    Ok(format!("{checked} tuple pairs"))
}

fn oracle_names(cat: &Catalog) -> Vec<(String, ActionKind)> {
    let mut out = Vec::new();
    for name in cat.names() {
        let e = cat.entry(name).unwrap();
        if e.action == ActionKind::Other || e.slope.is_none() {
            continue;
        }
        out.push((name.to_string(), e.action));
        if !e.ns_flag || name.starts_with("epsbi") {
            out.push((format!("{name}-op"), e.action));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let cat = lib(Catalog::from_env())?;
    let w = Window::new(3, 3, 3);
    let (tw, bw) = factor_windows(w, 1);
    let names = oracle_names(&cat);
    let mut instances = 0;
    for (top, ta) in &names {
        let tt = lib(cat.table(top, tw))?;
        for (bot, ba) in &names {
            let bt = lib(cat.table(bot, bw))?;
            let formula = lib(boxc_dims(&tt, &bt, w))?;
            for (m, n, r) in (1..=3)
                .cartesian_product(1..=3)
                .cartesian_product(0..=3)
                .map(|((a, b), c)| (a, b, c))
            {
                let c = lib(boxc_dims_oracle(
                    OracleSide {
                        table: &tt,
                        action: *ta,
                    },
                    OracleSide {
                        table: &bt,
                        action: *ba,
                    },
                    m,
                    n,
                    r,
                ))?;
                let f = lib(formula.get(m, n, r))?;
                if c.mass != f || (c.max_stabilizer == 1 && Q::from_integer(c.classes.into()) != f) {
                    return fail(format!(
                        "{top} x {bot} at ({m},{n},{r}): oracle {} ({}), formula {f}",
                        c.classes, c.mass
                    ));
                }
                instances += 1;
            }
        }
    }

    let all: Vec<String> = cat.names().map(str::to_string).collect();
    let big = Window::new(3, 4, 3);
    let unit = unit_table(Window::new(4, 4, 3));
    for name in &all {
        if cat.entry(name).map_err(|e| e.to_string())?.slope.is_none() {
            continue;
        }
        let t = lib(cat.table(name, Window::new(4, 4, 3)))?;
        let want = lib(t.restrict_window(w))?;
        if lib(boxc_dims(&t, &unit, w))? != want || lib(boxc_dims(&unit, &t, w))? != want {
            return fail(format!("unit law fails for {name}"));
        }
    }
    let assoc = [
        "unit",
        "com",
        "lie",
        "as",
        "dend",
        "bilie-dual",
        "epsbi-dual",
        "lie-op",
        "as-op",
        "com-op",
    ];
    let mut triples = 0;
    for (a, b, c) in assoc
        .iter()
        .cartesian_product(assoc.iter())
        .cartesian_product(assoc.iter())
        .map(|((a, b), c)| (a, b, c))
    {
        let ta = lib(cat.table(a, Window::new(3, 4, 3)))?;
        let tb = lib(cat.table(b, Window::new(4, 4, 3)))?;
        let tc = lib(cat.table(c, Window::new(4, 3, 3)))?;
        let left = lib(boxc_dims(&lib(boxc_dims(&ta, &tb, big))?, &tc, w))?;
        let right = lib(boxc_dims(&ta, &lib(boxc_dims(&tb, &tc, big.transpose()))?, w))?;
        if left != right {
            return fail(format!("associativity fails for ({a}, {b}, {c})"));
        }
        triples += 1;
    }
    Ok(format!(
        "{} factors, {instances} oracle instances, {triples} triples",
        names.len()
    ))
}

fn criterion_3() -> Outcome {
    let cat = lib(Catalog::from_env())?;
    for (p, d) in [("com", "lie"), ("leib", "zinb"), ("as", "as"), ("dias", "dend")] {
        let r = lib(binary_check(&cat, p, d, 10))?;
        if !r.passed() {
            return fail(format!("({p},{d}) residual {:?}", r.residuals));
        }
    }
    Ok("4 pairs to order 10".into())
}

fn criterion_4() -> Outcome {
    let fp = lib(free_operad_series(8))?;
    let r = lib(check_operad_identity(&fp, &free_dual_series(8)))?;
    if !r.passed() {
        return fail(format!("functional equation residual {:?}", r.residuals));
    }
    let quad = lib(quadratic_residual(&fp))?;
    if !quad.is_zero() {
        return fail(format!("quadratic residual {quad}"));
    }
    Ok("total order 8".into())
}

fn criterion_5() -> Outcome {
    let cat = lib(Catalog::from_env())?;
    for v in 1..=3 {
        for (a, d) in [
            (format!("sym{v}"), format!("ext{v}")),
            (format!("ext{v}"), format!("sym{v}")),
        ] {
            let r = lib(algebra_check(&cat, &a, &d, 10))?;
            if !r.passed() {
                return fail(format!("({a},{d}) residual {:?}", r.residuals));
            }
        }
    }
    Ok("dim V = 1, 2, 3 to order 10".into())
}

fn nonzero(t: &DimTable) -> Vec<((usize, usize, usize), Q)> {
    t.entries()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.clone()))
        .collect()
}

fn criterion_6() -> Outcome {
    let cat = lib(Catalog::from_env())?;
    let w = Window::new(6, 6, 4);
    let big = identity_window(w, 1);
    let mut terms = 0;
    for (p, d) in [("bilie", "bilie-dual"), ("epsbi", "epsbi-dual")] {
        let (pt, dt) = (lib(cat.table(p, big))?, lib(cat.table(d, big))?);
        for ((m, n, r), v) in dt.entries() {
            let want = if m + n == r + 2 {
                if p == "bilie" {
                    q(1)
                } else {
                    Q::from_integer(factorial(m) * factorial(n))
                }
            } else {
                Q::zero()
            };
            if *v != want {
                return fail(format!("{d} at ({m},{n},{r}) is {v}"));
            }
        }
        let r = lib(check_catalog_pair(&cat, p, d, w))?;
        if !r.passed() {
            return fail(format!("({p},{d}) residual {:?}", r.residuals));
        }
        let e = lib(euler_koszul_table(&pt, &dt, w))?;
        if nonzero(&e) != vec![((1, 1, 0), q(1))] {
            return fail(format!("({p},{d}) euler characteristics {:?}", nonzero(&e)));
        }
        terms += pt.nonzero_count();
    }
    Ok(format!("window {w}, {terms} nonzero product entries"))
}

fn criterion_7() -> Outcome {
    let mut complexes = 0;
    for (name, upto) in [("as", 6), ("dend", 5), ("dias", 5)] {
        let mut e = NsOperad::new(lib(Presentation::builtin(name))?);
        let report = lib(e.is_koszul_upto(upto))?;
        if !report.acyclic {
            return fail(format!("{name}: homology at {:?}", report.witness()));
        }
        complexes += report.entries.len();
        for n in 2..=upto {
            for d in 1..n {
                for s in 2..=d.min(4) {
                    lib(e.check_bar_square(n, d, s))?;
                }
            }
        }
    }
    Ok(format!("{complexes} complexes acyclic"))
}

fn criterion_8() -> Outcome {
    let mut spaces = 0;
    for name in ["as", "dend", "dias", "mag", "nil", "free3", "free4"] {
        let pres = lib(Presentation::builtin(name))?;
        let mut e = NsOperad::new(pres.clone());
        let dual = lib(e.quadratic_dual_presentation())?;
        let mut de = NsOperad::new(dual.clone());
        let back = lib(de.quadratic_dual_presentation())?;
        for n in pres.quadratic_arities() {
            let (r, rp, rpp) = (pres.relation_space(n), dual.relation_space(n), back.relation_space(n));
            if r != rpp {
                return fail(format!("{name}: (R⊥)⊥ differs from R in arity {n}"));
            }
            if r.dim() + rp.dim() != e.free_dims(n, 2) {
                return fail(format!("{name}: dim R + dim R⊥ != dim F_(2) in arity {n}"));
            }
            spaces += 1;
        }
    }
    Ok(format!("{spaces} relation spaces"))
}

fn criterion_9() -> Outcome {
    let r = lib(stasheff_check(7, 8))?;
    if !r.passed() {
        return fail(format!(
            "census {:?}, quadratic {:?}",
            r.census.residuals, r.quadratic.residuals
        ));
    }
    if r.polynomials[1] != ["2", "1"] || r.polynomials[2] != ["5", "5", "1"] {
        return fail(format!("low polynomials {:?}", &r.polynomials[..3]));
    }
    Ok("n <= 7, quadratic to total order 8".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("connected permutation counts", criterion_1),
        ("connected product against the structural oracle", criterion_2),
        ("binary functional equations", criterion_3),
        ("two-variable operadic equation", criterion_4),
        ("algebra equation", criterion_5),
        ("properad identity and Euler characteristics", criterion_6),
        ("ns Koszul homology and d^2 = 0", criterion_7),
        ("duality involution", criterion_8),
        ("Stasheff series", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
