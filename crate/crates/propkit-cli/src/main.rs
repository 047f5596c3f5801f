//! `propkit` command-line front end.
//!
//! Exit codes: 0 pass, 1 identity failure, 2 usage, 3 capability, 4 internal invariant.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use propkit::combinatorics::{connected_count, connected_permutations, BlockTuple};
use propkit::dims::{euler_koszul_table, Catalog, Window};
use propkit::nsoperad::{NsOperad, Presentation};
use propkit::poincare::{
    algebra_check, binary_check, check_catalog_pair, check_operad_identity, free_dual_series, free_operad_series,
    identity_window, stasheff_check, Report, Residual, Status,
};
use propkit::rational::fmt_q;
use propkit::Error;

#[derive(Parser)]
#[command(
    name = "propkit",
    version,
    about = "Exact dimension and Koszul duality checks for operads and properads"
)]
struct Cli {
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count connected permutations for block tuples k and j.
    Connperm {
        #[arg(long, value_parser = parse_tuple)]
        k: BlockTuple,
        #[arg(long, value_parser = parse_tuple)]
        j: BlockTuple,
        /// Also print every connected permutation in one-line notation.
        #[arg(long)]
        list: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run a functional-equation or homology check and emit a JSON report.
    #[command(subcommand)]
    Check(Check),
    /// Dump a catalog dimension table as CSV rows m,n,rho,dim.
    Dims {
        #[arg(long)]
        entry: String,
        #[arg(long, default_value = "3,3,3", value_parser = parse_window)]
        window: Window,
        /// Include zero entries.
        #[arg(long)]
        all: bool,
    },
    /// Print a presentation as JSON, or its quadratic dual.
    Presentation {
        /// Builtin name (as, dend, dias, mag, nil, free<k>) or a JSON file.
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        dual: bool,
    },
}

#[derive(Subcommand)]
enum Check {
    /// f_dual(f(x)) = x for binary operads.
    Series {
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// f(x) f_dual(-x) = 1 for quadratic algebras.
    Algebra {
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// f_dual(f(x,y), -y) = x for the free operad, plus its quadratic relation.
    Operad {
        #[arg(long, default_value_t = 8)]
        total: usize,
    },
    /// The Psi identity for a properad pair.
    Properad(PairWindow),
    /// Koszul complex homology of a ns presentation.
    Koszul {
        /// Builtin name or a JSON file.
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 6)]
        upto: usize,
    },
    /// Closed form against planar-tree cells, and the quadratic relation.
    Stasheff {
        #[arg(long, default_value_t = 7)]
        upto: usize,
        #[arg(long, default_value_t = 8)]
        total: usize,
    },
    /// Euler characteristics of the Koszul complex from dimensions.
    Euler(PairWindow),
}

#[derive(Args)]
struct PairWindow {
    /// `p` (dual taken from the catalog) or `p,dual`.
    #[arg(long)]
    pair: String,
    #[arg(long, visible_alias = "orders", default_value = "6,6,4", value_parser = parse_window)]
    window: Window,
}

fn parse_tuple(s: &str) -> Result<BlockTuple, String> {
    let parts = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("{s:?} is not a comma-separated list of sizes"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    BlockTuple::new(parts).map_err(|e| e.to_string())
}

fn parse_window(s: &str) -> Result<Window, String> {
    Window::parse(s).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Argument(_) | Error::Parse(_) | Error::Unknown(_) => 2,
        Error::Capability(_) | Error::WindowOverflow { .. } => 3,
        Error::Invariant(_) => 4,
    }
}

struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn json(value: &Value, passed: bool) -> Output {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        Output { text, passed }
    }

    fn report(r: &Report) -> Output {
        Output::json(&serde_json::to_value(r).expect("serializable"), r.passed())
    }
}

fn pair(catalog: &Catalog, spec: &str) -> propkit::Result<(String, String)> {
    match spec.split_once(',') {
        Some((p, d)) => {
            catalog.entry(p)?;
            catalog.entry(d)?;
            Ok((p.trim().to_string(), d.trim().to_string()))
        }
        None => {
            let e = catalog.entry(spec)?;
            let d = e
                .dual_name
                .ok_or_else(|| Error::Unknown(format!("no dual recorded for {spec:?}")))?;
            Ok((spec.to_string(), d))
        }
    }
}

fn load_presentation(spec: &str) -> propkit::Result<Presentation> {
    let path = Path::new(spec);
    if path.extension().is_some_and(|e| e == "json") || path.exists() {
        Presentation::load(path)
    } else {
        Presentation::builtin(spec)
    }
}

fn connperm(k: &BlockTuple, j: &BlockTuple, list: bool, as_json: bool) -> propkit::Result<Output> {
    let count = connected_count(k, j)?;
    let words: Vec<String> = if list {
        connected_permutations(k, j)?
            .iter()
            .map(|p| p.word().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect()
    } else {
        Vec::new()
    };
    if as_json {
        let mut v = json!({"k": k.parts(), "j": j.parts(), "count": count});
        if list {
            v["permutations"] = json!(words);
        }
        return Ok(Output::json(&v, true));
    }
    let mut text = format!("count {count}\n");
    for w in words {
        text.push_str(&w);
        text.push('\n');
    }
    Ok(Output { text, passed: true })
}

fn euler(catalog: &Catalog, p: &str, d: &str, window: Window) -> propkit::Result<Output> {
    let slope = catalog.entry(p)?.slope.max(catalog.entry(d)?.slope).unwrap_or(1);
    let big = identity_window(window, slope);
    let table = euler_koszul_table(&catalog.table(p, big)?, &catalog.table(d, big)?, window)?;
    let residuals: Vec<Residual> = table
        .entries()
        .filter(|(k, _)| *k != (1, 1, 0))
        .map(|((m, n, rho), v)| Residual {
            exponents: BTreeMap::from([("m".into(), m), ("n".into(), n), ("rho".into(), rho)]),
            value: fmt_q(v),
        })
        .collect();
    let unit_ok = table.get(1, 1, 0)? == propkit::rational::q(1);
    let report = Report {
        identity: format!("euler_koszul({p}, {d}) = unit"),
        orders: BTreeMap::from([
            ("m".into(), window.m),
            ("n".into(), window.n),
            ("rho".into(), window.rho),
        ]),
        status: if residuals.is_empty() && unit_ok {
            Status::Pass
        } else {
            Status::Fail
        },
        residuals,
    };
    Ok(Output::report(&report))
}

fn run(cli: &Cli) -> propkit::Result<Output> {
    match &cli.command {
        Command::Connperm { k, j, list, json } => connperm(k, j, *list, *json),
        Command::Dims { entry, window, all } => {
            let t = Catalog::from_env()?.table(entry, *window)?;
            let text = if *all { t.to_csv() } else { t.to_csv_nonzero() };
            Ok(Output { text, passed: true })
        }
        Command::Presentation { presentation, dual } => {
            let mut pres = load_presentation(presentation)?;
            if *dual {
                pres = NsOperad::new(pres).quadratic_dual_presentation()?;
            }
            Ok(Output::json(&pres.to_json(), true))
        }
        Command::Check(check) => match check {
            Check::Series { pair: spec, order } => {
                let cat = Catalog::from_env()?;
                let (p, d) = pair(&cat, spec)?;
                Ok(Output::report(&binary_check(&cat, &p, &d, *order)?))
            }
            Check::Algebra { pair: spec, order } => {
                let cat = Catalog::from_env()?;
                let (p, d) = pair(&cat, spec)?;
                Ok(Output::report(&algebra_check(&cat, &p, &d, *order)?))
            }
            Check::Operad { total } => {
                let fp = free_operad_series(*total)?;
                let identity = check_operad_identity(&fp, &free_dual_series(*total))?;
                let quadratic = Report::from_residual(
                    "(y+1) f^2 - (1+x) f + x = 0",
                    &propkit::poincare::quadratic_residual(&fp)?,
                );
                Ok(Output::report(&Report::merge(
                    "free operad functional equations",
                    &[identity, quadratic],
                )))
            }
            Check::Properad(args) => {
                let cat = Catalog::from_env()?;
                let (p, d) = pair(&cat, &args.pair)?;
                Ok(Output::report(&check_catalog_pair(&cat, &p, &d, args.window)?))
            }
            Check::Euler(args) => {
                let cat = Catalog::from_env()?;
                let (p, d) = pair(&cat, &args.pair)?;
                euler(&cat, &p, &d, args.window)
            }
            Check::Koszul { presentation, upto } => {
                let report = NsOperad::new(load_presentation(presentation)?).is_koszul_upto(*upto)?;
                let mut v = serde_json::to_value(&report).expect("serializable");
                v["status"] = json!(if report.acyclic { "pass" } else { "fail" });
                Ok(Output::json(&v, report.acyclic))
            }
            Check::Stasheff { upto, total } => {
                let report = stasheff_check(*upto, *total)?;
                let mut v = serde_json::to_value(&report).expect("serializable");
                v["status"] = json!(if report.passed() { "pass" } else { "fail" });
                Ok(Output::json(&v, report.passed()))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
