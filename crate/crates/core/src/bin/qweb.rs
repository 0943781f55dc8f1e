//! Command-line front end: evaluation, catalog checks, Sergeev algebra and
//! shifted combinatorics. Results go to stdout as JSON lines, summaries to
//! stderr. Exit status: 0 success, 1 a check failed, 2 usage or input error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qweb::catalog::{self, Ranges, Status};
use qweb::qfunctor;
use qweb::sergeev::{self, SergeevElt};
use qweb::shifted::{self, StrictPartition};
use qweb::web::{self, ObjectWord};

#[derive(Parser)]
#[command(name = "qweb", version, about = "Exact evaluation and verification of type-Q webs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a web under Ψₙ and print its matrix.
    Eval {
        #[arg(short)]
        n: usize,
        /// Web in the DSL, e.g. "merge(1,1) ; split(1,1)".
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        web: Option<String>,
        /// Read the web from a file instead.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        /// Also print the domain and codomain basis labels.
        #[arg(long)]
        basis: bool,
        /// `json` prints the typechecked AST instead of the matrix.
        #[arg(long, value_parser = ["json"])]
        emit: Option<String>,
    },
    /// Run the relation catalog.
    Check {
        /// Group id (e.g. R4), check name, or group/name.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        kmax: Option<i64>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Report ms = 0 so output is byte-for-byte reproducible.
        #[arg(long)]
        no_timing: bool,
        /// List catalog entries without running them.
        #[arg(long)]
        list: bool,
    },
    /// Computations in the Sergeev algebra.
    #[command(subcommand)]
    Sergeev(SergeevCmd),
    /// Shifted Littlewood-Richardson coefficient f^μ_{λν}.
    Lr {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
    },
    /// Schur P-polynomial P_λ(x₁..x_m).
    Schurp {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        vars: usize,
    },
    /// The staircase tableau of shape μ/λ(n).
    Staircase {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        n: usize,
    },
    /// Dimensions of equivariant hom spaces between evaluated words.
    Homdim {
        #[arg(short)]
        n: usize,
        /// Word such as "^1^1" or "^2v1".
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Args)]
struct KArg {
    /// Number of strands.
    #[arg(short)]
    k: usize,
}

#[derive(Subcommand)]
enum SergeevCmd {
    /// Product x·y in Ser_k.
    Mul {
        #[command(flatten)]
        k: KArg,
        x: String,
        y: String,
    },
    /// The quasi-idempotent e_λ and its constant κ_λ.
    Elambda {
        #[arg(long)]
        lambda: String,
    },
    /// The symmetriser Cl_k.
    Clasp {
        #[command(flatten)]
        k: KArg,
    },
    /// The matrix ψ(x) on V_n^{⊗k}.
    Psi {
        #[command(flatten)]
        k: KArg,
        #[arg(short)]
        n: usize,
        x: String,
    },
}

/// Failure modes mapped onto exit codes.
enum Fail {
    Usage(String),
    Checks,
}

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail::Usage(e.to_string())
    }
}

fn partition(s: &str) -> Result<StrictPartition, Fail> {
    let parts = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(|p| p.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>()?
    };
    Ok(StrictPartition::new(parts)?)
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Eval { n, web: text, file, basis, emit } => {
            let text = match (text, file) {
                (Some(t), _) => t,
                (None, Some(path)) => std::fs::read_to_string(path)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let (w, dom, cod) = web::parse_typed(text.trim())?;
            if emit.is_some() {
                println!("{}", json!({ "domain": dom.to_string(), "codomain": cod.to_string(), "ast": web::to_json(&w) }));
                return Ok(());
            }
            let m = qfunctor::eval_web(n, &w)?;
            let mut out = m.to_json();
            if basis {
                out["domain_labels"] = json!(m.domain().labels());
                out["codomain_labels"] = json!(m.codomain().labels());
            }
            println!("{out}");
            eprintln!("{dom} -> {cod}: {} x {} with {} nonzero entries", m.nrows(), m.ncols(), m.nnz());
        }
        Cmd::Check { only, kmax, nmax, no_timing, list } => {
            if list {
                for c in catalog::catalog() {
                    println!("{}", json!({ "group": c.group, "name": c.name }));
                }
                return Ok(());
            }
            let mut ranges = Ranges::from_env()?;
            if let Some(k) = kmax {
                ranges.kmax = k;
            }
            if let Some(n) = nmax {
                ranges.nmax = n;
            }
            if let Some(f) = &only {
                if !catalog::catalog().iter().any(|c| c.matches(f)) {
                    return Err(Fail::Usage(format!("no catalog entry matches `{f}`")));
                }
            }
            let mut failed = 0;
            let mut total = 0;
            for spec in catalog::catalog().iter().filter(|c| only.as_deref().is_none_or(|f| c.matches(f))) {
                for mut r in spec.run(&ranges) {
                    if no_timing {
                        r.ms = 0;
                    }
                    total += 1;
                    if r.status == Status::Fail {
                        failed += 1;
                        eprintln!("FAIL {}/{} {}: {}", r.group, r.name, r.params, r.witness.as_deref().unwrap_or(""));
                    }
                    println!("{}", r.to_json_line());
                }
            }
            eprintln!("{total} results, {failed} failed");
            if failed > 0 {
                return Err(Fail::Checks);
            }
        }
        Cmd::Sergeev(cmd) => match cmd {
            SergeevCmd::Mul { k, x, y } => {
                let x = SergeevElt::parse(&x, k.k)?;
                let y = SergeevElt::parse(&y, k.k)?;
                println!("{}", json!({ "product": x.mul(&y)?.to_text() }));
            }
            SergeevCmd::Elambda { lambda } => {
                let lambda = partition(&lambda)?;
                let e = sergeev::e_lambda(&lambda)?;
                let kappa = e.mul(&e)?.ratio_to(&e).map(|s| s.to_string());
                println!("{}", json!({ "lambda": lambda.to_string(), "terms": e.len(), "kappa": kappa, "e": e.to_text() }));
            }
            SergeevCmd::Clasp { k } => {
                println!("{}", json!({ "k": k.k, "clasp": sergeev::clasp(k.k).to_text() }));
            }
            SergeevCmd::Psi { k, n, x } => {
                if n == 0 {
                    return Err(Fail::Usage("n must be at least 1".into()));
                }
                let x = SergeevElt::parse(&x, k.k)?;
                println!("{}", sergeev::psi_action(&x, n).to_json());
            }
        },
        Cmd::Lr { lambda, nu, mu } => {
            let (l, v, m) = (partition(&lambda)?, partition(&nu)?, partition(&mu)?);
            let f = shifted::lr_coefficient(&l, &v, &m);
            println!("{}", json!({ "lambda": l.to_string(), "nu": v.to_string(), "mu": m.to_string(), "coefficient": f }));
        }
        Cmd::Schurp { lambda, vars } => {
            let l = partition(&lambda)?;
            let terms: Vec<_> = shifted::schur_p(&l, vars).into_iter().map(|(e, c)| json!({ "exponent": e, "coeff": c })).collect();
            println!("{}", json!({ "lambda": l.to_string(), "vars": vars, "terms": terms }));
        }
        Cmd::Staircase { mu, n } => {
            let m = partition(&mu)?;
            let case = shifted::check_staircase(&m, n)?;
            let word: String = shifted::staircase_tableau(&m, n)?.word().iter().map(ToString::to_string).collect();
            println!("{}", json!({ "case": case, "word": word }));
            if !case.passed() {
                return Err(Fail::Checks);
            }
        }
        Cmd::Homdim { n, from, to } => {
            if n == 0 {
                return Err(Fail::Usage("n must be at least 1".into()));
            }
            let (a, b) = (ObjectWord::parse(&from)?, ObjectWord::parse(&to)?);
            let (even, odd) = qfunctor::hom_dim(n, &a, &b);
            println!("{}", json!({ "n": n, "from": a.to_string(), "to": b.to_string(), "even": even, "odd": odd }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Checks) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
