use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatrat::automata::{expr_to_nfa, Label, RatExpr};
use flatrat::commensurator::{hg_coset_reps, sl_index};
use flatrat::dichotomy::{classify_extension_bounded, DichotomyResult, FACTOR_BOUND};
use flatrat::error::{Error, Limits, Result};
use flatrat::exact_linear::{smith_normal_form, Mat2};
use flatrat::flat_rat::{bool_comb_empty, FlatExpr, Monoid};
use flatrat::oracle::{oracle_member, OracleAnswer};
use flatrat::singular::monoid_member;
use flatrat::syntax::{self, Parser as ExprParser};

#[derive(Parser)]
#[command(name = "flatrat", version, about = "Decision procedures for rational subsets of GL(2,Q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Maximum number of automaton states built by a single construction.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_states: usize,
    /// Maximum number of coset representatives (default: derived from the index bound).
    #[arg(long, global = true)]
    max_cosets: Option<usize>,
    /// Maximum number of saturation rounds.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    saturation: usize,
    /// Trial division bound for prime factorizations.
    #[arg(long, global = true, default_value_t = FACTOR_BOUND)]
    factor_bound: u64,
    /// Extra matrix names, e.g. `--def A=[[2,0],[0,2]]`.
    #[arg(long = "def", global = true, value_name = "NAME=MATRIX")]
    defs: Vec<String>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form g = r·e·diag(1,q)·f.
    Snf { matrix: String },
    /// Membership of a matrix in a flat rational set.
    Member {
        matrix: String,
        expr: String,
        #[arg(long, value_enum, default_value_t = MonoidTag::Gl2z)]
        monoid: MonoidTag,
    },
    /// Emptiness of a Boolean combination of flat rational sets over GL(2,Z).
    Empty { expr: String },
    /// Classify the group generated by GL(2,Z) and the given matrices.
    Classify { generators: Vec<String> },
    /// Coset representatives of H_g = {h : g⁻¹hg ∈ GL(2,Z)} in GL(2,Z).
    Cosets { matrix: String },
    /// Bounded brute-force membership search.
    Oracle {
        matrix: String,
        expr: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MonoidTag {
    #[value(name = "GL2Z")]
    Gl2z,
    #[value(name = "P2Q")]
    P2q,
    #[value(name = "P")]
    P,
    #[value(name = "Pprime")]
    PPrime,
}

impl From<MonoidTag> for Monoid {
    fn from(t: MonoidTag) -> Monoid {
        match t {
            MonoidTag::Gl2z => Monoid::Gl2z,
            MonoidTag::P2q => Monoid::P2q,
            MonoidTag::P => Monoid::P,
            MonoidTag::PPrime => Monoid::PPrime,
        }
    }
}

struct Ctx {
    limits: Limits,
    names: Vec<(String, Mat2)>,
    factor_bound: u64,
}

impl Ctx {
    fn parser<'a>(&self, text: &'a str) -> ExprParser<'a> {
        let mut p = ExprParser::new(text);
        for (n, m) in &self.names {
            p.define(n, m.clone());
        }
        p
    }

    fn matrix(&self, text: &str) -> Result<Mat2> {
        if let Some((_, m)) = self.names.iter().find(|(n, _)| n == text.trim()) {
            return Ok(m.clone());
        }
        syntax::parse_matrix(text)
    }

    fn flat(&self, text: &str) -> Result<FlatExpr> {
        let mut p = self.parser(text);
        let e = p.flat()?;
        p.finish()?;
        Ok(e)
    }
}

fn mat_json(m: &Mat2) -> Value {
    Value::String(m.to_string())
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Value> {
    let limits = &ctx.limits;
    Ok(match &cli.command {
        Command::Snf { matrix } => {
            let g = ctx.matrix(matrix)?;
            let s = smith_normal_form(&g)?;
            json!({
                "command": "snf",
                "r": s.r.to_string(),
                "q": s.q.to_string(),
                "e": mat_json(&s.e),
                "f": mat_json(&s.f),
            })
        }
        Command::Member { matrix, expr, monoid } => {
            let g = ctx.matrix(matrix)?;
            let e = ctx.flat(expr)?;
            let verdict = monoid_member(&g, &e, (*monoid).into(), limits)?;
            json!({ "command": "member", "verdict": verdict })
        }
        Command::Empty { expr } => {
            let mut p = ctx.parser(expr);
            let c = p.bool_or_flat()?;
            let verdict = bool_comb_empty(&c, limits)?;
            json!({ "command": "empty", "verdict": verdict })
        }
        Command::Classify { generators } => {
            let gens = generators.iter().map(|g| ctx.matrix(g)).collect::<Result<Vec<_>>>()?;
            match classify_extension_bounded(&gens, ctx.factor_bound)? {
                DichotomyResult::DirectProduct { k } => json!({
                    "command": "classify",
                    "case": "DirectProduct",
                    "k": k,
                }),
                DichotomyResult::ContainsBS { q, b, t } => json!({
                    "command": "classify",
                    "case": "ContainsBS",
                    "q": q.to_string(),
                    "b": mat_json(&b),
                    "t": mat_json(&t),
                }),
            }
        }
        Command::Cosets { matrix } => {
            let g = ctx.matrix(matrix)?;
            let table = hg_coset_reps(&g, limits)?;
            let budget = limits.cosets.unwrap_or(limits.states);
            json!({
                "command": "cosets",
                "count": table.len(),
                "sl_index": sl_index(&g, budget)?,
                "representatives": table.reps().iter().map(mat_json).collect::<Vec<_>>(),
            })
        }
        Command::Oracle { matrix, expr, bound } => {
            let g = ctx.matrix(matrix)?;
            let mut p = ctx.parser(expr);
            let e = p.rexpr()?;
            p.finish()?;
            let e = finite_labels(&e)?;
            match oracle_member(&g, &expr_to_nfa(&e), *bound)? {
                OracleAnswer::Member(w) => json!({
                    "command": "oracle",
                    "verdict": true,
                    "witness": w.iter().map(mat_json).collect::<Vec<_>>(),
                }),
                OracleAnswer::NotFoundUpTo(n) => json!({
                    "command": "oracle",
                    "verdict": Value::Null,
                    "searched_up_to": n,
                }),
            }
        }
    })
}

fn finite_labels(e: &RatExpr<Label>) -> Result<RatExpr<Mat2>> {
    let mut bad = None;
    let out = e.map_atoms(&mut |l| match l {
        Label::Mat(m) => RatExpr::Atom(m.clone()),
        Label::Named(n) => {
            bad = Some(n.to_string());
            RatExpr::Empty
        }
    });
    match bad {
        Some(n) => Err(Error::Unsupported(format!("the oracle needs explicit matrices, found {n}"))),
        None => Ok(out),
    }
}

fn human(v: &Value) -> String {
    let Some(obj) = v.as_object() else {
        return v.to_string();
    };
    obj.iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}: {s}"),
            Value::Array(a) => format!(
                "{k}: {}",
                a.iter().map(|x| x.as_str().map_or(x.to_string(), str::to_string)).collect::<Vec<_>>().join(" ")
            ),
            v => format!("{k}: {v}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut names = Vec::new();
    for d in &cli.defs {
        let parsed = d
            .split_once('=')
            .ok_or_else(|| format!("definition '{d}' is not NAME=MATRIX"))
            .and_then(|(n, m)| syntax::parse_matrix(m).map(|m| (n.trim().to_string(), m)).map_err(|e| e.to_string()));
        match parsed {
            Ok(p) => names.push(p),
            Err(e) => {
                eprintln!("{}", json!({ "error": "input", "message": e }));
                return ExitCode::from(1);
            }
        }
    }
    let ctx = Ctx {
        limits: Limits {
            states: cli.max_states,
            cosets: cli.max_cosets,
            saturation: cli.saturation,
        },
        names,
        factor_bound: cli.factor_bound,
    };
    let start = Instant::now();
    match run(&cli, &ctx) {
        Ok(mut v) => {
            v["stats"] = json!({ "elapsed_ms": start.elapsed().as_millis() as u64 });
            if cli.human {
                println!("{}", human(&v));
            } else {
                println!("{v}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let kind = match e {
                Error::ResourceLimit { .. } => "resource_limit",
                Error::Parse { .. } => "parse",
                _ => "input",
            };
            let mut record = json!({ "error": kind, "message": e.to_string() });
            if let Error::Parse { line, column, .. } = e {
                record["line"] = json!(line);
                record["column"] = json!(column);
            }
            eprintln!("{record}");
            ExitCode::from(if kind == "resource_limit" { 2 } else { 1 })
        }
    }
}
