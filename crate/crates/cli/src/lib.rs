//! Command-line front end for `charq`.
//!
//! Exit codes: 0 success or found, 1 check failed or not found, 2 invalid input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use charq::classify::{classify_dicyclic, group_by_name, split_cover_construct};
use charq::covers::find_balanced_group_cover_with;
use charq::{
    CayleyTable, CharacterTable, Error, LiftOptions, MetacyclicParams, OrbitTable, SearchOptions, WeightedQuasigroup,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "charq", version, about = "Characters and covers of metacyclic groups")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct ParamsArg {
    /// Group parameters `k,l,m,n` of M(k,l,m,n); pass negative k as `--params=-1,0,2,4`.
    #[arg(long, allow_hyphen_values = true)]
    pub params: String,
}

impl ParamsArg {
    fn parse(&self) -> Result<MetacyclicParams, Failure> {
        let parts: Vec<&str> = self.params.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Failure::Invalid(anyhow!("--params needs four comma-separated integers k,l,m,n, got {:?}", self.params)));
        }
        let mut v = [0i64; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| Failure::Invalid(anyhow!("not an integer: {p:?}")))?;
        }
        Ok(MetacyclicParams::validate(v[0], v[1], v[2], v[3])?)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the parameter conditions.
    Validate(ParamsArg),
    /// Orbit table of multiplication by k on Z/n.
    Info(ParamsArg),
    /// Irreducible character table.
    Chartable(ParamsArg),
    /// Weighted character quasigroup.
    Wcq(ParamsArg),
    /// The count S(a,b,c).
    Sabc {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(short)]
        a: usize,
        #[arg(short)]
        b: usize,
        #[arg(short)]
        c: usize,
    },
    /// Search for a quasigroup lifting the character quasigroup.
    Lift {
        #[command(flatten)]
        params: ParamsArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node cap.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Require a balanced lift.
        #[arg(long)]
        balanced: bool,
    },
    /// Search for a balanced cover by a group.
    Cover {
        #[command(flatten)]
        params: ParamsArg,
        /// Catalog name (C4xC2, D4, Dic2, A4, M(k,l,m,n), ...) or a Cayley table file.
        #[arg(long)]
        group: String,
        /// Node cap; unlimited by default.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Which catalog groups balanced-cover Dic_l.
    ClassifyDicyclic {
        #[arg(short)]
        l: usize,
    },
    /// Build the split cover C_n x| C_m of M(k,0,m,n) with b = k^sigma.
    SplitCover {
        #[arg(short)]
        n: i64,
        #[arg(short)]
        m: i64,
        #[arg(short)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::GcdViolation { .. }
            | Error::OrderCongruenceViolation { .. }
            | Error::TwistCongruenceViolation { .. }
            | Error::NotLatin(_)
            | Error::NotAGroup(_)
            | Error::OrderMismatch { .. }
            | Error::TooLarge(_)
            | Error::LabelOutOfRange { .. }
            | Error::IllPosed(_)
            | Error::OddDegree(_)
            | Error::SizeMismatch(_)
            | Error::InvalidSigma(_)
            | Error::Parse(_) => Failure::Invalid(e.into()),
            _ => Failure::Other(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(found) => Outcome { code: if found { 0 } else { 1 }, stdout: out, stderr: String::new() },
        Err(Failure::Invalid(e)) => Outcome { code: 2, stdout: out, stderr: format!("error: {e:#}\n") },
        Err(Failure::Other(e)) => Outcome { code: 1, stdout: out, stderr: format!("error: {e:#}\n") },
    }
}

/// Runs `argv` and writes to the process streams; returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let o = run(argv);
    let _ = std::io::stdout().write_all(o.stdout.as_bytes());
    let _ = std::io::stderr().write_all(o.stderr.as_bytes());
    o.code
}

fn emit(out: &mut String, format: Format, value: Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            out.push_str(&serde_json::to_string_pretty(&value).expect("json"));
            out.push('\n');
        }
        Format::Text => out.push_str(&text()),
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<bool, Failure> {
    let f = cli.format;
    match &cli.command {
        Command::Validate(p) => {
            let params = p.parse()?;
            emit(out, f, json!({ "params": params, "name": params.to_string(), "order": params.order() }), || {
                format!("{params} is valid, order {}\n", params.order())
            });
            Ok(true)
        }
        Command::Info(p) => {
            let t = OrbitTable::new(p.parse()?);
            emit(out, f, t.to_json(), || orbit_text(&t));
            Ok(true)
        }
        Command::Chartable(p) => {
            let ct = CharacterTable::new(p.parse()?);
            let text = chartable_text(&ct)?;
            emit(out, f, ct.to_json(), || text);
            Ok(true)
        }
        Command::Wcq(p) => {
            let ct = CharacterTable::new(p.parse()?);
            let w = WeightedQuasigroup::from_character_table(&ct)?;
            emit(out, f, w.to_json(), || w.render_table());
            Ok(true)
        }
        Command::Sabc { params, a, b, c } => {
            let p = params.parse()?;
            let n = p.n();
            if *a >= n || *b >= n || *c >= n {
                return Err(Failure::Invalid(anyhow!("a, b and c must be residues below n={n}")));
            }
            let v = OrbitTable::new(p).s_count(*a, *b, *c);
            emit(out, f, json!({ "a": a, "b": b, "c": c, "S": v }), || format!("{v}\n"));
            Ok(true)
        }
        Command::Lift { params, seed, budget, balanced } => {
            let p = params.parse()?;
            let ct = CharacterTable::new(p);
            let target = WeightedQuasigroup::from_character_table(&ct)?;
            let opts = LiftOptions { seed: *seed, budget: *budget, balanced: *balanced, ..LiftOptions::default() };
            match charq::covers::find_lift(&target, &opts) {
                Ok(cov) => {
                    let report = cov.check();
                    let is_balanced = cov.is_balanced()?;
                    let mut v = cov.to_json();
                    v["params"] = json!(p.to_string());
                    v["balanced"] = json!(is_balanced);
                    emit(out, f, v, || {
                        let mut s = format!("lift of the character quasigroup of {p} (balanced: {is_balanced})\n");
                        for (q, &x) in cov.labels().iter().enumerate() {
                            let _ = writeln!(s, "{q} -> {}", target.labels()[x]);
                        }
                        s.push_str(&cov.quasigroup().to_text());
                        s
                    });
                    Ok(report.passed())
                }
                Err(e @ (Error::BudgetExhausted { .. } | Error::NotACover(_))) => {
                    emit(out, f, json!({ "params": p.to_string(), "found": false, "reason": e.to_string() }), || {
                        format!("no lift found: {e}\n")
                    });
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Cover { params, group, budget } => {
            let p = params.parse()?;
            let (name, table) = load_group(group)?;
            let opts = SearchOptions { budget: *budget, ..SearchOptions::default() };
            match find_balanced_group_cover_with(&p, &table, &opts) {
                Ok(Some(blocks)) => {
                    let mut v = blocks.to_json();
                    v["params"] = json!(p.to_string());
                    v["group"] = json!(name);
                    v["found"] = json!(true);
                    emit(out, f, v, || {
                        let mut s = format!("{name} balanced-covers {p}\n");
                        for (lbl, els) in blocks.blocks() {
                            let names: Vec<String> = els.iter().map(|&e| table.element_name(e)).collect();
                            let _ = writeln!(s, "S[{lbl}] = {{{}}}", names.join(", "));
                        }
                        s
                    });
                    Ok(true)
                }
                Ok(None) => {
                    emit(out, f, json!({ "params": p.to_string(), "group": name, "found": false }), || {
                        format!("{name} does not balanced-cover {p}\n")
                    });
                    Ok(false)
                }
                Err(e @ Error::BudgetExhausted { .. }) => {
                    emit(out, f, json!({ "params": p.to_string(), "group": name, "found": false, "reason": e.to_string() }), || {
                        format!("undecided: {e}\n")
                    });
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::ClassifyDicyclic { l } => {
            if *l < 2 {
                return Err(Failure::Invalid(anyhow!("l must be at least 2")));
            }
            let c = classify_dicyclic(*l)?;
            let text = || {
                let mut s = format!("Dic{l}: predicted {}\n", names(c.predicted.iter().map(String::as_str)));
                s.push_str(&format!("found {}\n", names(c.found().map(|o| o.group.as_str()))));
                for o in c.mismatches() {
                    let what = if o.predicted { "predicted but not found" } else { "found but not predicted" };
                    let _ = writeln!(s, "mismatch: {} {what}", o.group);
                }
                let _ = writeln!(s, "match: {}", c.matches());
                s
            };
            emit(out, f, c.to_json(), text);
            Ok(c.matches())
        }
        Command::SplitCover { n, m, k, sigma } => {
            let c = split_cover_construct(*n, *m, *k, *sigma)?;
            let ok = c.hypotheses.passed() && c.balanced;
            emit(out, f, c.to_json(), || {
                let mut s = format!(
                    "{} over {}: hypotheses {}, balanced {}\n",
                    c.witness.table.name().unwrap_or("Q"),
                    c.target,
                    c.hypotheses.passed(),
                    c.balanced
                );
                for (lbl, els) in c.blocks.blocks() {
                    let _ = writeln!(s, "S[{lbl}] = {els:?}");
                }
                s
            });
            Ok(ok)
        }
    }
}

fn names<'a>(it: impl Iterator<Item = &'a str>) -> String {
    let v: Vec<&str> = it.collect();
    format!("[{}]", v.join(", "))
}

fn load_group(source: &str) -> Result<(String, CayleyTable), Failure> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
        let table = CayleyTable::parse(&text)?;
        return Ok((source.to_string(), table));
    }
    let g = group_by_name(source)?;
    Ok((g.name, g.table))
}

fn orbit_text(t: &OrbitTable) -> String {
    let mut s = format!("{}\n", t.params());
    let _ = writeln!(s, "{:>4} {:>4} {:>4}  orbit", "a", "r_a", "s_a");
    for &a in t.reps() {
        let _ = writeln!(s, "{a:>4} {:>4} {:>4}  {:?}", t.r(a), t.s(a), t.orbit(a));
    }
    s
}

fn chartable_text(ct: &CharacterTable) -> Result<String, Failure> {
    let p = ct.params();
    let reps: Vec<_> = ct.classes().iter().map(|&(g, _)| p.element(g)).collect();
    let mut s = format!("{p}, values in Q(z), z = exp(2 pi i / {})\n", ct.context().order());
    let header: Vec<String> = reps.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(s, "class reps: {}", header.join(" | "));
    for &lbl in ct.labels() {
        let vals = reps.iter().map(|&g| ct.char_value(lbl, g).map(|v| v.to_string())).collect::<Result<Vec<_>, _>>()?;
        let _ = writeln!(s, "{} (deg {}): {}", charq::wqg::character_name(lbl), ct.degree(lbl), vals.join(" | "));
    }
    Ok(s)
}
