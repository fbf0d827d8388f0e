//! Command-line surface. Every command returns its artifact as a string so
//! that `main` only handles output and exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chevalley::{reference_mismatches, StructureConstants, UnipotentGroup};
use crate::error::{Error, Result};
use crate::field::{is_prime, Modulus};
use crate::growth::{self, BoundsRow, BOUNDS_CSV_HEADER};
use crate::matrix::FpMatrix;
use crate::oracle::{LengthTable, DEFAULT_STATE_CAP};
use crate::root_system::{LieType, RootSystem, RowPlan};
use crate::synth::{length_budget, synthesize};
use crate::word::WordFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "unipotent-diameter", version, about = "Words and diameter bounds for unipotent groups over Z/p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Lie type label.
    #[arg(long = "type", global = true, value_parser = parse_type)]
    pub lie_type: Option<LieType>,
    /// Rank.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Odd prime modulus.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Seed for random targets (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Positive roots and the row data for each row.
    Roots,
    /// Derived structure constants and their comparison with the reference table.
    Constants,
    /// Synthesize a word for an element (random from --seed unless --input is given).
    Synth {
        /// JSON file with {"coords": [...]} (by root id) or {"matrix": [[...]]}.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Evaluate a word file; reads stdin when --input is absent.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exhaustive sphere profile of the Cayley graph.
    Diameter {
        /// Largest admissible |U|.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: u128,
    },
    /// Inverse growth polynomials, word counts and the quarter evaluation.
    Growth {
        /// Number of series coefficients after the constant term.
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Lower and upper diameter bounds for ranks up to --n and odd primes up to --p.
    Bounds,
}

fn parse_type(s: &str) -> std::result::Result<LieType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub lie_type: Option<LieType>,
    pub rank: Option<usize>,
    pub modulus: Option<u64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let cfg = RunConfig {
            command: cli.command,
            lie_type: cli.lie_type,
            rank: cli.n,
            modulus: cli.p,
            seed: cli.seed,
            out: cli.out,
            format: cli.format,
        };
        if let Some(p) = cfg.modulus {
            Modulus::new(p)?;
        }
        if let (Some(lt), Some(n)) = (cfg.lie_type, cfg.rank) {
            if n < lt.min_rank() {
                return Err(Error::UnsupportedRank { label: lt.label(), rank: n, min: lt.min_rank() });
            }
        }
        Ok(cfg)
    }

    fn lie_type(&self) -> Result<LieType> {
        self.lie_type.ok_or_else(|| missing("--type"))
    }

    fn rank(&self) -> Result<usize> {
        self.rank.ok_or_else(|| missing("--n"))
    }

    fn prime(&self) -> Result<u64> {
        self.modulus.ok_or_else(|| missing("--p"))
    }

    fn root_system(&self) -> Result<RootSystem> {
        RootSystem::new(self.lie_type()?, self.rank()?)
    }
}

fn missing(flag: &str) -> Error {
    Error::Parse(format!("missing required flag {flag}"))
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. } => 3,
        _ => 2,
    }
}

/// One-line machine-parsable error report.
pub fn error_line(e: &Error) -> String {
    json!({ "error": error_kind(e), "code": exit_code(e), "message": e.to_string() }).to_string()
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UnsupportedRank { .. } => "unsupported_rank",
        Error::UnknownType(_) => "unknown_type",
        Error::BadModulus(_) => "bad_modulus",
        Error::RowOutOfRange { .. } => "row_out_of_range",
        Error::NotARoot => "not_a_root",
        Error::NotApplicable(_) => "not_applicable",
        Error::Mismatch(_) => "mismatch",
        Error::NotInGroup(_) => "not_in_group",
        Error::InconsistentConstants { .. } => "inconsistent_constants",
        Error::OutOfRange(_) => "out_of_range",
        Error::Infeasible { .. } => "infeasible",
        Error::GraphTooLarge(_) => "graph_too_large",
        Error::ZeroConstantTerm => "zero_constant_term",
        Error::Parse(_) => "parse",
    }
}

/// Runs a command and returns the artifact text.
pub fn run(cfg: &RunConfig) -> Result<String> {
    let mut out = match &cfg.command {
        Command::Roots => roots(cfg)?,
        Command::Constants => constants(cfg)?,
        Command::Synth { input } => synth(cfg, input.as_ref())?,
        Command::Verify { input } => verify(cfg, input.as_ref())?,
        Command::Diameter { cap } => diameter(cfg, *cap)?,
        Command::Growth { max_degree } => growth_cmd(cfg, *max_degree)?,
        Command::Bounds => bounds(cfg)?,
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}

fn ratio(c: Rational64) -> String {
    if *c.denom() == 1 {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize)]
struct RowReport {
    row: usize,
    circ_roots: Vec<Vec<u32>>,
    ordered_roots: Vec<Vec<u32>>,
    f: Vec<usize>,
    m: Vec<u32>,
    d: Vec<String>,
    kernel_root: Option<Vec<u32>>,
    kernel_d: Option<String>,
}

fn row_report(rs: &RootSystem, plan: &RowPlan) -> RowReport {
    let coeffs = |id: usize| rs.root(id).coeffs().to_vec();
    RowReport {
        row: plan.row_index,
        circ_roots: plan.circ_roots.iter().map(|&id| coeffs(id)).collect(),
        ordered_roots: plan.ordered_roots.iter().map(|&id| coeffs(id)).collect(),
        f: plan.f.clone(),
        m: plan.m.clone(),
        d: plan.d.iter().map(|&c| ratio(c)).collect(),
        kernel_root: plan.kernel_root.map(coeffs),
        kernel_d: plan.kernel_d.map(ratio),
    }
}

fn roots(cfg: &RunConfig) -> Result<String> {
    let rs = cfg.root_system()?;
    let sc = StructureConstants::derive(&rs)?;
    let plans = (1..=rs.rank()).map(|i| RowPlan::build(&rs, &sc, i)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<RowReport> = plans.iter().map(|pl| row_report(&rs, pl)).collect();
    match cfg.format {
        Format::Json => to_json(&json!({
            "type": rs.lie_type(),
            "n": rs.rank(),
            "positive_roots": rs.positive_roots().iter().map(|r| r.coeffs().to_vec()).collect::<Vec<_>>(),
            "rows": rows,
        })),
        Format::Csv => {
            let mut s = String::from("id,root,height\n");
            for (id, r) in rs.positive_roots().iter().enumerate() {
                let _ = writeln!(s, "{id},{},{}", join(r.coeffs(), " "), r.height());
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = format!("{}{}: {} positive roots\n", rs.lie_type(), rs.rank(), rs.len());
            for (id, r) in rs.positive_roots().iter().enumerate() {
                let _ = writeln!(s, "  {id:>3}  {r}  height {}", r.height());
            }
            for row in &rows {
                let _ = writeln!(
                    s,
                    "row {}: r = {}, f = {:?}, m = {:?}, d = [{}], kernel {:?}",
                    row.row,
                    row.ordered_roots.len(),
                    row.f,
                    row.m,
                    row.d.join(", "),
                    row.kernel_root
                );
            }
            Ok(s)
        }
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn constants(cfg: &RunConfig) -> Result<String> {
    let rs = cfg.root_system()?;
    let sc = StructureConstants::derive(&rs)?;
    let coeffs = |id: usize| rs.root(id).coeffs().to_vec();
    let mut pairs: Vec<_> = sc.pairs().collect();
    pairs.sort_by_key(|(k, _)| **k);
    let mismatches = reference_mismatches(&rs, &sc);
    match cfg.format {
        Format::Json => {
            let terms: Vec<_> = pairs
                .iter()
                .map(|((a, b), ts)| {
                    json!({
                        "alpha": coeffs(*a),
                        "beta": coeffs(*b),
                        "terms": ts.iter().map(|t| json!({"i": t.i, "j": t.j, "root": coeffs(t.root), "c": ratio(t.c)})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mism: Vec<_> = mismatches
                .iter()
                .map(|(row, got)| {
                    json!({
                        "alpha": coeffs(row.alpha),
                        "simple": row.simple,
                        "rule": row.rule,
                        "expected": row.expected.iter().map(|&(i, j, c)| json!({"i": i, "j": j, "c": ratio(c)})).collect::<Vec<_>>(),
                        "derived": got.iter().map(|t| json!({"i": t.i, "j": t.j, "c": ratio(t.c)})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&json!({"type": rs.lie_type(), "n": rs.rank(), "pairs": terms, "reference_mismatches": mism}))
        }
        Format::Csv => {
            let mut s = String::from("alpha,beta,i,j,root,c\n");
            for ((a, b), ts) in &pairs {
                for t in ts.iter() {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        rs.root(*a),
                        rs.root(*b),
                        t.i,
                        t.j,
                        rs.root(t.root),
                        ratio(t.c)
                    );
                }
            }
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            for ((a, b), ts) in &pairs {
                let body: Vec<String> =
                    ts.iter().map(|t| format!("c{}{} = {} on {}", t.i, t.j, ratio(t.c), rs.root(t.root))).collect();
                let _ = writeln!(s, "[{}, {}]: {}", rs.root(*a), rs.root(*b), body.join("; "));
            }
            let _ = writeln!(s, "reference table mismatches: {}", mismatches.len());
            for (row, got) in &mismatches {
                let derived: Vec<String> = got.iter().map(|t| format!("c{}{}={}", t.i, t.j, ratio(t.c))).collect();
                let expected: Vec<String> =
                    row.expected.iter().map(|&(i, j, c)| format!("c{i}{j}={}", ratio(c))).collect();
                let _ = writeln!(
                    s,
                    "  {} with a{}: expected {} derived {}",
                    rs.root(row.alpha),
                    row.simple,
                    expected.join(","),
                    derived.join(",")
                );
            }
            Ok(s)
        }
    }
}

#[derive(Deserialize)]
struct ElementInput {
    coords: Option<Vec<i64>>,
    matrix: Option<Vec<Vec<i64>>>,
}

/// Uniform random element of `U` from a seed, as coordinates by root id.
pub fn random_coordinates(rs: &RootSystem, p: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rs.len()).map(|_| rng.gen_range(0..p)).collect()
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(s)
        }
    }
}

fn element_from_input(g: &UnipotentGroup, text: &str) -> Result<FpMatrix> {
    let inp: ElementInput = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let md = g.modulus();
    match (inp.coords, inp.matrix) {
        (Some(c), None) => {
            if c.len() != g.rs.len() {
                return Err(Error::Parse(format!("expected {} coordinates, got {}", g.rs.len(), c.len())));
            }
            let c: Vec<u64> = c.iter().map(|&v| md.reduce(v)).collect();
            Ok(g.real.ordered_product(&g.real.row_order(), &c))
        }
        (None, Some(rows)) => {
            let dim = g.real.dim();
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Parse(format!("expected a {dim}x{dim} matrix")));
            }
            let flat: Vec<i64> = rows.concat();
            FpMatrix::from_rows(md, dim, &flat)
        }
        _ => Err(Error::Parse("give exactly one of \"coords\" or \"matrix\"".into())),
    }
}

fn synth(cfg: &RunConfig, input: Option<&PathBuf>) -> Result<String> {
    let lt = cfg.lie_type()?;
    let n = cfg.rank()?;
    let p = cfg.prime()?;
    let g = UnipotentGroup::new(lt, n, p)?;
    let u = match input {
        Some(path) => element_from_input(&g, &read_input(Some(path))?)?,
        None => {
            let c = random_coordinates(&g.rs, p, cfg.seed);
            g.real.ordered_product(&g.real.row_order(), &c)
        }
    };
    let coords = g.real.coordinates_in_order(&u, &g.real.row_order())?;
    let syn = synthesize(&g, &u)?;
    let verified = syn.word.evaluate(&g.real)? == u;
    let budget = length_budget(&g.rs, p).total;
    let wf = WordFile::new(lt, n, g.modulus(), &syn.word);
    match cfg.format {
        Format::Json => to_json(&json!({
            "type": wf.lie_type,
            "n": wf.n,
            "p": wf.p,
            "word": wf.word,
            "length": syn.word.len(),
            "budget": budget,
            "verified": verified,
            "coords": coords,
            "matrix": u.to_rows(),
        })),
        Format::Text => Ok(format!(
            "{lt}{n} mod {p}: length {} budget {budget} verified {verified}\nword {}\n",
            syn.word.len(),
            syn.word
        )),
        Format::Csv => Ok(format!(
            "type,n,p,length,budget,verified\n{lt},{n},{p},{},{budget},{verified}\n",
            syn.word.len()
        )),
    }
}

fn verify(cfg: &RunConfig, input: Option<&PathBuf>) -> Result<String> {
    let wf: WordFile = serde_json::from_str(&read_input(input)?).map_err(|e| Error::Parse(e.to_string()))?;
    for (flag, given, file) in [("--n", cfg.rank.map(|v| v as u64), wf.n as u64), ("--p", cfg.modulus, wf.p)] {
        if given.is_some_and(|g| g != file) {
            return Err(Error::Parse(format!("{flag} disagrees with the word file")));
        }
    }
    let g = UnipotentGroup::new(wf.lie_type, wf.n, wf.p)?;
    let w = wf.to_word()?;
    let m = w.evaluate(&g.real)?;
    let coords = g.real.coordinates_in_order(&m, &g.real.row_order())?;
    match cfg.format {
        Format::Json => to_json(&json!({
            "type": wf.lie_type,
            "n": wf.n,
            "p": wf.p,
            "length": w.len(),
            "coords": coords,
            "matrix": m.to_rows(),
        })),
        Format::Text => {
            let mut s = String::new();
            for row in m.to_rows() {
                let _ = writeln!(s, "{}", join(&row, " "));
            }
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::new();
            for row in m.to_rows() {
                let _ = writeln!(s, "{}", join(&row, ","));
            }
            Ok(s)
        }
    }
}

fn diameter(cfg: &RunConfig, cap: u128) -> Result<String> {
    let rs = cfg.root_system()?;
    let table = LengthTable::build(&rs, cfg.prime()?, cap)?;
    let prof = table.profile();
    match cfg.format {
        Format::Json => to_json(&prof),
        Format::Csv => Ok(prof.to_csv()),
        Format::Text => Ok(format!(
            "{}{} mod {}: |U| = {}, diameter {}\nspheres {}\n",
            prof.lie_type,
            prof.n,
            prof.p,
            prof.order,
            prof.diameter,
            join(&prof.counts, " ")
        )),
    }
}

fn growth_cmd(cfg: &RunConfig, max_degree: usize) -> Result<String> {
    let lt = cfg.lie_type()?;
    let n = cfg.rank()?;
    let p = growth::p_polynomial(lt, n)?;
    let q = growth::q_polynomial(lt, n)?;
    let counts = growth::monoid_counts(&q, max_degree)?;
    let quarter = growth::quarter_evaluation(lt, n)?;
    let counts_s: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    match cfg.format {
        Format::Json => {
            let ints = |v: &[String]| -> Vec<serde_json::Value> {
                v.iter()
                    .map(|s| s.parse::<i64>().map(serde_json::Value::from).unwrap_or_else(|_| s.clone().into()))
                    .collect()
            };
            to_json(&json!({
                "type": lt,
                "n": n,
                "P": ints(&p.coeff_strings()),
                "Q": ints(&q.coeff_strings()),
                "counts": ints(&counts_s),
                "P_at_quarter": quarter.to_string(),
            }))
        }
        Format::Csv => {
            let mut s = String::from("series,degree,coefficient\n");
            for (name, cs) in [("P", p.coeff_strings()), ("Q", q.coeff_strings()), ("counts", counts_s)] {
                for (k, c) in cs.iter().enumerate() {
                    let _ = writeln!(s, "{name},{k},{c}");
                }
            }
            Ok(s)
        }
        Format::Text => Ok(format!(
            "P = {p}\nQ = {q}\ncounts {}\nP(1/4) = {quarter}\n",
            counts_s.join(" ")
        )),
    }
}

fn bounds(cfg: &RunConfig) -> Result<String> {
    let lt = cfg.lie_type()?;
    let n_max = cfg.rank()?;
    let p_max = cfg.prime()?;
    let mut rows = Vec::new();
    for n in lt.min_rank()..=n_max {
        let rs = RootSystem::new(lt, n)?;
        for p in (3..=p_max).filter(|&q| is_prime(q)) {
            let row = BoundsRow::new(lt, n, p)?;
            let upper = length_budget(&rs, p).total;
            rows.push((row, upper));
        }
    }
    match cfg.format {
        Format::Csv => {
            let mut s = format!("{BOUNDS_CSV_HEADER},upper_bound\n");
            for (row, upper) in &rows {
                let _ = writeln!(s, "{},{upper}", row.csv_line());
            }
            Ok(s)
        }
        Format::Json => to_json(
            &rows
                .iter()
                .map(|(row, upper)| {
                    let mut v = serde_json::to_value(row).unwrap_or_default();
                    v["upper_bound"] = json!(upper);
                    v
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = String::new();
            for (row, upper) in &rows {
                let _ = writeln!(
                    s,
                    "{}{} p={}: {} <= D <= {upper} (abelianization {})",
                    row.lie_type, row.n, row.p, row.lower_bound, row.abelianization_bound
                );
            }
            Ok(s)
        }
    }
}

/// Entry point shared by the binary: parse, run, write. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", json!({"error": "usage", "code": 2, "message": first}));
            return 2;
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let text = run(&cfg)?;
        match &cfg.out {
            Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let mut all = vec!["unipotent-diameter"];
        all.extend_from_slice(args);
        let cli = Cli::try_parse_from(all).map_err(|e| Error::Parse(e.to_string()))?;
        run(&RunConfig::from_cli(cli)?)
    }

    #[test]
    fn synth_reports_verified_word() {
        let out = run_args(&["synth", "--type", "C", "--n", "3", "--p", "17", "--seed", "7"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verified"], json!(true));
        assert_eq!(v["length"].as_u64().unwrap() as usize, v["word"].as_array().unwrap().len());
        assert!(v["length"].as_u64().unwrap() <= v["budget"].as_u64().unwrap());
    }

    #[test]
    fn growth_d4_coefficients() {
        let out = run_args(&["growth", "--type", "D", "--n", "4"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["P"], json!([1, -4, 3, -1]));
        assert_eq!(v["P_at_quarter"], json!("11/64"));
    }

    #[test]
    fn validation_errors_map_to_status_two() {
        let e = run_args(&["synth", "--type", "A", "--n", "2", "--p", "9"]).unwrap_err();
        assert_eq!(e, Error::BadModulus(9));
        assert_eq!(exit_code(&e), 2);
        let e = run_args(&["roots", "--type", "D", "--n", "1"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        assert!(!error_line(&e).contains('\n'));
    }

    #[test]
    fn infeasible_maps_to_status_three() {
        let e = run_args(&["diameter", "--type", "A", "--n", "4", "--p", "101"]).unwrap_err();
        assert_eq!(exit_code(&e), 3);
    }

    #[test]
    fn bounds_csv_header_is_stable() {
        let out = run_args(&["bounds", "--type", "B", "--n", "3", "--p", "7", "--format", "csv"]).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("type,n,p,lower_bound,abelianization_bound,upper_bound"));
        assert_eq!(lines.count(), 2 * 3);
    }
}
