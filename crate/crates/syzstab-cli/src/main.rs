//! Command-line surface for the syzygy-bundle stability toolkit.
//!
//! Subcommands: `construct` (build a verified family for a triple), `check`
//! (classify a family from a file or stdin), `sweep` (verify whole parameter
//! ranges), `census` (exhaustively classify all n-subsets), and `moduli`
//! (exact bundle/stratum invariants).
//!
//! Exit codes: construct 0 stable / 1 strictly-semistable / 2 verification
//! failure / 3 invalid arguments / 4 provable non-existence; check 0/1/2 by
//! verdict, 3 parse or validation error, 5 oracle disagreement; sweep,
//! census, and moduli 0 clean / 2 failures, truncation, limit, or the
//! exceptional triple / 3 invalid arguments.
//!
//! Output is deterministic: identical invocations produce byte-identical
//! bytes, whatever SYZSTAB_JOBS says.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Read as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use syzstab::construct::{construct_family, construct_unverified, ConstructError};
use syzstab::harness::{census, sweep, CensusReport, SweepReport, CENSUS_LIMIT};
use syzstab::moduli::{bundle_numerics, moduli_report, ModuliError};
use syzstab::monomial::{Family, Monomial};
use syzstab::stability::{classify, classify_bruteforce, ClassifyError, Verdict};

#[derive(Parser)]
#[command(
    name = "syzstab",
    version,
    about = "Stability of syzygy bundles of monomial families: construct, check, sweep, census, moduli"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the verified family for a triple (N, d, n)
    Construct(ConstructArgs),
    /// Classify a family read from a file or stdin
    Check(CheckArgs),
    /// Construct and verify families for every admissible triple in ranges
    Sweep(SweepArgs),
    /// Exhaustively classify every n-subset of the degree-d monomials
    Census(CensusArgs),
    /// Exact bundle and moduli-stratum invariants for a triple
    Moduli(ModuliArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Projective dimension N (N+1 variables)
    #[arg(short = 'N', long = "dim")]
    n_proj: usize,
    /// Common degree of the monomials
    #[arg(short = 'd', long = "degree")]
    d: u32,
    /// Number of monomials
    #[arg(short = 'n', long = "size")]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Emit the recipe set without running the classifier
    #[arg(long)]
    no_verify: bool,
    /// Write the document to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Family file (text or JSON); '-' or absent reads stdin
    input: Option<String>,
    /// Cross-check against the exhaustive-subset classifier
    #[arg(long)]
    oracle: bool,
    /// Print the extremal subset witness
    #[arg(long)]
    witness: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Dimension N or inclusive range a..b
    #[arg(short = 'N', long = "dim", value_parser = parse_usize_range)]
    n_range: RangeInclusive<usize>,
    /// Degree d or inclusive range a..b
    #[arg(short = 'd', long = "degree", value_parser = parse_u32_range)]
    d_range: RangeInclusive<u32>,
    /// Stop scheduling work once this many classifier calls have been spent
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the JSON report to this file (stdout stays quiet)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(short = 'N', long = "dim")]
    n_proj: usize,
    #[arg(short = 'd', long = "degree")]
    d: u32,
    #[arg(short = 'n', long = "size")]
    n: u64,
    /// Deduplicate families by coordinate-permutation orbit
    #[arg(long)]
    symmetry: bool,
    /// Refuse to enumerate more than this many subsets
    #[arg(long, default_value_t = CENSUS_LIMIT)]
    limit: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the JSON report to this file (stdout stays quiet)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModuliArgs {
    #[arg(short = 'N', long = "dim")]
    n_proj: usize,
    #[arg(short = 'd', long = "degree")]
    d: u32,
    #[arg(short = 'n', long = "size")]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the JSON report to this file (stdout stays quiet)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_u32_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    parse_range(s)
}

fn parse_usize_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    parse_range(s)
}

/// "a..b" (inclusive) or a single value "a".
fn parse_range<T: std::str::FromStr + Copy>(s: &str) -> Result<RangeInclusive<T>, String> {
    let bad = || format!("expected a value or inclusive range a..b, got {s:?}");
    if let Some((a, b)) = s.split_once("..") {
        let a = a.trim().parse::<T>().map_err(|_| bad())?;
        let b = b.trim().parse::<T>().map_err(|_| bad())?;
        Ok(a..=b)
    } else {
        let v = s.trim().parse::<T>().map_err(|_| bad())?;
        Ok(v..=v)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(jobs) = std::env::var("SYZSTAB_JOBS") {
        if let Ok(j) = jobs.trim().parse::<usize>() {
            if j >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build_global();
            }
        }
    }
    let code = match cli.cmd {
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Census(a) => cmd_census(a),
        Cmd::Moduli(a) => cmd_moduli(a),
    };
    ExitCode::from(code)
}

// ---------------------------------------------------------------------------
// Family documents: text and JSON
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DocumentMetadata {
    recipe: String,
    expected: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_margin: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repaired: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classify_calls: Option<u64>,
}

#[derive(Serialize)]
struct FamilyDocument {
    vars: usize,
    monomials: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<DocumentMetadata>,
}

impl FamilyDocument {
    fn new(family: &Family, metadata: Option<DocumentMetadata>) -> Self {
        FamilyDocument {
            vars: family.vars(),
            monomials: family.iter().map(|m| m.exponents().to_vec()).collect(),
            metadata,
        }
    }

    fn to_text(&self, family: &Family) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.metadata {
            let _ = writeln!(out, "# recipe: {}", meta.recipe);
            let _ = writeln!(out, "# expected: {}", meta.expected);
            if let Some(v) = meta.verdict {
                let _ = writeln!(out, "# verdict: {v}");
            }
            if let Some(m) = meta.min_margin {
                let _ = writeln!(out, "# min-margin: {m}");
            }
            if let Some(r) = meta.repaired {
                let _ = writeln!(out, "# repaired: {r}");
            }
        }
        match family.equal_degree() {
            Some(d) => {
                let _ = writeln!(out, "{} {}", self.vars, d);
            }
            None => {
                let _ = writeln!(out, "{}", self.vars);
            }
        }
        for m in &self.monomials {
            let row: Vec<String> = m.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Human-readable monomial, for messages only (never an input format).
fn render_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("X{i}")),
            _ => parts.push(format!("X{i}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Text family grammar: optional `# comment` lines; first data line
/// `vars` or `vars d`; every further line one exponent row.
fn parse_text_family(src: &str) -> Result<Family, String> {
    let mut lines = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("empty input")?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() > 2 {
        return Err(format!(
            "header must be `vars` or `vars degree`, got {header:?}"
        ));
    }
    let vars: usize = head[0]
        .parse()
        .map_err(|_| format!("bad variable count {:?}", head[0]))?;
    let declared: Option<u64> = match head.get(1) {
        Some(t) => Some(t.parse().map_err(|_| format!("bad degree {t:?}"))?),
        None => None,
    };
    let mut monomials = Vec::new();
    for line in lines {
        let exps: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
        let exps = exps.map_err(|_| format!("bad exponent row {line:?}"))?;
        if exps.len() != vars {
            return Err(format!(
                "exponent row {line:?} has {} entries, expected {vars}",
                exps.len()
            ));
        }
        monomials.push(Monomial::new(exps));
    }
    let family = Family::new(vars, monomials).map_err(|e| e.to_string())?;
    if let Some(d) = declared {
        if family.equal_degree() != Some(d) {
            return Err(format!("header declares degree {d} but rows disagree"));
        }
    }
    Ok(family)
}

fn parse_family(src: &str) -> Result<Family, String> {
    if src.trim_start().starts_with('{') {
        serde_json::from_str::<Family>(src).map_err(|e| e.to_string())
    } else {
        parse_text_family(src)
    }
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes to the file when `out` is given (quiet stdout), else prints.
fn deliver(out: &Option<PathBuf>, payload: String) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(a: ConstructArgs) -> u8 {
    let (family, metadata, exit) = if a.no_verify {
        match construct_unverified(a.n_proj, a.d, a.n) {
            Ok((family, recipe, expected)) => {
                let exit = verdict_exit(expected);
                (
                    family,
                    DocumentMetadata {
                        recipe,
                        expected,
                        verdict: None,
                        min_margin: None,
                        repaired: None,
                        classify_calls: None,
                    },
                    exit,
                )
            }
            Err(e) => return construct_error_exit(&e),
        }
    } else {
        match construct_family(a.n_proj, a.d, a.n) {
            Ok(r) => {
                let exit = verdict_exit(r.verification.verdict);
                let metadata = DocumentMetadata {
                    recipe: r.recipe,
                    expected: r.expected,
                    verdict: Some(r.verification.verdict),
                    min_margin: r.verification.min_margin(),
                    repaired: Some(r.repaired),
                    classify_calls: Some(r.classify_calls),
                };
                (r.family, metadata, exit)
            }
            Err(e) => return construct_error_exit(&e),
        }
    };
    let doc = FamilyDocument::new(&family, Some(metadata));
    let payload = match a.format {
        Format::Text => doc.to_text(&family),
        Format::Json => pretty_json(&doc),
    };
    match deliver(&a.out, payload) {
        Ok(()) => exit,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Stable => 0,
        Verdict::StrictlySemistable => 1,
        Verdict::Unstable => 2,
    }
}

fn construct_error_exit(e: &ConstructError) -> u8 {
    eprintln!("error: {e}");
    match e {
        ConstructError::NoSemistableFamily { .. } => 4,
        ConstructError::VerificationFailed { .. } => 2,
        _ => 3,
    }
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(a: CheckArgs) -> u8 {
    let source = match read_input(a.input.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let family = match parse_family(&source) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let classification = match classify(&family) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    if a.oracle {
        match classify_bruteforce(&family) {
            Ok(reference) => {
                if reference != classification {
                    eprintln!(
                        "oracle disagreement: reduced={} exhaustive={}",
                        classification.verdict, reference.verdict
                    );
                    return 5;
                }
            }
            Err(ClassifyError::OverBruteForceLimit { n, limit }) => {
                eprintln!("error: --oracle needs at most {limit} monomials, got {n}");
                return 3;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 3;
            }
        }
    }
    match a.format {
        Format::Json => print!("{}", pretty_json(&classification)),
        Format::Text => {
            println!("verdict: {}", classification.verdict);
            match classification.min_margin() {
                Some(m) => println!("min-margin: {m}"),
                None => println!("min-margin: none (no competing subsets)"),
            }
            if a.witness {
                match &classification.worst_witness {
                    Some(w) => {
                        println!(
                            "witness: divisor {} (degree {}), k={}, margin {}",
                            render_monomial(&w.divisor),
                            w.d_j,
                            w.k,
                            w.margin
                        );
                        let members: Vec<String> = w.members.iter().map(render_monomial).collect();
                        println!("members: {}", members.join(" "));
                    }
                    None => println!("witness: none"),
                }
                for z in &classification.zero_margin_witnesses {
                    let members: Vec<String> = z.members.iter().map(render_monomial).collect();
                    println!(
                        "zero-margin: divisor {} (degree {}), k={}, members {}",
                        render_monomial(&z.divisor),
                        z.d_j,
                        z.k,
                        members.join(" ")
                    );
                }
            }
        }
    }
    verdict_exit(classification.verdict)
}

fn read_input(path: Option<&str>) -> Result<String, String> {
    match path {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}")),
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(a: SweepArgs) -> u8 {
    if a.n_range.is_empty() || a.d_range.is_empty() {
        eprintln!("error: empty range");
        return 3;
    }
    let report = sweep(a.n_range.clone(), a.d_range.clone(), a.budget);
    let payload = match (&a.out, a.format) {
        (Some(_), _) | (None, Format::Json) => pretty_json(&report),
        (None, Format::Text) => sweep_text(&report),
    };
    if let Err(e) = deliver(&a.out, payload) {
        eprintln!("error: {e}");
        return 3;
    }
    if report.failures.is_empty() && !report.partial {
        0
    } else {
        2
    }
}

fn sweep_text(r: &SweepReport) -> String {
    let mut rows: Vec<[String; 7]> = Vec::with_capacity(r.entries.len());
    for e in &r.entries {
        rows.push([
            e.n_proj.to_string(),
            e.d.to_string(),
            e.n.to_string(),
            e.recipe.clone(),
            e.verdict.to_string(),
            e.min_margin
                .map_or_else(|| "-".to_string(), |m| m.to_string()),
            if e.repaired { "yes" } else { "no" }.to_string(),
        ]);
    }
    let header = ["N", "d", "n", "recipe", "verdict", "min-margin", "repaired"];
    let mut width = header.map(str::len);
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: [&str; 7], width: &[usize; 7]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{:<w$}", cell, w = width[i]);
        }
        line.trim_end().to_string()
    };
    out.push_str(&fmt_row(header, &width));
    out.push('\n');
    for row in &rows {
        let cells = [
            row[0].as_str(),
            row[1].as_str(),
            row[2].as_str(),
            row[3].as_str(),
            row[4].as_str(),
            row[5].as_str(),
            row[6].as_str(),
        ];
        out.push_str(&fmt_row(cells, &width));
        out.push('\n');
    }
    let summary: Vec<String> = r.summary.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let _ = writeln!(out, "summary: {}", summary.join(", "));
    let _ = writeln!(out, "failures: {}", r.failures.len());
    for f in &r.failures {
        let _ = writeln!(
            out,
            "failure: N={} d={} n={}: {}",
            f.n_proj, f.d, f.n, f.message
        );
    }
    let _ = writeln!(out, "partial: {}", r.partial);
    let _ = writeln!(out, "classify-calls: {}", r.total_classify_calls);
    out
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

fn cmd_census(a: CensusArgs) -> u8 {
    let report = match census(a.n_proj, a.d, a.n, a.symmetry, a.limit) {
        Ok(r) => r,
        Err(e @ syzstab::harness::HarnessError::LimitExceeded { .. }) => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let payload = match (&a.out, a.format) {
        (Some(_), _) | (None, Format::Json) => pretty_json(&report),
        (None, Format::Text) => census_text(&report),
    };
    if let Err(e) = deliver(&a.out, payload) {
        eprintln!("error: {e}");
        return 3;
    }
    0
}

fn census_text(r: &CensusReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "census: N={} d={} n={}", r.n_proj, r.d, r.n);
    let _ = writeln!(out, "total-families: {}", r.total_families);
    let _ = writeln!(out, "m-primary: {}", r.m_primary_count);
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    let _ = writeln!(out, "{}", counts.join(", "));
    if let Some(orbits) = r.orbit_count {
        let _ = writeln!(out, "orbits: {orbits}");
    }
    if let Some(reps) = &r.representatives {
        for rep in reps {
            let members: Vec<String> = rep.family.iter().map(render_monomial).collect();
            let _ = writeln!(out, "rep: {} -> {}", members.join(" "), rep.verdict);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// moduli
// ---------------------------------------------------------------------------

fn cmd_moduli(a: ModuliArgs) -> u8 {
    match moduli_report(a.n_proj, a.d, a.n) {
        Ok(r) => {
            let payload = match (&a.out, a.format) {
                (Some(_), _) | (None, Format::Json) => pretty_json(&r),
                (None, Format::Text) => moduli_text(&r),
            };
            if let Err(e) = deliver(&a.out, payload) {
                eprintln!("error: {e}");
                return 3;
            }
            0
        }
        Err(ModuliError::ExceptionalTriple) => {
            // Numerics exist even for the exceptional triple.
            let nums = bundle_numerics(a.n_proj, a.d, a.n).expect("triple is in range");
            let payload = match (&a.out, a.format) {
                (Some(_), _) | (None, Format::Json) => pretty_json(&serde_json::json!({
                    "numerics": nums,
                    "error": "exceptional-triple",
                })),
                (None, Format::Text) => {
                    let mut out = String::new();
                    let _ = writeln!(out, "rank:          {}", nums.rank);
                    for (i, c) in nums.chern.iter().enumerate() {
                        let _ = writeln!(out, "c_{}:           {c}", i + 1);
                    }
                    let _ = writeln!(out, "slope:         {}", nums.slope);
                    let _ = writeln!(
                        out,
                        "note: exceptional triple; stratum dimension formulas do not apply"
                    );
                    out
                }
            };
            if let Err(e) = deliver(&a.out, payload) {
                eprintln!("error: {e}");
                return 3;
            }
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn moduli_text(r: &syzstab::moduli::ModuliReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rank:          {}", r.rank);
    for (i, c) in r.chern.iter().enumerate() {
        let _ = writeln!(out, "c_{}:           {c}", i + 1);
    }
    let _ = writeln!(out, "slope:         {}", r.slope);
    let _ = writeln!(out, "dim_stratum:   {}", r.dim_stratum);
    let _ = writeln!(out, "dim_component: {}", r.dim_component);
    let _ = writeln!(out, "codim:         {}", r.codim);
    let h_e: Vec<String> = r.h_e.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "h^i(E):        {}", h_e.join(" "));
    let h_ed: Vec<String> = r.h_ed.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "h^i(E(d)):     {}", h_ed.join(" "));
    let _ = writeln!(out, "ext^1:         {}", r.ext1);
    let _ = writeln!(out, "ext^2:         {}", r.ext2);
    out
}
