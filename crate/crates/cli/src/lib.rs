//! Argument handling, commands and the report document behind the
//! `flagorbit` binary.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use flagorbit_core::classify::{
    classify_all, classify_all_maximal, classify_triple, ClassifyOptions, ReportSummary, WitnessSummary,
};
use flagorbit_core::grading::{grading_levels, x_generators, GammaChoice, LevelTable};
use flagorbit_core::orbits::{
    decide_finiteness_with, family_witness, generic_rank_oracle, reduction_transcript, EngineOptions, Verdict,
};
use flagorbit_core::rootspace::{parse_q, RationalVector, RootSystemType};
use flagorbit_core::weyl::ElemId;
use flagorbit_core::{Context, Error, OrbitProblem, ParabolicSubgroup};

pub const SCHEMA_VERSION: &str = "flagorbit-report/1";

/// Environment variable capping the worker pool.
pub const WORKERS_ENV: &str = "FLAGORBIT_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "flagorbit", version, about = "Finiteness of diagonal orbits on triple flag varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify triples of parabolics as FINITE or INFINITE.
    Classify(ClassifyArgs),
    /// Print the graded root tables of one (w, v, x) cell.
    Filtration(CellArgs),
    /// Decide one cell: verdict, orbit count and move transcript.
    Orbits(OrbitsArgs),
    /// List the double coset representatives W_P\W/W_Q as ρ-images.
    Cosets(CosetArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable tables.
    Text,
    /// The machine-readable report document.
    Json,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Cartan type of the group.
    #[arg(long = "type", default_value = "F4")]
    pub group: String,
    /// What to print on standard output.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Also write the report document to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the random points of the rank oracle.
    #[arg(long, default_value_t = EngineOptions::default().seed)]
    pub seed: u64,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["triple", "all_maximal", "all"])))]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Three parabolic labels; generic families expand to every placement.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub triple: Option<Vec<String>>,
    /// Every triple of maximal parabolics that survives the dimension count.
    #[arg(long)]
    pub all_maximal: bool,
    /// Every triple that survives the dimension count.
    #[arg(long)]
    pub all: bool,
    /// Examine every cell even after an infinite one is found.
    #[arg(long)]
    pub full_scan: bool,
    /// Worker threads for the cell fan-out.
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CellArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Three labels, each naming exactly one placement.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub triple: Vec<String>,
    /// ρ-image of w, `longest`, `identity` or `word:i,j,…`.
    #[arg(long, allow_hyphen_values = true, default_value = "longest")]
    pub w: String,
    /// ρ-image of v, `longest`, `identity` or `word:i,j,…`.
    #[arg(long, allow_hyphen_values = true, default_value = "longest")]
    pub v: String,
    /// ρ-image of x, `identity`, `longest` or `word:i,j,…`.
    #[arg(long, allow_hyphen_values = true, default_value = "identity")]
    pub x: String,
    /// Grading element; chosen automatically when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrbitsArgs {
    #[command(flatten)]
    pub cell: CellArgs,
    /// Restrict the witness search to representatives supported on the
    /// quotient roots of these levels.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub levels: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct CosetArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
}

/// One self-describing document per invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    /// Arguments as given, without the program name.
    pub invocation: Vec<String>,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Classification(Vec<ReportSummary>),
    Filtration(FiltrationReport),
    Orbits(OrbitsReport),
    DoubleCosets(CosetReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellHeader {
    pub group: String,
    pub triple: Vec<String>,
    /// ρ-images of `w`, `v`, `x`.
    pub w: RationalVector,
    pub v: RationalVector,
    pub x: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub cell: CellHeader,
    pub table: LevelTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitsReport {
    pub cell: CellHeader,
    pub gamma: RationalVector,
    pub outcome: Verdict,
    pub orbit_count: Option<usize>,
    pub canonical_forms: Vec<Vec<String>>,
    pub rank_resolved: usize,
    pub transcript: Vec<String>,
    pub witness: Option<WitnessSummary>,
    /// Levels the witness search was restricted to.
    pub levels: Option<Vec<String>>,
    pub n_roots: usize,
    pub oracle_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    pub group: String,
    pub left: String,
    pub right: String,
    pub representatives: Vec<CosetRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRow {
    pub rho_image: RationalVector,
    pub word: String,
    pub length: usize,
}

/// Failure of a command, carrying its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Bad input: exit status 1.
    Usage(String),
    /// Internal inconsistency: exit status 2.
    Internal(String),
    /// Help or version text was requested: exit status 0.
    Help(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) | CliError::Help(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// A finished command: the document and its human-readable rendering.
#[derive(Clone, Debug)]
pub struct Output {
    pub document: ReportDocument,
    pub text: String,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Output {
    /// What goes to standard output.
    pub fn stdout(&self) -> String {
        match self.format {
            Format::Text => self.text.clone(),
            Format::Json => to_json(&self.document),
        }
    }
}

pub fn to_json(doc: &ReportDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report documents serialize");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<ReportDocument, serde_json::Error> {
    serde_json::from_str(s)
}

/// Parses `args` (without the program name) and runs the command.
pub fn run(args: &[String]) -> Result<Output, CliError> {
    let argv = std::iter::once("flagorbit".to_string()).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    execute(cli.command, args.to_vec())
}

pub fn execute(command: Command, invocation: Vec<String>) -> Result<Output, CliError> {
    let (common, payload, text) = match command {
        Command::Classify(a) => {
            let (payload, text) = cmd_classify(&a)?;
            (a.common, payload, text)
        }
        Command::Filtration(a) => {
            let (payload, text) = cmd_filtration(&a)?;
            (a.common, payload, text)
        }
        Command::Orbits(a) => {
            let (payload, text) = cmd_orbits(&a)?;
            (a.cell.common, payload, text)
        }
        Command::Cosets(a) => {
            let (payload, text) = cmd_cosets(&a)?;
            (a.common, payload, text)
        }
    };
    let document = ReportDocument { schema_version: SCHEMA_VERSION.to_string(), invocation, payload };
    Ok(Output { document, text, format: common.format, out: common.out })
}

fn context(group: &str) -> Result<Context, CliError> {
    let t: RootSystemType = group.parse()?;
    Ok(Context::new(t))
}

fn engine_options(seed: u64, gamma: Option<RationalVector>) -> EngineOptions {
    EngineOptions { seed, gamma, ..EngineOptions::default() }
}

fn parse_vector(s: &str) -> Result<RationalVector, CliError> {
    Ok(s.parse::<RationalVector>()?)
}

fn cartesian(families: &[Vec<ParabolicSubgroup>]) -> Vec<Vec<ParabolicSubgroup>> {
    families.iter().fold(vec![Vec::new()], |acc, fam| {
        acc.iter()
            .flat_map(|prefix| {
                fam.iter().map(move |p| {
                    let mut t = prefix.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect()
    })
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<(Payload, String), CliError> {
    let ctx = context(&a.common.group)?;
    let opts =
        ClassifyOptions { early_exit: !a.full_scan, workers: a.workers, engine: engine_options(a.common.seed, None) };
    let reports = if let Some(labels) = &a.triple {
        if labels.len() != 3 {
            return Err(CliError::Usage(format!("--triple needs three labels, got {}", labels.len())));
        }
        let families = labels.iter().map(|l| ctx.parse_parabolic_family(l)).collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in cartesian(&families) {
            let r = classify_triple(&ctx, &t[0], &t[1], &t[2], &opts)?;
            if seen.insert(r.labels()) {
                out.push(r);
            }
        }
        out
    } else if a.all_maximal {
        classify_all_maximal(&ctx, &opts)?
    } else {
        classify_all(&ctx, &opts)?
    };
    let summaries: Vec<ReportSummary> = reports.iter().map(|r| r.summary(&ctx)).collect();
    let mut text = String::new();
    let _ = writeln!(text, "{:<34} {:>5} {:>9} {:<24} {:<5}", "triple", "dims", "cells", "outcome", "open");
    for s in &summaries {
        let labels: Vec<&str> = s.triple.iter().map(|p| p.label.as_str()).collect();
        let _ = writeln!(
            text,
            "{:<34} {:>5} {:>9} {:<24} {:<5}",
            format!("({})", labels.join(", ")),
            s.flag_dimension_sum,
            format!("{}/{}", s.cells_examined, s.total_cells),
            s.outcome.to_string(),
            s.open_orbit
        );
        if let Some(c) = s.cells.iter().find(|c| c.outcome == Verdict::Infinite) {
            if let Some(w) = &c.witness {
                let _ = writeln!(text, "    infinite at w={} v={} x={}: {{{}}}", c.w, c.v, c.x, w.support.join(", "));
            }
        }
    }
    Ok((Payload::Classification(summaries), text))
}

/// A cell as given on the command line.
struct ParsedCell {
    ctx: Context,
    prob: OrbitProblem,
    header: CellHeader,
    gamma: Option<RationalVector>,
}

fn parse_word(ctx: &Context, text: &str) -> Result<ElemId, CliError> {
    let mut word = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: u8 = part.parse().map_err(|_| CliError::Usage(format!("bad generator {part:?} in reduced word")))?;
        if i == 0 {
            return Err(CliError::Usage("generators are numbered from 1".to_string()));
        }
        word.push(i - 1);
    }
    Ok(ctx.weyl.from_word(&word)?)
}

fn parse_element(
    ctx: &Context,
    text: &str,
    longest: impl FnOnce() -> Result<ElemId, Error>,
) -> Result<ElemId, CliError> {
    let s = text.trim();
    match s {
        "longest" => Ok(longest()?),
        "identity" | "id" => Ok(ctx.weyl.identity()),
        _ => match s.strip_prefix("word:") {
            Some(w) => parse_word(ctx, w),
            None => Ok(ctx.weyl.element_from_rho_image(&parse_vector(s)?)?),
        },
    }
}

fn parse_cell(a: &CellArgs) -> Result<ParsedCell, CliError> {
    let ctx = context(&a.common.group)?;
    if a.triple.len() != 3 {
        return Err(CliError::Usage(format!("--triple needs three labels, got {}", a.triple.len())));
    }
    let ps = a.triple.iter().map(|l| ctx.parse_parabolic(l)).collect::<Result<Vec<_>, _>>()?;
    let (p1, p2, p3) = (&ps[0], &ps[1], &ps[2]);
    let wg = &ctx.weyl;
    let w = parse_element(&ctx, &a.w, || {
        wg.longest_coset_representative(&wg.double_cosets(&p1.levi_simple, &p2.levi_simple))
    })?;
    let v = parse_element(&ctx, &a.v, || {
        wg.longest_coset_representative(&wg.double_cosets(&p1.levi_simple, &p3.levi_simple))
    })?;
    let wl2 = wg.get(w).act(&p2.lambda);
    let vl3 = wg.get(v).act(&p3.lambda);
    let x = parse_element(&ctx, &a.x, || {
        let (left, right) = x_generators(&ctx, p1, &wl2, &vl3);
        wg.longest_coset_representative(&wg.double_cosets_within(Some(&p1.levi_simple), &left, &right))
    })?;
    let prob = OrbitProblem::new(&ctx, p1, p2, p3, w, v, x).map_err(|e| match e {
        // A non-minimal representative is bad input, not an internal fault.
        Error::Inconsistency(m) => CliError::Usage(m),
        e => e.into(),
    })?;
    let gamma = a.gamma.as_deref().map(parse_vector).transpose()?;
    let header = CellHeader {
        group: ctx.roots.type_label.to_string(),
        triple: ps.iter().map(|p| p.label.clone()).collect(),
        w: wg.get(w).rho_image,
        v: wg.get(v).rho_image,
        x: wg.get(x).rho_image,
    };
    Ok(ParsedCell { ctx, prob, header, gamma })
}

fn gamma_choice(g: Option<RationalVector>) -> GammaChoice {
    g.map_or(GammaChoice::Auto, GammaChoice::Given)
}

fn header_text(h: &CellHeader) -> String {
    format!("{} ({}) w={} v={} x={}\n", h.group, h.triple.join(", "), h.w, h.v, h.x)
}

/// `±` prefix for a root written as an ε-expression.
fn plus_minus(expr: &str) -> String {
    let body = expr.trim_start_matches('−');
    if body.starts_with('½') || !body.contains(['+', '−']) {
        format!("±{body}")
    } else {
        format!("±({body})")
    }
}

/// Level tables in the layout of the worked examples: level-0 roots of the
/// acting group are paired as `±β` and followed by the Cartan subalgebra.
pub fn render_table(table: &LevelTable) -> String {
    let mut out = String::new();
    out.push_str("x⁻¹M12(w)x ∩ M13(v):\n");
    for (i, row) in table.m_levels.iter().enumerate() {
        let mut items: Vec<String> = Vec::new();
        if row.level == "0" {
            let set: BTreeSet<&str> = row.roots.iter().map(String::as_str).collect();
            let mut done = BTreeSet::new();
            for r in &row.roots {
                if done.contains(r.as_str()) {
                    continue;
                }
                let neg = negate_expr(r);
                if set.contains(neg.as_str()) {
                    done.insert(neg.clone());
                    done.insert(r.clone());
                    items.push(plus_minus(if r.starts_with('−') { &neg } else { r }));
                } else {
                    items.push(r.clone());
                }
            }
            items.push("𝔥".to_string());
        } else {
            items = row.roots.clone();
        }
        let _ = writeln!(out, "  𝓜_{}: {}", row.level, items.join(", "));
        if i == 0 && row.level != "0" {
            let _ = writeln!(out, "  𝓜_0: 𝔥");
        }
    }
    if table.m_levels.is_empty() {
        out.push_str("  𝓜_0: 𝔥\n");
    }
    out.push_str("x⁻¹N12(w)x \\ N1 / N13(v):\n");
    for row in &table.n_levels {
        let _ = writeln!(out, "  𝓝_{}: {}", row.level, row.roots.join(", "));
    }
    out
}

fn negate_expr(e: &str) -> String {
    let (wrap, body) = match e.strip_prefix("½(").and_then(|b| b.strip_suffix(')')) {
        Some(b) => (true, b),
        None => (false, e),
    };
    let mut s = String::new();
    for (i, c) in body.chars().enumerate() {
        match c {
            '+' => s.push('−'),
            '−' => {
                if i > 0 {
                    s.push('+');
                }
            }
            c => {
                if i == 0 {
                    s.push('−');
                }
                s.push(c);
            }
        }
    }
    if wrap {
        format!("½({s})")
    } else {
        s
    }
}

pub fn cmd_filtration(a: &CellArgs) -> Result<(Payload, String), CliError> {
    let cell = parse_cell(a)?;
    let pieces = grading_levels(&cell.ctx, &cell.prob, &gamma_choice(cell.gamma))?;
    let table = pieces.table(&cell.ctx);
    let text = format!("{}γ = {}\n{}", header_text(&cell.header), table.gamma, render_table(&table));
    Ok((Payload::Filtration(FiltrationReport { cell: cell.header, table }), text))
}

pub fn cmd_orbits(a: &OrbitsArgs) -> Result<(Payload, String), CliError> {
    let cell = parse_cell(&a.cell)?;
    let (ctx, prob) = (&cell.ctx, &cell.prob);
    let pieces = grading_levels(ctx, prob, &gamma_choice(cell.gamma))?;
    let opts = engine_options(a.cell.common.seed, Some(pieces.gamma));
    let verdict = decide_finiteness_with(ctx, prob, &opts)?;
    let n = prob.n_roots.len();
    let oracle_rank = generic_rank_oracle(ctx, prob, opts.trials, opts.seed);
    if verdict.outcome == Verdict::Finite && oracle_rank < n {
        return Err(CliError::Internal(format!(
            "pattern engine says FINITE but the rank oracle finds rank {oracle_rank} < {n}"
        )));
    }
    let mut witness = verdict.witness.clone();
    if let (Some(levels), Verdict::Infinite) = (&a.levels, verdict.outcome) {
        let wanted = levels.iter().map(|l| parse_q(l)).collect::<Result<BTreeSet<_>, _>>()?;
        let family: Vec<_> = pieces
            .n_levels
            .iter()
            .filter(|(l, _)| wanted.contains(*l))
            .flat_map(|(_, rs)| rs.iter().copied())
            .collect();
        if family.is_empty() {
            return Err(CliError::Usage("no quotient roots at the requested levels".to_string()));
        }
        witness = family_witness(ctx, prob, &family, &pieces, &opts).or(witness);
    }
    let witness = witness.map(|w| WitnessSummary {
        support: w.pattern.exprs(ctx),
        relation: w.relation,
        modality: w.modality,
        explanation: w.explanation,
    });
    let transcript: Vec<String> = reduction_transcript(ctx, prob, &pieces).iter().map(|m| m.describe(ctx)).collect();
    let report = OrbitsReport {
        cell: cell.header,
        gamma: pieces.gamma,
        outcome: verdict.outcome,
        orbit_count: verdict.orbit_count,
        canonical_forms: verdict.canonical_forms.iter().map(|p| p.exprs(ctx)).collect(),
        rank_resolved: verdict.rank_resolved,
        transcript,
        witness,
        levels: a.levels.clone(),
        n_roots: n,
        oracle_rank,
    };
    let text = render_orbits(&report);
    Ok((Payload::Orbits(report), text))
}

fn render_orbits(r: &OrbitsReport) -> String {
    let mut out = header_text(&r.cell);
    let _ = writeln!(out, "γ = {}", r.gamma);
    let _ = writeln!(out, "verdict: {}", r.outcome);
    if let Some(c) = r.orbit_count {
        let _ = writeln!(out, "orbits: {c}");
    }
    let _ = writeln!(out, "rank of the generic point: {} of {}", r.oracle_rank, r.n_roots);
    out.push_str("transcript:\n");
    for (i, m) in r.transcript.iter().enumerate() {
        let _ = writeln!(out, "  {}. {m}", i + 1);
    }
    let _ = writeln!(out, "canonical forms ({}):", r.canonical_forms.len());
    for f in &r.canonical_forms {
        let _ = writeln!(out, "  {{{}}}", f.join(", "));
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness: {{{}}}", w.support.join(", "));
        let _ = writeln!(out, "  relation: {:?}", w.relation);
        let _ = writeln!(out, "  {}", w.explanation);
    }
    out
}

pub fn cmd_cosets(a: &CosetArgs) -> Result<(Payload, String), CliError> {
    let ctx = context(&a.common.group)?;
    let left = ctx.parse_parabolic(&a.left)?;
    let right = ctx.parse_parabolic(&a.right)?;
    let table = ctx.weyl.double_cosets(&left.levi_simple, &right.levi_simple);
    let representatives: Vec<CosetRow> = table
        .representatives
        .iter()
        .map(|&e| {
            let el = ctx.weyl.get(e);
            CosetRow { rho_image: el.rho_image, word: el.word_string(), length: el.length }
        })
        .collect();
    let mut text = format!("W_{}\\W/W_{}: {} double cosets\n", left.label, right.label, representatives.len());
    for r in &representatives {
        let _ = writeln!(text, "  {:<28} length {:>2}  {}", r.rho_image.to_string(), r.length, r.word);
    }
    let report =
        CosetReport { group: ctx.roots.type_label.to_string(), left: left.label, right: right.label, representatives };
    Ok((Payload::DoubleCosets(report), text))
}
