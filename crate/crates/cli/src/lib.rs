//! The `minkowski` command-line tool.

pub mod dot;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use minkowski_core::bk::{
    bk_decomposition, coordinate_basis, maximal_bk_filtration, realize_poset, Poset,
};
use minkowski_core::io::{parse_poset, parse_tuple, write_poset, write_tuple};
use minkowski_core::polymatroid::{
    distributive_decomposition, dual_partition_with_cap, dual_realization, Polymatroid,
    DEFAULT_POINT_CAP,
};
use minkowski_core::suite::{self, GenConfig, Outcome, SuiteOptions, SuiteReport};
use minkowski_core::{Error as CoreError, FieldSpec, IndexSet, MinkowskiMatroid, SubspaceTuple};

use report::{matrix, set, sets, verdict, Format};

/// Environment variable overriding the subset-enumeration cap.
pub const SUBSET_CAP_VAR: &str = "MINKOWSKI_SUBSET_CAP";

#[derive(Debug, Parser)]
#[command(name = "minkowski", version, about = "Minkowski matroids, BK-tuples and polymatroids of subspace tuples")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Defects, bases, circuits and essential subtuples of a tuple.
    Analyze(AnalyzeArgs),
    /// Lattice, poset, decomposition and coordinates of a BK-tuple.
    Bk(BkArgs),
    /// A tuple file whose BK-poset is the given poset.
    Realize(RealizeArgs),
    /// Flats, dual realization and dual-space partition.
    Polymatroid(PolymatroidArgs),
    /// Run the theorem checks on random tuples.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Classify a subtuple, given as comma-separated indices; repeatable.
    #[arg(long = "subset", value_parser = parse_index_set)]
    pub subsets: Vec<IndexSet>,
}

#[derive(Debug, Args)]
pub struct BkArgs {
    pub file: PathBuf,
    /// Write Hasse diagrams of the lattice and poset into this directory.
    #[arg(long)]
    pub dot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    pub file: PathBuf,
    /// `rational` or `gf<p>`.
    #[arg(long, value_parser = parse_field, default_value = "rational")]
    pub field: FieldSpec,
    /// Write the tuple here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolymatroidArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub flats: bool,
    #[arg(long)]
    pub dual: bool,
    #[arg(long)]
    pub partition: bool,
    /// Largest dual space enumerated by --partition.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    pub point_cap: u64,
    /// Write the Hasse diagram of the flats into this directory.
    #[arg(long)]
    pub dot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// TOML file with any of: seed, cases, field, dim, n, max_gens.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cases: Option<usize>,
    #[arg(long, value_parser = parse_field)]
    pub field: Option<FieldSpec>,
    /// Largest ambient dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Largest number of subspaces.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest number of generators per subspace (default: dim).
    #[arg(long)]
    pub max_gens: Option<usize>,
    /// Run only these checks; repeatable.
    #[arg(long = "check")]
    pub checks: Vec<String>,
    /// Run the checks on one tuple file instead of random cases.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write one tuple file per failing check into this directory.
    #[arg(long)]
    pub counterexample_dir: Option<PathBuf>,
    /// Check a matroid whose rank is off by one.
    #[cfg(feature = "mutation-hook")]
    #[arg(long)]
    pub mutate: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyConfig {
    seed: Option<u64>,
    cases: Option<usize>,
    field: Option<String>,
    dim: Option<usize>,
    n: Option<usize>,
    max_gens: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Verification(_) => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let t = s.trim().to_ascii_lowercase();
    if t == "rational" || t == "q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.strip_prefix("gf").unwrap_or(&t).trim();
    let p: u64 = digits
        .parse()
        .map_err(|_| format!("expected `rational` or `gf<p>`, got {s:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

pub fn parse_index_set(s: &str) -> Result<IndexSet, String> {
    let body = s.trim().trim_start_matches('{').trim_end_matches('}');
    body.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<usize>()
                .ok()
                .filter(|&i| i < minkowski_core::index_set::MAX_ELEMENTS)
                .ok_or_else(|| format!("bad index {x:?}"))
        })
        .collect()
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> CliResult<SubspaceTuple> {
    parse_tuple(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> CliResult<Poset> {
    parse_poset(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn apply_cap_override() -> CliResult<()> {
    if let Ok(v) = std::env::var(SUBSET_CAP_VAR) {
        let cap: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SUBSET_CAP_VAR}={v:?} is not a number")))?;
        minkowski_core::set_subset_cap(cap)?;
    }
    Ok(())
}

/// Runs a parsed command line, returning the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = apply_cap_override().and_then(|()| dispatch(&cli));
    match result {
        Ok((text, code)) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<(String, i32)> {
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze(a) => Ok((report::render(&analyze(a)?, fmt), 0)),
        Command::Bk(a) => Ok((report::render(&bk(a)?, fmt), 0)),
        Command::Realize(a) => Ok((realize(a)?, 0)),
        Command::Polymatroid(a) => Ok((report::render(&polymatroid(a)?, fmt), 0)),
        Command::Verify(a) => verify(a, fmt),
    }
}

fn class_value(m: &MinkowskiMatroid, s: IndexSet) -> CliResult<Value> {
    let c = m.classify(s)?;
    Ok(json!({
        "defect": c.defect,
        "independent": c.independent,
        "bk": c.bk,
        "irreducible": c.irreducible,
        "essential": c.essential,
        "cyclic": c.cyclic,
    }))
}

pub fn analyze(a: &AnalyzeArgs) -> CliResult<Value> {
    let t = load_tuple(&a.file)?;
    let m = MinkowskiMatroid::new(t.clone())?;
    let ground = t.ground();
    let mut r = Map::new();
    r.insert("field".into(), json!(t.field().to_string()));
    r.insert("dim".into(), json!(t.ambient_dim()));
    r.insert("n".into(), json!(t.len()));
    r.insert(
        "entry_dims".into(),
        json!(t.entries().iter().map(|e| e.dim()).collect::<Vec<_>>()),
    );
    r.insert("span_dim".into(), json!(m.table().span_dim(ground)));
    r.insert("defect".into(), json!(m.defect(ground)));
    r.insert("rank".into(), json!(m.rank(ground)));
    r.insert(
        "class".into(),
        if t.is_empty() {
            Value::Null
        } else {
            class_value(&m, ground)?
        },
    );
    let bases = m.bases();
    r.insert("bases".into(), sets(bases.iter().copied()));
    r.insert("circuits".into(), sets(m.circuits()));
    r.insert("loops".into(), set(m.loops()));
    r.insert("coloops".into(), set(m.coloops()));
    r.insert("basis_defect".into(), json!(m.basis_defect()?));
    let mut cores = Map::new();
    for &b in &bases {
        cores.insert(b.to_string(), set(m.max_bk_in_basis(b)?.set));
    }
    r.insert("max_bk_per_basis".into(), Value::Object(cores));
    let essential = m.maximal_essential_subtuple()?;
    r.insert("max_essential".into(), essential.map_or(Value::Null, set));
    let quotient = match essential {
        Some(e) => {
            let q = t.quotient_tuple(e)?;
            let table = q.defect_table()?;
            json!({
                "dim": q.ambient_dim(),
                "entry_dims": q.entries().iter().map(|x| x.dim()).collect::<Vec<_>>(),
                "independent": table.is_independent(q.ground()),
            })
        }
        None => Value::Null,
    };
    r.insert("quotient_by_essential".into(), quotient);
    if !a.subsets.is_empty() {
        let mut subs = Map::new();
        for &s in &a.subsets {
            t.check(s)?;
            let mut v = class_value(&m, s)?;
            v["rank"] = json!(m.rank(s));
            subs.insert(s.to_string(), v);
        }
        r.insert("subsets".into(), Value::Object(subs));
    }
    Ok(Value::Object(r))
}

pub fn bk(a: &BkArgs) -> CliResult<Value> {
    let t = load_tuple(&a.file)?;
    let dec = bk_decomposition(&t)?;
    let order = dec.poset.linear_extension();
    let filtration = maximal_bk_filtration(&t, &order)?;
    let cb = coordinate_basis(&t)?;
    let labels = dec.poset.labels().to_vec();

    let family = dec.lattice.family();
    let lattice_labels: Vec<String> = family.iter().map(ToString::to_string).collect();
    let hasse: Vec<Value> = dec
        .lattice
        .hasse()
        .iter()
        .map(|&(lo, hi)| json!([lattice_labels[lo], lattice_labels[hi]]))
        .collect();
    let covers: Vec<Value> = dec
        .poset
        .covers()
        .iter()
        .map(|&(lo, hi)| json!([labels[lo], labels[hi]]))
        .collect();
    let blocks: Vec<Value> = (0..dec.blocks.len())
        .map(|i| {
            json!({
                "element": labels[i],
                "ideal": dec.ideals[i].to_string(),
                "block": dec.blocks[i].to_string(),
                "graded_dim": dec.graded[i].ambient_dim(),
            })
        })
        .collect();

    if let Some(dir) = &a.dot_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        write_file(
            &dir.join("bk_lattice.dot"),
            &dot::hasse("bk_lattice", &lattice_labels, dec.lattice.hasse()),
        )?;
        write_file(
            &dir.join("bk_poset.dot"),
            &dot::hasse("bk_poset", &labels, &dec.poset.covers()),
        )?;
    }

    Ok(json!({
        "lattice": {"members": lattice_labels, "hasse": hasse},
        "poset": {"elements": labels, "covers": covers, "size": dec.poset.len()},
        "blocks": blocks,
        "filtration": {
            "chain": filtration.chain.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "graded_shapes": filtration.graded_shapes()?,
        },
        "coordinate_basis": {
            "basis": matrix(&cb.basis),
            "transform": matrix(&cb.transform),
            "identity": cb.is_identity(),
        },
    }))
}

pub fn realize(a: &RealizeArgs) -> CliResult<String> {
    let p = load_poset(&a.file)?;
    let t = realize_poset(&p, a.field)?;
    let round_trip = bk_decomposition(&t)?.poset.is_isomorphic(&p);
    if !round_trip {
        return Err(CliError::Verification(
            "realized tuple does not reproduce the poset".into(),
        ));
    }
    let mut text = String::from("# realizes\n");
    for line in write_poset(&p).lines() {
        text.push_str("#   ");
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&write_tuple(&t));
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(format!("wrote {} (round trip: PASS)\n", path.display()))
        }
        None => Ok(text),
    }
}

pub fn polymatroid(a: &PolymatroidArgs) -> CliResult<Value> {
    let t = load_tuple(&a.file)?;
    let none = !(a.flats || a.dual || a.partition);
    let poly = Polymatroid::from_tuple(&t)?;
    let mut r = Map::new();
    r.insert("n".into(), json!(t.len()));
    r.insert("rank".into(), json!(poly.rank(t.ground())));
    if a.flats || none {
        let fl = poly.flats();
        let labels: Vec<String> = fl.flats.iter().map(ToString::to_string).collect();
        let members: Vec<Value> = fl
            .flats
            .iter()
            .zip(&fl.ranks)
            .map(|(f, rk)| json!({"flat": f.to_string(), "rank": rk}))
            .collect();
        let hasse: Vec<Value> = fl
            .hasse
            .iter()
            .map(|&(lo, hi)| json!([labels[lo], labels[hi]]))
            .collect();
        let dec = distributive_decomposition(&t)?;
        r.insert(
            "flats".into(),
            json!({
                "count": fl.len(),
                "members": members,
                "hasse": hasse,
                "distributive": fl.is_distributive(),
                "coordinate_basis": dec.as_ref().map(|d| matrix(&d.basis)),
            }),
        );
        if let Some(dir) = &a.dot_dir {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            write_file(&dir.join("flats.dot"), &dot::hasse("flats", &labels, &fl.hasse))?;
        }
    }
    if a.dual || none {
        let verdict_value = match dual_realization(&t) {
            Ok(d) => {
                r.insert(
                    "dual_entry_dims".into(),
                    json!(d.dual_tuple.entries().iter().map(|e| e.dim()).collect::<Vec<_>>()),
                );
                verdict(true)
            }
            Err(CoreError::Verification(_)) => verdict(false),
            Err(e) => return Err(e.into()),
        };
        r.insert("rank_equality".into(), verdict_value);
    }
    if a.partition {
        let part = dual_partition_with_cap(&t, a.point_cap)?;
        let mut sizes = Map::new();
        for (f, block) in &part.blocks {
            sizes.insert(f.to_string(), json!(block.len()));
        }
        r.insert(
            "partition".into(),
            json!({
                "points": part.total_points(),
                "blocks": part.blocks.len(),
                "nonempty_blocks": part.blocks.values().filter(|b| !b.is_empty()).count(),
                "block_sizes": sizes,
                "unassigned": part.unassigned,
            }),
        );
    }
    Ok(Value::Object(r))
}

fn suite_config(a: &VerifyArgs) -> CliResult<GenConfig> {
    let file: VerifyConfig = match &a.config {
        Some(path) => toml::from_str(&read(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => VerifyConfig::default(),
    };
    let field = match (&a.field, &file.field) {
        (Some(f), _) => *f,
        (None, Some(s)) => parse_field(s).map_err(CliError::Input)?,
        (None, None) => FieldSpec::Prime(2),
    };
    let dim = a.dim.or(file.dim).unwrap_or(4);
    Ok(GenConfig {
        field,
        ambient_dim: dim,
        n: a.n.or(file.n).unwrap_or(6),
        max_generators_per_subspace: a.max_gens.or(file.max_gens).unwrap_or(dim),
        seed: a.seed.or(file.seed).unwrap_or(1),
        cases: a.cases.or(file.cases).unwrap_or(100),
    })
}

fn suite_options(a: &VerifyArgs) -> SuiteOptions {
    #[cfg(feature = "mutation-hook")]
    {
        SuiteOptions {
            rank_fault: a.mutate,
        }
    }
    #[cfg(not(feature = "mutation-hook"))]
    {
        let _ = a;
        SuiteOptions::default()
    }
}

fn selected(a: &VerifyArgs, name: &str) -> bool {
    a.checks.is_empty() || a.checks.iter().any(|c| c == name)
}

fn check_names(a: &VerifyArgs) -> CliResult<()> {
    let known: Vec<&str> = suite::registry().iter().map(|c| c.name).collect();
    match a.checks.iter().find(|c| !known.contains(&c.as_str())) {
        Some(bad) => Err(CliError::Input(format!(
            "unknown check {bad:?}; known checks: {}",
            known.join(", ")
        ))),
        None => Ok(()),
    }
}

pub fn verify(a: &VerifyArgs, fmt: Format) -> CliResult<(String, i32)> {
    check_names(a)?;
    let opts = suite_options(a);
    let (value, failed, counterexamples) = match &a.replay {
        Some(path) => replay_report(a, &load_tuple(path)?, &opts)?,
        None => {
            let cfg = suite_config(a)?;
            suite_report(a, &suite::run_suite_with(&cfg, &opts))
        }
    };
    let text = report::render(&value, fmt);
    if let Some(path) = &a.out {
        write_file(path, &text)?;
    }
    if let Some(dir) = &a.counterexample_dir {
        if !counterexamples.is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        }
        for (name, body) in &counterexamples {
            write_file(&dir.join(format!("{name}.tuple")), body)?;
        }
    }
    Ok((text, i32::from(failed)))
}

fn comment(message: &str) -> String {
    message.lines().map(|l| format!("# {l}\n")).collect()
}

fn suite_report(a: &VerifyArgs, r: &SuiteReport) -> (Value, bool, Vec<(String, String)>) {
    let mut checks = Map::new();
    let mut counterexamples = Vec::new();
    let mut failures = 0;
    for c in r.checks.iter().filter(|c| selected(a, c.name)) {
        failures += c.failed;
        let mut v = json!({
            "statement": c.statement,
            "run": c.run,
            "skipped": c.skipped,
            "failed": c.failed,
        });
        if let Some(cx) = &c.first_failure {
            v["counterexample"] = json!({
                "case": cx.case_index,
                "message": cx.message,
                "tuple": cx.tuple_text.lines().collect::<Vec<_>>(),
            });
            let body = format!(
                "{}# case {}\n{}",
                comment(&format!("{}: {}", c.name, cx.message)),
                cx.case_index,
                cx.tuple_text
            );
            counterexamples.push((c.name.to_string(), body));
        }
        checks.insert(c.name.to_string(), v);
    }
    let cfg = &r.config;
    let value = json!({
        "config": {
            "field": cfg.field.to_string(),
            "dim": cfg.ambient_dim,
            "n": cfg.n,
            "max_gens": cfg.max_generators_per_subspace,
            "seed": cfg.seed,
            "cases": cfg.cases,
        },
        "checks": checks,
        "failures": failures,
        "result": verdict(failures == 0),
    });
    (value, failures > 0, counterexamples)
}

type Replay = (Value, bool, Vec<(String, String)>);

fn replay_report(a: &VerifyArgs, t: &SubspaceTuple, opts: &SuiteOptions) -> CliResult<Replay> {
    let outcomes = suite::replay(t, opts)?;
    let mut checks = Map::new();
    let mut counterexamples = Vec::new();
    let mut failures = 0;
    for (name, outcome) in outcomes.into_iter().filter(|(n, _)| selected(a, n)) {
        let v = match outcome {
            Outcome::Pass => json!("pass"),
            Outcome::Skip => json!("skip"),
            Outcome::Fail(message) => {
                failures += 1;
                counterexamples.push((
                    name.to_string(),
                    format!("{}{}", comment(&format!("{name}: {message}")), write_tuple(t)),
                ));
                json!({"fail": message})
            }
        };
        checks.insert(name.to_string(), v);
    }
    let value = json!({
        "replay": true,
        "checks": checks,
        "failures": failures,
        "result": verdict(failures == 0),
    });
    Ok((value, failures > 0, counterexamples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_flags() {
        assert_eq!(parse_field("rational"), Ok(FieldSpec::Rationals));
        assert_eq!(parse_field("gf2"), Ok(FieldSpec::Prime(2)));
        assert_eq!(parse_field("GF 5"), Ok(FieldSpec::Prime(5)));
        assert_eq!(parse_field("7"), Ok(FieldSpec::Prime(7)));
        assert!(parse_field("gf4").is_err());
        assert!(parse_field("real").is_err());
    }

    #[test]
    fn index_set_flags() {
        let s = parse_index_set("0,2").unwrap();
        assert_eq!(s.to_string(), "{0,2}");
        assert_eq!(parse_index_set("{}").unwrap(), IndexSet::EMPTY);
        assert!(parse_index_set("0,x").is_err());
    }
}
