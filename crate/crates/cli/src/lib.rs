//! `convex-gen` command line. [`run`] is the whole program; `main` only wires
//! it to the process streams.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input or failed
//! validation, 3 solver disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use convex_gen::dot::{diagram_file_name, emit, DiagramKind, DiagramStyle, LabelPolicy};
use convex_gen::explore::{cross_validate, enumerate_geometries, spectrum, CampaignConfig};
use convex_gen::game::{nim_bruteforce, BruteForce, BRUTE_FORCE_LIMIT};
use convex_gen::io::{load_instance, parse_instance_file, Instance};
use convex_gen::structure::{class_of_position, StructureDiagram};
use convex_gen::{nim_closed, Error, NimValue, SubsetMask};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "convex-gen",
    version,
    about = "Exact nim values for convex-closure achievement games"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the convex geometry axioms of an instance file.
    Validate(InputArgs),
    /// Nim value of the game.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value = "structure")]
        method: Method,
    },
    /// Game digraph, structure diagram or orbit quotient in DOT format.
    Diagram {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum)]
        dot: Kind,
        /// Write <instance-id>.<kind>.dot into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "labels")]
        labels: Labels,
    },
    /// Convex geometries on n <= 5 points up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "any")]
        empty: EmptyFlag,
        #[arg(long)]
        json: bool,
    },
    /// Histogram of nim values over a campaign.
    Spectrum(CampaignArgs),
    /// Compare solvers over a campaign.
    CrossValidate(CampaignArgs),
    /// Class, predicted and brute-force nim value, and optimal move of one position.
    Position {
        #[command(flatten)]
        game: GameArgs,
        /// Comma-separated labels or indices; empty for the empty position.
        #[arg(long, allow_hyphen_values = true)]
        elements: String,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GameArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated labels or indices replacing the file's winning set.
    #[arg(long, allow_hyphen_values = true)]
    winning: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CampaignArgs {
    /// Campaign config (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's sink directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Structure,
    Closed,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Game,
    Structure,
    Orbit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Indices,
    Labels,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmptyFlag {
    Any,
    Convex,
    Nonconvex,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first), runs the verb, and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.verb, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(verb: Verb, out: &mut dyn Write) -> Outcome {
    match verb {
        Verb::Validate(a) => validate(&a.input, a.json, out),
        Verb::Solve { game, method } => solve(&game, method, out),
        Verb::Diagram {
            game,
            dot,
            out: dir,
            labels,
        } => diagram(&game, dot, dir.as_deref(), labels, out),
        Verb::Enumerate { n, empty, json } => enumerate(n, empty, json, out),
        Verb::Spectrum(c) => run_spectrum(&c, out),
        Verb::CrossValidate(c) => run_cross_validate(&c, out),
        Verb::Position { game, elements } => position(&game, &elements, out),
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json value"))
}

fn load(game: &GameArgs) -> Result<Instance, Failure> {
    Ok(load_instance(&game.input, game.winning.as_deref())?)
}

fn validate(path: &Path, as_json: bool, out: &mut dyn Write) -> Outcome {
    let text = std::fs::read_to_string(path)?;
    let file = parse_instance_file(&text)?;
    let (ok, summary, violations) = match file.geometry() {
        Ok((g, _)) => (
            true,
            format!("valid: n = {}, {} convex sets", g.n(), g.convex_sets().len()),
            Vec::new(),
        ),
        Err(Error::Axioms(report)) => (
            false,
            "invalid".to_string(),
            report.violations.iter().map(|v| v.to_string()).collect(),
        ),
        Err(e) => return Err(e.into()),
    };
    if as_json {
        print_json(out, &json!({"valid": ok, "violations": violations}))?;
    } else {
        writeln!(out, "{summary}")?;
        for v in &violations {
            writeln!(out, "  {v}")?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_INVALID })
}

fn solve(game: &GameArgs, method: Method, out: &mut dyn Write) -> Outcome {
    let inst = load(game)?;
    let mut results: Vec<(&str, Result<NimValue, String>, Option<String>)> = Vec::new();
    if matches!(method, Method::Brute | Method::All) {
        if method == Method::All && inst.spec.n() > BRUTE_FORCE_LIMIT {
            results.push(("brute", Err("ground set too large".into()), None));
        } else {
            results.push(("brute", Ok(nim_bruteforce(&inst.spec)?), None));
        }
    }
    if matches!(method, Method::Structure | Method::All) {
        results.push((
            "structure",
            Ok(StructureDiagram::solve(&inst.spec)?.game_nim()?),
            None,
        ));
    }
    if matches!(method, Method::Closed | Method::All) {
        match nim_closed(&inst) {
            Ok((v, family)) => results.push(("closed", Ok(v), Some(family.to_string()))),
            Err(e @ Error::NoClosedForm(_)) if method == Method::All => {
                results.push(("closed", Err(e.to_string()), None))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let values: Vec<NimValue> = results.iter().filter_map(|r| r.1.clone().ok()).collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let nim = values.first().copied();
    if game.json {
        let methods: serde_json::Map<String, serde_json::Value> = results
            .iter()
            .map(|(name, v, family)| {
                let entry = match v {
                    Ok(v) => json!({"nim": v, "family": family}),
                    Err(reason) => json!({"nim": null, "reason": reason}),
                };
                (name.to_string(), entry)
            })
            .collect();
        print_json(
            out,
            &json!({
                "instance": inst.id,
                "n": inst.spec.n(),
                "winning": inst.spec.winning().to_vec(),
                "nim": if agree { nim } else { None },
                "agree": agree,
                "methods": methods,
            }),
        )?;
    } else {
        if results.len() > 1 {
            for (name, v, family) in &results {
                match (v, family) {
                    (Ok(v), Some(f)) => writeln!(out, "{name}: {v} ({f})")?,
                    (Ok(v), None) => writeln!(out, "{name}: {v}")?,
                    (Err(reason), _) => writeln!(out, "{name}: n/a ({reason})")?,
                }
            }
        }
        match (agree, nim) {
            (true, Some(v)) => writeln!(out, "nim = {v}")?,
            _ => writeln!(out, "solvers disagree")?,
        }
    }
    Ok(if agree { EXIT_OK } else { EXIT_DISAGREEMENT })
}

fn diagram(
    game: &GameArgs,
    kind: Kind,
    dir: Option<&Path>,
    labels: Labels,
    out: &mut dyn Write,
) -> Outcome {
    let inst = load(game)?;
    let kind = match kind {
        Kind::Game => DiagramKind::Game,
        Kind::Structure => DiagramKind::Structure,
        Kind::Orbit => DiagramKind::Orbit,
    };
    let mut style = DiagramStyle::new(kind);
    style.labels = match labels {
        Labels::Indices => LabelPolicy::Indices,
        Labels::Labels => LabelPolicy::Labels,
    };
    let text = emit(&inst.spec, &style)?;
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(diagram_file_name(&inst.id, kind));
            std::fs::write(&path, &text)?;
            if game.json {
                print_json(out, &json!({"path": path}))?;
            } else {
                writeln!(out, "{}", path.display())?;
            }
        }
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

fn enumerate(n: usize, empty: EmptyFlag, as_json: bool, out: &mut dyn Write) -> Outcome {
    let flag = match empty {
        EmptyFlag::Any => None,
        EmptyFlag::Convex => Some(true),
        EmptyFlag::Nonconvex => Some(false),
    };
    let geometries = enumerate_geometries(n, flag)?;
    if as_json {
        let list: Vec<serde_json::Value> = geometries
            .iter()
            .map(|g| {
                let convex: Vec<Vec<usize>> = g.convex_sets().iter().map(|k| k.to_vec()).collect();
                json!({"type": "family", "n": n, "convex": convex})
            })
            .collect();
        print_json(out, &serde_json::Value::Array(list))?;
    } else {
        let noun = if geometries.len() == 1 { "geometry" } else { "geometries" };
        writeln!(out, "{} {noun} on {n} points", geometries.len())?;
        for (i, g) in geometries.iter().enumerate() {
            let sets: Vec<String> = g
                .convex_sets()
                .iter()
                .map(|k| if k.is_empty() { "∅".to_string() } else { k.to_string() })
                .collect();
            writeln!(out, "{i:>4}: {}", sets.join(" "))?;
        }
    }
    Ok(EXIT_OK)
}

fn load_campaign(args: &CampaignArgs) -> Result<CampaignConfig, Failure> {
    let mut config = CampaignConfig::load(&args.input)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(dir) = &args.out {
        config.sink = Some(dir.clone());
    }
    Ok(config)
}

fn run_spectrum(args: &CampaignArgs, out: &mut dyn Write) -> Outcome {
    let config = load_campaign(args)?;
    let report = spectrum(&config)?;
    if let Some(dir) = &config.sink {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("spectrum.json"), report.to_json())?;
    }
    if args.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "instances: {}", report.instances)?;
        if report.unsolved > 0 {
            writeln!(out, "unsolved: {}", report.unsolved)?;
        }
        for (v, count) in &report.counts {
            writeln!(out, "nim {v}: {count} (first: {})", report.witnesses[v].id)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_cross_validate(args: &CampaignArgs, out: &mut dyn Write) -> Outcome {
    let config = load_campaign(args)?;
    let report = cross_validate(&config)?;
    if args.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "instances: {}", report.instances)?;
        writeln!(out, "comparisons: {}", report.comparisons)?;
        writeln!(out, "disagreements: {}", report.disagreements)?;
        if let Some(id) = &report.first_counterexample {
            writeln!(out, "first counterexample: {id}")?;
        }
    }
    Ok(if report.disagreements == 0 {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

fn position(game: &GameArgs, elements: &str, out: &mut dyn Write) -> Outcome {
    let inst = load(game)?;
    let spec = &inst.spec;
    let g = spec.geometry();
    let p = g.parse_set(elements)?;
    let name = |s: SubsetMask| {
        if s.is_empty() {
            "∅".to_string()
        } else {
            g.format_set(s)
        }
    };
    let diagram = StructureDiagram::solve(spec)?;
    let (class, predicted) = class_of_position(&diagram, p)?;
    let class_set = class.set;
    let triple = class.type_triple().expect("solved diagram is typed");
    let terminal = spec.is_terminal(p);
    let (brute, best) = if spec.n() <= BRUTE_FORCE_LIMIT {
        let mut bf = BruteForce::new(spec)?;
        let best = if terminal { None } else { bf.optimal_move(p)? };
        (Some(bf.nim(p)?), best)
    } else {
        (None, None)
    };
    let added = best.map(|q| (q - p).first().expect("a move adds one element"));
    if game.json {
        print_json(
            out,
            &json!({
                "position": p.to_vec(),
                "terminal": terminal,
                "class": class_set.to_vec(),
                "type": triple,
                "predicted": predicted,
                "brute": brute,
                "optimal_move": added,
            }),
        )?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "position: {}", name(p))?;
    if terminal {
        writeln!(out, "terminal, nim 0")?;
    }
    writeln!(out, "class: {} type {triple}", name(class_set))?;
    writeln!(out, "predicted nim: {predicted}")?;
    match brute {
        Some(v) => writeln!(out, "brute-force nim: {v}")?,
        None => writeln!(out, "brute-force nim: n/a (ground set too large)")?,
    }
    match (added, best) {
        (Some(a), Some(q)) => writeln!(out, "optimal move: add {} -> {}", g.label(a), name(q))?,
        _ if terminal => {}
        _ => writeln!(out, "optimal move: none (every option is nonzero)")?,
    }
    Ok(EXIT_OK)
}
