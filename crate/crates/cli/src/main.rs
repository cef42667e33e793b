//! Command-line surface: every pipeline with file input and JSON output.
//!
//! Exit codes: 0 success or no witness found, 1 usage error, 2 input or
//! contract error, 3 positive detection (not an absolute Galois group), so
//! that shell pipelines can branch on the verdict.
//!
//! Every result is a single-line JSON object on stdout with sorted keys;
//! errors additionally print a human-readable line on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use progal::class2::GeneratorAction;
use progal::cohomology::{h2dec_type, profile};
use progal::detector::{
    family_detect, h2dec_detect, tgroup_detect, theorem1_case1, theorem1_case2, theorem1_case3,
    Verdict,
};
use progal::error::Error;
use progal::fpmod::{jordan_type, FpMatrix, NilpotentAction, Prime};
use progal::presentation::{
    omega_presentation, parse_document, parse_word, schreier_tgroup, zp2_lift_exists, Document,
    ProPPresentation,
};
use progal::tgroup::{admissible, canonical, invariants_from_data, TInvariants};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "progal",
    about = "Exact F_p computations for finitely presented pro-p-groups and \
             detectors for groups that cannot be absolute Galois groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan type of a nilpotent matrix (the action of sigma - 1)
    Decompose {
        /// File with one whitespace-separated matrix row per line
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// T-group invariants of the index-p subgroup named by the file's chi
    Tgroup {
        #[arg(long)]
        pres: PathBuf,
    },
    /// Canonical T-group data for given invariants
    Canonical {
        #[arg(long)]
        p: u64,
        /// Multiplicities as size=mult pairs, e.g. 1=1,5=2
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: usize,
    },
    /// H^1 and decomposable H^2 of a presented group with a C_p-action
    Cohomology {
        #[arg(long)]
        pres: PathBuf,
        /// File with `map` lines; defaults to the maps in `--pres`, or to
        /// the trivial action when no maps are given anywhere
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Emit the seed presentation on p cyclically commuting generators
    Omega {
        #[arg(long)]
        p: u64,
        /// Check the computed cohomology against the closed formula
        #[arg(long)]
        verify: bool,
    },
    /// Screen a whole semidirect-product family member
    Family {
        #[arg(long)]
        p: u64,
        /// Presentation of the free factor with trivial action; trivial
        /// group when omitted
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
    /// Run one detection rule against one or more presentation files
    Detect(DetectArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// thm1.1 | thm1.2 | thm1.3 | tgroup | h2dec | family
    #[arg(long)]
    rule: String,
    /// Presentation file(s); the verdicts are printed in input order
    #[arg(long)]
    pres: Vec<PathBuf>,
    /// Word outside the subgroup (rules thm1.*)
    #[arg(long)]
    sigma: Option<String>,
    /// Word inside the subgroup (rule thm1.1)
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    tau1: Option<String>,
    #[arg(long)]
    tau2: Option<String>,
    /// Commutator depth (rule thm1.1)
    #[arg(long)]
    e: Option<usize>,
    /// Assert a Z/p^2 quotient for the h2dec rule
    #[arg(long)]
    zp2: bool,
    /// Action file for the h2dec rule (defaults as in `cohomology`)
    #[arg(long)]
    action: Option<PathBuf>,
    /// Prime for rule `family` (which takes no presentation of its own)
    #[arg(long)]
    p: Option<u64>,
    /// Sigma presentation file for rule `family`
    #[arg(long)]
    sigma_file: Option<PathBuf>,
    /// Worker threads for batch detection
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

enum Failure {
    Usage(String),
    Input(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) => m,
            Failure::Input(m) => m,
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_INPUT,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.kind(), "message": self.message() })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(EXIT_OK);
            }
            let failure = Failure::Usage(e.to_string().lines().next().unwrap_or("").to_string());
            println!("{}", failure.to_json());
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            println!("{}", failure.to_json());
            eprintln!("error: {}", failure.message());
            failure.exit()
        }
    };
    ExitCode::from(code)
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_document(path: &Path) -> CliResult<Document> {
    Ok(parse_document(&read_file(path)?)?)
}

fn prime(p: u64) -> CliResult<Prime> {
    Ok(Prime::new(p)?)
}

/// The action for a presentation: from an explicit action file, from `map`
/// lines in the presentation file, or the trivial action.
fn resolve_action(doc: &Document, action_path: Option<&Path>) -> CliResult<GeneratorAction> {
    if let Some(path) = action_path {
        let action_doc = load_document(path)?;
        if action_doc.presentation.generator_names() != doc.presentation.generator_names() {
            return Err(Failure::Input(format!(
                "action file {} declares different generators",
                path.display()
            )));
        }
        if let Some(action) = action_doc.action()? {
            return Ok(action);
        }
        return Err(Failure::Input(format!(
            "action file {} has no map lines",
            path.display()
        )));
    }
    if let Some(action) = doc.action()? {
        return Ok(action);
    }
    let group = progal::class2::ClassTwoGroup::new(
        doc.presentation.p(),
        doc.presentation.num_generators(),
    )?;
    Ok(GeneratorAction::trivial(&group))
}

fn verdict_exit(verdicts: &[Verdict]) -> u8 {
    if verdicts.iter().any(|v| v.is_flagged()) {
        EXIT_FLAGGED
    } else {
        EXIT_OK
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Decompose { matrix, p } => {
            let p = prime(p)?;
            let text = read_file(&matrix)?;
            let mut rows: Vec<Vec<i64>> = Vec::new();
            for (lineno, raw) in text.lines().enumerate() {
                let content = raw.split('#').next().unwrap_or("").trim();
                if content.is_empty() {
                    continue;
                }
                let row: Result<Vec<i64>, _> =
                    content.split_whitespace().map(str::parse).collect();
                let row = row.map_err(|e| {
                    Failure::Input(format!("matrix line {}: {e}", lineno + 1))
                })?;
                rows.push(row);
            }
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Failure::Input("matrix must be square".into()));
            }
            let action = NilpotentAction::new(p, FpMatrix::from_rows(p, &rows))?;
            emit(&serde_json::json!({
                "p": p.get(),
                "jordan_type": jordan_type(&action).to_json(),
            }));
            Ok(EXIT_OK)
        }
        Command::Tgroup { pres } => {
            let doc = load_document(&pres)?;
            let chi = doc.character.clone().ok_or_else(|| {
                Failure::Input(format!("{} has no chi line", pres.display()))
            })?;
            let result = schreier_tgroup(&doc.presentation, &chi)?;
            emit(&result.invariants().to_json());
            Ok(EXIT_OK)
        }
        Command::Canonical { p, t, u } => {
            let p = prime(p)?;
            let pp = p.get() as usize;
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for part in t.split(',').filter(|s| !s.is_empty()) {
                let (size, mult) = part.split_once('=').ok_or_else(|| {
                    Failure::Usage(format!("expected size=mult in --t, got `{part}`"))
                })?;
                let size: usize = size
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad size `{size}` in --t")))?;
                let mult: usize = mult
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad multiplicity `{mult}` in --t")))?;
                if !(1..=pp).contains(&size) {
                    return Err(Failure::Input(format!(
                        "t index {size} outside 1..={pp}"
                    )));
                }
                pairs.push((size, mult));
            }
            if !(1..=pp).contains(&u) {
                return Err(Failure::Input(format!("u = {u} outside 1..={pp}")));
            }
            let inv = TInvariants::new(p, &pairs, u);
            if !admissible(&inv) {
                return Err(Failure::Input(format!(
                    "invariants are not admissible: t = {t}, u = {u}"
                )));
            }
            let data = canonical(&inv)?;
            emit(&serde_json::json!({
                "p": p.get(),
                "action": data.action().matrix().to_json(),
                "sigma_p": data.sigma_p(),
                "jordan_type": jordan_type(data.action()).to_json(),
                "invariants": invariants_from_data(&data).to_json(),
            }));
            Ok(EXIT_OK)
        }
        Command::Cohomology { pres, action } => {
            let doc = load_document(&pres)?;
            let act = resolve_action(&doc, action.as_deref())?;
            let prof = profile(&doc.presentation, &act)?;
            emit(&prof.to_json());
            Ok(EXIT_OK)
        }
        Command::Omega { p, verify } => {
            let p = prime(p)?;
            let (pres, action) = omega_presentation(p)?;
            if !verify {
                print!("{}", pres.to_text(None, Some(&action)));
                return Ok(EXIT_OK);
            }
            let prof = profile(&pres, &action)?;
            let pp = p.get() as usize;
            let expected_h1 = progal::fpmod::JordanType::from_pairs(&[(pp, 1)]);
            let expected_h2 =
                progal::fpmod::JordanType::from_pairs(&[(pp - 1, 1), (pp, (pp - 3) / 2)]);
            let matches = prof.h1 == expected_h1 && prof.h2dec == expected_h2;
            emit(&serde_json::json!({
                "p": p.get(),
                "h1": prof.h1.to_json(),
                "h2dec": prof.h2dec.to_json(),
                "expected_h1": expected_h1.to_json(),
                "expected_h2dec": expected_h2.to_json(),
                "match": matches,
            }));
            if matches {
                Ok(EXIT_OK)
            } else {
                Err(Failure::Input(
                    "computed cohomology does not match the closed formula".into(),
                ))
            }
        }
        Command::Family { p, sigma } => {
            let p = prime(p)?;
            let sigma_pres = match sigma {
                Some(path) => load_document(&path)?.presentation,
                None => ProPPresentation::new(p, vec![], vec![])?,
            };
            let verdict = family_detect(p, &sigma_pres)?;
            emit(&verdict.to_json());
            Ok(verdict_exit(&[verdict]))
        }
        Command::Detect(args) => run_detect(args),
    }
}

fn detect_one(args: &DetectArgs, path: &Path) -> CliResult<Verdict> {
    let doc = load_document(path)?;
    let pres = &doc.presentation;
    let names = pres.generator_names().to_vec();
    let need_chi = || {
        doc.character
            .clone()
            .ok_or_else(|| Failure::Input(format!("{} has no chi line", path.display())))
    };
    let word_arg = |arg: &Option<String>, flag: &str| -> CliResult<progal::class2::Word> {
        let text = arg
            .as_ref()
            .ok_or_else(|| Failure::Usage(format!("rule {} requires --{flag}", args.rule)))?;
        Ok(parse_word(text, &names, 0)?)
    };
    match args.rule.as_str() {
        "thm1.1" => {
            let chi = need_chi()?;
            let sigma = word_arg(&args.sigma, "sigma")?;
            let tau = word_arg(&args.tau, "tau")?;
            let e = args
                .e
                .ok_or_else(|| Failure::Usage("rule thm1.1 requires --e".into()))?;
            Ok(theorem1_case1(pres, &chi, &sigma, &tau, e)?)
        }
        "thm1.2" => {
            let chi = need_chi()?;
            let sigma = word_arg(&args.sigma, "sigma")?;
            let tau1 = word_arg(&args.tau1, "tau1")?;
            let tau2 = word_arg(&args.tau2, "tau2")?;
            Ok(theorem1_case2(pres, &chi, &sigma, &tau1, &tau2)?)
        }
        "thm1.3" => {
            let chi = need_chi()?;
            let sigma = word_arg(&args.sigma, "sigma")?;
            Ok(theorem1_case3(pres, &chi, &sigma)?)
        }
        "tgroup" => {
            let chi = need_chi()?;
            Ok(tgroup_detect(pres, &chi)?)
        }
        "h2dec" => {
            let act = resolve_action(&doc, args.action.as_deref())?;
            let t = h2dec_type(pres, &act)?;
            let has_zp2 = if args.zp2 {
                true
            } else if let Some(chi) = &doc.character {
                zp2_lift_exists(pres, chi)?
            } else {
                false
            };
            Ok(h2dec_detect(&t, pres.p(), has_zp2)?)
        }
        other => unreachable!("rule `{other}` was validated before dispatch"),
    }
}

fn run_detect(args: DetectArgs) -> CliResult<u8> {
    const RULES: &[&str] = &["thm1.1", "thm1.2", "thm1.3", "tgroup", "h2dec", "family"];
    if !RULES.contains(&args.rule.as_str()) {
        return Err(Failure::Usage(format!(
            "unknown rule `{}`; expected one of {}",
            args.rule,
            RULES.join(", ")
        )));
    }
    if args.rule == "family" {
        let p = prime(args.p.ok_or_else(|| {
            Failure::Usage("rule family requires --p".into())
        })?)?;
        let sigma_pres = match &args.sigma_file {
            Some(path) => load_document(path)?.presentation,
            None => ProPPresentation::new(p, vec![], vec![])?,
        };
        let verdict = family_detect(p, &sigma_pres)?;
        emit(&verdict.to_json());
        return Ok(verdict_exit(&[verdict]));
    }

    if args.pres.is_empty() {
        return Err(Failure::Usage("detect requires at least one --pres".into()));
    }
    let need = |present: bool, flag: &str| -> CliResult<()> {
        if present {
            Ok(())
        } else {
            Err(Failure::Usage(format!("rule {} requires --{flag}", args.rule)))
        }
    };
    match args.rule.as_str() {
        "thm1.1" => {
            need(args.sigma.is_some(), "sigma")?;
            need(args.tau.is_some(), "tau")?;
            need(args.e.is_some(), "e")?;
        }
        "thm1.2" => {
            need(args.sigma.is_some(), "sigma")?;
            need(args.tau1.is_some(), "tau1")?;
            need(args.tau2.is_some(), "tau2")?;
        }
        "thm1.3" => need(args.sigma.is_some(), "sigma")?,
        _ => {}
    }
    let jobs = args.jobs.max(1);
    let results: Vec<CliResult<Verdict>> = if jobs == 1 || args.pres.len() == 1 {
        args.pres.iter().map(|p| detect_one(&args, p)).collect()
    } else {
        // deterministic merged order: results indexed by input position
        let indexed: Vec<(usize, &PathBuf)> = args.pres.iter().enumerate().collect();
        let chunk = indexed.len().div_ceil(jobs);
        let mut slots: Vec<Option<CliResult<Verdict>>> = Vec::new();
        slots.resize_with(args.pres.len(), || None);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for batch in indexed.chunks(chunk) {
                let args_ref = &args;
                handles.push(scope.spawn(move || {
                    batch
                        .iter()
                        .map(|(i, path)| (*i, detect_one(args_ref, path)))
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                for (i, r) in h.join().expect("worker thread panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("all slots filled")).collect()
    };

    let mut any_error = false;
    let mut verdicts = Vec::new();
    for result in results {
        match result {
            Ok(v) => {
                emit(&v.to_json());
                verdicts.push(v);
            }
            Err(f) => {
                println!("{}", f.to_json());
                eprintln!("error: {}", f.message());
                any_error = true;
            }
        }
    }
    if any_error {
        Ok(EXIT_INPUT)
    } else {
        Ok(verdict_exit(&verdicts))
    }
}
