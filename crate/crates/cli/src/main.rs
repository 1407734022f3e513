//! `ybe`: analyse finite Yang-Baxter solutions, racks and skew braces from JSON documents.
//!
//! Reports go to standard output as JSON. Exit status is 0 on success, 1 when a validation
//! predicate rejects its input, and 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ybe_core::document::{parse_document, Document, RackDataDocument, RackDocument, SolutionDocument};
use ybe_core::enumerate::{self, Kind};
use ybe_core::monoid::Monoid;
use ybe_core::nilpotency::{self, Budgets};
use ybe_core::rack::Rack;
use ybe_core::report;
use ybe_core::Solution;

#[derive(Parser, Debug)]
#[command(name = "ybe", version, about = "Finite set-theoretic Yang-Baxter solutions")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Caps {
    /// Maximum size of an equivalence class of words.
    #[arg(long, global = true, default_value_t = ybe_core::monoid::DEFAULT_NODE_CAP)]
    class_cap: usize,
    /// Maximum order of a permutation group closure.
    #[arg(long, global = true, default_value_t = ybe_core::perm::DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    /// Class tested by the Malcev falsifier.
    #[arg(long, global = true, default_value_t = 3)]
    malcev_class: usize,
    /// Longest substituted word tried by the Malcev falsifier.
    #[arg(long, global = true, default_value_t = 3)]
    malcev_len: usize,
    /// Number of doublings allowed when searching for d.
    #[arg(long, global = true, default_value_t = ybe_core::monoid::DEFAULT_D_RETRIES)]
    d_retries: u32,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

impl Caps {
    fn budgets(&self) -> Budgets {
        Budgets {
            node_cap: self.class_cap,
            closure_cap: self.closure_cap,
            malcev_class: self.malcev_class,
            malcev_len: self.malcev_len,
            d_retries: self.d_retries,
            ..Budgets::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a document of any kind.
    Validate { file: PathBuf },
    /// Full analysis of a solution.
    Analyze { file: PathBuf },
    /// Decide the nilpotency condition.
    NcCheck {
        file: PathBuf,
        /// Subset sizes to search (default: all).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Check a certificate for the nilpotency condition.
    NcVerify {
        file: PathBuf,
        #[arg(long, value_parser = parse_word)]
        y: Word,
        #[arg(long, value_parser = parse_word)]
        z: Word,
        #[arg(long, value_parser = parse_word)]
        a: Word,
        #[arg(long, value_parser = parse_word)]
        b: Word,
        /// Use this d instead of computing one.
        #[arg(long)]
        d: Option<usize>,
    },
    #[command(subcommand)]
    Rack(RackCommand),
    #[command(subcommand)]
    Brace(BraceCommand),
    #[command(subcommand)]
    Monoid(MonoidCommand),
    /// List all small solutions, racks or abelian rack data.
    Enumerate {
        #[arg(long, value_enum)]
        kind: EnumKind,
        #[arg(long)]
        n: usize,
        /// Resume a stream at this candidate index.
        #[arg(long, default_value_t = 0)]
        cursor: u64,
    },
}

#[derive(Subcommand, Debug)]
enum RackCommand {
    /// Orbit data of an abelian rack.
    Classify { file: PathBuf },
    /// The abelian rack described by rack data.
    Build { file: PathBuf },
    /// Axioms, flags and the nilpotency bound of a rack (or of a solution with trivial ρ).
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum BraceCommand {
    Validate { file: PathBuf },
    Socle { file: PathBuf },
    Commutator { file: PathBuf },
    /// The associated solution as a solution document.
    Solution { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum MonoidCommand {
    /// Class of a word of the derived monoid.
    Normalize {
        file: PathBuf,
        #[arg(long, value_parser = parse_word)]
        word: Word,
        /// Include every member of the class.
        #[arg(long)]
        words: bool,
    },
    /// Equality of two words.
    Equal {
        file: PathBuf,
        #[arg(long, value_parser = parse_word)]
        left: Word,
        #[arg(long, value_parser = parse_word)]
        right: Word,
        /// Read the words in the structure monoid instead of the derived monoid.
        #[arg(long)]
        structure: bool,
    },
    /// Generators dividing a word of the derived monoid.
    Divisors {
        file: PathBuf,
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EnumKind {
    Solutions,
    Racks,
    AbelianRackData,
}

type Word = Vec<usize>;

fn parse_word(s: &str) -> Result<Word, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"))).collect()
}

/// Exit status and JSON body of a finished command.
struct Outcome {
    code: u8,
    body: Value,
}

fn ok(body: Value) -> Result<Outcome, Value> {
    Ok(Outcome { code: 0, body })
}

fn input_error(kind: &str, detail: impl ToString) -> Value {
    json!({ "error": kind, "detail": detail.to_string() })
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn read_document(file: &PathBuf) -> Result<Document, Value> {
    let text = std::fs::read_to_string(file).map_err(|e| input_error("IoError", format!("{}: {e}", file.display())))?;
    parse_document(&text).map_err(|e| to_value(&e))
}

fn read_solution(file: &PathBuf) -> Result<Solution, Value> {
    match read_document(file)? {
        Document::Solution(d) => d.to_solution().map_err(|e| to_value(&e)),
        Document::Brace(d) => {
            let b = d.to_brace().map_err(|e| to_value(&e))?;
            b.solution().map_err(|e| to_value(&e))
        }
        Document::Rack(d) => d.to_rack().map(|r| r.to_solution()).map_err(|e| to_value(&e)),
        Document::RackData(_) => Err(input_error("WrongKind", "expected a solution, rack or brace document")),
    }
}

fn read_brace(file: &PathBuf) -> Result<ybe_core::brace::FiniteSkewBrace, Value> {
    match read_document(file)? {
        Document::Brace(d) => d.to_brace().map_err(|e| to_value(&e)),
        _ => Err(input_error("WrongKind", "expected a brace document")),
    }
}

fn read_rack(file: &PathBuf) -> Result<Rack, Value> {
    match read_document(file)? {
        Document::Rack(d) => d.to_rack().map_err(|e| to_value(&e)),
        Document::Solution(d) => {
            let s = d.to_solution().map_err(|e| to_value(&e))?;
            Rack::from_solution(&s).map_err(|e| to_value(&e))
        }
        _ => Err(input_error("WrongKind", "expected a rack or solution document")),
    }
}

fn compute_d(m: &Monoid, given: Option<usize>, retries: u32) -> Result<usize, Value> {
    match given {
        Some(d) => Ok(d),
        None => m.compute_d(retries).map_err(|e| to_value(&e)),
    }
}

fn validate(file: &PathBuf) -> Result<Outcome, Value> {
    let verdict = match read_document(file)? {
        Document::Solution(d) => d.to_solution().map(|s| to_value(&s.stats())).map_err(|e| to_value(&e)),
        Document::Rack(d) => d
            .to_rack()
            .map(|r| json!({ "quandle": r.is_quandle(), "abelian": r.is_abelian() }))
            .map_err(|e| to_value(&e)),
        Document::RackData(d) => {
            ybe_core::rack::check_rack_data(&d.to_data()).map(|n| json!({ "n": n })).map_err(|e| to_value(&e))
        }
        Document::Brace(d) => d.to_brace().map(|b| json!({ "size": b.size() })).map_err(|e| to_value(&e)),
    };
    Ok(match verdict {
        Ok(info) => Outcome { code: 0, body: json!({ "valid": true, "info": info }) },
        Err(e) => Outcome { code: 1, body: json!({ "valid": false, "reason": e }) },
    })
}

fn run(cli: &Cli) -> Result<Outcome, Value> {
    let budgets = cli.caps.budgets();
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Analyze { file } => {
            let s = read_solution(file)?;
            let start = Instant::now();
            let mut r = report::analyze(&s, &budgets);
            if cli.caps.timing {
                r.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            ok(to_value(&r))
        }
        Command::NcCheck { file, sizes } => {
            let s = read_solution(file)?;
            let m = Monoid::with_cap(&s, budgets.node_cap);
            let d = compute_d(&m, None, budgets.d_retries)?;
            let sizes = sizes.clone().unwrap_or_else(|| (1..=s.n()).collect());
            ok(json!({ "d": d, "nc": to_value(&nilpotency::nc_search(&m, d, &sizes, &budgets)) }))
        }
        Command::NcVerify { file, y, z, a, b, d } => {
            let s = read_solution(file)?;
            let m = Monoid::with_cap(&s, budgets.node_cap);
            let d = compute_d(&m, *d, budgets.d_retries)?;
            let holds = nilpotency::nc_verify_witness(&m, d, y, z, a, b).map_err(|e| to_value(&e))?;
            ok(json!({ "d": d, "holds": holds }))
        }
        Command::Rack(RackCommand::Classify { file }) => {
            let r = read_rack(file)?;
            let data = r.classify_abelian().map_err(|e| to_value(&e))?;
            ok(to_value(&Document::RackData(RackDataDocument::from_data(&data))))
        }
        Command::Rack(RackCommand::Build { file }) => match read_document(file)? {
            Document::RackData(d) => {
                let r = d.to_data().build().map_err(|e| to_value(&e))?;
                ok(to_value(&Document::Rack(RackDocument::from_rack(&r))))
            }
            _ => Err(input_error("WrongKind", "expected a rack_data document")),
        },
        Command::Rack(RackCommand::Check { file }) => {
            let checked = match read_document(file)? {
                Document::Rack(d) => d.to_rack(),
                Document::Solution(d) => Rack::from_solution(&d.to_solution().map_err(|e| to_value(&e))?),
                _ => return Err(input_error("WrongKind", "expected a rack or solution document")),
            };
            let r = match checked {
                Ok(r) => r,
                Err(e) => return Ok(Outcome { code: 1, body: json!({ "valid": false, "reason": to_value(&e) }) }),
            };
            let bound = nilpotency::rack_nilpotency_bound(&r, budgets.closure_cap)
                .map_err(|e| input_error("ClosureCapExceeded", e))?;
            ok(json!({
                "valid": true,
                "quandle": r.is_quandle(),
                "abelian": r.is_abelian(),
                "orbits": r.orbits(),
                "nilpotency_bound": to_value(&bound),
            }))
        }
        Command::Brace(cmd) => brace(cmd),
        Command::Monoid(cmd) => monoid(cmd, &budgets),
        Command::Enumerate { kind, n, cursor } => enumerate(*kind, *n, *cursor),
    }
}

fn brace(cmd: &BraceCommand) -> Result<Outcome, Value> {
    match cmd {
        BraceCommand::Validate { file } => validate(file),
        BraceCommand::Socle { file } => {
            let b = read_brace(file)?;
            ok(json!({ "socle": b.socle(), "series": to_value(&b.socle_series()) }))
        }
        BraceCommand::Commutator { file } => ok(to_value(&read_brace(file)?.additive_commutator())),
        BraceCommand::Solution { file } => {
            let s = read_brace(file)?.solution().map_err(|e| to_value(&e))?;
            ok(to_value(&Document::Solution(SolutionDocument::from_solution(&s))))
        }
    }
}

fn monoid(cmd: &MonoidCommand, budgets: &Budgets) -> Result<Outcome, Value> {
    let file = match cmd {
        MonoidCommand::Normalize { file, .. } | MonoidCommand::Equal { file, .. } | MonoidCommand::Divisors { file, .. } => file,
    };
    let m = Monoid::with_cap(&read_solution(file)?, budgets.node_cap);
    let err = |e: ybe_core::monoid::MonoidError| to_value(&e);
    match cmd {
        MonoidCommand::Normalize { word, words, .. } => {
            let c = m.normalize(word).map_err(err)?;
            let mut body = json!({
                "size": c.words.len(),
                "canon": c.canon,
                "divisors": c.divisors,
                "level": c.level,
            });
            if *words {
                body["words"] = to_value(&c.words);
            }
            ok(body)
        }
        MonoidCommand::Equal { left, right, structure, .. } => {
            let eq = if *structure { m.m_equal(left, right) } else { m.a_equal(left, right) };
            ok(json!({ "equal": eq.map_err(err)? }))
        }
        MonoidCommand::Divisors { word, .. } => {
            let c = m.normalize(word).map_err(err)?;
            ok(json!({ "divisors": c.divisors, "level": c.level }))
        }
    }
}

fn enumerate(kind: EnumKind, n: usize, cursor: u64) -> Result<Outcome, Value> {
    let e = |e: enumerate::EnumerationError| to_value(&e);
    let (kind_name, docs): (Kind, Vec<Document>) = match kind {
        EnumKind::Solutions => (
            Kind::Solutions,
            enumerate::resume_solutions(n, cursor)
                .map_err(e)?
                .map(|s| Document::Solution(SolutionDocument::from_solution(&s)))
                .collect(),
        ),
        EnumKind::Racks => (
            Kind::Racks,
            enumerate::resume_racks(n, cursor).map_err(e)?.map(|r| Document::Rack(RackDocument::from_rack(&r))).collect(),
        ),
        EnumKind::AbelianRackData => (
            Kind::AbelianRackData,
            enumerate::enumerate_abelian_rack_data(n)
                .map_err(e)?
                .iter()
                .skip(cursor as usize)
                .map(|d| Document::RackData(RackDataDocument::from_data(d)))
                .collect(),
        ),
    };
    ok(json!({ "kind": to_value(&kind_name), "n": n, "count": docs.len(), "documents": to_value(&docs) }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, body) = match run(&cli) {
        Ok(Outcome { code, body }) => (code, body),
        Err(e) => (2, e),
    };
    println!("{}", serde_json::to_string_pretty(&body).expect("json"));
    ExitCode::from(code)
}
