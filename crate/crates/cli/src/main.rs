use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mes_core::construct::{self, ConstructError};
use mes_core::io::{self, FormatError};
use mes_core::rank::{self, RankError};
use mes_core::slocc::{self, SloccError};
use mes_core::tensor::{self, DimsProfile, PureState, TensorError};

#[derive(Parser)]
#[command(name = "mes", version, about = "SLOCC analysis of multipartite pure states")]
struct Cli {
    /// Emit a single JSON report object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Does the space have a maximum entangled state?
    CheckMes(DimsArg),
    /// Does the state have full local ranks?
    Maximal { state: PathBuf },
    /// Complement state built on the orthocomplement of the pivot flattening.
    Complement {
        state: PathBuf,
        #[arg(long)]
        pivot: usize,
    },
    /// Maximal-class label of a state in a (d2 d3 - 1) x d2 x d3 space.
    Classify { state: PathBuf },
    /// Decide SLOCC equivalence where a procedure exists.
    Equiv { a: PathBuf, b: PathBuf },
    /// Bipartitions proving two states SLOCC incomparable.
    Witness { a: PathBuf, b: PathBuf },
    /// Local operators taking the maximum entangled state to a target.
    Reach {
        #[command(flatten)]
        dims: DimsArg,
        target: PathBuf,
    },
    /// Known finiteness results for the space.
    Catalog(DimsArg),
    /// Build a named state.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Local and bipartition Schmidt ranks.
    LocalRanks { state: PathBuf },
    /// Schmidt spectrum across a cut.
    Schmidt {
        state: PathBuf,
        /// Comma-separated parties on one side of the cut.
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
    },
    /// Tensor-rank bounds over a whole tripartite space.
    RankBounds(DimsArg),
    /// Flattening lower bound on a state's tensor rank.
    RankLb { state: PathBuf },
    /// Check a product decomposition against a state.
    VerifyDecomp { state: PathBuf, decomposition: PathBuf },
    /// Apply a local operator tuple to a state.
    Apply { state: PathBuf, ops: PathBuf },
}

#[derive(Args)]
struct DimsArg {
    /// Comma-separated local dimensions, e.g. 3,2,2.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
}

#[derive(Subcommand)]
enum Family {
    /// sum_i |ii>
    Epr {
        #[arg(long)]
        d: usize,
    },
    /// sum_i |i...i>
    Ghz {
        #[arg(long)]
        parties: usize,
        #[arg(long)]
        d: usize,
    },
    /// Single-excitation W state on qubits.
    W {
        #[arg(long)]
        parties: usize,
    },
    /// Maximum entangled state of a sorted profile with d1 >= d2...dn.
    Mes(DimsArg),
    /// Maximal tripartite state of tensor rank d1.
    MaximalRankD1 {
        #[command(flatten)]
        dims: DimsArg,
        /// Emit the d1-term product decomposition instead of the state.
        #[arg(long)]
        certificate: bool,
    },
    /// Add product terms until every local rank is full.
    Augment { state: PathBuf },
    /// Canonical maximal state of class r in a hyperplane space.
    Canonical {
        #[command(flatten)]
        dims: DimsArg,
        #[arg(long)]
        r: usize,
    },
    /// m x m matrix multiplication tensor.
    Matmul {
        #[arg(long)]
        m: usize,
    },
    /// Strassen's 7-term decomposition of the 2 x 2 multiplication tensor.
    Strassen,
    /// One of the two incomparable EPR-pair products on four parties.
    Case1 {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        which: Which,
    },
    /// Representative of maximal class 1 or 2 of 3 x 2 x 2.
    Rep322 {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    A,
    B,
}

enum Failure {
    Io(String),
    Precondition(String),
    Undecidable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Undecidable(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Precondition(m) | Failure::Undecidable(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::State(_) | FormatError::Decomposition(_) => Failure::Precondition(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl From<SloccError> for Failure {
    fn from(e: SloccError) -> Self {
        match e {
            SloccError::Undecidable(_) => Failure::Undecidable(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

macro_rules! precondition {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Precondition(e.to_string())
            }
        }
    )*};
}
precondition!(TensorError, ConstructError, RankError);

struct Report {
    input: Value,
    result: Value,
    provenance: Vec<&'static str>,
    text: String,
}

impl Report {
    fn new(input: Value, result: Value, provenance: Vec<&'static str>) -> Self {
        let text = render(&result);
        Self { input, result, provenance, text }
    }

    fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        _ => serde_json::to_string_pretty(v).expect("value serializes"),
    }
}

fn load_state(path: &Path) -> Result<PureState, Failure> {
    Ok(io::state_from_value(&io::read_value(path)?)?)
}

fn state_input(path: &Path, state: &PureState) -> Value {
    json!({"path": path.display().to_string(), "dims": state.dims()})
}

fn rank_profile_value(p: &tensor::RankProfile) -> Value {
    let cuts: Vec<Value> = tensor::bipartitions(p.local_ranks.len())
        .into_iter()
        .map(|c| json!({"cut": c, "rank": p.bipartition_ranks[&c]}))
        .collect();
    json!({"local_ranks": p.local_ranks, "bipartitions": cuts})
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckMes(_) => "check-mes",
        Command::Maximal { .. } => "maximal",
        Command::Complement { .. } => "complement",
        Command::Classify { .. } => "classify",
        Command::Equiv { .. } => "equiv",
        Command::Witness { .. } => "witness",
        Command::Reach { .. } => "reach",
        Command::Catalog(_) => "catalog",
        Command::Construct { .. } => "construct",
        Command::LocalRanks { .. } => "local-ranks",
        Command::Schmidt { .. } => "schmidt",
        Command::RankBounds(_) => "rank-bounds",
        Command::RankLb { .. } => "rank-lb",
        Command::VerifyDecomp { .. } => "verify-decomp",
        Command::Apply { .. } => "apply",
    }
}

fn run(command: &Command, seed: u64) -> Result<Report, Failure> {
    Ok(match command {
        Command::CheckMes(d) => {
            let r = slocc::mes_exists(&d.dims)?;
            Report::new(json!({"dims": d.dims}), json!(r), vec!["mes-criterion"])
        }
        Command::Maximal { state } => {
            let s = load_state(state)?;
            let r = slocc::is_maximal(&s)?;
            let ranks = tensor::local_ranks(&s).local_ranks;
            Report::new(state_input(state, &s), json!(r), vec!["full-local-ranks"])
                .text(format!("{r} (local ranks {ranks:?}, dims {:?})", s.dims()))
        }
        Command::Complement { state, pivot } => {
            let s = load_state(state)?;
            let c = slocc::complement_map(&s, *pivot)?;
            let mut v = io::state_to_value(&c.complement_state);
            v["pivot"] = json!(c.pivot);
            v["k"] = json!(c.k);
            v["schmidt_label"] = json!(c.label);
            let mut input = state_input(state, &s);
            input["pivot"] = json!(pivot);
            Report::new(input, v, vec!["complement-map"])
        }
        Command::Classify { state } => {
            let s = load_state(state)?;
            let r = slocc::classify_hyperplane(&s)?;
            Report::new(state_input(state, &s), json!(r), vec!["complement-map", "hyperplane-classes"])
        }
        Command::Equiv { a, b } => {
            let (sa, sb) = (load_state(a)?, load_state(b)?);
            let v = slocc::decide_equivalence(&sa, &sb)?;
            let eq = v.verdict == slocc::Equivalence::Equivalent;
            Report::new(
                json!({"a": state_input(a, &sa), "b": state_input(b, &sb)}),
                json!({"equivalent": eq, "reason": v.reason}),
                vec![v.reason],
            )
            .text(format!("{} ({})", if eq { "equivalent" } else { "inequivalent" }, v.reason))
        }
        Command::Witness { a, b } => {
            let (sa, sb) = (load_state(a)?, load_state(b)?);
            let w = slocc::incomparability_witness(&sa, &sb)?;
            let text = match &w {
                Some(w) => format!(
                    "incomparable: cut {:?} ranks {} < {}, cut {:?} ranks {} > {}",
                    w.a_lower_cut, w.ranks_a[0], w.ranks_b[0], w.a_higher_cut, w.ranks_a[1], w.ranks_b[1]
                ),
                None => "no witness".into(),
            };
            Report::new(
                json!({"a": state_input(a, &sa), "b": state_input(b, &sb)}),
                serde_json::to_value(&w).expect("witness serializes"),
                vec!["schmidt-rank-monotonicity"],
            )
            .text(text)
        }
        Command::Reach { dims, target } => {
            let t = load_state(target)?;
            let ops = slocc::reach_from_mes(&dims.dims, &t)?;
            let mut input = state_input(target, &t);
            input["mes_dims"] = json!(dims.dims);
            Report::new(input, io::ops_to_value(&ops), vec!["mes-criterion"])
        }
        Command::Catalog(d) => {
            let e = slocc::finite_class_catalog(&d.dims)?;
            let result = serde_json::to_value(&e).expect("catalog serializes");
            Report::new(json!({"dims": d.dims}), result, vec!["class-catalog"])
        }
        Command::Construct { family } => construct_family(family, seed)?,
        Command::LocalRanks { state } => {
            let s = load_state(state)?;
            let p = tensor::local_ranks(&s);
            Report::new(state_input(state, &s), rank_profile_value(&p), vec!["flattening"])
        }
        Command::Schmidt { state, subset } => {
            let s = load_state(state)?;
            let sp = tensor::schmidt_rank(&s, subset)?;
            let mut input = state_input(state, &s);
            input["subset"] = json!(subset);
            Report::new(
                input,
                json!({"rank": sp.rank, "singular_values": sp.singular_values}),
                vec!["flattening"],
            )
            .text(format!("{} (singular values {:?})", sp.rank, sp.singular_values))
        }
        Command::RankBounds(d) => {
            let b = rank::space_rank_bounds(&d.dims)?;
            let tags = b.provenance.iter().map(|s| s.tag()).collect();
            let text = match b.exact_value() {
                Some(v) => format!("exactly {v}"),
                None => format!("{} <= rank <= {}", b.lower, b.upper),
            };
            Report::new(json!({"dims": d.dims}), serde_json::to_value(&b).expect("bound serializes"), tags)
                .text(text)
        }
        Command::RankLb { state } => {
            let s = load_state(state)?;
            let lb = rank::flattening_lower_bound(&s);
            Report::new(state_input(state, &s), json!(lb), vec!["flattening"])
        }
        Command::VerifyDecomp { state, decomposition } => {
            let s = load_state(state)?;
            let d = io::decomposition_from_value(&io::read_value(decomposition)?)?;
            let residual = rank::decomposition_residual(&s, &d)?;
            let accepted = residual <= rank::CERTIFICATE_TOL;
            let mut input = state_input(state, &s);
            input["decomposition"] = json!(decomposition.display().to_string());
            input["terms"] = json!(d.len());
            Report::new(
                input,
                json!({"accepted": accepted, "residual": residual, "terms": d.len(), "tolerance": rank::CERTIFICATE_TOL}),
                vec!["certificate"],
            )
            .text(format!("{} ({} terms, residual {residual:e})", if accepted { "accepted" } else { "rejected" }, d.len()))
        }
        Command::Apply { state, ops } => {
            let s = load_state(state)?;
            let t = io::ops_from_value(&io::read_value(ops)?)?;
            let out = tensor::apply_local(&s, &t)?;
            let mut input = state_input(state, &s);
            input["ops"] = json!(ops.display().to_string());
            Report::new(input, io::state_to_value(&out), vec!["local-operators"])
        }
    })
}

fn construct_family(family: &Family, seed: u64) -> Result<Report, Failure> {
    let profile = |d: &DimsArg| DimsProfile::new(d.dims.clone());
    let (name, input, state) = match family {
        Family::Epr { d } => ("epr", json!({"d": d}), construct::epr(*d)?),
        Family::Ghz { parties, d } => ("ghz", json!({"parties": parties, "d": d}), construct::ghz(*parties, *d)?),
        Family::W { parties } => ("w", json!({"parties": parties}), construct::w_state(*parties)?),
        Family::Mes(d) => ("mes", json!({"dims": d.dims}), construct::mes_state(&profile(d)?)?),
        Family::MaximalRankD1 { dims, certificate } => {
            let p = profile(dims)?;
            if *certificate {
                let c = construct::maximal_rank_d1_certificate(&p)?;
                return Ok(Report::new(
                    json!({"family": "maximal-rank-d1", "dims": dims.dims, "certificate": true}),
                    io::decomposition_to_value(&c),
                    vec!["rank-d1-construction"],
                ));
            }
            ("maximal-rank-d1", json!({"dims": dims.dims}), construct::maximal_rank_d1(&p)?)
        }
        Family::Augment { state } => {
            let s = load_state(state)?;
            let input = json!({"path": state.display().to_string(), "dims": s.dims(), "seed": seed});
            ("augment", input, construct::augment_to_full_ranks(&s, seed)?)
        }
        Family::Canonical { dims, r } => {
            ("canonical", json!({"dims": dims.dims, "r": r}), construct::canonical_maximal(&profile(dims)?, *r)?)
        }
        Family::Matmul { m } => ("matmul", json!({"m": m}), construct::matmul_tensor(*m)?),
        Family::Strassen => {
            return Ok(Report::new(
                json!({"family": "strassen"}),
                io::decomposition_to_value(&rank::strassen_decomposition()),
                vec!["certificate"],
            ));
        }
        Family::Case1 { d, which } => {
            let (a, b) = construct::case1_pair(*d)?;
            let (tag, s) = match which {
                Which::A => ("a", a),
                Which::B => ("b", b),
            };
            ("case1", json!({"d": d, "which": tag}), s)
        }
        Family::Rep322 { which } => {
            let [p1, p2] = construct::maximal_322_representatives();
            ("rep322", json!({"which": which}), if *which == 1 { p1 } else { p2 })
        }
    };
    let mut input = input;
    input["family"] = json!(name);
    Ok(Report::new(input, io::state_to_value(&state), vec!["construction"]))
}

// a closed pipe (e.g. `| head`) is not an error worth a panic
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    match run(&cli.command, cli.seed) {
        Ok(report) => {
            if cli.json {
                let v = json!({
                    "command": name,
                    "input": report.input,
                    "result": report.result,
                    "provenance": report.provenance,
                });
                emit(&serde_json::to_string(&v).expect("report serializes"));
            } else {
                emit(&report.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                let v = json!({"command": name, "error": f.message(), "exit_code": f.code()});
                emit(&serde_json::to_string(&v).expect("report serializes"));
            }
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
