//! `lcgraph` command-line front end.
//!
//! Exit codes: 0 success (or equivalent), 1 inequivalent or check mismatch,
//! 2 search cap reached, 64 usage, 65 malformed or unusable input, 66 unreadable
//! input, 70 internal error, 73 unwritable output.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lcgraph::clifford::LocalCliffordOp;
use lcgraph::decomposition::{self, DecompositionError, LcSequence};
use lcgraph::equivalence::{self, Verdict, DEFAULT_SEARCH_CAP};
use lcgraph::graphs::{self, Graph, Vertex};
use lcgraph::oracle::{self, ORACLE_MAX_QUBITS};
use lcgraph::orbit::{self, OrbitError, DEFAULT_MEMBER_CAP};
use lcgraph::reduction;
use lcgraph::stabilizer::StabilizerGenMatrix;
use lcgraph::ParseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Data(String),
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Data(_) => "data",
            CliError::Input { .. } => "input",
            CliError::Output { .. } => "output",
            CliError::CapExceeded(_) => "cap",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parse { .. } | CliError::Data(_) => 65,
            CliError::Input { .. } => 66,
            CliError::CapExceeded(_) => 2,
            CliError::Internal(_) => 70,
            CliError::Output { .. } => 73,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lcgraph",
    version,
    about = "Graph states and local Clifford equivalence"
)]
struct Cli {
    /// Orbit member cap, or equivalence search cap.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cross-check results on dense statevectors (at most 12 qubits).
    #[arg(long, global = true)]
    verify: bool,
    /// Suppress informational messages on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bring a stabilizer state to graph-state form.
    Reduce {
        input: PathBuf,
        /// Graph output (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the local Clifford Q.
        #[arg(long)]
        clifford_out: Option<PathBuf>,
        /// Where to write the basis change R.
        #[arg(long)]
        basis_out: Option<PathBuf>,
    },
    /// Express a local Clifford acting on a graph as local complementations.
    Decompose {
        clifford: PathBuf,
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a local complementation sequence to a graph.
    Apply {
        graph: PathBuf,
        sequence: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compare the result with the action of this local Clifford.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Enumerate the local complementation orbit of a graph.
    Orbit {
        input: PathBuf,
        /// Write all members as a graph bundle.
        #[arg(long)]
        members_out: Option<PathBuf>,
        /// Write all members as DOT.
        #[arg(long)]
        dot_out: Option<PathBuf>,
        /// Also count isomorphism classes among the members (experimental, n <= 8).
        #[arg(long)]
        iso: bool,
    },
    /// Decide local Clifford equivalence of two graphs or stabilizer states.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Witness output; "-" for stdout.
        #[arg(long, default_value = "witness.clifford")]
        witness: PathBuf,
        #[arg(long)]
        no_witness: bool,
    },
    /// Print the canonical member of a graph's orbit.
    Canon {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a graph or graph bundle to DOT.
    ExportDot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "G")]
        name: String,
    },
    #[command(hide = true)]
    OracleCheck {
        input: PathBuf,
        #[arg(long)]
        clifford: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let e = CliError::Usage(first.to_string());
            let _ = writeln!(err, "error: {}: {e}", e.code());
            return e.exit_code();
        }
    };
    let mut ctx = Context {
        cli: &cli,
        out,
        err,
    };
    match ctx.dispatch() {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}: {e}", e.code());
            e.exit_code()
        }
    }
}

struct Context<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

enum StateInput {
    Graph(Graph),
    Stabilizer(StabilizerGenMatrix),
}

impl StateInput {
    fn n(&self) -> usize {
        match self {
            StateInput::Graph(g) => g.n(),
            StateInput::Stabilizer(s) => s.n(),
        }
    }

    fn stabilizer(&self) -> StabilizerGenMatrix {
        match self {
            StateInput::Graph(g) => StabilizerGenMatrix::from_graph(g),
            StateInput::Stabilizer(s) => s.clone(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn parsed<T>(path: &Path, result: Result<T, ParseError>) -> Result<T, CliError> {
    result.map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parsed(path, Graph::parse_edge_list(&read(path)?))
}

fn load_clifford(path: &Path) -> Result<LocalCliffordOp, CliError> {
    parsed(path, LocalCliffordOp::parse(&read(path)?))
}

/// A file whose first meaningful line is a single integer is an edge list;
/// anything else is read as a stabilizer (Pauli strings or a matrix).
fn load_state(path: &Path) -> Result<StateInput, CliError> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    let is_graph =
        first.is_some_and(|l| l.split_whitespace().count() == 1 && l.parse::<usize>().is_ok());
    if is_graph {
        Ok(StateInput::Graph(parsed(
            path,
            Graph::parse_edge_list(&text),
        )?))
    } else {
        Ok(StateInput::Stabilizer(parsed(
            path,
            StabilizerGenMatrix::parse(&text),
        )?))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

fn stream_error(source: io::Error) -> CliError {
    CliError::Output {
        path: "standard output".into(),
        source,
    }
}

impl Context<'_> {
    fn dispatch(&mut self) -> Result<i32, CliError> {
        let cli = self.cli;
        match &cli.command {
            Command::Reduce {
                input,
                output,
                clifford_out,
                basis_out,
            } => self.reduce(
                input,
                output.as_deref(),
                clifford_out.as_deref(),
                basis_out.as_deref(),
            ),
            Command::Decompose {
                clifford,
                graph,
                output,
            } => self.decompose(clifford, graph, output.as_deref()),
            Command::Apply {
                graph,
                sequence,
                output,
                check,
            } => self.apply(graph, sequence, output.as_deref(), check.as_deref()),
            Command::Orbit {
                input,
                members_out,
                dot_out,
                iso,
            } => self.orbit(input, members_out.as_deref(), dot_out.as_deref(), *iso),
            Command::Equiv {
                first,
                second,
                witness,
                no_witness,
            } => self.equiv(first, second, (!no_witness).then_some(witness.as_path())),
            Command::Canon { input, output } => self.canon(input, output.as_deref()),
            Command::ExportDot {
                input,
                output,
                name,
            } => self.export_dot(input, output.as_deref(), name),
            Command::OracleCheck {
                input,
                clifford,
                samples,
            } => self.oracle_check(input, clifford.as_deref(), *samples),
        }
    }

    fn info(&mut self, msg: &str) -> Result<(), CliError> {
        if !self.cli.quiet {
            writeln!(self.err, "{msg}").map_err(stream_error)?;
        }
        Ok(())
    }

    /// Writes an artifact to `path`, or to stdout when there is none.
    fn emit(&mut self, path: Option<&Path>, text: &str, what: &str) -> Result<(), CliError> {
        match path {
            Some(p) if p != Path::new("-") => {
                write_file(p, text)?;
                self.info(&format!("wrote {what} to {}", p.display()))
            }
            _ => self.out.write_all(text.as_bytes()).map_err(stream_error),
        }
    }

    fn member_cap(&self) -> usize {
        self.cli.cap.map_or(DEFAULT_MEMBER_CAP, |c| {
            usize::try_from(c).unwrap_or(usize::MAX)
        })
    }

    fn search_cap(&self) -> u64 {
        self.cli.cap.unwrap_or(DEFAULT_SEARCH_CAP)
    }

    /// Runs `check` when `--verify` is set and the register is small enough.
    fn verify(
        &mut self,
        n: usize,
        check: impl FnOnce() -> Result<bool, oracle::OracleError>,
    ) -> Result<(), CliError> {
        if !self.cli.verify {
            return Ok(());
        }
        if n > ORACLE_MAX_QUBITS {
            return self.info(&format!(
                "verification skipped: {n} qubits exceeds {ORACLE_MAX_QUBITS}"
            ));
        }
        match check() {
            Ok(true) => self.info("verified on statevectors"),
            Ok(false) => Err(CliError::Internal("statevector verification failed".into())),
            Err(e) => Err(CliError::Internal(e.to_string())),
        }
    }

    fn reduce(
        &mut self,
        input: &Path,
        output: Option<&Path>,
        clifford_out: Option<&Path>,
        basis_out: Option<&Path>,
    ) -> Result<i32, CliError> {
        let s = parsed(input, StabilizerGenMatrix::parse(&read(input)?))?;
        let w = reduction::to_graph_state(&s).map_err(|e| CliError::Internal(e.to_string()))?;
        if !reduction::verify_witness(&s, &w) {
            return Err(CliError::Internal(
                "reduction witness failed its check".into(),
            ));
        }
        self.verify(s.n(), || {
            let psi = oracle::stabilizer_state(&s)?;
            let image = oracle::apply_local_clifford(&psi, &w.q)?;
            oracle::stabilized_up_to_signs(&image, &StabilizerGenMatrix::from_graph(&w.graph))
        })?;
        self.emit(output, &w.graph.to_edge_list(), "graph")?;
        if let Some(p) = clifford_out {
            self.emit(Some(p), &w.q.to_text(), "local Clifford")?;
        }
        if let Some(p) = basis_out {
            self.emit(Some(p), &w.r.to_string(), "basis change")?;
        }
        Ok(0)
    }

    fn decompose(
        &mut self,
        clifford: &Path,
        graph: &Path,
        output: Option<&Path>,
    ) -> Result<i32, CliError> {
        let q = load_clifford(clifford)?;
        let g = load_graph(graph)?;
        let seq = decomposition::decompose(&q, &g).map_err(|e| match e {
            DecompositionError::NonTermination { .. } | DecompositionError::PostCheckFailed => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        })?;
        self.verify(g.n(), || {
            let image = decomposition::apply_sequence(&g, &seq).expect("sequence fits the graph");
            let psi = oracle::apply_local_clifford(&oracle::build_graph_state(&g)?, &q)?;
            oracle::stabilized_up_to_signs(&psi, &StabilizerGenMatrix::from_graph(&image))
        })?;
        self.emit(output, &seq.to_text(), "sequence")?;
        Ok(0)
    }

    fn apply(
        &mut self,
        graph: &Path,
        sequence: &Path,
        output: Option<&Path>,
        check: Option<&Path>,
    ) -> Result<i32, CliError> {
        let g = load_graph(graph)?;
        let seq = parsed(sequence, LcSequence::parse(&read(sequence)?))?;
        let image =
            decomposition::apply_sequence(&g, &seq).map_err(|e| CliError::Data(e.to_string()))?;
        self.emit(output, &image.to_edge_list(), "graph")?;
        let Some(check) = check else { return Ok(0) };
        let q = load_clifford(check)?;
        let report = q
            .graph_action(&g)
            .map_err(|e| CliError::Data(e.to_string()))?;
        match report.image {
            Some(expected) if expected == image => {
                self.info("match")?;
                Ok(0)
            }
            Some(_) => {
                writeln!(
                    self.err,
                    "mismatch: sequence result differs from the local Clifford action"
                )
                .map_err(stream_error)?;
                Ok(1)
            }
            None => Err(CliError::Data(
                "graph is not in the domain of the local Clifford".into(),
            )),
        }
    }

    fn orbit(
        &mut self,
        input: &Path,
        members_out: Option<&Path>,
        dot_out: Option<&Path>,
        iso: bool,
    ) -> Result<i32, CliError> {
        let g = load_graph(input)?;
        let o = orbit::enumerate_orbit(&g, self.member_cap()).map_err(orbit_error)?;
        let count = o.len();
        let summary = format!(
            "{count} member{}\ncanonical:\n{}",
            if count == 1 { "" } else { "s" },
            o.canonical().to_edge_list()
        );
        self.out
            .write_all(summary.as_bytes())
            .map_err(stream_error)?;
        if iso {
            let classes = orbit::group_by_isomorphism(o.members()).map_err(orbit_error)?;
            writeln!(
                self.out,
                "isomorphism classes: {} (experimental)",
                classes.len()
            )
            .map_err(stream_error)?;
        }
        let sorted = o.sorted_members();
        if let Some(p) = members_out {
            self.emit(Some(p), &graphs::write_graph_bundle(&sorted), "members")?;
        }
        if let Some(p) = dot_out {
            self.emit(Some(p), &graphs::write_dot_bundle(&sorted, "member"), "DOT")?;
        }
        Ok(0)
    }

    fn equiv(
        &mut self,
        first: &Path,
        second: &Path,
        witness: Option<&Path>,
    ) -> Result<i32, CliError> {
        let a = load_state(first)?;
        let b = load_state(second)?;
        if a.n() != b.n() {
            return Err(CliError::Data(format!(
                "qubit counts differ: {} vs {}",
                a.n(),
                b.n()
            )));
        }
        let (s, t) = (a.stabilizer(), b.stabilizer());
        let result = equivalence::test_equivalence(&s, &t, self.search_cap())
            .map_err(|e| CliError::Internal(e.to_string()))?;
        match &result.verdict {
            Verdict::Equivalent(q) => {
                self.verify(s.n(), || {
                    let psi = match &a {
                        StateInput::Graph(g) => oracle::build_graph_state(g)?,
                        StateInput::Stabilizer(s) => oracle::stabilizer_state(s)?,
                    };
                    oracle::stabilized_up_to_signs(&oracle::apply_local_clifford(&psi, q)?, &t)
                })?;
                writeln!(self.out, "equivalent").map_err(stream_error)?;
                if let Some(p) = witness {
                    self.emit(Some(p), &q.to_text(), "witness")?;
                }
                Ok(0)
            }
            Verdict::Inequivalent => {
                writeln!(self.out, "inequivalent").map_err(stream_error)?;
                self.info(&format!(
                    "solution space dimension {}, exhausted",
                    result.space_dim
                ))?;
                Ok(1)
            }
            Verdict::Indeterminate {
                searched,
                space_dim,
            } => {
                writeln!(self.out, "indeterminate").map_err(stream_error)?;
                self.info(&format!("searched {searched} of 2^{space_dim} candidates"))?;
                Ok(2)
            }
        }
    }

    fn canon(&mut self, input: &Path, output: Option<&Path>) -> Result<i32, CliError> {
        let g = load_graph(input)?;
        let c = orbit::canonical_form(&g, self.member_cap()).map_err(orbit_error)?;
        self.emit(output, &c.to_edge_list(), "canonical graph")?;
        Ok(0)
    }

    fn export_dot(
        &mut self,
        input: &Path,
        output: Option<&Path>,
        name: &str,
    ) -> Result<i32, CliError> {
        let graphs = parsed(input, graphs::parse_graph_bundle(&read(input)?))?;
        let text = match graphs.as_slice() {
            [single] => single.to_dot(name),
            many => graphs::write_dot_bundle(many, name),
        };
        self.emit(output, &text, "DOT")?;
        Ok(0)
    }

    fn oracle_check(
        &mut self,
        input: &Path,
        clifford: Option<&Path>,
        samples: usize,
    ) -> Result<i32, CliError> {
        let state = load_state(input)?;
        let q = clifford.map(load_clifford).transpose()?;
        let n = state.n();
        if n > ORACLE_MAX_QUBITS {
            return Err(CliError::Data(format!(
                "{n} qubits exceeds the oracle limit of {ORACLE_MAX_QUBITS}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cli.seed);
        let mut failures = 0;
        let mut report = |ctx: &mut Self,
                          label: String,
                          ok: Result<bool, oracle::OracleError>|
         -> Result<(), CliError> {
            let ok = ok.map_err(|e| CliError::Internal(e.to_string()))?;
            if !ok {
                failures += 1;
            }
            writeln!(ctx.out, "{label}: {}", if ok { "ok" } else { "FAILED" }).map_err(stream_error)
        };
        match &state {
            StateInput::Graph(g) => {
                let psi =
                    oracle::build_graph_state(g).map_err(|e| CliError::Data(e.to_string()))?;
                report(
                    self,
                    "graph state equations".into(),
                    oracle::satisfies_graph_equations(&psi, g),
                )?;
                for _ in 0..if n == 0 { 0 } else { samples } {
                    let v = Vertex::from_index(rng.random_range(0..n));
                    let qv = LocalCliffordOp::local_complementation(g, v).expect("vertex in range");
                    let target = StabilizerGenMatrix::from_graph(
                        &g.local_complement(v).expect("vertex in range"),
                    );
                    let ok = oracle::apply_local_clifford(&psi, &qv)
                        .and_then(|img| oracle::stabilized_up_to_signs(&img, &target));
                    report(self, format!("local complementation at vertex {v}"), ok)?;
                }
                if let Some(q) = &q {
                    let action = q
                        .graph_action(g)
                        .map_err(|e| CliError::Data(e.to_string()))?;
                    match action.image {
                        Some(image) => {
                            let ok = oracle::apply_local_clifford(&psi, q).and_then(|img| {
                                oracle::stabilized_up_to_signs(
                                    &img,
                                    &StabilizerGenMatrix::from_graph(&image),
                                )
                            });
                            report(self, "local Clifford image".into(), ok)?;
                        }
                        None => self.info("local Clifford image: graph not in domain, skipped")?,
                    }
                }
            }
            StateInput::Stabilizer(s) => {
                let psi =
                    oracle::stabilizer_state(s).map_err(|e| CliError::Internal(e.to_string()))?;
                report(
                    self,
                    "stabilizer eigenvector".into(),
                    oracle::stabilized_up_to_signs(&psi, s),
                )?;
                let w =
                    reduction::to_graph_state(s).map_err(|e| CliError::Internal(e.to_string()))?;
                let ok = oracle::apply_local_clifford(&psi, &w.q).and_then(|img| {
                    oracle::stabilized_up_to_signs(&img, &StabilizerGenMatrix::from_graph(&w.graph))
                });
                report(self, "graph-state reduction".into(), ok)?;
                let mut ops: Vec<(String, LocalCliffordOp)> = (0..samples)
                    .map(|i| {
                        (
                            format!("random local Clifford {}", i + 1),
                            LocalCliffordOp::random(n, &mut rng),
                        )
                    })
                    .collect();
                if let Some(q) = &q {
                    ops.push(("given local Clifford".into(), q.clone()));
                }
                for (label, op) in ops {
                    let target = op
                        .apply_to_stabilizer(s)
                        .map_err(|e| CliError::Data(e.to_string()))?;
                    let ok = oracle::apply_local_clifford(&psi, &op)
                        .and_then(|img| oracle::stabilized_up_to_signs(&img, &target));
                    report(self, label, ok)?;
                }
            }
        }
        if failures > 0 {
            return Err(CliError::Internal(format!(
                "{failures} statevector check(s) failed"
            )));
        }
        Ok(0)
    }
}

fn orbit_error(e: OrbitError) -> CliError {
    match e {
        OrbitError::CapExceeded(_) => CliError::CapExceeded(e.to_string()),
        OrbitError::TooManyVertices { .. } => CliError::Data(e.to_string()),
    }
}
