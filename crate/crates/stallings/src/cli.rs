//! Command-line frontend: input files, command dispatch, serialization.
//!
//! Input files carry one generator word per line. `#`-prefixed lines are
//! comments, blank lines are skipped, and an optional leading directive
//! `alphabet: abc` pins the rank; otherwise the rank is the highest letter
//! appearing in any word. Words are freely reduced on load.
//!
//! Output formats are bit-exact (identical input and flags give identical
//! bytes):
//!
//! * `text` — `vertices: V`, `base: 0`, then one `from label to` line per
//!   edge in canonical order.
//! * `json` — `{"alphabet":r,"base":0,"vertices":V,"edges":[[from,"x",to],…]}`
//!   with edges in canonical order.
//! * `dot` — a `digraph` with labeled edges; the base vertex is drawn with
//!   doubled periphery.
//!
//! Exit codes: `member` answers through its code (0 member, 1 not); usage
//! errors exit 2; unreadable or unparseable input exits 3.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{run_scaling, scaling_tsv};
use crate::folding::{build_bouquet, canonicalize, fold, FoldedGraph};
use crate::subgroup::{self, SubgroupIndex};
use crate::words::{Alphabet, Word, WordError};

/// A fully parsed command invocation.
#[derive(Parser, Debug)]
#[command(name = "stallings", version, about = "Subgroup graphs of free groups via folding")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fold the subgroup graph generated by the input words.
    Fold {
        /// Generator file (one word per line; see input format).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Also write the fold event log to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decide whether a word belongs to the subgroup (exit 0 yes, 1 no).
    Member {
        #[arg(long)]
        input: PathBuf,
        /// Query word, e.g. "abA" ("1" for the identity).
        #[arg(long)]
        word: String,
    },
    /// Print the subgroup's index ("infinite" when not finite).
    Index {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print a Nielsen basis, one word per line.
    Basis {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print a Schreier transversal, one word per line.
    Transversal {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the scaling benchmark and print a TSV table.
    Bench {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated instance sizes (total letters).
        #[arg(long, default_value = "65536,131072,262144")]
        sizes: String,
        /// Instances folded per size.
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {err}")]
    Unreadable { path: String, err: std::io::Error },
    #[error("{path}:{line}: {err}")]
    BadWord { path: String, line: usize, err: WordError },
    #[error("{path}:{line}: malformed alphabet directive (want `alphabet: abc`)")]
    BadDirective { path: String, line: usize },
    #[error("{path}: no generators in input")]
    NoGenerators { path: String },
    #[error("invalid --sizes value {value:?}: expected comma-separated positive integers")]
    BadSizes { value: String },
    #[error("cannot write {path}: {err}")]
    Unwritable { path: String, err: std::io::Error },
}

impl CliError {
    /// 2 for usage-level problems, 3 for unusable input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadSizes { .. } | CliError::Unwritable { .. } => 2,
            CliError::Unreadable { .. }
            | CliError::BadWord { .. }
            | CliError::BadDirective { .. }
            | CliError::NoGenerators { .. } => 3,
        }
    }
}

/// What a command wants the process to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> CmdOutput {
        CmdOutput { stdout, stderr: String::new(), exit_code: 0 }
    }
}

/// Reads a generator file: comments and blanks skipped, optional leading
/// `alphabet:` directive, one word per line, freely reduced on load.
pub fn parse_input_file(path: &Path) -> Result<(Alphabet, Vec<Word>), CliError> {
    let display = path.display().to_string();
    let content = fs::read_to_string(path)
        .map_err(|err| CliError::Unreadable { path: display.clone(), err })?;

    let mut directive_rank = None;
    let mut word_lines: Vec<(usize, &str)> = Vec::new();
    let mut saw_significant = false;
    for (idx, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if saw_significant || directive_rank.is_some() {
                return Err(CliError::BadDirective { path: display, line: idx + 1 });
            }
            let letters = rest.trim();
            if letters.is_empty() || !letters.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(CliError::BadDirective { path: display, line: idx + 1 });
            }
            let rank = letters.chars().map(|c| (c as u8 - b'a') as usize + 1).max().unwrap();
            directive_rank = Some(rank);
            saw_significant = true;
            continue;
        }
        saw_significant = true;
        word_lines.push((idx + 1, line));
    }

    if word_lines.is_empty() {
        return Err(CliError::NoGenerators { path: display });
    }

    let rank = match directive_rank {
        Some(rank) => rank,
        None => {
            let mut max_rank = 1usize;
            for &(_, text) in &word_lines {
                for ch in text.chars() {
                    if ch.is_ascii_alphabetic() {
                        let idx = ch.to_ascii_lowercase() as u8 - b'a';
                        max_rank = max_rank.max(idx as usize + 1);
                    }
                }
            }
            max_rank
        }
    };
    let alphabet = Alphabet::new(rank);

    let mut words = Vec::with_capacity(word_lines.len());
    for (line, text) in word_lines {
        let word = Word::parse(text, alphabet)
            .map_err(|err| CliError::BadWord { path: display.clone(), line, err })?;
        words.push(word.reduced());
    }
    Ok((alphabet, words))
}

/// JSON form of a folded graph — the pinned schema.
#[derive(Serialize, Deserialize)]
struct JsonGraph {
    alphabet: usize,
    base: u32,
    vertices: usize,
    edges: Vec<(u32, String, u32)>,
}

/// `{"alphabet":r,"base":0,"vertices":V,"edges":[[from,"x",to],…]}`.
pub fn render_json(f: &FoldedGraph) -> String {
    let edges = f
        .edges
        .iter()
        .map(|&(from, x, to)| (from, ((b'a' + x) as char).to_string(), to))
        .collect();
    let graph = JsonGraph {
        alphabet: f.alphabet.rank(),
        base: f.base,
        vertices: f.vertex_count,
        edges,
    };
    let mut out = serde_json::to_string(&graph).expect("graph serializes");
    out.push('\n');
    out
}

/// Parses the JSON emitted by [`render_json`] back into a graph.
pub fn parse_json_graph(text: &str) -> Result<FoldedGraph, serde_json::Error> {
    let graph: JsonGraph = serde_json::from_str(text)?;
    let edges = graph
        .edges
        .iter()
        .map(|(from, x, to)| {
            let label = x.bytes().next().map_or(0, |b| b - b'a');
            (*from, label, *to)
        })
        .collect();
    Ok(FoldedGraph {
        alphabet: Alphabet::new(graph.alphabet),
        base: graph.base,
        vertex_count: graph.vertices,
        edges,
    })
}

/// `vertices: V`, `base: 0`, one edge per line.
pub fn render_text(f: &FoldedGraph) -> String {
    let mut out = format!("vertices: {}\nbase: {}\n", f.vertex_count, f.base);
    for &(from, x, to) in &f.edges {
        out.push_str(&format!("{from} {} {to}\n", (b'a' + x) as char));
    }
    out
}

/// Graphviz rendering; the base vertex gets a doubled periphery.
pub fn render_dot(f: &FoldedGraph) -> String {
    let mut out = String::from("digraph subgroup {\n  rankdir=LR;\n");
    out.push_str(&format!("  {} [peripheries=2];\n", f.base));
    for v in 0..f.vertex_count as u32 {
        if v != f.base {
            out.push_str(&format!("  {v};\n"));
        }
    }
    for &(from, x, to) in &f.edges {
        out.push_str(&format!("  {from} -> {to} [label=\"{}\"];\n", (b'a' + x) as char));
    }
    out.push_str("}\n");
    out
}

fn fold_input(path: &Path) -> Result<(FoldedGraph, crate::folding::FoldTrace), CliError> {
    let (alphabet, words) = parse_input_file(path)?;
    let (folded, trace) = fold(build_bouquet(&words, alphabet));
    Ok((folded, trace))
}

/// Executes a command, producing output text and an exit code. All actual
/// process concerns (printing, exiting) stay in `main`.
pub fn run(job: &JobSpec) -> Result<CmdOutput, CliError> {
    match &job.command {
        Command::Fold { input, format, trace } => {
            let (folded, fold_trace) = fold_input(input)?;
            if let Some(trace_path) = trace {
                fs::write(trace_path, fold_trace.to_log()).map_err(|err| {
                    CliError::Unwritable { path: trace_path.display().to_string(), err }
                })?;
            }
            let canonical = canonicalize(&folded).expect("fold output is folded");
            let body = match format {
                OutputFormat::Text => render_text(&canonical),
                OutputFormat::Json => render_json(&canonical),
                OutputFormat::Dot => render_dot(&canonical),
            };
            Ok(CmdOutput::ok(body))
        }
        Command::Member { input, word } => {
            let (alphabet, words) = parse_input_file(input)?;
            let query = Word::parse(word, alphabet).map_err(|err| CliError::BadWord {
                path: "--word".to_string(),
                line: 1,
                err,
            })?;
            let (folded, _) = fold(build_bouquet(&words, alphabet));
            let member =
                subgroup::is_member(&folded, &query).expect("query checked against alphabet");
            Ok(CmdOutput {
                stdout: format!("{member}\n"),
                stderr: String::new(),
                exit_code: if member { 0 } else { 1 },
            })
        }
        Command::Index { input } => {
            let (folded, _) = fold_input(input)?;
            Ok(CmdOutput::ok(format!("{}\n", subgroup::index(&folded))))
        }
        Command::Basis { input } => {
            let (folded, _) = fold_input(input)?;
            let basis = subgroup::nielsen_basis(&folded).expect("bouquet folds are connected");
            let mut out = String::new();
            for word in &basis {
                out.push_str(&word.format().expect("alphabet letters print"));
                out.push('\n');
            }
            Ok(CmdOutput::ok(out))
        }
        Command::Transversal { input } => {
            let (folded, _) = fold_input(input)?;
            let transversal =
                subgroup::schreier_transversal(&folded).expect("bouquet folds are connected");
            let mut out = String::new();
            for word in &transversal {
                out.push_str(&word.format().expect("alphabet letters print"));
                out.push('\n');
            }
            let stderr = if subgroup::index(&folded) == SubgroupIndex::Infinite {
                "warning: index is infinite; words label graph vertices, \
                 not a full coset transversal\n"
                    .to_string()
            } else {
                String::new()
            };
            Ok(CmdOutput { stdout: out, stderr, exit_code: 0 })
        }
        Command::Bench { seed, sizes, trials } => {
            let parsed: Result<Vec<usize>, _> =
                sizes.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let sizes_list = match parsed {
                Ok(list) if !list.is_empty() && list.iter().all(|&n| n > 0) => list,
                _ => return Err(CliError::BadSizes { value: sizes.clone() }),
            };
            let rows = run_scaling(&sizes_list, *trials, *seed);
            Ok(CmdOutput::ok(scaling_tsv(&rows)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_input(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    fn parse_str(content: &str) -> Result<(Alphabet, Vec<Word>), CliError> {
        parse_input_file(write_input(content).path())
    }

    #[test]
    fn input_files_parse_words_and_rank() {
        let (alphabet, words) = parse_str("abba\nAba\naaa\n").unwrap();
        assert_eq!(alphabet.rank(), 2);
        assert_eq!(words.len(), 3);

        let (alphabet, words) = parse_str("# heading\n\nalphabet: abc\nca\n").unwrap();
        assert_eq!(alphabet.rank(), 3);
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].format().unwrap(), "ca");
    }

    #[test]
    fn input_words_are_reduced_on_load() {
        let (_, words) = parse_str("abBa\n").unwrap();
        assert_eq!(words[0].format().unwrap(), "aa");
    }

    #[test]
    fn empty_input_has_no_generators() {
        let err = parse_str("# comment\n\n").unwrap_err();
        assert!(matches!(err, CliError::NoGenerators { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn bad_characters_name_their_line() {
        let err = parse_str("aa\nb7b\n").unwrap_err();
        match &err {
            CliError::BadWord { line, .. } => assert_eq!(*line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn malformed_directives_are_rejected() {
        assert!(matches!(
            parse_str("alphabet: aB2\nab\n").unwrap_err(),
            CliError::BadDirective { line: 1, .. }
        ));
        // Directive after a word is malformed too.
        assert!(matches!(
            parse_str("ab\nalphabet: ab\n").unwrap_err(),
            CliError::BadDirective { line: 2, .. }
        ));
    }

    #[test]
    fn directive_restricts_the_alphabet() {
        let err = parse_str("alphabet: ab\nabc\n").unwrap_err();
        assert!(matches!(err, CliError::BadWord { line: 2, .. }));
    }

    fn rose() -> FoldedGraph {
        FoldedGraph {
            alphabet: Alphabet::new(2),
            base: 0,
            vertex_count: 1,
            edges: vec![(0, 0, 0), (0, 1, 0)],
        }
    }

    #[test]
    fn text_format_is_pinned() {
        assert_eq!(render_text(&rose()), "vertices: 1\nbase: 0\n0 a 0\n0 b 0\n");
    }

    #[test]
    fn json_format_is_pinned_and_round_trips() {
        let json = render_json(&rose());
        assert_eq!(
            json,
            "{\"alphabet\":2,\"base\":0,\"vertices\":1,\"edges\":[[0,\"a\",0],[0,\"b\",0]]}\n"
        );
        let back = parse_json_graph(&json).unwrap();
        assert_eq!(back, rose());
    }

    #[test]
    fn dot_format_doubles_the_base() {
        let dot = render_dot(&rose());
        assert!(dot.starts_with("digraph subgroup {\n  rankdir=LR;\n  0 [peripheries=2];\n"));
        assert!(dot.contains("0 -> 0 [label=\"a\"];"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn run_fold_prints_the_example_graph() {
        let file = write_input("abba\nAba\naaa\n");
        let job = JobSpec {
            command: Command::Fold {
                input: file.path().to_path_buf(),
                format: OutputFormat::Text,
                trace: None,
            },
        };
        let out = run(&job).unwrap();
        assert_eq!(out.stdout, "vertices: 1\nbase: 0\n0 a 0\n0 b 0\n");
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn run_member_uses_exit_codes() {
        let file = write_input("aa\nb\nabA\n");
        let member = |word: &str| {
            let job = JobSpec {
                command: Command::Member {
                    input: file.path().to_path_buf(),
                    word: word.to_string(),
                },
            };
            run(&job).unwrap()
        };
        let yes = member("aa");
        assert_eq!((yes.stdout.as_str(), yes.exit_code), ("true\n", 0));
        let no = member("a");
        assert_eq!((no.stdout.as_str(), no.exit_code), ("false\n", 1));
    }

    #[test]
    fn run_index_basis_transversal() {
        let file = write_input("aa\nb\nabA\n");
        let input = file.path().to_path_buf();

        let out = run(&JobSpec { command: Command::Index { input: input.clone() } }).unwrap();
        assert_eq!(out.stdout, "2\n");

        let out = run(&JobSpec { command: Command::Basis { input: input.clone() } }).unwrap();
        assert_eq!(out.stdout, "b\naa\nabA\n");

        let out = run(&JobSpec { command: Command::Transversal { input } }).unwrap();
        assert_eq!(out.stdout, "1\na\n");
        assert_eq!(out.stderr, "");
    }

    #[test]
    fn infinite_index_transversal_warns() {
        let file = write_input("alphabet: ab\na\n");
        let job =
            JobSpec { command: Command::Transversal { input: file.path().to_path_buf() } };
        let out = run(&job).unwrap();
        assert_eq!(out.stdout, "1\n");
        assert!(out.stderr.contains("infinite"));
    }

    #[test]
    fn usage_errors_exit_two() {
        // Missing required --word: clap reports a usage error (exit 2).
        let err = JobSpec::try_parse_from(["stallings", "member", "--input", "x.txt"])
            .expect_err("missing --word must fail");
        assert_eq!(err.exit_code(), 2);

        let bad_sizes = JobSpec {
            command: Command::Bench { seed: 1, sizes: "12,x".to_string(), trials: 1 },
        };
        let err = run(&bad_sizes).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_file_exits_three() {
        let job = JobSpec {
            command: Command::Index { input: PathBuf::from("/nonexistent/input.txt") },
        };
        let err = run(&job).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn fold_trace_is_written() {
        let file = write_input("aa\nb\nabA\n");
        let dir = tempfile::tempdir().unwrap();
        let trace_path = dir.path().join("trace.log");
        let job = JobSpec {
            command: Command::Fold {
                input: file.path().to_path_buf(),
                format: OutputFormat::Json,
                trace: Some(trace_path.clone()),
            },
        };
        let out = run(&job).unwrap();
        assert!(out.stdout.starts_with("{\"alphabet\":2,"));
        let log = fs::read_to_string(&trace_path).unwrap();
        assert_eq!(log.lines().count(), 2, "6 bouquet edges fold to 4");
        for line in log.lines() {
            let fields: Vec<&str> = line.split('\t').collect();
            assert_eq!(fields.len(), 6);
        }
    }

    #[test]
    fn identical_runs_are_byte_identical() {
        let file = write_input("abab\nbb\naB\n");
        let job = JobSpec {
            command: Command::Fold {
                input: file.path().to_path_buf(),
                format: OutputFormat::Json,
                trace: None,
            },
        };
        let first = run(&job).unwrap();
        let second = run(&job).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn json_round_trip_preserves_canonical_form() {
        let file = write_input("abab\nbb\n");
        let job = JobSpec {
            command: Command::Fold {
                input: file.path().to_path_buf(),
                format: OutputFormat::Json,
                trace: None,
            },
        };
        let out = run(&job).unwrap();
        let parsed = parse_json_graph(&out.stdout).unwrap();
        let reparsed = canonicalize(&parsed).unwrap();
        assert_eq!(render_json(&reparsed), out.stdout);
    }
}
