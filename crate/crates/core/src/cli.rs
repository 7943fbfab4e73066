//! The `sqrtpi` command line.
//!
//! Exit codes: 0 for success (or "equal"), 1 for "not equal" and failing rule
//! checks, 2 for unreadable, unparsable or ill-typed input.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::circuits::{compile, compile_symbolic, parse_circuit};
use crate::gates::expand;
use crate::lang::{parse_with_spans, principal_signature, Span, SpanTree, Term, TypeError};
use crate::rewrite::{load_rules, unfold, validate_all, Rewriter};
use crate::semantics::{equal_matrices, eval, MatrixEq, PhaseMode};
use crate::{elaborate, elaborate_pair, Error};

#[derive(Parser, Debug)]
#[command(name = "sqrtpi", version, about = "Exact semantics and rewriting for sqrt-Pi combinators")]
pub struct Cli {
    /// Show gate names unfolded into core combinators
    #[arg(long, global = true)]
    pub expand_macros: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term and print it back
    Parse { file: PathBuf },
    /// Print the signature of a term
    Typecheck { file: PathBuf },
    /// Print the exact matrix of a term or circuit
    Eval {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Approximate decimals instead of exact entries
        #[arg(long, conflicts_with = "json")]
        float: bool,
    },
    /// Compare two terms or circuits
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Accept a global power of w
        #[arg(long)]
        phase: bool,
    },
    /// Greedy rewriting with the rule catalog; prints the trace
    Simplify {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compile a circuit file to a term
    Compile {
        circuit: PathBuf,
        /// Keep gates as `at(..)` calls instead of expanding the wiring
        #[arg(long)]
        macros: bool,
    },
    /// Validate the rule catalog against the matrix semantics
    CheckRules {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        rule: Option<String>,
    },
}

/// A diagnostic; `at` is a source position when one is known.
#[derive(Debug)]
pub struct Diag {
    pub file: String,
    pub at: Option<Span>,
    pub message: String,
}

impl fmt::Display for Diag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Some(s) => write!(f, "{}:{}: error: {}", self.file, s, self.message),
            None => write!(f, "{}: error: {}", self.file, self.message),
        }
    }
}

/// A loaded input file. Circuits (`.circ`) are compiled on load.
struct Input {
    name: String,
    term: Term,
    spans: Option<SpanTree>,
}

impl Input {
    fn diag(&self, e: Error) -> Diag {
        match (&e, &self.spans) {
            (Error::Type(te), Some(spans)) => {
                let (at, node) = locate(&self.term, spans, te);
                let message = match te {
                    TypeError::Mismatch { detail, .. } => format!("type mismatch at `{node}`: {detail}"),
                    _ => e.to_string(),
                };
                Diag { file: self.name.clone(), at: Some(at), message }
            }
            (_, spans) => Diag { file: self.name.clone(), at: spans.as_ref().map(|s| s.span), message: e.to_string() },
        }
    }
}

/// Follow a type error path through the source term, stopping at a macro call
/// (the path continues into its expansion, which has no source).
fn locate<'a>(t: &'a Term, spans: &SpanTree, e: &TypeError) -> (Span, &'a Term) {
    let (mut t, mut s) = (t, spans);
    for &i in e.path() {
        let next = match t {
            Term::Seq(a, b) | Term::Sum(a, b) | Term::Prod(a, b) => Some(if i == 0 { &**a } else { &**b }),
            Term::Ann(a, _, _) if i == 0 => Some(&**a),
            _ => None,
        };
        match (next, s.children.get(i)) {
            (Some(n), Some(c)) => {
                t = n;
                s = c;
            }
            _ => break,
        }
    }
    (s.span, t)
}

fn read(path: &Path) -> Result<String, Diag> {
    let name = path.display().to_string();
    let mut text = String::new();
    let res = if name == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| text = s)
    };
    res.map_err(|e| Diag { file: name, at: None, message: e.to_string() })?;
    Ok(text)
}

fn is_circuit(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "circ")
}

fn load(path: &Path) -> Result<Input, Diag> {
    let name = path.display().to_string();
    let text = read(path)?;
    if is_circuit(path) {
        let c = parse_circuit(&text).map_err(|e| Diag {
            file: name.clone(),
            at: Some(Span { line: e.line, col: 1 }),
            message: e.message,
        })?;
        return Ok(Input { name, term: compile(&c), spans: None });
    }
    let (term, spans) = parse_with_spans(&text).map_err(|e| Diag { file: name.clone(), at: Some(e.span), message: e.message })?;
    Ok(Input { name, term, spans: Some(spans) })
}

fn shown(t: &Term, expand_macros: bool, input: &Input) -> Result<Term, Diag> {
    if expand_macros {
        expand(t).map_err(|e| input.diag(e.into()))
    } else {
        Ok(t.clone())
    }
}

/// Run with explicit arguments and output streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(d) => {
            let _ = writeln!(err, "{d}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Diag {
    Diag { file: "<stdout>".into(), at: None, message: e.to_string() }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Diag> {
    match &cli.command {
        Command::Parse { file } => {
            let input = load(file)?;
            writeln!(out, "{}", shown(&input.term, cli.expand_macros, &input)?).map_err(io)?;
        }
        Command::Typecheck { file } => {
            let input = load(file)?;
            match elaborate(&input.term, None) {
                Ok(t) => writeln!(out, "{} <-> {}", t.src, t.tgt).map_err(io)?,
                Err(Error::Type(TypeError::Unresolved { .. })) => {
                    let core = expand(&input.term).map_err(|e| input.diag(e.into()))?;
                    let sig = principal_signature(&core).map_err(|e| input.diag(e.into()))?;
                    writeln!(out, "{sig}").map_err(io)?;
                }
                Err(e) => return Err(input.diag(e)),
            }
        }
        Command::Eval { file, json, float } => {
            let input = load(file)?;
            let m = eval(&elaborate(&input.term, None).map_err(|e| input.diag(e))?);
            if *json {
                let text = serde_json::to_string_pretty(&m.to_json()).expect("json");
                writeln!(out, "{text}").map_err(io)?;
            } else if *float {
                writeln!(out, "# approximate, for reading only\n{}", m.display_float()).map_err(io)?;
            } else {
                writeln!(out, "{m}").map_err(io)?;
            }
        }
        Command::Equiv { a, b, phase } => {
            let (ia, ib) = (load(a)?, load(b)?);
            // a side may be polymorphic on its own; anything else is reported against its file
            for i in [&ia, &ib] {
                match elaborate(&i.term, None) {
                    Ok(_) | Err(Error::Type(TypeError::Unresolved { .. })) => {}
                    Err(e) => return Err(i.diag(e)),
                }
            }
            let (ta, tb) = elaborate_pair(&ia.term, &ib.term, None).map_err(|e| Diag {
                file: format!("{} / {}", ia.name, ib.name),
                at: None,
                message: e.to_string(),
            })?;
            let mode = if *phase { PhaseMode::UpToOmegaPower } else { PhaseMode::Strict };
            let verdict = equal_matrices(&eval(&ta), &eval(&tb), mode);
            let (text, code) = match verdict {
                MatrixEq::Equal => ("equal".to_string(), 0),
                MatrixEq::EqualWithPhase(k) => (format!("equal_with_phase {k}"), 0),
                MatrixEq::NotEqual => ("not_equal".to_string(), 1),
            };
            writeln!(out, "{text}").map_err(io)?;
            return Ok(code);
        }
        Command::Simplify { file, steps, json } => {
            let input = load(file)?;
            let rules = load_rules().map_err(|e| Diag { file: "catalog".into(), at: None, message: e.to_string() })?;
            let start = if cli.expand_macros {
                unfold(&input.term).map_err(|e| Diag { file: input.name.clone(), at: None, message: e.to_string() })?
            } else {
                input.term.clone()
            };
            let trace = Rewriter::new(&rules)
                .simplify(&start, None, *steps)
                .map_err(|e| Diag { file: input.name.clone(), at: None, message: e.to_string() })?;
            if *json {
                let text = serde_json::to_string_pretty(&trace.to_json()).expect("json");
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write!(out, "{trace}").map_err(io)?;
            }
        }
        Command::Compile { circuit, macros } => {
            let name = circuit.display().to_string();
            let text = read(circuit)?;
            let c = parse_circuit(&text).map_err(|e| Diag { file: name, at: Some(Span { line: e.line, col: 1 }), message: e.message })?;
            let t = if *macros && !cli.expand_macros { compile_symbolic(&c) } else { compile(&c) };
            writeln!(out, "{t}").map_err(io)?;
        }
        Command::CheckRules { family, rule } => {
            let rules = load_rules().map_err(|e| Diag { file: "catalog".into(), at: None, message: e.to_string() })?;
            let chosen: Vec<_> = rules
                .into_iter()
                .filter(|r| family.as_ref().is_none_or(|f| r.family.eq_ignore_ascii_case(f)))
                .filter(|r| rule.as_ref().is_none_or(|n| &r.name == n))
                .collect();
            if chosen.is_empty() {
                return Err(Diag { file: "catalog".into(), at: None, message: "no rules match the filter".into() });
            }
            let reports = validate_all(&chosen);
            for r in &reports {
                writeln!(out, "{r}").map_err(io)?;
            }
            let ok = reports.iter().filter(|r| r.passed()).count();
            writeln!(out, "{ok}/{} pass", reports.len()).map_err(io)?;
            return Ok(if ok == reports.len() { 0 } else { 1 });
        }
    }
    Ok(0)
}
