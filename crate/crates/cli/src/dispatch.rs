//! Runs one command: builds the instance, calls the toolkit, writes the
//! artifact and a one-line summary, and maps the result to an exit status.

use std::fs;
use std::io::Write;
use std::path::Path;

use discrepancy_core::bounds::{
    check_char_decomposition, check_embedding, check_transfer, detlb_certificate, verify_certificate,
    CertStrategy, CheckReport,
};
use discrepancy_core::det::{find_large_det_subset, ln_binomial, DetStrategy};
use discrepancy_core::embedding::gen_embedding;
use discrepancy_core::exact::{disc_exact, herdisc_exact};
use discrepancy_core::generators::{
    default_weight, gen_characters, gen_hap, gen_subcubes, gen_sylvester, CharacterIndex,
};
use discrepancy_core::heuristics::{beck_fiala, greedy_improve, random_coloring, ternary_coloring};
use discrepancy_core::system::{eval_discrepancy, hap_disc_stream};
use discrepancy_core::{Coloring, HapMode, SetSystem, SignMatrix};

use crate::config::{
    CertStrategyArg, Cli, ColorCommand, Command, DetStrategyArg, DiscCommand, Family, Format, GenCommand,
    HerdiscCommand, InstanceArgs, OutputArgs, VerifyCommand,
};
use crate::format::{from_json, to_csv, to_json, Artifact, Document, FormatError, Provenance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Failed(_) => EXIT_CHECK_FAILED,
        }
    }
}

impl From<discrepancy_core::Error> for CliError {
    fn from(e: discrepancy_core::Error) -> Self {
        use discrepancy_core::Error as E;
        match e {
            E::CapExceeded { .. } => CliError::Cap(e.to_string()),
            E::Invariant(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub summary: String,
    pub passed: bool,
}

type Res<T> = std::result::Result<T, CliError>;

fn read_document(path: &Path) -> Res<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn require<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Res<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --family {family}")))
}

enum Instance {
    System(SetSystem),
    Matrix(SignMatrix),
}

impl Instance {
    fn matrix(&self) -> SignMatrix {
        match self {
            Instance::System(s) => s.to_matrix(),
            Instance::Matrix(m) => m.clone(),
        }
    }
}

fn character_weight(d: usize, k: Option<usize>) -> Res<usize> {
    match k.or_else(|| default_weight(d)) {
        Some(k) => Ok(k),
        None => Err(CliError::Usage(format!("--k is required when 8 does not divide d = {d}"))),
    }
}

fn load_instance(args: &InstanceArgs) -> Res<Instance> {
    if let Some(path) = &args.input {
        return match read_document(path)?.artifact {
            Artifact::SetSystem(s) => Ok(Instance::System(s)),
            Artifact::SignMatrix(m) => Ok(Instance::Matrix(m)),
            other => Err(CliError::Usage(format!(
                "{}: expected a set_system or sign_matrix, found {}",
                path.display(),
                other.kind()
            ))),
        };
    }
    let Some(family) = args.family else {
        return Err(CliError::Usage("an instance needs --input or --family".into()));
    };
    Ok(match family {
        Family::Subcubes => Instance::System(gen_subcubes(require(args.d, "d", "subcubes")?)?),
        Family::Characters => {
            let d = require(args.d, "d", "characters")?;
            Instance::Matrix(gen_characters(d, character_weight(d, args.k)?)?)
        }
        Family::Hap => Instance::System(gen_hap(
            require(args.n, "n", "hap")?,
            require(args.mode, "mode", "hap")?.into(),
        )?),
        Family::Sylvester => Instance::Matrix(gen_sylvester(require(args.m, "m", "sylvester")?)?),
    })
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn check_summary(r: &CheckReport) -> String {
    if r.passed {
        let mut s = format!("PASS {}: {} trials", r.name, r.trials);
        for n in &r.notes {
            s.push_str("; ");
            s.push_str(n);
        }
        s
    } else {
        format!("FAIL {}: {}", r.name, r.detail)
    }
}

fn check_outcome(report: CheckReport, provenance: Provenance) -> Outcome {
    Outcome {
        summary: check_summary(&report),
        passed: report.passed,
        document: Document::new(Artifact::Check(report), Some(provenance)),
    }
}

fn provenance(command: &str, seed: u64) -> Provenance {
    Provenance {
        command: command.to_string(),
        seed: seed.to_string(),
    }
}

fn ok(artifact: Artifact, prov: Provenance, summary: String) -> Outcome {
    Outcome {
        document: Document::new(artifact, Some(prov)),
        summary,
        passed: true,
    }
}

/// Runs the command without writing anything.
pub fn execute(cli: &Cli) -> Res<(Outcome, &OutputArgs)> {
    match &cli.command {
        Command::Gen { what } => gen(what),
        Command::Disc {
            method: DiscCommand::Exact { instance, output },
        } => {
            let m = load_instance(instance)?.matrix();
            let r = disc_exact(&m)?;
            let summary = format!("disc = {} ({} nodes explored)", r.value, r.nodes_explored);
            Ok((ok(Artifact::Exact(r), provenance("disc exact", 0), summary), output))
        }
        Command::Herdisc {
            method: HerdiscCommand::Exact { instance, cap, output },
        } => {
            let m = load_instance(instance)?.matrix();
            let r = herdisc_exact(&m, *cap)?;
            let cols = r.subset().map(|s| join(s.ones())).unwrap_or_default();
            let summary = format!("herdisc = {} attained on columns [{cols}]", r.value);
            Ok((ok(Artifact::Exact(r), provenance("herdisc exact", 0), summary), output))
        }
        Command::Detlb(args) => {
            let m = load_instance(&args.instance)?.matrix();
            let kmax = args.kmax.unwrap_or(m.rows().min(m.cols()));
            let strategy = match args.strategy {
                CertStrategyArg::Exhaustive => CertStrategy::Exhaustive,
                CertStrategyArg::Greedy => CertStrategy::Greedy { restarts: args.restarts },
            };
            let cert = detlb_certificate(&m, kmax, strategy, args.seed)?;
            let summary = format!(
                "herdisc >= {} from a {}x{} minor with det {}",
                cert.bound, cert.k, cert.k, cert.det
            );
            Ok((ok(Artifact::Certificate(cert), provenance("detlb", args.seed), summary), &args.output))
        }
        Command::Maxdet(args) => {
            let m = load_instance(&args.instance)?.matrix();
            let (rows, cols) = (m.rows(), m.cols());
            if rows == 0 || rows > cols {
                return Err(CliError::Usage(format!(
                    "maxdet needs 0 < rows <= cols, got {rows}x{cols}"
                )));
            }
            let threshold = args.threshold.unwrap_or_else(|| {
                (cols as f64).sqrt() * (-ln_binomial(cols as u64, rows as u64) / (2 * rows) as f64).exp()
            });
            let strategy = match args.strategy {
                DetStrategyArg::Exhaustive => DetStrategy::Exhaustive,
                DetStrategyArg::RandomSwap => DetStrategy::RandomSwap { restarts: args.restarts },
            };
            let o = find_large_det_subset(&m, strategy, args.seed, threshold)?;
            let summary = format!(
                "|det|^(1/{rows}) = {} on columns [{}]; threshold {} {}",
                o.root,
                join(&o.columns),
                o.threshold,
                if o.met_threshold { "met" } else { "not met" }
            );
            Ok((ok(Artifact::DetSearch(o), provenance("maxdet", args.seed), summary), &args.output))
        }
        Command::Color { method } => color(method),
        Command::Eval(args) => {
            let doc = read_document(&args.coloring)?;
            let Artifact::Coloring(f) = doc.artifact else {
                return Err(CliError::Usage(format!(
                    "{}: expected a coloring, found {}",
                    args.coloring.display(),
                    doc.artifact.kind()
                )));
            };
            let inst = &args.instance;
            let report = if inst.input.is_none() && inst.family == Some(Family::Hap) {
                // Progressions are streamed so large n never materializes.
                hap_disc_stream(require(inst.n, "n", "hap")?, require(inst.mode, "mode", "hap")?.into(), &f)?
            } else {
                eval_discrepancy(&load_instance(inst)?.matrix(), &f)?
            };
            let summary = match report.argmax_row {
                Some(r) => format!("discrepancy {} at row {r}", report.value),
                None => format!("discrepancy {}", report.value),
            };
            Ok((ok(Artifact::Discrepancy(report), provenance("eval", 0), summary), &args.output))
        }
        Command::Verify { what } => verify(what),
    }
}

fn gen(what: &GenCommand) -> Res<(Outcome, &OutputArgs)> {
    Ok(match what {
        GenCommand::Subcubes { d, output } => {
            let s = gen_subcubes(*d)?;
            let summary = format!("subcubes d={d}: {} points, {} sets", s.ground_size(), s.num_sets());
            (ok(Artifact::SetSystem(s), provenance("gen subcubes", 0), summary), output)
        }
        GenCommand::Characters { d, k, output } => {
            let k = character_weight(*d, *k)?;
            let g = gen_characters(*d, k)?;
            let summary = format!("characters d={d} k={k}: {}x{} sign matrix", g.rows(), g.cols());
            (ok(Artifact::SignMatrix(g), provenance("gen characters", 0), summary), output)
        }
        GenCommand::Hap { n, mode, output } => {
            let mode: HapMode = (*mode).into();
            let s = gen_hap(*n, mode)?;
            let summary = format!("hap n={n} mode={}: {} sets", mode.as_str(), s.num_sets());
            (ok(Artifact::SetSystem(s), provenance("gen hap", 0), summary), output)
        }
        GenCommand::Sylvester { m, output } => {
            let h = gen_sylvester(*m)?;
            let summary = format!("sylvester m={m}: {}x{} Hadamard matrix", h.rows(), h.cols());
            (ok(Artifact::SignMatrix(h), provenance("gen sylvester", 0), summary), output)
        }
        GenCommand::Embed { d, output } => {
            let w = gen_embedding(*d)?;
            let b = if *d <= 3 {
                format!("B = {{{}}}", join(w.b_values()))
            } else {
                format!("|B| = {}", w.b_values().len())
            };
            let summary = format!("embedding d={d}: {b}, n = {}", w.n());
            (ok(Artifact::Embedding(w), provenance("gen embed", 0), summary), output)
        }
    })
}

fn color(method: &ColorCommand) -> Res<(Outcome, &OutputArgs)> {
    Ok(match method {
        ColorCommand::BeckFiala { instance, output } => {
            let Instance::System(s) = load_instance(instance)? else {
                return Err(CliError::Usage("beck-fiala needs a set system".into()));
            };
            let o = beck_fiala(&s)?;
            let summary = format!(
                "beck-fiala: discrepancy {} within guarantee {} after {} rounds",
                o.achieved,
                o.guarantee.unwrap_or(0),
                o.iterations
            );
            let a = Artifact::Heuristic {
                method: "beck-fiala".into(),
                outcome: o,
            };
            (ok(a, provenance("color beck-fiala", 0), summary), output)
        }
        ColorCommand::Ternary { n, output } => {
            let f = ternary_coloring(*n)?;
            let summary = format!("ternary coloring of [{n}]: sum {}", f.sum());
            (ok(Artifact::Coloring(f), provenance("color ternary", 0), summary), output)
        }
        ColorCommand::Random { n, seed, output } => {
            let f = random_coloring(*n, *seed);
            let summary = format!("random coloring of [{n}], seed {seed}: sum {}", f.sum());
            (ok(Artifact::Coloring(f), provenance("color random", *seed), summary), output)
        }
        ColorCommand::Improve {
            instance,
            start,
            passes,
            output,
        } => {
            let m = load_instance(instance)?.matrix();
            let start = match start {
                Some(path) => match read_document(path)?.artifact {
                    Artifact::Coloring(c) => c,
                    other => {
                        return Err(CliError::Usage(format!(
                            "{}: expected a coloring, found {}",
                            path.display(),
                            other.kind()
                        )))
                    }
                },
                None => Coloring::all_ones(m.cols()),
            };
            let before = eval_discrepancy(&m, &start)?.value;
            let o = greedy_improve(&m, &start, *passes)?;
            let summary = format!(
                "greedy: discrepancy {before} -> {} in {} flips",
                o.achieved, o.iterations
            );
            let a = Artifact::Heuristic {
                method: "greedy".into(),
                outcome: o,
            };
            (ok(a, provenance("color improve", 0), summary), output)
        }
    })
}

fn verify(what: &VerifyCommand) -> Res<(Outcome, &OutputArgs)> {
    Ok(match what {
        VerifyCommand::Chars { d, k, v, output } => {
            let indices: Vec<CharacterIndex> = match (v, k) {
                (Some(v), _) => {
                    if v.len() != *d || !v.chars().all(|c| c == '0' || c == '1') {
                        return Err(CliError::Usage(format!("--v must be a binary string of length {d}")));
                    }
                    let bits = u64::from_str_radix(v, 2).map_err(|e| CliError::Usage(e.to_string()))?;
                    vec![CharacterIndex::new(*d, bits)?]
                }
                (None, Some(k)) => {
                    if k > d {
                        return Err(CliError::Usage(format!("--k must be at most d = {d}")));
                    }
                    CharacterIndex::new(*d, 0)?;
                    CharacterIndex::of_weight(*d, *k).collect()
                }
                (None, None) => return Err(CliError::Usage("--k or --v is required".into())),
            };
            let mut report = CheckReport {
                name: "char_decomposition".into(),
                passed: true,
                detail: String::new(),
                trials: 0,
                notes: vec![format!("{} characters in dimension {d}", indices.len())],
            };
            for v in &indices {
                let r = check_char_decomposition(v)?;
                report.trials += r.trials;
                if !r.passed && report.passed {
                    report.passed = false;
                    report.detail = r.detail;
                }
            }
            (check_outcome(report, provenance("verify chars", 0)), output)
        }
        VerifyCommand::Embed { d, trials, seed, output } => {
            let w = gen_embedding(*d)?;
            let r = check_embedding(&w, *trials, *seed)?;
            (check_outcome(r, provenance("verify embed", *seed)), output)
        }
        VerifyCommand::Transfer {
            d,
            k,
            trials,
            seed,
            output,
        } => {
            let r = check_transfer(*d, *k, *trials, *seed)?;
            (check_outcome(r, provenance("verify transfer", *seed)), output)
        }
        VerifyCommand::Cert { instance, cert, output } => {
            let m = load_instance(instance)?.matrix();
            let doc = read_document(cert)?;
            let Artifact::Certificate(c) = doc.artifact else {
                return Err(CliError::Usage(format!(
                    "{}: expected a lower_bound_cert, found {}",
                    cert.display(),
                    doc.artifact.kind()
                )));
            };
            let r = match verify_certificate(&m, &c) {
                Ok(r) => r,
                Err(discrepancy_core::Error::Malformed(msg)) => CheckReport {
                    name: "certificate".into(),
                    passed: false,
                    detail: format!("malformed certificate: {msg}"),
                    trials: 1,
                    notes: Vec::new(),
                },
                Err(e) => return Err(e.into()),
            };
            (check_outcome(r, provenance("verify cert", 0)), output)
        }
    })
}

fn render(doc: &Document, format: Format) -> Res<String> {
    match format {
        Format::Json => Ok(to_json(doc)),
        Format::Csv => Ok(to_csv(doc)?),
    }
}

/// Executes, writes the artifact and summary, and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|(outcome, output)| {
        let text = render(&outcome.document, output.format)?;
        match &output.out {
            Some(path) => {
                fs::write(path, text)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
                println!("{}", outcome.summary);
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?;
                eprintln!("{}", outcome.summary);
            }
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
