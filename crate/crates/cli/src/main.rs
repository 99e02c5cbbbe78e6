//! `crn`: command-line front end for the reaction-network toolkit.
//!
//! Exit codes: 0 for success and affirmative verdicts, 1 for negative
//! verdicts (NOT_EQUAL, NOT_MEMBER, no certificate, validation findings,
//! failed transforms), 2 for usage, parse, and oracle errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crn_core::balance::{
    brute_force_certificate_capped, certificate_json, find_certificate, monomial_ideal_certificate,
    structural_obstructions, Obstruction, BRUTE_FORCE_DEFAULT_CAP,
};
use crn_core::groebner::{
    contains_monomial, ideal_equal, is_groebner_basis, is_monomial_ideal, specialized_basis,
    MonomialOrder,
};
use crn_core::hypergraph::{build_hypergraph, EdgeId, NetworkHypergraph, VertexId};
use crn_core::massaction::{minimal_reactants, steady_state_system};
use crn_core::network::{validate_network, Network, RingContext};
use crn_core::parse::{parse_complex_in, parse_network};
use crn_core::transforms::{apply_script, TransformError, TransformRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser)]
#[command(name = "crn", version, about = "Steady-state ideal toolkit for reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the definitional clauses of a network file
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the mass-action steady-state polynomial system
    Odes {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the network hypergraph
    Hypergraph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find an almost-balanced-vertex certificate
    Balance {
        file: PathBuf,
        /// Target vertex, e.g. u3 or v1
        #[arg(long)]
        vertex: String,
        /// Edges the certificate must avoid, e.g. E_B,E_r2
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<String>,
        /// Use the exhaustive bounded search instead of the exact solver
        #[arg(long)]
        brute: bool,
        /// Multiplicity bound for --brute
        #[arg(long, default_value_t = 4)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List structural obstructions to almost-balancedness at a vertex
    Obstructions {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List minimal reactant complexes
    MinimalReactants {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify that the steady-state ideal is the minimal-reactant monomial
    /// ideal, and cross-check with the randomized oracle
    MonomialIdeal {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply ideal-preserving rewrites in order: product:<i>:<S>,
    /// reactant:<i>:<S>:<j>, degradation:<i>
    Transform {
        file: PathBuf,
        /// Rewrite steps, e.g. product:3:B reactant:1:B:3 degradation:3
        #[arg(required = true)]
        ops: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether two networks share a steady-state ideal (union ring)
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide membership of a monomial (written as a complex, e.g. "A+2B")
    Member {
        file: PathBuf,
        monomial: String,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the reduced Groebner basis of the specialized ideal per trial
    Gb {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Errors that terminate the process with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn load_network(path: &PathBuf) -> Result<Network, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|x| x == "json") {
        Network::from_json(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
    } else {
        parse_network(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
    }
}

fn parse_order(s: &str) -> Result<MonomialOrder, UsageError> {
    MonomialOrder::from_str(s).map_err(UsageError)
}

fn parse_vertex(h: &NetworkHypergraph, s: &str) -> Result<VertexId, UsageError> {
    let v = VertexId::from_str(s).map_err(UsageError)?;
    if !h.contains_vertex(v) {
        return Err(UsageError(format!("vertex {s} not in the hypergraph")));
    }
    Ok(v)
}

fn reject_dot(format: Format) -> Result<(), UsageError> {
    if format == Format::Dot {
        return Err(UsageError(
            "--format dot is only supported by the hypergraph command".into(),
        ));
    }
    Ok(())
}

fn obstruction_json(n: &Network, o: &Obstruction) -> serde_json::Value {
    match o {
        Obstruction::ReversiblePair { reaction, reverse } => json!({
            "kind": "reversible_pair",
            "reaction": reaction,
            "reverse": reverse,
        }),
        Obstruction::ReactionCycle { complexes } => json!({
            "kind": "reaction_cycle",
            "complexes": complexes.iter().map(|c| n.render_complex(c)).collect::<Vec<_>>(),
        }),
        Obstruction::WeaklyReversible => json!({ "kind": "weakly_reversible" }),
    }
}

fn obstruction_text(n: &Network, o: &Obstruction) -> String {
    match o {
        Obstruction::ReversiblePair { reaction, reverse } => {
            format!("reversible pair: reactions {reaction} and {reverse}")
        }
        Obstruction::ReactionCycle { complexes } => {
            let mut cycle: Vec<String> = complexes.iter().map(|c| n.render_complex(c)).collect();
            cycle.push(n.render_complex(&complexes[0]));
            format!("reaction cycle: {}", cycle.join(" -> "))
        }
        Obstruction::WeaklyReversible => "weakly reversible network".to_string(),
    }
}

fn parse_transform_op(op: &str) -> Result<TransformRequest, UsageError> {
    let parts: Vec<&str> = op.split(':').collect();
    let index = |s: &str| -> Result<usize, UsageError> {
        s.parse::<usize>()
            .map_err(|_| UsageError(format!("invalid reaction index {s:?} in op {op:?}")))
    };
    match parts.as_slice() {
        ["product", i, species] => Ok(TransformRequest::AddToProduct {
            reaction: index(i)?,
            species: (*species).to_string(),
        }),
        ["reactant", i, species, j] => Ok(TransformRequest::AddToReactant {
            reaction: index(i)?,
            species: (*species).to_string(),
            via: index(j)?,
        }),
        ["degradation", i] => Ok(TransformRequest::AddDegradation {
            reaction: index(i)?,
        }),
        _ => Err(UsageError(format!(
            "invalid transform op {op:?} (expected product:<i>:<S>, reactant:<i>:<S>:<j>, or degradation:<i>)"
        ))),
    }
}

/// Exit statuses distinguished by the spec: affirmative vs negative verdicts.
enum Outcome {
    Affirmative,
    Negative,
}

impl Outcome {
    fn code(self) -> ExitCode {
        match self {
            Outcome::Affirmative => ExitCode::from(0),
            Outcome::Negative => ExitCode::from(1),
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, UsageError> {
    match cli.command {
        Command::Validate { file, format } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let report = validate_network(&n);
            match format {
                Format::Json => {
                    let findings: Vec<String> =
                        report.findings.iter().map(|f| f.to_string()).collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "valid": report.is_valid(),
                            "findings": findings,
                        }))
                        .expect("json")
                    );
                }
                _ => {
                    if report.is_valid() {
                        println!("valid");
                    } else {
                        for f in &report.findings {
                            println!("{f}");
                        }
                    }
                }
            }
            Ok(if report.is_valid() {
                Outcome::Affirmative
            } else {
                Outcome::Negative
            })
        }

        Command::Odes { file, format } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let sys = steady_state_system(&n);
            match format {
                Format::Json => {
                    let map: std::collections::BTreeMap<String, String> = sys
                        .iter()
                        .map(|(s, p)| (n.species_name(s).to_string(), p.render(&n)))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&map).expect("json"));
                }
                _ => {
                    for (s, p) in sys.iter() {
                        println!("dx_{}/dt = {}", n.species_name(s), p.render(&n));
                    }
                }
            }
            Ok(Outcome::Affirmative)
        }

        Command::Hypergraph { file, format } => {
            let n = load_network(&file)?;
            let h = build_hypergraph(&n);
            match format {
                Format::Dot => print!("{}", h.to_dot()),
                Format::Json => println!("{}", h.to_json()),
                Format::Text => {
                    for v in h.vertices() {
                        println!("{v} = {}", h.vertex_label(*v).unwrap_or("?"));
                    }
                    for e in h.edges() {
                        let members: Vec<String> = h
                            .edge_members(e)
                            .map(|m| m.iter().map(|v| v.to_string()).collect())
                            .unwrap_or_default();
                        println!("{} = {{{}}}", h.edge_name(e), members.join(", "));
                    }
                }
            }
            Ok(Outcome::Affirmative)
        }

        Command::Balance {
            file,
            vertex,
            forbid,
            brute,
            bound,
            format,
        } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let h = build_hypergraph(&n);
            let v = parse_vertex(&h, &vertex)?;
            let cert = if brute {
                if !forbid.is_empty() {
                    return Err(UsageError(
                        "--forbid is not supported with --brute".into(),
                    ));
                }
                brute_force_certificate_capped(&h, v, bound, BRUTE_FORCE_DEFAULT_CAP)?
            } else {
                let mut forbidden: BTreeSet<EdgeId> = BTreeSet::new();
                for name in &forbid {
                    forbidden.insert(h.parse_edge(name)?);
                }
                find_certificate(&h, v, &forbidden)?
            };
            match cert {
                Some(cert) => {
                    let rendered = certificate_json(&n, &h, &cert)?;
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&rendered).expect("json")
                    );
                    Ok(Outcome::Affirmative)
                }
                None => {
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({ "certificate": null }))
                                .expect("json")
                        ),
                        _ => println!("no certificate: {v} is not almost balanced"),
                    }
                    Ok(Outcome::Negative)
                }
            }
        }

        Command::Obstructions {
            file,
            vertex,
            format,
        } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let h = build_hypergraph(&n);
            let v = parse_vertex(&h, &vertex)?;
            let obstructions = structural_obstructions(&n, v)?;
            match format {
                Format::Json => {
                    let list: Vec<serde_json::Value> = obstructions
                        .iter()
                        .map(|o| obstruction_json(&n, o))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&list).expect("json"));
                }
                _ => {
                    if obstructions.is_empty() {
                        println!("no structural obstructions at {v}");
                    } else {
                        for o in &obstructions {
                            println!("{}", obstruction_text(&n, o));
                        }
                    }
                }
            }
            Ok(Outcome::Affirmative)
        }

        Command::MinimalReactants { file, format } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let minimal = minimal_reactants(&n);
            match format {
                Format::Json => {
                    let list: Vec<String> =
                        minimal.iter().map(|c| n.render_complex(c)).collect();
                    println!("{}", serde_json::to_string_pretty(&list).expect("json"));
                }
                _ => {
                    for c in &minimal {
                        println!("{}", n.render_complex(c));
                    }
                }
            }
            Ok(Outcome::Affirmative)
        }

        Command::MonomialIdeal {
            file,
            trials,
            seed,
            order,
            format,
        } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let order = parse_order(&order)?;
            let h = build_hypergraph(&n);
            let certified = monomial_ideal_certificate(&n)?;
            let oracle = is_monomial_ideal(&n, trials, seed, order)?;
            let ideal: Vec<String> = minimal_reactants(&n)
                .iter()
                .map(|c| n.render_monomial(c))
                .collect();
            match format {
                Format::Json => {
                    let certs = certified.as_ref().map(|list| {
                        list.iter()
                            .map(|(y, cert)| {
                                json!({
                                    "reactant": n.render_complex(y),
                                    "certificate": certificate_json(&n, &h, cert)
                                        .expect("certificates from the solver verify"),
                                })
                            })
                            .collect::<Vec<_>>()
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "certified": certified.is_some(),
                            "ideal": certified.as_ref().map(|_| ideal.clone()),
                            "certificates": certs,
                            "oracle": oracle.to_json(),
                        }))
                        .expect("json")
                    );
                }
                _ => {
                    match &certified {
                        Some(list) => {
                            println!("certified monomial ideal: <{}>", ideal.join(", "));
                            for (y, cert) in list {
                                println!(
                                    "  {} via {} (k={})",
                                    n.render_monomial(y),
                                    cert.vertex,
                                    cert.k
                                );
                            }
                        }
                        None => println!(
                            "inconclusive: some minimal reactant has no almost-balanced vertex"
                        ),
                    }
                    println!("oracle: {}", oracle.answer.as_str());
                }
            }
            Ok(if certified.is_some() {
                Outcome::Affirmative
            } else {
                Outcome::Negative
            })
        }

        Command::Transform { file, ops, format } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let requests: Vec<TransformRequest> = ops
                .iter()
                .map(|op| parse_transform_op(op))
                .collect::<Result<_, _>>()?;
            match apply_script(&n, &requests) {
                Ok((out, results)) => {
                    match format {
                        Format::Json => {
                            let transcripts: Vec<serde_json::Value> = results
                                .iter()
                                .scan(n.clone(), |state, r| {
                                    let h = build_hypergraph(state);
                                    *state = r.network.clone();
                                    Some(r.transcript.to_json(&h))
                                })
                                .collect();
                            println!(
                                "{}",
                                serde_json::to_string_pretty(&json!({
                                    "network": out.to_text(),
                                    "transcripts": transcripts,
                                }))
                                .expect("json")
                            );
                        }
                        _ => {
                            for r in &results {
                                let t = &r.transcript;
                                let detail = match (&t.species, t.via_reaction) {
                                    (Some(s), Some(j)) => format!(" species {s} via {j}"),
                                    (Some(s), None) => format!(" species {s}"),
                                    _ => String::new(),
                                };
                                println!(
                                    "{} reaction {}{} (new rate {}, certificate at {}, k={})",
                                    t.op.as_str(),
                                    t.reaction,
                                    detail,
                                    t.new_rate,
                                    t.certificate.vertex,
                                    t.certificate.k
                                );
                            }
                            print!("{}", out.to_text());
                        }
                    }
                    Ok(Outcome::Affirmative)
                }
                Err(e) => {
                    // Bad indices and names are usage errors; violated
                    // mathematical preconditions are negative verdicts.
                    match e.source {
                        TransformError::UnknownReaction(_)
                        | TransformError::UnknownSpecies(_) => Err(UsageError(e.to_string())),
                        _ => {
                            eprintln!("{e}");
                            Ok(Outcome::Negative)
                        }
                    }
                }
            }
        }

        Command::Compare {
            file1,
            file2,
            trials,
            seed,
            order,
            format,
        } => {
            reject_dot(format)?;
            let n1 = load_network(&file1)?;
            let n2 = load_network(&file2)?;
            let order = parse_order(&order)?;
            let verdict = ideal_equal(&n1, &n2, trials, seed, order)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&verdict.to_json()).expect("json")
                ),
                _ => {
                    println!("{}", verdict.answer.as_str());
                    if let Some(w) = &verdict.witness {
                        println!("witness (trial {}): {}", w.trial, w.polynomial);
                        println!("normal form: {}", w.normal_form);
                    }
                }
            }
            Ok(if verdict.answer.is_affirmative() {
                Outcome::Affirmative
            } else {
                Outcome::Negative
            })
        }

        Command::Member {
            file,
            monomial,
            trials,
            seed,
            order,
            format,
        } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let order = parse_order(&order)?;
            let target = parse_complex_in(&n, &monomial)?;
            let verdict = contains_monomial(&n, &target, trials, seed, order)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&verdict.to_json()).expect("json")
                ),
                _ => {
                    println!("{}", verdict.answer.as_str());
                    if let Some(w) = &verdict.witness {
                        println!("normal form (trial {}): {}", w.trial, w.normal_form);
                    }
                }
            }
            Ok(if verdict.answer.is_affirmative() {
                Outcome::Affirmative
            } else {
                Outcome::Negative
            })
        }

        Command::Gb {
            file,
            trials,
            seed,
            order,
            format,
        } => {
            reject_dot(format)?;
            let n = load_network(&file)?;
            let order = parse_order(&order)?;
            let ctx = RingContext::for_network(&n);
            let mut out = Vec::new();
            for trial in 0..trials {
                let (assignment, basis) = specialized_basis(&n, trial, seed, order)?;
                if !is_groebner_basis(&basis) {
                    return Err(UsageError(
                        "internal check failed: computed basis is not a Groebner basis".into(),
                    ));
                }
                out.push((assignment, basis));
            }
            match format {
                Format::Json => {
                    let list: Vec<serde_json::Value> = out
                        .iter()
                        .enumerate()
                        .map(|(trial, (assignment, basis))| {
                            let rates: std::collections::BTreeMap<String, String> = assignment
                                .iter()
                                .map(|(k, v)| (k.clone(), v.to_string()))
                                .collect();
                            json!({
                                "trial": trial,
                                "rates": rates,
                                "basis": basis
                                    .iter()
                                    .map(|p| p.render(ctx.variables()))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&list).expect("json"));
                }
                _ => {
                    for (trial, (assignment, basis)) in out.iter().enumerate() {
                        let rates: Vec<String> = assignment
                            .iter()
                            .map(|(k, v)| format!("{k}={v}"))
                            .collect();
                        println!("trial {trial}: {}", rates.join(", "));
                        let rendered: Vec<String> =
                            basis.iter().map(|p| p.render(ctx.variables())).collect();
                        println!("  basis: {{{}}}", rendered.join(", "));
                    }
                }
            }
            Ok(Outcome::Affirmative)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => outcome.code(),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
