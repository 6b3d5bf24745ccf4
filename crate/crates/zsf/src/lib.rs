//! Command-line driver for the `zerosum` library.
//!
//! Exit codes: 0 success (or verification passed), 1 verification failed
//! with a counterexample, 2 usage/validation/domain error, 3 capacity
//! exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zerosum::arith::{self, ArithContext};
use zerosum::atoms::{self, SearchConfig};
use zerosum::group::{ElementSet, Group, GroupKind};
use zerosum::json::{parse_group_spec, GroupJson, SequenceJson};
use zerosum::seq::Sequence;
use zerosum::verify::{verify_characterization, Statement};
use zerosum::{Error, Result, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser)]
#[command(
    name = "zsf",
    version,
    about = "Product-one sequence invariants over small finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on sub-multiset table sizes (overrides the ZSF_BUDGET variable).
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Worker pool width for censuses and unions.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print it.
    Group {
        /// Group spec `kind:n` or a path to a group JSON file.
        #[arg(long)]
        group: String,
    },
    /// Product set of a sequence: pi(S), or Pi_n(S) / Pi(S).
    Pi {
        #[arg(long)]
        group: String,
        /// Sequence text like "a^4 t^2", or @path to a sequence JSON file.
        #[arg(long)]
        seq: String,
        /// Products over sub-multisets of this size instead of pi(S).
        #[arg(long)]
        n: Option<usize>,
        /// Products over all non-empty sub-multisets.
        #[arg(long)]
        all: bool,
        /// Also print an ordering multiplying to the identity, if any.
        #[arg(long)]
        witness: bool,
    },
    /// Product-one / product-one free / square-free predicates.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        seq: String,
    },
    /// Minimal product-one test with a split counterexample.
    Atom {
        #[arg(long)]
        group: String,
        #[arg(long)]
        seq: String,
    },
    /// Small or large Davenport constant with a witness.
    Davenport {
        #[arg(long)]
        group: String,
        /// Maximal atom length (the default).
        #[arg(long)]
        large: bool,
        /// Maximal product-one free length.
        #[arg(long)]
        small: bool,
    },
    /// Census of the atoms of one length, as canonical orbit
    /// representatives.
    Census {
        #[arg(long)]
        group: String,
        /// Length to enumerate; defaults to the large Davenport constant.
        #[arg(long)]
        length: Option<usize>,
        /// Restrict support to the reflection coset of a presented group.
        #[arg(long)]
        reflections: bool,
        /// Inline the full orbit of each representative.
        #[arg(long)]
        expand_orbits: bool,
        /// Use the unpruned reference enumerator (slow; for cross-checks).
        #[arg(long)]
        reference: bool,
    },
    /// Verify a characterization statement against censuses.
    Verify {
        #[arg(long)]
        group: String,
        /// `max-atoms`, `reflection-atoms`, or a compact alias like
        /// `thm4.1` / `prop3.3`.
        #[arg(long)]
        statement: String,
    },
    /// Factorization length set of a product-one sequence.
    Lengths {
        #[arg(long)]
        group: String,
        #[arg(long)]
        seq: String,
    },
    /// Bounded union of length sets containing k.
    Unions {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_len: usize,
    },
    /// Largest co-reachable length rho_k, as a table row.
    Rho {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: Option<usize>,
        /// Emit rows for k = 1..=max_k.
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Smallest co-reachable length lambda_k, as a table row.
    Lambda {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_k: Option<usize>,
    },
}

/// Parses arguments and runs; returns the process exit code.  All report
/// output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut argv: Vec<std::ffi::OsString> = vec!["zsf".into()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("ZSF_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET);
    let cfg = SearchConfig {
        budget,
        jobs: cli.jobs,
    };
    match dispatch(cli.command, cli.format, &cfg) {
        Ok((report, code)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Capacity(_) => EXIT_CAPACITY,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn resolve_group(text: &str) -> Result<Group> {
    if let Ok(g) = parse_group_spec(text) {
        return Ok(Arc::new(g));
    }
    let path = text.strip_prefix('@').unwrap_or(text);
    if Path::new(path).exists() {
        let data = fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read group file {path}: {e}")))?;
        let parsed: GroupJson = serde_json::from_str(&data)
            .map_err(|e| Error::validation(format!("bad group JSON in {path}: {e}")))?;
        return Ok(Arc::new(parsed.into_group()?));
    }
    Err(Error::validation(format!(
        "'{text}' is neither a group spec (kind:n) nor an existing file"
    )))
}

fn resolve_sequence(group: &Group, text: &str) -> Result<Sequence> {
    if let Some(path) = text.strip_prefix('@') {
        let data = fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read sequence file {path}: {e}")))?;
        let parsed: SequenceJson = serde_json::from_str(&data)
            .map_err(|e| Error::validation(format!("bad sequence JSON in {path}: {e}")))?;
        return parsed.into_sequence_over(group);
    }
    Sequence::parse(group, text)
}

fn group_desc(group: &Group) -> String {
    match group.kind() {
        GroupKind::Generic => format!("generic:{}", group.order()),
        kind => kind.to_string(),
    }
}

fn set_text(group: &Group, set: &ElementSet) -> String {
    let names: Vec<&str> = set.iter().map(|e| group.name(e)).collect();
    format!("{{{}}}", names.join(", "))
}

fn dispatch(command: Command, format: Format, cfg: &SearchConfig) -> Result<(String, i32)> {
    let mut out = String::new();
    let mut code = EXIT_OK;
    match command {
        Command::Group { group } => {
            let g = resolve_group(&group)?;
            match format {
                Format::Json | Format::Csv => {
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&GroupJson::from_group(&g)).unwrap()
                    );
                }
                Format::Text => {
                    let _ = writeln!(out, "{} of order {}", group_desc(&g), g.order());
                    let _ = writeln!(out, "elements: {}", g.names().join(" "));
                }
            }
        }
        Command::Pi {
            group,
            seq,
            n,
            all,
            witness,
        } => {
            let g = resolve_group(&group)?;
            let s = resolve_sequence(&g, &seq)?;
            let set = if all || n.is_some() {
                s.subsequence_products_with(n, cfg.budget)?
            } else {
                s.product_set_with(cfg.budget)?
            };
            let ordering = if witness {
                s.ordering_witness()?
                    .map(|w| w.iter().map(|&e| g.name(e).to_string()).collect::<Vec<_>>())
            } else {
                None
            };
            match format {
                Format::Json | Format::Csv => {
                    let names: Vec<&str> = set.iter().map(|e| g.name(e)).collect();
                    let mut obj = json!({"elements": names});
                    if let Some(w) = ordering {
                        obj["ordering"] = json!(w);
                    }
                    let _ = writeln!(out, "{obj}");
                }
                Format::Text => {
                    let _ = writeln!(out, "{}", set_text(&g, &set));
                    if let Some(w) = ordering {
                        let _ = writeln!(out, "ordering: {}", w.join(" "));
                    }
                }
            }
        }
        Command::Classify { group, seq } => {
            let g = resolve_group(&group)?;
            let s = resolve_sequence(&g, &seq)?;
            let c = s.classify_with(cfg.budget)?;
            match format {
                Format::Json | Format::Csv => {
                    let _ = writeln!(
                        out,
                        "{}",
                        json!({
                            "product_one": c.product_one,
                            "product_one_free": c.product_one_free,
                            "squarefree": c.squarefree,
                        })
                    );
                }
                Format::Text => {
                    let _ = writeln!(out, "product_one: {}", c.product_one);
                    let _ = writeln!(out, "product_one_free: {}", c.product_one_free);
                    let _ = writeln!(out, "squarefree: {}", c.squarefree);
                }
            }
        }
        Command::Atom { group, seq } => {
            let g = resolve_group(&group)?;
            let s = resolve_sequence(&g, &seq)?;
            let v = atoms::is_atom_with(&s, cfg.budget)?;
            match format {
                Format::Json | Format::Csv => {
                    let split = v
                        .split
                        .as_ref()
                        .map(|(a, b)| json!([a.to_text(), b.to_text()]));
                    let _ = writeln!(
                        out,
                        "{}",
                        json!({
                            "product_one": v.is_product_one,
                            "atom": v.is_atom,
                            "split": split,
                        })
                    );
                }
                Format::Text => {
                    let _ = writeln!(out, "product_one: {}", v.is_product_one);
                    let _ = writeln!(out, "atom: {}", v.is_atom);
                    if let Some((a, b)) = &v.split {
                        let _ = writeln!(out, "split: {} | {}", a.to_text(), b.to_text());
                    }
                }
            }
        }
        Command::Davenport {
            group,
            large,
            small,
        } => {
            let g = resolve_group(&group)?;
            if large && small {
                return Err(Error::domain("choose one of --large / --small"));
            }
            let (kind, value, witness) = if small {
                let (v, w) = atoms::small_davenport(&g, cfg)?;
                ("small", v, w)
            } else {
                let (v, w) = atoms::large_davenport(&g, cfg)?;
                ("large", v, w)
            };
            match format {
                Format::Json | Format::Csv => {
                    // witness_seq is a complete sequence file: save it and
                    // feed it back to any subcommand as @file
                    let _ = writeln!(
                        out,
                        "{}",
                        json!({
                            "kind": kind,
                            "value": value,
                            "witness": witness.to_text(),
                            "witness_seq": SequenceJson::from_sequence(&witness),
                        })
                    );
                }
                Format::Text => {
                    let _ = writeln!(out, "{value}");
                    let _ = writeln!(out, "witness: {}", witness.to_text());
                }
            }
        }
        Command::Census {
            group,
            length,
            reflections,
            expand_orbits,
            reference,
        } => {
            let g = resolve_group(&group)?;
            let length = match length {
                Some(l) => l,
                None => atoms::large_davenport(&g, cfg)?.0,
            };
            let restrict = if reflections {
                Some(reflection_coset(&g)?)
            } else {
                None
            };
            if reference {
                let set = atoms::census_reference(&g, length, restrict, cfg.budget)?;
                for counts in set {
                    let s = Sequence::new(&g, counts.clone())?;
                    match format {
                        Format::Json | Format::Csv => {
                            let _ =
                                writeln!(out, "{}", json!({"counts": counts, "seq": s.to_text()}));
                        }
                        Format::Text => {
                            let _ = writeln!(out, "{}", s.to_text());
                        }
                    }
                }
                return Ok((out, code));
            }
            let census = match restrict {
                Some(mask) => atoms::restricted_atom_census(&g, length, mask, cfg)?,
                None => atoms::max_atom_census(&g, length, cfg)?,
            };
            for rep in census.representatives() {
                let started = Instant::now();
                let verdict = atoms::is_atom_with(rep, cfg.budget)?;
                let verdict_time_ms = started.elapsed().as_millis() as u64;
                debug_assert!(verdict.is_atom);
                let orbit = census.orbit_of(rep);
                match format {
                    Format::Json | Format::Csv => {
                        let mut obj = json!({
                            "counts": rep.counts(),
                            "seq": rep.to_text(),
                            "orbit_size": orbit.len(),
                            "verdict_time_ms": verdict_time_ms,
                        });
                        if expand_orbits {
                            obj["orbit"] = json!(orbit.iter().collect::<Vec<_>>());
                        }
                        let _ = writeln!(out, "{obj}");
                    }
                    Format::Text => {
                        let _ = writeln!(
                            out,
                            "{} (orbit {}, checked in {} ms)",
                            rep.to_text(),
                            orbit.len(),
                            verdict_time_ms
                        );
                        if expand_orbits {
                            for counts in &orbit {
                                let s = Sequence::new(&g, counts.clone())?;
                                let _ = writeln!(out, "  {}", s.to_text());
                            }
                        }
                    }
                }
            }
        }
        Command::Verify { group, statement } => {
            let g = resolve_group(&group)?;
            let stmt = Statement::parse(&statement, g.kind())?;
            let report = verify_characterization(&g, stmt, cfg)?;
            let verified = report.verified();
            let missing: Vec<String> = report.missing.iter().map(|s| s.to_text()).collect();
            let extra: Vec<String> = report.extra.iter().map(|s| s.to_text()).collect();
            match format {
                Format::Json | Format::Csv => {
                    let mut obj = json!({
                        "statement": statement,
                        "group": group_desc(&g),
                        "length": report.length,
                        "family_size": report.family_size,
                        "census_size": report.census_size,
                        "equal": report.equal,
                        "missing": missing,
                        "extra": extra,
                    });
                    if let Some(ne) = &report.non_existence {
                        obj["non_existence"] = json!({
                            "bound": ne.bound,
                            "checked_lengths": ne.checked_lengths,
                            "holds": ne.holds,
                            "violations": ne.violations.iter().map(|s| s.to_text()).collect::<Vec<_>>(),
                        });
                    }
                    let _ = writeln!(out, "{obj}");
                }
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "{} over {}: family {} vs census {} at length {} -> {}",
                        stmt.as_str(),
                        group_desc(&g),
                        report.family_size,
                        report.census_size,
                        report.length,
                        if report.equal { "equal" } else { "DIFFERENT" }
                    );
                    for s in &missing {
                        let _ = writeln!(out, "missing from census: {s}");
                    }
                    for s in &extra {
                        let _ = writeln!(out, "outside the family: {s}");
                    }
                    if let Some(ne) = &report.non_existence {
                        let _ = writeln!(
                            out,
                            "non-existence above reflection part {}: {}",
                            ne.bound,
                            if ne.holds { "holds" } else { "VIOLATED" }
                        );
                        for s in &ne.violations {
                            let _ = writeln!(out, "violation: {}", s.to_text());
                        }
                    }
                }
            }
            if !verified {
                code = EXIT_VERIFY_FAILED;
            }
        }
        Command::Lengths { group, seq } => {
            let g = resolve_group(&group)?;
            let s = resolve_sequence(&g, &seq)?;
            let l = arith::length_set(&s, cfg)?;
            match format {
                Format::Json | Format::Csv => {
                    let _ = writeln!(out, "{}", json!({"lengths": l.as_set()}));
                }
                Format::Text => {
                    let _ = writeln!(out, "{l}");
                }
            }
        }
        Command::Unions { group, k, max_len } => {
            let g = resolve_group(&group)?;
            let u = arith::unions_bounded(&g, k, max_len, cfg)?;
            match format {
                Format::Json | Format::Csv => {
                    let _ = writeln!(
                        out,
                        "{}",
                        json!({"k": u.k, "max_len": u.max_len, "lengths": u.lengths})
                    );
                }
                Format::Text => {
                    let parts: Vec<String> = u.lengths.iter().map(|l| l.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "k={} max_len={} lengths={{{}}}",
                        u.k,
                        u.max_len,
                        parts.join(", ")
                    );
                }
            }
        }
        Command::Rho { group, k, max_k } | Command::Lambda { group, k, max_k } => {
            let g = resolve_group(&group)?;
            let ctx = ArithContext::new(&g, cfg)?;
            let range: Vec<usize> = match (k, max_k) {
                (Some(k), None) => vec![k],
                (None, Some(m)) => (1..=m).collect(),
                (Some(_), Some(_)) => return Err(Error::domain("choose one of --k / --max-k")),
                (None, None) => return Err(Error::domain("one of --k / --max-k is required")),
            };
            emit_rho_lambda_table(&mut out, format, &ctx, &range)?;
        }
    }
    Ok((out, code))
}

fn reflection_coset(group: &Group) -> Result<ElementSet> {
    let rotations = match group.kind() {
        GroupKind::Dihedral { n } => n,
        GroupKind::Dicyclic { n } => 2 * n,
        _ => {
            return Err(Error::domain(
                "--reflections needs a dihedral or dicyclic group",
            ))
        }
    };
    Ok(ElementSet::from_iter(
        group.order(),
        rotations..group.order(),
    ))
}

fn emit_rho_lambda_table(
    out: &mut String,
    format: Format,
    ctx: &ArithContext,
    range: &[usize],
) -> Result<()> {
    if format == Format::Json {
        for &k in range {
            let rho = ctx.rho(k)?;
            let lambda = ctx.lambda(k)?;
            let _ = writeln!(
                out,
                "{}",
                json!({
                    "k": k,
                    "lambda_lower": lambda.lower_bound,
                    "lambda_exact": lambda.formula_value,
                    "rho_lower": rho.lower_bound,
                    "rho_exact": rho.formula_value,
                    "rho_upper": rho.upper_bound,
                    "witness": rho.lower_witness.as_ref().map(|(b, _)| b.to_text()),
                    "lambda_source": lambda.source.as_str(),
                    "rho_source": rho.source.as_str(),
                })
            );
        }
        return Ok(());
    }
    let _ = writeln!(
        out,
        "k,lambda_lower,lambda_exact,rho_lower,rho_exact,rho_upper,witness"
    );
    for &k in range {
        let rho = ctx.rho(k)?;
        let lambda = ctx.lambda(k)?;
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let witness = rho
            .lower_witness
            .as_ref()
            .map(|(b, _)| format!("\"{}\"", b.to_text()))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            k,
            lambda.lower_bound,
            opt(lambda.formula_value),
            rho.lower_bound,
            opt(rho.formula_value),
            rho.upper_bound,
            witness
        );
    }
    Ok(())
}
