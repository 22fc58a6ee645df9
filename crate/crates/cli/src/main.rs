//! Command-line front end for global representations of group families.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 input error, 3 budget exhaustion.

mod objects;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use globrep::checks::{run_suites, SuiteConfig};
use globrep::family::{truncate, FamilySpec, GroupFamily, NStableKind, Selection};
use globrep::kan::{adjunction_check, glue_ses, left_kan, left_kan_general, restrict, right_kan};
use globrep::rep::{write_rep, Rep};
use globrep::serre::{decompose_chi, member_certified, ClosureBudget, IdealSpec, SymbolicIdeal};
use globrep::spectrum::{spc, spc_n_stable, ENUMERATION_GUARD};
use globrep::{Error, Result};

use objects::Expr;

#[derive(Parser, Debug)]
#[command(
    name = "globrep",
    version,
    about = "Global representations, Serre ideals and their spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Builtin family such as `cyclic_p(2,3)`, `elementary_abelian(2)` or
    /// `abelian_p(2,16)`, or a path to a family file.
    #[arg(long, global = true)]
    family: Option<String>,

    /// Object expression; repeatable.
    #[arg(long, global = true)]
    object: Vec<String>,

    /// Ideal generator expressions; repeatable or comma-separated.
    #[arg(long, global = true, value_delimiter = ',')]
    ideal: Vec<String>,

    /// Level at which an unbounded N-stable family is cut off for numeric work.
    #[arg(long, global = true)]
    truncation: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Closure depth for `check`, enumeration guard for `spectrum`.
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Where certificates, object files or reports are written.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the randomized suites of `check`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Check the family and every object against their laws.
    Validate,
    /// Support of each object.
    Support,
    /// Whether the first object lies in the ideal generated by `--ideal`.
    Member,
    /// Filtration of the first object by concentrated pieces.
    Decompose,
    /// Prime spectrum of the family.
    Spectrum,
    /// Restriction and Kan extensions along the split at `--truncation`
    /// (classes of order at most that value, and the rest).
    Kan,
    /// Run the property suites.
    Check,
    /// Family overview; writes the first object's file to `--out`.
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Outcome {
    code: u8,
    json: serde_json::Value,
    text: String,
}

impl Outcome {
    fn new(code: u8, json: serde_json::Value, text: String) -> Outcome {
        Outcome { code, json, text }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) | Error::GuardExceeded { .. } => 3,
        Error::Parse(_)
        | Error::UnknownClass(_)
        | Error::UnknownHom(_)
        | Error::NeedsTruncation(_)
        | Error::FamilyMismatch
        | Error::ShapeMismatch(_)
        | Error::NonCanonical(_)
        | Error::NotNStable(_)
        | Error::InvalidGroup(_)
        | Error::Unsupported(_) => 2,
        _ => 1,
    }
}

fn parse_args(inner: &str) -> Result<Vec<u64>> {
    inner
        .split(',')
        .map(|a| {
            a.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("expected an integer, found `{a}`")))
        })
        .collect()
}

fn parse_family(s: &str) -> Result<FamilySpec> {
    let path = Path::new(s);
    if path.extension().is_some_and(|e| e == "json") || path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())));
    }
    let (name, rest) = s
        .split_once('(')
        .ok_or_else(|| Error::Parse(format!("unrecognized family `{s}`")))?;
    let inner = rest
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
    let args = parse_args(inner)?;
    let narrow = |v: u64| u32::try_from(v).map_err(|_| Error::Parse(format!("{v} is too large")));
    match (name.trim(), args.as_slice()) {
        ("cyclic_p", [p]) => Ok(FamilySpec::CyclicP {
            p: *p,
            max_exponent: None,
        }),
        ("cyclic_p", [p, e]) => Ok(FamilySpec::CyclicP {
            p: *p,
            max_exponent: Some(narrow(*e)?),
        }),
        ("elementary_abelian", [p]) => Ok(FamilySpec::ElementaryAbelian {
            p: *p,
            max_rank: None,
        }),
        ("elementary_abelian", [p, r]) => Ok(FamilySpec::ElementaryAbelian {
            p: *p,
            max_rank: Some(narrow(*r)?),
        }),
        ("abelian_p", [p, b]) => Ok(FamilySpec::AbelianP {
            p: *p,
            order_bound: *b,
        }),
        _ => Err(Error::Parse(format!("unrecognized family `{s}`"))),
    }
}

enum Workspace {
    Finite(Arc<GroupFamily>),
    Unbounded(NStableKind),
}

fn family_spec(cli: &Cli, exprs: &[Expr]) -> Result<FamilySpec> {
    if let Some(f) = &cli.family {
        return parse_family(f);
    }
    for e in exprs {
        if let Expr::File(p) = e {
            return Ok(objects::read_file(p)?.family().spec().clone());
        }
    }
    Err(Error::Parse("no family given: pass --family".into()))
}

fn workspace(cli: &Cli, spec: &FamilySpec) -> Result<Workspace> {
    match (spec.n_stable_kind(), spec.is_unbounded(), cli.truncation) {
        (Some(kind), true, Some(n)) => Ok(Workspace::Finite(GroupFamily::from_spec(
            &kind.truncation(n),
        )?)),
        (Some(kind), true, None) => Ok(Workspace::Unbounded(kind)),
        _ => Ok(Workspace::Finite(GroupFamily::from_spec(spec)?)),
    }
}

fn finite(ws: &Workspace) -> Result<&Arc<GroupFamily>> {
    match ws {
        Workspace::Finite(f) => Ok(f),
        Workspace::Unbounded(k) => Err(Error::NeedsTruncation(format!(
            "{}; pass --truncation N",
            k.name()
        ))),
    }
}

fn labels(f: &GroupFamily, s: impl IntoIterator<Item = usize>) -> Vec<String> {
    s.into_iter().map(|c| f.label(c).to_string()).collect()
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

fn first(exprs: &[Expr]) -> Result<&Expr> {
    exprs
        .first()
        .ok_or_else(|| Error::Parse("no object given: pass --object".into()))
}

fn cmd_validate(cli: &Cli, exprs: &[Expr]) -> Result<Outcome> {
    let spec = family_spec(cli, exprs)?;
    let ws = match workspace(cli, &spec) {
        Err(Error::InvalidTable { reason, witness }) => {
            let text = format!("family: invalid\n  {reason}: {witness}\n");
            let json = json!({"family": {"valid": false, "violations": [{"law": reason, "witness": witness}]}});
            return Ok(Outcome::new(1, json, text));
        }
        other => other?,
    };
    let mut text = String::new();
    let mut ok = true;
    let mut object_reports = Vec::new();
    match &ws {
        Workspace::Finite(f) => {
            let laws = f.check_laws();
            text += &format!(
                "family {}: {}\n",
                f.name(),
                if laws.is_ok() { "valid" } else { "invalid" }
            );
            if let Err(e) = &laws {
                ok = false;
                text += &format!("  {e}\n");
            }
            let reps = exprs
                .iter()
                .map(|e| objects::evaluate(e, f))
                .collect::<Result<Vec<_>>>()?;
            for (name, x) in cli.object.iter().zip(&reps) {
                let violations = x.validate();
                ok &= violations.is_empty();
                text += &format!(
                    "object {name}: {}\n",
                    if violations.is_empty() {
                        "valid"
                    } else {
                        "invalid"
                    }
                );
                for v in &violations {
                    text += &format!("  {} law fails at {}\n", v.law, v.witness);
                }
                object_reports.push(json!({
                    "object": name,
                    "valid": violations.is_empty(),
                    "violations": violations.iter().map(|v| json!({"law": v.law, "witness": v.witness})).collect::<Vec<_>>(),
                }));
            }
            let json = json!({"family": {"name": f.name(), "valid": laws.is_ok()}, "objects": object_reports});
            Ok(Outcome::new(if ok { 0 } else { 1 }, json, text))
        }
        Workspace::Unbounded(kind) => {
            for (name, e) in cli.object.iter().zip(exprs) {
                let s = objects::symbolic(e)?;
                text += &format!("object {name}: support {}\n", s.descriptor);
                object_reports.push(
                    json!({"object": name, "valid": true, "support": s.descriptor.to_string()}),
                );
            }
            text = format!("family {}: valid\n", kind.name()) + &text;
            let json =
                json!({"family": {"name": kind.name(), "valid": true}, "objects": object_reports});
            Ok(Outcome::new(0, json, text))
        }
    }
}

fn cmd_support(cli: &Cli, ws: &Workspace, exprs: &[Expr]) -> Result<Outcome> {
    first(exprs)?;
    let mut text = String::new();
    let mut items = Vec::new();
    for (name, e) in cli.object.iter().zip(exprs) {
        match ws {
            Workspace::Finite(f) => {
                let x = objects::evaluate(e, f)?;
                let supp = labels(f, x.support_set());
                text += &format!("{name}: {{{}}}\n", supp.join(", "));
                items.push(json!({"object": name, "support": supp, "dims": x.dims()}));
            }
            Workspace::Unbounded(_) => {
                let s = objects::symbolic(e)?;
                text += &format!("{name}: {}\n", s.descriptor);
                items.push(json!({"object": name, "support": s.descriptor}));
            }
        }
    }
    Ok(Outcome::new(0, json!({ "supports": items }), text))
}

fn cmd_member(cli: &Cli, ws: &Workspace, exprs: &[Expr], ideal: &[Expr]) -> Result<Outcome> {
    let x = first(exprs)?;
    if ideal.is_empty() {
        return Err(Error::Parse("no ideal generators: pass --ideal".into()));
    }
    match ws {
        Workspace::Finite(f) => {
            let xr = objects::evaluate(x, f)?;
            let gens = cli
                .ideal
                .iter()
                .zip(ideal)
                .map(|(n, e)| Ok((n.clone(), objects::evaluate(e, f)?)))
                .collect::<Result<Vec<_>>>()?;
            let spec = IdealSpec::generated_by(f, gens)?;
            let cert = member_certified(&xr, &spec)?;
            let verdict = cert.is_some();
            let mut certificate = None;
            if let (Some(c), Some(path)) = (&cert, &cli.out) {
                let report = c.report()?;
                write_out(
                    path,
                    &serde_json::to_string_pretty(&report).expect("serializable"),
                )?;
                certificate = Some(path.display().to_string());
            }
            let mut text = format!(
                "{verdict}\nideal support: {{{}}}\n",
                spec.support_labels().join(", ")
            );
            if let Some(c) = &cert {
                text += &format!(
                    "certificate: {} steps, verified {}\n",
                    c.steps.len(),
                    c.verify()?
                );
            }
            if let Some(p) = &certificate {
                text += &format!("certificate written to {p}\n");
            }
            let json = json!({
                "member": verdict,
                "ideal_support": spec.support_labels(),
                "certificate": certificate,
            });
            Ok(Outcome::new(0, json, text))
        }
        Workspace::Unbounded(_) => {
            let xs = objects::symbolic(x)?;
            let gens = ideal
                .iter()
                .map(objects::symbolic)
                .collect::<Result<Vec<_>>>()?;
            let si = SymbolicIdeal::generated_by(gens)?;
            let verdict = si.contains(&xs)?;
            let text = format!("{verdict}\nideal support: {}\n", si.support);
            Ok(Outcome::new(
                0,
                json!({"member": verdict, "ideal_support": si.support}),
                text,
            ))
        }
    }
}

fn cmd_decompose(cli: &Cli, ws: &Workspace, exprs: &[Expr]) -> Result<Outcome> {
    let f = finite(ws)?;
    let x = objects::evaluate(first(exprs)?, f)?;
    let cert = decompose_chi(&x)?;
    let report = cert.report()?;
    let mut text = String::new();
    for (i, s) in report.steps.iter().enumerate() {
        text += &format!(
            "step {}: piece at {} of dimension {}, remaining dims {:?}, exact {}\n",
            i + 1,
            s.class,
            s.piece_dims.iter().sum::<usize>(),
            s.next_dims,
            s.exactness.is_exact()
        );
    }
    text += &format!("verified: {}\n", report.verified);
    if let Some(path) = &cli.out {
        write_out(
            path,
            &serde_json::to_string_pretty(&report).expect("serializable"),
        )?;
        text += &format!("certificate written to {}\n", path.display());
    }
    Ok(Outcome::new(
        if report.verified { 0 } else { 1 },
        to_json(&report),
        text,
    ))
}

fn cmd_spectrum(cli: &Cli, ws: &Workspace, spec: &FamilySpec) -> Result<Outcome> {
    let space = match ws {
        Workspace::Finite(f) => {
            let limit = cli
                .budget
                .unwrap_or(ENUMERATION_GUARD)
                .min(ENUMERATION_GUARD);
            if f.num_classes() > limit {
                return Err(Error::GuardExceeded {
                    size: f.num_classes(),
                    limit,
                });
            }
            spc(f)?
        }
        Workspace::Unbounded(_) => spc_n_stable(spec)?,
    };
    let report = space.report();
    let mut text = format!("{}\n", report.summary);
    text += &format!("points: {}\n", report.points.join(", "));
    text += &format!("closed sets: {}\n", report.closed_sets);
    text += &format!("specialization: {}\n", report.specialization);
    for c in &report.checks {
        text += &format!(
            "[{}] {}\n",
            if c.passed { "pass" } else { "FAIL" },
            c.property
        );
    }
    if let Some(path) = &cli.out {
        write_out(
            path,
            &serde_json::to_string_pretty(&report).expect("serializable"),
        )?;
    }
    Ok(Outcome::new(
        if report.all_passed { 0 } else { 1 },
        to_json(&report),
        text,
    ))
}

fn dims_by_label(f: &GroupFamily, x: &Rep) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = (0..f.num_classes())
        .map(|c| (f.label(c).to_string(), json!(x.dim(c))))
        .collect();
    serde_json::Value::Object(map)
}

fn cmd_kan(cli: &Cli, ws: &Workspace, exprs: &[Expr]) -> Result<Outcome> {
    let f = finite(ws)?;
    let x = objects::evaluate(first(exprs)?, f)?;
    let split = u64::from(cli.truncation.unwrap_or(1));
    let down = truncate(f, &Selection::OrderAtMost(split))?.1;
    let up = truncate(f, &Selection::OrderAbove(split))?.1;
    let gluing = glue_ses(&down, &up, &x)?;
    let mut ok = gluing.report.is_exact();
    let mut parts = Vec::new();
    let mut text = format!("split at order {split}\n");
    for (name, i) in [("order<=", &down), ("order>", &up)] {
        if i.sub.num_classes() == 0 {
            continue;
        }
        let rx = restrict(i, &x)?;
        let l = left_kan(i, &rx)?;
        let r = right_kan(i, &rx)?;
        let general_agrees = globrep::rep::is_isomorphic(&l, &left_kan_general(i, &rx)?)?.is_some();
        let adj = adjunction_check(i, &rx, &x)?;
        ok &= general_agrees && adj.holds();
        text += &format!(
            "{name}{split}: left {:?}, right {:?}, adjunctions {}\n",
            l.dims(),
            r.dims(),
            if adj.holds() { "hold" } else { "FAIL" }
        );
        parts.push(json!({
            "part": format!("{name}{split}"),
            "classes": labels(f, i.image()),
            "left_kan": dims_by_label(f, &l),
            "right_kan": dims_by_label(f, &r),
            "fast_path_agrees": general_agrees,
            "adjunction": to_json(&adj),
        }));
    }
    text += &format!(
        "gluing sequence {:?} -> {:?} -> {:?}: exact {}\n",
        gluing.ses.sub().dims(),
        gluing.ses.middle().dims(),
        gluing.ses.quotient().dims(),
        gluing.report.is_exact()
    );
    let json = json!({"split": split, "parts": parts, "gluing_exact": gluing.report.is_exact()});
    Ok(Outcome::new(if ok { 0 } else { 1 }, json, text))
}

fn cmd_check(cli: &Cli, ws: &Workspace) -> Result<Outcome> {
    let f = finite(ws)?;
    let mut config = SuiteConfig::new(f);
    config.seed = cli.seed;
    if let Some(depth) = cli.budget {
        config.closure = ClosureBudget {
            depth,
            ..ClosureBudget::default()
        };
    }
    let report = run_suites(&config)?;
    let mut text = String::new();
    for r in &report.results {
        text += &format!(
            "[{}] {}: {} passed, {} failed{}\n",
            if r.ok() { "pass" } else { "FAIL" },
            r.property,
            r.passed,
            r.failed,
            if r.inconclusive > 0 {
                format!(", {} inconclusive (budget)", r.inconclusive)
            } else {
                String::new()
            }
        );
    }
    let code = if !report.passed() {
        1
    } else if report.budget_exhausted() {
        3
    } else {
        0
    };
    Ok(Outcome::new(code, to_json(&report), text))
}

fn cmd_report(cli: &Cli, ws: &Workspace, exprs: &[Expr]) -> Result<Outcome> {
    let f = finite(ws)?;
    let classes: Vec<serde_json::Value> = (0..f.num_classes())
        .map(|c| {
            json!({
                "label": f.label(c),
                "order": f.order(c),
                "out_order": f.out_group(c).len(),
                "quotients": labels(f, (0..f.num_classes()).filter(|&g| f.has_surjection(c, g))),
            })
        })
        .collect();
    let mut text = format!(
        "family {}: {} classes, {} morphism classes\n",
        f.name(),
        f.num_classes(),
        f.num_homs()
    );
    for c in 0..f.num_classes() {
        text += &format!(
            "  {} (order {}, |Out| {})\n",
            f.label(c),
            f.order(c),
            f.out_group(c).len()
        );
    }
    let mut written = None;
    if let Some(e) = exprs.first() {
        let x = objects::evaluate(e, f)?;
        text += &format!("object {}: dims {:?}\n", cli.object[0], x.dims());
        if let Some(path) = &cli.out {
            write_out(path, &write_rep(&x))?;
            written = Some(path.display().to_string());
            text += &format!("object written to {}\n", path.display());
        }
    }
    let json = json!({"family": f.name(), "classes": classes, "object_file": written});
    Ok(Outcome::new(0, json, text))
}

fn run(cli: &Cli) -> Result<Outcome> {
    // Every name resolves before any computation runs.
    let exprs = cli
        .object
        .iter()
        .map(|s| objects::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let ideal = cli
        .ideal
        .iter()
        .map(|s| objects::parse(s))
        .collect::<Result<Vec<_>>>()?;
    if cli.command == Command::Validate {
        return cmd_validate(cli, &exprs);
    }
    let spec = family_spec(cli, &exprs)?;
    let ws = workspace(cli, &spec)?;
    if let Workspace::Finite(f) = &ws {
        for e in exprs.iter().chain(&ideal) {
            objects::evaluate(e, f)?;
        }
    }
    match cli.command {
        Command::Validate => unreachable!("handled above"),
        Command::Support => cmd_support(cli, &ws, &exprs),
        Command::Member => cmd_member(cli, &ws, &exprs, &ideal),
        Command::Decompose => cmd_decompose(cli, &ws, &exprs),
        Command::Spectrum => cmd_spectrum(cli, &ws, &spec),
        Command::Kan => cmd_kan(cli, &ws, &exprs),
        Command::Check => cmd_check(cli, &ws),
        Command::Report => cmd_report(cli, &ws, &exprs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("serializable")
                ),
                Format::Text => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(
                        &json!({"error": e.to_string(), "exit_code": code})
                    )
                    .expect("serializable")
                ),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
