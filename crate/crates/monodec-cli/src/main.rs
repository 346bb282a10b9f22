//! `monodec`: enumerate, count, generate and verify the semigroups of
//! monotone order-decreasing partial transformations.
//!
//! Exit codes: 0 all checks passed, 1 at least one assertion failed,
//! 2 usage error, 3 element budget exhausted.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use monodec::counting;
use monodec::families::{
    self, enumerate_layer, predicted_cardinality, Family, FamilySpec, LayerKind, LayerSpec,
};
use monodec::generation::{self, closure, GeneratingSet, Semigroup, DEFAULT_CLOSURE_BUDGET};
use monodec::pt::PartialTransformation;
use monodec::report::{Report, Status};
use monodec::structure;
use monodec::Error;

mod verify_all;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "monodec",
    version,
    about = "Monotone order-decreasing partial transformation semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default: text for listings, json for reports, csv
    /// for tables)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Element budget for enumeration and closure
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Suppress the timing field in reports
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayerName {
    Q,
    K,
    KI,
    J,
    JI,
    L,
    LI,
    EJ,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountBy {
    Formula,
    Enumerate,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List the elements of a family or of one of its layers
    Enumerate(EnumerateArgs),
    /// Count a family or layer by formula, enumeration or both
    Count(CountArgs),
    /// The table of q(n, m) with the |PRD_n| and |PRD*_n| columns
    Table1(Table1Args),
    /// Emit the named generating sets of PMD(n,r) or IMD(n,r)
    Generators(FamilyArgs),
    /// Close a file of elements under composition
    Closure(ClosureArgs),
    /// Verify the rank and minimal generating set of a family
    VerifyRank(FamilyArgs),
    /// Green's relations (classical, and starred with --starred)
    Greens(GreensArgs),
    /// The catalog of maximal subsemigroups
    Maximal(MaximalArgs),
    /// Abundance: idempotents in every L*- and R*-class
    VerifyAbundance(FamilyArgs),
    /// Regular elements, idempotent counts and quasi-idempotency
    VerifyRegularity(FamilyArgs),
    /// Starred relations, D* compositions and their strictness
    VerifyDstar(FamilyArgs),
    /// Run every verification suite at one degree
    VerifyAll(VerifyAllArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Family name (PT, I, PO, PR, PM, PD, PE, PC, IC, IO, PMD, IMD, PRD,
    /// PRD_STAR, IRD, IRD_STAR, C, O, M, D)
    #[arg(long)]
    family: Option<String>,
    #[arg(short = 'n')]
    degree: u8,
    /// Image-size bound (families) or layer height parameter
    #[arg(short = 'r')]
    r: Option<u8>,
    /// Enumerate a layer instead of a family
    #[arg(long, value_enum)]
    layer: Option<LayerName>,
    /// Maximal image point, for the Q layer
    #[arg(short = 'm')]
    m: Option<u8>,
    /// Restrict the K layer to one maximal image point
    #[arg(long)]
    max_image: Option<u8>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    what: EnumerateArgs,
    #[arg(long, value_enum, default_value = "formula")]
    by: CountBy,
}

#[derive(Args)]
struct Table1Args {
    #[arg(short = 'n')]
    degree: u8,
}

#[derive(Args)]
struct FamilyArgs {
    /// PMD or IMD
    #[arg(long)]
    family: String,
    #[arg(short = 'n')]
    degree: u8,
    #[arg(short = 'r')]
    r: Option<u8>,
}

#[derive(Args)]
struct GreensArgs {
    #[arg(long)]
    family: String,
    #[arg(short = 'n')]
    degree: u8,
    #[arg(short = 'r')]
    r: Option<u8>,
    /// Also compute L*, R*, H* and D*
    #[arg(long)]
    starred: bool,
}

#[derive(Args)]
struct MaximalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Verify maximality of every entry (and run the exhaustive search
    /// when the degree allows it)
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyAllArgs {
    #[arg(short = 'n')]
    degree: u8,
}

/// One machine-readable verification report.
#[derive(Serialize)]
struct ReportDocument {
    command: String,
    parameters: BTreeMap<String, serde_json::Value>,
    assertions: Vec<monodec::Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

impl ReportDocument {
    fn new(command: &str, parameters: BTreeMap<String, serde_json::Value>, report: Report) -> Self {
        ReportDocument {
            command: command.to_string(),
            parameters,
            assertions: report.assertions,
            timing_ms: None,
        }
    }

    fn ok(&self) -> bool {
        self.assertions.iter().all(|a| a.status != Status::Fail)
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                out.push_str(&format!("# {}\n", self.command));
                for a in &self.assertions {
                    let status = match a.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skipped => "SKIP",
                    };
                    out.push_str(&format!("{status} {}", a.name));
                    if let (Some(e), Some(g)) = (&a.expected, &a.actual) {
                        out.push_str(&format!(" (expected {e}, got {g})"));
                    }
                    if let Some(c) = &a.counterexample {
                        out.push_str(&format!(" [counterexample: {c}]"));
                    }
                    out.push('\n');
                }
                if let Some(ms) = self.timing_ms {
                    out.push_str(&format!("# {} ms\n", ms));
                }
                out
            }
            _ => serde_json::to_string_pretty(self).expect("serializable") + "\n",
        }
    }
}

fn params(entries: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn parse_family(name: &str) -> Result<Family, Error> {
    Family::parse(name)
}

fn family_spec(name: &str, degree: u8, r: Option<u8>) -> Result<FamilySpec, Error> {
    Ok(FamilySpec {
        family: parse_family(name)?,
        degree,
        image_bound: r,
    })
}

fn require_theorem_degree(n: u8) -> Result<(), Error> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the verification suites assume n >= 3 (below that the monotone \
             decreasing families coincide with their order-preserving parts); got n={n}"
        )));
    }
    Ok(())
}

fn layer_spec(args: &EnumerateArgs) -> Result<LayerSpec, Error> {
    let layer = args.layer.expect("layer present");
    let need_r = |r: Option<u8>| {
        r.ok_or_else(|| Error::InvalidParameter("this layer needs -r".into()))
    };
    let kind = match layer {
        LayerName::Q => LayerKind::Q {
            m: args
                .m
                .ok_or_else(|| Error::InvalidParameter("the Q layer needs -m".into()))?,
        },
        LayerName::K => LayerKind::K {
            r: need_r(args.r)?,
            max_image: args.max_image,
        },
        LayerName::KI => LayerKind::KInj { r: need_r(args.r)? },
        LayerName::J => LayerKind::J { r: need_r(args.r)? },
        LayerName::JI => LayerKind::JInj { r: need_r(args.r)? },
        LayerName::L => LayerKind::L { r: need_r(args.r)? },
        LayerName::LI => LayerKind::LInj { r: need_r(args.r)? },
        LayerName::EJ => LayerKind::EJ { r: need_r(args.r)? },
    };
    Ok(LayerSpec::new(kind, args.degree))
}

fn layer_formula(spec: &LayerSpec) -> Result<counting::Count, Error> {
    let n = spec.degree as u64;
    match spec.kind {
        LayerKind::Q { m } => counting::q(n, m as u64),
        LayerKind::K { r, max_image: None } => Ok(counting::card_k(n, r as u64)),
        LayerKind::KInj { r } => Ok(counting::card_k_inj(n, r as u64)),
        LayerKind::JInj { r } => counting::card_j_inj(n, r as u64),
        LayerKind::LInj { r } => {
            Ok(counting::card_j_inj(n, r as u64)? + counting::card_k_inj(n, r as u64))
        }
        LayerKind::EJ { r } => Ok(counting::c_table(n, r as u64)),
        _ => Err(Error::InvalidParameter(
            "no closed counting formula for this layer; use --by enumerate".into(),
        )),
    }
}

struct Ctx {
    format: Option<Format>,
    budget: usize,
    no_timing: bool,
    started: Instant,
}

impl Ctx {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn finish_report(
        &self,
        command: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        report: Report,
    ) -> Result<u8, Error> {
        let mut doc = ReportDocument::new(command, parameters, report);
        if !self.no_timing {
            doc.timing_ms = Some(self.started.elapsed().as_millis());
        }
        print!("{}", doc.render(self.format_or(Format::Json)));
        Ok(if doc.ok() { 0 } else { EXIT_FAIL })
    }
}

fn elements_output(
    ctx: &Ctx,
    label: &str,
    elements: &[PartialTransformation],
) -> Result<u8, Error> {
    match ctx.format_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                what: &'a str,
                count: usize,
                elements: Vec<String>,
            }
            let doc = Doc {
                what: label,
                count: elements.len(),
                elements: elements.iter().map(|a| a.canonical()).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            for a in elements {
                println!("{a}");
            }
        }
    }
    Ok(0)
}

fn cmd_enumerate(ctx: &Ctx, args: &EnumerateArgs) -> Result<u8, Error> {
    if args.layer.is_some() {
        let spec = layer_spec(args)?;
        let elements = enumerate_layer(&spec)?;
        elements_output(ctx, &spec.to_string(), &elements)
    } else {
        let name = args
            .family
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("enumerate needs --family or --layer".into()))?;
        let spec = family_spec(name, args.degree, args.r)?;
        let elements = families::enumerate_with_budget(&spec, ctx.budget)?;
        elements_output(ctx, &spec.to_string(), &elements)
    }
}

fn cmd_count(ctx: &Ctx, args: &CountArgs) -> Result<u8, Error> {
    let (label, formula, enumerated): (String, Option<String>, Option<usize>) =
        if args.what.layer.is_some() {
            let spec = layer_spec(&args.what)?;
            spec.validate()?;
            let formula = match args.by {
                CountBy::Enumerate => None,
                _ => Some(layer_formula(&spec)?.to_string()),
            };
            let enumerated = match args.by {
                CountBy::Formula => None,
                _ => Some(enumerate_layer(&spec)?.len()),
            };
            (spec.to_string(), formula, enumerated)
        } else {
            let name = args.what.family.as_deref().ok_or_else(|| {
                Error::InvalidParameter("count needs --family or --layer".into())
            })?;
            let spec = family_spec(name, args.what.degree, args.what.r)?;
            spec.validate()?;
            let formula = match args.by {
                CountBy::Enumerate => None,
                _ => Some(
                    predicted_cardinality(&spec)
                        .ok_or_else(|| {
                            Error::InvalidParameter(format!(
                                "no closed counting formula for {spec}; use --by enumerate"
                            ))
                        })?
                        .to_string(),
                ),
            };
            let enumerated = match args.by {
                CountBy::Formula => None,
                _ => Some(families::enumerate_with_budget(&spec, ctx.budget)?.len()),
            };
            (spec.to_string(), formula, enumerated)
        };

    let matches = match (&formula, &enumerated) {
        (Some(f), Some(e)) => Some(f == &e.to_string()),
        _ => None,
    };
    match ctx.format_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                what: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                formula: Option<String>,
                #[serde(skip_serializing_if = "Option::is_none")]
                enumeration: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                r#match: Option<bool>,
            }
            let doc = Doc {
                what: label,
                formula,
                enumeration: enumerated,
                r#match: matches,
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            if let Some(f) = &formula {
                println!("formula: {f}");
            }
            if let Some(e) = enumerated {
                println!("enumeration: {e}");
            }
            if let Some(m) = matches {
                println!("match: {m}");
            }
        }
    }
    Ok(if matches == Some(false) { EXIT_FAIL } else { 0 })
}

fn cmd_table1(ctx: &Ctx, args: &Table1Args) -> Result<u8, Error> {
    let n_max = args.degree;
    if n_max == 0 {
        return Err(Error::InvalidParameter("the table needs n >= 1".into()));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let q_row: Vec<String> = (0..=n)
            .map(|m| counting::q(n as u64, m as u64).expect("in range").to_string())
            .collect();
        let prd = counting::card_prd(n as u64).to_string();
        let prd_star = counting::card_prd_star(n as u64).to_string();
        rows.push((n, q_row, prd, prd_star));
    }
    match ctx.format_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: u8,
                q: Vec<String>,
                prd: String,
                prd_star: String,
            }
            let doc: Vec<Row> = rows
                .into_iter()
                .map(|(n, q, prd, prd_star)| Row { n, q, prd, prd_star })
                .collect();
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Csv => {
            let mut header = vec!["n".to_string()];
            for m in 0..=n_max {
                header.push(format!("q(n,{m})"));
            }
            header.push("|PRD_n|".to_string());
            header.push("|PRD*_n|".to_string());
            println!("{}", header.join(","));
            for (n, q_row, prd, prd_star) in rows {
                let mut cells = vec![n.to_string()];
                for m in 0..=n_max {
                    cells.push(q_row.get(m as usize).cloned().unwrap_or_default());
                }
                cells.push(prd);
                cells.push(prd_star);
                println!("{}", cells.join(","));
            }
        }
        Format::Text => {
            for (n, q_row, prd, prd_star) in rows {
                println!("n={n}: q = [{}], |PRD| = {prd}, |PRD*| = {prd_star}", q_row.join(", "));
            }
        }
    }
    Ok(0)
}

fn generator_sets(spec: &FamilySpec) -> Result<Vec<GeneratingSet>, Error> {
    let n = spec.degree;
    let r = spec.bound();
    require_theorem_degree(n)?;
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "generators need 2 <= r <= n, got r={r}"
        )));
    }
    let layer_r = if r == n { n - 1 } else { r };
    let mut sets = vec![match spec.family {
        Family::PMD => generation::idempotent_generators(n, layer_r)?,
        Family::IMD => generation::injective_generators(n, layer_r)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "generators are provided for PMD and IMD, not {}",
                other.name()
            )))
        }
    }];
    sets.push(generation::reversing_generators(n, layer_r)?);
    if r == n {
        sets.push(GeneratingSet::new(
            n,
            vec![PartialTransformation::identity(n as usize)],
            "{1_n}",
        ));
    }
    Ok(sets)
}

fn cmd_generators(ctx: &Ctx, args: &FamilyArgs) -> Result<u8, Error> {
    let spec = family_spec(&args.family, args.degree, args.r)?;
    spec.validate()?;
    let sets = generator_sets(&spec)?;
    match ctx.format_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct SetDoc {
                label: String,
                count: usize,
                elements: Vec<String>,
            }
            #[derive(Serialize)]
            struct Doc {
                family: String,
                total: usize,
                sets: Vec<SetDoc>,
            }
            let doc = Doc {
                family: spec.to_string(),
                total: sets.iter().map(|s| s.len()).sum(),
                sets: sets
                    .iter()
                    .map(|s| SetDoc {
                        label: s.label().to_string(),
                        count: s.len(),
                        elements: s.elements().iter().map(|a| a.canonical()).collect(),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            for set in &sets {
                println!("# {}: {} elements", set.label(), set.len());
                for a in set.elements() {
                    println!("{a}");
                }
            }
        }
    }
    Ok(0)
}

#[derive(Args)]
struct ClosureArgs {
    /// File with one canonical element per line; '#' starts a comment
    file: std::path::PathBuf,
}

fn cmd_closure(ctx: &Ctx, args: &ClosureArgs) -> Result<u8, Error> {
    let text = std::fs::read_to_string(&args.file).map_err(|e| {
        Error::InvalidParameter(format!("cannot read {}: {e}", args.file.display()))
    })?;
    let mut gens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let a = PartialTransformation::parse(line).map_err(|e| {
            Error::InvalidParameter(format!("line {}: {e}", lineno + 1))
        })?;
        gens.push(a);
    }
    if gens.is_empty() {
        return Err(Error::InvalidParameter("the input file has no elements".into()));
    }
    let result = closure(&gens, ctx.budget)?;
    match ctx.format_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                generators: usize,
                size: usize,
                diameter: usize,
                elements: Vec<String>,
            }
            let doc = Doc {
                generators: gens.len(),
                size: result.elements.len(),
                diameter: result.diameter,
                elements: result.elements.iter().map(|a| a.canonical()).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            println!("# size {} diameter {}", result.elements.len(), result.diameter);
            for a in &result.elements {
                println!("{a}");
            }
        }
    }
    Ok(0)
}

fn verified_family(args: &FamilyArgs) -> Result<FamilySpec, Error> {
    require_theorem_degree(args.degree)?;
    let spec = family_spec(&args.family, args.degree, args.r)?;
    spec.validate()?;
    if !matches!(spec.family, Family::PMD | Family::IMD) {
        return Err(Error::InvalidParameter(format!(
            "this suite covers PMD and IMD, not {}",
            spec.family.name()
        )));
    }
    let r = spec.bound();
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "this suite needs r >= 2, got r={r}"
        )));
    }
    Ok(spec)
}

fn report_params(spec: &FamilySpec) -> BTreeMap<String, serde_json::Value> {
    params(&[
        ("family", spec.family.name().into()),
        ("n", spec.degree.into()),
        ("r", spec.bound().into()),
    ])
}

fn cmd_verify_rank(ctx: &Ctx, args: &FamilyArgs) -> Result<u8, Error> {
    let spec = verified_family(args)?;
    let report = generation::verify_rank(&spec)?;
    ctx.finish_report("verify-rank", report_params(&spec), report)
}

fn cmd_verify_abundance(ctx: &Ctx, args: &FamilyArgs) -> Result<u8, Error> {
    let spec = verified_family(args)?;
    let report = structure::verify_abundance(spec.family, spec.degree, spec.bound())?;
    ctx.finish_report("verify-abundance", report_params(&spec), report)
}

fn cmd_verify_regularity(ctx: &Ctx, args: &FamilyArgs) -> Result<u8, Error> {
    let spec = verified_family(args)?;
    let report = structure::verify_regularity(spec.family, spec.degree, spec.bound())?;
    ctx.finish_report("verify-regularity", report_params(&spec), report)
}

fn cmd_verify_dstar(ctx: &Ctx, args: &FamilyArgs) -> Result<u8, Error> {
    let spec = verified_family(args)?;
    let report = structure::verify_starred(spec.family, spec.degree, spec.bound())?;
    ctx.finish_report("verify-dstar", report_params(&spec), report)
}

fn cmd_greens(ctx: &Ctx, args: &GreensArgs) -> Result<u8, Error> {
    let spec = family_spec(&args.family, args.degree, args.r)?;
    spec.validate()?;
    let s = Semigroup::from_family(&spec)?;
    let g = structure::greens(&s);
    let mut relations: Vec<(&'static str, &structure::Partition)> = g.named().to_vec();
    let starred;
    if args.starred {
        starred = structure::starred_greens(&s);
        relations.extend(starred.named());
    }
    let keyed: BTreeMap<&str, BTreeMap<String, Vec<String>>> = relations
        .iter()
        .map(|(name, partition)| {
            let classes: BTreeMap<String, Vec<String>> = partition
                .classes()
                .iter()
                .map(|class| {
                    (
                        s.element(class[0]).canonical(),
                        class.iter().map(|&i| s.element(i).canonical()).collect(),
                    )
                })
                .collect();
            (*name, classes)
        })
        .collect();
    match ctx.format_or(Format::Json) {
        Format::Text => {
            println!("# {} with {} elements", spec, s.len());
            for (name, partition) in &relations {
                println!("{name}: {} classes", partition.class_count());
            }
        }
        _ => {
            #[derive(Serialize)]
            struct Doc<'a> {
                family: String,
                size: usize,
                relations: BTreeMap<&'a str, BTreeMap<String, Vec<String>>>,
            }
            let doc = Doc {
                family: spec.to_string(),
                size: s.len(),
                relations: keyed,
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(0)
}

fn cmd_maximal(ctx: &Ctx, args: &MaximalArgs) -> Result<u8, Error> {
    let spec = verified_family(&args.family)?;
    let catalog = structure::maximal_subsemigroups(&spec)?;
    if args.verify {
        let exhaustive = spec.degree <= 4;
        let mut report = structure::verify_maximal_catalog(&spec, exhaustive)?;
        if !exhaustive {
            report.skip("exhaustive_search", "exhaustive search gated to n <= 4");
        }
        return ctx.finish_report("maximal", report_params(&spec), report);
    }
    match ctx.format_or(Format::Json) {
        Format::Text => {
            println!("# {} has {} maximal subsemigroups", spec, catalog.len());
            for entry in &catalog.entries {
                let witness: Vec<String> =
                    entry.witness.iter().map(|a| a.canonical()).collect();
                println!(
                    "{:?}\tsize {}\tremoved {}",
                    entry.kind,
                    entry.elements.len(),
                    witness.join(" ")
                );
            }
        }
        _ => {
            #[derive(Serialize)]
            struct EntryDoc {
                kind: structure::WitnessKind,
                size: usize,
                removed: Vec<String>,
            }
            #[derive(Serialize)]
            struct Doc {
                family: String,
                count: usize,
                entries: Vec<EntryDoc>,
            }
            let doc = Doc {
                family: spec.to_string(),
                count: catalog.len(),
                entries: catalog
                    .entries
                    .iter()
                    .map(|e| EntryDoc {
                        kind: e.kind,
                        size: e.elements.len(),
                        removed: e.witness.iter().map(|a| a.canonical()).collect(),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(0)
}

fn cmd_verify_all(ctx: &Ctx, args: &VerifyAllArgs) -> Result<u8, Error> {
    require_theorem_degree(args.degree)?;
    let report = verify_all::run(args.degree)?;
    ctx.finish_report(
        "verify-all",
        params(&[("n", args.degree.into())]),
        report,
    )
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let ctx = Ctx {
        format: cli.format,
        budget: cli.budget.unwrap_or(DEFAULT_CLOSURE_BUDGET),
        no_timing: cli.no_timing,
        started: Instant::now(),
    };
    match &cli.command {
        Command::Enumerate(args) => cmd_enumerate(&ctx, args),
        Command::Count(args) => cmd_count(&ctx, args),
        Command::Table1(args) => cmd_table1(&ctx, args),
        Command::Generators(args) => cmd_generators(&ctx, args),
        Command::Closure(args) => cmd_closure(&ctx, args),
        Command::VerifyRank(args) => cmd_verify_rank(&ctx, args),
        Command::Greens(args) => cmd_greens(&ctx, args),
        Command::Maximal(args) => cmd_maximal(&ctx, args),
        Command::VerifyAbundance(args) => cmd_verify_abundance(&ctx, args),
        Command::VerifyRegularity(args) => cmd_verify_regularity(&ctx, args),
        Command::VerifyDstar(args) => cmd_verify_dstar(&ctx, args),
        Command::VerifyAll(args) => cmd_verify_all(&ctx, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
