//! Batch front end: parse group/module specs, run enumerations,
//! certifications, and series fits, and emit JSON or CSV reports.
//!
//! Every JSON report is `{payload, envelope}`: the payload holds the fully
//! resolved configuration plus the result and is byte-identical across
//! identical invocations; the envelope carries the tool version and timing.
//! CSV output is a plain table for the tabular subcommands. Exit status is 0
//! for success or a passing certification, 1 for a failing certification
//! (the report is still emitted), and 2 for usage or parse errors.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fwsa::category::{Category, CategoryTag, LabeledSet, Morphism};
use fwsa::cert::{
    bound_recursion_check, certify_generation, factor_check_v00, generation_profile,
    restriction_witness, BoundTable, RestrictionMode,
};
use fwsa::hilbert::{default_candidates, fit_rational, truncated_series, FitReport, SeriesReport};
use fwsa::parse::{parse_element, parse_group, parse_labels, parse_module};
use fwsa_cli::report::{canonical_group_spec, render_json, RunConfig};

#[derive(Parser)]
#[command(
    name = "fwsa",
    version,
    about = "Exact computations for modules over labeled-surjection categories"
)]
struct Cli {
    /// Report format; csv is available for the tabular subcommands only.
    #[arg(long, env = "FWSA_FORMAT", value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the canonical objects of each size up to a bound.
    Objects(ObjectsArgs),
    /// Count the morphisms between two labeled sets.
    Hom(HomArgs),
    /// Dimension of a module value at one object.
    Dim(DimArgs),
    /// Matrix of a module action on one morphism.
    Act(ActArgs),
    /// Certify that a module is generated in the claimed degree.
    Gencert(GencertArgs),
    /// New-generator counts of a module at every object up to a bound.
    Profile(ProfileArgs),
    /// Check that assembly into the transition module factors through
    /// the orbit quotient.
    FactorCheck(FactorCheckArgs),
    /// Certify restriction generation bounds for a pointed projective.
    RestrictWitness(RestrictWitnessArgs),
    /// Tabulate the gluing recursion and check the linear bound g+5i.
    Bounds(BoundsArgs),
    /// Truncated dimension series of a module, optionally fitted to a
    /// rational form.
    Hilbert(HilbertArgs),
}

#[derive(clap::Args)]
struct ObjectsArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Category: fws, tws, fs, or fsA.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Largest object size to enumerate.
    #[arg(long)]
    max_size: usize,
}

#[derive(clap::Args)]
struct HomArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Source labels, e.g. `1,1,0`.
    #[arg(long)]
    src: String,
    /// Target labels.
    #[arg(long)]
    dst: String,
    /// Category: fws, tws, fs, or fsA.
    #[arg(long, default_value = "fws")]
    category: String,
    /// Count pointed morphisms (overrides --category to tws).
    #[arg(long)]
    tilde: bool,
}

#[derive(clap::Args)]
struct DimArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Module spec, e.g. `v0bar`, `ppx:1,1`, `conv:v0bar:ppx:1`.
    #[arg(long)]
    module: String,
    /// Category of the spec's projective and zero leaves.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Labels of the object to evaluate at.
    #[arg(long)]
    at: String,
}

#[derive(clap::Args)]
struct ActArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Module spec, e.g. `v0bar`, `ppx:1,1`, `conv:v0bar:ppx:1`.
    #[arg(long)]
    module: String,
    /// Category of the spec's projective and zero leaves.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Source labels of the morphism.
    #[arg(long)]
    src: String,
    /// Target labels of the morphism.
    #[arg(long)]
    dst: String,
    /// Underlying surjection: the target index of each source point.
    #[arg(long)]
    map: String,
    /// Pointing: one group element literal per source point (default all 0).
    #[arg(long)]
    pointing: Option<String>,
}

#[derive(clap::Args)]
struct GencertArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Module spec, e.g. `v0bar`, `ppx:1,1`, `conv:v0bar:ppx:1`.
    #[arg(long)]
    module: String,
    /// Category of the spec's projective and zero leaves.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Claimed generation degree.
    #[arg(long)]
    claim: usize,
    /// Check surjectivity at every object up to this size.
    #[arg(long)]
    max_size: usize,
}

#[derive(clap::Args)]
struct ProfileArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Module spec, e.g. `v0bar`, `ppx:1,1`, `conv:v0bar:ppx:1`.
    #[arg(long)]
    module: String,
    /// Category of the spec's projective and zero leaves.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Count new generators at every object up to this size.
    #[arg(long)]
    max_size: usize,
}

#[derive(clap::Args)]
struct FactorCheckArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Check the factorization at every object up to this size.
    #[arg(long)]
    max_size: usize,
}

#[derive(clap::Args)]
struct RestrictWitnessArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Labels of the projective's apex.
    #[arg(long)]
    apex: String,
    /// Restriction mode: tws-to-fws or fws-to-fs.
    #[arg(long)]
    mode: String,
    /// Verify the covering family at every object up to this size.
    #[arg(long)]
    max_size: usize,
}

#[derive(clap::Args)]
struct BoundsArgs {
    /// Largest i in the tabulated grid.
    #[arg(long)]
    imax: usize,
    /// Largest genus g in the tabulated grid.
    #[arg(long)]
    gmax: usize,
}

#[derive(clap::Args)]
struct HilbertArgs {
    /// Group spec, e.g. `Z2`, `Z2xZ3`, or `1` for the trivial group.
    #[arg(long)]
    group: String,
    /// Module spec, e.g. `v0bar`, `ppx:1,1`, `conv:v0bar:ppx:1`.
    #[arg(long)]
    module: String,
    /// Category of the spec's projective and zero leaves.
    #[arg(long, default_value = "tws")]
    category: String,
    /// Compute coefficients through this total degree.
    #[arg(long)]
    truncation: usize,
    /// Weight each coefficient by the multinomial of its multidegree.
    #[arg(long)]
    weighted: bool,
    /// Fit the series to numerator / product of linear factors.
    #[arg(long)]
    fit: bool,
    /// Zero bands required above the fitted numerator (minimum 2).
    #[arg(long, default_value_t = 3)]
    guard: usize,
    /// Largest j in the candidate scales j/|A|; defaults to |A| squared.
    #[arg(long)]
    max_scale: Option<usize>,
    /// How often one candidate factor may repeat in the denominator.
    #[arg(long, default_value_t = 8)]
    max_multiplicity: usize,
}

/// A finished command: the rendered report plus its certification verdict
/// (None for purely descriptive commands).
struct Outcome {
    rendered: String,
    pass: Option<bool>,
}

fn base_config(cli: &Cli, command: &str) -> RunConfig {
    RunConfig::new(
        command,
        cli.format.name(),
        cli.output.as_ref().map(|p| p.display().to_string()),
    )
}

fn render_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).map_err(CliError::msg)?;
    for row in rows {
        writer.write_record(&row).map_err(CliError::msg)?;
    }
    let bytes = writer.into_inner().map_err(CliError::msg)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_unavailable(command: &str) -> CliError {
    CliError(format!(
        "invalid format: csv is not available for {command}; use json"
    ))
}

struct CliError(String);

impl CliError {
    fn msg(e: impl fmt::Display) -> Self {
        CliError(e.to_string())
    }
}

impl From<fwsa::Error> for CliError {
    fn from(e: fwsa::Error) -> Self {
        CliError(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli, started) {
        Ok(outcome) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &outcome.rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            } else {
                print!("{}", outcome.rendered);
            }
            match outcome.pass {
                Some(true) => {
                    eprintln!("PASS");
                    std::process::exit(0);
                }
                Some(false) => {
                    eprintln!("FAIL");
                    std::process::exit(1);
                }
                None => std::process::exit(0),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: &Cli, started: Instant) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Objects(args) => run_objects(cli, args, started),
        Command::Hom(args) => run_hom(cli, args, started),
        Command::Dim(args) => run_dim(cli, args, started),
        Command::Act(args) => run_act(cli, args, started),
        Command::Gencert(args) => run_gencert(cli, args, started),
        Command::Profile(args) => run_profile(cli, args, started),
        Command::FactorCheck(args) => run_factor_check(cli, args, started),
        Command::RestrictWitness(args) => run_restrict_witness(cli, args, started),
        Command::Bounds(args) => run_bounds(cli, args, started),
        Command::Hilbert(args) => run_hilbert(cli, args, started),
    }
}

#[derive(Serialize)]
struct ObjectRow {
    size: usize,
    labels: String,
}

#[derive(Serialize)]
struct ObjectsResult {
    count: usize,
    objects: Vec<ObjectRow>,
}

fn run_objects(cli: &Cli, args: &ObjectsArgs, started: Instant) -> Result<Outcome, CliError> {
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let cat = Category::new(group.clone(), tag);
    let mut objects = Vec::new();
    for n in 0..=args.max_size {
        for x in cat.objects_of_size(n) {
            objects.push(ObjectRow {
                size: n,
                labels: x.literal(&group),
            });
        }
    }
    let mut config = base_config(cli, "objects");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.max_size = Some(args.max_size);
    let rendered = match cli.format {
        Format::Json => render_json(
            config,
            ObjectsResult {
                count: objects.len(),
                objects,
            },
            started,
        ),
        Format::Csv => render_csv(
            &["size", "labels"],
            objects
                .iter()
                .map(|o| vec![o.size.to_string(), o.labels.clone()])
                .collect(),
        )?,
    };
    Ok(Outcome {
        rendered,
        pass: None,
    })
}

#[derive(Serialize)]
struct HomResult {
    count: usize,
}

fn run_hom(cli: &Cli, args: &HomArgs, started: Instant) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("hom"));
    }
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = if args.tilde {
        CategoryTag::Tws
    } else {
        args.category.parse()?
    };
    let cat = Category::new(group.clone(), tag);
    let src = parse_labels(&args.src, &group)?;
    let dst = parse_labels(&args.dst, &group)?;
    cat.validate_object(&src)?;
    cat.validate_object(&dst)?;
    let count = cat.hom(&src, &dst).len();
    let mut config = base_config(cli, "hom");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.src = Some(src.literal(&group));
    config.dst = Some(dst.literal(&group));
    Ok(Outcome {
        rendered: render_json(config, HomResult { count }, started),
        pass: None,
    })
}

#[derive(Serialize)]
struct DimResult {
    object: String,
    dim: usize,
}

fn run_dim(cli: &Cli, args: &DimArgs, started: Instant) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("dim"));
    }
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let module = parse_module(&args.module, &group, tag)?;
    let at = parse_labels(&args.at, &group)?;
    module.category().validate_object(&at)?;
    let dim = module.dim(&at);
    let mut config = base_config(cli, "dim");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.module = Some(module.describe());
    config.at = Some(at.literal(&group));
    Ok(Outcome {
        rendered: render_json(
            config,
            DimResult {
                object: at.literal(&group),
                dim,
            },
            started,
        ),
        pass: None,
    })
}

#[derive(Serialize)]
struct ActResult {
    rows: usize,
    cols: usize,
    /// Dense matrix of the action, one exact scalar string per entry.
    entries: Vec<Vec<String>>,
}

fn run_act(cli: &Cli, args: &ActArgs, started: Instant) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("act"));
    }
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let module = parse_module(&args.module, &group, tag)?;
    let src = parse_labels(&args.src, &group)?;
    let dst = parse_labels(&args.dst, &group)?;
    let map = args
        .map
        .split(',')
        .map(|t| {
            t.parse::<usize>().map_err(|_| {
                CliError(format!("parse error in map: {t}"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pointing = match &args.pointing {
        None => vec![0; src.size()],
        Some(spec) => spec
            .split(',')
            .map(|t| parse_element(t, &group))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let morphism = Morphism {
        map,
        pointing,
        tgt_size: dst.size(),
    };
    module.category().validate_morphism(&morphism, &src, &dst)?;
    let matrix = module.act(&morphism, &src, &dst)?;
    let entries = matrix
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.to_string()).collect())
        .collect();
    let mut config = base_config(cli, "act");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.module = Some(module.describe());
    config.src = Some(src.literal(&group));
    config.dst = Some(dst.literal(&group));
    config.map = Some(args.map.clone());
    config.pointing = Some(
        morphism
            .pointing
            .iter()
            .map(|&p| group.literal(p))
            .collect::<Vec<_>>()
            .join(","),
    );
    Ok(Outcome {
        rendered: render_json(
            config,
            ActResult {
                rows: matrix.rows(),
                cols: matrix.cols(),
                entries,
            },
            started,
        ),
        pass: None,
    })
}

fn run_gencert(cli: &Cli, args: &GencertArgs, started: Instant) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("gencert"));
    }
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let module = parse_module(&args.module, &group, tag)?;
    let report = certify_generation(&module, args.claim, args.max_size)?;
    let pass = report.pass;
    let mut config = base_config(cli, "gencert");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.module = Some(module.describe());
    config.claim = Some(args.claim);
    config.max_size = Some(args.max_size);
    Ok(Outcome {
        rendered: render_json(config, report, started),
        pass: Some(pass),
    })
}

#[derive(Serialize)]
struct ProfileResult {
    module: String,
    truncation: usize,
    max_degree: Option<usize>,
    records: Vec<ProfileRow>,
}

#[derive(Serialize)]
struct ProfileRow {
    size: usize,
    labels: String,
    new_generators: usize,
}

fn run_profile(cli: &Cli, args: &ProfileArgs, started: Instant) -> Result<Outcome, CliError> {
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let module = parse_module(&args.module, &group, tag)?;
    let profile = generation_profile(&module, args.max_size)?;
    let result = ProfileResult {
        module: profile.module.clone(),
        truncation: profile.truncation,
        max_degree: profile.max_degree(),
        records: profile
            .records
            .iter()
            .map(|r| ProfileRow {
                size: r.size,
                labels: LabeledSet::new(r.labels.clone()).literal(&group),
                new_generators: r.new_generators,
            })
            .collect(),
    };
    let mut config = base_config(cli, "profile");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.module = Some(module.describe());
    config.max_size = Some(args.max_size);
    let rendered = match cli.format {
        Format::Json => render_json(config, result, started),
        Format::Csv => render_csv(
            &["size", "labels", "new_generators"],
            result
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.size.to_string(),
                        r.labels.clone(),
                        r.new_generators.to_string(),
                    ]
                })
                .collect(),
        )?,
    };
    Ok(Outcome {
        rendered,
        pass: None,
    })
}

fn run_factor_check(
    cli: &Cli,
    args: &FactorCheckArgs,
    started: Instant,
) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("factor-check"));
    }
    let group = parse_group(&args.group)?;
    let report = factor_check_v00(&group, args.max_size);
    let pass = report.pass;
    let mut config = base_config(cli, "factor-check");
    config.group = Some(canonical_group_spec(&group));
    config.max_size = Some(args.max_size);
    Ok(Outcome {
        rendered: render_json(config, report, started),
        pass: Some(pass),
    })
}

fn run_restrict_witness(
    cli: &Cli,
    args: &RestrictWitnessArgs,
    started: Instant,
) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv {
        return Err(csv_unavailable("restrict-witness"));
    }
    let group = parse_group(&args.group)?;
    let apex = parse_labels(&args.apex, &group)?;
    let mode: RestrictionMode = args.mode.parse()?;
    let report = restriction_witness(&group, &apex, mode, args.max_size)?;
    let pass = report.pass;
    let mut config = base_config(cli, "restrict-witness");
    config.group = Some(canonical_group_spec(&group));
    config.apex = Some(apex.literal(&group));
    config.mode = Some(mode.name().to_string());
    config.max_size = Some(args.max_size);
    Ok(Outcome {
        rendered: render_json(config, report, started),
        pass: Some(pass),
    })
}

#[derive(Serialize)]
struct BoundsResult {
    #[serde(flatten)]
    table: BoundTable,
    pass: bool,
}

fn run_bounds(cli: &Cli, args: &BoundsArgs, started: Instant) -> Result<Outcome, CliError> {
    let table = bound_recursion_check(args.imax, args.gmax);
    let pass = table.pass();
    let mut config = base_config(cli, "bounds");
    config.imax = Some(args.imax);
    config.gmax = Some(args.gmax);
    let rendered = match cli.format {
        Format::Json => render_json(config, BoundsResult { table, pass }, started),
        Format::Csv => {
            let mut rows = Vec::new();
            for i in 0..=args.imax {
                for g in 0..=args.gmax {
                    let value = table.value(i, g);
                    let bound = (g + 5 * i) as u64;
                    let ok = (i, g) == (0, 0) || value <= bound;
                    rows.push(vec![
                        i.to_string(),
                        g.to_string(),
                        value.to_string(),
                        bound.to_string(),
                        ok.to_string(),
                    ]);
                }
            }
            render_csv(&["i", "g", "value", "bound", "pass"], rows)?
        }
    };
    Ok(Outcome {
        rendered,
        pass: Some(pass),
    })
}

#[derive(Serialize)]
struct HilbertResult {
    series: SeriesReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitReport>,
}

fn run_hilbert(cli: &Cli, args: &HilbertArgs, started: Instant) -> Result<Outcome, CliError> {
    if cli.format == Format::Csv && args.fit {
        return Err(csv_unavailable("hilbert --fit"));
    }
    let group = parse_group(&args.group)?;
    let tag: CategoryTag = args.category.parse()?;
    let module = parse_module(&args.module, &group, tag)?;
    let series = truncated_series(&module, args.truncation, args.weighted);
    let max_scale = args.max_scale.unwrap_or(group.order() * group.order());
    let mut pass = None;
    let fit = if args.fit {
        let candidates = default_candidates(&group, max_scale);
        let outcome = fit_rational(&series, &candidates, args.max_multiplicity, args.guard)?;
        pass = Some(outcome.fitted().is_some());
        Some(outcome.report())
    } else {
        None
    };
    let result = HilbertResult {
        series: series.report(),
        fit,
    };
    let mut config = base_config(cli, "hilbert");
    config.group = Some(canonical_group_spec(&group));
    config.category = Some(tag.name().to_string());
    config.module = Some(module.describe());
    config.truncation = Some(args.truncation);
    config.weighted = Some(args.weighted);
    config.fit = Some(args.fit);
    if args.fit {
        config.guard = Some(args.guard);
        config.max_scale = Some(max_scale);
        config.max_multiplicity = Some(args.max_multiplicity);
    }
    let rendered = match cli.format {
        Format::Json => render_json(config, result, started),
        Format::Csv => render_csv(
            &["degree", "coefficient"],
            result
                .series
                .coefficients
                .iter()
                .map(|(d, c)| vec![d.clone(), c.clone()])
                .collect(),
        )?,
    };
    Ok(Outcome { rendered, pass })
}
