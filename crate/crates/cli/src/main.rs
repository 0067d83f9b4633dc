use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use brauer_kl::arcdiagrams::{build_arc_diagram, render_ascii, render_tikz, ArcDiagramJson};
use brauer_kl::blockmatrix::{d_matrix, p_matrix, PolyMatrix};
use brauer_kl::decomp::{d_poly, d_poly_recursive};
use brauer_kl::klpoly::{boe_word, p_poly, p_poly_recursive, resolution_multiplicities};
use brauer_kl::sweep::{block_seed, blocks, verify_block, Block, BlockReport};
use brauer_kl::weights::{
    build_weight, down_set, fmt_pos, weight_to_shape, Family, Label, Shape, WeightDiagram,
    WeightError,
};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "brauer-kl",
    version,
    about = "Cap and curl diagram combinatorics for Brauer and walled Brauer algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the weight diagram of a shape.
    Weight {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// Draw the cap/curl diagram of a shape.
    Diagram {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// d_λμ(q), directly and by recursion.
    Dpoly {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// p_λμ(q), directly and by recursion.
    Ppoly {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// List the weights below a shape, minimal first.
    Block {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// d and p matrices over the weights below a shape.
    Matrix {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long, value_enum, default_value = "both")]
        which: Which,
    },
    /// Check the inverse identity and the recursions over a block or a sweep.
    #[command(group(ArgGroup::new("scope").required(true).args(["lambda", "max_size"])))]
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        max_size: Option<u32>,
        /// Random down-closed sub-ideals checked per block.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Multiplicities of the projectives in the resolution of a standard module.
    Resolution {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// The α/β word of a shape; with --mu, the word of μ at λ's cut-off.
    Word {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: Option<String>,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, allow_negative_numbers = true)]
    delta: i64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Resolution of a `◇` at the block's minimal weight.
    #[arg(long, value_enum, default_value = "down")]
    diamond: Diamond,
    #[arg(long)]
    allow_delta_zero: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Brauer,
    Walled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Tikz,
}

#[derive(Clone, Copy, ValueEnum)]
enum Diamond {
    #[value(alias = "v")]
    Down,
    #[value(alias = "^")]
    Up,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    D,
    P,
    Both,
}

enum Failure {
    Usage(String),
    Input(String),
    Mismatch(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Mismatch(_) => "mismatch",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Mismatch(m) | Failure::Io(m) => m,
        }
    }

    fn status(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            _ => 2,
        }
    }
}

/// Output of a successful command, plus a verification failure to report
/// after it has been written.
struct Emitted {
    body: String,
    failure: Option<Failure>,
}

impl From<String> for Emitted {
    fn from(body: String) -> Self {
        Emitted {
            body,
            failure: None,
        }
    }
}

struct Ctx {
    family: Family,
    delta: i64,
    format: Format,
    diamond: Label,
    allow_delta_zero: bool,
}

impl Ctx {
    fn new(c: &Common) -> Ctx {
        Ctx {
            family: match c.family {
                FamilyArg::Brauer => Family::Brauer,
                FamilyArg::Walled => Family::Walled,
            },
            delta: c.delta,
            format: c.format,
            diamond: match c.diamond {
                Diamond::Down => Label::Down,
                Diamond::Up => Label::Up,
            },
            allow_delta_zero: c.allow_delta_zero,
        }
    }

    fn weight(&self, shape: &str) -> Result<WeightDiagram, Failure> {
        let s = Shape::parse(self.family, shape).map_err(|e| Failure::Usage(e.to_string()))?;
        build_weight(&s, self.delta, self.diamond, self.allow_delta_zero).map_err(|e| match e {
            WeightError::DeltaZero => Failure::Usage("delta = 0 needs --allow-delta-zero".into()),
            e => Failure::Usage(e.to_string()),
        })
    }

    fn formats(&self, allowed: &[Format], what: &str) -> Result<(), Failure> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "{what} does not support --format {}",
                format_name(self.format)
            )))
        }
    }

    fn tuple(&self, lambda: &WeightDiagram, mu: &WeightDiagram) -> String {
        format!(
            "(λ={}, μ={}, δ={}, family={})",
            shape_of(lambda),
            shape_of(mu),
            self.delta,
            self.family
        )
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Tikz => "tikz",
    }
}

fn shape_of(w: &WeightDiagram) -> String {
    weight_to_shape(w).map_or_else(|_| w.to_string(), |s| s.to_string())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn weight_json(w: &WeightDiagram) -> Value {
    json!({ "shape": shape_of(w), "weight": w })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_weight(ctx: &Ctx, lambda: &str) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json], "weight")?;
    let w = ctx.weight(lambda)?;
    let entries = w.entries(4);
    Ok(match ctx.format {
        Format::Json => pretty(&json!({
            "shape": shape_of(&w),
            "weight": w,
            "entries": entries.to_string(),
            "labels": w.to_string(),
        })),
        _ => format!("shape: {}\nentries: {entries}\nlabels: {w}\n", shape_of(&w)),
    }
    .into())
}

fn cmd_diagram(ctx: &Ctx, lambda: &str) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json, Format::Tikz], "diagram")?;
    let w = ctx.weight(lambda)?;
    let c = build_arc_diagram(&w);
    Ok(match ctx.format {
        Format::Json => {
            pretty(&json!({ "shape": shape_of(&w), "diagram": ArcDiagramJson::from(&c) }))
        }
        Format::Tikz => render_tikz(&c, &w),
        _ => render_ascii(&c, &w),
    }
    .into())
}

fn cmd_poly(ctx: &Ctx, lambda: &str, mu: &str, kind: char) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json], "dpoly/ppoly")?;
    let (l, m) = (ctx.weight(lambda)?, ctx.weight(mu)?);
    let poly_err = |e: brauer_kl::qpoly::QPolyError| Failure::Input(e.to_string());
    let (direct, recursive) = if kind == 'd' {
        (d_poly(&l, &m), d_poly_recursive(&l, &m))
    } else {
        (
            p_poly(&l, &m).map_err(poly_err)?,
            p_poly_recursive(&l, &m).map_err(poly_err)?,
        )
    };
    let ok = direct == recursive;
    let body = match ctx.format {
        Format::Json => pretty(&json!({
            "lambda": shape_of(&l),
            "mu": shape_of(&m),
            "direct": direct,
            "recursive": recursive,
            "match": ok,
        })),
        _ => format!(
            "{direct}\nrecursive: {recursive}, {}\n",
            if ok { "match" } else { "MISMATCH" }
        ),
    };
    let failure = (!ok).then(|| {
        Failure::Mismatch(format!(
            "{kind}: direct {direct} vs recursive {recursive} at {}",
            ctx.tuple(&l, &m)
        ))
    });
    Ok(Emitted { body, failure })
}

fn cmd_block(ctx: &Ctx, lambda: &str) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json, Format::Csv], "block")?;
    let ds = down_set(&ctx.weight(lambda)?);
    Ok(match ctx.format {
        Format::Json => pretty(&Value::Array(ds.iter().map(weight_json).collect())),
        Format::Csv => {
            let mut out = String::from("shape,labels\n");
            for w in &ds {
                let _ = writeln!(
                    out,
                    "{},{}",
                    csv_field(&shape_of(w)),
                    csv_field(&w.to_string())
                );
            }
            out
        }
        _ => ds
            .iter()
            .map(|w| format!("{}\t{w}\n", shape_of(w)))
            .collect(),
    }
    .into())
}

fn matrix_text(name: &str, m: &PolyMatrix, labels: &[String]) -> String {
    let cells: Vec<Vec<String>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .chain(labels)
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let label_width = labels.iter().map(|s| s.chars().count()).max().unwrap_or(1);
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let mut out = format!("{name} (rows λ, columns μ)\n");
    for (label, row) in labels.iter().zip(&cells) {
        let row: Vec<String> = row.iter().map(|c| pad(c, width)).collect();
        let _ = writeln!(
            out,
            "{}  {}",
            pad(label, label_width),
            row.join(" ").trim_end()
        );
    }
    out
}

fn cmd_matrix(ctx: &Ctx, lambda: &str, which: Which) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json, Format::Csv], "matrix")?;
    let ds = down_set(&ctx.weight(lambda)?);
    let labels: Vec<String> = ds.iter().map(shape_of).collect();
    let block_err = |e: brauer_kl::blockmatrix::BlockError| Failure::Input(e.to_string());
    let mut mats = Vec::new();
    if which != Which::P {
        mats.push(("d", d_matrix(&ds).map_err(block_err)?));
    }
    if which != Which::D {
        mats.push(("p", p_matrix(&ds).map_err(block_err)?));
    }
    Ok(match ctx.format {
        Format::Json => {
            let obj: serde_json::Map<String, Value> = mats
                .iter()
                .map(|(n, m)| (n.to_string(), m.to_json(&labels)))
                .collect();
            pretty(&Value::Object(obj))
        }
        Format::Csv => mats
            .iter()
            .map(|(_, m)| m.to_csv(&labels))
            .collect::<Vec<_>>()
            .join("\n"),
        _ => mats
            .iter()
            .map(|(n, m)| matrix_text(n, m, &labels))
            .collect::<Vec<_>>()
            .join("\n"),
    }
    .into())
}

fn cmd_verify(
    ctx: &Ctx,
    lambda: Option<&str>,
    max_size: Option<u32>,
    samples: usize,
) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json], "verify")?;
    if ctx.delta == 0 && !ctx.allow_delta_zero {
        return Err(Failure::Usage("delta = 0 needs --allow-delta-zero".into()));
    }
    let tasks: Vec<(Block, u64)> = match (lambda, max_size) {
        (Some(l), _) => {
            let w = ctx.weight(l)?;
            let shape = weight_to_shape(&w).map_err(|e| Failure::Input(e.to_string()))?;
            let block = Block {
                family: ctx.family,
                delta: ctx.delta,
                shapes: vec![shape],
                index: down_set(&w),
            };
            vec![(block, block_seed(ctx.family, ctx.delta, 0))]
        }
        (None, Some(n)) => blocks(ctx.family, ctx.delta, n, ctx.diamond)
            .map_err(|e| Failure::Usage(e.to_string()))?
            .into_iter()
            .enumerate()
            .map(|(k, b)| (b, block_seed(ctx.family, ctx.delta, k)))
            .collect(),
        (None, None) => return Err(Failure::Usage("pass --lambda or --max-size".into())),
    };
    let reports: Vec<BlockReport> = tasks
        .par_iter()
        .map(|(b, seed)| verify_block(b, samples, *seed))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let ok = reports.iter().all(BlockReport::ok);
    let weights: usize = reports.iter().map(|r| r.size).sum();
    let pairs: usize = reports.iter().map(|r| r.pairs_checked).sum();
    let ideals: usize = reports.iter().map(|r| r.ideals_checked).sum();
    let walls: usize = reports.iter().map(|r| r.wall_checks).sum();
    let body = match ctx.format {
        Format::Json => pretty(&json!({
            "family": ctx.family,
            "delta": ctx.delta,
            "ok": ok,
            "blocks": tasks.iter().zip(&reports).map(|((b, _), r)| json!({
                "shapes": b.shapes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "report": r,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = String::new();
            for ((b, _), r) in tasks.iter().zip(&reports) {
                for m in &r.mismatches {
                    let _ = writeln!(
                        out,
                        "{} failed in the block of {}: λ={} μ={} {}",
                        m.check, b.shapes[0], m.lambda, m.mu, m.detail
                    );
                }
            }
            let _ = writeln!(
                out,
                "{} δ={}: {} blocks, {weights} weights, {ideals} index sets, {pairs} pairs, {walls} wall checks: {}",
                ctx.family,
                ctx.delta,
                reports.len(),
                if ok { "ok" } else { "FAILED" }
            );
            out
        }
    };
    let failure = (!ok).then(|| {
        let first = reports
            .iter()
            .flat_map(|r| &r.mismatches)
            .next()
            .expect("a mismatch");
        Failure::Mismatch(format!(
            "{} at (λ={}, μ={}, δ={}, family={})",
            first.check, first.lambda, first.mu, ctx.delta, ctx.family
        ))
    });
    Ok(Emitted { body, failure })
}

fn cmd_resolution(ctx: &Ctx, lambda: &str) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json], "resolution")?;
    let w = ctx.weight(lambda)?;
    let layers = resolution_multiplicities(&w).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(match ctx.format {
        Format::Json => pretty(&Value::Array(
            layers
                .iter()
                .map(|layer| {
                    json!({
                        "degree": layer.degree,
                        "terms": layer.terms.iter().map(|(mu, k)| json!({
                            "shape": shape_of(mu),
                            "multiplicity": k,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )),
        _ => {
            let mut out = String::new();
            for layer in &layers {
                let terms: Vec<String> = layer
                    .terms
                    .iter()
                    .map(|(mu, k)| {
                        if *k == 1 {
                            format!("P{}", shape_of(mu))
                        } else {
                            format!("{k}P{}", shape_of(mu))
                        }
                    })
                    .collect();
                let sum = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                };
                let _ = writeln!(out, "degree {}: {sum}", layer.degree);
            }
            out
        }
    }
    .into())
}

fn cmd_word(ctx: &Ctx, lambda: &str, mu: Option<&str>) -> Result<Emitted, Failure> {
    ctx.formats(&[Format::Text, Format::Json], "word")?;
    let l = ctx.weight(lambda)?;
    let cutoff = build_arc_diagram(&l).rightmost_arc_vertex();
    let target = match mu {
        Some(m) => ctx.weight(m)?,
        None => l,
    };
    let word = boe_word(&target, cutoff);
    Ok(match ctx.format {
        Format::Json => pretty(&json!({
            "shape": shape_of(&target),
            "word": word.to_string(),
            "cutoff": cutoff.map(fmt_pos),
        })),
        _ => format!("{word}\n"),
    }
    .into())
}

fn run(cli: Cli) -> Result<Emitted, Failure> {
    let common = match &cli.command {
        Command::Weight { common, .. }
        | Command::Diagram { common, .. }
        | Command::Dpoly { common, .. }
        | Command::Ppoly { common, .. }
        | Command::Block { common, .. }
        | Command::Matrix { common, .. }
        | Command::Verify { common, .. }
        | Command::Resolution { common, .. }
        | Command::Word { common, .. } => common.clone(),
    };
    if let Some(n) = common.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let ctx = Ctx::new(&common);
    let emitted = match &cli.command {
        Command::Weight { lambda, .. } => cmd_weight(&ctx, lambda),
        Command::Diagram { lambda, .. } => cmd_diagram(&ctx, lambda),
        Command::Dpoly { lambda, mu, .. } => cmd_poly(&ctx, lambda, mu, 'd'),
        Command::Ppoly { lambda, mu, .. } => cmd_poly(&ctx, lambda, mu, 'p'),
        Command::Block { lambda, .. } => cmd_block(&ctx, lambda),
        Command::Matrix { lambda, which, .. } => cmd_matrix(&ctx, lambda, *which),
        Command::Verify {
            lambda,
            max_size,
            samples,
            ..
        } => cmd_verify(&ctx, lambda.as_deref(), *max_size, *samples),
        Command::Resolution { lambda, .. } => cmd_resolution(&ctx, lambda),
        Command::Word { lambda, mu, .. } => cmd_word(&ctx, lambda, mu.as_deref()),
    }?;
    match &common.out {
        Some(path) => std::fs::write(path, &emitted.body)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", emitted.body),
    }
    Ok(emitted)
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("error[{}]: {}", f.code(), f.message());
    ExitCode::from(f.status())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            let line = line.join(" ");
            return fail(&Failure::Usage(
                line.trim_start_matches("error: ").to_string(),
            ));
        }
    };
    match run(cli) {
        Ok(Emitted { failure: None, .. }) => ExitCode::SUCCESS,
        Ok(Emitted {
            failure: Some(f), ..
        })
        | Err(f) => fail(&f),
    }
}
