mod output;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use cantor_core::hausdorff::{trace, MapTrace};
use cantor_core::space_filling::{lebesgue_map, preimage, CURVE_DEPTH_LIMIT};
use cantor_core::verify::{run_suite, SuiteReport, VerifyConfig, SUITES};
use cantor_core::{
    approximation_gap, build_cover, cantor_iterate, difference_quotient, expand, f_extended, format_rational,
    limit_gap, membership, parse_rational, polygonal, sample_curve, svc_iterate, Base, CompactBoxSet, IntervalSet,
    Membership, Point, Rational,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{Field, Svg, Table};

#[derive(Parser)]
#[command(
    name = "cantor",
    version,
    about = "Exact Cantor-set constructions and plot-ready artifacts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add rounded `_rounded` companions to exact columns.
    #[arg(long)]
    decimals: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Intervals of the Cantor iterate C_n.
    Iterate {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Intervals of the Smith-Volterra-Cantor iterate SVC(m) at level n.
    Svc {
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide membership in C for a rational.
    Member {
        #[arg(long, value_parser = rational)]
        x: Rational,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Breakpoints of F_n, or F sampled at k/grid.
    Staircase {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long)]
        grid: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Largest grid gap between F_m and F_n (or F when --m is absent).
    Approx {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 19683)]
        grid: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Difference quotients of F at x for n = 0..=depth.
    Quotient {
        #[arg(long, value_parser = rational, default_value = "0")]
        x: Rational,
        #[arg(long, default_value_t = 15)]
        depth: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Planar Lebesgue curve sampled at j/3^depth.
    Curve2 {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spatial Lebesgue curve sampled at j/3^depth.
    Curve3 {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A point of C mapped onto the given point of the square or cube.
    Preimage {
        /// Comma-separated coordinates in [0, 1], e.g. 1/2,1/3.
        #[arg(long, value_parser = point)]
        point: Point,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Nested cover of a box set and traces of the map from C.
    Hausdorff {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Parameters in C; defaults to one preimage per leaf.
        #[arg(long = "x", value_parser = rational)]
        xs: Vec<Rational>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run property suites.
    Verify {
        /// Comma-separated suite names; all when absent.
        #[arg(long, value_delimiter = ',')]
        select: Vec<String>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Write the report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<Point, String> {
    s.split(',')
        .map(|c| rational(c.trim()))
        .collect::<Result<_, _>>()
        .map(Point::new)
}

fn q(r: &Rational) -> String {
    format_rational(r)
}

fn write_artifact(out: &OutputArgs, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn point_json(p: &Point) -> Value {
    json!(p.coords().iter().map(q).collect::<Vec<_>>())
}

fn render_table(
    table: &Table,
    meta: Value,
    out: &OutputArgs,
    svg: impl FnOnce() -> anyhow::Result<String>,
) -> anyhow::Result<()> {
    let text = match out.format {
        Format::Csv => table.to_csv(out.decimals),
        Format::Json => {
            let mut doc = meta;
            doc["records"] = table.to_json_rows(out.decimals);
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Svg => svg()?,
    };
    write_artifact(out, &text)
}

fn interval_table(set: &IntervalSet) -> Table {
    let mut t = Table::new(&["index", "left", "right", "length"]);
    for (i, iv) in set.intervals().iter().enumerate() {
        t.push(vec![
            i.into(),
            (&iv.left).into(),
            (&iv.right).into(),
            iv.length().into(),
        ]);
    }
    t
}

/// Stacked bars, one row per level.
fn bars_svg(levels: &[IntervalSet]) -> String {
    let mut svg = Svg::new();
    let rows = levels.len() as i64;
    for (n, set) in levels.iter().enumerate() {
        let top = cantor_core::ratio(rows - n as i64, rows);
        let bottom = &top - cantor_core::ratio(1, 2 * rows);
        for iv in set.intervals() {
            svg.rect(&iv.left, &bottom, &iv.right, &top, "black");
        }
    }
    svg.finish()
}

fn cmd_iterate(sets: Vec<IntervalSet>, meta: Value, out: &OutputArgs) -> anyhow::Result<()> {
    let table = interval_table(sets.last().expect("level 0 is always present"));
    render_table(&table, meta, out, || Ok(bars_svg(&sets)))
}

fn cmd_member(x: &Rational, out: &OutputArgs) -> anyhow::Result<()> {
    let m = membership(x)?;
    let ternary = expand(x, Base::Ternary)?.to_string();
    let mut t = Table::new(&["x", "ternary", "in_c", "removed_level", "gap_left", "gap_right"]);
    match &m {
        Membership::InC => t.push(vec![
            x.into(),
            ternary.into(),
            true.into(),
            "".into(),
            "".into(),
            "".into(),
        ]),
        Membership::RemovedAt(r) => t.push(vec![
            x.into(),
            ternary.into(),
            false.into(),
            r.level.into(),
            (&r.a).into(),
            (&r.b).into(),
        ]),
    }
    render_table(&t, json!({"command": "member"}), out, || {
        bail!("member has no svg rendering")
    })
}

fn cmd_staircase(depth: u32, grid: Option<u64>, out: &OutputArgs) -> anyhow::Result<()> {
    let (table, points) = match grid {
        Some(0) => bail!("--grid must be positive"),
        Some(g) => {
            let mut t = Table::new(&["x", "f"]);
            let mut pts = Vec::new();
            for k in 0..=g {
                let x = cantor_core::ratio(k as i64, g as i64);
                let y = f_extended(&x)?.value;
                t.push(vec![(&x).into(), (&y).into()]);
                pts.push((x, y));
            }
            (t, pts)
        }
        None => {
            let approx = polygonal(depth)?;
            let mut t = Table::new(&["x", "y"]);
            for (x, y) in approx.breakpoints() {
                t.push(vec![x.into(), y.into()]);
            }
            (t, approx.breakpoints().to_vec())
        }
    };
    let meta = json!({"command": "staircase", "depth": depth, "grid": grid});
    render_table(&table, meta, out, || {
        let mut svg = Svg::new();
        svg.polyline(&points, "black");
        Ok(svg.finish())
    })
}

fn cmd_approx(m: Option<u32>, depth: u32, grid: u64, out: &OutputArgs) -> anyhow::Result<()> {
    let report = match m {
        Some(m) => approximation_gap(m, depth, grid)?,
        None => limit_gap(depth, grid)?,
    };
    let mut t = Table::new(&["coarse", "fine", "grid", "max_gap", "witness", "bound", "within_bound"]);
    let fine: Field = if m.is_some() {
        report.fine.into()
    } else {
        "limit".into()
    };
    t.push(vec![
        report.coarse.into(),
        fine,
        report.grid.into(),
        (&report.max_gap).into(),
        (&report.witness).into(),
        (&report.bound).into(),
        report.within_bound().into(),
    ]);
    render_table(&t, json!({"command": "approx"}), out, || {
        bail!("approx has no svg rendering")
    })
}

fn cmd_quotient(x: &Rational, depth: u32, out: &OutputArgs) -> anyhow::Result<()> {
    let mut t = Table::new(&["n", "x_n", "quotient", "ratio"]);
    let mut prev: Option<Rational> = None;
    for n in 0..=depth {
        let d = difference_quotient(x, n)?;
        let ratio: Field = match &prev {
            Some(p) => (&d.quotient / p).into(),
            None => "".into(),
        };
        t.push(vec![n.into(), (&d.x_n).into(), (&d.quotient).into(), ratio]);
        prev = Some(d.quotient);
    }
    let meta = json!({"command": "quotient", "x": q(x)});
    render_table(&t, meta, out, || bail!("quotient has no svg rendering"))
}

fn cmd_curve(dim: usize, depth: u32, stride: usize, out: &OutputArgs) -> anyhow::Result<()> {
    if depth > CURVE_DEPTH_LIMIT {
        bail!("--depth {depth} exceeds the curve limit {CURVE_DEPTH_LIMIT}");
    }
    let samples = sample_curve(dim, depth, stride)?;
    let axes = ["x", "y", "z"];
    let mut columns = vec!["parameter", "on_cantor"];
    columns.extend(&axes[..dim]);
    let mut t = Table::new(&columns);
    for s in &samples {
        let mut row: Vec<Field> = vec![(&s.parameter).into(), s.on_cantor.into()];
        row.extend(s.point.coords().iter().map(Field::from));
        t.push(row);
    }
    let meta = json!({"command": format!("curve{dim}"), "depth": depth, "stride": stride});
    render_table(&t, meta, out, || {
        if dim != 2 {
            bail!("svg output is only drawn for the planar curve");
        }
        let mut svg = Svg::new();
        let pts: Vec<_> = samples
            .iter()
            .map(|s| (s.point.coords()[0].clone(), s.point.coords()[1].clone()))
            .collect();
        svg.polyline(&pts, "black");
        Ok(svg.finish())
    })
}

fn cmd_preimage(p: &Point, out: &OutputArgs) -> anyhow::Result<()> {
    let x = preimage(p)?;
    let image = lebesgue_map(&x, p.dim())?;
    let mut t = Table::new(&["point", "parameter", "ternary", "image_matches"]);
    t.push(vec![
        p.to_string().into(),
        (&x).into(),
        expand(&x, Base::Ternary)?.to_string().into(),
        (image == *p).into(),
    ]);
    render_table(&t, json!({"command": "preimage", "point": point_json(p)}), out, || {
        bail!("preimage has no svg rendering")
    })
}

fn cmd_hausdorff(input: &PathBuf, depth: u32, xs: &[Rational], out: &OutputArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let k = CompactBoxSet::parse(&text).with_context(|| format!("in {}", input.display()))?;
    let cover = build_cover(&k, depth)?;
    let params: Vec<Rational> = if xs.is_empty() {
        (0..cover.leaves().len())
            .map(|l| cover.leaf_preimage(l))
            .collect::<Result<_, _>>()?
    } else {
        xs.to_vec()
    };
    let traces: Vec<MapTrace> = params.iter().map(|x| trace(&cover, x)).collect::<Result<_, _>>()?;
    let block_text = |t: &MapTrace| {
        t.blocks
            .iter()
            .map(|b| b.iter().map(|d| char::from(b'0' + d)).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    };
    let mut columns = vec!["x", "blocks", "indices", "leaf"];
    let axis_names: Vec<String> = (1..=k.dim()).map(|a| format!("p{a}")).collect();
    columns.extend(axis_names.iter().map(String::as_str));
    let mut table = Table::new(&columns);
    for t in &traces {
        let indices = t.indices.iter().map(u64::to_string).collect::<Vec<_>>().join("|");
        let mut row: Vec<Field> = vec![(&t.x).into(), block_text(t).into(), indices.into(), t.leaf.into()];
        row.extend(t.point.coords().iter().map(Field::from));
        table.push(row);
    }
    match out.format {
        Format::Csv => write_artifact(out, &table.to_csv(out.decimals)),
        Format::Json => {
            let levels: Vec<Value> = cover
                .levels()
                .iter()
                .enumerate()
                .map(|(i, level)| {
                    json!({
                        "level": i + 1,
                        "radius": q(&level.radius),
                        "block_width": level.block_width,
                        "pieces": level.pieces.iter().map(|p| json!({
                            "center": point_json(&p.center),
                            "parent": p.parent,
                            "boxes": p.set.boxes().iter().map(|b| json!({
                                "lo": b.lo().iter().map(q).collect::<Vec<_>>(),
                                "hi": b.hi().iter().map(q).collect::<Vec<_>>(),
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let traces_json: Vec<Value> = traces
                .iter()
                .map(|t| {
                    json!({
                        "x": q(&t.x),
                        "blocks": t.blocks,
                        "indices": t.indices,
                        "leaf": t.leaf,
                        "point": point_json(&t.point),
                    })
                })
                .collect();
            let doc = json!({
                "command": "hausdorff",
                "dimension": k.dim(),
                "depth": depth,
                "block_widths": cover.block_widths(),
                "levels": levels,
                "traces": traces_json,
            });
            write_artifact(out, &(serde_json::to_string_pretty(&doc)? + "\n"))
        }
        Format::Svg => {
            if k.dim() != 2 {
                bail!("svg output is only drawn for planar sets");
            }
            let mut svg = Svg::new();
            for piece in cover.leaves() {
                for b in piece.set.boxes() {
                    svg.rect(&b.lo()[0], &b.lo()[1], &b.hi()[0], &b.hi()[1], "none");
                }
            }
            for t in &traces {
                svg.dot(&t.point.coords()[0], &t.point.coords()[1], "red");
            }
            write_artifact(out, &svg.finish())
        }
    }
}

fn cmd_verify(select: &[String], config: &VerifyConfig, out: Option<&PathBuf>) -> anyhow::Result<bool> {
    let names: Vec<&str> = if select.is_empty() {
        SUITES.to_vec()
    } else {
        select.iter().map(String::as_str).collect()
    };
    let reports: Vec<SuiteReport> = names.iter().map(|n| run_suite(n, config)).collect::<Result<_, _>>()?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    let passed = reports.iter().all(SuiteReport::passed);
    text.push_str(if passed {
        "all suites passed\n"
    } else {
        "some suites failed\n"
    });
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(passed)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Iterate { depth, out } => {
            let sets = (0..=depth).map(cantor_iterate).collect::<Result<Vec<_>, _>>()?;
            cmd_iterate(sets, json!({"command": "iterate", "depth": depth}), &out)?;
        }
        Command::Svc { m, depth, out } => {
            let sets = (0..=depth).map(|n| svc_iterate(m, n)).collect::<Result<Vec<_>, _>>()?;
            cmd_iterate(sets, json!({"command": "svc", "m": m, "depth": depth}), &out)?;
        }
        Command::Member { x, out } => cmd_member(&x, &out)?,
        Command::Staircase { depth, grid, out } => cmd_staircase(depth, grid, &out)?,
        Command::Approx { m, depth, grid, out } => cmd_approx(m, depth, grid, &out)?,
        Command::Quotient { x, depth, out } => cmd_quotient(&x, depth, &out)?,
        Command::Curve2 { depth, stride, out } => cmd_curve(2, depth, stride, &out)?,
        Command::Curve3 { depth, stride, out } => cmd_curve(3, depth, stride, &out)?,
        Command::Preimage { point, out } => cmd_preimage(&point, &out)?,
        Command::Hausdorff { input, depth, xs, out } => cmd_hausdorff(&input, depth, &xs, &out)?,
        Command::Verify {
            select,
            depth,
            grid,
            seed,
            out,
        } => {
            if let Some(bad) = select.iter().find(|s| !SUITES.contains(&s.as_str())) {
                use clap::CommandFactory;
                Cli::command()
                    .error(
                        clap::error::ErrorKind::InvalidValue,
                        format!("unknown suite {bad:?}; expected one of {}", SUITES.join(", ")),
                    )
                    .exit();
            }
            return cmd_verify(&select, &VerifyConfig { depth, grid, seed }, out.as_ref());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
