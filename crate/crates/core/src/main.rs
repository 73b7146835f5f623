use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use thetafam::association::{pair_check_patches, AssociationError};
use thetafam::checks::{format_point, run_checks, CheckError};
use thetafam::export::{write_csv, write_obj};
use thetafam::geometry::{planar_points, PLANAR_TOLERANCE};
use thetafam::scenario::{ConfigError, ExampleId, OutputKind, ScenarioConfig};
use thetafam::weierstrass::{SampledSurface, SurfaceData, SurfaceError};

type Writer = fn(&SampledSurface, &mut BufWriter<File>) -> std::io::Result<()>;

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_REGULARITY: u8 = 3;
const EXIT_QUADRATURE: u8 = 4;

#[derive(Parser)]
#[command(name = "thetafam", version, about = "Sample and validate theta-families of minimal surfaces in Minkowski 4-space")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample F(theta; w) on a grid and write OBJ/CSV files.
    Sample {
        #[command(flatten)]
        source: Source,
        /// Slice to sample (default: every theta of the scenario).
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run every invariant check; JSON lines on stdout, summary on stderr.
    Check {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// List the zeros of a' (planar points).
    Planar {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Check the pair relations between F(theta_x) of one scenario and F(theta_y) of another.
    ///
    /// Give two sources: `--config` paths are taken first, then `--example` ids.
    Pair {
        #[arg(long)]
        config: Vec<PathBuf>,
        #[arg(long)]
        example: Vec<ExampleId>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta_x: f64,
        #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
        theta_y: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bundled example scenarios.
    Examples {
        #[command(subcommand)]
        command: ExamplesCommand,
    },
}

#[derive(Subcommand)]
enum ExamplesCommand {
    /// Print the bundled scenarios.
    List,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Scenario file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled scenario: ex36, ex37 or ex38.
    #[arg(long)]
    example: Option<ExampleId>,
}

#[derive(Args)]
struct GridArgs {
    /// Grid size as NUxNV (default: from the scenario).
    #[arg(long)]
    grid: Option<GridSize>,
    /// Finite-difference step (default: from the scenario).
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct GridSize(usize, usize);

impl FromStr for GridSize {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NUxNV, got '{s}'"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
        let (nu, nv) = (parse(a)?, parse(b)?);
        if nu < 2 || nv < 2 {
            return Err(format!("grid must be at least 2x2, got {nu}x{nv}"));
        }
        Ok(GridSize(nu, nv))
    }
}

impl GridArgs {
    fn size(&self, cfg: &ScenarioConfig) -> (usize, usize) {
        self.grid.map(|g| (g.0, g.1)).unwrap_or((cfg.grid[0], cfg.grid[1]))
    }

    fn step(&self, cfg: &ScenarioConfig) -> Result<f64> {
        let h = self.h.unwrap_or_else(|| cfg.fd_step());
        if !(h > 0.0 && h.is_finite()) {
            return Err(ConfigError::Invalid(format!("--h must be positive, got {h}")).into());
        }
        Ok(h)
    }
}

impl Source {
    fn load(&self) -> Result<ScenarioConfig> {
        match (&self.config, self.example) {
            (Some(path), _) => load_config(path),
            (None, Some(id)) => Ok(id.config()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

fn load_config(path: &Path) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig::load(path)?)
}

fn validated(cfg: &ScenarioConfig) -> Result<SurfaceData> {
    let sd = cfg.surface_data()?;
    sd.validate_regularity(thetafam::weierstrass::REGULARITY_PROBE, cfg.tolerances.regularity)
        .with_context(|| format!("scenario '{}'", cfg.display_name()))?;
    Ok(sd)
}

fn theta_tag(theta: f64) -> String {
    format!("{theta:.6}")
}

fn cmd_sample(source: &Source, theta: Option<f64>, grid: &GridArgs, out: &Path) -> Result<u8> {
    let cfg = source.load()?;
    let (nu, nv) = grid.size(&cfg);
    let h = grid.step(&cfg)?;
    let sd = validated(&cfg)?;
    let thetas = theta.map(|t| vec![t]).unwrap_or_else(|| cfg.thetas.clone());
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for theta in thetas {
        let surface = sd.sample_grid_in(theta, sd.domain, nu, nv, h)?;
        for kind in &cfg.outputs {
            let (ext, write): (&str, Writer) = match kind {
                OutputKind::Obj => ("obj", write_obj),
                OutputKind::Csv => ("csv", write_csv),
            };
            let path = out.join(format!("{}_theta{}.{ext}", cfg.display_name(), theta_tag(theta)));
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write(&surface, &mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", path.display()))?;
            println!("{}", path.display());
        }
    }
    Ok(0)
}

fn cmd_check(source: &Source, grid: &GridArgs) -> Result<u8> {
    let cfg = source.load()?;
    let (nu, nv) = grid.size(&cfg);
    let h = grid.step(&cfg)?;
    let sd = validated(&cfg)?;
    let report = run_checks(&cfg, &sd, nu, nv, h)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for line in &report.lines {
        writeln!(out, "{}", line.to_json())?;
        eprintln!("{}", line.human());
    }
    if report.all_pass() {
        eprintln!("all {} checks passed", report.lines.len());
        Ok(0)
    } else {
        let failed: Vec<_> = report.failures().map(|l| l.check.as_str()).collect();
        eprintln!("failed: {}", failed.join(", "));
        Ok(EXIT_INVARIANT)
    }
}

fn cmd_planar(source: &Source, grid: &GridArgs) -> Result<u8> {
    let cfg = source.load()?;
    let (nu, nv) = grid.size(&cfg);
    // planar points are a property of a alone; the immersion need not be regular here
    let scan = planar_points(&cfg.a()?, cfg.planar_rect(), nu, nv, PLANAR_TOLERANCE).map_err(SurfaceError::from)?;
    if scan.identically_zero {
        println!("fully planar: a' vanishes identically, K = 0");
    } else if scan.roots.is_empty() {
        println!("no planar points");
    } else {
        for r in &scan.roots {
            let tag = if r.converged { "" } else { "  (unrefined)" };
            println!("{}  |a'| = {:.3e}{tag}", format_point(r.w), r.abs_da);
        }
    }
    Ok(0)
}

fn cmd_pair(configs: &[PathBuf], examples: &[ExampleId], theta_x: f64, theta_y: f64, grid: &GridArgs) -> Result<u8> {
    let mut cfgs = configs.iter().map(|p| load_config(p)).collect::<Result<Vec<_>>>()?;
    cfgs.extend(examples.iter().map(|id| id.config()));
    let [cx, cy]: [ScenarioConfig; 2] =
        cfgs.try_into().map_err(|v: Vec<_>| ConfigError::Invalid(format!("pair needs exactly two scenarios, got {}", v.len())))?;
    if grid.grid.is_none() && cx.grid != cy.grid {
        return Err(AssociationError::GridMismatch { detail: "scenarios use different grids; pass --grid" }.into());
    }
    let (nu, nv) = grid.size(&cx);
    let h = grid.step(&cx)?;
    let (sx, sy) = (validated(&cx)?, validated(&cy)?);
    let region = sx
        .domain
        .intersect(&sy.domain)
        .map(|r| r.inset(h))
        .filter(|r| r.is_nondegenerate())
        .ok_or(AssociationError::GridMismatch { detail: "domains do not overlap" })?;
    let report = pair_check_patches(&sx, theta_x, &sy, theta_y, region, nu, nv, h, cx.tolerances.pair)?;
    println!("X = {} at theta {theta_x}, Y = {} at theta {theta_y}", cx.display_name(), cy.display_name());
    println!("grid {nu}x{nv} over [{}, {}] x [{}, {}], h = {h}", region.u_min, region.u_max, region.v_min, region.v_max);
    let names = ["Y3_w - X0_w", "Y1_w + i X2_w", "Y2_w - i X1_w"];
    for (name, r) in names.iter().zip(report.max_residuals) {
        println!("  {name:<14} {r:.3e}");
    }
    println!("tolerance {:.1e}", report.tolerance);
    println!("verdict: {}", report.verdict);
    Ok(if report.verdict { 0 } else { EXIT_INVARIANT })
}

fn cmd_examples_list() -> Result<u8> {
    for id in ExampleId::ALL {
        let cfg = id.config();
        let d = cfg.domain;
        println!(
            "{id}  a = {}  mu = {}  domain u in [{}, {}], v in [{}, {}]",
            cfg.a_expr, cfg.mu_expr, d[0], d[1], d[2], d[3]
        );
    }
    Ok(0)
}

fn surface_code(e: &SurfaceError) -> u8 {
    match e {
        SurfaceError::Quadrature(_) => EXIT_QUADRATURE,
        SurfaceError::Regularity { .. } | SurfaceError::Eval(_) | SurfaceError::Geometry(_) => EXIT_REGULARITY,
        SurfaceError::BaseOutsideDomain { .. }
        | SurfaceError::DegenerateDomain
        | SurfaceError::OutsideDomain { .. }
        | SurfaceError::GridTooSmall { .. } => EXIT_CONFIG,
    }
}

fn association_code(e: &AssociationError) -> u8 {
    match e {
        AssociationError::GridMismatch { .. } => EXIT_CONFIG,
        AssociationError::Surface(s) => surface_code(s),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<SurfaceError>() {
            return surface_code(e);
        }
        if let Some(e) = cause.downcast_ref::<AssociationError>() {
            return association_code(e);
        }
        if let Some(e) = cause.downcast_ref::<CheckError>() {
            return match e {
                CheckError::Surface(s) => surface_code(s),
                CheckError::Association(a) => association_code(a),
            };
        }
        if let Some(e) = cause.downcast_ref::<ConfigError>() {
            return match e {
                ConfigError::Surface(s) => surface_code(s),
                _ => EXIT_CONFIG,
            };
        }
    }
    EXIT_INVARIANT
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!(ConfigError::Invalid("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!(e))?;
    }
    match &cli.command {
        Command::Sample { source, theta, grid, out } => cmd_sample(source, *theta, grid, out),
        Command::Check { source, grid } => cmd_check(source, grid),
        Command::Planar { source, grid } => cmd_planar(source, grid),
        Command::Pair { config, example, theta_x, theta_y, grid } => cmd_pair(config, example, *theta_x, *theta_y, grid),
        Command::Examples { command: ExamplesCommand::List } => cmd_examples_list(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
