//! Command-line interface. Exit codes: 0 on success, 1 when the inputs
//! fail a mathematical validation, 2 on usage errors (bad flags, bad
//! expression syntax). Diagnostics go to the error stream.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use weier4_core::canonize::{to_canonical, CanonicalType};
use weier4_core::correspond::{
    build_r3, equivalent_pairs, eval_patch_r3, integrate_phi3, natural_residual_r3,
    natural_residual_r4, nu_r3, FieldRole, ScalarField,
};
use weier4_core::curvature::{
    curvatures_closed_form, numu_closed_form, CanonicalKind, ClosedFormKind,
};
use weier4_core::geometry::{eval_patch, integrate_phi, GridSpec, SurfacePatch};
use weier4_core::weierstrass::{build_canonical, Flavor, HoloPair};
use weier4_core::DEFAULT_ORDER;

use crate::config::Config;
use crate::error::{AppError, AppResult};
use crate::export::{
    format_from_path, parse_projection, write_csv, write_curvature_json, write_obj, write_ply,
    write_ply3, Format, Projection,
};
use crate::expr::parse_holo;
use crate::family::{
    compare_mod_translation_sign, family_m, family_pair, verify_family, FamilyParams,
};
use crate::pipeline::{
    build_surface, curvature_at, curvature_grid, isotropy_violation, BuildKind, CurvatureNode,
    ExprSources,
};

/// Conformality gate for built surfaces: the sampled `|Phi^2|` defect
/// must stay at rounding level.
const ISOTROPY_GATE: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "weier4",
    about = "Minimal surfaces in R^4 from Weierstrass-type representations",
    long_about = "Builds minimal surfaces in R^4 from holomorphic generating data, \
                  samples their curvature invariants, canonizes parameterizations, \
                  and runs verification suites. Expressions are developed as power \
                  series around 0."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a surface patch and export it (ply/obj/csv/curvature json).
    Build(BuildArgs),
    /// Curvature invariants at a point (--at) or over a grid (--out .json).
    Curvature(CurvatureArgs),
    /// Reparameterize a surface into canonical coordinates.
    Canonize(CanonizeArgs),
    /// Finite-difference residuals of the natural curvature equations.
    NaturalCheck(NaturalCheckArgs),
    /// Evaluate the deformation family M(k1, k2; alpha) and export it.
    Family(FamilyArgs),
    /// Check that family members share their curvature fields.
    VerifyFamily(VerifyFamilyArgs),
    /// Decide whether two g-pairs generate congruent surfaces.
    EquivCheck(EquivCheckArgs),
    /// Minimal surfaces in R^3 from a single meromorphic g.
    R3(R3Args),
}

#[derive(Args, Default)]
struct CommonFlags {
    /// Optional key=value file supplying defaults for the long flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Print conformality defects and cross-check reports.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Default)]
struct ExprFlags {
    /// First g-expression (flavor g), e.g. "exp(-z)".
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    g1: Option<String>,
    /// Second g-expression.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    g2: Option<String>,
    /// Scaling function for the non-canonical kinds (default "1").
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    f: Option<String>,
    /// First h-expression (flavor h).
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    h1: Option<String>,
    /// Second h-expression.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    h2: Option<String>,
    /// First w-expression (flavor w).
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    w1: Option<String>,
    /// Second w-expression.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    w2: Option<String>,
    /// Constructor: w1|w2|w5|w6|canonical-g|canonical-w|canonical-h.
    /// Defaults to the canonical kind matching the given pair.
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,
    /// Series truncation order (default 24).
    #[arg(long, value_name = "N")]
    order: Option<usize>,
}

#[derive(Args, Default)]
struct GridFlags {
    /// Parameter range lo:hi:h for both axes (v overridden by --grid-v).
    #[arg(long, value_name = "LO:HI:H", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Separate v-axis range lo:hi:h.
    #[arg(long = "grid-v", value_name = "LO:HI:H", allow_hyphen_values = true)]
    grid_v: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    exprs: ExprFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Output path; the extension picks the format.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Coordinates kept by mesh formats: xyz|xyw|xzw|yzw|none.
    #[arg(long, value_name = "PROJ")]
    project: Option<String>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    exprs: ExprFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Parameter point "u,v" for a single sample.
    #[arg(long, value_name = "U,V", allow_hyphen_values = true)]
    at: Option<String>,
    /// Output path for a grid report (curvature json).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct CanonizeArgs {
    #[command(flatten)]
    exprs: ExprFlags,
    /// Canonical type to aim for: first (+1) or second (-1).
    #[arg(long, value_name = "TYPE")]
    target: Option<String>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct NaturalCheckArgs {
    #[command(flatten)]
    exprs: ExprFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Existing nu field file to check (R^3 equation).
    #[arg(long, value_name = "PATH")]
    nu: Option<PathBuf>,
    /// Existing K field file (R^4 system, with --kappa).
    #[arg(long, value_name = "PATH")]
    k: Option<PathBuf>,
    /// Existing kappa field file (R^4 system, with --k).
    #[arg(long, value_name = "PATH")]
    kappa: Option<PathBuf>,
    /// Write the sampled nu field here.
    #[arg(long = "save-nu", value_name = "PATH")]
    save_nu: Option<PathBuf>,
    /// Write the sampled K field here.
    #[arg(long = "save-k", value_name = "PATH")]
    save_k: Option<PathBuf>,
    /// Write the sampled kappa field here.
    #[arg(long = "save-kappa", value_name = "PATH")]
    save_kappa: Option<PathBuf>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct FamilyArgs {
    /// First exponent rate (positive, != k2).
    #[arg(long, value_name = "K1", allow_hyphen_values = true)]
    k1: Option<f64>,
    /// Second exponent rate (positive, != k1).
    #[arg(long, value_name = "K2", allow_hyphen_values = true)]
    k2: Option<f64>,
    /// Deformation angle in [0, pi/4].
    #[arg(long, value_name = "ALPHA", allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[command(flatten)]
    grid: GridFlags,
    /// Series truncation order for cross-checks (default 24).
    #[arg(long, value_name = "N")]
    order: Option<usize>,
    /// Output path; the extension picks the format.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Coordinates kept by mesh formats: xyz|xyw|xzw|yzw|none.
    #[arg(long, value_name = "PROJ")]
    project: Option<String>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct VerifyFamilyArgs {
    /// First exponent rate (positive, != k2).
    #[arg(long, value_name = "K1", allow_hyphen_values = true)]
    k1: Option<f64>,
    /// Second exponent rate (positive, != k1).
    #[arg(long, value_name = "K2", allow_hyphen_values = true)]
    k2: Option<f64>,
    /// Comma-separated deformation angles, each in [0, pi/4].
    #[arg(long, value_name = "A,B,...", allow_hyphen_values = true)]
    alphas: Option<String>,
    #[command(flatten)]
    grid: GridFlags,
    /// Series truncation order (default 24).
    #[arg(long, value_name = "N")]
    order: Option<usize>,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct EquivCheckArgs {
    /// First pair: --g1/--g2; second pair: --other-g1/--other-g2.
    #[command(flatten)]
    exprs: ExprFlags,
    #[arg(long = "other-g1", value_name = "EXPR", allow_hyphen_values = true)]
    other_g1: Option<String>,
    #[arg(long = "other-g2", value_name = "EXPR", allow_hyphen_values = true)]
    other_g2: Option<String>,
    #[command(flatten)]
    grid: GridFlags,
    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args)]
struct R3Args {
    /// The meromorphic g-expression (passed as --g1).
    #[command(flatten)]
    exprs: ExprFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Parameter point "u,v"; prints nu there instead of exporting.
    #[arg(long, value_name = "U,V", allow_hyphen_values = true)]
    at: Option<String>,
    /// Output path; the extension picks the format.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: CommonFlags,
}

/// Run the CLI against stdout.
pub fn cli_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = std::io::stdout();
    cli_run_to(argv, &mut stdout)
}

/// Run the CLI, sending the report stream to `out` (for tests).
pub fn cli_run_to<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        // a reader closing the pipe early (e.g. `weier4 ... | head`) is not an error
        Err(AppError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> AppResult<i32> {
    match cli.command {
        Command::Build(args) => run_build(args, out),
        Command::Curvature(args) => run_curvature(args, out),
        Command::Canonize(args) => run_canonize(args, out),
        Command::NaturalCheck(args) => run_natural_check(args, out),
        Command::Family(args) => run_family(args, out),
        Command::VerifyFamily(args) => run_verify_family(args, out),
        Command::EquivCheck(args) => run_equiv_check(args, out),
        Command::R3(args) => run_r3(args, out),
    }
}

// ---------------------------------------------------------------- helpers

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_config(common: &CommonFlags) -> AppResult<Config> {
    match &common.config {
        Some(path) => Config::load(path),
        None => Ok(Config::empty()),
    }
}

fn parse_float(key: &str) -> impl Fn(&str) -> AppResult<f64> + '_ {
    move |s| {
        s.parse()
            .map_err(|_| AppError::Usage(format!("--{key}: expected a number, got `{s}`")))
    }
}

fn resolve_f64(cfg: &Config, cli: Option<f64>, key: &str) -> AppResult<Option<f64>> {
    cfg.merge_parsed(cli, key, parse_float(key))
}

fn require<T>(value: Option<T>, what: &str) -> AppResult<T> {
    value.ok_or_else(|| AppError::Usage(format!("missing required {what}")))
}

fn resolve_order(cfg: &Config, cli: Option<usize>) -> AppResult<usize> {
    let order = cfg.merge_parsed(cli, "order", |s| {
        s.parse()
            .map_err(|_| AppError::Usage(format!("--order: expected an integer, got `{s}`")))
    })?;
    let order = order.unwrap_or(DEFAULT_ORDER);
    if order == 0 {
        return Err(AppError::Usage("--order must be at least 1".into()));
    }
    Ok(order)
}

fn resolve_exprs(
    flags: &ExprFlags,
    cfg: &Config,
) -> AppResult<(Option<BuildKind>, ExprSources, usize)> {
    let kind = match cfg.merge_string(flags.kind.clone(), "kind") {
        Some(name) => Some(BuildKind::parse(&name)?),
        None => None,
    };
    let sources = ExprSources {
        f: cfg.merge_string(flags.f.clone(), "f"),
        g1: cfg.merge_string(flags.g1.clone(), "g1"),
        g2: cfg.merge_string(flags.g2.clone(), "g2"),
        h1: cfg.merge_string(flags.h1.clone(), "h1"),
        h2: cfg.merge_string(flags.h2.clone(), "h2"),
        w1: cfg.merge_string(flags.w1.clone(), "w1"),
        w2: cfg.merge_string(flags.w2.clone(), "w2"),
    };
    let order = resolve_order(cfg, flags.order)?;
    Ok((kind, sources, order))
}

fn parse_range(s: &str, flag: &str) -> AppResult<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Usage(format!(
            "--{flag}: expected lo:hi:h, got `{s}`"
        )));
    }
    let num = |p: &str| -> AppResult<f64> {
        p.parse()
            .map_err(|_| AppError::Usage(format!("--{flag}: bad number `{p}` in `{s}`")))
    };
    Ok((num(parts[0])?, num(parts[1])?, num(parts[2])?))
}

fn resolve_grid(flags: &GridFlags, cfg: &Config) -> AppResult<Option<GridSpec>> {
    let grid = cfg.merge_string(flags.grid.clone(), "grid");
    let grid_v = cfg.merge_string(flags.grid_v.clone(), "grid-v");
    let Some(u_range) = grid else {
        if grid_v.is_some() {
            return Err(AppError::Usage("--grid-v requires --grid".into()));
        }
        return Ok(None);
    };
    let (u_lo, u_hi, h) = parse_range(&u_range, "grid")?;
    let (v_lo, v_hi, hv) = match grid_v {
        Some(v_range) => parse_range(&v_range, "grid-v")?,
        None => (u_lo, u_hi, h),
    };
    if hv != h {
        return Err(AppError::Usage(
            "--grid and --grid-v must use the same spacing".into(),
        ));
    }
    GridSpec::from_bounds(u_lo, u_hi, v_lo, v_hi, h)
        .map(Some)
        .map_err(AppError::Core)
}

fn parse_at(s: &str) -> AppResult<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(AppError::Usage(format!("--at: expected u,v, got `{s}`")));
    }
    let num = |p: &str| -> AppResult<f64> {
        p.trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("--at: bad number `{p}`")))
    };
    Ok(Complex64::new(num(parts[0])?, num(parts[1])?))
}

fn resolve_projection(
    cli: Option<String>,
    cfg: &Config,
) -> AppResult<Option<Projection>> {
    match cfg.merge_string(cli, "project") {
        Some(name) => parse_projection(&name),
        None => Ok(None),
    }
}

fn create_out(path: &Path) -> AppResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Export a patch (with per-node curvatures for the formats that carry
/// them) to `path`, choosing the format from the extension.
fn export_patch(
    path: &Path,
    patch: &SurfacePatch,
    nodes: &[CurvatureNode],
    projection: Option<Projection>,
    out: &mut dyn Write,
) -> AppResult<()> {
    let format = format_from_path(path)?;
    let mut file = create_out(path)?;
    let faces = 2 * (patch.grid.rows - 1) * (patch.grid.cols - 1);
    match format {
        Format::Ply => {
            let proj = projection.ok_or(AppError::UnsupportedProjection)?;
            let k: Vec<f64> = nodes.iter().map(|n| n.k).collect();
            let kappa: Vec<f64> = nodes.iter().map(|n| n.kappa).collect();
            write_ply(&mut file, patch, &k, &kappa, proj)?;
            writeln!(
                out,
                "wrote {} ({} vertices, {} faces, projection {})",
                path.display(),
                patch.grid.n_nodes(),
                faces,
                proj.name()
            )?;
        }
        Format::Obj => {
            let proj = projection.ok_or(AppError::UnsupportedProjection)?;
            write_obj(&mut file, patch, proj)?;
            writeln!(
                out,
                "wrote {} ({} vertices, {} faces, projection {})",
                path.display(),
                patch.grid.n_nodes(),
                faces,
                proj.name()
            )?;
        }
        Format::Csv => {
            write_csv(&mut file, patch)?;
            writeln!(out, "wrote {} ({} nodes)", path.display(), patch.grid.n_nodes())?;
        }
        Format::CurvatureJson => {
            write_curvature_json(&mut file, &patch.grid, nodes)?;
            writeln!(out, "wrote {} ({} nodes)", path.display(), patch.grid.n_nodes())?;
        }
    }
    file.flush()?;
    Ok(())
}

/// The conformality assertion every surface-building pathway runs; in
/// verbose mode the measured defect is reported.
fn check_isotropy(
    phi: &weier4_core::weierstrass::PhiCurve,
    grid: &GridSpec,
    verbose: bool,
    out: &mut dyn Write,
) -> AppResult<()> {
    let violation = isotropy_violation(phi, grid)?;
    if verbose {
        writeln!(out, "max |Phi^2| over grid = {}", f17(violation))?;
    }
    if violation > ISOTROPY_GATE {
        return Err(AppError::Invalid(format!(
            "conformality violated: max |Phi^2| over grid = {violation:.3e}"
        )));
    }
    Ok(())
}

// ------------------------------------------------------------- subcommands

fn run_build(args: BuildArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (kind, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid")?;
    let out_path = require(
        cfg.merge_parsed(args.out, "out", |s| Ok(PathBuf::from(s)))?,
        "--out",
    )?;
    let projection = resolve_projection(args.project, &cfg)?;
    let verbose = cfg.merge_flag(args.common.verbose, "verbose")?;

    let built = build_surface(kind, &sources, zero(), order)?;
    check_isotropy(&built.phi, &grid, verbose, out)?;
    let (patch, nodes) = curvature_grid(&built.phi, &grid)?;
    export_patch(&out_path, &patch, &nodes, projection, out)?;
    Ok(0)
}

fn run_curvature(args: CurvatureArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (kind, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let verbose = cfg.merge_flag(args.common.verbose, "verbose")?;
    let built = build_surface(kind, &sources, zero(), order)?;

    let at = cfg.merge_string(args.at, "at");
    if let Some(at_src) = at {
        let t = parse_at(&at_src)?;
        if verbose {
            let defect = built.phi.phi_sq().evaluate(t).map_err(AppError::Core)?;
            writeln!(out, "|Phi^2(t)| = {}", f17(defect.norm()))?;
        }
        let p = curvature_at(&built.phi, t)?;
        writeln!(out, "K = {}", f17(p.k))?;
        writeln!(out, "kappa = {}", f17(p.kappa))?;
        match (p.nu, p.mu) {
            (Some(nu), Some(mu)) => {
                writeln!(out, "nu = {}", f17(nu))?;
                writeln!(out, "mu = {}", f17(mu))?;
            }
            _ => {
                writeln!(out, "nu = n/a (not general type)")?;
                writeln!(out, "mu = n/a (not general type)")?;
            }
        }
        writeln!(out, "E = {}", f17(p.e))?;
        return Ok(0);
    }

    let grid = require(
        resolve_grid(&args.grid, &cfg)?,
        "--at or --grid with --out",
    )?;
    let out_path = require(
        cfg.merge_parsed(args.out, "out", |s| Ok(PathBuf::from(s)))?,
        "--out for grid reports",
    )?;
    if format_from_path(&out_path)? != Format::CurvatureJson {
        return Err(AppError::Usage(
            "curvature grid reports are json; use a .json output path".into(),
        ));
    }
    check_isotropy(&built.phi, &grid, verbose, out)?;
    let (patch, nodes) = curvature_grid(&built.phi, &grid)?;
    let mut file = create_out(&out_path)?;
    write_curvature_json(&mut file, &patch.grid, &nodes)?;
    file.flush()?;
    writeln!(out, "wrote {} ({} nodes)", out_path.display(), nodes.len())?;
    Ok(0)
}

fn run_canonize(args: CanonizeArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (kind, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let verbose = cfg.merge_flag(args.common.verbose, "verbose")?;
    let target = match cfg
        .merge_string(args.target, "target")
        .as_deref()
        .unwrap_or("first")
    {
        "first" => CanonicalType::First,
        "second" => CanonicalType::Second,
        other => {
            return Err(AppError::Usage(format!(
                "--target: expected first or second, got `{other}`"
            )))
        }
    };

    let built = build_surface(kind, &sources, zero(), order)?;
    let (canonical, reparam) = to_canonical(&built.phi, target).map_err(AppError::Core)?;
    let target_value = match target {
        CanonicalType::First => Complex64::new(1.0, 0.0),
        CanonicalType::Second => Complex64::new(-1.0, 0.0),
    };
    let deviation = canonical.phi_prime_sq().deviation_from_constant(target_value);
    writeln!(
        out,
        "type = {}",
        match target {
            CanonicalType::First => "first",
            CanonicalType::Second => "second",
        }
    )?;
    writeln!(out, "deviation = {}", f17(deviation))?;
    let coeffs = reparam.forward.coeffs();
    let shown = if verbose { coeffs.len() } else { coeffs.len().min(9) };
    for (k, c) in coeffs.iter().take(shown).enumerate() {
        writeln!(out, "forward[{k}] = {} {}", f17(c.re), f17(c.im))?;
    }
    Ok(0)
}

fn run_natural_check(args: NaturalCheckArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (_, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let path_of = |cli: Option<PathBuf>, key: &str| -> AppResult<Option<PathBuf>> {
        cfg.merge_parsed(cli, key, |s| Ok(PathBuf::from(s)))
    };
    let nu_file = path_of(args.nu, "nu")?;
    let k_file = path_of(args.k, "k")?;
    let kappa_file = path_of(args.kappa, "kappa")?;
    let save_nu = path_of(args.save_nu, "save-nu")?;
    let save_k = path_of(args.save_k, "save-k")?;
    let save_kappa = path_of(args.save_kappa, "save-kappa")?;

    if let Some(path) = nu_file {
        let field = crate::field_file::read_field(&path)?;
        if field.role() != FieldRole::Nu {
            return Err(AppError::Invalid(format!(
                "{}: expected a nu field, found {}",
                path.display(),
                crate::field_file::role_name(field.role())
            )));
        }
        let residual = natural_residual_r3(&field).map_err(AppError::Core)?;
        writeln!(out, "residual = {}", f17(residual))?;
        return Ok(0);
    }

    if k_file.is_some() || kappa_file.is_some() {
        let k_path = require(k_file, "--k (with --kappa)")?;
        let kappa_path = require(kappa_file, "--kappa (with --k)")?;
        let k = crate::field_file::read_field(&k_path)?;
        let kappa = crate::field_file::read_field(&kappa_path)?;
        let (r1, r2) = natural_residual_r4(&k, &kappa).map_err(AppError::Core)?;
        writeln!(out, "residual1 = {}", f17(r1))?;
        writeln!(out, "residual2 = {}", f17(r2))?;
        return Ok(0);
    }

    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid")?;
    match (&sources.g1, &sources.g2) {
        (Some(g1_src), Some(g2_src)) => {
            let g1 = parse_holo(g1_src, zero(), order)?;
            let g2 = parse_holo(g2_src, zero(), order)?;
            let pair = HoloPair::new(g1, g2, Flavor::G).map_err(AppError::Core)?;
            let closed = |u: f64, v: f64| {
                curvatures_closed_form(
                    ClosedFormKind::CanonicalG,
                    None,
                    &pair,
                    Complex64::new(u, v),
                )
            };
            let k_field =
                ScalarField::sample(FieldRole::GaussK, &grid, |u, v| closed(u, v).map(|p| p.0))
                    .map_err(AppError::Core)?;
            let kappa_field = ScalarField::sample(FieldRole::NormalKappa, &grid, |u, v| {
                closed(u, v).map(|p| p.1)
            })
            .map_err(AppError::Core)?;
            if let Some(path) = save_k {
                crate::field_file::save_field(&path, &k_field)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            if let Some(path) = save_kappa {
                crate::field_file::save_field(&path, &kappa_field)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            let (r1, r2) = natural_residual_r4(&k_field, &kappa_field).map_err(AppError::Core)?;
            writeln!(out, "residual1 = {}", f17(r1))?;
            writeln!(out, "residual2 = {}", f17(r2))?;
            Ok(0)
        }
        (Some(g_src), None) => {
            let g = parse_holo(g_src, zero(), order)?;
            let field = ScalarField::sample(FieldRole::Nu, &grid, |u, v| {
                nu_r3(&g, Complex64::new(u, v))
            })
            .map_err(AppError::Core)?;
            if let Some(path) = save_nu {
                crate::field_file::save_field(&path, &field)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            let residual = natural_residual_r3(&field).map_err(AppError::Core)?;
            writeln!(out, "residual = {}", f17(residual))?;
            Ok(0)
        }
        _ => Err(AppError::Usage(
            "natural-check needs --nu, --k/--kappa, or --g1 (optionally --g2)".into(),
        )),
    }
}

fn run_family(args: FamilyArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let k1 = require(resolve_f64(&cfg, args.k1, "k1")?, "--k1")?;
    let k2 = require(resolve_f64(&cfg, args.k2, "k2")?, "--k2")?;
    let alpha = resolve_f64(&cfg, args.alpha, "alpha")?.unwrap_or(0.0);
    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid")?;
    let order = resolve_order(&cfg, args.order)?;
    let out_path = require(
        cfg.merge_parsed(args.out, "out", |s| Ok(PathBuf::from(s)))?,
        "--out",
    )?;
    let projection = resolve_projection(args.project, &cfg)?;
    let verbose = cfg.merge_flag(args.common.verbose, "verbose")?;

    let params = FamilyParams::new(k1, k2, alpha, grid.clone())?;
    let patch = family_m(&params)?;
    let pair = family_pair(k1, k2, alpha, order)?;
    let mut nodes = Vec::with_capacity(grid.n_nodes());
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let t = grid.t(r, c);
            let (k, kappa) =
                curvatures_closed_form(ClosedFormKind::CanonicalG, None, &pair, t)
                    .map_err(AppError::Core)?;
            let (nu, mu) = match numu_closed_form(CanonicalKind::G, &pair, t) {
                Ok((nu, mu)) => (Some(nu), Some(mu)),
                Err(_) => (None, None),
            };
            nodes.push(CurvatureNode {
                x: patch.point(r, c),
                k,
                kappa,
                nu,
                mu,
                e: patch.e(r, c),
            });
        }
    }

    if verbose {
        // Cross-check the closed-form coordinates against the canonical
        // pipeline, modulo the unpinned translation and sign.
        let phi = build_canonical(Flavor::G, &pair).map_err(AppError::Core)?;
        check_isotropy(&phi, &grid, true, out)?;
        let psi = integrate_phi(&phi);
        let integrated = eval_patch(&psi, &grid).map_err(AppError::Core)?;
        let matched = compare_mod_translation_sign(&integrated, &patch)?;
        writeln!(out, "pipeline cross-check: {matched}")?;
    }

    export_patch(&out_path, &patch, &nodes, projection, out)?;
    Ok(0)
}

fn run_verify_family(args: VerifyFamilyArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let k1 = require(resolve_f64(&cfg, args.k1, "k1")?, "--k1")?;
    let k2 = require(resolve_f64(&cfg, args.k2, "k2")?, "--k2")?;
    let alphas_src = require(cfg.merge_string(args.alphas, "alphas"), "--alphas")?;
    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid")?;
    let order = resolve_order(&cfg, args.order)?;
    let mut alphas = Vec::new();
    for part in alphas_src.split(',') {
        let a: f64 = part.trim().parse().map_err(|_| {
            AppError::Usage(format!("--alphas: bad number `{}`", part.trim()))
        })?;
        alphas.push(a);
    }
    for &a in &alphas {
        if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&a) {
            return Err(AppError::Invalid(
                "family: every alpha must lie in [0, pi/4]".into(),
            ));
        }
    }
    let report = verify_family(k1, k2, &alphas, &grid, order)?;
    writeln!(out, "{report}")?;
    Ok(if report.pass() { 0 } else { 1 })
}

fn run_equiv_check(args: EquivCheckArgs, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (_, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let other_g1 = require(
        cfg.merge_string(args.other_g1, "other-g1"),
        "--other-g1",
    )?;
    let other_g2 = require(
        cfg.merge_string(args.other_g2, "other-g2"),
        "--other-g2",
    )?;
    let g1 = require(sources.g1, "--g1")?;
    let g2 = require(sources.g2, "--g2")?;
    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid")?;

    let make_pair = |a_src: &str, b_src: &str| -> AppResult<HoloPair> {
        let a = parse_holo(a_src, zero(), order)?;
        let b = parse_holo(b_src, zero(), order)?;
        HoloPair::new(a, b, Flavor::G).map_err(AppError::Core)
    };
    let first = make_pair(&g1, &g2)?;
    let second = make_pair(&other_g1, &other_g2)?;
    let equivalent = equivalent_pairs(&first, &second, &grid).map_err(AppError::Core)?;
    writeln!(out, "equivalent: {equivalent}")?;
    Ok(0)
}

fn run_r3(args: R3Args, out: &mut dyn Write) -> AppResult<i32> {
    let cfg = load_config(&args.common)?;
    let (_, sources, order) = resolve_exprs(&args.exprs, &cfg)?;
    let verbose = cfg.merge_flag(args.common.verbose, "verbose")?;
    let g_src = require(sources.g1, "--g1 (the R^3 generator g)")?;
    let g = parse_holo(&g_src, zero(), order)?;

    if let Some(at_src) = cfg.merge_string(args.at, "at") {
        let t = parse_at(&at_src)?;
        let nu = nu_r3(&g, t).map_err(AppError::Core)?;
        writeln!(out, "nu = {}", f17(nu))?;
        return Ok(0);
    }

    let grid = require(resolve_grid(&args.grid, &cfg)?, "--grid (or --at)")?;
    let out_path = require(
        cfg.merge_parsed(args.out, "out", |s| Ok(PathBuf::from(s)))?,
        "--out",
    )?;
    let phi = build_r3(&g).map_err(AppError::Core)?;
    if verbose {
        let comps = phi.components();
        let mut sq = comps[0].mul(&comps[0]).map_err(AppError::Core)?;
        for c in &comps[1..] {
            let c2 = c.mul(c).map_err(AppError::Core)?;
            sq = sq.add(&c2).map_err(AppError::Core)?;
        }
        let mut worst = 0.0_f64;
        for r in 0..grid.rows {
            for c in 0..grid.cols {
                worst = worst.max(sq.evaluate(grid.t(r, c)).map_err(AppError::Core)?.norm());
            }
        }
        writeln!(out, "max |Phi^2| over grid = {}", f17(worst))?;
    }
    let psi = integrate_phi3(&phi);
    let patch = eval_patch_r3(&psi, &grid).map_err(AppError::Core)?;
    let format = format_from_path(&out_path)?;
    let faces = 2 * (grid.rows - 1) * (grid.cols - 1);
    let mut file = create_out(&out_path)?;
    match format {
        Format::Ply => {
            write_ply3(&mut file, &patch)?;
            writeln!(
                out,
                "wrote {} ({} vertices, {} faces)",
                out_path.display(),
                grid.n_nodes(),
                faces
            )?;
        }
        Format::Obj => {
            write_obj(&mut file, &patch, Projection::Xyz)?;
            writeln!(
                out,
                "wrote {} ({} vertices, {} faces)",
                out_path.display(),
                grid.n_nodes(),
                faces
            )?;
        }
        Format::Csv => {
            write_csv(&mut file, &patch)?;
            writeln!(out, "wrote {} ({} nodes)", out_path.display(), grid.n_nodes())?;
        }
        Format::CurvatureJson => {
            return Err(AppError::Usage(
                "r3 exports meshes or csv, not curvature json".into(),
            ));
        }
    }
    file.flush()?;
    Ok(0)
}
