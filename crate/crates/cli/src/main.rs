//! `nclab` — batch experiment harness for the nonclassical shock laboratory.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 invariant violation (including failed `validate` criteria).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nclab::core_models::{EntropyPair, FluxModel, KineticFunction};
use nclab::fd_schemes::{integrate, Boundary, GridState, SchemeConfig};
use nclab::front_tracking::{FrontKind, Tracker};
use nclab::kinetic_lab::{
    compare_tables, detect_plateau, matched_tw_alpha, numerical_kinetic_function, KineticRun,
};
use nclab::riemann::{NonclassicalSolver, WaveKind};
use nclab::table::KineticTable;
use nclab::traveling_wave::{kinetic_table, TwModel};
use nclab::{validation, Error, Result};
use nclab_cli::config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "nclab",
    version,
    about = "Nonclassical shock laboratory: Riemann solutions, front tracking, traveling waves, entropy-conservative schemes, kinetic measurement"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every subcommand.
#[derive(Args, Default)]
struct Common {
    /// Load a key=value config file first; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for artifact files.
    #[arg(long)]
    out: Option<String>,
    /// Seed for randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Flux model name.
    #[arg(long)]
    flux: Option<String>,
    /// Entropy pair name.
    #[arg(long)]
    entropy: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one Riemann problem and list the outgoing waves.
    #[command(allow_negative_numbers = true)]
    Riemann {
        #[command(flatten)]
        common: Common,
        /// Kinetic function: linear:<c> | phi-natural | table:<path>.
        #[arg(long)]
        kinetic: Option<String>,
        #[arg(long)]
        ul: Option<f64>,
        #[arg(long)]
        ur: Option<f64>,
    },
    /// Front-track a piecewise-constant Cauchy problem.
    #[command(allow_negative_numbers = true)]
    Cauchy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kinetic: Option<String>,
        /// Comma-separated constant states, left to right.
        #[arg(long, allow_hyphen_values = true)]
        states: Option<String>,
        /// Comma-separated jump positions (one fewer than states).
        #[arg(long, allow_hyphen_values = true)]
        jumps: Option<String>,
        /// Rarefaction fan discretization step.
        #[arg(long)]
        fan_step: Option<f64>,
        /// Sampling resolution of the initial data.
        #[arg(long)]
        n_cells: Option<usize>,
        /// Spatial window lo:hi.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Tabulate the traveling-wave kinetic function.
    #[command(allow_negative_numbers = true)]
    Tw {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<f64>,
        /// Nonlinear-diffusion exponent.
        #[arg(long)]
        p: Option<f64>,
        /// Left-state sweep lo:hi:n.
        #[arg(long, allow_hyphen_values = true)]
        ugrid: Option<String>,
    },
    /// Run one finite-difference Riemann experiment.
    #[command(allow_negative_numbers = true)]
    Fd {
        #[command(flatten)]
        common: Common,
        /// Base entropy-conservative flux order (2, 3 or 4).
        #[arg(long)]
        order: Option<u8>,
        /// Dispersion coefficient of the controlled-dissipation terms.
        #[arg(long)]
        alpha: Option<f64>,
        /// Diffusion coefficient.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        /// periodic | fixed.
        #[arg(long)]
        boundary: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[arg(long)]
        ul: Option<f64>,
        #[arg(long)]
        ur: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Measure the numerical kinetic function and compare it to the
    /// traveling-wave table at matched regularization.
    #[command(allow_negative_numbers = true)]
    Kinetics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<u8>,
        /// fd dispersion coefficient; the traveling-wave comparison uses the
        /// matched regularization beta / sqrt(alpha).
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        ugrid: Option<String>,
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Run the cross-module invariant suite.
    #[command(allow_negative_numbers = true)]
    Validate {
        #[command(flatten)]
        common: Common,
        /// Run a single named criterion instead of all of them.
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    if let Ok(workers) = std::env::var("NCLAB_WORKERS") {
        match workers.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: NCLAB_WORKERS must be a positive integer (got '{workers}')");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Table(_) => 2,
        Error::InvalidModel(_) | Error::InvalidKinetic(_) | Error::FunctionalIncrease { .. } => 4,
        _ => 3,
    }
}

/// Build the config from defaults, an optional file, and flag overrides
/// funneled through the same typed setter the file parser uses.
fn build_config(
    command: &str,
    common: &Common,
    overrides: &[(&str, Option<String>)],
) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::parse(&fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    cfg.set("command", command)?;
    let common_overrides = [
        ("out", common.out.clone()),
        ("seed", common.seed.map(|s| s.to_string())),
        ("flux", common.flux.clone()),
        ("entropy", common.entropy.clone()),
    ];
    for (k, v) in common_overrides.iter().chain(overrides) {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    Ok(cfg)
}

fn dispatch(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Riemann {
            common,
            kinetic,
            ul,
            ur,
        } => {
            let cfg = build_config(
                "riemann",
                &common,
                &[
                    ("kinetic", kinetic),
                    ("ul", ul.map(|v| v.to_string())),
                    ("ur", ur.map(|v| v.to_string())),
                ],
            )?;
            run_riemann(&cfg)
        }
        Cmd::Cauchy {
            common,
            kinetic,
            states,
            jumps,
            fan_step,
            n_cells,
            domain,
            t_end,
        } => {
            let cfg = build_config(
                "cauchy",
                &common,
                &[
                    ("kinetic", kinetic),
                    ("states", states),
                    ("jumps", jumps),
                    ("fan_step", fan_step.map(|v| v.to_string())),
                    ("n_cells", n_cells.map(|v| v.to_string())),
                    ("domain", domain),
                    ("t_end", t_end.map(|v| v.to_string())),
                ],
            )?;
            run_cauchy(&cfg)
        }
        Cmd::Tw {
            common,
            alpha,
            p,
            ugrid,
        } => {
            let cfg = build_config(
                "tw",
                &common,
                &[
                    ("alpha", alpha.map(|v| v.to_string())),
                    ("p", p.map(|v| v.to_string())),
                    ("u_grid", ugrid),
                ],
            )?;
            run_tw(&cfg)
        }
        Cmd::Fd {
            common,
            order,
            alpha,
            beta,
            h,
            cfl,
            boundary,
            domain,
            ul,
            ur,
            t_end,
        } => {
            let cfg = build_config(
                "fd",
                &common,
                &[
                    ("order", order.map(|v| v.to_string())),
                    ("alpha", alpha.map(|v| v.to_string())),
                    ("beta", beta.map(|v| v.to_string())),
                    ("h", h.map(|v| v.to_string())),
                    ("cfl", cfl.map(|v| v.to_string())),
                    ("boundary", boundary),
                    ("domain", domain),
                    ("ul", ul.map(|v| v.to_string())),
                    ("ur", ur.map(|v| v.to_string())),
                    ("t_end", t_end.map(|v| v.to_string())),
                ],
            )?;
            run_fd(&cfg)
        }
        Cmd::Kinetics {
            common,
            order,
            alpha,
            beta,
            h,
            cfl,
            domain,
            ugrid,
            t_end,
        } => {
            let cfg = build_config(
                "kinetics",
                &common,
                &[
                    ("order", order.map(|v| v.to_string())),
                    ("alpha", alpha.map(|v| v.to_string())),
                    ("beta", beta.map(|v| v.to_string())),
                    ("h", h.map(|v| v.to_string())),
                    ("cfl", cfl.map(|v| v.to_string())),
                    ("domain", domain),
                    ("u_grid", ugrid),
                    ("t_end", t_end.map(|v| v.to_string())),
                ],
            )?;
            run_kinetics(&cfg)
        }
        Cmd::Validate { common, only } => {
            let cfg = build_config("validate", &common, &[("only", only)])?;
            run_validate(&cfg)
        }
    }
}

// --- shared model construction ----------------------------------------------

fn flux_of(cfg: &ExperimentConfig) -> Result<FluxModel> {
    match cfg.flux.as_str() {
        "cubic" => Ok(FluxModel::cubic()),
        other => Err(Error::Config(format!(
            "unknown flux '{other}' (available: cubic)"
        ))),
    }
}

fn pair_of(cfg: &ExperimentConfig, flux: &FluxModel) -> Result<EntropyPair> {
    match cfg.entropy.as_str() {
        "quadratic" => Ok(EntropyPair::quadratic(flux.clone())),
        other => Err(Error::Config(format!(
            "unknown entropy '{other}' (available: quadratic)"
        ))),
    }
}

fn kinetic_of(cfg: &ExperimentConfig, flux: &FluxModel, pair: &EntropyPair) -> Result<KineticFunction> {
    let spec = cfg.kinetic.as_str();
    if let Some(c) = spec.strip_prefix("linear:") {
        let c: f64 = c
            .parse()
            .map_err(|e| Error::Config(format!("bad kinetic '{spec}': {e}")))?;
        return KineticFunction::linear(c);
    }
    if spec == "phi-natural" {
        return KineticFunction::classical(flux);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return KineticTable::load(Path::new(path))?.to_kinetic_function(flux, pair);
    }
    Err(Error::Config(format!(
        "bad kinetic '{spec}' (expected linear:<c>, phi-natural or table:<path>)"
    )))
}

fn solver_of(cfg: &ExperimentConfig) -> Result<NonclassicalSolver> {
    let flux = flux_of(cfg)?;
    let pair = pair_of(cfg, &flux)?;
    let kin = kinetic_of(cfg, &flux, &pair)?;
    NonclassicalSolver::new(flux, pair, kin)
}

fn linspace(grid: (f64, f64, usize)) -> Result<Vec<f64>> {
    let (lo, hi, n) = grid;
    if n < 1 || hi <= lo {
        return Err(Error::Config(format!("bad u grid {lo}:{hi}:{n}")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

// --- artifact emission -------------------------------------------------------

fn artifact_header(cfg: &ExperimentConfig) -> String {
    let mut s = String::from("# nclab-artifact v1\n");
    for line in cfg.emit().lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

fn write_csv(
    dir: &Path,
    name: &str,
    cfg: &ExperimentConfig,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = std::io::BufWriter::new(fs::File::create(&path)?);
    w.write_all(artifact_header(cfg).as_bytes())?;
    writeln!(w, "# columns: {}", columns.join(","))?;
    for row in rows {
        let line = row
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}")?;
    }
    Ok(path)
}

fn wave_kind_code(kind: WaveKind) -> f64 {
    match kind {
        WaveKind::Rarefaction => 0.0,
        WaveKind::ClassicalShock => 1.0,
        WaveKind::NonclassicalShock => 2.0,
    }
}

fn front_kind_code(kind: FrontKind) -> f64 {
    match kind {
        FrontKind::RarefactionFront => 0.0,
        FrontKind::ClassicalShockFront => 1.0,
        FrontKind::NonclassicalShockFront => 2.0,
    }
}

// --- subcommands --------------------------------------------------------------

fn run_riemann(cfg: &ExperimentConfig) -> Result<u8> {
    let solver = solver_of(cfg)?;
    let pattern = solver.solve(cfg.ul, cfg.ur)?;
    pattern.validate(solver.pair())?;
    println!(
        "riemann problem (ul, ur) = ({}, {}): {} wave(s)",
        cfg.ul,
        cfg.ur,
        pattern.waves.len()
    );
    for (i, w) in pattern.waves.iter().enumerate() {
        let label = match w.kind {
            WaveKind::Rarefaction => "rarefaction",
            WaveKind::ClassicalShock => "classical shock",
            WaveKind::NonclassicalShock => "nonclassical shock",
        };
        let speed = if w.speed_lo == w.speed_hi {
            format!("speed {:.6}", w.speed_lo)
        } else {
            format!("speeds [{:.6}, {:.6}]", w.speed_lo, w.speed_hi)
        };
        println!(
            "  wave {}: {label}: {:.6} -> {:.6}, {speed}",
            i + 1,
            w.u_minus,
            w.u_plus
        );
    }
    let e = pattern.total_entropy_dissipation(solver.pair())?;
    println!("total entropy dissipation: {e:.6e}");
    let path = write_csv(
        Path::new(&cfg.out),
        "riemann_waves.csv",
        cfg,
        &["wave_index", "kind", "u_minus", "u_plus", "speed_lo", "speed_hi"],
        pattern.waves.iter().enumerate().map(|(i, w)| {
            vec![
                i as f64,
                wave_kind_code(w.kind),
                w.u_minus,
                w.u_plus,
                w.speed_lo,
                w.speed_hi,
            ]
        }),
    )?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn run_cauchy(cfg: &ExperimentConfig) -> Result<u8> {
    if cfg.states.len() != cfg.jumps.len() + 1 {
        return Err(Error::Config(format!(
            "{} states need {} jump position(s), got {}",
            cfg.states.len(),
            cfg.states.len() - 1,
            cfg.jumps.len()
        )));
    }
    if cfg.jumps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("jump positions must be strictly increasing".into()));
    }
    let solver = solver_of(cfg)?;
    let tracker = Tracker::new(solver, cfg.fan_step, cfg.domain)?;
    let states = cfg.states.clone();
    let jumps = cfg.jumps.clone();
    let sampler = move |x: f64| {
        let i = jumps.iter().take_while(|&&j| x >= j).count();
        states[i]
    };
    let state0 = tracker.init_from_data(sampler, cfg.n_cells)?;
    let (state, diags) = tracker.run_cauchy(&state0, cfg.t_end)?;
    let first = &diags[0].functionals;
    let last = tracker.functionals(&state)?;
    println!(
        "front tracking to t = {}: {} interactions, {} front(s) remain",
        cfg.t_end,
        diags.len() - 1,
        state.fronts.len()
    );
    println!(
        "V: {:.6} -> {:.6}, TV: {:.6} -> {:.6}, mass: {:.6} -> {:.6}",
        first.v, last.v, first.tv, last.tv, first.mass, last.mass
    );
    let dir = Path::new(&cfg.out);
    let p1 = write_csv(
        dir,
        "cauchy_fronts.csv",
        cfg,
        &["position", "u_left", "u_right", "speed", "kind"],
        state.fronts.iter().map(|f| {
            vec![f.position, f.u_left, f.u_right, f.speed, front_kind_code(f.kind)]
        }),
    )?;
    let p2 = write_csv(
        dir,
        "cauchy_diagnostics.csv",
        cfg,
        &["time", "v", "tv", "mass", "n_fronts", "interaction_id"],
        diags.iter().map(|d| {
            vec![
                d.time,
                d.functionals.v,
                d.functionals.tv,
                d.functionals.mass,
                d.n_fronts as f64,
                d.interaction_id as f64,
            ]
        }),
    )?;
    println!("wrote {}", p1.display());
    println!("wrote {}", p2.display());
    Ok(0)
}

fn run_tw(cfg: &ExperimentConfig) -> Result<u8> {
    let flux = flux_of(cfg)?;
    let model = TwModel::new(flux, cfg.alpha, cfg.p)?;
    let grid = linspace(cfg.u_grid)?;
    let table = kinetic_table(&model, &grid)?;
    println!(
        "traveling-wave kinetic function, alpha = {}, p = {}:",
        cfg.alpha, cfg.p
    );
    for &(u, v) in &table.rows {
        println!("  phi_flat({u:.6}) = {v:.10}  (ratio {:.10})", v / u);
    }
    if let Some(s) = table.slope_at_zero {
        println!("slope at zero: {s:.10}");
    }
    fs::create_dir_all(&cfg.out)?;
    let path = Path::new(&cfg.out).join("tw_table.txt");
    table.save(&path)?;
    println!("wrote {}", path.display());
    Ok(0)
}

fn scheme_of(cfg: &ExperimentConfig) -> Result<SchemeConfig> {
    let flux = flux_of(cfg)?;
    let pair = pair_of(cfg, &flux)?;
    let boundary = match cfg.boundary.as_str() {
        "periodic" => Boundary::Periodic,
        "fixed" => Boundary::FixedStates,
        other => {
            return Err(Error::Config(format!(
                "unknown boundary '{other}' (expected periodic or fixed)"
            )))
        }
    };
    Ok(SchemeConfig {
        flux,
        pair,
        base_flux_order: cfg.order,
        alpha: cfg.alpha,
        beta: cfg.beta,
        h: cfg.h,
        cfl: cfg.cfl,
        domain: cfg.domain,
        boundary,
    })
}

fn run_fd(cfg: &ExperimentConfig) -> Result<u8> {
    let scheme = scheme_of(cfg)?;
    scheme.validate()?;
    let state0 = GridState::riemann(&scheme, cfg.ul, cfg.ur);
    let (state, diags) = integrate(&scheme, &state0, cfg.t_end)?;
    println!(
        "fd run to t = {}: {} cells, {} steps",
        cfg.t_end,
        state.cells.len(),
        diags.len() - 1
    );
    match detect_plateau(&state) {
        Ok(p) => println!(
            "steepest transition: {:.6} -> {:.6} (confidence {:.2})",
            p.u_minus, p.u_plus, p.confidence
        ),
        Err(e) => println!("no plateau detected: {e}"),
    }
    let dir = Path::new(&cfg.out);
    let p1 = write_csv(
        dir,
        "fd_profile.csv",
        cfg,
        &["x", "u"],
        state
            .cells
            .iter()
            .enumerate()
            .map(|(j, &u)| vec![scheme.x(j), u]),
    )?;
    let p2 = write_csv(
        dir,
        "fd_diagnostics.csv",
        cfg,
        &["time", "mass", "entropy", "dt"],
        diags
            .iter()
            .map(|d| vec![d.time, d.mass, d.entropy, d.dt]),
    )?;
    println!("wrote {}", p1.display());
    println!("wrote {}", p2.display());
    Ok(0)
}

fn run_kinetics(cfg: &ExperimentConfig) -> Result<u8> {
    let flux = flux_of(cfg)?;
    let alpha_tw = matched_tw_alpha(cfg.alpha, cfg.beta)?;
    let grid = linspace(cfg.u_grid)?;
    let model = TwModel::new(flux.clone(), alpha_tw, cfg.p)?;
    let tw_table = kinetic_table(&model, &grid)?;
    println!(
        "traveling-wave table at matched alpha = {alpha_tw:.6} (fd alpha = {}, beta = {})",
        cfg.alpha, cfg.beta
    );
    // Right states halfway between the expected kinetic state and the tangent
    // state: keeps every sweep entry a two-wave pattern with a clean plateau.
    let rows = tw_table.rows.clone();
    let flux_for_far = flux.clone();
    let far = move |u: f64| {
        let phi = rows
            .iter()
            .find(|r| r.0 == u)
            .map(|r| r.1)
            .unwrap_or(-0.75 * u);
        0.5 * (phi + flux_for_far.tangent(u).unwrap_or(-0.5 * u))
    };
    let run = KineticRun {
        scheme: scheme_of(cfg)?,
        t_end: cfg.t_end,
    };
    let (fd_table, dropped) = numerical_kinetic_function(&run, &grid, far)?;
    for line in &dropped {
        eprintln!("warning: {line}");
    }
    let report = compare_tables(&fd_table, &tw_table)?;
    println!("{report}");
    let dir = Path::new(&cfg.out);
    fs::create_dir_all(dir)?;
    let tw_path = dir.join("tw_table.txt");
    tw_table.save(&tw_path)?;
    let fd_path = dir.join("fd_table.txt");
    fd_table.save(&fd_path)?;
    let report_path = dir.join("kinetics_report.txt");
    let mut w = std::io::BufWriter::new(fs::File::create(&report_path)?);
    w.write_all(artifact_header(cfg).as_bytes())?;
    write!(w, "{report}")?;
    for line in &dropped {
        writeln!(w, "dropped: {line}")?;
    }
    let plot_path = write_csv(
        dir,
        "kinetics_plot.csv",
        cfg,
        &["u_minus", "u_plus_tw", "u_plus_fd"],
        tw_table.rows.iter().filter_map(|&(u, tw)| {
            fd_table
                .rows
                .iter()
                .find(|r| r.0 == u)
                .map(|&(_, fd)| vec![u, tw, fd])
        }),
    )?;
    for p in [&tw_path, &fd_path, &report_path, &plot_path] {
        println!("wrote {}", p.display());
    }
    Ok(0)
}

fn run_validate(cfg: &ExperimentConfig) -> Result<u8> {
    let reports = if cfg.only.is_empty() {
        validation::run_all(cfg.seed)
    } else {
        vec![validation::run(&cfg.only, cfg.seed)?]
    };
    let mut all_passed = true;
    for r in &reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", r.name, r.details);
        all_passed &= r.passed;
    }
    Ok(if all_passed { 0 } else { 4 })
}
