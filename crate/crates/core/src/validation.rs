//! Named cross-module validation criteria.
//!
//! Each criterion exercises one quantitative claim the laboratory is built
//! around and reports pass/fail with a short account of the measured numbers.
//! All criteria are deterministic given the seed.

use crate::core_models::{EntropyPair, FluxModel, KineticFunction};
use crate::fd_schemes::{
    entropy_identity_residuals, integrate, Boundary, GridState, SchemeConfig,
};
use crate::front_tracking::Tracker;
use crate::kinetic_lab::{
    compare_tables, detect_plateau, matched_tw_alpha, numerical_kinetic_function, KineticRun,
};
use crate::riemann::{evaluate, NonclassicalSolver, WaveKind};
use crate::roots;
use crate::traveling_wave::{kinetic_table, kinetic_value, shoot, tw_dissipation, Terminal, TwModel};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// All criterion names, in report order.
pub const CRITERIA: [&str; 11] = [
    "riemann-soundness",
    "classical-limit",
    "zero-dissipation",
    "front-tracking-v",
    "entropy-conservation",
    "scheme-order",
    "tw-asymptotics",
    "tw-linearity-phalf",
    "tw-dissipation-identity",
    "kinetic-extraction",
    "regularization-sensitivity",
];

/// Run one criterion by name. Numerical failures inside a criterion are
/// reported as a failed criterion, not an error; only an unknown name errors.
pub fn run(name: &str, seed: u64) -> Result<CriterionReport> {
    let body: fn(u64) -> Result<(bool, String)> = match name {
        "riemann-soundness" => riemann_soundness,
        "classical-limit" => classical_limit,
        "zero-dissipation" => zero_dissipation,
        "front-tracking-v" => front_tracking_v,
        "entropy-conservation" => entropy_conservation,
        "scheme-order" => scheme_order,
        "tw-asymptotics" => tw_asymptotics,
        "tw-linearity-phalf" => tw_linearity_phalf,
        "tw-dissipation-identity" => tw_dissipation_identity,
        "kinetic-extraction" => kinetic_extraction,
        "regularization-sensitivity" => regularization_sensitivity,
        _ => {
            return Err(Error::Config(format!(
                "unknown validation criterion '{name}' (known: {})",
                CRITERIA.join(", ")
            )))
        }
    };
    let static_name = CRITERIA.iter().find(|&&n| n == name).unwrap();
    Ok(match body(seed) {
        Ok((passed, details)) => CriterionReport {
            name: static_name,
            passed,
            details,
        },
        Err(e) => CriterionReport {
            name: static_name,
            passed: false,
            details: format!("aborted: {e}"),
        },
    })
}

/// Run every criterion.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|n| run(n, seed).unwrap()).collect()
}

fn cubic_pair() -> (FluxModel, EntropyPair) {
    let flux = FluxModel::cubic();
    let pair = EntropyPair::quadratic(flux.clone());
    (flux, pair)
}

// --- 1. Riemann solver soundness over a randomized ensemble -----------------

fn riemann_soundness(seed: u64) -> Result<(bool, String)> {
    let (flux, pair) = cubic_pair();
    let solvers: Vec<NonclassicalSolver> = (0..9)
        .map(|i| {
            let c = 0.55 + 0.05 * i as f64;
            NonclassicalSolver::new(flux.clone(), pair.clone(), KineticFunction::linear(c)?)
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let n = 10_000;
    let mut failures = Vec::new();
    for i in 0..n {
        let s = &solvers[i % solvers.len()];
        let ul: f64 = rng.gen_range(-3.0..3.0);
        let ur: f64 = rng.gen_range(-3.0..3.0);
        let check = || -> Result<()> {
            let p = s.solve(ul, ur)?;
            p.validate(s.pair())?;
            if p.waves.len() > 2 {
                return Err(Error::InvalidModel(format!("{} waves", p.waves.len())));
            }
            for w in &p.waves {
                if w.is_shock() {
                    let rh = -w.speed_lo * (w.u_plus - w.u_minus)
                        + (flux.f(w.u_plus) - flux.f(w.u_minus));
                    if rh.abs() > 1e-12 {
                        return Err(Error::InvalidModel(format!("RH residual {rh:e}")));
                    }
                }
                if w.kind == WaveKind::NonclassicalShock {
                    let d = (w.u_plus - s.kinetic().phi(w.u_minus)).abs();
                    if d > 1e-12 {
                        return Err(Error::InvalidModel(format!("kinetic mismatch {d:e}")));
                    }
                }
            }
            let e = p.total_entropy_dissipation(s.pair())?;
            if e > 1e-12 {
                return Err(Error::InvalidModel(format!("dissipation {e:e} > 0")));
            }
            Ok(())
        };
        if let Err(e) = check() {
            failures.push(format!("(ul, ur) = ({ul}, {ur}): {e}"));
        }
    }
    let passed = failures.is_empty();
    let details = if passed {
        format!("{n} random Riemann problems: RH <= 1e-12, E <= 1e-12, ordering, kinetic exactness, <= 2 waves")
    } else {
        format!("{}/{n} failed; first: {}", failures.len(), failures[0])
    };
    Ok((passed, details))
}

// --- 2. Classical limit against a convex-hull (Oleinik) oracle --------------

/// Oleinik solution by the variational formula: minimize f(u) - xi*u over
/// [ul, ur] when ul <= ur, maximize when ul > ur. Interior candidates are the
/// solutions of f'(u) = xi, located by sign scan plus bisection.
fn oleinik_eval(flux: &FluxModel, u_l: f64, u_r: f64, xi: f64) -> f64 {
    let (a, b) = if u_l <= u_r { (u_l, u_r) } else { (u_r, u_l) };
    let maximize = u_l > u_r;
    let mut candidates = vec![u_l, u_r];
    let g = |u: f64| flux.df(u) - xi;
    let m = 256;
    for k in 0..m {
        let x0 = a + (b - a) * k as f64 / m as f64;
        let x1 = a + (b - a) * (k + 1) as f64 / m as f64;
        if g(x0) * g(x1) < 0.0 {
            if let Ok(r) = roots::bracketed(
                g,
                x0,
                x1,
                1e-14 * (1.0 + a.abs() + b.abs()),
                "oracle critical point",
            ) {
                candidates.push(r);
            }
        }
    }
    let obj = |u: f64| flux.f(u) - xi * u;
    let mut best = u_l;
    for &c in &candidates {
        let better = if maximize {
            obj(c) > obj(best)
        } else {
            obj(c) < obj(best)
        };
        if better {
            best = c;
        }
    }
    best
}

fn classical_limit(seed: u64) -> Result<(bool, String)> {
    let (flux, pair) = cubic_pair();
    let solver = NonclassicalSolver::classical(flux.clone(), pair)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let mut worst: f64 = 0.0;
    let mut compared = 0usize;
    for _ in 0..1000 {
        let ul: f64 = rng.gen_range(-3.0..3.0);
        let ur: f64 = rng.gen_range(-3.0..3.0);
        let p = solver.solve(ul, ur)?;
        let shock_speeds: Vec<f64> = p
            .waves
            .iter()
            .filter(|w| w.is_shock())
            .map(|w| w.speed_lo)
            .collect();
        let hi = flux.df(ul).max(flux.df(ur)) + 1.0;
        for k in 0..30 {
            let xi = -1.0 + (hi + 1.0) * k as f64 / 29.0;
            if shock_speeds.iter().any(|&s| (xi - s).abs() < 0.05) {
                continue;
            }
            let d = (evaluate(&flux, &p, xi) - oleinik_eval(&flux, ul, ur, xi)).abs();
            worst = worst.max(d);
            compared += 1;
        }
    }
    let passed = worst <= 1e-9;
    Ok((
        passed,
        format!("1000 problems, {compared} xi samples vs variational oracle, max |diff| = {worst:.3e} (tol 1e-9)"),
    ))
}

// --- 3. Zero-dissipation algebra --------------------------------------------

fn zero_dissipation(_seed: u64) -> Result<(bool, String)> {
    let (_, pair) = cubic_pair();
    let mut worst_neg: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for i in 0..100 {
        let u = -2.5 + 5.0 * i as f64 / 99.0;
        let z = pair.zero_dissipation(u)?;
        worst_neg = worst_neg.max((z + u).abs());
        worst_inv = worst_inv.max((pair.zero_dissipation(z)? - u).abs());
    }
    let passed = worst_neg <= 1e-10 && worst_inv <= 1e-8;
    Ok((
        passed,
        format!("100-point grid: max |phi_flat_0(u) + u| = {worst_neg:.3e} (tol 1e-10), involution residual {worst_inv:.3e} (tol 1e-8)"),
    ))
}

// --- 4. Front tracking: diminishing V, growing TV, mass balance -------------

fn front_tracking_v(seed: u64) -> Result<(bool, String)> {
    let (flux, pair) = cubic_pair();
    let trackers: Vec<Tracker> = [0.6, 0.75, 0.9]
        .iter()
        .map(|&c| {
            let solver =
                NonclassicalSolver::new(flux.clone(), pair.clone(), KineticFunction::linear(c)?)?;
            Tracker::new(solver, 0.1, (-12.0, 12.0))
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let n = 1000;
    let t_end = 1.0;
    let mut failures = Vec::new();
    let mut tv_witnesses = 0usize;
    let mut worst_mass: f64 = 0.0;
    for i in 0..n {
        let tracker = &trackers[i % trackers.len()];
        let (a, b, c): (f64, f64, f64) = (
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
        );
        let run = || -> Result<(bool, f64)> {
            let sampler = |x: f64| {
                if x < -1.0 {
                    a
                } else if x < 0.0 {
                    b
                } else {
                    c
                }
            };
            let state0 = tracker.init_from_data(sampler, 48)?;
            // run_cauchy enforces V non-increase at every interaction.
            let (state, diags) = tracker.run_cauchy(&state0, t_end)?;
            let tv_grew = diags
                .windows(2)
                .any(|w| w[1].functionals.tv > w[0].functionals.tv + 1e-9);
            let m0 = diags[0].functionals.mass;
            let m1 = tracker.functionals(&state)?.mass;
            let influx = t_end * (flux.f(a) - flux.f(state.u_far_right()));
            Ok((tv_grew, (m1 - m0 - influx).abs()))
        };
        match run() {
            Ok((tv_grew, mass_res)) => {
                if tv_grew {
                    tv_witnesses += 1;
                }
                worst_mass = worst_mass.max(mass_res);
            }
            Err(e) => failures.push(format!("data ({a}, {b}, {c}): {e}")),
        }
    }
    let passed = failures.is_empty() && tv_witnesses >= 1 && worst_mass <= 1e-10;
    let details = if failures.is_empty() {
        format!("{n} random three-state runs: V non-increasing at every interaction, {tv_witnesses} runs with growing TV, max mass residual {worst_mass:.3e} (tol 1e-10)")
    } else {
        format!("{}/{n} runs failed; first: {}", failures.len(), failures[0])
    };
    Ok((passed, details))
}

// --- 5. Entropy conservation of the base fluxes -----------------------------

fn periodic_cfg(order: u8, n: usize, cfl: f64) -> SchemeConfig {
    let (flux, pair) = cubic_pair();
    let length = 6.4;
    SchemeConfig {
        flux,
        pair,
        base_flux_order: order,
        alpha: 0.0,
        beta: 0.0,
        h: length / n as f64,
        cfl,
        domain: (0.0, length),
        boundary: Boundary::Periodic,
    }
}

fn smooth_init(x: f64) -> f64 {
    let k = 2.0 * std::f64::consts::PI / 6.4;
    0.25 * (k * x).sin() + 0.1 * (2.0 * k * x).cos()
}

fn entropy_conservation(_seed: u64) -> Result<(bool, String)> {
    let mut passed = true;
    let mut parts = Vec::new();
    for order in [2u8, 3] {
        let drift = |cfl: f64| -> Result<f64> {
            let cfg = periodic_cfg(order, 64, cfl);
            let state0 = GridState::from_fn(&cfg, smooth_init);
            let (_, diags) = integrate(&cfg, &state0, 1.0)?;
            Ok((diags.last().unwrap().entropy - diags[0].entropy).abs())
        };
        let d1 = drift(0.1)?;
        let d2 = drift(0.05)?;
        let ratio = d1 / d2.max(1e-300);
        let cfg = periodic_cfg(order, 64, 0.1);
        let state0 = GridState::from_fn(&cfg, smooth_init);
        let res = entropy_identity_residuals(&cfg, &state0)?
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        let ok = d1 <= 1e-10 && (10.0..=24.0).contains(&ratio) && res <= 1e-13;
        passed &= ok;
        parts.push(format!(
            "order {order}: drift {d1:.3e} (tol 1e-10), dt-halving ratio {ratio:.1} (expect ~16), identity residual {res:.3e} (tol 1e-13)"
        ));
    }
    Ok((passed, parts.join("; ")))
}

// --- 6. Empirical order of convergence on smooth data -----------------------

/// Exact smooth solution by characteristics: u = u0(x - f'(u) t), valid
/// before gradient blow-up; solved per point by damped Newton.
fn smooth_exact(flux: &FluxModel, u0: impl Fn(f64) -> f64 + Copy, x: f64, t: f64) -> f64 {
    let g = |u: f64| u - u0(x - flux.df(u) * t);
    let mut u = u0(x);
    for _ in 0..100 {
        let du = 1e-7;
        let gp = (g(u + du) - g(u)) / du;
        let step = g(u) / gp;
        u -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    u
}

fn order_init(x: f64) -> f64 {
    let k = 2.0 * std::f64::consts::PI / 6.4;
    0.2 + 0.15 * (k * x).sin()
}

fn scheme_order(_seed: u64) -> Result<(bool, String)> {
    let t_end = 0.1;
    let mut passed = true;
    let mut parts = Vec::new();
    for order in [2u8, 3] {
        let errs: Vec<f64> = [64usize, 128, 256, 512]
            .par_iter()
            .map(|&n| -> Result<f64> {
                let cfg = periodic_cfg(order, n, 0.05);
                let state0 = GridState::from_fn(&cfg, order_init);
                let (state, _) = integrate(&cfg, &state0, t_end)?;
                let mut e: f64 = 0.0;
                for j in 0..cfg.n_cells() {
                    let exact = smooth_exact(&cfg.flux, order_init, cfg.x(j), t_end);
                    e = e.max((state.cells[j] - exact).abs());
                }
                Ok(e)
            })
            .collect::<Result<_>>()?;
        let eocs: Vec<f64> = errs
            .windows(2)
            .map(|w| (w[0] / w[1]).log2())
            .collect();
        let finest = *eocs.last().unwrap();
        // Symmetric entropy-conservative fluxes superconverge (the nominal
        // order-3 flux measures 4); require meeting or beating nominal.
        let ok = finest >= order as f64 - 0.3;
        passed &= ok;
        parts.push(format!(
            "order {order}: errors {:?}, EOCs {:?}, finest {finest:.2} (nominal {order}, tol -0.3)",
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            eocs.iter().map(|e| format!("{e:.2}")).collect::<Vec<_>>()
        ));
    }
    Ok((passed, parts.join("; ")))
}

// --- 7. Traveling-wave small-shock asymptotics ------------------------------

fn tw_asymptotics(_seed: u64) -> Result<(bool, String)> {
    let flux = FluxModel::cubic();
    let small = [0.02, 0.04, 0.08, 0.16];
    let mut passed = true;
    let mut parts = Vec::new();
    for (p, expect) in [(0.0, -0.5), (0.4, -0.5), (1.0, -1.0)] {
        let model = TwModel::new(flux.clone(), 1.0, p)?;
        let table = kinetic_table(&model, &small)?;
        let s = table.slope_at_zero.unwrap();
        let ok = (s - expect).abs() <= 0.05;
        passed &= ok;
        parts.push(format!("p = {p}: slope at 0 = {s:.4} (expect {expect} +- 0.05)"));
    }
    let mut slopes = Vec::new();
    for alpha in [5.0, 1.0, 0.2] {
        let model = TwModel::new(flux.clone(), alpha, 0.5)?;
        let table = kinetic_table(&model, &[0.2, 0.4, 0.8])?;
        let s = table.slope_at_zero.unwrap();
        let ok = s > -1.0 && s < -0.5;
        passed &= ok;
        slopes.push(s);
    }
    // Toward -1 as alpha decreases.
    passed &= slopes[0] > slopes[1] && slopes[1] > slopes[2];
    parts.push(format!(
        "p = 1/2 slopes at alpha (5, 1, 0.2) = ({:.4}, {:.4}, {:.4}), strictly in (-1, -1/2), decreasing",
        slopes[0], slopes[1], slopes[2]
    ));
    Ok((passed, parts.join("; ")))
}

// --- 8. Linearity of the kinetic function at p = 1/2 ------------------------

fn tw_linearity_phalf(_seed: u64) -> Result<(bool, String)> {
    let flux = FluxModel::cubic();
    let model = TwModel::new(flux, 1.0, 0.5)?;
    let grid: Vec<f64> = (0..6).map(|i| 0.2 + 1.8 * i as f64 / 5.0).collect();
    let table = kinetic_table(&model, &grid)?;
    let ratios: Vec<f64> = table.rows.iter().map(|&(u, v)| v / u).collect();
    let c = -ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().fold(f64::NEG_INFINITY, |m, &r| m.max(r))
        - ratios.iter().fold(f64::INFINITY, |m, &r| m.min(r));
    let passed = spread <= 0.01 * c && c > 0.5 && c < 1.0;
    Ok((
        passed,
        format!("u in [0.2, 2]: c_alpha = {c:.5}, ratio spread {spread:.2e} (tol 1% of c), c in (0.5, 1)"),
    ))
}

// --- 9. Dissipation identity along connecting orbits ------------------------

fn tw_dissipation_identity(_seed: u64) -> Result<(bool, String)> {
    let (flux, pair) = cubic_pair();
    let cases: Vec<(f64, f64, f64)> = [(0.5, 1.0), (0.5, 0.5), (1.0, 1.0), (1.0, 0.5)]
        .iter()
        .flat_map(|&(p, alpha)| {
            [0.5, 0.8, 1.2, 1.6, 2.0]
                .iter()
                .map(move |&u| (p, alpha, u))
                .collect::<Vec<_>>()
        })
        .collect();
    let results: Vec<Result<f64>> = cases
        .par_iter()
        .map(|&(p, alpha, u)| -> Result<f64> {
            let model = TwModel::new(flux.clone(), alpha, p)?;
            let kv = kinetic_value(&model, u)?;
            let lambda = flux.shock_speed(u, kv)?;
            let traj = shoot(&model, u, lambda);
            if traj.terminal != Terminal::ConvergedToFarSaddle {
                return Err(Error::NotConnecting(u, traj.terminal));
            }
            let quad = tw_dissipation(&traj, &model, &pair)?;
            let exact = pair.entropy_dissipation(u, traj.far_state)?;
            Ok((quad - exact).abs() / exact.abs())
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for ((p, alpha, u), r) in cases.iter().zip(results) {
        match r {
            Ok(rel) => worst = worst.max(rel),
            Err(e) => failures.push(format!("(p, alpha, u) = ({p}, {alpha}, {u}): {e}")),
        }
    }
    let passed = failures.is_empty() && worst <= 1e-6;
    let details = if failures.is_empty() {
        format!("20 connecting orbits: max relative deviation of quadrature vs closed form = {worst:.3e} (tol 1e-6)")
    } else {
        format!("{} orbits failed; first: {}", failures.len(), failures[0])
    };
    Ok((passed, details))
}

// --- 10. Kinetic extraction consistency (fd vs traveling wave) --------------

fn fd_scheme(order: u8, alpha: f64, beta: f64, h: f64, domain: (f64, f64)) -> SchemeConfig {
    let (flux, pair) = cubic_pair();
    SchemeConfig {
        flux,
        pair,
        base_flux_order: order,
        alpha,
        beta,
        h,
        cfl: 0.4,
        domain,
        boundary: Boundary::FixedStates,
    }
}

fn kinetic_extraction(_seed: u64) -> Result<(bool, String)> {
    let flux = FluxModel::cubic();
    let alpha_fd = 4.0;
    let beta = 1.0;
    let alpha_tw = matched_tw_alpha(alpha_fd, beta)?;
    let u_grid = [0.9, 1.1, 1.3];
    let tw_model = TwModel::new(flux.clone(), alpha_tw, 0.0)?;
    let tw_table = kinetic_table(&tw_model, &u_grid)?;
    let phi_of: std::collections::BTreeMap<u64, f64> = tw_table
        .rows
        .iter()
        .map(|&(u, v)| (u.to_bits(), v))
        .collect();
    // Right state halfway between the expected kinetic state and the tangent
    // state: always a two-shock pattern with a resolvable middle plateau.
    let far = move |u: f64| 0.5 * (phi_of[&u.to_bits()] + (-0.5 * u));
    let far = &far;
    let t_end = 2.5;
    let deviation = |order: u8, h: f64| -> Result<f64> {
        let run = KineticRun {
            scheme: fd_scheme(order, alpha_fd, beta, h, (-6.0, 12.0)),
            t_end,
        };
        let (fd_table, _) = numerical_kinetic_function(&run, &u_grid, |u: f64| far(u))?;
        Ok(compare_tables(&fd_table, &tw_table)?.max_rel)
    };
    let mesh_devs: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| deviation(3, h))
        .collect::<Result<_>>()?;
    let order_devs: Vec<f64> = [2u8, 3, 4]
        .iter()
        .map(|&o| deviation(o, 0.02))
        .collect::<Result<_>>()?;
    let slack = 1e-6;
    let mesh_monotone = mesh_devs.windows(2).all(|w| w[1] <= w[0] + slack);
    let order_monotone = order_devs.windows(2).all(|w| w[1] <= w[0] + slack);
    let finest_ok = *mesh_devs.last().unwrap() <= 0.10;
    let passed = mesh_monotone && order_monotone && finest_ok;
    Ok((
        passed,
        format!(
            "max relative row deviation vs tw table: h = (0.04, 0.02, 0.01) -> ({:.4}, {:.4}, {:.4}) [finest tol 0.10, non-increasing]; order (2, 3, 4) at h = 0.02 -> ({:.4}, {:.4}, {:.4}) [non-increasing]",
            mesh_devs[0], mesh_devs[1], mesh_devs[2], order_devs[0], order_devs[1], order_devs[2]
        ),
    ))
}

// --- 11. Regularization sensitivity witness ---------------------------------

fn regularization_sensitivity(_seed: u64) -> Result<(bool, String)> {
    // The matched regularizations at the two dispersion coefficients sit on
    // opposite sides of the classical threshold: alpha = 2 selects a
    // nonclassical two-shock pattern (plateau near -0.667), alpha = 0.5 a
    // single classical shock (flat state -0.45 downstream). The measured
    // state behind the leading shock separates the two regimes.
    let beta = 1.0;
    let (ul, ur) = (1.0, -0.45);
    let t_end = 3.0;
    let cases: Vec<(f64, f64)> = [0.5, 2.0]
        .iter()
        .flat_map(|&alpha| [0.02, 0.01].iter().map(move |&h| (alpha, h)))
        .collect();
    let plateaus: Vec<f64> = cases
        .par_iter()
        .map(|&(alpha, h)| -> Result<f64> {
            let cfg = fd_scheme(3, alpha, beta, h, (-5.0, 9.0));
            let state0 = GridState::riemann(&cfg, ul, ur);
            let (state, _) = integrate(&cfg, &state0, t_end)?;
            Ok(detect_plateau(&state)?.u_plus)
        })
        .collect::<Result<_>>()?;
    // cases order: (0.5, h), (0.5, h/2), (2, h), (2, h/2)
    let noise = (plateaus[0] - plateaus[1])
        .abs()
        .max((plateaus[2] - plateaus[3]).abs());
    let separation = (plateaus[1] - plateaus[3]).abs();
    let passed = separation > 10.0 * noise;
    Ok((
        passed,
        format!(
            "plateaus at alpha = 0.5: ({:.5}, {:.5}), alpha = 2: ({:.5}, {:.5}); separation {separation:.4} vs 10 x extraction noise {:.4}",
            plateaus[0], plateaus[1], plateaus[2], plateaus[3], 10.0 * noise
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_is_a_config_error() {
        assert!(matches!(run("no-such-criterion", 0), Err(Error::Config(_))));
    }

    #[test]
    fn fast_criteria_pass() {
        for name in ["zero-dissipation", "tw-linearity-phalf"] {
            let r = run(name, 0).unwrap();
            assert!(r.passed, "{name}: {}", r.details);
        }
    }

    #[test]
    fn oracle_matches_known_solutions() {
        let flux = FluxModel::cubic();
        // Pure shock (1, 0.5): speed 1.75.
        assert_eq!(oleinik_eval(&flux, 1.0, 0.5, 1.0), 1.0);
        assert_eq!(oleinik_eval(&flux, 1.0, 0.5, 2.0), 0.5);
        // Rarefaction (0.5, 1): inverse of f' inside the fan.
        let u = oleinik_eval(&flux, 0.5, 1.0, 3.0 * 0.8 * 0.8);
        assert!((u - 0.8).abs() < 1e-10);
    }
}
