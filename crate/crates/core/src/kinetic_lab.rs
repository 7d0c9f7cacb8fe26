//! Measuring numerical kinetic functions from computed profiles.
//!
//! A Riemann experiment run long enough separates into an undercompressive
//! jump followed by a classical wave; the intermediate plateau value is the
//! numerical kinetic value ψ♭(u₋). This module detects plateaus, assembles
//! kinetic tables from sweeps of finite-difference runs, and compares them
//! against tables from other producers (e.g. the traveling-wave solver).

use crate::core_models::{classify_shock, FluxModel, ShockClass};
use crate::fd_schemes::{integrate, GridState, SchemeConfig};
use crate::table::KineticTable;
use crate::{Error, Result};
use rayon::prelude::*;

/// Lower bound on how many non-flat cells may be skipped next to the steep
/// transition before looking for a plateau (dispersive spikes and wide
/// regularized ramps ride on the shocks).
pub const OSCILLATION_BUFFER: usize = 10;
/// Minimum number of consecutive flat cells accepted as a plateau.
pub const MIN_WINDOW: usize = 5;
/// A cell-to-cell increment counts as flat below this fraction of the jump.
pub const FLAT_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct RunMeta {
    pub scheme_id: String,
    pub h: f64,
    pub alpha: f64,
    pub t_end: f64,
}

/// An undercompressive jump measured from a profile.
#[derive(Debug, Clone)]
pub struct PlateauPair {
    pub u_minus: f64,
    pub u_plus: f64,
    /// Grows with the length of the flat windows backing the medians; 1 when
    /// both windows reach 20 cells.
    pub confidence: f64,
    pub meta: Option<RunMeta>,
}

/// Locate the steepest transition of the profile and measure the plateau
/// medians on both sides, without classifying the resulting jump.
pub fn detect_plateau(profile: &GridState) -> Result<PlateauPair> {
    let u = &profile.cells;
    let n = u.len();
    if n < 2 * (OSCILLATION_BUFFER + MIN_WINDOW) + 2 {
        return Err(Error::Extraction(format!("profile too short ({n} cells)")));
    }
    // Steepest single-cell transition, sign-agnostic.
    let jmax = (0..n - 1)
        .max_by(|&a, &b| {
            (u[a] - u[a + 1])
                .abs()
                .partial_cmp(&(u[b] - u[b + 1]).abs())
                .unwrap()
        })
        .unwrap();
    // Flat threshold from the global range: regularized fronts can be many
    // cells wide, so local windows around the steepest cell are unreliable.
    let umax = u.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let umin = u.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let jump = umax - umin;
    if jump <= 1e-12 {
        return Err(Error::Extraction("no jump at the steepest transition".into()));
    }
    let flat_tol = FLAT_FRACTION * jump;
    // Walk outward across the transition region (monotone ramp or dispersive
    // wavetrain) until the profile flattens, then collect the flat window.
    let max_skip = (n / 3).max(OSCILLATION_BUFFER);
    let mut left_window = Vec::new();
    let mut k = jmax as i64;
    let mut skipped = 0usize;
    while k >= 1 && skipped < max_skip && (u[(k - 1) as usize] - u[k as usize]).abs() > flat_tol {
        k -= 1;
        skipped += 1;
    }
    while k >= 1 && left_window.len() < 60 {
        let (a, b) = (u[(k - 1) as usize], u[k as usize]);
        if (a - b).abs() > flat_tol {
            break;
        }
        left_window.push(b);
        k -= 1;
    }
    let mut right_window = Vec::new();
    let mut k = jmax as i64 + 1;
    let mut skipped = 0usize;
    while (k as usize) < n - 1
        && skipped < max_skip
        && (u[k as usize] - u[(k + 1) as usize]).abs() > flat_tol
    {
        k += 1;
        skipped += 1;
    }
    while (k as usize) < n - 1 && right_window.len() < 60 {
        let (a, b) = (u[k as usize], u[(k + 1) as usize]);
        if (a - b).abs() > flat_tol {
            break;
        }
        right_window.push(a);
        k += 1;
    }
    if left_window.len() < MIN_WINDOW || right_window.len() < MIN_WINDOW {
        return Err(Error::Extraction(format!(
            "no flat window of length >= {MIN_WINDOW} beside the transition \
             (left {}, right {})",
            left_window.len(),
            right_window.len()
        )));
    }
    let u_minus = median(&left_window);
    let u_plus = median(&right_window);
    let confidence = (left_window.len().min(right_window.len()) as f64 / 20.0).min(1.0);
    Ok(PlateauPair {
        u_minus,
        u_plus,
        confidence,
        meta: None,
    })
}

/// Like [`detect_plateau`], but additionally requires the measured jump to
/// classify as undercompressive under `flux`.
pub fn extract_pair(profile: &GridState, flux: &FluxModel) -> Result<PlateauPair> {
    let pair = detect_plateau(profile)?;
    match classify_shock(flux, pair.u_minus, pair.u_plus)? {
        ShockClass::SlowUndercompressive | ShockClass::FastUndercompressive => Ok(pair),
        other => Err(Error::Extraction(format!(
            "steepest jump ({}, {}) classifies as {other:?}, not undercompressive",
            pair.u_minus, pair.u_plus
        ))),
    }
}

fn median(w: &[f64]) -> f64 {
    let mut v = w.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// One finite-difference kinetic measurement: scheme template plus stop time.
#[derive(Clone)]
pub struct KineticRun {
    pub scheme: SchemeConfig,
    pub t_end: f64,
}

impl KineticRun {
    fn scheme_id(&self) -> String {
        format!("fd-order{}", self.scheme.base_flux_order)
    }
}

/// Sweep the left states, run one Riemann experiment each, and assemble the
/// measured plateau pairs into a kinetic table. Rows whose extraction fails
/// are dropped and reported in the second return value.
pub fn numerical_kinetic_function<F>(
    run: &KineticRun,
    u_grid: &[f64],
    far_state: F,
) -> Result<(KineticTable, Vec<String>)>
where
    F: Fn(f64) -> f64 + Sync,
{
    run.scheme.validate()?;
    let results: Vec<(f64, Result<PlateauPair>)> = u_grid
        .par_iter()
        .map(|&u| {
            let measure = || -> Result<PlateauPair> {
                let state0 = GridState::riemann(&run.scheme, u, far_state(u));
                let (state, _) = integrate(&run.scheme, &state0, run.t_end)?;
                let mut pair = extract_pair(&state, &run.scheme.flux)?;
                pair.meta = Some(RunMeta {
                    scheme_id: run.scheme_id(),
                    h: run.scheme.h,
                    alpha: run.scheme.alpha,
                    t_end: run.t_end,
                });
                Ok(pair)
            };
            (u, measure())
        })
        .collect();
    let mut rows = Vec::new();
    let mut log = Vec::new();
    for (u, r) in results {
        match r {
            Ok(p) => rows.push((p.u_minus, p.u_plus)),
            Err(e) => log.push(format!("u_minus = {u}: dropped ({e})")),
        }
    }
    if rows.len() < 3 {
        return Err(Error::Extraction(format!(
            "only {} rows extracted (need >= 3); {}",
            rows.len(),
            log.join("; ")
        )));
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let slope = crate::traveling_wave::slope_at_zero(&rows);
    let mut table = KineticTable::new(run.scheme.flux.name(), rows)?;
    table.slope_at_zero = Some(slope);
    Ok((
        table
            .with_meta("source", &run.scheme_id())
            .with_meta("h", &format!("{}", run.scheme.h))
            .with_meta("alpha", &format!("{}", run.scheme.alpha))
            .with_meta("beta", &format!("{}", run.scheme.beta))
            .with_meta("t_end", &format!("{}", run.t_end)),
        log,
    ))
}

/// Traveling-wave regularization parameter matched to a finite-difference
/// scheme with β = 1 and dispersion coefficient `alpha_fd`: rescaling the
/// equivalent equation onto the α-parameterized profile ODE gives
/// α_tw = β / √α_fd.
pub fn matched_tw_alpha(alpha_fd: f64, beta: f64) -> Result<f64> {
    if alpha_fd <= 0.0 {
        return Err(Error::Config(format!(
            "matched traveling-wave regularization needs a positive dispersion coefficient (got {alpha_fd})"
        )));
    }
    Ok(beta / alpha_fd.sqrt())
}

/// Deviation report of table `a` against reference `b` on their overlap.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub n_rows: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub slope_deviation: Option<f64>,
}

impl std::fmt::Display for CompareReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "rows compared: {}", self.n_rows)?;
        writeln!(f, "max |du_plus|:  {:.6e}", self.max_abs)?;
        writeln!(f, "mean |du_plus|: {:.6e}", self.mean_abs)?;
        writeln!(f, "max relative:   {:.6e}", self.max_rel)?;
        writeln!(f, "mean relative:  {:.6e}", self.mean_rel)?;
        match self.slope_deviation {
            Some(s) => writeln!(f, "slope-at-zero deviation: {s:.6e}"),
            None => writeln!(f, "slope-at-zero deviation: n/a"),
        }
    }
}

/// Interpolate `reference` onto the grid of `table` and report deviations.
pub fn compare_tables(table: &KineticTable, reference: &KineticTable) -> Result<CompareReport> {
    let (rlo, rhi) = (
        reference.rows.first().unwrap().0,
        reference.rows.last().unwrap().0,
    );
    let mut max_abs: f64 = 0.0;
    let mut sum_abs = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut sum_rel = 0.0;
    let mut n = 0usize;
    for &(u, p) in &table.rows {
        if u < rlo || u > rhi {
            continue;
        }
        let pr = interp(&reference.rows, u);
        let d = (p - pr).abs();
        max_abs = max_abs.max(d);
        sum_abs += d;
        let rel = d / pr.abs().max(1e-300);
        max_rel = max_rel.max(rel);
        sum_rel += rel;
        n += 1;
    }
    if n == 0 {
        return Err(Error::Table("tables cover disjoint u ranges".into()));
    }
    let slope_deviation = match (table.slope_at_zero, reference.slope_at_zero) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    };
    Ok(CompareReport {
        n_rows: n,
        max_abs,
        mean_abs: sum_abs / n as f64,
        max_rel,
        mean_rel: sum_rel / n as f64,
        slope_deviation,
    })
}

fn interp(rows: &[(f64, f64)], u: f64) -> f64 {
    let i = rows
        .partition_point(|&(um, _)| um <= u)
        .clamp(1, rows.len() - 1);
    let (u0, p0) = rows[i - 1];
    let (u1, p1) = rows[i];
    p0 + (u - u0) * (p1 - p0) / (u1 - u0)
}
