//! Phase-plane analysis of the diffusive-dispersive augmented model.
//!
//! Traveling profiles w(y) of u_t + f(u)_x = α(|u_x|^p u_x)_x + u_xxx solve
//! the planar system w′ = z, z′ = h(w) − α|z|^p z with
//! h(w) = −λ(w − u₋) + f(w) − f(u₋). Saddle-to-saddle connections select the
//! nonclassical state: bisection on the speed λ, classifying each shot as
//! captured by the middle equilibrium or escaped past the far saddle, closes
//! in on the kinetic value φ♭_{α,p}(u₋).

use crate::core_models::{EntropyPair, FluxModel};
use crate::roots;
use crate::table::KineticTable;
use crate::{Error, Result};
use rayon::prelude::*;

/// Regularization of |z|^p z at z = 0 for p < 1: (z² + η²)^{p/2} z.
const ETA: f64 = 1e-12;

/// The augmented model: flux plus diffusion coefficient α > 0 and diffusion
/// nonlinearity exponent p ≥ 0. The small parameter of the original model is
/// scaled out.
#[derive(Debug, Clone)]
pub struct TwModel {
    pub flux: FluxModel,
    pub alpha: f64,
    pub p: f64,
}

impl TwModel {
    pub fn new(flux: FluxModel, alpha: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidModel(format!("alpha = {alpha} must be positive")));
        }
        if !(p >= 0.0) {
            return Err(Error::InvalidModel(format!("p = {p} must be non-negative")));
        }
        Ok(Self { flux, alpha, p })
    }

    /// Chord residual h(w) = −λ(w − u₋) + f(w) − f(u₋); equilibria of the
    /// planar system are its roots.
    pub fn chord_residual(&self, u_minus: f64, lambda: f64, w: f64) -> f64 {
        -lambda * (w - u_minus) + self.flux.f(w) - self.flux.f(u_minus)
    }

    fn damping(&self, z: f64) -> f64 {
        self.alpha * (z * z + ETA * ETA).powf(0.5 * self.p) * z
    }

    fn rhs(&self, u_minus: f64, lambda: f64, w: f64, z: f64) -> (f64, f64) {
        (z, self.chord_residual(u_minus, lambda, w) - self.damping(z))
    }
}

/// All roots of the chord residual, ascending, with double roots repeated.
/// u₋ is always among them.
pub fn equilibria(model: &TwModel, u_minus: f64, lambda: f64) -> Vec<f64> {
    let h = |w: f64| model.chord_residual(u_minus, lambda, w);
    let bound = 3.0 * u_minus.abs() + 1.0;
    let scale = u_minus.abs().max(1.0);
    let n = 2000;
    let mut found: Vec<f64> = Vec::new();
    let push = |r: f64, out: &mut Vec<f64>| {
        // Snap to u_minus, which is a root exactly.
        let r = if (r - u_minus).abs() <= 1e-7 * scale { u_minus } else { r };
        out.push(r);
    };
    let mut prev_w = -bound;
    let mut prev_h = h(prev_w);
    for i in 1..=n {
        let w = -bound + 2.0 * bound * i as f64 / n as f64;
        let hw = h(w);
        if prev_h == 0.0 {
            push(prev_w, &mut found);
        } else if hw != 0.0 && prev_h.signum() != hw.signum() {
            if let Ok(r) = roots::bracketed(h, prev_w, w, 1e-14 * scale, "equilibria") {
                push(r, &mut found);
            }
        }
        prev_w = w;
        prev_h = hw;
    }
    if prev_h == 0.0 {
        push(prev_w, &mut found);
    }
    // Double roots at critical points of h (h' = f' - lambda = 0) leave no
    // sign change; detect them separately on each side of the inflection.
    if lambda > model.flux.df(0.0) {
        for bracket in [(-bound, 0.0), (0.0, bound)] {
            if let Ok(c) = roots::bracketed(
                |w| model.flux.df(w) - lambda,
                bracket.0,
                bracket.1,
                1e-13 * scale,
                "equilibria critical point",
            ) {
                if h(c).abs() <= 1e-9 * scale.powi(3) {
                    // A critical point with h = 0 is a double root; make sure
                    // two copies are present whatever the scan found.
                    let near = found.iter().filter(|&&r| (r - c).abs() <= 1e-6 * scale).count();
                    for _ in near..2 {
                        push(c, &mut found);
                    }
                }
            }
        }
    }
    if !found.iter().any(|&r| r == u_minus) {
        found.push(u_minus);
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Merge numerical duplicates of simple roots (keep intentional doubles).
    found.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * scale && *a != *b);
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    ConvergedToFarSaddle,
    CapturedByMiddle,
    Escaped,
    Budget,
}

/// One shot: the integrated orbit with its classification.
#[derive(Debug, Clone)]
pub struct TwTrajectory {
    pub u_minus: f64,
    pub lambda: f64,
    /// (y, w, w′) along the orbit.
    pub samples: Vec<(f64, f64, f64)>,
    pub terminal: Terminal,
    /// Far equilibrium u₁ (the saddle-saddle target).
    pub far_state: f64,
    /// Middle equilibrium u₂ (the classical target).
    pub middle_state: f64,
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-12;
const MAX_STEP: f64 = 0.25;

/// Cubic Hermite value at fraction s of a step with endpoint values/slopes.
fn hermite(s: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * d1
}

/// Integrate from the unstable manifold of the saddle at u₋ until a terminal
/// event classifies the orbit.
pub fn shoot(model: &TwModel, u_minus: f64, lambda: f64) -> TwTrajectory {
    let eq = equilibria(model, u_minus, lambda);
    let scale = u_minus.abs().max(1.0);
    // Far and middle targets depend on which side the saddle sits.
    let (far, middle) = if u_minus > 0.0 {
        (eq[0], if eq.len() >= 3 { eq[1] } else { eq[0] })
    } else {
        (
            eq[eq.len() - 1],
            if eq.len() >= 3 { eq[eq.len() - 2] } else { eq[eq.len() - 1] },
        )
    };
    // Launch along the unstable eigenvector heading toward the far side.
    let hprime = model.flux.df(u_minus) - lambda;
    let damping_slope = if model.p == 0.0 { model.alpha } else { 0.0 };
    let mu = 0.5 * (-damping_slope + (damping_slope * damping_slope + 4.0 * hprime.max(0.0)).sqrt());
    let dir = -u_minus.signum();
    let delta = 1e-9 * scale / mu.max(1.0);
    let mut w = u_minus + dir * delta;
    let mut z = dir * delta * mu;
    let mut y = 0.0;
    let mut samples = vec![(y, w, z)];
    let mut terminal = Terminal::Budget;
    let budget = 1e4 * scale;
    let mut arc = 0.0;
    let mut h = 1e-3;
    let tol_pos = 1e-9 * scale;
    let mut steps: u32 = 0;

    'outer: while arc < budget && steps < 2_000_000 {
        steps += 1;
        if h < 1e-13 {
            break;
        }
        let (mut k_w, mut k_z) = ([0.0f64; 7], [0.0f64; 7]);
        let (d0w, d0z) = model.rhs(u_minus, lambda, w, z);
        k_w[0] = d0w;
        k_z[0] = d0z;
        for i in 0..6 {
            let mut ww = w;
            let mut zz = z;
            for j in 0..=i {
                ww += h * DP_A[i][j] * k_w[j];
                zz += h * DP_A[i][j] * k_z[j];
            }
            let _ = DP_C; // stage abscissae unused for an autonomous system
            let (dw, dz) = model.rhs(u_minus, lambda, ww, zz);
            k_w[i + 1] = dw;
            k_z[i + 1] = dz;
        }
        // 5th-order solution uses the row DP_A[5] (FSAL layout).
        let mut w1 = w;
        let mut z1 = z;
        for j in 0..6 {
            w1 += h * DP_A[5][j] * k_w[j];
            z1 += h * DP_A[5][j] * k_z[j];
        }
        let mut err_w = 0.0;
        let mut err_z = 0.0;
        for j in 0..7 {
            err_w += DP_E[j] * k_w[j];
            err_z += DP_E[j] * k_z[j];
        }
        err_w *= h;
        err_z *= h;
        let tol_w = ATOL + RTOL * w.abs().max(w1.abs());
        let tol_z = ATOL + RTOL * z.abs().max(z1.abs());
        let err = ((err_w / tol_w).powi(2) + (err_z / tol_z).powi(2)).sqrt() / 2f64.sqrt();
        if err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            continue;
        }
        // Accepted step; locate the earliest event inside it if any.
        let (d1w, d1z) = model.rhs(u_minus, lambda, w1, z1);
        let interp_w = |s: f64| hermite(s, h, w, d0w, w1, d1w);
        let interp_z = |s: f64| hermite(s, h, z, d0z, z1, d1z);

        let mut event: Option<(f64, Terminal)> = None;
        // Middle capture: z crosses zero while w sits between the far and
        // near equilibria.
        if z.signum() != z1.signum() && z1 != 0.0 {
            if let Ok(s) = roots::bracketed(interp_z, 0.0, 1.0, 1e-12, "z crossing") {
                let wc = interp_w(s);
                let inside = if u_minus > 0.0 {
                    wc > far + tol_pos && wc < u_minus
                } else {
                    wc < far - tol_pos && wc > u_minus
                };
                if inside {
                    event = Some((s, Terminal::CapturedByMiddle));
                }
            }
        }
        // Escape: w crosses the far saddle still moving outward.
        let crossed = |a: f64, b: f64| (a - far).signum() != (b - far).signum();
        if event.is_none() && crossed(w, w1) {
            if let Ok(s) = roots::bracketed(|s| interp_w(s) - far, 0.0, 1.0, 1e-12, "w crossing") {
                let zc = interp_z(s);
                if zc * dir > 0.0 {
                    event = Some((s, Terminal::Escaped));
                }
            }
        }
        // Convergence to the far saddle.
        let dist = ((w1 - far).powi(2) + z1 * z1).sqrt();
        if dist <= tol_pos {
            samples.push((y + h, w1, z1));
            terminal = Terminal::ConvergedToFarSaddle;
            break 'outer;
        }
        // Strong damping turns the middle equilibrium into a node: the orbit
        // sinks into it without w′ ever changing sign. Proximity is capture,
        // since the middle state attracts and the energy only decays.
        if event.is_none() && eq.len() >= 3 {
            let dm = ((w1 - middle).powi(2) + z1 * z1).sqrt();
            if dm <= 1e-6 * scale {
                samples.push((y + h, w1, z1));
                terminal = Terminal::CapturedByMiddle;
                break 'outer;
            }
        }
        if let Some((s, t)) = event {
            let yc = y + s * h;
            let wc = interp_w(s);
            let zc = interp_z(s);
            // Grazing the saddle is classified as the connection: the miss
            // distance shrinks with |λ − λ*| much more slowly than the λ
            // bisection width, so a pass this close pins the speed already.
            let d = ((wc - far).powi(2) + zc * zc).sqrt();
            samples.push((yc, wc, zc));
            terminal = if d <= 1e-6 * scale { Terminal::ConvergedToFarSaddle } else { t };
            break 'outer;
        }
        arc += ((w1 - w).powi(2) + (z1 - z).powi(2)).sqrt();
        y += h;
        w = w1;
        z = z1;
        samples.push((y, w, z));
        h = (h * (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0)).min(MAX_STEP);
    }
    TwTrajectory {
        u_minus,
        lambda,
        samples,
        terminal,
        far_state: far,
        middle_state: middle,
    }
}

/// The kinetic value φ♭_{α,p}(u₋): bisection on λ between the tangent chord
/// speed and f′(u₋), homing in on the saddle-saddle connection. When the
/// whole bracket classifies the same way (diffusion-dominated regime) the
/// kinetic function touches the tangent map and φ♮(u₋) is returned exactly.
pub fn kinetic_value(model: &TwModel, u_minus: f64) -> Result<f64> {
    let tangent = model.flux.tangent(u_minus)?;
    let lambda_lo = model.flux.shock_speed(u_minus, tangent)?;
    // The profile dissipates the quadratic entropy strictly, so any connection
    // sits below the chord speed of the zero-dissipation state. Bracketing
    // with that speed (instead of f'(u₋)) also keeps the unstable eigenvalue
    // at the launch saddle bounded away from zero.
    let pair = EntropyPair::quadratic(model.flux.clone());
    let zero = pair.zero_dissipation(u_minus)?;
    let lambda_hi = model.flux.shock_speed(u_minus, zero)?;
    let width = lambda_hi - lambda_lo;
    let eps = 1e-7 * width;
    let classify = |lambda: f64| -> Terminal {
        let t = shoot(model, u_minus, lambda);
        match t.terminal {
            Terminal::Budget => {
                // Orbits that stall do so while orbiting the middle region.
                let (_, w, _) = *t.samples.last().unwrap();
                let inward = if u_minus > 0.0 { w > t.far_state } else { w < t.far_state };
                if inward {
                    Terminal::CapturedByMiddle
                } else {
                    Terminal::Escaped
                }
            }
            other => other,
        }
    };
    let mut lo = lambda_lo + eps;
    let mut hi = lambda_hi;
    let c_lo = classify(lo);
    let c_hi = classify(hi);
    if c_lo == Terminal::ConvergedToFarSaddle {
        return Ok(pick_far(model, u_minus, lo));
    }
    if c_hi == Terminal::ConvergedToFarSaddle {
        return Ok(pick_far(model, u_minus, hi));
    }
    if c_lo == c_hi {
        return Ok(tangent);
    }
    let tol = 1e-12 * lambda_hi.abs().max(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            // The escape/capture transition pinned down to machine precision
            // without the orbit ever grazing the far saddle: that happens in
            // the classical regime, where the near-merged lower equilibria
            // let the orbit slip through. A true saddle-saddle connection
            // brings the transition orbit within the grazing tolerance.
            let t = shoot(model, u_minus, mid);
            let scale = u_minus.abs().max(1.0);
            let dmin = t
                .samples
                .iter()
                .map(|&(_, w, z)| ((w - t.far_state).powi(2) + z * z).sqrt())
                .fold(f64::INFINITY, f64::min);
            if t.terminal == Terminal::ConvergedToFarSaddle || dmin <= 1e-5 * scale {
                return Ok(pick_far(model, u_minus, mid));
            }
            return Ok(tangent);
        }
        match classify(mid) {
            Terminal::ConvergedToFarSaddle => return Ok(pick_far(model, u_minus, mid)),
            c if c == c_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Err(Error::BisectionBudget {
        lo,
        hi,
        u_minus,
        max_iter: 200,
    })
}

fn pick_far(model: &TwModel, u_minus: f64, lambda: f64) -> f64 {
    let eq = equilibria(model, u_minus, lambda);
    if u_minus > 0.0 {
        eq[0]
    } else {
        eq[eq.len() - 1]
    }
}

/// Tabulate the kinetic function over a u grid, with φ♭′(0) extrapolated
/// from the three entries of smallest magnitude.
pub fn kinetic_table(model: &TwModel, u_grid: &[f64]) -> Result<KineticTable> {
    if u_grid.iter().any(|&u| u == 0.0) {
        return Err(Error::InvalidModel("u grid contains the inflection point".into()));
    }
    let rows: Vec<(f64, f64)> = u_grid
        .par_iter()
        .map(|&u| kinetic_value(model, u).map(|v| (u, v)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = rows;
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let slope = slope_at_zero(&rows);
    let mut table = KineticTable::new(model.flux.name(), rows)?;
    table.slope_at_zero = Some(slope);
    Ok(table
        .with_meta("source", "tw")
        .with_meta("alpha", &format!("{}", model.alpha))
        .with_meta("p", &format!("{}", model.p)))
}

/// Richardson-style extrapolation of φ♭(u)/u to u = 0 through the three rows
/// of smallest |u| (Lagrange at zero).
pub(crate) fn slope_at_zero(rows: &[(f64, f64)]) -> f64 {
    let mut by_mag: Vec<(f64, f64)> = rows.to_vec();
    by_mag.sort_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap());
    let pts: Vec<(f64, f64)> = by_mag
        .iter()
        .take(3)
        .map(|&(u, v)| (u.abs(), v / u))
        .collect();
    match pts.len() {
        0 => f64::NAN,
        1 => pts[0].1,
        2 => {
            let (x0, s0) = pts[0];
            let (x1, s1) = pts[1];
            (x1 * s0 - x0 * s1) / (x1 - x0)
        }
        _ => {
            let mut acc = 0.0;
            for i in 0..3 {
                let (xi, si) = pts[i];
                let mut l = 1.0;
                for j in 0..3 {
                    if j != i {
                        let xj = pts[j].0;
                        l *= -xj / (xi - xj);
                    }
                }
                acc += si * l;
            }
            acc
        }
    }
}

/// Threshold diffusion A♮ₚ(u₋) above which all shocks from u₋ are classical;
/// defined for p ≤ 1/3. Bisection on log α over [1e-4, 1e4].
pub fn classical_threshold(flux: &FluxModel, p: f64, u_minus: f64) -> Result<f64> {
    if p > 1.0 / 3.0 {
        return Err(Error::InvalidModel(format!(
            "classical threshold is only defined for p <= 1/3 (got p = {p})"
        )));
    }
    let tangent = flux.tangent(u_minus)?;
    let is_classical = |alpha: f64| -> Result<bool> {
        let model = TwModel::new(flux.clone(), alpha, p)?;
        let v = kinetic_value(&model, u_minus)?;
        Ok((v - tangent).abs() <= 1e-8 * u_minus.abs().max(1.0))
    };
    let (lo, hi) = (1e-4, 1e4);
    if is_classical(lo)? || !is_classical(hi)? {
        return Err(Error::ThresholdOutsideRange { lo, hi, u_minus });
    }
    let mut llo = lo.ln();
    let mut lhi = hi.ln();
    for _ in 0..40 {
        let mid = 0.5 * (llo + lhi);
        if is_classical(mid.exp())? {
            lhi = mid;
        } else {
            llo = mid;
        }
    }
    Ok((0.5 * (llo + lhi)).exp())
}

/// Entropy dissipation of a connecting orbit by quadrature along the
/// trajectory: −α ∫ |w′|^{p+2} U″(w) dy. Hermite midpoints feed a composite
/// Simpson rule so the result tracks the integrator accuracy.
pub fn tw_dissipation(traj: &TwTrajectory, model: &TwModel, pair: &EntropyPair) -> Result<f64> {
    if traj.terminal != Terminal::ConvergedToFarSaddle {
        return Err(Error::NotConnecting(traj.u_minus, traj.terminal));
    }
    // |w'|^{p+2} = |z|^p z^2, with the same z-regularization the flow uses.
    let g = |w: f64, z: f64| {
        model.alpha * (z * z + ETA * ETA).powf(0.5 * model.p) * z * z * pair.d2u(w)
    };
    let mut acc = 0.0;
    for pair_w in traj.samples.windows(2) {
        let (y0, w0, z0) = pair_w[0];
        let (y1, w1, z1) = pair_w[1];
        let h = y1 - y0;
        if h <= 0.0 {
            continue;
        }
        let (_, d0z) = model.rhs(traj.u_minus, traj.lambda, w0, z0);
        let (_, d1z) = model.rhs(traj.u_minus, traj.lambda, w1, z1);
        let wm = hermite(0.5, h, w0, z0, w1, z1);
        let zm = hermite(0.5, h, z0, d0z, z1, d1z);
        acc += h / 6.0 * (g(w0, z0) + 4.0 * g(wm, zm) + g(w1, z1));
    }
    Ok(-acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_model(alpha: f64, p: f64) -> TwModel {
        TwModel::new(FluxModel::cubic(), alpha, p).unwrap()
    }

    #[test]
    fn equilibria_examples() {
        let m = cubic_model(1.0, 0.0);
        let eq = equilibria(&m, 1.0, 0.8125);
        assert_eq!(eq.len(), 3);
        assert!((eq[0] + 0.75).abs() < 1e-10);
        assert!((eq[1] + 0.25).abs() < 1e-10);
        assert!((eq[2] - 1.0).abs() < 1e-12);

        // lambda = f'(u) puts a double root at u itself.
        let eq = equilibria(&m, 1.0, 3.0);
        assert!((eq[0] + 2.0).abs() < 1e-9);
        assert!(eq.iter().filter(|&&r| (r - 1.0).abs() < 1e-6).count() >= 2);

        // tangency: u1 = u2 at the tangent state.
        let eq = equilibria(&m, 1.0, 0.75);
        assert!(eq.iter().filter(|&&r| (r + 0.5).abs() < 1e-6).count() >= 2);
        assert!((eq[eq.len() - 1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diffusion_dominated_shot_is_captured() {
        let m = cubic_model(10.0, 0.0);
        let t = shoot(&m, 1.0, 0.75 + 1e-3);
        assert_eq!(t.terminal, Terminal::CapturedByMiddle);
    }

    #[test]
    fn small_alpha_has_bracketed_connection() {
        let m = cubic_model(0.1, 0.0);
        let lo = shoot(&m, 1.0, 0.76);
        let hi = shoot(&m, 1.0, 2.9);
        assert_ne!(lo.terminal, hi.terminal);
        let v = kinetic_value(&m, 1.0).unwrap();
        // strictly nonclassical: below the tangent state.
        assert!(v < -0.5 - 1e-4, "kinetic value {v}");
        assert!(v > -1.0);
    }

    #[test]
    fn energy_is_monotone_along_orbits() {
        let m = cubic_model(0.5, 0.5);
        let t = shoot(&m, 1.0, 1.2);
        let potential = |w: f64| {
            // H(w) = int h: closed form for the cubic
            let u = t.u_minus;
            let lam = t.lambda;
            0.25 * (w.powi(4) - u.powi(4)) - u.powi(3) * (w - u) - 0.5 * lam * (w - u).powi(2)
        };
        let mut prev = f64::INFINITY;
        for &(_, w, z) in t.samples.iter().step_by(10) {
            let e = 0.5 * z * z - potential(w);
            assert!(e <= prev + 1e-8, "Lyapunov increased: {prev} -> {e}");
            prev = e;
        }
    }

    #[test]
    fn classical_regime_returns_tangent_exactly() {
        let m = cubic_model(10.0, 0.0);
        let v = kinetic_value(&m, 1.0).unwrap();
        assert_eq!(v, m.flux.tangent(1.0).unwrap());
    }

    #[test]
    fn p_half_kinetic_function_is_linear() {
        let m = cubic_model(1.0, 0.5);
        let base = kinetic_value(&m, 1.0).unwrap();
        let c = -base;
        assert!(c > 0.5 && c < 1.0, "c_alpha = {c}");
        for u in [0.2, 0.6, 1.5, 2.0] {
            let v = kinetic_value(&m, u).unwrap();
            assert!(
                (v / u + c).abs() <= 0.01 * c,
                "slope drift at u = {u}: {} vs {c}",
                -v / u
            );
        }
    }

    #[test]
    fn dissipation_identity_on_connecting_orbit() {
        let m = cubic_model(1.0, 0.5);
        let pair = EntropyPair::quadratic(m.flux.clone());
        let u = 1.0;
        let v = kinetic_value(&m, u).unwrap();
        let lambda = m.flux.shock_speed(u, v).unwrap();
        let t = shoot(&m, u, lambda);
        // At the bisected speed the orbit connects (or grazes within tol).
        if t.terminal == Terminal::ConvergedToFarSaddle {
            let quad = tw_dissipation(&t, &m, &pair).unwrap();
            let closed = pair.entropy_dissipation(u, v).unwrap();
            assert!(quad < 0.0);
            assert!(
                (quad - closed).abs() <= 1e-6 * closed.abs(),
                "quadrature {quad} vs closed form {closed}"
            );
        } else {
            panic!("orbit at the kinetic speed did not connect: {:?}", t.terminal);
        }
    }

    #[test]
    fn slope_extrapolation_recovers_linear_table() {
        let rows: Vec<(f64, f64)> = [0.1, 0.2, 0.4, 0.8]
            .iter()
            .map(|&u| (u, -0.7 * u))
            .collect();
        assert!((slope_at_zero(&rows) + 0.7).abs() < 1e-12);
    }
}
