//! Flux, entropy, and kinetic-function algebra.
//!
//! Everything here is pointwise: the concave-convex flux f with its tangent
//! map φ♮, the entropy dissipation E(u₋,u₊) of an entropy pair with its
//! zero-dissipation map φ♭₀, and kinetic functions φ♭ with their companion
//! threshold φ♯.

use std::fmt;
use std::sync::Arc;

use crate::quad::{adaptive_simpson, gauss16};
use crate::roots;
use crate::{Error, Result, DEGENERACY_THRESHOLD};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Log-spaced magnitudes used by construction-time self checks, both signs.
fn check_grid() -> Vec<f64> {
    let mut g = Vec::with_capacity(64);
    for i in 0..32 {
        let u = 1e-3 * (3.0f64 / 1e-3).powf(i as f64 / 31.0);
        g.push(u);
        g.push(-u);
    }
    g
}

/// A scalar flux with a single inflection point at u = 0, convex for u > 0
/// and concave for u < 0, together with analytic first and second derivatives.
#[derive(Clone)]
pub struct FluxModel {
    f: ScalarFn,
    df: ScalarFn,
    d2f: ScalarFn,
    name: String,
}

impl fmt::Debug for FluxModel {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("FluxModel").field("name", &self.name).finish()
    }
}

impl FluxModel {
    /// Build a flux model; runs the concave-convex and derivative
    /// self-checks on a fixed grid.
    pub fn new(name: &str, f: ScalarFn, df: ScalarFn, d2f: ScalarFn) -> Result<Self> {
        let model = Self {
            f,
            df,
            d2f,
            name: name.to_string(),
        };
        model.self_check()?;
        Ok(model)
    }

    /// The built-in cubic flux f(u) = u³.
    pub fn cubic() -> Self {
        Self::new(
            "cubic",
            Arc::new(|u: f64| u * u * u),
            Arc::new(|u: f64| 3.0 * u * u),
            Arc::new(|u: f64| 6.0 * u),
        )
        .expect("cubic flux passes its own self-check")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self, u: f64) -> f64 {
        (self.f)(u)
    }

    /// Characteristic speed f′(u).
    pub fn df(&self, u: f64) -> f64 {
        (self.df)(u)
    }

    pub fn d2f(&self, u: f64) -> f64 {
        (self.d2f)(u)
    }

    fn self_check(&self) -> Result<()> {
        for &u in &check_grid() {
            if u * self.d2f(u) <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "flux '{}' is not concave-convex at u = {u}: u*f''(u) = {}",
                    self.name,
                    u * self.d2f(u)
                )));
            }
            // df really is the derivative of f (central difference, O(h^2)).
            let h = 1e-5 * u.abs().max(1.0);
            let fd = (self.f(u + h) - self.f(u - h)) / (2.0 * h);
            let scale = 1.0 + self.df(u).abs() + self.d2f(u).abs();
            if (fd - self.df(u)).abs() > 1e-6 * scale {
                return Err(Error::InvalidModel(format!(
                    "flux '{}': df mismatch at u = {u}: fd = {fd}, df = {}",
                    self.name,
                    self.df(u)
                )));
            }
        }
        // Characteristic speed grows at the grid extremes.
        if self.df(3.0) <= self.df(0.0) || self.df(-3.0) <= self.df(0.0) {
            return Err(Error::InvalidModel(format!(
                "flux '{}': f' does not grow away from the inflection",
                self.name
            )));
        }
        Ok(())
    }

    /// Chord slope λ̄(u₋,u₊) = (f(u₋) − f(u₊))/(u₋ − u₊); symmetric in its
    /// arguments.
    pub fn shock_speed(&self, u_minus: f64, u_plus: f64) -> Result<f64> {
        if u_minus == u_plus {
            return Err(Error::DegenerateShock(u_minus));
        }
        Ok((self.f(u_minus) - self.f(u_plus)) / (u_minus - u_plus))
    }

    /// Tangent map φ♮(u): the state of opposite sign whose chord from u is
    /// tangent to the flux graph, f′(φ♮) = λ̄(u, φ♮).
    pub fn tangent(&self, u: f64) -> Result<f64> {
        if u.abs() <= DEGENERACY_THRESHOLD {
            return Ok(0.0);
        }
        // g(phi) = f'(phi)(u - phi) - f(u) + f(phi); a sign change is
        // guaranteed on the bracket between -u and the inflection.
        let g = |phi: f64| self.df(phi) * (u - phi) - self.f(u) + self.f(phi);
        let tiny = DEGENERACY_THRESHOLD * u.abs().max(1.0);
        let (lo, hi) = if u > 0.0 { (-u, -tiny) } else { (tiny, -u) };
        roots::bracketed(g, lo, hi, roots::ARG_TOL * u.abs().max(1.0), "tangent")
    }
}

/// A strictly convex entropy U with its flux F (F′ = f′·U′), paired with the
/// flux model it belongs to.
#[derive(Clone)]
pub struct EntropyPair {
    u: ScalarFn,
    du: ScalarFn,
    d2u: ScalarFn,
    f_flux: ScalarFn,
    flux: FluxModel,
    name: String,
}

impl fmt::Debug for EntropyPair {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("EntropyPair")
            .field("name", &self.name)
            .field("flux", &self.flux.name)
            .finish()
    }
}

impl EntropyPair {
    pub fn new(
        name: &str,
        flux: FluxModel,
        u: ScalarFn,
        du: ScalarFn,
        d2u: ScalarFn,
        f_flux: ScalarFn,
    ) -> Result<Self> {
        let pair = Self {
            u,
            du,
            d2u,
            f_flux,
            flux,
            name: name.to_string(),
        };
        pair.self_check()?;
        Ok(pair)
    }

    /// The default quadratic entropy U(u) = u²/2 with F(u) = ∫₀ᵘ v f′(v) dv.
    pub fn quadratic(flux: FluxModel) -> Self {
        let fq = flux.clone();
        let f_flux: ScalarFn = Arc::new(move |u: f64| gauss16(|v| v * fq.df(v), 0.0, u));
        Self::new(
            "quadratic",
            flux,
            Arc::new(|u: f64| 0.5 * u * u),
            Arc::new(|u: f64| u),
            Arc::new(|_| 1.0),
            f_flux,
        )
        .expect("quadratic entropy passes its own self-check")
    }

    fn self_check(&self) -> Result<()> {
        for &u in &check_grid() {
            if self.d2u(u) <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "entropy '{}' is not strictly convex at u = {u}",
                    self.name
                )));
            }
            // Compatibility F' = f' U' via central difference.
            let h = 1e-5 * u.abs().max(1.0);
            let fd = (self.f_flux(u + h) - self.f_flux(u - h)) / (2.0 * h);
            let exact = self.flux.df(u) * self.du(u);
            let scale = 1.0 + exact.abs() + u.abs().powi(3);
            if (fd - exact).abs() > 1e-6 * scale {
                return Err(Error::InvalidModel(format!(
                    "entropy '{}': F' != f' U' at u = {u} (fd = {fd}, exact = {exact})",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flux(&self) -> &FluxModel {
        &self.flux
    }

    pub fn u(&self, x: f64) -> f64 {
        (self.u)(x)
    }

    /// Entropy variable v = U′(u).
    pub fn du(&self, x: f64) -> f64 {
        (self.du)(x)
    }

    pub fn d2u(&self, x: f64) -> f64 {
        (self.d2u)(x)
    }

    pub fn f_flux(&self, x: f64) -> f64 {
        (self.f_flux)(x)
    }

    /// Entropy dissipation E(u₋,u₊) = −λ̄·(U(u₊)−U(u₋)) + F(u₊)−F(u₋),
    /// closed form.
    pub fn entropy_dissipation(&self, u_minus: f64, u_plus: f64) -> Result<f64> {
        let speed = self.flux.shock_speed(u_minus, u_plus)?;
        Ok(-speed * (self.u(u_plus) - self.u(u_minus)) + self.f_flux(u_plus) - self.f_flux(u_minus))
    }

    /// The same quantity by adaptive quadrature of the integral identity
    /// E = −∫ U″(v)(v−u₋)(λ̄(u₋,v) − λ̄(u₋,u₊)) dv; used for cross-validation
    /// against the closed form.
    pub fn entropy_dissipation_integral(&self, u_minus: f64, u_plus: f64) -> Result<f64> {
        let lambda = self.flux.shock_speed(u_minus, u_plus)?;
        let integrand = |v: f64| {
            let chord = if (v - u_minus).abs() < 1e-300 {
                self.flux.df(u_minus)
            } else {
                (self.flux.f(v) - self.flux.f(u_minus)) / (v - u_minus)
            };
            self.d2u(v) * (v - u_minus) * (chord - lambda)
        };
        Ok(-adaptive_simpson(&integrand, u_minus, u_plus, 1e-13))
    }

    /// Zero-dissipation map φ♭₀(u): the state ≠ u with E(u, φ♭₀(u)) = 0.
    pub fn zero_dissipation(&self, u: f64) -> Result<f64> {
        if u.abs() <= DEGENERACY_THRESHOLD {
            return Ok(0.0);
        }
        let tangent = self.flux.tangent(u)?;
        // E(u, .) is negative on (phi_flat_0, u); expand past the tangent
        // state until the sign flips.
        let g = |v: f64| self.entropy_dissipation(u, v).unwrap_or(f64::NAN);
        let probe = tangent - u.signum() * u.abs().max(DEGENERACY_THRESHOLD);
        // Tight tolerance: generalized wave strengths difference this value and
        // must resolve balances at the 1e-12 level.
        roots::expand_and_solve(g, tangent, probe, 1e-15 * u.abs().max(1.0), "zero_dissipation")
    }
}

/// Shock classification by Lax / undercompressive characteristic patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockClass {
    Lax,
    SlowUndercompressive,
    FastUndercompressive,
    Inadmissible,
}

/// Compare the characteristic speeds f′(u₋), f′(u₊) with the chord speed.
pub fn classify_shock(flux: &FluxModel, u_minus: f64, u_plus: f64) -> Result<ShockClass> {
    let speed = flux.shock_speed(u_minus, u_plus)?;
    let tol = 1e-12 * (1.0 + u_minus.abs() + u_plus.abs()).powi(2);
    let left = flux.df(u_minus);
    let right = flux.df(u_plus);
    Ok(if left >= speed - tol && speed >= right - tol {
        ShockClass::Lax
    } else if left.min(right) >= speed - tol {
        ShockClass::SlowUndercompressive
    } else if left.max(right) <= speed + tol {
        ShockClass::FastUndercompressive
    } else {
        ShockClass::Inadmissible
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockKind {
    Classical,
    Nonclassical,
}

/// A single admissible discontinuity with its speed.
#[derive(Debug, Clone, Copy)]
pub struct ShockData {
    pub u_minus: f64,
    pub u_plus: f64,
    pub speed: f64,
    pub kind: ShockKind,
}

impl ShockData {
    pub fn new(flux: &FluxModel, u_minus: f64, u_plus: f64, kind: ShockKind) -> Result<Self> {
        let speed = flux.shock_speed(u_minus, u_plus)?;
        Ok(Self {
            u_minus,
            u_plus,
            speed,
            kind,
        })
    }

    /// Rankine-Hugoniot residual; zero up to rounding by construction.
    pub fn rh_residual(&self, flux: &FluxModel) -> f64 {
        -self.speed * (self.u_plus - self.u_minus) + flux.f(self.u_plus) - flux.f(self.u_minus)
    }

    pub fn validate(&self, pair: &EntropyPair) -> Result<()> {
        let scale = (1.0 + self.u_minus.abs() + self.u_plus.abs()).powi(3);
        if self.rh_residual(pair.flux()).abs() > 1e-12 * scale {
            return Err(Error::InvalidModel(format!(
                "shock ({}, {}): Rankine-Hugoniot residual {}",
                self.u_minus,
                self.u_plus,
                self.rh_residual(pair.flux())
            )));
        }
        let e = pair.entropy_dissipation(self.u_minus, self.u_plus)?;
        if e > 1e-12 * scale {
            return Err(Error::InvalidModel(format!(
                "shock ({}, {}): positive entropy dissipation {e}",
                self.u_minus, self.u_plus
            )));
        }
        Ok(())
    }
}

/// A kinetic function φ♭: the selection rule u₊ = φ♭(u₋) for nonclassical
/// shocks, with its contraction constant K for the front-tracking theory.
#[derive(Clone)]
pub struct KineticFunction {
    phi: ScalarFn,
    pub lipschitz_bound: f64,
    pub contraction_k: f64,
    pub description: String,
}

impl fmt::Debug for KineticFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("KineticFunction")
            .field("description", &self.description)
            .field("contraction_k", &self.contraction_k)
            .finish()
    }
}

impl KineticFunction {
    /// The linear family φ♭(u) = −c·u. For the cubic flux the kinetic range
    /// is c ∈ [1/2, 1); the second iterate has K = c².
    pub fn linear(c: f64) -> Result<Self> {
        if !(0.0 < c && c < 1.0) {
            return Err(Error::InvalidKinetic(format!(
                "linear slope c = {c} must lie in (0, 1) for the contraction property"
            )));
        }
        Ok(Self {
            phi: Arc::new(move |u: f64| -c * u),
            lipschitz_bound: c,
            contraction_k: c * c,
            description: format!("linear c={c}"),
        })
    }

    /// The classical choice φ♭ = φ♮, under which the Riemann solver produces
    /// Oleinik solutions only.
    pub fn classical(flux: &FluxModel) -> Result<Self> {
        let fx = flux.clone();
        let phi: ScalarFn = Arc::new(move |u: f64| fx.tangent(u).unwrap_or(f64::NAN));
        // Lipschitz and contraction constants estimated on the check grid.
        let mut lip: f64 = 0.0;
        let mut k: f64 = 0.0;
        for &u in &check_grid() {
            let p = phi(u);
            lip = lip.max((p / u).abs());
            k = k.max((phi(p) / u).abs());
        }
        if !(k < 1.0) {
            return Err(Error::InvalidKinetic(format!(
                "classical kinetic function of flux '{}' is not a strict contraction (K = {k})",
                flux.name()
            )));
        }
        Ok(Self {
            phi,
            lipschitz_bound: lip,
            contraction_k: k,
            description: format!("classical ({})", flux.name()),
        })
    }

    /// Wrap an arbitrary map; callers are expected to `validate` before use.
    pub fn from_fn(description: &str, phi: ScalarFn, lipschitz_bound: f64, contraction_k: f64) -> Self {
        Self {
            phi,
            lipschitz_bound,
            contraction_k,
            description: description.to_string(),
        }
    }

    pub fn phi(&self, u: f64) -> f64 {
        if u.abs() <= DEGENERACY_THRESHOLD {
            0.0
        } else {
            (self.phi)(u)
        }
    }

    /// Companion threshold φ♯(u): the state ≠ φ♭(u) with the same chord
    /// speed, λ̄(u, φ♯) = λ̄(u, φ♭); lies between φ♭(u) and u.
    pub fn companion(&self, flux: &FluxModel, u: f64) -> Result<f64> {
        if u.abs() <= DEGENERACY_THRESHOLD {
            return Ok(0.0);
        }
        let tangent = flux.tangent(u)?;
        let phi = self.phi(u);
        let tol = 1e-10 * u.abs().max(1.0);
        if (phi - tangent).abs() <= tol {
            // Double tangency: the two equal-chord roots collapse.
            return Ok(tangent);
        }
        let target = flux.shock_speed(u, phi)?;
        // The chord speed v -> lambda(u, v) is minimal at the tangent state
        // and increases toward f'(u) as v -> u; the second equal-chord root
        // lies strictly between them.
        let g = |v: f64| flux.shock_speed(u, v).unwrap_or(f64::NAN) - target;
        let eps = 1e-9 * u.abs();
        let (lo, hi) = if u > 0.0 {
            (tangent + eps, u - eps)
        } else {
            (u + eps, tangent - eps)
        };
        roots::bracketed(g, lo, hi, roots::ARG_TOL * u.abs().max(1.0), "companion")
    }

    /// Check all four kinetic-function invariants against a flux/entropy
    /// pair: φ♭(0) = 0, monotone decrease, pinching φ♭₀ < φ♭ ≤ φ♮, and the
    /// strict second-iterate contraction.
    pub fn validate(&self, flux: &FluxModel, pair: &EntropyPair) -> Result<()> {
        if self.phi(0.0).abs() > DEGENERACY_THRESHOLD {
            return Err(Error::InvalidKinetic(format!(
                "{}: phi(0) = {} != 0",
                self.description,
                self.phi(0.0)
            )));
        }
        if !(self.contraction_k < 1.0) {
            return Err(Error::InvalidKinetic(format!(
                "{}: contraction constant K = {} not < 1",
                self.description, self.contraction_k
            )));
        }
        let mut grid = check_grid();
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev: Option<(f64, f64)> = None;
        for &u in &grid {
            let p = self.phi(u);
            if !p.is_finite() {
                return Err(Error::InvalidKinetic(format!(
                    "{}: phi({u}) is not finite",
                    self.description
                )));
            }
            if let Some((u0, p0)) = prev {
                if u > u0 && p > p0 + 1e-12 {
                    return Err(Error::InvalidKinetic(format!(
                        "{}: not monotone decreasing between u = {u0} and u = {u}",
                        self.description
                    )));
                }
            }
            prev = Some((u, p));
            let tangent = flux.tangent(u)?;
            let zero = pair.zero_dissipation(u)?;
            let tol = 1e-10 * u.abs().max(1.0);
            // Pinching, written sign-free: |phi_nat| <= |phi| < |phi_flat_0|
            // with phi on the opposite side of the inflection.
            if p * u > 0.0
                || p.abs() > zero.abs() - tol.min(0.5 * (zero.abs() - tangent.abs()))
                || p.abs() < tangent.abs() - tol
            {
                return Err(Error::InvalidKinetic(format!(
                    "{}: pinching violated at u = {u}: phi = {p}, tangent = {tangent}, zero-dissipation = {zero}",
                    self.description
                )));
            }
            let second = self.phi(p);
            if second.abs() > self.contraction_k * u.abs() + 1e-10 {
                return Err(Error::InvalidKinetic(format!(
                    "{}: contraction violated at u = {u}: |phi(phi(u))| = {} > K|u| = {}",
                    self.description,
                    second.abs(),
                    self.contraction_k * u.abs()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_quadratic() -> EntropyPair {
        EntropyPair::quadratic(FluxModel::cubic())
    }

    #[test]
    fn shock_speed_cubic_examples() {
        let flux = FluxModel::cubic();
        // chord slope = u^2 + u v + v^2 for the cubic
        assert!((flux.shock_speed(1.0, -1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((flux.shock_speed(1.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let a = flux.shock_speed(0.3, -0.9).unwrap();
        let b = flux.shock_speed(-0.9, 0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shock_speed_degenerate() {
        let flux = FluxModel::cubic();
        assert!(matches!(
            flux.shock_speed(0.5, 0.5),
            Err(Error::DegenerateShock(_))
        ));
    }

    #[test]
    fn tangent_cubic_is_minus_half() {
        let flux = FluxModel::cubic();
        assert!((flux.tangent(1.0).unwrap() + 0.5).abs() < 1e-10);
        assert!((flux.tangent(-2.0).unwrap() - 1.0).abs() < 1e-10);
        // u -> 0 limit of tangent(u)/u
        let r = flux.tangent(1e-3).unwrap() / 1e-3;
        assert!((r + 0.5).abs() < 1e-7);
        assert_eq!(flux.tangent(0.0).unwrap(), 0.0);
    }

    #[test]
    fn tangent_satisfies_defining_relation() {
        let flux = FluxModel::cubic();
        for u in [0.2, 0.7, 1.3, -0.4, -2.5] {
            let t = flux.tangent(u).unwrap();
            let chord = flux.shock_speed(u, t).unwrap();
            assert!((flux.df(t) - chord).abs() <= 1e-10 * (1.0 + u.abs()).powi(2));
            assert!(t * u < 0.0);
        }
    }

    #[test]
    fn entropy_dissipation_examples() {
        let pair = cubic_quadratic();
        // Odd flux, even entropy: symmetric jump dissipates nothing.
        assert!(pair.entropy_dissipation(1.0, -1.0).unwrap().abs() < 1e-14);
        assert!(pair.entropy_dissipation(1.0, -0.75).unwrap() < 0.0);
        assert!(pair.entropy_dissipation(1.0, 0.5).unwrap() < 0.0);
    }

    #[test]
    fn closed_form_matches_integral_identity() {
        let pair = cubic_quadratic();
        for (um, up) in [(1.0, -0.75), (1.0, 0.5), (-0.8, 0.3), (2.0, -1.1), (0.4, -0.9)] {
            let closed = pair.entropy_dissipation(um, up).unwrap();
            let integral = pair.entropy_dissipation_integral(um, up).unwrap();
            assert!(
                (closed - integral).abs() < 1e-10,
                "E mismatch at ({um}, {up}): {closed} vs {integral}"
            );
        }
    }

    #[test]
    fn zero_dissipation_is_negation_for_cubic() {
        let pair = cubic_quadratic();
        assert!((pair.zero_dissipation(1.0).unwrap() + 1.0).abs() < 1e-10);
        assert!((pair.zero_dissipation(-0.4).unwrap() - 0.4).abs() < 1e-10);
        // Involution
        let once = pair.zero_dissipation(0.7).unwrap();
        let twice = pair.zero_dissipation(once).unwrap();
        assert!((twice - 0.7).abs() < 1e-8);
        assert_eq!(pair.zero_dissipation(0.0).unwrap(), 0.0);
    }

    #[test]
    fn dissipation_sign_pattern_around_zero_dissipation_state() {
        let pair = cubic_quadratic();
        for u in [0.3, 1.0, 2.4] {
            let z = pair.zero_dissipation(u).unwrap();
            assert!(pair.entropy_dissipation(u, z + 1e-6).unwrap() < 0.0);
            assert!(pair.entropy_dissipation(u, z - 1e-6).unwrap() > 0.0);
            assert!(pair.entropy_dissipation(u, 0.5 * u).unwrap() < 0.0);
        }
    }

    #[test]
    fn companion_closed_form_for_linear_kinetic() {
        let flux = FluxModel::cubic();
        // phi_flat = -c u gives phi_sharp = (c - 1) u for the cubic.
        let kin = KineticFunction::linear(0.75).unwrap();
        assert!((kin.companion(&flux, 1.0).unwrap() + 0.25).abs() < 1e-10);
        let kin = KineticFunction::linear(0.6).unwrap();
        assert!((kin.companion(&flux, 2.0).unwrap() + 0.8).abs() < 1e-10);
        // Double tangency collapses phi_sharp onto phi_nat.
        let classical = KineticFunction::classical(&flux).unwrap();
        let c = classical.companion(&flux, 1.0).unwrap();
        assert!((c - flux.tangent(1.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn companion_has_equal_chord_speed() {
        let flux = FluxModel::cubic();
        let kin = KineticFunction::linear(0.8).unwrap();
        for u in [0.5, 1.0, -1.7] {
            let sharp = kin.companion(&flux, u).unwrap();
            let a = flux.shock_speed(u, kin.phi(u)).unwrap();
            let b = flux.shock_speed(u, sharp).unwrap();
            assert!((a - b).abs() < 1e-9 * (1.0 + u.abs()).powi(2));
        }
    }

    #[test]
    fn classical_kinetic_examples() {
        let flux = FluxModel::cubic();
        let kin = KineticFunction::classical(&flux).unwrap();
        assert!((kin.phi(1.0) + 0.5).abs() < 1e-10);
        assert_eq!(kin.phi(0.0), 0.0);
        // Composition of u -> -u/2 contracts by 1/4.
        assert!((kin.contraction_k - 0.25).abs() < 1e-6);
    }

    #[test]
    fn validator_accepts_kinetic_range_and_rejects_extremes() {
        let flux = FluxModel::cubic();
        let pair = cubic_quadratic();
        for c in [0.55, 0.75, 0.95] {
            KineticFunction::linear(c).unwrap().validate(&flux, &pair).unwrap();
        }
        KineticFunction::classical(&flux).unwrap().validate(&flux, &pair).unwrap();
        // phi_flat = phi_flat_0 (c = 1) is excluded by the strict lower bound.
        assert!(KineticFunction::linear(1.0).is_err());
        let zero_diss = KineticFunction::from_fn("c=1", Arc::new(|u: f64| -u), 1.0, 0.999);
        assert!(zero_diss.validate(&flux, &pair).is_err());
        // Below the tangent map violates pinching on the other side.
        assert!(KineticFunction::linear(0.3).unwrap().validate(&flux, &pair).is_err());
        // Non-monotone sample.
        let wobble = KineticFunction::from_fn(
            "wobble",
            Arc::new(|u: f64| -0.75 * u + 0.2 * u * u),
            1.0,
            0.6,
        );
        assert!(wobble.validate(&flux, &pair).is_err());
    }

    #[test]
    fn ordering_of_kinetic_bounds_on_log_grid() {
        let flux = FluxModel::cubic();
        let pair = cubic_quadratic();
        for i in 0..20 {
            let u = 1e-2 * (2.0f64 / 1e-2).powf(i as f64 / 19.0);
            for u in [u, -u] {
                let t = flux.tangent(u).unwrap();
                let z = pair.zero_dissipation(u).unwrap();
                assert!(t * u < 0.0 && z * u < 0.0);
                assert!(z.abs() > t.abs());
            }
        }
    }

    #[test]
    fn shock_classification() {
        let flux = FluxModel::cubic();
        assert_eq!(
            classify_shock(&flux, 1.0, -0.75).unwrap(),
            ShockClass::SlowUndercompressive
        );
        assert_eq!(classify_shock(&flux, 1.0, 0.5).unwrap(), ShockClass::Lax);
        assert_eq!(
            classify_shock(&flux, 0.5, 1.0).unwrap(),
            ShockClass::Inadmissible
        );
    }

    #[test]
    fn shock_data_validates() {
        let pair = cubic_quadratic();
        let s = ShockData::new(pair.flux(), 1.0, -0.75, ShockKind::Nonclassical).unwrap();
        assert!((s.speed - 0.8125).abs() < 1e-14);
        s.validate(&pair).unwrap();
    }
}
