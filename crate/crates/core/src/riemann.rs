//! The nonclassical Riemann solver: given a kinetic function, map Riemann
//! data (u_l, u_r) to a wave pattern of at most two outgoing waves, and
//! evaluate the self-similar solution u(ξ), ξ = x/t.

pub use crate::core_models::{classify_shock, ShockClass};
use crate::core_models::{EntropyPair, FluxModel, KineticFunction, ShockData, ShockKind};
use crate::roots;
use crate::{Error, Result, DEGENERACY_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Rarefaction,
    ClassicalShock,
    NonclassicalShock,
}

/// One outgoing wave. Shocks carry `speed_lo == speed_hi == λ̄`; rarefactions
/// span the fan [f′(u₋), f′(u₊)].
#[derive(Debug, Clone, Copy)]
pub struct Wave {
    pub kind: WaveKind,
    pub u_minus: f64,
    pub u_plus: f64,
    pub speed_lo: f64,
    pub speed_hi: f64,
}

impl Wave {
    fn shock(flux: &FluxModel, u_minus: f64, u_plus: f64, kind: WaveKind) -> Result<Self> {
        let speed = flux.shock_speed(u_minus, u_plus)?;
        Ok(Self {
            kind,
            u_minus,
            u_plus,
            speed_lo: speed,
            speed_hi: speed,
        })
    }

    fn rarefaction(flux: &FluxModel, u_minus: f64, u_plus: f64) -> Self {
        Self {
            kind: WaveKind::Rarefaction,
            u_minus,
            u_plus,
            speed_lo: flux.df(u_minus),
            speed_hi: flux.df(u_plus),
        }
    }

    pub fn is_shock(&self) -> bool {
        self.kind != WaveKind::Rarefaction
    }
}

/// Ordered wave fan solving a Riemann problem.
#[derive(Debug, Clone)]
pub struct WavePattern {
    pub u_left: f64,
    pub u_right: f64,
    pub waves: Vec<Wave>,
}

impl WavePattern {
    /// Full structural check: chaining, speed ordering, wave count, and the
    /// shock admissibility invariants.
    pub fn validate(&self, pair: &EntropyPair) -> Result<()> {
        let flux = pair.flux();
        if self.waves.len() > 2 {
            return Err(Error::InvalidModel(format!(
                "pattern has {} waves (> 2)",
                self.waves.len()
            )));
        }
        let mut u = self.u_left;
        let mut prev_hi = f64::NEG_INFINITY;
        for w in &self.waves {
            if w.u_minus != u {
                return Err(Error::InvalidModel(format!(
                    "chaining broken: expected u_minus = {u}, got {}",
                    w.u_minus
                )));
            }
            let tol = 1e-12 * (1.0 + w.u_minus.abs() + w.u_plus.abs()).powi(2);
            if w.speed_lo < prev_hi - tol {
                return Err(Error::InvalidModel(format!(
                    "speed ordering broken: {prev_hi} then {}",
                    w.speed_lo
                )));
            }
            match w.kind {
                WaveKind::Rarefaction => {
                    if w.speed_lo > w.speed_hi {
                        return Err(Error::InvalidModel(format!(
                            "rarefaction fan speeds reversed: [{}, {}]",
                            w.speed_lo, w.speed_hi
                        )));
                    }
                    // f' strictly monotone inside the fan: f''*direction keeps
                    // one sign on samples.
                    let dir = (w.u_plus - w.u_minus).signum();
                    for k in 1..8 {
                        let v = w.u_minus + (w.u_plus - w.u_minus) * k as f64 / 8.0;
                        if flux.d2f(v) * dir < 0.0 {
                            return Err(Error::InvalidModel(format!(
                                "rarefaction ({}, {}) crosses an inflection",
                                w.u_minus, w.u_plus
                            )));
                        }
                    }
                }
                WaveKind::ClassicalShock => {
                    let s = ShockData::new(flux, w.u_minus, w.u_plus, ShockKind::Classical)?;
                    s.validate(pair)?;
                    if flux.df(w.u_minus) < s.speed - tol || s.speed < flux.df(w.u_plus) - tol {
                        return Err(Error::InvalidModel(format!(
                            "classical shock ({}, {}) violates the Lax inequalities",
                            w.u_minus, w.u_plus
                        )));
                    }
                }
                WaveKind::NonclassicalShock => {
                    let s = ShockData::new(flux, w.u_minus, w.u_plus, ShockKind::Nonclassical)?;
                    s.validate(pair)?;
                    if flux.df(w.u_minus).min(flux.df(w.u_plus)) < s.speed - tol {
                        return Err(Error::InvalidModel(format!(
                            "nonclassical shock ({}, {}) is not undercompressive",
                            w.u_minus, w.u_plus
                        )));
                    }
                }
            }
            prev_hi = w.speed_hi;
            u = w.u_plus;
        }
        if u != self.u_right {
            return Err(Error::InvalidModel(format!(
                "chaining broken at the right state: {u} != {}",
                self.u_right
            )));
        }
        Ok(())
    }

    /// Sum of the entropy dissipation of all shocks in the pattern.
    pub fn total_entropy_dissipation(&self, pair: &EntropyPair) -> Result<f64> {
        let mut e = 0.0;
        for w in &self.waves {
            if w.is_shock() {
                e += pair.entropy_dissipation(w.u_minus, w.u_plus)?;
            }
        }
        Ok(e)
    }
}

/// The nonclassical Riemann solver. The kinetic function is validated once
/// at construction; `solve` itself cannot fail on valid finite data.
#[derive(Debug, Clone)]
pub struct NonclassicalSolver {
    flux: FluxModel,
    pair: EntropyPair,
    kin: KineticFunction,
}

impl NonclassicalSolver {
    pub fn new(flux: FluxModel, pair: EntropyPair, kin: KineticFunction) -> Result<Self> {
        kin.validate(&flux, &pair)?;
        Ok(Self { flux, pair, kin })
    }

    /// Solver with the classical kinetic choice φ♭ = φ♮ (Oleinik solutions).
    pub fn classical(flux: FluxModel, pair: EntropyPair) -> Result<Self> {
        let kin = KineticFunction::classical(&flux)?;
        Self::new(flux, pair, kin)
    }

    pub fn flux(&self) -> &FluxModel {
        &self.flux
    }

    pub fn pair(&self) -> &EntropyPair {
        &self.pair
    }

    pub fn kinetic(&self) -> &KineticFunction {
        &self.kin
    }

    /// The kinetic shock (u_l, φ♭(u_l)). When φ♭ touches φ♮ the jump is a
    /// boundary Lax shock and is labeled classical (Oleinik construction).
    fn kinetic_shock(&self, u_l: f64, phi: f64) -> Result<Wave> {
        let speed = self.flux.shock_speed(u_l, phi)?;
        let tol = 1e-9 * (1.0 + u_l.abs()).powi(2);
        let kind = if self.flux.df(phi) <= speed + tol {
            WaveKind::ClassicalShock
        } else {
            WaveKind::NonclassicalShock
        };
        Wave::shock(&self.flux, u_l, phi, kind)
    }

    pub fn solve(&self, u_l: f64, u_r: f64) -> Result<WavePattern> {
        let flux = &self.flux;
        let mut waves = Vec::with_capacity(2);
        if u_l == u_r {
            return Ok(WavePattern {
                u_left: u_l,
                u_right: u_r,
                waves,
            });
        }
        if u_l.abs() <= DEGENERACY_THRESHOLD {
            // Inflection-point data: the nonclassical branch is vacuous
            // (phi_flat(0) = 0) and the jump resolves as a single monotone
            // classical wave, here always a rarefaction since f'(0) is the
            // one-sided minimum of the characteristic speed.
            waves.push(Wave::rarefaction(flux, u_l, u_r));
        } else if u_l > 0.0 {
            if u_r >= u_l {
                waves.push(Wave::rarefaction(flux, u_l, u_r));
            } else {
                let phi = self.kin.phi(u_l);
                let sharp = self.kin.companion(flux, u_l)?;
                if u_r >= sharp {
                    waves.push(Wave::shock(flux, u_l, u_r, WaveKind::ClassicalShock)?);
                } else if u_r == phi {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                } else if u_r > phi {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                    waves.push(Wave::shock(flux, phi, u_r, WaveKind::ClassicalShock)?);
                } else {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                    waves.push(Wave::rarefaction(flux, phi, u_r));
                }
            }
        } else {
            // Mirror of the positive branch; phi_flat is evaluated at the
            // negative argument directly, no odd symmetry assumed.
            if u_r <= u_l {
                waves.push(Wave::rarefaction(flux, u_l, u_r));
            } else {
                let phi = self.kin.phi(u_l);
                let sharp = self.kin.companion(flux, u_l)?;
                if u_r <= sharp {
                    waves.push(Wave::shock(flux, u_l, u_r, WaveKind::ClassicalShock)?);
                } else if u_r == phi {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                } else if u_r < phi {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                    waves.push(Wave::shock(flux, phi, u_r, WaveKind::ClassicalShock)?);
                } else {
                    waves.push(self.kinetic_shock(u_l, phi)?);
                    waves.push(Wave::rarefaction(flux, phi, u_r));
                }
            }
        }
        Ok(WavePattern {
            u_left: u_l,
            u_right: u_r,
            waves,
        })
    }
}

/// Evaluate the self-similar solution u(ξ) of a pattern; left-continuous at
/// shock speeds, (f′)⁻¹ on the correct monotone branch inside fans.
pub fn evaluate(flux: &FluxModel, pattern: &WavePattern, xi: f64) -> f64 {
    for w in &pattern.waves {
        if xi <= w.speed_lo {
            return w.u_minus;
        }
        if xi < w.speed_hi {
            // Inside a fan: invert f' between the two fan states.
            let (lo, hi) = if w.u_minus < w.u_plus {
                (w.u_minus, w.u_plus)
            } else {
                (w.u_plus, w.u_minus)
            };
            return roots::bracketed(
                |u| flux.df(u) - xi,
                lo,
                hi,
                1e-13 * (1.0 + lo.abs() + hi.abs()),
                "rarefaction inverse",
            )
            .unwrap_or(w.u_minus);
        }
    }
    pattern.u_right
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solver(c: f64) -> NonclassicalSolver {
        let flux = FluxModel::cubic();
        let pair = EntropyPair::quadratic(flux.clone());
        NonclassicalSolver::new(flux, pair, KineticFunction::linear(c).unwrap()).unwrap()
    }

    #[test]
    fn two_shock_pattern() {
        let s = solver(0.75);
        let p = s.solve(1.0, -0.5).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 2);
        assert_eq!(p.waves[0].kind, WaveKind::NonclassicalShock);
        assert_eq!(p.waves[1].kind, WaveKind::ClassicalShock);
        assert!((p.waves[0].u_plus + 0.75).abs() < 1e-15);
        assert!((p.waves[0].speed_lo - 0.8125).abs() < 1e-14);
        assert!((p.waves[1].speed_lo - 1.1875).abs() < 1e-14);
    }

    #[test]
    fn rarefaction_when_right_state_above() {
        let s = solver(0.75);
        let p = s.solve(1.0, 2.0).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 1);
        assert_eq!(p.waves[0].kind, WaveKind::Rarefaction);
    }

    #[test]
    fn single_classical_shock() {
        let s = solver(0.75);
        let p = s.solve(1.0, 0.5).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 1);
        assert_eq!(p.waves[0].kind, WaveKind::ClassicalShock);
        assert!((p.waves[0].speed_lo - 1.75).abs() < 1e-14);
    }

    #[test]
    fn nonclassical_then_rarefaction() {
        let s = solver(0.75);
        let p = s.solve(1.0, -2.0).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 2);
        assert_eq!(p.waves[0].kind, WaveKind::NonclassicalShock);
        assert_eq!(p.waves[1].kind, WaveKind::Rarefaction);
        assert!((p.waves[1].speed_lo - 1.6875).abs() < 1e-12);
        assert!((p.waves[1].speed_hi - 12.0).abs() < 1e-12);
    }

    #[test]
    fn classical_kinetic_reproduces_oleinik_shape() {
        let flux = FluxModel::cubic();
        let pair = EntropyPair::quadratic(flux.clone());
        let s = NonclassicalSolver::classical(flux, pair).unwrap();
        let p = s.solve(1.0, -1.0).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 2);
        // phi_flat = phi_nat: the kinetic jump is the tangent shock of the
        // Oleinik construction, a boundary Lax shock.
        assert_eq!(p.waves[0].kind, WaveKind::ClassicalShock);
        assert!((p.waves[0].u_plus + 0.5).abs() < 1e-9);
        assert!((p.waves[0].speed_lo - 0.75).abs() < 1e-9);
        assert_eq!(p.waves[1].kind, WaveKind::Rarefaction);
    }

    #[test]
    fn exact_kinetic_boundary_is_single_nonclassical_shock() {
        let s = solver(0.75);
        let p = s.solve(1.0, -0.75).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 1);
        assert_eq!(p.waves[0].kind, WaveKind::NonclassicalShock);
    }

    #[test]
    fn mirrored_negative_branch() {
        let s = solver(0.75);
        let p = s.solve(-1.0, 0.5).unwrap();
        p.validate(s.pair()).unwrap();
        assert_eq!(p.waves.len(), 2);
        assert_eq!(p.waves[0].kind, WaveKind::NonclassicalShock);
        assert!((p.waves[0].u_plus - 0.75).abs() < 1e-15);
    }

    #[test]
    fn inflection_left_state_is_classical() {
        let s = solver(0.75);
        for u_r in [0.8, -0.8] {
            let p = s.solve(0.0, u_r).unwrap();
            p.validate(s.pair()).unwrap();
            assert_eq!(p.waves.len(), 1);
            assert_eq!(p.waves[0].kind, WaveKind::Rarefaction);
        }
    }

    #[test]
    fn evaluate_pattern() {
        let s = solver(0.75);
        let p = s.solve(1.0, -0.5).unwrap();
        let flux = s.flux();
        assert_eq!(evaluate(flux, &p, 1.0), -0.75); // between the two shocks
        assert_eq!(evaluate(flux, &p, -5.0), 1.0);
        assert_eq!(evaluate(flux, &p, 5.0), -0.5);
        // Left-continuity at the first shock speed.
        assert_eq!(evaluate(flux, &p, 0.8125), 1.0);
        // Inverse-branch evaluation in a fan.
        let p = s.solve(-0.5, -1.0).unwrap();
        let u = evaluate(flux, &p, flux.df(-0.8));
        assert!((u + 0.8).abs() < 1e-10);
    }

    #[test]
    fn entropy_dissipation_nonpositive() {
        let s = solver(0.7);
        for (ul, ur) in [(1.0, -0.5), (1.0, 0.5), (-1.2, 0.9), (0.3, 1.4)] {
            let p = s.solve(ul, ur).unwrap();
            let e = p.total_entropy_dissipation(s.pair()).unwrap();
            assert!(e <= 1e-12);
            if p.waves.iter().all(|w| !w.is_shock()) {
                assert_eq!(e, 0.0);
            }
        }
    }
}
