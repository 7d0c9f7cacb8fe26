//! Flat key=value experiment configuration.
//!
//! Every run is fully described by an `ExperimentConfig`; artifacts embed the
//! emitted form in their headers so any output can be reproduced from its own
//! header. `parse(emit(c)) == c` for every config, and unknown keys are
//! rejected.

use nclab::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// riemann | cauchy | tw | fd | kinetics | validate
    pub command: String,
    pub flux: String,
    pub entropy: String,
    /// linear:<c> | phi-natural | table:<path>
    pub kinetic: String,
    /// Traveling-wave regularization strength, or fd dispersion coefficient.
    pub alpha: f64,
    /// fd diffusion coefficient.
    pub beta: f64,
    /// Nonlinear-diffusion exponent of the traveling-wave model.
    pub p: f64,
    /// Base entropy-conservative flux order (2, 3 or 4).
    pub order: u8,
    pub h: f64,
    pub cfl: f64,
    /// periodic | fixed
    pub boundary: String,
    pub domain: (f64, f64),
    pub t_end: f64,
    /// lo:hi:n sweep of left states.
    pub u_grid: (f64, f64, usize),
    pub ul: f64,
    pub ur: f64,
    /// Piecewise-constant Cauchy data: values and interior jump positions.
    pub states: Vec<f64>,
    pub jumps: Vec<f64>,
    pub fan_step: f64,
    /// Sampling resolution when building front states from data.
    pub n_cells: usize,
    pub out: String,
    pub seed: u64,
    /// Restrict `validate` to one criterion; empty runs all.
    pub only: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: "validate".into(),
            flux: "cubic".into(),
            entropy: "quadratic".into(),
            kinetic: "linear:0.75".into(),
            alpha: 1.0,
            beta: 1.0,
            p: 0.0,
            order: 3,
            h: 0.02,
            cfl: 0.4,
            boundary: "fixed".into(),
            domain: (-5.0, 5.0),
            t_end: 1.0,
            u_grid: (0.2, 2.0, 10),
            ul: 1.0,
            ur: -0.5,
            states: vec![1.0, -0.5],
            jumps: vec![0.0],
            fan_step: 0.1,
            n_cells: 64,
            out: "out".into(),
            seed: 0,
            only: String::new(),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|e| Error::Config(format!("bad value for {key}: '{v}' ({e})")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|t| parse_f64(key, t)).collect()
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64)> {
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("bad value for {key}: '{v}' (expected lo:hi)")))?;
    Ok((parse_f64(key, a)?, parse_f64(key, b)?))
}

pub fn parse_grid(key: &str, v: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "bad value for {key}: '{v}' (expected lo:hi:n)"
        )));
    }
    let n: usize = parts[2]
        .parse()
        .map_err(|e| Error::Config(format!("bad value for {key}: '{v}' ({e})")))?;
    Ok((parse_f64(key, parts[0])?, parse_f64(key, parts[1])?, n))
}

impl ExperimentConfig {
    /// Canonical key=value text form, one key per line, fixed order.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push('=');
            s.push_str(&v);
            s.push('\n');
        };
        put("command", self.command.clone());
        put("flux", self.flux.clone());
        put("entropy", self.entropy.clone());
        put("kinetic", self.kinetic.clone());
        put("alpha", self.alpha.to_string());
        put("beta", self.beta.to_string());
        put("p", self.p.to_string());
        put("order", self.order.to_string());
        put("h", self.h.to_string());
        put("cfl", self.cfl.to_string());
        put("boundary", self.boundary.clone());
        put("domain", format!("{}:{}", self.domain.0, self.domain.1));
        put("t_end", self.t_end.to_string());
        put(
            "u_grid",
            format!("{}:{}:{}", self.u_grid.0, self.u_grid.1, self.u_grid.2),
        );
        put("ul", self.ul.to_string());
        put("ur", self.ur.to_string());
        put("states", join(&self.states));
        put("jumps", join(&self.jumps));
        put("fan_step", self.fan_step.to_string());
        put("n_cells", self.n_cells.to_string());
        put("out", self.out.clone());
        put("seed", self.seed.to_string());
        put("only", self.only.clone());
        s
    }

    /// Parse the key=value form. Lines may be '#'-commented or blank; keys
    /// not listed fall back to their defaults; unknown keys are an error.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad config line: '{line}'")))?;
            c.set(k.trim(), v.trim())?;
        }
        c.check()?;
        Ok(c)
    }

    /// Assign one key. Shared by the file parser and the flag plumbing.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "command" => self.command = v.into(),
            "flux" => self.flux = v.into(),
            "entropy" => self.entropy = v.into(),
            "kinetic" => self.kinetic = v.into(),
            "alpha" => self.alpha = parse_f64(key, v)?,
            "beta" => self.beta = parse_f64(key, v)?,
            "p" => self.p = parse_f64(key, v)?,
            "order" => {
                self.order = v
                    .parse()
                    .map_err(|e| Error::Config(format!("bad value for order: '{v}' ({e})")))?
            }
            "h" => self.h = parse_f64(key, v)?,
            "cfl" => self.cfl = parse_f64(key, v)?,
            "boundary" => self.boundary = v.into(),
            "domain" => self.domain = parse_pair(key, v)?,
            "t_end" => self.t_end = parse_f64(key, v)?,
            "u_grid" => self.u_grid = parse_grid(key, v)?,
            "ul" => self.ul = parse_f64(key, v)?,
            "ur" => self.ur = parse_f64(key, v)?,
            "states" => self.states = parse_list(key, v)?,
            "jumps" => self.jumps = parse_list(key, v)?,
            "fan_step" => self.fan_step = parse_f64(key, v)?,
            "n_cells" => {
                self.n_cells = v
                    .parse()
                    .map_err(|e| Error::Config(format!("bad value for n_cells: '{v}' ({e})")))?
            }
            "out" => self.out = v.into(),
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|e| Error::Config(format!("bad value for seed: '{v}' ({e})")))?
            }
            "only" => self.only = v.into(),
            _ => return Err(Error::Config(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        const COMMANDS: [&str; 6] = ["riemann", "cauchy", "tw", "fd", "kinetics", "validate"];
        if !COMMANDS.contains(&self.command.as_str()) {
            return Err(Error::Config(format!(
                "unknown command '{}' (expected one of {})",
                self.command,
                COMMANDS.join(", ")
            )));
        }
        Ok(())
    }
}
