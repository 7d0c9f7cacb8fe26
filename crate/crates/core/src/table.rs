//! The kinetic-table v1 plain-text exchange format.
//!
//! One header line `# kinetic-table v1 flux=<name> [key=value ...]` followed
//! by tab-separated rows `u_minus<TAB>u_plus` with strictly increasing
//! u_minus. Values are printed with 17 significant digits so that a write /
//! read cycle is bit-exact.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::core_models::{EntropyPair, FluxModel, KineticFunction, ScalarFn};
use crate::{Error, Result};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct KineticTable {
    /// (u_minus, u_plus) rows, strictly increasing in u_minus.
    pub rows: Vec<(f64, f64)>,
    /// Flux the table belongs to; carried in the header.
    pub flux_name: String,
    /// Free-form key=value metadata (alpha, p, scheme id, mesh, ...).
    pub meta: Vec<(String, String)>,
    /// Extrapolated slope φ♭′(0), when the producer computed one.
    pub slope_at_zero: Option<f64>,
}

impl KineticTable {
    pub fn new(flux_name: &str, rows: Vec<(f64, f64)>) -> Result<Self> {
        let t = Self {
            rows,
            flux_name: flux_name.to_string(),
            meta: Vec::new(),
            slope_at_zero: None,
        };
        t.check_monotone()?;
        Ok(t)
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    fn check_monotone(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Table("empty table".into()));
        }
        for w in self.rows.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Table(format!(
                    "u_minus not strictly increasing at {} -> {}",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 >= w[0].1 {
                return Err(Error::Table(format!(
                    "u_plus not strictly decreasing at rows ({}, {}) -> ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(())
    }

    /// Per-row pinching check φ♭₀(u) < u₊ ≤ φ♮(u) against a flux/entropy pair.
    pub fn check_pinching(&self, flux: &FluxModel, pair: &EntropyPair) -> Result<()> {
        for &(um, up) in &self.rows {
            let tangent = flux.tangent(um)?;
            let zero = pair.zero_dissipation(um)?;
            let tol = 1e-9 * um.abs().max(1.0);
            if up * um > 0.0 || up.abs() < tangent.abs() - tol || up.abs() >= zero.abs() {
                return Err(Error::Table(format!(
                    "row ({um}, {up}) violates pinching: tangent = {tangent}, zero-dissipation = {zero}"
                )));
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "# kinetic-table v1 flux={}", self.flux_name)?;
        for (k, v) in &self.meta {
            write!(w, " {k}={v}")?;
        }
        if let Some(s) = self.slope_at_zero {
            write!(w, " slope_at_zero={s:.16e}")?;
        }
        writeln!(w)?;
        for &(um, up) in &self.rows {
            writeln!(w, "{um:.16e}\t{up:.16e}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Table("missing header".into()))??;
        let rest = header
            .strip_prefix("# kinetic-table v1 ")
            .ok_or_else(|| Error::Table(format!("bad header: {header}")))?;
        let mut flux_name = None;
        let mut meta = Vec::new();
        let mut slope_at_zero = None;
        for tok in rest.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Table(format!("bad header token: {tok}")))?;
            match k {
                "flux" => flux_name = Some(v.to_string()),
                "slope_at_zero" => {
                    slope_at_zero = Some(v.parse::<f64>().map_err(|e| {
                        Error::Table(format!("bad slope_at_zero '{v}': {e}"))
                    })?)
                }
                _ => meta.push((k.to_string(), v.to_string())),
            }
        }
        let flux_name = flux_name.ok_or_else(|| Error::Table("header missing flux=".into()))?;
        let mut rows = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (a, b) = line
                .split_once('\t')
                .ok_or_else(|| Error::Table(format!("bad row: {line}")))?;
            let um: f64 = a
                .parse()
                .map_err(|e| Error::Table(format!("bad u_minus '{a}': {e}")))?;
            let up: f64 = b
                .parse()
                .map_err(|e| Error::Table(format!("bad u_plus '{b}': {e}")))?;
            rows.push((um, up));
        }
        let mut t = Self::new(&flux_name, rows)?;
        t.meta = meta;
        t.slope_at_zero = slope_at_zero;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }

    /// Monotone piecewise-linear kinetic function built from the rows.
    ///
    /// Inside the covered range the map interpolates linearly; between 0 and
    /// the innermost row it interpolates through the origin; beyond the
    /// outermost row it extrapolates with the last segment slope. If the
    /// table covers only one sign, the other sign is the odd extension.
    pub fn to_kinetic_function(&self, flux: &FluxModel, pair: &EntropyPair) -> Result<KineticFunction> {
        let rows = Arc::new(self.rows.clone());
        let has_neg = rows.first().map(|r| r.0 < 0.0).unwrap_or(false);
        let has_pos = rows.last().map(|r| r.0 > 0.0).unwrap_or(false);
        let interp = {
            let rows = rows.clone();
            move |u: f64| -> f64 {
                let r = &rows[..];
                if u <= r[0].0 {
                    if r.len() >= 2 {
                        let (u0, p0) = r[0];
                        let (u1, p1) = r[1];
                        p0 + (u - u0) * (p1 - p0) / (u1 - u0)
                    } else {
                        r[0].1 / r[0].0 * u
                    }
                } else if u >= r[r.len() - 1].0 {
                    if r.len() >= 2 {
                        let (u0, p0) = r[r.len() - 2];
                        let (u1, p1) = r[r.len() - 1];
                        p1 + (u - u1) * (p1 - p0) / (u1 - u0)
                    } else {
                        r[0].1 / r[0].0 * u
                    }
                } else {
                    let i = r.partition_point(|&(um, _)| um <= u) - 1;
                    let (u0, p0) = r[i];
                    let (u1, p1) = r[i + 1];
                    p0 + (u - u0) * (p1 - p0) / (u1 - u0)
                }
            }
        };
        // Anchor the innermost segment at the origin when the table does not
        // straddle it.
        let inner_pos = rows.iter().find(|r| r.0 > 0.0).copied();
        let inner_neg = rows.iter().rev().find(|r| r.0 < 0.0).copied();
        let phi: ScalarFn = Arc::new(move |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            if u > 0.0 && has_pos {
                let (u0, p0) = inner_pos.unwrap();
                if u < u0 {
                    return p0 / u0 * u;
                }
                return interp(u);
            }
            if u < 0.0 && has_neg {
                let (u0, p0) = inner_neg.unwrap();
                if u > u0 {
                    return p0 / u0 * u;
                }
                return interp(u);
            }
            // Odd extension for the uncovered sign.
            let mirrored = if u > 0.0 { -u } else { -u };
            let p = if mirrored > 0.0 && has_pos {
                let (u0, p0) = inner_pos.unwrap();
                if mirrored < u0 {
                    p0 / u0 * mirrored
                } else {
                    interp(mirrored)
                }
            } else if mirrored < 0.0 && has_neg {
                let (u0, p0) = inner_neg.unwrap();
                if mirrored > u0 {
                    p0 / u0 * mirrored
                } else {
                    interp(mirrored)
                }
            } else {
                f64::NAN
            };
            -p
        });
        let mut lip: f64 = 0.0;
        for w in self.rows.windows(2) {
            lip = lip.max(((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs());
        }
        let mut k: f64 = 0.0;
        for &(um, _) in self.rows.iter() {
            if um.abs() > 0.0 {
                k = k.max((phi(phi(um)) / um).abs());
            }
        }
        if self.rows.len() == 1 {
            lip = (self.rows[0].1 / self.rows[0].0).abs();
        }
        let kin = KineticFunction::from_fn(
            &format!("table ({} rows, flux={})", self.rows.len(), self.flux_name),
            phi,
            lip,
            k.min(0.999_999),
        );
        kin.validate(flux, pair)?;
        Ok(kin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> KineticTable {
        let rows: Vec<(f64, f64)> = (1..=10)
            .map(|i| {
                let u = 0.2 * i as f64;
                (u, -0.75 * u)
            })
            .collect();
        let mut t = KineticTable::new("cubic", rows).unwrap();
        t.slope_at_zero = Some(-0.75);
        t.with_meta("alpha", "1").with_meta("p", "0.5")
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let t = sample_table();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = KineticTable::read_from(&buf[..]).unwrap();
        assert_eq!(t, back);
        let mut buf2 = Vec::new();
        back.write_to(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn rejects_non_monotone_rows() {
        assert!(KineticTable::new("cubic", vec![(0.5, -0.4), (0.4, -0.3)]).is_err());
        assert!(KineticTable::new("cubic", vec![(0.4, -0.3), (0.5, -0.2)]).is_err());
    }

    #[test]
    fn table_kinetic_function_interpolates_and_mirrors() {
        let flux = FluxModel::cubic();
        let pair = EntropyPair::quadratic(flux.clone());
        let kin = sample_table().to_kinetic_function(&flux, &pair).unwrap();
        assert!((kin.phi(0.5) + 0.375).abs() < 1e-12);
        assert!((kin.phi(0.05) + 0.0375).abs() < 1e-12); // through the origin
        assert!((kin.phi(-1.0) - 0.75).abs() < 1e-12); // odd extension
        assert_eq!(kin.phi(0.0), 0.0);
    }
}
