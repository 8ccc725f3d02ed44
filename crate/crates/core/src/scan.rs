//! CRB density grids over `(θ1, θ2)` and a multistart search for
//! Heisenberg-limited cat configurations.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::catstate::{cat_state, CatAngles, CatParams};
use crate::coherent::reduce_phase;
use crate::dicke::SpinJ;
use crate::error::{Error, Result};
use crate::metrology::{cat_crb, Generator};

pub const DEFAULT_RESOLUTION: usize = 201;
pub const DEFAULT_CAP: f64 = 20.0;
pub const DEFAULT_HL_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SEEDS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSpec {
    pub j: SpinJ,
    pub generator: Generator,
    pub phi1: f64,
    pub phi2: f64,
    pub resolution: usize,
    pub cap: f64,
}

impl ScanSpec {
    pub fn new(j: SpinJ, generator: Generator, phi1: f64, phi2: f64) -> Self {
        Self {
            j,
            generator,
            phi1,
            phi2,
            resolution: DEFAULT_RESOLUTION,
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidSpec(format!(
                "resolution {} must be at least 2",
                self.resolution
            )));
        }
        if self.cap.is_nan() || self.cap <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "cap {} must be positive",
                self.cap
            )));
        }
        if !self.phi1.is_finite() || !self.phi2.is_finite() {
            return Err(Error::InvalidSpec("phases must be finite".into()));
        }
        Ok(())
    }

    /// `θ` of grid index `k`; both poles are included.
    pub fn theta_at(&self, k: usize) -> f64 {
        if k + 1 == self.resolution {
            PI
        } else {
            PI * k as f64 / (self.resolution - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue {
    Finite(f64),
    /// Zero QFI.
    Divergent,
    /// The two components cancel; no normalized state exists.
    Degenerate,
}

impl CellValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            CellValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Raw value with divergent and degenerate cells as `+∞`.
    pub fn raw(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub theta1: f64,
    pub theta2: f64,
    pub value: CellValue,
}

/// Overflow marker written to the CSV `overflow` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overflow {
    None = 0,
    /// Finite but above the cap.
    Capped = 1,
    /// Divergent or degenerate, stored as the cap.
    Infinite = 2,
}

impl GridCell {
    pub fn capped(&self, cap: f64) -> f64 {
        self.value.raw().min(cap)
    }

    pub fn overflow(&self, cap: f64) -> Overflow {
        match self.value {
            CellValue::Finite(v) if v > cap => Overflow::Capped,
            CellValue::Finite(_) => Overflow::None,
            _ => Overflow::Infinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrbGrid {
    pub spec: ScanSpec,
    /// Row-major: index `a * resolution + b` holds `θ1 = θ(a)`, `θ2 = θ(b)`.
    pub cells: Vec<GridCell>,
}

impl CrbGrid {
    pub fn resolution(&self) -> usize {
        self.spec.resolution
    }

    pub fn get(&self, a: usize, b: usize) -> &GridCell {
        &self.cells[a * self.spec.resolution + b]
    }

    /// Smallest finite value and the first cell (row-major) attaining it.
    pub fn min(&self) -> Option<(usize, usize, f64)> {
        let res = self.spec.resolution;
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(v) = c.value.finite() {
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((i, v));
                }
            }
        }
        best.map(|(i, v)| (i / res, i % res, v))
    }

    /// All cells within `tol` of the minimum.
    pub fn argmin_set(&self, tol: f64) -> Vec<(usize, usize)> {
        let Some((_, _, m)) = self.min() else {
            return Vec::new();
        };
        let res = self.spec.resolution;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.value.finite().is_some_and(|v| v <= m + tol))
            .map(|(i, _)| (i / res, i % res))
            .collect()
    }

    pub fn count(&self, pred: impl Fn(&CellValue) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.value)).count()
    }

    /// CSV with header `theta1,theta2,crb,overflow,degenerate`, row-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let cap = self.spec.cap;
        writeln!(out, "theta1,theta2,crb,overflow,degenerate")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{}",
                format_sig(c.theta1, 12),
                format_sig(c.theta2, 12),
                format_sig(c.capped(cap), 12),
                c.overflow(cap) as u8,
                u8::from(c.value == CellValue::Degenerate),
            )?;
        }
        Ok(())
    }
}

/// Decimal rendering with `sig` significant digits, trailing zeros trimmed;
/// scientific notation outside `1e-5 ..= 10^sig`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= sig as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn evaluate_cell(j: SpinJ, g: Generator, angles: &CatAngles) -> CellValue {
    match cat_crb(j, g, angles) {
        Ok(r) if r.is_divergent() => CellValue::Divergent,
        Ok(r) => CellValue::Finite(r.crb),
        Err(Error::DegenerateCat { .. }) => CellValue::Degenerate,
        // grid angles are always in range
        Err(e) => unreachable!("grid angles rejected: {e}"),
    }
}

/// Numeric CRB on the inclusive `resolution × resolution` grid of `(θ1, θ2)`.
/// Cells are evaluated in parallel; output order is row-major.
pub fn grid_scan(spec: &ScanSpec) -> Result<CrbGrid> {
    spec.validate()?;
    let res = spec.resolution;
    let cells = (0..res * res)
        .into_par_iter()
        .map(|i| {
            let (theta1, theta2) = (spec.theta_at(i / res), spec.theta_at(i % res));
            let angles = CatAngles::new(theta1, theta2, spec.phi1, spec.phi2);
            GridCell {
                theta1,
                theta2,
                value: evaluate_cell(spec.j, spec.generator, &angles),
            }
        })
        .collect();
    Ok(CrbGrid { spec: *spec, cells })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlSearchSpec {
    pub j: SpinJ,
    pub generator: Generator,
    /// Accepted relative excess over `1/(2j)`.
    pub tolerance: f64,
    pub seeds: usize,
}

impl HlSearchSpec {
    pub fn new(j: SpinJ, generator: Generator) -> Self {
        Self {
            j,
            generator,
            tolerance: DEFAULT_HL_TOLERANCE,
            seeds: DEFAULT_SEEDS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 0.1) {
            return Err(Error::InvalidSpec(format!(
                "tolerance {} must lie in (0, 0.1]",
                self.tolerance
            )));
        }
        if self.seeds == 0 {
            return Err(Error::InvalidSpec("at least one seed is required".into()));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        self.j.heisenberg_limit() * (1.0 + self.tolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlPoint {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub crb: f64,
}

impl HlPoint {
    pub fn angles(&self) -> CatAngles {
        CatAngles::new(self.theta1, self.theta2, self.phi1, self.phi2)
    }
}

const SEED_THETAS: usize = 5;
const SEED_PHIS: usize = 8;
const UPPER: [f64; 4] = [PI, PI, TAU, TAU];
const INITIAL_WIDTH: f64 = PI / 4.0;
const MIN_WIDTH: f64 = 1e-9;
const MAX_SWEEPS: usize = 400;
const GOLDEN_TOL: f64 = 1e-12;
/// States with fidelity above this are reported once.
const DUPLICATE_FIDELITY: f64 = 1.0 - 1e-9;

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    acc
}

/// Seed points: a Halton sequence snapped to the lattice
/// `θ ∈ {0, π/4, …, π}`, `φ ∈ {0, π/4, …, 7π/4}`, without repeats.
fn lattice_seeds(count: usize) -> Vec<[f64; 4]> {
    let total = SEED_THETAS * SEED_THETAS * SEED_PHIS * SEED_PHIS;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(count.min(total));
    let mut i = 1;
    while out.len() < count.min(total) {
        let idx = [
            ((radical_inverse(i, 2) * SEED_THETAS as f64) as usize).min(SEED_THETAS - 1),
            ((radical_inverse(i, 3) * SEED_THETAS as f64) as usize).min(SEED_THETAS - 1),
            ((radical_inverse(i, 5) * SEED_PHIS as f64) as usize).min(SEED_PHIS - 1),
            ((radical_inverse(i, 7) * SEED_PHIS as f64) as usize).min(SEED_PHIS - 1),
        ];
        if seen.insert(idx) {
            out.push([
                PI * idx[0] as f64 / (SEED_THETAS - 1) as f64,
                PI * idx[1] as f64 / (SEED_THETAS - 1) as f64,
                TAU * idx[2] as f64 / SEED_PHIS as f64,
                TAU * idx[3] as f64 / SEED_PHIS as f64,
            ]);
        }
        i += 1;
    }
    out
}

/// Golden-section minimization of `f` on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Cyclic coordinate descent with golden-section line searches inside a
/// shrinking window. Moves are accepted only on strict improvement, so a
/// seed already on a flat optimum stays where it is.
fn refine(objective: &impl Fn(&[f64; 4]) -> f64, seed: [f64; 4], floor: f64) -> ([f64; 4], f64) {
    let mut x = seed;
    let mut fx = objective(&x);
    let mut width = INITIAL_WIDTH;
    for _ in 0..MAX_SWEEPS {
        if fx <= floor || width < MIN_WIDTH {
            break;
        }
        let mut improved = false;
        for i in 0..4 {
            let lo = (x[i] - width).max(0.0);
            let hi = (x[i] + width).min(UPPER[i]);
            let (t, ft) = golden_section(
                |t| {
                    let mut y = x;
                    y[i] = t;
                    objective(&y)
                },
                lo,
                hi,
            );
            if ft < fx {
                x[i] = t;
                fx = ft;
                improved = true;
            }
        }
        if !improved {
            width *= 0.5;
        }
    }
    (x, fx)
}

/// Multistart derivative-free search for cats with `crb ≤ (1+tol)/(2j)`.
///
/// Results are de-duplicated by state fidelity and sorted by CRB, then by
/// `(θ1, θ2, φ1, φ2)`.
pub fn find_hl(spec: &HlSearchSpec) -> Result<Vec<HlPoint>> {
    spec.validate()?;
    let (j, g) = (spec.j, spec.generator);
    let objective = |x: &[f64; 4]| match cat_crb(j, g, &CatAngles::from_array(*x)) {
        Ok(r) => r.crb,
        Err(_) => f64::INFINITY,
    };
    // the Heisenberg limit bounds the CRB from below; stop once it is reached
    let floor = j.heisenberg_limit() * (1.0 + 1e-13);
    let threshold = spec.threshold();

    let mut candidates: Vec<HlPoint> = lattice_seeds(spec.seeds)
        .into_par_iter()
        .map(|seed| refine(&objective, seed, floor))
        .filter(|(_, fx)| *fx <= threshold)
        .map(|(x, _)| {
            let x = [
                x[0].clamp(0.0, PI),
                x[1].clamp(0.0, PI),
                reduce_phase(x[2]),
                reduce_phase(x[3]),
            ];
            let a = CatAngles::from_array(x);
            HlPoint {
                theta1: a.theta1,
                theta2: a.theta2,
                phi1: a.phi1,
                phi2: a.phi2,
                crb: objective(&x),
            }
        })
        .filter(|p| p.crb <= threshold)
        .collect();

    candidates.sort_by(|a, b| {
        a.crb.total_cmp(&b.crb).then_with(|| {
            a.angles()
                .to_array()
                .iter()
                .zip(b.angles().to_array().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let mut kept: Vec<(HlPoint, crate::dicke::DickeVector)> = Vec::new();
    for p in candidates {
        let state = cat_state(&CatParams::from_angles(j, &p.angles())?)?;
        if kept
            .iter()
            .all(|(_, s)| s.inner(&state).norm() < DUPLICATE_FIDELITY)
        {
            kept.push((p, state));
        }
    }
    if kept.is_empty() {
        return Err(Error::NoHlFound {
            tolerance: spec.tolerance,
        });
    }
    Ok(kept.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(PI, 12), "3.14159265359");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(20.0, 12), "20");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(9.9999999999999, 12), "10");
        assert_eq!(format_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_sig(-2.25, 3), "-2.25");
    }

    #[test]
    fn spec_validation() {
        let s = ScanSpec::new(SpinJ::HALF, Generator::Z, 0.0, 0.0);
        assert!(s.with_resolution(1).validate().is_err());
        assert!(s.with_cap(0.0).validate().is_err());
        assert!(s.validate().is_ok());
        let h = HlSearchSpec::new(SpinJ::ONE, Generator::Z);
        assert!(HlSearchSpec {
            tolerance: 0.0,
            ..h
        }
        .validate()
        .is_err());
        assert!(HlSearchSpec {
            tolerance: 0.2,
            ..h
        }
        .validate()
        .is_err());
        assert!(HlSearchSpec { seeds: 0, ..h }.validate().is_err());
    }

    #[test]
    fn grid_endpoints_are_poles() {
        let s = ScanSpec::new(SpinJ::HALF, Generator::Z, 0.0, 0.0).with_resolution(7);
        assert_eq!(s.theta_at(0), 0.0);
        assert_eq!(s.theta_at(6), PI);
        let g = grid_scan(&s).unwrap();
        assert_eq!(g.cells.len(), 49);
        let c = g.get(0, 6);
        assert_eq!((c.theta1, c.theta2), (0.0, PI));
    }

    #[test]
    fn overflow_markers() {
        let c = |v| GridCell {
            theta1: 0.0,
            theta2: 0.0,
            value: v,
        };
        assert_eq!(c(CellValue::Finite(3.0)).overflow(20.0), Overflow::None);
        assert_eq!(c(CellValue::Finite(30.0)).overflow(20.0), Overflow::Capped);
        assert_eq!(c(CellValue::Finite(30.0)).capped(20.0), 20.0);
        assert_eq!(c(CellValue::Divergent).overflow(20.0), Overflow::Infinite);
        assert_eq!(c(CellValue::Degenerate).capped(20.0), 20.0);
    }

    #[test]
    fn seeds_are_distinct_lattice_points() {
        let s = lattice_seeds(100);
        assert_eq!(s.len(), 100);
        let mut keys: Vec<_> = s.iter().map(|x| x.map(|v| (v * 1e6) as i64)).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 100);
        assert_eq!(lattice_seeds(5000).len(), 1600);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(|t| (t - 0.3).powi(2), -1.0, 2.0);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx < 1e-16);
    }
}
