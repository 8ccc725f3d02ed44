//! Analytic CRB expressions for spin-1/2 (generators `Jz`, `Jx`) and spin-1
//! (generator `Jz`) cat states.
//!
//! Every evaluator returns `f64::INFINITY` where its denominator vanishes,
//! using the same QFI threshold as the numeric engine so that divergences can
//! be compared as events. Each expression is written as `CRB² = num/den` and
//! routed through [`from_ratio`].
//!
//! Two printed spin-1 `φ = π` expressions do not agree with the numeric
//! engine. The family evaluators use the forms obtained from the `φ = 0`
//! expression through `|θ, φ+π⟩ = |−θ, φ⟩`; the printed forms stay available
//! through [`ClosedFormCase::printed_form`] so the discrepancy can be reported.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::catstate::CatAngles;
use crate::dicke::SpinJ;
use crate::error::{Error, Result};
use crate::metrology::{cat_crb, Generator, QFI_DIVERGENCE};

/// Angle tolerance used when checking family constraints.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// `√(num/den)`, or `+∞` when the implied QFI `den/num` is at or below the
/// divergence threshold (including `0/0`).
pub fn from_ratio(num: f64, den: f64) -> f64 {
    let qfi = den / num;
    if qfi.is_nan() || qfi <= QFI_DIVERGENCE {
        f64::INFINITY
    } else {
        (num / den).sqrt()
    }
}

fn half_trig(theta: f64) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    (c, s)
}

/// `1 + c1c2 + cos(φ1−φ2) s1s2`, written as `2cos²((θ1+θ2)/4) + 2cos²((φ1−φ2)/2) s1s2`
/// so that it does not cancel near the divergence lines.
fn half_norm_term(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> f64 {
    let (_, s1) = half_trig(theta1);
    let (_, s2) = half_trig(theta2);
    let sigma = ((theta1 + theta2) / 4.0).cos();
    let delta = ((phi1 - phi2) / 2.0).cos();
    2.0 * sigma * sigma + 2.0 * delta * delta * s1 * s2
}

/// Spin-1/2, `Jz`: the general two-component cat.
pub fn crb_half_z(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> f64 {
    let (c1, s1) = half_trig(theta1);
    let (c2, s2) = half_trig(theta2);
    let d = half_norm_term(theta1, theta2, phi1, phi2);
    let a = c1 + c2;
    let num = 2.0 * d * d;
    // 2 − cosθ1 − cosθ2 + 4cos(φ1−φ2)s1s2 = 2[(s1 − s2)² + 2(1 + cos(φ1−φ2))s1s2]
    let delta = ((phi1 - phi2) / 2.0).cos();
    let bracket = 2.0 * ((s1 - s2).powi(2) + 4.0 * delta * delta * s1 * s2);
    from_ratio(num, a * a * bracket)
}

/// Spin-1/2, `Jx`: the general two-component cat.
pub fn crb_half_x(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> f64 {
    let (c1, s1) = half_trig(theta1);
    let (c2, s2) = half_trig(theta2);
    let d = half_norm_term(theta1, theta2, phi1, phi2);
    let ax = (c1 + c2) * (phi1.cos() * s1 + phi2.cos() * s2);
    from_ratio(d * d, (d - ax) * (d + ax))
}

/// Phase difference `φ1 − φ2` of the spin-1 families with a printed closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseFamily {
    Zero,
    Half,
    Pi,
}

impl PhaseFamily {
    pub fn phase_difference(self) -> f64 {
        match self {
            PhaseFamily::Zero => 0.0,
            PhaseFamily::Half => FRAC_PI_2,
            PhaseFamily::Pi => PI,
        }
    }
}

fn one_z_phi0(t1: f64, t2: f64) -> f64 {
    let a = (3.0 * t1 - t2).cos() + (3.0 * t2 - t1).cos();
    let b = (2.0 * t1).cos() + (2.0 * t2).cos();
    let c = (2.0 * (t1 - t2)).cos();
    let d = (t1 + t2).cos();
    let n = (t1 - t2).cos() + 3.0;
    from_ratio(2.0 * n * n, a - 8.0 * b + 2.0 * c - 18.0 * d + 30.0)
}

fn one_z_phihalf(t1: f64, t2: f64) -> f64 {
    let (ct1, ct2) = (t1.cos(), t2.cos());
    let a = ct1 + ct2 + 2.0;
    let b = (2.0 * t1).cos() + (2.0 * t2).cos() - 8.0 * ct1 * ct2 + 6.0;
    let c = 4.0 * (ct1 * ct2 - 1.0).powi(2);
    from_ratio(a * a, a * b - c)
}

fn one_z_phipi_with(t1: f64, t2: f64, a: f64) -> f64 {
    let b = (2.0 * t1).cos() + (2.0 * t2).cos();
    let c = (2.0 * (t1 + t2)).cos();
    let d = (t1 - t2).cos();
    let n = (t1 + t2).cos() + 3.0;
    from_ratio(2.0 * n * n, a - 8.0 * b + 2.0 * c - 18.0 * d + 30.0)
}

fn one_z_phipi(t1: f64, t2: f64) -> f64 {
    one_z_phipi_with(t1, t2, (3.0 * t1 + t2).cos() + (t1 + 3.0 * t2).cos())
}

fn one_z_phipi_printed(t1: f64, t2: f64) -> f64 {
    one_z_phipi_with(t1, t2, (3.0 * t1 + t2).cos() + (t1 - 3.0 * t2).cos())
}

/// Spin-1, `Jz`, for `φ1 − φ2 ∈ {0, π/2, π}`.
pub fn crb_one_z(family: PhaseFamily, theta1: f64, theta2: f64) -> f64 {
    match family {
        PhaseFamily::Zero => one_z_phi0(theta1, theta2),
        PhaseFamily::Half => one_z_phihalf(theta1, theta2),
        PhaseFamily::Pi => one_z_phipi(theta1, theta2),
    }
}

/// Which numeric configuration a family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyGroup {
    HalfZ,
    HalfX,
    OneZ,
}

/// One analytic CRB expression together with the parameter surface it holds on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormCase {
    HalfZGeneral,
    HalfZMirror,
    HalfZPhi0,
    HalfZPhiHalf,
    HalfZPhiPi,
    HalfZEquator,
    HalfXGeneral,
    HalfXPhi2Half,
    HalfXEqualTheta,
    HalfXEquator,
    HalfXPhi00,
    HalfXPhi0Pi,
    HalfXPhi3qTheta1Zero,
    HalfXPhi3qTheta2Zero,
    OneZPhi0,
    OneZPhi0EqualTheta,
    OneZPhi0Mirror,
    OneZPhiHalf,
    OneZPhiHalfMirror,
    OneZPhiHalfEqualTheta,
    OneZPhiPi,
    OneZPhiPiEqualTheta,
    OneZAntipodal,
}

/// An expression as printed, kept beside a corrected family evaluator.
#[derive(Debug, Clone, Copy)]
pub struct PrintedForm {
    pub note: &'static str,
    pub eval: fn(&CatAngles) -> f64,
}

fn wrap_phase(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

fn phase_eq(a: f64, b: f64) -> bool {
    wrap_phase(a - b).abs() < CONSTRAINT_TOL
}

fn lin(n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = PI / (n.max(2) - 1) as f64;
    (0..n.max(2)).map(move |k| {
        if k == n.max(2) - 1 {
            PI
        } else {
            k as f64 * step
        }
    })
}

fn phases(n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = TAU / n as f64;
    (0..n).map(move |k| k as f64 * step)
}

/// Phase pairs used where a family leaves both phases free.
const GENERAL_PHASES: [(f64, f64); 7] = [
    (0.0, 0.0),
    (0.3, 1.9),
    (FRAC_PI_2, 0.0),
    (2.5, 2.5 - 39.0 * PI / 40.0),
    (PI, 0.0),
    (1.0, 4.0),
    (FRAC_PI_2, 3.0 * FRAC_PI_2),
];

/// Common azimuth used by two-angle `Jz` families.
const COMMON_PHASE: f64 = 0.4;

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 23] = [
        ClosedFormCase::HalfZGeneral,
        ClosedFormCase::HalfZMirror,
        ClosedFormCase::HalfZPhi0,
        ClosedFormCase::HalfZPhiHalf,
        ClosedFormCase::HalfZPhiPi,
        ClosedFormCase::HalfZEquator,
        ClosedFormCase::HalfXGeneral,
        ClosedFormCase::HalfXPhi2Half,
        ClosedFormCase::HalfXEqualTheta,
        ClosedFormCase::HalfXEquator,
        ClosedFormCase::HalfXPhi00,
        ClosedFormCase::HalfXPhi0Pi,
        ClosedFormCase::HalfXPhi3qTheta1Zero,
        ClosedFormCase::HalfXPhi3qTheta2Zero,
        ClosedFormCase::OneZPhi0,
        ClosedFormCase::OneZPhi0EqualTheta,
        ClosedFormCase::OneZPhi0Mirror,
        ClosedFormCase::OneZPhiHalf,
        ClosedFormCase::OneZPhiHalfMirror,
        ClosedFormCase::OneZPhiHalfEqualTheta,
        ClosedFormCase::OneZPhiPi,
        ClosedFormCase::OneZPhiPiEqualTheta,
        ClosedFormCase::OneZAntipodal,
    ];

    pub fn name(self) -> &'static str {
        use ClosedFormCase::*;
        match self {
            HalfZGeneral => "half_z_general",
            HalfZMirror => "half_z_mirror",
            HalfZPhi0 => "half_z_phi0",
            HalfZPhiHalf => "half_z_phihalf",
            HalfZPhiPi => "half_z_phipi",
            HalfZEquator => "half_z_equator",
            HalfXGeneral => "half_x_general",
            HalfXPhi2Half => "half_x_phi2half",
            HalfXEqualTheta => "half_x_equaltheta",
            HalfXEquator => "half_x_equator",
            HalfXPhi00 => "half_x_phi_00",
            HalfXPhi0Pi => "half_x_phi_0pi",
            HalfXPhi3qTheta1Zero => "half_x_phi3q_theta1zero",
            HalfXPhi3qTheta2Zero => "half_x_phi3q_theta2zero",
            OneZPhi0 => "one_z_phi0",
            OneZPhi0EqualTheta => "one_z_phi0_equaltheta",
            OneZPhi0Mirror => "one_z_phi0_mirror",
            OneZPhiHalf => "one_z_phihalf",
            OneZPhiHalfMirror => "one_z_phihalf_mirror",
            OneZPhiHalfEqualTheta => "one_z_phihalf_equaltheta",
            OneZPhiPi => "one_z_phipi",
            OneZPhiPiEqualTheta => "one_z_phipi_equaltheta",
            OneZAntipodal => "one_z_antipodal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let key = name.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|c| c.name() == key)
    }

    pub fn group(self) -> FamilyGroup {
        use ClosedFormCase::*;
        match self {
            HalfZGeneral | HalfZMirror | HalfZPhi0 | HalfZPhiHalf | HalfZPhiPi | HalfZEquator => {
                FamilyGroup::HalfZ
            }
            HalfXGeneral | HalfXPhi2Half | HalfXEqualTheta | HalfXEquator | HalfXPhi00
            | HalfXPhi0Pi | HalfXPhi3qTheta1Zero | HalfXPhi3qTheta2Zero => FamilyGroup::HalfX,
            _ => FamilyGroup::OneZ,
        }
    }

    pub fn spin(self) -> SpinJ {
        match self.group() {
            FamilyGroup::HalfZ | FamilyGroup::HalfX => SpinJ::HALF,
            FamilyGroup::OneZ => SpinJ::ONE,
        }
    }

    pub fn generator(self) -> Generator {
        match self.group() {
            FamilyGroup::HalfX => Generator::X,
            _ => Generator::Z,
        }
    }

    /// Human-readable constraint surface.
    pub fn constraint(self) -> &'static str {
        use ClosedFormCase::*;
        match self {
            HalfZGeneral | HalfXGeneral => "none",
            HalfZMirror => "θ2 = π − θ1",
            HalfZPhi0 | OneZPhi0 => "φ1 − φ2 = 0",
            HalfZPhiHalf | OneZPhiHalf => "φ1 − φ2 = ±π/2",
            HalfZPhiPi | OneZPhiPi => "φ1 − φ2 = π",
            HalfZEquator | HalfXEquator => "θ1 = θ2 = π/2",
            HalfXPhi2Half => "φ1 = 0, φ2 = π/2",
            HalfXEqualTheta => "φ1 = 0, φ2 = π/2, θ1 = θ2",
            HalfXPhi00 => "φ1 = φ2 = 0",
            HalfXPhi0Pi => "φ1 = 0, φ2 = π",
            HalfXPhi3qTheta1Zero => "φ1 = 0, φ2 = 3π/4, θ1 = 0",
            HalfXPhi3qTheta2Zero => "φ1 = 0, φ2 = 3π/4, θ2 = 0",
            OneZPhi0EqualTheta => "φ1 − φ2 = 0, θ1 = θ2",
            OneZPhi0Mirror => "φ1 − φ2 = 0, θ2 = π − θ1",
            OneZPhiHalfMirror => "φ1 − φ2 = ±π/2, θ2 = π − θ1",
            OneZPhiHalfEqualTheta => "φ1 − φ2 = ±π/2, θ1 = θ2",
            OneZPhiPiEqualTheta => "φ1 − φ2 = π, θ1 = θ2",
            OneZAntipodal => "φ1 − φ2 = π, θ2 = π − θ1",
        }
    }

    /// Rejects angles off this family's constraint surface.
    pub fn check(self, a: &CatAngles) -> Result<()> {
        use ClosedFormCase::*;
        let dphi = a.phi1 - a.phi2;
        let mirror = (a.theta1 + a.theta2 - PI).abs() < CONSTRAINT_TOL;
        let equal = (a.theta1 - a.theta2).abs() < CONSTRAINT_TOL;
        let equator = (a.theta1 - FRAC_PI_2).abs() < CONSTRAINT_TOL
            && (a.theta2 - FRAC_PI_2).abs() < CONSTRAINT_TOL;
        let d0 = phase_eq(dphi, 0.0);
        let dhalf = dphi.cos().abs() < CONSTRAINT_TOL;
        let dpi = phase_eq(dphi, PI);
        let phi1_zero = phase_eq(a.phi1, 0.0);
        let ok = match self {
            HalfZGeneral | HalfXGeneral => true,
            HalfZMirror => mirror,
            HalfZPhi0 | OneZPhi0 => d0,
            HalfZPhiHalf | OneZPhiHalf => dhalf,
            HalfZPhiPi | OneZPhiPi => dpi,
            HalfZEquator | HalfXEquator => equator,
            HalfXPhi2Half => phi1_zero && phase_eq(a.phi2, FRAC_PI_2),
            HalfXEqualTheta => phi1_zero && phase_eq(a.phi2, FRAC_PI_2) && equal,
            HalfXPhi00 => phi1_zero && phase_eq(a.phi2, 0.0),
            HalfXPhi0Pi => phi1_zero && phase_eq(a.phi2, PI),
            HalfXPhi3qTheta1Zero => {
                phi1_zero && phase_eq(a.phi2, 3.0 * FRAC_PI_4) && a.theta1.abs() < CONSTRAINT_TOL
            }
            HalfXPhi3qTheta2Zero => {
                phi1_zero && phase_eq(a.phi2, 3.0 * FRAC_PI_4) && a.theta2.abs() < CONSTRAINT_TOL
            }
            OneZPhi0EqualTheta => d0 && equal,
            OneZPhi0Mirror => d0 && mirror,
            OneZPhiHalfMirror => dhalf && mirror,
            OneZPhiHalfEqualTheta => dhalf && equal,
            OneZPhiPiEqualTheta => dpi && equal,
            OneZAntipodal => dpi && mirror,
        };
        let in_range = [a.theta1, a.theta2]
            .iter()
            .all(|t| (-CONSTRAINT_TOL..=PI + CONSTRAINT_TOL).contains(t))
            && a.phi1.is_finite()
            && a.phi2.is_finite();
        if ok && in_range {
            Ok(())
        } else {
            Err(Error::ConstraintViolation {
                family: self.name(),
                detail: format!("requires {}; got {:?}", self.constraint(), a),
            })
        }
    }

    /// Constraint check followed by the analytic expression.
    pub fn evaluate(self, a: &CatAngles) -> Result<f64> {
        self.check(a)?;
        Ok(self.formula(a))
    }

    fn formula(self, a: &CatAngles) -> f64 {
        use ClosedFormCase::*;
        let (t1, t2) = (a.theta1, a.theta2);
        let dphi = a.phi1 - a.phi2;
        match self {
            HalfZGeneral => crb_half_z(t1, t2, a.phi1, a.phi2),
            HalfZMirror => {
                let s = t1.sin();
                let cd = dphi.cos();
                let n = 2.0 + s * (1.0 + cd);
                from_ratio(n * n, 4.0 * (1.0 + s) * (1.0 + s * cd))
            }
            HalfZPhi0 => from_ratio(1.0, ((t1 + t2) / 2.0).sin().powi(2)),
            HalfZPhiHalf => {
                let (c1, _) = half_trig(t1);
                let (c2, _) = half_trig(t2);
                let d = 1.0 + c1 * c2;
                from_ratio(2.0 * d * d, (c1 + c2).powi(2) * (2.0 - t1.cos() - t2.cos()))
            }
            HalfZPhiPi => from_ratio(1.0, ((t1 - t2) / 2.0).sin().powi(2)),
            HalfZEquator => {
                let n = 3.0 + dphi.cos();
                from_ratio(n * n, 16.0 * (dphi / 2.0).cos().powi(2))
            }
            HalfXGeneral => crb_half_x(t1, t2, a.phi1, a.phi2),
            HalfXPhi2Half => {
                let (c1, s1) = half_trig(t1);
                let (c2, _) = half_trig(t2);
                let d = 1.0 + c1 * c2;
                let k = (c1 + c2) * s1;
                from_ratio(d * d, d * d - k * k)
            }
            HalfXEqualTheta => {
                let c = t1.cos();
                from_ratio(
                    2.0 * (3.0 + c).powi(2),
                    15.0 + 12.0 * c + 5.0 * (2.0 * t1).cos(),
                )
            }
            HalfXEquator => {
                let n = 3.0 + dphi.cos();
                let k = a.phi1.cos() + a.phi2.cos();
                from_ratio(n * n, n * n - 4.0 * k * k)
            }
            HalfXPhi00 => from_ratio(1.0, ((t1 + t2) / 2.0).cos().powi(2)),
            HalfXPhi0Pi => from_ratio(1.0, ((t1 - t2) / 2.0).cos().powi(2)),
            HalfXPhi3qTheta2Zero => from_ratio(1.0, (t1 / 2.0).cos().powi(2)),
            HalfXPhi3qTheta1Zero => from_ratio(4.0, 3.0 + t2.cos()),
            OneZPhi0 => crb_one_z(PhaseFamily::Zero, t1, t2),
            OneZPhi0EqualTheta => from_ratio(1.0, 2.0 * t1.sin().powi(2)),
            OneZPhi0Mirror => from_ratio(3.0 - (2.0 * t1).cos(), 8.0),
            OneZPhiHalf => crb_one_z(PhaseFamily::Half, t1, t2),
            OneZPhiHalfMirror => from_ratio(8.0, 12.0 * (2.0 * t1).cos() - (4.0 * t1).cos() + 21.0),
            OneZPhiHalfEqualTheta => from_ratio(1.0, t1.sin().powi(2)),
            OneZPhiPi => crb_one_z(PhaseFamily::Pi, t1, t2),
            OneZPhiPiEqualTheta => {
                let n = 3.0 + (2.0 * t1).cos();
                from_ratio(n * n, 16.0 * t1.sin().powi(4))
            }
            OneZAntipodal => 0.5,
        }
    }

    /// The expression as printed, for families whose evaluator departs from it.
    pub fn printed_form(self) -> Option<PrintedForm> {
        match self {
            ClosedFormCase::OneZPhiPi => Some(PrintedForm {
                note: "printed A = cos(3θ1+θ2) + cos(θ1−3θ2); evaluator uses cos(θ1+3θ2)",
                eval: |a| one_z_phipi_printed(a.theta1, a.theta2),
            }),
            ClosedFormCase::OneZPhiPiEqualTheta => Some(PrintedForm {
                note: "printed (3+cos 2θ)/(4|sin θ|); evaluator uses (3+cos 2θ)/(4 sin²θ)",
                eval: |a| {
                    let n = 3.0 + (2.0 * a.theta1).cos();
                    from_ratio(n * n, 16.0 * a.theta1.sin().powi(2))
                },
            }),
            _ => None,
        }
    }

    /// Points on the constraint surface: a `res × res` grid of the free
    /// parameters (repeated over fixed phase pairs for the general families;
    /// one-parameter families sample `res²` points on their single axis).
    pub fn samples(self, res: usize) -> Vec<CatAngles> {
        use ClosedFormCase::*;
        let res = res.max(2);
        let grid2 = |f: &dyn Fn(f64, f64) -> CatAngles, xs: Vec<f64>, ys: Vec<f64>| {
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for &x in &xs {
                for &y in &ys {
                    out.push(f(x, y));
                }
            }
            out
        };
        let thetas: Vec<f64> = lin(res).collect();
        let phis: Vec<f64> = phases(res).collect();
        let line: Vec<f64> = lin(res * res).collect();
        let with_dphi = |dphi: f64| {
            let th = thetas.clone();
            grid2(
                &move |x, y| CatAngles::new(x, y, COMMON_PHASE + dphi, COMMON_PHASE),
                th.clone(),
                th,
            )
        };
        let theta_by_common = |dphi: f64, mirror: bool| {
            grid2(
                &move |t, p| {
                    let t2 = if mirror { PI - t } else { t };
                    CatAngles::new(t, t2, p + dphi, p)
                },
                thetas.clone(),
                phis.clone(),
            )
        };
        match self {
            HalfZGeneral | HalfXGeneral => GENERAL_PHASES
                .iter()
                .flat_map(|&(p1, p2)| {
                    grid2(
                        &|x, y| CatAngles::new(x, y, p1, p2),
                        thetas.clone(),
                        thetas.clone(),
                    )
                })
                .collect(),
            HalfZMirror => grid2(
                &|t, d| CatAngles::new(t, PI - t, 0.7 + d, 0.7),
                thetas.clone(),
                phis.clone(),
            ),
            HalfZPhi0 | OneZPhi0 => with_dphi(0.0),
            HalfZPhiHalf | OneZPhiHalf => with_dphi(-FRAC_PI_2),
            HalfZPhiPi | OneZPhiPi => with_dphi(PI),
            HalfZEquator => grid2(
                &|d, p| CatAngles::new(FRAC_PI_2, FRAC_PI_2, p + d, p),
                phis.clone(),
                phis.clone(),
            ),
            HalfXEquator => grid2(
                &|p1, p2| CatAngles::new(FRAC_PI_2, FRAC_PI_2, p1, p2),
                phis.clone(),
                phis.clone(),
            ),
            HalfXPhi2Half => grid2(
                &|x, y| CatAngles::new(x, y, 0.0, FRAC_PI_2),
                thetas.clone(),
                thetas.clone(),
            ),
            HalfXPhi00 => grid2(
                &|x, y| CatAngles::new(x, y, 0.0, 0.0),
                thetas.clone(),
                thetas.clone(),
            ),
            HalfXPhi0Pi => grid2(
                &|x, y| CatAngles::new(x, y, 0.0, PI),
                thetas.clone(),
                thetas.clone(),
            ),
            HalfXEqualTheta => line
                .iter()
                .map(|&t| CatAngles::new(t, t, 0.0, FRAC_PI_2))
                .collect(),
            HalfXPhi3qTheta1Zero => line
                .iter()
                .map(|&t| CatAngles::new(0.0, t, 0.0, 3.0 * FRAC_PI_4))
                .collect(),
            HalfXPhi3qTheta2Zero => line
                .iter()
                .map(|&t| CatAngles::new(t, 0.0, 0.0, 3.0 * FRAC_PI_4))
                .collect(),
            OneZPhi0EqualTheta => theta_by_common(0.0, false),
            OneZPhi0Mirror => theta_by_common(0.0, true),
            OneZPhiHalfMirror => theta_by_common(FRAC_PI_2, true),
            OneZPhiHalfEqualTheta => theta_by_common(FRAC_PI_2, false),
            OneZPhiPiEqualTheta => theta_by_common(PI, false),
            OneZAntipodal => theta_by_common(PI, true),
        }
    }
}

impl std::fmt::Display for ClosedFormCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn reduction_in_group(group: FamilyGroup, case: ClosedFormCase, a: &CatAngles) -> Result<f64> {
    if case.group() != group {
        return Err(Error::ConstraintViolation {
            family: case.name(),
            detail: format!("not a {group:?} family"),
        });
    }
    case.evaluate(a)
}

/// Spin-1/2 `Jz` reductions (mirror, `φ ∈ {0, π/2, π}`, equator).
pub fn crb_half_z_reductions(case: ClosedFormCase, a: &CatAngles) -> Result<f64> {
    reduction_in_group(FamilyGroup::HalfZ, case, a)
}

/// Spin-1/2 `Jx` reductions.
pub fn crb_half_x_reductions(case: ClosedFormCase, a: &CatAngles) -> Result<f64> {
    reduction_in_group(FamilyGroup::HalfX, case, a)
}

/// Spin-1 `Jz` reductions (mirror, equal-θ and antipodal lines).
pub fn crb_one_z_reductions(case: ClosedFormCase, a: &CatAngles) -> Result<f64> {
    reduction_in_group(FamilyGroup::OneZ, case, a)
}

/// Outcome of comparing one family against the numeric engine.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub case: ClosedFormCase,
    pub samples: usize,
    /// Samples where the two components cancel; no state exists there, so
    /// they are excluded from the comparison.
    pub degenerate: usize,
    /// Largest `|closed − numeric|` over samples where both are finite.
    pub max_abs_dev: f64,
    /// Samples where exactly one side diverges.
    pub event_mismatches: usize,
    /// Samples where both sides diverge.
    pub divergent_events: usize,
    /// The same comparison for the printed expression, where one is flagged.
    pub printed: Option<(f64, usize)>,
}

impl Verification {
    pub fn passes(&self, tol: f64) -> bool {
        self.event_mismatches == 0 && self.max_abs_dev <= tol
    }
}

/// Numeric CRB of a family sample, `None` for a degenerate cat.
pub fn numeric_value(case: ClosedFormCase, a: &CatAngles) -> Result<Option<f64>> {
    match cat_crb(case.spin(), case.generator(), a) {
        Ok(r) => Ok(Some(r.crb)),
        Err(Error::DegenerateCat { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn compare(pairs: impl Iterator<Item = (f64, Option<f64>)>) -> (f64, usize, usize) {
    let (mut dev, mut mismatches, mut events) = (0.0_f64, 0, 0);
    for (closed, numeric) in pairs {
        let Some(numeric) = numeric else { continue };
        match (closed.is_finite(), numeric.is_finite()) {
            (true, true) => dev = dev.max((closed - numeric).abs()),
            (false, false) => events += 1,
            _ => mismatches += 1,
        }
    }
    (dev, mismatches, events)
}

/// Evaluates `case` and the numeric engine on `case.samples(res)`.
pub fn verify(case: ClosedFormCase, res: usize) -> Result<Verification> {
    let samples = case.samples(res);
    let numeric = samples
        .iter()
        .map(|a| numeric_value(case, a))
        .collect::<Result<Vec<_>>>()?;
    let closed = samples
        .iter()
        .map(|a| case.evaluate(a))
        .collect::<Result<Vec<_>>>()?;
    let (max_abs_dev, event_mismatches, divergent_events) =
        compare(closed.iter().copied().zip(numeric.iter().copied()));
    let printed = case.printed_form().map(|p| {
        let (dev, mism, _) = compare(
            samples
                .iter()
                .map(|a| (p.eval)(a))
                .zip(numeric.iter().copied()),
        );
        (dev, mism)
    });
    Ok(Verification {
        case,
        samples: samples.len(),
        degenerate: numeric.iter().filter(|v| v.is_none()).count(),
        max_abs_dev,
        event_mismatches,
        divergent_events,
        printed,
    })
}
