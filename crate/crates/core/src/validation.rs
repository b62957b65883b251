//! Brute-force oracles for the solver's components.
//!
//! None of these functions reuse the code paths they check: travel times
//! come from a dense scan plus golden-section search, the incident wave
//! from finite differences of the closed-form line-source potential.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;

use crate::cagniard::PathSpec;
use crate::complexkernel::ComplexSlowness;
use crate::error::Result;
use crate::greens::{Medium, Receiver, SourceMix, WavePhase};
use crate::interface::{solve_coeffs, IncidentKind};
use crate::material::{LayerDerived, PoroelasticMaterial};

/// Outcome of comparing a module against an oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_abs: 0.0,
            max_rel: 0.0,
            samples: 0,
            tolerance,
            pass: true,
        }
    }

    /// Records one comparison where `err` is measured against `scale`.
    pub fn record(&mut self, err: f64, scale: f64) {
        let rel = if scale > 0.0 { err / scale } else { err };
        self.max_abs = self.max_abs.max(err);
        self.max_rel = if rel.is_nan() {
            f64::INFINITY
        } else {
            self.max_rel.max(rel)
        };
        self.samples += 1;
        self.pass = self.max_rel <= self.tolerance;
    }

    /// Merges another report into this one.
    pub fn absorb(&mut self, other: &OracleReport) {
        self.max_abs = self.max_abs.max(other.max_abs);
        self.max_rel = self.max_rel.max(other.max_rel);
        self.samples += other.samples;
        self.pass = self.pass && other.pass && self.max_rel <= self.tolerance;
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (max rel {:.3e}, max abs {:.3e}, {} samples, tol {:.1e})",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.max_rel,
            self.max_abs,
            self.samples,
            self.tolerance
        )
    }
}

fn two_leg_time(path: &PathSpec<f64>, xi: f64) -> f64 {
    let ax = path.x.abs();
    let a = (xi * xi + path.leg_a_depth * path.leg_a_depth).sqrt();
    let b = ((ax - xi) * (ax - xi) + path.leg_b_depth * path.leg_b_depth).sqrt();
    a / path.leg_a_velocity + b / path.leg_b_velocity
}

/// Minimum two-leg travel time by a scan over 10⁶ crossing points and a
/// golden-section polish of the best bracket.
pub fn fermat_oracle(path: &PathSpec<f64>) -> f64 {
    const N: usize = 1_000_000;
    let ax = path.x.abs();
    if ax == 0.0 {
        return two_leg_time(path, 0.0);
    }
    let step = ax / N as f64;
    let (mut best, mut best_t) = (0usize, f64::INFINITY);
    for k in 0..=N {
        let t = two_leg_time(path, k as f64 * step);
        if t < best_t {
            best_t = t;
            best = k;
        }
    }
    let mut lo = best.saturating_sub(1) as f64 * step;
    let mut hi = ((best + 1).min(N)) as f64 * step;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (two_leg_time(path, c), two_leg_time(path, d));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * ax {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = two_leg_time(path, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = two_leg_time(path, d);
        }
    }
    best_t.min(two_leg_time(path, 0.5 * (lo + hi)))
}

/// Time-integrated potential of a unit line source of `Φ̈ − V²ΔΦ = δ(x)δ(y−h)δ(t)`:
/// `arccosh(t/t0) / (2πV²)` after the arrival, zero before.
fn line_source_potential(v: f64, x: f64, y: f64, h: f64, t: f64) -> f64 {
    let t0 = x.hypot(y - h) / v;
    if t <= t0 {
        0.0
    } else {
        (t / t0).acosh() / (2.0 * PI * v * v)
    }
}

/// Incident-wave kernel from finite differences (step `1e-3 r`) of the
/// line-source potential, scaled by `amp = P_1j F_j`.
pub fn green2d_oracle(v: f64, amp: f64, rec: (f64, f64), h: f64, t: f64) -> [f64; 2] {
    let (x, y) = rec;
    let r = x.hypot(y - h);
    if t <= r / v {
        return [0.0, 0.0];
    }
    let d = 1e-3 * r;
    let phi = |x: f64, y: f64| line_source_potential(v, x, y, h, t);
    let gx = if x == 0.0 {
        0.0
    } else {
        (phi(x + d, y) - phi(x - d, y)) / (2.0 * d)
    };
    let gy = (phi(x, y + d) - phi(x, y - d)) / (2.0 * d);
    [amp * gx, amp * gy]
}

/// Continued incident kernel written out from the line-source gradient,
/// for the homogeneous-limit comparison.
fn continued_incident(v: f64, amp: f64, x: f64, y: f64, h: f64, t: f64) -> [f64; 2] {
    let r2 = x * x + (y - h) * (y - h);
    let t0 = r2.sqrt() / v;
    if t <= t0 {
        return [0.0, 0.0];
    }
    let c = -amp * t / (2.0 * PI * v * v * r2 * (t * t - t0 * t0).sqrt());
    [c * x, c * (y - h)]
}

/// Geometry of the homogeneous-limit check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousGeometry {
    pub h: f64,
    /// Receiver below the interface.
    pub x: f64,
    pub y: f64,
    pub q_samples: usize,
    pub t_samples: usize,
}

impl Default for HomogeneousGeometry {
    fn default() -> Self {
        Self {
            h: 500.0,
            x: 400.0,
            y: -533.0,
            q_samples: 200,
            t_samples: 200,
        }
    }
}

/// Slownesses spread over real, imaginary (both sides of the branch
/// points) and generic complex values.
fn q_samples(layer: &LayerDerived<f64>, n: usize) -> Vec<Complex<f64>> {
    let s = 1.0 / layer.v_ps.min(layer.v_s);
    (0..n)
        .map(|k| {
            let u = (k as f64 + 0.5) / n as f64;
            match k % 4 {
                0 => Complex::new(2.0 * s * u, 0.0),
                1 => Complex::new(0.0, 2.0 * s * (u - 0.5)),
                2 => Complex::new(s * u, s * (0.5 - u)),
                _ => Complex::new(1e-3 * s, 3.0 * s * (u - 0.5)),
            }
        })
        .collect()
}

/// Runs the homogeneous-limit check for `mat` in both layers, or for the
/// pair `(mat, other)` when a second material is given.
pub fn homogeneous_check_pair(
    mat: &PoroelasticMaterial<f64>,
    other: Option<&PoroelasticMaterial<f64>>,
    geo: &HomogeneousGeometry,
) -> Result<(OracleReport, OracleReport)> {
    let top = LayerDerived::from_material(mat)?;
    let bottom = match other {
        Some(m) => LayerDerived::from_material(m)?,
        None => top,
    };
    let mut refl = OracleReport::new("reflection coefficients vanish", 1e-8);
    for q in q_samples(&top, geo.q_samples) {
        let s = ComplexSlowness::new(q);
        for inc in [IncidentKind::Pf, IncidentKind::Ps] {
            let c = match solve_coeffs(&s, inc, &top, &bottom) {
                Ok(c) => c,
                // Branch point of the incident mode; the prefactor is infinite there.
                Err(crate::error::Error::SingularPrefactor { .. }) => continue,
                Err(e) => return Err(e),
            };
            let r = c.r_pf.norm().max(c.r_ps.norm()).max(c.r_s.norm());
            let t = c.t_pf.norm().max(c.t_ps.norm()).max(c.t_s.norm());
            refl.record(r, t);
        }
    }

    let medium = Medium::new(top, bottom, geo.h)?;
    let mix = SourceMix::new(-1e10, -1e10, 0.0, &top)?;
    let rec = Receiver::new(geo.x, geo.y)?;
    let mut trans = OracleReport::new("transmitted wave continues the incident wave", 1e-6);
    let t_first = medium.arrival(WavePhase::TPfPf, &rec).t0;
    let t_last = 4.0 * medium.arrival(WavePhase::TPsPs, &rec).t0;
    let mut got = Vec::with_capacity(geo.t_samples);
    let mut want = Vec::with_capacity(geo.t_samples);
    for k in 0..geo.t_samples {
        let t = t_first + (t_last - t_first) * (k as f64 + 0.5) / geo.t_samples as f64;
        let mut g = [0.0; 2];
        for ph in WavePhase::ALL {
            let v = medium.phase_kernel(ph, &rec, &mix, t)?;
            g = [g[0] + v[0], g[1] + v[1]];
        }
        let mut w = [0.0; 2];
        for (v, col, amp) in [(top.v_pf, 0, mix.f_pf), (top.v_ps, 1, mix.f_ps)] {
            let c = continued_incident(v, top.p[0][col] * amp, geo.x, geo.y, geo.h, t);
            w = [w[0] + c[0], w[1] + c[1]];
        }
        got.push(g);
        want.push(w);
    }
    let scale = want.iter().map(|w| w[0].hypot(w[1])).fold(0.0, f64::max);
    for (g, w) in got.iter().zip(&want) {
        trans.record((g[0] - w[0]).hypot(g[1] - w[1]), scale);
    }
    Ok((refl, trans))
}

/// Homogeneous-limit check with `mat` in both layers.
pub fn homogeneous_check(
    mat: &PoroelasticMaterial<f64>,
    geo: &HomogeneousGeometry,
) -> Result<OracleReport> {
    let (r, t) = homogeneous_check_pair(mat, None, geo)?;
    let mut out = OracleReport::new("homogeneous limit", r.tolerance.max(t.tolerance));
    out.absorb(&r);
    out.absorb(&t);
    out.pass = r.pass && t.pass;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cagniard::arrival_body;
    use crate::material::reference_layers;

    #[test]
    fn fermat_equal_velocities_and_vertical() {
        let path = PathSpec::new((533.0, 2000.0), (500.0, 2000.0), 400.0, 2000.0).unwrap();
        let expected = 400f64.hypot(1033.0) / 2000.0;
        assert!((fermat_oracle(&path) - expected).abs() < 1e-12 * expected);
        let path = PathSpec::new((533.0, 2000.0), (500.0, 1000.0), 0.0, 2000.0).unwrap();
        assert_eq!(fermat_oracle(&path), 533.0 / 2000.0 + 0.5);
    }

    #[test]
    fn fermat_agrees_with_bisection() {
        let path = PathSpec::new((533.0, 2535.0), (500.0, 1186.0), 400.0, 2692.0).unwrap();
        let a = fermat_oracle(&path);
        let b = arrival_body(&path);
        assert!((a - b).abs() < 1e-10 * b);
    }

    #[test]
    fn green_oracle_edge_cases() {
        assert_eq!(
            green2d_oracle(2000.0, 1.0, (400.0, 533.0), 500.0, 0.1),
            [0.0, 0.0]
        );
        let v = green2d_oracle(2000.0, 1.0, (0.0, 900.0), 500.0, 0.5);
        assert_eq!(v[0], 0.0);
        assert!(v[1] < 0.0);
    }

    #[test]
    fn homogeneous_reference_materials_pass() {
        let (top, bottom) = reference_layers::<f64>();
        for mat in [top, bottom] {
            let r = homogeneous_check(&mat, &HomogeneousGeometry::default()).unwrap();
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn mismatched_layers_fail() {
        let (top, bottom) = reference_layers::<f64>();
        let (r, t) =
            homogeneous_check_pair(&top, Some(&bottom), &HomogeneousGeometry::default()).unwrap();
        assert!(!r.pass, "{r}");
        assert!(!t.pass, "{t}");
    }
}
