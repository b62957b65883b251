//! Arrival times and Cagniard contours.
//!
//! Every scattered phase travels along two legs: one from the source down
//! (or up) to the interface (`leg_b`, depth `h`) and one from the interface
//! to the receiver (`leg_a`, depth `|y|`). Its contour is the set of
//! slownesses `q(t)` solving
//!
//! ```text
//! F(q, t) = d_a κ_a(q) + d_b κ_b(q) + i q x − t = 0.
//! ```
//!
//! For `t > t0` the root is unique in `Re q > 0` (body branch). For
//! `t_h < t ≤ t0` it lies on the imaginary axis between the saddle and the
//! branch point of the fastest velocity of the medium (head branch).

use num_complex::Complex;

use crate::complexkernel::ComplexSlowness;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Two-leg ray description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec<T> {
    /// Receiver-side depth below/above the interface (`|y|`).
    pub leg_a_depth: T,
    pub leg_a_velocity: T,
    /// Source-side depth (`h`).
    pub leg_b_depth: T,
    pub leg_b_velocity: T,
    pub x: T,
    /// Largest velocity anywhere in the medium.
    pub v_max: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Head,
    Body,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSample<T> {
    pub t: T,
    pub q: Complex<T>,
    pub dqdt: Complex<T>,
    pub regime: Regime,
}

impl<T: Real> ContourSample<T> {
    pub fn slowness(&self) -> ComplexSlowness<T> {
        ComplexSlowness::on_contour(self.q)
    }
}

/// The point where the contour leaves the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saddle<T> {
    /// Geometric arrival time.
    pub t0: T,
    /// Ray parameter (horizontal slowness magnitude of the ray).
    pub p: T,
    /// Saddle `q0 = iσ0`, `σ0 = −sign(x) p`.
    pub sigma0: T,
    /// `F_qq(q0)`, real and positive.
    pub f_qq: T,
    /// Contribution of each leg to `F_qq`.
    pub f_qq_legs: [T; 2],
}

impl<T: Real> Saddle<T> {
    pub fn q0(&self) -> Complex<T> {
        Complex::new(T::zero(), self.sigma0)
    }
}

impl<T: Real> PathSpec<T> {
    pub fn new(leg_a: (T, T), leg_b: (T, T), x: T, v_max: T) -> Result<Self> {
        let p = Self {
            leg_a_depth: leg_a.0,
            leg_a_velocity: leg_a.1,
            leg_b_depth: leg_b.0,
            leg_b_velocity: leg_b.1,
            x,
            v_max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.leg_a_depth >= T::zero()
            && self.leg_b_depth >= T::zero()
            && self.leg_a_depth + self.leg_b_depth > T::zero()
            && self.leg_a_velocity > T::zero()
            && self.leg_b_velocity > T::zero()
            && self.v_max >= self.leg_a_velocity
            && self.v_max >= self.leg_b_velocity
            && self.x.is_finite()
            && self.leg_a_depth.is_finite()
            && self.leg_b_depth.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid path {}", self.describe())))
        }
    }

    pub fn is_same_leg(&self) -> bool {
        self.leg_a_velocity == self.leg_b_velocity
    }

    pub fn describe(&self) -> String {
        format!(
            "legs ({}, {} m/s) + ({}, {} m/s), x = {}, V_max = {}",
            self.leg_a_depth,
            self.leg_a_velocity,
            self.leg_b_depth,
            self.leg_b_velocity,
            self.x,
            self.v_max
        )
    }

    fn legs(&self) -> [(T, T); 2] {
        [
            (self.leg_a_depth, self.leg_a_velocity),
            (self.leg_b_depth, self.leg_b_velocity),
        ]
    }

    /// `d_a κ_a(q) + d_b κ_b(q) + i q x`, so that `F(q, t) = phase(q) − t`.
    pub fn phase(&self, q: &ComplexSlowness<T>) -> Complex<T> {
        let mut f = Complex::new(T::zero(), T::one()) * q.q * self.x;
        for (d, v) in self.legs() {
            if d > T::zero() {
                f = f + q.kappa(v) * d;
            }
        }
        f
    }

    /// `∂F/∂q = d_a q/κ_a + d_b q/κ_b + i x`.
    pub fn phase_q(&self, q: &ComplexSlowness<T>) -> Complex<T> {
        let mut f = Complex::new(T::zero(), self.x);
        for (d, v) in self.legs() {
            if d > T::zero() {
                f = f + q.q / q.kappa(v) * d;
            }
        }
        f
    }

    pub fn residual(&self, q: &ComplexSlowness<T>, t: T) -> Complex<T> {
        self.phase(q) - Complex::new(t, T::zero())
    }

    /// Phase restricted to the imaginary axis, `f(σ) = F(iσ) + t`, and its derivative.
    fn phase_imag(&self, sigma: T) -> (T, T) {
        let mut f = -sigma * self.x;
        let mut df = -self.x;
        for (d, v) in self.legs() {
            if d > T::zero() {
                let k = (T::one() / (v * v) - sigma * sigma).max(T::zero()).sqrt();
                f = f + d * k;
                df = df - d * sigma / k;
            }
        }
        (f, df)
    }

    /// Travel time through crossing abscissa `xi` (measured from the receiver).
    fn travel(&self, xi: T) -> T {
        let ax = self.x.abs();
        (xi * xi + self.leg_a_depth * self.leg_a_depth).sqrt() / self.leg_a_velocity
            + ((ax - xi) * (ax - xi) + self.leg_b_depth * self.leg_b_depth).sqrt()
                / self.leg_b_velocity
    }

    /// Saddle point and geometric arrival time.
    pub fn saddle(&self) -> Saddle<T> {
        let ax = self.x.abs();
        let (t0, p) = if self.is_same_leg() {
            let v = self.leg_a_velocity;
            let d = self.leg_a_depth + self.leg_b_depth;
            let r = ax.hypot(d);
            (r / v, ax / (r * v))
        } else {
            let xi = self.fermat_crossing();
            let (da, va) = (self.leg_a_depth, self.leg_a_velocity);
            let (db, vb) = (self.leg_b_depth, self.leg_b_velocity);
            let la = xi.hypot(da);
            let lb = (ax - xi).hypot(db);
            // Use the leg with the better conditioned ratio.
            let p = if la * va >= lb * vb && la > T::zero() {
                xi / (la * va)
            } else if lb > T::zero() {
                (ax - xi) / (lb * vb)
            } else {
                T::zero()
            };
            (self.travel(xi), p)
        };
        let sigma0 = if self.x < T::zero() { p } else { -p };
        let mut f_qq_legs = [T::zero(); 2];
        for (c, (d, v)) in f_qq_legs.iter_mut().zip(self.legs()) {
            if d > T::zero() {
                let k = (T::one() / (v * v) - p * p).max(T::zero()).sqrt();
                *c = d / (v * v * k * k * k);
            }
        }
        Saddle {
            t0,
            p,
            sigma0,
            f_qq: f_qq_legs[0] + f_qq_legs[1],
            f_qq_legs,
        }
    }

    /// Crossing abscissa minimising the two-leg travel time (derivative-sign bisection).
    fn fermat_crossing(&self) -> T {
        let ax = self.x.abs();
        if ax == T::zero() {
            return T::zero();
        }
        let (da, va) = (self.leg_a_depth, self.leg_a_velocity);
        let (db, vb) = (self.leg_b_depth, self.leg_b_velocity);
        let deriv = |xi: T| {
            let ta = if da > T::zero() || xi != T::zero() {
                xi / (va * xi.hypot(da))
            } else {
                -T::one() / va
            };
            let tb = if db > T::zero() || xi != ax {
                (ax - xi) / (vb * (ax - xi).hypot(db))
            } else {
                -T::one() / vb
            };
            ta - tb
        };
        let (mut lo, mut hi) = (T::zero(), ax);
        let tol = T::epsilon() * T::lit(4.0) * ax;
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if hi - lo <= tol {
                break;
            }
            if deriv(mid) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }

    /// `d_a √(1/V_a² − 1/V_max²) + d_b √(1/V_b² − 1/V_max²) + |x|/V_max`.
    pub fn head_time(&self) -> T {
        let w = T::one() / (self.v_max * self.v_max);
        let mut t = self.x.abs() / self.v_max;
        for (d, v) in self.legs() {
            t = t + d * (T::one() / (v * v) - w).max(T::zero()).sqrt();
        }
        t
    }
}

/// Geometric arrival time of the phase.
pub fn arrival_body<T: Real>(path: &PathSpec<T>) -> T {
    path.saddle().t0
}

/// Whether the phase has a head-wave branch.
///
/// Same-leg phases use `|x|/r > V/V_max`; mixed phases `|Im q0| > 1/V_max`.
/// Both express that the ray is steeper than the critical angle of the
/// fastest velocity.
pub fn head_exists<T: Real>(path: &PathSpec<T>, saddle: &Saddle<T>) -> bool {
    if path.is_same_leg() {
        let r = path.x.abs().hypot(path.leg_a_depth + path.leg_b_depth);
        path.x.abs() / r > path.leg_a_velocity / path.v_max
    } else {
        saddle.p > T::one() / path.v_max
    }
}

/// Head-wave onset, or `None` when the gate is closed.
pub fn arrival_head<T: Real>(path: &PathSpec<T>) -> Option<T> {
    let s = path.saddle();
    head_exists(path, &s).then(|| path.head_time().min(s.t0))
}

/// `dq/dt = 1/F_q(q)`.
///
/// `F_q` has units of length; it counts as zero below `1e-13` times the
/// path's extent `|x| + d_a + d_b`.
pub fn dqdt<T: Real>(path: &PathSpec<T>, q: &ComplexSlowness<T>) -> Result<Complex<T>> {
    let fq = path.phase_q(q);
    let extent = path.x.abs() + path.leg_a_depth + path.leg_b_depth;
    if fq.norm() < T::lit(1e-13) * extent.max(T::one()) {
        return Err(Error::Saddle(fq.norm().as_f64()));
    }
    Ok(Complex::new(T::one(), T::zero()) / fq)
}

/// Closed-form contour for two legs with the same velocity `v` and total depth `depth`.
pub fn contour_same_leg<T: Real>(t: T, x: T, depth: T, v: T) -> ContourSample<T> {
    let i = Complex::new(T::zero(), T::one());
    let r2 = x * x + depth * depth;
    let r = r2.sqrt();
    let t0 = r / v;
    let w = T::one() / (v * v);
    if t > t0 {
        let rad = (t * t / r2 - w).sqrt();
        let q = Complex::new(depth / r * rad, -x * t / r2);
        let dq = Complex::new(depth / r * (t / r2) / rad, -x / r2);
        ContourSample {
            t,
            q,
            dqdt: dq,
            regime: Regime::Body,
        }
    } else {
        let rad = (w - t * t / r2).max(T::zero()).sqrt();
        let slope = depth / r * (t / r2) / rad;
        let (sigma, dsigma) = if x >= T::zero() {
            (depth / r * rad - x * t / r2, -slope - x / r2)
        } else {
            (-(depth / r * rad) - x * t / r2, slope - x / r2)
        };
        ContourSample {
            t,
            q: i * sigma,
            dqdt: i * dsigma,
            regime: Regime::Head,
        }
    }
}

fn newton_tol<T: Real>(t: T) -> T {
    T::lit(T::ROOT_TOL) * t.max(T::one())
}

/// Head-branch root `q = iσ` between the saddle and `∓i/V_max`.
fn head_root<T: Real>(path: &PathSpec<T>, saddle: &Saddle<T>, t: T) -> Result<ContourSample<T>> {
    let sigma_h = if path.x < T::zero() {
        T::one() / path.v_max
    } else {
        -T::one() / path.v_max
    };
    let (mut lo, mut hi) = if saddle.sigma0 < sigma_h {
        (saddle.sigma0, sigma_h)
    } else {
        (sigma_h, saddle.sigma0)
    };
    let g = |s: T| path.phase_imag(s).0 - t;
    let (glo, ghi) = (g(lo), g(hi));
    let tol = newton_tol(t);
    if glo.abs() > tol && ghi.abs() > tol && (glo > T::zero()) == (ghi > T::zero()) {
        return Err(Error::NoConvergence {
            t: t.as_f64(),
            path: path.describe(),
        });
    }
    let rising = ghi > glo;
    let mut sigma = (lo + hi) * T::lit(0.5);
    let mut converged = false;
    for _ in 0..200 {
        let (f, df) = path.phase_imag(sigma);
        let r = f - t;
        if r.abs() <= tol * T::lit(0.01) || hi - lo <= T::epsilon() * hi.abs().max(lo.abs()) {
            converged = r.abs() <= tol;
            break;
        }
        if (r > T::zero()) == rising {
            hi = sigma;
        } else {
            lo = sigma;
        }
        let newton = sigma - r / df;
        sigma = if df != T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
    }
    if !converged {
        return Err(Error::NoConvergence {
            t: t.as_f64(),
            path: path.describe(),
        });
    }
    let q = ComplexSlowness::on_contour(Complex::new(T::zero(), sigma));
    let dq = dqdt(path, &q)?;
    // Im(x dq/dt) ≤ 0 picks the root on the saddle's side of the axis.
    if path.x * dq.im > T::zero() {
        return Err(Error::RootSelection {
            t: t.as_f64(),
            path: path.describe(),
        });
    }
    Ok(ContourSample {
        t,
        q: q.q,
        dqdt: dq,
        regime: Regime::Head,
    })
}

/// Continuation tracer for the body branch, parametrised by `s = √(t − t0)`.
#[derive(Debug, Clone)]
pub struct BodyTracer<T> {
    path: PathSpec<T>,
    saddle: Saddle<T>,
    s: T,
    q: Complex<T>,
}

impl<T: Real> BodyTracer<T> {
    pub fn new(path: PathSpec<T>) -> Self {
        let saddle = path.saddle();
        Self {
            path,
            saddle,
            s: T::zero(),
            q: saddle.q0(),
        }
    }

    pub fn saddle(&self) -> &Saddle<T> {
        &self.saddle
    }

    fn newton(&self, mut q: Complex<T>, t: T) -> Option<Complex<T>> {
        let tol = newton_tol(t);
        let scale = T::one() / self.path.leg_a_velocity.min(self.path.leg_b_velocity);
        for _ in 0..100 {
            let cs = ComplexSlowness::on_contour(q);
            let r = self.path.residual(&cs, t);
            if r.norm() <= tol {
                return Some(q);
            }
            let fq = self.path.phase_q(&cs);
            let mut step = r / fq;
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            let cap = (q.norm() + scale) * T::lit(0.5);
            if step.norm() > cap {
                step = step * (cap / step.norm());
            }
            q = q - step;
            if q.re < T::zero() {
                q = -q.conj();
            }
        }
        None
    }

    /// Leaves the saddle along the positive real direction.
    ///
    /// The quadratic expansion `q0 + s √(2/F_qq)` is tried first. When the
    /// saddle sits close to a branch point of one leg that leg dominates
    /// `F_qq` only in a tiny neighbourhood, so the other leg's curvature and
    /// a sweep of scales are tried as well. The body root is unique in
    /// `Re q > 0`, so any converged candidate is the contour point.
    fn first_step(&self, s: T, t: T) -> Option<Complex<T>> {
        let q0 = self.saddle.q0();
        let mut scales: Vec<T> = Vec::with_capacity(12);
        for c in [
            self.saddle.f_qq,
            self.saddle.f_qq_legs[0],
            self.saddle.f_qq_legs[1],
        ] {
            if c > T::zero() && c.is_finite() {
                scales.push((T::lit(2.0) / c).sqrt());
            }
        }
        let slowness = T::one() / self.path.leg_a_velocity.min(self.path.leg_b_velocity);
        let mut k = T::lit(1e-8) * slowness / s.max(T::epsilon());
        for _ in 0..10 {
            scales.push(k);
            k = k * T::lit(10.0);
        }
        scales
            .into_iter()
            .filter_map(|c| self.newton(q0 + Complex::new(c * s, T::zero()), t))
            .find(|q| q.re > T::zero())
    }

    /// Moves the tracer to time `t` (`t > t0`, not earlier than the last sample).
    pub fn advance(&mut self, t: T) -> Result<ContourSample<T>> {
        let t0 = self.saddle.t0;
        let path = self.path;
        let fail = || Error::NoConvergence {
            t: t.as_f64(),
            path: path.describe(),
        };
        if !(t > t0) {
            return Err(Error::Domain(format!(
                "body branch requires t > t0 = {t0}, got {t}"
            )));
        }
        let target = (t - t0).sqrt();
        if target < self.s {
            *self = Self::new(self.path);
        }
        let mut h = target - self.s;
        let mut halvings = 0;
        while self.s < target {
            let s_new = if self.s + h >= target {
                target
            } else {
                self.s + h
            };
            let tn = t0 + s_new * s_new;
            let next = if self.s == T::zero() {
                self.first_step(s_new, tn)
            } else {
                let fq = self.path.phase_q(&ComplexSlowness::on_contour(self.q));
                let pred =
                    self.q + Complex::new(T::lit(2.0) * self.s * (s_new - self.s), T::zero()) / fq;
                self.newton(pred, tn).filter(|q| q.re > T::zero())
            };
            match next {
                Some(q) => {
                    self.s = s_new;
                    self.q = q;
                    h = h * T::lit(2.0);
                }
                None => {
                    halvings += 1;
                    if halvings > 60 {
                        return Err(fail());
                    }
                    h = h * T::lit(0.5);
                }
            }
        }
        let cs = ComplexSlowness::on_contour(self.q);
        Ok(ContourSample {
            t,
            q: self.q,
            dqdt: dqdt(&self.path, &cs)?,
            regime: Regime::Body,
        })
    }
}

/// Contour point at time `t` for an arbitrary two-leg path.
pub fn contour_implicit<T: Real>(path: &PathSpec<T>, t: T) -> Result<ContourSample<T>> {
    let saddle = path.saddle();
    if t > saddle.t0 {
        BodyTracer::new(*path).advance(t)
    } else if head_exists(path, &saddle) && t > path.head_time() {
        head_root(path, &saddle, t)
    } else {
        Err(Error::Domain(format!(
            "t = {t} precedes the contour (t0 = {}, head wave {})",
            saddle.t0,
            if head_exists(path, &saddle) {
                "open"
            } else {
                "closed"
            }
        )))
    }
}

/// Contour samples at ascending times, reusing the body continuation.
///
/// Times at or before the onset must not be passed.
pub fn trace<T: Real>(path: &PathSpec<T>, times: &[T]) -> Result<Vec<ContourSample<T>>> {
    let mut tracer = BodyTracer::new(*path);
    let saddle = *tracer.saddle();
    let head = head_exists(path, &saddle);
    let same = path.is_same_leg();
    times
        .iter()
        .map(|&t| {
            if same {
                let depth = path.leg_a_depth + path.leg_b_depth;
                Ok(contour_same_leg(t, path.x, depth, path.leg_a_velocity))
            } else if t > saddle.t0 {
                tracer.advance(t)
            } else if head {
                head_root(path, &saddle, t)
            } else {
                Err(Error::Domain(format!(
                    "t = {t} precedes the arrival t0 = {}",
                    saddle.t0
                )))
            }
        })
        .collect()
}
