//! Source wavelets, quadrature nodes and the kernel-wavelet convolution.
//!
//! Displacement is `u = ν * F` where `ν` is the velocity kernel and `F` the
//! causal primitive `F(t) = ∫₀ᵗ f`. Kernels are sampled on per-phase nodes
//! clustered at the geometric arrival (`τ = t0 ± s²`, `s` uniform), which
//! absorbs the `1/√|t − t0|` singularity into the quadrature weight.

use crate::error::{Error, Result};
use crate::greens::{Medium, PhaseArrival, Receiver, SourceMix, WavePhase};
use crate::scalar::Real;

/// Source time function.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceWavelet<T> {
    /// Fifth-derivative-of-Gaussian pulse centred at `1/f0`.
    Gauss5 { f0: T },
    /// Dirac impulse at `t = 0`; its primitive is the unit step.
    Delta,
    /// Uniformly sampled values starting at `t = 0`, linearly interpolated
    /// and zero outside the sampled span.
    Sampled(SampledWavelet<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavelet<T> {
    dt: T,
    values: Vec<T>,
    /// Running trapezoid integral at each sample.
    cumulative: Vec<T>,
}

impl<T: Real> SampledWavelet<T> {
    pub fn new(dt: T, values: Vec<T>) -> Result<Self> {
        if !(dt > T::zero()) || values.len() < 2 {
            return Err(Error::Domain(
                "sampled wavelet needs dt > 0 and at least two samples".into(),
            ));
        }
        let half = T::lit(0.5);
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        for w in values.windows(2) {
            acc = acc + (w[0] + w[1]) * half * dt;
            cumulative.push(acc);
        }
        Ok(Self {
            dt,
            values,
            cumulative,
        })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn locate(&self, t: T) -> Option<(usize, T)> {
        let pos = t / self.dt;
        let last = self.values.len() - 1;
        if !(pos >= T::zero()) || pos > T::from_usize(last)? {
            return None;
        }
        let i = pos.floor().to_usize()?.min(last - 1);
        Some((i, pos - T::from_usize(i)?))
    }

    fn eval(&self, t: T) -> T {
        match self.locate(t) {
            Some((i, u)) => self.values[i] + (self.values[i + 1] - self.values[i]) * u,
            None => T::zero(),
        }
    }

    fn primitive(&self, t: T) -> T {
        if !(t > T::zero()) {
            return T::zero();
        }
        match self.locate(t) {
            Some((i, u)) => {
                let (a, b) = (self.values[i], self.values[i + 1]);
                let mid = a + (b - a) * u * T::lit(0.5);
                self.cumulative[i] + mid * u * self.dt
            }
            None => *self.cumulative.last().expect("non-empty"),
        }
    }
}

impl<T: Real> SourceWavelet<T> {
    pub fn gauss5(f0: T) -> Result<Self> {
        if !(f0 > T::zero() && f0.is_finite()) {
            return Err(Error::Domain(format!(
                "dominant frequency f0 = {f0} must be > 0"
            )));
        }
        Ok(SourceWavelet::Gauss5 { f0 })
    }

    /// Wavelet value; zero for [`SourceWavelet::Delta`].
    ///
    /// With `a = π² f0²` and `Δ = t − 1/f0` the pulse is
    /// `4a (9Δ + 4aΔ³ − 4a²Δ⁵) exp(−aΔ²)`.
    pub fn eval(&self, t: T) -> T {
        match self {
            SourceWavelet::Gauss5 { f0 } => {
                let a = T::PI() * T::PI() * *f0 * *f0;
                let d = t - T::one() / *f0;
                let d2 = d * d;
                let four = T::lit(4.0);
                four * a
                    * d
                    * (T::lit(9.0) + four * a * d2 - four * a * a * d2 * d2)
                    * (-a * d2).exp()
            }
            SourceWavelet::Delta => T::zero(),
            SourceWavelet::Sampled(s) => s.eval(t),
        }
    }

    /// Antiderivative vanishing at `t → −∞` (Gauss5 only; other kinds
    /// coincide with [`SourceWavelet::primitive`]).
    ///
    /// For Gauss5 it is `(8a²Δ⁴ + 8aΔ² − 10) exp(−aΔ²)`, which also
    /// vanishes as `t → +∞`.
    pub fn antiderivative(&self, t: T) -> T {
        match self {
            SourceWavelet::Gauss5 { f0 } => {
                let a = T::PI() * T::PI() * *f0 * *f0;
                let d = t - T::one() / *f0;
                let ad2 = a * d * d;
                let eight = T::lit(8.0);
                (eight * ad2 * ad2 + eight * ad2 - T::lit(10.0)) * (-ad2).exp()
            }
            _ => self.primitive(t),
        }
    }

    /// Causal primitive `∫₀ᵗ f`, zero for `t ≤ 0`.
    pub fn primitive(&self, t: T) -> T {
        if !(t > T::zero()) {
            return T::zero();
        }
        match self {
            SourceWavelet::Gauss5 { .. } => self.antiderivative(t) - self.antiderivative(T::zero()),
            SourceWavelet::Delta => T::one(),
            SourceWavelet::Sampled(s) => s.primitive(t),
        }
    }
}

/// Uniform output grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t_start: T,
    pub t_end: T,
    pub base_dt: T,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, t_end: T, base_dt: T) -> Result<Self> {
        if !(t_end > t_start && base_dt > T::zero() && t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::Domain(format!(
                "time grid [{t_start}, {t_end}] with step {base_dt} is empty"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            base_dt,
        })
    }

    /// Default grid for dominant frequency `f0`: `[0, 1] s` with `dt = 1/(40 f0)`.
    pub fn for_frequency(f0: T) -> Result<Self> {
        Self::new(T::zero(), T::one(), T::one() / (T::lit(40.0) * f0))
    }

    pub fn len(&self) -> usize {
        let n = ((self.t_end - self.t_start) / self.base_dt)
            .ceil()
            .to_usize()
            .unwrap_or(0);
        n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.len())
            .map(|k| self.t_start + T::from_usize(k).expect("index") * self.base_dt)
            .collect()
    }
}

/// Quadrature nodes and weights for one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseNodes<T> {
    pub tau: Vec<T>,
    pub weight: Vec<T>,
    /// Kernel support is represented up to this time.
    pub covers_until: T,
}

/// Builds the nodes of a phase with arrival `t0` (and head onset `t_h`) up to `t_end`.
///
/// Each branch uses at least `min_samples` midpoint nodes in `s`, more if
/// needed to keep the node spacing in `t` below `base_dt/2`.
pub fn phase_nodes<T: Real>(
    t0: T,
    t_h: Option<T>,
    t_end: T,
    min_samples: usize,
    base_dt: T,
) -> PhaseNodes<T> {
    let mut tau = Vec::new();
    let mut weight = Vec::new();
    let two = T::lit(2.0);
    let count = |span: T| {
        let need = (T::lit(4.0) * span / base_dt)
            .ceil()
            .to_usize()
            .unwrap_or(0);
        need.max(min_samples).max(1)
    };
    if let Some(th) = t_h {
        if th < t0 && th < t_end {
            let span = t0 - th;
            let n = count(span);
            let ds = span.sqrt() / T::from_usize(n).expect("count");
            for i in (0..n).rev() {
                let s = (T::from_usize(i).expect("index") + T::lit(0.5)) * ds;
                let t = t0 - s * s;
                if t < t_end {
                    tau.push(t);
                    weight.push(two * s * ds);
                }
            }
        }
    }
    if t0 < t_end {
        let span = t_end - t0;
        let n = count(span);
        let ds = span.sqrt() / T::from_usize(n).expect("count");
        for i in 0..n {
            let s = (T::from_usize(i).expect("index") + T::lit(0.5)) * ds;
            tau.push(t0 + s * s);
            weight.push(two * s * ds);
        }
    }
    PhaseNodes {
        tau,
        weight,
        covers_until: t_end,
    }
}

/// `u(t_k) = Σ_i w_i ν(τ_i) F(t_k − τ_i)` on the output grid.
pub fn convolve<T: Real>(
    nodes: &PhaseNodes<T>,
    kernel: &[[T; 2]],
    wavelet: &SourceWavelet<T>,
    grid: &TimeGrid<T>,
) -> Result<Vec<[T; 2]>> {
    if kernel.len() != nodes.tau.len() {
        return Err(Error::GridCoverage(format!(
            "{} kernel samples for {} nodes",
            kernel.len(),
            nodes.tau.len()
        )));
    }
    let times = grid.times();
    let last = *times.last().expect("non-empty grid");
    if nodes.covers_until < last && !nodes.tau.is_empty() {
        return Err(Error::GridCoverage(format!(
            "kernel nodes end at {} before the window end {}",
            nodes.covers_until, last
        )));
    }
    let zero = [T::zero(); 2];
    let mut out = vec![zero; times.len()];
    for (k, &t) in times.iter().enumerate() {
        let mut acc = zero;
        for ((&tau, &w), nu) in nodes.tau.iter().zip(&nodes.weight).zip(kernel) {
            if tau >= t {
                // Nodes are sorted; F vanishes for non-positive lag.
                break;
            }
            let f = w * wavelet.primitive(t - tau);
            acc[0] = acc[0] + nu[0] * f;
            acc[1] = acc[1] + nu[1] * f;
        }
        out[k] = acc;
    }
    Ok(out)
}

/// Displacement at one receiver with per-phase channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T> {
    pub receiver: Receiver<T>,
    pub times: Vec<T>,
    /// One channel per phase in [`WavePhase::ALL`] order (zeros where a phase does not apply).
    pub channels: Vec<(WavePhase, Vec<[T; 2]>)>,
    pub arrivals: Vec<(WavePhase, PhaseArrival<T>)>,
    pub total: Vec<[T; 2]>,
}

impl<T: Real> Trace<T> {
    pub fn channel(&self, phase: WavePhase) -> &[[T; 2]] {
        &self
            .channels
            .iter()
            .find(|(p, _)| *p == phase)
            .expect("every phase has a channel")
            .1
    }
}

/// Sum of channels in the given order.
pub fn sum_channels<T: Real>(len: usize, channels: &[(WavePhase, Vec<[T; 2]>)]) -> Vec<[T; 2]> {
    let mut total = vec![[T::zero(); 2]; len];
    for (_, ch) in channels {
        for (acc, v) in total.iter_mut().zip(ch) {
            acc[0] = acc[0] + v[0];
            acc[1] = acc[1] + v[1];
        }
    }
    total
}

/// Computes the displacement trace of every phase at `rec`.
pub fn synthesize<T: Real>(
    medium: &Medium<T>,
    mix: &SourceMix<T>,
    rec: &Receiver<T>,
    wavelet: &SourceWavelet<T>,
    grid: &TimeGrid<T>,
    min_samples: usize,
) -> Result<Trace<T>> {
    medium.check_receiver(rec)?;
    let times = grid.times();
    let t_end = *times.last().expect("non-empty grid");
    let mut channels = Vec::with_capacity(WavePhase::ALL.len());
    let mut arrivals = Vec::with_capacity(WavePhase::ALL.len());
    for phase in WavePhase::ALL {
        let arrival = medium.arrival(phase, rec);
        arrivals.push((phase, arrival));
        if !arrival.applies {
            channels.push((phase, vec![[T::zero(); 2]; times.len()]));
            continue;
        }
        let nodes = phase_nodes(arrival.t0, arrival.t_h, t_end, min_samples, grid.base_dt);
        let kernel = medium
            .phase_kernel_on(phase, rec, mix, &nodes.tau)
            .map_err(|e| e.context(format!("receiver ({}, {})", rec.x, rec.y)))?;
        channels.push((phase, convolve(&nodes, &kernel, wavelet, grid)?));
    }
    let total = sum_channels(times.len(), &channels);
    Ok(Trace {
        receiver: *rec,
        times,
        channels,
        arrivals,
        total,
    })
}
