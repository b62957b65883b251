//! Velocity kernels of the fourteen phases and their sum at a receiver.
//!
//! A kernel is the solid particle velocity produced by a Dirac source in
//! time, i.e. the time derivative of the Heaviside response. Convolving it
//! with the primitive of the source wavelet yields the displacement.
//!
//! For a scattered phase with incident amplitude `F`, coefficient `c(q)` and
//! contour `q(t)`, write `a = c(q) dq/dt`. A P-mode outgoing wave (column `k`
//! of the receiver side's `P`) gives
//!
//! ```text
//! ν_x = −(F/π) P_1k Re[i q a],   ν_y = s (F/π) P_1k Re[κ_k a],
//! ```
//!
//! and an S wave gives `ν_x = s (F/π) Re[κ_S a]`, `ν_y = (F/π) Re[i q a]`,
//! where `s = −1` for reflected and `+1` for transmitted phases.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;

use crate::cagniard::{
    arrival_head, contour_implicit, head_exists, trace, ContourSample, PathSpec,
};
use crate::complexkernel::ComplexSlowness;
use crate::error::{Error, Result};
use crate::interface::{solve_coeffs, CoeffSet, IncidentKind, Mode};
use crate::material::{inv2, mat_mul, LayerDerived};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WavePhase {
    IncPf,
    IncPs,
    RPfPf,
    RPfPs,
    RPfS,
    RPsPf,
    RPsPs,
    RPsS,
    TPfPf,
    TPfPs,
    TPfS,
    TPsPf,
    TPsPs,
    TPsS,
}

impl WavePhase {
    pub const ALL: [WavePhase; 14] = [
        WavePhase::IncPf,
        WavePhase::IncPs,
        WavePhase::RPfPf,
        WavePhase::RPfPs,
        WavePhase::RPfS,
        WavePhase::RPsPf,
        WavePhase::RPsPs,
        WavePhase::RPsS,
        WavePhase::TPfPf,
        WavePhase::TPfPs,
        WavePhase::TPfS,
        WavePhase::TPsPf,
        WavePhase::TPsPs,
        WavePhase::TPsS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WavePhase::IncPf => "IncPf",
            WavePhase::IncPs => "IncPs",
            WavePhase::RPfPf => "R_PfPf",
            WavePhase::RPfPs => "R_PfPs",
            WavePhase::RPfS => "R_PfS",
            WavePhase::RPsPf => "R_PsPf",
            WavePhase::RPsPs => "R_PsPs",
            WavePhase::RPsS => "R_PsS",
            WavePhase::TPfPf => "T_PfPf",
            WavePhase::TPfPs => "T_PfPs",
            WavePhase::TPfS => "T_PfS",
            WavePhase::TPsPf => "T_PsPf",
            WavePhase::TPsPs => "T_PsPs",
            WavePhase::TPsS => "T_PsS",
        }
    }

    pub fn incident(self) -> IncidentKind {
        use WavePhase::*;
        match self {
            IncPf | RPfPf | RPfPs | RPfS | TPfPf | TPfPs | TPfS => IncidentKind::Pf,
            _ => IncidentKind::Ps,
        }
    }

    /// Outgoing mode of a scattered phase; `None` for the incident waves.
    pub fn outgoing(self) -> Option<Mode> {
        use WavePhase::*;
        match self {
            IncPf | IncPs => None,
            RPfPf | RPsPf | TPfPf | TPsPf => Some(Mode::Pf),
            RPfPs | RPsPs | TPfPs | TPsPs => Some(Mode::Ps),
            RPfS | RPsS | TPfS | TPsS => Some(Mode::S),
        }
    }

    /// Side of the interface the phase is observed on.
    pub fn side(self) -> Side {
        use WavePhase::*;
        match self {
            TPfPf | TPfPs | TPfS | TPsPf | TPsPs | TPsS => Side::Bottom,
            _ => Side::Top,
        }
    }

    pub fn is_incident(self) -> bool {
        self.outgoing().is_none()
    }

    pub fn applies_to(self, rec: &Receiver<impl Real>) -> bool {
        self.side() == rec.side()
    }
}

impl fmt::Display for WavePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Receiver<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Receiver<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || y == T::zero() {
            return Err(Error::Domain(format!(
                "receiver ({x}, {y}) must be off the interface"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn side(&self) -> Side {
        if self.y > T::zero() {
            Side::Top
        } else {
            Side::Bottom
        }
    }
}

/// Source amplitudes and their projection onto the fast and slow P modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMix<T> {
    pub f_u: T,
    pub f_w: T,
    pub f_p: T,
    pub f_pf: T,
    pub f_ps: T,
}

impl<T: Real> SourceMix<T> {
    pub fn new(f_u: T, f_w: T, f_p: T, top: &LayerDerived<T>) -> Result<Self> {
        let (f_pf, f_ps) = project_source(f_u, f_w, f_p, top)?;
        Ok(Self {
            f_u,
            f_w,
            f_p,
            f_pf,
            f_ps,
        })
    }

    pub fn amplitude(&self, kind: IncidentKind) -> T {
        match kind {
            IncidentKind::Pf => self.f_pf,
            IncidentKind::Ps => self.f_ps,
        }
    }
}

/// Solves `(A P) F± = (f_u − β m f_p, f_w − m f_p)` in the source layer.
pub fn project_source<T: Real>(f_u: T, f_w: T, f_p: T, top: &LayerDerived<T>) -> Result<(T, T)> {
    let ap = mat_mul(&top.a, &top.p);
    let inv = inv2(&ap);
    let norm = |m: &[[T; 2]; 2]| (m[0][0].abs() + m[0][1].abs()).max(m[1][0].abs() + m[1][1].abs());
    let cond = norm(&ap) * norm(&inv);
    if !(cond <= T::lit(1e12)) {
        return Err(Error::IllConditioned(cond.as_f64()));
    }
    let g0 = f_u - top.beta * top.m * f_p;
    let g1 = f_w - top.m * f_p;
    Ok((
        inv[0][0] * g0 + inv[0][1] * g1,
        inv[1][0] * g0 + inv[1][1] * g1,
    ))
}

/// Arrival information of one phase at one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseArrival<T> {
    pub applies: bool,
    pub t0: T,
    /// Head-wave onset, when the gate is open.
    pub t_h: Option<T>,
}

impl<T: Real> PhaseArrival<T> {
    /// First time at which the kernel can be nonzero.
    pub fn onset(&self) -> T {
        self.t_h.unwrap_or(self.t0)
    }
}

/// Two layers and a source at height `h` above the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium<T> {
    pub top: LayerDerived<T>,
    pub bottom: LayerDerived<T>,
    pub h: T,
    pub v_max: T,
}

fn pi<T: Real>() -> T {
    T::lit(PI)
}

impl<T: Real> Medium<T> {
    pub fn new(top: LayerDerived<T>, bottom: LayerDerived<T>, h: T) -> Result<Self> {
        if !(h > T::zero() && h.is_finite()) {
            return Err(Error::Domain(format!("source depth h = {h} must be > 0")));
        }
        let v_max = top.v_max().max(bottom.v_max());
        Ok(Self {
            top,
            bottom,
            h,
            v_max,
        })
    }

    pub fn layer(&self, side: Side) -> &LayerDerived<T> {
        match side {
            Side::Top => &self.top,
            Side::Bottom => &self.bottom,
        }
    }

    /// Two-leg path of a scattered phase; `None` for incident phases.
    pub fn path(&self, phase: WavePhase, rec: &Receiver<T>) -> Option<PathSpec<T>> {
        let out = phase.outgoing()?;
        let v_out = out.velocity(self.layer(phase.side()));
        let v_in = phase.incident().mode().velocity(&self.top);
        Some(PathSpec {
            leg_a_depth: rec.y.abs(),
            leg_a_velocity: v_out,
            leg_b_depth: self.h,
            leg_b_velocity: v_in,
            x: rec.x,
            v_max: self.v_max,
        })
    }

    /// Rejects a receiver at the source point, where the incident wave is singular.
    pub fn check_receiver(&self, rec: &Receiver<T>) -> Result<()> {
        if self.incident_distance(rec) <= T::lit(1e-9) * self.h {
            return Err(Error::Degenerate(format!(
                "receiver ({}, {}) coincides with the source",
                rec.x, rec.y
            )));
        }
        Ok(())
    }

    fn incident_distance(&self, rec: &Receiver<T>) -> T {
        rec.x.hypot(rec.y - self.h)
    }

    pub fn arrival(&self, phase: WavePhase, rec: &Receiver<T>) -> PhaseArrival<T> {
        let applies = phase.applies_to(rec);
        match self.path(phase, rec) {
            None => {
                let v = phase.incident().mode().velocity(&self.top);
                PhaseArrival {
                    applies,
                    t0: self.incident_distance(rec) / v,
                    t_h: None,
                }
            }
            Some(path) => PhaseArrival {
                applies,
                t0: path.saddle().t0,
                t_h: arrival_head(&path),
            },
        }
    }

    /// Incident Pf or Ps kernel at a top-layer receiver.
    pub fn incident_kernel(
        &self,
        kind: IncidentKind,
        rec: &Receiver<T>,
        mix: &SourceMix<T>,
        t: T,
    ) -> [T; 2] {
        let v = kind.mode().velocity(&self.top);
        let dy = rec.y - self.h;
        let r2 = rec.x * rec.x + dy * dy;
        let t0 = r2.sqrt() / v;
        if !(t > t0) {
            return [T::zero(); 2];
        }
        let amp = self.top.p[0][kind.column()] * mix.amplitude(kind) / (v * v);
        let common = -amp * t / (T::lit(2.0) * pi::<T>() * r2 * (t * t - t0 * t0).sqrt());
        [common * rec.x, common * dy]
    }

    /// Interface coefficient of `phase` at a contour point.
    fn coefficient(&self, phase: WavePhase, cs: &ComplexSlowness<T>) -> Result<Complex<T>> {
        let set: CoeffSet<T> = solve_coeffs(cs, phase.incident(), &self.top, &self.bottom)?;
        let mode = phase.outgoing().expect("scattered phase");
        Ok(match phase.side() {
            Side::Top => set.reflected(mode),
            Side::Bottom => set.transmitted(mode),
        })
    }

    /// Kernel value of a scattered phase at one contour sample.
    pub fn kernel_from_sample(
        &self,
        phase: WavePhase,
        mix: &SourceMix<T>,
        s: &ContourSample<T>,
    ) -> Result<[T; 2]> {
        let cs = s.slowness();
        let c = self.coefficient(phase, &cs)?;
        let a = c * s.dqdt;
        let iq = Complex::new(T::zero(), T::one()) * s.q;
        let side = phase.side();
        let layer = self.layer(side);
        let f = mix.amplitude(phase.incident()) / pi::<T>();
        let sy = match side {
            Side::Top => -T::one(),
            Side::Bottom => T::one(),
        };
        let mode = phase.outgoing().expect("scattered phase");
        let k = cs.kappa(mode.velocity(layer));
        Ok(match mode {
            Mode::Pf | Mode::Ps => {
                let col = if mode == Mode::Pf { 0 } else { 1 };
                let fp = f * layer.p[0][col];
                [-fp * (iq * a).re, sy * fp * (k * a).re]
            }
            Mode::S => [sy * f * (k * a).re, f * (iq * a).re],
        })
    }

    /// Kernel of a scattered phase at time `t`.
    pub fn scattered_kernel(
        &self,
        phase: WavePhase,
        rec: &Receiver<T>,
        mix: &SourceMix<T>,
        t: T,
    ) -> Result<[T; 2]> {
        let path = self
            .path(phase, rec)
            .ok_or_else(|| Error::Domain(format!("{} is not a scattered phase", phase.name())))?;
        if !phase.applies_to(rec) {
            return Ok([T::zero(); 2]);
        }
        let saddle = path.saddle();
        let onset = if head_exists(&path, &saddle) {
            path.head_time().min(saddle.t0)
        } else {
            saddle.t0
        };
        if !(t > onset) {
            return Ok([T::zero(); 2]);
        }
        let s = contour_implicit(&path, t)?;
        self.kernel_from_sample(phase, mix, &s)
    }

    /// Kernel of any phase at time `t`; zero when the phase does not apply.
    pub fn phase_kernel(
        &self,
        phase: WavePhase,
        rec: &Receiver<T>,
        mix: &SourceMix<T>,
        t: T,
    ) -> Result<[T; 2]> {
        if !phase.applies_to(rec) {
            return Ok([T::zero(); 2]);
        }
        if phase.is_incident() {
            Ok(self.incident_kernel(phase.incident(), rec, mix, t))
        } else {
            self.scattered_kernel(phase, rec, mix, t)
        }
    }

    /// Kernel of one phase on ascending times, all strictly after its onset.
    pub fn phase_kernel_on(
        &self,
        phase: WavePhase,
        rec: &Receiver<T>,
        mix: &SourceMix<T>,
        times: &[T],
    ) -> Result<Vec<[T; 2]>> {
        if !phase.applies_to(rec) {
            return Ok(vec![[T::zero(); 2]; times.len()]);
        }
        match self.path(phase, rec) {
            None => Ok(times
                .iter()
                .map(|&t| self.incident_kernel(phase.incident(), rec, mix, t))
                .collect()),
            Some(path) => trace(&path, times)?
                .iter()
                .map(|s| self.kernel_from_sample(phase, mix, s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.context(format!("{} at ({}, {})", phase.name(), rec.x, rec.y))),
        }
    }

    /// Sum of all applicable phase kernels, in [`WavePhase::ALL`] order.
    pub fn green_velocity(&self, rec: &Receiver<T>, mix: &SourceMix<T>, t: T) -> Result<[T; 2]> {
        let mut out = [T::zero(); 2];
        for phase in WavePhase::ALL {
            let k = self.phase_kernel(phase, rec, mix, t)?;
            out[0] = out[0] + k[0];
            out[1] = out[1] + k[1];
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{reference_layers, PoroelasticMaterial};
    use proptest::prelude::*;

    fn layers() -> (LayerDerived<f64>, LayerDerived<f64>) {
        let (t, b) = reference_layers::<f64>();
        (
            LayerDerived::from_material(&t).unwrap(),
            LayerDerived::from_material(&b).unwrap(),
        )
    }

    fn medium() -> Medium<f64> {
        let (t, b) = layers();
        Medium::new(t, b, 500.0).unwrap()
    }

    fn bulk(m: &Medium<f64>) -> SourceMix<f64> {
        SourceMix::new(-1e10, -1e10, 0.0, &m.top).unwrap()
    }

    #[test]
    fn projection_solves_the_source_system() {
        let m = medium();
        for (fu, fw, fp) in [(0.0, 0.0, 1.0), (-1e10, -1e10, 0.0)] {
            let mix = SourceMix::new(fu, fw, fp, &m.top).unwrap();
            let ap = mat_mul(&m.top.a, &m.top.p);
            let g = [fu - m.top.beta * m.top.m * fp, fw - m.top.m * fp];
            for i in 0..2 {
                let lhs = ap[i][0] * mix.f_pf + ap[i][1] * mix.f_ps;
                assert!((lhs - g[i]).abs() <= 1e-12 * g[0].abs().max(g[1].abs()));
            }
        }
        let zero = SourceMix::new(0.0, 0.0, 0.0, &m.top).unwrap();
        assert_eq!((zero.f_pf, zero.f_ps), (0.0, 0.0));
    }

    #[test]
    fn incident_zero_before_arrival_and_on_axis() {
        let m = medium();
        let mix = bulk(&m);
        let rec = Receiver::new(400.0, 533.0).unwrap();
        let t0 = m.arrival(WavePhase::IncPf, &rec).t0;
        assert_eq!(
            m.incident_kernel(IncidentKind::Pf, &rec, &mix, t0),
            [0.0, 0.0]
        );
        assert_eq!(
            m.incident_kernel(IncidentKind::Pf, &rec, &mix, 0.5 * t0),
            [0.0, 0.0]
        );
        let axis = Receiver::new(0.0, 800.0).unwrap();
        let k = m.incident_kernel(IncidentKind::Ps, &axis, &mix, 1.0);
        assert_eq!(k[0], 0.0);
        assert!(k[1] != 0.0);
    }

    #[test]
    fn phases_before_onset_are_exactly_zero() {
        let m = medium();
        let mix = bulk(&m);
        for rec in [
            Receiver::new(400.0, 533.0).unwrap(),
            Receiver::new(400.0, -533.0).unwrap(),
        ] {
            for phase in WavePhase::ALL {
                let a = m.arrival(phase, &rec);
                let k = m
                    .phase_kernel(phase, &rec, &mix, a.onset() * 0.999)
                    .unwrap();
                assert_eq!(k, [0.0, 0.0], "{phase}");
                let after = m.phase_kernel(phase, &rec, &mix, a.t0 * 1.2).unwrap();
                if a.applies {
                    assert!(
                        after[0] != 0.0 || after[1] != 0.0,
                        "{phase} vanishes after t0"
                    );
                } else {
                    assert_eq!(after, [0.0, 0.0]);
                }
            }
        }
    }

    #[test]
    fn identical_layers_reflect_nothing_and_transmit_the_incident_wave() {
        let (top, bot) = layers();
        for layer in [top, bot] {
            let m = Medium::new(layer, layer, 500.0).unwrap();
            let mix = SourceMix::new(-1e10, -3e9, 2.0, &m.top).unwrap();
            let up = Receiver::new(400.0, 533.0).unwrap();
            let down = Receiver::new(-250.0, -533.0).unwrap();
            for (inc, refl, trans) in [
                (
                    WavePhase::IncPf,
                    [WavePhase::RPfPf, WavePhase::RPfPs, WavePhase::RPfS],
                    WavePhase::TPfPf,
                ),
                (
                    WavePhase::IncPs,
                    [WavePhase::RPsPf, WavePhase::RPsPs, WavePhase::RPsS],
                    WavePhase::TPsPs,
                ),
            ] {
                let t0 = m.arrival(inc, &up).t0;
                for k in 1..30 {
                    let t = t0 * (1.0 + 0.05 * k as f64);
                    let ki = m.phase_kernel(inc, &up, &mix, t).unwrap();
                    let scale = ki[0].hypot(ki[1]);
                    for ph in refl {
                        let kr = m.phase_kernel(ph, &up, &mix, t).unwrap();
                        assert!(kr[0].hypot(kr[1]) < 1e-8 * scale, "{ph}");
                    }
                }
                let t0 = m.arrival(trans, &down).t0;
                for k in 1..30 {
                    let t = t0 * (1.0 + 0.05 * k as f64);
                    let kt = m.phase_kernel(trans, &down, &mix, t).unwrap();
                    let ki = m.incident_kernel(inc.incident(), &down, &mix, t);
                    let err = (kt[0] - ki[0]).hypot(kt[1] - ki[1]);
                    assert!(
                        err < 1e-6 * ki[0].hypot(ki[1]),
                        "{trans} at t = {t}: {kt:?} vs {ki:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn kernels_do_not_depend_on_mode_normalisation() {
        let (top, bot) = layers();
        let m = Medium::new(top, bot, 500.0).unwrap();
        let ms = Medium::new(
            top.with_scaled_modes(-3.0, 0.25),
            bot.with_scaled_modes(7.0, -0.5),
            500.0,
        )
        .unwrap();
        let (mix, mixs) = (bulk(&m), bulk(&ms));
        for rec in [
            Receiver::new(400.0, 533.0).unwrap(),
            Receiver::new(400.0, -533.0).unwrap(),
        ] {
            for phase in WavePhase::ALL {
                let a = m.arrival(phase, &rec);
                if !a.applies {
                    continue;
                }
                let t = a.t0 * 1.3;
                let k = m.phase_kernel(phase, &rec, &mix, t).unwrap();
                let ks = ms.phase_kernel(phase, &rec, &mixs, t).unwrap();
                let n = k[0].hypot(k[1]);
                assert!((k[0] - ks[0]).hypot(k[1] - ks[1]) < 1e-10 * n, "{phase}");
            }
        }
    }

    #[test]
    fn sum_is_the_sum_of_channels() {
        let m = medium();
        let mix = bulk(&m);
        let rec = Receiver::new(400.0, 533.0).unwrap();
        for k in 0..50 {
            let t = 0.1 + 0.01 * k as f64;
            let total = m.green_velocity(&rec, &mix, t).unwrap();
            let mut acc = [0.0; 2];
            for phase in WavePhase::ALL {
                let c = m.phase_kernel(phase, &rec, &mix, t).unwrap();
                acc = [acc[0] + c[0], acc[1] + c[1]];
            }
            assert_eq!(total, acc);
        }
    }

    #[test]
    fn pure_fast_mix_has_no_slow_family() {
        let m = medium();
        let mut mix = bulk(&m);
        mix.f_ps = 0.0;
        let rec = Receiver::new(400.0, 533.0).unwrap();
        for phase in [
            WavePhase::IncPs,
            WavePhase::RPsPf,
            WavePhase::RPsPs,
            WavePhase::RPsS,
        ] {
            let t = m.arrival(phase, &rec).t0 * 1.2;
            let k = m.phase_kernel(phase, &rec, &mix, t).unwrap();
            assert_eq!(k[0].abs() + k[1].abs(), 0.0, "{phase}");
        }
    }

    #[test]
    fn head_kernel_matches_pointwise_and_batched() {
        let m = medium();
        let mix = bulk(&m);
        let rec = Receiver::new(400.0, -533.0).unwrap();
        for phase in [WavePhase::TPsPf, WavePhase::TPsPs, WavePhase::TPsS] {
            let a = m.arrival(phase, &rec);
            let times: Vec<f64> = (1..40)
                .map(|k| a.onset() + (a.t0 * 1.5 - a.onset()) * k as f64 / 40.0)
                .collect();
            let batched = m.phase_kernel_on(phase, &rec, &mix, &times).unwrap();
            for (t, b) in times.iter().zip(&batched) {
                let p = m.phase_kernel(phase, &rec, &mix, *t).unwrap();
                let n = p[0].hypot(p[1]).max(1e-300);
                assert!(
                    (p[0] - b[0]).hypot(p[1] - b[1]) <= 1e-8 * n,
                    "{phase} t={t}"
                );
            }
        }
    }

    #[test]
    fn displacement_is_continuous_across_the_interface() {
        // Just above and below the interface every phase of one incidence
        // shares the contour, so continuity of u_x and u_y holds pointwise.
        let m = medium();
        let mix = bulk(&m);
        for x in [0.0, 400.0, -1500.0] {
            let up = Receiver::new(x, 1e-7).unwrap();
            let down = Receiver::new(x, -1e-7).unwrap();
            let t0 = m.arrival(WavePhase::IncPf, &up).t0;
            for k in 1..80 {
                let t = t0 * (1.0 + 0.037 * k as f64);
                let a = m.green_velocity(&up, &mix, t).unwrap();
                let b = m.green_velocity(&down, &mix, t).unwrap();
                let scale = a[0].hypot(a[1]);
                assert!(
                    (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-6 * scale,
                    "x = {x}, t = {t}: {a:?} vs {b:?}"
                );
            }
        }
    }

    fn materials() -> impl Strategy<Value = PoroelasticMaterial<f64>> {
        let (top, _) = reference_layers::<f64>();
        (0.7..1.4f64, 0.7..1.4f64, 0.7..1.4f64, 0.8..1.2f64).prop_map(move |(a, b, c, d)| {
            PoroelasticMaterial {
                k_b: top.k_b * a,
                mu: top.mu * b,
                k_f: top.k_f * c,
                rho_s: top.rho_s * d,
                ..top
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn homogeneous_continuation(mat in materials(), x in -800.0..800.0f64, y in -900.0..-50.0f64) {
            let layer = match LayerDerived::from_material(&mat) {
                Ok(l) => l,
                Err(_) => return Ok(()),
            };
            let m = Medium::new(layer, layer, 500.0).unwrap();
            let mix = SourceMix::new(-1e10, -1e10, 0.0, &layer).unwrap();
            let rec = Receiver::new(x, y).unwrap();
            let t0 = m.arrival(WavePhase::TPfPf, &rec).t0;
            for k in 1..10 {
                let t = t0 * (1.0 + 0.1 * k as f64);
                let kt = m.phase_kernel(WavePhase::TPfPf, &rec, &mix, t).unwrap();
                let ki = m.incident_kernel(IncidentKind::Pf, &rec, &mix, t);
                prop_assert!((kt[0] - ki[0]).hypot(kt[1] - ki[1]) < 1e-6 * ki[0].hypot(ki[1]));
            }
        }

        #[test]
        fn doubling_the_source_doubles_every_kernel(t in 0.2..1.0f64, x in -900.0..900.0f64, y in prop_oneof![50.0..900.0f64, -900.0..-50.0f64]) {
            let m = medium();
            let mix = bulk(&m);
            let mix2 = SourceMix::new(-2e10, -2e10, 0.0, &m.top).unwrap();
            let rec = Receiver::new(x, y).unwrap();
            for phase in WavePhase::ALL {
                let k = m.phase_kernel(phase, &rec, &mix, t).unwrap();
                let k2 = m.phase_kernel(phase, &rec, &mix2, t).unwrap();
                prop_assert_eq!([2.0 * k[0], 2.0 * k[1]], k2);
            }
        }
    }
}
