//! Reflection and transmission coefficients at the plane interface.
//!
//! For a horizontal slowness `q` the six unknown amplitudes (reflected
//! Pf, Ps, S in the top layer, transmitted Pf, Ps, S in the bottom layer)
//! solve a 6×6 complex system. Rows 0–2 are the kinematic conditions
//! (continuity of `u_x`, `u_y`, `w_y`), rows 3–5 the dynamic ones
//! (pressure, shear traction, normal traction). Each row is the top-side
//! expression minus the bottom-side one.
//!
//! The right-hand side carries the normalisation `1/(2κ V²)` of the incident
//! wave, so in a homogeneous medium the transmitted coefficient of the
//! incident mode equals that prefactor and every other coefficient vanishes.

use num_complex::Complex;

use crate::complexkernel::ComplexSlowness;
use crate::error::{Error, Result};
use crate::linalg::{mat_norm_inf, mat_vec, norm_inf, Lu};
use crate::material::LayerDerived;
use crate::scalar::Real;

pub type Mat6<T> = [[Complex<T>; 6]; 6];
pub type Vec6<T> = [Complex<T>; 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IncidentKind {
    Pf,
    Ps,
}

/// Outgoing body-wave mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Pf,
    Ps,
    S,
}

impl Mode {
    pub fn velocity<T: Real>(self, layer: &LayerDerived<T>) -> T {
        match self {
            Mode::Pf => layer.v_pf,
            Mode::Ps => layer.v_ps,
            Mode::S => layer.v_s,
        }
    }
}

impl IncidentKind {
    pub fn mode(self) -> Mode {
        match self {
            IncidentKind::Pf => Mode::Pf,
            IncidentKind::Ps => Mode::Ps,
        }
    }

    /// Column of `P` holding this mode's eigenvector.
    pub fn column(self) -> usize {
        match self {
            IncidentKind::Pf => 0,
            IncidentKind::Ps => 1,
        }
    }
}

/// The six coefficients for one incidence at one slowness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSet<T> {
    pub r_pf: Complex<T>,
    pub r_ps: Complex<T>,
    pub r_s: Complex<T>,
    pub t_pf: Complex<T>,
    pub t_ps: Complex<T>,
    pub t_s: Complex<T>,
    /// Set when the interface matrix is close to singular (pivot ratio above 1e12).
    pub near_singular: bool,
}

impl<T: Real> CoeffSet<T> {
    pub fn from_array(c: Vec6<T>, near_singular: bool) -> Self {
        Self {
            r_pf: c[0],
            r_ps: c[1],
            r_s: c[2],
            t_pf: c[3],
            t_ps: c[4],
            t_s: c[5],
            near_singular,
        }
    }

    pub fn to_array(&self) -> Vec6<T> {
        [
            self.r_pf, self.r_ps, self.r_s, self.t_pf, self.t_ps, self.t_s,
        ]
    }

    pub fn reflected(&self, mode: Mode) -> Complex<T> {
        match mode {
            Mode::Pf => self.r_pf,
            Mode::Ps => self.r_ps,
            Mode::S => self.r_s,
        }
    }

    pub fn transmitted(&self, mode: Mode) -> Complex<T> {
        match mode {
            Mode::Pf => self.t_pf,
            Mode::Ps => self.t_ps,
            Mode::S => self.t_s,
        }
    }
}

#[inline]
fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `(λ + mβ²) P_1j + mβ P_2j`, the volumetric part of the normal stress of mode `j`.
fn normal_stress_coeff<T: Real>(l: &LayerDerived<T>, col: usize) -> T {
    (l.lambda + l.m * l.beta * l.beta) * l.p[0][col] + l.m * l.beta * l.p[1][col]
}

/// `m(β P_1j + P_2j)`, the pressure carried by mode `j`.
fn pressure_coeff<T: Real>(l: &LayerDerived<T>, col: usize) -> T {
    l.m * (l.beta * l.p[0][col] + l.p[1][col])
}

/// `1/V² + q²` evaluated without going through the square root.
fn kappa_sq<T: Real>(v: T, q: Complex<T>) -> Complex<T> {
    re(T::one() / (v * v)) + q * q
}

/// The 6×6 interface matrix, columns ordered (R_Pf, R_Ps, R_S, T_Pf, T_Ps, T_S).
pub fn assemble_a<T: Real>(
    s: &ComplexSlowness<T>,
    top: &LayerDerived<T>,
    bot: &LayerDerived<T>,
) -> Mat6<T> {
    let q = s.q;
    let iq = Complex::new(T::zero(), T::one()) * q;
    let two = T::lit(2.0);
    let (pt, pb) = (&top.p, &bot.p);

    let kpf_t = s.kappa(top.v_pf);
    let kps_t = s.kappa(top.v_ps);
    let ks_t = s.kappa(top.v_s);
    let kpf_b = s.kappa(bot.v_pf);
    let kps_b = s.kappa(bot.v_ps);
    let ks_b = s.kappa(bot.v_s);

    let inv2 = |v: T| T::one() / (v * v);

    [
        [
            -iq * pt[0][0],
            -iq * pt[0][1],
            -ks_t,
            iq * pb[0][0],
            iq * pb[0][1],
            -ks_b,
        ],
        [
            -kpf_t * pt[0][0],
            -kps_t * pt[0][1],
            iq,
            -kpf_b * pb[0][0],
            -kps_b * pb[0][1],
            -iq,
        ],
        [
            -kpf_t * pt[1][0],
            -kps_t * pt[1][1],
            -iq * (top.rho_f / top.rho_w),
            -kpf_b * pb[1][0],
            -kps_b * pb[1][1],
            iq * (bot.rho_f / bot.rho_w),
        ],
        [
            re(pressure_coeff(top, 0) * inv2(top.v_pf)),
            re(pressure_coeff(top, 1) * inv2(top.v_ps)),
            re(T::zero()),
            re(-pressure_coeff(bot, 0) * inv2(bot.v_pf)),
            re(-pressure_coeff(bot, 1) * inv2(bot.v_ps)),
            re(T::zero()),
        ],
        [
            iq * kpf_t * (two * top.mu * pt[0][0]),
            iq * kps_t * (two * top.mu * pt[0][1]),
            (kappa_sq(top.v_s, q) + q * q) * top.mu,
            iq * kpf_b * (two * bot.mu * pb[0][0]),
            iq * kps_b * (two * bot.mu * pb[0][1]),
            -(kappa_sq(bot.v_s, q) + q * q) * bot.mu,
        ],
        [
            re(normal_stress_coeff(top, 0) * inv2(top.v_pf))
                + kappa_sq(top.v_pf, q) * (two * top.mu * pt[0][0]),
            re(normal_stress_coeff(top, 1) * inv2(top.v_ps))
                + kappa_sq(top.v_ps, q) * (two * top.mu * pt[0][1]),
            -iq * ks_t * (two * top.mu),
            re(-normal_stress_coeff(bot, 0) * inv2(bot.v_pf))
                - kappa_sq(bot.v_pf, q) * (two * bot.mu * pb[0][0]),
            re(-normal_stress_coeff(bot, 1) * inv2(bot.v_ps))
                - kappa_sq(bot.v_ps, q) * (two * bot.mu * pb[0][1]),
            -iq * ks_b * (two * bot.mu),
        ],
    ]
}

/// Right-hand side for a Pf or Ps wave incident from the top layer.
pub fn assemble_rhs<T: Real>(
    s: &ComplexSlowness<T>,
    inc: IncidentKind,
    top: &LayerDerived<T>,
) -> Result<Vec6<T>> {
    let q = s.q;
    let iq = Complex::new(T::zero(), T::one()) * q;
    let two = T::lit(2.0);
    let j = inc.column();
    let v = inc.mode().velocity(top);
    let k = s.kappa(v);
    if k.norm() < T::lit(1e-14) / v {
        return Err(Error::SingularPrefactor {
            re: q.re.as_f64(),
            im: q.im.as_f64(),
        });
    }
    let pref = Complex::new(T::one(), T::zero()) / (k * (two * v * v));
    let p = &top.p;
    let inv_v2 = T::one() / (v * v);
    let rhs = [
        iq * p[0][j],
        -k * p[0][j],
        -k * p[1][j],
        re(-pressure_coeff(top, j) * inv_v2),
        iq * k * (two * top.mu * p[0][j]),
        re(-normal_stress_coeff(top, j) * inv_v2) - kappa_sq(v, q) * (two * top.mu * p[0][j]),
    ];
    Ok(rhs.map(|z| z * pref))
}

/// Solves the interface system for one incidence.
pub fn solve_coeffs<T: Real>(
    s: &ComplexSlowness<T>,
    inc: IncidentKind,
    top: &LayerDerived<T>,
    bot: &LayerDerived<T>,
) -> Result<CoeffSet<T>> {
    let a = assemble_a(s, top, bot);
    let rhs = assemble_rhs(s, inc, top)?;
    let lu = Lu::factor(&a).ok_or(Error::SingularMatrix {
        re: s.q.re.as_f64(),
        im: s.q.im.as_f64(),
    })?;
    let c = lu.solve(&rhs);
    Ok(CoeffSet::from_array(c, lu.pivot_ratio > T::lit(1e12)))
}

/// Both incidences with one factorisation.
pub fn solve_both<T: Real>(
    s: &ComplexSlowness<T>,
    top: &LayerDerived<T>,
    bot: &LayerDerived<T>,
) -> Result<(CoeffSet<T>, CoeffSet<T>)> {
    let a = assemble_a(s, top, bot);
    let lu = Lu::factor(&a).ok_or(Error::SingularMatrix {
        re: s.q.re.as_f64(),
        im: s.q.im.as_f64(),
    })?;
    let flag = lu.pivot_ratio > T::lit(1e12);
    let pf = lu.solve(&assemble_rhs(s, IncidentKind::Pf, top)?);
    let ps = lu.solve(&assemble_rhs(s, IncidentKind::Ps, top)?);
    Ok((
        CoeffSet::from_array(pf, flag),
        CoeffSet::from_array(ps, flag),
    ))
}

/// `‖A c − rhs‖ / (‖A‖‖c‖ + ‖rhs‖)` in the infinity norm.
pub fn relative_residual<T: Real>(a: &Mat6<T>, c: &Vec6<T>, rhs: &Vec6<T>) -> T {
    let ac = mat_vec(a, c);
    let r: Vec6<T> = std::array::from_fn(|i| ac[i] - rhs[i]);
    norm_inf(&r) / (mat_norm_inf(a) * norm_inf(c) + norm_inf(rhs))
}
