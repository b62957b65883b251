//! Per-layer Biot constants.
//!
//! A layer is described by eight measured quantities. From them we derive
//! the overall and apparent fluid densities, the Biot modulus and
//! coefficient, the Lamé constant, the 2×2 mass and stiffness matrices of
//! the potential formulation, and the eigendecomposition of `A⁻¹B` which
//! yields the fast and slow compressional velocities together with the
//! change-of-basis matrix `P` mapping mode potentials to (solid, relative
//! fluid) potentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Mat2<T> = [[T; 2]; 2];

/// The eight measured Biot inputs of one layer (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoroelasticMaterial<T> {
    /// Solid grain density (kg/m³).
    pub rho_s: T,
    /// Fluid density (kg/m³).
    pub rho_f: T,
    /// Porosity, in (0, 1).
    pub phi: T,
    /// Tortuosity, ≥ 1.
    pub a: T,
    /// Solid bulk modulus (Pa).
    pub k_s: T,
    /// Fluid bulk modulus (Pa).
    pub k_f: T,
    /// Frame bulk modulus (Pa).
    pub k_b: T,
    /// Frame shear modulus (Pa).
    pub mu: T,
}

impl<T: Real> PoroelasticMaterial<T> {
    /// Checks the input invariants. `mu = 0` is accepted (fluid-like frame).
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rho_s", self.rho_s),
            ("rho_f", self.rho_f),
            ("phi", self.phi),
            ("a", self.a),
            ("k_s", self.k_s),
            ("k_f", self.k_f),
            ("k_b", self.k_b),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        if !(self.mu.is_finite() && self.mu >= T::zero()) {
            return Err(Error::Domain(format!(
                "mu must be finite and >= 0, got {}",
                self.mu
            )));
        }
        if self.phi >= T::one() {
            return Err(Error::Domain(format!("phi must be < 1, got {}", self.phi)));
        }
        if self.a < T::one() {
            return Err(Error::Domain(format!(
                "tortuosity must be >= 1, got {}",
                self.a
            )));
        }
        if self.k_b >= self.k_s {
            return Err(Error::Domain(format!(
                "frame modulus k_b = {} must be below the solid modulus k_s = {}",
                self.k_b, self.k_s
            )));
        }
        Ok(())
    }

    /// Multiplies the four moduli by `c`; used by the scaling invariant.
    pub fn scale_moduli(&self, c: T) -> Self {
        Self {
            k_s: self.k_s * c,
            k_f: self.k_f * c,
            k_b: self.k_b * c,
            mu: self.mu * c,
            ..*self
        }
    }

    pub fn cast<U: Real>(&self) -> PoroelasticMaterial<U> {
        let c = |v: T| U::lit(v.as_f64());
        PoroelasticMaterial {
            rho_s: c(self.rho_s),
            rho_f: c(self.rho_f),
            phi: c(self.phi),
            a: c(self.a),
            k_s: c(self.k_s),
            k_f: c(self.k_f),
            k_b: c(self.k_b),
            mu: c(self.mu),
        }
    }
}

/// Scalars derived directly from the measured inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScalars<T> {
    pub rho: T,
    pub rho_f: T,
    pub rho_w: T,
    pub m: T,
    pub beta: T,
    pub lambda: T,
    pub mu: T,
    /// `λ + 2μ + mβ²`.
    pub alpha: T,
}

/// Everything the wave solver needs to know about one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerDerived<T> {
    pub rho: T,
    pub rho_f: T,
    pub rho_w: T,
    pub m: T,
    pub beta: T,
    pub lambda: T,
    pub mu: T,
    pub alpha: T,
    /// Mass matrix `[[ρ, ρ_f], [ρ_f, ρ_w]]`.
    pub a: Mat2<T>,
    /// Stiffness matrix `[[α, mβ], [mβ, m]]`.
    pub b: Mat2<T>,
    /// Columns are the (fast, slow) eigenvectors of `A⁻¹B`, unit norm.
    pub p: Mat2<T>,
    pub v_pf: T,
    pub v_ps: T,
    pub v_s: T,
}

/// Derives ρ, ρ_w, m, β, λ and α.
///
/// λ = K_b − 2μ/3 may legitimately be negative (the bottom layer of the
/// reference experiment has λ < 0); positivity is required of β, m, and the
/// P-wave modulus λ + 2μ.
pub fn derive_scalars<T: Real>(mat: &PoroelasticMaterial<T>) -> Result<DerivedScalars<T>> {
    mat.validate()?;
    let one = T::one();
    let rho = mat.phi * mat.rho_f + (one - mat.phi) * mat.rho_s;
    let rho_w = mat.a * mat.rho_f / mat.phi;
    let beta = one - mat.k_b / mat.k_s;
    if !(beta > T::zero()) {
        return Err(Error::Domain(format!(
            "Biot coefficient beta = {beta} must be > 0"
        )));
    }
    let m_inv = mat.phi / mat.k_f + (beta - mat.phi) / mat.k_s;
    if !(m_inv > T::zero()) {
        return Err(Error::Domain(format!(
            "Biot modulus is nonpositive (1/m = {m_inv})"
        )));
    }
    let m = one / m_inv;
    let lambda = mat.k_b - T::lit(2.0) * mat.mu / T::lit(3.0);
    if !(lambda + T::lit(2.0) * mat.mu > T::zero()) {
        return Err(Error::Domain(
            "P-wave modulus lambda + 2 mu is nonpositive".into(),
        ));
    }
    let alpha = lambda + T::lit(2.0) * mat.mu + m * beta * beta;
    Ok(DerivedScalars {
        rho,
        rho_f: mat.rho_f,
        rho_w,
        m,
        beta,
        lambda,
        mu: mat.mu,
        alpha,
    })
}

/// Mass and stiffness matrices of the potential formulation.
pub fn assemble_matrices<T: Real>(d: &DerivedScalars<T>) -> (Mat2<T>, Mat2<T>) {
    let a = [[d.rho, d.rho_f], [d.rho_f, d.rho_w]];
    let mb = d.m * d.beta;
    let b = [
        [d.lambda + T::lit(2.0) * d.mu + d.m * d.beta * d.beta, mb],
        [mb, d.m],
    ];
    (a, b)
}

/// Result of [`eigendecompose`]: `A⁻¹B = P diag(v_fast², v_slow²) P⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2<T> {
    pub p: Mat2<T>,
    pub v_fast: T,
    pub v_slow: T,
}

/// Closed-form eigendecomposition of the symmetric-definite pencil (B, A).
///
/// The eigenvalues are the roots of `det(B − λA) = 0`. Each eigenvector is
/// normalised to unit length with its first nonzero entry positive; column 0
/// belongs to the larger eigenvalue. When the two eigenvalues coincide the
/// pencil is a multiple of the identity and `P = I` is returned; rejecting
/// such media is left to [`LayerDerived::from_material`].
pub fn eigendecompose<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Result<Eigen2<T>> {
    let two = T::lit(2.0);
    let det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det_a > T::zero() && a[0][0] > T::zero()) {
        return Err(Error::Domain("mass matrix is not positive definite".into()));
    }
    let c1 = -(b[0][0] * a[1][1] + b[1][1] * a[0][0] - two * b[0][1] * a[0][1]);
    let det_b = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    // det_a λ² + c1 λ + det_b = 0; both roots real for a definite pencil.
    let disc = (c1 * c1 - T::lit(4.0) * det_a * det_b)
        .max(T::zero())
        .sqrt();
    let q = -(c1 - disc) / two; // c1 < 0 for a positive pencil, so no cancellation
    let lam_fast = q / det_a;
    let lam_slow = det_b / q;
    if !(lam_slow > T::zero() && lam_fast > T::zero()) {
        return Err(Error::Domain(format!(
            "eigenvalues of A^-1 B must be positive, got {lam_fast} and {lam_slow}"
        )));
    }
    let v_fast = lam_fast.sqrt();
    let v_slow = lam_slow.sqrt();
    if lam_fast - lam_slow <= T::lit(T::EIGEN_GAP) * lam_fast {
        return Ok(Eigen2 {
            p: [[T::one(), T::zero()], [T::zero(), T::one()]],
            v_fast,
            v_slow,
        });
    }
    let e0 = null_vector(a, b, lam_fast);
    let e1 = null_vector(a, b, lam_slow);
    Ok(Eigen2 {
        p: [[e0[0], e1[0]], [e0[1], e1[1]]],
        v_fast,
        v_slow,
    })
}

fn null_vector<T: Real>(a: &Mat2<T>, b: &Mat2<T>, lam: T) -> [T; 2] {
    let m00 = b[0][0] - lam * a[0][0];
    let m01 = b[0][1] - lam * a[0][1];
    let m11 = b[1][1] - lam * a[1][1];
    // Either row of the singular matrix gives the null direction; take the larger one.
    let r0 = [m01, -m00];
    let r1 = [m11, -m01];
    let n0 = r0[0].hypot(r0[1]);
    let n1 = r1[0].hypot(r1[1]);
    let (v, n) = if n0 >= n1 { (r0, n0) } else { (r1, n1) };
    let mut v = [v[0] / n, v[1] / n];
    let first = if v[0] != T::zero() { v[0] } else { v[1] };
    if first < T::zero() {
        v = [-v[0], -v[1]];
    }
    v
}

/// Closed-form shear velocity `√(μρ_w / (ρρ_w − ρ_f²))`.
pub fn shear_velocity<T: Real>(d: &DerivedScalars<T>) -> Result<T> {
    let den = d.rho * d.rho_w - d.rho_f * d.rho_f;
    if !(den > T::zero()) {
        return Err(Error::Domain(format!(
            "rho rho_w - rho_f^2 = {den} must be > 0"
        )));
    }
    Ok((d.mu * d.rho_w / den).sqrt())
}

impl<T: Real> LayerDerived<T> {
    pub fn from_material(mat: &PoroelasticMaterial<T>) -> Result<Self> {
        let s = derive_scalars(mat)?;
        let (a, b) = assemble_matrices(&s);
        let eig = eigendecompose(&a, &b)?;
        if eig.v_fast * eig.v_fast - eig.v_slow * eig.v_slow
            <= T::lit(T::EIGEN_GAP) * eig.v_fast * eig.v_fast
        {
            return Err(Error::Degenerate(
                "fast and slow P velocities coincide".into(),
            ));
        }
        let v_s = shear_velocity(&s)?;
        if !(v_s > T::zero()) {
            return Err(Error::Domain("shear velocity must be > 0 (mu = 0)".into()));
        }
        Ok(Self {
            rho: s.rho,
            rho_f: s.rho_f,
            rho_w: s.rho_w,
            m: s.m,
            beta: s.beta,
            lambda: s.lambda,
            mu: s.mu,
            alpha: s.alpha,
            a,
            b,
            p: eig.p,
            v_pf: eig.v_fast,
            v_ps: eig.v_slow,
            v_s,
        })
    }

    /// Largest of the three body-wave velocities.
    pub fn v_max(&self) -> T {
        self.v_pf.max(self.v_ps).max(self.v_s)
    }

    /// Returns a copy with the columns of `P` multiplied by `c0` and `c1`.
    ///
    /// Physical traces do not depend on this scaling.
    pub fn with_scaled_modes(&self, c0: T, c1: T) -> Self {
        let mut out = *self;
        out.p = [
            [self.p[0][0] * c0, self.p[0][1] * c1],
            [self.p[1][0] * c0, self.p[1][1] * c1],
        ];
        out
    }

    /// Relative Frobenius residual `‖A⁻¹B − P D P⁻¹‖ / ‖A⁻¹B‖`.
    pub fn reconstruction_residual(&self) -> T {
        let ab = mat_mul(&inv2(&self.a), &self.b);
        let d = [
            [self.v_pf * self.v_pf, T::zero()],
            [T::zero(), self.v_ps * self.v_ps],
        ];
        let pdp = mat_mul(&mat_mul(&self.p, &d), &inv2(&self.p));
        frob(&sub2(&ab, &pdp)) / frob(&ab)
    }
}

pub(crate) fn inv2<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ]
}

pub(crate) fn mat_mul<T: Real>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn sub2<T: Real>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    [
        [x[0][0] - y[0][0], x[0][1] - y[0][1]],
        [x[1][0] - y[1][0], x[1][1] - y[1][1]],
    ]
}

fn frob<T: Real>(x: &Mat2<T>) -> T {
    (x[0][0] * x[0][0] + x[0][1] * x[0][1] + x[1][0] * x[1][0] + x[1][1] * x[1][1]).sqrt()
}

/// Reference materials of the two-layer experiment (top, bottom).
pub fn reference_layers<T: Real>() -> (PoroelasticMaterial<T>, PoroelasticMaterial<T>) {
    let l = T::lit;
    (
        PoroelasticMaterial {
            rho_s: l(2200.0),
            rho_f: l(950.0),
            phi: l(0.4),
            a: l(2.0),
            k_s: l(6.9e9),
            k_f: l(2e9),
            k_b: l(6.7e9),
            mu: l(3e9),
        },
        PoroelasticMaterial {
            rho_s: l(2650.0),
            rho_f: l(750.0),
            phi: l(0.2),
            a: l(2.0),
            k_s: l(37e9),
            k_f: l(1.7e9),
            k_b: l(2.2e9),
            mu: l(4.4e9),
        },
    )
}
