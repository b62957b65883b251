//! Branch-cut square root and vertical slowness.

use num_complex::Complex;

use crate::scalar::Real;

/// Square root with positive real part, cut along the negative real axis.
///
/// On the cut itself (exactly real, negative argument) the value is
/// `i√(−z)`, i.e. the limit from the upper half-plane.
pub fn sqrt_branch<T: Real>(z: Complex<T>) -> Complex<T> {
    let (a, b) = (z.re, z.im);
    let zero = T::zero();
    if b == zero {
        return if a >= zero {
            Complex::new(a.sqrt(), zero)
        } else {
            Complex::new(zero, (-a).sqrt())
        };
    }
    let half = T::lit(0.5);
    let r = a.hypot(b);
    if a >= zero {
        let re = ((r + a) * half).sqrt();
        Complex::new(re, b / (re + re))
    } else {
        let im = ((r - a) * half).sqrt();
        Complex::new(b.abs() / (im + im), im.copysign(b))
    }
}

/// Vertical slowness `κ(q) = (1/V² + q²)^{1/2}` on the principal branch.
pub fn kappa<T: Real>(v: T, q: Complex<T>) -> Complex<T> {
    sqrt_branch(Complex::new(T::one() / (v * v), T::zero()) + q * q)
}

/// Side from which a point on the imaginary slowness axis is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    /// Evaluate exactly at `q` (upper-side value on cuts).
    Exact,
    /// Limit from `Re q > 0`; differs from `Exact` only on the cuts
    /// `q = iσ, |σ| > 1/V` with `σ < 0`.
    RightHalfPlane,
}

/// A horizontal slowness together with the side it is evaluated from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSlowness<T> {
    pub q: Complex<T>,
    pub approach: Approach,
}

impl<T: Real> ComplexSlowness<T> {
    pub fn new(q: Complex<T>) -> Self {
        Self {
            q,
            approach: Approach::Exact,
        }
    }

    /// A point on a Cagniard contour: head-wave samples lie exactly on the
    /// imaginary axis but belong to the right half-plane sheet.
    pub fn on_contour(q: Complex<T>) -> Self {
        Self {
            q,
            approach: Approach::RightHalfPlane,
        }
    }

    pub fn kappa(&self, v: T) -> Complex<T> {
        let k = kappa(v, self.q);
        match self.approach {
            Approach::Exact => k,
            Approach::RightHalfPlane => {
                if self.q.re == T::zero() && k.re == T::zero() && self.q.im < T::zero() {
                    k.conj()
                } else {
                    k
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.q.re.is_finite() && self.q.im.is_finite()
    }

    /// The mirrored point `−q̄`, approached from the mirrored side.
    pub fn mirror(&self) -> Self {
        Self {
            q: -self.q.conj(),
            approach: self.approach,
        }
    }
}
