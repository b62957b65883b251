//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the solver is generic over (`f32` or `f64`).
///
/// The tolerance constants scale with the precision of the type: the
/// `f64` values are the ones the test-suite pins, the `f32` values are
/// loosened by roughly the ratio of the two machine epsilons.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute residual `|F(q, t)|` (per unit of `max(1, t)`) accepted by contour solves.
    const ROOT_TOL: f64;
    /// Relative gap below which two eigenvalues are treated as coincident.
    const EIGEN_GAP: f64;
    /// Pivot magnitude (relative to the row scale) below which a matrix is singular.
    const PIVOT_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $root:expr, $gap:expr, $piv:expr) => {
        impl Real for $t {
            const ROOT_TOL: f64 = $root;
            const EIGEN_GAP: f64 = $gap;
            const PIVOT_TOL: f64 = $piv;
        }
    };
}

impl_real!(f64, 1e-12, 1e-9, 1e-14);
impl_real!(f32, 2e-4, 1e-5, 1e-6);
