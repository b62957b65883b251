//! Dense complex solves for small fixed-size systems.

use num_complex::Complex;

use crate::scalar::Real;

/// Row-equilibrated LU factorisation with partial pivoting of an `N×N` matrix.
#[derive(Debug, Clone)]
pub struct Lu<T, const N: usize> {
    lu: [[Complex<T>; N]; N],
    perm: [usize; N],
    row_scale: [T; N],
    /// Smallest |pivot| relative to its (equilibrated) row, a cheap conditioning indicator.
    pub min_pivot: T,
    /// max|u_ii| / min|u_ii| of the equilibrated factor.
    pub pivot_ratio: T,
}

impl<T: Real, const N: usize> Lu<T, N> {
    /// Factorises `m`; returns `None` when a pivot vanishes relative to [`Real::PIVOT_TOL`].
    pub fn factor(m: &[[Complex<T>; N]; N]) -> Option<Self> {
        let mut lu = *m;
        let mut row_scale = [T::one(); N];
        for (i, row) in lu.iter_mut().enumerate() {
            let s = row.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
            if !(s > T::zero()) || !s.is_finite() {
                return None;
            }
            row_scale[i] = T::one() / s;
            for z in row.iter_mut() {
                *z = *z * row_scale[i];
            }
        }
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut min_pivot = T::infinity();
        let mut max_pivot = T::zero();
        for k in 0..N {
            let (piv, piv_abs) =
                (k..N)
                    .map(|i| (i, lu[i][k].norm()))
                    .fold((k, T::neg_infinity()), |best, cur| {
                        if cur.1 > best.1 {
                            cur
                        } else {
                            best
                        }
                    });
            if !(piv_abs > T::lit(T::PIVOT_TOL)) {
                return None;
            }
            min_pivot = min_pivot.min(piv_abs);
            max_pivot = max_pivot.max(piv_abs);
            if piv != k {
                lu.swap(piv, k);
                perm.swap(piv, k);
            }
            let inv = Complex::new(T::one(), T::zero()) / lu[k][k];
            for i in (k + 1)..N {
                let f = lu[i][k] * inv;
                lu[i][k] = f;
                for j in (k + 1)..N {
                    let t = lu[k][j];
                    lu[i][j] = lu[i][j] - f * t;
                }
            }
        }
        Some(Self {
            lu,
            perm,
            row_scale,
            min_pivot,
            pivot_ratio: max_pivot / min_pivot,
        })
    }

    pub fn solve(&self, rhs: &[Complex<T>; N]) -> [Complex<T>; N] {
        let mut x = [Complex::new(T::zero(), T::zero()); N];
        for i in 0..N {
            let r = self.perm[i];
            x[i] = rhs[r] * self.row_scale[r];
        }
        for i in 0..N {
            for j in 0..i {
                let t = self.lu[i][j] * x[j];
                x[i] = x[i] - t;
            }
        }
        for i in (0..N).rev() {
            for j in (i + 1)..N {
                let t = self.lu[i][j] * x[j];
                x[i] = x[i] - t;
            }
            x[i] = x[i] / self.lu[i][i];
        }
        x
    }
}

pub fn mat_vec<T: Real, const N: usize>(
    m: &[[Complex<T>; N]; N],
    v: &[Complex<T>; N],
) -> [Complex<T>; N] {
    let mut out = [Complex::new(T::zero(), T::zero()); N];
    for i in 0..N {
        for j in 0..N {
            out[i] = out[i] + m[i][j] * v[j];
        }
    }
    out
}

/// Infinity norm of a vector.
pub fn norm_inf<T: Real, const N: usize>(v: &[Complex<T>; N]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// Infinity (max row sum) norm of a matrix.
pub fn mat_norm_inf<T: Real, const N: usize>(m: &[[Complex<T>; N]; N]) -> T {
    m.iter()
        .map(|row| row.iter().fold(T::zero(), |acc, z| acc + z.norm()))
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    #[test]
    fn random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut m = [[C::new(0.0, 0.0); 6]; 6];
            for row in m.iter_mut() {
                let scale = 10f64.powi(rng.gen_range(-4..8));
                for z in row.iter_mut() {
                    *z = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
                }
            }
            let x: [C; 6] =
                std::array::from_fn(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let b = mat_vec(&m, &x);
            let lu = Lu::factor(&m).unwrap();
            let y = lu.solve(&b);
            let r: [C; 6] = std::array::from_fn(|i| mat_vec(&m, &y)[i] - b[i]);
            assert!(norm_inf(&r) <= 1e-10 * (mat_norm_inf(&m) * norm_inf(&y) + norm_inf(&b)));
        }
    }

    #[test]
    fn singular_detected() {
        let m = [
            [C::new(1.0, 0.0), C::new(2.0, 0.0)],
            [C::new(2.0, 0.0), C::new(4.0, 0.0)],
        ];
        assert!(Lu::factor(&m).is_none());
    }

    #[test]
    fn needs_pivoting() {
        let m = [
            [C::new(0.0, 0.0), C::new(1.0, 0.0)],
            [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        ];
        let lu = Lu::factor(&m).unwrap();
        let x = lu.solve(&[C::new(3.0, 0.0), C::new(0.0, 5.0)]);
        assert_eq!(x, [C::new(0.0, 5.0), C::new(3.0, 0.0)]);
    }
}
