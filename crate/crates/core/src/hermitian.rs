//! The complex Hessian `∂²u/∂z_i∂z̄_j` of a real function on ℂ², as a 2×2
//! Hermitian form.

use std::ops::{Add, Mul};

use num_complex::Complex;

use crate::geometry::TangentVector2;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HermitianForm2<T> {
    pub h_zz: T,
    pub h_ww: T,
    /// `∂²u/∂z∂w̄`; the `(w, z)` entry is its conjugate.
    pub h_zw: Complex<T>,
}

impl<T: Scalar> HermitianForm2<T> {
    pub fn new(h_zz: T, h_ww: T, h_zw: Complex<T>) -> Self {
        Self { h_zz, h_ww, h_zw }
    }

    pub fn diagonal(h_zz: T, h_ww: T) -> Self {
        Self::new(h_zz, h_ww, Complex::new(T::zero(), T::zero()))
    }

    pub fn identity() -> Self {
        Self::diagonal(T::one(), T::one())
    }

    /// `Σ h_ij ξ_i ξ̄_j`.
    pub fn quadratic(&self, xi: &TangentVector2<T>) -> T {
        let cross = self.h_zw * xi.xi_z * xi.xi_w.conj();
        self.h_zz * xi.xi_z.norm_sqr() + self.h_ww * xi.xi_w.norm_sqr() + (cross.re + cross.re)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (T, T) {
        let two = T::lit(2.0);
        let mean = (self.h_zz + self.h_ww) / two;
        let half_gap = (self.h_zz - self.h_ww) / two;
        let radius = (half_gap * half_gap + self.h_zw.norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().0
    }

    pub fn is_psd(&self, tol: T) -> bool {
        self.min_eigenvalue() >= -tol
    }

    pub fn is_finite(&self) -> bool {
        self.h_zz.is_finite() && self.h_ww.is_finite() && self.h_zw.re.is_finite() && self.h_zw.im.is_finite()
    }

    /// Largest absolute entry, used to scale tolerances.
    pub fn magnitude(&self) -> T {
        self.h_zz.abs().max(self.h_ww.abs()).max(self.h_zw.norm())
    }
}

impl<T: Scalar> Add for HermitianForm2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.h_zz + rhs.h_zz, self.h_ww + rhs.h_ww, self.h_zw + rhs.h_zw)
    }
}

impl<T: Scalar> Mul<T> for HermitianForm2<T> {
    type Output = Self;
    fn mul(self, t: T) -> Self {
        Self::new(self.h_zz * t, self.h_ww * t, self.h_zw * t)
    }
}
