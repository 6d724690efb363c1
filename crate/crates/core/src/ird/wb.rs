//! Welch-Berlekamp rational interpolation, one sample at a time.
//!
//! The state is two polynomial pairs, `(omega, lambda)` and `(theta, phi)`.
//! After consuming samples `(x_s, y_s)` both pairs satisfy
//! `lambda(x_s) * y_s = omega(x_s)` (resp. `phi`, `theta`), and
//! `(omega, lambda)` is the pair of lower rank.

use crate::gf::{Elem, Field, Poly};

/// `max(2 deg w, 1 + 2 deg n)`, with the zero polynomial below every degree.
pub fn rank(n: &Poly, w: &Poly) -> Option<usize> {
    let rw = w.degree().map(|d| 2 * d);
    let rn = n.degree().map(|d| 2 * d + 1);
    rw.max(rn)
}

/// How one update transformed the `(lambda, phi)` pair, so that values of
/// those polynomials at fixed points can be carried along without
/// re-evaluating them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WbStep {
    /// `Some((a, b))` when `lambda <- b phi + a lambda` and
    /// `phi <- (x - x_s) lambda`; `None` when only `phi` was multiplied by
    /// `(x - x_s)`.
    pub combined: Option<(Elem, Elem)>,
    /// The two pairs were exchanged afterwards.
    pub swapped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WbState {
    pub omega: Poly,
    pub lambda: Poly,
    pub theta: Poly,
    pub phi: Poly,
}

impl Default for WbState {
    fn default() -> Self {
        Self::new()
    }
}

impl WbState {
    pub fn new() -> Self {
        Self { omega: Poly::zero(), lambda: Poly::one(), theta: Poly::one(), phi: Poly::zero() }
    }

    pub fn update(&mut self, field: &Field, x: Elem, y: Elem) -> WbStep {
        let b = self.omega.eval(field, x) ^ field.mul(y, self.lambda.eval(field, x));
        let mut step = WbStep { combined: None, swapped: false };
        if b == 0 {
            self.theta.mul_linear_in_place(field, x);
            self.phi.mul_linear_in_place(field, x);
        } else {
            let a = self.theta.eval(field, x) ^ field.mul(y, self.phi.eval(field, x));
            let omega = self.theta.lin_comb(field, b, &self.omega, a);
            let lambda = self.phi.lin_comb(field, b, &self.lambda, a);
            let mut theta = std::mem::replace(&mut self.omega, omega);
            let mut phi = std::mem::replace(&mut self.lambda, lambda);
            theta.mul_linear_in_place(field, x);
            phi.mul_linear_in_place(field, x);
            self.theta = theta;
            self.phi = phi;
            step.combined = Some((a, b));
        }
        if rank(&self.omega, &self.lambda) > rank(&self.theta, &self.phi) {
            std::mem::swap(&mut self.omega, &mut self.theta);
            std::mem::swap(&mut self.lambda, &mut self.phi);
            step.swapped = true;
        }
        step
    }

    /// Both pairs interpolate `(x, y)`.
    pub fn interpolates(&self, field: &Field, x: Elem, y: Elem) -> bool {
        let ok = |n: &Poly, w: &Poly| field.mul(w.eval(field, x), y) == n.eval(field, x);
        ok(&self.omega, &self.lambda) && ok(&self.theta, &self.phi)
    }
}
