//! Orbit structure of U1 m U2⁻¹ on 2×2 matrices: Cartan-type decomposition,
//! orbit separation by (x, w), and the section of β = (x, w).

use serde::Serialize;

use super::group::{w_of, x_of, SU2Element};
use super::mat::{c, Mat2C, C64};
use crate::error::{Error, Result};

/// m = u1 · diag(λ1, λ2) · u2 · e^{iθ} with u1, u2 ∈ SU(2), 0 ≤ λ1 ≤ λ2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CartanDecomposition {
    pub u1: SU2Element,
    pub u2: SU2Element,
    pub lambda: [f64; 2],
    pub theta: f64,
}

impl CartanDecomposition {
    pub fn reconstruct(&self) -> Mat2C {
        let d = Mat2C::diag(c(self.lambda[0], 0.0), c(self.lambda[1], 0.0));
        (*self.u1.matrix() * d * *self.u2.matrix()).scale(c(0.0, self.theta).exp())
    }
}

fn unit(v: [C64; 2]) -> [C64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// (−conj v1, conj v0): orthogonal to v with det [v | perp] = 1 for unit v.
fn perp(v: [C64; 2]) -> [C64; 2] {
    [-v[1].conj(), v[0].conj()]
}

fn columns(a: [C64; 2], b: [C64; 2]) -> Mat2C {
    Mat2C::new(a[0], b[0], a[1], b[1])
}

fn apply(m: &Mat2C, v: [C64; 2]) -> [C64; 2] {
    [m.0[0] * v[0] + m.0[1] * v[1], m.0[2] * v[0] + m.0[3] * v[1]]
}

/// Decompose via a 2×2 SVD m = K diag(s1 ≥ s2) K′, then reorder to
/// non-decreasing λ and move det-phases of K, K′ into θ.
pub fn cartan_decompose(m: &Mat2C) -> CartanDecomposition {
    // Top right-singular vector from the Hermitian matrix m†m.
    let h = m.adjoint() * *m;
    let (a, d, b) = (h.0[0].re, h.0[3].re, h.0[1]);
    let half = 0.5 * (a - d);
    let mu1 = 0.5 * (a + d) + (half * half + b.norm_sqr()).sqrt();
    let cand1 = [b, c(mu1 - a, 0.0)];
    let cand2 = [c(mu1 - d, 0.0), b.conj()];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let v1 = if n1.max(n2) == 0.0 {
        [c(1.0, 0.0), c(0.0, 0.0)]
    } else if n1 >= n2 {
        unit(cand1)
    } else {
        unit(cand2)
    };
    let v2 = perp(v1);
    let mv1 = apply(m, v1);
    let s1 = (mv1[0].norm_sqr() + mv1[1].norm_sqr()).sqrt();
    let u1 = if s1 > 0.0 { unit(mv1) } else { [c(1.0, 0.0), c(0.0, 0.0)] };
    let u2 = perp(u1);
    // m v2 = u2 d up to rounding; absorb the phase of d into v2.
    let mv2 = apply(m, v2);
    let dd = u2[0].conj() * mv2[0] + u2[1].conj() * mv2[1];
    let s2 = dd.norm();
    let phase = if s2 > 0.0 { dd / s2 } else { c(1.0, 0.0) };
    let v2 = [v2[0] * phase.conj(), v2[1] * phase.conj()];
    // m = K diag(s1, s2) K′ with K = [u1 u2], K′ = [v1 v2]†.
    let (k, kp, lambda) = if s1 > s2 {
        (columns(u2, u1), columns(v2, v1).adjoint(), [s2, s1])
    } else {
        (columns(u1, u2), columns(v1, v2).adjoint(), [s1, s2])
    };
    let kappa = k.det().arg();
    let kappa_p = kp.det().arg();
    let u1m = k.scale(c(0.0, -kappa / 2.0).exp());
    let u2m = kp.scale(c(0.0, -kappa_p / 2.0).exp());
    CartanDecomposition {
        u1: SU2Element::from_matrix_unchecked(u1m),
        u2: SU2Element::from_matrix_unchecked(u2m),
        lambda,
        theta: 0.5 * (kappa + kappa_p),
    }
}

/// Same ψ-orbit iff x and w agree (to `tol`).
pub fn same_orbit(m: &Mat2C, n: &Mat2C, tol: f64) -> bool {
    (x_of(m) - x_of(n)).abs() <= tol && (w_of(m) - w_of(n)).norm() <= tol
}

/// The matrix diag(u (a + r)^{-1/2}, (a + r)^{1/2}), r = √(a² − |u|²), whose
/// invariants are (x, w) = (a, u).
pub fn beta_section(a: f64, u: C64) -> Result<Mat2C> {
    if !(a >= u.norm()) {
        return Err(Error::OutsideImage { a, u_abs: u.norm() });
    }
    if a == 0.0 {
        return Ok(Mat2C::zero());
    }
    let s = a + (a * a - u.norm_sqr()).max(0.0).sqrt();
    Ok(Mat2C::diag(u / s.sqrt(), c(s.sqrt(), 0.0)))
}
