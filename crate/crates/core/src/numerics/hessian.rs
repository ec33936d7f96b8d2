//! Complex Hessian ∂²F/∂z_α∂z̄_β of a real function on ℂ³ by central differences.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat3C = [[Complex64; 3]; 3];

/// Step used when the caller has no preference: the rounding/truncation
/// balance for fourth-order second differences.
pub fn default_step(p: &[Complex64; 3]) -> f64 {
    f64::EPSILON.powf(1.0 / 6.0) * norm(p).max(1.0)
}

fn norm(p: &[Complex64; 3]) -> f64 {
    p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn shifted(p: &[Complex64; 3], moves: &[(usize, f64)]) -> [Complex64; 3] {
    let mut q = *p;
    for &(k, d) in moves {
        let (c, re) = (k / 2, k % 2 == 0);
        if re {
            q[c].re += d;
        } else {
            q[c].im += d;
        }
    }
    q
}

/// H_{αβ̄} with real coordinates ordered (x₁, y₁, x₂, y₂, x₃, y₃), using
/// fourth-order stencils for pure and mixed second derivatives.
pub fn central_hessian_complex<F: Fn(&[Complex64; 3]) -> f64>(f: F, p: &[Complex64; 3], h: f64) -> Result<Mat3C> {
    let pn = norm(p);
    if !(h >= 1e3 * f64::EPSILON * pn) || h <= 0.0 {
        return Err(Error::StepTooSmall { h, norm: pn });
    }
    let f0 = f(p);
    let mut r = [[0.0f64; 6]; 6];
    for i in 0..6 {
        let fp1 = f(&shifted(p, &[(i, h)]));
        let fm1 = f(&shifted(p, &[(i, -h)]));
        let fp2 = f(&shifted(p, &[(i, 2.0 * h)]));
        let fm2 = f(&shifted(p, &[(i, -2.0 * h)]));
        r[i][i] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    }
    // Mixed partials: tensor product of the 5-point first-derivative stencil.
    const W: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    for i in 0..6 {
        for j in i + 1..6 {
            let mut s = 0.0;
            for &(si, wi) in &W {
                for &(sj, wj) in &W {
                    s += wi * wj * f(&shifted(p, &[(i, si * h), (j, sj * h)]));
                }
            }
            let v = s / (144.0 * h * h);
            r[i][j] = v;
            r[j][i] = v;
        }
    }
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
            out[a][b] = Complex64::new(0.25 * (r[xa][xb] + r[ya][yb]), 0.25 * (r[xa][yb] - r[ya][xb]));
        }
    }
    Ok(out)
}

/// Max-norm of a 3×3 complex matrix.
pub fn max_norm(m: &Mat3C) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖H − H†‖ in max-norm.
pub fn hermitian_deviation(m: &Mat3C) -> f64 {
    let mut d: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            d = d.max((m[a][b] - m[b][a].conj()).norm());
        }
    }
    d
}
