//! Monte-Carlo inner products ⟨φ1, φ2⟩ = ∫ φ1 φ̄2 e^{−f/2ħ} ω³/(3!(2πħ)³).
//!
//! Points are χ(U, λ) with U Haar-distributed, λ = sinh(y/2)·n̂, n̂ uniform on
//! the sphere and y drawn from a tabulated density on [0, r_cut] shaped like
//! the weight times (cosh y)^{(d1+d2)/2}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::degree_log_integrand;
use super::operator::quantum_operator;
use super::poly::Poly4;
use crate::error::{Error, Result};
use crate::global_geom::volume_density;
use crate::montecarlo::sharded;
use crate::profiles::MetricProfile;
use crate::sl2c::{chi, haar_sample, LieAlgPair, SL2Point};

pub const DENSITY_CELLS: usize = 4096;

/// Nats below the maximum at which the default truncation radius sits.
pub const CUT_DEPTH: f64 = 40.0;

/// The radius beyond which the log integrand (with the given tilt) stays
/// more than 40 nats below its maximum.
pub fn default_r_cut(p: &MetricProfile, hbar: f64, tilt: f64) -> Result<f64> {
    let step = 0.01;
    let mut best = f64::NEG_INFINITY;
    let mut y = step;
    while y < 2000.0 {
        let v = degree_log_integrand(p, hbar, tilt, y);
        if v.is_nan() {
            return Err(Error::NonFinite { at: y });
        }
        best = best.max(v);
        if best.is_finite() && v < best - CUT_DEPTH {
            return Ok(y);
        }
        y += step;
    }
    Err(Error::Domain(format!("weight does not decay by {CUT_DEPTH} nats before y = 2000")))
}

/// Piecewise-constant density on [0, r_cut].
struct RadialDensity {
    width: f64,
    cdf: Vec<f64>,
    /// ln of the density value in each cell.
    ln_q: Vec<f64>,
}

impl RadialDensity {
    fn new<L: Fn(f64) -> f64>(log_w: L, r_cut: f64, cells: usize) -> Result<Self> {
        let width = r_cut / cells as f64;
        let logs: Vec<f64> = (0..cells).map(|i| log_w((i as f64 + 0.5) * width)).collect();
        let top = logs.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::NonFinite { at: r_cut });
        }
        let w: Vec<f64> = logs.iter().map(|v| if v.is_finite() { (v - top).exp() } else { 0.0 }).collect();
        let total: f64 = w.iter().sum::<f64>() * width;
        let mut acc = 0.0;
        let cdf = w
            .iter()
            .map(|x| {
                acc += x * width / total;
                acc
            })
            .collect();
        let ln_q = w.iter().map(|x| (x / total).ln()).collect();
        Ok(Self { width, cdf, ln_q })
    }

    /// (y, ln q(y)).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let u: f64 = rng.gen::<f64>() * self.cdf[self.cdf.len() - 1];
        let i = self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1);
        let y = (i as f64 + rng.gen::<f64>()) * self.width;
        (y, self.ln_q[i])
    }
}

struct Sampler<'a> {
    p: &'a MetricProfile,
    hbar: f64,
    density: RadialDensity,
}

impl Sampler<'_> {
    fn new(p: &MetricProfile, hbar: f64, tilt: f64, r_cut: f64) -> Result<Sampler<'_>> {
        let density = RadialDensity::new(|y| degree_log_integrand(p, hbar, tilt, y), r_cut, DENSITY_CELLS)?;
        Ok(Sampler { p, hbar, density })
    }

    /// A point and its importance weight for ∫ · e^{−f/2ħ} ε.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (SL2Point, f64) {
        let u = haar_sample(rng);
        let (y, ln_q) = self.density.sample(rng);
        let ct = 1.0 - 2.0 * rng.gen::<f64>();
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let ph = 2.0 * PI * rng.gen::<f64>();
        let l = (0.5 * y).sinh();
        let lam = [l * st * ph.cos(), l * st * ph.sin(), l * ct];
        let m = chi(&u, lam);
        // d³λ = 4πλ² (dλ/dy) dy after averaging n̂; ∫σ1σ2σ3 = 16π².
        let dl_dy = 0.5 * (0.5 * y).cosh();
        let jac = 16.0 * PI * PI * 4.0 * PI * l * l * dl_dy;
        let mu = volume_density(self.p, l * l, y).unwrap_or(f64::NAN);
        let f = self.p.f(y).unwrap_or(f64::NAN);
        let ln_w = (jac * mu).ln() - f / (2.0 * self.hbar) - 3.0 * (2.0 * PI * self.hbar).ln() - ln_q;
        (m, if jac * mu > 0.0 { ln_w.exp() } else { 0.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProduct {
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n: usize,
    pub r_cut: f64,
}

impl InnerProduct {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn eval_at(phi: &Poly4, m: &SL2Point) -> Complex64 {
    phi.eval(&m.matrix().0)
}

fn tilt_for(degrees: &[Option<u32>]) -> f64 {
    degrees.iter().map(|d| d.unwrap_or(0) as f64).sum::<f64>() / 2.0
}

/// ⟨φ1, φ2⟩ on M_{r_cut}; `r_cut = None` uses [`default_r_cut`].
pub fn monte_carlo_inner_product(
    p: &MetricProfile,
    hbar: f64,
    phi1: &Poly4,
    phi2: &Poly4,
    r_cut: Option<f64>,
    n: usize,
    seed: u64,
) -> Result<InnerProduct> {
    if !(hbar > 0.0) || n < 2 {
        return Err(Error::InvalidParameter(format!("need ħ > 0 and n ≥ 2 (got {hbar}, {n})")));
    }
    let tilt = tilt_for(&[phi1.degree(), phi2.degree()]);
    let r_cut = match r_cut {
        Some(r) => r,
        None => default_r_cut(p, hbar, tilt)?,
    };
    let sampler = Sampler::new(p, hbar, tilt, r_cut)?;
    let mom = sharded(n, seed, 2, |rng, out| {
        let (m, w) = sampler.draw(rng);
        let v = eval_at(phi1, &m) * eval_at(phi2, &m).conj() * w;
        out[0] = v.re;
        out[1] = v.im;
    });
    Ok(InnerProduct { re: mom.mean(0), im: mom.mean(1), stderr_re: mom.stderr(0), stderr_im: mom.stderr(1), n, r_cut })
}

/// ⟨μ̂φ_i, φ_j⟩ − ⟨φ_i, μ̂φ_j⟩ estimated from per-sample differences.
#[derive(Debug, Clone, Serialize)]
pub struct GramCheck {
    pub size: usize,
    /// Row-major (re, im, stderr_re, stderr_im) of the difference matrix.
    pub entries: Vec<[f64; 4]>,
    /// Largest |estimate|/stderr over all real and imaginary parts.
    pub max_z: f64,
    pub n: usize,
    pub r_cut: f64,
}

impl GramCheck {
    pub fn within(&self, sigmas: f64) -> bool {
        self.max_z <= sigmas
    }
}

pub fn gram_hermiticity(
    p: &MetricProfile,
    hbar: f64,
    basis: &[Poly4],
    x: &LieAlgPair,
    r_cut: Option<f64>,
    n: usize,
    seed: u64,
) -> Result<GramCheck> {
    let ops: Vec<Poly4> = basis.iter().map(|b| quantum_operator(x, b, hbar)).collect();
    let dmax = basis.iter().filter_map(|b| b.degree()).max().unwrap_or(0);
    let tilt = dmax as f64;
    let r_cut = match r_cut {
        Some(r) => r,
        None => default_r_cut(p, hbar, tilt)?,
    };
    let sampler = Sampler::new(p, hbar, tilt, r_cut)?;
    let k = basis.len();
    let mom = sharded(n, seed, 2 * k * k, |rng, out| {
        let (m, w) = sampler.draw(rng);
        let phi: Vec<Complex64> = basis.iter().map(|b| eval_at(b, &m)).collect();
        let psi: Vec<Complex64> = ops.iter().map(|b| eval_at(b, &m)).collect();
        for i in 0..k {
            for j in 0..k {
                let d = (psi[i] * phi[j].conj() - phi[i] * psi[j].conj()) * w;
                out[2 * (i * k + j)] = d.re;
                out[2 * (i * k + j) + 1] = d.im;
            }
        }
    });
    let mut entries = Vec::with_capacity(k * k);
    let mut max_z: f64 = 0.0;
    for e in 0..k * k {
        let (re, im) = (mom.mean(2 * e), mom.mean(2 * e + 1));
        let (sr, si) = (mom.stderr(2 * e), mom.stderr(2 * e + 1));
        for (v, s) in [(re, sr), (im, si)] {
            let z = if s > 0.0 {
                v.abs() / s
            } else if v == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            max_z = max_z.max(z);
        }
        entries.push([re, im, sr, si]);
    }
    Ok(GramCheck { size: k, entries, max_z, n, r_cut })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global_geom::integrate_invariant;
    use crate::profiles::{builtin, Builtin};
    use crate::quantization::basis_h_poly;

    #[test]
    fn norm_of_one_matches_quadrature() {
        let lump = builtin(Builtin::Lump).unwrap();
        let hbar = PI / 4.0;
        let one = Poly4::one();
        let ip = monte_carlo_inner_product(&lump, hbar, &one, &one, Some(20.0), 200_000, 1).unwrap();
        let oracle = integrate_invariant(&lump, |y| (-lump.f(y).unwrap() / (2.0 * hbar)).exp(), 20.0).unwrap()
            / (2.0 * PI * hbar).powi(3);
        assert!((ip.re - oracle).abs() < 3.0 * ip.stderr_re, "{ip:?} vs {oracle}");
        assert!(ip.stderr_re < 0.01 * oracle);
        assert_eq!(ip.im, 0.0);
    }

    #[test]
    fn averaging_kills_mixed_terms() {
        let lump = builtin(Builtin::Lump).unwrap();
        let ip = monte_carlo_inner_product(&lump, PI / 4.0, &Poly4::var(1), &Poly4::one(), None, 100_000, 2).unwrap();
        assert!(ip.re.abs() < 3.0 * ip.stderr_re && ip.im.abs() < 3.0 * ip.stderr_im, "{ip:?}");
        let phi = Poly4::var(2) + Poly4::var(1).scale(Complex64::new(0.5, -1.0));
        let nn = monte_carlo_inner_product(&lump, PI / 4.0, &phi, &phi, None, 50_000, 3).unwrap();
        assert!(nn.re > 0.0 && nn.im.abs() < 1e-12 * nn.re);
    }

    #[test]
    fn default_cut_sits_40_nats_down() {
        let lump = builtin(Builtin::Lump).unwrap();
        let r = default_r_cut(&lump, PI / 4.0, 0.0).unwrap();
        // Tail slope −4 from e^{−2y} in d(f'³) and e^{−y π/2ħ} = e^{−2y}.
        assert!(r > 8.0 && r < 15.0, "{r}");
    }

    #[test]
    fn gram_difference_is_noise() {
        let lump = builtin(Builtin::Lump).unwrap();
        let basis = basis_h_poly(1);
        let x = LieAlgPair::from_components([0.3, -0.5, 0.8], [0.1, 0.4, -0.2]);
        let g = gram_hermiticity(&lump, PI / 4.0, &basis, &x, None, 200_000, 7).unwrap();
        assert!(g.within(3.0), "{g:?}");
    }
}
