//! Deterministic sphere quadrature (Gauss–Legendre × uniform azimuth) and
//! the projection/reconstruction layer for surface-harmonic expansions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::harmonics::{eval_y, HarmonicIndex};
use crate::specfun::legendre_p;
use crate::{Complex, Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
///
/// Newton iteration on P_n from Chebyshev initial guesses; the standard
/// dependency-free construction, accurate to machine precision.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let p = legendre_p(n as u32, x).expect("node in range");
            let pm1 = legendre_p(n as u32 - 1, x).expect("node in range");
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Chebyshev guesses run from +1 toward -1; report ascending
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Product quadrature grid on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// (theta, phi, weight) per node; weights sum to 4π.
    pub nodes: Vec<(f64, f64, f64)>,
    /// Maximum total spherical-harmonic degree integrated exactly.
    pub exactness: u32,
}

/// Grid integrating all surface-harmonic products up to total degree
/// 2·l_max + 1 exactly: l_max + 1 Gauss–Legendre colatitudes times
/// 2·l_max + 2 uniform azimuths.
pub fn build_grid(l_max: u32) -> SphereGrid {
    let n_theta = l_max as usize + 1;
    let n_phi = 2 * l_max as usize + 2;
    let (mu, w) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = mu[i].clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            nodes.push((theta, j as f64 * dphi, w[i] * dphi));
        }
    }
    SphereGrid {
        n_theta,
        n_phi,
        nodes,
        exactness: 2 * l_max + 1,
    }
}

/// Pairwise (tree) summation: deterministic and accurate regardless of
/// evaluation order elsewhere.
pub(crate) fn pairwise_sum(values: &[Complex]) -> Complex {
    match values.len() {
        0 => Complex::new(0.0, 0.0),
        n if n <= 8 => {
            let mut s = Complex::new(0.0, 0.0);
            for v in values {
                s += v;
            }
            s
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Integrate f(θ, φ) over the sphere on the given grid.
pub fn integrate<F>(f: F, grid: &SphereGrid) -> Result<Complex>
where
    F: Fn(f64, f64) -> Complex,
{
    let mut terms = Vec::with_capacity(grid.nodes.len());
    for (i, &(theta, phi, w)) in grid.nodes.iter().enumerate() {
        let v = f(theta, phi);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(i));
        }
        terms.push(w * v);
    }
    Ok(pairwise_sum(&terms))
}

/// Truncated surface-harmonic coefficient set A_lm, 0 ≤ l ≤ l_max, |m| ≤ l.
#[derive(Debug, Clone, PartialEq)]
pub struct SHCoefficients {
    l_max: u32,
    entries: BTreeMap<(u32, i32), Complex>,
}

impl SHCoefficients {
    pub fn new(l_max: u32) -> Self {
        Self {
            l_max,
            entries: BTreeMap::new(),
        }
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn set(&mut self, l: u32, m: i32, value: Complex) -> Result<()> {
        if l > self.l_max || m.unsigned_abs() > l {
            return Err(Error::IndexOutOfRange { l, m });
        }
        self.entries.insert((l, m), value);
        Ok(())
    }

    pub fn get(&self, l: u32, m: i32) -> Complex {
        self.entries
            .get(&(l, m))
            .copied()
            .unwrap_or(Complex::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i32), &Complex)> {
        self.entries.iter()
    }
}

/// Project f onto surface harmonics: A_lm = ∫ dΩ f conj(Y_lm), using a
/// grid with a two-degree exactness margin.
pub fn project<F>(f: F, l_max: u32) -> Result<SHCoefficients>
where
    F: Fn(f64, f64) -> Complex,
{
    let grid = build_grid(l_max + 2);
    // evaluate f once per node, then reuse across all (l, m)
    let mut fv = Vec::with_capacity(grid.nodes.len());
    for (i, &(theta, phi, _)) in grid.nodes.iter().enumerate() {
        let v = f(theta, phi);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(i));
        }
        fv.push(v);
    }
    let mut coeffs = SHCoefficients::new(l_max);
    let mut terms = vec![Complex::new(0.0, 0.0); grid.nodes.len()];
    for l in 0..=l_max {
        for m in -(l as i32)..=l as i32 {
            let idx = HarmonicIndex::new(l, m)?;
            for (k, &(theta, phi, w)) in grid.nodes.iter().enumerate() {
                terms[k] = w * fv[k] * eval_y(idx, theta, phi)?.conj();
            }
            coeffs.set(l, m, pairwise_sum(&terms))?;
        }
    }
    Ok(coeffs)
}

/// Legendre coefficients B_l = (2l+1)/2 ∫ f(θ) P_l(cos θ) sin θ dθ of an
/// axisymmetric function, for l = 0..=l_max.
pub fn project_legendre<F>(f: F, l_max: u32) -> Result<Vec<Complex>>
where
    F: Fn(f64) -> Complex,
{
    let n = l_max as usize + 2;
    let (mu, w) = gauss_legendre(n);
    let mut fv = Vec::with_capacity(n);
    for (i, &m) in mu.iter().enumerate() {
        let v = f(m.clamp(-1.0, 1.0).acos());
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(i));
        }
        fv.push(v);
    }
    let mut out = Vec::with_capacity(l_max as usize + 1);
    let mut terms = vec![Complex::new(0.0, 0.0); n];
    for l in 0..=l_max {
        for i in 0..n {
            terms[i] = w[i] * fv[i] * legendre_p(l, mu[i])?;
        }
        out.push(pairwise_sum(&terms) * ((2 * l + 1) as f64 / 2.0));
    }
    Ok(out)
}

/// Partial sum Σ_{l,m} A_lm Y_lm(θ, φ).
pub fn reconstruct(coeffs: &SHCoefficients, theta: f64, phi: f64) -> Result<Complex> {
    let mut terms = Vec::with_capacity(coeffs.entries.len());
    for (&(l, m), &a) in coeffs.entries.iter() {
        terms.push(a * eval_y(HarmonicIndex::new(l, m)?, theta, phi)?);
    }
    Ok(pairwise_sum(&terms))
}
