//! The harmonic value layer: standard `Y_lm`, regular/irregular solid
//! harmonics, Maxwell harmonics with arbitrary poles, and the null-vector
//! generating expansion.
//!
//! Two independent routes to the same functions coexist here. The fast
//! production path evaluates `Y_lm` and `V_lm` through Legendre
//! recurrences; the Maxwell engine builds the identical objects by taking
//! exact directional derivatives of `1/r` and serves as the oracle.

use std::f64::consts::PI;

use crate::polynom::{ComplexVec3, HomogeneousPoly};
use crate::specfun::{factorial, legendre_dm, ln_factorial};
use crate::{Complex, Error, Result};

/// Pair (l, m) with |m| <= l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            Err(Error::IndexOutOfRange { l, m })
        } else {
            Ok(Self { l, m })
        }
    }
}

/// An l-fold directional derivative of 1/r, stored as the exact polynomial
/// numerator of V_l(r) = numerator(r) / r^{2l+1}.
#[derive(Debug, Clone)]
pub struct MaxwellHarmonic {
    l: u32,
    numerator: HomogeneousPoly,
}

impl MaxwellHarmonic {
    /// The seed 1/r (zero poles; numerator 1).
    pub fn seed() -> Self {
        Self {
            l: 0,
            numerator: HomogeneousPoly::constant(Complex::new(1.0, 0.0)),
        }
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn numerator(&self) -> &HomogeneousPoly {
        &self.numerator
    }

    /// One more directional derivative along `e` (the pole direction).
    ///
    /// With V_l = P/r^{2l+1}, the derivative (e·nabla)V_l has numerator
    /// r²(e·nabla)P − (2l+1)(e·r)P of degree l+1. Pole order is
    /// immaterial because mixed partial derivatives commute.
    pub fn apply_pole(&self, e: &ComplexVec3) -> Self {
        let r2 = HomogeneousPoly::monomial([2, 0, 0], Complex::new(1.0, 0.0))
            .add(&HomogeneousPoly::monomial([0, 2, 0], Complex::new(1.0, 0.0)))
            .add(&HomogeneousPoly::monomial([0, 0, 2], Complex::new(1.0, 0.0)));
        let er = {
            let mut p = HomogeneousPoly::zero(1);
            p = p.add(&HomogeneousPoly::monomial([1, 0, 0], e.x));
            p = p.add(&HomogeneousPoly::monomial([0, 1, 0], e.y));
            p = p.add(&HomogeneousPoly::monomial([0, 0, 1], e.z));
            p
        };
        let scale = -((2 * self.l + 1) as f64);
        let numerator = r2
            .mul(&self.numerator.dir_derivative(e))
            .add(&er.mul(&self.numerator).scale(Complex::new(scale, 0.0)));
        Self {
            l: self.l + 1,
            numerator,
        }
    }

    /// The zonal harmonic of degree l: all poles along `e`.
    pub fn zonal(l: u32, e: &ComplexVec3) -> Self {
        let mut v = Self::seed();
        for _ in 0..l {
            v = v.apply_pole(e);
        }
        v
    }

    /// Evaluate V_l = numerator/r^{2l+1} at a real point.
    pub fn eval(&self, r: [f64; 3]) -> Result<Complex> {
        let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if rn == 0.0 {
            return Err(Error::Singularity("Maxwell harmonic at r = 0".into()));
        }
        Ok(self.numerator.eval_real(r) / rn.powi(2 * self.l as i32 + 1))
    }
}

/// Normalization constant C_lm linking Y_lm = C_lm r^{l+1} V_lm.
///
/// The single expression below is valid for either sign of m and
/// reproduces C_{l,-m} = C_{lm}/4^m.
pub fn normalization_c(idx: HarmonicIndex) -> f64 {
    let l = idx.l as i32;
    let m = idx.m;
    let sign = if (l + m) % 2 == 0 { 1.0 } else { -1.0 };
    let ln_mag = 0.5 * ((2 * idx.l + 1) as f64 / (4.0 * PI)).ln() + m as f64 * 2f64.ln()
        - 0.5 * (ln_factorial((l + m) as u32) + ln_factorial((l - m) as u32));
    sign * ln_mag.exp()
}

/// Standard surface harmonic Y_lm(θ, φ).
///
/// Positive m is evaluated directly from the m-th derivative of the
/// Legendre polynomial; negative m through Y_{l,-m} = (-1)^m conj(Y_lm).
pub fn eval_y(idx: HarmonicIndex, theta: f64, phi: f64) -> Result<Complex> {
    if idx.m < 0 {
        let pos = HarmonicIndex::new(idx.l, -idx.m)?;
        let v = eval_y(pos, theta, phi)?;
        let sign = if idx.m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * v.conj());
    }
    let (l, m) = (idx.l, idx.m as u32);
    if m > l {
        return Err(Error::IndexOutOfRange { l, m: idx.m });
    }
    let st = theta.sin();
    if st.abs() < 1e-14 && m >= 1 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let mu = theta.cos();
    let dmp = legendre_dm(l, m, mu)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (((2 * l + 1) as f64) / (4.0 * PI)).sqrt()
        * (0.5 * (ln_factorial(l - m) - ln_factorial(l + m))).exp();
    let amp = sign * norm * st.powi(m as i32) * dmp;
    Ok(amp * Complex::from_polar(1.0, m as f64 * phi))
}

/// Regular (r^l Y_lm) or irregular (Y_lm / r^{l+1}) solid harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolidKind {
    Regular,
    Irregular,
}

pub fn eval_solid(kind: SolidKind, idx: HarmonicIndex, r: [f64; 3]) -> Result<Complex> {
    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if rn == 0.0 {
        return match kind {
            SolidKind::Regular if idx.l == 0 => {
                Ok(Complex::new(1.0 / (4.0 * PI).sqrt(), 0.0))
            }
            SolidKind::Regular => Ok(Complex::new(0.0, 0.0)),
            SolidKind::Irregular => {
                Err(Error::Singularity("irregular solid harmonic at r = 0".into()))
            }
        };
    }
    let theta = (r[2] / rn).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    let y = eval_y(idx, theta, phi)?;
    Ok(match kind {
        SolidKind::Regular => y * rn.powi(idx.l as i32),
        SolidKind::Irregular => y / rn.powi(idx.l as i32 + 1),
    })
}

/// Irregular solid harmonic V_lm by the closed Legendre form.
///
/// For m >= 0, V_lm = (-1)^l (l-m)! sin^mθ e^{imφ} (d^m P_l/dμ^m)
/// / (2^m r^{l+1}); negative m follows from
/// V_{l,-m} = (-1)^m 4^m conj(V_lm).
pub fn eval_maxwell_vlm(idx: HarmonicIndex, r: [f64; 3]) -> Result<Complex> {
    if idx.m < 0 {
        let pos = HarmonicIndex::new(idx.l, -idx.m)?;
        let v = eval_maxwell_vlm(pos, r)?;
        let mm = (-idx.m) as u32;
        let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * 4f64.powi(mm as i32) * v.conj());
    }
    let (l, m) = (idx.l, idx.m as u32);
    if m > l {
        return Err(Error::IndexOutOfRange { l, m: idx.m });
    }
    let rn = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if rn == 0.0 {
        return Err(Error::Singularity("V_lm at r = 0".into()));
    }
    let theta = (r[2] / rn).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    let st = theta.sin();
    if st.abs() < 1e-14 && m >= 1 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let mu = theta.cos();
    let dmp = legendre_dm(l, m, mu)?;
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let amp = sign * factorial(l - m) / (2f64.powi(m as i32) * rn.powi(l as i32 + 1))
        * st.powi(m as i32)
        * dmp;
    Ok(amp * Complex::from_polar(1.0, m as f64 * phi))
}

/// The Maxwell engine construction of V_lm (m >= 0): l−m poles along e_z
/// followed by m poles along (e_x + i e_y)/2, i.e. ∂/∂η with η = x − iy.
pub fn vlm_engine(l: u32, m: u32) -> Result<MaxwellHarmonic> {
    if m > l {
        return Err(Error::IndexOutOfRange { l, m: m as i32 });
    }
    let ez = ComplexVec3::from_real([0.0, 0.0, 1.0]);
    let deta = ComplexVec3::new(
        Complex::new(0.5, 0.0),
        Complex::new(0.0, 0.5),
        Complex::new(0.0, 0.0),
    );
    let mut v = MaxwellHarmonic::seed();
    for _ in 0..l - m {
        v = v.apply_pole(&ez);
    }
    for _ in 0..m {
        v = v.apply_pole(&deta);
    }
    Ok(v)
}

/// The regular solid harmonic r^l Y_lm as an exact harmonic polynomial:
/// C_lm times the engine numerator, conjugated for negative m.
pub fn regular_solid_poly(idx: HarmonicIndex) -> Result<HomogeneousPoly> {
    if idx.m < 0 {
        let pos = HarmonicIndex::new(idx.l, -idx.m)?;
        let p = regular_solid_poly(pos)?;
        let sign = if idx.m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(p.conj().scale(Complex::new(sign, 0.0)));
    }
    let engine = vlm_engine(idx.l, idx.m as u32)?;
    Ok(engine
        .numerator()
        .scale(Complex::new(normalization_c(idx), 0.0)))
}

/// Coefficients of Y_lm in the expansion of (b·r/r)^l over m = -l..l for a
/// null vector b; index 0 of the returned vector corresponds to m = -l.
///
/// coeff(m) = 2^{l/2} i^{l+m} l! sqrt(4π/(2l+1))
///            b_ξ^{(l-m)/2} b_η^{(l+m)/2} / sqrt((l+m)!(l-m)!),
/// with the square-root branches tied together by b_z = i sqrt(2 b_ξ b_η).
pub fn generating_coefficients(b: &ComplexVec3, l: u32) -> Result<Vec<Complex>> {
    b.require_null()?;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    // spherical components: b_xi = b·e_eta, b_eta = b·e_xi
    let b_xi = (b.x + Complex::i() * b.y) * inv_sqrt2;
    let b_eta = (b.x - Complex::i() * b.y) * inv_sqrt2;
    let b_z = b.z;
    let scale = b.norm_sqr().sqrt().max(f64::MIN_POSITIVE);
    // s² = b_xi, t² = b_eta, with the relative branch fixed by
    // b_z = i sqrt(2) s t; the overall (s,t) sign drops out since every
    // coefficient is of even total degree 2l in (s, t).
    let (s, t) = if b_xi.norm() >= 1e-14 * scale * scale {
        let s = b_xi.sqrt();
        (s, b_z / (Complex::i() * 2f64.sqrt() * s))
    } else {
        (Complex::new(0.0, 0.0), b_eta.sqrt())
    };
    let pref = 2f64.powf(l as f64 / 2.0) * factorial(l) * (4.0 * PI / (2 * l + 1) as f64).sqrt();
    let mut out = Vec::with_capacity(2 * l as usize + 1);
    for m in -(l as i32)..=l as i32 {
        let ip = Complex::i().powu((l as i32 + m).rem_euclid(4) as u32);
        let denom = (0.5 * (ln_factorial((l as i32 + m) as u32) + ln_factorial((l as i32 - m) as u32)))
            .exp();
        let val = pref * ip * s.powu((l as i32 - m) as u32) * t.powu((l as i32 + m) as u32) / denom;
        out.push(val);
    }
    Ok(out)
}
