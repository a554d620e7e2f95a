//! Wigner 3j symbols, Gaunt integrals of three surface harmonics, and the
//! closed-form triple product of simple null-vector harmonics.
//!
//! The alternating factorial sums are evaluated with log-magnitudes and
//! explicit signs, accumulating terms from largest to smallest to keep
//! cancellation under control.

use std::f64::consts::PI;

use crate::harmonics::HarmonicIndex;
use crate::polynom::ComplexVec3;
use crate::specfun::ln_factorial;
use crate::{Complex, Result};

/// Three harmonic indices (l_b, m_b), (l_c, m_c), (l_d, m_d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleIndex {
    pub b: HarmonicIndex,
    pub c: HarmonicIndex,
    pub d: HarmonicIndex,
}

impl TripleIndex {
    pub fn new(b: HarmonicIndex, c: HarmonicIndex, d: HarmonicIndex) -> Self {
        Self { b, c, d }
    }

    /// L = l_b + l_c + l_d.
    pub fn big_l(&self) -> i32 {
        (self.b.l + self.c.l + self.d.l) as i32
    }

    /// M = m_b + m_c + m_d.
    pub fn big_m(&self) -> i32 {
        self.b.m + self.c.m + self.d.m
    }

    /// λ_b = l_c + l_d − l_b and cyclic; nonnegative iff the triangle
    /// inequalities hold.
    pub fn lambdas(&self) -> [i32; 3] {
        let (lb, lc, ld) = (self.b.l as i32, self.c.l as i32, self.d.l as i32);
        [lc + ld - lb, ld + lb - lc, lb + lc - ld]
    }

    pub fn triangle_ok(&self) -> bool {
        self.lambdas().iter().all(|&x| x >= 0)
    }
}

/// True iff a Gaunt integral over the triple can be nonzero:
/// M = 0, triangle inequalities, and even total degree L.
pub fn selection_ok(t: &TripleIndex) -> bool {
    t.big_m() == 0 && t.triangle_ok() && t.big_l() % 2 == 0
}

/// ln Δ(l_b l_c l_d) = ln[λ_b! λ_c! λ_d! / (L+1)!].
fn ln_delta(t: &TripleIndex) -> f64 {
    let lam = t.lambdas();
    lam.iter().map(|&x| ln_factorial(x as u32)).sum::<f64>()
        - ln_factorial((t.big_l() + 1) as u32)
}

/// Wigner 3j symbol of the triple; zero when M ≠ 0 or the triangle
/// inequalities fail.
pub fn wigner_3j(t: &TripleIndex) -> f64 {
    if t.big_m() != 0 || !t.triangle_ok() {
        return 0.0;
    }
    let (lb, lc, ld) = (t.b.l as i32, t.c.l as i32, t.d.l as i32);
    let (mb, mc, md) = (t.b.m, t.c.m, t.d.m);

    // sqrt of Δ times the six (l ± m)! factors
    let ln_pref = 0.5
        * (ln_delta(t)
            + ln_factorial((lb + mb) as u32)
            + ln_factorial((lb - mb) as u32)
            + ln_factorial((lc + mc) as u32)
            + ln_factorial((lc - mc) as u32)
            + ln_factorial((ld + md) as u32)
            + ln_factorial((ld - md) as u32));
    let pref_sign = if (lb + lc - md).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    // k-sum: all k for which every factorial argument is nonnegative
    let a1 = lb + lc - ld; // k ≤ a1
    let a2 = lb - mb; // k ≤ a2
    let a3 = lc + mc; // k ≤ a3
    let b1 = ld - lc + mb; // k ≥ −b1
    let b2 = ld - lb - mc; // k ≥ −b2
    let k_lo = 0.max(-b1).max(-b2);
    let k_hi = a1.min(a2).min(a3);
    if k_lo > k_hi {
        return 0.0;
    }
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    for k in k_lo..=k_hi {
        let ln_mag = -(ln_factorial(k as u32)
            + ln_factorial((a1 - k) as u32)
            + ln_factorial((a2 - k) as u32)
            + ln_factorial((a3 - k) as u32)
            + ln_factorial((b1 + k) as u32)
            + ln_factorial((b2 + k) as u32));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push((ln_mag, sign));
    }
    // largest magnitudes first
    terms.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let ln_top = terms[0].0;
    let mut sum = 0.0;
    for (ln_mag, sign) in &terms {
        sum += sign * (ln_mag - ln_top).exp();
    }
    pref_sign * sum * (ln_pref + ln_top).exp()
}

/// Closed form for the all-zero-m 3j symbol:
/// (−1)^{L/2} sqrt(Δ) (L/2)! / ((λ_b/2)! (λ_c/2)! (λ_d/2)!), zero for odd
/// L or a triangle violation.
pub fn wigner_3j_zero(lb: u32, lc: u32, ld: u32) -> f64 {
    let t = TripleIndex::new(
        HarmonicIndex { l: lb, m: 0 },
        HarmonicIndex { l: lc, m: 0 },
        HarmonicIndex { l: ld, m: 0 },
    );
    if !selection_ok(&t) {
        return 0.0;
    }
    let big_l = t.big_l();
    let lam = t.lambdas();
    let sign = if (big_l / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let ln_mag = 0.5 * ln_delta(&t) + ln_factorial((big_l / 2) as u32)
        - lam.iter().map(|&x| ln_factorial((x / 2) as u32)).sum::<f64>();
    sign * ln_mag.exp()
}

/// Gaunt integral ∫ dΩ Y_{lb mb} Y_{lc mc} Y_{ld md}.
pub fn gaunt(t: &TripleIndex) -> f64 {
    if !selection_ok(t) {
        return 0.0;
    }
    let norm = (((2 * t.b.l + 1) * (2 * t.c.l + 1) * (2 * t.d.l + 1)) as f64 / (4.0 * PI)).sqrt();
    norm * wigner_3j_zero(t.b.l, t.c.l, t.d.l) * wigner_3j(t)
}

/// Sphere integral of the product of three simple null-vector surface
/// harmonics (b·e)^{lb} (c·e)^{lc} (d·e)^{ld}:
///
/// I = 4π 2^{L/2} (L/2)! lb! lc! ld!
///     (c·d)^{λ_b/2} (b·c)^{λ_d/2} (b·d)^{λ_c/2}
///     / ((L+1)! (λ_b/2)! (λ_c/2)! (λ_d/2)!),
/// zero unless every λ is even and nonnegative.
pub fn triple_product_simple(
    b: &ComplexVec3,
    c: &ComplexVec3,
    d: &ComplexVec3,
    lb: u32,
    lc: u32,
    ld: u32,
) -> Result<Complex> {
    b.require_null()?;
    c.require_null()?;
    d.require_null()?;
    let lam_b = lc as i32 + ld as i32 - lb as i32;
    let lam_c = ld as i32 + lb as i32 - lc as i32;
    let lam_d = lb as i32 + lc as i32 - ld as i32;
    if lam_b < 0 || lam_c < 0 || lam_d < 0 || lam_b % 2 != 0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    // λ_b even and triangle satisfied implies λ_c, λ_d even too when L is;
    // parity of all three λ matches parity of L
    if lam_c % 2 != 0 || lam_d % 2 != 0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let big_l = (lb + lc + ld) as i32;
    let ln_mag = (big_l / 2) as f64 * 2f64.ln()
        + ln_factorial((big_l / 2) as u32)
        + ln_factorial(lb)
        + ln_factorial(lc)
        + ln_factorial(ld)
        - ln_factorial((big_l + 1) as u32)
        - ln_factorial((lam_b / 2) as u32)
        - ln_factorial((lam_c / 2) as u32)
        - ln_factorial((lam_d / 2) as u32);
    let scalar = 4.0 * PI * ln_mag.exp();
    Ok(scalar
        * c.dot(d).powu((lam_b / 2) as u32)
        * b.dot(c).powu((lam_d / 2) as u32)
        * b.dot(d).powu((lam_c / 2) as u32))
}
