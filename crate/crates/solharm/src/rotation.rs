//! Wigner rotation matrices for integer degree, parametrized by the
//! spinor pair (c, d) instead of angles.
//!
//! The pair can be produced from Euler angles or read off directly from
//! dot products between two orthonormal frames, which makes the whole
//! rotation apparatus coordinate-free: no angles ever need to be
//! extracted from a rotation matrix.

use crate::harmonics::{eval_y, HarmonicIndex};
use crate::quadrature::SHCoefficients;
use crate::specfun::ln_factorial;
use crate::{Complex, Error, Result};

const FRAME_TOL: f64 = 1e-12;
/// Dot products smaller than this (in magnitude) are treated as exact
/// zeros before taking square roots.
const CLAMP_TOL: f64 = 1e-14;

/// A right-handed orthonormal triad of real unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub ex: [f64; 3],
    pub ey: [f64; 3],
    pub ez: [f64; 3],
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Frame {
    pub fn new(ex: [f64; 3], ey: [f64; 3], ez: [f64; 3]) -> Result<Self> {
        for (name, v) in [("ex", ex), ("ey", ey), ("ez", ez)] {
            let n = dot(v, v).sqrt();
            if (n - 1.0).abs() > FRAME_TOL {
                return Err(Error::InvalidFrame(format!("{name} is not unit: |v| = {n}")));
            }
        }
        if dot(ex, ey).abs() > FRAME_TOL
            || dot(ey, ez).abs() > FRAME_TOL
            || dot(ez, ex).abs() > FRAME_TOL
        {
            return Err(Error::InvalidFrame("axes are not orthogonal".into()));
        }
        let c = cross(ex, ey);
        if (c[0] - ez[0]).abs() > FRAME_TOL
            || (c[1] - ez[1]).abs() > FRAME_TOL
            || (c[2] - ez[2]).abs() > FRAME_TOL
        {
            return Err(Error::InvalidFrame(
                "left-handed triad: ez != ex × ey".into(),
            ));
        }
        Ok(Self { ex, ey, ez })
    }

    pub fn standard() -> Self {
        Self {
            ex: [1.0, 0.0, 0.0],
            ey: [0.0, 1.0, 0.0],
            ez: [0.0, 0.0, 1.0],
        }
    }

    /// Frame obtained by rotating the standard frame by z-y'-z'' Euler
    /// angles: R = R_z(α) R_y(β) R_z(γ).
    pub fn from_euler(ang: EulerAngles) -> Self {
        let (sa, ca) = ang.alpha.sin_cos();
        let (sb, cb) = ang.beta.sin_cos();
        let (sg, cg) = ang.gamma.sin_cos();
        // columns of R_z(α) R_y(β) R_z(γ)
        let ex = [
            ca * cb * cg - sa * sg,
            sa * cb * cg + ca * sg,
            -sb * cg,
        ];
        let ey = [
            -ca * cb * sg - sa * cg,
            -sa * cb * sg + ca * cg,
            sb * sg,
        ];
        let ez = [ca * sb, sa * sb, cb];
        Self { ex, ey, ez }
    }

    /// Image of r under the rotation taking the standard frame into this
    /// one: the vector whose components in this frame equal r's
    /// components in the standard frame.
    pub fn image_of(&self, r: [f64; 3]) -> [f64; 3] {
        [
            r[0] * self.ex[0] + r[1] * self.ey[0] + r[2] * self.ez[0],
            r[0] * self.ex[1] + r[1] * self.ey[1] + r[2] * self.ez[1],
            r[0] * self.ex[2] + r[1] * self.ey[2] + r[2] * self.ez[2],
        ]
    }
}

/// z-y'-z'' Euler angles, β ∈ [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Spinor parameters of a rotation: |c|² + |d|² = 1. The global sign
/// (c, d) → (−c, −d) is unobservable for integer degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorParams {
    pub c: Complex,
    pub d: Complex,
}

impl SpinorParams {
    pub fn new(c: Complex, d: Complex) -> Result<Self> {
        let n = c.norm_sqr() + d.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "spinor parameters not normalized: |c|²+|d|² = {n}"
            )));
        }
        Ok(Self { c, d })
    }

    pub fn identity() -> Self {
        Self {
            c: Complex::new(1.0, 0.0),
            d: Complex::new(0.0, 0.0),
        }
    }

    /// Parameters of the inverse rotation.
    pub fn inverse(&self) -> Self {
        // U⁻¹ = U† for U = [[c, -d*], [d, c*]]
        Self {
            c: self.c.conj(),
            d: -self.d,
        }
    }

    /// Parameters of the composite rotation "self after first": the SU(2)
    /// product U_self · U_first for U = [[c, −d], [conj d, conj c]].
    pub fn compose(&self, first: &SpinorParams) -> Self {
        Self {
            c: self.c * first.c - self.d * first.d.conj(),
            d: self.c * first.d + self.d * first.c.conj(),
        }
    }
}

/// c = e^{−i(α+γ)/2} cos(β/2), d = e^{i(γ−α)/2} sin(β/2).
pub fn cd_from_euler(ang: EulerAngles) -> SpinorParams {
    let half = ang.beta / 2.0;
    SpinorParams {
        c: Complex::from_polar(half.cos(), -(ang.alpha + ang.gamma) / 2.0),
        d: Complex::from_polar(half.sin(), (ang.gamma - ang.alpha) / 2.0),
    }
}

/// Spherical components (v_ξ, v_η, v_z) of a complex vector:
/// v_ξ = v·e_η = (v_x + i v_y)/√2, v_η = v·e_ξ = (v_x − i v_y)/√2.
pub fn spherical_components(v: &crate::polynom::ComplexVec3) -> (Complex, Complex, Complex) {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    (
        (v.x + Complex::i() * v.y) * inv_sqrt2,
        (v.x - Complex::i() * v.y) * inv_sqrt2,
        v.z,
    )
}

fn complex_frame_vector(f: &Frame, which: u8) -> [Complex; 3] {
    // e_ξ = (e_x − i e_y)/√2, e_η = (e_x + i e_y)/√2
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if which == 0 { -1.0 } else { 1.0 };
    let mut out = [Complex::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = Complex::new(f.ex[i], sign * f.ey[i]) * inv_sqrt2;
    }
    out
}

fn cdot(a: &[Complex; 3], b: &[Complex; 3]) -> Complex {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn clamp_small(z: Complex, scale: f64) -> Complex {
    if z.norm() < CLAMP_TOL * scale {
        Complex::new(0.0, 0.0)
    } else {
        z
    }
}

/// Spinor parameters of the rotation carrying `unprimed` into `primed`,
/// from frame dot products alone.
///
/// c² = e'_η·e_ξ and d² = −(e'_ξ·e_ξ); the relative square-root branch is
/// fixed by e'_η·e_z = −√2 c conj(d) (equivalently
/// e'_ξ·e_z = −√2 conj(c) d), and the residual global sign by
/// Re(c) ≥ 0, tie-broken by Im(c) ≥ 0 then Re(d) ≥ 0.
pub fn cd_from_frames(unprimed: &Frame, primed: &Frame) -> Result<SpinorParams> {
    let e_xi = complex_frame_vector(unprimed, 0);
    let ez = [
        Complex::new(unprimed.ez[0], 0.0),
        Complex::new(unprimed.ez[1], 0.0),
        Complex::new(unprimed.ez[2], 0.0),
    ];
    let ep_xi = complex_frame_vector(primed, 0);
    let ep_eta = complex_frame_vector(primed, 1);

    let c2 = clamp_small(cdot(&ep_eta, &e_xi), 1.0);
    let d2 = clamp_small(-cdot(&ep_xi, &e_xi), 1.0);
    let sqrt2 = std::f64::consts::SQRT_2;
    let (mut c, mut d) = if c2.norm() >= d2.norm() {
        let c = c2.sqrt();
        let d = (-(clamp_small(cdot(&ep_eta, &ez), 1.0)) / (sqrt2 * c)).conj();
        (c, d)
    } else {
        let d = d2.sqrt();
        let c = (-(clamp_small(cdot(&ep_xi, &ez), 1.0)) / (sqrt2 * d)).conj();
        (c, d)
    };
    // renormalize away quadrature roundoff
    let n = (c.norm_sqr() + d.norm_sqr()).sqrt();
    c /= n;
    d /= n;
    // canonical global sign
    let key = if c.re.abs() > CLAMP_TOL {
        c.re
    } else if c.im.abs() > CLAMP_TOL {
        c.im
    } else if d.re.abs() > CLAMP_TOL {
        d.re
    } else {
        d.im
    };
    if key < 0.0 {
        c = -c;
        d = -d;
    }
    SpinorParams::new(c, d)
}

/// Dense (2l+1)×(2l+1) rotation matrix; rows indexed by m' = −l..l,
/// columns by m = −l..l.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerD {
    pub l: u32,
    /// elements\[row m'+l\]\[col m+l\]
    pub elements: Vec<Vec<Complex>>,
}

impl WignerD {
    pub fn get(&self, mp: i32, m: i32) -> Complex {
        self.elements[(mp + self.l as i32) as usize][(m + self.l as i32) as usize]
    }
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (ln_factorial(n as u32) - ln_factorial(k as u32) - ln_factorial((n - k) as u32)).exp().round()
}

/// D^l_{m'm} as the degree-2l polynomial in (c, d, conj c, conj d):
/// sqrt((l−m)!(l+m)!/((l−m')!(l+m')!)) ×
/// Σ_k C(l−m', m−m'+k) C(l+m', k) (−1)^k
///     conj(d)^k conj(c)^{l+m'−k} c^{l−m−k} d^{m−m'+k}.
/// The transformation law Y_{lm'}(r') = Σ_m D^l_{m'm} Y_lm(r) fixes the
/// phase convention; no extra i-power factor survives it.
pub fn wigner_d(l: u32, p: &SpinorParams) -> WignerD {
    let li = l as i32;
    let n = (2 * l + 1) as usize;
    let mut elements = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for mp in -li..=li {
        for m in -li..=li {
            let norm = (0.5
                * (ln_factorial((li - m) as u32) + ln_factorial((li + m) as u32)
                    - ln_factorial((li - mp) as u32)
                    - ln_factorial((li + mp) as u32)))
            .exp();
            let k_lo = 0.max(mp - m);
            let k_hi = (li + mp).min(li - m);
            let mut sum = Complex::new(0.0, 0.0);
            for k in k_lo..=k_hi {
                let comb = binomial((li - mp) as i64, (m - mp + k) as i64)
                    * binomial((li + mp) as i64, k as i64);
                if comb == 0.0 {
                    continue;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let term = p.d.conj().powu(k as u32)
                    * p.c.conj().powu((li + mp - k) as u32)
                    * p.c.powu((li - m - k) as u32)
                    * p.d.powu((m - mp + k) as u32);
                sum += sign * comb * term;
            }
            elements[(mp + li) as usize][(m + li) as usize] = norm * sum;
        }
    }
    WignerD { l, elements }
}

/// Max-norm residual of the transformation law
/// Y_{lm'}(r') = Σ_m D^l_{m'm} Y_lm(r), where r' is the image of r under
/// the rotation carrying `unprimed` into `primed`.
pub fn rotate_values_check(
    l: u32,
    p: &SpinorParams,
    unprimed: &Frame,
    primed: &Frame,
    r: [f64; 3],
) -> Result<f64> {
    let d = wigner_d(l, p);
    // components of r in the unprimed frame, reassembled on the primed one
    let comps = [
        dot(r, unprimed.ex),
        dot(r, unprimed.ey),
        dot(r, unprimed.ez),
    ];
    let rp = [
        comps[0] * primed.ex[0] + comps[1] * primed.ey[0] + comps[2] * primed.ez[0],
        comps[0] * primed.ex[1] + comps[1] * primed.ey[1] + comps[2] * primed.ez[1],
        comps[0] * primed.ex[2] + comps[1] * primed.ey[2] + comps[2] * primed.ez[2],
    ];
    let sph = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        ((v[2] / n).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
    };
    let (t0, p0) = sph(r);
    let (t1, p1) = sph(rp);
    let li = l as i32;
    let mut worst: f64 = 0.0;
    for mp in -li..=li {
        let lhs = eval_y(HarmonicIndex::new(l, mp)?, t1, p1)?;
        let mut rhs = Complex::new(0.0, 0.0);
        for m in -li..=li {
            rhs += d.get(mp, m) * eval_y(HarmonicIndex::new(l, m)?, t0, p0)?;
        }
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Transform expansion coefficients so the reconstructed field rotates
/// with the frame: A'_{lm'} = Σ_m A_lm conj(D^l_{m'm}).
pub fn rotate_coefficients(coeffs: &SHCoefficients, p: &SpinorParams) -> Result<SHCoefficients> {
    let l_max = coeffs.l_max();
    let mut out = SHCoefficients::new(l_max);
    for l in 0..=l_max {
        let d = wigner_d(l, p);
        let li = l as i32;
        for mp in -li..=li {
            let mut sum = Complex::new(0.0, 0.0);
            for m in -li..=li {
                sum += coeffs.get(l, m) * d.get(mp, m).conj();
            }
            out.set(l, mp, sum)?;
        }
    }
    Ok(out)
}
