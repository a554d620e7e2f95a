//! Scalar special functions: Legendre polynomials and their derivatives,
//! the `s_l` kernel, spherical Bessel and Hankel functions, and the
//! factorial machinery shared by the other modules.

use std::sync::OnceLock;

use crate::{Complex, Error, Result};

const MU_DOMAIN_SLACK: f64 = 1e-12;

/// Largest n with n! exactly representable in i64 (20! < 2^63).
const MAX_EXACT_FACTORIAL: u32 = 20;
const LN_FACTORIAL_TABLE_LEN: usize = 1024;

/// n! as f64; exact through 20!, via the log table beyond.
pub fn factorial(n: u32) -> f64 {
    if n <= MAX_EXACT_FACTORIAL {
        let mut f: i64 = 1;
        for k in 2..=n as i64 {
            f *= k;
        }
        f as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// ln(n!), table-backed so factorial ratios can be formed in log space.
pub fn ln_factorial(n: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACTORIAL_TABLE_LEN];
        for k in 2..LN_FACTORIAL_TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    });
    table[n as usize]
}

/// Double factorial of odd arguments: (2m-1)!! with the convention (-1)!! = 1.
pub fn double_factorial_odd(m: u32) -> f64 {
    let mut f = 1.0;
    let mut k = 1;
    while k <= 2 * m as i64 - 1 {
        f *= k as f64;
        k += 2;
    }
    f
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.abs() > 1.0 + MU_DOMAIN_SLACK {
        Err(Error::Domain(format!("|mu| = {} > 1", mu.abs())))
    } else {
        Ok(())
    }
}

/// Legendre polynomial P_l(mu) by the upward three-term recurrence.
pub fn legendre_p(l: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let mut p_prev = 1.0;
    if l == 0 {
        return Ok(p_prev);
    }
    let mut p = mu;
    for k in 1..l {
        let k = k as f64;
        let p_next = ((2.0 * k + 1.0) * mu * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = p_next;
    }
    Ok(p)
}

/// m-th derivative d^m P_l / d mu^m.
///
/// Built from the three-term recurrence differentiated m times:
/// (l+1) D^m P_{l+1} = (2l+1)(mu D^m P_l + m D^{m-1} P_l) - l D^m P_{l-1}.
pub fn legendre_dm(l: u32, m: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    assert!(m <= l, "legendre_dm requires m <= l (got l = {l}, m = {m})");
    if m == 0 {
        return legendre_p(l, mu);
    }
    // rows[j][k] = d^j P_k / d mu^j for the current and previous order j.
    let n = l as usize + 1;
    let mut prev = vec![0.0; n];
    for k in 0..n {
        prev[k] = legendre_p(k as u32, mu)?;
    }
    let mut cur = vec![0.0; n];
    for j in 1..=m as usize {
        for k in cur.iter_mut() {
            *k = 0.0;
        }
        if j < n {
            // D^j P_j = (2j-1)!!
            cur[j] = double_factorial_odd(j as u32);
        }
        for k in j..n - 1 {
            let kf = k as f64;
            cur[k + 1] = ((2.0 * kf + 1.0) * (mu * cur[k] + j as f64 * prev[k])
                - kf * cur[k - 1])
                / (kf + 1.0);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[l as usize])
}

/// The kernel s_l(zeta) = sum_{j>=l} 2^l j!/(j-l)! zeta^{2(j-l)}/(2j+1)!,
/// taken as a function of zeta^2 since only even powers appear.
pub fn s_kernel(l: u32, zeta2: Complex) -> Complex {
    // leading term j = l: 2^l l!/(2l+1)!, formed in log space
    let lf = l as f64;
    let ln_lead = lf * std::f64::consts::LN_2 + ln_factorial(l) - ln_factorial(2 * l + 1);
    let mut term = Complex::new(ln_lead.exp(), 0.0);
    let mut sum = term;
    let mut j = l as f64;
    loop {
        // term ratio from j to j+1
        term *= zeta2 * ((j + 1.0) / ((j + 1.0 - lf) * (2.0 * j + 2.0) * (2.0 * j + 3.0)));
        sum += term;
        j += 1.0;
        if term.norm() < 1e-18 * sum.norm() || j > 500.0 {
            break;
        }
    }
    sum
}

/// Spherical Bessel function j_l(zeta) = zeta^l s_l(i zeta).
///
/// Small arguments go through the `s_kernel` series; for zeta > l + 2 the
/// series cancels badly and a downward (Miller) recurrence is used instead.
pub fn sph_bessel_j(l: u32, zeta: f64) -> f64 {
    if zeta == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let az = zeta.abs();
    if az <= l as f64 + 2.0 {
        let s = s_kernel(l, Complex::new(-zeta * zeta, 0.0));
        return zeta.powi(l as i32) * s.re;
    }
    // Miller downward recurrence
    let start = (l + 20 + az as u32).max(l + 20);
    let mut jp = 0.0f64;
    let mut jc = 1e-300f64;
    let mut out = if start == l { jc } else { 0.0 };
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    for n in (1..=start).rev() {
        let jm = (2.0 * n as f64 + 1.0) / zeta * jc - jp;
        jp = jc;
        jc = jm;
        if n - 1 == l {
            out = jc;
        }
        if n - 1 == 1 {
            j1 = jc;
        }
        if n - 1 == 0 {
            j0 = jc;
        }
        // rescale to avoid overflow
        if jc.abs() > 1e250 {
            let scale = 1e-250;
            jp *= scale;
            jc *= scale;
            out *= scale;
            j0 *= scale;
            j1 *= scale;
        }
    }
    let (s, c) = zeta.sin_cos();
    let true0 = s / zeta;
    let true1 = s / (zeta * zeta) - c / zeta;
    // normalize against whichever reference value is better conditioned
    if j0.abs() >= j1.abs() {
        out * true0 / j0
    } else {
        out * true1 / j1
    }
}

/// Spherical Bessel function of the second kind, via the stable upward
/// recurrence. Internal; exposed only through the Hankel combination.
fn sph_bessel_y(l: u32, zeta: f64) -> f64 {
    let (s, c) = zeta.sin_cos();
    let y0 = -c / zeta;
    if l == 0 {
        return y0;
    }
    let y1 = -c / (zeta * zeta) - s / zeta;
    let mut yp = y0;
    let mut yc = y1;
    for n in 1..l {
        let yn = (2.0 * n as f64 + 1.0) / zeta * yc - yp;
        yp = yc;
        yc = yn;
    }
    yc
}

/// Spherical Hankel function of the first kind, h^(1)_l = j_l + i y_l.
pub fn sph_hankel1(l: u32, zeta: f64) -> Result<Complex> {
    if zeta == 0.0 {
        return Err(Error::Singularity("h1_l diverges at zeta = 0".into()));
    }
    Ok(Complex::new(sph_bessel_j(l, zeta), sph_bessel_y(l, zeta)))
}
