//! Recursion relations among the irregular solid harmonics V_lm, ladder
//! operators for Y_lm, and radial derivative relations, each exposed as a
//! checkable residual.
//!
//! Out-of-range indices (|m| > l or l < 0) contribute zero to every
//! identity; this is consistent with the vanishing combinatorial
//! coefficients multiplying those terms.

use crate::harmonics::{eval_maxwell_vlm, eval_y, normalization_c, HarmonicIndex};
use crate::{Complex, Error, Result};

/// The six V_lm recursion identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecursionId {
    /// 2z V_lm = ξ V_{l,m-1} − 2(l−m) V_{l−1,m}
    Zv,
    /// 2η V_lm = −z V_{l,m-1} − (l+m−1) V_{l−1,m−1}
    EtaV,
    /// 2r² V_lm = −2(l−m) z V_{l−1,m} − (l+m−1) ξ V_{l−1,m−1}
    R2v,
    /// (2l+1) ξ V_lm = −2r² V_{l+1,m+1} + 2(l−m)(l−m−1) V_{l−1,m+1}
    XiStep,
    /// 2(2l+1) η V_lm = r² V_{l+1,m−1} − (l+m)(l+m−1) V_{l−1,m−1}
    EtaStep,
    /// (2l+1) z V_lm = −r² V_{l+1,m} − (l−m)(l+m) V_{l−1,m}
    ZStep,
}

impl RecursionId {
    pub const ALL: [RecursionId; 6] = [
        RecursionId::Zv,
        RecursionId::EtaV,
        RecursionId::R2v,
        RecursionId::XiStep,
        RecursionId::EtaStep,
        RecursionId::ZStep,
    ];

    /// Index range on which the identity holds. The three downward
    /// relations reduce V_lm to lower degrees; at m = −l every reduced
    /// term leaves the triangle while the left side survives, so those
    /// relations require m > −l (which also excludes l = 0).
    pub fn valid_for(self, idx: HarmonicIndex) -> bool {
        match self {
            RecursionId::Zv | RecursionId::EtaV | RecursionId::R2v => idx.m > -(idx.l as i32),
            _ => true,
        }
    }
}

/// V_{l,m} with out-of-range indices treated as zero.
fn v(l: i32, m: i32, r: [f64; 3]) -> Result<Complex> {
    if l < 0 || m.abs() > l {
        return Ok(Complex::new(0.0, 0.0));
    }
    eval_maxwell_vlm(HarmonicIndex::new(l as u32, m)?, r)
}

/// LHS − RHS of the chosen identity at a point, all V terms evaluated
/// directly. Also returns the magnitude scale of the largest term so
/// callers can form relative residuals.
pub fn recursion_residual_scaled(
    id: RecursionId,
    idx: HarmonicIndex,
    r: [f64; 3],
) -> Result<(Complex, f64)> {
    let rn2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    if rn2 == 0.0 {
        return Err(Error::Singularity("recursion residual at r = 0".into()));
    }
    if !id.valid_for(idx) {
        return Err(Error::Domain(format!(
            "{id:?} does not apply at l = {}, m = {}",
            idx.l, idx.m
        )));
    }
    let xi = Complex::new(r[0], r[1]);
    let eta = Complex::new(r[0], -r[1]);
    let z = Complex::new(r[2], 0.0);
    let l = idx.l as i32;
    let m = idx.m;
    let (lhs, rhs_terms): (Complex, Vec<Complex>) = match id {
        RecursionId::Zv => (
            2.0 * z * v(l, m, r)?,
            vec![xi * v(l, m - 1, r)?, -2.0 * (l - m) as f64 * v(l - 1, m, r)?],
        ),
        RecursionId::EtaV => (
            2.0 * eta * v(l, m, r)?,
            vec![
                -z * v(l, m - 1, r)?,
                -((l + m - 1) as f64) * v(l - 1, m - 1, r)?,
            ],
        ),
        RecursionId::R2v => (
            2.0 * rn2 * v(l, m, r)?,
            vec![
                -2.0 * (l - m) as f64 * z * v(l - 1, m, r)?,
                -((l + m - 1) as f64) * xi * v(l - 1, m - 1, r)?,
            ],
        ),
        RecursionId::XiStep => (
            (2 * l + 1) as f64 * xi * v(l, m, r)?,
            vec![
                -2.0 * rn2 * v(l + 1, m + 1, r)?,
                2.0 * ((l - m) * (l - m - 1)) as f64 * v(l - 1, m + 1, r)?,
            ],
        ),
        RecursionId::EtaStep => (
            2.0 * (2 * l + 1) as f64 * eta * v(l, m, r)?,
            vec![
                rn2 * v(l + 1, m - 1, r)?,
                -(((l + m) * (l + m - 1)) as f64) * v(l - 1, m - 1, r)?,
            ],
        ),
        RecursionId::ZStep => (
            (2 * l + 1) as f64 * z * v(l, m, r)?,
            vec![
                -rn2 * v(l + 1, m, r)?,
                -(((l - m) * (l + m)) as f64) * v(l - 1, m, r)?,
            ],
        ),
    };
    let rhs: Complex = rhs_terms.iter().sum();
    let scale = rhs_terms
        .iter()
        .map(|t| t.norm())
        .fold(lhs.norm(), f64::max)
        .max(f64::MIN_POSITIVE);
    Ok((lhs - rhs, scale))
}

/// LHS − RHS of the chosen identity at a point.
pub fn recursion_residual(id: RecursionId, idx: HarmonicIndex, r: [f64; 3]) -> Result<Complex> {
    recursion_residual_scaled(id, idx, r).map(|(res, _)| res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Raise,
    Lower,
}

/// Ladder coefficient and target index:
/// raise → sqrt((l−m)(l+m+1)) Y_{l,m+1}, lower → sqrt((l+m)(l−m+1)) Y_{l,m−1}.
/// The coefficient is zero exactly when the target leaves the triangle.
pub fn ladder_coefficient(
    direction: LadderDirection,
    idx: HarmonicIndex,
) -> (f64, HarmonicIndex) {
    let l = idx.l as i64;
    let m = idx.m as i64;
    let (prod, tm) = match direction {
        LadderDirection::Raise => ((l - m) * (l + m + 1), idx.m + 1),
        LadderDirection::Lower => ((l + m) * (l - m + 1), idx.m - 1),
    };
    if prod <= 0 {
        // annihilated at the end of the ladder; keep the source index
        return (0.0, idx);
    }
    (
        (prod as f64).sqrt(),
        HarmonicIndex { l: idx.l, m: tm },
    )
}

/// Residual of the differential ladder identity
/// e^{±iφ}(±∂θ + i cot θ ∂φ) Y_lm = coeff · Y_{l,m±1},
/// with the derivatives taken by central finite differences of step
/// `fd_step`. The residual is O(fd_step²) when the identity holds.
pub fn ladder_apply_check(
    direction: LadderDirection,
    idx: HarmonicIndex,
    theta: f64,
    phi: f64,
    fd_step: f64,
) -> Result<Complex> {
    if theta.min(std::f64::consts::PI - theta) < 10.0 * fd_step {
        return Err(Error::PoleProximity(theta));
    }
    let h = fd_step;
    // fourth-order five-point stencil keeps the truncation error far
    // below the advertised tolerance even at the highest degrees
    let d4 = |f: &dyn Fn(f64) -> Result<Complex>| -> Result<Complex> {
        Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
    };
    let dtheta = d4(&|dh| eval_y(idx, theta + dh, phi))?;
    let dphi = d4(&|dh| eval_y(idx, theta, phi + dh))?;
    let cot = theta.cos() / theta.sin();
    let (sign, phase) = match direction {
        LadderDirection::Raise => (1.0, Complex::from_polar(1.0, phi)),
        LadderDirection::Lower => (-1.0, Complex::from_polar(1.0, -phi)),
    };
    let applied = phase * (sign * dtheta + Complex::i() * cot * dphi);
    let (coeff, target) = ladder_coefficient(direction, idx);
    let expected = if coeff == 0.0 {
        Complex::new(0.0, 0.0)
    } else {
        coeff * eval_y(target, theta, phi)?
    };
    Ok(applied - expected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeAxis {
    Z,
    Eta,
    Xi,
}

/// z V_lm reduced to pure V terms.
fn zv_reduced(l: i32, m: i32, rn2: f64, r: [f64; 3]) -> Result<Complex> {
    Ok((-rn2 * v(l + 1, m, r)? - ((l - m) * (l + m)) as f64 * v(l - 1, m, r)?)
        / (2 * l + 1) as f64)
}

/// ξ V_lm reduced to pure V terms.
fn xiv_reduced(l: i32, m: i32, rn2: f64, r: [f64; 3]) -> Result<Complex> {
    Ok(
        (-2.0 * rn2 * v(l + 1, m + 1, r)?
            + 2.0 * ((l - m) * (l - m - 1)) as f64 * v(l - 1, m + 1, r)?)
            / (2 * l + 1) as f64,
    )
}

/// η V_lm reduced to pure V terms.
fn etav_reduced(l: i32, m: i32, rn2: f64, r: [f64; 3]) -> Result<Complex> {
    Ok(
        (rn2 * v(l + 1, m - 1, r)? - ((l + m) * (l + m - 1)) as f64 * v(l - 1, m - 1, r)?)
            / (2.0 * (2 * l + 1) as f64),
    )
}

const FD_STEP: f64 = 1e-5;

/// Residual between the analytic derivative of r^p V_lm along z, η or ξ
/// and a central-finite-difference evaluation of the same derivative.
///
/// The analytic side uses the chain rule with ∂r/∂z = z/r,
/// ∂r/∂η = ξ/(2r), ∂r/∂ξ = η/(2r) and the derivative relations
/// ∂V_lm/∂z = V_{l+1,m}, ∂V_lm/∂η = V_{l+1,m+1},
/// ∂V_lm/∂ξ = −V_{l+1,m−1}/4, then eliminates the z/ξ/η prefactors
/// through the step-up recursions.
pub fn radial_derivative_check(
    axis: DerivativeAxis,
    p: i32,
    idx: HarmonicIndex,
    r: [f64; 3],
) -> Result<Complex> {
    let rn2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    if rn2 == 0.0 {
        return Err(Error::Singularity("radial derivative at r = 0".into()));
    }
    let rn = rn2.sqrt();
    let l = idx.l as i32;
    let m = idx.m;
    let b = rn.powi(p); // B = r^p
    let bp_over_r = p as f64 * rn.powi(p - 2); // B'/r

    let analytic = match axis {
        DerivativeAxis::Z => {
            bp_over_r * zv_reduced(l, m, rn2, r)? + b * v(l + 1, m, r)?
        }
        DerivativeAxis::Eta => {
            0.5 * bp_over_r * xiv_reduced(l, m, rn2, r)? + b * v(l + 1, m + 1, r)?
        }
        DerivativeAxis::Xi => {
            0.5 * bp_over_r * etav_reduced(l, m, rn2, r)? - 0.25 * b * v(l + 1, m - 1, r)?
        }
    };

    let f = |pt: [f64; 3]| -> Result<Complex> {
        let n = (pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]).sqrt();
        Ok(n.powi(p) * v(l, m, pt)?)
    };
    let h = FD_STEP;
    let fd = |axis_idx: usize| -> Result<Complex> {
        let mut plus = r;
        let mut minus = r;
        plus[axis_idx] += h;
        minus[axis_idx] -= h;
        Ok((f(plus)? - f(minus)?) / (2.0 * h))
    };
    let numeric = match axis {
        DerivativeAxis::Z => fd(2)?,
        // ∂/∂η = (∂x + i ∂y)/2, ∂/∂ξ = (∂x − i ∂y)/2
        DerivativeAxis::Eta => 0.5 * (fd(0)? + Complex::i() * fd(1)?),
        DerivativeAxis::Xi => 0.5 * (fd(0)? - Complex::i() * fd(1)?),
    };
    Ok(analytic - numeric)
}

/// The consistency constant tying the V-ladder to the Y-ladder:
/// −√2 i (l−m) C_lm / C_{l,m+1} must equal i sqrt((l−m)(l+m+1)) / √2.
pub fn ladder_normalization_gap(l: u32, m: i32) -> f64 {
    let lhs = -(2f64.sqrt())
        * (l as i32 - m) as f64
        * normalization_c(HarmonicIndex { l, m })
        / normalization_c(HarmonicIndex { l, m: m + 1 });
    let rhs = (((l as i32 - m) * (l as i32 + m + 1)) as f64).sqrt() / 2f64.sqrt();
    let scale = rhs.abs().max(1.0);
    (lhs - rhs).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::Lcg;

    fn idx(l: u32, m: i32) -> HarmonicIndex {
        HarmonicIndex::new(l, m).unwrap()
    }

    fn random_point(rng: &mut Lcg) -> [f64; 3] {
        loop {
            let p = [
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
            ];
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if (0.5..2.0).contains(&n) {
                return p;
            }
        }
    }

    #[test]
    fn all_identities_small_cases() {
        // 2z V_10 = ξ V_{1,-1} − 2 V_00
        let p = [0.3, -0.4, 1.2];
        let res = recursion_residual(RecursionId::Zv, idx(1, 0), p).unwrap();
        assert!(res.norm() < 1e-12, "{res}");

        // Z_STEP at (0,0) reduces to z/r = z/r
        let res = recursion_residual(RecursionId::ZStep, idx(0, 0), p).unwrap();
        assert!(res.norm() < 1e-14, "{res}");
    }

    #[test]
    fn xi_step_random_points() {
        let mut rng = Lcg::new(61);
        for _ in 0..50 {
            let p = random_point(&mut rng);
            let (res, scale) =
                recursion_residual_scaled(RecursionId::XiStep, idx(3, 1), p).unwrap();
            assert!(res.norm() / scale < 1e-11, "{res} at {p:?}");
        }
    }

    #[test]
    fn all_identities_all_indices() {
        let mut rng = Lcg::new(67);
        for id in RecursionId::ALL {
            for l in 0..=8u32 {
                for m in -(l as i32)..=l as i32 {
                    if !id.valid_for(idx(l, m)) {
                        assert!(recursion_residual_scaled(id, idx(l, m), [1.0, 0.0, 0.0]).is_err());
                        continue;
                    }
                    for _ in 0..25 {
                        let p = random_point(&mut rng);
                        let (res, scale) =
                            recursion_residual_scaled(id, idx(l, m), p).unwrap();
                        assert!(
                            res.norm() / scale < 1e-10,
                            "{id:?} l = {l}, m = {m}: {} at {p:?}",
                            res.norm() / scale
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_coefficients() {
        let (c, _) = ladder_coefficient(LadderDirection::Raise, idx(1, 0));
        assert!((c - 2f64.sqrt()).abs() < 1e-15);
        let (c, t) = ladder_coefficient(LadderDirection::Raise, idx(5, 5));
        assert_eq!(c, 0.0);
        assert_eq!(t, idx(5, 5));
        let (c, _) = ladder_coefficient(LadderDirection::Lower, idx(2, -2));
        assert_eq!(c, 0.0);

        // round trip lower(raise(...)) = (l−m)(l+m+1), exactly in integers
        for l in 0..=12i64 {
            for m in -l..l {
                let (up, tu) = ladder_coefficient(
                    LadderDirection::Raise,
                    idx(l as u32, m as i32),
                );
                let (down, _) = ladder_coefficient(LadderDirection::Lower, tu);
                let prod_check = (l - m) * (l + m + 1);
                assert_eq!((up * down).round() as i64, prod_check);
            }
        }
    }

    #[test]
    fn ladder_normalization_consistency() {
        for l in 0..=20u32 {
            for m in -(l as i32)..l as i32 {
                assert!(
                    ladder_normalization_gap(l, m) < 1e-13,
                    "l = {l}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn ladder_differential_identity() {
        let res = ladder_apply_check(LadderDirection::Raise, idx(1, 0), 1.0, 0.7, 1e-4).unwrap();
        assert!(res.norm() < 1e-7, "{res}");

        let res = ladder_apply_check(LadderDirection::Lower, idx(2, 1), 2.0, 0.3, 1e-4).unwrap();
        assert!(res.norm() < 1e-7, "{res}");

        // annihilation at the top rung
        let res = ladder_apply_check(LadderDirection::Raise, idx(3, 3), 1.3, -0.8, 1e-4).unwrap();
        assert!(res.norm() < 1e-7, "{res}");

        // pole rejection
        assert!(matches!(
            ladder_apply_check(LadderDirection::Raise, idx(1, 0), 1e-5, 0.0, 1e-4),
            Err(Error::PoleProximity(_))
        ));

        let mut rng = Lcg::new(71);
        for l in 0..=6u32 {
            for m in -(l as i32)..=l as i32 {
                for dir in [LadderDirection::Raise, LadderDirection::Lower] {
                    let theta = rng.uniform(0.4, 2.7);
                    let phi = rng.uniform(0.0, 6.2);
                    let res = ladder_apply_check(dir, idx(l, m), theta, phi, 1e-4).unwrap();
                    assert!(res.norm() < 1e-7, "{dir:?} l = {l}, m = {m}: {res}");
                }
            }
        }
    }

    #[test]
    fn derivative_of_inverse_r_is_v10() {
        // ∂(1/r)/∂z = V_10 with B = r^0
        let mut rng = Lcg::new(73);
        for _ in 0..10 {
            let p = random_point(&mut rng);
            let res = radial_derivative_check(DerivativeAxis::Z, 0, idx(0, 0), p).unwrap();
            assert!(res.norm() < 1e-7, "{res}");
        }
    }

    #[test]
    fn radial_derivatives_match_finite_differences() {
        let mut rng = Lcg::new(79);
        for axis in [DerivativeAxis::Z, DerivativeAxis::Eta, DerivativeAxis::Xi] {
            for p_pow in [-1, 0, 2, 3] {
                for l in 0..=4u32 {
                    for m in -(l as i32)..=l as i32 {
                        let pt = random_point(&mut rng);
                        let res =
                            radial_derivative_check(axis, p_pow, idx(l, m), pt).unwrap();
                        assert!(
                            res.norm() < 1e-6,
                            "{axis:?} p = {p_pow}, l = {l}, m = {m}: {}",
                            res.norm()
                        );
                    }
                }
            }
        }
        // the two quoted cases at tighter tolerance
        let pt = [0.8, 0.33, -0.51];
        let res = radial_derivative_check(DerivativeAxis::Eta, 2, idx(1, 1), pt).unwrap();
        assert!(res.norm() < 1e-7, "{res}");
        let res = radial_derivative_check(DerivativeAxis::Xi, 0, idx(1, 0), pt).unwrap();
        assert!(res.norm() < 1e-7, "{res}");
    }
}
