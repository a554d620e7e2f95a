//! Seeded invariant suites shared by the command-line `check` verb and
//! the acceptance tests, plus the deterministic generator they draw from.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::coupling::{gaunt, selection_ok, triple_product_simple, TripleIndex};
use crate::expansions::{addition_theorem_check, hobson_lhs, hobson_rhs, maxwell_theorem_eval};
use crate::harmonics::{eval_y, HarmonicIndex};
use crate::polynom::{harmonic_basis, ComplexVec3, HomogeneousPoly, Polynomial};
use crate::quadrature::{build_grid, pairwise_sum};
use crate::recursion::{recursion_residual_scaled, RecursionId};
use crate::rotation::{
    cd_from_euler, cd_from_frames, rotate_values_check, wigner_d, EulerAngles, Frame,
};
use crate::{Complex, Error, Result};

/// 64-bit linear congruential generator. The constants are fixed as part
/// of the artifact contract so that residual suites reproduce bit-for-bit
/// across implementations.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

impl Lcg {
    pub fn new(seed: u64) -> Self {
        let mut rng = Self { state: seed };
        rng.next_u64(); // decorrelate small seeds
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform draw from [lo, hi) with 53 random bits.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    pub fn unit_vector(&mut self) -> [f64; 3] {
        loop {
            let v = [
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
            ];
            let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            if (0.04..1.0).contains(&n2) {
                let n = n2.sqrt();
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }
}

/// Named invariant suites exposed by the `check` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    Recursions,
    Addition,
    Rotation,
    Gaunt,
    Maxwell,
    Hobson,
}

impl SuiteId {
    pub const ALL: [SuiteId; 6] = [
        SuiteId::Recursions,
        SuiteId::Addition,
        SuiteId::Rotation,
        SuiteId::Gaunt,
        SuiteId::Maxwell,
        SuiteId::Hobson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Recursions => "recursions",
            SuiteId::Addition => "addition",
            SuiteId::Rotation => "rotation",
            SuiteId::Gaunt => "gaunt",
            SuiteId::Maxwell => "maxwell",
            SuiteId::Hobson => "hobson",
        }
    }

    /// Pass threshold on the suite's max residual.
    pub fn tolerance(self) -> f64 {
        match self {
            SuiteId::Recursions => 1e-10,
            SuiteId::Addition => 1e-12,
            SuiteId::Rotation => 1e-11,
            SuiteId::Gaunt => 1e-10,
            SuiteId::Maxwell => 1e-10,
            SuiteId::Hobson => 1e-10,
        }
    }

    pub fn run(self, l_max: u32, seed: u64) -> Result<SuiteReport> {
        let mut rng = Lcg::new(seed);
        let (max_residual, cases) = match self {
            SuiteId::Recursions => recursion_suite(l_max, &mut rng)?,
            SuiteId::Addition => addition_suite(l_max, &mut rng)?,
            SuiteId::Rotation => rotation_suite(l_max, &mut rng)?,
            SuiteId::Gaunt => gaunt_suite(l_max, &mut rng)?,
            SuiteId::Maxwell => maxwell_suite(l_max, &mut rng)?,
            SuiteId::Hobson => hobson_suite(l_max, &mut rng)?,
        };
        Ok(SuiteReport {
            suite: self,
            l_max,
            seed,
            max_residual,
            tolerance: self.tolerance(),
            cases,
        })
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub l_max: u32,
    pub seed: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual < self.tolerance
    }
}

/// Six three-term recursions at 25 random points per (id, l, m), plus the
/// negative-order conjugation rule for the surface harmonics.
fn recursion_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    let points: Vec<[f64; 3]> = (0..25)
        .map(|_| {
            let e = rng.unit_vector();
            let s = rng.uniform(0.5, 1.5);
            [s * e[0], s * e[1], s * e[2]]
        })
        .collect();
    for id in RecursionId::ALL {
        for l in 0..=l_max {
            for m in -(l as i32)..=l as i32 {
                let idx = HarmonicIndex::new(l, m)?;
                if !id.valid_for(idx) {
                    continue;
                }
                for &r in &points {
                    let (res, scale) = recursion_residual_scaled(id, idx, r)?;
                    worst = worst.max(res.norm() / scale.max(1e-300));
                    cases += 1;
                }
            }
        }
    }
    for l in 0..=l_max {
        for m in 1..=l as i32 {
            let theta = rng.uniform(0.1, PI - 0.1);
            let phi = rng.uniform(0.0, 2.0 * PI);
            let plus = eval_y(HarmonicIndex::new(l, m)?, theta, phi)?;
            let minus = eval_y(HarmonicIndex::new(l, -m)?, theta, phi)?;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            worst = worst.max((minus - sign * plus.conj()).norm() / plus.norm().max(1e-300));
            cases += 1;
        }
    }
    Ok((worst, cases))
}

/// Addition theorem over 100 random direction pairs, l ≤ l_max.
fn addition_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..100 {
        let e1 = rng.unit_vector();
        let e2 = rng.unit_vector();
        for l in 0..=l_max {
            let (lhs, rhs) = addition_theorem_check(l, e1, e2)?;
            worst = worst.max((lhs - rhs).abs());
            cases += 1;
        }
    }
    Ok((worst, cases))
}

/// D-matrix unitarity, value transformation at random points, and the
/// frame-pair spinor against the Euler-angle spinor (up to global sign).
fn rotation_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..20 {
        let ang = EulerAngles {
            alpha: rng.uniform(-PI, PI),
            beta: rng.uniform(0.0, PI),
            gamma: rng.uniform(-PI, PI),
        };
        let p = cd_from_euler(ang);
        let primed = Frame::from_euler(ang);
        let unprimed = Frame::standard();

        // D(p) D(p)† = 1
        for l in 0..=l_max {
            let d = wigner_d(l, &p);
            let dim = (2 * l + 1) as i32;
            for a in 0..dim {
                for b in 0..dim {
                    let mp = a - l as i32;
                    let m = b - l as i32;
                    let mut s = Complex::new(0.0, 0.0);
                    for k in -(l as i32)..=l as i32 {
                        s += d.get(mp, k) * d.get(m, k).conj();
                    }
                    let expect = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((s - expect).norm());
                }
            }
            cases += 1;

            let r = rng.unit_vector();
            worst = worst.max(rotate_values_check(l, &p, &unprimed, &primed, r)?);
            cases += 1;
        }

        // spinor from frames, up to the overall SU(2) sign
        let q = cd_from_frames(&unprimed, &primed)?;
        let same = (q.c - p.c).norm() + (q.d - p.d).norm();
        let flip = (q.c + p.c).norm() + (q.d + p.d).norm();
        worst = worst.max(same.min(flip));
        cases += 1;
    }
    Ok((worst, cases))
}

/// Every selection-passing Gaunt triple with degrees ≤ l_max against the
/// quadrature oracle, plus the null-vector triple product at low degree.
fn gaunt_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;

    // tabulate Y_lm on a shared grid once; each triple is then a
    // weighted dot product over the nodes
    let grid = build_grid(3 * l_max + 2);
    let mut table = Vec::new();
    for l in 0..=l_max {
        for m in -(l as i32)..=l as i32 {
            let idx = HarmonicIndex::new(l, m)?;
            let vals: Vec<Complex> = grid
                .nodes
                .iter()
                .map(|&(theta, phi, _)| eval_y(idx, theta, phi))
                .collect::<Result<_>>()?;
            table.push(((l, m), vals));
        }
    }
    let lookup = |l: u32, m: i32| -> &Vec<Complex> {
        &table
            .iter()
            .find(|((tl, tm), _)| *tl == l && *tm == m)
            .expect("tabulated")
            .1
    };

    for lb in 0..=l_max {
        for lc in 0..=l_max {
            for ld in 0..=l_max {
                for mb in -(lb as i32)..=lb as i32 {
                    for mc in -(lc as i32)..=lc as i32 {
                        let md = -mb - mc;
                        if md.unsigned_abs() > ld {
                            continue;
                        }
                        let t = TripleIndex::new(
                            HarmonicIndex::new(lb, mb)?,
                            HarmonicIndex::new(lc, mc)?,
                            HarmonicIndex::new(ld, md)?,
                        );
                        if !selection_ok(&t) {
                            continue;
                        }
                        let (yb, yc, yd) = (lookup(lb, mb), lookup(lc, mc), lookup(ld, md));
                        let terms: Vec<Complex> = grid
                            .nodes
                            .iter()
                            .enumerate()
                            .map(|(i, &(_, _, w))| w * yb[i] * yc[i] * yd[i])
                            .collect();
                        let quad = pairwise_sum(&terms);
                        worst = worst.max((gaunt(&t) - quad.re).abs().max(quad.im.abs()));
                        cases += 1;
                    }
                }
            }
        }
    }

    // triple product of powers of null-vector forms, degrees ≤ 3
    let tp_max = l_max.min(3);
    let pgrid = build_grid(3 * tp_max + 2);
    for _ in 0..5 {
        let nulls: Vec<ComplexVec3> = (0..3)
            .map(|_| random_null(rng))
            .collect();
        for lb in 1..=tp_max {
            for lc in 1..=tp_max {
                for ld in 1..=tp_max {
                    let lam_b = lc as i32 + ld as i32 - lb as i32;
                    let lam_c = ld as i32 + lb as i32 - lc as i32;
                    let lam_d = lb as i32 + lc as i32 - ld as i32;
                    if lam_b < 0 || lam_c < 0 || lam_d < 0 || lam_b % 2 != 0 {
                        continue;
                    }
                    let closed =
                        triple_product_simple(&nulls[0], &nulls[1], &nulls[2], lb, lc, ld)?;
                    let pb = HomogeneousPoly::pow_linear_form(&nulls[0], lb);
                    let pc = HomogeneousPoly::pow_linear_form(&nulls[1], lc);
                    let pd = HomogeneousPoly::pow_linear_form(&nulls[2], ld);
                    let terms: Vec<Complex> = pgrid
                        .nodes
                        .iter()
                        .map(|&(theta, phi, w)| {
                            let e = [
                                theta.sin() * phi.cos(),
                                theta.sin() * phi.sin(),
                                theta.cos(),
                            ];
                            w * pb.eval_real(e) * pc.eval_real(e) * pd.eval_real(e)
                        })
                        .collect();
                    let quad = pairwise_sum(&terms);
                    let scale = closed.norm().max(quad.norm()).max(1e-3);
                    worst = worst.max((closed - quad).norm() / scale);
                    cases += 1;
                }
            }
        }
    }
    Ok((worst, cases))
}

fn random_null(rng: &mut Lcg) -> ComplexVec3 {
    // b = u + iv with |u| = |v|, u ⊥ v is automatically null
    let u = rng.unit_vector();
    let mut v;
    loop {
        let w = rng.unit_vector();
        let d = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
        v = [w[0] - d * u[0], w[1] - d * u[1], w[2] - d * u[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.2 {
            v = [v[0] / n, v[1] / n, v[2] / n];
            break;
        }
    }
    let s = rng.uniform(0.5, 1.5);
    ComplexVec3::new(
        Complex::new(s * u[0], s * v[0]),
        Complex::new(s * u[1], s * v[1]),
        Complex::new(s * u[2], s * v[2]),
    )
}

/// Maxwell's integral theorem for random complex pole sets and random
/// harmonic polynomials, three sphere radii per degree.
fn maxwell_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for l in 0..=l_max {
        let basis = harmonic_basis(l);
        let mut phi = HomogeneousPoly::zero(l);
        for h in &basis {
            phi = phi.add(&h.scale(Complex::new(
                rng.uniform(-1.0, 1.0),
                rng.uniform(-1.0, 1.0),
            )));
        }
        let poles: Vec<ComplexVec3> = (0..l)
            .map(|_| {
                ComplexVec3::new(
                    Complex::new(rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3)),
                    Complex::new(rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3)),
                    Complex::new(rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3)),
                )
            })
            .collect();
        for a in [0.7, 1.0, 1.6] {
            let (lhs, rhs) = maxwell_theorem_eval(&poles, &phi, a)?;
            let scale = lhs.norm().max(rhs.norm()).max(1e-3);
            worst = worst.max((lhs - rhs).norm() / scale);
            cases += 1;
        }
    }
    Ok((worst, cases))
}

/// Hobson's closed form against sphere quadrature for random polynomials
/// of degree ≤ 6, harmonic factors of degree ≤ min(l_max, 4), three radii.
fn hobson_suite(l_max: u32, rng: &mut Lcg) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for k in 0..=l_max.min(4) {
        let basis = harmonic_basis(k);
        let pick = (rng.uniform(0.0, basis.len() as f64) as usize).min(basis.len() - 1);
        let hk = basis[pick].clone();
        for deg in 0..=6u32 {
            let mut f = Polynomial::zero();
            for d in (deg % 2..=deg).step_by(2) {
                let mut part = HomogeneousPoly::zero(d);
                for _ in 0..4 {
                    let i = rng.uniform(0.0, (d + 1) as f64) as u32;
                    let j = rng.uniform(0.0, (d + 1 - i) as f64) as u32;
                    part = part.add(&HomogeneousPoly::monomial(
                        [i.min(d), j.min(d - i.min(d)), d - i.min(d) - j.min(d - i.min(d))],
                        Complex::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
                    ));
                }
                f = f.add(&Polynomial::from_homogeneous(part));
            }
            if f.is_zero() {
                continue;
            }
            for big_r in [0.5, 1.0, 2.0] {
                let closed = hobson_rhs(&hk, &f, big_r)?;
                let quad = hobson_lhs(&hk, &f, big_r)?;
                let scale = closed.norm().max(quad.norm()).max(1e-3);
                worst = worst.max((closed - quad).norm() / scale);
                cases += 1;
            }
        }
    }
    Ok((worst, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcg_is_deterministic() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = Lcg::new(43);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn lcg_uniform_range() {
        let mut rng = Lcg::new(7);
        let mut lo_seen = f64::INFINITY;
        let mut hi_seen = f64::NEG_INFINITY;
        for _ in 0..10_000 {
            let x = rng.uniform(-2.0, 3.0);
            assert!((-2.0..3.0).contains(&x));
            lo_seen = lo_seen.min(x);
            hi_seen = hi_seen.max(x);
        }
        assert!(lo_seen < -1.9 && hi_seen > 2.9);
    }

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert!("bogus".parse::<SuiteId>().is_err());
    }

    #[test]
    fn suites_pass_at_desk_scale() {
        for (id, l_max) in [
            (SuiteId::Recursions, 4),
            (SuiteId::Addition, 6),
            (SuiteId::Rotation, 3),
            (SuiteId::Gaunt, 3),
            (SuiteId::Maxwell, 3),
            (SuiteId::Hobson, 3),
        ] {
            let report = id.run(l_max, 7).unwrap();
            assert!(
                report.passed(),
                "{id}: residual {} over {} cases",
                report.max_residual,
                report.cases
            );
            assert!(report.cases > 0);
            // same seed, same residual
            let again = id.run(l_max, 7).unwrap();
            assert_eq!(report.max_residual.to_bits(), again.max_residual.to_bits());
        }
    }
}
