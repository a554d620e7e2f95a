//! Acceptance criteria for the library, one test per criterion. Each test
//! prints a single pass/fail line with the observed worst residual and
//! the tolerance it is held to.

use std::f64::consts::PI;

use solharm::checks::{Lcg, SuiteId};
use solharm::expansions::{
    addition_theorem_check, direct_interaction_energy, image_charge, interaction_energy,
    multipole_moments, plane_wave_partial_sum, spherical_wave_partial_sum, MomentConvention,
    PointChargeSet,
};
use solharm::harmonics::{eval_y, HarmonicIndex};
use solharm::polynom::{harmonic_basis, harmonic_dimension, poly_rank};
use solharm::quadrature::build_grid;
use solharm::recursion::{ladder_apply_check, LadderDirection};
use solharm::rotation::{
    cd_from_euler, cd_from_frames, rotate_values_check, wigner_d, EulerAngles, Frame,
};
use solharm::Complex;

fn report(name: &str, residual: f64, tolerance: f64) {
    let verdict = if residual < tolerance { "PASS" } else { "FAIL" };
    println!("{verdict} {name}: max residual {residual:.3e} (tolerance {tolerance:.0e})");
    assert!(
        residual < tolerance,
        "{name}: residual {residual:.3e} exceeds {tolerance:.0e}"
    );
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[test]
fn criterion_01_orthonormality() {
    let l_max = 7u32;
    let grid = build_grid(10);
    // tabulate every Y_lm on the shared grid once
    let mut table = Vec::new();
    for l in 0..=l_max {
        for m in -(l as i32)..=l as i32 {
            let idx = HarmonicIndex::new(l, m).unwrap();
            let vals: Vec<Complex> = grid
                .nodes
                .iter()
                .map(|&(theta, phi, _)| eval_y(idx, theta, phi).unwrap())
                .collect();
            table.push(((l, m), vals));
        }
    }
    let mut worst = 0.0f64;
    for (i, ((la, ma), va)) in table.iter().enumerate() {
        for ((lb, mb), vb) in table.iter().skip(i) {
            let mut s = Complex::new(0.0, 0.0);
            for ((&(_, _, w), x), y) in grid.nodes.iter().zip(va).zip(vb) {
                s += w * x * y.conj();
            }
            let expect = if la == lb && ma == mb { 1.0 } else { 0.0 };
            worst = worst.max((s - expect).norm());
        }
    }
    report("orthonormality (l ≤ 7)", worst, 1e-12);
}

#[test]
fn criterion_02_addition_theorem() {
    let mut rng = Lcg::new(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let e1 = rng.unit_vector();
        let e2 = rng.unit_vector();
        for l in 0..=10 {
            let (lhs, rhs) = addition_theorem_check(l, e1, e2).unwrap();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    report("addition theorem (l ≤ 10, 100 pairs)", worst, 1e-12);
}

#[test]
fn criterion_03_recursions() {
    let r = SuiteId::Recursions.run(8, 3).unwrap();
    report("recursion suite + negative-m rule (l ≤ 8)", r.max_residual, 1e-10);
}

#[test]
fn criterion_04_ladder_operators() {
    let mut rng = Lcg::new(4);
    let mut worst = 0.0f64;
    for l in 0..=6u32 {
        for m in -(l as i32)..=l as i32 {
            let idx = HarmonicIndex::new(l, m).unwrap();
            for dir in [LadderDirection::Raise, LadderDirection::Lower] {
                for _ in 0..5 {
                    let theta = rng.uniform(0.3, PI - 0.3);
                    let phi = rng.uniform(0.0, 2.0 * PI);
                    let res = ladder_apply_check(dir, idx, theta, phi, 1e-4).unwrap();
                    worst = worst.max(res.norm());
                }
            }
        }
    }
    report("ladder operators (l ≤ 6, step 1e-4)", worst, 1e-7);
}

#[test]
fn criterion_05_maxwell_theorem() {
    let r = SuiteId::Maxwell.run(5, 5).unwrap();
    report("Maxwell integral theorem (l ≤ 5)", r.max_residual, 1e-10);
}

#[test]
fn criterion_06_hobson_theorem() {
    let r = SuiteId::Hobson.run(4, 6).unwrap();
    report("Hobson theorem (k ≤ 4, deg ≤ 6, three radii)", r.max_residual, 1e-10);
}

#[test]
fn criterion_07_wave_expansions() {
    let mut rng = Lcg::new(7);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let ek = rng.unit_vector();
        let er = rng.unit_vector();
        let kr = rng.uniform(0.2, 5.0); // |k||r| ≤ 5
        let kn = rng.uniform(0.5, 2.0);
        let k = [kn * ek[0], kn * ek[1], kn * ek[2]];
        let s = kr / kn;
        let r = [s * er[0], s * er[1], s * er[2]];
        let sum = plane_wave_partial_sum(k, r, 30).unwrap();
        let kdotr = k[0] * r[0] + k[1] * r[1] + k[2] * r[2];
        let exact = Complex::from_polar(1.0, kdotr);
        worst = worst.max((sum - exact).norm());
    }
    report("Rayleigh plane-wave expansion (kr ≤ 5)", worst, 1e-10);

    let mut worst_sph = 0.0f64;
    for _ in 0..25 {
        let e1 = rng.unit_vector();
        let e2 = rng.unit_vector();
        let k = rng.uniform(0.5, 2.0);
        let hi = rng.uniform(1.5, 5.0 / k); // k r_> ≤ 5
        let lo = rng.uniform(0.2, 0.45 * hi); // (r_</r_>)^25 below tolerance
        let r = [lo * e1[0], lo * e1[1], lo * e1[2]];
        let rp = [hi * e2[0], hi * e2[1], hi * e2[2]];
        let sum = spherical_wave_partial_sum(k, r, rp, 25).unwrap();
        let d = norm3([r[0] - rp[0], r[1] - rp[1], r[2] - rp[2]]);
        let exact = Complex::from_polar(1.0 / d, k * d);
        worst_sph = worst_sph.max((sum - exact).norm() / exact.norm());
    }
    report("spherical-wave expansion (k r_> ≤ 5)", worst_sph, 1e-8);
}

#[test]
fn criterion_08_interaction_energy() {
    let mut rng = Lcg::new(8);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let er = rng.unit_vector();
        let rn = rng.uniform(2.0, 4.0);
        let r = [rn * er[0], rn * er[1], rn * er[2]];
        let ball = 0.25 * rn;
        let mut make_set = |n: usize| {
            let charges = (0..n)
                .map(|_| {
                    let e = rng.unit_vector();
                    let s = rng.uniform(0.0, ball);
                    ([s * e[0], s * e[1], s * e[2]], rng.uniform(-1.0, 1.0))
                })
                .collect();
            PointChargeSet::new(charges)
        };
        let s1 = make_set(4);
        let s2 = make_set(3);
        let m1 = multipole_moments(&s1, 16).unwrap();
        let m2 = multipole_moments(&s2, 16).unwrap();
        // shell cap 32 keeps every available l1 + l2 product of the
        // degree-16 moment sets
        let e = interaction_energy(&m1, &m2, r, 32, MomentConvention::Conjugated).unwrap();
        let direct = direct_interaction_energy(&s1, &s2, r);
        worst = worst.max((e.value - direct).abs() / direct.abs().max(1e-3));
    }
    report("multipole interaction energy (l_max 16)", worst, 1e-7);
}

#[test]
fn criterion_09_method_of_images() {
    let mut rng = Lcg::new(9);
    let a = 1.3;
    let e = rng.unit_vector();
    let rn = rng.uniform(2.0, 5.0);
    let big_r = [rn * e[0], rn * e[1], rn * e[2]];
    let q = 0.8;
    let (q_img, pos) = image_charge(a, big_r, q).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = rng.unit_vector();
        let x = [a * d[0], a * d[1], a * d[2]];
        let phi = q / norm3([x[0] - big_r[0], x[1] - big_r[1], x[2] - big_r[2]])
            + q_img / norm3([x[0] - pos[0], x[1] - pos[1], x[2] - pos[2]]);
        worst = worst.max(phi.abs());
    }
    report("method of images (50 surface points)", worst, 1e-12);
}

#[test]
fn criterion_10_rotation() {
    let mut rng = Lcg::new(10);
    let mut worst_unitary = 0.0f64;
    let mut worst_values = 0.0f64;
    for _ in 0..50 {
        let ang = EulerAngles {
            alpha: rng.uniform(-PI, PI),
            beta: rng.uniform(0.0, PI),
            gamma: rng.uniform(-PI, PI),
        };
        let p = cd_from_euler(ang);
        let primed = Frame::from_euler(ang);
        let unprimed = Frame::standard();
        for l in 0..=6u32 {
            let d = wigner_d(l, &p);
            let li = l as i32;
            for mp in -li..=li {
                for m in -li..=li {
                    let mut s = Complex::new(0.0, 0.0);
                    for k in -li..=li {
                        s += d.get(mp, k) * d.get(m, k).conj();
                    }
                    let expect = if mp == m { 1.0 } else { 0.0 };
                    worst_unitary = worst_unitary.max((s - expect).norm());
                }
            }
            let r = rng.unit_vector();
            worst_values =
                worst_values.max(rotate_values_check(l, &p, &unprimed, &primed, r).unwrap());
        }
    }
    report("Wigner D unitarity (l ≤ 6, 50 rotations)", worst_unitary, 1e-12);
    report("rotation of values (l ≤ 6, 50 rotations)", worst_values, 1e-11);

    let mut worst_spinor = 0.0f64;
    for _ in 0..100 {
        let ang = EulerAngles {
            alpha: rng.uniform(-PI, PI),
            beta: rng.uniform(0.0, PI),
            gamma: rng.uniform(-PI, PI),
        };
        let p = cd_from_euler(ang);
        let q = cd_from_frames(&Frame::standard(), &Frame::from_euler(ang)).unwrap();
        let same = (q.c - p.c).norm() + (q.d - p.d).norm();
        let flip = (q.c + p.c).norm() + (q.d + p.d).norm();
        worst_spinor = worst_spinor.max(same.min(flip));
    }
    report("frame spinor vs Euler spinor (100 triples)", worst_spinor, 1e-12);
}

#[test]
fn criterion_11_gaunt_and_triple_product() {
    let r = SuiteId::Gaunt.run(6, 11).unwrap();
    report("Gaunt/3j vs quadrature (l ≤ 6) + triple product (l ≤ 3)", r.max_residual, 1e-10);
}

#[test]
fn criterion_12_harmonic_dimension() {
    let mut worst = 0.0f64;
    for l in 0..=8u32 {
        let expect = (2 * l + 1) as usize;
        let nullity = harmonic_dimension(l);
        let basis = harmonic_basis(l);
        let rank = poly_rank(&basis);
        worst = worst.max((nullity as f64 - expect as f64).abs());
        worst = worst.max((rank as f64 - expect as f64).abs());
    }
    report("harmonic space dimension 2l+1 (l ≤ 8)", worst, 0.5);
}
