//! Exact sparse homogeneous-polynomial engine over complex coefficients.
//!
//! This is the brute-force oracle behind the harmonic identities: null-vector
//! powers `(b·r)^l`, Laplacians, directional derivatives, and the application
//! of a polynomial's coefficients as a differential operator.

use std::collections::BTreeMap;

use crate::{Complex, Error, Result};

/// Relative magnitude below which coefficients are pruned.
const PRUNE_REL: f64 = 1e-15;
/// Null-vector tolerance: |b·b| <= NULL_TOL * |b|^2.
const NULL_TOL: f64 = 1e-12;
/// Rank threshold relative to the largest pivot.
const RANK_TOL: f64 = 1e-10;

/// A complex 3-vector with the unconjugated dot product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec3 {
    pub x: Complex,
    pub y: Complex,
    pub z: Complex,
}

impl ComplexVec3 {
    pub fn new(x: Complex, y: Complex, z: Complex) -> Self {
        Self { x, y, z }
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self {
            x: Complex::new(v[0], 0.0),
            y: Complex::new(v[1], 0.0),
            z: Complex::new(v[2], 0.0),
        }
    }

    /// Unconjugated dot product u·v.
    pub fn dot(&self, other: &Self) -> Complex {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Squared magnitude sum |x|^2 + |y|^2 + |z|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    /// True if b·b = 0 within tolerance (relative to |b|^2).
    pub fn is_null(&self) -> bool {
        self.dot(self).norm() <= NULL_TOL * self.norm_sqr()
    }

    pub fn require_null(&self) -> Result<()> {
        if self.is_null() {
            Ok(())
        } else {
            Err(Error::NotNull(self.dot(self).norm()))
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

/// Sparse homogeneous polynomial in (x, y, z) with complex coefficients.
///
/// Every stored exponent triple sums to `degree`; coefficients below
/// `1e-15` times the largest magnitude are pruned on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    degree: u32,
    terms: BTreeMap<[u32; 3], Complex>,
}

impl HomogeneousPoly {
    /// The zero polynomial of the given degree.
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial (degree 0).
    pub fn constant(c: Complex) -> Self {
        let mut p = Self::zero(0);
        p.insert([0, 0, 0], c);
        p.prune();
        p
    }

    /// A single monomial c x^a y^b z^g.
    pub fn monomial(exps: [u32; 3], c: Complex) -> Self {
        let mut p = Self::zero(exps.iter().sum());
        p.insert(exps, c);
        p.prune();
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Complex)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, exps: [u32; 3], c: Complex) {
        debug_assert_eq!(exps.iter().sum::<u32>(), self.degree);
        let e = self.terms.entry(exps).or_insert(Complex::new(0.0, 0.0));
        *e += c;
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Numerically harmonic: the Laplacian residue is negligible relative
    /// to the polynomial's own coefficient scale.
    pub fn is_harmonic(&self) -> bool {
        self.harmonic_defect() <= 1e-12
    }

    /// Laplacian residue normalized by the coefficient scale and the
    /// degree-dependent derivative growth.
    pub fn harmonic_defect(&self) -> f64 {
        let scale = self.max_coeff() * ((self.degree * self.degree) as f64).max(1.0);
        if scale == 0.0 {
            return 0.0;
        }
        self.laplacian().max_coeff() / scale
    }

    fn prune(&mut self) {
        let cutoff = PRUNE_REL * self.max_coeff();
        self.terms.retain(|_, c| c.norm() > cutoff);
    }

    pub fn add(&self, other: &Self) -> Self {
        // a zero polynomial acts as the identity regardless of its
        // nominal degree (derivatives of constants report degree 0)
        if self.is_zero() && self.degree != other.degree {
            return other.clone();
        }
        if other.is_zero() && self.degree != other.degree {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (&e, &c) in other.terms.iter() {
            out.insert(e, c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = Self::zero(self.degree);
        for (&e, &c) in self.terms.iter() {
            out.insert(e, c * s);
        }
        out.prune();
        out
    }

    /// Polynomial with conjugated coefficients; at real points this
    /// evaluates to the conjugate of `self`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (&e, &c) in self.terms.iter() {
            out.insert(e, c.conj());
        }
        out
    }

    /// Product of two homogeneous polynomials (degrees add).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (&ea, &ca) in self.terms.iter() {
            for (&eb, &cb) in other.terms.iter() {
                out.insert([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out.prune();
        out
    }

    /// Partial derivative along one axis (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, axis: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 1);
        for (&e, &c) in self.terms.iter() {
            if e[axis] == 0 {
                continue;
            }
            let mut en = e;
            en[axis] -= 1;
            out.insert(en, c * e[axis] as f64);
        }
        out.prune();
        out
    }

    /// Exact Laplacian; degree drops by 2 (empty polynomial if degree < 2).
    pub fn laplacian(&self) -> Self {
        if self.degree < 2 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 2);
        for (&e, &c) in self.terms.iter() {
            for axis in 0..3 {
                if e[axis] >= 2 {
                    let mut en = e;
                    en[axis] -= 2;
                    out.insert(en, c * (e[axis] * (e[axis] - 1)) as f64);
                }
            }
        }
        out.prune();
        out
    }

    /// Exact directional derivative (b·nabla) p.
    pub fn dir_derivative(&self, b: &ComplexVec3) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        self.partial(0)
            .scale(b.x)
            .add(&self.partial(1).scale(b.y))
            .add(&self.partial(2).scale(b.z))
    }

    /// Evaluate at a (generally complex) point.
    pub fn eval(&self, point: &ComplexVec3) -> Complex {
        let mut sum = Complex::new(0.0, 0.0);
        for (&e, &c) in self.terms.iter() {
            sum += c * point.x.powu(e[0]) * point.y.powu(e[1]) * point.z.powu(e[2]);
        }
        sum
    }

    pub fn eval_real(&self, point: [f64; 3]) -> Complex {
        self.eval(&ComplexVec3::from_real(point))
    }

    /// Multinomial expansion of (b·r)^l.
    pub fn pow_linear_form(b: &ComplexVec3, l: u32) -> Self {
        let mut p = Self::constant(Complex::new(1.0, 0.0));
        let linear = {
            let mut q = Self::zero(1);
            q.insert([1, 0, 0], b.x);
            q.insert([0, 1, 0], b.y);
            q.insert([0, 0, 1], b.z);
            q.prune();
            q
        };
        for _ in 0..l {
            p = p.mul(&linear);
        }
        p
    }

    /// Apply this polynomial's coefficients as a differential operator
    /// H(nabla) to a formal polynomial sum.
    pub fn apply_as_operator(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (&e, &c) in self.terms.iter() {
            let mut g = f.clone();
            for _ in 0..e[0] {
                g = g.partial(0);
            }
            for _ in 0..e[1] {
                g = g.partial(1);
            }
            for _ in 0..e[2] {
                g = g.partial(2);
            }
            out = out.add(&g.scale(c));
        }
        out
    }
}

/// Formal sum of homogeneous polynomials of distinct degrees.
///
/// Only used where non-homogeneous intermediates appear (Hobson evaluation
/// and operator application); not a general polynomial algebra.
#[derive(Debug, Clone, Default)]
pub struct Polynomial {
    parts: BTreeMap<u32, HomogeneousPoly>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_homogeneous(p: HomogeneousPoly) -> Self {
        let mut out = Self::zero();
        if !p.is_zero() {
            out.parts.insert(p.degree(), p);
        }
        out
    }

    pub fn parts(&self) -> impl Iterator<Item = &HomogeneousPoly> {
        self.parts.values()
    }

    pub fn max_degree(&self) -> u32 {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for p in other.parts.values() {
            out.accumulate(p.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in self.parts.values() {
            for b in other.parts.values() {
                out.accumulate(a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = Self::zero();
        for p in self.parts.values() {
            out.accumulate(p.scale(s));
        }
        out
    }

    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for p in self.parts.values() {
            out.accumulate(p.partial(axis));
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for p in self.parts.values() {
            out.accumulate(p.laplacian());
        }
        out
    }

    pub fn eval(&self, point: &ComplexVec3) -> Complex {
        self.parts.values().map(|p| p.eval(point)).sum()
    }

    pub fn eval_real(&self, point: [f64; 3]) -> Complex {
        self.eval(&ComplexVec3::from_real(point))
    }

    /// Value at the origin: the degree-0 part.
    pub fn constant_term(&self) -> Complex {
        self.parts
            .get(&0)
            .map(|p| p.eval_real([0.0, 0.0, 0.0]))
            .unwrap_or(Complex::new(0.0, 0.0))
    }

    fn accumulate(&mut self, p: HomogeneousPoly) {
        if p.is_zero() {
            return;
        }
        match self.parts.remove(&p.degree()) {
            Some(existing) => {
                let sum = existing.add(&p);
                if !sum.is_zero() {
                    self.parts.insert(sum.degree(), sum);
                }
            }
            None => {
                self.parts.insert(p.degree(), p);
            }
        }
    }
}

/// Monomial exponent triples of total degree `l`, in a fixed order.
pub(crate) fn monomials(l: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=l {
        for b in 0..=l - a {
            out.push([a, b, l - a - b]);
        }
    }
    out
}

/// Dimension of the space of harmonic homogeneous polynomials of degree l,
/// computed as the nullity of the Laplacian on the full monomial space.
pub fn harmonic_dimension(l: u32) -> usize {
    let cols = monomials(l);
    if l < 2 {
        return cols.len();
    }
    let rows = monomials(l - 2);
    let row_index: BTreeMap<[u32; 3], usize> =
        rows.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    // matrix of the Laplacian, one column per degree-l monomial
    let mut mat = vec![vec![0.0f64; cols.len()]; rows.len()];
    for (j, &e) in cols.iter().enumerate() {
        let lap = HomogeneousPoly::monomial(e, Complex::new(1.0, 0.0)).laplacian();
        for (&er, &c) in lap.terms.iter() {
            mat[row_index[&er]][j] = c.re;
        }
    }
    cols.len() - real_rank(&mut mat)
}

/// Rank of a real matrix by column-pivoted elimination.
fn real_rank(mat: &mut [Vec<f64>]) -> usize {
    let nrows = mat.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = mat[0].len();
    let largest = mat
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    let tol = RANK_TOL * largest.max(1.0);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        // find pivot
        let (pr, pv) = (row..nrows)
            .map(|r| (r, mat[r][col].abs()))
            .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pv <= tol {
            continue;
        }
        mat.swap(row, pr);
        for r in row + 1..nrows {
            let f = mat[r][col] / mat[row][col];
            for c in col..ncols {
                mat[r][c] -= f * mat[row][c];
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// Rank of a set of homogeneous polynomials of common degree, by elimination
/// on their coefficient vectors.
pub fn poly_rank(polys: &[HomogeneousPoly]) -> usize {
    if polys.is_empty() {
        return 0;
    }
    let l = polys[0].degree();
    let basis = monomials(l);
    let index: BTreeMap<[u32; 3], usize> =
        basis.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut mat: Vec<Vec<Complex>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![Complex::new(0.0, 0.0); basis.len()];
            for (&e, &c) in p.terms.iter() {
                row[index[&e]] = c;
            }
            row
        })
        .collect();
    complex_rank(&mut mat)
}

fn complex_rank(mat: &mut [Vec<Complex>]) -> usize {
    let nrows = mat.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = mat[0].len();
    let largest = mat
        .iter()
        .flat_map(|r| r.iter().map(|v| v.norm()))
        .fold(0.0, f64::max);
    let tol = RANK_TOL * largest.max(1.0);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let (pr, pv) = (row..nrows)
            .map(|r| (r, mat[r][col].norm()))
            .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pv <= tol {
            continue;
        }
        mat.swap(row, pr);
        for r in row + 1..nrows {
            let f = mat[r][col] / mat[row][col];
            for c in col..ncols {
                let sub = f * mat[row][c];
                mat[r][c] -= sub;
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// The independent solid harmonic h_l^(k) recovered from the roots-of-unity
/// combination of null-vector powers (b(u_s)·r)^l with
/// b(u_s) = (i cos u_s, i sin u_s, 1), u_s = 2 pi s/(2l+1).
pub fn extract_trig_harmonics(l: u32, k: i32) -> HomogeneousPoly {
    assert!(k.unsigned_abs() <= l, "|k| <= l required");
    let n = 2 * l + 1;
    let mut sum = HomogeneousPoly::zero(l);
    for s in 0..n {
        let u = 2.0 * std::f64::consts::PI * s as f64 / n as f64;
        let b = ComplexVec3::new(
            Complex::new(0.0, u.cos()),
            Complex::new(0.0, u.sin()),
            Complex::new(1.0, 0.0),
        );
        let phase = Complex::from_polar(1.0, -(k as f64) * u);
        sum = sum.add(&HomogeneousPoly::pow_linear_form(&b, l).scale(phase));
    }
    sum.scale(Complex::new(1.0 / n as f64, 0.0))
}

/// A basis of the 2l+1 independent harmonic polynomials of degree l.
pub fn harmonic_basis(l: u32) -> Vec<HomogeneousPoly> {
    (-(l as i32)..=l as i32)
        .map(|k| extract_trig_harmonics(l, k))
        .collect()
}
