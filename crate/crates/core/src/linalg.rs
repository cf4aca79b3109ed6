//! Vectors, frames and matrices over D: the neutral metric, `J`, the
//! symplectic form, the para-Hermitian form and a division-free determinant.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra as na;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paracomplex::ParaComplex;

/// Relative tolerance for `ω` to count as vanishing on a frame.
pub const LAGRANGIAN_TOL: f64 = 1e-10;
/// Relative null tolerance for para-holomorphic volumes.
pub const VOLUME_NULL_TOL: f64 = 1e-10;

/// A point or tangent vector of `Dⁿ ≅ R²ⁿ`.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DVector(Vec<ParaComplex>);

impl std::fmt::Debug for DVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl DVector {
    pub fn new(entries: Vec<ParaComplex>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![ParaComplex::ZERO; n])
    }

    /// Real basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = ParaComplex::ONE;
        v
    }

    /// `τ e_i`.
    pub fn tau_basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = ParaComplex::TAU;
        v
    }

    /// From the real split `(x₁..xₙ, y₁..yₙ)`.
    pub fn from_real(xs: &[f64], ys: &[f64]) -> Self {
        assert_eq!(xs.len(), ys.len());
        Self(xs.iter().zip(ys).map(|(&x, &y)| ParaComplex::new(x, y)).collect())
    }

    /// Real split `(x₁..xₙ, y₁..yₙ)`.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.x()).chain(self.0.iter().map(|z| z.y())).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[ParaComplex] {
        &self.0
    }

    pub fn entries_mut(&mut self) -> &mut [ParaComplex] {
        &mut self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    /// Neutral metric `Σ xⱼx′ⱼ − yⱼy′ⱼ`. Panics on a dimension mismatch.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (*a * b.conj()).x())
            .sum()
    }

    /// `ω(X, Y) = ⟨X, JY⟩`. Panics on a dimension mismatch.
    pub fn omega(&self, other: &Self) -> f64 {
        self.dot(&other.apply_j())
    }

    /// `Σ Xₖ conj(Yₖ) = ⟨X,Y⟩ − τ ω(X,Y)`.
    pub fn hermitian(&self, other: &Self) -> ParaComplex {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| *a * b.conj()).sum()
    }

    pub fn apply_j(&self) -> Self {
        self.scale_d(ParaComplex::TAU)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|z| *z * s).collect())
    }

    /// Entrywise product with a para-complex scalar.
    pub fn scale_d(&self, s: ParaComplex) -> Self {
        Self(self.0.iter().map(|z| *z * s).collect())
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b * s).collect())
    }

    /// Sum of squares of all `2n` real components.
    pub fn grading_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.euclid_sq()).sum()
    }

    pub fn grading_norm(&self) -> f64 {
        self.grading_norm_sq().sqrt()
    }
}

impl Add for &DVector {
    type Output = DVector;
    fn add(self, o: &DVector) -> DVector {
        assert_eq!(self.dim(), o.dim());
        DVector(self.0.iter().zip(&o.0).map(|(a, b)| *a + *b).collect())
    }
}

impl Sub for &DVector {
    type Output = DVector;
    fn sub(self, o: &DVector) -> DVector {
        assert_eq!(self.dim(), o.dim());
        DVector(self.0.iter().zip(&o.0).map(|(a, b)| *a - *b).collect())
    }
}

impl Neg for &DVector {
    type Output = DVector;
    fn neg(self) -> DVector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &DVector {
    type Output = DVector;
    fn mul(self, s: f64) -> DVector {
        self.scale(s)
    }
}

fn check_dims(x: &DVector, y: &DVector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    Ok(())
}

pub fn metric(x: &DVector, y: &DVector) -> Result<f64> {
    check_dims(x, y)?;
    Ok(x.dot(y))
}

pub fn apply_j(x: &DVector) -> DVector {
    x.apply_j()
}

pub fn omega(x: &DVector, y: &DVector) -> Result<f64> {
    check_dims(x, y)?;
    Ok(x.omega(y))
}

/// Real part `metric(X, Y)`, τ-part `−omega(X, Y)`.
pub fn hermitian_form(x: &DVector, y: &DVector) -> Result<ParaComplex> {
    check_dims(x, y)?;
    Ok(ParaComplex::new(x.dot(y), -x.omega(y)))
}

/// Square matrix over D; row `i` holds the components of frame vector `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    n: usize,
    data: Vec<ParaComplex>,
}

impl DMatrix {
    pub fn from_rows(rows: Vec<Vec<ParaComplex>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { left: r.len(), right: n });
            }
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_frame(frame: &[DVector]) -> Result<Self> {
        Self::from_rows(frame.iter().map(|v| v.entries().to_vec()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![ParaComplex::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = ParaComplex::ONE;
        }
        Self { n, data }
    }

    pub fn diagonal(d: &[ParaComplex]) -> Self {
        let n = d.len();
        let mut m = Self { n, data: vec![ParaComplex::ZERO; n * n] };
        for (i, &z) in d.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> ParaComplex {
        self.data[i * self.n + j]
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![ParaComplex::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).conj();
            }
        }
        Self { n, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let mut data = vec![ParaComplex::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Ok(Self { n, data })
    }

    /// Determinant over the commutative ring D, without divisions in D.
    ///
    /// Leibniz expansion with exact ring products for `n ≤ 4`; beyond that,
    /// fraction-free Bareiss elimination on each idempotent component.
    pub fn det(&self) -> ParaComplex {
        if self.n <= 4 {
            self.det_leibniz()
        } else {
            self.det_bareiss()
        }
    }

    pub fn det_leibniz(&self) -> ParaComplex {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut total = ParaComplex::ZERO;
        for_each_permutation(&mut perm, &mut |p, sign| {
            let term: ParaComplex = p.iter().enumerate().map(|(i, &j)| self.get(i, j)).product();
            total += term * sign;
        });
        total
    }

    pub fn det_bareiss(&self) -> ParaComplex {
        let n = self.n;
        let comp = |pick: fn(ParaComplex) -> f64| -> Vec<f64> { self.data.iter().map(|&z| pick(z)).collect() };
        let du = bareiss(n, comp(|z| z.null_coords().0));
        let dv = bareiss(n, comp(|z| z.null_coords().1));
        ParaComplex::from_null(du, dv)
    }
}

/// Heap's algorithm; the callback receives each permutation and its sign.
fn for_each_permutation(perm: &mut [usize], f: &mut impl FnMut(&[usize], f64)) {
    fn rec(k: usize, perm: &mut [usize], sign: &mut f64, f: &mut impl FnMut(&[usize], f64)) {
        if k <= 1 {
            f(perm, *sign);
            return;
        }
        rec(k - 1, perm, sign, f);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
            *sign = -*sign;
            rec(k - 1, perm, sign, f);
        }
    }
    let mut sign = 1.0;
    let k = perm.len();
    rec(k, perm, &mut sign, f);
}

/// Fraction-free Bareiss elimination on a real row-major matrix.
fn bareiss(n: usize, mut a: Vec<f64>) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut sign = 1.0;
    let mut prev = 1.0;
    for k in 0..n - 1 {
        let pivot_row = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        if a[pivot_row * n + k] == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            sign = -sign;
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * akk - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = akk;
    }
    sign * a[n * n - 1]
}

pub fn det_d(m: &DMatrix) -> ParaComplex {
    m.det()
}

/// The intrinsic part `(q, θ)` of the polar form of a para-holomorphic volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangianAngle {
    pub q: u8,
    pub theta: f64,
}

impl LagrangianAngle {
    pub fn of(z: ParaComplex) -> Result<Self> {
        let pf = z
            .polar_with_tol(VOLUME_NULL_TOL)
            .map_err(|_| Error::DegenerateMetric(format!("null para-holomorphic volume {z}")))?;
        Ok(Self { q: pf.q, theta: pf.theta })
    }
}

/// Largest `|ω(Xᵢ, Xⱼ)|` relative to the largest squared Euclidean length.
pub fn max_relative_omega(frame: &[DVector]) -> f64 {
    let scale = frame.iter().map(DVector::grading_norm_sq).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..frame.len() {
        for j in i + 1..frame.len() {
            worst = worst.max(frame[i].omega(&frame[j]).abs());
        }
    }
    worst / scale
}

fn require_lagrangian(frame: &[DVector]) -> Result<()> {
    if let Some(v) = frame.iter().find(|v| v.dim() != frame.len()) {
        return Err(Error::DimensionMismatch { left: v.dim(), right: frame.len() });
    }
    let w = max_relative_omega(frame);
    if w > LAGRANGIAN_TOL {
        return Err(Error::LagrangianViolation { max_omega: w });
    }
    Ok(())
}

/// Real Gram matrix `[⟨Xᵢ, Xⱼ⟩]`.
pub fn gram_matrix(frame: &[DVector]) -> na::DMatrix<f64> {
    let m = frame.len();
    na::DMatrix::from_fn(m, m, |i, j| frame[i].dot(&frame[j]))
}

/// `(det_R [⟨Xᵢ,Xⱼ⟩], ⟨det_D M, det_D M⟩)` for a Lagrangian frame; the two agree.
pub fn gram_identity_check(frame: &[DVector]) -> Result<(f64, f64)> {
    require_lagrangian(frame)?;
    let gram_det = gram_matrix(frame).determinant();
    let vol = DMatrix::from_frame(frame)?.det();
    Ok((gram_det, vol.squared_norm()))
}

pub fn lagrangian_angle_of_frame(frame: &[DVector]) -> Result<LagrangianAngle> {
    require_lagrangian(frame)?;
    LagrangianAngle::of(DMatrix::from_frame(frame)?.det())
}

/// A random Lagrangian frame: rows `eᵢ + τSᵢ` for a random symmetric `S`,
/// followed by a random real change of basis.
pub fn random_lagrangian_frame<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<DVector> {
    let mut s = na::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.5..1.5);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let base: Vec<DVector> = (0..n)
        .map(|i| {
            let xs: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            let ys: Vec<f64> = (0..n).map(|j| s[(i, j)]).collect();
            DVector::from_real(&xs, &ys)
        })
        .collect();
    let a = random_real_basis_change(n, rng);
    change_basis(&base, &a)
}

/// A random real matrix with `|det| ≥ 0.1`.
pub fn random_real_basis_change<R: Rng + ?Sized>(n: usize, rng: &mut R) -> na::DMatrix<f64> {
    loop {
        let a = na::DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        if a.determinant().abs() >= 0.1 {
            return a;
        }
    }
}

/// `Yᵢ = Σⱼ aᵢⱼ Xⱼ`.
pub fn change_basis(frame: &[DVector], a: &na::DMatrix<f64>) -> Vec<DVector> {
    let n = frame.len();
    let dim = frame[0].dim();
    (0..n)
        .map(|i| (0..n).fold(DVector::zeros(dim), |acc, j| acc.axpy(a[(i, j)], &frame[j])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pc(x: f64, y: f64) -> ParaComplex {
        ParaComplex::new(x, y)
    }

    fn random_dvector(n: usize, rng: &mut ChaCha8Rng) -> DVector {
        DVector::new((0..n).map(|_| pc(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect())
    }

    #[test]
    fn metric_examples() {
        let e1 = DVector::basis(2, 0);
        let te1 = DVector::tau_basis(2, 0);
        assert_eq!(metric(&e1, &e1).unwrap(), 1.0);
        assert_eq!(metric(&te1, &te1).unwrap(), -1.0);
        let v = DVector::new(vec![ParaComplex::ONE, ParaComplex::TAU]);
        assert_eq!(metric(&v, &v).unwrap(), 0.0);
        assert!(matches!(
            metric(&e1, &DVector::basis(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn j_is_an_involutive_anti_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(apply_j(&DVector::basis(3, 0)), DVector::tau_basis(3, 0));
        for _ in 0..100 {
            let x = random_dvector(3, &mut rng);
            let y = random_dvector(3, &mut rng);
            let jj = x.apply_j().apply_j();
            assert!((&jj - &x).grading_norm() < 1e-14);
            // Brute force over the real split as an independent route.
            let (xr, yr) = (x.apply_j().to_real(), y.apply_j().to_real());
            let brute: f64 = (0..3).map(|k| xr[k] * yr[k] - xr[k + 3] * yr[k + 3]).sum();
            assert!((brute + metric(&x, &y).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_examples() {
        let e1 = DVector::basis(2, 0);
        let e2 = DVector::basis(2, 1);
        let te1 = DVector::tau_basis(2, 0);
        assert_eq!(omega(&e1, &te1).unwrap(), 1.0);
        assert_eq!(omega(&e1, &e1).unwrap(), 0.0);
        assert_eq!(omega(&e1, &e2).unwrap(), 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let w = omega(&DVector::basis(3, i), &DVector::tau_basis(3, j)).unwrap();
                assert_eq!(w, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn hermitian_form_examples() {
        let e1 = DVector::basis(1, 0);
        let te1 = DVector::tau_basis(1, 0);
        assert_eq!(hermitian_form(&e1, &e1).unwrap(), ParaComplex::ONE);
        assert_eq!(hermitian_form(&e1, &te1).unwrap(), -ParaComplex::TAU);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = random_dvector(3, &mut rng);
            let y = random_dvector(3, &mut rng);
            let a = hermitian_form(&x, &y).unwrap();
            let b = hermitian_form(&y, &x).unwrap().conj();
            assert!((a - b).euclid_sq() < 1e-24);
            // Σ Xₖ conj(Yₖ) and ⟨·,·⟩ − τω are the same form.
            assert!((a - x.hermitian(&y)).euclid_sq() < 1e-24);
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(DMatrix::identity(3).det(), ParaComplex::ONE);
        let m = DMatrix::from_rows(vec![
            vec![ParaComplex::ONE, ParaComplex::TAU],
            vec![ParaComplex::TAU, ParaComplex::ONE],
        ])
        .unwrap();
        assert_eq!(m.det(), ParaComplex::ZERO);
        let (a, b) = (0.7, -1.3);
        let d = DMatrix::diagonal(&[pc(1.0, a), pc(1.0, b)]).det();
        let expect = pc(1.0 + a * b, a + b);
        assert!((d - expect).euclid_sq() < 1e-28);
    }

    #[test]
    fn leibniz_and_bareiss_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            for _ in 0..20 {
                let rows = (0..n).map(|_| random_dvector(n, &mut rng).entries().to_vec()).collect();
                let m = DMatrix::from_rows(rows).unwrap();
                let (l, b) = (m.det_leibniz(), m.det_bareiss());
                let scale = l.euclid_sq().sqrt().max(1.0);
                assert!((l - b).euclid_sq().sqrt() < 1e-12 * scale, "n={n}: {l} vs {b}");
            }
        }
    }

    #[test]
    fn bareiss_handles_zero_divisor_pivots() {
        // Leading entry 1+τ is a zero divisor; elimination over D would stall.
        let n = 5;
        let mut rows = vec![vec![ParaComplex::ZERO; n]; n];
        for i in 0..n {
            rows[i][(i + 1) % n] = if i == 0 { pc(1.0, 1.0) } else { pc(2.0, 0.5) };
            rows[i][i] = pc(1.0, 1.0);
        }
        let m = DMatrix::from_rows(rows).unwrap();
        let b = m.det();
        // Reference: Laplace expansion via the idempotent split, done with nalgebra.
        let comp = |k: usize| {
            na::DMatrix::from_fn(n, n, |i, j| {
                let (u, v) = m.get(i, j).null_coords();
                if k == 0 { u } else { v }
            })
            .determinant()
        };
        let r = ParaComplex::from_null(comp(0), comp(1));
        assert!((b - r).euclid_sq().sqrt() < 1e-10, "{b} vs {r}");
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let rnd = |rng: &mut ChaCha8Rng| {
                DMatrix::from_rows((0..3).map(|_| random_dvector(3, rng).entries().to_vec()).collect()).unwrap()
            };
            let (a, b) = (rnd(&mut rng), rnd(&mut rng));
            let lhs = a.mul(&b).unwrap().det();
            let rhs = a.det() * b.det();
            let scale = lhs.euclid_sq().sqrt().max(1.0);
            assert!((lhs - rhs).euclid_sq().sqrt() < 1e-10 * scale);
        }
    }

    #[test]
    fn gram_identity_examples() {
        let std: Vec<DVector> = (0..3).map(|i| DVector::basis(3, i)).collect();
        assert_eq!(gram_identity_check(&std).unwrap(), (1.0, 1.0));
        let f = vec![DVector::new(vec![ParaComplex::exp_tau(0.7)])];
        let (g, v) = gram_identity_check(&f).unwrap();
        assert!((g - 1.0).abs() < 1e-14 && (v - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            for _ in 0..100 {
                let frame = random_lagrangian_frame(n, &mut rng);
                // Brute-force Gram determinant on the real split, independent of nalgebra.
                let g = gram_matrix(&frame);
                let brute = brute_det(&g);
                let (gd, vn) = gram_identity_check(&frame).unwrap();
                assert!((gd - brute).abs() <= 1e-10 * brute.abs().max(1.0));
                assert!((gd - vn).abs() <= 1e-10 * gd.abs().max(1.0), "{gd} vs {vn}");
            }
        }
        let bad = vec![DVector::basis(2, 0), DVector::tau_basis(2, 0)];
        assert!(matches!(gram_identity_check(&bad), Err(Error::LagrangianViolation { .. })));
    }

    fn brute_det(m: &na::DMatrix<f64>) -> f64 {
        let n = m.nrows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0.0;
        for_each_permutation(&mut perm, &mut |p, s| {
            total += s * p.iter().enumerate().map(|(i, &j)| m[(i, j)]).product::<f64>();
        });
        total
    }

    #[test]
    fn angle_of_frame_examples() {
        let std: Vec<DVector> = (0..2).map(|i| DVector::basis(2, i)).collect();
        assert_eq!(lagrangian_angle_of_frame(&std).unwrap(), LagrangianAngle { q: 0, theta: 0.0 });
        let f = vec![DVector::new(vec![ParaComplex::exp_tau(0.4)])];
        let a = lagrangian_angle_of_frame(&f).unwrap();
        assert_eq!(a.q, 0);
        assert!((a.theta - 0.4).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let frame = random_lagrangian_frame(3, &mut rng);
            let a = lagrangian_angle_of_frame(&frame).unwrap();
            let change = random_real_basis_change(3, &mut rng);
            let b = lagrangian_angle_of_frame(&change_basis(&frame, &change)).unwrap();
            assert_eq!(a.q, b.q);
            assert!((a.theta - b.theta).abs() < 1e-9);
        }
    }

    #[test]
    fn null_volume_is_degenerate() {
        // Lagrangian frame whose Gram matrix is singular: X₁ = e₁ + τe₁ is null and ⟂ X₂ = e₂.
        let f = vec![
            DVector::new(vec![pc(1.0, 1.0), ParaComplex::ZERO]),
            DVector::basis(2, 1),
        ];
        assert!(matches!(lagrangian_angle_of_frame(&f), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn permutation_signs() {
        let mut perm: Vec<usize> = (0..4).collect();
        let mut count = 0;
        let mut sum = 0.0;
        for_each_permutation(&mut perm, &mut |_, s| {
            count += 1;
            sum += s;
        });
        assert_eq!((count, sum), (24, 0.0));
    }
}
