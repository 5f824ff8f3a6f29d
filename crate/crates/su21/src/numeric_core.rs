//! Scalars, 3×3 matrices over ℂ and over the Gaussian integers ℤ[i], and the
//! small numeric helpers shared by the other modules.
//!
//! | type        | role                                                    |
//! |-------------|---------------------------------------------------------|
//! | [`Complex`] | double-precision complex scalar                         |
//! | [`Mat3`]    | 3×3 complex matrix, row-major                           |
//! | [`Int`]     | exact integer, `i64` fast path with big-integer fallback |
//! | [`GaussInt`]| exact element of ℤ[i]                                   |
//! | [`GaussMat3`]| exact 3×3 matrix over ℤ[i]                             |

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Double-precision complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// The imaginary unit.
pub const I: Complex = Complex::new(0.0, 1.0);

/// Errors raised by the numeric helpers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("non-finite value produced in {context}")]
    NonFinite { context: &'static str },
}

/// Returns `z` unchanged if both parts are finite.
pub fn ensure_finite(z: Complex, context: &'static str) -> Result<Complex, NumericError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(NumericError::NonFinite { context })
    }
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex {
    Complex::new(theta.cos(), theta.sin())
}

/// Working precision selector.
///
/// `Double` is the default and every documented tolerance assumes it.
/// `Extended` keeps the `f64` scalar but doubles quadrature grids and
/// tightens series truncation; it is meant for re-running acceptance checks
/// with a second, independent discretisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl Precision {
    /// Multiplier applied to default quadrature grid sizes.
    pub fn grid_factor(self) -> usize {
        match self {
            Precision::Double => 1,
            Precision::Extended => 2,
        }
    }

    /// Relative truncation threshold for convergent series.
    pub fn series_eps(self) -> f64 {
        match self {
            Precision::Double => 1e-17,
            Precision::Extended => 1e-19,
        }
    }
}

static GLOBAL_PRECISION: std::sync::atomic::AtomicU8 = std::sync::atomic::AtomicU8::new(0);

/// Selects the process-wide working precision.
pub fn set_precision(p: Precision) {
    let v = match p {
        Precision::Double => 0,
        Precision::Extended => 1,
    };
    GLOBAL_PRECISION.store(v, std::sync::atomic::Ordering::Relaxed);
}

/// The process-wide working precision (default [`Precision::Double`]).
pub fn precision() -> Precision {
    match GLOBAL_PRECISION.load(std::sync::atomic::Ordering::Relaxed) {
        0 => Precision::Double,
        _ => Precision::Extended,
    }
}

/// `sin(πx)` with exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.5 {
        (std::f64::consts::PI * r).sin()
    } else if r < 1.5 {
        -(std::f64::consts::PI * (r - 1.0)).sin()
    } else {
        (std::f64::consts::PI * (r - 2.0)).sin()
    }
}

/// `cos(πx)` with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// `sin(πz)` for complex `z`, accurate near the real zeros.
pub fn sin_pi_c(z: Complex) -> Complex {
    let (s, c) = (sin_pi(z.re), cos_pi(z.re));
    let y = std::f64::consts::PI * z.im;
    Complex::new(s * y.cosh(), c * y.sinh())
}

/// `cos(πz)` for complex `z`.
pub fn cos_pi_c(z: Complex) -> Complex {
    let (s, c) = (sin_pi(z.re), cos_pi(z.re));
    let y = std::f64::consts::PI * z.im;
    Complex::new(c * y.cosh(), -s * y.sinh())
}

/// `e^{πiz}` for complex `z`, exact on integer and half-integer reals.
pub fn exp_pi_i(z: Complex) -> Complex {
    let scale = (-std::f64::consts::PI * z.im).exp();
    Complex::new(cos_pi(z.re), sin_pi(z.re)) * scale
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex,
    comp: Complex,
    max_abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    fn add_part(sum: f64, comp: &mut f64, x: f64) -> f64 {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            *comp += (sum - t) + x;
        } else {
            *comp += (x - t) + sum;
        }
        t
    }

    pub fn add(&mut self, x: Complex) {
        self.max_abs = self.max_abs.max(x.norm());
        let mut cr = self.comp.re;
        let mut ci = self.comp.im;
        let re = Self::add_part(self.sum.re, &mut cr, x.re);
        let im = Self::add_part(self.sum.im, &mut ci, x.im);
        self.sum = Complex::new(re, im);
        self.comp = Complex::new(cr, ci);
    }

    pub fn value(&self) -> Complex {
        self.sum + self.comp
    }

    /// Largest modulus of any added term; used to measure cancellation.
    pub fn max_term(&self) -> f64 {
        self.max_abs
    }
}

impl std::iter::FromIterator<Complex> for CompensatedSum {
    fn from_iter<T: IntoIterator<Item = Complex>>(iter: T) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// One Richardson step for a quantity with error `c·h^order`:
/// combines the estimates at step `h` and `h/ratio`.
pub fn richardson(coarse: Complex, fine: Complex, ratio: f64, order: i32) -> Complex {
    let f = ratio.powi(order);
    (fine * f - coarse) / (f - 1.0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// 3×3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[Complex; 3]; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3([[Complex::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag(Complex::one(), Complex::one(), Complex::one())
    }

    pub fn diag(a: Complex, b: Complex, c: Complex) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.0[i][j] = Complex::new(x, 0.0);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.0[i][j]
    }

    pub fn herm_conj(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn det(&self) -> Complex {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    pub fn mul_vec(&self, v: [Complex; 3]) -> [Complex; 3] {
        let mut out = [Complex::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        m
    }

    /// Frobenius norm of `self − other`.
    pub fn frob_dist(&self, other: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += (self.0[i][j] - other.0[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_dist(&Mat3::zero())
    }

    /// Row-major `(re, im)` pairs, the CLI serialisation of a matrix.
    pub fn to_floats(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        for i in 0..3 {
            for j in 0..3 {
                out[2 * (3 * i + j)] = self.0[i][j].re;
                out[2 * (3 * i + j) + 1] = self.0[i][j].im;
            }
        }
        out
    }

    pub fn from_floats(x: &[f64; 18]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = Complex::new(x[2 * (3 * i + j)], x[2 * (3 * i + j) + 1]);
            }
        }
        m
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] =
                    self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j] + self.0[i][2] * rhs.0[2][j];
            }
        }
        m
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        self + rhs.scale(Complex::new(-1.0, 0.0))
    }
}

/// Matrix product.
pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    *a * *b
}

/// Conjugate transpose.
pub fn herm_conj(a: &Mat3) -> Mat3 {
    a.herm_conj()
}

/// Determinant by cofactor expansion.
pub fn det3(a: &Mat3) -> Complex {
    a.det()
}

/// Exact integer with an `i64` fast path.
///
/// The representation is canonical: a value that fits in `i64` is always
/// stored as `Small`, so the derived equality and hash are value-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Int::Small(v) => *v as f64,
            Int::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            Int::Small(v) => v % 2 == 0,
            Int::Big(b) => (b % 2u32).is_zero(),
        }
    }

    /// Exact halving; `None` when odd.
    pub fn half(&self) -> Option<Int> {
        if !self.is_even() {
            return None;
        }
        Some(match self {
            Int::Small(v) => Int::Small(v / 2),
            Int::Big(b) => Int::from_big(b / 2),
        })
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return Int::Small(v);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b.clone()),
        }
    }
}

impl Int {
    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) if *v >= 0 => self.clone(),
            Int::Big(b) if !b.is_negative() => self.clone(),
            _ => -self,
        }
    }
}

/// Exact Gaussian integer `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussInt {
    pub re: Int,
    pub im: Int,
}

impl GaussInt {
    pub fn new(re: i64, im: i64) -> Self {
        GaussInt {
            re: Int::Small(re),
            im: Int::Small(im),
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|²` as an exact integer.
    pub fn norm_sqr(&self) -> Int {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Small-integer view, when both parts fit in `i64`.
    pub fn to_pair(&self) -> Option<(i64, i64)> {
        Some((self.re.to_i64()?, self.im.to_i64()?))
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im.to_f64())
    }
}

impl Add for &GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        *self = &*self + rhs;
    }
}

/// Exact 3×3 matrix over ℤ[i].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussMat3(pub [[GaussInt; 3]; 3]);

impl GaussMat3 {
    pub fn zero() -> Self {
        GaussMat3(std::array::from_fn(|_| std::array::from_fn(|_| GaussInt::zero())))
    }

    pub fn identity() -> Self {
        Self::diag(GaussInt::one(), GaussInt::one(), GaussInt::one())
    }

    pub fn diag(a: GaussInt, b: GaussInt, c: GaussInt) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    /// Builds a matrix from small `(re, im)` pairs.
    pub fn from_pairs(rows: [[(i64, i64); 3]; 3]) -> Self {
        GaussMat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| GaussInt::new(rows[i][j].0, rows[i][j].1))
        }))
    }

    pub fn herm_conj(&self) -> Self {
        GaussMat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].conj())))
    }

    pub fn det(&self) -> GaussInt {
        let a = &self.0;
        let m0 = &(&a[1][1] * &a[2][2]) - &(&a[1][2] * &a[2][1]);
        let m1 = &(&a[1][0] * &a[2][2]) - &(&a[1][2] * &a[2][0]);
        let m2 = &(&a[1][0] * &a[2][1]) - &(&a[1][1] * &a[2][0]);
        &(&(&a[0][0] * &m0) - &(&a[0][1] * &m1)) + &(&a[0][2] * &m2)
    }

    pub fn mul_vec(&self, v: &[GaussInt; 3]) -> [GaussInt; 3] {
        std::array::from_fn(|i| {
            let mut s = &self.0[i][0] * &v[0];
            s += &(&self.0[i][1] * &v[1]);
            s += &(&self.0[i][2] * &v[2]);
            s
        })
    }

    pub fn to_mat3(&self) -> Mat3 {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][j].to_complex();
            }
        }
        m
    }
}

impl Mul for &GaussMat3 {
    type Output = GaussMat3;
    fn mul(self, rhs: &GaussMat3) -> GaussMat3 {
        GaussMat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = &self.0[i][0] * &rhs.0[0][j];
                s += &(&self.0[i][1] * &rhs.0[1][j]);
                s += &(&self.0[i][2] * &rhs.0[2][j]);
                s
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n_matrix(b: Complex, r: f64) -> Mat3 {
        let bb = b.norm_sqr();
        let mut m = Mat3::zero();
        m.0 = [
            [Complex::new(1.0 - bb / 2.0, r), b, Complex::new(bb / 2.0, -r)],
            [-b.conj(), Complex::one(), b.conj()],
            [Complex::new(-bb / 2.0, r), b, Complex::new(1.0 + bb / 2.0, -r)],
        ];
        m
    }

    #[test]
    fn identity_and_involution() {
        let id = Mat3::identity();
        assert_eq!(mat_mul(&id, &id), id);
        let w = Mat3::from_real([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(w * w, id);
    }

    #[test]
    fn heisenberg_matrices_add_along_real_axis() {
        let one = Complex::new(1.0, 0.0);
        let prod = n_matrix(one, 0.0) * n_matrix(one, 0.0);
        assert!(prod.frob_dist(&n_matrix(Complex::new(2.0, 0.0), 0.0)) < 1e-15);
    }

    #[test]
    fn herm_conj_examples() {
        assert_eq!(herm_conj(&Mat3::identity()), Mat3::identity());
        let d = Mat3::diag(I, Complex::new(0.0, -2.0), I);
        assert_eq!(herm_conj(&d), Mat3::diag(-I, Complex::new(0.0, 2.0), -I));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det3(&Mat3::identity()), Complex::one());
        let mi = Mat3::diag(I, Complex::new(-1.0, 0.0), I);
        assert!((det3(&mi) - Complex::one()).norm() < 1e-15);
        let w = GaussMat3::diag(GaussInt::new(-1, 0), GaussInt::new(-1, 0), GaussInt::one());
        assert_eq!(w.det(), GaussInt::one());
    }

    #[test]
    fn int_promotes_on_overflow_and_demotes_back() {
        let big = Int::Small(i64::MAX);
        let sum = &big + &Int::Small(1);
        assert!(matches!(sum, Int::Big(_)));
        let back = &sum - &Int::Small(1);
        assert_eq!(back, Int::Small(i64::MAX));
        let sq = &big * &big;
        assert_eq!(sq.to_f64(), (i64::MAX as f64).powi(2));
        assert_eq!(-&Int::Small(i64::MIN), Int::from_big(BigInt::from(i64::MIN).abs()));
    }

    #[test]
    fn gauss_int_ring_identities() {
        let a = GaussInt::new(3, -2);
        let b = GaussInt::new(-1, 5);
        assert_eq!(&a * &b, GaussInt::new(7, 17));
        assert_eq!(&(&a * &a.conj()).re, &a.norm_sqr());
        assert_eq!(&GaussInt::i() * &GaussInt::i(), GaussInt::new(-1, 0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        for deg in 0..16 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "deg {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(Complex::new(1e16, 0.0));
        for _ in 0..10 {
            acc.add(Complex::new(1.0, 0.0));
        }
        acc.add(Complex::new(-1e16, 0.0));
        assert_eq!(acc.value().re, 10.0);
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -5..5 {
            assert_eq!(sin_pi(k as f64), 0.0);
            assert_eq!(cos_pi(k as f64 + 0.5), 0.0);
        }
        assert!((sin_pi(0.25) - (0.5f64).sqrt()).abs() < 4e-16);
    }

    fn arb_mat() -> impl Strategy<Value = Mat3> {
        proptest::collection::vec(-2.0f64..2.0, 18).prop_map(|v| {
            let arr: [f64; 18] = v.try_into().unwrap();
            Mat3::from_floats(&arr)
        })
    }

    fn arb_gmat() -> impl Strategy<Value = GaussMat3> {
        proptest::collection::vec(-50i64..50, 18).prop_map(|v| {
            GaussMat3(std::array::from_fn(|i| {
                std::array::from_fn(|j| GaussInt::new(v[2 * (3 * i + j)], v[2 * (3 * i + j) + 1]))
            }))
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in arb_mat(), b in arb_mat()) {
            let lhs = det3(&(a * b));
            let rhs = det3(&a) * det3(&b);
            let scale = 1.0 + det3(&a).norm() * det3(&b).norm() + a.frob_norm().powi(3) * b.frob_norm().powi(3);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }

        #[test]
        fn herm_conj_reverses_products(a in arb_mat(), b in arb_mat()) {
            let lhs = herm_conj(&(a * b));
            let rhs = herm_conj(&b) * herm_conj(&a);
            prop_assert!(lhs.frob_dist(&rhs) < 1e-12);
            prop_assert_eq!(herm_conj(&herm_conj(&a)), a);
        }

        #[test]
        fn exact_det_is_multiplicative(a in arb_gmat(), b in arb_gmat()) {
            prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
            prop_assert_eq!((&a * &b).herm_conj(), &b.herm_conj() * &a.herm_conj());
        }
    }
}
