//! The Heisenberg group `N = {n(b,r)}`, the lattices `Λ_σ`, characters `χ_β`,
//! the Schrödinger representation, normalized Hermite functions, the theta
//! maps `Θ_{ℓ,c}` into functions on `Λ_σ\N`, and the action of
//! `n(b,r) ↦ n(ib,r)` on theta bases.
//!
//! Group law: `n(b₁,r₁)·n(b₂,r₂) = n(b₁+b₂, r₁+r₂+Im(b̄₁b₂))`.
//!
//! Theta functions, for `φ` a Schwartz function on ℝ:
//!
//! ```text
//! Θ_{ℓ,c}(φ)(n(x+iy, r)) = Σ_k φ(c/2ℓ + k + y) e^{2πiℓr} e^{−2πiℓx(c/ℓ + 2k + y)}
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric_core::{cis, Complex, CompensatedSum, GaussInt};

/// Largest Hermite index accepted by [`hermite_eval`].
pub const MAX_HERMITE_INDEX: u32 = 64;

/// Largest number of lattice terms a theta sum may use.
pub const MAX_THETA_TERMS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("Hermite index {k} exceeds the configured maximum {max}")]
    IndexOverflow { k: u32, max: u32 },
    #[error("theta sum needs {needed} terms, more than the configured {max}")]
    TruncationFailure { needed: usize, max: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("invalid theta parameters: {0}")]
    BadParams(String),
}

/// A point `n(b, r)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergPoint {
    pub b: Complex,
    pub r: f64,
}

impl HeisenbergPoint {
    pub fn new(b: Complex, r: f64) -> Self {
        HeisenbergPoint { b, r }
    }

    pub fn identity() -> Self {
        Self::new(Complex::new(0.0, 0.0), 0.0)
    }

    pub fn center(r: f64) -> Self {
        Self::new(Complex::new(0.0, 0.0), r)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.b, -self.r)
    }

    pub fn x(&self) -> f64 {
        self.b.re
    }

    pub fn y(&self) -> f64 {
        self.b.im
    }
}

/// The group law of `N`.
pub fn n_mul(x: &HeisenbergPoint, y: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint::new(x.b + y.b, x.r + y.r + (x.b.conj() * y.b).im)
}

impl std::ops::Mul for HeisenbergPoint {
    type Output = HeisenbergPoint;
    fn mul(self, rhs: HeisenbergPoint) -> HeisenbergPoint {
        n_mul(&self, &rhs)
    }
}

/// A half-integer, stored as twice its value. Used for the central parameter `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn signum(self) -> i64 {
        self.twice.signum()
    }

    /// `2|ℓ|`, the number of theta components.
    pub fn period(self) -> usize {
        self.twice.unsigned_abs() as usize
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// The lattice `Λ_σ` generated by `n(1,0)`, `n(i,0)` and `n(0, 2/σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub sigma: u32,
}

impl Lattice {
    pub fn new(sigma: u32) -> Self {
        Lattice { sigma }
    }

    /// Length of the central period `2/σ`.
    pub fn central_period(&self) -> f64 {
        2.0 / self.sigma as f64
    }

    /// Volume of the fundamental domain `[0,1)² × [0, 2/σ)`.
    pub fn covolume(&self) -> f64 {
        self.central_period()
    }

    pub fn generators(&self) -> [HeisenbergPoint; 3] {
        [
            HeisenbergPoint::new(Complex::new(1.0, 0.0), 0.0),
            HeisenbergPoint::new(Complex::new(0.0, 1.0), 0.0),
            HeisenbergPoint::center(self.central_period()),
        ]
    }

    /// Whether `ℓ` lies in `(σ/2)ℤ`, the allowed central parameters.
    pub fn admits(&self, ell: HalfInt) -> bool {
        ell.twice != 0 && ell.twice % self.sigma as i64 == 0
    }
}

/// The character `χ_β(n(b,r)) = e^{2πi Im(β̄ b)}`.
pub fn character_eval(beta: &GaussInt, x: &HeisenbergPoint) -> Complex {
    cis(2.0 * PI * (beta.to_complex().conj() * x.b).im)
}

/// The Schrödinger representation with central character `n(0,r) ↦ e^{2πiℓr}`:
/// `(π(n(x+iy,r))φ)(ξ) = e^{2πiℓ(r − 2ξx − xy)} φ(ξ + y)`.
pub fn schrodinger_act<'a>(
    ell: f64,
    x: HeisenbergPoint,
    phi: &'a dyn Fn(f64) -> Complex,
) -> impl Fn(f64) -> Complex + 'a {
    move |xi: f64| {
        let (bx, by) = (x.x(), x.y());
        cis(2.0 * PI * ell * (x.r - 2.0 * xi * bx - bx * by)) * phi(xi + by)
    }
}

/// Normalized Hermite function
/// `h_{ℓ,k}(ξ) = (4|ℓ|)^{1/4} 2^{−k/2} (k!)^{−1/2} H_k(√(4π|ℓ|) ξ) e^{−2π|ℓ|ξ²}`,
/// evaluated through the orthonormal three-term recurrence.
pub fn hermite_eval(ell: f64, k: u32, xi: f64) -> Result<f64, HeisenbergError> {
    if k > MAX_HERMITE_INDEX {
        return Err(HeisenbergError::IndexOverflow {
            k,
            max: MAX_HERMITE_INDEX,
        });
    }
    let a = 4.0 * PI * ell.abs();
    let z = a.sqrt() * xi;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-z * z / 2.0).exp();
    for j in 0..k {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * z * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(a.powf(0.25) * cur)
}

/// A rapidly decaying window function on ℝ with a known tail radius.
pub trait SchwartzWindow {
    fn eval(&self, xi: f64) -> Complex;
    /// Radius beyond which `|φ(ξ)| < tol`.
    fn tail_radius(&self, tol: f64) -> f64;
}

/// The Hermite function `h_{ℓ,k}` as a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteFunction {
    pub ell: f64,
    pub k: u32,
}

impl SchwartzWindow for HermiteFunction {
    fn eval(&self, xi: f64) -> Complex {
        Complex::new(hermite_eval(self.ell, self.k, xi).unwrap_or(f64::NAN), 0.0)
    }

    fn tail_radius(&self, tol: f64) -> f64 {
        let z = (2.0 * self.k as f64 + 1.0).sqrt() + (-2.0 * tol.ln()).sqrt() + 1.0;
        z / (4.0 * PI * self.ell.abs()).sqrt()
    }
}

/// A user window: a function plus an explicit decay radius.
pub struct Windowed<F: Fn(f64) -> Complex> {
    pub f: F,
    pub radius: f64,
}

impl<F: Fn(f64) -> Complex> SchwartzWindow for Windowed<F> {
    fn eval(&self, xi: f64) -> Complex {
        (self.f)(xi)
    }

    fn tail_radius(&self, _tol: f64) -> f64 {
        self.radius
    }
}

/// Parameters of a theta basis function `Θ_{ℓ,c}(h_{ℓ,m})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaParams {
    pub ell: HalfInt,
    pub c: i64,
    pub m: u32,
}

impl ThetaParams {
    /// Normalises `c` into `0..2|ℓ|`.
    pub fn new(ell: HalfInt, c: i64, m: u32) -> Result<Self, HeisenbergError> {
        if ell.twice == 0 {
            return Err(HeisenbergError::BadParams("ℓ must be non-zero".into()));
        }
        let period = ell.period() as i64;
        Ok(ThetaParams {
            ell,
            c: c.rem_euclid(period),
            m,
        })
    }

    pub fn window(&self) -> HermiteFunction {
        HermiteFunction {
            ell: self.ell.value(),
            k: self.m,
        }
    }
}

/// `Θ_{ℓ,c}(φ)(n)` for a general window `φ`.
pub fn theta_eval_window(
    ell: HalfInt,
    c: i64,
    phi: &dyn SchwartzWindow,
    x: &HeisenbergPoint,
) -> Result<Complex, HeisenbergError> {
    let l = ell.value();
    let shift = c as f64 / (2.0 * l);
    let radius = phi.tail_radius(1e-16);
    let lo = (-radius - shift - x.y()).ceil() as i64;
    let hi = (radius - shift - x.y()).floor() as i64;
    let needed = (hi - lo + 1).max(0) as usize;
    if needed > MAX_THETA_TERMS {
        return Err(HeisenbergError::TruncationFailure {
            needed,
            max: MAX_THETA_TERMS,
        });
    }
    let central = cis(2.0 * PI * l * x.r);
    let mut acc = CompensatedSum::new();
    for k in lo..=hi {
        let kf = k as f64;
        let xi = shift + kf + x.y();
        let phase = cis(-2.0 * PI * l * x.x() * (c as f64 / l + 2.0 * kf + x.y()));
        acc.add(phi.eval(xi) * phase);
    }
    Ok(central * acc.value())
}

/// `Θ_{ℓ,c}(h_{ℓ,m})(n)`.
pub fn theta_eval(p: &ThetaParams, x: &HeisenbergPoint) -> Result<Complex, HeisenbergError> {
    if p.m > MAX_HERMITE_INDEX {
        return Err(HeisenbergError::IndexOverflow {
            k: p.m,
            max: MAX_HERMITE_INDEX,
        });
    }
    theta_eval_window(p.ell, p.c, &p.window(), x)
}

/// A basis function of `L²(Λ_σ\N)`: a character or a theta function.
#[derive(Debug, Clone, PartialEq)]
pub enum NFactor {
    Character(GaussInt),
    Theta(ThetaParams),
}

impl NFactor {
    pub fn eval(&self, x: &HeisenbergPoint) -> Result<Complex, HeisenbergError> {
        match self {
            NFactor::Character(beta) => Ok(character_eval(beta, x)),
            NFactor::Theta(p) => theta_eval(p, x),
        }
    }

    /// Central parameter: `f(n(0,r)·n) = e^{2πiℓr} f(n)`.
    pub fn central(&self) -> f64 {
        match self {
            NFactor::Character(_) => 0.0,
            NFactor::Theta(p) => p.ell.value(),
        }
    }
}

/// Trapezoid grid on the fundamental domain `[0,1)² × [0, 2/σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NGrid {
    pub xy: usize,
    pub r: usize,
}

impl Default for NGrid {
    fn default() -> Self {
        NGrid { xy: 64, r: 16 }
    }
}

/// Integral over `Λ_σ\N` of a left-`Λ_σ`-invariant function, by the
/// tensor-product trapezoid rule on `[0,1)² × [0, 2/σ)` (Lebesgue measure, so
/// the constant function 1 has integral `2/σ`).
pub fn lattice_integral<E>(
    f: &dyn Fn(&HeisenbergPoint) -> Result<Complex, E>,
    lattice: Lattice,
    grid: NGrid,
) -> Result<Complex, E> {
    let period = lattice.central_period();
    let cell = period / (grid.xy * grid.xy * grid.r) as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..grid.xy {
        for j in 0..grid.xy {
            for k in 0..grid.r {
                let x = HeisenbergPoint::new(
                    Complex::new(i as f64 / grid.xy as f64, j as f64 / grid.xy as f64),
                    k as f64 * period / grid.r as f64,
                );
                acc.add(f(&x)?);
            }
        }
    }
    Ok(acc.value() * cell)
}

/// `⟨f₁, f₂⟩ = ∫_{Λ_σ\N} f₁ conj(f₂) dn` for basis functions with the same or
/// different central parameters.
pub fn theta_inner(
    f1: &NFactor,
    f2: &NFactor,
    lattice: Lattice,
    grid: NGrid,
) -> Result<Complex, HeisenbergError> {
    Ok(gram_matrix(&[f1.clone(), f2.clone()], lattice, grid)?[0][1])
}

/// Gram matrix of `basis` over `Λ_σ\N`.
///
/// Every basis function has the form `e^{2πiℓr} G(x, y)`, so the `r`-integral
/// is done separately (trapezoid, `grid.r` nodes) and the `(x, y)` integral uses
/// values of `G` tabulated once per function.
pub fn gram_matrix(
    basis: &[NFactor],
    lattice: Lattice,
    grid: NGrid,
) -> Result<Vec<Vec<Complex>>, HeisenbergError> {
    let n = grid.xy;
    let mut tables = Vec::with_capacity(basis.len());
    for f in basis {
        let mut vals = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = HeisenbergPoint::new(Complex::new(i as f64 / n as f64, j as f64 / n as f64), 0.0);
                vals.push(f.eval(&x)?);
            }
        }
        tables.push(vals);
    }
    let period = lattice.central_period();
    let r_integral = |dl: f64| -> Complex {
        let acc: CompensatedSum = (0..grid.r)
            .map(|k| cis(2.0 * PI * dl * k as f64 * period / grid.r as f64))
            .collect();
        acc.value() * (period / grid.r as f64)
    };
    let cell = 1.0 / (n * n) as f64;
    let mut out = vec![vec![Complex::new(0.0, 0.0); basis.len()]; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let rf = r_integral(basis[a].central() - basis[b].central());
            if rf.norm() < 1e-300 {
                continue;
            }
            let mut acc = CompensatedSum::new();
            for (u, v) in tables[a].iter().zip(&tables[b]) {
                acc.add(u * v.conj());
            }
            out[a][b] = acc.value() * cell * rf;
        }
    }
    Ok(out)
}

/// Coefficients of `Θ_{ℓ,c}(h_{ℓ,m})(n(ib, r))` in the basis
/// `{Θ_{ℓ,c′}(h_{ℓ,m})(n(b, r))}_{c′}`: for `f = Σ_c a_c Θ_c`, returns `b` with
/// `f(n(ib,r)) = Σ_{c′} b_{c′} Θ_{c′}(n(b,r))`, where
/// `b_{c′} = (i·sign ℓ)^m (2|ℓ|)^{−1/2} Σ_c a_c e^{−πicc′/ℓ}`.
pub fn mi_transform(ell: HalfInt, m: u32, coeffs: &[Complex]) -> Result<Vec<Complex>, HeisenbergError> {
    let size = ell.period();
    if coeffs.len() != size {
        return Err(HeisenbergError::SizeMismatch {
            got: coeffs.len(),
            expected: size,
        });
    }
    let unit = Complex::new(0.0, ell.signum() as f64);
    let pre = unit.powi((m % 4) as i32) / (size as f64).sqrt();
    let l = ell.value();
    Ok((0..size)
        .map(|cp| {
            let acc: CompensatedSum = coeffs
                .iter()
                .enumerate()
                .map(|(c, a)| a * cis(-PI * (c * cp) as f64 / l))
                .collect();
            pre * acc.value()
        })
        .collect())
}
