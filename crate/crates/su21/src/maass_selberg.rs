//! The sesquilinear form `{F₁, F₂}(t)`, the Maass–Selberg form, the combined
//! Wronskian `𝒲`, and the Wronskian-order classifier.
//!
//! For `F_i(n·a(t)·k) = Σ_r w_r(n) f_{i,r}(t) Φ^h_{p,r,q}(k)` the forms reduce to
//! sums over components:
//!
//! | quantity      | formula                                                          |
//! |---------------|------------------------------------------------------------------|
//! | `{F₁,F₂}(t)`  | `(2/σ)‖Φ^h_{p,p,q}‖² Σ_r C(p,(p+r)/2) f_{1,r} conj f_{2,r}`       |
//! | `𝒲(F₁,F₂)(t)` | `Σ_r C(p,(p+r)/2) Wr(f_{1,r}, conj f_{2,r})`                      |
//! | `MS(F₁,F₂)`   | `(2/σ)‖Φ‖² Σ_r C(p,(p+r)/2)(−3t Wr₁ + t² Wr₂) = (2/σ)‖Φ‖² t⁵ ∂_t(t⁻³𝒲)` |
//!
//! The classifier decides the order of `ν ↦ I(φ; ν, ν₀)/(ν² − ν₀²)` at `ν₀`
//! from the value of `𝒲(Μ(ν₀), Ω(ν₀))`, its `ν`-derivative and the bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fourier_basis::{mu_1d, mu_hd, omega_1d, omega_hd, FourierError, FourierTermFunction};
use crate::heisenberg::Lattice;
use crate::ktype_poly::{kpoly_norm_sqr, KIndex};
use crate::numeric_core::{gauss_legendre, richardson, Complex};
use crate::specfun::gamma;
use crate::spectral::{nonabelian_indices, FourierTermOrder, IsoClass, IsoFamily, NonAbelianOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaassSelbergError {
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error("functions in a radial pair must share order, K-type, weight and N-factors")]
    IncompatiblePair,
    #[error("lattice Λ_σ with σ = {sigma} does not admit the order")]
    LatticeMismatch { sigma: u32 },
    #[error("Maass–Selberg form: eigenvalue and Wronskian paths differ by {diff:.3e} (scale {scale:.3e})")]
    PrecisionLoss { diff: f64, scale: f64 },
    #[error("numeric Wronskian {numeric} disagrees with closed form {closed}")]
    Mismatch { numeric: Complex, closed: Complex },
    #[error("Wronskian order undecidable: {0}")]
    Unclassifiable(String),
}

type Result<T> = std::result::Result<T, MaassSelbergError>;

/// Binomial weight with `[f, f′, f″]` of `f_{1,r}` and of `conj f_{2,r}`.
type RadialComponent = (f64, [Complex; 3], [Complex; 3]);

/// Two Fourier-term functions with the same order, K-type, weight and N-factors.
#[derive(Debug, Clone)]
pub struct RadialPair {
    pub f1: FourierTermFunction,
    pub f2: FourierTermFunction,
    pub lattice: Lattice,
}

impl RadialPair {
    pub fn new(f1: FourierTermFunction, f2: FourierTermFunction, lattice: Lattice) -> Result<Self> {
        let same_components = f1.components.len() == f2.components.len()
            && f1
                .components
                .iter()
                .zip(&f2.components)
                .all(|(a, b)| a.r == b.r && a.nfactor == b.nfactor);
        if f1.order != f2.order || f1.kweight != f2.kweight || !same_components {
            return Err(MaassSelbergError::IncompatiblePair);
        }
        if let FourierTermOrder::NonAbelian(o) = &f1.order {
            if !lattice.admits(o.ell) {
                return Err(MaassSelbergError::LatticeMismatch { sigma: lattice.sigma });
            }
        }
        Ok(RadialPair { f1, f2, lattice })
    }

    /// `(2/σ)‖Φ^h_{p,p,q}‖²_K`.
    pub fn prefactor(&self) -> f64 {
        let w = self.f1.kweight;
        let idx = KIndex::new(w.h, w.p, w.p, w.q).expect("valid K-type");
        self.lattice.covolume() * kpoly_norm_sqr(idx)
    }

    /// Per component: binomial weight, value/derivatives of `f_{1,r}` and of `conj f_{2,r}`.
    fn components(&self, t: f64) -> Result<Vec<RadialComponent>> {
        let p = self.f1.kweight.p;
        let mut out = Vec::with_capacity(self.f1.components.len());
        for (a, b) in self.f1.components.iter().zip(&self.f2.components) {
            let d1 = a.radial.derivatives(t)?;
            let d2 = b.radial.derivatives(t)?.map(|z| z.conj());
            out.push((binomial(p, (p + a.r) / 2), d1, d2));
        }
        Ok(out)
    }
}

fn binomial(n: i64, k: i64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `{F₁, F₂}(t)`.
pub fn bracket(pair: &RadialPair, t: f64) -> Result<Complex> {
    let sum: Complex = pair.components(t)?.iter().map(|(b, d1, d2)| *b * d1[0] * d2[0]).sum();
    Ok(pair.prefactor() * sum)
}

/// `𝒲(F₁, F₂)(t)` together with the magnitude scale `Σ C·(|f₁||f₂′| + |f₁′||f₂|)`.
pub fn script_w_with_scale(pair: &RadialPair, t: f64) -> Result<(Complex, f64)> {
    let mut w = Complex::new(0.0, 0.0);
    let mut scale = 0.0;
    for (b, d1, d2) in pair.components(t)? {
        w += b * (d1[0] * d2[1] - d1[1] * d2[0]);
        scale += b * (d1[0].norm() * d2[1].norm() + d1[1].norm() * d2[0].norm());
    }
    Ok((w, scale))
}

/// `𝒲(F₁, F₂)(t) = Σ_r C(p,(p+r)/2) Wr(f_{1,r}, conj f_{2,r})(t)`.
pub fn script_w(pair: &RadialPair, t: f64) -> Result<Complex> {
    Ok(script_w_with_scale(pair, t)?.0)
}

/// The Maass–Selberg form from the radial Wronskians.
pub fn ms_wronskian_form(pair: &RadialPair, t: f64) -> Result<Complex> {
    let sum: Complex = pair
        .components(t)?
        .iter()
        .map(|(b, d1, d2)| {
            let wr1 = d1[0] * d2[1] - d1[1] * d2[0];
            let wr2 = d1[0] * d2[2] - d1[2] * d2[0];
            *b * (-3.0 * t * wr1 + t * t * wr2)
        })
        .sum();
    Ok(pair.prefactor() * sum)
}

/// The Maass–Selberg form from the Casimir eigenvalues:
/// `{F₁, CF₂} − {CF₁, F₂} = (conj λ₂ − λ₁){F₁, F₂}`.
pub fn ms_eigen_form(pair: &RadialPair, t: f64) -> Result<Complex> {
    let lam = pair.f2.eigenvalue().conj() - pair.f1.eigenvalue();
    Ok(lam * bracket(pair, t)?)
}

/// Relative tolerance between the two Maass–Selberg paths.
pub const MS_TOL: f64 = 1e-6;

/// `MS(F₁, F₂)(t)`, computed from the Wronskians and checked against the
/// eigenvalue shortcut.
pub fn ms_form(pair: &RadialPair, t: f64) -> Result<Complex> {
    let wr = ms_wronskian_form(pair, t)?;
    let ev = ms_eigen_form(pair, t)?;
    let comps = pair.components(t)?;
    let scale = pair.prefactor()
        * comps
            .iter()
            .map(|(b, d1, d2)| {
                b * (t * (d1[0].norm() * d2[1].norm() + d1[1].norm() * d2[0].norm())
                    + t * t * (d1[0].norm() * d2[2].norm() + d1[2].norm() * d2[0].norm())
                    + d1[0].norm() * d2[0].norm())
            })
            .sum::<f64>();
    let diff = (wr - ev).norm();
    if diff > MS_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(MaassSelbergError::PrecisionLoss { diff, scale });
    }
    Ok(wr)
}

/// `I(φ) = ∫ φ′(t) 𝒲(F₁,F₂)(t) t⁻³ dt` for `φ′` supported in `[a, b]`,
/// by composite Gauss–Legendre quadrature.
pub fn difwr_integral(pair: &RadialPair, phi_prime: &dyn Fn(f64) -> f64, support: (f64, f64)) -> Result<Complex> {
    let (x, w) = gauss_legendre(16);
    let panels = 32;
    let (a, b) = support;
    let hpan = (b - a) / panels as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 0..panels {
        let lo = a + k as f64 * hpan;
        for (xi, wi) in x.iter().zip(&w) {
            let t = lo + 0.5 * hpan * (xi + 1.0);
            let dphi = phi_prime(t);
            if dphi != 0.0 {
                acc += 0.5 * hpan * wi * dphi * script_w(pair, t)? / (t * t * t);
            }
        }
    }
    Ok(acc)
}

/// `Σ_{n=0}^{p₀} (−1)ⁿ C(p₀,n)/(n+1)` as an exact rational.
pub fn binomial_alternating(p0: u32) -> BigRational {
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for n in 0..=p0 {
        let term = BigRational::new(binom.clone(), BigInt::from(n + 1));
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(p0 - n) / BigInt::from(n + 1);
    }
    acc
}

/// The pair `(Μ(ν), Ω(ν₀))` in the minimal K-type of `class`, with weight `q = p₀`.
///
/// For higher-dimensional minimal K-types the explicit families exist only at
/// `ν = p₀`, so `nu` must equal `ν₀` there.
pub fn basis_pair(class: &IsoClass, order: &FourierTermOrder, nu: Complex) -> Result<RadialPair> {
    let lattice = lattice_for(order);
    let (mu, om) = if class.p0 == 0 {
        (mu_1d(order, class.j, nu)?, omega_1d(order, class.j, class.nu0)?)
    } else {
        (mu_hd(order, class, class.p0)?, omega_hd(order, class, class.p0)?)
    };
    RadialPair::new(mu, om, lattice)
}

/// The coarsest of `Λ₄, Λ₂, Λ₁` on which the order is defined.
fn lattice_for(order: &FourierTermOrder) -> Lattice {
    match order {
        FourierTermOrder::NonAbelian(o) => [4, 2, 1]
            .into_iter()
            .map(Lattice::new)
            .find(|l| l.admits(o.ell))
            .unwrap_or(Lattice::new(1)),
        FourierTermOrder::Abelian { .. } => Lattice::new(4),
    }
}

fn nonabelian(order: &FourierTermOrder) -> Option<&NonAbelianOrder> {
    match order {
        FourierTermOrder::NonAbelian(o) => Some(o),
        FourierTermOrder::Abelian { .. } => None,
    }
}

/// Closed form of `𝒲(Μ(ν₀), Ω(ν₀))(t)`:
/// `−t³` (abelian, `p₀ = 0`), `−4π|ℓ|Γ(ν₀+1)t³/Γ((ν₀+1)/2 − κ)` (non-abelian,
/// `p₀ = 0`), and `0` for higher-dimensional minimal K-types, where the
/// component Wronskians cancel in the alternating binomial sum.
pub fn wronskian_closed_form(class: &IsoClass, order: &FourierTermOrder, t: f64) -> Result<Complex> {
    if class.p0 > 0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let t3 = t * t * t;
    match nonabelian(order) {
        None => Ok(Complex::new(-t3, 0.0)),
        Some(o) => {
            let (_, kappa) = nonabelian_indices(class.j, o).map_err(FourierError::from)?;
            let nu0 = class.nu0;
            if closed_form_vanishes(class, order)? {
                return Ok(Complex::new(0.0, 0.0));
            }
            let g = gamma(nu0 + 1.0) / gamma((nu0 + 1.0) / 2.0 - kappa);
            Ok(-4.0 * std::f64::consts::PI * o.ell.value().abs() * g * t3)
        }
    }
}

/// Whether the closed form of `𝒲(Μ(ν₀), Ω(ν₀))` vanishes identically:
/// never in the abelian one-dimensional case, when `(ν₀+1)/2 − κ ∈ ℤ≤0` in the
/// non-abelian one-dimensional case, always for `p₀ ≥ 1`.
pub fn closed_form_vanishes(class: &IsoClass, order: &FourierTermOrder) -> Result<bool> {
    if class.p0 > 0 {
        return Ok(true);
    }
    match nonabelian(order) {
        None => Ok(false),
        Some(o) => {
            let (_, kappa) = nonabelian_indices(class.j, o).map_err(FourierError::from)?;
            let z = (class.nu0 + 1.0) / 2.0 - kappa;
            let r = z.re.round();
            Ok(z.im.abs() < 1e-12 && (z.re - r).abs() < 1e-12 && r <= 0.0)
        }
    }
}

/// Relative tolerance between the numeric and closed-form Wronskians.
pub const WRONSKIAN_TOL: f64 = 1e-7;

/// `𝒲(Μ(ν₀), Ω(ν₀))(t)`, computed numerically and checked against the closed form.
pub fn wronskian_mu_omega(class: &IsoClass, order: &FourierTermOrder, t: f64) -> Result<Complex> {
    let pair = basis_pair(class, order, class.nu0)?;
    let (numeric, scale) = script_w_with_scale(&pair, t)?;
    let closed = wronskian_closed_form(class, order, t)?;
    if (numeric - closed).norm() > WRONSKIAN_TOL * scale.max(closed.norm()) {
        return Err(MaassSelbergError::Mismatch { numeric, closed });
    }
    Ok(closed)
}

/// Sample points for identity tests in `t`.
pub const T_SAMPLES: [f64; 5] = [0.35, 0.6, 0.9, 1.3, 1.8];
/// `𝒲` counts as identically zero below this multiple of its magnitude scale.
pub const ZERO_TOL: f64 = 1e-9;
/// Step in `ν` for the limit defining `a`.
pub const NU_STEP: f64 = 1e-3;

/// Evidence collected by the classifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderCertificate {
    pub order: u8,
    /// `max_t |𝒲(t)| / scale(t)` over [`T_SAMPLES`].
    pub w_relative: f64,
    pub closed_form_zero: bool,
    /// `lim_{ν→0} Γ((1+ν)/2 − κ) 𝒲(Μ(ν), Ω(0))(t) / t³`, when computed.
    pub a: Option<Complex>,
    pub bracket_nonzero: Option<bool>,
}

fn bracket_nonzero(pair: &RadialPair) -> Result<bool> {
    for &t in &T_SAMPLES {
        let comps = pair.components(t)?;
        let b = bracket(pair, t)?;
        let scale: f64 = pair.prefactor() * comps.iter().map(|(c, d1, d2)| c * d1[0].norm() * d2[0].norm()).sum::<f64>();
        if b.norm() > 1e-6 * scale {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The regularized limit `a` at `ν₀ = 0`, from symmetric evaluations at
/// `ν = ±ε`, `ε ∈ {h, h/2}`, combined by Richardson, at time `t`.
fn regularized_slope(class: &IsoClass, order: &FourierTermOrder, t: f64) -> Result<Complex> {
    let o = nonabelian(order).ok_or_else(|| MaassSelbergError::Unclassifiable("ν₀ = 0 degeneracy in an abelian order".into()))?;
    let (_, kappa) = nonabelian_indices(class.j, o).map_err(FourierError::from)?;
    let g = |nu: f64| -> Result<Complex> {
        let pair = basis_pair(class, order, Complex::new(nu, 0.0))?;
        let w = script_w(&pair, t)?;
        Ok(gamma(Complex::new((1.0 + nu) / 2.0 - kappa, 0.0)) * w / (t * t * t))
    };
    let sym = |e: f64| -> Result<Complex> { Ok((g(e)? + g(-e)?) / 2.0) };
    Ok(richardson(sym(NU_STEP)?, sym(NU_STEP / 2.0)?, 2.0, 2))
}

/// Runs the classifier and returns the evidence with the order.
pub fn wronskian_order_detail(class: &IsoClass, order: &FourierTermOrder) -> Result<OrderCertificate> {
    if order.is_abelian() && matches!(class.family, IsoFamily::HoloDS | IsoFamily::AntiholoDS) {
        return Err(MaassSelbergError::Unclassifiable(
            "holomorphic and antiholomorphic types have no abelian Fourier terms".into(),
        ));
    }
    let pair = basis_pair(class, order, class.nu0)?;
    let mut w_relative = 0.0f64;
    for &t in &T_SAMPLES {
        let (w, scale) = script_w_with_scale(&pair, t)?;
        w_relative = w_relative.max(w.norm() / scale.max(f64::MIN_POSITIVE));
    }
    let numeric_zero = w_relative < ZERO_TOL;
    let closed_form_zero = closed_form_vanishes(class, order)?;
    if numeric_zero != closed_form_zero {
        return Err(MaassSelbergError::Unclassifiable(format!(
            "numeric 𝒲 relative size {w_relative:.3e} but closed form zero = {closed_form_zero}"
        )));
    }
    let nu0_zero = class.nu0.norm() < 1e-14;
    let mut cert = OrderCertificate {
        order: 0,
        w_relative,
        closed_form_zero,
        a: None,
        bracket_nonzero: None,
    };
    if !numeric_zero {
        cert.order = if nu0_zero { 2 } else { 1 };
        return Ok(cert);
    }
    if !nu0_zero {
        let nz = bracket_nonzero(&pair)?;
        cert.bracket_nonzero = Some(nz);
        if !nz {
            return Err(MaassSelbergError::Unclassifiable("𝒲 and the bracket both vanish".into()));
        }
        cert.order = 0;
        return Ok(cert);
    }
    let (t1, t2) = (0.7, 1.1);
    let (a1, a2) = (regularized_slope(class, order, t1)?, regularized_slope(class, order, t2)?);
    if (a1 - a2).norm() > 1e-4 * a1.norm().max(a2.norm()).max(1e-12) {
        return Err(MaassSelbergError::Unclassifiable(format!("a(t) not constant: {a1} vs {a2}")));
    }
    cert.a = Some(a1);
    if a1.norm() > 1e-6 {
        cert.order = 1;
        return Ok(cert);
    }
    let nz = bracket_nonzero(&pair)?;
    cert.bracket_nonzero = Some(nz);
    if !nz {
        return Err(MaassSelbergError::Unclassifiable("a = 0 and the bracket vanishes".into()));
    }
    cert.order = 0;
    Ok(cert)
}

/// The Wronskian order `∈ {0, 1, 2}` of `class` at the Fourier term order.
pub fn wronskian_order(class: &IsoClass, order: &FourierTermOrder) -> Result<u8> {
    Ok(wronskian_order_detail(class, order)?.order)
}

/// One populated cell of the Wronskian-order table.
#[derive(Debug, Clone)]
pub struct Table2Cell {
    pub row: &'static str,
    pub column: &'static str,
    pub class: IsoClass,
    pub order: FourierTermOrder,
    pub expected: u8,
}

/// Representatives for every populated cell of the Wronskian-order table.
pub fn table2_cells() -> Vec<Table2Cell> {
    let ab = FourierTermOrder::abelian(1, 0);
    let na = |ell: i64, c: i64, d: i64| FourierTermOrder::NonAbelian(NonAbelianOrder::with_int_ell(ell, c, d).expect("valid order"));
    let cell = |row, column, class: IsoClass, order: FourierTermOrder, expected| Table2Cell {
        row,
        column,
        class,
        order,
        expected,
    };
    let ok = |c: std::result::Result<IsoClass, crate::spectral::SpectralError>| c.expect("representative in range");
    vec![
        cell("generic abelian", "unitary principal series", ok(IsoClass::unitary_ps(0, 0.7)), ab.clone(), 1),
        cell("generic abelian", "unitary principal series, nu0 = 0", ok(IsoClass::unitary_ps(0, 0.0)), ab.clone(), 2),
        cell("generic abelian", "complementary series", ok(IsoClass::complementary(0, 0.5)), ab.clone(), 1),
        cell("generic abelian", "large discrete series type", ok(IsoClass::large_ds(1, 3)), ab, 0),
        cell("non-abelian", "unitary principal series", ok(IsoClass::unitary_ps(0, 0.7)), na(2, 0, 3), 1),
        cell("non-abelian", "unitary principal series, nu0 = 0", ok(IsoClass::unitary_ps(0, 0.0)), na(2, 0, 3), 2),
        cell("non-abelian", "complementary series", ok(IsoClass::complementary(0, 0.5)), na(2, 0, 3), 1),
        cell("non-abelian", "large discrete series type", ok(IsoClass::large_ds(1, 3)), na(2, 0, 11), 0),
        cell("non-abelian", "holo/antiholo discrete series type", ok(IsoClass::holo_ds(4, 2)), na(-2, 0, 5), 0),
        cell("non-abelian", "holo/antiholo discrete series type, nu0 = 0", ok(IsoClass::holo_ds(4, 0)), na(-2, 0, 5), 1),
        cell("non-abelian", "thin T(-1)", ok(IsoClass::thin_plus(-1)), na(-2, 0, -1), 1),
        cell("non-abelian", "thin T(k), k >= 0", ok(IsoClass::thin_plus(0)), na(-2, 1, -3), 0),
    ]
}
