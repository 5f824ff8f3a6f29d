//! Evaluable Fourier-term basis functions on `G`.
//!
//! Every function here has the Iwasawa factorization
//! `f(n·a(t)·k) = Σ_r w_r(n) · f_r(t) · Φ^h_{p,r,q}(k)`, where `w_r` is a
//! character `χ_β` (abelian order) or a theta function `Θ_{ℓ,c}(h_{ℓ,m})`
//! (non-abelian order), and each radial part is `c · t^a · F(α t^e)` for a
//! Bessel or Whittaker function `F`.
//!
//! | family      | abelian radial part          | non-abelian radial part            |
//! |-------------|------------------------------|------------------------------------|
//! | `ω` (Omega) | `t² K_ν(2π|β|t)`             | `t W_{κ,ν/2}(2π|ℓ|t²)`             |
//! | `μ` (Mu)    | `t² I_ν(2π|β|t)`             | `t M_{κ,ν/2}(2π|ℓ|t²)`             |
//! | `υ`         | none                         | `t V_{κ,ν/2}(2π|ℓ|t²)`             |
//!
//! The higher-dimensional minimal K-types use the explicit sums over `r`
//! built by [`omega_hd`] and [`mu_hd`]. [`casimir_apply`] applies the Casimir
//! element by finite-difference right derivatives and certifies eigenfunctions.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::group_core::{iwasawa, GroupElement, GroupError, LieVector, RealLie};
use crate::heisenberg::{HeisenbergError, HeisenbergPoint, NFactor, ThetaParams};
use crate::ktype_poly::{kpoly_eval, KIndex, KPoint};
use crate::numeric_core::{exp_pi_i, Complex, Mat3, I};
use crate::specfun::{gamma, gamma_real, SpecFunError, SpecialFn, WhittakerParams};
use crate::spectral::{
    highdim_indices, nonabelian_indices, FourierTermOrder, IsoClass, NonAbelianOrder, SpectralError,
    SpectralParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the trivial order β = 0 has no Fourier term basis")]
    TrivialOrder,
    #[error("{0} is only defined for non-abelian orders")]
    NeedsNonAbelian(&'static str),
    #[error("Casimir finite differences disagree: {diff:.3e} against scale {scale:.3e}")]
    PrecisionLoss { diff: f64, scale: f64 },
    #[error("functions do not share order, K-type and components")]
    Incompatible,
}

type Result<T> = std::result::Result<T, FourierError>;

/// Which basis family a function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    Mu,
    Omega,
    Upsilon,
}

/// The K-type and weight `(h, p, q)` of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KWeight {
    pub h: i64,
    pub p: i64,
    pub q: i64,
}

/// A radial part `coeff · t^power · func(scale · t^exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFactor {
    pub coeff: Complex,
    pub power: i32,
    pub func: SpecialFn,
    pub scale: f64,
    pub exponent: i32,
}

impl RadialFactor {
    pub fn value(&self, t: f64) -> Result<Complex> {
        let x = self.scale * t.powi(self.exponent);
        Ok(self.coeff * t.powi(self.power) * self.func.eval(x)?)
    }

    /// Value and first two derivatives in `t`, by the chain rule.
    pub fn derivatives(&self, t: f64) -> Result<[Complex; 3]> {
        let e = self.exponent as f64;
        let a = self.power as f64;
        let x = self.scale * t.powi(self.exponent);
        let dx = self.scale * e * t.powi(self.exponent - 1);
        let ddx = self.scale * e * (e - 1.0) * t.powi(self.exponent - 2);
        let (f, df) = self.func.eval_with_deriv(x)?;
        let ddf = self.func.second_deriv(x)?;
        let g = t.powi(self.power);
        let dg = a * t.powi(self.power - 1);
        let ddg = a * (a - 1.0) * t.powi(self.power - 2);
        Ok([
            self.coeff * g * f,
            self.coeff * (dg * f + g * df * dx),
            self.coeff * (ddg * f + 2.0 * dg * df * dx + g * (ddf * dx * dx + df * ddx)),
        ])
    }
}

/// One summand `w_r(n) · f_r(t) · Φ^h_{p,r,q}(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub r: i64,
    pub nfactor: NFactor,
    pub radial: RadialFactor,
}

/// A Fourier-term basis function in a fixed K-type and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTermFunction {
    pub order: FourierTermOrder,
    pub params: SpectralParams,
    pub kind: BasisKind,
    pub kweight: KWeight,
    pub components: Vec<Component>,
}

impl FourierTermFunction {
    pub fn kindex(&self, r: i64) -> KIndex {
        KIndex::new(self.kweight.h, self.kweight.p, r, self.kweight.q).expect("component index validated at construction")
    }

    /// `f(n·a(t)·k)`.
    pub fn eval_nak(&self, n: &HeisenbergPoint, t: f64, k: &KPoint) -> Result<Complex> {
        let mut acc = Complex::new(0.0, 0.0);
        for c in &self.components {
            acc += c.nfactor.eval(n)? * c.radial.value(t)? * kpoly_eval(self.kindex(c.r), k);
        }
        Ok(acc)
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Complex> {
        let w = iwasawa(g)?;
        self.eval_nak(&w.n, w.t, &KPoint::from_matrix_unchecked(w.k.matrix()))
    }

    pub fn eval_matrix(&self, g: &Mat3) -> Result<Complex> {
        self.eval(&GroupElement::from_trusted(*g))
    }

    /// Radial component `f_r(t)`, zero when `r` does not occur.
    pub fn radial(&self, r: i64, t: f64) -> Result<Complex> {
        match self.components.iter().find(|c| c.r == r) {
            Some(c) => c.radial.value(t),
            None => Ok(Complex::new(0.0, 0.0)),
        }
    }

    /// The same function in weight `q` of its K-type.
    pub fn with_q(&self, q: i64) -> Result<Self> {
        KIndex::new(self.kweight.h, self.kweight.p, self.kweight.p, q)
            .map_err(|_| FourierError::Spectral(SpectralError::BadIndex(format!("q = {q}"))))?;
        let mut out = self.clone();
        out.kweight.q = q;
        Ok(out)
    }

    /// Casimir eigenvalue `λ(j, ν)` of the family.
    pub fn eigenvalue(&self) -> Complex {
        self.params.casimir_eigenvalue()
    }
}

fn abelian_beta(order: &FourierTermOrder) -> Option<Result<(NFactor, f64, Complex)>> {
    match order {
        FourierTermOrder::Abelian { beta } => {
            if beta.is_zero() {
                return Some(Err(FourierError::TrivialOrder));
            }
            let b = beta.to_complex();
            Some(Ok((NFactor::Character(beta.clone()), b.norm(), b / b.norm())))
        }
        FourierTermOrder::NonAbelian(_) => None,
    }
}

fn theta_factor(o: &NonAbelianOrder, m: i64) -> Result<NFactor> {
    Ok(NFactor::Theta(ThetaParams::new(o.ell, o.c, m as u32)?))
}

fn build_1d(order: &FourierTermOrder, j: i64, nu: Complex, kind: BasisKind) -> Result<FourierTermFunction> {
    let component = match order {
        FourierTermOrder::Abelian { .. } => {
            let (nf, abs_beta, _) = abelian_beta(order).expect("abelian")?;
            let func = match kind {
                BasisKind::Omega => SpecialFn::BesselK(nu),
                BasisKind::Mu => SpecialFn::BesselI(nu),
                BasisKind::Upsilon => return Err(FourierError::NeedsNonAbelian("υ")),
            };
            Component {
                r: 0,
                nfactor: nf,
                radial: RadialFactor {
                    coeff: Complex::new(1.0, 0.0),
                    power: 2,
                    func,
                    scale: 2.0 * PI * abs_beta,
                    exponent: 1,
                },
            }
        }
        FourierTermOrder::NonAbelian(o) => {
            let (m0, kappa) = nonabelian_indices(j, o)?;
            let wp = WhittakerParams::new(kappa, nu / 2.0);
            let func = match kind {
                BasisKind::Omega => SpecialFn::WhittakerW(wp),
                BasisKind::Mu => SpecialFn::WhittakerM(wp),
                BasisKind::Upsilon => SpecialFn::WhittakerV(wp),
            };
            Component {
                r: 0,
                nfactor: theta_factor(o, m0)?,
                radial: RadialFactor {
                    coeff: Complex::new(1.0, 0.0),
                    power: 1,
                    func,
                    scale: 2.0 * PI * o.ell.value().abs(),
                    exponent: 2,
                },
            }
        }
    };
    if kind == BasisKind::Mu {
        // Surface the pole of M at 1 + ν ∈ ℤ≤0 at construction time.
        component.radial.value(1.0)?;
    }
    Ok(FourierTermFunction {
        order: order.clone(),
        params: SpectralParams::new(j, nu),
        kind,
        kweight: KWeight { h: 2 * j, p: 0, q: 0 },
        components: vec![component],
    })
}

/// `ω(j, ν)` in the K-type `(2j, 0, 0)`.
pub fn omega_1d(order: &FourierTermOrder, j: i64, nu: Complex) -> Result<FourierTermFunction> {
    build_1d(order, j, nu, BasisKind::Omega)
}

/// `μ(j, ν)` in the K-type `(2j, 0, 0)`.
pub fn mu_1d(order: &FourierTermOrder, j: i64, nu: Complex) -> Result<FourierTermFunction> {
    build_1d(order, j, nu, BasisKind::Mu)
}

/// `υ(j, ν)` in the K-type `(2j, 0, 0)`, non-abelian orders only.
pub fn upsilon_1d(order: &FourierTermOrder, j: i64, nu: Complex) -> Result<FourierTermFunction> {
    if order.is_abelian() {
        return Err(FourierError::NeedsNonAbelian("υ"));
    }
    build_1d(order, j, nu, BasisKind::Upsilon)
}

fn factorial(n: i64) -> f64 {
    gamma_real(n as f64 + 1.0)
}

/// `c^M = −e^{πi(m−κ)} Γ(½+|s|−κ) / (√(m!) (2|s|)!)`.
pub fn m_coefficient(m: i64, kappa: f64, s: f64) -> Complex {
    let abs_s = s.abs();
    let g = gamma(Complex::new(0.5 + abs_s - kappa, 0.0));
    -exp_pi_i(Complex::new(m as f64 - kappa, 0.0)) * g / (factorial(m).sqrt() * factorial((2.0 * abs_s).round() as i64))
}

fn build_hd(order: &FourierTermOrder, class: &IsoClass, q: i64, kind: BasisKind) -> Result<FourierTermFunction> {
    if class.p0 < 1 {
        return Err(SpectralError::OutOfRange {
            family: class.family.name(),
            constraint: "a minimal K-type with p₀ ≥ 1",
        }
        .into());
    }
    let (h, p) = (class.h0, class.p0);
    KIndex::new(h, p, p, q).map_err(|_| SpectralError::BadIndex(format!("q = {q} for p = {p}")))?;
    let mut components = Vec::new();
    match order {
        FourierTermOrder::Abelian { .. } => {
            let (nf, abs_beta, unit) = abelian_beta(order).expect("abelian")?;
            for r in (-p..=p).step_by(2) {
                let e = ((r + p) / 2) as i32;
                let bessel_order = Complex::new((h - r).abs() as f64 / 2.0, 0.0);
                let (coeff, func) = match kind {
                    BasisKind::Omega => (unit.powi(e), SpecialFn::BesselK(bessel_order)),
                    BasisKind::Mu => ((-unit).powi(e), SpecialFn::BesselI(bessel_order)),
                    BasisKind::Upsilon => return Err(FourierError::NeedsNonAbelian("υ")),
                };
                components.push(Component {
                    r,
                    nfactor: nf.clone(),
                    radial: RadialFactor {
                        coeff,
                        power: (2 + p) as i32,
                        func,
                        scale: 2.0 * PI * abs_beta,
                        exponent: 1,
                    },
                });
            }
        }
        FourierTermOrder::NonAbelian(o) => {
            if kind == BasisKind::Upsilon {
                return Err(SpectralError::BadIndex("no explicit υ in higher-dimensional K-types".into()).into());
            }
            for r in (-p..=p).step_by(2) {
                let idx = highdim_indices(h, r, o)?;
                if idx.m < 0 {
                    continue;
                }
                let (coeff, func) = match kind {
                    BasisKind::Omega => (
                        I.powi(idx.m as i32) * factorial(idx.m).sqrt(),
                        SpecialFn::WhittakerW(WhittakerParams::real(idx.kappa, idx.s)),
                    ),
                    _ => (
                        m_coefficient(idx.m, idx.kappa, idx.s),
                        SpecialFn::WhittakerM(WhittakerParams::real(idx.kappa, idx.s.abs())),
                    ),
                };
                components.push(Component {
                    r,
                    nfactor: theta_factor(o, idx.m)?,
                    radial: RadialFactor {
                        coeff,
                        power: (1 + p) as i32,
                        func,
                        scale: 2.0 * PI * o.ell.value().abs(),
                        exponent: 2,
                    },
                });
            }
        }
    }
    Ok(FourierTermFunction {
        order: order.clone(),
        params: SpectralParams::real(-h, p as f64),
        kind,
        kweight: KWeight { h, p, q },
        components,
    })
}

/// `Ω` in the minimal K-type `τ^{h₀}_{p₀}` of a class with `p₀ ≥ 1`, weight `q`.
pub fn omega_hd(order: &FourierTermOrder, class: &IsoClass, q: i64) -> Result<FourierTermFunction> {
    build_hd(order, class, q, BasisKind::Omega)
}

/// `Μ` in the minimal K-type `τ^{h₀}_{p₀}` of a class with `p₀ ≥ 1`, weight `q`.
pub fn mu_hd(order: &FourierTermOrder, class: &IsoClass, q: i64) -> Result<FourierTermFunction> {
    build_hd(order, class, q, BasisKind::Mu)
}

/// Finite-difference steps used by [`casimir_apply`].
pub const CASIMIR_STEP: f64 = 1e-3;
/// Relative tolerance between the two finite-difference levels.
pub const CASIMIR_LEVEL_TOL: f64 = 1e-4;

/// A coefficient times a product `X·Y` of Lie algebra elements.
type SecondOrderTerm = (Complex, LieVector, LieVector);

/// The Casimir element as `(second-order monomials, first-order terms)`:
/// `C = −⅓CK² + 2i·CK − W0² + 2i·W0 − Z12·Z21 + 4·Z13·Z31 + 4·Z23·Z32`.
fn casimir_terms() -> (Vec<SecondOrderTerm>, Vec<(Complex, LieVector)>) {
    let w0 = LieVector::basis(RealLie::W0);
    let one = Complex::new(1.0, 0.0);
    let second = vec![
        (one * (-1.0 / 3.0), LieVector::ck(), LieVector::ck()),
        (-one, w0, w0),
        (-one, LieVector::z12(), LieVector::z21()),
        (one * 4.0, LieVector::z13(), LieVector::z31()),
        (one * 4.0, LieVector::z23(), LieVector::z32()),
    ];
    let first = vec![(2.0 * I, LieVector::ck()), (2.0 * I, w0)];
    (second, first)
}

/// Applies the Casimir element to `f` at `g` by right differentiation.
///
/// Each monomial `XY` becomes `∂s∂t f(g e^{sX} e^{tY})` at `0`, expanded in the
/// real basis; the sum is formed at steps `h` and `h/2` and Richardson-combined.
pub fn casimir_apply(f: &FourierTermFunction, g: &GroupElement) -> Result<Complex> {
    let (second, first) = casimir_terms();
    let mut c2 = [[Complex::new(0.0, 0.0); 8]; 8];
    for (c, x, y) in &second {
        for a in 0..8 {
            for b in 0..8 {
                c2[a][b] += c * x.0[a] * y.0[b];
            }
        }
    }
    let mut c1 = [Complex::new(0.0, 0.0); 8];
    for (c, x) in &first {
        for a in 0..8 {
            c1[a] += c * x.0[a];
        }
    }
    let gm = *g.matrix();
    let ev = |m: Mat3| f.eval_matrix(&m);
    let level = |h: f64| -> Result<(Complex, f64)> {
        let mut acc = Complex::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for (a, row) in c2.iter().enumerate() {
            for (b, &coef) in row.iter().enumerate() {
                if coef.norm() == 0.0 {
                    continue;
                }
                let (ea, eb) = (RealLie::ALL[a], RealLie::ALL[b]);
                let (xp, xm, yp, ym) = (ea.exp(h), ea.exp(-h), eb.exp(h), eb.exp(-h));
                let d = (ev(gm * xp * yp)? - ev(gm * xp * ym)? - ev(gm * xm * yp)? + ev(gm * xm * ym)?)
                    / (4.0 * h * h);
                acc += coef * d;
                scale = scale.max((coef * d).norm());
            }
        }
        for (a, &coef) in c1.iter().enumerate() {
            if coef.norm() == 0.0 {
                continue;
            }
            let e = RealLie::ALL[a];
            let d = (ev(gm * e.exp(h))? - ev(gm * e.exp(-h))?) / (2.0 * h);
            acc += coef * d;
            scale = scale.max((coef * d).norm());
        }
        Ok((acc, scale))
    };
    let (coarse, s1) = level(CASIMIR_STEP)?;
    let (fine, s2) = level(CASIMIR_STEP / 2.0)?;
    let value = (fine * 4.0 - coarse) / 3.0;
    let scale = s1.max(s2).max(f.eval(g)?.norm());
    let diff = (fine - value).norm();
    if diff > CASIMIR_LEVEL_TOL * scale {
        return Err(FourierError::PrecisionLoss { diff, scale });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::{mk_a, mk_k, mk_n};
    use crate::numeric_core::cis;
    use crate::specfun::{bessel_k, rgamma};
    use crate::spectral::IsoClass;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn na(ell: i64, cc: i64, d: i64) -> FourierTermOrder {
        FourierTermOrder::NonAbelian(NonAbelianOrder::with_int_ell(ell, cc, d).unwrap())
    }

    fn random_g(rng: &mut ChaCha8Rng) -> GroupElement {
        let b = Complex::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let r = rng.gen_range(-0.5..0.5);
        let t = rng.gen_range(0.7..1.3);
        let u = rng.gen_range(0.0..1.0f64);
        let (al, be, et) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
        let k = KPoint::from_hopf(u, al, be, cis(et));
        let km = mk_k([[k.a, k.b], [k.c, k.d]], k.delta).unwrap();
        mk_n(b, r) * mk_a(t) * km
    }

    fn check_casimir(f: &FourierTermFunction, g: &GroupElement, tol: f64) {
        let v = f.eval(g).unwrap();
        let cv = casimir_apply(f, g).unwrap();
        let lam = f.eigenvalue();
        let err = (cv - lam * v).norm();
        assert!(err < tol * (1.0 + v.norm()), "{:?} {:?}: C f = {cv}, λ f = {}", f.kind, f.kweight, lam * v);
    }

    #[test]
    fn abelian_omega_value() {
        let f = omega_1d(&FourierTermOrder::abelian(1, 0), 0, c(0.5)).unwrap();
        let v = f.eval(&GroupElement::identity()).unwrap();
        let oracle = (PI / (2.0 * 2.0 * PI)).sqrt() * (-2.0 * PI).exp();
        assert!((v - oracle).norm() < 1e-14);
        assert!((v.re - 9.2e-4).abs() < 5e-5);
    }

    #[test]
    fn casimir_abelian_omega() {
        let f = omega_1d(&FourierTermOrder::abelian(1, 0), 0, c(0.5)).unwrap();
        let g = mk_a(1.3);
        let v = f.eval(&g).unwrap();
        let cv = casimir_apply(&f, &g).unwrap();
        assert!((cv - v * -3.75).norm() < 1e-5 * v.norm());
    }

    #[test]
    fn casimir_nonabelian_omega() {
        let f = omega_1d(&na(2, 0, 3), 0, c(1.2)).unwrap();
        let g = mk_n(Complex::new(0.2, 0.0), 0.1) * mk_a(0.9);
        let v = f.eval(&g).unwrap();
        let cv = casimir_apply(&f, &g).unwrap();
        assert!((cv - v * (1.44 - 4.0)).norm() < 1e-5 * v.norm());
    }

    #[test]
    fn casimir_eigenfunction_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fams = vec![
            mu_1d(&FourierTermOrder::abelian(1, 1), 2, Complex::new(0.3, 0.8)).unwrap(),
            omega_1d(&FourierTermOrder::abelian(2, -1), -1, c(1.7)).unwrap(),
            omega_1d(&na(2, 1, 9), 0, Complex::new(0.0, 1.1)).unwrap(),
            mu_1d(&na(-1, 0, -3), 0, c(0.6)).unwrap(),
            upsilon_1d(&na(2, 0, 3), 0, c(0.9)).unwrap(),
        ];
        for f in &fams {
            for _ in 0..4 {
                check_casimir(f, &random_g(&mut rng), 1e-4);
            }
        }
    }

    #[test]
    fn casimir_of_higher_dimensional_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ld = IsoClass::large_ds(1, 3).unwrap();
        let t0 = IsoClass::thin_plus(0).unwrap();
        let cases = vec![
            omega_hd(&FourierTermOrder::abelian(1, 0), &ld, 3).unwrap(),
            mu_hd(&FourierTermOrder::abelian(1, 1), &ld, -1).unwrap(),
            omega_hd(&na(2, 0, 11), &ld, 1).unwrap(),
            mu_hd(&na(2, 1, 11), &ld, -3).unwrap(),
            omega_hd(&na(-2, 1, -3), &t0, 1).unwrap(),
            mu_hd(&na(-2, 1, -3), &t0, -1).unwrap(),
        ];
        for f in &cases {
            for _ in 0..2 {
                check_casimir(f, &random_g(&mut rng), 1e-4);
            }
        }
    }

    #[test]
    fn casimir_of_constant_vanishes() {
        let f = |_: &Mat3| -> Result<Complex> { Ok(c(1.0)) };
        let g = *mk_a(1.1).matrix();
        let (second, first) = casimir_terms();
        let mut acc = c(0.0);
        for (coef, x, y) in second {
            for a in RealLie::ALL {
                for b in RealLie::ALL {
                    let w = x.0[a.index()] * y.0[b.index()];
                    if w.norm() > 0.0 {
                        acc += coef * w * crate::group_core::right_mixed_derivative(&f, &g, a, b, 1e-3).unwrap();
                    }
                }
            }
        }
        for (coef, x) in first {
            acc += coef * crate::group_core::right_derivative_complex(&f, &g, &x, 1e-3).unwrap();
        }
        assert!(acc.norm() < 1e-9);
    }

    #[test]
    fn hd_coefficient_example() {
        let expected = -I * PI.sqrt() / 2.0;
        assert!((m_coefficient(0, -0.5, 0.5) - expected).norm() < 1e-14);
        // T⁺₀ at r = 1: m = 0, κ = 0, s = ½ gives −Γ(1) = −1.
        let o = NonAbelianOrder::with_int_ell(-2, 1, -3).unwrap();
        let t0 = IsoClass::thin_plus(0).unwrap();
        let f = mu_hd(&FourierTermOrder::NonAbelian(o), &t0, 1).unwrap();
        let comp = f.components.iter().find(|c| c.r == 1).unwrap();
        assert!((comp.radial.coeff + 1.0).norm() < 1e-14);
    }

    #[test]
    fn hd_abelian_index_expansion() {
        let ld = IsoClass::large_ds(1, 3).unwrap();
        let f = omega_hd(&FourierTermOrder::abelian(1, 0), &ld, 3).unwrap();
        let rs: Vec<i64> = f.components.iter().map(|c| c.r).collect();
        assert_eq!(rs, vec![-3, -1, 1, 3]);
        for comp in &f.components {
            let SpecialFn::BesselK(o) = comp.radial.func else { panic!() };
            assert_eq!(o.re, ((-1 - comp.r).abs() as f64) / 2.0);
            let t: f64 = 0.8;
            let direct = comp.radial.coeff * t.powi(5) * bessel_k(o, 2.0 * PI * t).unwrap();
            assert!((comp.radial.value(t).unwrap() - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn q_shift_by_z21() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ld = IsoClass::large_ds(1, 3).unwrap();
        let f = omega_hd(&na(2, 0, 11), &ld, -1).unwrap();
        let up = f.with_q(1).unwrap();
        let z21 = LieVector::z21();
        for _ in 0..3 {
            let g = random_g(&mut rng);
            let ff = |m: &Mat3| f.eval_matrix(m);
            let d = crate::group_core::right_derivative_complex(&ff, g.matrix(), &z21, 1e-3).unwrap();
            let shifted = up.eval(&g).unwrap() * (-1.0 - 3.0);
            assert!((d - shifted).norm() < 1e-7 * (1.0 + shifted.norm()), "{d} vs {shifted}");
        }
    }

    #[test]
    fn omega_is_even_in_nu() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let orders = [FourierTermOrder::abelian(1, 2), na(2, 0, 3)];
        for order in &orders {
            let nu = Complex::new(0.7, 0.4);
            let f = omega_1d(order, 0, nu).unwrap();
            let g_ = omega_1d(order, 0, -nu).unwrap();
            for _ in 0..4 {
                let g = random_g(&mut rng);
                let (a, b) = (f.eval(&g).unwrap(), g_.eval(&g).unwrap());
                assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn n_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let beta = FourierTermOrder::abelian(1, -2);
        let fa = omega_1d(&beta, 1, c(0.4)).unwrap();
        let fb = omega_1d(&na(2, 1, 9), 0, c(0.4)).unwrap();
        for _ in 0..4 {
            let g = random_g(&mut rng);
            let b0 = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let r0 = rng.gen_range(-1.0..1.0);
            let n0 = HeisenbergPoint::new(b0, r0);
            let FourierTermOrder::Abelian { beta: bb } = &beta else { unreachable!() };
            let lhs = fa.eval(&(mk_n(b0, r0) * g)).unwrap();
            let rhs = crate::heisenberg::character_eval(bb, &n0) * fa.eval(&g).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
            let lhs = fb.eval(&(mk_n(c(0.0), r0) * g)).unwrap();
            let rhs = cis(2.0 * PI * 2.0 * r0) * fb.eval(&g).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
            // Lattice translations leave the theta factor invariant.
            let lhs = fb.eval(&(mk_n(c(1.0), 0.0) * g)).unwrap();
            let lhs2 = fb.eval(&(mk_n(Complex::new(0.0, 1.0), 0.0) * g)).unwrap();
            let v = fb.eval(&g).unwrap();
            assert!((lhs - v).norm() < 1e-10 * (1.0 + v.norm()));
            assert!((lhs2 - v).norm() < 1e-10 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn mu_decomposes_into_omega_and_upsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let order = na(2, 0, 3);
        let nu = Complex::new(0.9, 0.3);
        let (mu, om, up) = (
            mu_1d(&order, 0, nu).unwrap(),
            omega_1d(&order, 0, nu).unwrap(),
            upsilon_1d(&order, 0, nu).unwrap(),
        );
        let kappa = -0.5;
        let s = nu / 2.0;
        let a = exp_pi_i(c(kappa)) * gamma(1.0 + 2.0 * s);
        let cw = a * -I * exp_pi_i(-s) * rgamma(0.5 + s + kappa);
        let cv = -a * rgamma(0.5 + s - kappa);
        for _ in 0..4 {
            let g = random_g(&mut rng);
            let lhs = mu.eval(&g).unwrap();
            let rhs = cw * om.eval(&g).unwrap() + cv * up.eval(&g).unwrap();
            assert!((lhs - rhs).norm() < 1e-7 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn upsilon_independent_of_omega() {
        let order = na(2, 0, 3);
        let (om, up) = (omega_1d(&order, 0, c(0.9)).unwrap(), upsilon_1d(&order, 0, c(0.9)).unwrap());
        let t = 0.8;
        let a = om.components[0].radial.derivatives(t).unwrap();
        let b = up.components[0].radial.derivatives(t).unwrap();
        assert!((a[0] * b[1] - a[1] * b[0]).norm() > 1e-3);
    }

    #[test]
    fn upsilon_growth() {
        let f = upsilon_1d(&na(2, 0, 3), 0, c(0.9)).unwrap();
        let kappa = -0.5;
        for t in [4.0, 5.0, 6.0] {
            let x = 4.0 * PI * t * t;
            let v = f.radial(0, t).unwrap();
            let lead = -exp_pi_i(c(-kappa)) * x.powf(-kappa) * (x / 2.0).exp() * t;
            assert!(((v / lead) - 1.0).norm() < 0.05, "t={t}");
        }
    }

    #[test]
    fn holomorphic_degeneration_mu_proportional_to_omega() {
        // j = 4, ℓ < 0: κ − (ν₀+1)/2 ∈ ℤ≥0 at ν₀ = 0 for d = 5.
        let order = na(-2, 0, 5);
        let (m0, kappa) = nonabelian_indices(4, match &order {
            FourierTermOrder::NonAbelian(o) => o,
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(m0, 0);
        assert!(kappa - 0.5 >= 0.0 && (kappa - 0.5).fract() == 0.0);
        let nu0 = c(0.0);
        let mu = mu_1d(&order, 4, nu0).unwrap();
        let om = omega_1d(&order, 4, nu0).unwrap();
        let ratios: Vec<Complex> = [0.3, 0.6, 0.9, 1.4]
            .iter()
            .map(|&t| mu.radial(0, t).unwrap() / om.radial(0, t).unwrap())
            .collect();
        for r in &ratios[1..] {
            assert!((r - ratios[0]).norm() < 1e-8 * ratios[0].norm());
        }
    }

    #[test]
    fn boundary_estimates() {
        let order = FourierTermOrder::abelian(1, 0);
        let nu = c(0.6);
        let om = omega_1d(&order, 0, nu).unwrap();
        let mu = mu_1d(&order, 0, nu).unwrap();
        let slope = |f: &FourierTermFunction| {
            let (a, b) = (1e-3, 1e-2);
            (f.radial(0, b).unwrap().norm().ln() - f.radial(0, a).unwrap().norm().ln()) / (b / a).ln()
        };
        assert!((slope(&mu) - 2.6).abs() < 0.01);
        assert!((slope(&om) - 1.4).abs() < 0.02);
        for t in [5.0, 8.0] {
            assert!(om.radial(0, t).unwrap().norm() < (-2.0 * PI * t).exp() * t * t);
        }
        let nab = omega_1d(&na(2, 0, 3), 0, nu).unwrap();
        for t in [5.0, 8.0] {
            assert!(nab.radial(0, t).unwrap().norm() < (-PI * 2.0 * t * t).exp() * 10.0 * t * t * t);
        }
    }

    #[test]
    fn mu_pole_surfaces() {
        let r = mu_1d(&na(2, 0, 3), 0, c(-2.0));
        assert!(matches!(r, Err(FourierError::SpecFun(SpecFunError::PolePoint { .. }))));
        assert!(matches!(
            omega_1d(&na(2, 0, 1), 0, c(0.5)),
            Err(FourierError::Spectral(SpectralError::NotRepresented { .. }))
        ));
        assert!(matches!(
            omega_1d(&FourierTermOrder::abelian(0, 0), 0, c(0.5)),
            Err(FourierError::TrivialOrder)
        ));
    }
}
