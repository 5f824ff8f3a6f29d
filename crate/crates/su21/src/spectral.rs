//! Spectral parameters `(j, ν)`, their Weyl-group orbits, the index
//! arithmetic of non-abelian Fourier terms, and the catalog of isomorphism
//! classes of unitary irreducible `(𝔤, K)`-modules with their minimal K-types.
//!
//! The Weyl group acts on `(j, ν) ∈ ℂ²` through
//!
//! | generator | matrix                 |
//! |-----------|------------------------|
//! | `s₁`      | `[[−½, 3/2], [½, ½]]`  |
//! | `s₂`      | `[[−½, −3/2], [−½, ½]]`|
//!
//! and the Casimir eigenvalue `λ(j, ν) = ν² − 4 + j²/3` is constant on orbits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::heisenberg::HalfInt;
use crate::numeric_core::{Complex, GaussInt};

/// Tolerance for comparing orbit elements and recognising integers.
pub const ORBIT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("no Fourier term module: m₀ = {m0} is not a non-negative integer")]
    NotRepresented { m0: f64 },
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("{family} out of range: requires {constraint}")]
    OutOfRange {
        family: &'static str,
        constraint: &'static str,
    },
    #[error("Weyl orbit mixes generic and integral elements")]
    MixedOrbit,
    #[error("invalid Fourier term order: {0}")]
    BadOrder(String),
}

type Result<T> = std::result::Result<T, SpectralError>;

/// Spectral parameters: `j` gives the character `m(ζ) ↦ ζ^j` of `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub j: i64,
    pub nu: Complex,
}

impl SpectralParams {
    pub fn new(j: i64, nu: Complex) -> Self {
        SpectralParams { j, nu }
    }

    pub fn real(j: i64, nu: f64) -> Self {
        Self::new(j, Complex::new(nu, 0.0))
    }

    /// Casimir eigenvalue `ν² − 4 + j²/3`.
    pub fn casimir_eigenvalue(&self) -> Complex {
        casimir_eigenvalue(Complex::new(self.j as f64, 0.0), self.nu)
    }
}

/// `λ(j, ν) = ν² − 4 + j²/3`.
pub fn casimir_eigenvalue(j: Complex, nu: Complex) -> Complex {
    nu * nu - 4.0 + j * j / 3.0
}

/// A non-abelian Fourier term order `(ℓ, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NonAbelianOrder {
    pub ell: HalfInt,
    pub c: i64,
    pub d: i64,
}

impl NonAbelianOrder {
    /// Validates `ℓ ≠ 0`, `d` odd and reduces `c` modulo `2|ℓ|`.
    pub fn new(ell: HalfInt, c: i64, d: i64) -> Result<Self> {
        if ell.twice() == 0 {
            return Err(SpectralError::BadOrder("ℓ must be non-zero".into()));
        }
        if d.rem_euclid(2) != 1 {
            return Err(SpectralError::BadOrder(format!("d = {d} must be odd")));
        }
        Ok(NonAbelianOrder {
            ell,
            c: c.rem_euclid(ell.period() as i64),
            d,
        })
    }

    /// Convenience constructor for integral `ℓ`.
    pub fn with_int_ell(ell: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(HalfInt::from_int(ell), c, d)
    }

    pub fn sign(&self) -> i64 {
        self.ell.signum()
    }
}

/// Order of a Fourier term along `N`.
#[derive(Debug, Clone, PartialEq)]
pub enum FourierTermOrder {
    Abelian { beta: GaussInt },
    NonAbelian(NonAbelianOrder),
}

impl FourierTermOrder {
    pub fn abelian(re: i64, im: i64) -> Self {
        FourierTermOrder::Abelian {
            beta: GaussInt::new(re, im),
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, FourierTermOrder::Abelian { .. })
    }
}

type Pair = (Complex, Complex);

fn apply(m: [[f64; 2]; 2], (j, nu): Pair) -> Pair {
    (j * m[0][0] + nu * m[0][1], j * m[1][0] + nu * m[1][1])
}

/// First Weyl generator.
pub const WS1: [[f64; 2]; 2] = [[-0.5, 1.5], [0.5, 0.5]];
/// Second Weyl generator.
pub const WS2: [[f64; 2]; 2] = [[-0.5, -1.5], [-0.5, 0.5]];

fn same(a: &Pair, b: &Pair) -> bool {
    (a.0 - b.0).norm() < ORBIT_TOL && (a.1 - b.1).norm() < ORBIT_TOL
}

/// The orbit of `(j, ν)` under the group generated by `s₁`, `s₂`.
pub fn weyl_orbit(j: Complex, nu: Complex) -> Vec<Pair> {
    let mut orbit = vec![(j, nu)];
    let mut frontier = vec![(j, nu)];
    while let Some(x) = frontier.pop() {
        for m in [WS1, WS2] {
            let y = apply(m, x);
            if !orbit.iter().any(|z| same(z, &y)) {
                orbit.push(y);
                frontier.push(y);
            }
        }
    }
    orbit
}

fn as_integer(z: Complex) -> Option<i64> {
    let r = z.re.round();
    ((z.re - r).abs() < ORBIT_TOL && z.im.abs() < ORBIT_TOL).then_some(r as i64)
}

/// Whether a spectral parameter is generic or integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamClass {
    Generic,
    Integral,
}

/// Generic if no integral-`j` orbit element has `ν ∈ j + 2ℤ` (or the orbit is
/// `{(0,0)}`); integral if every integral-`j` element does.
pub fn classify_param(j: i64, nu: Complex) -> Result<ParamClass> {
    let orbit = weyl_orbit(Complex::new(j as f64, 0.0), nu);
    if orbit.len() == 1 && j == 0 && nu.norm() < ORBIT_TOL {
        return Ok(ParamClass::Generic);
    }
    let mut hits = 0;
    let mut misses = 0;
    for (oj, onu) in &orbit {
        if let Some(ij) = as_integer(*oj) {
            match as_integer(*onu) {
                Some(inu) if (inu - ij).rem_euclid(2) == 0 => hits += 1,
                _ => misses += 1,
            }
        }
    }
    match (hits, misses) {
        (0, _) => Ok(ParamClass::Generic),
        (_, 0) => Ok(ParamClass::Integral),
        _ => Err(SpectralError::MixedOrbit),
    }
}

/// Orbit elements with integral `j` and `Re ν ≥ 0`.
pub fn orbit_plus(j: i64, nu: Complex) -> Vec<SpectralParams> {
    weyl_orbit(Complex::new(j as f64, 0.0), nu)
        .into_iter()
        .filter(|(_, n)| n.re >= -ORBIT_TOL)
        .filter_map(|(oj, n)| as_integer(oj).map(|ij| SpectralParams::new(ij, n)))
        .collect()
}

/// Elements of [`orbit_plus`] that also satisfy `sign(ℓ)(2j − d) + 3 ≤ 0`.
pub fn orbit_plus_n(j: i64, nu: Complex, order: &NonAbelianOrder) -> Vec<SpectralParams> {
    orbit_plus(j, nu)
        .into_iter()
        .filter(|p| order.sign() * (2 * p.j - order.d) + 3 <= 0)
        .collect()
}

/// Indices `(m₀, κ)` of the one-dimensional non-abelian Fourier term module:
/// `m₀ = sign(ℓ)(d − 2j)/6 − ½`, `κ = −m₀ − ½(j·sign(ℓ) + 1)`.
pub fn nonabelian_indices(j: i64, order: &NonAbelianOrder) -> Result<(i64, f64)> {
    let num = order.sign() * (order.d - 2 * j) - 3;
    if num.rem_euclid(6) != 0 || num < 0 {
        return Err(SpectralError::NotRepresented { m0: num as f64 / 6.0 });
    }
    let m0 = num / 6;
    let kappa = -(m0 as f64) - 0.5 * ((j * order.sign()) as f64 + 1.0);
    Ok((m0, kappa))
}

/// Indices of one component of a higher-dimensional non-abelian family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighDimIndex {
    pub r: i64,
    pub m: i64,
    pub kappa: f64,
    pub s: f64,
}

/// `m(h,r) = ½ sign(ℓ)(r − r₀(h))` with `r₀(h) = (h−d)/3 + sign(ℓ)`,
/// `s(h,r) = (h−r)/4`, `κ(r) = −m − sign(ℓ) s − ½`.
pub fn highdim_indices(h: i64, r: i64, order: &NonAbelianOrder) -> Result<HighDimIndex> {
    if (h - r).rem_euclid(2) != 0 {
        return Err(SpectralError::BadIndex(format!("h = {h} and r = {r} differ in parity")));
    }
    let eps = order.sign();
    let num = eps * (order.d - h + 3 * r) - 3;
    if num.rem_euclid(6) != 0 {
        return Err(SpectralError::BadIndex(format!("h = {h} is not congruent to d = {} mod 3", order.d)));
    }
    let m = num / 6;
    let s = (h - r) as f64 / 4.0;
    let kappa = -(m as f64) - eps as f64 * s - 0.5;
    Ok(HighDimIndex { r, m, kappa, s })
}

/// Families of unitary irreducible `(𝔤, K)`-modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoFamily {
    UnitaryPS,
    Complementary,
    LargeDS,
    HoloDS,
    AntiholoDS,
    ThinPlus(i64),
    ThinMinus(i64),
}

impl IsoFamily {
    pub fn name(&self) -> &'static str {
        match self {
            IsoFamily::UnitaryPS => "unitary principal series",
            IsoFamily::Complementary => "complementary series",
            IsoFamily::LargeDS => "large discrete series type",
            IsoFamily::HoloDS => "holomorphic discrete series type",
            IsoFamily::AntiholoDS => "antiholomorphic discrete series type",
            IsoFamily::ThinPlus(_) => "thin T+",
            IsoFamily::ThinMinus(_) => "thin T-",
        }
    }
}

/// An isomorphism class with spectral parameters and minimal K-type `τ^{h₀}_{p₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoClass {
    pub family: IsoFamily,
    pub j: i64,
    pub nu0: Complex,
    pub h0: i64,
    pub p0: i64,
}

fn out_of_range(family: &'static str, constraint: &'static str) -> SpectralError {
    SpectralError::OutOfRange { family, constraint }
}

impl IsoClass {
    /// `II(j, ν₀)` with `ν₀ = i·t`, `t ≥ 0`.
    pub fn unitary_ps(j: i64, nu0_im: f64) -> Result<Self> {
        let f = "unitary principal series";
        if nu0_im < 0.0 {
            return Err(out_of_range(f, "ν₀ ∈ i[0,∞)"));
        }
        if nu0_im == 0.0 && j != 0 && j.rem_euclid(2) == 0 {
            return Err(out_of_range(f, "ν₀ = 0 only for j ∈ {0} ∪ 1+2ℤ"));
        }
        Ok(IsoClass {
            family: IsoFamily::UnitaryPS,
            j,
            nu0: Complex::new(0.0, nu0_im),
            h0: 2 * j,
            p0: 0,
        })
    }

    /// `II(j, ν₀)` with real `ν₀` in the complementary range.
    pub fn complementary(j: i64, nu0: f64) -> Result<Self> {
        let ok = (j == 0 && nu0 > 0.0 && nu0 < 2.0) || (j.rem_euclid(2) == 1 && nu0 > 0.0 && nu0 < 1.0);
        if !ok {
            return Err(out_of_range(
                "complementary series",
                "0 < ν₀ < 2 with j = 0, or 0 < ν₀ < 1 with j odd",
            ));
        }
        Ok(IsoClass {
            family: IsoFamily::Complementary,
            j,
            nu0: Complex::new(nu0, 0.0),
            h0: 2 * j,
            p0: 0,
        })
    }

    /// `II₊(j, ν₀)`.
    pub fn large_ds(j: i64, nu0: i64) -> Result<Self> {
        if (nu0 - j).rem_euclid(2) != 0 || nu0 < j.abs() || nu0 < 1 {
            return Err(out_of_range(
                "large discrete series type",
                "ν₀ ≡ j mod 2, ν₀ ≥ |j|, ν₀ ≥ 1",
            ));
        }
        Ok(IsoClass {
            family: IsoFamily::LargeDS,
            j,
            nu0: Complex::new(nu0 as f64, 0.0),
            h0: -j,
            p0: nu0,
        })
    }

    /// `IF(j, ν₀)`.
    pub fn holo_ds(j: i64, nu0: i64) -> Result<Self> {
        if (nu0 - j).rem_euclid(2) != 0 || nu0 < 0 || nu0 > j - 2 {
            return Err(out_of_range(
                "holomorphic discrete series type",
                "ν₀ ≡ j mod 2, 0 ≤ ν₀ ≤ j − 2",
            ));
        }
        Ok(IsoClass {
            family: IsoFamily::HoloDS,
            j,
            nu0: Complex::new(nu0 as f64, 0.0),
            h0: 2 * j,
            p0: 0,
        })
    }

    /// `FI(j, ν₀)`.
    pub fn antiholo_ds(j: i64, nu0: i64) -> Result<Self> {
        if (nu0 - j).rem_euclid(2) != 0 || nu0 < 0 || nu0 > -j - 2 {
            return Err(out_of_range(
                "antiholomorphic discrete series type",
                "ν₀ ≡ j mod 2, 0 ≤ ν₀ ≤ −j − 2",
            ));
        }
        Ok(IsoClass {
            family: IsoFamily::AntiholoDS,
            j,
            nu0: Complex::new(nu0 as f64, 0.0),
            h0: 2 * j,
            p0: 0,
        })
    }

    /// `T⁺_k`, `k ≥ −1`.
    pub fn thin_plus(k: i64) -> Result<Self> {
        if k < -1 {
            return Err(out_of_range("thin T+", "k ≥ −1"));
        }
        let (j, h0, p0) = if k == -1 { (1, 2, 0) } else { (3 + 2 * k, k + 3, k + 1) };
        Ok(IsoClass {
            family: IsoFamily::ThinPlus(k),
            j,
            nu0: Complex::new(1.0, 0.0),
            h0,
            p0,
        })
    }

    /// `T⁻_k`, `k ≥ −1`. For `k = −1` the class is stored with `j = −1`, the
    /// value consistent with `h₀ = 2j = −2`.
    pub fn thin_minus(k: i64) -> Result<Self> {
        if k < -1 {
            return Err(out_of_range("thin T-", "k ≥ −1"));
        }
        let (j, h0, p0) = if k == -1 { (-1, -2, 0) } else { (-3 - 2 * k, -k - 3, k + 1) };
        Ok(IsoClass {
            family: IsoFamily::ThinMinus(k),
            j,
            nu0: Complex::new(1.0, 0.0),
            h0,
            p0,
        })
    }

    pub fn spectral(&self) -> SpectralParams {
        SpectralParams::new(self.j, self.nu0)
    }

    /// Whether the minimal K-type is one-dimensional.
    pub fn is_one_dimensional(&self) -> bool {
        self.p0 == 0
    }
}

/// One component `r` of a Whittaker-index row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table3Entry {
    pub r: i64,
    pub m: i64,
    pub kappa: f64,
    pub s: f64,
}

/// Parameters of a higher-dimensional class in a non-abelian context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table3Row {
    pub epsilon: i64,
    pub m0: i64,
    /// The `d` of the Fourier term order realising this row.
    pub d: i64,
    pub entries: Vec<Table3Entry>,
}

/// The Whittaker-index row of a large discrete series or thin class.
///
/// Large discrete series type: `ε ∈ {±1}` and `m₀ ≥ (ν₀ − εj)/2` are free;
/// `m(h₀,r) = m₀ + (ε/2)(r+j)`, `κ(r) = −m₀ − (ε/4)(r+j) − ½`, `s(r) = −(j+r)/4`.
/// Thin `T^±_k`: `ε = ∓1`, `m₀ = k+1`.
pub fn table3_row(class: &IsoClass, epsilon: Option<i64>, m0: Option<i64>) -> Result<Table3Row> {
    let (eps, m0) = match class.family {
        IsoFamily::LargeDS => {
            let eps = epsilon.ok_or_else(|| SpectralError::BadIndex("ε required".into()))?;
            let m0 = m0.ok_or_else(|| SpectralError::BadIndex("m₀ required".into()))?;
            if eps.abs() != 1 {
                return Err(SpectralError::BadIndex("ε must be ±1".into()));
            }
            if 2 * m0 < class.p0 - eps * class.j {
                return Err(out_of_range("large discrete series type", "m₀ ≥ (ν₀ − εj)/2"));
            }
            (eps, m0)
        }
        IsoFamily::ThinPlus(k) if k >= 0 => (-1, k + 1),
        IsoFamily::ThinMinus(k) if k >= 0 => (1, k + 1),
        _ => return Err(SpectralError::BadIndex("no Whittaker-index row for this class".into())),
    };
    let j = class.j;
    let entries = (-class.p0..=class.p0)
        .step_by(2)
        .map(|r| match class.family {
            IsoFamily::LargeDS => {
                let m2 = 2 * m0 + eps * (r + j);
                Table3Entry {
                    r,
                    m: m2 / 2,
                    kappa: -(m0 as f64) - eps as f64 * (r + j) as f64 / 4.0 - 0.5,
                    s: -((j + r) as f64) / 4.0,
                }
            }
            IsoFamily::ThinPlus(k) => Table3Entry {
                r,
                m: (k + 1 - r) / 2,
                kappa: -((k + 1 - r) as f64) / 4.0,
                s: (k + 3 - r) as f64 / 4.0,
            },
            _ => {
                let IsoFamily::ThinMinus(k) = class.family else { unreachable!() };
                Table3Entry {
                    r,
                    m: (k + 1 + r) / 2,
                    kappa: -((k + 1 + r) as f64) / 4.0,
                    s: -((k + 3 + r) as f64) / 4.0,
                }
            }
        })
        .collect();
    Ok(Table3Row {
        epsilon: eps,
        m0,
        d: 2 * j + 3 * eps * (2 * m0 + 1),
        entries,
    })
}

/// One row of the isomorphism-class table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub family: &'static str,
    pub type_tag: &'static str,
    pub parameters: &'static str,
    pub minimal_k_type: &'static str,
}

/// The isomorphism-class table, as data.
pub const ISO_CLASSES: [CatalogEntry; 9] = [
    CatalogEntry {
        family: "unitary principal series",
        type_tag: "II(j,nu0)",
        parameters: "nu0 in i[0,inf); if nu0 = 0 then j in {0} or odd",
        minimal_k_type: "h0 = 2j, p0 = 0",
    },
    CatalogEntry {
        family: "complementary series",
        type_tag: "II(j,nu0)",
        parameters: "0 < nu0 < 2, j = 0; or 0 < nu0 < 1, j odd",
        minimal_k_type: "h0 = 2j, p0 = 0",
    },
    CatalogEntry {
        family: "large discrete series type",
        type_tag: "II+(j,nu0)",
        parameters: "nu0 = j mod 2, nu0 >= |j|, nu0 >= 1",
        minimal_k_type: "h0 = -j, p0 = nu0",
    },
    CatalogEntry {
        family: "holomorphic discrete series type",
        type_tag: "IF(j,nu0)",
        parameters: "nu0 = j mod 2, 0 <= nu0 <= j-2",
        minimal_k_type: "h0 = 2j, p0 = 0",
    },
    CatalogEntry {
        family: "antiholomorphic discrete series type",
        type_tag: "FI(j,nu0)",
        parameters: "nu0 = j mod 2, 0 <= nu0 <= -j-2",
        minimal_k_type: "h0 = 2j, p0 = 0",
    },
    CatalogEntry {
        family: "thin T+_{-1}",
        type_tag: "IF(1,-1)",
        parameters: "j = 1, nu0 = 1",
        minimal_k_type: "h0 = 2, p0 = 0",
    },
    CatalogEntry {
        family: "thin T+_k, k >= 0",
        type_tag: "IF+(j,-1)",
        parameters: "nu0 = 1, j = 3+2k",
        minimal_k_type: "h0 = k+3, p0 = k+1",
    },
    CatalogEntry {
        family: "thin T-_{-1}",
        type_tag: "FI(-1,-1)",
        parameters: "j = -1, nu0 = 1",
        minimal_k_type: "h0 = -2, p0 = 0",
    },
    CatalogEntry {
        family: "thin T-_k, k >= 0",
        type_tag: "FI+(j,-1)",
        parameters: "nu0 = 1, j = -3-2k",
        minimal_k_type: "h0 = -k-3, p0 = k+1",
    },
];

/// Full parameter record of a class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRecord {
    pub class: IsoClass,
    pub entry: CatalogEntry,
    pub table3: Option<Table3Row>,
}

/// The catalog record of `class`; the Whittaker-index row is filled for thin classes
/// with `k ≥ 0` and, when `ε` and `m₀` are supplied, for large discrete series.
pub fn iso_catalog(class: &IsoClass, epsilon: Option<i64>, m0: Option<i64>) -> Result<CatalogRecord> {
    let idx = match class.family {
        IsoFamily::UnitaryPS => 0,
        IsoFamily::Complementary => 1,
        IsoFamily::LargeDS => 2,
        IsoFamily::HoloDS => 3,
        IsoFamily::AntiholoDS => 4,
        IsoFamily::ThinPlus(-1) => 5,
        IsoFamily::ThinPlus(_) => 6,
        IsoFamily::ThinMinus(-1) => 7,
        IsoFamily::ThinMinus(_) => 8,
    };
    let table3 = match class.family {
        IsoFamily::ThinPlus(k) | IsoFamily::ThinMinus(k) if k >= 0 => Some(table3_row(class, None, None)?),
        IsoFamily::LargeDS if epsilon.is_some() && m0.is_some() => Some(table3_row(class, epsilon, m0)?),
        _ => None,
    };
    Ok(CatalogRecord {
        class: *class,
        entry: ISO_CLASSES[idx].clone(),
        table3,
    })
}

/// One representative per catalog row, used by the CLI export.
pub fn catalog_representatives() -> Vec<CatalogRecord> {
    let classes = [
        (IsoClass::unitary_ps(0, 2.0), None, None),
        (IsoClass::complementary(0, 0.5), None, None),
        (IsoClass::large_ds(1, 3), Some(1), Some(1)),
        (IsoClass::holo_ds(4, 2), None, None),
        (IsoClass::antiholo_ds(-4, 2), None, None),
        (IsoClass::thin_plus(-1), None, None),
        (IsoClass::thin_plus(0), None, None),
        (IsoClass::thin_minus(-1), None, None),
        (IsoClass::thin_minus(0), None, None),
    ];
    classes
        .into_iter()
        .map(|(c, e, m)| iso_catalog(&c.expect("representative in range"), e, m).expect("catalog row"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn contains(orbit: &[Pair], j: f64, nu: f64) -> bool {
        orbit.iter().any(|p| same(p, &(c(j), c(nu))))
    }

    fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    #[test]
    fn weyl_generators_present_s3() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(mat_mul(WS1, WS1), id);
        assert_eq!(mat_mul(WS2, WS2), id);
        let p = mat_mul(WS1, WS2);
        assert_eq!(mat_mul(p, mat_mul(p, p)), id);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(weyl_orbit(c(0.0), c(0.0)).len(), 1);
        let o = weyl_orbit(c(0.0), c(2.0));
        assert_eq!(o.len(), 6);
        for (j, nu) in [(0.0, 2.0), (3.0, 1.0), (-3.0, 1.0), (-3.0, -1.0), (3.0, -1.0), (0.0, -2.0)] {
            assert!(contains(&o, j, nu));
        }
    }

    #[test]
    fn orbit_sizes_divide_six_and_eigenvalue_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let j = Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-1.0..1.0));
            let nu = Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-1.0..1.0));
            let o = weyl_orbit(j, nu);
            assert_eq!(6 % o.len(), 0);
            let lam = casimir_eigenvalue(j, nu);
            for (a, b) in o {
                assert!((casimir_eigenvalue(a, b) - lam).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_param(0, c(0.0)).unwrap(), ParamClass::Generic);
        assert_eq!(classify_param(0, c(2.0)).unwrap(), ParamClass::Integral);
        assert_eq!(classify_param(0, c(1.3)).unwrap(), ParamClass::Generic);
    }

    #[test]
    fn classification_is_orbit_invariant() {
        for j in -6..=6i64 {
            for nu in -6..=6i64 {
                let base = classify_param(j, c(nu as f64)).unwrap();
                for (oj, onu) in weyl_orbit(c(j as f64), c(nu as f64)) {
                    if let Some(ij) = as_integer(oj) {
                        assert_eq!(classify_param(ij, onu).unwrap(), base, "({j},{nu}) vs ({ij},{onu})");
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_plus_examples() {
        let p = orbit_plus(0, c(2.0));
        assert_eq!(p.len(), 3);
        let o9 = NonAbelianOrder::with_int_ell(2, 0, 9).unwrap();
        assert_eq!(orbit_plus_n(0, c(2.0), &o9).len(), 3);
        let o1 = NonAbelianOrder::with_int_ell(2, 0, 1).unwrap();
        let p = orbit_plus_n(0, c(2.0), &o1);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].j, -3);
        assert!((p[0].nu - 1.0).norm() < 1e-12);
    }

    #[test]
    fn nonabelian_index_examples() {
        let o3 = NonAbelianOrder::with_int_ell(2, 0, 3).unwrap();
        assert_eq!(nonabelian_indices(0, &o3).unwrap(), (0, -0.5));
        let o9 = NonAbelianOrder::with_int_ell(2, 0, 9).unwrap();
        assert_eq!(nonabelian_indices(0, &o9).unwrap(), (1, -1.5));
        let o1 = NonAbelianOrder::with_int_ell(2, 0, 1).unwrap();
        assert!(matches!(nonabelian_indices(0, &o1), Err(SpectralError::NotRepresented { .. })));
        assert!(NonAbelianOrder::with_int_ell(2, 0, 2).is_err());
    }

    #[test]
    fn highdim_examples() {
        let o = NonAbelianOrder::with_int_ell(-2, 1, -3).unwrap();
        let x = highdim_indices(3, 1, &o).unwrap();
        assert_eq!(x.m, 0);
        assert_eq!(highdim_indices(4, 0, &NonAbelianOrder::with_int_ell(2, 0, 1).unwrap()).unwrap().s, 1.0);
        assert!(highdim_indices(3, 0, &o).is_err());
    }

    /// The one-dimensional indices are the `p = 0` case of the general ones.
    #[test]
    fn one_dimensional_indices_match_general_formula() {
        for d in (-15..=15).step_by(2) {
            for ell in [-2, 2] {
                let o = NonAbelianOrder::with_int_ell(ell, 0, d).unwrap();
                for j in -6..=6 {
                    if let Ok((m0, kappa)) = nonabelian_indices(j, &o) {
                        let x = highdim_indices(2 * j, 0, &o).unwrap();
                        assert_eq!(x.m, m0);
                        assert!((x.kappa - kappa).abs() < 1e-15);
                        assert!((x.s - j as f64 / 2.0).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_examples() {
        let u = IsoClass::unitary_ps(0, 2.0).unwrap();
        assert_eq!((u.h0, u.p0), (0, 0));
        let l = IsoClass::large_ds(1, 3).unwrap();
        assert_eq!((l.h0, l.p0), (-1, 3));
        let t = IsoClass::thin_plus(0).unwrap();
        assert_eq!((t.j, t.h0, t.p0), (3, 3, 1));
        assert_eq!(t.nu0, c(1.0));
        assert!(IsoClass::complementary(0, 2.5).is_err());
        assert!(IsoClass::large_ds(2, 1).is_err());
        assert!(IsoClass::holo_ds(4, 4).is_err());
        assert!(IsoClass::unitary_ps(2, 0.0).is_err());
        assert!(matches!(IsoClass::antiholo_ds(2, 0), Err(SpectralError::OutOfRange { .. })));
        assert_eq!(catalog_representatives().len(), 9);
    }

    /// Whittaker-index rows agree with the general index formulas at the `d` they imply.
    #[test]
    fn table3_matches_general_indices() {
        let mut rows = Vec::new();
        for k in 0..4 {
            rows.push((IsoClass::thin_plus(k).unwrap(), None, None));
            rows.push((IsoClass::thin_minus(k).unwrap(), None, None));
        }
        for (j, nu0) in [(1, 3), (-2, 4), (0, 2), (3, 5)] {
            for eps in [-1, 1] {
                let class = IsoClass::large_ds(j, nu0).unwrap();
                let lo = (nu0 - eps * j + 1).div_euclid(2);
                for m0 in lo..lo + 3 {
                    rows.push((class, Some(eps), Some(m0)));
                }
            }
        }
        for (class, eps, m0) in rows {
            let row = table3_row(&class, eps, m0).unwrap();
            let ell = 2 * row.epsilon;
            let order = NonAbelianOrder::with_int_ell(ell, 0, row.d).unwrap();
            for e in &row.entries {
                let g = highdim_indices(class.h0, e.r, &order).unwrap();
                assert_eq!(g.m, e.m, "{class:?} r={}", e.r);
                assert!((g.kappa - e.kappa).abs() < 1e-15);
                assert!((g.s - e.s).abs() < 1e-15);
                assert!(e.m >= 0);
            }
        }
    }
}
