//! The arithmetic group `Γ₀ = SU(2,1) ∩ SL₃(ℤ[i])`, exact enumeration of
//! cosets `Γ_N\Γ₀`, truncated Eisenstein and Poincaré sums, and Fourier-term
//! extraction by quadrature.
//!
//! Enumeration works with exact Gaussian-integer matrices. The series are
//! evaluated for the conjugate group `Γ = g∞⁻¹ Γ₀ g∞`, `g∞ = a(√2) m(e^{πi/4})`,
//! whose intersection with `N` is the standard lattice `Λ₄`.
//!
//! | object                 | realisation                                              |
//! |------------------------|----------------------------------------------------------|
//! | coset key of `γ`       | `γ⁻¹ v₀` with `v₀ = (1, 0, 1)ᵗ`, fixed by every `n(b, r)` |
//! | parabolic cosets       | keys `u·v₀` with `u ∈ {±1, ±i}`                          |
//! | partial sum at length `L` | all cosets reached by words of length `≤ L`           |

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::fourier_basis::{mu_1d, FourierError, FourierTermFunction, KWeight};
use crate::group_core::{iwasawa, mk_a, mk_m, mk_n_point, mk_w, GroupElement, GroupError};
use crate::heisenberg::{mi_transform, HeisenbergError, HeisenbergPoint, Lattice, NFactor, NGrid, ThetaParams};
use crate::ktype_poly::{kpoly_eval, kpoly_norm_sqr, KIndex, KPoint, KQuadrature};
use crate::numeric_core::{cis, CompensatedSum, Complex, GaussInt, GaussMat3, Int, Mat3};
use crate::spectral::{FourierTermOrder, NonAbelianOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("matrix `{0}` is not in Γ₀")]
    NotInGroup(String),
    #[error("coset key {key} is shared by representatives that differ by an element outside N")]
    InvariantIncomplete { key: String },
    #[error("coset enumeration exceeded the cap of {cap} cosets")]
    CapExceeded { cap: usize },
    #[error("Re ν = {re_nu} is outside the convergence region Re ν > 2")]
    OutsideConvergence { re_nu: f64 },
    #[error("quadrature unconverged: grid doubling changed the value by {diff:.3e}")]
    QuadratureUnconverged { diff: f64 },
    #[error("order is not defined on Λ₄")]
    IncompatibleOrder,
    #[error("K-type index does not match j: h − 3r = {got}, 2j = {want}")]
    IndexMismatch { got: i64, want: i64 },
    #[error("entry does not fit in i64")]
    Overflow,
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
}

type Result<T> = std::result::Result<T, LatticeError>;

/// The lattice `Γ ∩ N = Λ₄`.
pub const SIGMA: u32 = 4;

/// Default word-length bound for coset enumeration.
pub const DEFAULT_LENGTH: usize = 8;

/// Default cap on the number of enumerated cosets.
pub const DEFAULT_CAP: usize = 2_000_000;

fn v0() -> [GaussInt; 3] {
    [GaussInt::one(), GaussInt::zero(), GaussInt::one()]
}

fn units() -> [GaussInt; 4] {
    [GaussInt::new(1, 0), GaussInt::new(0, 1), GaussInt::new(-1, 0), GaussInt::new(0, -1)]
}

/// Exact check of `m* I₂,₁ m = I₂,₁` and `det m = 1`.
pub fn gamma0_member(m: &GaussMat3) -> bool {
    let j = GaussMat3::diag(GaussInt::one(), GaussInt::one(), GaussInt::new(-1, 0));
    let lhs = &(&m.herm_conj() * &j) * m;
    lhs == j && m.det() == GaussInt::one()
}

/// An element of `Γ₀`, held exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeElement(GaussMat3);

impl LatticeElement {
    pub fn new(m: GaussMat3) -> Result<Self> {
        if gamma0_member(&m) {
            Ok(LatticeElement(m))
        } else {
            Err(LatticeError::NotInGroup(format!("{m:?}")))
        }
    }

    pub fn identity() -> Self {
        LatticeElement(GaussMat3::identity())
    }

    pub fn matrix(&self) -> &GaussMat3 {
        &self.0
    }

    /// `γ⁻¹ = I₂,₁ γ* I₂,₁`.
    pub fn inverse(&self) -> Self {
        let s = [1i64, 1, -1];
        let h = self.0.herm_conj();
        LatticeElement(GaussMat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| if s[i] * s[j] < 0 { -&h.0[i][j] } else { h.0[i][j].clone() })
        })))
    }

    pub fn mul(&self, other: &LatticeElement) -> LatticeElement {
        LatticeElement(&self.0 * &other.0)
    }

    /// The coset key `γ⁻¹ v₀`.
    pub fn key(&self) -> [GaussInt; 3] {
        self.inverse().0.mul_vec(&v0())
    }

    /// Exact test for `γ = n(b, r)`: every entry matches the unipotent form.
    pub fn is_in_n(&self) -> bool {
        let m = &self.0 .0;
        let b = m[0][1].clone();
        let two = GaussInt::new(2, 0);
        let bb = GaussInt {
            re: b.norm_sqr(),
            im: Int::from(0),
        };
        let r2 = GaussInt {
            re: Int::from(0),
            im: &m[0][0].im * &Int::from(2),
        };
        let one2 = two.clone();
        let dbl = |z: &GaussInt| &two * z;
        // 2·n(b,r) in terms of |b|² and 2ir.
        let want = [
            [&(&one2 - &bb) + &r2, dbl(&b), &bb - &r2],
            [-&dbl(&b.conj()), one2.clone(), dbl(&b.conj())],
            [&(-&bb) + &r2, dbl(&b), &(&one2 + &bb) - &r2],
        ];
        (0..3).all(|i| (0..3).all(|j| dbl(&m[i][j]) == want[i][j]))
    }

    /// Whether `γ` lies in the parabolic subgroup `P`: its key is a unit multiple of `v₀`.
    pub fn is_parabolic(&self) -> bool {
        let k = self.key();
        k[1].is_zero() && k[0] == k[2] && units().contains(&k[0])
    }

    pub fn to_mat3(&self) -> Mat3 {
        self.0.to_mat3()
    }

    /// `g∞⁻¹ γ g∞ ∈ Γ`.
    pub fn conjugated(&self) -> GroupElement {
        let gi = g_infty();
        GroupElement::from_trusted(*gi.inverse().matrix() * self.to_mat3() * *gi.matrix())
    }
}

/// `g∞ = a(√2)·m(e^{πi/4})`.
pub fn g_infty() -> GroupElement {
    mk_a(std::f64::consts::SQRT_2) * mk_m(cis(std::f64::consts::FRAC_PI_4)).expect("unit modulus")
}

fn round_exact(m: &Mat3) -> Result<GaussMat3> {
    let mut out = GaussMat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let z = m.get(i, j);
            let (re, im) = (z.re.round(), z.im.round());
            if (z.re - re).abs() > 1e-9 || (z.im - im).abs() > 1e-9 {
                return Err(LatticeError::NotInGroup(format!("{m:?}")));
            }
            out.0[i][j] = GaussInt::new(re as i64, im as i64);
        }
    }
    Ok(out)
}

/// A named generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub name: &'static str,
    pub element: LatticeElement,
}

/// `g∞ λ g∞⁻¹` for the three standard generators `λ` of `Λ₄`, rounded to
/// `ℤ[i]` and verified exactly.
pub fn lattice_generators() -> Result<[LatticeElement; 3]> {
    let g = g_infty();
    let gi = g.inverse();
    let gens = Lattice::new(SIGMA).generators();
    let mut out = Vec::with_capacity(3);
    for x in &gens {
        let m = *g.matrix() * *mk_n_point(x).matrix() * *gi.matrix();
        out.push(LatticeElement::new(round_exact(&m)?)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// `m(i) = diag(i, −1, i)` in `Γ₀`.
pub fn m_i() -> LatticeElement {
    LatticeElement(GaussMat3::diag(GaussInt::i(), GaussInt::new(-1, 0), GaussInt::i()))
}

/// `w = diag(−1, −1, 1)` in `Γ₀`.
pub fn w_elem() -> LatticeElement {
    let w = round_exact(mk_w().matrix()).expect("integral");
    LatticeElement(w)
}

/// Default generating set: the conjugated `Λ₄` generators and their inverses,
/// `m(i)^{±1}`, and `w`.
pub fn default_generators() -> Result<Vec<Generator>> {
    let [u1, ui, z] = lattice_generators()?;
    let m = m_i();
    Ok(vec![
        Generator { name: "u1", element: u1.clone() },
        Generator { name: "u1^-1", element: u1.inverse() },
        Generator { name: "ui", element: ui.clone() },
        Generator { name: "ui^-1", element: ui.inverse() },
        Generator { name: "z", element: z.clone() },
        Generator { name: "z^-1", element: z.inverse() },
        Generator { name: "m", element: m.clone() },
        Generator { name: "m^-1", element: m.inverse() },
        Generator { name: "w", element: w_elem() },
    ])
}

/// One coset `Γ_N γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetEntry {
    /// Generator indices of a shortest word reaching the coset.
    pub word: Vec<usize>,
    pub element: LatticeElement,
    pub key: [GaussInt; 3],
}

impl CosetEntry {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Coset representatives sorted by key.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub generator_names: Vec<&'static str>,
    pub max_length: usize,
    pub entries: Vec<CosetEntry>,
    /// Number of word extensions that landed on an already known key and
    /// were checked to differ from its representative by an element of `Γ_N`.
    pub collisions_checked: usize,
}

/// Serialisable view of a coset entry.
#[derive(Debug, Clone, Serialize)]
pub struct CosetRecord {
    pub word: String,
    pub matrix: [[[i64; 2]; 3]; 3],
    pub key: [[i64; 2]; 3],
}

fn pair(z: &GaussInt) -> Result<[i64; 2]> {
    let (a, b) = z.to_pair().ok_or(LatticeError::Overflow)?;
    Ok([a, b])
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn word_string(&self, e: &CosetEntry) -> String {
        if e.word.is_empty() {
            return "1".into();
        }
        e.word.iter().map(|&i| self.generator_names[i]).collect::<Vec<_>>().join(".")
    }

    pub fn record(&self, e: &CosetEntry) -> Result<CosetRecord> {
        let m = &e.element.matrix().0;
        let mut matrix = [[[0i64; 2]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                matrix[i][j] = pair(&m[i][j])?;
            }
        }
        Ok(CosetRecord {
            word: self.word_string(e),
            matrix,
            key: [pair(&e.key[0])?, pair(&e.key[1])?, pair(&e.key[2])?],
        })
    }

    /// Entries reached by words of length `≤ len`, in key order.
    pub fn up_to(&self, len: usize) -> impl Iterator<Item = &CosetEntry> {
        self.entries.iter().filter(move |e| e.length() <= len)
    }

    /// Adds `m(i)^a γ` for every entry, so the table is stable under left
    /// multiplication by `Γ_P`. The key of `m(i)^a γ` is `(−i)^a` times the key of `γ`.
    /// Words grow by up to three letters, and `max_length` is raised to match.
    pub fn unit_closure(&self) -> CosetTable {
        let mut seen: HashMap<[GaussInt; 3], usize> = HashMap::new();
        let mut entries = Vec::new();
        let mi = m_i();
        let mi_idx = self.generator_names.iter().position(|n| *n == "m");
        for e in &self.entries {
            let mut el = e.element.clone();
            let mut word = e.word.clone();
            for _ in 0..4 {
                let key = el.key();
                if !seen.contains_key(&key) {
                    seen.insert(key.clone(), entries.len());
                    entries.push(CosetEntry {
                        word: word.clone(),
                        element: el.clone(),
                        key,
                    });
                }
                el = mi.mul(&el);
                if let Some(i) = mi_idx {
                    word.insert(0, i);
                }
            }
        }
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        CosetTable {
            generator_names: self.generator_names.clone(),
            max_length: entries.iter().map(CosetEntry::length).max().unwrap_or(0),
            entries,
            collisions_checked: self.collisions_checked,
        }
    }
}

/// Breadth-first enumeration of the cosets `Γ_N γ` for all words `γ` of
/// length `≤ max_length` in `gens`.
///
/// Right multiplication by a generator `s` is well defined on cosets and
/// sends the key `v` to `s⁻¹ v`, so the search runs on keys. Whenever a word
/// reaches a known key, its matrix is checked exactly to differ from the stored
/// representative by an element of `N`.
pub fn enumerate_cosets(gens: &[Generator], max_length: usize, cap: usize) -> Result<CosetTable> {
    for g in gens {
        if !gamma0_member(g.element.matrix()) {
            return Err(LatticeError::NotInGroup(g.name.into()));
        }
    }
    let inverses: Vec<LatticeElement> = gens.iter().map(|g| g.element.inverse()).collect();
    let mut index: HashMap<[GaussInt; 3], usize> = HashMap::new();
    let mut entries = vec![CosetEntry {
        word: Vec::new(),
        element: LatticeElement::identity(),
        key: v0(),
    }];
    index.insert(v0(), 0);
    let mut frontier = vec![0usize];
    let mut collisions = 0usize;
    for _ in 0..max_length {
        let mut next = Vec::new();
        for &ei in &frontier {
            for (si, (g, ginv)) in gens.iter().zip(&inverses).enumerate() {
                let key = ginv.matrix().mul_vec(&entries[ei].key);
                let element = entries[ei].element.mul(&g.element);
                match index.get(&key) {
                    Some(&known) => {
                        let diff = element.mul(&entries[known].element.inverse());
                        if !diff.is_in_n() {
                            return Err(LatticeError::InvariantIncomplete { key: format!("{key:?}") });
                        }
                        collisions += 1;
                    }
                    None => {
                        if entries.len() >= cap {
                            return Err(LatticeError::CapExceeded { cap });
                        }
                        let mut word = entries[ei].word.clone();
                        word.push(si);
                        index.insert(key.clone(), entries.len());
                        next.push(entries.len());
                        entries.push(CosetEntry { word, element, key });
                    }
                }
            }
        }
        frontier = next;
    }
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(CosetTable {
        generator_names: gens.iter().map(|g| g.name).collect(),
        max_length,
        entries,
        collisions_checked: collisions,
    })
}

fn check_convergence(nu: Complex) -> Result<()> {
    if nu.re > 2.0 {
        Ok(())
    } else {
        Err(LatticeError::OutsideConvergence { re_nu: nu.re })
    }
}

/// The Eisenstein germ `f(n a(t) k) = t^{2+ν} Φ^h_{p,r,q}(k)` at `g`.
pub fn eisenstein_germ(nu: Complex, kindex: KIndex, g: &GroupElement) -> Result<Complex> {
    let w = iwasawa(g)?;
    let k = KPoint::from_matrix_unchecked(w.k.matrix());
    Ok(Complex::new(w.t, 0.0).powc(nu + 2.0) * kpoly_eval(kindex, &k))
}

fn check_j(j: i64, kindex: KIndex) -> Result<()> {
    let got = kindex.h - 3 * kindex.r;
    if got != 2 * j {
        return Err(LatticeError::IndexMismatch { got, want: 2 * j });
    }
    Ok(())
}

/// `Σ_{Γ_N γ} term(γ g)` over the table entries of length `≤ len`, in key order,
/// with compensated summation.
pub fn coset_sum(
    table: &CosetTable,
    len: usize,
    g: &GroupElement,
    term: &dyn Fn(&GroupElement) -> Result<Complex>,
) -> Result<Complex> {
    let mut acc = CompensatedSum::new();
    for e in table.up_to(len) {
        acc.add(term(&(e.element.conjugated() * *g))?);
    }
    Ok(acc.value())
}

/// Truncated Eisenstein series `Σ_{γ ∈ table} f(γ g)` with the germ
/// `t^{2+ν} Φ^h_{p,r,q}`, `h − 3r = 2j`.
pub fn eisenstein_partial(j: i64, nu: Complex, kindex: KIndex, g: &GroupElement, table: &CosetTable) -> Result<Complex> {
    check_convergence(nu)?;
    check_j(j, kindex)?;
    coset_sum(table, table.max_length, g, &|x| eisenstein_germ(nu, kindex, x))
}

/// Partial Eisenstein sums for every word length `0..=table.max_length`.
pub fn eisenstein_by_length(
    j: i64,
    nu: Complex,
    kindex: KIndex,
    g: &GroupElement,
    table: &CosetTable,
) -> Result<Vec<Complex>> {
    check_convergence(nu)?;
    check_j(j, kindex)?;
    (0..=table.max_length)
        .map(|l| coset_sum(table, l, g, &|x| eisenstein_germ(nu, kindex, x)))
        .collect()
}

/// The parabolic sub-sum `Σ_{a mod 4} f(m(i)^a g)` of the Eisenstein germ.
pub fn parabolic_subsum(j: i64, nu: Complex, kindex: KIndex, g: &GroupElement) -> Result<Complex> {
    check_j(j, kindex)?;
    let mi = m_i().conjugated();
    let mut x = *g;
    let mut acc = CompensatedSum::new();
    for _ in 0..4 {
        acc.add(eisenstein_germ(nu, kindex, &x)?);
        x = mi * x;
    }
    Ok(acc.value())
}

fn check_order(order: &FourierTermOrder) -> Result<()> {
    match order {
        FourierTermOrder::NonAbelian(o) if !Lattice::new(SIGMA).admits(o.ell) => Err(LatticeError::IncompatibleOrder),
        _ => Ok(()),
    }
}

/// The germ `Μ_N(j, ν)` used by the Poincaré series.
pub fn poincare_germ(order: &FourierTermOrder, j: i64, nu: Complex) -> Result<FourierTermFunction> {
    check_order(order)?;
    Ok(mu_1d(order, j, nu)?)
}

/// Truncated Poincaré series `Σ_{γ ∈ table} Μ_N(γ g)`.
pub fn poincare_partial(order: &FourierTermOrder, j: i64, nu: Complex, g: &GroupElement, table: &CosetTable) -> Result<Complex> {
    check_convergence(nu)?;
    let f = poincare_germ(order, j, nu)?;
    coset_sum(table, table.max_length, g, &|x| Ok(f.eval(x)?))
}

/// The Poincaré sum split into the parabolic part (cosets in `Γ_P`) and the
/// big-cell part.
pub fn poincare_split(
    order: &FourierTermOrder,
    j: i64,
    nu: Complex,
    g: &GroupElement,
    table: &CosetTable,
) -> Result<(Complex, Complex)> {
    check_convergence(nu)?;
    let f = poincare_germ(order, j, nu)?;
    let (mut inf, mut big) = (CompensatedSum::new(), CompensatedSum::new());
    for e in &table.entries {
        let v = f.eval(&(e.element.conjugated() * *g))?;
        if e.element.is_parabolic() {
            inf.add(v);
        } else {
            big.add(v);
        }
    }
    Ok((inf.value(), big.value()))
}

/// `m(i)^a n(b,r) a(t) k = n((−i)^a b, r) a(t) m(i)^a k`.
fn mi_shift(a: usize, n: &HeisenbergPoint, k: &KPoint) -> (HeisenbergPoint, KPoint) {
    let rot = Complex::new(0.0, -1.0).powi(a as i32);
    let m = mk_m(Complex::new(0.0, 1.0).powi(a as i32)).expect("unit modulus");
    (
        HeisenbergPoint::new(rot * n.b, n.r),
        KPoint::from_matrix_unchecked(&(*m.matrix() * k.to_matrix())),
    )
}

/// `𝒫^∞Μ(n a(t) k) = Σ_{a mod 4} Μ(m(i)^a n a(t) k)` with the radial factors
/// evaluated once.
pub fn poincare_infty_nak(f: &FourierTermFunction, t: f64) -> Result<impl Fn(&HeisenbergPoint, &KPoint) -> Result<Complex> + '_> {
    let radial: Vec<Complex> = f
        .components
        .iter()
        .map(|c| c.radial.value(t))
        .collect::<std::result::Result<_, _>>()?;
    Ok(move |n: &HeisenbergPoint, k: &KPoint| {
        let mut acc = Complex::new(0.0, 0.0);
        for a in 0..4 {
            let (na, ka) = mi_shift(a, n, k);
            for (c, rv) in f.components.iter().zip(&radial) {
                acc += c.nfactor.eval(&na)? * rv * kpoly_eval(f.kindex(c.r), &ka);
            }
        }
        Ok(acc)
    })
}

/// The coefficient `a` with `F_N 𝒫^∞ Μ_N = a Μ_N`, from the `m(i)` action.
///
/// Abelian: `Μ_β(m(i)^a g) = i^{aj} Μ_{i^a β}(g)` and only `a = 0` keeps the
/// order, so `a = 1`. Non-abelian: each component picks up `i^{a j_r}` from
/// the K-type and the diagonal entry of the `m(i)`-action on theta functions
/// applied `3a` times; the result is independent of the component.
pub fn infty_coefficient(f: &FourierTermFunction) -> Result<Complex> {
    let o = match &f.order {
        FourierTermOrder::Abelian { .. } => return Ok(Complex::new(1.0, 0.0)),
        FourierTermOrder::NonAbelian(o) => *o,
    };
    let size = o.ell.period();
    let mut values = Vec::new();
    for comp in &f.components {
        let m = match &comp.nfactor {
            NFactor::Theta(p) => p.m,
            NFactor::Character(_) => return Err(LatticeError::IncompatibleOrder),
        };
        let jr = (f.kweight.h - 3 * comp.r) / 2;
        let mut coeffs = vec![Complex::new(0.0, 0.0); size];
        coeffs[o.c as usize] = Complex::new(1.0, 0.0);
        let mut total = Complex::new(0.0, 0.0);
        for a in 0..4usize {
            total += Complex::new(0.0, 1.0).powi((a as i64 * jr).rem_euclid(4) as i32) * coeffs[o.c as usize];
            for _ in 0..3 {
                coeffs = mi_transform(o.ell, m, &coeffs)?;
            }
        }
        values.push(total);
    }
    let first = values[0];
    if values.iter().any(|v| (v - first).norm() > 1e-12) {
        return Err(LatticeError::IncompatibleOrder);
    }
    Ok(first)
}

/// `(𝒫^∞ Μ_N(g), a)`.
pub fn poincare_infty(order: &FourierTermOrder, j: i64, nu: Complex, g: &GroupElement) -> Result<(Complex, Complex)> {
    let f = poincare_germ(order, j, nu)?;
    let mi = m_i().conjugated();
    let mut x = *g;
    let mut acc = CompensatedSum::new();
    for _ in 0..4 {
        acc.add(f.eval(&x)?);
        x = mi * x;
    }
    Ok((acc.value(), infty_coefficient(&f)?))
}

/// Relative tolerance for grid doubling in Fourier-term quadrature.
pub const QUAD_TOL: f64 = 1e-6;

fn n_grid_points(lattice: Lattice, grid: NGrid) -> (Vec<HeisenbergPoint>, f64) {
    let period = lattice.central_period();
    let cell = period / (grid.xy * grid.xy * grid.r) as f64;
    let mut pts = Vec::with_capacity(grid.xy * grid.xy * grid.r);
    for i in 0..grid.xy {
        for j in 0..grid.xy {
            for k in 0..grid.r {
                pts.push(HeisenbergPoint::new(
                    Complex::new(i as f64 / grid.xy as f64, j as f64 / grid.xy as f64),
                    k as f64 * period / grid.r as f64,
                ));
            }
        }
    }
    (pts, cell)
}

fn doubled(grid: NGrid) -> NGrid {
    NGrid {
        xy: 2 * grid.xy,
        r: 2 * grid.r,
    }
}

/// `F_β f(g) = (σ/2) ∫_{Λ_σ\N} χ_β(n₁)⁻¹ f(n₁ g) dn₁` by the trapezoid rule on
/// `Λ₄\N`, checked against the doubled grid.
pub fn fourier_term_abelian(
    beta: &GaussInt,
    f: &dyn Fn(&GroupElement) -> Result<Complex>,
    g: &GroupElement,
    grid: NGrid,
) -> Result<Complex> {
    let lattice = Lattice::new(SIGMA);
    let run = |grid: NGrid| -> Result<(Complex, f64)> {
        let (pts, cell) = n_grid_points(lattice, grid);
        let mut acc = CompensatedSum::new();
        let mut mag = 0.0;
        for x in &pts {
            let v = f(&(mk_n_point(x) * *g))?;
            mag += v.norm();
            acc.add(crate::heisenberg::character_eval(beta, x).conj() * v);
        }
        let s = SIGMA as f64 / 2.0 * cell;
        Ok((acc.value() * s, mag * s))
    };
    let (coarse, _) = run(grid)?;
    let (fine, scale) = run(doubled(grid))?;
    let diff = (fine - coarse).norm();
    if diff > QUAD_TOL * scale.max(fine.norm()) {
        return Err(LatticeError::QuadratureUnconverged { diff });
    }
    Ok(fine)
}

/// One term `c · Θ_{ℓ,c}(h_{ℓ,m}) ⊗ Φ^h_{p,r,q}` of a non-abelian Fourier term.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTerm {
    pub theta: ThetaParams,
    pub kindex: KIndex,
    pub coeff: Complex,
}

/// `F_{ℓ,c,d} f` at a fixed height `t`, restricted to one K-type.
#[derive(Debug, Clone, PartialEq)]
pub struct NonAbelianProjection {
    pub order: NonAbelianOrder,
    pub t: f64,
    pub terms: Vec<ProjectionTerm>,
}

impl NonAbelianProjection {
    /// `F_N f(n a(t) k)`.
    pub fn eval(&self, n: &HeisenbergPoint, k: &KPoint) -> Result<Complex> {
        let mut acc = Complex::new(0.0, 0.0);
        for term in &self.terms {
            acc += term.coeff * crate::heisenberg::theta_eval(&term.theta, n)? * kpoly_eval(term.kindex, k);
        }
        Ok(acc)
    }
}

/// Index pairs `(m, r)` of the K-type `(h, p, q)` with `(6m+3) sign ℓ + h − 3r = d`.
pub fn selection_pairs(order: &NonAbelianOrder, kweight: KWeight) -> Vec<(u32, i64)> {
    let s = order.sign();
    let mut out = Vec::new();
    for r in (-kweight.p..=kweight.p).step_by(2) {
        let num = s * (order.d - kweight.h + 3 * r) - 3;
        if num >= 0 && num % 6 == 0 {
            out.push(((num / 6) as u32, r));
        }
    }
    out
}

/// A K-quadrature rule exact for products of two `Φ^h_{p,·,q}`.
pub fn k_rule(p: i64) -> KQuadrature {
    KQuadrature {
        gl_nodes: p as usize + 2,
        circle_nodes: 2 * p as usize + 4,
    }
}

/// The non-abelian Fourier term `F_{ℓ,c,d}` of `f` at height `t`, restricted to
/// the K-type `kweight`: projection of `(n, k) ↦ f(n a(t) k)` onto
/// `Θ_{ℓ,c}(h_{ℓ,m}) ⊗ Φ^h_{p,r,q}` for every pair satisfying the selection
/// rule, by a trapezoid rule on `Λ₄\N` times `krule` on `K`, checked against
/// the doubled `N` grid.
pub fn fourier_term_nonabelian(
    order: &NonAbelianOrder,
    kweight: KWeight,
    t: f64,
    f: &dyn Fn(&HeisenbergPoint, &KPoint) -> Result<Complex>,
    grid: NGrid,
    krule: KQuadrature,
) -> Result<NonAbelianProjection> {
    let lattice = Lattice::new(SIGMA);
    if !lattice.admits(order.ell) {
        return Err(LatticeError::IncompatibleOrder);
    }
    let pairs = selection_pairs(order, kweight);
    let mut thetas = Vec::with_capacity(pairs.len());
    let mut kidx = Vec::with_capacity(pairs.len());
    for &(m, r) in &pairs {
        thetas.push(ThetaParams::new(order.ell, order.c, m)?);
        kidx.push(KIndex::new(kweight.h, kweight.p, r, kweight.q).map_err(|_| LatticeError::IncompatibleOrder)?);
    }
    let knodes = krule.nodes();
    let kvals: Vec<Vec<Complex>> = knodes
        .iter()
        .map(|(k, _)| kidx.iter().map(|&i| kpoly_eval(i, k).conj()).collect())
        .collect();
    let run = |grid: NGrid| -> Result<(Vec<Complex>, f64)> {
        let (pts, cell) = n_grid_points(lattice, grid);
        let mut acc = vec![CompensatedSum::new(); pairs.len()];
        let mut mag = 0.0;
        for x in &pts {
            let th: Vec<Complex> = thetas
                .iter()
                .map(|p| crate::heisenberg::theta_eval(p, x).map(|v| v.conj()))
                .collect::<std::result::Result<_, _>>()?;
            let mut inner = vec![Complex::new(0.0, 0.0); pairs.len()];
            for ((k, w), kv) in knodes.iter().zip(&kvals) {
                let v = f(x, k)?;
                mag += w * v.norm();
                for i in 0..pairs.len() {
                    inner[i] += w * v * kv[i];
                }
            }
            for i in 0..pairs.len() {
                acc[i].add(th[i] * inner[i]);
            }
        }
        let s = SIGMA as f64 / 2.0 * cell;
        let coeffs = acc
            .iter()
            .zip(&kidx)
            .map(|(a, &i)| a.value() * s / kpoly_norm_sqr(i))
            .collect();
        Ok((coeffs, mag * s))
    };
    let (coarse, _) = run(grid)?;
    let (fine, scale) = run(doubled(grid))?;
    let diff = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if diff > QUAD_TOL * scale {
        return Err(LatticeError::QuadratureUnconverged { diff });
    }
    Ok(NonAbelianProjection {
        order: *order,
        t,
        terms: thetas
            .into_iter()
            .zip(kidx)
            .zip(fine)
            .map(|((theta, kindex), coeff)| ProjectionTerm { theta, kindex, coeff })
            .collect(),
    })
}
