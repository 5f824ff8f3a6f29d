//! The group `G = SU(2,1)` realised as `{g ∈ SL₃(ℂ) : g* I₂,₁ g = I₂,₁}`,
//! its standard subgroups, Iwasawa coordinates `g = n(b,r)·a(t)·k`, the Bruhat
//! height formula, and a basis of the Lie algebra with closed-form one-parameter
//! subgroups.
//!
//! | constructor | matrix                                                          |
//! |-------------|-----------------------------------------------------------------|
//! | `n(b,r)`    | unipotent, see [`mk_n`]                                         |
//! | `a(y)`      | `[[(y+1/y)/2, 0, (y−1/y)/2], [0,1,0], [(y−1/y)/2, 0, (y+1/y)/2]]` |
//! | `m(η)`      | `diag(η, η⁻², η)`                                               |
//! | `w`         | `diag(−1, −1, 1)`                                               |
//! | `k(u,δ)`    | block diagonal `[[u, 0], [0, δ]]` with `δ·det u = 1`              |

use thiserror::Error;

use crate::heisenberg::HeisenbergPoint;
use crate::numeric_core::{cis, Complex, Mat3, I};

/// Tolerance for membership tests.
pub const MEMBER_TOL: f64 = 1e-10;

/// Errors raised by group constructors and decompositions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("matrix is not in SU(2,1): defect {defect:.3e}")]
    NotInGroup { defect: f64 },
    #[error("K-component is not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("degenerate Iwasawa height t = {t}")]
    DegenerateHeight { t: f64 },
}

/// The Hermitian form `I₂,₁ = diag(1, 1, −1)`.
pub fn i21() -> Mat3 {
    Mat3::from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]])
}

/// Membership defect: `‖g* I₂,₁ g − I₂,₁‖_F + |det g − 1|`.
pub fn member_defect(g: &Mat3) -> f64 {
    let j = i21();
    (g.herm_conj() * j * *g).frob_dist(&j) + (g.det() - Complex::new(1.0, 0.0)).norm()
}

/// True iff `g` preserves `I₂,₁` and has determinant one, within 1e−10.
pub fn is_member(g: &Mat3) -> bool {
    let j = i21();
    (g.herm_conj() * j * *g).frob_dist(&j) <= MEMBER_TOL
        && (g.det() - Complex::new(1.0, 0.0)).norm() <= MEMBER_TOL
}

/// An element of `SU(2,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(Mat3);

impl GroupElement {
    /// Checks membership before wrapping.
    pub fn new(m: Mat3) -> Result<Self, GroupError> {
        let defect = member_defect(&m);
        if defect <= 2.0 * MEMBER_TOL {
            Ok(GroupElement(m))
        } else {
            Err(GroupError::NotInGroup { defect })
        }
    }

    /// Wraps a matrix known to be in `G` by construction.
    pub fn from_trusted(m: Mat3) -> Self {
        GroupElement(m)
    }

    pub fn identity() -> Self {
        GroupElement(Mat3::identity())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// `g⁻¹ = I₂,₁ g* I₂,₁`.
    pub fn inverse(&self) -> Self {
        let j = i21();
        GroupElement(j * self.0.herm_conj() * j)
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 * rhs.0)
    }
}

/// The unipotent element `n(b, r)`.
pub fn mk_n(b: Complex, r: f64) -> GroupElement {
    let bb = b.norm_sqr();
    GroupElement(Mat3([
        [Complex::new(1.0 - bb / 2.0, r), b, Complex::new(bb / 2.0, -r)],
        [-b.conj(), Complex::new(1.0, 0.0), b.conj()],
        [Complex::new(-bb / 2.0, r), b, Complex::new(1.0 + bb / 2.0, -r)],
    ]))
}

/// `n(x)` for a Heisenberg point.
pub fn mk_n_point(x: &HeisenbergPoint) -> GroupElement {
    mk_n(x.b, x.r)
}

/// The split torus element `a(y)`, `y > 0`.
pub fn mk_a(y: f64) -> GroupElement {
    let (c, s) = ((y + 1.0 / y) / 2.0, (y - 1.0 / y) / 2.0);
    GroupElement(Mat3::from_real([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]]))
}

/// `m(η) = diag(η, η⁻², η)` for `|η| = 1`.
pub fn mk_m(eta: Complex) -> Result<GroupElement, GroupError> {
    let defect = (eta.norm() - 1.0).abs();
    if defect > MEMBER_TOL {
        return Err(GroupError::NotUnitary { defect });
    }
    Ok(GroupElement(Mat3::diag(eta, eta.powi(-2), eta)))
}

/// The Weyl element `w = diag(−1, −1, 1)`.
pub fn mk_w() -> GroupElement {
    GroupElement(Mat3::from_real([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]))
}

/// The compact element with upper block `u` and lower entry `δ`, requiring
/// `u` unitary, `|δ| = 1` and `δ·det u = 1`.
pub fn mk_k(u: [[Complex; 2]; 2], delta: Complex) -> Result<GroupElement, GroupError> {
    let uu = [
        [
            u[0][0].norm_sqr() + u[1][0].norm_sqr(),
            (u[0][0].conj() * u[0][1] + u[1][0].conj() * u[1][1]).norm(),
        ],
        [0.0, u[0][1].norm_sqr() + u[1][1].norm_sqr()],
    ];
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let defect = (uu[0][0] - 1.0).abs()
        + uu[0][1]
        + (uu[1][1] - 1.0).abs()
        + (delta.norm() - 1.0).abs()
        + (delta * det - Complex::new(1.0, 0.0)).norm();
    if defect > MEMBER_TOL {
        return Err(GroupError::NotUnitary { defect });
    }
    let z = Complex::new(0.0, 0.0);
    Ok(GroupElement(Mat3([[u[0][0], u[0][1], z], [u[1][0], u[1][1], z], [z, z, delta]])))
}

/// Iwasawa coordinates `g = n·a(t)·k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords {
    pub n: HeisenbergPoint,
    pub t: f64,
    pub k: GroupElement,
}

impl IwasawaCoords {
    pub fn reconstruct(&self) -> GroupElement {
        mk_n_point(&self.n) * mk_a(self.t) * self.k
    }
}

/// Iwasawa height `t` of `g`, from `t = √2 / ‖g* (1,0,−1)ᵗ‖`.
pub fn height(g: &Mat3) -> f64 {
    let gs = g.herm_conj();
    let u = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(-1.0, 0.0)];
    let v = gs.mul_vec(u);
    let norm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
    std::f64::consts::SQRT_2 / norm
}

/// Closed-form Iwasawa decomposition.
///
/// With `u = (1,0,−1)ᵗ`, the vector `g* u` has norm `√2/t`; the vector
/// `t²·g g* u = n u = (1+2ir−|b|², −2b̄, −1+2ir−|b|²)` then yields `b` and `r`,
/// and `k = a(t)⁻¹ n⁻¹ g` is checked to be block-diagonal unitary.
pub fn iwasawa(g: &GroupElement) -> Result<IwasawaCoords, GroupError> {
    let m = g.matrix();
    let defect = member_defect(m);
    if defect > 1e-8 {
        return Err(GroupError::NotInGroup { defect });
    }
    let t = height(m);
    if !(t.is_finite() && t > 0.0) {
        return Err(GroupError::DegenerateHeight { t });
    }
    let u = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), Complex::new(-1.0, 0.0)];
    let v = (*m * m.herm_conj()).mul_vec(u);
    let t2 = t * t;
    let b = -(v[1] * t2).conj() / 2.0;
    let r = (v[0] * t2).im / 2.0;
    let k = mk_a(1.0 / t).matrix().to_owned() * *mk_n(-b, -r).matrix() * *m;
    let mut kk = k;
    let off = kk.0[0][2].norm() + kk.0[1][2].norm() + kk.0[2][0].norm() + kk.0[2][1].norm();
    let unit = (kk.herm_conj() * kk).frob_dist(&Mat3::identity());
    if off > 1e-7 || unit > 1e-7 {
        return Err(GroupError::NotUnitary { defect: off + unit });
    }
    let z = Complex::new(0.0, 0.0);
    kk.0[0][2] = z;
    kk.0[1][2] = z;
    kk.0[2][0] = z;
    kk.0[2][1] = z;
    Ok(IwasawaCoords {
        n: HeisenbergPoint::new(b, r),
        t,
        k: GroupElement(kk),
    })
}

/// Height `t′` of `w·a(t₁)·n(b,r)·a(t)` in the big Bruhat cell:
/// `t′ = t / (t₁ |2ir + t² + |b|²|)`.
pub fn bruhat_height(t1: f64, b: Complex, r: f64, t: f64) -> f64 {
    let d = Complex::new(t * t + b.norm_sqr(), 2.0 * r);
    t / (t1 * d.norm())
}

/// Real basis of the Lie algebra, in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealLie {
    X0,
    X1,
    X2,
    Hr,
    Hi,
    W0,
    W1,
    W2,
}

impl RealLie {
    pub const ALL: [RealLie; 8] = [
        RealLie::X0,
        RealLie::X1,
        RealLie::X2,
        RealLie::Hr,
        RealLie::Hi,
        RealLie::W0,
        RealLie::W1,
        RealLie::W2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The one-parameter subgroup `e^{sX}`, in closed form.
    pub fn exp(self, s: f64) -> Mat3 {
        let z = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        match self {
            RealLie::X0 => *mk_n(z, s / 2.0).matrix(),
            RealLie::X1 => *mk_n(Complex::new(s, 0.0), 0.0).matrix(),
            RealLie::X2 => *mk_n(Complex::new(0.0, s), 0.0).matrix(),
            RealLie::Hr => *mk_a(s.exp()).matrix(),
            RealLie::Hi => {
                let e = cis(s);
                Mat3::diag(e, e.powi(-2), e)
            }
            RealLie::W0 => Mat3::diag(cis(s), cis(-s), one),
            RealLie::W1 => {
                let (c, sn) = (Complex::new(s.cos(), 0.0), Complex::new(s.sin(), 0.0));
                Mat3([[c, sn, z], [-sn, c, z], [z, z, one]])
            }
            RealLie::W2 => {
                let (c, sn) = (Complex::new(s.cos(), 0.0), I * s.sin());
                Mat3([[c, sn, z], [sn, c, z], [z, z, one]])
            }
        }
    }
}

/// An element of the complexified Lie algebra, as coefficients on [`RealLie::ALL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieVector(pub [Complex; 8]);

impl LieVector {
    pub fn zero() -> Self {
        LieVector([Complex::new(0.0, 0.0); 8])
    }

    pub fn basis(x: RealLie) -> Self {
        let mut v = Self::zero();
        v.0[x.index()] = Complex::new(1.0, 0.0);
        v
    }

    pub fn scale(self, c: Complex) -> Self {
        LieVector(self.0.map(|x| x * c))
    }

    pub fn scale_re(self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }

    /// `CK_i = 3W0 − 2Hi`, the generator of the centre of `Lie(K)`.
    pub fn ck() -> Self {
        Self::basis(RealLie::W0).scale_re(3.0) + Self::basis(RealLie::Hi).scale_re(-2.0)
    }

    /// `Z12 = W1 − iW2`.
    pub fn z12() -> Self {
        Self::basis(RealLie::W1) + Self::basis(RealLie::W2).scale(-I)
    }

    /// `Z21 = W1 + iW2`.
    pub fn z21() -> Self {
        Self::basis(RealLie::W1) + Self::basis(RealLie::W2).scale(I)
    }

    /// `Y = X0 − ¼W0 − ¼CK_i`.
    fn y() -> Self {
        Self::basis(RealLie::X0) + Self::basis(RealLie::W0).scale_re(-0.25) + Self::ck().scale_re(-0.25)
    }

    /// `Z13 = ½Hr + iY`.
    pub fn z13() -> Self {
        Self::basis(RealLie::Hr).scale_re(0.5) + Self::y().scale(I)
    }

    /// `Z31 = ½Hr − iY`.
    pub fn z31() -> Self {
        Self::basis(RealLie::Hr).scale_re(0.5) + Self::y().scale(-I)
    }

    /// `Z23 = ½(X1 − W1 + iX2 − iW2)`.
    pub fn z23() -> Self {
        (Self::basis(RealLie::X1) + Self::basis(RealLie::W1).scale_re(-1.0)
            + Self::basis(RealLie::X2).scale(I)
            + Self::basis(RealLie::W2).scale(-I))
        .scale_re(0.5)
    }

    /// `Z32 = ½(X1 − W1 − iX2 + iW2)`.
    pub fn z32() -> Self {
        (Self::basis(RealLie::X1) + Self::basis(RealLie::W1).scale_re(-1.0)
            + Self::basis(RealLie::X2).scale(-I)
            + Self::basis(RealLie::W2).scale(I))
        .scale_re(0.5)
    }
}

impl std::ops::Add for LieVector {
    type Output = LieVector;
    fn add(self, rhs: LieVector) -> LieVector {
        LieVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

/// Right derivative `(d/ds) f(g e^{sX})|₀` along a real basis direction,
/// by central differences at `h` and `h/2` combined by Richardson.
pub fn right_derivative<E>(
    f: &dyn Fn(&Mat3) -> Result<Complex, E>,
    g: &Mat3,
    x: RealLie,
    h: f64,
) -> Result<Complex, E> {
    let central = |h: f64| -> Result<Complex, E> {
        Ok((f(&(*g * x.exp(h)))? - f(&(*g * x.exp(-h)))?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Mixed second derivative `∂s∂t f(g e^{sX} e^{tY})|₀` along real basis
/// directions, by the four-point stencil at `h` and `h/2` combined by Richardson.
pub fn right_mixed_derivative<E>(
    f: &dyn Fn(&Mat3) -> Result<Complex, E>,
    g: &Mat3,
    x: RealLie,
    y: RealLie,
    h: f64,
) -> Result<Complex, E> {
    let stencil = |h: f64| -> Result<Complex, E> {
        let (xp, xm, yp, ym) = (x.exp(h), x.exp(-h), y.exp(h), y.exp(-h));
        let pp = f(&(*g * xp * yp))?;
        let pm = f(&(*g * xp * ym))?;
        let mp = f(&(*g * xm * yp))?;
        let mm = f(&(*g * xm * ym))?;
        Ok((pp - pm - mp + mm) / (4.0 * h * h))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Right derivative along a complexified Lie algebra element.
pub fn right_derivative_complex<E>(
    f: &dyn Fn(&Mat3) -> Result<Complex, E>,
    g: &Mat3,
    x: &LieVector,
    h: f64,
) -> Result<Complex, E> {
    let mut acc = Complex::new(0.0, 0.0);
    for e in RealLie::ALL {
        let c = x.0[e.index()];
        if c.norm() > 0.0 {
            acc += c * right_derivative(f, g, e, h)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn random_k(rng: &mut ChaCha8Rng) -> GroupElement {
        let eta = cis(rng.gen_range(0.0..std::f64::consts::TAU));
        let u = rng.gen_range(0.0..1.0f64);
        let (al, be) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
        let v = [
            [cis(al) * (1.0 - u).sqrt(), cis(be) * u.sqrt()],
            [-cis(-be) * u.sqrt(), cis(-al) * (1.0 - u).sqrt()],
        ];
        let uu = [[eta * v[0][0], eta * v[0][1]], [eta * v[1][0], eta * v[1][1]]];
        mk_k(uu, eta.powi(-2)).unwrap()
    }

    #[test]
    fn mk_n_examples() {
        assert_eq!(mk_n(c(0.0, 0.0), 0.0).matrix(), &Mat3::identity());
        let n1 = mk_n(c(1.0, 0.0), 0.0);
        let row0 = n1.matrix().0[0];
        assert_eq!(row0, [c(0.5, 0.0), c(1.0, 0.0), c(0.5, 0.0)]);
        assert_eq!(n1.matrix().0[1], [c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let b = c(0.3, -1.2);
        let prod = mk_n(b, 0.7) * mk_n(-b, -0.7);
        assert!(prod.matrix().frob_dist(&Mat3::identity()) < 1e-14);
    }

    #[test]
    fn torus_and_compact_examples() {
        assert!(mk_a(1.0).matrix().frob_dist(&Mat3::identity()) < 1e-15);
        let a2 = mk_a(2.0);
        assert_eq!(a2.matrix().0[0][0], c(1.25, 0.0));
        assert_eq!(a2.matrix().0[0][2], c(0.75, 0.0));
        let mi = mk_m(I).unwrap();
        assert!(mi.matrix().frob_dist(&Mat3::diag(I, c(-1.0, 0.0), I)) < 1e-15);
        assert!(mk_m(c(1.1, 0.0)).is_err());
        assert!(mk_k([[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]], c(0.5, 0.0)).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(&Mat3::identity()));
        assert!(!is_member(&Mat3::from_real([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]])));
        let g = mk_n(c(1.0, 1.0), 0.3) * mk_a(1.7) * mk_m(cis(0.2)).unwrap();
        assert!(is_member(g.matrix()));
        assert!(is_member(mk_w().matrix()));
    }

    #[test]
    fn iwasawa_examples() {
        let id = iwasawa(&GroupElement::identity()).unwrap();
        assert!((id.t - 1.0).abs() < 1e-15 && id.n.b.norm() < 1e-15 && id.n.r.abs() < 1e-15);
        let mi = mk_m(I).unwrap();
        let g = mk_n(c(1.0, 0.0), 2.0) * mk_a(3.0) * mi;
        let d = iwasawa(&g).unwrap();
        assert!((d.t - 3.0).abs() < 1e-13);
        assert!((d.n.b - c(1.0, 0.0)).norm() < 1e-13 && (d.n.r - 2.0).abs() < 1e-13);
        assert!(d.k.matrix().frob_dist(mi.matrix()) < 1e-13);
        assert!((iwasawa(&mk_w()).unwrap().t - 1.0).abs() < 1e-15);
    }

    /// Independent oracle for the height of `w`: minimise the distance of
    /// `a(t)⁻¹ n(b,r)⁻¹ w` from the unitary matrices by a coarse scan.
    #[test]
    fn iwasawa_height_of_w_matches_scan() {
        let w = *mk_w().matrix();
        let mut best = (f64::INFINITY, 0.0);
        for i in 1..400 {
            let t = i as f64 * 0.005;
            let k = *mk_a(1.0 / t).matrix() * w;
            let defect = (k.herm_conj() * k).frob_dist(&Mat3::identity());
            if defect < best.0 {
                best = (defect, t);
            }
        }
        assert!(best.0 < 1e-12);
        assert!((best.1 - iwasawa(&mk_w()).unwrap().t).abs() < 1e-12);
    }

    #[test]
    fn bruhat_height_examples() {
        assert_eq!(bruhat_height(1.0, c(0.0, 0.0), 0.0, 1.0), 1.0);
        assert_eq!(bruhat_height(1.0, c(1.0, 0.0), 0.0, 1.0), 0.5);
        assert_eq!(bruhat_height(2.0, c(0.0, 0.0), 0.0, 1.0), 0.5);
        let g = mk_w() * mk_n(c(1.0, 0.0), 0.0) * mk_a(1.0);
        assert!((iwasawa(&g).unwrap().t - 0.5).abs() < 1e-14);
        let g = mk_w() * mk_a(2.0) * mk_a(1.0);
        assert!((iwasawa(&g).unwrap().t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn iwasawa_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let b = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let r = rng.gen_range(-3.0..3.0);
            let t = rng.gen_range(0.05..8.0);
            let k = random_k(&mut rng);
            let g = mk_n(b, r) * mk_a(t) * k;
            let d = iwasawa(&g).unwrap();
            assert!((d.n.b - b).norm() < 1e-9 && (d.n.r - r).abs() < 1e-9 && (d.t - t).abs() < 1e-9);
            assert!(d.k.matrix().frob_dist(k.matrix()) < 1e-9);
            assert!(d.reconstruct().matrix().frob_dist(g.matrix()) < 1e-9);
        }
    }

    #[test]
    fn normalizer_action_on_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(0.2..3.0);
            let lhs = mk_a(y) * mk_n(b, r) * mk_a(y).inverse();
            assert!(lhs.matrix().frob_dist(mk_n(b * y, y * y * r).matrix()) < 1e-12);
            let eta = cis(rng.gen_range(0.0..6.3));
            let m = mk_m(eta).unwrap();
            let lhs = m * mk_n(b, r) * m.inverse();
            assert!(lhs.matrix().frob_dist(mk_n(eta.powi(3) * b, r).matrix()) < 1e-12);
        }
    }

    #[test]
    fn big_cell_height_matches_bruhat_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n0 = mk_n(c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), rng.gen_range(-1.0..1.0));
            let t1 = rng.gen_range(0.3..3.0);
            let m = mk_m(cis(rng.gen_range(0.0..6.3))).unwrap();
            let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(-2.0..2.0);
            let t = rng.gen_range(0.2..4.0);
            let g = n0 * mk_w() * mk_a(t1) * m * mk_n(b, r) * mk_a(t);
            let got = iwasawa(&g).unwrap().t;
            assert!((got - bruhat_height(t1, b, r, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn unitary_members_are_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let g = random_k(&mut rng);
            let m = g.matrix();
            assert!(is_member(m));
            assert!((m.herm_conj() * *m).frob_dist(&Mat3::identity()) < 1e-12);
            let off = m.0[0][2].norm() + m.0[1][2].norm() + m.0[2][0].norm() + m.0[2][1].norm();
            assert!(off < 1e-12);
        }
    }

    #[test]
    fn one_parameter_subgroups_are_homomorphisms_into_g() {
        for x in RealLie::ALL {
            let (s, t) = (0.37, -1.1);
            let lhs = x.exp(s) * x.exp(t);
            assert!(lhs.frob_dist(&x.exp(s + t)) < 1e-13, "{x:?}");
            assert!(is_member(&x.exp(s)), "{x:?}");
        }
    }

    #[test]
    fn ck_exponential_is_central_in_k() {
        let f = |m: &Mat3| -> Result<Complex, ()> { Ok(m.0[2][2]) };
        let g = Mat3::identity();
        let d = right_derivative_complex(&f, &g, &LieVector::ck(), 1e-3).unwrap();
        assert!((d - c(0.0, -2.0)).norm() < 1e-10);
    }
}
