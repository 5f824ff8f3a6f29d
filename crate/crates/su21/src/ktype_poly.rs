//! Polynomial functions `Φ^h_{p,r,q}` on `K`, Haar integration on `K`, and the
//! action of `Lie(K)` by right differentiation.
//!
//! `Φ^h_{p,r,q}(k)` is the coefficient of `x^{(p−r)/2}` in
//! `δ^{(h+p)/2} (ax+c)^{(p−q)/2} (bx+d)^{(p+q)/2}` for
//! `k = [[a,b,0],[c,d,0],[0,0,δ]]`.
//!
//! Closed-form actions checked against finite differences:
//!
//! | element        | action on `Φ^h_{p,r,q}`          |
//! |----------------|----------------------------------|
//! | `CK_i`         | `−ih Φ^h_{p,r,q}`                |
//! | `W0`           | `−iq Φ^h_{p,r,q}`                |
//! | `Z21 = W1+iW2` | `(q−p) Φ^h_{p,r,q+2}`            |
//! | `Z12 = W1−iW2` | `(q+p) Φ^h_{p,r,q−2}`            |

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group_core::{right_derivative_complex, LieVector, RealLie};
use crate::numeric_core::{cis, gauss_legendre, Complex, CompensatedSum, Mat3, I};

/// Tolerance for recognising a matrix as an element of `K`.
pub const K_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KTypeError {
    #[error("invalid K-type index (h={h}, p={p}, r={r}, q={q}): {reason}")]
    BadIndex {
        h: i64,
        p: i64,
        r: i64,
        q: i64,
        reason: &'static str,
    },
    #[error("matrix is not in K (defect {defect:.3e})")]
    NotInK { defect: f64 },
}

/// Index `(h, p, r, q)` of `Φ^h_{p,r,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KIndex {
    pub h: i64,
    pub p: i64,
    pub r: i64,
    pub q: i64,
}

impl KIndex {
    pub fn new(h: i64, p: i64, r: i64, q: i64) -> Result<Self, KTypeError> {
        let bad = |reason| KTypeError::BadIndex { h, p, r, q, reason };
        if p < 0 {
            return Err(bad("p must be non-negative"));
        }
        if (h - p).rem_euclid(2) != 0 || (r - p).rem_euclid(2) != 0 || (q - p).rem_euclid(2) != 0 {
            return Err(bad("h, p, r, q must have equal parity"));
        }
        if r.abs() > p || q.abs() > p {
            return Err(bad("|r| and |q| must not exceed p"));
        }
        Ok(KIndex { h, p, r, q })
    }

    /// The same K-type with a different `q`, or `None` if `|q| > p`.
    pub fn with_q(self, q: i64) -> Option<Self> {
        KIndex::new(self.h, self.p, self.r, q).ok()
    }

    pub fn with_r(self, r: i64) -> Option<Self> {
        KIndex::new(self.h, self.p, r, self.q).ok()
    }
}

/// An element `k = [[a,b,0],[c,d,0],[0,0,δ]]` of `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPoint {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub delta: Complex,
}

impl KPoint {
    pub fn identity() -> Self {
        let (z, o) = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        KPoint {
            a: o,
            b: z,
            c: z,
            d: o,
            delta: o,
        }
    }

    /// Reads the block entries of `m`, checking block structure, unitarity
    /// and `δ·det u = 1`.
    pub fn from_matrix(m: &Mat3) -> Result<Self, KTypeError> {
        let k = Self::from_matrix_unchecked(m);
        let mut defect = 0.0f64;
        for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
            defect = defect.max(m.get(i, j).norm());
        }
        defect = defect.max((m.herm_conj() * *m - Mat3::identity()).frob_norm());
        defect = defect.max((k.delta * (k.a * k.d - k.b * k.c) - 1.0).norm());
        if defect > K_TOL {
            return Err(KTypeError::NotInK { defect });
        }
        Ok(k)
    }

    /// Reads the block entries of `m` without validation.
    pub fn from_matrix_unchecked(m: &Mat3) -> Self {
        KPoint {
            a: m.get(0, 0),
            b: m.get(0, 1),
            c: m.get(1, 0),
            d: m.get(1, 1),
            delta: m.get(2, 2),
        }
    }

    pub fn to_matrix(&self) -> Mat3 {
        let z = Complex::new(0.0, 0.0);
        Mat3([[self.a, self.b, z], [self.c, self.d, z], [z, z, self.delta]])
    }

    /// `k = diag(η v, η⁻²)` with `v ∈ SU(2)` in Hopf coordinates
    /// `v = [[e^{iα}√(1−u), e^{iβ}√u], [−e^{−iβ}√u, e^{−iα}√(1−u)]]`.
    pub fn from_hopf(u: f64, alpha: f64, beta: f64, eta: Complex) -> Self {
        let (su, cu) = (u.sqrt(), (1.0 - u).sqrt());
        KPoint {
            a: eta * cis(alpha) * cu,
            b: eta * cis(beta) * su,
            c: -eta * cis(-beta) * su,
            d: eta * cis(-alpha) * cu,
            delta: eta.powi(-2),
        }
    }
}

fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0f64; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

/// `Φ^h_{p,r,q}(k)` by expanding the two binomials and convolving.
pub fn kpoly_eval(idx: KIndex, k: &KPoint) -> Complex {
    let n1 = ((idx.p - idx.q) / 2) as usize;
    let n2 = ((idx.p + idx.q) / 2) as usize;
    let target = ((idx.p - idx.r) / 2) as usize;
    let (b1, b2) = (binomials(n1), binomials(n2));
    let mut acc = CompensatedSum::new();
    for i in 0..=n1.min(target) {
        let j = target - i;
        if j > n2 {
            continue;
        }
        let t1 = k.a.powu(i as u32) * k.c.powu((n1 - i) as u32) * b1[i];
        let t2 = k.b.powu(j as u32) * k.d.powu((n2 - j) as u32) * b2[j];
        acc.add(t1 * t2);
    }
    k.delta.powi(((idx.h + idx.p) / 2) as i32) * acc.value()
}

/// Product quadrature rule on `K` for the normalized Haar measure: Gauss–Legendre
/// in `u ∈ [0,1]` and the trapezoid rule in the periodic angles `α, β, arg η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KQuadrature {
    pub gl_nodes: usize,
    pub circle_nodes: usize,
}

impl Default for KQuadrature {
    fn default() -> Self {
        KQuadrature {
            gl_nodes: 24,
            circle_nodes: 48,
        }
    }
}

impl KQuadrature {
    /// A rule exact for all products `Φ·conj Φ′` with `p, p′ ≤ 3`.
    pub fn small() -> Self {
        KQuadrature {
            gl_nodes: 8,
            circle_nodes: 16,
        }
    }

    /// All nodes with their weights; weights sum to 1.
    pub fn nodes(&self) -> Vec<(KPoint, f64)> {
        let (x, w) = gauss_legendre(self.gl_nodes);
        let m = self.circle_nodes;
        let wc = 1.0 / (m * m * m) as f64;
        let mut out = Vec::with_capacity(self.gl_nodes * m * m * m);
        for (xu, wu) in x.iter().zip(&w) {
            let u = 0.5 * (xu + 1.0);
            for ia in 0..m {
                let alpha = TAU * ia as f64 / m as f64;
                for ib in 0..m {
                    let beta = TAU * ib as f64 / m as f64;
                    for ie in 0..m {
                        let eta = cis(TAU * ie as f64 / m as f64);
                        out.push((KPoint::from_hopf(u, alpha, beta, eta), 0.5 * wu * wc));
                    }
                }
            }
        }
        out
    }
}

/// `∫_K f(k) dk` with `∫_K dk = 1`.
pub fn k_integrate(f: &dyn Fn(&KPoint) -> Complex, rule: KQuadrature) -> Complex {
    rule.nodes().iter().map(|(k, w)| f(k) * *w).collect::<CompensatedSum>().value()
}

/// `‖Φ^h_{p,r,q}‖²_K`, computed once per index by quadrature and cached.
pub fn kpoly_norm_sqr(idx: KIndex) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<KIndex, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("norm cache poisoned").get(&idx) {
        return *v;
    }
    let n = (idx.p as usize + 2).max(4);
    let rule = KQuadrature {
        gl_nodes: n,
        circle_nodes: 2 * idx.p as usize + 2,
    };
    let v = k_integrate(&|k| Complex::new(kpoly_eval(idx, k).norm_sqr(), 0.0), rule).re;
    cache.lock().expect("norm cache poisoned").insert(idx, v);
    v
}

/// Elements of `Lie(K)` acting on the `Φ` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KLie {
    CK,
    W0,
    W1,
    W2,
    Z12,
    Z21,
}

impl KLie {
    pub fn lie_vector(self) -> LieVector {
        match self {
            KLie::CK => LieVector::ck(),
            KLie::W0 => LieVector::basis(RealLie::W0),
            KLie::W1 => LieVector::basis(RealLie::W1),
            KLie::W2 => LieVector::basis(RealLie::W2),
            KLie::Z12 => LieVector::z12(),
            KLie::Z21 => LieVector::z21(),
        }
    }
}

/// Step used for finite-difference Lie derivatives on `K`.
pub const K_DERIV_STEP: f64 = 1e-3;

/// `(d/ds) Φ(k e^{sX})|₀` by Richardson-extrapolated central differences.
pub fn weight_action(x: KLie, idx: KIndex, k: &KPoint) -> Complex {
    let f = |m: &Mat3| -> Result<Complex, std::convert::Infallible> {
        Ok(kpoly_eval(idx, &KPoint::from_matrix_unchecked(m)))
    };
    match right_derivative_complex(&f, &k.to_matrix(), &x.lie_vector(), K_DERIV_STEP) {
        Ok(v) => v,
        Err(e) => match e {},
    }
}

/// Closed form of `X Φ^h_{p,r,q}` as a combination `Σ coeff·Φ^h_{p,r,q′}`.
pub fn weight_action_terms(x: KLie, idx: KIndex) -> Vec<(Complex, KIndex)> {
    let (p, q) = (idx.p as f64, idx.q as f64);
    let up = idx.with_q(idx.q + 2);
    let down = idx.with_q(idx.q - 2);
    let mut out = Vec::new();
    let mut push = |c: Complex, i: Option<KIndex>| {
        if let Some(i) = i {
            if c.norm() > 0.0 {
                out.push((c, i));
            }
        }
    };
    match x {
        KLie::CK => push(-I * idx.h as f64, Some(idx)),
        KLie::W0 => push(-I * q, Some(idx)),
        KLie::Z21 => push(Complex::new(q - p, 0.0), up),
        KLie::Z12 => push(Complex::new(q + p, 0.0), down),
        KLie::W1 => {
            push(Complex::new(-(p - q) / 2.0, 0.0), up);
            push(Complex::new((p + q) / 2.0, 0.0), down);
        }
        KLie::W2 => {
            push(I * ((p - q) / 2.0), up);
            push(I * ((p + q) / 2.0), down);
        }
    }
    out
}

/// Evaluates the closed-form action at `k`.
pub fn weight_action_closed(x: KLie, idx: KIndex, k: &KPoint) -> Complex {
    weight_action_terms(x, idx)
        .into_iter()
        .map(|(c, i)| c * kpoly_eval(i, k))
        .sum()
}

/// All valid indices `(h, p, r, q)` with `p ≤ max_p` and `|h| ≤ max_h`.
pub fn index_grid(max_p: i64, max_h: i64) -> Vec<KIndex> {
    let mut out = Vec::new();
    for p in 0..=max_p {
        for h in -max_h..=max_h {
            for r in (-p..=p).step_by(2) {
                for q in (-p..=p).step_by(2) {
                    if let Ok(i) = KIndex::new(h, p, r, q) {
                        out.push(i);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_k(rng: &mut ChaCha8Rng) -> KPoint {
        KPoint::from_hopf(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            cis(rng.gen_range(0.0..TAU)),
        )
    }

    fn idx(h: i64, p: i64, r: i64, q: i64) -> KIndex {
        KIndex::new(h, p, r, q).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(KIndex::new(0, 1, 0, 1).is_err());
        assert!(KIndex::new(1, 1, 3, 1).is_err());
        assert!(KIndex::new(0, -2, 0, 0).is_err());
        assert!(KIndex::new(3, 1, -1, 1).is_ok());
    }

    #[test]
    fn hopf_points_lie_in_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let k = random_k(&mut rng);
            assert!(KPoint::from_matrix(&k.to_matrix()).is_ok());
        }
    }

    #[test]
    fn kpoly_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let k = random_k(&mut rng);
            assert!((kpoly_eval(idx(0, 0, 0, 0), &k) - 1.0).norm() < 1e-15);
            assert!((kpoly_eval(idx(2, 0, 0, 0), &k) - k.delta).norm() < 1e-15);
            let i = idx(1, 3, 3, -1);
            let want = k.delta.powi(2) * k.c.powi(2) * k.d;
            assert!((kpoly_eval(i, &k) - want).norm() < 1e-14);
            // Φ^0_{2,0,0}: coefficient of x in (ax+c)(bx+d) is ad + bc.
            let want = k.delta * (k.a * k.d + k.b * k.c);
            assert!((kpoly_eval(idx(0, 2, 0, 0), &k) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn haar_mass_and_orthogonality_example() {
        let one = k_integrate(&|_| Complex::new(1.0, 0.0), KQuadrature::default());
        assert!((one - 1.0).norm() < 1e-13);
        let (i1, i2) = (idx(2, 2, 0, 0), idx(2, 2, 0, 2));
        let v = k_integrate(&|k| kpoly_eval(i1, k) * kpoly_eval(i2, k).conj(), KQuadrature::small());
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn orthogonality_over_small_grid() {
        let grid = index_grid(3, 3);
        let nodes = KQuadrature::small().nodes();
        let vals: Vec<Vec<Complex>> = grid
            .iter()
            .map(|i| nodes.iter().map(|(k, _)| kpoly_eval(*i, k)).collect())
            .collect();
        for (a, va) in grid.iter().zip(&vals) {
            for (b, vb) in grid.iter().zip(&vals) {
                let ip: Complex = va
                    .iter()
                    .zip(vb)
                    .zip(&nodes)
                    .map(|((x, y), (_, w))| x * y.conj() * *w)
                    .collect::<CompensatedSum>()
                    .value();
                if a == b {
                    assert!(ip.re > 1e-3 && ip.im.abs() < 1e-12);
                } else {
                    assert!(ip.norm() < 1e-7, "{a:?} {b:?} {ip}");
                }
            }
        }
    }

    #[test]
    fn norm_ratio_matches_binomial() {
        for i in index_grid(4, 4) {
            let top = kpoly_norm_sqr(i.with_r(i.p).unwrap());
            let ratio = kpoly_norm_sqr(i) / top;
            let binom = binomials(i.p as usize)[((i.p + i.r) / 2) as usize];
            assert!((ratio - binom).abs() < 1e-6 * binom, "{i:?}: {ratio} vs {binom}");
        }
    }

    #[test]
    fn cached_norm_agrees_with_default_rule() {
        let i = idx(1, 3, 1, -1);
        let direct = k_integrate(&|k| Complex::new(kpoly_eval(i, k).norm_sqr(), 0.0), KQuadrature::default());
        assert!((direct.re - kpoly_norm_sqr(i)).abs() < 1e-12);
    }

    #[test]
    fn weight_action_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tags = [KLie::CK, KLie::W0, KLie::W1, KLie::W2, KLie::Z12, KLie::Z21];
        for i in index_grid(3, 3) {
            let k = random_k(&mut rng);
            for x in tags {
                let num = weight_action(x, i, &k);
                let closed = weight_action_closed(x, i, &k);
                assert!((num - closed).norm() < 1e-7, "{x:?} {i:?}: {num} vs {closed}");
            }
        }
    }

    #[test]
    fn weight_action_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k = random_k(&mut rng);
        let i = idx(2, 0, 0, 0);
        let v = weight_action(KLie::CK, i, &k);
        assert!((v - Complex::new(0.0, -2.0) * kpoly_eval(i, &k)).norm() < 1e-8);
        let i = idx(0, 2, 0, 2);
        let v = weight_action(KLie::W0, i, &k);
        assert!((v - Complex::new(0.0, -2.0) * kpoly_eval(i, &k)).norm() < 1e-8);
        assert!(weight_action(KLie::Z21, i, &k).norm() < 1e-8);
    }

    #[test]
    fn central_element_acts_by_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ck = |t: f64| Mat3::diag(cis(t), cis(t), cis(-2.0 * t));
        for i in index_grid(3, 3) {
            let k = random_k(&mut rng);
            let t = rng.gen_range(-3.0..3.0);
            let moved = KPoint::from_matrix_unchecked(&(k.to_matrix() * ck(t)));
            let want = cis(-(i.h as f64) * t) * kpoly_eval(i, &k);
            assert!((kpoly_eval(i, &moved) - want).norm() < 1e-12);
        }
    }
}
