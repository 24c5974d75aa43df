//! Dense reference arithmetic for the logarithm model of the universal
//! formal group law.
//!
//! The model: over `Q[b_1, b_2, ...]` set `lambda(x) = x + b_1 x^2 + b_2 x^3 + ...`
//! and define the law as `F(x, y) = lambda(lambda^{-1}(x) + lambda^{-1}(y))`.
//!
//! Everything here is deliberately plain so it can serve as an independent
//! cross-check of the sparse engine: polynomials in the generators are maps
//! from dense exponent vectors to rationals, univariate series are `Vec`s
//! indexed by the power of `x`, bivariate series are full `(cap+1) x (cap+1)`
//! grids, and reversion recomposes the entire series at every degree step
//! (with a Lagrange-inversion cross-check in the tests). The main engine
//! must only ever reach this crate from its test targets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exact rational number used throughout the oracle.
pub type Rat = BigRational;

/// Builds a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Polynomial in the generators `b_1..b_ngen` with rational coefficients.
///
/// Keys are dense exponent vectors of length `ngen`: position `k-1` holds
/// the exponent of `b_k`. Zero coefficients are never stored, so equality
/// of the term maps is equality of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly {
    pub ngen: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl BPoly {
    pub fn zero(ngen: usize) -> Self {
        BPoly {
            ngen,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ngen: usize, c: Rat) -> Self {
        let mut p = BPoly::zero(ngen);
        if !c.is_zero() {
            p.terms.insert(vec![0; ngen], c);
        }
        p
    }

    pub fn one(ngen: usize) -> Self {
        BPoly::constant(ngen, Rat::one())
    }

    /// The generator `b_k`, 1-based; panics when `k` exceeds `ngen`.
    pub fn gen(ngen: usize, k: usize) -> Self {
        assert!(
            k >= 1 && k <= ngen,
            "generator b_{} out of range 1..={}",
            k,
            ngen
        );
        let mut exps = vec![0; ngen];
        exps[k - 1] = 1;
        let mut p = BPoly::zero(ngen);
        p.terms.insert(exps, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BPoly) -> BPoly {
        assert_eq!(self.ngen, other.ngen, "generator counts must match");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> BPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> BPoly {
        if s.is_zero() {
            return BPoly::zero(self.ngen);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    pub fn mul(&self, other: &BPoly) -> BPoly {
        assert_eq!(self.ngen, other.ngen, "generator counts must match");
        let mut out = BPoly::zero(self.ngen);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Weighted degree of a monomial, counting `b_k` with weight `k`.
    fn term_degree(exps: &[u32]) -> u32 {
        exps.iter()
            .enumerate()
            .map(|(idx, e)| (idx as u32 + 1) * e)
            .sum()
    }

    /// True when every monomial has weighted degree exactly `d`
    /// (vacuously true for the zero polynomial).
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| Self::term_degree(e) == d)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Neutral interchange form: sorted `(generator, exponent)` pairs with
    /// positive exponents, paired with `(numerator, denominator)` strings.
    pub fn terms_sparse(&self) -> Vec<(Vec<(u32, u32)>, (String, String))> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let gens: Vec<(u32, u32)> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(idx, &x)| (idx as u32 + 1, x))
                    .collect();
                (gens, (c.numer().to_string(), c.denom().to_string()))
            })
            .collect()
    }
}

/// Univariate truncated series: `coeffs[k]` is the coefficient of `x^k`.
pub type USeries = Vec<BPoly>;

pub fn u_zero(ngen: usize, cap: usize) -> USeries {
    vec![BPoly::zero(ngen); cap + 1]
}

pub fn u_add(f: &USeries, g: &USeries) -> USeries {
    assert_eq!(f.len(), g.len(), "series caps must match");
    f.iter().zip(g.iter()).map(|(a, b)| a.add(b)).collect()
}

pub fn u_mul(f: &USeries, g: &USeries, cap: usize) -> USeries {
    let ngen = f[0].ngen;
    let mut out = u_zero(ngen, cap);
    for (i, a) in f.iter().enumerate().take(cap + 1) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate().take(cap + 1 - i) {
            if b.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

/// Substitutes `g` (zero constant term) into `f` by summing `f_k g^k`.
pub fn u_compose(f: &USeries, g: &USeries, cap: usize) -> USeries {
    assert!(g[0].is_zero(), "inner series must have zero constant term");
    let ngen = f[0].ngen;
    let mut out = u_zero(ngen, cap);
    out[0] = f[0].clone();
    let mut gpow = u_zero(ngen, cap);
    gpow[0] = BPoly::one(ngen);
    for fk in f.iter().take(cap + 1).skip(1) {
        gpow = u_mul(&gpow, g, cap);
        if fk.is_zero() {
            continue;
        }
        for (d, gp) in gpow.iter().enumerate() {
            out[d] = out[d].add(&fk.mul(gp));
        }
    }
    out
}

/// Compositional reverse of `f = c x + ...` (`c` a nonzero rational constant):
/// finds `g` with `f(g(x)) = x` up to the cap by adjusting one coefficient at
/// a time and recomposing the entire series after each adjustment.
pub fn u_reverse(f: &USeries, cap: usize) -> USeries {
    assert!(f[0].is_zero(), "reversion needs zero constant term");
    let ngen = f[0].ngen;
    let lin = &f[1];
    let zero_exps = vec![0u32; ngen];
    assert!(
        lin.terms.len() == 1 && lin.terms.contains_key(&zero_exps),
        "oracle reversion expects a constant linear coefficient"
    );
    let c1 = lin.terms[&zero_exps].clone();
    assert!(!c1.is_zero(), "linear coefficient must be invertible");
    let inv_c1 = Rat::one() / c1;

    let mut g = u_zero(ngen, cap);
    if cap >= 1 {
        g[1] = BPoly::constant(ngen, inv_c1.clone());
    }
    for k in 2..=cap {
        let h = u_compose(f, &g, cap);
        let err = h[k].clone();
        g[k] = err.neg().scale(&inv_c1);
    }
    if cap >= 1 {
        let check = u_compose(f, &g, cap);
        for (d, coeff) in check.iter().enumerate() {
            let want = if d == 1 {
                BPoly::one(ngen)
            } else {
                BPoly::zero(ngen)
            };
            assert_eq!(*coeff, want, "reversion failed to invert at degree {}", d);
        }
    }
    g
}

/// Multiplicative inverse of a series with invertible constant term,
/// by the textbook recursion `v_k = -(sum_{i=1..k} u_i v_{k-i}) / u_0`.
pub fn u_invert(f: &USeries, cap: usize) -> USeries {
    let ngen = f[0].ngen;
    let zero_exps = vec![0u32; ngen];
    assert!(
        f[0].terms.len() == 1 && f[0].terms.contains_key(&zero_exps),
        "oracle inversion expects a constant unit term"
    );
    let c0 = f[0].terms[&zero_exps].clone();
    let inv_c0 = Rat::one() / c0;
    let mut v = u_zero(ngen, cap);
    v[0] = BPoly::constant(ngen, inv_c0.clone());
    for k in 1..=cap {
        let mut acc = BPoly::zero(ngen);
        for i in 1..=k {
            if i < f.len() {
                acc = acc.add(&f[i].mul(&v[k - i]));
            }
        }
        v[k] = acc.neg().scale(&inv_c0);
    }
    v
}

/// Reverse of `f` computed by Lagrange inversion:
/// `[x^n] g = (1/n) [x^{n-1}] (x / f(x))^n`. Used to cross-check `u_reverse`.
pub fn u_reverse_lagrange(f: &USeries, cap: usize) -> USeries {
    assert!(f[0].is_zero(), "reversion needs zero constant term");
    let ngen = f[0].ngen;
    // u = f / x, so x / f = 1 / u.
    let mut u = u_zero(ngen, cap);
    for k in 0..cap {
        if k + 1 < f.len() {
            u[k] = f[k + 1].clone();
        }
    }
    let uinv = u_invert(&u, cap);
    let mut g = u_zero(ngen, cap);
    for n in 1..=cap {
        let power = u_pow(&uinv, n, cap);
        g[n] = power[n - 1].scale(&rat(1, n as i64));
    }
    g
}

pub fn u_pow(f: &USeries, n: usize, cap: usize) -> USeries {
    let ngen = f[0].ngen;
    let mut out = u_zero(ngen, cap);
    out[0] = BPoly::one(ngen);
    for _ in 0..n {
        out = u_mul(&out, f, cap);
    }
    out
}

/// Bivariate truncated series: `grid[i][j]` is the coefficient of `x^i y^j`,
/// meaningful only for `i + j <= cap`.
pub type BSeries = Vec<Vec<BPoly>>;

pub fn b_zero(ngen: usize, cap: usize) -> BSeries {
    vec![vec![BPoly::zero(ngen); cap + 1]; cap + 1]
}

pub fn b_add(f: &BSeries, g: &BSeries) -> BSeries {
    f.iter()
        .zip(g.iter())
        .map(|(ra, rb)| ra.iter().zip(rb.iter()).map(|(a, b)| a.add(b)).collect())
        .collect()
}

pub fn b_mul(f: &BSeries, g: &BSeries, cap: usize) -> BSeries {
    let ngen = f[0][0].ngen;
    let mut out = b_zero(ngen, cap);
    for i1 in 0..=cap {
        for j1 in 0..=cap - i1 {
            if f[i1][j1].is_zero() {
                continue;
            }
            for i2 in 0..=cap - i1 - j1 {
                for j2 in 0..=cap - i1 - j1 - i2 {
                    if g[i2][j2].is_zero() {
                        continue;
                    }
                    let prod = f[i1][j1].mul(&g[i2][j2]);
                    out[i1 + i2][j1 + j2] = out[i1 + i2][j1 + j2].add(&prod);
                }
            }
        }
    }
    out
}

/// Embeds a univariate series as a bivariate one in the first variable.
pub fn u_into_x(f: &USeries, cap: usize) -> BSeries {
    let ngen = f[0].ngen;
    let mut out = b_zero(ngen, cap);
    for (k, c) in f.iter().enumerate().take(cap + 1) {
        out[k][0] = c.clone();
    }
    out
}

/// Embeds a univariate series as a bivariate one in the second variable.
pub fn u_into_y(f: &USeries, cap: usize) -> BSeries {
    let ngen = f[0].ngen;
    let mut out = b_zero(ngen, cap);
    for (k, c) in f.iter().enumerate().take(cap + 1) {
        out[0][k] = c.clone();
    }
    out
}

/// Substitutes a bivariate series with zero constant term into a univariate one.
pub fn b_compose_u(f: &USeries, s: &BSeries, cap: usize) -> BSeries {
    assert!(
        s[0][0].is_zero(),
        "inner series must have zero constant term"
    );
    let ngen = f[0].ngen;
    let mut out = b_zero(ngen, cap);
    out[0][0] = f[0].clone();
    let mut spow = b_zero(ngen, cap);
    spow[0][0] = BPoly::one(ngen);
    for fk in f.iter().take(cap + 1).skip(1) {
        spow = b_mul(&spow, s, cap);
        if fk.is_zero() {
            continue;
        }
        for i in 0..=cap {
            for j in 0..=cap - i {
                if !spow[i][j].is_zero() {
                    out[i][j] = out[i][j].add(&fk.mul(&spow[i][j]));
                }
            }
        }
    }
    out
}

/// The logarithm-model twist series `x + b_1 x^2 + ... + b_{cap-1} x^cap`
/// over `ngen` generators (generators beyond `ngen` are simply absent).
pub fn lambda(ngen: usize, cap: usize) -> USeries {
    let mut f = u_zero(ngen, cap);
    if cap >= 1 {
        f[1] = BPoly::one(ngen);
    }
    for k in 1..cap.min(ngen + 1) {
        if k + 1 <= cap && k <= ngen {
            f[k + 1] = BPoly::gen(ngen, k);
        }
    }
    f
}

/// Coefficients of `lambda^{-1}` up to the cap, with `ngen = cap - 1`
/// generators (enough for every coefficient that can appear).
pub fn lambda_inv(cap: usize) -> USeries {
    let ngen = cap.saturating_sub(1);
    u_reverse(&lambda(ngen, cap), cap)
}

/// The universal law `F(x, y) = lambda(lambda^{-1}(x) + lambda^{-1}(y))`
/// as a dense bivariate grid truncated at total degree `cap`.
pub fn universal_fgl(cap: usize) -> BSeries {
    let ngen = cap.saturating_sub(1);
    let lam = lambda(ngen, cap);
    let laminv = u_reverse(&lam, cap);
    let inner = b_add(&u_into_x(&laminv, cap), &u_into_y(&laminv, cap));
    b_compose_u(&lam, &inner, cap)
}

/// The coefficient of `x^i y^j` in the universal law at truncation `cap`.
pub fn universal_coeff(cap: usize, i: usize, j: usize) -> BPoly {
    assert!(i + j <= cap, "coefficient outside the truncation grid");
    universal_fgl(cap)[i][j].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const_series(vals: &[(i64, i64)]) -> USeries {
        vals.iter()
            .map(|&(n, d)| BPoly::constant(0, rat(n, d)))
            .collect()
    }

    #[test]
    fn reverse_of_x_plus_x_squared_matches_known_expansion() {
        // f = x + x^2, cap 4.
        let f = const_series(&[(0, 1), (1, 1), (1, 1), (0, 1), (0, 1)]);
        let g = u_reverse(&f, 4);
        let want = const_series(&[(0, 1), (1, 1), (-1, 1), (2, 1), (-5, 1)]);
        assert_eq!(g, want, "reverse(x + x^2) should be x - x^2 + 2x^3 - 5x^4");
    }

    #[test]
    fn reverse_of_one_minus_exp_minus_is_shifted_harmonic() {
        // f = x - x^2/2 + x^3/6 - x^4/24, cap 4.
        let f = const_series(&[(0, 1), (1, 1), (-1, 2), (1, 6), (-1, 24)]);
        let g = u_reverse(&f, 4);
        let want = const_series(&[(0, 1), (1, 1), (1, 2), (1, 3), (1, 4)]);
        assert_eq!(g, want, "the reverse should have coefficients 1/(k) at x^k");
    }

    #[test]
    fn brute_force_reversion_agrees_with_lagrange_inversion() {
        for cap in 1..=7 {
            let ngen = cap - 1;
            let lam = lambda(ngen, cap);
            let by_steps = u_reverse(&lam, cap);
            let by_lagrange = u_reverse_lagrange(&lam, cap);
            assert_eq!(
                by_steps, by_lagrange,
                "the two reversion algorithms disagree at cap {}",
                cap
            );
        }
    }

    #[test]
    fn inverse_twist_series_starts_with_minus_b1() {
        let g = lambda_inv(4);
        let ngen = 3;
        assert_eq!(
            g[1],
            BPoly::one(ngen),
            "linear coefficient of the reverse is 1"
        );
        assert_eq!(
            g[2],
            BPoly::gen(ngen, 1).neg(),
            "x^2 coefficient of the reverse twist should be -b_1"
        );
    }

    #[test]
    fn universal_law_has_a11_equal_two_b1() {
        let a11 = universal_coeff(2, 1, 1);
        let want = BPoly::gen(1, 1).scale(&rat(2, 1));
        assert_eq!(
            a11, want,
            "the xy coefficient of the universal law should be 2 b_1"
        );
    }

    #[test]
    fn universal_law_agrees_with_known_degree_three_coefficients() {
        // F = x + y + 2 b_1 xy + (3 b_2 - 2 b_1^2)(x^2 y + x y^2) + ...
        let f = universal_fgl(3);
        let ngen = 2;
        let mut want = BPoly::gen(ngen, 2).scale(&rat(3, 1));
        let mut b1sq = vec![0u32; ngen];
        b1sq[0] = 2;
        let mut sq = BPoly::zero(ngen);
        sq.terms.insert(b1sq, rat(-2, 1));
        want = want.add(&sq);
        assert_eq!(
            f[2][1], want,
            "the x^2 y coefficient should be 3 b_2 - 2 b_1^2"
        );
        assert_eq!(
            f[1][2], want,
            "the x y^2 coefficient should match by symmetry"
        );
    }

    #[test]
    fn universal_coefficients_are_symmetric_homogeneous_and_integral() {
        let cap = 6;
        let f = universal_fgl(cap);
        for i in 1..=cap {
            for j in 1..=cap - i {
                let a = &f[i][j];
                assert_eq!(
                    *a, f[j][i],
                    "coefficient a_{}{} should equal a_{}{}",
                    i, j, j, i
                );
                assert!(
                    a.is_homogeneous((i + j - 1) as u32),
                    "a_{}{} should be homogeneous of degree {}",
                    i,
                    j,
                    i + j - 1
                );
                assert!(
                    a.is_integral(),
                    "a_{}{} should have integer coefficients, got {:?}",
                    i,
                    j,
                    a
                );
            }
        }
        // Unit and linear parts: F(x, 0) = x exactly.
        for i in 0..=cap {
            let want = if i == 1 {
                BPoly::one(cap - 1)
            } else {
                BPoly::zero(cap - 1)
            };
            assert_eq!(
                f[i][0], want,
                "F(x, 0) should be x; bad coefficient at x^{}",
                i
            );
        }
    }
}
