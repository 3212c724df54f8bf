//! Analytic polynomials in one and two complex variables, their coefficient
//! shift operators, and sup-norms over the torus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::{self, Term};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Default oversampling factor for torus sup-norm grids.
pub const DEFAULT_OVERSAMPLE: usize = 8;

/// Which variable a shift acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Var {
    Z1,
    Z2,
}

/// `f(z1, z2) = sum a[k][m] z1^k z2^m` with a dense `(deg1 + 1) x (deg2 + 1)`
/// row-major coefficient rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPolynomial {
    coeffs: Vec<C64>,
    deg1: usize,
    deg2: usize,
}

impl BiPolynomial {
    pub fn new(deg1: usize, deg2: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != (deg1 + 1) * (deg2 + 1) {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for degrees ({deg1}, {deg2})",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { coeffs, deg1, deg2 })
    }

    /// Builds the rectangle by calling `a(k, m)` for every index.
    pub fn from_fn(deg1: usize, deg2: usize, mut a: impl FnMut(usize, usize) -> C64) -> Self {
        let mut coeffs = Vec::with_capacity((deg1 + 1) * (deg2 + 1));
        for k in 0..=deg1 {
            for m in 0..=deg2 {
                coeffs.push(a(k, m));
            }
        }
        Self { coeffs, deg1, deg2 }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![c], deg1: 0, deg2: 0 }
    }

    /// `c * z1^k * z2^m`
    pub fn monomial(k: usize, m: usize, c: C64) -> Self {
        Self::from_fn(k, m, |a, b| if a == k && b == m { c } else { ZERO })
    }

    pub fn deg1(&self) -> usize {
        self.deg1
    }

    pub fn deg2(&self) -> usize {
        self.deg2
    }

    /// Coefficient of `z1^k z2^m`; zero outside the stored rectangle.
    pub fn coeff(&self, k: usize, m: usize) -> C64 {
        if k <= self.deg1 && m <= self.deg2 {
            self.coeffs[k * (self.deg2 + 1) + m]
        } else {
            ZERO
        }
    }

    /// Row-major coefficient storage.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == ZERO)
    }

    /// Normal form with a nonzero last row and last column (or the `(0, 0)`
    /// zero polynomial).
    pub fn trim(&self) -> Self {
        let mut d1 = 0;
        let mut d2 = 0;
        for k in 0..=self.deg1 {
            for m in 0..=self.deg2 {
                if self.coeff(k, m) != ZERO {
                    d1 = d1.max(k);
                    d2 = d2.max(m);
                }
            }
        }
        Self::from_fn(d1, d2, |k, m| self.coeff(k, m))
    }

    /// Larger of the two partial degrees of the trimmed polynomial.
    pub fn max_degree(&self) -> usize {
        let t = self.trim();
        t.deg1.max(t.deg2)
    }

    /// Two-level Horner evaluation.
    pub fn evaluate(&self, z1: C64, z2: C64) -> C64 {
        let mut acc = ZERO;
        for k in (0..=self.deg1).rev() {
            let row = &self.coeffs[k * (self.deg2 + 1)..(k + 1) * (self.deg2 + 1)];
            let inner = row.iter().rev().fold(ZERO, |s, &c| s * z2 + c);
            acc = acc * z1 + inner;
        }
        acc
    }

    /// `(S1* f)(z) = sum a[k+1][m] z1^k z2^m`.
    pub fn shift1(&self) -> Self {
        self.shift_power(Var::Z1, 1)
    }

    /// `(S2* f)(z) = sum a[k][m+1] z1^k z2^m`.
    pub fn shift2(&self) -> Self {
        self.shift_power(Var::Z2, 1)
    }

    /// `j`-fold shift in `var`. `j = 0` is the identity.
    pub fn shift_power(&self, var: Var, j: usize) -> Self {
        match var {
            Var::Z1 if j > self.deg1 => Self::zero(),
            Var::Z2 if j > self.deg2 => Self::zero(),
            Var::Z1 => Self::from_fn(self.deg1 - j, self.deg2, |k, m| self.coeff(k + j, m)),
            Var::Z2 => Self::from_fn(self.deg1, self.deg2 - j, |k, m| self.coeff(k, m + j)),
        }
    }

    /// The `z1`-free part `sum a[0][m] z2^m`.
    pub fn column_zero(&self) -> Self {
        Self::from_fn(0, self.deg2, |_, m| self.coeff(0, m))
    }

    /// Multiplication by `z1^a z2^b`.
    pub fn mul_monomial(&self, a: usize, b: usize) -> Self {
        Self::from_fn(self.deg1 + a, self.deg2 + b, |k, m| {
            if k >= a && m >= b {
                self.coeff(k - a, m - b)
            } else {
                ZERO
            }
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let d1 = self.deg1.max(other.deg1);
        let d2 = self.deg2.max(other.deg2);
        Self::from_fn(d1, d2, |k, m| self.coeff(k, m) + other.coeff(k, m))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            deg1: self.deg1,
            deg2: self.deg2,
        }
    }

    /// Polynomial product (Cauchy convolution of the coefficient arrays).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; (self.deg1 + other.deg1 + 1) * (self.deg2 + other.deg2 + 1)];
        let w = self.deg2 + other.deg2 + 1;
        for k in 0..=self.deg1 {
            for m in 0..=self.deg2 {
                let a = self.coeff(k, m);
                if a == ZERO {
                    continue;
                }
                for p in 0..=other.deg1 {
                    for q in 0..=other.deg2 {
                        out[(k + p) * w + m + q] += a * other.coeff(p, q);
                    }
                }
            }
        }
        Self { coeffs: out, deg1: self.deg1 + other.deg1, deg2: self.deg2 + other.deg2 }
    }

    /// `sum |a[k][m]|`, an upper bound for the sup-norm on the closed bidisk.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Nonzero Fourier terms of the boundary function on the torus.
    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for k in 0..=self.deg1 {
            for m in 0..=self.deg2 {
                let c = self.coeff(k, m);
                if c != ZERO {
                    out.push(((k as i64, m as i64), c));
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> BiPolynomialFile {
        BiPolynomialFile {
            deg1: self.deg1,
            deg2: self.deg2,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_file(file: &BiPolynomialFile) -> Result<Self> {
        Self::new(
            file.deg1,
            file.deg2,
            file.coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// On-disk coefficient file: `{"deg1", "deg2", "coeffs": [[re, im], ...]}`,
/// row-major over `(k, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiPolynomialFile {
    pub deg1: usize,
    pub deg2: usize,
    pub coeffs: Vec<[f64; 2]>,
}

/// Grid lower bound and coefficient upper bound for `max |f|` over the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub grid_max: f64,
    pub l1_upper: f64,
}

/// Anything with a finite Fourier expansion on the torus.
pub trait TorusFunction {
    fn fourier_terms(&self) -> Vec<Term>;
}

impl TorusFunction for BiPolynomial {
    fn fourier_terms(&self) -> Vec<Term> {
        self.terms()
    }
}

/// `grid_max <= sup_{T^2} |f| <= l1_upper`. By the maximum principle the
/// torus supremum of an analytic polynomial is its supremum over the bidisk.
pub fn sup_norm_torus<F: TorusFunction + ?Sized>(f: &F, oversample: usize) -> SupNorm {
    let terms = f.fourier_terms();
    let l1_upper = terms.iter().map(|t| t.1.norm()).sum();
    if terms.is_empty() {
        return SupNorm { grid_max: 0.0, l1_upper: 0.0 };
    }
    let grid_max = torus::sup_abs(&terms, oversample.max(4)).min(l1_upper);
    SupNorm { grid_max, l1_upper }
}

/// One-variable analytic polynomial `sum c[j] z^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPolynomial {
    coeffs: Vec<C64>,
}

impl UniPolynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![ZERO] };
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != ZERO).unwrap_or(0)
    }

    pub fn evaluate(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |s, &c| s * z + c)
    }

    /// `(S*)^j f = sum_{k >= j} c[k] z^{k - j}`.
    pub fn shift_power(&self, j: usize) -> Self {
        if j >= self.coeffs.len() {
            return Self::new(vec![ZERO]);
        }
        Self::new(self.coeffs[j..].to_vec())
    }

    /// Taylor partial sum `sum_{k <= j} c[k] z^k`.
    pub fn partial_sum(&self, j: usize) -> Self {
        Self::new(self.coeffs[..(j + 1).min(self.coeffs.len())].to_vec())
    }

    /// Multiplication by `z^j`.
    pub fn mul_power(&self, j: usize) -> Self {
        let mut c = vec![ZERO; j];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[C64], i: usize| v.get(i).copied().unwrap_or(ZERO);
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    /// `sum_{j=1}^{n} |((S*)^j f)(zeta)|^2`.
    ///
    /// The shifted values satisfy `(S*)^j f(z) = c[j] + z (S*)^{j+1} f(z)`, so a
    /// single backward Horner sweep produces all of them.
    pub fn shift_sum_sq(&self, n: usize, zeta: C64) -> f64 {
        let mut acc = ZERO;
        let mut total = 0.0;
        for j in (1..self.coeffs.len()).rev() {
            acc = acc * zeta + self.coeffs[j];
            if j <= n {
                total += acc.norm_sqr();
            }
        }
        total
    }

    /// Grid lower bound / coefficient upper bound for `max_{|z|=1} |f(z)|`.
    pub fn sup_norm(&self, oversample: usize) -> SupNorm {
        sup_norm_torus(self, oversample)
    }
}

impl TorusFunction for UniPolynomial {
    fn fourier_terms(&self) -> Vec<Term> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != ZERO)
            .map(|(j, &c)| ((j as i64, 0), c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_bipoly(rng: &mut ChaCha8Rng, d1: usize, d2: usize) -> BiPolynomial {
        BiPolynomial::from_fn(d1, d2, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    /// 3 z1^2 z2 + z2^3
    fn sample() -> BiPolynomial {
        BiPolynomial::monomial(2, 1, c(3.0, 0.0)).add(&BiPolynomial::monomial(0, 3, c(1.0, 0.0)))
    }

    #[test]
    fn evaluate_examples() {
        let f = BiPolynomial::monomial(1, 1, c(1.0, 0.0));
        assert_eq!(f.evaluate(c(0.0, 1.0), c(0.0, -1.0)), c(1.0, 0.0));
        let one = BiPolynomial::constant(c(1.0, 0.0));
        assert_eq!(one.evaluate(c(0.3, -2.0), c(7.0, 1.0)), c(1.0, 0.0));
        assert_eq!(sample().evaluate(c(1.0, 0.0), c(1.0, 0.0)), c(4.0, 0.0));
    }

    #[test]
    fn shift_examples() {
        let f = sample();
        assert_eq!(f.shift1().trim(), BiPolynomial::monomial(1, 1, c(3.0, 0.0)));
        let expect = BiPolynomial::monomial(2, 0, c(3.0, 0.0)).add(&BiPolynomial::monomial(0, 2, c(1.0, 0.0)));
        assert_eq!(f.shift2().trim(), expect);
        assert!(BiPolynomial::constant(c(2.5, 1.0)).shift1().is_zero());
    }

    #[test]
    fn shift_power_on_monomials() {
        for (l, m) in [(0, 3), (2, 5), (4, 1)] {
            let f = BiPolynomial::monomial(l, m, c(1.0, 0.0));
            for j in 1..=m {
                assert_eq!(f.shift_power(Var::Z2, j).trim(), BiPolynomial::monomial(l, m - j, c(1.0, 0.0)));
            }
            assert!(f.shift_power(Var::Z2, m + 1).is_zero());
            assert!(f.shift_power(Var::Z2, m + 7).is_zero());
        }
    }

    #[test]
    fn shift_power_matches_repeated_single_shifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (d1, d2) = (rng.random_range(0..=8), rng.random_range(0..=8));
            let f = random_bipoly(&mut rng, d1, d2);
            assert_eq!(f.shift_power(Var::Z1, 1), f.shift1());
            let mut g = f.clone();
            for j in 1..=9 {
                g = g.shift2();
                assert_eq!(f.shift_power(Var::Z2, j).trim(), g.trim());
            }
        }
    }

    #[test]
    fn trim_is_idempotent_and_zero_is_degree_zero() {
        let f = BiPolynomial::from_fn(4, 3, |k, m| if k == 1 && m == 2 { c(1.0, 1.0) } else { ZERO });
        let t = f.trim();
        assert_eq!((t.deg1(), t.deg2()), (1, 2));
        assert_eq!(t.trim(), t);
        let z = BiPolynomial::from_fn(3, 3, |_, _| ZERO).trim();
        assert_eq!((z.deg1(), z.deg2()), (0, 0));
    }

    #[test]
    fn reconstruction_from_first_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_bipoly(&mut rng, 6, 4);
        let rebuilt = f.column_zero().add(&f.shift1().mul_monomial(1, 0));
        for _ in 0..100 {
            let z1 = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let z2 = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            assert!((f.evaluate(z1, z2) - rebuilt.evaluate(z1, z2)).norm() < 1e-12);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let f = BiPolynomial::monomial(1, 0, c(1.0, 0.0)).add(&BiPolynomial::monomial(0, 1, c(1.0, 0.0)));
        let s = sup_norm_torus(&f, 8);
        assert!((s.grid_max - 2.0).abs() < 1e-14);
        assert_eq!(s.l1_upper, 2.0);

        let mono = BiPolynomial::monomial(3, 5, c(0.0, 1.0));
        let s = sup_norm_torus(&mono, 8);
        assert!((s.grid_max - 1.0).abs() < 1e-14);
        assert_eq!(s.l1_upper, 1.0);

        assert_eq!(sup_norm_torus(&BiPolynomial::zero(), 8), SupNorm { grid_max: 0.0, l1_upper: 0.0 });
    }

    #[test]
    fn sup_norm_matches_dense_reference_grid() {
        // 1 + z1 + z1 z2, against a 4096 x 4096 brute-force scan.
        let f = BiPolynomial::constant(c(1.0, 0.0))
            .add(&BiPolynomial::monomial(1, 0, c(1.0, 0.0)))
            .add(&BiPolynomial::monomial(1, 1, c(1.0, 0.0)));
        let n = 4096;
        let step = std::f64::consts::TAU / n as f64;
        let mut reference = 0.0f64;
        for a in 0..n {
            let z1 = C64::from_polar(1.0, a as f64 * step);
            for b in 0..n {
                let z2 = C64::from_polar(1.0, b as f64 * step);
                reference = reference.max((c(1.0, 0.0) + z1 + z1 * z2).norm());
            }
        }
        let s = sup_norm_torus(&f, 8);
        assert!((s.grid_max - reference).abs() < 1e-8);
        assert!(s.grid_max <= s.l1_upper);
    }

    #[test]
    fn sup_norm_sandwich_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let (d1, d2) = (rng.random_range(0..=6), rng.random_range(0..=6));
            let f = random_bipoly(&mut rng, d1, d2);
            let s = sup_norm_torus(&f, 8);
            assert!(s.grid_max <= s.l1_upper * (1.0 + 1e-15));
            // A fine brute-force grid cannot beat the polished maximum by much.
            let n = 256;
            let mut brute = 0.0f64;
            for a in 0..n {
                for b in 0..n {
                    let z1 = C64::from_polar(1.0, a as f64 * 0.0245436926 + 0.01);
                    let z2 = C64::from_polar(1.0, b as f64 * 0.0245436926 + 0.02);
                    brute = brute.max(f.evaluate(z1, z2).norm());
                }
            }
            assert!(brute <= s.grid_max + 1e-9, "{brute} > {}", s.grid_max);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_bipoly(&mut rng, 3, 5).scale(c(1.0 / 3.0, std::f64::consts::PI));
        let back = BiPolynomial::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(BiPolynomial::from_json(r#"{"deg1":1,"deg2":1,"coeffs":[[1,0]]}"#).is_err());
    }

    #[test]
    fn shift_sum_sq_examples() {
        let n = 9;
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = c(1.0, 0.0);
        let zn = UniPolynomial::new(coeffs);
        for t in [0.0, 0.7, 2.0, 5.5] {
            assert!((zn.shift_sum_sq(n, C64::from_polar(1.0, t)) - n as f64).abs() < 1e-12);
        }
        let constant = UniPolynomial::new(vec![c(4.0, -1.0)]);
        assert_eq!(constant.shift_sum_sq(5, c(1.0, 0.0)), 0.0);
    }

    #[test]
    fn shift_sum_sq_matches_termwise_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = UniPolynomial::new(
            (0..=16).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
        );
        let zeta = c(1.0, 0.0);
        let oracle: f64 = (1..=16)
            .map(|j| {
                // Evaluate (S*)^j f directly from its coefficients.
                let v: C64 = (j..=16).map(|k| f.coeffs()[k] * zeta.powu((k - j) as u32)).sum();
                v.norm_sqr()
            })
            .sum();
        assert!((f.shift_sum_sq(16, zeta) - oracle).abs() < 1e-12 * (1.0 + oracle));
        // Terms beyond the degree vanish.
        assert_eq!(f.shift_sum_sq(40, zeta), f.shift_sum_sq(16, zeta));
    }

    #[test]
    fn partial_sum_plus_shifted_tail_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let f = UniPolynomial::new(
            (0..=12).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
        );
        for j in 1..=f.degree() {
            let rebuilt = f.partial_sum(j - 1).add(&f.shift_power(j).mul_power(j));
            assert_eq!(rebuilt.coeffs(), f.coeffs());
        }
    }
}
