use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bipoly::{sup_norm_torus, BiPolynomial, TorusFunction, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::torus::{self, Term};
use crate::C64;

/// Finitely supported Fourier series on the two-torus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigPolynomial2D {
    coeffs: BTreeMap<(i64, i64), C64>,
}

impl TrigPolynomial2D {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums repeated frequencies; exact zeros are not stored.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut out = Self::new();
        for (j, c) in terms {
            out.add_term(j, c);
        }
        out
    }

    pub fn add_term(&mut self, j: (i64, i64), c: C64) {
        let entry = self.coeffs.entry(j).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.coeffs.remove(&j);
        }
    }

    pub fn coeff(&self, j: (i64, i64)) -> C64 {
        self.coeffs.get(&j).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> Vec<Term> {
        self.coeffs.iter().map(|(&j, &c)| (j, c)).collect()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest Euclidean length `|j|` in the support (0 when empty).
    pub fn support_radius(&self) -> f64 {
        self.coeffs.keys().map(|&j| radius(j)).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().into_iter().chain(other.terms()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(self.terms().into_iter().map(|(j, c)| (j, c * s)))
    }

    /// Value at `(e^{i t1}, e^{i t2})`.
    pub fn evaluate(&self, t1: f64, t2: f64) -> C64 {
        torus::eval_terms(&self.terms(), t1, t2)
    }

    /// Fourier support inside the closed nonnegative quadrant.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&(j1, j2)| j1 >= 0 && j2 >= 0)
    }

    /// `||f||_{L^p(T^2)}` for normalized Haar measure. `p = inf` uses the
    /// polished sup-norm grid; finite `p` uses the mean over a uniform grid
    /// four times denser than the frequency span, which is exact for `p = 2`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        if p.is_infinite() {
            return Ok(sup_norm_torus(self, DEFAULT_OVERSAMPLE).grid_max);
        }
        let terms = self.terms();
        let (s1, s2) = torus::min_grid(&terms);
        Ok(torus::mean_pow(&terms, 4 * s1, 4 * s2, p).powf(1.0 / p))
    }

    /// `sqrt(sum |c_j|^2)`.
    pub fn l2_parseval(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_file(&self) -> Vec<TrigTermFile> {
        self.coeffs
            .iter()
            .map(|(&(j1, j2), c)| TrigTermFile { j1, j2, re: c.re, im: c.im })
            .collect()
    }

    pub fn from_file(terms: &[TrigTermFile]) -> Result<Self> {
        if terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self::from_terms(terms.iter().map(|t| ((t.j1, t.j2), C64::new(t.re, t.im)))))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str::<Vec<TrigTermFile>>(text)?)
    }
}

pub(crate) fn radius((j1, j2): (i64, i64)) -> f64 {
    ((j1 * j1 + j2 * j2) as f64).sqrt()
}

impl From<&BiPolynomial> for TrigPolynomial2D {
    fn from(f: &BiPolynomial) -> Self {
        Self::from_terms(f.terms())
    }
}

impl TorusFunction for TrigPolynomial2D {
    fn fourier_terms(&self) -> Vec<Term> {
        self.terms()
    }
}

/// One entry of a trigonometric polynomial file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigTermFile {
    pub j1: i64,
    pub j2: i64,
    pub re: f64,
    pub im: f64,
}
