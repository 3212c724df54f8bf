//! Littlewood–Paley decomposition on the two-torus and the Besov,
//! Hölder–Zygmund and modulus-of-continuity quantities built on it.
//!
//! Block `n >= 1` multiplies the Fourier coefficient at `j` by `w(|j| / 2^n)`.
//! Block 0 takes the complement `1 - sum_{n >= 1} w(|j| / 2^n)`, so the blocks
//! always sum back to the original function. In two variables this differs
//! from the unit-ball indicator at radii strictly between 1 and 2 (for example
//! `|j| = sqrt(2)`), where the indicator would leave a gap.

mod bump;
mod modulus;
mod trig;

pub use bump::{make_bump, smooth_step, DyadicBump};
pub use modulus::{
    adaptive_simpson, lambda_omega_seminorm, omega_star, omega_star_quadrature, ModulusOfContinuity,
};
pub use trig::{TrigPolynomial2D, TrigTermFile};

use crate::error::{Error, Result};

/// Littlewood–Paley machinery for a fixed bump.
#[derive(Debug, Clone, Default)]
pub struct LittlewoodPaley {
    bump: DyadicBump,
}

impl LittlewoodPaley {
    pub fn new(bump: DyadicBump) -> Self {
        Self { bump }
    }

    pub fn bump(&self) -> &DyadicBump {
        &self.bump
    }

    /// Multiplier of block `n` at lattice point `j`.
    pub fn multiplier(&self, n: u32, j: (i64, i64)) -> f64 {
        self.multiplier_at_radius(n, trig::radius(j))
    }

    pub fn multiplier_at_radius(&self, n: u32, r: f64) -> f64 {
        if n >= 1 {
            return self.bump.eval(r / 2f64.powi(n as i32));
        }
        let mut sum = 0.0;
        for k in 1..=highest_block(r) {
            sum += self.bump.eval(r / 2f64.powi(k as i32));
        }
        1.0 - sum
    }

    /// `f_n`, the coefficientwise product of `f` with block `n`'s multiplier.
    pub fn block(&self, f: &TrigPolynomial2D, n: u32) -> TrigPolynomial2D {
        TrigPolynomial2D::from_terms(
            f.terms()
                .into_iter()
                .map(|(j, c)| (j, c * self.multiplier(n, j)))
                .filter(|&(_, c)| c.norm() > 0.0),
        )
    }

    /// Blocks `f_0, ..., f_N` where `N` is the last block that can be nonzero.
    pub fn decompose(&self, f: &TrigPolynomial2D) -> Vec<TrigPolynomial2D> {
        (0..=highest_block(f.support_radius())).map(|n| self.block(f, n)).collect()
    }

    /// `|| {2^{n s} ||f_n||_{L^p}}_n ||_{l^q}`.
    pub fn besov_norm(&self, f: &TrigPolynomial2D, s: f64, p: f64, q: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("smoothness s = {s} must be > 0")));
        }
        for e in [p, q] {
            if e.is_nan() || e < 1.0 {
                return Err(Error::InvalidExponent(e));
            }
        }
        let mut weighted = Vec::new();
        for (n, block) in self.decompose(f).iter().enumerate() {
            if !block.is_zero() {
                weighted.push(2f64.powf(n as f64 * s) * block.lp_norm(p)?);
            }
        }
        Ok(if q.is_infinite() {
            weighted.into_iter().fold(0.0, f64::max)
        } else {
            weighted.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
        })
    }

    /// Hölder–Zygmund norm `sup_n 2^{n alpha} ||f_n||_inf`.
    pub fn holder_norm(&self, f: &TrigPolynomial2D, alpha: f64) -> Result<f64> {
        self.besov_norm(f, alpha, f64::INFINITY, f64::INFINITY)
    }

    /// `sum_n 2^n ||f_n||_inf`, the norm controlling operator Lipschitz bounds.
    pub fn lipschitz_besov_norm(&self, f: &TrigPolynomial2D) -> Result<f64> {
        self.besov_norm(f, 1.0, f64::INFINITY, 1.0)
    }
}

/// Largest `n` with `w(r / 2^n)` possibly nonzero, i.e. `2^(n-1) < r`.
fn highest_block(r: f64) -> u32 {
    let mut n = 0;
    while r / 2f64.powi(n as i32 + 1) > 0.5 {
        n += 1;
    }
    n
}

/// Multiplier of block `n` at `j` for the canonical bump.
pub fn lp_multiplier(n: u32, j: (i64, i64)) -> f64 {
    LittlewoodPaley::default().multiplier(n, j)
}

/// Block `n` of `f` for the canonical bump.
pub fn lp_block(f: &TrigPolynomial2D, n: u32) -> TrigPolynomial2D {
    LittlewoodPaley::default().block(f, n)
}

/// `is_analytic` as a free function.
pub fn is_analytic(f: &TrigPolynomial2D) -> bool {
    f.is_analytic()
}
