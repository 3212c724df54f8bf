//! Polynomial functional calculus `f(T, R)` for commuting contractions, the
//! difference and quasicommutator identities built from the coefficient
//! shifts, and the von Neumann-type inequality check.

use std::cell::RefCell;

use crate::bipoly::{sup_norm_torus, BiPolynomial, Var, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::matnum::{identity, op_norm, MatrixOperator};
use crate::C64;

/// Acceptance tolerances for the contraction and commutation hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub contraction: f64,
    pub commutation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { contraction: 1e-10, commutation: 1e-10 }
    }
}

/// Two commuting square matrices of operator norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionPair {
    t: MatrixOperator,
    r: MatrixOperator,
}

impl ContractionPair {
    pub fn new(t: MatrixOperator, r: MatrixOperator) -> Result<Self> {
        Self::with_tolerances(t, r, Tolerances::default())
    }

    pub fn with_tolerances(t: MatrixOperator, r: MatrixOperator, tol: Tolerances) -> Result<Self> {
        if !t.is_square() || t.shape() != r.shape() || t.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "pair needs equal nonempty square matrices, got {:?} and {:?}",
                t.shape(),
                r.shape()
            )));
        }
        if t.iter().chain(r.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        for m in [&t, &r] {
            let norm = op_norm(m);
            if norm > 1.0 + tol.contraction {
                return Err(Error::NotContraction { norm, tol: tol.contraction });
            }
        }
        let defect = op_norm(&(&t * &r - &r * &t));
        if defect > tol.commutation {
            return Err(Error::NotCommuting { defect, tol: tol.commutation });
        }
        Ok(Self { t, r })
    }

    pub fn t(&self) -> &MatrixOperator {
        &self.t
    }

    pub fn r(&self) -> &MatrixOperator {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// `max(||T1 - T2||, ||R1 - R2||)`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        same_dim(self, other)?;
        Ok(op_norm(&(&self.t - &other.t)).max(op_norm(&(&self.r - &other.r))))
    }
}

fn same_dim(a: &ContractionPair, b: &ContractionPair) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("pair dims {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// Evaluator bound to one pair; powers of `T` are computed once and reused
/// across every polynomial applied through it.
pub struct PairCalculus<'a> {
    pair: &'a ContractionPair,
    t_powers: RefCell<Vec<MatrixOperator>>,
}

impl<'a> PairCalculus<'a> {
    pub fn new(pair: &'a ContractionPair) -> Self {
        Self { pair, t_powers: RefCell::new(vec![identity(pair.dim())]) }
    }

    /// `T^k`, extending the cache as needed.
    pub fn t_power(&self, k: usize) -> MatrixOperator {
        let mut pows = self.t_powers.borrow_mut();
        while pows.len() <= k {
            let next = pows.last().expect("cache starts at T^0") * &self.pair.t;
            pows.push(next);
        }
        pows[k].clone()
    }

    /// `sum a[k][m] T^k R^m`, Horner in `R` over rows built from cached `T^k`.
    pub fn apply(&self, f: &BiPolynomial) -> MatrixOperator {
        let d = self.pair.dim();
        self.t_power(f.deg1());
        let pows = self.t_powers.borrow();
        let row = |m: usize| {
            let mut acc = MatrixOperator::zeros(d, d);
            for (k, pow) in pows.iter().enumerate().take(f.deg1() + 1) {
                let a = f.coeff(k, m);
                if a != C64::new(0.0, 0.0) {
                    acc += pow * a;
                }
            }
            acc
        };
        let mut acc = row(f.deg2());
        for m in (0..f.deg2()).rev() {
            acc = acc * &self.pair.r + row(m);
        }
        acc
    }
}

/// `f(T, R)` for the given pair.
pub fn apply(f: &BiPolynomial, pair: &ContractionPair) -> MatrixOperator {
    PairCalculus::new(pair).apply(f)
}

/// `||f(T, R)|| - max_{T^2} |f|` with the torus maximum taken from the
/// polished grid (a lower bound of the true supremum).
pub fn von_neumann_gap(f: &BiPolynomial, pair: &ContractionPair) -> f64 {
    let lhs = op_norm(&apply(f, pair));
    lhs - sup_norm_torus(f, DEFAULT_OVERSAMPLE).grid_max
}

/// `f(T1, R1) - f(T2, R2)`.
pub fn difference_direct(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
) -> Result<MatrixOperator> {
    same_dim(pair1, pair2)?;
    Ok(apply(f, pair1) - apply(f, pair2))
}

/// Right-hand side of the shift identity for `f(T1, R1) - f(T2, R2)`:
///
/// `sum_j ((S2*)^j f)(T1, R1) (R1 - R2) R2^{j-1}
///  + sum_j T1^{j-1} (T1 - T2) ((S1*)^j f)(T2, R2)`.
pub fn identity_rhs(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
) -> Result<MatrixOperator> {
    same_dim(pair1, pair2)?;
    let dr = pair1.r() - pair2.r();
    let dt = pair1.t() - pair2.t();
    Ok(shift_expansion(f, pair1, pair2, &dr, &dt))
}

/// `f(T1, R1) Q - Q f(T2, R2)`; `Q` is `dim1 x dim2`.
pub fn quasicommutator_direct(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: &MatrixOperator,
) -> Result<MatrixOperator> {
    check_q(pair1, pair2, q)?;
    Ok(apply(f, pair1) * q - q * apply(f, pair2))
}

/// Right-hand side of the quasicommutator identity: the difference identity
/// with `R1 - R2` and `T1 - T2` replaced by `R1 Q - Q R2` and `T1 Q - Q T2`.
pub fn quasicommutator_identity_rhs(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: &MatrixOperator,
) -> Result<MatrixOperator> {
    check_q(pair1, pair2, q)?;
    let dr = pair1.r() * q - q * pair2.r();
    let dt = pair1.t() * q - q * pair2.t();
    Ok(shift_expansion(f, pair1, pair2, &dr, &dt))
}

fn check_q(pair1: &ContractionPair, pair2: &ContractionPair, q: &MatrixOperator) -> Result<()> {
    if q.shape() != (pair1.dim(), pair2.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "Q is {:?}, pairs need {}x{}",
            q.shape(),
            pair1.dim(),
            pair2.dim()
        )));
    }
    Ok(())
}

fn shift_expansion(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    dr: &MatrixOperator,
    dt: &MatrixOperator,
) -> MatrixOperator {
    let f = f.trim();
    let calc1 = PairCalculus::new(pair1);
    let calc2 = PairCalculus::new(pair2);
    let mut out = MatrixOperator::zeros(pair1.dim(), pair2.dim());

    // Shifts beyond the partial degree vanish, so each sum stops there.
    let mut r2_pow = identity(pair2.dim());
    for j in 1..=f.deg2() {
        let phi = calc1.apply(&f.shift_power(Var::Z2, j));
        out += phi * dr * &r2_pow;
        r2_pow = r2_pow * pair2.r();
    }
    for j in 1..=f.deg1() {
        let psi = calc2.apply(&f.shift_power(Var::Z1, j));
        out += calc1.t_power(j - 1) * dt * psi;
    }
    out
}
