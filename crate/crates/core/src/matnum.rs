//! Dense complex matrix numerics: singular values, Schatten–von Neumann norms,
//! the balanced `S_2p` factorization, and singular-value decay fitting.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Dense complex matrix; square for operators, rectangular for row and
/// column blocks.
pub type MatrixOperator = DMatrix<C64>;

/// Nonincreasing singular values `s_0 >= s_1 >= ... >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum(Vec<f64>);

impl SingularSpectrum {
    /// Sorts `values` into nonincreasing order; negative or non-finite entries
    /// are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument("singular values must be finite and >= 0".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest singular value (0 for an empty spectrum).
    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }
}

pub fn singular_values(m: &MatrixOperator) -> SingularSpectrum {
    if m.is_empty() {
        return SingularSpectrum(Vec::new());
    }
    let mut v: Vec<f64> = m.clone().singular_values().iter().map(|s| s.max(0.0)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    SingularSpectrum(v)
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::InvalidExponent(p))
    } else {
        Ok(())
    }
}

/// `(sum s_j^p)^(1/p)` from a spectrum, scaled by `s_0` to avoid overflow.
pub fn schatten_from_spectrum(spec: &SingularSpectrum, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let s0 = spec.largest();
    if s0 == 0.0 || p.is_infinite() {
        return Ok(s0);
    }
    let sum: f64 = spec.values().iter().map(|s| (s / s0).powf(p)).sum();
    Ok(s0 * sum.powf(1.0 / p))
}

/// Schatten–von Neumann norm; `p = f64::INFINITY` is the operator norm.
pub fn schatten_norm(m: &MatrixOperator, p: f64) -> Result<f64> {
    check_exponent(p)?;
    schatten_from_spectrum(&singular_values(m), p)
}

pub fn op_norm(m: &MatrixOperator) -> f64 {
    singular_values(m).largest()
}

pub fn identity(d: usize) -> MatrixOperator {
    DMatrix::identity(d, d)
}

/// Factors `Q = Q1 Q2` with `||Q1||_{S_2p} = ||Q2||_{S_2p} = ||Q||_{S_p}^{1/2}`.
///
/// With `Q = U S V*`, the polar factors are `W = U V*` and `|Q| = V S V*`;
/// the result is `Q1 = W |Q|^{1/2} = U S^{1/2} V*` and `Q2 = |Q|^{1/2}`.
pub fn schatten_split(q: &MatrixOperator, p: f64) -> Result<(MatrixOperator, MatrixOperator)> {
    check_exponent(p)?;
    if q.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroMatrix);
    }
    let svd = q.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V*");
    let root = DVector::from_iterator(
        svd.singular_values.len(),
        svd.singular_values.iter().map(|s| C64::new(s.max(0.0).sqrt(), 0.0)),
    );
    let q1 = u * DMatrix::from_diagonal(&root) * v_t;
    let q2 = v_t.adjoint() * DMatrix::from_diagonal(&root) * v_t;

    let scale = op_norm(q);
    let resid = op_norm(&(&q1 * &q2 - q));
    if resid > 1e-10 * scale {
        return Err(Error::Postcondition(format!("Q1 Q2 - Q has norm {resid:e}")));
    }
    let target = schatten_norm(q, p)?.sqrt();
    for (name, factor) in [("Q1", &q1), ("Q2", &q2)] {
        let got = schatten_norm(factor, 2.0 * p)?;
        if (got - target).abs() > 1e-8 * target.max(1.0) {
            return Err(Error::Postcondition(format!("{name} S_2p norm {got} != {target}")));
        }
    }
    Ok((q1, q2))
}

/// Smallest `C` with `s_j <= C (1 + j)^(-exponent)` for every `j`.
pub fn decay_fit(spec: &SingularSpectrum, exponent: f64) -> Result<f64> {
    if exponent.is_nan() || exponent <= 0.0 {
        return Err(Error::InvalidArgument(format!("decay exponent {exponent} must be > 0")));
    }
    Ok(spec
        .values()
        .iter()
        .enumerate()
        .map(|(j, s)| s * (1.0 + j as f64).powf(exponent))
        .fold(0.0, f64::max))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &MatrixOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Numerical radius `max_theta lambda_max(Re(e^{i theta} T))`, sampled at
/// `samples` angles and refined by golden-section search around the best one.
pub fn numerical_radius(t: &MatrixOperator, samples: usize) -> f64 {
    let lam = |theta: f64| {
        let rotated = t * C64::from_polar(1.0, theta);
        let herm = (&rotated + rotated.adjoint()) * C64::new(0.5, 0.0);
        hermitian_eigenvalues(&herm).last().copied().unwrap_or(0.0)
    };
    let n = samples.max(8);
    let h = std::f64::consts::TAU / n as f64;
    let (best_k, best) = (0..n)
        .map(|k| (k, lam(k as f64 * h)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let centre = best_k as f64 * h;
    best.max(crate::torus::golden_max(lam, centre - h, centre + h).1)
}

/// On-disk matrix file: `{"rows", "cols", "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &MatrixOperator) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<MatrixOperator> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(DMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.entries.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

pub fn matrix_to_json(m: &MatrixOperator) -> Result<String> {
    Ok(serde_json::to_string(&MatrixFile::from_matrix(m))?)
}

pub fn matrix_from_json(text: &str) -> Result<MatrixOperator> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random(rng: &mut ChaCha8Rng, r: usize, k: usize) -> MatrixOperator {
        DMatrix::from_fn(r, k, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn unitary(rng: &mut ChaCha8Rng, d: usize) -> MatrixOperator {
        random(rng, d, d).qr().q()
    }

    #[test]
    fn diagonal_spectrum_and_norms() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(-4.0)]));
        assert_eq!(singular_values(&m).values(), &[4.0, 3.0]);
        assert!((schatten_norm(&m, 2.0).unwrap() - 5.0).abs() < 1e-14);
        assert!((schatten_norm(&m, 1.0).unwrap() - 7.0).abs() < 1e-14);
        assert!((schatten_norm(&m, f64::INFINITY).unwrap() - 4.0).abs() < 1e-14);
        assert!(matches!(schatten_norm(&m, 0.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn unitary_has_unit_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = unitary(&mut rng, 8);
        for s in singular_values(&u).values() {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_matches_eigen_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random(&mut rng, 6, 6);
        let mut oracle: Vec<f64> =
            hermitian_eigenvalues(&(m.adjoint() * &m)).iter().map(|e| e.max(0.0).sqrt()).collect();
        oracle.reverse();
        let got = singular_values(&m);
        for (a, b) in got.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn s4_norm_matches_trace_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random(&mut rng, 5, 5);
        let g = m.adjoint() * &m;
        let oracle = (&g * &g).trace().re.powf(0.25);
        assert!((schatten_norm(&m, 4.0).unwrap() - oracle).abs() < 1e-10 * oracle);
    }

    #[test]
    fn split_examples() {
        let q = DMatrix::from_element(1, 1, c(4.0));
        let (q1, q2) = schatten_split(&q, 3.0).unwrap();
        assert!((q1[(0, 0)] - c(2.0)).norm() < 1e-14);
        assert!((q2[(0, 0)] - c(2.0)).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = unitary(&mut rng, 5);
        let (q1, q2) = schatten_split(&u, 2.0).unwrap();
        assert!(op_norm(&(&q1 - &u)) < 1e-10);
        assert!(op_norm(&(&q2 - identity(5))) < 1e-10);

        let q = random(&mut rng, 6, 6);
        let (q1, q2) = schatten_split(&q, 2.0).unwrap();
        let lhs = schatten_norm(&q1, 4.0).unwrap().powi(2);
        let rhs = schatten_norm(&q, 2.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-8);
        assert!((schatten_norm(&q2, 4.0).unwrap().powi(2) - rhs).abs() < 1e-8);

        assert!(matches!(schatten_split(&DMatrix::zeros(3, 3), 2.0), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn decay_fit_examples() {
        let beta = 0.7;
        let spec = SingularSpectrum::new((0..20).map(|j| (1.0 + j as f64).powf(-beta)).collect()).unwrap();
        assert!((decay_fit(&spec, beta).unwrap() - 1.0).abs() < 1e-14);
        let zeros = SingularSpectrum::new(vec![0.0; 6]).unwrap();
        assert_eq!(decay_fit(&zeros, 0.5).unwrap(), 0.0);
        assert!(decay_fit(&zeros, 0.0).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = SingularSpectrum::new((0..30).map(|_| rng.random_range(0.0..3.0)).collect()).unwrap();
        let mut oracle = 0.0f64;
        for (j, s) in spec.values().iter().enumerate() {
            let v = s * ((j + 1) as f64).powf(0.4);
            if v > oracle {
                oracle = v;
            }
        }
        assert_eq!(decay_fit(&spec, 0.4).unwrap(), oracle);
    }

    #[test]
    fn numerical_radius_of_jordan_block() {
        let d = 4;
        let j = DMatrix::from_fn(d, d, |r, k| if k == r + 1 { c(1.0) } else { c(0.0) });
        let w = numerical_radius(&j, 64);
        assert!((w - (std::f64::consts::PI / (d as f64 + 1.0)).cos()).abs() < 1e-9);
        assert!((op_norm(&j) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_file_round_trip_and_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random(&mut rng, 3, 4) * C64::new(1.0 / 3.0, 0.1);
        assert_eq!(matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap(), m);
        assert!(matrix_from_json(r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#).is_err());
    }
}
