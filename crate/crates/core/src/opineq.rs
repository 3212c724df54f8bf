//! Row and column operators over operator families, the bilinear transformer
//! `sum_j A_j Q B_j`, and families generated by polynomial symbols.

use crate::bipoly::{BiPolynomial, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::funcalc::{ContractionPair, PairCalculus};
use crate::matnum::{op_norm, schatten_norm, schatten_split, MatrixOperator};
use crate::torus::{self, Term};
use crate::C64;

/// Tolerance under which a family counts as satisfying the gram conditions.
pub const ADMISSIBLE_TOL: f64 = 1e-10;

/// Finite list of `d x d` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    members: Vec<MatrixOperator>,
}

impl OperatorFamily {
    pub fn new(members: Vec<MatrixOperator>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidArgument("empty operator family".into()));
        };
        let shape = first.shape();
        if shape.0 != shape.1 || members.iter().any(|m| m.shape() != shape) {
            return Err(Error::DimensionMismatch("family members must share one square shape".into()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[MatrixOperator] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].nrows()
    }

    /// Both gram norms are at most `1 + ADMISSIBLE_TOL`.
    pub fn is_admissible(&self) -> bool {
        let (row, col) = gram_norms(self);
        row <= 1.0 + ADMISSIBLE_TOL && col <= 1.0 + ADMISSIBLE_TOL
    }
}

/// Finite list of analytic polynomial symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFamily {
    members: Vec<BiPolynomial>,
}

impl PolynomialFamily {
    pub fn new(members: Vec<BiPolynomial>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial family".into()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[BiPolynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Polished grid maximum of `sum_j |f_j|^2` over the torus, a lower bound
    /// of its supremum over the closed bidisk.
    pub fn sq_sum_max(&self) -> f64 {
        let terms: Vec<Vec<Term>> = self.members.iter().map(|f| f.terms()).collect();
        let all: Vec<Term> = terms.iter().flatten().copied().collect();
        if all.is_empty() {
            return 0.0;
        }
        let (s1, s2) = torus::min_grid(&all);
        let (n1, n2) = (DEFAULT_OVERSAMPLE * s1, DEFAULT_OVERSAMPLE * s2);
        let mut sum = vec![0.0; n1 * n2];
        for t in &terms {
            for (acc, z) in sum.iter_mut().zip(torus::grid_values(t, n1, n2)) {
                *acc += z.norm_sqr();
            }
        }
        torus::polished_max(&sum, n1, n2, |a, b| {
            terms.iter().map(|t| torus::eval_terms(t, a, b).norm_sqr()).sum()
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { members: self.members.iter().map(|f| f.scale(C64::new(s, 0.0))).collect() }
    }
}

/// `(A_0 Q  A_1 Q  ...)`, shape `d x (n * cols(Q))`.
pub fn row_block(fam: &OperatorFamily, q: &MatrixOperator) -> Result<MatrixOperator> {
    if q.nrows() != fam.dim() {
        return Err(Error::DimensionMismatch(format!("Q has {} rows, family dim {}", q.nrows(), fam.dim())));
    }
    let c = q.ncols();
    let mut out = MatrixOperator::zeros(fam.dim(), fam.len() * c);
    for (j, a) in fam.members.iter().enumerate() {
        out.columns_mut(j * c, c).copy_from(&(a * q));
    }
    Ok(out)
}

/// `(Q A_0; Q A_1; ...)`, shape `(n * rows(Q)) x d`.
pub fn col_block(fam: &OperatorFamily, q: &MatrixOperator) -> Result<MatrixOperator> {
    if q.ncols() != fam.dim() {
        return Err(Error::DimensionMismatch(format!("Q has {} cols, family dim {}", q.ncols(), fam.dim())));
    }
    let r = q.nrows();
    let mut out = MatrixOperator::zeros(fam.len() * r, fam.dim());
    for (j, a) in fam.members.iter().enumerate() {
        out.rows_mut(j * r, r).copy_from(&(q * a));
    }
    Ok(out)
}

/// `(||sum A_j A_j*||, ||sum A_j* A_j||)`.
pub fn gram_norms(fam: &OperatorFamily) -> (f64, f64) {
    let d = fam.dim();
    let mut row = MatrixOperator::zeros(d, d);
    let mut col = MatrixOperator::zeros(d, d);
    for a in &fam.members {
        row += a * a.adjoint();
        col += a.adjoint() * a;
    }
    (op_norm(&row), op_norm(&col))
}

/// `sum_j A_j Q B_j` for equal-length families.
pub fn transformer(fam1: &OperatorFamily, q: &MatrixOperator, fam2: &OperatorFamily) -> Result<MatrixOperator> {
    if fam1.len() != fam2.len() {
        return Err(Error::LengthMismatch(fam1.len(), fam2.len()));
    }
    if q.shape() != (fam1.dim(), fam2.dim()) {
        return Err(Error::DimensionMismatch(format!("Q is {:?}", q.shape())));
    }
    let mut out = MatrixOperator::zeros(fam1.dim(), fam2.dim());
    for (a, b) in fam1.members.iter().zip(&fam2.members) {
        out += a * q * b;
    }
    Ok(out)
}

/// The same sum evaluated as `row(A; Q1) * col(B; Q2)` with `Q = Q1 Q2` the
/// balanced `S_2p` factorization.
pub fn transformer_factorized(
    fam1: &OperatorFamily,
    q: &MatrixOperator,
    fam2: &OperatorFamily,
    p: f64,
) -> Result<MatrixOperator> {
    if fam1.len() != fam2.len() {
        return Err(Error::LengthMismatch(fam1.len(), fam2.len()));
    }
    let (q1, q2) = schatten_split(q, p)?;
    Ok(row_block(fam1, &q1)? * col_block(fam2, &q2)?)
}

/// `A_j = f_j(T, R)`. With `normalize`, every symbol is first divided by
/// `sqrt(sq_sum_max)` so that `sum |f_j|^2 <= 1` on the torus grid.
pub fn family_from_polynomials(
    polys: &PolynomialFamily,
    pair: &ContractionPair,
    normalize: bool,
) -> Result<OperatorFamily> {
    let polys = if normalize {
        let m = polys.sq_sum_max();
        if m == 0.0 {
            return Err(Error::DegenerateFamily);
        }
        polys.scale(m.sqrt().recip())
    } else {
        polys.clone()
    };
    let calc = PairCalculus::new(pair);
    OperatorFamily::new(polys.members.iter().map(|f| calc.apply(f)).collect())
}

/// Both sides of the bound
/// `||sum phi_j(T1, R1) Q psi_j(T2, R2)||_{S_p} <= (M1 M2)^{1/2} ||Q||_{S_p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearBound {
    pub lhs: f64,
    pub bound: f64,
}

impl BilinearBound {
    pub fn gap(&self) -> f64 {
        self.lhs - self.bound
    }
}

pub fn bilinear_bound(
    polys1: &PolynomialFamily,
    polys2: &PolynomialFamily,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: &MatrixOperator,
    p: f64,
) -> Result<BilinearBound> {
    if polys1.len() != polys2.len() {
        return Err(Error::LengthMismatch(polys1.len(), polys2.len()));
    }
    let fam1 = family_from_polynomials(polys1, pair1, false)?;
    let fam2 = family_from_polynomials(polys2, pair2, false)?;
    let lhs = schatten_norm(&transformer(&fam1, q, &fam2)?, p)?;
    let (m1, m2) = (polys1.sq_sum_max(), polys2.sq_sum_max());
    Ok(BilinearBound { lhs, bound: (m1 * m2).sqrt() * schatten_norm(q, p)? })
}

/// `lhs - bound` of [`bilinear_bound`]; nonpositive up to grid resolution.
pub fn bilinear_gap(
    polys1: &PolynomialFamily,
    polys2: &PolynomialFamily,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: &MatrixOperator,
    p: f64,
) -> Result<f64> {
    bilinear_bound(polys1, polys2, pair1, pair2, q, p).map(|b| b.gap())
}

/// The symbols `(S2*)^j f`, `j = 1..=n`, used in the Bernstein-type estimate.
pub fn shift_family(f: &BiPolynomial, var: crate::bipoly::Var) -> Result<PolynomialFamily> {
    let f = f.trim();
    let n = f.deg1().max(f.deg2()).max(1);
    PolynomialFamily::new((1..=n).map(|j| f.shift_power(var, j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::{sup_norm_torus, Var};
    use crate::matnum::identity;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn disk(rng: &mut ChaCha8Rng) -> C64 {
        C64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, k: usize) -> MatrixOperator {
        DMatrix::from_fn(r, k, |_, _| disk(rng))
    }

    fn diag_pair(rng: &mut ChaCha8Rng, d: usize) -> ContractionPair {
        let t = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| disk(rng)));
        let r = DMatrix::from_diagonal(&DVector::from_fn(d, |_, _| disk(rng)));
        ContractionPair::new(t, r).unwrap()
    }

    fn random_polys(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> PolynomialFamily {
        PolynomialFamily::new(
            (0..n)
                .map(|_| BiPolynomial::from_fn(rng.random_range(0..=deg), rng.random_range(0..=deg), |_, _| disk(rng)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn equal_split_identity_family() {
        let d = 4;
        let h = identity(d) * c(std::f64::consts::FRAC_1_SQRT_2);
        let fam = OperatorFamily::new(vec![h.clone(), h]).unwrap();
        let (row, col) = gram_norms(&fam);
        assert!((row - 1.0).abs() < 1e-14 && (col - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = random_matrix(&mut rng, d, d);
        let rb = row_block(&fam, &q).unwrap();
        assert_eq!(rb.shape(), (d, 2 * d));
        assert!((op_norm(&rb) - op_norm(&q)).abs() < 1e-12);
        assert_eq!(col_block(&fam, &q).unwrap().shape(), (2 * d, d));
    }

    #[test]
    fn singleton_identity_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = random_matrix(&mut rng, 3, 3);
        let fam = OperatorFamily::new(vec![identity(3)]).unwrap();
        assert_eq!(row_block(&fam, &q).unwrap(), q);
        assert_eq!(col_block(&fam, &q).unwrap(), q);
        assert_eq!(transformer(&fam, &q, &fam).unwrap(), q);
        let zero = OperatorFamily::new(vec![DMatrix::zeros(3, 3)]).unwrap();
        assert_eq!(gram_norms(&zero), (0.0, 0.0));
    }

    #[test]
    fn unitary_transformer_preserves_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_matrix(&mut rng, 5, 5).qr().q();
        let v = random_matrix(&mut rng, 5, 5).qr().q();
        let q = random_matrix(&mut rng, 5, 5);
        let out = transformer(
            &OperatorFamily::new(vec![u.clone()]).unwrap(),
            &q,
            &OperatorFamily::new(vec![v.clone()]).unwrap(),
        )
        .unwrap();
        assert!(op_norm(&(&out - &u * &q * &v)) < 1e-13);
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            let a = schatten_norm(&out, p).unwrap();
            let b = schatten_norm(&q, p).unwrap();
            assert!((a - b).abs() < 1e-10 * b);
        }
    }

    #[test]
    fn row_column_and_transformer_bounds_on_admissible_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let d = 8;
            let pair1 = diag_pair(&mut rng, d);
            let pair2 = diag_pair(&mut rng, d);
            let fam1 = family_from_polynomials(&random_polys(&mut rng, 6, 3), &pair1, true).unwrap();
            let fam2 = family_from_polynomials(&random_polys(&mut rng, 6, 3), &pair2, true).unwrap();
            assert!(fam1.is_admissible() && fam2.is_admissible());
            let q = random_matrix(&mut rng, d, d);
            for p in [2.0, 4.0, f64::INFINITY] {
                let qn = schatten_norm(&q, p).unwrap();
                assert!(schatten_norm(&row_block(&fam1, &q).unwrap(), p).unwrap() <= qn * (1.0 + 1e-8));
                assert!(schatten_norm(&col_block(&fam1, &q).unwrap(), p).unwrap() <= qn * (1.0 + 1e-8));
            }
            let direct = transformer(&fam1, &q, &fam2).unwrap();
            for p in [1.0, 2.0, 4.0, f64::INFINITY] {
                let qn = schatten_norm(&q, p).unwrap();
                assert!(schatten_norm(&direct, p).unwrap() <= qn * (1.0 + 1e-8));
            }
            let fact = transformer_factorized(&fam1, &q, &fam2, 2.0).unwrap();
            assert!(op_norm(&(&fact - &direct)) <= 1e-10 * op_norm(&direct));
        }
    }

    #[test]
    fn family_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pair = diag_pair(&mut rng, 4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let polys = PolynomialFamily::new(vec![
            BiPolynomial::constant(c(s)),
            BiPolynomial::monomial(1, 1, c(s)),
        ])
        .unwrap();
        assert!((polys.sq_sum_max() - 1.0).abs() < 1e-12);
        let fam = family_from_polynomials(&polys, &pair, false).unwrap();
        assert!(fam.is_admissible());

        let one = PolynomialFamily::new(vec![BiPolynomial::constant(c(1.0))]).unwrap();
        let fam = family_from_polynomials(&one, &pair, false).unwrap();
        assert_eq!(fam.members()[0], identity(4));
        let (row, col) = gram_norms(&fam);
        assert!((row - 1.0).abs() < 1e-14 && (col - 1.0).abs() < 1e-14);

        let zero = PolynomialFamily::new(vec![BiPolynomial::zero()]).unwrap();
        assert!(matches!(family_from_polynomials(&zero, &pair, true), Err(Error::DegenerateFamily)));
    }

    #[test]
    fn bernstein_shift_family_is_admissible_after_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let f = BiPolynomial::from_fn(6, 6, |_, _| disk(&mut rng));
            let n = f.max_degree() as f64;
            let sup = sup_norm_torus(&f, 8).grid_max;
            let scale = (10.0 * n).sqrt().recip() / sup;
            let polys = shift_family(&f, Var::Z2).unwrap().scale(scale);
            let fam = family_from_polynomials(&polys, &diag_pair(&mut rng, 6), false).unwrap();
            assert!(fam.is_admissible());
        }
    }

    #[test]
    fn sq_sum_max_grows_when_members_are_added() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = random_polys(&mut rng, 4, 3);
        let mut bigger = base.members().to_vec();
        bigger.push(BiPolynomial::from_fn(2, 2, |_, _| disk(&mut rng)));
        let bigger = PolynomialFamily::new(bigger).unwrap();
        assert!(bigger.sq_sum_max() >= base.sq_sum_max());
    }

    #[test]
    fn bilinear_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pair1 = diag_pair(&mut rng, 5);
        let pair2 = diag_pair(&mut rng, 5);
        let one = PolynomialFamily::new(vec![BiPolynomial::constant(c(1.0))]).unwrap();
        let q = random_matrix(&mut rng, 5, 5);
        assert!(bilinear_gap(&one, &one, &pair1, &pair2, &q, 2.0).unwrap().abs() < 1e-12);
        let zero_q = DMatrix::zeros(5, 5);
        assert!(bilinear_gap(&one, &one, &pair1, &pair2, &zero_q, 1.0).unwrap() <= 0.0);

        for _ in 0..20 {
            let polys1 = random_polys(&mut rng, 4, 4);
            let polys2 = random_polys(&mut rng, 4, 4);
            let p = [1.0, 2.0, f64::INFINITY][rng.random_range(0..3)];
            let b = bilinear_bound(&polys1, &polys2, &pair1, &pair2, &q, p).unwrap();
            assert!(b.gap() <= 1e-8 * b.bound.max(1.0));
        }
        let short = PolynomialFamily::new(vec![BiPolynomial::zero(); 2]).unwrap();
        assert!(matches!(
            bilinear_gap(&one, &short, &pair1, &pair2, &q, 2.0),
            Err(Error::LengthMismatch(1, 2))
        ));
    }
}
