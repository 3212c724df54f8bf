//! Random generators of commuting contraction pairs and in-scheme
//! perturbations of them.
//!
//! Every scheme keeps the data it was built from, so a perturbation moves that
//! data and rebuilds the matrices: both pairs are exactly commuting by
//! construction, never by projection.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bipoly::UniPolynomial;
use crate::error::{Error, Result};
use crate::funcalc::{ContractionPair, Tolerances};
use crate::matnum::{identity, op_norm, MatrixOperator};
use crate::C64;

/// Commutation defect allowed for generated pairs.
pub const GENERATED_DEFECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Independent diagonal entries in the closed unit disk.
    Diagonal,
    /// Two polynomials in one random contraction.
    #[serde(alias = "poly_of_contraction")]
    Poly,
    /// Block upper-triangular Toeplitz pairs sharing Jordan nilpotents.
    Triangular,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Diagonal, SchemeKind::Poly, SchemeKind::Triangular];

    /// `c` with `max(||T1 - T2||, ||R1 - R2||) <= c * eps` for perturbations.
    pub fn distance_constant(self) -> f64 {
        match self {
            SchemeKind::Diagonal => 1.0,
            SchemeKind::Poly | SchemeKind::Triangular => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Diagonal => "diagonal",
            SchemeKind::Poly => "poly",
            SchemeKind::Triangular => "triangular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScheme {
    pub kind: SchemeKind,
    pub dim: usize,
    pub seed: u64,
    pub perturbation_scale: f64,
}

/// Data a pair was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    Diagonal { t: Vec<C64>, r: Vec<C64> },
    /// `T = p(C)`, `R = q(C)` with the normalization folded into `p` and `q`.
    Poly { c: MatrixOperator, p: UniPolynomial, q: UniPolynomial },
    /// One block per Jordan size: `T_b = sum_k t[b][k] J_b^k`, likewise `R`.
    Triangular { sizes: Vec<usize>, t: Vec<Vec<C64>>, r: Vec<Vec<C64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPair {
    pub pair: ContractionPair,
    pub kind: SchemeKind,
    pub construction: Construction,
}

fn unit_disk(rng: &mut impl Rng) -> C64 {
    C64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU))
}

fn unit_circle(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Complex Ginibre matrix.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> MatrixOperator {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

fn clamp_to_disk(z: C64) -> C64 {
    let r = z.norm();
    if r > 1.0 {
        z / r
    } else {
        z
    }
}

fn validated(t: MatrixOperator, r: MatrixOperator) -> Result<ContractionPair> {
    ContractionPair::with_tolerances(
        t,
        r,
        Tolerances { contraction: 1e-10, commutation: GENERATED_DEFECT_TOL },
    )
}

fn matrix_poly(p: &UniPolynomial, c: &MatrixOperator) -> MatrixOperator {
    let d = c.nrows();
    p.coeffs().iter().rev().fold(MatrixOperator::zeros(d, d), |acc, &a| acc * c + identity(d) * a)
}

/// Divides by `max(1, ||m||)`; returns the rescaled matrix and the divisor.
fn shrink(m: MatrixOperator) -> (MatrixOperator, f64) {
    let n = op_norm(&m);
    if n > 1.0 {
        (m / C64::new(n, 0.0), n)
    } else {
        (m, 1.0)
    }
}

impl GeneratedPair {
    pub fn diagonal(t: Vec<C64>, r: Vec<C64>) -> Result<Self> {
        if t.len() != r.len() || t.is_empty() {
            return Err(Error::DimensionMismatch("diagonal data lengths".into()));
        }
        let pair = validated(
            DMatrix::from_diagonal(&DVector::from_vec(t.clone())),
            DMatrix::from_diagonal(&DVector::from_vec(r.clone())),
        )?;
        Ok(Self { pair, kind: SchemeKind::Diagonal, construction: Construction::Diagonal { t, r } })
    }

    /// `T = p(C) / s_p`, `R = q(C) / s_q` where `s` is `max(1, grid sup on the
    /// circle)`, followed by an operator-norm rescale if roundoff pushed a
    /// norm above one. `C` must be a contraction.
    pub fn from_polynomials(c: MatrixOperator, p: &UniPolynomial, q: &UniPolynomial) -> Result<Self> {
        if op_norm(&c) > 1.0 + 1e-12 {
            return Err(Error::NotContraction { norm: op_norm(&c), tol: 1e-12 });
        }
        let normalize = |p: &UniPolynomial| {
            let s = p.sup_norm(8).grid_max.max(1.0);
            let scaled = UniPolynomial::new(p.coeffs().iter().map(|a| a / s).collect());
            let (m, extra) = shrink(matrix_poly(&scaled, &c));
            (m, UniPolynomial::new(scaled.coeffs().iter().map(|a| a / extra).collect()))
        };
        let (t, p_eff) = normalize(p);
        let (r, q_eff) = normalize(q);
        Ok(Self {
            pair: validated(t, r)?,
            kind: SchemeKind::Poly,
            construction: Construction::Poly { c, p: p_eff, q: q_eff },
        })
    }

    /// Builds the block Toeplitz pair and rescales each operator to norm one.
    pub fn triangular(sizes: Vec<usize>, t: Vec<Vec<C64>>, r: Vec<Vec<C64>>) -> Result<Self> {
        let (tm, t_eff) = Self::toeplitz_blocks(&sizes, &t, true)?;
        let (rm, r_eff) = Self::toeplitz_blocks(&sizes, &r, true)?;
        Ok(Self {
            pair: validated(tm, rm)?,
            kind: SchemeKind::Triangular,
            construction: Construction::Triangular { sizes, t: t_eff, r: r_eff },
        })
    }

    fn toeplitz_blocks(sizes: &[usize], coeffs: &[Vec<C64>], to_unit: bool) -> Result<(MatrixOperator, Vec<Vec<C64>>)> {
        if sizes.len() != coeffs.len() || sizes.iter().zip(coeffs).any(|(&s, c)| s == 0 || c.len() != s) {
            return Err(Error::DimensionMismatch("triangular block data".into()));
        }
        let d: usize = sizes.iter().sum();
        let mut m = MatrixOperator::zeros(d, d);
        let mut off = 0;
        for (&s, c) in sizes.iter().zip(coeffs) {
            for i in 0..s {
                for k in 0..s - i {
                    m[(off + i, off + i + k)] = c[k];
                }
            }
            off += s;
        }
        let n = op_norm(&m);
        let divisor = if to_unit && n > 0.0 { n } else { n.max(1.0) };
        let scaled: Vec<Vec<C64>> = coeffs.iter().map(|c| c.iter().map(|a| a / divisor).collect()).collect();
        Ok((m / C64::new(divisor, 0.0), scaled))
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }
}

/// Draws a pair from `scheme` (deterministic in `scheme.seed`).
pub fn gen_pair(scheme: &PairScheme) -> Result<GeneratedPair> {
    if scheme.dim == 0 {
        return Err(Error::InvalidArgument("pair dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scheme.seed);
    gen_pair_with(scheme.kind, scheme.dim, &mut rng)
}

pub fn gen_pair_with(kind: SchemeKind, d: usize, rng: &mut impl Rng) -> Result<GeneratedPair> {
    match kind {
        SchemeKind::Diagonal => {
            let t = (0..d).map(|_| unit_disk(rng)).collect();
            let r = (0..d).map(|_| unit_disk(rng)).collect();
            GeneratedPair::diagonal(t, r)
        }
        SchemeKind::Poly => {
            let g = gaussian_matrix(rng, d, d);
            let c = &g / C64::new(op_norm(&g), 0.0);
            let mut draw = || {
                let deg = rng.random_range(1..=3);
                UniPolynomial::new((0..=deg).map(|_| unit_disk(rng)).collect())
            };
            let p = draw();
            let q = draw();
            GeneratedPair::from_polynomials(c, &p, &q)
        }
        SchemeKind::Triangular => {
            let mut sizes = Vec::new();
            let mut left = d;
            while left > 0 {
                // The first block has size >= 2 whenever possible so the pair
                // is never normal.
                let lo = if sizes.is_empty() && left >= 2 { 2 } else { 1 };
                let s = rng.random_range(lo..=left);
                sizes.push(s);
                left -= s;
            }
            let mut draw = || sizes.iter().map(|&s| (0..s).map(|_| unit_disk(rng)).collect()).collect();
            let t: Vec<Vec<C64>> = draw();
            let r: Vec<Vec<C64>> = draw();
            GeneratedPair::triangular(sizes.clone(), t, r)
        }
    }
}

/// Moves `g` by about `eps` inside its own scheme. The result satisfies
/// `max(||T1 - T2||, ||R1 - R2||) <= kind.distance_constant() * eps`.
pub fn perturb_pair(g: &GeneratedPair, eps: f64, seed: u64) -> Result<GeneratedPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perturb_pair_with(g, eps, &mut rng)
}

pub fn perturb_pair_with(g: &GeneratedPair, eps: f64, rng: &mut impl Rng) -> Result<GeneratedPair> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation scale {eps} must be finite and >= 0")));
    }
    if eps == 0.0 {
        return Ok(g.clone());
    }
    match &g.construction {
        Construction::Diagonal { t, r } => {
            // Each entry moves by exactly eps before the radial clamp, which is
            // a nonexpansive projection onto the disk.
            let mut step = |z: &C64| clamp_to_disk(z + unit_circle(rng) * eps);
            let t2 = t.iter().map(&mut step).collect();
            let r2 = r.iter().map(&mut step).collect();
            GeneratedPair::diagonal(t2, r2)
        }
        Construction::Poly { c, p, q } => {
            let mut nudge = |poly: &UniPolynomial| {
                let h = eps / poly.coeffs().len() as f64;
                let moved = UniPolynomial::new(poly.coeffs().iter().map(|a| a + unit_disk(rng) * h).collect());
                let (m, s) = shrink(matrix_poly(&moved, c));
                (m, UniPolynomial::new(moved.coeffs().iter().map(|a| a / s).collect()))
            };
            let (t, p2) = nudge(p);
            let (r, q2) = nudge(q);
            Ok(GeneratedPair {
                pair: validated(t, r)?,
                kind: SchemeKind::Poly,
                construction: Construction::Poly { c: c.clone(), p: p2, q: q2 },
            })
        }
        Construction::Triangular { sizes, t, r } => {
            let mut nudge = |blocks: &Vec<Vec<C64>>| {
                blocks
                    .iter()
                    .map(|b| {
                        let mut b = b.clone();
                        b[0] += unit_circle(rng) * eps;
                        b
                    })
                    .collect::<Vec<_>>()
            };
            let t2 = nudge(t);
            let r2 = nudge(r);
            let (tm, t_eff) = GeneratedPair::toeplitz_blocks(sizes, &t2, false)?;
            let (rm, r_eff) = GeneratedPair::toeplitz_blocks(sizes, &r2, false)?;
            Ok(GeneratedPair {
                pair: validated(tm, rm)?,
                kind: SchemeKind::Triangular,
                construction: Construction::Triangular { sizes: sizes.clone(), t: t_eff, r: r_eff },
            })
        }
    }
}

/// `||TR - RT||`.
pub fn commutation_defect(t: &MatrixOperator, r: &MatrixOperator) -> Result<f64> {
    if !t.is_square() || t.shape() != r.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", t.shape(), r.shape())));
    }
    Ok(op_norm(&(t * r - r * t)))
}
