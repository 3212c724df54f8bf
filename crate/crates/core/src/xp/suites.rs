//! The registered suites, their default populations, and the per-check
//! measurements they record.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::besov::{lambda_omega_seminorm, omega_star, LittlewoodPaley, ModulusOfContinuity, TrigPolynomial2D};
use crate::bipoly::{sup_norm_torus, BiPolynomial, UniPolynomial, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::funcalc::{
    apply, difference_direct, identity_rhs, quasicommutator_direct, quasicommutator_identity_rhs, ContractionPair,
};
use crate::matnum::{decay_fit, identity, op_norm, schatten_norm, singular_values, MatrixOperator};
use crate::opineq::{
    col_block, bilinear_bound, family_from_polynomials, gram_norms, row_block, transformer, transformer_factorized,
    PolynomialFamily,
};
use crate::pairs::{gaussian_matrix, gen_pair_with, perturb_pair_with, GeneratedPair, SchemeKind};
use crate::C64;

use super::config::{Exponent, SuiteConfig};
use super::report::{Record, SuiteReport};

/// Additive floor on every ratio denominator.
pub const FLOOR: f64 = 1e-12;

/// Number of points on the circle grid used by the square-function suite.
pub const ZETA_GRID: usize = 256;

pub const TOLERANCE_KEYS: &[&str] = &[
    "identity",
    "vonneumann",
    "opineq",
    "transformer_agreement",
    "shiftsum_cap",
    "bernstein_cap",
    "lipschitz_cap",
    "holder_cap",
    "modulus_cap",
    "schatten_cap",
    "commutator_cap",
];

pub fn default_tolerance(key: &str) -> Option<f64> {
    match key {
        "identity" => Some(1e-9),
        "vonneumann" | "opineq" => Some(1e-8),
        "transformer_agreement" => Some(1e-10),
        k if k.ends_with("_cap") && TOLERANCE_KEYS.contains(&k) => Some(10.0),
        _ => None,
    }
}

/// A registered suite.
pub struct SuiteInfo {
    pub name: &'static str,
    /// The estimate the suite instruments; written into its report header.
    pub instruments: &'static str,
    pub(crate) defaults: fn(&mut SuiteConfig),
    trial: fn(&mut Trial<'_>) -> Result<()>,
    cap: fn(&SuiteConfig, &str) -> f64,
}

pub const REGISTRY: &[SuiteInfo] = &[
    SuiteInfo {
        name: "identity",
        instruments: "difference identity f(T1,R1) - f(T2,R2) = sum_j ((S2*)^j f)(T1,R1)(R1-R2)R2^(j-1) \
                      + sum_j T1^(j-1)(T1-T2)((S1*)^j f)(T2,R2), and the quasicommutator identity with \
                      R1 Q - Q R2 and T1 Q - Q T2 in place of the differences",
        defaults: |c| {
            c.trials = 1000;
            c.degrees = (0..=8).collect();
        },
        trial: identity_trial,
        cap: |c, _| c.tolerance("identity"),
    },
    SuiteInfo {
        name: "vonneumann",
        instruments: "von Neumann inequality ||f(T,R)|| <= max over the torus of |f| for commuting contractions",
        defaults: |c| {
            c.trials = 1000;
            c.dims = vec![1, 2, 3, 4, 6, 8, 12];
            c.degrees = (1..=6).collect();
        },
        trial: vonneumann_trial,
        cap: |c, _| c.tolerance("vonneumann"),
    },
    SuiteInfo {
        name: "shiftsum",
        instruments: "square-function bound sum_{j=1}^n |((S*)^j f)(zeta)|^2 <= C n ||f||_inf^2 on the circle",
        defaults: |c| {
            c.trials = 10_000;
            c.dims = vec![1];
            c.degrees = (1..=64).collect();
            c.schemes = vec![SchemeKind::Diagonal];
        },
        trial: shiftsum_trial,
        cap: |c, _| c.tolerance("shiftsum_cap"),
    },
    SuiteInfo {
        name: "opineq",
        instruments: "row/column S_p bounds for p in [2, inf], the transformer bound ||sum A_j Q B_j||_Sp <= ||Q||_Sp, \
                      gram conditions for families with sum |f_j|^2 <= 1, and the (M1 M2)^(1/2) ||Q||_Sp bound",
        defaults: |c| {
            c.trials = 500;
            c.dims = vec![1, 2, 3, 4, 6, 8];
            c.degrees = (1..=4).collect();
            c.p_values = vec![Exponent(1.0), Exponent(2.0), Exponent(4.0), Exponent::INF];
        },
        trial: opineq_trial,
        cap: |c, check| {
            if check.starts_with("transformer_agreement") {
                c.tolerance("transformer_agreement")
            } else {
                1.0 + c.tolerance("opineq")
            }
        },
    },
    SuiteInfo {
        name: "bernstein",
        instruments: "Bernstein-type inequality ||f(T1,R1) - f(T2,R2)|| <= C n ||f||_inf max(||T1-T2||, ||R1-R2||) \
                      for polynomials of degree at most n in each variable",
        defaults: |c| {
            c.trials = 400;
            c.dims = vec![1, 2, 4, 8, 16];
            c.degrees = vec![1, 2, 4, 8, 16, 32, 64];
        },
        trial: bernstein_trial,
        cap: |c, _| c.tolerance("bernstein_cap"),
    },
    SuiteInfo {
        name: "lipschitz",
        instruments: "operator Lipschitz estimate ||f(T1,R1) - f(T2,R2)|| <= C ||f||_B^1_{inf,1} \
                      max(||T1-T2||, ||R1-R2||) for analytic f",
        defaults: |c| c.degrees = vec![1, 2, 3, 4, 6, 8, 12, 16],
        trial: lipschitz_trial,
        cap: |c, _| c.tolerance("lipschitz_cap"),
    },
    SuiteInfo {
        name: "holder",
        instruments: "operator Hölder estimate ||f(T1,R1) - f(T2,R2)|| <= C ||f||_Lambda_alpha \
                      max(||T1-T2||, ||R1-R2||)^alpha, 0 < alpha < 1",
        defaults: |c| c.degrees = vec![1, 2, 3, 4, 6, 8, 12, 16],
        trial: holder_trial,
        cap: |c, _| c.tolerance("holder_cap"),
    },
    SuiteInfo {
        name: "modulus",
        instruments: "estimate ||f(T1,R1) - f(T2,R2)|| <= C ||f||_Lambda_omega omega_*(max(||T1-T2||, ||R1-R2||)) \
                      for power moduli omega(t) = t^alpha",
        defaults: |c| {
            c.trials = 150;
            c.dims = vec![1, 2, 4, 8];
        },
        trial: modulus_trial,
        cap: |c, _| c.tolerance("modulus_cap"),
    },
    SuiteInfo {
        name: "schatten",
        instruments: "S_p Lipschitz estimate (1 <= p < inf) with the B^1_{inf,1} norm, S_{p/alpha} Hölder estimate \
                      (1 < p < inf), and singular-value decay s_j <= C (1+j)^(-alpha) for p = 1",
        defaults: |c| c.dims = vec![2, 3, 4, 8, 12, 16],
        trial: schatten_trial,
        cap: |c, _| c.tolerance("schatten_cap"),
    },
    SuiteInfo {
        name: "commutator",
        instruments: "quasicommutator Lipschitz estimate ||f(T1,R1)Q - Qf(T2,R2)|| <= C ||f||_B^1_{inf,1} \
                      max(||T1Q-QT2||, ||R1Q-QR2||) and the S_{p/alpha} quasicommutator Hölder estimate \
                      with the ||Q||^(1-alpha) factor (1 < p < inf)",
        defaults: |c| {
            c.dims = vec![2, 3, 4, 8, 12, 16];
            c.p_values = vec![Exponent(2.0), Exponent(4.0)];
        },
        trial: commutator_trial,
        cap: |c, _| c.tolerance("commutator_cap"),
    },
];

pub fn lookup(name: &str) -> Result<&'static SuiteInfo> {
    REGISTRY.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.name).collect()
}

/// Seed of trial `index`, a function of the master seed and the index only.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.random()
}

/// Runs every trial of `cfg` (in parallel) and aggregates the records.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let info = lookup(&cfg.suite)?;
    let per_trial: Vec<Vec<Record>> =
        (0..cfg.trials as u64).into_par_iter().map(|i| run_trial(cfg, info, i)).collect::<Result<_>>()?;
    let records = per_trial.concat();
    Ok(SuiteReport::assemble(cfg.clone(), info.instruments, records, |c| (info.cap)(cfg, c)))
}

/// Re-runs the trial that produced `witness` and returns the matching record.
pub fn replay(cfg: &SuiteConfig, witness: &Record) -> Result<Record> {
    let info = lookup(&cfg.suite)?;
    if witness.suite != cfg.suite {
        return Err(Error::InvalidArgument(format!("witness from `{}`, config for `{}`", witness.suite, cfg.suite)));
    }
    let records = run_trial(cfg, info, witness.trial)?;
    let found = records
        .into_iter()
        .find(|r| r.check == witness.check)
        .ok_or_else(|| Error::InvalidArgument(format!("trial {} has no check `{}`", witness.trial, witness.check)))?;
    if found.seed != witness.seed {
        return Err(Error::InvalidArgument(format!("seed {} does not match master seed {}", witness.seed, cfg.seed)));
    }
    Ok(found)
}

fn run_trial(cfg: &SuiteConfig, info: &SuiteInfo, index: u64) -> Result<Vec<Record>> {
    let seed = trial_seed(cfg.seed, index);
    let mut t = Trial { cfg, index, seed, rng: ChaCha8Rng::seed_from_u64(seed), records: Vec::new() };
    (info.trial)(&mut t)?;
    Ok(t.records)
}

/// One measured check: both sides of a bound and the recorded ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub degenerate: bool,
}

impl Measure {
    /// `lhs / (FLOOR + rhs)`.
    pub fn quotient(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, ratio: lhs / (FLOOR + rhs), degenerate: rhs < FLOOR }
    }

    /// `lhs - rhs`, for checks whose acceptance is an absolute gap.
    pub fn gap(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, ratio: lhs - rhs, degenerate: rhs < FLOOR }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Params {
    dim: Option<usize>,
    degree: Option<usize>,
    scheme: Option<SchemeKind>,
    p: Option<Exponent>,
    alpha: Option<f64>,
    eps: Option<f64>,
}

struct Trial<'a> {
    cfg: &'a SuiteConfig,
    index: u64,
    seed: u64,
    rng: ChaCha8Rng,
    records: Vec<Record>,
}

impl Trial<'_> {
    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.rng.random_range(0..xs.len())]
    }

    /// Schemes are cycled by trial index so every scheme gets its share.
    fn scheme(&self) -> SchemeKind {
        self.cfg.schemes[(self.index % self.cfg.schemes.len() as u64) as usize]
    }

    fn push(&mut self, check: String, p: Params, m: Measure) {
        self.records.push(Record {
            suite: self.cfg.suite.clone(),
            trial: self.index,
            seed: self.seed,
            check,
            dim: p.dim,
            degree: p.degree,
            scheme: p.scheme,
            p: p.p,
            alpha: p.alpha,
            eps: p.eps,
            lhs: m.lhs,
            rhs: m.rhs,
            ratio: m.ratio,
            degenerate: m.degenerate,
        });
    }

    /// A pair and its in-scheme perturbation, plus a polynomial degree.
    fn perturbed_pairs(&mut self) -> Result<(Params, GeneratedPair, GeneratedPair, BiPolynomial)> {
        let kind = self.scheme();
        let dim = self.pick(&self.cfg.dims.clone());
        let eps = self.pick(&self.cfg.epsilons.clone());
        let degree = self.pick(&self.cfg.degrees.clone());
        let g1 = gen_pair_with(kind, dim, &mut self.rng)?;
        let g2 = perturb_pair_with(&g1, eps, &mut self.rng)?;
        let f = random_bipoly(&mut self.rng, degree);
        let params = Params { dim: Some(dim), degree: Some(degree), scheme: Some(kind), eps: Some(eps), ..Params::default() };
        Ok((params, g1, g2, f))
    }
}

fn normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
}

fn unimodular(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random analytic polynomial of degree at most `n` in each variable, drawn
/// from a mix of dense, monomial, one-variable and lacunary shapes.
pub fn random_bipoly(rng: &mut impl Rng, n: usize) -> BiPolynomial {
    if n == 0 {
        return BiPolynomial::constant(normal(rng));
    }
    match rng.random_range(0..5) {
        0 | 1 => BiPolynomial::from_fn(n, n, |_, _| normal(rng)),
        2 => {
            let (a, b) = match rng.random_range(0..4) {
                0 => (n, 0),
                1 => (0, n),
                2 => (n, n),
                _ => (rng.random_range(0..=n), rng.random_range(1..=n)),
            };
            BiPolynomial::monomial(a, b, unimodular(rng))
        }
        3 => {
            let coeffs: Vec<C64> = (0..=n).map(|_| normal(rng)).collect();
            if rng.random() {
                BiPolynomial::from_fn(n, 0, |k, _| coeffs[k])
            } else {
                BiPolynomial::from_fn(0, n, |_, m| coeffs[m])
            }
        }
        _ => {
            // Weierstrass-type sum of dyadic frequencies with decaying weights.
            let mut f = BiPolynomial::zero();
            let mut k = 1;
            while k <= n {
                let w = (k as f64).powf(-0.5);
                let (a, b) = match rng.random_range(0..3) {
                    0 => (k, 0),
                    1 => (0, k),
                    _ => (k, k),
                };
                f = f.add(&BiPolynomial::monomial(a, b, unimodular(rng) * w));
                k *= 2;
            }
            f
        }
    }
}

/// Random one-variable polynomial of degree `n`.
pub fn random_unipoly(rng: &mut impl Rng, n: usize) -> UniPolynomial {
    let coeffs = match rng.random_range(0..5) {
        0 | 1 => (0..=n).map(|_| normal(rng)).collect(),
        2 => (0..=n).map(|_| unimodular(rng)).collect(),
        3 => {
            // Fejér-type ramp, large at z = 1.
            (0..=n).map(|k| C64::new((n + 1 - k) as f64, 0.0)).collect()
        }
        _ => {
            let mut c = vec![C64::new(0.0, 0.0); n + 1];
            c[n] = unimodular(rng);
            c[0] = unimodular(rng);
            c
        }
    };
    UniPolynomial::new(coeffs)
}

/// `Q` with `||Q|| = 1`; the identity a quarter of the time.
fn random_q(rng: &mut impl Rng, d: usize) -> MatrixOperator {
    if rng.random_range(0..4) == 0 {
        return identity(d);
    }
    let g = gaussian_matrix(rng, d, d);
    let n = op_norm(&g);
    g / C64::new(n, 0.0)
}

fn lp() -> LittlewoodPaley {
    LittlewoodPaley::default()
}

fn max_sp(a: &MatrixOperator, b: &MatrixOperator, p: f64) -> Result<f64> {
    Ok(schatten_norm(a, p)?.max(schatten_norm(b, p)?))
}

/// Relative error of the shift identity against the direct difference.
pub fn identity_measure(f: &BiPolynomial, p1: &ContractionPair, p2: &ContractionPair) -> Result<Measure> {
    let direct = difference_direct(f, p1, p2)?;
    let rhs = identity_rhs(f, p1, p2)?;
    Ok(Measure::quotient(op_norm(&(rhs - &direct)), op_norm(&direct)))
}

pub fn quasicommutator_identity_measure(
    f: &BiPolynomial,
    p1: &ContractionPair,
    p2: &ContractionPair,
    q: &MatrixOperator,
) -> Result<Measure> {
    let direct = quasicommutator_direct(f, p1, p2, q)?;
    let rhs = quasicommutator_identity_rhs(f, p1, p2, q)?;
    Ok(Measure::quotient(op_norm(&(rhs - &direct)), op_norm(&direct)))
}

/// `||f(T, R)||` against the torus maximum; the ratio is the gap.
pub fn von_neumann_measure(f: &BiPolynomial, pair: &ContractionPair) -> Measure {
    Measure::gap(op_norm(&apply(f, pair)), sup_norm_torus(f, DEFAULT_OVERSAMPLE).grid_max)
}

/// `max_zeta sum_{j<=n} |(S*)^j f(zeta)|^2` over a `grid`-point circle mesh
/// against `n ||f||_inf^2`.
pub fn shift_sum_measure(f: &UniPolynomial, n: usize, grid: usize) -> Measure {
    let h = std::f64::consts::TAU / grid as f64;
    let lhs = (0..grid).map(|k| f.shift_sum_sq(n, C64::from_polar(1.0, k as f64 * h))).fold(0.0, f64::max);
    let sup = f.sup_norm(DEFAULT_OVERSAMPLE).grid_max;
    Measure::quotient(lhs, n as f64 * sup * sup)
}

pub fn bernstein_measure(f: &BiPolynomial, n: usize, p1: &ContractionPair, p2: &ContractionPair) -> Result<Measure> {
    let lhs = op_norm(&difference_direct(f, p1, p2)?);
    let sup = sup_norm_torus(f, DEFAULT_OVERSAMPLE).grid_max;
    Ok(Measure::quotient(lhs, n as f64 * sup * p1.distance(p2)?))
}

pub fn lipschitz_measure(f: &BiPolynomial, p1: &ContractionPair, p2: &ContractionPair) -> Result<Measure> {
    let lhs = op_norm(&difference_direct(f, p1, p2)?);
    let norm = lp().lipschitz_besov_norm(&TrigPolynomial2D::from(f))?;
    Ok(Measure::quotient(lhs, norm * p1.distance(p2)?))
}

pub fn holder_measure(f: &BiPolynomial, alpha: f64, p1: &ContractionPair, p2: &ContractionPair) -> Result<Measure> {
    let lhs = op_norm(&difference_direct(f, p1, p2)?);
    let norm = lp().holder_norm(&TrigPolynomial2D::from(f), alpha)?;
    Ok(Measure::quotient(lhs, norm * p1.distance(p2)?.powf(alpha)))
}

pub fn modulus_measure(
    f: &BiPolynomial,
    omega: &ModulusOfContinuity,
    grid: usize,
    p1: &ContractionPair,
    p2: &ContractionPair,
) -> Result<Measure> {
    let lhs = op_norm(&difference_direct(f, p1, p2)?);
    let semi = lambda_omega_seminorm(f, omega, grid)?;
    Ok(Measure::quotient(lhs, semi * omega_star(omega, p1.distance(p2)?)?))
}

/// `||f(T1,R1) - f(T2,R2)||_Sp` against `||f||_B max ||. - .||_Sp`.
pub fn schatten_lipschitz_measure(
    f: &BiPolynomial,
    p: f64,
    p1: &ContractionPair,
    p2: &ContractionPair,
) -> Result<Measure> {
    let lhs = schatten_norm(&difference_direct(f, p1, p2)?, p)?;
    let norm = lp().lipschitz_besov_norm(&TrigPolynomial2D::from(f))?;
    Ok(Measure::quotient(lhs, norm * max_sp(&(p1.t() - p2.t()), &(p1.r() - p2.r()), p)?))
}

/// `||f(T1,R1) - f(T2,R2)||_{S_{p/alpha}}` against `||f||_Lambda_alpha max ||. - .||_Sp^alpha`.
pub fn schatten_holder_measure(
    f: &BiPolynomial,
    p: f64,
    alpha: f64,
    p1: &ContractionPair,
    p2: &ContractionPair,
) -> Result<Measure> {
    let lhs = schatten_norm(&difference_direct(f, p1, p2)?, p / alpha)?;
    let norm = lp().holder_norm(&TrigPolynomial2D::from(f), alpha)?;
    Ok(Measure::quotient(lhs, norm * max_sp(&(p1.t() - p2.t()), &(p1.r() - p2.r()), p)?.powf(alpha)))
}

/// Smallest `C` with `s_j(f(T1,R1) - f(T2,R2)) <= C (1+j)^(-alpha)`, against
/// `||f||_Lambda_alpha max ||. - .||_S1^alpha`.
pub fn singular_decay_measure(
    f: &BiPolynomial,
    alpha: f64,
    p1: &ContractionPair,
    p2: &ContractionPair,
) -> Result<Measure> {
    let lhs = decay_fit(&singular_values(&difference_direct(f, p1, p2)?), alpha)?;
    let norm = lp().holder_norm(&TrigPolynomial2D::from(f), alpha)?;
    Ok(Measure::quotient(lhs, norm * max_sp(&(p1.t() - p2.t()), &(p1.r() - p2.r()), 1.0)?.powf(alpha)))
}

pub fn quasicommutator_lipschitz_measure(
    f: &BiPolynomial,
    p1: &ContractionPair,
    p2: &ContractionPair,
    q: &MatrixOperator,
) -> Result<Measure> {
    let lhs = op_norm(&quasicommutator_direct(f, p1, p2, q)?);
    let norm = lp().lipschitz_besov_norm(&TrigPolynomial2D::from(f))?;
    let dt = p1.t() * q - q * p2.t();
    let dr = p1.r() * q - q * p2.r();
    Ok(Measure::quotient(lhs, norm * op_norm(&dt).max(op_norm(&dr))))
}

pub fn quasicommutator_holder_measure(
    f: &BiPolynomial,
    p: f64,
    alpha: f64,
    p1: &ContractionPair,
    p2: &ContractionPair,
    q: &MatrixOperator,
) -> Result<Measure> {
    let lhs = schatten_norm(&quasicommutator_direct(f, p1, p2, q)?, p / alpha)?;
    let norm = lp().holder_norm(&TrigPolynomial2D::from(f), alpha)?;
    let dt = p1.t() * q - q * p2.t();
    let dr = p1.r() * q - q * p2.r();
    let rhs = norm * max_sp(&dt, &dr, p)?.powf(alpha) * op_norm(q).powf(1.0 - alpha);
    Ok(Measure::quotient(lhs, rhs))
}

fn identity_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, perturbed, f) = t.perturbed_pairs()?;
    // Half the trials compare against an unrelated pair of the same dimension.
    let g2 = if t.rng.random() { perturbed } else { gen_pair_with(g1.kind, g1.dim(), &mut t.rng)? };
    let q = random_q(&mut t.rng, g1.dim());
    let m = identity_measure(&f, &g1.pair, &g2.pair)?;
    t.push("difference_identity".into(), params, m);
    let m = quasicommutator_identity_measure(&f, &g1.pair, &g2.pair, &q)?;
    t.push("quasicommutator_identity".into(), params, m);
    Ok(())
}

fn vonneumann_trial(t: &mut Trial<'_>) -> Result<()> {
    let kind = t.scheme();
    let dim = t.pick(&t.cfg.dims.clone());
    let degree = t.pick(&t.cfg.degrees.clone());
    let g = gen_pair_with(kind, dim, &mut t.rng)?;
    let f = random_bipoly(&mut t.rng, degree);
    // Normalized to unit sup norm so the gap is a relative quantity.
    let sup = sup_norm_torus(&f, DEFAULT_OVERSAMPLE).grid_max;
    let f = if sup > 0.0 { f.scale(C64::new(1.0 / sup, 0.0)) } else { f };
    let params = Params { dim: Some(dim), degree: Some(degree), scheme: Some(kind), ..Params::default() };
    t.push("von_neumann".into(), params, von_neumann_measure(&f, &g.pair));
    Ok(())
}

fn shiftsum_trial(t: &mut Trial<'_>) -> Result<()> {
    let n = t.pick(&t.cfg.degrees.clone());
    let f = random_unipoly(&mut t.rng, n);
    let params = Params { degree: Some(n), ..Params::default() };
    t.push("square_function".into(), params, shift_sum_measure(&f, n, ZETA_GRID));
    Ok(())
}

fn opineq_trial(t: &mut Trial<'_>) -> Result<()> {
    let kind = t.scheme();
    let dim = t.pick(&t.cfg.dims.clone());
    let degree = t.pick(&t.cfg.degrees.clone());
    let len = t.rng.random_range(1..=4);
    let g1 = gen_pair_with(kind, dim, &mut t.rng)?;
    let g2 = gen_pair_with(kind, dim, &mut t.rng)?;
    let polys1 = PolynomialFamily::new((0..len).map(|_| random_bipoly(&mut t.rng, degree)).collect())?;
    let polys2 = PolynomialFamily::new((0..len).map(|_| random_bipoly(&mut t.rng, degree)).collect())?;
    let q = gaussian_matrix(&mut t.rng, dim, dim);
    let fam1 = family_from_polynomials(&polys1, &g1.pair, true)?;
    let fam2 = family_from_polynomials(&polys2, &g2.pair, true)?;
    let base = Params { dim: Some(dim), degree: Some(degree), scheme: Some(kind), ..Params::default() };

    let (a, b) = gram_norms(&fam1);
    let (c, d) = gram_norms(&fam2);
    t.push("gram_conditions".into(), base, Measure::quotient(a.max(b).max(c).max(d), 1.0));

    let direct = transformer(&fam1, &q, &fam2)?;
    for p in t.cfg.p_values.clone() {
        let params = Params { p: Some(p), ..base };
        let qn = schatten_norm(&q, p.0)?;
        if p.0 >= 2.0 {
            let lhs = schatten_norm(&row_block(&fam1, &q)?, p.0)?.max(schatten_norm(&col_block(&fam2, &q)?, p.0)?);
            t.push(format!("row_column_bound p={p}"), params, Measure::quotient(lhs, qn));
        }
        t.push(format!("transformer_bound p={p}"), params, Measure::quotient(schatten_norm(&direct, p.0)?, qn));
        let fact = transformer_factorized(&fam1, &q, &fam2, p.0)?;
        t.push(
            format!("transformer_agreement p={p}"),
            params,
            Measure::quotient(op_norm(&(fact - &direct)), op_norm(&direct)),
        );
        let bound = bilinear_bound(&polys1, &polys2, &g1.pair, &g2.pair, &q, p.0)?;
        t.push(format!("bilinear_bound p={p}"), params, Measure::quotient(bound.lhs, bound.bound));
    }
    Ok(())
}

fn bernstein_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    let n = params.degree.unwrap_or(0);
    let m = bernstein_measure(&f, n, &g1.pair, &g2.pair)?;
    t.push("bernstein".into(), params, m);
    Ok(())
}

fn lipschitz_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    let m = lipschitz_measure(&f, &g1.pair, &g2.pair)?;
    t.push("lipschitz".into(), params, m);
    Ok(())
}

fn holder_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    for alpha in t.cfg.alpha_values.clone() {
        let m = holder_measure(&f, alpha, &g1.pair, &g2.pair)?;
        t.push(format!("holder alpha={alpha}"), Params { alpha: Some(alpha), ..params }, m);
    }
    Ok(())
}

/// Mesh size for the seminorm: at least 32 and four points per frequency.
pub fn seminorm_grid(degree: usize) -> usize {
    32.max(4 * (degree + 1))
}

fn modulus_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    let grid = seminorm_grid(params.degree.unwrap_or(0));
    for alpha in t.cfg.alpha_values.clone() {
        let omega = ModulusOfContinuity::power(alpha)?;
        let m = modulus_measure(&f, &omega, grid, &g1.pair, &g2.pair)?;
        t.push(format!("modulus alpha={alpha}"), Params { alpha: Some(alpha), ..params }, m);
    }
    Ok(())
}

fn schatten_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    for p in t.cfg.p_values.clone() {
        if p.0.is_infinite() {
            continue;
        }
        let m = schatten_lipschitz_measure(&f, p.0, &g1.pair, &g2.pair)?;
        t.push(format!("schatten_lipschitz p={p}"), Params { p: Some(p), ..params }, m);
        for alpha in t.cfg.alpha_values.clone() {
            let params = Params { p: Some(p), alpha: Some(alpha), ..params };
            if p.0 > 1.0 {
                let m = schatten_holder_measure(&f, p.0, alpha, &g1.pair, &g2.pair)?;
                t.push(format!("schatten_holder p={p} alpha={alpha}"), params, m);
            } else {
                let m = singular_decay_measure(&f, alpha, &g1.pair, &g2.pair)?;
                t.push(format!("singular_decay alpha={alpha}"), params, m);
            }
        }
    }
    Ok(())
}

fn commutator_trial(t: &mut Trial<'_>) -> Result<()> {
    let (params, g1, g2, f) = t.perturbed_pairs()?;
    let q = random_q(&mut t.rng, g1.dim());
    let m = quasicommutator_lipschitz_measure(&f, &g1.pair, &g2.pair, &q)?;
    t.push("quasicommutator_lipschitz".into(), params, m);
    for p in t.cfg.p_values.clone() {
        if !(p.0 > 1.0 && p.0.is_finite()) {
            continue;
        }
        for alpha in t.cfg.alpha_values.clone() {
            let m = quasicommutator_holder_measure(&f, p.0, alpha, &g1.pair, &g2.pair, &q)?;
            t.push(
                format!("quasicommutator_holder p={p} alpha={alpha}"),
                Params { p: Some(p), alpha: Some(alpha), ..params },
                m,
            );
        }
    }
    Ok(())
}
