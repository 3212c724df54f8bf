//! Uniform-grid evaluation and maximization of trigonometric polynomials on the
//! two-torus.
//!
//! A trigonometric polynomial is handled here as a list of Fourier terms
//! `((j1, j2), c)` representing `sum c * exp(i (j1 t1 + j2 t2))`. Grid values are
//! produced with a two-pass inverse FFT, which is exact (no aliasing) as long as
//! the grid size along each axis exceeds the frequency span along that axis.

use std::f64::consts::TAU;

use rustfft::FftPlanner;

use crate::C64;

/// One Fourier term: frequency pair and coefficient.
pub type Term = ((i64, i64), C64);

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const POLISH_ROUNDS: usize = 8;
const POLISH_CANDIDATES: usize = 4;

/// Smallest grid length along each axis that evaluates `terms` without aliasing.
pub fn min_grid(terms: &[Term]) -> (usize, usize) {
    let span = |sel: fn(&Term) -> i64| {
        let lo = terms.iter().map(sel).min().unwrap_or(0);
        let hi = terms.iter().map(sel).max().unwrap_or(0);
        (hi - lo) as usize + 1
    };
    (span(|t| t.0 .0), span(|t| t.0 .1))
}

/// Values at `(2 pi k1 / n1, 2 pi k2 / n2)`, row-major with index `k1 * n2 + k2`.
///
/// Panics if the grid is too small to resolve the frequency span.
pub fn grid_values(terms: &[Term], n1: usize, n2: usize) -> Vec<C64> {
    let (need1, need2) = min_grid(terms);
    assert!(
        n1 >= need1 && n2 >= need2,
        "grid {n1}x{n2} aliases frequency span {need1}x{need2}"
    );
    let mut buf = vec![C64::new(0.0, 0.0); n1 * n2];
    for &((j1, j2), c) in terms {
        let a = j1.rem_euclid(n1 as i64) as usize;
        let b = j2.rem_euclid(n2 as i64) as usize;
        buf[a * n2 + b] += c;
    }

    let mut planner = FftPlanner::<f64>::new();
    let rows = planner.plan_fft_inverse(n2);
    for row in buf.chunks_exact_mut(n2) {
        rows.process(row);
    }
    let cols = planner.plan_fft_inverse(n1);
    let mut column = vec![C64::new(0.0, 0.0); n1];
    for b in 0..n2 {
        for a in 0..n1 {
            column[a] = buf[a * n2 + b];
        }
        cols.process(&mut column);
        for a in 0..n1 {
            buf[a * n2 + b] = column[a];
        }
    }
    buf
}

/// Direct evaluation at the angles `(t1, t2)`.
pub fn eval_terms(terms: &[Term], t1: f64, t2: f64) -> C64 {
    terms
        .iter()
        .map(|&((j1, j2), c)| c * C64::from_polar(1.0, j1 as f64 * t1 + j2 as f64 * t2))
        .sum()
}

/// Maximizes a unimodal function on `[lo, hi]`; returns `(argmax, max)`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximum of a real function sampled on an `n1 x n2` torus grid, refined by
/// alternating golden-section searches around the best grid points.
///
/// `samples` are the function values at the grid points (same layout as
/// [`grid_values`]); `eval` evaluates the function at arbitrary angles. The
/// result never exceeds the true maximum, since every candidate is an actual
/// function value.
pub fn polished_max(
    samples: &[f64],
    n1: usize,
    n2: usize,
    eval: impl Fn(f64, f64) -> f64,
) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let top = POLISH_CANDIDATES.min(order.len());
    order.select_nth_unstable_by(top - 1, |&a, &b| samples[b].total_cmp(&samples[a]));

    let h1 = TAU / n1 as f64;
    let h2 = TAU / n2 as f64;
    let mut best = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for &idx in &order[..top] {
        let mut x = (idx / n2) as f64 * h1;
        let mut y = (idx % n2) as f64 * h2;
        let mut val = samples[idx];
        for _ in 0..POLISH_ROUNDS {
            let before = val;
            let (nx, vx) = golden_max(|t| eval(t, y), x - h1, x + h1);
            if vx > val {
                x = nx;
                val = vx;
            }
            let (ny, vy) = golden_max(|t| eval(x, t), y - h2, y + h2);
            if vy > val {
                y = ny;
                val = vy;
            }
            if val - before <= 1e-15 * val.abs() {
                break;
            }
        }
        best = best.max(val);
    }
    best
}

/// Grid-maximum of `|p|` for the trigonometric polynomial given by `terms`,
/// polished by local search. Each axis uses `oversample * span` points.
pub fn sup_abs(terms: &[Term], oversample: usize) -> f64 {
    if terms.iter().all(|t| t.1 == C64::new(0.0, 0.0)) {
        return 0.0;
    }
    let (s1, s2) = min_grid(terms);
    let n1 = oversample.max(1) * s1;
    let n2 = oversample.max(1) * s2;
    let abs: Vec<f64> = grid_values(terms, n1, n2).iter().map(|z| z.norm()).collect();
    polished_max(&abs, n1, n2, |a, b| eval_terms(terms, a, b).norm())
}

/// Grid mean of `|p|^p_exp`, i.e. the `L^p` quadrature on an `n x n` grid.
pub fn mean_pow(terms: &[Term], n1: usize, n2: usize, p_exp: f64) -> f64 {
    let vals = grid_values(terms, n1, n2);
    vals.iter().map(|z| z.norm().powf(p_exp)).sum::<f64>() / vals.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_direct_evaluation() {
        let terms: Vec<Term> = vec![
            ((0, 0), C64::new(1.0, 0.5)),
            ((3, -2), C64::new(-0.25, 2.0)),
            ((-1, 4), C64::new(0.0, -1.0)),
        ];
        let (n1, n2) = (9, 11);
        let vals = grid_values(&terms, n1, n2);
        for k1 in 0..n1 {
            for k2 in 0..n2 {
                let t1 = TAU * k1 as f64 / n1 as f64;
                let t2 = TAU * k2 as f64 / n2 as f64;
                let d = eval_terms(&terms, t1, t2) - vals[k1 * n2 + k2];
                assert!(d.norm() < 1e-12);
            }
        }
    }

    #[test]
    #[should_panic(expected = "aliases")]
    fn undersized_grid_panics() {
        let terms: Vec<Term> = vec![((0, 0), C64::new(1.0, 0.0)), ((5, 0), C64::new(1.0, 0.0))];
        grid_values(&terms, 4, 1);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|t| 1.0 - (t - 0.3) * (t - 0.3), -1.0, 1.0);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polish_recovers_off_grid_peak() {
        // |1 + e^{i(t1 - 0.1)}| peaks at t1 = 0.1, which is not a grid angle.
        let terms: Vec<Term> = vec![
            ((0, 0), C64::new(1.0, 0.0)),
            ((1, 0), C64::from_polar(1.0, -0.1)),
        ];
        assert!((sup_abs(&terms, 4) - 2.0).abs() < 1e-12);
    }
}
