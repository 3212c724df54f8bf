use rayon::prelude::*;

use crate::bipoly::TorusFunction;
use crate::error::{Error, Result};
use crate::torus;

/// A modulus of continuity: continuous, nondecreasing, subadditive, `w(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulusOfContinuity {
    /// `t^alpha`, `0 < alpha <= 1`.
    Power { alpha: f64 },
    /// Concave piecewise-linear interpolant through `knots` (starting at the
    /// origin), continued past the last knot `M` as `w(M) (t / M)^tail`.
    Tabulated { knots: Vec<(f64, f64)>, tail: f64 },
}

impl ModulusOfContinuity {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidModulus(format!("power exponent {alpha} not in (0, 1]")));
        }
        Ok(Self::Power { alpha })
    }

    /// Knots `(t_i, w_i)` with `0 < t_1 < t_2 < ...` and `w_i > 0`; the origin
    /// is prepended. The interpolant must be concave and nondecreasing. The tail
    /// exponent is the log-log slope of the last two knots, clamped to `[0, 1]`.
    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidModulus("need at least two knots".into()));
        }
        let mut knots = Vec::with_capacity(points.len() + 1);
        knots.push((0.0, 0.0));
        knots.extend_from_slice(points);
        let mut prev_slope = f64::INFINITY;
        for w in knots.windows(2) {
            let ((t0, w0), (t1, w1)) = (w[0], w[1]);
            if !(t1 > t0) || !t1.is_finite() || !w1.is_finite() {
                return Err(Error::InvalidModulus("knot abscissae must increase".into()));
            }
            if !(w1 > 0.0) || w1 < w0 {
                return Err(Error::InvalidModulus("knot values must be positive and nondecreasing".into()));
            }
            let slope = (w1 - w0) / (t1 - t0);
            if slope > prev_slope * (1.0 + 1e-9) + 1e-15 {
                return Err(Error::InvalidModulus(format!("interpolant is not concave near t = {t0}")));
            }
            prev_slope = slope;
        }
        let n = knots.len();
        let ((ta, wa), (tb, wb)) = (knots[n - 2], knots[n - 1]);
        let tail = if ta > 0.0 { ((wb / wa).ln() / (tb / ta).ln()).clamp(0.0, 1.0) } else { 1.0 };
        Ok(Self::Tabulated { knots, tail })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Power { alpha } => t.powf(*alpha),
            Self::Tabulated { knots, tail } => {
                let (tm, wm) = *knots.last().expect("validated knots");
                if t >= tm {
                    return wm * (t / tm).powf(*tail);
                }
                let i = knots.partition_point(|k| k.0 <= t);
                let ((t0, w0), (t1, w1)) = (knots[i - 1], knots[i]);
                w0 + (w1 - w0) * (t - t0) / (t1 - t0)
            }
        }
    }
}

fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson_step(f, a, fa, m, fm);
    let (rm, frm, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson_step(&f, a, fa, b, fb);
    simpson_rec(&f, a, fa, b, fb, m, fm, whole, tol, 40)
}

const REL_TOL: f64 = 1e-8;

/// `w_*(s) = s * int_s^inf w(t) / t^2 dt`.
///
/// Power moduli use the closed form `s^alpha / (1 - alpha)`. Tabulated moduli
/// are integrated knot interval by knot interval on `[s, M]`, with the power
/// tail past `M` integrated in closed form.
pub fn omega_star(omega: &ModulusOfContinuity, s: f64) -> Result<f64> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("omega_* needs s >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    match omega {
        ModulusOfContinuity::Power { alpha } => {
            if *alpha >= 1.0 {
                return Err(Error::Divergent(format!("int_s^inf t^({alpha} - 2) dt = inf")));
            }
            Ok(s.powf(*alpha) / (1.0 - alpha))
        }
        ModulusOfContinuity::Tabulated { knots, tail } => {
            if *tail >= 1.0 {
                return Err(Error::Divergent("linear growth past the last knot".into()));
            }
            let (tm, wm) = *knots.last().expect("validated knots");
            if s >= tm {
                return Ok(omega.eval(s) / (1.0 - tail));
            }
            let integrand = |t: f64| omega.eval(t) / (t * t);
            let tail_part = wm / (tm * (1.0 - tail));
            let mut body = 0.0;
            let start = knots.partition_point(|k| k.0 <= s);
            let mut lo = s;
            for &(t, _) in &knots[start..] {
                body += adaptive_simpson(integrand, lo, t, REL_TOL * 1e-3 * tail_part);
                lo = t;
            }
            Ok(s * (body + tail_part))
        }
    }
}

/// Generic quadrature route for `w_*(s)`, usable with any modulus: dyadic
/// intervals `[s 2^k, s 2^(k+1)]` integrated adaptively until the interval
/// contributions settle into a geometric decay, whose remainder is summed in
/// closed form.
pub fn omega_star_quadrature(omega: &ModulusOfContinuity, s: f64) -> Result<f64> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("omega_* needs s >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let integrand = |t: f64| omega.eval(t) / (t * t);
    let mut sum = 0.0;
    let mut prev_term = f64::NAN;
    let mut prev_ratio = f64::NAN;
    let mut lo = s;
    for k in 0..400 {
        let hi = 2.0 * lo;
        let term = adaptive_simpson(integrand, lo, hi, 1e-14 * omega.eval(lo) / lo);
        sum += term;
        if term == 0.0 {
            return Ok(s * sum);
        }
        let ratio = term / prev_term;
        if k >= 4 && (ratio - prev_ratio).abs() <= 1e-10 {
            if ratio >= 1.0 - 1e-9 {
                return Err(Error::Divergent(format!("dyadic contributions decay at ratio {ratio}")));
            }
            return Ok(s * (sum + term * ratio / (1.0 - ratio)));
        }
        prev_term = term;
        prev_ratio = ratio;
        lo = hi;
    }
    Err(Error::Divergent("dyadic contributions did not settle".into()))
}

/// Grid estimate of `sup |f(z) - f(u)| / w(max_i |z_i - u_i|)` over all pairs
/// of distinct points of the `grid x grid` torus mesh. A lower bound of the
/// true seminorm that can only grow when the mesh is refined by an integer
/// factor.
pub fn lambda_omega_seminorm<F: TorusFunction + ?Sized>(
    f: &F,
    omega: &ModulusOfContinuity,
    grid: usize,
) -> Result<f64> {
    if grid < 8 {
        return Err(Error::InvalidArgument(format!("seminorm grid {grid} < 8")));
    }
    let terms = f.fourier_terms();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let (s1, s2) = torus::min_grid(&terms);
    let values = if grid >= s1 && grid >= s2 {
        torus::grid_values(&terms, grid, grid)
    } else {
        let h = std::f64::consts::TAU / grid as f64;
        (0..grid * grid)
            .map(|i| torus::eval_terms(&terms, (i / grid) as f64 * h, (i % grid) as f64 * h))
            .collect()
    };

    // Chord length |e^{ia} - e^{ib}| depends only on the index difference.
    let chord: Vec<f64> =
        (0..grid).map(|k| 2.0 * (std::f64::consts::PI * k as f64 / grid as f64).sin().abs()).collect();
    let mut inv_weight = vec![0.0; grid * grid];
    for d1 in 0..grid {
        for d2 in 0..grid {
            if d1 + d2 > 0 {
                inv_weight[d1 * grid + d2] = omega.eval(chord[d1].max(chord[d2])).recip();
            }
        }
    }

    let n = grid * grid;
    let best = (0..n)
        .into_par_iter()
        .map(|a| {
            let (a1, a2) = (a / grid, a % grid);
            let va = values[a];
            let mut local = 0.0f64;
            for b in a + 1..n {
                let (b1, b2) = (b / grid, b % grid);
                let d1 = (a1 + grid - b1) % grid;
                let d2 = (a2 + grid - b2) % grid;
                local = local.max((va - values[b]).norm() * inv_weight[d1 * grid + d2]);
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
