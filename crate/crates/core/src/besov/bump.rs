use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)})` on `(0, 1)`, clamped to 0 and 1
/// outside. Smooth, with every derivative vanishing at both ends.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The dyadic bump `w`: nonnegative, supported in `[1/2, 2]`, with
/// `w(s) + w(s/2) = 1` on `[1, 2]`.
#[derive(Clone)]
pub struct DyadicBump {
    profile: Option<Profile>,
}

impl fmt::Debug for DyadicBump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.profile {
            None => f.write_str("DyadicBump(canonical)"),
            Some(_) => f.write_str("DyadicBump(custom)"),
        }
    }
}

impl Default for DyadicBump {
    fn default() -> Self {
        make_bump()
    }
}

/// Canonical bump: `w(s) = sigma(2s - 1)` on `[1/2, 1]`, `1 - sigma(s - 1)` on
/// `[1, 2]`, zero elsewhere, with `sigma` the exponential [`smooth_step`].
pub fn make_bump() -> DyadicBump {
    DyadicBump { profile: None }
}

impl DyadicBump {
    /// Wraps a user profile after checking the bump invariants on a fine grid.
    pub fn custom(w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let bump = Self { profile: Some(Arc::new(w)) };
        bump.validate()?;
        Ok(bump)
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.profile {
            Some(w) => w(s),
            None => {
                if !(0.5..=2.0).contains(&s) {
                    0.0
                } else if s <= 1.0 {
                    smooth_step(2.0 * s - 1.0)
                } else {
                    1.0 - smooth_step(s - 1.0)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        const N: usize = 2000;
        for i in 0..=N {
            let s = 4.0 * i as f64 / N as f64;
            let v = self.eval(s);
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidBump(format!("w({s}) = {v} outside [0, 1]")));
            }
            if !(0.5..=2.0).contains(&s) && v != 0.0 {
                return Err(Error::InvalidBump(format!("w({s}) = {v} outside the support [1/2, 2]")));
            }
            if (1.0..=2.0).contains(&s) {
                let defect = (v + self.eval(s / 2.0) - 1.0).abs();
                if defect > 1e-12 {
                    return Err(Error::InvalidBump(format!("w({s}) + w({}) - 1 = {defect:e}", s / 2.0)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forced_values() {
        let w = make_bump();
        assert_eq!(w.eval(1.0), 1.0);
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(2.0), 0.0);
        assert_eq!(w.eval(0.25), 0.0);
        assert_eq!(w.eval(3.0), 0.0);
        assert!((w.eval(1.5) + w.eval(0.75) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_passes_validation() {
        make_bump().validate().unwrap();
    }

    #[test]
    fn rejects_bumps_that_break_the_relation() {
        let tent = |s: f64| if (0.5..=2.0).contains(&s) { 1.0 - (s - 1.0).abs().min(1.0) } else { 0.0 };
        assert!(matches!(DyadicBump::custom(tent), Err(Error::InvalidBump(_))));
        let wide = |s: f64| if (0.25..=2.0).contains(&s) { 0.5 } else { 0.0 };
        assert!(DyadicBump::custom(wide).is_err());
        // Piecewise-linear bump satisfying every invariant.
        let linear = |s: f64| {
            if (0.5..=1.0).contains(&s) {
                2.0 * s - 1.0
            } else if (1.0..=2.0).contains(&s) {
                2.0 - s
            } else {
                0.0
            }
        };
        assert!(DyadicBump::custom(linear).is_ok());
    }

    #[test]
    fn smooth_step_is_monotone_and_symmetric() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let v = smooth_step(x);
            assert!(v >= prev);
            assert!((v + smooth_step(1.0 - x) - 1.0).abs() < 1e-15);
            prev = v;
        }
    }
}
