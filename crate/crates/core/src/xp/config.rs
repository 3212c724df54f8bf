use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pairs::SchemeKind;

use super::suites;

/// A Schatten or Lebesgue exponent in `[1, inf]`. Serialized as a number, or
/// as the string `"inf"` for infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(pub f64);

impl Exponent {
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" | "Infinity" => Ok(Exponent::INF),
                    _ => v.parse().map(Exponent).map_err(|_| E::custom(format!("bad exponent `{v}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Scheme entry in a config: a bare kind name or `{"kind": ...}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum SchemeEntry {
    Name(SchemeKind),
    Object { kind: SchemeKind },
}

impl From<SchemeEntry> for SchemeKind {
    fn from(e: SchemeEntry) -> Self {
        match e {
            SchemeEntry::Name(k) | SchemeEntry::Object { kind: k } => k,
        }
    }
}

/// Fully resolved parameters of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub degrees: Vec<usize>,
    pub schemes: Vec<SchemeKind>,
    pub p_values: Vec<Exponent>,
    pub alpha_values: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

/// A config document. Every field is optional; missing fields keep the
/// suite's defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub suite: Option<String>,
    pub trials: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub degrees: Option<Vec<usize>>,
    #[serde(default, deserialize_with = "scheme_list")]
    pub schemes: Option<Vec<SchemeKind>>,
    pub p_values: Option<Vec<Exponent>>,
    pub alpha_values: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn scheme_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<SchemeKind>>, D::Error> {
    let raw: Option<Vec<SchemeEntry>> = Option::deserialize(d)?;
    Ok(raw.map(|v| v.into_iter().map(SchemeKind::from).collect()))
}

impl ConfigOverlay {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults of `suite` with this overlay's fields applied, validated.
    pub fn resolve(&self, suite: &str) -> Result<SuiteConfig> {
        let mut cfg = SuiteConfig::defaults(suite)?;
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = &self.dims {
            cfg.dims = v.clone();
        }
        if let Some(v) = &self.degrees {
            cfg.degrees = v.clone();
        }
        if let Some(v) = &self.schemes {
            cfg.schemes = v.clone();
        }
        if let Some(v) = &self.p_values {
            cfg.p_values = v.clone();
        }
        if let Some(v) = &self.alpha_values {
            cfg.alpha_values = v.clone();
        }
        if let Some(v) = &self.epsilons {
            cfg.epsilons = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        for (k, v) in &self.tolerances {
            if !suites::TOLERANCE_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("unknown tolerance `{k}`")));
            }
            cfg.tolerances.insert(k.clone(), *v);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const DEFAULT_SEED: u64 = 20_240_917;

impl SuiteConfig {
    /// Default population of a registered suite.
    pub fn defaults(suite: &str) -> Result<Self> {
        let info = suites::lookup(suite)?;
        let mut cfg = SuiteConfig {
            suite: info.name.to_string(),
            trials: 300,
            dims: vec![1, 2, 3, 4, 6, 8, 12, 16],
            degrees: (1..=8).collect(),
            schemes: SchemeKind::ALL.to_vec(),
            p_values: vec![Exponent(1.0), Exponent(2.0), Exponent(4.0)],
            alpha_values: vec![0.25, 0.5, 0.75],
            epsilons: vec![1e-3, 1e-2, 0.1, 0.5],
            seed: DEFAULT_SEED,
            tolerances: BTreeMap::new(),
        };
        (info.defaults)(&mut cfg);
        Ok(cfg)
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances
            .get(key)
            .copied()
            .or_else(|| suites::default_tolerance(key))
            .unwrap_or(10.0)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        suites::lookup(&self.suite)?;
        if self.trials == 0 {
            return err("trials must be >= 1".into());
        }
        let lists = [
            ("dims", self.dims.is_empty()),
            ("degrees", self.degrees.is_empty()),
            ("schemes", self.schemes.is_empty()),
            ("p_values", self.p_values.is_empty()),
            ("alpha_values", self.alpha_values.is_empty()),
            ("epsilons", self.epsilons.is_empty()),
        ];
        for (name, empty) in lists {
            if empty {
                return err(format!("`{name}` must not be empty"));
            }
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > 256) {
            return err(format!("dimension {d} outside 1..=256"));
        }
        if let Some(n) = self.degrees.iter().find(|&&n| n > 512) {
            return err(format!("degree {n} exceeds 512"));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(p.0 >= 1.0)) {
            return err(format!("exponent {p} outside [1, inf]"));
        }
        if let Some(a) = self.alpha_values.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return err(format!("alpha {a} outside (0, 1)"));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e >= 0.0 && e.is_finite())) {
            return err(format!("epsilon {e} must be finite and >= 0"));
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return err(format!("tolerance `{k}` = {v} must be finite and > 0"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_suite_has_valid_defaults() {
        for info in suites::REGISTRY {
            SuiteConfig::defaults(info.name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn overlay_fields_replace_defaults() {
        let o = ConfigOverlay::from_json(
            r#"{"trials": 5, "schemes": ["poly", {"kind": "diagonal"}], "p_values": [2, "inf"], "tolerances": {"identity": 1e-8}}"#,
        )
        .unwrap();
        let cfg = o.resolve("identity").unwrap();
        assert_eq!(cfg.trials, 5);
        assert_eq!(cfg.schemes, vec![SchemeKind::Poly, SchemeKind::Diagonal]);
        assert_eq!(cfg.p_values, vec![Exponent(2.0), Exponent::INF]);
        assert_eq!(cfg.tolerance("identity"), 1e-8);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            r#"{"trials": 0}"#,
            r#"{"dims": []}"#,
            r#"{"epsilons": []}"#,
            r#"{"alpha_values": [1.0]}"#,
            r#"{"p_values": [0.5]}"#,
            r#"{"epsilons": [-0.1]}"#,
            r#"{"tolerances": {"nonsense": 1.0}}"#,
            r#"{"unknown_field": 3}"#,
            r#"{"trials": "many"}"#,
        ];
        for text in bad {
            let res = ConfigOverlay::from_json(text).and_then(|o| o.resolve("bernstein"));
            assert!(matches!(res, Err(Error::Config(_))), "{text} accepted");
        }
        assert!(matches!(SuiteConfig::defaults("nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = SuiteConfig::defaults("opineq").unwrap();
        let back: SuiteConfig = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
