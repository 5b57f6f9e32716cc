use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::param_core::{fmt_rat, Cuspidal, Parity, QuadTag, Rational};

/// A formal product `η · Π ω_ρ^{x_ρ} · Π χ_ρ̃^{n_ρ}` of characters of the similitude factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistChar {
    pub eta: QuadTag,
    pub omega: BTreeMap<String, Rational>,
    pub chi: BTreeMap<String, i64>,
}

impl TwistChar {
    pub fn trivial() -> TwistChar {
        TwistChar::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.eta.is_trivial() && self.omega.is_empty() && self.chi.is_empty()
    }

    pub fn quadratic(tag: QuadTag) -> TwistChar {
        TwistChar {
            eta: tag,
            ..TwistChar::default()
        }
    }

    /// `η_ρ^e`; fails for a non-integral exponent on a nontrivial central character.
    pub fn eta_power(rho: &Cuspidal, e: &Rational) -> Result<TwistChar> {
        Ok(TwistChar::quadratic(rho.eta.pow_rat(e)?))
    }

    pub fn omega(rho: &str, e: Rational) -> TwistChar {
        let mut t = TwistChar::default();
        if !e.is_zero() {
            t.omega.insert(rho.to_string(), e);
        }
        t
    }

    /// `χ_ρ̃^n`, trivial unless `ρ` is of orthogonal type.
    pub fn chi(rho: &Cuspidal, n: i64) -> TwistChar {
        let mut t = TwistChar::default();
        if rho.parity == Parity::Orthogonal && n != 0 {
            t.chi.insert(rho.name.clone(), n);
        }
        t
    }

    pub fn mul(&self, other: &TwistChar) -> TwistChar {
        let mut out = self.clone();
        out.eta = out.eta.mul(&other.eta);
        for (k, v) in &other.omega {
            let e = out.omega.entry(k.clone()).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                out.omega.remove(k);
            }
        }
        for (k, v) in &other.chi {
            let e = out.chi.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                out.chi.remove(k);
            }
        }
        out
    }

    pub fn inverse(&self) -> TwistChar {
        TwistChar {
            eta: self.eta.clone(),
            omega: self.omega.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            chi: self.chi.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "eta": self.eta.to_string(),
            "omega": self.omega.iter().map(|(k, v)| (k.clone(), Value::String(fmt_rat(v)))).collect::<serde_json::Map<_, _>>(),
            "chi": self.chi.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

impl fmt::Display for TwistChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if !self.eta.is_trivial() {
            parts.push(self.eta.to_string());
        }
        for (k, v) in &self.omega {
            parts.push(format!("w[{k}]^{}", fmt_rat(v)));
        }
        for (k, v) in &self.chi {
            parts.push(format!("chi[{k}]^{v}"));
        }
        write!(f, "{}", parts.join("."))
    }
}
