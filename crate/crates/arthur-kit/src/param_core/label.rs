use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational numbers; half-integers are the common case.
pub type Rational = num_rational::Rational64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Render `3/2`, `-1`, `0`.
pub fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(int(s.parse().map_err(|_| bad())?)),
    }
}

/// Parity of a rational that is known to be an integer.
pub fn is_odd(q: &Rational) -> bool {
    debug_assert!(q.is_integer());
    q.to_integer().is_odd()
}

/// A sign ±1, written multiplicatively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^e`.
    pub fn power_of_minus_one(e: i64) -> Sign {
        if e.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn pow(self, e: i64) -> Sign {
        match self {
            Sign::Plus => Sign::Plus,
            Sign::Minus => Sign::power_of_minus_one(e),
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        sign_from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub fn sign_from_json(v: &serde_json::Value) -> Result<Sign> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .and_then(Sign::from_i64)
            .ok_or_else(|| Error::Schema(format!("sign must be 1 or -1, got {n}"))),
        serde_json::Value::String(s) => match s.as_str() {
            "+" | "+1" => Ok(Sign::Plus),
            "-" | "-1" | "\u{2212}" => Ok(Sign::Minus),
            _ => Err(Error::Schema(format!("bad sign {s:?}"))),
        },
        other => Err(Error::Schema(format!("bad sign {other}"))),
    }
}

/// Parse strings like `+-+`.
pub fn parse_signs(s: &str) -> Result<Vec<Sign>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' | '\u{2212}' => Ok(Sign::Minus),
            _ => Err(Error::Schema(format!("bad sign character {c:?} in {s:?}"))),
        })
        .collect()
}

pub fn signs_to_string(v: &[Sign]) -> String {
    v.iter().map(|s| s.symbol()).collect()
}

/// A product of named quadratic characters; the empty product is trivial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadTag {
    factors: BTreeSet<String>,
}

impl QuadTag {
    pub fn trivial() -> QuadTag {
        QuadTag::default()
    }

    pub fn named(name: &str) -> QuadTag {
        QuadTag {
            factors: BTreeSet::from([name.to_string()]),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(String::as_str)
    }

    pub fn mul(&self, other: &QuadTag) -> QuadTag {
        QuadTag {
            factors: self.factors.symmetric_difference(&other.factors).cloned().collect(),
        }
    }

    pub fn pow(&self, e: i64) -> QuadTag {
        if e.rem_euclid(2) == 1 {
            self.clone()
        } else {
            QuadTag::trivial()
        }
    }

    /// Power by a rational exponent; only integral exponents make sense unless the tag is trivial.
    pub fn pow_rat(&self, e: &Rational) -> Result<QuadTag> {
        if self.is_trivial() {
            return Ok(QuadTag::trivial());
        }
        if !e.is_integer() {
            return Err(Error::InvalidLabel(format!(
                "{self} raised to non-integral power {}",
                fmt_rat(e)
            )));
        }
        Ok(self.pow(e.to_integer()))
    }

    pub fn parse(s: &str) -> Result<QuadTag> {
        let s = s.trim();
        if s == "trivial" || s == "1" {
            return Ok(QuadTag::trivial());
        }
        let body = s.strip_prefix("quad:").ok_or_else(|| {
            Error::Schema(format!(
                "central character tag must be \"trivial\" or \"quad:<name>\", got {s:?}"
            ))
        })?;
        let mut tag = QuadTag::trivial();
        for f in body.split('*') {
            let f = f.trim();
            if f.is_empty() {
                return Err(Error::Schema(format!("empty factor in tag {s:?}")));
            }
            tag = tag.mul(&QuadTag::named(f));
        }
        Ok(tag)
    }
}

impl fmt::Display for QuadTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let names: Vec<&str> = self.factors().collect();
        write!(f, "quad:{}", names.join("*"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Orthogonal,
    Symplectic,
    None,
}

impl Parity {
    pub fn dual(self) -> Parity {
        match self {
            Parity::Orthogonal => Parity::Symplectic,
            Parity::Symplectic => Parity::Orthogonal,
            Parity::None => Parity::None,
        }
    }
}

/// Symbol for an irreducible unitary supercuspidal representation of a general linear group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cuspidal {
    pub name: String,
    pub dim: u32,
    pub parity: Parity,
    pub eta: QuadTag,
    /// Name of the contragredient when the label is not self-dual.
    pub dual: Option<String>,
}

impl Cuspidal {
    pub fn new(name: &str, dim: u32, parity: Parity, eta: QuadTag) -> Cuspidal {
        Cuspidal {
            name: name.to_string(),
            dim,
            parity,
            eta,
            dual: None,
        }
    }

    /// The trivial character of GL(1).
    pub fn trivial_character(name: &str) -> Cuspidal {
        Cuspidal::new(name, 1, Parity::Orthogonal, QuadTag::trivial())
    }

    /// A quadratic character of GL(1), its own central character.
    pub fn quadratic_character(name: &str) -> Cuspidal {
        Cuspidal::new(name, 1, Parity::Orthogonal, QuadTag::named(name))
    }

    pub fn self_dual(&self) -> bool {
        self.parity != Parity::None
    }

    pub fn is_character(&self) -> bool {
        self.dim == 1 && self.parity == Parity::Orthogonal
    }

    pub fn dual_name(&self) -> &str {
        self.dual.as_deref().unwrap_or(&self.name)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidLabel("empty name".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidLabel(format!(
                "{}: dimension must be positive",
                self.name
            )));
        }
        match (self.parity, &self.dual) {
            (Parity::None, None) => {
                return Err(Error::InvalidLabel(format!(
                    "{}: non-self-dual label needs a dual",
                    self.name
                )))
            }
            (Parity::None, Some(d)) if d == &self.name => {
                return Err(Error::InvalidLabel(format!(
                    "{}: non-self-dual label cannot be its own dual",
                    self.name
                )))
            }
            (Parity::Orthogonal | Parity::Symplectic, Some(d)) if d != &self.name => {
                return Err(Error::InvalidLabel(format!(
                    "{}: self-dual label with a different dual {d}",
                    self.name
                )))
            }
            _ => {}
        }
        if self.parity == Parity::Symplectic && self.dim % 2 == 1 {
            return Err(Error::InvalidLabel(format!(
                "{}: symplectic label of odd dimension",
                self.name
            )));
        }
        if self.is_character() && !self.eta.is_trivial() && self.eta != QuadTag::named(&self.name) {
            return Err(Error::InvalidLabel(format!(
                "{}: a one-dimensional orthogonal label is its own central character, found {}",
                self.name, self.eta
            )));
        }
        Ok(())
    }

    /// Twist by a quadratic character. Labels already known to the caller are reused by identity.
    pub fn twist(&self, by: &QuadTag, known: &[Cuspidal]) -> Cuspidal {
        if by.is_trivial() {
            return self.clone();
        }
        if self.is_character() {
            let eta = self.eta.mul(by);
            if let Some(k) = known.iter().find(|k| k.is_character() && k.eta == eta) {
                return k.clone();
            }
            let name = if eta.is_trivial() {
                "trivial".to_string()
            } else {
                eta.factors().collect::<Vec<_>>().join("*")
            };
            return Cuspidal::new(&name, 1, Parity::Orthogonal, eta);
        }
        let eta = self.eta.mul(&by.pow(self.dim as i64));
        let name = twisted_name(&self.name, by);
        if let Some(k) = known.iter().find(|k| k.name == name) {
            return k.clone();
        }
        Cuspidal {
            name,
            dim: self.dim,
            parity: self.parity,
            eta,
            dual: self.dual.as_ref().map(|d| twisted_name(d, by)),
        }
    }
}

/// `base*x*y` names record quadratic twists of a base label.
fn twisted_name(name: &str, by: &QuadTag) -> String {
    let mut parts = name.split('*');
    let base = parts.next().unwrap_or_default();
    let mut tag = QuadTag::trivial();
    for p in parts {
        tag = tag.mul(&QuadTag::named(p));
    }
    let tag = tag.mul(by);
    if tag.is_trivial() {
        base.to_string()
    } else {
        let f: Vec<&str> = tag.factors().collect();
        format!("{base}*{}", f.join("*"))
    }
}

/// `⌊q⌋` for rationals.
pub fn floor(q: &Rational) -> i64 {
    q.floor().to_integer()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn is_half_integer(q: &Rational) -> bool {
    (q * int(2)).is_integer()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}
