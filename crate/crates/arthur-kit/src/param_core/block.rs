use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use super::label::{fmt_rat, int, rat, Cuspidal, Parity, QuadTag, Rational, Sign};
use crate::error::{Error, Result};

/// A Jordan block `ρ ⊠ ν_a ⊠ ν_b`.
///
/// `zeta` is forced to the sign of `a - b` unless `a = b`, where it is a free choice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanBlock {
    pub rho: Cuspidal,
    pub a: u32,
    pub b: u32,
    pub zeta: Sign,
}

impl JordanBlock {
    pub fn from_ab(rho: Cuspidal, a: u32, b: u32, zeta_hint: Option<Sign>) -> Result<JordanBlock> {
        if a == 0 || b == 0 {
            return Err(Error::Schema(format!("block ({a},{b}) needs a, b >= 1")));
        }
        let forced = match a.cmp(&b) {
            std::cmp::Ordering::Greater => Some(Sign::Plus),
            std::cmp::Ordering::Less => Some(Sign::Minus),
            std::cmp::Ordering::Equal => None,
        };
        let zeta = match (forced, zeta_hint) {
            (Some(f), Some(h)) if f != h => {
                return Err(Error::ZetaConflict {
                    a,
                    b,
                    hint: h.symbol().to_string(),
                })
            }
            (Some(f), _) => f,
            (None, h) => h.unwrap_or(Sign::Plus),
        };
        Ok(JordanBlock { rho, a, b, zeta })
    }

    /// Inverse of the `(A, B, ζ)` coordinates.
    pub fn from_abz(rho: Cuspidal, big_a: Rational, big_b: Rational, zeta: Sign) -> Result<JordanBlock> {
        let s = big_a + big_b;
        let d = big_a - big_b;
        if !s.is_integer() || !d.is_integer() || big_b < Rational::zero() || d < Rational::zero() {
            return Err(Error::Schema(format!(
                "({}, {}) are not the coordinates of a Jordan block",
                fmt_rat(&big_a),
                fmt_rat(&big_b)
            )));
        }
        let hi = (s.to_integer() + 1) as u32;
        let lo = (d.to_integer() + 1) as u32;
        let (a, b) = if zeta == Sign::Plus { (hi, lo) } else { (lo, hi) };
        JordanBlock::from_ab(rho, a, b, Some(zeta))
    }

    pub fn big_a(&self) -> Rational {
        rat(self.a as i64 + self.b as i64, 2) - int(1)
    }

    pub fn big_b(&self) -> Rational {
        rat((self.a as i64 - self.b as i64).abs(), 2)
    }

    /// `A - B`, always a nonnegative integer.
    pub fn width(&self) -> i64 {
        self.a.min(self.b) as i64 - 1
    }

    pub fn is_reducible(&self) -> bool {
        self.width() > 0
    }

    pub fn dim(&self) -> u64 {
        self.rho.dim as u64 * self.a as u64 * self.b as u64
    }

    pub fn eta(&self) -> QuadTag {
        self.rho.eta.pow(self.a as i64 * self.b as i64)
    }

    pub fn parity(&self) -> Parity {
        let even = (self.a + self.b).is_even();
        match (self.rho.parity, even) {
            (Parity::None, _) => Parity::None,
            (Parity::Orthogonal, true) | (Parity::Symplectic, false) => Parity::Orthogonal,
            _ => Parity::Symplectic,
        }
    }

    /// Both families have an orthogonal dual group.
    pub fn is_good_parity(&self) -> bool {
        self.parity() == Parity::Orthogonal
    }

    /// `(ρ, b, a)`; ζ flips when `a ≠ b`.
    pub fn swapped(&self) -> JordanBlock {
        JordanBlock {
            rho: self.rho.clone(),
            a: self.b,
            b: self.a,
            zeta: if self.a == self.b { self.zeta } else { -self.zeta },
        }
    }

    /// Same `(ρ, a, b)`, ignoring the free ζ.
    pub fn same_shape(&self, other: &JordanBlock) -> bool {
        self.rho == other.rho && self.a == other.a && self.b == other.b
    }

    pub fn sign_of_minus_one(&self) -> Sign {
        Sign::power_of_minus_one(self.b as i64 - 1)
    }
}

impl fmt::Display for JordanBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}", self.rho.name, self.a, self.b)?;
        if self.a == self.b && self.zeta == Sign::Minus {
            write!(f, ",-")?;
        }
        write!(f, ")")
    }
}
