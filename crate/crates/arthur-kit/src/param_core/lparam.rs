use std::collections::BTreeMap;

use super::label::{Cuspidal, Rational};

/// A tempered-plus-exponent parameter `⊕ ρ ⊗ ν_a ⊗ |·|^x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LParameter {
    pub entries: BTreeMap<(Cuspidal, u32, Rational), u32>,
}

impl LParameter {
    pub fn insert(&mut self, rho: Cuspidal, a: u32, x: Rational, mult: u32) {
        *self.entries.entry((rho, a, x)).or_default() += mult;
    }

    pub fn total_dim(&self) -> u64 {
        self.entries
            .iter()
            .map(|((r, a, _), m)| r.dim as u64 * *a as u64 * *m as u64)
            .sum()
    }

    /// Closed under `(ρ, a, x) ↦ (ρ∨, a, −x)`.
    pub fn is_self_dual(&self) -> bool {
        self.entries.iter().all(|((r, a, x), m)| {
            self.entries
                .iter()
                .any(|((r2, a2, x2), m2)| r2.name == r.dual_name() && a2 == a && *x2 == -*x && m2 == m)
        })
    }

    pub fn inf_char(&self) -> InfChar {
        let mut ic = InfChar::default();
        for ((rho, a, x), m) in &self.entries {
            for i in 0..*a as i64 {
                let e = *x + Rational::new(*a as i64 - 1 - 2 * i, 2);
                ic.insert(&rho.name, e, *m);
            }
        }
        ic
    }
}

/// A multiset of pairs `(ρ, x)` standing for `ρ|·|^x`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfChar {
    pub entries: BTreeMap<(String, Rational), u32>,
}

impl InfChar {
    pub fn insert(&mut self, rho: &str, x: Rational, mult: u32) {
        if mult > 0 {
            *self.entries.entry((rho.to_string(), x)).or_default() += mult;
        }
    }

    /// Remove one copy; `false` when absent.
    pub fn remove_one(&mut self, rho: &str, x: Rational) -> bool {
        let key = (rho.to_string(), x);
        match self.entries.get_mut(&key) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(&key);
                true
            }
            None => false,
        }
    }

    pub fn union(&mut self, other: &InfChar) {
        for ((r, x), m) in &other.entries {
            self.insert(r, *x, *m);
        }
    }

    pub fn len(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exponents attached to one label, with repetition, ascending.
    pub fn exponents(&self, rho: &str) -> Vec<Rational> {
        self.entries
            .iter()
            .filter(|((r, _), _)| r == rho)
            .flat_map(|((_, x), m)| std::iter::repeat_n(*x, *m as usize))
            .collect()
    }
}
