use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::block::JordanBlock;
use super::label::{Cuspidal, QuadTag, Rational};
use super::lparam::{InfChar, LParameter};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Sp,
    #[serde(rename = "SO_even")]
    SoEven,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Sp => "Sp",
            Family::SoEven => "SO_even",
        })
    }
}

/// `Sp(2n)` or a quasisplit `SO(2n, η)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupDescriptor {
    pub family: Family,
    pub rank: u32,
    pub discriminant: QuadTag,
}

impl GroupDescriptor {
    pub fn sp(rank: u32) -> GroupDescriptor {
        GroupDescriptor {
            family: Family::Sp,
            rank,
            discriminant: QuadTag::trivial(),
        }
    }

    pub fn so_even(rank: u32, discriminant: QuadTag) -> GroupDescriptor {
        GroupDescriptor {
            family: Family::SoEven,
            rank,
            discriminant,
        }
    }

    /// Dimension of the standard representation of the dual group.
    pub fn big_n(&self) -> u64 {
        match self.family {
            Family::Sp => 2 * self.rank as u64 + 1,
            Family::SoEven => 2 * self.rank as u64,
        }
    }

    /// The group whose dual has standard representation of dimension `n` and determinant `disc`.
    pub fn for_dimension(n: u64, disc: QuadTag) -> GroupDescriptor {
        if n.is_odd() {
            GroupDescriptor::sp(((n - 1) / 2) as u32)
        } else {
            GroupDescriptor::so_even((n / 2) as u32, disc)
        }
    }

    pub fn is_split_so_even(&self) -> bool {
        self.family == Family::SoEven && self.discriminant.is_trivial()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sp => write!(f, "Sp({})", 2 * self.rank),
            Family::SoEven if self.discriminant.is_trivial() => write!(f, "SO({})", 2 * self.rank),
            Family::SoEven => write!(f, "SO({},{})", 2 * self.rank, self.discriminant),
        }
    }
}

/// A multiset of Jordan blocks attached to a group.
///
/// Blocks keep the order in which they were declared; sign vectors and characters are
/// indexed in that order. Equality is multiset equality.
#[derive(Clone, Debug)]
pub struct ArthurParameter {
    pub group: GroupDescriptor,
    pub blocks: Vec<(JordanBlock, u32)>,
}

impl PartialEq for ArthurParameter {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.sorted_blocks() == other.sorted_blocks()
    }
}

impl Eq for ArthurParameter {}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub good_parity: bool,
    pub tempered: bool,
    pub discrete: bool,
    pub elementary: bool,
    pub ddr: bool,
}

/// `ψ = ψ_np ⊕ ψ_p ⊕ ψ_np^∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodParitySplit {
    pub good: ArthurParameter,
    pub non_good: Vec<(JordanBlock, u32)>,
}

/// A total order on the multiplicity-expanded blocks, lowest first.
///
/// Entries index into `ArthurParameter::expanded`. Only the relative order of blocks
/// sharing a cuspidal label matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleOrder {
    pub sequence: Vec<usize>,
}

impl ArthurParameter {
    /// Build a parameter, merging repeated blocks into their first occurrence.
    pub fn new(group: GroupDescriptor, blocks: Vec<(JordanBlock, u32)>) -> ArthurParameter {
        let mut merged: Vec<(JordanBlock, u32)> = Vec::new();
        for (b, m) in blocks {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(x, _)| *x == b) {
                Some(slot) => slot.1 += m,
                None => merged.push((b, m)),
            }
        }
        ArthurParameter { group, blocks: merged }
    }

    pub fn sorted_blocks(&self) -> Vec<(JordanBlock, u32)> {
        let mut v = self.blocks.clone();
        v.sort();
        v
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total_dim(&self) -> u64 {
        self.blocks.iter().map(|(b, m)| b.dim() * *m as u64).sum()
    }

    /// Product of the block central characters, with multiplicity.
    pub fn determinant(&self) -> QuadTag {
        self.blocks
            .iter()
            .filter(|(b, _)| b.rho.self_dual())
            .fold(QuadTag::trivial(), |acc, (b, m)| acc.mul(&b.eta().pow(*m as i64)))
    }

    /// Labels used by the blocks, sorted by name.
    pub fn labels(&self) -> Vec<Cuspidal> {
        let set: BTreeSet<Cuspidal> = self.blocks.iter().map(|(b, _)| b.rho.clone()).collect();
        set.into_iter().collect()
    }

    /// Blocks repeated according to multiplicity, in declaration order.
    pub fn expanded(&self) -> Vec<JordanBlock> {
        self.blocks
            .iter()
            .flat_map(|(b, m)| std::iter::repeat_n(b.clone(), *m as usize))
            .collect()
    }

    /// Index into `blocks` of each expanded copy.
    pub fn copy_owner(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, (_, m))| std::iter::repeat_n(i, *m as usize))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.group.family == Family::Sp && !self.group.discriminant.is_trivial() {
            return Err(Error::Schema("symplectic groups carry the trivial discriminant".into()));
        }
        let mut labels: BTreeMap<&str, &Cuspidal> = BTreeMap::new();
        for (b, _) in &self.blocks {
            b.rho.validate()?;
            if let Some(prev) = labels.insert(&b.rho.name, &b.rho) {
                if prev != &b.rho {
                    return Err(Error::InvalidLabel(format!(
                        "label {} declared twice with different data",
                        b.rho.name
                    )));
                }
            }
        }
        let found = self.total_dim();
        if found != self.group.big_n() {
            return Err(Error::DimensionMismatch {
                expected: self.group.big_n(),
                found,
            });
        }
        for (b, m) in &self.blocks {
            if b.rho.self_dual() {
                continue;
            }
            let dual_name = b.rho.dual_name();
            let partner = self
                .blocks
                .iter()
                .find(|(c, k)| c.rho.name == dual_name && c.a == b.a && c.b == b.b && k == m);
            match partner {
                Some((c, _)) if c.rho.dual.as_deref() == Some(b.rho.name.as_str()) && c.rho.dim == b.rho.dim => {}
                _ => {
                    return Err(Error::SelfDualityViolation(format!(
                        "{b} with multiplicity {m} has no matching dual block over {dual_name}"
                    )))
                }
            }
        }
        let det = self.determinant();
        if det != self.group.discriminant {
            return Err(Error::DeterminantMismatch {
                expected: self.group.discriminant.to_string(),
                found: det.to_string(),
            });
        }
        Ok(())
    }

    pub fn split_good_parity(&self) -> Result<GoodParitySplit> {
        let mut good = Vec::new();
        let mut non_good = Vec::new();
        for (b, m) in &self.blocks {
            if b.is_good_parity() {
                good.push((b.clone(), *m));
            } else if b.rho.self_dual() {
                if m % 2 == 1 {
                    return Err(Error::OddMultiplicityNonGoodBlock(b.to_string()));
                }
                non_good.push((b.clone(), m / 2));
            } else if b.rho.name.as_str() < b.rho.dual_name() {
                non_good.push((b.clone(), *m));
            }
        }
        let removed: u64 = non_good.iter().map(|(b, m)| 2 * b.dim() * *m as u64).sum();
        let n = self.group.big_n() - removed;
        let group = GroupDescriptor {
            family: self.group.family,
            rank: (n / 2) as u32,
            discriminant: self.group.discriminant.clone(),
        };
        Ok(GoodParitySplit {
            good: ArthurParameter::new(group, good),
            non_good,
        })
    }

    pub fn is_good_parity(&self) -> bool {
        self.blocks.iter().all(|(b, _)| b.is_good_parity())
    }

    /// Restriction along the diagonal `SL(2)`.
    pub fn diagonal_restriction(&self) -> ArthurParameter {
        let mut out = Vec::new();
        for (b, m) in &self.blocks {
            for k in 0..b.a.min(b.b) {
                let a = b.a + b.b - 1 - 2 * k;
                out.push((
                    JordanBlock {
                        rho: b.rho.clone(),
                        a,
                        b: 1,
                        zeta: super::label::Sign::Plus,
                    },
                    *m,
                ));
            }
        }
        ArthurParameter::new(self.group.clone(), out)
    }

    pub fn is_multiplicity_free(&self) -> bool {
        let mut seen: BTreeSet<(&str, u32, u32)> = BTreeSet::new();
        self.blocks
            .iter()
            .all(|(b, m)| *m == 1 && seen.insert((&b.rho.name, b.a, b.b)))
    }

    pub fn is_tempered(&self) -> bool {
        self.blocks.iter().all(|(b, _)| b.b == 1)
    }

    /// Good parity, multiplicity free and pairwise disjoint `[B, A]` per label.
    pub fn is_ddr(&self) -> bool {
        if !self.is_good_parity() || !self.is_multiplicity_free() {
            return false;
        }
        for (i, (x, _)) in self.blocks.iter().enumerate() {
            for (y, _) in &self.blocks[i + 1..] {
                if x.rho == y.rho && x.big_b() <= y.big_a() && y.big_b() <= x.big_a() {
                    return false;
                }
            }
        }
        true
    }

    pub fn classify(&self) -> Classification {
        let good_parity = self.is_good_parity();
        let tempered = self.is_tempered();
        let ddr = self.is_ddr();
        Classification {
            good_parity,
            tempered,
            discrete: tempered && good_parity && self.is_multiplicity_free(),
            elementary: ddr && self.blocks.iter().all(|(b, _)| !b.is_reducible()),
            ddr,
        }
    }

    pub fn phi_of_psi(&self) -> LParameter {
        let mut phi = LParameter::default();
        for (b, m) in &self.blocks {
            for j in 0..b.b as i64 {
                let x = Rational::new(b.b as i64 - 1 - 2 * j, 2);
                phi.insert(b.rho.clone(), b.a, x, *m);
            }
        }
        phi
    }

    pub fn inf_char(&self) -> InfChar {
        self.phi_of_psi().inf_char()
    }

    /// Swap `(a, b)` on every block whose label is in `rhos`.
    pub fn sharp_dual(&self, rhos: &BTreeSet<String>) -> Result<ArthurParameter> {
        if !self.is_good_parity() {
            return Err(Error::NotGoodParity);
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(b, m)| {
                (
                    if rhos.contains(&b.rho.name) {
                        b.swapped()
                    } else {
                        b.clone()
                    },
                    *m,
                )
            })
            .collect();
        Ok(ArthurParameter::new(self.group.clone(), blocks))
    }

    /// Every label of the parameter.
    pub fn rho_names(&self) -> BTreeSet<String> {
        self.blocks.iter().map(|(b, _)| b.rho.name.clone()).collect()
    }

    /// Sorted by `(A, B, ζ)` within each label.
    pub fn natural_order(&self) -> AdmissibleOrder {
        let copies = self.expanded();
        let mut seq: Vec<usize> = (0..copies.len()).collect();
        seq.sort_by(|&i, &j| {
            let (x, y) = (&copies[i], &copies[j]);
            (x.big_a(), x.big_b(), x.zeta, i).cmp(&(y.big_a(), y.big_b(), y.zeta, j))
        });
        AdmissibleOrder { sequence: seq }
    }

    pub fn is_admissible(&self, order: &AdmissibleOrder) -> bool {
        let copies = self.expanded();
        let mut seen = vec![false; copies.len()];
        if order.sequence.len() != copies.len() {
            return false;
        }
        for &i in &order.sequence {
            if i >= copies.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        let pos = order.positions();
        for i in 0..copies.len() {
            for j in 0..copies.len() {
                let (x, y) = (&copies[i], &copies[j]);
                if x.rho == y.rho
                    && x.zeta == y.zeta
                    && x.big_a() > y.big_a()
                    && x.big_b() > y.big_b()
                    && pos[i] < pos[j]
                {
                    return false;
                }
            }
        }
        true
    }

    /// Shift blocks up along the order until the result has disjoint intervals.
    ///
    /// Returns the dominating parameter in the same block layout as `expanded()` and the
    /// shift of each expanded copy.
    pub fn dominating(&self, order: &AdmissibleOrder) -> Result<(ArthurParameter, Vec<i64>)> {
        if !self.is_good_parity() {
            return Err(Error::NotGoodParity);
        }
        if !self.is_admissible(order) {
            return Err(Error::NotAdmissible(format!("{:?}", order.sequence)));
        }
        let copies = self.expanded();
        let mut shifts = vec![0i64; copies.len()];
        let mut top: BTreeMap<&str, Rational> = BTreeMap::new();
        for &i in &order.sequence {
            let blk = &copies[i];
            let b = blk.big_b();
            let t = match top.get(blk.rho.name.as_str()) {
                Some(prev) => {
                    let need = *prev + Rational::from_integer(1) - b;
                    need.ceil().to_integer().max(0)
                }
                None => 0,
            };
            shifts[i] = t;
            top.insert(&blk.rho.name, blk.big_a() + Rational::from_integer(t));
        }
        let mut blocks = Vec::with_capacity(copies.len());
        for (i, blk) in copies.iter().enumerate() {
            let t = Rational::from_integer(shifts[i]);
            blocks.push((
                JordanBlock::from_abz(blk.rho.clone(), blk.big_a() + t, blk.big_b() + t, blk.zeta)?,
                1,
            ));
        }
        let mut shifted = ArthurParameter {
            group: self.group.clone(),
            blocks,
        };
        shifted.group = GroupDescriptor {
            family: self.group.family,
            rank: (shifted.total_dim() / 2) as u32,
            discriminant: self.group.discriminant.clone(),
        };
        Ok((shifted, shifts))
    }
}

impl AdmissibleOrder {
    /// `positions()[copy]` is the rank of that copy in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.sequence.len()];
        for (p, &i) in self.sequence.iter().enumerate() {
            if i < pos.len() {
                pos[i] = p;
            }
        }
        pos
    }
}

impl fmt::Display for ArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(b, m)| if *m == 1 { b.to_string() } else { format!("{m}{b}") })
            .collect();
        write!(
            f,
            "{} on {}",
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+")
            },
            self.group
        )
    }
}
