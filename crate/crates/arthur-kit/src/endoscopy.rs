//! Elliptic endoscopic data attached to a semisimple sign vector, the factor parameters,
//! the transport of characters to the factors, and Levi factorizations.

use serde_json::{json, Value};

use crate::component_group::{pairing, CentralizerDescriptor, Character, SignVector};
use crate::error::{Error, Result};
use crate::groth_engine::TwistChar;
use crate::packet_enum::{packet, stable_sum, Level, PacketLabel};
use crate::param_core::{
    block_to_value, group_to_value, parameter_to_value, ArthurParameter, GroupDescriptor, JordanBlock, QuadTag, Sign,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoscopicDatum {
    /// Signs on the multiplicity-expanded good-parity blocks.
    pub s: SignVector,
    pub jord_plus: Vec<(JordanBlock, u32)>,
    pub jord_minus: Vec<(JordanBlock, u32)>,
    pub n_i: u64,
    pub n_ii: u64,
    pub eta_i: QuadTag,
    pub eta_ii: QuadTag,
    pub groups: (GroupDescriptor, GroupDescriptor),
    /// For each distinct block of a factor, the index of the block of `ψ` it came from.
    pub origin_i: Vec<usize>,
    pub origin_ii: Vec<usize>,
}

impl EndoscopicDatum {
    pub fn to_value(&self) -> Value {
        let blocks = |v: &[(JordanBlock, u32)]| v.iter().map(|(b, m)| block_to_value(b, *m)).collect::<Vec<_>>();
        json!({
            "s": self.s,
            "jord_plus": blocks(&self.jord_plus),
            "jord_minus": blocks(&self.jord_minus),
            "N_I": self.n_i,
            "N_II": self.n_ii,
            "eta_I": self.eta_i.to_string(),
            "eta_II": self.eta_ii.to_string(),
            "groups": [group_to_value(&self.groups.0), group_to_value(&self.groups.1)],
        })
    }
}

fn push_copy(side: &mut Vec<(JordanBlock, u32)>, origin: &mut Vec<usize>, b: &JordanBlock, from: usize) {
    match side.iter().position(|(x, _)| x == b) {
        Some(j) => side[j].1 += 1,
        None => {
            side.push((b.clone(), 1));
            origin.push(from);
        }
    }
}

/// The factor parameter carried by one side of the partition.
fn factor(
    side: &[(JordanBlock, u32)],
    n: u64,
    eta: &QuadTag,
    known: &[crate::param_core::Cuspidal],
) -> Result<ArthurParameter> {
    let odd = n % 2 == 1;
    let group = if odd {
        GroupDescriptor::sp(((n - 1) / 2) as u32)
    } else {
        GroupDescriptor::so_even((n / 2) as u32, eta.clone())
    };
    let mut blocks = Vec::new();
    for (b, m) in side {
        let block = if odd {
            let rho = b.rho.twist(eta, known);
            JordanBlock::from_ab(rho, b.a, b.b, Some(b.zeta))?
        } else {
            b.clone()
        };
        blocks.push((block, *m));
    }
    let p = ArthurParameter::new(group, blocks);
    p.validate().map_err(|e| Error::InvalidPartition(e.to_string()))?;
    Ok(p)
}

/// `(ψ_I, ψ_II, datum)` for `s` on the multiplicity-expanded good-parity blocks.
///
/// Blocks outside the good-parity part always go to the first factor.
pub fn decompose(psi: &ArthurParameter, s: &SignVector) -> Result<(ArthurParameter, ArthurParameter, EndoscopicDatum)> {
    let desc = CentralizerDescriptor::build(psi)?;
    let copies: usize = desc.blocks.iter().map(|(_, m)| *m as usize).sum();
    if s.len != copies {
        return Err(Error::IndexMismatch {
            expected: copies,
            found: s.len,
        });
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut origin_i = Vec::new();
    let mut origin_ii = Vec::new();
    let mut pos = 0;
    for (i, (b, m)) in desc.blocks.iter().enumerate() {
        for _ in 0..*m {
            if s.get(pos).is_minus() {
                push_copy(&mut minus, &mut origin_ii, b, i);
            } else {
                push_copy(&mut plus, &mut origin_i, b, i);
            }
            pos += 1;
        }
    }
    for (b, m) in &psi.blocks {
        if !b.is_good_parity() {
            plus.push((b.clone(), *m));
        }
    }
    let dim = |v: &[(JordanBlock, u32)]| v.iter().map(|(b, m)| b.dim() * *m as u64).sum::<u64>();
    let eta = |v: &[(JordanBlock, u32)]| {
        v.iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(QuadTag::trivial(), |acc, (b, _)| acc.mul(&b.eta()))
    };
    let (n_i, n_ii) = (dim(&plus), dim(&minus));
    let (eta_i, eta_ii) = (eta(&plus), eta(&minus));
    let known = psi.labels();
    let psi_i = factor(&plus, n_i, &eta_i, &known)?;
    let psi_ii = factor(&minus, n_ii, &eta_ii, &known)?;
    let datum = EndoscopicDatum {
        s: *s,
        jord_plus: plus,
        jord_minus: minus,
        n_i,
        n_ii,
        eta_i,
        eta_ii,
        groups: (psi_i.group.clone(), psi_ii.group.clone()),
        origin_i,
        origin_ii,
    };
    Ok((psi_i, psi_ii, datum))
}

/// `ε` read on the blocks of each factor.
pub fn product_character(
    eps: &Character,
    datum: &EndoscopicDatum,
    psi: &ArthurParameter,
) -> Result<(SignVector, SignVector)> {
    let desc = CentralizerDescriptor::build(psi)?;
    if eps.len != desc.k() {
        return Err(Error::IndexMismatch {
            expected: desc.k(),
            found: eps.len,
        });
    }
    let read = |origin: &[usize]| SignVector::from_signs(&origin.iter().map(|&i| eps.get(i)).collect::<Vec<Sign>>());
    Ok((read(&datum.origin_i), read(&datum.origin_ii)))
}

/// Signs on the factors induced by signs on the copies of `ψ`.
pub fn split_copies(
    s: &SignVector,
    datum: &EndoscopicDatum,
    psi: &ArthurParameter,
) -> Result<(SignVector, SignVector)> {
    let desc = CentralizerDescriptor::build(psi)?;
    let mut i_side: Vec<Sign> = vec![Sign::Plus; datum.origin_i.len()];
    let mut ii_side: Vec<Sign> = vec![Sign::Plus; datum.origin_ii.len()];
    let mut pos = 0;
    for (i, (_, m)) in desc.blocks.iter().enumerate() {
        for _ in 0..*m {
            let v = s.get(pos);
            let target = if datum.s.get(pos).is_minus() {
                let j = datum
                    .origin_ii
                    .iter()
                    .position(|&o| o == i)
                    .expect("copy is on this side");
                &mut ii_side[j]
            } else {
                let j = datum
                    .origin_i
                    .iter()
                    .position(|&o| o == i)
                    .expect("copy is on this side");
                &mut i_side[j]
            };
            *target = *target * v;
            pos += 1;
        }
    }
    Ok((SignVector::from_signs(&i_side), SignVector::from_signs(&ii_side)))
}

/// `pairing(ε, s') = pairing(ε_I, s'_I) · pairing(ε_II, s'_II)` for `s'` on copies.
pub fn check_multiplicativity(
    psi: &ArthurParameter,
    eps: &Character,
    datum: &EndoscopicDatum,
    s2: &SignVector,
) -> Result<bool> {
    let desc = CentralizerDescriptor::build(psi)?;
    let whole = pairing(eps, &desc.cont(&s2.signs())?)?;
    let (e1, e2) = product_character(eps, datum, psi)?;
    let (s_i, s_ii) = split_copies(s2, datum, psi)?;
    Ok(whole == pairing(&e1, &s_i)? * pairing(&e2, &s_ii)?)
}

/// `element ↦ ⟨s·s_ψ, element⟩` on the packet at `level`.
pub fn transfer_coefficients(psi: &ArthurParameter, s: &SignVector, level: Level) -> Result<Vec<(PacketLabel, Sign)>> {
    let desc = CentralizerDescriptor::build(psi)?;
    let s = if s.len == desc.k() { *s } else { desc.cont(&s.signs())? };
    stable_sum(&packet(psi, level, None)?, &s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviFactorization {
    pub gl: Vec<JordanBlock>,
    pub minus: ArthurParameter,
    /// `Sp(St(ρ, a), b)` for each general linear factor.
    pub markers: Vec<String>,
    pub twist: TwistChar,
}

impl LeviFactorization {
    pub fn to_value(&self) -> Value {
        json!({
            "gl": self.gl.iter().map(|b| block_to_value(b, 1)).collect::<Vec<_>>(),
            "minus": parameter_to_value(&self.minus),
            "markers": self.markers,
            "twist": self.twist.to_value(),
        })
    }

    /// Members of the packet of `ψ` as induced from those of `ψ_−`.
    pub fn induced_labels(&self, level: Level) -> Result<Vec<(PacketLabel, String)>> {
        let inner = packet(&self.minus, level, None)?;
        let prefix = self.markers.join(" × ");
        Ok(inner
            .elements
            .into_iter()
            .map(|e| {
                let text = if prefix.is_empty() {
                    format!("π{}", e.label)
                } else {
                    format!("{prefix} ⋊ π{} ⊗ {}", e.label, self.twist)
                };
                (e.label, text)
            })
            .collect())
    }
}

/// Pull the blocks at `selection` (indices into `ψ.blocks`, repeats allowed) to general
/// linear factors. A self-dual block loses two copies per selection, any other block
/// loses one copy together with one copy of its dual.
pub fn levi_factorization(psi: &ArthurParameter, selection: &[usize]) -> Result<LeviFactorization> {
    let mut blocks = psi.blocks.clone();
    let mut gl = Vec::new();
    let mut twist = TwistChar::trivial();
    for &i in selection {
        let (b, _) = psi
            .blocks
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidLeviSelection(format!("no block at index {i}")))?;
        let mut take = |target: &JordanBlock, n: u32| -> Result<()> {
            let slot = blocks
                .iter_mut()
                .find(|(x, _)| x == target)
                .filter(|(_, m)| *m >= n)
                .ok_or_else(|| Error::InvalidLeviSelection(format!("{target} has too few copies left")))?;
            slot.1 -= n;
            Ok(())
        };
        if b.rho.self_dual() {
            take(&b, 2)?;
        } else {
            take(&b, 1)?;
            let dual = psi
                .blocks
                .iter()
                .map(|(x, _)| x)
                .find(|x| x.rho.name == b.rho.dual_name() && x.a == b.a && x.b == b.b)
                .cloned()
                .ok_or_else(|| Error::InvalidLeviSelection(format!("{b} has no dual block")))?;
            take(&dual, 1)?;
        }
        twist = twist.mul(&TwistChar::chi(&b.rho, b.width() + 1));
        gl.push(b);
    }
    let removed: u64 = gl.iter().map(|b| 2 * b.dim()).sum();
    let n = psi.group.big_n() - removed;
    let group = GroupDescriptor {
        family: psi.group.family,
        rank: (n / 2) as u32,
        discriminant: psi.group.discriminant.clone(),
    };
    let minus = ArthurParameter::new(group, blocks);
    minus
        .validate()
        .map_err(|e| Error::InvalidLeviSelection(e.to_string()))?;
    let markers = gl
        .iter()
        .map(|b| format!("Sp(St({},{}),{})", b.rho.name, b.a, b.b))
        .collect();
    Ok(LeviFactorization {
        gl,
        minus,
        markers,
        twist,
    })
}
