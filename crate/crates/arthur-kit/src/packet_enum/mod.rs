//! Labels `(l, η)` of packet members, their characters, equivalences and packets.
//!
//! Labels live on the good-parity copies of a parameter, in declaration order. For
//! parameters without discrete diagonal restriction the continuation of a label is read
//! off the dominating parameter of the natural order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::component_group::{f2, pairing, CentralizerDescriptor, Character, SignVector, Which};
use crate::error::{Error, Result};
use crate::groth_engine::TwistChar;
use crate::param_core::{
    int, parameter_to_value, ArthurParameter, Family, GroupDescriptor, JordanBlock, QuadTag, Sign,
};

/// One `(l, η)` value per good-parity copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PacketLabel {
    pub l: Vec<u32>,
    pub eta: Vec<Sign>,
}

impl PacketLabel {
    pub fn to_value(&self) -> Value {
        json!({ "l": self.l, "eta": self.eta.iter().map(|s| s.to_i64()).collect::<Vec<_>>() })
    }
}

impl fmt::Display for PacketLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.l.iter().map(u32::to_string).collect();
        let eta: String = self.eta.iter().map(|s| s.symbol()).collect();
        write!(f, "l=[{}] eta={}", l.join(","), eta)
    }
}

/// Which representations are being counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "classical_Sigma0")]
    ClassicalSigma0,
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "similitude_Sigma0")]
    SimilitudeSigma0,
    #[serde(rename = "similitude")]
    Similitude,
}

impl Level {
    pub fn relation(self) -> Relation {
        match self {
            Level::ClassicalSigma0 => Relation::Sigma0,
            Level::Classical => Relation::Theta0,
            Level::SimilitudeSigma0 => Relation::GtildeSigma0,
            Level::Similitude => Relation::Gtilde,
        }
    }

    pub fn is_similitude(self) -> bool {
        matches!(self, Level::SimilitudeSigma0 | Level::Similitude)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Level::ClassicalSigma0 => "classical_Sigma0",
            Level::Classical => "classical",
            Level::SimilitudeSigma0 => "similitude_Sigma0",
            Level::Similitude => "similitude",
        }
    }

    pub fn parse(s: &str) -> Result<Level> {
        match s {
            "classical_Sigma0" | "sigma0" => Ok(Level::ClassicalSigma0),
            "classical" => Ok(Level::Classical),
            "similitude_Sigma0" => Ok(Level::SimilitudeSigma0),
            "similitude" => Ok(Level::Similitude),
            _ => Err(Error::Schema(format!("unknown level {s:?}"))),
        }
    }
}

/// Equivalence relations on labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Equal labels up to `η` on blocks with `2l = A − B + 1`.
    Sigma0,
    /// `Sigma0` together with the outer automorphism of even orthogonal groups.
    Theta0,
    /// Equal elementary similitude continuations.
    GtildeSigma0,
    /// Equal continuations after restricting to `ker α ∩ S`.
    Gtilde,
}

/// The elementary parameter a label continues to, for a fixed `l`.
#[derive(Clone, Debug)]
pub struct Continuation {
    pub desc: CentralizerDescriptor,
    /// For each copy, the descriptor index of each `C ∈ [B + l, A − l]`, ascending in `C`.
    pub slots: Vec<Vec<usize>>,
}

impl Continuation {
    pub fn mask(&self, label: &PacketLabel) -> u64 {
        let mut mask = 0u64;
        for (i, slots) in self.slots.iter().enumerate() {
            for (j, &idx) in slots.iter().enumerate() {
                if (label.eta[i] * Sign::power_of_minus_one(j as i64)).is_minus() {
                    mask ^= 1 << idx;
                }
            }
        }
        mask
    }

    /// The continuation as a parameter with per-block signs.
    pub fn signs(&self, label: &PacketLabel) -> Vec<Sign> {
        SignVector::new(self.mask(label), self.desc.k()).signs()
    }

    /// Subgroup of `F_2^k` a difference of continuations must be orthogonal to.
    fn test_group(&self, rel: Relation) -> Vec<u64> {
        let k = self.desc.k();
        let all: Vec<u64> = (0..k).map(|i| 1u64 << i).collect();
        match rel {
            Relation::Sigma0 => all,
            Relation::Theta0 => {
                if self.desc.so_even && self.desc.eps0 != 0 {
                    f2::basis(
                        &f2::span(&all)
                            .into_iter()
                            .filter(|&x| !f2::parity(x & self.desc.eps0))
                            .collect::<Vec<_>>(),
                    )
                } else {
                    all
                }
            }
            Relation::GtildeSigma0 => self.desc.ker_alpha_lift(),
            Relation::Gtilde => self.desc.ker_alpha_in(Which::S),
        }
    }

    /// Basis of the differences that do not separate labels under `rel`.
    pub fn invisible(&self, rel: Relation) -> Vec<u64> {
        f2::annihilator(&self.test_group(rel), self.desc.k())
    }
}

/// Labels of one parameter together with the data needed to compare them.
#[derive(Clone, Debug)]
pub struct LabelSpace {
    pub parameter: ArthurParameter,
    pub desc: CentralizerDescriptor,
    /// Good-parity copies, grouped by block as in `desc`.
    pub copies: Vec<JordanBlock>,
    /// The same copies shifted to discrete diagonal restriction.
    pub shifted: Vec<JordanBlock>,
    pub ddr: bool,
}

impl LabelSpace {
    pub fn new(psi: &ArthurParameter) -> Result<LabelSpace> {
        let good = psi.split_good_parity()?.good;
        let desc = CentralizerDescriptor::from_good(&psi.group, good.blocks.clone());
        let copies = good.expanded();
        let ddr = good.is_ddr();
        let shifted = if ddr {
            copies.clone()
        } else {
            let (dom, _) = good.dominating(&good.natural_order())?;
            dom.blocks.into_iter().map(|(b, _)| b).collect()
        };
        Ok(LabelSpace {
            parameter: psi.clone(),
            desc,
            copies,
            shifted,
            ddr,
        })
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn max_l(b: &JordanBlock) -> u32 {
        ((b.width() + 1) / 2) as u32
    }

    /// Full product of the per-copy ranges.
    pub fn enumerate(&self) -> Vec<PacketLabel> {
        let mut out = vec![PacketLabel {
            l: Vec::new(),
            eta: Vec::new(),
        }];
        for b in &self.copies {
            let mut next = Vec::with_capacity(out.len() * 2 * (Self::max_l(b) as usize + 1));
            for lab in &out {
                for l in 0..=Self::max_l(b) {
                    for eta in [Sign::Plus, Sign::Minus] {
                        let mut x = lab.clone();
                        x.l.push(l);
                        x.eta.push(eta);
                        next.push(x);
                    }
                }
            }
            out = next;
        }
        out
    }

    pub fn check(&self, label: &PacketLabel) -> Result<()> {
        if label.l.len() != self.len() || label.eta.len() != self.len() {
            return Err(Error::IndexMismatch {
                expected: self.len(),
                found: label.l.len(),
            });
        }
        for (b, l) in self.copies.iter().zip(&label.l) {
            if *l > Self::max_l(b) {
                return Err(Error::InvalidLabel(format!("l = {l} exceeds the range for {b}")));
            }
        }
        Ok(())
    }

    /// Sign of `ε_{l,η}` on each copy.
    pub fn copy_signs(&self, label: &PacketLabel) -> Vec<Sign> {
        self.copies
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let w = b.width() + 1;
                label.eta[i].pow(w) * Sign::power_of_minus_one(w / 2 + label.l[i] as i64)
            })
            .collect()
    }

    /// `ε_{l,η}` as a character of the component group.
    pub fn epsilon(&self, label: &PacketLabel) -> Character {
        self.desc.cont(&self.copy_signs(label)).expect("one sign per copy")
    }

    pub fn continuation(&self, l: &[u32]) -> Continuation {
        let mut blocks: Vec<(JordanBlock, u32)> = Vec::new();
        let mut slots = Vec::with_capacity(self.shifted.len());
        for (b, &li) in self.shifted.iter().zip(l) {
            let lo = b.big_b() + int(li as i64);
            let hi = b.big_a() - int(li as i64);
            let mut mine = Vec::new();
            let mut c = lo;
            while c <= hi {
                let blk = JordanBlock::from_abz(b.rho.clone(), c, c, b.zeta).expect("elementary block");
                let idx = match blocks.iter().position(|(x, _)| *x == blk) {
                    Some(i) => {
                        blocks[i].1 += 1;
                        i
                    }
                    None => {
                        blocks.push((blk, 1));
                        blocks.len() - 1
                    }
                };
                mine.push(idx);
                c += int(1);
            }
            slots.push(mine);
        }
        let dim: u64 = blocks.iter().map(|(b, m)| b.dim() * *m as u64).sum();
        let group = match self.parameter.group.family {
            Family::Sp => GroupDescriptor::sp(((dim.max(1) - 1) / 2) as u32),
            Family::SoEven => GroupDescriptor::so_even((dim / 2) as u32, self.parameter.group.discriminant.clone()),
        };
        Continuation {
            desc: CentralizerDescriptor::from_good(&group, blocks),
            slots,
        }
    }

    /// Class key of a label; labels are equivalent exactly when the keys agree.
    pub fn key(&self, label: &PacketLabel, cont: &Continuation, rel: Relation) -> (Vec<u32>, u64) {
        (label.l.clone(), f2::reduce(&cont.invisible(rel), cont.mask(label)))
    }

    pub fn equivalent(&self, a: &PacketLabel, b: &PacketLabel, rel: Relation) -> Result<bool> {
        if self.check(a).is_err() || self.check(b).is_err() {
            return Err(Error::ParameterMismatch);
        }
        if a.l != b.l {
            return Ok(false);
        }
        let cont = self.continuation(&a.l);
        Ok(self.key(a, &cont, rel) == self.key(b, &cont, rel))
    }

    /// `Π η_ρ^{(A−(l−1)/2)l} ω_ρ^{(A+B+1)(A−B−l+1)l/2} χ_ρ̃^l` over copies.
    pub fn twist_of(&self, label: &PacketLabel) -> TwistChar {
        let mut t = TwistChar::trivial();
        for (b, &l) in self.copies.iter().zip(&label.l) {
            if l == 0 {
                continue;
            }
            let l = int(l as i64);
            let (a, bb) = (b.big_a(), b.big_b());
            let eta_exp = (a - (l - int(1)) / int(2)) * l;
            let eta = TwistChar::eta_power(&b.rho, &eta_exp).expect("integral exponent on nontrivial characters");
            let omega = (a + bb + int(1)) * (a - bb - l + int(1)) * l / int(2);
            t = t
                .mul(&eta)
                .mul(&TwistChar::omega(&b.rho.name, omega))
                .mul(&TwistChar::chi(&b.rho, l.to_integer()));
        }
        t
    }
}

/// Canonical representative of `t` modulo the subgroup generated by `gens`.
pub fn reduce_tag_mod(t: &QuadTag, gens: &[QuadTag]) -> QuadTag {
    let mut best = t.clone();
    let key = |x: &QuadTag| (x.factors().count(), x.clone());
    for pick in 0u64..(1u64 << gens.len().min(20)) {
        let mut x = t.clone();
        for (i, g) in gens.iter().enumerate() {
            if pick >> i & 1 == 1 {
                x = x.mul(g);
            }
        }
        if key(&x) < key(&best) {
            best = x;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketElement {
    /// Least label of the class.
    pub label: PacketLabel,
    pub epsilon: Character,
    pub twist: TwistChar,
    /// Least labels of the `Σ0`-classes inside this class.
    pub restriction: Vec<PacketLabel>,
}

#[derive(Clone, Debug)]
pub struct Packet {
    pub parameter: ArthurParameter,
    pub level: Level,
    pub epsilon: Option<Character>,
    pub elements: Vec<PacketElement>,
    /// Quadratic characters twists are read modulo.
    pub twist_modulus: Vec<QuadTag>,
    /// Set when members may vanish: the parameter lacks discrete diagonal restriction.
    pub nonvanishing_unknown: bool,
}

impl Packet {
    pub fn char_map(&self) -> Vec<(PacketLabel, Character)> {
        self.elements.iter().map(|e| (e.label.clone(), e.epsilon)).collect()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "parameter": parameter_to_value(&self.parameter),
            "level": self.level,
            "epsilon": self.epsilon,
            "nonvanishing_unknown": self.nonvanishing_unknown,
            "elements": self.elements.iter().map(|e| {
                let mut v = e.label.to_value();
                v["epsilon"] = serde_json::to_value(e.epsilon).expect("signs serialize");
                v["twist"] = e.twist.to_value();
                v["restriction"] = Value::Array(e.restriction.iter().map(PacketLabel::to_value).collect());
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// All packet members at `level`, optionally only those with character `epsilon`.
pub fn packet(psi: &ArthurParameter, level: Level, epsilon: Option<&Character>) -> Result<Packet> {
    let space = LabelSpace::new(psi)?;
    if let Some(e) = epsilon {
        space.desc.check_character(e)?;
    }
    let which = if level == Level::Classical {
        Which::S
    } else {
        Which::SSigma0
    };
    let wanted = epsilon.map(|e| space.desc.reduce_char(e.mask, which));
    let mut by_l: BTreeMap<Vec<u32>, Vec<PacketLabel>> = BTreeMap::new();
    for lab in space.enumerate() {
        let eps = space.epsilon(&lab);
        if !space.desc.is_character(eps.mask) {
            continue;
        }
        if let Some(w) = wanted {
            if space.desc.reduce_char(eps.mask, which) != w {
                continue;
            }
        }
        by_l.entry(lab.l.clone()).or_default().push(lab);
    }
    let mut modulus = space.desc.x_group();
    modulus.push(psi.group.discriminant.clone());
    let mut elements = Vec::new();
    for (l, labels) in by_l {
        let cont = space.continuation(&l);
        let coarse = cont.invisible(level.relation());
        let fine = cont.invisible(Relation::Sigma0);
        let mut classes: BTreeMap<u64, BTreeMap<u64, PacketLabel>> = BTreeMap::new();
        for lab in labels {
            let m = cont.mask(&lab);
            let slot = classes
                .entry(f2::reduce(&coarse, m))
                .or_default()
                .entry(f2::reduce(&fine, m))
                .or_insert(lab.clone());
            if lab < *slot {
                *slot = lab;
            }
        }
        for (_, inner) in classes {
            let restriction: BTreeSet<PacketLabel> = inner.into_values().collect();
            let rep = restriction.iter().next().expect("classes are nonempty").clone();
            let mut twist = space.twist_of(&rep);
            twist.eta = reduce_tag_mod(&twist.eta, &modulus);
            elements.push(PacketElement {
                epsilon: space.epsilon(&rep),
                label: rep,
                twist,
                restriction: restriction.into_iter().collect(),
            });
        }
    }
    elements.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(Packet {
        parameter: psi.clone(),
        level,
        epsilon: epsilon.copied(),
        elements,
        twist_modulus: modulus,
        nonvanishing_unknown: !space.ddr,
    })
}

pub fn epsilon_of_label(psi: &ArthurParameter, label: &PacketLabel) -> Result<Character> {
    let space = LabelSpace::new(psi)?;
    space.check(label)?;
    Ok(space.epsilon(label))
}

pub fn enumerate_labels(psi: &ArthurParameter) -> Result<Vec<PacketLabel>> {
    Ok(LabelSpace::new(psi)?.enumerate())
}

pub fn equivalent(psi: &ArthurParameter, a: &PacketLabel, b: &PacketLabel, rel: Relation) -> Result<bool> {
    LabelSpace::new(psi)?.equivalent(a, b, rel)
}

/// Members of `π(ψ, ε)` up to `∼_{Σ0}`.
pub fn classical_packet(psi: &ArthurParameter, epsilon: &Character) -> Result<Packet> {
    packet(psi, Level::ClassicalSigma0, Some(epsilon))
}

pub fn similitude_packet(psi: &ArthurParameter) -> Result<Packet> {
    packet(psi, Level::Similitude, None)
}

pub fn restriction(element: &PacketElement) -> Vec<PacketLabel> {
    element.restriction.clone()
}

/// `element ↦ ε(s · s_ψ)`.
pub fn stable_sum(packet: &Packet, s: &SignVector) -> Result<Vec<(PacketLabel, Sign)>> {
    let desc = CentralizerDescriptor::build(&packet.parameter)?;
    let ss = s.mul(&desc.s_psi())?;
    packet
        .elements
        .iter()
        .map(|e| Ok((e.label.clone(), pairing(&e.epsilon, &ss)?)))
        .collect()
}

/// Per label, blocks can be ordered with `ζ = +` and both `A` and `B` nondecreasing.
pub fn check_ladder(psi: &ArthurParameter) -> Result<()> {
    if !psi.is_good_parity() {
        return Err(Error::LadderConditionViolated("parameter is not of good parity".into()));
    }
    for rho in psi.rho_names() {
        let mut blocks: Vec<&JordanBlock> = psi
            .blocks
            .iter()
            .map(|(b, _)| b)
            .filter(|b| b.rho.name == rho)
            .collect();
        if let Some(b) = blocks.iter().find(|b| b.zeta == Sign::Minus) {
            return Err(Error::LadderConditionViolated(format!("{b} has zeta = -")));
        }
        blocks.sort_by_key(|b| (b.big_a(), b.big_b()));
        for w in blocks.windows(2) {
            if w[1].big_b() < w[0].big_b() {
                return Err(Error::LadderConditionViolated(format!(
                    "{} and {} cannot be ordered",
                    w[0], w[1]
                )));
            }
        }
    }
    Ok(())
}

/// Members whose label has the largest `l` on every copy.
pub fn l_packet_sublabels(psi: &ArthurParameter) -> Result<Vec<PacketElement>> {
    check_ladder(psi)?;
    let space = LabelSpace::new(psi)?;
    let full = packet(psi, Level::ClassicalSigma0, None)?;
    Ok(full
        .elements
        .into_iter()
        .filter(|e| {
            e.label
                .l
                .iter()
                .zip(&space.copies)
                .all(|(l, b)| *l == LabelSpace::max_l(b))
        })
        .collect())
}

/// The same labels read on the parameter with `(a, b)` swapped on `rhos`.
pub fn involution_relabel(p: &Packet, rhos: &BTreeSet<String>) -> Result<Packet> {
    let dual = p.parameter.sharp_dual(rhos)?;
    packet(&dual, p.level, p.epsilon.as_ref())
}

pub fn twist(p: &Packet, omega: &QuadTag) -> Packet {
    let mut out = p.clone();
    for e in &mut out.elements {
        e.twist.eta = reduce_tag_mod(&e.twist.eta.mul(omega), &p.twist_modulus);
    }
    out
}
