//! Component groups of centralizers as quotients of `F_2^k`, with their characters.
//!
//! Sign vectors are bit masks: bit `i` set means the `i`-th coordinate is `−1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::param_core::{ArthurParameter, Family, GroupDescriptor, JordanBlock, QuadTag, Sign};

/// Linear algebra over `F_2` on `u64` masks.
pub mod f2 {
    pub fn parity(x: u64) -> bool {
        x.count_ones() % 2 == 1
    }

    /// Row-reduced basis of the span.
    pub fn basis(vectors: &[u64]) -> Vec<u64> {
        let mut rows: Vec<u64> = Vec::new();
        for &v in vectors {
            let mut x = v;
            for &r in &rows {
                x = x.min(x ^ r);
            }
            if x != 0 {
                rows.push(x);
                rows.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        rows
    }

    pub fn rank(vectors: &[u64]) -> usize {
        basis(vectors).len()
    }

    pub fn in_span(basis_rows: &[u64], v: u64) -> bool {
        let mut x = v;
        for &r in basis_rows {
            x = x.min(x ^ r);
        }
        x == 0
    }

    /// Every element of the span of `gens`.
    pub fn span(gens: &[u64]) -> Vec<u64> {
        let b = basis(gens);
        let mut out = Vec::with_capacity(1 << b.len());
        for pick in 0u64..(1u64 << b.len()) {
            let mut x = 0;
            for (i, &r) in b.iter().enumerate() {
                if pick >> i & 1 == 1 {
                    x ^= r;
                }
            }
            out.push(x);
        }
        out.sort_unstable();
        out
    }

    /// Basis of `{x ∈ F_2^k : Σ x_j cols[j] = 0}`.
    pub fn kernel(cols: &[u64]) -> Vec<u64> {
        // reduce the augmented rows (image | identity)
        let k = cols.len();
        let mut rows: Vec<(u64, u64)> = cols.iter().enumerate().map(|(j, &c)| (c, 1u64 << j)).collect();
        let mut out = Vec::new();
        let mut pivot_rows: Vec<(u64, u64)> = Vec::new();
        for (img, tag) in rows.drain(..) {
            let (mut img, mut tag) = (img, tag);
            for &(pi, pt) in &pivot_rows {
                if img ^ pi < img {
                    img ^= pi;
                    tag ^= pt;
                }
            }
            if img == 0 {
                out.push(tag);
            } else {
                pivot_rows.push((img, tag));
                pivot_rows.sort_unstable_by(|a, b| b.0.cmp(&a.0));
            }
        }
        debug_assert!(out.len() + pivot_rows.len() == k);
        out
    }

    /// Basis of `{x ∈ F_2^k : x · v = 0 for every v}`.
    pub fn annihilator(vectors: &[u64], k: usize) -> Vec<u64> {
        let cols: Vec<u64> = (0..k)
            .map(|j| {
                vectors
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| *v >> j & 1 == 1)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        basis(&kernel(&cols))
    }

    /// Least element of the coset `x + span(rows)`, for `rows` as returned by `basis`.
    pub fn reduce(rows: &[u64], x: u64) -> u64 {
        rows.iter().fold(x, |x, &r| x.min(x ^ r))
    }
}

/// A vector of signs indexed by an ordered Jordan set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    pub mask: u64,
    pub len: usize,
}

/// Characters share the representation of sign vectors through the self-duality of `F_2^k`.
pub type Character = SignVector;

impl SignVector {
    pub fn new(mask: u64, len: usize) -> SignVector {
        debug_assert!(len <= 64 && (len == 64 || mask >> len == 0));
        SignVector { mask, len }
    }

    pub fn trivial(len: usize) -> SignVector {
        SignVector { mask: 0, len }
    }

    pub fn from_signs(signs: &[Sign]) -> SignVector {
        let mask = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_minus())
            .fold(0u64, |m, (i, _)| m | 1 << i);
        SignVector { mask, len: signs.len() }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn get(&self, i: usize) -> Sign {
        if self.mask >> i & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn mul(&self, other: &SignVector) -> Result<SignVector> {
        check_len(self.len, other.len)?;
        Ok(SignVector {
            mask: self.mask ^ other.mask,
            len: self.len,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.mask == 0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<i64> = self.signs().iter().map(|x| x.to_i64()).collect();
        v.serialize(s)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::IndexMismatch { expected, found });
    }
    Ok(())
}

/// `ε(s) = Π (ε_i ∗ s_i)`.
pub fn pairing(eps: &Character, s: &SignVector) -> Result<Sign> {
    check_len(eps.len, s.len)?;
    Ok(pair_masks(eps.mask, s.mask))
}

pub fn pair_masks(eps: u64, s: u64) -> Sign {
    if f2::parity(eps & s) {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

/// Which of the two component groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    /// `S_ψ^{Σ0}`.
    SSigma0,
    /// `S_ψ`; differs only for even orthogonal groups.
    S,
}

/// `F_2` presentation of the component group over the distinct good-parity blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerDescriptor {
    pub group: GroupDescriptor,
    pub blocks: Vec<(JordanBlock, u32)>,
    pub s0: u64,
    pub eps0: u64,
    pub so_even: bool,
}

/// Image of `α`: a quadratic character modulo the discriminant.
pub type TwistCharacterSymbol = QuadTag;

impl CentralizerDescriptor {
    pub fn build(psi: &ArthurParameter) -> Result<CentralizerDescriptor> {
        let good = psi.split_good_parity()?.good;
        Ok(CentralizerDescriptor::from_good(&psi.group, good.blocks))
    }

    /// From blocks already known to be of good parity.
    pub fn from_good(group: &GroupDescriptor, blocks: Vec<(JordanBlock, u32)>) -> CentralizerDescriptor {
        assert!(
            blocks.len() <= 64,
            "at most 64 distinct good-parity blocks are supported"
        );
        let mut s0 = 0u64;
        let mut eps0 = 0u64;
        for (i, (b, l)) in blocks.iter().enumerate() {
            if l % 2 == 1 {
                s0 |= 1 << i;
            }
            if b.dim() % 2 == 1 {
                eps0 |= 1 << i;
            }
        }
        CentralizerDescriptor {
            group: group.clone(),
            blocks,
            s0,
            eps0,
            so_even: group.family == Family::SoEven,
        }
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    fn full(&self) -> u64 {
        if self.k() == 64 {
            u64::MAX
        } else {
            (1u64 << self.k()) - 1
        }
    }

    /// `ε_0` only constrains anything on even orthogonal groups.
    fn eps0_active(&self, which: Which) -> bool {
        which == Which::S && self.so_even && self.eps0 != 0
    }

    /// Coset representative modulo `⟨v⟩`: the coordinate at the lowest bit of `v` is `+`.
    fn reduce(x: u64, v: u64) -> u64 {
        if v != 0 && x & (v & v.wrapping_neg()) != 0 {
            x ^ v
        } else {
            x
        }
    }

    pub fn reduce_s(&self, s: u64) -> u64 {
        Self::reduce(s, self.s0)
    }

    pub fn reduce_char(&self, eps: u64, which: Which) -> u64 {
        if self.eps0_active(which) {
            Self::reduce(eps, self.eps0)
        } else {
            eps
        }
    }

    /// Coset representatives of the group, ascending.
    pub fn elements(&self, which: Which) -> Vec<SignVector> {
        let mut out = BTreeSet::new();
        for s in 0..=self.full() {
            if self.eps0_active(which) && f2::parity(s & self.eps0) {
                continue;
            }
            out.insert(self.reduce_s(s));
        }
        out.into_iter().map(|m| SignVector::new(m, self.k())).collect()
    }

    pub fn order(&self, which: Which) -> u64 {
        let quotient = self.k() - f2::rank(&[self.s0]);
        let sub = if self.eps0_active(which) { 1 } else { 0 };
        1u64 << (quotient - sub)
    }

    pub fn is_character(&self, eps: u64) -> bool {
        eps & !self.full() == 0 && !f2::parity(eps & self.s0)
    }

    /// All characters, as canonical representatives, ascending.
    pub fn characters(&self, which: Which) -> Vec<Character> {
        let mut out = BTreeSet::new();
        for e in 0..=self.full() {
            if self.is_character(e) {
                out.insert(self.reduce_char(e, which));
            }
        }
        out.into_iter().map(|m| SignVector::new(m, self.k())).collect()
    }

    pub fn check_character(&self, eps: &Character) -> Result<()> {
        check_len(self.k(), eps.len)?;
        if !self.is_character(eps.mask) {
            return Err(Error::CharacterNotInDual);
        }
        Ok(())
    }

    /// Quadratic characters involved in `α`, with the discriminant last when present.
    fn tag_names(&self) -> Vec<String> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        for (b, _) in &self.blocks {
            names.extend(b.eta().factors().map(str::to_string));
        }
        names.extend(self.group.discriminant.factors().map(str::to_string));
        names.into_iter().collect()
    }

    fn tag_mask(names: &[String], tag: &QuadTag) -> u64 {
        tag.factors().fold(0, |m, f| {
            m | 1 << names.iter().position(|n| n == f).expect("name is listed")
        })
    }

    /// `α(s)`, reduced modulo the discriminant.
    pub fn alpha(&self, s: &SignVector) -> Result<TwistCharacterSymbol> {
        check_len(self.k(), s.len)?;
        let raw = self
            .blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| s.mask >> i & 1 == 1)
            .fold(QuadTag::trivial(), |acc, (_, (b, _))| acc.mul(&b.eta()));
        Ok(self.reduce_tag(&raw))
    }

    /// Canonical representative of `{t, t·disc}`: fewer factors first, then the smaller set.
    pub fn reduce_tag(&self, t: &QuadTag) -> QuadTag {
        let other = t.mul(&self.group.discriminant);
        let key = |x: &QuadTag| (x.factors().count(), x.clone());
        if key(&other) < key(t) {
            other
        } else {
            t.clone()
        }
    }

    /// Preimage of `ker α` in `F_2^k`; it contains `s_0`.
    pub fn ker_alpha_lift(&self) -> Vec<u64> {
        let names = self.tag_names();
        let mut cols: Vec<u64> = self
            .blocks
            .iter()
            .map(|(b, _)| Self::tag_mask(&names, &b.eta()))
            .collect();
        let disc = Self::tag_mask(&names, &self.group.discriminant);
        if disc != 0 {
            cols.push(disc);
        }
        let full = self.full();
        let lifted: Vec<u64> = f2::kernel(&cols).into_iter().map(|x| x & full).collect();
        f2::basis(&lifted)
    }

    /// Coset representatives of `ker α` inside `S_ψ^{Σ0}`.
    pub fn ker_alpha(&self) -> Vec<SignVector> {
        let lift = self.ker_alpha_lift();
        let mut out: BTreeSet<u64> = BTreeSet::new();
        for x in f2::span(&lift) {
            out.insert(self.reduce_s(x));
        }
        out.into_iter().map(|m| SignVector::new(m, self.k())).collect()
    }

    /// `X = α(S_ψ^{Σ0})`.
    pub fn x_group(&self) -> Vec<TwistCharacterSymbol> {
        let mut out: BTreeSet<QuadTag> = BTreeSet::new();
        for s in self.elements(Which::SSigma0) {
            out.insert(self.alpha(&s).expect("lengths agree"));
        }
        out.into_iter().collect()
    }

    /// `ker α ∩ S_ψ`, as lifts in `F_2^k`.
    pub fn ker_alpha_in(&self, which: Which) -> Vec<u64> {
        let lift = self.ker_alpha_lift();
        if !self.eps0_active(which) {
            return lift;
        }
        f2::basis(
            &f2::span(&lift)
                .into_iter()
                .filter(|&x| !f2::parity(x & self.eps0))
                .collect::<Vec<_>>(),
        )
    }

    /// Product over copies of each block.
    pub fn cont(&self, s: &[Sign]) -> Result<SignVector> {
        let total: usize = self.blocks.iter().map(|(_, l)| *l as usize).sum();
        check_len(total, s.len())?;
        let mut mask = 0u64;
        let mut pos = 0;
        for (i, (_, l)) in self.blocks.iter().enumerate() {
            let prod = s[pos..pos + *l as usize].iter().fold(Sign::Plus, |a, &b| a * b);
            if prod.is_minus() {
                mask |= 1 << i;
            }
            pos += *l as usize;
        }
        Ok(SignVector::new(mask, self.k()))
    }

    /// Replicate each value over the copies of its block.
    pub fn ext(&self, eps: &Character) -> Result<Vec<Sign>> {
        check_len(self.k(), eps.len)?;
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(i, (_, l))| std::iter::repeat_n(eps.get(i), *l as usize))
            .collect())
    }

    /// Image of the central element of the second `SL(2)`.
    pub fn s_psi(&self) -> SignVector {
        let expanded: Vec<Sign> = self
            .blocks
            .iter()
            .flat_map(|(b, l)| std::iter::repeat_n(b.sign_of_minus_one(), *l as usize))
            .collect();
        self.cont(&expanded).expect("lengths agree")
    }

    /// `m_ψ |S|^{-1} Σ_s ε_π(s) ε_ψ(s)`.
    pub fn multiplicity(&self, char_of_pi: &Character, eps_psi: &Character, m_psi: u32, which: Which) -> Result<u64> {
        self.check_character(char_of_pi)?;
        self.check_character(eps_psi)?;
        let elements = self.elements(which);
        let total: i64 = elements
            .iter()
            .map(|s| (pair_masks(char_of_pi.mask, s.mask) * pair_masks(eps_psi.mask, s.mask)).to_i64())
            .sum();
        let value = m_psi as i64 * total;
        let order = elements.len() as i64;
        debug_assert!(value % order == 0 && value >= 0);
        Ok((value / order) as u64)
    }
}

/// Shorthand for the descriptor of a parameter.
pub fn build(psi: &ArthurParameter) -> Result<CentralizerDescriptor> {
    CentralizerDescriptor::build(psi)
}

pub fn s_psi(psi: &ArthurParameter) -> Result<SignVector> {
    Ok(build(psi)?.s_psi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param_core::{Cuspidal, GroupDescriptor};

    fn blk(r: &Cuspidal, a: u32, b: u32) -> JordanBlock {
        JordanBlock::from_ab(r.clone(), a, b, None).unwrap()
    }

    fn psi_b() -> ArthurParameter {
        let r = Cuspidal::trivial_character("rho1");
        ArthurParameter::new(GroupDescriptor::sp(4), vec![(blk(&r, 2, 2), 1), (blk(&r, 5, 1), 1)])
    }

    fn psi_c() -> ArthurParameter {
        let r = Cuspidal::trivial_character("rho1");
        let chi = Cuspidal::quadratic_character("chi");
        ArthurParameter::new(
            GroupDescriptor::sp(2),
            vec![(blk(&chi, 3, 1), 1), (blk(&chi, 1, 1), 1), (blk(&r, 1, 1), 1)],
        )
    }

    fn sv(s: &str) -> SignVector {
        SignVector::from_signs(&crate::param_core::parse_signs(s).unwrap())
    }

    #[test]
    fn kernel_of_a_small_map() {
        let k = f2::kernel(&[0b01, 0b01, 0b10]);
        assert_eq!(f2::span(&k), vec![0, 0b011]);
        assert_eq!(f2::rank(&[0b11, 0b01, 0b10]), 2);
    }

    #[test]
    fn annihilator_and_cosets() {
        let ann = f2::annihilator(&[0b011], 3);
        assert_eq!(f2::span(&ann), vec![0, 0b011, 0b100, 0b111]);
        let rows = f2::basis(&[0b110]);
        assert_eq!(f2::reduce(&rows, 0b101), 0b011);
        assert_eq!(f2::reduce(&rows, 0b011), 0b011);
    }

    #[test]
    fn orders_of_examples() {
        let c = build(&psi_c()).unwrap();
        assert_eq!((c.k(), c.order(Which::SSigma0)), (3, 4));
        let b = build(&psi_b()).unwrap();
        assert_eq!((b.k(), b.order(Which::SSigma0)), (2, 2));
        let r = Cuspidal::trivial_character("rho1");
        let p = ArthurParameter::new(GroupDescriptor::sp(2), vec![(blk(&r, 1, 1), 2), (blk(&r, 3, 1), 1)]);
        let d = build(&p).unwrap();
        assert_eq!(SignVector::new(d.s0, 2), sv("+-"));
    }

    #[test]
    fn character_lists() {
        assert_eq!(
            build(&psi_b()).unwrap().characters(Which::SSigma0),
            vec![sv("++"), sv("--")]
        );
        assert_eq!(build(&psi_c()).unwrap().characters(Which::SSigma0).len(), 4);
        let r = Cuspidal::trivial_character("rho1");
        let single = ArthurParameter::new(GroupDescriptor::sp(0), vec![(blk(&r, 1, 1), 1)]);
        assert_eq!(build(&single).unwrap().characters(Which::SSigma0), vec![sv("+")]);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&sv("--"), &sv("-+")).unwrap(), Sign::Minus);
        assert_eq!(pairing(&sv("++"), &sv("--")).unwrap(), Sign::Plus);
        assert_eq!(pairing(&sv("-"), &sv("-")).unwrap(), Sign::Minus);
        assert!(pairing(&sv("-"), &sv("--")).is_err());
    }

    #[test]
    fn cont_and_ext() {
        let r = Cuspidal::trivial_character("rho1");
        let p = ArthurParameter::new(GroupDescriptor::sp(2), vec![(blk(&r, 1, 1), 2), (blk(&r, 3, 1), 1)]);
        let d = build(&p).unwrap();
        assert_eq!(d.cont(&[Sign::Minus, Sign::Minus, Sign::Plus]).unwrap(), sv("++"));
        assert_eq!(d.ext(&sv("++")).unwrap(), vec![Sign::Plus; 3]);
    }

    #[test]
    fn alpha_on_psi_c() {
        let d = build(&psi_c()).unwrap();
        assert_eq!(d.alpha(&sv("-++")).unwrap(), QuadTag::named("chi"));
        assert_eq!(d.alpha(&sv("--+")).unwrap(), QuadTag::trivial());
        assert_eq!(d.alpha(&sv("+++")).unwrap(), QuadTag::trivial());
        assert_eq!(d.ker_alpha().len(), 2);
        assert_eq!(d.x_group(), vec![QuadTag::trivial(), QuadTag::named("chi")]);
        let b = build(&psi_b()).unwrap();
        assert_eq!(b.ker_alpha().len(), 2);
        assert_eq!(b.x_group(), vec![QuadTag::trivial()]);
    }

    #[test]
    fn s_psi_examples() {
        assert_eq!(build(&psi_b()).unwrap().s_psi(), sv("-+"));
        assert!(build(&psi_c()).unwrap().s_psi().is_trivial());
    }

    #[test]
    fn multiplicity_examples() {
        let b = build(&psi_b()).unwrap();
        assert_eq!(b.multiplicity(&sv("--"), &sv("--"), 1, Which::SSigma0).unwrap(), 1);
        assert_eq!(b.multiplicity(&sv("++"), &sv("--"), 1, Which::SSigma0).unwrap(), 0);
        let r = Cuspidal::trivial_character("rho1");
        let single = build(&ArthurParameter::new(GroupDescriptor::sp(0), vec![(blk(&r, 1, 1), 1)])).unwrap();
        assert_eq!(single.multiplicity(&sv("+"), &sv("+"), 2, Which::SSigma0).unwrap(), 2);
    }

    #[test]
    fn even_orthogonal_quotient() {
        let r = Cuspidal::trivial_character("rho1");
        let p = ArthurParameter::new(
            GroupDescriptor::so_even(2, QuadTag::trivial()),
            vec![(blk(&r, 3, 1), 1), (blk(&r, 1, 1), 1)],
        );
        let d = build(&p).unwrap();
        assert_eq!(d.order(Which::SSigma0), 2);
        assert_eq!(d.order(Which::S), 1);
        assert_eq!(d.characters(Which::S), vec![sv("++")]);
        assert_eq!(d.elements(Which::S).len(), 1);
    }
}
