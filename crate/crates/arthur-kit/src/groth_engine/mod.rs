//! Formal Grothendieck-group calculus for packets with discrete diagonal restriction.
//!
//! Terms are kept in the flattened shape `twist ⊗ Ind(segments) ⋊ Jac_word(atom)`.
//! Jacquet functors are pushed through induced representations with the Tadić rule
//! until they reach an atom, where they stay unevaluated. Atoms that are not elementary
//! are expanded recursively along one reducible block.
//!
//! All cuspidal labels reaching the engine are self-dual, so a letter `Jac^ρ_x` removes
//! `ρ|·|^x` and `ρ|·|^{-x}` from the infinitesimal character.

mod term;
mod twist;

use std::collections::HashMap;

use num_traits::One;
use serde::Serialize;

pub use term::{
    commute, jac_shift_matrix, normal_word, shift_word, word_to_string, Atom, FormalSum, Letter, Segment, Term,
};
pub use twist::TwistChar;

use crate::component_group::{f2, CentralizerDescriptor, Character};
use crate::error::{Error, Result};
use crate::packet_enum::reduce_tag_mod;
use crate::param_core::{
    int, ArthurParameter, Cuspidal, Family, GroupDescriptor, InfChar, JordanBlock, Rational, Sign,
};

pub const CONVENTION_ENV: &str = "ARTHUR_KIT_CONVENTION";

/// How an empty block `(ρ, B−1, B, ζ; η)` left behind by the recursion is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    /// The block is dropped and the atom vanishes unless `η = +`.
    #[serde(rename = "zero-unless-eta-matches")]
    ZeroUnlessEtaMatches,
    /// The block and its sign are dropped.
    #[serde(rename = "discard-eta")]
    DiscardEta,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::ZeroUnlessEtaMatches, Convention::DiscardEta];

    /// The convention the reconciliation suite singles out.
    pub const FROZEN: Convention = Convention::ZeroUnlessEtaMatches;

    pub fn id(self) -> &'static str {
        match self {
            Convention::ZeroUnlessEtaMatches => "zero-unless-eta-matches",
            Convention::DiscardEta => "discard-eta",
        }
    }

    pub fn parse(s: &str) -> Result<Convention> {
        Convention::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Schema(format!("unknown empty-block convention {s:?}")))
    }

    /// The frozen convention unless overridden through the environment.
    pub fn from_env() -> Result<Convention> {
        match std::env::var(CONVENTION_ENV) {
            Ok(s) if !s.is_empty() => Convention::parse(&s),
            _ => Ok(Convention::FROZEN),
        }
    }
}

/// Whether atoms are packets of the classical group or of the similitude group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomLevel {
    Classical,
    Similitude,
}

/// Which reducible block the recursion splits first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockPolicy {
    /// Largest `A − B`, ties broken by the atom's block order.
    Widest,
    /// First reducible block in the atom's block order.
    First,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub level: AtomLevel,
    pub convention: Convention,
    pub policy: BlockPolicy,
    /// Flip the signs of the `X̃_η` terms when expanding away from the first reducible block.
    /// Only for testing the checks themselves.
    pub fault: bool,
    /// Apply the shift contraction in `jac_apply`.
    pub shift_contraction: bool,
    /// Bound on rewrite steps.
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            level: AtomLevel::Similitude,
            convention: Convention::FROZEN,
            policy: BlockPolicy::Widest,
            fault: false,
            shift_contraction: false,
            budget: 50_000_000,
        }
    }
}

impl Config {
    pub fn at(level: AtomLevel) -> Config {
        Config {
            level,
            ..Config::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Indices of the reducible blocks, in the atom's order.
    pub blocks: Vec<usize>,
    pub equal: bool,
    /// First expansion minus the first one that disagrees with it.
    pub diff: FormalSum,
}

/// A block to add to an atom: `(ρ, A, B, ζ; sign)`; `A = B − 1` marks an empty block.
type NewBlock = (Cuspidal, Rational, Rational, Sign, Sign);

pub struct Engine {
    pub config: Config,
    memo: HashMap<Atom, FormalSum>,
    counts: HashMap<Atom, u64>,
    work: usize,
}

fn group_like(base: &GroupDescriptor, blocks: &[(JordanBlock, Sign)]) -> GroupDescriptor {
    let dim: u64 = blocks.iter().map(|(b, _)| b.dim()).sum();
    match base.family {
        Family::Sp => GroupDescriptor::sp(((dim.max(1) - 1) / 2) as u32),
        Family::SoEven => GroupDescriptor::so_even((dim / 2) as u32, base.discriminant.clone()),
    }
}

fn minus_one_to(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(B+1)/2 + ((B+2) + ⋯ + C)`.
fn gamma(b: Rational, c: Rational) -> Rational {
    let mut g = (b + Rational::one()) / int(2);
    let mut x = b + int(2);
    while x <= c {
        g += x;
        x += Rational::one();
    }
    g
}

/// Indices of letters that can be moved to the front of the word.
fn front_letters(word: &[Letter]) -> Vec<usize> {
    (0..word.len())
        .filter(|&i| word[..i].iter().all(|y| commute(y, &word[i])))
        .collect()
}

/// Whether the word can start with the letter at `p` twice.
fn doubled_front(word: &[Letter], p: usize) -> bool {
    let l = &word[p];
    (p + 1..word.len()).any(|q| word[q] == *l && word[..q].iter().enumerate().all(|(i, y)| i == p || commute(y, l)))
}

/// `x` with `ζx = letter` lies in `[lo, hi]` on the lattice of the block.
fn letter_in(b: &JordanBlock, l: &Letter, lo: Rational, hi: Rational) -> bool {
    if l.rho != b.rho.name {
        return false;
    }
    let x = l.x * int(b.zeta.to_i64());
    x >= lo && x <= hi && (x - lo).is_integer()
}

impl Engine {
    pub fn new(config: Config) -> Engine {
        Engine {
            config,
            memo: HashMap::new(),
            counts: HashMap::new(),
            work: 0,
        }
    }

    pub fn with_level(level: AtomLevel) -> Result<Engine> {
        Ok(Engine::new(Config {
            convention: Convention::from_env()?,
            ..Config::at(level)
        }))
    }

    fn charge(&mut self, n: usize) -> Result<()> {
        self.work += n;
        if self.work > self.config.budget {
            return Err(Error::NonTermination(self.config.budget));
        }
        Ok(())
    }

    /// Sign changes on the blocks that this level cannot see.
    pub fn invisible(&self, group: &GroupDescriptor, blocks: &[(JordanBlock, Sign)]) -> Vec<u64> {
        match self.config.level {
            AtomLevel::Classical => Vec::new(),
            AtomLevel::Similitude => {
                let desc =
                    CentralizerDescriptor::from_good(group, blocks.iter().map(|(b, _)| (b.clone(), 1)).collect());
                f2::annihilator(&desc.ker_alpha_lift(), desc.k())
            }
        }
    }

    /// Canonical atom: blocks sorted, signs reduced to the least equivalent choice.
    pub fn make_atom(&self, group: &GroupDescriptor, mut blocks: Vec<(JordanBlock, Sign)>) -> Atom {
        blocks.sort();
        let inv = self.invisible(group, &blocks);
        let mut atom = Atom {
            group: group.clone(),
            blocks,
        };
        let mask = f2::reduce(&inv, atom.mask());
        for (i, (_, s)) in atom.blocks.iter_mut().enumerate() {
            *s = if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus };
        }
        atom
    }

    /// `π(ψ, ε)` for `ε` indexed by the blocks of `ψ`.
    pub fn atom_of(&self, psi: &ArthurParameter, eps: &Character) -> Result<Atom> {
        if !psi.is_ddr() {
            return Err(Error::NotDdr);
        }
        if eps.len != psi.blocks.len() {
            return Err(Error::IndexMismatch {
                expected: psi.blocks.len(),
                found: eps.len,
            });
        }
        let blocks = psi
            .blocks
            .iter()
            .enumerate()
            .map(|(i, (b, _))| (b.clone(), eps.get(i)))
            .collect();
        Ok(self.make_atom(&psi.group, blocks))
    }

    /// Position in the canonical atom of the block declared at `index` in `ψ`.
    pub fn atom_index(psi: &ArthurParameter, atom: &Atom, index: usize) -> Result<usize> {
        let (b, _) = psi.blocks.get(index).ok_or(Error::BlockOutOfRange(index))?;
        atom.blocks
            .iter()
            .position(|(x, _)| x == b)
            .ok_or(Error::BlockOutOfRange(index))
    }

    fn extend(&self, group: &GroupDescriptor, rest: &[(JordanBlock, Sign)], new: &[NewBlock]) -> Result<Option<Atom>> {
        let mut blocks = rest.to_vec();
        for (rho, a, b, zeta, s) in new {
            if *a < *b {
                debug_assert!(*a == *b - int(1));
                if self.config.convention == Convention::ZeroUnlessEtaMatches && s.is_minus() {
                    return Ok(None);
                }
                continue;
            }
            blocks.push((JordanBlock::from_abz(rho.clone(), *a, *b, *zeta)?, *s));
        }
        let g = group_like(group, &blocks);
        Ok(Some(self.make_atom(&g, blocks)))
    }

    fn reduce_twist(&self, mut t: TwistChar, atom: &Atom) -> TwistChar {
        match self.config.level {
            AtomLevel::Classical => TwistChar::trivial(),
            AtomLevel::Similitude => {
                let mut gens: Vec<_> = atom.blocks.iter().map(|(b, _)| b.eta()).collect();
                gens.push(atom.group.discriminant.clone());
                gens.sort();
                gens.dedup();
                gens.retain(|g| !g.is_trivial());
                t.eta = reduce_tag_mod(&t.eta, &gens);
                t
            }
        }
    }

    /// Canonical form of a term, or `None` when the cuspidal support rules it out.
    pub fn normalize(&self, mut term: Term) -> Option<Term> {
        term.segments.sort();
        term.word = normal_word(&term.word);
        let mut ic = term.atom.inf_char();
        for l in &term.word {
            if !(ic.remove_one(&l.rho, l.x) && ic.remove_one(&l.rho, -l.x)) {
                return None;
            }
        }
        term.twist = self.reduce_twist(term.twist, &term.atom);
        Some(term)
    }

    pub fn normal_form(&mut self, sum: &FormalSum) -> Result<FormalSum> {
        self.charge(sum.len())?;
        let mut out = FormalSum::new();
        for (t, c) in sum.iter() {
            if let Some(t) = self.normalize(t.clone()) {
                out.add_term(t, *c);
            }
        }
        Ok(out)
    }

    /// One Jacquet functor through `Ind(segments)`, by the Tadić rule.
    fn apply_letter(&mut self, term: &Term, letter: &Letter) -> Result<FormalSum> {
        self.charge(1 + term.segments.len())?;
        let mut out = FormalSum::new();
        for (i, s) in term.segments.iter().enumerate() {
            if s.rho.name != letter.rho {
                continue;
            }
            if s.first == letter.x {
                let mut t = term.clone();
                match s.without_first() {
                    Some(n) => t.segments[i] = n,
                    None => {
                        t.segments.remove(i);
                    }
                }
                if let Some(t) = self.normalize(t) {
                    out.add_term(t, 1);
                }
            }
            if -s.last == letter.x {
                let mut t = term.clone();
                match s.without_last() {
                    Some(n) => t.segments[i] = n,
                    None => {
                        t.segments.remove(i);
                    }
                }
                t.twist = t
                    .twist
                    .mul(&TwistChar::quadratic(s.rho.eta.clone()))
                    .mul(&TwistChar::omega(&s.rho.name, -letter.x));
                if let Some(t) = self.normalize(t) {
                    out.add_term(t, 1);
                }
            }
        }
        let mut t = term.clone();
        t.word.push(letter.clone());
        if let Some(t) = self.normalize(t) {
            out.add_term(t, 1);
        }
        Ok(out)
    }

    fn apply_letter_to_sum(&mut self, sum: &FormalSum, letter: &Letter) -> Result<FormalSum> {
        let mut out = FormalSum::new();
        for (t, c) in sum.iter() {
            out.add(&self.apply_letter(t, letter)?, *c);
        }
        Ok(out)
    }

    /// `Jac_word` applied to a sum, letters left to right.
    pub fn jac_word(&mut self, sum: &FormalSum, word: &[Letter]) -> Result<FormalSum> {
        let mut cur = sum.clone();
        for l in word {
            cur = self.apply_letter_to_sum(&cur, l)?;
        }
        Ok(cur)
    }

    /// `Jac^ρ_x` of one term, with the vanishing rules for packet atoms and, when
    /// enabled, the shift contraction.
    pub fn jac_apply(&mut self, term: &Term, rho: &str, x: Rational) -> Result<FormalSum> {
        let raw = self.apply_letter(term, &Letter::new(rho, x))?;
        let mut out = FormalSum::new();
        for (t, c) in raw.terms {
            if Self::vanishes_on_atom(&t) {
                continue;
            }
            let t = if self.config.shift_contraction {
                self.contract_shift(t)?
            } else {
                t
            };
            out.add_term(t, c);
        }
        Ok(out)
    }

    /// `Jac^ρ_{ζx} π = 0` for `x ∈ [B+1, A]` of a reducible block, and `Jac^ρ_{ζx, ζx} π = 0`
    /// for `x ∈ [B, A]`.
    fn vanishes_on_atom(t: &Term) -> bool {
        let front = front_letters(&t.word);
        for (b, _) in &t.atom.blocks {
            for &p in &front {
                let l = &t.word[p];
                if b.is_reducible() && letter_in(b, l, b.big_b() + int(1), b.big_a()) {
                    return true;
                }
                if letter_in(b, l, b.big_b(), b.big_a()) && doubled_front(&t.word, p) {
                    return true;
                }
            }
        }
        false
    }

    /// `Jac_{X^T} π(ψ_T) = π(ψ) ⊗ ω_ρ^{−|X^T|/2}` when the word is exactly a shift of one
    /// block and nothing of the same label lies in the way.
    fn contract_shift(&self, t: Term) -> Result<Term> {
        if t.word.is_empty() {
            return Ok(t);
        }
        for (i, (b, s)) in t.atom.blocks.iter().enumerate() {
            let mut shift = 1i64;
            while b.big_b() - int(shift) >= Rational::from_integer(0) {
                let lowered =
                    JordanBlock::from_abz(b.rho.clone(), b.big_a() - int(shift), b.big_b() - int(shift), b.zeta)?;
                let w = shift_word(&lowered, shift as u32);
                if w.len() > t.word.len() {
                    break;
                }
                if normal_word(&w) == t.word {
                    let clear = t.atom.blocks.iter().enumerate().all(|(j, (c, _))| {
                        j == i || c.rho != b.rho || c.big_b() > b.big_a() || c.big_a() < lowered.big_b()
                    });
                    if !clear {
                        break;
                    }
                    let (_, total) = jac_shift_matrix(&lowered, shift as u32);
                    let mut blocks = t.atom.blocks.clone();
                    blocks[i] = (lowered, *s);
                    let g = group_like(&t.atom.group, &blocks);
                    let atom = self.make_atom(&g, blocks);
                    let twist = t.twist.mul(&TwistChar::omega(&b.rho.name, -total / int(2)));
                    let out = Term {
                        atom,
                        segments: t.segments.clone(),
                        word: Vec::new(),
                        twist,
                    };
                    return Ok(self.normalize(out.clone()).unwrap_or(out));
                }
                shift += 1;
            }
        }
        Ok(t)
    }

    /// One step of the recursion along the block at `index` of the atom.
    pub fn expand_step(&mut self, atom: &Atom, index: usize) -> Result<FormalSum> {
        let (blk, eta0) = atom.blocks.get(index).cloned().ok_or(Error::BlockOutOfRange(index))?;
        if !blk.is_reducible() {
            return Err(Error::BlockIrreducible(index));
        }
        if !atom.parameter().is_ddr() {
            return Err(Error::NotDdr);
        }
        self.charge(1)?;
        let rest: Vec<(JordanBlock, Sign)> = atom
            .blocks
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != index)
            .map(|(_, x)| x.clone())
            .collect();
        let (a, b, zeta, rho) = (blk.big_a(), blk.big_b(), blk.zeta, blk.rho.clone());
        let z = int(zeta.to_i64());
        let mut out = FormalSum::new();

        let mut c = b + int(1);
        while c <= a {
            let coeff = minus_one_to((a - c).to_integer());
            if let Some(sub) = self.extend(&atom.group, &rest, &[(rho.clone(), a, b + int(2), zeta, eta0)])? {
                let mut word = Vec::new();
                let mut x = b + int(2);
                while x <= c {
                    word.push(Letter::new(&rho.name, z * x));
                    x += int(1);
                }
                let twist = TwistChar::eta_power(&rho, &c)?
                    .mul(&TwistChar::omega(&rho.name, z * gamma(b, c)))
                    .mul(&TwistChar::chi(&rho, 1));
                let term = Term {
                    atom: sub,
                    segments: vec![Segment::new(rho.clone(), z * b, -z * c)],
                    word,
                    twist,
                };
                if let Some(t) = self.normalize(term) {
                    out.add_term(t, coeff);
                }
            }
            c += int(1);
        }

        let w = blk.width();
        let first = atom.blocks.iter().position(|(b, _)| b.is_reducible());
        let fault = if self.config.fault && first != Some(index) {
            -1
        } else {
            1
        };
        let x_eta = |eng: &Engine, eta: Sign| {
            eng.extend(
                &atom.group,
                &rest,
                &[
                    (rho.clone(), a, b + int(1), zeta, eta),
                    (rho.clone(), b, b, zeta, eta * eta0),
                ],
            )
        };
        let plus = x_eta(self, Sign::Plus)?.expect("both blocks are genuine");
        let minus = x_eta(self, Sign::Minus)?.expect("both blocks are genuine");
        let guard = rho.parity == crate::param_core::Parity::Orthogonal
            && !rho.eta.is_trivial()
            && blk.a % 2 == 0
            && blk.b % 2 == 0;
        if guard && plus == minus {
            let coeff = minus_one_to((w + 1) / 2) * eta0.to_i64() * fault;
            out.add_term(Term::of_atom(plus), coeff);
        } else {
            for (eta, at) in [(Sign::Plus, plus), (Sign::Minus, minus)] {
                let coeff = minus_one_to((w + 1) / 2) * eta.pow(w + 1).to_i64() * eta0.pow(w).to_i64() * fault;
                out.add_term(Term::of_atom(at), coeff);
            }
        }
        Ok(out)
    }

    pub fn choose_block(&self, atom: &Atom) -> Option<usize> {
        let reducible = atom.blocks.iter().enumerate().filter(|(_, (b, _))| b.is_reducible());
        match self.config.policy {
            BlockPolicy::First => reducible.map(|(i, _)| i).next(),
            BlockPolicy::Widest => {
                reducible.fold(None, |best: Option<(usize, i64)>, (i, (b, _))| match best {
                    Some((_, w)) if w >= b.width() => best,
                    _ => Some((i, b.width())),
                })
            }
            .map(|(i, _)| i),
        }
    }

    /// Expand until every atom is elementary.
    pub fn expand_full(&mut self, atom: &Atom) -> Result<FormalSum> {
        if let Some(s) = self.memo.get(atom) {
            return Ok(s.clone());
        }
        let result = match self.choose_block(atom) {
            None => FormalSum::single(Term::of_atom(atom.clone()), 1),
            Some(j) => self.expand_from(atom, j)?,
        };
        self.memo.insert(atom.clone(), result.clone());
        Ok(result)
    }

    /// Full expansion whose first step is along the block at `index`.
    pub fn expand_from(&mut self, atom: &Atom, index: usize) -> Result<FormalSum> {
        let step = self.expand_step(atom, index)?;
        let mut out = FormalSum::new();
        for (t, c) in step.terms {
            let inner = self.expand_full(&t.atom)?;
            out.add(&self.compose(&t, &inner)?, c);
        }
        Ok(out)
    }

    /// Replace the atom of `outer` by `inner`.
    pub fn compose(&mut self, outer: &Term, inner: &FormalSum) -> Result<FormalSum> {
        let pushed = self.jac_word(inner, &outer.word)?;
        let mut out = FormalSum::new();
        for (t, c) in pushed.terms {
            let mut t = t;
            t.segments.extend(outer.segments.iter().cloned());
            t.twist = t.twist.mul(&outer.twist);
            if let Some(t) = self.normalize(t) {
                out.add_term(t, c);
            }
        }
        Ok(out)
    }

    /// Expand along every reducible block and compare.
    pub fn verify_block_independence(&mut self, atom: &Atom) -> Result<IndependenceReport> {
        let blocks: Vec<usize> = atom
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, (b, _))| b.is_reducible())
            .map(|(i, _)| i)
            .collect();
        let mut report = IndependenceReport {
            blocks: blocks.clone(),
            equal: true,
            diff: FormalSum::new(),
        };
        if blocks.len() < 2 {
            return Ok(report);
        }
        let first = self.expand_from(atom, blocks[0])?;
        for &j in &blocks[1..] {
            let other = self.expand_from(atom, j)?;
            let d = first.minus(&other);
            if !d.is_zero() {
                report.equal = false;
                report.diff = d;
                break;
            }
        }
        Ok(report)
    }

    /// Number of irreducible constituents predicted by splitting off the main term and
    /// the complementary elementary pieces, recursively.
    pub fn resolved_count(&mut self, atom: &Atom) -> Result<u64> {
        if let Some(n) = self.counts.get(atom) {
            return Ok(*n);
        }
        self.charge(1)?;
        let Some(j) = self.choose_block(atom) else {
            return Ok(1);
        };
        let (blk, eta0) = atom.blocks[j].clone();
        let rest: Vec<(JordanBlock, Sign)> = atom
            .blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, x)| x.clone())
            .collect();
        let (a, b, zeta, rho) = (blk.big_a(), blk.big_b(), blk.zeta, blk.rho.clone());
        let mut total = 0;
        if let Some(main) = self.extend(&atom.group, &rest, &[(rho.clone(), a - int(1), b + int(1), zeta, eta0)])? {
            total += self.resolved_count(&main)?;
        }
        let w = blk.width();
        let com = |eng: &Engine, eta: Sign| -> Result<Atom> {
            let mut new = Vec::new();
            let mut c = b;
            let mut k = 0;
            while c <= a {
                new.push((rho.clone(), c, c, zeta, eta * Sign::power_of_minus_one(k)));
                c += int(1);
                k += 1;
            }
            Ok(eng
                .extend(&atom.group, &rest, &new)?
                .expect("elementary blocks are genuine"))
        };
        let allowed: Vec<Sign> = [Sign::Plus, Sign::Minus]
            .into_iter()
            .filter(|eta| eta.pow(w + 1) * Sign::power_of_minus_one(w * (w + 1) / 2) == eta0)
            .collect();
        let pieces: Vec<Atom> = allowed.iter().map(|&eta| com(self, eta)).collect::<Result<_>>()?;
        if pieces.len() == 2 && pieces[0] == pieces[1] {
            total += self.resolved_count(&pieces[0])?;
        } else {
            for p in &pieces {
                total += self.resolved_count(p)?;
            }
        }
        self.counts.insert(atom.clone(), total);
        Ok(total)
    }

    /// Restriction of similitude terms to the classical group: each atom becomes the sum
    /// over the signs it cannot distinguish; twists become trivial.
    pub fn restrict(&self, sum: &FormalSum) -> FormalSum {
        let classical = Engine::new(Config {
            level: AtomLevel::Classical,
            ..self.config.clone()
        });
        let mut out = FormalSum::new();
        for (t, c) in sum.iter() {
            let inv = self.invisible(&t.atom.group, &t.atom.blocks);
            for d in f2::span(&inv) {
                let atom = classical.make_atom(&t.atom.group, flip(&t.atom.blocks, d));
                let term = Term {
                    atom,
                    segments: t.segments.clone(),
                    word: t.word.clone(),
                    twist: TwistChar::trivial(),
                };
                if let Some(term) = classical.normalize(term) {
                    out.add_term(term, *c);
                }
            }
        }
        out
    }

    /// Both sides of the restriction identity for a similitude atom: the restriction of its
    /// expansion, and the sum of the classical expansions over the signs it cannot see.
    pub fn restriction_sides(&mut self, atom: &Atom) -> Result<(FormalSum, FormalSum)> {
        let full = self.expand_full(atom)?;
        let lhs = self.restrict(&full);
        let mut classical = Engine::new(Config {
            level: AtomLevel::Classical,
            ..self.config.clone()
        });
        let mut rhs = FormalSum::new();
        for d in f2::span(&self.invisible(&atom.group, &atom.blocks)) {
            let blocks = flip(&atom.blocks, d);
            let a = classical.make_atom(&atom.group, blocks);
            rhs.add(&classical.expand_full(&a)?, 1);
        }
        Ok((lhs, rhs))
    }
}

fn flip(blocks: &[(JordanBlock, Sign)], d: u64) -> Vec<(JordanBlock, Sign)> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, (b, s))| (b.clone(), if d >> i & 1 == 1 { -*s } else { *s }))
        .collect()
}

/// Classical part of the infinitesimal character of a term.
pub fn infchar_of_term(term: &Term) -> Result<InfChar> {
    let mut ic = term.atom.inf_char();
    for s in &term.segments {
        for e in s.exponents() {
            ic.insert(&s.rho.name, e, 1);
            ic.insert(s.rho.dual_name(), -e, 1);
        }
    }
    for l in &term.word {
        if !(ic.remove_one(&l.rho, l.x) && ic.remove_one(&l.rho, -l.x)) {
            return Err(Error::OpaqueAtom(term.to_string()));
        }
    }
    Ok(ic)
}
