use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::twist::TwistChar;
use crate::param_core::{fmt_rat, ArthurParameter, Cuspidal, GroupDescriptor, InfChar, JordanBlock, Rational, Sign};

/// `⟨first, …, last⟩_ρ` in steps of one towards `last`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub rho: Cuspidal,
    pub first: Rational,
    pub last: Rational,
}

impl Segment {
    pub fn new(rho: Cuspidal, first: Rational, last: Rational) -> Segment {
        debug_assert!((first - last).is_integer());
        Segment { rho, first, last }
    }

    fn step(&self) -> Rational {
        if self.first >= self.last {
            -Rational::one()
        } else {
            Rational::one()
        }
    }

    pub fn len(&self) -> usize {
        ((self.first - self.last).abs().to_integer() + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn exponents(&self) -> Vec<Rational> {
        let s = self.step();
        (0..self.len())
            .map(|i| self.first + s * Rational::from_integer(i as i64))
            .collect()
    }

    pub fn without_first(&self) -> Option<Segment> {
        (self.len() > 1).then(|| Segment::new(self.rho.clone(), self.first + self.step(), self.last))
    }

    pub fn without_last(&self) -> Option<Segment> {
        (self.len() > 1).then(|| Segment::new(self.rho.clone(), self.first, self.last - self.step()))
    }

    pub fn to_value(&self) -> Value {
        json!({ "rho": self.rho.name, "from": fmt_rat(&self.first), "to": fmt_rat(&self.last) })
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() == 1 {
            write!(f, "<{}>_{}", fmt_rat(&self.first), self.rho.name)
        } else {
            write!(
                f,
                "<{},...,{}>_{}",
                fmt_rat(&self.first),
                fmt_rat(&self.last),
                self.rho.name
            )
        }
    }
}

/// One Jacquet functor `Jac^ρ_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub rho: String,
    pub x: Rational,
}

impl Letter {
    pub fn new(rho: &str, x: Rational) -> Letter {
        Letter {
            rho: rho.to_string(),
            x,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", fmt_rat(&self.x), self.rho)
    }
}

/// Jacquet functors commute unless they share a label and differ by one.
pub fn commute(a: &Letter, b: &Letter) -> bool {
    a.rho != b.rho || (a.x - b.x).abs() != Rational::one()
}

/// Least word in the commutation class of `w`.
pub fn normal_word(w: &[Letter]) -> Vec<Letter> {
    let mut rest: Vec<Letter> = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            if rest[..i].iter().all(|y| commute(y, &rest[i])) && best.is_none_or(|b| rest[i] < rest[b]) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.expect("the first letter always qualifies")));
    }
    out
}

/// Words applied left to right: `Jac_{x_1, …, x_s} = Jac_{x_s} ∘ ⋯ ∘ Jac_{x_1}`.
pub fn word_to_string(w: &[Letter]) -> String {
    w.iter().map(Letter::to_string).collect::<Vec<_>>().join(",")
}

/// A packet representation `π(ψ, ε)` of a parameter with discrete diagonal restriction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub group: GroupDescriptor,
    /// Sorted by block; the sign is the value of `ε` on that block.
    pub blocks: Vec<(JordanBlock, Sign)>,
}

impl Atom {
    pub fn parameter(&self) -> ArthurParameter {
        ArthurParameter {
            group: self.group.clone(),
            blocks: self.blocks.iter().map(|(b, _)| (b.clone(), 1)).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| s.is_minus())
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn is_elementary(&self) -> bool {
        self.blocks.iter().all(|(b, _)| !b.is_reducible())
    }

    pub fn inf_char(&self) -> InfChar {
        self.parameter().inf_char()
    }

    /// `Σ (A − B)`, the recursion measure.
    pub fn width(&self) -> i64 {
        self.blocks.iter().map(|(b, _)| b.width()).sum()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "group": crate::param_core::group_to_value(&self.group),
            "blocks": self.blocks.iter().map(|(b, s)| json!({
                "rho": b.rho.name, "a": b.a, "b": b.b, "zeta": b.zeta, "eps": s,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|(b, s)| format!("{b}{}", s.symbol())).collect();
        write!(f, "pi[{}]", parts.join(" "))
    }
}

/// `twist ⊗ Ind(segments) ⋊ Jac_word(atom)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub atom: Atom,
    pub segments: Vec<Segment>,
    pub word: Vec<Letter>,
    pub twist: TwistChar,
}

impl Term {
    pub fn of_atom(atom: Atom) -> Term {
        Term {
            atom,
            segments: Vec::new(),
            word: Vec::new(),
            twist: TwistChar::trivial(),
        }
    }

    /// Nested tree, outermost operation first.
    pub fn to_value(&self) -> Value {
        let mut v = json!({ "atom": self.atom.to_value() });
        if !self.word.is_empty() {
            let letters: Vec<Value> = self
                .word
                .iter()
                .map(|l| json!({ "rho": l.rho, "x": fmt_rat(&l.x) }))
                .collect();
            v = json!({ "jac": letters, "of": v });
        }
        if !self.segments.is_empty() {
            v = json!({ "ind": self.segments.iter().map(Segment::to_value).collect::<Vec<_>>(), "of": v });
        }
        if !self.twist.is_trivial() {
            v = json!({ "twist": self.twist.to_value(), "of": v });
        }
        v
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            write!(f, "{s} x ")?;
        }
        if self.word.is_empty() {
            write!(f, "{}", self.atom)?;
        } else {
            write!(f, "Jac[{}]{}", word_to_string(&self.word), self.atom)?;
        }
        if !self.twist.is_trivial() {
            write!(f, " (x) {}", self.twist)?;
        }
        Ok(())
    }
}

/// A finite `Z`-linear combination of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    pub terms: BTreeMap<Term, i64>,
}

impl FormalSum {
    pub fn new() -> FormalSum {
        FormalSum::default()
    }

    pub fn single(term: Term, coeff: i64) -> FormalSum {
        let mut s = FormalSum::new();
        s.add_term(term, coeff);
        s
    }

    pub fn add_term(&mut self, term: Term, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(term).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn add(&mut self, other: &FormalSum, factor: i64) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: i64) -> FormalSum {
        let mut out = FormalSum::new();
        out.add(self, factor);
        out
    }

    pub fn minus(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        out.add(other, -1);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &i64)> {
        self.terms.iter()
    }

    pub fn to_value(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(t, c)| json!({ "coefficient": c, "term": t.to_value() }))
                .collect(),
        )
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c:+} {t}")?;
        }
        Ok(())
    }
}

/// `X^T` for a block: rows `C = B, …, A`, row `C` holding `ζ(C+T), …, ζ(C+1)`.
pub fn jac_shift_matrix(block: &JordanBlock, t: u32) -> (Vec<Vec<Rational>>, Rational) {
    let z = Rational::from_integer(block.zeta.to_i64());
    let mut rows = Vec::new();
    let mut total = Rational::zero();
    let mut c = block.big_b();
    while c <= block.big_a() {
        let row: Vec<Rational> = (0..t)
            .map(|j| z * (c + Rational::from_integer((t - j) as i64)))
            .collect();
        total += row.iter().copied().sum::<Rational>();
        rows.push(row);
        c += Rational::one();
    }
    if t == 0 {
        rows.clear();
    }
    (rows, total)
}

/// The matrix read down each column, left to right.
pub fn shift_word(block: &JordanBlock, t: u32) -> Vec<Letter> {
    let (rows, _) = jac_shift_matrix(block, t);
    let mut w = Vec::new();
    for j in 0..t as usize {
        for r in &rows {
            w.push(Letter::new(&block.rho.name, r[j]));
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param_core::{int, rat};

    fn rho1() -> Cuspidal {
        Cuspidal::trivial_character("rho1")
    }

    #[test]
    fn segments() {
        let s = Segment::new(rho1(), int(1), int(-2));
        assert_eq!(s.exponents(), vec![int(1), int(0), int(-1), int(-2)]);
        assert_eq!(s.without_first().unwrap().first, int(0));
        assert_eq!(s.without_last().unwrap().last, int(-1));
        let up = Segment::new(rho1(), rat(-1, 2), rat(3, 2));
        assert_eq!(up.exponents(), vec![rat(-1, 2), rat(1, 2), rat(3, 2)]);
        assert!(Segment::new(rho1(), int(0), int(0)).without_first().is_none());
    }

    #[test]
    fn word_normal_form() {
        let l = |x: i64| Letter::new("r", int(x));
        assert_eq!(normal_word(&[l(3), l(1)]), vec![l(1), l(3)]);
        assert_eq!(normal_word(&[l(2), l(1)]), vec![l(2), l(1)]);
        assert_eq!(normal_word(&[l(3), l(2), l(0)]), vec![l(0), l(3), l(2)]);
        let w = normal_word(&[l(5), l(2), l(3), l(1)]);
        assert_eq!(normal_word(&w), w);
        assert_eq!(
            normal_word(&[Letter::new("s", int(1)), l(2)]),
            vec![l(2), Letter::new("s", int(1))]
        );
    }

    #[test]
    fn shift_matrices() {
        let b = JordanBlock::from_abz(rho1(), int(1), int(0), Sign::Plus).unwrap();
        let (m, total) = jac_shift_matrix(&b, 1);
        assert_eq!(m, vec![vec![int(1)], vec![int(2)]]);
        assert_eq!(total, int(3));
        assert_eq!(jac_shift_matrix(&b, 0), (vec![], int(0)));
        let c = JordanBlock::from_abz(rho1(), int(0), int(0), Sign::Minus).unwrap();
        let (m, total) = jac_shift_matrix(&c, 2);
        assert_eq!(m, vec![vec![int(-2), int(-1)]]);
        assert_eq!(total, int(-3));
        assert_eq!(
            shift_word(&c, 2),
            vec![Letter::new("rho1", int(-2)), Letter::new("rho1", int(-1))]
        );
    }

    #[test]
    fn sums_cancel() {
        let a = Atom {
            group: GroupDescriptor::sp(0),
            blocks: vec![],
        };
        let mut s = FormalSum::single(Term::of_atom(a), 2);
        s.add(&s.clone(), -1);
        assert!(s.is_zero());
    }
}
