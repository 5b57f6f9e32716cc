//! Brute-force oracles shared by the integration tests. None of them call the library
//! routine they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use arthur_kit::param_core::{parse_parameter, ArthurParameter, Family, JordanBlock, Rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

pub fn catalog() -> Vec<(String, ArthurParameter)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(catalog_dir())
        .expect("catalog exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().to_string();
            let psi = parse_parameter(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (name, psi)
        })
        .collect()
}

pub fn catalog_entry(name: &str) -> ArthurParameter {
    catalog().into_iter().find(|(n, _)| n == name).expect("catalog entry").1
}

pub fn big(q: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Whether `v` is a nonnegative combination of `gens`, by phase one of the simplex method
/// with Bland's rule in exact arithmetic.
pub fn cone_contains(gens: &[Vec<BigRational>], v: &[BigRational]) -> bool {
    let n = v.len();
    let m = gens.len();
    let rhs = m + n;
    let mut t = vec![vec![BigRational::zero(); m + n + 1]; n];
    for i in 0..n {
        let flip = v[i].is_negative();
        for j in 0..m {
            t[i][j] = if flip { -gens[j][i].clone() } else { gens[j][i].clone() };
        }
        t[i][m + i] = BigRational::one();
        t[i][rhs] = v[i].abs();
    }
    let mut basis: Vec<usize> = (m..m + n).collect();
    let cost = |j: usize| {
        if j >= m {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    };
    loop {
        let entering = (0..m + n).find(|&j| {
            let mut r = cost(j);
            for i in 0..n {
                r -= cost(basis[i]) * &t[i][j];
            }
            r.is_negative()
        });
        let Some(j) = entering else { break };
        let mut best: Option<(BigRational, usize, usize)> = None;
        for i in 0..n {
            if t[i][j].is_positive() {
                let ratio = &t[i][rhs] / &t[i][j];
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, basis[i]));
                }
            }
        }
        let (_, p, _) = best.expect("phase one is bounded below");
        let piv = t[p][j].clone();
        for x in t[p].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != p && !t[i][j].is_zero() {
                let f = t[i][j].clone();
                for c in 0..=rhs {
                    let d = &f * &t[p][c];
                    t[i][c] -= d;
                }
            }
        }
        basis[p] = j;
    }
    (0..n).filter(|&i| basis[i] >= m).all(|i| t[i][rhs].is_zero())
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

fn add(a: &[BigRational], b: &[BigRational], sb: i64) -> Vec<BigRational> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x + y * BigRational::from_integer(BigInt::from(sb)))
        .collect()
}

/// All positive coroots of the dual group.
pub fn positive_coroots(family: Family, n: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(add(&unit(n, i), &unit(n, j), -1));
            out.push(add(&unit(n, i), &unit(n, j), 1));
        }
        if family == Family::Sp {
            out.push(add(&unit(n, i), &unit(n, i), 1));
        }
    }
    out
}

pub fn oracle_leq_g(xi: &[Rational], xi2: &[Rational], family: Family) -> bool {
    let d: Vec<BigRational> = xi2.iter().zip(xi).map(|(a, b)| big(&(a - b))).collect();
    cone_contains(&positive_coroots(family, d.len()), &d)
}

/// `Ξ ≤ Ξ'` in `GL(N)`, through the cone of all `e_i − e_j`, `i < j`.
pub fn oracle_leq_n(xi: &[Rational], xi2: &[Rational], big_n: usize) -> bool {
    let n = xi.len();
    let mut d = vec![BigRational::zero(); big_n];
    for i in 0..n {
        let x = big(&(xi2[i] - xi[i]));
        d[big_n - 1 - i] = -x.clone();
        d[i] += x;
    }
    let mut gens = Vec::new();
    for i in 0..big_n {
        for j in i + 1..big_n {
            gens.push(add(&unit(big_n, i), &unit(big_n, j), -1));
        }
    }
    cone_contains(&gens, &d)
}

/// `GL(n)` dominance on plain vectors.
pub fn oracle_gl(xi: &[Rational], xi2: &[Rational]) -> bool {
    let n = xi.len();
    let d: Vec<BigRational> = xi2.iter().zip(xi).map(|(a, b)| big(&(a - b))).collect();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(add(&unit(n, i), &unit(n, j), -1));
        }
    }
    cone_contains(&gens, &d)
}

/// Component-group data by enumerating every sign vector.
#[derive(Debug, PartialEq, Eq)]
pub struct GroupCounts {
    pub k: usize,
    pub order_s_sigma0: usize,
    pub order_ker_alpha: usize,
    pub order_x: usize,
    pub characters: usize,
}

fn tag_set(b: &JordanBlock) -> BTreeSet<String> {
    if (b.a as u64 * b.b as u64).is_multiple_of(2) {
        BTreeSet::new()
    } else {
        b.rho.eta.factors().map(str::to_string).collect()
    }
}

fn sym(a: &BTreeSet<String>, b: &BTreeSet<String>) -> BTreeSet<String> {
    a.symmetric_difference(b).cloned().collect()
}

pub fn group_counts(psi: &ArthurParameter) -> GroupCounts {
    let good: Vec<(JordanBlock, u32)> = psi.blocks.iter().filter(|(b, _)| b.is_good_parity()).cloned().collect();
    let k = good.len();
    let disc: BTreeSet<String> = psi.group.discriminant.factors().map(str::to_string).collect();
    let s0: u64 = good
        .iter()
        .enumerate()
        .filter(|(_, (_, m))| m % 2 == 1)
        .map(|(i, _)| 1u64 << i)
        .sum();
    let canon = |s: u64| if s0 != 0 { s.min(s ^ s0) } else { s };
    let alpha = |s: u64| {
        let mut t = BTreeSet::new();
        for (i, (b, _)) in good.iter().enumerate() {
            if s >> i & 1 == 1 {
                t = sym(&t, &tag_set(b));
            }
        }
        let other = sym(&t, &disc);
        if (other.len(), &other) < (t.len(), &t) {
            other
        } else {
            t
        }
    };
    let mut elements = BTreeSet::new();
    let mut kernel = BTreeSet::new();
    let mut image = BTreeSet::new();
    for s in 0..1u64 << k {
        elements.insert(canon(s));
        let a = alpha(s);
        if a.is_empty() {
            kernel.insert(canon(s));
        }
        image.insert(a);
    }
    let characters = (0..1u64 << k)
        .filter(|e| (e & s0).count_ones().is_multiple_of(2))
        .count();
    GroupCounts {
        k,
        order_s_sigma0: elements.len(),
        order_ker_alpha: kernel.len(),
        order_x: image.len(),
        characters,
    }
}

/// A label as `(l, η)` per copy in declaration order.
pub type RawLabel = (Vec<u32>, Vec<i8>);

/// Every label of a multiplicity-free good-parity parameter, with its character as a
/// bitmask over the blocks.
pub fn raw_labels(psi: &ArthurParameter) -> Vec<(RawLabel, u64)> {
    let mut out: Vec<(RawLabel, u64)> = vec![((vec![], vec![]), 0)];
    for (i, (b, _)) in psi.blocks.iter().enumerate() {
        let w = b.width() + 1;
        let mut next = Vec::new();
        for ((l, e), mask) in &out {
            for li in 0..=(w / 2) as u32 {
                for eta in [1i8, -1] {
                    let mut sign = if eta == -1 && w % 2 == 1 { -1 } else { 1 };
                    if (w / 2 + li as i64) % 2 == 1 {
                        sign = -sign;
                    }
                    let mut l2 = l.clone();
                    l2.push(li);
                    let mut e2 = e.clone();
                    e2.push(eta);
                    next.push(((l2, e2), if sign == -1 { mask | 1 << i } else { *mask }));
                }
            }
        }
        out = next;
    }
    out
}

/// Classes of labels under equality up to `η` on blocks with `2l = A − B + 1`, grouped by
/// character; only characters trivial on `s_0` are kept.
pub fn classes_by_character(psi: &ArthurParameter) -> BTreeMap<u64, usize> {
    let s0: u64 = (0..psi.blocks.len()).map(|i| 1u64 << i).sum();
    let mut seen: BTreeMap<u64, BTreeSet<RawLabel>> = BTreeMap::new();
    for ((l, eta), mask) in raw_labels(psi) {
        if (mask & s0).count_ones() % 2 == 1 {
            continue;
        }
        let key_eta: Vec<i8> = psi
            .blocks
            .iter()
            .zip(&l)
            .zip(&eta)
            .map(|(((b, _), li), e)| if 2 * *li as i64 == b.width() + 1 { 0 } else { *e })
            .collect();
        seen.entry(mask).or_default().insert((l, key_eta));
    }
    seen.into_iter().map(|(m, s)| (m, s.len())).collect()
}
