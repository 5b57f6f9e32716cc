//! Exponent vectors of parameters and the dominance orders between them.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::param_core::{int, Family, GroupDescriptor, LParameter, Rational};

/// Real parts of exponents, one per coordinate of the maximal torus.
pub type ExponentVector = Vec<Rational>;

/// Positive exponents with `d_ρ · a` copies each, padded with zeros to the rank.
pub fn xi_of_lparam(phi: &LParameter, group: &GroupDescriptor) -> Result<ExponentVector> {
    let found = phi.total_dim();
    if found != group.big_n() {
        return Err(Error::DimensionMismatch {
            expected: group.big_n(),
            found,
        });
    }
    let mut v: Vec<Rational> = Vec::new();
    for ((rho, a, x), m) in &phi.entries {
        if x.is_positive() {
            let copies = rho.dim as usize * *a as usize * *m as usize;
            v.extend(std::iter::repeat_n(*x, copies));
        }
    }
    let n = group.rank as usize;
    if v.len() > n {
        return Err(Error::DimensionMismatch {
            expected: n as u64,
            found: v.len() as u64,
        });
    }
    v.resize(n, Rational::zero());
    v.sort_by(|a, b| b.cmp(a));
    xi_plus(&v, group)
}

pub fn is_dominant(xi: &[Rational], group: &GroupDescriptor) -> bool {
    let n = xi.len();
    if n == 0 {
        return true;
    }
    if xi.windows(2).take(n.saturating_sub(2)).any(|w| w[0] < w[1]) {
        return false;
    }
    if group.is_split_so_even() {
        n == 1 || xi[n - 2] >= xi[n - 1].abs()
    } else {
        (n == 1 || xi[n - 2] >= xi[n - 1]) && !xi[n - 1].is_negative()
    }
}

/// `(μ_1, …, μ_{n−1}, |μ_n|)` on split even orthogonal groups, the identity otherwise.
pub fn xi_plus(xi: &[Rational], group: &GroupDescriptor) -> Result<ExponentVector> {
    if !is_dominant(xi, group) {
        return Err(Error::NotDominant);
    }
    let mut out = xi.to_vec();
    if group.is_split_so_even() {
        if let Some(last) = out.last_mut() {
            *last = last.abs();
        }
    }
    Ok(out)
}

/// `Ξ ≤ Ξ'` in the general linear group of size `N` after the self-dual embedding.
pub fn leq_n(xi: &[Rational], xi2: &[Rational], group: &GroupDescriptor) -> bool {
    if xi.len() != xi2.len() {
        return false;
    }
    let diff: Vec<Rational> = xi2.iter().zip(xi).map(|(a, b)| a - b).collect();
    let mut embedded = diff.clone();
    let middle = group.big_n() as usize - 2 * diff.len().min(group.big_n() as usize / 2);
    embedded.extend(std::iter::repeat_n(Rational::zero(), middle));
    embedded.extend(diff.iter().rev().map(|x| -x));
    let mut acc = Rational::zero();
    for x in embedded {
        acc += x;
        if acc.is_negative() {
            return false;
        }
    }
    acc.is_zero()
}

/// Simple coroots of the dual group, as rows.
pub fn simple_coroots(family: Family, n: usize) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut r = vec![Rational::zero(); n];
        r[i] = int(1);
        r[i + 1] = int(-1);
        rows.push(r);
    }
    if n == 0 {
        return rows;
    }
    let mut last = vec![Rational::zero(); n];
    match family {
        Family::Sp => last[n - 1] = int(2),
        Family::SoEven if n >= 2 => {
            last[n - 2] = int(1);
            last[n - 1] = int(1);
        }
        Family::SoEven => return rows,
    }
    rows.push(last);
    rows
}

/// Solve `Σ c_i r_i = v` exactly; `None` when there is no solution.
pub fn solve_in_span(rows: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let n = v.len();
    let k = rows.len();
    // columns are the generators
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = rows.iter().map(|r| r[i]).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..=k {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[i][k];
    }
    Some(coeffs)
}

/// `Ξ' − Ξ` lies in the closed cone of positive coroots of the dual group.
pub fn leq_g(xi: &[Rational], xi2: &[Rational], group: &GroupDescriptor) -> bool {
    if xi.len() != xi2.len() {
        return false;
    }
    let diff: Vec<Rational> = xi2.iter().zip(xi).map(|(a, b)| a - b).collect();
    let rows = simple_coroots(group.family, diff.len());
    match solve_in_span(&rows, &diff) {
        Some(c) => c.iter().all(|x| !x.is_negative()),
        None => false,
    }
}

pub fn sorted_desc(mut v: Vec<Rational>) -> ExponentVector {
    v.sort_by(|a, b| b.cmp(a));
    v
}

pub fn merge_endoscopic(xi_1: &[Rational], xi_2: &[Rational]) -> ExponentVector {
    sorted_desc(xi_1.iter().chain(xi_2).copied().collect())
}

/// Best split of a general linear exponent string into a leading part and a dual tail.
pub fn merge_levi(mu: &[Rational], xi_minus: &[Rational]) -> ExponentVector {
    let k = mu.len();
    let bar: Vec<Rational> = mu.iter().rev().map(|x| -x).collect();
    let mut best: Option<(Rational, usize)> = None;
    for t in 0..=k {
        let s = k - t;
        let score: Rational = mu[..t].iter().sum::<Rational>() + bar[..s].iter().sum::<Rational>();
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, t));
        }
    }
    let t = best.map_or(0, |(_, t)| t);
    let mut out: Vec<Rational> = mu[..t].to_vec();
    out.extend_from_slice(&bar[..k - t]);
    out.extend_from_slice(xi_minus);
    sorted_desc(out)
}
