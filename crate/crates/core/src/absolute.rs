//! Absolute invariants of the plane blown up in `n` points.
//!
//! A connected configuration `{(1, 1-m_1), …, (1, 1-m_k)}` contributes
//! `∏ x^{m_i - 3} q^H σ_{m_i}(q^{-E_1}, …, q^{-E_n})` to `Ψ`, and every other
//! configuration contributes nothing. The absolute series is
//! `G_n = Ψ(F_n) + Σ_i x^{-1} q^{E_i}`, where `F_n` keeps the configurations
//! inside the cone of the `n`-fold blowup and `x^{g-1} q^β` carries the
//! genus `g` count in class `β`.
//!
//! The classical genus-0 recursion for plane curves is included as an
//! external oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::configs::CurveConfig;
use crate::error::{ParseError, SolveError};
use crate::formal::InvariantOracle;
use crate::lattice::{in_cone_n, LatticeVector, Rational};

/// `dH - Σ c_i E_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomologyClass {
    pub d: i64,
    pub c: Vec<i64>,
}

impl HomologyClass {
    pub fn new(d: i64, c: Vec<i64>) -> Self {
        HomologyClass { d, c }
    }

    /// The class `E_i` (0-based `i`) in the `n`-point blowup.
    pub fn exceptional(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = -1;
        HomologyClass { d: 0, c }
    }

    /// `dH - E_1 - … - E_n`.
    pub fn through_points(d: i64, n: usize) -> Self {
        HomologyClass { d, c: vec![1; n] }
    }

    pub fn points(&self) -> usize {
        self.c.len()
    }

    /// Index of `i` when the class is exactly `E_i`.
    pub fn exceptional_index(&self) -> Option<usize> {
        if self.d != 0 {
            return None;
        }
        let mut found = None;
        for (i, &ci) in self.c.iter().enumerate() {
            match ci {
                0 => {}
                -1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.d)?;
        for (i, ci) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{ci}")?;
        }
        Ok(())
    }
}

/// Parses `"d:c1,…,cn"`. The coefficient of `H` must be non-negative.
impl FromStr for HomologyClass {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseError::Class(s.to_string());
        let (d, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d < 0 {
            return Err(err());
        }
        let c = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(HomologyClass { d, c })
    }
}

impl Serialize for HomologyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HomologyClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One coefficient of `x^{genus-1} q^{class}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GwRecord {
    pub genus: i64,
    pub class: HomologyClass,
    pub value: Rational,
}

/// The `m_i` of a configuration made only of vectors `(1, 1-m_i)`.
fn contact_orders(g: &CurveConfig) -> Option<Vec<i64>> {
    g.outgoing_vectors().map(|v| (v.a == 1).then_some(1 - v.b)).collect()
}

/// Expansion of `Ψ(g)` for the `n`-point blowup, one record per class,
/// each valued by the number of subset tuples producing it. Records may
/// have negative genus.
pub fn psi_term(g: &CurveConfig, n: usize) -> Vec<GwRecord> {
    let Some(ms) = contact_orders(g) else {
        return Vec::new();
    };
    let genus = 1 + ms.iter().map(|m| m - 3).sum::<i64>();
    // Multiply out the elementary symmetric factors one at a time.
    let mut poly: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
    poly.insert(vec![0; n], BigUint::one());
    for &m in &ms {
        let subsets = subsets_of_size(n, m);
        let mut next: BTreeMap<Vec<i64>, BigUint> = BTreeMap::new();
        for (c, count) in &poly {
            for s in &subsets {
                let mut c2 = c.clone();
                for &j in s {
                    c2[j] += 1;
                }
                *next.entry(c2).or_default() += count;
            }
        }
        poly = next;
    }
    poly.into_iter()
        .map(|(c, count)| GwRecord {
            genus,
            class: HomologyClass { d: ms.len() as i64, c },
            value: Rational::from_integer(count),
        })
        .collect()
}

fn subsets_of_size(n: usize, m: i64) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < left {
                break;
            }
            cur.push(j);
            go(j + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 0 && (m as usize) <= n {
        go(0, n, m as usize, &mut Vec::new(), &mut out);
    }
    out
}

/// The relative invariants `absolute_invariant` needs: degree `β.d` and
/// Euler characteristic down to the returned bound.
pub fn required_bounds(genus: i64, beta: &HomologyClass) -> (i64, i64) {
    (beta.d, 5 * beta.d - 2 * (genus - 1 + 3 * beta.d))
}

/// `n_{g,β}` of the `n`-point blowup: the coefficient of `x^{g-1} q^β` in
/// `Ψ(F_n)`, plus 1 for `β = E_i` in genus 0.
pub fn absolute_invariant<O: InvariantOracle + ?Sized>(
    n: usize,
    genus: i64,
    beta: &HomologyClass,
    oracle: &mut O,
) -> Result<Rational, SolveError> {
    if beta.points() != n {
        return Err(SolveError::ClassLength {
            expected: n,
            found: beta.points(),
        });
    }
    let mut total = Rational::zero();
    if genus == 0 && beta.exceptional_index().is_some() {
        total += Rational::one();
    }
    let d = beta.d;
    let sum_c: i64 = beta.c.iter().sum();
    if d < 1 || genus < 0 || beta.c.iter().any(|&ci| ci < 0 || ci > d) || sum_c != genus - 1 + 3 * d {
        return Ok(total);
    }
    let mut columns: Vec<i64> = beta.c.clone();
    columns.sort_unstable();
    let mut memo = HashMap::new();
    for ms in contact_multisets(d as usize, n as i64, sum_c) {
        let vectors: Vec<LatticeVector> = ms.iter().map(|&m| LatticeVector::new(1, 1 - m)).collect();
        debug_assert!(vectors.iter().all(|&v| in_cone_n(v, n as u32)));
        let gamma = CurveConfig::connected(vectors)?;
        let n_gamma = oracle.connected_invariant(&gamma)?;
        if n_gamma.is_zero() {
            continue;
        }
        let tuples = binary_matrices(&ms, &columns, &mut memo);
        total += n_gamma * Rational::from_integer(tuples) / Rational::from_integer(gamma.automorphism_order());
    }
    Ok(total)
}

/// Non-increasing lists of `k` values in `0..=n` with the given sum.
fn contact_multisets(k: usize, n: i64, sum: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, max: i64, sum: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in (0..=max.min(sum)).rev() {
            if m * (k as i64) < sum {
                break;
            }
            cur.push(m);
            go(k - 1, m, sum - m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, sum, &mut Vec::new(), &mut out);
    out
}

/// Number of 0/1 matrices with the given row sums and column sums.
/// `columns` must be sorted; the count only depends on its multiset.
fn binary_matrices(rows: &[i64], columns: &[i64], memo: &mut HashMap<(Vec<i64>, Vec<i64>), BigUint>) -> BigUint {
    let Some((&m, rest)) = rows.split_first() else {
        return if columns.iter().all(|&c| c == 0) {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    };
    let key = (rows.to_vec(), columns.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    // Columns with equal remaining sums are interchangeable: pick how many
    // of each group this row uses.
    let mut groups: Vec<(i64, usize)> = Vec::new();
    for &c in columns {
        match groups.last_mut() {
            Some((v, k)) if *v == c => *k += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut total = BigUint::zero();
    let mut take = vec![0usize; groups.len()];
    loop {
        let used: usize = take.iter().sum();
        if used as i64 == m {
            let mut ways = BigUint::one();
            let mut next = Vec::with_capacity(columns.len());
            for (&(v, k), &t) in groups.iter().zip(&take) {
                ways *= binomial_u(k, t);
                next.extend(std::iter::repeat_n(v - 1, t));
                next.extend(std::iter::repeat_n(v, k - t));
            }
            next.sort_unstable();
            total += ways * binary_matrices(rest, &next, memo);
        }
        // Odometer over `take`, skipping groups with nothing left.
        let mut i = 0;
        loop {
            if i == groups.len() {
                memo.insert(key, total.clone());
                return total;
            }
            let cap = if groups[i].0 > 0 { groups[i].1 } else { 0 };
            if take[i] < cap {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
    }
}

fn binomial_u(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    BigInt::from(binomial_u(n as usize, k as usize))
}

/// Every coefficient of `G_n` up to degree `max_degree` in nonnegative
/// genus, built by summing `psi_term` over the configurations of `F_n`.
pub fn gn_series<O: InvariantOracle + ?Sized>(
    n: usize,
    max_degree: i64,
    oracle: &mut O,
) -> Result<BTreeMap<(i64, HomologyClass), Rational>, SolveError> {
    let mut out: BTreeMap<(i64, HomologyClass), Rational> = BTreeMap::new();
    for i in 0..n {
        out.insert((0, HomologyClass::exceptional(n, i)), Rational::one());
    }
    for d in 1..=max_degree.max(0) {
        // Genus ≥ 0 forces Σ m ≥ 3d - 1.
        for sum in (3 * d - 1).max(0)..=(d * n as i64) {
            for ms in contact_multisets(d as usize, n as i64, sum) {
                let vectors = ms.iter().map(|&m| LatticeVector::new(1, 1 - m)).collect();
                let gamma = CurveConfig::connected(vectors)?;
                let n_gamma = oracle.connected_invariant(&gamma)?;
                if n_gamma.is_zero() {
                    continue;
                }
                let weight = n_gamma / Rational::from_integer(gamma.automorphism_order());
                for rec in psi_term(&gamma, n) {
                    let slot = out.entry((rec.genus, rec.class)).or_default();
                    *slot += &weight * &rec.value;
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `N_1, …, N_max_d`: rational plane curves of degree `d` through `3d - 1`
/// general points.
pub fn kontsevich(max_d: usize) -> Vec<Rational> {
    let mut n: Vec<BigInt> = vec![BigInt::zero()];
    for d in 1..=max_d as i64 {
        if d == 1 {
            n.push(BigInt::one());
            continue;
        }
        let mut total = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let term = &n[d1 as usize]
                * &n[d2 as usize]
                * BigInt::from(d1 * d1 * d2)
                * (BigInt::from(d2) * binomial(3 * d - 4, 3 * d1 - 2)
                    - BigInt::from(d1) * binomial(3 * d - 4, 3 * d1 - 1));
            total += term;
        }
        n.push(total);
    }
    n.into_iter().skip(1).map(Rational::from_integer).collect()
}

/// Contribution depending only on `a` and `d`: `C(a, d)`.
pub fn corner_closed_form(a: i64, d: i64) -> Rational {
    Rational::from_integer(binomial(a, d))
}

/// `(-1)^{d-1} / d²`, undefined at 0.
pub fn multiple_cover(d: i64) -> Option<Rational> {
    if d == 0 {
        return None;
    }
    let sign = if d.rem_euclid(2) == 1 { 1 } else { -1 };
    Some(Rational::new(sign, d * d))
}

/// `(1/d!) ∏_{i<d} (x - i)`, the polynomial vanishing at `0..d` with value
/// 1 at `d`.
pub fn interpolation_polynomial(d: u32, x: &Rational) -> Rational {
    let mut p = Rational::one();
    for i in 0..i64::from(d) {
        p = p * (x - &Rational::from(i)) / Rational::from(i + 1);
    }
    p
}
