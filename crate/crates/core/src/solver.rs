//! Recursive computation of the connected invariants `n_Γ`.
//!
//! To solve a connected outgoing-only `Γ`, one outgoing vector `p = (a, b)`
//! is replaced by the incoming vector `y = (-a, -1-b)`, giving a target `T`.
//! The coefficient of `T` in `e^F ←y y` and in `y →y e^F` must agree. Every
//! configuration feeding either coefficient is strictly simpler than `Γ` in
//! `(degree, -χ)`, except `Γ` itself, which appears once on the right with
//! coefficient `a · mult(p) / |Aut Γ|`. Solving that linear equation gives
//! `n_Γ`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::configs::{enumerate_outgoing, group_blocks, set_partitions, CurveConfig};
use crate::error::{ConfigError, SolveError};
use crate::formal::{assemble_exp, exp_coefficient, FormalSum, InvariantOracle};
use crate::lattice::{in_universal_cone, is_valid_incoming, LatticeVector, Rational};
use crate::sweep::{expand, expand_sum, Side};

/// Incoming vectors checked by default: both boundary exits are exercised.
pub const DEFAULT_Y_SET: [LatticeVector; 5] = [
    LatticeVector::new(-1, 0),
    LatticeVector::new(-1, 1),
    LatticeVector::new(-1, 2),
    LatticeVector::new(-2, 1),
    LatticeVector::new(-2, -1),
];

/// Default lower Euler characteristic bound for identity checks.
pub const DEFAULT_VERIFY_MIN_CHI: i64 = -8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryStatus {
    Solved(Rational),
    InProgress,
}

/// Memoized invariants of connected outgoing-only configurations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantTable {
    entries: BTreeMap<CurveConfig, EntryStatus>,
    bounds: Option<(i64, i64)>,
}

impl InvariantTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(max_degree, min_chi)` this table is known to be complete for.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        self.bounds
    }

    pub fn set_bounds(&mut self, bounds: Option<(i64, i64)>) {
        self.bounds = bounds;
    }

    pub fn get(&self, config: &CurveConfig) -> Option<&Rational> {
        match self.entries.get(config) {
            Some(EntryStatus::Solved(v)) => Some(v),
            _ => None,
        }
    }

    pub fn status(&self, config: &CurveConfig) -> Option<&EntryStatus> {
        self.entries.get(config)
    }

    pub fn insert(&mut self, config: CurveConfig, value: Rational) -> Result<(), ConfigError> {
        check_connected_outgoing(&config)?;
        self.entries.insert(config, EntryStatus::Solved(value));
        Ok(())
    }

    pub fn solved(&self) -> impl Iterator<Item = (&CurveConfig, &Rational)> {
        self.entries.iter().filter_map(|(c, s)| match s {
            EntryStatus::Solved(v) => Some((c, v)),
            EntryStatus::InProgress => None,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn in_progress(&self) -> Option<&CurveConfig> {
        self.entries
            .iter()
            .find(|(_, s)| matches!(s, EntryStatus::InProgress))
            .map(|(c, _)| c)
    }

    /// Solved entries with degree `≤ max_degree` and `χ ≥ min_chi`.
    pub fn restricted(&self, max_degree: i64, min_chi: i64) -> InvariantTable {
        InvariantTable {
            entries: self
                .solved()
                .filter(|(c, _)| c.degree() <= max_degree && c.euler_characteristic() >= min_chi)
                .map(|(c, v)| (c.clone(), EntryStatus::Solved(v.clone())))
                .collect(),
            bounds: Some((max_degree, min_chi)),
        }
    }
}

/// A read-only table answers only what it holds.
impl InvariantOracle for InvariantTable {
    fn connected_invariant(&mut self, component: &CurveConfig) -> Result<Rational, SolveError> {
        self.get(component)
            .cloned()
            .ok_or_else(|| SolveError::Missing(component.clone()))
    }
}

/// `unknown_coefficient · n_unknown = known_sum`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub unknown: CurveConfig,
    pub unknown_coefficient: Rational,
    pub known_sum: Rational,
}

impl Equation {
    pub fn solve(&self) -> Rational {
        &self.known_sum / &self.unknown_coefficient
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Return 0 at once for negative forced genus. When off, such
    /// configurations are still solved by the recursion whenever a pivot
    /// exists; configurations without a pivot always have negative genus
    /// and fall back to 0.
    pub genus_shortcut: bool,
    /// Check `(degree, -χ)` descent for every dependency, including ones
    /// already in the table.
    pub strict_triangularity: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            genus_shortcut: true,
            strict_triangularity: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub equations: usize,
    pub dependency_checks: usize,
}

#[derive(Debug, Default)]
pub struct Solver {
    table: InvariantTable,
    options: SolverOptions,
    stats: SolverStats,
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_options(options: SolverOptions) -> Self {
        Solver {
            options,
            ..Self::default()
        }
    }

    /// Resume from previously computed invariants.
    pub fn with_table(table: InvariantTable) -> Self {
        Solver {
            table,
            ..Self::default()
        }
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    pub fn table(&self) -> &InvariantTable {
        &self.table
    }

    pub fn into_table(self) -> InvariantTable {
        self.table
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// `n_Γ` for a connected outgoing-only configuration.
    pub fn invariant(&mut self, config: &CurveConfig) -> Result<Rational, SolveError> {
        check_connected_outgoing(config)?;
        self.solve(config)
    }

    /// Solve with an explicit pivot instead of the default one. The result
    /// is not memoized, so it can be compared against [`Solver::invariant`].
    pub fn invariant_with_pivot(&mut self, config: &CurveConfig, pivot: LatticeVector) -> Result<Rational, SolveError> {
        check_connected_outgoing(config)?;
        Ok(self.equation(config, pivot)?.solve())
    }

    /// Coefficient of `config` in `e^F`, solving component invariants on demand.
    pub fn exp_coefficient(&mut self, config: &CurveConfig) -> Result<Rational, SolveError> {
        exp_coefficient(self, config)
    }

    /// The linear equation for `n_config` obtained from the target that
    /// replaces `pivot` by its incoming counterpart.
    pub fn equation(&mut self, config: &CurveConfig, pivot: LatticeVector) -> Result<Equation, SolveError> {
        check_connected_outgoing(config)?;
        let y = incoming_for(pivot).ok_or_else(|| SolveError::BadPivot {
            config: config.clone(),
            pivot,
        })?;
        let mut rest: Vec<LatticeVector> = config.outgoing_vectors().collect();
        let at = rest
            .iter()
            .position(|&v| v == pivot)
            .ok_or_else(|| SolveError::BadPivot {
                config: config.clone(),
                pivot,
            })?;
        rest.remove(at);
        let target = CurveConfig::new(vec![rest], Some((0, y)))?;
        self.stats.equations += 1;

        let mut known = Rational::zero();
        for src in source_candidates(&target) {
            let coeff = self.source_term(Side::Left, &src, &target, config)?;
            known += coeff;
        }
        let mut unknown_coefficient = Rational::zero();
        for src in source_candidates(&target) {
            if &src == config {
                let sweep = expand(Side::Right, &src, y)?.coefficient_of(&target);
                unknown_coefficient += sweep / Rational::from_integer(config.automorphism_order());
            } else {
                let coeff = self.source_term(Side::Right, &src, &target, config)?;
                known = known - coeff;
            }
        }
        debug_assert!(!unknown_coefficient.is_zero());
        Ok(Equation {
            unknown: config.clone(),
            unknown_coefficient,
            known_sum: known,
        })
    }

    /// `e^F` coefficient of `src` times its sweep coefficient at `target`.
    fn source_term(
        &mut self,
        side: Side,
        src: &CurveConfig,
        target: &CurveConfig,
        solving: &CurveConfig,
    ) -> Result<Rational, SolveError> {
        let y = target.incoming().expect("target is marked").vector;
        let sweep = expand(side, src, y)?.coefficient_of(target);
        if sweep.is_zero() {
            return Ok(sweep);
        }
        let mut weight = sweep;
        for comp in src.split_components() {
            weight = weight * self.dependency(&comp, solving)?;
            if weight.is_zero() {
                return Ok(weight);
            }
        }
        Ok(weight / Rational::from_integer(src.automorphism_order()))
    }

    fn dependency(&mut self, comp: &CurveConfig, solving: &CurveConfig) -> Result<Rational, SolveError> {
        self.stats.dependency_checks += 1;
        let descends = comp.complexity() < solving.complexity();
        if self.options.strict_triangularity && !descends {
            return Err(SolveError::NonTriangular {
                target: solving.clone(),
                dependency: comp.clone(),
            });
        }
        match self.table.status(comp) {
            Some(EntryStatus::Solved(v)) => return Ok(v.clone()),
            Some(EntryStatus::InProgress) => return Err(SolveError::Cycle(comp.clone())),
            None => {}
        }
        if self.options.genus_shortcut && comp.component_genus(0) < 0 {
            return self.solve(comp);
        }
        if !descends {
            return Err(SolveError::NonTriangular {
                target: solving.clone(),
                dependency: comp.clone(),
            });
        }
        self.solve(comp)
    }

    fn solve(&mut self, config: &CurveConfig) -> Result<Rational, SolveError> {
        match self.table.status(config) {
            Some(EntryStatus::Solved(v)) => return Ok(v.clone()),
            Some(EntryStatus::InProgress) => return Err(SolveError::Cycle(config.clone())),
            None => {}
        }
        let genus = config.component_genus(0);
        if self.options.genus_shortcut && genus < 0 {
            return self.store(config, Rational::zero());
        }
        let Some(pivot) = default_pivot(config) else {
            if genus < 0 {
                return self.store(config, Rational::zero());
            }
            return Err(SolveError::NoPivot(config.clone()));
        };
        self.table.entries.insert(config.clone(), EntryStatus::InProgress);
        match self.equation(config, pivot) {
            Ok(eq) => self.store(config, eq.solve()),
            Err(e) => {
                self.table.entries.remove(config);
                Err(e)
            }
        }
    }

    fn store(&mut self, config: &CurveConfig, value: Rational) -> Result<Rational, SolveError> {
        self.table
            .entries
            .insert(config.clone(), EntryStatus::Solved(value.clone()));
        Ok(value)
    }

    /// Every connected invariant with degree `≤ max_degree` and `χ ≥ min_chi`,
    /// solved in order of increasing degree and decreasing `χ`.
    pub fn invariant_table(&mut self, max_degree: i64, min_chi: i64) -> Result<InvariantTable, SolveError> {
        if max_degree < 0 {
            return Err(SolveError::Bounds(max_degree));
        }
        let mut configs = enumerate_outgoing(max_degree, min_chi, true);
        configs.sort_by_cached_key(|c| (c.complexity(), c.clone()));
        for c in &configs {
            self.solve(c)?;
        }
        Ok(self.table.restricted(max_degree, min_chi))
    }

    /// Compare `e^F ←y y` with `y →y e^F` on every incoming-marked
    /// configuration with degree `≤ max_degree` and `χ ≥ min_chi`.
    ///
    /// Sources of such a term have degree at most its degree and Euler
    /// characteristic at least one less, so `e^F` is assembled down to
    /// `min_chi - 1` and the window is exact.
    pub fn verify_identity(
        &mut self,
        y: LatticeVector,
        max_degree: i64,
        min_chi: i64,
    ) -> Result<IdentityReport, SolveError> {
        if !is_valid_incoming(y) {
            return Err(ConfigError::InvalidIncoming(y).into());
        }
        let exp = assemble_exp(self, max_degree, min_chi - 1)?;
        let in_window = |c: &CurveConfig| c.degree() <= max_degree && c.euler_characteristic() >= min_chi;
        let left = expand_sum(Side::Left, &exp, y)?.filter(in_window);
        let right = expand_sum(Side::Right, &exp, y)?.filter(in_window);
        let keys: BTreeSet<&CurveConfig> = left.configs().chain(right.configs()).collect();
        let mismatches = keys
            .into_iter()
            .filter_map(|c| {
                let (l, r) = (left.coefficient_of(c), right.coefficient_of(c));
                (l != r).then(|| Mismatch {
                    config: c.clone(),
                    left: l,
                    right: r,
                })
            })
            .collect();
        Ok(IdentityReport {
            y,
            max_degree,
            min_chi,
            left,
            right,
            mismatches,
        })
    }
}

impl InvariantOracle for Solver {
    fn connected_invariant(&mut self, component: &CurveConfig) -> Result<Rational, SolveError> {
        self.invariant(component)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub config: CurveConfig,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub y: LatticeVector,
    pub max_degree: i64,
    pub min_chi: i64,
    pub left: FormalSum,
    pub right: FormalSum,
    pub mismatches: Vec<Mismatch>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn check_connected_outgoing(config: &CurveConfig) -> Result<(), ConfigError> {
    if !config.is_outgoing_only() {
        return Err(ConfigError::UnexpectedIncoming);
    }
    if !config.is_connected() {
        return Err(ConfigError::NotConnected(config.components().len()));
    }
    Ok(())
}

/// The incoming vector `(-a, -1-b)` replacing an outgoing `(a, b)`, when it
/// is admissible (which needs `b ≤ a - 2`).
pub fn incoming_for(pivot: LatticeVector) -> Option<LatticeVector> {
    let y = LatticeVector::new(-pivot.a, -1 - pivot.b);
    (in_universal_cone(pivot) && is_valid_incoming(y)).then_some(y)
}

/// Distinct vectors of `config` that can serve as pivots.
pub fn pivot_candidates(config: &CurveConfig) -> Vec<LatticeVector> {
    let set: BTreeSet<LatticeVector> = config
        .outgoing_vectors()
        .filter(|&v| incoming_for(v).is_some())
        .collect();
    set.into_iter().collect()
}

/// Largest `a`, then smallest `b`.
pub fn default_pivot(config: &CurveConfig) -> Option<LatticeVector> {
    pivot_candidates(config)
        .into_iter()
        .min_by_key(|v| (std::cmp::Reverse(v.a), v.b))
}

/// All multisets of outgoing vectors summing to `total`, each sorted
/// ascending. `(0,0)` yields only the empty multiset.
pub fn consumed_multisets(total: LatticeVector) -> Vec<Vec<LatticeVector>> {
    fn go(
        a_left: i64,
        b_left: i64,
        bound: Option<LatticeVector>,
        cur: &mut Vec<LatticeVector>,
        out: &mut Vec<Vec<LatticeVector>>,
    ) {
        if a_left == 0 {
            if b_left == 0 {
                let mut m = cur.clone();
                m.reverse();
                out.push(m);
            }
            return;
        }
        let max_a = bound.map_or(a_left, |v| v.a.min(a_left));
        for a in 1..=max_a {
            let rest = a_left - a;
            // The rest can contribute at most `rest` to the b-sum.
            let min_b = b_left - rest;
            let mut max_b = a;
            if let Some(v) = bound.filter(|v| v.a == a) {
                max_b = max_b.min(v.b);
            }
            if rest == 0 {
                if (min_b..=max_b).contains(&b_left) {
                    cur.push(LatticeVector::new(a, b_left));
                    go(0, 0, None, cur, out);
                    cur.pop();
                }
                continue;
            }
            for b in min_b..=max_b {
                let v = LatticeVector::new(a, b);
                cur.push(v);
                go(rest, b_left - b, Some(v), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if total.a >= 0 {
        go(total.a, total.b, None, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Ways of grouping `consumed ∪ survivors` into components where every
/// component contains at least one consumed vector.
fn anchored_partitions(consumed: &[LatticeVector], survivors: &[LatticeVector]) -> Vec<Vec<Vec<LatticeVector>>> {
    if consumed.is_empty() {
        return if survivors.is_empty() {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let items: Vec<LatticeVector> = consumed.iter().chain(survivors).copied().collect();
    let mut out = Vec::new();
    for blocks in set_partitions(items.len()) {
        let count = blocks.iter().max().map_or(0, |m| m + 1);
        let mut anchored = vec![false; count];
        for &b in &blocks[..consumed.len()] {
            anchored[b] = true;
        }
        if anchored.iter().all(|&x| x) {
            out.push(group_blocks(&items, &blocks));
        }
    }
    out
}

/// Outgoing-only configurations that could sweep onto `target` from either
/// side, before checking the sweep coefficient.
fn source_candidates(target: &CurveConfig) -> BTreeSet<CurveConfig> {
    let incoming = target.incoming().expect("target must carry an incoming vector");
    let y = incoming.vector;
    let attached: Vec<LatticeVector> = target.components()[incoming.component].vectors().to_vec();
    let others: Vec<Vec<LatticeVector>> = target
        .components()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != incoming.component)
        .map(|(_, c)| c.vectors().to_vec())
        .collect();

    let mut out = BTreeSet::new();
    let mut add = |consumed: &[LatticeVector], survivors: &[LatticeVector]| {
        for groups in anchored_partitions(consumed, survivors) {
            let mut comps = others.clone();
            comps.extend(groups);
            out.insert(CurveConfig::outgoing(comps).expect("cone vectors"));
        }
    };
    for side in [Side::Left, Side::Right] {
        for consumed in consumed_multisets(side.exit_vector() - y) {
            add(&consumed, &attached);
        }
    }
    let terminals: BTreeSet<LatticeVector> = attached.iter().copied().collect();
    for w in terminals {
        let mut survivors = attached.clone();
        let at = survivors.iter().position(|&v| v == w).unwrap();
        survivors.remove(at);
        for consumed in consumed_multisets(w - y) {
            add(&consumed, &survivors);
        }
    }
    out
}

/// Every outgoing-only configuration whose `side` sweep with `y` has a
/// nonzero coefficient at `target`, paired with that coefficient.
pub fn enumerate_sources(
    target: &CurveConfig,
    y: LatticeVector,
    side: Side,
) -> Result<Vec<(CurveConfig, Rational)>, SolveError> {
    match target.incoming() {
        None => return Err(ConfigError::MissingIncoming.into()),
        Some(inc) if inc.vector != y => return Err(ConfigError::InvalidIncoming(y).into()),
        Some(_) => {}
    }
    let mut out = Vec::new();
    for src in source_candidates(target) {
        let coeff = expand(side, &src, y)?.coefficient_of(target);
        if !coeff.is_zero() {
            out.push((src, coeff));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64) -> LatticeVector {
        LatticeVector::new(a, b)
    }

    fn conn(vs: &[(i64, i64)]) -> CurveConfig {
        CurveConfig::connected(vs.iter().map(|&(a, b)| v(a, b)).collect()).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn worked_examples() {
        let mut s = Solver::new();
        assert_eq!(s.invariant(&conn(&[(1, -1)])).unwrap(), q(1, 1));
        assert_eq!(s.invariant(&conn(&[(2, -2)])).unwrap(), q(-1, 4));
        assert_eq!(s.invariant(&conn(&[(3, -3)])).unwrap(), q(1, 9));
        assert_eq!(s.invariant(&conn(&[(1, -2)])).unwrap(), q(0, 1));
        assert_eq!(s.invariant(&conn(&[(1, -4), (1, 1)])).unwrap(), q(1, 1));
        assert_eq!(s.invariant(&conn(&[(1, 1)])).unwrap(), q(0, 1));
        assert_eq!(s.invariant(&conn(&[(1, 0)])).unwrap(), q(0, 1));
    }

    #[test]
    fn rejects_non_connected_or_marked_input() {
        let mut s = Solver::new();
        let two = CurveConfig::outgoing(vec![vec![v(1, -1)], vec![v(1, -1)]]).unwrap();
        assert!(matches!(
            s.invariant(&two),
            Err(SolveError::Config(ConfigError::NotConnected(2)))
        ));
        let marked = CurveConfig::new(vec![vec![]], Some((0, v(-1, 0)))).unwrap();
        assert!(s.invariant(&marked).is_err());
    }

    #[test]
    fn consumed_multiset_examples() {
        assert_eq!(
            consumed_multisets(v(2, -2)),
            vec![
                vec![v(1, -3), v(1, 1)],
                vec![v(1, -2), v(1, 0)],
                vec![v(1, -1), v(1, -1)],
                vec![v(2, -2)],
            ]
        );
        assert_eq!(consumed_multisets(v(1, -1)), vec![vec![v(1, -1)]]);
        assert!(consumed_multisets(v(0, -1)).is_empty());
        assert_eq!(consumed_multisets(v(0, 0)), vec![Vec::<LatticeVector>::new()]);
        assert!(consumed_multisets(v(-1, 2)).is_empty());
    }

    #[test]
    fn consumed_multisets_match_brute_force() {
        for total in [v(3, -2), v(3, 1), v(2, 2), v(4, -5)] {
            let found: BTreeSet<Vec<LatticeVector>> = consumed_multisets(total).into_iter().collect();
            let pool: Vec<LatticeVector> = (1..=total.a)
                .flat_map(|a| (total.b - total.a..=a).map(move |b| v(a, b)))
                .collect();
            let mut brute = BTreeSet::new();
            let mut stack: Vec<(Vec<LatticeVector>, usize)> = vec![(Vec::new(), 0)];
            while let Some((cur, from)) = stack.pop() {
                let sum = cur.iter().fold(v(0, 0), |s, &x| s + x);
                if sum == total {
                    brute.insert(cur.clone());
                }
                if sum.a >= total.a {
                    continue;
                }
                for (i, &x) in pool.iter().enumerate().skip(from) {
                    let mut next = cur.clone();
                    next.push(x);
                    stack.push((next, i));
                }
            }
            assert_eq!(found, brute, "total {total}");
        }
    }

    #[test]
    fn sources_of_the_multiple_cover_target() {
        let y = v(-2, 1);
        let target = CurveConfig::new(vec![vec![]], Some((0, y))).unwrap();
        let right = enumerate_sources(&target, y, Side::Right).unwrap();
        assert!(right.contains(&(conn(&[(2, -2)]), q(2, 1))));
        let pair = CurveConfig::outgoing(vec![vec![v(1, -1)], vec![v(1, -1)]]).unwrap();
        assert!(right.contains(&(pair, q(1, 1))));
        assert!(enumerate_sources(&target, y, Side::Left).unwrap().is_empty());
    }

    #[test]
    fn sources_of_the_point_target() {
        let y = v(-1, 0);
        let target = CurveConfig::new(vec![vec![]], Some((0, y))).unwrap();
        assert_eq!(
            enumerate_sources(&target, y, Side::Left).unwrap(),
            vec![(CurveConfig::empty(), q(1, 1))]
        );
    }

    #[test]
    fn sources_of_the_incoming_line_target() {
        let y = v(-1, 3);
        let target = CurveConfig::new(vec![vec![v(1, 1)]], Some((0, y))).unwrap();
        let left = enumerate_sources(&target, y, Side::Left).unwrap();
        assert!(left.contains(&(conn(&[(2, -2)]), q(4, 1))));
        let pair = CurveConfig::outgoing(vec![vec![v(1, -1)], vec![v(1, -1)]]).unwrap();
        assert!(left.contains(&(pair, q(4, 1))));
        // The connected double line is a genuine source; it only drops out
        // because its invariant vanishes.
        assert!(left.iter().any(|(c, _)| c == &conn(&[(1, -1), (1, -1)])));
    }

    #[test]
    fn enumerate_sources_checks_its_input() {
        let y = v(-1, 0);
        assert!(enumerate_sources(&CurveConfig::empty(), y, Side::Left).is_err());
        let target = CurveConfig::new(vec![vec![]], Some((0, v(-2, 1)))).unwrap();
        assert!(enumerate_sources(&target, y, Side::Left).is_err());
    }

    #[test]
    fn unknown_coefficient_is_a_times_multiplicity_over_aut() {
        let mut s = Solver::new();
        for g in enumerate_outgoing(3, -8, true) {
            if g.component_genus(0) < 0 {
                continue;
            }
            for pivot in pivot_candidates(&g) {
                let eq = s.equation(&g, pivot).unwrap();
                let m = g.outgoing_vectors().filter(|&x| x == pivot).count() as i64;
                let expected = Rational::from(pivot.a * m) / Rational::from_integer(g.automorphism_order());
                assert_eq!(eq.unknown_coefficient, expected, "{g} pivot {pivot}");
            }
        }
    }

    #[test]
    fn pivot_choice_does_not_matter_up_to_degree_two() {
        let mut s = Solver::new();
        for g in enumerate_outgoing(2, -10, true) {
            let reference = s.invariant(&g).unwrap();
            for pivot in pivot_candidates(&g) {
                assert_eq!(
                    s.invariant_with_pivot(&g, pivot).unwrap(),
                    reference,
                    "{g} pivot {pivot}"
                );
            }
        }
    }

    #[test]
    fn strict_triangularity_up_to_degree_three() {
        let mut s = Solver::with_options(SolverOptions {
            genus_shortcut: true,
            strict_triangularity: true,
        });
        let table = s.invariant_table(3, -8).unwrap();
        assert!(!table.is_empty());
        assert!(s.table().in_progress().is_none());
    }

    #[test]
    fn default_pivot_prefers_large_a_then_small_b() {
        assert_eq!(default_pivot(&conn(&[(1, -4), (2, -2), (2, -3)])), Some(v(2, -3)));
        assert_eq!(default_pivot(&conn(&[(1, 0), (1, 1)])), None);
        assert_eq!(default_pivot(&conn(&[(2, 0)])), Some(v(2, 0)));
    }

    #[test]
    fn degree_one_table() {
        let mut s = Solver::new();
        let table = s.invariant_table(1, -9).unwrap();
        for (c, value) in table.solved() {
            let expected = if c == &conn(&[(1, -1)]) { q(1, 1) } else { q(0, 1) };
            assert_eq!(value, &expected, "{c}");
        }
        assert!(table.get(&conn(&[(1, 0)])).is_some());
        assert!(table.get(&conn(&[(1, 1)])).is_some());
        assert_eq!(table.get(&conn(&[(1, -5)])), Some(&q(0, 1)));
    }

    #[test]
    fn read_only_table_reports_missing_entries() {
        let mut table = InvariantTable::new();
        assert!(matches!(
            table.connected_invariant(&conn(&[(1, -1)])),
            Err(SolveError::Missing(_))
        ));
        table.insert(conn(&[(1, -1)]), q(1, 1)).unwrap();
        assert_eq!(table.connected_invariant(&conn(&[(1, -1)])).unwrap(), q(1, 1));
    }

    #[test]
    fn identity_holds_in_low_degree() {
        let mut s = Solver::new();
        for y in [v(-1, 0), v(-2, 1), v(-1, 3)] {
            let report = s.verify_identity(y, 2, -6).unwrap();
            assert!(report.holds(), "y = {y}: {:?}", report.mismatches);
        }
        let y = v(-1, 3);
        let report = s.verify_identity(y, 2, -6).unwrap();
        let t = CurveConfig::new(vec![vec![v(1, 1)]], Some((0, y))).unwrap();
        assert_eq!(report.left.coefficient_of(&t), q(1, 1));
        assert_eq!(report.right.coefficient_of(&t), q(1, 1));
        let y = v(-2, 1);
        let report = s.verify_identity(y, 2, -6).unwrap();
        let t = CurveConfig::new(vec![vec![]], Some((0, y))).unwrap();
        assert_eq!(report.left.coefficient_of(&t), q(0, 1));
    }
}
