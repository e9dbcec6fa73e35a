//! Tropical curve configurations: partitioned multisets of lattice vectors
//! with at most one marked incoming vector.
//!
//! A [`CurveConfig`] is always canonical. Inside every component the
//! outgoing vectors are sorted lexicographically, components are sorted by
//! their vector lists (the component carrying the incoming vector sorts after
//! an otherwise identical outgoing-only component), and the incoming vector
//! lives in a dedicated slot that records its component index. Two
//! configurations are isomorphic exactly when they compare equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{ConfigError, ParseError};
use crate::lattice::{in_universal_cone, is_valid_incoming, wedge, LatticeVector};

/// One connected component: its outgoing vectors in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Component {
    vectors: Vec<LatticeVector>,
}

impl Component {
    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// The marked incoming edge `y` and the component it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Incoming {
    pub component: usize,
    pub vector: LatticeVector,
}

/// Unvalidated, unordered configuration data as it arrives from users or
/// files. Turn it into a [`CurveConfig`] with [`canonicalize`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawConfig {
    pub components: Vec<Vec<LatticeVector>>,
    #[serde(default)]
    pub incoming: Option<Incoming>,
}

/// A (possibly disconnected) rigid tropical curve.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CurveConfig {
    components: Vec<Component>,
    incoming: Option<Incoming>,
}

/// Validate `raw` and bring it into canonical form.
pub fn canonicalize(raw: &RawConfig) -> Result<CurveConfig, ConfigError> {
    if let Some(inc) = raw.incoming {
        if inc.component >= raw.components.len() {
            return Err(ConfigError::IncomingComponent {
                index: inc.component,
                count: raw.components.len(),
            });
        }
        if !is_valid_incoming(inc.vector) {
            return Err(ConfigError::InvalidIncoming(inc.vector));
        }
    }
    let incoming_index = raw.incoming.map(|inc| inc.component);
    let mut keyed = Vec::with_capacity(raw.components.len());
    for (i, comp) in raw.components.iter().enumerate() {
        let marked = incoming_index == Some(i);
        if comp.is_empty() && !marked {
            return Err(ConfigError::EmptyComponent(i));
        }
        if let Some(&v) = comp.iter().find(|v| !in_universal_cone(**v)) {
            return Err(ConfigError::OutOfCone(v));
        }
        let mut vectors = comp.clone();
        vectors.sort_unstable();
        keyed.push((Component { vectors }, marked));
    }
    keyed.sort();
    let incoming = raw.incoming.map(|inc| Incoming {
        component: keyed.iter().position(|(_, marked)| *marked).unwrap(),
        vector: inc.vector,
    });
    Ok(CurveConfig {
        components: keyed.into_iter().map(|(c, _)| c).collect(),
        incoming,
    })
}

impl CurveConfig {
    pub fn new(
        components: Vec<Vec<LatticeVector>>,
        incoming: Option<(usize, LatticeVector)>,
    ) -> Result<Self, ConfigError> {
        canonicalize(&RawConfig {
            components,
            incoming: incoming.map(|(component, vector)| Incoming { component, vector }),
        })
    }

    /// The unique empty curve.
    pub fn empty() -> Self {
        CurveConfig {
            components: Vec::new(),
            incoming: None,
        }
    }

    /// Outgoing-only configuration with the given components.
    pub fn outgoing(components: Vec<Vec<LatticeVector>>) -> Result<Self, ConfigError> {
        Self::new(components, None)
    }

    /// A single outgoing-only component.
    pub fn connected(vectors: Vec<LatticeVector>) -> Result<Self, ConfigError> {
        Self::new(vec![vectors], None)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn incoming(&self) -> Option<Incoming> {
        self.incoming
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_outgoing_only(&self) -> bool {
        self.incoming.is_none()
    }

    /// All outgoing vectors, component by component.
    pub fn outgoing_vectors(&self) -> impl Iterator<Item = LatticeVector> + '_ {
        self.components.iter().flat_map(|c| c.vectors.iter().copied())
    }

    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            components: self.components.iter().map(|c| c.vectors.clone()).collect(),
            incoming: self.incoming,
        }
    }

    /// `Σ a` over outgoing vectors, plus `-y.a` for an incoming `y`.
    pub fn degree(&self) -> i64 {
        let outgoing: i64 = self.outgoing_vectors().map(|v| v.a).sum();
        outgoing - self.incoming.map_or(0, |inc| inc.vector.a)
    }

    /// Genus forced on rigid curves by the contact data of component `index`.
    pub fn component_genus(&self, index: usize) -> i64 {
        genus(&self.components[index], self.incoming_vector_of(index))
    }

    fn incoming_vector_of(&self, index: usize) -> Option<LatticeVector> {
        self.incoming.filter(|inc| inc.component == index).map(|inc| inc.vector)
    }

    /// `Σ (2 − 2g − k)` over components, `k` counting every contact point
    /// including the incoming one.
    pub fn euler_characteristic(&self) -> i64 {
        (0..self.components.len())
            .map(|i| {
                let k = self.components[i].len() as i64 + i64::from(self.incoming_vector_of(i).is_some());
                2 - 2 * self.component_genus(i) - k
            })
            .sum()
    }

    /// Ordering key for the solver's dependency discipline: sources must be
    /// strictly smaller in `(degree, -χ)`.
    pub fn complexity(&self) -> (i64, i64) {
        (self.degree(), -self.euler_characteristic())
    }

    /// `|Aut|`: permutations of equal vectors inside a component times
    /// permutations of isomorphic components. The incoming vector is fixed.
    pub fn automorphism_order(&self) -> BigUint {
        let mut classes: BTreeMap<(&Component, bool), u64> = BTreeMap::new();
        for (i, comp) in self.components.iter().enumerate() {
            let marked = self.incoming.is_some_and(|inc| inc.component == i);
            *classes.entry((comp, marked)).or_default() += 1;
        }
        let mut order = BigUint::one();
        for ((comp, _), m) in classes {
            let inner = multiplicities(&comp.vectors)
                .into_iter()
                .fold(BigUint::one(), |acc, k| acc * factorial(k));
            order *= factorial(m) * inner.pow(m as u32);
        }
        order
    }

    /// Split into one single-component configuration per component. Only
    /// meaningful for outgoing-only configurations.
    pub fn split_components(&self) -> Vec<CurveConfig> {
        self.components
            .iter()
            .map(|c| CurveConfig {
                components: vec![c.clone()],
                incoming: None,
            })
            .collect()
    }

    /// Canonical JSON text; this is the persistence key.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// Parse either the full object form or a bare list of components.
    pub fn parse_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Config(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for CurveConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Full(RawConfig),
            Bare(Vec<Vec<LatticeVector>>),
        }
        let raw = match Input::deserialize(deserializer)? {
            Input::Full(raw) => raw,
            Input::Bare(components) => RawConfig {
                components,
                incoming: None,
            },
        };
        canonicalize(&raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CurveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            let mut first = true;
            if let Some(y) = self.incoming_vector_of(i) {
                write!(f, "in{y}")?;
                first = false;
            }
            for v in &comp.vectors {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            write!(f, "]")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for CurveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `g = 1 − Σ(a + b + 1)` over the outgoing vectors, shifted by `y.a + y.b`
/// when the component carries the incoming vector `y`.
pub fn genus(comp: &Component, incoming: Option<LatticeVector>) -> i64 {
    let outgoing: i64 = comp.vectors.iter().map(|v| v.a + v.b + 1).sum();
    1 - outgoing + incoming.map_or(0, |y| y.a + y.b)
}

/// Euler characteristic contribution of one outgoing vector, `1 + 2a + 2b`.
pub fn vector_chi(v: LatticeVector) -> i64 {
    1 + 2 * v.a + 2 * v.b
}

/// Total order used by the sweeps: `u` precedes `v` when `u ∧ v < 0`;
/// parallel vectors fall back to lexicographic order.
pub fn sweep_cmp(u: &LatticeVector, v: &LatticeVector) -> Ordering {
    wedge(*u, *v).cmp(&0).then_with(|| u.cmp(v))
}

/// Stable sort into sweep order, so `i < j` implies `vs[i] ∧ vs[j] ≤ 0`.
pub fn sort_for_sweep(vs: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out = vs.to_vec();
    out.sort_by(sweep_cmp);
    out
}

fn multiplicities(sorted: &[LatticeVector]) -> Vec<u64> {
    sorted.chunk_by(|x, y| x == y).map(|run| run.len() as u64).collect()
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// All set partitions of `0..n` as block assignments in restricted-growth
/// form: `blocks[i]` is the block of element `i`, and block labels appear
/// in increasing order of first use.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for block in 0..=used {
            cur.push(block);
            go(i + 1, n, used.max(block + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

pub(crate) fn group_blocks<T: Copy>(items: &[T], blocks: &[usize]) -> Vec<Vec<T>> {
    let count = blocks.iter().map(|b| b + 1).max().unwrap_or(0);
    let mut grouped = vec![Vec::new(); count];
    for (item, &b) in items.iter().zip(blocks) {
        grouped[b].push(*item);
    }
    grouped
}

/// Multisets of outgoing vectors with total degree at most `max_degree` and
/// `Σ(1 + 2a + 2b) ≥ min_chi`, each sorted in descending order. The empty
/// multiset is included when `min_chi ≤ 0`.
pub fn vector_multisets(max_degree: i64, min_chi: i64) -> Vec<Vec<LatticeVector>> {
    fn go(
        remaining: i64,
        chi: i64,
        min_chi: i64,
        bound: Option<LatticeVector>,
        cur: &mut Vec<LatticeVector>,
        out: &mut Vec<Vec<LatticeVector>>,
    ) {
        if chi >= min_chi {
            out.push(cur.clone());
        }
        let max_a = bound.map_or(remaining, |v| v.a.min(remaining));
        for a in (1..=max_a).rev() {
            // Each later vector contributes at most 1 + 4a' ≤ 5a' to χ.
            let slack = 5 * (remaining - a);
            let need = min_chi - chi - slack - 1 - 2 * a;
            let min_b = need.div_euclid(2) + i64::from(need.rem_euclid(2) != 0);
            let mut max_b = a;
            if let Some(v) = bound.filter(|v| v.a == a) {
                max_b = max_b.min(v.b);
            }
            for b in (min_b..=max_b).rev() {
                let v = LatticeVector::new(a, b);
                cur.push(v);
                go(remaining - a, chi + vector_chi(v), min_chi, Some(v), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if max_degree >= 0 {
        go(max_degree, 0, min_chi, None, &mut Vec::new(), &mut out);
    }
    out
}

/// Every outgoing-only configuration (all partitions of every multiset from
/// [`vector_multisets`]), or only the connected ones.
pub fn enumerate_outgoing(max_degree: i64, min_chi: i64, connected_only: bool) -> Vec<CurveConfig> {
    let mut seen = BTreeSet::new();
    for multiset in vector_multisets(max_degree, min_chi) {
        if connected_only {
            if !multiset.is_empty() {
                seen.insert(CurveConfig::connected(multiset).expect("cone vectors"));
            }
            continue;
        }
        if multiset.is_empty() {
            seen.insert(CurveConfig::empty());
            continue;
        }
        for blocks in set_partitions(multiset.len()) {
            let comps = group_blocks(&multiset, &blocks);
            seen.insert(CurveConfig::outgoing(comps).expect("cone vectors"));
        }
    }
    seen.into_iter().collect()
}
