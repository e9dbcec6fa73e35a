//! The two sweep operators.
//!
//! Both start from an outgoing-only configuration `v_1 ⋯ v_n` in sweep order
//! (`v_i ∧ v_j ≤ 0` for `i < j`) together with a passive incoming vector `y`
//! and a moving arrow that starts equal to `y`.
//!
//! * Left sweep `Γ ←y y`: the arrow starts at the right end and moves left.
//!   Against its left neighbour `v` it either passes (coefficient 1) or
//!   consumes `v` with coefficient `max(v ∧ α, 0)`, becoming `v + α` and
//!   absorbing `v`'s component. At the left end an arrow `(-1,0)` is
//!   dropped, an arrow in the outgoing cone is kept as a new outgoing vector,
//!   and anything else kills the branch.
//! * Right sweep `y →y Γ`: mirror image, moving right, consuming with
//!   `max(α ∧ v, 0)`; the arrow that is dropped at the end is `(0,-1)`.
//!
//! The components absorbed by the arrow become the component of the
//! incoming vector in the output.

use serde::{Deserialize, Serialize};

use crate::configs::{sort_for_sweep, CurveConfig};
use crate::error::ConfigError;
use crate::formal::FormalSum;
use crate::lattice::{in_universal_cone, is_valid_incoming, wedge, LatticeVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Arrow value that disappears at the end of the sweep.
    pub fn exit_vector(self) -> LatticeVector {
        match self {
            Side::Left => LatticeVector::new(-1, 0),
            Side::Right => LatticeVector::new(0, -1),
        }
    }
}

/// One branch of a sweep in progress.
#[derive(Clone, Debug)]
pub struct SweepState {
    /// Vectors still in play, with the id of the source component each came from.
    pub sequence: Vec<(LatticeVector, usize)>,
    pub arrow: LatticeVector,
    /// Source components merged into the arrow (and hence into `y`'s component).
    pub arrow_class: Vec<usize>,
    /// The arrow sits just before `sequence[position]`; for a left sweep it
    /// moves towards 0, for a right sweep towards `sequence.len()`.
    pub position: usize,
}

/// Expand `src ←y y`.
pub fn expand_left(src: &CurveConfig, y: LatticeVector) -> Result<FormalSum, ConfigError> {
    expand(Side::Left, src, y)
}

/// Expand `y →y src`.
pub fn expand_right(y: LatticeVector, src: &CurveConfig) -> Result<FormalSum, ConfigError> {
    expand(Side::Right, src, y)
}

/// Expand one configuration with its vectors placed in the default sweep
/// order (parallel vectors tie-broken lexicographically).
pub fn expand(side: Side, src: &CurveConfig, y: LatticeVector) -> Result<FormalSum, ConfigError> {
    if !src.is_outgoing_only() {
        return Err(ConfigError::UnexpectedIncoming);
    }
    let mut tagged: Vec<(LatticeVector, usize)> = src
        .components()
        .iter()
        .enumerate()
        .flat_map(|(id, comp)| comp.vectors().iter().map(move |&v| (v, id)))
        .collect();
    let order = sort_for_sweep(&tagged.iter().map(|t| t.0).collect::<Vec<_>>());
    // Match the sorted vectors back to their component ids; equal vectors
    // are interchangeable, so any assignment gives the same result.
    let mut sequence = Vec::with_capacity(tagged.len());
    for v in order {
        let at = tagged.iter().position(|t| t.0 == v).unwrap();
        sequence.push(tagged.swap_remove(at));
    }
    expand_with_order(side, &sequence, y)
}

/// Expand with an explicit vector order. `sequence` pairs each vector with
/// an arbitrary component label and must already be in sweep order.
pub fn expand_with_order(
    side: Side,
    sequence: &[(LatticeVector, usize)],
    y: LatticeVector,
) -> Result<FormalSum, ConfigError> {
    if !is_valid_incoming(y) {
        return Err(ConfigError::InvalidIncoming(y));
    }
    if let Some(&(v, _)) = sequence.iter().find(|(v, _)| !in_universal_cone(*v)) {
        return Err(ConfigError::OutOfCone(v));
    }
    if let Some(i) = sequence.windows(2).position(|w| wedge(w[0].0, w[1].0) > 0) {
        return Err(ConfigError::BadOrder(i + 1));
    }
    let start = SweepState {
        sequence: sequence.to_vec(),
        arrow: y,
        arrow_class: Vec::new(),
        position: match side {
            Side::Left => sequence.len(),
            Side::Right => 0,
        },
    };
    let mut out = FormalSum::new();
    run(side, y, start, 1, &mut out);
    Ok(out)
}

/// Linear extension of the sweep to a formal sum of outgoing configurations.
pub fn expand_sum(side: Side, series: &FormalSum, y: LatticeVector) -> Result<FormalSum, ConfigError> {
    let mut out = FormalSum::new();
    for (config, coeff) in series.iter() {
        out.add_scaled(&expand(side, config, y)?, coeff);
    }
    Ok(out)
}

fn run(side: Side, y: LatticeVector, mut state: SweepState, coeff: i128, out: &mut FormalSum) {
    let neighbour = match side {
        Side::Left => state.position.checked_sub(1),
        Side::Right => (state.position < state.sequence.len()).then_some(state.position),
    };
    let Some(at) = neighbour else {
        finish(side, y, state, coeff, out);
        return;
    };
    let (v, id) = state.sequence[at];
    let weight = match side {
        Side::Left => wedge(v, state.arrow),
        Side::Right => wedge(state.arrow, v),
    };
    if weight > 0 {
        let mut consumed = state.clone();
        consumed.sequence.remove(at);
        consumed.arrow = consumed.arrow + v;
        if !consumed.arrow_class.contains(&id) {
            consumed.arrow_class.push(id);
        }
        // Removing the neighbour already moves a right-moving arrow past it.
        consumed.position = at;
        let c = coeff
            .checked_mul(i128::from(weight))
            .expect("sweep coefficient overflow");
        run(side, y, consumed, c, out);
    }
    state.position = match side {
        Side::Left => at,
        Side::Right => at + 1,
    };
    run(side, y, state, coeff, out);
}

fn finish(side: Side, y: LatticeVector, state: SweepState, coeff: i128, out: &mut FormalSum) {
    let keep_arrow = if state.arrow == side.exit_vector() {
        false
    } else if in_universal_cone(state.arrow) {
        true
    } else {
        return;
    };
    let mut labels: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<LatticeVector>> = Vec::new();
    let mut incoming_part: Vec<LatticeVector> = Vec::new();
    for &(v, id) in &state.sequence {
        if state.arrow_class.contains(&id) {
            incoming_part.push(v);
        } else if let Some(k) = labels.iter().position(|&l| l == id) {
            components[k].push(v);
        } else {
            labels.push(id);
            components.push(vec![v]);
        }
    }
    if keep_arrow {
        incoming_part.push(state.arrow);
    }
    components.push(incoming_part);
    let index = components.len() - 1;
    let config = CurveConfig::new(components, Some((index, y))).expect("sweep output is valid");
    out.add_term(config, Rational::from_integer(coeff));
}
