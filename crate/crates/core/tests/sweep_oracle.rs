//! The sweeps checked against a direct reimplementation: every subset of
//! positions is tried as the consumed set, instead of branching recursively.

use proptest::prelude::*;

use tropgw::configs::{enumerate_outgoing, sort_for_sweep, CurveConfig};
use tropgw::formal::FormalSum;
use tropgw::lattice::{in_universal_cone, is_valid_incoming, wedge, LatticeVector, Rational};
use tropgw::sweep::{expand, expand_sum, Side};

fn v(a: i64, b: i64) -> LatticeVector {
    LatticeVector::new(a, b)
}

/// Positions in slope-descending order, each tagged with its component.
fn ordered(src: &CurveConfig) -> Vec<(LatticeVector, usize)> {
    let mut tagged: Vec<(LatticeVector, usize)> = src
        .components()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.vectors().iter().map(move |&x| (x, i)))
        .collect();
    let order = sort_for_sweep(&tagged.iter().map(|t| t.0).collect::<Vec<_>>());
    let mut out = Vec::new();
    for x in order {
        let at = tagged.iter().position(|t| t.0 == x).unwrap();
        out.push(tagged.remove(at));
    }
    out
}

fn oracle(side: Side, src: &CurveConfig, y: LatticeVector) -> FormalSum {
    let seq = ordered(src);
    let n = seq.len();
    let visit: Vec<usize> = match side {
        Side::Left => (0..n).rev().collect(),
        Side::Right => (0..n).collect(),
    };
    let exit = match side {
        Side::Left => v(-1, 0),
        Side::Right => v(0, -1),
    };
    let mut out = FormalSum::new();
    for mask in 0u32..(1 << n) {
        let mut arrow = y;
        let mut coeff: i64 = 1;
        let mut merged = vec![false; src.components().len()];
        for &i in &visit {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (x, comp) = seq[i];
            let w = match side {
                Side::Left => wedge(x, arrow),
                Side::Right => wedge(arrow, x),
            };
            if w <= 0 {
                coeff = 0;
                break;
            }
            coeff *= w;
            arrow = arrow + x;
            merged[comp] = true;
        }
        if coeff == 0 {
            continue;
        }
        let keep = if arrow == exit {
            false
        } else if in_universal_cone(arrow) {
            true
        } else {
            continue;
        };
        let mut comps: Vec<Vec<LatticeVector>> = vec![Vec::new(); src.components().len()];
        let mut marked = Vec::new();
        for (i, &(x, comp)) in seq.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            if merged[comp] {
                marked.push(x);
            } else {
                comps[comp].push(x);
            }
        }
        if keep {
            marked.push(arrow);
        }
        let mut comps: Vec<Vec<LatticeVector>> = comps.into_iter().filter(|c| !c.is_empty()).collect();
        comps.push(marked);
        let at = comps.len() - 1;
        out.add_term(CurveConfig::new(comps, Some((at, y))).unwrap(), Rational::from(coeff));
    }
    out
}

fn all_y() -> Vec<LatticeVector> {
    (-4..=-1)
        .flat_map(|a| (a + 1..=5).map(move |b| v(a, b)))
        .filter(|&y| is_valid_incoming(y))
        .collect()
}

#[test]
fn sweeps_match_subset_oracle_up_to_degree_three() {
    let configs = enumerate_outgoing(3, -5, false);
    assert!(configs.len() > 100);
    for c in &configs {
        for y in all_y() {
            for side in [Side::Left, Side::Right] {
                assert_eq!(expand(side, c, y).unwrap(), oracle(side, c, y), "{side:?} {c} y = {y}");
            }
        }
    }
}

#[test]
fn degree_bookkeeping() {
    // A left exit removes consumed degree |y1| - 1; every other outcome
    // removes exactly what the marked vector adds back.
    for c in enumerate_outgoing(3, -5, false) {
        for y in all_y() {
            for side in [Side::Left, Side::Right] {
                for (out, _) in expand(side, &c, y).unwrap().iter() {
                    let step = out.degree() - c.degree();
                    assert!(step == 0 || (side == Side::Left && step == 1), "{c} -> {out}");
                }
            }
        }
    }
}

fn arb_vector() -> impl Strategy<Value = LatticeVector> {
    (1i64..=3, -5i64..=3).prop_map(|(a, b)| v(a, b.min(a)))
}

fn arb_outgoing() -> impl Strategy<Value = CurveConfig> {
    prop::collection::vec(prop::collection::vec(arb_vector(), 1..=2), 0..=3)
        .prop_map(|comps| CurveConfig::outgoing(comps).unwrap())
}

fn arb_incoming() -> impl Strategy<Value = LatticeVector> {
    (-3i64..=-1, 0i64..=6).prop_map(|(a, k)| v(a, a + 1 + k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_configs_match_oracle(c in arb_outgoing(), y in arb_incoming(), left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        prop_assert_eq!(expand(side, &c, y).unwrap(), oracle(side, &c, y));
    }

    #[test]
    fn expand_sum_is_linear(
        c1 in arb_outgoing(),
        c2 in arb_outgoing(),
        p in -5i64..5,
        r in 1i64..5,
        y in arb_incoming(),
    ) {
        let w = Rational::new(p, r);
        let series = FormalSum::singleton(c1.clone(), w.clone()) + FormalSum::singleton(c2.clone(), Rational::one());
        for side in [Side::Left, Side::Right] {
            let mut expected = FormalSum::new();
            expected.add_scaled(&expand(side, &c1, y).unwrap(), &w);
            expected.add_scaled(&expand(side, &c2, y).unwrap(), &Rational::one());
            prop_assert_eq!(expand_sum(side, &series, y).unwrap(), expected);
        }
    }
}
