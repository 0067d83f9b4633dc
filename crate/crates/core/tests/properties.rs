mod common;

use std::collections::BTreeMap;

use brauer_kl::arcdiagrams::{build_arc_diagram, is_oriented};
use brauer_kl::decomp::{d_poly, d_poly_recursive};
use brauer_kl::klpoly::{chamber_tree, enumerate_valued, p_poly, p_poly_recursive, LProfile};
use brauer_kl::weights::{
    build_weight, down_set, index_order, lowering_moves, weight_leq, weight_to_shape, Family,
    Label, Partition, Shape, WeightDiagram,
};
use common::*;
use proptest::prelude::*;

fn arb_partition(max: u32) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0..=max, 0..=max as usize).prop_filter_map(
        "size bound",
        move |mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let p = Partition::new(v.into_iter().filter(|&x| x > 0).collect()).ok()?;
            (p.size() <= max).then_some(p)
        },
    )
}

fn arb_shape() -> impl Strategy<Value = (Shape, i64)> {
    prop_oneof![
        (
            arb_partition(10),
            prop::sample::select(BRAUER_DELTAS.to_vec())
        )
            .prop_map(|(p, d)| (Shape::brauer(p), d)),
        (
            arb_partition(5),
            arb_partition(5),
            prop::sample::select(WALLED_DELTAS.to_vec())
        )
            .prop_map(|(l, r, d)| (Shape::walled(l, r), d)),
    ]
}

fn arb_weight() -> impl Strategy<Value = WeightDiagram> {
    (arb_shape(), prop::bool::ANY).prop_map(|((s, d), up)| {
        build_weight(&s, d, if up { Label::Up } else { Label::Down }, false).unwrap()
    })
}

/// A weight from a random label string, with at most `n` vertices.
fn arb_labels(n: usize) -> impl Strategy<Value = WeightDiagram> {
    (
        prop::bool::ANY,
        1i64..=2,
        proptest::collection::vec(0usize..4, 1..=n),
    )
        .prop_filter_map("valid labels", |(brauer, delta, codes)| {
            let family = if brauer {
                Family::Brauer
            } else {
                Family::Walled
            };
            let lo = if brauer { grid_start(delta) } else { -4 };
            let s: String = codes
                .iter()
                .enumerate()
                .map(|(k, &c)| {
                    if brauer && lo + 2 * k as i64 == 0 {
                        ['o', 'D', 'o', 'D'][c]
                    } else {
                        ['o', 'x', 'v', '^'][c]
                    }
                })
                .collect();
            weight(family, delta, lo, &s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shapes_round_trip((shape, delta) in arb_shape()) {
        let w = build_weight(&shape, delta, Label::Down, false).unwrap();
        prop_assert_eq!(weight_to_shape(&w).unwrap(), shape);
    }

    #[test]
    fn json_round_trip(w in arb_weight()) {
        let back: WeightDiagram = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn down_set_is_an_order_ideal(w in arb_weight()) {
        let ds = down_set(&w);
        prop_assert_eq!(ds.last(), Some(&w));
        for (i, a) in ds.iter().enumerate() {
            prop_assert!(weight_leq(a, a).unwrap());
            prop_assert!(weight_leq(a, &w).unwrap());
            for x in lowering_moves(a) {
                prop_assert!(ds.contains(&x));
            }
            for (j, b) in ds.iter().enumerate() {
                let ab = weight_leq(a, b).unwrap();
                if ab && weight_leq(b, a).unwrap() {
                    prop_assert_eq!(a, b);
                }
                if ab {
                    prop_assert!(i <= j);
                    prop_assert!(index_order(a, b).is_le());
                }
            }
        }
    }

    #[test]
    fn order_is_transitive(w in arb_weight()) {
        let ds = down_set(&w);
        let small = &ds[..ds.len().min(12)];
        for a in small {
            for b in small {
                for c in small {
                    if weight_leq(a, b).unwrap() && weight_leq(b, c).unwrap() {
                        prop_assert!(weight_leq(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn orientation_forces_order(w in arb_weight()) {
        let c = build_arc_diagram(&w);
        for mu in down_set(&w) {
            if is_oriented(&c, &mu) {
                prop_assert!(weight_leq(&mu, &w).unwrap());
            }
            prop_assert_eq!(d_poly(&w, &mu), d_poly_recursive(&w, &mu));
            prop_assert_eq!(p_poly(&w, &mu).unwrap(), p_poly_recursive(&w, &mu).unwrap());
        }
    }

    #[test]
    fn arcs_account_for_every_vertex(w in arb_labels(20)) {
        let c = build_arc_diagram(&w);
        let mut on_arcs: Vec<i64> = c.rays().to_vec();
        for (a, b) in c.caps().iter().chain(c.curls()) {
            on_arcs.extend([*a, *b]);
        }
        let n = on_arcs.len();
        on_arcs.sort_unstable();
        on_arcs.dedup();
        prop_assert_eq!(on_arcs.len(), n);
        for p in w.positions() {
            if w.label(p).is_nontrivial() {
                prop_assert!(on_arcs.contains(&p), "vertex {} unaccounted", p);
            } else {
                prop_assert!(c.free().contains(&p) && !on_arcs.contains(&p));
            }
        }
        for (a, b) in c.caps() {
            prop_assert_eq!((w.label(*a), w.label(*b)), (Label::Down, Label::Up));
        }
        for (a, b) in c.curls() {
            prop_assert_eq!((w.label(*a), w.label(*b)), (Label::Up, Label::Up));
        }
    }

    #[test]
    fn enumeration_matches_brute_force(
        w in arb_labels(12).prop_filter("brauer", |w| w.family() == Family::Brauer),
        raw_bounds in proptest::collection::vec(0i64..4, 12),
    ) {
        let tree = chamber_tree(&build_arc_diagram(&w));
        prop_assume!(tree.len() <= 7);
        let mut per_vertex = BTreeMap::new();
        for (k, p) in (1..tree.len()).filter_map(|k| tree.bound_vertex(k)).enumerate() {
            per_vertex.insert(p, raw_bounds[k]);
        }
        let total = per_vertex.values().sum();
        let bounds = LProfile { per_vertex, total };
        let mut expect = brute_force_valued(&tree, &bounds, 3);
        let mut got: Vec<Vec<u32>> = enumerate_valued(&tree, &bounds).into_iter().map(|a| a.value).collect();
        expect.sort();
        got.sort();
        prop_assert_eq!(got, expect);
    }
}
