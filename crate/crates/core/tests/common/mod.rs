//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use brauer_kl::klpoly::{ChamberTree, LProfile};
use brauer_kl::weights::{resolve_diamond, Family, Label, Pos, WeightDiagram};
use rand::seq::SliceRandom;
use rand::Rng;

pub const BRAUER_DELTAS: [i64; 6] = [-3, -2, -1, 1, 2, 3];
pub const WALLED_DELTAS: [i64; 5] = [-2, -1, 1, 2, 3];
pub const BRAUER_MAX: u32 = 10;
pub const WALLED_MAX: u32 = 5;

/// A weight from raw label codes (`o x v ^ D`) starting at `lo`. A `◇` is
/// resolved by the block rule with choice `∨`.
pub fn weight(family: Family, delta: i64, lo: Pos, labels: &str) -> Option<WeightDiagram> {
    let ups = labels.chars().filter(|&c| c == '^').count();
    let resolution = labels
        .contains('D')
        .then(|| resolve_diamond(ups, Label::Down).code().to_string());
    let hi = lo + 2 * (labels.chars().count() as Pos - 1);
    let json = serde_json::json!({
        "family": family, "delta": delta, "window_lo": lo, "window_hi": hi,
        "labels": labels, "diamond_resolution": resolution,
    });
    serde_json::from_value(json).ok()
}

/// First vertex of the Brauer grid.
pub fn grid_start(delta: i64) -> Pos {
    delta.rem_euclid(2)
}

/// Every raw label string of length `len` starting at `lo`, with vertex 0
/// restricted to `∘`/`◇` on an integral Brauer grid.
pub fn all_strings(family: Family, lo: Pos, len: usize, alphabet: &[char]) -> Vec<String> {
    let mut out = vec![String::new()];
    for k in 0..len {
        let pos = lo + 2 * k as Pos;
        let letters: Vec<char> = if family == Family::Brauer && pos == 0 {
            vec!['o', 'D']
        } else {
            alphabet.to_vec()
        };
        out = out
            .into_iter()
            .flat_map(|s| letters.iter().map(move |&c| format!("{s}{c}")))
            .collect();
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Orbit classes of equal-length strings under the reflection-group moves:
/// swapping two `∨/∧` labels, and in the Brauer family also flipping two of
/// them, or one of them when a `◇` is present.
pub fn orbit_classes(family: Family, strings: &[String]) -> Vec<usize> {
    let id: HashMap<&str, usize> = strings
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut parent: Vec<usize> = (0..strings.len()).collect();
    for (i, s) in strings.iter().enumerate() {
        let chars: Vec<char> = s.chars().collect();
        let signed: Vec<usize> = (0..chars.len())
            .filter(|&k| matches!(chars[k], 'v' | '^'))
            .collect();
        let flip = |c: char| if c == 'v' { '^' } else { 'v' };
        let mut neighbours: Vec<Vec<char>> = Vec::new();
        for (a, &x) in signed.iter().enumerate() {
            for &y in &signed[a + 1..] {
                let mut t = chars.clone();
                t.swap(x, y);
                neighbours.push(t);
                if family == Family::Brauer {
                    let mut t = chars.clone();
                    t[x] = flip(t[x]);
                    t[y] = flip(t[y]);
                    neighbours.push(t);
                }
            }
            if family == Family::Brauer && chars.contains(&'D') {
                let mut t = chars.clone();
                t[x] = flip(t[x]);
                neighbours.push(t);
            }
        }
        for t in neighbours {
            let t: String = t.into_iter().collect();
            if let Some(&j) = id.get(t.as_str()) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..strings.len()).map(|i| find(&mut parent, i)).collect()
}

/// Caps by the neighbour rule applied in random order, then curls by pairing
/// the unmatched `∧`s from the left (Brauer only).
pub fn neighbour_rule_arcs(
    family: Family,
    labels: &[(Pos, Label)],
    rng: &mut impl Rng,
) -> (BTreeSet<(Pos, Pos)>, BTreeSet<(Pos, Pos)>) {
    let mut live: Vec<(Pos, Label)> = labels
        .iter()
        .copied()
        .filter(|(_, l)| l.is_nontrivial())
        .collect();
    let mut caps = BTreeSet::new();
    loop {
        let candidates: Vec<usize> = (0..live.len().saturating_sub(1))
            .filter(|&k| live[k].1 == Label::Down && live[k + 1].1 == Label::Up)
            .collect();
        let Some(&k) = candidates.choose(rng) else {
            break;
        };
        caps.insert((live[k].0, live[k + 1].0));
        live.drain(k..k + 2);
    }
    let mut curls = BTreeSet::new();
    if family == Family::Brauer {
        let ups: Vec<Pos> = live
            .iter()
            .filter(|(_, l)| *l == Label::Up)
            .map(|x| x.0)
            .collect();
        for pair in ups.chunks_exact(2) {
            curls.insert((pair[0], pair[1]));
        }
    }
    (caps, curls)
}

/// Conditions (1)-(4) and the small-chamber bounds, read off the tree.
pub fn valued_ok(tree: &ChamberTree, bounds: &LProfile, values: &[u32]) -> bool {
    if values[0] != 0 {
        return false;
    }
    for (k, node) in tree.nodes.iter().enumerate().skip(1) {
        let parent = node.parent.expect("non-root has a parent");
        if values[k] < values[parent] {
            return false;
        }
        if node.must_be_even && values[k] % 2 != 0 {
            return false;
        }
        if node.is_small {
            let right = node.arc.expect("bounded").1;
            if i64::from(values[k]) > bounds.at(right) {
                return false;
            }
        }
    }
    for chain in &tree.chains {
        for (i, &a) in chain.iter().enumerate() {
            let is_min = chain[..i].iter().all(|&b| values[a] <= values[b]);
            if is_min && values[a] % 2 != 0 {
                return false;
            }
        }
    }
    true
}

/// Every assignment in `[0, top]^(n-1)` that passes [`valued_ok`].
pub fn brute_force_valued(tree: &ChamberTree, bounds: &LProfile, top: u32) -> Vec<Vec<u32>> {
    let n = tree.nodes.len();
    let mut out = Vec::new();
    let mut values = vec![0u32; n];
    loop {
        if valued_ok(tree, bounds, &values) {
            out.push(values.clone());
        }
        let mut k = n - 1;
        loop {
            if k == 0 {
                return out;
            }
            if values[k] < top {
                values[k] += 1;
                break;
            }
            values[k] = 0;
            k -= 1;
        }
    }
}
