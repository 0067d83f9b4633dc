//! The l-profile, chamber trees, valued diagrams and `p_λμ(q)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arcdiagrams::{build_arc_diagram, Arc, ArcDiagram};
use crate::decomp::{recursion_choice, Memo, ReductionCase};
use crate::qpoly::{QPoly, QPolyError};
use crate::weights::{same_block, Family, Label, Pos, WeightDiagram, WeightError};

/// `l_i(λ, μ)` for every `i ∈ I(𝓑)` in the common window, and their sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LProfile {
    pub per_vertex: BTreeMap<Pos, i64>,
    pub total: i64,
}

impl LProfile {
    /// `l_i`, zero for vertices outside the profile.
    pub fn at(&self, pos: Pos) -> i64 {
        self.per_vertex.get(&pos).copied().unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.per_vertex.values().all(|&l| l >= 0)
    }

    /// The non-zero values, left to right.
    pub fn nonzero_values(&self) -> Vec<i64> {
        self.per_vertex
            .values()
            .copied()
            .filter(|&l| l != 0)
            .collect()
    }
}

/// `l_i(λ,μ) = #{j >= i : λ has ∧ at j} - #{j >= i : μ has ∧ at j}` over the
/// non-trivial vertices, skipping the leftmost one in the Brauer family.
pub fn l_profile(lambda: &WeightDiagram, mu: &WeightDiagram) -> Result<LProfile, WeightError> {
    if !same_block(lambda, mu)? {
        return Err(WeightError::DifferentBlocks);
    }
    let lo = lambda.window_lo().min(mu.window_lo());
    let hi = lambda.window_hi().max(mu.window_hi());
    let nontrivial: Vec<Pos> = lambda
        .positions_in(lo, hi)
        .filter(|&p| lambda.label(p).is_nontrivial())
        .collect();
    let skip = match lambda.family() {
        Family::Brauer => nontrivial.first().copied(),
        Family::Walled => None,
    };
    let mut per_vertex = BTreeMap::new();
    let mut diff = 0i64;
    for &p in nontrivial.iter().rev() {
        diff += i64::from(lambda.label(p) == Label::Up) - i64::from(mu.label(p) == Label::Up);
        if Some(p) != skip {
            per_vertex.insert(p, diff);
        }
    }
    let total = per_vertex.values().sum();
    Ok(LProfile { per_vertex, total })
}

/// A node of a chamber tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    /// Bounding arc as `(left, right, is_curl)`; `None` for the root.
    pub arc: Option<(Pos, Pos, bool)>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub is_small: bool,
    pub must_be_even: bool,
}

/// Nesting tree of the chambers of an arc diagram.
///
/// Node 0 is the unbounded chamber. Nodes are stored in depth-first pre-order
/// with children left to right, so a parent and every left sibling precede a
/// node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberTree {
    pub nodes: Vec<Chamber>,
    /// Sibling runs subject to the chain condition, left to right.
    pub chains: Vec<Vec<usize>>,
}

impl ChamberTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    /// Right endpoint of a small chamber's arc, whose `l_i` bounds its value.
    pub fn bound_vertex(&self, node: usize) -> Option<Pos> {
        let c = &self.nodes[node];
        if c.is_small {
            c.arc.map(|a| a.1)
        } else {
            None
        }
    }
}

/// Innermost arc containing `x`, if any.
fn parent_arc(arcs: &[Arc], x: Arc) -> Option<Arc> {
    let caps = arcs.iter().filter(|a| !a.is_curl() && a.contains(x));
    if let Some(cap) = caps.min_by_key(|a| a.right() - a.left()) {
        return Some(*cap);
    }
    arcs.iter()
        .filter(|a| a.is_curl() && a.contains(x))
        .min_by_key(|a| a.right())
        .copied()
}

/// Chamber tree of `c` in the interval model.
pub fn chamber_tree(c: &ArcDiagram) -> ChamberTree {
    let arcs = c.arcs();
    let leftmost = c.leftmost_nontrivial();
    let mut children: BTreeMap<Option<Arc>, Vec<Arc>> = BTreeMap::new();
    for &a in &arcs {
        children.entry(parent_arc(&arcs, a)).or_default().push(a);
    }
    for kids in children.values_mut() {
        kids.sort_by_key(|a| a.right());
    }
    let mut tree = ChamberTree {
        nodes: Vec::new(),
        chains: Vec::new(),
    };
    fn visit(
        tree: &mut ChamberTree,
        children: &BTreeMap<Option<Arc>, Vec<Arc>>,
        arc: Option<Arc>,
        parent: Option<usize>,
        leftmost: Option<Pos>,
    ) -> usize {
        let id = tree.nodes.len();
        let kids = children.get(&arc).cloned().unwrap_or_default();
        let must_be_even = match arc {
            Some(Arc::Curl(..)) => true,
            Some(Arc::Cap(a, _)) => Some(a) == leftmost,
            None => false,
        };
        tree.nodes.push(Chamber {
            arc: arc.map(|a| (a.left(), a.right(), a.is_curl())),
            parent,
            children: Vec::new(),
            is_small: arc.is_some() && kids.is_empty(),
            must_be_even,
        });
        for k in kids {
            let child = visit(tree, children, Some(k), Some(id), leftmost);
            tree.nodes[id].children.push(child);
        }
        id
    }
    visit(&mut tree, &children, None, None, leftmost);
    tree.chains = chains(&tree, c, leftmost);
    tree
}

fn starts_chain(tree: &ChamberTree, node: usize, leftmost: Option<Pos>) -> bool {
    match tree.nodes[node].arc {
        Some((_, _, true)) => true,
        Some((a, _, false)) => Some(a) == leftmost,
        None => false,
    }
}

fn chains(tree: &ChamberTree, c: &ArcDiagram, leftmost: Option<Pos>) -> Vec<Vec<usize>> {
    if c.family() == Family::Walled {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (id, node) in tree.nodes.iter().enumerate() {
        let kids = &node.children;
        if kids.is_empty() {
            continue;
        }
        let run: Vec<usize> = match node.arc {
            // the unbounded chamber: children before the first ray
            None => {
                let first_ray = c.rays().first().copied().unwrap_or(Pos::MAX);
                kids.iter()
                    .copied()
                    .take_while(|&k| tree.nodes[k].arc.unwrap().1 < first_ray)
                    .collect()
            }
            // a curl chamber: children up to the curl's own left end
            Some((i, _, true)) => kids
                .iter()
                .copied()
                .take_while(|&k| tree.nodes[k].arc.unwrap().1 < i)
                .collect(),
            Some((_, _, false)) => continue,
        };
        let _ = id;
        if !run.is_empty() && starts_chain(tree, run[0], leftmost) {
            out.push(run);
        }
    }
    out
}

/// Values of a valued diagram, indexed like the tree's nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuedAssignment {
    pub value: Vec<u32>,
    pub weight_sum: u64,
}

/// Whether `values` satisfies the valued diagram conditions on `tree` with
/// the small-chamber bounds of `bounds`.
pub fn is_valid_assignment(tree: &ChamberTree, bounds: &LProfile, values: &[u32]) -> bool {
    if values.len() != tree.len() || values[0] != 0 {
        return false;
    }
    for (id, node) in tree.nodes.iter().enumerate().skip(1) {
        let v = values[id];
        if v < values[node.parent.unwrap()] || (node.must_be_even && v % 2 == 1) {
            return false;
        }
        if let Some(p) = tree.bound_vertex(id) {
            if i64::from(v) > bounds.at(p) {
                return false;
            }
        }
    }
    chains_ok(tree, values)
}

fn chains_ok(tree: &ChamberTree, values: &[u32]) -> bool {
    tree.chains.iter().all(|chain| {
        let mut min_before = u32::MAX;
        chain.iter().all(|&k| {
            let v = values[k];
            let ok = v > min_before || v % 2 == 0;
            min_before = min_before.min(v);
            ok
        })
    })
}

/// All valued diagrams on `tree` whose small chambers respect `bounds`,
/// in depth-first order.
pub fn enumerate_valued(tree: &ChamberTree, bounds: &LProfile) -> Vec<ValuedAssignment> {
    let n = tree.len();
    // the tightest small bound below each node
    let mut cap = vec![i64::MAX; n];
    for id in (1..n).rev() {
        if let Some(p) = tree.bound_vertex(id) {
            cap[id] = cap[id].min(bounds.at(p));
        }
        let parent = tree.nodes[id].parent.unwrap();
        cap[parent] = cap[parent].min(cap[id]);
    }
    if cap.iter().skip(1).any(|&c| c < 0) {
        return Vec::new();
    }
    let mut chain_of = vec![None; n];
    for (ci, chain) in tree.chains.iter().enumerate() {
        for (pos, &k) in chain.iter().enumerate() {
            chain_of[k] = Some((ci, pos));
        }
    }
    let mut out = Vec::new();
    let mut values = vec![0u32; n];
    fn rec(
        tree: &ChamberTree,
        cap: &[i64],
        chain_of: &[Option<(usize, usize)>],
        id: usize,
        values: &mut Vec<u32>,
        out: &mut Vec<ValuedAssignment>,
    ) {
        if id == tree.len() {
            let weight_sum = values.iter().map(|&v| u64::from(v)).sum();
            out.push(ValuedAssignment {
                value: values.clone(),
                weight_sum,
            });
            return;
        }
        let node = &tree.nodes[id];
        let lo = values[node.parent.unwrap()];
        let hi = cap[id] as u32;
        let mut v = lo;
        while v <= hi {
            let mut ok = !(node.must_be_even && v % 2 == 1);
            if ok && v % 2 == 1 {
                if let Some((ci, pos)) = chain_of[id] {
                    let min_before = tree.chains[ci][..pos].iter().map(|&k| values[k]).min();
                    ok = min_before.is_some_and(|m| v > m);
                }
            }
            if ok {
                values[id] = v;
                rec(tree, cap, chain_of, id + 1, values, out);
            }
            v += 1;
        }
        values[id] = 0;
    }
    rec(tree, &cap, &chain_of, 1, &mut values, &mut out);
    out
}

/// `p_λμ(q) = q^{l(λ,μ)} Σ_{c ∈ D(λ,μ)} q^{-2|c|}`, zero unless `μ <= λ`.
pub fn p_poly(lambda: &WeightDiagram, mu: &WeightDiagram) -> Result<QPoly, QPolyError> {
    if lambda.family() != mu.family() || lambda.delta() != mu.delta() {
        return Ok(QPoly::zero());
    }
    let profile = match l_profile(lambda, mu) {
        Ok(p) if p.is_nonnegative() => p,
        _ => return Ok(QPoly::zero()),
    };
    let tree = chamber_tree(&build_arc_diagram(mu));
    let mut sum = QPoly::zero();
    for c in enumerate_valued(&tree, &profile) {
        let exp = profile.total - 2 * c.weight_sum as i64;
        sum = sum.checked_add(&QPoly::q_pow(exp))?;
    }
    Ok(sum)
}

/// `p_λμ(q)` by recursion on small arcs of `c_λ`.
pub fn p_poly_recursive(lambda: &WeightDiagram, mu: &WeightDiagram) -> Result<QPoly, QPolyError> {
    p_poly_recursive_with(lambda, mu, recursion_choice(lambda), &Memo::new())
}

/// [`p_poly_recursive`] with an explicit `◇` choice and a shared memo.
pub fn p_poly_recursive_with(
    lambda: &WeightDiagram,
    mu: &WeightDiagram,
    choice: Label,
    memo: &Memo,
) -> Result<QPoly, QPolyError> {
    if lambda.family() != mu.family() || !matches!(same_block(lambda, mu), Ok(true)) {
        return Ok(QPoly::zero());
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = memo.get_p(&key) {
        return Ok(v);
    }
    let value = match memo.case(lambda, choice) {
        None => {
            if lambda == mu {
                QPoly::one()
            } else {
                QPoly::zero()
            }
        }
        Some(case) => match &case.lambda_minus {
            None => p_poly_recursive_with(
                &case.lambda_prime,
                &case.translate(mu, choice),
                choice,
                memo,
            )?,
            Some(minus) => {
                let lower = p_poly_recursive_with(minus, mu, choice, memo)?.shift(1)?;
                if case.wall_sign(mu) == Some(true) {
                    let mu_prime = case.translate(mu, choice);
                    p_poly_recursive_with(&case.lambda_prime, &mu_prime, choice, memo)?
                        .checked_add(&lower)?
                } else {
                    lower
                }
            }
        },
    };
    memo.put_p(key, value.clone());
    Ok(value)
}

/// Checks `p_{λ⁺μ⁺} = p_{λ'μ'} + q p_{λ⁻μ⁺}` when `μ` is of the form `μ⁺`,
/// and `p_{λ⁺μ} = q p_{λ⁻μ}` otherwise, every term computed directly.
/// Trivially true when `case` is not a wall case.
pub fn check_cross_identities(
    case: &ReductionCase,
    lambda_plus: &WeightDiagram,
    mu: &WeightDiagram,
    choice: Label,
) -> Result<bool, QPolyError> {
    let Some(minus) = &case.lambda_minus else {
        return Ok(true);
    };
    let lhs = p_poly(lambda_plus, mu)?;
    let lower = p_poly(minus, mu)?.shift(1)?;
    let rhs = if case.wall_sign(mu) == Some(true) {
        p_poly(&case.lambda_prime, &case.translate(mu, choice))?.checked_add(&lower)?
    } else {
        lower
    };
    Ok(lhs == rhs)
}

/// A word over `{α, β}` (written `a`, `b`), first letter at the rightmost
/// vertex. In the Brauer family the final letter is redundant and is shown
/// bracketed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoeWord {
    pub letters: String,
    pub last_redundant: bool,
}

impl std::fmt::Display for BoeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.letters.char_indices().last() {
            Some((k, c)) if self.last_redundant => write!(f, "{}[{c}]", &self.letters[..k]),
            _ => f.write_str(&self.letters),
        }
    }
}

/// Reads `w`'s non-trivial vertices from the cut-off `m` down, `∨ → α`,
/// `∧ → β`. Without an explicit cut-off, `m` is the rightmost vertex on an
/// arc of `c_w`, and a weight without arcs has the empty word. Brauer words
/// start at the left end of the grid; walled words start at the leftmost
/// vertex on an arc (or at `m` itself when the cut-off is explicit and there
/// are no arcs).
pub fn boe_word(w: &WeightDiagram, cutoff: Option<Pos>) -> BoeWord {
    let c = build_arc_diagram(w);
    let last_redundant = w.family() == Family::Brauer;
    let Some(m) = cutoff.or_else(|| c.rightmost_arc_vertex()) else {
        return BoeWord {
            letters: String::new(),
            last_redundant,
        };
    };
    let lo = match w.grid_start() {
        Some(s) => s,
        None => c.arcs().iter().map(|a| a.left()).min().unwrap_or(m),
    };
    let letters = w
        .positions_in(lo, m)
        .filter(|&p| w.label(p).is_nontrivial())
        .map(|p| if w.label(p) == Label::Down { 'a' } else { 'b' })
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    BoeWord {
        letters,
        last_redundant,
    }
}

/// One homological degree of the resolution of `Δ(λ)`: the projective covers
/// `P(μ)` with their multiplicities, minimal `μ` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionLayer {
    pub degree: u32,
    pub terms: Vec<(WeightDiagram, i64)>,
}

/// `p^{(i)}_{λμ}` for every `μ <= λ` and every degree `i` up to the largest
/// degree of any `p_λμ`. Layer `i` is also `dim Ext^i(Δ(λ), L(μ))` by `μ`.
pub fn resolution_multiplicities(
    lambda: &WeightDiagram,
) -> Result<Vec<ResolutionLayer>, QPolyError> {
    let polys: Vec<(WeightDiagram, QPoly)> = crate::weights::down_set(lambda)
        .into_iter()
        .map(|mu| p_poly(lambda, &mu).map(|p| (mu, p)))
        .collect::<Result<_, _>>()?;
    let top = polys
        .iter()
        .filter_map(|(_, p)| p.max_exponent())
        .max()
        .unwrap_or(0);
    Ok((0..=top)
        .map(|i| ResolutionLayer {
            degree: i as u32,
            terms: polys
                .iter()
                .filter(|(_, p)| p.coeff(i) != 0)
                .map(|(mu, p)| (mu.clone(), p.coeff(i)))
                .collect(),
        })
        .collect())
}
