//! Block enumeration and verification sweeps over all shapes up to a size bound.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blockmatrix::{d_matrix, p_matrix, verify_inverse_of, BlockError, PolyMatrix};
use crate::decomp::{check_wall_identities, d_poly_recursive_with, recursion_choice, Memo};
use crate::klpoly::{check_cross_identities, p_poly_recursive_with};
use crate::weights::{
    build_weight, down_set, index_order, same_block, Family, Label, Shape, WeightDiagram,
    WeightError,
};

/// A block, indexed by the union of the down-sets of the weights that
/// generated it, minimal weight first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub family: Family,
    pub delta: i64,
    /// Shapes of the generating weights, in enumeration order.
    pub shapes: Vec<Shape>,
    pub index: Vec<WeightDiagram>,
}

/// Groups all shapes of size at most `max_size` by block.
pub fn blocks(
    family: Family,
    delta: i64,
    max_size: u32,
    diamond: Label,
) -> Result<Vec<Block>, WeightError> {
    let mut groups: Vec<(Vec<Shape>, Vec<WeightDiagram>)> = Vec::new();
    for shape in Shape::all_up_to(family, max_size) {
        let w = build_weight(&shape, delta, diamond, false)?;
        match groups
            .iter_mut()
            .find(|(_, ws)| matches!(same_block(&ws[0], &w), Ok(true)))
        {
            Some((shapes, ws)) => {
                shapes.push(shape);
                ws.push(w);
            }
            None => groups.push((vec![shape], vec![w])),
        }
    }
    Ok(groups
        .into_par_iter()
        .map(|(shapes, ws)| {
            let mut seen = HashSet::new();
            let mut index: Vec<WeightDiagram> = ws
                .iter()
                .flat_map(down_set)
                .filter(|x| seen.insert(x.clone()))
                .collect();
            index.sort_by(index_order);
            Block {
                family,
                delta,
                shapes,
                index,
            }
        })
        .collect())
}

/// `count` random down-closed subsets of a down-closed `index`, as position
/// lists into `index` in increasing order. Deterministic in `seed`.
pub fn random_ideals(index: &[WeightDiagram], count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(index.len()));
            let members: HashSet<WeightDiagram> = (0..k)
                .flat_map(|_| down_set(&index[rng.gen_range(0..index.len())]))
                .collect();
            (0..index.len())
                .filter(|&i| members.contains(&index[i]))
                .collect()
        })
        .collect()
}

/// One failed check, with the offending pair when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: &'static str,
    pub lambda: String,
    pub mu: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub family: Family,
    pub delta: i64,
    pub size: usize,
    pub ideals_checked: usize,
    pub pairs_checked: usize,
    pub wall_checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl BlockReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The block's `d` and `p` matrices over its full index.
pub fn block_matrices(block: &Block) -> Result<(PolyMatrix, PolyMatrix), BlockError> {
    Ok((d_matrix(&block.index)?, p_matrix(&block.index)?))
}

/// Inverse identity on the full index and `samples` random sub-ideals,
/// recursive against direct `d` and `p` on every pair, and the wall
/// identities at every wall configuration.
pub fn verify_block(block: &Block, samples: usize, seed: u64) -> Result<BlockReport, BlockError> {
    let (d, p) = block_matrices(block)?;
    let mut mismatches = Vec::new();
    let n = block.index.len();

    let mut ideals = vec![(0..n).collect::<Vec<_>>()];
    ideals.extend(random_ideals(&block.index, samples, seed));
    for keep in &ideals {
        let report = verify_inverse_of(&p.restrict(keep), &d.restrict(keep))?;
        if !report.ok {
            mismatches.push(Mismatch {
                check: "inverse",
                lambda: block.index[keep[keep.len() - 1]].to_string(),
                mu: String::new(),
                detail: format!("sub-ideal of size {}", keep.len()),
            });
        }
    }

    let choice = recursion_choice(&block.index[0]);
    let memo = Memo::new();
    let mut wall_checks = 0;
    for (i, lambda) in block.index.iter().enumerate() {
        let case = crate::decomp::classify_small_arc(lambda, choice).ok();
        for (j, mu) in block.index.iter().enumerate() {
            let dr = d_poly_recursive_with(lambda, mu, choice, &memo);
            if &dr != d.get(i, j) {
                mismatches.push(pair(
                    "d-recursion",
                    lambda,
                    mu,
                    format!("{} vs {}", d.get(i, j), dr),
                ));
            }
            let pr = p_poly_recursive_with(lambda, mu, choice, &memo)?;
            if &pr != p.get(i, j) {
                mismatches.push(pair(
                    "p-recursion",
                    lambda,
                    mu,
                    format!("{} vs {}", p.get(i, j), pr),
                ));
            }
            if let Some(case) = case.as_ref().filter(|c| c.kind.is_wall()) {
                wall_checks += 1;
                if case.wall_sign(mu) == Some(true) && !check_wall_identities(case, lambda, mu)? {
                    mismatches.push(pair("s1/s2", lambda, mu, case.kind.name().to_string()));
                }
                if !check_cross_identities(case, lambda, mu, choice)? {
                    mismatches.push(pair(
                        "cross1/cross2",
                        lambda,
                        mu,
                        case.kind.name().to_string(),
                    ));
                }
            }
        }
    }
    Ok(BlockReport {
        family: block.family,
        delta: block.delta,
        size: n,
        ideals_checked: ideals.len(),
        pairs_checked: n * n,
        wall_checks,
        mismatches,
    })
}

fn pair(
    check: &'static str,
    lambda: &WeightDiagram,
    mu: &WeightDiagram,
    detail: String,
) -> Mismatch {
    Mismatch {
        check,
        lambda: lambda.to_string(),
        mu: mu.to_string(),
        detail,
    }
}

/// Seed for the sub-ideals of the `k`-th block at `delta`.
pub fn block_seed(family: Family, delta: i64, k: usize) -> u64 {
    let f = match family {
        Family::Brauer => 1u64,
        Family::Walled => 2,
    };
    (f << 56) ^ ((delta as u64) << 32) ^ k as u64
}

/// Verifies every block for every `δ`, in parallel; reports come back in
/// `(δ, block)` order.
pub fn verify_sweep(
    family: Family,
    deltas: &[i64],
    max_size: u32,
    samples: usize,
    diamond: Label,
) -> Result<Vec<BlockReport>, BlockError> {
    let tasks: Vec<(Block, u64)> = deltas
        .iter()
        .flat_map(|&delta| {
            blocks(family, delta, max_size, diamond)
                .unwrap_or_default()
                .into_iter()
                .enumerate()
                .map(move |(k, b)| (b, block_seed(family, delta, k)))
        })
        .collect();
    tasks
        .par_iter()
        .map(|(b, seed)| verify_block(b, samples, *seed))
        .collect()
}
