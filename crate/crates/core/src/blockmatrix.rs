//! Block matrices of `d_λμ(q)` and `p_λμ(q)` and the inverse identity
//! `(p_λμ(-q)) · (d_λμ(q)) = I`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decomp::d_poly;
use crate::klpoly::p_poly;
use crate::qpoly::{QPoly, QPolyError};
use crate::weights::{lowering_moves, same_block, WeightDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("index is empty")]
    Empty,
    #[error("index mixes weights from different blocks")]
    MixedBlocks,
    #[error("index is not down-closed: {0} has a smaller weight outside it")]
    NotDownClosed(String),
    #[error("index contains a repeated weight")]
    Duplicate,
    #[error(transparent)]
    Poly(#[from] QPolyError),
}

/// A square matrix of polynomials with rows and columns indexed by weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub index: Vec<WeightDiagram>,
    pub entries: Vec<Vec<QPoly>>,
}

impl PolyMatrix {
    pub fn size(&self) -> usize {
        self.index.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &QPoly {
        &self.entries[row][col]
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
        })
    }

    /// Unit diagonal and zero above it.
    pub fn is_unit_lower_triangular(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row[i].is_one() && row[i + 1..].iter().all(QPoly::is_zero))
    }

    pub fn map(&self, f: impl Fn(&QPoly) -> QPoly) -> PolyMatrix {
        PolyMatrix {
            index: self.index.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    /// `self · other`, rows computed in parallel.
    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, QPolyError> {
        let n = self.size();
        let entries = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = QPoly::zero();
                        for k in 0..n {
                            let (a, b) = (&self.entries[i][k], &other.entries[k][j]);
                            if !a.is_zero() && !b.is_zero() {
                                acc = acc.checked_add(&a.checked_mul(b)?)?;
                            }
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>, QPolyError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix {
            index: self.index.clone(),
            entries,
        })
    }

    /// The principal submatrix on the given rows/columns, in that order.
    pub fn restrict(&self, keep: &[usize]) -> PolyMatrix {
        PolyMatrix {
            index: keep.iter().map(|&i| self.index[i].clone()).collect(),
            entries: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Result<PolyMatrix, QPolyError> {
        let mut out = self.clone();
        for (i, row) in out.entries.iter_mut().enumerate() {
            row[i] = row[i].checked_sub(&QPoly::one())?;
        }
        Ok(out)
    }

    /// CSV with a header row of column labels and one row per weight.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let quote = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::new();
        let header: Vec<String> = std::iter::once(String::new())
            .chain(labels.iter().map(|l| quote(l)))
            .collect();
        let _ = writeln!(out, "{}", header.join(","));
        for (label, row) in labels.iter().zip(&self.entries) {
            let cells: Vec<String> = std::iter::once(quote(label))
                .chain(row.iter().map(|e| quote(&e.to_string())))
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, labels: &[String]) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            index: &'a [String],
            entries: &'a [Vec<QPoly>],
        }
        serde_json::to_value(Out {
            index: labels,
            entries: &self.entries,
        })
        .expect("serializable")
    }
}

/// Checks that `index` is a duplicate-free, down-closed subset of one block.
pub fn check_down_closed(index: &[WeightDiagram]) -> Result<(), BlockError> {
    let first = index.first().ok_or(BlockError::Empty)?;
    if index
        .iter()
        .any(|w| !matches!(same_block(first, w), Ok(true)))
    {
        return Err(BlockError::MixedBlocks);
    }
    let members: HashSet<&WeightDiagram> = index.iter().collect();
    if members.len() != index.len() {
        return Err(BlockError::Duplicate);
    }
    for w in index {
        if lowering_moves(w).iter().any(|x| !members.contains(x)) {
            return Err(BlockError::NotDownClosed(w.to_string()));
        }
    }
    Ok(())
}

fn assemble(
    index: &[WeightDiagram],
    f: impl Fn(&WeightDiagram, &WeightDiagram) -> Result<QPoly, QPolyError> + Sync,
) -> Result<PolyMatrix, BlockError> {
    check_down_closed(index)?;
    let entries = index
        .par_iter()
        .map(|l| index.iter().map(|m| f(l, m)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix {
        index: index.to_vec(),
        entries,
    })
}

/// `(d_λμ(q))` with rows `λ` and columns `μ`.
pub fn d_matrix(index: &[WeightDiagram]) -> Result<PolyMatrix, BlockError> {
    assemble(index, |l, m| Ok(d_poly(l, m)))
}

/// `(p_λμ(q))` with rows `λ` and columns `μ`.
pub fn p_matrix(index: &[WeightDiagram]) -> Result<PolyMatrix, BlockError> {
    assemble(index, p_poly)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseReport {
    pub ok: bool,
    pub residual: PolyMatrix,
}

/// Checks `(p_λμ(-q)) · (d_λμ(q)) = I` on a down-closed index.
pub fn verify_inverse(index: &[WeightDiagram]) -> Result<InverseReport, BlockError> {
    let d = d_matrix(index)?;
    let p = p_matrix(index)?;
    verify_inverse_of(&p, &d)
}

/// The inverse identity on precomputed matrices over the same index.
pub fn verify_inverse_of(p: &PolyMatrix, d: &PolyMatrix) -> Result<InverseReport, BlockError> {
    let product = p.map(QPoly::substitute_negated).checked_mul(d)?;
    let residual = product.minus_identity()?;
    let ok = residual.entries.iter().flatten().all(QPoly::is_zero);
    Ok(InverseReport { ok, residual })
}

/// `Σ_μ p_λμ(-1) D_μν = δ_λν`.
pub fn verify_euler(p: &PolyMatrix, d: &PolyMatrix) -> Result<bool, BlockError> {
    let n = p.size();
    for i in 0..n {
        for j in 0..n {
            let mut acc: i64 = 0;
            for k in 0..n {
                let term = p.entries[i][k]
                    .eval(-1)?
                    .checked_mul(d.entries[k][j].eval(1)?)
                    .ok_or(QPolyError::Overflow("euler"))?;
                acc = acc.checked_add(term).ok_or(QPolyError::Overflow("euler"))?;
            }
            if acc != i64::from(i == j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `dim Ext^i(Δ(λ), L(μ))` for `i = 0, 1, ...`: the coefficients of `p_λμ`.
pub fn ext_dimensions(lambda: &WeightDiagram, mu: &WeightDiagram) -> Result<Vec<i64>, QPolyError> {
    Ok(p_poly(lambda, mu)?.coefficient_list())
}
