//! Partitions, bipartitions and their labelled weight diagrams.
//!
//! Vertex positions are stored doubled (`2n` for vertex `n`) so the
//! half-integer grid used by the Brauer family at odd `delta` stays integral.
//! Consecutive vertices are therefore two apart.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::klpoly;

/// A vertex position in doubled coordinates.
pub type Pos = i64;

/// Distance between neighbouring vertices in doubled coordinates.
pub const STEP: Pos = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("parts must be positive and weakly decreasing, got {0:?}")]
    NotAPartition(Vec<i64>),
    #[error("cannot parse shape `{0}`")]
    Parse(String),
    #[error("delta = 0 is not supported (pass allow_delta_zero to override)")]
    DeltaZero,
    #[error("weights belong to different families or parameters")]
    Mismatch,
    #[error("weights are not in the same block")]
    DifferentBlocks,
    #[error("shape family does not match the requested construction")]
    WrongFamily,
    #[error("diagram is not the weight of a (bi)partition for delta = {0}")]
    NotShapeForm(i64),
    #[error("malformed weight diagram: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Brauer,
    Walled,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Brauer => write!(f, "brauer"),
            Family::Walled => write!(f, "walled"),
        }
    }
}

impl FromStr for Family {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brauer" => Ok(Family::Brauer),
            "walled" => Ok(Family::Walled),
            _ => Err(WeightError::Parse(s.to_string())),
        }
    }
}

/// A vertex label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `∘`
    Circle,
    /// `×`
    Cross,
    /// `∨`
    Down,
    /// `∧`
    Up,
    /// `◇`, only ever at vertex 0 of a Brauer diagram.
    Diamond,
}

impl Label {
    pub fn is_nontrivial(self) -> bool {
        matches!(self, Label::Down | Label::Up | Label::Diamond)
    }

    /// Swap `∨` and `∧`; other labels are fixed.
    pub fn flipped(self) -> Label {
        match self {
            Label::Down => Label::Up,
            Label::Up => Label::Down,
            other => other,
        }
    }

    /// ASCII code used in serialized label strings.
    pub fn code(self) -> char {
        match self {
            Label::Circle => 'o',
            Label::Cross => 'x',
            Label::Down => 'v',
            Label::Up => '^',
            Label::Diamond => 'D',
        }
    }

    pub fn from_code(c: char) -> Option<Label> {
        match c {
            'o' => Some(Label::Circle),
            'x' => Some(Label::Cross),
            'v' => Some(Label::Down),
            '^' => Some(Label::Up),
            'D' => Some(Label::Diamond),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Circle => '∘',
            Label::Cross => '×',
            Label::Down => '∨',
            Label::Up => '∧',
            Label::Diamond => '◇',
        }
    }
}

/// Format a doubled position as the vertex it names (`3/2`, `-1`, `0`).
pub fn fmt_pos(p: Pos) -> String {
    if p % 2 == 0 {
        format!("{}", p / 2)
    } else {
        format!("{p}/2")
    }
}

/// An integer partition: positive, weakly decreasing parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, WeightError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition(parts))
        } else {
            Err(WeightError::NotAPartition(
                parts.into_iter().map(i64::from).collect(),
            ))
        }
    }

    /// Builds a partition from possibly zero-padded weakly decreasing parts.
    fn from_padded(parts: Vec<i64>) -> Result<Self, WeightError> {
        if parts.iter().any(|&p| p < 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeightError::NotAPartition(parts));
        }
        Ok(Partition(
            parts
                .into_iter()
                .take_while(|&p| p > 0)
                .map(|p| p as u32)
                .collect(),
        ))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.part(0) as usize;
        Partition(
            (1..=cols as u32)
                .map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = WeightError;

    /// `"4,3,2"`; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| WeightError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

/// A partition (Brauer) or a bipartition (walled Brauer).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Shape {
    Brauer { parts: Partition },
    Walled { left: Partition, right: Partition },
}

impl Shape {
    pub fn brauer(parts: Partition) -> Self {
        Shape::Brauer { parts }
    }

    pub fn walled(left: Partition, right: Partition) -> Self {
        Shape::Walled { left, right }
    }

    pub fn family(&self) -> Family {
        match self {
            Shape::Brauer { .. } => Family::Brauer,
            Shape::Walled { .. } => Family::Walled,
        }
    }

    /// `|λ|` for partitions, `|λ^L| + |λ^R|` for bipartitions.
    pub fn size(&self) -> u32 {
        match self {
            Shape::Brauer { parts } => parts.size(),
            Shape::Walled { left, right } => left.size() + right.size(),
        }
    }

    /// Parse `"a,b,c"` (Brauer) or `"a,b|c,d"` (walled).
    pub fn parse(family: Family, s: &str) -> Result<Shape, WeightError> {
        match family {
            Family::Brauer => {
                if s.contains('|') {
                    return Err(WeightError::Parse(s.to_string()));
                }
                Ok(Shape::brauer(s.parse()?))
            }
            Family::Walled => {
                let (l, r) = match s.split_once('|') {
                    Some(pair) => pair,
                    None if s.trim().is_empty() => ("", ""),
                    None => return Err(WeightError::Parse(s.to_string())),
                };
                Ok(Shape::walled(l.parse()?, r.parse()?))
            }
        }
    }

    /// Transposes every component. Module-theoretic labels of Brauer blocks
    /// are the transposes of the combinatorial weights.
    pub fn transpose(&self) -> Shape {
        match self {
            Shape::Brauer { parts } => Shape::brauer(parts.transpose()),
            Shape::Walled { left, right } => Shape::walled(left.transpose(), right.transpose()),
        }
    }

    /// All shapes of the family with `|λ| <= max_size` (Brauer) or
    /// `|λ^L|, |λ^R| <= max_size` (walled).
    pub fn all_up_to(family: Family, max_size: u32) -> Vec<Shape> {
        let parts: Vec<Partition> = (0..=max_size).flat_map(Partition::all_of_size).collect();
        match family {
            Family::Brauer => parts.into_iter().map(Shape::brauer).collect(),
            Family::Walled => {
                let mut out = Vec::new();
                for l in &parts {
                    for r in &parts {
                        out.push(Shape::walled(l.clone(), r.clone()));
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Brauer { parts } => write!(f, "({parts})"),
            Shape::Walled { left, right } => write!(f, "(({left}),({right}))"),
        }
    }
}

/// The labelled vertex line of a weight, in finite form.
///
/// `labels[k]` is the label of position `window_lo + 2k`. Outside the window
/// the walled family is `∧` to the left and every family is `∨` to the right.
/// Labels are stored resolved: when vertex 0 carries a `◇` the stored label is
/// its `∨`/`∧` resolution and `diamond_resolution` records it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightDiagram {
    family: Family,
    delta: i64,
    window_lo: Pos,
    labels: Vec<Label>,
    diamond_resolution: Option<Label>,
}

impl WeightDiagram {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn window_lo(&self) -> Pos {
        self.window_lo
    }

    pub fn window_hi(&self) -> Pos {
        self.window_lo + STEP * (self.labels.len() as Pos - 1)
    }

    pub fn diamond_resolution(&self) -> Option<Label> {
        self.diamond_resolution
    }

    pub fn has_diamond(&self) -> bool {
        self.diamond_resolution.is_some()
    }

    /// First vertex of the Brauer half-line: `0` for even `delta`, `1/2` for odd.
    pub fn grid_start(&self) -> Option<Pos> {
        match self.family {
            Family::Brauer => Some(self.delta.rem_euclid(2)),
            Family::Walled => None,
        }
    }

    /// Resolved label at `pos`; tails outside the window.
    pub fn label(&self, pos: Pos) -> Label {
        if pos < self.window_lo {
            match self.family {
                Family::Walled => Label::Up,
                Family::Brauer => Label::Circle,
            }
        } else if pos > self.window_hi() {
            Label::Down
        } else {
            debug_assert_eq!((pos - self.window_lo) % STEP, 0, "off-grid position {pos}");
            self.labels[((pos - self.window_lo) / STEP) as usize]
        }
    }

    /// Label at `pos` with `◇` shown unresolved.
    pub fn raw_label(&self, pos: Pos) -> Label {
        if pos == 0 && self.diamond_resolution.is_some() {
            Label::Diamond
        } else {
            self.label(pos)
        }
    }

    /// Positions of the window in increasing order.
    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.labels.len() as Pos).map(move |k| self.window_lo + STEP * k)
    }

    /// `(pos, resolved label)` across the window.
    pub fn labelled(&self) -> impl Iterator<Item = (Pos, Label)> + '_ {
        self.positions().zip(self.labels.iter().copied())
    }

    /// Positions in `[lo, hi]` on this weight's grid.
    pub fn positions_in(&self, lo: Pos, hi: Pos) -> impl Iterator<Item = Pos> {
        let parity = self.window_lo.rem_euclid(2);
        let start = if lo.rem_euclid(2) == parity {
            lo
        } else {
            lo + 1
        };
        (0..)
            .map(move |k| start + STEP * k)
            .take_while(move |&p| p <= hi)
    }

    /// Non-trivial (`∨`/`∧`/`◇`) positions in the window.
    pub fn nontrivial_positions(&self) -> Vec<Pos> {
        self.labelled()
            .filter(|(_, l)| l.is_nontrivial())
            .map(|(p, _)| p)
            .collect()
    }

    /// Leftmost non-trivial vertex (Brauer only; the walled line has an `∧` tail).
    pub fn leftmost_nontrivial(&self) -> Option<Pos> {
        match self.family {
            Family::Brauer => self.nontrivial_positions().first().copied(),
            Family::Walled => None,
        }
    }

    pub fn up_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Up).count()
    }

    /// Resolved label string over `[lo, hi]`.
    pub fn label_string_over(&self, lo: Pos, hi: Pos) -> String {
        self.positions_in(lo, hi)
            .map(|p| self.label(p).code())
            .collect()
    }

    /// Raw label string of the window (`◇` as `D`).
    pub fn raw_label_string(&self) -> String {
        self.positions().map(|p| self.raw_label(p).code()).collect()
    }

    /// Builds a diagram from resolved labels starting at `lo`, trimming the
    /// window to canonical form. `diamond` marks vertex 0 as a `◇`.
    pub(crate) fn from_resolved(
        family: Family,
        delta: i64,
        lo: Pos,
        labels: Vec<Label>,
        diamond: bool,
    ) -> WeightDiagram {
        let mut w = WeightDiagram {
            family,
            delta,
            window_lo: lo,
            labels,
            diamond_resolution: None,
        };
        if diamond {
            let r = w.label(0);
            debug_assert!(matches!(r, Label::Up | Label::Down));
            w.diamond_resolution = Some(r);
        }
        w.normalize();
        w
    }

    /// Builds a diagram from raw labels, resolving a `◇` at vertex 0 by the
    /// block rule for `choice` (see [`resolve_diamond`]).
    pub(crate) fn from_raw(
        family: Family,
        delta: i64,
        lo: Pos,
        mut labels: Vec<Label>,
        choice: Label,
    ) -> WeightDiagram {
        let mut diamond = false;
        if let Some(k) = labels.iter().position(|l| *l == Label::Diamond) {
            let ups = labels.iter().filter(|l| **l == Label::Up).count();
            labels[k] = resolve_diamond(ups, choice);
            diamond = true;
        }
        WeightDiagram::from_resolved(family, delta, lo, labels, diamond)
    }

    /// Copy with some raw labels replaced. A `◇` (new or existing) is resolved
    /// by the block rule, using this weight's block choice if it already had one
    /// and `default_choice` otherwise.
    pub fn relabel(&self, changes: &[(Pos, Label)], default_choice: Label) -> WeightDiagram {
        let choice = self.block_diamond_choice().unwrap_or(default_choice);
        let lo = changes
            .iter()
            .map(|c| c.0)
            .chain([self.window_lo])
            .min()
            .unwrap()
            - STEP;
        let hi = changes
            .iter()
            .map(|c| c.0)
            .chain([self.window_hi()])
            .max()
            .unwrap()
            + STEP;
        let lo = match self.grid_start() {
            Some(s) => lo.max(s),
            None => lo,
        };
        let mut raw: Vec<Label> = self
            .positions_in(lo, hi)
            .map(|p| self.raw_label(p))
            .collect();
        for &(p, l) in changes {
            raw[((p - lo) / STEP) as usize] = l;
        }
        WeightDiagram::from_raw(self.family, self.delta, lo, raw, choice)
    }

    /// Copy with resolved labels replaced, keeping any `◇` marker.
    pub(crate) fn with_resolved(&self, changes: &[(Pos, Label)]) -> WeightDiagram {
        let lo = changes
            .iter()
            .map(|c| c.0)
            .chain([self.window_lo])
            .min()
            .unwrap()
            - STEP;
        let hi = changes
            .iter()
            .map(|c| c.0)
            .chain([self.window_hi()])
            .max()
            .unwrap()
            + STEP;
        let lo = match self.grid_start() {
            Some(s) => lo.max(s),
            None => lo,
        };
        let mut labels: Vec<Label> = self.positions_in(lo, hi).map(|p| self.label(p)).collect();
        for &(p, l) in changes {
            labels[((p - lo) / STEP) as usize] = l;
        }
        WeightDiagram::from_resolved(self.family, self.delta, lo, labels, self.has_diamond())
    }

    /// The choice `c` such that this weight's block resolves `◇` to `c` at its
    /// minimal element; `None` without a `◇`.
    pub fn block_diamond_choice(&self) -> Option<Label> {
        self.diamond_resolution.map(|r| {
            let others = self.up_count() - usize::from(r == Label::Up);
            if others % 2 == 0 {
                r
            } else {
                r.flipped()
            }
        })
    }

    fn normalize(&mut self) {
        let hi = self.window_hi();
        let lo = self.window_lo;
        let raw: Vec<(Pos, Label)> = self.positions().map(|p| (p, self.raw_label(p))).collect();
        let (new_lo, new_hi) = match self.family {
            Family::Walled => {
                let first_not_up = raw.iter().find(|(_, l)| *l != Label::Up).map(|x| x.0);
                let last_not_down = raw
                    .iter()
                    .rev()
                    .find(|(_, l)| *l != Label::Down)
                    .map(|x| x.0);
                match (first_not_up, last_not_down) {
                    (Some(a), Some(b)) => (a.min(b) - STEP, a.max(b) + STEP),
                    (Some(a), None) => (a - STEP, a + STEP),
                    (None, Some(b)) => (b - STEP, b + STEP),
                    (None, None) => (lo, lo),
                }
            }
            Family::Brauer => {
                let start = self.delta.rem_euclid(2);
                let last_not_down = raw
                    .iter()
                    .rev()
                    .find(|(_, l)| *l != Label::Down)
                    .map(|x| x.0);
                (start, last_not_down.map_or(start, |b| b + STEP))
            }
        };
        let labels: Vec<Label> = (0..=((new_hi - new_lo) / STEP))
            .map(|k| {
                let p = new_lo + STEP * k;
                if p < lo || p > hi {
                    self.label(p)
                } else {
                    self.labels[((p - lo) / STEP) as usize]
                }
            })
            .collect();
        self.window_lo = new_lo;
        self.labels = labels;
    }

    /// Doubled entries of `x` for the Brauer family, as a decreasing list
    /// truncated once the `∨` tail is reached.
    fn brauer_entries(&self) -> Vec<Pos> {
        let mut entries: Vec<Pos> = Vec::new();
        for (p, _) in self.labelled() {
            match self.raw_label(p) {
                Label::Up => entries.push(p),
                Label::Down => entries.push(-p),
                Label::Cross => {
                    entries.push(p);
                    entries.push(-p);
                }
                Label::Diamond => entries.push(0),
                Label::Circle => {}
            }
        }
        entries.sort_unstable_by(|a, b| b.cmp(a));
        entries
    }

    /// Entry sequence of the weight, doubled.
    ///
    /// Walled: `(x_{-1}, ..., x_{-n})` (increasing values) and
    /// `(x_1, ..., x_m)` (decreasing values), each extended `extra` steps into
    /// its tail. Brauer: `(x_1, x_2, ...)` with `extra` tail entries.
    pub fn entries(&self, extra: usize) -> WeightEntries {
        match self.family {
            Family::Brauer => {
                let mut xs = self.brauer_entries();
                let mut next = -(self.window_hi() + STEP);
                for _ in 0..extra {
                    xs.push(next);
                    next -= STEP;
                }
                WeightEntries::Brauer(xs)
            }
            Family::Walled => {
                let lo = self.window_lo;
                let hi = self.window_hi() + STEP * extra as Pos;
                let lo_ext = lo - STEP * extra as Pos;
                let negative: Vec<Pos> = self
                    .positions_in(lo, hi)
                    .filter(|&p| matches!(self.label(p), Label::Down | Label::Cross))
                    .collect();
                let mut positive: Vec<Pos> = self
                    .positions_in(lo_ext, self.window_hi())
                    .filter(|&p| matches!(self.label(p), Label::Up | Label::Cross))
                    .collect();
                positive.reverse();
                WeightEntries::Walled { negative, positive }
            }
        }
    }
}

/// `◇` resolution under the block rule: the block's minimal element (all other
/// non-trivial vertices `∨`) resolves to `choice`, fixing the parity of `∧`s.
pub fn resolve_diamond(other_ups: usize, choice: Label) -> Label {
    if other_ups % 2 == 0 {
        choice
    } else {
        choice.flipped()
    }
}

/// Entry sequences in doubled coordinates, see [`WeightDiagram::entries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightEntries {
    Brauer(Vec<Pos>),
    Walled {
        negative: Vec<Pos>,
        positive: Vec<Pos>,
    },
}

impl fmt::Display for WeightEntries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Pos]| xs.iter().map(|&p| fmt_pos(p)).collect::<Vec<_>>().join(",");
        match self {
            WeightEntries::Brauer(xs) => write!(f, "({},...)", join(xs)),
            WeightEntries::Walled { negative, positive } => {
                let mut neg = negative.clone();
                neg.reverse();
                write!(f, "(...,{};{},...)", join(&neg), join(positive))
            }
        }
    }
}

impl fmt::Display for WeightDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: String = self
            .positions()
            .map(|p| self.raw_label(p).symbol())
            .collect();
        match self.family {
            Family::Walled => write!(f, "…∧[{}@{}]∨…", body, fmt_pos(self.window_lo))?,
            Family::Brauer => write!(f, "[{}@{}]∨…", body, fmt_pos(self.window_lo))?,
        }
        if let Some(r) = self.diamond_resolution {
            write!(f, " (◇={})", r.symbol())?;
        }
        Ok(())
    }
}

/// JSON form of a weight diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDiagramJson {
    pub family: Family,
    pub delta: i64,
    pub window_lo: Pos,
    pub window_hi: Pos,
    pub labels: String,
    pub diamond_resolution: Option<String>,
}

impl From<&WeightDiagram> for WeightDiagramJson {
    fn from(w: &WeightDiagram) -> Self {
        WeightDiagramJson {
            family: w.family,
            delta: w.delta,
            window_lo: w.window_lo,
            window_hi: w.window_hi(),
            labels: w.raw_label_string(),
            diamond_resolution: w.diamond_resolution.map(|l| l.code().to_string()),
        }
    }
}

impl TryFrom<WeightDiagramJson> for WeightDiagram {
    type Error = WeightError;

    fn try_from(j: WeightDiagramJson) -> Result<Self, Self::Error> {
        let raw: Vec<Label> = j
            .labels
            .chars()
            .map(|c| {
                Label::from_code(c).ok_or_else(|| WeightError::Malformed(format!("label `{c}`")))
            })
            .collect::<Result<_, _>>()?;
        let span = STEP * (raw.len() as Pos - 1);
        if raw.is_empty() || j.window_hi - j.window_lo != span {
            return Err(WeightError::Malformed(
                "window does not match label count".into(),
            ));
        }
        let resolution = match j.diamond_resolution.as_deref() {
            None => None,
            Some("v") => Some(Label::Down),
            Some("^") => Some(Label::Up),
            Some(other) => {
                return Err(WeightError::Malformed(format!(
                    "diamond resolution `{other}`"
                )))
            }
        };
        let mut labels = raw.clone();
        let diamond_at = raw.iter().position(|l| *l == Label::Diamond);
        match (diamond_at, resolution) {
            (Some(k), Some(r)) if j.window_lo + STEP * k as Pos == 0 => labels[k] = r,
            (None, None) => {}
            _ => return Err(WeightError::Malformed("inconsistent diamond".into())),
        }
        let w = WeightDiagram::from_resolved(
            j.family,
            j.delta,
            j.window_lo,
            labels,
            diamond_at.is_some(),
        );
        w.validate()?;
        Ok(w)
    }
}

impl Serialize for WeightDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightDiagramJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WeightDiagramJson::deserialize(d)?;
        WeightDiagram::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl WeightDiagram {
    /// Checks grid alignment, the Brauer vertex-0 rule and that the labels
    /// come from a strictly decreasing entry sequence.
    pub fn validate(&self) -> Result<(), WeightError> {
        match self.family {
            Family::Brauer => {
                let start = self.delta.rem_euclid(2);
                if self.window_lo != start {
                    return Err(WeightError::Malformed(
                        "Brauer window must start at the first vertex".into(),
                    ));
                }
                if start == 0 && !self.has_diamond() && self.label(0).is_nontrivial() {
                    return Err(WeightError::Malformed("vertex 0 must be ∘ or ◇".into()));
                }
            }
            Family::Walled => {
                if self.window_lo.rem_euclid(2) != 0 {
                    return Err(WeightError::Malformed(
                        "walled vertices are integers".into(),
                    ));
                }
                if self.has_diamond() {
                    return Err(WeightError::Malformed(
                        "◇ only occurs in the Brauer family".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Weight diagram of a bipartition: `x = λ̄ + ρ_δ`.
pub fn build_weight_walled(shape: &Shape, delta: i64) -> Result<WeightDiagram, WeightError> {
    let Shape::Walled { left, right } = shape else {
        return Err(WeightError::WrongFamily);
    };
    if delta == 0 {
        return Err(WeightError::DeltaZero);
    }
    Ok(walled_weight_unchecked(left, right, delta))
}

fn walled_weight_unchecked(left: &Partition, right: &Partition, delta: i64) -> WeightDiagram {
    // x_{-i} = i - λ^L_i, x_i = δ - i + 1 + λ^R_i (undoubled)
    let nl = left.len() as i64;
    let nr = right.len() as i64;
    let down: BTreeSet<i64> = (1..=nl)
        .map(|i| i - left.part(i as usize - 1) as i64)
        .collect();
    let up: BTreeSet<i64> = (1..=nr)
        .map(|i| delta - i + 1 + right.part(i as usize - 1) as i64)
        .collect();
    // beyond these, I_∨ ⊇ {n > nl} and I_∧ ⊇ {n <= δ - nr}
    let in_down = |n: i64| n > nl || down.contains(&n);
    let in_up = |n: i64| n <= delta - nr || up.contains(&n);
    let lo = down
        .iter()
        .chain(up.iter())
        .copied()
        .chain([delta - nr, nl])
        .min()
        .unwrap()
        - 2;
    let hi = down
        .iter()
        .chain(up.iter())
        .copied()
        .chain([delta - nr, nl])
        .max()
        .unwrap()
        + 2;
    let labels: Vec<Label> = (lo..=hi)
        .map(|n| match (in_down(n), in_up(n)) {
            (false, false) => Label::Circle,
            (true, true) => Label::Cross,
            (true, false) => Label::Down,
            (false, true) => Label::Up,
        })
        .collect();
    WeightDiagram::from_resolved(Family::Walled, delta, 2 * lo, labels, false)
}

/// Weight diagram of a partition: `x = λ + ρ_δ` with `ρ_δ = (-δ/2, -δ/2 - 1, ...)`.
///
/// Vertex `n` is `∧` if `n` is an entry, `∨` if `-n` is, `×` if both, `◇` at
/// `n = 0` when `0` is an entry. A `◇` is resolved by the block rule for
/// `diamond_choice`; it is an error to omit the choice when a `◇` occurs.
pub fn build_weight_brauer(
    shape: &Shape,
    delta: i64,
    diamond_choice: Option<Label>,
) -> Result<WeightDiagram, WeightError> {
    let Shape::Brauer { parts } = shape else {
        return Err(WeightError::WrongFamily);
    };
    if delta == 0 {
        return Err(WeightError::DeltaZero);
    }
    brauer_weight_unchecked(parts, delta, diamond_choice)
}

fn brauer_weight_unchecked(
    parts: &Partition,
    delta: i64,
    diamond_choice: Option<Label>,
) -> Result<WeightDiagram, WeightError> {
    // doubled entries X_i = 2λ_i - δ - 2(i-1)
    let n = parts.len() as i64;
    let entry = |i: i64| 2 * parts.part((i - 1) as usize) as i64 - delta - 2 * (i - 1);
    let mut hi = (1..=n + 1)
        .map(|i| entry(i).abs())
        .max()
        .unwrap()
        .max(delta.abs())
        + 2;
    hi += (hi % 2) ^ delta.rem_euclid(2);
    let mut xs = Vec::new();
    let mut i = 1;
    loop {
        let x = entry(i);
        if x < -hi - 2 {
            break;
        }
        xs.push(x);
        i += 1;
    }
    let start = delta.rem_euclid(2);
    let labels: Vec<Label> = (0..)
        .map(|k| start + STEP * k)
        .take_while(|&p| p <= hi)
        .map(|p| {
            let pos = xs.contains(&p);
            let neg = xs.contains(&-p);
            if p == 0 {
                if pos {
                    Label::Diamond
                } else {
                    Label::Circle
                }
            } else {
                match (pos, neg) {
                    (false, false) => Label::Circle,
                    (true, true) => Label::Cross,
                    (false, true) => Label::Down,
                    (true, false) => Label::Up,
                }
            }
        })
        .collect();
    let has_diamond = labels.contains(&Label::Diamond);
    let choice = match (has_diamond, diamond_choice) {
        (true, None) => {
            return Err(WeightError::Malformed(
                "a ◇ occurs: diamond choice required".into(),
            ))
        }
        (_, c) => c.unwrap_or(Label::Down),
    };
    Ok(WeightDiagram::from_raw(
        Family::Brauer,
        delta,
        start,
        labels,
        choice,
    ))
}

/// Builds the weight of any shape; `allow_delta_zero` relaxes the `δ ≠ 0`
/// precondition (the combinatorics still runs, its meaning is not covered).
pub fn build_weight(
    shape: &Shape,
    delta: i64,
    diamond_choice: Label,
    allow_delta_zero: bool,
) -> Result<WeightDiagram, WeightError> {
    if delta == 0 && !allow_delta_zero {
        return Err(WeightError::DeltaZero);
    }
    match shape {
        Shape::Walled { left, right } => Ok(walled_weight_unchecked(left, right, delta)),
        Shape::Brauer { parts } => brauer_weight_unchecked(parts, delta, Some(diamond_choice)),
    }
}

/// Inverts the weight construction.
pub fn weight_to_shape(w: &WeightDiagram) -> Result<Shape, WeightError> {
    let delta = w.delta;
    let fail = || WeightError::NotShapeForm(delta);
    match w.family {
        Family::Brauer => {
            let extra = (w.window_hi() / 2 + delta.unsigned_abs() as i64 + 4) as usize;
            let WeightEntries::Brauer(xs) = w.entries(extra) else {
                unreachable!()
            };
            // λ_i = (X_i + δ + 2(i-1)) / 2
            let parts: Vec<i64> = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let v = x + delta + 2 * i as i64;
                    if v % 2 != 0 {
                        Err(fail())
                    } else {
                        Ok(v / 2)
                    }
                })
                .collect::<Result<_, _>>()?;
            if parts.last().copied() != Some(0) {
                return Err(fail());
            }
            Ok(Shape::brauer(
                Partition::from_padded(parts).map_err(|_| fail())?,
            ))
        }
        Family::Walled => {
            let span = ((w.window_hi() - w.window_lo) / 2 + delta.abs() + 4) as usize;
            let WeightEntries::Walled { negative, positive } = w.entries(span) else {
                unreachable!()
            };
            // λ^L_i = i - x_{-i}, λ^R_i = x_i - δ + i - 1
            let left: Vec<i64> = negative
                .iter()
                .enumerate()
                .map(|(k, &x)| (k as i64 + 1) - x / 2)
                .collect();
            let right: Vec<i64> = positive
                .iter()
                .enumerate()
                .map(|(k, &x)| x / 2 - delta + k as i64)
                .collect();
            if left.last().copied() != Some(0) || right.last().copied() != Some(0) {
                return Err(fail());
            }
            Ok(Shape::walled(
                Partition::from_padded(left).map_err(|_| fail())?,
                Partition::from_padded(right).map_err(|_| fail())?,
            ))
        }
    }
}

fn check_comparable(a: &WeightDiagram, b: &WeightDiagram) -> Result<(), WeightError> {
    if a.family != b.family || a.delta != b.delta {
        Err(WeightError::Mismatch)
    } else {
        Ok(())
    }
}

/// Common window of two weights of the same family.
pub fn union_window(a: &WeightDiagram, b: &WeightDiagram) -> (Pos, Pos) {
    (
        a.window_lo.min(b.window_lo),
        a.window_hi().max(b.window_hi()),
    )
}

/// Block membership by its closed form.
///
/// Walled: equal `∘`/`×` sets and equal `∧` counts on a common window.
/// Brauer: equal `∘`/`×`/`◇` sets and equal parity of the `∧` count.
pub fn same_block(a: &WeightDiagram, b: &WeightDiagram) -> Result<bool, WeightError> {
    check_comparable(a, b)?;
    let (lo, hi) = union_window(a, b);
    let mut ups = [0usize; 2];
    for p in a.positions_in(lo, hi) {
        let (la, lb) = (a.raw_label(p), b.raw_label(p));
        if la.is_nontrivial() != lb.is_nontrivial()
            || (la == Label::Diamond) != (lb == Label::Diamond)
        {
            return Ok(false);
        }
        if !la.is_nontrivial() && la != lb {
            return Ok(false);
        }
        ups[0] += usize::from(a.label(p) == Label::Up);
        ups[1] += usize::from(b.label(p) == Label::Up);
    }
    Ok(match a.family {
        Family::Walled => ups[0] == ups[1],
        Family::Brauer => ups[0] % 2 == ups[1] % 2,
    })
}

/// `a <= b` in the block order.
pub fn weight_leq(a: &WeightDiagram, b: &WeightDiagram) -> Result<bool, WeightError> {
    if !same_block(a, b)? {
        return Err(WeightError::DifferentBlocks);
    }
    let profile = klpoly::l_profile(b, a)?;
    Ok(profile.per_vertex.values().all(|&l| l >= 0))
}

/// Weights covered from below by a single order move: an `∧` swapped with a
/// `∨` to its left, or (Brauer) two `∧`s turned into `∨`s.
pub fn lowering_moves(w: &WeightDiagram) -> Vec<WeightDiagram> {
    let nt: Vec<(Pos, Label)> = w.labelled().filter(|(_, l)| l.is_nontrivial()).collect();
    let mut out = Vec::new();
    for (i, &(p, lp)) in nt.iter().enumerate() {
        for &(r, lr) in &nt[i + 1..] {
            if lp == Label::Down && lr == Label::Up {
                out.push(w.with_resolved(&[(p, Label::Up), (r, Label::Down)]));
            }
            if w.family == Family::Brauer && lp == Label::Up && lr == Label::Up {
                out.push(w.with_resolved(&[(p, Label::Down), (r, Label::Down)]));
            }
        }
    }
    out
}

/// All weights `<= w` in its block, minimal first.
///
/// Generated by closing `w` under [`lowering_moves`]; sorted by `∧` count,
/// then by resolved label string over `w`'s window, which refines the order.
pub fn down_set(w: &WeightDiagram) -> Vec<WeightDiagram> {
    let mut seen: HashSet<WeightDiagram> = HashSet::new();
    let mut queue = VecDeque::from([w.clone()]);
    seen.insert(w.clone());
    while let Some(x) = queue.pop_front() {
        for y in lowering_moves(&x) {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let (lo, hi) = (w.window_lo(), w.window_hi());
    let mut out: Vec<WeightDiagram> = seen.into_iter().collect();
    out.sort_by_cached_key(|x| (x.up_count(), x.label_string_over(lo, hi)));
    out
}

/// Total order used for block indices: `∧` count, then label string over a
/// common window. Refines the block order.
pub fn index_order(a: &WeightDiagram, b: &WeightDiagram) -> Ordering {
    let (lo, hi) = union_window(a, b);
    (a.up_count(), a.label_string_over(lo, hi)).cmp(&(b.up_count(), b.label_string_over(lo, hi)))
}
