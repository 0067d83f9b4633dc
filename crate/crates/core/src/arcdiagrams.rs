//! Cap diagrams (walled family) and curl diagrams (Brauer family).
//!
//! A curl `(i, j)` wraps around every vertex to the left of `j`; for nesting
//! purposes it is the interval `(-inf, j)`, while a cap `(u, v)` is `(u, v)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::weights::{same_block, Family, Label, Pos, WeightDiagram, STEP};

/// An arc of a diagram: a cap or a curl, by its two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arc {
    Cap(Pos, Pos),
    Curl(Pos, Pos),
}

impl Arc {
    pub fn left(self) -> Pos {
        match self {
            Arc::Cap(a, _) | Arc::Curl(a, _) => a,
        }
    }

    pub fn right(self) -> Pos {
        match self {
            Arc::Cap(_, b) | Arc::Curl(_, b) => b,
        }
    }

    pub fn is_curl(self) -> bool {
        matches!(self, Arc::Curl(..))
    }

    /// Whether `other` lies inside `self` in the interval model.
    pub fn contains(self, other: Arc) -> bool {
        if self == other {
            return false;
        }
        match self {
            Arc::Cap(u, v) => u < other.left() && other.right() < v && !other.is_curl(),
            Arc::Curl(_, j) => other.right() < j,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDiagram {
    base: WeightDiagram,
    caps: Vec<(Pos, Pos)>,
    curls: Vec<(Pos, Pos)>,
    rays: Vec<Pos>,
    free: Vec<Pos>,
}

impl ArcDiagram {
    pub fn base(&self) -> &WeightDiagram {
        &self.base
    }

    pub fn family(&self) -> Family {
        self.base.family()
    }

    /// Caps, sorted by left endpoint.
    pub fn caps(&self) -> &[(Pos, Pos)] {
        &self.caps
    }

    /// Curls, sorted left to right (innermost first).
    pub fn curls(&self) -> &[(Pos, Pos)] {
        &self.curls
    }

    /// Rays inside the base window; every vertex beyond it is a ray too.
    pub fn rays(&self) -> &[Pos] {
        &self.rays
    }

    pub fn free(&self) -> &[Pos] {
        &self.free
    }

    pub fn leftmost_nontrivial(&self) -> Option<Pos> {
        self.base.leftmost_nontrivial()
    }

    /// All caps and curls, ordered by right endpoint.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self
            .caps
            .iter()
            .map(|&(a, b)| Arc::Cap(a, b))
            .chain(self.curls.iter().map(|&(a, b)| Arc::Curl(a, b)))
            .collect();
        arcs.sort_by_key(|a| a.right());
        arcs
    }

    pub fn arc_count(&self) -> usize {
        self.caps.len() + self.curls.len()
    }

    /// Whether `pos` is a ray of this diagram, including the tails.
    pub fn is_ray(&self, pos: Pos) -> bool {
        pos > self.base.window_hi()
            || (self.family() == Family::Walled && pos < self.base.window_lo())
            || self.rays.binary_search(&pos).is_ok()
    }

    /// Rightmost vertex on any arc.
    pub fn rightmost_arc_vertex(&self) -> Option<Pos> {
        self.arcs().iter().map(|a| a.right()).max()
    }
}

/// `c_λ`: caps by bracket matching `∨` (open) against `∧` (close) over the
/// non-trivial vertices; in the Brauer family the unmatched `∧`s are then
/// joined pairwise from the left by curls.
pub fn build_arc_diagram(w: &WeightDiagram) -> ArcDiagram {
    let mut caps = Vec::new();
    let mut stack: Vec<Pos> = Vec::new();
    let mut unmatched_up: Vec<Pos> = Vec::new();
    let mut free = Vec::new();
    for (p, l) in w.labelled() {
        match l {
            Label::Down => stack.push(p),
            Label::Up => match stack.pop() {
                Some(open) => caps.push((open, p)),
                None => unmatched_up.push(p),
            },
            _ => free.push(p),
        }
    }
    caps.sort_unstable();
    let mut curls = Vec::new();
    let mut rays: Vec<Pos> = stack;
    match w.family() {
        Family::Walled => rays.extend(unmatched_up),
        Family::Brauer => {
            for pair in unmatched_up.chunks(2) {
                match *pair {
                    [a, b] => curls.push((a, b)),
                    [a] => rays.push(a),
                    _ => unreachable!(),
                }
            }
        }
    }
    rays.sort_unstable();
    ArcDiagram {
        base: w.clone(),
        caps,
        curls,
        rays,
        free,
    }
}

/// Whether `c` oriented by the labels of `w` is an oriented diagram.
pub fn is_oriented(c: &ArcDiagram, w: &WeightDiagram) -> bool {
    if !matches!(same_block(c.base(), w), Ok(true)) {
        return false;
    }
    if c.free.iter().any(|&p| w.label(p).is_nontrivial()) {
        return false;
    }
    if c.caps.iter().any(|&(a, b)| w.label(a) == w.label(b)) {
        return false;
    }
    if c.curls.iter().any(|&(a, b)| w.label(a) != w.label(b)) {
        return false;
    }
    let lo = c.base.window_lo().min(w.window_lo());
    let hi = c.base.window_hi().max(w.window_hi());
    let mut seen_down_ray = false;
    let mut seen_up_ray = false;
    for p in w.positions_in(lo, hi) {
        if !c.is_ray(p) {
            continue;
        }
        match w.label(p) {
            Label::Down => seen_down_ray = true,
            Label::Up => {
                if seen_down_ray || (c.family() == Family::Brauer && seen_up_ray) {
                    return false;
                }
                seen_up_ray = true;
            }
            _ => return false,
        }
    }
    true
}

/// Number of clockwise arcs: caps reading `∧∨`, curls reading `∨∨`.
/// `None` if `c` oriented by `w` is not an oriented diagram.
pub fn diagram_degree(c: &ArcDiagram, w: &WeightDiagram) -> Option<u32> {
    if !is_oriented(c, w) {
        return None;
    }
    let caps = c
        .caps
        .iter()
        .filter(|&&(a, _)| w.label(a) == Label::Up)
        .count();
    let curls = c
        .curls
        .iter()
        .filter(|&&(a, _)| w.label(a) == Label::Down)
        .count();
    Some((caps + curls) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strand {
    Cap {
        left: Pos,
        right: Pos,
        height: usize,
    },
    /// A curl strand running from the left margin to `end`.
    Margin { end: Pos, height: usize },
}

/// Layout heights: caps sit one above the tallest arc they contain; a curl's
/// lower strand clears everything left of its first end and its upper strand
/// clears everything between its ends.
fn layout(c: &ArcDiagram) -> (Vec<Strand>, Vec<(usize, usize)>) {
    let mut strands = Vec::new();
    let mut margins = Vec::new();
    let mut heights: Vec<(Arc, usize)> = Vec::new();
    let mut arcs = c.arcs();
    arcs.sort_by_key(|a| (a.right() - a.left(), a.right()));
    // caps in order of width so inner caps are placed first
    for arc in arcs.iter().copied().filter(|a| !a.is_curl()) {
        let inner = heights
            .iter()
            .filter(|(b, _)| arc.contains(*b))
            .map(|x| x.1)
            .max()
            .unwrap_or(0);
        heights.push((arc, inner + 1));
    }
    for arc in c.arcs().into_iter().filter(|a| a.is_curl()) {
        let (i, j) = (arc.left(), arc.right());
        let below_lo = heights
            .iter()
            .filter(|(b, _)| b.right() < i)
            .map(|x| x.1)
            .max()
            .unwrap_or(0);
        let lo = below_lo + 1;
        let between = heights
            .iter()
            .filter(|(b, _)| !b.is_curl() && b.left() > i && b.right() < j)
            .map(|x| x.1)
            .max()
            .unwrap_or(0);
        let up = lo.max(between) + 1;
        strands.push(Strand::Margin { end: i, height: lo });
        strands.push(Strand::Margin { end: j, height: up });
        margins.push((lo, up));
        heights.push((arc, up));
    }
    for (arc, h) in heights {
        if let Arc::Cap(a, b) = arc {
            strands.push(Strand::Cap {
                left: a,
                right: b,
                height: h,
            });
        }
    }
    (strands, margins)
}

fn render_window(c: &ArcDiagram, w: &WeightDiagram) -> (Pos, Pos) {
    let lo = c.base.window_lo().min(w.window_lo());
    let hi = c.base.window_hi().max(w.window_hi());
    (lo, hi)
}

/// Text drawing of `c` oriented by `w`: labels on the baseline, arcs above,
/// curls closing at the left margin, rays as vertical bars.
pub fn render_ascii(c: &ArcDiagram, w: &WeightDiagram) -> String {
    let (lo, hi) = render_window(c, w);
    let col = |p: Pos| (1 + (p - lo)) as usize;
    let width = col(hi) + 1;
    let (strands, margins) = layout(c);
    let top = strands
        .iter()
        .map(|s| match s {
            Strand::Cap { height, .. } | Strand::Margin { height, .. } => *height,
        })
        .max()
        .unwrap_or(0);
    let mut grid = vec![vec![' '; width]; top + 1];
    let vertical = |grid: &mut Vec<Vec<char>>, x: usize, from: usize, to: usize| {
        for row in grid.iter_mut().take(to).skip(from) {
            row[x] = '│';
        }
    };
    for s in &strands {
        match *s {
            Strand::Cap {
                left,
                right,
                height,
            } => {
                let (a, b) = (col(left), col(right));
                grid[height][a] = '╭';
                grid[height][b] = '╮';
                for x in a + 1..b {
                    grid[height][x] = '─';
                }
                vertical(&mut grid, a, 1, height);
                vertical(&mut grid, b, 1, height);
            }
            Strand::Margin { end, height } => {
                let b = col(end);
                for x in 1..b {
                    grid[height][x] = '─';
                }
                grid[height][b] = '╮';
                vertical(&mut grid, b, 1, height);
            }
        }
    }
    for &(lo_h, up_h) in &margins {
        grid[lo_h][0] = '╰';
        grid[up_h][0] = '╭';
        vertical(&mut grid, 0, lo_h + 1, up_h);
    }
    if top > 0 {
        for p in w.positions_in(lo, hi) {
            if c.is_ray(p) {
                vertical(&mut grid, col(p), 1, top + 1);
            }
        }
    }
    for p in w.positions_in(lo, hi) {
        grid[0][col(p)] = w.raw_label(p).symbol();
    }
    let mut out = String::new();
    for row in grid.iter().rev() {
        let line: String = row.iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Standalone TikZ source for `c` oriented by `w`.
pub fn render_tikz(c: &ArcDiagram, w: &WeightDiagram) -> String {
    let (lo, hi) = render_window(c, w);
    let x = |p: Pos| (p - lo) as f64 / STEP as f64;
    let (strands, margins) = layout(c);
    let top = strands
        .iter()
        .map(|s| match s {
            Strand::Cap { height, .. } | Strand::Margin { height, .. } => *height,
        })
        .max()
        .unwrap_or(0);
    let y = |h: usize| 0.5 * h as f64;
    let mut out = String::from("\\begin{tikzpicture}[scale=0.8]\n");
    for p in w.positions_in(lo, hi) {
        let sym = match w.raw_label(p) {
            Label::Circle => "$\\circ$",
            Label::Cross => "$\\times$",
            Label::Down => "$\\vee$",
            Label::Up => "$\\wedge$",
            Label::Diamond => "$\\diamond$",
        };
        let _ = writeln!(out, "  \\node at ({:.1},0) {{{sym}}};", x(p));
    }
    for s in &strands {
        match *s {
            Strand::Cap {
                left,
                right,
                height,
            } => {
                let _ = writeln!(
                    out,
                    "  \\draw[rounded corners] ({:.1},0.2) -- ({:.1},{:.1}) -- ({:.1},{:.1}) -- ({:.1},0.2);",
                    x(left),
                    x(left),
                    y(height),
                    x(right),
                    y(height),
                    x(right)
                );
            }
            Strand::Margin { end, height } => {
                let _ = writeln!(
                    out,
                    "  \\draw[rounded corners] (-0.5,{:.1}) -- ({:.1},{:.1}) -- ({:.1},0.2);",
                    y(height),
                    x(end),
                    y(height),
                    x(end)
                );
            }
        }
    }
    for &(a, b) in &margins {
        let _ = writeln!(
            out,
            "  \\draw[rounded corners] (-0.5,{:.1}) -- (-0.5,{:.1});",
            y(a),
            y(b)
        );
    }
    for p in w.positions_in(lo, hi) {
        if c.is_ray(p) {
            let _ = writeln!(
                out,
                "  \\draw ({:.1},0.2) -- ({:.1},{:.1});",
                x(p),
                x(p),
                y(top + 1)
            );
        }
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// JSON form of an arc diagram, positions doubled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDiagramJson {
    pub caps: Vec<[Pos; 2]>,
    pub curls: Vec<[Pos; 2]>,
    pub rays: Vec<Pos>,
    pub free: Vec<Pos>,
}

impl From<&ArcDiagram> for ArcDiagramJson {
    fn from(c: &ArcDiagram) -> Self {
        ArcDiagramJson {
            caps: c.caps.iter().map(|&(a, b)| [a, b]).collect(),
            curls: c.curls.iter().map(|&(a, b)| [a, b]).collect(),
            rays: c.rays.clone(),
            free: c.free.clone(),
        }
    }
}
