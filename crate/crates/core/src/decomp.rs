//! Decomposition polynomials `d_λμ(q)`: directly from oriented diagrams and
//! recursively by removing a small cap or curl.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::arcdiagrams::{build_arc_diagram, diagram_degree, Arc};
use crate::qpoly::{QPoly, QPolyError};
use crate::weights::{same_block, Family, Label, Pos, WeightDiagram, STEP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("weight is minimal in its block: there is no cap or curl to remove")]
    Minimal,
}

/// Which end of a curl is slid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurlEnd {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// Small cap with `∘` just left of its `∧`.
    CapSlideCirc,
    /// Small cap with `×` just left of its `∧`.
    CapSlideTimes,
    /// Small cap on two neighbouring vertices.
    CapWall,
    /// Curl end slid past the `∘`/`×` on its left.
    CurlSlide { end: CurlEnd, symbol: Label },
    /// Curl on `1/2` and `3/2`.
    CurlHalf,
    /// Curl on `0` and `1`.
    CurlZero,
}

impl CaseKind {
    pub fn is_wall(self) -> bool {
        matches!(self, CaseKind::CapWall | CaseKind::CurlZero)
    }

    pub fn name(self) -> String {
        match self {
            CaseKind::CapSlideCirc => "cap_slide_circ".into(),
            CaseKind::CapSlideTimes => "cap_slide_times".into(),
            CaseKind::CapWall => "cap_wall".into(),
            CaseKind::CurlSlide { end, symbol } => {
                let end = if end == CurlEnd::Left {
                    "left"
                } else {
                    "right"
                };
                let sym = if symbol == Label::Circle {
                    "circ"
                } else {
                    "times"
                };
                format!("curl_slide_{end}_{sym}")
            }
            CaseKind::CurlHalf => "curl_half".into(),
            CaseKind::CurlZero => "curl_zero".into(),
        }
    }
}

/// How a block element is carried to the adjacent block.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Surgery {
    /// Exchange the raw labels at two vertices.
    Swap(Pos, Pos),
    /// Flip `∨`/`∧` at a vertex.
    Flip(Pos),
    /// Replace the labels at the arc's vertices.
    Set(Vec<(Pos, Label)>),
}

/// A small arc of `c_λ` and the weights it relates `λ` to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCase {
    pub kind: CaseKind,
    pub arc: Arc,
    pub lambda_prime: WeightDiagram,
    pub lambda_minus: Option<WeightDiagram>,
    surgery: Surgery,
    /// Resolved labels of `λ` (`λ⁺`) at the arc's ends.
    plus_labels: (Label, Label),
}

impl ReductionCase {
    /// `μ'`: the weight in `λ'`'s block corresponding to `μ`.
    pub fn translate(&self, mu: &WeightDiagram, choice: Label) -> WeightDiagram {
        match &self.surgery {
            Surgery::Swap(x, y) => {
                let (lx, ly) = (mu.raw_label(*x), mu.raw_label(*y));
                let brauer = mu.family() == Family::Brauer;
                let mark = |p: Pos, l: Label| {
                    if brauer && p == 0 && l.is_nontrivial() {
                        Label::Diamond
                    } else {
                        l
                    }
                };
                mu.relabel(&[(*x, mark(*x, ly)), (*y, mark(*y, lx))], choice)
            }
            Surgery::Flip(x) => mu.with_resolved(&[(*x, mu.label(*x).flipped())]),
            Surgery::Set(changes) => mu.relabel(changes, choice),
        }
    }

    /// For wall cases: `Some(true)` if `μ` is of the form `μ⁺`, `Some(false)`
    /// if of the form `μ⁻`, `None` otherwise.
    pub fn wall_sign(&self, mu: &WeightDiagram) -> Option<bool> {
        let pair = (mu.label(self.arc.left()), mu.label(self.arc.right()));
        if pair == self.plus_labels {
            Some(true)
        } else if pair == (self.plus_labels.0.flipped(), self.plus_labels.1.flipped()) {
            Some(false)
        } else {
            None
        }
    }
}

/// Picks the leftmost small cap of `c_λ`, or failing that (Brauer) the curl
/// on the leftmost `∧`, and the reduction it determines. New `◇`s are
/// resolved with `choice`.
pub fn classify_small_arc(w: &WeightDiagram, choice: Label) -> Result<ReductionCase, DecompError> {
    let c = build_arc_diagram(w);
    let small_cap = c.caps().iter().copied().find(|&(a, b)| {
        w.positions_in(a + STEP, b - STEP)
            .all(|p| !w.label(p).is_nontrivial())
    });
    if let Some((a, b)) = small_cap {
        let plus_labels = (w.label(a), w.label(b));
        if a == b - STEP {
            let prime = if w.raw_label(a) == Label::Diamond {
                vec![(a, Label::Circle), (b, Label::Cross)]
            } else {
                vec![(a, Label::Cross), (b, Label::Circle)]
            };
            return Ok(ReductionCase {
                kind: CaseKind::CapWall,
                arc: Arc::Cap(a, b),
                lambda_prime: w.relabel(&prime, choice),
                lambda_minus: Some(w.with_resolved(&[(a, Label::Up), (b, Label::Down)])),
                surgery: Surgery::Set(prime),
                plus_labels,
            });
        }
        let kind = match w.label(b - STEP) {
            Label::Circle => CaseKind::CapSlideCirc,
            _ => CaseKind::CapSlideTimes,
        };
        return Ok(translation(
            w,
            kind,
            Arc::Cap(a, b),
            Surgery::Swap(b - STEP, b),
            plus_labels,
            choice,
        ));
    }
    let &(a1, a2) = c.curls().first().ok_or(DecompError::Minimal)?;
    let arc = Arc::Curl(a1, a2);
    let plus_labels = (w.label(a1), w.label(a2));
    if a2 - STEP > a1 {
        let kind = CaseKind::CurlSlide {
            end: CurlEnd::Right,
            symbol: w.label(a2 - STEP),
        };
        return Ok(translation(
            w,
            kind,
            arc,
            Surgery::Swap(a2 - STEP, a2),
            plus_labels,
            choice,
        ));
    }
    let start = w
        .grid_start()
        .expect("curls only occur in the Brauer family");
    if a1 > start {
        let kind = CaseKind::CurlSlide {
            end: CurlEnd::Left,
            symbol: w.label(a1 - STEP),
        };
        return Ok(translation(
            w,
            kind,
            arc,
            Surgery::Swap(a1 - STEP, a1),
            plus_labels,
            choice,
        ));
    }
    if a1 == 1 {
        return Ok(translation(
            w,
            CaseKind::CurlHalf,
            arc,
            Surgery::Flip(1),
            plus_labels,
            choice,
        ));
    }
    let prime = vec![(0, Label::Circle), (STEP, Label::Cross)];
    Ok(ReductionCase {
        kind: CaseKind::CurlZero,
        arc,
        lambda_prime: w.relabel(&prime, choice),
        lambda_minus: Some(w.with_resolved(&[(0, Label::Down), (STEP, Label::Down)])),
        surgery: Surgery::Set(prime),
        plus_labels,
    })
}

fn translation(
    w: &WeightDiagram,
    kind: CaseKind,
    arc: Arc,
    surgery: Surgery,
    plus_labels: (Label, Label),
    choice: Label,
) -> ReductionCase {
    let mut case = ReductionCase {
        kind,
        arc,
        lambda_prime: w.clone(),
        lambda_minus: None,
        surgery,
        plus_labels,
    };
    case.lambda_prime = case.translate(w, choice);
    case
}

/// `q^{deg(c_λ x_μ)}` when `c_λ x_μ` is oriented, else `0`.
pub fn d_poly(lambda: &WeightDiagram, mu: &WeightDiagram) -> QPoly {
    if !matches!(same_block(lambda, mu), Ok(true)) {
        return QPoly::zero();
    }
    match diagram_degree(&build_arc_diagram(lambda), mu) {
        Some(k) => QPoly::q_pow(i64::from(k)),
        None => QPoly::zero(),
    }
}

/// `D_λμ = d_λμ(1)`.
pub fn decomposition_numbers(lambda: &WeightDiagram, mu: &WeightDiagram) -> i64 {
    d_poly(lambda, mu).eval(1).expect("monomials evaluate at 1")
}

type Key = (WeightDiagram, WeightDiagram);

/// Memo tables for the recursions. Safe to share between threads; entries are
/// inserted whole, so readers never see partial values.
#[derive(Debug, Default)]
pub struct Memo {
    d: Mutex<HashMap<Key, QPoly>>,
    p: Mutex<HashMap<Key, QPoly>>,
    cases: Mutex<HashMap<WeightDiagram, ReductionCase>>,
}

impl Memo {
    pub fn new() -> Self {
        Memo::default()
    }

    pub fn len(&self) -> usize {
        self.d.lock().unwrap().len() + self.p.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn case(&self, w: &WeightDiagram, choice: Label) -> Option<ReductionCase> {
        if let Some(c) = self.cases.lock().unwrap().get(w) {
            return Some(c.clone());
        }
        let c = classify_small_arc(w, choice).ok()?;
        self.cases.lock().unwrap().insert(w.clone(), c.clone());
        Some(c)
    }

    pub(crate) fn get_p(&self, key: &Key) -> Option<QPoly> {
        self.p.lock().unwrap().get(key).cloned()
    }

    pub(crate) fn put_p(&self, key: Key, value: QPoly) {
        self.p.lock().unwrap().insert(key, value);
    }
}

/// Choice used for `◇`s created during a recursion started at `w`.
pub fn recursion_choice(w: &WeightDiagram) -> Label {
    w.block_diamond_choice().unwrap_or(Label::Down)
}

/// `d_λμ(q)` by recursion on small arcs, bottoming out at weights without arcs.
pub fn d_poly_recursive(lambda: &WeightDiagram, mu: &WeightDiagram) -> QPoly {
    d_poly_recursive_with(lambda, mu, recursion_choice(lambda), &Memo::new())
}

/// [`d_poly_recursive`] with an explicit `◇` choice and a shared memo.
pub fn d_poly_recursive_with(
    lambda: &WeightDiagram,
    mu: &WeightDiagram,
    choice: Label,
    memo: &Memo,
) -> QPoly {
    if lambda.family() != mu.family() || !matches!(same_block(lambda, mu), Ok(true)) {
        return QPoly::zero();
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = memo.d.lock().unwrap().get(&key) {
        return v.clone();
    }
    let value = match memo.case(lambda, choice) {
        None => {
            if lambda == mu {
                QPoly::one()
            } else {
                QPoly::zero()
            }
        }
        Some(case) => {
            let mu_prime = case.translate(mu, choice);
            let inner = || d_poly_recursive_with(&case.lambda_prime, &mu_prime, choice, memo);
            if case.kind.is_wall() {
                match case.wall_sign(mu) {
                    Some(true) => inner(),
                    Some(false) => inner().shift(1).expect("shift by one"),
                    None => QPoly::zero(),
                }
            } else {
                inner()
            }
        }
    };
    memo.d.lock().unwrap().insert(key, value.clone());
    value
}

/// Checks `d_{λ⁺μ⁺} = q^{-1} d_{λ⁻μ⁺} + d_{λ⁻μ⁻}` and
/// `d_{λ⁺μ⁻} = q d_{λ⁻μ⁻} + d_{λ⁻μ⁺}` for a wall case at `λ⁺` and a `μ⁺`,
/// every term computed directly.
pub fn check_wall_identities(
    case: &ReductionCase,
    lambda_plus: &WeightDiagram,
    mu_plus: &WeightDiagram,
) -> Result<bool, QPolyError> {
    let Some(lambda_minus) = &case.lambda_minus else {
        return Ok(true);
    };
    let (a, b) = (case.arc.left(), case.arc.right());
    let mu_minus = mu_plus.with_resolved(&[
        (a, mu_plus.label(a).flipped()),
        (b, mu_plus.label(b).flipped()),
    ]);
    let d = d_poly;
    let s1 = d(lambda_plus, mu_plus)
        == d(lambda_minus, mu_plus)
            .shift(-1)?
            .checked_add(&d(lambda_minus, &mu_minus))?;
    let s2 = d(lambda_plus, &mu_minus)
        == d(lambda_minus, &mu_minus)
            .shift(1)?
            .checked_add(&d(lambda_minus, mu_plus))?;
    Ok(s1 && s2)
}

/// The family a reduction case can occur in.
pub fn case_family(kind: CaseKind) -> Option<Family> {
    match kind {
        CaseKind::CapSlideCirc | CaseKind::CapSlideTimes | CaseKind::CapWall => None,
        _ => Some(Family::Brauer),
    }
}
