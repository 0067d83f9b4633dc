//! Exact Laurent polynomials in one variable `q` with `i64` coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QPolyError {
    #[error("coefficient overflow in {0}")]
    Overflow(&'static str),
    #[error("cannot evaluate a polynomial with negative exponents at 0")]
    NegativeExponentAtZero,
    #[error("negative power of {0} is not an integer")]
    NonIntegral(i64),
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
}

/// A polynomial in `q` with integer coefficients, allowing negative exponents.
///
/// Stored sparsely as `exponent -> coefficient`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<i64, i64>", into = "BTreeMap<i64, i64>")]
pub struct QPoly {
    terms: BTreeMap<i64, i64>,
}

impl TryFrom<BTreeMap<i64, i64>> for QPoly {
    type Error = QPolyError;

    fn try_from(mut terms: BTreeMap<i64, i64>) -> Result<Self, Self::Error> {
        terms.retain(|_, c| *c != 0);
        Ok(QPoly { terms })
    }
}

impl From<QPoly> for BTreeMap<i64, i64> {
    fn from(p: QPoly) -> Self {
        p.terms
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::monomial(1, 0)
    }

    /// `coeff * q^exp`.
    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        QPoly { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        QPoly::monomial(1, exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Result<Self, QPolyError> {
        let mut out = QPoly::zero();
        for (e, c) in terms {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    /// `Some((coeff, exp))` if this is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*c, *e))
        } else {
            None
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficients of `q^0, q^1, ..., q^deg`. Empty for the zero polynomial.
    ///
    /// Panics if there are negative exponents.
    pub fn coefficient_list(&self) -> Vec<i64> {
        match self.max_exponent() {
            None => Vec::new(),
            Some(top) => {
                assert!(
                    self.min_exponent().unwrap_or(0) >= 0,
                    "coefficient_list on a Laurent polynomial"
                );
                (0..=top).map(|e| self.coeff(e)).collect()
            }
        }
    }

    fn add_term(&mut self, exp: i64, coeff: i64) -> Result<(), QPolyError> {
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry = entry
            .checked_add(coeff)
            .ok_or(QPolyError::Overflow("add"))?;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QPoly) -> Result<QPoly, QPolyError> {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    pub fn checked_neg(&self) -> Result<QPoly, QPolyError> {
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms() {
            terms.insert(e, c.checked_neg().ok_or(QPolyError::Overflow("neg"))?);
        }
        Ok(QPoly { terms })
    }

    pub fn checked_sub(&self, other: &QPoly) -> Result<QPoly, QPolyError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_mul(&self, other: &QPoly) -> Result<QPoly, QPolyError> {
        let mut out = QPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e = ea.checked_add(eb).ok_or(QPolyError::Overflow("mul"))?;
                let c = ca.checked_mul(cb).ok_or(QPolyError::Overflow("mul"))?;
                out.add_term(e, c)?;
            }
        }
        Ok(out)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Result<QPoly, QPolyError> {
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms() {
            terms.insert(e.checked_add(k).ok_or(QPolyError::Overflow("shift"))?, c);
        }
        Ok(QPoly { terms })
    }

    /// Exact value at `q = x`.
    pub fn eval(&self, x: i64) -> Result<i64, QPolyError> {
        let mut total: i64 = 0;
        for (e, c) in self.terms() {
            let term = if x == 0 {
                match e.cmp(&0) {
                    std::cmp::Ordering::Less => return Err(QPolyError::NegativeExponentAtZero),
                    std::cmp::Ordering::Equal => c,
                    std::cmp::Ordering::Greater => 0,
                }
            } else if e < 0 {
                // only x = ±1 give integer values for negative powers
                match x {
                    1 => c,
                    -1 => {
                        if e % 2 == 0 {
                            c
                        } else {
                            -c
                        }
                    }
                    _ => return Err(QPolyError::NonIntegral(x)),
                }
            } else {
                let e = u32::try_from(e).map_err(|_| QPolyError::Overflow("eval"))?;
                let pow = x.checked_pow(e).ok_or(QPolyError::Overflow("eval"))?;
                c.checked_mul(pow).ok_or(QPolyError::Overflow("eval"))?
            };
            total = total
                .checked_add(term)
                .ok_or(QPolyError::Overflow("eval"))?;
        }
        Ok(total)
    }

    /// `p(-q)`.
    pub fn substitute_negated(&self) -> QPoly {
        let terms = self
            .terms()
            .map(|(e, c)| (e, if e.rem_euclid(2) == 1 { -c } else { c }))
            .collect();
        QPoly { terms }
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.min_exponent().is_some_and(|e| e < 0)
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.terms.values().any(|c| *c < 0)
    }
}

impl fmt::Display for QPoly {
    /// Highest degree first, e.g. `q^11+q^9+2q^7+q^3`, `-q^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if *c < 0 {
                ("-", c.unsigned_abs())
            } else {
                ("+", c.unsigned_abs())
            };
            if i > 0 || sign == "-" {
                write!(f, "{sign}")?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if *e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl std::str::FromStr for QPoly {
    type Err = QPolyError;

    /// Parses the `Display` format back (`2q^3-q+1`, `q^-2`, `0`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QPolyError::Parse(s.to_string());
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let bytes = s.as_bytes();
        let mut out = QPoly::zero();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: i64 = if i > start {
                s[start..i].parse().map_err(|_| err())?
            } else {
                1
            };
            let exp = if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let estart = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    s[estart..i].parse().map_err(|_| err())?
                } else {
                    1
                }
            } else {
                if i == start {
                    return Err(err());
                }
                0
            };
            out.add_term(exp, sign * coeff)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_cancels() {
        assert_eq!(p("q+1").checked_add(&p("q-1")).unwrap(), p("2q"));
        assert_eq!(p("q^3+2").checked_add(&QPoly::zero()).unwrap(), p("q^3+2"));
    }

    #[test]
    fn add_example_polynomial() {
        let sum = p("q^9").checked_add(&p("q^11+2q^7+q^3")).unwrap();
        assert_eq!(sum.to_string(), "q^11+q^9+2q^7+q^3");
    }

    #[test]
    fn mul_with_laurent_factor() {
        let lhs = QPoly::q_pow(11);
        let rhs = QPoly::from_terms([(0, 1), (-2, 1), (-4, 2), (-8, 1)]).unwrap();
        assert_eq!(lhs.checked_mul(&rhs).unwrap(), p("q^11+q^9+2q^7+q^3"));
        assert_eq!(p("2q-3").checked_mul(&QPoly::one()).unwrap(), p("2q-3"));
        assert_eq!(p("-q").checked_mul(&p("q")).unwrap(), p("-q^2"));
    }

    #[test]
    fn eval_and_negate() {
        assert_eq!(p("q^3").eval(1).unwrap(), 1);
        assert_eq!(p("q^11+q^9+2q^7+q^3").eval(1).unwrap(), 5);
        assert_eq!(p("q").substitute_negated(), p("-q"));
        assert_eq!(p("q^-2+q^-1").eval(-1).unwrap(), 0);
        assert_eq!(p("q^-1").eval(0), Err(QPolyError::NegativeExponentAtZero));
        assert_eq!(p("3q^2+5").eval(0).unwrap(), 5);
    }

    #[test]
    fn overflow_is_an_error() {
        let big = QPoly::monomial(i64::MAX, 0);
        assert!(matches!(
            big.checked_add(&QPoly::one()),
            Err(QPolyError::Overflow(_))
        ));
        assert!(matches!(
            big.checked_mul(&QPoly::monomial(2, 1)),
            Err(QPolyError::Overflow(_))
        ));
        assert!(matches!(p("q^40").eval(3), Err(QPolyError::Overflow(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(QPoly::one().to_string(), "1");
        assert_eq!(QPoly::q_pow(3).to_string(), "q^3");
        assert_eq!(p("-q^2+q-1").to_string(), "-q^2+q-1");
        assert_eq!(QPoly::q_pow(-2).to_string(), "q^-2");
    }

    #[test]
    fn json_uses_string_exponent_keys() {
        let json = serde_json::to_string(&p("2q^3-1")).unwrap();
        assert_eq!(json, r#"{"0":-1,"3":2}"#);
        let back: QPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p("2q^3-1"));
        let with_zero: QPoly = serde_json::from_str(r#"{"1":0,"2":1}"#).unwrap();
        assert_eq!(with_zero, p("q^2"));
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-6i64..8, -50i64..50), 0..6)
            .prop_map(|terms| QPoly::from_terms(terms).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.checked_add(&b).unwrap(), b.checked_add(&a).unwrap());
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
            prop_assert_eq!(
                a.checked_add(&b).unwrap().checked_add(&c).unwrap(),
                a.checked_add(&b.checked_add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.checked_mul(&b).unwrap().checked_mul(&c).unwrap(),
                a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
                a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn eval_is_multiplicative(a in arb_poly(), b in arb_poly(), x in -3i64..4) {
            let ab = a.checked_mul(&b).unwrap();
            let lhs = if ab.has_negative_exponent() && x != 1 && x != -1 { None } else { ab.eval(x).ok() };
            if let (Some(lhs), Ok(ea), Ok(eb)) = (lhs, a.eval(x), b.eval(x)) {
                prop_assert_eq!(lhs, ea * eb);
            }
        }

        #[test]
        fn negation_is_an_involution(a in arb_poly()) {
            prop_assert_eq!(a.substitute_negated().substitute_negated(), a.clone());
        }

        #[test]
        fn display_parses_back(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<QPoly>().unwrap(), a);
        }
    }
}
