//! Laurent polynomials in the diametric minors, for checking that exchange
//! sequences stay Laurent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::circ::{generate_diametric, CircularPair};
use crate::linalg::Rational;
use crate::mutation::LmMove;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division of {0} terms by {1} terms is not exact")]
    Inexact(usize, usize),
    #[error("{0} has no expression yet")]
    Unknown(String),
    #[error("move {0} has no exchange relation")]
    NoRelation(usize),
}

/// Exponent vector over a fixed variable list; exponents may be negative.
pub type Monomial = Vec<i32>;

/// A Laurent polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<Monomial, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }
    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Laurent { terms }
    }
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Laurent { terms: BTreeMap::from([(e, Rational::one())]) }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    fn push(&mut self, e: Monomial, c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.push(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.push(e, x * y);
            }
        }
        out
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn shifted(&self, by: &[i32]) -> Laurent {
        let terms = self.terms.iter().map(|(e, c)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone())).collect();
        Laurent { terms }
    }

    fn min_exponents(&self) -> Monomial {
        let m = self.terms.keys().next().map_or(0, |e| e.len());
        (0..m).map(|i| self.terms.keys().map(|e| e[i]).min().expect("nonempty")).collect()
    }

    /// `self / d` when `d` divides `self` in the Laurent ring. Both sides are
    /// moved into the polynomial ring, with `d` free of monomial factors, so
    /// the quotient is a polynomial and plain division decides exactness.
    pub fn div_exact(&self, d: &Laurent) -> Result<Laurent, LaurentError> {
        let fail = || LaurentError::Inexact(self.len(), d.len());
        if d.is_zero() {
            return Err(fail());
        }
        if self.is_zero() {
            return Ok(Laurent::zero());
        }
        let sd = d.min_exponents();
        let sf = self.min_exponents();
        let neg = |v: &Monomial| v.iter().map(|x| -x).collect::<Monomial>();
        let dp = d.shifted(&neg(&sd));
        let mut rem = self.shifted(&neg(&sf));
        let (le, lc) = dp.leading().expect("nonempty");
        let (le, lc) = (le.clone(), lc.clone());
        let mut q = Laurent::zero();
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&le).any(|(a, b)| a < b) {
                return Err(fail());
            }
            let e: Monomial = re.iter().zip(&le).map(|(a, b)| a - b).collect();
            let t = Laurent { terms: BTreeMap::from([(e, rc / &lc)]) };
            rem = rem.sub(&t.mul(&dp));
            q = q.add(&t);
        }
        let back: Monomial = sf.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Ok(q.shifted(&back))
    }

    /// Laurent with a monomial denominator and integer coefficients.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in x.iter().zip(e) {
                let p = num_traits::pow(v.clone(), k.unsigned_abs() as usize);
                if k >= 0 {
                    t *= p;
                } else {
                    t /= p;
                }
            }
            s += t;
        }
        s
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Expressions of cluster variables in the diametric minors.
#[derive(Debug, Clone)]
pub struct LaurentTracker {
    pub variables: Vec<CircularPair>,
    pub exprs: BTreeMap<CircularPair, Laurent>,
}

impl LaurentTracker {
    pub fn new(n: usize) -> Self {
        let variables: Vec<CircularPair> = generate_diametric(n).into_members().into_iter().collect();
        let m = variables.len();
        let mut exprs: BTreeMap<CircularPair, Laurent> =
            variables.iter().enumerate().map(|(i, v)| (v.clone(), Laurent::var(i, m))).collect();
        exprs.insert(CircularPair::empty(n), Laurent::constant(Rational::one(), m));
        LaurentTracker { variables, exprs }
    }

    fn get(&self, x: &CircularPair) -> Result<&Laurent, LaurentError> {
        self.exprs.get(x).ok_or_else(|| LaurentError::Unknown(x.to_string()))
    }

    /// Applies the exchanges in order, dividing exactly at each step.
    pub fn apply(&mut self, moves: &[LmMove]) -> Result<(), LaurentError> {
        for (i, mv) in moves.iter().enumerate() {
            let rel = mv.relation.as_ref().ok_or(LaurentError::NoRelation(i))?;
            let y = mv.entering.as_ref().ok_or(LaurentError::NoRelation(i))?;
            let r = &rel.rhs;
            let num = self.get(&r[0][0])?.mul(self.get(&r[0][1])?).add(&self.get(&r[1][0])?.mul(self.get(&r[1][1])?));
            let val = num.div_exact(self.get(&mv.leaving)?)?;
            self.exprs.insert(y.clone(), val);
        }
        Ok(())
    }

    pub fn support(&self) -> BTreeSet<CircularPair> {
        self.exprs.keys().cloned().collect()
    }
}
