//! Exact coefficient arithmetic.
//!
//! Coefficients are multivariate Laurent polynomials over the rationals in
//! formal square roots v_0, v_1, ... of the Hecke parameters: v_i^2 = q_i.
//! One variable exists per conjugacy class of simple affine reflections, so
//! half-integer powers of q_i are ordinary integer powers of v_i (exponent 2k
//! means q_i^k, exponent 1 means q_i^{1/2}).  Specialization sends each q_i to
//! a positive rational perfect square, hence each v_i to its positive root,
//! and is a ring homomorphism.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a Hecke parameter class.  Every simple affine reflection carries
/// one; reflections conjugate in the extended affine Weyl group share it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamSymbol(pub usize);

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Laurent polynomial in the v_i.  Invariant: no zero coefficients are stored,
/// and every exponent vector has length `nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i32>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, int(n))
    }

    /// The monomial c * prod v_i^{e_i}.
    pub fn monomial(nvars: usize, exps: Vec<i32>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// v_s, the formal square root of q_s.
    pub fn v(nvars: usize, s: ParamSymbol) -> Self {
        let mut e = vec![0; nvars];
        e[s.0] = 1;
        Self::monomial(nvars, e, BigRational::one())
    }

    /// q_s = v_s^2.
    pub fn q(nvars: usize, s: ParamSymbol) -> Self {
        let mut e = vec![0; nvars];
        e[s.0] = 2;
        Self::monomial(nvars, e, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(vec![0; self.nvars].as_slice())
                .map_or(false, |c| c.is_one())
    }

    /// True when the polynomial is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i32>, BigRational>, e: Vec<i32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                Self::insert_term(&mut terms, e, c1 * c2);
            }
        }
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Inverse of a single monomial.  Every q(w) is one, which is all the
    /// algebra ever needs to invert.
    pub fn invert_monomial(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NonInvertibleCoefficient);
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let inv_e: Vec<i32> = e.iter().map(|k| -k).collect();
        Ok(Self::monomial(self.nvars, inv_e, c.recip()))
    }

    /// Formal square root of a monomial whose exponents are all even in v
    /// (i.e. an integer power of the q_i) and whose coefficient is 1.
    pub fn sqrt_monomial(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NonInvertibleCoefficient);
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !c.is_one() || e.iter().any(|k| k % 2 != 0) {
            return Err(Error::NonInvertibleCoefficient);
        }
        let half: Vec<i32> = e.iter().map(|k| k / 2).collect();
        Ok(Self::monomial(self.nvars, half, BigRational::one()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate under a parameter specialization.
    pub fn specialize(&self, spec: &ParamSpec) -> BigRational {
        assert_eq!(spec.v.len(), self.nvars, "specialization arity mismatch");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, k) in e.iter().enumerate() {
                m *= pow_rat(&spec.v[i], *k);
            }
            acc += m;
        }
        acc
    }
}

fn pow_rat(b: &BigRational, k: i32) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= b;
    }
    if k < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// A legal assignment of rational values to the parameters: q_i positive
/// rational perfect squares distinct from 1, stored through their positive
/// square roots v_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpec {
    pub q: Vec<BigRational>,
    pub v: Vec<BigRational>,
}

impl ParamSpec {
    pub fn from_q_values(q_values: &[BigRational]) -> Result<Self> {
        let mut v = Vec::with_capacity(q_values.len());
        for q in q_values {
            if q.is_zero() || q.is_one() || q.is_negative() {
                return Err(Error::IllegalParameter(format!(
                    "q = {} (must be positive and not 1)",
                    q
                )));
            }
            v.push(sqrt_exact(q).ok_or_else(|| {
                Error::IllegalParameter(format!("q = {} is not a perfect square of a rational", q))
            })?);
        }
        Ok(ParamSpec { q: q_values.to_vec(), v })
    }

    pub fn from_ints(q_values: &[i64]) -> Result<Self> {
        let qs: Vec<BigRational> = q_values.iter().map(|&n| int(n)).collect();
        Self::from_q_values(&qs)
    }
}

/// Positive exact square root of a positive rational, when it exists.
fn sqrt_exact(x: &BigRational) -> Option<BigRational> {
    let n = x.numer();
    let d = x.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                if k % 2 == 0 {
                    factors.push(format!("q{}^{}", i, k / 2));
                } else {
                    factors.push(format!("q{}^({}/2)", i, k));
                }
            }
            let mono = factors.join("*");
            let (lead, shown) = if first {
                ("", c.clone())
            } else if c.is_negative() {
                (" - ", c.abs())
            } else {
                (" + ", c.clone())
            };
            first = false;
            if mono.is_empty() {
                write!(f, "{}{}", lead, shown)?;
            } else if shown.is_one() {
                write!(f, "{}{}", lead, mono)?;
            } else if (-&shown).is_one() {
                write!(f, "{}-{}", lead, mono)?;
            } else {
                write!(f, "{}{}*{}", lead, shown, mono)?;
            }
        }
        Ok(())
    }
}
