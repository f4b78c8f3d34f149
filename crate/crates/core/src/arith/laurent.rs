//! Laurent polynomials over Q in the variable `q^s`.
//!
//! Every analytic identity in this crate is an equality of finite sums
//! `sum_n c_n q^(n s)`; this type carries them exactly.  The key is the
//! integer `n`, so differentiating in `s` multiplies a term by `n log q`.
//! [`LaurentQ::normalized_derivative`] strips the `log q` powers, returning
//! `sum_n c_n n^r`, which is the quantity the identities pin down.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i64, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl LaurentQ {
    pub fn zero() -> LaurentQ {
        LaurentQ::default()
    }

    pub fn one() -> LaurentQ {
        LaurentQ::monomial(0, BigRational::one())
    }

    pub fn monomial(key: i64, coeff: BigRational) -> LaurentQ {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(key, coeff);
        }
        LaurentQ { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, BigRational)>) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (k, c) in pairs {
            out.add_term(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: i64) -> BigRational {
        self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn add_term(&mut self, key: i64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentQ {
        LaurentQ { terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect() }
    }

    pub fn sub(&self, rhs: &LaurentQ) -> LaurentQ {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &rhs.terms {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> LaurentQ {
        if c.is_zero() {
            return LaurentQ::zero();
        }
        LaurentQ { terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Multiplies by `q^(shift * s)`.
    pub fn shift(&self, shift: i64) -> LaurentQ {
        LaurentQ { terms: self.terms.iter().map(|(&k, c)| (k + shift, c.clone())).collect() }
    }

    /// The substitution `s -> -s`.
    pub fn mirror(&self) -> LaurentQ {
        LaurentQ { terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    /// `(log q)^{-r}` times the r-th derivative at `s = 0`: `sum c_n n^r`.
    pub fn normalized_derivative(&self, r: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            acc += c * BigRational::from(BigInt::from(k).pow(r));
        }
        acc
    }

    /// Exact symmetry under `s -> -s`.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&k, c)| self.coeff(-k) == *c)
    }

    /// Largest |key| with a nonzero coefficient (0 for the zero element).
    pub fn breadth(&self) -> i64 {
        self.terms.keys().map(|k| k.abs()).max().unwrap_or(0)
    }
}

impl std::fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "q^s")?;
                    } else {
                        write!(f, "q^({}s)", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym_example() -> LaurentQ {
        LaurentQ::from_terms([
            (-2, rat(3, 1)),
            (0, rat(7, 2)),
            (2, rat(3, 1)),
        ])
    }

    #[test]
    fn derivative_is_leibniz_compatible() {
        let a = LaurentQ::from_terms([(1, rat(2, 1)), (-3, rat(5, 7))]);
        let b = LaurentQ::from_terms([(0, rat(1, 1)), (2, rat(-4, 3))]);
        // r = 1 on a product: (ab)' = a'b + ab' at s = 0, normalized.
        let lhs = a.mul(&b).normalized_derivative(1);
        let rhs = a.normalized_derivative(1) * b.normalized_derivative(0)
            + a.normalized_derivative(0) * b.normalized_derivative(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_derivatives_vanish_on_symmetric_elements() {
        let s = sym_example();
        assert!(s.is_symmetric());
        for r in [1u32, 3, 5, 7] {
            assert!(s.normalized_derivative(r).is_zero(), "r={}", r);
        }
        assert_eq!(s.normalized_derivative(0), rat(19, 2));
    }

    #[test]
    fn mirror_and_shift() {
        let a = LaurentQ::from_terms([(1, rat(1, 1)), (4, rat(2, 1))]);
        assert_eq!(a.mirror().support(), vec![-4, -1]);
        assert_eq!(a.shift(-1).support(), vec![0, 3]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mirror().mirror(), a);
    }

    #[test]
    fn mul_matches_hand_expansion() {
        // (q^s + 1)(q^(-s) + 1) = q^s + q^(-s) + 2.
        let a = LaurentQ::from_terms([(1, rat(1, 1)), (0, rat(1, 1))]);
        let b = LaurentQ::from_terms([(-1, rat(1, 1)), (0, rat(1, 1))]);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), rat(2, 1));
        assert_eq!(p.coeff(1), rat(1, 1));
        assert_eq!(p.coeff(-1), rat(1, 1));
        assert!(p.is_symmetric());
    }
}
