//! Exact arithmetic in a real quadratic extension of the rationals.
//!
//! Values are `a + b*sqrt(d)` with rational `a`, `b` and a fixed squarefree
//! radicand `d`.  Rational values carry radicand 0 and combine freely with
//! any extension; two genuinely irrational values must share their radicand,
//! and mixing different ones is a programming error, not a computable case.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn join(x: u32, y: u32) -> u32 {
    match (x, y) {
        (0, d) | (d, 0) => d,
        (a, b) => {
            assert_eq!(a, b, "mixed radicands sqrt({a}) and sqrt({b})");
            a
        }
    }
}

fn is_square(d: u32) -> bool {
    let r = (d as f64).sqrt().round() as u32;
    r * r == d
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> QuadExt {
        if b.is_zero() {
            return QuadExt { a, b, d: 0 };
        }
        assert!(d >= 2 && !is_square(d), "radicand {d} is not a nonsquare >= 2");
        QuadExt { a, b, d }
    }

    pub fn from_rational(a: BigRational) -> QuadExt {
        QuadExt { a, b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> QuadExt {
        QuadExt::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> QuadExt {
        QuadExt::from_int(0)
    }

    pub fn one() -> QuadExt {
        QuadExt::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational part; the whole value when [`QuadExt::is_rational`].
    pub fn rational(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn add(&self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &rhs.a, &self.b + &rhs.b, join(self.d, rhs.d))
    }

    pub fn sub(&self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &rhs.a, &self.b - &rhs.b, join(self.d, rhs.d))
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d }
    }

    pub fn mul(&self, rhs: &QuadExt) -> QuadExt {
        let d = join(self.d, rhs.d);
        let rad = BigRational::from(BigInt::from(d));
        QuadExt::new(
            &self.a * &rhs.a + &self.b * &rhs.b * rad,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }

    pub fn scale(&self, k: &BigRational) -> QuadExt {
        QuadExt::new(&self.a * k, &self.b * k, self.d)
    }

    /// The Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a^2 - b^2 d`, zero only at zero since d is a nonsquare.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from(BigInt::from(self.d))
    }

    pub fn inv(&self) -> QuadExt {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        self.conj().scale(&n.recip())
    }

    pub fn pow(&self, mut e: u32) -> QuadExt {
        let mut base = self.clone();
        let mut out = QuadExt::one();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let sign = if self.b.is_negative() { '-' } else { '+' };
        if self.a.is_zero() && sign == '+' {
            return write!(f, "{}*sqrt({})", mag, self.d);
        }
        write!(f, "{} {} {}*sqrt({})", self.a, sign, mag, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn v(a: i64, b: i64, d: u32) -> QuadExt {
        QuadExt::new(r(a, 1), r(b, 1), d)
    }

    #[test]
    fn field_axioms_hold_in_one_extension() {
        let x = v(1, 2, 5);
        let y = v(-3, 1, 5);
        assert_eq!(x.add(&y), v(-2, 3, 5));
        // (1 + 2r)(-3 + r) with r^2 = 5: -3 + r - 6r + 2*5 = 7 - 5r
        assert_eq!(x.mul(&y), v(7, -5, 5));
        assert_eq!(x.mul(&y), y.mul(&x));
        let z = x.mul(&x.inv());
        assert_eq!(z, QuadExt::one());
        assert!(z.is_rational());
        assert_eq!(x.norm(), r(1 - 4 * 5, 1));
        assert_eq!(x.mul(&x.conj()), QuadExt::from_rational(x.norm()));
    }

    #[test]
    fn rationals_embed_with_radicand_zero() {
        let half = QuadExt::from_rational(r(1, 2));
        assert!(half.is_rational());
        assert_eq!(half.radicand(), 0);
        // rational times irrational adopts the extension
        let golden = v(1, 1, 5).scale(&r(1, 2));
        assert_eq!(half.mul(&golden).radicand(), 5);
        // a difference that cancels the radical drops back to radicand zero
        let drop = golden.sub(&golden).add(&half);
        assert_eq!(drop, half);
        assert_eq!(drop.radicand(), 0);
    }

    #[test]
    fn powers_follow_the_minimal_polynomial() {
        // the golden-ratio double: x = 1 + sqrt(5) satisfies x^2 = 2x + 4
        let x = v(1, 1, 5);
        assert_eq!(x.pow(2), x.scale(&r(2, 1)).add(&QuadExt::from_int(4)));
        assert_eq!(x.pow(5), x.pow(3).mul(&x.pow(2)));
        assert_eq!(x.pow(0), QuadExt::one());
    }

    #[test]
    #[should_panic(expected = "mixed radicands")]
    fn mixing_extensions_is_refused() {
        let _ = v(0, 1, 2).add(&v(0, 1, 3));
    }

    #[test]
    #[should_panic(expected = "not a nonsquare")]
    fn square_radicands_are_refused() {
        let _ = v(0, 1, 9);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(v(1, -2, 7).to_string(), "1 - 2*sqrt(7)");
        assert_eq!(v(0, 1, 2).to_string(), "1*sqrt(2)");
        assert_eq!(QuadExt::from_rational(r(-3, 4)).to_string(), "-3/4");
    }
}
