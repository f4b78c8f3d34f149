//! Self-validated real arithmetic: dyadic midpoint-radius balls.
//!
//! Midpoints are arbitrary-precision dyadics `m * 2^e`; radii are dyadics
//! rounded outward with a short mantissa.  Every operation returns a ball
//! guaranteed to contain the exact result of applying the operation to any
//! points of the input balls.  Only the handful of operations the positivity
//! and certification paths need is implemented: ring operations, integer
//! square roots, directed division bounds, and decimal rendering.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Value `m * 2^e`.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { m: BigInt::from(n), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    fn align(&self, e: i64) -> BigInt {
        debug_assert!(e <= self.e || self.m.is_zero());
        if self.m.is_zero() {
            BigInt::zero()
        } else {
            &self.m << (self.e - e) as u64
        }
    }

    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.e.min(rhs.e);
        Dyadic { m: self.align(e) + rhs.align(e), e }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { m: -self.m.clone(), e: self.e }
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &rhs.m, e: self.e + rhs.e }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn cmp_val(&self, rhs: &Dyadic) -> std::cmp::Ordering {
        let e = self.e.min(rhs.e);
        let (a, b) = (self.align(e), rhs.align(e));
        a.cmp(&b)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    pub fn from_rational_up(x: &BigRational, prec: u64) -> Dyadic {
        let num = x.numer() << prec;
        let (q, r) = num_integer::Integer::div_rem(&num, x.denom());
        let m = if r.is_zero() || x.is_negative() { q } else { q + 1 };
        Dyadic { m, e: -(prec as i64) }
    }

    pub fn from_rational_down(x: &BigRational, prec: u64) -> Dyadic {
        Dyadic::from_rational_up(&(-x.clone()), prec).neg()
    }

    fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// Round to `prec` significant bits toward +infinity (for radii).
    pub fn round_up(&self, prec: u64) -> Dyadic {
        let b = self.bits();
        if b <= prec {
            return self.clone();
        }
        let k = (b - prec) as i64;
        let shifted = &self.m >> k as u64;
        let exact = (&shifted << k as u64) == self.m;
        let m = if exact || self.m.sign() == Sign::Minus { shifted } else { shifted + 1 };
        Dyadic { m, e: self.e + k }
    }

    /// Largest dyadic `s * 2^t` with `(s 2^t)^2 <= self` (`self >= 0`),
    /// computed with about `prec` significant bits.
    pub fn sqrt_down(&self, prec: u64) -> Dyadic {
        assert!(self.m.sign() != Sign::Minus, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.m.clone();
        let mut e = self.e;
        let want = 2 * prec;
        let have = m.bits();
        let mut shift = want.saturating_sub(have) as i64;
        if (e - shift) % 2 != 0 {
            shift += 1;
        }
        m <<= shift as u64;
        e -= shift;
        let s = m.sqrt();
        Dyadic { m: s, e: e / 2 }
    }

    pub fn sqrt_up(&self, prec: u64) -> Dyadic {
        let lo = self.sqrt_down(prec);
        // (s+1)*2^t strictly bounds above unless s^2 was exact.
        if lo.mul(&lo) == *self {
            lo
        } else {
            Dyadic { m: &lo.m + 1, e: lo.e }
        }
    }

    /// Upper bound for `self / rhs` with positive operands.
    pub fn div_up(&self, rhs: &Dyadic, prec: u64) -> Dyadic {
        assert!(self.m.sign() != Sign::Minus && rhs.m.sign() == Sign::Plus);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let num = &self.m << prec;
        let (q, r) = num_integer::Integer::div_rem(&num, &rhs.m);
        let m = if r.is_zero() { q } else { q + 1 };
        Dyadic { m, e: self.e - rhs.e - prec as i64 }
    }
}

#[derive(Clone)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic, // nonnegative
    prec: u64,
}

const RAD_BITS: u64 = 16;

impl RealBall {
    pub fn exact_int(n: i64, prec: u64) -> RealBall {
        RealBall { mid: Dyadic::from_int(n), rad: Dyadic::zero(), prec }
    }

    pub fn from_rational(x: &BigRational, prec: u64) -> RealBall {
        // Fixed point with prec+2 fractional bits; the truncation error is
        // below one ulp, which becomes the radius.
        let shift = prec + 2;
        let num = x.numer() << shift;
        let (q, r) = num_integer::Integer::div_rem(&num, x.denom());
        let mid = Dyadic { m: q, e: -(shift as i64) };
        let rad = if r.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { m: BigInt::one(), e: -(shift as i64) }
        };
        RealBall { mid, rad, prec }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    fn normalize(mid: Dyadic, rad: Dyadic, prec: u64) -> RealBall {
        // Round the midpoint to prec bits, absorbing the rounding error.
        let b = mid.bits();
        if b <= prec {
            return RealBall { mid, rad: rad.round_up(RAD_BITS), prec };
        }
        let k = (b - prec) as i64;
        let shifted = &mid.m >> k as u64;
        let rounded = Dyadic { m: shifted, e: mid.e + k };
        let err = mid.sub(&rounded).abs();
        RealBall { mid: rounded, rad: rad.add(&err).round_up(RAD_BITS), prec }
    }

    pub fn add(&self, rhs: &RealBall) -> RealBall {
        let prec = self.prec.max(rhs.prec);
        RealBall::normalize(self.mid.add(&rhs.mid), self.rad.add(&rhs.rad), prec)
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn sub(&self, rhs: &RealBall) -> RealBall {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RealBall) -> RealBall {
        let prec = self.prec.max(rhs.prec);
        let mid = self.mid.mul(&rhs.mid);
        // |a||rb| + |b||ra| + ra rb
        let rad = self
            .mid
            .abs()
            .mul(&rhs.rad)
            .add(&rhs.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&rhs.rad));
        RealBall::normalize(mid, rad, prec)
    }

    pub fn scale_rational(&self, k: &BigRational) -> RealBall {
        self.mul(&RealBall::from_rational(k, self.prec))
    }

    /// Ball containing sqrt of every nonnegative point; the input must not
    /// be entirely negative.
    pub fn sqrt(&self) -> RealBall {
        let lo_pt = self.mid.sub(&self.rad);
        let hi_pt = self.mid.add(&self.rad);
        assert!(hi_pt.m.sign() != Sign::Minus, "sqrt of negative ball");
        let lo = if lo_pt.m.sign() == Sign::Minus {
            Dyadic::zero()
        } else {
            lo_pt.sqrt_down(self.prec + 2)
        };
        let hi = hi_pt.sqrt_up(self.prec + 2);
        let two = Dyadic { m: BigInt::one(), e: -1 };
        let mid = lo.add(&hi).mul(&two);
        let rad = hi.sub(&lo).mul(&two);
        RealBall::normalize(mid, rad, self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp_val(&self.rad) != std::cmp::Ordering::Greater
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.mid.m.sign() == Sign::Plus
            && self.mid.cmp_val(&self.rad) == std::cmp::Ordering::Greater
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.neg().is_certainly_positive()
    }

    /// Upper bound of |x| over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound of |x| over the ball (zero if the ball straddles zero).
    pub fn abs_lower(&self) -> Dyadic {
        let l = self.mid.abs().sub(&self.rad);
        if l.m.sign() == Sign::Minus {
            Dyadic::zero()
        } else {
            l
        }
    }

    /// Is the radius certainly below `10^-digits`?
    pub fn rad_below_pow10(&self, digits: u32) -> bool {
        let bound = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
        self.rad.to_rational() < bound
    }

    /// "m +/- r" with the midpoint printed to `digits` decimal places.
    pub fn to_decimal(&self, digits: u32) -> String {
        format!(
            "{} +/- {}",
            decimal_string(&self.mid.to_rational(), digits),
            decimal_string_short(&self.rad.to_rational())
        )
    }
}

impl std::fmt::Debug for RealBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

/// Fixed-point decimal rendering, truncated toward zero.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_str)
}

/// Two-significant-digit upper-bound rendering for radii, like "3.1e-27".
fn decimal_string_short(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut exp = 0i32;
    let ten = BigRational::from(BigInt::from(10));
    let one = BigRational::one();
    let mut v = x.abs();
    while v < one {
        v *= &ten;
        exp -= 1;
    }
    while v >= ten {
        v /= &ten;
        exp += 1;
    }
    // v in [1, 10); take two digits rounded up.
    let hund = (&v * BigRational::from(BigInt::from(10))).ceil();
    let mut d = hund.to_integer();
    let mut e = exp;
    if d == BigInt::from(100) {
        d = BigInt::from(10);
        e += 1;
    }
    let ds = d.to_string();
    format!("{}.{}e{}", &ds[..1], &ds[1..], e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::laurent::rat;

    #[test]
    fn ring_ops_contain_exact_values() {
        let a = RealBall::from_rational(&rat(1, 3), 128);
        let b = RealBall::from_rational(&rat(2, 7), 128);
        let s = a.add(&b);
        let exact = rat(1, 3) + rat(2, 7);
        let diff = (s.mid().to_rational() - exact).abs();
        assert!(diff <= s.rad().to_rational());
        let p = a.mul(&b);
        let exact = rat(2, 21);
        let diff = (p.mid().to_rational() - exact).abs();
        assert!(diff <= p.rad().to_rational());
        assert!(p.rad_below_pow10(30));
    }

    #[test]
    fn sqrt_brackets() {
        let two = RealBall::exact_int(2, 192);
        let r = two.sqrt();
        let v = r.mid().to_rational();
        // v^2 within radius-induced tolerance of 2.
        let err = (&v * &v - rat(2, 1)).abs();
        let tol = (r.rad().to_rational() * rat(4, 1)).abs(); // |(v+r)^2 - v^2| ~ 2vr + r^2 < 4r
        assert!(err <= tol, "err={} tol={}", err, tol);
        assert!(r.rad_below_pow10(40));
        assert!(r.is_certainly_positive());
    }

    #[test]
    fn sign_queries() {
        let tiny = RealBall::from_rational(&rat(1, 1_000_000), 64);
        assert!(tiny.is_certainly_positive());
        assert!(!tiny.contains_zero());
        let wide = RealBall::from_rational(&rat(1, 1), 64)
            .sub(&RealBall::from_rational(&rat(1, 1), 64));
        assert!(wide.contains_zero());
        assert!(!wide.is_certainly_positive());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(-7, 4), 3), "-1.750");
        assert_eq!(decimal_string(&rat(22, 7), 4), "3.1428");
        let b = RealBall::from_rational(&rat(1, 3), 96);
        let s = b.to_decimal(10);
        assert!(s.starts_with("0.3333333333"), "{}", s);
    }
}
