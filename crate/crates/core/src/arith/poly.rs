//! Dense univariate polynomials over a finite field.
//!
//! Coefficients are stored little-endian and kept trimmed, so the zero
//! polynomial is the empty vector and `deg` returns `-1` for it.  Operations
//! borrow the field explicitly; mixing fields is a caller bug and only
//! guarded by debug assertions on element ranges.

use super::gf::{Gf, GfField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Gf>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![1] }
    }

    pub fn x() -> Poly {
        Poly { c: vec![0, 1] }
    }

    pub fn constant(a: Gf) -> Poly {
        if a == 0 {
            Poly::zero()
        } else {
            Poly { c: vec![a] }
        }
    }

    pub fn from_coeffs(mut c: Vec<Gf>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    /// Builds from integer coefficients via the prime-subfield embedding.
    pub fn from_ints(f: &GfField, ints: &[i64]) -> Poly {
        Poly::from_coeffs(ints.iter().map(|&n| f.from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Gf {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Gf {
        *self.c.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    pub fn add(&self, f: &GfField, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), rhs.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, f: &GfField) -> Poly {
        Poly { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn sub(&self, f: &GfField, rhs: &Poly) -> Poly {
        self.add(f, &rhs.neg(f))
    }

    pub fn mul(&self, f: &GfField, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0 as Gf; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, f: &GfField, a: Gf) -> Poly {
        if a == 0 {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|&b| f.mul(a, b)).collect() }
    }

    /// Euclidean division; the divisor may be any nonzero polynomial.
    pub fn divrem(&self, f: &GfField, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.deg() < d.deg() {
            return (Poly::zero(), self.clone());
        }
        let lc_inv = f.inv(d.lc());
        let mut rem = self.c.clone();
        let dd = d.c.len() - 1;
        let mut quot = vec![0 as Gf; rem.len() - dd];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead != 0 {
                let qc = f.mul(lead, lc_inv);
                quot[shift] = qc;
                for i in 0..dd {
                    rem[shift + i] = f.sub(rem[shift + i], f.mul(qc, d.c[i]));
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Poly::from_coeffs(quot), Poly { c: rem })
    }

    pub fn rem(&self, f: &GfField, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &GfField, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic(f)
        }
    }

    pub fn monic(&self, f: &GfField) -> Poly {
        assert!(!self.is_zero());
        self.mul_scalar(f, f.inv(self.lc()))
    }

    pub fn derivative(&self, f: &GfField) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.c.len() - 1);
        for i in 1..self.c.len() {
            let mut acc = 0 as Gf;
            for _ in 0..(i as u32 % f.p()) {
                acc = f.add(acc, self.c[i]);
            }
            out.push(acc);
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, f: &GfField, x: Gf) -> Gf {
        let mut acc = 0 as Gf;
        for &a in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), a);
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, f: &GfField, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Poly::one().rem(f, m);
        let mut base = self.rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self, f: &GfField) -> bool {
        if self.deg() <= 0 {
            return true;
        }
        let d = self.derivative(f);
        if d.is_zero() {
            // p-th power detection: every exponent divisible by p.
            return false;
        }
        self.gcd(f, &d).deg() == 0
    }

    /// Multiplicity of `d` (irreducible or not, must be nonconstant) in `self`.
    pub fn valuation(&self, f: &GfField, d: &Poly) -> u32 {
        assert!(d.deg() >= 1 && !self.is_zero());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(f, d);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }
}

/// Quadratic-residue symbol of `a` in the residue field `F_q[x]/(m)`,
/// `m` irreducible: 0 if `m | a`, otherwise Euler's criterion by powering.
pub fn legendre_mod(f: &GfField, a: &Poly, m: &Poly) -> i32 {
    let r = a.rem(f, m);
    if r.is_zero() {
        return 0;
    }
    let qd = (f.q() as u64).pow(m.deg() as u32);
    let s = r.pow_mod(f, (qd - 1) / 2, m);
    if s == Poly::one() {
        1
    } else {
        // s must be the constant -1.
        debug_assert_eq!(s, Poly::constant(f.neg(1)));
        -1
    }
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, or `None`
/// when `gcd(a, m)` is not constant.  `m` need not be irreducible; this is
/// what Hensel lifting works modulo prime powers with.
pub fn inv_mod(f: &GfField, a: &Poly, m: &Poly) -> Option<Poly> {
    assert!(m.deg() >= 1);
    let mut r0 = m.clone();
    let mut r1 = a.rem(f, m);
    if r1.is_zero() {
        return None;
    }
    // Invariant: r0 = s0*a (mod m), r1 = s1*a (mod m).
    let mut s0 = Poly::zero();
    let mut s1 = Poly::one();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(f, &r1);
        let s = s0.sub(f, &q.mul(f, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.deg() != 0 {
        return None;
    }
    let inv_lc = f.inv(r0.lc());
    Some(s0.mul_scalar(f, inv_lc).rem(f, m))
}

/// Square root of `a` in the residue field `F_q[x]/(m)`, `m` irreducible,
/// by Tonelli-Shanks.  Returns the root with the smaller coefficient code,
/// so the choice is stable; `None` for non-residues.
pub fn sqrt_mod(f: &GfField, a: &Poly, m: &Poly) -> Option<Poly> {
    let r = a.rem(f, m);
    if r.is_zero() {
        return Some(Poly::zero());
    }
    if legendre_mod(f, &r, m) != 1 {
        return None;
    }
    let e = m.deg() as u32;
    let order = (f.q() as u64)
        .checked_pow(e)
        .expect("residue field too large for square roots");
    let root = if order % 4 == 3 {
        r.pow_mod(f, (order + 1) / 4, m)
    } else {
        // Split order - 1 = 2^s * t with t odd; walk the 2-part down using
        // a non-residue found by scanning residues in code order.
        let mut t = order - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (1..order)
            .map(|code| poly_from_code(f, code, e))
            .find(|z| legendre_mod(f, z, m) == -1)
            .expect("no quadratic non-residue found");
        let mut big_m = s;
        let mut c = z.pow_mod(f, t, m);
        let mut root = r.pow_mod(f, (t + 1) / 2, m);
        let mut tt = r.pow_mod(f, t, m);
        while tt != Poly::one() {
            let mut i = 0;
            let mut probe = tt.clone();
            while probe != Poly::one() {
                probe = probe.mul(f, &probe).rem(f, m);
                i += 1;
                assert!(i < big_m, "square root iteration diverged");
            }
            let b = c.pow_mod(f, 1u64 << (big_m - i - 1), m);
            big_m = i;
            c = b.mul(f, &b).rem(f, m);
            root = root.mul(f, &b).rem(f, m);
            tt = tt.mul(f, &c).rem(f, m);
        }
        root
    };
    debug_assert_eq!(root.mul(f, &root).rem(f, m), r);
    let neg = root.neg(f);
    Some(if poly_code(f, &root) <= poly_code(f, &neg) { root } else { neg })
}

/// Base-q code of a polynomial's coefficient vector, little-endian.
pub fn poly_code(f: &GfField, p: &Poly) -> u64 {
    let mut code = 0u64;
    for &a in p.coeffs().iter().rev() {
        code = code
            .checked_mul(f.q() as u64)
            .and_then(|c| c.checked_add(a as u64))
            .expect("polynomial code overflows u64");
    }
    code
}

/// Inverse of [`poly_code`] for codes below q^deg_bound.
pub fn poly_from_code(f: &GfField, mut code: u64, deg_bound: u32) -> Poly {
    let q = f.q() as u64;
    let mut c = Vec::with_capacity(deg_bound as usize);
    for _ in 0..deg_bound {
        c.push((code % q) as Gf);
        code /= q;
    }
    assert_eq!(code, 0, "code out of range for degree bound");
    Poly::from_coeffs(c)
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => {
                    if a != 1 {
                        write!(f, "{}", a)?;
                    }
                    write!(f, "x")?;
                }
                _ => {
                    if a != 1 {
                        write!(f, "{}", a)?;
                    }
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}
