//! Finite fields `F_q`, `q = p^k`, with exp/log tables.
//!
//! Elements are `u32` codes in `0..q`: the base-`p` digit expansion of the
//! code gives the coordinates in the polynomial basis of `F_p[t]/(m)`.  For
//! prime fields the code is just the residue.  Multiplicative structure goes
//! through exp/log tables on a fixed generator, so quadratic residuosity is
//! a parity test and square roots halve a logarithm.

use thiserror::Error;

/// Element of a [`GfField`], encoded as described at module level.
pub type Gf = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("field size {0}^{1} exceeds the table limit")]
    TooLarge(u32, u32),
}

/// A concrete finite field with precomputed discrete-log tables.
#[derive(Clone)]
pub struct GfField {
    p: u32,
    k: u32,
    q: u32,
    /// `exp[i] = g^i`, doubled in length so products can skip one reduction.
    exp: Vec<Gf>,
    /// `log[a]` for `a != 0`; `log[0]` is a sentinel and never read.
    log: Vec<u32>,
    /// Modulus digits (degree k, monic), empty for prime fields.
    modulus: Vec<u32>,
}

const TABLE_LIMIT: u64 = 1 << 24;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Digit-vector polynomial helpers over F_p used only while the tables are
// being built; everything after construction goes through exp/log.
mod digits {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
            }
        }
        let mut prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&mut prod, m, p);
        prod
    }

    /// In-place remainder by monic `m`.
    pub fn rem(a: &mut Vec<u32>, m: &[u32], p: u32) {
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap() as u64;
            let shift = a.len() - 1 - dm;
            if lead != 0 {
                for i in 0..dm {
                    let sub = lead * m[i] as u64 % p as u64;
                    let idx = shift + i;
                    a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
            a.pop();
            trim(a);
        }
        trim(a);
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = base.to_vec();
        rem(&mut b, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
        let inv = |x: u32| -> u32 {
            // p is prime and small; Fermat inverse.
            let mut r = 1u64;
            let mut b = x as u64;
            let mut e = p as u64 - 2;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p as u64;
                }
                b = b * b % p as u64;
                e >>= 1;
            }
            r as u32
        };
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // Make b monic, then reduce a by it.
            let lead_inv = inv(*b.last().unwrap());
            for c in b.iter_mut() {
                *c = (*c as u64 * lead_inv as u64 % p as u64) as u32;
            }
            rem(&mut a, &b, p);
            std::mem::swap(&mut a, &mut b);
        }
        a
    }
}

fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    // Sequential scan over monic degree-k polynomials; the density of
    // irreducibles (~1/k) makes this instant for the table sizes we allow.
    let kprimes = prime_factors(k as u64);
    let total = (p as u64).pow(k);
    for code in 0..total {
        let mut m: Vec<u32> = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        // x^(p^k) == x mod m, and gcd(x^(p^(k/r)) - x, m) = 1 for prime r | k.
        let x = vec![0u32, 1];
        let frob = |e: u32| digits::pow_mod(&x, (p as u64).pow(e), &m, p);
        let xq = frob(k);
        let mut diff = xq.clone();
        while diff.len() < 2 {
            diff.push(0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        digits::trim(&mut diff);
        if !diff.is_empty() {
            continue;
        }
        let mut ok = true;
        for &r in &kprimes {
            let mut d = frob(k / r as u32);
            while d.len() < 2 {
                d.push(0);
            }
            d[1] = (d[1] + p - 1) % p;
            digits::trim(&mut d);
            let g = digits::gcd(d, m.clone(), p);
            if g.len() != 1 {
                ok = false;
                break;
            }
        }
        if ok {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist");
}

impl GfField {
    pub fn new(p: u32, k: u32) -> Result<GfField, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::BadDegree);
        }
        let q64 = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q64 > TABLE_LIMIT {
            return Err(FieldError::TooLarge(p, k));
        }
        let q = q64 as u32;
        let modulus = if k == 1 { Vec::new() } else { find_irreducible(p, k) };

        let encode = |poly: &[u32]| -> Gf {
            let mut code = 0u64;
            for &d in poly.iter().rev() {
                code = code * p as u64 + d as u64;
            }
            code as Gf
        };
        let decode = |code: Gf| -> Vec<u32> {
            let mut v = Vec::new();
            let mut c = code as u64;
            while c > 0 {
                v.push((c % p as u64) as u32);
                c /= p as u64;
            }
            v
        };

        let raw_mul = |a: Gf, b: Gf| -> Gf {
            if k == 1 {
                (a as u64 * b as u64 % p as u64) as Gf
            } else {
                encode(&digits::mul_mod(&decode(a), &decode(b), &modulus, p))
            }
        };

        // Find a generator of the (cyclic) multiplicative group.
        let factors = prime_factors(q as u64 - 1);
        let order_pow = |g: Gf, mut e: u64| -> Gf {
            let mut acc = 1 as Gf;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    acc = raw_mul(acc, b);
                }
                b = raw_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let mut gen = 0;
        for cand in 1..q {
            if factors
                .iter()
                .all(|&r| order_pow(cand, (q as u64 - 1) / r) != 1)
            {
                gen = cand;
                break;
            }
        }
        assert!(gen != 0, "multiplicative group of a finite field is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0 as Gf; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1 as Gf;
        for i in 0..n {
            exp[i] = acc;
            log[acc as usize] = i as u32;
            acc = raw_mul(acc, gen);
        }
        assert_eq!(acc, 1, "generator order must be q-1");
        for i in 0..n {
            exp[n + i] = exp[i];
        }

        Ok(GfField { p, k, q, exp, log, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus digits of the polynomial basis (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        0..self.q
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        debug_assert!(a < self.q && b < self.q);
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (p, p64) = (self.p, self.p as u64);
            let (mut a, mut b) = (a as u64, b as u64);
            let mut out = 0u64;
            let mut mult = 1u64;
            while a > 0 || b > 0 {
                let d = (a % p64 + b % p64) % p64;
                out += d * mult;
                mult *= p64;
                a /= p64;
                b /= p64;
            }
            debug_assert!(p == self.p);
            out as Gf
        }
    }

    pub fn neg(&self, a: Gf) -> Gf {
        debug_assert!(a < self.q);
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let p64 = self.p as u64;
            let mut a = a as u64;
            let mut out = 0u64;
            let mut mult = 1u64;
            while a > 0 {
                let d = a % p64;
                out += if d == 0 { 0 } else { (p64 - d) * mult };
                mult *= p64;
                a /= p64;
            }
            out as Gf
        }
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Gf) -> Gf {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        self.exp[(n - self.log[a as usize]) as usize]
    }

    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Gf, e: i64) -> Gf {
        if a == 0 {
            assert!(e > 0, "0^e undefined for e <= 0");
            return 0;
        }
        let n = (self.q - 1) as i64;
        let l = self.log[a as usize] as i64;
        let idx = (l * (e % n)).rem_euclid(n);
        self.exp[idx as usize]
    }

    /// Embeds an integer via reduction mod `p` (prime subfield).
    pub fn from_int(&self, n: i64) -> Gf {
        n.rem_euclid(self.p as i64) as Gf
    }

    /// Quadratic-residue symbol: 0 on zero, else parity of the discrete log.
    pub fn legendre(&self, a: Gf) -> i32 {
        assert!(self.p != 2, "legendre symbol needs odd characteristic");
        if a == 0 {
            0
        } else if self.log[a as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// A square root when one exists: halve the logarithm.  The returned root
    /// is the one with even logarithm, a stable choice per field instance.
    pub fn sqrt(&self, a: Gf) -> Option<Gf> {
        assert!(self.p != 2, "sqrt table path needs odd characteristic");
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        if l % 2 != 0 {
            return None;
        }
        let n = self.q - 1;
        let r = self.exp[(l / 2) as usize];
        // Normalize between the two roots r and -r: even log wins.
        let r_neg = self.neg(r);
        let pick = if self.log[r as usize] % 2 == 0 { r } else { r_neg };
        debug_assert_eq!(self.mul(pick, pick), a);
        debug_assert!(n % 2 == 0);
        Some(pick)
    }
}

impl std::fmt::Debug for GfField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GfField(q={}^{})", self.p, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = GfField::new(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), (a + b) % 5);
                assert_eq!(f.mul(a, b), (a * b) % 5);
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn legendre_matches_euler_criterion() {
        for (p, k) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let f = GfField::new(p, k).unwrap();
            let h = (f.q() as i64 - 1) / 2;
            for a in f.elements() {
                let euler = if a == 0 {
                    0
                } else if f.pow(a, h) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(f.legendre(a), euler, "q={} a={}", f.q(), a);
            }
        }
    }

    #[test]
    fn sqrt_roundtrip() {
        let f = GfField::new(3, 2).unwrap();
        let mut squares = 0;
        for a in f.elements() {
            match f.sqrt(a) {
                Some(r) => {
                    assert_eq!(f.mul(r, r), a);
                    squares += 1;
                }
                None => assert_eq!(f.legendre(a), -1),
            }
        }
        // zero plus (q-1)/2 nonzero squares
        assert_eq!(squares, 1 + (f.q() - 1) / 2);
    }

    #[test]
    fn extension_field_is_a_field() {
        let f = GfField::new(3, 3).unwrap();
        assert_eq!(f.q(), 27);
        // Associativity spot-check plus inverses for everything nonzero.
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        for a in 1..f.q() {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // Distributivity on a seeded sample.
        let mut s = 1u64;
        for _ in 0..200 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (s >> 16) as u32 % f.q();
            let b = (s >> 32) as u32 % f.q();
            let c = (s >> 48) as u32 % f.q();
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(GfField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(GfField::new(5, 0).unwrap_err(), FieldError::BadDegree);
    }
}
