//! Places and divisors.
//!
//! A [`Place`] is a closed point of the base curve together with its degree
//! and the sign of the quadratic twist character at it.  Places order by
//! (degree, id), which fixes every enumeration order in the crate.  A
//! [`Divisor`] is a finite formal Z-combination of places.

use std::collections::BTreeMap;

/// Stable identity of a place.
///
/// Finite places sit over a monic irreducible `p(x)`, identified by the
/// base-q code of its non-leading coefficients; `branch` distinguishes the
/// two places over a split prime (0/1), with 2 for inert and 3 for ramified.
/// The codes are compact and orderable, which is all the divisor maps need.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PlaceId {
    Finite { x_code: u64, branch: u8 },
    /// The two points over `x = infinity`; `plus` selects the branch where
    /// `y/x^(g+1)` expands with the canonical square root of the leading
    /// coefficient.
    Inf { plus: bool },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Place {
    /// Residue degree over the constant field.
    pub deg: u32,
    pub id: PlaceId,
    /// Twist character sign at this place, always +/-1 (the cover is etale).
    pub eta: i8,
}

impl Place {
    pub fn eta_pow(&self, n: i64) -> i32 {
        if self.eta == 1 || n % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Divisor {
    entries: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn single(place: Place, mult: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_place(place, mult);
        d
    }

    pub fn add_place(&mut self, place: Place, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.entries.entry(place).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.entries.remove(&place);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mult(&self, place: &Place) -> i64 {
        self.entries.get(place).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.entries.keys()
    }

    pub fn deg(&self) -> i64 {
        self.entries.iter().map(|(p, m)| p.deg as i64 * m).sum()
    }

    pub fn add(&self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, m) in rhs.iter() {
            out.add_place(*p, m);
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        Divisor { entries: self.entries.iter().map(|(p, m)| (*p, -m)).collect() }
    }

    pub fn sub(&self, rhs: &Divisor) -> Divisor {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor { entries: self.entries.iter().map(|(p, m)| (*p, k * m)).collect() }
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|&m| m >= 0)
    }

    /// Pointwise `self <= rhs`.
    pub fn leq(&self, rhs: &Divisor) -> bool {
        rhs.sub(self).is_effective()
    }

    /// Pointwise minimum (gcd of effective divisors).
    pub fn gcd(&self, rhs: &Divisor) -> Divisor {
        let mut out = Divisor::zero();
        for (p, m) in self.iter() {
            let o = rhs.mult(p).min(m);
            out.add_place(*p, o);
        }
        // Places only in rhs contribute min(0, m); places only in self were
        // handled as min(m, 0) above only when rhs lacks them... redo both
        // sides explicitly for negative multiplicities.
        for (p, m) in rhs.iter() {
            if self.mult(p) == 0 && m < 0 {
                out.add_place(*p, m);
            }
        }
        out
    }

    /// Character value eta(D) = prod eta(P)^{m_P}.
    pub fn eta(&self) -> i32 {
        let mut s = 1i32;
        for (p, m) in self.iter() {
            s *= p.eta_pow(m);
        }
        s
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<T: IntoIterator<Item = (Place, i64)>>(iter: T) -> Divisor {
        let mut d = Divisor::zero();
        for (p, m) in iter {
            d.add_place(p, m);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(deg: u32, code: u64, eta: i8) -> Place {
        Place { deg, id: PlaceId::Finite { x_code: code, branch: 2 }, eta }
    }

    #[test]
    fn degree_and_eta() {
        let p1 = pl(1, 0, 1);
        let p2 = pl(2, 5, -1);
        let d = Divisor::from_iter([(p1, 3), (p2, 2)]);
        assert_eq!(d.deg(), 7);
        assert_eq!(d.eta(), 1);
        let e = d.add(&Divisor::single(p2, 1));
        assert_eq!(e.eta(), -1);
        assert_eq!(e.deg(), 9);
    }

    #[test]
    fn ordering_is_degree_first() {
        let a = pl(1, 99, 1);
        let b = pl(2, 0, 1);
        assert!(a < b);
        let inf = Place { deg: 1, id: PlaceId::Inf { plus: true }, eta: 1 };
        assert!(a < inf, "finite before infinite at equal degree");
    }

    #[test]
    fn gcd_handles_mixed_signs() {
        let p = pl(1, 0, 1);
        let q = pl(1, 1, 1);
        let a = Divisor::from_iter([(p, 2), (q, -1)]);
        let b = Divisor::from_iter([(p, 1)]);
        let m = a.gcd(&b);
        assert_eq!(m.mult(&p), 1);
        assert_eq!(m.mult(&q), -1);
        assert!(Divisor::zero().is_effective());
    }
}
