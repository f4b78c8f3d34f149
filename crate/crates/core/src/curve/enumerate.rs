//! Brute-force enumeration of effective divisors.
//!
//! Used as the independent oracle side of several identities: degree-n
//! effective divisor counts against zeta coefficients, character-weighted
//! sums against the twist L-function, and the small strata sums in the
//! orbital layer.  Everything here is deliberately the dumb path.

use super::divisor::{Divisor, Place};

/// All effective divisors of degree exactly `n` supported on the given
/// places.  The place list must be complete through degree n for the result
/// to mean anything; duplicates never occur because places are consumed in
/// order.
pub fn effective_divisors(places: &[Place], n: u32) -> Vec<Divisor> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    recurse(places, n as i64, 0, &mut acc, &mut out);
    out
}

fn recurse(
    places: &[Place],
    left: i64,
    idx: usize,
    acc: &mut Vec<(Place, i64)>,
    out: &mut Vec<Divisor>,
) {
    if left == 0 {
        out.push(acc.iter().copied().collect());
        return;
    }
    if idx >= places.len() {
        return;
    }
    let p = places[idx];
    let max_mult = left / p.deg as i64;
    for mult in (0..=max_mult).rev() {
        if mult > 0 {
            acc.push((p, mult));
        }
        recurse(places, left - mult * p.deg as i64, idx + 1, acc, out);
        if mult > 0 {
            acc.pop();
        }
    }
}

/// `sum of eta(D)` over effective divisors of degree n: the degree-n Dirichlet
/// coefficient of the twist L-function, by raw enumeration.
pub fn eta_weighted_count(places: &[Place], n: u32) -> i64 {
    effective_divisors(places, n).iter().map(|d| d.eta() as i64).sum()
}

/// All effective divisors bounded by `d` (pointwise), including zero and `d`
/// itself; `d` must be effective.
pub fn subdivisors(d: &Divisor) -> Vec<Divisor> {
    assert!(d.is_effective());
    let entries: Vec<(Place, i64)> = d.iter().map(|(p, m)| (*p, m)).collect();
    let mut out = vec![Divisor::zero()];
    for (p, m) in entries {
        let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
        for base in &out {
            for mult in 0..=m {
                let mut e = base.clone();
                e.add_place(p, mult);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::divisor::PlaceId;

    fn pl(deg: u32, code: u64, eta: i8) -> Place {
        Place { deg, id: PlaceId::Finite { x_code: code, branch: 2 }, eta }
    }

    #[test]
    fn small_enumerations_by_hand() {
        // Two degree-1 places and one degree-2 place.
        let places = vec![pl(1, 0, 1), pl(1, 1, -1), pl(2, 0, 1)];
        assert_eq!(effective_divisors(&places, 0).len(), 1);
        assert_eq!(effective_divisors(&places, 1).len(), 2);
        // Degree 2: 2P, P+Q, 2Q, R -> 4.
        let twos = effective_divisors(&places, 2);
        assert_eq!(twos.len(), 4);
        for d in &twos {
            assert_eq!(d.deg(), 2);
            assert!(d.is_effective());
        }
        // eta weights: 2P -> +1, P+Q -> -1, 2Q -> +1, R -> +1.
        assert_eq!(eta_weighted_count(&places, 2), 2);
        // No duplicates.
        let mut seen = twos.clone();
        seen.dedup();
        assert_eq!(seen.len(), twos.len());
    }

    #[test]
    fn subdivisor_lattice() {
        let p = pl(1, 0, 1);
        let q = pl(2, 1, -1);
        let mut d = Divisor::zero();
        d.add_place(p, 2);
        d.add_place(q, 1);
        let subs = subdivisors(&d);
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|e| e.is_effective() && e.leq(&d)));
        assert!(subs.contains(&Divisor::zero()));
        assert!(subs.contains(&d));
    }
}
