//! Place tables: the view of a curve the zeta layer consumes.
//!
//! A [`PlaceTable`] is a complete list of places up to a degree bound, each
//! tagged with its character sign, together with the zeta numerators of the
//! base curve and its double cover and their quotient, the twist L-function.
//! Tables come from the geometric backend or from bare per-degree counts
//! ("synthetic" curves).  Synthetic data is validated eagerly: the implied
//! numerators must be integral, self-dual, satisfy the Riemann bound, the
//! quotient must truncate at degree 2g-2, and every supplied count must match
//! what the numerators predict.  Fabricated tables that correspond to no
//! geometrically connected cover are rejected here rather than producing
//! quietly divergent sums downstream.

use super::divisor::{Place, PlaceId};
use super::hyper::HyperCover;
use crate::arith::qpoly::{exp_series, series_inverse, weil_moduli_check, QPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("genus must be at least 2, got {0}")]
    SmallGenus(u32),
    #[error("split/inert tables must both reach degree 4g-2 = {0}")]
    InsufficientData(u32),
    #[error("requested degree {0} exceeds the table bound {1}")]
    DegreeOutOfRange(u32, u32),
    #[error("numerator of {0} is not a degree-{1} integral self-dual polynomial")]
    BadNumerator(&'static str, u32),
    #[error("numerator of {0} violates the root-modulus bound")]
    OffCircle(&'static str),
    #[error("cover zeta is not divisible by the base zeta")]
    NotDivisible,
    #[error("count at degree {0} disagrees with the zeta prediction")]
    InconsistentCount(u32),
    #[error("field size too large for extension counting")]
    FieldTooLarge,
}

#[derive(Clone, Debug)]
pub struct PlaceTable {
    q: u32,
    genus: u32,
    max_deg: u32,
    /// Complete through max_deg, sorted by (degree, id).
    places: Vec<Place>,
    p_x: QPoly,
    p_xprime: QPoly,
    l_eta: QPoly,
}

impl PlaceTable {
    /// Build from bare per-degree counts: `split[d-1]` places of degree d
    /// with eta +1 and `inert[d-1]` with eta -1.  Validates everything the
    /// counts imply.
    pub fn synthetic(q: u32, genus: u32, split: &[u64], inert: &[u64]) -> Result<PlaceTable, TableError> {
        if genus < 2 {
            return Err(TableError::SmallGenus(genus));
        }
        let need = 4 * genus - 2;
        let max_deg = split.len().min(inert.len()) as u32;
        if max_deg < need {
            return Err(TableError::InsufficientData(need));
        }
        let mut places = Vec::new();
        for d in 1..=max_deg {
            for j in 0..split[d as usize - 1] {
                places.push(Place { deg: d, id: PlaceId::Finite { x_code: j, branch: 0 }, eta: 1 });
            }
            for j in 0..inert[d as usize - 1] {
                places.push(Place { deg: d, id: PlaceId::Finite { x_code: j, branch: 2 }, eta: -1 });
            }
        }
        places.sort();
        let counts_x = counts_from_places(&places, max_deg);
        let counts_xp = cover_counts_from_places(&places, max_deg);
        let (p_x, p_xprime, l_eta) = numerators(q, genus, &counts_x, &counts_xp)?;
        Ok(PlaceTable { q, genus, max_deg, places, p_x, p_xprime, l_eta })
    }

    /// Materialize the table of a geometric backend.  Counts come from
    /// direct extension-field point counting, independent of the splitting
    /// rules that label the places.
    pub fn from_hyper(cover: &HyperCover, max_deg: u32) -> Result<PlaceTable, TableError> {
        let genus = cover.genus();
        let need = 4 * genus - 2;
        let places = cover.places_up_to(max_deg);
        let mut counts_x = Vec::new();
        let mut counts_xp = Vec::new();
        for m in 1..=need {
            counts_x.push(cover.count_points_x(m).map_err(|_| TableError::FieldTooLarge)? as i64);
            counts_xp.push(cover.count_points_xprime(m).map_err(|_| TableError::FieldTooLarge)? as i64);
        }
        let (p_x, p_xprime, l_eta) = numerators(cover.q(), genus, &counts_x, &counts_xp)?;
        Ok(PlaceTable { q: cover.q(), genus, max_deg, places, p_x, p_xprime, l_eta })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn cover_genus(&self) -> u32 {
        2 * self.genus - 1
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn places_up_to(&self, n: u32) -> Result<&[Place], TableError> {
        if n > self.max_deg {
            return Err(TableError::DegreeOutOfRange(n, self.max_deg));
        }
        let end = self.places.partition_point(|p| p.deg <= n);
        Ok(&self.places[..end])
    }

    pub fn places_of_degree(&self, d: u32) -> &[Place] {
        let lo = self.places.partition_point(|p| p.deg < d);
        let hi = self.places.partition_point(|p| p.deg <= d);
        &self.places[lo..hi]
    }

    /// Zeta numerator of the base curve, degree 2g.
    pub fn p_x(&self) -> &QPoly {
        &self.p_x
    }

    /// Zeta numerator of the cover, degree 2(2g-1).
    pub fn p_xprime(&self) -> &QPoly {
        &self.p_xprime
    }

    /// The twist L-function `P_{X'}/P_X`, degree 2g-2.
    pub fn l_eta(&self) -> &QPoly {
        &self.l_eta
    }
}

/// `N_m = sum over d | m of d * a_d` from a complete place list.
pub fn counts_from_places(places: &[Place], max_deg: u32) -> Vec<i64> {
    let mut a = vec![0i64; max_deg as usize + 1];
    for p in places {
        a[p.deg as usize] += 1;
    }
    (1..=max_deg)
        .map(|m| (1..=m).filter(|d| m % d == 0).map(|d| d as i64 * a[d as usize]).sum())
        .collect()
}

/// Counts of the double cover induced by the signs: a split place of degree d
/// carries two degree-d points, an inert one a single degree-2d point.
pub fn cover_counts_from_places(places: &[Place], max_deg: u32) -> Vec<i64> {
    let mut a = vec![0i64; max_deg as usize + 1];
    for p in places {
        if p.eta == 1 {
            a[p.deg as usize] += 2;
        } else if 2 * p.deg <= max_deg {
            a[2 * p.deg as usize] += 1;
        }
    }
    (1..=max_deg)
        .map(|m| (1..=m).filter(|d| m % d == 0).map(|d| d as i64 * a[d as usize]).sum())
        .collect()
}

/// Zeta numerator from point counts: `P = Z * (1-T)(1-qT)` with
/// `Z = exp(sum N_m T^m / m)`, cut at degree 2g.
pub(crate) fn numerator_from_counts(q: u32, genus: u32, counts: &[i64]) -> QPoly {
    let deg = 2 * genus as usize;
    assert!(counts.len() >= deg, "need counts through degree 2g");
    let mut logs = vec![BigRational::zero(); deg + 1];
    for m in 1..=deg {
        logs[m] = BigRational::new(BigInt::from(counts[m - 1]), BigInt::from(m as i64));
    }
    let z = exp_series(&logs, deg);
    let mut p = vec![BigRational::zero(); deg + 1];
    let qq = BigInt::from(q);
    for i in 0..=deg {
        // multiply by (1-T)(1-qT) = 1 - (q+1)T + qT^2
        let mut c = z[i].clone();
        if i >= 1 {
            c -= &z[i - 1] * BigRational::from(&qq + BigInt::one());
        }
        if i >= 2 {
            c += &z[i - 2] * BigRational::from(qq.clone());
        }
        p[i] = c;
    }
    QPoly::from_coeffs(p)
}

/// Validated numerators for the base and the cover, plus their quotient.
fn numerators(
    q: u32,
    genus: u32,
    counts_x: &[i64],
    counts_xp: &[i64],
) -> Result<(QPoly, QPoly, QPoly), TableError> {
    let g = genus;
    let gp = 2 * g - 1;
    let p_x = numerator_from_counts(q, g, counts_x);
    check_numerator(&p_x, q, g, "base curve")?;
    let p_xp = numerator_from_counts(q, gp, counts_xp);
    check_numerator(&p_xp, q, gp, "cover")?;
    let (l_eta, rem) = p_xp.divrem(&p_x);
    if !rem.is_zero() {
        return Err(TableError::NotDivisible);
    }
    // The quotient must itself be an integral self-dual polynomial of degree
    // exactly 2g-2 with unit constant term; this is the truncation statement.
    if l_eta.deg() != 2 * g as i64 - 2
        || !l_eta.coeff(0).is_one()
        || !is_integral(&l_eta)
        || crate::arith::qpoly::self_dual_sign(&l_eta, q, 1).is_none()
    {
        return Err(TableError::BadNumerator("twist quotient", 2 * g - 2));
    }
    if !weil_moduli_check(&l_eta, q) {
        return Err(TableError::OffCircle("twist quotient"));
    }
    // Every supplied count must match the zeta prediction, including the
    // degrees beyond what determined the numerators.
    let pred_x = predicted_counts(&p_x, q, counts_x.len());
    let pred_xp = predicted_counts(&p_xp, q, counts_xp.len());
    for m in 0..counts_x.len() {
        if pred_x[m] != BigRational::from(BigInt::from(counts_x[m])) {
            return Err(TableError::InconsistentCount(m as u32 + 1));
        }
    }
    for m in 0..counts_xp.len() {
        if pred_xp[m] != BigRational::from(BigInt::from(counts_xp[m])) {
            return Err(TableError::InconsistentCount(m as u32 + 1));
        }
    }
    Ok((p_x, p_xp, l_eta))
}

fn check_numerator(p: &QPoly, q: u32, genus: u32, what: &'static str) -> Result<(), TableError> {
    let deg = 2 * genus;
    let ok = p.deg() == deg as i64
        && p.coeff(0).is_one()
        && is_integral(p)
        && p.coeff(deg as usize) == BigRational::from(BigInt::from(q).pow(genus))
        && crate::arith::qpoly::self_dual_sign(p, q, 1) == Some(1);
    if !ok {
        return Err(TableError::BadNumerator(what, deg));
    }
    if !weil_moduli_check(p, q) {
        return Err(TableError::OffCircle(what));
    }
    Ok(())
}

fn is_integral(p: &QPoly) -> bool {
    p.coeffs().iter().all(|c| c.denom().is_one())
}

/// Counts implied by a numerator: `N_m = 1 + q^m + [T^m] (T P'/P)`.
fn predicted_counts(p: &QPoly, q: u32, n: usize) -> Vec<BigRational> {
    let inv = series_inverse(p, n);
    let dp = p.derivative();
    let mut out = Vec::with_capacity(n);
    let qb = BigInt::from(q);
    for m in 1..=n {
        // [T^m] of T * P'/P = [T^(m-1)] of P'/P
        let mut acc = BigRational::zero();
        for j in 0..m {
            let a = dp.coeff(j);
            if !a.is_zero() {
                acc += a * &inv[m - 1 - j];
            }
        }
        out.push(acc + BigRational::from(BigInt::one() + qb.pow(m as u32)));
    }
    out
}
