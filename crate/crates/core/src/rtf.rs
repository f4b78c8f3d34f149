//! Orbital sums over the diagonal-torus double cosets of PGL2, evaluated on
//! the divisor basis of the Hecke algebra.
//!
//! Every value here is an exact Laurent polynomial in `q^s` (a [`LaurentQ`],
//! key `m` holding the coefficient of `q^(m s)`).  A regular orbit is labelled
//! by a section `a` of O(D) through its zero divisors `Z_a = div(a) + D` and
//! `Z_b = div(a-1) + D`, and is evaluated by two routes that share no logic:
//! [`j_rs_moduli`] multiplies local splitting factors of the pair, while
//! [`j_rs_lattice`] walks the finite tree of lattice chains that fit the orbit
//! diagram.  Their agreement, term by term, is the conformance check the rest
//! of the crate leans on.  The degenerate orbits (invariant 0 or infinity)
//! have closed forms assembled from the eta L-polynomial, together with
//! truncated companions that re-count them by bounded divisor enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::laurent::LaurentQ;
use crate::arith::qpoly::normalized_taylor;
use crate::curve::divisor::{Divisor, Place};
use crate::curve::enumerate::{effective_divisors, subdivisors};
use crate::curve::hyper::{CurveFn, HyperCover};
use crate::curve::jacobian::Jacobian;
use crate::curve::synthetic::PlaceTable;
use crate::hecke::HeckeElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("function is not a section of the requested divisor")]
    NotASection,
    #[error("nilpotent sums need an effective divisor of positive degree")]
    DegenerateDivisor,
    #[error("degenerate orbit label; use the unit or nilpotent evaluators")]
    DegenerateOrbit,
    #[error("divisor degrees disagree; search bounds cannot be certified")]
    UnboundedSearch,
    #[error("test function divisor is not supported on the fiber over infinity")]
    UnsupportedDivisorShape,
    #[error("degree {0} is below the proven range for the direct intersection form")]
    DegreeTooSmall(i64),
    #[error("place table too shallow: need places up to degree {0}")]
    TableDepth(u32),
}

/// Which torus double coset an orbital input belongs to, through the
/// invariant u = 1 - 1/a of its source section.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitLabel {
    /// u outside {0, 1, infinity}: a regular semisimple coset.
    Regular,
    /// u = 0 (section a = 1); the cosets of {1, n+, n-}.
    Zero,
    /// u = infinity (section a = 0); the cosets of {w, w n+, w n-}.
    Infinity,
}

/// The two nilpotent directions at u = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilpotentBranch {
    Plus,
    Minus,
}

/// One orbit of the double-coset sum, in divisor form.
///
/// For a regular input coming from a section `a` of O(D), `z_a` and `z_b` are
/// the effective divisors of `a` and `a - 1` as sections; both have the same
/// degree as `base` and are linearly equivalent to it.  The degenerate labels
/// keep placeholder copies of `base` in the slot whose section vanishes.
#[derive(Clone, Debug)]
pub struct OrbitalInput {
    /// The Hecke divisor D.
    pub base: Divisor,
    /// div(a) + D.
    pub z_a: Divisor,
    /// div(a - 1) + D.
    pub z_b: Divisor,
    pub label: OrbitLabel,
    /// The section, when the input was built from one.
    pub section: Option<CurveFn>,
}

/// Full divisor sum of eta over the subdivisors of an effective `d`:
/// `sum_{0 <= e <= d} eta(e)`, carried out place by place.
///
/// A single inert place of odd multiplicity forces the value to zero, which
/// is what makes every orbital sum below vanish when eta(d) = -1.
pub fn sigma_eta(d: &Divisor) -> BigInt {
    let mut acc = BigInt::one();
    for (place, m) in d.iter() {
        let local: i64 = if place.eta_pow(1) == 1 {
            m + 1
        } else if m % 2 == 0 {
            1
        } else {
            0
        };
        acc *= local;
    }
    acc
}

/// `L(eta, sign * 2s)` as a Laurent polynomial: coefficient `c_n` of the eta
/// L-polynomial lands at key `-2 * sign * n`.
fn eta_series(table: &PlaceTable, sign: i64) -> LaurentQ {
    let mut out = LaurentQ::zero();
    for (n, c) in table.l_eta().coeffs().iter().enumerate() {
        out.add_term(-2 * sign * n as i64, c.clone());
    }
    out
}

/// Classifies a section of L(plus * inf+ + minus * inf-) as an orbital input.
pub fn orbital_input_at(
    cover: &HyperCover,
    plus: i64,
    minus: i64,
    a: &CurveFn,
) -> Result<OrbitalInput, OrbitError> {
    if plus < 0 || minus < 0 {
        return Err(OrbitError::NotASection);
    }
    let mut base = Divisor::single(cover.infinite_place(true), plus);
    base.add_place(cover.infinite_place(false), minus);

    if a.is_zero() {
        return Ok(OrbitalInput {
            z_a: base.clone(),
            z_b: base.clone(),
            base,
            label: OrbitLabel::Infinity,
            section: Some(a.clone()),
        });
    }
    let z_a = cover.principal_divisor(a).add(&base);
    if !z_a.is_effective() {
        return Err(OrbitError::NotASection);
    }
    if *a == CurveFn::one() {
        return Ok(OrbitalInput {
            z_a,
            z_b: base.clone(),
            base,
            label: OrbitLabel::Zero,
            section: Some(a.clone()),
        });
    }
    let minus_one = cover.fn_scale(&CurveFn::one(), cover.field().from_int(-1));
    let a_less_one = cover.fn_add(a, &minus_one);
    let z_b = cover.principal_divisor(&a_less_one).add(&base);
    debug_assert!(z_b.is_effective(), "a - 1 has the same poles as a");
    Ok(OrbitalInput { base, z_a, z_b, label: OrbitLabel::Regular, section: Some(a.clone()) })
}

/// The symmetric case: sections of L(m(inf+ + inf-)).
pub fn orbital_input(cover: &HyperCover, m: i64, a: &CurveFn) -> Result<OrbitalInput, OrbitError> {
    orbital_input_at(cover, m, m, a)
}

/// Orbital value of the unit test function on one orbit.
///
/// Constant sections away from {0, 1} give 1; the two degenerate labels give
/// `L(eta, 2s) + L(eta, -2s)`; a non-constant section gives 0 because the
/// invariant then leaves the constant field.  A section is constant exactly
/// when `z_a = z_b`, so the test needs no function arithmetic.
pub fn j_unit(table: &PlaceTable, input: &OrbitalInput) -> LaurentQ {
    match input.label {
        OrbitLabel::Zero | OrbitLabel::Infinity => {
            eta_series(table, 1).add(&eta_series(table, -1))
        }
        OrbitLabel::Regular => {
            if input.z_a == input.z_b {
                LaurentQ::one()
            } else {
                LaurentQ::zero()
            }
        }
    }
}

fn checked_nilpotent_divisor(d: &Divisor) -> Result<i64, OrbitError> {
    if !d.is_effective() || d.deg() == 0 {
        return Err(OrbitError::DegenerateDivisor);
    }
    Ok(d.deg())
}

/// Closed form of the nilpotent orbital sum for `h_D`:
/// `q^{-ds} L(eta,-2s) sigma_eta(D)` on the plus branch and
/// `q^{ds} L(eta,2s) sigma_eta(D)` on the minus branch.
pub fn j_nilpotent(
    table: &PlaceTable,
    d: &Divisor,
    branch: NilpotentBranch,
) -> Result<LaurentQ, OrbitError> {
    let deg = checked_nilpotent_divisor(d)?;
    let sigma = BigRational::from_integer(sigma_eta(d));
    let out = match branch {
        NilpotentBranch::Plus => eta_series(table, -1).shift(-deg),
        NilpotentBranch::Minus => eta_series(table, 1).shift(deg),
    };
    Ok(out.scale(&sigma))
}

/// Truncated companion of [`j_nilpotent`], re-counted from scratch.
///
/// The plus branch enumerates effective divisors of degree strictly below
/// d/2, the minus branch those of degree at most d/2; both carry the literal
/// subdivisor sum of eta over D rather than the product form.  The two
/// branches together recover `j_nilpotent(Plus) + j_nilpotent(Minus)` once
/// d/2 clears the degree of the eta L-polynomial, i.e. for d >= 4g - 3; below
/// that the cutoff genuinely drops terms and the companions disagree.
pub fn j_nilpotent_moduli(
    table: &PlaceTable,
    d: &Divisor,
    branch: NilpotentBranch,
) -> Result<LaurentQ, OrbitError> {
    let deg = checked_nilpotent_divisor(d)?;
    // strict < d/2 for Plus, <= d/2 for Minus
    let n_max = match branch {
        NilpotentBranch::Plus => (deg - 1).div_euclid(2),
        NilpotentBranch::Minus => deg.div_euclid(2),
    };
    let places = table
        .places_up_to(n_max.max(0) as u32)
        .map_err(|_| OrbitError::TableDepth(n_max.max(0) as u32))?;

    let mut subdivisor_sum = BigInt::zero();
    for e in subdivisors(d) {
        subdivisor_sum += e.eta();
    }

    let mut out = LaurentQ::zero();
    for n in 0..=n_max {
        let mut count = BigInt::zero();
        for e in effective_divisors(places, n as u32) {
            count += e.eta();
        }
        let key = match branch {
            NilpotentBranch::Plus => 2 * n - deg,
            NilpotentBranch::Minus => deg - 2 * n,
        };
        out.add_term(key, BigRational::from_integer(count));
    }
    Ok(out.scale(&BigRational::from_integer(subdivisor_sum)))
}

fn validate_regular(input: &OrbitalInput) -> Result<(), OrbitError> {
    if input.label != OrbitLabel::Regular {
        return Err(OrbitError::DegenerateOrbit);
    }
    if input.z_a.deg() != input.base.deg() || input.z_b.deg() != input.base.deg() {
        return Err(OrbitError::UnboundedSearch);
    }
    Ok(())
}

/// Regular orbital sum by local splitting factors.
///
/// The double sum over splittings `D11 + D22 = Z_a`, `D12 + D21 = Z_b` with
/// weight `eta(D11) eta(D12) q^{(2 deg D12 - d)s}` factors place by place:
/// the `Z_a` splittings contribute the scalar `sigma_eta(Z_a)` and each place
/// of `Z_b` an independent geometric factor in `q^{2s}`.
pub fn j_rs_moduli(input: &OrbitalInput) -> Result<LaurentQ, OrbitError> {
    validate_regular(input)?;
    if !input.z_a.is_effective() || !input.z_b.is_effective() {
        // no splittings at all
        return Ok(LaurentQ::zero());
    }
    let sigma = BigRational::from_integer(sigma_eta(&input.z_a));
    if sigma.is_zero() {
        return Ok(LaurentQ::zero());
    }
    let mut out = LaurentQ::monomial(0, sigma);
    for (place, m) in input.z_b.iter() {
        let mut local = LaurentQ::zero();
        for i in 0..=m {
            let w = BigRational::from_integer(BigInt::from(place.eta_pow(i)));
            local.add_term(2 * i * place.deg as i64, w);
        }
        out = out.mul(&local);
    }
    Ok(out.shift(-input.base.deg()))
}

/// Regular orbital sum by lattice chains.
///
/// With the first chain component pinned to O_X, a chain quadruple fitting
/// the orbit diagram is a pair of divisors (E2, E'1) subject to pointwise
/// bounds read off the four entries of the orbit matrix; the fourth divisor
/// is determined by the determinant.  Off the union of the supports of `z_a`
/// and `z_b` every bound pinches to zero, so the depth-first walk below is
/// finite with exactly `prod (z_a(v)+1)(z_b(v)+1)` leaves; each leaf
/// contributes `eta(E2)` at key `deg(E2 - E1 + E'2 - E'1)`.
///
/// When a class-group backend is supplied, inputs whose divisors are not
/// linearly equivalent to the base are sent to zero: no function has the
/// divisor the diagram would need, so no chain closes.
pub fn j_rs_lattice(
    input: &OrbitalInput,
    backend: Option<&Jacobian>,
) -> Result<LaurentQ, OrbitError> {
    validate_regular(input)?;
    if let Some(jac) = backend {
        let want = jac.class_of(&input.base);
        if jac.class_of(&input.z_a) != want || jac.class_of(&input.z_b) != want {
            return Ok(LaurentQ::zero());
        }
    }
    let mut spots: Vec<(Place, i64, i64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (place, m) in input.z_a.iter() {
        spots.push((*place, m, input.z_b.mult(place)));
        seen.insert(*place);
    }
    for (place, m) in input.z_b.iter() {
        if !seen.contains(place) {
            spots.push((*place, 0, m));
        }
    }

    let mut out = LaurentQ::zero();
    walk_chains(&spots, 0, 0, 1, &mut out);
    Ok(out)
}

fn walk_chains(spots: &[(Place, i64, i64)], idx: usize, key: i64, weight: i32, out: &mut LaurentQ) {
    if idx == spots.len() {
        out.add_term(key, BigRational::from_integer(BigInt::from(weight)));
        return;
    }
    let (place, za, zb) = spots[idx];
    // E'1(v) = x in [0, z_a(v)]; E2(v) = x - z_a(v) + t with t in [0, z_b(v)]
    // covers exactly the pointwise window the four entry conditions cut out.
    for x in 0..=za {
        for t in 0..=zb {
            let y = x - za + t;
            walk_chains(
                spots,
                idx + 1,
                key + (2 * t - za) * place.deg as i64,
                weight * place.eta_pow(y),
                out,
            );
        }
    }
}

/// The full double-coset sum for an infinity-supported Hecke element.
///
/// Each basis divisor D = a(inf+) + b(inf-) contributes one regular orbit per
/// section of O(D) away from {0, 1}, evaluated through the splitting route,
/// plus the degenerate cosets.  The u = 0 cosets carry the closed form
/// `sigma_eta(D)(q^{-ds} L(eta,-2s) + q^{ds} L(eta,2s))`; the u = infinity
/// cosets are booked at the same value, which the conjugation by w (it
/// identifies the two families up to `s -> -s`, and the form is symmetric)
/// and the unit-element derivative identities pin down.
pub fn j_global(
    cover: &HyperCover,
    table: &PlaceTable,
    f: &HeckeElement,
) -> Result<LaurentQ, OrbitError> {
    let inf_plus = cover.infinite_place(true);
    let inf_minus = cover.infinite_place(false);
    let mut total = LaurentQ::zero();
    for (divisor, coeff) in f.terms() {
        let plus = divisor.mult(&inf_plus);
        let minus = divisor.mult(&inf_minus);
        if plus < 0 || minus < 0 || divisor.deg() != plus + minus {
            return Err(OrbitError::UnsupportedDivisorShape);
        }
        let mut part = LaurentQ::zero();
        for a in cover.rr_span(plus, minus) {
            if a.is_zero() || a == CurveFn::one() {
                continue;
            }
            let input = orbital_input_at(cover, plus, minus, &a)?;
            part = part.add(&j_rs_moduli(&input)?);
        }
        let sigma = BigRational::from_integer(sigma_eta(divisor));
        let deg = divisor.deg();
        let degenerate = eta_series(table, -1)
            .shift(-deg)
            .add(&eta_series(table, 1).shift(deg))
            .scale(&(sigma * rat(2, 1)));
        part = part.add(&degenerate);
        total = total.add(&part.scale(coeff));
    }
    Ok(total)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Direct form of the r-th intersection number for one regular orbit:
/// `sum eta(D11) eta(D12) (d - 2 deg D12)^r` over the splitting pairs.
///
/// Only proven equal to the derivative of the orbital sum for
/// `d >= max(2g' - 1, 2g)`, so smaller degrees are refused rather than
/// extrapolated.
pub fn i_r_orbit(
    table: &PlaceTable,
    input: &OrbitalInput,
    r: u32,
) -> Result<BigRational, OrbitError> {
    validate_regular(input)?;
    let d = input.base.deg();
    let bound = (2 * table.cover_genus() as i64 - 1).max(2 * table.genus() as i64);
    if d < bound {
        return Err(OrbitError::DegreeTooSmall(d));
    }
    let mut acc = BigInt::zero();
    let splits_b = subdivisors(&input.z_b);
    for d11 in subdivisors(&input.z_a) {
        let w11 = d11.eta();
        for d12 in &splits_b {
            let w = BigInt::from(w11 * d12.eta());
            acc += w * BigInt::from(d - 2 * d12.deg()).pow(r);
        }
    }
    Ok(BigRational::from_integer(acc))
}

/// `(log q)^{-r}` times the r-th s-derivative of the full double-coset sum.
pub fn i_r_global(
    cover: &HyperCover,
    table: &PlaceTable,
    f: &HeckeElement,
    r: u32,
) -> Result<BigRational, OrbitError> {
    Ok(j_global(cover, table, f)?.normalized_derivative(r))
}

/// Self-intersection numbers of the degree-d cycle class, order by order:
/// `4 L(eta)(1) + q - 2` at r = 0, zero in every odd order, and
/// `2^{r+2} sum c_n n^r` in positive even orders, where `c_n` are the eta
/// L-polynomial coefficients.
pub fn hd_self_intersection(table: &PlaceTable, r: u32) -> BigRational {
    if r == 0 {
        let jac_ratio = table.l_eta().eval(&BigRational::one());
        return rat(4, 1) * jac_ratio + rat(table.q() as i64 - 2, 1);
    }
    if r % 2 == 1 {
        return BigRational::zero();
    }
    // normalized_taylor carries (-n)^r; r is even here.
    rat(2, 1).pow(r as i32 + 2) * normalized_taylor(table.l_eta(), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gf::GfField;
    use crate::arith::poly::Poly;
    use crate::curve::divisor::PlaceId;

    fn sample_cover() -> HyperCover {
        let field = GfField::new(3, 1).unwrap();
        let f1 = Poly::from_ints(&field, &[1, 0, 1]);
        let f2 = Poly::from_ints(&field, &[1, 0, 0, 0, 1]);
        HyperCover::new(field, f1, f2, 7).unwrap()
    }

    fn split_place(deg: u32, id: u64) -> Place {
        Place { deg, id: PlaceId::Finite { x_code: id, branch: 0 }, eta: 1 }
    }

    fn inert_place(deg: u32, id: u64) -> Place {
        Place { deg, id: PlaceId::Finite { x_code: id, branch: 2 }, eta: -1 }
    }

    fn fn_of_x(cover: &HyperCover, ints: &[i64]) -> CurveFn {
        CurveFn::from_x(Poly::from_ints(cover.field(), ints))
    }

    #[test]
    fn sigma_eta_multiplies_over_the_support() {
        let s = split_place(1, 0);
        let i = inert_place(1, 1);
        assert_eq!(sigma_eta(&Divisor::single(s, 1)), BigInt::from(2));
        assert_eq!(sigma_eta(&Divisor::single(s, 3)), BigInt::from(4));
        assert_eq!(sigma_eta(&Divisor::single(i, 1)), BigInt::zero());
        assert_eq!(sigma_eta(&Divisor::single(i, 2)), BigInt::one());
        let mut mixed = Divisor::single(s, 2);
        mixed.add_place(i, 2);
        assert_eq!(sigma_eta(&mixed), BigInt::from(3));
        mixed.add_place(i, 1);
        assert_eq!(sigma_eta(&mixed), BigInt::zero());
    }

    #[test]
    fn orbital_input_classifies_sections() {
        let cover = sample_cover();
        let zero = CurveFn { c: Poly::zero(), d: Poly::zero() };
        let inp = orbital_input(&cover, 3, &zero).unwrap();
        assert_eq!(inp.label, OrbitLabel::Infinity);

        let one = CurveFn::one();
        let inp = orbital_input(&cover, 3, &one).unwrap();
        assert_eq!(inp.label, OrbitLabel::Zero);
        assert_eq!(inp.z_a, inp.base);

        // x has a simple pole at both infinite places
        let x = fn_of_x(&cover, &[0, 1]);
        let inp = orbital_input(&cover, 3, &x).unwrap();
        assert_eq!(inp.label, OrbitLabel::Regular);
        assert_eq!(inp.base.deg(), 6);
        assert_eq!(inp.z_a.deg(), 6);
        assert_eq!(inp.z_b.deg(), 6);
        assert!(inp.z_a.is_effective() && inp.z_b.is_effective());

        // x^4 needs pole order 4 at infinity: not a section of 3(inf+ + inf-)
        let x4 = fn_of_x(&cover, &[0, 0, 0, 0, 1]);
        assert!(matches!(orbital_input(&cover, 3, &x4), Err(OrbitError::NotASection)));
    }

    #[test]
    fn unit_orbit_values_follow_the_three_cases() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();

        // q = 3 leaves a single constant section away from {0, 1}
        let two = fn_of_x(&cover, &[2]);
        let inp = orbital_input(&cover, 0, &two).unwrap();
        assert_eq!(inp.label, OrbitLabel::Regular);
        assert_eq!(j_unit(&table, &inp), LaurentQ::one());
        assert_eq!(j_rs_moduli(&inp).unwrap(), LaurentQ::one());
        assert_eq!(j_rs_lattice(&inp, None).unwrap(), LaurentQ::one());

        // l_eta = 1 + 3 T^2 here, so the degenerate value is 2 + 3 q^{4s} + 3 q^{-4s}
        let one_inp = orbital_input(&cover, 0, &CurveFn::one()).unwrap();
        let expect = LaurentQ::from_terms([
            (-4, rat(3, 1)),
            (0, rat(2, 1)),
            (4, rat(3, 1)),
        ]);
        assert_eq!(j_unit(&table, &one_inp), expect);

        // a non-constant section pushes the invariant out of the constants
        let x = fn_of_x(&cover, &[0, 1]);
        let reg = orbital_input(&cover, 3, &x).unwrap();
        assert_eq!(j_unit(&table, &reg), LaurentQ::zero());
    }

    #[test]
    fn nilpotent_degree_one_closed_forms() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let split = table
            .places_of_degree(1)
            .iter()
            .find(|p| p.eta_pow(1) == 1)
            .copied()
            .expect("a split place of degree 1");
        let inert = table
            .places_of_degree(1)
            .iter()
            .find(|p| p.eta_pow(1) == -1)
            .copied()
            .expect("an inert place of degree 1");

        // sigma = 2 for one split point: 2 q^{-s} (1 + 3 q^{4s}) here
        let d = Divisor::single(split, 1);
        let got = j_nilpotent(&table, &d, NilpotentBranch::Plus).unwrap();
        let expect = LaurentQ::from_terms([(-1, rat(2, 1)), (3, rat(6, 1))]);
        assert_eq!(got, expect);

        let d = Divisor::single(inert, 1);
        assert!(j_nilpotent(&table, &d, NilpotentBranch::Plus).unwrap().is_zero());
        assert!(j_nilpotent(&table, &d, NilpotentBranch::Minus).unwrap().is_zero());

        assert_eq!(
            j_nilpotent(&table, &Divisor::zero(), NilpotentBranch::Plus),
            Err(OrbitError::DegenerateDivisor)
        );
    }

    #[test]
    fn nilpotent_companions_match_from_degree_five() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let places = table.places_up_to(2).unwrap().to_vec();

        let mut checked = 0;
        for d in effective_divisors(&places, 5) {
            let closed = j_nilpotent(&table, &d, NilpotentBranch::Plus)
                .unwrap()
                .add(&j_nilpotent(&table, &d, NilpotentBranch::Minus).unwrap());
            let counted = j_nilpotent_moduli(&table, &d, NilpotentBranch::Plus)
                .unwrap()
                .add(&j_nilpotent_moduli(&table, &d, NilpotentBranch::Minus).unwrap());
            assert_eq!(closed, counted, "aggregate mismatch at {:?}", d);
            // the cutoffs are invisible branch by branch once d >= 5
            assert_eq!(
                j_nilpotent(&table, &d, NilpotentBranch::Plus).unwrap(),
                j_nilpotent_moduli(&table, &d, NilpotentBranch::Plus).unwrap(),
            );
            checked += 1;
            if checked >= 25 {
                break;
            }
        }
        assert!(checked >= 25);

        // at d = 4 the strict plus cutoff drops exactly the top L-coefficient
        let d4 = effective_divisors(&places, 4)
            .into_iter()
            .find(|d| sigma_eta(d) != BigInt::zero())
            .unwrap();
        let gap = j_nilpotent(&table, &d4, NilpotentBranch::Plus)
            .unwrap()
            .sub(&j_nilpotent_moduli(&table, &d4, NilpotentBranch::Plus).unwrap());
        let c2 = table.l_eta().coeff(2);
        let sigma = BigRational::from_integer(sigma_eta(&d4));
        assert_eq!(gap, LaurentQ::monomial(0, c2 * sigma));
    }

    #[test]
    fn dual_engines_agree_on_every_section() {
        let cover = sample_cover();
        let jac = Jacobian::new(sample_cover());
        let mut regular = 0;
        let mut overlapping = 0;
        for a in cover.rr_span(3, 3) {
            let input = match orbital_input(&cover, 3, &a) {
                Ok(inp) if inp.label == OrbitLabel::Regular => inp,
                _ => continue,
            };
            let moduli = j_rs_moduli(&input).unwrap();
            let lattice = j_rs_lattice(&input, Some(&jac)).unwrap();
            assert_eq!(moduli, lattice, "engines split on section {:?}", a);
            assert!(moduli.is_symmetric());
            let sigma_pair = sigma_eta(&input.z_a) * sigma_eta(&input.z_b);
            assert_eq!(
                moduli.normalized_derivative(0),
                BigRational::from_integer(sigma_pair)
            );
            if !input.z_a.gcd(&input.z_b).is_zero() {
                overlapping += 1;
            }
            regular += 1;
        }
        // all q^5 sections minus {0, 1}
        assert_eq!(regular, 241);
        // shared support happens (any section with pole order < 3 at
        // infinity), so the engines must not assume disjointness
        assert!(overlapping > 0);
    }

    #[test]
    fn lattice_vanishes_without_linear_equivalence() {
        let cover = sample_cover();
        let jac = Jacobian::new(sample_cover());
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let finite = table
            .places_of_degree(1)
            .iter()
            .find(|p| p.eta_pow(1) == 1)
            .copied()
            .unwrap();
        let mut base = Divisor::single(cover.infinite_place(true), 3);
        base.add_place(cover.infinite_place(false), 3);
        let want = jac.class_of(&base);
        let z = effective_divisors(table.places_up_to(1).unwrap(), 6)
            .into_iter()
            .find(|d| jac.class_of(d) != want && sigma_eta(d) != BigInt::zero())
            .expect("a degree-6 divisor outside the base class");
        let forged = OrbitalInput {
            base: base.clone(),
            z_a: z.clone(),
            z_b: z.clone(),
            label: OrbitLabel::Regular,
            section: None,
        };
        assert!(j_rs_lattice(&forged, Some(&jac)).unwrap().is_zero());
        // without the backend the formal count is visible and nonzero
        assert!(!j_rs_moduli(&forged).unwrap().is_zero());

        // degree bookkeeping failures are an input error, not a zero
        let short = OrbitalInput {
            base,
            z_a: Divisor::single(finite, 5),
            z_b: z,
            label: OrbitLabel::Regular,
            section: None,
        };
        assert_eq!(j_rs_moduli(&short), Err(OrbitError::UnboundedSearch));
        assert_eq!(j_rs_lattice(&short, None), Err(OrbitError::UnboundedSearch));
    }

    #[test]
    fn moduli_product_equals_literal_splitting_sum() {
        let cover = sample_cover();
        let mut checked = 0;
        for a in cover.rr_span(2, 2) {
            let input = match orbital_input(&cover, 2, &a) {
                Ok(inp) if inp.label == OrbitLabel::Regular => inp,
                _ => continue,
            };
            let mut literal = LaurentQ::zero();
            for d11 in subdivisors(&input.z_a) {
                for d12 in subdivisors(&input.z_b) {
                    let w = BigInt::from(d11.eta() * d12.eta());
                    literal.add_term(
                        2 * d12.deg() - input.base.deg(),
                        BigRational::from_integer(w),
                    );
                }
            }
            assert_eq!(literal, j_rs_moduli(&input).unwrap());
            checked += 1;
            if checked >= 12 {
                break;
            }
        }
        assert_eq!(checked, 12);
    }

    #[test]
    fn global_unit_value_and_derivatives() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let got = j_global(&cover, &table, &HeckeElement::unit()).unwrap();
        // (q - 2) + 2 L(eta,2s) + 2 L(eta,-2s) with l_eta = 1 + 3 T^2
        let expect = LaurentQ::from_terms([
            (-4, rat(6, 1)),
            (0, rat(5, 1)),
            (4, rat(6, 1)),
        ]);
        assert_eq!(got, expect);

        for r in 0..=7 {
            assert_eq!(
                got.normalized_derivative(r),
                hd_self_intersection(&table, r),
                "order {} self-intersection",
                r
            );
        }
        // frozen arithmetic for this fixture: c = [1, 0, 3]
        assert_eq!(hd_self_intersection(&table, 0), rat(17, 1));
        assert_eq!(hd_self_intersection(&table, 1), rat(0, 1));
        assert_eq!(hd_self_intersection(&table, 2), rat(192, 1));
        assert_eq!(hd_self_intersection(&table, 4), rat(3072, 1));
        assert_eq!(hd_self_intersection(&table, 6), rat(49152, 1));
    }

    #[test]
    fn global_sums_are_symmetric_for_infinity_support() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let ip = cover.infinite_place(true);
        let im = cover.infinite_place(false);

        // the verified kernel relation of the infinity-supported algebra
        let mut kernel = HeckeElement::basis(Divisor::single(ip, 3));
        kernel = kernel.add(&HeckeElement::basis(Divisor::single(im, 3)).scale(&rat(-1, 1)));
        kernel = kernel.add(&HeckeElement::basis(Divisor::single(ip, 1)).scale(&rat(-3, 1)));
        kernel = kernel.add(&HeckeElement::basis(Divisor::single(im, 1)).scale(&rat(3, 1)));
        let j = j_global(&cover, &table, &kernel).unwrap();
        assert!(j.is_symmetric());
        for r in [1u32, 3, 5, 7] {
            assert!(j.normalized_derivative(r).is_zero());
        }

        // symmetry is not specific to the kernel: a lone basis element has it
        // too, because each orbit value is mirrored into eta(D) times itself
        // and sigma_eta kills the eta(D) = -1 terms.
        let lone = HeckeElement::basis(Divisor::single(ip, 1));
        assert!(j_global(&cover, &table, &lone).unwrap().is_symmetric());

        // off-fiber divisors are refused
        let table_place = table
            .places_of_degree(1)
            .iter()
            .find(|p| p.eta_pow(1) == 1)
            .copied()
            .unwrap();
        let off = HeckeElement::basis(Divisor::single(table_place, 1));
        assert_eq!(
            j_global(&cover, &table, &off),
            Err(OrbitError::UnsupportedDivisorShape)
        );
    }

    #[test]
    fn direct_intersection_form_matches_derivatives() {
        let cover = sample_cover();
        let table = PlaceTable::from_hyper(&cover, 4).unwrap();
        let mut checked = 0;
        for a in cover.rr_span(3, 3) {
            let input = match orbital_input(&cover, 3, &a) {
                Ok(inp) if inp.label == OrbitLabel::Regular => inp,
                _ => continue,
            };
            let j = j_rs_moduli(&input).unwrap();
            for r in 0..=6 {
                let direct = i_r_orbit(&table, &input, r).unwrap();
                assert_eq!(direct, j.normalized_derivative(r));
                if r % 2 == 1 {
                    assert!(direct.is_zero());
                }
            }
            checked += 1;
            if checked >= 20 {
                break;
            }
        }
        assert_eq!(checked, 20);

        // degree 4 sits below the proven range and is refused
        let x = fn_of_x(&cover, &[0, 1]);
        let low = orbital_input(&cover, 2, &x).unwrap();
        assert_eq!(i_r_orbit(&table, &low, 2), Err(OrbitError::DegreeTooSmall(4)));
    }
}
