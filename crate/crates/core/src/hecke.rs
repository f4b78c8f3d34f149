//! The unramified Hecke algebra for PGL2 over the function field.
//!
//! Elements are finite Q-combinations of the basis {h_D} indexed by
//! effective divisors, with h_0 the unit; h_D factors as a tensor product
//! of local elements h_(n x) over the support of D.  Multiplication goes
//! through the normalized Satake transform into the group algebra Q[Div(X)]
//! and back by triangular elimination, which is exact.  On top sit the
//! involution iota on Q[Pic] and the Eisenstein map a_eis, whose kernel
//! intersected with a finite basis span is computed by exact rational
//! elimination.
//!
//! Orientation convention: the local coordinate t_x maps to +[x], so
//! Sat(h_x) = [x] + q_x [-x].  The opposite choice is conjugate under
//! iota and changes nothing downstream; this one reads better.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::linalg::rational_kernel;
use crate::curve::divisor::{Divisor, Place};
use crate::curve::enumerate::effective_divisors;
use crate::curve::jacobian::{Jacobian, PicClass};

/// Finite Q-combination of basis elements h_D, D effective.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct HeckeElement {
    terms: BTreeMap<Divisor, BigRational>,
}

impl HeckeElement {
    pub fn zero() -> HeckeElement {
        HeckeElement::default()
    }

    /// The unit 1_K = h_0.
    pub fn unit() -> HeckeElement {
        HeckeElement::basis(Divisor::zero())
    }

    pub fn basis(d: Divisor) -> HeckeElement {
        assert!(d.is_effective(), "Hecke basis divisors are effective");
        let mut e = HeckeElement::zero();
        e.add_term(d, BigRational::one());
        e
    }

    pub fn add_term(&mut self, d: Divisor, c: BigRational) {
        assert!(d.is_effective(), "Hecke basis divisors are effective");
        add_to(&mut self.terms, d, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Divisor, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> HeckeElement {
        if k.is_zero() {
            return HeckeElement::zero();
        }
        HeckeElement {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    /// Largest degree of a basis divisor in the support.
    pub fn support_degree(&self) -> i64 {
        self.terms.keys().map(|d| d.deg()).max().unwrap_or(0)
    }
}

/// Element of the group algebra Q[Div(X)]; divisors of arbitrary sign.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct DivAlgebraElement {
    terms: BTreeMap<Divisor, BigRational>,
}

impl DivAlgebraElement {
    pub fn zero() -> DivAlgebraElement {
        DivAlgebraElement::default()
    }

    pub fn unit() -> DivAlgebraElement {
        let mut e = DivAlgebraElement::zero();
        e.add_term(Divisor::zero(), BigRational::one());
        e
    }

    pub fn add_term(&mut self, d: Divisor, c: BigRational) {
        add_to(&mut self.terms, d, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Divisor, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &DivAlgebraElement) -> DivAlgebraElement {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> DivAlgebraElement {
        if k.is_zero() {
            return DivAlgebraElement::zero();
        }
        DivAlgebraElement {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    /// Convolution product: [D][E] = [D + E].
    pub fn mul(&self, rhs: &DivAlgebraElement) -> DivAlgebraElement {
        let mut out = DivAlgebraElement::zero();
        for (d, c) in self.terms() {
            for (e, k) in rhs.terms() {
                out.add_term(d.add(e), c * k);
            }
        }
        out
    }
}

/// Element of the group algebra Q[Pic_X(k)].
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct PicAlgebraElement {
    terms: BTreeMap<PicClass, BigRational>,
}

impl PicAlgebraElement {
    pub fn zero() -> PicAlgebraElement {
        PicAlgebraElement::default()
    }

    pub fn add_term(&mut self, l: PicClass, c: BigRational) {
        add_to(&mut self.terms, l, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PicClass, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &PicAlgebraElement) -> PicAlgebraElement {
        let mut out = self.clone();
        for (l, c) in rhs.terms() {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> PicAlgebraElement {
        if k.is_zero() {
            return PicAlgebraElement::zero();
        }
        PicAlgebraElement {
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c * k)).collect(),
        }
    }
}

fn add_to<K: Ord>(map: &mut BTreeMap<K, BigRational>, key: K, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn q_x(q: u32, x: &Place) -> BigInt {
    BigInt::from(q).pow(x.deg)
}

/// The normalized Satake transform: locally
/// Sat(h_(n x)) = sum over 0 <= i <= n of q_x^i [(n-2i) x],
/// tensored over the support of each basis divisor.  A ring homomorphism
/// whose image is invariant under [k x] -> q_x^k [-k x] place by place.
pub fn satake(q: u32, f: &HeckeElement) -> DivAlgebraElement {
    let mut out = DivAlgebraElement::zero();
    for (d, c) in f.terms() {
        let mut acc = DivAlgebraElement::unit();
        for (x, n) in d.iter() {
            let qx = q_x(q, x);
            let mut local = DivAlgebraElement::zero();
            let mut w = BigInt::one();
            for i in 0..=n {
                local.add_term(Divisor::single(*x, n - 2 * i), BigRational::from(w.clone()));
                w *= &qx;
            }
            acc = acc.mul(&local);
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// Inverse of [`satake`] on its image, by descending-degree triangular
/// elimination: every term of Sat(h_D) has component exponents bounded by
/// D in absolute value, so among effective-exponent terms of maximal
/// degree the coefficient is already the h-basis coefficient.
fn desatake(q: u32, e: &DivAlgebraElement) -> HeckeElement {
    let mut rem = e.clone();
    let mut out = HeckeElement::zero();
    while !rem.is_zero() {
        let lead = rem
            .terms()
            .filter(|(d, _)| d.is_effective())
            .max_by_key(|(d, _)| d.deg())
            .map(|(d, c)| (d.clone(), c.clone()))
            .expect("element escapes the Satake image");
        let (d, c) = lead;
        rem = rem.add(&satake(q, &HeckeElement::basis(d.clone())).scale(&-c.clone()));
        out.add_term(d, c);
    }
    out
}

/// Exact product in the Hecke algebra, computed through Satake and back.
pub fn hecke_mul(q: u32, f: &HeckeElement, g: &HeckeElement) -> HeckeElement {
    desatake(q, &satake(q, f).mul(&satake(q, g)))
}

/// The Eisenstein map: Satake followed by the divisor class map, landing
/// in Q[Pic].  Its image is iota-invariant term by term.
pub fn a_eis(jac: &Jacobian, f: &HeckeElement) -> PicAlgebraElement {
    let q = jac.cover().q();
    let mut out = PicAlgebraElement::zero();
    for (d, c) in satake(q, f).terms() {
        out.add_term(jac.class_of(d), c.clone());
    }
    out
}

/// The involution of Q[Pic]: a class L of degree n maps to q^n [-L].
/// Applying it twice multiplies each basis vector by q^n q^(-n) = 1.
pub fn iota_pic(jac: &Jacobian, e: &PicAlgebraElement) -> PicAlgebraElement {
    let q = BigInt::from(jac.cover().q());
    let mut out = PicAlgebraElement::zero();
    for (l, c) in e.terms() {
        let w = if l.degree >= 0 {
            BigRational::from(q.pow(l.degree as u32))
        } else {
            BigRational::new(BigInt::one(), q.pow((-l.degree) as u32))
        };
        out.add_term(jac.neg(l), c * w);
    }
    out
}

/// Convolution in Q[Pic], with class addition from the Jacobian.
pub fn pic_mul(jac: &Jacobian, a: &PicAlgebraElement, b: &PicAlgebraElement) -> PicAlgebraElement {
    let mut out = PicAlgebraElement::zero();
    for (l, c) in a.terms() {
        for (m, k) in b.terms() {
            out.add_term(jac.add(l, m), c * k);
        }
    }
    out
}

/// Basis of ker(a_eis) intersected with the span of {h_D} for the given
/// divisor list.  Exact rational elimination; output vectors are scaled to
/// coprime integers with a positive leading coefficient, ordered by the
/// position of their leading divisor, so the basis is deterministic.
pub fn eis_kernel_for(jac: &Jacobian, divisors: &[Divisor]) -> Vec<HeckeElement> {
    let mut cols: BTreeMap<PicClass, usize> = BTreeMap::new();
    let images: Vec<PicAlgebraElement> = divisors
        .iter()
        .map(|d| a_eis(jac, &HeckeElement::basis(d.clone())))
        .collect();
    for img in &images {
        for (l, _) in img.terms() {
            let next = cols.len();
            cols.entry(l.clone()).or_insert(next);
        }
    }
    // Equations indexed by class: sum over divisors of x_D * coeff = 0.
    let mut rows = vec![vec![BigRational::zero(); divisors.len()]; cols.len()];
    for (j, img) in images.iter().enumerate() {
        for (l, c) in img.terms() {
            rows[cols[l]][j] = c.clone();
        }
    }
    rational_kernel(&rows, divisors.len())
        .into_iter()
        .map(|v| {
            let mut den = BigInt::one();
            for c in &v {
                den = num_integer::Integer::lcm(&den, c.denom());
            }
            let ints: Vec<BigInt> = v.iter().map(|c| c * &den).map(|c| c.to_integer()).collect();
            let mut gcd = BigInt::zero();
            for c in &ints {
                gcd = num_integer::Integer::gcd(&gcd, c);
            }
            let lead_neg = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c < &BigInt::zero());
            let mut f = HeckeElement::zero();
            for (d, c) in divisors.iter().zip(&ints) {
                let mut c = c / &gcd;
                if lead_neg {
                    c = -c;
                }
                f.add_term(d.clone(), BigRational::from(c));
            }
            f
        })
        .collect()
}

/// [`eis_kernel_for`] over every effective divisor of degree at most n,
/// built from a place list that must be complete through degree n.
pub fn eis_kernel_basis(jac: &Jacobian, places: &[Place], n: u32) -> Vec<HeckeElement> {
    let mut divisors = Vec::new();
    for m in 0..=n {
        divisors.extend(effective_divisors(places, m));
    }
    eis_kernel_for(jac, &divisors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gf::GfField;
    use crate::arith::laurent::rat;
    use crate::arith::poly::Poly;
    use crate::curve::hyper::HyperCover;
    use crate::curve::synthetic::PlaceTable;

    fn sample() -> (Jacobian, PlaceTable) {
        let f = GfField::new(3, 1).unwrap();
        let f1 = Poly::from_ints(&f, &[1, 0, 1]);
        let f2 = Poly::from_ints(&f, &[1, 0, 0, 0, 1]);
        let cover = HyperCover::new(f, f1, f2, 7).unwrap();
        let table = PlaceTable::from_hyper(&cover, 6).unwrap();
        (Jacobian::new(cover), table)
    }

    fn h(d: Divisor) -> HeckeElement {
        HeckeElement::basis(d)
    }

    fn nx(x: &Place, n: i64) -> Divisor {
        Divisor::single(*x, n)
    }

    #[test]
    fn satake_local_expansions() {
        let (_, t) = sample();
        let q = t.q();
        assert_eq!(satake(q, &HeckeElement::unit()), DivAlgebraElement::unit());
        for x in t.places_up_to(2).unwrap() {
            let qx = BigRational::from(q_x(q, x));
            let s1 = satake(q, &h(nx(x, 1)));
            let mut want = DivAlgebraElement::zero();
            want.add_term(nx(x, 1), rat(1, 1));
            want.add_term(nx(x, -1), qx.clone());
            assert_eq!(s1, want);
            let s2 = satake(q, &h(nx(x, 2)));
            let mut want = DivAlgebraElement::zero();
            want.add_term(nx(x, 2), rat(1, 1));
            want.add_term(Divisor::zero(), qx.clone());
            want.add_term(nx(x, -2), &qx * &qx);
            assert_eq!(s2, want);
        }
    }

    #[test]
    fn satake_image_is_inversion_invariant() {
        let (_, t) = sample();
        let q = t.q();
        let places = t.places_up_to(2).unwrap();
        let mut d = Divisor::zero();
        d.add_place(places[0], 2);
        d.add_place(places[places.len() - 1], 1);
        let image = satake(q, &h(d));
        // substitute [k x] -> q_x^k [-k x] at every place and compare
        let mut flipped = DivAlgebraElement::zero();
        for (e, c) in image.terms() {
            let mut w = c.clone();
            for (x, k) in e.iter() {
                let qx = BigRational::from(q_x(q, x));
                if k >= 0 {
                    for _ in 0..k {
                        w *= &qx;
                    }
                } else {
                    for _ in 0..(-k) {
                        w /= &qx;
                    }
                }
            }
            flipped.add_term(e.neg(), w);
        }
        assert_eq!(flipped, image);
    }

    #[test]
    fn multiplication_satisfies_the_local_recursion() {
        let (_, t) = sample();
        let q = t.q();
        for x in t.places_up_to(2).unwrap() {
            let qx = BigRational::from(q_x(q, x));
            // h_x h_x = h_2x + q_x h_0
            let got = hecke_mul(q, &h(nx(x, 1)), &h(nx(x, 1)));
            let want = h(nx(x, 2)).add(&HeckeElement::unit().scale(&qx));
            assert_eq!(got, want);
            // h_x h_nx = h_(n+1)x + q_x h_(n-1)x
            for n in 2..=6 {
                let got = hecke_mul(q, &h(nx(x, 1)), &h(nx(x, n)));
                let want = h(nx(x, n + 1)).add(&h(nx(x, n - 1)).scale(&qx));
                assert_eq!(got, want, "recursion at n = {n}");
            }
        }
        // disjoint supports tensor: h_x h_y = h_(x+y)
        let places = t.places_up_to(2).unwrap();
        let (x, y) = (places[0], places[places.len() - 1]);
        let got = hecke_mul(q, &h(nx(&x, 1)), &h(nx(&y, 1)));
        assert_eq!(got, h(nx(&x, 1).add(&nx(&y, 1))));
    }

    #[test]
    fn multiplication_is_commutative_and_associative() {
        let (_, t) = sample();
        let q = t.q();
        let places = t.places_up_to(2).unwrap();
        let f = h(nx(&places[0], 2)).add(&h(nx(&places[1], 1)).scale(&rat(3, 2)));
        let g = h(nx(&places[0], 1)).add(&HeckeElement::unit().scale(&rat(-1, 5)));
        let e = h(nx(&places[2], 1));
        assert_eq!(hecke_mul(q, &f, &g), hecke_mul(q, &g, &f));
        let fg_e = hecke_mul(q, &hecke_mul(q, &f, &g), &e);
        let f_ge = hecke_mul(q, &f, &hecke_mul(q, &g, &e));
        assert_eq!(fg_e, f_ge);
        // Satake is a ring homomorphism through the product
        assert_eq!(
            satake(q, &hecke_mul(q, &f, &g)),
            satake(q, &f).mul(&satake(q, &g))
        );
    }

    #[test]
    fn a_eis_lands_in_the_invariants() {
        let (jac, t) = sample();
        let q = t.q();
        let places = t.places_up_to(2).unwrap();
        let f = h(nx(&places[0], 1))
            .add(&h(nx(&places[3], 2)).scale(&rat(2, 7)))
            .add(&HeckeElement::unit());
        let img = a_eis(&jac, &f);
        assert_eq!(iota_pic(&jac, &img), img);
        // homomorphism on a product of distinct places
        let (x, y) = (places[1], places[2]);
        let prod = a_eis(&jac, &hecke_mul(q, &h(nx(&x, 1)), &h(nx(&y, 1))));
        let split = pic_mul(&jac, &a_eis(&jac, &h(nx(&x, 1))), &a_eis(&jac, &h(nx(&y, 1))));
        assert_eq!(prod, split);
    }

    #[test]
    fn iota_is_an_involution() {
        let (jac, t) = sample();
        let places = t.places_up_to(2).unwrap();
        let mut e = PicAlgebraElement::zero();
        e.add_term(jac.class_of(&nx(&places[0], 1)), rat(2, 3));
        e.add_term(jac.class_of(&nx(&places[4], -2)), rat(-1, 1));
        e.add_term(jac.identity(0), rat(5, 1));
        assert_eq!(iota_pic(&jac, &iota_pic(&jac, &e)), e);
        let unit = {
            let mut u = PicAlgebraElement::zero();
            u.add_term(jac.identity(0), rat(1, 1));
            u
        };
        assert_eq!(iota_pic(&jac, &unit), unit);
    }

    #[test]
    fn infinity_supported_kernel_contains_the_delta_relation() {
        let (jac, _) = sample();
        let q = jac.cover().q();
        let inf_plus = jac.cover().infinite_place(true);
        let inf_minus = jac.cover().infinite_place(false);
        // delta = class(inf+ - inf-) has order 3 on this curve, which makes
        // h_(3 inf+) - h_(3 inf-) - q h_(inf+) + q h_(inf-) Eisenstein-null.
        assert_eq!(jac.delta_order(), 3);
        let mut f = HeckeElement::zero();
        f.add_term(nx(&inf_plus, 3), rat(1, 1));
        f.add_term(nx(&inf_minus, 3), rat(-1, 1));
        f.add_term(nx(&inf_plus, 1), rat(-(q as i64), 1));
        f.add_term(nx(&inf_minus, 1), rat(q as i64, 1));
        assert!(a_eis(&jac, &f).is_zero());
        // the restricted kernel finds it: span of h_(a inf+ + b inf-), a+b <= 3
        let mut divisors = Vec::new();
        for a in 0..=3i64 {
            for b in 0..=(3 - a) {
                divisors.push(nx(&inf_plus, a).add(&nx(&inf_minus, b)));
            }
        }
        let kernel = eis_kernel_for(&jac, &divisors);
        assert!(!kernel.is_empty());
        for f in &kernel {
            assert!(a_eis(&jac, f).is_zero());
        }
    }

    #[test]
    fn kernel_elements_generate_an_ideal() {
        let (jac, t) = sample();
        let q = t.q();
        // empirically the full kernel first appears at span degree 3 here
        let places: Vec<Place> = t.places_up_to(3).unwrap().to_vec();
        let kernel = eis_kernel_basis(&jac, &places, 3);
        assert_eq!(kernel.len(), 80);
        for f in &kernel {
            assert!(a_eis(&jac, f).is_zero());
        }
        for f in kernel.iter().take(10) {
            let shifted = hecke_mul(q, &h(nx(&places[0], 1)), f);
            assert!(a_eis(&jac, &shifted).is_zero(), "kernel is not an ideal");
        }
    }
}
