//! Hyperelliptic double-cover backend.
//!
//! The base curve is the smooth model of `y^2 = f(x)` over `F_q` (q odd) with
//! `f = f1*f2` squarefree of degree `2g+2` and square leading coefficient,
//! hence genus g with two rational points over `x = infinity`.  Adjoining a
//! square root of `f1` gives an everywhere-unramified double cover, and `eta`
//! is the quadratic character cut out by it: every place of the base carries
//! a sign, computed here from residue symbols of `f1` and `f2`.
//!
//! The other half of this file is the valuation engine: places are explicit
//! enough that any function `c(x) + d(x)y` gets an exact principal divisor,
//! via Hensel lifting at split places, norm valuations at inert ones, parity
//! splitting at Weierstrass places, and Laurent expansions at infinity.

use super::divisor::{Divisor, Place, PlaceId};
use crate::arith::factor::factor;
use crate::arith::gf::{FieldError, Gf, GfField};
use crate::arith::poly::{inv_mod, legendre_mod, poly_code, poly_from_code, sqrt_mod, Poly};
use crate::arith::linalg::gf_kernel;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("base field must have odd characteristic")]
    EvenCharacteristic,
    #[error("each factor must be nonconstant of even degree, got degree {0}")]
    BadFactorDegree(i64),
    #[error("f1*f2 must have even degree 2g+2 with g >= 2, got {0}")]
    WrongTotalDegree(i64),
    #[error("f1*f2 must be squarefree")]
    NotSquarefree,
    #[error("leading coefficient of f1*f2 must be a square")]
    InseparableInfinity,
}

/// A function `c(x) + d(x)*y` on the curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveFn {
    pub c: Poly,
    pub d: Poly,
}

impl CurveFn {
    pub fn from_x(c: Poly) -> CurveFn {
        CurveFn { c, d: Poly::zero() }
    }

    pub fn y() -> CurveFn {
        CurveFn { c: Poly::zero(), d: Poly::one() }
    }

    pub fn one() -> CurveFn {
        CurveFn::from_x(Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct HyperCover {
    field: GfField,
    f1: Poly,
    f2: Poly,
    f: Poly,
    genus: u32,
    /// Canonical square root of `lc(f)`, fixing the `+` branch at infinity.
    sqrt_lc: Gf,
    /// eta at both infinite places: the residue symbol of `lc(f1)`.
    eps: i8,
    seed: u64,
}

impl HyperCover {
    pub fn new(field: GfField, f1: Poly, f2: Poly, seed: u64) -> Result<HyperCover, ModelError> {
        if field.p() == 2 {
            return Err(ModelError::EvenCharacteristic);
        }
        for part in [&f1, &f2] {
            if part.deg() < 2 || part.deg() % 2 != 0 {
                return Err(ModelError::BadFactorDegree(part.deg()));
            }
        }
        let f = f1.mul(&field, &f2);
        if f.deg() < 6 || f.deg() % 2 != 0 {
            return Err(ModelError::WrongTotalDegree(f.deg()));
        }
        let genus = (f.deg() as u32 - 2) / 2;
        if !f.is_squarefree(&field) {
            return Err(ModelError::NotSquarefree);
        }
        let sqrt_lc = match field.sqrt(f.lc()) {
            Some(r) => r,
            None => return Err(ModelError::InseparableInfinity),
        };
        let eps = field.legendre(f1.lc()) as i8;
        Ok(HyperCover { field, f1, f2, f, genus, sqrt_lc, eps, seed })
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn f1(&self) -> &Poly {
        &self.f1
    }

    pub fn f2(&self) -> &Poly {
        &self.f2
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn cover_genus(&self) -> u32 {
        2 * self.genus - 1
    }

    /// eta at the infinite places.
    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn infinite_place(&self, plus: bool) -> Place {
        Place { deg: 1, id: PlaceId::Inf { plus }, eta: self.eps }
    }

    pub fn canonical_divisor(&self) -> Divisor {
        let mut k = Divisor::zero();
        k.add_place(self.infinite_place(true), (self.genus() - 1) as i64);
        k.add_place(self.infinite_place(false), (self.genus() - 1) as i64);
        k
    }

    /// The monic irreducible under a finite place.
    pub fn place_prime(&self, place: &Place) -> Poly {
        match place.id {
            PlaceId::Inf { .. } => panic!("infinite place has no finite prime"),
            PlaceId::Finite { x_code, branch } => {
                let pdeg = if branch == 2 { place.deg / 2 } else { place.deg };
                poly_from_code(&self.field, x_code, pdeg + 1)
            }
        }
    }

    /// The canonical square root of `f` modulo a split prime; branch 0 is the
    /// place where `y` reduces to it, branch 1 where `y` reduces to its
    /// negative.
    pub fn split_root(&self, p: &Poly) -> Poly {
        sqrt_mod(&self.field, &self.f.rem(&self.field, p), p)
            .expect("split_root called at a non-split prime")
    }

    /// The places over a monic irreducible `p(x)`, in branch order.
    pub fn places_over(&self, p: &Poly) -> Vec<Place> {
        let fd = &self.field;
        let e = p.deg() as u32;
        let code = poly_code(fd, p);
        if self.f1.rem(fd, p).is_zero() {
            let eta = legendre_mod(fd, &self.f2, p) as i8;
            assert!(eta != 0, "f1 and f2 share the root of {p:?}");
            return vec![Place { deg: e, id: PlaceId::Finite { x_code: code, branch: 3 }, eta }];
        }
        if self.f2.rem(fd, p).is_zero() {
            let eta = legendre_mod(fd, &self.f1, p) as i8;
            assert!(eta != 0);
            return vec![Place { deg: e, id: PlaceId::Finite { x_code: code, branch: 3 }, eta }];
        }
        match legendre_mod(fd, &self.f, p) {
            1 => {
                let eta = legendre_mod(fd, &self.f1, p) as i8;
                (0..2)
                    .map(|branch| Place { deg: e, id: PlaceId::Finite { x_code: code, branch }, eta })
                    .collect()
            }
            -1 => {
                vec![Place { deg: 2 * e, id: PlaceId::Finite { x_code: code, branch: 2 }, eta: 1 }]
            }
            _ => unreachable!("p divides f but neither factor"),
        }
    }

    /// All places of degree at most `max_deg`, sorted by (degree, id).
    pub fn places_up_to(&self, max_deg: u32) -> Vec<Place> {
        let mut out = vec![self.infinite_place(true), self.infinite_place(false)];
        for e in 1..=max_deg {
            for p in crate::arith::factor::monic_irreducibles(&self.field, e) {
                for place in self.places_over(&p) {
                    if place.deg <= max_deg {
                        out.push(place);
                    }
                }
            }
        }
        out.sort();
        out
    }

    // ---- function arithmetic ----

    pub fn fn_add(&self, a: &CurveFn, b: &CurveFn) -> CurveFn {
        CurveFn { c: a.c.add(&self.field, &b.c), d: a.d.add(&self.field, &b.d) }
    }

    pub fn fn_scale(&self, a: &CurveFn, k: Gf) -> CurveFn {
        CurveFn { c: a.c.mul_scalar(&self.field, k), d: a.d.mul_scalar(&self.field, k) }
    }

    /// `(c1 + d1 y)(c2 + d2 y)` with `y^2` folded back to `f`.
    pub fn fn_mul(&self, a: &CurveFn, b: &CurveFn) -> CurveFn {
        let fd = &self.field;
        let c = a.c.mul(fd, &b.c).add(fd, &a.d.mul(fd, &b.d).mul(fd, &self.f));
        let d = a.c.mul(fd, &b.d).add(fd, &a.d.mul(fd, &b.c));
        CurveFn { c, d }
    }

    /// Norm to `F_q(x)`: `c^2 - d^2 f`.
    pub fn fn_norm(&self, h: &CurveFn) -> Poly {
        let fd = &self.field;
        h.c.mul(fd, &h.c).sub(fd, &h.d.mul(fd, &h.d).mul(fd, &self.f))
    }

    // ---- valuations ----

    /// Valuation of `h` at one place.  Cost scales with the norm degree; for
    /// a full divisor prefer [`HyperCover::principal_divisor`].
    pub fn valuation(&self, h: &CurveFn, place: &Place) -> i64 {
        assert!(!h.is_zero());
        match place.id {
            PlaceId::Inf { plus } => self.val_infinite(h, plus),
            PlaceId::Finite { branch, .. } => {
                let p = self.place_prime(place);
                match branch {
                    0 | 1 => {
                        let (v0, v1) = self.split_valuations(h, &p);
                        if branch == 0 {
                            v0
                        } else {
                            v1
                        }
                    }
                    2 => self.inert_valuation(h, &p),
                    _ => self.ramified_valuation(h, &p),
                }
            }
        }
    }

    /// Valuations at the two places over a split prime, in branch order.
    fn split_valuations(&self, h: &CurveFn, p: &Poly) -> (i64, i64) {
        let fd = &self.field;
        if h.d.is_zero() {
            let v = h.c.valuation(fd, p) as i64;
            return (v, v);
        }
        if h.c.is_zero() {
            // y is a unit at split places.
            let v = h.d.valuation(fd, p) as i64;
            return (v, v);
        }
        let norm = self.fn_norm(h);
        assert!(!norm.is_zero());
        let nv = norm.valuation(fd, p) as i64;
        if nv == 0 {
            return (0, 0);
        }
        // Lift the branch-0 root to modulus p^(nv+1); both valuations are at
        // most nv, so they are read off exactly from the residues.
        let kk = (nv + 1) as u32;
        let (root, pk) = self.lift_root(p, kk);
        let droot = h.d.mul(fd, &root);
        let a0 = h.c.add(fd, &droot).rem(fd, &pk);
        let a1 = h.c.sub(fd, &droot).rem(fd, &pk);
        let v_of = |a: &Poly| -> i64 {
            assert!(!a.is_zero(), "valuation exceeds its certified window");
            let v = a.valuation(fd, p) as i64;
            assert!(v <= nv);
            v
        };
        let (v0, v1) = (v_of(&a0), v_of(&a1));
        assert_eq!(v0 + v1, nv, "split valuations must account for the norm");
        (v0, v1)
    }

    /// Newton-lift the canonical square root of `f` mod `p` to mod `p^k`.
    /// Returns the lift and `p^k`.
    fn lift_root(&self, p: &Poly, k: u32) -> (Poly, Poly) {
        let fd = &self.field;
        let mut root = self.split_root(p);
        let mut prec = 1u32;
        let mut pk = p.clone();
        while prec < k {
            prec = (2 * prec).min(k);
            pk = Poly::one();
            for _ in 0..prec {
                pk = pk.mul(fd, p);
            }
            // root <- root - (root^2 - f) / (2 root)
            let err = root.mul(fd, &root).sub(fd, &self.f).rem(fd, &pk);
            let two_root = root.add(fd, &root);
            let inv = inv_mod(fd, &two_root, &pk).expect("2y is a unit at a split prime");
            root = root.sub(fd, &err.mul(fd, &inv)).rem(fd, &pk);
        }
        debug_assert!(root.mul(fd, &root).sub(fd, &self.f).rem(fd, &pk).is_zero());
        (root, pk)
    }

    fn inert_valuation(&self, h: &CurveFn, p: &Poly) -> i64 {
        let norm = self.fn_norm(h);
        assert!(!norm.is_zero());
        let nv = norm.valuation(&self.field, p) as i64;
        assert!(nv % 2 == 0, "odd norm valuation at an inert prime");
        nv / 2
    }

    fn ramified_valuation(&self, h: &CurveFn, p: &Poly) -> i64 {
        // v(x-part) is even, v(y-part) odd: the minimum is exact.
        let fd = &self.field;
        let vc = if h.c.is_zero() { None } else { Some(2 * h.c.valuation(fd, p) as i64) };
        let vd = if h.d.is_zero() { None } else { Some(2 * h.d.valuation(fd, p) as i64 + 1) };
        match (vc, vd) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        }
    }

    /// Valuation at an infinite place via the Laurent expansion in t = 1/x.
    fn val_infinite(&self, h: &CurveFn, plus: bool) -> i64 {
        let (m, coeffs) = self.bracket_at_infinity(h, plus, None);
        match coeffs.iter().position(|&a| a != 0) {
            Some(i) => i as i64 - m,
            None => panic!("no nonzero coefficient within the guaranteed window"),
        }
    }

    /// Expansion bookkeeping at infinity: writes `h = t^(-M) B(t)` with
    /// `M = max(deg c, deg d + g + 1)` and returns `(M, coefficients of B)`.
    /// The order of B is at most 2M, so the default window always finds it.
    fn bracket_at_infinity(&self, h: &CurveFn, plus: bool, len: Option<usize>) -> (i64, Vec<Gf>) {
        assert!(!h.is_zero());
        let fd = &self.field;
        let gp1 = self.genus as i64 + 1;
        let dc = h.c.deg();
        let dd = h.d.deg();
        let m = dc.max(if dd >= 0 { dd + gp1 } else { i64::MIN });
        let n = len.unwrap_or((2 * m + 2).max(2) as usize);
        let mut out = vec![0 as Gf; n];
        if dc >= 0 {
            let shift = (m - dc) as usize;
            for (j, &a) in reversed(&h.c).iter().enumerate() {
                if shift + j < n {
                    out[shift + j] = fd.add(out[shift + j], a);
                }
            }
        }
        if dd >= 0 {
            let shift = (m - dd - gp1) as usize;
            let s = self.infinity_root_series(n);
            let prod = series_mul(fd, &reversed(&h.d), &s, n);
            for (j, &a) in prod.iter().enumerate() {
                if shift + j < n {
                    let signed = if plus { a } else { fd.neg(a) };
                    out[shift + j] = fd.add(out[shift + j], signed);
                }
            }
        }
        (m, out)
    }

    /// The branch of `sqrt(t^(2g+2) f(1/t))` whose constant term is the
    /// canonical square root of `lc(f)`; `y = t^(-g-1) s(t)` at the plus
    /// place.
    fn infinity_root_series(&self, n: usize) -> Vec<Gf> {
        let mut rev_f = reversed(&self.f);
        rev_f.resize(n.max(1), 0);
        series_sqrt(&self.field, &rev_f, self.sqrt_lc, n.max(1))
    }

    /// The full divisor of a nonzero function.
    pub fn principal_divisor(&self, h: &CurveFn) -> Divisor {
        assert!(!h.is_zero(), "the zero function has no divisor");
        let fd = &self.field;
        let norm = self.fn_norm(h);
        assert!(!norm.is_zero(), "nonzero functions have nonzero norm");
        let mut div = Divisor::zero();
        for (p, mult) in factor(fd, &norm, self.seed) {
            let places = self.places_over(&p);
            let seen;
            if places.len() == 2 {
                let (v0, v1) = self.split_valuations(h, &p);
                div.add_place(places[0], v0);
                div.add_place(places[1], v1);
                seen = v0 + v1;
            } else {
                let v = match places[0].id {
                    PlaceId::Finite { branch: 2, .. } => {
                        let v = self.inert_valuation(h, &p);
                        seen = 2 * v;
                        v
                    }
                    _ => {
                        let v = self.ramified_valuation(h, &p);
                        seen = v;
                        v
                    }
                };
                div.add_place(places[0], v);
            }
            assert_eq!(seen, mult as i64, "place valuations must match the norm factor");
        }
        let vp = self.val_infinite(h, true);
        let vm = self.val_infinite(h, false);
        assert_eq!(vp + vm, -norm.deg(), "infinite valuations must match the norm degree");
        div.add_place(self.infinite_place(true), vp);
        div.add_place(self.infinite_place(false), vm);
        assert_eq!(div.deg(), 0, "principal divisors have degree zero");
        div
    }

    // ---- section spaces ----

    /// The monomial basis of L(m(inf+ + inf-)): powers of x up to m and
    /// x^j y for j up to m-g-1.  Dimension 2m-g+1 once m >= g.
    pub fn rr_basis(&self, m: i64) -> Vec<CurveFn> {
        assert!(m >= 0);
        let mut out = Vec::new();
        for i in 0..=m {
            out.push(CurveFn::from_x(monomial(i as usize)));
        }
        for j in 0..=(m - self.genus as i64 - 1) {
            out.push(CurveFn { c: Poly::zero(), d: monomial(j as usize) });
        }
        out
    }

    /// A basis of L(a*inf+ + b*inf-) for arbitrary integers a, b: vanishing
    /// conditions at infinity imposed on the balanced basis, solved as a
    /// kernel over F_q.
    pub fn rr_space(&self, a: i64, b: i64) -> Vec<CurveFn> {
        if a + b < 0 {
            return Vec::new();
        }
        let fd = &self.field;
        let m = a.max(b).max(self.genus as i64);
        let base = self.rr_basis(m);
        let depth_plus = (m - a).max(0) as usize;
        let depth_minus = (m - b).max(0) as usize;
        if depth_plus + depth_minus == 0 {
            return base;
        }
        let window = depth_plus.max(depth_minus).max(1);
        let mut rows: Vec<Vec<Gf>> = vec![vec![0; base.len()]; depth_plus + depth_minus];
        for (col, h) in base.iter().enumerate() {
            let (mm, co_p) = self.bracket_at_infinity(h, true, Some(window));
            let (_, co_m) = self.bracket_at_infinity(h, false, Some(window));
            // Align: h = t^(-mm) B(t) = t^(-m) (t^(m-mm) B), so the coefficient
            // of t^(j-m) is B[j - (m-mm)].
            let gap = (m - mm) as usize;
            for r in 0..depth_plus {
                rows[r][col] = if r >= gap { co_p[r - gap] } else { 0 };
            }
            for r in 0..depth_minus {
                rows[depth_plus + r][col] = if r >= gap { co_m[r - gap] } else { 0 };
            }
        }
        let kernel = gf_kernel(fd, &rows);
        let out: Vec<CurveFn> = kernel
            .iter()
            .map(|v| {
                let mut acc = CurveFn { c: Poly::zero(), d: Poly::zero() };
                for (col, &coef) in v.iter().enumerate() {
                    if coef != 0 {
                        acc = self.fn_add(&acc, &self.fn_scale(&base[col], coef));
                    }
                }
                acc
            })
            .collect();
        let g = self.genus as i64;
        if a + b >= 2 * g - 1 {
            assert_eq!(out.len() as i64, a + b - g + 1, "dimension clashes with Riemann-Roch");
        }
        out
    }

    /// Every element of L(a*inf+ + b*inf-), zero included: all F_q-linear
    /// combinations of [`HyperCover::rr_space`].  Size q^dim, so this is meant
    /// for the small spaces the orbital sums range over.
    pub fn rr_span(&self, a: i64, b: i64) -> Vec<CurveFn> {
        let basis = self.rr_space(a, b);
        let mut out = vec![CurveFn { c: Poly::zero(), d: Poly::zero() }];
        for h in &basis {
            let mut next = Vec::with_capacity(out.len() * self.q() as usize);
            for prev in &out {
                for lam in self.field.elements() {
                    next.push(self.fn_add(prev, &self.fn_scale(h, lam)));
                }
            }
            out = next;
        }
        out
    }

    // ---- point counts over extensions ----

    /// Rational points of the base curve over the degree-m extension,
    /// counted directly from the model (two points over x = infinity).
    pub fn count_points_x(&self, m: u32) -> Result<u64, FieldError> {
        let (ext, emb) = self.extension(m)?;
        let fe = embed_poly(&emb, &self.f);
        let mut n = 2u64;
        for x in ext.elements() {
            n = (n as i64 + 1 + ext.legendre(fe.eval(&ext, x)) as i64) as u64;
        }
        Ok(n)
    }

    /// Rational points of the covering curve over the degree-m extension:
    /// fibers multiply the split patterns of f1 and f2.
    pub fn count_points_xprime(&self, m: u32) -> Result<u64, FieldError> {
        let (ext, emb) = self.extension(m)?;
        let f1e = embed_poly(&emb, &self.f1);
        let f2e = embed_poly(&emb, &self.f2);
        let mut n = 2 * (1 + ext.legendre(emb[self.f1.lc() as usize]) as i64);
        for x in ext.elements() {
            let a = 1 + ext.legendre(f1e.eval(&ext, x)) as i64;
            let b = 1 + ext.legendre(f2e.eval(&ext, x)) as i64;
            n += a * b;
        }
        Ok(n as u64)
    }

    /// The degree-m extension together with the embedding table for base
    /// elements (identity on integers for prime base fields, otherwise via a
    /// root of the base modulus).
    fn extension(&self, m: u32) -> Result<(GfField, Vec<Gf>), FieldError> {
        assert!(m >= 1);
        let p = self.field.p();
        let k = self.field.k();
        let ext = GfField::new(p, k * m)?;
        let table: Vec<Gf> = if k == 1 {
            (0..self.field.q()).map(|a| a as Gf).collect()
        } else {
            let digits = self.field.modulus().to_vec();
            let root = ext
                .elements()
                .find(|&z| {
                    let mut acc: Gf = 0;
                    for &cd in digits.iter().rev() {
                        acc = ext.add(ext.mul(acc, z), ext.from_int(cd as i64));
                    }
                    acc == 0
                })
                .expect("base modulus must have a root in the extension");
            (0..self.field.q())
                .map(|a| {
                    let mut acc: Gf = 0;
                    let mut pw: Gf = ext.from_int(1);
                    let mut rest = a;
                    while rest > 0 {
                        acc = ext.add(acc, ext.mul(ext.from_int((rest % p) as i64), pw));
                        pw = ext.mul(pw, root);
                        rest /= p;
                    }
                    acc
                })
                .collect()
        };
        Ok((ext, table))
    }
}

fn monomial(deg: usize) -> Poly {
    let mut c = vec![0 as Gf; deg + 1];
    c[deg] = 1;
    Poly::from_coeffs(c)
}

/// Coefficients high-to-low: `p(1/t) = t^(-deg) * reversed(p)(t)`.
fn reversed(p: &Poly) -> Vec<Gf> {
    let mut v: Vec<Gf> = p.coeffs().to_vec();
    v.reverse();
    v
}

fn embed_poly(emb: &[Gf], p: &Poly) -> Poly {
    Poly::from_coeffs(p.coeffs().iter().map(|&a| emb[a as usize]).collect())
}

// ---- truncated power series over F_q ----

fn series_mul(f: &GfField, a: &[Gf], b: &[Gf], n: usize) -> Vec<Gf> {
    let mut out = vec![0 as Gf; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            if bj != 0 {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
    out
}

/// Inverse of a unit series by Newton doubling.
fn series_inv(f: &GfField, a: &[Gf], n: usize) -> Vec<Gf> {
    assert!(!a.is_empty() && a[0] != 0, "series inverse needs a unit");
    let mut b = vec![f.inv(a[0])];
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        // b <- b (2 - a b)
        let ab = series_mul(f, a, &b, prec);
        let mut corr = vec![0 as Gf; prec];
        corr[0] = f.sub(f.from_int(2), ab[0]);
        for i in 1..prec {
            corr[i] = f.neg(ab[i]);
        }
        b = series_mul(f, &b, &corr, prec);
    }
    b
}

/// Square root of a series whose constant term has the given root, by
/// Newton doubling; odd characteristic only.
fn series_sqrt(f: &GfField, a: &[Gf], r0: Gf, n: usize) -> Vec<Gf> {
    assert!(!a.is_empty() && f.mul(r0, r0) == a[0]);
    assert!(r0 != 0, "square root of a non-unit series");
    let half = f.inv(f.from_int(2));
    let mut r = vec![r0];
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        // r <- (r + a/r) / 2
        let rinv = series_inv(f, &r, prec);
        let a_over_r = series_mul(f, a, &rinv, prec);
        let mut next = vec![0 as Gf; prec];
        for i in 0..prec {
            let ri = if i < r.len() { r[i] } else { 0 };
            next[i] = f.mul(half, f.add(ri, a_over_r[i]));
        }
        r = next;
    }
    r
}
