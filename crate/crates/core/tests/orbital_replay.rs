//! Replays the frozen orbital records: every row pins the value of one
//! regular orbit, and both evaluation routes must still reproduce it.
//!
//! The data files double as the conformance record for the exponent
//! convention: the sign of the `q^s` keys was fixed once, by requiring the
//! splitting and lattice engines to agree on this corpus, and committing the
//! rows makes that choice permanent.  Rows are `digits;key:coeff,...` where
//! the digits index field elements for the section's coordinates in the
//! Riemann-Roch basis of L(3(inf+ + inf-)).

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt::Write as _;
use std::path::PathBuf;

use quadcover::arith::laurent::LaurentQ;
use quadcover::curve::hyper::{CurveFn, HyperCover};
use quadcover::curve::jacobian::Jacobian;
use quadcover::curve::load_curve;
use quadcover::rtf::{j_rs_lattice, j_rs_moduli, orbital_input, OrbitLabel};

fn fixture_cover(name: &str) -> HyperCover {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let data = load_curve(&path).unwrap_or_else(|e| panic!("loading {name}: {e}"));
    data.hyper.expect("replay needs the geometric backend")
}

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn section_from_digits(cover: &HyperCover, basis: &[CurveFn], digits: &str) -> CurveFn {
    let elems: Vec<_> = cover.field().elements().collect();
    assert_eq!(digits.len(), basis.len(), "digit count must match the basis");
    let mut acc = CurveFn::from_x(quadcover::arith::poly::Poly::zero());
    for (h, ch) in basis.iter().zip(digits.chars()) {
        let lam = elems[ch.to_digit(10).unwrap() as usize];
        acc = cover.fn_add(&acc, &cover.fn_scale(h, lam));
    }
    acc
}

fn check_file(curve: &str, file: &str, stride: usize) {
    let cover = fixture_cover(curve);
    let jac = Jacobian::new(fixture_cover(curve));
    let basis = cover.rr_space(3, 3);
    let text = std::fs::read_to_string(data_path(file)).expect("frozen orbital records");

    let mut rows = 0;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (digits, terms) = line.split_once(';').expect("digits;terms");
        let a = section_from_digits(&cover, &basis, digits);
        let input = orbital_input(&cover, 3, &a).expect("recorded sections are sections");
        assert_eq!(input.label, OrbitLabel::Regular);

        let mut expect = LaurentQ::zero();
        if !terms.is_empty() {
            for t in terms.split(',') {
                let (k, c) = t.split_once(':').expect("key:coeff");
                expect.add_term(
                    k.parse().unwrap(),
                    BigRational::from_integer(c.parse::<BigInt>().unwrap()),
                );
            }
        }

        let moduli = j_rs_moduli(&input).unwrap();
        let lattice = j_rs_lattice(&input, Some(&jac)).unwrap();
        assert_eq!(moduli, expect, "{curve} row {digits}: splitting engine drifted");
        assert_eq!(lattice, expect, "{curve} row {digits}: lattice engine drifted");
        rows += 1;
    }
    // every stride-th regular section of the 3(inf+ + inf-) span
    let total = (cover.q() as usize).pow(basis.len() as u32) - 2;
    assert_eq!(rows, total.div_ceil(stride), "row count for {curve}");
}

#[test]
fn frozen_orbitals_replay_exactly() {
    check_file("f3_r3.toml", "orbital_f3_r3.txt", 1);
    check_file("f5_r5.toml", "orbital_f5_r5.txt", 13);
}

/// Regenerates the frozen records.  Run explicitly when the corpus is meant
/// to change: `cargo test -p quadcover --test orbital_replay -- --ignored`.
#[test]
#[ignore]
fn regenerate_orbital_records() {
    for (curve, file, stride) in
        [("f3_r3.toml", "orbital_f3_r3.txt", 1usize), ("f5_r5.toml", "orbital_f5_r5.txt", 13)]
    {
        let cover = fixture_cover(curve);
        let jac = Jacobian::new(fixture_cover(curve));
        let basis = cover.rr_space(3, 3);
        let q = cover.q() as usize;
        let mut out = String::new();
        let _ = writeln!(out, "# {curve}: regular orbits of the 3(inf+ + inf-) section span");
        let mut regular = 0usize;
        for n in 0..q.pow(basis.len() as u32) {
            let mut digits = String::new();
            for k in (0..basis.len()).rev() {
                digits.push(char::from_digit((n / q.pow(k as u32) % q) as u32, 10).unwrap());
            }
            let a = section_from_digits(&cover, &basis, &digits);
            let input = match orbital_input(&cover, 3, &a) {
                Ok(inp) if inp.label == OrbitLabel::Regular => inp,
                _ => continue,
            };
            regular += 1;
            if (regular - 1) % stride != 0 {
                continue;
            }
            let moduli = j_rs_moduli(&input).unwrap();
            assert_eq!(moduli, j_rs_lattice(&input, Some(&jac)).unwrap());
            let terms: Vec<String> = moduli
                .terms()
                .map(|(k, c)| {
                    assert!(c.is_integer(), "orbital coefficients are eta-weighted counts");
                    format!("{}:{}", k, c.to_integer())
                })
                .collect();
            let _ = writeln!(out, "{};{}", digits, terms.join(","));
        }
        std::fs::create_dir_all(data_path(file).parent().unwrap()).unwrap();
        std::fs::write(data_path(file), out).unwrap();
    }
}
