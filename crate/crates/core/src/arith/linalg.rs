//! Integer and finite-field linear algebra: Smith normal form for finitely
//! presented abelian groups, exact integer kernels, and small F_q solvers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gf::{Gf, GfField};

/// Smith normal form of an integer matrix: returns `(d, v)` where `d` holds
/// the nonnegative diagonal entries with `d[0] | d[1] | ...` (padded with
/// zeros up to `min(m, n)`), and `v` is the unimodular column transform: for
/// `D = U A V`, the class of a row vector `x` in `Z^n / rowspace(A)` is read
/// off from `x V` componentwise mod `d[i]` (entries past the diagonal are
/// free `Z` coordinates).
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut w: Vec<Vec<BigInt>> = a.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let rank_cap = m.min(n);
    let mut t = 0usize;
    while t < rank_cap {
        // Find the nonzero entry of smallest magnitude in the working block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| w[i][j].abs() < w[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap(t, pi);
        swap_cols(&mut w, &mut v, t, pj);

        // Clear the pivot row and column; restart if a division is inexact.
        let mut clean = true;
        for i in t + 1..m {
            if !w[i][t].is_zero() {
                let q = div_round(&w[i][t], &w[t][t]);
                if !q.is_zero() {
                    for j in 0..n {
                        let s = &q * &w[t][j];
                        w[i][j] -= s;
                    }
                }
                if !w[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if !w[t][j].is_zero() {
                let q = div_round(&w[t][j], &w[t][t]);
                if !q.is_zero() {
                    add_col(&mut w, &mut v, j, t, &-q);
                }
                if !w[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // pivot shrank; repeat with the same t
        }
        // Divisibility sweep: pivot must divide the rest of the block.
        let mut fixed = true;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if !(&w[i][j] % &w[t][t]).is_zero() {
                    // Fold row i into row t and retry the elimination.
                    for jj in 0..n {
                        let s = w[i][jj].clone();
                        w[t][jj] += s;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    let d: Vec<BigInt> = (0..rank_cap).map(|i| w[i][i].abs()).collect();
    // Zeros sit at the end by construction; the sweep enforced divisibility.
    for i in 1..d.len() {
        if !d[i].is_zero() && !d[i - 1].is_zero() {
            debug_assert!((&d[i] % &d[i - 1]).is_zero(), "divisibility chain");
        }
    }
    (d, v)
}

fn swap_cols(w: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in w.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
}

/// col_a += k * col_b, mirrored on the transform.
fn add_col(w: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], a: usize, b: usize, k: &BigInt) {
    for row in w.iter_mut() {
        let s = k * &row[b];
        row[a] += s;
    }
    for row in v.iter_mut() {
        let s = k * &row[b];
        row[a] += s;
    }
}

/// Division rounded to the nearest integer, so the new remainder has
/// magnitude at most |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b); // truncated: sign(r) = sign(a)
    if r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Primitive integer kernel basis of an integer matrix (right kernel:
/// vectors `x` with `A x = 0`), via rational elimination and denominator
/// clearing.  Basis vectors are primitive (content 1) with a positive
/// leading entry, ordered by free-column index.
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let n = if m == 0 { return Vec::new() } else { a[0].len() };
    let mut w: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        if row >= m {
            break;
        }
        let Some(pr) = (row..m).find(|&i| !w[i][col].is_zero()) else { continue };
        w.swap(row, pr);
        let inv = w[row][col].clone().recip();
        for j in col..n {
            w[row][j] = &w[row][j] * &inv;
        }
        for i in 0..m {
            if i != row && !w[i][col].is_zero() {
                let f = w[i][col].clone();
                for j in col..n {
                    let s = &f * &w[row][j];
                    w[i][j] -= s;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut out = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![BigRational::zero(); n];
        x[free] = BigRational::one();
        for col in 0..n {
            if let Some(r) = pivot_of_col[col] {
                x[col] = -w[r][free].clone();
            }
        }
        // Clear denominators, divide by content, normalize sign.
        let mut denom = BigInt::one();
        for c in &x {
            denom = denom.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = x.iter().map(|c| (c * BigRational::from(denom.clone())).to_integer()).collect();
        let mut content = BigInt::zero();
        for c in &v {
            content = content.gcd(c);
        }
        if !content.is_zero() && !content.is_one() {
            for c in v.iter_mut() {
                *c /= &content;
            }
        }
        if let Some(first) = v.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                for c in v.iter_mut() {
                    *c = -c.clone();
                }
            }
        }
        out.push(v);
    }
    out
}

/// Right-kernel basis over F_q, in reduced echelon convention: one basis
/// vector per free column, unit at its free index.
pub fn gf_kernel(f: &GfField, a: &[Vec<Gf>]) -> Vec<Vec<Gf>> {
    let m = a.len();
    let n = if m == 0 { return Vec::new() } else { a[0].len() };
    let mut w = a.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        if row >= m {
            break;
        }
        let Some(pr) = (row..m).find(|&i| w[i][col] != 0) else { continue };
        w.swap(row, pr);
        let inv = f.inv(w[row][col]);
        for j in col..n {
            w[row][j] = f.mul(w[row][j], inv);
        }
        for i in 0..m {
            if i != row && w[i][col] != 0 {
                let fac = w[i][col];
                for j in col..n {
                    let s = f.mul(fac, w[row][j]);
                    w[i][j] = f.sub(w[i][j], s);
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut out = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![0 as Gf; n];
        x[free] = 1;
        for col in 0..n {
            if let Some(r) = pivot_of_col[col] {
                x[col] = f.neg(w[r][free]);
            }
        }
        out.push(x);
    }
    out
}

/// Solves `A x = b` over F_q if consistent.
pub fn gf_solve(f: &GfField, a: &[Vec<Gf>], b: &[Gf]) -> Option<Vec<Gf>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { return Some(Vec::new()) } else { a[0].len() };
    let mut w: Vec<Vec<Gf>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        if row >= m {
            break;
        }
        let Some(pr) = (row..m).find(|&i| w[i][col] != 0) else { continue };
        w.swap(row, pr);
        let inv = f.inv(w[row][col]);
        for j in col..=n {
            w[row][j] = f.mul(w[row][j], inv);
        }
        for i in 0..m {
            if i != row && w[i][col] != 0 {
                let fac = w[i][col];
                for j in col..=n {
                    let s = f.mul(fac, w[row][j]);
                    w[i][j] = f.sub(w[i][j], s);
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in &w {
        if r[..n].iter().all(|&x| x == 0) && r[n] != 0 {
            return None;
        }
    }
    let mut x = vec![0 as Gf; n];
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            x[col] = w[r][n];
        }
    }
    Some(x)
}

/// Nullspace basis over Q of the matrix whose rows are equations in
/// `width` unknowns.  One basis vector per free column after reduced row
/// echelon form, with the free coordinate set to 1; pivot order is
/// left-to-right, so the output is deterministic in the column order.
pub fn rational_kernel(rows: &[Vec<BigRational>], width: usize) -> Vec<Vec<BigRational>> {
    let mut w: Vec<Vec<BigRational>> = rows.to_vec();
    let m = w.len();
    for r in &w {
        assert_eq!(r.len(), width);
    }
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut row = 0usize;
    for col in 0..width {
        if row >= m {
            break;
        }
        let Some(pr) = (row..m).find(|&i| !w[i][col].is_zero()) else { continue };
        w.swap(row, pr);
        let inv = w[row][col].clone().recip();
        for j in col..width {
            let v = &w[row][j] * &inv;
            w[row][j] = v;
        }
        for i in 0..m {
            if i != row && !w[i][col].is_zero() {
                let fac = w[i][col].clone();
                for j in col..width {
                    let s = &fac * &w[row][j];
                    w[i][j] -= s;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut out = Vec::new();
    for free in 0..width {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![BigRational::zero(); width];
        x[free] = BigRational::one();
        for col in 0..width {
            if let Some(r) = pivot_of_col[col] {
                x[col] = -w[r][free].clone();
            }
        }
        out.push(x);
    }
    out
}
