//! Dense exact linear algebra over the rationals, the integers (Hermite
//! normal form) and small prime fields. Matrices are row-major
//! `Vec<Vec<_>>`; everything here is deterministic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn qz(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// Generalized binomial coefficient `n over k` for integer (possibly
/// negative) `n`.
pub fn binom(n: i64, k: u32) -> Z {
    let mut num = Z::one();
    for s in 0..k as i64 {
        num *= Z::from(n - s);
    }
    let mut den = Z::one();
    for s in 1..=k as i64 {
        den *= Z::from(s);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Row-reduce `m` in place to reduced row echelon form.
/// Returns the pivot column of each nonzero row.
pub fn rref(m: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in c..cols {
                    let delta = &f * &m[r][c2];
                    m[i][c2] = &m[i][c2] - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    rref(&mut m).len()
}

/// Solve `a x = b` for a square invertible `a`. Returns `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn invert(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Q::one() } else { Q::zero() });
            }
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut red: Vec<Vec<Q>> = m.to_vec();
    let pivots = rref(&mut red);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Row space of `m` in reduced row echelon form (a canonical basis of the
/// span: two spans are equal iff their RREFs are identical).
pub fn row_space(m: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut red = m;
    rref(&mut red);
    red
}

/// Does the row space of `a` contain the vector `v`? `a` must be in RREF.
pub fn rref_contains(a: &[Vec<Q>], pivots: &[usize], v: &[Q]) -> bool {
    let mut rem = v.to_vec();
    for (r, &pc) in pivots.iter().enumerate() {
        if !rem[pc].is_zero() {
            let f = rem[pc].clone();
            for c in 0..rem.len() {
                let delta = &f * &a[r][c];
                rem[c] = &rem[c] - &delta;
            }
        }
    }
    rem.iter().all(|x| x.is_zero())
}

/// Row-style Hermite normal form of an integer matrix. Returns the nonzero
/// rows of the HNF basis of the row lattice.
pub fn hnf(mut m: Vec<Vec<Z>>) -> Vec<Vec<Z>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let rows = m.len();
    let mut r = 0;
    for c in 0..cols {
        // At each step clear column c below row r by gcd elimination.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[i][c].is_zero() {
                    let better = match best {
                        None => true,
                        Some(j) => m[i][c].abs() < m[j][c].abs(),
                    };
                    if better {
                        best = Some(i);
                    }
                }
            }
            let Some(bi) = best else {
                break;
            };
            m.swap(r, bi);
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let mut dirty = false;
            for i in r + 1..rows {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    if !q.is_zero() {
                        for c2 in 0..cols {
                            let delta = &q * &m[r][c2];
                            m[i][c2] = &m[i][c2] - delta;
                        }
                    }
                    if !m[i][c].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if !m[r][c].is_zero() {
            // Reduce the rows above into canonical range.
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    for c2 in 0..cols {
                        let delta = &q * &m[r][c2];
                        m[i][c2] = &m[i][c2] - delta;
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
    }
    m.truncate(r);
    m
}

// ---------------------------------------------------------------------------
// Small prime fields.
// ---------------------------------------------------------------------------

pub fn fp_inv(a: u64, p: u64) -> u64 {
    // p is tiny; extended Euclid not worth it.
    assert!(a % p != 0, "division by zero mod {p}");
    let mut x = 1u64;
    loop {
        if (a * x) % p == 1 {
            return x;
        }
        x += 1;
    }
}

/// Reduce a rational to F_p. Returns `None` when the denominator vanishes
/// mod p.
pub fn q_mod_p(q: &Q, p: u64) -> Option<u64> {
    let pz = Z::from(p);
    let den = q.denom().mod_floor(&pz);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor(&pz);
    let num: u64 = num.try_into().unwrap();
    let den: u64 = den.try_into().unwrap();
    Some((num * fp_inv(den, p)) % p)
}

pub fn fp_rref(m: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fp_inv(m[r][c] % p, p);
        for x in m[r].iter_mut() {
            *x = (*x % p) * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = m[i][c] % p;
                for c2 in 0..cols {
                    m[i][c2] = (m[i][c2] % p + (p - f) * (m[r][c2] % p) % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn fp_rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    fp_rref(&mut m, p).len()
}

pub fn fp_nullspace(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut red = m.to_vec();
    let pivots = fp_rref(&mut red, p);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - red[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

pub fn fp_row_space(m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let mut red = m;
    fp_rref(&mut red, p);
    red
}

/// Is `v` in the row space of the RREF matrix `a`?
pub fn fp_rref_contains(a: &[Vec<u64>], pivots: &[usize], v: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = v.iter().map(|x| x % p).collect();
    for (r, &pc) in pivots.iter().enumerate() {
        if rem[pc] != 0 {
            let f = rem[pc];
            for c in 0..rem.len() {
                rem[c] = (rem[c] + (p - f) * (a[r][c] % p) % p) % p;
            }
        }
    }
    rem.iter().all(|&x| x == 0)
}
