//! Linear algebra over Z/ℓ^k: Smith normal form, Howell form, kernels and
//! invariant factors of subquotients.

use crate::error::{Error, Result};
use crate::residue::arith::{add_mod, checked_pow, inv_mod, mul_mod, sub_mod, v_p};

/// The ring Z/ℓ^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    pub ell: u64,
    pub k: u32,
    pub q: u64,
}

impl Ring {
    pub fn new(ell: u64, k: u32) -> Result<Self> {
        if !crate::residue::arith::is_prime(ell) {
            return Err(Error::InvalidArgument(format!("{ell} is not prime")));
        }
        Ok(Self {
            ell,
            k,
            q: checked_pow(ell, k)?,
        })
    }

    /// Valuation with the convention `val(0) = k`.
    #[inline]
    pub fn val(&self, x: u64) -> u32 {
        v_p(x % self.q, self.ell).map_or(self.k, |v| v.min(self.k))
    }

    #[inline]
    pub fn pow_ell(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.ell.pow(e)
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.q)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.q)
    }

    /// Inverse of the unit part `x / ℓ^{val(x)}`.
    pub fn unit_part_inv(&self, x: u64) -> u64 {
        let v = self.val(x);
        let u = x / self.ell.pow(v);
        inv_mod(u % self.q, self.q).expect("unit part is invertible")
    }

    pub fn reduce_vec(&self, v: &[u64]) -> Vec<u64> {
        v.iter().map(|x| x % self.q).collect()
    }
}

pub type Matrix = Vec<Vec<u64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// `P A Q = D` with `D` diagonal, diagonal entries `ℓ^{e_i}`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Valuations of the diagonal entries, length `min(rows, cols)`; `k` marks zero.
    pub diag: Vec<u32>,
    pub p: Option<Matrix>,
    pub q: Option<Matrix>,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank_like(&self, k: u32) -> usize {
        self.diag.iter().filter(|&&e| e < k).count()
    }
}

/// Smith normal form over Z/ℓ^k with valuation-minimal pivots; ties go to the
/// smallest row, then the smallest column.
pub fn smith(ring: &Ring, a: &Matrix, ncols: usize, track_p: bool, track_q: bool) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut a: Matrix = a.iter().map(|r| ring.reduce_vec(r)).collect();
    let mut p = track_p.then(|| identity(m));
    let mut q = track_q.then(|| identity(n));
    let r = m.min(n);
    let mut diag = vec![ring.k; r];
    for t in 0..r {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let v = ring.val(x);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            break;
        };
        a.swap(t, pi);
        if let Some(p) = p.as_mut() {
            p.swap(t, pi);
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if let Some(q) = q.as_mut() {
                for row in q.iter_mut() {
                    row.swap(t, pj);
                }
            }
        }
        let u = ring.unit_part_inv(a[t][t]);
        if u != 1 {
            for x in a[t].iter_mut() {
                *x = ring.mul(*x, u);
            }
            if let Some(p) = p.as_mut() {
                for x in p[t].iter_mut() {
                    *x = ring.mul(*x, u);
                }
            }
        }
        let pivot = ring.ell.pow(v);
        let pivot_row = a[t].clone();
        let pivot_prow = p.as_ref().map(|p| p[t].clone());
        for i in (t + 1)..m {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            let c = x / pivot;
            for j in t..n {
                a[i][j] = ring.sub(a[i][j], ring.mul(c, pivot_row[j]));
            }
            if let (Some(p), Some(pr)) = (p.as_mut(), pivot_prow.as_ref()) {
                for j in 0..m {
                    p[i][j] = ring.sub(p[i][j], ring.mul(c, pr[j]));
                }
            }
        }
        for j in (t + 1)..n {
            let x = a[t][j];
            if x == 0 {
                continue;
            }
            let c = x / pivot;
            a[t][j] = 0;
            if let Some(q) = q.as_mut() {
                for row in q.iter_mut() {
                    row[j] = ring.sub(row[j], ring.mul(c, row[t]));
                }
            }
        }
        diag[t] = v;
    }
    Smith {
        diag,
        p,
        q,
        rows: m,
        cols: n,
    }
}

/// Generators of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn kernel(ring: &Ring, a: &Matrix, ncols: usize) -> Matrix {
    let s = smith(ring, a, ncols, false, true);
    let q = s.q.expect("tracked");
    let mut out = Vec::new();
    for i in 0..ncols {
        let e = s.diag.get(i).copied().unwrap_or(0);
        let scale = if i < s.diag.len() { ring.pow_ell(ring.k - e) } else { 1 };
        if scale == 0 {
            continue;
        }
        let col: Vec<u64> = (0..ncols).map(|r| ring.mul(q[r][i], scale)).collect();
        if col.iter().any(|&x| x != 0) {
            out.push(col);
        }
    }
    out
}

/// Exponents `v_i > 0` of the invariant factors `ℓ^{v_i}` of the abelian
/// group `Z^r / rows(rel)` when `rel` contains `ℓ^k Z^r`; ascending.
fn cokernel_exponents(ring: &Ring, rel: &Matrix, r: usize) -> Vec<u32> {
    let s = smith(ring, rel, r, false, false);
    let mut out: Vec<u32> = (0..r)
        .map(|i| s.diag.get(i).copied().unwrap_or(ring.k))
        .filter(|&v| v > 0)
        .collect();
    out.sort_unstable();
    out
}

/// Order exponent of the row span: `#span = ℓ^{result}`.
pub fn span_order_exponent(ring: &Ring, gens: &Matrix, ncols: usize) -> u32 {
    let s = smith(ring, gens, ncols, false, false);
    s.diag.iter().map(|&e| ring.k - e).sum()
}

/// Invariant-factor exponents of `span(a) / span(b)`; `span(b) ⊆ span(a)` is
/// required and checked.
pub fn quotient_exponents(ring: &Ring, a: &Matrix, b: &Matrix, ncols: usize) -> Result<Vec<u32>> {
    if a.is_empty() {
        if b.iter().any(|row| row.iter().any(|&x| x % ring.q != 0)) {
            return Err(Error::Inconsistent("sub-span is not contained in span".into()));
        }
        return Ok(Vec::new());
    }
    let s = smith(ring, a, ncols, false, true);
    let q = s.q.expect("tracked");
    let basis: Vec<(usize, u32)> = s
        .diag
        .iter()
        .enumerate()
        .filter(|(_, &e)| e < ring.k)
        .map(|(i, &e)| (i, e))
        .collect();
    let r = basis.len();
    let mut rel: Matrix = Vec::with_capacity(r + b.len());
    for (idx, &(_, e)) in basis.iter().enumerate() {
        let mut row = vec![0; r];
        row[idx] = ring.pow_ell(ring.k - e);
        rel.push(row);
    }
    for bv in b {
        // coordinates in the basis ℓ^{e_i} row_i(Q^{-1}): (b Q)_i / ℓ^{e_i}
        let bq: Vec<u64> = (0..ncols)
            .map(|j| {
                (0..ncols).fold(0, |acc, t| ring.add(acc, ring.mul(bv[t] % ring.q, q[t][j])))
            })
            .collect();
        for (j, &x) in bq.iter().enumerate() {
            let in_basis = basis.iter().any(|&(i, e)| i == j && x % ring.ell.pow(e) == 0);
            if x != 0 && !in_basis {
                return Err(Error::Inconsistent("sub-span is not contained in span".into()));
            }
        }
        rel.push(basis.iter().map(|&(i, e)| bq[i] / ring.ell.pow(e)).collect());
    }
    Ok(cokernel_exponents(ring, &rel, r))
}

/// Howell form of the row span: canonical echelon basis with pivots `ℓ^v`,
/// entries above each pivot reduced below it, and saturation under
/// multiplication by powers of ℓ.
pub fn howell_form(ring: &Ring, rows: &Matrix, ncols: usize) -> Matrix {
    let mut pool: Matrix = rows
        .iter()
        .map(|r| ring.reduce_vec(r))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut echelon: Vec<(usize, u32, Vec<u64>)> = Vec::new();
    for col in 0..ncols {
        let mut best: Option<(u32, usize)> = None;
        for (i, row) in pool.iter().enumerate() {
            let x = row[col];
            if x != 0 {
                let v = ring.val(x);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, i));
                }
            }
        }
        let Some((v, bi)) = best else {
            continue;
        };
        let mut prow = pool.swap_remove(bi);
        let u = ring.unit_part_inv(prow[col]);
        for x in prow.iter_mut() {
            *x = ring.mul(*x, u);
        }
        let pivot = ring.ell.pow(v);
        for row in pool.iter_mut() {
            let x = row[col];
            if x != 0 {
                let c = x / pivot;
                for j in col..ncols {
                    row[j] = ring.sub(row[j], ring.mul(c, prow[j]));
                }
            }
        }
        let sat_scale = ring.pow_ell(ring.k - v);
        let sat: Vec<u64> = prow.iter().map(|&x| ring.mul(x, sat_scale)).collect();
        pool.push(sat);
        pool.retain(|r| r.iter().any(|&x| x != 0));
        echelon.push((col, v, prow));
    }
    for t in 0..echelon.len() {
        let (col, v, prow) = echelon[t].clone();
        let pivot = ring.ell.pow(v);
        for (_, _, row) in echelon.iter_mut().take(t) {
            let c = row[col] / pivot;
            if c != 0 {
                for j in col..ncols {
                    row[j] = ring.sub(row[j], ring.mul(c, prow[j]));
                }
            }
        }
    }
    echelon.into_iter().map(|(_, _, r)| r).collect()
}

/// Pivot column and pivot valuation of a Howell-form row.
pub fn pivot_of(ring: &Ring, row: &[u64]) -> Option<(usize, u32)> {
    row.iter()
        .position(|&x| x != 0)
        .map(|j| (j, ring.val(row[j])))
}

/// Membership of `x` in the span of a Howell-form basis.
pub fn howell_contains(ring: &Ring, basis: &Matrix, x: &[u64]) -> bool {
    let mut x = ring.reduce_vec(x);
    for row in basis {
        let Some((col, v)) = pivot_of(ring, row) else {
            continue;
        };
        if x[..col].iter().any(|&y| y != 0) {
            return false;
        }
        let pivot = ring.ell.pow(v);
        if x[col] % pivot != 0 {
            return false;
        }
        let c = x[col] / pivot;
        for j in col..x.len() {
            x[j] = ring.sub(x[j], ring.mul(c, row[j]));
        }
    }
    x.iter().all(|&y| y == 0)
}

pub fn mat_vec(ring: &Ring, a: &Matrix, x: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&r, &y)| ring.add(acc, ring.mul(r, y)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(ell: u64, k: u32) -> Ring {
        Ring::new(ell, k).unwrap()
    }

    fn mat_mul(r: &Ring, a: &Matrix, b: &Matrix) -> Matrix {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().enumerate().fold(0, |acc, (t, &x)| r.add(acc, r.mul(x, b[t][j]))))
                    .collect()
            })
            .collect()
    }

    /// Brute-force span of rows over Z/q^n (tiny cases).
    fn brute_span(r: &Ring, rows: &Matrix, n: usize) -> std::collections::BTreeSet<Vec<u64>> {
        let mut span = std::collections::BTreeSet::new();
        span.insert(vec![0; n]);
        loop {
            let mut grew = false;
            let current: Vec<Vec<u64>> = span.iter().cloned().collect();
            for s in &current {
                for row in rows {
                    let t: Vec<u64> = s.iter().zip(row).map(|(&a, &b)| r.add(a, b % r.q)).collect();
                    if span.insert(t) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return span;
            }
        }
    }

    fn all_vectors(q: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                }))
                .collect();
        }
        out
    }

    #[test]
    fn smith_reconstructs() {
        let r = ring(3, 2);
        let a: Matrix = vec![vec![3, 6, 1], vec![0, 9, 4], vec![6, 3, 8]];
        let s = smith(&r, &a, 3, true, true);
        let pa = mat_mul(&r, s.p.as_ref().unwrap(), &a);
        let paq = mat_mul(&r, &pa, s.q.as_ref().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { r.pow_ell(s.diag[i]) } else { 0 };
                assert_eq!(paq[i][j], expect, "{paq:?} {:?}", s.diag);
            }
        }
    }

    #[test]
    fn kernel_matches_brute_force() {
        let r = ring(2, 3);
        let a: Matrix = vec![vec![2, 4, 0], vec![4, 0, 6]];
        let ker = kernel(&r, &a, 3);
        let brute: std::collections::BTreeSet<Vec<u64>> = all_vectors(8, 3)
            .into_iter()
            .filter(|x| mat_vec(&r, &a, x).iter().all(|&y| y == 0))
            .collect();
        assert_eq!(brute_span(&r, &ker, 3), brute);
    }

    #[test]
    fn howell_membership_matches_span() {
        let r = ring(3, 2);
        for rows in [
            vec![vec![3, 0]],
            vec![vec![3, 1], vec![0, 3]],
            vec![vec![6, 3], vec![3, 6]],
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![0, 0]],
        ] {
            let h = howell_form(&r, &rows, 2);
            let span = brute_span(&r, &rows, 2);
            for x in all_vectors(9, 2) {
                assert_eq!(howell_contains(&r, &h, &x), span.contains(&x), "{rows:?} {x:?}");
            }
            let order: u64 = h
                .iter()
                .map(|row| r.ell.pow(r.k - pivot_of(&r, row).unwrap().1))
                .product();
            assert_eq!(order as usize, span.len());
        }
    }

    #[test]
    fn howell_is_canonical() {
        let r = ring(3, 2);
        let a = howell_form(&r, &vec![vec![3, 1], vec![0, 3]], 2);
        let b = howell_form(&r, &vec![vec![6, 2], vec![3, 4], vec![0, 0]], 2);
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_structure() {
        let r = ring(3, 2);
        let full = identity(2);
        assert_eq!(quotient_exponents(&r, &full, &vec![vec![3, 0], vec![0, 3]], 2).unwrap(), vec![1, 1]);
        assert_eq!(quotient_exponents(&r, &full, &vec![vec![3, 0]], 2).unwrap(), vec![1, 2]);
        assert_eq!(quotient_exponents(&r, &vec![vec![3, 0]], &vec![vec![3, 0]], 2).unwrap(), Vec::<u32>::new());
        assert!(quotient_exponents(&r, &vec![vec![3, 0]], &vec![vec![1, 0]], 2).is_err());
        assert_eq!(span_order_exponent(&r, &vec![vec![3, 1], vec![0, 3]], 2), 2);
        assert_eq!(span_order_exponent(&r, &vec![vec![3, 1], vec![0, 1]], 2), 3);
    }
}
