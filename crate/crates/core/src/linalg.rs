//! Linear algebra over Z/p^e and over Z.
//!
//! Matrices are dense `Vec<Vec<u64>>` in row-major order. Over Z/p^e every entry is `u·p^v`
//! with `u` a unit, so Smith normal form only needs valuation pivoting.

use crate::coeff::arith::{inv_mod, mul_mod, valuation};

/// Modulus `p^e` with cached powers.
#[derive(Clone, Copy, Debug)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub m: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Self {
        PrimePower { p, e, m: p.pow(e) }
    }

    fn val(&self, x: u64) -> u32 {
        if x == 0 {
            self.e
        } else {
            valuation(x, self.p).min(self.e)
        }
    }

    /// Unit part inverse of a nonzero entry of valuation `v`.
    fn unit_inv(&self, x: u64, v: u32) -> u64 {
        let u = x / self.p.pow(v);
        inv_mod(u % self.m, self.m).expect("unit part is invertible")
    }
}

/// Row-reduces `a` in place to Smith form, returning diagonal valuations of the nonzero
/// pivots (in order) and, if requested, the column transform `Q` with `A·Q` having the
/// pivot structure. Row operations are applied but not recorded.
pub fn smith_mod(a: &mut [Vec<u64>], ncols: usize, pp: PrimePower, track_q: bool) -> (Vec<u32>, Option<Vec<Vec<u64>>>) {
    let m = pp.m;
    let nrows = a.len();
    let mut q = track_q.then(|| {
        (0..ncols)
            .map(|i| {
                let mut r = vec![0u64; ncols];
                r[i] = 1;
                r
            })
            .collect::<Vec<_>>()
    });
    let mut vals = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = pp.val(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(t, pi);
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
        let uinv = pp.unit_inv(a[t][t], v);
        for x in a[t].iter_mut() {
            *x = mul_mod(*x, uinv, m);
        }
        let pv = pp.p.pow(v);
        let pivot_row = a[t].clone();
        for row in a.iter_mut().skip(t + 1) {
            let x = row[t];
            if x == 0 {
                continue;
            }
            let f = x / pv;
            for (y, &r) in row.iter_mut().zip(&pivot_row).skip(t) {
                if r != 0 {
                    *y = (*y + m - mul_mod(f, r, m)) % m;
                }
            }
        }
        // column elimination only touches row t and the transform
        for j in t + 1..ncols {
            let x = a[t][j];
            if x == 0 {
                continue;
            }
            let f = x / pv;
            a[t][j] = 0;
            if let Some(q) = q.as_mut() {
                for row in q.iter_mut() {
                    let c = row[t];
                    if c != 0 {
                        row[j] = (row[j] + m - mul_mod(f, c, m)) % m;
                    }
                }
            }
        }
        vals.push(v);
        t += 1;
    }
    (vals, q)
}

/// Generators of `{x : A x = 0}` over Z/p^e together with the invariants (as exponents
/// of p) of that kernel.
pub fn kernel_mod(a: &[Vec<u64>], ncols: usize, pp: PrimePower) -> (Vec<Vec<u64>>, Vec<u32>) {
    let mut work = a.to_vec();
    let (vals, q) = smith_mod(&mut work, ncols, pp, true);
    let q = q.expect("tracked");
    let mut gens = Vec::new();
    let mut inv = Vec::new();
    for t in 0..ncols {
        let v = vals.get(t).copied().unwrap_or(0);
        let order_exp = if t < vals.len() { v } else { pp.e };
        if order_exp == 0 {
            continue;
        }
        let scale = pp.p.pow(pp.e - order_exp);
        gens.push((0..ncols).map(|i| mul_mod(q[i][t], scale, pp.m)).collect());
        inv.push(order_exp);
    }
    (gens, inv)
}

/// `log_p` of the order of the submodule spanned by `gens` in (Z/p^e)^n.
pub fn span_log_order(gens: &[Vec<u64>], n: usize, pp: PrimePower) -> u32 {
    if gens.is_empty() {
        return 0;
    }
    let mut work = gens.to_vec();
    let (vals, _) = smith_mod(&mut work, n, pp, false);
    vals.iter().map(|&v| pp.e - v).sum()
}

/// Invariants (exponents of p, ascending) of `<x>/<r>` where `<r> ⊆ <x>` in (Z/p^e)^n.
///
/// Uses `log|p^j Q| = log|p^j X + R| - log|R|` for every `j`.
pub fn subquotient_invariants(x: &[Vec<u64>], r: &[Vec<u64>], n: usize, pp: PrimePower) -> Vec<u32> {
    let lr = span_log_order(r, n, pp);
    let mut sizes = Vec::with_capacity(pp.e as usize + 2);
    for j in 0..=pp.e {
        let s = pp.p.pow(j);
        let mut gens: Vec<Vec<u64>> = x
            .iter()
            .map(|g| g.iter().map(|&c| mul_mod(c, s, pp.m)).collect())
            .collect();
        gens.extend(r.iter().cloned());
        sizes.push(span_log_order(&gens, n, pp) - lr);
    }
    sizes.push(0);
    invariants_from_layers(&sizes)
}

/// Given `a_j = log_p |p^j Q|` for `j = 0..`, ending in 0, recover the cyclic factor exponents.
pub fn invariants_from_layers(a: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for j in 1..a.len() {
        let at_least_j = a[j - 1] - a[j];
        let at_least_next = if j + 1 < a.len() { a[j] - a[j + 1] } else { 0 };
        for _ in 0..at_least_j - at_least_next {
            out.push(j as u32);
        }
    }
    out
}

/// Rank of a matrix over F_p.
pub fn rank_mod_p(a: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut work: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    smith_mod(&mut work, ncols, PrimePower::new(p, 1), false).0.len()
}

/// One solution of `A x = b` over F_p (free variables set to zero), if consistent.
pub fn solve_mod_p(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi % p);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&i| aug[i][col] != 0) else { continue };
        aug.swap(row, pr);
        let inv = inv_mod(aug[row][col], p).unwrap();
        for x in aug[row].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let prow = aug[row].clone();
        for (i, r) in aug.iter_mut().enumerate() {
            if i != row && r[col] != 0 {
                let f = r[col];
                for (y, &z) in r.iter_mut().zip(&prow) {
                    *y = (*y + p - mul_mod(f, z, p)) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if aug[row..].iter().any(|r| r[ncols] != 0) {
        return None;
    }
    let mut x = vec![0u64; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][ncols];
    }
    Some(x)
}

/// Cokernel invariants of an integer matrix: the nonunit elementary divisors, with 0 for
/// each free summand. Rows are relations among `ncols` generators.
pub fn integer_cokernel(rows: &[Vec<i64>], ncols: usize) -> Vec<u64> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|b| x.abs() < b.0) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = a[t][t];
            let mut dirty = false;
            for i in t + 1..nrows {
                let f = a[i][t] / piv;
                if f != 0 {
                    for j in t..ncols {
                        a[i][j] -= f * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                let f = a[t][j] / piv;
                if f != 0 {
                    for row in a.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility: fold a non-divisible entry into row t
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % piv != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..ncols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t into the pivot
            let mut best = (a[t][t].abs(), t, t);
            for i in t + 1..nrows {
                if a[i][t] != 0 && a[i][t].abs() < best.0 {
                    best = (a[i][t].abs(), i, t);
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 && a[t][j].abs() < best.0 {
                    best = (a[t][j].abs(), t, j);
                }
            }
            let (_, bi, bj) = best;
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
        t += 1;
    }
    let mut out: Vec<u64> = diag.into_iter().filter(|&d| d != 1).collect();
    out.extend(std::iter::repeat_n(0, ncols - t));
    out
}

/// Inverse of a square matrix over Z/p^e (`None` if singular mod p).
pub fn inverse_mod(a: &[Vec<u64>], pp: PrimePower) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let m = pp.m;
    let mut w: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|&x| x % m).collect();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&i| !w[i][col].is_multiple_of(pp.p))?;
        w.swap(col, pr);
        let inv = inv_mod(w[col][col], m)?;
        for x in w[col].iter_mut() {
            *x = mul_mod(*x, inv, m);
        }
        let prow = w[col].clone();
        for (i, row) in w.iter_mut().enumerate() {
            if i != col && row[col] != 0 {
                let f = row[col];
                for (y, &z) in row.iter_mut().zip(&prow) {
                    *y = (*y + m - mul_mod(f, z, m)) % m;
                }
            }
        }
    }
    Some(w.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `c` with `Σ c_i gens_i = target` in (Z/p^e)^n, if the target lies in the span.
pub fn solve_span(gens: &[Vec<u64>], target: &[u64], n: usize, pp: PrimePower) -> Option<Vec<u64>> {
    let m = pp.m;
    let k = gens.len();
    let mut v: Vec<Vec<u64>> = gens.iter().map(|g| g.iter().map(|&x| x % m).collect()).collect();
    let mut t: Vec<u64> = target.iter().map(|&x| x % m).collect();
    // row transform: v = T · gens
    let mut tr: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut pivots: Vec<u32> = Vec::new();
    let mut s = 0;
    while s < k.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in v.iter().enumerate().skip(s) {
            for (j, &x) in row.iter().enumerate().skip(s) {
                if x != 0 {
                    let val = pp.val(x);
                    if best.is_none_or(|b| val < b.0) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        v.swap(s, pi);
        tr.swap(s, pi);
        for row in v.iter_mut() {
            row.swap(s, pj);
        }
        t.swap(s, pj);
        let pv = pp.p.pow(val);
        let u = pp.unit_inv(v[s][s], val);
        for x in v[s].iter_mut() {
            *x = mul_mod(*x, u, m);
        }
        for x in tr[s].iter_mut() {
            *x = mul_mod(*x, u, m);
        }
        // clear column s in the other rows
        let prow = v[s].clone();
        let ptr = tr[s].clone();
        for i in 0..k {
            if i == s || v[i][s] == 0 {
                continue;
            }
            let f = v[i][s] / pv;
            for (y, &z) in v[i].iter_mut().zip(&prow) {
                *y = (*y + m - mul_mod(f, z, m)) % m;
            }
            for (y, &z) in tr[i].iter_mut().zip(&ptr) {
                *y = (*y + m - mul_mod(f, z, m)) % m;
            }
        }
        // clear row s to the right with column operations, mirrored on the target
        for j in (s + 1)..n {
            let x = v[s][j];
            if x == 0 {
                continue;
            }
            let f = x / pv;
            for row in v.iter_mut() {
                let c = row[s];
                if c != 0 {
                    row[j] = (row[j] + m - mul_mod(f, c, m)) % m;
                }
            }
            t[j] = (t[j] + m - mul_mod(f, t[s], m)) % m;
        }
        pivots.push(val);
        s += 1;
    }
    if t[pivots.len()..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut c = vec![0u64; k];
    for (i, &val) in pivots.iter().enumerate() {
        let pv = pp.p.pow(val);
        if !t[i].is_multiple_of(pv) {
            return None;
        }
        let ci = t[i] / pv;
        for (cj, &x) in c.iter_mut().zip(&tr[i]) {
            *cj = (*cj + mul_mod(ci, x, m)) % m;
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_over_z9() {
        // 3x = 0 in Z/9 has kernel Z/3 generated by 3
        let pp = PrimePower::new(3, 2);
        let (gens, inv) = kernel_mod(&[vec![3]], 1, pp);
        assert_eq!(inv, vec![1]);
        assert_eq!(gens, vec![vec![3]]);
        // x + 3y = 0: kernel free of rank 1
        let (gens, inv) = kernel_mod(&[vec![1, 3]], 2, pp);
        assert_eq!(inv, vec![2]);
        let g = &gens[0];
        assert_eq!((g[0] + 3 * g[1]) % 9, 0);
    }

    #[test]
    fn subquotient_layers() {
        let pp = PrimePower::new(2, 3);
        // Z/8 ⊕ Z/8 modulo <(2,0),(0,4)> = Z/2 ⊕ Z/4
        let x = vec![vec![1, 0], vec![0, 1]];
        let r = vec![vec![2, 0], vec![0, 4]];
        assert_eq!(subquotient_invariants(&x, &r, 2, pp), vec![1, 2]);
    }

    #[test]
    fn integer_snf() {
        assert_eq!(integer_cokernel(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(integer_cokernel(&[vec![2, 0]], 2), vec![2, 0]);
        assert_eq!(integer_cokernel(&[vec![2, 1], vec![0, 3]], 2), vec![6]);
    }

    #[test]
    fn solve_fp() {
        let a = vec![vec![1, 1], vec![1, 2]];
        let x = solve_mod_p(&a, &[0, 1], 3).unwrap();
        assert_eq!(((x[0] + x[1]) % 3, (x[0] + 2 * x[1]) % 3), (0, 1));
        assert!(solve_mod_p(&[vec![1, 1], vec![2, 2]], &[0, 1], 3).is_none());
    }

    #[test]
    fn span_solutions() {
        let pp = PrimePower::new(3, 3);
        let gens = vec![vec![3, 6, 0], vec![1, 1, 9], vec![2, 5, 9]];
        let combo = [4u64, 7, 11];
        let target: Vec<u64> = (0..3)
            .map(|j| (0..3).map(|i| combo[i] * gens[i][j]).sum::<u64>() % 27)
            .collect();
        let c = solve_span(&gens, &target, 3, pp).unwrap();
        for j in 0..3 {
            let s: u64 = (0..3).map(|i| c[i] * gens[i][j]).sum::<u64>() % 27;
            assert_eq!(s, target[j]);
        }
        // (1, 0, 0) is outside the span of (3, 0, 0)
        assert!(solve_span(&[vec![3, 0, 0]], &[1, 0, 0], 3, pp).is_none());
        assert!(solve_span(&[vec![3, 0, 0]], &[0, 1, 0], 3, pp).is_none());
        assert_eq!(solve_span(&[vec![3, 0, 0]], &[9, 0, 0], 3, pp), Some(vec![3]));
    }

    #[test]
    fn matrix_inverse() {
        let pp = PrimePower::new(5, 2);
        let a = vec![vec![2, 5], vec![3, 1]];
        let b = inverse_mod(&a, pp).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: u64 = (0..2).map(|k| a[i][k] * b[k][j]).sum::<u64>() % 25;
                assert_eq!(s, u64::from(i == j));
            }
        }
        assert!(inverse_mod(&[vec![5, 0], vec![0, 1]], pp).is_none());
    }
}
