//! Dense polynomials over F_p (low degree first) and over Z, used for choosing moduli.

use super::arith::{inv_mod, mul_mod};

pub fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let k = r.len() - 1;
        let t = mul_mod(r[k], lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            let idx = k - dm + i;
            r[idx] = (r[idx] + p - mul_mod(t, mi, p)) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    rem(&prod, m, p)
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a monic polynomial by gcd with `x^(p^k) - x` for `k <= deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let mut xp = vec![0, 1];
    for _ in 1..=n / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_rem(&acc, &base, f, p);
            }
            base = mul_rem(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let g = gcd(f, &sub(&xp, &[0, 1], p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of degree `n` over F_p whose coefficients
/// `(c_{n-1}, ..., c_0)` are lexicographically smallest.
pub fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let total = p.pow(n as u32);
    for k in 0..total {
        let mut f = vec![0u64; n + 1];
        f[n] = 1;
        let mut t = k;
        for i in 0..n {
            f[i] = t % p;
            t /= p;
        }
        // f[0] varies fastest, so c_{n-1} is the most significant digit
        if f[0] == 0 && n > 1 {
            continue;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The e-th cyclotomic polynomial over Z, low degree first.
pub fn cyclotomic(e: u64) -> Vec<i64> {
    // x^e - 1 divided by every Φ_d with d | e, d < e
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            num = int_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

fn int_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (db..a.len()).rev() {
        let t = r[k];
        q[k - db] = t;
        for (i, &bi) in b.iter().enumerate() {
            r[k - db + i] -= t * bi;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(n: u64) -> u64 {
    super::arith::factor(n)
        .iter()
        .fold(n, |acc, &(q, _)| acc / q * (q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible_quadratic(c1: u64, c0: u64, p: u64) -> bool {
        (0..p).all(|x| !(x * x + c1 * x + c0).is_multiple_of(p))
    }

    #[test]
    fn quadratic_scan_matches_root_search() {
        for p in [2u64, 3, 5, 7] {
            for c1 in 0..p {
                for c0 in 0..p {
                    assert_eq!(
                        is_irreducible(&[c0, c1, 1], p),
                        brute_irreducible_quadratic(c1, c0, p)
                    );
                }
            }
        }
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
    }

    #[test]
    fn quartic_over_f2() {
        // x^4+x^2+1 = (x^2+x+1)^2 is reducible although it has no roots
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert_eq!(smallest_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(euler_phi(12), 4);
    }
}
