//! Scalar p-adic logarithm and exponential with per-term precision bookkeeping.

use super::arith::{factorial_valuation, inv_mod, valuation};
use super::ring::RingElement;
use super::CoeffError;

/// Terms `k >= 1` of a series whose k-th term has valuation `val(k)` that survive below
/// `bound`; the scan stops once the lower bound `lower(k)` reaches `bound`.
fn contributing(bound: u32, val: impl Fn(u64) -> i64, lower: impl Fn(u64) -> i64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1u64;
    while lower(k) < bound as i64 {
        if val(k) < bound as i64 {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// `log(x) = Σ (-1)^{k+1} (x-1)^k / k` for `x ≡ 1 mod p`.
///
/// The stored value is exact modulo `p^N` (guard digits absorb the divisions); the
/// reported precision subtracts the largest `v_p(k)` among the contributing terms.
pub fn scalar_log(x: &RingElement) -> Result<RingElement, CoeffError> {
    let ring = x.ring().clone();
    let p = ring.p();
    let n = ring.precision();
    let y = x.sub(&ring.one());
    if y.coeffs().iter().any(|&c| c % p != 0) {
        return Err(CoeffError::Domain("log needs x ≡ 1 mod p".into()));
    }
    if y.is_zero() {
        return Ok(ring.zero().with_known_precision(x.known_precision()));
    }
    let v = y.valuation() as i64;
    let known = x.known_precision();
    let terms = contributing(
        n,
        |k| k as i64 * v - valuation(k, p) as i64,
        |k| k as i64 * v - (k as f64).log(p as f64).floor() as i64,
    );
    let guard = terms.iter().map(|&k| valuation(k, p)).max().unwrap_or(0);
    let work = ring.with_precision(n + guard)?;
    let yw = y.lift_precision(n + guard)?;
    let mut acc = work.zero();
    let mut pw = work.one();
    let mut next = 1u64;
    for &k in &terms {
        while next <= k {
            pw = pw.mul(&yw);
            next += 1;
        }
        let vk = valuation(k, p);
        let unit = k / p.pow(vk);
        let mut t = pw.clone();
        for _ in 0..vk {
            t = t.div_p()?;
        }
        let t = t.scale(inv_mod(unit, work.modulus_value()).unwrap() as i64);
        acc = if k % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
    }
    let dropped = terms
        .iter()
        .filter(|&&k| k as i64 * v - (valuation(k, p) as i64) < known as i64)
        .map(|&k| valuation(k, p))
        .max()
        .unwrap_or(0);
    Ok(acc.truncate(n)?.with_known_precision(known.saturating_sub(dropped)))
}

/// `exp(a) = Σ a^k / k!` for `a ≡ 0 mod p` (`mod 4` when `p = 2`).
pub fn scalar_exp(a: &RingElement) -> Result<RingElement, CoeffError> {
    let ring = a.ring().clone();
    let p = ring.p();
    let n = ring.precision();
    let v = a.valuation();
    if !a.is_zero() && (v == 0 || (p == 2 && v < 2)) {
        return Err(CoeffError::Domain("exp needs a ≡ 0 mod p (mod 4 for p = 2)".into()));
    }
    if a.is_zero() {
        return Ok(ring.one().with_known_precision(a.known_precision()));
    }
    let known = a.known_precision();
    let v = v as i64;
    let terms = contributing(
        n,
        |k| k as i64 * v - factorial_valuation(k, p) as i64,
        |k| k as i64 * v - (k as i64 - 1) / (p as i64 - 1),
    );
    let guard = terms.iter().map(|&k| factorial_valuation(k, p)).max().unwrap_or(0);
    let work = ring.with_precision(n + guard)?;
    let aw = a.lift_precision(n + guard)?;
    let mut acc = work.one();
    let mut pw = work.one();
    let mut next = 1u64;
    for &k in &terms {
        while next <= k {
            pw = pw.mul(&aw);
            next += 1;
        }
        let vk = factorial_valuation(k, p);
        let mut unit = 1u64;
        let m = work.modulus_value();
        for j in 1..=k {
            let vj = valuation(j, p);
            unit = unit * ((j / p.pow(vj)) % m) % m;
        }
        let mut t = pw.clone();
        for _ in 0..vk {
            t = t.div_p()?;
        }
        acc = acc.add(&t.scale(inv_mod(unit, m).unwrap() as i64));
    }
    let dropped = terms
        .iter()
        .filter(|&&k| k as i64 * v - (factorial_valuation(k, p) as i64) < known as i64)
        .map(|&k| factorial_valuation(k, p))
        .max()
        .unwrap_or(0);
    Ok(acc.truncate(n)?.with_known_precision(known.saturating_sub(dropped)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;

    #[test]
    fn log_of_four() {
        let r = CoeffRing::integers(3, 4).unwrap();
        let l = scalar_log(&r.from_int(4)).unwrap();
        assert_eq!(l.as_integer(), Some(48));
        assert_eq!(l.known_precision(), 3);
        assert!(scalar_log(&r.from_int(2)).is_err());
        assert_eq!(scalar_log(&r.one()).unwrap(), r.zero());
        assert_eq!(scalar_exp(&r.zero()).unwrap(), r.one());
    }

    #[test]
    fn log_against_high_precision_oracle() {
        // Log(4) at N = 6 computed independently with rationals truncated at 200 terms
        let r = CoeffRing::integers(3, 6).unwrap();
        let m = 729i128;
        let mut acc = 0i128;
        for k in 1..60i128 {
            // 3^k / k with k's 3-part removed exactly
            let mut num = 1i128;
            for _ in 0..k {
                num *= 3;
                if num > 1 << 100 {
                    break;
                }
            }
            let mut kk = k;
            while kk % 3 == 0 {
                kk /= 3;
                num /= 3;
            }
            let inv = inv_mod((kk % m) as u64, m as u64).unwrap() as i128;
            let term = (num % m) * inv % m;
            acc = if k % 2 == 1 { acc + term } else { acc - term }.rem_euclid(m);
        }
        assert_eq!(scalar_log(&r.from_int(4)).unwrap().as_integer(), Some(acc as u64));
    }
}
