use super::LogDetError;
use crate::coeff::arith::{factorial_valuation, floor_log, inv_mod, valuation};
use crate::groupring::GroupRingElement;

/// `log(1 + y) mod p^target` for `y ≡ 0 mod p`, exact whenever `y` is exact mod `p^target`.
pub(crate) fn log_one_plus(y: &GroupRingElement, target: u32) -> Result<GroupRingElement, LogDetError> {
    let p = y.ring().p();
    let y = y.with_precision(target)?;
    if y.is_zero() {
        return Ok(y);
    }
    let v = y.valuation();
    if v == 0 {
        return Err(LogDetError::Domain("log needs an argument ≡ 1 mod p".into()));
    }
    let terms: Vec<u64> =
        (1u64..).take_while(|&k| k * v as u64 - floor_log(k, p) as u64 <= target as u64 + 1).filter(|&k| k * v as u64 - (valuation(k, p) as u64) < target as u64).collect();
    let guard = terms.iter().map(|&k| valuation(k, p)).max().unwrap_or(0);
    let work = y.with_precision(target + guard)?;
    let m = work.ring().modulus_value();
    let mut acc = GroupRingElement::zero(work.ring(), work.group());
    let mut pw = GroupRingElement::one(work.ring(), work.group());
    let mut next = 1u64;
    for &k in &terms {
        while next <= k {
            pw = pw.mul(&work);
            next += 1;
        }
        let vk = valuation(k, p);
        let unit = inv_mod((k / p.pow(vk)) % m, m).expect("unit part");
        let t = pw.div_p_pow(vk)?.scale_int(unit as i64);
        acc = if k % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
    }
    Ok(acc.with_precision(target)?)
}

/// `Log(u)` for `u ≡ 1 mod p`, the series `Σ (-1)^{k+1} (u-1)^k / k`.
pub fn gr_log(u: &GroupRingElement) -> Result<GroupRingElement, LogDetError> {
    if !u.group().is_p_group(u.ring().p()) {
        return Err(crate::groups::GroupError::NotAPGroup(u.group().name().to_string()).into());
    }
    let y = u.sub(&GroupRingElement::one(u.ring(), u.group()));
    log_one_plus(&y, u.ring().precision())
}

/// `Exp(a) = Σ a^k / k!` for `a ≡ 0 mod p` (`mod 4` when `p = 2`).
pub fn gr_exp(a: &GroupRingElement) -> Result<GroupRingElement, LogDetError> {
    let ring = a.ring();
    let p = ring.p();
    let n = ring.precision();
    if a.is_zero() {
        return Ok(GroupRingElement::one(ring, a.group()));
    }
    let v = a.valuation() as u64;
    if v == 0 || (p == 2 && v < 2) {
        return Err(LogDetError::Domain("exp needs a ≡ 0 mod p (mod 4 for p = 2)".into()));
    }
    // v_p(k!) <= (k - 1)/(p - 1)
    let terms: Vec<u64> = (1u64..)
        .take_while(|&k| k * v - (k - 1) / (p - 1) < n as u64 + 1)
        .filter(|&k| k * v - (factorial_valuation(k, p) as u64) < n as u64)
        .collect();
    let guard = terms.iter().map(|&k| factorial_valuation(k, p)).max().unwrap_or(0);
    let work = a.with_precision(n + guard)?;
    let m = work.ring().modulus_value();
    let one = GroupRingElement::one(work.ring(), work.group());
    let mut acc = one.clone();
    let mut pw = one;
    let mut unit = 1u64;
    let mut next = 1u64;
    for &k in &terms {
        while next <= k {
            pw = pw.mul(&work);
            unit = unit * ((next / p.pow(valuation(next, p))) % m) % m;
            next += 1;
        }
        let t = pw.div_p_pow(factorial_valuation(k, p))?.scale_int(inv_mod(unit, m).unwrap() as i64);
        acc = acc.add(&t);
    }
    Ok(acc.with_precision(n)?)
}
