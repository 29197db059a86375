use std::sync::Arc;

use super::series::log_one_plus;
use super::LogDetError;
use crate::coeff::RingElement;
use crate::groupring::{ClassFunction, GroupRingElement};
use crate::groups::{group_by_name, GroupError};

/// Smallest `s` with `(u ω^{-1})^{p^s} ≡ 1 mod p`.
fn radical_exponent(u: &GroupRingElement) -> Result<u32, LogDetError> {
    let p = u.ring().p();
    let res = u.with_precision(1)?;
    let a = res.aug();
    let a_inv = a.inverse().map_err(|_| LogDetError::NotAUnit)?;
    let mut v = res.scale(&a_inv);
    let one = GroupRingElement::one(res.ring(), res.group());
    for s in 0..64 {
        if v == one {
            return Ok(s);
        }
        v = v.pow(p as u128);
    }
    Err(LogDetError::Domain("unit is not 1 modulo the radical".into()))
}

/// `Γ(u)`, with `s` extra p-powerings beyond the minimal number.
///
/// `u = ω·v` with `ω` Teichmüller; `v` is read as its canonical lift and the result is exact
/// for that lift mod `p^N`. Other lifts agree mod `p^{N-1}`.
pub fn gamma_with_working_precision(u: &GroupRingElement, extra: u32) -> Result<ClassFunction, LogDetError> {
    let ring = u.ring();
    let p = ring.p();
    let n = ring.precision();
    let group = u.group();
    if !group.is_p_group(p) {
        return Err(GroupError::NotAPGroup(group.name().to_string()).into());
    }
    if !u.is_unit() {
        return Err(LogDetError::NotAUnit);
    }
    let s = radical_exponent(u)? + extra;
    let w = n + s + 1;
    // ω is split off before lifting, so Γ vanishes exactly on μ × G
    let omega = ring.teichmuller(&u.aug().reduce()?)?;
    let v = u.scale(&omega.inverse()?).with_precision(w)?;
    let rw = v.ring().clone();
    let y = v.pow((p as u128).pow(s)).sub(&GroupRingElement::one(&rw, group));
    let log = log_one_plus(&y, w)?;
    let z = log.scale_int(p as i64).sub(&log.psi()).classproj();
    let g = z.div_p_pow(s + 1).map_err(|_| LogDetError::Domain("(p - Ψ)Log is not divisible as expected".into()))?;
    Ok(g.with_precision(n)?)
}

/// The integral logarithm `Γ: O[G]^× → O[𝒞_G]` for a p-group `G`.
pub fn gamma_full(u: &GroupRingElement) -> Result<ClassFunction, LogDetError> {
    gamma_with_working_precision(u, 0)
}

/// `Γ` on `1 + I(O[G])`.
pub fn gamma_i(u: &GroupRingElement) -> Result<ClassFunction, LogDetError> {
    if u.aug() != u.ring().one() {
        return Err(LogDetError::Domain("augmentation is not 1".into()));
    }
    gamma_full(u)
}

/// `Γ_R(x) = (1/p)(p − φ) log(x/ω(x))` on `O^×`.
pub fn gamma_r(x: &RingElement) -> Result<RingElement, LogDetError> {
    let trivial = Arc::new(group_by_name("C1")?);
    Ok(gamma_full(&GroupRingElement::scalar(&trivial, x))?.get(0))
}
