use super::arith::gcd;
use super::level::{Level, Recipe};
use super::ring::{CoeffRing, RingElement};
use super::CoeffError;

/// `O[ζ_e]`: the value ring for character values of exponent-`e` groups, with the
/// Frobenius acting on `O` and sending `ζ ↦ ζ^u`, where `u ≡ 1` on the p-part of `e` and
/// `u ≡ p` on the prime-to-p part.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    pub ring: CoeffRing,
    pub base: CoeffRing,
    pub e: u64,
    pub zeta: RingElement,
    pub frob_exponent: u64,
}

pub fn cyclotomic_extend(base: &CoeffRing, e: u64) -> Result<CyclotomicRing, CoeffError> {
    if e == 0 {
        return Err(CoeffError::Domain("e must be positive".into()));
    }
    let p = base.p();
    let frob_exponent = {
        let mut pk = 1;
        while e.is_multiple_of(pk * p) {
            pk *= p;
        }
        let ep = e / pk;
        (1..=e).find(|&u| u % pk == 1 % pk && u % ep == p % ep && gcd(u, e) == 1).unwrap_or(1) % e.max(1)
    };
    if e <= 2 {
        let zeta = if e == 1 { base.one() } else { base.from_int(-1) };
        return Ok(CyclotomicRing { ring: base.clone(), base: base.clone(), e, zeta, frob_exponent });
    }
    let level = Level::get(&Recipe::Cyclo { base: Box::new(base.level.recipe.clone()), e }, base.precision())?;
    let ring = CoeffRing::from_level(level);
    let zeta = ring.generator();
    Ok(CyclotomicRing { ring, base: base.clone(), e, zeta, frob_exponent })
}

impl CyclotomicRing {
    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> RingElement {
        self.zeta.pow(k.rem_euclid(self.e as i64) as u128)
    }

    /// Image of a base-ring element.
    pub fn from_base(&self, x: &RingElement) -> Result<RingElement, CoeffError> {
        self.ring.embed(x)
    }

    /// Value of an integer polynomial in `ζ` (coefficients low degree first).
    pub fn eval_zeta_poly(&self, coeffs: &[i64]) -> RingElement {
        let mut acc = self.ring.zero();
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.zeta_pow(k as i64).scale(c));
            }
        }
        acc
    }

    pub fn with_precision(&self, prec: u32) -> Result<CyclotomicRing, CoeffError> {
        cyclotomic_extend(&self.base.with_precision(prec)?, self.e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let o = CoeffRing::integers(3, 2).unwrap();
        let c1 = cyclotomic_extend(&o, 1).unwrap();
        assert_eq!(c1.ring, o);
        let c2 = cyclotomic_extend(&o, 2).unwrap();
        assert_eq!(c2.zeta, o.from_int(-1));
        let c4 = cyclotomic_extend(&o, 4).unwrap();
        let i = &c4.zeta;
        assert_eq!(i.mul(i), c4.ring.from_int(-1));
        let fi = i.frobenius();
        // F(i)² = -1 and F(i) ≡ i^3 modulo the maximal ideal
        assert_eq!(fi.mul(&fi), c4.ring.from_int(-1));
        assert_eq!(fi, i.pow(3));
    }

    #[test]
    fn p_power_roots_are_fixed() {
        let o = CoeffRing::unramified(3, 2, 3).unwrap();
        let c9 = cyclotomic_extend(&o, 9).unwrap();
        assert_eq!(c9.zeta.frobenius(), c9.zeta);
        assert_eq!(c9.zeta.pow(9), c9.ring.one());
        let x = c9.from_base(&o.generator()).unwrap();
        assert_eq!(x.frobenius(), c9.from_base(&o.generator().frobenius()).unwrap());
    }
}
