use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{format_scalar, int, ratio, to_f64, Scalar};

/// `coeff · π^pi_power`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub coeff: Scalar,
    pub pi_power: u32,
}

impl PiMultiple {
    pub fn rational(c: Scalar) -> Self {
        PiMultiple { coeff: c, pi_power: 0 }
    }

    pub fn mul(&self, other: &PiMultiple) -> PiMultiple {
        PiMultiple { coeff: &self.coeff * &other.coeff, pi_power: self.pi_power + other.pi_power }
    }

    pub fn scale(&self, c: &Scalar) -> PiMultiple {
        PiMultiple { coeff: &self.coeff * c, pi_power: self.pi_power }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    /// Exact comparison, decided with rational enclosures of π of growing
    /// precision. Equal values with different π powers cannot occur for
    /// nonzero coefficients because π is transcendental.
    pub fn cmp_exact(&self, other: &PiMultiple) -> Ordering {
        if self.pi_power == other.pi_power {
            return self.coeff.cmp(&other.coeff);
        }
        if self.coeff.is_zero() || other.coeff.is_zero() {
            return sign(&self.coeff).cmp(&sign(&other.coeff));
        }
        let mut terms = 8;
        loop {
            let (lo, hi) = pi_enclosure(terms);
            let (a_lo, a_hi) = self.interval(&lo, &hi);
            let (b_lo, b_hi) = other.interval(&lo, &hi);
            if a_hi < b_lo {
                return Ordering::Less;
            }
            if b_hi < a_lo {
                return Ordering::Greater;
            }
            terms *= 2;
        }
    }

    fn interval(&self, lo: &Scalar, hi: &Scalar) -> (Scalar, Scalar) {
        let a = &self.coeff * num_traits::pow(lo.clone(), self.pi_power as usize);
        let b = &self.coeff * num_traits::pow(hi.clone(), self.pi_power as usize);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", format_scalar(&self.coeff)),
            1 => write!(f, "{}·π", format_scalar(&self.coeff)),
            p => write!(f, "{}·π^{p}", format_scalar(&self.coeff)),
        }
    }
}

fn sign(x: &Scalar) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Partial sums of `atan(1/x)` bracketing the true value.
fn atan_inv_bounds(x: i64, terms: usize) -> (Scalar, Scalar) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut sum = Scalar::zero();
    let mut pow = x.clone();
    for k in 0..terms {
        let t = Scalar::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        pow *= &x2;
    }
    let next = Scalar::new(BigInt::one(), pow * BigInt::from(2 * terms + 1));
    if terms % 2 == 0 {
        (sum.clone(), sum + next)
    } else {
        (sum.clone() - next, sum)
    }
}

/// Rational `(lo, hi)` with `lo < π < hi` from Machin's formula.
pub fn pi_enclosure(terms: usize) -> (Scalar, Scalar) {
    let (a_lo, a_hi) = atan_inv_bounds(5, terms);
    let (b_lo, b_hi) = atan_inv_bounds(239, terms);
    (int(16) * a_lo - int(4) * &b_hi, int(16) * a_hi - int(4) * &b_lo)
}

/// `W_n = ∫_0^{π/2} cos^n`, via `W_n = (n-1)/n · W_{n-2}`.
pub fn wallis(n: usize) -> PiMultiple {
    let mut w = if n % 2 == 0 {
        PiMultiple { coeff: ratio(1, 2), pi_power: 1 }
    } else {
        PiMultiple::rational(int(1))
    };
    let mut k = 2 + n % 2;
    while k <= n {
        w = w.scale(&ratio(k as i64 - 1, k as i64));
        k += 2;
    }
    w
}

/// Volume of the unit ball, `κ_n = 2 κ_{n-1} W_n`.
pub fn kappa(n: usize) -> PiMultiple {
    let mut k = PiMultiple::rational(int(1));
    for m in 1..=n {
        k = wallis(m).mul(&k).scale(&int(2));
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wallis_values() {
        assert_eq!(wallis(1), PiMultiple::rational(int(1)));
        assert_eq!(wallis(3), PiMultiple::rational(ratio(2, 3)));
        assert_eq!(wallis(2), PiMultiple { coeff: ratio(1, 4), pi_power: 1 });
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2), PiMultiple { coeff: int(1), pi_power: 1 });
        assert_eq!(kappa(3), PiMultiple { coeff: ratio(4, 3), pi_power: 1 });
        for n in 1..12 {
            assert_eq!(kappa(n), kappa(n - 1).mul(&wallis(n)).scale(&int(2)));
        }
        assert!((kappa(5).to_f64() - 8.0 * std::f64::consts::PI.powi(2) / 15.0).abs() < 1e-12);
    }

    #[test]
    fn pi_enclosure_brackets_pi() {
        let (lo, hi) = pi_enclosure(10);
        assert!(to_f64(&lo) <= std::f64::consts::PI && std::f64::consts::PI <= to_f64(&hi));
        assert!(to_f64(&(hi - lo)) < 1e-12);
    }

    #[test]
    fn exact_comparison() {
        let pi = PiMultiple { coeff: int(1), pi_power: 1 };
        assert_eq!(pi.cmp_exact(&PiMultiple::rational(ratio(22, 7))), Ordering::Less);
        assert_eq!(pi.cmp_exact(&PiMultiple::rational(ratio(333, 106))), Ordering::Greater);
    }
}
