//! Exact rationals for the simplex inner loop: machine-word fractions with
//! checked arithmetic, promoted to arbitrary precision only on overflow.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub(super) enum Num {
    /// Reduced fraction with positive denominator.
    Small(i64, i64),
    Big(Rational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduces `n / d` (with `d > 0`) and narrows it to a word pair when possible.
fn from_wide(n: i128, d: i128) -> Num {
    debug_assert!(d > 0);
    if n == 0 {
        return Num::Small(0, 1);
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
    let (n, d) = (n / g, d / g);
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) if n != i64::MIN => Num::Small(n, d),
        _ => Num::Big(Rational::new(BigInt::from(n), BigInt::from(d))),
    }
}

fn narrow(value: Rational) -> Num {
    match (value.numer().to_i64(), value.denom().to_i64()) {
        (Some(n), Some(d)) if n != i64::MIN => Num::Small(n, d),
        _ => Num::Big(value),
    }
}

impl Num {
    pub(super) fn zero() -> Self {
        Num::Small(0, 1)
    }

    pub(super) fn one() -> Self {
        Num::Small(1, 1)
    }

    pub(super) fn from_rational(value: &Rational) -> Self {
        narrow(value.clone())
    }

    pub(super) fn to_rational(&self) -> Rational {
        match self {
            Num::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(r) => r.clone(),
        }
    }

    fn big(&self) -> std::borrow::Cow<'_, Rational> {
        match self {
            Num::Small(..) => std::borrow::Cow::Owned(self.to_rational()),
            Num::Big(r) => std::borrow::Cow::Borrowed(r),
        }
    }

    pub(super) fn is_zero(&self) -> bool {
        match self {
            Num::Small(n, _) => *n == 0,
            Num::Big(r) => r.is_zero(),
        }
    }

    pub(super) fn is_one(&self) -> bool {
        match self {
            Num::Small(n, d) => *n == 1 && *d == 1,
            Num::Big(r) => r.is_one(),
        }
    }

    pub(super) fn is_positive(&self) -> bool {
        match self {
            Num::Small(n, _) => *n > 0,
            Num::Big(r) => r.is_positive(),
        }
    }

    pub(super) fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(r) => r.is_negative(),
        }
    }

    pub(super) fn neg(&self) -> Self {
        match self {
            Num::Small(n, d) => Num::Small(-n, *d),
            Num::Big(r) => Num::Big(-r),
        }
    }

    pub(super) fn recip(&self) -> Self {
        match self {
            Num::Small(n, d) if *n > 0 => Num::Small(*d, *n),
            Num::Small(n, d) => Num::Small(-d, -n),
            Num::Big(r) => narrow(r.recip()),
        }
    }

    pub(super) fn mul(&self, other: &Num) -> Num {
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            // cross-reduce first so the products rarely overflow
            let g1 = a.gcd(d).max(1);
            let g2 = c.gcd(b).max(1);
            let n = (a / g1) as i128 * (c / g2) as i128;
            let m = (b / g2) as i128 * (d / g1) as i128;
            if let (Ok(n), Ok(m)) = (i64::try_from(n), i64::try_from(m)) {
                if n != i64::MIN {
                    return Num::Small(n, m);
                }
            }
            return from_wide(n, m);
        }
        narrow(self.big().as_ref() * other.big().as_ref())
    }

    pub(super) fn add(&self, other: &Num) -> Num {
        if let (Num::Small(a, b), Num::Small(c, d)) = (self, other) {
            if b == d {
                return from_wide(*a as i128 + *c as i128, *b as i128);
            }
            let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
            return from_wide(n, *b as i128 * *d as i128);
        }
        narrow(self.big().as_ref() + other.big().as_ref())
    }

    pub(super) fn sub(&self, other: &Num) -> Num {
        self.add(&other.neg())
    }

    /// `self - f * x`
    pub(super) fn sub_mul(&self, f: &Num, x: &Num) -> Num {
        self.sub(&f.mul(x))
    }

    pub(super) fn div(&self, other: &Num) -> Num {
        self.mul(&other.recip())
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Num {}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Num {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Num::Small(a, b), Num::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.big().as_ref().cmp(other.big().as_ref()),
        }
    }
}
