//! Arithmetic modulo the Mersenne prime `2^61 - 1`.

pub const P: u64 = (1 << 61) - 1;

/// Reduces a product of two field elements (anything below `2^122`).
#[inline]
pub fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let s = lo + hi;
    let s = (s & P) + (s >> 61);
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

/// Embeds a signed integer.
pub fn from_i64(x: i64) -> u64 {
    let m = (x as i128).rem_euclid(P as i128);
    m as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mul_matches_wide_arithmetic(a in 0..P, b in 0..P) {
            let expect = ((a as u128 * b as u128) % P as u128) as u64;
            prop_assert_eq!(mul(a, b), expect);
        }

        #[test]
        fn inverse_is_inverse(a in 1..P) {
            prop_assert_eq!(mul(a, inv(a)), 1);
        }
    }

    #[test]
    fn negatives_wrap() {
        assert_eq!(add(from_i64(-5), 5), 0);
        assert_eq!(sub(0, 1), P - 1);
    }
}
