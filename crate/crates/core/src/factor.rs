//! Trial-division factorisation `N = 2^s · p₁^s₁ ⋯ p_t^s_t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationProfile {
    pub n: u64,
    /// Exponent of 2.
    pub s: u32,
    /// Odd prime powers `(p, e)`, `p` strictly increasing.
    pub odd: Vec<(u64, u32)>,
}

impl FactorizationProfile {
    /// Number of distinct odd primes.
    pub fn t(&self) -> usize {
        self.odd.len()
    }

    /// All distinct prime divisors, 2 first when present.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps = Vec::with_capacity(self.odd.len() + 1);
        if self.s > 0 {
            ps.push(2);
        }
        ps.extend(self.odd.iter().map(|&(p, _)| p));
        ps
    }

    pub fn any_odd_prime_3_mod_4(&self) -> bool {
        self.odd.iter().any(|&(p, _)| p % 4 == 3)
    }
}

pub fn factorize(n: u64) -> Result<FactorizationProfile> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let mut m = n;
    let s = m.trailing_zeros();
    m >>= s;
    let mut odd = Vec::new();
    let mut p = 3u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            odd.push((p, e));
        }
        p += 2;
    }
    if m > 1 {
        odd.push((m, 1));
    }
    Ok(FactorizationProfile { n, s, odd })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.primes() == vec![n]).unwrap_or(false)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (i128::from(a % m), i128::from(m));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(i128::from(m)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let one = factorize(1).unwrap();
        assert_eq!((one.s, one.t()), (0, 0));
        let twelve = factorize(12).unwrap();
        assert_eq!((twelve.s, twelve.odd.clone(), twelve.t()), (2, vec![(3, 1)], 1));
        let f = factorize(360).unwrap();
        assert_eq!((f.s, f.odd.clone(), f.t()), (3, vec![(3, 2), (5, 1)], 2));
        assert_eq!(factorize(0), Err(Error::ZeroLevel));
    }

    #[test]
    fn profile_reconstructs_n() {
        for n in 1..2000u64 {
            let f = factorize(n).unwrap();
            let prod: u64 = (1u64 << f.s) * f.odd.iter().map(|&(p, e)| p.pow(e)).product::<u64>();
            assert_eq!(prod, n);
            assert!(f.odd.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.odd.iter().all(|&(p, _)| is_prime(p) && p % 2 == 1));
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(5, 8), Some(5));
        assert_eq!(mod_inverse(2, 8), None);
        assert_eq!(mod_inverse(3, 1), Some(0));
    }
}
