use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LaError;

/// Arithmetic modulo an odd prime below `2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldCtx {
    p: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self, LaError> {
        if !(3..1 << 32).contains(&p) || !is_prime(p) {
            return Err(LaError::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// Like [`FieldCtx::new`], additionally requiring that `p` not divide
    /// `modulus` (typically `2·|G|`).
    pub fn for_group(p: u64, modulus: u64) -> Result<Self, LaError> {
        let field = Self::new(p)?;
        if modulus.is_multiple_of(p) {
            return Err(LaError::PrimeDividesOrder { p, modulus });
        }
        Ok(field)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p - b as u64) % self.p) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.p - a as u64) as u32
        }
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u64;
        let mut b = base as u64 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            exp >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if (a as u64).is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn from_u64(&self, v: u64) -> u32 {
        (v % self.p) as u32
    }

    pub fn from_i128(&self, v: i128) -> u32 {
        v.rem_euclid(self.p as i128) as u32
    }

    /// `num / den` reduced mod p; `None` when `p | den`.
    pub fn ratio(&self, num: i128, den: i128) -> Option<u32> {
        Some(self.mul(self.from_i128(num), self.inv(self.from_i128(den))?))
    }
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct random primes in `[2^30, 2^31)` not dividing `avoid`,
/// drawn from a generator seeded with `seed`.
pub fn choose_primes(seed: u64, count: usize, avoid: u64, exclude: &[u64]) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime(candidate)
            && !avoid.is_multiple_of(candidate)
            && !out.contains(&candidate)
            && !exclude.contains(&candidate)
        {
            out.push(candidate);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(FieldCtx::new(2).is_err());
        assert!(FieldCtx::new(15).is_err());
        assert!(FieldCtx::new((1 << 32) + 15).is_err());
        assert!(matches!(FieldCtx::for_group(7, 2 * 5040), Err(LaError::PrimeDividesOrder { .. })));
        assert!(FieldCtx::for_group(11, 2 * 5040).is_ok());
    }

    #[test]
    fn chosen_primes_are_reproducible() {
        let a = choose_primes(42, 2, 10_080, &[]);
        let b = choose_primes(42, 2, 10_080, &[]);
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        for p in a {
            assert!(is_prime(p) && (1 << 30..1 << 31).contains(&p));
        }
        let c = choose_primes(42, 1, 10_080, &b);
        assert!(!b.contains(&c[0]));
    }

    #[test]
    fn inverse_of_many_random_elements() {
        let f = FieldCtx::new(2_147_483_629).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100_000 {
            let a = rng.gen_range(1..f.prime()) as u32;
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    proptest! {
        #[test]
        fn ring_laws(a in 0u32..1_000_003, b in 0u32..1_000_003, c in 0u32..1_000_003) {
            let f = FieldCtx::new(1_000_003).unwrap();
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.sub(a, b), b), a);
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.from_i128(-(a as i128)), f.neg(a));
        }
    }
}
