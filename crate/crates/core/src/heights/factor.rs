//! Integer factorization: trial division by primes below 10⁶, then
//! Miller–Rabin and Brent's variant of Pollard rho on the cofactor.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(p, &is)| is.then_some(p as u32))
            .collect()
    })
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with the first thirteen prime bases: deterministic below
/// 3.3·10²⁴ and a strong probable-prime test above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if n.is_even() {
        return two;
    }
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = two.clone();
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_large(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(v) => BigUint::from(rho_u64(v)),
        None => rho_big(&n),
    };
    let other = &n / &d;
    split_large(d, out);
    split_large(other, out);
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `0` and `1`
/// have no factors.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        let pb = u64::from(p);
        if let Some(r) = rest.to_u64() {
            if pb * pb > r {
                break;
            }
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
    }
    if rest.is_one() {
        return out;
    }
    let limit = u64::from(TRIAL_LIMIT);
    if rest.to_u64().is_some_and(|r| r < limit * limit) {
        out.push((rest, 1));
        return out;
    }
    let mut big = Vec::new();
    split_large(rest, &mut big);
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Natural logarithm of an arbitrarily large integer.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn as_u64(f: Vec<(BigUint, u32)>) -> Vec<(u64, u32)> {
        f.into_iter().map(|(p, e)| (p.to_u64().unwrap(), e)).collect()
    }

    #[test]
    fn small_numbers_match_trial_division() {
        for n in 1..5000u64 {
            assert_eq!(as_u64(factorize(&BigUint::from(n))), brute_factor(n), "n={n}");
        }
    }

    #[test]
    fn semiprimes_beyond_trial_range() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(as_u64(factorize(&BigUint::from(p * q))), vec![(p, 1), (q, 1)]);
        let r = 4_294_967_311u64; // prime just above 2^32
        assert_eq!(as_u64(factorize(&BigUint::from(r * 3 * 3))), vec![(3, 2), (r, 1)]);
        let big = BigUint::from(18_446_744_073_709_551_557u64) * BigUint::from(1_000_000_007u64);
        let f = factorize(&big);
        assert_eq!(f.len(), 2);
        assert_eq!(f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)), big);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        let m61 = (BigUint::one() << 61u32) - 1u32;
        assert!(is_prime(&m61));
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m61)));
    }

    #[test]
    fn logs() {
        assert!((ln_big(&BigUint::from(1000u32)) - 1000f64.ln()).abs() < 1e-12);
        let huge = BigUint::one() << 5000u32;
        assert!((ln_big(&huge) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
