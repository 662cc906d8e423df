//! Small-prime utilities. Nothing here is cached across calls; each sieve is
//! local to the caller.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes in the closed range `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    if hi <= 50_000_000 {
        return primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect();
    }
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// The `count` smallest primes, starting at 2.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = count.max(6) as f64;
    let mut limit = (k * (k.ln() + k.ln().ln())).ceil() as u64 + 16;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

/// The `count` smallest odd primes, starting at 3.
pub fn first_odd_primes(count: usize) -> Vec<u64> {
    first_primes(count + 1).split_off(1)
}
