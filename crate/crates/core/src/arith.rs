//! Small integer helpers: primality, factoring, modular arithmetic.

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `m` by trial division.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut out = m;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out = out / d * (d - 1);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out = out / m * (m - 1);
    }
    out
}

/// Inverse of `a` modulo `m` for gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// All solutions `t` of `t*a = b (mod m)`, in ascending order.
pub fn solve_linear_congruence(a: u64, b: u64, m: u64) -> Vec<u64> {
    let g = gcd(a % m, m);
    if b % g != 0 {
        return Vec::new();
    }
    let (a1, b1, m1) = (a % m / g, b / g, m / g);
    let t0 = (b1 as u128 * mod_inverse(a1, m1).expect("coprime after division") as u128
        % m1 as u128) as u64;
    (0..g).map(|j| t0 + j * m1).collect()
}

/// Gaussian binomial coefficient [m choose k]_q.
pub fn gaussian_binomial(m: u32, k: u32, q: u64) -> u128 {
    if k > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= qpow(q, m - i) - 1;
        den *= qpow(q, i + 1) - 1;
    }
    num / den
}

fn qpow(q: u64, e: u32) -> u128 {
    (q as u128).pow(e)
}
