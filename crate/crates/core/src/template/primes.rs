use super::TemplateError;
use crate::config::Mode;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
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

/// Legendre symbol `(a / p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Some `x` with `x² ≡ -1 (mod q)`, `q ≡ 1 (mod 4)` prime; the smallest one.
pub fn sqrt_minus_one(q: u64) -> u64 {
    (2..q)
        .find(|&x| mul_mod(x, x, q) == q - 1)
        .expect("-1 is a square modulo a prime q = 1 (mod 4)")
}

/// Smallest `x` with `x² ≡ a (mod q)`.
pub fn sqrt_mod(a: u64, q: u64) -> Option<u64> {
    let a = a % q;
    (0..q).find(|&x| mul_mod(x, x, q) == a)
}

/// Result of the template prime search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeChoice {
    pub q: u64,
    pub lower: f64,
    /// The search left `[lower, 1.01·lower]`.
    pub widened: bool,
}

/// Search stops here and reports failure.
pub const PRIME_SEARCH_CAP: u64 = 1 << 40;

/// Smallest prime `q ≡ 1 (mod 4 p_R)` with `q ≥ lower`. Strict mode insists on
/// `q ≤ 1.01·lower`; practical mode keeps widening by the same factor and
/// flags it.
pub fn find_template_prime_from(lower: f64, p_r: u64, mode: Mode) -> Result<PrimeChoice, TemplateError> {
    let modulus = 4 * p_r;
    let start = lower.ceil().max(2.0) as u64;
    let mut q = start + (modulus + 1 - start % modulus) % modulus;
    if q < start {
        q += modulus;
    }
    while q < PRIME_SEARCH_CAP {
        if is_prime(q) {
            let widened = q as f64 > 1.01 * lower;
            if widened && mode.is_strict() {
                return Err(TemplateError::PrimeOutOfInterval {
                    q,
                    upper: 1.01 * lower,
                });
            }
            return Ok(PrimeChoice { q, lower, widened });
        }
        q += modulus;
    }
    Err(TemplateError::PrimeNotFound {
        lower,
        cap: PRIME_SEARCH_CAP,
    })
}

/// The prime for flexibility `m`: search from `(21 m)^{1/3}`.
pub fn find_template_prime(m: usize, p_r: u64, mode: Mode) -> Result<PrimeChoice, TemplateError> {
    find_template_prime_from((21.0 * m as f64).cbrt(), p_r, mode)
}

/// Vertex count of the LPS graph for `(p_R, q)`.
pub fn lps_order(p_r: u64, q: u64) -> u64 {
    let full = q * q * q - q;
    if legendre(p_r, q) == 1 {
        full / 2
    } else {
        full
    }
}

/// Desk-scale choice: smallest prime `q ≡ 1 (mod 4)`, `q ≠ p_R`, with `p_R` a
/// residue mod `q` and `(q³ - q)/2 ≥ 10 m`.
pub fn practical_template_prime(m: usize, p_r: u64) -> Result<u64, TemplateError> {
    let mut q = 5u64;
    while q < 1 << 20 {
        if q != p_r && is_prime(q) && legendre(p_r, q) == 1 && lps_order(p_r, q) >= 10 * m as u64 {
            return Ok(q);
        }
        q += 4;
    }
    Err(TemplateError::PrimeNotFound {
        lower: 10.0 * m as f64,
        cap: 1 << 20,
    })
}
