//! Multiplicative arithmetic over `F2[x]`: irreducibility, prime enumeration,
//! factorization, and the classical arithmetic functions.
//!
//! Primes (monic irreducibles; every nonzero polynomial here is monic) are
//! enumerated once per degree by a sieve over coefficient bit-strings and
//! memoized process-wide. The cache is build-once/read-many: growing it takes
//! a write lock, after which any number of threads may read concurrently.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{polys_of_deg, Degree, Poly2};
use crate::{pow2, Rat};

// ---- Irreducibility ----

/// Rabin's test: `f` of degree `n` is irreducible iff `x^(2^n) = x (mod f)`
/// and `gcd(x^(2^(n/p)) + x, f) = 1` for every prime `p | n`.
/// Constants and 0 are not irreducible.
pub fn is_irreducible(f: &Poly2) -> bool {
    let n = match f.deg() {
        Degree::Finite(d) if d >= 1 => d as u32,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    // x must be a unit mod f, i.e. f(0) != 0, except for f = x itself.
    let x = Poly2::x();
    if !f.coeff(0) {
        return false;
    }
    // Frobenius ladder: x^(2^k) mod f by repeated squaring.
    let frob = |k: u32| -> Poly2 {
        let mut t = x.rem(f);
        for _ in 0..k {
            t = t.mulmod(&t, f);
        }
        t
    };
    if frob(n).add(&x.rem(f)) != Poly2::zero() {
        return false;
    }
    for p in distinct_prime_divisors(n) {
        let g = frob(n / p).add(&x.rem(f));
        if !g.gcd(f).is_one() {
            return false;
        }
    }
    true
}

fn distinct_prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Trial-division irreducibility check, usable for degree <= 4 sanity tests.
pub fn is_irreducible_trial(f: &Poly2) -> bool {
    let n = match f.deg() {
        Degree::Finite(d) if d >= 1 => d,
        _ => return false,
    };
    for d in 1..=(n / 2) as u32 {
        for g in polys_of_deg(d) {
            if g.divides(f) {
                return false;
            }
        }
    }
    true
}

// ---- Prime cache ----

struct PrimeCache {
    /// `by_deg[d]` = sorted primes of degree `d` (index 0 unused).
    by_deg: Vec<Arc<Vec<Poly2>>>,
}

static PRIME_CACHE: RwLock<PrimeCache> = RwLock::new(PrimeCache { by_deg: Vec::new() });

/// Sieve all degrees up to `maxdeg` in one pass: mark every product with a
/// factor of positive degree, keep what survives.
fn sieve_up_to(maxdeg: u32) -> Vec<Arc<Vec<Poly2>>> {
    assert!(maxdeg <= 28, "prime sieve capped at degree 28");
    let size = 1usize << (maxdeg + 1);
    let mut composite = vec![false; size];
    let mut by_deg: Vec<Vec<Poly2>> = vec![Vec::new(); maxdeg as usize + 1];
    for bits in 2..size as u64 {
        if composite[bits as usize] {
            continue;
        }
        let f = Poly2::from_bits(bits);
        let d = f.deg().expect_finite() as u32;
        by_deg[d as usize].push(f.clone());
        // Mark f*g for all g of positive degree with deg(f*g) <= maxdeg.
        if 2 * d <= maxdeg {
            for g_bits in 2..(1u64 << (maxdeg - d) + 1) {
                let prod = f.mul(&Poly2::from_bits(g_bits));
                if prod.deg() <= Degree::Finite(maxdeg as i64) {
                    composite[prod.bits_u64() as usize] = true;
                }
            }
        }
    }
    by_deg.into_iter().map(Arc::new).collect()
}

/// Primes of degree exactly `d`, from the process-wide cache.
pub fn primes_of_degree(d: u32) -> Arc<Vec<Poly2>> {
    assert!(d >= 1, "no primes of degree 0");
    {
        let cache = PRIME_CACHE.read().unwrap();
        if (d as usize) < cache.by_deg.len() {
            return Arc::clone(&cache.by_deg[d as usize]);
        }
    }
    let mut cache = PRIME_CACHE.write().unwrap();
    if (d as usize) >= cache.by_deg.len() {
        cache.by_deg = sieve_up_to(d);
    }
    Arc::clone(&cache.by_deg[d as usize])
}

/// All primes of degree at most `maxdeg`, sorted by (degree, bits).
pub fn primes_up_to(maxdeg: u32) -> Vec<Poly2> {
    let mut out = Vec::new();
    for d in 1..=maxdeg {
        out.extend(primes_of_degree(d).iter().cloned());
    }
    out
}

/// Number of primes of degree exactly `d`.
pub fn prime_count(d: u32) -> usize {
    primes_of_degree(d).len()
}

// ---- Factorization ----

/// A factorization into primes with multiplicities, sorted by (degree, bits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(Poly2, u32)>,
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }
}

/// Factor a nonzero polynomial by trial division against the prime cache.
/// Panics on zero input.
pub fn factor(f: &Poly2) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut rem = f.clone();
    let mut factors = Vec::new();
    let deg = f.deg().expect_finite() as u32;
    'outer: for d in 1..=deg {
        if rem.deg() == Degree::Finite(0) {
            break;
        }
        // Anything surviving trial division up to half its degree is prime.
        if (rem.deg().expect_finite() as u32) < 2 * d {
            break 'outer;
        }
        for r in primes_of_degree(d).iter() {
            let mut mult = 0;
            loop {
                let (q, rest) = rem.divmod(r);
                if !rest.is_zero() {
                    break;
                }
                rem = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((r.clone(), mult));
            }
        }
    }
    if rem.deg() > Degree::Finite(0) {
        factors.push((rem, 1));
    }
    factors.sort();
    Factorization { factors }
}

// ---- Arithmetic functions ----
// All of these reject the zero polynomial; for the unit 1 they take their
// empty-product values (mu = 1, phi = 1, tau = 1, prime weight 0).

/// Moebius function: 0 unless squarefree, else `(-1)^(number of prime factors)`.
pub fn mobius(f: &Poly2) -> i64 {
    assert!(!f.is_zero(), "mobius of 0 is undefined");
    let fac = factor(f);
    if !fac.is_squarefree() {
        return 0;
    }
    if fac.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler phi: the number of units mod `f`.
pub fn phi(f: &Poly2) -> BigInt {
    assert!(!f.is_zero(), "phi of 0 is undefined");
    let mut out = BigInt::one();
    for (r, m) in factor(f).factors {
        let d = r.deg().expect_finite() as u64;
        out *= pow2(d * m as u64) - pow2(d * (m as u64 - 1));
    }
    out
}

/// Divisor count.
pub fn tau(f: &Poly2) -> u64 {
    assert!(!f.is_zero(), "tau of 0 is undefined");
    factor(f).factors.iter().map(|&(_, m)| m as u64 + 1).product()
}

/// Whether `f` has no repeated prime factor.
pub fn is_squarefree(f: &Poly2) -> bool {
    assert!(!f.is_zero(), "squarefreeness of 0 is undefined");
    factor(f).is_squarefree()
}

/// Prime-degree weight: `deg f` when `f` is prime, else 0.
pub fn lambda_prime(f: &Poly2) -> u64 {
    assert!(!f.is_zero(), "prime weight of 0 is undefined");
    if is_irreducible(f) {
        f.deg().expect_finite() as u64
    } else {
        0
    }
}

/// Sum of `tau(f)^B` over all nonzero `f` of degree below `n`.
pub fn tau_power_sum(n: u32, b: u32) -> Rat {
    assert!((1..=24).contains(&n), "tau_power_sum limited to n <= 24");
    let mut acc = BigInt::from(0);
    for bits in 1..(1u64 << n) {
        let t = BigInt::from(tau(&Poly2::from_bits(bits)));
        acc += t.pow(b);
    }
    Rat::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::polys_below;

    fn p(s: &str) -> Poly2 {
        Poly2::parse(s).unwrap()
    }

    #[test]
    fn prime_counts_small_degrees() {
        assert_eq!(
            (1..=5).map(prime_count).collect::<Vec<_>>(),
            vec![2, 1, 2, 3, 6]
        );
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for f in polys_below(9) {
            assert_eq!(
                is_irreducible(&f),
                is_irreducible_trial(&f),
                "disagreement at {f}"
            );
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            factor(&p("x^4+x^2+1")).factors,
            vec![(p("x^2+x+1"), 2)],
            "x^4+x^2+1 = (x^2+x+1)^2"
        );
        assert_eq!(
            factor(&p("x^3+1")).factors,
            vec![(p("x+1"), 1), (p("x^2+x+1"), 1)]
        );
        assert_eq!(factor(&p("x^2+1")).factors, vec![(p("x+1"), 2)]);
        assert_eq!(factor(&p("1")).factors, vec![]);
    }

    #[test]
    fn factor_round_trips() {
        for f in polys_below(10) {
            if f.is_zero() {
                continue;
            }
            let mut prod = Poly2::one();
            for (r, m) in factor(&f).factors {
                assert!(is_irreducible(&r));
                for _ in 0..m {
                    prod = prod.mul(&r);
                }
            }
            assert_eq!(prod, f);
        }
    }

    #[test]
    fn arithmetic_function_examples() {
        let f = p("x^3+1");
        assert_eq!(phi(&f), BigInt::from(3));
        assert_eq!(tau(&f), 4);
        assert_eq!(mobius(&f), 1);
        assert_eq!(mobius(&p("x^2+1")), 0);
        assert_eq!(mobius(&p("x")), -1);
        assert_eq!(lambda_prime(&p("x^3+x+1")), 3);
        assert_eq!(lambda_prime(&p("x^2+1")), 0);
        assert_eq!(lambda_prime(&p("1")), 0);
    }

    #[test]
    fn tau_power_sums() {
        assert_eq!(tau_power_sum(3, 1), crate::rat_int(17));
        assert_eq!(tau_power_sum(1, 7), crate::rat_int(1));
        assert_eq!(tau_power_sum(3, 0), crate::rat_int(7), "counts nonzero f only");
    }

    #[test]
    fn phi_divisor_sum_is_box_size() {
        // sum over monic d | f of phi(d) = 2^(deg f), checked for deg <= 8.
        for f in polys_below(9) {
            if f.is_zero() {
                continue;
            }
            let mut acc = BigInt::from(0);
            let df = f.deg().expect_finite();
            for d_bits in 1..(1u64 << (df + 1)) {
                let d = Poly2::from_bits(d_bits);
                if d.divides(&f) {
                    acc += phi(&d);
                }
            }
            assert_eq!(acc, pow2(df as u64), "divisor sum failed at {f}");
        }
    }

    #[test]
    fn prime_count_envelope() {
        // #primes of degree n is at most 2 * 2^n / n; exact check up to 18.
        for n in 1..=18u32 {
            let count = prime_count(n) as u64;
            assert!(
                count as u128 * n as u128 <= 2u128 << n,
                "envelope failed at degree {n}: {count}"
            );
        }
    }

    #[test]
    fn cache_is_safe_for_concurrent_readers() {
        let threads: Vec<_> = (0..8)
            .map(|i| {
                std::thread::spawn(move || {
                    let d = 1 + (i % 6) as u32;
                    primes_of_degree(d).len()
                })
            })
            .collect();
        let counts: Vec<usize> = threads.into_iter().map(|t| t.join().unwrap()).collect();
        for (i, c) in counts.into_iter().enumerate() {
            assert_eq!(c, prime_count(1 + (i % 6) as u32));
        }
    }
}
