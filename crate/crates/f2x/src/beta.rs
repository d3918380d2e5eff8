//! Fourier coefficients of the two product weights: the exact coefficient
//! function `beta` of the complete product (closed form and convolution
//! oracle), its truncated counterpart `beta_trunc`, and the two small
//! counting lemmas used to control truncation errors.
//!
//! The complete product here is the combined local weight
//! `u_r(f) = norm(r) * Lambda_r(f+1) * tau2_r(f)`, which takes only the
//! values {0, 1, 4}; `beta` is its Fourier coefficient function over the
//! modulus formed by all primes of degree below the cut.

use num_traits::{One, Zero};

use crate::arith::{factor, is_irreducible, is_squarefree, primes_up_to};
use crate::fourier::{dft, dft_coefficient, ResidueTable};
use crate::laurent::{e_rat, frac_part, Sign, TorusPoint};
use crate::poly::{polys_below, Poly2};
use crate::sieve::{alpha, alpha_prime, h_tilde, lambda_tilde, CoeffTable};
use crate::{pow2_rat, Error, Rat, Result};

/// Largest convolution-modulus degree the exact DFT oracle accepts.
pub const CONV_DEGREE_LIMIT: i64 = 16;

/// `(1 - 2^-d)(1 + 3*2^-d)` for `d = deg r`: the mean of the combined local
/// weight, divided out so that each local factor has mean 1.
pub fn local_norm(r: &Poly2) -> Rat {
    assert!(is_irreducible(r), "local_norm: {r} must be prime");
    let d = r.deg().expect_finite();
    (Rat::one() - pow2_rat(-d)) * (Rat::one() + Rat::from_integer(3.into()) * pow2_rat(-d))
}

/// Combined local weight at the prime `r`: 0 when `f = 1` mod `r` (char 2:
/// -1 = 1), 4 when `f = 0`, and 1 otherwise.
pub fn u_r(r: &Poly2, f: &Poly2) -> Rat {
    assert!(is_irreducible(r), "u_r: {r} must be prime");
    let res = f.rem(r);
    if res.is_one() {
        Rat::zero()
    } else if res.is_zero() {
        Rat::from_integer(4.into())
    } else {
        Rat::one()
    }
}

/// Transform of the combined local weight: `1 + 2/2^d` when `r | g`, else
/// `(3 - e(g/r))/2^d`. Pinned against the genuine transform of the `u_r`
/// table in the tests.
pub fn u_r_hat(r: &Poly2, g: &Poly2) -> Rat {
    assert!(is_irreducible(r), "u_r_hat: {r} must be prime");
    let d = r.deg().expect_finite();
    if r.divides(g) {
        Rat::one() + Rat::from_integer(2.into()) * pow2_rat(-d)
    } else {
        let sign = e_rat(g, &frac_part(&Poly2::one(), r).expect("prime modulus"));
        (Rat::from_integer(3.into()) - sign.as_rat()) * pow2_rat(-d)
    }
}

/// Product of all primes of degree `< r_cap` (1 when the range is empty).
pub fn conv_modulus(r_cap: u32) -> Poly2 {
    if r_cap <= 1 {
        return Poly2::one();
    }
    primes_up_to(r_cap - 1)
        .iter()
        .fold(Poly2::one(), |acc, r| acc.mul(r))
}

// ---- The coefficient function: closed form and convolution oracle ----

/// Closed form for the coefficient at `lambda = t/s`: zero unless `s` is
/// squarefree with every prime factor of degree `< r_cap`; otherwise
/// `prod norm(r)^-1 * prod_{r not| s} u_r_hat(0) * prod_{r|s} u_r_hat(f(r))`
/// with the partial-fraction residue `f(r) = t * (s/r)^-1 mod r`.
pub fn beta_closed(lambda: &TorusPoint, r_cap: u32) -> Rat {
    let (t, s) = (lambda.num(), lambda.den());
    let fac = factor(s);
    if !fac.is_squarefree() {
        return Rat::zero();
    }
    if fac
        .factors
        .iter()
        .any(|(r, _)| r.deg().expect_finite() >= r_cap as i64)
    {
        return Rat::zero();
    }
    if r_cap <= 1 {
        return Rat::one(); // only lambda = 0 survives the factor check
    }
    let mut acc = Rat::one();
    for r in primes_up_to(r_cap - 1) {
        let factor = if r.divides(s) {
            let cof = s.divmod(&r).0;
            let inv = cof.inv_mod(&r).expect("squarefree: cofactor is a unit");
            u_r_hat(&r, &t.mulmod(&inv, &r))
        } else {
            u_r_hat(&r, &Poly2::zero())
        };
        acc *= factor / local_norm(&r);
    }
    acc
}

/// The pointwise product `lambda_tilde(r_cap, f+1) * h_tilde(r_cap, f)` as a
/// residue table mod [`conv_modulus`], normalized to mean-one local factors.
fn conv_table(r_cap: u32) -> Result<ResidueTable> {
    let m = conv_modulus(r_cap);
    let d = m.deg().expect_finite();
    if d > CONV_DEGREE_LIMIT {
        return Err(Error::CostGuard {
            what: "beta_conv",
            limit: CONV_DEGREE_LIMIT as u64,
            requested: d as u64,
        });
    }
    ResidueTable::from_fn(&m, |f| {
        let shifted = f.add(&Poly2::one());
        lambda_tilde(r_cap, &shifted) * h_tilde(r_cap, f)
    })
}

/// Convolution-side oracle: the coefficient read off a genuine transform of
/// the product table. Zero when `den(lambda)` is outside the support.
pub fn beta_conv(lambda: &TorusPoint, r_cap: u32) -> Result<Rat> {
    let m = conv_modulus(r_cap);
    if m.is_one() {
        return Ok(if lambda.is_zero() {
            Rat::one()
        } else {
            Rat::zero()
        });
    }
    if !lambda.den().divides(&m) {
        return Ok(Rat::zero());
    }
    let g = lambda.num().mul(&m.divmod(lambda.den()).0).rem(&m);
    dft_coefficient(&conv_table(r_cap)?, &g)
}

/// Every coefficient at once: the full transform of the product table, keyed
/// by reduced torus point. Zero coefficients are dropped.
pub fn beta_conv_table(r_cap: u32) -> Result<CoeffTable> {
    let mut out = CoeffTable::new();
    let m = conv_modulus(r_cap);
    if m.is_one() {
        out.add(TorusPoint::zero(), Rat::one());
        return Ok(out);
    }
    let hat = dft(&conv_table(r_cap)?)?;
    for (bits, value) in hat.values().iter().enumerate() {
        let point = TorusPoint::new(&Poly2::from_bits(bits as u64), &m)?;
        out.add(point, value.clone());
    }
    Ok(out)
}

// ---- Truncated coefficients ----

/// Walk the unit fractions `a/q` with `q` squarefree of degree `< cap`,
/// including `0/1`.
fn for_unit_fractions(cap: u32, mut visit: impl FnMut(&Poly2, &Poly2, &TorusPoint)) {
    for q in polys_below(cap.max(1)) {
        if q.is_zero() || !is_squarefree(&q) {
            continue;
        }
        if q.is_one() {
            visit(&Poly2::zero(), &q, &TorusPoint::zero());
            continue;
        }
        let d = q.deg().expect_finite() as u32;
        for a in polys_below(d) {
            if a.is_zero() || !a.gcd(&q).is_one() {
                continue;
            }
            let point = TorusPoint::new(&a, &q).expect("nonzero denominator");
            visit(&a, &q, &point);
        }
    }
}

/// Coefficient of the truncated product `Lambda_R(f+1) H_Q(f)` at `lambda`:
/// enumerate the unit fractions `a1/q1` of the shifted factor (each carrying
/// the twist `e(a1/q1)` from the `+1` shift) and solve for the majorant
/// fraction `lambda + a1/q1`, which contributes when its denominator has
/// degree `< q_cap` (non-squarefree denominators get coefficient 0).
pub fn beta_trunc(lambda: &TorusPoint, r_cap: u32, q_cap: u32) -> Rat {
    let mut acc = Rat::zero();
    for_unit_fractions(r_cap, |a1, q1, point| {
        let partner = lambda.add(point);
        if partner.den().deg().expect_finite() >= q_cap as i64 {
            return;
        }
        let twist = if q1.is_one() {
            Sign::Plus
        } else {
            e_rat(a1, &frac_part(&Poly2::one(), q1).expect("nonzero"))
        };
        acc += alpha(q1) * twist.as_rat() * alpha_prime(partner.den());
    });
    acc
}

/// The full truncated coefficient table, by the double enumeration over the
/// unit fractions of both factors. Cancelled entries are dropped, so every
/// key is a genuinely supported point.
pub fn beta_trunc_table(r_cap: u32, q_cap: u32) -> CoeffTable {
    let mut out = CoeffTable::new();
    for_unit_fractions(r_cap, |a1, q1, p1| {
        let twist = if q1.is_one() {
            Sign::Plus
        } else {
            e_rat(a1, &frac_part(&Poly2::one(), q1).expect("nonzero"))
        };
        let outer = alpha(q1) * twist.as_rat();
        for_unit_fractions(q_cap, |_, q2, p2| {
            out.add(p1.add(p2), &outer * &alpha_prime(q2));
        });
    });
    out
}

/// `|beta_trunc(lambda, r_cap, q_cap) - beta_conv(lambda, r_cap)|`: the
/// truncation error at one point, reported (never asserted) against the
/// asymptotic target.
pub fn beta_gap(lambda: &TorusPoint, r_cap: u32, q_cap: u32) -> Result<Rat> {
    let diff = beta_trunc(lambda, r_cap, q_cap) - beta_conv(lambda, r_cap)?;
    Ok(if diff < Rat::zero() { -diff } else { diff })
}

// ---- Counting lemmas ----

fn require_squarefree(p: &Poly2, what: &str) -> Result<()> {
    if p.is_zero() || !is_squarefree(p) {
        return Err(Error::Params(format!("{what}: {p} must be squarefree")));
    }
    Ok(())
}

/// `|sum e(a1/q1)|` over unit pairs `(a1, a2)` with
/// `a1/q1 + a2/q2 = b/r` on the torus. All three moduli must be squarefree
/// and `b` a unit mod `r`.
pub fn unit_pair_char_sum(b: &Poly2, r: &Poly2, q1: &Poly2, q2: &Poly2) -> Result<i64> {
    require_squarefree(r, "unit_pair_char_sum r")?;
    require_squarefree(q1, "unit_pair_char_sum q1")?;
    require_squarefree(q2, "unit_pair_char_sum q2")?;
    let target = TorusPoint::new(b, r)?;
    if target.den() != r {
        return Err(Error::Params(format!(
            "unit_pair_char_sum: {b} is not a unit mod {r}"
        )));
    }
    let mut acc = 0i64;
    for_unit_fractions_of(q1, |a1, point| {
        if target.add(point).den() == q2 {
            let twist = if q1.is_one() {
                Sign::Plus
            } else {
                e_rat(a1, &frac_part(&Poly2::one(), q1).expect("nonzero"))
            };
            acc += twist.as_i64();
        }
    });
    Ok(acc.abs())
}

/// Unit fractions of one fixed squarefree modulus.
fn for_unit_fractions_of(q: &Poly2, mut visit: impl FnMut(&Poly2, &TorusPoint)) {
    if q.is_one() {
        visit(&Poly2::zero(), &TorusPoint::zero());
        return;
    }
    let d = q.deg().expect_finite() as u32;
    for a in polys_below(d) {
        if a.is_zero() || !a.gcd(q).is_one() {
            continue;
        }
        let point = TorusPoint::new(&a, q).expect("nonzero denominator");
        visit(&a, &point);
    }
}

/// `#{a unit mod q : den(target + a/q) = s}` by enumeration.
pub fn denom_count(target: &TorusPoint, q: &Poly2, s: &Poly2) -> Result<u64> {
    require_squarefree(q, "denom_count q")?;
    let mut count = 0u64;
    for_unit_fractions_of(q, |_, point| {
        if target.add(point).den() == s {
            count += 1;
        }
    });
    Ok(count)
}
