//! Sieve weights: local factors at single primes, their products over all
//! primes below a degree cut, and the truncated series obtained by keeping
//! only small denominators in the Fourier expansion.
//!
//! Both weight families have one local factor per prime `r`:
//! the prime-detecting factor vanishes on multiples of `r` and slightly
//! overweights the rest, while the majorant factor overweights multiples of
//! `r` fourfold. Each local factor is `1 + (coefficient) * c_r(f)` with
//! `c_r` the unit character sum mod `r`, which is what makes the expansion
//! over squarefree moduli and its truncation work.

use std::collections::btree_map::{BTreeMap, Entry};

use num_traits::{One, Zero};

use crate::arith::{factor, is_irreducible, is_squarefree, mobius, phi, primes_up_to};
use crate::laurent::{e_rat, TorusPoint};
use crate::poly::{polys_below, Degree, Poly2};
use crate::{pow2, pow2_rat, rat_int, Error, Rat, Result};

/// Largest degree cut the dense expansions accept (`~4^q` table entries).
pub const EXPANSION_CUT_LIMIT: u32 = 14;

fn check_prime(r: &Poly2, what: &str) {
    assert!(is_irreducible(r), "{what}: modulus {r} must be prime");
}

// ---- Local factors ----

/// Prime-detecting local weight at `r`: 0 on multiples of `r`, else
/// `2^d/(2^d - 1)` with `d = deg r`. Mean value 1 over the residues mod `r`.
pub fn lambda_r(r: &Poly2, f: &Poly2) -> Rat {
    check_prime(r, "lambda_r");
    if r.divides(f) {
        Rat::zero()
    } else {
        let m = pow2(r.deg().expect_finite() as u64);
        Rat::new(m.clone(), m - 1)
    }
}

/// Majorant local weight at `r`: `4 * 2^d/(2^d + 3)` on multiples of `r`,
/// else `2^d/(2^d + 3)`. Mean value 1 over the residues mod `r`.
pub fn tau2_r(r: &Poly2, f: &Poly2) -> Rat {
    check_prime(r, "tau2_r");
    let m = pow2(r.deg().expect_finite() as u64);
    let den = m.clone() + 3;
    if r.divides(f) {
        Rat::new(4 * m, den)
    } else {
        Rat::new(m, den)
    }
}

/// Product of the prime-detecting factors over all primes of degree `< q`.
pub fn lambda_tilde(q: u32, f: &Poly2) -> Rat {
    if q <= 1 {
        return Rat::one();
    }
    primes_up_to(q - 1).iter().map(|r| lambda_r(r, f)).product()
}

/// Product of the majorant factors over all primes of degree `< q`.
pub fn h_tilde(q: u32, f: &Poly2) -> Rat {
    if q <= 1 {
        return Rat::one();
    }
    primes_up_to(q - 1).iter().map(|r| tau2_r(r, f)).product()
}

// ---- Expansion coefficients ----

/// Coefficient of the prime-detecting expansion at modulus `s`:
/// `mu(s)/phi(s)`. Zero on non-squarefree `s`; panics on `s = 0`.
pub fn alpha(s: &Poly2) -> Rat {
    Rat::new(mobius(s).into(), phi(s))
}

/// Coefficient of the majorant expansion at squarefree `s`:
/// the product of `3/(2^d + 3)` over the primes `r | s`. Zero on
/// non-squarefree `s`; panics on `s = 0`.
pub fn alpha_prime(s: &Poly2) -> Rat {
    assert!(!s.is_zero(), "alpha_prime(0) is not defined");
    let fac = factor(s);
    if !fac.is_squarefree() {
        return Rat::zero();
    }
    fac.factors
        .iter()
        .map(|(r, _)| {
            let m = pow2(r.deg().expect_finite() as u64);
            Rat::new(3.into(), m + 3)
        })
        .product()
}

/// Which expansion a coefficient table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaKind {
    /// Prime-detecting coefficients `mu(s)/phi(s)`.
    Plain,
    /// Majorant coefficients `prod 3/(2^d + 3)`.
    Prime,
}

impl AlphaKind {
    /// The coefficient this kind assigns to modulus `s`.
    pub fn coeff(self, s: &Poly2) -> Rat {
        match self {
            AlphaKind::Plain => alpha(s),
            AlphaKind::Prime => alpha_prime(s),
        }
    }
}

// ---- Truncated series ----

/// Unit character sum `c_s(f)` for squarefree `s`, via the closed form
/// `phi(g) * mu(s/g)` with `g = gcd(s, f)`.
fn unit_sum_int(s: &Poly2, f: &Poly2) -> i64 {
    use num_traits::ToPrimitive;
    if s.is_one() {
        return 1;
    }
    let g = if f.is_zero() { s.clone() } else { f.gcd(s) };
    let cof = s.divmod(&g).0;
    phi(&g).to_i64().expect("unit sum fits i64") * mobius(&cof)
}

fn unit_sum(s: &Poly2, f: &Poly2) -> Rat {
    rat_int(unit_sum_int(s, f))
}

fn truncated_series(kind: AlphaKind, q: u32, f: &Poly2) -> Rat {
    let mut acc = Rat::zero();
    for s in polys_below(q.max(1)) {
        if s.is_zero() || !is_squarefree(&s) {
            continue;
        }
        acc += kind.coeff(&s) * unit_sum(&s, f);
    }
    acc
}

/// Truncation of the prime-detecting expansion to moduli of degree `< q`.
/// The `s = 1` term contributes 1, so the `q <= 1` truncation is constant 1.
pub fn lambda_trunc(q: u32, f: &Poly2) -> Rat {
    truncated_series(AlphaKind::Plain, q, f)
}

/// A truncated expansion compiled for bulk evaluation: one residue table of
/// the unit character sum per squarefree modulus below the cut, so each
/// evaluation costs one reduction and one table lookup per modulus.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    terms: Vec<SeriesTerm>,
}

#[derive(Debug, Clone)]
struct SeriesTerm {
    modulus: Poly2,
    coeff: Rat,
    unit_sums: Vec<i64>,
}

impl TruncatedSeries {
    pub fn new(kind: AlphaKind, cap: u32) -> Result<TruncatedSeries> {
        if cap > EXPANSION_CUT_LIMIT {
            return Err(Error::CostGuard {
                what: "TruncatedSeries",
                limit: EXPANSION_CUT_LIMIT as u64,
                requested: cap as u64,
            });
        }
        let mut terms = Vec::new();
        for s in polys_below(cap.max(1)) {
            if s.is_zero() || !is_squarefree(&s) {
                continue;
            }
            let coeff = kind.coeff(&s);
            if coeff.is_zero() {
                continue;
            }
            let unit_sums = if s.is_one() {
                vec![1]
            } else {
                let d = s.deg().expect_finite() as u32;
                polys_below(d).map(|res| unit_sum_int(&s, &res)).collect()
            };
            terms.push(SeriesTerm {
                modulus: s,
                coeff,
                unit_sums,
            });
        }
        Ok(TruncatedSeries { terms })
    }

    /// Same value as the corresponding `lambda_trunc`/`h_trunc` call.
    pub fn eval(&self, f: &Poly2) -> Rat {
        let mut acc = Rat::zero();
        for t in &self.terms {
            let idx = f.rem(&t.modulus).bits_u64() as usize;
            match t.unit_sums[idx] {
                0 => {}
                c => acc += &t.coeff * rat_int(c),
            }
        }
        acc
    }
}

/// Truncation of the majorant expansion to moduli of degree `< q`.
pub fn h_trunc(q: u32, f: &Poly2) -> Rat {
    truncated_series(AlphaKind::Prime, q, f)
}

// ---- Fourier-side tables ----

/// A finitely supported function on the torus, used for the Fourier
/// expansions of truncated weights: `eval(f) = sum over entries of
/// value * e(f * point)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoeffTable {
    entries: BTreeMap<TorusPoint, Rat>,
}

impl CoeffTable {
    pub fn new() -> CoeffTable {
        CoeffTable::default()
    }

    /// Accumulate `value` at `point`, dropping the entry if the total is 0.
    pub fn add(&mut self, point: TorusPoint, value: Rat) {
        match self.entries.entry(point) {
            Entry::Vacant(e) => {
                if !value.is_zero() {
                    e.insert(value);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, point: &TorusPoint) -> Option<&Rat> {
        self.entries.get(point)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TorusPoint, &Rat)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest denominator degree in the support (`NegInf` when empty).
    pub fn support_bound(&self) -> Degree {
        self.entries
            .keys()
            .map(|p| p.den().deg())
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// `sum value * e(f * point)` over all entries.
    pub fn eval(&self, f: &Poly2) -> Rat {
        let mut acc = Rat::zero();
        for (point, value) in &self.entries {
            match e_rat(f, point) {
                crate::laurent::Sign::Plus => acc += value,
                crate::laurent::Sign::Minus => acc -= value,
            }
        }
        acc
    }
}

/// The Fourier expansion of a truncated weight as a table over the torus:
/// one entry `a/s -> coeff(s)` per squarefree `s` of degree `< q` and unit
/// residue `a` mod `s` (the `s = 1` modulus contributes the point 0).
pub fn alpha_table(kind: AlphaKind, q: u32) -> Result<CoeffTable> {
    if q > EXPANSION_CUT_LIMIT {
        return Err(Error::CostGuard {
            what: "alpha_table",
            limit: EXPANSION_CUT_LIMIT as u64,
            requested: q as u64,
        });
    }
    let mut table = CoeffTable::new();
    for s in polys_below(q.max(1)) {
        if s.is_zero() || !is_squarefree(&s) {
            continue;
        }
        let coeff = kind.coeff(&s);
        if s.is_one() {
            table.add(TorusPoint::zero(), coeff);
            continue;
        }
        let d = s.deg().expect_finite() as u32;
        for a in polys_below(d) {
            if a.is_zero() || !a.gcd(&s).is_one() {
                continue;
            }
            table.add(TorusPoint::new(&a, &s)?, coeff.clone());
        }
    }
    Ok(table)
}

/// `|coeff(s)| <= tau(s)^2 / 2^deg(s)`, the envelope used when bounding
/// truncation errors. Exposed for the tests that pin it down.
pub fn coeff_envelope(s: &Poly2) -> Rat {
    let t = crate::arith::tau(s);
    pow2_rat(-(s.deg().expect_finite())) * rat_int((t * t) as i64)
}
