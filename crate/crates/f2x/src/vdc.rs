//! The top-level construction: parameter derivation, the two van der Corput
//! weights, their exponential sums over boxes, the closed forms they must
//! match, and the grid scans that certify (or refute) the density-bound
//! chain at a concrete parameter choice.
//!
//! Everything here is exact rational arithmetic. The asymptotic inequalities
//! of the underlying argument are *reported* as verdicts at desk scale; the
//! identities and the explicit-constant bounds are *asserted*.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{mobius, phi, primes_of_degree};
use crate::fourier::wht_xn;
use crate::laurent::{approx_to_depth, char_mask, TorusPoint};
use crate::poly::{Degree, Poly2};
use crate::sieve::{AlphaKind, TruncatedSeries};
use crate::{pow2_rat, rat, rat_int, Error, Rat, Result};

/// Largest box exponent accepted by the streaming sums (2^N evaluations).
pub const SUM_BOX_LIMIT: u32 = 24;
/// Largest box exponent accepted by the full-grid scans (2^N rationals held).
pub const SCAN_BOX_LIMIT: u32 = 20;
/// Largest exact degree accepted by the prime sums.
pub const PRIME_SUM_LIMIT: u32 = 18;

// ---- Parameters ----

/// The parameter bundle: box exponent `N`, slack `eps`, and the three
/// derived degree cuts `K = floor((1/8 - eps) N)`, `R = floor(N/4)`,
/// `Q = floor(N/8)`, each clamped up to 1 so the cuts stay meaningful at
/// tiny `N`. Explicit overrides replace the derived values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    n: u32,
    eps: Rat,
    k: u32,
    r: u32,
    q: u32,
}

fn floor_to_u32(x: &Rat) -> u32 {
    use num_traits::ToPrimitive;
    x.floor().to_integer().to_u32().unwrap_or(0)
}

impl Params {
    /// Derive all cuts from `(n, eps)`. Requires `n >= 1` and
    /// `0 <= eps < 1/8`.
    pub fn new(n: u32, eps: Rat) -> Result<Params> {
        Params::with_overrides(n, eps, None, None, None)
    }

    /// Derive, then apply any explicit cut overrides (each must be >= 1).
    pub fn with_overrides(
        n: u32,
        eps: Rat,
        k: Option<u32>,
        r: Option<u32>,
        q: Option<u32>,
    ) -> Result<Params> {
        if n == 0 {
            return Err(Error::Params("box exponent N must be at least 1".into()));
        }
        if eps < Rat::zero() || eps >= rat(1, 8) {
            return Err(Error::Params(format!(
                "eps must lie in [0, 1/8), got {eps}"
            )));
        }
        let derived_k = floor_to_u32(&((rat(1, 8) - &eps) * rat_int(n as i64))).max(1);
        let derived_r = (n / 4).max(1);
        let derived_q = (n / 8).max(1);
        let (k, r, q) = (
            k.unwrap_or(derived_k),
            r.unwrap_or(derived_r),
            q.unwrap_or(derived_q),
        );
        if k == 0 || r == 0 || q == 0 {
            return Err(Error::Params("cuts K, R, Q must be at least 1".into()));
        }
        Ok(Params { n, eps, k, r, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn eps(&self) -> &Rat {
        &self.eps
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `2^(N-K)` as an exact rational (negative exponents allowed).
    pub fn pillar(&self) -> Rat {
        pow2_rat(self.n as i64 - self.k as i64)
    }
}

// ---- Weights ----

/// Which weight an exponential sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `Lambda'(f+1) H_Q(f)` on the box (the van der Corput weight).
    Psi,
    /// `Lambda_R(f+1) H_Q(f)` on the box (the smoothed proxy).
    PsiPrime,
    /// Bare degree-weighted prime indicator `Lambda'(f)`.
    LambdaPrime,
    /// Bare truncation `Lambda_R(f)`.
    LambdaTrunc,
}

/// `Lambda'` extended by 0 at the zero polynomial.
fn prime_weight(f: &Poly2) -> u64 {
    if f.is_zero() {
        0
    } else {
        crate::arith::lambda_prime(f)
    }
}

/// Per-parameter evaluation context: the two truncated series compiled once.
struct WeightCtx {
    n: u32,
    lam: TruncatedSeries,
    h: TruncatedSeries,
}

impl WeightCtx {
    fn new(p: &Params) -> Result<WeightCtx> {
        Ok(WeightCtx {
            n: p.n,
            lam: TruncatedSeries::new(AlphaKind::Plain, p.r)?,
            h: TruncatedSeries::new(AlphaKind::Prime, p.q)?,
        })
    }

    fn eval(&self, kind: WeightKind, f: &Poly2) -> Rat {
        let in_box = f.deg() < Degree::Finite(self.n as i64);
        match kind {
            WeightKind::Psi => {
                if !in_box {
                    return Rat::zero();
                }
                let shifted = f.add(&Poly2::one());
                match prime_weight(&shifted) {
                    0 => Rat::zero(),
                    w => rat_int(w as i64) * self.h.eval(f),
                }
            }
            WeightKind::PsiPrime => {
                if !in_box {
                    return Rat::zero();
                }
                self.lam.eval(&f.add(&Poly2::one())) * self.h.eval(f)
            }
            WeightKind::LambdaPrime => rat_int(prime_weight(f) as i64),
            WeightKind::LambdaTrunc => self.lam.eval(f),
        }
    }
}

/// `Psi(f)`: the van der Corput weight at `f` (0 outside the box).
pub fn psi(f: &Poly2, p: &Params) -> Result<Rat> {
    Ok(WeightCtx::new(p)?.eval(WeightKind::Psi, f))
}

/// `Psi'(f)`: the smoothed proxy weight at `f` (0 outside the box).
pub fn psi_prime(f: &Poly2, p: &Params) -> Result<Rat> {
    Ok(WeightCtx::new(p)?.eval(WeightKind::PsiPrime, f))
}

// ---- Exponential sums ----

fn check_box(n: u32, what: &'static str, limit: u32) -> Result<()> {
    if n > limit {
        return Err(Error::CostGuard {
            what,
            limit: limit as u64,
            requested: n as u64,
        });
    }
    Ok(())
}

/// `sum over f in G_N of weight(f) e(f theta)`, exactly, by streaming
/// enumeration of the box.
pub fn exp_sum(kind: WeightKind, p: &Params, theta: &TorusPoint) -> Result<Rat> {
    check_box(p.n, "exp_sum", SUM_BOX_LIMIT)?;
    let ctx = WeightCtx::new(p)?;
    let mask = char_mask(theta, p.n);
    let sum = (0u64..1 << p.n)
        .into_par_iter()
        .map(|bits| {
            let f = Poly2::from_bits(bits);
            let w = ctx.eval(kind, &f);
            if w.is_zero() {
                return Rat::zero();
            }
            if (bits & mask).count_ones() % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .reduce(Rat::zero, |a, b| a + b);
    Ok(sum)
}

/// The full weight vector over the box, indexed by coefficient bits.
pub fn weight_vector(kind: WeightKind, p: &Params) -> Result<Vec<Rat>> {
    check_box(p.n, "weight_vector", SCAN_BOX_LIMIT)?;
    let ctx = WeightCtx::new(p)?;
    Ok((0u64..1 << p.n)
        .into_par_iter()
        .map(|bits| ctx.eval(kind, &Poly2::from_bits(bits)))
        .collect())
}

/// All grid sums at once: entry `v` is the exponential sum at
/// `theta = v / x^N`, computed through the fast transform.
pub fn grid_sums(kind: WeightKind, p: &Params) -> Result<Vec<Rat>> {
    let weights = weight_vector(kind, p)?;
    let scale = pow2_rat(p.n as i64);
    Ok(wht_xn(&weights, p.n)
        .into_iter()
        .map(|v| v * &scale)
        .collect())
}

// ---- Closed forms ----

/// The closed form for the truncated-weight sum at `theta = u/s + eta`:
/// `mu(s)/phi(s) * 2^N` when `eta` is deeper than the box and `deg s` is
/// below the cut, else 0. `(u, s)` must be reduced.
pub fn s2_closed(p: &Params, u: &Poly2, s: &Poly2, ord_eta: Degree) -> Rat {
    assert!(!s.is_zero(), "denominator must be nonzero");
    assert!(
        u.is_zero() || u.gcd(s).is_one(),
        "decomposition must be reduced"
    );
    if s.deg() >= Degree::Finite(p.r as i64) || ord_eta >= Degree::Finite(-(p.n as i64)) {
        return Rat::zero();
    }
    Rat::new(mobius(s).into(), phi(s)) * pow2_rat(p.n as i64)
}

/// Which main-term branch the tail depth selects: coefficient `+1` when the
/// tail is strictly deeper than the degree-`k` characters resolve, `-1` on
/// the boundary, `0` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainTermCase {
    Deep,
    Boundary,
    Shallow,
}

impl MainTermCase {
    pub fn classify(k: u32, ord_eta: Degree) -> MainTermCase {
        let edge = Degree::Finite(-(k as i64) - 1);
        if ord_eta < edge {
            MainTermCase::Deep
        } else if ord_eta == edge {
            MainTermCase::Boundary
        } else {
            MainTermCase::Shallow
        }
    }

    pub fn coefficient(self) -> i64 {
        match self {
            MainTermCase::Deep => 1,
            MainTermCase::Boundary => -1,
            MainTermCase::Shallow => 0,
        }
    }
}

/// `sum over deg f = k of Lambda'(f) e(f theta)`: `k` times the signed count
/// of degree-`k` primes under the character.
pub fn prime_exp_sum(k: u32, theta: &TorusPoint) -> Result<Rat> {
    if k > PRIME_SUM_LIMIT {
        return Err(Error::CostGuard {
            what: "prime_exp_sum",
            limit: PRIME_SUM_LIMIT as u64,
            requested: k as u64,
        });
    }
    let mask = char_mask(theta, k + 1);
    let mut acc = 0i64;
    for r in primes_of_degree(k).iter() {
        if (r.bits_u64() & mask).count_ones() % 2 == 1 {
            acc -= 1;
        } else {
            acc += 1;
        }
    }
    Ok(rat_int(k as i64 * acc))
}

/// The unconditional main term for [`prime_exp_sum`] at the decomposition
/// `theta = u'/s' + eta'`: `mu(s')/phi(s') * 2^k * c(k, eta')`.
pub fn main_term(k: u32, u: &Poly2, s: &Poly2, ord_eta: Degree) -> Rat {
    assert!(!s.is_zero(), "denominator must be nonzero");
    assert!(
        u.is_zero() || u.gcd(s).is_one(),
        "decomposition must be reduced"
    );
    let c = MainTermCase::classify(k, ord_eta).coefficient();
    if c == 0 {
        return Rat::zero();
    }
    Rat::new(mobius(s).into(), phi(s)) * pow2_rat(k as i64) * rat_int(c)
}

// ---- The density-bound chain ----

/// `T(theta) = (2^(N-K) + sum Psi e(f theta)) / (2^(N-K) + sum Psi)`.
/// A non-positive denominator means the construction fails outright at
/// these parameters; that is an error, not a value.
pub fn t_function(p: &Params, theta: &TorusPoint) -> Result<Rat> {
    let denom = &p.pillar() + &exp_sum(WeightKind::Psi, p, &TorusPoint::zero())?;
    if denom <= Rat::zero() {
        return Err(Error::NonPositiveDenominator);
    }
    Ok((p.pillar() + exp_sum(WeightKind::Psi, p, theta)?) / denom)
}

/// `a0 = 2^(N-K) / (2^(N-K) + sum Psi)`: the zero coefficient of `T`.
pub fn a0(p: &Params) -> Result<Rat> {
    let denom = &p.pillar() + &exp_sum(WeightKind::Psi, p, &TorusPoint::zero())?;
    if denom <= Rat::zero() {
        return Err(Error::NonPositiveDenominator);
    }
    Ok(p.pillar() / denom)
}

/// `|sum (Psi - Psi') e(f theta)|`: how far the smoothed proxy drifts from
/// the true weight at one frequency. Reported against `(1/3) 2^(N-K)`,
/// never asserted (the bound is asymptotic).
pub fn psi_gap(p: &Params, theta: &TorusPoint) -> Result<Rat> {
    let a = exp_sum(WeightKind::Psi, p, theta)?;
    let b = exp_sum(WeightKind::PsiPrime, p, theta)?;
    Ok((a - b).abs())
}

/// One exceedance found by [`major_arc_scan`].
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub theta: TorusPoint,
    pub value: Rat,
    /// Dirichlet approximant with tail deeper than the box.
    pub u: Poly2,
    pub s: Poly2,
    pub tail_ord: Degree,
}

/// Scan result: every grid frequency where the proxy sum is at least the
/// threshold in absolute value, plus the grid-wide extremes.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub threshold: Rat,
    pub rows: Vec<ScanRow>,
    pub max_denominator_degree: Degree,
    pub min_value: Rat,
    pub min_theta: TorusPoint,
}

/// Scan the proxy weight over the full grid `theta = v/x^N`. The grid is
/// exhaustive for these sums: characters on the box only see the first `N`
/// tail coefficients of `theta`.
pub fn major_arc_scan(p: &Params, threshold: Option<Rat>) -> Result<ScanReport> {
    let threshold = threshold.unwrap_or_else(|| rat(1, 3) * p.pillar());
    let sums = grid_sums(WeightKind::PsiPrime, p)?;
    scan_report(p, threshold, &sums)
}

fn scan_report(p: &Params, threshold: Rat, sums: &[Rat]) -> Result<ScanReport> {
    let xn = Poly2::x_pow(p.n);
    let mut rows = Vec::new();
    let mut max_deg = Degree::NegInf;
    let mut min_idx = 0usize;
    for (v, value) in sums.iter().enumerate() {
        if value < &sums[min_idx] {
            min_idx = v;
        }
        if value.abs() < threshold {
            continue;
        }
        let theta = TorusPoint::new(&Poly2::from_bits(v as u64), &xn)?;
        let (u, s, tail_ord) = approx_to_depth(&theta, p.n as i64);
        max_deg = max_deg.max(s.deg());
        rows.push(ScanRow {
            theta,
            value: value.clone(),
            u,
            s,
            tail_ord,
        });
    }
    Ok(ScanReport {
        threshold,
        rows,
        max_denominator_degree: max_deg,
        min_value: sums[min_idx].clone(),
        min_theta: TorusPoint::new(&Poly2::from_bits(min_idx as u64), &xn)?,
    })
}

/// Outcome of the end-to-end certification at one parameter choice.
#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    /// `T >= 0` on the whole grid and the total weight is positive, so the
    /// density chain applies: any difference-avoiding `A` in the box has
    /// `|A| <= 2^N * a0 = size_bound`.
    Certified { a0: Rat, size_bound: Rat },
    /// A grid frequency where the weight sum falls below `-2^(N-K)`.
    Refuted { theta: TorusPoint, value: Rat },
}

#[derive(Debug, Clone)]
pub struct CertifyReport {
    pub outcome: CertifyOutcome,
    /// Grid minimum of the weight sum and where it is attained.
    pub min_value: Rat,
    pub min_theta: TorusPoint,
    /// `sum Psi` over the box.
    pub psi_total: Rat,
    /// The floor `-2^(N-K)` the minimum is compared against.
    pub floor: Rat,
}

/// Scan the true weight over the full grid and decide whether the
/// nonnegative-spectrum argument applies at these parameters.
pub fn certify_density(p: &Params) -> Result<CertifyReport> {
    let sums = grid_sums(WeightKind::Psi, p)?;
    let psi_total = sums[0].clone();
    let floor = -p.pillar();
    let min_idx = (1..sums.len()).fold(0, |best, v| if sums[v] < sums[best] { v } else { best });
    let min_value = sums[min_idx].clone();
    let min_theta = TorusPoint::new(&Poly2::from_bits(min_idx as u64), &Poly2::x_pow(p.n))?;
    let outcome = if min_value >= floor && psi_total > Rat::zero() {
        let a0 = p.pillar() / (p.pillar() + &psi_total);
        let size_bound = pow2_rat(p.n as i64) * &a0;
        CertifyOutcome::Certified { a0, size_bound }
    } else {
        CertifyOutcome::Refuted {
            theta: min_theta.clone(),
            value: min_value.clone(),
        }
    };
    Ok(CertifyReport {
        outcome,
        min_value,
        min_theta,
        psi_total,
        floor,
    })
}

/// Both sides of the truncated-product identity at `theta`: the streaming
/// proxy sum and `beta_trunc(theta) * 2^N`. `exact` records whether the
/// identity's sharp precondition `deg den(theta) + R + Q - 2 <= N` holds;
/// when it does, the two sides must agree.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub lhs: Rat,
    pub rhs: Rat,
    pub exact: bool,
}

pub fn psi_prime_identity(p: &Params, theta: &TorusPoint) -> Result<IdentityCheck> {
    let lhs = exp_sum(WeightKind::PsiPrime, p, theta)?;
    let rhs = crate::beta::beta_trunc(theta, p.r, p.q) * pow2_rat(p.n as i64);
    let den_deg = match theta.den().deg() {
        Degree::Finite(d) => d,
        Degree::NegInf => unreachable!("torus denominators are nonzero"),
    };
    let exact = den_deg + p.r as i64 + p.q as i64 - 2 <= p.n as i64;
    Ok(IdentityCheck { lhs, rhs, exact })
}
