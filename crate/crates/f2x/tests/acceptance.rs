//! Release gate: one test per acceptance criterion, run with the library's
//! exact arithmetic end to end. Every comparison below is an exact rational
//! or integer identity — no tolerances, no floating point. The only numeric
//! recast is in `criterion_08`, where the envelope `k·2^{(3k+5)/4}` is
//! compared in fourth powers so both sides stay integral.
//!
//! Each test prints a `criterion NN (<name>): PASS` line (visible under
//! `--nocapture`) with its elapsed time against the budget it must meet.

use std::time::{Duration, Instant};

use f2x::arith::{is_squarefree, mobius, primes_up_to, tau};
use f2x::beta::{beta_closed, beta_conv_table, denom_count, unit_pair_char_sum};
use f2x::extremal::{max_avoiding_set, verify_avoiding, SearchMode};
use f2x::fourier::{
    dft, geom_sum_gn, geom_sum_gn_enum, idft, indicator_sum, ramanujan_sum, wht_xn, ResidueTable,
};
use f2x::laurent::{dirichlet_approx, e_rat, frac_part, TorusPoint};
use f2x::poly::{polys_below, Degree, Poly2};
use f2x::sieve::{lambda_r, lambda_tilde, tau2_r, AlphaKind};
use f2x::vdc::{
    certify_density, exp_sum, main_term, prime_exp_sum, psi_prime, psi_prime_identity, s2_closed,
    CertifyOutcome, Params, WeightKind,
};
use f2x::{pow2_rat, rat, rat_int, Rat};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

fn pass(index: u32, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!(
        "criterion {index:02} ({name}): PASS in {elapsed:.2?} (budget {budget:?})"
    );
    assert!(
        elapsed <= budget,
        "criterion {index:02} exceeded its budget: {elapsed:.2?} > {budget:?}"
    );
}

fn nonzero_below(cap: u32) -> impl Iterator<Item = Poly2> {
    polys_below(cap).filter(|f| !f.is_zero())
}

/// All reduced torus points with `deg den <= max_den_deg` (including 0).
fn reduced_points(max_den_deg: u32) -> Vec<TorusPoint> {
    let mut out = vec![TorusPoint::zero()];
    for s in nonzero_below(max_den_deg + 1) {
        if s.is_one() {
            continue;
        }
        let d = s.deg().expect_finite() as u32;
        for u in nonzero_below(d) {
            if u.gcd(&s).is_one() {
                out.push(TorusPoint::new(&u, &s).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_01_orthogonality() {
    let t0 = Instant::now();
    // Indicator sums over full residue systems: enumeration against the
    // divisibility closed form, every modulus of degree 1..=6 (the trivial
    // modulus has no residue system to sum over), every f in G_8.
    for h in nonzero_below(7).filter(|h| !h.is_one()) {
        let d = h.deg().expect_finite();
        for f in polys_below(8) {
            let expect = if h.divides(&f) { 1i64 << d } else { 0 };
            assert_eq!(indicator_sum(&h, &f).unwrap(), expect, "h={h}, f={f}");
        }
    }
    // Box sums: closed form vs enumeration on the x^N grid and at every
    // reduced frequency with denominator degree <= 4.
    for n in 1..=8u32 {
        let xn = Poly2::x_pow(n);
        for v in polys_below(n) {
            let theta = TorusPoint::new(&v, &xn).unwrap();
            assert_eq!(
                geom_sum_gn(n, &theta),
                geom_sum_gn_enum(n, &theta).unwrap(),
                "n={n}, theta={theta}"
            );
        }
        for theta in reduced_points(4) {
            assert_eq!(
                geom_sum_gn(n, &theta),
                geom_sum_gn_enum(n, &theta).unwrap(),
                "n={n}, theta={theta}"
            );
        }
    }
    pass(1, "orthogonality", t0, Duration::from_secs(10));
}

#[test]
fn criterion_02_dft_inversion_parseval() {
    let t0 = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(271828);
    for case in 0..1000 {
        let d = rng.gen_range(1..=4u32);
        let h = Poly2::from_bits((1u64 << d) | rng.gen_range(0..1u64 << d));
        let table =
            ResidueTable::from_fn(&h, |_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .unwrap();
        let hat = dft(&table).unwrap();
        assert_eq!(idft(&hat).unwrap(), table, "case {case}: inversion, h={h}");
        let norm: Rat = table.values().iter().map(|v| v * v).sum();
        let norm_hat: Rat = hat.values().iter().map(|v| v * v).sum();
        assert_eq!(
            norm,
            pow2_rat(d as i64) * norm_hat,
            "case {case}: Parseval, h={h}"
        );
    }
    // The in-place transform agrees with the naive DFT on x^N moduli.
    for n in 1..=6u32 {
        let xn = Poly2::x_pow(n);
        let table =
            ResidueTable::from_fn(&xn, |_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .unwrap();
        let fast = wht_xn(table.values(), n);
        assert_eq!(fast, dft(&table).unwrap().values(), "n={n}");
    }
    pass(2, "dft inversion and parseval", t0, Duration::from_secs(10));
}

#[test]
fn criterion_03_ramanujan_bounds() {
    let t0 = Instant::now();
    for h in nonzero_below(7).filter(|h| !h.is_one()) {
        let d = h.deg().expect_finite() as u32;
        for c in polys_below(d) {
            let value = ramanujan_sum(&h, &c).unwrap();
            let g = c.gcd(&h);
            let cap = 1i64 << g.deg().expect_finite();
            assert!(value.abs() <= cap, "h={h}, c={c}: |{value}| > {cap}");
        }
        if is_squarefree(&h) {
            assert_eq!(
                ramanujan_sum(&h, &Poly2::one()).unwrap(),
                mobius(&h),
                "h={h}"
            );
        }
    }
    pass(3, "ramanujan bounds", t0, Duration::from_secs(30));
}

#[test]
fn criterion_04_sieve_weight_identities() {
    let t0 = Instant::now();
    // Local weights have mean 2^{deg r} over a full residue system.
    for r in primes_up_to(6) {
        let d = r.deg().expect_finite() as u32;
        let lambda_mean: Rat = polys_below(d).map(|f| lambda_r(&r, &f)).sum();
        let tau_mean: Rat = polys_below(d).map(|f| tau2_r(&r, &f)).sum();
        assert_eq!(lambda_mean, pow2_rat(d as i64), "r={r}");
        assert_eq!(tau_mean, pow2_rat(d as i64), "r={r}");
    }
    // Complete-series identity: the local product equals the divisor sum of
    // mu(s)/phi(s) times full unit character sums, through a code path
    // (ramanujan_sum) the product route never touches.
    for q in 1..=3u32 {
        let primes = primes_up_to(q.saturating_sub(1));
        for f in polys_below(6) {
            let product_route = lambda_tilde(q, &f);
            // The empty divisor contributes alpha(1) * 1; the rest go
            // through the unit-sum route.
            let mut series = Rat::one();
            for mask in 1..1u32 << primes.len() {
                let mut s = Poly2::one();
                for (i, r) in primes.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s = s.mul(r);
                    }
                }
                series += AlphaKind::Plain.coeff(&s)
                    * rat_int(ramanujan_sum(&s, &f).unwrap());
            }
            assert_eq!(product_route, series, "q={q}, f={f}");
        }
    }
    pass(4, "sieve weight identities", t0, Duration::from_secs(30));
}

#[test]
fn criterion_05_beta_routes_agree() {
    let t0 = Instant::now();
    for r_cap in 1..=3u32 {
        let table = beta_conv_table(r_cap).unwrap();
        assert!(!table.is_empty());
        for (point, via_conv) in table.iter() {
            let via_closed = beta_closed(point, r_cap);
            assert_eq!(&via_closed, via_conv, "R={r_cap}, theta={point}");
            assert!(via_closed >= Rat::zero(), "R={r_cap}, theta={point}");
        }
    }
    assert_eq!(beta_closed(&TorusPoint::zero(), 2), rat(64, 25));
    pass(5, "beta closed vs convolution", t0, Duration::from_secs(60));
}

#[test]
fn criterion_06_truncated_product_identity() {
    let t0 = Instant::now();
    let p = Params::with_overrides(6, rat(1, 100), None, Some(2), Some(2)).unwrap();
    for theta in reduced_points(2) {
        let check = psi_prime_identity(&p, &theta).unwrap();
        assert!(check.exact, "theta={theta} should satisfy the precondition");
        assert_eq!(check.lhs, check.rhs, "theta={theta}");
    }
    // Worked values, re-derived by direct enumeration over the box.
    let direct = |theta: &TorusPoint| -> Rat {
        polys_below(6)
            .map(|f| psi_prime(&f, &p).unwrap() * e_rat(&f, theta).as_rat())
            .sum()
    };
    let zero = TorusPoint::zero();
    let one_over_x = frac_part(&Poly2::one(), &Poly2::x()).unwrap();
    assert_eq!(direct(&zero), rat(704, 5));
    assert_eq!(exp_sum(WeightKind::PsiPrime, &p, &zero).unwrap(), rat(704, 5));
    assert_eq!(direct(&one_over_x), rat(512, 5));
    assert_eq!(
        exp_sum(WeightKind::PsiPrime, &p, &one_over_x).unwrap(),
        rat(512, 5)
    );
    pass(6, "truncated product identity", t0, Duration::from_secs(60));
}

#[test]
fn criterion_07_truncated_weight_closed_form() {
    let t0 = Instant::now();
    // Every frequency is decomposed at the cut (approximant plus tail), the
    // shape the closed form speaks about; sweeping R crosses both indicator
    // branches, and grid points supply tails at every depth.
    for n in 1..=10u32 {
        let xn = Poly2::x_pow(n);
        let mut frequencies = reduced_points(3);
        frequencies.extend(polys_below(n.min(6)).map(|v| TorusPoint::new(&v, &xn).unwrap()));
        // Two distinct approximants below the cut differ by order at least
        // -(2R-2), so the single-term form needs 2R-2 <= N.
        for r_cut in (1..=3u32).filter(|r| 2 * r <= n + 2) {
            let p = Params::with_overrides(n, rat(1, 100), None, Some(r_cut), Some(1)).unwrap();
            for theta in &frequencies {
                let (u, s, tail_ord) = dirichlet_approx(theta, r_cut);
                let streamed = exp_sum(WeightKind::LambdaTrunc, &p, theta).unwrap();
                assert_eq!(
                    streamed,
                    s2_closed(&p, &u, &s, tail_ord),
                    "n={n}, R={r_cut}, theta={theta}"
                );
            }
        }
    }
    pass(7, "truncated weight closed form", t0, Duration::from_secs(60));
}

#[test]
fn criterion_08_prime_sum_envelope() {
    let t0 = Instant::now();
    for k in 1..=14u32 {
        let max_den = (k / 2).min(3);
        for theta in reduced_points(max_den) {
            let observed = prime_exp_sum(k, &theta).unwrap();
            let predicted = main_term(k, theta.num(), theta.den(), Degree::NegInf);
            // |observed - predicted| <= k * 2^{(3k+5)/4}, compared in fourth
            // powers to keep both sides integral.
            let diff = (observed - predicted).abs();
            let lhs = diff.clone() * diff.clone() * diff.clone() * diff;
            let k4 = rat_int(k as i64).pow(4);
            let rhs = k4 * pow2_rat(3 * k as i64 + 5);
            assert!(lhs <= rhs, "k={k}, theta={theta}");
        }
    }
    pass(8, "prime sum envelope", t0, Duration::from_secs(300));
}

#[test]
fn criterion_09_pair_sum_and_denominator_bounds() {
    let t0 = Instant::now();
    let squarefrees: Vec<Poly2> = nonzero_below(4).filter(is_squarefree).collect();
    // Character sums over unit pairs stay within twice the divisor count.
    for r in &squarefrees {
        for q1 in &squarefrees {
            for q2 in &squarefrees {
                let cap = 2 * tau(&r.gcd(q1)) as i64;
                let run = |b: &Poly2| {
                    let s = unit_pair_char_sum(b, r, q1, q2).unwrap();
                    assert!(s <= cap, "b={b}, r={r}, q1={q1}, q2={q2}: {s} > {cap}");
                };
                if r.is_one() {
                    run(&Poly2::zero());
                } else {
                    let d = r.deg().expect_finite() as u32;
                    for b in nonzero_below(d) {
                        if b.gcd(r).is_one() {
                            run(&b);
                        }
                    }
                }
            }
        }
    }
    // Denominator counts obey the degree bound 2^{deg(s·gcd(q,r)/r)}.
    for target in reduced_points(3) {
        let r = target.den();
        for q in &squarefrees {
            for s in nonzero_below(4) {
                let count = denom_count(&target, q, &s).unwrap();
                let prod = s.mul(&q.gcd(r));
                if !r.divides(&prod) {
                    assert_eq!(count, 0, "target={target}, q={q}, s={s}");
                } else {
                    let cap = 1u64 << prod.divmod(r).0.deg().expect_finite();
                    assert!(count <= cap, "target={target}, q={q}, s={s}");
                }
            }
        }
    }
    pass(9, "pair sum and denominator bounds", t0, Duration::from_secs(300));
}

#[test]
fn criterion_10_end_to_end_density_bound() {
    let t0 = Instant::now();
    // Small exact values and witness validity hold regardless of verdict.
    for (n, expect) in [(1, 2u64), (2, 2), (3, 4)] {
        let result = max_avoiding_set(n, SearchMode::Exact).unwrap();
        assert_eq!(result.size, expect, "n={n}");
        assert!(verify_avoiding(&result.witness, n).unwrap(), "n={n}");
    }
    // The headline run: N = 12, eps = 1/100.
    let p = Params::new(12, rat(1, 100)).unwrap();
    let report = certify_density(&p).unwrap();
    assert!(report.psi_total > Rat::zero(), "weights must have positive mass");
    match report.outcome {
        CertifyOutcome::Certified { a0, size_bound } => {
            assert_eq!(size_bound, pow2_rat(12) * &a0);
            let exact = max_avoiding_set(12, SearchMode::Exact).unwrap();
            assert!(verify_avoiding(&exact.witness, 12).unwrap());
            assert!(
                rat_int(exact.size as i64) <= size_bound,
                "exact size {} exceeds certified bound {size_bound}",
                exact.size
            );
            println!(
                "criterion 10: CERTIFIED — exact size {} <= bound {size_bound}",
                exact.size
            );
        }
        CertifyOutcome::Refuted { theta, value } => {
            // Honest verdict: the certificate can fail at desk scale without
            // being a bug — but at these parameters it is expected to hold,
            // so a refutation here fails the gate.
            panic!("density certificate refuted at theta={theta}: {value}");
        }
    }
    pass(10, "end-to-end density bound", t0, Duration::from_secs(600));
}
