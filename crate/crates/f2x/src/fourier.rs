//! Character sums and exact Fourier analysis on the residue rings `F2[x]/(h)`.
//!
//! The additive characters of `F2[x]/(h)` are `f -> e(f g / h)` for residues
//! `g`; all transforms here are real and exact, with values in [`Rat`].
//! The forward transform carries the `2^(-deg h)` normalization, so the
//! inverse transform is an unweighted character sum. In characteristic 2 the
//! conjugate character `e(-f g/h)` equals `e(f g/h)`, which is why the same
//! kernel serves both directions.

use num_traits::Zero;
use rayon::prelude::*;

use crate::laurent::{e_rat, Sign, TorusPoint};
use crate::poly::{polys_below, Degree, Poly2};
use crate::{pow2_rat, rat_int, Error, Rat, Result};

/// Largest modulus degree (and box exponent) the dense enumerations accept.
pub const ENUM_DEGREE_LIMIT: u32 = 24;

fn residue_space(h: &Poly2, what: &'static str) -> Result<(i64, usize)> {
    let d = match h.deg() {
        Degree::Finite(d) if d >= 1 => d,
        _ => panic!("{what}: modulus must have degree at least 1"),
    };
    if d > ENUM_DEGREE_LIMIT as i64 {
        return Err(Error::CostGuard {
            what,
            limit: ENUM_DEGREE_LIMIT as u64,
            requested: d as u64,
        });
    }
    Ok((d, 1usize << d))
}

/// `e(a/h)` for a residue `a` mod `h`: bit 0 of `(a*x) div h` decides the sign.
fn char_of_residue(a: &Poly2, h: &Poly2) -> Sign {
    Sign::from_bit(a.shl(1).divmod(h).0.coeff(0))
}

/// The character values `e(a/h)` for all residues `a` in bit order.
pub fn char_table(h: &Poly2) -> Result<Vec<Sign>> {
    let (_, size) = residue_space(h, "char_table")?;
    Ok((0..size as u64)
        .map(|bits| char_of_residue(&Poly2::from_bits(bits), h))
        .collect())
}

/// A function on the residues of `F2[x]/(h)`, indexed by coefficient bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    modulus: Poly2,
    values: Vec<Rat>,
}

impl ResidueTable {
    /// Wrap explicit values; `values.len()` must be `2^deg(h)`.
    pub fn new(modulus: Poly2, values: Vec<Rat>) -> Result<ResidueTable> {
        let (_, size) = residue_space(&modulus, "ResidueTable")?;
        assert_eq!(values.len(), size, "table length must be 2^deg(h)");
        Ok(ResidueTable { modulus, values })
    }

    /// Build from a function evaluated on every residue.
    pub fn from_fn(modulus: &Poly2, mut f: impl FnMut(&Poly2) -> Rat) -> Result<ResidueTable> {
        let (_, size) = residue_space(modulus, "ResidueTable")?;
        Ok(ResidueTable {
            modulus: modulus.clone(),
            values: (0..size as u64).map(|b| f(&Poly2::from_bits(b))).collect(),
        })
    }

    /// Point mass at `at` (reduced mod `h`).
    pub fn delta(modulus: &Poly2, at: &Poly2) -> Result<ResidueTable> {
        let (_, size) = residue_space(modulus, "ResidueTable")?;
        let mut values = vec![Rat::zero(); size];
        values[at.rem(modulus).bits_u64() as usize] = rat_int(1);
        Ok(ResidueTable {
            modulus: modulus.clone(),
            values,
        })
    }

    pub fn modulus(&self) -> &Poly2 {
        &self.modulus
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Value at `f`, reduced mod `h`.
    pub fn value(&self, f: &Poly2) -> &Rat {
        &self.values[f.rem(&self.modulus).bits_u64() as usize]
    }
}

// ---- Transforms ----

fn kernel_sum(table: &ResidueTable, g: &Poly2, signs: &[Sign]) -> Rat {
    let h = &table.modulus;
    let mut acc = Rat::zero();
    for (bits, v) in table.values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let idx = Poly2::from_bits(bits as u64).mulmod(g, h).bits_u64() as usize;
        match signs[idx] {
            Sign::Plus => acc += v,
            Sign::Minus => acc -= v,
        }
    }
    acc
}

/// Forward transform: `F_hat(g) = 2^(-deg h) * sum_f F(f) e(f g / h)`.
pub fn dft(table: &ResidueTable) -> Result<ResidueTable> {
    let h = &table.modulus;
    let (d, size) = residue_space(h, "dft")?;
    let signs = char_table(h)?;
    let scale = pow2_rat(-d);
    let values: Vec<Rat> = (0..size as u64)
        .into_par_iter()
        .map(|g_bits| &kernel_sum(table, &Poly2::from_bits(g_bits), &signs) * &scale)
        .collect();
    Ok(ResidueTable {
        modulus: h.clone(),
        values,
    })
}

/// One forward coefficient `F_hat(g)` without transforming the whole table.
pub fn dft_coefficient(table: &ResidueTable, g: &Poly2) -> Result<Rat> {
    let h = table.modulus();
    let (d, _) = residue_space(h, "dft_coefficient")?;
    let signs = char_table(h)?;
    Ok(&kernel_sum(table, &g.rem(h), &signs) * &pow2_rat(-d))
}

/// Inverse transform: `F(f) = sum_g F_hat(g) e(f g / h)` (no scaling).
pub fn idft(table: &ResidueTable) -> Result<ResidueTable> {
    let h = &table.modulus;
    let (_, size) = residue_space(h, "idft")?;
    let signs = char_table(h)?;
    let values: Vec<Rat> = (0..size as u64)
        .into_par_iter()
        .map(|f_bits| kernel_sum(table, &Poly2::from_bits(f_bits), &signs))
        .collect();
    Ok(ResidueTable {
        modulus: h.clone(),
        values,
    })
}

/// Fast transform for the modulus `x^n`: identical to [`dft`] with
/// `h = x^n`, including the `2^(-n)` normalization, but computed with
/// in-place butterflies. The character pairing couples bit `i` of `f` with
/// bit `n-1-i` of `g`, so the bit reversal is applied while reading out the
/// result rather than as a separate permutation pass.
pub fn wht_xn(values: &[Rat], n: u32) -> Vec<Rat> {
    assert!(n >= 1 && n <= ENUM_DEGREE_LIMIT, "wht_xn needs 1 <= n <= 24");
    assert_eq!(values.len(), 1 << n, "length must be 2^n");
    let mut acc = values.to_vec();
    for stage in 0..n {
        let half = 1usize << stage;
        let mut base = 0;
        while base < acc.len() {
            for i in base..base + half {
                let a = acc[i].clone();
                let b = acc[i + half].clone();
                acc[i] = &a + &b;
                acc[i + half] = &a - &b;
            }
            base += 2 * half;
        }
    }
    let scale = pow2_rat(-(n as i64));
    (0..acc.len())
        .map(|g| {
            let rev = (g as u64).reverse_bits() >> (64 - n);
            &acc[rev as usize] * &scale
        })
        .collect()
}

// ---- Classical sums ----

/// `sum_{g mod h} e(f g / h)`: `2^deg h` when `h | f`, else 0. Computed by
/// direct enumeration; the closed form is what the tests pin it against.
pub fn indicator_sum(h: &Poly2, f: &Poly2) -> Result<i64> {
    let (_, size) = residue_space(h, "indicator_sum")?;
    let lam = TorusPoint::new(f, h)?;
    let mut acc = 0i64;
    for g in 0..size as u64 {
        acc += e_rat(&Poly2::from_bits(g), &lam).as_i64();
    }
    Ok(acc)
}

/// Ramanujan-type sum over units: `sum_{a unit mod h} e(a c / h)`.
pub fn ramanujan_sum(h: &Poly2, c: &Poly2) -> Result<i64> {
    let (_, size) = residue_space(h, "ramanujan_sum")?;
    let lam = TorusPoint::new(c, h)?;
    let mut acc = 0i64;
    for bits in 0..size as u64 {
        let a = Poly2::from_bits(bits);
        if a.is_zero() || !a.gcd(h).is_one() {
            continue;
        }
        acc += e_rat(&a, &lam).as_i64();
    }
    Ok(acc)
}

/// `sum_{f in G_n} e(f theta)` by the closed form: `2^n` when the fractional
/// part of `theta` has order below `-n`, else 0.
pub fn geom_sum_gn(n: u32, theta: &TorusPoint) -> i64 {
    assert!(n <= 62, "geometric sum limited to n <= 62");
    if theta.ord() < Degree::Finite(-(n as i64)) {
        1i64 << n
    } else {
        0
    }
}

/// Same sum by direct enumeration (test oracle; guarded).
pub fn geom_sum_gn_enum(n: u32, theta: &TorusPoint) -> Result<i64> {
    if n > ENUM_DEGREE_LIMIT {
        return Err(Error::CostGuard {
            what: "geom_sum_gn_enum",
            limit: ENUM_DEGREE_LIMIT as u64,
            requested: n as u64,
        });
    }
    Ok(polys_below(n).map(|f| e_rat(&f, theta).as_i64()).sum())
}
