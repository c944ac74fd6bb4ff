//! Closed-form evaluation of maximum sum-free densities, plus the explicit
//! interval-derived witness for the shifted problem.

use crate::error::{Error, Result};
use crate::group::{divisors, FiniteAbelianGroup};
use crate::rational::Rational;
use crate::search::is_shifted_sum_free;
use crate::subset::GroupSubset;

/// One divisor's contribution to a density maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaTerm {
    pub divisor: u64,
    /// `gcd(d, l - k)`.
    pub delta: u64,
    /// `k * ceil((d - delta) / (k + l)) mod delta`, the canonical
    /// nonnegative remainder.
    pub remainder: u64,
    pub value: Rational,
}

/// The maximum over divisor terms, with the smallest divisor attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaResult {
    pub value: Rational,
    pub argmax_divisor: u64,
    pub terms: Vec<FormulaTerm>,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn term(k: u32, l: u32, d: u64) -> FormulaTerm {
    let (k, l) = (k as u64, l as u64);
    let delta = crate::group::gcd(d, l - k);
    let remainder = (k * ceil_div(d - delta, k + l)) % delta;
    let value = Rational::new(ceil_div(d - delta + remainder, k + l) as i64, d as i64);
    FormulaTerm {
        divisor: d,
        delta,
        remainder,
        value,
    }
}

fn max_over_divisors(k: u32, l: u32, ds: Vec<u64>) -> FormulaResult {
    let terms: Vec<FormulaTerm> = ds.into_iter().map(|d| term(k, l, d)).collect();
    // Ascending divisor order plus strict improvement picks the smallest
    // divisor among ties.
    let mut best = &terms[0];
    for t in &terms[1..] {
        if t.value > best.value {
            best = t;
        }
    }
    FormulaResult {
        value: best.value,
        argmax_divisor: best.divisor,
        terms,
    }
}

fn check_pair(k: u32, l: u32) -> Result<()> {
    if k == 0 || k >= l {
        return Err(Error::InvalidPair { k, l });
    }
    Ok(())
}

/// Maximum density of a (k,l)-sum-free subset of `Z_n`:
/// `max over d|n of ceil((d - delta_d + r_d) / (k+l)) / d`.
pub fn lambda_cyclic(k: u32, l: u32, n: u64) -> Result<FormulaResult> {
    check_pair(k, l)?;
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    Ok(max_over_divisors(k, l, divisors(n)))
}

/// Maximum density of an ordinary sum-free subset of a finite abelian group:
/// `max over d | exponent(G) of ceil((d-1)/3) / d`. Valid only for the
/// (1,2) problem; other pairs have no known closed form beyond cyclic groups.
pub fn lambda_sumfree_abelian(g: &FiniteAbelianGroup) -> FormulaResult {
    max_over_divisors(1, 2, divisors(g.exponent()))
}

/// Maximum density over a nontrivial connected compact group: `1/(k+l)`.
pub fn lambda_connected(k: u32, l: u32) -> Result<Rational> {
    check_pair(k, l)?;
    Ok(Rational::one_over((k + l) as u64))
}

/// Combines the discrete-part maximum with the connected-part constant:
/// `max{lambda_M, 1/(k+l)}` when the identity component is nontrivial,
/// plain `lambda_M` otherwise. `lambda_m` must lie in `[0, 1]`.
pub fn lambda_product(k: u32, l: u32, lambda_m: Rational, connected_nontrivial: bool) -> Rational {
    debug_assert!(lambda_m >= Rational::ZERO && lambda_m <= Rational::ONE);
    if connected_nontrivial {
        lambda_m.max(Rational::one_over((k + l) as u64))
    } else {
        lambda_m
    }
}

/// The block of `n/(k+l)` consecutive residues `{kn/L, ..., ln/L - 1}` in
/// `Z_n`, where `L = l^2 - k^2` must divide `n`. It is the grid discretization
/// of the open interval `(k/L, l/L)` of the circle and is guaranteed
/// shifted-sum-free for the shift set `{0,1}`; the guarantee is checked at
/// construction.
pub fn interval_witness(k: u32, l: u32, n: u64) -> Result<GroupSubset> {
    check_pair(k, l)?;
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let big = (l as u64) * (l as u64) - (k as u64) * (k as u64);
    if !n.is_multiple_of(big) {
        return Err(Error::IndivisibleOrder {
            k,
            l,
            required: big,
            n,
        });
    }
    let group = FiniteAbelianGroup::cyclic(n)?;
    let lo = (k as u64) * n / big;
    let hi = (l as u64) * n / big;
    let witness = GroupSubset::from_indices(group.clone(), lo..hi)?;

    let shift = if n == 1 {
        GroupSubset::singleton(group, 0)?
    } else {
        GroupSubset::from_indices(group, [0, 1])?
    };
    assert!(
        is_shifted_sum_free(&witness, &shift, k, l)?,
        "interval witness failed its construction check"
    );
    Ok(witness)
}
