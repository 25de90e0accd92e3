//! The cumulant-to-moment polynomial family `G_n(x_1, ..., x_n)` and its
//! structural identities.
//!
//! `G_n` expresses the n-th moment of a random variable through its first n
//! cumulants: feeding cumulants in gives moments out. Three independent
//! constructions are provided and cross-checked: the binomial recurrence
//! `G_{n+1} = sum_j C(n,j) G_j x_{n+1-j}`, a direct sum over integer
//! partitions of `n`, and coefficient extraction from `exp` of the cumulant
//! series. Variable id `j` holds `x_{j+1}`, so ids `0..n` carry
//! `x_1..x_n`; `x_j` has weight `j` and every monomial of `G_n` has total
//! weight exactly `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::{LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::limits;
use crate::poly::{SparsePoly, VarId};
use crate::rat;
use crate::series::TruncatedSeries;
use crate::vars::cumulant_var;

/// `G_n` together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPoly {
    pub n: usize,
    pub poly: SparsePoly,
}

static MEMO: LazyLock<Mutex<Vec<SparsePoly>>> =
    LazyLock::new(|| Mutex::new(vec![SparsePoly::one()]));

/// `G_n` by the binomial recurrence, memoized so `G_0..G_n` are computed at
/// most once per process.
pub fn gamma_recurrence(n: usize) -> Result<GammaPoly> {
    limits::check_order(n)?;
    let mut memo = MEMO.lock().expect("gamma memo poisoned");
    while memo.len() <= n {
        let m = memo.len() - 1; // next entry is G_{m+1}
        let mut next = SparsePoly::zero();
        for j in 0..=m {
            let c = BigRational::from_integer(rat::binomial(m, j));
            let x = SparsePoly::var(cumulant_var(m + 1 - j));
            next = next.add(&memo[j].mul(&x).scale(&c));
        }
        memo.push(next);
    }
    Ok(GammaPoly {
        n,
        poly: memo[n].clone(),
    })
}

/// `G_n` by direct summation over all non-negative integer solutions of
/// `sum_j j*r_j = n` (the partitions of `n`): each solution contributes
/// `n! / prod_j ((j!)^{r_j} r_j!) * prod_j x_j^{r_j}`.
pub fn gamma_partition(n: usize) -> Result<GammaPoly> {
    limits::check_order(n)?;
    let mut poly = SparsePoly::zero();
    let n_fact = rat::factorial(n);
    // Partitions enumerated with parts in decreasing order.
    let mut parts: Vec<usize> = Vec::new();
    enumerate_partitions(n, n, &mut parts, &mut |parts| {
        let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
        for &p in parts {
            *mult.entry(p).or_insert(0) += 1;
        }
        let mut denom = BigInt::one();
        let mut pairs = Vec::with_capacity(mult.len());
        for (&j, &r) in &mult {
            denom *= rat::factorial(j).pow(r) * rat::factorial(r as usize);
            pairs.push((cumulant_var(j), r));
        }
        let coeff = BigRational::new(n_fact.clone(), denom);
        poly = poly.add(&SparsePoly::monomial(coeff, &pairs));
    });
    if n == 0 {
        poly = SparsePoly::one();
    }
    Ok(GammaPoly { n, poly })
}

fn enumerate_partitions(
    remaining: usize,
    max_part: usize,
    parts: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        if !parts.is_empty() {
            emit(parts);
        }
        return;
    }
    for p in (1..=remaining.min(max_part)).rev() {
        parts.push(p);
        enumerate_partitions(remaining - p, p, parts, emit);
        parts.pop();
    }
}

/// `G_n` as coefficient `n` of `exp(sum_j x_j w^j / j!)`, the generating
/// function that defines the family. Independent of the recurrence and the
/// partition sum; used as the third oracle.
pub fn gamma_series(n: usize) -> Result<GammaPoly> {
    limits::check_order(n)?;
    let mut s = TruncatedSeries::zero(n);
    for j in 1..=n {
        s.set_coeff(j, SparsePoly::var(cumulant_var(j)));
    }
    let e = s.exp()?;
    Ok(GammaPoly {
        n,
        poly: e.coeff(n).clone(),
    })
}

/// Symbolic `d G_n / d x_j`; equals `C(n,j) G_{n-j}`.
pub fn gamma_partial(n: usize, j: usize) -> Result<SparsePoly> {
    if j < 1 || j > n {
        return Err(Error::IndexOutOfRange { j, n });
    }
    Ok(gamma_recurrence(n)?.poly.partial_derivative(cumulant_var(j)))
}

/// Substitute `x_1 -> 0`, yielding `G_n(0, x_2, ..., x_n)`.
pub fn gamma_centered(n: usize) -> Result<SparsePoly> {
    let g = gamma_recurrence(n)?;
    let mut map = BTreeMap::new();
    map.insert(cumulant_var(1), SparsePoly::zero());
    Ok(g.poly.substitute(&map))
}

/// Coefficients `c_j` of `x_1^j` in `G_n`: `c_j = C(n,j) G_{n-j}(0, x_2,
/// ...)`. Reassembling `sum_j c_j x_1^j` reproduces `G_n`.
pub fn gamma_center_expand(n: usize) -> Result<Vec<SparsePoly>> {
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = BigRational::from_integer(rat::binomial(n, j));
        out.push(gamma_centered(n - j)?.scale(&c));
    }
    Ok(out)
}

/// Shift identity: `G_n(x_1 + y, x_2, ...) = sum_j C(n,j) G_{n-j}(x_1,
/// ...) y^j` with `y` fresh. Returns whether the two sides agree exactly.
pub fn gamma_shift_check(n: usize) -> Result<bool> {
    const FRESH_Y: VarId = 900;
    let g = gamma_recurrence(n)?;
    let mut map = BTreeMap::new();
    map.insert(
        cumulant_var(1),
        SparsePoly::var(cumulant_var(1)).add(&SparsePoly::var(FRESH_Y)),
    );
    let lhs = g.poly.substitute(&map);
    let mut rhs = SparsePoly::zero();
    for j in 0..=n {
        let c = BigRational::from_integer(rat::binomial(n, j));
        rhs = rhs.add(
            &gamma_recurrence(n - j)?
                .poly
                .mul(&SparsePoly::var_pow(FRESH_Y, j as u32))
                .scale(&c),
        );
    }
    Ok(lhs == rhs)
}

/// Center expansion identity: `sum_j c_j x_1^j` from
/// [`gamma_center_expand`] equals `G_n`.
pub fn gamma_center_check(n: usize) -> Result<bool> {
    let g = gamma_recurrence(n)?;
    let mut sum = SparsePoly::zero();
    for (j, c) in gamma_center_expand(n)?.iter().enumerate() {
        sum = sum.add(&c.mul(&SparsePoly::var_pow(cumulant_var(1), j as u32)));
    }
    Ok(sum == g.poly)
}

/// Convolution identity over `2n` fresh variables:
/// `G_n(y_1 + z_1, ..., y_n + z_n) = sum_j C(n,j) G_j(y) G_{n-j}(z)`.
pub fn gamma_convolution_check(n: usize) -> Result<bool> {
    const Y_BASE: VarId = 1000;
    const Z_BASE: VarId = 2000;
    let y = |k: usize| SparsePoly::var(Y_BASE + k as VarId);
    let z = |k: usize| SparsePoly::var(Z_BASE + k as VarId);

    let g = gamma_recurrence(n)?;
    let mut sum_map = BTreeMap::new();
    let mut y_map = BTreeMap::new();
    let mut z_map = BTreeMap::new();
    for k in 1..=n {
        sum_map.insert(cumulant_var(k), y(k).add(&z(k)));
        y_map.insert(cumulant_var(k), y(k));
        z_map.insert(cumulant_var(k), z(k));
    }
    let lhs = g.poly.substitute(&sum_map);

    let mut rhs = SparsePoly::zero();
    for j in 0..=n {
        let c = BigRational::from_integer(rat::binomial(n, j));
        let gy = gamma_recurrence(j)?.poly.substitute(&y_map);
        let gz = gamma_recurrence(n - j)?.poly.substitute(&z_map);
        rhs = rhs.add(&gy.mul(&gz).scale(&c));
    }
    Ok(lhs == rhs)
}

/// Every monomial of `G_n` has weight `n` under `weight(x_j) = j`, and the
/// coefficient of `x_1^n` is 1.
pub fn gamma_weight_check(n: usize) -> Result<bool> {
    let g = gamma_recurrence(n)?;
    for (mono, _) in g.poly.terms() {
        let w: u64 = mono
            .exponents()
            .map(|(v, k)| u64::from(v + 1) * u64::from(k))
            .sum();
        if w != n as u64 {
            return Ok(false);
        }
    }
    let lead = SparsePoly::var_pow(cumulant_var(1), n as u32);
    let lead_mono = lead.terms().next().map(|(m, _)| m.clone());
    match lead_mono {
        Some(m) => Ok(g.poly.coefficient(&m).is_one()),
        None => Ok(n == 0 && g.poly == SparsePoly::one()),
    }
}
