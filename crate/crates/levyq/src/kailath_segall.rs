//! Kailath-Segall polynomials `P_n(x_1, ..., x_n)`: the polynomials that
//! express the n-th iterated stochastic integral of a Levy process through
//! its variations.
//!
//! Two routes are implemented and must agree exactly: the recurrence
//! `P_n = (1/n)(P_{n-1} x_1 - P_{n-2} x_2 + ... + (-1)^{n+1} P_0 x_n)` and
//! the substitution `P_n = (1/n!) G_n(x_1, -x_2, 2! x_3, ...,
//! (-1)^{n-1}(n-1)! x_n)` into the cumulant-to-moment family. Variable id
//! `k-1` holds the k-th variation `x_k`, with weight `k`; every monomial of
//! `P_n` has weight `n` and the `x_1^n` coefficient is `1/n!`.

use num_rational::BigRational;
use std::sync::{LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::gamma;
use crate::limits;
use crate::poly::SparsePoly;
use crate::rat;
use crate::vars::cumulant_var;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsPoly {
    pub n: usize,
    pub poly: SparsePoly,
}

static MEMO: LazyLock<Mutex<Vec<SparsePoly>>> =
    LazyLock::new(|| Mutex::new(vec![SparsePoly::one()]));

/// `P_n` by the alternating recurrence, memoized.
pub fn ks_recurrence(n: usize) -> Result<KsPoly> {
    limits::check_order(n)?;
    let mut memo = MEMO.lock().expect("ks memo poisoned");
    while memo.len() <= n {
        let k = memo.len();
        let mut acc = SparsePoly::zero();
        for i in 1..=k {
            let term = memo[k - i].mul(&SparsePoly::var(cumulant_var(i)));
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        memo.push(acc.scale(&rat::ratio(1, k as i64)));
    }
    Ok(KsPoly {
        n,
        poly: memo[n].clone(),
    })
}

/// `P_n` through the cumulant-to-moment family: substitute
/// `x_k -> (-1)^{k-1} (k-1)! x_k` into `G_n` and divide by `n!`.
pub fn ks_from_gamma(n: usize) -> Result<KsPoly> {
    let g = gamma::gamma_recurrence(n)?;
    let mut map = std::collections::BTreeMap::new();
    for k in 1..=n {
        let mut c = BigRational::from_integer(rat::factorial(k - 1));
        if k % 2 == 0 {
            c = -c;
        }
        map.insert(cumulant_var(k), SparsePoly::var(cumulant_var(k)).scale(&c));
    }
    let inv_fact = BigRational::new(1.into(), rat::factorial(n));
    Ok(KsPoly {
        n,
        poly: g.poly.substitute(&map).scale(&inv_fact),
    })
}

/// Numeric `P^{(0)}..P^{(max_n)}` from one path's variations
/// `(X^{(1)}, ..., X^{(max_n)})`, via the recurrence itself: O(n^2)
/// multiplications, no symbolic expansion.
pub fn ks_evaluate_all(variations: &[f64], max_n: usize) -> Result<Vec<f64>> {
    if max_n > variations.len() {
        return Err(Error::VariationOrder {
            requested: max_n,
            available: variations.len(),
        });
    }
    let mut p = Vec::with_capacity(max_n + 1);
    p.push(1.0);
    for k in 1..=max_n {
        let mut acc = 0.0;
        let mut sign = 1.0;
        for i in 1..=k {
            acc += sign * p[k - i] * variations[i - 1];
            sign = -sign;
        }
        p.push(acc / k as f64);
    }
    Ok(p)
}

/// Numeric `P^{(n)}` for one path at one time.
pub fn ks_evaluate(variations: &[f64], n: usize) -> Result<f64> {
    Ok(*ks_evaluate_all(variations, n)?
        .last()
        .expect("always at least P_0"))
}

/// Exact evaluation for rational variation values; mirrors
/// [`ks_evaluate_all`].
pub fn ks_evaluate_exact(variations: &[BigRational], n: usize) -> Result<BigRational> {
    if n > variations.len() {
        return Err(Error::VariationOrder {
            requested: n,
            available: variations.len(),
        });
    }
    let mut p = vec![BigRational::from_integer(1.into())];
    for k in 1..=n {
        let mut acc = BigRational::from_integer(0.into());
        for i in 1..=k {
            let term = &p[k - i] * &variations[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc / BigRational::from_integer(k.into()));
    }
    Ok(p.swap_remove(n))
}
