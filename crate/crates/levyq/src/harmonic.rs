//! Time-space harmonic polynomials `Q_n(x, t)` of a centered Levy process:
//! polynomials with `Q_n(X_t, t)` a martingale.
//!
//! The family is `Q_n(x, t) = G_n(x, -m~_2 t, -m~_3 t, ..., -m~_n t)` where
//! `G_n` is the cumulant-to-moment polynomial, `m~_2 = m_2 + sigma2` and
//! `m~_k = m_k` for `k >= 3`. Four independent constructions are provided
//! (closed form, three-term-style recurrence, coefficient expansion in `x`,
//! and generating-function extraction) and must agree exactly; the
//! classical Hermite, Charlier and Laguerre families fall out as the
//! Brownian, Poisson and Gamma specializations. Throughout this module `t`
//! is a formal variable; numbers enter only in `sim`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gamma;
use crate::limits;
use crate::models::{model_sum, CumulantSpec, LevyModel};
use crate::poly::SparsePoly;
use crate::rat;
use crate::series::TruncatedSeries;
use crate::vars;
use crate::vars::cumulant_var;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicPoly {
    pub n: usize,
    /// Name of the model the polynomial belongs to.
    pub model: String,
    /// Polynomial in `x` and `t` (and the `e^{1/2}` atom for the lognormal
    /// model).
    pub poly: SparsePoly,
}

fn x() -> SparsePoly {
    SparsePoly::var(vars::X)
}

fn t() -> SparsePoly {
    SparsePoly::var(vars::T)
}

/// `G_j(0, sign * m~_2 * time, ..., sign * m~_j * time)`.
fn gamma_specialized(
    spec: &CumulantSpec,
    j: usize,
    sign: i64,
    time: &SparsePoly,
) -> Result<SparsePoly> {
    let g = gamma::gamma_recurrence(j)?;
    let map = spec.tilde_map(j, sign, time, &SparsePoly::zero())?;
    Ok(g.poly.substitute(&map))
}

/// `Q_n` by direct substitution into `G_n`.
pub fn q_closed(model: &LevyModel, n: usize) -> Result<HarmonicPoly> {
    let g = gamma::gamma_recurrence(n)?;
    let spec = model.cumulants(n)?;
    let map = spec.tilde_map(n, -1, &t(), &x())?;
    Ok(HarmonicPoly {
        n,
        model: model.name.clone(),
        poly: g.poly.substitute(&map),
    })
}

/// `Q_n` bottom-up from `Q_0 = 1`, `Q_1 = x` and
/// `Q_{k+1} = x Q_k - k m~_2 t Q_{k-1} - sum_{j=2}^{k} C(k,j) m_{j+1} t Q_{k-j}`.
pub fn q_recurrence(model: &LevyModel, n: usize) -> Result<HarmonicPoly> {
    limits::check_order(n)?;
    let spec = model.cumulants(n)?;
    let m2t = spec.kappa_tilde(2)?.to_poly().mul(&t());
    let mut q = vec![SparsePoly::one(), x()];
    for k in 1..n {
        let mut next = x().mul(&q[k]);
        next = next.sub(&m2t.mul(&q[k - 1]).scale(&rat::rat_int(k as i64)));
        for j in 2..=k {
            let c = BigRational::from_integer(rat::binomial(k, j));
            let mt = spec.m(j + 1)?.to_poly().mul(&t());
            next = next.sub(&mt.mul(&q[k - j]).scale(&c));
        }
        q.push(next);
    }
    Ok(HarmonicPoly {
        n,
        model: model.name.clone(),
        poly: q.swap_remove(n),
    })
}

/// Coefficients `a_j(t)` with `Q_n = sum_j a_j(t) x^j`:
/// `a_j = C(n,j) G_{n-j}(0, -m~_2 t, ...)`, so `a_n = 1`.
pub fn q_expand_in_x(model: &LevyModel, n: usize) -> Result<Vec<SparsePoly>> {
    limits::check_order(n)?;
    let spec = model.cumulants(n)?;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = BigRational::from_integer(rat::binomial(n, j));
        out.push(gamma_specialized(&spec, n - j, -1, &t())?.scale(&c));
    }
    Ok(out)
}

/// `Q_n` as EGF coefficient `n` of
/// `exp{u x - m~_2 t u^2/2! - sum_{k>=3} m_k t u^k/k!}`, the process
/// generating function. Independent of the `G_n` table.
pub fn q_gf_oracle(model: &LevyModel, n: usize) -> Result<HarmonicPoly> {
    limits::check_order(n)?;
    let spec = model.cumulants(n)?;
    let mut s = TruncatedSeries::zero(n);
    if n >= 1 {
        s.set_coeff(1, x());
    }
    for k in 2..=n {
        let c = spec.kappa_tilde(k)?.scale(&rat::rat_int(-1));
        s.set_coeff(k, c.to_poly().mul(&t()));
    }
    let e = s.exp()?;
    Ok(HarmonicPoly {
        n,
        model: model.name.clone(),
        poly: e.coeff(n).clone(),
    })
}

/// Monic Hermite polynomials from `H_{k+1} = x H_k - k t H_{k-1}`; the
/// Brownian harmonic family.
pub fn hermite_monic(n: usize) -> Result<SparsePoly> {
    limits::check_order(n)?;
    let mut h = vec![SparsePoly::one(), x()];
    for k in 1..n.max(1) {
        let next = x()
            .mul(&h[k])
            .sub(&t().mul(&h[k - 1]).scale(&rat::rat_int(k as i64)));
        h.push(next);
    }
    Ok(h.swap_remove(n))
}

/// Shifted Charlier polynomials `C~_0..C~_n` (ordinary coefficients of
/// `e^{-ut}(1+u)^{x+t}` in `u`); the unit-rate Poisson harmonic family is
/// spanned by these.
pub fn charlier_polys(n: usize) -> Result<Vec<SparsePoly>> {
    limits::check_order(n)?;
    if n == 0 {
        return Ok(vec![SparsePoly::one()]);
    }
    let shift = x().add(&t());
    let s = TruncatedSeries::linear(n, t().neg())
        .add(&TruncatedSeries::log_one_plus(n).scale_poly(&shift));
    let e = s.exp()?;
    Ok((0..=n).map(|k| e.ordinary_coeff(k)).collect())
}

/// Triangular table `lambda[j-1][k-1]` of the integers `lambda_k^{(j)}`,
/// `1 <= k <= j <= n`, from `lambda_1^{(j)} = 1` and
/// `lambda_{k+1}^{(j)} = sum_{i=k}^{j-1} C(j,i) lambda_k^{(i)}`. These are
/// the coordinates of `Q_j` (unit-rate Poisson) in the Charlier basis.
pub fn charlier_lambda(n: usize) -> Result<Vec<Vec<BigInt>>> {
    limits::check_order(n)?;
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut row = vec![BigInt::one()];
        for k in 2..=j {
            let mut acc = BigInt::zero();
            for i in (k - 1)..=(j - 1) {
                acc += rat::binomial(j, i) * &table[i - 1][k - 2];
            }
            row.push(acc);
        }
        table.push(row);
    }
    Ok(table)
}

/// `Q_n` of the compensated Gamma model via its Laguerre generating
/// function: `n!` times the ordinary `u^n` coefficient of
/// `(1-u)^t e^{u(x+t)}`, which generates `(-1)^n L_n^{(t-n)}(x+t)`.
pub fn laguerre_qn(n: usize) -> Result<SparsePoly> {
    limits::check_order(n)?;
    if n == 0 {
        return Ok(SparsePoly::one());
    }
    let shift = x().add(&t());
    let s = TruncatedSeries::log_one_minus(n)
        .scale_poly(&t())
        .add(&TruncatedSeries::linear(n, shift));
    let e = s.exp()?;
    // n! times the ordinary coefficient is the EGF coefficient.
    Ok(e.coeff(n).clone())
}

/// Two-time consistency of the expansion coefficients, with
/// `kappa_tildes[i]` standing for `m~_{i+2}` (any polynomials, e.g. fresh
/// symbols or model constants):
/// `G_k(0, -m~ s, ...) = sum_l C(k,l) G_{k-l}(0, -m~ t, ...) G_l(0, m~ (t-s), ...)`.
pub fn gs_check_with(k: usize, kappa_tildes: &[SparsePoly]) -> Result<bool> {
    limits::check_order(k)?;
    if k >= 2 && kappa_tildes.len() < k - 1 {
        return Err(Error::Internal(format!(
            "need {} cumulant entries for order {k}, got {}",
            k - 1,
            kappa_tildes.len()
        )));
    }
    let s_var = SparsePoly::var(vars::S);
    let t_minus_s = t().sub(&s_var);
    let at = |j: usize, sign: i64, time: &SparsePoly| -> Result<SparsePoly> {
        let g = gamma::gamma_recurrence(j)?;
        let mut map = BTreeMap::new();
        map.insert(cumulant_var(1), SparsePoly::zero());
        for i in 2..=j {
            let factor = kappa_tildes[i - 2].scale(&rat::rat_int(sign));
            map.insert(cumulant_var(i), factor.mul(time));
        }
        Ok(g.poly.substitute(&map))
    };
    let lhs = at(k, -1, &s_var)?;
    let mut rhs = SparsePoly::zero();
    for l in 0..=k {
        let c = BigRational::from_integer(rat::binomial(k, l));
        rhs = rhs.add(&at(k - l, -1, &t())?.mul(&at(l, 1, &t_minus_s)?).scale(&c));
    }
    Ok(lhs == rhs)
}

/// [`gs_check_with`] instantiated with a model's cumulants.
pub fn gs_consistency_check(model: &LevyModel, k: usize) -> Result<bool> {
    let spec = model.cumulants(k)?;
    let mut kappas = Vec::new();
    for i in 2..=k.max(2) {
        kappas.push(spec.kappa_tilde(i)?.to_poly());
    }
    gs_check_with(k, &kappas)
}

/// Convolution expansion of the harmonic polynomials of an independent
/// sum: returns `sum_j C(n,j) Q_j^A(y,t) Q_{n-j}^B(z,t)` and verifies it
/// equals `Q_n^{A+B}(y+z, t)` exactly before returning.
pub fn q_convolution(a: &LevyModel, b: &LevyModel, n: usize) -> Result<SparsePoly> {
    let y = SparsePoly::var(vars::Y);
    let z = SparsePoly::var(vars::Z);
    let mut rhs = SparsePoly::zero();
    for j in 0..=n {
        let c = BigRational::from_integer(rat::binomial(n, j));
        let qa = rebind_x(&q_closed(a, j)?.poly, &y);
        let qb = rebind_x(&q_closed(b, n - j)?.poly, &z);
        rhs = rhs.add(&qa.mul(&qb).scale(&c));
    }
    let sum = model_sum(a.clone(), b.clone());
    let lhs = rebind_x(&q_closed(&sum, n)?.poly, &y.add(&z));
    if lhs != rhs {
        return Err(Error::Internal(format!(
            "convolution expansion mismatch at n = {n} for {} + {}",
            a.name, b.name
        )));
    }
    Ok(rhs)
}

fn rebind_x(p: &SparsePoly, to: &SparsePoly) -> SparsePoly {
    let mut map = BTreeMap::new();
    map.insert(vars::X, to.clone());
    p.substitute(&map)
}

/// `E[Q_n(X_t, t)]` as a polynomial in `t`, combining the expansion
/// coefficients with the moment polynomials: `sum_j a_j(t) mu_j(t)`.
/// Identically zero for `n >= 1`, which is the martingale property in
/// expectation.
pub fn martingale_mean_poly(model: &LevyModel, n: usize) -> Result<SparsePoly> {
    let coeffs = q_expand_in_x(model, n)?;
    let mut acc = SparsePoly::zero();
    for (j, a) in coeffs.iter().enumerate() {
        acc = acc.add(&a.mul(&model.moment_poly(j)?));
    }
    Ok(acc)
}

/// Degree through which a truncated cumulant list of order `k` still
/// certifies the martingale property.
pub fn martingale_degree_bound(k: usize) -> usize {
    k / 2 + 1
}

/// Coordinates of `p` in the basis `Q_0, Q_1, ...` of the model, by
/// repeated leading-term elimination (each `Q_d` is monic of degree `d` in
/// `x`). Polynomials outside the span, such as bare `t`, are rejected.
pub fn span_coordinates(p: &SparsePoly, model: &LevyModel) -> Result<Vec<BigRational>> {
    let deg = p.degree_in(vars::X) as usize;
    let mut coords = vec![BigRational::zero(); deg + 1];
    let mut work = p.clone();
    while !work.is_zero() {
        let d = work.degree_in(vars::X) as usize;
        let lead = work.coeffs_in_var(vars::X).swap_remove(d);
        if !lead.is_constant() {
            return Err(Error::NotInSpan(format!(
                "coefficient of x^{d} is not a constant"
            )));
        }
        let c = lead.constant_term();
        work = work.sub(&q_closed(model, d)?.poly.scale(&c));
        coords[d] = c;
        if work.degree_in(vars::X) as usize >= d && !work.is_zero() {
            return Err(Error::NotInSpan(format!(
                "residual degree did not drop below {d}"
            )));
        }
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn named_models() -> Vec<LevyModel> {
        vec![
            LevyModel::parse("brownian").unwrap(),
            LevyModel::parse("poisson:1").unwrap(),
            LevyModel::parse("gamma").unwrap(),
            LevyModel::parse("cp-lognormal").unwrap(),
            LevyModel::parse("sum:brownian+poisson:1").unwrap(),
        ]
    }

    #[test]
    fn closed_form_small_cases() {
        let brownian = LevyModel::parse("brownian").unwrap();
        assert_eq!(q_closed(&brownian, 0).unwrap().poly, SparsePoly::one());
        assert_eq!(q_closed(&brownian, 1).unwrap().poly, x());
        assert_eq!(q_closed(&brownian, 2).unwrap().poly, x().pow(2).sub(&t()));

        // x^3 - 3tx - t for the unit-rate Poisson.
        let poisson = LevyModel::parse("poisson:1").unwrap();
        let expect = x()
            .pow(3)
            .sub(&x().mul(&t()).scale(&rat_int(3)))
            .sub(&t());
        assert_eq!(q_closed(&poisson, 3).unwrap().poly, expect);
    }

    #[test]
    fn recurrence_matches_known_polynomials() {
        let gamma = LevyModel::parse("gamma").unwrap();
        assert_eq!(q_recurrence(&gamma, 2).unwrap().poly, x().pow(2).sub(&t()));
        // x^4 - 6tx^2 + 3t^2 for Brownian motion.
        let brownian = LevyModel::parse("brownian").unwrap();
        let expect = x()
            .pow(4)
            .sub(&x().pow(2).mul(&t()).scale(&rat_int(6)))
            .add(&t().pow(2).scale(&rat_int(3)));
        assert_eq!(q_recurrence(&brownian, 4).unwrap().poly, expect);
        assert_eq!(q_recurrence(&brownian, 0).unwrap().poly, SparsePoly::one());
    }

    #[test]
    fn four_routes_agree() {
        for model in named_models() {
            for n in 0..=6 {
                let closed = q_closed(&model, n).unwrap().poly;
                assert_eq!(
                    q_recurrence(&model, n).unwrap().poly,
                    closed,
                    "recurrence, {} n = {n}",
                    model.name
                );
                assert_eq!(
                    q_gf_oracle(&model, n).unwrap().poly,
                    closed,
                    "gf, {} n = {n}",
                    model.name
                );
                let mut reassembled = SparsePoly::zero();
                for (j, a) in q_expand_in_x(&model, n).unwrap().iter().enumerate() {
                    reassembled =
                        reassembled.add(&a.mul(&SparsePoly::var_pow(vars::X, j as u32)));
                }
                assert_eq!(reassembled, closed, "expand, {} n = {n}", model.name);
            }
        }
    }

    #[test]
    fn expansion_coefficients_small_cases() {
        let brownian = LevyModel::parse("brownian").unwrap();
        let a = q_expand_in_x(&brownian, 2).unwrap();
        assert_eq!(a[0], t().neg());
        assert!(a[1].is_zero());
        assert_eq!(a[2], SparsePoly::one());

        let poisson = LevyModel::parse("poisson:1").unwrap();
        let a = q_expand_in_x(&poisson, 3).unwrap();
        assert_eq!(a[0], t().neg());
        assert_eq!(a[1], t().scale(&rat_int(-3)));
        assert!(a[2].is_zero());
        assert_eq!(a[3], SparsePoly::one());
    }

    #[test]
    fn hermite_is_the_brownian_family() {
        let brownian = LevyModel::parse("brownian").unwrap();
        let h3 = x().pow(3).sub(&x().mul(&t()).scale(&rat_int(3)));
        assert_eq!(hermite_monic(3).unwrap(), h3);
        assert_eq!(hermite_monic(0).unwrap(), SparsePoly::one());
        for n in 0..=8 {
            assert_eq!(
                hermite_monic(n).unwrap(),
                q_closed(&brownian, n).unwrap().poly,
                "n = {n}"
            );
        }
    }

    #[test]
    fn charlier_combination_reproduces_poisson_q() {
        let poisson = LevyModel::parse("poisson:1").unwrap();
        let lambda = charlier_lambda(6).unwrap();
        assert_eq!(lambda[1][1], BigInt::from(2)); // lambda_2^{(2)}
        assert_eq!(lambda[2][1], BigInt::from(6)); // lambda_2^{(3)}
        assert_eq!(lambda[2][2], BigInt::from(6)); // lambda_3^{(3)}
        for row in &lambda {
            assert_eq!(row[0], BigInt::one());
        }
        let c = charlier_polys(6).unwrap();
        assert_eq!(c[0], SparsePoly::one());
        assert_eq!(c[1], x());
        for n in 1..=6 {
            let mut sum = SparsePoly::zero();
            for k in 1..=n {
                let coeff = BigRational::from_integer(lambda[n - 1][k - 1].clone());
                sum = sum.add(&c[k].scale(&coeff));
            }
            assert_eq!(sum, q_closed(&poisson, n).unwrap().poly, "n = {n}");
        }
    }

    #[test]
    fn laguerre_is_the_gamma_family() {
        let gamma = LevyModel::parse("gamma").unwrap();
        assert_eq!(laguerre_qn(1).unwrap(), x());
        assert_eq!(laguerre_qn(2).unwrap(), x().pow(2).sub(&t()));
        for n in 0..=6 {
            assert_eq!(
                laguerre_qn(n).unwrap(),
                q_closed(&gamma, n).unwrap().poly,
                "n = {n}"
            );
        }
    }

    #[test]
    fn gs_identity_generic_and_models() {
        // Fresh symbols m~_2, m~_3, ... prove the identity holds formally.
        let symbols: Vec<SparsePoly> = (0..5).map(|i| SparsePoly::var(3000 + i)).collect();
        for k in 0..=5 {
            assert!(gs_check_with(k, &symbols).unwrap(), "symbolic k = {k}");
        }
        for model in named_models() {
            for k in 0..=5 {
                assert!(
                    gs_consistency_check(&model, k).unwrap(),
                    "{} k = {k}",
                    model.name
                );
            }
        }
    }

    #[test]
    fn convolution_expansion() {
        let a = LevyModel::parse("brownian").unwrap();
        let b = LevyModel::parse("poisson:1").unwrap();
        let y = SparsePoly::var(vars::Y);
        let z = SparsePoly::var(vars::Z);
        assert_eq!(q_convolution(&a, &b, 1).unwrap(), y.add(&z));
        // (y+z)^2 - 2t.
        let expect = y.add(&z).pow(2).sub(&t().scale(&rat_int(2)));
        assert_eq!(q_convolution(&a, &b, 2).unwrap(), expect);
        for n in 0..=5 {
            q_convolution(&a, &a, n).unwrap();
            q_convolution(&a, &b, n).unwrap();
        }
    }

    #[test]
    fn martingale_mean_vanishes() {
        for model in named_models() {
            for n in 1..=6 {
                assert!(
                    martingale_mean_poly(&model, n).unwrap().is_zero(),
                    "{} n = {n}",
                    model.name
                );
            }
            assert_eq!(
                martingale_mean_poly(&model, 0).unwrap(),
                SparsePoly::one()
            );
        }
    }

    #[test]
    fn span_membership() {
        let brownian = LevyModel::parse("brownian").unwrap();
        // x^2 - t + 2x = Q_2 + 2 Q_1.
        let p = x().pow(2).sub(&t()).add(&x().scale(&rat_int(2)));
        let coords = span_coordinates(&p, &brownian).unwrap();
        assert_eq!(coords, vec![rat_int(0), rat_int(2), rat_int(1)]);
        // Bare t is not time-space harmonic.
        assert!(matches!(
            span_coordinates(&t(), &brownian),
            Err(Error::NotInSpan(_))
        ));
        // t x^2 has a non-constant leading coefficient.
        assert!(span_coordinates(&t().mul(&x().pow(2)), &brownian).is_err());
    }

    #[test]
    fn truncated_model_errors_cite_bound() {
        let m = LevyModel::from_config_str(r#"{"sigma2":"0","m":["1","1","1","1","1"]}"#)
            .unwrap();
        assert_eq!(m.available_order(), Some(6));
        q_closed(&m, 6).unwrap();
        let err = q_closed(&m, 7).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(
            err,
            Error::Truncated {
                requested: 7,
                available: 6,
                guaranteed: 4,
            }
        ));
        assert!(msg.contains('4'), "message should cite the degree bound: {msg}");
    }

    #[test]
    fn degenerate_model_gives_powers() {
        let zero = LevyModel::from_config_str(r#"{"sigma2":"0","m":[]}"#).unwrap();
        for n in 0..=5 {
            assert_eq!(
                q_closed(&zero, n).unwrap().poly,
                SparsePoly::var_pow(vars::X, n as u32)
            );
        }
    }

    #[test]
    fn degree_bound() {
        assert_eq!(martingale_degree_bound(6), 4);
        assert_eq!(martingale_degree_bound(7), 4);
    }
}
