//! Truncated exponential generating functions with polynomial coefficients.
//!
//! A series of order `K` stores coefficients `c_0, ..., c_K` of
//! `f(w) = sum_k c_k w^k / k!` where each `c_k` is a [`SparsePoly`]. All
//! operations truncate at order `K`, which is sound because every operation
//! here only propagates coefficients downward or within the same order.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::SparsePoly;
use crate::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<SparsePoly>,
}

impl TruncatedSeries {
    /// The zero series of the given truncation order.
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![SparsePoly::zero(); order + 1],
        }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = SparsePoly::one();
        s
    }

    pub fn from_egf_coeffs(coeffs: Vec<SparsePoly>) -> Self {
        assert!(!coeffs.is_empty());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `w^k / k!`.
    pub fn coeff(&self, k: usize) -> &SparsePoly {
        &self.coeffs[k]
    }

    /// Coefficient of `w^k` (the ordinary convention).
    pub fn ordinary_coeff(&self, k: usize) -> SparsePoly {
        let inv_fact = BigRational::new(1.into(), rat::factorial(k));
        self.coeffs[k].scale(&inv_fact)
    }

    pub fn set_coeff(&mut self, k: usize, c: SparsePoly) {
        self.coeffs[k] = c;
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), other.order());
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, r: &BigRational) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().map(|c| c.scale(r)).collect();
        TruncatedSeries { coeffs }
    }

    pub fn scale_poly(&self, p: &SparsePoly) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().map(|c| c.mul(p)).collect();
        TruncatedSeries { coeffs }
    }

    /// Cauchy product in the EGF convention:
    /// `r_k = sum_j C(k, j) p_j q_{k-j}`.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), other.order());
        let k_max = self.order();
        let mut out = TruncatedSeries::zero(k_max);
        for k in 0..=k_max {
            let mut acc = SparsePoly::zero();
            for j in 0..=k {
                if self.coeffs[j].is_zero() || other.coeffs[k - j].is_zero() {
                    continue;
                }
                let c = BigRational::from_integer(rat::binomial(k, j));
                acc = acc.add(&self.coeffs[j].mul(&other.coeffs[k - j]).scale(&c));
            }
            out.coeffs[k] = acc;
        }
        out
    }

    /// `exp` of a series with zero constant term, via the partial sums
    /// `sum_{m=0}^{K} self^m / m!`. Powers of a series with zero constant
    /// term have no coefficients below order `m`, so the truncated sum is
    /// exact through order `K`.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let k_max = self.order();
        let mut out = TruncatedSeries::one(k_max);
        let mut power = TruncatedSeries::one(k_max);
        for m in 1..=k_max {
            power = power.mul(self);
            let inv_fact = BigRational::new(1.into(), rat::factorial(m));
            out = out.add(&power.scale(&inv_fact));
        }
        Ok(out)
    }

    /// `log(1 + w)` truncated at the given order.
    pub fn log_one_plus(order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        for k in 1..=order {
            // Ordinary coefficient (-1)^{k+1} / k, so the EGF coefficient is
            // (-1)^{k+1} (k-1)!.
            let mut c = BigRational::from_integer(rat::factorial(k - 1));
            if k % 2 == 0 {
                c = -c;
            }
            s.coeffs[k] = SparsePoly::constant(c);
        }
        s
    }

    /// `log(1 - w)` truncated at the given order.
    pub fn log_one_minus(order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        for k in 1..=order {
            let c = -BigRational::from_integer(rat::factorial(k - 1));
            s.coeffs[k] = SparsePoly::constant(c);
        }
        s
    }

    /// The series `c * w` (EGF coefficient `c` at order 1).
    pub fn linear(order: usize, c: SparsePoly) -> TruncatedSeries {
        assert!(order >= 1);
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[1] = c;
        s
    }
}

impl TruncatedSeries {
    pub fn is_one(&self) -> bool {
        self.coeffs[0] == SparsePoly::one() && self.coeffs[1..].iter().all(SparsePoly::is_zero)
    }
}
