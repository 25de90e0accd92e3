//! Exact scalars of the form `sum_k c_k * e^{k/2}` with rational `c_k`.
//!
//! Jump-moment sequences are rational for most models, but the lognormal
//! compound Poisson model has `m_k = e^{k^2/2}`. Keeping a dedicated atom for
//! `e^{1/2}` preserves exactness: since `e^{1/2}` is transcendental, these
//! scalars form a polynomial ring and no spurious cancellation can occur.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::poly::SparsePoly;
use crate::rat;
use crate::vars;

/// An element of `Q[e^{1/2}]`, keyed by the power of `e^{1/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<u32, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut s = Scalar::default();
        if !r.is_zero() {
            s.terms.insert(0, r);
        }
        s
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(rat::rat_int(n))
    }

    /// `e^{k/2}` (so `eps_pow(2)` is plain `e`).
    pub fn eps_pow(k: u32) -> Self {
        let mut s = Scalar::default();
        s.terms.insert(k, BigRational::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational part if no `e^{1/2}` power is present.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        Scalar { terms }
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c * r))
            .collect();
        Scalar { terms }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let entry = out
                    .terms
                    .entry(ka + kb)
                    .or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// As a polynomial in the atom variable [`vars::E`].
    pub fn to_poly(&self) -> SparsePoly {
        let mut p = SparsePoly::zero();
        for (k, c) in &self.terms {
            p = p.add(&SparsePoly::monomial(c.clone(), &[(vars::E, *k)]));
        }
        p
    }

    /// Numeric value with the atom mapped to `exp(0.5)`.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| rat::to_f64(c) * (0.5 * f64::from(*k)).exp())
            .sum()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", rat::format_rational(c))?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{}*", rat::format_rational(c))?;
                    }
                    if k % 2 == 0 {
                        if *k == 2 {
                            write!(f, "e")?;
                        } else {
                            write!(f, "e^{}", k / 2)?;
                        }
                    } else {
                        write!(f, "e^({}/2)", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}
