//! Levy process specifications: cumulant data and the moment polynomials
//! they induce.
//!
//! A centered Levy process with all moments finite is described here by the
//! variance `sigma2` of its Gaussian part and the moment sequence
//! `m_k = integral of x^k against the Levy measure` for `k >= 2`. The
//! cumulants of `X_1` are then `k_1 = 0`, `k_2 = sigma2 + m_2` and
//! `k_k = m_k` for `k >= 3`. Named models carry closed-form sequences; user
//! models carry a finite list and error beyond it rather than padding with
//! zeros.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gamma;
use crate::poly::{SparsePoly, VarId};
use crate::rat;
use crate::scalar::Scalar;
use crate::vars;
use crate::vars::cumulant_var;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind {
    /// Standard Brownian motion: `sigma2 = 1`, no jumps.
    Brownian,
    /// Compensated Poisson process with unit jumps: `m_k = rate`.
    CompensatedPoisson { rate: BigRational },
    /// Compensated Gamma subordinator: `m_k = (k-1)!`.
    CompensatedGamma,
    /// Compensated compound Poisson process at unit intensity whose jumps
    /// are standard lognormal: `m_k = e^{k^2/2}`.
    CompoundPoissonLognormal,
    /// Independent sum of two models; cumulant data adds componentwise.
    Sum(Box<LevyModel>, Box<LevyModel>),
    /// User-supplied data: `jump_moments[i]` holds `m_{i+2}`. An empty list
    /// declares a vanishing Levy measure (all `m_k = 0`, every order
    /// available); a non-empty list of length `L` makes orders up to
    /// `K = L + 1` available.
    Custom {
        sigma2: BigRational,
        jump_moments: Vec<BigRational>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevyModel {
    pub name: String,
    pub kind: ModelKind,
}

/// Cumulant data materialized to a fixed order `K`: `sigma2` plus
/// `m_2..m_K`. Entries are [`Scalar`]s so the lognormal model stays exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSpec {
    pub sigma2: BigRational,
    m: Vec<Scalar>,
    pub order: usize,
}

impl CumulantSpec {
    /// `m_k` for `2 <= k <= order`; beyond the materialized order this is
    /// an error, never a silent zero.
    pub fn m(&self, k: usize) -> Result<&Scalar> {
        if k < 2 {
            return Err(Error::Internal(format!("m_{k} is not defined")));
        }
        self.m.get(k - 2).ok_or(Error::Truncated {
            requested: k,
            available: self.order,
            guaranteed: self.order / 2 + 1,
        })
    }

    /// `m~_k`: the order-k cumulant of `X_1`, i.e. `sigma2 + m_2` for
    /// `k = 2` and `m_k` for `k >= 3`.
    pub fn kappa_tilde(&self, k: usize) -> Result<Scalar> {
        let mut v = self.m(k)?.clone();
        if k == 2 {
            v = v.add(&Scalar::from_rational(self.sigma2.clone()));
        }
        Ok(v)
    }

    /// Substitution map sending `x_1 -> x1` and `x_k -> sign * m~_k * time`
    /// for `k = 2..=n`; this single map underlies both the moment
    /// polynomials (`sign = +1`, `x1 = 0`) and the harmonic polynomials
    /// (`sign = -1`, `x1 = x`).
    pub fn tilde_map(
        &self,
        n: usize,
        sign: i64,
        time: &SparsePoly,
        x1: &SparsePoly,
    ) -> Result<BTreeMap<VarId, SparsePoly>> {
        let mut map = BTreeMap::new();
        map.insert(cumulant_var(1), x1.clone());
        for k in 2..=n {
            let coeff = self.kappa_tilde(k)?.scale(&rat::rat_int(sign));
            map.insert(cumulant_var(k), coeff.to_poly().mul(time));
        }
        Ok(map)
    }
}

fn collect_sum_names(m: &LevyModel, out: &mut Vec<String>) {
    match &m.kind {
        ModelKind::Sum(a, b) => {
            collect_sum_names(a, out);
            collect_sum_names(b, out);
        }
        _ => out.push(m.name.clone()),
    }
}

impl LevyModel {
    pub fn new(kind: ModelKind) -> Self {
        let name = match &kind {
            ModelKind::Brownian => "brownian".to_string(),
            ModelKind::CompensatedPoisson { rate } => {
                format!("poisson:{}", rat::format_rational(rate))
            }
            ModelKind::CompensatedGamma => "gamma".to_string(),
            ModelKind::CompoundPoissonLognormal => "cp-lognormal".to_string(),
            ModelKind::Sum(a, b) => {
                // Flatten nested sums so the name re-parses.
                let mut names = Vec::new();
                collect_sum_names(a, &mut names);
                collect_sum_names(b, &mut names);
                format!("sum:{}", names.join("+"))
            }
            ModelKind::Custom { .. } => "custom".to_string(),
        };
        LevyModel { name, kind }
    }

    /// Parse a CLI model spec: `brownian`, `poisson[:rate]`, `gamma`,
    /// `cp-lognormal`, or `sum:` followed by two or more `+`-separated
    /// simple specs.
    pub fn parse(spec: &str) -> Result<LevyModel> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("sum:") {
            let parts: Vec<&str> = rest.split('+').collect();
            if parts.len() < 2 {
                return Err(Error::ModelSpec(format!(
                    "sum needs at least two components: {spec:?}"
                )));
            }
            let mut models = parts.iter().rev().map(|p| LevyModel::parse(p));
            let last = models.next().expect("len checked above")?;
            return models.try_fold(last, |acc, m| {
                Ok(LevyModel::new(ModelKind::Sum(Box::new(m?), Box::new(acc))))
            });
        }
        match spec.split_once(':') {
            None => match spec {
                "brownian" => Ok(LevyModel::new(ModelKind::Brownian)),
                "poisson" => Ok(LevyModel::new(ModelKind::CompensatedPoisson {
                    rate: rat::rat_int(1),
                })),
                "gamma" => Ok(LevyModel::new(ModelKind::CompensatedGamma)),
                "cp-lognormal" => Ok(LevyModel::new(ModelKind::CompoundPoissonLognormal)),
                other => Err(Error::ModelSpec(format!("unknown model {other:?}"))),
            },
            Some(("poisson", rate)) => {
                let rate = rat::parse_rational(rate)?;
                if !rate.is_positive() {
                    return Err(Error::ModelSpec(format!(
                        "poisson rate must be positive, got {}",
                        rat::format_rational(&rate)
                    )));
                }
                Ok(LevyModel::new(ModelKind::CompensatedPoisson { rate }))
            }
            Some(_) => Err(Error::ModelSpec(format!("unknown model {spec:?}"))),
        }
    }

    /// Build a user model from the JSON config form
    /// `{"sigma2": "p/q", "m": ["p/q", ...]}`.
    pub fn from_config_str(json: &str) -> Result<LevyModel> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ModelConfig {
            sigma2: String,
            #[serde(default)]
            m: Vec<String>,
        }
        let cfg: ModelConfig = serde_json::from_str(json)
            .map_err(|e| Error::ModelConfig(format!("malformed model config: {e}")))?;
        let sigma2 = rat::parse_rational(&cfg.sigma2)?;
        if sigma2.is_negative() {
            return Err(Error::ModelConfig(format!(
                "sigma2 must be nonnegative, got {}",
                rat::format_rational(&sigma2)
            )));
        }
        let jump_moments: Vec<BigRational> = cfg
            .m
            .iter()
            .map(|s| rat::parse_rational(s))
            .collect::<Result<_>>()?;
        if let Some(m2) = jump_moments.first() {
            if m2.is_negative() {
                return Err(Error::ModelConfig(format!(
                    "m_2 must be nonnegative, got {}",
                    rat::format_rational(m2)
                )));
            }
        }
        Ok(LevyModel::new(ModelKind::Custom {
            sigma2,
            jump_moments,
        }))
    }

    /// Highest order with cumulant data, or `None` when every order is
    /// available.
    pub fn available_order(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::Sum(a, b) => match (a.available_order(), b.available_order()) {
                (None, k) | (k, None) => k,
                (Some(ka), Some(kb)) => Some(ka.min(kb)),
            },
            ModelKind::Custom { jump_moments, .. } => {
                if jump_moments.is_empty() {
                    None
                } else {
                    Some(jump_moments.len() + 1)
                }
            }
            _ => None,
        }
    }

    /// Materialize `(sigma2, m_2..m_order)`.
    pub fn cumulants(&self, order: usize) -> Result<CumulantSpec> {
        let order = order.max(2);
        if let Some(k) = self.available_order() {
            if order > k {
                return Err(Error::Truncated {
                    requested: order,
                    available: k,
                    guaranteed: k / 2 + 1,
                });
            }
        }
        let mut sigma2 = BigRational::zero();
        let mut m = Vec::with_capacity(order - 1);
        match &self.kind {
            ModelKind::Brownian => {
                sigma2 = rat::rat_int(1);
                m.resize(order - 1, Scalar::zero());
            }
            ModelKind::CompensatedPoisson { rate } => {
                m.resize(order - 1, Scalar::from_rational(rate.clone()));
            }
            ModelKind::CompensatedGamma => {
                for k in 2..=order {
                    m.push(Scalar::from_rational(BigRational::from_integer(
                        rat::factorial(k - 1),
                    )));
                }
            }
            ModelKind::CompoundPoissonLognormal => {
                for k in 2..=order {
                    // m_k = e^{k^2/2}, i.e. the atom e^{1/2} to the power k^2.
                    m.push(Scalar::eps_pow((k * k) as u32));
                }
            }
            ModelKind::Sum(a, b) => {
                let ca = a.cumulants(order)?;
                let cb = b.cumulants(order)?;
                sigma2 = &ca.sigma2 + &cb.sigma2;
                for k in 2..=order {
                    m.push(ca.m(k)?.add(cb.m(k)?));
                }
            }
            ModelKind::Custom {
                sigma2: s2,
                jump_moments,
            } => {
                sigma2 = s2.clone();
                for k in 2..=order {
                    let v = jump_moments
                        .get(k - 2)
                        .cloned()
                        .unwrap_or_else(BigRational::zero);
                    m.push(Scalar::from_rational(v));
                }
            }
        }
        Ok(CumulantSpec { sigma2, m, order })
    }

    /// A process is degenerate when `sigma2 + m_2 = 0` (it is then constant
    /// zero). Allowed, but callers may want to flag it.
    pub fn is_degenerate(&self) -> bool {
        match self.cumulants(2) {
            Ok(c) => match c.kappa_tilde(2) {
                Ok(k2) => k2.is_zero(),
                Err(_) => false,
            },
            Err(_) => false,
        }
    }

    /// `mu_r(t) = E[X_t^r]` as an exact polynomial in `t`:
    /// `G_r(0, (m_2 + sigma2) t, m_3 t, ..., m_r t)`.
    pub fn moment_poly(&self, r: usize) -> Result<SparsePoly> {
        if r == 0 {
            return Ok(SparsePoly::one());
        }
        let g = gamma::gamma_recurrence(r)?;
        let spec = self.cumulants(r)?;
        let map = spec.tilde_map(r, 1, &SparsePoly::var(vars::T), &SparsePoly::zero())?;
        Ok(g.poly.substitute(&map))
    }

    /// Total Gaussian variance as binary64, for path simulation.
    pub fn sigma2_f64(&self) -> f64 {
        match &self.kind {
            ModelKind::Brownian => 1.0,
            ModelKind::Sum(a, b) => a.sigma2_f64() + b.sigma2_f64(),
            ModelKind::Custom { sigma2, .. } => rat::to_f64(sigma2),
            _ => 0.0,
        }
    }
}

/// Independent sum of two models.
pub fn model_sum(a: LevyModel, b: LevyModel) -> LevyModel {
    LevyModel::new(ModelKind::Sum(Box::new(a), Box::new(b)))
}
