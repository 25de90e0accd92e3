//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are stored in a `BTreeMap` keyed by monomial under graded
//! reverse-lexicographic order, so iteration is deterministic and rendering
//! can walk terms from smallest to largest (or back). Coefficients are
//! arbitrary-precision rationals; zero coefficients are never stored.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::vars;

pub type VarId = u32;

/// A power product of variables. Zero exponents are never stored, so the
/// empty map is the constant monomial `1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Monomial {
    exps: BTreeMap<VarId, u32>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, k: u32) -> Self {
        let mut m = Monomial::default();
        if k > 0 {
            m.exps.insert(v, k);
        }
        m
    }

    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut m = Monomial::default();
        for &(v, k) in pairs {
            if k > 0 {
                *m.exps.entry(v).or_insert(0) += k;
            }
        }
        m
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree. The `e^{1/2}` atom is a scalar, so its power does not
    /// count; `e^2 t` has degree 1 and sorts below `x^2`.
    pub fn degree(&self) -> u32 {
        self.exps
            .iter()
            .filter(|(v, _)| **v != vars::E)
            .map(|(_, k)| k)
            .sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (v, k) in &other.exps {
            *exps.entry(*v).or_insert(0) += k;
        }
        Monomial { exps }
    }

    /// Remove the factor `v^degree_in(v)`, returning the remaining monomial.
    pub fn without_var(&self, v: VarId) -> Monomial {
        let mut exps = self.exps.clone();
        exps.remove(&v);
        Monomial { exps }
    }

    /// `(variable, exponent)` pairs in increasing variable id.
    pub fn exponents(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().map(|(v, k)| (*v, *k))
    }
}

impl Ord for Monomial {
    /// Graded reverse-lexicographic order: total degree first; among equal
    /// degrees, the monomial with the smaller exponent at the highest
    /// variable id where they differ is the larger one. The scalar atom is
    /// invisible to both stages and only breaks otherwise exact ties, so
    /// `x t` sorts above `t^2` whatever atom powers ride along.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let no_atom = |(v, _): &(&VarId, &u32)| **v != vars::E;
        let mut a = self.exps.iter().rev().filter(no_atom).peekable();
        let mut b = other.exps.iter().rev().filter(no_atom).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                // The side that still has a variable holds a positive power
                // on the highest id where the two differ, making it smaller.
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some((va, ka)), Some((vb, kb))) => {
                    if va > vb {
                        return Ordering::Less;
                    }
                    if va < vb {
                        return Ordering::Greater;
                    }
                    match ka.cmp(kb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord.reverse(),
                    }
                }
            }
        }
        self.degree_in(vars::E).cmp(&other.degree_in(vars::E)).reverse()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial as a map from monomials to nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn one() -> Self {
        SparsePoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = SparsePoly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(), c);
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        SparsePoly::monomial(BigRational::one(), &[(v, 1)])
    }

    pub fn var_pow(v: VarId, k: u32) -> Self {
        SparsePoly::monomial(BigRational::one(), &[(v, k)])
    }

    pub fn monomial(coeff: BigRational, pairs: &[(VarId, u32)]) -> Self {
        let mut p = SparsePoly::default();
        if !coeff.is_zero() {
            p.terms.insert(Monomial::from_pairs(pairs), coeff);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = SparsePoly::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::unit())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(v))
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        SparsePoly { terms }
    }

    pub fn scale(&self, r: &BigRational) -> SparsePoly {
        if r.is_zero() {
            return SparsePoly::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * r))
            .collect();
        SparsePoly { terms }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut out = SparsePoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitute polynomials for variables. Variables absent from `map`
    /// are kept as themselves.
    pub fn substitute(&self, map: &BTreeMap<VarId, SparsePoly>) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (mono, coeff) in &self.terms {
            let mut term = SparsePoly::constant(coeff.clone());
            for (v, k) in mono.exponents() {
                let factor = match map.get(&v) {
                    Some(p) => p.pow(k),
                    None => SparsePoly::var_pow(v, k),
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn partial_derivative(&self, v: VarId) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (mono, coeff) in &self.terms {
            let k = mono.degree_in(v);
            if k == 0 {
                continue;
            }
            let mut reduced = mono.without_var(v);
            if k > 1 {
                reduced = reduced.mul(&Monomial::var_pow(v, k - 1));
            }
            out.add_term(reduced, coeff * BigRational::from_integer(k.into()));
        }
        out
    }

    /// Coefficient polynomials of `v^0, v^1, ..., v^d` where `d` is the
    /// degree in `v`. Always returns at least one entry.
    pub fn coeffs_in_var(&self, v: VarId) -> Vec<SparsePoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![SparsePoly::zero(); d + 1];
        for (mono, coeff) in &self.terms {
            let k = mono.degree_in(v) as usize;
            out[k].add_term(mono.without_var(v), coeff.clone());
        }
        out
    }

    /// Evaluate with `f64` variable values. `value_of` must cover every
    /// variable that occurs.
    pub fn eval_f64(&self, value_of: impl Fn(VarId) -> Option<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (mono, coeff) in &self.terms {
            let mut term = crate::rat::to_f64(coeff);
            for (v, k) in mono.exponents() {
                let x = value_of(v)
                    .ok_or_else(|| Error::Internal(format!("unbound variable id {v}")))?;
                term *= x.powi(k as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Evaluate with exact rational variable values.
    pub fn eval_exact(
        &self,
        value_of: impl Fn(VarId) -> Option<BigRational>,
    ) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (v, k) in mono.exponents() {
                let x = value_of(v)
                    .ok_or_else(|| Error::Internal(format!("unbound variable id {v}")))?;
                for _ in 0..k {
                    term *= &x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// The variables that occur with positive degree, ascending.
    pub fn variables(&self) -> Vec<VarId> {
        let mut seen = std::collections::BTreeSet::new();
        for mono in self.terms.keys() {
            for (v, _) in mono.exponents() {
                seen.insert(v);
            }
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, ratio};

    fn x() -> SparsePoly {
        SparsePoly::var(0)
    }

    fn y() -> SparsePoly {
        SparsePoly::var(1)
    }

    #[test]
    fn graded_revlex_ordering() {
        let x2 = Monomial::var_pow(0, 2);
        let xy = Monomial::from_pairs(&[(0, 1), (1, 1)]);
        let y2 = Monomial::var_pow(1, 2);
        let x1 = Monomial::var(0);
        assert!(x2 > xy);
        assert!(xy > y2);
        assert!(y2 > x1);
        assert!(x1 > Monomial::unit());
        // Three variables separate revlex from plain lex: the monomial
        // avoiding the highest variable wins the tie.
        let y_sq = Monomial::var_pow(1, 2);
        let xz = Monomial::from_pairs(&[(0, 1), (2, 1)]);
        assert!(y_sq > xz);
    }

    #[test]
    fn atom_is_a_bystander_in_the_ordering() {
        let e4t = Monomial::from_pairs(&[(1, 1), (vars::E, 4)]);
        assert_eq!(e4t.degree(), 1);
        assert!(Monomial::var_pow(0, 2) > e4t); // x^2 above e^2 t
        assert!(Monomial::var(1) > e4t); // bare t above e^2 t
        // Among equal ordinary parts the smaller atom power leads.
        let e9xt = Monomial::from_pairs(&[(0, 1), (1, 1), (vars::E, 9)]);
        let e8t2 = Monomial::from_pairs(&[(1, 2), (vars::E, 8)]);
        assert!(e9xt > e8t2);
        assert!(Monomial::var_pow(vars::E, 4) > Monomial::var_pow(vars::E, 8));
    }

    #[test]
    fn mul_expands_binomial() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let p = x().add(&y()).pow(2);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coefficient(&Monomial::from_pairs(&[(0, 1), (1, 1)])), rat_int(2));
        assert_eq!(p.coefficient(&Monomial::var_pow(0, 2)), rat_int(1));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = x().sub(&x());
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn substitute_rebinds_and_keeps_unbound() {
        // p = x^2 + y, substitute x -> y + 1: (y+1)^2 + y = y^2 + 3y + 1
        let p = x().pow(2).add(&y());
        let mut map = BTreeMap::new();
        map.insert(0, y().add(&SparsePoly::one()));
        let q = p.substitute(&map);
        let expect = y()
            .pow(2)
            .add(&y().scale(&rat_int(3)))
            .add(&SparsePoly::one());
        assert_eq!(q, expect);
    }

    #[test]
    fn derivative_drops_and_scales() {
        // d/dx (x^3 y + x) = 3 x^2 y + 1
        let p = x().pow(3).mul(&y()).add(&x());
        let d = p.partial_derivative(0);
        let expect = x().pow(2).mul(&y()).scale(&rat_int(3)).add(&SparsePoly::one());
        assert_eq!(d, expect);
        assert!(SparsePoly::constant(ratio(1, 2)).partial_derivative(0).is_zero());
    }

    #[test]
    fn coeffs_in_var_partitions_terms() {
        // x^2 y - 2x + 3 in x: [3, -2, y]
        let p = x()
            .pow(2)
            .mul(&y())
            .add(&x().scale(&rat_int(-2)))
            .add(&SparsePoly::constant(rat_int(3)));
        let cs = p.coeffs_in_var(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], SparsePoly::constant(rat_int(3)));
        assert_eq!(cs[1], SparsePoly::constant(rat_int(-2)));
        assert_eq!(cs[2], y());
        // Reassemble.
        let mut back = SparsePoly::zero();
        for (k, c) in cs.iter().enumerate() {
            back = back.add(&c.mul(&SparsePoly::var_pow(0, k as u32)));
        }
        assert_eq!(back, p);
    }

    #[test]
    fn eval_matches_exact() {
        let p = x().pow(2).mul(&y()).add(&x().scale(&ratio(1, 2)));
        let exact = p
            .eval_exact(|v| Some(if v == 0 { ratio(3, 2) } else { rat_int(4) }))
            .unwrap();
        assert_eq!(exact, ratio(39, 4)); // (3/2)^2*4 + (3/2)/2 = 9 + 3/4
        let approx = p
            .eval_f64(|v| Some(if v == 0 { 1.5 } else { 4.0 }))
            .unwrap();
        assert!((approx - 9.75).abs() < 1e-12);
    }

    #[test]
    fn eval_unbound_variable_errors() {
        let p = x().add(&y());
        assert!(p.eval_f64(|v| (v == 0).then_some(1.0)).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = SparsePoly> {
            prop::collection::vec(
                ((0u32..3, 0u32..4, 0u32..4), -5i64..=5),
                0..5,
            )
            .prop_map(|terms| {
                let mut p = SparsePoly::zero();
                for ((v, k1, k2), c) in terms {
                    p = p.add(&SparsePoly::monomial(
                        rat_int(c),
                        &[(v, k1), ((v + 1) % 3, k2)],
                    ));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert!(a.sub(&a).is_zero());
                prop_assert_eq!(a.add(&a.neg()), SparsePoly::zero());
            }

            #[test]
            fn substitution_is_a_ring_map(a in arb_poly(), b in arb_poly()) {
                let mut map = BTreeMap::new();
                map.insert(0u32, SparsePoly::var(1).add(&SparsePoly::one()));
                prop_assert_eq!(
                    a.mul(&b).substitute(&map),
                    a.substitute(&map).mul(&b.substitute(&map))
                );
                prop_assert_eq!(
                    a.add(&b).substitute(&map),
                    a.substitute(&map).add(&b.substitute(&map))
                );
            }

            #[test]
            fn product_rule(a in arb_poly(), b in arb_poly()) {
                let lhs = a.mul(&b).partial_derivative(0);
                let rhs = a.partial_derivative(0).mul(&b)
                    .add(&a.mul(&b.partial_derivative(0)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
