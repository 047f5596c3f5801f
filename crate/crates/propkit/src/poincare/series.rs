//! Multivariate truncated power series over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, q, Q};
use crate::{Error, Result};

/// Which monomials are kept: per-variable maximal exponents and an optional
/// bound on the total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub orders: Vec<usize>,
    pub total: Option<usize>,
}

impl Truncation {
    pub fn keeps(&self, e: &[usize]) -> bool {
        e.iter().zip(&self.orders).all(|(a, b)| a <= b) && self.total.is_none_or(|t| e.iter().sum::<usize>() <= t)
    }

    fn meet(&self, other: &Truncation) -> Truncation {
        Truncation {
            orders: self.orders.iter().zip(&other.orders).map(|(a, b)| *a.min(b)).collect(),
            total: match (self.total, other.total) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }

    /// Largest total degree a kept monomial can have.
    fn max_degree(&self) -> usize {
        let s: usize = self.orders.iter().sum();
        self.total.map_or(s, |t| t.min(s))
    }
}

#[derive(Debug, Clone)]
pub struct TruncSeries {
    vars: Vec<String>,
    trunc: Truncation,
    coeffs: BTreeMap<Vec<usize>, Q>,
}

impl TruncSeries {
    pub fn zero(vars: &[&str], orders: &[usize], total: Option<usize>) -> Self {
        assert_eq!(vars.len(), orders.len(), "one order per variable");
        TruncSeries {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            trunc: Truncation {
                orders: orders.to_vec(),
                total,
            },
            coeffs: BTreeMap::new(),
        }
    }

    /// Zero series sharing the variables and truncation of `self`.
    pub fn zero_like(&self) -> Self {
        TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: Q) -> Self {
        self.monomial_like(&vec![0; self.vars.len()], c)
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(Q::one())
    }

    pub fn monomial_like(&self, e: &[usize], c: Q) -> Self {
        let mut s = self.zero_like();
        s.add_term(e, c);
        s
    }

    /// The variable `name` as a series.
    pub fn var_like(&self, name: &str) -> Self {
        let i = self.var_index(name).expect("variable exists");
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        self.monomial_like(&e, Q::one())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Adds `c` at exponent `e`, dropping it if outside the truncation.
    pub fn add_term(&mut self, e: &[usize], c: Q) {
        if c.is_zero() || !self.trunc.keeps(e) {
            return;
        }
        let slot = self.coeffs.entry(e.to_vec()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(e);
        }
    }

    pub fn coeff(&self, e: &[usize]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn check_vars(&self, other: &TruncSeries) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::arg(format!(
                "variables differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    /// Re-truncates to `trunc`, which must not exceed the current one.
    pub fn truncate(&self, trunc: &Truncation) -> TruncSeries {
        let trunc = self.trunc.meet(trunc);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| trunc.keeps(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        TruncSeries {
            vars: self.vars.clone(),
            trunc,
            coeffs,
        }
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_vars(other)?;
        let mut out = TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc.meet(&other.trunc),
            coeffs: BTreeMap::new(),
        };
        for (e, c) in self.coeffs.iter().chain(&other.coeffs) {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> TruncSeries {
        let mut out = self.zero_like();
        for (e, x) in &self.coeffs {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_vars(other)?;
        let mut out = TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc.meet(&other.trunc),
            coeffs: BTreeMap::new(),
        };
        let mut e = vec![0; self.vars.len()];
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                for i in 0..e.len() {
                    e[i] = a[i] + b[i];
                }
                if out.trunc.keeps(&e) {
                    out.add_term(&e, x * y);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> TruncSeries {
        let mut out = self.one_like();
        for _ in 0..k {
            out = out.mul(self).expect("same variables");
        }
        out
    }

    /// `Σ a_k h^k` for `h` without constant term; stops once `h^k` vanishes.
    fn apply_univariate(&self, h: &TruncSeries, a: impl Fn(usize) -> Q) -> TruncSeries {
        let mut out = self.zero_like();
        let mut power = h.one_like();
        for k in 0..=h.trunc.max_degree() {
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&a(k))).expect("same variables");
            power = power.mul(h).expect("same variables");
        }
        out
    }

    fn split_constant(&self) -> (Q, TruncSeries) {
        let c = self.constant_term();
        (c.clone(), self.sub(&self.constant_like(c)).expect("same variables"))
    }

    pub fn inv(&self) -> Result<TruncSeries> {
        let (c, h) = self.split_constant();
        if c.is_zero() {
            return Err(Error::arg("series with zero constant term is not invertible"));
        }
        let h = h.scale(&c.recip());
        let ci = c.recip();
        Ok(self.apply_univariate(&h, |k| if k % 2 == 0 { ci.clone() } else { -ci.clone() }))
    }

    pub fn exp(&self) -> Result<TruncSeries> {
        let (c, h) = self.split_constant();
        if !c.is_zero() {
            return Err(Error::arg("exp needs a zero constant term"));
        }
        let mut fact = Q::one();
        let mut coeffs = vec![Q::one()];
        for k in 1..=h.trunc.max_degree() {
            fact *= q(k as i64);
            coeffs.push(fact.recip());
        }
        Ok(self.apply_univariate(&h, |k| coeffs[k].clone()))
    }

    /// `ln(s)` for constant term 1.
    pub fn ln(&self) -> Result<TruncSeries> {
        let (c, h) = self.split_constant();
        if !c.is_one() {
            return Err(Error::arg("ln needs constant term 1"));
        }
        Ok(self.apply_univariate(&h, |k| {
            if k == 0 {
                Q::zero()
            } else {
                let x = Q::new(1.into(), (k as i64).into());
                if k % 2 == 1 {
                    x
                } else {
                    -x
                }
            }
        }))
    }

    /// Square root with constant term 1, by the binomial series.
    pub fn sqrt(&self) -> Result<TruncSeries> {
        let (c, h) = self.split_constant();
        if !c.is_one() {
            return Err(Error::arg("sqrt needs constant term 1"));
        }
        let half = Q::new(1.into(), 2.into());
        let mut coeffs = vec![Q::one()];
        for k in 1..=h.trunc.max_degree() {
            let prev = coeffs[k - 1].clone();
            coeffs.push(prev * (&half - q(k as i64 - 1)) / q(k as i64));
        }
        Ok(self.apply_univariate(&h, |k| coeffs[k].clone()))
    }

    /// Divides by `var^k`; every term must be divisible. The order of `var`
    /// drops by `k`.
    pub fn div_monomial(&self, var: &str, k: usize) -> Result<TruncSeries> {
        let i = self
            .var_index(var)
            .ok_or_else(|| Error::arg(format!("no variable {var}")))?;
        let mut out = self.zero_like();
        out.trunc.orders[i] = out.trunc.orders[i].saturating_sub(k);
        out.trunc.total = out.trunc.total.map(|t| t.saturating_sub(k));
        for (e, c) in &self.coeffs {
            if e[i] < k {
                return Err(Error::arg(format!("term {e:?} is not divisible by {var}^{k}")));
            }
            let mut f = e.clone();
            f[i] -= k;
            out.add_term(&f, c.clone());
        }
        Ok(out)
    }

    /// Replaces `var` by `c·var`.
    pub fn scale_var(&self, var: &str, c: &Q) -> TruncSeries {
        let i = self.var_index(var).expect("variable exists");
        let mut out = self.zero_like();
        for (e, x) in &self.coeffs {
            let mut f = x.clone();
            for _ in 0..e[i] {
                f *= c;
            }
            out.add_term(e, f);
        }
        out
    }

    /// Substitutes `inner` for `var`. `inner` must have no constant term.
    pub fn substitute(&self, var: &str, inner: &TruncSeries) -> Result<TruncSeries> {
        self.check_vars(inner)?;
        if !inner.constant_term().is_zero() {
            return Err(Error::arg("substituted series must have zero constant term"));
        }
        let i = self
            .var_index(var)
            .ok_or_else(|| Error::arg(format!("no variable {var}")))?;
        let mut by_power: BTreeMap<usize, TruncSeries> = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let mut f = e.clone();
            f[i] = 0;
            by_power
                .entry(e[i])
                .or_insert_with(|| self.zero_like())
                .add_term(&f, c.clone());
        }
        let mut out = self.zero_like().truncate(&inner.trunc);
        let mut power = out.one_like();
        let mut k = 0;
        for (p, coeff) in by_power {
            while k < p {
                power = power.mul(inner)?;
                k += 1;
            }
            if power.is_zero() {
                break;
            }
            out = out.add(&coeff.mul(&power)?)?;
        }
        Ok(out)
    }

    /// Coefficient of `var^k` as a series in the remaining variables, which
    /// keep their positions with `var` fixed at exponent 0.
    pub fn extract(&self, var: &str, k: usize) -> TruncSeries {
        let i = self.var_index(var).expect("variable exists");
        let mut out = self.zero_like();
        for (e, c) in &self.coeffs {
            if e[i] == k {
                let mut f = e.clone();
                f[i] = 0;
                out.add_term(&f, c.clone());
            }
        }
        out
    }

    /// Highest exponent of `var` among nonzero terms.
    pub fn degree_in(&self, var: &str) -> usize {
        let i = self.var_index(var).expect("variable exists");
        self.coeffs.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Lowest exponent of `var` among nonzero terms.
    pub fn valuation_in(&self, var: &str) -> Option<usize> {
        let i = self.var_index(var).expect("variable exists");
        self.coeffs.keys().map(|e| e[i]).min()
    }

    /// Renames variables, keeping positions.
    pub fn rename(&self, names: &[&str]) -> TruncSeries {
        assert_eq!(names.len(), self.vars.len());
        TruncSeries {
            vars: names.iter().map(|v| v.to_string()).collect(),
            trunc: self.trunc.clone(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Re-expresses the series over `vars` (a superset) with the given
    /// truncation; new variables get exponent 0.
    pub fn embed(&self, vars: &[&str], orders: &[usize], total: Option<usize>) -> Result<TruncSeries> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::arg(format!("variable {v} not in target")))
            })
            .collect::<Result<_>>()?;
        let mut out = TruncSeries::zero(vars, orders, total);
        let mut f = vec![0; vars.len()];
        for (e, c) in &self.coeffs {
            f.iter_mut().for_each(|x| *x = 0);
            for (k, &j) in map.iter().enumerate() {
                f[j] = e[k];
            }
            out.add_term(&f, c.clone());
        }
        Ok(out)
    }
}

/// Coefficientwise equality on the common truncation window.
impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let t = self.trunc.meet(&other.trunc);
        self.truncate(&t).coeffs == other.truncate(&t).coeffs
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_q(c))?;
            for (v, k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn x_series(order: usize) -> TruncSeries {
        TruncSeries::zero(&["x"], &[order], None).var_like("x")
    }

    fn coeffs(s: &TruncSeries, n: usize) -> Vec<Q> {
        (0..=n).map(|k| s.coeff(&[k])).collect()
    }

    #[test]
    fn elementary_functions() {
        let x = x_series(6);
        let e = x.exp().unwrap();
        assert_eq!(coeffs(&e, 3), vec![q(1), q(1), frac(1, 2), frac(1, 6)]);
        let one_plus = x.add(&x.one_like()).unwrap();
        assert_eq!(one_plus.ln().unwrap().exp().unwrap(), one_plus);
        assert_eq!(e.ln().unwrap(), x);
        let inv = one_plus.inv().unwrap();
        assert_eq!(coeffs(&inv, 3), vec![q(1), q(-1), q(1), q(-1)]);
        assert_eq!(inv.mul(&one_plus).unwrap(), x.one_like());
        let s = x.scale(&q(4)).add(&x.one_like()).unwrap().sqrt().unwrap();
        assert_eq!(coeffs(&s, 4), vec![q(1), q(2), q(-2), q(4), q(-10)]);
        assert_eq!(s.mul(&s).unwrap(), x.scale(&q(4)).add(&x.one_like()).unwrap());
        assert_eq!(x.one_like().sqrt().unwrap(), x.one_like());
        assert!(x.inv().is_err());
        assert!(x.one_like().exp().is_err());
    }

    #[test]
    fn substitution() {
        let x = x_series(10);
        let com = x.neg().exp().unwrap().sub(&x.one_like()).unwrap();
        let lie = x.add(&x.one_like()).unwrap().ln().unwrap().neg();
        assert_eq!(lie.substitute("x", &com).unwrap(), x);
        assert_eq!(com.substitute("x", &x).unwrap(), com);
        assert!(com.substitute("x", &x.one_like()).is_err());
    }

    #[test]
    fn monomial_division() {
        let x = x_series(5);
        let s = x.pow(2).add(&x.pow(3)).unwrap();
        let d = s.div_monomial("x", 2).unwrap();
        assert_eq!(coeffs(&d, 3), vec![q(1), q(1), q(0), q(0)]);
        assert_eq!(d.truncation().orders, vec![3]);
        assert!(x.div_monomial("x", 2).is_err());
    }

    #[test]
    fn total_truncation() {
        let s = TruncSeries::zero(&["x", "y"], &[5, 5], Some(3));
        let x = s.var_like("x");
        let y = s.var_like("y");
        let p = x.add(&y).unwrap().pow(4);
        assert!(p.is_zero());
        let p = x.add(&y).unwrap().pow(3);
        assert_eq!(p.coeff(&[1, 2]), q(3));
        assert_eq!(p.extract("y", 2).coeff(&[1, 0]), q(3));
        let e = x.embed(&["y", "x", "z"], &[2, 2, 2], None).unwrap();
        assert_eq!(e.coeff(&[0, 1, 0]), q(1));
        assert_eq!(y.scale_var("y", &q(-1)), y.neg());
        assert_eq!(format!("{}", p.extract("y", 2)), "3*x");
    }

    fn arb_series() -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec(-3i64..=3, 9).prop_map(|c| {
            let mut s = TruncSeries::zero(&["x", "y"], &[2, 2], None);
            for (i, v) in c.into_iter().enumerate() {
                s.add_term(&[i / 3, i % 3], q(v));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn sqrt_squares(a in arb_series()) {
            let mut s = a.clone();
            let c = s.constant_term();
            s.add_term(&[0, 0], Q::one() - c);
            let r = s.sqrt().unwrap();
            prop_assert_eq!(r.mul(&r).unwrap(), s);
        }
    }
}
