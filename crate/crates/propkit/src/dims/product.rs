//! Connected product, concatenation exponential and Koszul Euler characteristics.

use num_traits::Zero;

use super::{DimTable, Window};
use crate::combinatorics::{automorphisms, connected_count_parts, partitions, MAX_CONNECTED_N};
use crate::rational::{factorial_q, Q};
use crate::{Error, Result};

/// Largest number of internal edges a two-level connected graph can have
/// while landing in `window`, for factors of leg slope `s`.
///
/// Each top vertex has at least one output, so the top level has at most
/// `s·ρ_top + m` inputs; likewise the bottom level has at most `s·ρ_bot + n`
/// outputs. Entries with `m + n > s·ρ + 2` vanish, which caps `m + n`.
pub fn internal_edge_bound(window: Window, s: usize) -> usize {
    let legs = (window.m + window.n).min(s * window.rho + 2);
    (s * window.rho + legs) / 2
}

/// Windows the top and bottom factors must cover for a product on `window`.
pub fn factor_windows(window: Window, s: usize) -> (Window, Window) {
    let e = internal_edge_bound(window, s).max(1);
    (
        Window::new(window.m, e, window.rho),
        Window::new(e, window.n, window.rho),
    )
}

fn product_slope(q: &DimTable, p: &DimTable) -> Result<usize> {
    match (q.slope(), p.slope()) {
        (Some(a), Some(b)) => Ok(a.max(b)),
        _ => Err(Error::cap(
            "the connected product needs tables with a leg slope to bound internal edges",
        )),
    }
}

/// Polynomial in (legs, weight), dense, truncated at `(legs_max, rho_max)`.
#[derive(Clone)]
struct Poly2 {
    legs: usize,
    rho: usize,
    c: Vec<Q>,
}

impl Poly2 {
    fn zero(legs: usize, rho: usize) -> Self {
        Poly2 {
            legs,
            rho,
            c: vec![Q::zero(); (legs + 1) * (rho + 1)],
        }
    }

    fn one(legs: usize, rho: usize) -> Self {
        let mut p = Poly2::zero(legs, rho);
        p.c[0] = Q::from_integer(1.into());
        p
    }

    fn at(&self, l: usize, r: usize) -> &Q {
        &self.c[l * (self.rho + 1) + r]
    }

    fn add_at(&mut self, l: usize, r: usize, x: &Q) {
        self.c[l * (self.rho + 1) + r] += x;
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.legs, self.rho);
        for l1 in 0..=self.legs {
            for r1 in 0..=self.rho {
                let a = self.at(l1, r1);
                if a.is_zero() {
                    continue;
                }
                for l2 in 0..=self.legs - l1 {
                    for r2 in 0..=self.rho - r1 {
                        let b = other.at(l2, r2);
                        if !b.is_zero() {
                            out.add_at(l1 + l2, r1 + r2, &(a * b));
                        }
                    }
                }
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

/// Dimensions of `Q ⊠_c P` on `window`.
///
/// With `G_k = Σ Q(l,k,ρ)/(l!k!)·y^l z^ρ` and `F_j = Σ P(j,i,ρ)/(j!i!)·x^i z^ρ`,
/// the entry `(m,n,ρ)` is `m!·n!` times the coefficient of `y^m x^n z^ρ` in
///
/// `Σ_N Σ_{K, J ⊢ N} #S^c(K,J) / (aut K · aut J) · Π_{k∈K} G_k · Π_{j∈J} F_j`,
///
/// the sum running over integer partitions `K`, `J` of the internal edge count.
pub fn boxc_dims(q: &DimTable, p: &DimTable, window: Window) -> Result<DimTable> {
    let s = product_slope(q, p)?;
    let nmax = internal_edge_bound(window, s);
    if nmax > MAX_CONNECTED_N {
        return Err(Error::cap(format!(
            "window {window} needs {nmax} internal edges; the limit is {MAX_CONNECTED_N}"
        )));
    }
    let (wm, wn, wr) = (window.m, window.n, window.rho);
    let top: Vec<Poly2> = (0..=nmax)
        .map(|k| {
            let mut g = Poly2::zero(wm, wr);
            if k > 0 {
                for l in 1..=wm {
                    for r in 0..=wr {
                        let v = q.get(l, k, r)?;
                        if !v.is_zero() {
                            g.add_at(l, r, &(v / (factorial_q(l) * factorial_q(k))));
                        }
                    }
                }
            }
            Ok(g)
        })
        .collect::<Result<_>>()?;
    let bottom: Vec<Poly2> = (0..=nmax)
        .map(|j| {
            let mut f = Poly2::zero(wn, wr);
            if j > 0 {
                for i in 1..=wn {
                    for r in 0..=wr {
                        let v = p.get(j, i, r)?;
                        if !v.is_zero() {
                            f.add_at(i, r, &(v / (factorial_q(j) * factorial_q(i))));
                        }
                    }
                }
            }
            Ok(f)
        })
        .collect::<Result<_>>()?;

    let mut acc = vec![Q::zero(); (wm + 1) * (wn + 1) * (wr + 1)];
    let idx = |m: usize, n: usize, r: usize| (m * (wn + 1) + n) * (wr + 1) + r;
    for big_n in 1..=nmax {
        let parts = partitions(big_n);
        let tops: Vec<Poly2> = parts
            .iter()
            .map(|k| k.iter().fold(Poly2::one(wm, wr), |a, &x| a.mul(&top[x])))
            .collect();
        let bottoms: Vec<Poly2> = parts
            .iter()
            .map(|j| j.iter().fold(Poly2::one(wn, wr), |a, &x| a.mul(&bottom[x])))
            .collect();
        for (ki, k) in parts.iter().enumerate() {
            if tops[ki].is_zero() {
                continue;
            }
            for (ji, j) in parts.iter().enumerate() {
                if bottoms[ji].is_zero() {
                    continue;
                }
                let c = connected_count_parts(k, j)?;
                if c == 0 {
                    continue;
                }
                let w = Q::new(c.into(), (automorphisms(k) * automorphisms(j)).into());
                let (g, f) = (&tops[ki], &bottoms[ji]);
                for m in 1..=wm {
                    for r1 in 0..=wr {
                        let a = g.at(m, r1);
                        if a.is_zero() {
                            continue;
                        }
                        let wa = &w * a;
                        for n in 1..=wn {
                            for r2 in 0..=wr - r1 {
                                let b = f.at(n, r2);
                                if !b.is_zero() {
                                    acc[idx(m, n, r1 + r2)] += &wa * b;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(DimTable::from_fn(window, Some(s), |m, n, r| {
        &acc[idx(m, n, r)] * factorial_q(m) * factorial_q(n)
    }))
}

/// Dimensions of the free concatenation algebra `S_⊗(M)` on `window`,
/// by the exponential formula `Σ_t f^t / t!` on `f = Σ dim/(m!n!)`.
pub fn sym_exp_dims(table: &DimTable, window: Window) -> Result<DimTable> {
    let (wm, wn, wr) = (window.m, window.n, window.rho);
    let idx = |m: usize, n: usize, r: usize| (m * (wn + 1) + n) * (wr + 1) + r;
    let size = (wm + 1) * (wn + 1) * (wr + 1);
    let mut f = vec![Q::zero(); size];
    for m in 1..=wm {
        for n in 1..=wn {
            for r in 0..=wr {
                let v = table.get(m, n, r)?;
                if !v.is_zero() {
                    f[idx(m, n, r)] = v / (factorial_q(m) * factorial_q(n));
                }
            }
        }
    }
    let mul = |a: &[Q], b: &[Q]| {
        let mut out = vec![Q::zero(); size];
        for m1 in 0..=wm {
            for n1 in 0..=wn {
                for r1 in 0..=wr {
                    let x = &a[idx(m1, n1, r1)];
                    if x.is_zero() {
                        continue;
                    }
                    for m2 in 0..=wm - m1 {
                        for n2 in 0..=wn - n1 {
                            for r2 in 0..=wr - r1 {
                                let y = &b[idx(m2, n2, r2)];
                                if !y.is_zero() {
                                    out[idx(m1 + m2, n1 + n2, r1 + r2)] += x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let mut total = f.clone();
    let mut power = f.clone();
    for t in 2..=wm.min(wn) {
        power = mul(&power, &f);
        let inv = factorial_q(t).recip();
        for (acc, x) in total.iter_mut().zip(&power) {
            if !x.is_zero() {
                *acc += x * &inv;
            }
        }
    }
    Ok(DimTable::from_fn(window, None, |m, n, r| {
        &total[idx(m, n, r)] * factorial_q(m) * factorial_q(n)
    }))
}

/// Dimensions of `Q ⊠ P = S_⊗(Q ⊠_c P)`.
pub fn box_dims(q: &DimTable, p: &DimTable, window: Window) -> Result<DimTable> {
    sym_exp_dims(&boxc_dims(q, p, window)?, window)
}

/// `Σ_k (-1)^k dim (P¡ ⊠_c P)_(k, d-k)(m, n)`, where the bidegree records the
/// weight carried by the `P¡` vertices and by the `P` vertices.
///
/// Weights add along the product, so the alternating sum is the plain product
/// with `P¡_(k)` scaled by `(-1)^k`.
pub fn euler_koszul(p: &DimTable, pdual: &DimTable, m: usize, n: usize, d: usize) -> Result<Q> {
    euler_koszul_table(p, pdual, Window::new(m, n, d))?.get(m, n, d)
}

/// All Euler characteristics on `window` at once.
pub fn euler_koszul_table(p: &DimTable, pdual: &DimTable, window: Window) -> Result<DimTable> {
    boxc_dims(&pdual.weight_signed(), p, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{opposite, unit_table, Catalog};
    use crate::rational::q;
    use proptest::prelude::*;

    fn cat(name: &str, w: Window) -> DimTable {
        Catalog::builtin().table(name, w).unwrap()
    }

    fn unit_plus_binary() -> DimTable {
        let mut t = unit_table(Window::new(4, 4, 3));
        t.set(1, 2, 1, q(1)).unwrap();
        DimTable { slope: Some(1), ..t }
    }

    #[test]
    fn unit_laws() {
        let w = Window::new(3, 3, 3);
        for name in ["com", "lie", "epsbi-dual", "bilie-dual", "sym2", "dend"] {
            let (qw, pw) = factor_windows(w, 1);
            let m = cat(name, Window::new(6, 6, 3));
            let u = unit_table(Window::new(6, 6, 3));
            assert_eq!(boxc_dims(&m, &u, w).unwrap(), m.restrict_window(w).unwrap(), "{name}");
            assert_eq!(boxc_dims(&u, &m, w).unwrap(), m.restrict_window(w).unwrap(), "{name}");
            assert!(qw.m == 3 && pw.n == 3);
        }
    }

    #[test]
    fn binary_generator_square() {
        let v = unit_plus_binary();
        let prod = boxc_dims(&v, &v, Window::new(1, 3, 2)).unwrap();
        assert_eq!(prod.get(1, 3, 2).unwrap(), q(3));
        assert_eq!(prod.get(1, 2, 1).unwrap(), q(2));
    }

    /// Independent composition `Q ∘ P` of S-modules: a root from `Q(1,k)` with
    /// `k` ordered children, divided by the `k!` reorderings of the children.
    fn circ(qd: &dyn Fn(usize, usize) -> Q, pd: &dyn Fn(usize, usize) -> Q, n: usize, rho: usize) -> Q {
        fn children(pd: &dyn Fn(usize, usize) -> Q, k: usize, n: usize, rho: usize) -> Q {
            // Σ over ordered (i_1..i_k), weights, set compositions: n!/Π i! · Π P(i_a)
            if k == 0 {
                return if n == 0 && rho == 0 { q(1) } else { q(0) };
            }
            let mut s = q(0);
            for i in 1..=n {
                for r in 0..=rho {
                    let x = pd(i, r);
                    if x.is_zero() {
                        continue;
                    }
                    let binom = factorial_q(n) / (factorial_q(i) * factorial_q(n - i));
                    s += binom * x * children(pd, k - 1, n - i, rho - r);
                }
            }
            s
        }
        let mut total = q(0);
        for k in 1..=n {
            for r in 0..=rho {
                let x = qd(k, r);
                if !x.is_zero() {
                    total += x * children(pd, k, n, rho - r) / factorial_q(k);
                }
            }
        }
        total
    }

    #[test]
    fn operadic_collapse() {
        let names = ["com", "lie", "as", "dend", "dias"];
        for a in names {
            for b in names {
                let w = Window::new(1, 6, 5);
                let (ta, tb) = (cat(a, Window::new(8, 8, 5)), cat(b, Window::new(8, 8, 5)));
                let prod = boxc_dims(&ta, &tb, w).unwrap();
                for n in 1..=6 {
                    for rho in 0..=5 {
                        let expect = circ(
                            &|k, r| ta.get(1, k, r).unwrap(),
                            &|i, r| tb.get(1, i, r).unwrap(),
                            n,
                            rho,
                        );
                        assert_eq!(prod.get(1, n, rho).unwrap(), expect, "{a}∘{b} at ({n},{rho})");
                    }
                }
            }
        }
        let com = cat("com", Window::new(8, 8, 5));
        let cc = boxc_dims(&com, &com, Window::new(1, 3, 2)).unwrap();
        assert_eq!(cc.get(1, 2, 1).unwrap(), q(2));
        assert_eq!(cc.get(1, 3, 2).unwrap(), q(5));
    }

    #[test]
    fn exponential_formula() {
        let u = unit_table(Window::new(4, 4, 0));
        let s = sym_exp_dims(&u, Window::new(4, 4, 0)).unwrap();
        assert_eq!(s.get(1, 1, 0).unwrap(), q(1));
        assert_eq!(s.get(2, 2, 0).unwrap(), q(2));
        assert_eq!(s.get(2, 1, 0).unwrap(), q(0));
        assert_eq!(s.get(4, 4, 0).unwrap(), q(24));
        let b = box_dims(&u, &u, Window::new(3, 3, 0)).unwrap();
        assert_eq!(b.get(3, 3, 0).unwrap(), q(6));
        let lie = cat("bilie-dual", Window::new(6, 6, 4));
        let w = Window::new(3, 3, 3);
        let full = box_dims(&lie, &unit_table(Window::new(6, 6, 4)), w).unwrap();
        assert_eq!(full, sym_exp_dims(&lie, w).unwrap());
        let conn = boxc_dims(&lie, &lie, w).unwrap();
        let all = box_dims(&lie, &lie, w).unwrap();
        for r in 0..=3 {
            assert_eq!(conn.get(1, 1, r).unwrap(), all.get(1, 1, r).unwrap());
        }
    }

    #[test]
    fn euler_examples() {
        let com = cat("com", Window::new(8, 8, 5));
        let lie = cat("lie", Window::new(8, 8, 5));
        assert_eq!(euler_koszul(&com, &lie, 1, 1, 0).unwrap(), q(1));
        assert_eq!(euler_koszul(&com, &lie, 1, 2, 0).unwrap(), q(0));
        for d in 1..=4 {
            for n in 2..=6 {
                assert_eq!(euler_koszul(&com, &lie, 1, n, d).unwrap(), q(0), "({n},{d})");
            }
        }
        let t = euler_koszul_table(&com, &lie, Window::new(1, 5, 4)).unwrap();
        assert_eq!(t.entries().count(), 1);
        assert!(euler_koszul_table(&com, &lie, Window::new(1, 5, 9)).is_err());
    }

    #[test]
    fn genus_one_mass_is_fractional() {
        let w = Window::new(3, 3, 4);
        let lie = cat("lie", Window::new(6, 6, 4));
        let bilie = boxc_dims(&lie, &opposite(&lie), w).unwrap();
        assert_eq!(bilie.get(1, 1, 2).unwrap(), Q::new(1.into(), 2.into()));
        assert_eq!(bilie.get(1, 2, 1).unwrap(), q(1));
        assert_eq!(bilie.get(2, 2, 2).unwrap(), q(4));
    }

    fn arb_table(w: Window) -> impl Strategy<Value = DimTable> {
        let cells: Vec<(usize, usize, usize)> = (1..=w.m)
            .flat_map(|m| (1..=w.n).flat_map(move |n| (1..=w.rho).map(move |r| (m, n, r))))
            .filter(|&(m, n, r)| m + n <= r + 2)
            .collect();
        proptest::collection::vec(0i64..=2, cells.len()).prop_map(move |vals| {
            let mut t = unit_table(w);
            for (&(m, n, r), v) in cells.iter().zip(vals) {
                t.set(m, n, r, q(v)).unwrap();
            }
            DimTable { slope: Some(1), ..t }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn associative(
            a in arb_table(Window::new(4, 4, 2)),
            b in arb_table(Window::new(4, 4, 2)),
            c in arb_table(Window::new(4, 4, 2)),
        ) {
            let w = Window::new(2, 2, 2);
            let inner = Window::new(4, 4, 2);
            let left = boxc_dims(&boxc_dims(&a, &b, inner).unwrap(), &c, w).unwrap();
            let right = boxc_dims(&a, &boxc_dims(&b, &c, inner).unwrap(), w).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
