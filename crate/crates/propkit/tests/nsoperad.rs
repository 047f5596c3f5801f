use num_traits::Zero;
use proptest::prelude::*;

use propkit::nsoperad::{Generator, NsOperad, PlanarTree, Presentation, Relation};
use propkit::rational::{frac, Q};

/// Generators with the given arities and random relations in each
/// quadratic arity, drawn as small integer combinations of weight-2 trees.
fn presentation(arities: &[usize], coeffs: &[i64], rows: usize) -> Presentation {
    let gens: Vec<Generator> = arities
        .iter()
        .enumerate()
        .map(|(i, &a)| Generator::new(format!("g{i}"), a))
        .collect();
    let free = Presentation::new("free", gens.clone(), vec![]).unwrap();
    let mut relations: Vec<Relation> = Vec::new();
    let mut c = coeffs.iter().cycle();
    for n in free.quadratic_arities() {
        let trees = free.trees(n, 2);
        for _ in 0..rows {
            let r: Relation = trees.iter().map(|t| (t.clone(), frac(*c.next().unwrap(), 1))).collect();
            relations.push(r);
        }
    }
    Presentation::new("random", gens, relations).unwrap()
}

fn arities() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![Just(vec![2]), Just(vec![2, 2]), Just(vec![3]), Just(vec![2, 3]),]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_dims_are_quotient_dims_of_the_orthogonal(
        ar in arities(),
        coeffs in proptest::collection::vec(-2i64..=2, 1..40),
        rows in 0usize..3,
    ) {
        let pres = presentation(&ar, &coeffs, rows);
        let mut e = NsOperad::new(pres);
        let dual = e.quadratic_dual_presentation().unwrap();
        let mut de = NsOperad::new(dual);
        for n in 2..=5 {
            for d in 0..n {
                prop_assert_eq!(e.koszul_dual_dims(n, d), de.quotient_dims(n, d), "arity {} weight {}", n, d);
            }
        }
    }

    #[test]
    fn orthogonal_is_an_involution(
        ar in arities(),
        coeffs in proptest::collection::vec(-3i64..=3, 1..40),
        rows in 0usize..4,
    ) {
        let pres = presentation(&ar, &coeffs, rows);
        let mut e = NsOperad::new(pres.clone());
        let dual = e.quadratic_dual_presentation().unwrap();
        let back = NsOperad::new(dual.clone()).quadratic_dual_presentation().unwrap();
        for n in pres.quadratic_arities() {
            prop_assert_eq!(pres.relation_space(n), back.relation_space(n));
            prop_assert_eq!(pres.relation_space(n).dim() + dual.relation_space(n).dim(), e.free_dims(n, 2));
        }
        prop_assert_eq!(back.generators(), pres.generators());
    }

    #[test]
    fn bar_square_vanishes(
        ar in arities(),
        coeffs in proptest::collection::vec(-2i64..=2, 1..40),
        rows in 0usize..3,
    ) {
        let mut e = NsOperad::new(presentation(&ar, &coeffs, rows));
        for n in 3..=5 {
            for d in 2..n {
                for s in 2..=d.min(3) {
                    prop_assert!(e.check_bar_square(n, d, s).is_ok());
                }
            }
        }
    }
}

#[test]
fn free_dims_satisfy_root_recursion() {
    // t(n, d) = Σ over root arity k >= 2 of ordered k-forests with n leaves, d - 1 vertices.
    let mut e = NsOperad::new(Presentation::builtin("free8").unwrap());
    let max = 8;
    let t = |e: &mut NsOperad, n: usize, d: usize| e.free_dims(n, d) as u64;
    for n in 2..=max {
        for d in 1..n {
            let mut forests = vec![vec![0u64; d]; n + 1];
            forests[0][0] = 1;
            let mut total = 0;
            for _k in 1..=n {
                let mut next = vec![vec![0u64; d]; n + 1];
                for a in 0..=n {
                    for b in 0..d {
                        if forests[a][b] == 0 {
                            continue;
                        }
                        for a2 in 1..=n - a {
                            for b2 in 0..d - b {
                                if a2 < n {
                                    next[a + a2][b + b2] += forests[a][b] * t(&mut e, a2, b2);
                                }
                            }
                        }
                    }
                }
                forests = next;
                total += forests[n][d - 1];
            }
            assert_eq!(t(&mut e, n, d), total, "({n},{d})");
        }
    }
}

#[test]
fn enumeration_has_no_duplicates() {
    let pres = Presentation::builtin("free6").unwrap();
    let names = pres.names();
    let lookup = |s: &str| pres.generator_index(s).map(|g| (g, pres.generators()[g].arity));
    for n in 1..=6 {
        for d in 0..n {
            let trees = pres.trees(n, d);
            let set: std::collections::BTreeSet<&PlanarTree> = trees.iter().collect();
            assert_eq!(set.len(), trees.len());
            for t in &trees {
                assert_eq!(&PlanarTree::from_json(&t.to_json(&names), &lookup).unwrap(), t);
            }
        }
    }
}

#[test]
fn total_cells_of_k3() {
    let mut e = NsOperad::new(Presentation::builtin("free5").unwrap());
    let total: usize = (0..5).map(|d| e.free_dims(5, d)).sum();
    assert_eq!(total, 45);
}

#[test]
fn degenerate_relations() {
    let mu = Generator::new("mu", 2);
    let free = Presentation::new("f", vec![mu.clone()], vec![]).unwrap();
    let all: Vec<Relation> = free
        .trees(3, 2)
        .into_iter()
        .map(|t| vec![(t, Q::from_integer(1.into()))])
        .collect();
    let pres = Presentation::new("full", vec![mu], all).unwrap();
    let mut e = NsOperad::new(pres);
    assert!(e.edge_contraction_matrix(3, 2).is_zero());
    for n in 3..=5 {
        assert_eq!(e.quotient_dims(n, n - 1), 0);
    }
    let report = e.is_koszul_upto(4).unwrap();
    assert_eq!(report.entries.len(), 6);
    assert!(report.entries.iter().all(|x| x.dims.len() == x.betti.len()));
    let mut f = NsOperad::new(free);
    let m = f.edge_contraction_matrix(3, 2);
    assert!(!m.is_zero());
    assert!(m.column(0).iter().any(|x| !x.is_zero()));
}

#[test]
fn complex_terms_match_symmetric_products() {
    use propkit::dims::{boxc_dims, Catalog, Window};
    use propkit::rational::factorial;

    let cat = Catalog::builtin();
    for (name, dual) in [("as", "as"), ("dend", "dias"), ("dias", "dend")] {
        let mut e = NsOperad::new(Presentation::builtin(name).unwrap());
        let (p, pd) = (cat.table(name, Window::new(6, 6, 5)).unwrap(), cat.table(dual, Window::new(6, 6, 5)).unwrap());
        for n in 2..=5 {
            for d in 1..n {
                let kc = e.koszul_complex(n, d).unwrap();
                let w = Window::new(1, n, d);
                for (k, &dim) in kc.complex.dims().iter().enumerate() {
                    let prod = boxc_dims(&pd.weight_part(k), &p, w).unwrap();
                    let want = prod.get(1, n, d).unwrap();
                    assert_eq!(Q::from_integer(factorial(n) * dim), want, "{name} ({n},{d}) k={k}");
                }
                assert_eq!(kc.complex.euler_characteristic(), 0);
            }
        }
    }
}
