use std::cmp::Ordering;

use num_traits::Zero;
use proptest::prelude::*;
use starlex::charpoly::f_poly;
use starlex::matrix::FloatMatrix;
use starlex::number::{parse_rational, rat, Alpha};
use starlex::partition::{enumerate_partitions, shortlex_cmp, successor_same_length};
use starlex::spectra::{radius_power, radius_symmetric, theta};
use starlex::wgraph::{attach_paths, brute_force_isomorphic, coalesce};
use starlex::{Partition, RootedGraph, Surd, WeightedGraph};

/// p(n) from Euler's pentagonal number recurrence.
fn pentagonal_counts(max: usize) -> Vec<u64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for n in 1..=max as i64 {
        let mut total = 0;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[(n - g1) as usize];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                total += sign * p[(n - g2) as usize];
            }
        }
        p[n as usize] = total;
    }
    p.into_iter().map(|v| v as u64).collect()
}

/// All nondecreasing compositions of `n`, by plain recursion.
fn brute_partitions(n: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in min..=n {
        prefix.push(part);
        brute_partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

fn shortlex_reference(a: &[usize], b: &[usize]) -> Ordering {
    b.len().cmp(&a.len()).reverse().then_with(|| a.cmp(b))
}

fn alpha_strategy() -> impl Strategy<Value = Alpha> {
    (0i64..16).prop_map(|p| Alpha::ratio(p, 16))
}

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..6, 1..6).prop_map(|v| Partition::from_unsorted(v).unwrap())
}

/// Connected simple graph: a random tree plus extra edges.
fn graph_strategy() -> impl Strategy<Value = RootedGraph> {
    (1usize..7)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<prop::sample::Index>(), n.saturating_sub(1)),
                prop::collection::vec((0..n, 0..n), 0..n),
                0..n,
            )
        })
        .prop_map(|(n, parents, extra, root)| {
            let mut g = WeightedGraph::empty(n);
            for (v, parent) in parents.iter().enumerate() {
                g.add_unit_edge(v + 1, parent.index(v + 1)).unwrap();
            }
            for (u, v) in extra {
                if u != v && g.weight(u, v).is_none() {
                    g.add_unit_edge(u, v).unwrap();
                }
            }
            RootedGraph::new(g, root).unwrap()
        })
}

#[test]
fn partition_counts_match_pentagonal_recurrence() {
    let counts = pentagonal_counts(30);
    for (n, &count) in counts.iter().enumerate().skip(1) {
        assert_eq!(enumerate_partitions(n).unwrap().len() as u64, count, "n = {n}");
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 1..=12 {
        let mut brute = Vec::new();
        brute_partitions(n, 1, &mut Vec::new(), &mut brute);
        brute.sort_by(|a, b| shortlex_reference(a, b));
        let ours: Vec<Vec<usize>> = enumerate_partitions(n)
            .unwrap()
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(ours, brute, "n = {n}");
    }
}

#[test]
fn f_polynomials_are_monic() {
    for alpha in Alpha::quarter_grid() {
        for n in 0..=40 {
            let f = f_poly(n, &alpha);
            assert_eq!(f.degree(), Some(n));
            assert_eq!(f.coeffs().last(), Some(&rat(1, 1)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shortlex_is_a_total_order(a in partition_strategy(), b in partition_strategy(), c in partition_strategy()) {
        prop_assert_eq!(shortlex_cmp(&a, &b), shortlex_reference(a.parts(), b.parts()));
        prop_assert_eq!(shortlex_cmp(&a, &b), shortlex_cmp(&b, &a).reverse());
        prop_assert_eq!(shortlex_cmp(&a, &b) == Ordering::Equal, a == b);
        if shortlex_cmp(&a, &b) != Ordering::Greater && shortlex_cmp(&b, &c) != Ordering::Greater {
            prop_assert_ne!(shortlex_cmp(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn successor_is_the_next_partition_of_that_length(p in partition_strategy()) {
        let same_length: Vec<Partition> = enumerate_partitions(p.total())
            .unwrap()
            .into_iter()
            .filter(|q| q.len() == p.len())
            .collect();
        let at = same_length.iter().position(|q| *q == p).unwrap();
        prop_assert_eq!(successor_same_length(&p), same_length.get(at + 1).cloned());
    }

    #[test]
    fn attached_paths_add_vertices_and_edges(
        g in graph_strategy(),
        lengths in prop::collection::vec(1usize..5, 0..5),
    ) {
        let h = attach_paths(&g, &lengths).unwrap();
        let added: usize = lengths.iter().sum();
        prop_assert_eq!(h.graph().order(), g.order() + added);
        prop_assert_eq!(h.graph().edge_count(), g.graph.edge_count() + added);
        prop_assert_eq!(h.graph().degree(h.root()), g.graph.degree(g.root) + lengths.len());
        prop_assert!(h.graph().is_connected());
    }

    #[test]
    fn coalescence_commutes_up_to_isomorphism(g in graph_strategy(), h in graph_strategy()) {
        prop_assume!(g.order() + h.order() <= 8);
        let gh = coalesce(&g, &h).unwrap();
        let hg = coalesce(&h, &g).unwrap();
        prop_assert_eq!(gh.order(), g.order() + h.order() - 1);
        prop_assert!(brute_force_isomorphic(&gh.graph, &hg.graph));
    }

    #[test]
    fn a_alpha_diagonal_and_row_sums(g in graph_strategy(), alpha in alpha_strategy()) {
        let m = g.graph.a_alpha_matrix(&alpha).unwrap();
        prop_assert!(m.is_symmetric());
        for i in 0..g.order() {
            let degree = rat(g.graph.degree(i) as i64, 1);
            prop_assert_eq!(&m[(i, i)], &(alpha.value() * &degree));
            let sum = m.row(i).iter().fold(rat(0, 1), |acc, x| acc + x);
            prop_assert_eq!(sum, degree);
        }
    }

    #[test]
    fn theta_increases_with_n_and_alpha(n in 1usize..25, p in 0i64..15) {
        let a = Alpha::ratio(p, 16);
        let b = Alpha::ratio(p + 1, 16);
        let t = theta(n, &a).unwrap();
        prop_assert!(theta(n + 1, &a).unwrap() > t);
        prop_assert!(theta(n, &b).unwrap() > t);
        prop_assert!(t < 2.0);
    }

    #[test]
    fn path_radius_between_theta_and_two(m in 2usize..15, alpha in alpha_strategy()) {
        let a = WeightedGraph::path(m).unwrap().a_alpha_matrix(&alpha).unwrap().to_float();
        let rho = radius_symmetric(&a).unwrap().value;
        prop_assert!(rho > theta(m - 1, &alpha).unwrap());
        prop_assert!(rho < 2.0);
    }

    #[test]
    fn solvers_agree_on_nonnegative_symmetric(
        n in 1usize..9,
        entries in prop::collection::vec(0.0f64..3.0, 81),
        shift in 0.5f64..2.0,
    ) {
        // Positive entries everywhere keep the matrix irreducible.
        let m = FloatMatrix::from_fn(n, n, |i, j| {
            let (u, v) = (i.min(j), i.max(j));
            entries[u * 9 + v] + if i == j { shift } else { 0.1 }
        });
        let jacobi = radius_symmetric(&m).unwrap().value;
        let power = radius_power(&m).unwrap().value;
        prop_assert!((jacobi - power).abs() <= 1e-9 * jacobi.max(1.0));
    }

    #[test]
    fn decimals_parse_exactly(whole in 0u32..1000, frac in 0u32..10_000) {
        let text = format!("{whole}.{frac:04}");
        let expected = rat(whole as i64 * 10_000 + frac as i64, 10_000);
        prop_assert_eq!(parse_rational(&text).unwrap(), expected);
    }

    #[test]
    fn surds_roundtrip_through_text(p in -50i64..50, q in 1i64..20, radicand in 1u64..30) {
        let s = Surd::new(rat(p, q), radicand);
        let back: Surd = s.to_string().parse().unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(s.squared(), rat(p, q) * rat(p, q) * rat(radicand as i64, 1));
        if p.is_zero() {
            prop_assert!(s.is_zero());
        }
    }
}
