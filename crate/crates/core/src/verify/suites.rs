//! Property suites behind the ordering theorem: polynomial identities,
//! submatrix and dominance facts, partition bookkeeping and the case
//! reductions. Random instances come from a seeded ChaCha stream, so every
//! run sees the same matrices.

use std::time::Instant;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    graph_family, left_quotient_root, verify_case_reduction, Radius, ReportItem, Thresholds, VerificationReport,
    VerifyError,
};
use crate::charpoly::{
    bridge_phi, char_poly_oracle, coalescence_phi, f_poly, f_values_at, inequ_difference,
    phi_path, Poly,
};
use crate::matrix::RationalMatrix;
use crate::number::{from_f64, rat, to_f64, Alpha, Rational, Surd};
use crate::partition::{
    case_two_slack, claim_a_holds, classify_consecutive, enumerate_partitions, ConsecutiveCase,
};
use crate::spectra::{radius_power, radius_symmetric, theta};
use crate::tolerances;
use crate::quotient::{pendant_path_partition, quotients};
use crate::wgraph::{attach_paths, bridge, coalesce, RootedGraph, WeightedGraph};

/// Sizes of every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub alphas: Vec<Alpha>,
    pub oracle_max_n: usize,
    pub split_max_n: usize,
    pub identity_max_a: usize,
    pub sign_max_a: usize,
    pub sign_grid_points: usize,
    pub random_graphs: usize,
    pub submatrix_instances: usize,
    pub dominance_instances: usize,
    pub partition_max_n: usize,
    pub chain_max_n: usize,
    pub similarity_max_n: usize,
    pub theta_max_n: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            alphas: Alpha::quarter_grid(),
            oracle_max_n: 12,
            split_max_n: 20,
            identity_max_a: 12,
            sign_max_a: 20,
            sign_grid_points: 50,
            random_graphs: 100,
            submatrix_instances: 50,
            dominance_instances: 50,
            partition_max_n: 12,
            chain_max_n: 9,
            similarity_max_n: 6,
            theta_max_n: 25,
            seed: 0x5eed_2024,
        }
    }
}

impl SuiteConfig {
    /// Caps every size parameter that counts vertices or parts at `max_n`.
    pub fn capped(mut self, max_n: usize) -> Self {
        for v in [
            &mut self.oracle_max_n,
            &mut self.split_max_n,
            &mut self.identity_max_a,
            &mut self.sign_max_a,
            &mut self.partition_max_n,
            &mut self.chain_max_n,
            &mut self.similarity_max_n,
            &mut self.theta_max_n,
        ] {
            *v = (*v).min(max_n);
        }
        self
    }
}

fn new_report(claim: &str) -> VerificationReport {
    VerificationReport::new(claim, &Thresholds::default())
}

/// Runs every suite in a fixed order.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<VerificationReport>, VerifyError> {
    Ok(vec![
        char_poly_suite(config)?,
        split_suite(config)?,
        inequ_identity_suite(config)?,
        inequ_sign_suite(config)?,
        bridge_coalescence_suite(config)?,
        submatrix_suite(config)?,
        dominance_suite(config)?,
        theta_suite(config)?,
        partition_suite(config)?,
        quotient_similarity_suite(config)?,
        case_reduction_suite(config)?,
    ])
}

/// `A_alpha(P_{n+1})` with an end vertex removed.
fn b_matrix(n: usize, alpha: &Alpha) -> Result<RationalMatrix, VerifyError> {
    let path = WeightedGraph::path(n + 1)?;
    Ok(path.a_alpha_matrix(alpha)?.delete_index(n))
}

/// `f_n` from the recurrence against the characteristic polynomial of `B_n`.
pub fn char_poly_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("f_n_vs_determinant").param("max_n", config.oracle_max_n);
    for alpha in &config.alphas {
        for n in 0..=config.oracle_max_n {
            let f = f_poly(n, alpha);
            let oracle = char_poly_oracle(&b_matrix(n, alpha)?)?;
            let ok = f == oracle && f.is_monic() && f.degree() == Some(n);
            report.push(ReportItem::check(format!("n={n} alpha={alpha}"), ok));
        }
    }
    Ok(report.finish(start.elapsed()))
}

/// Every split of the path gives the same polynomial, which is the
/// characteristic polynomial of `A_alpha(P_n)`.
pub fn split_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("path_split_independence").param("max_n", config.split_max_n);
    for alpha in &config.alphas {
        for n in 2..=config.split_max_n {
            let first = phi_path(1, n - 1, alpha)?;
            let mut ok = true;
            for a in 2..n {
                ok &= phi_path(a, n - a, alpha)? == first;
            }
            let mut item = ReportItem::check(format!("n={n} alpha={alpha}"), ok);
            if n <= config.oracle_max_n {
                let path = WeightedGraph::path(n)?;
                let oracle = char_poly_oracle(&path.a_alpha_matrix(alpha)?)?;
                if oracle != first {
                    item.verdict = super::Verdict::Fail;
                    item = item.note("differs from the determinant of A_alpha(P_n)");
                }
            }
            report.push(item);
        }
    }
    Ok(report.finish(start.elapsed()))
}

/// `f_a f_{b-1} - f_{a-1} f_b` against its closed form.
pub fn inequ_identity_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("telescoped_identity").param("max_a", config.identity_max_a);
    for alpha in &config.alphas {
        for a in 2..=config.identity_max_a {
            for b in 1..a {
                let ok = inequ_difference(a, b, alpha).is_ok();
                report.push(ReportItem::check(format!("a={a} b={b} alpha={alpha}"), ok));
            }
        }
    }
    Ok(report.finish(start.elapsed()))
}

/// `f_{a-1} f_b - f_a f_{b-1} > 0` at exact grid points in
/// `[theta_l + 1e-6, 3]`, `l = a - b`.
pub fn inequ_sign_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let max_a = config.sign_max_a;
    let points = config.sign_grid_points.max(2);
    let mut report = new_report("telescoped_sign")
        .param("max_a", max_a)
        .param("grid_points", points);
    let jobs: Vec<(Alpha, usize)> = config
        .alphas
        .iter()
        .flat_map(|alpha| (1..max_a).map(move |l| (alpha.clone(), l)))
        .collect();
    let items = jobs
        .par_iter()
        .map(|(alpha, l)| -> Result<ReportItem, VerifyError> {
            let l = *l;
            let lo = theta(l, alpha)? + 1e-6;
            let mut min_margin = f64::INFINITY;
            let mut ok = true;
            for j in 0..points {
                let x = from_f64(lo + (3.0 - lo) * j as f64 / (points - 1) as f64);
                let f = f_values_at(max_a, alpha, &x);
                for b in 1..=max_a - l {
                    let a = b + l;
                    let diff = &f[a - 1] * &f[b] - &f[a] * &f[b - 1];
                    ok &= diff > Rational::zero();
                    min_margin = min_margin.min(to_f64(&diff));
                }
            }
            Ok(ReportItem::check(format!("l={l} alpha={alpha}"), ok).with_margin(min_margin))
        })
        .collect::<Result<Vec<_>, _>>()?;
    items.into_iter().for_each(|i| report.push(i));
    Ok(report.finish(start.elapsed()))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=4), rng.gen_range(1..=3))
}

/// Random graph with rational weights, each edge present with probability
/// `density`, each loop with probability `loops`.
fn random_weighted_graph(rng: &mut ChaCha8Rng, order: usize, density: f64, loops: f64) -> WeightedGraph {
    let mut g = WeightedGraph::empty(order);
    for u in 0..order {
        for v in u..order {
            let p = if u == v { loops } else { density };
            if rng.gen_bool(p) {
                g.set_weight(u, v, Surd::rational(random_rational(rng)))
                    .expect("valid vertices and positive weight");
            }
        }
    }
    g
}

fn phi(g: &WeightedGraph) -> Result<Poly, VerifyError> {
    let m = g
        .adjacency_matrix()
        .to_rational()
        .expect("rational weights");
    Ok(char_poly_oracle(&m)?)
}

/// Bridge and coalescence formulas against determinants on random weighted
/// graphs of at most 6 vertices.
pub fn bridge_coalescence_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = new_report("bridge_and_coalescence")
        .param("instances", config.random_graphs)
        .param("seed", config.seed);
    for t in 0..config.random_graphs {
        let k1 = rng.gen_range(1..=4);
        let k2 = rng.gen_range(1..=6 - k1);
        let g = random_weighted_graph(&mut rng, k1, 0.5, 0.3);
        let h = random_weighted_graph(&mut rng, k2, 0.5, 0.3);
        let (u, v) = (rng.gen_range(0..k1), rng.gen_range(0..k2));
        let w = random_rational(&mut rng);

        let (pg, pgu) = (phi(&g)?, phi(&g.delete_vertex(u)?)?);
        let (ph, phv) = (phi(&h)?, phi(&h.delete_vertex(v)?)?);
        let joined = bridge(&g, u, &h, v, Surd::rational(w.clone()))?;
        let bridge_ok = bridge_phi(&pg, &pgu, &ph, &phv, &(&w * &w)) == phi(&joined)?;
        let merged = coalesce(&RootedGraph::new(g, u)?, &RootedGraph::new(h, v)?)?;
        let coalesce_ok = coalescence_phi(&pg, &pgu, &ph, &phv) == phi(&merged.graph)?;
        report.push(
            ReportItem::check(format!("instance {t} ({k1}+{k2} vertices)"), bridge_ok && coalesce_ok)
                .note(match (bridge_ok, coalesce_ok) {
                    (true, true) => "",
                    (false, true) => "bridge formula mismatch",
                    (true, false) => "coalescence formula mismatch",
                    (false, false) => "both formulas mismatch",
                }),
        );
    }
    Ok(report.finish(start.elapsed()))
}

/// Random connected weighted graph: a random spanning tree plus extra edges.
fn random_connected(rng: &mut ChaCha8Rng, order: usize) -> WeightedGraph {
    let mut g = random_weighted_graph(rng, order, 0.3, 0.4);
    let mut ids: Vec<usize> = (0..order).collect();
    ids.shuffle(rng);
    for i in 1..order {
        let parent = ids[rng.gen_range(0..i)];
        if g.weight(parent, ids[i]).is_none() {
            g.set_weight(parent, ids[i], Surd::rational(random_rational(rng)))
                .expect("valid edge");
        }
    }
    g
}

/// Deleting any vertex of an irreducible nonnegative symmetric matrix
/// strictly lowers its largest eigenvalue.
pub fn submatrix_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7);
    let mut report = new_report("principal_submatrix_drop")
        .param("instances", config.submatrix_instances)
        .param("seed", config.seed);
    for t in 0..config.submatrix_instances {
        let order = rng.gen_range(2..=8);
        let m = random_connected(&mut rng, order).adjacency_matrix().to_float();
        let full = Radius::of(&m)?;
        report.push(full.item(format!("instance {t} radius")));
        let mut min_drop = f64::INFINITY;
        for k in 0..order {
            let sub = radius_symmetric(&m.delete_index(k))?.value;
            min_drop = min_drop.min(full.value() - sub);
        }
        report.push(
            ReportItem::check(
                format!("instance {t} (order {order})"),
                min_drop > tolerances::SUBMATRIX_DROP,
            )
            .with_margin(min_drop),
        );
    }
    Ok(report.finish(start.elapsed()))
}

/// Random strongly connected nonnegative matrix with rational entries: a
/// cycle through every index plus random extra entries.
fn random_irreducible(rng: &mut ChaCha8Rng, order: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(order, order);
    let mut ids: Vec<usize> = (0..order).collect();
    ids.shuffle(rng);
    for i in 0..order {
        m[(ids[i], ids[(i + 1) % order])] = random_rational(rng);
    }
    for i in 0..order {
        for j in 0..order {
            if m[(i, j)].is_zero() && rng.gen_bool(0.35) {
                m[(i, j)] = random_rational(rng);
            }
        }
    }
    m
}

/// For `0 <= B <= A`, `B != A`, `A` irreducible: `phi(B, x) > phi(A, x)` at
/// every grid point of `[rho(A), rho(A) + 2]`.
pub fn dominance_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4);
    let mut report = new_report("polynomial_dominance")
        .param("instances", config.dominance_instances)
        .param("seed", config.seed);
    for t in 0..config.dominance_instances {
        let order = rng.gen_range(2..=6);
        let a = random_irreducible(&mut rng, order);
        let support: Vec<(usize, usize)> = (0..order)
            .flat_map(|i| (0..order).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[(i, j)].is_zero())
            .collect();
        let mut b = a.clone();
        let lowered = rng.gen_range(1..=support.len().min(3));
        for &(i, j) in support.choose_multiple(&mut rng, lowered) {
            // Either drop the entry or scale it by a factor in (0, 1).
            b[(i, j)] = if rng.gen_bool(0.5) {
                Rational::zero()
            } else {
                &a[(i, j)] * rat(rng.gen_range(1..=3), 4)
            };
        }
        let rho = radius_power(&a.to_float())?.value;
        let (phi_a, phi_b) = (char_poly_oracle(&a)?, char_poly_oracle(&b)?);
        let mut min_margin = f64::INFINITY;
        let mut ok = true;
        for j in 0..=40 {
            let x = from_f64(rho + 2.0 * j as f64 / 40.0);
            let diff = phi_b.eval(&x) - phi_a.eval(&x);
            ok &= diff > Rational::zero();
            min_margin = min_margin.min(to_f64(&diff));
        }
        report.push(
            ReportItem::check(format!("instance {t} (order {order})"), ok)
                .with_margin(min_margin)
                .with("rho_a", rho),
        );
    }
    Ok(report.finish(start.elapsed()))
}

/// `theta_n` rises with `n` and with `alpha`, and the radius of
/// `A_alpha(P_m)` lies strictly between `theta_{m-1}` and 2.
pub fn theta_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let max_n = config.theta_max_n;
    let mut report = new_report("theta").param("max_n", max_n);
    let fine: Vec<Alpha> = (0..8).map(|k| Alpha::ratio(k, 8)).collect();
    let table: Vec<Vec<f64>> = fine
        .iter()
        .map(|alpha| (1..=max_n).map(|n| theta(n, alpha)).collect())
        .collect::<Result<_, _>>()?;
    for (alpha, row) in fine.iter().zip(&table) {
        let gap = row.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        report.push(
            ReportItem::check(format!("increasing in n, alpha={alpha}"), gap > 0.0)
                .with_margin(gap),
        );
    }
    for n in 1..=max_n {
        let gap = table
            .windows(2)
            .map(|w| w[1][n - 1] - w[0][n - 1])
            .fold(f64::INFINITY, f64::min);
        report.push(ReportItem::check(format!("increasing in alpha, n={n}"), gap > 0.0).with_margin(gap));
    }
    for alpha in &config.alphas {
        for m in 2..=max_n.min(16) {
            let rho = Radius::of_graph(&WeightedGraph::path(m)?, alpha)?;
            let below = theta(m - 1, alpha)?;
            let margin = (rho.value() - below).min(2.0 - rho.value());
            report.push(rho.item(format!("radius P_{m} alpha={alpha}")));
            report.push(
                ReportItem::check(format!("theta_{} < rho(P_{m}) < 2, alpha={alpha}", m - 1), margin > 0.0)
                    .with_margin(margin),
            );
        }
    }
    Ok(report.finish(start.elapsed()))
}

/// Partitions counted by a generating-function recurrence.
fn partition_count(n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// Enumeration, consecutive-pair classification, the Case I bound on the
/// last part and the Case II slack.
pub fn partition_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("partition_order").param("max_n", config.partition_max_n);
    for n in 1..=config.partition_max_n {
        let ps = enumerate_partitions(n)?;
        let sorted = ps.windows(2).all(|w| w[0] < w[1]);
        report.push(
            ReportItem::check(format!("n={n} enumeration"), sorted && ps.len() == partition_count(n))
                .with("count", ps.len() as f64),
        );
        let (mut unclassified, mut claim_failures, mut min_slack) = (0, 0, i64::MAX);
        for w in ps.windows(2) {
            match classify_consecutive(&w[0], &w[1])? {
                ConsecutiveCase::CaseI { pivot } => {
                    if !claim_a_holds(&w[0], &w[1], pivot)? {
                        claim_failures += 1;
                    }
                }
                ConsecutiveCase::CaseII => {
                    min_slack = min_slack.min(case_two_slack(n, w[0].len()));
                }
                ConsecutiveCase::NotConsecutive => unclassified += 1,
            }
        }
        let skipped = ps
            .windows(3)
            .filter(|w| classify_consecutive(&w[0], &w[2]) != Ok(ConsecutiveCase::NotConsecutive))
            .count();
        report.push(ReportItem::check(format!("n={n} consecutive pairs classified"), unclassified == 0));
        report.push(ReportItem::check(format!("n={n} claim A"), claim_failures == 0));
        if min_slack != i64::MAX {
            report.push(
                ReportItem::check(format!("n={n} Case II slack"), min_slack >= 0)
                    .with_margin(min_slack as f64),
            );
        }
        report.push(ReportItem::check(format!("n={n} non-adjacent pairs rejected"), skipped == 0));
    }
    Ok(report.finish(start.elapsed()))
}

/// Left and symmetric quotients of every pendant graph with the
/// `[a]*s + [b]` shape share their largest root.
pub fn quotient_similarity_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("quotient_similarity").param("max_n", config.similarity_max_n);
    let family = graph_family();
    let mut jobs = Vec::new();
    for (name, g) in &family {
        for alpha in &config.alphas {
            for n in 1..=config.similarity_max_n {
                for p in enumerate_partitions(n)? {
                    if let Some(shape) = p.pendant_shape() {
                        jobs.push((*name, g, alpha, p, shape));
                    }
                }
            }
        }
    }
    let items = jobs
        .par_iter()
        .map(|(name, g, alpha, p, shape)| -> Result<ReportItem, VerifyError> {
            let h = attach_paths(g, p.parts())?;
            let cells = pendant_path_partition(&h, *shape)?;
            let pair = quotients(&h.graph().a_alpha_matrix(alpha)?, &cells)?;
            let (radius, root) = left_quotient_root(&pair)?;
            let label = format!("{name} alpha={alpha} {p}");
            Ok(match root {
                Some(r) => ReportItem::agreement(label, radius, r, tolerances::SIMILAR_QUOTIENTS),
                None => ReportItem::check(label, false).note("no root of the left quotient nearby"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    items.into_iter().for_each(|i| report.push(i));
    Ok(report.finish(start.elapsed()))
}

/// The comparison chain of every consecutive pair for every graph of the
/// family and every `alpha`.
pub fn case_reduction_suite(config: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = new_report("case_reduction_chains").param("max_n", config.chain_max_n);
    let family = graph_family();
    let mut jobs = Vec::new();
    for (name, g) in &family {
        for alpha in &config.alphas {
            for n in 2..=config.chain_max_n {
                let ps = enumerate_partitions(n)?;
                for w in ps.windows(2) {
                    jobs.push((*name, g, alpha, w[0].clone(), w[1].clone()));
                }
            }
        }
    }
    let items = jobs
        .par_iter()
        .map(|(name, g, alpha, a, b)| -> Result<ReportItem, VerifyError> {
            let chain = verify_case_reduction(a, b, g, alpha)?;
            let label = format!("{name} alpha={alpha} {a} -> {b}");
            let margin = chain.margins.min_strict_gap;
            let mut item = ReportItem::check(label, chain.passed()).note(chain.failures().join("; "));
            if let Some(m) = margin {
                item = item.with_margin(m);
            }
            Ok(item)
        })
        .collect::<Result<Vec<_>, _>>()?;
    items.into_iter().for_each(|i| report.push(i));
    Ok(report.finish(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            alphas: vec![Alpha::zero(), Alpha::ratio(1, 3)],
            random_graphs: 10,
            submatrix_instances: 5,
            dominance_instances: 5,
            ..SuiteConfig::default()
        }
        .capped(6)
    }

    #[test]
    fn small_suites_pass() {
        for report in run_all(&small()).unwrap() {
            assert!(report.passed(), "{}: {:?}", report.claim, report.failures());
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(partition_count).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let c = small();
        assert_eq!(
            bridge_coalescence_suite(&c).unwrap().items,
            bridge_coalescence_suite(&c).unwrap().items
        );
    }

    #[test]
    fn capping() {
        let c = SuiteConfig::default().capped(5);
        assert_eq!(c.split_max_n, 5);
        assert_eq!(c.random_graphs, 100);
    }
}
