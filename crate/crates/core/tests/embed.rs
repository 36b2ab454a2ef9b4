use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofactor::embed::chains::{build_chain, find_traversing_triangle, rebalance_chains, Chain, ChainError, RebalanceOptions};
use twofactor::embed::{
    embed_long_cycles, embed_short_cycles, embed_two_factor, pad_spec, plan_segment_budget, verify_embedding, BudgetError,
    CycleFamilySpec, EmbedError, EmbedOptions, Embedding, ExactTriangles, GreedyTriangles, Trace, VerifyFailure,
};
use twofactor::graph::{sample_gnp, GraphBuilder};
use twofactor::{Graph, JumbledParams, Mode, VertexSet};

fn params(p: f64) -> JumbledParams {
    JumbledParams::new(p, 0.0, 0.0, 0.9)
}

fn spec(lengths: Vec<usize>) -> CycleFamilySpec {
    CycleFamilySpec::new(lengths).unwrap()
}

/// Independent recount: cycle `k` has `lengths[k]` distinct vertices of `g`,
/// consecutive ones adjacent, no vertex used twice.
fn assert_embedding(g: &Graph, lengths: &[usize], emb: &Embedding) {
    assert_eq!(emb.cycles.len(), lengths.len());
    let mut seen = vec![false; g.n()];
    for (c, &l) in emb.cycles.iter().zip(lengths) {
        assert_eq!(c.len(), l);
        for (i, &v) in c.iter().enumerate() {
            assert!(!seen[v], "vertex {v} used twice");
            seen[v] = true;
            assert!(g.has_edge(v, c[(i + 1) % l]));
        }
    }
}

/// Brute-force triangle-factor existence on a small vertex list.
fn has_triangle_factor(g: &Graph, vs: &[usize]) -> bool {
    if vs.is_empty() {
        return true;
    }
    if !vs.len().is_multiple_of(3) {
        return false;
    }
    let a = vs[0];
    for i in 1..vs.len() {
        for j in i + 1..vs.len() {
            let (b, c) = (vs[i], vs[j]);
            if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                let rest: Vec<usize> = vs.iter().copied().filter(|&v| v != a && v != b && v != c).collect();
                if has_triangle_factor(g, &rest) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn c4_factor_on_complete_graph() {
    let n = 40;
    let g = Graph::complete(n);
    let s = spec(vec![4; n / 4]);
    let emb = embed_short_cycles(&g, &VertexSet::full(n), &s, &params(1.0), &EmbedOptions::practical(), &mut Trace::default()).unwrap();
    assert_embedding(&g, s.lengths(), &emb);
    assert!(verify_embedding(&g, &s, &emb).passed());
}

#[test]
fn hamilton_cycle_on_complete_graph() {
    let n = 4000;
    let g = Graph::complete(n);
    let s = spec(vec![n]);
    let emb = embed_long_cycles(&g, &VertexSet::full(n), &s, &params(1.0), &EmbedOptions::practical(), &mut Trace::default()).unwrap();
    assert_embedding(&g, &[n], &emb);
}

#[test]
fn two_halves_on_complete_graph() {
    let n = 4000;
    let g = Graph::complete(n);
    let s = spec(vec![n / 2, n / 2]);
    let emb = embed_long_cycles(&g, &VertexSet::full(n), &s, &params(1.0), &EmbedOptions::practical(), &mut Trace::default()).unwrap();
    assert_embedding(&g, s.lengths(), &emb);
}

#[test]
fn all_triangles_on_complete_graph() {
    for (n, provider) in [(12, &ExactTriangles as &dyn twofactor::embed::TriangleProvider), (300, &GreedyTriangles::default())] {
        let g = Graph::complete(n);
        let s = spec(vec![3; n / 3]);
        let emb = embed_two_factor(&g, &s, &params(1.0), &EmbedOptions::practical(), Some(provider), &mut Trace::default()).unwrap();
        assert_embedding(&g, s.lengths(), &emb);
    }
}

struct Panicking;

impl twofactor::embed::TriangleProvider for Panicking {
    fn name(&self) -> &str {
        "panicking"
    }

    fn triangle_factor(&self, _: &Graph, _: &VertexSet) -> Result<Vec<[usize; 3]>, EmbedError> {
        panic!("provider called on a triangle-free spec")
    }
}

#[test]
fn triangle_free_spec_never_calls_provider() {
    let n = 60;
    let g = Graph::complete(n);
    let s = spec(vec![4; n / 4]);
    let emb = embed_two_factor(&g, &s, &params(1.0), &EmbedOptions::practical(), Some(&Panicking), &mut Trace::default()).unwrap();
    assert_embedding(&g, s.lengths(), &emb);
}

#[test]
fn spec_above_n_is_infeasible() {
    let g = Graph::complete(20);
    let s = spec(vec![4; 6]);
    for res in [
        embed_short_cycles(&g, &VertexSet::full(20), &s, &params(1.0), &EmbedOptions::practical(), &mut Trace::default()),
        embed_two_factor(&g, &s, &params(1.0), &EmbedOptions::practical(), None, &mut Trace::default()),
    ] {
        assert!(matches!(res, Err(EmbedError::Infeasible(_))));
    }
    assert!(CycleFamilySpec::new(vec![4, 2]).is_err());
}

#[test]
fn budget_examples() {
    let b = plan_segment_budget(&[100], 5, 3, 4).unwrap();
    assert_eq!(b.rows, vec![[5, 3, 4]]);
    let q = b.rows[0];
    assert!(6 * q[0] + 3 * q[1] + 3 * q[2] <= 100 - 10);
    let b = plan_segment_budget(&[40, 50], 0, 0, 0).unwrap();
    assert_eq!(b.rows, vec![[0; 3]; 2]);
    assert!(matches!(plan_segment_budget(&[16, 16], 3, 0, 0), Err(BudgetError::Segments { .. })));
}

/// Exact integer feasibility by dynamic programming over rows: reachable
/// `(q1, q2 + q3)` column totals.
fn budget_feasible(lengths: &[usize], r: usize, v0: usize, mp: usize) -> bool {
    let singles = v0 + mp;
    let mut reach = vec![vec![false; singles + 1]; r + 1];
    reach[0][0] = true;
    for &l in lengths {
        let Some(room) = l.checked_sub(10) else { return false };
        let mut next = vec![vec![false; singles + 1]; r + 1];
        for a in 0..=r {
            for b in 0..=singles {
                if !reach[a][b] {
                    continue;
                }
                for q1 in 0..=(room / 6).min(r - a) {
                    for q23 in 0..=((room - 6 * q1) / 3).min(singles - b) {
                        next[a + q1][b + q23] = true;
                    }
                }
            }
        }
        reach = next;
    }
    reach[r][singles]
}

#[test]
fn budget_fuzz_keeps_every_constraint_and_the_splice_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let t = rng.gen_range(1..=8);
        let lengths: Vec<usize> = (0..t).map(|_| rng.gen_range(13..=400)).collect();
        // a random witness fixes feasible column sums
        let (mut r, mut v0, mut mp) = (0, 0, 0);
        for &l in &lengths {
            let mut room = (l - 10) / 3;
            let q1 = rng.gen_range(0..=room / 2);
            room -= 2 * q1;
            let q2 = rng.gen_range(0..=room);
            let q3 = rng.gen_range(0..=room - q2);
            r += q1;
            v0 += q2;
            mp += q3;
        }
        let b = plan_segment_budget(&lengths, r, v0, mp).unwrap();
        assert_eq!(b.rows.len(), t);
        let sums = b.rows.iter().fold([0; 3], |s, q| [s[0] + q[0], s[1] + q[1], s[2] + q[2]]);
        assert_eq!(sums, [r, v0, mp]);
        for (q, &l) in b.rows.iter().zip(&lengths) {
            assert!(6 * q[0] + 3 * q[1] + 3 * q[2] <= l - 10);
            let total = (6 * q[0] + 3 * q[1] + 3) + (l - 6 * q[0] - 3 * q[1] - 3 * q[2] - 9) + 3 * q[2] + 6;
            assert_eq!(total, l);
        }
    }
}

proptest! {
    #[test]
    fn budget_decision_matches_exhaustive_search(
        lengths in proptest::collection::vec(10usize..40, 1..4),
        r in 0usize..6,
        v0 in 0usize..6,
        mp in 0usize..6,
    ) {
        let ok = plan_segment_budget(&lengths, r, v0, mp).is_ok();
        prop_assert_eq!(ok, budget_feasible(&lengths, r, v0, mp));
    }
}

fn triple_loop(g: &Graph, a: &Chain, b: &Chain, c: &Chain) -> Option<[usize; 3]> {
    let sorted = |d: &Chain| {
        let mut v = d.removable().to_vec();
        v.sort_unstable();
        v
    };
    for &x in &sorted(a) {
        for &y in &sorted(b) {
            for &z in &sorted(c) {
                if g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

fn three_chains(g: &Graph, len: usize) -> [Chain; 3] {
    let mut forbidden = VertexSet::empty(g.n());
    let mut out = Vec::new();
    for _ in 0..3 {
        let c = build_chain(g, len, &forbidden, 100_000).unwrap();
        for v in c.vertices() {
            forbidden.insert(v);
        }
        out.push(c);
    }
    out.try_into().unwrap()
}

#[test]
fn traversing_triangle_matches_triple_loop() {
    for seed in 0..100 {
        let g = sample_gnp(80, 0.35, seed);
        let [a, b, c] = three_chains(&g, 1 + seed as usize % 4);
        let got = find_traversing_triangle(&g, &a, &b, &c).ok();
        assert_eq!(got, triple_loop(&g, &a, &b, &c), "seed {seed}");
    }
}

#[test]
fn traversing_triangle_in_complete_graph_is_lexicographic() {
    let g = Graph::complete(30);
    let [a, b, c] = three_chains(&g, 2);
    let got = find_traversing_triangle(&g, &a, &b, &c).unwrap();
    let first = |d: &Chain| *d.removable().iter().min().unwrap();
    assert_eq!(got, [first(&a), first(&b), first(&c)]);
}

#[test]
fn non_adjacent_chains_have_no_traversing_triangle() {
    let chains: Vec<Chain> = (0..3)
        .map(|k| {
            let o = 7 * k;
            Chain::from_parts(vec![o, o + 3, o + 6], vec![[o + 1, o + 2], [o + 4, o + 5]]).unwrap()
        })
        .collect();
    let mut b = GraphBuilder::new(21);
    for c in &chains {
        for (u, v) in c.edges() {
            b.add_edge(u.min(v), u.max(v)).unwrap();
        }
    }
    let g = b.build();
    let err = find_traversing_triangle(&g, &chains[0], &chains[1], &chains[2]).unwrap_err();
    assert!(matches!(err, ChainError::NotFound { .. }));
}

#[test]
fn traversing_triangle_completes_the_union() {
    let g = sample_gnp(60, 0.5, 3);
    let [a, b, c] = three_chains(&g, 2);
    let tri = find_traversing_triangle(&g, &a, &b, &c).unwrap();
    let mut union: Vec<usize> = [&a, &b, &c].iter().flat_map(|d| d.vertices()).collect();
    union.sort_unstable();
    assert!(has_triangle_factor(&g, &union));
    let mut factor: Vec<[usize; 3]> = vec![tri];
    for (d, v) in [&a, &b, &c].into_iter().zip(tri) {
        factor.extend(d.factor_without(d.removable_index(v).unwrap()));
    }
    let mut covered: Vec<usize> = factor.iter().flatten().copied().collect();
    covered.sort_unstable();
    assert_eq!(covered, union);
    for t in &factor {
        assert!(g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2]));
    }
}

#[test]
fn single_copy_on_k4() {
    let g = Graph::complete(4);
    let c = build_chain(&g, 1, &VertexSet::empty(4), 1000).unwrap();
    assert_eq!(c.removable().len(), 2);
    for &r in c.removable() {
        let rest: Vec<usize> = c.vertices().into_iter().filter(|&v| v != r).collect();
        assert!(has_triangle_factor(&g, &rest));
    }
    assert!(matches!(build_chain(&g, 0, &VertexSet::empty(4), 1000), Err(ChainError::Invalid(_))));
}

#[test]
fn four_chain_in_random_graph_is_brute_verified() {
    let g = sample_gnp(2000, 0.3, 12);
    let c = build_chain(&g, 4, &VertexSet::empty(2000), 100_000).unwrap();
    c.validate(&g).unwrap();
    assert_eq!(c.vertices().len(), 13);
    assert_eq!(c.removable().len(), 5);
    for &r in c.removable() {
        let rest: Vec<usize> = c.vertices().into_iter().filter(|&v| v != r).collect();
        assert!(has_triangle_factor(&g, &rest));
    }
}

#[test]
fn rebalance_micro_run_covers_exactly() {
    let n = 500;
    let g = sample_gnp(n, 0.5, 21);
    let mut forbidden = VertexSet::empty(n);
    let mut chains = Vec::new();
    for _ in 0..8 {
        let c = build_chain(&g, 2, &forbidden, 100_000).unwrap();
        for v in c.vertices() {
            forbidden.insert(v);
        }
        chains.push(c);
    }
    let w = VertexSet::full(n).difference(&forbidden);
    let opts = RebalanceOptions {
        mode: Mode::Practical,
        ..Default::default()
    };
    let rb = rebalance_chains(&g, &chains, &w, &params(0.5), &opts).unwrap();
    assert_eq!(rb.half.len(), 16);
    let empty = rb.complete(&g, &[]).unwrap();
    assert!(empty.l_prime.is_empty() && empty.triangles.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let l: Vec<usize> = (0..16).filter(|_| rng.gen_bool(0.5)).collect();
        let done = rb.complete(&g, &l).unwrap();
        let mut want: Vec<usize> = l.iter().flat_map(|&i| rb.half[i].vertices()).collect();
        want.extend(done.l_prime.iter().flat_map(|&i| rb.long[i].vertices()));
        want.sort_unstable();
        let mut got: Vec<usize> = done.triangles.iter().flatten().copied().collect();
        got.sort_unstable();
        assert_eq!(got, want);
        for t in &done.triangles {
            assert!(g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2]));
        }
    }
}

#[test]
fn verification_names_the_failure() {
    let n = 8;
    let g = Graph::complete(n);
    let s = spec(vec![4, 4]);
    let emb = Embedding {
        cycles: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
    };
    assert!(verify_embedding(&g, &s, &emb).passed());
    let mut b = GraphBuilder::new(n);
    for (u, v) in g.edges().filter(|&e| e != (5, 6)) {
        b.add_edge(u, v).unwrap();
    }
    let cut = b.build();
    let report = verify_embedding(&cut, &s, &emb);
    assert!(matches!(report.failure, Some(VerifyFailure::MissingEdge { u: 5, v: 6, .. })));
    assert!(report.to_string().contains("5-6"));
    let dup = Embedding {
        cycles: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 2]],
    };
    assert!(matches!(
        verify_embedding(&g, &s, &dup).failure,
        Some(VerifyFailure::DuplicateVertex { vertex: 2, .. })
    ));
}

fn mixed_run(n: usize, p: f64, seed: u64, lengths: Vec<usize>, short_max: usize) -> (Embedding, Vec<(String, String)>, CycleFamilySpec) {
    let g = sample_gnp(n, p, seed);
    let s = pad_spec(&spec(lengths), n).unwrap();
    let mut opts = EmbedOptions::practical();
    opts.constants.short_max = short_max;
    let mut trace = Trace::default();
    let emb = embed_two_factor(&g, &s, &params(p), &opts, Some(&GreedyTriangles::default()), &mut trace).unwrap();
    assert_embedding(&g, s.lengths(), &emb);
    assert!(verify_embedding(&g, &s, &emb).passed());
    (emb, trace.counts().to_vec(), s)
}

#[test]
fn practical_mixed_short_spec() {
    let mut lengths = Vec::new();
    for l in 5..=12 {
        lengths.extend(std::iter::repeat_n(l, 20));
    }
    mixed_run(4000, 0.3, 1, lengths, 12);
}

#[test]
fn practical_three_long_cycles() {
    mixed_run(10000, 0.3, 2, vec![3000; 3], 12);
}

#[test]
fn practical_triangles_short_and_long() {
    let mut lengths = vec![3; 1500];
    lengths.extend(std::iter::repeat_n(5, 1500));
    lengths.extend(std::iter::repeat_n(2000, 4));
    mixed_run(20000, 0.3, 3, lengths, 12);
}

#[test]
fn embedding_is_deterministic() {
    let mut lengths = vec![3; 300];
    lengths.extend(std::iter::repeat_n(7, 100));
    lengths.extend([3500, 3500]);
    let a = mixed_run(10000, 0.3, 5, lengths.clone(), 12);
    let b = mixed_run(10000, 0.3, 5, lengths, 12);
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn padded_specs_cover_n(lengths in proptest::collection::vec(3usize..30, 0..20), extra in 3usize..40) {
        let n = lengths.iter().sum::<usize>() + extra;
        let s = pad_spec(&spec(lengths.clone()), n).unwrap();
        prop_assert_eq!(s.total(), n);
        prop_assert_eq!(&s.lengths()[..lengths.len()], &lengths[..]);
        prop_assert!(s.lengths()[lengths.len()..].iter().all(|&l| (3..=7).contains(&l)));
    }

    #[test]
    fn short_specs_embed_in_dense_random_graphs(
        seed in 0u64..1000,
        lengths in proptest::collection::vec(4usize..=8, 1..40),
    ) {
        let n = 1200;
        let g = sample_gnp(n, 0.4, seed);
        let s = pad_spec(&spec(lengths), n).unwrap();
        let emb = embed_two_factor(&g, &s, &params(0.4), &EmbedOptions::practical(), Some(&GreedyTriangles::default()), &mut Trace::default()).unwrap();
        prop_assert!(verify_embedding(&g, &s, &emb).passed());
    }
}

#[test]
fn a_handful_of_triangles_beside_short_cycles() {
    let n = 3000;
    for seed in 0..4 {
        let g = sample_gnp(n, 0.3, 40 + seed);
        let s = pad_spec(&spec(vec![3, 3, 5]), n).unwrap();
        let mut opts = EmbedOptions::practical();
        opts.seed = seed;
        let emb = embed_two_factor(&g, &s, &params(0.3), &opts, Some(&GreedyTriangles::default()), &mut Trace::default()).unwrap();
        assert_embedding(&g, s.lengths(), &emb);
    }
}
