use proptest::prelude::*;
use twofactor::absorber::{build_absorbing_structure, AbsorberOptions, AbsorbingStructure, TemplateChoice};
use twofactor::graph::sample_gnp;
use twofactor::{Graph, JumbledParams, VertexSet};

fn params(p: f64) -> JumbledParams {
    JumbledParams::new(p, 0.0, 0.0, 0.5)
}

/// Recounts an absorption: disjoint `ℓ`-cycles of `g` covering `V(S) \ Z̄`.
fn assert_factor(g: &Graph, s: &AbsorbingStructure, zbar: &[usize]) {
    let cycles = s.absorb(zbar).unwrap();
    assert_eq!(cycles.len(), 3 * s.m() + s.edges().len());
    let mut seen = VertexSet::empty(g.n());
    for c in &cycles {
        assert_eq!(c.len(), s.ell());
        for k in 0..c.len() {
            assert!(g.has_edge(c[k], c[(k + 1) % c.len()]), "missing edge in {c:?}");
            assert!(seen.insert(c[k]), "vertex {} covered twice", c[k]);
        }
    }
    let mut want = s.vertices(g.n());
    for &v in zbar {
        assert!(want.remove(v));
    }
    assert_eq!(seen, want);
}

fn subsets(k: usize, of: usize) -> Vec<Vec<usize>> {
    (0u32..1 << of)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..of).filter(|&j| m >> j & 1 == 1).collect())
        .collect()
}

#[test]
fn spec_scale_structure_for_four_cycles() {
    let n = 20_000;
    let g = sample_gnp(n, 0.3, 1);
    let all = VertexSet::full(n);
    let (s, w) = build_absorbing_structure(&g, &all, 4, 60, &params(0.3), &AbsorberOptions::practical()).unwrap();
    s.check(&g).unwrap();
    assert_eq!(s.m(), 60);
    assert_eq!(s.spines().len(), 180);
    assert_eq!(s.z().len(), 240);
    assert!(s.vertex_count() <= s.vertex_bound());
    assert_eq!(w.len(), n / 4);
    assert!(w.is_disjoint(&s.vertices(n)));
    let need = 0.3 * w.len() as f64 / 8.0 * 0.5;
    assert!((0..n).all(|v| g.deg_into(v, &w) as f64 >= need));
    let z1 = s.z1();
    assert_factor(&g, &s, &z1[..60]);
    assert_factor(&g, &s, &z1[60..]);
    let alternate: Vec<usize> = z1.iter().step_by(2).copied().collect();
    assert_factor(&g, &s, &alternate);
}

#[test]
fn every_removal_absorbs_for_small_flexibility() {
    let n = 2400;
    let g = sample_gnp(n, 0.3, 7);
    let all = VertexSet::full(n);
    for (m, ell) in [(1, 4), (2, 5), (3, 6), (4, 4), (5, 5)] {
        let mut opts = AbsorberOptions::practical();
        opts.template = TemplateChoice::Random { degree: 4 };
        let (s, _) = build_absorbing_structure(&g, &all, ell, m, &params(0.3), &opts).unwrap();
        for pick in subsets(m, 2 * m) {
            let zbar: Vec<usize> = pick.iter().map(|&j| s.z1()[j]).collect();
            assert_factor(&g, &s, &zbar);
        }
    }
}

#[test]
fn longer_cycles_satisfy_all_adjacencies() {
    let n = 6000;
    let g = sample_gnp(n, 0.25, 12);
    let all = VertexSet::full(n);
    for ell in [5, 7, 9] {
        let (s, _) = build_absorbing_structure(&g, &all, ell, 10, &params(0.25), &AbsorberOptions::practical()).unwrap();
        s.check(&g).unwrap();
        assert!(s.segments().all(|p| p.vertices().len() == ell - 1));
        assert_factor(&g, &s, &s.z1()[5..15]);
    }
}

#[test]
fn zero_flexibility_is_degenerate() {
    let g = sample_gnp(400, 0.5, 2);
    let (s, w) = build_absorbing_structure(&g, &VertexSet::full(400), 4, 0, &params(0.5), &AbsorberOptions::practical()).unwrap();
    assert_eq!(s.vertex_count(), 0);
    assert_eq!(w.len(), 100);
    assert!(s.absorb(&[]).unwrap().is_empty());
}

#[test]
fn structure_inside_a_subset_stays_inside() {
    let n = 4000;
    let g = sample_gnp(n, 0.3, 19);
    let u = VertexSet::range(n, 1000, 3500);
    let (s, w) = build_absorbing_structure(&g, &u, 4, 8, &params(0.3), &AbsorberOptions::practical()).unwrap();
    assert!(s.vertices(n).is_subset(&u));
    assert!(w.is_subset(&u));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_removals_absorb(seed in 0u64..1000, pick in proptest::collection::vec(any::<bool>(), 12)) {
        let n = 2000;
        let g = sample_gnp(n, 0.35, seed);
        let mut opts = AbsorberOptions::practical();
        opts.template = TemplateChoice::Random { degree: 5 };
        opts.seed = seed;
        let (s, _) = build_absorbing_structure(&g, &VertexSet::full(n), 4, 6, &params(0.35), &opts).unwrap();
        // first six chosen flags, padded with the unchosen, give an m-subset
        let mut ids: Vec<usize> = (0..12).filter(|&j| pick[j]).take(6).collect();
        ids.extend((0..12).filter(|&j| !pick[j]).take(6 - ids.len()));
        let zbar: Vec<usize> = ids.iter().map(|&j| s.z1()[j]).collect();
        assert_factor(&g, &s, &zbar);
    }
}
