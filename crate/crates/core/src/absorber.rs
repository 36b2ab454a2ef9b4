//! Absorbing structures for cycles of a fixed length.
//!
//! A structure holds `3m` spine paths `P^i`, one vertex `a_ij` and one path
//! `P_ij` per template edge, and `4m` vertices `z_j`. Removing any `m` of the
//! first `2m` vertices `z_j` leaves a cycle factor on the rest.

use thiserror::Error;

use crate::config::{Constants, GateError, JumbledParams, Mode};
use crate::graph::{Graph, VertexSet};
use crate::partition::{degree_preserving_partition, PartitionError, PartitionOptions};
use crate::paths::{find_book_cycle, BookCycle, find_connecting_path, Path, PathConfig, PathError};
use crate::template::{build_random_template, build_template, Template, TemplateError, TemplateOptions, VerifyMode};

/// `z_j` is only placed while every `a_ij` keeps `δpn/10` free neighbours.
pub const FREE_DEGREE_DIVISOR: f64 = 10.0;
/// `z ∈ B_j` when some `a_ij` has fewer than `δp²n/20` free common neighbours with it.
pub const BAD_SET_DIVISOR: f64 = 20.0;
/// Path ends `y₁, y₂` should keep `pn/30` neighbours in the free part.
pub const END_DEGREE_DIVISOR: f64 = 30.0;
/// Degree used by the practical random-template fallback.
pub const FALLBACK_TEMPLATE_DEGREE: usize = 4;

#[derive(Debug, Error)]
pub enum AbsorberError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("template: {0}")]
    Template(#[from] TemplateError),
    #[error("partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("{stage}: {source}")]
    Path {
        stage: &'static str,
        #[source]
        source: PathError,
    },
    #[error("{stage}: {detail}")]
    Stage { stage: &'static str, detail: String },
    #[error("expected {expected} removed flexible vertices, got {got}")]
    RemovedCount { expected: usize, got: usize },
    #[error("vertex {vertex} is not an unused flexible vertex")]
    NotFlexible { vertex: usize },
    #[error("template flexibility violated: no perfect matching avoiding {jbar:?}")]
    FlexibilityViolation { jbar: Vec<usize> },
    #[error("structure invariant violated: {0}")]
    Invariant(String),
}

/// Which template backs the structure.
#[derive(Clone, Debug, Default)]
pub enum TemplateChoice {
    /// Strict: LPS only. Practical: LPS, then a random template of degree
    /// [`FALLBACK_TEMPLATE_DEGREE`].
    #[default]
    Auto,
    Lps,
    Random {
        degree: usize,
    },
    Given(Template),
}

#[derive(Clone, Debug)]
pub struct AbsorberOptions {
    pub mode: Mode,
    pub constants: Constants,
    pub template: TemplateChoice,
    /// Random deletions checked when a template is verified by sampling.
    pub template_trials: usize,
    pub path_budget: usize,
    pub seed: u64,
}

impl AbsorberOptions {
    pub fn strict() -> Self {
        Self::for_mode(Mode::Strict)
    }

    pub fn practical() -> Self {
        Self::for_mode(Mode::Practical)
    }

    pub fn for_mode(mode: Mode) -> Self {
        AbsorberOptions {
            mode,
            constants: Constants::for_mode(mode),
            template: TemplateChoice::Auto,
            template_trials: 1000,
            path_budget: 200_000,
            seed: 0,
        }
    }
}

/// The structure `(T, 𝒫₁, A, 𝒫₂, Z, Z₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorbingStructure {
    template: Template,
    ell: usize,
    edges: Vec<(usize, usize)>,
    /// `P^i`, `ℓ - 1` vertices each.
    spines: Vec<Path>,
    /// `a_ij` per template edge.
    a: Vec<usize>,
    /// `P_ij` per template edge.
    links: Vec<Path>,
    z: Vec<usize>,
}

impl AbsorbingStructure {
    /// Assembles a structure from its parts; edge-indexed vectors follow
    /// `template.edges()` order.
    pub fn from_parts(
        template: Template,
        ell: usize,
        spines: Vec<Path>,
        a: Vec<usize>,
        links: Vec<Path>,
        z: Vec<usize>,
    ) -> Result<Self, AbsorberError> {
        let edges: Vec<(usize, usize)> = template.edges().collect();
        let m = template.m();
        if spines.len() != 3 * m || a.len() != edges.len() || links.len() != edges.len() || z.len() != 4 * m {
            return Err(AbsorberError::Invariant("part sizes do not match the template".into()));
        }
        Ok(AbsorbingStructure {
            template,
            ell,
            edges,
            spines,
            a,
            links,
            z,
        })
    }

    /// Structure with flexibility zero.
    pub fn empty(ell: usize) -> Self {
        let template = Template::from_edges(0, &[]).expect("empty template");
        AbsorbingStructure {
            template,
            ell,
            edges: Vec::new(),
            spines: Vec::new(),
            a: Vec::new(),
            links: Vec::new(),
            z: Vec::new(),
        }
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn m(&self) -> usize {
        self.template.m()
    }

    /// Cycle length `ℓ = s + 2`.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn spines(&self) -> &[Path] {
        &self.spines
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn links(&self) -> &[Path] {
        &self.links
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    /// The flexible vertices `z_1, …, z_{2m}`.
    pub fn z1(&self) -> &[usize] {
        &self.z[..2 * self.m()]
    }

    /// `r = 3m + |E(T)|`, the number of cycles in any absorption.
    pub fn cycle_count(&self) -> usize {
        self.spines.len() + self.edges.len()
    }

    /// `P^1, …, P^{3m}` followed by the `P_ij` in edge order.
    pub fn segments(&self) -> impl Iterator<Item = &Path> {
        self.spines.iter().chain(&self.links)
    }

    /// `A ∪ Z`, the vertices matched onto segments.
    pub fn hubs(&self) -> impl Iterator<Item = usize> + '_ {
        self.a.iter().chain(&self.z).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.segments().map(|p| p.vertices().len()).sum::<usize>() + self.a.len() + self.z.len()
    }

    pub fn vertices(&self, universe: usize) -> VertexSet {
        VertexSet::from_ids(
            universe,
            self.segments().flat_map(|p| p.vertices().iter().copied()).chain(self.hubs()),
        )
    }

    /// `3ℓm(Δ(T) + 2)`.
    pub fn vertex_bound(&self) -> usize {
        3 * self.ell * self.m() * (self.template.max_degree() + 2)
    }

    /// Checks disjointness, every adjacency requirement and the size bound.
    pub fn check(&self, g: &Graph) -> Result<(), AbsorberError> {
        let bad = |s: String| Err(AbsorberError::Invariant(s));
        let mut seen = VertexSet::empty(g.n());
        let all = self.segments().flat_map(|p| p.vertices().iter().copied()).chain(self.hubs());
        for v in all {
            if v >= g.n() {
                return bad(format!("vertex {v} outside the graph"));
            }
            if !seen.insert(v) {
                return bad(format!("vertex {v} used twice"));
            }
        }
        for p in self.segments() {
            if p.vertices().len() != self.ell - 1 {
                return bad(format!("segment {:?} does not have {} vertices", p.vertices(), self.ell - 1));
            }
            p.validate(g).map_err(|e| AbsorberError::Invariant(e.to_string()))?;
        }
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let (a, z) = (self.a[e], self.z[j]);
            for (x, path, what) in [(a, &self.spines[i], "a_ij to P^i"), (a, &self.links[e], "a_ij to P_ij"), (z, &self.links[e], "z_j to P_ij")] {
                if !g.has_edge(x, path.first()) || !g.has_edge(x, path.last()) {
                    return bad(format!("{what} fails for edge ({i}, {j})"));
                }
            }
        }
        if self.vertex_count() > self.vertex_bound() {
            return bad(format!("{} vertices exceed 3lm(D+2) = {}", self.vertex_count(), self.vertex_bound()));
        }
        Ok(())
    }

    /// For `Z̄ ⊆ Z₁` with `|Z̄| = m`, the vertex of `A ∪ Z` closing each
    /// segment (in [`Self::segments`] order).
    pub fn assignment(&self, zbar: &[usize]) -> Result<Vec<usize>, AbsorberError> {
        let m = self.m();
        if zbar.len() != m {
            return Err(AbsorberError::RemovedCount { expected: m, got: zbar.len() });
        }
        let mut jbar = Vec::with_capacity(m);
        for &v in zbar {
            match self.z1().iter().position(|&z| z == v) {
                Some(j) if !jbar.contains(&j) => jbar.push(j),
                _ => return Err(AbsorberError::NotFlexible { vertex: v }),
            }
        }
        jbar.sort_unstable();
        let mate = self
            .template
            .matching_without(&jbar)
            .ok_or_else(|| AbsorberError::FlexibilityViolation { jbar: jbar.clone() })?;
        let mut out = vec![usize::MAX; self.cycle_count()];
        let spines = self.spines.len();
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            if mate[i] == j {
                out[i] = self.a[e];
                out[spines + e] = self.z[j];
            } else {
                out[spines + e] = self.a[e];
            }
        }
        debug_assert!(out.iter().all(|&v| v != usize::MAX));
        Ok(out)
    }

    /// Cycle factor on `V(S) \ Z̄`: exactly `3m + |E(T)|` cycles of length `ℓ`.
    pub fn absorb(&self, zbar: &[usize]) -> Result<Vec<Vec<usize>>, AbsorberError> {
        let closing = self.assignment(zbar)?;
        Ok(self
            .segments()
            .zip(closing)
            .map(|(p, y)| {
                let mut c = p.vertices().to_vec();
                c.push(y);
                c
            })
            .collect())
    }
}

/// Builds an absorbing structure for `ℓ`-cycles with flexibility `m` inside
/// `universe`, together with the reserved set `W`.
///
/// The universe is split four ways by degree; book cycles in the first part
/// give the spines and `A`; each `z_j` comes from the second part and its
/// paths `P_ij` from the first, or from the third once the first is spent.
/// `W` is the fourth part.
pub fn build_absorbing_structure(
    g: &Graph,
    universe: &VertexSet,
    ell: usize,
    m: usize,
    params: &JumbledParams,
    opts: &AbsorberOptions,
) -> Result<(AbsorbingStructure, VertexSet), AbsorberError> {
    if ell < 4 {
        return Err(AbsorberError::Stage {
            stage: "parameters",
            detail: format!("cycle length {ell} below 4"),
        });
    }
    let n = universe.len();
    let p = params.p;
    let strict = opts.mode.is_strict();
    if strict {
        let alpha = m as f64 / n.max(1) as f64;
        let bound = opts.constants.alpha_bound(ell);
        if alpha > bound {
            return Err(GateError::Alpha {
                alpha,
                ell,
                pages: opts.constants.pages,
                bound,
            }
            .into());
        }
    }
    let min_deg = universe.iter().map(|v| g.deg_into(v, universe)).min().unwrap_or(0);
    let delta = min_deg as f64 / (p * n.max(1) as f64);
    let partition = degree_preserving_partition(
        g,
        universe,
        universe,
        2,
        delta,
        p,
        &PartitionOptions {
            mode: opts.mode,
            factor: opts.constants.partition_factor,
        },
    )?;
    let [v1, v2, v3, w]: [VertexSet; 4] = partition.parts.try_into().expect("four parts");
    if m == 0 {
        return Ok((AbsorbingStructure::empty(ell), w));
    }

    let template = choose_template(m, opts)?;
    if template.m() != m {
        return Err(AbsorberError::Stage {
            stage: "template",
            detail: format!("template has flexibility {}, expected {m}", template.m()),
        });
    }
    if template.max_degree() > opts.constants.pages {
        return Err(AbsorberError::Stage {
            stage: "template",
            detail: format!("maximum degree {} exceeds K = {}", template.max_degree(), opts.constants.pages),
        });
    }

    let cfg = PathConfig {
        mode: opts.mode,
        p,
        epsilon: strict.then_some(params.epsilon),
        budget: opts.path_budget,
    };
    let mut b = Builder {
        g,
        ell,
        cfg,
        n,
        pages: opts.constants.pages,
        used: VertexSet::empty(g.n()),
        regions: [v1, v3],
        free: [Vec::new(), Vec::new()],
        a: Vec::new(),
    };
    let structure = b.run(template, &v2, delta, strict, params.epsilon)?;
    structure.check(g)?;
    Ok((structure, w))
}

/// The template `opts` asks for, with `m` flexible vertices.
pub fn choose_template(m: usize, opts: &AbsorberOptions) -> Result<Template, AbsorberError> {
    let verify = VerifyMode::Auto {
        trials: opts.template_trials,
    };
    let lps = || {
        build_template(
            m,
            opts.constants.template_prime,
            &TemplateOptions {
                mode: opts.mode,
                verify,
                seed: opts.seed,
            },
        )
    };
    let random = |degree| build_random_template(m, degree, opts.seed, verify);
    Ok(match &opts.template {
        TemplateChoice::Given(t) => t.clone(),
        TemplateChoice::Lps => lps()?,
        TemplateChoice::Random { degree } => random(*degree)?,
        TemplateChoice::Auto if opts.mode.is_strict() => lps()?,
        TemplateChoice::Auto => match lps() {
            Ok(t) => t,
            Err(_) => random(FALLBACK_TEMPLATE_DEGREE)?,
        },
    })
}

struct Builder<'a> {
    g: &'a Graph,
    ell: usize,
    cfg: PathConfig,
    /// `|universe|`, the `n` of every threshold.
    n: usize,
    /// `K`; each book cycle keeps only `deg_T(i)` of its pages.
    pages: usize,
    used: VertexSet,
    /// Path regions: `V₁`, then `V₃`.
    regions: [VertexSet; 2],
    /// `|N(a_e, region) \ S'|` per edge, per region.
    free: [Vec<usize>; 2],
    a: Vec<usize>,
}

impl Builder<'_> {
    fn take(&mut self, v: usize) {
        if !self.used.insert(v) {
            return;
        }
        for r in 0..2 {
            if self.regions[r].contains(v) {
                for (e, &a) in self.a.iter().enumerate() {
                    if self.g.has_edge(a, v) {
                        self.free[r][e] -= 1;
                    }
                }
            }
        }
    }

    fn run(
        &mut self,
        template: Template,
        v2: &VertexSet,
        delta: f64,
        strict: bool,
        epsilon: f64,
    ) -> Result<AbsorbingStructure, AbsorberError> {
        let n = self.n;
        let g = self.g;
        let m = template.m();
        let edges: Vec<(usize, usize)> = template.edges().collect();

        // spines and A from book cycles
        let mut spines = Vec::with_capacity(3 * m);
        let mut a = vec![usize::MAX; edges.len()];
        let mut e0 = 0;
        for i in 0..3 * m {
            let need = template.degree_i(i);
            let book = self.book_cycle(self.pages.max(need), strict)?;
            for &v in book.spine.vertices() {
                self.take(v);
            }
            for (k, &page) in book.pages.iter().take(need).enumerate() {
                a[e0 + k] = page;
                self.take(page);
            }
            e0 += need;
            spines.push(book.spine);
        }
        self.a = a;
        for r in 0..2 {
            let free = self.regions[r].difference(&self.used);
            self.free[r] = self.a.iter().map(|&x| g.deg_into(x, &free)).collect();
        }

        let mut by_j: Vec<Vec<usize>> = vec![Vec::new(); 4 * m];
        for (e, &(_, j)) in edges.iter().enumerate() {
            by_j[j].push(e);
        }
        let p = self.cfg.p;
        let free_need = delta * p * n as f64 / FREE_DEGREE_DIVISOR;
        let codeg_need = delta * p * p * n as f64 / BAD_SET_DIVISOR;
        let mut z = vec![usize::MAX; 4 * m];
        let mut links: Vec<Option<Path>> = vec![None; edges.len()];

        let mut deferred = Vec::new();
        for j in 0..4 * m {
            if by_j[j].iter().all(|&e| self.free[0][e] as f64 >= free_need) {
                self.place(j, &by_j[j], 0, v2, codeg_need, strict, &mut z, &mut links)?;
            } else {
                deferred.push(j);
            }
        }
        if strict && deferred.len() as f64 > epsilon * p * p * n as f64 {
            return Err(AbsorberError::Stage {
                stage: "second phase",
                detail: format!("{} deferred indices exceed eps p^2 n = {:.1}", deferred.len(), epsilon * p * p * n as f64),
            });
        }
        for j in deferred {
            if strict {
                if let Some(&e) = by_j[j].iter().find(|&&e| (self.free[1][e] as f64) < free_need) {
                    return Err(AbsorberError::Stage {
                        stage: "second phase",
                        detail: format!("a_ij = {} keeps only {} free neighbours in V3", self.a[e], self.free[1][e]),
                    });
                }
            }
            self.place(j, &by_j[j], 1, v2, codeg_need, strict, &mut z, &mut links)?;
        }

        let links = links.into_iter().map(|l| l.expect("every edge linked")).collect();
        AbsorbingStructure::from_parts(template, self.ell, spines, std::mem::take(&mut self.a), links, z)
    }

    fn book_cycle(&self, pages: usize, strict: bool) -> Result<BookCycle, AbsorberError> {
        let pool = self.regions[0].difference(&self.used);
        match find_book_cycle(self.g, &pool, self.ell, pages, &self.cfg) {
            Ok(b) => Ok(b),
            Err(_) if !strict => {
                let wider = self.regions[0].union(&self.regions[1]).difference(&self.used);
                find_book_cycle(self.g, &wider, self.ell, pages, &self.cfg).map_err(|source| AbsorberError::Path {
                    stage: "book cycles",
                    source,
                })
            }
            Err(source) => Err(AbsorberError::Path {
                stage: "book cycles",
                source,
            }),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn place(
        &mut self,
        j: usize,
        edges: &[usize],
        region: usize,
        v2: &VertexSet,
        codeg_need: f64,
        strict: bool,
        z: &mut [usize],
        links: &mut [Option<Path>],
    ) -> Result<(), AbsorberError> {
        let g = self.g;
        let free_region = self.regions[region].difference(&self.used);
        let nbrs: Vec<VertexSet> = edges.iter().map(|&e| g.neighbors_in(self.a[e], &free_region)).collect();
        let candidates = v2.difference(&self.used);
        let score = |c: usize| nbrs.iter().map(|s| g.deg_into(c, s)).min().unwrap_or(usize::MAX);
        let pick = candidates.iter().find(|&c| score(c) as f64 >= codeg_need);
        let zj = match pick {
            Some(c) => c,
            None if !strict => candidates
                .iter()
                .map(|c| (score(c), std::cmp::Reverse(c)))
                .max()
                .filter(|&(s, _)| s >= 2)
                .map(|(_, std::cmp::Reverse(c))| c)
                .ok_or(AbsorberError::Stage {
                    stage: "choosing z_j",
                    detail: format!("no vertex of V2 has two free common neighbours with every a_ij for j = {j}"),
                })?,
            None => {
                return Err(AbsorberError::Stage {
                    stage: "choosing z_j",
                    detail: format!("every free vertex of V2 lies in the bad set B_{j}"),
                })
            }
        };
        z[j] = zj;
        self.take(zj);
        for &e in edges {
            let path = self.link(e, zj, region, strict)?;
            for &v in path.vertices() {
                self.take(v);
            }
            links[e] = Some(path);
        }
        Ok(())
    }

    /// `P_ij` of length `ℓ - 2` with both ends in `N(a_ij) ∩ N(z_j)`.
    fn link(&self, e: usize, zj: usize, region: usize, strict: bool) -> Result<Path, AbsorberError> {
        let g = self.g;
        let free = self.regions[region].difference(&self.used);
        let mut uij = g.neighbors_in(self.a[e], &free);
        uij.intersect_with(&g.neighbor_set(zj));
        let rest = free.difference(&uij);
        let fail = |detail: String| AbsorberError::Stage { stage: "paths P_ij", detail };
        if self.ell == 4 {
            // a middle inside U_ij is fine too once the rest is spent
            let w = rest
                .iter()
                .chain(uij.iter())
                .find(|&w| g.deg_into(w, &uij) >= 2)
                .ok_or_else(|| fail(format!("no middle vertex for a_ij = {}", self.a[e])))?;
            let ends = g.neighbors_in(w, &uij).lowest(2).to_vec();
            return Ok(Path::new(vec![ends[0], w, ends[1]]));
        }
        let p = self.cfg.p;
        let need = p * self.n as f64 / END_DEGREE_DIVISOR;
        let mut ends: Vec<(usize, usize)> = uij.iter().map(|y| (g.deg_into(y, &rest), y)).collect();
        let (good, mut weak): (Vec<_>, Vec<_>) = ends.drain(..).partition(|&(d, _)| d as f64 >= need);
        let mut order: Vec<usize> = good.into_iter().map(|(_, y)| y).collect();
        if !strict {
            weak.sort_by_key(|&(d, y)| (std::cmp::Reverse(d), y));
            order.extend(weak.into_iter().map(|(_, y)| y));
        }
        let inner = PathConfig { epsilon: None, ..self.cfg };
        let mut tries = 0;
        for (k, &y1) in order.iter().enumerate() {
            for &y2 in &order[k + 1..] {
                tries += 1;
                if tries > 32 {
                    return Err(fail(format!("no connection for a_ij = {} after 32 end pairs", self.a[e])));
                }
                let from = g.neighbors_in(y1, &rest);
                let to = g.neighbors_in(y2, &rest);
                if let Ok(mid) = find_connecting_path(g, &from, &to, &rest, self.ell - 4, &inner) {
                    let mut v = vec![y1];
                    v.extend(mid.into_vertices());
                    v.push(y2);
                    return Ok(Path::new(v));
                }
                if strict {
                    return Err(fail(format!("connecting path failed for a_ij = {}", self.a[e])));
                }
            }
        }
        Err(fail(format!("fewer than two usable ends for a_ij = {}", self.a[e])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    fn small_structure(seed: u64) -> (Graph, AbsorbingStructure) {
        let g = sample_gnp(3000, 0.3, seed);
        let all = VertexSet::full(3000);
        let params = JumbledParams::new(0.3, 0.0, 0.0, 0.5);
        let mut opts = AbsorberOptions::practical();
        opts.template = TemplateChoice::Random { degree: 4 };
        let (s, w) = build_absorbing_structure(&g, &all, 4, 3, &params, &opts).unwrap();
        assert!(w.is_disjoint(&s.vertices(3000)));
        (g, s)
    }

    #[test]
    fn empty_structure_absorbs_nothing() {
        let s = AbsorbingStructure::empty(5);
        assert_eq!(s.absorb(&[]).unwrap(), Vec::<Vec<usize>>::new());
        assert!(matches!(s.absorb(&[1]), Err(AbsorberError::RemovedCount { expected: 0, got: 1 })));
    }

    #[test]
    fn absorb_covers_everything_but_the_removed_set() {
        let (g, s) = small_structure(3);
        s.check(&g).unwrap();
        let z1 = s.z1().to_vec();
        for zbar in [&z1[..3], &z1[3..], &[z1[0], z1[2], z1[4]][..]] {
            let cycles = s.absorb(zbar).unwrap();
            assert_eq!(cycles.len(), s.cycle_count());
            let mut seen = VertexSet::empty(3000);
            for c in &cycles {
                assert_eq!(c.len(), 4);
                for k in 0..4 {
                    assert!(g.has_edge(c[k], c[(k + 1) % 4]));
                    assert!(seen.insert(c[k]));
                }
            }
            let mut want = s.vertices(3000);
            for &v in zbar {
                want.remove(v);
            }
            assert_eq!(seen, want);
        }
    }

    #[test]
    fn absorb_rejects_bad_removals() {
        let (_, s) = small_structure(5);
        let z = s.z().to_vec();
        assert!(matches!(s.absorb(&z[..2]), Err(AbsorberError::RemovedCount { .. })));
        assert!(matches!(s.absorb(&[z[0], z[1], z[7]]), Err(AbsorberError::NotFlexible { vertex }) if vertex == z[7]));
        assert!(matches!(s.absorb(&[z[0], z[0], z[1]]), Err(AbsorberError::NotFlexible { .. })));
    }

    #[test]
    fn strict_alpha_gate_names_the_bound() {
        let g = Graph::complete(40);
        let params = JumbledParams::new(1.0, 1.0, 0.001, 1.0);
        let err = build_absorbing_structure(&g, &VertexSet::full(40), 4, 2, &params, &AbsorberOptions::strict()).unwrap_err();
        assert!(err.to_string().contains("1/(60*ell*(K+2))"), "{err}");
    }
}
