//! Cycles with lengths in `[4, L]`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{endpoint_delta, finish, inner_delta, CycleFamilySpec, EmbedError, EmbedOptions, Embedding, Trace};
use crate::absorber::{build_absorbing_structure, AbsorbingStructure, FALLBACK_TEMPLATE_DEGREE};
use crate::config::{GateError, JumbledParams};
use crate::graph::{Graph, VertexSet};
use crate::partition::degree_preserving_partition;
use crate::paths::{connect_pairs, find_book_cycle, PairSystem, PathConfig};

/// Embeds cycles with lengths in `[4, L]` into `G[universe]`.
///
/// The spec is padded with 4-cycles (dropping at most three top-id vertices)
/// so that it covers the universe. The length `ℓ` carrying the most vertices
/// is absorbed: every other cycle is placed greedily in the large part of a
/// degree-preserving split, an absorbing structure for `ℓ`-cycles is built on
/// the rest, and the leftover is covered by `ℓ`-cycles: low-degree vertices
/// first through `W`, then greedily, then through `Z₁`, and finally by the
/// absorber itself.
pub fn embed_short_cycles(
    g: &Graph,
    universe: &VertexSet,
    spec: &CycleFamilySpec,
    params: &JumbledParams,
    opts: &EmbedOptions,
    trace: &mut Trace,
) -> Result<Embedding, EmbedError> {
    opts.gate()?;
    let lmax = opts.constants.short_max;
    if let Some(&l) = spec.lengths().iter().find(|&&l| !(4..=lmax).contains(&l)) {
        return Err(EmbedError::Infeasible(format!("length {l} outside [4, {lmax}]")));
    }
    spec.check_fits(universe.len())?;
    if spec.is_empty() {
        return Ok(Embedding::default());
    }
    let slack = universe.len() - spec.total();
    let mut lengths = spec.lengths().to_vec();
    lengths.extend(std::iter::repeat_n(4, slack / 4));
    let mut x = universe.clone();
    for v in universe.to_vec().into_iter().rev().take(slack % 4) {
        x.remove(v);
    }
    trace.note("short.padding_cycles", slack / 4);
    trace.note("short.dropped_vertices", slack % 4);
    let mut cycles = ShortRun {
        g,
        params,
        opts,
        cfg: opts.paths(params),
    }
    .run(&lengths, &x, trace)?;
    cycles.truncate(spec.len());
    finish(g, spec, Embedding { cycles })
}

/// A structure may take at most `1/STRUCTURE_ROOM` of the universe when
/// practical runs raise `m`.
const STRUCTURE_ROOM: usize = 4;

/// Vertices of an absorbing structure with the fallback template degree
/// `D`: `3m` spines and `3mD` links of `ℓ - 1` vertices, the `3mD` pages and
/// the `4m` vertices of `Z`.
fn structure_size(m: usize, ell: usize) -> usize {
    let d = FALLBACK_TEMPLATE_DEGREE;
    3 * m * (1 + d) * (ell - 1) + 3 * m * d + 4 * m
}

/// Below `ENDGAME_FACTOR · ℓ` leftover vertices, practical runs switch from
/// book cycles to randomized packing.
const ENDGAME_FACTOR: usize = 16;
const ENDGAME_RESTARTS: u64 = 500;
const ENDGAME_LOW_TRIES: u64 = 40;
const CYCLE_SEARCH_BUDGET: usize = 20_000;

/// Disjoint `ℓ`-cycles in `G[set]` leaving at most `stop` vertices, by
/// seeded restarts of a packing that always routes the vertex of least
/// degree in what is left. The first restarts aim for the fewest leftovers
/// the counts allow, so that closing through `Z₁` has room to spare.
pub(crate) fn pack_cycles(g: &Graph, set: &VertexSet, ell: usize, stop: usize, seed: u64) -> Option<Vec<Vec<usize>>> {
    let floor = set.len() % ell;
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    for attempt in 0..ENDGAME_RESTARTS {
        let aiming_low = attempt < ENDGAME_LOW_TRIES;
        if !aiming_low && best.is_some() {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut left = set.clone();
        let mut out = Vec::new();
        while left.len() > floor {
            let mut order: Vec<usize> = left.to_vec();
            order.shuffle(&mut rng);
            order.sort_by_key(|&v| g.deg_into(v, &left));
            // skipping up to `stop` stuck vertices is allowed
            let reach = if aiming_low { left.len() } else { left.len().saturating_sub(stop) };
            let found = order.iter().take(reach).find_map(|&v| cycle_through(g, v, &left, ell, &mut rng));
            let Some(c) = found else { break };
            for &v in &c {
                left.remove(v);
            }
            out.push(c);
        }
        if left.len() == floor {
            return Some(out);
        }
        if left.len() <= stop && best.as_ref().is_none_or(|(b, _)| left.len() < *b) {
            best = Some((left.len(), out));
        }
    }
    best.map(|(_, out)| out)
}

/// An `ℓ`-cycle through `v` inside `set`, by randomized depth-first search.
pub(crate) fn cycle_through(g: &Graph, v: usize, set: &VertexSet, ell: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    fn go(
        g: &Graph,
        path: &mut Vec<usize>,
        free: &mut VertexSet,
        ell: usize,
        rng: &mut ChaCha8Rng,
        budget: &mut usize,
    ) -> bool {
        let last = *path.last().expect("non-empty");
        if path.len() == ell {
            return g.has_edge(last, path[0]);
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let mut next = g.neighbors_in(last, free).to_vec();
        if path.len() == ell - 1 {
            next.retain(|&u| g.has_edge(u, path[0]));
        }
        next.shuffle(rng);
        for u in next {
            free.remove(u);
            path.push(u);
            if go(g, path, free, ell, rng, budget) {
                return true;
            }
            path.pop();
            free.insert(u);
        }
        false
    }
    let mut free = set.clone();
    free.remove(v);
    let mut path = vec![v];
    let mut budget = CYCLE_SEARCH_BUDGET;
    go(g, &mut path, &mut free, ell, rng, &mut budget).then_some(path)
}

/// The length carrying the most vertices, smallest on ties.
pub(crate) fn majority_length(lengths: &[usize]) -> usize {
    let mut counts = std::collections::BTreeMap::new();
    for &l in lengths {
        *counts.entry(l).or_insert(0usize) += 1;
    }
    let mut best = (0, 0);
    for (&l, &c) in &counts {
        if c * l > best.1 {
            best = (l, c * l);
        }
    }
    best.0
}

struct ShortRun<'a> {
    g: &'a Graph,
    params: &'a JumbledParams,
    opts: &'a EmbedOptions,
    cfg: PathConfig,
}

impl ShortRun<'_> {
    fn book_cycle(&self, pool: &VertexSet, ell: usize, stage: &'static str) -> Result<Vec<usize>, EmbedError> {
        let book = find_book_cycle(self.g, pool, ell, 1, &self.cfg).map_err(EmbedError::path(stage))?;
        Ok(book.cycle_through(book.pages[0]))
    }

    /// `(v, v)` pairs closed into `ℓ`-cycles through `pool`.
    fn close(&self, ends: &[usize], pool: &VertexSet, ell: usize, stage: &'static str) -> Result<Vec<Vec<usize>>, EmbedError> {
        if ends.is_empty() {
            return Ok(Vec::new());
        }
        let system = PairSystem::new(ends.iter().map(|&v| (v, v)).collect()).map_err(EmbedError::path(stage))?;
        let delta = endpoint_delta(self.g, ends, pool, self.cfg.p);
        let paths = connect_pairs(self.g, &system, pool, ell, delta, &self.cfg).map_err(EmbedError::path(stage))?;
        Ok(paths
            .into_iter()
            .map(|p| {
                let mut v = p.into_vertices();
                v.pop();
                v
            })
            .collect())
    }

    fn run(&self, lengths: &[usize], x: &VertexSet, trace: &mut Trace) -> Result<Vec<Vec<usize>>, EmbedError> {
        let g = self.g;
        let n = g.n();
        let p = self.params.p;
        let ell = majority_length(lengths);
        let count = lengths.iter().filter(|&&l| l == ell).count();
        trace.note("short.ell", ell);
        trace.note("short.ell_cycles", count);
        let constants = &self.opts.constants;
        let alpha = constants.short_alpha.unwrap_or_else(|| constants.alpha_bound(ell));
        if self.opts.mode.is_strict() && alpha > constants.alpha_bound(ell) {
            return Err(GateError::Alpha {
                alpha,
                ell,
                pages: constants.pages,
                bound: constants.alpha_bound(ell),
            }
            .into());
        }

        let mut out: Vec<Option<Vec<usize>>> = vec![None; lengths.len()];
        let mut used = VertexSet::empty(n);
        let others: Vec<usize> = (0..lengths.len()).filter(|&i| lengths[i] != ell).collect();
        if !others.is_empty() {
            let l0 = self.opts.constants.short_max_pow2();
            let delta = inner_delta(g, x, p);
            let split = degree_preserving_partition(g, x, x, l0.trailing_zeros(), delta, p, &self.opts.partition())
                .map_err(EmbedError::partition("split V1/V2"))?;
            let mut v2 = VertexSet::empty(n);
            for part in &split.parts[1..] {
                v2.union_with(part);
            }
            trace.phase("short.other_lengths", |_| -> Result<(), EmbedError> {
                for &i in &others {
                    let c = self.book_cycle(&v2, lengths[i], "other lengths")?;
                    for &v in &c {
                        v2.remove(v);
                        used.insert(v);
                    }
                    out[i] = Some(c);
                }
                Ok(())
            })?;
        }
        trace.note("short.other_cycles", others.len());

        let u = x.difference(&used);
        debug_assert_eq!(u.len(), count * ell);
        let mut m = (alpha * u.len() as f64).floor() as usize;
        if !self.opts.mode.is_strict() && m > 0 && m < ell * (ell - 1) {
            // below ℓ(ℓ-1) some leftover residues mod ℓ cannot be closed;
            // without room for that, the endgame packs everything exactly
            let floor = ell * (ell - 1);
            m = if STRUCTURE_ROOM * structure_size(floor, ell) <= u.len() { floor } else { 0 };
        }
        trace.note("short.m", m);
        let (s, w) = if m == 0 {
            (AbsorbingStructure::empty(ell), VertexSet::empty(n))
        } else {
            trace
                .phase("short.absorber", |_| build_absorbing_structure(g, &u, ell, m, self.params, &self.opts.absorber()))
                .map_err(EmbedError::absorber("absorbing structure"))?
        };
        trace.note("short.template_degree", s.template().max_degree());
        trace.note("short.absorber_cycles", s.cycle_count());

        let mut pool_cycles = Vec::with_capacity(count);
        let mut rest = u.difference(&s.vertices(n));
        let z1 = VertexSet::from_ids(n, s.z1().iter().copied());

        if m > 0 {
            let cut = p * z1.len() as f64 / 2.0;
            let u0: Vec<usize> = rest.iter().filter(|&v| g.deg_into(v, &z1) as f64 <= cut).collect();
            let mut pool = w.clone();
            for &v in &u0 {
                pool.remove(v);
            }
            trace.note("short.low_degree", u0.len());
            let c1 = trace.phase("short.low_degree_cycles", |tr| match self.close(&u0, &pool, ell, "low-degree cycles") {
                Err(_) if !self.opts.mode.is_strict() => {
                    // W is too small at this scale; route through everything outside S
                    tr.note("short.low_degree_pool", "outside");
                    let mut wide = rest.clone();
                    for &v in &u0 {
                        wide.remove(v);
                    }
                    self.close(&u0, &wide, ell, "low-degree cycles")
                }
                r => r,
            })?;
            for c in c1 {
                for &v in &c {
                    rest.remove(v);
                }
                pool_cycles.push(c);
            }
        }

        let stop = if m > 0 { m / (ell - 1) } else { 0 };
        let strict = self.opts.mode.is_strict();
        let greedy = trace.phase("short.greedy", |tr| -> Result<usize, EmbedError> {
            let mut found = 0;
            while rest.len() > stop {
                if !strict && rest.len() <= ENDGAME_FACTOR * ell {
                    break;
                }
                let c = match self.book_cycle(&rest, ell, "greedy cycles") {
                    Ok(c) => c,
                    Err(_) if !strict => break,
                    Err(e) => {
                        tr.note("short.greedy_stuck_at", rest.len());
                        return Err(e);
                    }
                };
                for &v in &c {
                    rest.remove(v);
                }
                pool_cycles.push(c);
                found += 1;
            }
            if rest.len() > stop {
                tr.note("short.endgame_from", rest.len());
                let cycles = pack_cycles(g, &rest, ell, stop, self.opts.seed).ok_or_else(|| EmbedError::Stage {
                    stage: "greedy cycles",
                    detail: format!("no packing of {} leftover vertices into {ell}-cycles leaves at most {stop}", rest.len()),
                })?;
                for c in cycles {
                    for &v in &c {
                        rest.remove(v);
                    }
                    pool_cycles.push(c);
                    found += 1;
                }
            }
            Ok(found)
        })?;
        trace.note("short.greedy_cycles", greedy);

        let u1 = rest.to_vec();
        trace.note("short.closing", u1.len());
        if u1.len() * (ell - 1) > m {
            return Err(EmbedError::Stage {
                stage: "closing through Z1",
                detail: format!("{} leftover vertices need {} flexible vertices, m = {m}", u1.len(), u1.len() * (ell - 1)),
            });
        }
        let mut zfree = z1.clone();
        for c in self.close(&u1, &z1, ell, "closing through Z1")? {
            for &v in &c[1..] {
                zfree.remove(v);
            }
            pool_cycles.push(c);
        }
        let spare = m - u1.len() * (ell - 1);
        if !spare.is_multiple_of(ell) {
            return Err(EmbedError::Stage {
                stage: "closing through Z1",
                detail: format!("{spare} flexible vertices left, not a multiple of {ell}"),
            });
        }
        for _ in 0..spare / ell {
            let c = self.book_cycle(&zfree, ell, "cycles inside Z1")?;
            for &v in &c {
                zfree.remove(v);
            }
            pool_cycles.push(c);
        }
        trace.note("short.z1_cycles", spare / ell);

        let zbar: Vec<usize> = s.z1().iter().copied().filter(|&v| !zfree.contains(v)).collect();
        trace.note("short.absorbed", zbar.len());
        pool_cycles.extend(s.absorb(&zbar).map_err(EmbedError::absorber("absorb"))?);

        if pool_cycles.len() != count {
            return Err(EmbedError::Stage {
                stage: "assembly",
                detail: format!("built {} cycles of length {ell}, spec has {count}", pool_cycles.len()),
            });
        }
        let mut pool_cycles = pool_cycles.into_iter();
        Ok(out
            .into_iter()
            .map(|c| c.unwrap_or_else(|| pool_cycles.next().expect("counted")))
            .collect())
    }
}
