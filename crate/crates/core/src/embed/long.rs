//! Cycles longer than `L`.

use super::{endpoint_delta, finish, plan_segment_budget, CycleFamilySpec, EmbedError, EmbedOptions, Embedding, Trace};
use crate::absorber::{build_absorbing_structure, choose_template, TemplateChoice};
use crate::config::JumbledParams;
use crate::graph::{Graph, VertexSet};
use crate::paths::{connect_pairs, greedy_long_path, PairSystem, Path, PathConfig};

/// Embeds cycles of length above `L` into `G[universe]`.
///
/// A short remainder is padded by one extra cycle. An absorbing structure
/// for 4-cycles with flexibility `m` is built; its segments `s₀s₁s₂` and the
/// vertices of low degree into the reserved flexible set `Z'` are threaded
/// onto one path per cycle through `W` (phase 1), each cycle gets a greedy
/// path for its bulk (phase 2), and everything is closed through `Z'` with
/// exactly `m` flexible vertices left over (phase 3). The absorber then
/// supplies each segment a hub `y`, and `s₀ y s₂ s₁` is spliced in.
pub fn embed_long_cycles(
    g: &Graph,
    universe: &VertexSet,
    spec: &CycleFamilySpec,
    params: &JumbledParams,
    opts: &EmbedOptions,
    trace: &mut Trace,
) -> Result<Embedding, EmbedError> {
    opts.gate()?;
    let lmax = opts.constants.short_max;
    if let Some(&l) = spec.lengths().iter().find(|&&l| l <= lmax) {
        return Err(EmbedError::Infeasible(format!("length {l} is not above L = {lmax}")));
    }
    spec.check_fits(universe.len())?;
    if spec.is_empty() {
        return Ok(Embedding::default());
    }
    let n = universe.len();
    let mut lengths = spec.lengths().to_vec();
    let slack = n - spec.total();
    if slack > lmax {
        lengths.push(slack);
    }
    trace.note("long.padding", if slack > lmax { slack } else { 0 });
    trace.note("long.unused", if slack > lmax { 0 } else { slack });

    let t = lengths.len();
    let m_prime = if opts.mode.is_strict() {
        (params.epsilon * n as f64).ceil() as usize
    } else {
        opts.constants.long_slack
    };
    let gamma_m = (opts.constants.long_gamma * n as f64).floor() as usize;
    let m = if opts.mode.is_strict() { gamma_m } else { gamma_m.max(4 * t + 2 * m_prime) };
    if 2 * m_prime + 4 * t > m {
        return Err(EmbedError::Infeasible(format!(
            "flexibility m = {m} cannot cover 2m' + 4t = {} closing vertices",
            2 * m_prime + 4 * t
        )));
    }
    trace.note("long.t", t);
    trace.note("long.m", m);
    trace.note("long.m_prime", m_prime);

    let mut absorber_opts = opts.absorber();
    let template = choose_template(m, &absorber_opts).map_err(EmbedError::absorber("template"))?;
    let r = 3 * m + template.edge_count();
    plan_segment_budget(&lengths, r, 0, m_prime)?;
    absorber_opts.template = TemplateChoice::Given(template);

    let run = LongRun {
        g,
        cfg: opts.paths(params),
    };
    let mut cycles = run.run(universe, &lengths, m, m_prime, params, &absorber_opts, trace)?;
    cycles.truncate(spec.len());
    finish(g, spec, Embedding { cycles })
}

/// Items dealt to rows in round-robin order, row `i` taking at most
/// `quota[i]`.
fn deal<T: Copy>(items: &[T], quota: &[usize]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = quota.iter().map(|&q| Vec::with_capacity(q)).collect();
    let mut row = 0;
    for &item in items {
        while out[row].len() >= quota[row] {
            row = (row + 1) % quota.len();
        }
        out[row].push(item);
        row = (row + 1) % quota.len();
    }
    out
}

/// One element of the phase-one chain: a single vertex, or a segment entered
/// at `s₀` and left at `s₁`.
#[derive(Clone, Copy)]
enum Element {
    Vertex(usize),
    Segment(usize),
}

struct LongRun<'a> {
    g: &'a Graph,
    cfg: PathConfig,
}

impl LongRun<'_> {
    fn connect(&self, pairs: Vec<(usize, usize)>, pool: &VertexSet, stage: &'static str) -> Result<Vec<Path>, EmbedError> {
        if pairs.is_empty() {
            return Ok(Vec::new());
        }
        let ends: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let delta = endpoint_delta(self.g, &ends, pool, self.cfg.p);
        let system = PairSystem::new(pairs).map_err(EmbedError::path(stage))?;
        connect_pairs(self.g, &system, pool, 3, delta, &self.cfg).map_err(EmbedError::path(stage))
    }

    #[allow(clippy::too_many_arguments)]
    fn run(
        &self,
        x: &VertexSet,
        lengths: &[usize],
        m: usize,
        m_prime: usize,
        params: &JumbledParams,
        absorber_opts: &crate::absorber::AbsorberOptions,
        trace: &mut Trace,
    ) -> Result<Vec<Vec<usize>>, EmbedError> {
        let g = self.g;
        let n = g.n();
        let p = self.cfg.p;
        let t = lengths.len();
        let (s, w) = trace
            .phase("long.absorber", |_| build_absorbing_structure(g, x, 4, m, params, absorber_opts))
            .map_err(EmbedError::absorber("absorbing structure"))?;
        let segments: Vec<Vec<usize>> = s.segments().map(|p| p.vertices().to_vec()).collect();
        let r = segments.len();
        trace.note("long.segments", r);
        let sv = s.vertices(n);
        let z1 = s.z1();
        let zp_size = m + 2 * m_prime + 4 * t;
        let zp = VertexSet::from_ids(n, z1[..zp_size].iter().copied());
        let z_rest = VertexSet::from_ids(n, z1[zp_size..].iter().copied());

        let mut outside = x.difference(&sv);
        outside.union_with(&z_rest);
        let cut = p * zp.len() as f64 / 2.0;
        let v0: Vec<usize> = outside.iter().filter(|&v| g.deg_into(v, &zp) as f64 <= cut).collect();
        let v0_set = VertexSet::from_ids(n, v0.iter().copied());
        trace.note("long.low_degree", v0.len());

        let budget = plan_segment_budget(lengths, r, v0.len(), m_prime)?;

        // phase 1
        let mut barred = w.union(&v0_set);
        barred.union_with(&sv);
        let ends: Vec<usize> = x.difference(&barred).iter().take(2 * t).collect();
        if ends.len() < 2 * t {
            return Err(EmbedError::Stage {
                stage: "phase 1",
                detail: format!("only {} free end vertices for {t} cycles", ends.len()),
            });
        }
        let seg_rows = deal(&(0..r).collect::<Vec<_>>(), &budget.rows.iter().map(|q| q[0]).collect::<Vec<_>>());
        let v0_rows = deal(&v0, &budget.rows.iter().map(|q| q[1]).collect::<Vec<_>>());
        let chains: Vec<Vec<Element>> = (0..t)
            .map(|i| {
                let mut c = vec![Element::Vertex(ends[2 * i])];
                c.extend(seg_rows[i].iter().map(|&h| Element::Segment(h)));
                c.extend(v0_rows[i].iter().map(|&v| Element::Vertex(v)));
                c.push(Element::Vertex(ends[2 * i + 1]));
                c
            })
            .collect();
        let head = |e: Element| match e {
            Element::Vertex(v) => v,
            Element::Segment(h) => segments[h][0],
        };
        let tail = |e: Element| match e {
            Element::Vertex(v) => v,
            Element::Segment(h) => segments[h][1],
        };
        let pairs1: Vec<(usize, usize)> = chains.iter().flat_map(|c| c.windows(2).map(|w| (tail(w[0]), head(w[1])))).collect();
        let pool1 = w.difference(&v0_set);
        trace.note("long.phase1_pairs", pairs1.len());
        let links1 = trace.phase("long.phase1", |_| self.connect(pairs1, &pool1, "phase 1"))?;

        let mut phase2 = outside.difference(&v0_set);
        for &v in &ends {
            phase2.remove(v);
        }
        for p in &links1 {
            for &v in p.inner() {
                phase2.remove(v);
            }
        }

        // phase 2
        let mut bulk = Vec::with_capacity(t);
        trace.phase("long.phase2", |_| -> Result<(), EmbedError> {
            for (i, &l) in lengths.iter().enumerate() {
                let [q1, q2, q3] = budget.rows[i];
                let len = l - 6 * q1 - 3 * q2 - 3 * q3 - 9;
                let path = greedy_long_path(g, &phase2, len, &self.cfg).map_err(EmbedError::path("phase 2"))?;
                for &v in path.vertices() {
                    phase2.remove(v);
                }
                bulk.push(path);
            }
            Ok(())
        })?;

        // phase 3: m' spare vertices, flexible ones first
        let mut spare: Vec<usize> = phase2.intersection(&z_rest).iter().collect();
        if spare.len() > m_prime {
            return Err(EmbedError::Stage {
                stage: "phase 3",
                detail: format!("{} flexible vertices outside Z' left uncovered, room for {m_prime}", spare.len()),
            });
        }
        spare.extend(phase2.difference(&z_rest).iter().take(m_prime - spare.len()));
        if spare.len() < m_prime {
            return Err(EmbedError::Stage {
                stage: "phase 3",
                detail: format!("{} spare vertices left, need {m_prime}", spare.len()),
            });
        }
        let leftover = phase2.len() - m_prime;
        let allowed = x.len() - lengths.iter().sum::<usize>();
        if leftover != allowed {
            return Err(EmbedError::Stage {
                stage: "phase 3",
                detail: format!("{leftover} vertices left after the greedy paths, expected {allowed}"),
            });
        }
        let spare_rows = deal(&spare, &budget.rows.iter().map(|q| q[2]).collect::<Vec<_>>());
        let mut pairs3 = Vec::new();
        for i in 0..t {
            let (x1, x2) = (ends[2 * i], ends[2 * i + 1]);
            let (x3, x4) = (bulk[i].first(), bulk[i].last());
            pairs3.push((x2, x3));
            let mut prev = x4;
            for &u in &spare_rows[i] {
                pairs3.push((prev, u));
                prev = u;
            }
            pairs3.push((prev, x1));
        }
        trace.note("long.phase3_pairs", pairs3.len());
        let links3 = trace.phase("long.phase3", |_| self.connect(pairs3, &zp, "phase 3"))?;

        let mut zfree = zp.clone();
        for p in &links3 {
            for &v in p.inner() {
                zfree.remove(v);
            }
        }
        let zbar: Vec<usize> = z1.iter().copied().filter(|&v| !zfree.contains(v)).collect();
        trace.note("long.absorbed", zbar.len());
        let hubs = s.assignment(&zbar).map_err(EmbedError::absorber("absorb"))?;

        // assembly: x1 ~> x2, x2 ~> x3, bulk, x4 ~> u's ~> x1
        let mut l1 = links1.into_iter();
        let mut l3 = links3.into_iter();
        let mut cycles = Vec::with_capacity(t);
        for (i, chain) in chains.iter().enumerate() {
            let mut c = Vec::with_capacity(lengths[i]);
            for (k, &e) in chain.iter().enumerate() {
                match e {
                    Element::Vertex(v) => c.push(v),
                    Element::Segment(h) => {
                        let seg = &segments[h];
                        c.extend([seg[0], hubs[h], seg[2], seg[1]]);
                    }
                }
                if k + 1 < chain.len() {
                    c.extend_from_slice(l1.next().expect("one link per gap").inner());
                }
            }
            c.extend_from_slice(l3.next().expect("x2 link").inner());
            c.extend_from_slice(bulk[i].vertices());
            for &u in &spare_rows[i] {
                c.extend_from_slice(l3.next().expect("spare link").inner());
                c.push(u);
            }
            c.extend_from_slice(l3.next().expect("closing link").inner());
            cycles.push(c);
        }
        Ok(cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dealing_respects_quotas_round_robin() {
        let rows = deal(&[0, 1, 2, 3, 4, 5], &[1, 3, 2]);
        assert_eq!(rows, vec![vec![0], vec![1, 3, 5], vec![2, 4]]);
    }

    #[test]
    fn short_length_is_rejected() {
        let g = Graph::complete(40);
        let spec = CycleFamilySpec::new(vec![12, 20]).unwrap();
        let params = JumbledParams::new(1.0, 0.0, 0.0, 1.0);
        let err = embed_long_cycles(&g, &VertexSet::full(40), &spec, &params, &EmbedOptions::practical(), &mut Trace::default())
            .unwrap_err();
        assert!(matches!(err, EmbedError::Infeasible(_)));
    }
}
