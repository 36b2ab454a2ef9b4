//! Composition of the three families into one 2-factor.

use super::{
    embed_long_cycles, embed_short_cycles, finish, inner_delta, CycleFamilySpec, EmbedError, EmbedOptions, Embedding, Trace,
    TriangleProvider,
};
use crate::config::JumbledParams;
use crate::graph::{Graph, VertexSet};
use crate::partition::degree_preserving_partition;

/// Parts of the degree-preserving split used to place the families.
const PARTS_LOG2: u32 = 3;

/// Spec indices of triangles, short cycles (`[4, L]`) and long cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySplit {
    pub triangles: Vec<usize>,
    pub short: Vec<usize>,
    pub long: Vec<usize>,
}

impl FamilySplit {
    pub fn new(spec: &CycleFamilySpec, short_max: usize) -> Self {
        let mut s = FamilySplit {
            triangles: Vec::new(),
            short: Vec::new(),
            long: Vec::new(),
        };
        for (i, &l) in spec.lengths().iter().enumerate() {
            match l {
                3 => s.triangles.push(i),
                l if l <= short_max => s.short.push(i),
                _ => s.long.push(i),
            }
        }
        s
    }

    /// Vertices `(n₁, n₂, n₃)` of the three families.
    pub fn sizes(&self, spec: &CycleFamilySpec) -> [usize; 3] {
        let sum = |ix: &[usize]| ix.iter().map(|&i| spec.lengths()[i]).sum();
        [sum(&self.triangles), sum(&self.short), sum(&self.long)]
    }

    /// Which of the three covering cases holds first: triangles on at least
    /// half the vertices, short cycles on a quarter, long cycles on a quarter.
    pub fn case(&self, spec: &CycleFamilySpec) -> &'static str {
        let n = spec.total();
        let [n1, n2, n3] = self.sizes(spec);
        if 2 * n1 >= n {
            "triangles"
        } else if 4 * n2 >= n {
            "short"
        } else if 4 * n3 >= n {
            "long"
        } else {
            unreachable!("n1 + n2 + n3 = n forces one case")
        }
    }
}

fn sub_spec(spec: &CycleFamilySpec, ix: &[usize]) -> CycleFamilySpec {
    CycleFamilySpec {
        lengths: ix.iter().map(|&i| spec.lengths()[i]).collect(),
    }
}

/// Embeds a spec covering all of `G`.
///
/// Triangles, short and long cycles are placed separately. `V` is split into
/// eight parts by degree; the triangles reserve the first `⌊8n₁/n⌋` parts,
/// the smaller of the short and long families is embedded into enough parts
/// from the other end, the larger one into everything outside the
/// reservation still free, and the triangle provider covers what remains.
/// Triangles the rounded-down reservation cannot hold are picked directly
/// from the middle parts first.
pub fn embed_two_factor(
    g: &Graph,
    spec: &CycleFamilySpec,
    params: &JumbledParams,
    opts: &EmbedOptions,
    provider: Option<&dyn TriangleProvider>,
    trace: &mut Trace,
) -> Result<Embedding, EmbedError> {
    opts.gate()?;
    let n = g.n();
    if spec.total() != n {
        return Err(EmbedError::Infeasible(format!("spec covers {} vertices, the graph has {n}", spec.total())));
    }
    let split = FamilySplit::new(spec, opts.constants.short_max);
    let [n1, n2, n3] = split.sizes(spec);
    if n1 > 0 && provider.is_none() {
        return Err(EmbedError::Capability(format!(
            "spec has {} triangles but no triangle provider is configured",
            split.triangles.len()
        )));
    }
    trace.note("two_factor.case", split.case(spec));
    trace.note("two_factor.sizes", format!("{n1} {n2} {n3}"));

    let mut cycles: Vec<Vec<usize>> = vec![Vec::new(); spec.len()];
    let mut used = VertexSet::empty(n);
    let all = VertexSet::full(n);

    let mut families: Vec<(&'static str, &[usize], usize)> = Vec::new();
    if n2 > 0 {
        families.push(("short", &split.short, n2));
    }
    if n3 > 0 {
        families.push(("long", &split.long, n3));
    }
    families.sort_by_key(|f| f.2);

    let mut topped: Vec<[usize; 3]> = Vec::new();
    let (reserve, parts) = if families.is_empty() || n1 == 0 && families.len() == 1 {
        (VertexSet::empty(n), Vec::new())
    } else {
        let delta = inner_delta(g, &all, params.p);
        let split = trace
            .phase("two_factor.partition", |_| {
                degree_preserving_partition(g, &all, &all, PARTS_LOG2, delta, params.p, &opts.partition())
            })
            .map_err(EmbedError::partition("family split"))?;
        let s = split.parts.len();
        let whole = n1 * s / n;
        let mut reserve = VertexSet::empty(n);
        for part in &split.parts[..whole] {
            reserve.union_with(part);
        }
        // the parts round down; the shortfall is taken as triangles now, so
        // the provider never sees an arbitrary leftover without a factor
        let mut pool = Vec::new();
        for part in &split.parts[whole..] {
            pool.extend(part.iter());
        }
        let found = disjoint_triangles(g, &pool, &reserve, n1.saturating_sub(reserve.len()) / 3);
        for &v in found.iter().flatten() {
            reserve.insert(v);
        }
        topped = found;
        (reserve, split.parts)
    };
    trace.note("two_factor.reserved", reserve.len());
    trace.note("two_factor.reserved_triangles", topped.len());

    for (k, &(name, ix, size)) in families.iter().enumerate() {
        let universe = if k == 0 && families.len() == 2 {
            let mut u = VertexSet::empty(n);
            for part in parts.iter().rev() {
                if u.len() >= size {
                    break;
                }
                u.union_with(&part.difference(&reserve));
            }
            u
        } else {
            all.difference(&reserve).difference(&used)
        };
        let sub = sub_spec(spec, ix);
        trace.note(format!("two_factor.{name}_universe"), universe.len());
        let emb = trace.phase(&format!("two_factor.{name}"), |tr| match name {
            "short" => embed_short_cycles(g, &universe, &sub, params, opts, tr),
            _ => embed_long_cycles(g, &universe, &sub, params, opts, tr),
        })?;
        for (&i, c) in ix.iter().zip(emb.cycles) {
            for &v in &c {
                used.insert(v);
            }
            cycles[i] = c;
        }
    }

    if let Some(provider) = provider.filter(|_| n1 > 0) {
        let mut rest = all.difference(&used);
        for t in &topped {
            for &v in t {
                rest.remove(v);
            }
        }
        let need = split.triangles.len() - topped.len();
        let mut tri = Vec::new();
        if need > 0 {
            trace.note("two_factor.triangle_provider", provider.name());
            tri = trace.phase("two_factor.triangles", |_| provider.triangle_factor(g, &rest))?;
        }
        if tri.len() != need {
            return Err(EmbedError::Stage {
                stage: "triangles",
                detail: format!("provider returned {} triangles, need {need}", tri.len()),
            });
        }
        for (&i, t) in split.triangles.iter().zip(topped.into_iter().chain(tri)) {
            cycles[i] = t.to_vec();
        }
    }
    finish(g, spec, Embedding { cycles })
}

/// Up to `count` vertex-disjoint triangles through the vertices of `order`,
/// first vertex first, avoiding `taken`.
fn disjoint_triangles(g: &Graph, order: &[usize], taken: &VertexSet, count: usize) -> Vec<[usize; 3]> {
    let mut free = VertexSet::from_ids(g.n(), order.iter().copied()).difference(taken);
    let mut out = Vec::new();
    for &v in order {
        if out.len() == count {
            break;
        }
        if !free.contains(v) {
            continue;
        }
        let nv = g.neighbors_in(v, &free).to_vec();
        let hit = nv.iter().find_map(|&u| nv.iter().find(|&&w| w > u && g.has_edge(u, w)).map(|&w| [v, u, w]));
        if let Some(t) = hit {
            for x in t {
                free.remove(x);
            }
            out.push(t);
        }
    }
    out
}

/// Extends `spec` to cover exactly `n` vertices with 4-cycles and one cycle
/// of length 3 to 7; a remainder of one or two vertices cannot be covered.
pub fn pad_spec(spec: &CycleFamilySpec, n: usize) -> Result<CycleFamilySpec, EmbedError> {
    spec.check_fits(n)?;
    let d = n - spec.total();
    let mut lengths = spec.lengths().to_vec();
    match d {
        0 => {}
        1 | 2 => {
            return Err(EmbedError::Infeasible(format!("{d} uncovered vertices cannot form a cycle")));
        }
        3 => lengths.push(3),
        _ => {
            lengths.extend(std::iter::repeat_n(4, d / 4 - 1));
            lengths.push(4 + d % 4);
        }
    }
    Ok(CycleFamilySpec { lengths })
}
