use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use twofactor::embed::{
    embed_long_cycles, embed_short_cycles, embed_two_factor, pad_spec, verify_embedding, CycleFamilySpec, Embedding,
    ExactTriangles, GreedyTriangles, Trace, TriangleProvider,
};
use twofactor::graph::{check_discrepancy, estimate_lambda, read_edge_list, sample_gnp, write_edge_list, PowerBudget};
use twofactor::partition::{degree_preserving_partition, PartitionOptions};
use twofactor::template::{build_random_template, build_template, Origin, Template, TemplateOptions, Verification, VerifyMode};
use twofactor::{Graph, JumbledParams, Mode, VertexSet};

use crate::config::{ProviderChoice, RunConfig};
use crate::error::CliError;
use crate::report::RunReport;
use crate::{Cli, Command, EmbedArgs};

pub fn run(cli: &Cli, report: &mut RunReport) -> Result<(), CliError> {
    let cfg = RunConfig::load(cli.config.as_deref(), Mode::Strict, cli.mode)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    let name = match &cli.command {
        Command::Gen { .. } => "gen",
        Command::Embed(_) => "embed",
        Command::EmbedShort(_) => "embed-short",
        Command::EmbedLong(_) => "embed-long",
        Command::Template { .. } => "template",
        Command::Certify { .. } => "certify",
        Command::Verify { .. } => "verify",
        Command::Partition { .. } => "partition",
    };
    report.push("command", name);
    report.push("mode", cfg.mode);
    report.push("seed", seed);
    let start = Instant::now();
    let result = match &cli.command {
        Command::Gen { n, p } => gen(cli.out.as_deref(), *n, *p, seed, report),
        Command::Embed(a) | Command::EmbedShort(a) | Command::EmbedLong(a) => {
            embed(cli.out.as_deref(), name, a, &cfg, seed, report)
        }
        Command::Template { m, p_r, random, trials } => {
            template(cli.out.as_deref(), *m, p_r.unwrap_or(cfg.constants.template_prime), *random, *trials, &cfg, seed, report)
        }
        Command::Certify { graph, p, trials } => certify(graph, *p, *trials, seed, report),
        Command::Verify { graph, spec, embedding } => verify(graph, spec, embedding, report),
        Command::Partition { graph, k, delta, p } => partition(cli.out.as_deref(), graph, *k, *delta, *p, &cfg, report),
    };
    report.time("time.total", start.elapsed().as_secs_f64());
    result
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

/// Writes to `out`, or stdout when there is none.
fn write_out(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    read_edge_list(open(path)?).map_err(|source| CliError::Graph {
        path: path.display().to_string(),
        source,
    })
}

fn load_spec(path: &Path) -> Result<CycleFamilySpec, CliError> {
    Ok(CycleFamilySpec::read(open(path)?)?)
}

fn density(g: &Graph) -> f64 {
    let n = g.n() as f64;
    if g.n() < 2 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n * (n - 1.0))
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

fn gen(out: Option<&Path>, n: usize, p: f64, seed: u64, report: &mut RunReport) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Parse(format!("p = {p} outside [0, 1]")));
    }
    let g = sample_gnp(n, p, seed);
    report.push("n", n);
    report.push("p", p);
    report.push("edges", g.edge_count());
    write_out(out, |w| write_edge_list(&g, w).map_err(std::io::Error::other))
}

fn embed(
    out: Option<&Path>,
    name: &str,
    args: &EmbedArgs,
    cfg: &RunConfig,
    seed: u64,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let spec = load_spec(&args.spec)?;
    let n = g.n();
    report.push("n", n);
    report.push("edges", g.edge_count());
    report.push("spec.cycles", spec.len());
    report.push("spec.total", spec.total());
    report.deviations(&cfg.constants);

    let p = args.p.or(cfg.p).unwrap_or_else(|| density(&g));
    let (lambda, source) = match args.lambda.or(cfg.lambda) {
        Some(l) => (l, "given"),
        None if cfg.mode.is_strict() => {
            let budget = PowerBudget {
                seed,
                ..PowerBudget::default()
            };
            let est = estimate_lambda(&g, p, budget).map_err(|e| CliError::Stage(format!("lambda estimate: {e}")))?;
            (est.value, "estimated")
        }
        None => (0.0, "unused"),
    };
    let params = JumbledParams::for_graph(&g, p, lambda).map_err(|e| CliError::Parse(e.to_string()))?;
    report.push("params.p", fmt(p));
    report.push("params.lambda", fmt(lambda));
    report.push("params.lambda_source", source);
    report.push("params.epsilon", fmt(params.epsilon));
    report.push("params.delta", fmt(params.delta));

    let mut opts = cfg.embed_options();
    opts.seed = seed;
    let provider_choice = match &args.provider {
        None => cfg.provider,
        Some(s) => match s.as_str() {
            "greedy" => ProviderChoice::Greedy,
            "exact" => ProviderChoice::Exact,
            "none" => ProviderChoice::None,
            other => return Err(CliError::Parse(format!("unknown provider {other:?}"))),
        },
    };
    let greedy = GreedyTriangles { seed, ..Default::default() };
    let provider: Option<&dyn TriangleProvider> = match provider_choice {
        ProviderChoice::Greedy => Some(&greedy),
        ProviderChoice::Exact => Some(&ExactTriangles),
        ProviderChoice::None => None,
    };

    let mut trace = Trace::default();
    let all = VertexSet::full(n);
    let result = match name {
        "embed" => pad_spec(&spec, n).and_then(|padded| {
            report.push("spec.padding_cycles", padded.len() - spec.len());
            embed_two_factor(&g, &padded, &params, &opts, provider, &mut trace).map(|mut e| {
                e.cycles.truncate(spec.len());
                e
            })
        }),
        "embed-short" => embed_short_cycles(&g, &all, &spec, &params, &opts, &mut trace),
        _ => embed_long_cycles(&g, &all, &spec, &params, &opts, &mut trace),
    };
    report.trace(&trace);
    let emb = result?;

    let verdict = verify_embedding(&g, &spec, &emb);
    report.push("verify", &verdict);
    if !verdict.passed() {
        return Err(CliError::Verification(verdict.to_string()));
    }
    write_out(out, |w| emb.write(w))?;
    if let Some(path) = out {
        let back = Embedding::read(open(path)?)?;
        let again = verify_embedding(&g, &spec, &back);
        report.push("verify.roundtrip", if again.passed() && back == emb { "pass" } else { "fail" });
        if !again.passed() || back != emb {
            return Err(CliError::Verification(format!("re-read of {} failed: {again}", path.display())));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn template(
    out: Option<&Path>,
    m: usize,
    p_r: u64,
    random: Option<usize>,
    trials: usize,
    cfg: &RunConfig,
    seed: u64,
    report: &mut RunReport,
) -> Result<(), CliError> {
    report.push("m", m);
    let verify = VerifyMode::Auto { trials };
    let t: Template = match random {
        Some(d) => {
            report.push("kind", "random");
            report.push("degree_target", d);
            build_random_template(m, d, seed, verify)?
        }
        None => {
            report.push("kind", "lps");
            report.push("p_R", p_r);
            let opts = TemplateOptions {
                mode: cfg.mode,
                verify,
                seed,
            };
            build_template(m, p_r, &opts)?
        }
    };
    report.push("edges", t.edge_count());
    report.push("max_degree", t.max_degree());
    match &t.origin {
        Origin::Lps { p_r, q, order, trimmed } => {
            report.push("origin", "lps");
            report.push("origin.q", q);
            report.push("origin.p_R", p_r);
            report.push("origin.order", order);
            report.push("origin.trimmed", format!("{} {}", trimmed.0, trimmed.1));
        }
        Origin::Random { seed, attempts } => {
            report.push("origin", "random");
            report.push("origin.seed", seed);
            report.push("origin.attempts", attempts);
        }
        Origin::Loaded => report.push("origin", "loaded"),
    }
    match &t.verification {
        Verification::Exhaustive { subsets } => {
            report.push("verification", "exhaustive");
            report.push("verification.subsets", subsets);
        }
        Verification::Sampled { random, targeted } => {
            report.push("verification", "sampled");
            report.push("verification.random", random);
            report.push("verification.targeted", targeted);
        }
        Verification::Unverified => report.push("verification", "none"),
    }
    write_out(out, |w| t.write(w).map_err(std::io::Error::other))
}

fn certify(graph: &Path, p: f64, trials: usize, seed: u64, report: &mut RunReport) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let n = g.n();
    report.push("n", n);
    report.push("edges", g.edge_count());
    report.push("p", p);
    let budget = PowerBudget {
        seed,
        ..PowerBudget::default()
    };
    let est = estimate_lambda(&g, p, budget).map_err(|e| CliError::Stage(format!("lambda estimate: {e}")))?;
    report.push("lambda.spectral", fmt(est.value));
    report.push("lambda.iterations", est.iterations);
    report.push("lambda.relative_change", format!("{:.3e}", est.relative_change));
    if p > 0.0 && n > 0 {
        report.push("params.epsilon", fmt(est.value / (p * p * n as f64)));
        report.push("params.delta", fmt(g.min_degree() as f64 / (p * n as f64)));
    }
    let params = JumbledParams::new(p, est.value, 0.0, 0.0);
    let d = check_discrepancy(&g, &params, trials, seed);
    report.push("discrepancy.trials", d.trials);
    report.push("discrepancy.max_ratio", fmt(d.max_ratio));
    report.push("discrepancy.worst_sizes", format!("{} {}", d.worst_sizes.0, d.worst_sizes.1));
    report.push("discrepancy.violations", d.violations);
    report.push("discrepancy.lower_bound_checked", d.lower_bound_checked);
    report.push("discrepancy.lower_bound_violations", d.lower_bound_violations);
    Ok(())
}

fn verify(graph: &Path, spec: &Path, embedding: &Path, report: &mut RunReport) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let spec = load_spec(spec)?;
    let emb = Embedding::read(open(embedding)?)?;
    let verdict = verify_embedding(&g, &spec, &emb);
    report.push("verify", &verdict);
    if verdict.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(verdict.to_string()))
    }
}

fn partition(
    out: Option<&Path>,
    graph: &Path,
    k: u32,
    delta: Option<f64>,
    p: Option<f64>,
    cfg: &RunConfig,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let g = load_graph(graph)?;
    let n = g.n();
    let p = p.unwrap_or_else(|| density(&g));
    let all = VertexSet::full(n);
    let delta = delta.unwrap_or_else(|| if p > 0.0 && n > 0 { g.min_degree() as f64 / (p * n as f64) } else { 0.0 });
    report.push("n", n);
    report.push("k", k);
    report.push("p", fmt(p));
    report.push("delta", fmt(delta));
    let opts = PartitionOptions {
        mode: cfg.mode,
        factor: cfg.constants.partition_factor,
    };
    let split = degree_preserving_partition(&g, &all, &all, k, delta, p, &opts)?;
    let sizes: Vec<String> = split.parts.iter().map(|s| s.len().to_string()).collect();
    report.push("parts", split.parts.len());
    report.push("part_sizes", sizes.join(" "));
    report.push("near_equal", split.near_equal);
    report.push("min_margin", fmt(split.min_margin));
    write_out(out, |w| {
        for part in &split.parts {
            let ids: Vec<String> = part.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", ids.join(" "))?;
        }
        Ok(())
    })
}
