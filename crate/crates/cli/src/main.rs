use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use racg::algebra::{condition_nest_pairs, link_families, verify_condition_nest, verify_inner_product};
use racg::classify::{classify_with_witnesses, ClassificationRecord};
use racg::growth::{growth_series, growth_type, GrowthKind};
use racg::parabolic::{conjugate_parabolic_intersection, lcr_decompose, verify_combinatorics, verify_intersection, verify_lcr_unique};
use racg::word::DEFAULT_BALL_CAP;
use racg::{CoxeterGroup, Error, Exec, Report, SimpleGraph, VertexSet};

const GRAMMAR: &str = "\
GRAPH FILES
  vertices: a b c        first non-comment line, names separated by spaces
  edge: a b              one undirected edge per line
  order: c a b           optional; generator order used for ShortLex
  # comment              ignored, as are blank lines
  Names are nonempty, contain no whitespace or commas, and may not be `e`.
  Without an `order:` line the vertices are ordered by name.

WORDS
  Whitespace-separated vertex names, e.g. \"a b a c\". `e` is the identity.

VERTEX SETS
  Comma-separated names, e.g. --g1 a,b. The empty string is the empty set.

EXIT STATUS
  0 success, 1 verification mismatch (JSON records on stdout), 2 usage or input error.";

#[derive(Parser)]
#[command(name = "racg", version, about = "Right-angled Coxeter groups: normal forms, special subgroups, growth and classification", after_help = GRAMMAR)]
struct Cli {
    /// Worker threads for verifier sweeps (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Largest number of elements any ball enumeration may hold.
    #[arg(long, global = true, env = "RACG_BALL_CAP", default_value_t = DEFAULT_BALL_CAP)]
    ball_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amenability, ℤ×𝔽₂ containment, strong solidity, hyperbolicity and decompositions.
    Classify {
        graph: PathBuf,
        /// Emit JSON, including certified witnesses.
        #[arg(long)]
        json: bool,
    },
    /// Certified free pair, ℤ×𝔽₂ triple and special subgroup.
    Witness {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// ShortLex normal form of a word.
    Nf { graph: PathBuf, word: String },
    /// Left/center/right decomposition with respect to two vertex sets.
    Decompose {
        graph: PathBuf,
        word: String,
        #[arg(long, value_name = "SET")]
        g1: String,
        #[arg(long, value_name = "SET")]
        g2: String,
    },
    /// `W_Γ₁ ∩ g W_Γ₁ g⁻¹ = h W_core h⁻¹` for the given word `g`.
    Intersect {
        graph: PathBuf,
        word: String,
        #[arg(long, value_name = "SET")]
        g1: String,
    },
    /// Growth series, its coefficients, and the growth type.
    Growth {
        graph: PathBuf,
        /// Number of coefficients after the constant term.
        #[arg(short = 'n', default_value_t = 30)]
        n: usize,
        /// Compare coefficients with breadth-first sphere counts up to this length.
        #[arg(long, value_name = "K")]
        check_bfs: Option<usize>,
    },
    /// Sphere sizes of the ball of the given radius.
    Ball {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Also list every element.
        #[arg(long)]
        list: bool,
    },
    /// Exhaustive verifier sweeps over a graph file or a directory of `.graph` files.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Combinatorics,
    ConditionNest,
    InnerProduct,
    Intersection,
    LcrUnique,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    check: Check,
    /// Graph file, or directory whose `.graph` files are all checked.
    target: PathBuf,
    /// Word radius (defaults: combinatorics 4, condition-nest 4, inner-product 3,
    /// intersection 4, lcr-unique 5).
    #[arg(long)]
    radius: Option<usize>,
    /// condition-nest: radius for u and v (default: radius - 1).
    #[arg(long)]
    uv_radius: Option<usize>,
    /// inner-product: number of subgraphs Γ₁..Γₙ taken as vertex links.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// inner-product: radius for the tuple entries.
    #[arg(long, default_value_t = 2)]
    tuple_radius: usize,
    /// inner-product: explicit subgraph, repeat once per Γᵢ (overrides --n).
    #[arg(long, value_name = "SET")]
    gamma: Vec<String>,
}

/// Input problems: exit status 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &Path) -> anyhow::Result<SimpleGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    SimpleGraph::parse(&text).with_context(|| format!("{}", path.display()))
}

fn load_group(path: &Path, cap: usize) -> anyhow::Result<CoxeterGroup> {
    Ok(CoxeterGroup::new(load_graph(path)?).with_ball_cap(cap))
}

/// Canonical JSON: object keys sorted, no insignificant whitespace.
fn canonical_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let v: Value = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}

fn run(cli: &Cli) -> Outcome {
    let exec = Exec::with_workers(cli.workers);
    let cap = cli.ball_cap;
    if cap == 0 {
        return Err(anyhow::anyhow!("ball cap must be positive").into());
    }
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Classify { graph, json } => {
            let group = load_group(graph, cap)?;
            let c = classify_with_witnesses(&group)?;
            let record = c.to_record(&group);
            if *json {
                writeln!(out, "{}", canonical_json(&record)?)?;
            } else {
                print_classification(&mut out, &group, &record)?;
            }
        }
        Command::Witness { graph, json } => {
            let group = load_group(graph, cap)?;
            let record = classify_with_witnesses(&group)?.to_record(&group);
            let w = record.witnesses.expect("witnesses requested");
            if *json {
                writeln!(out, "{}", canonical_json(&w)?)?;
            } else {
                match &w.f2_pair {
                    Some(p) => writeln!(out, "f2_pair: x = {}, y = {} (free to depth {})", p.x, p.y, p.depth)?,
                    None => writeln!(out, "f2_pair: none (amenable)")?,
                }
                match &w.zxf2_triple {
                    Some(t) => writeln!(out, "zxF2_triple: z = {}, x = {}, y = {}", t.z, t.x, t.y)?,
                    None => writeln!(out, "zxF2_triple: none (strongly solid)")?,
                }
                match &w.pattern_embedding {
                    Some(e) => {
                        let map: Vec<String> = e.vertices.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        writeln!(out, "pattern_embedding: {} {}", e.pattern, map.join(" "))?
                    }
                    None => writeln!(out, "pattern_embedding: none")?,
                }
                match &w.special_subgroup {
                    Some(s) => writeln!(out, "special_subgroup: {{{}}} {}", s.vertices.join(","), s.shape.as_str())?,
                    None => writeln!(out, "special_subgroup: none")?,
                }
            }
        }
        Command::Nf { graph, word } => {
            let group = load_group(graph, cap)?;
            let x = group.element(word)?;
            writeln!(out, "{}", group.format(&x))?;
        }
        Command::Decompose { graph, word, g1, g2 } => {
            let group = load_group(graph, cap)?;
            let x = group.element(word)?;
            let (s1, s2) = (group.graph().parse_vertex_list(g1)?, group.graph().parse_vertex_list(g2)?);
            let d = lcr_decompose(&group, &x, s1, s2);
            writeln!(out, "left: {}", group.format(&d.left))?;
            writeln!(out, "center: {}", group.format(&d.center))?;
            writeln!(out, "right: {}", group.format(&d.right))?;
        }
        Command::Intersect { graph, word, g1 } => {
            let group = load_group(graph, cap)?;
            let g = group.element(word)?;
            let s1 = group.graph().parse_vertex_list(g1)?;
            let pi = conjugate_parabolic_intersection(&group, &g, s1);
            writeln!(out, "h: {}", group.format(&pi.conjugator))?;
            writeln!(out, "core: {}", group.graph().format_set(pi.core))?;
            writeln!(out, "d: {}", group.format(&pi.min_rep))?;
        }
        Command::Growth { graph, n, check_bfs } => return growth(&mut out, graph, *n, *check_bfs, cap, &exec),
        Command::Ball { graph, radius, list } => {
            let group = load_group(graph, cap)?;
            let ball = group.ball_with(*radius, cap, &exec)?;
            for (k, sphere) in ball.spheres().iter().enumerate() {
                writeln!(out, "{k}\t{}", sphere.len())?;
            }
            writeln!(out, "total\t{}", ball.len())?;
            if *list {
                for x in ball.elements() {
                    writeln!(out, "{}", group.format(x))?;
                }
            }
        }
        Command::Verify(args) => return verify(&mut out, args, cap, &exec),
    }
    Ok(true)
}

fn print_classification(out: &mut impl Write, group: &CoxeterGroup, r: &ClassificationRecord) -> io::Result<()> {
    let set = |v: &[String]| format!("{{{}}}", v.join(","));
    let g = group.graph();
    writeln!(out, "vertices: {} ({} edges)", r.vertices.join(" "), g.edge_count())?;
    writeln!(out, "amenable: {}", r.amenable)?;
    writeln!(out, "contains_F2: {}", r.contains_f2)?;
    writeln!(out, "strongly_solid: {}", r.strongly_solid)?;
    writeln!(out, "contains_ZxF2: {}", r.contains_zxf2)?;
    writeln!(out, "hyperbolic: {}", r.hyperbolic)?;
    writeln!(out, "center_clique: {}", set(&r.center_clique))?;
    writeln!(out, "product_split: {} x {}", set(&r.product_split.center), set(&r.product_split.rest))?;
    writeln!(out, "afp_decompositions:")?;
    for d in &r.afp_decompositions {
        writeln!(out, "  {}: {} *_{} {}", d.vertex, set(&d.gamma1), set(&d.amalgam), set(&d.gamma2))?;
    }
    Ok(())
}

fn growth(out: &mut impl Write, path: &Path, n: usize, check_bfs: Option<usize>, cap: usize, exec: &Exec) -> Outcome {
    let group = load_group(path, cap)?;
    let series = growth_series(group.graph());
    let list = |p: &racg::growth::IntPolynomial| p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    writeln!(out, "numerator: [{}]", list(series.numerator()))?;
    writeln!(out, "denominator: [{}]", list(series.denominator()))?;
    writeln!(out, "series: {series}")?;
    let coeffs = series.coefficients(n)?;
    for (k, c) in coeffs.iter().enumerate() {
        writeln!(out, "{k}\t{c}")?;
    }
    let mut ok = true;
    if let Some(k) = check_bfs {
        let spheres = group.sphere_sizes_with(k, cap, exec)?;
        let expected = series.coefficients(k)?;
        for (i, (s, c)) in spheres.iter().zip(&expected).enumerate() {
            if c.to_string() != s.to_string() {
                ok = false;
                let rec = serde_json::json!({"check": "growth-bfs", "k": i, "series": c.to_string(), "bfs": s});
                writeln!(out, "{}", canonical_json(&rec)?)?;
            }
        }
        if ok {
            writeln!(out, "bfs check: coefficients 0..={k} agree")?;
        }
    }
    if n >= racg::growth::MIN_PROBE_DEPTH {
        match growth_type(group.graph(), n) {
            Ok(r) => {
                let kind = |k: GrowthKind| if k == GrowthKind::Polynomial { "polynomial" } else { "exponential" };
                writeln!(
                    out,
                    "growth: {} (rate estimate {:.4}, c_{n}^(1/{n}) = {:.4}, graph criterion: {})",
                    kind(r.kind),
                    r.rate_estimate,
                    r.nth_root,
                    kind(r.graph_prediction)
                )?;
            }
            Err(Error::GrowthDisagreement(msg)) => {
                let rec = serde_json::json!({"check": "growth-type", "message": msg});
                writeln!(out, "{}", canonical_json(&rec)?)?;
                ok = false;
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        writeln!(out, "growth: not estimated (needs -n {} or more)", racg::growth::MIN_PROBE_DEPTH)?;
    }
    Ok(ok)
}

fn graph_files(target: &Path) -> anyhow::Result<Vec<(String, PathBuf)>> {
    let stem = |p: &Path| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if target.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(target)
            .with_context(|| format!("cannot read {}", target.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "graph"))
            .collect();
        files.sort();
        if files.is_empty() {
            bail!("no .graph files in {}", target.display());
        }
        Ok(files.into_iter().map(|p| (stem(&p), p)).collect())
    } else {
        Ok(vec![(stem(target), target.to_path_buf())])
    }
}

#[derive(Serialize)]
struct MismatchLine<'a> {
    graph: &'a str,
    check: &'a str,
    fields: &'a std::collections::BTreeMap<String, String>,
}

fn run_check(group: &CoxeterGroup, check: Check, args: &VerifyArgs, exec: &Exec) -> racg::Result<Report> {
    let radius = |default: usize| args.radius.unwrap_or(default);
    match check {
        Check::Combinatorics => verify_combinatorics(group, radius(4), exec),
        Check::ConditionNest => {
            let r = radius(4);
            let uv = args.uv_radius.unwrap_or(r.saturating_sub(1));
            verify_condition_nest(group, &condition_nest_pairs(group), uv, r, exec)
        }
        Check::InnerProduct => {
            let families: Vec<Vec<VertexSet>> = if args.gamma.is_empty() {
                link_families(group, args.n)
            } else {
                let sets = args.gamma.iter().map(|s| group.graph().parse_vertex_list(s)).collect::<racg::Result<_>>()?;
                vec![sets]
            };
            let mut report = Report::new("inner-product");
            if families.is_empty() {
                report.skipped += 1;
            }
            for fam in &families {
                match verify_inner_product(group, fam, args.tuple_radius, radius(3), exec) {
                    Ok(r) => report.merge(r),
                    Err(Error::Precondition(_)) if args.gamma.is_empty() => report.skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(report)
        }
        Check::Intersection => verify_intersection(group, radius(4), exec),
        Check::LcrUnique => verify_lcr_unique(group, radius(5), exec),
        Check::All => unreachable!("expanded by the caller"),
    }
}

fn verify(out: &mut impl Write, args: &VerifyArgs, cap: usize, exec: &Exec) -> Outcome {
    let checks: Vec<Check> = if args.check == Check::All {
        vec![Check::Combinatorics, Check::ConditionNest, Check::InnerProduct, Check::Intersection, Check::LcrUnique]
    } else {
        vec![args.check]
    };
    let mut summary = Vec::new();
    let mut ok = true;
    for (name, path) in graph_files(&args.target)? {
        let group = load_group(&path, cap)?;
        for &check in &checks {
            let report = run_check(&group, check, args, exec)?;
            for m in &report.mismatches {
                let line = MismatchLine { graph: &name, check: &m.check, fields: &m.fields };
                writeln!(out, "{}", canonical_json(&line)?)?;
            }
            ok &= report.passed();
            summary.push((name.clone(), report));
        }
    }
    let mut err = io::stderr().lock();
    writeln!(err, "{:<16} {:<15} {:>12} {:>8} {:>10}", "graph", "check", "cases", "skipped", "mismatches")?;
    for (name, r) in &summary {
        writeln!(err, "{:<16} {:<15} {:>12} {:>8} {:>10}", name, r.check, r.cases, r.skipped, r.mismatches.len())?;
    }
    Ok(ok)
}
