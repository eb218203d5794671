//! `bkh`: counts solutions and rainbow-free colorings of generalized Sidon
//! equations on grids and writes a JSON report.

use bkh_core::cache::Cache;
use bkh_core::coloring::{count_deviating, count_rainbow_free};
use bkh_core::constructions::{
    build_corner_sets, corner_lower_bound_check, extremal_scan, forcing_property_check, odd_coordinate_set,
    shifted_subgrid, solution_free_ratio_set, DEFAULT_SEED,
};
use bkh_core::hypergraph::{build_hypergraph, deltaj_bound_check, hypothesis_check, container_parameters};
use bkh_core::report::{self, Report};
use bkh_core::solutions::{count_solutions, count_through_point, CountOptions};
use bkh_core::template::{
    classify_template, container_conclusions_check, count_rainbow_subtemplates, count_template_colorings, Template,
};
use bkh_core::{verify, Ambient, Budget, EquationSpec, Error, Point, PointSet, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "bkh", version, about = "Exact solution and rainbow-free coloring counts for generalized Sidon equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solution sets inside A (the whole grid unless --set is given).
    CountSolutions {
        #[command(flatten)]
        common: Common,
        /// Also compute f_A(v) for this point, e.g. "3" or "(1,4)".
        #[arg(long)]
        through: Option<String>,
    },
    /// Count r-colorings of A without a rainbow solution.
    CountColorings {
        #[command(flatten)]
        common: Common,
        /// Also count colorings using a color outside this (kh-1)-set, e.g. "1,2,3".
        #[arg(long)]
        deviate: Option<String>,
    },
    /// Edge count, co-degrees and parameter checks of the rainbow hypergraph.
    HypergraphStats {
        #[command(flatten)]
        common: Common,
    },
    /// Classify templates and check container conclusions.
    TemplateCheck {
        #[command(flatten)]
        common: Common,
        /// Template file with lines "rank: {c1,c2,...}"; repeatable. Defaults to the full template.
        #[arg(long = "template")]
        templates: Vec<PathBuf>,
        /// Templates that the collection must cover; repeatable.
        #[arg(long = "cover")]
        cover: Vec<PathBuf>,
    },
    /// Build one of the explicit constructions and check its properties.
    Constructions {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Corner)]
        kind: Kind,
        /// Corner for --kind corner, anchor point for --kind shifted.
        #[arg(long)]
        v: Option<String>,
        /// Forcing-property samples for --kind corner.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also compare f(v) with the product bound (exact count; small n only).
        #[arg(long)]
        lower_bound: bool,
    },
    /// g_r(A) for every subset A of the box, with the ranking.
    ExtremalScan {
        #[command(flatten)]
        common: Common,
        /// Count every subset instead of one per reflection pair.
        #[arg(long)]
        no_dedup: bool,
    },
    /// Run the acceptance suite.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Preset::Desk)]
        preset: Preset,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000_000)]
        budget_colorings: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget_buckets: u64,
        /// Only run these criteria (1-11); repeatable.
        #[arg(long = "only")]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Corner,
    Ratio,
    Odd,
    Shifted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Desk,
}

#[derive(Clone, Copy, ValueEnum)]
enum AmbientArg {
    Box,
    Torus,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = AmbientArg::Box)]
    ambient: AmbientArg,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    n: u32,
    /// Number of groups (with --h).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Group size (with --k).
    #[arg(long, default_value_t = 2)]
    h: usize,
    /// Unequal group sizes, e.g. "1,2"; overrides --k/--h.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<usize>>,
    #[arg(long, default_value_t = 4)]
    r: usize,
    /// Point set file: one tuple per line, or the run-length form "<len>:<runs>".
    #[arg(long)]
    set: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bulk rows (solutions, scan rows) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10_000_000)]
    budget_colorings: u64,
    #[arg(long, default_value_t = 1_000_000)]
    budget_buckets: u64,
    /// Add worker count and elapsed time to the report.
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn spec(&self) -> Result<EquationSpec> {
        let ambient = match self.ambient {
            AmbientArg::Box => Ambient::Box,
            AmbientArg::Torus => Ambient::Torus,
        };
        let groups = self.groups.clone().unwrap_or_else(|| vec![self.h; self.k]);
        EquationSpec::mixed(ambient, self.d, self.n, groups, self.r)
    }

    fn budget(&self) -> Budget {
        Budget::new(self.budget_buckets, self.budget_colorings)
    }

    fn point_set(&self, spec: &EquationSpec) -> Result<PointSet> {
        let grid = spec.grid()?;
        match &self.set {
            None => Ok(PointSet::full(grid)),
            Some(path) => {
                let text = fs::read_to_string(path)?;
                let body: String = text
                    .lines()
                    .filter(|l| !l.trim().starts_with('#'))
                    .collect::<Vec<_>>()
                    .join("\n");
                let first = body.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
                if first.contains(':') {
                    PointSet::from_rle(grid, &body)
                } else {
                    PointSet::from_tuples(grid, &body)
                }
            }
        }
    }

    fn config(&self, spec: &EquationSpec, a: &PointSet) -> Value {
        json!({
            "spec": report::spec(spec),
            "set": self.set.as_ref().map(|p| p.display().to_string()),
            "set_size": a.len(),
            "set_digest": a.digest(),
            "budget_buckets": self.budget_buckets,
            "budget_colorings": self.budget_colorings,
        })
    }
}

fn parse_point(text: &str) -> Result<Point> {
    text.parse()
}

fn parse_colors(text: &str) -> Result<Vec<u8>> {
    text.split(',')
        .map(|c| c.trim().parse::<u8>().map_err(|e| Error::Parse(format!("bad color {c:?}: {e}"))))
        .collect()
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Domain("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))
}

/// Runs `body` on the requested pool and writes its report.
fn run_common(command: &str, common: &Common, body: impl FnOnce(&EquationSpec, &PointSet, &mut Report) -> Result<()> + Send) -> Result<()> {
    let start = Instant::now();
    let spec = common.spec()?;
    let a = common.point_set(&spec)?;
    let pool = pool(common.workers)?;
    let mut rep = Report::new(command, common.config(&spec, &a), common.seed);
    pool.install(|| body(&spec, &a, &mut rep))?;
    if common.timings {
        rep.runtime = Some(report::Runtime {
            workers: pool.current_num_threads(),
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    write_out(common.out.as_ref(), &rep.to_json())
}

fn count_solutions_cmd(common: &Common, through: Option<&str>) -> Result<()> {
    run_common("count-solutions", common, |spec, a, rep| {
        let budget = common.budget();
        let cached = match spec.uniform_h() {
            Some(_) => Some(Cache::from_env().multiplicities(a, spec, &budget)?.0),
            None => None,
        };
        let opts = CountOptions {
            budget,
            materialize: common.csv.is_some(),
            multiplicities: cached.as_ref(),
        };
        let census = count_solutions(a, spec, &opts)?;
        rep.push("count_solutions", "solution sets of the equation in A", report::solution_census(&census));
        if let Some(sols) = &census.solutions {
            let grid = spec.grid()?;
            let mut csv = String::from("points,witness\n");
            for s in sols {
                let pts: Vec<String> = s.points.iter().map(|&r| grid.unrank(r).to_string()).collect();
                csv.push_str(&format!("\"{}\",{}\n", pts.join(" "), s.witness_string()));
            }
            write_out(common.csv.as_ref(), &csv)?;
        }
        if let Some(v) = through {
            let v = parse_point(v)?;
            let tp = count_through_point(a, &v, spec, &budget, false)?;
            rep.push(
                "count_through_point",
                "solutions through a fixed point in the first group",
                json!({ "v": v.to_string(), "count": report::uint(tp.count) }),
            );
        }
        Ok(())
    })
}

fn count_colorings_cmd(common: &Common, deviate: Option<&str>) -> Result<()> {
    run_common("count-colorings", common, |spec, a, rep| {
        let budget = common.budget();
        let sols = count_solutions(a, spec, &CountOptions::materialized(budget))?
            .solutions
            .unwrap_or_default();
        let census = count_rainbow_free(a, spec, Some(&sols), &budget)?;
        rep.push("count_rainbow_free", "r-colorings of A with no rainbow solution", report::coloring_census(&census));
        if let Some(c) = deviate {
            let colors = parse_colors(c)?;
            let dev = count_deviating(a, spec, &colors, Some(&sols), &budget)?;
            rep.push("count_deviating", "rainbow-free colorings leaving a (kh-1)-color set", report::deviation_census(&dev));
        }
        Ok(())
    })
}

fn hypergraph_cmd(common: &Common) -> Result<()> {
    run_common("hypergraph-stats", common, |spec, a, rep| {
        let budget = common.budget();
        let hg = build_hypergraph(a, spec, None, &budget)?;
        let deltas = hg.codegrees(&budget)?;
        rep.push("build_hypergraph", "rainbow hypergraph on A x [r]", report::hypergraph(&hg, &deltas));
        if spec.uniform_h().is_some() {
            rep.push("deltaj_bound_check", "pre-asymptotic co-degree bounds", report::delta_bounds(&deltaj_bound_check(&hg, &deltas)?));
            if spec.n >= 2 {
                rep.push("container_parameters", "epsilon and tau of the container step", report::parameters(&container_parameters(spec)?));
                let hyp = match hypothesis_check(&hg, &deltas) {
                    Ok(h) => report::hypothesis(&h),
                    Err(Error::Domain(m)) => json!({ "undefined": m }),
                    Err(e) => return Err(e),
                };
                rep.push("hypothesis_check", "co-degree function against its cap", hyp);
            }
        }
        Ok(())
    })
}

fn template_cmd(common: &Common, templates: &[PathBuf], cover: &[PathBuf]) -> Result<()> {
    run_common("template-check", common, |spec, a, rep| {
        let budget = common.budget();
        let sols = count_solutions(a, spec, &CountOptions::materialized(budget))?
            .solutions
            .unwrap_or_default();
        let load = |p: &PathBuf| -> Result<Template> { Template::from_text(a, spec.r, &fs::read_to_string(p)?) };
        let collection: Vec<Template> = if templates.is_empty() {
            vec![Template::full(spec.r, a.len())?]
        } else {
            templates.iter().map(load).collect::<Result<_>>()?
        };
        for (i, t) in collection.iter().enumerate() {
            let mut v = json!({
                "index": i,
                "rainbow_subtemplates": report::uint(count_rainbow_subtemplates(t, a, &sols)?),
                "colorings": report::uint(count_template_colorings(t, a, &sols, &budget)?),
            });
            if spec.uniform_h().is_some() && spec.n >= 2 && spec.r + 1 >= spec.total() {
                v["classification"] = report::classification(&classify_template(t, spec)?);
            }
            rep.push("template", "R(P), g(P, A) and the X_i partition", v);
        }
        if spec.uniform_h().is_some() && spec.n >= 2 {
            let to_cover: Vec<Template> = cover.iter().map(load).collect::<Result<_>>()?;
            let c = container_conclusions_check(&collection, &to_cover, a, &sols, spec)?;
            rep.push("container_conclusions_check", "coverage, rainbow count and size of a container family", report::containers(&c));
        }
        Ok(())
    })
}

fn constructions_cmd(common: &Common, kind: Kind, v: Option<&str>, samples: usize, lower_bound: bool) -> Result<()> {
    run_common("constructions", common, |spec, a, rep| {
        let budget = common.budget();
        match kind {
            Kind::Corner => {
                let v = match v {
                    Some(t) => parse_point(t)?,
                    None => Point(vec![1; spec.d]),
                };
                let cc = build_corner_sets(&v, spec)?;
                rep.push("build_corner_sets", "corner windows A_1..A_k, B_2..B_k", report::corner(&cc));
                let seed = common.seed.unwrap_or(DEFAULT_SEED);
                let f = forcing_property_check(&cc, samples, seed)?;
                rep.push("forcing_property_check", "x_{l,1} = s_1 - s_l lands in B_l", report::forcing(&f));
                if lower_bound {
                    let b = corner_lower_bound_check(&cc, &budget)?;
                    rep.push("corner_lower_bound_check", "f(v) >= prod C(|A_l|, h-1)", report::corner_bound(&b));
                    if !b.holds {
                        return Err(Error::Property(format!("f(v) = {} is below the product bound", b.through_point)));
                    }
                }
            }
            Kind::Ratio | Kind::Odd => {
                let set = if matches!(kind, Kind::Ratio) {
                    solution_free_ratio_set(spec)?
                } else {
                    odd_coordinate_set(spec)?
                };
                let f = count_solutions(&set, spec, &CountOptions { budget, ..Default::default() })?.f;
                rep.push(
                    if matches!(kind, Kind::Ratio) { "solution_free_ratio_set" } else { "odd_coordinate_set" },
                    "solution-free set for unequal group sizes",
                    json!({ "size": set.len(), "set": set.to_rle(), "f": report::uint(f) }),
                );
                if f != 0 {
                    return Err(Error::Property(format!("construction contains {f} solutions")));
                }
            }
            Kind::Shifted => {
                let v = parse_point(v.ok_or_else(|| Error::Domain("--kind shifted needs --v".into()))?)?;
                let s = shifted_subgrid(a, &v, spec)?;
                let half = spec.with_n(s.side);
                let mut inside = PointSet::empty(half.grid()?);
                for p in s.restricted.points() {
                    inside.insert(&Point(p.0.iter().zip(&s.offset).map(|(x, o)| x - o).collect()))?;
                }
                let through_a = count_through_point(&s.restricted, &v, spec, &budget, false)?.count;
                let through_half = count_through_point(&inside, &s.v_prime, &half, &budget, false)?.count;
                rep.push(
                    "shifted_subgrid",
                    "half-size window anchored at v",
                    json!({
                        "side": s.side,
                        "v_prime": s.v_prime.to_string(),
                        "offset": s.offset,
                        "window_size": s.window.len(),
                        "restricted_size": s.restricted.len(),
                        "through_v": report::uint(through_a),
                        "through_v_prime": report::uint(through_half),
                    }),
                );
                if through_a != through_half {
                    return Err(Error::Property(format!("f_F(v) = {through_a} but f(v') = {through_half}")));
                }
            }
        }
        Ok(())
    })
}

fn extremal_cmd(common: &Common, no_dedup: bool) -> Result<()> {
    run_common("extremal-scan", common, |spec, _, rep| {
        let scan = extremal_scan(spec, &common.budget(), !no_dedup)?;
        rep.push("extremal_scan", "g_r(A) over all subsets of the box", report::extremal(&scan));
        if let Some(p) = &common.csv {
            fs::write(p, report::extremal_csv(&scan))?;
        }
        Ok(())
    })
}

fn verify_cmd(
    out: Option<&PathBuf>,
    workers: Option<usize>,
    seed: Option<u64>,
    budget: Budget,
    only: &[u32],
) -> Result<()> {
    let seed = seed.unwrap_or(verify::SUITE_SEED);
    let ids: Vec<u32> = if only.is_empty() { (1..=11).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=11).contains(&i)) {
        return Err(Error::Domain(format!("criterion {bad} is not in 1..=11")));
    }
    let outcomes = pool(workers)?.install(|| ids.iter().map(|&id| verify::run_one(id, seed, &budget)).collect::<Vec<_>>());
    for o in &outcomes {
        eprintln!("criterion {:>2} {}: {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.name);
    }
    write_out(out, &verify::suite_report(&outcomes, seed, &budget).to_json())?;
    match outcomes.iter().find(|o| !o.pass) {
        Some(o) => Err(Error::Property(format!("criterion {} failed: {}", o.id, o.name))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::CountSolutions { common, through } => count_solutions_cmd(&common, through.as_deref()),
        Command::CountColorings { common, deviate } => count_colorings_cmd(&common, deviate.as_deref()),
        Command::HypergraphStats { common } => hypergraph_cmd(&common),
        Command::TemplateCheck { common, templates, cover } => template_cmd(&common, &templates, &cover),
        Command::Constructions {
            common,
            kind,
            v,
            samples,
            lower_bound,
        } => constructions_cmd(&common, kind, v.as_deref(), samples, lower_bound),
        Command::ExtremalScan { common, no_dedup } => extremal_cmd(&common, no_dedup),
        Command::VerifyAll {
            preset: Preset::Desk,
            out,
            workers,
            seed,
            budget_colorings,
            budget_buckets,
            only,
        } => verify_cmd(out.as_ref(), workers, seed, Budget::new(budget_buckets, budget_colorings), &only),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bkh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
