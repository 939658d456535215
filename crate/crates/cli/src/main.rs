//! Command-line front end. Every command is seed-deterministic: with the
//! same inputs, flags, and --seed, output files are byte-identical. Exit
//! codes: 0 ok, 1 infeasible or failed verdict, 2 usage or input error,
//! 3 enumeration cap exceeded.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minrep_core::gadgets::{
    merge_demands, to_directed_rooted, to_k_route_cut, to_undirected_rooted, to_vc_sndp,
    GadgetLayout, NetworkInstance, ProblemKind,
};
use minrep_core::num::{format_q, parse_q, q_to_f64, Q};
use minrep_core::oracle::{
    brute_force_network_opt, check_cut_solution, check_design_solution, gap_experiment, opcount,
    GapParams, OracleError, SubgraphView,
};
use minrep_core::transforms::{
    default_right_degree, default_trim_threshold, max_to_min, regularize, right_degree_reduce,
    run_pipeline, sparsify, trim_large_degree, PipelineParams,
};
use minrep_core::{io, LabelCoverInstance, RandomProfile};

use report::Report;

#[derive(Parser)]
#[command(name = "minrep", version, about = "Label-cover shaping and connectivity gadget toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PassName {
    Rightdeg,
    Regularize,
    Sparsify,
    Trim,
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetName {
    #[value(name = "rootedDirected")]
    RootedDirected,
    #[value(name = "rootedUndirected")]
    RootedUndirected,
    #[value(name = "sndp")]
    Sndp,
    #[value(name = "kroute")]
    Kroute,
}

impl GadgetName {
    fn kind(self) -> ProblemKind {
        match self {
            GadgetName::RootedDirected => ProblemKind::RootedDirected,
            GadgetName::RootedUndirected => ProblemKind::RootedUndirected,
            GadgetName::Sndp => ProblemKind::VcSndp,
            GadgetName::Kroute => ProblemKind::KRouteCut,
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Write a run report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall-clock lines in the report (breaks byte reproducibility).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded left-regular instance with a planted labeling.
    Gen {
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
        /// Left and right label set sizes.
        #[arg(long, num_args = 2)]
        labels: Vec<usize>,
        #[arg(long)]
        degree: usize,
        /// Completeness slack of the plant, as a rational like 1/4.
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run one shaping pass or the whole pipeline.
    Transform {
        pass: PassName,
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "1/2")]
        gamma: String,
        #[arg(long, default_value = "0")]
        eps: String,
        /// Right-degree parameter; `auto` means ceil(1/gamma).
        #[arg(long, default_value = "auto")]
        d: String,
        /// Trim threshold; `auto` means 2*(1/gamma)*ln(max labels).
        #[arg(long, default_value = "auto")]
        trim: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Load gamma/epsilon/d/seed/trim from a pipeline config file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Attach max-to-min label costs c1 = |W|, c2 = |U|.
    Costs {
        input: PathBuf,
        output: PathBuf,
        /// Budget check epsilon*|E| <= min(|U|,|W|).
        #[arg(long, default_value = "0")]
        eps_budget: String,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Emit a connectivity instance from a costed label-cover instance.
    Reduce {
        gadget: GadgetName,
        input: PathBuf,
        output: PathBuf,
        /// Layout path; defaults to `<output>.layout`.
        #[arg(long)]
        layout: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Merge demands along strong-coloring classes of the source arcs.
    Merge {
        input: PathBuf,
        output: PathBuf,
        /// Layout of the input network; defaults to `<input>.layout`.
        #[arg(long)]
        layout: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Strong edge coloring of an instance's constraint graph.
    Color {
        input: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check a solution file against a network, or structural claims.
    Verify {
        network: PathBuf,
        solution: Option<PathBuf>,
        /// Run the structural invariants registered for the instance kind.
        #[arg(long)]
        claims: bool,
        #[arg(long)]
        layout: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Exact optimum of a label-cover or network file by exhaustive search.
    Bruteforce {
        input: PathBuf,
        /// Candidate cap for label-cover search, edge cap for networks.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Write the optimal edge set here (network inputs only).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Paired planted/unplanted experiment through pipeline and gadget.
    Gap {
        #[arg(long, default_value = "1/2")]
        gamma: String,
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GadgetName::RootedDirected)]
        gadget: GadgetName,
        #[arg(long, default_value_t = 2)]
        left: usize,
        #[arg(long, default_value_t = 2)]
        right: usize,
        #[arg(long, num_args = 2, default_values_t = [2usize, 2usize])]
        labels: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Also run the shaping pipeline on both sides.
        #[arg(long)]
        pipeline: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
}

/// Error carrying the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn verdict(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn cap(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::EdgeCapExceeded { .. } => CliError::cap(e.to_string()),
            OracleError::Model(minrep_core::ModelError::EnumerationCapExceeded { .. }) => {
                CliError::cap(e.to_string())
            }
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<minrep_core::ModelError> for CliError {
    fn from(e: minrep_core::ModelError) -> Self {
        match e {
            minrep_core::ModelError::EnumerationCapExceeded { .. } => CliError::cap(e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<minrep_core::TransformError> for CliError {
    fn from(e: minrep_core::TransformError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<minrep_core::GadgetError> for CliError {
    fn from(e: minrep_core::GadgetError) -> Self {
        CliError::usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn ratio(s: &str, what: &str) -> Result<Q, CliError> {
    parse_q(s).map_err(|m| CliError::usage(format!("bad {what}: {m}")))
}

fn load_labelcover(path: &Path) -> Result<LabelCoverInstance, CliError> {
    let text = read(path)?;
    let inst = io::parse_labelcover(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let violations = inst.validate();
    if !violations.is_empty() {
        return Err(CliError::usage(format!(
            "{}: invalid instance: {}",
            path.display(),
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok(inst)
}

fn load_network(path: &Path) -> Result<NetworkInstance, CliError> {
    let text = read(path)?;
    io::parse_network(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_layout(path: &Path) -> Result<GadgetLayout, CliError> {
    let text = read(path)?;
    io::parse_layout(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn finish(report: Report, args: &ReportArgs) -> Result<(), CliError> {
    if let Some(path) = &args.report {
        write(path, &report.render())?;
    }
    Ok(())
}

fn command_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    args.join(" ")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { left, right, labels, degree, eps, seed, out, report: rargs } => {
            let eps = ratio(&eps, "eps")?;
            let profile = RandomProfile {
                left,
                right,
                left_labels: labels[0],
                right_labels: labels[1],
                degree,
                epsilon: eps,
            };
            let inst = LabelCoverInstance::random_instance(&profile, seed)?;
            let text = io::write_labelcover(&inst);
            write(&out, &text)?;

            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.seed(seed);
            report.digest("out", &text);
            let plant = inst.planted.clone().expect("generated instances carry a plant");
            let covered = inst.coverage_fraction(&plant)?;
            report.check(
                "gen.plantedCoverage",
                covered >= minrep_core::num::q_one() - eps,
                &format_q(covered),
                &format!(">= 1-eps = {}", format_q(minrep_core::num::q_one() - eps)),
            );
            println!("wrote {} ({} arcs, planted coverage {})", out.display(), inst.arcs.len(), format_q(covered));
            finish(report, &rargs)
        }

        Command::Transform { pass, input, output, gamma, eps, d, trim, seed, config, report: rargs } => {
            let inst = load_labelcover(&input)?;
            let (gamma, eps, d_opt, seed, trim_opt) = if let Some(cfg_path) = config {
                let cfg = io::parse_pipeline_config(&read(&cfg_path)?)
                    .map_err(|e| CliError::usage(format!("{}: {e}", cfg_path.display())))?;
                (cfg.gamma, cfg.epsilon, cfg.d, cfg.seed, cfg.trim.map(q_to_f64))
            } else {
                let gamma = ratio(&gamma, "gamma")?;
                let eps = ratio(&eps, "eps")?;
                let d_opt = match d.as_str() {
                    "auto" => None,
                    other => Some(other.parse().map_err(|_| CliError::usage("bad --d"))?),
                };
                let trim_opt = match trim.as_str() {
                    "auto" => None,
                    other => Some(q_to_f64(ratio(other, "trim")?)),
                };
                (gamma, eps, d_opt, seed, trim_opt)
            };

            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.seed(seed);
            report.digest("in", &io::write_labelcover(&inst));
            let start = std::time::Instant::now();

            let max_labels = inst.left_labels.max(inst.right_labels);
            let (out_inst, traces) = match pass {
                PassName::Rightdeg => {
                    let d_val = d_opt.unwrap_or_else(|| default_right_degree(gamma));
                    let (out, trace) = right_degree_reduce(&inst, d_val, seed)?;
                    (out, vec![trace])
                }
                PassName::Regularize => {
                    let (out, trace) = regularize(&inst)?;
                    (out, vec![trace])
                }
                PassName::Sparsify => {
                    let (out, trace) = sparsify(&inst, gamma, seed)?;
                    (out, vec![trace])
                }
                PassName::Trim => {
                    let threshold =
                        trim_opt.unwrap_or_else(|| default_trim_threshold(gamma, max_labels));
                    let (out, trace) = trim_large_degree(&inst, threshold)?;
                    (out, vec![trace])
                }
                PassName::Pipeline => {
                    let params = PipelineParams {
                        gamma,
                        epsilon: eps,
                        d: d_opt,
                        trim_threshold: trim_opt,
                        seed,
                        sparsify_retries: 16,
                    };
                    run_pipeline(&inst, &params)?
                }
            };

            let text = io::write_labelcover(&out_inst);
            write(&output, &text)?;
            report.digest("out", &text);
            for trace in &traces {
                report.trace(trace);
            }
            let out_delta = out_inst.degree_profile().max_degree;
            let bound = default_trim_threshold(gamma, max_labels);
            if matches!(pass, PassName::Pipeline | PassName::Trim) {
                report.check(
                    "trim.maxDegree",
                    (out_delta as f64) <= trim_opt.unwrap_or(bound),
                    &out_delta.to_string(),
                    &format!("<= 2*(1/gamma)*ln(maxL) = {bound}"),
                );
            }
            report.wall("transform", start.elapsed().as_millis());
            println!(
                "wrote {} ({} arcs, max degree {out_delta})",
                output.display(),
                out_inst.arcs.len()
            );
            finish(report, &rargs)
        }

        Command::Costs { input, output, eps_budget, report: rargs } => {
            let inst = load_labelcover(&input)?;
            let budget = ratio(&eps_budget, "eps-budget")?;
            let costed = max_to_min(&inst, budget)?;
            let text = io::write_labelcover(&costed);
            write(&output, &text)?;

            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &io::write_labelcover(&inst));
            report.digest("out", &text);
            let c = costed.costs.unwrap();
            report.check(
                "costs.balanced",
                c.left * Q::from(costed.left_count as i128)
                    == c.right * Q::from(costed.right_count as i128),
                &format!("c1={} c2={}", format_q(c.left), format_q(c.right)),
                "c1|U| = c2|W|",
            );
            println!("wrote {} (c1={}, c2={})", output.display(), format_q(c.left), format_q(c.right));
            finish(report, &rargs)
        }

        Command::Reduce { gadget, input, output, layout, report: rargs } => {
            let inst = load_labelcover(&input)?;
            let layout_path = layout.unwrap_or_else(|| {
                let mut p = output.clone().into_os_string();
                p.push(".layout");
                PathBuf::from(p)
            });
            let start = std::time::Instant::now();
            let (net, net_layout) = match gadget.kind() {
                ProblemKind::RootedDirected => to_directed_rooted(&inst)?,
                ProblemKind::RootedUndirected => to_undirected_rooted(&inst)?,
                ProblemKind::VcSndp => to_vc_sndp(&inst)?,
                ProblemKind::KRouteCut => to_k_route_cut(&inst)?,
                ProblemKind::Plain => unreachable!("no plain gadget"),
            };
            let net_text = io::write_network(&net);
            let layout_text = io::write_layout(&net_layout);
            write(&output, &net_text)?;
            write(&layout_path, &layout_text)?;

            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &io::write_labelcover(&inst));
            report.digest("out", &net_text);
            report.digest("layout", &layout_text);
            let delta = inst.degree_profile().max_degree;
            match net.kind {
                ProblemKind::RootedDirected => report.check(
                    "directed.k",
                    net.k as usize == delta,
                    &net.k.to_string(),
                    &format!("Delta(G) = {delta}"),
                ),
                ProblemKind::RootedUndirected => {
                    let max_labels = inst.left_labels.max(inst.right_labels);
                    let bound = 16 * (delta.pow(3) * max_labels + delta.pow(4));
                    report.check(
                        "undirected.k",
                        (net.k as usize) <= bound.max(1),
                        &net.k.to_string(),
                        &format!("<= 16(Delta^3 maxL + Delta^4) = {bound}"),
                    )
                }
                ProblemKind::VcSndp => {
                    let max_labels = inst.left_labels.max(inst.right_labels);
                    let bound = 2 * delta * max_labels + 4 * delta * delta + 1;
                    report.check(
                        "sndp.k",
                        net.k as usize <= bound,
                        &net.k.to_string(),
                        &format!("<= 2 Delta maxL + 4 Delta^2 + 1 = {bound}"),
                    )
                }
                ProblemKind::KRouteCut => {
                    let z = net_layout.padding.iter().map(|p| p.z.len()).max().unwrap_or(0);
                    report.check(
                        "kroute.k",
                        net.k as usize == z + 1,
                        &net.k.to_string(),
                        &format!("z+1 = {}", z + 1),
                    )
                }
                ProblemKind::Plain => {}
            }
            report.wall("reduce", start.elapsed().as_millis());
            println!(
                "wrote {} (k={}, {} vertices, {} edges) and {}",
                output.display(),
                net.k,
                net.vertex_count(),
                net.edges.len(),
                layout_path.display()
            );
            finish(report, &rargs)
        }

        Command::Merge { input, output, layout, report: rargs } => {
            let net = load_network(&input)?;
            let layout_path = layout.unwrap_or_else(|| {
                let mut p = input.clone().into_os_string();
                p.push(".layout");
                PathBuf::from(p)
            });
            let net_layout = load_layout(&layout_path)?;
            let coloring = minrep_core::matching::strong_edge_color_arcs(
                &net_layout.source_arcs,
                net_layout.source_left,
                net_layout.source_right,
            );
            let merged = merge_demands(&net, &net_layout, &coloring, net.kind)?;
            let text = io::write_network(&merged.base);
            write(&output, &text)?;

            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &io::write_network(&net));
            report.digest("out", &text);
            report.color_lines(&coloring);
            let delta = net_layout.source_max_degree;
            report.check(
                "merged.demands",
                merged.demand_count() <= 2 * delta * delta,
                &merged.demand_count().to_string(),
                &format!("<= 2 Delta^2 = {}", 2 * delta * delta),
            );
            report.check(
                "merged.k",
                true,
                &merged.k_new.to_string(),
                "k * max class size (rooted directed) or unchanged (cut)",
            );
            println!(
                "wrote {} ({} merged demands, k={})",
                output.display(),
                merged.demand_count(),
                merged.k_new
            );
            finish(report, &rargs)
        }

        Command::Color { input, report: rargs } => {
            let inst = load_labelcover(&input)?;
            let coloring = minrep_core::strong_edge_color(&inst);
            let delta = inst.degree_profile().max_degree;
            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &io::write_labelcover(&inst));
            report.color_lines(&coloring);
            report.check(
                "color.count",
                coloring.color_count <= 2 * delta * delta || inst.arcs.is_empty(),
                &coloring.color_count.to_string(),
                &format!("<= 2 Delta^2 = {}", 2 * delta * delta),
            );
            println!("{} colors for {} arcs", coloring.color_count, inst.arcs.len());
            finish(report, &rargs)
        }

        Command::Verify { network, solution, claims, layout, report: rargs } => {
            let net = load_network(&network)?;
            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &io::write_network(&net));
            let mut verdict_ok = true;

            if let Some(sol_path) = &solution {
                let edges = io::parse_solution(&read(sol_path)?)
                    .map_err(|e| CliError::usage(format!("{}: {e}", sol_path.display())))?;
                let (feasible, cost) = match net.kind {
                    ProblemKind::KRouteCut => check_cut_solution(&net, &edges)?,
                    _ => check_design_solution(&net, &edges)?,
                };
                verdict_ok &= feasible;
                report.check(
                    "solution.feasible",
                    feasible,
                    &format!("cost {}", format_q(cost)),
                    "all demands meet the requirement",
                );
                let view = match net.kind {
                    ProblemKind::KRouteCut => SubgraphView::cut(&net, &edges),
                    _ => SubgraphView::design(&net, &edges),
                };
                for d in net.demand_pairs() {
                    let cert = opcount(&view, d.s, d.t)?;
                    report.flow_certificate(&cert);
                    println!(
                        "demand {} -> {}: {} openly disjoint paths (need {} {})",
                        d.s,
                        d.t,
                        cert.path_count,
                        if net.kind == ProblemKind::KRouteCut { "<" } else { ">=" },
                        if net.kind == ProblemKind::KRouteCut { net.k } else { d.req },
                    );
                }
                println!("verdict: {} (cost {})", if feasible { "feasible" } else { "infeasible" }, format_q(cost));
            }

            if claims {
                let claim_results = run_claims(&net, layout.as_deref())?;
                for (name, pass, measured, formula) in &claim_results {
                    report.check(name, *pass, measured, formula);
                    println!("{name}: {} (measured {measured}, {formula})", if *pass { "pass" } else { "FAIL" });
                    verdict_ok &= *pass;
                }
            }

            finish(report, &rargs)?;
            if verdict_ok {
                Ok(())
            } else {
                Err(CliError::verdict("verification failed"))
            }
        }

        Command::Bruteforce { input, cap, layout, out, report: rargs } => {
            let text = read(&input)?;
            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.digest("in", &text);
            if text.starts_with("labelcover") {
                let inst = load_labelcover(&input)?;
                let enum_cap = cap.map(|c| c as u128).unwrap_or(minrep_core::DEFAULT_ENUM_CAP);
                let (_, fraction) = inst.brute_force_max(enum_cap)?;
                report.check("bruteforce.maxFraction", true, &format_q(fraction), "exact enumeration");
                println!("max coverage fraction: {}", format_q(fraction));
                if inst.costs.is_some() {
                    let (_, cost) = inst.brute_force_min_cost(enum_cap)?;
                    report.check("bruteforce.minCost", true, &format_q(cost), "exact enumeration");
                    println!("min feasible cost: {}", format_q(cost));
                }
            } else {
                let net = load_network(&input)?;
                let net_layout = match &layout {
                    Some(p) => Some(load_layout(p)?),
                    None => None,
                };
                let edge_cap = cap.map(|c| c as usize).unwrap_or(minrep_core::DEFAULT_EDGE_CAP);
                let (edges, cost) =
                    brute_force_network_opt(&net, net_layout.as_ref(), edge_cap)?;
                report.check("bruteforce.networkOpt", true, &format_q(cost), "exact enumeration");
                println!("optimum cost: {} with {} edges", format_q(cost), edges.len());
                if let Some(out_path) = out {
                    let sol = io::write_solution(&edges);
                    write(&out_path, &sol)?;
                    report.digest("out", &sol);
                }
            }
            finish(report, &rargs)
        }

        Command::Gap { gamma, eps, seed, gadget, left, right, labels, degree, pipeline, report: rargs } => {
            let params = GapParams {
                profile: RandomProfile {
                    left,
                    right,
                    left_labels: labels[0],
                    right_labels: labels[1],
                    degree,
                    epsilon: ratio(&eps, "eps")?,
                },
                gamma: ratio(&gamma, "gamma")?,
                epsilon: ratio(&eps, "eps")?,
                gadget: gadget.kind(),
                run_pipeline: pipeline,
                enum_cap: minrep_core::DEFAULT_ENUM_CAP,
                edge_cap: minrep_core::DEFAULT_EDGE_CAP,
            };
            let gap = gap_experiment(&params, seed)?;
            let mut report = Report::new(&command_line());
            report.with_timings = rargs.timings;
            report.seed(seed);
            report.gap(&gap);
            report.wall("gap", gap.wall_ms);
            println!(
                "gap {}: yesOpt {} noOpt {} ratio {}",
                gap.gadget.tag(),
                format_q(gap.yes_opt),
                format_q(gap.no_opt),
                format_q(gap.ratio)
            );
            let all_hold = gap.checks.iter().all(|c| c.bound_holds != Some(false));
            finish(report, &rargs)?;
            if all_hold {
                Ok(())
            } else {
                Err(CliError::verdict("a gap measurement violated its bound"))
            }
        }
    }
}

type Claim = (String, bool, String, String);

/// Structural invariants per instance kind, using the layout when given.
fn run_claims(net: &NetworkInstance, layout: Option<&Path>) -> Result<Vec<Claim>, CliError> {
    let mut out: Vec<Claim> = Vec::new();
    let violations = net.validate();
    out.push((
        "claims.wellFormed".into(),
        violations.is_empty(),
        format!("{} violations", violations.len()),
        "vertex/edge/kind structure".into(),
    ));

    let layout = match layout {
        Some(p) => Some(load_layout(p)?),
        None => None,
    };
    let Some(layout) = layout else {
        return Ok(out);
    };

    let finite = net.finite_cost_edges();
    let expected = layout.source_left * layout.source_left_labels
        + layout.source_right * layout.source_right_labels;
    let mapped: std::collections::BTreeSet<usize> = layout.label_edge.values().copied().collect();
    out.push((
        "claims.labelBijection".into(),
        finite.len() == expected && mapped == finite.iter().copied().collect(),
        format!("{} positive-cost edges", finite.len()),
        format!("|U||L1| + |W||L2| = {expected}"),
    ));

    match net.kind {
        ProblemKind::RootedDirected => {
            let mut indeg = vec![0u32; net.vertex_count()];
            for e in &net.edges {
                indeg[e.v] += e.mult;
            }
            let all = net.terminals.iter().all(|&t| indeg[t] == net.k);
            out.push((
                "claims.terminalIndegree".into(),
                all,
                format!("k = {}", net.k),
                "every terminal indegree equals k = Delta(G)".into(),
            ));
            out.push((
                "claims.k".into(),
                net.k as usize == layout.source_max_degree,
                net.k.to_string(),
                format!("Delta(G) = {}", layout.source_max_degree),
            ));
        }
        ProblemKind::RootedUndirected => {
            let sizes = layout.padding.iter().all(|p| {
                p.x.len() == p.z.len() + 1
                    && p.z.len() + p.y.len() + p.q.len() + 1 == net.k as usize
            });
            out.push((
                "claims.paddingSizes".into(),
                sizes,
                format!("k = {}", net.k),
                "|X| = |Z|+1 and |Z|+|Y|+|Q|+1 = k".into(),
            ));
            let canonical = layout.canonical.iter().enumerate().all(|(d, path)| {
                path.len() == 7 && {
                    let pads = &layout.padding[d];
                    let interior: std::collections::BTreeSet<usize> =
                        path[1..path.len() - 1].iter().copied().collect();
                    pads.z.iter().chain(&pads.y).chain(&pads.q).all(|v| !interior.contains(v))
                }
            });
            out.push((
                "claims.canonicalPaths".into(),
                canonical,
                format!("{} demands", layout.canonical.len()),
                "7 vertices, interior avoids Z, Y, Q".into(),
            ));
        }
        ProblemKind::VcSndp => {
            let delta = layout.source_max_degree;
            let max_labels = layout.source_left_labels.max(layout.source_right_labels);
            let bound = 2 * delta * max_labels + 4 * delta * delta + 1;
            out.push((
                "claims.k".into(),
                net.k as usize <= bound,
                net.k.to_string(),
                format!("<= 2 Delta maxL + 4 Delta^2 + 1 = {bound}"),
            ));
            out.push((
                "claims.uniformReq".into(),
                net.demands.iter().all(|d| d.req == net.k),
                format!("{} demands", net.demands.len()),
                "req = k after padding".into(),
            ));
        }
        ProblemKind::KRouteCut => {
            let z = layout.padding.iter().map(|p| p.z.len()).max().unwrap_or(0);
            out.push((
                "claims.k".into(),
                net.k as usize == z + 1,
                net.k.to_string(),
                format!("z+1 = {}", z + 1),
            ));
            let slack = layout.padding.iter().all(|p| p.z.len() + p.s.len() == z);
            out.push((
                "claims.slackFill".into(),
                slack,
                format!("z = {z}"),
                "|Z| + |S| = z for every demand".into(),
            ));
        }
        ProblemKind::Plain => {}
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
