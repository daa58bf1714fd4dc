//! Batch front-end: instance validation, spectra, map verification, gap and
//! Wilson scans, sector reports and homology checks, with JSON/CSV output
//! and on-disk result caching.

mod cache;
mod config;
mod output;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hexphase::chains::{self, ChainEnsemble, GapPoint};
use hexphase::lattice::HexTorus;
use hexphase::models;
use hexphase::report::{canonical_json, Meta};
use hexphase::spectra::{self};
use hexphase::wilson;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{emit, OutputKind};

#[derive(Parser)]
#[command(
    name = "hexphase",
    version,
    about = "Exact analysis of a color-code/toric-code interpolation on hexagonal tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Plain-text key = value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Cache directory (env HEXPHASE_CACHE_DIR, default .hexphase-cache).
    #[arg(long, global = true)]
    cache_dir: Option<String>,
    /// Skip the cache for this run.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true)]
    rows: Option<usize>,
    #[arg(long, global = true)]
    cols: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Eigensolver residual tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative degeneracy clustering tolerance.
    #[arg(long, global = true)]
    cluster_tol: Option<f64>,
    /// Worker threads (0 = library default).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the torus and run every admissibility check.
    Validate(Common),
    /// Low spectrum of the interpolated Hamiltonian.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gt: Option<f64>,
        #[arg(long)]
        gc: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compare 2D exact diagonalization with the chain-ensemble prediction.
    MapVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gt: Option<f64>,
        #[arg(long)]
        gc: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Gap curve over a coupling-ratio grid (chain theory, optionally ED).
    GapScan {
        #[command(flatten)]
        common: Common,
        /// Single-chain mode: ring length for the free-fermion curve.
        #[arg(long)]
        chain_n: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        /// Also diagonalize the 2D model per grid point (lattice mode).
        #[arg(long)]
        ed: bool,
    },
    /// Wilson-loop scans for every rectangle on the torus.
    Wilson {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma_min: Option<f64>,
        #[arg(long)]
        gamma_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Occupied sign-sector rules of the measured basis.
    Sectors(Common),
    /// Loop homology relations and row-operator classes.
    Logicals(Common),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            let payload = serde_json::json!({
                "error": err.to_string(),
                "chain": format!("{err:#}"),
            });
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Validate(common) => {
            let cfg = RunConfig::load(&common)?;
            cfg.init_workers();
            match build_torus(&cfg) {
                Ok(t) => {
                    let report = t.validate();
                    let admissible = report.admissible;
                    finish(&cfg, "validate", &t.instance_hash(), &report, |r| {
                        output::validation_csv(r)
                    })?;
                    if !admissible {
                        anyhow::bail!("torus {}x{} is not admissible", cfg.rows, cfg.cols);
                    }
                }
                Err(e) => {
                    // Construction failures still produce a machine-readable
                    // report before the nonzero exit.
                    let report = serde_json::json!({
                        "rows": cfg.rows,
                        "cols": cfg.cols,
                        "admissible": false,
                        "build_error": e.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    anyhow::bail!("construction failed: {e}");
                }
            }
            Ok(())
        }
        Command::Spectrum { common, gt, gc, k } => {
            let mut cfg = RunConfig::load(&common)?;
            cfg.apply_couplings(gt, gc, k);
            cfg.init_workers();
            let t = build_torus(&cfg)?;
            let request = cfg.request_string("spectrum", &t.instance_hash());
            if try_cache(&cfg, &request)? {
                return Ok(());
            }
            let h = models::interpolate(&t, cfg.g_t, cfg.g_c)?;
            let report = spectra::lowest_eigs(&h, &cfg.solve_options())?;
            finish_cached(&cfg, "spectrum", &t.instance_hash(), &request, &report, |r| {
                output::spectrum_csv(r)
            })
        }
        Command::MapVerify { common, gt, gc, k } => {
            let mut cfg = RunConfig::load(&common)?;
            cfg.apply_couplings(gt, gc, k);
            cfg.init_workers();
            let t = build_torus(&cfg)?;
            let request = cfg.request_string("map-verify", &t.instance_hash());
            if try_cache(&cfg, &request)? {
                return Ok(());
            }
            let report = chains::map_verify(&t, cfg.g_t, cfg.g_c, cfg.k, &cfg.solve_options())?;
            finish_cached(
                &cfg,
                "map-verify",
                &t.instance_hash(),
                &request,
                &report,
                |r| output::map_verify_csv(r),
            )
        }
        Command::GapScan {
            common,
            chain_n,
            step,
            from,
            to,
            ed,
        } => {
            let cfg = RunConfig::load(&common)?;
            cfg.init_workers();
            let step = step.unwrap_or(0.01);
            let from = from.unwrap_or(0.5);
            let to = to.unwrap_or(2.0);
            if step <= 0.0 || to <= from {
                anyhow::bail!("malformed ratio grid");
            }
            let ratios: Vec<f64> = {
                let mut v = Vec::new();
                let mut r = from;
                while r <= to + 1e-12 {
                    v.push((r * 1e12).round() / 1e12);
                    r += step;
                }
                v
            };
            let report = match chain_n {
                Some(n) => {
                    let (pts, argmin) = chains::chain_gap_curve(n, &ratios)?;
                    GapScanReport {
                        mode: format!("chain-{n}"),
                        points: pts
                            .into_iter()
                            .map(|p| GapPoint {
                                ratio: p.ratio,
                                chain_gap: p.gap,
                                ed_gap: None,
                            })
                            .collect(),
                        argmin_index: argmin,
                        argmin_ratio: ratios[argmin],
                    }
                }
                None => {
                    let t = build_torus(&cfg)?;
                    let points: anyhow::Result<Vec<GapPoint>> = ratios
                        .iter()
                        .map(|&ratio| {
                            let ens = ChainEnsemble::from_lattice(&t, ratio, 1.0)?;
                            let (_, _, gap) = ens.predicted_gap(cfg.cluster_tol)?;
                            let ed_gap = if ed {
                                let h = models::interpolate(&t, ratio, 1.0)?;
                                let mut opts = cfg.solve_options();
                                opts.k = 24.min(1usize << t.n);
                                let rep = spectra::lowest_eigs(&h, &opts)?;
                                spectra::spectral_gap(&rep).map(|(_, _, g)| g)
                            } else {
                                None
                            };
                            Ok(GapPoint {
                                ratio,
                                chain_gap: gap,
                                ed_gap,
                            })
                        })
                        .collect();
                    let points = points?;
                    let argmin = points
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.chain_gap.partial_cmp(&b.1.chain_gap).unwrap())
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    GapScanReport {
                        mode: format!("lattice-{}x{}", cfg.rows, cfg.cols),
                        argmin_ratio: points[argmin].ratio,
                        argmin_index: argmin,
                        points,
                    }
                }
            };
            finish(&cfg, "gap-scan", "", &report, |r| output::gap_scan_csv(r))
        }
        Command::Wilson {
            common,
            gamma_min,
            gamma_max,
            points,
        } => {
            let cfg = RunConfig::load(&common)?;
            cfg.init_workers();
            let t = build_torus(&cfg)?;
            let lo = gamma_min.unwrap_or(0.01);
            let hi = gamma_max.unwrap_or(0.10);
            let np = points.unwrap_or(10).max(2);
            let gammas: Vec<f64> = (0..np)
                .map(|i| lo + (hi - lo) * i as f64 / (np - 1) as f64)
                .collect();
            let opts = cfg.solve_options();
            let quartets = wilson::ground_quartets(&t, &gammas, &opts)
                .context("wilson ground-state scan")?;
            let mut reports = Vec::new();
            for (h, w) in t.wilson_shapes() {
                let spec = t.wilson_rectangle(h, w, 0)?;
                reports.push(wilson::wilson_report_from_states(
                    &t, &spec, &gammas, &quartets,
                )?);
            }
            let bundle = WilsonBundle { loops: reports };
            finish(&cfg, "wilson", &t.instance_hash(), &bundle, |r| {
                output::wilson_csv(r)
            })
        }
        Command::Sectors(common) => {
            let cfg = RunConfig::load(&common)?;
            cfg.init_workers();
            let t = build_torus(&cfg)?;
            let report = models::sector_report(&t)?;
            finish(&cfg, "sectors", &t.instance_hash(), &report, |_| {
                Err(anyhow::anyhow!("sectors has no CSV projection"))
            })
        }
        Command::Logicals(common) => {
            let cfg = RunConfig::load(&common)?;
            cfg.init_workers();
            let t = build_torus(&cfg)?;
            let homology = models::homology_check(&t)?;
            let mut row_classes = Vec::new();
            for row in 0..t.row_count {
                row_classes.push(RowClassView {
                    row,
                    light_in_extended_group: models::row_operator_class(
                        &t,
                        row,
                        models::Shade::Light,
                    )?
                    .member,
                    dark_in_extended_group: models::row_operator_class(
                        &t,
                        row,
                        models::Shade::Dark,
                    )?
                    .member,
                });
            }
            let report = LogicalsReport {
                homology,
                row_classes,
            };
            finish(&cfg, "logicals", &t.instance_hash(), &report, |_| {
                Err(anyhow::anyhow!("logicals has no CSV projection"))
            })
        }
    }
}

#[derive(Serialize)]
struct GapScanReport {
    mode: String,
    points: Vec<GapPoint>,
    argmin_index: usize,
    argmin_ratio: f64,
}

#[derive(Serialize)]
struct WilsonBundle {
    loops: Vec<wilson::WilsonReport>,
}

#[derive(Serialize)]
struct RowClassView {
    row: usize,
    light_in_extended_group: bool,
    dark_in_extended_group: bool,
}

#[derive(Serialize)]
struct LogicalsReport {
    homology: models::HomologyReport,
    row_classes: Vec<RowClassView>,
}

fn build_torus(cfg: &RunConfig) -> anyhow::Result<HexTorus> {
    HexTorus::build(cfg.rows, cfg.cols)
        .with_context(|| format!("building {}x{} torus", cfg.rows, cfg.cols))
}

/// Serialize with meta, emit, optionally write.
fn finish<T: Serialize>(
    cfg: &RunConfig,
    command: &str,
    instance_hash: &str,
    report: &T,
    csv: impl Fn(&serde_json::Value) -> anyhow::Result<String>,
) -> anyhow::Result<()> {
    let meta = meta_for(cfg, command, instance_hash);
    let text = render(cfg, meta, report, csv)?;
    emit(cfg, &text)
}

fn finish_cached<T: Serialize>(
    cfg: &RunConfig,
    command: &str,
    instance_hash: &str,
    request: &str,
    report: &T,
    csv: impl Fn(&serde_json::Value) -> anyhow::Result<String>,
) -> anyhow::Result<()> {
    let meta = meta_for(cfg, command, instance_hash);
    let text = render(cfg, meta, report, csv)?;
    if !cfg.no_cache {
        cache::store(cfg, request, &text)?;
    }
    emit(cfg, &text)
}

fn try_cache(cfg: &RunConfig, request: &str) -> anyhow::Result<bool> {
    if cfg.no_cache {
        return Ok(false);
    }
    if let Some(text) = cache::load(cfg, request)? {
        emit(cfg, &text)?;
        return Ok(true);
    }
    Ok(false)
}

fn meta_for(cfg: &RunConfig, command: &str, instance_hash: &str) -> Meta {
    let mut meta = Meta::new(instance_hash);
    meta.config = cfg.echo(command);
    meta
}

fn render<T: Serialize>(
    cfg: &RunConfig,
    meta: Meta,
    report: &T,
    csv: impl Fn(&serde_json::Value) -> anyhow::Result<String>,
) -> anyhow::Result<String> {
    let mut value = serde_json::to_value(report)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| anyhow::anyhow!("report must be an object"))?;
    obj.insert("meta".into(), serde_json::to_value(&meta)?);
    match cfg.output_kind() {
        OutputKind::Json => Ok(canonical_json(&value)),
        OutputKind::Csv => csv(&value),
    }
}
