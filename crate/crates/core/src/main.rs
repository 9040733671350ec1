//! Command-line front end: `vqe`, `winding`, `mzm`, `tb`, `ed`.
//!
//! Parameters resolve as CLI flag > config-file key > default; every run
//! writes a manifest next to its outputs. Exit codes: 0 success (including
//! flagged non-convergence), 2 usage/config error, 3 ill-defined result.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use kitaev_qc::ed::{self, EdBasis, GreenOracle};
use kitaev_qc::error::Error;
use kitaev_qc::formats;
use kitaev_qc::model::{Boundary, CouplingSet};
use kitaev_qc::mzm::{self, MzmBackend};
use kitaev_qc::topo::{self, Backend};
use kitaev_qc::vqe::{self, VqeConfig};
use kitaev_qc::Result;

#[derive(Parser)]
#[command(name = "kitaev-qc", version, about = "Quantum-circuit algorithms for the interacting Kitaev chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parity-conserved variational ground-state search
    Vqe(VqeArgs),
    /// Many-body winding number from time-evolved Green functions
    Winding(WindingArgs),
    /// Majorana-zero-mode transfer-amplitude profile
    Mzm(MzmArgs),
    /// Tight-binding analytics: pseudo vector, winding, SVD reference
    Tb(TbArgs),
    /// Exact-diagonalization references
    Ed(EdArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// flat key = value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    jx: Option<f64>,
    #[arg(long)]
    jy: Option<f64>,
    #[arg(long)]
    jz: Option<f64>,
    #[arg(long)]
    hz: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// fermion pairing amplitude (the spin-language flag is --jx/--jy)
    #[arg(long = "delta-pair")]
    delta_pair: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// cap on worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

struct Resolved {
    cfg: BTreeMap<String, String>,
}

impl Resolved {
    fn new(model: &ModelArgs) -> Result<Self> {
        let cfg = match &model.config {
            Some(p) => formats::parse_config(p)?,
            None => BTreeMap::new(),
        };
        Ok(Resolved { cfg })
    }

    fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.cfg
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("config key '{key}': bad float '{v}'")))
            })
            .transpose()
    }

    fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.cfg
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Error::invalid(format!("config key '{key}': bad integer '{v}'")))
            })
            .transpose()
    }

    fn u64(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.cfg
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| Error::invalid(format!("config key '{key}': bad integer '{v}'")))
            })
            .transpose()
    }

    fn string(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.cfg.get(key).cloned())
    }
}

struct Common {
    cs: CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    seed: u64,
    out: PathBuf,
}

fn resolve_common(model: &ModelArgs, r: &Resolved) -> Result<Common> {
    let spin_given = [model.jx, model.jy, model.jz, model.hz]
        .iter()
        .any(Option::is_some)
        || ["jx", "jy", "jz", "hz"].iter().any(|k| r.cfg.contains_key(*k));
    let fermion_given = [model.t, model.delta_pair, model.v, model.mu]
        .iter()
        .any(Option::is_some)
        || ["t", "delta", "v", "mu"].iter().any(|k| r.cfg.contains_key(*k));
    let cs = if spin_given {
        CouplingSet::from_spin(
            r.f64(model.jx, "jx")?.unwrap_or(0.0),
            r.f64(model.jy, "jy")?.unwrap_or(0.0),
            r.f64(model.jz, "jz")?.unwrap_or(0.0),
            r.f64(model.hz, "hz")?.unwrap_or(0.0),
        )
    } else if fermion_given {
        CouplingSet::from_fermion(
            r.f64(model.t, "t")?.unwrap_or(0.0),
            r.f64(model.delta_pair, "delta")?.unwrap_or(0.0),
            r.f64(model.v, "v")?.unwrap_or(0.0),
            r.f64(model.mu, "mu")?.unwrap_or(0.0),
        )
    } else {
        return Err(Error::invalid(
            "no couplings given: set --jx/--jy/--jz/--hz or --t/--delta-pair/--v/--mu",
        ));
    };
    let n_sites = r
        .usize(model.n, "n")?
        .ok_or_else(|| Error::invalid("missing required --n"))?;
    let boundary = match r.string(&model.boundary, "boundary") {
        Some(s) => s.parse()?,
        None => Boundary::Open,
    };
    let seed = r.u64(model.seed, "seed")?.unwrap_or(0);
    let out = model
        .out
        .clone()
        .or_else(|| r.cfg.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Some(threads) = r.usize(model.threads, "threads")? {
        // ignore failure when a pool already exists (repeated invocation in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    std::fs::create_dir_all(&out)?;
    Ok(Common { cs, n_sites, boundary, seed, out })
}

fn parse_parity(s: Option<String>) -> Result<i8> {
    match s.as_deref() {
        None | Some("even") | Some("+1") | Some("+") => Ok(1),
        Some("odd") | Some("-1") | Some("-") => Ok(-1),
        Some(other) => Err(Error::invalid(format!("unknown parity '{other}'"))),
    }
}

fn couplings_json(cs: &CouplingSet, n: usize, boundary: Boundary) -> serde_json::Value {
    json!({
        "couplings": cs,
        "n_sites": n,
        "boundary": boundary,
    })
}

// ------------------------------------------------------------------- vqe ---

#[derive(Args)]
struct VqeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    layers: Option<usize>,
    /// even | odd
    #[arg(long)]
    parity: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

fn vqe_config(a: &VqeArgs, r: &Resolved, seed: u64) -> Result<VqeConfig> {
    let layers = r
        .usize(a.layers, "layers")?
        .ok_or_else(|| Error::invalid("missing required --layers"))?;
    let mut config = VqeConfig::new(layers, seed);
    if let Some(t) = r.usize(a.trials, "trials")? {
        config.trials = t;
    }
    if let Some(t) = r.f64(a.tol, "tol")? {
        config.tolerance = t;
    }
    if let Some(m) = r.usize(a.max_iters, "max_iters")? {
        config.max_iterations = m;
    }
    config.validate()?;
    Ok(config)
}

fn cmd_vqe(a: VqeArgs) -> Result<()> {
    let start = Instant::now();
    let r = Resolved::new(&a.model)?;
    let common = resolve_common(&a.model, &r)?;
    let parity = parse_parity(r.string(&a.parity, "parity"))?;
    let config = vqe_config(&a, &r, common.seed)?;
    let result = vqe::optimize(&common.cs, common.n_sites, &config, parity)?;
    if !result.converged {
        eprintln!("warning: best trial hit the iteration cap without meeting the tolerance");
    }
    let result_path = common.out.join("vqe_result.json");
    let angles_path = common.out.join("angles.txt");
    formats::write_json(
        &result_path,
        &json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "vqe": config,
            "parity": parity,
            "result": result,
        }),
    )?;
    formats::save_angles(&angles_path, &result.best_angles)?;
    let mut manifest = formats::RunManifest::new(
        "vqe",
        json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "vqe": config,
            "parity": parity,
        }),
    );
    manifest.record(&result_path)?;
    manifest.record(&angles_path)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.save(&common.out.join("manifest.json"))?;
    println!(
        "vqe: E = {:.12} (parity {:+}), best of {} trials -> {}",
        result.best_energy,
        parity,
        config.trials,
        result_path.display()
    );
    Ok(())
}

// --------------------------------------------------------------- winding ---

#[derive(Args)]
struct WindingArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// damping rate; repeat for a sweep
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    #[arg(long, default_value_t = 5.0)]
    tdelta: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// ground-state source: vqe | ed
    #[arg(long, default_value = "vqe")]
    gs: String,
    /// reuse optimized angles instead of re-running VQE
    #[arg(long)]
    angles: Option<PathBuf>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// overlap backend for spot checks; the matrix pipeline itself is direct
    #[arg(long, default_value = "direct")]
    backend: String,
    #[arg(long)]
    shots: Option<u64>,
}

fn cmd_winding(a: WindingArgs) -> Result<()> {
    let start = Instant::now();
    let r = Resolved::new(&a.model)?;
    let common = resolve_common(&a.model, &r)?;
    let deltas = if a.deltas.is_empty() { vec![0.15] } else { a.deltas.clone() };
    let _backend: Backend = a.backend.parse()?; // validated; pipeline is direct
    for &d in &deltas {
        let cfg = topo::GreenConfig { delta: d, t_delta: a.tdelta, dt: a.dt, backend: Backend::Direct, shots: a.shots, seed: common.seed };
        cfg.validate()?;
        if cfg.is_loose_cutoff() {
            eprintln!("warning: T*delta = {} < 3; truncation error may be visible", a.tdelta);
        }
    }
    let (gs_state, gs_descr) = match a.gs.as_str() {
        "ed" => {
            let (e, state) = ed::ground_in_parity(&common.cs, common.n_sites, Boundary::Open, 1)?;
            (state, json!({"source": "ed", "energy": e}))
        }
        "vqe" => {
            let angles = match &a.angles {
                Some(path) => formats::load_angles(path)?,
                None => {
                    let layers = r
                        .usize(a.layers, "layers")?
                        .ok_or_else(|| Error::invalid("--gs vqe needs --angles or --layers"))?;
                    let mut config = VqeConfig::new(layers, common.seed);
                    if let Some(t) = r.usize(a.trials, "trials")? {
                        config.trials = t;
                    }
                    let res = vqe::optimize(&common.cs, common.n_sites, &config, 1)?;
                    res.best_angles
                }
            };
            if angles.n_sites != common.n_sites {
                return Err(Error::invalid("angle file is for a different N"));
            }
            let state = vqe::prepare_state(common.n_sites, angles.layers, &angles, 1)?;
            (state, json!({"source": "vqe", "layers": angles.layers}))
        }
        other => return Err(Error::invalid(format!("unknown --gs '{other}'"))),
    };

    let mats = topo::green_matrices(&gs_state, &common.cs, &deltas, a.tdelta, a.dt)?;
    let mut manifest = formats::RunManifest::new(
        "winding",
        json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "deltas": deltas,
            "tdelta": a.tdelta,
            "dt": a.dt,
            "gs": gs_descr,
            "seed": common.seed,
        }),
    );
    let mut results = Vec::new();
    let mut failure: Option<Error> = None;
    for (i, g) in mats.iter().enumerate() {
        let zk = topo::zk_series(g, common.n_sites);
        let csv = common.out.join(format!("zk_delta{}.csv", deltas[i]));
        formats::write_zk_csv(&csv, &zk)?;
        manifest.record(&csv)?;
        match topo::winding_from_zk(&zk) {
            Ok(w) => results.push(json!({"delta": deltas[i], "winding": w})),
            Err(e) => {
                let diag = topo::raw_increments(&zk);
                results.push(json!({
                    "delta": deltas[i],
                    "error": e.to_string(),
                    "increments": diag,
                }));
                eprintln!("delta = {}: {e}", deltas[i]);
                failure.get_or_insert(e);
            }
        }
    }
    let json_path = common.out.join("winding.json");
    formats::write_json(
        &json_path,
        &json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "tdelta": a.tdelta,
            "dt": a.dt,
            "gs": gs_descr,
            "results": results,
        }),
    )?;
    manifest.record(&json_path)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.save(&common.out.join("manifest.json"))?;
    match failure {
        Some(e) => Err(e),
        None => {
            println!("winding -> {}", json_path.display());
            Ok(())
        }
    }
}

// ------------------------------------------------------------------- mzm ---

#[derive(Args)]
struct MzmArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// ground-state source: vqe | ed
    #[arg(long, default_value = "vqe")]
    gs: String,
    /// direct | circuit
    #[arg(long, default_value = "direct")]
    backend: String,
}

fn cmd_mzm(a: MzmArgs) -> Result<()> {
    let start = Instant::now();
    let r = Resolved::new(&a.model)?;
    let common = resolve_common(&a.model, &r)?;
    let backend: MzmBackend = a.backend.parse()?;
    let profile = match a.gs.as_str() {
        "ed" => mzm::profile_from_ed(&common.cs, common.n_sites)?,
        "vqe" => {
            let layers = r
                .usize(a.layers, "layers")?
                .ok_or_else(|| Error::invalid("--gs vqe needs --layers"))?;
            let mut config = VqeConfig::new(layers, common.seed);
            if let Some(t) = r.usize(a.trials, "trials")? {
                config.trials = t;
            }
            let (p, _, _) = mzm::profile(&common.cs, common.n_sites, &config, backend)?;
            if !p.converged {
                eprintln!("warning: a parity-sector VQE run did not converge; profile is flagged");
            }
            p
        }
        other => return Err(Error::invalid(format!("unknown --gs '{other}'"))),
    };
    let csv = common.out.join("mzm_profile.csv");
    let json_path = common.out.join("mzm.json");
    formats::write_profile_csv(&csv, &profile)?;
    formats::write_json(
        &json_path,
        &json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "gs": a.gs,
            "backend": a.backend,
            "profile": profile,
        }),
    )?;
    let mut manifest = formats::RunManifest::new(
        "mzm",
        json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "gs": a.gs,
            "backend": a.backend,
            "seed": common.seed,
        }),
    );
    manifest.record(&csv)?;
    manifest.record(&json_path)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.save(&common.out.join("manifest.json"))?;
    println!("mzm profile -> {}", csv.display());
    Ok(())
}

// -------------------------------------------------------------------- tb ---

#[derive(Args)]
struct TbArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 2000)]
    k_resolution: usize,
}

fn cmd_tb(a: TbArgs) -> Result<()> {
    let start = Instant::now();
    let r = Resolved::new(&a.model)?;
    let common = resolve_common(&a.model, &r)?;
    let csv = common.out.join("tb_table.csv");
    formats::write_tb_csv(&csv, &common.cs, a.k_resolution)?;
    let winding = topo::tb_winding(&common.cs, a.k_resolution)?;
    let (even, odd) = topo::tb_pbc_sector_energies(&common.cs, common.n_sites)?;
    let svd = mzm::tb_svd(&common.cs, common.n_sites)?;
    let json_path = common.out.join("tb.json");
    formats::write_json(
        &json_path,
        &json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "k_resolution": a.k_resolution,
            "winding": winding,
            "pbc_ground_energy": {"even": even, "odd": odd},
            "svd": svd,
        }),
    )?;
    let mut manifest = formats::RunManifest::new(
        "tb",
        json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "k_resolution": a.k_resolution,
        }),
    );
    manifest.record(&csv)?;
    manifest.record(&json_path)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.save(&common.out.join("manifest.json"))?;
    println!("tb: N_w = {winding} -> {}", json_path.display());
    Ok(())
}

// -------------------------------------------------------------------- ed ---

#[derive(Args)]
struct EdArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// damping for the exact winding; repeat for a sweep
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// optional eigen-decomposition cache directory
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn cmd_ed(a: EdArgs) -> Result<()> {
    let start = Instant::now();
    let r = Resolved::new(&a.model)?;
    let common = resolve_common(&a.model, &r)?;
    let basis = EdBasis::for_boundary(common.boundary);
    let key = formats::eigen_cache_key(&common.cs, common.n_sites, common.boundary, basis);
    let cache_path = a.cache.as_ref().map(|dir| dir.join(format!("eig-{key}.bin")));
    let blocks = match &cache_path {
        Some(p) if p.exists() => match formats::load_eigen_cache(p, &key)? {
            Some(b) => b,
            None => ed::solve_parity_blocks(&common.cs, common.n_sites, common.boundary, basis)?,
        },
        _ => {
            let b = ed::solve_parity_blocks(&common.cs, common.n_sites, common.boundary, basis)?;
            if let Some(p) = &cache_path {
                std::fs::create_dir_all(p.parent().unwrap())?;
                formats::save_eigen_cache(p, &key, &b)?;
            }
            b
        }
    };
    let oracle = GreenOracle::from_blocks(&blocks)?;
    let mut windings = Vec::new();
    let mut failure = None;
    for &d in &a.deltas {
        match oracle.exact_winding(d) {
            Ok(w) => windings.push(json!({"delta": d, "winding": w})),
            Err(e) => {
                windings.push(json!({"delta": d, "error": e.to_string()}));
                failure.get_or_insert(e);
            }
        }
    }
    let json_path = common.out.join("ed.json");
    formats::write_json(
        &json_path,
        &json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "energies": {
                "even": blocks.even.energies[0],
                "odd": blocks.odd.energies[0],
                "even_gap": oracle.even_gap,
            },
            "windings": windings,
        }),
    )?;
    let mut manifest = formats::RunManifest::new(
        "ed",
        json!({
            "model": couplings_json(&common.cs, common.n_sites, common.boundary),
            "deltas": a.deltas,
        }),
    );
    manifest.record(&json_path)?;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    manifest.save(&common.out.join("manifest.json"))?;
    match failure {
        Some(e) => Err(e),
        None => {
            println!(
                "ed: E+ = {:.12}, E- = {:.12} -> {}",
                blocks.even.energies[0],
                blocks.odd.energies[0],
                json_path.display()
            );
            Ok(())
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::Format(_)
        | Error::UnsupportedSize(_)
        | Error::ResourceLimit(_) => 2,
        Error::IllDefinedWinding(_) | Error::Degenerate(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Vqe(a) => cmd_vqe(a),
        Command::Winding(a) => cmd_winding(a),
        Command::Mzm(a) => cmd_mzm(a),
        Command::Tb(a) => cmd_tb(a),
        Command::Ed(a) => cmd_ed(a),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
