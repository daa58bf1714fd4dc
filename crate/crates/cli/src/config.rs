//! Run configuration merged from defaults, an optional key = value file,
//! and command-line flags (flags win). The full merged view is echoed into
//! every report for provenance.

use crate::Common;
use anyhow::Context;
use hexphase::spectra::SolveOptions;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub rows: usize,
    pub cols: usize,
    pub g_t: f64,
    pub g_c: f64,
    pub k: usize,
    pub tol: f64,
    pub cluster_tol: f64,
    pub seed: u64,
    pub workers: usize,
    pub cache_dir: String,
    pub format: String,
    pub out: Option<String>,
    pub no_cache: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rows: 3,
            cols: 3,
            g_t: 1.0,
            g_c: 1.0,
            k: 20,
            tol: 1e-10,
            cluster_tol: 1e-8,
            seed: 7,
            workers: 0,
            cache_dir: String::new(),
            format: "json".into(),
            out: None,
            no_cache: false,
        }
    }
}

impl RunConfig {
    pub fn load(common: &Common) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &common.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {path}"))?;
            cfg.apply_file(&text)?;
        }
        if let Some(rows) = common.rows {
            cfg.rows = rows;
        }
        if let Some(cols) = common.cols {
            cfg.cols = cols;
        }
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        if let Some(tol) = common.tol {
            cfg.tol = tol;
        }
        if let Some(ct) = common.cluster_tol {
            cfg.cluster_tol = ct;
        }
        if let Some(w) = common.workers {
            cfg.workers = w;
        }
        if let Some(f) = &common.format {
            cfg.format = f.clone();
        }
        cfg.out = common.out.clone();
        cfg.no_cache = common.no_cache;
        cfg.cache_dir = common
            .cache_dir
            .clone()
            .or_else(|| std::env::var("HEXPHASE_CACHE_DIR").ok())
            .unwrap_or_else(|| ".hexphase-cache".into());
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> anyhow::Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("config line {} has no '='", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = || anyhow::anyhow!("bad value {value:?} for {key} (line {})", lineno + 1);
            match key {
                "rows" => self.rows = value.parse().map_err(|_| bad())?,
                "cols" => self.cols = value.parse().map_err(|_| bad())?,
                "gt" => self.g_t = value.parse().map_err(|_| bad())?,
                "gc" => self.g_c = value.parse().map_err(|_| bad())?,
                "k" => self.k = value.parse().map_err(|_| bad())?,
                "tol" => self.tol = value.parse().map_err(|_| bad())?,
                "cluster_tol" => self.cluster_tol = value.parse().map_err(|_| bad())?,
                "seed" => self.seed = value.parse().map_err(|_| bad())?,
                "workers" => self.workers = value.parse().map_err(|_| bad())?,
                "cache_dir" => self.cache_dir = value.to_string(),
                "format" => self.format = value.to_string(),
                other => anyhow::bail!("unknown config key {other:?} (line {})", lineno + 1),
            }
        }
        Ok(())
    }

    pub fn apply_couplings(&mut self, gt: Option<f64>, gc: Option<f64>, k: Option<usize>) {
        if let Some(v) = gt {
            self.g_t = v;
        }
        if let Some(v) = gc {
            self.g_c = v;
        }
        if let Some(v) = k {
            self.k = v;
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            k: self.k,
            tol: self.tol,
            cluster_tol: self.cluster_tol,
            seed: self.seed,
            max_iter: 2000,
            block: None,
        }
    }

    /// Worker-pool sizing; must run before the first parallel region.
    pub fn init_workers(&self) {
        if self.workers > 0 {
            std::env::set_var("RAYON_NUM_THREADS", self.workers.to_string());
        }
    }

    /// Full configuration echo, sorted by key.
    pub fn echo(&self, command: &str) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("command".into(), command.to_string());
        map.insert("rows".into(), self.rows.to_string());
        map.insert("cols".into(), self.cols.to_string());
        map.insert("gt".into(), self.g_t.to_string());
        map.insert("gc".into(), self.g_c.to_string());
        map.insert("k".into(), self.k.to_string());
        map.insert("tol".into(), self.tol.to_string());
        map.insert("cluster_tol".into(), self.cluster_tol.to_string());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("workers".into(), self.workers.to_string());
        map.insert("format".into(), self.format.clone());
        map
    }

    /// Canonical request serialization for the cache key.
    pub fn request_string(&self, command: &str, instance_hash: &str) -> String {
        let mut parts: Vec<String> = self
            .echo(command)
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        parts.push(format!("instance={instance_hash}"));
        parts.push(format!("version={}", env!("CARGO_PKG_VERSION")));
        parts.join("\n")
    }

    pub fn output_kind(&self) -> crate::OutputKind {
        if self.format == "csv" {
            crate::OutputKind::Csv
        } else {
            crate::OutputKind::Json
        }
    }
}
