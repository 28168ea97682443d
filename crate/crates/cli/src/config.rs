use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::Args;
use pindist::{make_field_with_cap, Backend, FieldSpec, RationalParam, SetSpec, DEFAULT_CAP};
use serde::Serialize;

/// Environment variable consulted for the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "PINDIST_THREADS";

/// q^d at which the correlation backend becomes the default for prime fields.
pub const DFT_AUTO_THRESHOLD: u64 = 1 << 16;

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Field characteristic (odd prime).
    #[arg(long)]
    pub p: u64,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Point-set spec, e.g. `full`, `sphere:1`, `random:20:seed=1`.
    #[arg(long = "set", default_value = "full")]
    pub set_spec: String,
    /// Parameter a > 1 as `num/den`.
    #[arg(long, default_value = "2/1")]
    pub a: String,
    /// Sweep backend; defaults to dft for prime fields with q^d >= 2^16.
    #[arg(long, value_parser = ["naive", "dft"])]
    pub backend: Option<String>,
    /// Output path (a directory for `verify`, a file otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Maximum q^d.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Worker threads (falls back to PINDIST_THREADS, then all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Base seed for experiments.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub k: u32,
    pub d: usize,
    pub set_spec: String,
    pub a: RationalParam,
    pub backend: Backend,
    pub out: Option<PathBuf>,
    pub cap: u64,
    pub threads: usize,
    pub threads_source: &'static str,
    pub seed: u64,
}

pub struct Resolved {
    pub config: RunConfig,
    pub field: Arc<FieldSpec>,
    pub spec: SetSpec,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Resolved> {
        let field = Arc::new(make_field_with_cap(self.p, self.k, self.cap)?);
        let spec = SetSpec::parse(&self.set_spec).context("parsing --set")?;
        let a: RationalParam = self.a.parse().context("parsing --a")?;
        let q = field.order() as u128;
        let space_size = q.checked_pow(self.d as u32).unwrap_or(u128::MAX);
        let backend = match &self.backend {
            Some(b) => b.parse()?,
            None if field.is_prime_field() && space_size >= DFT_AUTO_THRESHOLD as u128 => Backend::Dft,
            None => Backend::Naive,
        };
        let (threads, threads_source) = match self.threads {
            Some(t) => (t, "flag"),
            None => match std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()) {
                Some(t) => (t, "env"),
                None => (0, "default"),
            },
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        // A second resolve in the same process keeps the existing pool.
        drop(pool);
        let threads = rayon::current_num_threads();
        let config = RunConfig {
            p: self.p,
            k: self.k,
            d: self.d,
            set_spec: spec.render(),
            a,
            backend,
            out: self.out.clone(),
            cap: self.cap,
            threads,
            threads_source,
            seed: self.seed,
        };
        Ok(Resolved { config, field, spec })
    }
}
