//! Run configuration, the end-to-end pipeline, the JSON report and the
//! on-disk cache of ideal class representatives.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{classical_dimension, hilbert_consistency, span_rank, HilbertReport, SpanReport};
use crate::brandt::{brandt, cuspidal_eigenvalues, hecke_property_suite, BrandtMatrix, Eigenvalues, HeckeReport};
use crate::error::{Error, Result};
use crate::field::{is_prime, AlgInt, Field, PrimeIdeal};
use crate::linalg::{Rat, ZLattice};
use crate::orders::{
    ideal_classes, level_one_order, mass_formula, reduced_discriminant, standard_order, IdealClass, Mode, Order,
};
use crate::quadratic::{gram_and_level, hom_module};
use crate::quaternion::QuaternionAlgebra;
use crate::theta::{theta, ThetaSeries};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest norm of the default Hecke primes.
pub const DEFAULT_HECKE_NORM: i64 = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub d: i64,
    pub p: i64,
    pub mode: Mode,
    pub bound: i64,
    /// Rational prime below the neighbour prime; chosen automatically if absent.
    pub aux_prime: Option<i64>,
    /// Rational primes whose prime ideals index Brandt matrices; empty means
    /// every prime of norm at most [`DEFAULT_HECKE_NORM`].
    pub hecke_primes: Vec<i64>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(d: i64, p: i64, mode: Mode, bound: i64) -> RunConfig {
        RunConfig {
            d,
            p,
            mode,
            bound,
            aux_prime: None,
            hecke_primes: Vec::new(),
            out: None,
            cache_dir: None,
            workers: 1,
        }
    }
}

/// Everything derived from a validated configuration.
struct Context {
    field: Field,
    alg: QuaternionAlgebra,
    aux: PrimeIdeal,
    hecke: Vec<PrimeIdeal>,
}

fn validate(config: &RunConfig) -> Result<Context> {
    let field = Field::new(config.d)?;
    if config.bound < 1 {
        return Err(Error::Config(format!(
            "trace bound must be positive, got {}",
            config.bound
        )));
    }
    if config.workers == 0 {
        return Err(Error::Config("worker count must be positive".into()));
    }
    let alg = QuaternionAlgebra::construct(&field, config.p)?;
    if config.mode == Mode::LevelOne && field.primes_above(config.p).iter().any(|q| q.residue_degree % 2 == 1) {
        return Err(Error::LevelOneImpossible(config.p));
    }
    let bad = |l: i64| l == config.p || field.discriminant() % l == 0 || !is_prime(l);
    let ell = match config.aux_prime {
        Some(l) if bad(l) => {
            return Err(Error::BadPrime(format!(
                "auxiliary prime {l} must be a prime not dividing {} disc(L)",
                config.p
            )))
        }
        Some(l) => l,
        None => (2..).find(|&l| !bad(l)).expect("primes are unbounded"),
    };
    let aux = field.primes_above(ell)[0].clone();
    let rational: Vec<i64> = if config.hecke_primes.is_empty() {
        (2..=DEFAULT_HECKE_NORM)
            .filter(|&q| is_prime(q) && q != config.p)
            .collect()
    } else {
        for &q in &config.hecke_primes {
            if !is_prime(q) || q == config.p {
                return Err(Error::BadPrime(format!("Hecke prime {q} must be a prime other than p")));
            }
        }
        config.hecke_primes.clone()
    };
    let mut hecke: Vec<PrimeIdeal> = rational
        .iter()
        .flat_map(|&q| field.primes_above(q))
        .filter(|q| !config.hecke_primes.is_empty() || q.norm <= DEFAULT_HECKE_NORM)
        .collect();
    hecke.sort_by_key(|q| (q.norm, field.order_key(q.generator)));
    hecke.dedup();
    Ok(Context { field, alg, aux, hecke })
}

// ---- report ---------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub field: i64,
    pub prime: i64,
    pub mode: Mode,
    pub bound: i64,
    pub aux_prime: AlgInt,
    pub hecke: Vec<AlgInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraInfo {
    pub a: i64,
    pub b: i64,
    pub ramified: Vec<AlgInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderInfo {
    pub basis: ZLattice,
    pub reduced_discriminant: AlgInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub norm: AlgInt,
    pub weight: u64,
    pub basis: ZLattice,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleInfo {
    pub i: usize,
    pub j: usize,
    pub normalizer: AlgInt,
    pub gram: Vec<Vec<AlgInt>>,
    pub determinant: AlgInt,
    pub level: AlgInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub mass: bool,
    pub levels: bool,
    pub hecke: bool,
    pub ramanujan: bool,
    pub span: Option<bool>,
    pub hilbert: Option<bool>,
}

/// The deterministic body of a run; timings are kept apart.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: ConfigEcho,
    pub algebra: AlgebraInfo,
    pub order: OrderInfo,
    pub mass: String,
    pub class_count: usize,
    pub weights: Vec<u64>,
    pub classes: Vec<ClassInfo>,
    pub modules: Vec<ModuleInfo>,
    pub theta: Vec<ThetaSeries>,
    pub brandt: Vec<BrandtMatrix>,
    pub eigenvalues: Vec<Eigenvalues>,
    pub hecke: HeckeReport,
    pub span: SpanReport,
    pub hilbert: Option<HilbertReport>,
    pub checks: Checks,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub stages: Vec<(String, f64)>,
}

impl Timings {
    fn record(&mut self, stage: &str, start: Instant) {
        let s = start.elapsed().as_secs_f64();
        info!("{stage}: {s:.3}s");
        self.stages.push((stage.to_string(), s));
    }
}

#[derive(Serialize)]
struct Output<'a> {
    #[serde(flatten)]
    report: &'a Report,
    timings: &'a Timings,
}

impl Report {
    /// The report body as pretty JSON; identical configurations give
    /// identical bytes.
    pub fn body_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The full report, timings last.
    pub fn to_json(&self, timings: &Timings) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Output { report: self, timings })?)
    }

    pub fn write(&self, timings: &Timings, path: &Path) -> Result<()> {
        fs::write(path, self.to_json(timings)? + "\n")?;
        Ok(())
    }
}

// ---- cache ----------------------------------------------------------------

/// Cached ideal class representatives for one (d, p, mode, ell).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub d: i64,
    pub p: i64,
    pub mode: Mode,
    pub ell: i64,
    pub order: Order,
    pub classes: Vec<IdealClass>,
}

pub fn cache_key(d: i64, p: i64, mode: Mode, ell: i64) -> String {
    format!("v{SCHEMA_VERSION}-d{d}-p{p}-{}-l{ell}.json", mode.as_str())
}

/// The cached order and classes, or `None` if absent, corrupt or written
/// under another key or schema.
pub fn cache_lookup(dir: &Path, d: i64, p: i64, mode: Mode, ell: i64) -> Option<(Order, Vec<IdealClass>)> {
    let path = dir.join(cache_key(d, p, mode, ell));
    let text = fs::read_to_string(&path).ok()?;
    match serde_json::from_str::<CacheEntry>(&text) {
        Ok(e) if e.schema == SCHEMA_VERSION && e.d == d && e.p == p && e.mode == mode && e.ell == ell => {
            Some((e.order, e.classes))
        }
        Ok(_) => {
            warn!("ignoring cache entry {} with mismatched key", path.display());
            None
        }
        Err(err) => {
            warn!("ignoring corrupt cache entry {}: {err}", path.display());
            None
        }
    }
}

/// Best effort; failures are logged.
pub fn cache_store(dir: &Path, entry: &CacheEntry) {
    let path = dir.join(cache_key(entry.d, entry.p, entry.mode, entry.ell));
    let result = fs::create_dir_all(dir)
        .map_err(Error::from)
        .and_then(|_| Ok(serde_json::to_string(entry)?))
        .and_then(|text| Ok(fs::write(&path, text)?));
    if let Err(err) = result {
        warn!("could not write cache entry {}: {err}", path.display());
    }
}

// ---- pipeline -------------------------------------------------------------

pub fn run(config: &RunConfig) -> Result<(Report, Timings)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_inner(config))
}

fn run_inner(config: &RunConfig) -> Result<(Report, Timings)> {
    let mut timings = Timings::default();
    let ctx = validate(config)?;
    let Context { field, alg, aux, hecke } = ctx;
    let parallel = config.workers > 1;

    let t = Instant::now();
    let mass = mass_formula(&alg, config.mode)?;
    let cached = config
        .cache_dir
        .as_deref()
        .and_then(|dir| cache_lookup(dir, config.d, config.p, config.mode, aux.p))
        .filter(|(_, cs)| cs.iter().map(|c| Rat::new(1, c.weight as i128)).sum::<Rat>() == mass);
    let (order, classes) = match cached {
        Some(hit) => {
            info!("using cached ideal classes");
            hit
        }
        None => {
            let mut order = standard_order(&alg)?;
            if config.mode == Mode::LevelOne {
                order = level_one_order(&alg, &order)?;
            }
            let classes = ideal_classes(&alg, &order, &aux, mass)?;
            if let Some(dir) = &config.cache_dir {
                cache_store(
                    dir,
                    &CacheEntry {
                        schema: SCHEMA_VERSION,
                        d: config.d,
                        p: config.p,
                        mode: config.mode,
                        ell: aux.p,
                        order: order.clone(),
                        classes: classes.clone(),
                    },
                );
            }
            (order, classes)
        }
    };
    let disc = reduced_discriminant(&alg, &order)?;
    timings.record("classes", t);
    let h = classes.len();
    let weights: Vec<u64> = classes.iter().map(|c| c.weight).collect();
    let mass_ok = weights.iter().map(|&w| Rat::new(1, w as i128)).sum::<Rat>() == mass;

    let t = Instant::now();
    let pairs: Vec<(usize, usize)> = (0..h).flat_map(|i| (0..h).map(move |j| (i, j))).collect();
    let computed: Vec<(ModuleInfo, ThetaSeries)> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<(ModuleInfo, ThetaSeries)> {
            let m = hom_module(&alg, &classes, i, j)?;
            let (determinant, level) = gram_and_level(&alg, &m)?;
            let th = theta(&field, &m, config.bound, parallel)?;
            Ok((
                ModuleInfo {
                    i,
                    j,
                    normalizer: m.normalizer,
                    gram: m.gram.clone(),
                    determinant,
                    level,
                },
                th,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    timings.record("theta", t);
    let expected_level = match config.mode {
        Mode::LevelP => field.canonical_associate(AlgInt::rational(config.p)),
        Mode::LevelOne => AlgInt::ONE,
    };
    let levels_ok = computed.iter().all(|(m, _)| m.level == expected_level);
    let (modules, flat): (Vec<ModuleInfo>, Vec<ThetaSeries>) = computed.into_iter().unzip();
    let thetas: Vec<Vec<ThetaSeries>> = flat.chunks(h).map(|c| c.to_vec()).collect();

    let t = Instant::now();
    let mut brandts = Vec::new();
    let mut eigenvalues = Vec::new();
    let mut ramanujan = true;
    for q in hecke.iter().filter(|q| field.trace(q.generator) <= config.bound) {
        let b = brandt(&field, &thetas, &weights, q.generator)?;
        if h >= 2 {
            let e = cuspidal_eigenvalues(&b, q.norm + 1)?;
            let r = 2.0 * (q.norm as f64).sqrt() + 1e-9;
            ramanujan &= e.roots.non_real == 0
                && e.roots.rational.iter().all(|&x| (x as f64).abs() <= r)
                && e.roots.irrational.iter().all(|iv| iv.lo >= -r && iv.hi <= r);
            eigenvalues.push(e);
        }
        brandts.push((q.clone(), b));
    }
    let hecke_report = hecke_property_suite(&field, &thetas, &weights, &hecke)?;
    timings.record("brandt", t);

    let t = Instant::now();
    let expected = (field.degree() == 1 && config.mode == Mode::LevelP).then(|| classical_dimension(config.p));
    let span = span_rank(&field, &thetas, expected)?;
    let hilbert = if field.degree() == 2 {
        Some(hilbert_consistency(&field, &thetas, &weights, &brandts)?)
    } else {
        None
    };
    timings.record("span", t);

    let checks = Checks {
        mass: mass_ok,
        levels: levels_ok,
        hecke: hecke_report.passed,
        ramanujan,
        span: span.verdict,
        hilbert: hilbert
            .as_ref()
            .map(|r| r.hecke_relation && r.hecke_stable && r.eisenstein_independent),
    };
    let passed = checks.mass
        && checks.levels
        && checks.hecke
        && checks.ramanujan
        && checks.span.unwrap_or(true)
        && checks.hilbert.unwrap_or(true);
    let (a, b) = alg.structure_constants();
    let report = Report {
        schema: SCHEMA_VERSION,
        config: ConfigEcho {
            field: config.d,
            prime: config.p,
            mode: config.mode,
            bound: config.bound,
            aux_prime: aux.generator,
            hecke: hecke.iter().map(|q| q.generator).collect(),
        },
        algebra: AlgebraInfo {
            a,
            b,
            ramified: alg.ramified_primes().iter().map(|q| q.generator).collect(),
        },
        order: OrderInfo {
            basis: order.lattice.lattice.clone(),
            reduced_discriminant: disc,
        },
        mass: mass.to_string(),
        class_count: h,
        weights,
        classes: classes
            .iter()
            .map(|c| ClassInfo {
                norm: c.ideal.norm,
                weight: c.weight,
                basis: c.ideal.lattice.lattice.clone(),
            })
            .collect(),
        modules,
        theta: flat,
        brandt: brandts.into_iter().map(|(_, b)| b).collect(),
        eigenvalues,
        hecke: hecke_report,
        span,
        hilbert,
        checks,
        passed,
    };
    if let Some(path) = &config.out {
        report.write(&timings, path)?;
    }
    Ok((report, timings))
}
