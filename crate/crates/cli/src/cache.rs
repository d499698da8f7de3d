//! Persistent coefficient cache.
//!
//! The moment table and the mode-coefficient table are the dominant
//! shared work across runs, so they can be persisted as a JSON file of
//! decimal num/den strings. The file carries a format version and a
//! SHA-256 checksum of its payload: anything that fails to parse or
//! verify is ignored with a warning and recomputed, so a damaged cache
//! can cost time but never correctness. Writes go through a temp file
//! and an atomic rename.

use std::path::{Path, PathBuf};

use anyhow::{ensure, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use spheremass_core::exactnum::{ExactValue, Rational};
use spheremass_core::{integrals, mass};

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV_VAR: &str = "SPHEREMASS_CACHE_DIR";
const CACHE_FILE: &str = "coefficients-v1.json";

#[derive(Debug, Serialize, Deserialize)]
struct EntryJson {
    i: u32,
    j: u32,
    a_num: String,
    a_den: String,
    b_num: String,
    b_den: String,
}

#[derive(Debug, Serialize, Deserialize, Default)]
struct Payload {
    /// Moments of the source term, keyed by (p, q).
    moments: Vec<EntryJson>,
    /// Mode coefficients, keyed by (j, k).
    modes: Vec<EntryJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFileJson {
    version: u32,
    sha256: String,
    payload: Payload,
}

fn entry_of(i: u32, j: u32, v: &ExactValue) -> EntryJson {
    EntryJson {
        i,
        j,
        a_num: v.a.numer().to_string(),
        a_den: v.a.denom().to_string(),
        b_num: v.b.numer().to_string(),
        b_den: v.b.denom().to_string(),
    }
}

fn entry_value(e: &EntryJson) -> anyhow::Result<(u32, u32, ExactValue)> {
    let parse = |num: &str, den: &str| -> anyhow::Result<Rational> {
        let n: num_bigint::BigInt = num.parse().context("bad numerator")?;
        let d: num_bigint::BigInt = den.parse().context("bad denominator")?;
        ensure!(d > num_bigint::BigInt::from(0), "nonpositive denominator");
        Ok(Rational::new(n, d))
    };
    Ok((
        e.i,
        e.j,
        ExactValue::new(parse(&e.a_num, &e.a_den)?, parse(&e.b_num, &e.b_den)?),
    ))
}

fn payload_digest(payload: &Payload) -> String {
    let bytes = serde_json::to_vec(payload).expect("payload serializes");
    let mut h = Sha256::new();
    h.update(&bytes);
    hex_string(&h.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Resolve the cache directory: explicit flag first, then environment.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from)
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE)
}

/// Load a cache file and seed the in-process tables. Problems are
/// reported as warnings and the cache is simply not used.
pub fn load(dir: &Path) {
    let path = cache_path(dir);
    if !path.exists() {
        return;
    }
    match try_load(&path) {
        Ok((moments, modes)) => {
            eprintln!(
                "cache: loaded {} moment and {} mode entries from {}",
                moments, modes, path.display()
            );
        }
        Err(err) => {
            eprintln!("cache: ignoring {}: {err:#}", path.display());
        }
    }
}

fn try_load(path: &Path) -> anyhow::Result<(usize, usize)> {
    let text = std::fs::read_to_string(path)?;
    let file: CacheFileJson = serde_json::from_str(&text).context("unparseable cache file")?;
    ensure!(
        file.version == CACHE_VERSION,
        "cache version {} != supported {}",
        file.version,
        CACHE_VERSION
    );
    ensure!(
        payload_digest(&file.payload) == file.sha256,
        "cache checksum mismatch (corrupted file)"
    );
    let moments: Vec<_> = file
        .payload
        .moments
        .iter()
        .map(entry_value)
        .collect::<anyhow::Result<_>>()?;
    let modes: Vec<_> = file
        .payload
        .modes
        .iter()
        .map(entry_value)
        .collect::<anyhow::Result<_>>()?;
    let counts = (moments.len(), modes.len());
    integrals::moment_cache_seed(moments);
    mass::mode_cache_seed(modes);
    Ok(counts)
}

/// Store the current in-process tables atomically.
pub fn store(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating cache directory {}", dir.display()))?;
    let payload = Payload {
        moments: integrals::moment_cache_snapshot()
            .iter()
            .map(|(p, q, v)| entry_of(*p, *q, v))
            .collect(),
        modes: mass::mode_cache_snapshot()
            .iter()
            .map(|(j, k, v)| entry_of(*j, *k, v))
            .collect(),
    };
    let file = CacheFileJson {
        version: CACHE_VERSION,
        sha256: payload_digest(&payload),
        payload,
    };
    let text = serde_json::to_string(&file)?;
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::fs::write(tmp.path(), text.as_bytes())?;
    tmp.persist(cache_path(dir))
        .map_err(|e| anyhow::anyhow!("atomic rename failed: {e}"))?;
    Ok(())
}

/// Best-effort store: cache trouble is a warning, never a failure.
pub fn store_warn(dir: &Path) {
    if let Err(err) = store(dir) {
        eprintln!("cache: could not store to {}: {err:#}", dir.display());
    }
}

pub fn clear(dir: &Path) -> anyhow::Result<()> {
    let path = cache_path(dir);
    if path.exists() {
        std::fs::remove_file(&path)?;
        println!("removed {}", path.display());
    } else {
        println!("no cache file at {}", path.display());
    }
    Ok(())
}

pub fn info(dir: &Path) {
    let path = cache_path(dir);
    if !path.exists() {
        println!("no cache file at {}", path.display());
        return;
    }
    match try_load(&path) {
        Ok((moments, modes)) => {
            let len = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            println!(
                "{}: version {}, {} moment entries, {} mode entries, {} bytes",
                path.display(),
                CACHE_VERSION,
                moments,
                modes,
                len
            );
        }
        Err(err) => println!("{}: unusable ({err:#})", path.display()),
    }
}
