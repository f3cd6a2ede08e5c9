//! Coefficient cache files.
//!
//! Layout: `"CSP1"`, weight as little-endian `u32`, `N` as little-endian
//! `u64`, then `a(1), …, a(N)` as zig-zag LEB128 big integers. The last
//! eight bytes are the FNV-1a 64 checksum (little-endian) of everything
//! before them.

use std::fs;
use std::hash::Hasher;
use std::io;
use std::path::{Path, PathBuf};

use cuspsum_core::{eigenform, EigenformTable, FormsError};
use fnv::FnvHasher;
use num_bigint::{BigInt, BigUint, Sign};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"CSP1";
const HEADER_LEN: usize = 4 + 4 + 8;
const CHECKSUM_LEN: usize = 8;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "CUSPSUM_CACHE_DIR";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("not a coefficient cache (bad magic)")]
    BadMagic,
    #[error("checksum mismatch: stored {stored:016x}, computed {computed:016x}")]
    BadChecksum { stored: u64, computed: u64 },
    #[error("file truncated")]
    Truncated,
    #[error("{0} bytes after the last coefficient")]
    TrailingBytes(usize),
    #[error("header says N = {0}, which does not fit this platform")]
    TooLarge(u64),
    #[error(transparent)]
    Table(#[from] FormsError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: CacheError },
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

fn zigzag(v: &BigInt) -> BigUint {
    let (sign, mag) = (v.sign(), v.magnitude());
    match sign {
        Sign::Minus => (mag << 1u32) - 1u32,
        _ => mag << 1u32,
    }
}

fn unzigzag(z: BigUint) -> BigInt {
    let odd = z.bit(0);
    let half = BigInt::from(z >> 1u32);
    if odd {
        -half - 1
    } else {
        half
    }
}

fn put_varint(out: &mut Vec<u8>, v: &BigInt) {
    let digits = zigzag(v).to_radix_le(128);
    let last = digits.len() - 1;
    for (i, d) in digits.into_iter().enumerate() {
        out.push(if i == last { d } else { d | 0x80 });
    }
}

fn get_varint(bytes: &[u8], pos: &mut usize) -> Result<BigInt, CacheError> {
    let start = *pos;
    loop {
        let b = *bytes.get(*pos).ok_or(CacheError::Truncated)?;
        *pos += 1;
        if b & 0x80 == 0 {
            break;
        }
    }
    let digits: Vec<u8> = bytes[start..*pos].iter().map(|b| b & 0x7f).collect();
    let z = BigUint::from_radix_le(&digits, 128).expect("digits are below the radix");
    Ok(unzigzag(z))
}

pub fn encode(t: &EigenformTable) -> Vec<u8> {
    let n = t.n_max();
    let mut out = Vec::with_capacity(HEADER_LEN + n * 8 + CHECKSUM_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&t.weight().to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for v in &t.q_expansion()[1..] {
        put_varint(&mut out, v);
    }
    let sum = fnv1a(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

pub fn decode(bytes: &[u8]) -> Result<EigenformTable, CacheError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(CacheError::Truncated);
    }
    let (payload, tail) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = fnv1a(payload);
    if stored != computed {
        return Err(CacheError::BadChecksum { stored, computed });
    }
    let weight = u32::from_le_bytes(payload[4..8].try_into().unwrap());
    let n = u64::from_le_bytes(payload[8..16].try_into().unwrap());
    let n_usize = usize::try_from(n).map_err(|_| CacheError::TooLarge(n))?;
    // Every coefficient takes at least one byte.
    if n_usize > payload.len() - HEADER_LEN {
        return Err(CacheError::Truncated);
    }
    let mut pos = HEADER_LEN;
    let mut coeffs = Vec::with_capacity(n_usize);
    for _ in 0..n_usize {
        coeffs.push(get_varint(payload, &mut pos)?);
    }
    if pos != payload.len() {
        return Err(CacheError::TrailingBytes(payload.len() - pos));
    }
    Ok(EigenformTable::from_coefficients(weight, coeffs)?)
}

pub fn read(path: &Path) -> Result<EigenformTable, LoadError> {
    let bytes = fs::read(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    decode(&bytes).map_err(|source| LoadError::Format {
        path: path.to_owned(),
        source,
    })
}

/// Write through a temporary sibling and rename, so readers never see a
/// partial file.
pub fn write(path: &Path, t: &EigenformTable) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, encode(t))?;
    fs::rename(&tmp, path)
}

/// `$CUSPSUM_CACHE_DIR`, else `.cuspsum-cache` in the working directory.
pub fn default_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".cuspsum-cache"))
}

pub fn default_path(weight: u32, n: usize) -> PathBuf {
    default_dir().join(format!("k{weight}_n{n}.csp"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Generated,
}

#[derive(Debug, Error)]
pub enum ObtainError {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Reuse a checksum-valid cache for `(weight, n)`; otherwise generate and
/// (over)write it.
pub fn obtain(path: &Path, weight: u32, n: usize) -> Result<(EigenformTable, CacheStatus), ObtainError> {
    if let Ok(t) = read(path) {
        if t.weight() == weight && t.n_max() == n {
            return Ok((t, CacheStatus::Hit));
        }
    }
    let t = eigenform(weight, n)?;
    write(path, &t).map_err(|source| ObtainError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok((t, CacheStatus::Generated))
}
