//! On-disk store of reduced Groebner bases, keyed by a content hash of the
//! ring, the order and the generators. Enabled when `INVDEPTH_CACHE_DIR` is
//! set; every file carries a checksum of its body.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "INVDEPTH_CACHE_DIR";

static ENABLED: AtomicBool = AtomicBool::new(true);

pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::SeqCst);
}

pub fn dir() -> Option<PathBuf> {
    if !ENABLED.load(Ordering::SeqCst) {
        return None;
    }
    std::env::var_os(ENV_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn digest(data: &str) -> String {
    Sha256::digest(data.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn path(key: &str) -> Option<PathBuf> {
    dir().map(|d| d.join(format!("{key}.gb")))
}

pub fn load(key: &str) -> Result<Option<String>> {
    let Some(p) = path(key) else { return Ok(None) };
    let text = match fs::read_to_string(&p) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => {
            return Err(Error::Io {
                path: p.display().to_string(),
                source: e,
            })
        }
    };
    let (first, body) = text.split_once('\n').unwrap_or((&text, ""));
    match first.strip_prefix("# sha256 ") {
        Some(h) if h == digest(body) => Ok(Some(body.to_string())),
        _ => Err(Error::Verification(format!(
            "corrupt cache entry {}",
            p.display()
        ))),
    }
}

pub fn store(key: &str, body: &str) -> Result<()> {
    let Some(p) = path(key) else { return Ok(()) };
    let io = |e| Error::Io {
        path: p.display().to_string(),
        source: e,
    };
    if let Some(d) = p.parent() {
        fs::create_dir_all(d).map_err(io)?;
    }
    let tmp = p.with_extension("tmp");
    fs::write(&tmp, format!("# sha256 {}\n{body}", digest(body))).map_err(io)?;
    fs::rename(&tmp, &p).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(digest("").len(), 64);
        assert!(digest("abc").starts_with("ba7816bf"));
    }
}
