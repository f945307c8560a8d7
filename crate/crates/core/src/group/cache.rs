//! Versioned binary cache of enumerated group tables.
//!
//! Layout (little-endian):
//! `"NCGT"`, format version `u32`, code version (len-prefixed UTF-8),
//! family (len-prefixed JSON), order `u64`, width `u32`,
//! generator count `u32` and indices `u32`, then `order × width` words `u16`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{carrier_for, GroupError, GroupFamily, GroupTable, Word};

const MAGIC: &[u8; 4] = b"NCGT";
pub const FORMAT_VERSION: u32 = 1;

/// Identifies the code that wrote a cache; a mismatch invalidates it.
pub fn code_version() -> String {
    format!("{}+fmt{}", env!("CARGO_PKG_VERSION"), FORMAT_VERSION)
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a group cache file")]
    BadMagic,
    #[error("cache written by {found}, expected {expected}")]
    VersionMismatch { found: String, expected: String },
    #[error("corrupt cache: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Cache file path for a family inside `dir`.
pub fn cache_path(dir: &Path, family: &GroupFamily) -> PathBuf {
    dir.join(format!("{}-{}.ncgt", family.slug(), code_version()))
}

pub fn write_table(w: &mut impl Write, table: &GroupTable) -> io::Result<()> {
    let put_str = |w: &mut dyn Write, s: &str| -> io::Result<()> {
        w.write_all(&(s.len() as u32).to_le_bytes())?;
        w.write_all(s.as_bytes())
    };
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    put_str(w, &code_version())?;
    let family = serde_json::to_string(&table.family()).map_err(io::Error::other)?;
    put_str(w, &family)?;
    w.write_all(&(table.order() as u64).to_le_bytes())?;
    w.write_all(&(table.carrier().width() as u32).to_le_bytes())?;
    w.write_all(&(table.generators().len() as u32).to_le_bytes())?;
    for &g in table.generators() {
        w.write_all(&(g as u32).to_le_bytes())?;
    }
    let mut body = Vec::with_capacity(table.raw_data().len() * 2);
    for &x in table.raw_data() {
        body.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&body)
}

fn read_u32(r: &mut impl Read) -> Result<u32, CacheError> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_str(r: &mut impl Read) -> Result<String, CacheError> {
    let len = read_u32(r)? as usize;
    if len > 1 << 16 {
        return Err(CacheError::Corrupt("oversized header string".into()));
    }
    let mut b = vec![0; len];
    r.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|_| CacheError::Corrupt("header is not UTF-8".into()))
}

pub fn read_table(r: &mut impl Read) -> Result<GroupTable, CacheError> {
    let mut magic = [0; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let fmt = read_u32(r)?;
    let version = read_str(r)?;
    if fmt != FORMAT_VERSION || version != code_version() {
        return Err(CacheError::VersionMismatch {
            found: version,
            expected: code_version(),
        });
    }
    let family: GroupFamily = serde_json::from_str(&read_str(r)?)
        .map_err(|e| CacheError::Corrupt(format!("family: {e}")))?;
    let mut b8 = [0; 8];
    r.read_exact(&mut b8)?;
    let order = u64::from_le_bytes(b8);
    let width = read_u32(r)? as usize;
    let carrier = carrier_for(&family)?;
    if width != carrier.width() || order == 0 || order > 1 << 26 {
        return Err(CacheError::Corrupt("inconsistent header".into()));
    }
    let ngens = read_u32(r)? as usize;
    if ngens > 1024 {
        return Err(CacheError::Corrupt("too many generators".into()));
    }
    let gens = (0..ngens)
        .map(|_| read_u32(r).map(|g| g as usize))
        .collect::<Result<Vec<_>, _>>()?;
    let words = order as usize * width;
    let mut body = vec![0u8; words * 2];
    r.read_exact(&mut body)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(CacheError::Corrupt("trailing bytes".into()));
    }
    let data: Vec<Word> = body
        .chunks_exact(2)
        .map(|c| Word::from_le_bytes([c[0], c[1]]))
        .collect();
    Ok(GroupTable::from_elements(family, carrier, data, gens)?)
}

/// Writes `table` to `path` through a temporary file and a rename.
pub fn save(path: &Path, table: &GroupTable) -> Result<(), CacheError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = io::BufWriter::new(fs::File::create(&tmp)?);
        write_table(&mut f, table)?;
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<GroupTable, CacheError> {
    let mut f = io::BufReader::new(fs::File::open(path)?);
    read_table(&mut f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_linear, build_named, LinearKind, NamedGroup};

    #[test]
    fn round_trip_is_bit_exact() {
        for g in [
            build_linear(LinearKind::Psl, 2, 7).unwrap(),
            build_named(NamedGroup::Dihedral(5)).unwrap(),
        ] {
            let mut buf = Vec::new();
            write_table(&mut buf, &g).unwrap();
            let h = read_table(&mut buf.as_slice()).unwrap();
            assert_eq!(h.family(), g.family());
            assert_eq!(h.raw_data(), g.raw_data());
            assert_eq!(h.generators(), g.generators());
            assert_eq!(h.identity(), g.identity());
        }
    }

    #[test]
    fn rejects_corruption() {
        let g = build_named(NamedGroup::Symmetric(3)).unwrap();
        let mut buf = Vec::new();
        write_table(&mut buf, &g).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(
            read_table(&mut bad.as_slice()),
            Err(CacheError::BadMagic)
        ));
        let truncated = &buf[..buf.len() - 3];
        assert!(read_table(&mut &truncated[..]).is_err());
        let mut dup = buf.clone();
        let n = dup.len();
        // duplicate the last element over the one before it
        let w = 3 * 2;
        let last = dup[n - w..].to_vec();
        dup[n - 2 * w..n - w].copy_from_slice(&last);
        assert!(read_table(&mut dup.as_slice()).is_err());
        let mut ver = buf.clone();
        ver[4] = 99;
        assert!(matches!(
            read_table(&mut ver.as_slice()),
            Err(CacheError::VersionMismatch { .. })
        ));
    }

    #[test]
    fn save_and_load_file() {
        let dir = tempfile::tempdir().unwrap();
        let g = build_linear(LinearKind::Sl, 2, 5).unwrap();
        let path = cache_path(dir.path(), &g.family());
        save(&path, &g).unwrap();
        let h = load(&path).unwrap();
        assert_eq!(h.raw_data(), g.raw_data());
    }
}
