//! On-disk persistence of the rewrite blocks and the ♯ pair table.
//!
//! Each file holds a sequence of records `u32 length (LE) ‖ payload`. Integers are
//! little-endian; a sequence is `u32 len ‖ (u8 ε, u32 index)*`; a scalar is a `u32`.
//! Rewrite payload: `u32 length ‖ u32 degree ‖ u32 bockstein ‖ u32 rows ‖ (seq ‖ lin)*`
//! where a lin is `u32 terms ‖ (seq ‖ scalar)*`.
//! ♯ payload: `u8 ε1 ‖ u32 m ‖ u8 ε2 ‖ u32 n ‖ u32 terms ‖ (mono ‖ scalar)*` where a mono
//! is `u32 factors ‖ (seq ‖ u32 exponent)*` and the empty sequence stands for `[1]`.
//!
//! Imports are validated per record; a record that fails validation is skipped.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::algebra::{Algebra, BlockId, BlockRows};
use crate::arith::{Prime, Scalar};
use crate::lin::Lin;
use crate::semiring::{Semiring, SemiringElement};
use crate::sequence::{Entry, Sequence};
use crate::sharp::{PairKey, Sharp};

pub const CACHE_ENV: &str = "EOPS_CACHE_DIR";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("truncated or malformed record in {path} at byte {offset}")]
    Malformed { path: PathBuf, offset: usize },
}

/// Counts from one load.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct LoadStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone)]
pub struct MemoCache {
    dir: PathBuf,
}

impl MemoCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        MemoCache { dir: dir.into() }
    }

    /// The cache named by `EOPS_CACHE_DIR`, if set and nonempty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn rewrite_path(&self, p: Prime) -> PathBuf {
        self.dir.join(format!("rewrite-p{}.bin", p.value()))
    }

    fn sharp_path(&self, p: Prime) -> PathBuf {
        self.dir.join(format!("sharp-p{}.bin", p.value()))
    }

    pub fn save_rewrites(&self, alg: &Algebra) -> Result<usize, CacheError> {
        let blocks = alg.export_blocks();
        let records: Vec<Vec<u8>> = blocks.iter().map(|(id, rows)| encode_block(*id, rows)).collect();
        self.write_records(&self.rewrite_path(alg.p()), &records)?;
        Ok(records.len())
    }

    pub fn load_rewrites(&self, alg: &Algebra) -> Result<LoadStats, CacheError> {
        let path = self.rewrite_path(alg.p());
        let mut stats = LoadStats::default();
        for record in self.read_records(&path)? {
            let ok = decode_block(alg.p(), &record).is_some_and(|(id, rows)| alg.import_block(id, rows));
            if ok {
                stats.accepted += 1;
            } else {
                stats.rejected += 1;
            }
        }
        Ok(stats)
    }

    pub fn save_sharp(&self, sharp: &Sharp) -> Result<usize, CacheError> {
        let table = sharp.export_table();
        let records: Vec<Vec<u8>> = table.iter().map(|(k, v)| encode_pair(*k, v)).collect();
        self.write_records(&self.sharp_path(sharp.p()), &records)?;
        Ok(records.len())
    }

    pub fn load_sharp(&self, sharp: &Sharp) -> Result<LoadStats, CacheError> {
        let path = self.sharp_path(sharp.p());
        let mut stats = LoadStats::default();
        for record in self.read_records(&path)? {
            let ok = decode_pair(sharp.semiring(), &record).is_some_and(|(k, v)| sharp.import_pair(k, v));
            if ok {
                stats.accepted += 1;
            } else {
                stats.rejected += 1;
            }
        }
        Ok(stats)
    }

    /// Writes through a temporary file and a rename, so readers never see a partial file.
    fn write_records(&self, path: &Path, records: &[Vec<u8>]) -> Result<(), CacheError> {
        let io_err = |source| CacheError::Io { path: path.to_path_buf(), source };
        fs::create_dir_all(&self.dir).map_err(io_err)?;
        let mut bytes = Vec::new();
        for r in records {
            bytes.extend_from_slice(&(r.len() as u32).to_le_bytes());
            bytes.extend_from_slice(r);
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, &bytes).map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)
    }

    /// A missing file reads as no records.
    fn read_records(&self, path: &Path) -> Result<Vec<Vec<u8>>, CacheError> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(source) => return Err(CacheError::Io { path: path.to_path_buf(), source }),
        };
        let mut out = Vec::new();
        let mut r = Reader { bytes: &bytes, at: 0 };
        while r.at < bytes.len() {
            let start = r.at;
            let malformed = || CacheError::Malformed { path: path.to_path_buf(), offset: start };
            let len = r.u32().ok_or_else(malformed)? as usize;
            let body = r.take(len).ok_or_else(malformed)?;
            out.push(body.to_vec());
        }
        Ok(out)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.at.checked_add(n)?;
        let out = self.bytes.get(self.at..end)?;
        self.at = end;
        Some(out)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().expect("four bytes")))
    }

    fn sequence(&mut self) -> Option<Sequence> {
        let n = self.u32()? as usize;
        let mut entries = Vec::with_capacity(n.min(64));
        for _ in 0..n {
            let eps = self.u8()?;
            entries.push(Entry::new(eps, self.u32()?));
        }
        Some(Sequence(entries))
    }

    fn scalar(&mut self, p: Prime) -> Option<Scalar> {
        let v = self.u32()?;
        (v < p.value()).then(|| Scalar::from_u32(v))
    }

    fn finished(&self) -> bool {
        self.at == self.bytes.len()
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_sequence(out: &mut Vec<u8>, s: &Sequence) {
    put_u32(out, s.len() as u32);
    for e in s.entries() {
        out.push(e.bockstein);
        put_u32(out, e.index);
    }
}

fn encode_block(id: BlockId, rows: &[(Sequence, Lin<Sequence>)]) -> Vec<u8> {
    let mut out = Vec::new();
    put_u32(&mut out, id.0 as u32);
    put_u32(&mut out, id.1);
    put_u32(&mut out, id.2);
    put_u32(&mut out, rows.len() as u32);
    for (key, image) in rows {
        put_sequence(&mut out, key);
        put_u32(&mut out, image.len() as u32);
        for (k, c) in image.iter() {
            put_sequence(&mut out, k);
            put_u32(&mut out, c.value());
        }
    }
    out
}

fn decode_block(p: Prime, bytes: &[u8]) -> Option<(BlockId, BlockRows)> {
    let mut r = Reader { bytes, at: 0 };
    let id = (r.u32()? as usize, r.u32()?, r.u32()?);
    let rows = r.u32()?;
    let mut out = Vec::new();
    for _ in 0..rows {
        let key = r.sequence()?;
        let mut image = Lin::zero(p);
        for _ in 0..r.u32()? {
            let k = r.sequence()?;
            image.add_term(k, r.scalar(p)?);
        }
        out.push((key, image));
    }
    r.finished().then_some((id, out))
}

fn encode_pair(key: PairKey, value: &SemiringElement) -> Vec<u8> {
    let mut out = Vec::new();
    out.push(key.0);
    put_u32(&mut out, key.1);
    out.push(key.2);
    put_u32(&mut out, key.3);
    put_u32(&mut out, value.len() as u32);
    for (m, c) in value.iter() {
        put_u32(&mut out, m.factors().len() as u32);
        for (g, e) in m.factors() {
            put_sequence(&mut out, g.sequence());
            put_u32(&mut out, *e);
        }
        put_u32(&mut out, c.value());
    }
    out
}

fn decode_pair(ring: &Semiring, bytes: &[u8]) -> Option<(PairKey, SemiringElement)> {
    let p = ring.p();
    let mut r = Reader { bytes, at: 0 };
    let key = (r.u8()?, r.u32()?, r.u8()?, r.u32()?);
    let mut value = ring.zero();
    for _ in 0..r.u32()? {
        let mut mono = ring.one();
        for _ in 0..r.u32()? {
            let seq = r.sequence()?;
            let e = r.u32()?;
            let g = if seq.is_empty() { ring.bracket(1).ok()? } else { ring.generator(&seq).ok()? };
            for _ in 0..e {
                mono = ring.dot(&mono, &g);
            }
        }
        value.add_scaled(&mono, r.scalar(p)?);
    }
    r.finished().then_some((key, value))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{EElement, Ring};
    use crate::sharp::SharpOptions;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("eops-cache-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn rewrite_blocks_round_trip() {
        let p = Prime::THREE;
        let alg = Algebra::new(p);
        let gens: Vec<EElement> =
            (1..=4).flat_map(|i| [(0, i), (1, i)]).map(|(e, i)| alg.generator(Ring::E, e, i).unwrap()).collect();
        let products = |a: &Algebra| -> Vec<EElement> {
            gens.iter().flat_map(|x| gens.iter().map(move |y| a.circ(x, y).unwrap())).collect()
        };
        let expected = products(&alg);
        let cache = MemoCache::new(scratch("rewrite"));
        assert!(cache.save_rewrites(&alg).unwrap() > 0);
        let fresh = Algebra::new(p);
        let stats = cache.load_rewrites(&fresh).unwrap();
        assert_eq!(stats.rejected, 0);
        assert_eq!(fresh.export_blocks(), alg.export_blocks());
        assert_eq!(products(&fresh), expected);
        let _ = fs::remove_dir_all(cache.dir());
    }

    #[test]
    fn sharp_table_round_trip() {
        let ring = Arc::new(Semiring::new(Arc::new(Algebra::new(Prime::THREE))));
        let sharp = Sharp::new(ring.clone(), SharpOptions::default()).unwrap();
        let v = sharp.sharp_gen_pair(Entry::new(0, 1), Entry::new(1, 1)).unwrap();
        let cache = MemoCache::new(scratch("sharp"));
        let n = cache.save_sharp(&sharp).unwrap();
        let fresh = Sharp::new(ring, SharpOptions::default()).unwrap();
        assert_eq!(cache.load_sharp(&fresh).unwrap(), LoadStats { accepted: n, rejected: 0 });
        assert_eq!(fresh.export_table(), sharp.export_table());
        assert_eq!(fresh.sharp_gen_pair(Entry::new(0, 1), Entry::new(1, 1)).unwrap(), v);
        let _ = fs::remove_dir_all(cache.dir());
    }

    #[test]
    fn bad_records_are_skipped() {
        let p = Prime::TWO;
        let alg = Algebra::new(p);
        let dir = scratch("bad");
        fs::create_dir_all(&dir).unwrap();
        let cache = MemoCache::new(&dir);
        // A well-framed record whose key is a basis monomial must be refused.
        let basis_key = Sequence::from_pairs(&[(0, 1), (0, 1)]);
        let rows = vec![(basis_key.clone(), EElement::monomial(p, Ring::E, basis_key).into_terms())];
        let mut bytes = Vec::new();
        let body = encode_block((2, 2, 0), &rows);
        put_u32(&mut bytes, body.len() as u32);
        bytes.extend_from_slice(&body);
        fs::write(dir.join("rewrite-p2.bin"), &bytes).unwrap();
        assert_eq!(cache.load_rewrites(&alg).unwrap(), LoadStats { accepted: 0, rejected: 1 });
        bytes.truncate(bytes.len() - 1);
        fs::write(dir.join("rewrite-p2.bin"), &bytes).unwrap();
        assert!(matches!(cache.load_rewrites(&alg), Err(CacheError::Malformed { .. })));
        let _ = fs::remove_dir_all(&dir);
    }
}
