//! Line-oriented on-disk cache of enumerated orbits.
//!
//! One file per (q, ℓ, n, conditions hash):
//!
//! ```text
//! # lcyclic-orbits v1 q=3 ell=2 n=4 conditions=0,1:R records=36
//! 0|0,1,1,0,1|4|SRSR|6
//! ```
//!
//! A record is `beta|f1;f2;…|conductor degree|splitting at ∞,X,X+1,…|#C(F_q)`.
//! Files are written to a temporary name and renamed into place.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::enumerate::{collect_records, Conditions, EnumConfig};
use super::{points_from_splitting, KummerClass};
use crate::algebra::FieldSpec;
use crate::error::{Error, Result};
use crate::places::SplittingType;

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub class: KummerClass,
    pub conductor_degree: usize,
    /// Splitting types at the rational places, ∞ first.
    pub splitting: Vec<SplittingType>,
    pub points: u64,
}

impl OrbitRecord {
    pub fn of(class: &KummerClass, fs: &FieldSpec) -> Self {
        let splitting = class.rational_splitting(fs);
        OrbitRecord {
            class: class.clone(),
            conductor_degree: class.conductor_degree(),
            points: points_from_splitting(&splitting, fs.ell()),
            splitting,
        }
    }

    pub fn to_line(&self) -> String {
        let s: String = self.splitting.iter().map(|t| t.symbol()).collect();
        format!("{}|{}|{s}|{}", self.class.to_record(), self.conductor_degree, self.points)
    }

    pub fn from_line(line: &str, fs: &FieldSpec) -> Result<Self> {
        let bad = || Error::Cache(format!("malformed record {line:?}"));
        let mut parts = line.rsplitn(4, '|');
        let points = parts.next().ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?;
        let split = parts.next().ok_or_else(bad)?;
        let n = parts.next().ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?;
        let class = KummerClass::from_record(parts.next().ok_or_else(bad)?, fs)?;
        let splitting = split.chars().map(SplittingType::from_symbol).collect::<Option<Vec<_>>>().ok_or_else(bad)?;
        if splitting.len() != fs.q() as usize + 1 || points_from_splitting(&splitting, fs.ell()) != points {
            return Err(bad());
        }
        Ok(OrbitRecord { class, conductor_degree: n, splitting, points })
    }
}

#[derive(Debug, Clone)]
pub struct OrbitCache {
    dir: PathBuf,
}

impl OrbitCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        OrbitCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: usize, conds: &Conditions, fs: &FieldSpec) -> PathBuf {
        self.dir.join(format!("q{}-l{}-n{}-{}.orbits", fs.q(), fs.ell(), n, conds.hash_hex()))
    }

    fn header(n: usize, conds: &Conditions, fs: &FieldSpec, records: usize) -> String {
        format!(
            "# lcyclic-orbits v{CACHE_VERSION} q={} ell={} n={n} conditions={} records={records}",
            fs.q(),
            fs.ell(),
            conds.canonical_string()
        )
    }

    /// Reads a cache file; `Ok(None)` when absent.
    pub fn load(&self, n: usize, conds: &Conditions, fs: &FieldSpec) -> Result<Option<Vec<OrbitRecord>>> {
        let path = self.path_for(n, conds, fs);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let records = lines.map(|l| OrbitRecord::from_line(l, fs)).collect::<Result<Vec<_>>>()?;
        if header != Self::header(n, conds, fs, records.len()) {
            return Err(Error::Cache(format!("{}: header mismatch", path.display())));
        }
        Ok(Some(records))
    }

    pub fn store(&self, n: usize, conds: &Conditions, fs: &FieldSpec, records: &[OrbitRecord]) -> Result<PathBuf> {
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let path = self.path_for(n, conds, fs);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            writeln!(w, "{}", Self::header(n, conds, fs, records.len())).map_err(io)?;
            for r in records {
                writeln!(w, "{}", r.to_line()).map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }

    /// Cached records when present, otherwise enumerates and stores them.
    /// The flag reports a cache hit.
    pub fn load_or_compute(
        &self,
        n: usize,
        conds: &Conditions,
        fs: &FieldSpec,
        cfg: &EnumConfig,
    ) -> Result<(Vec<OrbitRecord>, bool)> {
        if let Some(r) = self.load(n, conds, fs)? {
            return Ok((r, true));
        }
        let records = collect_records(n, conds, fs, cfg)?;
        self.store(n, conds, fs, &records)?;
        Ok((records, false))
    }
}
