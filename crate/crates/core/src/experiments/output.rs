use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// Shortest exact text form: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename, so
/// readers never observe a partial file.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// A CSV table built in memory and written atomically.
#[derive(Debug)]
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header.iter().map(AsRef::as_ref))?;
        Ok(Self { writer })
    }

    pub fn row<S: AsRef<[u8]>>(&mut self, fields: impl IntoIterator<Item = S>) -> Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| std::io::Error::other(e.to_string()).into())
    }

    pub fn write(self, dir: &Path, name: &str) -> Result<PathBuf> {
        write_atomic(dir, name, &self.into_bytes()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.0, 1.0, 0.1, 1.0 / 3.0, 6857.2056129294915, 1e-300, f64::MAX, -2.5e17] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn table_writes_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(&["a", "b"]).unwrap();
        t.row(["1", "x,y"]).unwrap();
        let path = t.write(dir.path(), "t.csv").unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
