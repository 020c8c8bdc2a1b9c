use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

use crate::{Failure, Format};

/// Output directory plus the format used for tabular datasets.
pub struct Sink {
    dir: PathBuf,
    format: Format,
}

impl Sink {
    pub fn new(dir: PathBuf, format: Format) -> Result<Self, Failure> {
        fs::create_dir_all(&dir).map_err(|e| Failure::config(format!("{}: {e}", dir.display())))?;
        Ok(Sink { dir, format })
    }

    /// `name.csv` under `header` (written even when empty), or `name.json`.
    /// `header` must list the serialized field names of `T` in order.
    pub fn rows<T: Serialize>(&self, name: &str, header: &[&str], rows: &[T]) -> Result<(), Failure> {
        match self.format {
            Format::Json => self.json(name, &rows),
            Format::Csv => {
                let path = self.dir.join(format!("{name}.csv"));
                let mut w = csv::WriterBuilder::new().has_headers(false).from_path(&path)?;
                w.write_record(header)?;
                for r in rows {
                    w.serialize(r)?;
                }
                w.flush()?;
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<(), Failure> {
        let mut w = BufWriter::new(File::create(self.dir.join(format!("{name}.json")))?);
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        Ok(())
    }
}
