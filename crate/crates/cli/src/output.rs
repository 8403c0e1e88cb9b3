use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::Format;

/// Output destination. Every record is flushed as soon as it is written,
/// so interrupted scans keep their completed rows.
pub struct Sink {
    format: Format,
    w: Box<dyn Write>,
    header_done: bool,
}

impl Sink {
    pub fn open(format: Format, out: Option<&Path>) -> CliResult<Self> {
        let w: Box<dyn Write> = match out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| CliError::Read {
                path: path.display().to_string(),
                source,
            })?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink { format, w, header_done: false })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// One JSON object per line.
    pub fn json<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        serde_json::to_writer(&mut self.w, value)?;
        self.w.write_all(b"\n")?;
        self.w.flush()?;
        Ok(())
    }

    /// One CSV record; the header comes from the first record's fields.
    pub fn csv<T: Serialize>(&mut self, row: &T) -> CliResult<()> {
        let mut c = csv::WriterBuilder::new().has_headers(!self.header_done).from_writer(&mut self.w);
        c.serialize(row)?;
        c.flush()?;
        drop(c);
        self.header_done = true;
        self.w.flush()?;
        Ok(())
    }

    /// JSON or CSV according to the format.
    pub fn emit<J: Serialize, R: Serialize>(&mut self, json: &J, row: &R) -> CliResult<()> {
        match self.format {
            Format::Json => self.json(json),
            Format::Csv => self.csv(row),
        }
    }
}
