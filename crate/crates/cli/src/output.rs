//! CSV and JSON artifacts, each carrying the config hash and crate versions.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

pub struct Sink {
    dir: PathBuf,
    config_sha256: String,
    verbose: bool,
}

#[derive(Serialize)]
struct Meta<'a> {
    config_sha256: &'a str,
    nonlocal_spectra: &'a str,
    nonlocal_spectra_cli: &'a str,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    meta: Meta<'a>,
    result: &'a T,
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Sink {
    pub fn new(dir: &Path, config_sha256: String, verbose: bool) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            config_sha256,
            verbose,
        })
    }

    fn meta(&self) -> Meta<'_> {
        Meta {
            config_sha256: &self.config_sha256,
            nonlocal_spectra: nonlocal_spectra::VERSION,
            nonlocal_spectra_cli: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn csv(
        &self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<()> {
        let path = self.dir.join(name);
        let mut file = BufWriter::new(File::create(&path)?);
        let m = self.meta();
        writeln!(
            file,
            "# config_sha256={}, nonlocal-spectra={}, nonlocal-spectra-cli={}",
            m.config_sha256, m.nonlocal_spectra, m.nonlocal_spectra_cli
        )?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        self.log(&path);
        Ok(())
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let path = self.dir.join(name);
        let doc = Document {
            meta: self.meta(),
            result: value,
        };
        let mut file = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut file, &doc)?;
        writeln!(file)?;
        file.flush()?;
        self.log(&path);
        Ok(())
    }

    fn log(&self, path: &Path) {
        if self.verbose {
            eprintln!("wrote {}", path.display());
        }
    }
}
