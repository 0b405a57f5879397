//! Buffered file emission: everything is rendered in memory first and written
//! at the end, so a failure leaves no partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            "both" => Ok(Format::Both),
            other => Err(format!("expected csv, svg or both, got `{other}`")),
        }
    }
}

/// Full precision scientific notation (17 significant digits).
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn row_cells(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub struct Outputs {
    dir: PathBuf,
    format: Format,
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    pub fn new(dir: impl Into<PathBuf>, format: Format) -> Self {
        Self {
            dir: dir.into(),
            format,
            files: Vec::new(),
        }
    }

    pub fn csv(&mut self, name: impl AsRef<Path>, csv: Csv) {
        if self.format != Format::Svg {
            self.files.push((name.as_ref().to_path_buf(), csv.into_string()));
        }
    }

    pub fn svg(&mut self, name: impl AsRef<Path>, svg: String) {
        if self.format != Format::Csv {
            self.files.push((name.as_ref().to_path_buf(), svg));
        }
    }

    /// Writes every buffered file; on failure removes whatever this call
    /// created.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut created_dirs: Vec<PathBuf> = Vec::new();
        let mut written: Vec<PathBuf> = Vec::new();
        let result = self.write_all(&mut created_dirs, &mut written);
        if result.is_err() {
            for f in written.iter().rev() {
                let _ = fs::remove_file(f);
            }
            for d in created_dirs.iter().rev() {
                let _ = fs::remove_dir(d);
            }
        }
        result.map(|()| written)
    }

    fn write_all(&self, created_dirs: &mut Vec<PathBuf>, written: &mut Vec<PathBuf>) -> Result<()> {
        for (name, content) in &self.files {
            let path = self.dir.join(name);
            if let Some(parent) = path.parent() {
                create_dirs(parent, created_dirs)?;
            }
            fs::write(&path, content).with_context(|| format!("cannot write {}", path.display()))?;
            written.push(path);
        }
        Ok(())
    }
}

/// Like `create_dir_all`, recording each directory it actually creates.
fn create_dirs(dir: &Path, created: &mut Vec<PathBuf>) -> Result<()> {
    if dir.as_os_str().is_empty() || dir.is_dir() {
        return Ok(());
    }
    if let Some(parent) = dir.parent() {
        create_dirs(parent, created)?;
    }
    fs::create_dir(dir).with_context(|| format!("cannot create directory {}", dir.display()))?;
    created.push(dir.to_path_buf());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        assert_eq!(num(9.359088829373068).parse::<f64>().unwrap(), 9.359088829373068);
    }

    #[test]
    fn format_filters_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Outputs::new(dir.path().join("o"), Format::Csv);
        let mut csv = Csv::new(&["x", "w"]);
        csv.row(&[1.0, 2.0]);
        out.csv("a.csv", csv);
        out.svg("a.svg", "<svg/>".into());
        let written = out.commit().unwrap();
        assert_eq!(written.len(), 1);
        assert_eq!(fs::read_to_string(&written[0]).unwrap(), "x,w\n1.0000000000000000e0,2.0000000000000000e0\n");
    }

    #[test]
    fn failure_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let mut out = Outputs::new(dir.path().join("new"), Format::Both);
        out.csv("a.csv", Csv::new(&["x"]));
        // a path below a regular file cannot be created
        out.csv(blocker.join("sub/b.csv"), Csv::new(&["x"]));
        assert!(out.commit().is_err());
        assert!(!dir.path().join("new").exists());
    }
}
