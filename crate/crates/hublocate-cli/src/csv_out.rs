//! File-or-stdout output with versioned CSV headers.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

pub struct OutputTarget {
    path: Option<PathBuf>,
}

impl OutputTarget {
    pub fn new(path: Option<PathBuf>) -> Self {
        OutputTarget { path }
    }

    /// Writes verbatim, replacing any existing file.
    pub fn write(&self, content: &str) -> Result<()> {
        match &self.path {
            Some(path) => std::fs::write(path, content)
                .with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                Ok(())
            }
        }
    }

    /// Writes a fresh CSV document: comment line(s), header, body.
    pub fn write_csv(&self, comment: &str, header: &str, body: &str) -> Result<()> {
        self.write(&format!("{comment}\n{header}\n{body}"))
    }

    /// Appends rows to a CSV file, emitting the header only when the file
    /// is new; on stdout the full document is printed.
    pub fn append_csv(&self, comment: &str, header: &str, rows: &str) -> Result<()> {
        match &self.path {
            None => self.write_csv(comment, header, rows),
            Some(path) => {
                let fresh = !path.exists();
                let mut file = std::fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)
                    .with_context(|| format!("opening {}", path.display()))?;
                if fresh {
                    writeln!(file, "{comment}")?;
                    writeln!(file, "{header}")?;
                }
                file.write_all(rows.as_bytes())?;
                Ok(())
            }
        }
    }
}
