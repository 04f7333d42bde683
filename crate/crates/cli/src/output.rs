use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;

/// Destination of a command's artifact. Status messages go to stdout when
/// the artifact goes to a file and to stderr otherwise.
pub struct Sink {
    writer: Box<dyn Write>,
    to_file: bool,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> anyhow::Result<Self> {
        Ok(match path {
            Some(p) => {
                let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
                Self { writer: Box::new(BufWriter::new(file)), to_file: true }
            }
            None => Self { writer: Box::new(BufWriter::new(io::stdout())), to_file: false },
        })
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        self.writer.as_mut()
    }

    pub fn finish(mut self) -> anyhow::Result<()> {
        self.writer.flush().context("cannot write output")
    }

    /// Flushes the artifact, then prints a status message.
    pub fn finish_with(self, msg: &str) -> anyhow::Result<()> {
        let to_file = self.to_file;
        self.finish()?;
        if to_file {
            println!("{msg}");
        } else {
            eprintln!("{msg}");
        }
        Ok(())
    }
}

/// Seventeen significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_row<I: IntoIterator<Item = String>>(w: &mut dyn Write, cells: I) -> io::Result<()> {
    let row: Vec<String> = cells.into_iter().collect();
    writeln!(w, "{}", row.join(","))
}
