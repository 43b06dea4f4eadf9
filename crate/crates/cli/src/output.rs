use crate::input::RawInput;
use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Standard output, or a file that gets a sibling manifest on completion.
pub struct Sink {
    out: Box<dyn Write>,
    path: Option<PathBuf>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { out, path: path.map(Path::to_path_buf) })
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, value)?;
        self.out.write_all(b"\n")
    }

    pub fn line(&mut self, text: &str) -> io::Result<()> {
        self.out.write_all(text.as_bytes())?;
        self.out.write_all(b"\n")
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn finish(mut self) -> io::Result<Option<PathBuf>> {
        self.out.flush()?;
        Ok(self.path)
    }
}

/// `<out>.<suffix>` next to the output file.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub tool: &'static str,
    pub version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

pub fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: Option<u64>, started_at: String) -> Self {
        Self {
            subcommand: subcommand.into(),
            argv: std::env::args().collect(),
            seed,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started_at,
            finished_at: String::new(),
        }
    }

    pub fn add_inputs(&mut self, raws: &[RawInput]) {
        self.inputs.extend(raws.iter().map(|r| InputDigest { source: r.name.clone(), sha256: r.sha256.clone() }));
    }

    pub fn write_beside(mut self, output: &Path) -> io::Result<PathBuf> {
        self.finished_at = timestamp();
        let path = sibling(output, "manifest.json");
        let mut file = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut file, &self)?;
        file.write_all(b"\n")?;
        file.flush()?;
        Ok(path)
    }
}
