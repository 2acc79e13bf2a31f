use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;

#[derive(Serialize)]
struct Meta<'a, C: Serialize> {
    version: &'a str,
    command: &'a str,
    config: &'a C,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    meta: Meta<'a, C>,
    result: &'a R,
}

/// File at `path`, or stdout.
pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Output format: --format, else the extension of --out, else `default`.
pub fn format_for(explicit: Option<Format>, path: Option<&Path>, default: Format) -> Format {
    explicit
        .or_else(|| match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("csv") => Some(Format::Csv),
            Some("json") => Some(Format::Json),
            _ => None,
        })
        .unwrap_or(default)
}

/// {"meta": {version, command, config}, "result": ...} followed by a newline.
pub fn write_json<C: Serialize, R: Serialize>(
    path: Option<&Path>,
    command: &str,
    config: &C,
    result: &R,
) -> io::Result<()> {
    let env = Envelope {
        meta: Meta {
            version: symdunkl::VERSION,
            command,
            config,
        },
        result,
    };
    let mut w = open(path)?;
    serde_json::to_writer_pretty(&mut w, &env)?;
    w.write_all(b"\n")?;
    w.flush()
}

/// '#' lines with the version, command and config snapshot.
pub fn csv_preamble<C: Serialize>(w: &mut dyn Write, command: &str, config: &C) -> io::Result<()> {
    writeln!(w, "# symdunkl {}", symdunkl::VERSION)?;
    writeln!(w, "# command: {command}")?;
    writeln!(w, "# config: {}", serde_json::to_string(config)?)
}
