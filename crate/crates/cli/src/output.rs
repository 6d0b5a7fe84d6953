//! JSON encodings shared by the commands. Exact rationals are written as
//! decimal strings so that no precision is lost in any JSON reader.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use stochmat_core::ratfunc::RationalFunction;
use stochmat_core::symmfunc::ExactRational;

/// `{"num": "...", "den": "..."}`.
pub fn rational_json(q: &ExactRational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

pub fn to_f64(q: &ExactRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Integer coefficient lists (lowest degree first) plus a readable form.
pub fn rational_function_json(f: &RationalFunction) -> Value {
    let (num, den) = f.integer_parts();
    json!({
        "numerator": num.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "denominator": den.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "text": f.to_string(),
    })
}

/// Version and configuration embedded in every output record.
#[derive(Clone, Debug, Serialize)]
pub struct RunInfo<'a, C: Serialize> {
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a C,
}

impl<'a, C: Serialize> RunInfo<'a, C> {
    pub fn new(command: &'static str, config: &'a C) -> Self {
        Self { version: env!("CARGO_PKG_VERSION"), command, config }
    }
}

/// Buffered writer to a file, or to stdout when no path is given.
pub fn writer(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Pretty JSON document followed by a newline.
pub fn write_json(path: Option<&Path>, value: &Value) -> io::Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}
