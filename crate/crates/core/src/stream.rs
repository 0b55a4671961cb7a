//! Plain-text update streams.
//!
//! ```text
//! # n=100 delta=8 W=1 mode=coloring
//! i 3 17
//! d 3 17
//! q
//! ```
//!
//! Insertions may carry a weight as a fourth field; it defaults to 1.
//! Blank lines and further `#` lines are ignored.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{UpdateOp, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamMode {
    Coloring,
    Cc,
    Msf,
}

impl fmt::Display for StreamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StreamMode::Coloring => "coloring",
            StreamMode::Cc => "cc",
            StreamMode::Msf => "msf",
        })
    }
}

impl FromStr for StreamMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "coloring" => Ok(StreamMode::Coloring),
            "cc" => Ok(StreamMode::Cc),
            "msf" => Ok(StreamMode::Msf),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamHeader {
    pub n: usize,
    /// Degree bound promised by the stream.
    pub delta: u32,
    /// Largest edge weight.
    pub max_weight: f64,
    pub mode: StreamMode,
}

impl fmt::Display for StreamHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "# n={} delta={} W={} mode={}",
            self.n, self.delta, self.max_weight, self.mode
        )
    }
}

impl StreamHeader {
    fn parse(line: &str) -> std::result::Result<Self, String> {
        let body = line
            .strip_prefix('#')
            .ok_or_else(|| "header must start with '#'".to_string())?;
        let (mut n, mut delta, mut w, mut mode) = (None, None, None, None);
        for field in body.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format!("malformed header field {field:?}"))?;
            let bad = |e: &dyn fmt::Display| format!("bad value for {key}: {e}");
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
                "delta" => delta = Some(value.parse::<u32>().map_err(|e| bad(&e))?),
                "W" => w = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
                "mode" => mode = Some(value.parse::<StreamMode>()?),
                other => return Err(format!("unknown header field {other:?}")),
            }
        }
        let max_weight = w.ok_or("header lacks W")?;
        if !(max_weight >= 1.0 && max_weight.is_finite()) {
            return Err(format!("W must be finite and at least 1, got {max_weight}"));
        }
        Ok(StreamHeader {
            n: n.ok_or("header lacks n")?,
            delta: delta.ok_or("header lacks delta")?,
            max_weight,
            mode: mode.ok_or("header lacks mode")?,
        })
    }

    fn check_op(&self, op: &UpdateOp) -> std::result::Result<(), String> {
        let (u, v) = match *op {
            UpdateOp::Insert { u, v, weight } => {
                if !(weight >= 1.0 && weight <= self.max_weight) {
                    return Err(format!("weight {weight} outside [1, {}]", self.max_weight));
                }
                (u, v)
            }
            UpdateOp::Delete { u, v } => (u, v),
            UpdateOp::Query => return Ok(()),
        };
        for x in [u, v] {
            if x as usize >= self.n {
                return Err(format!("vertex {x} out of range for n = {}", self.n));
            }
        }
        if u == v {
            return Err(format!("self-loop on vertex {u}"));
        }
        Ok(())
    }
}

/// Renders an operation as one stream line. Weights are written when they
/// differ from 1 or `weighted` is set.
pub fn render_op(op: &UpdateOp, weighted: bool) -> String {
    match *op {
        UpdateOp::Insert { u, v, weight } if weighted || weight != 1.0 => {
            format!("i {u} {v} {weight}")
        }
        UpdateOp::Insert { u, v, .. } => format!("i {u} {v}"),
        UpdateOp::Delete { u, v } => format!("d {u} {v}"),
        UpdateOp::Query => "q".to_string(),
    }
}

fn parse_op(line: &str) -> std::result::Result<UpdateOp, String> {
    let mut fields = line.split_whitespace();
    let kind = fields.next().unwrap_or_default();
    let mut vertex = |name: &str| -> std::result::Result<VertexId, String> {
        let raw = fields.next().ok_or_else(|| format!("missing {name}"))?;
        raw.parse().map_err(|e| format!("bad {name} {raw:?}: {e}"))
    };
    let op = match kind {
        "i" => {
            let (u, v) = (vertex("u")?, vertex("v")?);
            let weight = match fields.next() {
                Some(raw) => raw
                    .parse()
                    .map_err(|e| format!("bad weight {raw:?}: {e}"))?,
                None => 1.0,
            };
            UpdateOp::Insert { u, v, weight }
        }
        "d" => UpdateOp::Delete {
            u: vertex("u")?,
            v: vertex("v")?,
        },
        "q" => UpdateOp::Query,
        other => return Err(format!("unknown operation {other:?}")),
    };
    if let Some(extra) = fields.next() {
        return Err(format!("unexpected trailing field {extra:?}"));
    }
    Ok(op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stream {
    pub header: StreamHeader,
    pub ops: Vec<UpdateOp>,
}

impl Stream {
    pub fn new(header: StreamHeader) -> Self {
        Stream {
            header,
            ops: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    /// Reads and validates a stream. Errors name the offending line.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut header = None;
        let mut ops = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let fail = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            let line = line.map_err(|e| fail(e.to_string()))?;
            let line = line.trim();
            let Some(h) = &header else {
                header = Some(StreamHeader::parse(line).map_err(fail)?);
                continue;
            };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let op = parse_op(line).map_err(fail)?;
            h.check_op(&op).map_err(fail)?;
            ops.push(op);
        }
        let header = header.ok_or(Error::Parse {
            line: 1,
            message: "empty stream".into(),
        })?;
        Ok(Stream { header, ops })
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header)?;
        let weighted = self.header.mode == StreamMode::Msf;
        for op in &self.ops {
            writeln!(out, "{}", render_op(op, weighted))?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ASCII output")
    }
}
