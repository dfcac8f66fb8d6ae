//! NPY v1.0 container for 2-D `<f4` / `<f8` arrays.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC: &[u8; 6] = b"\x93NUMPY";
const PREAMBLE: usize = 10;
const ALIGN: usize = 64;
/// Spare header room numpy reserves so the leading axis can grow in place.
const GROWTH_AXIS_MAX_DIGITS: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F4,
    F8,
}

impl Dtype {
    fn descr(self) -> &'static str {
        match self {
            Dtype::F4 => "<f4",
            Dtype::F8 => "<f8",
        }
    }

    fn size(self) -> usize {
        match self {
            Dtype::F4 => 4,
            Dtype::F8 => 8,
        }
    }
}

/// A decoded 2-D array, widened to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct NpyArray {
    pub rows: usize,
    pub cols: usize,
    pub dtype: Dtype,
    /// Row-major.
    pub values: Vec<f64>,
}

#[derive(Debug, PartialEq)]
enum Literal {
    Str(String),
    Bool(bool),
    Tuple(Vec<u64>),
}

/// Parser for the Python dict literal in the header. Offsets are file offsets.
struct HeaderParser<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
}

impl HeaderParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::format((self.base + self.pos) as u64, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{}' in header", c as char))),
        }
    }

    fn string(&mut self) -> Result<String> {
        let q = match self.peek() {
            Some(q @ (b'\'' | b'"')) => q,
            _ => return Err(self.err("expected quoted string in header")),
        };
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != q {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err(self.err("unterminated string in header"));
        }
        let out = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(out)
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return Err(self.err("expected non-negative integer in shape"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("shape dimension overflows"))
    }

    fn value(&mut self) -> Result<Literal> {
        match self.peek() {
            Some(b'\'' | b'"') => self.string().map(Literal::Str),
            Some(b'(') => {
                self.pos += 1;
                let mut dims = Vec::new();
                loop {
                    if self.peek() == Some(b')') {
                        self.pos += 1;
                        break;
                    }
                    dims.push(self.int()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {}
                        _ => return Err(self.err("malformed shape tuple")),
                    }
                }
                Ok(Literal::Tuple(dims))
            }
            _ => {
                for (word, v) in [("True", true), ("False", false)] {
                    if self.s[self.pos..].starts_with(word.as_bytes()) {
                        self.pos += word.len();
                        return Ok(Literal::Bool(v));
                    }
                }
                Err(self.err("unsupported value in header"))
            }
        }
    }

    fn dict(&mut self) -> Result<Vec<(String, Literal, usize)>> {
        self.expect(b'{')?;
        let mut items = Vec::new();
        loop {
            if self.peek() == Some(b'}') {
                self.pos += 1;
                break;
            }
            let key = self.string()?;
            self.expect(b':')?;
            self.skip_ws();
            let at = self.base + self.pos;
            let value = self.value()?;
            items.push((key, value, at));
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {}
                _ => return Err(self.err("expected ',' or '}' in header")),
            }
        }
        Ok(items)
    }
}

/// Decodes an NPY byte buffer.
pub fn parse_npy(bytes: &[u8]) -> Result<NpyArray> {
    if bytes.len() < PREAMBLE || &bytes[..6] != MAGIC {
        return Err(Error::format(0, "missing NPY magic string"));
    }
    if bytes[6..8] != [1, 0] {
        return Err(Error::format(
            6,
            format!(
                "unsupported NPY version {}.{}; only 1.0 is accepted",
                bytes[6], bytes[7]
            ),
        ));
    }
    let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
    let data_start = PREAMBLE + header_len;
    if bytes.len() < data_start {
        return Err(Error::format(
            8,
            format!("header length {header_len} runs past end of file"),
        ));
    }
    let mut p = HeaderParser {
        s: &bytes[PREAMBLE..data_start],
        pos: 0,
        base: PREAMBLE,
    };
    let items = p.dict()?;

    let (mut dtype, mut fortran, mut shape) = (None, None, None);
    for (key, value, at) in items {
        let at = at as u64;
        match (key.as_str(), value) {
            ("descr", Literal::Str(d)) => {
                dtype = Some(match d.as_str() {
                    "<f4" => Dtype::F4,
                    "<f8" => Dtype::F8,
                    ">f4" | ">f8" => {
                        return Err(Error::format(at, format!("big-endian dtype '{d}' is not supported")));
                    }
                    other => return Err(Error::format(at, format!("unsupported dtype '{other}'"))),
                })
            }
            ("fortran_order", Literal::Bool(b)) => {
                if b {
                    return Err(Error::format(at, "fortran_order arrays are not supported"));
                }
                fortran = Some(b);
            }
            ("shape", Literal::Tuple(dims)) => {
                if dims.len() != 2 {
                    return Err(Error::format(
                        at,
                        format!("expected a 2-D shape, got {} dimension(s)", dims.len()),
                    ));
                }
                shape = Some((dims[0] as usize, dims[1] as usize));
            }
            (k, _) => return Err(Error::format(at, format!("unexpected header entry '{k}'"))),
        }
    }
    let (Some(dtype), Some(_), Some((rows, cols))) = (dtype, fortran, shape) else {
        return Err(Error::format(
            PREAMBLE as u64,
            "header lacks descr, fortran_order or shape",
        ));
    };

    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::format(PREAMBLE as u64, "shape overflows"))?;
    let expected = count * dtype.size();
    let data = &bytes[data_start..];
    if data.len() != expected {
        return Err(Error::format(
            data_start as u64,
            format!("expected {expected} data bytes, found {}", data.len()),
        ));
    }
    let mut values = Vec::with_capacity(count);
    for (i, chunk) in data.chunks_exact(dtype.size()).enumerate() {
        let v = match dtype {
            Dtype::F4 => f32::from_le_bytes(chunk.try_into().unwrap()) as f64,
            Dtype::F8 => f64::from_le_bytes(chunk.try_into().unwrap()),
        };
        if !v.is_finite() {
            return Err(Error::format(
                (data_start + i * dtype.size()) as u64,
                format!(
                    "non-finite value at row {}, column {}",
                    i / cols.max(1),
                    i % cols.max(1)
                ),
            ));
        }
        values.push(v);
    }
    Ok(NpyArray {
        rows,
        cols,
        dtype,
        values,
    })
}

pub fn read_npy(path: impl AsRef<Path>) -> Result<NpyArray> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_npy(&bytes).map_err(|e| match e {
        Error::Format { offset, message } => Error::Format {
            offset,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Encodes a row-major 2-D array exactly as `numpy.save` does.
pub fn encode_npy(rows: usize, cols: usize, dtype: Dtype, values: &[f64]) -> Result<Vec<u8>> {
    if values.len() != rows * cols {
        return Err(Error::invalid(format!(
            "{} values do not fill a {rows}x{cols} array",
            values.len()
        )));
    }
    let mut header = format!(
        "{{'descr': '{}', 'fortran_order': False, 'shape': ({rows}, {cols}), }}",
        dtype.descr()
    );
    header.push_str(&" ".repeat(GROWTH_AXIS_MAX_DIGITS.saturating_sub(rows.to_string().len())));
    let unpadded = PREAMBLE + header.len() + 1;
    header.push_str(&" ".repeat(unpadded.next_multiple_of(ALIGN) - unpadded));
    header.push('\n');
    let header_len = u16::try_from(header.len()).map_err(|_| Error::invalid("NPY header too long"))?;

    let mut out = Vec::with_capacity(PREAMBLE + header.len() + values.len() * dtype.size());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&header_len.to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for &v in values {
        match dtype {
            Dtype::F4 => out.extend_from_slice(&(v as f32).to_le_bytes()),
            Dtype::F8 => out.extend_from_slice(&v.to_le_bytes()),
        }
    }
    Ok(out)
}

pub fn write_npy(path: impl AsRef<Path>, rows: usize, cols: usize, dtype: Dtype, values: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_npy(rows, cols, dtype, values)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
