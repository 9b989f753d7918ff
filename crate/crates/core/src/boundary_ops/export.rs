//! Matrix export: CSV with real and imaginary parts interleaved per entry, and
//! the "DSH1" container (magic, u64 rows, u64 cols, little-endian f64 pairs
//! in row-major order).

use std::io::{Read, Write};

use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

pub const DSH1_MAGIC: &[u8; 4] = b"DSH1";

pub fn write_csv<W: Write>(m: &CMat, mut out: W) -> Result<()> {
    let mut line = String::new();
    for i in 0..m.nrows() {
        line.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(',');
            }
            let v = m[(i, j)];
            line.push_str(&format!("{:.16e},{:.16e}", v.re, v.im));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn write_dsh1<W: Write>(m: &CMat, mut out: W) -> Result<()> {
    out.write_all(DSH1_MAGIC)?;
    out.write_all(&(m.nrows() as u64).to_le_bytes())?;
    out.write_all(&(m.ncols() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * m.ncols());
    for i in 0..m.nrows() {
        buf.clear();
        for j in 0..m.ncols() {
            buf.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            buf.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_dsh1<R: Read>(mut input: R) -> Result<CMat> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != DSH1_MAGIC {
        return Err(Error::Io("not a DSH1 container".into()));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let rows = u64::from_le_bytes(word) as usize;
    input.read_exact(&mut word)?;
    let cols = u64::from_le_bytes(word) as usize;
    let mut data = vec![0u8; rows.checked_mul(cols).and_then(|n| n.checked_mul(16)).ok_or_else(|| Error::Io("DSH1 size overflow".into()))?];
    input.read_exact(&mut data)?;
    let f = |k: usize| f64::from_le_bytes(data[8 * k..8 * k + 8].try_into().unwrap());
    Ok(Mat::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        c64::new(f(k), f(k + 1))
    }))
}
