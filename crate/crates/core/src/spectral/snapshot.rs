//! Binary snapshot format.
//!
//! Layout (little-endian): `box_length: f64`, `resolution: u32`, then for every field the
//! `n^3` coefficients as `(re: f64, im: f64)` pairs in lexicographic wavenumber order, i.e.
//! signed modes `m1, m2, m3` each running over `-n/2 ..= n/2 - 1` with `m3` fastest.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::ScalarField;
use super::grid::SpectralGrid;
use crate::error::{Error, Result};

fn lexicographic_order(g: &SpectralGrid) -> impl Iterator<Item = usize> + '_ {
    let h = (g.resolution() / 2) as i64;
    (-h..h).flat_map(move |a| {
        (-h..h).flat_map(move |b| {
            (-h..h).map(move |c| g.index(g.position(a), g.position(b), g.position(c)))
        })
    })
}

pub fn write_snapshot<W: Write>(mut w: W, fields: &[&ScalarField]) -> Result<()> {
    let g = match fields.first() {
        Some(f) => f.grid(),
        None => return Err(Error::InvalidParameter("snapshot needs at least one field".into())),
    };
    if fields.iter().any(|f| f.grid() != g) {
        return Err(Error::InvalidParameter("snapshot fields must share one grid".into()));
    }
    let mut buf = Vec::with_capacity(12 + fields.len() * g.len() * 16);
    buf.extend_from_slice(&g.box_length().to_le_bytes());
    buf.extend_from_slice(&(g.resolution() as u32).to_le_bytes());
    for f in fields {
        for idx in lexicographic_order(&g) {
            let c = f.coeffs()[idx];
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<(SpectralGrid, Vec<ScalarField>)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 12 {
        return Err(Error::Format("truncated header".into()));
    }
    let box_length = f64::from_le_bytes(bytes[0..8].try_into().unwrap());
    let resolution = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let g = SpectralGrid::new(box_length, resolution)
        .map_err(|e| Error::Format(format!("bad header: {e}")))?;
    let body = &bytes[12..];
    let per_field = g.len() * 16;
    if body.is_empty() || body.len() % per_field != 0 {
        return Err(Error::Format(format!(
            "body of {} bytes is not a whole number of {per_field}-byte fields",
            body.len()
        )));
    }
    let mut fields = Vec::new();
    for chunk in body.chunks(per_field) {
        let mut coeffs = vec![Complex64::default(); g.len()];
        for (slot, idx) in lexicographic_order(&g).enumerate() {
            let o = slot * 16;
            let re = f64::from_le_bytes(chunk[o..o + 8].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[o + 8..o + 16].try_into().unwrap());
            coeffs[idx] = Complex64::new(re, im);
        }
        fields.push(ScalarField::from_coeffs(g, coeffs)?);
    }
    Ok((g, fields))
}
