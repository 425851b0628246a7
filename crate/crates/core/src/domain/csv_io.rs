//! CSV field files: header `t,x1,...,xd,value`, one row per node, time
//! slowest then the spatial multi-index in lexicographic order. Numbers are
//! written as `{:.16e}`, which round-trips every finite `f64` exactly.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::{ArrayD, Dimension, IxDyn};

use super::field::st_shape;
use super::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::TimeGrid;
use crate::{Error, Result};

pub fn write_field_csv<W: Write>(field: &SpaceTimeField, writer: W) -> Result<()> {
    let d = field.domain().dim();
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.push("value".into());
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(d + 2);
    for (idx, &v) in field.values().indexed_iter() {
        let idx = idx.slice();
        row.clear();
        row.push(fmt(field.tgrid().node(idx[0])));
        row.extend((0..d).map(|i| fmt(field.domain().coord(i, idx[i + 1]))));
        row.push(fmt(v));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_field_csv_path(field: &SpaceTimeField, path: &Path) -> Result<()> {
    write_field_csv(field, File::create(path)?)
}

/// Reads a field written by [`write_field_csv`]. Grids are reconstructed
/// from the coordinate columns and must be uniform and complete.
pub fn read_field_csv<R: Read>(reader: R, class: BoundaryClass) -> Result<SpaceTimeField> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let cols = header.len();
    if cols < 3 || &header[0] != "t" || &header[cols - 1] != "value" {
        return Err(Error::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let d = cols - 2;
    for i in 1..=d {
        if header[i] != *format!("x{i}") {
            return Err(Error::Csv(format!("column {i} should be x{i}, found {}", &header[i])));
        }
    }
    let mut coords: Vec<Vec<f64>> = vec![Vec::new(); d + 1];
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != cols {
            return Err(Error::Csv(format!("row {} has {} fields, expected {cols}", line + 2, rec.len())));
        }
        for (c, coord) in coords.iter_mut().enumerate() {
            coord.push(parse(&rec[c], line)?);
        }
        values.push(parse(&rec[cols - 1], line)?);
    }
    if values.is_empty() {
        return Err(Error::Csv("no data rows".into()));
    }

    let axes: Vec<Vec<f64>> = coords
        .iter()
        .map(|c| {
            let mut u = c.clone();
            u.sort_by(f64::total_cmp);
            u.dedup();
            u
        })
        .collect();
    let tgrid = uniform(&axes[0], "t")?;
    let grids: Vec<TimeGrid> = (1..=d).map(|i| uniform(&axes[i], &format!("x{i}"))).collect::<Result<_>>()?;
    let domain = BoxDomain::new(
        grids.iter().map(|g| g.a()).collect(),
        grids.iter().map(|g| g.b()).collect(),
        grids.iter().map(|g| g.n()).collect(),
    )?;
    let shape = st_shape(&tgrid, &domain);
    let total: usize = shape.iter().product();
    if values.len() != total {
        return Err(Error::Csv(format!("{} rows for a grid of {total} nodes", values.len())));
    }
    let array = ArrayD::from_shape_vec(IxDyn(&shape), values).map_err(|e| Error::Csv(e.to_string()))?;
    // rows must appear in the canonical order
    let mut row = 0;
    for (idx, _) in array.indexed_iter() {
        let idx = idx.slice();
        let expect_t = tgrid.node(idx[0]);
        if !close(coords[0][row], expect_t) || (0..d).any(|i| !close(coords[i + 1][row], grids[i].node(idx[i + 1]))) {
            return Err(Error::Csv(format!("row {} is out of order or off-grid", row + 2)));
        }
        row += 1;
    }
    SpaceTimeField::new(tgrid, domain, array, class)
}

pub fn read_field_csv_path(path: &Path, class: BoundaryClass) -> Result<SpaceTimeField> {
    read_field_csv(File::open(path)?, class)
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Csv(format!("row {}: cannot parse {s:?}", line + 2)))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn uniform(nodes: &[f64], name: &str) -> Result<TimeGrid> {
    if nodes.len() < 3 {
        return Err(Error::Csv(format!("column {name} has {} distinct values", nodes.len())));
    }
    let n = nodes.len() - 1;
    let grid = TimeGrid::new(nodes[0], nodes[n], n)?;
    if nodes.iter().enumerate().any(|(k, &x)| !close(x, grid.node(k))) {
        return Err(Error::Csv(format!("column {name} is not a uniform grid")));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tg = TimeGrid::new(0.0, 0.7, 5).unwrap();
        let d = BoxDomain::new(vec![0.0, -1.0], vec![1.0, 3.0], vec![3, 4]).unwrap();
        let values = ArrayD::from_shape_fn(IxDyn(&st_shape(&tg, &d)), |_| rng.random::<f64>() * 1e3 - 1e-7);
        let f = SpaceTimeField::new(tg, d, values, BoundaryClass::None).unwrap();
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x1,x2,value\n"));
        let g = read_field_csv(buf.as_slice(), BoundaryClass::None).unwrap();
        assert_eq!(g.tgrid(), f.tgrid());
        assert_eq!(g.domain(), f.domain());
        assert!(g.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(read_field_csv("t,y,value\n0,0,0\n".as_bytes(), BoundaryClass::None).is_err());
        assert!(read_field_csv("t,x1,value\n".as_bytes(), BoundaryClass::None).is_err());
        let tg = TimeGrid::new(0.0, 1.0, 2).unwrap();
        let d = BoxDomain::unit(1, 3).unwrap();
        let f = SpaceTimeField::zeros(tg, d, BoundaryClass::None);
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(read_field_csv(truncated.as_bytes(), BoundaryClass::None).is_err());
    }
}
