use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Writes `id,c1..cq` CSV with `"p/q"` coordinates.
pub fn write_points(w: impl Write, points: &[Vec<Rational>]) -> Result<()> {
    let q = points.first().map_or(0, |p| p.len());
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["id".to_string()];
    header.extend((1..=q).map(|i| format!("c{i}")));
    out.write_record(&header)?;
    for (id, p) in points.iter().enumerate() {
        let mut rec = vec![id.to_string()];
        rec.extend(p.iter().map(rational::to_string));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a points file; ids must be exactly `0..n` in some order.
pub fn read_points(r: impl Read) -> Result<Vec<Vec<Rational>>> {
    let mut rdr = csv::Reader::from_reader(r);
    let q = rdr.headers()?.len().saturating_sub(1);
    if q == 0 {
        return Err(Error::Domain(
            "points file needs an id column and at least one coordinate".into(),
        ));
    }
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let id: usize = rec[0]
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad id {:?}", &rec[0])))?;
        let coords = rec
            .iter()
            .skip(1)
            .map(rational::parse)
            .collect::<Result<Vec<_>>>()?;
        rows.push((id, coords));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(Error::Domain(
            "point ids must be 0..n without gaps or repeats".into(),
        ));
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}
