use crate::error::Result;
use serde::Serialize;
use std::io::Write;

/// Writes `rows` as CSV with a header row taken from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
