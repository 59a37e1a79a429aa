use std::collections::BTreeSet;
use std::fs::File;
use std::path::Path;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Reads a CSV with a header row, numeric feature columns and a final
/// `label` column.
///
/// The class whose raw value sorts first (as a string) becomes `-1`. The
/// dataset is named after the file stem.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_dataset(file, &name).map(|d| d.with_provenance(path.display().to_string()))
}

/// [`load_dataset`] over any reader.
pub fn read_dataset(reader: impl std::io::Read, name: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Dataset(format!("{name}: {e}")))?
        .clone();
    if headers.is_empty() {
        return Err(Error::Dataset(format!("{name}: empty file")));
    }
    let width = headers.len();
    if width < 2 || &headers[width - 1] != "label" {
        return Err(Error::Dataset(format!(
            "{name}: expected feature columns followed by a `label` column"
        )));
    }

    let mut features = Vec::new();
    let mut raw_labels = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Dataset(format!("{name}: {e}")))?;
        let row = (0..width - 1)
            .map(|j| {
                record[j].parse::<f64>().map_err(|_| {
                    Error::Dataset(format!(
                        "{name}: row {} column `{}` is not numeric: {:?}",
                        line + 1,
                        &headers[j],
                        &record[j]
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        features.push(row);
        raw_labels.push(record[width - 1].to_string());
    }
    if features.is_empty() {
        return Err(Error::Dataset(format!("{name}: no data rows")));
    }

    let classes: BTreeSet<&str> = raw_labels.iter().map(String::as_str).collect();
    if classes.len() != 2 {
        return Err(Error::Dataset(format!(
            "{name}: expected exactly two classes, found {}",
            classes.len()
        )));
    }
    let negative = *classes.iter().next().expect("two classes");
    let labels = raw_labels
        .iter()
        .map(|l| if l == negative { Label::Negative } else { Label::Positive })
        .collect();
    Dataset::new(name, features, labels)
}
