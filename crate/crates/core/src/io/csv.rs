use std::io::Read;

use csv::{ReaderBuilder, Trim};

use super::format_number;
use crate::dataset::{make_dataset, Dataset, Record};
use crate::error::{Error, Result};
use crate::impact::SensitivityPoint;

/// Reads a dataset with `prediction` and `target` columns (any order,
/// optional `id`). Lines starting with `#` are skipped. Parse errors report
/// the 1-based data row.
pub fn read_dataset_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let pred_col = column("prediction").ok_or_else(|| Error::MissingColumn("prediction".into()))?;
    let target_col = column("target").ok_or_else(|| Error::MissingColumn("target".into()))?;
    let id_col = column("id");

    let mut records = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let row_no = k + 1;
        let row = row.map_err(|e| Error::Csv(format!("row {row_no}: {e}")))?;
        let number = |col: usize, name: &str| -> Result<f64> {
            let raw = row.get(col).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Parse {
                row: row_no,
                column: name.to_owned(),
                value: raw.to_owned(),
            })
        };
        records.push(Record {
            id: id_col.and_then(|c| row.get(c)).map(str::to_owned),
            prediction: number(pred_col, "prediction")?,
            target: number(target_col, "target")?,
        });
    }
    make_dataset(records)
}

/// `threshold,accepted_count,impact` rows; the reject-all threshold is `inf`.
pub fn write_sensitivity_csv(points: &[SensitivityPoint]) -> String {
    let mut out = String::from("threshold,accepted_count,impact\n");
    for p in points {
        let threshold = if p.threshold.is_reject_all() {
            "inf".to_owned()
        } else {
            format_number(p.threshold.value())
        };
        out.push_str(&format!(
            "{threshold},{},{}\n",
            p.accepted_count,
            format_number(p.impact)
        ));
    }
    out
}
