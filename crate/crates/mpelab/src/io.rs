//! File formats for kernels and rewards.
//!
//! Kernels travel as JSON objects `{"states": [...], "matrix": [[...]],
//! "metric": [[...]]}` — `states` and `metric` optional — or as headerless
//! CSV matrices (with an optional `<stem>.labels` sidecar file naming the
//! states, one per line). Rewards travel as JSON `{"values": [...]}` or as a
//! single-column CSV. The format is chosen by file extension.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entropy::RewardFunction;
use crate::error::{Error, Result};
use crate::kernel::{FiniteKernel, Metric, StateSpace};

/// JSON shape of a kernel on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelFile {
    /// State labels; defaults to `"1"`, `"2"`, ... when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<String>>,
    /// Row-stochastic transition matrix.
    pub matrix: Vec<Vec<f64>>,
    /// Optional explicit metric on the states, as a full square matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
}

impl KernelFile {
    /// Validate and build the kernel this file describes.
    pub fn into_kernel(self) -> Result<FiniteKernel> {
        let n = self.matrix.len();
        let space = match self.states {
            Some(labels) => StateSpace::new(labels)?,
            None => StateSpace::integers(n),
        };
        let space = match self.metric {
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch {
                        left: rows.len(),
                        right: n,
                    });
                }
                let flat: Vec<f64> = rows.into_iter().flatten().collect();
                space.with_metric(Metric::Explicit(flat))?
            }
            None => space,
        };
        FiniteKernel::build(space, self.matrix)
    }

    /// Snapshot an in-memory kernel.
    pub fn from_kernel(kernel: &FiniteKernel) -> Self {
        let n = kernel.n();
        let matrix = (0..n).map(|i| kernel.row(i).to_vec()).collect();
        let metric = match kernel.space().metric() {
            Metric::AbsDiff => None,
            Metric::Explicit(flat) => Some(
                (0..n)
                    .map(|i| flat[i * n..(i + 1) * n].to_vec())
                    .collect(),
            ),
        };
        KernelFile {
            states: Some(kernel.space().labels().to_vec()),
            matrix,
            metric,
        }
    }
}

/// JSON shape of a reward on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RewardFile {
    /// One value per state.
    pub values: Vec<f64>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn extension(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Load a kernel from a `.json` or `.csv` file (see the module docs for the
/// formats).
pub fn load_kernel(path: impl AsRef<Path>) -> Result<FiniteKernel> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "json" => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let file: KernelFile =
                serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
            file.into_kernel()
        }
        "csv" => {
            let matrix = read_csv_matrix(path)?;
            let labels_path = path.with_extension("labels");
            let states = if labels_path.exists() {
                let text =
                    std::fs::read_to_string(&labels_path).map_err(|e| io_err(&labels_path, e))?;
                Some(
                    text.lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .map(String::from)
                        .collect(),
                )
            } else {
                None
            };
            KernelFile {
                states,
                matrix,
                metric: None,
            }
            .into_kernel()
        }
        other => Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("unsupported kernel extension {other:?} (use .json or .csv)"),
        }),
    }
}

/// Save a kernel as pretty-printed JSON or as a headerless CSV matrix,
/// chosen by extension.
pub fn save_kernel(path: impl AsRef<Path>, kernel: &FiniteKernel) -> Result<()> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "json" => {
            let file = KernelFile::from_kernel(kernel);
            let text = serde_json::to_string_pretty(&file).map_err(|e| parse_err(path, e))?;
            std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
        }
        "csv" => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(path)
                .map_err(|e| io_err(path, e))?;
            for i in 0..kernel.n() {
                let record: Vec<String> =
                    kernel.row(i).iter().map(|v| format!("{v:.17e}")).collect();
                writer.write_record(&record).map_err(|e| io_err(path, e))?;
            }
            writer.flush().map_err(|e| io_err(path, e))
        }
        other => Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("unsupported kernel extension {other:?} (use .json or .csv)"),
        }),
    }
}

/// Load a reward from `.json` (`{"values": [...]}`) or single-column `.csv`.
pub fn load_reward(path: impl AsRef<Path>) -> Result<RewardFunction> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "json" => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let file: RewardFile =
                serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
            RewardFunction::new(file.values)
        }
        "csv" => {
            let matrix = read_csv_matrix(path)?;
            let mut values = Vec::with_capacity(matrix.len());
            for (i, row) in matrix.into_iter().enumerate() {
                match row.as_slice() {
                    [v] => values.push(*v),
                    other => {
                        return Err(Error::Parse {
                            path: path.display().to_string(),
                            message: format!(
                                "reward CSV must have one value per line; line {} has {}",
                                i + 1,
                                other.len()
                            ),
                        })
                    }
                }
            }
            RewardFunction::new(values)
        }
        other => Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("unsupported reward extension {other:?} (use .json or .csv)"),
        }),
    }
}

/// Save a reward as JSON or single-column CSV, chosen by extension.
pub fn save_reward(path: impl AsRef<Path>, reward: &RewardFunction) -> Result<()> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "json" => {
            let file = RewardFile {
                values: reward.values().to_vec(),
            };
            let text = serde_json::to_string_pretty(&file).map_err(|e| parse_err(path, e))?;
            std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
        }
        "csv" => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(path)
                .map_err(|e| io_err(path, e))?;
            for v in reward.values() {
                writer
                    .write_record([format!("{v:.17e}")])
                    .map_err(|e| io_err(path, e))?;
            }
            writer.flush().map_err(|e| io_err(path, e))
        }
        other => Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("unsupported reward extension {other:?} (use .json or .csv)"),
        }),
    }
}

fn read_csv_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e))?;
        let row: Vec<f64> = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.display().to_string(),
                    message: format!("line {}: bad number {cell:?}: {e}", i + 1),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tempdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "mpelab-io-{}-{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn kernel_json_round_trip() {
        let dir = tempdir();
        let path = dir.join("k.json");
        let kernel = crate::corpus::cyclic_three();
        save_kernel(&path, &kernel).unwrap();
        let back = load_kernel(&path).unwrap();
        assert_eq!(back.n(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(back.entry(i, j), kernel.entry(i, j));
            }
        }
        assert_eq!(back.space().labels(), kernel.space().labels());
    }

    #[test]
    fn kernel_csv_round_trip_with_labels() {
        let dir = tempdir();
        let path = dir.join("k2.csv");
        let kernel = crate::corpus::two_state(0.5).unwrap();
        save_kernel(&path, &kernel).unwrap();
        std::fs::write(dir.join("k2.labels"), "left\nright\n").unwrap();
        let back = load_kernel(&path).unwrap();
        assert_eq!(back.space().labels(), &["left", "right"]);
        assert_abs_diff_eq!(back.entry(1, 0), 0.5);
    }

    #[test]
    fn reward_round_trips() {
        let dir = tempdir();
        let reward = RewardFunction::new(vec![0.0, 0.5, -1.25]).unwrap();
        for name in ["g.json", "g.csv"] {
            let path = dir.join(name);
            save_reward(&path, &reward).unwrap();
            let back = load_reward(&path).unwrap();
            assert_eq!(back.values(), reward.values());
        }
    }

    #[test]
    fn kernel_json_with_metric() {
        let text = r#"{
            "states": ["a", "b"],
            "matrix": [[0.5, 0.5], [0.25, 0.75]],
            "metric": [[0.0, 2.0], [2.0, 0.0]]
        }"#;
        let file: KernelFile = serde_json::from_str(text).unwrap();
        let kernel = file.into_kernel().unwrap();
        assert_abs_diff_eq!(kernel.space().distance(0, 1).unwrap(), 2.0);
    }

    #[test]
    fn bad_files_are_rejected() {
        let dir = tempdir();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "{\"matrix\": [[0.5, 0.4]]}").unwrap();
        // Row does not sum to 1.
        assert!(load_kernel(&bad).is_err());
        let missing = dir.join("does-not-exist.json");
        assert!(matches!(load_kernel(&missing), Err(Error::Io { .. })));
        let wrong_ext = dir.join("k.txt");
        std::fs::write(&wrong_ext, "x").unwrap();
        assert!(matches!(load_kernel(&wrong_ext), Err(Error::Parse { .. })));
    }
}
