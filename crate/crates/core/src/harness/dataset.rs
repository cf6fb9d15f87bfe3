//! Classification datasets from CSV.
//!
//! Comma-separated rows: `d` feature columns then one label column. A first
//! line that does not parse as numbers is treated as a header. Labels are
//! `+1`/`-1` or `0`/`1`, depending on the declared alphabet.

use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::seed::{self, stream};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelAlphabet {
    /// `+1` / `-1`, stored as ±1.0.
    #[serde(rename = "pm1")]
    PlusMinusOne,
    /// `0` / `1`, stored as 0.0 / 1.0.
    #[serde(rename = "01")]
    ZeroOne,
}

impl LabelAlphabet {
    fn parse(self, token: &str) -> Option<f64> {
        match (self, token) {
            (LabelAlphabet::PlusMinusOne, "+1" | "1" | "1.0" | "+1.0") => Some(1.0),
            (LabelAlphabet::PlusMinusOne, "-1" | "-1.0") => Some(-1.0),
            (LabelAlphabet::ZeroOne, "0" | "0.0") => Some(0.0),
            (LabelAlphabet::ZeroOne, "1" | "1.0") => Some(1.0),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<f64>,
    alphabet: LabelAlphabet,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<f64>, alphabet: LabelAlphabet) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::input(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if let Some(first) = features.first() {
            if let Some(i) = features.iter().position(|r| r.len() != first.len()) {
                return Err(Error::input(format!(
                    "row {i} has {} features, expected {}",
                    features[i].len(),
                    first.len()
                )));
            }
        }
        let valid = |y: f64| match alphabet {
            LabelAlphabet::PlusMinusOne => y == 1.0 || y == -1.0,
            LabelAlphabet::ZeroOne => y == 0.0 || y == 1.0,
        };
        if let Some(i) = labels.iter().position(|&y| !valid(y)) {
            return Err(Error::input(format!(
                "label {} at row {i} is outside the {alphabet:?} alphabet",
                labels[i]
            )));
        }
        Ok(Self {
            features,
            labels,
            alphabet,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn alphabet(&self) -> LabelAlphabet {
        self.alphabet
    }

    fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            alphabet: self.alphabet,
        }
    }

    /// Seeded shuffle, then the first `round(M · fraction)` rows become the
    /// validation set. Returns `(train, validation)`.
    pub fn split(&self, validation_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(0.0..1.0).contains(&validation_fraction) {
            return Err(Error::Config(format!(
                "validation fraction must lie in [0, 1), got {validation_fraction}"
            )));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut seed::rng(seed, &[stream::SPLIT]));
        let n_val = (self.len() as f64 * validation_fraction).round() as usize;
        let (val, train) = idx.split_at(n_val);
        Ok((self.subset(train), self.subset(val)))
    }

    /// Per-feature min-max scaling to `[0, π]`, fitted on this set.
    pub fn fit_scaler(&self) -> FeatureScaler {
        let d = self.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for row in &self.features {
            for (j, &x) in row.iter().enumerate() {
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        FeatureScaler { lo, hi }
    }

    pub fn scaled(&self, scaler: &FeatureScaler) -> Dataset {
        Dataset {
            features: self.features.iter().map(|r| scaler.apply(r)).collect(),
            labels: self.labels.clone(),
            alphabet: self.alphabet,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureScaler {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl FeatureScaler {
    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &x)| {
                let span = self.hi[j] - self.lo[j];
                if span > 0.0 {
                    PI * (x - self.lo[j]) / span
                } else {
                    0.0
                }
            })
            .collect()
    }
}

pub fn parse_dataset_csv(text: &str, alphabet: LabelAlphabet, origin: &Path) -> Result<Dataset> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut dim: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let (label_tok, feat_toks) = cells.split_last().expect("split yields one cell");
        let parsed: std::result::Result<Vec<f64>, _> =
            feat_toks.iter().map(|t| t.parse::<f64>()).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if features.is_empty() && dim.is_none() => {
                // Header: it still fixes the column count.
                dim = Some(feat_toks.len());
                continue;
            }
            Err(_) => {
                return Err(parse_err(
                    lineno,
                    format!("non-numeric feature in {line:?}"),
                ))
            }
        };
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(parse_err(
                    lineno,
                    format!("row has {} features, expected {d}", row.len()),
                ))
            }
            _ => {}
        }
        if row.is_empty() {
            return Err(parse_err(lineno, "row has no feature columns".into()));
        }
        if let Some(x) = row.iter().find(|x| !x.is_finite()) {
            return Err(parse_err(lineno, format!("feature {x} is not finite")));
        }
        let y = alphabet.parse(label_tok).ok_or_else(|| {
            Error::input(format!(
                "{}:{lineno}: label {label_tok:?} is not in the {alphabet:?} alphabet",
                origin.display()
            ))
        })?;
        features.push(row);
        labels.push(y);
    }
    if labels.is_empty() {
        return Err(Error::input(format!(
            "{}: dataset is empty",
            origin.display()
        )));
    }
    Dataset::new(features, labels, alphabet)
}

pub fn load_dataset_csv(path: impl AsRef<Path>, alphabet: LabelAlphabet) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset_csv(&text, alphabet, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, a: LabelAlphabet) -> Result<Dataset> {
        parse_dataset_csv(text, a, Path::new("d.csv"))
    }

    #[test]
    fn header_is_optional() {
        let with = parse("a,b,label\n1,2,+1\n3,4,-1\n", LabelAlphabet::PlusMinusOne).unwrap();
        let without = parse("1,2,+1\n3,4,-1\n", LabelAlphabet::PlusMinusOne).unwrap();
        assert_eq!(with, without);
        assert_eq!(with.dim(), 2);
        assert_eq!(with.labels(), &[1.0, -1.0]);
    }

    #[test]
    fn short_row_names_line() {
        let err = parse(
            "x1,x2,x3,x4,y\n1,2,3,4,1\n1,2,3,1\n",
            LabelAlphabet::ZeroOne,
        )
        .unwrap_err();
        match err {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("expected 4"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_fixes_width() {
        let err = parse("x1,x2,x3,x4,y\n1,2,3,1\n", LabelAlphabet::ZeroOne).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_and_bad_labels() {
        assert!(matches!(
            parse("", LabelAlphabet::ZeroOne),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            parse("a,b\n", LabelAlphabet::ZeroOne),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            parse("1,2,+1\n", LabelAlphabet::ZeroOne),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            parse("1,2,cat\n", LabelAlphabet::PlusMinusOne),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn split_is_seeded_and_disjoint() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let labels = (0..20)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let ds = Dataset::new(rows, labels, LabelAlphabet::PlusMinusOne).unwrap();
        let (train, val) = ds.split(0.3, 4).unwrap();
        assert_eq!((train.len(), val.len()), (14, 6));
        let mut all: Vec<f64> = train
            .features()
            .iter()
            .chain(val.features())
            .map(|r| r[0])
            .collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, (0..20).map(|i| i as f64).collect::<Vec<_>>());
        assert_eq!(ds.split(0.3, 4).unwrap(), (train, val));
        assert!(ds.split(1.0, 4).is_err());
    }

    #[test]
    fn scaler_maps_to_zero_pi() {
        let ds = Dataset::new(
            vec![vec![1.0, 5.0], vec![3.0, 5.0], vec![2.0, 5.0]],
            vec![0.0, 1.0, 0.0],
            LabelAlphabet::ZeroOne,
        )
        .unwrap();
        let s = ds.scaled(&ds.fit_scaler());
        assert_eq!(s.features()[0], vec![0.0, 0.0]);
        assert_eq!(s.features()[1], vec![PI, 0.0]);
        assert_eq!(s.features()[2], vec![PI / 2.0, 0.0]);
    }

    #[test]
    fn shipped_iris_file_loads() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/iris_binary.csv");
        let ds = load_dataset_csv(path, LabelAlphabet::PlusMinusOne).unwrap();
        assert_eq!((ds.len(), ds.dim()), (100, 4));
        assert_eq!(ds.labels().iter().filter(|y| **y > 0.0).count(), 50);
    }
}
