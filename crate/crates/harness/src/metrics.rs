//! Solvability and correctness counts per experiment cell.

use std::collections::BTreeMap;
use std::fmt::Write;

use pddlbench_forge::{DomainTag, NaturalnessLevel};
use serde::{Deserialize, Serialize};

use crate::record::{Pipeline, RunRecord};
use crate::HarnessError;

/// Splits records into ranges of one complexity measure; `edges` are
/// ascending lower bounds, e.g. `[2, 6, 11]` for 2-5, 6-10, 11+.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bucketing {
    pub key: String,
    pub edges: Vec<u64>,
}

impl Bucketing {
    fn label(&self, r: &RunRecord) -> String {
        let Some(&v) = r.complexity.get(&self.key) else {
            return format!("{}=?", self.key);
        };
        let i = self.edges.iter().rposition(|&e| v >= e);
        match i {
            None => format!("{}<{}", self.key, self.edges.first().copied().unwrap_or(0)),
            Some(i) => match self.edges.get(i + 1) {
                Some(&next) => format!("{}={}-{}", self.key, self.edges[i], next - 1),
                None => format!("{}>={}", self.key, self.edges[i]),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub domain: DomainTag,
    pub level: NaturalnessLevel,
    pub model_id: String,
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket: Option<String>,
    pub total: usize,
    /// Formalizer rows only.
    pub solvable: Option<usize>,
    pub correct: usize,
    /// Model calls that failed outright; included in `total`.
    pub failed: usize,
}

fn rate(n: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        n as f64 / total as f64
    }
}

impl SummaryRow {
    pub fn solvability(&self) -> Option<f64> {
        self.solvable.map(|s| rate(s, self.total))
    }

    pub fn correctness(&self) -> f64 {
        rate(self.correct, self.total)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub rows: Vec<SummaryRow>,
}

type Key = (DomainTag, &'static str, String, Option<String>);

/// Counts per (domain, level, model[, bucket]). All records must come from
/// one pipeline.
pub fn summarize(records: &[RunRecord], bucketing: Option<&Bucketing>) -> Result<MetricsSummary, HarnessError> {
    let Some(first) = records.first() else {
        return Ok(MetricsSummary::default());
    };
    let pipeline = first.pipeline;
    if let Some(other) = records.iter().find(|r| r.pipeline != pipeline) {
        return Err(HarnessError::MixedPipelines(pipeline, other.pipeline));
    }
    let mut cells: BTreeMap<Key, SummaryRow> = BTreeMap::new();
    for r in records {
        let bucket = bucketing.map(|b| b.label(r));
        let key = (r.domain, r.level.as_str(), r.model_id.clone(), bucket.clone());
        let row = cells.entry(key).or_insert_with(|| SummaryRow {
            domain: r.domain,
            level: r.level,
            model_id: r.model_id.clone(),
            pipeline,
            bucket,
            total: 0,
            solvable: (pipeline == Pipeline::Formalizer).then_some(0),
            correct: 0,
            failed: 0,
        });
        row.total += 1;
        row.failed += r.is_failed() as usize;
        let solvable = r.is_solvable();
        if let Some(s) = row.solvable.as_mut() {
            *s += solvable as usize;
        }
        // a formalizer plan only exists when the predicted pair was solved
        if r.is_correct() && (pipeline == Pipeline::Planner || solvable) {
            row.correct += 1;
        }
    }
    Ok(MetricsSummary {
        rows: cells.into_values().collect(),
    })
}

/// Partitions by pipeline, summarizes each, formalizer rows first.
pub fn summarize_all(records: &[RunRecord], bucketing: Option<&Bucketing>) -> MetricsSummary {
    let mut rows = Vec::new();
    for p in Pipeline::ALL {
        let part: Vec<RunRecord> = records.iter().filter(|r| r.pipeline == p).cloned().collect();
        rows.extend(summarize(&part, bucketing).expect("partitioned by pipeline").rows);
    }
    MetricsSummary { rows }
}

fn frac(n: usize, total: usize) -> String {
    format!("{n}/{total}")
}

impl MetricsSummary {
    /// Plain-text table with columns separated by two spaces.
    pub fn to_table(&self) -> String {
        let header = ["domain", "level", "model", "pipeline", "bucket", "solv", "corr"];
        let show_bucket = self.rows.iter().any(|r| r.bucket.is_some());
        let mut grid: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            grid.push(vec![
                r.domain.to_string(),
                r.level.as_str().to_string(),
                r.model_id.clone(),
                r.pipeline.to_string(),
                r.bucket.clone().unwrap_or_default(),
                r.solvable.map(|s| frac(s, r.total)).unwrap_or_else(|| "-".to_string()),
                frac(r.correct, r.total),
            ]);
        }
        if !show_bucket {
            grid.iter_mut().for_each(|row| {
                row.remove(4);
            });
        }
        let widths: Vec<usize> = (0..grid[0].len()).map(|c| grid.iter().map(|r| r[c].len()).max().unwrap()).collect();
        let mut out = String::new();
        for row in &grid {
            let last = row.len() - 1;
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| if i == last { cell.clone() } else { format!("{cell:<w$}", w = widths[i]) })
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "domain", "level", "model", "pipeline", "bucket", "total", "solvable", "correct", "failed", "solvability",
            "correctness",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.domain.to_string(),
                r.level.as_str().to_string(),
                r.model_id.clone(),
                r.pipeline.to_string(),
                r.bucket.clone().unwrap_or_default(),
                r.total.to_string(),
                r.solvable.map(|s| s.to_string()).unwrap_or_default(),
                r.correct.to_string(),
                r.failed.to_string(),
                r.solvability().map(|s| format!("{s:.4}")).unwrap_or_default(),
                format!("{:.4}", r.correctness()),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}
