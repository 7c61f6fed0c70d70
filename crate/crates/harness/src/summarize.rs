//! Aggregation of sweep rows into per-group statistics.

use crate::sweep::SweepRow;
use anyhow::{bail, Result};
use std::collections::BTreeMap;

pub const GROUP_KEYS: [&str; 6] = ["algorithm", "topology", "n", "m", "k", "V"];

/// Mean / min / max triple of one metric within a group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    fn from_values(values: &[f64]) -> Stat {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for &v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
        }
        Stat {
            mean: sum / values.len() as f64,
            min,
            max,
        }
    }
}

/// Aggregated statistics of one group of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    /// Values of the group keys, in the order they were requested.
    pub group: Vec<String>,
    pub runs: usize,
    pub ase: Stat,
    pub pesr: Stat,
    pub rse: Stat,
    pub iterations: Stat,
    pub total_bits: Stat,
}

fn key_value(row: &SweepRow, key: &str) -> Result<String> {
    Ok(match key {
        "algorithm" => row.algorithm.clone(),
        "topology" => row.topology.clone(),
        "n" => row.n.to_string(),
        "m" => row.m.to_string(),
        "k" => row.k.to_string(),
        "V" => row.v.to_string(),
        other => bail!("unknown group key '{other}' (expected one of {GROUP_KEYS:?})"),
    })
}

/// Groups rows by the given keys and reports mean/min/max of every metric
/// per group. Groups are emitted in lexicographic key order.
pub fn summarize(rows: &[SweepRow], keys: &[&str]) -> Result<Vec<AggregateRow>> {
    if rows.is_empty() {
        bail!("no rows to summarize");
    }
    let mut groups: BTreeMap<Vec<String>, Vec<&SweepRow>> = BTreeMap::new();
    for row in rows {
        let mut group = Vec::with_capacity(keys.len());
        for key in keys {
            group.push(key_value(row, key)?);
        }
        groups.entry(group).or_default().push(row);
    }
    // numeric keys sort numerically where possible
    let mut out: Vec<AggregateRow> = groups
        .into_iter()
        .map(|(group, members)| {
            let pull = |f: fn(&SweepRow) -> f64| {
                Stat::from_values(&members.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            AggregateRow {
                group,
                runs: members.len(),
                ase: pull(|r| r.ase),
                pesr: pull(|r| r.pesr),
                rse: pull(|r| r.rse),
                iterations: pull(|r| r.iterations as f64),
                total_bits: pull(|r| r.total_bits as f64),
            }
        })
        .collect();
    out.sort_by_key(|row| {
        row.group
            .iter()
            .map(|g| match g.parse::<u64>() {
                Ok(v) => (0u8, v, String::new()),
                Err(_) => (1u8, 0, g.clone()),
            })
            .collect::<Vec<_>>()
    });
    Ok(out)
}

/// Renders aggregates as an aligned text table.
pub fn render_table(keys: &[&str], aggregates: &[AggregateRow]) -> String {
    let mut header: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    header.push("runs".into());
    for metric in ["ase", "pesr", "rse", "iterations", "bits"] {
        for stat in ["mean", "min", "max"] {
            header.push(format!("{metric}_{stat}"));
        }
    }
    let mut lines = vec![header.join(",")];
    for agg in aggregates {
        let mut cells = agg.group.clone();
        cells.push(agg.runs.to_string());
        for stat in [agg.ase, agg.pesr, agg.rse, agg.iterations, agg.total_bits] {
            cells.push(format!("{}", stat.mean));
            cells.push(format!("{}", stat.min));
            cells.push(format!("{}", stat.max));
        }
        lines.push(cells.join(","));
    }
    lines.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(algorithm: &str, m: usize, ase: f64, bits: u64) -> SweepRow {
        SweepRow {
            algorithm: algorithm.into(),
            topology: "complete".into(),
            n: 100,
            m,
            k: 10,
            v: 10,
            run_id: 0,
            ase,
            pesr: 1.0 - ase,
            rse: ase * 0.1,
            iterations: 100,
            total_bits: bits,
            t1: 50,
            converged: true,
        }
    }

    #[test]
    fn single_row_collapses_to_itself() {
        let rows = vec![row("djist", 20, 0.25, 400)];
        let agg = summarize(&rows, &["algorithm", "m"]).unwrap();
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].ase.mean, 0.25);
        assert_eq!(agg[0].ase.min, 0.25);
        assert_eq!(agg[0].ase.max, 0.25);
        assert_eq!(agg[0].runs, 1);
    }

    #[test]
    fn groups_split_and_aggregate() {
        let rows = vec![
            row("djist", 20, 0.2, 100),
            row("djist", 20, 0.4, 300),
            row("dcomp1", 20, 0.1, 2800),
        ];
        let agg = summarize(&rows, &["algorithm"]).unwrap();
        assert_eq!(agg.len(), 2);
        // lexicographic: dcomp1 before djist
        assert_eq!(agg[0].group, vec!["dcomp1".to_string()]);
        assert_eq!(agg[1].ase.mean, 0.30000000000000004);
        assert_eq!(agg[1].total_bits.min, 100.0);
        assert_eq!(agg[1].total_bits.max, 300.0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(summarize(&[], &["algorithm"]).is_err());
    }

    #[test]
    fn unknown_key_is_an_error() {
        let rows = vec![row("djist", 20, 0.2, 100)];
        assert!(summarize(&rows, &["nope"]).is_err());
    }
}
