//! Static SVG line plots of sweep results: ensemble means of one metric as
//! a function of the sweep variable, one series per algorithm (split per
//! topology when a sweep mixes them).

use crate::sweep::SweepRow;
use anyhow::{bail, Context, Result};
use plotters::prelude::*;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotAxis {
    M,
    V,
}

impl FromStr for PlotAxis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(PlotAxis::M),
            "v" | "V" => Ok(PlotAxis::V),
            other => bail!("unknown x axis '{other}' (expected m or v)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    Ase,
    Pesr,
    Rse,
    Iterations,
    Bits,
}

impl PlotMetric {
    pub fn label(&self) -> &'static str {
        match self {
            PlotMetric::Ase => "ase",
            PlotMetric::Pesr => "pesr",
            PlotMetric::Rse => "rse",
            PlotMetric::Iterations => "iterations",
            PlotMetric::Bits => "total bits",
        }
    }

    fn value(&self, row: &SweepRow) -> f64 {
        match self {
            PlotMetric::Ase => row.ase,
            PlotMetric::Pesr => row.pesr,
            PlotMetric::Rse => row.rse,
            PlotMetric::Iterations => row.iterations as f64,
            PlotMetric::Bits => row.total_bits as f64,
        }
    }
}

impl FromStr for PlotMetric {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ase" => Ok(PlotMetric::Ase),
            "pesr" => Ok(PlotMetric::Pesr),
            "rse" => Ok(PlotMetric::Rse),
            "iterations" => Ok(PlotMetric::Iterations),
            "bits" => Ok(PlotMetric::Bits),
            other => bail!("unknown metric '{other}'"),
        }
    }
}

/// What to draw and where to write it.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub x: PlotAxis,
    pub y: PlotMetric,
    pub log_y: bool,
    /// Algorithm names that must appear; an algorithm without rows is an
    /// error.
    pub series: Vec<String>,
    pub out: PathBuf,
    pub title: String,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Ensemble means per (algorithm, topology, x value) for the requested
/// algorithms.
fn collect_series(rows: &[SweepRow], spec: &PlotSpec) -> Result<Vec<Series>> {
    let mut grouped: BTreeMap<(String, String), BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for row in rows {
        if !spec.series.iter().any(|s| *s == row.algorithm) {
            continue;
        }
        let x = match spec.x {
            PlotAxis::M => row.m,
            PlotAxis::V => row.v,
        } as u64;
        grouped
            .entry((row.algorithm.clone(), row.topology.clone()))
            .or_default()
            .entry(x)
            .or_default()
            .push(spec.y.value(row));
    }
    for wanted in &spec.series {
        if !grouped.keys().any(|(alg, _)| alg == wanted) {
            bail!("no rows for requested series '{wanted}'");
        }
    }
    let multi_topology = grouped
        .keys()
        .map(|(_, t)| t)
        .collect::<std::collections::BTreeSet<_>>()
        .len()
        > 1;
    Ok(grouped
        .into_iter()
        .map(|((algorithm, topology), points)| Series {
            label: if multi_topology {
                format!("{algorithm} ({topology})")
            } else {
                algorithm
            },
            points: points
                .into_iter()
                .map(|(x, values)| {
                    (x as f64, values.iter().sum::<f64>() / values.len() as f64)
                })
                .collect(),
        })
        .collect())
}

/// Renders the spec to an SVG file.
pub fn emit_plot(rows: &[SweepRow], spec: &PlotSpec) -> Result<()> {
    let mut series = collect_series(rows, spec)?;

    // log scale cannot show exact zeros; clamp them just below the
    // smallest positive value so the "hits zero" points stay visible
    let mut floor = f64::INFINITY;
    for s in &series {
        for &(_, y) in &s.points {
            if y > 0.0 {
                floor = floor.min(y);
            }
        }
    }
    let floor = if floor.is_finite() { floor / 10.0 } else { 1e-8 };
    if spec.log_y {
        for s in &mut series {
            for point in &mut s.points {
                point.1 = point.1.max(floor);
            }
        }
    }

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min >= x_max {
        x_max = x_min + 1.0;
    }
    if y_min >= y_max {
        y_max = y_min + 1.0;
        y_min -= 1e-12;
    }

    if let Some(parent) = spec.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    let root = SVGBackend::new(&spec.out, (900, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let x_desc = match spec.x {
        PlotAxis::M => "m",
        PlotAxis::V => "V",
    };

    if spec.log_y {
        let mut chart = ChartBuilder::on(&root)
            .caption(&spec.title, ("sans-serif", 24))
            .margin(16)
            .x_label_area_size(44)
            .y_label_area_size(70)
            .build_cartesian_2d(x_min..x_max, (y_min..y_max).log_scale())?;
        chart
            .configure_mesh()
            .x_desc(x_desc)
            .y_desc(spec.y.label())
            .draw()?;
        for (idx, s) in series.iter().enumerate() {
            let color = Palette99::pick(idx).mix(0.9);
            chart
                .draw_series(LineSeries::new(s.points.clone(), color.stroke_width(2)))?
                .label(s.label.clone())
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
            chart.draw_series(
                s.points
                    .iter()
                    .map(|&(x, y)| Circle::new((x, y), 3, Palette99::pick(idx).filled())),
            )?;
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()?;
    } else {
        let mut chart = ChartBuilder::on(&root)
            .caption(&spec.title, ("sans-serif", 24))
            .margin(16)
            .x_label_area_size(44)
            .y_label_area_size(70)
            .build_cartesian_2d(x_min..x_max, y_min..y_max)?;
        chart
            .configure_mesh()
            .x_desc(x_desc)
            .y_desc(spec.y.label())
            .draw()?;
        for (idx, s) in series.iter().enumerate() {
            let color = Palette99::pick(idx).mix(0.9);
            chart
                .draw_series(LineSeries::new(s.points.clone(), color.stroke_width(2)))?
                .label(s.label.clone())
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
            chart.draw_series(
                s.points
                    .iter()
                    .map(|&(x, y)| Circle::new((x, y), 3, Palette99::pick(idx).filled())),
            )?;
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()?;
    }
    root.present()?;
    Ok(())
}
