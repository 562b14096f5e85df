//! Thin against unrestricted saturation: words visited and wall time.

use std::fmt;
use std::time::{Duration, Instant};

use crate::corpus::Instance;
use crate::segalify::{h1_necklace_with, Saturation, SegalifyError};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance: String,
    pub backend: Saturation,
    pub wall: Duration,
    pub words_visited: u64,
    pub classes: usize,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Instances whose two partitions differ; empty when the saturations
    /// agree.
    pub partition_mismatches: Vec<String>,
}

pub fn backend_name(s: Saturation) -> &'static str {
    match s {
        Saturation::Thin => "thin",
        Saturation::Unrestricted => "naive",
    }
}

/// Runs both saturations on every instance with the default word bound.
pub fn run(instances: &[Instance]) -> Result<BenchReport, SegalifyError> {
    let mut rows = Vec::new();
    let mut partition_mismatches = Vec::new();
    for inst in instances {
        let mut parts = Vec::new();
        for backend in [Saturation::Thin, Saturation::Unrestricted] {
            let start = Instant::now();
            let h = h1_necklace_with(&inst.sset, None, backend)?;
            let wall = start.elapsed();
            rows.push(BenchRow {
                instance: inst.name.clone(),
                backend,
                wall,
                words_visited: h.words_visited(),
                classes: h.class_count(),
            });
            parts.push(h.partition().to_vec());
        }
        if parts[0] != parts[1] {
            partition_mismatches.push(inst.name.clone());
        }
    }
    Ok(BenchReport { rows, partition_mismatches })
}

/// `(instance, thin, naive)` visit counts in input order.
pub fn visit_pairs(report: &BenchReport) -> Vec<(String, u64, u64)> {
    report
        .rows
        .chunks(2)
        .map(|pair| (pair[0].instance.clone(), pair[0].words_visited, pair[1].words_visited))
        .collect()
}

/// Thin visits strictly fewer words than naive on every listed instance,
/// and the gap does not shrink along the list.
pub fn monotone_gap(pairs: &[(String, u64, u64)]) -> Result<(), String> {
    let mut last_gap = 0;
    for (name, thin, naive) in pairs {
        if thin >= naive {
            return Err(format!("{name}: thin visited {thin} words, naive {naive}"));
        }
        let gap = naive - thin;
        if gap < last_gap {
            return Err(format!("{name}: gap {gap} is smaller than the previous {last_gap}"));
        }
        last_gap = gap;
    }
    Ok(())
}

/// Text table; `with_time` controls the wall-time column.
pub struct Table<'a> {
    pub report: &'a BenchReport,
    pub with_time: bool,
}

impl fmt::Display for Table<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.with_time {
            writeln!(f, "{:<16} {:<8} {:>12} {:>14} {:>8}", "instance", "backend", "wall_ms", "words_visited", "classes")?;
        } else {
            writeln!(f, "{:<16} {:<8} {:>14} {:>8}", "instance", "backend", "words_visited", "classes")?;
        }
        for r in &self.report.rows {
            let b = backend_name(r.backend);
            if self.with_time {
                let ms = r.wall.as_secs_f64() * 1e3;
                writeln!(f, "{:<16} {:<8} {:>12.3} {:>14} {:>8}", r.instance, b, ms, r.words_visited, r.classes)?;
            } else {
                writeln!(f, "{:<16} {:<8} {:>14} {:>8}", r.instance, b, r.words_visited, r.classes)?;
            }
        }
        Ok(())
    }
}
