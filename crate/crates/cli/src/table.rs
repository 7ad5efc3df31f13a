use std::io::{self, Write};

use tsmetric::DistanceSpec;

use crate::Format;

pub struct BenchRow {
    pub dataset: String,
    pub distance: DistanceSpec,
    pub error_rate: f64,
    pub n_errors: usize,
    pub n_test: usize,
    pub fallbacks: usize,
    /// Seconds; the only column that varies between runs.
    pub wall_time: f64,
}

pub struct BenchTable {
    distances: Vec<DistanceSpec>,
    rows: Vec<BenchRow>,
}

const HEADER: [&str; 7] = [
    "dataset",
    "distance",
    "error_rate",
    "n_errors",
    "n_test",
    "fallbacks",
    "wall_time_s",
];

impl BenchTable {
    pub fn new(distances: Vec<DistanceSpec>) -> Self {
        BenchTable {
            distances,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: BenchRow) {
        self.rows.push(row);
    }

    /// Per distance, the number of datasets on which it reached the lowest
    /// error. Ties all count.
    pub fn best_counts(&self) -> Vec<(DistanceSpec, usize)> {
        let mut datasets: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !datasets.contains(&r.dataset.as_str()) {
                datasets.push(&r.dataset);
            }
        }
        let mut counts: Vec<(DistanceSpec, usize)> = self.distances.iter().map(|d| (*d, 0)).collect();
        for name in datasets {
            let rows: Vec<&BenchRow> = self.rows.iter().filter(|r| r.dataset == name).collect();
            let best = rows.iter().map(|r| r.n_errors).min().expect("dataset has rows");
            for r in rows.iter().filter(|r| r.n_errors == best) {
                if let Some(c) = counts.iter_mut().find(|(d, _)| *d == r.distance) {
                    c.1 += 1;
                }
            }
        }
        counts
    }

    fn cells(r: &BenchRow) -> [String; 7] {
        [
            r.dataset.clone(),
            r.distance.to_string(),
            format!("{:.4}", r.error_rate),
            r.n_errors.to_string(),
            r.n_test.to_string(),
            r.fallbacks.to_string(),
            format!("{:.3}", r.wall_time),
        ]
    }

    pub fn write(&self, w: &mut dyn Write, format: Format, summary: bool) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "{}", HEADER.join(","))?;
                for r in &self.rows {
                    writeln!(w, "{}", Self::cells(r).join(","))?;
                }
                if summary {
                    writeln!(w)?;
                    writeln!(w, "distance,best_count")?;
                    for (d, n) in self.best_counts() {
                        writeln!(w, "{d},{n}")?;
                    }
                }
            }
            Format::Markdown => {
                writeln!(w, "| {} |", HEADER.join(" | "))?;
                writeln!(w, "|{}", "---|".repeat(HEADER.len()))?;
                for r in &self.rows {
                    writeln!(w, "| {} |", Self::cells(r).join(" | "))?;
                }
                if summary {
                    writeln!(w)?;
                    writeln!(w, "| distance | best_count |")?;
                    writeln!(w, "|---|---|")?;
                    for (d, n) in self.best_counts() {
                        writeln!(w, "| {d} | {n} |")?;
                    }
                }
            }
        }
        Ok(())
    }
}
