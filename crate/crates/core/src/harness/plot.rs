//! Companion files for plotting a run with gnuplot.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::moments::ParticleEnsemble;

/// Normalized histogram of one velocity component as `center,density` rows.
pub fn histogram_csv(ens: &ParticleEnsemble, component: usize, bins: usize) -> String {
    let values: Vec<f64> = ens.velocities.iter().map(|v| v.get(component)).collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let bins = bins.max(1);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0
    };
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let norm = 1.0 / (ens.len() as f64 * width);
    let mut out = format!("v{},density\n", component + 1);
    for (i, c) in counts.iter().enumerate() {
        let center = lo + (i as f64 + 0.5) * width;
        writeln!(out, "{center:.16e},{:.16e}", *c as f64 * norm).unwrap();
    }
    out
}

/// Script drawing directional temperatures, `ν`/`Pr`, the log-decay curves
/// and (when available) the final velocity histogram.
pub fn gnuplot_script(csv: &Path, histogram: Option<&Path>) -> String {
    let data = csv.display();
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set terminal pngcairo size 1400,900").unwrap();
    writeln!(s, "set output '{}.png'", csv.with_extension("").display()).unwrap();
    writeln!(s, "set multiplot layout 2,2").unwrap();
    writeln!(s, "set xlabel 't'").unwrap();
    writeln!(s, "set title 'directional temperatures'").unwrap();
    writeln!(
        s,
        "plot '{data}' using 1:2 with linespoints, '' using 1:3 with linespoints, '' using 1:4 with linespoints, '' using 1:8 with lines"
    )
    .unwrap();
    writeln!(s, "set title 'nu and Pr'").unwrap();
    writeln!(
        s,
        "plot '{data}' using 1:12 with linespoints, '' using 1:13 with linespoints"
    )
    .unwrap();
    writeln!(s, "set title 'log decay'").unwrap();
    writeln!(
        s,
        "plot '{data}' using 1:(log(abs($8-$2))) title 'log|T-T11|' with linespoints, '' using 1:(log(sqrt($9**2+$10**2+$11**2))) title 'log|q|' with linespoints"
    )
    .unwrap();
    if let Some(h) = histogram {
        writeln!(s, "set title 'final velocity histogram'").unwrap();
        writeln!(s, "set xlabel 'v1'").unwrap();
        writeln!(s, "plot '{}' using 1:2 with boxes", h.display()).unwrap();
    }
    writeln!(s, "unset multiplot").unwrap();
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor3::Vector3;

    #[test]
    fn histogram_integrates_to_one() {
        let ens = ParticleEnsemble::new((0..1000).map(|i| Vector3::splat(i as f64)).collect(), 1.0);
        let csv = histogram_csv(&ens, 0, 10);
        let mut total = 0.0;
        for line in csv.lines().skip(1) {
            let (_, d) = line.split_once(',').unwrap();
            total += d.parse::<f64>().unwrap() * 99.9;
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn script_mentions_inputs() {
        let s = gnuplot_script(Path::new("run.csv"), Some(Path::new("run.hist.csv")));
        assert!(s.contains("'run.csv'") && s.contains("'run.hist.csv'"));
    }
}
