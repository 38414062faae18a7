use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::records::{read_records, EpisodeRecord, EPISODES_CSV};
use super::train::SUMMARY_FILE;
use crate::env::{D_MAX, G_MAX};
use crate::error::{Error, Result};

/// Per-episode means over trials.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeMeans {
    pub episode: Vec<usize>,
    pub energy: Vec<f64>,
    pub reward: Vec<f64>,
    pub gate_count: Vec<f64>,
    pub depth: Vec<f64>,
}

pub fn episode_means(records: &[EpisodeRecord]) -> EpisodeMeans {
    let mut groups: BTreeMap<usize, Vec<&EpisodeRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.episode).or_default().push(r);
    }
    let mut m = EpisodeMeans {
        episode: vec![],
        energy: vec![],
        reward: vec![],
        gate_count: vec![],
        depth: vec![],
    };
    for (ep, rs) in groups {
        let n = rs.len() as f64;
        let mean = |f: &dyn Fn(&EpisodeRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / n;
        m.episode.push(ep);
        m.energy.push(mean(&|r| r.final_energy));
        m.reward.push(mean(&|r| r.cumulative_reward));
        m.gate_count.push(mean(&|r| r.gate_count as f64));
        m.depth.push(mean(&|r| r.depth as f64));
    }
    m
}

struct RefLine {
    label: &'static str,
    value: f64,
    color: &'static str,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;

fn line_chart(title: &str, y_label: &str, xs: &[usize], ys: &[f64], refs: &[RefLine]) -> String {
    let x_min = *xs.first().unwrap_or(&0) as f64;
    let x_max = (*xs.last().unwrap_or(&1) as f64).max(x_min + 1.0);
    let mut y_min = ys
        .iter()
        .copied()
        .chain(refs.iter().map(|r| r.value))
        .fold(f64::INFINITY, f64::min);
    let mut y_max = ys
        .iter()
        .copied()
        .chain(refs.iter().map(|r| r.value))
        .fold(f64::NEG_INFINITY, f64::max);
    if !(y_max > y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_min, y_max) = (y_min - pad, y_max + pad);
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * pw;
    let sy = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{title}</text>"#,
        WIDTH / 2.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );
    for k in 0..=4 {
        let y = y_min + (y_max - y_min) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"##,
            MARGIN_L - 6.0,
            sy(y) + 4.0,
            tick(y)
        );
        let x = x_min + (x_max - x_min) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r##"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"##,
            sx(x),
            HEIGHT - MARGIN_B + 16.0,
            x.round()
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">episode</text>"#,
        MARGIN_L + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0
    );
    for r in refs {
        let y = sy(r.value);
        let _ = writeln!(
            s,
            r#"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="{}" stroke-dasharray="6 4"/>"#,
            MARGIN_L + pw,
            r.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end" fill="{}">{}</text>"#,
            MARGIN_L + pw - 4.0,
            y - 4.0,
            r.color,
            r.label
        );
    }
    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x as f64), sy(y)))
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{}"/>"##,
        points.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

fn tick(y: f64) -> String {
    if y.abs() >= 100.0 {
        format!("{y:.0}")
    } else {
        format!("{y:.3}")
    }
}

/// Reference energies recorded in a run's `summary.json`, when present.
fn reference_energies(run_dir: &Path) -> Vec<RefLine> {
    let Ok(text) = fs::read_to_string(run_dir.join(SUMMARY_FILE)) else {
        return Vec::new();
    };
    let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) else {
        return Vec::new();
    };
    let mut refs = Vec::new();
    let field = |k: &str| v.get(k).and_then(|x| x.as_f64());
    if let Some(e) = field("e_min") {
        refs.push(RefLine {
            label: "E_min",
            value: e,
            color: "#d62728",
        });
    }
    if let Some(e) = field("e_fci") {
        if field("e_min").is_none_or(|m| (m - e).abs() > 1e-9) {
            refs.push(RefLine {
                label: "E_FCI",
                value: e,
                color: "#9467bd",
            });
        }
    }
    if v.get("e_fci").is_some_and(|x| !x.is_null()) {
        if let Some(e) = field("e_hf") {
            refs.push(RefLine {
                label: "E_HF",
                value: e,
                color: "#2ca02c",
            });
        }
    }
    refs
}

/// Renders energy, reward, gate-count and depth curves (means over trials)
/// from `episodes.csv` into SVG files next to it.
pub fn emit_plots(run_dir: &Path) -> Result<Vec<PathBuf>> {
    let csv_path = run_dir.join(EPISODES_CSV);
    let records = read_records(&csv_path)?;
    if records.is_empty() {
        return Err(Error::Empty(format!(
            "{} has no episodes",
            csv_path.display()
        )));
    }
    let m = episode_means(&records);
    let charts = [
        (
            "energy.svg",
            line_chart(
                "Mean energy",
                "⟨H⟩",
                &m.episode,
                &m.energy,
                &reference_energies(run_dir),
            ),
        ),
        (
            "reward.svg",
            line_chart("Mean cumulative reward", "R", &m.episode, &m.reward, &[]),
        ),
        (
            "gate_count.svg",
            line_chart(
                "Mean gate count",
                "g",
                &m.episode,
                &m.gate_count,
                &[RefLine {
                    label: "g_max",
                    value: G_MAX as f64,
                    color: "#d62728",
                }],
            ),
        ),
        (
            "depth.svg",
            line_chart(
                "Mean circuit depth",
                "D",
                &m.episode,
                &m.depth,
                &[RefLine {
                    label: "D_max",
                    value: D_MAX as f64,
                    color: "#d62728",
                }],
            ),
        ),
    ];
    let mut out = Vec::new();
    for (name, svg) in charts {
        let path = run_dir.join(name);
        fs::write(&path, svg)?;
        out.push(path);
    }
    Ok(out)
}
