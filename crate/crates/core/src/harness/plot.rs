//! Matplotlib scripts that render the written CSVs. Scripts only reference
//! files relative to their own location.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::noise::{NoiseKind, NoiseModel};
use crate::solvers::SolverKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotMode {
    /// One panel for a single noise cell; the script sits in the cell directory.
    Cell,
    /// Panels by noise kind (rows) and level (columns); the script sits in
    /// the experiment root.
    Fig1,
    /// Predicted and observed mean accuracy against dimension, read from
    /// `fig2_add.csv` and `fig2_mult.csv`.
    Fig2,
    /// Same grid as [`PlotMode::Fig1`], one curve per solver.
    Fig3,
}

/// A noise cell whose aggregates live in `<dir>/<solver>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotCell {
    pub dir: String,
    pub noise: NoiseModel,
    pub solvers: Vec<SolverKind>,
}

const PRELUDE: &str = r#"import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
FLOOR = 1e-16


def load(rel):
    path = os.path.join(HERE, rel)
    if not os.path.exists(path):
        return None
    return np.genfromtxt(path, delimiter=",", names=True, ndmin=1)


def band(ax, rel, label):
    d = load(rel)
    if d is None or d.size == 0:
        return
    x = d["nevals"]
    (line,) = ax.plot(x, np.maximum(d["median"], FLOOR), label=label)
    c = line.get_color()
    ax.fill_between(x, np.maximum(d["q25"], FLOOR), np.maximum(d["q75"], FLOOR), color=c, alpha=0.3, lw=0)
    ax.fill_between(x, np.maximum(d["min"], FLOOR), np.maximum(d["max"], FLOOR), color=c, alpha=0.1, lw=0)

"#;

fn noise_label(noise: NoiseModel) -> String {
    let sym = match noise.kind {
        NoiseKind::Additive => "sigma_a",
        NoiseKind::Multiplicative => "sigma_r",
    };
    format!("{} noise, {sym} = {:e}", noise.kind.short_name(), noise.sigma)
}

fn solver_list(solvers: &[SolverKind]) -> String {
    let names: Vec<String> = solvers.iter().map(|s| format!("{:?}", s.name())).collect();
    format!("[{}]", names.join(", "))
}

fn grid_script(cells: &[PlotCell], out_name: &str) -> String {
    let mut kinds: Vec<NoiseKind> = Vec::new();
    let mut sigmas: Vec<(NoiseKind, f64)> = Vec::new();
    for c in cells {
        if !kinds.contains(&c.noise.kind) {
            kinds.push(c.noise.kind);
        }
        sigmas.push((c.noise.kind, c.noise.sigma));
    }
    let cols = kinds
        .iter()
        .map(|k| sigmas.iter().filter(|(kk, _)| kk == k).count())
        .max()
        .unwrap_or(1);
    let mut s = String::from(PRELUDE);
    let _ = writeln!(s, "PANELS = [");
    for c in cells {
        let row = kinds.iter().position(|k| *k == c.noise.kind).unwrap_or(0);
        let col = cells
            .iter()
            .filter(|o| o.noise.kind == c.noise.kind)
            .position(|o| o.dir == c.dir)
            .unwrap_or(0);
        let _ = writeln!(
            s,
            "    ({row}, {col}, {:?}, {:?}, {}),",
            c.dir,
            noise_label(c.noise),
            solver_list(&c.solvers)
        );
    }
    let _ = writeln!(s, "]");
    let _ = write!(
        s,
        r#"
fig, axes = plt.subplots({rows}, {cols}, figsize=(4.5 * {cols}, 3.5 * {rows}), squeeze=False)
for row, col, rel, title, solvers in PANELS:
    ax = axes[row][col]
    for name in solvers:
        band(ax, os.path.join(rel, name + ".csv"), name.upper())
    ax.set_yscale("log")
    ax.set_xlabel("function evaluations")
    ax.set_ylabel("f(x_k) - f*")
    ax.set_title(title)
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(os.path.join(HERE, {out:?}), dpi=150)
"#,
        rows = kinds.len().max(1),
        cols = cols,
        out = out_name,
    );
    s
}

const FIG2_BODY: &str = r#"
fig, axes = plt.subplots(1, 2, figsize=(10, 4), squeeze=False)
for ax, kind in zip(axes[0], ["add", "mult"]):
    d = load("fig2_" + kind + ".csv")
    if d is None or d.size == 0:
        continue
    for sigma in sorted(set(d["sigma"].tolist()), reverse=True):
        sel = d[d["sigma"] == sigma]
        (line,) = ax.plot(sel["n"], sel["eps_pred"], "--", label="predicted, sigma=%g" % sigma)
        ax.plot(sel["n"], np.maximum(sel["eps_actual"], FLOOR), "o-", color=line.get_color(), label="mean actual, sigma=%g" % sigma)
    ax.set_yscale("log")
    ax.set_xlabel("dimension n")
    ax.set_ylabel("absolute accuracy")
    ax.set_title(kind + " noise")
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "fig2.png"), dpi=150)
"#;

/// Write a plot script for `cells` in the given mode.
pub fn emit_plot_script(mode: PlotMode, cells: &[PlotCell], path: &Path) -> Result<()> {
    let body = match mode {
        PlotMode::Cell => {
            let mut s = String::from(PRELUDE);
            let c = cells.first();
            let solvers = c.map(|c| solver_list(&c.solvers)).unwrap_or_else(|| "[]".into());
            let title = c.map(|c| noise_label(c.noise)).unwrap_or_default();
            let _ = write!(
                s,
                r#"
fig, ax = plt.subplots(figsize=(6, 4))
for name in {solvers}:
    band(ax, name + ".csv", name.upper())
ax.set_yscale("log")
ax.set_xlabel("function evaluations")
ax.set_ylabel("f(x_k) - f*")
ax.set_title({title:?})
ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "plot.png"), dpi=150)
"#
            );
            s
        }
        PlotMode::Fig1 => grid_script(cells, "fig1.png"),
        PlotMode::Fig3 => grid_script(cells, "fig3.png"),
        PlotMode::Fig2 => format!("{PRELUDE}{FIG2_BODY}"),
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(kind: NoiseKind, sigma: f64) -> PlotCell {
        let noise = NoiseModel::new(kind, sigma).unwrap();
        PlotCell {
            dir: crate::harness::cell_dir_name(noise),
            noise,
            solvers: vec![SolverKind::Stars, SolverKind::Rg],
        }
    }

    #[test]
    fn fig1_script_has_four_panels() {
        let dir = tempfile::tempdir().unwrap();
        let cells = vec![
            cell(NoiseKind::Additive, 1e-6),
            cell(NoiseKind::Additive, 1e-3),
            cell(NoiseKind::Multiplicative, 1e-6),
            cell(NoiseKind::Multiplicative, 1e-3),
        ];
        let p = dir.path().join("figure.py");
        emit_plot_script(PlotMode::Fig1, &cells, &p).unwrap();
        let s = std::fs::read_to_string(&p).unwrap();
        assert!(s.contains("plt.subplots(2, 2"));
        assert!(s.contains("(1, 1, \"mult_1e-3\""));
        assert!(s.contains("set_yscale(\"log\")"));
        assert!(!s.contains(dir.path().to_str().unwrap()));
    }

    #[test]
    fn cell_and_fig2_scripts() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c/plot.py");
        emit_plot_script(PlotMode::Cell, &[cell(NoiseKind::Additive, 1e-3)], &p).unwrap();
        let s = std::fs::read_to_string(&p).unwrap();
        assert!(s.contains("[\"stars\", \"rg\"]"));
        let p = dir.path().join("fig2.py");
        emit_plot_script(PlotMode::Fig2, &[], &p).unwrap();
        assert!(std::fs::read_to_string(&p).unwrap().contains("\"fig2_\" + kind"));
    }
}
