//! Command dispatch for the `ltgmm` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use ltgmm_core::bounds::all_bounds;
use ltgmm_core::{sample_dataset, subpopulation_stats};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::experiments;
use crate::svg::write_svg;
use crate::sweep::SweepResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Sample,
    Bounds,
    SweepMu,
    SweepP,
    ScaleN,
    ShiftedT,
    OverparamGrid,
    Boundary,
    TailShorten,
    Memscore,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Bounds => "bounds",
            Command::SweepMu => "sweep-mu",
            Command::SweepP => "sweep-p",
            Command::ScaleN => "scale-n",
            Command::ShiftedT => "shifted-t",
            Command::OverparamGrid => "overparam-grid",
            Command::Boundary => "boundary",
            Command::TailShorten => "tail-shorten",
            Command::Memscore => "memscore",
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(HarnessError::io(path))
}

fn out(o: &mut dyn Write, text: &str) -> Result<()> {
    o.write_all(text.as_bytes()).map_err(HarnessError::io("<stdout>"))
}

struct Outputs<'a> {
    dir: &'a Path,
    cmd: &'a str,
}

impl Outputs<'_> {
    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.cmd))
    }

    fn meta(&self, cfg: &ExperimentConfig, notes: &[&str]) -> Result<()> {
        let mut s = format!("# ltgmm {}\n", self.cmd);
        for n in notes {
            let _ = writeln!(s, "# {n}");
        }
        s.push_str(&cfg.to_text());
        write_file(&self.path(".meta"), &s)
    }

    fn sweep(&self, result: &SweepResult, title: &str, o: &mut dyn Write) -> Result<Vec<PathBuf>> {
        let csv = self.path(".csv");
        let svg = self.path(".svg");
        result.write_csv(&csv)?;
        write_svg(result, title, &svg)?;
        out(o, &summary(result))?;
        Ok(vec![csv, svg])
    }
}

/// Fixed-width table of a sweep's rows.
pub fn summary(result: &SweepResult) -> String {
    let mut s = format!(
        "{:<14} {:>10} {:<28} {:>10} {:>10} {:>10} {:>10}\n",
        "sweep", "value", "classifier", "mean", "ci_lo", "ci_hi", "bound"
    );
    for r in &result.rows {
        let b = r.bound_value.map(|b| format!("{b:.6}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{:<14} {:>10} {:<28} {:>10.6} {:>10.6} {:>10.6} {:>10}",
            r.sweep_name, r.sweep_value, r.classifier, r.mean_error, r.ci_lo, r.ci_hi, b
        );
    }
    s
}

/// Run one command, writing artifacts under `cfg.out_dir` and a readable
/// summary to `o`. Returns the files written.
pub fn execute(cmd: Command, cfg: &ExperimentConfig, o: &mut dyn Write) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    if cmd == Command::Bounds {
        let nu = cfg.mu_norm / cfg.sigma;
        let mut s = format!("# nu = {nu}, p = {}, t = {}\n", cfg.p, cfg.t);
        for (name, v) in all_bounds(nu, cfg.p, cfg.t)? {
            let _ = writeln!(s, "{name:<24} {v}");
        }
        out(o, &s)?;
        return Ok(Vec::new());
    }
    let dir = cfg.out_dir.as_path();
    std::fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    let outs = Outputs { dir, cmd: cmd.name() };
    let mut files = match cmd {
        Command::Bounds => unreachable!(),
        Command::Sample => {
            let s = experiments::substream(cfg, "sample", 0, 0);
            let params = experiments::params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
            let ds = sample_dataset(&params, cfg.n_train, &mut s.split(0));
            let path = outs.path(".csv");
            ds.write_csv(&path)?;
            let mut text = String::from("subpopulation  count\n");
            if !ds.is_empty() {
                for rec in subpopulation_stats(&ds)? {
                    let _ = writeln!(text, "{:<14} {}", format!("{:?}", rec.component).to_lowercase(), rec.count);
                }
            }
            out(o, &text)?;
            outs.meta(cfg, &[])?;
            vec![path]
        }
        Command::SweepMu => {
            let r = experiments::run_sweep_mu(cfg)?;
            outs.meta(cfg, &["bound columns: lda_error_formula, mda_error_bound"])?;
            outs.sweep(&r, "Test error vs |mu|", o)?
        }
        Command::SweepP => {
            let r = experiments::run_sweep_p(cfg)?;
            outs.meta(cfg, &["p grid clipped to [0.51, 0.99]", "bound columns: lda_error_formula, mda_error_bound"])?;
            outs.sweep(&r, "Test error vs p", o)?
        }
        Command::ScaleN => {
            let r = experiments::run_scaling_n(cfg)?;
            outs.meta(cfg, &["mean_error column holds |test error - closed form| * sqrt(n / (d ln n))"])?;
            outs.sweep(&r, "Scaled estimation error vs n", o)?
        }
        Command::ShiftedT => {
            let r = experiments::run_shifted(cfg)?;
            outs.meta(cfg, &["training distribution D_{1-1/t}", "bound columns: lda_error_shifted, mda_error_shifted_bound"])?;
            outs.sweep(&r, "Test error vs tail parameter t", o)?
        }
        Command::OverparamGrid => {
            let r = experiments::run_overparam_grid(cfg)?;
            let heat = outs.path("-heatmap.csv");
            write_file(&heat, &r.to_heatmap_csv())?;
            let (m, lo, hi) = r.reference_test_error;
            let note = format!("fitted_mda test error on the same samples: {m} [{lo}, {hi}]");
            outs.meta(cfg, &[&note])?;
            let mut files = outs.sweep(&r.to_sweep()?, "EM-fitted MDA error vs k_minus", o)?;
            out(o, &format!("{note}\n"))?;
            files.push(heat);
            files
        }
        Command::Boundary => {
            let g = experiments::run_boundary_grid(cfg)?;
            let path = outs.path(".csv");
            write_file(&path, &g.to_csv_string())?;
            let train = outs.path("-train.csv");
            g.train.write_csv(&train)?;
            outs.meta(cfg, &[])?;
            let pos = g.rows.iter().filter(|r| r.2 == ltgmm_core::Label::Pos).count();
            out(o, &format!("{} lattice points, {pos} labelled +1\n", g.rows.len()))?;
            vec![path, train]
        }
        Command::TailShorten => {
            let r = experiments::run_tail_shortening(cfg)?;
            let reps = outs.path("-replicates.csv");
            let mut s = String::from(
                "removal_pct,replicate,lda_error,mda_error,removed,removed_minority,minority_base_rate,nonzero_scores\n",
            );
            for x in &r.replicates {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    x.removal_pct, x.replicate, x.lda_error, x.mda_error, x.removed, x.removed_minority,
                    x.minority_base_rate, x.nonzero_scores
                );
            }
            write_file(&reps, &s)?;
            outs.meta(cfg, &[&format!("scorer: {}", cfg.scorer.name())])?;
            let mut files = outs.sweep(&r.sweep, "Test error vs removed top-memorized %", o)?;
            files.push(reps);
            files
        }
        Command::Memscore => {
            let r = experiments::run_memscore(cfg)?;
            let path = outs.path(".csv");
            write_file(&path, &r.to_csv_string())?;
            outs.meta(cfg, &[&format!("scorer: {}", cfg.scorer.name())])?;
            let nonzero = r.scores.iter().filter(|v| **v != 0.0).count();
            out(o, &format!("{} scores, {nonzero} nonzero\n", r.scores.len()))?;
            vec![path]
        }
    };
    files.push(outs.path(".meta"));
    Ok(files)
}
