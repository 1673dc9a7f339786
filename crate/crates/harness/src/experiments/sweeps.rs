use ltgmm_core::bounds::{lda_error_formula, lda_error_shifted, mda_error_bound, mda_error_shifted_bound};

use super::{draw_pair, lda_mda_errors, par_grid, params_for, substream};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::sweep::{SweepResult, SweepRow};

const LDA: &str = "fitted_lda";
const MDA: &str = "fitted_mda";

fn pair_rows(
    cfg: &ExperimentConfig,
    result: &mut SweepResult,
    name: &str,
    value: f64,
    samples: &[(f64, f64)],
    bounds: (Option<f64>, Option<f64>),
    unit_range: bool,
) -> Result<()> {
    let lda: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mda: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let seed = cfg.master_seed;
    result.rows.push(SweepRow::from_samples(name, value, LDA, &lda, bounds.0, seed, unit_range)?);
    result.rows.push(SweepRow::from_samples(name, value, MDA, &mda, bounds.1, seed, unit_range)?);
    Ok(())
}

/// Test errors over a grid of `|mu|`, with the closed-form LDA error and
/// MDA bound attached.
pub fn run_sweep_mu(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.grid((2.0, 6.0, 0.5))?;
    if let Some(v) = grid.iter().find(|v| !(**v > 0.0)) {
        return Err(HarnessError::Config(format!("mu_norm grid values must be positive, got {v}")));
    }
    let cells = par_grid(cfg, grid.len(), cfg.replicates, |c, r| {
        let s = substream(cfg, "sweep-mu", c, r);
        let params = params_for(cfg, cfg.d, grid[c], cfg.p, &s)?;
        let (train, test) = draw_pair(&params, &params, cfg.n_train, cfg.n_test, &s);
        lda_mda_errors(cfg, &train, &test, cfg.p)
    })?;
    let mut out = SweepResult::default();
    for (value, samples) in grid.iter().zip(&cells) {
        let nu = value / cfg.sigma;
        let bounds = (Some(lda_error_formula(nu, cfg.p)?), Some(mda_error_bound(nu, cfg.p)?));
        pair_rows(cfg, &mut out, "mu_norm", *value, samples, bounds, true)?;
    }
    Ok(out)
}

/// Grid of `p` values rounded to 10 decimals, clipped to `[0.51, 0.99]`
/// and deduplicated.
pub(crate) fn clipped_p_grid(grid: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in grid {
        let v = ((v * 1e10).round() / 1e10).clamp(0.51, 0.99);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Test errors over a grid of `p` clipped to `[0.51, 0.99]`.
pub fn run_sweep_p(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = clipped_p_grid(&cfg.grid((0.5, 1.0, 0.01))?);
    let nu = cfg.mu_norm / cfg.sigma;
    let cells = par_grid(cfg, grid.len(), cfg.replicates, |c, r| {
        let s = substream(cfg, "sweep-p", c, r);
        let params = params_for(cfg, cfg.d, cfg.mu_norm, grid[c], &s)?;
        let (train, test) = draw_pair(&params, &params, cfg.n_train, cfg.n_test, &s);
        lda_mda_errors(cfg, &train, &test, grid[c])
    })?;
    let mut out = SweepResult::default();
    for (p, samples) in grid.iter().zip(&cells) {
        let bounds = (Some(lda_error_formula(nu, *p)?), Some(mda_error_bound(nu, *p)?));
        pair_rows(cfg, &mut out, "p", *p, samples, bounds, true)?;
    }
    Ok(out)
}

/// `|err - bound| * sqrt(n / (d ln n))`.
pub fn scaling_statistic(err: f64, bound: f64, n: usize, d: usize) -> f64 {
    let n = n as f64;
    (err - bound).abs() * (n / (d as f64 * n.ln())).sqrt()
}

/// Estimation-error statistic over a grid of training sizes.
pub fn run_scaling_n(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = match &cfg.grid_values {
        Some(v) => v.clone(),
        None if cfg.grid_start.is_none() => vec![1000.0, 2000.0, 4000.0, 8000.0, 16000.0],
        None => cfg.grid((1000.0, 16000.0, 1000.0))?,
    };
    let ns: Vec<usize> = grid
        .iter()
        .map(|&v| {
            if v.fract() != 0.0 || v < 100.0 {
                Err(HarnessError::Config(format!("training sizes must be integers >= 100, got {v}")))
            } else {
                Ok(v as usize)
            }
        })
        .collect::<Result<_>>()?;
    let nu = cfg.mu_norm / cfg.sigma;
    let bl = lda_error_formula(nu, cfg.p)?;
    let bm = mda_error_bound(nu, cfg.p)?;
    let cells = par_grid(cfg, ns.len(), cfg.replicates, |c, r| {
        let s = substream(cfg, "scale-n", c, r);
        let params = params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
        let (train, test) = draw_pair(&params, &params, ns[c], cfg.n_test, &s);
        let (el, em) = lda_mda_errors(cfg, &train, &test, cfg.p)?;
        Ok((scaling_statistic(el, bl, ns[c], cfg.d), scaling_statistic(em, bm, ns[c], cfg.d)))
    })?;
    let mut out = SweepResult::default();
    for (n, samples) in ns.iter().zip(&cells) {
        pair_rows(cfg, &mut out, "n", *n as f64, samples, (None, None), false)?;
    }
    Ok(out)
}

/// Train on `D_{1-1/t}`, test on `D_p`, over a grid of `t`.
pub fn run_shifted(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = match &cfg.grid_values {
        Some(v) => v.clone(),
        None if cfg.grid_start.is_none() => vec![10.0, 100.0, 1000.0, 2000.0],
        None => cfg.grid((10.0, 2000.0, 10.0))?,
    };
    if let Some(t) = grid.iter().find(|t| !(**t > 2.0 && t.is_finite())) {
        return Err(HarnessError::Config(format!("tail parameter t must exceed 2, got {t}")));
    }
    let nu = cfg.mu_norm / cfg.sigma;
    let cells = par_grid(cfg, grid.len(), cfg.replicates, |c, r| {
        let s = substream(cfg, "shifted-t", c, r);
        let q = 1.0 - 1.0 / grid[c];
        let test_params = params_for(cfg, cfg.d, cfg.mu_norm, cfg.p, &s)?;
        let train_params = test_params.with_p(q)?;
        let (train, test) = draw_pair(&train_params, &test_params, cfg.n_train, cfg.n_test, &s);
        lda_mda_errors(cfg, &train, &test, q)
    })?;
    let mut out = SweepResult::default();
    for (t, samples) in grid.iter().zip(&cells) {
        let bounds = (
            Some(lda_error_shifted(nu, cfg.p, *t)?),
            Some(mda_error_shifted_bound(nu, cfg.p, *t)?),
        );
        pair_rows(cfg, &mut out, "t", *t, samples, bounds, true)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        for kv in ["d=10", "n_train=400", "n_test=300", "replicates=3"] {
            c.set_pair(kv).unwrap();
        }
        c
    }

    #[test]
    fn mu_sweep_structure() {
        let mut c = small();
        c.set_pair("grid_values=2,4,6").unwrap();
        let r = run_sweep_mu(&c).unwrap();
        assert_eq!(r.rows.len(), 6);
        for row in &r.rows {
            assert!(row.ci_lo <= row.mean_error && row.mean_error <= row.ci_hi);
            assert!((0.0..=1.0).contains(&row.mean_error));
            assert_eq!(row.replicates, 3);
        }
        assert_eq!(r.rows[0].bound_value, Some(lda_error_formula(2.0, 0.9).unwrap()));
    }

    #[test]
    fn p_grid_is_clipped() {
        let g = clipped_p_grid(&ExperimentConfig::default().grid((0.5, 1.0, 0.01)).unwrap());
        assert_eq!(g.len(), 49);
        assert_eq!((g[0], g[48]), (0.51, 0.99));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn p_sweep_row_count() {
        let mut c = small();
        c.set_pair("grid_start=0.51").unwrap();
        c.set_pair("grid_stop=0.99").unwrap();
        c.set_pair("grid_step=0.02").unwrap();
        let r = run_sweep_p(&c).unwrap();
        assert_eq!(r.rows.len(), 50);
    }

    #[test]
    fn shifted_structure_and_bounds() {
        let mut c = small();
        c.set_pair("grid_values=10,20,50,100,200,500,1000,2000").unwrap();
        let r = run_shifted(&c).unwrap();
        assert_eq!(r.rows.len(), 16);
        let b = r.row("fitted_lda", 10.0).unwrap().bound_value.unwrap();
        assert!((b - 0.081089).abs() < 1e-6);
        c.set_pair("grid_values=2").unwrap();
        assert!(run_shifted(&c).is_err());
    }

    #[test]
    fn scaling_statistic_is_nonnegative_and_guarded() {
        assert_eq!(scaling_statistic(0.1, 0.1, 1000, 50), 0.0);
        assert!(scaling_statistic(0.05, 0.1, 1000, 50) > 0.0);
        let mut c = small();
        c.set_pair("grid_values=500,1000").unwrap();
        let r = run_scaling_n(&c).unwrap();
        assert!(r.rows.iter().all(|row| row.mean_error >= 0.0));
        c.set_pair("grid_values=50").unwrap();
        assert!(run_scaling_n(&c).is_err());
    }
}
