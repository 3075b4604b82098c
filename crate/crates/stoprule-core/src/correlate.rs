//! Correlation coefficients, the correlation-of-online-indicators (COI)
//! compound criterion, and the empirical conjunctive-fork checker.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::indicator::{IndicatorConfig, IndicatorTrace};

/// Correlation coefficient selector for COI windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coefficient {
    #[default]
    Pearson,
    Spearman,
}

impl Coefficient {
    pub fn name(&self) -> &'static str {
        match self {
            Coefficient::Pearson => "pearson",
            Coefficient::Spearman => "spearman",
        }
    }

    pub fn apply(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        match self {
            Coefficient::Pearson => pearson(x, y),
            Coefficient::Spearman => spearman(x, y),
        }
    }
}

fn is_constant(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Product-moment correlation. `None` when the sequences differ in length,
/// are shorter than 2, or either has zero variance. Constancy is checked
/// exactly; summation noise around an unrepresentable mean must not turn a
/// zero variance into a tiny one.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    if is_constant(x) || is_constant(y) {
        return None;
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    // sqrt of the product keeps self-correlation at exactly 1.
    Some(cov / libm::sqrt(sxx * syy))
}

/// Average ranks (1-based), ties sharing the mean of their positions.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i+1..=j share the average rank
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            out[idx] = avg;
        }
        i = j;
    }
    out
}

/// Rank-order correlation: pearson applied to average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    pearson(&ranks(x), &ranks(y))
}

/// COI configuration: window length, correlation threshold, coefficient,
/// and the pool of online indicators whose firings are correlated.
#[derive(Debug, Clone, PartialEq)]
pub struct CoiConfig {
    pub k: usize,
    pub alpha_corr: f64,
    pub coefficient: Coefficient,
    pub pool: Vec<IndicatorConfig>,
}

impl CoiConfig {
    pub fn new(
        k: usize,
        alpha_corr: f64,
        coefficient: Coefficient,
        pool: Vec<IndicatorConfig>,
    ) -> Result<Self> {
        let cfg = Self {
            k,
            alpha_corr,
            coefficient,
            pool,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidConfig(format!(
                "coi: window length {} < 2 (a length-1 series has no correlation)",
                self.k
            )));
        }
        // The grid deliberately includes 1.0, where the strict comparison
        // can never hold.
        if !self.alpha_corr.is_finite() || !(0.0..=1.0).contains(&self.alpha_corr) {
            return Err(Error::InvalidConfig(format!(
                "coi: threshold {} outside [0, 1]",
                self.alpha_corr
            )));
        }
        if self.pool.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "coi: pool of {} indicators, need at least 2",
                self.pool.len()
            )));
        }
        for (i, member) in self.pool.iter().enumerate() {
            if matches!(member, IndicatorConfig::Coi(_) | IndicatorConfig::Oracle) {
                return Err(Error::InvalidConfig(format!(
                    "coi: pool member {i} is {}; coi and oracle cannot be pooled",
                    member.name()
                )));
            }
            member.validate()?;
            if self.pool[..i].contains(member) {
                return Err(Error::InvalidConfig(format!(
                    "coi: duplicate pool member {member}"
                )));
            }
        }
        Ok(())
    }
}

/// The documented default pool: each classic rule at its usual setting.
pub fn default_pool() -> Vec<IndicatorConfig> {
    vec![
        IndicatorConfig::Gl { alpha: 1.0 },
        IndicatorConfig::p(5, 1.0),
        IndicatorConfig::Pq { k: 5, alpha: 1.0 },
        IndicatorConfig::Up { s: 5, k: 5 },
        IndicatorConfig::Hnr { k: 5, alpha: 5.0 },
        IndicatorConfig::Og { alpha: 0.5 },
    ]
}

fn window(trace: &IndicatorTrace, e: usize, k: usize) -> Vec<f64> {
    (e - k + 1..=e)
        .map(|epoch| if trace.fires(epoch) { 1.0 } else { 0.0 })
        .collect()
}

/// Maximal correlation between the firing windows of any two distinct pool
/// members that both fire at least once in the window ending at `e`,
/// clamped at 0. Returns 0 when no pair qualifies and `None` before the
/// first full window.
///
/// Constant windows have no product-moment correlation; a pair of equal
/// constant windows that do fire counts as full agreement (1.0), and a
/// pair with exactly one constant window is skipped.
pub fn coi_value(traces: &[IndicatorTrace], cfg: &CoiConfig, e: usize) -> Result<Option<f64>> {
    if traces.len() != cfg.pool.len() {
        return Err(Error::PoolMismatch {
            traces: traces.len(),
            pool: cfg.pool.len(),
        });
    }
    let len = traces.first().map_or(0, |t| t.len());
    if traces.iter().any(|t| t.len() != len) {
        return Err(Error::InvalidConfig(alloc::string::String::from(
            "coi: pool traces differ in length",
        )));
    }
    if e < 1 || e > len {
        return Err(Error::EpochOutOfRange { epoch: e, len });
    }
    if e < cfg.k {
        return Ok(None);
    }

    let windows: Vec<Vec<f64>> = traces.iter().map(|t| window(t, e, cfg.k)).collect();
    let qualifies: Vec<bool> = windows.iter().map(|w| w.contains(&1.0)).collect();

    let mut best = 0.0f64;
    for i in 0..windows.len() {
        if !qualifies[i] {
            continue;
        }
        for j in (i + 1)..windows.len() {
            if !qualifies[j] {
                continue;
            }
            let const_i = windows[i].iter().all(|&v| v == windows[i][0]);
            let const_j = windows[j].iter().all(|&v| v == windows[j][0]);
            let candidate = if const_i && const_j {
                // Both qualify, so both windows are all ones: unison firing.
                if windows[i] == windows[j] {
                    Some(1.0)
                } else {
                    None
                }
            } else if const_i || const_j {
                None
            } else {
                cfg.coefficient.apply(&windows[i], &windows[j])
            };
            if let Some(c) = candidate {
                if c > best {
                    best = c;
                }
            }
        }
    }
    Ok(Some(best))
}

/// The COI online indicator: true at strip boundaries where the window
/// correlation strictly exceeds the threshold.
pub fn coi_fires(traces: &[IndicatorTrace], cfg: &CoiConfig, e: usize) -> Result<bool> {
    if !e.is_multiple_of(cfg.k) {
        return Ok(false);
    }
    Ok(matches!(coi_value(traces, cfg, e)?, Some(v) if v > cfg.alpha_corr))
}

/// The empirical frequencies behind a fork check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForkProbabilities {
    pub p_a: f64,
    pub p_b: f64,
    pub p_ab: f64,
    pub p_a_given_c: f64,
    pub p_b_given_c: f64,
    pub p_ab_given_c: f64,
    pub p_a_given_not_c: f64,
    pub p_b_given_not_c: f64,
    pub p_ab_given_not_c: f64,
}

/// Outcome of checking the conjunctive-fork conditions on event data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForkReport {
    /// p(A & B) exceeds p(A) p(B) by more than the tolerance.
    pub corr_holds: bool,
    /// C screens off the correlation (conditional independence within tol).
    pub screen_c: bool,
    /// not-C screens off the correlation.
    pub screen_not_c: bool,
    /// C raises the probability of A by more than the tolerance.
    pub cause_a: bool,
    /// C raises the probability of B by more than the tolerance.
    pub cause_b: bool,
    pub probs: ForkProbabilities,
}

impl ForkReport {
    pub fn all_hold(&self) -> bool {
        self.corr_holds && self.screen_c && self.screen_not_c && self.cause_a && self.cause_b
    }
}

/// Substitute empirical frequencies into the five fork conditions.
///
/// The tolerance plays both roles: the screening-off equalities hold when
/// the two sides differ by at most `tol`, and the inequalities hold when
/// the left side exceeds the right by more than `tol`. A raw strict
/// comparison would flip on sampling noise for independent events.
pub fn fork_check(a: &[bool], b: &[bool], c: &[bool], tol: f64) -> Result<ForkReport> {
    let n = a.len();
    if n == 0 || b.len() != n || c.len() != n {
        return Err(Error::BadSequences {
            a: a.len(),
            b: b.len(),
            c: c.len(),
        });
    }
    let n_c = c.iter().filter(|&&v| v).count();
    if n_c == 0 || n_c == n {
        return Err(Error::DegenerateConditioning);
    }

    let mut count_a = 0usize;
    let mut count_b = 0usize;
    let mut count_ab = 0usize;
    let mut count_a_c = 0usize;
    let mut count_b_c = 0usize;
    let mut count_ab_c = 0usize;
    let mut count_a_nc = 0usize;
    let mut count_b_nc = 0usize;
    let mut count_ab_nc = 0usize;
    for i in 0..n {
        let (ai, bi, ci) = (a[i], b[i], c[i]);
        count_a += ai as usize;
        count_b += bi as usize;
        count_ab += (ai && bi) as usize;
        if ci {
            count_a_c += ai as usize;
            count_b_c += bi as usize;
            count_ab_c += (ai && bi) as usize;
        } else {
            count_a_nc += ai as usize;
            count_b_nc += bi as usize;
            count_ab_nc += (ai && bi) as usize;
        }
    }

    let total = n as f64;
    let in_c = n_c as f64;
    let in_nc = (n - n_c) as f64;
    let probs = ForkProbabilities {
        p_a: count_a as f64 / total,
        p_b: count_b as f64 / total,
        p_ab: count_ab as f64 / total,
        p_a_given_c: count_a_c as f64 / in_c,
        p_b_given_c: count_b_c as f64 / in_c,
        p_ab_given_c: count_ab_c as f64 / in_c,
        p_a_given_not_c: count_a_nc as f64 / in_nc,
        p_b_given_not_c: count_b_nc as f64 / in_nc,
        p_ab_given_not_c: count_ab_nc as f64 / in_nc,
    };

    Ok(ForkReport {
        corr_holds: probs.p_ab - probs.p_a * probs.p_b > tol,
        screen_c: (probs.p_ab_given_c - probs.p_a_given_c * probs.p_b_given_c).abs() <= tol,
        screen_not_c: (probs.p_ab_given_not_c - probs.p_a_given_not_c * probs.p_b_given_not_c)
            .abs()
            <= tol,
        cause_a: probs.p_a_given_c - probs.p_a_given_not_c > tol,
        cause_b: probs.p_b_given_c - probs.p_b_given_not_c > tol,
        probs,
    })
}
