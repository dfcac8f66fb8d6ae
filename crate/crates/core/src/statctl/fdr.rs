use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One hypothesis in the grid, keyed by (model, layer, metric).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvalueEntry {
    pub model: String,
    pub layer: String,
    pub metric: String,
    pub p: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PvalueGrid {
    entries: Vec<PvalueEntry>,
}

impl PvalueGrid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        model: impl Into<String>,
        layer: impl Into<String>,
        metric: impl Into<String>,
        p: f64,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p-value {p} outside [0, 1]")));
        }
        let entry = PvalueEntry {
            model: model.into(),
            layer: layer.into(),
            metric: metric.into(),
            p,
        };
        if self.entries.iter().any(|e| key(e) == key(&entry)) {
            return Err(Error::invalid(format!(
                "duplicate grid key ({}, {}, {})",
                entry.model, entry.layer, entry.metric
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    /// Grid over anonymous hypotheses `("", i, "")`, handy for plain p-vectors.
    pub fn from_pvalues(ps: &[f64]) -> Result<Self> {
        let mut grid = Self::new();
        for (i, &p) in ps.iter().enumerate() {
            grid.push("", format!("{i:08}"), "", p)?;
        }
        Ok(grid)
    }

    pub fn entries(&self) -> &[PvalueEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn key(e: &PvalueEntry) -> (&str, &str, &str) {
    (&e.model, &e.layer, &e.metric)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdrEntry {
    pub q_value: f64,
    pub rejected: bool,
}

/// Per-entry q-values and decisions, in the grid's original order.
#[derive(Debug, Clone, PartialEq)]
pub struct FdrOutcome {
    pub entries: Vec<FdrEntry>,
    /// Number of rejected hypotheses (the step-up cutoff index).
    pub k: usize,
}

impl FdrOutcome {
    pub fn q_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.q_value).collect()
    }

    pub fn rejected(&self) -> Vec<bool> {
        self.entries.iter().map(|e| e.rejected).collect()
    }
}

/// Benjamini-Hochberg step-up at level `q` with step-up q-values.
///
/// Ties in `p` are ordered by the (model, layer, metric) key.
pub fn bh_fdr(grid: &PvalueGrid, q: f64) -> Result<FdrOutcome> {
    let m = grid.len();
    if m == 0 {
        return Err(Error::invalid("empty p-value grid"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("FDR level {q} outside (0, 1)")));
    }
    let e = grid.entries();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        e[a].p
            .partial_cmp(&e[b].p)
            .unwrap_or(Ordering::Equal)
            .then_with(|| key(&e[a]).cmp(&key(&e[b])))
    });

    let mf = m as f64;
    let k = (1..=m)
        .rev()
        .find(|&i| e[order[i - 1]].p <= i as f64 / mf * q)
        .unwrap_or(0);

    let mut qs = vec![0.0; m];
    let mut running = 1.0f64;
    for rank in (1..=m).rev() {
        let idx = order[rank - 1];
        running = running.min(mf / rank as f64 * e[idx].p);
        qs[idx] = running.min(1.0);
    }
    let rejected: HashSet<usize> = order[..k].iter().copied().collect();
    let entries = (0..m)
        .map(|i| FdrEntry {
            q_value: qs[i],
            rejected: rejected.contains(&i),
        })
        .collect();
    Ok(FdrOutcome { entries, k })
}
