//! Tunable knobs of the descent: the factor-base level, sampling budgets,
//! exhaustive fallbacks and trap strictness. Every field has a default so a
//! policy file only needs to list what it changes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a JSON policy file.
pub const POLICY_ENV: &str = "ECDLP_POLICY";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Policy {
    /// Factor-base level: places of degree ≤ 2 over F_{q^{2^c}}.
    pub c: usize,
    /// Tower level `e` of the degree-4 splitting used when lifting a field
    /// element to a place of degree `2^{e+2}`. `None` means `⌈log₂ n⌉`.
    pub lift_level: Option<usize>,
    /// Maximum sampled points per elimination attempt. `None` means `64·q³`.
    pub max_trials: Option<u64>,
    /// Enumerate `E(k)` (3→2) or all `t₀` (4→3) when sampling fails and the
    /// search space has at most this many elements.
    pub exhaustive_bound: u64,
    /// Check the rank conditions at exceptional points and the leveled
    /// trap sets in addition to the point conditions.
    pub strict_traps: bool,
    /// Maximum number of elimination calls in one descent.
    pub descent_budget: u64,
    /// Candidate relations tried per elimination task before giving up.
    pub relation_attempts: u32,
    /// Lifts tried per field element before giving up.
    pub lift_attempts: u64,
    /// Candidate lifts evaluated per round of factor-base relation
    /// collection. Rounds are split across the worker threads.
    pub batch: usize,
    /// Largest field order for which logs are checked against the
    /// baby-step giant-step oracle.
    pub oracle_bound: u128,
}

impl Default for Policy {
    fn default() -> Policy {
        Policy {
            c: 2,
            lift_level: None,
            max_trials: None,
            exhaustive_bound: 1 << 16,
            strict_traps: false,
            descent_budget: 200_000,
            relation_attempts: 8,
            lift_attempts: 1 << 20,
            batch: 1024,
            oracle_bound: 1 << 22,
        }
    }
}

impl Policy {
    pub fn from_json(text: &str) -> Result<Policy> {
        serde_json::from_str(text).map_err(|e| Error::Params(format!("bad policy: {e}")))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Policy> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Params(format!("cannot read policy {}: {e}", path.display())))?;
        Policy::from_json(&text)
    }

    /// Policy from an explicit file, else from `ECDLP_POLICY`, else defaults.
    pub fn load(path: Option<&std::path::Path>) -> Result<Policy> {
        if let Some(p) = path {
            return Policy::from_file(p);
        }
        match std::env::var_os(POLICY_ENV) {
            Some(p) if !p.is_empty() => Policy::from_file(std::path::Path::new(&p)),
            _ => Ok(Policy::default()),
        }
    }

    pub fn trials(&self, q: u128) -> u64 {
        self.max_trials.unwrap_or_else(|| (64 * q * q * q).min(u64::MAX as u128) as u64)
    }

    pub fn lift_level_for(&self, n: usize) -> usize {
        self.lift_level.unwrap_or_else(|| ceil_log2(n))
    }
}

pub fn ceil_log2(n: usize) -> usize {
    let mut e = 0;
    while (1usize << e) < n {
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        let p = Policy::default();
        assert_eq!(p.c, 2);
        assert_eq!(p.trials(5), 8000);
        assert_eq!(p.lift_level_for(5), 3);
        assert_eq!(p.lift_level_for(8), 3);
        let q = Policy::from_json(r#"{"c": 1, "strict_traps": true}"#).unwrap();
        assert_eq!(q.c, 1);
        assert!(q.strict_traps);
        assert_eq!(q.batch, 1024);
        assert!(Policy::from_json(r#"{"nope": 1}"#).is_err());
    }
}
