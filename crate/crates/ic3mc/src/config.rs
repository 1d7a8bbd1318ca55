//! Strategy and engine configuration.

use thiserror::Error;

/// Which cube-generalization strategy the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Standard,
    Ctg,
    Exctg,
    Dynamic,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Standard => "standard",
            StrategyKind::Ctg => "ctg",
            StrategyKind::Exctg => "exctg",
            StrategyKind::Dynamic => "dynamic",
        }
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(StrategyKind::Standard),
            "ctg" => Ok(StrategyKind::Ctg),
            "exctg" => Ok(StrategyKind::Exctg),
            "dynamic" => Ok(StrategyKind::Dynamic),
            other => Err(format!(
                "unknown strategy '{other}' (expected standard|ctg|exctg|dynamic)"
            )),
        }
    }
}

/// Order in which generalization attempts literal drops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DropOrder {
    /// Ascending variable id over a snapshot of the cube taken at entry,
    /// skipping literals a successful drop already removed (the default).
    #[default]
    Asc,
    /// The same snapshot, reversed.
    Desc,
    /// Most-active variable first (activity = occurrences in added lemmas),
    /// ties broken by ascending variable id.
    Act,
}

impl std::str::FromStr for DropOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "asc" => Ok(DropOrder::Asc),
            "desc" => Ok(DropOrder::Desc),
            "act" => Ok(DropOrder::Act),
            other => Err(format!("unknown drop order '{other}' (expected asc|desc|act)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("ctg_max must be >= 1 for the {0} strategy")]
    CtgMaxZero(&'static str),
    #[error("exctg_limit must be >= 1")]
    ExctgLimitZero,
    #[error("ctg_th ({ctg_th}) must be < exctg_th ({exctg_th}) for the dynamic strategy")]
    ThresholdOrder { ctg_th: u32, exctg_th: u32 },
}

/// Generalization strategy plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Maximum recursion level of nested generalization (CTG_LV).
    pub ctg_lv: u32,
    /// Maximum consecutive blocked counterexamples-to-generalization before
    /// falling back to intersection (CTG_MAX).
    pub ctg_max: u32,
    /// Shared blocking-attempt budget per predecessor attempt (EXCTG_LIMIT).
    pub exctg_limit: u32,
    /// Activity threshold below which the dynamic strategy stays standard.
    pub ctg_th: u32,
    /// Activity threshold at which the dynamic strategy switches to EXCTG.
    pub exctg_th: u32,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        StrategyConfig {
            kind,
            ctg_lv: 1,
            ctg_max: 3,
            exctg_limit: 5,
            ctg_th: 10,
            exctg_th: 40,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.kind != StrategyKind::Standard && self.ctg_max == 0 {
            return Err(ConfigError::CtgMaxZero(self.kind.name()));
        }
        if self.exctg_limit == 0 {
            return Err(ConfigError::ExctgLimitZero);
        }
        if self.kind == StrategyKind::Dynamic && self.ctg_th >= self.exctg_th {
            return Err(ConfigError::ThresholdOrder {
                ctg_th: self.ctg_th,
                exctg_th: self.exctg_th,
            });
        }
        Ok(())
    }
}

/// Run-level knobs that are orthogonal to the strategy.
#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// Solver seed; 0 keeps the backend default. Runs are deterministic for
    /// any fixed value.
    pub seed: u64,
    /// Re-check the frame invariants (F_0 = I, monotone containment,
    /// consecution) after every major iteration; failures abort the run.
    pub audit_frames: bool,
    /// Literal drop order for generalization.
    pub drop_order: DropOrder,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            seed: 0,
            audit_frames: false,
            drop_order: DropOrder::Asc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_parameters() {
        let c = StrategyConfig::new(StrategyKind::Dynamic);
        assert_eq!(c.ctg_max, 3);
        assert_eq!(c.ctg_lv, 1);
        assert_eq!(c.exctg_limit, 5);
        assert_eq!(c.ctg_th, 10);
        assert_eq!(c.exctg_th, 40);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = StrategyConfig::new(StrategyKind::Ctg);
        c.ctg_max = 0;
        assert_eq!(c.validate().unwrap_err(), ConfigError::CtgMaxZero("ctg"));
        let mut c = StrategyConfig::new(StrategyKind::Standard);
        c.exctg_limit = 0;
        assert_eq!(c.validate().unwrap_err(), ConfigError::ExctgLimitZero);
        let mut c = StrategyConfig::new(StrategyKind::Dynamic);
        c.ctg_th = 40;
        assert!(matches!(
            c.validate().unwrap_err(),
            ConfigError::ThresholdOrder { .. }
        ));
    }

    #[test]
    fn strategy_names_round_trip() {
        for kind in [
            StrategyKind::Standard,
            StrategyKind::Ctg,
            StrategyKind::Exctg,
            StrategyKind::Dynamic,
        ] {
            assert_eq!(kind.name().parse::<StrategyKind>().unwrap(), kind);
        }
        assert!("mic".parse::<StrategyKind>().is_err());
    }
}
