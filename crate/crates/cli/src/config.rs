//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; unknown
//! and repeated keys are rejected. List values are comma separated and may be
//! empty (`seeds =`).

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use signchange::continuation::ContinuationParams;
use signchange::riesz::{GramConfig, WeightMode};
use signchange::MediumConfig;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub medium: MediumConfig,
    /// Largest element of the base mesh.
    pub h: f64,
    pub refine_radius: f64,
    pub refine_levels: usize,
    pub continuation: ContinuationParams,
    /// Branch seeds for `bifurcate`.
    pub seeds: Vec<i64>,
    /// Index range for `spectrum`.
    pub j_min: i64,
    pub j_max: i64,
    pub profile_points: usize,
    /// Dump coefficient vectors of every branch point next to the branch CSVs.
    pub dump_vectors: bool,
    /// `σ₋` values swept by `riesz`; the other coefficients come from `medium`.
    pub riesz_sigmas: Vec<f64>,
    pub lambda_start: f64,
    pub dim_cap: usize,
    pub gram: GramConfig,
    pub weyl_lambda_max: f64,
    pub weyl_points_per_decade: usize,
    /// Mesh size for the dense coercivity check.
    pub coercivity_h: f64,
    pub k_count: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            medium: MediumConfig::default(),
            h: 1.0 / 512.0,
            refine_radius: 0.1,
            refine_levels: 5,
            continuation: ContinuationParams::default(),
            seeds: vec![-2, 0, 5],
            j_min: -5,
            j_max: 5,
            profile_points: 401,
            dump_vectors: false,
            riesz_sigmas: vec![-2.0, -1.0, -0.5, -0.25],
            lambda_start: 10.0,
            dim_cap: 800,
            gram: GramConfig::default(),
            weyl_lambda_max: 1e4,
            weyl_points_per_decade: 10,
            coercivity_h: 1.0 / 64.0,
            k_count: 12,
            out: PathBuf::from("out"),
        }
    }
}

fn value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Config(format!("line {line}: cannot parse {key} = {raw:?}")))
}

fn list<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| value(key, s, line))
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        let mut weight_mode = "one_plus_abs".to_string();
        let mut lambda_ref = None;
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, raw) = content
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`, got {content:?}")))?;
            let (key, raw) = (key.trim(), raw.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {line}: duplicate key {key}")));
            }
            let m = &mut cfg.medium;
            let c = &mut cfg.continuation;
            match key {
                "a_minus" => m.a_minus = value(key, raw, line)?,
                "a_plus" => m.a_plus = value(key, raw, line)?,
                "sigma_plus" => m.sigma_plus = value(key, raw, line)?,
                "sigma_minus" => m.sigma_minus = value(key, raw, line)?,
                "c_plus" => m.c_plus = value(key, raw, line)?,
                "c_minus" => m.c_minus = value(key, raw, line)?,
                "kappa" => m.kappa = value(key, raw, line)?,
                "h" => cfg.h = value(key, raw, line)?,
                "refine_radius" => cfg.refine_radius = value(key, raw, line)?,
                "refine_levels" => cfg.refine_levels = value(key, raw, line)?,
                "steps" => c.steps = value(key, raw, line)?,
                "ds" => c.ds = value(key, raw, line)?,
                "newton_tol" => c.newton_tol = value(key, raw, line)?,
                "max_newton" => c.max_newton = value(key, raw, line)?,
                "seed_amplitude" => c.seed_amplitude = value(key, raw, line)?,
                "seeds" => cfg.seeds = list(key, raw, line)?,
                "j_min" => cfg.j_min = value(key, raw, line)?,
                "j_max" => cfg.j_max = value(key, raw, line)?,
                "profile_points" => cfg.profile_points = value(key, raw, line)?,
                "dump_vectors" => cfg.dump_vectors = value(key, raw, line)?,
                "riesz_sigmas" => cfg.riesz_sigmas = list(key, raw, line)?,
                "lambda_start" => cfg.lambda_start = value(key, raw, line)?,
                "dim_cap" => cfg.dim_cap = value(key, raw, line)?,
                "gram_weight" => weight_mode = raw.to_string(),
                "lambda_ref" => lambda_ref = Some(value(key, raw, line)?),
                "weyl_lambda_max" => cfg.weyl_lambda_max = value(key, raw, line)?,
                "weyl_points_per_decade" => cfg.weyl_points_per_decade = value(key, raw, line)?,
                "coercivity_h" => cfg.coercivity_h = value(key, raw, line)?,
                "k_count" => cfg.k_count = value(key, raw, line)?,
                "out" => cfg.out = PathBuf::from(raw),
                _ => return Err(CliError::Config(format!("line {line}: unknown key {key}"))),
            }
        }
        cfg.gram.weight_mode = match (weight_mode.as_str(), lambda_ref) {
            ("one_plus_abs", None) => WeightMode::OnePlusAbs,
            ("one_plus_abs", Some(_)) => return Err(CliError::Config("lambda_ref requires gram_weight = shifted".into())),
            ("shifted", Some(lambda_ref)) => WeightMode::Shifted { lambda_ref },
            ("shifted", None) => return Err(CliError::Config("gram_weight = shifted requires lambda_ref".into())),
            (other, _) => return Err(CliError::Config(format!("unknown gram_weight {other:?}"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Re-checks the physical and numerical invariants.
    pub fn validate(&self) -> Result<(), CliError> {
        self.medium.validate()?;
        self.continuation.validate()?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("h", self.h)?;
        positive("refine_radius", self.refine_radius)?;
        positive("coercivity_h", self.coercivity_h)?;
        if self.j_min > self.j_max {
            return Err(CliError::Config(format!("j_min = {} exceeds j_max = {}", self.j_min, self.j_max)));
        }
        if self.profile_points < 3 {
            return Err(CliError::Config("profile_points must be at least 3".into()));
        }
        for &s in &self.riesz_sigmas {
            MediumConfig { sigma_minus: s, ..self.medium }.validate()?;
        }
        if !(self.lambda_start >= 1.0 && self.lambda_start.is_finite()) {
            return Err(CliError::Config(format!("lambda_start must be ≥ 1, got {}", self.lambda_start)));
        }
        if self.dim_cap == 0 {
            return Err(CliError::Config("dim_cap must be positive".into()));
        }
        if !(self.weyl_lambda_max >= 1.0 && self.weyl_lambda_max.is_finite()) {
            return Err(CliError::Config(format!("weyl_lambda_max must be ≥ 1, got {}", self.weyl_lambda_max)));
        }
        if self.weyl_points_per_decade == 0 || self.k_count == 0 {
            return Err(CliError::Config("weyl_points_per_decade and k_count must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        assert_eq!(RunConfig::parse("# only a comment\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_all_kinds_of_values() {
        let text = "sigma_minus = -1.005  # critical contrast\nseeds = -2, 0,5\nsteps=7\ndump_vectors = true\n\
                    riesz_sigmas = -1,-0.5\ngram_weight = shifted\nlambda_ref = 0.5\nout = results/a";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.medium.sigma_minus, -1.005);
        assert_eq!(cfg.seeds, vec![-2, 0, 5]);
        assert_eq!(cfg.continuation.steps, 7);
        assert!(cfg.dump_vectors);
        assert_eq!(cfg.riesz_sigmas, vec![-1.0, -0.5]);
        assert_eq!(cfg.gram.weight_mode, WeightMode::Shifted { lambda_ref: 0.5 });
        assert_eq!(cfg.out, PathBuf::from("results/a"));
    }

    #[test]
    fn empty_list_is_allowed() {
        assert!(RunConfig::parse("seeds =").unwrap().seeds.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "colour = red",
            "h = 0.1\nh = 0.2",
            "sigma_minus = 0.5",
            "a_minus = 1",
            "h = -1",
            "steps = many",
            "no equals sign",
            "j_min = 3\nj_max = 1",
            "riesz_sigmas = -1, 2",
            "gram_weight = shifted",
            "lambda_ref = 1",
            "ds = 0",
        ] {
            assert!(matches!(RunConfig::parse(text), Err(CliError::Config(_))), "{text:?}");
        }
    }
}
