//! Experiment files: TOML with `[problem]`, `[forcing]`, `[grid]`, `[solver]`
//! and `[check]` sections. Every section and key is optional.
//!
//! ```toml
//! [problem]
//! name = "example2"
//! T = 1.0
//! g = "power:2"
//! f_pot = "power:4"
//! lambda = 2.0
//!
//! [forcing]
//! cos = [0.01]
//! omega = 3.14159
//!
//! [grid]
//! m = 256
//!
//! [solver]
//! path_points = 16
//! seed = 7
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{example1, example2, plaplacian_test_on, Forcing, ProblemSpec, PROBLEM_NAMES};
use crate::gfunction::GFunctionSpec;
use crate::hypothesis::HypothesisOpts;
use crate::mountain_pass::MountainPassConfig;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    pub forcing: Option<ForcingSection>,
    pub grid: GridSection,
    pub solver: MountainPassConfig,
    pub check: CheckSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    pub name: String,
    #[serde(rename = "T")]
    pub half_period: Option<f64>,
    /// `G` spec, `example2` only.
    pub g: Option<String>,
    /// `F` spec, `example2` only.
    pub f_pot: Option<String>,
    /// `example2` only.
    pub lambda: Option<f64>,
    pub b: Option<f64>,
    pub rho0: Option<f64>,
    pub b1: Option<f64>,
    pub p: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            name: "plaplacian_test".into(),
            half_period: None,
            g: None,
            f_pot: None,
            lambda: None,
            b: None,
            rho0: None,
            b1: None,
            p: None,
            mu: None,
            nu: None,
        }
    }
}

/// `f(t) = scale * (constant + cos * cos(omega t) + sin * sin(omega t))`;
/// omitted vectors are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcingSection {
    pub constant: Option<Vec<f64>>,
    pub cos: Option<Vec<f64>>,
    pub sin: Option<Vec<f64>>,
    pub omega: f64,
    pub scale: f64,
}

impl Default for ForcingSection {
    fn default() -> Self {
        Self { constant: None, cos: None, sin: None, omega: 1.0, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Overrides `solver.m` and the tabulation grid of the checks.
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSection {
    pub tol: Option<f64>,
    pub strict: Option<f64>,
    pub time_samples: Option<usize>,
    pub directions: Option<usize>,
    pub radii: Option<usize>,
    pub seed: Option<u64>,
}

fn field_err(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
}

impl ForcingSection {
    pub fn build(&self, dim: usize) -> Result<Forcing> {
        let take = |name: &str, v: &Option<Vec<f64>>| -> Result<Vec<f64>> {
            match v {
                None => Ok(vec![0.0; dim]),
                Some(v) if v.len() == dim => Ok(v.clone()),
                Some(v) => Err(field_err(
                    &format!("forcing.{name}"),
                    format!("has {} entries, problem dimension is {dim}", v.len()),
                )),
            }
        };
        for (name, v) in [("omega", self.omega), ("scale", self.scale)] {
            if !v.is_finite() {
                return Err(field_err(&format!("forcing.{name}"), "must be finite"));
            }
        }
        Ok(Forcing {
            constant: take("constant", &self.constant)?,
            cos: take("cos", &self.cos)?,
            sin: take("sin", &self.sin)?,
            omega: self.omega,
            scale: self.scale,
        })
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.grid.m {
            if m < 4 {
                return Err(field_err("grid.m", "must be at least 4"));
            }
        }
        self.solver_config().validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => {
                Error::InvalidParameter { name: format!("solver.{name}"), reason }
            }
            other => other,
        })
    }

    /// `[solver]` with `grid.m` applied.
    pub fn solver_config(&self) -> MountainPassConfig {
        let mut cfg = self.solver.clone();
        if let Some(m) = self.grid.m {
            cfg.m = m;
        }
        cfg
    }

    /// Defaults overlaid with `[check]` and `grid.m`.
    pub fn hypothesis_opts(&self) -> HypothesisOpts {
        let mut o = HypothesisOpts::default();
        let c = &self.check;
        if let Some(v) = c.tol {
            o.tol = v;
        }
        if let Some(v) = c.strict {
            o.strict = v;
        }
        if let Some(v) = c.time_samples {
            o.time_samples = v;
        }
        if let Some(v) = c.directions {
            o.plan.directions = v;
        }
        if let Some(v) = c.radii {
            o.plan.radii = v;
        }
        if let Some(v) = c.seed {
            o.plan.seed = v;
        }
        if let Some(m) = self.grid.m {
            o.m = m;
        }
        o
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        let ps = &self.problem;
        let only_example2 = |name: &str, set: bool| {
            if set && ps.name != "example2" {
                Err(field_err(&format!("problem.{name}"), format!("only applies to example2, not {}", ps.name)))
            } else {
                Ok(())
            }
        };
        only_example2("g", ps.g.is_some())?;
        only_example2("f_pot", ps.f_pot.is_some())?;
        only_example2("lambda", ps.lambda.is_some())?;
        if let Some(t) = ps.half_period {
            if !(t > 0.0 && t.is_finite()) {
                return Err(field_err("problem.T", format!("must be positive, got {t}")));
            }
        }
        let mut prob = match ps.name.as_str() {
            "example1" => example1(),
            "plaplacian_test" => plaplacian_test_on(ps.half_period.unwrap_or(1.0)),
            "example2" => {
                let g = GFunctionSpec::parse(ps.g.as_deref().unwrap_or("power:2"), 1)?;
                let dim = g.dim();
                let f_pot = GFunctionSpec::parse(ps.f_pot.as_deref().unwrap_or("power:4"), dim)?;
                example2(g, f_pot, ps.lambda.unwrap_or(1.0))?
            }
            other => return Err(Error::UnknownProblem { name: other.to_string(), known: PROBLEM_NAMES.join(", ") }),
        };
        if let Some(t) = ps.half_period {
            prob.half_period = t;
        }
        for (slot, v) in [
            (&mut prob.b, ps.b),
            (&mut prob.rho0, ps.rho0),
            (&mut prob.b1, ps.b1),
            (&mut prob.p, ps.p),
            (&mut prob.mu, ps.mu),
            (&mut prob.nu, ps.nu),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(f) = &self.forcing {
            prob.f = f.build(prob.dim())?;
        }
        prob.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => {
                Error::InvalidParameter { name: format!("problem.{name}"), reason }
            }
            other => other,
        })?;
        Ok(prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_problem() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let p = cfg.build_problem().unwrap();
        assert_eq!(p.name, "plaplacian_test");
        assert_eq!(cfg.solver_config(), MountainPassConfig::default());
    }

    #[test]
    fn sections_override_defaults() {
        let cfg = RunConfig::from_toml_str(
            r#"
            [problem]
            name = "example2"
            T = 2.0
            lambda = 4.0
            mu = 4.5
            [forcing]
            cos = [0.25]
            scale = 2.0
            [grid]
            m = 128
            [solver]
            path_points = 12
            seed = 9
            [check]
            tol = 1e-6
            "#,
        )
        .unwrap();
        let p = cfg.build_problem().unwrap();
        assert_eq!(p.half_period, 2.0);
        assert_eq!(p.mu, 4.5);
        assert!((p.rho0 - 0.25).abs() < 1e-15);
        let mut f = [0.0];
        p.f.eval(0.0, &mut f);
        assert_eq!(f[0], 0.5);
        let s = cfg.solver_config();
        assert_eq!((s.m, s.path_points, s.seed), (128, 12, 9));
        assert_eq!(cfg.hypothesis_opts().tol, 1e-6);
        assert_eq!(cfg.hypothesis_opts().m, 128);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RunConfig::from_toml_str("[solver]\npath_pointz = 3\n").unwrap_err().to_string();
        assert!(err.contains("path_pointz"), "{err}");
    }

    #[test]
    fn wrong_type_is_named() {
        let err = RunConfig::from_toml_str("[grid]\nm = \"many\"\n").unwrap_err().to_string();
        assert!(err.contains("m = \"many\""), "{err}");
    }

    #[test]
    fn invalid_values_are_named() {
        let err = RunConfig::from_toml_str("[solver]\npath_points = 3\n").unwrap_err().to_string();
        assert!(err.contains("solver.path_points"), "{err}");
        let cfg = RunConfig::from_toml_str("[problem]\nname = \"example1\"\nb = 0.5\n").unwrap();
        let err = cfg.build_problem().unwrap_err().to_string();
        assert!(err.contains("problem.b"), "{err}");
        let cfg = RunConfig::from_toml_str("[problem]\nname = \"example1\"\n[forcing]\ncos = [1.0]\n").unwrap();
        let err = cfg.build_problem().unwrap_err().to_string();
        assert!(err.contains("forcing.cos"), "{err}");
        let cfg = RunConfig::from_toml_str("[problem]\nname = \"example1\"\nlambda = 2.0\n").unwrap();
        assert!(cfg.build_problem().unwrap_err().to_string().contains("problem.lambda"));
    }

    #[test]
    fn unknown_problem_lists_registered_names() {
        let cfg = RunConfig::from_toml_str("[problem]\nname = \"example3\"\n").unwrap();
        let err = cfg.build_problem().unwrap_err().to_string();
        for n in PROBLEM_NAMES {
            assert!(err.contains(n), "{err}");
        }
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.problem.name = "example1".into();
        cfg.forcing = Some(ForcingSection { cos: Some(vec![1e-3, 0.0]), ..Default::default() });
        cfg.grid.m = Some(64);
        cfg.solver.seed = 42;
        let back = RunConfig::from_toml_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }
}
