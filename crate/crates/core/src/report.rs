//! Machine-parsable `key = value` reports.
//!
//! Floats are written with `{:?}`: the shortest representation that parses
//! back to the same `f64`, independent of locale. Keys are dotted paths.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::gfunction::{Delta2Report, Nabla2Report, SimonenkoIndices};
use crate::hypothesis::{GInvariants, HypothesisReport, Verdict};
use crate::mountain_pass::{CertReport, SolveReport};
use crate::orlicz_space::SpaceReport;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.entries.push((key.to_string(), format!("{value:?}")));
        self
    }

    pub fn nums(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let s = values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ");
        self.entries.push((key.to_string(), format!("[{s}]")));
        self
    }

    /// Appends `other` with every key prefixed by `prefix.`.
    pub fn nest(&mut self, prefix: &str, other: Report) -> &mut Self {
        for (k, v) in other.entries {
            self.entries.push((format!("{prefix}.{k}"), v));
        }
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self { entries })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub trait ToReport {
    fn to_report(&self) -> Report;
}

impl ToReport for SimonenkoIndices {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.num("p_G", self.p_g).num("q_G", self.q_g).num("q_G_inf", self.q_g_inf);
        for (i, s) in self.shells.iter().enumerate() {
            r.nums(&format!("shell.{i}"), &[s.radius, s.inf, s.sup]);
        }
        if let Some(w) = &self.warning {
            r.text("warning", w);
        }
        r
    }
}

impl ToReport for Delta2Report {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("holds", self.holds)
            .text("holds_globally", self.holds_globally)
            .num("K1", self.k1)
            .num("M1", self.m1)
            .text("sample_count", self.sample_count)
            .num("max_radius", self.max_radius);
        r
    }
}

impl ToReport for Nabla2Report {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("holds", self.holds)
            .text("holds_globally", self.holds_globally)
            .num("K2", self.k2)
            .num("M2", self.m2)
            .num("K2_max", self.k2_max)
            .text("sample_count", self.sample_count)
            .num("max_radius", self.max_radius);
        r
    }
}

impl ToReport for GInvariants {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        let mut idx = self.indices.to_report();
        idx.entries.retain(|(k, _)| !k.starts_with("shell."));
        r.nest("indices", idx)
            .nest("delta2", self.delta2.to_report())
            .nest("nabla2", self.nabla2.to_report())
            .num("embedding_constant", self.embedding_constant);
        r
    }
}

impl ToReport for SpaceReport {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.num("modular_u", self.modular_u)
            .num("modular_du", self.modular_du)
            .num("norm_u", self.norm_u)
            .num("norm_du", self.norm_du)
            .num("sobolev_norm", self.sobolev_norm)
            .num("joint_norm", self.joint_norm)
            .num("embedding_constant", self.embedding_constant)
            .num("rho", self.rho);
        r
    }
}

impl ToReport for Verdict {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("status", self.status).num("margin", self.margin);
        if let Some(w) = &self.witness {
            r.nums("witness", w);
        }
        for (k, v) in &self.details {
            r.num(k, *v);
        }
        for c in &self.caveats {
            r.text("caveat", c);
        }
        r
    }
}

impl ToReport for HypothesisReport {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("problem", &self.problem);
        for v in &self.assumptions {
            r.nest(&v.name, v.to_report());
        }
        r.nest("theorem1", self.theorem1.to_report())
            .nest("theorem2", self.theorem2.to_report())
            .num("R_Gstar_f", self.r_gstar_f)
            .num("integral_a", self.integral_a)
            .num("rho", self.rho)
            .num("rhs_theorem1", self.rhs_theorem1)
            .num("rhs_theorem2", self.rhs_theorem2)
            .text("theorem1_applicable", self.theorem1_applicable)
            .text("theorem2_applicable", self.theorem2_applicable)
            .num("embedding_constant", self.embedding_constant)
            .num("p_G", self.p_g)
            .num("q_G", self.q_g)
            .num("q_G_inf", self.q_g_inf)
            .text("delta2_global", self.delta2_global)
            .text("nabla2_global", self.nabla2_global);
        r
    }
}

impl ToReport for SolveReport {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.text("converged", self.converged)
            .num("j_value", self.j_value)
            .num("grad_norm", self.grad_norm)
            .num("el_residual", self.el_residual)
            .num("alpha_rim", self.alpha_rim);
        match self.analytic_rim_bound {
            Some(b) => r.num("analytic_rim_bound", b),
            None => r.text("analytic_rim_bound", "none"),
        };
        r.num("mp_level_c", self.mp_level_c)
            .num("endpoint_xi", self.endpoint_xi)
            .num("rho", self.rho)
            .text("iterations", self.iterations)
            .text("newton_iterations", self.newton_iterations)
            .text("stalled", self.stalled)
            .num("linf_bound_du", self.linf_bound_du)
            .text("m", self.u_star.m());
        for w in &self.warnings {
            r.text("warning", w);
        }
        r
    }
}

impl ToReport for CertReport {
    fn to_report(&self) -> Report {
        let mut r = Report::new();
        for (tag, b) in [("coarse", &self.coarse), ("fine", &self.fine)] {
            let mut s = Report::new();
            s.text("m", b.m).num("el_residual", b.el_residual).num("max_grad_g", b.max_grad_g).num("max_du", b.max_du);
            r.nest(tag, s);
        }
        r.num("rel_change_du", self.rel_change_du)
            .num("rel_change_grad_g", self.rel_change_grad_g)
            .text("growth_flag", self.growth_flag);
        r
    }
}

/// One CSV row of floats.
fn push_row(out: &mut String, cells: impl Iterator<Item = f64>) {
    let row: Vec<String> = cells.map(|v| format!("{v:?}")).collect();
    writeln!(out, "{}", row.join(",")).unwrap();
}

/// CSV with columns `t, u1..uN, du1..duN`; `du` is the forward slope of the
/// cell starting at each node.
pub fn trajectory_csv(u: &crate::orlicz_space::PeriodicGridFunction) -> String {
    let n = u.dim();
    let mut s = String::from("t");
    for k in 1..=n {
        write!(s, ",u{k}").unwrap();
    }
    for k in 1..=n {
        write!(s, ",du{k}").unwrap();
    }
    s.push('\n');
    let du = u.derivative();
    for ((t, row), drow) in u.times().iter().zip(u.rows()).zip(du.rows()) {
        push_row(&mut s, std::iter::once(*t).chain(row.iter().copied()).chain(drow.iter().copied()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz_space::PeriodicGridFunction;

    #[test]
    fn numbers_round_trip_exactly() {
        let xs = [0.1 + 0.2, 1e-300, -7.25e19, f64::INFINITY, 0.0, 1.0 / 3.0];
        let mut r = Report::new();
        for (i, x) in xs.iter().enumerate() {
            r.num(&format!("x{i}"), *x);
        }
        r.text("label", "a = b");
        let back = Report::parse(&r.to_string()).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(back.get_f64(&format!("x{i}")).unwrap(), *x);
        }
        assert_eq!(back.get("label"), Some("a = b"));
        assert_eq!(back, r);
    }

    #[test]
    fn nan_survives() {
        let mut r = Report::new();
        r.num("m", f64::NAN);
        assert!(Report::parse(&r.to_string()).unwrap().get_f64("m").unwrap().is_nan());
    }

    #[test]
    fn malformed_line_is_rejected() {
        assert!(Report::parse("a = 1\nnot a pair\n").is_err());
    }

    #[test]
    fn trajectory_is_readable_as_grid_function() {
        let u = PeriodicGridFunction::from_fn(1.5, 2, 16, |t, o| {
            o[0] = t.sin() / 3.0;
            o[1] = (2.0 * t).cos();
        })
        .unwrap();
        let csv = trajectory_csv(&u);
        assert!(csv.starts_with("t,u1,u2,du1,du2\n"));
        assert_eq!(PeriodicGridFunction::from_csv(&csv).unwrap(), u);
    }
}
