//! Line-oriented configuration: `key = value` entries under `[section]`
//! headers, `#` comments, unknown keys rejected by name.
//!
//! ```text
//! [run]
//! grid_n = 16
//! dt = 1e-3
//! t_end = 1.0
//! sample_stride = 10
//! seed = 42
//! dealias = true
//! output_dir = out
//! # checks = energy-identity,decay-4.20
//!
//! [physics]
//! mu = 1.0
//! nu = 100.0
//! nu_infinity_proxy = false
//!
//! [scenario]
//! kind = taylor-green        # or random-band | paper-scaling
//! band_lo = 1
//! band_hi = 2
//! amplitude = 1.0
//! gamma = 0.1
//!
//! [estimates]
//! p = 4.0
//! beta = 0.4
//! horizon_t = 10.0
//! c1 = 1.0
//! c2 = 1.0
//! c3 = 1.0
//! c4 = 1.0
//! c_generic = 1.0
//! c_poincare = 1.0
//! c0_embed = 1.0
//! gamma_star = 0.1
//! v0_l2 = 0.2
//! v0_l6 = 0.2
//! vt0_l2 = 0.2
//! x0 = 0.02
//! b0 = 0.02
//! # phi0_lp defaults to (c3 + c4) / (2 nu^kappa)
//! # t_freeze defaults to nu^(1 - kappa)
//! phi1_exponent = p-1        # or p-2
//! lower_bound_l2_variant = false
//! ```

use std::collections::BTreeMap;

use crate::auditor::validate_check_ids;
use crate::dynamics::{PhysicalParams, RunSpec, Scenario};
use crate::error::{Error, Result};
use crate::estimates::{EstimateParams, MixedExponent};
use crate::grid::Grid;

#[derive(Debug, Clone)]
pub struct Config {
    pub grid_n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub seed: u64,
    pub dealias: bool,
    pub output_dir: String,
    /// Audit identifiers to run; None = the full battery.
    pub checks: Option<Vec<String>>,
    pub params: PhysicalParams,
    pub nu_infinity_proxy: bool,
    pub scenario_kind: String,
    pub band_lo: usize,
    pub band_hi: usize,
    pub amplitude: f64,
    pub gamma: f64,
    pub estimates: EstimateParams,
    /// |φ(0)|_p as given in the file; None keeps the (2.25) midpoint default
    /// in sync with ν overrides.
    pub phi0_lp_override: Option<f64>,
    /// β as given in the file; None keeps the default (1 − κ)/1, half the
    /// admissible window, in sync with p.
    pub beta_override: Option<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            grid_n: 16,
            dt: 1e-3,
            t_end: 1.0,
            sample_stride: 10,
            seed: 42,
            dealias: true,
            output_dir: "out".into(),
            checks: None,
            params: PhysicalParams { mu: 1.0, nu: 100.0 },
            nu_infinity_proxy: false,
            scenario_kind: "taylor-green".into(),
            band_lo: 1,
            band_hi: 2,
            amplitude: 1.0,
            gamma: 0.1,
            estimates: EstimateParams::default(),
            phi0_lp_override: None,
            beta_override: None,
        }
    }
}

fn cfg_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

struct RawConfig {
    entries: BTreeMap<String, String>,
    consumed: std::collections::BTreeSet<String>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (line_no, raw_line) in text.lines().enumerate() {
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before,
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(cfg_err(
                        "section",
                        format!("malformed section header on line {}", line_no + 1),
                    ));
                }
                section = line[1..line.len() - 1].trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                cfg_err(
                    "line",
                    format!("expected `key = value` on line {}: `{line}`", line_no + 1),
                )
            })?;
            let full = if section.is_empty() {
                key.trim().to_string()
            } else {
                format!("{section}.{}", key.trim())
            };
            if entries
                .insert(full.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(cfg_err(&full, "duplicate key"));
            }
        }
        Ok(RawConfig {
            entries,
            consumed: Default::default(),
        })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.consumed.insert(key.to_string());
        self.entries.get(key).cloned()
    }

    fn parse_with<T>(&mut self, key: &str, f: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => f(&raw)
                .map(Some)
                .ok_or_else(|| cfg_err(key, format!("cannot parse `{raw}`"))),
        }
    }

    fn f64_opt(&mut self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, |s| s.parse::<f64>().ok())
    }

    fn usize_opt(&mut self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, |s| s.parse::<usize>().ok())
    }

    fn u64_opt(&mut self, key: &str) -> Result<Option<u64>> {
        self.parse_with(key, |s| s.parse::<u64>().ok())
    }

    fn bool_opt(&mut self, key: &str) -> Result<Option<bool>> {
        self.parse_with(key, |s| match s {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        })
    }

    fn unknown_keys(&self) -> Vec<String> {
        self.entries
            .keys()
            .filter(|k| !self.consumed.contains(*k))
            .cloned()
            .collect()
    }
}

/// Parse and fully validate a configuration, filling documented defaults.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut raw = RawConfig::parse(text)?;
    let mut cfg = Config::default();

    if let Some(v) = raw.usize_opt("run.grid_n")? {
        cfg.grid_n = v;
    }
    if let Some(v) = raw.f64_opt("run.dt")? {
        cfg.dt = v;
    }
    if let Some(v) = raw.f64_opt("run.t_end")? {
        cfg.t_end = v;
    }
    if let Some(v) = raw.usize_opt("run.sample_stride")? {
        cfg.sample_stride = v;
    }
    if let Some(v) = raw.u64_opt("run.seed")? {
        cfg.seed = v;
    }
    if let Some(v) = raw.bool_opt("run.dealias")? {
        cfg.dealias = v;
    }
    if let Some(v) = raw.take("run.output_dir") {
        cfg.output_dir = v;
    }
    if let Some(v) = raw.take("run.checks") {
        cfg.checks = Some(
            v.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        );
    }

    if let Some(v) = raw.f64_opt("physics.mu")? {
        cfg.params.mu = v;
    }
    if let Some(v) = raw.f64_opt("physics.nu")? {
        cfg.params.nu = v;
    }
    if let Some(v) = raw.bool_opt("physics.nu_infinity_proxy")? {
        cfg.nu_infinity_proxy = v;
    }

    if let Some(v) = raw.take("scenario.kind") {
        cfg.scenario_kind = v;
    }
    if let Some(v) = raw.usize_opt("scenario.band_lo")? {
        cfg.band_lo = v;
    }
    if let Some(v) = raw.usize_opt("scenario.band_hi")? {
        cfg.band_hi = v;
    }
    if let Some(v) = raw.f64_opt("scenario.amplitude")? {
        cfg.amplitude = v;
    }
    if let Some(v) = raw.f64_opt("scenario.gamma")? {
        cfg.gamma = v;
    }

    macro_rules! est_f64 {
        ($key:literal, $field:ident) => {
            if let Some(v) = raw.f64_opt($key)? {
                cfg.estimates.$field = v;
            }
        };
    }
    est_f64!("estimates.p", p);
    cfg.beta_override = raw.f64_opt("estimates.beta")?;
    est_f64!("estimates.horizon_t", horizon);
    est_f64!("estimates.c1", c1);
    est_f64!("estimates.c2", c2);
    est_f64!("estimates.c3", c3);
    est_f64!("estimates.c4", c4);
    est_f64!("estimates.c_generic", c_generic);
    est_f64!("estimates.c_poincare", c_poincare);
    est_f64!("estimates.c0_embed", c0_embed);
    est_f64!("estimates.gamma_star", gamma_star);
    est_f64!("estimates.v0_l2", v0_l2);
    est_f64!("estimates.v0_l6", v0_l6);
    est_f64!("estimates.vt0_l2", vt0_l2);
    est_f64!("estimates.x0", x0);
    est_f64!("estimates.b0", b0);
    cfg.phi0_lp_override = raw.f64_opt("estimates.phi0_lp")?;
    if let Some(v) = raw.f64_opt("estimates.t_freeze")? {
        cfg.estimates.t_freeze = Some(v);
    }
    if let Some(v) = raw.take("estimates.phi1_exponent") {
        cfg.estimates.phi1_exponent = match v.as_str() {
            "p-1" => MixedExponent::POverPMinus1,
            "p-2" => MixedExponent::POverPMinus2,
            other => {
                return Err(cfg_err(
                    "estimates.phi1_exponent",
                    format!("expected `p-1` or `p-2`, got `{other}`"),
                ))
            }
        };
    }
    if let Some(v) = raw.bool_opt("estimates.lower_bound_l2_variant")? {
        cfg.estimates.lower_bound_l2_variant = v;
    }

    let unknown = raw.unknown_keys();
    if !unknown.is_empty() {
        return Err(cfg_err(&unknown[0], "unknown key"));
    }

    finalize(&mut cfg)?;
    Ok(cfg)
}

/// Resolve derived defaults and validate every invariant.
pub fn finalize(cfg: &mut Config) -> Result<()> {
    Grid::new(cfg.grid_n)?;
    if !(cfg.dt > 0.0) {
        return Err(cfg_err("dt", format!("must be positive, got {}", cfg.dt)));
    }
    if !(cfg.t_end > 0.0) {
        return Err(cfg_err("t_end", format!("must be positive, got {}", cfg.t_end)));
    }
    if cfg.sample_stride == 0 {
        return Err(cfg_err("sample_stride", "must be at least 1"));
    }
    cfg.params.validate()?;
    if !(cfg.gamma >= 0.0) {
        return Err(cfg_err("gamma", format!("must be nonnegative, got {}", cfg.gamma)));
    }
    if cfg.band_lo == 0 || cfg.band_lo > cfg.band_hi {
        return Err(cfg_err(
            "band_lo",
            format!("need 1 <= band_lo <= band_hi, got [{}, {}]", cfg.band_lo, cfg.band_hi),
        ));
    }
    match cfg.scenario_kind.as_str() {
        "taylor-green" | "random-band" | "paper-scaling" => {}
        other => {
            return Err(cfg_err(
                "scenario.kind",
                format!("expected taylor-green | random-band | paper-scaling, got `{other}`"),
            ))
        }
    }
    if let Some(checks) = &cfg.checks {
        validate_check_ids(checks)?;
    }

    // sync the chain inputs with the physical coefficients, then resolve
    // the scaling-dependent default of |phi(0)|_p
    cfg.estimates.mu = cfg.params.mu;
    cfg.estimates.nu = cfg.params.nu;
    cfg.estimates.gamma = cfg.gamma;
    cfg.estimates.phi0_lp = match cfg.phi0_lp_override {
        Some(v) => v,
        None => cfg.estimates.default_phi0_lp(),
    };
    cfg.estimates.beta = match cfg.beta_override {
        Some(v) => v,
        None => 1.0 - cfg.estimates.kappa(),
    };
    cfg.estimates.validate()?;
    Ok(())
}

impl Config {
    pub fn scenario(&self) -> Scenario {
        match self.scenario_kind.as_str() {
            "random-band" => Scenario::RandomBand {
                band_lo: self.band_lo,
                band_hi: self.band_hi,
                amplitude: self.amplitude,
                gamma: self.gamma,
            },
            "paper-scaling" => Scenario::PaperScaling {
                band_lo: self.band_lo,
                band_hi: self.band_hi,
                amplitude: self.amplitude,
                gamma: self.gamma,
                p: self.estimates.p,
                c3: self.estimates.c3,
                c4: self.estimates.c4,
            },
            _ => Scenario::TaylorGreen,
        }
    }

    pub fn run_spec(&self) -> RunSpec {
        RunSpec {
            grid_n: self.grid_n,
            dt: self.dt,
            t_end: self.t_end,
            sample_stride: self.sample_stride,
            seed: self.seed,
            dealias: self.dealias,
            nu_infinity_proxy: self.nu_infinity_proxy,
            params: self.params,
            scenario: self.scenario(),
            estimates: self.estimates.clone(),
        }
    }

    /// Resolved settings, one per line, echoed into the run manifest.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let kv = |s: &mut String, k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv(&mut s, "run.grid_n", self.grid_n.to_string());
        kv(&mut s, "run.dt", format!("{:e}", self.dt));
        kv(&mut s, "run.t_end", format!("{:e}", self.t_end));
        kv(&mut s, "run.sample_stride", self.sample_stride.to_string());
        kv(&mut s, "run.seed", self.seed.to_string());
        kv(&mut s, "run.dealias", self.dealias.to_string());
        kv(&mut s, "run.output_dir", self.output_dir.clone());
        kv(
            &mut s,
            "run.checks",
            match &self.checks {
                None => "all".into(),
                Some(list) => list.join(","),
            },
        );
        kv(&mut s, "physics.mu", format!("{:e}", self.params.mu));
        kv(&mut s, "physics.nu", format!("{:e}", self.params.nu));
        kv(
            &mut s,
            "physics.nu_infinity_proxy",
            self.nu_infinity_proxy.to_string(),
        );
        kv(&mut s, "scenario.kind", self.scenario_kind.clone());
        kv(&mut s, "scenario.band_lo", self.band_lo.to_string());
        kv(&mut s, "scenario.band_hi", self.band_hi.to_string());
        kv(&mut s, "scenario.amplitude", format!("{:e}", self.amplitude));
        kv(&mut s, "scenario.gamma", format!("{:e}", self.gamma));
        let e = &self.estimates;
        kv(&mut s, "estimates.p", format!("{:e}", e.p));
        kv(&mut s, "estimates.beta", format!("{:e}", e.beta));
        kv(&mut s, "estimates.horizon_t", format!("{:e}", e.horizon));
        kv(&mut s, "estimates.c1", format!("{:e}", e.c1));
        kv(&mut s, "estimates.c2", format!("{:e}", e.c2));
        kv(&mut s, "estimates.c3", format!("{:e}", e.c3));
        kv(&mut s, "estimates.c4", format!("{:e}", e.c4));
        kv(&mut s, "estimates.c_generic", format!("{:e}", e.c_generic));
        kv(&mut s, "estimates.c_poincare", format!("{:e}", e.c_poincare));
        kv(&mut s, "estimates.c0_embed", format!("{:e}", e.c0_embed));
        kv(&mut s, "estimates.gamma_star", format!("{:e}", e.gamma_star));
        kv(&mut s, "estimates.v0_l2", format!("{:e}", e.v0_l2));
        kv(&mut s, "estimates.v0_l6", format!("{:e}", e.v0_l6));
        kv(&mut s, "estimates.vt0_l2", format!("{:e}", e.vt0_l2));
        kv(&mut s, "estimates.x0", format!("{:e}", e.x0));
        kv(&mut s, "estimates.b0", format!("{:e}", e.b0));
        kv(&mut s, "estimates.phi0_lp", format!("{:e}", e.phi0_lp));
        kv(
            &mut s,
            "estimates.t_freeze",
            format!("{:e}", e.frozen_time()),
        );
        kv(
            &mut s,
            "estimates.phi1_exponent",
            match e.phi1_exponent {
                MixedExponent::POverPMinus1 => "p-1".into(),
                MixedExponent::POverPMinus2 => "p-2".into(),
            },
        );
        kv(
            &mut s,
            "estimates.lower_bound_l2_variant",
            e.lower_bound_l2_variant.to_string(),
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let cfg = parse_config("[run]\ngrid_n = 16\n[scenario]\nkind = taylor-green\n").unwrap();
        assert_eq!(cfg.grid_n, 16);
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.params.mu, 1.0);
        assert_eq!(cfg.params.nu, 100.0);
        assert_eq!(cfg.estimates.c_generic, 1.0);
        assert_eq!(cfg.sample_stride, 10);
        // phi0 default follows the (2.25) midpoint at nu = 100
        let expect = 2.0 / (2.0 * 100.0_f64.powf(0.75));
        assert!((cfg.estimates.phi0_lp - expect).abs() <= 1e-15);
    }

    #[test]
    fn negative_nu_is_rejected_naming_the_key() {
        let err = parse_config("[physics]\nnu = -1\n").unwrap_err();
        assert!(err.to_string().contains("nu"), "{err}");
    }

    #[test]
    fn p_on_the_boundary_is_rejected() {
        let err = parse_config("[estimates]\np = 6\n").unwrap_err();
        assert!(err.to_string().contains('p'), "{err}");
        assert!(parse_config("[estimates]\np = 3\n").is_err());
        assert!(parse_config("[estimates]\np = 4.5\n").is_ok());
    }

    #[test]
    fn unknown_key_rejected_by_name() {
        let err = parse_config("[run]\ngird_n = 16\n").unwrap_err();
        assert!(err.to_string().contains("gird_n"), "{err}");
    }

    #[test]
    fn unknown_check_identifier_rejected() {
        let err = parse_config("[run]\nchecks = energy-identity,bogus\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let cfg = parse_config(
            "# leading comment\n\n[run]\nseed = 7  # trailing\n\n[physics]\nmu = 2.0\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.params.mu, 2.0);
    }

    #[test]
    fn odd_grid_rejected() {
        assert!(parse_config("[run]\ngrid_n = 17\n").is_err());
    }

    #[test]
    fn scenario_kinds_resolve() {
        let cfg =
            parse_config("[scenario]\nkind = paper-scaling\ngamma = 0.2\n").unwrap();
        match cfg.scenario() {
            Scenario::PaperScaling { gamma, p, .. } => {
                assert_eq!(gamma, 0.2);
                assert_eq!(p, 4.0);
            }
            _ => panic!("wrong scenario"),
        }
        assert!(parse_config("[scenario]\nkind = vortex-sheet\n").is_err());
    }
}
