//! Configuration-driven scenario runner: sweeps a uniform grid in the
//! model's natural time unit (or in the noise weight s for the depolarizing
//! model), evaluates the incompatibility of every tracked pair and the
//! concurrence of the evolved Bell probe, detects sudden-death and revival
//! events, and emits CSV or JSON.
//!
//! Grid points are independent; the runner evaluates them in order so the
//! output is reproducible byte for byte.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{FourVector, MeasurementPair};
use crate::channels::{
    dephasing_snapshot, depolarize, heisenberg_evolve, lorentzian_snapshot, pbg_snapshot,
    ChannelSnapshot, DephasingParams, LorentzianParams, PbgParams,
};
use crate::compat::{busch_c, incompatibility, DEFAULT_TOL_ROOT};
use crate::entangle::{concurrence, depolarized_bell_state, evolved_bell_state};
use crate::{Error, Result};

/// Incompatibility at or below this value counts as numerically dead,
/// provided the evolved pair is actually jointly measurable; an
/// asymptotically decaying but strictly incompatible pair never triggers an
/// event (see [`detect_transitions`]).
pub const TOL_DEAD: f64 = 1e-9;

/// Relative (to t_max) time tolerance to which transition times are refined.
const TRANSITION_TIME_TOL: f64 = 1e-8;

/// The dynamical model of a scenario, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", content = "params", rename_all = "lowercase")]
pub enum Model {
    Dephasing(DephasingParams),
    Lorentzian(LorentzianParams),
    Pbg(PbgParams),
    Depolarizing(DepolarizingParams),
}

/// The depolarizing sweep has no free parameters: the grid variable is the
/// noise weight s itself, running over [0, t_max].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepolarizingParams {}

impl Model {
    fn validate(&self) -> Result<()> {
        match self {
            Model::Dephasing(p) => p.validate(),
            Model::Lorentzian(p) => p.validate(),
            Model::Pbg(p) => p.validate(),
            Model::Depolarizing(_) => Ok(()),
        }
    }

    /// Default sweep length in the model's natural unit: enough to contain
    /// every death, revival and plateau of the regimes studied. The fast
    /// oscillatory Lorentzian regime gets a short window instead, so the
    /// default grid resolves the oscillations.
    fn default_t_max(&self) -> f64 {
        match self {
            Model::Dephasing(p) => 4.0 / p.sigma,
            Model::Lorentzian(p) if p.r <= 1.0 => 10.0 / p.lambda_width,
            Model::Lorentzian(p) => 2.0 / p.lambda_width,
            Model::Pbg(p) => 10.0 / p.beta,
            Model::Depolarizing(_) => 1.0,
        }
    }

    /// Default grid size: 600 points, raised for oscillatory Lorentzian
    /// sweeps so the step keeps at least 20 points per oscillation period
    /// 4π/(Ω·λ) with Ω = √(2r−1).
    fn default_n_steps(&self, t_max: f64) -> usize {
        let base = 600usize;
        match self {
            Model::Lorentzian(p) if p.r > 0.5 => {
                let omega = (2.0 * p.r - 1.0).sqrt();
                let period = 4.0 * std::f64::consts::PI / (omega * p.lambda_width);
                let needed = (20.0 * t_max / period).ceil() as usize + 1;
                base.max(needed)
            }
            _ => base,
        }
    }
}

/// Output table format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A full scenario description. Deserializes from JSON with the exact field
/// names below; unknown fields are rejected at both the top level and inside
/// `params`, so typos fail loudly instead of silently using defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub model: Model,
    pub pairs: Vec<MeasurementPair>,
    pub bias: f64,
    pub t_max: f64,
    pub n_steps: usize,
    pub tol_root: f64,
    pub output_format: OutputFormat,
}

/// Field-for-field mirror of the JSON document; `params` is dispatched by
/// the `model` tag in a second step because serde cannot combine
/// `deny_unknown_fields` with a flattened tagged enum.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: String,
    #[serde(default)]
    params: Option<serde_json::Value>,
    #[serde(default)]
    pairs: Option<Vec<MeasurementPair>>,
    #[serde(default)]
    bias: Option<f64>,
    #[serde(default)]
    t_max: Option<f64>,
    #[serde(default)]
    n_steps: Option<usize>,
    #[serde(default)]
    tol_root: Option<f64>,
    #[serde(default)]
    output_format: Option<OutputFormat>,
}

impl<'de> Deserialize<'de> for ScenarioConfig {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        use serde::de::Error as DeError;
        let raw = RawConfig::deserialize(deserializer)?;
        let params = raw
            .params
            .unwrap_or(serde_json::Value::Object(Default::default()));
        let model = match raw.model.as_str() {
            "dephasing" => Model::Dephasing(
                serde_json::from_value::<DephasingParams>(params).map_err(DeError::custom)?,
            ),
            "lorentzian" => Model::Lorentzian(
                serde_json::from_value::<LorentzianParams>(params).map_err(DeError::custom)?,
            ),
            "pbg" => {
                Model::Pbg(serde_json::from_value::<PbgParams>(params).map_err(DeError::custom)?)
            }
            "depolarizing" => Model::Depolarizing(
                serde_json::from_value::<DepolarizingParams>(params).map_err(DeError::custom)?,
            ),
            other => {
                return Err(DeError::custom(format!(
                    "unknown model '{other}' (expected dephasing, lorentzian, pbg or depolarizing)"
                )))
            }
        };
        let t_max = raw.t_max.unwrap_or_else(|| model.default_t_max());
        let n_steps = raw.n_steps.unwrap_or_else(|| model.default_n_steps(t_max));
        let cfg = ScenarioConfig {
            model,
            pairs: raw
                .pairs
                .unwrap_or_else(|| vec![MeasurementPair::p1(), MeasurementPair::p2()]),
            bias: raw.bias.unwrap_or(0.0),
            t_max,
            n_steps,
            tol_root: raw.tol_root.unwrap_or(DEFAULT_TOL_ROOT),
            output_format: raw.output_format.unwrap_or(OutputFormat::Csv),
        };
        cfg.validate().map_err(DeError::custom)?;
        Ok(cfg)
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(Error::Config(format!(
                "t_max = {}, expected finite and > 0",
                self.t_max
            )));
        }
        if matches!(self.model, Model::Depolarizing(_)) && self.t_max > 1.0 {
            return Err(Error::Config(format!(
                "depolarizing sweep runs over the noise weight s in [0, 1]; t_max = {} is out of range",
                self.t_max
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::Config(format!(
                "n_steps = {}, expected >= 2",
                self.n_steps
            )));
        }
        if self.tol_root.is_nan() || self.tol_root <= 0.0 {
            return Err(Error::Config(format!(
                "tol_root = {}, expected > 0",
                self.tol_root
            )));
        }
        if !(-1.0..=1.0).contains(&self.bias) {
            return Err(Error::Config(format!(
                "bias = {}, expected [-1, 1]",
                self.bias
            )));
        }
        if self.pairs.is_empty() {
            return Err(Error::Config("pairs must not be empty".into()));
        }
        for p in &self.pairs {
            // re-validate: pairs may come straight from JSON
            MeasurementPair::new(p.first, p.second, p.label.clone())?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// The uniform sweep grid: n_steps points on [0, t_max].
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.t_max / (self.n_steps - 1) as f64;
        (0..self.n_steps).map(move |i| {
            if i + 1 == self.n_steps {
                self.t_max
            } else {
                i as f64 * step
            }
        })
    }

    /// Channel snapshot at grid coordinate t. For the depolarizing model the
    /// returned pair (a = 1, c = 1−s) records the Bloch contraction factor;
    /// the depolarizing map itself is not of (a, c) form and is applied via
    /// [`depolarize`].
    pub fn snapshot(&self, t: f64) -> Result<ChannelSnapshot> {
        match &self.model {
            Model::Dephasing(p) => dephasing_snapshot(t, p),
            Model::Lorentzian(p) => lorentzian_snapshot(t, p),
            Model::Pbg(p) => pbg_snapshot(t, p),
            Model::Depolarizing(_) => {
                ChannelSnapshot::new(1.0, Complex64::new(1.0 - t.clamp(0.0, 1.0), 0.0))
            }
        }
    }

    /// The two evolved effects of pair `pair_index` at grid coordinate t.
    pub fn evolved_pair(&self, pair_index: usize, t: f64) -> Result<(FourVector, FourVector)> {
        let pair = self.pairs.get(pair_index).ok_or_else(|| {
            Error::Config(format!(
                "pair index {pair_index} out of range ({} tracked)",
                self.pairs.len()
            ))
        })?;
        match &self.model {
            Model::Depolarizing(_) => {
                let s = t.clamp(0.0, 1.0);
                Ok((depolarize(&pair.first, s), depolarize(&pair.second, s)))
            }
            _ => {
                let snap = self.snapshot(t)?;
                Ok((
                    heisenberg_evolve(&pair.first, &snap),
                    heisenberg_evolve(&pair.second, &snap),
                ))
            }
        }
    }

    fn concurrence_at(&self, t: f64) -> Result<f64> {
        match &self.model {
            Model::Depolarizing(_) => Ok(concurrence(&depolarized_bell_state(t.clamp(0.0, 1.0))?)),
            _ => Ok(concurrence(&evolved_bell_state(&self.snapshot(t)?))),
        }
    }
}

/// One row of scenario output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub a: f64,
    pub c_re: f64,
    pub c_im: f64,
    pub concurrence: f64,
    /// One value per tracked pair, in config order.
    pub incompatibility: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionKind {
    Death,
    Revival,
}

/// A sudden-death or revival event of one pair's incompatibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionEvent {
    pub pair: String,
    pub time: f64,
    pub kind: TransitionKind,
}

/// Sweep the grid and assemble one record per time point.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<TimeSeriesRecord>> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.n_steps);
    for t in cfg.grid() {
        records.push(record_at(cfg, t).map_err(|e| e.at_time(t))?);
    }
    Ok(records)
}

fn record_at(cfg: &ScenarioConfig, t: f64) -> Result<TimeSeriesRecord> {
    let snap = cfg.snapshot(t)?;
    let mut incompat = Vec::with_capacity(cfg.pairs.len());
    for idx in 0..cfg.pairs.len() {
        let (x, y) = cfg.evolved_pair(idx, t)?;
        incompat.push(incompatibility(&x, &y, cfg.bias, cfg.tol_root)?);
    }
    Ok(TimeSeriesRecord {
        t,
        a: snap.a,
        c_re: snap.c.re,
        c_im: snap.c.im,
        concurrence: cfg.concurrence_at(t)?,
        incompatibility: incompat,
    })
}

/// Dead/alive classification of one grid point.
///
/// Alive means the evolved pair is strictly incompatible with monotone value
/// above [`TOL_DEAD`]; dead means jointly measurable (C ≥ 0, where the
/// incompatibility is exactly zero). Values in (0, TOL_DEAD] with C < 0 are
/// the asymptotic tail of a decaying but never-vanishing incompatibility:
/// they keep the previous state, so no spurious sudden death is reported for
/// pairs whose incompatibility merely decays through the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointState {
    Alive,
    Dead,
    Tail,
}

fn point_state(cfg: &ScenarioConfig, pair_index: usize, t: f64) -> Result<PointState> {
    let (x, y) = cfg.evolved_pair(pair_index, t)?;
    if busch_c(&x, &y)? >= 0.0 {
        return Ok(PointState::Dead);
    }
    let value = incompatibility(&x, &y, cfg.bias, cfg.tol_root)?;
    if value > TOL_DEAD {
        Ok(PointState::Alive)
    } else {
        Ok(PointState::Tail)
    }
}

/// Scan one pair's evolution across the series grid for transitions between
/// alive and dead, refining each bracketing interval by bisection on the
/// underlying continuous evolution to absolute time tolerance t_max·1e-8.
/// Events alternate death/revival by construction.
pub fn detect_transitions(
    cfg: &ScenarioConfig,
    series: &[TimeSeriesRecord],
    pair_index: usize,
) -> Result<Vec<TransitionEvent>> {
    if pair_index >= cfg.pairs.len() {
        return Err(Error::Config(format!(
            "pair index {pair_index} out of range ({} tracked)",
            cfg.pairs.len()
        )));
    }
    if series.is_empty() {
        return Ok(Vec::new());
    }
    if series.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::Config("series must be strictly time-ordered".into()));
    }
    let label = &cfg.pairs[pair_index].label;
    let time_tol = cfg.t_max * TRANSITION_TIME_TOL;

    let mut events = Vec::new();
    let mut state = match point_state(cfg, pair_index, series[0].t)? {
        PointState::Tail => PointState::Alive, // decayed-from-birth counts as alive
        s => s,
    };
    let mut prev_t = series[0].t;
    for rec in &series[1..] {
        let here = point_state(cfg, pair_index, rec.t)?;
        let effective = match here {
            PointState::Tail => state,
            s => s,
        };
        if effective != state {
            let time = refine_flip(cfg, pair_index, prev_t, rec.t, state, time_tol)?;
            events.push(TransitionEvent {
                pair: label.clone(),
                time,
                kind: if effective == PointState::Dead {
                    TransitionKind::Death
                } else {
                    TransitionKind::Revival
                },
            });
            state = effective;
        }
        prev_t = rec.t;
    }
    Ok(events)
}

/// Bisect the state flip inside (lo, hi); `before` is the state at lo.
fn refine_flip(
    cfg: &ScenarioConfig,
    pair_index: usize,
    mut lo: f64,
    mut hi: f64,
    before: PointState,
    time_tol: f64,
) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= time_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = point_state(cfg, pair_index, mid)?;
        let effective = if s == PointState::Tail { before } else { s };
        if effective == before {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Render the series (and, for JSON, the config echo and events) as bytes.
/// CSV carries the record table only; deterministic for identical inputs.
pub fn emit(
    cfg: &ScenarioConfig,
    series: &[TimeSeriesRecord],
    transitions: &[TransitionEvent],
    format: OutputFormat,
) -> Vec<u8> {
    match format {
        OutputFormat::Csv => emit_csv(cfg, series).into_bytes(),
        OutputFormat::Json => emit_json(cfg, series, transitions).into_bytes(),
    }
}

fn emit_csv(cfg: &ScenarioConfig, series: &[TimeSeriesRecord]) -> String {
    let mut out = String::from("t,a,c_re,c_im,concurrence");
    for pair in &cfg.pairs {
        out.push_str(",I_");
        out.push_str(&pair.label);
    }
    out.push('\n');
    for rec in series {
        out.push_str(&format_significant(rec.t));
        for v in [rec.a, rec.c_re, rec.c_im, rec.concurrence] {
            out.push(',');
            out.push_str(&format_significant(v));
        }
        for v in &rec.incompatibility {
            out.push(',');
            out.push_str(&format_significant(*v));
        }
        out.push('\n');
    }
    out
}

fn emit_json(
    cfg: &ScenarioConfig,
    series: &[TimeSeriesRecord],
    transitions: &[TransitionEvent],
) -> String {
    #[derive(Serialize)]
    struct Document<'a> {
        config: &'a ScenarioConfig,
        records: &'a [TimeSeriesRecord],
        transitions: &'a [TransitionEvent],
    }
    let doc = Document {
        config: cfg,
        records: series,
        transitions,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serialization cannot fail");
    text.push('\n');
    text
}

/// 12 significant digits, positional where readable, trailing zeros trimmed
/// ("0", "1", "0.292893218813", "1.52299797447e-8").
pub fn format_significant(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.11e}", v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..=14).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let mut s = format!("{:.*}", decimals, v);
        if s.contains('.') {
            s.truncate(s.trim_end_matches('0').len());
            s.truncate(s.trim_end_matches('.').len());
        }
        s
    } else {
        sci
    }
}
