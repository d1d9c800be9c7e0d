//! Flat `section.key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; missing
//! keys fall back to [`presets::defaults`] and, for controller gains, to the
//! reference gains of the chosen family.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{presets, validate_scenario, ControllerLaw, ForceSegment, Scenario, WallMode};

const SCENARIO_KEYS: &[&str] = &[
    "master.mass",
    "master.damping",
    "slave.mass",
    "slave.damping",
    "operator.stiffness",
    "operator.damping",
    "operator.force.start",
    "operator.force.end",
    "operator.force.magnitude",
    "wall.position",
    "wall.stiffness",
    "wall.mode",
    "controller.type",
    "sampling.period",
    "sampling.alpha",
    "sampling.substeps",
    "delay.t1",
    "delay.t2",
    "delay.nu",
    "duration",
];

const P_LIKE_GAINS: &[&str] = &["K", "K_m", "K_s", "L", "L_m", "L_s"];
const PD_LIKE_GAINS: &[&str] = &["Kd", "K", "K_m", "K_s", "gamma", "gamma_m", "gamma_s"];
const PD_DISSIPATION_GAINS: &[&str] = &["Kv", "Kp", "Kd", "Peps"];
const ALL_GAINS: &[&str] = &[
    "K", "K_m", "K_s", "L", "L_m", "L_s", "Kd", "Kp", "Kv", "Peps", "gamma", "gamma_m", "gamma_s",
];

struct Entry {
    value: String,
    line: usize,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let known = SCENARIO_KEYS.contains(&key)
                || key
                    .strip_prefix("controller.")
                    .is_some_and(|g| ALL_GAINS.contains(&g));
            if !known {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: format!("{key}: missing value"),
                });
            }
            let entry = Entry {
                value: value.to_string(),
                line,
            };
            if let Some(prev) = map.insert(key.to_string(), entry) {
                return Err(Error::Parse {
                    line,
                    message: format!("{key}: duplicate key (first set on line {})", prev.line),
                });
            }
        }
        Ok(Self(map))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        self.0
            .get(key)
            .map(|e| {
                e.value.parse::<f64>().map_err(|_| Error::Parse {
                    line: e.line,
                    message: format!("{key}: invalid number `{}`", e.value),
                })
            })
            .transpose()
    }

    fn set(&self, key: &str, target: &mut f64) -> Result<()> {
        if let Some(v) = self.number(key)? {
            *target = v;
        }
        Ok(())
    }

    fn gain(&self, name: &str) -> Result<Option<f64>> {
        self.number(&format!("controller.{name}"))
    }

    /// Per-side gain: `<name>_m` / `<name>_s` override the shared `<name>`.
    fn sided(&self, name: &str, default: f64) -> Result<(f64, f64)> {
        let shared = self.gain(name)?.unwrap_or(default);
        Ok((
            self.gain(&format!("{name}_m"))?.unwrap_or(shared),
            self.gain(&format!("{name}_s"))?.unwrap_or(shared),
        ))
    }
}

/// Reads and validates a scenario file.
pub fn parse_config(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<Scenario> {
    let entries = Entries::parse(text)?;
    let mut s = presets::defaults();

    entries.set("master.mass", &mut s.master.mass)?;
    entries.set("master.damping", &mut s.master.damping)?;
    entries.set("slave.mass", &mut s.slave.mass)?;
    entries.set("slave.damping", &mut s.slave.damping)?;

    entries.set("operator.stiffness", &mut s.operator.stiffness)?;
    entries.set("operator.damping", &mut s.operator.damping)?;
    let mut segment = s.operator.exogenous_force[0];
    entries.set("operator.force.start", &mut segment.start)?;
    entries.set("operator.force.end", &mut segment.end)?;
    entries.set("operator.force.magnitude", &mut segment.magnitude)?;
    s.operator.exogenous_force = vec![segment];

    entries.set("wall.position", &mut s.environment.contact_position)?;
    entries.set("wall.stiffness", &mut s.environment.stiffness)?;
    if let Some(e) = entries.0.get("wall.mode") {
        s.environment.mode = match e.value.as_str() {
            "spring" => WallMode::Spring,
            "rigid_reflect" => WallMode::RigidReflect,
            other => {
                return Err(Error::Parse {
                    line: e.line,
                    message: format!(
                        "wall.mode: expected `spring` or `rigid_reflect`, found `{other}`"
                    ),
                })
            }
        };
    }

    s.law = parse_law(&entries)?;

    entries.set("sampling.period", &mut s.sampling.period)?;
    entries.set("sampling.alpha", &mut s.sampling.alpha)?;
    if let Some(e) = entries.0.get("sampling.substeps") {
        s.sampling.substeps_per_period = e.value.parse().map_err(|_| Error::Parse {
            line: e.line,
            message: format!(
                "sampling.substeps: expected a positive integer, found `{}`",
                e.value
            ),
        })?;
    }
    entries.set("delay.t1", &mut s.delay.forward)?;
    entries.set("delay.t2", &mut s.delay.backward)?;
    entries.set("delay.nu", &mut s.delay.nu)?;
    entries.set("duration", &mut s.duration)?;

    validate_scenario(s).map_err(Error::Validation)
}

fn parse_law(entries: &Entries) -> Result<ControllerLaw> {
    let (kind, line) = match entries.0.get("controller.type") {
        Some(e) => (e.value.as_str(), e.line),
        None => ("p_like", 0),
    };
    let allowed = match kind {
        "p_like" => P_LIKE_GAINS,
        "pd_like" => PD_LIKE_GAINS,
        "pd_dissipation" => PD_DISSIPATION_GAINS,
        other => {
            return Err(Error::Parse {
                line,
                message: format!(
                    "controller.type: expected `p_like`, `pd_like` or `pd_dissipation`, found `{other}`"
                ),
            })
        }
    };
    for (key, e) in &entries.0 {
        if let Some(gain) = key.strip_prefix("controller.") {
            if gain != "type" && !allowed.contains(&gain) {
                return Err(Error::Parse {
                    line: e.line,
                    message: format!("{key}: not a gain of controller type `{kind}`"),
                });
            }
        }
    }

    Ok(match kind {
        "p_like" => {
            let (k_m, k_s) = entries.sided("K", 1.0)?;
            let (l_m, l_s) = entries.sided("L", 0.1)?;
            ControllerLaw::PLike { k_m, k_s, l_m, l_s }
        }
        "pd_like" => {
            let (k_m, k_s) = entries.sided("K", 2.0)?;
            let (gamma_m, gamma_s) = entries.sided("gamma", 1.0)?;
            ControllerLaw::PdLike {
                kd: entries.gain("Kd")?.unwrap_or(1.0),
                k_m,
                k_s,
                gamma_m,
                gamma_s,
            }
        }
        _ => ControllerLaw::PdDissipation {
            kv: entries.gain("Kv")?.unwrap_or(10.0),
            kp: entries.gain("Kp")?.unwrap_or(1.0),
            kd: entries.gain("Kd")?.unwrap_or(2.0),
            p_eps: entries.gain("Peps")?.unwrap_or(0.002),
        },
    })
}

/// Writes every key of `scenario` so that [`parse_config_str`] rebuilds it exactly.
///
/// Only the first exogenous force segment is representable.
pub fn dump_config(scenario: &Scenario) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{key} = {value}");
    };
    put("master.mass", &scenario.master.mass);
    put("master.damping", &scenario.master.damping);
    put("slave.mass", &scenario.slave.mass);
    put("slave.damping", &scenario.slave.damping);
    put("operator.stiffness", &scenario.operator.stiffness);
    put("operator.damping", &scenario.operator.damping);
    let segment = scenario
        .operator
        .exogenous_force
        .first()
        .copied()
        .unwrap_or(ForceSegment {
            start: 0.0,
            end: 0.0,
            magnitude: 0.0,
        });
    put("operator.force.start", &segment.start);
    put("operator.force.end", &segment.end);
    put("operator.force.magnitude", &segment.magnitude);
    put("wall.position", &scenario.environment.contact_position);
    put("wall.stiffness", &scenario.environment.stiffness);
    put("wall.mode", &scenario.environment.mode.as_str());
    put("controller.type", &scenario.law.type_name());
    for (name, value) in scenario.law.gains() {
        put(&format!("controller.{name}"), &value);
    }
    put("sampling.period", &scenario.sampling.period);
    put("sampling.alpha", &scenario.sampling.alpha);
    put("sampling.substeps", &scenario.sampling.substeps_per_period);
    put("delay.t1", &scenario.delay.forward);
    put("delay.t2", &scenario.delay.backward);
    put("delay.nu", &scenario.delay.nu);
    put("duration", &scenario.duration);
    out
}
