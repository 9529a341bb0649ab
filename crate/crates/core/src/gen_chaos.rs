//! Orbits of the chaotic map catalog.
//!
//! Parameters, initial conditions and safety boxes live in
//! `data/chaotic_maps.toml`; this module only holds the equations.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::series::{Provenance, TimeSeries};

const CATALOG_TOML: &str = include_str!("../data/chaotic_maps.toml");

pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_HALF_WIDTH: f64 = 1e-3;
/// Redraws allowed when a perturbed orbit escapes or collapses.
pub const MAX_ATTEMPTS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    Conservative,
    Dissipative,
    Noninvertible,
}

impl MapClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MapClass::Conservative => "conservative",
            MapClass::Dissipative => "dissipative",
            MapClass::Noninvertible => "noninvertible",
        }
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conservative" => Ok(MapClass::Conservative),
            "dissipative" => Ok(MapClass::Dissipative),
            "noninvertible" | "non-invertible" => Ok(MapClass::Noninvertible),
            other => Err(Error::InvalidParameter(format!(
                "unknown map class `{other}`"
            ))),
        }
    }
}

/// Random initial conditions: each coordinate shifted by a uniform draw in
/// `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub half_width: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation {
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub id: u32,
    pub key: String,
    pub name: String,
    pub class: MapClass,
    pub initial: Vec<f64>,
    pub bounds: Vec<[f64; 2]>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub observable: usize,
    #[serde(default)]
    pub perturbation: Perturbation,
}

impl MapSpec {
    pub fn state_dim(&self) -> usize {
        self.initial.len()
    }

    fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| {
            Error::Catalog(format!(
                "map {} ({}) lacks parameter `{name}`",
                self.id, self.key
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub maps: Vec<MapSpec>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let catalog: Catalog = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        catalog.validate()?;
        Ok(catalog)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for m in &self.maps {
            if !seen.insert(m.id) {
                return Err(Error::Catalog(format!("duplicate map id {}", m.id)));
            }
            if m.initial.is_empty()
                || m.bounds.len() != m.initial.len()
                || m.observable >= m.initial.len()
            {
                return Err(Error::Catalog(format!(
                    "map {} ({}) has inconsistent state dimensions",
                    m.id, m.key
                )));
            }
            Dynamics::compile(m)?;
        }
        Ok(())
    }
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::parse(CATALOG_TOML).expect("bundled map catalog is valid"))
}

/// All maps, ordered by id.
pub fn list_maps() -> &'static [MapSpec] {
    &catalog().maps
}

pub fn catalog_version() -> u32 {
    catalog().version
}

pub fn map_by_id(id: u32) -> Result<&'static MapSpec> {
    list_maps()
        .iter()
        .find(|m| m.id == id)
        .ok_or_else(|| Error::UnknownMap(id.to_string()))
}

/// Looks a map up by numeric id, key (`"henon"`) or display name.
pub fn find_map(query: &str) -> Result<&'static MapSpec> {
    let q = query.trim();
    if let Ok(id) = q.parse::<u32>() {
        return map_by_id(id);
    }
    list_maps()
        .iter()
        .find(|m| m.key.eq_ignore_ascii_case(q) || m.name.eq_ignore_ascii_case(q))
        .ok_or_else(|| Error::UnknownMap(q.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRequest {
    pub map_id: u32,
    pub length: usize,
    pub burn_in: usize,
    /// `None` starts from the catalog initial condition exactly.
    pub perturbation_seed: Option<u64>,
}

impl OrbitRequest {
    pub fn new(map_id: u32, length: usize) -> Self {
        Self {
            map_id,
            length,
            burn_in: DEFAULT_BURN_IN,
            perturbation_seed: None,
        }
    }
}

/// Iterates a map and returns its observable coordinate.
pub fn iterate(req: &OrbitRequest) -> Result<TimeSeries> {
    let spec = map_by_id(req.map_id)?;
    if req.length == 0 {
        return Err(Error::InvalidLength(0));
    }
    let dynamics = Dynamics::compile(spec)?;
    let mut state = initial_state(spec, req.perturbation_seed);
    let mut prev = state.clone();
    let mut out = Vec::with_capacity(req.length);
    for iteration in 0..req.burn_in + req.length {
        prev.copy_from_slice(&state);
        dynamics.step(&mut state);
        let escaped = state
            .iter()
            .zip(&spec.bounds)
            .any(|(&v, &[lo, hi])| !(lo..=hi).contains(&v));
        if escaped {
            return Err(Error::DivergedOrbit {
                map_id: spec.id,
                iteration,
                state,
            });
        }
        if state == prev {
            return Err(Error::DegenerateOrbit {
                map_id: spec.id,
                iteration,
            });
        }
        if iteration >= req.burn_in {
            out.push(state[spec.observable]);
        }
    }
    TimeSeries::new(
        out,
        Provenance {
            generator: spec.key.clone(),
            seed: req.perturbation_seed,
        },
    )
}

/// Like [`iterate`] with a perturbation seed, redrawing the initial
/// condition from derived seeds when the orbit escapes or collapses.
pub fn iterate_randomized(
    map_id: u32,
    length: usize,
    burn_in: usize,
    seed: u64,
) -> Result<TimeSeries> {
    let mut last_err = None;
    for attempt in 0..MAX_ATTEMPTS {
        let req = OrbitRequest {
            map_id,
            length,
            burn_in,
            perturbation_seed: Some(seed::derive(seed, &[attempt])),
        };
        match iterate(&req) {
            Ok(s) => return Ok(s),
            Err(e @ (Error::DivergedOrbit { .. } | Error::DegenerateOrbit { .. })) => {
                last_err = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn initial_state(spec: &MapSpec, perturbation_seed: Option<u64>) -> Vec<f64> {
    let mut state = spec.initial.clone();
    let Some(seed) = perturbation_seed else {
        return state;
    };
    let mut rng = seed::rng(seed);
    let w = spec.perturbation.half_width;
    for v in &mut state {
        *v += rng.gen_range(-w..=w);
    }
    state
}

/// Reduces into `[0, m)`, never returning `-0.0` or `m` itself.
#[inline]
fn wrap(x: f64, m: f64) -> f64 {
    let r = x.rem_euclid(m);
    if r >= m {
        0.0
    } else {
        r + 0.0
    }
}

/// A map's equations with parameters resolved.
#[derive(Debug, Clone, Copy)]
enum Dynamics {
    ArnoldCat,
    ChaoticWeb {
        cos_a: f64,
        sin_a: f64,
        k: f64,
    },
    ChirikovStandard {
        k: f64,
    },
    Gingerbreadman,
    HenonAreaPreserving {
        cos_a: f64,
        sin_a: f64,
    },
    Lorenz3d,
    Henon {
        a: f64,
        b: f64,
    },
    Lozi {
        a: f64,
        b: f64,
    },
    DelayedLogistic {
        a: f64,
    },
    Tinkerbell {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    HolmesCubic {
        b: f64,
        d: f64,
    },
    DissipativeStandard {
        b: f64,
        k: f64,
    },
    Ikeda {
        alpha: f64,
        beta: f64,
        gamma: f64,
        mu: f64,
    },
    Sinai {
        delta: f64,
    },
    PredatorPrey {
        r: f64,
        k: f64,
        a: f64,
    },
    Lcg {
        a: f64,
        b: f64,
        m: f64,
    },
    Cubic {
        a: f64,
    },
    Cusp {
        a: f64,
    },
    Gauss,
    Logistic {
        a: f64,
    },
    Pinchers {
        s: f64,
        c: f64,
    },
    Ricker {
        a: f64,
    },
    SineCircle {
        omega: f64,
        k: f64,
    },
    Sine {
        a: f64,
    },
    Spence,
    Tent {
        a: f64,
    },
}

impl Dynamics {
    fn compile(spec: &MapSpec) -> Result<Self> {
        let p = |name: &str| spec.param(name);
        let dynamics = match spec.key.as_str() {
            "arnold_cat" => Dynamics::ArnoldCat,
            "chaotic_web" => {
                let alpha = p("alpha")?;
                Dynamics::ChaoticWeb {
                    cos_a: alpha.cos(),
                    sin_a: alpha.sin(),
                    k: p("k")?,
                }
            }
            "chirikov_standard" => Dynamics::ChirikovStandard { k: p("k")? },
            "gingerbreadman" => Dynamics::Gingerbreadman,
            "henon_area_preserving" => {
                let cos_a = p("cos_alpha")?;
                Dynamics::HenonAreaPreserving {
                    cos_a,
                    sin_a: (1.0 - cos_a * cos_a).sqrt(),
                }
            }
            "lorenz_3d" => Dynamics::Lorenz3d,
            "henon" => Dynamics::Henon {
                a: p("a")?,
                b: p("b")?,
            },
            "lozi" => Dynamics::Lozi {
                a: p("a")?,
                b: p("b")?,
            },
            "delayed_logistic" => Dynamics::DelayedLogistic { a: p("a")? },
            "tinkerbell" => Dynamics::Tinkerbell {
                a: p("a")?,
                b: p("b")?,
                c: p("c")?,
                d: p("d")?,
            },
            "holmes_cubic" => Dynamics::HolmesCubic {
                b: p("b")?,
                d: p("d")?,
            },
            "dissipative_standard" => Dynamics::DissipativeStandard {
                b: p("b")?,
                k: p("k")?,
            },
            "ikeda" => Dynamics::Ikeda {
                alpha: p("alpha")?,
                beta: p("beta")?,
                gamma: p("gamma")?,
                mu: p("mu")?,
            },
            "sinai" => Dynamics::Sinai { delta: p("delta")? },
            "predator_prey" => Dynamics::PredatorPrey {
                r: p("r")?,
                k: p("k")?,
                a: p("a")?,
            },
            "lcg" => Dynamics::Lcg {
                a: p("a")?,
                b: p("b")?,
                m: p("m")?,
            },
            "cubic" => Dynamics::Cubic { a: p("a")? },
            "cusp" => Dynamics::Cusp { a: p("a")? },
            "gauss" => Dynamics::Gauss,
            "logistic" => Dynamics::Logistic { a: p("a")? },
            "pinchers" => Dynamics::Pinchers {
                s: p("s")?,
                c: p("c")?,
            },
            "ricker" => Dynamics::Ricker { a: p("a")? },
            "sine_circle" => Dynamics::SineCircle {
                omega: p("omega")?,
                k: p("k")?,
            },
            "sine" => Dynamics::Sine { a: p("a")? },
            "spence" => Dynamics::Spence,
            "tent" => Dynamics::Tent { a: p("a")? },
            other => {
                return Err(Error::Catalog(format!(
                    "no equations for map key `{other}`"
                )))
            }
        };
        let dim = match dynamics {
            Dynamics::Lorenz3d => 3,
            Dynamics::Lcg { .. }
            | Dynamics::Cubic { .. }
            | Dynamics::Cusp { .. }
            | Dynamics::Gauss
            | Dynamics::Logistic { .. }
            | Dynamics::Pinchers { .. }
            | Dynamics::Ricker { .. }
            | Dynamics::SineCircle { .. }
            | Dynamics::Sine { .. }
            | Dynamics::Spence
            | Dynamics::Tent { .. } => 1,
            _ => 2,
        };
        if spec.state_dim() != dim {
            return Err(Error::Catalog(format!(
                "map {} ({}) needs a {dim}-dimensional state",
                spec.id, spec.key
            )));
        }
        Ok(dynamics)
    }

    #[inline]
    fn step(&self, s: &mut [f64]) {
        match *self {
            Dynamics::ArnoldCat => {
                let (x, y) = (s[0], s[1]);
                s[0] = wrap(x + y, 1.0);
                s[1] = wrap(x + 2.0 * y, 1.0);
            }
            Dynamics::ChaoticWeb { cos_a, sin_a, k } => {
                let (x, y) = (s[0], s[1]);
                let kick = y + k * (4.0 * x).sin();
                s[0] = x * cos_a - kick * sin_a;
                s[1] = x * sin_a + kick * cos_a;
            }
            Dynamics::ChirikovStandard { k } => {
                let y = wrap(s[1] + k * s[0].sin(), TAU);
                s[0] = wrap(s[0] + y, TAU);
                s[1] = y;
            }
            Dynamics::Gingerbreadman => {
                let (x, y) = (s[0], s[1]);
                s[0] = 1.0 + x.abs() - y;
                s[1] = x;
            }
            Dynamics::HenonAreaPreserving { cos_a, sin_a } => {
                let (x, y) = (s[0], s[1]);
                let q = y - x * x;
                s[0] = x * cos_a - q * sin_a;
                s[1] = x * sin_a + q * cos_a;
            }
            Dynamics::Lorenz3d => {
                let (x, y, z) = (s[0], s[1], s[2]);
                s[0] = x * y - z;
                s[1] = x;
                s[2] = y;
            }
            Dynamics::Henon { a, b } => {
                let (x, y) = (s[0], s[1]);
                s[0] = 1.0 - a * x * x + b * y;
                s[1] = x;
            }
            Dynamics::Lozi { a, b } => {
                let (x, y) = (s[0], s[1]);
                s[0] = 1.0 - a * x.abs() + b * y;
                s[1] = x;
            }
            Dynamics::DelayedLogistic { a } => {
                let (x, y) = (s[0], s[1]);
                s[0] = a * x * (1.0 - y);
                s[1] = x;
            }
            Dynamics::Tinkerbell { a, b, c, d } => {
                let (x, y) = (s[0], s[1]);
                s[0] = x * x - y * y + a * x + b * y;
                s[1] = 2.0 * x * y + c * x + d * y;
            }
            Dynamics::HolmesCubic { b, d } => {
                let (x, y) = (s[0], s[1]);
                s[0] = y;
                s[1] = -b * x + d * y - y * y * y;
            }
            Dynamics::DissipativeStandard { b, k } => {
                let y = wrap(b * s[1] + k * s[0].sin(), TAU);
                s[0] = wrap(s[0] + y, TAU);
                s[1] = y;
            }
            Dynamics::Ikeda {
                alpha,
                beta,
                gamma,
                mu,
            } => {
                let (x, y) = (s[0], s[1]);
                let t = beta - alpha / (1.0 + x * x + y * y);
                let (sin_t, cos_t) = t.sin_cos();
                s[0] = gamma + mu * (x * cos_t - y * sin_t);
                s[1] = mu * (x * sin_t + y * cos_t);
            }
            Dynamics::Sinai { delta } => {
                let (x, y) = (s[0], s[1]);
                s[0] = wrap(x + y + delta * (TAU * y).cos(), 1.0);
                s[1] = wrap(x + 2.0 * y, 1.0);
            }
            Dynamics::PredatorPrey { r, k, a } => {
                let (x, y) = (s[0], s[1]);
                s[0] = x * (r * (1.0 - x / k) - a * y).exp();
                s[1] = x * (1.0 - (-a * y).exp());
            }
            Dynamics::Lcg { a, b, m } => s[0] = wrap(a * s[0] + b, m),
            Dynamics::Cubic { a } => s[0] = a * s[0] * (1.0 - s[0] * s[0]),
            Dynamics::Cusp { a } => s[0] = 1.0 - a * s[0].abs().sqrt(),
            Dynamics::Gauss => s[0] = wrap(1.0 / s[0], 1.0),
            Dynamics::Logistic { a } => s[0] = a * s[0] * (1.0 - s[0]),
            Dynamics::Pinchers { s: slope, c } => s[0] = (slope * (s[0] - c)).tanh().abs(),
            Dynamics::Ricker { a } => s[0] = a * s[0] * (-s[0]).exp(),
            Dynamics::SineCircle { omega, k } => {
                s[0] = wrap(s[0] + omega - k / TAU * (TAU * s[0]).sin(), 1.0)
            }
            Dynamics::Sine { a } => s[0] = a * (PI * s[0]).sin(),
            Dynamics::Spence => s[0] = s[0].ln().abs(),
            Dynamics::Tent { a } => s[0] = a * s[0].min(1.0 - s[0]),
        }
    }
}
