//! Line-oriented scenario files for demos and simulations.
//!
//! Grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! scale <power-of-ten>                                  # optional, first
//! fence <id> <sw_lat> <sw_lon> <ne_lat> <ne_lon> <sub>[,<sub>...]
//! node <id> [<lat> <lon>]...
//! ```
//!
//! `scale` may appear at most once and must precede every fence; fences
//! must precede trajectories. A `node` line with no coordinates declares an
//! empty trajectory. Fence and node ids must be unique.

use std::collections::BTreeSet;
use std::path::Path;
use thiserror::Error;

use crate::geometry::{make_axis_aligned_fence, Fence, GeoPoint, GeometryError, ScaleConfig};
use crate::protocol::{NodeId, ProtocolError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Geometry {
        line: usize,
        source: GeometryError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// A fence declaration: axis-aligned box, subscriber labels, and the
/// resulting scaled-integer fence.
#[derive(Debug, Clone)]
pub struct ScenarioFence {
    pub id: String,
    pub sw: GeoPoint,
    pub ne: GeoPoint,
    pub subscribers: Vec<String>,
    pub fence: Fence,
}

/// One node's sequence of positions, in publication order.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub node: NodeId,
    pub points: Vec<GeoPoint>,
}

/// A parsed scenario: deployment scale, fences, then trajectories.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub scale: ScaleConfig,
    pub fences: Vec<ScenarioFence>,
    pub trajectories: Vec<Trajectory>,
}

impl Scenario {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        Scenario::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut scale = ScaleConfig::default();
        let mut fences: Vec<ScenarioFence> = Vec::new();
        let mut trajectories: Vec<Trajectory> = Vec::new();
        let mut seen_scale = false;
        let mut fence_ids = BTreeSet::new();
        let mut node_ids = BTreeSet::new();

        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let directive = tokens.next().expect("non-empty line has a token");
            let rest: Vec<&str> = tokens.collect();
            match directive {
                "scale" => {
                    if seen_scale || !fences.is_empty() || !trajectories.is_empty() {
                        return Err(syntax(line, "scale must appear once, before any fence"));
                    }
                    seen_scale = true;
                    let value = parse_number::<u64>(line, rest.first(), "scale value")?;
                    scale = ScaleConfig::new(value)
                        .map_err(|source| ScenarioError::Geometry { line, source })?;
                }
                "fence" => {
                    if !trajectories.is_empty() {
                        return Err(syntax(line, "fences must precede node trajectories"));
                    }
                    if rest.len() != 6 {
                        return Err(syntax(
                            line,
                            "expected: fence <id> <sw_lat> <sw_lon> <ne_lat> <ne_lon> <subscribers>",
                        ));
                    }
                    let id = rest[0].to_owned();
                    if !fence_ids.insert(id.clone()) {
                        return Err(syntax(line, &format!("duplicate fence id {id:?}")));
                    }
                    let sw = parse_point(line, rest[1], rest[2])?;
                    let ne = parse_point(line, rest[3], rest[4])?;
                    let subscribers: Vec<String> = rest[5]
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(str::to_owned)
                        .collect();
                    if subscribers.is_empty() {
                        return Err(syntax(line, "fence needs at least one subscriber"));
                    }
                    let fence = make_axis_aligned_fence(sw, ne, scale)
                        .map_err(|source| ScenarioError::Geometry { line, source })?;
                    fences.push(ScenarioFence {
                        id,
                        sw,
                        ne,
                        subscribers,
                        fence,
                    });
                }
                "node" => {
                    if rest.is_empty() {
                        return Err(syntax(line, "expected: node <id> [<lat> <lon>]..."));
                    }
                    if rest.len() % 2 != 1 {
                        return Err(syntax(line, "trajectory coordinates come in lat lon pairs"));
                    }
                    let node = NodeId::new(rest[0])?;
                    if !node_ids.insert(node.clone()) {
                        return Err(syntax(line, &format!("duplicate node id {:?}", rest[0])));
                    }
                    let points = rest[1..]
                        .chunks(2)
                        .map(|pair| parse_point(line, pair[0], pair[1]))
                        .collect::<Result<Vec<_>, _>>()?;
                    trajectories.push(Trajectory { node, points });
                }
                other => {
                    return Err(syntax(line, &format!("unknown directive {other:?}")));
                }
            }
        }

        Ok(Scenario {
            scale,
            fences,
            trajectories,
        })
    }

    pub fn fence_by_id(&self, id: &str) -> Option<&ScenarioFence> {
        self.fences.iter().find(|f| f.id == id)
    }

    /// Longest trajectory length; simulation steps run `0..steps()`.
    pub fn steps(&self) -> usize {
        self.trajectories
            .iter()
            .map(|t| t.points.len())
            .max()
            .unwrap_or(0)
    }
}

fn syntax(line: usize, message: &str) -> ScenarioError {
    ScenarioError::Syntax {
        line,
        message: message.to_owned(),
    }
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    token: Option<&&str>,
    what: &str,
) -> Result<T, ScenarioError> {
    token
        .ok_or_else(|| syntax(line, &format!("missing {what}")))?
        .parse::<T>()
        .map_err(|_| syntax(line, &format!("invalid {what}")))
}

fn parse_point(line: usize, lat: &str, lon: &str) -> Result<GeoPoint, ScenarioError> {
    let lat: f64 = lat
        .parse()
        .map_err(|_| syntax(line, &format!("invalid latitude {lat:?}")))?;
    let lon: f64 = lon
        .parse()
        .map_err(|_| syntax(line, &format!("invalid longitude {lon:?}")))?;
    GeoPoint::new(lat, lon).map_err(|source| ScenarioError::Geometry { line, source })
}
