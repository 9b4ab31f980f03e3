use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Vec2;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("failed to read environment file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid `{field}`: {msg}")]
    Invalid { field: &'static str, msg: String },
}

fn invalid(field: &'static str, msg: impl Into<String>) -> EnvError {
    EnvError::Invalid {
        field,
        msg: msg.into(),
    }
}

/// A straight wall between two points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

impl Segment {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self {
            a: Vec2::new(x1, y1),
            b: Vec2::new(x2, y2),
        }
    }

    /// Closest point on the segment to `p`.
    pub fn closest_point(&self, p: Vec2) -> Vec2 {
        let ab = self.b - self.a;
        let len2 = ab.norm_squared();
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p - self.a).dot(&ab) / len2).clamp(0.0, 1.0);
        self.a + ab * t
    }

    pub fn distance_to(&self, p: Vec2) -> f64 {
        (p - self.closest_point(p)).norm()
    }

    /// Parameter `t ≥ 0` at which the ray `origin + t·dir` crosses the
    /// segment, if it does. `dir` must be a unit vector.
    pub fn ray_hit(&self, origin: Vec2, dir: Vec2) -> Option<f64> {
        let e = self.b - self.a;
        let denom = cross(dir, e);
        if denom.abs() < 1e-15 {
            return None;
        }
        let w = self.a - origin;
        let t = cross(w, e) / denom;
        let u = cross(w, dir) / denom;
        if t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            Some(t)
        } else {
            None
        }
    }
}

pub(crate) fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

/// Arena, obstacles, goal disc and start pose.
///
/// Fields are public so tests and generators can build arenas directly; files
/// loaded through [`load_environment`] are always validated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    pub name: String,
    pub width: f64,
    pub height: f64,
    /// Internal obstacles only. The four boundary walls are implicit.
    pub obstacles: Vec<Segment>,
    pub goal_center: Vec2,
    pub goal_radius: f64,
    pub start: Pose,
}

impl EnvironmentSpec {
    /// An empty `width × height` arena.
    pub fn open(width: f64, height: f64, start: Pose, goal_center: Vec2, goal_radius: f64) -> Self {
        Self {
            name: "open".to_string(),
            width,
            height,
            obstacles: Vec::new(),
            goal_center,
            goal_radius,
            start,
        }
    }

    pub fn boundary(&self) -> [Segment; 4] {
        let (w, h) = (self.width, self.height);
        [
            Segment::new(0.0, 0.0, w, 0.0),
            Segment::new(w, 0.0, w, h),
            Segment::new(w, h, 0.0, h),
            Segment::new(0.0, h, 0.0, 0.0),
        ]
    }

    /// Boundary walls followed by internal obstacles.
    pub fn walls(&self) -> impl Iterator<Item = Segment> + '_ {
        self.boundary().into_iter().chain(self.obstacles.iter().copied())
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// Distance from `p` to the nearest wall or obstacle.
    pub fn clearance(&self, p: Vec2) -> f64 {
        self.walls()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(invalid("width", format!("must be positive, got {}", self.width)));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(invalid("height", format!("must be positive, got {}", self.height)));
        }
        for (k, s) in self.obstacles.iter().enumerate() {
            if !self.contains(s.a) || !self.contains(s.b) {
                return Err(invalid(
                    "segment",
                    format!("obstacle {k} has an endpoint outside the arena"),
                ));
            }
        }
        if !(self.goal_radius > 0.0) {
            return Err(invalid("goal", "radius must be positive"));
        }
        if !self.contains(self.goal_center) {
            return Err(invalid("goal", "centre lies outside the arena"));
        }
        if let Some(k) = self
            .obstacles
            .iter()
            .position(|s| s.distance_to(self.goal_center) <= self.goal_radius)
        {
            return Err(invalid("goal", format!("goal disc intersects obstacle {k}")));
        }
        let p = self.start.position;
        if !(p.x > 0.0 && p.x < self.width && p.y > 0.0 && p.y < self.height) {
            return Err(invalid("start", "start position must lie strictly inside the arena"));
        }
        if (p - self.goal_center).norm() < self.goal_radius {
            return Err(invalid("start", "start position lies inside the goal disc"));
        }
        if !self.start.heading.is_finite() {
            return Err(invalid("start", "heading must be finite"));
        }
        Ok(())
    }
}

impl fmt::Display for EnvironmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        writeln!(f, "width {}", self.width)?;
        writeln!(f, "height {}", self.height)?;
        writeln!(
            f,
            "start {} {} {}",
            self.start.position.x,
            self.start.position.y,
            self.start.heading.to_degrees()
        )?;
        writeln!(
            f,
            "goal {} {} {}",
            self.goal_center.x, self.goal_center.y, self.goal_radius
        )?;
        for s in &self.obstacles {
            writeln!(f, "segment {} {} {} {}", s.a.x, s.a.y, s.b.x, s.b.y)?;
        }
        Ok(())
    }
}

/// Parse the line-oriented environment format.
///
/// ```text
/// # comment
/// name    env2
/// width   20
/// height  20
/// start   2 2 45        # x y heading_deg
/// goal    17 17 0.5     # x y radius
/// segment 5 10 15 10    # x1 y1 x2 y2
/// rect    8 4 1 6       # x y w h  (lower-left corner, expanded to 4 segments)
/// ```
///
/// Values may be separated by whitespace or commas. `width`, `height`, `start`
/// and `goal` are required exactly once.
pub fn parse_environment(text: &str) -> Result<EnvironmentSpec, EnvError> {
    let mut name = None;
    let mut width = None;
    let mut height = None;
    let mut start = None;
    let mut goal = None;
    let mut obstacles = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty());
        let key = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        if key == "name" {
            set_once(&mut name, rest.join(" "), "name", line_no)?;
            continue;
        }
        let nums = rest
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| EnvError::Parse {
                    line: line_no,
                    msg: format!("`{s}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let expect = |n: usize| -> Result<(), EnvError> {
            if nums.len() == n {
                Ok(())
            } else {
                Err(EnvError::Parse {
                    line: line_no,
                    msg: format!("`{key}` takes {n} values, got {}", nums.len()),
                })
            }
        };
        match key {
            "width" => {
                expect(1)?;
                set_once(&mut width, nums[0], "width", line_no)?;
            }
            "height" => {
                expect(1)?;
                set_once(&mut height, nums[0], "height", line_no)?;
            }
            "start" => {
                expect(3)?;
                let pose = Pose {
                    position: Vec2::new(nums[0], nums[1]),
                    heading: super::wrap_positive(nums[2].to_radians()),
                };
                set_once(&mut start, pose, "start", line_no)?;
            }
            "goal" => {
                expect(3)?;
                set_once(&mut goal, (Vec2::new(nums[0], nums[1]), nums[2]), "goal", line_no)?;
            }
            "segment" => {
                expect(4)?;
                obstacles.push(Segment::new(nums[0], nums[1], nums[2], nums[3]));
            }
            "rect" => {
                expect(4)?;
                let (x, y, w, h) = (nums[0], nums[1], nums[2], nums[3]);
                if !(w > 0.0 && h > 0.0) {
                    return Err(EnvError::Parse {
                        line: line_no,
                        msg: "rect width and height must be positive".into(),
                    });
                }
                obstacles.extend([
                    Segment::new(x, y, x + w, y),
                    Segment::new(x + w, y, x + w, y + h),
                    Segment::new(x + w, y + h, x, y + h),
                    Segment::new(x, y + h, x, y),
                ]);
            }
            other => {
                return Err(EnvError::Parse {
                    line: line_no,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let missing = |field: &'static str| invalid(field, "missing");
    let (goal_center, goal_radius) = goal.ok_or_else(|| missing("goal"))?;
    let spec = EnvironmentSpec {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        width: width.ok_or_else(|| missing("width"))?,
        height: height.ok_or_else(|| missing("height"))?,
        obstacles,
        goal_center,
        goal_radius,
        start: start.ok_or_else(|| missing("start"))?,
    };
    spec.validate()?;
    Ok(spec)
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<(), EnvError> {
    if slot.is_some() {
        return Err(EnvError::Parse {
            line,
            msg: format!("`{key}` given more than once"),
        });
    }
    *slot = Some(value);
    Ok(())
}

pub fn load_environment(path: impl AsRef<Path>) -> Result<EnvironmentSpec, EnvError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut spec = parse_environment(&text)?;
    if spec.name == "unnamed" {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            spec.name = stem.to_string();
        }
    }
    Ok(spec)
}
