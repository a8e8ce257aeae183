use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamKey;

/// What a weight is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// The single vertex weight at `(1, 1)`: `T_{1,1}` or `log w_{1,1}`.
    Origin,
    /// Edge from `(i-1, j)` to `(i, j)`, defined for `i >= 2`.
    Horizontal,
    /// Edge from `(i, j-1)` to `(i, j)`, defined for `j >= 2`.
    Vertical,
    /// Polymer vertex weight `log w_{i,j}` away from the origin.
    Vertex,
}

impl Role {
    pub fn admits(self, i: usize, j: usize) -> bool {
        match self {
            Role::Origin => i == 1 && j == 1,
            Role::Horizontal => i >= 2 && j >= 1,
            Role::Vertical => i >= 1 && j >= 2,
            Role::Vertex => i >= 1 && j >= 1 && (i, j) != (1, 1),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Origin => "origin",
            Role::Horizontal => "U",
            Role::Vertical => "V",
            Role::Vertex => "w",
        })
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" | "O" => Ok(Role::Origin),
            "U" | "h" | "horizontal" => Ok(Role::Horizontal),
            "V" | "v" | "vertical" => Ok(Role::Vertical),
            "w" | "W" | "vertex" => Ok(Role::Vertex),
            other => Err(Error::Input(format!("unknown weight role `{other}`"))),
        }
    }
}

/// Explicit weights on a declared `m x n` rectangle, in the additive units
/// the recursions consume (`log w` for the polymer). Multi-edge copies are
/// numbered from 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightTable {
    m: usize,
    n: usize,
    entries: HashMap<(usize, usize, Role, usize), f64>,
}

impl WeightTable {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Shape(format!("rectangle {m}x{n} is empty")));
        }
        Ok(WeightTable {
            m,
            n,
            entries: HashMap::new(),
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn set(&mut self, i: usize, j: usize, role: Role, value: f64) -> Result<&mut Self> {
        self.set_copy(i, j, role, 1, value)
    }

    pub fn set_copy(&mut self, i: usize, j: usize, role: Role, copy: usize, value: f64) -> Result<&mut Self> {
        if i == 0 || j == 0 || i > self.m || j > self.n {
            return Err(Error::Shape(format!(
                "({i},{j}) lies outside the declared {}x{} rectangle",
                self.m, self.n
            )));
        }
        if !role.admits(i, j) {
            return Err(Error::Shape(format!("role {role} is not defined at ({i},{j})")));
        }
        if copy == 0 {
            return Err(Error::Shape("multi-edge copies are numbered from 1".into()));
        }
        if !value.is_finite() {
            return Err(Error::Input(format!("weight {role}({i},{j}) is not finite")));
        }
        self.entries.insert((i, j, role, copy), value);
        Ok(self)
    }

    pub fn get(&self, i: usize, j: usize, role: Role) -> Result<f64> {
        self.get_copy(i, j, role, 1)
    }

    pub fn get_copy(&self, i: usize, j: usize, role: Role, copy: usize) -> Result<f64> {
        self.entries
            .get(&(i, j, role, copy))
            .copied()
            .ok_or_else(|| Error::Shape(format!("missing weight {role}({i},{j}) copy {copy}")))
    }

    /// Maximum over copies `1..=copies` of one multi-edge.
    pub fn max_over_copies(&self, i: usize, j: usize, role: Role, copies: usize) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for c in 1..=copies {
            best = best.max(self.get_copy(i, j, role, c)?);
        }
        Ok(best)
    }

    /// Gumbel-LPP table coupled to a polymer table along the boundary:
    /// `T_{1,1} = log w_{1,1}`, `U_{i,1} = log w_{i,1}`, `V_{1,j} = log w_{1,j}`.
    /// Bulk edges are left unset.
    pub fn boundary_coupled_lpp(polymer: &WeightTable) -> Result<WeightTable> {
        let (m, n) = polymer.dims();
        let mut t = WeightTable::new(m, n)?;
        t.set(1, 1, Role::Origin, polymer.get(1, 1, Role::Origin)?)?;
        for i in 2..=m {
            t.set(i, 1, Role::Horizontal, polymer.get(i, 1, Role::Vertex)?)?;
        }
        for j in 2..=n {
            t.set(1, j, Role::Vertical, polymer.get(1, j, Role::Vertex)?)?;
        }
        Ok(t)
    }

    /// Parses the comma-separated table format:
    ///
    /// ```text
    /// # comment
    /// rect,3,3
    /// m,n,role,copy,value
    /// 1,1,origin,0.25
    /// 2,1,U,2,-0.4
    /// ```
    ///
    /// `rect` declares the rectangle (otherwise the bounding box of the entries
    /// is used), the `m,n,...` header is optional, and the copy column may be
    /// omitted (copy 1).
    pub fn parse(text: &str) -> Result<Self> {
        let mut rect = None;
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |msg: &str| Error::Input(format!("weight table line {}: {msg}", lineno + 1));
            match fields[0] {
                "rect" => {
                    if fields.len() != 3 || rect.is_some() {
                        return Err(bad("expected a single `rect,m,n` line"));
                    }
                    let m = fields[1].parse().map_err(|_| bad("bad rectangle height"))?;
                    let n = fields[2].parse().map_err(|_| bad("bad rectangle width"))?;
                    rect = Some((m, n));
                }
                "m" => {}
                _ => {
                    let (copy, value) = match fields.len() {
                        4 => ("1", fields[3]),
                        5 => (fields[3], fields[4]),
                        _ => return Err(bad("expected m,n,role[,copy],value")),
                    };
                    let i: usize = fields[0].parse().map_err(|_| bad("bad coordinate m"))?;
                    let j: usize = fields[1].parse().map_err(|_| bad("bad coordinate n"))?;
                    let role: Role = fields[2].parse().map_err(|e: Error| bad(&e.to_string()))?;
                    let copy: usize = copy.parse().map_err(|_| bad("bad copy index"))?;
                    let value: f64 = value.parse().map_err(|_| bad("bad value"))?;
                    rows.push((lineno + 1, i, j, role, copy, value));
                }
            }
        }
        let (m, n) = match rect {
            Some(r) => r,
            None => rows
                .iter()
                .fold((0, 0), |(m, n), r| (m.max(r.1), n.max(r.2))),
        };
        let mut table = WeightTable::new(m, n)?;
        for (line, i, j, role, copy, value) in rows {
            table
                .set_copy(i, j, role, copy, value)
                .map_err(|e| Error::Input(format!("weight table line {line}: {e}")))?;
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        WeightTable::parse(&text)
    }

    pub fn write(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "rect,{},{}", self.m, self.n)?;
        writeln!(out, "m,n,role,copy,value")?;
        let mut keys: Vec<_> = self.entries.keys().copied().collect();
        keys.sort();
        for k in keys {
            writeln!(out, "{},{},{},{},{:e}", k.0, k.1, k.2, k.3, self.entries[&k])?;
        }
        Ok(())
    }
}

/// Source of lattice weights.
///
/// A sampled field draws every weight from its own sub-stream keyed by
/// `(sample key, coordinate, role)`, so values do not depend on the order in
/// which a grid is evaluated. The law is fixed by the model that reads the
/// field: Gumbel for Gumbel LPP, `log` of inverse gamma for the polymer, the
/// configured multi-edge law for multi-edge LPP.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightField {
    Sampled(StreamKey),
    Injected(WeightTable),
}

impl From<WeightTable> for WeightField {
    fn from(t: WeightTable) -> Self {
        WeightField::Injected(t)
    }
}

impl From<StreamKey> for WeightField {
    fn from(k: StreamKey) -> Self {
        WeightField::Sampled(k)
    }
}
