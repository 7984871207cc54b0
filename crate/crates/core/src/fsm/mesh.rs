use std::collections::BTreeSet;

use super::FsmError;
use crate::geometry::ElementRole;

pub const DOF_PER_NODE: usize = 4;

/// Nodal degrees of freedom in global order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dof {
    /// Translation along global x.
    U = 0,
    /// Longitudinal (warping) translation.
    V = 1,
    /// Translation along global z.
    W = 2,
    /// Rotation about the member axis.
    Theta = 3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub a: usize,
    pub b: usize,
    pub t: f64,
    pub e: f64,
    pub nu: f64,
    /// Longitudinal compressive stress at unit load factor [MPa].
    pub stress: f64,
    pub role: ElementRole,
}

/// Cross-section discretized into strips. Global DOF `4·i + d` belongs to
/// node `i` and [`Dof`] `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripMesh {
    pub nodes: Vec<[f64; 2]>,
    pub strips: Vec<Strip>,
    /// Global DOF indices held at zero.
    pub fixed: BTreeSet<usize>,
}

impl StripMesh {
    pub fn new(nodes: Vec<[f64; 2]>, strips: Vec<Strip>) -> Self {
        Self {
            nodes,
            strips,
            fixed: BTreeSet::new(),
        }
    }

    /// Flat plate of width `b` on the x-axis split into `n` strips.
    pub fn plate(b: f64, t: f64, n: usize, e: f64, nu: f64) -> Self {
        let nodes = (0..=n).map(|i| [b * i as f64 / n as f64, 0.0]).collect();
        let strips = (0..n)
            .map(|i| Strip {
                a: i,
                b: i + 1,
                t,
                e,
                nu,
                stress: 1.0,
                role: ElementRole::Plate,
            })
            .collect();
        Self::new(nodes, strips)
    }

    /// Simply supported unloaded edges: out-of-plane translation held at
    /// both end nodes of a flat plate.
    pub fn with_simple_supports(mut self, nodes: &[usize]) -> Self {
        for &n in nodes {
            self.fix(n, Dof::W);
        }
        self
    }

    pub fn fix(&mut self, node: usize, dof: Dof) {
        self.fixed.insert(node * DOF_PER_NODE + dof as usize);
    }

    pub fn dof_count(&self) -> usize {
        self.nodes.len() * DOF_PER_NODE
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        (0..self.dof_count()).filter(|d| !self.fixed.contains(d)).collect()
    }

    pub fn width(&self, s: &Strip) -> f64 {
        let (p, q) = (self.nodes[s.a], self.nodes[s.b]);
        (q[0] - p[0]).hypot(q[1] - p[1])
    }

    /// Axial load at unit load factor: Σ σ·b·t [N].
    pub fn reference_load(&self) -> f64 {
        self.strips.iter().map(|s| s.stress * self.width(s) * s.t).sum()
    }

    pub fn scale_stress(&mut self, factor: f64) {
        for s in &mut self.strips {
            s.stress *= factor;
        }
    }

    /// Rigid rotation (radians) and translation of every node.
    pub fn transformed(&self, angle: f64, shift: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = self.clone();
        for p in &mut m.nodes {
            let [x, z] = *p;
            *p = [c * x - s * z + shift[0], s * x + c * z + shift[1]];
        }
        m
    }

    pub fn validate(&self) -> Result<(), FsmError> {
        if self.strips.is_empty() {
            return Err(FsmError::Geometry("mesh has no strips".into()));
        }
        for (i, s) in self.strips.iter().enumerate() {
            if s.a >= self.nodes.len() || s.b >= self.nodes.len() || s.a == s.b {
                return Err(FsmError::Geometry(format!("strip {i} has invalid nodes")));
            }
            let w = self.width(s);
            if !(w > 0.0 && s.t > 0.0 && s.e > 0.0) || !(-1.0 < s.nu && s.nu < 0.5) {
                return Err(FsmError::Geometry(format!(
                    "strip {i}: width {w}, t {}, E {}, nu {}",
                    s.t, s.e, s.nu
                )));
            }
        }
        // Union-find over strip connectivity.
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for s in &self.strips {
            let (ra, rb) = (root(&mut parent, s.a), root(&mut parent, s.b));
            parent[ra] = rb;
        }
        let r0 = root(&mut parent, 0);
        if let Some(lonely) = (0..self.nodes.len()).find(|&i| root(&mut parent, i) != r0) {
            return Err(FsmError::Disconnected(format!(
                "node {lonely} is not connected to node 0"
            )));
        }
        Ok(())
    }
}
