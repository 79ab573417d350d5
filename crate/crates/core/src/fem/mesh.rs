use std::fmt::Write as _;

use crate::medium::MediumConfig;
use crate::{Error, Result};

/// Nodes of a 1D mesh on `[a₋, a₊]` with a node at the interface `x = 0`.
///
/// Degrees of freedom are the interior nodes; the two boundary nodes carry the
/// homogeneous Dirichlet condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    interface: usize,
}

impl Mesh {
    /// Validates and wraps a node list.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::DegenerateDomain(format!("{} nodes, need at least 3", nodes.len())));
        }
        if !nodes.iter().all(|x| x.is_finite()) {
            return Err(Error::DegenerateDomain("non-finite node".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::DegenerateDomain(format!("nodes not increasing at {} -> {}", w[0], w[1])));
        }
        let interface = nodes.iter().position(|&x| x == 0.0).ok_or(Error::MissingInterfaceNode)?;
        if interface == 0 || interface == nodes.len() - 1 {
            return Err(Error::DegenerateDomain("interface node on the boundary".into()));
        }
        Ok(Self { nodes, interface })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Index of the node at `x = 0`.
    pub fn interface_index(&self) -> usize {
        self.interface
    }

    pub fn num_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of interior nodes.
    pub fn num_dofs(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn a_minus(&self) -> f64 {
        self.nodes[0]
    }

    pub fn a_plus(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn element_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    pub fn min_element(&self) -> f64 {
        self.element_lengths().fold(f64::INFINITY, f64::min)
    }

    pub fn max_element(&self) -> f64 {
        self.element_lengths().fold(0.0, f64::max)
    }

    /// Nodal values of `f` at the interior nodes.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes[1..self.nodes.len() - 1].iter().map(|&x| f(x)).collect()
    }

    /// DOF vector extended by the two zero boundary values.
    pub fn with_boundary(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.num_dofs(), "DOF vector length");
        let mut full = Vec::with_capacity(u.len() + 2);
        full.push(0.0);
        full.extend_from_slice(u);
        full.push(0.0);
        full
    }

    /// Element containing `x`, together with the barycentric weight of its right node.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !(x >= self.a_minus() && x <= self.a_plus()) {
            return Err(Error::OutOfDomain { x, a_minus: self.a_minus(), a_plus: self.a_plus() });
        }
        let e = match self.nodes.partition_point(|&n| n <= x) {
            0 => 0,
            p => (p - 1).min(self.num_elements() - 1),
        };
        let (x0, x1) = (self.nodes[e], self.nodes[e + 1]);
        Ok((e, (x - x0) / (x1 - x0)))
    }

    /// Piecewise-linear evaluation of the DOF vector `u` at `x`.
    pub fn eval(&self, u: &[f64], x: f64) -> Result<f64> {
        let (e, t) = self.locate(x)?;
        let value = |i: usize| if i == 0 || i == self.nodes.len() - 1 { 0.0 } else { u[i - 1] };
        Ok((1.0 - t) * value(e) + t * value(e + 1))
    }

    /// Plain-text form: a header line `mesh <count>` followed by one node per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("mesh {}\n", self.nodes.len());
        for x in &self.nodes {
            writeln!(s, "{x:e}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty mesh file".into()))?;
        let count: usize = header
            .strip_prefix("mesh ")
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad mesh header {header:?}")))?;
        let nodes = lines
            .map(|l| l.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{l:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if nodes.len() != count {
            return Err(Error::DimensionMismatch { expected: count, found: nodes.len() });
        }
        Self::new(nodes)
    }
}

/// Uniform partition of each subdomain with step at most `h` and a node at 0,
/// followed by `refine_levels` rounds of bisecting every element whose
/// distance to the interface is smaller than `refine_radius`.
pub fn build_mesh(cfg: &MediumConfig, h: f64, refine_radius: f64, refine_levels: usize) -> Result<Mesh> {
    cfg.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig(format!("mesh size must be positive, got {h}")));
    }
    if !(refine_radius > 0.0) {
        return Err(Error::InvalidConfig(format!("refine radius must be positive, got {refine_radius}")));
    }
    let count = |len: f64| ((len / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let (lm, lp) = (cfg.a_minus.abs(), cfg.a_plus);
    let (nm, np) = (count(lm), count(lp));
    let mut nodes = Vec::with_capacity(nm + np + 1);
    nodes.extend((0..nm).map(|i| -lm * (nm - i) as f64 / nm as f64));
    nodes.push(0.0);
    nodes.extend((1..=np).map(|i| lp * i as f64 / np as f64));
    for _ in 0..refine_levels {
        nodes = refine_once(&nodes, refine_radius);
    }
    Mesh::new(nodes)
}

fn refine_once(nodes: &[f64], radius: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nodes.len() * 2);
    out.push(nodes[0]);
    for w in nodes.windows(2) {
        if w[0].abs().min(w[1].abs()) < radius {
            out.push(0.5 * (w[0] + w[1]));
        }
        out.push(w[1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_mesh_smallest_element() {
        let cfg = MediumConfig::default();
        let mesh = build_mesh(&cfg, 2f64.powi(-9), 0.1, 5).unwrap();
        assert_eq!(mesh.min_element(), 2f64.powi(-14));
        assert_eq!(mesh.max_element(), 2f64.powi(-9));
        assert_eq!(mesh.nodes()[mesh.interface_index()], 0.0);
    }

    #[test]
    fn unrefined_is_uniform() {
        let cfg = MediumConfig { a_minus: -3.0, ..MediumConfig::default() };
        let mesh = build_mesh(&cfg, 0.4, 0.1, 0).unwrap();
        // ceil(3/0.4) = 8 and ceil(5/0.4) = 13 elements
        assert_eq!(mesh.num_elements(), 21);
        assert_eq!(mesh.interface_index(), 8);
        assert!(mesh.element_lengths().all(|l| l <= 0.4 + 1e-15));
        assert_eq!(mesh.a_minus(), -3.0);
        assert_eq!(mesh.a_plus(), 5.0);
    }

    /// Number of elements that the next refinement round splits.
    fn elements_near_interface(nodes: &[f64], radius: f64) -> usize {
        nodes.windows(2).filter(|w| w[0].abs().min(w[1].abs()) < radius).count()
    }

    #[test]
    fn node_count_is_base_plus_refined_elements() {
        let cfg = MediumConfig::default();
        let (h, r) = (2f64.powi(-4), 0.3);
        let mut nodes = build_mesh(&cfg, h, r, 0).unwrap().nodes().to_vec();
        let mut expected = nodes.len();
        for levels in 1..=4 {
            expected += elements_near_interface(&nodes, r);
            nodes = refine_once(&nodes, r);
            assert_eq!(build_mesh(&cfg, h, r, levels).unwrap().nodes().len(), expected);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = MediumConfig::default();
        assert!(build_mesh(&cfg, 0.0, 0.1, 1).is_err());
        assert!(build_mesh(&cfg, 0.1, -1.0, 1).is_err());
        assert!(matches!(Mesh::new(vec![-1.0, 0.5, 1.0]), Err(Error::MissingInterfaceNode)));
        assert!(Mesh::new(vec![-1.0, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn evaluation_and_location() {
        let mesh = Mesh::new(vec![-1.0, -0.5, 0.0, 1.0]).unwrap();
        let u = [2.0, 4.0];
        assert_eq!(mesh.eval(&u, -1.0).unwrap(), 0.0);
        assert_eq!(mesh.eval(&u, -0.75).unwrap(), 1.0);
        assert_eq!(mesh.eval(&u, 0.0).unwrap(), 4.0);
        assert_eq!(mesh.eval(&u, 0.5).unwrap(), 2.0);
        assert_eq!(mesh.eval(&u, 1.0).unwrap(), 0.0);
        assert!(mesh.eval(&u, 1.5).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let mesh = build_mesh(&MediumConfig::default(), 0.37, 0.5, 3).unwrap();
        assert_eq!(Mesh::from_text(&mesh.to_text()).unwrap(), mesh);
        assert!(Mesh::from_text("mesh 3\n0\n1\n").is_err());
    }
}
