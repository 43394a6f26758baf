//! Trivalent spin networks: coupling trees drawn as graphs whose interior edges
//! carry `j` labels and whose vertices are Clebsch-Gordan intertwiners.
//!
//! Edges are oriented from children to parent, so every vertex has two incoming
//! edges and one outgoing edge, and its intertwiner is `C(j_a m_a; j_b m_b | j m)`
//! with `a` the left child.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::am::{clebsch_gordan, CgQuery};
use crate::composite::{Basis, CouplingTree, Particle, ParticleSystem, StateVector};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::{CVector, Complex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    /// A particle's free edge, carrying its spin.
    Fixed,
    /// An interior edge, possibly in superposition.
    Quantum,
    /// The free total edge after rotation averaging.
    Superselected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Edge {
    pub name: String,
    /// Vertex the edge leaves; `None` for a particle's free end.
    pub tail: Option<usize>,
    /// Vertex the edge enters; `None` for the total edge's free end.
    pub head: Option<usize>,
    pub kind: EdgeKind,
    /// Set for fixed edges.
    pub j: Option<HalfInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub name: String,
    pub incoming: [usize; 2],
    pub outgoing: usize,
}

/// `j` labels for every interior edge and the total edge, plus the total projection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Assignment {
    pub labels: BTreeMap<String, HalfInt>,
    pub m: HalfInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinNetwork {
    tree: CouplingTree,
    particles: Vec<Particle>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    product: Option<CVector>,
    amplitudes: BTreeMap<Assignment, Complex>,
}

fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    HalfInt::triangle(a, b, c) && (a.twice() + b.twice() + c.twice()) % 2 == 0
}

/// Leaf positions with their projections, and the product of CG weights.
type Expansion = (Vec<(usize, HalfInt)>, f64);

impl SpinNetwork {
    /// The graph of `tree`, which must be a pair covering every particle of `sys`.
    pub fn from_coupling_tree(sys: &ParticleSystem, tree: &CouplingTree) -> Result<Self> {
        if matches!(tree, CouplingTree::Leaf(_)) {
            return Err(Error::Tree("a spin network needs at least one coupling".into()));
        }
        let leaves = tree.leaves();
        if leaves.len() != sys.particles().len() {
            return Err(Error::Tree(format!("tree {tree} does not cover every particle")));
        }
        for l in &leaves {
            sys.position(l)?;
        }
        let mut edges: Vec<Edge> = Vec::new();
        let mut vertices = Vec::new();
        let mut edge_of: BTreeMap<String, usize> = BTreeMap::new();
        for p in sys.particles() {
            edge_of.insert(p.label.clone(), edges.len());
            edges.push(Edge { name: p.label.clone(), tail: None, head: None, kind: EdgeKind::Fixed, j: Some(p.spin) });
        }
        let nodes = tree.nodes();
        for (vi, node) in nodes.iter().enumerate() {
            let CouplingTree::Pair(a, b) = node else { unreachable!("nodes are pairs") };
            let incoming = [edge_of[&a.name()], edge_of[&b.name()]];
            for &e in &incoming {
                edges[e].head = Some(vi);
            }
            let root = vi + 1 == nodes.len();
            let kind = if root { EdgeKind::Superselected } else { EdgeKind::Quantum };
            edge_of.insert(node.name(), edges.len());
            edges.push(Edge { name: node.name(), tail: Some(vi), head: None, kind, j: None });
            vertices.push(Vertex { name: node.name(), incoming, outgoing: edges.len() - 1 });
        }
        Ok(SpinNetwork {
            tree: tree.clone(),
            particles: sys.particles().to_vec(),
            vertices,
            edges,
            product: None,
            amplitudes: BTreeMap::new(),
        })
    }

    /// Attaches a product-basis state and tabulates its graph amplitudes.
    pub fn with_state(mut self, psi: &StateVector) -> Result<Self> {
        let sys = ParticleSystem::new(self.particles.iter().map(|p| (p.label.clone(), p.spin)))?;
        if psi.basis() != &Basis::product(&sys) {
            return Err(Error::SpaceMismatch("state must live on the network's product basis".into()));
        }
        self.product = Some(psi.amplitudes().clone());
        let mut table = BTreeMap::new();
        for a in self.assignments() {
            let z = self.amplitude(&a)?;
            if z.norm() > 1e-15 {
                table.insert(a, z);
            }
        }
        self.amplitudes = table;
        Ok(self)
    }

    pub fn tree(&self) -> &CouplingTree {
        &self.tree
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, name: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.name == name)
    }

    /// Nonzero amplitudes by assignment.
    pub fn amplitudes(&self) -> &BTreeMap<Assignment, Complex> {
        &self.amplitudes
    }

    pub fn total_edge(&self) -> &Edge {
        &self.edges[self.vertices.last().expect("at least one vertex").outgoing]
    }

    fn fixed_spin(&self, name: &str) -> Option<HalfInt> {
        self.particles.iter().find(|p| p.label == name).map(|p| p.spin)
    }

    fn spin_of(&self, name: &str, a: &Assignment) -> HalfInt {
        self.fixed_spin(name).unwrap_or_else(|| a.labels[name])
    }

    fn check(&self, a: &Assignment) -> Result<()> {
        let want: Vec<&str> = self.vertices.iter().map(|v| v.name.as_str()).collect();
        let have: Vec<&str> = a.labels.keys().map(String::as_str).collect();
        let mut sorted = want.clone();
        sorted.sort_unstable();
        if sorted != have {
            return Err(Error::Network(format!("assignment labels {have:?} do not match edges {want:?}")));
        }
        for (name, j) in &a.labels {
            if j.twice() < 0 {
                return Err(Error::Network(format!("negative label {j} on edge {name}")));
            }
        }
        let total = a.labels[&self.total_edge().name];
        if (total.twice() - a.m.twice()) % 2 != 0 {
            return Err(Error::Network(format!("projection {} incompatible with total {total}", a.m)));
        }
        Ok(())
    }

    /// Whether every vertex satisfies the triangle rule under `a`.
    pub fn admissible(&self, a: &Assignment) -> bool {
        let total = self.spin_of(&self.total_edge().name, a);
        a.m.abs() <= total
            && self.vertices.iter().all(|v| {
                let [x, y] = v.incoming.map(|e| self.spin_of(&self.edges[e].name, a));
                triangle_ok(x, y, self.spin_of(&v.name, a))
            })
    }

    /// Every admissible assignment, in a fixed order.
    pub fn assignments(&self) -> Vec<Assignment> {
        fn labels(tree: &CouplingTree, net: &SpinNetwork) -> Vec<(HalfInt, BTreeMap<String, HalfInt>)> {
            match tree {
                CouplingTree::Leaf(l) => vec![(net.fixed_spin(l).expect("leaf"), BTreeMap::new())],
                CouplingTree::Pair(a, b) => {
                    let mut out = Vec::new();
                    for (ja, la) in labels(a, net) {
                        for (jb, lb) in labels(b, net) {
                            for j in HalfInt::couplings(ja, jb) {
                                let mut l = la.clone();
                                l.extend(lb.clone());
                                l.insert(tree.name(), j);
                                out.push((j, l));
                            }
                        }
                    }
                    out
                }
            }
        }
        let mut out = Vec::new();
        for (j, l) in labels(&self.tree, self) {
            for m in j.projections() {
                out.push(Assignment { labels: l.clone(), m });
            }
        }
        out
    }

    /// Coefficient of the basis graph `a` in the network's state.
    ///
    /// With a product state attached this contracts the leaf amplitudes through
    /// the intertwiners; otherwise it reads the stored table.
    pub fn amplitude(&self, a: &Assignment) -> Result<Complex> {
        self.check(a)?;
        if !self.admissible(a) {
            return Ok(Complex::new(0.0, 0.0));
        }
        let Some(psi) = &self.product else {
            return Ok(self.amplitudes.get(a).copied().unwrap_or_default());
        };
        let dims: Vec<usize> = self.particles.iter().map(|p| p.spin.dim()).collect();
        let position = |label: &str| self.particles.iter().position(|p| p.label == label).expect("leaf");
        let mut total = Complex::new(0.0, 0.0);
        for (config, coef) in self.expand(&self.tree, a.m, a, &position)? {
            let mut index = 0;
            let mut locals = vec![0; dims.len()];
            for (pos, m) in config {
                locals[pos] = self.particles[pos].spin.index_of(m).expect("valid projection");
            }
            for (k, &l) in locals.iter().enumerate() {
                index = index * dims[k] + l;
            }
            total += psi[index] * coef;
        }
        Ok(total)
    }

    /// Leaf projections and weights of `|j_node, m>` for the labels in `a`.
    fn expand(
        &self,
        node: &CouplingTree,
        m: HalfInt,
        a: &Assignment,
        position: &dyn Fn(&str) -> usize,
    ) -> Result<Vec<Expansion>> {
        match node {
            CouplingTree::Leaf(l) => {
                let j = self.fixed_spin(l).expect("leaf");
                Ok(if m.abs() <= j { vec![(vec![(position(l), m)], 1.0)] } else { vec![] })
            }
            CouplingTree::Pair(x, y) => {
                let j = self.spin_of(&node.name(), a);
                let (jx, jy) = (self.spin_of(&x.name(), a), self.spin_of(&y.name(), a));
                let mut out = Vec::new();
                for mx in jx.projections() {
                    let my = m - mx;
                    if my.abs() > jy {
                        continue;
                    }
                    let cg: f64 = clebsch_gordan(&CgQuery::new(jx, mx, jy, my, j, m))?;
                    if cg == 0.0 {
                        continue;
                    }
                    let left = self.expand(x, mx, a, position)?;
                    let right = self.expand(y, my, a, position)?;
                    for (lc, lw) in &left {
                        for (rc, rw) in &right {
                            let mut c = lc.clone();
                            c.extend(rc.iter().copied());
                            out.push((c, cg * lw * rw));
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// One JSON object per line: the tree, then vertices, edges and amplitudes.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut lines = vec![serde_json::json!({"record": "network", "tree": self.tree.to_string()})];
        for (i, v) in self.vertices.iter().enumerate() {
            lines.push(serde_json::json!({"record": "vertex", "id": i, "vertex": v}));
        }
        for (i, e) in self.edges.iter().enumerate() {
            lines.push(serde_json::json!({"record": "edge", "id": i, "edge": e}));
        }
        for (a, z) in &self.amplitudes {
            lines
                .push(serde_json::json!({"record": "amplitude", "labels": a.labels, "m": a.m, "re": z.re, "im": z.im}));
        }
        let mut out = String::new();
        for l in lines {
            out.push_str(&serde_json::to_string(&l).map_err(|e| Error::Parse(e.to_string()))?);
            out.push('\n');
        }
        Ok(out)
    }
}

/// The `j`-labelled toy Hamiltonian
/// `lambda [j1(j1+1) + j2(j2+1) - S(S+1) - M(M+1) - C(C+1) - N(N+1)]`
/// with `j1` on the `(S,M)` edge and `j2` on the `(C,N)` edge.
#[derive(Clone, Debug, PartialEq)]
pub struct JHamiltonian {
    lambda: f64,
    j1: String,
    j2: String,
    constant_x4: i64,
}

fn pair_edge(sn: &SpinNetwork, a: &str, b: &str) -> Result<String> {
    [format!("({a},{b})"), format!("({b},{a})")]
        .into_iter()
        .find(|n| sn.vertices.iter().any(|v| &v.name == n))
        .ok_or_else(|| Error::Network(format!("no edge coupling {a} and {b}")))
}

pub fn hamiltonian_in_j(sn: &SpinNetwork, lambda: f64) -> Result<JHamiltonian> {
    let mut constant_x4 = 0;
    for l in ["S", "M", "C", "N"] {
        let j = sn.fixed_spin(l).ok_or_else(|| Error::Network(format!("missing particle {l}")))?;
        constant_x4 += j.casimir_x4();
    }
    Ok(JHamiltonian { lambda, j1: pair_edge(sn, "S", "M")?, j2: pair_edge(sn, "C", "N")?, constant_x4 })
}

impl JHamiltonian {
    /// `4 [j1(j1+1) + j2(j2+1)]`, the exact label the time average preserves.
    pub fn superselection_key(&self, a: &Assignment) -> Result<i64> {
        let get = |n: &str| a.labels.get(n).copied().ok_or_else(|| Error::Network(format!("assignment lacks {n}")));
        Ok(get(&self.j1)?.casimir_x4() + get(&self.j2)?.casimir_x4())
    }

    pub fn energy(&self, a: &Assignment) -> Result<f64> {
        Ok(self.lambda * (self.superselection_key(a)? - self.constant_x4) as f64 / 4.0)
    }
}

/// One term of the averaged state: a pure multiplicity network, tensored with
/// the maximally mixed state of its total edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MixtureComponent {
    pub probability: f64,
    pub total: HalfInt,
    /// Projection of the pre-average state this term came from.
    pub source_m: HalfInt,
    pub energy_key: i64,
    pub network: SpinNetwork,
}

/// Rotation average followed by the energy superselection, as a probability-weighted
/// list of pure networks.
pub fn superselection_mixture(sn: &SpinNetwork, h: &JHamiltonian) -> Result<Vec<MixtureComponent>> {
    if sn.amplitudes.is_empty() {
        return Err(Error::Network("network carries no state".into()));
    }
    let root = sn.total_edge().name.clone();
    let mut groups: BTreeMap<(HalfInt, HalfInt, i64), BTreeMap<Assignment, Complex>> = BTreeMap::new();
    for (a, z) in &sn.amplitudes {
        let key = (a.labels[&root], a.m, h.superselection_key(a)?);
        groups.entry(key).or_default().insert(a.clone(), *z);
    }
    let mut out = Vec::new();
    for ((total, source_m, energy_key), amps) in groups.into_iter().rev() {
        let p: f64 = amps.values().map(|z| z.norm_sqr()).sum();
        let scale = Complex::new(1.0 / p.sqrt(), 0.0);
        let mut network = sn.clone();
        network.product = None;
        network.amplitudes = amps.into_iter().map(|(a, z)| (a, z * scale)).collect();
        out.push(MixtureComponent { probability: p, total, source_m, energy_key, network });
    }
    Ok(out)
}

/// `P(total)` summed over a mixture.
pub fn sector_probabilities(mixture: &[MixtureComponent]) -> BTreeMap<HalfInt, f64> {
    let mut out = BTreeMap::new();
    for c in mixture {
        *out.entry(c.total).or_insert(0.0) += c.probability;
    }
    out
}

/// The mixture as JSON lines: a header per component followed by its network.
pub fn mixture_to_json_lines(mixture: &[MixtureComponent]) -> Result<String> {
    let mut out = String::new();
    for c in mixture {
        let head = serde_json::json!({
            "record": "component",
            "probability": c.probability,
            "total": c.total,
            "source_m": c.source_m,
            "energy_key": c.energy_key,
        });
        out.push_str(&serde_json::to_string(&head).map_err(|e| Error::Parse(e.to_string()))?);
        out.push('\n');
        out.push_str(&c.network.to_json_lines()?);
    }
    Ok(out)
}
