//! Ideal triangulations given by face gluings, with the derived combinatorics:
//! edge and vertex classes, orientation signs, and normal paths.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of face
//! `f` of tetrahedron `t` is `{tet, perm}` where `perm[v]` is the image of
//! vertex `v`; it carries face `f` onto face `perm[f]` of `tet`.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{edge_type, SIMPLEX_EDGES};

pub type Perm = [usize; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tetrahedron {
    pub gluings: [Gluing; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathStep {
    pub tet: usize,
    pub enter_face: usize,
    pub exit_face: usize,
}

impl PathStep {
    /// The edge between the entry and exit faces, sorted.
    pub fn passed_edge(&self) -> (usize, usize) {
        let mut rest = (0..4).filter(|&v| v != self.enter_face && v != self.exit_face);
        let a = rest.next().unwrap();
        let b = rest.next().unwrap();
        (a, b)
    }
}

/// A closed normal path: step `i` leaves through a face glued to the entry
/// face of step `i + 1`, cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalPath {
    pub steps: Vec<PathStep>,
}

impl NormalPath {
    pub fn new(steps: Vec<PathStep>) -> Self {
        NormalPath { steps }
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> NormalPath {
        NormalPath {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| PathStep {
                    tet: s.tet,
                    enter_face: s.exit_face,
                    exit_face: s.enter_face,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triangulation {
    pub name: String,
    pub tetrahedra: Vec<Tetrahedron>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cusp_paths: Option<Vec<NormalPath>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shapes: Option<Vec<[f64; 2]>>,
}

/// One tetrahedron edge in an edge class, directed consistently along the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub from: usize,
    pub to: usize,
}

impl EdgeIncidence {
    pub fn sorted(&self) -> (usize, usize) {
        (self.from.min(self.to), self.from.max(self.to))
    }

    /// `+1` when the class direction agrees with the vertex order of the tetrahedron.
    pub fn orientation(&self) -> i64 {
        if self.from < self.to {
            1
        } else {
            -1
        }
    }

    pub fn edge_type(&self) -> usize {
        edge_type(self.from, self.to).expect("incidence is a simplex edge")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub incidences: Vec<EdgeIncidence>,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.incidences.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    /// `(tet, vertex)` corners identified to this ideal vertex.
    pub corners: Vec<(usize, usize)>,
    /// Euler characteristic of the triangulated link; 0 for a torus cusp.
    pub link_euler_characteristic: i64,
}

/// The edge a path step passes, with its rotation sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pass {
    pub tet: usize,
    pub edge: (usize, usize),
    pub edge_type: usize,
    /// Vertex of the passed edge the path is seen from.
    pub near: usize,
    /// `+1` or `-1`, in the orientation of the whole complex.
    pub sense: i64,
}

fn inverse(p: &Perm) -> Perm {
    let mut inv = [0; 4];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn is_permutation(p: &Perm) -> bool {
    let mut seen = [false; 4];
    for &v in p {
        if v > 3 || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Sign of a permutation of `0..4` given as an image list.
pub fn perm_sign(p: &Perm) -> i64 {
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

pub fn edge_index(a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    SIMPLEX_EDGES
        .iter()
        .position(|&e| e == key)
        .expect("valid simplex edge")
}

pub fn parse_triangulation(document: &str) -> Result<Triangulation> {
    let t: Triangulation =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    t.validate()?;
    Ok(t)
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.tetrahedra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tetrahedra.is_empty()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> &Gluing {
        &self.tetrahedra[tet].gluings[face]
    }

    /// Shapes supplied in the document, if any.
    pub fn shape_hints(&self) -> Option<Vec<Complex64>> {
        self.shapes
            .as_ref()
            .map(|v| v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::Triangulation("no tetrahedra".into()));
        }
        for (t, tet) in self.tetrahedra.iter().enumerate() {
            for (f, g) in tet.gluings.iter().enumerate() {
                if g.tet >= n {
                    return Err(Error::Triangulation(format!(
                        "face {f} of tetrahedron {t} is glued to missing tetrahedron {}",
                        g.tet
                    )));
                }
                if !is_permutation(&g.perm) {
                    return Err(Error::Triangulation(format!(
                        "face {f} of tetrahedron {t}: {:?} is not a permutation",
                        g.perm
                    )));
                }
                let target = g.perm[f];
                if g.tet == t && target == f {
                    return Err(Error::Triangulation(format!(
                        "face {f} of tetrahedron {t} is glued to itself"
                    )));
                }
                let back = self.gluing(g.tet, target);
                if back.tet != t || back.perm != inverse(&g.perm) {
                    return Err(Error::Triangulation(format!(
                        "gluing of face {f} of tetrahedron {t} is not matched by an inverse \
                         gluing on face {target} of tetrahedron {}",
                        g.tet
                    )));
                }
            }
        }
        if let Some(shapes) = &self.shapes {
            if shapes.len() != n {
                return Err(Error::Triangulation(format!(
                    "{} shapes given for {n} tetrahedra",
                    shapes.len()
                )));
            }
        }
        if let Some(paths) = &self.cusp_paths {
            for (i, path) in paths.iter().enumerate() {
                self.check_path(path)
                    .map_err(|e| Error::Triangulation(format!("cusp path {i}: {e}")))?;
            }
        }
        self.orientation_signs()?;
        Ok(())
    }

    fn check_path(&self, path: &NormalPath) -> Result<()> {
        if path.is_empty() {
            return Err(Error::Triangulation("empty normal path".into()));
        }
        for (i, s) in path.steps.iter().enumerate() {
            if s.tet >= self.len() || s.enter_face > 3 || s.exit_face > 3 {
                return Err(Error::Triangulation(format!("step {i} is out of range")));
            }
            if s.enter_face == s.exit_face {
                return Err(Error::Triangulation(format!(
                    "step {i} enters and exits through the same face"
                )));
            }
            let next = path.steps[(i + 1) % path.len()];
            let g = self.gluing(s.tet, s.exit_face);
            if g.tet != next.tet || g.perm[s.exit_face] != next.enter_face {
                return Err(Error::Triangulation(format!(
                    "step {i} exits into face {} of tetrahedron {}, not the entry of the next step",
                    g.perm[s.exit_face], g.tet
                )));
            }
        }
        Ok(())
    }

    /// Signs `eps_t` such that glued faces cancel in the boundary of
    /// `sum eps_t Delta_t`; the first tetrahedron of each component gets `+1`.
    /// Every face gluing carries the vertex order of one face to that of the other.
    pub fn is_order_preserving(&self) -> bool {
        self.tetrahedra.iter().all(|tet| {
            tet.gluings.iter().enumerate().all(|(f, g)| {
                let images: Vec<usize> = (0..4).filter(|&v| v != f).map(|v| g.perm[v]).collect();
                images.windows(2).all(|w| w[0] < w[1])
            })
        })
    }

    pub fn orientation_signs(&self) -> Result<Vec<i64>> {
        let n = self.len();
        let mut eps = vec![0i64; n];
        for root in 0..n {
            if eps[root] != 0 {
                continue;
            }
            eps[root] = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(t) = queue.pop_front() {
                for g in &self.tetrahedra[t].gluings {
                    // an odd gluing map joins equally signed simplices
                    let want = -perm_sign(&g.perm) * eps[t];
                    if eps[g.tet] == 0 {
                        eps[g.tet] = want;
                        queue.push_back(g.tet);
                    } else if eps[g.tet] != want {
                        return Err(Error::Triangulation(
                            "complex is not orientable: gluing signs conflict".into(),
                        ));
                    }
                }
            }
        }
        Ok(eps)
    }

    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let n = self.len();
        let mut seen = vec![[false; 6]; n];
        let mut classes = Vec::new();
        for t in 0..n {
            for &(a, b) in &SIMPLEX_EDGES {
                if seen[t][edge_index(a, b)] {
                    continue;
                }
                seen[t][edge_index(a, b)] = true;
                let mut incidences = Vec::new();
                let mut queue = VecDeque::from([EdgeIncidence { tet: t, from: a, to: b }]);
                while let Some(inc) = queue.pop_front() {
                    incidences.push(inc);
                    for f in (0..4).filter(|&f| f != inc.from && f != inc.to) {
                        let g = self.gluing(inc.tet, f);
                        let (u, v) = (g.perm[inc.from], g.perm[inc.to]);
                        let idx = edge_index(u, v);
                        if !seen[g.tet][idx] {
                            seen[g.tet][idx] = true;
                            queue.push_back(EdgeIncidence { tet: g.tet, from: u, to: v });
                        }
                    }
                }
                classes.push(EdgeClass { incidences });
            }
        }
        classes
    }

    /// For each `(tet, edge index)`, the index of its edge class.
    pub fn edge_class_map(&self) -> Vec<[usize; 6]> {
        let mut map = vec![[usize::MAX; 6]; self.len()];
        for (c, class) in self.edge_classes().iter().enumerate() {
            for inc in &class.incidences {
                map[inc.tet][edge_index(inc.from, inc.to)] = c;
            }
        }
        map
    }

    /// For each `(tet, vertex)`, the index of its vertex class.
    pub fn vertex_class_map(&self) -> Vec<[usize; 4]> {
        let n = self.len();
        let mut map = vec![[usize::MAX; 4]; n];
        let mut next = 0;
        for t in 0..n {
            for v in 0..4 {
                if map[t][v] != usize::MAX {
                    continue;
                }
                map[t][v] = next;
                let mut queue = VecDeque::from([(t, v)]);
                while let Some((s, w)) = queue.pop_front() {
                    for f in (0..4).filter(|&f| f != w) {
                        let g = self.gluing(s, f);
                        let u = g.perm[w];
                        if map[g.tet][u] == usize::MAX {
                            map[g.tet][u] = next;
                            queue.push_back((g.tet, u));
                        }
                    }
                }
                next += 1;
            }
        }
        map
    }

    pub fn vertex_classes(&self) -> Vec<VertexClass> {
        let map = self.vertex_class_map();
        let count = map.iter().flatten().max().map_or(0, |m| m + 1);
        let mut corners = vec![Vec::new(); count];
        for (t, row) in map.iter().enumerate() {
            for (v, &c) in row.iter().enumerate() {
                corners[c].push((t, v));
            }
        }
        // link vertices are edge ends
        let mut link_vertices = vec![0i64; count];
        for class in self.edge_classes() {
            let inc = class.incidences[0];
            link_vertices[map[inc.tet][inc.from]] += 1;
            link_vertices[map[inc.tet][inc.to]] += 1;
        }
        corners
            .into_iter()
            .enumerate()
            .map(|(c, corners)| {
                let faces = corners.len() as i64;
                let edges = 3 * faces / 2;
                VertexClass {
                    link_euler_characteristic: link_vertices[c] - edges + faces,
                    corners,
                }
            })
            .collect()
    }

    /// The normal path circling an edge class once.
    pub fn edge_loop(&self, class: &EdgeClass) -> NormalPath {
        let start = class.incidences[0];
        let mut others = (0..4).filter(|&v| v != start.from && v != start.to);
        let c = others.next().unwrap();
        let d = others.next().unwrap();
        let mut steps = vec![PathStep { tet: start.tet, enter_face: c, exit_face: d }];
        let (mut u, mut v) = (start.from, start.to);
        loop {
            let last = *steps.last().unwrap();
            let g = self.gluing(last.tet, last.exit_face);
            let enter = g.perm[last.exit_face];
            (u, v) = (g.perm[u], g.perm[v]);
            if g.tet == start.tet && enter == c {
                break;
            }
            let exit = (0..4).find(|&w| w != u && w != v && w != enter).unwrap();
            steps.push(PathStep { tet: g.tet, enter_face: enter, exit_face: exit });
            assert!(steps.len() <= 6 * self.len(), "edge loop failed to close");
        }
        NormalPath { steps }
    }

    /// The edge each step passes, seen from a vertex carried along the path.
    ///
    /// `start_vertex` picks the viewing end of the first passed edge; by default
    /// the smaller end is tried first, then the larger. The rotation sense of a
    /// step is the sign of the vertex order `(near, far, exit, enter)` times the
    /// orientation sign of the tetrahedron.
    pub fn path_passes(&self, path: &NormalPath, start_vertex: Option<usize>) -> Result<Vec<Pass>> {
        self.check_path(path)?;
        let eps = self.orientation_signs()?;
        let (a, b) = path.steps[0].passed_edge();
        let candidates: Vec<usize> = match start_vertex {
            Some(v) if v == a || v == b => vec![v],
            Some(v) => {
                return Err(Error::Triangulation(format!(
                    "start vertex {v} is not on the first passed edge {a}{b}"
                )))
            }
            None => vec![a, b],
        };
        let mut last_err = None;
        for near in candidates {
            match self.track(path, near, &eps) {
                Ok(passes) => return Ok(passes),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap())
    }

    fn track(&self, path: &NormalPath, start: usize, eps: &[i64]) -> Result<Vec<Pass>> {
        let mut near = start;
        let mut out = Vec::with_capacity(path.len());
        for (i, s) in path.steps.iter().enumerate() {
            let edge = s.passed_edge();
            if near != edge.0 && near != edge.1 {
                return Err(Error::Triangulation(format!(
                    "path leaves the link of its viewing vertex at step {i}"
                )));
            }
            let far = if near == edge.0 { edge.1 } else { edge.0 };
            let sense = perm_sign(&[near, far, s.exit_face, s.enter_face]) * eps[s.tet];
            out.push(Pass {
                tet: s.tet,
                edge,
                edge_type: edge_type(edge.0, edge.1)?,
                near,
                sense,
            });
            near = self.gluing(s.tet, s.exit_face).perm[near];
        }
        if near != start {
            return Err(Error::Triangulation(
                "path does not close up around a single vertex".into(),
            ));
        }
        Ok(out)
    }

    /// The same complex with tetrahedron `t` renamed `relabel[t]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<Triangulation> {
        let n = self.len();
        let mut seen = vec![false; n];
        if relabel.len() != n || relabel.iter().any(|&r| r >= n || std::mem::replace(&mut seen[r], true)) {
            return Err(Error::Contract("relabeling is not a permutation".into()));
        }
        let mut tetrahedra = self.tetrahedra.clone();
        for (t, tet) in self.tetrahedra.iter().enumerate() {
            let mut new = tet.clone();
            for g in &mut new.gluings {
                g.tet = relabel[g.tet];
            }
            tetrahedra[relabel[t]] = new;
        }
        let cusp_paths = self.cusp_paths.as_ref().map(|paths| {
            paths
                .iter()
                .map(|p| NormalPath {
                    steps: p
                        .steps
                        .iter()
                        .map(|s| PathStep { tet: relabel[s.tet], ..*s })
                        .collect(),
                })
                .collect()
        });
        let shapes = self.shapes.as_ref().map(|s| {
            let mut out = s.clone();
            for (t, v) in s.iter().enumerate() {
                out[relabel[t]] = *v;
            }
            out
        });
        Ok(Triangulation {
            name: self.name.clone(),
            tetrahedra,
            cusp_paths,
            shapes,
        })
    }
}
