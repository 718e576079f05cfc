use super::{CombinatorialDrawing, Violation};

/// Directed half of a planarization segment: `2·segment + dir`, where
/// `dir = 0` walks the segment in its stored direction.
pub type Dart = usize;

/// The plane graph obtained by turning each crossing into a degree-4 vertex.
/// Vertices `0..n` are the original ones, `n + c` is the dummy of crossing `c`.
#[derive(Clone, Debug)]
pub struct Planarization {
    original: usize,
    vertices: usize,
    segments: Vec<(usize, usize)>,
    segment_edge: Vec<usize>,
    rotation: Vec<Vec<Dart>>,
    faces: Vec<Vec<Dart>>,
    components: usize,
}

impl Planarization {
    pub(super) fn build(d: &CombinatorialDrawing) -> Result<Self, Violation> {
        let g = d.graph();
        let n = g.n();
        let c = d.crossings().len();
        let mut segments = Vec::new();
        let mut segment_edge = Vec::new();
        // first/last segment of each edge, and the segments on both sides of each crossing along each edge
        let mut first_seg = vec![0; g.m()];
        let mut last_seg = vec![0; g.m()];
        // around[c][i] = (segment before, segment after) along crossing edge i
        let mut around = vec![[(usize::MAX, usize::MAX); 2]; c];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let mut prev = u;
            first_seg[e] = segments.len();
            for &x in d.edge_crossings(e) {
                let slot = usize::from(d.crossings()[x].edges[0] != e);
                let s = segments.len();
                segments.push((prev, n + x));
                segment_edge.push(e);
                around[x][slot].0 = s;
                if prev >= n {
                    let px = prev - n;
                    let pslot = usize::from(d.crossings()[px].edges[0] != e);
                    around[px][pslot].1 = s;
                }
                prev = n + x;
            }
            last_seg[e] = segments.len();
            segments.push((prev, v));
            segment_edge.push(e);
            if prev >= n {
                let px = prev - n;
                let pslot = usize::from(d.crossings()[px].edges[0] != e);
                around[px][pslot].1 = last_seg[e];
            }
        }
        let mut rotation = vec![Vec::new(); n + c];
        for v in 0..n {
            rotation[v] = d
                .rotation(v)
                .iter()
                .map(|&e| if g.edges()[e].0 == v { 2 * first_seg[e] } else { 2 * last_seg[e] + 1 })
                .collect();
        }
        for (x, cr) in d.crossings().iter().enumerate() {
            let [(a_in, a_out), (b_in, b_out)] = around[x];
            // darts leaving the dummy: forward = stored direction of the next segment
            let (a_plus, a_minus) = (2 * a_out, 2 * a_in + 1);
            let (b_plus, b_minus) = (2 * b_out, 2 * b_in + 1);
            rotation[n + x] = if cr.left_to_right {
                vec![a_plus, b_plus, a_minus, b_minus]
            } else {
                vec![a_plus, b_minus, a_minus, b_plus]
            };
        }
        let mut p = Planarization {
            original: n,
            vertices: n + c,
            segments,
            segment_edge,
            rotation,
            faces: Vec::new(),
            components: 0,
        };
        p.trace();
        if !p.euler_holds() {
            return Err(Violation::Unrealizable);
        }
        Ok(p)
    }

    pub fn tail(&self, d: Dart) -> usize {
        let (a, b) = self.segments[d / 2];
        if d.is_multiple_of(2) { a } else { b }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d ^ 1)
    }

    fn trace(&mut self) {
        let darts = 2 * self.segments.len();
        let mut pos = vec![0; darts];
        for rot in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                pos[d] = i;
            }
        }
        let mut used = vec![false; darts];
        let mut faces = Vec::new();
        for start in 0..darts {
            if used[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !used[d] {
                used[d] = true;
                face.push(d);
                let back = d ^ 1;
                let rot = &self.rotation[self.head(d)];
                d = rot[(pos[back] + 1) % rot.len()];
            }
            faces.push(face);
        }
        self.faces = faces;
        self.components = self.component_labels().1;
    }

    fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.vertices];
        let mut count = 0;
        for s in 0..self.vertices {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &d in &self.rotation[v] {
                    let w = self.head(d);
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// `V − E + F = 2` on every component, with faces traced from the rotation
    /// system and an isolated vertex counting one face.
    fn euler_holds(&self) -> bool {
        let (label, count) = self.component_labels();
        let mut v = vec![0i64; count];
        let mut e = vec![0i64; count];
        let mut f = vec![0i64; count];
        for x in 0..self.vertices {
            v[label[x]] += 1;
            if self.rotation[x].is_empty() {
                f[label[x]] += 1;
            }
        }
        for &(a, _) in &self.segments {
            e[label[a]] += 1;
        }
        for face in &self.faces {
            f[label[self.tail(face[0])]] += 1;
        }
        (0..count).all(|i| v[i] - e[i] + f[i] == 2)
    }

    pub fn original_vertex_count(&self) -> usize {
        self.original
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn segments(&self) -> &[(usize, usize)] {
        &self.segments
    }

    pub fn segment_edge(&self, s: usize) -> usize {
        self.segment_edge[s]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    /// Face boundary walks; isolated vertices have none.
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Faces on the sphere with components unnested: `Σ F_i − (C − 1)` plus
    /// one face per isolated vertex.
    pub fn sphere_face_count(&self) -> usize {
        let isolated = self.rotation.iter().filter(|r| r.is_empty()).count();
        self.faces.len() + isolated + 1 - self.components.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{k5_one_crossing, planar_k4};


    #[test]
    fn crossing_free_planarization_is_the_embedding() {
        let d = planar_k4();
        let p = d.planarize().unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.segment_count(), 6);
        assert_eq!(p.faces().len(), 4);
        for v in 0..4 {
            let edges: Vec<usize> = p.rotation(v).iter().map(|&dt| p.segment_edge(dt / 2)).collect();
            assert_eq!(edges, d.rotation(v));
        }
    }

    #[test]
    fn euler_with_components() {
        let d = k5_one_crossing().disjoint_union(&planar_k4());
        let p = d.planarize().unwrap();
        assert_eq!(p.component_count(), 2);
        let (v, e, f) = (p.vertex_count() as i64, p.segment_count() as i64, p.sphere_face_count() as i64);
        assert_eq!(v - e + f, 1 + 2);
    }

    #[test]
    fn dummy_vertices_alternate() {
        let p = k5_one_crossing().planarize().unwrap();
        let r = p.rotation(5);
        assert_eq!(r.len(), 4);
        assert_eq!(p.segment_edge(r[0] / 2), p.segment_edge(r[2] / 2));
        assert_eq!(p.segment_edge(r[1] / 2), p.segment_edge(r[3] / 2));
        assert_ne!(p.segment_edge(r[0] / 2), p.segment_edge(r[1] / 2));
    }
}
