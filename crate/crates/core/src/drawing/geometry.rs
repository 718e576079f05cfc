use super::{CombinatorialDrawing, Crossing};
use crate::error::{Error, Result};
use crate::graph::Graph;

type Point = (f64, f64);

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

const EPS: f64 = 1e-9;

/// Reads off the combinatorial drawing of a straight-line drawing (y axis
/// pointing up). Fails on degenerate positions: coincident vertices, a vertex
/// on an edge, overlapping edges or three edges through one point.
pub fn from_straight_line(graph: Graph, coords: &[Point]) -> Result<CombinatorialDrawing> {
    if coords.len() != graph.n() {
        return Err(Error::Invalid(format!("{} coordinates for {} vertices", coords.len(), graph.n())));
    }
    let edges = graph.edges().to_vec();
    for (v, &p) in coords.iter().enumerate() {
        for &q in &coords[..v] {
            if (p.0 - q.0).abs() < EPS && (p.1 - q.1).abs() < EPS {
                return Err(Error::Invalid(format!("vertex {v} coincides with another vertex")));
            }
        }
        for &(a, b) in &edges {
            if a != v && b != v && on_segment(coords[a], coords[b], p) {
                return Err(Error::Invalid(format!("vertex {v} lies on edge {a}-{b}")));
            }
        }
    }
    let mut crossings = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    let mut along: Vec<Vec<(f64, usize)>> = vec![Vec::new(); edges.len()];
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                let shared = if a == c || a == d { a } else { b };
                let (p, q) = (if a == shared { b } else { a }, if c == shared { d } else { c });
                if cross(coords[shared], coords[p], coords[q]).abs() < EPS
                    && dot(coords[shared], coords[p], coords[q]) > 0.0
                {
                    return Err(Error::Invalid(format!("edges {a}-{b} and {c}-{d} overlap")));
                }
                continue;
            }
            let (pa, pb, pc, pd) = (coords[a], coords[b], coords[c], coords[d]);
            let d1 = cross(pc, pd, pa);
            let d2 = cross(pc, pd, pb);
            let d3 = cross(pa, pb, pc);
            let d4 = cross(pa, pb, pd);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                let t = d1 / (d1 - d2);
                let s = d3 / (d3 - d4);
                let dir_e = (pb.0 - pa.0, pb.1 - pa.1);
                let dir_f = (pd.0 - pc.0, pd.1 - pc.1);
                let id = crossings.len();
                crossings.push(Crossing { edges: [i, j], left_to_right: dir_e.0 * dir_f.1 - dir_e.1 * dir_f.0 < 0.0 });
                points.push((pa.0 + t * dir_e.0, pa.1 + t * dir_e.1));
                along[i].push((t, id));
                along[j].push((s, id));
            } else if d1.abs() < EPS && d2.abs() < EPS
                && (on_segment(pa, pb, pc) || on_segment(pa, pb, pd) || on_segment(pc, pd, pa)) {
                    return Err(Error::Invalid(format!("edges {a}-{b} and {c}-{d} overlap")));
                }
        }
    }
    for (x, &p) in points.iter().enumerate() {
        for (y, &q) in points.iter().enumerate().take(x) {
            if (p.0 - q.0).abs() < 1e-7 && (p.1 - q.1).abs() < 1e-7 {
                return Err(Error::Invalid(format!("crossings {y} and {x} coincide")));
            }
        }
    }
    let edge_crossings = along
        .into_iter()
        .map(|mut l| {
            l.sort_by(|a, b| a.0.total_cmp(&b.0));
            l.into_iter().map(|(_, id)| id).collect()
        })
        .collect();
    let rotation = (0..graph.n())
        .map(|v| {
            let mut inc: Vec<(f64, usize)> = graph
                .neighbors(v)
                .iter()
                .map(|&w| {
                    let ang = (coords[w].1 - coords[v].1).atan2(coords[w].0 - coords[v].0);
                    (ang, graph.edge_index(v, w).unwrap())
                })
                .collect();
            // clockwise = decreasing angle
            inc.sort_by(|a, b| b.0.total_cmp(&a.0));
            inc.into_iter().map(|(_, e)| e).collect()
        })
        .collect();
    CombinatorialDrawing::new(graph, edge_crossings, crossings, rotation).map_err(Error::InvalidDrawing)
}

fn dot(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.0 - o.0) + (a.1 - o.1) * (b.1 - o.1)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p).abs() < EPS
        && p.0 >= a.0.min(b.0) - EPS
        && p.0 <= a.0.max(b.0) + EPS
        && p.1 >= a.1.min(b.1) - EPS
        && p.1 <= a.1.max(b.1) + EPS
}
