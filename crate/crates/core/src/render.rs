//! SVG pictures of drawings: barycentric layout of the planarization.

use std::fmt::Write;

use crate::drawing::CombinatorialDrawing;
use crate::error::{Error, Result};

const RADIUS: f64 = 200.0;
const GAP: f64 = 60.0;
const ROUNDS: usize = 400;

/// Each connected piece gets its longest face on a circle; the other
/// vertices sit at the average of their neighbours. Crossings are drawn as
/// `class="crossing"` marks, one per crossing.
pub fn render_svg(d: &CombinatorialDrawing) -> Result<String> {
    let p = d.planarize().map_err(Error::InvalidDrawing)?;
    let nv = p.vertex_count();
    let n = p.original_vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for &(a, b) in p.segments() {
        adj[a].push(b);
        adj[b].push(a);
    }
    // components in order of their least vertex
    let mut comp = vec![usize::MAX; nv];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for s in 0..nv {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = pieces.len();
        let mut members = vec![s];
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = pieces.len();
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        pieces.push(members);
    }
    let mut pos = vec![(0.0f64, 0.0f64); nv];
    for (ci, members) in pieces.iter().enumerate() {
        let cx = RADIUS + GAP + ci as f64 * (2.0 * RADIUS + GAP);
        let cy = RADIUS + GAP;
        let outer = p
            .faces()
            .iter()
            .filter(|f| comp[p.tail(f[0])] == ci)
            .fold(None::<&Vec<usize>>, |best, f| match best {
                Some(b) if b.len() >= f.len() => Some(b),
                _ => Some(f),
            });
        let mut fixed = vec![false; nv];
        let mut ring = Vec::new();
        if let Some(face) = outer {
            for &dart in face {
                let v = p.tail(dart);
                if !fixed[v] {
                    fixed[v] = true;
                    ring.push(v);
                }
            }
        } else {
            ring.push(members[0]);
            fixed[members[0]] = true;
        }
        for (i, &v) in ring.iter().enumerate() {
            let t = std::f64::consts::TAU * i as f64 / ring.len() as f64;
            pos[v] = if ring.len() == 1 { (cx, cy) } else { (cx + RADIUS * t.cos(), cy - RADIUS * t.sin()) };
        }
        for &v in members {
            if !fixed[v] {
                pos[v] = (cx, cy);
            }
        }
        for _ in 0..ROUNDS {
            for &v in members {
                if fixed[v] || adj[v].is_empty() {
                    continue;
                }
                let (sx, sy) = adj[v].iter().fold((0.0, 0.0), |(x, y), &w| (x + pos[w].0, y + pos[w].1));
                let k = adj[v].len() as f64;
                pos[v] = (sx / k, sy / k);
            }
        }
    }

    let width = GAP + pieces.len().max(1) as f64 * (2.0 * RADIUS + GAP);
    let height = 2.0 * (RADIUS + GAP);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#);
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="1.5">"#);
    let g = d.graph();
    let mut seg = 0;
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        let mut path = format!("M {:.3} {:.3}", pos[u].0, pos[u].1);
        for _ in 0..=d.edge_crossings(e).len() {
            let (_, b) = p.segments()[seg];
            let _ = write!(path, " L {:.3} {:.3}", pos[b].0, pos[b].1);
            seg += 1;
        }
        let _ = writeln!(s, r#"<path class="edge" data-edge="{e}" d="{path}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    for x in 0..d.crossings().len() {
        let (cx, cy) = pos[n + x];
        let _ = writeln!(s, r#"<circle class="crossing" cx="{cx:.3}" cy="{cy:.3}" r="4" fill="red"/>"#);
    }
    for (v, &(x, y)) in pos.iter().enumerate().take(n) {
        let _ = writeln!(s, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="7" fill="white" stroke="black"/>"#);
        let _ = writeln!(s, r#"<text x="{x:.3}" y="{:.3}" font-size="9" text-anchor="middle">{v}</text>"#, y + 3.0);
    }
    s.push_str("</svg>\n");
    Ok(s)
}
