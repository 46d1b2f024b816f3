//! Wavefront OBJ export of a ruled strip.

use std::fmt::Write as _;

use ruled::{RuledSurfaceSpec, Vec3};

use crate::args::{Grid, VRange};
use crate::error::{CliError, CliResult};
use crate::report::num;

/// Vertices `f(uᵢ) + vⱼ q(uᵢ)` (u outer, v inner) and two triangles per quad,
/// wound counterclockwise seen from the `+a` side of the strip.
pub fn export_obj(surface: &RuledSurfaceSpec, grid: Grid, v: VRange) -> CliResult<String> {
    if grid.columns < 2 || grid.rows < 2 {
        return Err(CliError::Usage(format!(
            "grid {}x{} needs at least 2 u-values and 2 v-values",
            grid.columns, grid.rows
        )));
    }
    if !(v.min < v.max) {
        return Err(CliError::Usage(format!(
            "v range {}:{} is empty; need MIN < MAX",
            v.min, v.max
        )));
    }
    let us = ruled::SampleGrid::uniform(surface.range, grid.columns)?;
    let vs: Vec<f64> = (0..grid.rows)
        .map(|j| {
            if j + 1 == grid.rows {
                v.max
            } else {
                v.min + (v.max - v.min) * j as f64 / (grid.rows - 1) as f64
            }
        })
        .collect();
    let mut out = String::new();
    for &u in us.values() {
        for &t in &vs {
            let p: Vec3 = surface.point(u, t)?;
            let _ = writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z));
        }
    }
    let index = |i: usize, j: usize| i * grid.rows + j + 1;
    for i in 0..grid.columns - 1 {
        for j in 0..grid.rows - 1 {
            let (p00, p01, p10, p11) = (
                index(i, j),
                index(i, j + 1),
                index(i + 1, j),
                index(i + 1, j + 1),
            );
            let _ = writeln!(out, "f {p00} {p01} {p10}");
            let _ = writeln!(out, "f {p01} {p11} {p10}");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ruled::generators::catalog;

    fn helicoid() -> RuledSurfaceSpec {
        catalog("helicoid", &Default::default()).unwrap()
    }

    fn vertices(text: &str) -> Vec<Vec3> {
        text.lines()
            .filter_map(|l| l.strip_prefix("v "))
            .map(|l| {
                let c: Vec<f64> = l.split(' ').map(|x| x.parse().unwrap()).collect();
                Vec3::new(c[0], c[1], c[2])
            })
            .collect()
    }

    fn faces(text: &str) -> Vec<[usize; 3]> {
        text.lines()
            .filter_map(|l| l.strip_prefix("f "))
            .map(|l| {
                let c: Vec<usize> = l.split(' ').map(|x| x.parse().unwrap()).collect();
                [c[0], c[1], c[2]]
            })
            .collect()
    }

    #[test]
    fn minimal_grid() {
        let text = export_obj(
            &helicoid(),
            Grid {
                columns: 2,
                rows: 2,
            },
            VRange {
                min: -1.0,
                max: 1.0,
            },
        )
        .unwrap();
        assert_eq!(vertices(&text).len(), 4);
        assert_eq!(faces(&text).len(), 2);
    }

    #[test]
    fn helicoid_vertex_at_unit_v() {
        let text = export_obj(
            &helicoid(),
            Grid {
                columns: 5,
                rows: 3,
            },
            VRange {
                min: -1.0,
                max: 1.0,
            },
        )
        .unwrap();
        assert!(text.lines().any(|l| l == "v 1 0 0"), "{text}");
        assert_eq!(text.lines().nth(2), Some("v 1 0 0"));
    }

    #[test]
    fn faces_face_the_asymptotic_normal() {
        let s = catalog("hyperboloid", &Default::default()).unwrap();
        let text = export_obj(
            &s,
            Grid {
                columns: 12,
                rows: 4,
            },
            VRange { min: 0.1, max: 1.0 },
        )
        .unwrap();
        let vs = vertices(&text);
        for f in faces(&text) {
            let [a, b, c] = f.map(|i| vs[i - 1]);
            let n = (b - a).cross(&(c - a));
            // The a-side at the ruling through the face's first vertex.
            let u = s.range.lo + s.range.len() * ((f[0] - 1) / 4) as f64 / 11.0;
            let normal = ruled::frame::frame_at(&s, u).unwrap().a;
            assert!(n.dot(&normal) > 0.0, "face {f:?}");
        }
    }

    #[test]
    fn degenerate_requests() {
        let h = helicoid();
        let e = export_obj(
            &h,
            Grid {
                columns: 4,
                rows: 4,
            },
            VRange { min: 0.5, max: 0.5 },
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = export_obj(
            &h,
            Grid {
                columns: 1,
                rows: 4,
            },
            VRange { min: 0.0, max: 1.0 },
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
