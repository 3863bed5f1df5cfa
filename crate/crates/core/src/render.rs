//! Deterministic figure emission: marching-squares level contours and orbit
//! scatters as SVG, density heatmaps as binary PPM.  Identical inputs
//! produce identical bytes; no compressed formats.

use crate::char_space::kappa_f64;
use crate::dynamics::LevelSample;
use std::fmt::Write as _;
use std::str::FromStr;

pub const BACKGROUND: &str = "#ffffff";
pub const AXIS_COLOR: &str = "#c8c8c8";
pub const CONTOUR_COLOR: &str = "#1f4e9c";
pub const OVERLAY_COLOR: &str = "#c03020";
pub const MARKER_COLOR: &str = "#111111";
pub const POINT_COLOR: &str = "#20508c";

/// Tolerance for flagging a grid node as an isolated zero of the field.
const MARKER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("canvas must be at least 16x16 pixels (got {0}x{1})")]
    TooSmall(u32, u32),
    #[error("canvas window is degenerate")]
    DegenerateWindow,
    #[error("unknown plane `{0}` (expected xy, yz or zx)")]
    BadPlane(String),
}

/// Coordinate plane a figure projects to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Plane {
    Xy,
    Yz,
    Zx,
}

impl Plane {
    /// Horizontal/vertical coordinates of a projected point.
    pub fn project(&self, [x, y, z]: [f64; 3]) -> (f64, f64) {
        match self {
            Plane::Xy => (x, y),
            Plane::Yz => (y, z),
            Plane::Zx => (z, x),
        }
    }

    /// κ with the remaining coordinate frozen to the slice value.
    pub fn kappa_slice(&self, h: f64, v: f64, slice: f64) -> f64 {
        match self {
            Plane::Xy => kappa_f64([h, v, slice]),
            Plane::Yz => kappa_f64([slice, h, v]),
            Plane::Zx => kappa_f64([v, slice, h]),
        }
    }
}

impl std::fmt::Display for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Plane::Xy => write!(f, "xy"),
            Plane::Yz => write!(f, "yz"),
            Plane::Zx => write!(f, "zx"),
        }
    }
}

impl FromStr for Plane {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, RenderError> {
        match s {
            "xy" => Ok(Plane::Xy),
            "yz" => Ok(Plane::Yz),
            "zx" => Ok(Plane::Zx),
            other => Err(RenderError::BadPlane(other.to_string())),
        }
    }
}

/// Pixel raster plus the window it depicts in plane coordinates.
#[derive(Clone, Debug)]
pub struct Canvas {
    pub width: u32,
    pub height: u32,
    /// Horizontal range in plane coordinates.
    pub h: [f64; 2],
    /// Vertical range in plane coordinates.
    pub v: [f64; 2],
}

impl Canvas {
    pub fn new(width: u32, height: u32, h: [f64; 2], v: [f64; 2]) -> Result<Canvas, RenderError> {
        if width < 16 || height < 16 {
            return Err(RenderError::TooSmall(width, height));
        }
        if !(h[0] < h[1]) || !(v[0] < v[1]) {
            return Err(RenderError::DegenerateWindow);
        }
        Ok(Canvas {
            width,
            height,
            h,
            v,
        })
    }

    pub fn square(size: u32, half_extent: f64) -> Result<Canvas, RenderError> {
        Canvas::new(
            size,
            size,
            [-half_extent, half_extent],
            [-half_extent, half_extent],
        )
    }

    fn h_at(&self, i: u32) -> f64 {
        self.h[0] + (self.h[1] - self.h[0]) * i as f64 / (self.width - 1) as f64
    }

    fn v_at(&self, j: u32) -> f64 {
        // Row 0 is the top of the image.
        self.v[1] - (self.v[1] - self.v[0]) * j as f64 / (self.height - 1) as f64
    }

    fn to_pixel(&self, h: f64, v: f64) -> (f64, f64) {
        let px = (h - self.h[0]) / (self.h[1] - self.h[0]) * (self.width - 1) as f64;
        let py = (self.v[1] - v) / (self.v[1] - self.v[0]) * (self.height - 1) as f64;
        (px, py)
    }
}

struct SvgDoc {
    body: String,
    width: u32,
    height: u32,
}

impl SvgDoc {
    fn new(canvas: &Canvas) -> SvgDoc {
        let mut body = String::new();
        let _ = write!(
            body,
            "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
            canvas.width, canvas.height, BACKGROUND
        );
        let mut doc = SvgDoc {
            body,
            width: canvas.width,
            height: canvas.height,
        };
        doc.axes(canvas);
        doc
    }

    fn axes(&mut self, canvas: &Canvas) {
        // Coordinate axes as paths, staying inside the path/circle/rect/text
        // element subset.
        if canvas.h[0] < 0.0 && canvas.h[1] > 0.0 {
            let (px, _) = canvas.to_pixel(0.0, 0.0);
            let _ = write!(
                self.body,
                "<path d=\"M {:.4} 0 L {:.4} {}\" stroke=\"{}\" stroke-width=\"1\" fill=\"none\"/>\n",
                px, px, canvas.height, AXIS_COLOR
            );
        }
        if canvas.v[0] < 0.0 && canvas.v[1] > 0.0 {
            let (_, py) = canvas.to_pixel(0.0, 0.0);
            let _ = write!(
                self.body,
                "<path d=\"M 0 {:.4} L {} {:.4}\" stroke=\"{}\" stroke-width=\"1\" fill=\"none\"/>\n",
                py, canvas.width, py, AXIS_COLOR
            );
        }
    }

    fn segment(&mut self, a: (f64, f64), b: (f64, f64), color: &str) {
        let _ = write!(
            self.body,
            "<path d=\"M {:.4} {:.4} L {:.4} {:.4}\" stroke=\"{}\" stroke-width=\"1\" fill=\"none\"/>\n",
            a.0, a.1, b.0, b.1, color
        );
    }

    fn circle(&mut self, c: (f64, f64), r: f64, color: &str, opacity: f64) {
        let _ = write!(
            self.body,
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"{}\" fill-opacity=\"{:.4}\"/>\n",
            c.0, c.1, r, color, opacity
        );
    }

    fn text(&mut self, at: (f64, f64), s: &str) {
        let _ = write!(
            self.body,
            "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"10\" fill=\"#333333\">{}</text>\n",
            at.0, at.1, s
        );
    }

    fn finish(self) -> Vec<u8> {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
        .into_bytes()
    }
}

/// Marching squares over the pixel-grid samples of `f`, with saddle cases
/// resolved by the cell-center value.  Returns segments in pixel space.
fn marching_squares(canvas: &Canvas, f: &dyn Fn(f64, f64) -> f64) -> Vec<((f64, f64), (f64, f64))> {
    let w = canvas.width as usize;
    let h = canvas.height as usize;
    let mut grid = vec![0.0f64; w * h];
    for j in 0..h {
        for i in 0..w {
            grid[j * w + i] = f(canvas.h_at(i as u32), canvas.v_at(j as u32));
        }
    }
    let mut segs = Vec::new();
    // Interpolated zero on the edge between two nodes, in pixel coords.
    let lerp = |i0: usize, j0: usize, i1: usize, j1: usize| -> (f64, f64) {
        let f0 = grid[j0 * w + i0];
        let f1 = grid[j1 * w + i1];
        let t = if (f1 - f0).abs() < 1e-300 {
            0.5
        } else {
            (f0 / (f0 - f1)).clamp(0.0, 1.0)
        };
        (
            i0 as f64 + t * (i1 as f64 - i0 as f64),
            j0 as f64 + t * (j1 as f64 - j0 as f64),
        )
    };
    for j in 0..h - 1 {
        for i in 0..w - 1 {
            let tl = grid[j * w + i] > 0.0;
            let tr = grid[j * w + i + 1] > 0.0;
            let br = grid[(j + 1) * w + i + 1] > 0.0;
            let bl = grid[(j + 1) * w + i] > 0.0;
            let case =
                (tl as usize) | (tr as usize) << 1 | (br as usize) << 2 | (bl as usize) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            let top = || lerp(i, j, i + 1, j);
            let right = || lerp(i + 1, j, i + 1, j + 1);
            let bottom = || lerp(i, j + 1, i + 1, j + 1);
            let left = || lerp(i, j, i, j + 1);
            match case {
                1 | 14 => segs.push((top(), left())),
                2 | 13 => segs.push((top(), right())),
                3 | 12 => segs.push((left(), right())),
                4 | 11 => segs.push((right(), bottom())),
                6 | 9 => segs.push((top(), bottom())),
                7 | 8 => segs.push((left(), bottom())),
                5 | 10 => {
                    let hc = 0.5 * (canvas.h_at(i as u32) + canvas.h_at(i as u32 + 1));
                    let vc = 0.5 * (canvas.v_at(j as u32) + canvas.v_at(j as u32 + 1));
                    let center_pos = f(hc, vc) > 0.0;
                    // Connect so the center joins the matching corners.
                    if (case == 5) == center_pos {
                        segs.push((top(), right()));
                        segs.push((left(), bottom()));
                    } else {
                        segs.push((top(), left()));
                        segs.push((right(), bottom()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segs
}

/// Grid nodes where the field vanishes (within tolerance) while all
/// neighbours are strictly positive or all strictly negative: isolated
/// level points, which sign-based marching squares cannot see.
fn isolated_zeros(canvas: &Canvas, f: &dyn Fn(f64, f64) -> f64) -> Vec<(f64, f64)> {
    let w = canvas.width as i64;
    let h = canvas.height as i64;
    let val = |i: i64, j: i64| f(canvas.h_at(i as u32), canvas.v_at(j as u32));
    let mut out = Vec::new();
    for j in 0..h {
        for i in 0..w {
            let v = val(i, j);
            if v.abs() > MARKER_TOL {
                continue;
            }
            let mut pos = 0;
            let mut neg = 0;
            let mut n = 0;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni >= w || nj >= h {
                    continue;
                }
                n += 1;
                let u = val(ni, nj);
                if u > MARKER_TOL {
                    pos += 1;
                } else if u < -MARKER_TOL {
                    neg += 1;
                }
            }
            if n > 0 && (pos == n || neg == n) {
                out.push((i as f64, j as f64));
            }
        }
    }
    out
}

/// Options for [`render_level_contour`].
#[derive(Clone, Debug, Default)]
pub struct ContourOptions {
    /// Also draw the projection-region boundary, the level set
    /// `(h² − 4)(v² − 4) = 2 − t` in the plane coordinates.
    pub overlay_region_boundary: bool,
}

/// SVG contour of `κ − t` restricted to a coordinate slice.  Isolated zeros
/// are drawn as point markers.  Output bytes are deterministic.
pub fn render_level_contour(
    t: f64,
    plane: Plane,
    slice_value: f64,
    canvas: &Canvas,
    opts: &ContourOptions,
) -> Vec<u8> {
    let mut doc = SvgDoc::new(canvas);
    doc.text(
        (4.0, 12.0),
        &format!("kappa = {} on {} (slice {})", t, plane, slice_value),
    );
    let field = move |h: f64, v: f64| plane.kappa_slice(h, v, slice_value) - t;
    for (a, b) in marching_squares(canvas, &field) {
        doc.segment(a, b, CONTOUR_COLOR);
    }
    for m in isolated_zeros(canvas, &field) {
        doc.circle(m, 3.0, MARKER_COLOR, 1.0);
    }
    if opts.overlay_region_boundary {
        let boundary =
            move |h: f64, v: f64| (h * h - 4.0) * (v * v - 4.0) - (2.0 - t);
        for (a, b) in marching_squares(canvas, &boundary) {
            doc.segment(a, b, OVERLAY_COLOR);
        }
    }
    doc.finish()
}

/// Options for [`render_orbit_scatter`].
#[derive(Clone, Debug, Default)]
pub struct ScatterOptions {
    /// Drop points with `|κ − t| > 1e−6` before projection, recording how
    /// many were dropped.
    pub expected_t: Option<f64>,
}

/// SVG scatter of weighted points projected to a plane; the marker area
/// scales with the weight.  Deterministic bytes.
pub fn render_orbit_scatter(
    samples: &[LevelSample],
    plane: Plane,
    canvas: &Canvas,
    opts: &ScatterOptions,
) -> Vec<u8> {
    let mut doc = SvgDoc::new(canvas);
    let mut kept: Vec<&LevelSample> = Vec::with_capacity(samples.len());
    let mut dropped = 0usize;
    for s in samples {
        if let Some(t) = opts.expected_t {
            if (kappa_f64(s.character.to_f64_triple()) - t).abs() > 1e-6 {
                dropped += 1;
                continue;
            }
        }
        kept.push(s);
    }
    doc.text(
        (4.0, 12.0),
        &format!("{} points ({} off-level dropped)", kept.len(), dropped),
    );
    let max_w = kept.iter().map(|s| s.weight).fold(0.0f64, f64::max).max(1e-300);
    for s in &kept {
        let (h, v) = plane.project(s.character.to_f64_triple());
        if h < canvas.h[0] || h > canvas.h[1] || v < canvas.v[0] || v > canvas.v[1] {
            continue;
        }
        let p = canvas.to_pixel(h, v);
        let r = 0.8 + 1.2 * (s.weight / max_w).sqrt();
        doc.circle(p, r, POINT_COLOR, 0.55);
    }
    doc.finish()
}

/// Binary PPM (P6) heatmap of the weighted projected density.
pub fn render_density_ppm(samples: &[LevelSample], plane: Plane, canvas: &Canvas) -> Vec<u8> {
    let w = canvas.width as usize;
    let h = canvas.height as usize;
    let mut bins = vec![0.0f64; w * h];
    for s in samples {
        let (ph, pv) = plane.project(s.character.to_f64_triple());
        if ph < canvas.h[0] || ph > canvas.h[1] || pv < canvas.v[0] || pv > canvas.v[1] {
            continue;
        }
        let (px, py) = canvas.to_pixel(ph, pv);
        let i = (px.round() as usize).min(w - 1);
        let j = (py.round() as usize).min(h - 1);
        bins[j * w + i] += s.weight;
    }
    let max = bins.iter().cloned().fold(0.0f64, f64::max);
    let mut out = format!("P6\n{} {}\n255\n", w, h).into_bytes();
    for v in bins {
        let level = if max > 0.0 {
            (255.0 * (v / max).sqrt()).round() as u8
        } else {
            0
        };
        // Dark blue to warm white ramp.
        let r = level;
        let g = (level as f64 * 0.85) as u8;
        let b = 64u8.saturating_add(level / 2);
        out.extend_from_slice(&[r, g, b]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_space::Character;
    use crate::dynamics::{sample_level_set, Window};

    #[test]
    fn canvas_validation() {
        assert!(Canvas::new(8, 64, [0.0, 1.0], [0.0, 1.0]).is_err());
        assert!(Canvas::new(64, 64, [1.0, 1.0], [0.0, 1.0]).is_err());
        assert!(Canvas::square(64, 3.0).is_ok());
    }

    #[test]
    fn contour_bytes_are_deterministic() {
        let canvas = Canvas::square(101, 3.0).unwrap();
        let a = render_level_contour(2.1, Plane::Xy, 0.5, &canvas, &ContourOptions::default());
        let b = render_level_contour(2.1, Plane::Xy, 0.5, &canvas, &ContourOptions::default());
        assert_eq!(a, b);
        assert!(a.starts_with(b"<svg "));
        assert!(String::from_utf8(a).unwrap().contains("<path"));
    }

    #[test]
    fn isolated_origin_gets_a_marker() {
        // κ(x, y, 0) = x² + y² − 2 equals −2 only at the origin; on an odd
        // grid the node hits it exactly.
        let canvas = Canvas::square(101, 3.0).unwrap();
        let svg = String::from_utf8(render_level_contour(
            -2.0,
            Plane::Xy,
            0.0,
            &canvas,
            &ContourOptions::default(),
        ))
        .unwrap();
        assert!(svg.contains("<circle"), "marker for the isolated origin");
        // The center pixel of a 101-node grid is node 50.
        assert!(svg.contains("cx=\"50.0000\" cy=\"50.0000\""), "{}", svg);
    }

    #[test]
    fn degenerate_reducible_contour_passes_through_corner() {
        // At t = 2 on the slice z = 2, the set κ = 2 includes (2, 2).
        let canvas = Canvas::square(81, 4.0).unwrap();
        let svg = render_level_contour(2.0, Plane::Xy, 2.0, &canvas, &ContourOptions::default());
        let text = String::from_utf8(svg).unwrap();
        assert!(text.contains("<path"), "nonempty contour");
    }

    #[test]
    fn overlay_draws_region_boundary() {
        let canvas = Canvas::square(64, 5.0).unwrap();
        let plain = render_level_contour(19.0, Plane::Xy, 0.0, &canvas, &ContourOptions::default());
        let overlay = render_level_contour(
            19.0,
            Plane::Xy,
            0.0,
            &canvas,
            &ContourOptions {
                overlay_region_boundary: true,
            },
        );
        assert!(overlay.len() > plain.len());
        assert!(String::from_utf8(overlay).unwrap().contains(OVERLAY_COLOR));
    }

    #[test]
    fn scatter_handles_empty_and_filters_off_level() {
        let canvas = Canvas::square(64, 3.0).unwrap();
        let empty = render_orbit_scatter(&[], Plane::Xy, &canvas, &ScatterOptions::default());
        let text = String::from_utf8(empty).unwrap();
        assert!(
            text.matches("<path").count() >= 2,
            "axes on a blank canvas"
        );
        for elem in ["<line", "<polyline", "<g", "<ellipse"] {
            assert!(!text.contains(elem), "stays in the path/circle/rect/text subset");
        }

        let good = LevelSample {
            character: Character::from_f64s(1.0, 1.0, 1.0),
            weight: 1.0,
        };
        let bad = LevelSample {
            character: Character::from_f64s(1.0, 1.0, 1.5),
            weight: 1.0,
        };
        let svg = render_orbit_scatter(
            &[good, bad],
            Plane::Xy,
            &canvas,
            &ScatterOptions { expected_t: Some(0.0) },
        );
        let text = String::from_utf8(svg).unwrap();
        assert!(text.contains("1 points (1 off-level dropped)"));
    }

    #[test]
    fn ppm_shape_and_determinism() {
        let run = sample_level_set(0.0, 2000, &Window::cube(2.0), 5).unwrap();
        let canvas = Canvas::square(32, 2.0).unwrap();
        let a = render_density_ppm(&run.samples, Plane::Xy, &canvas);
        let b = render_density_ppm(&run.samples, Plane::Xy, &canvas);
        assert_eq!(a, b);
        assert!(a.starts_with(b"P6\n32 32\n255\n"));
        assert_eq!(a.len(), b"P6\n32 32\n255\n".len() + 32 * 32 * 3);
    }

    #[test]
    fn compact_orbit_projects_into_box() {
        let run = sample_level_set(0.0, 500, &Window::cube(2.0), 8).unwrap();
        for s in &run.samples {
            let (h, v) = Plane::Xy.project(s.character.to_f64_triple());
            assert!(h.abs() <= 2.0 && v.abs() <= 2.0);
        }
    }
}
