//! SVG 1.1 figures of a workspace, its obstacles and paths.
//!
//! World y points up; the image is flipped so the picture matches the usual
//! plot orientation. Every path is a single `<polyline>`.

use std::fmt::Write;

use kbga::{Environment, Point};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

pub struct Canvas {
    scale: f64,
    height: f64,
    body: String,
    w: f64,
    h: f64,
}

impl Canvas {
    /// Blank canvas with the workspace, grid ticks and obstacles of `env`.
    pub fn new(env: &Environment) -> Canvas {
        let ws = &env.workspace;
        let scale = SIZE / ws.width.max(ws.height);
        let mut c = Canvas { scale, height: ws.height, body: String::new(), w: ws.width * scale, h: ws.height * scale };
        let _ = writeln!(
            c.body,
            r##"<rect x="{m}" y="{m}" width="{:.2}" height="{:.2}" fill="#e8e8e8" stroke="#000" stroke-width="1"/>"##,
            c.w,
            c.h,
            m = MARGIN
        );
        c.ticks(env);
        for g in env.obstacles() {
            for part in g.parts() {
                let pts = c.points(part.vertices());
                let _ = writeln!(c.body, r##"<polygon points="{pts}" fill="#555" stroke="#222" stroke-width="0.5"/>"##);
            }
        }
        c.marker(env.start, "#2a7");
        c.marker(env.target, "#c33");
        c
    }

    fn ticks(&mut self, env: &Environment) {
        let ws = &env.workspace;
        let mut d = String::new();
        // At most about 20 ticks per side.
        let every_c = ws.grid_cols.div_ceil(20).max(1);
        let every_r = ws.grid_rows.div_ceil(20).max(1);
        for i in (0..=ws.grid_cols).step_by(every_c as usize) {
            let x = self.x(i as f64 * ws.cell_width());
            let _ = write!(d, "M{x:.2} {:.2}v4", MARGIN + self.h);
        }
        for j in (0..=ws.grid_rows).step_by(every_r as usize) {
            let y = self.y(j as f64 * ws.cell_height());
            let _ = write!(d, "M{MARGIN:.2} {y:.2}h-4");
        }
        let _ = writeln!(self.body, r##"<path d="{d}" stroke="#000" stroke-width="0.5" fill="none"/>"##);
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN + x * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.height - y) * self.scale
    }

    fn points<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> String {
        let mut s = String::new();
        for p in pts {
            if !s.is_empty() {
                s.push(' ');
            }
            let _ = write!(s, "{:.2},{:.2}", self.x(p.x), self.y(p.y));
        }
        s
    }

    fn marker(&mut self, p: Point, fill: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{fill}"/>"#, self.x(p.x), self.y(p.y));
    }

    pub fn polyline(&mut self, path: &[Point], stroke: &str, width: f64, dash: Option<&str>) {
        let dash = dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"{dash}/>"#,
            self.points(path)
        );
    }

    pub fn dots(&mut self, pts: &[Point], fill: &str) {
        for p in pts {
            let _ = writeln!(
                self.body,
                r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{fill}" stroke="#000" stroke-width="0.5"/>"##,
                self.x(p.x),
                self.y(p.y)
            );
        }
    }

    pub fn caption(&mut self, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{MARGIN}" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            MARGIN - 6.0,
            escape(text)
        );
    }

    pub fn finish(self) -> String {
        let (w, h) = (self.w + 2.0 * MARGIN, self.h + 2.0 * MARGIN);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             {}</svg>\n",
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Final path over the world, with earlier bests underneath when `history` is
/// non-empty.
pub fn plan_figure(env: &Environment, best: &[Point], history: &[Vec<Point>], caption: &str) -> String {
    let mut c = Canvas::new(env);
    for h in history {
        c.polyline(h, "#48c", 0.8, Some("3,2"));
    }
    c.polyline(best, "#000", 2.0, None);
    c.caption(caption);
    c.finish()
}

/// One simulation frame: the trajectory so far in white with the tick
/// positions as dots, and the current plan in black.
pub fn sim_frame(env: &Environment, past: &[Point], plan: &[Point], caption: &str) -> String {
    let mut c = Canvas::new(env);
    c.polyline(plan, "#000", 1.5, None);
    c.polyline(past, "#fff", 2.5, None);
    c.dots(past, "#fff");
    c.caption(caption);
    c.finish()
}
