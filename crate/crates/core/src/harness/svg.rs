//! Top-down SVG snapshot of one trace record.

use std::fmt::Write as _;
use std::path::Path;

use super::{HarnessError, TraceRecord};
use crate::collab::Provenance;
use crate::geo::{body_to_world, rotate_xy};
use crate::scenario::Scenario;
use crate::world::ActorState;

const SCALE: f64 = 4.0;
const MARGIN: f64 = 15.0;
const LEGEND_H: f64 = 118.0;

/// Fixed two-decimal formatting with no negative zero.
fn f(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct View {
    x0: f64,
    y1: f64,
}

impl View {
    fn px(&self, x: f64, y: f64) -> (String, String) {
        (f((x - self.x0) * SCALE), f((self.y1 - y) * SCALE + LEGEND_H))
    }

    fn polygon(&self, cx: f64, cy: f64, yaw: f64, l: f64, w: f64) -> String {
        [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
            .iter()
            .map(|(sx, sy)| {
                let (dx, dy) = rotate_xy(yaw, sx * l / 2.0, sy * w / 2.0);
                let (x, y) = self.px(cx + dx, cy + dy);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn actor_class(a: &ActorState, host: u32, rec: &TraceRecord) -> &'static str {
    if a.id == host {
        return "host";
    }
    let Some(h) = rec.host(host) else { return "unperceived" };
    if h.host_only.perceivable_ids.contains(&a.id) {
        "perceived-local"
    } else if h.awareness.perceivable_ids.contains(&a.id) {
        "perceived-v2x"
    } else {
        "unperceived"
    }
}

/// SVG for the record nearest `t` (within half a step), drawn around the
/// scenario host.
pub fn render_svg_string(trace: &[TraceRecord], scenario: &Scenario, t: f64) -> Result<String, HarnessError> {
    let rec = trace
        .iter()
        .find(|r| (r.t - t).abs() <= scenario.dt / 2.0)
        .ok_or(HarnessError::TimeOutOfRange(t))?;
    let host_id = scenario.host_id;
    let host = rec.ground_truth.iter().find(|a| a.id == host_id);
    let ring = scenario.lidar.max_range;

    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64| {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    };
    for a in &rec.ground_truth {
        grow(a.pose.x, a.pose.y);
    }
    if let Some(h) = host {
        grow(h.pose.x - ring, h.pose.y - ring);
        grow(h.pose.x + ring, h.pose.y + ring);
    }
    let (x0, x1) = (((xmin - MARGIN) / 10.0).floor() * 10.0, ((xmax + MARGIN) / 10.0).ceil() * 10.0);
    let (y0, y1) = (((ymin - MARGIN) / 10.0).floor() * 10.0, ((ymax + MARGIN) / 10.0).ceil() * 10.0);
    let view = View { x0, y1 };
    let (w, h) = ((x1 - x0) * SCALE, (y1 - y0) * SCALE + LEGEND_H);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, f(w), f(h), f(w), f(h));
    s.push_str(concat!(
        "<style>",
        ".grid{stroke:#e6e6e6;stroke-width:1}",
        ".ring{fill:none;stroke:#1f77b4;stroke-dasharray:6 4}",
        ".host{fill:#1f77b4;stroke:#0b3d66}",
        ".perceived-local{fill:#2ca02c;stroke:#145214}",
        ".perceived-v2x{fill:#98df8a;stroke:#2ca02c}",
        ".unperceived{fill:#d0d0d0;stroke:#7f7f7f}",
        ".det{fill:none;stroke:#ff7f0e;stroke-dasharray:3 2}",
        ".track{stroke:#d62728;stroke-width:2}",
        ".fused{fill:none;stroke:#9467bd;stroke-width:2}",
        "text{font-family:monospace;font-size:11px}",
        "</style>\n"
    ));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, f(w), f(h));

    let mut grid = String::new();
    let mut gx = x0;
    while gx <= x1 + 1e-9 {
        let (a, b) = (view.px(gx, y0), view.px(gx, y1));
        let _ = write!(grid, "M{} {}V{}", a.0, a.1, b.1);
        gx += 10.0;
    }
    let mut gy = y0;
    while gy <= y1 + 1e-9 {
        let (a, b) = (view.px(x0, gy), view.px(x1, gy));
        let _ = write!(grid, "M{} {}H{}", a.0, a.1, b.0);
        gy += 10.0;
    }
    let _ = writeln!(s, r#"<path class="grid" d="{grid}"/>"#);

    if let Some(hs) = host {
        let (cx, cy) = view.px(hs.pose.x, hs.pose.y);
        let _ = writeln!(s, r#"<circle class="ring" cx="{cx}" cy="{cy}" r="{}"/>"#, f(ring * SCALE));
    }

    for a in &rec.ground_truth {
        let class = actor_class(a, host_id, rec);
        let pts = view.polygon(a.pose.x, a.pose.y, a.pose.yaw, a.extent.length, a.extent.width);
        let _ = writeln!(s, r#"<polygon class="{class}" data-id="{}" points="{pts}"/>"#, a.id);
        let (tx, ty) = view.px(a.pose.x + a.extent.length.max(2.0) / 2.0 + 0.5, a.pose.y + 1.5);
        let _ = writeln!(s, r#"<text x="{tx}" y="{ty}">{}</text>"#, a.id);
    }

    if let (Some(hr), Some(hs)) = (rec.host(host_id), host) {
        for d in &hr.detections {
            let c = body_to_world(hs.pose, d.center);
            let pts = view.polygon(c.x, c.y, d.yaw + hs.pose.yaw, d.extent.length, d.extent.width);
            let _ = writeln!(s, r#"<polygon class="det" points="{pts}"/>"#);
        }
        for tr in &hr.tracks {
            let (x, y) = tr.position;
            let (a, b) = (view.px(x - 1.0, y), view.px(x + 1.0, y));
            let (c, d) = (view.px(x, y - 1.0), view.px(x, y + 1.0));
            let _ = writeln!(s, r#"<path class="track" d="M{} {}H{}M{} {}V{}"/>"#, a.0, a.1, b.0, c.0, d.1, c.1);
        }
        for e in &hr.fused {
            let (cx, cy) = view.px(e.position.x, e.position.y);
            let kinds: Vec<&str> = e
                .provenance
                .iter()
                .map(|p| match p {
                    Provenance::LocalTrack(_) => "local",
                    Provenance::SelfBsm(_) => "self",
                    Provenance::ProxyBsm(_) => "proxy",
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<circle class="fused" data-provenance="{}" cx="{cx}" cy="{cy}" r="{}"/>"#,
                kinds.join(" "),
                f(1.5 * SCALE)
            );
        }
    }

    legend(&mut s, rec, host_id);
    s.push_str("</svg>\n");
    Ok(s)
}

fn legend(s: &mut String, rec: &TraceRecord, host_id: u32) {
    let _ = writeln!(s, r#"<text x="10" y="16">t = {} s, host {}</text>"#, f(rec.t), host_id);
    let items = [
        ("host", "host vehicle"),
        ("perceived-local", "perceived by own sensors"),
        ("perceived-v2x", "perceived via V2X only"),
        ("unperceived", "not perceived"),
    ];
    for (i, (class, label)) in items.iter().enumerate() {
        let y = 26.0 + i as f64 * 16.0;
        let _ = writeln!(s, r#"<rect class="{class}" x="10" y="{}" width="14" height="10"/>"#, f(y));
        let _ = writeln!(s, r#"<text x="30" y="{}">{label}</text>"#, f(y + 9.0));
    }
    let y = 26.0 + 4.0 * 16.0;
    let _ = writeln!(s, r#"<circle class="fused" cx="17" cy="{}" r="5"/><text x="30" y="{}">fused entity</text>"#, f(y + 5.0), f(y + 9.0));
    let y = y + 16.0;
    let _ = writeln!(s, r#"<path class="track" d="M10 {}H24"/><text x="30" y="{}">local track</text>"#, f(y + 5.0), f(y + 9.0));
    let _ = writeln!(s, r#"<rect class="det" x="170" y="26" width="14" height="10"/><text x="190" y="35">detection</text>"#);
    let _ = writeln!(s, r#"<circle class="ring" cx="177" cy="47" r="5"/><text x="190" y="51">LiDAR range</text>"#);
}

pub fn render_svg(trace: &[TraceRecord], scenario: &Scenario, t: f64, out: impl AsRef<Path>) -> Result<(), HarnessError> {
    let svg = render_svg_string(trace, scenario, t)?;
    std::fs::write(out, svg)?;
    Ok(())
}

