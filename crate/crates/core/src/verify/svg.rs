//! Static SVG plot of a planar fibre inside its disk.

use std::fmt::Write;

use super::mesh::FibreMesh;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 16.0;

/// `None` unless the mesh is planar.
pub fn render_svg(mesh: &FibreMesh, epsilon: f64, title: &str) -> Option<String> {
    if mesh.dim != 2 {
        return None;
    }
    let scale = (SIZE / 2.0 - MARGIN) / epsilon;
    let c = SIZE / 2.0;
    // y grows upward in the plot
    let map = |p: &[f64; 3]| (c + scale * p[0], c - scale * p[1]);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"  <circle cx="{c}" cy="{c}" r="{:.3}" fill="none" stroke="#888888" stroke-dasharray="4 3"/>"##,
        scale * epsilon
    );
    let _ = writeln!(s, r##"  <g stroke="#1f4e9c" stroke-width="1.5" fill="none">"##);
    for edge in mesh.complex.cells(1) {
        if let [(a, _), (b, _)] = edge.as_slice() {
            let (x1, y1) = map(&mesh.positions[*a]);
            let (x2, y2) = map(&mesh.positions[*b]);
            let _ = writeln!(s, r#"    <line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r##"  <g fill="#c0392b">"##);
    for (p, _) in mesh.positions.iter().zip(&mesh.on_sphere).filter(|(_, &b)| b) {
        let (x, y) = map(p);
        let _ = writeln!(s, r#"    <circle cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
