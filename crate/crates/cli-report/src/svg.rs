use moving_plane_audit::{AuditReport, CheckId};
use sector_fem::ScalarField;
use sector_geometry::Point;
use std::collections::BTreeMap;
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Viridis-like ramp sampled at five stops, `t ∈ [0, 1]`.
fn ramp(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + f * (q - p)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Maps mesh coordinates to the canvas, `x₂` upward.
struct Frame {
    lo: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Self {
        let (mut lo, mut hi) =
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let scale = (WIDTH - 2.0 * MARGIN) / (hi.x - lo.x).max(1e-12);
        Self { lo, scale, height: (hi.y - lo.y) * scale + 2.0 * MARGIN + 40.0 }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale, self.height - 40.0 - MARGIN - (p.y - self.lo.y) * self.scale)
    }
}

fn header(out: &mut String, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">{title}</text>"#);
}

fn triangles(out: &mut String, field: &ScalarField, frame: &Frame, fill: impl Fn(usize) -> String) {
    let mesh = field.mesh();
    for t in 0..mesh.n_triangles() {
        let pts: Vec<String> = mesh
            .triangle_points(t)
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let c = fill(t);
        let _ = writeln!(out, r#"<polygon points="{}" fill="{c}" stroke="{c}" stroke-width="0.3"/>"#, pts.join(" "));
    }
}

fn legend(out: &mut String, y: f64, items: &[(String, String)]) {
    let mut x = MARGIN;
    for (color, label) in items {
        let _ = writeln!(out, r#"<rect x="{x:.1}" y="{y:.1}" width="14" height="14" fill="{color}"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{label}</text>"#,
            x + 18.0,
            y + 12.0
        );
        x += 24.0 + 7.0 * label.chars().count() as f64;
    }
}

/// Heatmap of the nodal values, each triangle filled by its mean value.
pub fn heatmap(field: &ScalarField, title: &str) -> String {
    let mesh = field.mesh();
    let frame = Frame::new(&mesh.vertices);
    let v = field.values();
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let span = (hi - lo).max(1e-300);
    let mut out = String::new();
    header(&mut out, frame.height, title);
    triangles(&mut out, field, &frame, |t| {
        let [a, b, c] = mesh.triangles[t];
        ramp(((v[a] + v[b] + v[c]) / 3.0 - lo) / span)
    });
    let y = frame.height - 30.0;
    legend(&mut out, y, &[(ramp(0.0), format!("min {lo:.4e}")), (ramp(1.0), format!("max {hi:.4e}"))]);
    out.push_str("</svg>\n");
    out
}

/// Sign of `u_{x₁}` per triangle: positive above `tol`, negative below `−tol`, zero otherwise.
pub fn sign_map(field: &ScalarField, tol: f64, title: &str) -> String {
    let frame = Frame::new(&field.mesh().vertices);
    let mut out = String::new();
    header(&mut out, frame.height, title);
    triangles(&mut out, field, &frame, |t| {
        let g = field.triangle_gradient(t).x;
        if g > tol {
            "#d62728".into()
        } else if g < -tol {
            "#1f77b4".into()
        } else {
            "#dddddd".into()
        }
    });
    let items = [
        ("#1f77b4".to_string(), "negative".to_string()),
        ("#dddddd".to_string(), format!("|u_x1| <= {tol:.1e}")),
        ("#d62728".to_string(), "positive".to_string()),
    ];
    legend(&mut out, frame.height - 30.0, &items);
    out.push_str("</svg>\n");
    out
}

/// Per check, the largest `max_violation − tolerance` at each `λ`; nonpositive means pass.
pub fn margin_series(report: &AuditReport) -> BTreeMap<CheckId, Vec<(f64, f64)>> {
    let mut acc: BTreeMap<CheckId, BTreeMap<u64, (f64, f64)>> = BTreeMap::new();
    for r in &report.rows {
        let (Some(l), Some(v)) = (r.lambda, r.max_violation) else { continue };
        let m = v - r.tolerance;
        let e = acc.entry(r.check_id).or_default().entry(l.to_bits()).or_insert((l, m));
        e.1 = e.1.max(m);
    }
    acc.into_iter()
        .map(|(id, pts)| {
            let mut v: Vec<(f64, f64)> = pts.into_values().collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            (id, v)
        })
        .collect()
}

/// Margin-versus-`λ` curves of [`margin_series`] with the zero line marked.
pub fn margin_plot(report: &AuditReport, title: &str) -> String {
    let series = margin_series(report);
    let height = 420.0;
    let (x0, x1, y0, y1) = (MARGIN + 20.0, WIDTH - 180.0, height - MARGIN, MARGIN);
    let all: Vec<(f64, f64)> = series.values().flatten().copied().collect();
    let (mut lmin, mut lmax) =
        all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (mut mmin, mut mmax) = all.iter().fold((0.0f64, 0.0f64), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if !(lmax > lmin) {
        lmin -= 0.5;
        lmax += 0.5;
    }
    if !(mmax > mmin) {
        mmin -= 1.0;
        mmax += 1.0;
    }
    let px = |l: f64| x0 + (l - lmin) / (lmax - lmin) * (x1 - x0);
    let py = |m: f64| y0 + (m - mmin) / (mmax - mmin) * (y1 - y0);
    let mut out = String::new();
    header(&mut out, height, title);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        out,
        r##"<line x1="{x0:.1}" y1="{z:.2}" x2="{x1:.1}" y2="{z:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        z = py(0.0)
    );
    for k in 0..=4 {
        let l = lmin + (lmax - lmin) * k as f64 / 4.0;
        let m = mmin + (mmax - mmin) * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{l:.3}</text>"#,
            px(l),
            y0 + 16.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{m:.2e}</text>"#,
            x0 - 4.0,
            py(m) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">lambda</text>"#,
        0.5 * (x0 + x1),
        height - 10.0
    );
    for (i, (id, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(l, m)| format!("{:.2},{:.2}", px(l), py(m))).collect();
        let _ =
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(l, m) in pts {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(l), py(m));
        }
        let ly = y1 + 16.0 * i as f64;
        let _ = writeln!(out, r#"<rect x="{:.1}" y="{ly:.1}" width="12" height="12" fill="{color}"/>"#, x1 + 12.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{id}</text>"#,
            x1 + 28.0,
            ly + 10.0
        );
    }
    out.push_str("</svg>\n");
    out
}
