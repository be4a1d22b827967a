//! Deterministic result emission: CSV vertex tables, the JSON report, and a
//! fixed-common-rate SVG slice of a traced region.

use std::fmt::Write as _;
use std::path::Path;

use fadingbc_core as core;
use thiserror::Error;

use crate::report::{RunReport, TraceReport};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("slice plane r0={0} lies outside the region")]
    SliceOutOfRange(f64),
    #[error("region is empty")]
    EmptyRegion,
}

/// Writes one vertex per row as `r0,r1,r2` with nine decimal places, in the
/// region's canonical vertex order.
pub fn region_csv(vertices: &[[f64; 3]]) -> String {
    let mut out = String::new();
    for v in vertices {
        let _ = writeln!(out, "{:.9},{:.9},{:.9}", v[0], v[1], v[2]);
    }
    out
}

pub fn write_region_csv(vertices: &[[f64; 3]], path: &Path) -> Result<(), EmitError> {
    std::fs::write(path, region_csv(vertices))?;
    Ok(())
}

pub fn write_report_json(report: &RunReport, path: &Path) -> Result<(), EmitError> {
    std::fs::write(path, crate::report::to_json(report))?;
    Ok(())
}

/// Renders the `(R1, R2)` slice of a traced region at fixed `R0` as an SVG
/// polyline with axis labels in bits.
pub fn region_slice_svg(trace: &TraceReport, fixed_r0: f64) -> Result<String, EmitError> {
    if trace.vertices.is_empty() {
        return Err(EmitError::EmptyRegion);
    }
    let points: Vec<core::RatePoint> = trace
        .vertices
        .iter()
        .map(|v| core::RatePoint::new(v[0], v[1], v[2]))
        .collect();
    let region = core::hull(&points);
    let max_r0 = points.iter().map(|p| p.r0).fold(0.0f64, f64::max);
    if fixed_r0 < 0.0 || fixed_r0 > max_r0 + 1e-9 {
        return Err(EmitError::SliceOutOfRange(fixed_r0));
    }
    let polygon = core::slice_at_r0(&region, fixed_r0, 64)
        .map_err(|_| EmitError::SliceOutOfRange(fixed_r0))?;

    // boundary polyline: walk the upper-right frontier from the R2 axis to
    // the R1 axis (drop the interior origin vertex)
    let mut frontier: Vec<[f64; 2]> = polygon
        .iter()
        .copied()
        .filter(|p| p[0] > 1e-12 || p[1] > 1e-12)
        .collect();
    frontier.sort_by(|a, b| a[0].total_cmp(&b[0]).then(b[1].total_cmp(&a[1])));
    if frontier.is_empty() {
        frontier.push([0.0, 0.0]);
    }

    let max1 = frontier.iter().map(|p| p[0]).fold(1e-9f64, f64::max);
    let max2 = frontier.iter().map(|p| p[1]).fold(1e-9f64, f64::max);
    let (w, h, m) = (480.0, 360.0, 48.0);
    let sx = |r1: f64| m + (w - 2.0 * m) * r1 / max1;
    let sy = |r2: f64| h - m - (h - 2.0 * m) * r2 / max2;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        sx(0.0),
        sy(0.0),
        sx(max1),
        sy(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        sx(0.0),
        sy(0.0),
        sx(0.0),
        sy(max2)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">R1 [bits], max {:.6}</text>"#,
        sx(max1) - 150.0,
        sy(0.0) + 30.0,
        max1
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" transform="rotate(-90 {:.2} {:.2})">R2 [bits], max {:.6}</text>"#,
        sx(0.0) - 30.0,
        sy(max2) + 150.0,
        sx(0.0) - 30.0,
        sy(max2) + 150.0,
        max2
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="18" font-size="12">{} slice at R0 = {:.6} bits</text>"#,
        m, trace.bound, fixed_r0
    );
    // frontier polyline, closed down to both axes
    let mut pts = String::new();
    let _ = write!(pts, "{:.3},{:.3} ", sx(0.0), sy(frontier[0][1]));
    for p in &frontier {
        let _ = write!(pts, "{:.3},{:.3} ", sx(p[0]), sy(p[1]));
    }
    let last = frontier.last().unwrap();
    let _ = write!(pts, "{:.3},{:.3}", sx(last[0]), sy(0.0));
    let _ = writeln!(
        svg,
        r#"<polyline points="{pts}" fill="none" stroke="crimson" stroke-width="2"/>"#
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

pub fn write_region_svg(trace: &TraceReport, fixed_r0: f64, path: &Path) -> Result<(), EmitError> {
    std::fs::write(path, region_slice_svg(trace, fixed_r0)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formats_nine_decimals() {
        let text = region_csv(&[[0.0, 0.0, 0.0]]);
        assert_eq!(text, "0.000000000,0.000000000,0.000000000\n");
    }

    #[test]
    fn csv_is_ordered_and_stable() {
        let vs = [[0.0, 2.0, 0.0], [0.5, 0.25, 0.125]];
        assert_eq!(region_csv(&vs), region_csv(&vs));
        assert!(region_csv(&vs).starts_with("0.000000000,2.000000000,0.000000000\n"));
    }

    #[test]
    fn svg_contains_rectangle_corners() {
        // 0.5 x 0.5 confidential-rate rectangle
        let trace = TraceReport {
            bound: "secrecy_outer_nocommon".into(),
            restriction: "free".into(),
            support_table: vec![],
            vertices: vec![
                [0.0, 0.0, 0.0],
                [0.0, 0.0, 0.5],
                [0.0, 0.5, 0.0],
                [0.0, 0.5, 0.5],
            ],
            origins: vec![0, 0, 0, 0],
        };
        let svg = region_slice_svg(&trace, 0.0).unwrap();
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("max 0.500000"));
        // byte-identical re-render
        assert_eq!(svg, region_slice_svg(&trace, 0.0).unwrap());
    }

    #[test]
    fn svg_slice_out_of_range() {
        let trace = TraceReport {
            bound: "inner".into(),
            restriction: "free".into(),
            support_table: vec![],
            vertices: vec![[0.2, 0.1, 0.1]],
            origins: vec![0],
        };
        assert!(matches!(
            region_slice_svg(&trace, 1.0),
            Err(EmitError::SliceOutOfRange(_))
        ));
    }
}
