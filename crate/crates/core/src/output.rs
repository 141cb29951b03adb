//! CSV tables and SVG scatter plots.
//!
//! Every number is rounded to 15 significant digits and printed in the
//! shortest form that parses back to the rounded value, so reading a table
//! returns exactly the rounded numbers and repeated runs are byte-identical.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::ButterflyResult;

pub const BUTTERFLY_HEADER: [&str; 5] =
    ["p", "q", "omega_over_pi", "eigenvalue_index", "eigenvalue"];
pub const SPECTRUM_HEADER: [&str; 2] = ["index", "eigenvalue"];
pub const ENERGY_HEADER: [&str; 2] = ["n", "energy"];

/// `x` rounded to 15 significant digits; negative zero becomes zero.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Decimal text of `round_significant(x)`, e.g. `0.0`, `-0.707106781186548`.
pub fn format_value(x: f64) -> String {
    format!("{:?}", round_significant(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ButterflyRow {
    pub p: i64,
    pub q: i64,
    pub omega_over_pi: f64,
    pub eigenvalue_index: usize,
    pub eigenvalue: f64,
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_butterfly_csv<W: Write>(result: &ButterflyResult, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(BUTTERFLY_HEADER)?;
    for (g, spectrum) in result.grid.iter().zip(&result.spectra) {
        let (p, q, x) = (
            g.p.to_string(),
            g.q.to_string(),
            format_value(g.omega_over_pi()),
        );
        for (i, &e) in spectrum.iter().enumerate() {
            w.write_record([
                p.as_str(),
                q.as_str(),
                x.as_str(),
                &i.to_string(),
                &format_value(e),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_indexed<W: Write>(header: [&str; 2], values: &[f64], first: usize, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(header)?;
    for (i, &v) in values.iter().enumerate() {
        w.write_record([(first + i).to_string(), format_value(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `index,eigenvalue` rows, index from 0.
pub fn write_spectrum_csv<W: Write>(eigenvalues: &[f64], out: W) -> Result<()> {
    write_indexed(SPECTRUM_HEADER, eigenvalues, 0, out)
}

/// `n,energy` rows, n from 0.
pub fn write_energy_csv<W: Write>(energies: &[f64], out: W) -> Result<()> {
    write_indexed(ENERGY_HEADER, energies, 0, out)
}

fn reader<R: Read>(input: R, header: &[&str]) -> Result<csv::Reader<R>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::Format(format!(
            "expected header {header:?}, found {found:?}"
        )));
    }
    Ok(r)
}

fn parse<T: std::str::FromStr>(field: Option<&str>, what: &str, line: usize) -> Result<T> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Format(format!("bad {what} on record {line}")))
}

pub fn read_butterfly_csv<R: Read>(input: R) -> Result<Vec<ButterflyRow>> {
    let mut r = reader(input, &BUTTERFLY_HEADER)?;
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        rows.push(ButterflyRow {
            p: parse(rec.get(0), "p", line)?,
            q: parse(rec.get(1), "q", line)?,
            omega_over_pi: parse(rec.get(2), "omega_over_pi", line)?,
            eigenvalue_index: parse(rec.get(3), "eigenvalue_index", line)?,
            eigenvalue: parse(rec.get(4), "eigenvalue", line)?,
        });
    }
    Ok(rows)
}

fn read_indexed<R: Read>(input: R, header: [&str; 2]) -> Result<Vec<f64>> {
    let mut r = reader(input, &header)?;
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let index: usize = parse(rec.get(0), header[0], line)?;
        if index != line {
            return Err(Error::Format(format!(
                "index {index} out of order on record {line}"
            )));
        }
        values.push(parse(rec.get(1), header[1], line)?);
    }
    Ok(values)
}

pub fn read_spectrum_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    read_indexed(input, SPECTRUM_HEADER)
}

pub fn read_energy_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    read_indexed(input, ENERGY_HEADER)
}

/// Group butterfly rows back into one eigenvalue list per (p, q), in file order.
pub fn group_butterfly_rows(rows: &[ButterflyRow]) -> Vec<((i64, i64), Vec<f64>)> {
    let mut out: Vec<((i64, i64), Vec<f64>)> = Vec::new();
    for row in rows {
        match out.last_mut() {
            Some((key, values)) if *key == (row.p, row.q) => values.push(row.eigenvalue),
            _ => out.push(((row.p, row.q), vec![row.eigenvalue])),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub point_radius: f64,
    pub point_color: String,
    pub x_label: String,
    pub y_label: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 600.0,
            margin: 60.0,
            point_radius: 0.8,
            point_color: "#1f3a93".into(),
            x_label: "omega/pi".into(),
            y_label: "eigenvalue".into(),
        }
    }
}

/// (ω/π, eigenvalue) for every row of a sweep.
pub fn butterfly_points(result: &ButterflyResult) -> Vec<(f64, f64)> {
    result
        .rows()
        .map(|(i, e)| (result.grid[i].omega_over_pi(), e))
        .collect()
}

fn coord(x: f64) -> String {
    format!("{x:.2}")
}

/// Scatter plot with x fixed to [0, 1] and y spanning the data
/// (symmetric about 0, [−1, 1] when there are no points).
pub fn write_svg_scatter<W: Write>(
    points: &[(f64, f64)],
    style: &SvgStyle,
    mut out: W,
) -> Result<()> {
    let y_max = points
        .iter()
        .map(|p| p.1.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let y_max = if points.is_empty() { 1.0 } else { y_max * 1.05 };
    let (w, h, m) = (style.width, style.height, style.margin);
    let px = |x: f64| m + x * (w - 2.0 * m);
    let py = |y: f64| m + (y_max - y) / (2.0 * y_max) * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        coord(w),
        coord(h),
        coord(w),
        coord(h)
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        coord(w),
        coord(h)
    );
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#,
        x0 = coord(px(0.0)),
        x1 = coord(px(1.0)),
        y0 = coord(py(-y_max)),
        y1 = coord(py(y_max)),
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="12" fill="black">"#
    );
    for t in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{t}</text>"#,
            coord(px(t)),
            coord(py(-y_max) + 16.0)
        );
    }
    for t in [-y_max, 0.0, y_max] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{t:.3}</text>"#,
            coord(px(0.0) - 6.0),
            coord(py(t) + 4.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        coord(w / 2.0),
        coord(h - m / 4.0),
        xml_escape(&style.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})">{}</text>"#,
        xml_escape(&style.y_label),
        x = coord(m / 4.0),
        y = coord(h / 2.0),
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<g fill="{}" stroke="none">"#,
        xml_escape(&style.point_color)
    );
    let r = coord(style.point_radius);
    for &(x, y) in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{r}"/>"#,
            coord(px(x)),
            coord(py(y))
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::OperatorKind;
    use crate::operator::BoundaryKind;
    use crate::sweep::{sweep_grid, GridPoint};

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.0), "0.0");
        assert_eq!(format_value(-0.0), "0.0");
        assert_eq!(
            format_value(std::f64::consts::FRAC_1_SQRT_2),
            "0.707106781186548"
        );
        assert_eq!(format_value(-2.0), "-2.0");
        assert_eq!(format_value(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn zero_operator_spectrum_rows() {
        let mut buf = Vec::new();
        write_spectrum_csv(&[0.0, 0.0], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "index,eigenvalue\n0,0.0\n1,0.0\n"
        );
    }

    #[test]
    fn butterfly_round_trip() {
        let grid = [GridPoint { p: 1, q: 3 }, GridPoint { p: 2, q: 5 }];
        let result = sweep_grid(&grid, OperatorKind::Position, 9, BoundaryKind::Open).unwrap();
        let mut buf = Vec::new();
        write_butterfly_csv(&result, &mut buf).unwrap();
        let rows = read_butterfly_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 18);
        let grouped = group_butterfly_rows(&rows);
        for ((key, values), (g, spectrum)) in
            grouped.iter().zip(result.grid.iter().zip(&result.spectra))
        {
            assert_eq!(*key, (g.p, g.q));
            let rounded: Vec<f64> = spectrum.iter().map(|&x| round_significant(x)).collect();
            assert_eq!(values, &rounded);
        }
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_spectrum_csv("n,energy\n0,0.5\n".as_bytes()).is_err());
        assert!(read_spectrum_csv("index,eigenvalue\n1,0.5\n".as_bytes()).is_err());
        assert!(read_energy_csv("n,energy\n0,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn svg_places_circles() {
        let style = SvgStyle {
            width: 200.0,
            height: 100.0,
            margin: 0.0,
            ..SvgStyle::default()
        };
        let mut buf = Vec::new();
        write_svg_scatter(&[(0.0, 1.0), (0.5, 0.0), (1.0, -1.0)], &style, &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        // y_max = 1.05, so y = 1 sits 0.05/2.1 of the height below the top.
        assert!(svg.contains(r#"<circle cx="0.00" cy="2.38""#), "{svg}");
        assert!(svg.contains(r#"<circle cx="100.00" cy="50.00""#));
        assert!(svg.contains(r#"<circle cx="200.00" cy="97.62""#));
    }

    #[test]
    fn empty_svg_has_axes() {
        let mut buf = Vec::new();
        write_svg_scatter(&[], &SvgStyle::default(), &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert!(svg.contains("<line"));
        assert!(!svg.contains("<circle"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
