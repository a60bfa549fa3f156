//! Point clouds and their ASCII readers/writers.
//!
//! Two formats are understood: bare XYZ text (`x y z` per line, `#` starts a
//! comment) and the ASCII subset of PCD v0.7 with exactly the fields `x y z`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Point3;

use super::PerceptionError;

pub const GLOBAL_FRAME: &str = "global";

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3<f64>>,
    pub frame_id: String,
}

impl PointCloud {
    pub fn new(points: Vec<Point3<f64>>, frame_id: impl Into<String>) -> Result<Self, PerceptionError> {
        if let Some(i) = points.iter().position(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(PerceptionError::NonFinite(i));
        }
        Ok(Self { points, frame_id: frame_id.into() })
    }

    pub fn empty(frame_id: impl Into<String>) -> Self {
        Self { points: Vec::new(), frame_id: frame_id.into() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_frame(mut self, frame_id: impl Into<String>) -> Self {
        self.frame_id = frame_id.into();
        self
    }

    /// Axis-aligned min/max corners, `None` when empty.
    pub fn bounds(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        let first = *self.points.first()?;
        Some(self.points.iter().fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p))))
    }

    pub fn load(path: impl AsRef<Path>, frame_id: &str) -> Result<Self, PerceptionError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| PerceptionError::Io(format!("{}: {e}", path.display())))?;
        Ok(parse_cloud(&bytes)?.with_frame(frame_id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudFormat {
    Xyz,
    Pcd,
}

const PCD_KEYWORDS: [&str; 10] =
    ["VERSION", "FIELDS", "SIZE", "TYPE", "COUNT", "WIDTH", "HEIGHT", "VIEWPOINT", "POINTS", "DATA"];

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> PerceptionError {
    PerceptionError::Parse { line, column, message: message.into() }
}

/// Parse XYZ or ASCII PCD. The format is picked from the first meaningful
/// line: a PCD header keyword selects PCD, anything else XYZ.
pub fn parse_cloud(bytes: &[u8]) -> Result<PointCloud, PerceptionError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        parse_error(line, 1, "input is not valid UTF-8")
    })?;
    let format = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .map_or(CloudFormat::Xyz, |tok| if PCD_KEYWORDS.contains(&tok) { CloudFormat::Pcd } else { CloudFormat::Xyz });
    match format {
        CloudFormat::Xyz => parse_xyz(text),
        CloudFormat::Pcd => parse_pcd(text),
    }
}

/// Split a line into whitespace tokens with their 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_point(line_no: usize, line: &str) -> Result<Point3<f64>, PerceptionError> {
    let toks = tokens(line);
    if toks.len() != 3 {
        return Err(parse_error(
            line_no,
            toks.get(3).map_or(1, |t| t.0),
            format!("expected 3 fields, found {}", toks.len()),
        ));
    }
    let mut xyz = [0.0; 3];
    for (slot, (col, tok)) in xyz.iter_mut().zip(toks) {
        let v: f64 = tok.parse().map_err(|_| parse_error(line_no, col, format!("malformed number `{tok}`")))?;
        if !v.is_finite() {
            return Err(parse_error(line_no, col, format!("non-finite coordinate `{tok}`")));
        }
        *slot = v;
    }
    Ok(Point3::new(xyz[0], xyz[1], xyz[2]))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn parse_xyz(text: &str) -> Result<PointCloud, PerceptionError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        points.push(parse_point(i + 1, line)?);
    }
    Ok(PointCloud { points, frame_id: String::new() })
}

fn parse_pcd(text: &str) -> Result<PointCloud, PerceptionError> {
    let mut lines = text.lines().enumerate();
    let mut declared_points: Option<usize> = None;
    let mut seen_fields = false;

    // header
    loop {
        let Some((i, raw)) = lines.next() else {
            return Err(parse_error(text.lines().count().max(1), 1, "PCD header has no DATA line"));
        };
        let line_no = i + 1;
        let line = strip_comment(raw);
        let toks = tokens(line);
        let Some(&(kw_col, keyword)) = toks.first() else { continue };
        let values: Vec<&str> = toks[1..].iter().map(|t| t.1).collect();
        let value_col = toks.get(1).map_or(kw_col, |t| t.0);
        match keyword {
            "VERSION" | "WIDTH" | "HEIGHT" | "VIEWPOINT" => {}
            "FIELDS" => {
                if values != ["x", "y", "z"] {
                    return Err(parse_error(
                        line_no,
                        value_col,
                        format!("unsupported fields `{}`, only `x y z` is supported", values.join(" ")),
                    ));
                }
                seen_fields = true;
            }
            "SIZE" => {
                if values.len() != 3 || values.iter().any(|v| *v != "4" && *v != "8") {
                    return Err(parse_error(line_no, value_col, "SIZE must list 4 or 8 for each field"));
                }
            }
            "TYPE" => {
                if values != ["F", "F", "F"] {
                    return Err(parse_error(line_no, value_col, "only floating point fields (TYPE F) are supported"));
                }
            }
            "COUNT" => {
                if values != ["1", "1", "1"] {
                    return Err(parse_error(line_no, value_col, "COUNT must be 1 for each field"));
                }
            }
            "POINTS" => {
                let n = values
                    .first()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| parse_error(line_no, value_col, "POINTS needs an integer"))?;
                declared_points = Some(n);
            }
            "DATA" => {
                if values != ["ascii"] {
                    return Err(parse_error(
                        line_no,
                        value_col,
                        format!("unsupported PCD mode `{}`, only ascii is supported", values.join(" ")),
                    ));
                }
                break;
            }
            other => {
                return Err(parse_error(line_no, kw_col, format!("unknown PCD header keyword `{other}`")));
            }
        }
    }
    if !seen_fields {
        return Err(parse_error(1, 1, "PCD header lacks a FIELDS line"));
    }

    let mut points = Vec::new();
    let mut last_line = 0;
    for (i, raw) in lines {
        last_line = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        points.push(parse_point(i + 1, line)?);
    }
    if let Some(n) = declared_points {
        if n != points.len() {
            return Err(parse_error(
                last_line.max(1),
                1,
                format!("header declares {n} points but {} were read", points.len()),
            ));
        }
    }
    Ok(PointCloud { points, frame_id: String::new() })
}

/// XYZ text with shortest round-trip float formatting, so parsing the output
/// reproduces every coordinate bit for bit.
pub fn write_xyz(cloud: &PointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 32);
    for p in &cloud.points {
        let _ = writeln!(out, "{} {} {}", p.x, p.y, p.z);
    }
    out
}

pub fn write_pcd(cloud: &PointCloud) -> String {
    let n = cloud.len();
    let mut out = String::new();
    out.push_str("# .PCD v0.7 - Point Cloud Data file format\n");
    out.push_str("VERSION 0.7\nFIELDS x y z\nSIZE 8 8 8\nTYPE F F F\nCOUNT 1 1 1\n");
    let _ = writeln!(out, "WIDTH {n}\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS {n}\nDATA ascii");
    out.push_str(&write_xyz(cloud));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xyz_two_points() {
        let c = parse_cloud(b"0 0 0\n1 2 3\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.points[1], Point3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn xyz_comments_and_blank_lines() {
        let c = parse_cloud(b"# header\n\n1 1 1 # trailing\n  \n2 2 2").unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn xyz_reports_position_of_bad_number() {
        let err = parse_cloud(b"0 0 0\n1 abc 3\n").unwrap_err();
        assert_eq!(err, PerceptionError::Parse { line: 2, column: 3, message: "malformed number `abc`".into() });
    }

    #[test]
    fn xyz_wrong_field_count() {
        let err = parse_cloud(b"1 2\n").unwrap_err();
        assert!(matches!(err, PerceptionError::Parse { line: 1, .. }));
        let err = parse_cloud(b"1 2 3 4\n").unwrap_err();
        assert!(matches!(err, PerceptionError::Parse { line: 1, column: 7, .. }));
    }

    #[test]
    fn pcd_ascii_subset() {
        let text = "# .PCD v0.7\nVERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\n\
                    WIDTH 2\nHEIGHT 1\nVIEWPOINT 0 0 0 1 0 0 0\nPOINTS 2\nDATA ascii\n0.5 0 1\n-1 2 3\n";
        let c = parse_cloud(text.as_bytes()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.points[0], Point3::new(0.5, 0.0, 1.0));
    }

    #[test]
    fn pcd_rejects_extra_fields() {
        let text = "VERSION 0.7\nFIELDS x y z rgb\nSIZE 4 4 4 4\nTYPE F F F U\nDATA ascii\n";
        let err = parse_cloud(text.as_bytes()).unwrap_err();
        match err {
            PerceptionError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("unsupported fields"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pcd_rejects_binary() {
        let text = "VERSION 0.7\nFIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nDATA binary\n";
        let err = parse_cloud(text.as_bytes()).unwrap_err();
        assert!(matches!(err, PerceptionError::Parse { line: 5, column: 6, .. }));
    }

    #[test]
    fn pcd_point_count_mismatch() {
        let text = "FIELDS x y z\nPOINTS 3\nDATA ascii\n1 2 3\n";
        assert!(parse_cloud(text.as_bytes()).is_err());
    }

    #[test]
    fn pcd_writer_output_parses() {
        let cloud = PointCloud::new(vec![Point3::new(0.1, -0.2, 0.3), Point3::new(1e-9, 2.5, -7.0)], "cam").unwrap();
        let back = parse_cloud(write_pcd(&cloud).as_bytes()).unwrap();
        assert_eq!(back.points, cloud.points);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(parse_cloud(b"1 inf 2\n").is_err());
        assert!(PointCloud::new(vec![Point3::new(f64::NAN, 0.0, 0.0)], "x").is_err());
    }

    #[test]
    fn empty_input_is_an_empty_cloud() {
        let c = parse_cloud(b"# nothing here\n").unwrap();
        assert!(c.is_empty());
        assert!(c.bounds().is_none());
    }
}
