//! Report records and their serialization: pretty JSON documents with a
//! stable field order, and comma-separated tables with LF line endings.
//! CSV numbers carry 17 significant digits, enough for a reader to
//! recover every double exactly; JSON numbers rely on serde_json's
//! shortest round-trip encoding for the same guarantee.

use serde::Serialize;
use spdsr::interp::Trajectory;
use spdsr::{AntiSym, Frame, MinimalPairResult, MultiplicityClass, Rotation, TrajectorySample};

use crate::CliError;

/// Formats with 17 significant digits; parsing the text recovers the
/// exact double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Renders a header and rows as CSV. No field ever contains a comma, so
/// no quoting is involved.
fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Pretty JSON document with a trailing newline.
pub fn json_doc<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// One eigen-decomposition in a report: rotation matrix rows and the
/// diagonal scaling entries.
#[derive(Serialize)]
pub struct FrameOut {
    pub rotation: Vec<Vec<f64>>,
    pub scalings: Vec<f64>,
}

impl FrameOut {
    pub fn of(f: &Frame) -> FrameOut {
        FrameOut {
            rotation: rotation_rows(f.u()),
            scalings: f.d().entries().to_vec(),
        }
    }
}

fn rotation_rows(r: &Rotation) -> Vec<Vec<f64>> {
    let m = r.matrix();
    (0..r.p())
        .map(|i| (0..r.p()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Rotation component of a curve velocity: the angle swept per unit
/// time (signed in the plane for p = 2) and, for p = 3, the unit axis.
#[derive(Serialize)]
pub struct RotationOut {
    pub angle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
}

impl RotationOut {
    fn of(a: &AntiSym) -> RotationOut {
        match a {
            AntiSym::Planar(t) => RotationOut {
                angle: *t,
                axis: None,
            },
            AntiSym::Spatial(v) => {
                let n = v.norm();
                let axis = if n > 0.0 {
                    [v.x / n, v.y / n, v.z / n]
                } else {
                    [0.0, 0.0, 0.0]
                };
                RotationOut {
                    angle: n,
                    axis: Some(axis),
                }
            }
        }
    }
}

/// Velocity of the minimal curve.
#[derive(Serialize)]
pub struct CurveOut {
    pub rotation: RotationOut,
    pub log_scalings: Vec<f64>,
}

/// One distance record.
#[derive(Serialize)]
pub struct DistanceOut {
    pub record: usize,
    pub p: usize,
    pub distance: f64,
    pub class_x: String,
    pub class_y: String,
    pub frame_x: FrameOut,
    pub frame_y: FrameOut,
    pub curve: CurveOut,
    pub tie_count: usize,
    pub involution: bool,
    pub near_multiplicity: bool,
}

impl DistanceOut {
    pub fn of(record: usize, r: &MinimalPairResult) -> DistanceOut {
        DistanceOut {
            record,
            p: r.pair.0.p(),
            distance: r.distance,
            class_x: class_str(&r.class_x),
            class_y: class_str(&r.class_y),
            frame_x: FrameOut::of(&r.pair.0),
            frame_y: FrameOut::of(&r.pair.1),
            curve: CurveOut {
                rotation: RotationOut::of(r.curve.velocity().a()),
                log_scalings: r.curve.velocity().l().entries().to_vec(),
            },
            tie_count: r.ties.len(),
            involution: r.involution,
            near_multiplicity: r.near_multiplicity,
        }
    }
}

fn class_str(c: &MultiplicityClass) -> String {
    match c {
        MultiplicityClass::Distinct => "distinct".to_string(),
        MultiplicityClass::Pair { repeated } => {
            format!("pair({}-{})", repeated[0] + 1, repeated[1] + 1)
        }
        MultiplicityClass::Triple => "triple".to_string(),
    }
}

const DISTANCE_HEADER: [&str; 39] = [
    "record",
    "p",
    "distance",
    "class_x",
    "class_y",
    "tie_count",
    "involution",
    "near_multiplicity",
    "a_angle",
    "a_axis_1",
    "a_axis_2",
    "a_axis_3",
    "l_1",
    "l_2",
    "l_3",
    "ux_11",
    "ux_12",
    "ux_13",
    "ux_21",
    "ux_22",
    "ux_23",
    "ux_31",
    "ux_32",
    "ux_33",
    "dx_1",
    "dx_2",
    "dx_3",
    "uy_11",
    "uy_12",
    "uy_13",
    "uy_21",
    "uy_22",
    "uy_23",
    "uy_31",
    "uy_32",
    "uy_33",
    "dy_1",
    "dy_2",
    "dy_3",
];

/// Flat table form of the distance report. Cells that only exist for
/// 3x3 records (axis components, third scalings, third rotation row and
/// column) stay empty on 2x2 rows, so mixed batches share one header.
pub fn distance_csv(records: &[DistanceOut]) -> String {
    let rows: Vec<Vec<String>> = records.iter().map(distance_row).collect();
    csv_table(&DISTANCE_HEADER, &rows)
}

fn distance_row(r: &DistanceOut) -> Vec<String> {
    let mut row = vec![
        r.record.to_string(),
        r.p.to_string(),
        fmt_f64(r.distance),
        r.class_x.clone(),
        r.class_y.clone(),
        r.tie_count.to_string(),
        r.involution.to_string(),
        r.near_multiplicity.to_string(),
        fmt_f64(r.curve.rotation.angle),
    ];
    match r.curve.rotation.axis {
        Some(a) => row.extend(a.iter().map(|&v| fmt_f64(v))),
        None => row.extend([String::new(), String::new(), String::new()]),
    }
    row.extend(padded(&r.curve.log_scalings));
    row.extend(rotation_cells(&r.frame_x.rotation));
    row.extend(padded(&r.frame_x.scalings));
    row.extend(rotation_cells(&r.frame_y.rotation));
    row.extend(padded(&r.frame_y.scalings));
    row
}

fn padded(vals: &[f64]) -> Vec<String> {
    (0..3)
        .map(|i| vals.get(i).map(|&v| fmt_f64(v)).unwrap_or_default())
        .collect()
}

fn rotation_cells(rows: &[Vec<f64>]) -> Vec<String> {
    let mut cells = vec![String::new(); 9];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            cells[3 * i + j] = fmt_f64(v);
        }
    }
    cells
}

/// One version-enumeration record: either the finite list of versions
/// or the eigenvalue partition that makes the fiber infinite.
#[derive(Serialize)]
pub struct VersionsOut {
    pub record: usize,
    pub p: usize,
    pub infinite_fiber: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub versions: Option<Vec<FrameOut>>,
    /// Eigenvalue equality blocks, one-based; present only when the
    /// fiber is infinite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
}

const VERSIONS_HEADER: [&str; 17] = [
    "record",
    "p",
    "status",
    "version",
    "partition",
    "u_11",
    "u_12",
    "u_13",
    "u_21",
    "u_22",
    "u_23",
    "u_31",
    "u_32",
    "u_33",
    "d_1",
    "d_2",
    "d_3",
];

/// Flat table form of the versions report: one row per version, or a
/// single `infinite` row carrying the partition as `1-2|3`-style text.
pub fn versions_csv(records: &[VersionsOut]) -> String {
    let mut rows = Vec::new();
    for r in records {
        match &r.versions {
            Some(versions) => {
                for (v, frame) in versions.iter().enumerate() {
                    let mut row = vec![
                        r.record.to_string(),
                        r.p.to_string(),
                        "finite".to_string(),
                        v.to_string(),
                        String::new(),
                    ];
                    row.extend(rotation_cells(&frame.rotation));
                    row.extend(padded(&frame.scalings));
                    rows.push(row);
                }
            }
            None => {
                let blocks = r.partition.as_deref().unwrap_or(&[]);
                let mut row = vec![
                    r.record.to_string(),
                    r.p.to_string(),
                    "infinite".to_string(),
                    String::new(),
                    partition_cell(blocks),
                ];
                row.resize(VERSIONS_HEADER.len(), String::new());
                rows.push(row);
            }
        }
    }
    csv_table(&VERSIONS_HEADER, &rows)
}

/// Renders one-based partition blocks without commas: `1-2|3` for the
/// partition {{1,2},{3}}.
fn partition_cell(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("-")
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// One-based copy of partition blocks for reports.
pub fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|&i| i + 1).collect())
        .collect()
}

/// One row of a rotation-weight sweep.
#[derive(Serialize)]
pub struct KsweepOut {
    pub record: usize,
    pub k: f64,
    pub distance: f64,
    pub character: String,
}

pub fn ksweep_csv(rows: &[KsweepOut]) -> String {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.record.to_string(),
                fmt_f64(r.k),
                fmt_f64(r.distance),
                r.character.clone(),
            ]
        })
        .collect();
    csv_table(&["record", "k", "distance", "character"], &table)
}

/// One sampled point of a trajectory file. The matrix entries are the
/// upper triangle; for p = 2 the three cells that a 2x2 lacks are
/// absent.
#[derive(Serialize)]
pub struct SampleOut {
    pub t: f64,
    pub m11: f64,
    pub m12: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m13: Option<f64>,
    pub m22: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m23: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m33: Option<f64>,
    pub det: f64,
    pub fa: f64,
    pub md: f64,
    /// Null when the principal axis is ambiguous at this sample.
    pub angle: Option<f64>,
}

/// One trajectory file.
#[derive(Serialize)]
pub struct TrajectoryOut {
    pub record: usize,
    pub scheme: String,
    pub p: usize,
    /// For p = 2 the anisotropy index extends the sqrt(p/(p-1))
    /// normalization down from p = 3.
    pub fa_extension: bool,
    pub samples: Vec<SampleOut>,
}

impl TrajectoryOut {
    pub fn of(record: usize, traj: &Trajectory) -> TrajectoryOut {
        let p = traj.samples[0].m.p();
        TrajectoryOut {
            record,
            scheme: traj.scheme.token().to_string(),
            p,
            fa_extension: p == 2,
            samples: traj.samples.iter().map(|s| sample_out(s, p)).collect(),
        }
    }
}

fn sample_out(s: &TrajectorySample, p: usize) -> SampleOut {
    let u = s.m.upper();
    let (m13, m22, m23, m33) = match p {
        2 => (None, u[2], None, None),
        _ => (Some(u[2]), u[3], Some(u[4]), Some(u[5])),
    };
    SampleOut {
        t: s.t,
        m11: u[0],
        m12: u[1],
        m13,
        m22,
        m23,
        m33,
        det: s.det,
        fa: s.fa,
        md: s.md,
        angle: s.angle,
    }
}

/// Plot-ready table of one trajectory: time, upper-triangle entries,
/// tensor statistics, and the rotation angle from the start (empty when
/// the principal axis is ambiguous at that sample).
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let p = traj.samples[0].m.p();
    let header: &[&str] = match p {
        2 => &["t", "m11", "m12", "m22", "det", "fa", "md", "angle"],
        _ => &[
            "t", "m11", "m12", "m13", "m22", "m23", "m33", "det", "fa", "md", "angle",
        ],
    };
    let rows: Vec<Vec<String>> = traj
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![fmt_f64(s.t)];
            row.extend(s.m.upper().iter().map(|&v| fmt_f64(v)));
            row.push(fmt_f64(s.det));
            row.push(fmt_f64(s.fa));
            row.push(fmt_f64(s.md));
            row.push(fmt_opt(s.angle));
            row
        })
        .collect();
    csv_table(header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip_exactly() {
        for v in [
            0.0,
            1.0,
            75.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            1.7e300,
            5e-324,
            -2.2250738585072014e-308,
        ] {
            let text = fmt_f64(v);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {text}");
        }
    }

    #[test]
    fn csv_rows_end_with_lf_only() {
        let table = csv_table(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(table, "a,b\n1,2\n");
    }

    #[test]
    fn partition_cells_avoid_commas() {
        assert_eq!(partition_cell(&[vec![1, 2], vec![3]]), "1-2|3");
        assert_eq!(partition_cell(&[vec![1, 2, 3]]), "1-2-3");
    }

    #[test]
    fn class_labels_are_one_based() {
        assert_eq!(class_str(&MultiplicityClass::Distinct), "distinct");
        assert_eq!(
            class_str(&MultiplicityClass::Pair { repeated: [0, 2] }),
            "pair(1-3)"
        );
        assert_eq!(class_str(&MultiplicityClass::Triple), "triple");
    }

    #[test]
    fn two_by_two_rotation_cells_fill_their_named_slots() {
        let cells = rotation_cells(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(cells[0], fmt_f64(1.0));
        assert_eq!(cells[1], fmt_f64(2.0));
        assert!(cells[2].is_empty());
        assert_eq!(cells[3], fmt_f64(3.0));
        assert_eq!(cells[4], fmt_f64(4.0));
        assert!(cells[5..].iter().all(String::is_empty));
    }
}
