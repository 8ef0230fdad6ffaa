//! Mesh and data exports: ASCII PLY, Wavefront OBJ, CSV, and a curvature
//! JSON document. All floating-point values are written with 17
//! significant digits so re-imports reproduce the in-memory values
//! exactly.
//!
//! Surfaces live in R^4, so PLY/OBJ need a projection choosing three of
//! the four coordinates. The PLY writer keeps the full information by
//! attaching the dropped coordinate and the two curvatures as extra
//! vertex properties.

use std::io::Write;

use weier4_core::geometry::{GridSpec, SurfacePatch};

use crate::error::{AppError, AppResult};
use crate::pipeline::CurvatureNode;

/// Which three of the four coordinates (x, y, z, w) survive projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Xyz,
    Xyw,
    Xzw,
    Yzw,
}

impl Projection {
    /// Indices of the kept coordinates, in output order.
    pub fn kept(self) -> [usize; 3] {
        match self {
            Projection::Xyz => [0, 1, 2],
            Projection::Xyw => [0, 1, 3],
            Projection::Xzw => [0, 2, 3],
            Projection::Yzw => [1, 2, 3],
        }
    }

    /// Index of the dropped coordinate.
    pub fn dropped(self) -> usize {
        match self {
            Projection::Xyz => 3,
            Projection::Xyw => 2,
            Projection::Xzw => 1,
            Projection::Yzw => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Projection::Xyz => "xyz",
            Projection::Xyw => "xyw",
            Projection::Xzw => "xzw",
            Projection::Yzw => "yzw",
        }
    }
}

/// Parse a `--project` value; `none` means no projection.
pub fn parse_projection(s: &str) -> AppResult<Option<Projection>> {
    match s {
        "xyz" => Ok(Some(Projection::Xyz)),
        "xyw" => Ok(Some(Projection::Xyw)),
        "xzw" => Ok(Some(Projection::Xzw)),
        "yzw" => Ok(Some(Projection::Yzw)),
        "none" => Ok(None),
        other => Err(AppError::Usage(format!(
            "unknown projection `{other}` (expected xyz, xyw, xzw, yzw, or none)"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ply,
    Obj,
    Csv,
    CurvatureJson,
}

/// Infer an export format from a file name, preferring the extension.
pub fn format_from_path(path: &std::path::Path) -> AppResult<Format> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "ply" => Ok(Format::Ply),
        "obj" => Ok(Format::Obj),
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::CurvatureJson),
        other => Err(AppError::Usage(format!(
            "cannot infer output format from extension `{other}` \
             (expected .ply, .obj, .csv, or .json)"
        ))),
    }
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Grid triangulation: each cell splits along the diagonal from its
/// lower-left corner.
fn faces(grid: &GridSpec) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(2 * (grid.rows - 1) * (grid.cols - 1));
    for r in 0..grid.rows - 1 {
        for c in 0..grid.cols - 1 {
            let n = grid.idx(r, c);
            out.push([n, n + 1, n + grid.cols + 1]);
            out.push([n, n + grid.cols + 1, n + grid.cols]);
        }
    }
    out
}

/// ASCII PLY of a projected R^4 patch. The dropped coordinate and the
/// curvatures ride along as the extra vertex properties `w`, `gauss_k`,
/// and `normal_k`.
pub fn write_ply(
    out: &mut dyn Write,
    patch: &SurfacePatch,
    gauss_k: &[f64],
    normal_k: &[f64],
    proj: Projection,
) -> AppResult<()> {
    let n = patch.grid.n_nodes();
    if gauss_k.len() != n || normal_k.len() != n {
        return Err(AppError::Invalid(
            "ply export: curvature arrays must match the grid".into(),
        ));
    }
    let tri = faces(&patch.grid);
    writeln!(out, "ply")?;
    writeln!(out, "format ascii 1.0")?;
    writeln!(out, "element vertex {n}")?;
    writeln!(out, "property float x")?;
    writeln!(out, "property float y")?;
    writeln!(out, "property float z")?;
    writeln!(out, "property float w")?;
    writeln!(out, "property float gauss_k")?;
    writeln!(out, "property float normal_k")?;
    writeln!(out, "element face {}", tri.len())?;
    writeln!(out, "property list uchar int vertex_indices")?;
    writeln!(out, "end_header")?;
    let kept = proj.kept();
    let dropped = proj.dropped();
    for (i, p) in patch.points().iter().enumerate() {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            f(p[kept[0]]),
            f(p[kept[1]]),
            f(p[kept[2]]),
            f(p[dropped]),
            f(gauss_k[i]),
            f(normal_k[i])
        )?;
    }
    for t in &tri {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// ASCII PLY of a patch whose fourth coordinate is identically zero
/// (surfaces built in R^3). Plain x/y/z vertices, no extra properties.
pub fn write_ply3(out: &mut dyn Write, patch: &SurfacePatch) -> AppResult<()> {
    let tri = faces(&patch.grid);
    writeln!(out, "ply")?;
    writeln!(out, "format ascii 1.0")?;
    writeln!(out, "element vertex {}", patch.grid.n_nodes())?;
    writeln!(out, "property float x")?;
    writeln!(out, "property float y")?;
    writeln!(out, "property float z")?;
    writeln!(out, "element face {}", tri.len())?;
    writeln!(out, "property list uchar int vertex_indices")?;
    writeln!(out, "end_header")?;
    for p in patch.points() {
        writeln!(out, "{} {} {}", f(p[0]), f(p[1]), f(p[2]))?;
    }
    for t in &tri {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

pub fn write_obj(out: &mut dyn Write, patch: &SurfacePatch, proj: Projection) -> AppResult<()> {
    let kept = proj.kept();
    for p in patch.points() {
        writeln!(out, "v {} {} {}", f(p[kept[0]]), f(p[kept[1]]), f(p[kept[2]]))?;
    }
    for t in faces(&patch.grid) {
        // OBJ indices are 1-based.
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

/// CSV of a patch: a grid comment, a header, then one row per node in
/// row-major order.
pub fn write_csv(out: &mut dyn Write, patch: &SurfacePatch) -> AppResult<()> {
    let g = &patch.grid;
    writeln!(
        out,
        "# grid {} {} {} {} {}",
        f(g.u0),
        f(g.v0),
        f(g.h),
        g.rows,
        g.cols
    )?;
    writeln!(out, "u,v,x1,x2,x3,x4,E")?;
    for r in 0..g.rows {
        for c in 0..g.cols {
            let (u, v) = g.node(r, c);
            let p = patch.point(r, c);
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                f(u),
                f(v),
                f(p[0]),
                f(p[1]),
                f(p[2]),
                f(p[3]),
                f(patch.e(r, c))
            )?;
        }
    }
    Ok(())
}

/// Rebuild a patch from [`write_csv`] output.
pub fn parse_csv(text: &str) -> AppResult<SurfacePatch> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| AppError::Invalid("csv: empty input".into()))?;
    let rest = header
        .strip_prefix("# grid ")
        .ok_or_else(|| AppError::Invalid("csv: missing `# grid` line".into()))?;
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 5 {
        return Err(AppError::Invalid("csv: malformed grid line".into()));
    }
    let bad = |what: &str| AppError::Invalid(format!("csv: bad {what} in grid line"));
    let u0: f64 = parts[0].parse().map_err(|_| bad("u0"))?;
    let v0: f64 = parts[1].parse().map_err(|_| bad("v0"))?;
    let h: f64 = parts[2].parse().map_err(|_| bad("spacing"))?;
    let rows: usize = parts[3].parse().map_err(|_| bad("row count"))?;
    let cols: usize = parts[4].parse().map_err(|_| bad("column count"))?;
    let grid = GridSpec::new(u0, v0, h, rows, cols).map_err(AppError::Core)?;
    match lines.next() {
        Some("u,v,x1,x2,x3,x4,E") => {}
        _ => return Err(AppError::Invalid("csv: missing column header".into())),
    }
    let mut points = Vec::with_capacity(grid.n_nodes());
    let mut e = Vec::with_capacity(grid.n_nodes());
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(AppError::Invalid(format!("csv: malformed row `{line}`")));
        }
        let mut vals = [0.0f64; 7];
        for (slot, cell) in vals.iter_mut().zip(&cells) {
            *slot = cell
                .parse()
                .map_err(|_| AppError::Invalid(format!("csv: bad number `{cell}`")))?;
        }
        points.push([vals[2], vals[3], vals[4], vals[5]]);
        e.push(vals[6]);
    }
    // Recover the origin-pinned flag from the data itself.
    let mut pinned = false;
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            let (u, v) = grid.node(r, c);
            if u.abs() < grid.h / 2.0 && v.abs() < grid.h / 2.0 {
                let p = points
                    .get(grid.idx(r, c))
                    .ok_or_else(|| AppError::Invalid("csv: too few rows".into()))?;
                pinned = p.iter().map(|x| x * x).sum::<f64>() < 1e-20;
            }
        }
    }
    SurfacePatch::from_parts(grid, points, e, pinned).map_err(AppError::Core)
}

/// Raw contents of an ASCII PLY file, for round-trip verification.
#[derive(Debug)]
pub struct PlyData {
    pub properties: Vec<String>,
    pub vertices: Vec<Vec<f64>>,
    pub faces: Vec<[usize; 3]>,
}

pub fn parse_ply(text: &str) -> AppResult<PlyData> {
    let mut lines = text.lines();
    let bad = |msg: &str| AppError::Invalid(format!("ply: {msg}"));
    if lines.next() != Some("ply") {
        return Err(bad("missing magic line"));
    }
    if lines.next() != Some("format ascii 1.0") {
        return Err(bad("unsupported format"));
    }
    let mut n_vertices = 0usize;
    let mut n_faces = 0usize;
    let mut properties = Vec::new();
    let mut in_vertex = false;
    for line in lines.by_ref() {
        if line == "end_header" {
            break;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["element", "vertex", n] => {
                n_vertices = n.parse().map_err(|_| bad("bad vertex count"))?;
                in_vertex = true;
            }
            ["element", "face", n] => {
                n_faces = n.parse().map_err(|_| bad("bad face count"))?;
                in_vertex = false;
            }
            ["property", "float", name] if in_vertex => {
                properties.push((*name).to_string());
            }
            ["property", "list", ..] => {}
            _ => return Err(bad(&format!("unexpected header line `{line}`"))),
        }
    }
    let mut vertices = Vec::with_capacity(n_vertices);
    for _ in 0..n_vertices {
        let line = lines.next().ok_or_else(|| bad("truncated vertex data"))?;
        let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        let vals = vals.map_err(|_| bad("bad vertex value"))?;
        if vals.len() != properties.len() {
            return Err(bad("vertex arity mismatch"));
        }
        vertices.push(vals);
    }
    let mut faces = Vec::with_capacity(n_faces);
    for _ in 0..n_faces {
        let line = lines.next().ok_or_else(|| bad("truncated face data"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "3" {
            return Err(bad("only triangles are supported"));
        }
        let mut idx = [0usize; 3];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            *slot = tok.parse().map_err(|_| bad("bad face index"))?;
        }
        faces.push(idx);
    }
    Ok(PlyData { properties, vertices, faces })
}

/// Curvature report over a grid as a JSON document:
/// `{"grid": {...}, "nodes": [{"x": [..], "K": .., "kappa": .., "nu": ..,
/// "mu": .., "E": ..}, ...]}` with `nu`/`mu` null where the ellipse
/// invariants are undefined.
pub fn write_curvature_json(
    out: &mut dyn Write,
    grid: &GridSpec,
    nodes: &[CurvatureNode],
) -> AppResult<()> {
    let opt = |v: Option<f64>| v.map_or_else(|| "null".to_string(), f);
    writeln!(out, "{{")?;
    writeln!(
        out,
        "  \"grid\": {{\"u0\": {}, \"v0\": {}, \"h\": {}, \"rows\": {}, \"cols\": {}}},",
        f(grid.u0),
        f(grid.v0),
        f(grid.h),
        grid.rows,
        grid.cols
    )?;
    writeln!(out, "  \"nodes\": [")?;
    for (i, node) in nodes.iter().enumerate() {
        let sep = if i + 1 == nodes.len() { "" } else { "," };
        writeln!(
            out,
            "    {{\"x\": [{}, {}, {}, {}], \"K\": {}, \"kappa\": {}, \
             \"nu\": {}, \"mu\": {}, \"E\": {}}}{sep}",
            f(node.x[0]),
            f(node.x[1]),
            f(node.x[2]),
            f(node.x[3]),
            f(node.k),
            f(node.kappa),
            opt(node.nu),
            opt(node.mu),
            f(node.e)
        )?;
    }
    writeln!(out, "  ]")?;
    writeln!(out, "}}")?;
    Ok(())
}
