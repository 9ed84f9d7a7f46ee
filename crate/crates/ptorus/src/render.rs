//! Scene assembly and deterministic JSON/SVG output: Δ drawn with straight
//! segments, each line ∂_j of CW as the polyline through its vertices, and the
//! 2-cells filled white or gray.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::complexes::{Color, ColoredComplex, Label, LayeredComplex, Window};
use crate::geometry::CuspDevelopment;
use crate::ogroup::GroupElement;

pub const SCENE_VERSION: &str = "ptorus-scene/1";
/// Labels longer than this are shortened in scenes.
pub const MAX_LABEL: usize = 24;
/// Decimal places of every emitted coordinate.
pub const DECIMALS: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("no developed position for vertex {0}")]
    MissingPosition(String),
}

/// Fixed-precision decimal with −0 printed as 0.
pub fn fixed(x: f64) -> String {
    let s = format!("{:.*}", DECIMALS, x);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(fixed(x)).expect("a decimal is valid JSON")
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&raw(z.re))?;
    seq.serialize_element(&raw(z.im))?;
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SceneVertex {
    pub id: usize,
    /// the word, shortened past [`MAX_LABEL`] letters
    pub label: String,
    pub word_length: usize,
    #[serde(serialize_with = "ser_complex")]
    pub position: Complex64,
    pub color: Option<Color>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SceneEdge {
    pub a: usize,
    pub b: usize,
    pub layer: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polyline {
    pub line: i64,
    /// bottom to top
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SceneFace {
    pub left_line: i64,
    pub index: Option<(i64, i64)>,
    pub color: Color,
    /// boundary, counter-clockwise: up the right path, down the left one
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Viewport {
    #[serde(serialize_with = "ser_complex")]
    pub min: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub max: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowDoc {
    pub m: [i64; 2],
    pub n: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub word: String,
    pub window: WindowDoc,
    #[serde(serialize_with = "ser_complex")]
    pub lambda: Complex64,
    pub vertices: Vec<SceneVertex>,
    pub delta_edges: Vec<SceneEdge>,
    pub cw_polylines: Vec<Polyline>,
    pub faces: Vec<SceneFace>,
    pub viewport: Viewport,
    pub version: String,
}

impl Scene {
    pub fn position(&self, id: usize) -> Complex64 {
        self.vertices[id].position
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Style {
    pub white_fill: String,
    pub gray_fill: String,
    pub delta_stroke: String,
    pub cw_stroke: String,
    /// width of the longer side of the picture, in px
    pub size: f64,
    pub delta_width: f64,
    pub cw_width: f64,
}

impl Default for Style {
    fn default() -> Style {
        Style {
            white_fill: "#ffffff".into(),
            gray_fill: "#d9d9d9".into(),
            delta_stroke: "#000000".into(),
            cw_stroke: "#0000ff".into(),
            size: 800.0,
            delta_width: 0.6,
            cw_width: 1.2,
        }
    }
}

fn short_label(s: &str) -> String {
    if s.len() <= MAX_LABEL {
        s.to_string()
    } else {
        let k = MAX_LABEL / 2 - 1;
        format!("{}..{}", &s[..k], &s[s.len() - k..])
    }
}

/// Assembles the scene of one window.  Every label of `lc` must be known to
/// the development.  Vertices it could not reach (window corners outside
/// every triangle) and CW vertices beyond the Δ window are left out together
/// with the edges, line pieces and cells touching them.  Vertex
/// ids follow (word length, word).
pub fn build_scene(
    word: &str,
    dev: &CuspDevelopment,
    lc: &LayeredComplex,
    cc: &ColoredComplex,
    w: Window,
) -> Result<Scene, RenderError> {
    let dev_index = dev.delta.label_index();
    let colors: HashMap<&GroupElement, Option<Color>> =
        cc.vertices.iter().map(|v| (&*v.label, v.color)).collect();

    let mut used: BTreeMap<(usize, String), (Label, Complex64)> = BTreeMap::new();
    for v in &lc.vertices {
        if !dev_index.contains_key(&*v.label) {
            return Err(RenderError::MissingPosition(short_label(&v.label.to_string())));
        }
    }
    let labels = lc.edges.iter().flat_map(|e| [&lc.vertices[e.a].label, &lc.vertices[e.b].label]);
    let on_lines = cc.lines.values().flatten().map(|&v| &cc.vertices[v].label);
    for l in labels.chain(on_lines) {
        if let Some(z) = dev_index.get(&**l).and_then(|&i| dev.vertex_positions[i]) {
            used.entry((l.len(), l.to_string())).or_insert_with(|| (l.clone(), z));
        }
    }

    let mut vertices = Vec::with_capacity(used.len());
    let mut ids: HashMap<&GroupElement, usize> = HashMap::new();
    for (id, ((len, text), (g, z))) in used.iter().enumerate() {
        let g: &GroupElement = g;
        vertices.push(SceneVertex {
            id,
            label: short_label(text),
            word_length: *len,
            position: *z,
            color: colors.get(g).copied().flatten(),
        });
        ids.insert(g, id);
    }
    let lid = |v: usize| ids.get(&*lc.vertices[v].label).copied();
    let cid = |v: usize| ids.get(&*cc.vertices[v].label).copied();

    let mut delta_edges: Vec<SceneEdge> = lc
        .edges
        .iter()
        .filter_map(|e| {
            let (a, b) = (lid(e.a)?, lid(e.b)?);
            Some(SceneEdge { a: a.min(b), b: a.max(b), layer: e.layer })
        })
        .collect();
    delta_edges.sort();
    delta_edges.dedup();

    // lines split where they leave the developed region
    let mut cw_polylines = Vec::new();
    for (&line, vs) in &cc.lines {
        let mut run = Vec::new();
        for id in vs.iter().map(|&v| cid(v)).chain([None]) {
            match id {
                Some(id) => run.push(id),
                None => {
                    if run.len() >= 2 {
                        cw_polylines.push(Polyline { line, vertices: std::mem::take(&mut run) });
                    }
                    run.clear();
                }
            }
        }
    }

    let mut faces: Vec<SceneFace> = cc
        .faces
        .iter()
        .filter_map(|f| {
            let ring = f.right.iter().chain(f.left[1..f.left.len() - 1].iter().rev());
            let ring: Option<Vec<usize>> = ring.map(|&v| cid(v)).collect();
            Some(SceneFace { left_line: f.left_line, index: f.index, color: f.color, vertices: ring? })
        })
        .collect();
    faces.sort_by(|a, b| (a.left_line, &a.vertices).cmp(&(b.left_line, &b.vertices)));

    let viewport = if vertices.is_empty() {
        Viewport { min: Complex64::new(0.0, 0.0), max: Complex64::new(1.0, 1.0) }
    } else {
        let (mut lo, mut hi) = (vertices[0].position, vertices[0].position);
        for v in &vertices {
            lo = Complex64::new(lo.re.min(v.position.re), lo.im.min(v.position.im));
            hi = Complex64::new(hi.re.max(v.position.re), hi.im.max(v.position.im));
        }
        Viewport { min: lo, max: hi }
    };

    Ok(Scene {
        word: word.to_string(),
        window: WindowDoc { m: [w.m_lo, w.m_hi], n: [w.n_lo, w.n_hi] },
        lambda: dev.lambda,
        vertices,
        delta_edges,
        cw_polylines,
        faces,
        viewport,
        version: SCENE_VERSION.to_string(),
    })
}

/// The scene as pretty-printed JSON with a trailing newline.
pub fn emit_scene_document(scene: &Scene) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(scene).expect("scenes serialize");
    out.push(b'\n');
    out
}

/// The scene as an SVG 1.1 document, y axis pointing up.
pub fn emit_svg(scene: &Scene, style: &Style) -> Vec<u8> {
    let vp = scene.viewport;
    let span = (vp.max - vp.min).re.max((vp.max - vp.min).im).max(1e-12);
    let pad = 10.0;
    let scale = style.size / span;
    let width = (vp.max.re - vp.min.re) * scale + 2.0 * pad;
    let height = (vp.max.im - vp.min.im) * scale + 2.0 * pad;
    let px = |z: Complex64| (fixed((z.re - vp.min.re) * scale + pad), fixed((vp.max.im - z.im) * scale + pad));
    let pt = |id: usize| scene.position(id);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fixed(width),
        h = fixed(height)
    );
    let _ = writeln!(s, "<title>{}</title>", scene.word);

    let _ = writeln!(s, "<g id=\"faces\" stroke=\"none\">");
    for f in &scene.faces {
        let fill = match f.color {
            Color::White => &style.white_fill,
            Color::Gray => &style.gray_fill,
        };
        let points: Vec<String> = f.vertices.iter().map(|&v| {
            let (x, y) = px(pt(v));
            format!("{x},{y}")
        }).collect();
        let _ = writeln!(s, "<polygon fill=\"{fill}\" points=\"{}\"/>", points.join(" "));
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        "<g id=\"delta\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
        style.delta_stroke,
        fixed(style.delta_width)
    );
    for e in &scene.delta_edges {
        let ((x0, y0), (x1, y1)) = (px(pt(e.a)), px(pt(e.b)));
        let _ = writeln!(s, "<path d=\"M {x0} {y0} L {x1} {y1}\"/>");
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        "<g id=\"cw\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
        style.cw_stroke,
        fixed(style.cw_width)
    );
    for l in &scene.cw_polylines {
        let mut d = String::new();
        for (i, &v) in l.vertices.iter().enumerate() {
            let (x, y) = px(pt(v));
            let _ = write!(d, "{}{x} {y}", if i == 0 { "M " } else { " L " });
        }
        if !d.is_empty() {
            let _ = writeln!(s, "<path d=\"{d}\"/>");
        }
    }
    s.push_str("</g>\n</svg>\n");
    s.into_bytes()
}
