//! String diagrams and their Euler characteristic ledger.
//!
//! A ribbon graph is given by a fixed-point-free involution on half-edges
//! (the edges) and a permutation whose cycles are the vertices, each cycle
//! listing its half-edges counterclockwise. Faces are the orbits of
//! `vertex ∘ involution`; the half-edge `h` lies on the boundary of the face
//! containing it. A string diagram colors every face as input or output so
//! that each edge separates an input face from an output face.
//!
//! Signatures `(g, k, l)` record genus, input count and output count of the
//! capped surface; gluing outputs to inputs adds Euler characteristics.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonGraph {
    pub involution: Vec<usize>,
    pub vertices: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceColor {
    In,
    Out,
}

impl fmt::Display for FaceColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceColor::In => "in",
            FaceColor::Out => "out",
        })
    }
}

/// One problem found by [`StringDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvolutionOutOfRange { half_edge: usize, image: usize },
    InvolutionFixedPoint { half_edge: usize },
    NotAnInvolution { half_edge: usize },
    VertexHalfEdgeUnknown { vertex: usize, half_edge: usize },
    HalfEdgeRepeated { half_edge: usize },
    HalfEdgeWithoutVertex { half_edge: usize },
    EmptyVertex { vertex: usize },
    Disconnected { components: usize },
    ColoringKeyInvalid { key: String },
    FaceColoredTwice { face: Vec<usize> },
    FaceUncolored { face: Vec<usize> },
    MonochromeEdge { edge: (usize, usize), color: FaceColor },
    NoInputs,
    NoOutputs,
    LabelKeyInvalid { key: String },
    LabelMissing { face: Vec<usize> },
    LabelsNotConsecutive { color: FaceColor },
    OutputWeights { reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            InvolutionOutOfRange { half_edge, image } => {
                write!(f, "involution sends half-edge {half_edge} to unknown {image}")
            }
            InvolutionFixedPoint { half_edge } => write!(f, "half-edge {half_edge} is its own partner"),
            NotAnInvolution { half_edge } => write!(f, "involution does not pair half-edge {half_edge} back"),
            VertexHalfEdgeUnknown { vertex, half_edge } => {
                write!(f, "vertex {vertex} lists unknown half-edge {half_edge}")
            }
            HalfEdgeRepeated { half_edge } => write!(f, "half-edge {half_edge} appears at two vertex slots"),
            HalfEdgeWithoutVertex { half_edge } => write!(f, "half-edge {half_edge} lies at no vertex"),
            EmptyVertex { vertex } => write!(f, "vertex {vertex} has no half-edges"),
            Disconnected { components } => write!(f, "graph has {components} components"),
            ColoringKeyInvalid { key } => write!(f, "coloring key {key:?} is not a half-edge"),
            FaceColoredTwice { face } => write!(f, "face {face:?} colored more than once"),
            FaceUncolored { face } => write!(f, "face {face:?} has no color"),
            MonochromeEdge { edge, color } => {
                write!(f, "edge {edge:?} has {color} faces on both sides")
            }
            NoInputs => write!(f, "no input faces"),
            NoOutputs => write!(f, "no output faces"),
            LabelKeyInvalid { key } => write!(f, "label key {key:?} is not a half-edge"),
            LabelMissing { face } => write!(f, "face {face:?} has no label"),
            LabelsNotConsecutive { color } => write!(f, "{color} labels are not exactly 1..count"),
            OutputWeights { reason } => write!(f, "output weights: {reason}"),
        }
    }
}

impl RibbonGraph {
    pub fn half_edges(&self) -> usize {
        self.involution.len()
    }

    pub fn edges(&self) -> usize {
        self.involution.len() / 2
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let n = self.half_edges();
        let mut out = Vec::new();
        for (h, &j) in self.involution.iter().enumerate() {
            if j >= n {
                out.push(Violation::InvolutionOutOfRange { half_edge: h, image: j });
            } else if j == h {
                out.push(Violation::InvolutionFixedPoint { half_edge: h });
            } else if self.involution[j] != h {
                out.push(Violation::NotAnInvolution { half_edge: h });
            }
        }
        let mut slot = vec![false; n];
        for (v, cycle) in self.vertices.iter().enumerate() {
            if cycle.is_empty() {
                out.push(Violation::EmptyVertex { vertex: v });
            }
            for &h in cycle {
                if h >= n {
                    out.push(Violation::VertexHalfEdgeUnknown { vertex: v, half_edge: h });
                } else if slot[h] {
                    out.push(Violation::HalfEdgeRepeated { half_edge: h });
                } else {
                    slot[h] = true;
                }
            }
        }
        for (h, placed) in slot.iter().enumerate() {
            if !placed {
                out.push(Violation::HalfEdgeWithoutVertex { half_edge: h });
            }
        }
        out
    }

    /// Next half-edge counterclockwise at the same vertex. Assumes a valid
    /// structure.
    fn rotation(&self) -> Vec<usize> {
        let mut next = vec![0; self.half_edges()];
        for cycle in &self.vertices {
            for (i, &h) in cycle.iter().enumerate() {
                next[h] = cycle[(i + 1) % cycle.len()];
            }
        }
        next
    }

    /// Orbits of `vertex ∘ involution`, each listed from its least member,
    /// in order of least members.
    fn faces(&self) -> Vec<Vec<usize>> {
        let next = self.rotation();
        let mut seen = vec![false; self.half_edges()];
        let mut faces = Vec::new();
        for start in 0..self.half_edges() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(h);
                h = next[self.involution[h]];
            }
            faces.push(face);
        }
        faces
    }

    fn components(&self) -> usize {
        let n = self.half_edges();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for h in 0..n {
            union(h, self.involution[h], &mut parent);
        }
        for cycle in &self.vertices {
            for w in cycle.windows(2) {
                union(w[0], w[1], &mut parent);
            }
        }
        (0..n).filter(|&h| find(&mut parent, h) == h).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StringDiagram {
    #[serde(flatten)]
    pub graph: RibbonGraph,
    /// Face color keyed by any half-edge of the face.
    pub coloring: BTreeMap<String, FaceColor>,
    /// Optional face labels, keyed like `coloring`; inputs and outputs are
    /// each numbered from 1.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, usize>,
    /// Recorded but not simulated: one weight per output, summing to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_weights: Option<Vec<f64>>,
}

/// Faces of a valid diagram with their colors and labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub half_edges: Vec<usize>,
    pub color: FaceColor,
    pub label: usize,
}

impl StringDiagram {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks structure, coloring and labels, returning the colored faces or
    /// every violation found.
    pub fn validate(&self) -> Result<Vec<Face>, Vec<Violation>> {
        let g = &self.graph;
        let structural = g.structural_violations();
        if !structural.is_empty() {
            return Err(structural);
        }
        let mut out = Vec::new();
        let components = g.components();
        if components != 1 {
            out.push(Violation::Disconnected { components });
        }
        let faces = g.faces();
        let mut face_of = vec![0; g.half_edges()];
        for (i, f) in faces.iter().enumerate() {
            for &h in f {
                face_of[h] = i;
            }
        }
        let key_to_face = |key: &str| key.parse::<usize>().ok().filter(|&h| h < g.half_edges()).map(|h| face_of[h]);

        let mut colors: Vec<Option<FaceColor>> = vec![None; faces.len()];
        for (key, &color) in &self.coloring {
            match key_to_face(key) {
                None => out.push(Violation::ColoringKeyInvalid { key: key.clone() }),
                Some(f) if colors[f].is_some() => {
                    out.push(Violation::FaceColoredTwice { face: faces[f].clone() })
                }
                Some(f) => colors[f] = Some(color),
            }
        }
        for (f, c) in colors.iter().enumerate() {
            if c.is_none() {
                out.push(Violation::FaceUncolored { face: faces[f].clone() });
            }
        }
        for h in 0..g.half_edges() {
            let j = g.involution[h];
            if h < j {
                if let (Some(a), Some(b)) = (colors[face_of[h]], colors[face_of[j]]) {
                    if a == b {
                        out.push(Violation::MonochromeEdge { edge: (h, j), color: a });
                    }
                }
            }
        }
        let count = |c: FaceColor| colors.iter().filter(|&&x| x == Some(c)).count();
        let (k, l) = (count(FaceColor::In), count(FaceColor::Out));
        if k == 0 {
            out.push(Violation::NoInputs);
        }
        if l == 0 {
            out.push(Violation::NoOutputs);
        }

        let mut labels = vec![0usize; faces.len()];
        if self.labels.is_empty() {
            // number faces of each color in order of their least half-edge
            let (mut ni, mut no) = (0, 0);
            for (f, c) in colors.iter().enumerate() {
                labels[f] = match c {
                    Some(FaceColor::In) => {
                        ni += 1;
                        ni
                    }
                    _ => {
                        no += 1;
                        no
                    }
                };
            }
        } else {
            for (key, &label) in &self.labels {
                match key_to_face(key) {
                    None => out.push(Violation::LabelKeyInvalid { key: key.clone() }),
                    Some(f) => labels[f] = label,
                }
            }
            for (f, &label) in labels.iter().enumerate() {
                if label == 0 {
                    out.push(Violation::LabelMissing { face: faces[f].clone() });
                }
            }
            for (color, total) in [(FaceColor::In, k), (FaceColor::Out, l)] {
                let mut used: Vec<usize> =
                    (0..faces.len()).filter(|&f| colors[f] == Some(color)).map(|f| labels[f]).collect();
                used.sort_unstable();
                if used != (1..=total).collect::<Vec<_>>() {
                    out.push(Violation::LabelsNotConsecutive { color });
                }
            }
        }

        if let Some(w) = &self.output_weights {
            if w.len() != l {
                out.push(Violation::OutputWeights { reason: format!("{} weights for {l} outputs", w.len()) });
            } else if w.iter().any(|&x| x.is_nan() || x < 0.0) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                out.push(Violation::OutputWeights { reason: "weights must be nonnegative and sum to 1".into() });
            }
        }

        if !out.is_empty() {
            return Err(out);
        }
        Ok(faces
            .into_iter()
            .zip(colors)
            .zip(labels)
            .map(|((half_edges, color), label)| Face { half_edges, color: color.unwrap(), label })
            .collect())
    }

    pub fn signature(&self) -> Result<Signature, Error> {
        let faces = self.validate().map_err(|v| {
            Error::BadSignature(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "))
        })?;
        let v = self.graph.vertices.len() as i64;
        let e = self.graph.edges() as i64;
        let f = faces.len() as i64;
        let two_minus_2g = v - e + f;
        if two_minus_2g > 2 || two_minus_2g % 2 != 0 {
            return Err(Error::BadSignature(format!("V - E + F = {two_minus_2g}")));
        }
        let k = faces.iter().filter(|x| x.color == FaceColor::In).count();
        Signature::new(((2 - two_minus_2g) / 2) as usize, k, faces.len() - k)
    }
}

/// Genus, input count and output count of a combinatorial surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub g: usize,
    pub k: usize,
    pub l: usize,
}

impl Signature {
    pub fn new(g: usize, k: usize, l: usize) -> Result<Self, Error> {
        if k == 0 || l == 0 {
            return Err(Error::BadSignature(format!("({g},{k},{l}) needs at least one input and one output")));
        }
        Ok(Signature { g, k, l })
    }

    pub fn chi(&self) -> i64 {
        2 - 2 * self.g as i64 - self.k as i64 - self.l as i64
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.g, self.k, self.l)
    }
}

/// Dimension `-3χ - 1` of the combinatorial moduli space.
pub fn moduli_dim(s: &Signature) -> Result<u64, Error> {
    let chi = s.chi();
    if chi >= 0 {
        return Err(Error::BadSignature(format!("{s} has χ = {chi} ≥ 0")));
    }
    Ok((-3 * chi - 1) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub signature: Signature,
    pub circles: usize,
}

/// Glues output `out_index` of `s1` to input `in_index` of `s2` (1-based).
pub fn glue_signatures(s1: &Signature, out_index: usize, s2: &Signature, in_index: usize) -> Result<Gluing, Error> {
    glue_along(s1, &[out_index], s2, &[in_index])
}

/// Glues the listed outputs of `s1` to the listed inputs of `s2`, pairwise.
/// Each circle beyond the first raises the genus by one.
pub fn glue_along(s1: &Signature, outs: &[usize], s2: &Signature, ins: &[usize]) -> Result<Gluing, Error> {
    for s in [s1, s2] {
        if s.chi() >= 0 {
            return Err(Error::BadGluing(format!("{s} has χ ≥ 0 and is not a diagram")));
        }
    }
    let j = outs.len();
    if j == 0 || ins.len() != j {
        return Err(Error::BadGluing(format!("{} outputs matched to {} inputs", j, ins.len())));
    }
    let check = |idx: &[usize], max: usize, what: &str| -> Result<(), Error> {
        let mut seen = vec![false; max + 1];
        for &i in idx {
            if i == 0 || i > max {
                return Err(Error::BadGluing(format!("{what} index {i} outside 1..={max}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::BadGluing(format!("{what} index {i} used twice")));
            }
        }
        Ok(())
    };
    check(outs, s1.l, "output")?;
    check(ins, s2.k, "input")?;
    let signature = Signature::new(s1.g + s2.g + j - 1, s1.k + s2.k - j, s1.l + s2.l - j)?;
    debug_assert_eq!(signature.chi(), s1.chi() + s2.chi());
    Ok(Gluing { signature, circles: j })
}

/// One way of writing a signature as a gluing of two diagrams.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CompositionTerm {
    pub circles: usize,
    pub left: Signature,
    pub right: Signature,
    /// Choices of `circles` outputs of `left` matched injectively to inputs
    /// of `right`.
    pub multiplicity: u64,
    pub genus_raising: bool,
}

fn falling(n: usize, j: usize) -> u64 {
    (0..j).map(|i| (n - i) as u64).product()
}

fn binom(n: usize, j: usize) -> u64 {
    falling(n, j) / falling(j, j)
}

/// Every splitting of `s` into `left` glued along some circles into
/// `right`, both with `χ < 0`, sorted by circle count then signatures.
pub fn composition_terms(s: &Signature) -> Result<Vec<CompositionTerm>, Error> {
    if s.chi() >= 0 {
        return Err(Error::BadSignature(format!("{s} has χ ≥ 0")));
    }
    let mut out = Vec::new();
    for j in 1..=s.g + 1 {
        let genus_left = s.g + 1 - j;
        for g1 in 0..=genus_left {
            let g2 = genus_left - g1;
            // k = k1 + k2 - j with k1 >= 1, k2 >= j
            for k1 in 1..=s.k {
                let k2 = s.k + j - k1;
                for l2 in 1..=s.l {
                    let l1 = s.l + j - l2;
                    let left = Signature { g: g1, k: k1, l: l1 };
                    let right = Signature { g: g2, k: k2, l: l2 };
                    if left.chi() >= 0 || right.chi() >= 0 {
                        continue;
                    }
                    out.push(CompositionTerm {
                        circles: j,
                        left,
                        right,
                        multiplicity: binom(l1, j) * falling(k2, j),
                        genus_raising: j > 1,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: usize, k: usize, l: usize) -> Signature {
        Signature::new(g, k, l).unwrap()
    }

    fn figure_eight(lobes: FaceColor) -> StringDiagram {
        let other = if lobes == FaceColor::In { FaceColor::Out } else { FaceColor::In };
        StringDiagram {
            graph: RibbonGraph { involution: vec![1, 0, 3, 2], vertices: vec![vec![0, 1, 2, 3]] },
            coloring: [("0".to_string(), other), ("1".to_string(), lobes), ("3".to_string(), lobes)]
                .into_iter()
                .collect(),
            labels: BTreeMap::new(),
            output_weights: None,
        }
    }

    #[test]
    fn bracket_and_cobracket_diagrams() {
        assert_eq!(figure_eight(FaceColor::In).signature().unwrap(), sig(0, 2, 1));
        assert_eq!(figure_eight(FaceColor::Out).signature().unwrap(), sig(0, 1, 2));
    }

    #[test]
    fn punctured_torus_diagram() {
        let d = StringDiagram::from_json(
            r#"{"involution":[1,0,3,2,5,4],"vertices":[[0,2,4,1,3,5]],
                "coloring":{"0":"in","1":"out"}}"#,
        )
        .unwrap();
        let s = d.signature().unwrap();
        assert_eq!(s, sig(1, 1, 1));
        assert_eq!(s.chi(), -2);
        assert_eq!(moduli_dim(&s).unwrap(), 5);
    }

    #[test]
    fn violations() {
        // theta graph embedded in the plane: the three faces pairwise share
        // an edge, so no proper two-coloring exists
        let theta = RibbonGraph { involution: vec![1, 0, 3, 2, 5, 4], vertices: vec![vec![0, 2, 4], vec![5, 3, 1]] };
        assert_eq!(theta.faces().len(), 3);
        for mask in 0..8u32 {
            let coloring = theta
                .faces()
                .iter()
                .enumerate()
                .map(|(i, f)| (f[0].to_string(), if mask >> i & 1 == 1 { FaceColor::In } else { FaceColor::Out }))
                .collect();
            let d = StringDiagram { graph: theta.clone(), coloring, labels: BTreeMap::new(), output_weights: None };
            assert!(d.validate().is_err());
        }

        let mut d = figure_eight(FaceColor::In);
        d.coloring.insert("0".into(), FaceColor::In);
        let v = d.validate().unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::MonochromeEdge { .. })), "{v:?}");

        let single = StringDiagram {
            graph: RibbonGraph { involution: vec![1, 0], vertices: vec![vec![0], vec![1]] },
            coloring: [("0".to_string(), FaceColor::In)].into_iter().collect(),
            labels: BTreeMap::new(),
            output_weights: None,
        };
        let v = single.validate().unwrap_err();
        assert!(v.contains(&Violation::MonochromeEdge { edge: (0, 1), color: FaceColor::In }));
        assert!(v.contains(&Violation::NoOutputs));

        let broken = StringDiagram {
            graph: RibbonGraph { involution: vec![0, 2, 1], vertices: vec![vec![0, 1]] },
            ..single.clone()
        };
        let v = broken.validate().unwrap_err();
        assert!(v.contains(&Violation::InvolutionFixedPoint { half_edge: 0 }));
        assert!(v.contains(&Violation::HalfEdgeWithoutVertex { half_edge: 2 }));
    }

    #[test]
    fn labels_and_weights() {
        let mut d = figure_eight(FaceColor::In);
        d.labels = [("0", 1), ("1", 2), ("3", 1)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let faces = d.validate().unwrap();
        assert_eq!(faces.iter().map(|f| f.label).collect::<Vec<_>>(), [1, 2, 1]);
        d.labels.insert("3".into(), 2);
        assert!(d.validate().unwrap_err().contains(&Violation::LabelsNotConsecutive { color: FaceColor::In }));
        let mut d = figure_eight(FaceColor::Out);
        d.output_weights = Some(vec![0.25, 0.75]);
        assert!(d.validate().is_ok());
        d.output_weights = Some(vec![0.5, 0.75]);
        assert!(d.validate().is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(moduli_dim(&sig(0, 2, 1)).unwrap(), 2);
        assert_eq!(moduli_dim(&sig(1, 1, 1)).unwrap(), 5);
        assert_eq!(moduli_dim(&sig(0, 3, 1)).unwrap(), 5);
        assert!(moduli_dim(&sig(0, 1, 1)).is_err());
    }

    #[test]
    fn gluing_examples() {
        let g = glue_signatures(&sig(0, 2, 1), 1, &sig(0, 2, 1), 1).unwrap();
        assert_eq!(g.signature, sig(0, 3, 1));
        let g = glue_signatures(&sig(0, 2, 1), 1, &sig(0, 1, 2), 1).unwrap();
        assert_eq!(g.signature, sig(0, 2, 2));
        assert_eq!(moduli_dim(&g.signature).unwrap(), 5);
        let g = glue_along(&sig(0, 1, 2), &[1, 2], &sig(0, 2, 1), &[2, 1]).unwrap();
        assert_eq!(g.signature, sig(1, 1, 1));
        assert_eq!(g.circles, 2);
        assert!(glue_signatures(&sig(0, 2, 1), 2, &sig(0, 2, 1), 1).is_err());
        assert!(glue_along(&sig(0, 1, 2), &[1, 1], &sig(0, 2, 1), &[1, 2]).is_err());
        assert!(glue_signatures(&sig(0, 1, 1), 1, &sig(0, 2, 1), 1).is_err());
    }

    #[test]
    fn composition_examples() {
        let t = composition_terms(&sig(0, 3, 1)).unwrap();
        assert!(t.iter().any(|c| c.left == sig(0, 2, 1) && c.right == sig(0, 2, 1) && c.circles == 1));
        assert!(composition_terms(&sig(0, 2, 1)).unwrap().is_empty());
        let t = composition_terms(&sig(1, 1, 1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].left, sig(0, 1, 2));
        assert_eq!(t[0].right, sig(0, 2, 1));
        assert!(t[0].genus_raising);
        assert_eq!(t[0].multiplicity, 2);
    }
}
