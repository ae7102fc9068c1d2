use std::collections::BTreeMap;

use gtlie_core::diagrams::{
    composition_terms, glue_along, moduli_dim, FaceColor, RibbonGraph, Signature, StringDiagram,
};

/// Heap's algorithm.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            go(k - 1, a, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(n, &mut a, &mut out);
    out
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut c = Vec::new();
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            c.push(h);
            h = perm[h];
        }
        if !c.is_empty() {
            out.push(c);
        }
    }
    out
}

fn connected(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[test]
fn validate_agrees_with_face_adjacency() {
    let mut valid_by_sig: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for edges in 1..=4 {
        let n = 2 * edges;
        let involution: Vec<usize> = (0..n).map(|h| h ^ 1).collect();
        for sigma in permutations(n) {
            let vertices = cycles(&sigma);
            // faces are orbits of sigma after the involution
            let phi: Vec<usize> = (0..n).map(|h| sigma[involution[h]]).collect();
            let faces = cycles(&phi);
            let mut face_of = vec![0; n];
            for (i, f) in faces.iter().enumerate() {
                for &h in f {
                    face_of[h] = i;
                }
            }
            let conn = connected(n, (0..n).map(|h| (h, involution[h])).chain((0..n).map(|h| (h, sigma[h]))));
            for mask in 0u32..1 << faces.len() {
                let color = |f: usize| mask >> f & 1 == 1;
                let bipartite = (0..n).all(|h| color(face_of[h]) != color(face_of[involution[h]]));
                let k = (0..faces.len()).filter(|&f| color(f)).count();
                let expected = conn && bipartite && k >= 1 && k < faces.len();
                let d = StringDiagram {
                    graph: RibbonGraph { involution: involution.clone(), vertices: vertices.clone() },
                    coloring: faces
                        .iter()
                        .enumerate()
                        .map(|(i, f)| {
                            (f[f.len() - 1].to_string(), if color(i) { FaceColor::In } else { FaceColor::Out })
                        })
                        .collect(),
                    labels: BTreeMap::new(),
                    output_weights: None,
                };
                assert_eq!(d.validate().is_ok(), expected, "{d:?}");
                if expected {
                    let s = d.signature().unwrap();
                    let euler = vertices.len() as i64 - edges as i64 + faces.len() as i64;
                    assert_eq!(2 - 2 * s.g as i64, euler);
                    assert_eq!((s.k, s.l), (k, faces.len() - k));
                    *valid_by_sig.entry((s.g, s.k, s.l)).or_default() += 1;
                }
            }
        }
    }
    for sig in [(0, 2, 1), (0, 1, 2), (0, 1, 1), (1, 1, 1)] {
        assert!(valid_by_sig.contains_key(&sig), "{sig:?} never realized");
    }
}

fn all_signatures(max: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for g in 0..=max {
        for k in 1..=max {
            for l in 1..=max {
                let s = Signature::new(g, k, l).unwrap();
                if s.chi() < 0 {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[test]
fn every_gluing_adds_euler_characteristic() {
    let sigs = all_signatures(3);
    for a in &sigs {
        for b in &sigs {
            for j in 1..=a.l.min(b.k) {
                let outs: Vec<usize> = (1..=j).collect();
                let ins: Vec<usize> = (1..=j).rev().collect();
                let glued = glue_along(a, &outs, b, &ins).unwrap();
                assert_eq!(glued.signature.chi(), a.chi() + b.chi());
                assert_eq!(
                    moduli_dim(&glued.signature).unwrap(),
                    moduli_dim(a).unwrap() + moduli_dim(b).unwrap() + 1
                );
            }
        }
    }
}

#[test]
fn composition_terms_reglue() {
    for s in all_signatures(3) {
        let terms = composition_terms(&s).unwrap();
        let mut sorted = terms.clone();
        sorted.sort();
        assert_eq!(terms, sorted);
        for t in &terms {
            let outs: Vec<usize> = (1..=t.circles).collect();
            let glued = glue_along(&t.left, &outs, &t.right, &outs).unwrap();
            assert_eq!(glued.signature, s, "{t:?}");
            assert!(t.multiplicity >= 1);
            assert_eq!(t.genus_raising, t.circles > 1);
        }
    }
}
