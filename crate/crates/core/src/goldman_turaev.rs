//! Crossings of curves on a one-vertex fat graph.
//!
//! A cyclic word `x_0 x_1 ... x_{n-1}` passes the vertex `n` times. At pass
//! `t` the curve arrives along `x_{t-1}` and leaves along `x_t`. Lifting the
//! pass to the universal cover (a planar tree), the curve becomes a line
//! through the root made of two rays: the out-ray reading `x_t x_{t+1} ...`
//! and the in-ray reading `x_{t-1}^-1 x_{t-2}^-1 ...`. The planar structure
//! of the tree puts a cyclic order on rays (their points at infinity), and
//! two lines cross transversally exactly when their endpoints alternate.
//!
//! Two crossing lines share a (possibly one-vertex) segment of the tree, and
//! the crossing is seen from every pass pair along that segment. Only the
//! pass pair at which `p` enters the segment is reported, so each crossing
//! point is counted once.

use std::cmp::Ordering;

use crate::linear::{FormalSum, TensorSquareSum};
use crate::surface::{EndId, FatGraph};
use crate::words::{ConjClass, Letter};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// An infinite periodic edge path leaving the vertex.
#[derive(Clone, Copy, Debug)]
pub struct Ray<'a> {
    word: &'a [Letter],
    start: usize,
    direction: Direction,
}

impl<'a> Ray<'a> {
    /// Forward rays read `w[start] w[start+1] ...`; backward rays read
    /// `w[start-1]^-1 w[start-2]^-1 ...`.
    pub fn new(class: &'a ConjClass, start: usize, direction: Direction) -> Self {
        Ray { word: class.letters(), start: start % class.len(), direction }
    }

    #[inline]
    pub fn letter(&self, depth: usize) -> Letter {
        let n = self.word.len();
        match self.direction {
            Direction::Forward => self.word[(self.start + depth) % n],
            Direction::Backward => self.word[(self.start + n - 1 - depth % n) % n].inverse(),
        }
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    #[inline]
    fn first_end(&self) -> EndId {
        EndId::leaving(self.letter(0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayOrder {
    /// First differing letter at `depth`; `side` orders the first ray
    /// relative to the second in the planar linear order.
    Diverges { depth: usize, side: Ordering },
    Equal,
}

/// Compares two rays in the planar order of the universal cover, cut just
/// before `sigma[0]` at the root.
pub fn compare_rays(graph: &FatGraph, r1: &Ray, r2: &Ray) -> RayOrder {
    // periodic sequences agreeing on p + q letters agree forever
    let bound = r1.period() + r2.period();
    for depth in 0..bound {
        let (x, y) = (r1.letter(depth), r2.letter(depth));
        if x == y {
            continue;
        }
        let (e1, e2) = (EndId::leaving(x), EndId::leaving(y));
        let side = if depth == 0 {
            graph.position(e1).cmp(&graph.position(e2))
        } else {
            let incoming = EndId::leaving(r1.letter(depth - 1)).opposite();
            graph.position_after(e1, incoming).cmp(&graph.position_after(e2, incoming))
        };
        return RayOrder::Diverges { depth, side };
    }
    RayOrder::Equal
}

/// One passage of a curve through the vertex.
#[derive(Clone, Copy, Debug)]
pub struct Pass<'a> {
    pub class: &'a ConjClass,
    pub position: usize,
}

impl<'a> Pass<'a> {
    pub fn new(class: &'a ConjClass, position: usize) -> Self {
        Pass { class, position }
    }

    pub fn in_ray(&self) -> Ray<'a> {
        Ray::new(self.class, self.position, Direction::Backward)
    }

    pub fn out_ray(&self) -> Ray<'a> {
        Ray::new(self.class, self.position, Direction::Forward)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linkage {
    /// A transverse crossing, reported at the pass pair where `p` enters the
    /// segment shared with `q`. The sign is `+1` when the rays read
    /// `(p.in, q.in, p.out, q.out)` counterclockwise.
    Linked(i64),
    NotLinked,
    /// A ray of `p` equals a ray of `q`: the lines coincide.
    Parallel,
}

impl Linkage {
    pub fn sign(self) -> Option<i64> {
        match self {
            Linkage::Linked(s) => Some(s),
            _ => None,
        }
    }
}

/// Decides whether the lines through passes `p` and `q` cross, and whether
/// this pass pair is the one that reports the crossing.
pub fn is_linked(graph: &FatGraph, p: &Pass, q: &Pass) -> Linkage {
    classify(graph, p, q, false)
}

/// Sign of the crossing reported at `(p, q)`, skipping parallel detection.
#[inline]
pub(crate) fn crossing_sign(graph: &FatGraph, p: &Pass, q: &Pass) -> Option<i64> {
    classify(graph, p, q, true).sign()
}

fn classify(graph: &FatGraph, p: &Pass, q: &Pass, fast: bool) -> Linkage {
    let rays = [p.in_ray(), q.in_ray(), p.out_ray(), q.out_ray()];
    // p enters the shared segment here iff its incoming end is not one of q's.
    // Coinciding lines always fail this, so the fast path may test it first.
    let pin = rays[0].first_end();
    let enters = pin != rays[1].first_end() && pin != rays[3].first_end();
    if fast && !enters {
        return Linkage::NotLinked;
    }
    // (p.in, p.out) and (q.in, q.out) differ at depth 0 by cyclic reducedness
    let mut cmp = [[Ordering::Equal; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            let side = if j == i + 2 {
                graph.position(rays[i].first_end()).cmp(&graph.position(rays[j].first_end()))
            } else {
                match compare_rays(graph, &rays[i], &rays[j]) {
                    RayOrder::Equal => return Linkage::Parallel,
                    RayOrder::Diverges { side, .. } => side,
                }
            };
            cmp[i][j] = side;
            cmp[j][i] = side.reverse();
        }
    }
    if !enters {
        return Linkage::NotLinked;
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| cmp[a][b]);
    let at = |r: usize| order.iter().position(|&x| x == r).unwrap();
    let (i_pin, i_pout) = (at(0), at(2));
    if (i_pin + 4 - i_pout) % 4 != 2 {
        return Linkage::NotLinked;
    }
    // the ray following p.in in the cyclic order
    if order[(i_pin + 1) % 4] == 1 {
        Linkage::Linked(1)
    } else {
        Linkage::Linked(-1)
    }
}

/// Every reported crossing between passes of `u` and passes of `v`, as
/// `(t, s, sign)`.
pub fn linked_pairs(graph: &FatGraph, u: &ConjClass, v: &ConjClass) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for t in 0..u.len() {
        let p = Pass::new(u, t);
        for s in 0..v.len() {
            if let Some(sign) = crossing_sign(graph, &p, &Pass::new(v, s)) {
                out.push((t, s, sign));
            }
        }
    }
    out
}

/// Ordered pairs of distinct passes of `w` reporting a self-crossing. Each
/// self-crossing appears twice, once with each branch as `p`, with opposite
/// signs.
pub fn self_linked_pairs(graph: &FatGraph, w: &ConjClass) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for t in 0..w.len() {
        let p = Pass::new(w, t);
        for s in 0..w.len() {
            if s == t {
                continue;
            }
            if let Some(sign) = crossing_sign(graph, &p, &Pass::new(w, s)) {
                out.push((t, s, sign));
            }
        }
    }
    out
}

/// Goldman bracket: each crossing contributes its sign times the class of
/// `u` read from the crossing followed by `v` read from the crossing.
pub fn bracket(graph: &FatGraph, u: &ConjClass, v: &ConjClass) -> FormalSum {
    let mut sum = FormalSum::zero();
    for (t, s, sign) in linked_pairs(graph, u, v) {
        if let Some(c) = ConjClass::from_letters(u.rotation(t).chain(v.rotation(s))) {
            sum.add_term(c, sign);
        }
    }
    sum
}

/// The loop `w[from] ... w[to - 1]` (indices mod `|w|`), canonicalized.
fn segment(w: &ConjClass, from: usize, to: usize) -> Option<ConjClass> {
    let n = w.len();
    let len = (to + n - from) % n;
    ConjClass::from_letters((0..len).map(|i| w.letters()[(from + i) % n]))
}

/// Turaev cobracket: each self-crossing splits `w` into the loop traversed
/// first from the crossing and the remainder. Terms with a trivial factor
/// are dropped.
pub fn cobracket(graph: &FatGraph, w: &ConjClass) -> TensorSquareSum {
    let mut sum = TensorSquareSum::zero();
    for (t, s, sign) in self_linked_pairs(graph, w) {
        if let (Some(first), Some(second)) = (segment(w, t, s), segment(w, s, t)) {
            sum.add_term((first, second), sign);
        }
    }
    sum
}

/// Number of self-crossings of the taut representative.
pub fn self_link_count(graph: &FatGraph, w: &ConjClass) -> usize {
    let ordered = self_linked_pairs(graph, w).len();
    debug_assert!(ordered % 2 == 0);
    ordered / 2
}

/// Number of crossings between taut representatives of `u` and `v`.
/// Classes whose curves run parallel (powers of a common primitive, up to
/// direction) have no well-defined transverse count.
pub fn intersection_count(graph: &FatGraph, u: &ConjClass, v: &ConjClass) -> Result<usize, Error> {
    let mut count = 0;
    for t in 0..u.len() {
        let p = Pass::new(u, t);
        for s in 0..v.len() {
            match is_linked(graph, &p, &Pass::new(v, s)) {
                Linkage::Linked(_) => count += 1,
                Linkage::NotLinked => {}
                Linkage::Parallel => return Err(Error::ParallelClasses(u.clone(), v.clone())),
            }
        }
    }
    Ok(count)
}

/// Primitive and without self-crossings.
pub fn is_simple(graph: &FatGraph, w: &ConjClass) -> bool {
    w.is_primitive() && self_link_count(graph, w) == 0
}
