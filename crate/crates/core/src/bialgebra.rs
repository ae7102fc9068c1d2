//! Linear extensions of the bracket and cobracket, and exact checkers for
//! the Lie bialgebra identities. Every checker returns its defect, which is
//! the zero sum when the identity holds.
//!
//! All operations have degree zero on surfaces, so no Koszul signs appear.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::goldman_turaev::{bracket, cobracket};
use crate::linear::{FormalSum, LinComb, TensorSquareSum};
use crate::surface::FatGraph;
use crate::words::ConjClass;

pub type TensorCubeSum = LinComb<(ConjClass, ConjClass, ConjClass)>;

/// Source of brackets and cobrackets. Implemented directly by a fat graph
/// and by [`Memo`], which caches results for identity sweeps.
pub trait LieOps: Sync {
    fn graph(&self) -> &FatGraph;
    fn bracket(&self, u: &ConjClass, v: &ConjClass) -> FormalSum;
    fn cobracket(&self, w: &ConjClass) -> TensorSquareSum;
}

impl LieOps for FatGraph {
    fn graph(&self) -> &FatGraph {
        self
    }
    fn bracket(&self, u: &ConjClass, v: &ConjClass) -> FormalSum {
        bracket(self, u, v)
    }
    fn cobracket(&self, w: &ConjClass) -> TensorSquareSum {
        cobracket(self, w)
    }
}

/// Memoized operations on one surface. Safe to share between workers;
/// cached values are pure functions of their keys.
pub struct Memo<'g> {
    graph: &'g FatGraph,
    brackets: RwLock<HashMap<(ConjClass, ConjClass), FormalSum>>,
    cobrackets: RwLock<HashMap<ConjClass, TensorSquareSum>>,
}

impl<'g> Memo<'g> {
    pub fn new(graph: &'g FatGraph) -> Self {
        Memo { graph, brackets: RwLock::default(), cobrackets: RwLock::default() }
    }
}

impl LieOps for Memo<'_> {
    fn graph(&self) -> &FatGraph {
        self.graph
    }

    fn bracket(&self, u: &ConjClass, v: &ConjClass) -> FormalSum {
        let key = (u.clone(), v.clone());
        if let Some(s) = self.brackets.read().unwrap().get(&key) {
            return s.clone();
        }
        let s = bracket(self.graph, u, v);
        self.brackets.write().unwrap().insert(key, s.clone());
        s
    }

    fn cobracket(&self, w: &ConjClass) -> TensorSquareSum {
        if let Some(s) = self.cobrackets.read().unwrap().get(w) {
            return s.clone();
        }
        let s = cobracket(self.graph, w);
        self.cobrackets.write().unwrap().insert(w.clone(), s.clone());
        s
    }
}

/// Bilinear extension of the bracket.
pub fn bracket_ext<O: LieOps + ?Sized>(ops: &O, x: &FormalSum, y: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            out.add_scaled(&ops.bracket(u, v), a * b);
        }
    }
    out
}

/// Linear extension of the cobracket.
pub fn cobracket_ext<O: LieOps + ?Sized>(ops: &O, x: &FormalSum) -> TensorSquareSum {
    let mut out = TensorSquareSum::zero();
    for (u, a) in x.iter() {
        out.add_scaled(&ops.cobracket(u), a);
    }
    out
}

/// Adjoint action on the tensor square: `x.(a⊗b) = [x,a]⊗b + a⊗[x,b]`.
pub fn act_on_square<O: LieOps + ?Sized>(ops: &O, x: &ConjClass, t: &TensorSquareSum) -> TensorSquareSum {
    let mut out = TensorSquareSum::zero();
    for ((a, b), c) in t.iter() {
        for (xa, d) in ops.bracket(x, a).iter() {
            out.add_term((xa.clone(), b.clone()), c * d);
        }
        for (xb, d) in ops.bracket(x, b).iter() {
            out.add_term((a.clone(), xb.clone()), c * d);
        }
    }
    out
}

/// `[u,v] + [v,u]`.
pub fn check_antisymmetry<O: LieOps + ?Sized>(ops: &O, u: &ConjClass, v: &ConjClass) -> FormalSum {
    ops.bracket(u, v) + ops.bracket(v, u)
}

/// `δ(w) + τδ(w)` with `τ` the factor swap.
pub fn check_coskew<O: LieOps + ?Sized>(ops: &O, w: &ConjClass) -> TensorSquareSum {
    let d = ops.cobracket(w);
    let s = d.swapped();
    d + s
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn check_jacobi<O: LieOps + ?Sized>(ops: &O, x: &ConjClass, y: &ConjClass, z: &ConjClass) -> FormalSum {
    let one = |c: &ConjClass| FormalSum::single(c.clone(), 1);
    let mut out = bracket_ext(ops, &one(x), &ops.bracket(y, z));
    out += &bracket_ext(ops, &one(y), &ops.bracket(z, x));
    out += &bracket_ext(ops, &one(z), &ops.bracket(x, y));
    out
}

/// `(1 + ρ + ρ²)(δ ⊗ id)δ(x)` with `ρ` the cyclic shift of factors.
pub fn check_cojacobi<O: LieOps + ?Sized>(ops: &O, x: &ConjClass) -> TensorCubeSum {
    let mut out = TensorCubeSum::zero();
    for ((a, b), c) in ops.cobracket(x).iter() {
        for ((a1, a2), d) in ops.cobracket(a).iter() {
            let coeff = c * d;
            out.add_term((a1.clone(), a2.clone(), b.clone()), coeff);
            out.add_term((b.clone(), a1.clone(), a2.clone()), coeff);
            out.add_term((a2.clone(), b.clone(), a1.clone()), coeff);
        }
    }
    out
}

/// `δ[x,y] - x.δ(y) + y.δ(x)`.
pub fn check_compat<O: LieOps + ?Sized>(ops: &O, x: &ConjClass, y: &ConjClass) -> TensorSquareSum {
    let mut out = cobracket_ext(ops, &ops.bracket(x, y));
    out.add_scaled(&act_on_square(ops, x, &ops.cobracket(y)), -1);
    out.add_scaled(&act_on_square(ops, y, &ops.cobracket(x)), 1);
    out
}

/// `[,] ∘ δ(x)`.
pub fn check_involutive<O: LieOps + ?Sized>(ops: &O, x: &ConjClass) -> FormalSum {
    let mut out = FormalSum::zero();
    for ((a, b), c) in ops.cobracket(x).iter() {
        out.add_scaled(&ops.bracket(a, b), c);
    }
    out
}
