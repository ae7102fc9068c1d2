//! One-vertex fat graphs.
//!
//! A surface with boundary of genus `g` with `n` boundary circles retracts
//! onto a wedge of `k = 2g + n - 1` circles. The ribbon structure is the
//! counterclockwise cyclic order of the `2k` edge ends at the vertex.
//!
//! End `x+` is the end through which a path leaves the vertex along letter
//! `x`, and `x-` the end through which it leaves along `x^-1`. With the
//! letter packing of [`crate::words`] the end a letter leaves through has the
//! same code as the letter, and the end it returns through is the inverse
//! letter's code.

use std::fmt;
use std::str::FromStr;

use crate::words::{ConjClass, Letter, Word};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndId(u8);

impl EndId {
    pub fn new(generator: usize, out: bool) -> Result<Self, Error> {
        Letter::new(generator, !out).map(EndId::leaving)
    }

    /// The end a path leaves through when it reads `x`.
    #[inline]
    pub fn leaving(x: Letter) -> Self {
        EndId(x.code() as u8)
    }

    /// The other end of the same edge.
    #[inline]
    pub fn opposite(self) -> Self {
        EndId(self.0 ^ 1)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize + 1
    }

    pub fn is_out(self) -> bool {
        self.0 & 1 == 0
    }

    /// The letter read when leaving through this end.
    pub fn letter(self) -> Letter {
        Letter::from_code(self.code())
    }
}

impl fmt::Display for EndId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = (b'a' + (self.0 >> 1)) as char;
        write!(f, "{}{}", c, if self.is_out() { '+' } else { '-' })
    }
}

impl fmt::Debug for EndId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for EndId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::BadSigma(format!("cannot parse end {s:?}; expected e.g. a+ or b-"));
        let mut chars = s.chars();
        let (Some(g), Some(p), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(bad());
        };
        if !g.is_ascii_lowercase() {
            return Err(bad());
        }
        let generator = (g as u8 - b'a') as usize + 1;
        match p {
            '+' => EndId::new(generator, true),
            '-' => EndId::new(generator, false),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SurfaceSig {
    pub genus: usize,
    pub boundaries: usize,
}

impl SurfaceSig {
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries as i64
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={},n={}", self.genus, self.boundaries)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FatGraph {
    k: usize,
    sigma: Vec<EndId>,
    /// position of each end code in `sigma`
    pos: Vec<usize>,
}

impl FatGraph {
    /// Builds a fat graph from its cyclic order of ends.
    pub fn new(sigma: Vec<EndId>) -> Result<Self, Error> {
        if sigma.is_empty() || sigma.len() % 2 != 0 {
            return Err(Error::BadSigma(format!(
                "cyclic order must list an even, nonzero number of ends, got {}",
                sigma.len()
            )));
        }
        let k = sigma.len() / 2;
        let mut pos = vec![usize::MAX; 2 * k];
        for (i, e) in sigma.iter().enumerate() {
            if e.generator() > k {
                return Err(Error::BadSigma(format!("end {e} names an edge beyond the {k} edges")));
            }
            if pos[e.code()] != usize::MAX {
                return Err(Error::BadSigma(format!("end {e} listed twice")));
            }
            pos[e.code()] = i;
        }
        Ok(FatGraph { k, sigma, pos })
    }

    /// The standard model `a1+ b1+ a1- b1- ... c1+ c1- ...`.
    pub fn standard(genus: usize, boundaries: usize) -> Result<Self, Error> {
        if boundaries == 0 {
            return Err(Error::BadSurface("closed surfaces have non-free fundamental group".into()));
        }
        if genus == 0 && boundaries == 1 {
            return Err(Error::BadSurface("the disk has no edges".into()));
        }
        let k = 2 * genus + boundaries - 1;
        if k > crate::words::MAX_GENERATORS {
            return Err(Error::BadSurface(format!("{k} generators exceed the alphabet")));
        }
        let end = |i: usize, out: bool| EndId::new(i, out).expect("generator in range");
        let mut sigma = Vec::with_capacity(2 * k);
        for h in 0..genus {
            let (a, b) = (2 * h + 1, 2 * h + 2);
            sigma.extend([end(a, true), end(b, true), end(a, false), end(b, false)]);
        }
        for c in 2 * genus + 1..=k {
            sigma.extend([end(c, true), end(c, false)]);
        }
        let g = FatGraph::new(sigma)?;
        let sig = g.surface_sig();
        if sig != (SurfaceSig { genus, boundaries }) {
            return Err(Error::BadSurface(format!("standard model produced {sig}")));
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> &[EndId] {
        &self.sigma
    }

    #[inline]
    pub fn position(&self, e: EndId) -> usize {
        self.pos[e.code()]
    }

    /// Position of `e` in the linear order obtained by cutting the cyclic
    /// order just after `after`.
    #[inline]
    pub fn position_after(&self, e: EndId, after: EndId) -> usize {
        let m = 2 * self.k;
        (self.pos[e.code()] + m - self.pos[after.code()] - 1) % m
    }

    #[inline]
    pub fn next(&self, e: EndId) -> EndId {
        self.sigma[(self.position(e) + 1) % (2 * self.k)]
    }

    /// Orbits of the face permutation `e -> next(opposite(e))`, each starting
    /// at its least end.
    pub fn boundary_cycles(&self) -> Vec<Vec<EndId>> {
        let mut seen = vec![false; 2 * self.k];
        let mut cycles = Vec::new();
        for code in 0..2 * self.k {
            if seen[code] {
                continue;
            }
            let start = EndId(code as u8);
            let mut cycle = Vec::new();
            let mut e = start;
            loop {
                seen[e.code()] = true;
                cycle.push(e);
                e = self.next(e.opposite());
                if e == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Boundary loops as classes, one per face cycle, read along the cycle.
    pub fn boundary_classes(&self) -> Vec<ConjClass> {
        self.boundary_cycles()
            .iter()
            .map(|cycle| {
                let w: Word = crate::free_reduce(cycle.iter().map(|e| e.letter()));
                crate::canonical_class(&w).expect("boundary loops are essential")
            })
            .collect()
    }

    pub fn surface_sig(&self) -> SurfaceSig {
        let n = self.boundary_cycles().len();
        let twice_genus = 1 + self.k - n;
        assert!(twice_genus % 2 == 0, "face count parity violated: corrupted cyclic order");
        SurfaceSig { genus: twice_genus / 2, boundaries: n }
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.k as i64
    }

    /// Does `w` only use generators present in this graph?
    pub fn admits(&self, c: &ConjClass) -> bool {
        c.word().rank_used() <= self.k
    }
}

impl fmt::Display for FatGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sigma.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for FatGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FatGraph({self})")
    }
}

impl FromStr for FatGraph {
    type Err = Error;

    /// Parses either `g=G,n=N` or an explicit order such as `a+,b+,a-,b-`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.starts_with("g=") {
            let mut genus = None;
            let mut boundaries = None;
            for part in s.split(',') {
                let (key, val) = part
                    .split_once('=')
                    .ok_or_else(|| Error::BadSurface(format!("cannot parse {part:?}")))?;
                let v: usize = val
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadSurface(format!("{key} must be a nonnegative integer")))?;
                match key.trim() {
                    "g" => genus = Some(v),
                    "n" => boundaries = Some(v),
                    other => return Err(Error::BadSurface(format!("unknown key {other:?}"))),
                }
            }
            match (genus, boundaries) {
                (Some(g), Some(n)) => FatGraph::standard(g, n),
                _ => Err(Error::BadSurface("expected g=G,n=N".into())),
            }
        } else {
            let sigma = s.split(',').map(str::parse).collect::<Result<Vec<EndId>, _>>()?;
            // 2k distinct ends on k edges: every end appears
            FatGraph::new(sigma)
        }
    }
}
