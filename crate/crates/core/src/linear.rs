//! Integer linear combinations keyed by classes, pairs or triples of classes.
//!
//! Keys never contain the trivial class; callers drop trivial terms before
//! inserting. Zero coefficients are removed eagerly so equality of sums is
//! structural.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::ser::SerializeStruct;
use serde_json::{json, Map, Value};

use crate::words::ConjClass;

/// A term key that knows how to write itself into a JSON term object.
pub trait TermKey: Ord + Clone {
    fn write_fields(&self, obj: &mut Map<String, Value>);
    fn sort_key(&self) -> Vec<String>;
}

impl TermKey for ConjClass {
    fn write_fields(&self, obj: &mut Map<String, Value>) {
        obj.insert("class".into(), json!(self.to_string()));
    }
    fn sort_key(&self) -> Vec<String> {
        vec![self.to_string()]
    }
}

impl TermKey for (ConjClass, ConjClass) {
    fn write_fields(&self, obj: &mut Map<String, Value>) {
        obj.insert("left".into(), json!(self.0.to_string()));
        obj.insert("right".into(), json!(self.1.to_string()));
    }
    fn sort_key(&self) -> Vec<String> {
        vec![self.0.to_string(), self.1.to_string()]
    }
}

impl TermKey for (ConjClass, ConjClass, ConjClass) {
    fn write_fields(&self, obj: &mut Map<String, Value>) {
        obj.insert("first".into(), json!(self.0.to_string()));
        obj.insert("second".into(), json!(self.1.to_string()));
        obj.insert("third".into(), json!(self.2.to_string()));
    }
    fn sort_key(&self) -> Vec<String> {
        vec![self.0.to_string(), self.1.to_string(), self.2.to_string()]
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, i64>,
}

pub type FormalSum = LinComb<ConjClass>;
pub type TensorSquareSum = LinComb<(ConjClass, ConjClass)>;

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: i64) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn add_term(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: i64) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: i64) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, scale);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> i64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut s = LinComb::zero();
        for (k, &c) in &self.terms {
            s.add_term(f(k), c);
        }
        s
    }
}

impl LinComb<(ConjClass, ConjClass)> {
    /// Exchanges the two tensor factors.
    pub fn swapped(&self) -> Self {
        self.map_keys(|(a, b)| (b.clone(), a.clone()))
    }
}

impl<K: TermKey> LinComb<K> {
    /// `{"terms": [...]}` with terms sorted by their class strings.
    pub fn to_json(&self) -> Value {
        let mut rows: Vec<(Vec<String>, Value)> = self
            .terms
            .iter()
            .map(|(k, &c)| {
                let mut obj = Map::new();
                obj.insert("coeff".into(), json!(c));
                k.write_fields(&mut obj);
                (k.sort_key(), Value::Object(obj))
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        json!({ "terms": rows.into_iter().map(|r| r.1).collect::<Vec<_>>() })
    }
}

impl<K: TermKey> serde::Serialize for LinComb<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.to_json();
        let mut st = s.serialize_struct("LinComb", 1)?;
        st.serialize_field("terms", &v["terms"])?;
        st.end()
    }
}

impl FormalSum {
    pub fn from_json(v: &Value) -> Result<Self, crate::Error> {
        #[derive(serde::Deserialize)]
        struct Term {
            coeff: i64,
            class: ConjClass,
        }
        #[derive(serde::Deserialize)]
        struct Terms {
            terms: Vec<Term>,
        }
        let t: Terms = serde_json::from_value(v.clone())?;
        let mut s = FormalSum::zero();
        for term in t.terms {
            s.add_term(term.class, term.coeff);
        }
        Ok(s)
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: &LinComb<K>) {
        self.add_scaled(rhs, 1);
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, rhs: LinComb<K>) -> Self {
        self.add_scaled(&rhs, 1);
        self
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, rhs: LinComb<K>) -> Self {
        self.add_scaled(&rhs, -1);
        self
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> Self {
        self.scaled(-1)
    }
}

impl<K: TermKey> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{}", k.sort_key().join("⊗"))?;
        }
        Ok(())
    }
}

impl<K: TermKey> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
