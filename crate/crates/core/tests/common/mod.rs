//! Independent reference implementations used by the integration tests.
//! Words are plain strings over `a A b B ...`; nothing here calls the engine.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn inv_char(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

pub fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        if out.last() == Some(&inv_char(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn cyclic_reduce(s: &str) -> String {
    let mut w: Vec<char> = reduce(s).chars().collect();
    while w.len() >= 2 && w[0] == inv_char(*w.last().unwrap()) {
        w.remove(0);
        w.pop();
    }
    w.into_iter().collect()
}

/// Letter rank in the order `a < A < b < B < ...`.
pub fn rank(c: char) -> u8 {
    let g = c.to_ascii_lowercase() as u8 - b'a';
    2 * g + c.is_ascii_uppercase() as u8
}

/// Least rotation by trying every rotation.
pub fn least_rotation(s: &str) -> String {
    let w: Vec<char> = s.chars().collect();
    (0..w.len().max(1))
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<char>>())
        .min_by(|x, y| x.iter().map(|&c| rank(c)).cmp(y.iter().map(|&c| rank(c))))
        .map(|v| v.into_iter().collect())
        .unwrap_or_default()
}

pub fn canonical(s: &str) -> String {
    least_rotation(&cyclic_reduce(s))
}

/// Is the cyclic word a proper power?
pub fn is_proper_power(s: &str) -> bool {
    let n = s.len();
    (1..n).any(|d| n % d == 0 && s == s[..d].repeat(n / d))
}

/// All reduced words of length `len` over `k` generators.
pub fn reduced_words(k: usize, len: usize) -> Vec<String> {
    let alphabet: Vec<char> = (0..k)
        .flat_map(|g| {
            let c = (b'a' + g as u8) as char;
            [c, c.to_ascii_uppercase()]
        })
        .collect();
    let mut words = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for &c in &alphabet {
                if !w.ends_with(inv_char(c)) {
                    next.push(format!("{w}{c}"));
                }
            }
        }
        words = next;
    }
    words
}

/// Distinct nontrivial classes of cyclic length exactly `len`, sorted by
/// letter rank, found by canonicalizing every reduced word of that length.
pub fn brute_force_classes(k: usize, len: usize) -> Vec<String> {
    let set: BTreeSet<Vec<u8>> = reduced_words(k, len)
        .iter()
        .map(|w| canonical(w))
        .filter(|c| c.len() == len)
        .map(|c| c.chars().map(rank).collect())
        .collect();
    set.into_iter()
        .map(|v| {
            v.into_iter()
                .map(|r| {
                    let c = (b'a' + r / 2) as char;
                    if r % 2 == 1 {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

fn substitute(w: &str, f: impl Fn(char) -> String) -> String {
    cyclic_reduce(&w.chars().map(f).collect::<String>())
}

/// Whitehead automorphisms of type two in rank two: every letter `x` of
/// one generator may pick up `y` on the right, `y^-1` on the left, or both.
fn whitehead_images(w: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (x, y) in [('a', 'b'), ('a', 'B'), ('b', 'a'), ('b', 'A')] {
        let xi = inv_char(x);
        let yi = inv_char(y);
        for mode in 0..3 {
            out.push(substitute(w, |c| {
                let image = match mode {
                    0 => format!("{x}{y}"),
                    1 => format!("{yi}{x}"),
                    _ => format!("{yi}{x}{y}"),
                };
                if c == x {
                    image
                } else if c == xi {
                    image.chars().rev().map(inv_char).collect()
                } else {
                    c.to_string()
                }
            }));
        }
    }
    out
}

/// Primitivity in the free group on `a, b` by Whitehead's algorithm: the
/// cyclic length can be lowered to 1 exactly for primitive elements.
pub fn is_primitive_f2(w: &str) -> bool {
    let mut cur = cyclic_reduce(w);
    loop {
        if cur.len() <= 1 {
            return cur.len() == 1;
        }
        match whitehead_images(&cur).into_iter().min_by_key(|s| s.len()) {
            Some(s) if s.len() < cur.len() => cur = s,
            _ => return false,
        }
    }
}
