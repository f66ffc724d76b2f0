//! The Nest graphs `Nest(n; a, b, c; k)`.
//!
//! Vertex `u_i` has index `i` and `v_i` has index `n + i`, everywhere in
//! this crate. The edges are the rim `{u_i, u_{i+1}}`, the hub
//! `{v_i, v_{i+k}}` and the four spokes `{u_i, v_i}`, `{u_i, v_{i+a}}`,
//! `{u_i, v_{i+b}}`, `{u_i, v_{i+c}}`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Perm;

/// Validated Nest parameters; offsets are residues in `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 5]", into = "[usize; 5]")]
pub struct NestParams {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub k: usize,
}

impl NestParams {
    /// Reduces the offsets modulo `n` and checks the validity rules.
    pub fn new(n: i64, a: i64, b: i64, c: i64, k: i64) -> Result<Self> {
        if n < 4 {
            return Err(Error::ModulusTooSmall(n));
        }
        let r = |x: i64| x.rem_euclid(n) as usize;
        let (a, b, c, k) = (r(a), r(b), r(c), r(k));
        for (name, x) in [("a", a), ("b", b), ("c", c), ("k", k)] {
            if x == 0 {
                return Err(Error::ZeroOffset { name });
            }
        }
        if a == b || b == c || a == c {
            return Err(Error::OffsetsNotDistinct);
        }
        let n = n as usize;
        if n.is_multiple_of(2) && k == n / 2 {
            return Err(Error::HubIsHalf);
        }
        Ok(Self { n, a, b, c, k })
    }

    pub fn as_array(&self) -> [usize; 5] {
        [self.n, self.a, self.b, self.c, self.k]
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn u(&self, i: i64) -> usize {
        i.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn v(&self, i: i64) -> usize {
        self.n + i.rem_euclid(self.n as i64) as usize
    }

    /// Rim, hub and spoke edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n as i64;
        let mut edges = Vec::with_capacity(6 * self.n);
        for i in 0..n {
            edges.push((self.u(i), self.u(i + 1)));
            edges.push((self.v(i), self.v(i + self.k as i64)));
            for s in [0, self.a, self.b, self.c] {
                edges.push((self.u(i), self.v(i + s as i64)));
            }
        }
        edges
    }

    pub fn build(&self) -> Graph {
        Graph::new(self.vertex_count(), &self.edges())
            .expect("valid parameters give a simple graph")
    }

    /// `ρ = (u_0 u_1 … u_{n-1})(v_0 v_1 … v_{n-1})`.
    pub fn rho(&self) -> Perm {
        rho(self.n)
    }

    /// The closure of `self` under permuting `{a, b, c}`, `k → −k`,
    /// `(a, b, c) → (−a, −b, −c)` and `(a, b, c) → (−a, b − a, c − a)`.
    pub fn symmetric_variants(&self) -> BTreeSet<NestParams> {
        let n = self.n as i64;
        let mut seen = BTreeSet::from([*self]);
        let mut queue = VecDeque::from([*self]);
        while let Some(p) = queue.pop_front() {
            let (a, b, c, k) = (p.a as i64, p.b as i64, p.c as i64, p.k as i64);
            let images = [
                (b, a, c, k),
                (a, c, b, k),
                (a, b, c, -k),
                (-a, -b, -c, k),
                (-a, b - a, c - a, k),
            ];
            for (a, b, c, k) in images {
                let q = NestParams::new(n, a, b, c, k).expect("maps preserve validity");
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// The lexicographically least member of [`Self::symmetric_variants`].
    pub fn canonical_variant(&self) -> NestParams {
        *self.symmetric_variants().first().expect("contains self")
    }

    /// Parameters of the quotient by the orbits of `C_d`: offsets reduced
    /// modulo `n/d`, or `None` if they are no longer valid Nest parameters.
    pub fn quotient_params(&self, d: usize) -> Result<Option<NestParams>> {
        if d == 0 || d >= self.n || !self.n.is_multiple_of(d) {
            return Err(Error::NotADivisor {
                divisor: d as u64,
                order: self.n as u64,
            });
        }
        let m = (self.n / d) as i64;
        Ok(NestParams::new(
            m,
            self.a as i64,
            self.b as i64,
            self.c as i64,
            self.k as i64,
        )
        .ok())
    }
}

/// `ρ` on `2n` points.
pub fn rho(n: usize) -> Perm {
    let images: Vec<usize> = (0..2 * n)
        .map(|x| {
            if x < n {
                (x + 1) % n
            } else {
                n + (x - n + 1) % n
            }
        })
        .collect();
    Perm::from_images(images).expect("rotation")
}

fn check_half(m: usize, odd: bool) -> Result<()> {
    if m < 2 || (odd && (m < 3 || m.is_multiple_of(2))) {
        let need = if odd { "odd m >= 3" } else { "m >= 2" };
        return Err(Error::FamilyMismatch(format!("m = {m}, need {need}")));
    }
    Ok(())
}

/// The involution `φ` of `Nest(2m; 2, m, 2+m; 1)`, `m` odd:
/// `u_i ↦ u_{−i}` (i even), `u_i ↦ v_{1−i}` (i odd),
/// `v_i ↦ u_{1−i}` (i even), `v_i ↦ v_{2−i}` (i odd).
pub fn phi(m: usize) -> Result<Perm> {
    check_half(m, true)?;
    let n = 2 * m;
    let p = NestParams::new(n as i64, 2, m as i64, (m + 2) as i64, 1)?;
    let mut images = vec![0usize; 2 * n];
    for i in 0..n as i64 {
        let even = i % 2 == 0;
        images[p.u(i)] = if even { p.u(-i) } else { p.v(1 - i) };
        images[p.v(i)] = if even { p.u(1 - i) } else { p.v(2 - i) };
    }
    Perm::from_images(images)
}

/// `η`: fixes every `u_i` and sends `v_i ↦ v_{i+m}`; an automorphism of
/// every `Nest(2m; a, m, a+m; k)`.
pub fn eta(m: usize) -> Result<Perm> {
    check_half(m, false)?;
    let n = 2 * m;
    let images: Vec<usize> = (0..2 * n)
        .map(|x| if x < n { x } else { n + (x - n + m) % n })
        .collect();
    Perm::from_images(images)
}

impl fmt::Display for NestParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.n, self.a, self.b, self.c, self.k)
    }
}

impl fmt::Debug for NestParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Nest({};{},{},{};{})",
            self.n, self.a, self.b, self.c, self.k
        )
    }
}

impl FromStr for NestParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::ParamSyntax(s.to_string()))?;
        match parts[..] {
            [n, a, b, c, k] => NestParams::new(n, a, b, c, k),
            _ => Err(Error::ParamSyntax(s.to_string())),
        }
    }
}

impl TryFrom<[i64; 5]> for NestParams {
    type Error = Error;

    fn try_from([n, a, b, c, k]: [i64; 5]) -> Result<Self> {
        NestParams::new(n, a, b, c, k)
    }
}

impl From<NestParams> for [usize; 5] {
    fn from(p: NestParams) -> Self {
        p.as_array()
    }
}
