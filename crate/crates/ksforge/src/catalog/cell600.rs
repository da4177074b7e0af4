//! The 60 rays and 75 bases of the 600-cell, in exact arithmetic over
//! Q(√5).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::{Serialize, Serializer};

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    pub a: Rational64,
    pub b: Rational64,
}

impl GoldenNumber {
    pub fn new(a: Rational64, b: Rational64) -> GoldenNumber {
        GoldenNumber { a, b }
    }

    pub fn int(v: i64) -> GoldenNumber {
        GoldenNumber::new(Rational64::from_integer(v), Rational64::from_integer(0))
    }

    pub fn zero() -> GoldenNumber {
        GoldenNumber::int(0)
    }

    /// τ = (1+√5)/2
    pub fn tau() -> GoldenNumber {
        GoldenNumber::new(Rational64::new(1, 2), Rational64::new(1, 2))
    }

    /// κ = τ−1 = 1/τ
    pub fn kappa() -> GoldenNumber {
        GoldenNumber::new(Rational64::new(-1, 2), Rational64::new(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.a == Rational64::from_integer(0) && self.b == Rational64::from_integer(0)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * 5f64.sqrt()
    }
}

impl Add for GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, o: GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, o: GoldenNumber) -> GoldenNumber {
        GoldenNumber::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber::new(-self.a, -self.b)
    }
}

impl Mul for GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, o: GoldenNumber) -> GoldenNumber {
        let five = Rational64::from_integer(5);
        GoldenNumber::new(self.a * o.a + five * self.b * o.b, self.a * o.b + self.b * o.a)
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Serialize for GoldenNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.a.to_string(), self.b.to_string(), self.to_f64()).serialize(s)
    }
}

/// A projective real ray in d = 4 (1-based `index`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RealRay4 {
    pub index: usize,
    pub components: [GoldenNumber; 4],
}

impl RealRay4 {
    pub fn dot(&self, other: &RealRay4) -> GoldenNumber {
        self.components.iter().zip(&other.components).fold(GoldenNumber::zero(), |acc, (&x, &y)| acc + x * y)
    }

    pub fn orthogonal(&self, other: &RealRay4) -> bool {
        self.dot(other).is_zero()
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.components.map(|c| c.to_f64())
    }
}

// `t` = τ, `k` = κ, leading `-` negates.
const RAYS: [&str; 60] = [
    "2 0 0 0", "0 2 0 0", "0 0 2 0", "0 0 0 2",
    "1 1 1 1", "1 1 -1 -1", "1 -1 1 -1", "1 -1 -1 1",
    "1 -1 -1 -1", "1 -1 1 1", "1 1 -1 1", "1 1 1 -1",
    "k 0 -t -1", "0 k 1 -t", "t -1 k 0", "1 t 0 k",
    "t k 0 -1", "1 0 k t", "k -t -1 0", "0 1 -t k",
    "1 k t 0", "t 0 -1 k", "0 t -k -1", "k -1 0 -t",
    "t 0 1 k", "0 t -k 1", "1 -k -t 0", "k 1 0 -t",
    "0 k 1 t", "t 1 -k 0", "k 0 t -1", "1 -t 0 k",
    "t -k 0 -1", "0 1 -t -k", "1 0 -k t", "k t 1 0",
    "t 0 -1 -k", "0 t k -1", "1 -k t 0", "k 1 0 t",
    "t 1 k 0", "0 k -1 -t", "1 -t 0 -k", "k 0 -t 1",
    "0 1 t k", "t -k 0 1", "k t -1 0", "1 0 k -t",
    "k 0 t 1", "0 k -1 t", "t -1 -k 0", "1 t 0 -k",
    "1 0 -k -t", "t k 0 1", "0 1 t -k", "k -t 1 0",
    "t 0 1 -k", "1 k -t 0", "k -1 0 t", "0 t k 1",
];

// 1-based, in the published order: 25 blocks of three.
const BASES: [[usize; 4]; 75] = [
    [1, 2, 3, 4], [31, 42, 51, 16], [22, 60, 39, 28], [57, 23, 27, 40], [44, 29, 15, 52],
    [5, 6, 7, 8], [38, 24, 58, 25], [18, 47, 33, 55], [36, 53, 20, 46], [59, 26, 37, 21],
    [9, 10, 11, 12], [56, 45, 17, 35], [13, 32, 50, 41], [43, 49, 30, 14], [34, 19, 48, 54],
    [13, 14, 15, 16], [43, 54, 3, 28], [34, 12, 51, 40], [9, 35, 39, 52], [56, 41, 27, 4],
    [17, 18, 19, 20], [50, 36, 10, 37], [30, 59, 45, 7], [48, 5, 32, 58], [11, 38, 49, 33],
    [21, 22, 23, 24], [8, 57, 29, 47], [25, 44, 2, 53], [55, 1, 42, 26], [46, 31, 60, 6],
    [25, 26, 27, 28], [55, 6, 15, 40], [46, 24, 3, 52], [21, 47, 51, 4], [8, 53, 39, 16],
    [29, 30, 31, 32], [2, 48, 22, 49], [42, 11, 57, 19], [60, 17, 44, 10], [23, 50, 1, 45],
    [33, 34, 35, 36], [20, 9, 41, 59], [37, 56, 14, 5], [7, 13, 54, 38], [58, 43, 12, 18],
    [37, 38, 39, 40], [7, 18, 27, 52], [58, 36, 15, 4], [33, 59, 3, 16], [20, 5, 51, 28],
    [41, 42, 43, 44], [14, 60, 34, 1], [54, 23, 9, 31], [12, 29, 56, 22], [35, 2, 13, 57],
    [45, 46, 47, 48], [32, 21, 53, 11], [49, 8, 26, 17], [19, 25, 6, 50], [10, 55, 24, 30],
    [49, 50, 51, 52], [19, 30, 39, 4], [10, 48, 27, 16], [45, 11, 15, 28], [32, 17, 3, 40],
    [53, 54, 55, 56], [26, 12, 46, 13], [6, 35, 21, 43], [24, 41, 8, 34], [47, 14, 25, 9],
    [57, 58, 59, 60], [44, 33, 5, 23], [1, 20, 38, 29], [31, 37, 18, 2], [22, 7, 36, 42],
];

fn component(tok: &str) -> GoldenNumber {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, tok),
    };
    let v = match body {
        "t" => GoldenNumber::tau(),
        "k" => GoldenNumber::kappa(),
        d => GoldenNumber::int(d.parse().expect("embedded ray data")),
    };
    if neg {
        -v
    } else {
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell600 {
    pub rays: Vec<RealRay4>,
    /// 0-based ray indices, in the published order.
    pub bases: Vec<[usize; 4]>,
}

impl Cell600 {
    /// Bases that fail pairwise orthogonality (should be empty).
    pub fn bad_bases(&self) -> Vec<usize> {
        (0..self.bases.len())
            .filter(|&b| {
                let r = self.bases[b];
                (0..4).any(|i| (i + 1..4).any(|j| !self.rays[r[i]].orthogonal(&self.rays[r[j]])))
            })
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.rays.len()];
        for b in &self.bases {
            for &r in b {
                m[r] += 1;
            }
        }
        m
    }

    /// Exact orthogonality adjacency.
    pub fn orthogonality(&self) -> Vec<Vec<bool>> {
        let n = self.rays.len();
        (0..n).map(|i| (0..n).map(|j| i != j && self.rays[i].orthogonal(&self.rays[j])).collect()).collect()
    }

    /// Float unit vectors.
    pub fn unit_vectors(&self) -> Vec<Vec<f64>> {
        self.rays
            .iter()
            .map(|r| {
                let v = r.to_f64();
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter().map(|x| x / n).collect()
            })
            .collect()
    }
}

pub fn cell600() -> Cell600 {
    let rays = RAYS
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let c: Vec<GoldenNumber> = s.split_whitespace().map(component).collect();
            RealRay4 { index: i + 1, components: [c[0], c[1], c[2], c[3]] }
        })
        .collect();
    let bases = BASES.iter().map(|b| b.map(|r| r - 1)).collect();
    Cell600 { rays, bases }
}

/// All 4-cliques of an adjacency matrix, each sorted, in lexicographic order.
pub fn orthogonal_cliques(adj: &[Vec<bool>]) -> Vec<[usize; 4]> {
    let n = adj.len();
    let mut out = vec![];
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if !(adj[a][c] && adj[b][c]) {
                    continue;
                }
                for d in c + 1..n {
                    if adj[a][d] && adj[b][d] && adj[c][d] {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}
