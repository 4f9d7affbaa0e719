//! The two-dimensional complex of faces `F(I, J, K)`, subadditivity slacks
//! with their one-sided limits, additive faces and the minimality test.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{OpenInterval, Rat};
use crate::pwl::{PwlFunction, Side};

/// Closed segment `[lo, hi]`; `lo == hi` is a vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seg {
    pub lo: Rat,
    pub hi: Rat,
}

impl Seg {
    pub fn point(x: Rat) -> Seg {
        Seg { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Seg) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn interior(&self) -> Option<OpenInterval> {
        OpenInterval::new(self.lo.clone(), self.hi.clone())
    }
}

impl fmt::Debug for Seg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

pub type Point = (Rat, Rat);

/// A face `F(I, J, K) = {(x, y) : x in I, y in J, x + y in K}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub i: Seg,
    pub j: Seg,
    pub k: Seg,
    vertices: Vec<Point>,
    centroid: Point,
}

impl Face {
    fn build(i: Seg, j: Seg, k: Seg) -> Option<Face> {
        let vertices = polygon_vertices(&i, &j, &k);
        if vertices.is_empty() {
            return None;
        }
        let n = Rat::int(vertices.len() as i64);
        let cx = vertices.iter().map(|v| v.0.clone()).sum::<Rat>() / &n;
        let cy = vertices.iter().map(|v| v.1.clone()).sum::<Rat>() / &n;
        Some(Face { i, j, k, vertices, centroid: (cx, cy) })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// A point of the relative interior.
    pub fn centroid(&self) -> &Point {
        &self.centroid
    }

    pub fn dim(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.i.contains(&p.0) && self.j.contains(&p.1) && self.k.contains(&(&p.0 + &p.1))
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.i.is_subset_of(&other.i) && self.j.is_subset_of(&other.j) && self.k.is_subset_of(&other.k)
    }

    fn projection(&self, p: impl Fn(&Point) -> Rat) -> Seg {
        let vals: Vec<Rat> = self.vertices.iter().map(p).collect();
        Seg { lo: vals.iter().min().unwrap().clone(), hi: vals.iter().max().unwrap().clone() }
    }

    pub fn p1(&self) -> Seg {
        self.projection(|v| v.0.clone())
    }

    pub fn p2(&self) -> Seg {
        self.projection(|v| v.1.clone())
    }

    pub fn p3(&self) -> Seg {
        self.projection(|v| &v.0 + &v.1)
    }

    /// Sides from which `x`, `y` and `x + y` are approached when `p` is
    /// reached from the relative interior.
    pub fn approach(&self, p: &Point) -> (Side, Side, Side) {
        let (cx, cy) = &self.centroid;
        (
            Side::of_approach(cx, &p.0),
            Side::of_approach(cy, &p.1),
            Side::of_approach(&(cx + cy), &(&p.0 + &p.1)),
        )
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({:?}, {:?}, {:?})", self.i, self.j, self.k)
    }
}

/// Vertices of `{x in I, y in J, x + y in K}`: feasible pairwise
/// intersections of the six boundary lines.
fn polygon_vertices(i: &Seg, j: &Seg, k: &Seg) -> Vec<Point> {
    let xs = [&i.lo, &i.hi];
    let ys = [&j.lo, &j.hi];
    let zs = [&k.lo, &k.hi];
    let mut cand: Vec<Point> = Vec::with_capacity(12);
    for x in xs {
        for y in ys {
            cand.push((x.clone(), y.clone()));
        }
        for z in zs {
            cand.push((x.clone(), z - x));
        }
    }
    for y in ys {
        for z in zs {
            cand.push((z - y, y.clone()));
        }
    }
    let mut out: Vec<Point> = cand
        .into_iter()
        .filter(|(x, y)| i.contains(x) && j.contains(y) && k.contains(&(x + y)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The complex over a breakpoint set `B` of `[0, 1]`, restricted to `[0, 1]^2`.
#[derive(Clone, Debug)]
pub struct Complex {
    breakpoints: Vec<Rat>,
    faces: Vec<Face>,
    by_vertex: BTreeMap<Point, Vec<usize>>,
}

/// Vertices and closed cells of the 1-D complex over sorted points.
fn one_dim_faces(points: &[Rat]) -> Vec<Seg> {
    let mut out = Vec::with_capacity(2 * points.len());
    for (k, p) in points.iter().enumerate() {
        out.push(Seg::point(p.clone()));
        if let Some(q) = points.get(k + 1) {
            out.push(Seg { lo: p.clone(), hi: q.clone() });
        }
    }
    out
}

/// Smallest face of the 1-D complex over `points` containing `x`.
fn carrier(points: &[Rat], x: &Rat) -> Option<Seg> {
    match points.binary_search(x) {
        Ok(_) => Some(Seg::point(x.clone())),
        Err(0) => None,
        Err(k) if k == points.len() => None,
        Err(k) => Some(Seg { lo: points[k - 1].clone(), hi: points[k].clone() }),
    }
}

impl Complex {
    /// Builds all faces over `B ∪ {0, 1}`.
    pub fn new(breakpoints: &[Rat]) -> Complex {
        let mut b: Vec<Rat> = breakpoints.iter().map(Rat::frac).collect();
        b.push(Rat::zero());
        b.push(Rat::one());
        b.sort();
        b.dedup();
        let mut b2 = b.clone();
        b2.extend(b.iter().skip(1).map(|x| x + &Rat::one()));
        let f1 = one_dim_faces(&b);
        let f2 = one_dim_faces(&b2);
        let mut faces = Vec::new();
        for i in &f1 {
            for j in &f1 {
                let lo = &i.lo + &j.lo;
                let hi = &i.hi + &j.hi;
                let start = f2.partition_point(|k| k.hi < lo);
                for k in f2[start..].iter().take_while(|k| k.lo <= hi) {
                    let Some(face) = Face::build(i.clone(), j.clone(), k.clone()) else {
                        continue;
                    };
                    let (cx, cy) = face.centroid();
                    let canonical = carrier(&b, cx).as_ref() == Some(i)
                        && carrier(&b, cy).as_ref() == Some(j)
                        && carrier(&b2, &(cx + cy)).as_ref() == Some(k);
                    if canonical {
                        faces.push(face);
                    }
                }
            }
        }
        let mut by_vertex: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (idx, face) in faces.iter().enumerate() {
            for v in face.vertices() {
                by_vertex.entry(v.clone()).or_default().push(idx);
            }
        }
        Complex { breakpoints: b, faces, by_vertex }
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.by_vertex.keys()
    }

    /// Indices of faces having `v` as a vertex.
    pub fn faces_at(&self, v: &Point) -> &[usize] {
        self.by_vertex.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn count_by_dim(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for f in &self.faces {
            c[f.dim()] += 1;
        }
        c
    }
}

/// `pi(x) + pi(y) - pi(x + y)`.
pub fn delta_pi(pi: &PwlFunction, x: &Rat, y: &Rat) -> Rat {
    pi.eval(x) + pi.eval(y) - pi.eval(&(x + y))
}

/// Limit of the slack at `p` approaching from the relative interior of `face`.
pub fn delta_pi_limit(pi: &PwlFunction, face: &Face, p: &Point) -> Result<Rat> {
    if !face.contains_point(p) {
        return Err(Error::Precondition(format!("({}, {}) is not on {face:?}", p.0, p.1)));
    }
    Ok(slack_at(pi, face, p))
}

fn slack_at(pi: &PwlFunction, face: &Face, p: &Point) -> Rat {
    let (sx, sy, sz) = face.approach(p);
    pi.limit(&p.0, sx) + pi.limit(&p.1, sy) - pi.limit(&(&p.0 + &p.1), sz)
}

/// Slacks `Δπ_F(v)` at every vertex of every face, plus the additive subcomplex.
#[derive(Clone, Debug)]
pub struct Additivity {
    complex: Complex,
    slacks: Vec<Vec<Rat>>,
    additive: Vec<bool>,
}

impl Additivity {
    /// Evaluates `pi` on a prebuilt complex. Fails on a negative slack.
    pub fn new(pi: &PwlFunction, complex: Complex) -> Result<Additivity> {
        let slacks: Vec<Vec<Rat>> = complex
            .faces
            .iter()
            .map(|face| face.vertices.iter().map(|v| slack_at(pi, face, v)).collect())
            .collect();
        for (face, s) in complex.faces.iter().zip(&slacks) {
            for (v, val) in face.vertices.iter().zip(s) {
                if val.is_negative() {
                    return Err(Error::NotSubadditive { x: Box::new(v.0.clone()), y: Box::new(v.1.clone()), slack: Box::new(val.clone()) });
                }
            }
        }
        let additive = (0..complex.faces.len())
            .map(|e| {
                let face = &complex.faces[e];
                complex.faces_at(&face.vertices[0]).iter().any(|&fi| {
                    let big = &complex.faces[fi];
                    face.is_subface_of(big)
                        && face.vertices.iter().all(|v| {
                            let pos = big.vertices.iter().position(|w| w == v);
                            pos.is_some_and(|k| slacks[fi][k].is_zero())
                        })
                })
            })
            .collect();
        Ok(Additivity { complex, slacks, additive })
    }

    /// Additivity data over the breakpoints of `pi` and `f`.
    pub fn of(pi: &PwlFunction) -> Result<Additivity> {
        let mut b = pi.breakpoints();
        b.push(pi.f().clone());
        Additivity::new(pi, Complex::new(&b))
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn slacks(&self, face: usize) -> &[Rat] {
        &self.slacks[face]
    }

    pub fn is_additive(&self, face: usize) -> bool {
        self.additive[face]
    }

    pub fn additive_faces(&self) -> impl Iterator<Item = &Face> {
        self.complex.faces.iter().zip(&self.additive).filter(|(_, a)| **a).map(|(f, _)| f)
    }

    pub fn additive_of_dim(&self, dim: usize) -> Vec<&Face> {
        self.additive_faces().filter(|f| f.dim() == dim).collect()
    }

    /// Vertices `v` with `Δπ_F(v) = 0` for some face `F` at `v`.
    pub fn additive_vertices(&self) -> Vec<Point> {
        self.additive_of_dim(0).into_iter().map(|f| f.vertices[0].clone()).collect()
    }

    /// Pairs `(face index, vertex)` with zero limit slack.
    pub fn zero_slacks(&self) -> Vec<(usize, Point)> {
        let mut out = Vec::new();
        for (fi, face) in self.complex.faces.iter().enumerate() {
            for (v, s) in face.vertices.iter().zip(&self.slacks[fi]) {
                if s.is_zero() {
                    out.push((fi, v.clone()));
                }
            }
        }
        out
    }
}

/// Which condition of minimality failed, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ValueAtZero { value: Rat },
    ValueAtF { value: Rat },
    OutOfRange { x: Rat, side: String, value: Rat },
    Subadditivity { x: Rat, y: Rat, face: String, slack: Rat },
    Symmetry { x: Rat, y: Rat, face: String, slack: Rat },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ValueAtZero { value } => write!(f, "pi(0) = {value}, expected 0"),
            Violation::ValueAtF { value } => write!(f, "pi(f) = {value}, expected 1"),
            Violation::OutOfRange { x, side, value } => write!(f, "{side} at {x} is {value}, outside [0, 1]"),
            Violation::Subadditivity { x, y, face, slack } => {
                write!(f, "slack {slack} < 0 at ({x}, {y}) from {face}")
            }
            Violation::Symmetry { x, y, face, slack } => {
                write!(f, "symmetry fails at ({x}, {y}) from {face}: slack {slack}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub violation: Option<Violation>,
}

impl MinimalityReport {
    fn fail(v: Violation) -> MinimalityReport {
        MinimalityReport { minimal: false, violation: Some(v) }
    }
}

/// Decides minimality by vertex enumeration over the complex, including
/// all one-sided limits.
pub fn check_minimality(pi: &PwlFunction) -> MinimalityReport {
    let f = pi.f();
    let v0 = pi.eval(&Rat::zero());
    if !v0.is_zero() {
        return MinimalityReport::fail(Violation::ValueAtZero { value: v0 });
    }
    let vf = pi.eval(f);
    if vf != Rat::one() {
        return MinimalityReport::fail(Violation::ValueAtF { value: vf });
    }
    for n in pi.nodes() {
        for (name, v) in [("left limit", &n.left), ("value", &n.value), ("right limit", &n.right)] {
            if v.is_negative() || v > &Rat::one() {
                return MinimalityReport::fail(Violation::OutOfRange {
                    x: n.x.clone(),
                    side: name.to_string(),
                    value: v.clone(),
                });
            }
        }
    }
    let mut b = pi.breakpoints();
    b.push(f.clone());
    let complex = Complex::new(&b);
    let f_plus_1 = f + &Rat::one();
    for face in complex.faces() {
        let on_symmetry = face.k == Seg::point(f.clone()) || face.k == Seg::point(f_plus_1.clone());
        for v in face.vertices() {
            let s = slack_at(pi, face, v);
            if s.is_negative() {
                return MinimalityReport::fail(Violation::Subadditivity {
                    x: v.0.clone(),
                    y: v.1.clone(),
                    face: format!("{face:?}"),
                    slack: s,
                });
            }
            if on_symmetry && !s.is_zero() {
                return MinimalityReport::fail(Violation::Symmetry {
                    x: v.0.clone(),
                    y: v.1.clone(),
                    face: format!("{face:?}"),
                    slack: s,
                });
            }
        }
    }
    MinimalityReport { minimal: true, violation: None }
}
