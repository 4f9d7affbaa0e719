//! Z-periodic, possibly discontinuous piecewise linear functions.
//!
//! A function is stored by its breakpoints `0 = x_0 < ... < x_n = 1`, each
//! carrying the triple (left limit, value, right limit). On an open cell
//! `(x_i, x_{i+1})` the function is the affine interpolant of the right limit
//! at `x_i` and the left limit at `x_{i+1}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{IntervalUnion, OpenInterval, Rat};

/// Which one-sided limit (or the value itself) to read at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    At,
    Right,
}

impl Side {
    /// Side from which `approach` tends to `target`.
    pub fn of_approach(approach: &Rat, target: &Rat) -> Side {
        match approach.cmp(target) {
            std::cmp::Ordering::Less => Side::Left,
            std::cmp::Ordering::Equal => Side::At,
            std::cmp::Ordering::Greater => Side::Right,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::At => Side::At,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub x: Rat,
    pub left: Rat,
    pub value: Rat,
    pub right: Rat,
}

impl Node {
    pub fn new(x: Rat, left: Rat, value: Rat, right: Rat) -> Node {
        Node { x, left, value, right }
    }

    pub fn continuous(x: Rat, value: Rat) -> Node {
        Node { x, left: value.clone(), value: value.clone(), right: value }
    }

    pub fn get(&self, side: Side) -> &Rat {
        match side {
            Side::Left => &self.left,
            Side::At => &self.value,
            Side::Right => &self.right,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.left == self.value && self.value == self.right
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({}, {}, {})", self.x, self.left, self.value, self.right)
    }
}

/// Z-periodic piecewise linear function together with the parameter `f`.
///
/// Perturbation functions use the same representation; their `f` is the
/// parent function's and carries no normalization.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PwlFunction {
    f: Rat,
    nodes: Vec<Node>,
}

/// Perturbations share the representation of [`PwlFunction`].
pub type PerturbationFn = PwlFunction;

impl PwlFunction {
    /// Builds a function from breakpoint nodes covering `[0, 1]`.
    ///
    /// The node at 1 supplies the left limit at 0 and the node at 0 supplies
    /// the value and right limit at 1, so the result is periodic.
    pub fn new(f: Rat, mut nodes: Vec<Node>) -> Result<PwlFunction> {
        if nodes.len() < 2 {
            return Err(Error::InvalidFunction("need breakpoints 0 and 1".into()));
        }
        if !nodes[0].x.is_zero() || nodes.last().unwrap().x != Rat::one() {
            return Err(Error::InvalidFunction("breakpoints must start at 0 and end at 1".into()));
        }
        if nodes.windows(2).any(|w| w[0].x >= w[1].x) {
            return Err(Error::InvalidFunction("breakpoints must be strictly increasing".into()));
        }
        let n = nodes.len() - 1;
        nodes[0].left = nodes[n].left.clone();
        nodes[n].value = nodes[0].value.clone();
        nodes[n].right = nodes[0].right.clone();
        Ok(PwlFunction { f, nodes })
    }

    /// Continuous function through the given `(x, value)` points.
    pub fn continuous(f: Rat, points: Vec<(Rat, Rat)>) -> Result<PwlFunction> {
        PwlFunction::new(f, points.into_iter().map(|(x, v)| Node::continuous(x, v)).collect())
    }

    pub fn zero(f: Rat) -> PwlFunction {
        PwlFunction::continuous(f, vec![(Rat::zero(), Rat::zero()), (Rat::one(), Rat::zero())]).unwrap()
    }

    pub fn f(&self) -> &Rat {
        &self.f
    }

    pub fn with_f(mut self, f: Rat) -> PwlFunction {
        self.f = f;
        self
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn breakpoints(&self) -> Vec<Rat> {
        self.nodes.iter().map(|n| n.x.clone()).collect()
    }

    /// Open cells `(x_i, x_{i+1})` of the breakpoint complex.
    pub fn cells(&self) -> Vec<OpenInterval> {
        self.nodes
            .windows(2)
            .map(|w| OpenInterval::new(w[0].x.clone(), w[1].x.clone()).unwrap())
            .collect()
    }

    /// Index `i` with `x_i <= x < x_{i+1}` for `x` in `[0, 1)`.
    fn cell_index(&self, x: &Rat) -> usize {
        self.nodes.partition_point(|n| &n.x <= x) - 1
    }

    fn node_at(&self, x: &Rat) -> Option<&Node> {
        self.nodes.binary_search_by(|n| n.x.cmp(x)).ok().map(|i| &self.nodes[i])
    }

    /// Value of the affine piece of cell `i` at `x` (any `x`).
    fn cell_affine(&self, i: usize, x: &Rat) -> Rat {
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let t = (x - &a.x) / (&b.x - &a.x);
        &a.right + &(&t * &(&b.left - &a.right))
    }

    /// Slope of the function on cell `i`.
    pub fn cell_slope(&self, i: usize) -> Rat {
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        (&b.left - &a.right) / (&b.x - &a.x)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.limit(x, Side::At)
    }

    /// `pi(x^-)`, `pi(x)` or `pi(x^+)` depending on `side`.
    pub fn limit(&self, x: &Rat, side: Side) -> Rat {
        let x = x.frac();
        if let Some(n) = self.node_at(&x) {
            return n.get(side).clone();
        }
        let i = self.cell_index(&x);
        self.cell_affine(i, &x)
    }

    pub fn limits(&self, x: &Rat) -> (Rat, Rat, Rat) {
        (self.limit(x, Side::Left), self.limit(x, Side::At), self.limit(x, Side::Right))
    }

    pub fn is_continuous(&self) -> bool {
        self.nodes.iter().all(Node::is_continuous)
    }

    /// Points of `[0, 1)` with the sides on which the function jumps.
    pub fn discontinuities(&self) -> Vec<(Rat, Side)> {
        let mut out = Vec::new();
        for n in &self.nodes[..self.nodes.len() - 1] {
            if n.left != n.value {
                out.push((n.x.clone(), Side::Left));
            }
            if n.right != n.value {
                out.push((n.x.clone(), Side::Right));
            }
        }
        out
    }

    /// Maximal open subset of `(0, 1)` on which the function is continuous.
    pub fn continuity_set(&self) -> IntervalUnion {
        let points: Vec<Rat> = self.discontinuities().into_iter().map(|(x, _)| x).collect();
        IntervalUnion::from_interval(OpenInterval::new(Rat::zero(), Rat::one()).unwrap()).minus_points(&points)
    }

    pub fn is_continuous_at(&self, x: &Rat) -> bool {
        let x = x.frac();
        self.node_at(&x).is_none_or(Node::is_continuous)
    }

    /// Discontinuous from both sides of the origin.
    pub fn two_sided_discontinuous_at_origin(&self) -> bool {
        let n = &self.nodes[0];
        n.left != n.value && n.right != n.value
    }

    /// Same function over a finer breakpoint set.
    pub fn refine<'a, I: IntoIterator<Item = &'a Rat>>(&self, points: I) -> PwlFunction {
        let mut xs: Vec<Rat> = self.breakpoints();
        xs.extend(points.into_iter().map(Rat::frac));
        xs.push(Rat::one());
        xs.sort();
        xs.dedup();
        let nodes = xs
            .into_iter()
            .map(|x| {
                if let Some(n) = self.node_at(&x) {
                    n.clone()
                } else {
                    let v = self.eval(&x);
                    Node::continuous(x, v)
                }
            })
            .collect();
        PwlFunction { f: self.f.clone(), nodes }
    }

    /// Drops every interior breakpoint across which the function is
    /// continuous and affine, giving the coarsest breakpoint complex.
    pub fn canonicalize(&self) -> PwlFunction {
        let mut nodes: Vec<Node> = vec![self.nodes[0].clone()];
        for k in 1..self.nodes.len() - 1 {
            let cur = &self.nodes[k];
            let prev = nodes.last().unwrap();
            let next = &self.nodes[k + 1];
            let redundant = cur.is_continuous() && {
                let s1 = (&cur.left - &prev.right) / (&cur.x - &prev.x);
                let s2 = (&next.left - &cur.right) / (&next.x - &cur.x);
                s1 == s2
            };
            if !redundant {
                nodes.push(cur.clone());
            }
        }
        nodes.push(self.nodes.last().unwrap().clone());
        PwlFunction { f: self.f.clone(), nodes }
    }

    /// Exact pointwise combination `sum c_i * g_i` over the common refinement.
    /// The result inherits `f` from the first term.
    pub fn linear_combine(terms: &[(Rat, &PwlFunction)]) -> PwlFunction {
        assert!(!terms.is_empty(), "empty combination");
        let mut xs: Vec<Rat> = terms.iter().flat_map(|(_, g)| g.breakpoints()).collect();
        xs.sort();
        xs.dedup();
        let nodes = xs
            .into_iter()
            .map(|x| {
                let mut acc = [Rat::zero(), Rat::zero(), Rat::zero()];
                for (c, g) in terms {
                    for (k, side) in [Side::Left, Side::At, Side::Right].into_iter().enumerate() {
                        acc[k] += &(c * &g.limit_in_period(&x, side));
                    }
                }
                let [l, v, r] = acc;
                Node::new(x, l, v, r)
            })
            .collect();
        PwlFunction::new(terms[0].1.f.clone(), nodes).expect("combination of valid functions")
    }

    /// Like `limit` but treats `x = 1` as the right end of the period, so the
    /// node at 1 reads the limits stored there.
    fn limit_in_period(&self, x: &Rat, side: Side) -> Rat {
        if x == &Rat::one() {
            return self.nodes.last().unwrap().get(side).clone();
        }
        self.limit(x, side)
    }

    pub fn scale(&self, c: &Rat) -> PwlFunction {
        PwlFunction::linear_combine(&[(c.clone(), self)])
    }

    pub fn add(&self, other: &PwlFunction) -> PwlFunction {
        PwlFunction::linear_combine(&[(Rat::one(), self), (Rat::one(), other)])
    }

    pub fn sub(&self, other: &PwlFunction) -> PwlFunction {
        PwlFunction::linear_combine(&[(Rat::one(), self), (-Rat::one(), other)])
    }

    /// True when the function and all of its limits vanish everywhere.
    pub fn is_zero(&self) -> bool {
        self.nodes.iter().all(|n| n.left.is_zero() && n.value.is_zero() && n.right.is_zero())
    }

    /// Equality as functions (ignores redundant breakpoints).
    pub fn same_function(&self, other: &PwlFunction) -> bool {
        self.canonicalize().nodes == other.canonicalize().nodes
    }

    /// Builds the continuous interpolant of values given on `(1/q) Z`.
    pub fn interpolate_from_grid(values: &BTreeMap<Rat, Rat>, f: Rat) -> Result<PwlFunction> {
        let q = values.len() as i64;
        if q == 0 {
            return Err(Error::Grid("empty grid".into()));
        }
        let mut points = Vec::with_capacity(values.len() + 1);
        for i in 0..q {
            let x = Rat::new(i, q);
            let v = values
                .get(&x)
                .ok_or_else(|| Error::Grid(format!("missing grid point {x}")))?;
            points.push((x, v.clone()));
        }
        if !f.on_grid(q as u64) {
            return Err(Error::Grid(format!("f = {f} is not on the 1/{q} grid")));
        }
        if !points[0].1.is_zero() {
            return Err(Error::Grid("value at 0 must be 0".into()));
        }
        points.push((Rat::one(), Rat::zero()));
        PwlFunction::continuous(f, points)
    }

    pub fn to_json(&self) -> FunctionJson {
        FunctionJson {
            f: self.f.clone(),
            breakpoints: self
                .nodes
                .iter()
                .map(|n| {
                    if n.is_continuous() {
                        NodeJson { x: n.x.clone(), left: None, value: n.value.clone(), right: None }
                    } else {
                        NodeJson {
                            x: n.x.clone(),
                            left: Some(n.left.clone()),
                            value: n.value.clone(),
                            right: Some(n.right.clone()),
                        }
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(j: &FunctionJson) -> Result<PwlFunction> {
        let nodes = j
            .breakpoints
            .iter()
            .map(|n| match (&n.left, &n.right) {
                (None, None) => Ok(Node::continuous(n.x.clone(), n.value.clone())),
                (Some(l), Some(r)) => Ok(Node::new(n.x.clone(), l.clone(), n.value.clone(), r.clone())),
                _ => Err(Error::Parse(format!("breakpoint {} needs both limits or neither", n.x))),
            })
            .collect::<Result<Vec<_>>>()?;
        PwlFunction::new(j.f.clone(), nodes)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<PwlFunction> {
        let j: FunctionJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        PwlFunction::from_json(&j)
    }
}

impl fmt::Debug for PwlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PwlFunction(f={}, {:?})", self.f, self.nodes)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub x: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Rat>,
    pub value: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub f: Rat,
    pub breakpoints: Vec<NodeJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{equiv7_example_1, gmic, minimal_no_covered_interval};
    use crate::exactnum::r;

    #[test]
    fn eval_equiv7() {
        let pi = equiv7_example_1();
        assert_eq!(pi.eval(&r(3, 4)), r(1, 2));
        assert_eq!(pi.eval(&r(0, 1)), r(0, 1));
        assert_eq!(pi.eval(&r(5, 4)), r(1, 2));
        assert_eq!(pi.eval(&r(-1, 4)), r(1, 2));
    }

    #[test]
    fn limits_examples() {
        let pi = equiv7_example_1();
        assert_eq!(pi.limits(&r(1, 2)), (r(1, 2), r(1, 1), r(1, 1)));
        // left limit at 0 is the limit of 2(1-x) at 1
        assert_eq!(pi.limits(&r(0, 1)), (r(0, 1), r(0, 1), r(1, 2)));
        let m = minimal_no_covered_interval();
        assert_eq!(m.limits(&r(1, 2)), (r(1, 2), r(1, 1), r(1, 2)));
        assert_eq!(m.limits(&r(0, 1)), (r(1, 2), r(0, 1), r(1, 2)));
        let g = gmic(r(4, 5)).unwrap();
        assert_eq!(g.limits(&r(2, 5)), (r(1, 2), r(1, 2), r(1, 2)));
    }

    #[test]
    fn continuity_set() {
        let pi = equiv7_example_1();
        assert_eq!(pi.continuity_set().to_string(), "(0, 1/2) U (1/2, 1)");
        assert!(!pi.two_sided_discontinuous_at_origin());
        assert!(minimal_no_covered_interval().two_sided_discontinuous_at_origin());
        assert_eq!(gmic(r(1, 3)).unwrap().continuity_set().to_string(), "(0, 1)");
    }

    #[test]
    fn interpolate_examples() {
        let mut v = BTreeMap::new();
        v.insert(r(0, 1), r(0, 1));
        v.insert(r(1, 2), r(1, 1));
        let tent = PwlFunction::interpolate_from_grid(&v, r(1, 2)).unwrap();
        assert_eq!(tent.eval(&r(1, 4)), r(1, 2));
        assert_eq!(tent.eval(&r(3, 4)), r(1, 2));

        let g = gmic(r(4, 5)).unwrap();
        let grid: BTreeMap<Rat, Rat> = (0..10).map(|i| (r(i, 10), g.eval(&r(i, 10)))).collect();
        let back = PwlFunction::interpolate_from_grid(&grid, r(4, 5)).unwrap();
        assert!(back.same_function(&g));

        let hat: BTreeMap<Rat, Rat> = (0..3).map(|i| (r(i, 3), if i == 1 { r(1, 1) } else { r(0, 1) })).collect();
        let h = PwlFunction::interpolate_from_grid(&hat, r(1, 3)).unwrap();
        assert_eq!(h.eval(&r(1, 3)), r(1, 1));
        assert_eq!(h.eval(&r(1, 6)), r(1, 2));

        let mut missing = grid.clone();
        missing.remove(&r(3, 10));
        missing.insert(r(1, 3), r(0, 1));
        assert!(PwlFunction::interpolate_from_grid(&missing, r(4, 5)).is_err());
        assert!(PwlFunction::interpolate_from_grid(&grid, r(1, 3)).is_err());
    }

    #[test]
    fn linear_combination() {
        let pi = equiv7_example_1();
        let zero = PwlFunction::zero(r(1, 2)).refine([&r(1, 4)]);
        let same = PwlFunction::linear_combine(&[(Rat::one(), &pi), (Rat::zero(), &zero)]);
        assert!(same.same_function(&pi));
        assert_eq!(same.breakpoints(), vec![r(0, 1), r(1, 4), r(1, 2), r(1, 1)]);
        let diff = pi.sub(&pi);
        assert!(diff.is_zero());
    }

    #[test]
    fn canonicalize_drops_affine_breakpoints() {
        let g = gmic(r(1, 2)).unwrap();
        let fine = g.refine([&r(1, 8), &r(3, 4)]);
        assert_eq!(fine.breakpoints().len(), 5);
        assert_eq!(fine.canonicalize().breakpoints(), vec![r(0, 1), r(1, 2), r(1, 1)]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        for pi in [equiv7_example_1(), minimal_no_covered_interval(), gmic(r(7, 10)).unwrap()] {
            let s = pi.to_json_string();
            let back = PwlFunction::from_json_str(&s).unwrap();
            assert_eq!(back, pi);
            assert_eq!(back.to_json_string(), s);
        }
        let s = r#"{"f":"1/2","breakpoints":[{"x":"0","value":"0"},{"x":"1/2","value":"1"},{"x":"1","value":"0"}]}"#;
        let tent = PwlFunction::from_json_str(s).unwrap();
        assert_eq!(tent.eval(&r(1, 4)), r(1, 2));
        assert!(PwlFunction::from_json_str(r#"{"f":"1/2","breakpoints":[{"x":"0","value":"0","left":"1"}]}"#).is_err());
    }

    #[test]
    fn eval_agrees_with_limits_off_breakpoints() {
        let pi = equiv7_example_1();
        for k in 1..40 {
            let x = r(2 * k - 1, 80);
            let (l, v, rr) = pi.limits(&x);
            assert_eq!(l, v);
            assert_eq!(v, rr);
        }
    }
}
