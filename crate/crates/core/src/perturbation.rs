//! Refined breakpoints, uncovered components, the finite-dimensional
//! perturbation system, equivariant samples, effective `epsilon`,
//! decomposition and the extremality pipeline.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use log::{debug, info, warn};
use serde::Serialize;

use crate::closure::closure_of;
use crate::complex2d::{check_minimality, Additivity, Complex};
use crate::error::{Error, Result};
use crate::exactnum::{IntervalUnion, OpenInterval, Rat};
use crate::linalg::{normalize, Echelon};
use crate::moves::Move;
use crate::presentation::FinitePresentation;
use crate::pwl::{Node, PwlFunction, Side};

/// The sets `C, U, X, V, Y, Z`, the refined breakpoints `B'` (in `[0, 1]`)
/// and `U' = U \ B'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementData {
    pub covered: IntervalUnion,
    pub uncovered: IntervalUnion,
    pub x: Vec<Rat>,
    pub v: Vec<Rat>,
    pub y: Vec<Rat>,
    pub z: Vec<Rat>,
    pub bprime: Vec<Rat>,
    pub uprime: IntervalUnion,
    /// Extra passes needed to close `X ∪ Y ∪ Z` under the moves; zero
    /// when the single application in the definition of `Y` suffices.
    pub extra_orbit_passes: usize,
}

fn sorted(set: BTreeSet<Rat>) -> Vec<Rat> {
    set.into_iter().collect()
}

fn complex_with_f(points: &[Rat], f: &Rat) -> Complex {
    let mut b = points.to_vec();
    b.push(f.clone());
    Complex::new(&b)
}

fn move_images(moves: &[Move], x: &Rat) -> Vec<Rat> {
    moves.iter().filter_map(|m| m.apply(x)).collect()
}

/// Computes `X, V, Y, Z, B'` and checks move invariance and breakpoint
/// stabilization.
pub fn refine(pi: &PwlFunction, closure: &FinitePresentation) -> Result<RefinementData> {
    let one = Rat::one();
    let unit = IntervalUnion::from_pairs([(Rat::zero(), one.clone())]);
    let covered = closure.covered();
    let uncovered = unit.minus_closure(&covered);

    let mut x: BTreeSet<Rat> = covered.boundary().into_iter().collect();
    x.insert(Rat::zero());
    x.insert(one.clone());

    let add = Additivity::of(pi)?;
    let mut v: BTreeSet<Rat> = BTreeSet::new();
    for p in add.additive_vertices() {
        for t in [&p.0, &p.1, &(&p.0 + &p.1)] {
            v.insert(t.frac());
        }
    }
    if v.contains(&Rat::zero()) {
        v.insert(one.clone());
    }

    let moves: Vec<Move> = closure.moves().to_vec();
    let mut y: BTreeSet<Rat> = BTreeSet::new();
    for p in v.iter().filter(|p| uncovered.contains(p)) {
        y.insert(p.clone());
        y.extend(move_images(&moves, p));
    }
    let mut z: BTreeSet<Rat> = BTreeSet::new();
    for m in moves.iter().filter(|m| m.chi().sign() < 0) {
        let fixed = m.param() / &Rat::int(2);
        if m.domain().unwrap().contains(&fixed) && uncovered.contains(&fixed) {
            z.insert(fixed);
        }
    }

    let mut extra_orbit_passes = 0;
    loop {
        let all: BTreeSet<Rat> = x.iter().chain(&y).chain(&z).cloned().collect();
        let missing: Vec<Rat> = all
            .iter()
            .flat_map(|p| move_images(&moves, p))
            .filter(|q| !all.contains(q))
            .collect();
        if missing.is_empty() {
            break;
        }
        extra_orbit_passes += 1;
        warn!("X ∪ Y ∪ Z not closed under moves; adding {missing:?}");
        y.extend(missing);
        if extra_orbit_passes > 64 {
            return Err(Error::Inconsistent("orbit of X ∪ Y ∪ Z does not stabilize".into()));
        }
    }

    let bprime: Vec<Rat> = sorted(x.iter().chain(&y).chain(&z).cloned().collect());
    let uprime = uncovered.minus_points(&bprime);
    let data = RefinementData {
        covered,
        uncovered,
        x: sorted(x),
        v: sorted(v),
        y: sorted(y),
        z: sorted(z),
        bprime,
        uprime,
        extra_orbit_passes,
    };
    if let Some(bad) = stabilization_violation(pi, &data)? {
        return Err(Error::Inconsistent(format!("breakpoint stabilization fails at {bad}")));
    }
    Ok(data)
}

/// First projection of an additive vertex of the refined complex that is
/// neither in `B'` nor covered.
pub fn stabilization_violation(pi: &PwlFunction, data: &RefinementData) -> Result<Option<Rat>> {
    let add = Additivity::new(pi, complex_with_f(&data.bprime, pi.f()))?;
    let bset: BTreeSet<&Rat> = data.bprime.iter().collect();
    for p in add.additive_vertices() {
        for t in [&p.0, &p.1, &(&p.0 + &p.1)] {
            let t = t.frac();
            if !bset.contains(&t) && !data.covered.contains(&t) {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// A connected uncovered component: cells of the refined complex reached
/// from the fundamental domain by the connecting moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncoveredComponent {
    pub intervals: Vec<OpenInterval>,
    pub fundamental_domain: OpenInterval,
    pub connecting_moves: Vec<Move>,
}

impl UncoveredComponent {
    pub fn support(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.intervals.iter().cloned())
    }
}

/// Partitions the cells of `U'` into classes connected by moves and picks
/// connecting moves from the first cell of each class.
pub fn uncovered_components(closure: &FinitePresentation, data: &RefinementData) -> Result<Vec<UncoveredComponent>> {
    let cells: Vec<OpenInterval> = data
        .bprime
        .windows(2)
        .filter_map(|w| OpenInterval::new(w[0].clone(), w[1].clone()))
        .filter(|c| data.uprime.contains_interval(c))
        .collect();
    let index: BTreeMap<OpenInterval, usize> = cells.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
    let mut moves: Vec<Move> = closure.moves().to_vec();
    moves.extend(closure.moves().iter().map(Move::inverse));
    moves.sort();
    moves.dedup();

    let mut seen: Vec<Option<usize>> = vec![None; cells.len()];
    let mut out = Vec::new();
    for start in 0..cells.len() {
        if seen[start].is_some() {
            continue;
        }
        let comp_id = out.len();
        let d = cells[start].clone();
        let mut connecting: BTreeMap<usize, Move> = BTreeMap::new();
        connecting.insert(start, Move::translation(Rat::zero(), Some(d.clone())));
        seen[start] = Some(comp_id);
        let mut queue = VecDeque::from([start]);
        while let Some(ci) = queue.pop_front() {
            let cell = &cells[ci];
            for m in &moves {
                let dom = m.domain().unwrap();
                if dom.intersect(cell).is_none() {
                    continue;
                }
                if !cell.is_subset_of(dom) {
                    return Err(Error::Inconsistent(format!("{m} cuts the cell {cell}")));
                }
                let img = m.map().image(cell);
                let Some(&target) = index.get(&img) else {
                    return Err(Error::Inconsistent(format!("{m} maps the uncovered cell {cell} to {img}")));
                };
                match seen[target] {
                    Some(id) if id != comp_id => {
                        return Err(Error::Inconsistent(format!("{m} straddles two uncovered components")));
                    }
                    Some(_) => {}
                    None => {
                        seen[target] = Some(comp_id);
                        let via = m.clip(cell).compose(&connecting[&ci]);
                        connecting.insert(target, via);
                        queue.push_back(target);
                    }
                }
            }
        }
        let intervals: Vec<OpenInterval> = connecting.keys().map(|&k| cells[k].clone()).collect();
        let connecting_moves: Vec<Move> = connecting.into_values().collect();
        out.push(UncoveredComponent { intervals, fundamental_domain: d, connecting_moves });
    }
    Ok(out)
}

type Form = Vec<Rat>;

fn unit_form(n: usize, k: usize) -> Form {
    let mut v = vec![Rat::zero(); n];
    v[k] = Rat::one();
    v
}

fn add_scaled(a: &Form, c: &Rat, b: &Form) -> Form {
    a.iter().zip(b).map(|(x, y)| x + &(c * y)).collect()
}

fn dot(a: &Form, v: &[Rat]) -> Rat {
    a.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Piecewise linear function over `points` given by linear forms for
/// (left, value, right) at each point and slope forms per cell.
struct FormTable {
    points: Vec<Rat>,
    at: Vec<[Form; 3]>,
}

impl FormTable {
    fn form(&self, x: &Rat, side: Side) -> Form {
        let x = x.frac();
        let k = match self.points.binary_search(&x) {
            Ok(k) => {
                let i = match side {
                    Side::Left => 0,
                    Side::At => 1,
                    Side::Right => 2,
                };
                return self.at[k][i].clone();
            }
            Err(k) => k - 1,
        };
        let (a, b) = (&self.points[k], &self.points[k + 1]);
        let t = (&x - a) / (b - a);
        let r = &self.at[k][2];
        let l = &self.at[k + 1][0];
        r.iter().zip(l).map(|(p, q)| p + &(&t * &(q - p))).collect()
    }

    fn render(&self, f: &Rat, v: &[Rat]) -> PwlFunction {
        let nodes = self
            .points
            .iter()
            .zip(&self.at)
            .map(|(x, [l, c, r])| Node::new(x.clone(), dot(l, v), dot(c, v), dot(r, v)))
            .collect();
        PwlFunction::new(f.clone(), nodes).expect("breakpoints cover [0, 1]")
    }
}

/// Rows `(iii)`: `Δπ̃_F(v) = 0` wherever `Δπ_F(v) = 0` on the refined complex.
fn additivity_rows(add: &Additivity, table: &FormTable) -> Vec<Form> {
    let faces = add.complex().faces();
    let mut rows: BTreeSet<Form> = BTreeSet::new();
    for (fi, p) in add.zero_slacks() {
        let face = &faces[fi];
        let (sx, sy, sz) = face.approach(&p);
        let fx = table.form(&p.0, sx);
        let fy = table.form(&p.1, sy);
        let fz = table.form(&(&p.0 + &p.1), sz);
        let row: Form = fx.iter().zip(&fy).zip(&fz).map(|((a, b), c)| a + b - c).collect();
        if row.iter().any(|x| !x.is_zero()) {
            rows.insert(normalize(row));
        }
    }
    rows.into_iter().collect()
}

/// Basis of finite-dimensional perturbations and the raw solution vectors
/// in slope/jump coordinates.
#[derive(Clone, Debug)]
pub struct FiniteDimSpace {
    pub basis: Vec<PwlFunction>,
    pub variables: Vec<String>,
    pub solutions: Vec<Vec<Rat>>,
}

fn points_of(data: &RefinementData, f: &Rat) -> Vec<Rat> {
    let mut pts = data.bprime.clone();
    pts.push(f.clone());
    pts.sort();
    pts.dedup();
    pts
}

/// Solves for perturbations piecewise linear over the refined complex,
/// with one slope per covered and per uncovered component and one jump
/// per one-sided discontinuity of `pi`.
pub fn finite_dim_space(
    pi: &PwlFunction,
    data: &RefinementData,
    closure: &FinitePresentation,
    components: &[UncoveredComponent],
) -> Result<FiniteDimSpace> {
    if pi.two_sided_discontinuous_at_origin() {
        return Err(Error::Unsupported("two-sided discontinuous at origin".into()));
    }
    let f = pi.f();
    let points = points_of(data, f);
    let covered = closure.components();
    let jumps = pi.discontinuities();
    let mut variables: Vec<String> = Vec::new();
    variables.extend((0..covered.len()).map(|i| format!("s_c{}", i + 1)));
    variables.extend((0..components.len()).map(|i| format!("s_u{}", i + 1)));
    variables.extend(jumps.iter().map(|(x, s)| format!("d[{x}{}]", if *s == Side::Left { "-" } else { "+" })));
    let n = variables.len();
    let jump_var = |x: &Rat, side: Side| -> Option<usize> {
        jumps.iter().position(|(p, s)| p == x && *s == side).map(|k| covered.len() + components.len() + k)
    };
    let slope_var = |cell: &OpenInterval| -> Result<usize> {
        let m = cell.midpoint();
        if let Some(i) = covered.iter().position(|c| c.contains(&m)) {
            return Ok(i);
        }
        if let Some(j) = components.iter().position(|u| u.support().contains(&m)) {
            return Ok(covered.len() + j);
        }
        Err(Error::Inconsistent(format!("cell {cell} is neither covered nor in an uncovered component")))
    };

    let zero = vec![Rat::zero(); n];
    let mut at: Vec<[Form; 3]> = Vec::with_capacity(points.len());
    let left0 = match jump_var(&Rat::zero(), Side::Left) {
        Some(k) => add_scaled(&zero, &-Rat::one(), &unit_form(n, k)),
        None => zero.clone(),
    };
    let right0 = match jump_var(&Rat::zero(), Side::Right) {
        Some(k) => unit_form(n, k),
        None => zero.clone(),
    };
    at.push([left0.clone(), zero.clone(), right0]);
    for k in 1..points.len() {
        let cell = OpenInterval::new(points[k - 1].clone(), points[k].clone()).unwrap();
        let s = unit_form(n, slope_var(&cell)?);
        let left = add_scaled(&at[k - 1][2], &cell.length(), &s);
        if k + 1 == points.len() {
            let last = [left, at[0][1].clone(), at[0][2].clone()];
            at.push(last);
            break;
        }
        let x = &points[k];
        let value = match jump_var(x, Side::Left) {
            Some(j) => add_scaled(&left, &Rat::one(), &unit_form(n, j)),
            None => left.clone(),
        };
        let right = match jump_var(x, Side::Right) {
            Some(j) => add_scaled(&value, &Rat::one(), &unit_form(n, j)),
            None => value.clone(),
        };
        at.push([left, value, right]);
    }
    let table = FormTable { points: points.clone(), at };

    let mut rows = Vec::new();
    rows.push(table.form(f, Side::At));
    // closing the period: π̃(1^-) = π̃(0^-)
    let close: Form = table.at.last().unwrap()[0].iter().zip(&left0).map(|(a, b)| a - b).collect();
    rows.push(close);
    let add = Additivity::new(pi, Complex::new(&points))?;
    rows.extend(additivity_rows(&add, &table));
    let solutions = Echelon::new(&rows, n).null_space();
    let basis = solutions.iter().map(|v| table.render(f, v).canonicalize()).collect();
    debug!("finite-dimensional system: {} variables, {} equations, {} solutions", n, rows.len(), solutions.len());
    Ok(FiniteDimSpace { basis, variables, solutions })
}

/// Same space from one variable per value and one-sided limit at each
/// point of `B'`; independent of the component structure.
pub fn finite_dim_space_by_limits(pi: &PwlFunction, data: &RefinementData) -> Result<Vec<PwlFunction>> {
    let f = pi.f();
    let points = points_of(data, f);
    let m = points.len() - 1;
    let n = 3 * m;
    let mut at: Vec<[Form; 3]> = (0..m)
        .map(|k| [unit_form(n, 3 * k), unit_form(n, 3 * k + 1), unit_form(n, 3 * k + 2)])
        .collect();
    at.push(at[0].clone());
    let table = FormTable { points: points.clone(), at };
    let mut rows = vec![table.form(&Rat::zero(), Side::At), table.form(f, Side::At)];
    let add = Additivity::new(pi, Complex::new(&points))?;
    rows.extend(additivity_rows(&add, &table));
    let sols = Echelon::new(&rows, n).null_space();
    Ok(sols.iter().map(|v| table.render(f, v).canonicalize()).collect())
}

/// Triangle bump of `height` peaking at the middle of the fundamental
/// domain, copied to each `gamma_j(D)` with sign `chi(gamma_j)`, zero
/// elsewhere.
pub fn equivariant_sample(component: &UncoveredComponent, height: &Rat, f: &Rat) -> PwlFunction {
    let mut pts: BTreeMap<Rat, Rat> = BTreeMap::new();
    pts.insert(Rat::zero(), Rat::zero());
    pts.insert(Rat::one(), Rat::zero());
    for g in &component.connecting_moves {
        let img = g.image().expect("connecting moves are non-empty");
        pts.insert(img.lo().clone(), Rat::zero());
        pts.insert(img.hi().clone(), Rat::zero());
        let peak = g.map().apply(&component.fundamental_domain.midpoint());
        pts.insert(peak, height * &Rat::int(g.chi().sign() as i64));
    }
    PwlFunction::continuous(f.clone(), pts.into_iter().collect()).expect("points cover [0, 1]")
}

/// Largest admissible `epsilon` and, when it is zero, the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonReport {
    pub epsilon: Rat,
    pub certificate: Option<String>,
}

/// Largest `epsilon` with `pi ± epsilon * pert` minimal, from slack ratios
/// at the vertices of the common refinement; verified exactly.
pub fn epsilon_for(pi: &PwlFunction, pert: &PwlFunction) -> Result<EpsilonReport> {
    let zero_report = |why: String| Ok(EpsilonReport { epsilon: Rat::zero(), certificate: Some(why) });
    if pert.is_zero() {
        return Ok(EpsilonReport { epsilon: Rat::one(), certificate: None });
    }
    let f = pi.f();
    for x in [Rat::zero(), f.clone()] {
        let v = pert.eval(&x);
        if !v.is_zero() {
            return zero_report(format!("perturbation is {v} at {x}"));
        }
    }
    let mut pts = pi.breakpoints();
    pts.extend(pert.breakpoints());
    let pi_r = pi.refine(&pts);
    let mut best: Option<Rat> = None;
    let mut bound = |r: Rat| {
        if best.as_ref().is_none_or(|b| &r < b) {
            best = Some(r);
        }
    };
    for node in pi_r.nodes() {
        for side in [Side::Left, Side::At, Side::Right] {
            let a = node.get(side);
            let b = pert.limit(&node.x, side);
            if b.is_zero() {
                continue;
            }
            if a.is_zero() || a == &Rat::one() {
                return zero_report(format!("pi is {a} at {} ({side:?}) but the perturbation is {b}", node.x));
            }
            let lo = a / &b.abs();
            let hi = (Rat::one() - a) / b.abs();
            bound(if lo < hi { lo } else { hi });
        }
    }
    let complex = complex_with_f(&pts, f);
    let add = Additivity::new(pi, complex)?;
    let faces = add.complex().faces();
    for (fi, face) in faces.iter().enumerate() {
        for (v, a) in face.vertices().iter().zip(add.slacks(fi)) {
            let (sx, sy, sz) = face.approach(v);
            let b = pert.limit(&v.0, sx) + pert.limit(&v.1, sy) - pert.limit(&(&v.0 + &v.1), sz);
            if b.is_zero() {
                continue;
            }
            if a.is_zero() {
                return zero_report(format!("additivity at ({}, {}) from {face:?} is broken: slack {b}", v.0, v.1));
            }
            bound(a / &b.abs());
        }
    }
    let epsilon = best.unwrap_or_else(Rat::one);
    for sign in [Rat::one(), -Rat::one()] {
        let cand = PwlFunction::linear_combine(&[(Rat::one(), pi), (&sign * &epsilon, pert)]);
        if let Some(v) = check_minimality(&cand).violation {
            return Err(Error::Verification(format!("pi {} {epsilon} * perturbation is not minimal: {v}", if sign.is_positive() { "+" } else { "-" })));
        }
    }
    Ok(EpsilonReport { epsilon, certificate: None })
}

/// Splits `pert` into its interpolant over the refined breakpoints and a
/// remainder vanishing with both limits at every refined breakpoint.
pub fn decompose(pert: &PwlFunction, bprime: &[Rat]) -> Result<(PwlFunction, PwlFunction)> {
    let mut pts: Vec<Rat> = bprime.iter().map(Rat::frac).collect();
    pts.push(Rat::zero());
    pts.sort();
    pts.dedup();
    let mut nodes: Vec<Node> = pts
        .iter()
        .map(|x| {
            let (l, v, r) = pert.limits(x);
            Node::new(x.clone(), l, v, r)
        })
        .collect();
    nodes.push(Node::new(Rat::one(), nodes[0].left.clone(), nodes[0].value.clone(), nodes[0].right.clone()));
    let on_t = PwlFunction::new(pert.f().clone(), nodes)?;
    let rest = pert.sub(&on_t);
    for x in &pts {
        let (l, v, r) = rest.limits(x);
        if !(l.is_zero() && v.is_zero() && r.is_zero()) {
            return Err(Error::Inconsistent(format!("remainder does not vanish at {x}")));
        }
    }
    Ok((on_t.canonicalize(), rest.canonicalize()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum Verdict {
    Extreme,
    NotExtreme,
    NotMinimal(String),
    Unsupported(String),
}

#[derive(Clone, Debug)]
pub struct ExtremalityReport {
    pub verdict: Verdict,
    pub function: PwlFunction,
    pub witness: Option<PwlFunction>,
    pub epsilon: Option<Rat>,
    pub presentation: Option<FinitePresentation>,
    pub refinement: Option<RefinementData>,
    pub components: Vec<UncoveredComponent>,
    pub finite_dim: Option<FiniteDimSpace>,
}

impl ExtremalityReport {
    fn early(verdict: Verdict, function: PwlFunction) -> ExtremalityReport {
        ExtremalityReport {
            verdict,
            function,
            witness: None,
            epsilon: None,
            presentation: None,
            refinement: None,
            components: Vec::new(),
            finite_dim: None,
        }
    }
}

/// Minimality, closure, refinement, uncovered components and the
/// finite-dimensional system; a `NotExtreme` verdict carries a witness
/// with a verified `epsilon`. `Err` signals an internal inconsistency.
pub fn extremality_test(pi: &PwlFunction, budget: Option<usize>) -> Result<ExtremalityReport> {
    let pi = pi.canonicalize();
    if let Some(v) = check_minimality(&pi).violation {
        return Ok(ExtremalityReport::early(Verdict::NotMinimal(v.to_string()), pi));
    }
    let closure = closure_of(&pi, budget)?;
    if closure.budget_exhausted {
        let mut rep = ExtremalityReport::early(Verdict::Unsupported("closure budget exhausted".into()), pi);
        rep.presentation = Some(closure.presentation);
        return Ok(rep);
    }
    let presentation = closure.presentation;
    let data = refine(&pi, &presentation)?;
    let components = uncovered_components(&presentation, &data)?;
    let mut rep = ExtremalityReport::early(Verdict::Extreme, pi.clone());
    rep.presentation = Some(presentation.clone());
    rep.refinement = Some(data.clone());
    rep.components = components.clone();
    if pi.two_sided_discontinuous_at_origin() {
        rep.verdict = Verdict::Unsupported("two-sided discontinuous at origin".into());
        return Ok(rep);
    }
    let space = finite_dim_space(&pi, &data, &presentation, &components)?;
    let witness = match (space.basis.first(), components.first()) {
        (Some(b), _) => Some(b.clone()),
        (None, Some(c)) => Some(equivariant_sample(c, &Rat::one(), pi.f())),
        (None, None) => None,
    };
    rep.finite_dim = Some(space);
    if let Some(w) = witness {
        let eps = epsilon_for(&pi, &w)?;
        if !eps.epsilon.is_positive() {
            return Err(Error::Verification(format!("witness is not effective: {:?}", eps.certificate)));
        }
        info!("not extreme; witness verified with epsilon {}", eps.epsilon);
        rep.verdict = Verdict::NotExtreme;
        rep.witness = Some(w);
        rep.epsilon = Some(eps.epsilon);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{equiv7_example_1, gmic, minimal_no_covered_interval, two_slope};
    use crate::closure::respect_violation;
    use crate::exactnum::r;

    fn iv(a: Rat, b: Rat) -> OpenInterval {
        OpenInterval::new(a, b).unwrap()
    }

    fn pipeline(pi: &PwlFunction) -> (FinitePresentation, RefinementData, Vec<UncoveredComponent>) {
        let p = closure_of(pi, None).unwrap().presentation;
        let d = refine(pi, &p).unwrap();
        let c = uncovered_components(&p, &d).unwrap();
        (p, d, c)
    }

    #[test]
    fn equiv7_refinement() {
        let pi = equiv7_example_1();
        let (p, d, comps) = pipeline(&pi);
        assert_eq!(d.x, vec![r(0, 1), r(1, 2), r(1, 1)]);
        assert_eq!(d.z, vec![r(1, 4)]);
        assert_eq!(d.bprime, vec![r(0, 1), r(1, 4), r(1, 2), r(1, 1)]);
        assert_eq!(d.extra_orbit_passes, 0);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].intervals, vec![iv(r(0, 1), r(1, 4)), iv(r(1, 4), r(1, 2))]);
        assert_eq!(comps[0].fundamental_domain, iv(r(0, 1), r(1, 4)));
        assert_eq!(
            comps[0].connecting_moves,
            vec![Move::translation(r(0, 1), Some(iv(r(0, 1), r(1, 4)))), Move::reflection(r(1, 2), Some(iv(r(0, 1), r(1, 4))))]
        );
        let space = finite_dim_space(&pi, &d, &p, &comps).unwrap();
        assert_eq!(space.basis.len(), 1);
        let expected = PwlFunction::new(
            r(1, 2),
            vec![
                Node::new(r(0, 1), r(0, 1), r(0, 1), r(-1, 4)),
                Node::new(r(1, 2), r(1, 4), r(0, 1), r(0, 1)),
                Node::new(r(1, 1), r(0, 1), r(0, 1), r(-1, 4)),
            ],
        )
        .unwrap();
        let b = &space.basis[0];
        let scale = b.limit(&r(0, 1), Side::Right) / r(-1, 4);
        assert!(b.same_function(&expected.scale(&scale)), "{b:?}");
        assert_eq!(finite_dim_space_by_limits(&pi, &d).unwrap().len(), 1);
    }

    #[test]
    fn minimal_no_covered_interval_refinement() {
        let pi = minimal_no_covered_interval();
        let (_, d, comps) = pipeline(&pi);
        assert!(d.covered.is_empty());
        assert_eq!(d.bprime, vec![r(0, 1), r(1, 4), r(1, 2), r(3, 4), r(1, 1)]);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].intervals, vec![iv(r(0, 1), r(1, 4)), iv(r(1, 4), r(1, 2))]);
        assert_eq!(comps[1].intervals, vec![iv(r(1, 2), r(3, 4)), iv(r(3, 4), r(1, 1))]);
        let rep = extremality_test(&pi, None).unwrap();
        assert_eq!(rep.verdict, Verdict::Unsupported("two-sided discontinuous at origin".into()));
    }

    #[test]
    fn gmic_is_extreme() {
        for f in [r(1, 5), r(4, 5)] {
            let pi = gmic(f.clone()).unwrap();
            let (p, d, comps) = pipeline(&pi);
            assert!(d.uncovered.is_empty() && d.uprime.is_empty());
            assert_eq!(d.bprime, pi.breakpoints());
            assert!(comps.is_empty());
            assert!(finite_dim_space(&pi, &d, &p, &comps).unwrap().basis.is_empty());
            assert_eq!(extremality_test(&pi, None).unwrap().verdict, Verdict::Extreme);
        }
    }

    #[test]
    fn equiv7_not_extreme_with_verified_witness() {
        let pi = equiv7_example_1();
        let rep = extremality_test(&pi, None).unwrap();
        assert_eq!(rep.verdict, Verdict::NotExtreme);
        let w = rep.witness.unwrap();
        let eps = rep.epsilon.unwrap();
        assert!(eps.is_positive());
        for s in [Rat::one(), -Rat::one()] {
            let cand = PwlFunction::linear_combine(&[(Rat::one(), &pi), (&s * &eps, &w)]);
            assert!(check_minimality(&cand).minimal);
        }
    }

    #[test]
    fn equivariant_sample_shape() {
        let pi = equiv7_example_1();
        let (p, d, comps) = pipeline(&pi);
        let s = equivariant_sample(&comps[0], &Rat::one(), pi.f());
        assert_eq!(s.eval(&r(1, 8)), r(1, 1));
        assert_eq!(s.eval(&r(3, 8)), r(-1, 1));
        for x in &d.bprime {
            assert_eq!(s.limits(x), (Rat::zero(), Rat::zero(), Rat::zero()));
        }
        assert!(respect_violation(&s, &p, 32).is_none());
        let eps = epsilon_for(&pi, &s).unwrap();
        assert!(eps.epsilon.is_positive());
    }

    #[test]
    fn epsilon_examples() {
        let pi = equiv7_example_1();
        assert_eq!(epsilon_for(&pi, &PwlFunction::zero(r(1, 2))).unwrap().epsilon, Rat::one());
        // a tent on (1/2, 1) breaks the covered component
        let bad = PwlFunction::continuous(
            r(1, 2),
            vec![(r(0, 1), r(0, 1)), (r(1, 2), r(0, 1)), (r(3, 4), r(1, 1)), (r(1, 1), r(0, 1))],
        )
        .unwrap();
        let rep = epsilon_for(&pi, &bad).unwrap();
        assert!(rep.epsilon.is_zero());
        assert!(rep.certificate.is_some());
    }

    #[test]
    fn decompose_examples() {
        let pi = equiv7_example_1();
        let (p, d, comps) = pipeline(&pi);
        let basis = finite_dim_space(&pi, &d, &p, &comps).unwrap().basis;
        let sample = equivariant_sample(&comps[0], &r(1, 3), pi.f());
        let (a, b) = decompose(&basis[0], &d.bprime).unwrap();
        assert!(a.same_function(&basis[0]) && b.is_zero());
        let (a, b) = decompose(&sample, &d.bprime).unwrap();
        assert!(a.is_zero() && b.same_function(&sample));
        let mix = PwlFunction::linear_combine(&[(r(2, 1), &basis[0]), (r(-1, 1), &sample)]);
        let (a, b) = decompose(&mix, &d.bprime).unwrap();
        assert!(a.same_function(&basis[0].scale(&r(2, 1))));
        assert!(b.same_function(&sample.scale(&r(-1, 1))));
        for part in [&a, &b] {
            assert!(epsilon_for(&pi, part).unwrap().epsilon.is_positive());
        }
    }

    #[test]
    fn two_slope_systems_agree() {
        for pi in [two_slope(r(1, 2), r(4, 1)).unwrap(), two_slope(r(3, 5), r(5, 1)).unwrap(), gmic(r(2, 3)).unwrap()] {
            let (p, d, comps) = pipeline(&pi);
            let a = finite_dim_space(&pi, &d, &p, &comps).unwrap().basis.len();
            let b = finite_dim_space_by_limits(&pi, &d).unwrap().len();
            assert_eq!(a, b);
        }
    }
}
