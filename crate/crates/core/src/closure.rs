//! Initial additive moves of a function and their closure, computed as a
//! reduced finite presentation by a completion loop.

use log::{debug, info};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::complex2d::{check_minimality, Additivity, Face};
use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, IntervalUnion, OpenInterval, Rat};
use crate::moves::{Move, MoveMap};
use crate::presentation::FinitePresentation;
use crate::pwl::{PwlFunction, Side};

#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    #[serde(skip)]
    pub presentation: FinitePresentation,
    pub steps: Vec<String>,
    pub rounds: usize,
    pub budget_exhausted: bool,
    /// Parameters or endpoints that left the `(1/q) Z` grid. Always zero
    /// for rational inputs; a nonzero count signals limit behavior.
    pub off_grid: usize,
}

/// 1 when a `K` projection starting at `lo` lies in `[1, 2]`, else 0; reduces `x + y` mod 1.
fn period_shift(lo: &Rat) -> Rat {
    if lo >= &Rat::one() {
        Rat::one()
    } else {
        Rat::zero()
    }
}

fn push_move(out: &mut Vec<Move>, map: MoveMap, domain: Option<OpenInterval>, a: &IntervalUnion) {
    let Some(d) = domain else { return };
    let pre = IntervalUnion::from_intervals(a.iter().map(|p| map.inverse().image(p)));
    for part in a.intersect(&pre).intersect_interval(&d).iter() {
        out.push(map.restricted(Some(part.clone())));
    }
}

/// The move of a one-dimensional additive face.
fn edge_move(face: &Face, a: &IntervalUnion, out: &mut Vec<Move>) {
    let (p1, p2, p3) = (face.p1(), face.p2(), face.p3());
    if face.j.is_point() {
        let t = &face.j.lo - &period_shift(&p3.lo);
        push_move(out, MoveMap::translation(t), p1.interior(), a);
    } else if face.i.is_point() {
        let t = &face.i.lo - &period_shift(&p3.lo);
        push_move(out, MoveMap::translation(t), p2.interior(), a);
    } else if face.k.is_point() {
        push_move(out, MoveMap::reflection(face.k.lo.clone()), p1.interior(), a);
    }
}

/// Directly covered intervals `p1 ∪ p2 ∪ p3` (mod 1) of a two-dimensional face.
fn face_component(face: &Face, a: &IntervalUnion) -> IntervalUnion {
    let p3 = face.p3();
    let shift = period_shift(&p3.lo);
    let parts = [face.p1().interior(), face.p2().interior(), p3.interior().map(|p| p.translate(&-shift))];
    IntervalUnion::from_intervals(parts.into_iter().flatten()).intersect(a)
}

/// Additive and limit-additive moves, their inverses, and the components
/// from two-dimensional additive faces, in reduced form.
pub fn initial_ensemble(pi: &PwlFunction) -> Result<FinitePresentation> {
    let report = check_minimality(pi);
    if let Some(v) = report.violation {
        return Err(Error::NotMinimal(v.to_string()));
    }
    let add = Additivity::of(pi)?;
    let a = pi.continuity_set();
    let mut moves = Vec::new();
    for face in add.additive_of_dim(1) {
        edge_move(face, &a, &mut moves);
    }
    let inverses: Vec<Move> = moves.iter().map(Move::inverse).collect();
    moves.extend(inverses);
    let components: Vec<IntervalUnion> = add.additive_of_dim(2).into_iter().map(|f| face_component(f, &a)).collect();
    Ok(FinitePresentation::new(moves, components, a).merge_components().reduce())
}

fn grid_denominator(p: &FinitePresentation) -> BigInt {
    let mut vals: Vec<Rat> = Vec::new();
    for m in p.moves() {
        vals.push(m.param().clone());
        let d = m.domain().unwrap();
        vals.push(d.lo().clone());
        vals.push(d.hi().clone());
    }
    for c in p.components() {
        vals.extend(c.boundary());
    }
    vals.extend(p.continuity().boundary());
    common_denominator(vals.iter())
}

fn count_off_grid(p: &FinitePresentation, q: &BigInt) -> usize {
    let on = |x: &Rat| (x.numer() * q) % x.denom() == BigInt::from(0);
    let mut n = 0;
    for m in p.moves() {
        let d = m.domain().unwrap();
        n += [m.param(), d.lo(), d.hi()].into_iter().filter(|x| !on(x)).count();
    }
    for c in p.components() {
        n += c.boundary().iter().filter(|x| !on(x)).count();
    }
    n
}

/// Default round budget `10 q^2` for a presentation on the `(1/q) Z` grid.
pub fn default_budget(p: &FinitePresentation) -> usize {
    let q = grid_denominator(p).to_usize().unwrap_or(usize::MAX / 100).max(1);
    10usize.saturating_mul(q).saturating_mul(q)
}

/// Completion: inverse closure, component growth and merging, continuity
/// extension and reduction, then pairwise compositions; repeated until the
/// reduced presentation is stable.
pub fn moves_closure(p: &FinitePresentation, budget: usize) -> ClosureResult {
    let q = grid_denominator(p);
    let mut cur = p.reduce();
    let mut steps = Vec::new();
    let mut off_grid = 0;
    for round in 1..=budget {
        let prev = cur.clone();
        let mut moves: Vec<Move> = cur.moves().to_vec();
        moves.extend(cur.moves().iter().map(Move::inverse));
        let with_inverses = FinitePresentation::new(moves, cur.components().to_vec(), cur.continuity().clone());
        let grown = with_inverses.merge_components().reduce();
        let comp_changed = grown.components() != cur.components();

        let mut added = Vec::new();
        for a in grown.moves() {
            for b in grown.moves() {
                let c = a.compose(b);
                if !c.is_empty() && !grown.joined_membership(&c) && !added.contains(&c) {
                    added.push(c);
                }
            }
        }
        let n_added = added.len();
        let mut moves = grown.moves().to_vec();
        moves.extend(added);
        cur = FinitePresentation::new(moves, grown.components().to_vec(), grown.continuity().clone())
            .merge_components()
            .reduce();
        off_grid += count_off_grid(&cur, &q);
        let line = format!(
            "round {round}: {} moves, {} components{}, {n_added} compositions added",
            cur.moves().len(),
            cur.components().len(),
            if comp_changed { " (grown)" } else { "" }
        );
        debug!("{line}");
        steps.push(line);
        if cur.canonical_eq(&prev) {
            info!("closure stable after {round} rounds");
            return ClosureResult { presentation: cur, steps, rounds: round, budget_exhausted: false, off_grid };
        }
    }
    info!("closure budget of {budget} rounds exhausted");
    ClosureResult { presentation: cur, steps, rounds: budget, budget_exhausted: true, off_grid }
}

/// Initial ensemble followed by the completion loop; `budget` defaults to
/// `10 q^2` rounds.
pub fn closure_of(pi: &PwlFunction, budget: Option<usize>) -> Result<ClosureResult> {
    let init = initial_ensemble(pi)?;
    let budget = budget.unwrap_or_else(|| default_budget(&init));
    Ok(moves_closure(&init, budget))
}

/// Checks that `theta(gamma(x)) - chi(gamma) theta(x)` is constant on each
/// move (at `samples` interior points and both one-sided endpoint limits)
/// and that `theta` is affine with a common slope on each component.
/// Returns the first violation found.
pub fn respect_violation(theta: &PwlFunction, p: &FinitePresentation, samples: usize) -> Option<String> {
    for m in p.moves() {
        let d = m.domain().unwrap();
        let chi = Rat::int(m.chi().sign() as i64);
        let image_side = |s: Side| if m.chi().sign() > 0 { s } else { s.flip() };
        let mut vals = Vec::new();
        for x in d.samples(samples) {
            vals.push((x.clone(), theta.eval(&m.map().apply(&x)) - &chi * &theta.eval(&x)));
        }
        let lo = d.lo();
        let hi = d.hi();
        vals.push((
            lo.clone(),
            theta.limit(&m.map().apply(lo), image_side(Side::Right)) - &chi * &theta.limit(lo, Side::Right),
        ));
        vals.push((
            hi.clone(),
            theta.limit(&m.map().apply(hi), image_side(Side::Left)) - &chi * &theta.limit(hi, Side::Left),
        ));
        if let Some((x, c)) = vals.iter().find(|(_, c)| c != &vals[0].1) {
            return Some(format!("{m}: constant {} at {} but {c} at {x}", vals[0].1, vals[0].0));
        }
    }
    for comp in p.components() {
        let mut slope: Option<Rat> = None;
        for part in comp.iter() {
            let mut pts: Vec<(Rat, Rat)> = part.samples(samples.max(2)).into_iter().map(|x| {
                let v = theta.eval(&x);
                (x, v)
            }).collect();
            pts.insert(0, (part.lo().clone(), theta.limit(part.lo(), Side::Right)));
            pts.push((part.hi().clone(), theta.limit(part.hi(), Side::Left)));
            for w in pts.windows(2) {
                let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                match &slope {
                    None => slope = Some(s),
                    Some(s0) if s0 != &s => {
                        return Some(format!("component {comp}: slope {s0} and {s} on {part}"));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    None
}

pub fn respects_check(theta: &PwlFunction, p: &FinitePresentation, samples: usize) -> bool {
    respect_violation(theta, p, samples).is_none()
}
