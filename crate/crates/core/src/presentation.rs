//! Finite presentations of joined move ensembles by maximal moves and
//! connected covered components.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{IntervalUnion, OpenInterval};
use crate::moves::{Move, MoveJson, MoveMap};

/// Presentation `(moves, components)` relative to the continuity set `A`.
///
/// The presented ensemble contains, for every map `gamma`, the restrictions
/// of `gamma` to the parts of
/// `explicit domains ∪ ⋃_i (C_i ∩ gamma^{-1}(C_i))`, joined across points
/// `m` with `m` and `gamma(m)` in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePresentation {
    moves: Vec<Move>,
    components: Vec<IntervalUnion>,
    continuity: IntervalUnion,
}

impl FinitePresentation {
    /// Builds a presentation without normalizing or reducing it.
    pub fn new(moves: Vec<Move>, components: Vec<IntervalUnion>, continuity: IntervalUnion) -> FinitePresentation {
        let mut moves: Vec<Move> = moves.into_iter().filter(|m| !m.is_empty()).collect();
        moves.sort();
        moves.dedup();
        let components = components.into_iter().filter(|c| !c.is_empty()).collect();
        FinitePresentation { moves, components, continuity }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn components(&self) -> &[IntervalUnion] {
        &self.components
    }

    pub fn continuity(&self) -> &IntervalUnion {
        &self.continuity
    }

    /// Union of all components.
    pub fn covered(&self) -> IntervalUnion {
        self.components.iter().fold(IntervalUnion::empty(), |acc, c| acc.union(c))
    }

    fn explicit_by_map(&self) -> BTreeMap<MoveMap, Vec<OpenInterval>> {
        let mut out: BTreeMap<MoveMap, Vec<OpenInterval>> = BTreeMap::new();
        for m in &self.moves {
            out.entry(m.map().clone()).or_default().push(m.domain().unwrap().clone());
        }
        out
    }

    /// `⋃_i (C_i ∩ gamma^{-1}(C_i))`.
    pub fn component_domain(&self, map: &MoveMap) -> IntervalUnion {
        let inv = map.inverse();
        let mut parts = Vec::new();
        for c in &self.components {
            let pre = IntervalUnion::from_intervals(c.iter().map(|p| inv.image(p)));
            parts.extend(c.intersect(&pre).into_parts());
        }
        IntervalUnion::from_intervals(parts)
    }

    fn join_by_continuity(&self, map: &MoveMap, u: &IntervalUnion) -> IntervalUnion {
        u.join_touching(|m| self.continuity.contains(m) && self.continuity.contains(&map.apply(m)))
    }

    /// Maximal domains of `map` in the presented ensemble.
    pub fn admissible(&self, map: &MoveMap) -> IntervalUnion {
        let explicit: Vec<OpenInterval> = self.moves.iter().filter(|m| m.map() == map).map(|m| m.domain().unwrap().clone()).collect();
        self.admissible_with(map, explicit)
    }

    fn admissible_with(&self, map: &MoveMap, explicit: Vec<OpenInterval>) -> IntervalUnion {
        let u = IntervalUnion::from_intervals(explicit).union(&self.component_domain(map));
        self.join_by_continuity(map, &u)
    }

    /// Whether `m` belongs to the presented ensemble.
    pub fn joined_membership(&self, m: &Move) -> bool {
        match m.domain() {
            None => true,
            Some(d) => self.admissible(m.map()).contains_interval(d),
        }
    }

    /// Whether the graph of `m` lies in `⋃ C_i × C_i`.
    pub fn inside_components(&self, m: &Move) -> bool {
        match m.domain() {
            None => true,
            Some(d) => self.component_domain(m.map()).contains_interval(d),
        }
    }

    /// Joins parts of a component touching at points of `A` and merges
    /// components with overlapping interiors; sorts the component list.
    pub fn normalize_components(&mut self) {
        let joined: Vec<IntervalUnion> = self
            .components
            .iter()
            .map(|c| c.join_touching(|m| self.continuity.contains(m)))
            .filter(|c| !c.is_empty())
            .collect();
        let mut merged: Vec<IntervalUnion> = Vec::new();
        for c in joined {
            let mut cur = c;
            loop {
                let hit = merged.iter().position(|d| !d.intersect(&cur).is_empty());
                match hit {
                    Some(k) => {
                        let d = merged.swap_remove(k);
                        cur = d.union(&cur).join_touching(|m| self.continuity.contains(m));
                    }
                    None => break,
                }
            }
            merged.push(cur);
        }
        merged.sort();
        self.components = merged;
    }

    /// Replaces the moves by the maximal moves of the presented ensemble
    /// whose graphs are not inside the component squares.
    pub fn reduce(&self) -> FinitePresentation {
        let mut p = self.clone();
        p.normalize_components();
        let mut moves = Vec::new();
        for (map, explicit) in p.explicit_by_map() {
            let adm = p.admissible_with(&map, explicit);
            let inside = p.component_domain(&map);
            for part in adm.iter() {
                if !inside.contains_interval(part) {
                    moves.push(map.restricted(Some(part.clone())));
                }
            }
        }
        FinitePresentation::new(moves, p.components, p.continuity)
    }

    /// Grows component `component` by the image of move `index`, whose
    /// domain must lie inside it.
    pub fn extend_component_by_move(&self, index: usize, component: usize) -> Result<FinitePresentation> {
        let m = self.moves.get(index).ok_or_else(|| Error::Precondition(format!("no move {index}")))?;
        let c = self.components.get(component).ok_or_else(|| Error::Precondition(format!("no component {component}")))?;
        let d = m.domain().unwrap();
        if !c.contains_interval(d) {
            return Err(Error::Precondition(format!("{m} does not lie in component {c}")));
        }
        let mut p = self.clone();
        p.components[component] = c.union(&IntervalUnion::from_interval(m.image().unwrap()));
        p.normalize_components();
        Ok(p)
    }

    /// Saturates components under the moves: every part `P` of `D ∩ C_i`
    /// adds `gamma(P)` to `C_i`; overlapping components are merged.
    pub fn merge_components(&self) -> FinitePresentation {
        let mut p = self.clone();
        p.normalize_components();
        loop {
            let mut changed = false;
            for ci in 0..p.components.len() {
                let mut grown = p.components[ci].clone();
                for m in &p.moves {
                    let d = m.domain().unwrap();
                    for part in p.components[ci].intersect_interval(d).iter() {
                        let img = m.map().image(part);
                        if !grown.contains_interval(&img) {
                            grown = grown.union(&IntervalUnion::from_interval(img));
                        }
                    }
                }
                if grown != p.components[ci] {
                    p.components[ci] = grown;
                    changed = true;
                }
            }
            p.normalize_components();
            if !changed {
                return p;
            }
        }
    }

    /// Joins same-map moves that touch at a point `m` with `m` and
    /// `gamma(m)` in `A`.
    pub fn extend_moves_by_continuity(&self) -> FinitePresentation {
        let mut moves = Vec::new();
        for (map, explicit) in self.explicit_by_map() {
            let u = self.join_by_continuity(&map, &IntervalUnion::from_intervals(explicit));
            moves.extend(u.iter().map(|d| map.restricted(Some(d.clone()))));
        }
        FinitePresentation::new(moves, self.components.clone(), self.continuity.clone())
    }

    /// Maximal explicit moves restricted to domains inside the parts of `r`.
    pub fn restrict_to(&self, r: &IntervalUnion) -> Vec<Move> {
        let mut out = Vec::new();
        for m in &self.moves {
            for part in r.intersect_interval(m.domain().unwrap()).iter() {
                out.push(m.map().restricted(Some(part.clone())));
            }
        }
        out.sort();
        out
    }

    /// Maximal explicit moves with both domain and image inside `r`.
    pub fn restrict_to_both(&self, r: &IntervalUnion) -> Vec<Move> {
        let mut out = Vec::new();
        for m in &self.moves {
            let inv = m.map().inverse();
            let pre = IntervalUnion::from_intervals(r.iter().map(|p| inv.image(p)));
            for part in r.intersect(&pre).intersect_interval(m.domain().unwrap()).iter() {
                out.push(m.map().restricted(Some(part.clone())));
            }
        }
        out.sort();
        out
    }

    /// Equality of reduced presentations, insensitive to listing order.
    pub fn canonical_eq(&self, other: &FinitePresentation) -> bool {
        let mut a = self.components.clone();
        let mut b = other.components.clone();
        a.sort();
        b.sort();
        self.moves == other.moves && a == b
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            moves: self.moves.iter().map(Move::to_json).collect(),
            components: self.components.clone(),
            continuity: self.continuity.clone(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<FinitePresentation> {
        let moves = j.moves.iter().map(Move::from_json).collect::<Result<Vec<_>>>()?;
        Ok(FinitePresentation::new(moves, j.components.clone(), j.continuity.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub moves: Vec<MoveJson>,
    pub components: Vec<IntervalUnion>,
    pub continuity: IntervalUnion,
}
