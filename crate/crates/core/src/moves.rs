//! Restricted translations and reflections and their inverse semigroup.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{interval_intersect, OpenInterval, Rat};

/// Translation `x -> x + t` or reflection `x -> r - x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Character {
    Translation,
    Reflection,
}

impl Character {
    pub fn sign(self) -> i32 {
        match self {
            Character::Translation => 1,
            Character::Reflection => -1,
        }
    }

    pub fn from_sign(s: i32) -> Option<Character> {
        match s {
            1 => Some(Character::Translation),
            -1 => Some(Character::Reflection),
            _ => None,
        }
    }

    pub fn times(self, other: Character) -> Character {
        if self == other {
            Character::Translation
        } else {
            Character::Reflection
        }
    }
}

/// The unrestricted map of a move, identified by character and parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveMap {
    pub chi: Character,
    pub param: Rat,
}

impl MoveMap {
    pub fn translation(t: Rat) -> MoveMap {
        MoveMap { chi: Character::Translation, param: t }
    }

    pub fn reflection(r: Rat) -> MoveMap {
        MoveMap { chi: Character::Reflection, param: r }
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        match self.chi {
            Character::Translation => x + &self.param,
            Character::Reflection => &self.param - x,
        }
    }

    pub fn image(&self, d: &OpenInterval) -> OpenInterval {
        match self.chi {
            Character::Translation => d.translate(&self.param),
            Character::Reflection => d.reflect(&self.param),
        }
    }

    pub fn inverse(&self) -> MoveMap {
        match self.chi {
            Character::Translation => MoveMap::translation(-self.param.clone()),
            Character::Reflection => self.clone(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MoveMap) -> MoveMap {
        use Character::*;
        match (self.chi, inner.chi) {
            (Translation, Translation) => MoveMap::translation(&self.param + &inner.param),
            (Translation, Reflection) => MoveMap::reflection(&self.param + &inner.param),
            (Reflection, Translation) => MoveMap::reflection(&self.param - &inner.param),
            (Reflection, Reflection) => MoveMap::translation(&self.param - &inner.param),
        }
    }

    pub fn restricted(&self, d: Option<OpenInterval>) -> Move {
        Move::new(self.chi, self.param.clone(), d)
    }
}

impl fmt::Display for MoveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.chi {
            Character::Translation => write!(f, "tau_{}", self.param),
            Character::Reflection => write!(f, "rho_{}", self.param),
        }
    }
}

/// A move `gamma|_D`. Empty moves carry the canonical parameter 0
/// (translation) or 1 (reflection).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    map: MoveMap,
    domain: Option<OpenInterval>,
}

impl Move {
    pub fn new(chi: Character, param: Rat, domain: Option<OpenInterval>) -> Move {
        let param = match (&domain, chi) {
            (Some(_), _) => param,
            (None, Character::Translation) => Rat::zero(),
            (None, Character::Reflection) => Rat::one(),
        };
        Move { map: MoveMap { chi, param }, domain }
    }

    pub fn translation(t: Rat, domain: Option<OpenInterval>) -> Move {
        Move::new(Character::Translation, t, domain)
    }

    pub fn reflection(r: Rat, domain: Option<OpenInterval>) -> Move {
        Move::new(Character::Reflection, r, domain)
    }

    pub fn empty(chi: Character) -> Move {
        Move::new(chi, Rat::zero(), None)
    }

    pub fn map(&self) -> &MoveMap {
        &self.map
    }

    pub fn chi(&self) -> Character {
        self.map.chi
    }

    pub fn param(&self) -> &Rat {
        &self.map.param
    }

    pub fn domain(&self) -> Option<&OpenInterval> {
        self.domain.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_none()
    }

    pub fn image(&self) -> Option<OpenInterval> {
        self.domain.as_ref().map(|d| self.map.image(d))
    }

    pub fn apply(&self, x: &Rat) -> Option<Rat> {
        self.domain.as_ref().filter(|d| d.contains(x)).map(|_| self.map.apply(x))
    }

    /// `self ∘ inner` with domain `D_inner ∩ inner^{-1}(D_self)`.
    pub fn compose(&self, inner: &Move) -> Move {
        let map = self.map.after(&inner.map);
        let domain = match (&self.domain, &inner.domain) {
            (Some(outer), Some(d)) => {
                let pre = inner.map.inverse().image(outer);
                d.intersect(&pre)
            }
            _ => None,
        };
        Move::new(map.chi, map.param, domain)
    }

    pub fn inverse(&self) -> Move {
        let inv = self.map.inverse();
        Move::new(inv.chi, inv.param, self.image())
    }

    /// Shrinks the domain to `d`, which must lie inside the current domain.
    pub fn restrict(&self, d: Option<&OpenInterval>) -> Result<Move> {
        match d {
            None => Ok(Move::empty(self.chi())),
            Some(d) if self.domain.as_ref().is_some_and(|own| d.is_subset_of(own)) => {
                Ok(Move::new(self.chi(), self.param().clone(), Some(d.clone())))
            }
            Some(d) => Err(Error::Precondition(format!("{d} is not inside the domain of {self}"))),
        }
    }

    /// Shrinks the image to `i`, which must lie inside the current image.
    pub fn corestrict(&self, i: Option<&OpenInterval>) -> Result<Move> {
        match (i, self.image()) {
            (None, _) => Ok(Move::empty(self.chi())),
            (Some(i), Some(img)) if i.is_subset_of(&img) => {
                let d = self.map.inverse().image(i);
                Ok(Move::new(self.chi(), self.param().clone(), Some(d)))
            }
            (Some(i), _) => Err(Error::Precondition(format!("{i} is not inside the image of {self}"))),
        }
    }

    /// Restriction to `D ∩ d` without a containment precondition.
    pub fn clip(&self, d: &OpenInterval) -> Move {
        Move::new(self.chi(), self.param().clone(), interval_intersect(self.domain(), Some(d)))
    }

    /// Partial order of restriction.
    pub fn is_restriction_of(&self, other: &Move) -> bool {
        if self.chi() != other.chi() {
            return false;
        }
        match (&self.domain, &other.domain) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => self.param() == other.param() && a.is_subset_of(b),
        }
    }

    /// Endpoints `(lo, gamma(lo))` and `(hi, gamma(hi))` of the graph segment.
    pub fn graph_segment(&self) -> Option<((Rat, Rat), (Rat, Rat))> {
        self.domain.as_ref().map(|d| {
            (
                (d.lo().clone(), self.map.apply(d.lo())),
                (d.hi().clone(), self.map.apply(d.hi())),
            )
        })
    }

    pub fn to_json(&self) -> MoveJson {
        MoveJson { chi: self.chi().sign(), param: self.param().clone(), dom: self.domain.clone() }
    }

    pub fn from_json(j: &MoveJson) -> Result<Move> {
        let chi = Character::from_sign(j.chi).ok_or_else(|| Error::Parse(format!("chi must be 1 or -1, got {}", j.chi)))?;
        Ok(Move::new(chi, j.param.clone(), j.dom.clone()))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.domain {
            Some(d) => write!(f, "{}|{}", self.map, d),
            None => match self.chi() {
                Character::Translation => write!(f, "tau|empty"),
                Character::Reflection => write!(f, "rho|empty"),
            },
        }
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveJson {
    pub chi: i32,
    pub param: Rat,
    pub dom: Option<OpenInterval>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::r;
    use proptest::prelude::*;

    fn iv(a: Rat, b: Rat) -> Option<OpenInterval> {
        OpenInterval::new(a, b)
    }

    fn tau(t: Rat, a: Rat, b: Rat) -> Move {
        Move::translation(t, iv(a, b))
    }

    fn rho(t: Rat, a: Rat, b: Rat) -> Move {
        Move::reflection(t, iv(a, b))
    }

    #[test]
    fn apply_examples() {
        let m = rho(r(1, 2), r(0, 1), r(1, 2));
        assert_eq!(m.apply(&r(1, 8)), Some(r(3, 8)));
        assert_eq!(m.apply(&r(1, 2)), None);
        assert_eq!(tau(r(0, 1), r(0, 1), r(1, 2)).apply(&r(1, 4)), Some(r(1, 4)));
    }

    #[test]
    fn compose_examples() {
        let m = rho(r(1, 2), r(0, 1), r(1, 2));
        assert_eq!(m.compose(&m), tau(r(0, 1), r(0, 1), r(1, 2)));
        let t = tau(r(1, 4), r(0, 1), r(1, 2));
        assert_eq!(t.compose(&t), tau(r(1, 2), r(0, 1), r(1, 4)));
        let a = tau(r(1, 4), r(0, 1), r(1, 8));
        let b = tau(r(1, 4), r(1, 2), r(5, 8));
        assert_eq!(a.compose(&b), Move::empty(Character::Translation));
        let e = rho(r(1, 3), r(0, 1), r(1, 8)).compose(&tau(r(1, 2), r(0, 1), r(1, 8)));
        assert_eq!(e, Move::empty(Character::Reflection));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(tau(r(1, 4), r(0, 1), r(1, 2)).inverse(), tau(r(-1, 4), r(1, 4), r(3, 4)));
        assert_eq!(rho(r(1, 2), r(1, 8), r(1, 4)).inverse(), rho(r(1, 2), r(1, 4), r(3, 8)));
        let e = Move::empty(Character::Reflection);
        assert_eq!(e.inverse(), e);
    }

    #[test]
    fn restriction_examples() {
        let m = rho(r(1, 2), r(0, 1), r(1, 2));
        assert_eq!(m.restrict(iv(r(0, 1), r(1, 4)).as_ref()).unwrap(), rho(r(1, 2), r(0, 1), r(1, 4)));
        assert_eq!(m.restrict(None).unwrap(), Move::empty(Character::Reflection));
        assert!(m.restrict(iv(r(0, 1), r(3, 4)).as_ref()).is_err());
        let t = tau(r(1, 4), r(0, 1), r(1, 2));
        assert_eq!(t.corestrict(iv(r(1, 2), r(3, 4)).as_ref()).unwrap(), tau(r(1, 4), r(1, 4), r(1, 2)));
        assert!(t.corestrict(iv(r(0, 1), r(3, 4)).as_ref()).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(rho(r(1, 2), r(0, 1), r(1, 4)).is_restriction_of(&rho(r(1, 2), r(0, 1), r(1, 2))));
        assert!(!tau(r(0, 1), r(0, 1), r(1, 4)).is_restriction_of(&rho(r(1, 2), r(0, 1), r(1, 2))));
        assert!(Move::empty(Character::Translation).is_restriction_of(&tau(r(1, 3), r(0, 1), r(1, 2))));
        assert!(!Move::empty(Character::Translation).is_restriction_of(&rho(r(1, 3), r(0, 1), r(1, 2))));
        assert_ne!(Move::empty(Character::Translation), Move::empty(Character::Reflection));
    }

    #[test]
    fn json_round_trip() {
        for m in [rho(r(1, 2), r(0, 1), r(1, 2)), Move::empty(Character::Translation)] {
            let s = serde_json::to_string(&m.to_json()).unwrap();
            let back = Move::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, m);
        }
        let s = serde_json::to_string(&rho(r(1, 2), r(0, 1), r(1, 2)).to_json()).unwrap();
        assert_eq!(s, r#"{"chi":-1,"param":"1/2","dom":["0","1/2"]}"#);
    }

    fn arb_move() -> impl Strategy<Value = Move> {
        (any::<bool>(), -12i64..=24, 0i64..12, 1i64..=12, 0u8..8).prop_map(|(refl, p, a, len, empty)| {
            let d = if empty == 0 { None } else { iv(r(a, 12), r(a + len, 12)) };
            if refl {
                Move::reflection(r(p.rem_euclid(24), 12), d)
            } else {
                Move::translation(r(p.clamp(-11, 11), 12), d)
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn pseudo_inverse_laws(w in arb_move()) {
            let wi = w.inverse();
            prop_assert_eq!(w.compose(&wi).compose(&w), w.clone());
            prop_assert_eq!(wi.compose(&w).compose(&wi), wi.clone());
            let id_img = Move::translation(Rat::zero(), w.image());
            let id_dom = Move::translation(Rat::zero(), w.domain().cloned());
            prop_assert_eq!(w.compose(&wi), id_img);
            prop_assert_eq!(wi.compose(&w), id_dom);
        }

        #[test]
        fn associativity_and_character(a in arb_move(), b in arb_move(), c in arb_move()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert_eq!(a.compose(&b).chi(), a.chi().times(b.chi()));
        }

        #[test]
        fn restriction_monotone(a in arb_move(), b in arb_move(), s in 0i64..12, t in 0i64..12) {
            let window = iv(r(s.min(t), 12), r(s.max(t) + 1, 12)).unwrap();
            let (a2, b2) = (a.clip(&window), b.clip(&window));
            prop_assert!(a2.is_restriction_of(&a));
            prop_assert!(b2.compose(&a2).is_restriction_of(&b.compose(&a)));
        }

        #[test]
        fn graph_slopes(w in arb_move()) {
            if let Some(((x0, y0), (x1, y1))) = w.graph_segment() {
                let slope = (y1 - y0) / (x1 - x0);
                prop_assert_eq!(slope, Rat::int(w.chi().sign() as i64));
            }
        }
    }
}
