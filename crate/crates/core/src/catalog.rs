//! Named example functions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::{r, Rat};
use crate::pwl::{Node, PwlFunction};

fn check_unit(name: &str, v: &Rat) -> Result<()> {
    if v.is_positive() && v < &Rat::one() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name: name.into(), value: Box::new(v.clone()), range: "(0, 1)".into() })
    }
}

/// Gomory mixed-integer cut: `x/f` on `[0, f]`, `(1-x)/(1-f)` on `[f, 1]`.
pub fn gmic(f: Rat) -> Result<PwlFunction> {
    check_unit("f", &f)?;
    PwlFunction::continuous(f.clone(), vec![(Rat::zero(), Rat::zero()), (f, Rat::one()), (Rat::one(), Rat::zero())])
}

/// Continuous two-slope function with positive slope `s >= 1/f` and
/// negative slope `-1/(1-f)`: up on `[0, a]`, down on `[a, f-a]`, up on
/// `[f-a, f]`, down on `[f, 1]`, where `a = 1 / (2 (s (1-f) + 1))`.
/// `s = 1/f` gives the GMIC.
pub fn two_slope(f: Rat, s: Rat) -> Result<PwlFunction> {
    check_unit("f", &f)?;
    let min_s = f.recip();
    if s < min_s {
        return Err(Error::ParameterOutOfRange { name: "s".into(), value: Box::new(s), range: format!("[{min_s}, oo)") });
    }
    if s == min_s {
        return gmic(f);
    }
    let one = Rat::one();
    let a = one.clone() / (Rat::int(2) * (&s * &(&one - &f) + &one));
    let up = &s * &a;
    PwlFunction::continuous(
        f.clone(),
        vec![
            (Rat::zero(), Rat::zero()),
            (a.clone(), up.clone()),
            (&f - &a, &one - &up),
            (f, one.clone()),
            (one, Rat::zero()),
        ],
    )
}

/// One-sided discontinuous minimal function with `f = 1/2`: 0 at 0, 1/2 on
/// `(0, 1/2)`, `2(1-x)` on `[1/2, 1)`.
pub fn equiv7_example_1() -> PwlFunction {
    PwlFunction::new(
        r(1, 2),
        vec![
            Node::new(r(0, 1), r(0, 1), r(0, 1), r(1, 2)),
            Node::new(r(1, 2), r(1, 2), r(1, 1), r(1, 1)),
            Node::new(r(1, 1), r(0, 1), r(0, 1), r(1, 2)),
        ],
    )
    .expect("valid catalog function")
}

/// Two-sided discontinuous minimal function with `f = 1/2`: 0 at 0, 1 at
/// 1/2, 1/2 elsewhere.
pub fn minimal_no_covered_interval() -> PwlFunction {
    PwlFunction::new(
        r(1, 2),
        vec![
            Node::new(r(0, 1), r(1, 2), r(0, 1), r(1, 2)),
            Node::new(r(1, 2), r(1, 2), r(1, 1), r(1, 2)),
            Node::new(r(1, 1), r(1, 2), r(0, 1), r(1, 2)),
        ],
    )
    .expect("valid catalog function")
}

/// Catalog entry selected by name plus parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Gmic { f: Rat },
    TwoSlope { f: Rat, s: Rat },
    Equiv7Example1,
    MinimalNoCoveredInterval,
}

impl Builtin {
    pub const NAMES: [&'static str; 4] = ["gmic", "two_slope", "equiv7_example_1", "minimal_no_covered_interval"];

    /// `f` defaults to 4/5 for `gmic` and `two_slope`; `s` defaults to `2/f`.
    pub fn from_name(name: &str, f: Option<Rat>, s: Option<Rat>) -> Result<Builtin> {
        match name {
            "gmic" => Ok(Builtin::Gmic { f: f.unwrap_or_else(|| r(4, 5)) }),
            "two_slope" => {
                let f = f.unwrap_or_else(|| r(4, 5));
                let s = s.unwrap_or_else(|| Rat::int(2) / &f);
                Ok(Builtin::TwoSlope { f, s })
            }
            "equiv7_example_1" => Ok(Builtin::Equiv7Example1),
            "minimal_no_covered_interval" => Ok(Builtin::MinimalNoCoveredInterval),
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn build(&self) -> Result<PwlFunction> {
        match self {
            Builtin::Gmic { f } => gmic(f.clone()),
            Builtin::TwoSlope { f, s } => two_slope(f.clone(), s.clone()),
            Builtin::Equiv7Example1 => Ok(equiv7_example_1()),
            Builtin::MinimalNoCoveredInterval => Ok(minimal_no_covered_interval()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Gmic { f } => write!(fmt, "gmic(f={f})"),
            Builtin::TwoSlope { f, s } => write!(fmt, "two_slope(f={f}, s={s})"),
            Builtin::Equiv7Example1 => write!(fmt, "equiv7_example_1"),
            Builtin::MinimalNoCoveredInterval => write!(fmt, "minimal_no_covered_interval"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts a bare name; parameters take their defaults.
    fn from_str(s: &str) -> Result<Builtin> {
        Builtin::from_name(s, None, None)
    }
}

/// Catalog lookup by name and positional parameters `[f, s]`.
pub fn catalog(name: &str, params: &[Rat]) -> Result<PwlFunction> {
    Builtin::from_name(name, params.first().cloned(), params.get(1).cloned())?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        assert_eq!(equiv7_example_1().limits(&r(0, 1)), (r(0, 1), r(0, 1), r(1, 2)));
        assert_eq!(minimal_no_covered_interval().eval(&r(1, 2)), r(1, 1));
        assert_eq!(gmic(r(1, 2)).unwrap().eval(&r(1, 4)), r(1, 2));
        assert_eq!(catalog("gmic", &[r(4, 5)]).unwrap().eval(&r(9, 10)), r(1, 2));
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("nope", &[]), Err(Error::UnknownFunction(_))));
        assert!(matches!(gmic(r(1, 1)), Err(Error::ParameterOutOfRange { .. })));
        assert!(matches!(gmic(r(-1, 3)), Err(Error::ParameterOutOfRange { .. })));
        assert!(two_slope(r(1, 2), r(1, 1)).is_err());
    }

    #[test]
    fn two_slope_shape() {
        let pi = two_slope(r(1, 2), r(4, 1)).unwrap();
        // a = 1/(2(4/2+1)) = 1/6
        assert_eq!(pi.breakpoints(), vec![r(0, 1), r(1, 6), r(1, 3), r(1, 2), r(1, 1)]);
        assert_eq!(pi.eval(&r(1, 6)), r(2, 3));
        assert_eq!(pi.eval(&r(1, 2)), r(1, 1));
        assert_eq!(pi.cell_slope(1), r(-2, 1));
        assert!(two_slope(r(1, 2), r(2, 1)).unwrap().same_function(&gmic(r(1, 2)).unwrap()));
    }
}
