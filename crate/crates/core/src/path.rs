//! One-parameter paths through coupling space and their secular polynomials.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charpoly::charpoly_tridiag;
use crate::error::{Error, Result};
use crate::matrix::TriMatrix;
use crate::model::{boundary_well, check_fits, CouplingVector, ModelSpec};
use crate::poly::{BiPoly, UniPoly};
use crate::rational::{self, parse_rational, Rational};

/// One coupling slot: `λ = slope * t + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub slope: Rational,
    pub offset: Rational,
}

impl Slot {
    pub fn constant(c: Rational) -> Self {
        Slot { slope: Rational::zero(), offset: c }
    }

    pub fn linear(slope: Rational) -> Self {
        Slot { slope, offset: Rational::zero() }
    }

    pub fn depends_on_t(&self) -> bool {
        !self.slope.is_zero()
    }

    pub fn at(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.offset
    }

    pub fn at_f64(&self, t: f64) -> f64 {
        rational::to_f64(&self.slope) * t + rational::to_f64(&self.offset)
    }

    pub fn as_poly(&self) -> UniPoly {
        UniPoly::new(vec![self.offset.clone(), self.slope.clone()])
    }
}

impl FromStr for Slot {
    type Err = Error;

    /// Accepts `t`, `-t`, `3/2*t`, `0.5t`, `-9/10`, `0.9`.
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(head) = s.strip_suffix('t') else {
            return parse_rational(&s).map(Slot::constant);
        };
        let head = head.strip_suffix('*').unwrap_or(head);
        let slope = match head {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            _ => parse_rational(head)
                .map_err(|_| Error::Parse(format!("path slot {text:?} is not of the form c, t or c*t")))?,
        };
        Ok(Slot::linear(slope))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.depends_on_t() {
            return write!(f, "{}", self.offset);
        }
        let one = Rational::one();
        match &self.slope {
            s if *s == one => write!(f, "t")?,
            s if *s == -one.clone() => write!(f, "-t")?,
            s => write!(f, "{s}*t")?,
        }
        if !self.offset.is_zero() {
            let sign = if self.offset.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}", self.offset.abs())?;
        }
        Ok(())
    }
}

/// A boundary-well family restricted to a line `λ_j = slope_j t + offset_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub n: usize,
    pub slots: Vec<Slot>,
    pub shift: Rational,
}

impl PathSpec {
    pub fn new(n: usize, slots: Vec<Slot>, shift: Rational) -> Result<Self> {
        check_fits(slots.len(), n)?;
        if !slots.is_empty() && !slots.iter().any(Slot::depends_on_t) {
            return Err(Error::Constraint("path has no slot depending on t".into()));
        }
        Ok(PathSpec { n, slots, shift })
    }

    /// Parses the compact slot list, e.g. `"t,-t,t,-9/10"`. An empty string
    /// is the uncoupled (k = 0) path.
    pub fn parse(n: usize, slots: &str, shift: Rational) -> Result<Self> {
        let slots = if slots.trim().is_empty() {
            Vec::new()
        } else {
            slots.split(',').map(str::parse).collect::<Result<Vec<Slot>>>()?
        };
        Self::new(n, slots, shift)
    }

    /// Path on a boundary-well spec; dimension and shift come from the spec.
    pub fn for_model(spec: &ModelSpec, slots: &str) -> Result<Self> {
        match spec {
            ModelSpec::BoundaryWell { n, shift, .. } => Self::parse(*n, slots, shift.clone()),
            other => Err(Error::Constraint(format!(
                "paths are defined for the boundary_well family, not {}",
                other.family()
            ))),
        }
    }

    pub fn k(&self) -> usize {
        self.slots.len()
    }

    pub fn slot_string(&self) -> String {
        self.slots.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn couplings_at(&self, t: &Rational) -> CouplingVector {
        CouplingVector(self.slots.iter().map(|s| s.at(t)).collect())
    }

    pub fn matrix_at(&self, t: &Rational) -> TriMatrix<Rational> {
        boundary_well(self.n, &self.couplings_at(t).0, self.shift.clone()).expect("validated path")
    }

    pub fn matrix_f64(&self, t: f64) -> TriMatrix<f64> {
        let lambdas: Vec<f64> = self.slots.iter().map(|s| s.at_f64(t)).collect();
        boundary_well(self.n, &lambdas, rational::to_f64(&self.shift)).expect("validated path")
    }

    /// The matrix with entries in `Q[t]`.
    pub fn symbolic_matrix(&self) -> TriMatrix<UniPoly> {
        let lambdas: Vec<UniPoly> = self.slots.iter().map(Slot::as_poly).collect();
        boundary_well(self.n, &lambdas, UniPoly::constant(self.shift.clone())).expect("validated path")
    }
}

impl fmt::Display for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^({})({})", self.n, self.slot_string())?;
        if !self.shift.is_zero() {
            write!(f, " + {}", self.shift)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PathSpecJson {
    #[serde(rename = "N")]
    n: usize,
    slots: String,
    shift: String,
}

impl Serialize for PathSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathSpecJson { n: self.n, slots: self.slot_string(), shift: self.shift.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PathSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PathSpecJson::deserialize(d)?;
        let shift = parse_rational(&j.shift).map_err(serde::de::Error::custom)?;
        PathSpec::parse(j.n, &j.slots, shift).map_err(serde::de::Error::custom)
    }
}

/// Monic secular polynomial `(-1)^N det(H(t) - sI)` in `Q[t][s]`.
pub fn secular_on_path(path: &PathSpec) -> BiPoly {
    let p = charpoly_tridiag(&path.symbolic_matrix());
    if path.n % 2 == 1 {
        -p
    } else {
        p
    }
}

/// Monic secular polynomial of a fixed rational matrix.
pub fn secular(m: &TriMatrix<Rational>) -> UniPoly {
    let p = charpoly_tridiag(m);
    if m.dim() % 2 == 1 {
        -p
    } else {
        p
    }
}

/// Equally spaced grid `lo, lo + step, ..., hi` with exact rational nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
}

impl Grid {
    pub fn new(lo: Rational, hi: Rational, step: Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::Constraint(format!("grid step {step} must be positive")));
        }
        if hi < lo {
            return Err(Error::Constraint(format!("grid upper end {hi} is below lower end {lo}")));
        }
        Ok(Grid { lo, hi, step })
    }

    pub fn len(&self) -> usize {
        ((&self.hi - &self.lo) / &self.step).floor().to_integer().to_usize().unwrap_or(0) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| &self.lo + &self.step * Rational::from_integer(i.into())).collect()
    }

    pub fn points_f64(&self) -> Vec<f64> {
        self.points().iter().map(rational::to_f64).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `lo:hi:step`, each a rational or decimal.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid {text:?} is not lo:hi:step")));
        };
        Grid::new(parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn upoly(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn slot_parsing() {
        assert_eq!("t".parse::<Slot>().unwrap(), Slot::linear(int(1)));
        assert_eq!("-t".parse::<Slot>().unwrap(), Slot::linear(int(-1)));
        assert_eq!("3/2*t".parse::<Slot>().unwrap(), Slot::linear(rat(3, 2)));
        assert_eq!("0.5t".parse::<Slot>().unwrap(), Slot::linear(rat(1, 2)));
        assert_eq!("-9/10".parse::<Slot>().unwrap(), Slot::constant(rat(-9, 10)));
        assert_eq!("-0.9".parse::<Slot>().unwrap(), Slot::constant(rat(-9, 10)));
        assert!("1/t".parse::<Slot>().is_err());
        assert!("t^2".parse::<Slot>().is_err());
        assert!("1/0".parse::<Slot>().is_err());
    }

    #[test]
    fn path_round_trip() {
        let p = PathSpec::parse(11, "t, -t, t, -9/10", int(0)).unwrap();
        assert_eq!(p.slot_string(), "t,-t,t,-9/10");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PathSpec>(&json).unwrap(), p);
        assert!(PathSpec::parse(11, "1/2,1/3", int(0)).is_err());
        assert!(PathSpec::parse(8, "t,t,t,t", int(0)).is_err());
        assert_eq!(PathSpec::parse(5, "", int(0)).unwrap().k(), 0);
    }

    #[test]
    fn grid_nodes() {
        let g: Grid = "-1.5:1.5:0.01".parse().unwrap();
        assert_eq!(g.len(), 301);
        let pts = g.points();
        assert_eq!(pts[150], int(0));
        assert_eq!(pts[300], rat(3, 2));
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("1:0:1/2".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn sweep_path_secular_polynomial() {
        let p = secular_on_path(&PathSpec::parse(11, "t,-t,t,-t", int(0)).unwrap());
        let mut expected = vec![UniPoly::zero(); 12];
        expected[11] = upoly(&[1]);
        expected[9] = upoly(&[-10, 0, 8]);
        expected[7] = upoly(&[36, 0, -58, 0, 22]);
        expected[5] = upoly(&[-56, 0, 136, 0, -104, 0, 24]);
        expected[3] = upoly(&[35, 0, -114, 0, 132, 0, -62, 0, 9]);
        expected[1] = upoly(&[-6, 0, 24, 0, -36, 0, 24, 0, -6]);
        assert_eq!(p, BiPoly::new(expected));
        let mut at_one = vec![int(0); 12];
        at_one[11] = int(1);
        at_one[9] = int(-2);
        assert_eq!(p.eval_inner(&int(1)), UniPoly::new(at_one.clone()));
        assert_eq!(p.eval_inner(&int(-1)), UniPoly::new(at_one));
    }

    #[test]
    fn strongest_unfolding_collapse() {
        let p = secular_on_path(&PathSpec::parse(11, "9/10,-t,t,-t", int(0)).unwrap());
        let mut c = vec![int(0); 12];
        c[11] = int(1);
        c[9] = rat(-119, 50);
        c[7] = rat(7961, 10000);
        c[5] = rat(-361, 5000);
        for t in [int(1), int(-1)] {
            assert_eq!(p.eval_inner(&t), UniPoly::new(c.clone()));
        }
    }

    #[test]
    fn five_site_single_coupling() {
        // -s (s^2 + t^2 - 3)(s^2 + t^2 - 1), made monic.
        let p = secular_on_path(&PathSpec::parse(5, "t", int(0)).unwrap());
        let t2 = |c: i64| UniPoly::new(vec![int(c), int(0), int(1)]);
        let s = BiPoly::new(vec![UniPoly::zero(), UniPoly::one()]);
        let q = |c: i64| BiPoly::new(vec![t2(c), UniPoly::zero(), UniPoly::one()]);
        assert_eq!(p, &(&s * &q(-3)) * &q(-1));
    }

    #[test]
    fn shift_translates_roots() {
        let base = secular_on_path(&PathSpec::parse(3, "t", int(0)).unwrap());
        let shifted = secular_on_path(&PathSpec::parse(3, "t", int(2)).unwrap());
        // p_shift(s) = p_0(s - 2), checked at a few rational points.
        for t in [int(0), rat(1, 3), int(2)] {
            let (a, b) = (base.eval_inner(&t), shifted.eval_inner(&t));
            for s in [int(-1), rat(5, 2), int(7)] {
                assert_eq!(b.eval(&s), a.eval(&(&s - int(2))));
            }
        }
    }

    #[test]
    fn fixed_matrix_secular_is_monic() {
        let m = PathSpec::parse(5, "t", int(0)).unwrap().matrix_at(&rat(1, 2));
        assert_eq!(secular(&m).leading(), Some(&Rational::one()));
    }
}
