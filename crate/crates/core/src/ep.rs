//! Exceptional points on a path: real roots of the discriminant of the
//! secular polynomial, with the root-multiplicity profile at each.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::path::{secular_on_path, PathSpec};
use crate::poly::sqfree::companion_roots;
use crate::poly::{discriminant_in_s, multiplicity_profile, BiPoly, Discriminant, MultiplicityProfile, RootLocation, SturmChain};
use crate::rational::Rational;

/// Width to which irrational roots of the discriminant are isolated.
pub fn isolation_width() -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(10).pow(12u32))
}

/// Two numerical roots closer than this belong to one cluster.
pub const CLUSTER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpStatus {
    Isolated,
    /// The discriminant vanishes identically: multiple roots along the whole path.
    DegenerateDiscriminant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericCluster {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "clusters", rename_all = "snake_case")]
pub enum PointProfile {
    /// Exact multiplicity profile at a rational `t*`.
    Exact(MultiplicityProfile),
    /// Root clusters of the secular polynomial at the midpoint of an
    /// isolating interval.
    Numerical(Vec<NumericCluster>),
}

impl PointProfile {
    pub fn root_count(&self) -> usize {
        match self {
            PointProfile::Exact(p) => p.root_count(),
            PointProfile::Numerical(c) => c.iter().map(|c| c.multiplicity).sum(),
        }
    }

    pub fn max_multiplicity(&self) -> usize {
        match self {
            PointProfile::Exact(p) => p.entries.iter().map(|e| e.multiplicity).max().unwrap_or(0),
            PointProfile::Numerical(c) => c.iter().map(|c| c.multiplicity).max().unwrap_or(0),
        }
    }

    pub fn as_exact(&self) -> Option<&MultiplicityProfile> {
        match self {
            PointProfile::Exact(p) => Some(p),
            PointProfile::Numerical(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpPoint {
    pub location: RootLocation,
    pub approx: f64,
    pub profile: PointProfile,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathSpec>,
    pub status: EpStatus,
    pub discriminant: Discriminant,
    pub points: Vec<EpPoint>,
}

impl EpReport {
    pub fn exact_points(&self) -> impl Iterator<Item = (&Rational, &MultiplicityProfile)> {
        self.points
            .iter()
            .filter_map(|p| Some((p.location.exact()?, p.profile.as_exact()?)))
    }

    pub fn point_at(&self, t: f64) -> Option<&EpPoint> {
        self.points.iter().find(|p| p.location.contains(t))
    }
}

/// Locates every real `t` at which the secular polynomial has a multiple
/// root in `s`.
pub fn ep_on_path(secular: &BiPoly) -> Result<EpReport> {
    let discriminant = discriminant_in_s(secular)?;
    if discriminant.is_identically_zero() {
        return Ok(EpReport { path: None, status: EpStatus::DegenerateDiscriminant, discriminant, points: Vec::new() });
    }
    let roots = SturmChain::new(&discriminant.primitive).isolate(&isolation_width());
    let points = roots
        .into_iter()
        .map(|location| {
            let profile = match location.exact() {
                Some(t) => PointProfile::Exact(multiplicity_profile(&secular.eval_inner(t))),
                None => PointProfile::Numerical(numeric_profile(secular, &location.midpoint())),
            };
            EpPoint { approx: location.approx(), location, profile }
        })
        .collect();
    Ok(EpReport { path: None, status: EpStatus::Isolated, discriminant, points })
}

pub fn ep_for_path(path: &PathSpec) -> Result<EpReport> {
    let mut report = ep_on_path(&secular_on_path(path))?;
    report.path = Some(path.clone());
    Ok(report)
}

/// Clusters the numerical roots of `p(·, t)`; a cluster is a connected
/// component of the "closer than [`CLUSTER_TOL`]" relation.
fn numeric_profile(p: &BiPoly, t: &Rational) -> Vec<NumericCluster> {
    let poly = p.eval_inner(t);
    let lead = poly.leading().cloned().unwrap_or_else(Rational::zero);
    if lead.is_zero() {
        return Vec::new();
    }
    let roots = companion_roots(&poly.to_f64());
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < CLUSTER_TOL * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut label, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<NumericCluster> = groups
        .values()
        .map(|members| {
            let m = members.len() as f64;
            let re = members.iter().map(|&i| roots[i].re).sum::<f64>() / m;
            let im = members.iter().map(|&i| roots[i].im).sum::<f64>() / m;
            NumericCluster { re, im, multiplicity: members.len() }
        })
        .collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UniPoly;
    use crate::rational::{int, rat};
    use num_traits::One;

    fn report(n: usize, slots: &str) -> EpReport {
        ep_for_path(&PathSpec::parse(n, slots, int(0)).unwrap()).unwrap()
    }

    fn approx_points(r: &EpReport) -> Vec<f64> {
        r.points.iter().map(|p| p.approx).collect()
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn five_site_path() {
        // Oracle: disc = 256 (t-1)^3 (t+1)^3 (t^2-3)^3.
        let r = report(5, "t");
        let s3 = 3f64.sqrt();
        assert_close(&approx_points(&r), &[-s3, -1.0, 1.0, s3]);
        let exact: Vec<_> = r.exact_points().map(|(t, _)| t.clone()).collect();
        assert_eq!(exact, vec![int(-1), int(1)]);
        assert!(r.points.iter().all(|p| p.profile.root_count() == 5));
    }

    #[test]
    fn nine_fold_collapse() {
        let r = report(11, "t,-t,t,-t");
        assert_eq!(r.status, EpStatus::Isolated);
        assert_close(&approx_points(&r), &[-1.0, 1.0]);
        for (_, prof) in r.exact_points() {
            assert_eq!(prof.zero_multiplicity(), 9);
            assert_eq!(prof.surd_pair_multiplicity(&int(2)), 1);
            assert_eq!(prof.root_count(), 11);
        }
        assert_eq!(r.exact_points().count(), 2);
    }

    #[test]
    fn strongest_unfolding() {
        let r = report(11, "9/10,-t,t,-t");
        assert_close(
            &approx_points(&r),
            &[-2.70267372607520, -1.83622656983002, -1.17473401244707, -1.0, 1.0, 1.17473401244707, 1.83622656983002, 2.70267372607520],
        );
        for (_, prof) in r.exact_points() {
            assert_eq!(prof.zero_multiplicity(), 5);
            assert_eq!(prof.surd_pair_multiplicity(&rat(19, 100)), 2);
            assert_eq!(prof.surd_pair_multiplicity(&int(2)), 1);
        }
        // At t* = sqrt(69/50) the level s = 0 is triple (oracle: exact
        // factorization over Q(sqrt(69/50))).
        let p = r.point_at(1.17473401244707).unwrap();
        let PointProfile::Numerical(clusters) = &p.profile else { panic!("expected a numerical profile") };
        assert_eq!(p.profile.root_count(), 11);
        assert_eq!(clusters.iter().filter(|c| c.multiplicity > 1).count(), 1);
        let triple = clusters.iter().find(|c| c.multiplicity == 3).unwrap();
        assert!(triple.re.abs() < 1e-3 && triple.im.abs() < 1e-3);
    }

    #[test]
    fn weakest_unfolding() {
        let r = report(11, "t,-t,t,-9/10");
        assert_close(&approx_points(&r), &[-(1.38f64).sqrt(), -1.0, 1.0, (1.38f64).sqrt()]);
        let (_, prof) = r.exact_points().next().unwrap();
        assert_eq!(prof.zero_multiplicity(), 7);
        assert_eq!(prof.surd_pair_multiplicity(&rat(19, 100)), 1);
        assert_eq!(prof.surd_pair_multiplicity(&rat(219, 100)), 1);
    }

    #[test]
    fn soundness_of_exact_points() {
        for slots in ["t", "t,-t", "t,-t,t,-t", "9/10,-t,t,-t", "t,-9/10,t,-t"] {
            let path = PathSpec::parse(11, slots, int(0)).unwrap();
            let sec = secular_on_path(&path);
            for (t, _) in ep_on_path(&sec).unwrap().exact_points() {
                let p = sec.eval_inner(t);
                assert!(p.gcd(&p.derivative()).degree().unwrap() >= 1);
            }
        }
    }

    #[test]
    fn completeness_on_rational_points() {
        let path = PathSpec::parse(7, "t,-t", int(0)).unwrap();
        let sec = secular_on_path(&path);
        let r = ep_on_path(&sec).unwrap();
        for num in -40..=40 {
            let t = rat(num, 20);
            let p = sec.eval_inner(&t);
            if p.gcd(&p.derivative()).degree().unwrap() >= 1 {
                assert!(r.exact_points().any(|(x, _)| *x == t), "missed t = {t}");
            }
        }
    }

    #[test]
    fn degenerate_discriminant_is_flagged() {
        // (s - t)^2 has a double root for every t.
        let s_minus_t = BiPoly::new(vec![UniPoly::from_ints(&[0, -1]), UniPoly::one()]);
        let r = ep_on_path(&(&s_minus_t * &s_minus_t)).unwrap();
        assert_eq!(r.status, EpStatus::DegenerateDiscriminant);
        assert!(r.points.is_empty());
    }

    #[test]
    fn report_serializes() {
        let json = serde_json::to_value(report(5, "t")).unwrap();
        assert_eq!(json["status"], "isolated");
        assert_eq!(json["points"][1]["location"], "-1");
        assert!(json["points"][0]["location"].is_array());
        assert_eq!(json["path"]["slots"], "t");
    }
}
